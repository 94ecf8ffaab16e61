//! Polynomial self-maps of `Q^n`: polarization between homogeneous maps and
//! symmetric multilinear algebras, Jacobians, and truncated inverses of
//! `F = Id − H`.

mod checks;

use num_traits::Zero;

use crate::algebra::{gamma, mu, MultilinearAlgebra, SymbolicElement, TensorEntry};
use crate::exactmath::{
    det, factorial, indexed_vars, rat, MathError, MultiPoly, PolyMatrix, Rational, Vars,
};

pub use checks::{
    default_truncation, jacobian_theorem_check, verify_automorphism, AutomorphismReport,
    AutomorphismStatus, JacobianCheckReport, JacobianVerdict,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyMapError {
    #[error("input error: {0}")]
    Input(String),
    #[error(transparent)]
    Math(#[from] MathError),
    #[error(transparent)]
    Algebra(#[from] crate::algebra::AlgebraError),
}

/// `n` polynomial coordinates in `n` variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMap {
    vars: Vars,
    coords: Vec<MultiPoly>,
}

impl PolyMap {
    /// Coordinates must share one ring whose variable count equals their
    /// number; bare constants are lifted into it.
    pub fn new(vars: &Vars, coords: Vec<MultiPoly>) -> Result<Self, PolyMapError> {
        if coords.len() != vars.len() {
            return Err(PolyMapError::Input(format!(
                "{} coordinates for {} variables",
                coords.len(),
                vars.len()
            )));
        }
        let zero = MultiPoly::zero(vars);
        let coords = coords
            .iter()
            .map(|c| zero.checked_add(c))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PolyMap {
            vars: vars.clone(),
            coords,
        })
    }

    pub fn identity(vars: &Vars) -> Self {
        PolyMap {
            vars: vars.clone(),
            coords: (0..vars.len()).map(|i| MultiPoly::var(vars, i)).collect(),
        }
    }

    pub fn zero(vars: &Vars) -> Self {
        PolyMap {
            vars: vars.clone(),
            coords: vec![MultiPoly::zero(vars); vars.len()],
        }
    }

    pub fn n(&self) -> usize {
        self.coords.len()
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn coords(&self) -> &[MultiPoly] {
        &self.coords
    }

    pub fn is_identity(&self) -> bool {
        *self == PolyMap::identity(&self.vars)
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(MultiPoly::is_zero)
    }

    /// `self ∘ inner`, in the variables of `inner`.
    pub fn compose(&self, inner: &PolyMap) -> Result<PolyMap, PolyMapError> {
        if inner.n() != self.n() {
            return Err(PolyMapError::Input("composing maps of different sizes".into()));
        }
        let coords = self
            .coords
            .iter()
            .map(|c| c.substitute(&inner.coords))
            .collect::<Result<Vec<_>, _>>()?;
        PolyMap::new(&inner.vars, coords)
    }

    pub fn sub(&self, other: &PolyMap) -> Result<PolyMap, PolyMapError> {
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a.checked_sub(b))
            .collect::<Result<Vec<_>, _>>()?;
        PolyMap::new(&self.vars, coords)
    }

    pub fn truncate(&self, max_degree: u32) -> PolyMap {
        PolyMap {
            vars: self.vars.clone(),
            coords: self.coords.iter().map(|c| c.truncate(max_degree)).collect(),
        }
    }

    /// Same coordinates over another variable list of equal length.
    pub fn with_vars(&self, vars: &Vars) -> Result<PolyMap, PolyMapError> {
        let coords = self
            .coords
            .iter()
            .map(|c| c.with_vars(vars))
            .collect::<Result<Vec<_>, _>>()?;
        PolyMap::new(vars, coords)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.coords.iter().filter_map(MultiPoly::total_degree).max()
    }
}

/// A map whose coordinates are all homogeneous of one degree `d ≥ 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogeneousMap {
    map: PolyMap,
    degree: u32,
}

impl HomogeneousMap {
    /// Infers the degree; the zero map needs [`HomogeneousMap::with_degree`].
    pub fn new(map: PolyMap) -> Result<Self, PolyMapError> {
        let degree = map
            .coords
            .iter()
            .find_map(MultiPoly::total_degree)
            .ok_or_else(|| PolyMapError::Input("the zero map has no degree; give it explicitly".into()))?;
        HomogeneousMap::with_degree(map, degree)
    }

    pub fn with_degree(map: PolyMap, degree: u32) -> Result<Self, PolyMapError> {
        if degree < 2 {
            return Err(PolyMapError::Input(format!("degree {degree} is below 2")));
        }
        for (i, c) in map.coords.iter().enumerate() {
            if let Some((m, _)) = c.terms().find(|(m, _)| m.degree() != degree) {
                return Err(PolyMapError::Input(format!(
                    "coordinate {} has a term of degree {} in a degree-{degree} map",
                    i + 1,
                    m.degree()
                )));
            }
        }
        Ok(HomogeneousMap { map, degree })
    }

    pub fn map(&self) -> &PolyMap {
        &self.map
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }
}

/// Symmetric multilinear `μ` with `μ(X, …, X) = H(X)`, by inclusion–exclusion:
/// `μ(X_1, …, X_d) = (1/d!)·Σ_{∅≠S⊆[d]} (−1)^{d−|S|} H(Σ_{i∈S} X_i)`.
pub fn polarize(h: &HomogeneousMap) -> Result<MultilinearAlgebra, PolyMapError> {
    let d = h.degree as usize;
    let n = h.map.n();
    let scale = Rational::from_integer(factorial(d)).recip();
    let mut entries = Vec::new();
    let mut tuple = vec![0usize; d];
    loop {
        let mut value = vec![Rational::zero(); n];
        for mask in 1u32..(1 << d) {
            let mut point = vec![Rational::zero(); n];
            for (k, &i) in tuple.iter().enumerate() {
                if mask & (1 << k) != 0 {
                    point[i] += rat(1);
                }
            }
            let sign = if (d - mask.count_ones() as usize).is_multiple_of(2) { rat(1) } else { rat(-1) };
            for (o, c) in h.map.coords.iter().enumerate() {
                value[o] += &sign * c.eval(&point)?;
            }
        }
        for (o, v) in value.into_iter().enumerate() {
            if !v.is_zero() {
                entries.push(TensorEntry {
                    inputs: tuple.iter().map(|i| i + 1).collect(),
                    output: o + 1,
                    value: v * &scale,
                });
            }
        }
        // next non-decreasing tuple
        let Some(k) = (0..d).rev().find(|&k| tuple[k] + 1 < n) else {
            break;
        };
        tuple[k] += 1;
        for j in k + 1..d {
            tuple[j] = tuple[k];
        }
    }
    Ok(MultilinearAlgebra::new(d, n, &entries)?)
}

/// `H(X) = μ(X, …, X)` in variables `X1…Xn`.
pub fn depolarize(alg: &MultilinearAlgebra) -> HomogeneousMap {
    let vars = indexed_vars("X", alg.dim());
    let x = SymbolicElement::generic(&vars, 0, alg.dim());
    let args = vec![&x; alg.arity()];
    let h = mu(alg, &args).expect("dimensions match");
    let map = PolyMap::new(&vars, h.coords().to_vec()).expect("square");
    HomogeneousMap::with_degree(map, alg.arity() as u32).expect("μ(X, …, X) is homogeneous")
}

/// `(∂F_i/∂X_j)`.
pub fn jacobian(f: &PolyMap) -> PolyMatrix {
    let n = f.n();
    let mut m = PolyMatrix::zeros(&f.vars, n, n);
    for (i, c) in f.coords.iter().enumerate() {
        for j in 0..n {
            m.set(i, j, c.derivative(j));
        }
    }
    m
}

pub fn jacobian_det(f: &PolyMap) -> MultiPoly {
    det(&jacobian(f)).expect("square matrix")
}

/// Splits `F = Id − H` with `H` homogeneous of degree `≥ 2`; a zero `H`
/// is returned as `None`.
pub fn split_identity_minus(f: &PolyMap) -> Result<Option<HomogeneousMap>, PolyMapError> {
    let h = PolyMap::identity(&f.vars).sub(f)?;
    if h.is_zero() {
        return Ok(None);
    }
    let low = h
        .coords
        .iter()
        .flat_map(|c| c.terms())
        .find(|(m, _)| m.degree() < 2);
    if let Some((m, _)) = low {
        return Err(PolyMapError::Input(format!(
            "F − Id has a term of degree {}; expected F = Id − H with H homogeneous of degree ≥ 2",
            m.degree()
        )));
    }
    HomogeneousMap::new(h).map(Some).map_err(|e| match e {
        PolyMapError::Input(msg) => PolyMapError::Input(format!("H = Id − F is not homogeneous: {msg}")),
        other => other,
    })
}

/// `G(Y) = Σ_{j=1}^{D} T_j(Y)` for `F = Id − H`, built from the polarized
/// algebra of `H`, in variables `Y1…Yn`.
pub fn formal_inverse(f: &PolyMap, degree_bound: usize) -> Result<PolyMap, PolyMapError> {
    if degree_bound < 1 {
        return Err(PolyMapError::Input("degree bound must be at least 1".into()));
    }
    let yvars = indexed_vars("Y", f.n());
    let Some(h) = split_identity_minus(f)? else {
        return Ok(PolyMap::identity(&yvars));
    };
    let alg = polarize(&h)?;
    let y = SymbolicElement::generic(&yvars, 0, f.n());
    let g = gamma(&alg, &y, degree_bound);
    PolyMap::new(&yvars, g.coords().to_vec())
}

/// `F = Id − depolarize(A)` in variables `X1…Xn`.
pub fn map_of_algebra(alg: &MultilinearAlgebra) -> PolyMap {
    let h = depolarize(alg);
    PolyMap::identity(h.map.vars()).sub(h.map()).expect("same ring")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{cube, truncated, zero_algebra};
    use crate::exactmath::rat;

    fn xvars(n: usize) -> Vars {
        indexed_vars("X", n)
    }

    fn poly(vars: &Vars, terms: &[(&[u32], i64)]) -> MultiPoly {
        MultiPoly::from_terms(vars, terms.iter().map(|(e, c)| (e.to_vec(), rat(*c)))).unwrap()
    }

    fn tr2_map() -> PolyMap {
        let v = xvars(2);
        PolyMap::new(&v, vec![poly(&v, &[(&[1, 0], 1)]), poly(&v, &[(&[0, 1], 1), (&[2, 0], -1)])]).unwrap()
    }

    #[test]
    fn polarize_square_gives_tr2() {
        let v = xvars(2);
        let h = HomogeneousMap::new(PolyMap::new(&v, vec![MultiPoly::zero(&v), poly(&v, &[(&[2, 0], 1)])]).unwrap())
            .unwrap();
        assert_eq!(polarize(&h).unwrap().entries(), truncated(2).entries());
    }

    #[test]
    fn polarize_cube_and_zero() {
        let v = xvars(1);
        let h = HomogeneousMap::new(PolyMap::new(&v, vec![poly(&v, &[(&[3], 1)])]).unwrap()).unwrap();
        assert_eq!(polarize(&h).unwrap(), cube());
        let z = HomogeneousMap::with_degree(PolyMap::zero(&xvars(3)), 2).unwrap();
        assert!(polarize(&z).unwrap().is_zero());
    }

    #[test]
    fn depolarize_examples() {
        let h = depolarize(&truncated(2));
        assert_eq!(h.map().coords()[1].to_string(), "X1^2");
        assert!(h.map().coords()[0].is_zero());
        assert!(depolarize(&zero_algebra(3, 2)).map().is_zero());
    }

    #[test]
    fn non_homogeneous_rejected() {
        let v = xvars(1);
        let m = PolyMap::new(&v, vec![poly(&v, &[(&[2], 1), (&[3], 1)])]).unwrap();
        assert!(HomogeneousMap::new(m).is_err());
    }

    #[test]
    fn jacobian_examples() {
        let f = tr2_map();
        let j = jacobian(&f);
        assert_eq!(j.get(1, 0).to_string(), "-2*X1");
        assert_eq!(jacobian_det(&f), MultiPoly::one(f.vars()));
        let v = xvars(2);
        let swap = PolyMap::new(&v, vec![MultiPoly::var(&v, 1), MultiPoly::var(&v, 0)]).unwrap();
        assert_eq!(jacobian_det(&swap), MultiPoly::constant(&v, rat(-1)));
        let constant = PolyMap::new(&v, vec![MultiPoly::one(&v), MultiPoly::one(&v)]).unwrap();
        assert!(jacobian(&constant).is_zero());
        assert_eq!(jacobian_det(&PolyMap::identity(&v)), MultiPoly::one(&v));
    }

    #[test]
    fn inverse_of_tr2_map() {
        let g = formal_inverse(&tr2_map(), 2).unwrap();
        let shown: Vec<String> = g.coords().iter().map(ToString::to_string).collect();
        assert_eq!(shown, vec!["Y1", "Y1^2 + Y2"]);
        let id = formal_inverse(&PolyMap::identity(&xvars(3)), 4).unwrap();
        assert!(id.is_identity());
    }

    #[test]
    fn inverse_of_tr3_map_is_frozen() {
        let f = map_of_algebra(&truncated(3));
        let g = formal_inverse(&f, 3).unwrap();
        let shown: Vec<String> = g.coords().iter().map(ToString::to_string).collect();
        assert_eq!(shown, vec!["Y1", "Y1^2 + Y2", "2*Y1^3 + 2*Y1*Y2 + Y3"]);
    }

    #[test]
    fn shape_errors() {
        let v = xvars(2);
        let affine = PolyMap::new(&v, vec![&MultiPoly::var(&v, 0) + &MultiPoly::one(&v), MultiPoly::var(&v, 1)])
            .unwrap();
        assert!(formal_inverse(&affine, 2).is_err());
        let mixed = PolyMap::new(
            &v,
            vec![MultiPoly::var(&v, 0), poly(&v, &[(&[0, 1], 1), (&[2, 0], 1), (&[3, 0], 1)])],
        )
        .unwrap();
        assert!(formal_inverse(&mixed, 2).is_err());
    }

    #[test]
    fn compose_and_truncate() {
        let f = tr2_map();
        let g = formal_inverse(&f, 2).unwrap();
        assert!(f.compose(&g).unwrap().is_identity());
        assert!(g.compose(&f).unwrap().truncate(2).is_identity());
    }
}
