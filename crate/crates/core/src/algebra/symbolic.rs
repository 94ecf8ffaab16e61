//! Algebra elements with polynomial coordinates.

use crate::exactmath::{MathError, MultiPoly, Rational, Vars};

/// Vector of `n` polynomial coordinates over one variable list.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymbolicElement {
    vars: Vars,
    coords: Vec<MultiPoly>,
}

impl SymbolicElement {
    pub fn zero(vars: &Vars, n: usize) -> Self {
        SymbolicElement {
            vars: vars.clone(),
            coords: vec![MultiPoly::zero(vars); n],
        }
    }

    /// The basis vector `e_{i+1}` (0-based `i`).
    pub fn basis(vars: &Vars, n: usize, i: usize) -> Self {
        let mut e = SymbolicElement::zero(vars, n);
        e.coords[i] = MultiPoly::one(vars);
        e
    }

    /// Coordinates are the variables `offset, …, offset + n − 1`.
    pub fn generic(vars: &Vars, offset: usize, n: usize) -> Self {
        SymbolicElement {
            vars: vars.clone(),
            coords: (0..n).map(|i| MultiPoly::var(vars, offset + i)).collect(),
        }
    }

    pub fn from_coords(vars: &Vars, coords: Vec<MultiPoly>) -> Result<Self, MathError> {
        if coords.iter().any(|c| c.vars() != vars && !c.vars().is_empty()) {
            return Err(MathError::Input("coordinate in a different ring".into()));
        }
        let coords = coords
            .into_iter()
            .map(|c| &MultiPoly::zero(vars) + &c)
            .collect();
        Ok(SymbolicElement {
            vars: vars.clone(),
            coords,
        })
    }

    /// Constant element with rational coordinates.
    pub fn constant(vars: &Vars, values: &[Rational]) -> Self {
        SymbolicElement {
            vars: vars.clone(),
            coords: values
                .iter()
                .map(|v| MultiPoly::constant(vars, v.clone()))
                .collect(),
        }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[MultiPoly] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> &MultiPoly {
        &self.coords[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(MultiPoly::is_zero)
    }

    /// Index and value of the first nonzero coordinate.
    pub fn first_nonzero(&self) -> Option<(usize, &MultiPoly)> {
        self.coords.iter().enumerate().find(|(_, c)| !c.is_zero())
    }

    pub fn add(&self, other: &SymbolicElement) -> SymbolicElement {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &SymbolicElement) -> SymbolicElement {
        self.zip(other, |a, b| a - b)
    }

    pub fn scale(&self, c: &Rational) -> SymbolicElement {
        SymbolicElement {
            vars: self.vars.clone(),
            coords: self.coords.iter().map(|p| p.scale(c)).collect(),
        }
    }

    pub(crate) fn add_scaled(&mut self, other: &SymbolicElement, c: &Rational) {
        for (a, b) in self.coords.iter_mut().zip(&other.coords) {
            a.add_scaled(b, c);
        }
    }

    fn zip(
        &self,
        other: &SymbolicElement,
        f: impl Fn(&MultiPoly, &MultiPoly) -> MultiPoly,
    ) -> SymbolicElement {
        assert_eq!(self.dim(), other.dim(), "element dimensions differ");
        SymbolicElement {
            vars: self.vars.clone(),
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    /// Coordinates evaluated at a rational point of the variable space.
    pub fn eval(&self, point: &[Rational]) -> Result<Vec<Rational>, MathError> {
        self.coords.iter().map(|c| c.eval(point)).collect()
    }

    /// Replaces each variable by a polynomial (all in one target ring).
    pub fn substitute(&self, values: &[MultiPoly]) -> Result<SymbolicElement, MathError> {
        let coords: Vec<MultiPoly> = self
            .coords
            .iter()
            .map(|c| c.substitute(values))
            .collect::<Result<_, _>>()?;
        let vars = values
            .iter()
            .find(|v| !v.vars().is_empty())
            .map(|v| v.vars().clone())
            .unwrap_or_else(|| self.vars.clone());
        SymbolicElement::from_coords(&vars, coords)
    }

    pub fn truncate(&self, max_degree: u32) -> SymbolicElement {
        SymbolicElement {
            vars: self.vars.clone(),
            coords: self.coords.iter().map(|c| c.truncate(max_degree)).collect(),
        }
    }
}

/// Polynomial ring in the generic coordinates `x1…xn, y1…yn, z1…zn, t1…tn`.
#[derive(Clone, Debug)]
pub struct GenericRing {
    vars: Vars,
    dim: usize,
}

impl GenericRing {
    pub const BLOCKS: [&'static str; 4] = ["x", "y", "z", "t"];

    pub fn new(dim: usize) -> Self {
        let vars: Vars = Self::BLOCKS
            .iter()
            .flat_map(|p| (1..=dim).map(move |i| format!("{p}{i}")))
            .collect();
        GenericRing { vars, dim }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Variable positions of block `b` (0 = x, 1 = y, 2 = z, 3 = t).
    pub fn block(&self, b: usize) -> std::ops::Range<usize> {
        b * self.dim..(b + 1) * self.dim
    }

    pub fn x(&self) -> SymbolicElement {
        SymbolicElement::generic(&self.vars, 0, self.dim)
    }

    pub fn y(&self) -> SymbolicElement {
        SymbolicElement::generic(&self.vars, self.dim, self.dim)
    }

    pub fn z(&self) -> SymbolicElement {
        SymbolicElement::generic(&self.vars, 2 * self.dim, self.dim)
    }

    pub fn t(&self) -> SymbolicElement {
        SymbolicElement::generic(&self.vars, 3 * self.dim, self.dim)
    }

    pub fn zero(&self) -> SymbolicElement {
        SymbolicElement::zero(&self.vars, self.dim)
    }

    pub fn basis(&self, i: usize) -> SymbolicElement {
        SymbolicElement::basis(&self.vars, self.dim, i)
    }
}
