//! Multiplication, Ad powers, the inverse-series terms `T_q`, and the maps
//! `g`, `γ`, `dg`, `dγ` built from them.

use super::symbolic::SymbolicElement;
use super::{AlgebraError, MultilinearAlgebra};
use crate::exactmath::{rat, MultiPoly, PolyMatrix};

/// `μ(args[0], …, args[d−1])`.
pub fn mu(alg: &MultilinearAlgebra, args: &[&SymbolicElement]) -> Result<SymbolicElement, AlgebraError> {
    if args.len() != alg.arity() {
        return Err(AlgebraError::Input(format!(
            "mu takes {} arguments, got {}",
            alg.arity(),
            args.len()
        )));
    }
    if let Some(a) = args.iter().find(|a| a.dim() != alg.dim()) {
        return Err(AlgebraError::Input(format!(
            "argument of dimension {} for an algebra of dimension {}",
            a.dim(),
            alg.dim()
        )));
    }
    Ok(mu_unchecked(alg, args))
}

pub(crate) fn mu_unchecked(alg: &MultilinearAlgebra, args: &[&SymbolicElement]) -> SymbolicElement {
    let vars = args[0].vars().clone();
    let zero = SymbolicElement::zero(&vars, alg.dim());
    if args.iter().any(|a| a.is_zero()) {
        return zero;
    }
    let mut coords: Vec<MultiPoly> = zero.coords().to_vec();
    for p in alg.products() {
        let mut sum = MultiPoly::zero(&vars);
        'orderings: for ord in &p.orderings {
            let mut prod: Option<MultiPoly> = None;
            for (k, &i) in ord.iter().enumerate() {
                let c = args[k].coord(i);
                if c.is_zero() {
                    continue 'orderings;
                }
                prod = Some(match prod {
                    None => c.clone(),
                    Some(acc) => &acc * c,
                });
            }
            if let Some(prod) = prod {
                sum = &sum + &prod;
            }
        }
        if sum.is_zero() {
            continue;
        }
        for (o, v) in &p.outputs {
            coords[*o].add_scaled(&sum, v);
        }
    }
    SymbolicElement::from_coords(&vars, coords).expect("same ring")
}

/// `Ad_x^k(y)`, with `Ad_x(y) = μ(x, …, x, y)`.
pub fn ad_pow(
    alg: &MultilinearAlgebra,
    x: &SymbolicElement,
    k: usize,
    y: &SymbolicElement,
) -> Result<SymbolicElement, AlgebraError> {
    if k < 1 {
        return Err(AlgebraError::Input("Ad power must be at least 1".into()));
    }
    let mut cur = y.clone();
    for _ in 0..k {
        let mut args: Vec<&SymbolicElement> = vec![x; alg.arity() - 1];
        args.push(&cur);
        cur = mu(alg, &args)?;
    }
    Ok(cur)
}

/// Matrix of `Ad_x` in the standard basis: column `j` is `Ad_x(e_j)`.
pub fn ad_matrix(alg: &MultilinearAlgebra, x: &SymbolicElement) -> PolyMatrix {
    let n = alg.dim();
    let vars = x.vars();
    let mut m = PolyMatrix::zeros(vars, n, n);
    for j in 0..n {
        let e = SymbolicElement::basis(vars, n, j);
        let col = ad_pow(alg, x, 1, &e).expect("dimensions match");
        for (i, c) in col.coords().iter().enumerate() {
            m.set(i, j, c.clone());
        }
    }
    m
}

/// Non-increasing `parts`-tuples of positive integers summing to `total`,
/// each with its number of distinct orderings.
pub(crate) fn sorted_compositions(total: usize, parts: usize) -> Vec<(Vec<usize>, u64)> {
    fn rec(rem: usize, parts: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 0 {
            if rem == 0 {
                out.push(cur.clone());
            }
            return;
        }
        if rem < parts {
            return;
        }
        let hi = max.min(rem - (parts - 1));
        for v in (1..=hi).rev() {
            cur.push(v);
            rec(rem - v, parts - 1, v, cur, out);
            cur.pop();
        }
    }
    let mut raw = Vec::new();
    rec(total, parts, total, &mut Vec::new(), &mut raw);
    raw.into_iter()
        .map(|c| {
            let mut count: u64 = (1..=parts as u64).product();
            let mut i = 0;
            while i < c.len() {
                let j = (i..c.len()).find(|&j| c[j] != c[i]).unwrap_or(c.len());
                count /= (1..=(j - i) as u64).product::<u64>();
                i = j;
            }
            (c, count)
        })
        .collect()
}

/// Lazily computed `T_1(x), T_2(x), …` for one base element `x`.
pub struct TSeries<'a> {
    alg: &'a MultilinearAlgebra,
    terms: Vec<SymbolicElement>,
}

impl<'a> TSeries<'a> {
    pub fn new(alg: &'a MultilinearAlgebra, x: &SymbolicElement) -> Self {
        assert_eq!(x.dim(), alg.dim(), "element dimension");
        TSeries {
            alg,
            terms: vec![x.clone()],
        }
    }

    /// `T_q(x)` for `q ≥ 1`.
    pub fn term(&mut self, q: usize) -> &SymbolicElement {
        assert!(q >= 1, "T_q needs q >= 1");
        while self.terms.len() < q {
            let next = self.terms.len() + 1;
            let t = self.compute(next);
            self.terms.push(t);
        }
        &self.terms[q - 1]
    }

    fn compute(&self, q: usize) -> SymbolicElement {
        let d = self.alg.arity();
        let vars = self.terms[0].vars().clone();
        let mut acc = SymbolicElement::zero(&vars, self.alg.dim());
        for (parts, count) in sorted_compositions(q, d) {
            let args: Vec<&SymbolicElement> = parts.iter().map(|&i| &self.terms[i - 1]).collect();
            let p = mu_unchecked(self.alg, &args);
            acc.add_scaled(&p, &rat(count as i64));
        }
        acc
    }
}

/// `T_q(x)`.
pub fn t_term(alg: &MultilinearAlgebra, q: usize, x: &SymbolicElement) -> SymbolicElement {
    TSeries::new(alg, x).term(q).clone()
}

/// `g(x) = x − μ(x, …, x)`.
pub fn g_map(alg: &MultilinearAlgebra, x: &SymbolicElement) -> SymbolicElement {
    let args = vec![x; alg.arity()];
    x.sub(&mu_unchecked(alg, &args))
}

/// `Σ_{j=1}^{D} T_j(y)`.
pub fn gamma(alg: &MultilinearAlgebra, y: &SymbolicElement, degree_bound: usize) -> SymbolicElement {
    assert!(degree_bound >= 1, "degree bound must be at least 1");
    let mut series = TSeries::new(alg, y);
    let mut acc = y.clone();
    for j in 2..=degree_bound {
        acc = acc.add(series.term(j));
    }
    acc
}

/// `dg(x, z) = z − d·Ad_x(z)`.
pub fn dg(alg: &MultilinearAlgebra, x: &SymbolicElement, z: &SymbolicElement) -> SymbolicElement {
    let ad = ad_pow(alg, x, 1, z).expect("dimensions match");
    z.sub(&ad.scale(&rat(alg.arity() as i64)))
}

/// `dγ(y, t) = Σ_{j=1}^{D} dT_j(y; t)`, where `dT_j` is the part of
/// `T_j(y + εt)` linear in `ε`.
pub fn dgamma(
    alg: &MultilinearAlgebra,
    y: &SymbolicElement,
    t: &SymbolicElement,
    degree_bound: usize,
) -> SymbolicElement {
    let mut total = SymbolicElement::zero(y.vars(), alg.dim());
    for e in linearized_terms(alg, y, t, degree_bound) {
        total = total.add(&e);
    }
    total
}

/// `dT_1(y;t), …, dT_D(y;t)`.
pub fn linearized_terms(
    alg: &MultilinearAlgebra,
    y: &SymbolicElement,
    t: &SymbolicElement,
    degree_bound: usize,
) -> Vec<SymbolicElement> {
    assert!(degree_bound >= 1, "degree bound must be at least 1");
    let d = alg.arity();
    let mut base = TSeries::new(alg, y);
    base.term(degree_bound);
    let mut dterms: Vec<SymbolicElement> = vec![t.clone()];
    for q in 2..=degree_bound {
        // μ is symmetric, so the differentiated slot can sit first:
        // dT_q = d · Σ_i Σ_{compositions of q−i into d−1 parts} μ(dT_i, T_…)
        let mut acc = SymbolicElement::zero(y.vars(), alg.dim());
        for i in 1..q {
            if q - i < d - 1 {
                continue;
            }
            for (rest, count) in sorted_compositions(q - i, d - 1) {
                let mut args: Vec<&SymbolicElement> = vec![&dterms[i - 1]];
                args.extend(rest.iter().map(|&r| &base.terms[r - 1]));
                let p = mu_unchecked(alg, &args);
                acc.add_scaled(&p, &rat((count * d as u64) as i64));
            }
        }
        dterms.push(acc);
    }
    dterms
}
