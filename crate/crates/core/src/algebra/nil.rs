//! Engel, Yagzhev and Gerstenhaber nil-index checkers.
//!
//! Every identity is decided by exact vanishing of polynomials in generic
//! coordinates, which is sound over an infinite field.

use serde::{Deserialize, Serialize};

use super::ops::{ad_matrix, mu_unchecked, TSeries};
use super::symbolic::SymbolicElement;
use super::MultilinearAlgebra;
use crate::exactmath::indexed_vars;
use crate::freenil::Tree;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NilKind {
    Engel,
    Yagzhev,
    Gerstenhaber,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NilReport {
    pub kind: NilKind,
    /// Minimal index within `bound`, if any.
    pub index: Option<usize>,
    pub bound: usize,
    /// Degree / internal-node window whose vanishing established `index`.
    pub window: Option<(usize, usize)>,
    /// A nonvanishing value at the bound when no index was found.
    pub witness: Option<String>,
}

fn generic_x(alg: &MultilinearAlgebra) -> SymbolicElement {
    let vars = indexed_vars("x", alg.dim());
    SymbolicElement::generic(&vars, 0, alg.dim())
}

fn describe(label: &str, e: &SymbolicElement) -> Option<String> {
    e.first_nonzero()
        .map(|(i, p)| format!("{label}: coordinate {} = {p}", i + 1))
}

/// Minimal `n ≤ n_max` with `Ad_x^n ≡ 0`, via powers of the matrix of `Ad_x`.
pub fn engel_index(alg: &MultilinearAlgebra, n_max: usize) -> NilReport {
    assert!(n_max >= 1, "n_max must be at least 1");
    let x = generic_x(alg);
    let m = ad_matrix(alg, &x);
    let mut power = m.clone();
    let mut n = 1;
    loop {
        if power.is_zero() {
            return NilReport {
                kind: NilKind::Engel,
                index: Some(n),
                bound: n_max,
                window: Some((n, n)),
                witness: None,
            };
        }
        if n == n_max {
            let (i, j, p) = power.first_nonzero().expect("nonzero power");
            return NilReport {
                kind: NilKind::Engel,
                index: None,
                bound: n_max,
                window: None,
                witness: Some(format!("Ad_x^{n_max} entry ({}, {}) = {p}", i + 1, j + 1)),
            };
        }
        power = power.mul(&m).expect("square");
        n += 1;
    }
}

/// Top of the Yagzhev window for `p`: `d(p − 1) + 1`.
pub fn yagzhev_window_top(arity: usize, p: usize) -> usize {
    arity * (p - 1) + 1
}

/// Minimal `p ≤ p_max` such that `T_q(x) ≡ 0` for all `q ∈ [p, d(p−1)+1]`.
pub fn yagzhev_index(alg: &MultilinearAlgebra, p_max: usize) -> NilReport {
    assert!(p_max >= 2, "p_max must be at least 2");
    let d = alg.arity();
    let x = generic_x(alg);
    let mut series = TSeries::new(alg, &x);
    for p in 2..=p_max {
        let top = yagzhev_window_top(d, p);
        if (p..=top).all(|q| series.term(q).is_zero()) {
            return NilReport {
                kind: NilKind::Yagzhev,
                index: Some(p),
                bound: p_max,
                window: Some((p, top)),
                witness: None,
            };
        }
    }
    let top = yagzhev_window_top(d, p_max);
    let witness = (p_max..=top).find_map(|q| describe(&format!("T_{q}(x)"), series.term(q)));
    NilReport {
        kind: NilKind::Yagzhev,
        index: None,
        bound: p_max,
        window: None,
        witness,
    }
}

/// Whether `T_q(x) ≡ 0` for every `q` in `from..=through`.
pub fn t_vanishes_through(alg: &MultilinearAlgebra, from: usize, through: usize) -> bool {
    let x = generic_x(alg);
    let mut series = TSeries::new(alg, &x);
    (from..=through).all(|q| series.term(q).is_zero())
}

/// Minimal `n ≤ n_max` such that every one-variable tree monomial with
/// internal-node count in `[n, d(n−1)+1]` vanishes at generic `x`.
///
/// Shapes are built only from children that do not vanish: a tree with a
/// vanishing subtree vanishes itself.
pub fn gerstenhaber_index(alg: &MultilinearAlgebra, n_max: usize) -> NilReport {
    assert!(n_max >= 1, "n_max must be at least 1");
    let d = alg.arity();
    let x = generic_x(alg);
    // live[k]: nonvanishing shapes with k internal nodes, with values
    let mut live: Vec<Vec<(Tree, SymbolicElement)>> = vec![vec![(Tree::point(), x)]];
    let grow = |live: &mut Vec<Vec<(Tree, SymbolicElement)>>| {
        let k = live.len();
        let mut out: Vec<(Tree, SymbolicElement)> = Vec::new();
        let mut chosen: Vec<(usize, usize)> = Vec::new();
        live_children(alg, d, k - 1, live, &mut chosen, &mut out);
        out.sort_by(|a, b| a.0.cmp(&b.0));
        live.push(out);
    };
    for n in 1..=n_max {
        let top = d * (n - 1) + 1;
        while live.len() <= top {
            grow(&mut live);
        }
        if (n..=top).all(|k| live[k].is_empty()) {
            return NilReport {
                kind: NilKind::Gerstenhaber,
                index: Some(n),
                bound: n_max,
                window: Some((n, top)),
                witness: None,
            };
        }
    }
    let top = d * (n_max - 1) + 1;
    let witness = (n_max..=top).find_map(|k| {
        live[k]
            .first()
            .and_then(|(shape, v)| describe(&format!("{shape}"), v))
    });
    NilReport {
        kind: NilKind::Gerstenhaber,
        index: None,
        bound: n_max,
        window: None,
        witness,
    }
}

fn live_children(
    alg: &MultilinearAlgebra,
    d: usize,
    remaining: usize,
    live: &[Vec<(Tree, SymbolicElement)>],
    chosen: &mut Vec<(usize, usize)>,
    out: &mut Vec<(Tree, SymbolicElement)>,
) {
    if chosen.len() == d {
        if remaining == 0 {
            let args: Vec<&SymbolicElement> = chosen.iter().map(|&(c, i)| &live[c][i].1).collect();
            let v = mu_unchecked(alg, &args);
            if !v.is_zero() {
                let shape = Tree::node(chosen.iter().map(|&(c, i)| live[c][i].0.clone()).collect());
                out.push((shape, v));
            }
        }
        return;
    }
    let (min_c, min_i) = chosen.last().copied().unwrap_or((0, 0));
    for c in min_c..=remaining {
        let start = if c == min_c { min_i } else { 0 };
        for i in start..live[c].len() {
            chosen.push((c, i));
            live_children(alg, d, remaining - c, live, chosen, out);
            chosen.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{cube, truncated, zero_algebra};

    fn indices(a: &MultilinearAlgebra) -> (Option<usize>, Option<usize>, Option<usize>) {
        (
            engel_index(a, 6).index,
            yagzhev_index(a, 7).index,
            gerstenhaber_index(a, 6).index,
        )
    }

    #[test]
    fn truncated_two_and_three() {
        assert_eq!(indices(&truncated(2)), (Some(2), Some(3), Some(2)));
        assert_eq!(indices(&truncated(3)), (Some(3), Some(4), Some(3)));
    }

    #[test]
    fn zero_algebra_indices() {
        for d in [2, 3] {
            assert_eq!(indices(&zero_algebra(d, 2)), (Some(1), Some(2), Some(1)));
        }
    }

    #[test]
    fn yagzhev_report_records_window() {
        let r = yagzhev_index(&truncated(2), 6);
        assert_eq!(r.window, Some((3, 5)));
        let r = yagzhev_index(&truncated(3), 6);
        assert_eq!(r.window, Some((4, 7)));
    }

    #[test]
    fn cube_algebra_is_not_nil() {
        let a = cube();
        let e = engel_index(&a, 4);
        assert_eq!(e.index, None);
        assert!(e.witness.unwrap().contains("x1^8"));
        let y = yagzhev_index(&a, 4);
        assert_eq!(y.index, None);
        assert!(y.witness.is_some());
        let g = gerstenhaber_index(&a, 3);
        assert_eq!(g.index, None);
        assert!(g.witness.is_some());
    }
}
