//! Shared fixtures: random algebras and an independent numeric oracle.
//!
//! The oracle works with dense vectors of rationals at random points and
//! expands μ over ordered index tuples. It shares no code path with the
//! symbolic checkers beyond reading structure constants.
#![allow(dead_code)]

use std::collections::HashMap;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use multinil::algebra::{graded_nilpotent, truncated, zero_algebra, MultilinearAlgebra};
use multinil::exactmath::{ratio, Rational};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small_rational(rng: &mut impl Rng) -> Rational {
    ratio(rng.gen_range(-4..=4), rng.gen_range(1..=3))
}

pub fn point(rng: &mut impl Rng, n: usize) -> Vec<Rational> {
    (0..n).map(|_| ratio(rng.gen_range(-97..=97), rng.gen_range(1..=13))).collect()
}

/// Random algebra with `μ(e_{i…}) ∈ span{e_j : j > max i}`, about half the
/// constants nonzero.
pub fn random_graded(rng: &mut impl Rng, arity: usize, dim: usize) -> MultilinearAlgebra {
    graded_nilpotent(arity, dim, |_, _| {
        if rng.gen_bool(0.5) {
            small_rational(rng)
        } else {
            Rational::zero()
        }
    })
}

/// Random weight-graded algebra: basis vector `i` has weight `weights[i]`
/// (non-decreasing) and `μ` adds weights. Every tree with more leaves than
/// the top weight vanishes, so `T_q ≡ 0` for `q` above it.
pub fn random_weighted(rng: &mut impl Rng, arity: usize, weights: &[usize]) -> MultilinearAlgebra {
    assert!(weights.windows(2).all(|w| w[0] <= w[1]));
    graded_nilpotent(arity, weights.len(), |inputs, out| {
        let w: usize = inputs.iter().map(|&i| weights[i - 1]).sum();
        if w == weights[out - 1] && rng.gen_bool(0.7) {
            small_rational(rng)
        } else {
            Rational::zero()
        }
    })
}

/// The fixed test algebras plus ten seeded random graded-nilpotent ones.
pub fn nil_algebras() -> Vec<(String, MultilinearAlgebra)> {
    let mut out = vec![
        ("Tr(2)".to_string(), truncated(2)),
        ("Tr(3)".to_string(), truncated(3)),
        ("Tr(4)".to_string(), truncated(4)),
        ("zero(2,2)".to_string(), zero_algebra(2, 2)),
        ("zero(3,2)".to_string(), zero_algebra(3, 2)),
    ];
    let mut r = rng(0x5eed);
    for k in 0..10 {
        let (arity, dim) = [(2, 3), (2, 4), (3, 3), (2, 3), (3, 2)][k % 5];
        out.push((format!("graded#{k}({arity},{dim})"), random_graded(&mut r, arity, dim)));
    }
    out
}

/// Dense copy of the structure constants, keyed by sorted 0-based inputs.
pub struct Dense {
    pub arity: usize,
    pub dim: usize,
    table: HashMap<Vec<usize>, Vec<Rational>>,
}

impl Dense {
    pub fn new(alg: &MultilinearAlgebra) -> Self {
        let mut table: HashMap<Vec<usize>, Vec<Rational>> = HashMap::new();
        for e in alg.entries() {
            let key: Vec<usize> = e.inputs.iter().map(|i| i - 1).collect();
            table.entry(key).or_insert_with(|| vec![Rational::zero(); alg.dim()])[e.output - 1] = e.value;
        }
        Dense {
            arity: alg.arity(),
            dim: alg.dim(),
            table,
        }
    }

    /// `μ(args)` by expansion over every ordered index tuple.
    pub fn mu(&self, args: &[&[Rational]]) -> Vec<Rational> {
        assert_eq!(args.len(), self.arity);
        let mut out = vec![Rational::zero(); self.dim];
        let mut idx = vec![0usize; self.arity];
        loop {
            let mut c = Rational::from_integer(1.into());
            for (k, &i) in idx.iter().enumerate() {
                c *= &args[k][i];
                if c.is_zero() {
                    break;
                }
            }
            if !c.is_zero() {
                let mut key = idx.clone();
                key.sort_unstable();
                if let Some(v) = self.table.get(&key) {
                    for (o, val) in out.iter_mut().zip(v) {
                        *o += &c * val;
                    }
                }
            }
            let Some(k) = (0..self.arity).rev().find(|&k| idx[k] + 1 < self.dim) else {
                break;
            };
            idx[k] += 1;
            idx[k + 1..].fill(0);
        }
        out
    }

    fn ad(&self, x: &[Rational], t: &[Rational]) -> Vec<Rational> {
        let mut args: Vec<&[Rational]> = vec![x; self.arity - 1];
        args.push(t);
        self.mu(&args)
    }

    /// `T_1 … T_top` at `x`: `T_q = Σ μ(T_{q_1}, …, T_{q_d})` over ordered
    /// compositions of `q` into `d` positive parts.
    pub fn t_terms(&self, x: &[Rational], top: usize) -> Vec<Vec<Rational>> {
        let mut t: Vec<Vec<Rational>> = vec![x.to_vec()];
        for q in 2..=top {
            let mut acc = vec![Rational::zero(); self.dim];
            for parts in compositions(q, self.arity) {
                let args: Vec<&[Rational]> = parts.iter().map(|&p| t[p - 1].as_slice()).collect();
                for (a, v) in acc.iter_mut().zip(self.mu(&args)) {
                    *a += v;
                }
            }
            t.push(acc);
        }
        t
    }
}

/// Ordered compositions of `q` into `k` positive parts.
pub fn compositions(q: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 1 {
        return if q >= 1 { vec![vec![q]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 1..q {
        for mut rest in compositions(q - first, k - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Every plane (ordered) d-ary tree with `k` internal nodes, evaluated at `x`.
pub fn plane_tree_values(alg: &Dense, x: &[Rational], max_internal: usize) -> Vec<Vec<Vec<Rational>>> {
    let mut by_k: Vec<Vec<Vec<Rational>>> = vec![vec![x.to_vec()]];
    for k in 1..=max_internal {
        let mut vals = Vec::new();
        for parts in weak_compositions(k - 1, alg.arity) {
            let mut choice = vec![0usize; alg.arity];
            loop {
                let args: Vec<&[Rational]> =
                    (0..alg.arity).map(|i| by_k[parts[i]][choice[i]].as_slice()).collect();
                vals.push(alg.mu(&args));
                let Some(i) = (0..alg.arity).rev().find(|&i| choice[i] + 1 < by_k[parts[i]].len()) else {
                    break;
                };
                choice[i] += 1;
                choice[i + 1..].fill(0);
            }
        }
        by_k.push(vals);
    }
    by_k
}

fn weak_compositions(q: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 1 {
        return vec![vec![q]];
    }
    let mut out = Vec::new();
    for first in 0..=q {
        for mut rest in weak_compositions(q - first, k - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

pub fn is_zero(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

const POINTS: usize = 3;

/// Minimal `n ≤ n_max` with `Ad_x^n = 0`, from images of every basis vector
/// at random points.
pub fn engel_oracle(alg: &MultilinearAlgebra, n_max: usize, seed: u64) -> Option<usize> {
    let a = Dense::new(alg);
    let mut r = rng(seed);
    let xs: Vec<Vec<Rational>> = (0..POINTS).map(|_| point(&mut r, a.dim)).collect();
    (1..=n_max).find(|&n| {
        xs.iter().all(|x| {
            (0..a.dim).all(|i| {
                let mut t = vec![Rational::zero(); a.dim];
                t[i] = Rational::from_integer(1.into());
                for _ in 0..n {
                    t = a.ad(x, &t);
                }
                is_zero(&t)
            })
        })
    })
}

/// Minimal `p ≤ p_max` with `T_q(x) = 0` on the window `[p, d(p−1)+1]`.
pub fn yagzhev_oracle(alg: &MultilinearAlgebra, p_max: usize, seed: u64) -> Option<usize> {
    let a = Dense::new(alg);
    let mut r = rng(seed);
    let top = a.arity * (p_max - 1) + 1;
    let terms: Vec<Vec<Vec<Rational>>> = (0..POINTS).map(|_| a.t_terms(&point(&mut r, a.dim), top)).collect();
    (2..=p_max).find(|&p| (p..=a.arity * (p - 1) + 1).all(|q| terms.iter().all(|t| is_zero(&t[q - 1]))))
}

/// Minimal `n ≤ n_max` with every plane tree of internal count in
/// `[n, d(n−1)+1]` vanishing.
pub fn gerstenhaber_oracle(alg: &MultilinearAlgebra, n_max: usize, seed: u64) -> Option<usize> {
    let a = Dense::new(alg);
    let mut r = rng(seed);
    let top = a.arity * (n_max - 1) + 1;
    let values: Vec<Vec<Vec<Vec<Rational>>>> =
        (0..POINTS).map(|_| plane_tree_values(&a, &point(&mut r, a.dim), top)).collect();
    (1..=n_max).find(|&n| {
        (n..=a.arity * (n - 1) + 1).all(|k| values.iter().all(|v| v[k].iter().all(|t| is_zero(t))))
    })
}
