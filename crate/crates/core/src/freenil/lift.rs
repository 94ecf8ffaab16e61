//! Modular elimination and multi-modular lifting of combination
//! coefficients to the rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exactmath::{Rational, SparseVec};

/// Primes just below `2^62`, in decreasing order.
pub(crate) fn primes() -> impl Iterator<Item = u64> {
    let mut n = (1u64 << 62) - 1;
    std::iter::from_fn(move || {
        while !is_prime(n) {
            n -= 2;
        }
        let p = n;
        n -= 2;
        Some(p)
    })
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

/// Deterministic Miller–Rabin for 64-bit inputs.
fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn reduce_bigint(v: &BigInt, p: u64) -> u64 {
    let r = v.mod_floor(&BigInt::from(p));
    r.to_u64().expect("residue fits")
}

/// Image of a rational modulo `p`, if its denominator is a unit.
pub(crate) fn rational_mod(r: &Rational, p: u64) -> Option<u64> {
    let den = reduce_bigint(r.denom(), p);
    if den == 0 {
        return None;
    }
    Some(mul_mod(reduce_bigint(r.numer(), p), inv_mod(den, p), p))
}

pub(crate) fn row_mod(r: &SparseVec<Rational>, p: u64) -> Option<Vec<(u32, u64)>> {
    r.entries()
        .iter()
        .map(|(c, v)| rational_mod(v, p).map(|m| (*c, m)))
        .filter(|e| e.as_ref().is_none_or(|(_, m)| *m != 0))
        .collect()
}

/// Semi-echelon form modulo `p` with a dense scratch row. Rows are stored
/// sparse with leading coefficient 1; a new row is reduced against every
/// existing pivot before it is stored.
pub(crate) struct DenseModEchelon {
    p: u64,
    rows: Vec<Vec<(u32, u64)>>,
    pivot_of_col: Vec<u32>,
    scratch: Vec<u64>,
    /// Per stored row: the inverse of the leading coefficient and the
    /// multiples of earlier rows subtracted while reducing it.
    history: Option<Vec<Reduction>>,
}

/// Inverse leading coefficient and `(row, multiple)` pairs subtracted.
type Reduction = (u64, Vec<(u32, u64)>);

const NO_PIVOT: u32 = u32::MAX;

impl DenseModEchelon {
    pub(crate) fn new(ncols: usize, p: u64, track: bool) -> Self {
        DenseModEchelon {
            p,
            rows: Vec::new(),
            pivot_of_col: vec![NO_PIVOT; ncols],
            scratch: vec![0; ncols],
            history: track.then(Vec::new),
        }
    }

    #[cfg(test)]
    pub(crate) fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` in the scratch row; returns the multiples subtracted.
    fn reduce(&mut self, v: &[(u32, u64)]) -> Vec<(u32, u64)> {
        let p = self.p;
        let Some(&(start, _)) = v.first() else {
            return Vec::new();
        };
        for &(c, x) in v {
            self.scratch[c as usize] = x;
        }
        let mut used = Vec::new();
        for c in start as usize..self.scratch.len() {
            let f = self.scratch[c];
            if f == 0 {
                continue;
            }
            let r = self.pivot_of_col[c];
            if r == NO_PIVOT {
                continue;
            }
            used.push((r, f));
            for &(cc, x) in &self.rows[r as usize] {
                let s = &mut self.scratch[cc as usize];
                let sub = mul_mod(f, x, p);
                *s = if *s >= sub { *s - sub } else { *s + p - sub };
            }
        }
        used
    }

    fn drain_scratch(&mut self, from: u32) -> Vec<(u32, u64)> {
        let mut out = Vec::new();
        for c in from as usize..self.scratch.len() {
            let x = std::mem::take(&mut self.scratch[c]);
            if x != 0 {
                out.push((c as u32, x));
            }
        }
        out
    }

    /// Adds `v`; `false` when it is already in the span.
    pub(crate) fn insert(&mut self, v: &[(u32, u64)]) -> bool {
        let Some(&(start, _)) = v.first() else {
            return false;
        };
        let used = self.reduce(v);
        let rest = self.drain_scratch(start);
        let Some(&(lead_col, lead)) = rest.first() else {
            return false;
        };
        let inv = inv_mod(lead, self.p);
        let row = rest.into_iter().map(|(c, x)| (c, mul_mod(x, inv, self.p))).collect();
        self.pivot_of_col[lead_col as usize] = self.rows.len() as u32;
        self.rows.push(row);
        if let Some(h) = self.history.as_mut() {
            h.push((inv, used));
        }
        true
    }

    /// Coefficients `c` with `Σ c_i · inserted_i = v` over the inserted
    /// (independent) rows, or `None` if `v` is outside the span. Requires
    /// tracking and that every inserted row was independent.
    pub(crate) fn solve(&mut self, v: &[(u32, u64)]) -> Option<Vec<u64>> {
        let p = self.p;
        let Some(&(start, _)) = v.first() else {
            return Some(vec![0; self.rows.len()]);
        };
        let used = self.reduce(v);
        if !self.drain_scratch(start).is_empty() {
            return None;
        }
        // v = Σ g_k E_k, and E_i = s_i·(R_i − Σ a_ik E_k) with k < i
        let mut g = vec![0u64; self.rows.len()];
        for (r, f) in used {
            g[r as usize] = (g[r as usize] + f) % p;
        }
        let history = self.history.as_ref().expect("tracking enabled");
        let mut c = vec![0u64; self.rows.len()];
        for i in (0..self.rows.len()).rev() {
            if g[i] == 0 {
                continue;
            }
            let (s, ref used) = history[i];
            let gi = mul_mod(g[i], s, p);
            c[i] = gi;
            for &(k, a) in used {
                let sub = mul_mod(gi, a, p);
                let gk = &mut g[k as usize];
                *gk = if *gk >= sub { *gk - sub } else { *gk + p - sub };
            }
        }
        Some(c)
    }
}

/// Rational `a/b ≡ x (mod m)` with `|a|, b ≤ sqrt(m/2)`.
fn rational_reconstruct(x: &BigInt, m: &BigInt) -> Option<Rational> {
    let bound = (m >> 1u32).sqrt();
    let (mut r0, mut r1) = (m.clone(), x.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let (qt, r2) = r0.div_rem(&r1);
        let t2 = &t0 - &qt * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    if !r1.gcd(&t1).is_one() {
        return None;
    }
    Some(Rational::new(r1, t1))
}

/// Upper limit on primes tried before giving up on lifting.
const MAX_PRIMES: usize = 256;

/// Solves `Σ c_i · rows_i = target` over the rationals for linearly
/// independent `rows` by Chinese remaindering modular solutions, returning
/// the nonzero coefficients. `None` when the target is outside the span
/// modulo the first usable prime or lifting does not stabilize; callers
/// must re-verify the returned combination exactly.
pub(crate) fn solve_by_lifting(
    rows: &[SparseVec<Rational>],
    target: &SparseVec<Rational>,
) -> Option<Vec<(usize, Rational)>> {
    let ncols = rows
        .iter()
        .chain(std::iter::once(target))
        .filter_map(SparseVec::max_col)
        .max()
        .map_or(0, |c| c as usize + 1);
    let mut modulus = BigInt::one();
    let mut residues: Vec<BigInt> = vec![BigInt::zero(); rows.len()];
    let mut previous: Option<Vec<Rational>> = None;
    for p in primes().take(MAX_PRIMES) {
        let Some(sol) = solve_mod(rows, target, ncols, p) else {
            if modulus.is_one() {
                return None;
            }
            continue;
        };
        // x ≡ a (mod M), x ≡ b (mod p)
        let pm = BigInt::from(p);
        let m_inv = inv_mod(reduce_bigint(&modulus, p), p);
        for (a, &b) in residues.iter_mut().zip(&sol) {
            let a_mod = reduce_bigint(a, p);
            let diff = if b >= a_mod { b - a_mod } else { b + p - a_mod };
            let k = mul_mod(diff, m_inv, p);
            *a += &modulus * BigInt::from(k);
        }
        modulus *= &pm;
        let lifted: Option<Vec<Rational>> = residues
            .iter()
            .map(|r| rational_reconstruct(r, &modulus))
            .collect();
        if let Some(values) = lifted {
            if previous.as_ref() == Some(&values) {
                return Some(
                    values
                        .into_iter()
                        .enumerate()
                        .filter(|(_, v)| !v.is_zero())
                        .collect(),
                );
            }
            previous = Some(values);
        }
    }
    None
}

fn solve_mod(rows: &[SparseVec<Rational>], target: &SparseVec<Rational>, ncols: usize, p: u64) -> Option<Vec<u64>> {
    let mut ech = DenseModEchelon::new(ncols, p, true);
    for r in rows {
        let img = row_mod(r, p)?;
        if !ech.insert(&img) {
            // dependent modulo this prime
            return None;
        }
    }
    ech.solve(&row_mod(target, p)?)
}
