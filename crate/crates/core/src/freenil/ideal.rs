//! Multilinear components of the consequence ideal of `T_j ≡ 0` identities.
//!
//! Degree by degree, the ideal component is spanned by substitution
//! instances of the polarized generators and by single-node wraps
//! `node(a, w_1, …, w_{d−1})` of ideal elements `a` of smaller degree.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::Arc;

use num_traits::{One, Zero};
use rayon::prelude::*;

use super::element::{polarize_t, MultilinearElement, TreeBasis};
use super::tree::{admissible_size, enumerate_trees, for_each_subset, set_partitions, Tree};
use super::{lift, FreeNilError};
use crate::exactmath::{Membership, Rational, SparseEchelon, SparseVec};

/// Default cap on the number of basis trees of one component.
pub const DEFAULT_MAX_BASIS_TREES: usize = 25_000;

#[derive(Clone, Debug)]
pub struct SpanOptions {
    pub max_basis_trees: usize,
    /// Select independent spanning rows modulo a prime before any exact
    /// work; certificates are still exact.
    pub prescreen: bool,
}

impl Default for SpanOptions {
    fn default() -> Self {
        SpanOptions {
            max_basis_trees: DEFAULT_MAX_BASIS_TREES,
            prescreen: false,
        }
    }
}

/// Number of trees on `q` labels, counted by the sizes of the root's
/// child blocks (no enumeration).
pub fn component_dimension(d: usize, q: usize) -> u128 {
    assert!(d >= 2);
    // a[m]: trees on m labels; ordered child tuples with sizes (m_1..m_d)
    // contribute multinomial(m; m_i)·Π a[m_i], and each unordered root is
    // counted d! times
    let mut a = vec![0u128; q + 1];
    if q == 0 {
        return 0;
    }
    a[1] = 1;
    let binom = binomials(q);
    let fact_d: u128 = (1..=d as u128).product();
    for m in 2..=q {
        if !admissible_size(d, m) {
            continue;
        }
        // ordered[k][s]: Σ over ordered k-tuples of sizes summing to s of
        // multinomial·Π a, built one child at a time
        let mut ordered = vec![0u128; m + 1];
        ordered[0] = 1;
        for _ in 0..d {
            let mut next = vec![0u128; m + 1];
            for (s, &v) in ordered.iter().enumerate() {
                if v == 0 {
                    continue;
                }
                for k in 1..=m - s {
                    if a[k] != 0 && k < m {
                        next[s + k] += v * binom[s + k][k] * a[k];
                    }
                }
            }
            ordered = next;
        }
        a[m] = ordered[m] / fact_d;
    }
    a[q]
}

fn binomials(n: usize) -> Vec<Vec<u128>> {
    let mut b = vec![vec![0u128; n + 1]; n + 1];
    for i in 0..=n {
        b[i][0] = 1;
        for j in 1..=i {
            b[i][j] = b[i - 1][j - 1] + b[i - 1][j];
        }
    }
    b
}

/// Exact basis of one ideal component, in reduced row echelon form over the
/// canonical tree basis.
#[derive(Debug)]
pub struct IdealBasis {
    arity: usize,
    degree: usize,
    generators: Vec<usize>,
    space: Arc<TreeBasis>,
    echelon: SparseEchelon<Rational>,
}

impl IdealBasis {
    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn space(&self) -> &Arc<TreeBasis> {
        &self.space
    }

    pub fn rank(&self) -> usize {
        self.echelon.rank()
    }

    pub fn rows(&self) -> &[SparseVec<Rational>] {
        self.echelon.rows()
    }

    pub fn row_element(&self, i: usize) -> MultilinearElement {
        MultilinearElement::from_sparse(&self.space, &self.echelon.rows()[i])
    }

    pub fn is_rref(&self) -> bool {
        self.echelon.is_rref()
    }

    /// Exact membership with a combination of basis rows as certificate.
    pub fn contains(&self, e: &MultilinearElement) -> Result<Certificate, FreeNilError> {
        let target = self.coordinates(e)?;
        let Membership {
            member,
            coefficients,
            ..
        } = self.echelon.contains(&target)?;
        let verified = member && self.echelon.verify_combination(&coefficients, &target);
        Ok(Certificate::from_parts(member, verified, coefficients, &target))
    }

    fn coordinates(&self, e: &MultilinearElement) -> Result<SparseVec<Rational>, FreeNilError> {
        if e.degree() != self.degree {
            return Err(FreeNilError::Input(format!(
                "element of degree {} tested against a degree-{} component",
                e.degree(),
                self.degree
            )));
        }
        e.to_sparse(&self.space).ok_or_else(|| {
            FreeNilError::Input(format!("element is not a combination of arity-{} trees", self.arity))
        })
    }
}

/// Linearly independent exact spanning rows of an ideal component,
/// selected modulo a prime. Independence mod p implies independence over
/// the rationals, so `rank` is a lower bound that is exact for all but
/// finitely many primes.
#[derive(Debug)]
pub struct IdealRows {
    arity: usize,
    degree: usize,
    generators: Vec<usize>,
    space: Arc<TreeBasis>,
    rows: Vec<SparseVec<Rational>>,
}

impl IdealRows {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn space(&self) -> &Arc<TreeBasis> {
        &self.space
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVec<Rational>] {
        &self.rows
    }

    /// Membership decided modulo primes; a positive answer is lifted to
    /// rational coefficients and re-verified exactly. If lifting fails the
    /// exact echelon form of the selected rows decides.
    pub fn contains(&self, e: &MultilinearElement) -> Result<Certificate, FreeNilError> {
        if e.degree() != self.degree {
            return Err(FreeNilError::Input(format!(
                "element of degree {} tested against a degree-{} component",
                e.degree(),
                self.degree
            )));
        }
        let target = e
            .to_sparse(&self.space)
            .ok_or_else(|| FreeNilError::Input("element outside the tree basis".into()))?;
        if let Some(coefficients) = lift::solve_by_lifting(&self.rows, &target) {
            let verified = verify_sum(&self.rows, &coefficients, &target);
            if verified {
                return Ok(Certificate::from_parts(true, true, coefficients, &target));
            }
        }
        // exact fallback
        match express_in_rows(&self.rows, &target) {
            Some(coefficients) => {
                let verified = verify_sum(&self.rows, &coefficients, &target);
                Ok(Certificate::from_parts(true, verified, coefficients, &target))
            }
            None => Ok(Certificate::from_parts(false, false, Vec::new(), &target)),
        }
    }
}

/// Writes `target` as a combination of the independent `rows`, by
/// elimination with each echelon row carrying its combination of inputs.
fn express_in_rows(
    rows: &[SparseVec<Rational>],
    target: &SparseVec<Rational>,
) -> Option<Vec<(usize, Rational)>> {
    let mut ech: Vec<(SparseVec<Rational>, SparseVec<Rational>)> = Vec::new();
    let mut pivots: HashMap<u32, usize> = HashMap::new();
    for (i, r) in rows.iter().enumerate() {
        let mut v = r.clone();
        let mut comb = SparseVec::from_entries(vec![(i as u32, Rational::one())]);
        reduce_tracked(&ech, &pivots, &mut v, &mut comb);
        if let Some((c, lead)) = v.entries().first().cloned() {
            let inv = lead.recip();
            pivots.insert(c, ech.len());
            ech.push((v.scale(&inv), comb.scale(&inv)));
        }
    }
    let mut v = target.clone();
    let mut comb = SparseVec::new();
    reduce_tracked(&ech, &pivots, &mut v, &mut comb);
    if !v.is_zero() {
        return None;
    }
    // comb accumulated −Σ f·row
    Some(comb.entries().iter().map(|(i, f)| (*i as usize, -f)).collect())
}

fn reduce_tracked(
    ech: &[(SparseVec<Rational>, SparseVec<Rational>)],
    pivots: &HashMap<u32, usize>,
    v: &mut SparseVec<Rational>,
    comb: &mut SparseVec<Rational>,
) {
    while let Some((r, f)) = v
        .entries()
        .iter()
        .find_map(|(c, f)| pivots.get(c).map(|&r| (r, -f)))
    {
        *v = v.add_scaled(&f, &ech[r].0);
        *comb = comb.add_scaled(&f, &ech[r].1);
    }
}

/// Dense accumulation of `Σ coefficient·row`, compared with `target`.
fn verify_sum(rows: &[SparseVec<Rational>], coefficients: &[(usize, Rational)], target: &SparseVec<Rational>) -> bool {
    let mut acc: BTreeMap<u32, Rational> = BTreeMap::new();
    for (i, f) in coefficients {
        let Some(r) = rows.get(*i) else {
            return false;
        };
        for (c, v) in r.entries() {
            *acc.entry(*c).or_insert_with(Rational::zero) += f * v;
        }
    }
    acc.retain(|_, v| !v.is_zero());
    acc.len() == target.nnz() && target.entries().iter().all(|(c, v)| acc.get(c) == Some(v))
}

/// Result of an exact membership query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub member: bool,
    /// The combination re-summed exactly to the target.
    pub verified: bool,
    /// `(row index, coefficient)` with `Σ coefficient·row = target`.
    pub coefficients: Vec<(usize, Rational)>,
    /// SHA-256 of the target coordinates and the combination.
    pub digest: String,
}

impl Certificate {
    /// Membership of the zero element.
    pub(crate) fn trivial() -> Self {
        Certificate::from_parts(true, true, Vec::new(), &SparseVec::new())
    }

    pub(crate) fn from_parts(member: bool, verified: bool, coefficients: Vec<(usize, Rational)>, target: &SparseVec<Rational>) -> Self {
        let digest = if member {
            certificate_digest(&coefficients, target)
        } else {
            String::new()
        };
        Certificate {
            member,
            verified,
            coefficients,
            digest,
        }
    }
}

fn certificate_digest(coefficients: &[(usize, Rational)], target: &SparseVec<Rational>) -> String {
    use sha2::{Digest, Sha256};
    let mut h = Sha256::new();
    for (c, v) in target.entries() {
        h.update(format!("t{c}:{v};"));
    }
    for (i, v) in coefficients {
        h.update(format!("r{i}:{v};"));
    }
    hex::encode(h.finalize())
}

/// Generator elements by degree, on labels `1..=j`.
fn generator_elements(d: usize, gens: &[usize]) -> Vec<(usize, Vec<(Tree, Rational)>)> {
    gens.iter()
        .map(|&j| {
            let e = polarize_t(d, j);
            (j, e.terms().map(|(t, c)| (t.clone(), c.clone())).collect())
        })
        .collect()
}

fn checked_generators(d: usize, q: usize, gens: &[usize]) -> Result<Vec<usize>, FreeNilError> {
    if d < 2 {
        return Err(FreeNilError::Input(format!("arity {d} is below 2")));
    }
    if !admissible_size(d, q) {
        return Err(FreeNilError::Input(format!(
            "degree {q} is not ≡ 1 (mod {}); the component is empty",
            d - 1
        )));
    }
    let mut g: Vec<usize> = gens.to_vec();
    g.sort_unstable();
    g.dedup();
    for &j in &g {
        if !admissible_size(d, j) || j > q || j < 2 {
            return Err(FreeNilError::Input(format!(
                "generator degree {j} must satisfy 2 ≤ j ≤ {q} and j ≡ 1 (mod {})",
                d - 1
            )));
        }
    }
    Ok(g)
}

fn check_cap(d: usize, q: usize, cap: usize) -> Result<(), FreeNilError> {
    let trees = component_dimension(d, q);
    if trees > cap as u128 {
        return Err(FreeNilError::ResourceCap {
            degree: q,
            trees,
            cap,
        });
    }
    Ok(())
}

/// One degree's result, kept for wrapping into higher degrees.
struct Stage {
    degree: usize,
    space: Arc<TreeBasis>,
    rows: Vec<SparseVec<Rational>>,
}

/// Exact reduced basis of the degree-`q` component of the ideal generated
/// by the polarized `T_j`, `j ∈ gens`.
pub fn ideal_span(d: usize, q: usize, gens: &[usize]) -> Result<IdealBasis, FreeNilError> {
    ideal_span_with(d, q, gens, &SpanOptions::default())
}

pub fn ideal_span_with(d: usize, q: usize, gens: &[usize], opts: &SpanOptions) -> Result<IdealBasis, FreeNilError> {
    let gens = checked_generators(d, q, gens)?;
    check_cap(d, q, opts.max_basis_trees)?;
    let stages = build_stages(d, q, &gens, opts, StageMode::Exact)?;
    let top = stages.into_iter().last();
    let (space, echelon) = match top {
        Some(s) if s.degree == q => {
            let mut ech = SparseEchelon::new(s.space.len());
            for r in &s.rows {
                ech.insert(r)?;
            }
            (s.space, ech.into_rref())
        }
        _ => {
            let space = TreeBasis::new(d, q);
            let n = space.len();
            (space, SparseEchelon::new(n))
        }
    };
    Ok(IdealBasis {
        arity: d,
        degree: q,
        generators: gens,
        space,
        echelon,
    })
}

/// Independent exact spanning rows selected modulo a prime.
pub fn ideal_rows(d: usize, q: usize, gens: &[usize], opts: &SpanOptions) -> Result<IdealRows, FreeNilError> {
    let gens = checked_generators(d, q, gens)?;
    check_cap(d, q, opts.max_basis_trees)?;
    let stages = build_stages(d, q, &gens, opts, StageMode::Modular)?;
    let (space, rows) = match stages.into_iter().last() {
        Some(s) if s.degree == q => (s.space, s.rows),
        _ => (TreeBasis::new(d, q), Vec::new()),
    };
    Ok(IdealRows {
        arity: d,
        degree: q,
        generators: gens,
        space,
        rows,
    })
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum StageMode {
    /// Stage rows are the exact reduced basis.
    Exact,
    /// Stage rows are a mod-p independent subset of the spanning rows.
    Modular,
}

fn build_stages(
    d: usize,
    q: usize,
    gens: &[usize],
    _opts: &SpanOptions,
    mode: StageMode,
) -> Result<Vec<Stage>, FreeNilError> {
    let generators = generator_elements(d, gens);
    let mut stages: Vec<Stage> = Vec::new();
    let Some(&lowest) = gens.first() else {
        return Ok(stages);
    };
    for m in (lowest..=q).filter(|&m| admissible_size(d, m)) {
        let space = TreeBasis::new(d, m);
        let spanning = spanning_rows(d, m, &space, &generators, &stages);
        let rows = match mode {
            StageMode::Exact => {
                let mut ech = SparseEchelon::new(space.len());
                for r in &spanning {
                    ech.insert(r)?;
                }
                ech.into_rref().rows().to_vec()
            }
            StageMode::Modular => select_independent(&spanning, space.len())?,
        };
        stages.push(Stage {
            degree: m,
            space,
            rows,
        });
    }
    Ok(stages)
}

/// Rows that are independent modulo the fixed prime, in input order.
fn select_independent(rows: &[SparseVec<Rational>], ncols: usize) -> Result<Vec<SparseVec<Rational>>, FreeNilError> {
    let p = lift::primes().next().expect("a prime");
    let images: Vec<Vec<(u32, u64)>> = rows
        .par_iter()
        .map(|r| lift::row_mod(r, p))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| FreeNilError::Input("a coefficient denominator vanishes modulo the prime".into()))?;
    let mut ech = lift::DenseModEchelon::new(ncols, p, false);
    let mut out = Vec::new();
    for (r, img) in rows.iter().zip(&images) {
        if ech.insert(img) {
            out.push(r.clone());
        }
    }
    Ok(out)
}

/// Spanning set of the degree-`m` component: generator instances and
/// wraps of lower stages, deduplicated up to scaling.
fn spanning_rows(
    d: usize,
    m: usize,
    space: &TreeBasis,
    generators: &[(usize, Vec<(Tree, Rational)>)],
    stages: &[Stage],
) -> Vec<SparseVec<Rational>> {
    let labels: Vec<u32> = (1..=m as u32).collect();
    let mut rows: Vec<SparseVec<Rational>> = Vec::new();

    for (j, gen) in generators.iter().filter(|(j, _)| *j <= m) {
        let partitions = set_partitions(&labels, *j, &|n| admissible_size(d, n));
        let batch: Vec<Vec<SparseVec<Rational>>> = partitions
            .par_iter()
            .map(|blocks| {
                let choices: Vec<Vec<Tree>> = blocks.iter().map(|b| enumerate_trees(d, b)).collect();
                let mut out = Vec::new();
                each_choice(&choices, &mut |picked| {
                    let entries = gen
                        .iter()
                        .map(|(t, c)| {
                            let g = t.graft(&|l| picked[(l - 1) as usize].clone());
                            (space.index(&g).expect("instance lies in the component"), c.clone())
                        })
                        .collect();
                    out.push(SparseVec::from_entries(entries));
                });
                out
            })
            .collect();
        rows.extend(batch.into_iter().flatten());
    }

    for stage in stages {
        let rest = m - stage.degree;
        if stage.rows.is_empty() || !fits_wrap(d, rest) {
            continue;
        }
        let mut subsets: Vec<(Vec<u32>, Vec<u32>)> = Vec::new();
        for_each_subset(&labels, stage.degree, &mut |inside, outside| {
            subsets.push((inside.to_vec(), outside.to_vec()));
        });
        let batch: Vec<Vec<SparseVec<Rational>>> = subsets
            .par_iter()
            .map(|(inside, outside)| {
                let relabeled: Vec<Tree> = stage
                    .space
                    .trees()
                    .iter()
                    .map(|t| t.relabel(&|l| inside[(l - 1) as usize]))
                    .collect();
                let mut out = Vec::new();
                for blocks in set_partitions(outside, d - 1, &|n| admissible_size(d, n)) {
                    let choices: Vec<Vec<Tree>> = blocks.iter().map(|b| enumerate_trees(d, b)).collect();
                    each_choice(&choices, &mut |siblings| {
                        // column map for this wrap, shared by all stage rows
                        let wrap = |col: u32| {
                            let mut children = Vec::with_capacity(d);
                            children.push(relabeled[col as usize].clone());
                            children.extend(siblings.iter().cloned());
                            space.index(&Tree::node(children)).expect("wrap lies in the component")
                        };
                        for r in &stage.rows {
                            let entries = r.entries().iter().map(|(c, v)| (wrap(*c), v.clone())).collect();
                            out.push(SparseVec::from_entries(entries));
                        }
                    });
                }
                out
            })
            .collect();
        rows.extend(batch.into_iter().flatten());
    }
    dedup_rows(rows)
}

/// `rest` leaves split into `d − 1` admissible blocks.
fn fits_wrap(d: usize, rest: usize) -> bool {
    // d−1 blocks of sizes ≡ 1 (mod d−1) sum to ≡ 0 (mod d−1)
    rest >= d - 1 && rest.is_multiple_of(d - 1)
}

fn each_choice(choices: &[Vec<Tree>], f: &mut dyn FnMut(&[Tree])) {
    let mut picked: Vec<Tree> = Vec::with_capacity(choices.len());
    choice_rec(choices, &mut picked, f);
}

fn choice_rec(choices: &[Vec<Tree>], picked: &mut Vec<Tree>, f: &mut dyn FnMut(&[Tree])) {
    if picked.len() == choices.len() {
        f(picked);
        return;
    }
    for t in &choices[picked.len()] {
        picked.push(t.clone());
        choice_rec(choices, picked, f);
        picked.pop();
    }
}

/// Drops zero rows and rows equal to an earlier row up to a scalar.
fn dedup_rows(rows: Vec<SparseVec<Rational>>) -> Vec<SparseVec<Rational>> {
    let mut seen: HashSet<SparseVec<Rational>> = HashSet::new();
    let mut out = Vec::new();
    for r in rows {
        let Some((_, lead)) = r.entries().first() else {
            continue;
        };
        let normalized = r.scale(&lead.recip());
        if seen.insert(normalized) {
            out.push(r);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freenil::engel_element;

    #[test]
    fn dimension_formula_matches_double_factorials() {
        let binary: Vec<u128> = (2..=7).map(|q| component_dimension(2, q)).collect();
        assert_eq!(binary, vec![1, 3, 15, 105, 945, 10395]);
        let ternary: Vec<u128> = [1, 3, 5, 7, 9].iter().map(|&q| component_dimension(3, q)).collect();
        assert_eq!(ternary, vec![1, 1, 10, 280, 15400]);
        assert_eq!(component_dimension(3, 4), 0);
    }

    #[test]
    fn single_generator_degree_three() {
        let b = ideal_span(2, 3, &[3]).unwrap();
        assert_eq!(b.rank(), 1);
        assert!(b.is_rref());
    }

    #[test]
    fn no_generators_no_ideal() {
        let b = ideal_span(2, 4, &[]).unwrap();
        assert_eq!(b.rank(), 0);
        assert!(b.contains(&MultilinearElement::zero(4)).unwrap().member);
    }

    #[test]
    fn engel_two_in_degree_three_ideal() {
        let b = ideal_span(2, 3, &[3]).unwrap();
        let c = b.contains(&engel_element(2, 2)).unwrap();
        assert!(!c.member);
        let c = b.contains(&polarize_t(2, 3)).unwrap();
        assert!(c.member && c.verified);
        assert_eq!(c.digest.len(), 64);
    }

    #[test]
    fn degree_mismatch_is_an_input_error() {
        let b = ideal_span(2, 4, &[3]).unwrap();
        assert!(matches!(b.contains(&polarize_t(2, 3)), Err(FreeNilError::Input(_))));
    }

    #[test]
    fn bad_generators_rejected() {
        assert!(ideal_span(3, 5, &[4]).is_err());
        assert!(ideal_span(2, 4, &[5]).is_err());
        assert!(ideal_span(3, 4, &[3]).is_err());
    }

    #[test]
    fn cap_is_enforced() {
        let opts = SpanOptions {
            max_basis_trees: 100,
            prescreen: false,
        };
        assert!(matches!(
            ideal_span_with(2, 5, &[3], &opts),
            Err(FreeNilError::ResourceCap { trees: 105, .. })
        ));
    }

    #[test]
    fn modular_rows_agree_with_exact_rank() {
        for (q, gens) in [(4, vec![3]), (5, vec![3]), (5, vec![4, 5])] {
            let exact = ideal_span(2, q, &gens).unwrap();
            let rows = ideal_rows(2, q, &gens, &SpanOptions::default()).unwrap();
            assert_eq!(exact.rank(), rows.rank(), "q={q}");
        }
    }
}
