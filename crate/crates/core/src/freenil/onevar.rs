//! The one-generator free algebra: combinations of unlabeled shapes.
//!
//! Its degree-k component has one basis vector per shape with k leaves. The
//! consequences of `T_j ≡ 0` in one variable are spanned by the polarized
//! generators evaluated at one-variable monomials and by single-node wraps,
//! so these components stay small where the multilinear ones explode.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use super::element::polarize_t;
use super::tree::{admissible_size, shapes_with_leaves, Tree};
use super::{Certificate, FreeNilError};
use crate::exactmath::{factorial, Rational, SparseEchelon, SparseVec};

/// Combination of shapes with a common leaf count.
pub type ShapeCombination = BTreeMap<Tree, Rational>;

/// `T_q(x)` in the shape basis: the diagonal of the polarized element
/// divided by `q!`.
pub fn t_in_shapes(d: usize, q: usize) -> ShapeCombination {
    let scale = Rational::from_integer(factorial(q)).recip();
    let mut out = ShapeCombination::new();
    for (t, c) in polarize_t(d, q).terms() {
        add_to(&mut out, t.shape(), c * &scale);
    }
    out
}

fn add_to(acc: &mut ShapeCombination, t: Tree, c: Rational) {
    match acc.entry(t) {
        Entry::Vacant(e) => {
            if !c.is_zero() {
                e.insert(c);
            }
        }
        Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

/// Ideal components of the one-generator algebra for degrees up to `top`.
#[derive(Debug)]
pub struct OneVarIdeal {
    arity: usize,
    generators: Vec<usize>,
    /// Per degree: shape basis, its index, and the reduced ideal rows.
    degrees: BTreeMap<usize, Component>,
}

#[derive(Debug)]
struct Component {
    shapes: Vec<Tree>,
    index: HashMap<Tree, u32>,
    echelon: SparseEchelon<Rational>,
}

impl Component {
    fn coordinates(&self, e: &ShapeCombination) -> Option<SparseVec<Rational>> {
        e.iter()
            .map(|(t, c)| self.index.get(t).map(|&i| (i, c.clone())))
            .collect::<Option<Vec<_>>>()
            .map(SparseVec::from_entries)
    }
}

impl OneVarIdeal {
    /// Builds every admissible degree `≤ top`.
    pub fn new(d: usize, gens: &[usize], top: usize) -> Result<Self, FreeNilError> {
        if d < 2 {
            return Err(FreeNilError::Input(format!("arity {d} is below 2")));
        }
        let mut generators = gens.to_vec();
        generators.sort_unstable();
        generators.dedup();
        if let Some(&j) = generators.iter().find(|&&j| j < 2 || !admissible_size(d, j)) {
            return Err(FreeNilError::Input(format!("generator degree {j} is not admissible")));
        }
        let polarized: Vec<(usize, Vec<(Tree, Rational)>)> = generators
            .iter()
            .filter(|&&j| j <= top)
            .map(|&j| (j, polarize_t(d, j).terms().map(|(t, c)| (t.clone(), c.clone())).collect()))
            .collect();
        let mut shapes_by_leaves: BTreeMap<usize, Vec<Tree>> = BTreeMap::new();
        for k in (1..=top).filter(|&k| admissible_size(d, k)) {
            shapes_by_leaves.insert(k, shapes_with_leaves(d, k));
        }
        let mut degrees: BTreeMap<usize, Component> = BTreeMap::new();
        for (&k, shapes) in &shapes_by_leaves {
            let index: HashMap<Tree, u32> =
                shapes.iter().enumerate().map(|(i, s)| (s.clone(), i as u32)).collect();
            let mut spanning: Vec<ShapeCombination> = Vec::new();
            for (j, terms) in polarized.iter().filter(|(j, _)| *j <= k) {
                for args in shape_multisets(&shapes_by_leaves, *j, k) {
                    let mut e = ShapeCombination::new();
                    for (t, c) in terms {
                        add_to(&mut e, t.graft(&|l| args[(l - 1) as usize].clone()), c.clone());
                    }
                    spanning.push(e);
                }
            }
            for (&m, lower) in &degrees {
                let rest = k - m;
                if rest < d - 1 || rest % (d - 1) != 0 {
                    continue;
                }
                for siblings in shape_multisets(&shapes_by_leaves, d - 1, rest) {
                    for row in lower.echelon.rows() {
                        let mut e = ShapeCombination::new();
                        for (i, c) in row.entries() {
                            let mut children = siblings.clone();
                            children.push(lower.shapes[*i as usize].clone());
                            add_to(&mut e, Tree::node(children), c.clone());
                        }
                        spanning.push(e);
                    }
                }
            }
            let mut echelon = SparseEchelon::new(shapes.len());
            let component = Component {
                shapes: shapes.clone(),
                index,
                echelon: SparseEchelon::new(0),
            };
            for e in &spanning {
                let v = component.coordinates(e).expect("spanning element in the shape basis");
                echelon.insert(&v)?;
            }
            degrees.insert(
                k,
                Component {
                    echelon: echelon.into_rref(),
                    ..component
                },
            );
        }
        Ok(OneVarIdeal {
            arity: d,
            generators,
            degrees,
        })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    /// `(number of shapes, ideal rank)` at `k` leaves.
    pub fn dimensions(&self, k: usize) -> Option<(usize, usize)> {
        self.degrees.get(&k).map(|c| (c.shapes.len(), c.echelon.rank()))
    }

    pub fn contains(&self, e: &ShapeCombination) -> Result<Certificate, FreeNilError> {
        let Some((first, _)) = e.iter().next() else {
            return Ok(Certificate::trivial());
        };
        let k = first.num_leaves();
        let comp = self
            .degrees
            .get(&k)
            .ok_or_else(|| FreeNilError::Input(format!("degree {k} was not built")))?;
        let target = comp
            .coordinates(e)
            .ok_or_else(|| FreeNilError::Input("combination mixes degrees or arities".into()))?;
        let m = comp.echelon.contains(&target)?;
        let verified = m.member && comp.echelon.verify_combination(&m.coefficients, &target);
        Ok(Certificate::from_parts(m.member, verified, m.coefficients, &target))
    }

    /// Membership of a single shape.
    pub fn contains_shape(&self, shape: &Tree) -> Result<Certificate, FreeNilError> {
        let mut e = ShapeCombination::new();
        e.insert(shape.shape(), Rational::one());
        self.contains(&e)
    }
}

/// Non-decreasing tuples of `parts` shapes whose leaf counts sum to `total`.
fn shape_multisets(by_leaves: &BTreeMap<usize, Vec<Tree>>, parts: usize, total: usize) -> Vec<Vec<Tree>> {
    let catalog: Vec<&Tree> = by_leaves.values().flatten().collect();
    let mut out = Vec::new();
    let mut picked: Vec<usize> = Vec::new();
    multiset_rec(&catalog, parts, total, 0, &mut picked, &mut out);
    out
}

fn multiset_rec(
    catalog: &[&Tree],
    parts: usize,
    remaining: usize,
    from: usize,
    picked: &mut Vec<usize>,
    out: &mut Vec<Vec<Tree>>,
) {
    if picked.len() == parts {
        if remaining == 0 {
            out.push(picked.iter().map(|&i| catalog[i].clone()).collect());
        }
        return;
    }
    let left = parts - picked.len();
    for i in from..catalog.len() {
        let n = catalog[i].num_leaves();
        // each remaining part needs at least one leaf
        if n + (left - 1) > remaining {
            continue;
        }
        picked.push(i);
        multiset_rec(catalog, parts, remaining - n, i, picked, out);
        picked.pop();
    }
}
