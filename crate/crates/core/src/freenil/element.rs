//! Formal rational combinations of leaf-labeled trees, and the named
//! elements of the free symmetric d-ary algebra used by the verifier.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::tree::{admissible_size, enumerate_trees, set_partitions, Tree};
use crate::algebra::{MultilinearAlgebra, SymbolicElement};
use crate::exactmath::{factorial, format_rational, rat, Rational, SparseVec};

/// Element of one multilinear component: every tree has `degree` leaves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultilinearElement {
    degree: usize,
    terms: BTreeMap<Tree, Rational>,
}

impl MultilinearElement {
    pub fn zero(degree: usize) -> Self {
        MultilinearElement {
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_tree(tree: Tree) -> Self {
        let mut e = MultilinearElement::zero(tree.num_leaves());
        e.terms.insert(tree, Rational::one());
        e
    }

    /// Sums coefficients of equal canonical trees; all trees must have
    /// the same leaf count.
    pub fn from_terms(degree: usize, terms: impl IntoIterator<Item = (Tree, Rational)>) -> Self {
        let mut e = MultilinearElement::zero(degree);
        for (t, c) in terms {
            e.add_term(t, c);
        }
        e
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Tree, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, t: &Tree) -> Rational {
        self.terms.get(t).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, t: Tree, c: Rational) {
        debug_assert_eq!(t.num_leaves(), self.degree, "tree degree");
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(t) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &MultilinearElement) -> MultilinearElement {
        let mut out = self.clone();
        for (t, c) in &other.terms {
            out.add_term(t.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> MultilinearElement {
        MultilinearElement::from_terms(
            self.degree,
            self.terms.iter().map(|(t, v)| (t.clone(), v * c)),
        )
    }

    /// Applies a label map to every tree.
    pub fn relabel(&self, f: &impl Fn(u32) -> u32) -> MultilinearElement {
        MultilinearElement::from_terms(
            self.degree,
            self.terms.iter().map(|(t, c)| (t.relabel(f), c.clone())),
        )
    }

    /// `node(parts[0], …, parts[d−1])`, expanded multilinearly.
    pub fn node(parts: &[&MultilinearElement]) -> MultilinearElement {
        let degree = parts.iter().map(|p| p.degree).sum();
        let mut acc: Vec<(Vec<Tree>, Rational)> = vec![(Vec::new(), Rational::one())];
        for p in parts {
            let mut next = Vec::with_capacity(acc.len() * p.terms.len());
            for (trees, c) in &acc {
                for (t, v) in &p.terms {
                    let mut ts = trees.clone();
                    ts.push(t.clone());
                    next.push((ts, c * v));
                }
            }
            acc = next;
        }
        MultilinearElement::from_terms(degree, acc.into_iter().map(|(ts, c)| (Tree::node(ts), c)))
    }

    /// Coordinates in `basis`; `None` if some tree is outside it.
    pub fn to_sparse(&self, basis: &TreeBasis) -> Option<SparseVec<Rational>> {
        let entries = self
            .terms
            .iter()
            .map(|(t, c)| basis.index(t).map(|i| (i, c.clone())))
            .collect::<Option<Vec<_>>>()?;
        Some(SparseVec::from_entries(entries))
    }

    pub fn from_sparse(basis: &TreeBasis, v: &SparseVec<Rational>) -> MultilinearElement {
        MultilinearElement::from_terms(
            basis.degree,
            v.entries()
                .iter()
                .map(|(i, c)| (basis.tree(*i).clone(), c.clone())),
        )
    }

    /// Evaluates in a finite-dimensional algebra with leaf `l` set to
    /// `assign(l)`.
    pub fn evaluate(
        &self,
        alg: &MultilinearAlgebra,
        assign: &dyn Fn(u32) -> SymbolicElement,
    ) -> SymbolicElement {
        let mut memo: HashMap<Tree, SymbolicElement> = HashMap::new();
        let mut total: Option<SymbolicElement> = None;
        for (t, c) in &self.terms {
            let v = eval_tree(alg, t, assign, &mut memo).scale(c);
            total = Some(match total {
                None => v,
                Some(acc) => acc.add(&v),
            });
        }
        total.unwrap_or_else(|| {
            let probe = assign(1);
            SymbolicElement::zero(probe.vars(), alg.dim())
        })
    }
}

fn eval_tree(
    alg: &MultilinearAlgebra,
    t: &Tree,
    assign: &dyn Fn(u32) -> SymbolicElement,
    memo: &mut HashMap<Tree, SymbolicElement>,
) -> SymbolicElement {
    if let Some(v) = memo.get(t) {
        return v.clone();
    }
    let v = match t {
        Tree::Leaf(l) => assign(*l),
        Tree::Node(children) => {
            let vals: Vec<SymbolicElement> = children
                .iter()
                .map(|c| eval_tree(alg, c, assign, memo))
                .collect();
            let args: Vec<&SymbolicElement> = vals.iter().collect();
            crate::algebra::mu(alg, &args).expect("tree arity matches the algebra")
        }
    };
    memo.insert(t.clone(), v.clone());
    v
}

impl fmt::Display for MultilinearElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(t, c)| format!("{}*{}", format_rational(c), t))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Canonical trees of one multilinear component, indexed in sorted order.
#[derive(Debug)]
pub struct TreeBasis {
    arity: usize,
    degree: usize,
    trees: Vec<Tree>,
    index: HashMap<Tree, u32>,
}

impl TreeBasis {
    /// All trees on labels `1..=degree`.
    pub fn new(arity: usize, degree: usize) -> Arc<Self> {
        let labels: Vec<u32> = (1..=degree as u32).collect();
        let trees = enumerate_trees(arity, &labels);
        let index = trees
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i as u32))
            .collect();
        Arc::new(TreeBasis {
            arity,
            degree,
            trees,
            index,
        })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.trees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }

    pub fn index(&self, t: &Tree) -> Option<u32> {
        self.index.get(t).copied()
    }

    pub fn tree(&self, i: u32) -> &Tree {
        &self.trees[i as usize]
    }

    pub fn trees(&self) -> &[Tree] {
        &self.trees
    }
}

/// Full linearization of `T_q`: `lin(S) = Σ node(lin(S_1), …, lin(S_d))`
/// over ordered tuples of disjoint nonempty blocks covering `S`, on labels
/// `1..=q`. Satisfies `T_q(x) = (1/q!)·lin(x, …, x)`.
pub fn polarize_t(d: usize, q: usize) -> MultilinearElement {
    assert!(d >= 2 && q >= 1);
    let labels: Vec<u32> = (1..=q as u32).collect();
    let mut memo = HashMap::new();
    linearized_t(d, &labels, &mut memo)
}

fn linearized_t(
    d: usize,
    labels: &[u32],
    memo: &mut HashMap<Vec<u32>, MultilinearElement>,
) -> MultilinearElement {
    if labels.len() == 1 {
        return MultilinearElement::from_tree(Tree::leaf(labels[0]));
    }
    if let Some(e) = memo.get(labels) {
        return e.clone();
    }
    let mut acc = MultilinearElement::zero(labels.len());
    if admissible_size(d, labels.len()) {
        // the d! orderings of one unordered partition give equal nodes
        let orderings = Rational::from_integer(factorial(d));
        for blocks in set_partitions(labels, d, &|n| admissible_size(d, n)) {
            let parts: Vec<MultilinearElement> =
                blocks.iter().map(|b| linearized_t(d, b, memo)).collect();
            let refs: Vec<&MultilinearElement> = parts.iter().collect();
            acc = acc.add(&MultilinearElement::node(&refs).scale(&orderings));
        }
    }
    memo.insert(labels.to_vec(), acc.clone());
    acc
}

/// Linearization in `x` of `Ad_x^n(t)`: the right comb with `n(d−1)` slots
/// for `x`, summed over all assignments of labels `1..n(d−1)`; label
/// `n(d−1)+1` is `t`.
pub fn engel_element(d: usize, n: usize) -> MultilinearElement {
    assert!(d >= 2 && n >= 1);
    let t = (n * (d - 1) + 1) as u32;
    let labels: Vec<u32> = (1..t).collect();
    // sibling slots are unordered: each choice of a level's label set
    // stands for (d−1)! assignments
    let level_orderings = Rational::from_integer(factorial(d - 1));
    comb(d, &labels, t, &level_orderings)
}

fn comb(d: usize, labels: &[u32], t: u32, level_orderings: &Rational) -> MultilinearElement {
    if labels.is_empty() {
        return MultilinearElement::from_tree(Tree::leaf(t));
    }
    let mut acc = MultilinearElement::zero(labels.len() + 1);
    super::tree::for_each_subset(labels, d - 1, &mut |level, rest| {
        let inner = comb(d, rest, t, level_orderings);
        let mut parts: Vec<MultilinearElement> = level
            .iter()
            .map(|&l| MultilinearElement::from_tree(Tree::leaf(l)))
            .collect();
        parts.push(inner);
        let refs: Vec<&MultilinearElement> = parts.iter().collect();
        acc = acc.add(&MultilinearElement::node(&refs).scale(level_orderings));
    });
    acc
}

/// Sum over all bijective labelings of `shape`'s leaves by `1..=q`, where
/// `q` is the shape's leaf count.
pub fn symmetrized_shape(d: usize, shape: &Tree) -> MultilinearElement {
    assert!(shape.has_arity(d), "shape arity");
    let q = shape.num_leaves();
    let labels: Vec<u32> = (1..=q as u32).collect();
    labelings(shape, &labels)
}

fn labelings(shape: &Tree, labels: &[u32]) -> MultilinearElement {
    match shape {
        Tree::Leaf(_) => MultilinearElement::from_tree(Tree::leaf(labels[0])),
        Tree::Node(children) => {
            let mut acc = MultilinearElement::zero(labels.len());
            distribute(children, labels, &mut Vec::new(), &mut acc);
            acc
        }
    }
}

/// Ordered assignment of label subsets to the child positions.
fn distribute(
    children: &[Tree],
    remaining: &[u32],
    parts: &mut Vec<MultilinearElement>,
    acc: &mut MultilinearElement,
) {
    let k = parts.len();
    if k == children.len() {
        let refs: Vec<&MultilinearElement> = parts.iter().collect();
        *acc = acc.add(&MultilinearElement::node(&refs));
        return;
    }
    let size = children[k].num_leaves();
    super::tree::for_each_subset(remaining, size, &mut |chosen, rest| {
        parts.push(labelings(&children[k], chosen));
        distribute(children, rest, parts, acc);
        parts.pop();
    });
}

/// Sum of all coefficients (the value at the all-ones functional).
pub fn coefficient_sum(e: &MultilinearElement) -> Rational {
    e.terms().fold(rat(0), |acc, (_, c)| acc + c)
}
