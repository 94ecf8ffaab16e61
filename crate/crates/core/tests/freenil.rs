mod common;

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

use multinil::algebra::{ad_pow, cube, linearized_terms, t_term, GenericRing, MultilinearAlgebra, SymbolicElement};
use multinil::exactmath::{factorial, MultiPoly, Rational};
use multinil::freenil::{
    admissible_size, component_dimension, engel_element, enumerate_trees, ideal_span, polarize_t, shapes_with_leaves,
    symmetrized_shape, t_in_shapes, MultilinearElement, OneVarIdeal, Tree,
};

use common::{nil_algebras, rng};

fn shuffled(t: &Tree, rng: &mut impl Rng) -> Tree {
    match t {
        Tree::Leaf(l) => Tree::Leaf(*l),
        Tree::Node(children) => {
            let mut c: Vec<Tree> = children.iter().map(|c| shuffled(c, rng)).collect();
            c.shuffle(rng);
            Tree::Node(c.into_boxed_slice())
        }
    }
}

fn hash_of(t: &Tree) -> u64 {
    let mut h = DefaultHasher::new();
    t.hash(&mut h);
    h.finish()
}

#[test]
fn canonical_form_survives_a_thousand_shuffles() {
    let mut r = rng(1000);
    let pools = [
        enumerate_trees(2, &[1, 2, 3, 4, 5, 6]),
        enumerate_trees(3, &[1, 2, 3, 4, 5, 6, 7]),
        enumerate_trees(4, &[1, 2, 3, 4, 5, 6, 7]),
    ];
    let mut changed = 0;
    for i in 0..1200 {
        let pool = &pools[i % pools.len()];
        let t = &pool[r.gen_range(0..pool.len())];
        let s = shuffled(t, &mut r);
        changed += usize::from(&s != t);
        let c = s.canonicalize();
        assert_eq!(&c, t);
        assert!(c.is_canonical());
        assert_eq!(hash_of(&c), hash_of(t));
        assert_eq!(Tree::parse(&c.to_string()).unwrap(), c);
    }
    assert!(changed > 300, "shuffles rarely changed the child order");
}

#[test]
fn enumeration_matches_the_block_recursion() {
    for (d, top) in [(2, 8), (3, 9), (4, 7)] {
        for q in (1..=top).filter(|&q| admissible_size(d, q)) {
            let labels: Vec<u32> = (1..=q as u32).collect();
            let trees = enumerate_trees(d, &labels);
            assert_eq!(trees.len() as u128, component_dimension(d, q), "d={d}, q={q}");
            let mut sorted = trees.clone();
            sorted.sort();
            sorted.dedup();
            assert_eq!(sorted.len(), trees.len(), "duplicates at d={d}, q={q}");
        }
    }
}

/// `e` with labels `1..q−1` set to `x` and label `q` (if present) to `last`.
fn diagonal(alg: &MultilinearAlgebra, e: &MultilinearElement, x: &SymbolicElement, last: &SymbolicElement) -> SymbolicElement {
    let q = e.degree() as u32;
    e.evaluate(alg, &|l| if l == q { last.clone() } else { x.clone() })
}

fn polarization_algebras() -> Vec<(String, MultilinearAlgebra)> {
    let mut algs = nil_algebras();
    algs.push(("cube".into(), cube()));
    algs
}

#[test]
fn polarized_t_restricts_to_t_on_the_diagonal() {
    for (name, alg) in polarization_algebras() {
        let d = alg.arity();
        let ring = GenericRing::new(alg.dim());
        let x = ring.x();
        for q in 1..=6 {
            let lhs = diagonal(&alg, &polarize_t(d, q), &x, &x);
            let rhs = t_term(&alg, q, &x).scale(&Rational::from_integer(factorial(q)));
            assert_eq!(lhs, rhs, "{name}, q = {q}");
        }
    }
}

fn directional_derivative(e: &SymbolicElement, ring: &GenericRing) -> SymbolicElement {
    let xs = ring.block(0);
    let zs = ring.block(2);
    let coords: Vec<MultiPoly> = e
        .coords()
        .iter()
        .map(|c| {
            let mut acc = MultiPoly::zero(ring.vars());
            for (xi, zi) in xs.clone().zip(zs.clone()) {
                let dz = c.derivative(xi).checked_mul(&MultiPoly::var(ring.vars(), zi)).unwrap();
                acc = acc.checked_add(&dz).unwrap();
            }
            acc
        })
        .collect();
    SymbolicElement::from_coords(ring.vars(), coords).unwrap()
}

#[test]
fn one_slot_linearization_is_the_derivative() {
    for (name, alg) in polarization_algebras() {
        let d = alg.arity();
        let ring = GenericRing::new(alg.dim());
        let (x, z) = (ring.x(), ring.z());
        let lin = linearized_terms(&alg, &x, &z, 6);
        for q in 2..=6 {
            let slot = diagonal(&alg, &polarize_t(d, q), &x, &z)
                .scale(&Rational::from_integer(factorial(q - 1)).recip());
            let derivative = directional_derivative(&t_term(&alg, q, &x), &ring);
            assert_eq!(slot, derivative, "{name}, q = {q}");
            assert_eq!(lin[q - 1], derivative, "{name}, q = {q}");
        }
    }
}

#[test]
fn engel_element_restricts_to_ad_power() {
    for (name, alg) in polarization_algebras() {
        let d = alg.arity();
        let ring = GenericRing::new(alg.dim());
        let (x, t) = (ring.x(), ring.t());
        for n in 1..=3 {
            let e = engel_element(d, n);
            let scale = Rational::from_integer(factorial(n * (d - 1)));
            let expected = ad_pow(&alg, &x, n, &t).unwrap().scale(&scale);
            assert_eq!(diagonal(&alg, &e, &x, &t), expected, "{name}, n = {n}");
        }
    }
}

fn transposition(i: u32, j: u32) -> impl Fn(u32) -> u32 {
    move |l| {
        if l == i {
            j
        } else if l == j {
            i
        } else {
            l
        }
    }
}

#[test]
fn ideal_components_are_stable_under_relabeling() {
    let mut r = rng(7);
    for (d, q, gens) in [(2, 4, vec![3]), (2, 5, vec![3, 4, 5]), (2, 5, vec![4, 5]), (3, 5, vec![3, 5])] {
        let basis = ideal_span(d, q, &gens).unwrap();
        assert!(basis.rank() > 0);
        for _ in 0..20 {
            let i = r.gen_range(1..=q as u32);
            let j = r.gen_range(1..=q as u32);
            let row = basis.row_element(r.gen_range(0..basis.rank()));
            let moved = row.relabel(&transposition(i, j));
            let cert = basis.contains(&moved).unwrap();
            assert!(cert.member && cert.verified, "d={d}, q={q}, gens={gens:?}, ({i} {j})");
        }
    }
}

#[test]
fn one_generator_and_multilinear_routes_agree() {
    for (d, gens, degrees) in [(2usize, vec![3usize], vec![3usize, 4, 5]), (2, vec![4, 5], vec![4, 5, 6]), (3, vec![3], vec![3, 5])] {
        let top = *degrees.last().unwrap();
        let onevar = OneVarIdeal::new(d, &gens, top).unwrap();
        for &q in &degrees {
            let active: Vec<usize> = gens.iter().copied().filter(|&j| j <= q).collect();
            let multi = ideal_span(d, q, &active).unwrap();
            for shape in shapes_with_leaves(d, q) {
                let a = onevar.contains_shape(&shape).unwrap().member;
                let b = multi.contains(&symmetrized_shape(d, &shape)).unwrap().member;
                assert_eq!(a, b, "d={d}, gens={gens:?}, shape {shape}");
            }
            let a = onevar.contains(&t_in_shapes(d, q)).unwrap().member;
            let b = multi.contains(&polarize_t(d, q)).unwrap().member;
            assert_eq!(a, b, "d={d}, gens={gens:?}, T_{q}");
        }
    }
}

#[test]
fn every_shape_from_five_leaves_lies_in_the_binary_ideal() {
    // with T_4 ≡ T_5 ≡ 0, one-variable monomials of degree ≥ 5 vanish
    let ideal = OneVarIdeal::new(2, &[4, 5], 9).unwrap();
    for k in 5..=9 {
        let (shapes, rank) = ideal.dimensions(k).unwrap();
        assert_eq!(shapes, rank, "{k} leaves");
    }
    let (shapes, rank) = ideal.dimensions(4).unwrap();
    assert_eq!((shapes, rank), (2, 1));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn relabeling_composes(perm in Just((1..=6u32).collect::<Vec<_>>()).prop_shuffle()) {
        let e = polarize_t(2, 6);
        let f = |l: u32| perm[(l - 1) as usize];
        // the polarized element is symmetric in its labels
        prop_assert_eq!(e.relabel(&f), e);
    }

    #[test]
    fn symmetrization_is_label_invariant(idx in 0usize..11, perm in Just((1..=7u32).collect::<Vec<_>>()).prop_shuffle()) {
        let shape = &shapes_with_leaves(2, 7)[idx];
        let e = symmetrized_shape(2, shape);
        prop_assert_eq!(e.relabel(&|l: u32| perm[(l - 1) as usize]), e);
    }
}
