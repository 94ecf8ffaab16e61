mod common;

use rand::Rng;

use multinil::algebra::cube;
use multinil::exactmath::{indexed_vars, rat, MultiPoly, PolyMatrix, Rational};
use multinil::polymap::{
    default_truncation, depolarize, formal_inverse, jacobian, jacobian_det, map_of_algebra, polarize,
    verify_automorphism, AutomorphismStatus, HomogeneousMap, PolyMap,
};

use common::{nil_algebras, point, rng, small_rational, Dense};

/// Random exponent vector of total degree `d` in `n` variables.
fn monomial(r: &mut impl Rng, n: usize, d: u32) -> Vec<u32> {
    let mut e = vec![0u32; n];
    for _ in 0..d {
        e[r.gen_range(0..n)] += 1;
    }
    e
}

fn random_homogeneous(r: &mut impl Rng, n: usize, d: u32) -> HomogeneousMap {
    let vars = indexed_vars("X", n);
    let coords = (0..n)
        .map(|_| {
            let terms: Vec<(Vec<u32>, Rational)> =
                (0..r.gen_range(1..=4)).map(|_| (monomial(r, n, d), small_rational(r))).collect();
            MultiPoly::from_terms(&vars, terms).unwrap()
        })
        .collect();
    HomogeneousMap::with_degree(PolyMap::new(&vars, coords).unwrap(), d).unwrap()
}

#[test]
fn depolarizing_the_polarization_recovers_the_map() {
    let mut r = rng(20);
    for k in 0..20 {
        let n = 1 + k % 4;
        let d = 2 + (k % 2) as u32;
        let h = random_homogeneous(&mut r, n, d);
        let alg = polarize(&h).unwrap();
        assert_eq!((alg.arity(), alg.dim()), (d as usize, n));
        assert_eq!(depolarize(&alg).map(), h.map(), "map #{k}");
        // μ(x, …, x) = H(x) by the dense oracle as well
        let dense = Dense::new(&alg);
        for _ in 0..3 {
            let x = point(&mut r, n);
            let args = vec![x.as_slice(); d as usize];
            let expected: Vec<Rational> = h.map().coords().iter().map(|c| c.eval(&x).unwrap()).collect();
            assert_eq!(dense.mu(&args), expected, "map #{k}");
        }
    }
}

#[test]
fn polarizing_the_depolarization_recovers_the_algebra() {
    for (name, alg) in nil_algebras() {
        let back = polarize(&depolarize(&alg)).unwrap();
        assert_eq!(back.entries(), alg.entries(), "{name}");
    }
}

/// `J_F(G(Y))·J_G(Y)`.
fn chain_product(f: &PolyMap, g: &PolyMap) -> PolyMatrix {
    let outer = jacobian(f)
        .try_map(g.vars(), |p| p.substitute(g.coords()))
        .unwrap();
    outer.mul(&jacobian(g)).unwrap()
}

#[test]
fn formal_inverse_is_an_exact_automorphism_on_nil_algebras() {
    for (name, alg) in nil_algebras() {
        let f = map_of_algebra(&alg);
        assert_eq!(jacobian_det(&f).as_constant(), Some(rat(1)), "{name}");
        let bound = default_truncation(&alg, 10).expect("nil test algebra");
        let g = formal_inverse(&f, bound).unwrap();
        let f = f.with_vars(g.vars()).unwrap();
        let report = verify_automorphism(&f, &g, bound).unwrap();
        assert_eq!(report.status, AutomorphismStatus::Exact, "{name}");
        assert!(!report.discarded_nonzero);
        assert_eq!(chain_product(&f, &g), PolyMatrix::identity(g.vars(), g.n()), "{name}");
    }
}

#[test]
fn non_nil_map_only_inverts_through_the_bound() {
    let f = map_of_algebra(&cube());
    assert_ne!(jacobian_det(&f).as_constant(), Some(rat(1)));
    for bound in [3, 5, 7] {
        let g = formal_inverse(&f, bound).unwrap();
        let f = f.with_vars(g.vars()).unwrap();
        let report = verify_automorphism(&f, &g, bound).unwrap();
        assert_eq!(report.status, AutomorphismStatus::TruncatedOk, "bound {bound}");
        assert!(report.discarded_nonzero);
    }
}
