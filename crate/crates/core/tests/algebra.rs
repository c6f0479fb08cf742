use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use paracr_core::exactalg::rational::int;
use paracr_core::linalg;
use paracr_core::liealg::{structure_constants, StructureConstants};
use paracr_core::solver::default_weight_cap;
use paracr_core::{classify, profile, solve_algebra, Classification, ModelSurface, Rational};

fn algebra(s: &ModelSurface) -> (paracr_core::SymmetryAlgebra, StructureConstants) {
    let alg = solve_algebra(s, default_weight_cap(s)).unwrap();
    let sc = structure_constants(&alg).unwrap();
    (alg, sc)
}

fn unit(n: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    v[i] = Rational::one();
    v
}

fn scale(v: &[Rational], c: &Rational) -> Vec<Rational> {
    v.iter().map(|x| x * c).collect()
}

#[test]
fn sl2_relations_in_computed_basis() {
    for (k, iota) in [(4, 2), (5, 2), (5, 3), (6, 3)] {
        let s = ModelSurface::monomial(k, iota).unwrap();
        let (alg, sc) = algebra(&s);
        let n = alg.dim();
        let e = unit(n, alg.of_weight(-k)[0]);
        let f = unit(n, alg.of_weight(k)[0]);
        let h = sc.bracket(&e, &f);
        let he = sc.bracket(&h, &e);
        let lambda = linalg::solve_in_span(std::slice::from_ref(&e), &he).expect("[h, e] is a multiple of e")[0].clone();
        assert!(!lambda.is_zero());
        // rescale f so that the relations take the standard form
        let mu = int(2) / &lambda;
        let f = scale(&f, &mu);
        let h = sc.bracket(&e, &f);
        assert_eq!(sc.bracket(&h, &e), scale(&e, &int(2)), "k={k} iota={iota}");
        assert_eq!(sc.bracket(&h, &f), scale(&f, &int(-2)), "k={k} iota={iota}");
        // span{e, h, f} is the derived algebra
        let derived = sc.derived_algebra();
        assert_eq!(derived.len(), 3);
        let mut rows = derived.clone();
        rows.extend([e.clone(), h.clone(), f.clone()]);
        assert_eq!(linalg::rank(&rows, n), 3);
        assert_eq!(linalg::rank(&[e, h, f], n), 3);
    }
}

fn random_unimodular(n: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<Rational>> {
    let mut m: Vec<Vec<Rational>> = (0..n).map(|i| unit(n, i)).collect();
    for _ in 0..3 * n {
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if i == j {
            continue;
        }
        let c = int(rng.gen_range(-3..=3));
        let rj = m[j].clone();
        for (a, b) in m[i].iter_mut().zip(&rj) {
            *a += b * &c;
        }
    }
    if rng.gen_bool(0.5) {
        m.swap(0, n - 1);
    }
    m
}

#[test]
fn classification_survives_basis_change() {
    let cases = [
        (ModelSurface::monomial(5, 2).unwrap(), Classification::Sl2PlusCenter),
        (ModelSurface::binomial(4, &int(2), &int(3)).unwrap(), Classification::Solvable3dWeightsK1),
        (ModelSurface::from_ints(4, &[1, 0, 1]).unwrap(), Classification::AffineLine2d),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for (s, want) in cases {
        let (_, sc) = algebra(&s);
        for _ in 0..20 {
            let b = random_unimodular(sc.dim(), &mut rng);
            assert!(!linalg::determinant(&b).is_zero());
            let t = sc.change_basis(&b).unwrap();
            assert!(t.is_antisymmetric() && t.satisfies_jacobi());
            assert_eq!(classify(&profile(&t), s.k()), want);
        }
    }
}

#[test]
fn computed_algebras_are_closed_and_exact() {
    let surfaces = [
        ModelSurface::monomial(4, 2).unwrap(),
        ModelSurface::monomial(4, 1).unwrap(),
        ModelSurface::binomial(5, &int(1), &int(1)).unwrap(),
        ModelSurface::from_ints(6, &[0, 1, 0, 1, 0]).unwrap(),
    ];
    for s in surfaces {
        let (alg, sc) = algebra(&s);
        assert!(alg.is_closed());
        assert!(sc.is_antisymmetric());
        assert!(sc.satisfies_jacobi());
        for g in &alg.generators {
            assert!(g.field.tangency_residual(&s).is_zero());
        }
    }
}

#[test]
fn profiles_of_the_three_cases() {
    let p = profile(&algebra(&ModelSurface::monomial(4, 2).unwrap()).1);
    assert_eq!((p.dimension, p.derived_dim(), p.center_dim, p.killing_rank), (4, 3, 1, 3));
    assert_eq!(p.killing_signature, (2, 1, 1));

    let p = profile(&algebra(&ModelSurface::from_ints(3, &[3, 3]).unwrap()).1);
    assert_eq!(p.derived_series_dims, vec![3, 2, 0]);
    let ev = p.ad_eigenvalues.clone().unwrap();
    // up to overall scale the eigenvalues are {-k, -1}
    let r = &ev[0] / &ev[1];
    assert!(r == int(3) || r == Rational::new(1.into(), 3.into()));

    let p = profile(&algebra(&ModelSurface::from_ints(4, &[1, 0, 1]).unwrap()).1);
    assert_eq!(p.derived_series_dims, vec![2, 1, 0]);
    assert!(p.is_solvable);
}
