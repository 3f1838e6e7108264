//! Property checks shared by the property suite and the acceptance target.
//! Each runs a fixed number of cases from a fixed seed and returns the first
//! counterexample.

use genericity::exact_torus::{
    apply_matrix, classify_matrix, farey_distance, l1_norm, multicurve_intersection, rho_sigma_eta, IntMatrix2,
    NTType, PrimitiveClass, TorusMulticurve,
};
use genericity::lamination::{
    build_triangulation, enumerate_multicurves, flip_edge, is_valid, IdealTriangulation, NormalCoords, SurfaceSpec,
};
use genericity::lamination::library::GeneratorLibrary;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

pub const SURFACES: [(u32, u32); 4] = [(1, 1), (0, 4), (1, 2), (0, 5)];

pub fn runner(cases: u32) -> TestRunner {
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn finish(r: Result<(), proptest::test_runner::TestError<impl std::fmt::Debug>>) -> Result<(), String> {
    r.map_err(|e| e.to_string())
}

/// Words in `S, S^-1, T, T^-1`, as matrices.
pub fn word_matrix(letters: &[u8]) -> IntMatrix2 {
    let gens = [IntMatrix2::s(), IntMatrix2::s().inverse(), IntMatrix2::t(), IntMatrix2::t().inverse()];
    letters.iter().fold(IntMatrix2::identity(), |acc, &i| &acc * &gens[i as usize % 4])
}

pub fn word(max_len: usize) -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(0u8..4, 0..=max_len)
}

pub fn slope() -> impl Strategy<Value = PrimitiveClass> {
    (-40i64..=40, -40i64..=40)
        .prop_filter("nonzero", |(p, q)| (*p, *q) != (0, 0))
        .prop_map(|(p, q)| {
            let g = num_integer::gcd(p, q);
            PrimitiveClass::from_i64(p / g, q / g).expect("primitive after division")
        })
}

pub fn torus_multicurve() -> impl Strategy<Value = TorusMulticurve> {
    prop::collection::vec((slope(), 1i64..=5), 1..=3).prop_map(TorusMulticurve::from_integer_weights)
}

fn same_type(a: &NTType, b: &NTType) -> bool {
    match (a, b) {
        (NTType::Periodic { order: x }, NTType::Periodic { order: y }) => x == y,
        (NTType::Reducible, NTType::Reducible) => true,
        (NTType::PseudoAnosov { trace: x, .. }, NTType::PseudoAnosov { trace: y, .. }) => x == y,
        _ => false,
    }
}

/// `classify(g m g^-1) = classify(m)`, orders and traces included.
pub fn conjugation_invariance(cases: u32) -> Result<(), String> {
    finish(runner(cases).run(&(word(20), word(10)), |(m, g)| {
        let m = word_matrix(&m);
        let g = word_matrix(&g);
        let conj = &(&g * &m) * &g.inverse();
        let (a, b) = (classify_matrix(&m), classify_matrix(&conj));
        prop_assert!(same_type(&a, &b), "{m} -> {a}, conjugate {conj} -> {b}");
        Ok(())
    }))
}

/// `rho_{sigma,sigma} = l1` for the standard pair `sigma`.
pub fn l1_identity(cases: u32) -> Result<(), String> {
    let sigma = TorusMulticurve::standard_pair();
    finish(runner(cases).run(&word(30), |w| {
        let m = word_matrix(&w);
        let rho = rho_sigma_eta(&sigma, &sigma, &m).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert_eq!(rho, BigRational::from_integer(l1_norm(&m)));
        Ok(())
    }))
}

/// Symmetry, additivity, homogeneity and `SL(2, Z)` equivariance of the
/// intersection form.
pub fn intersection_form(cases: u32) -> Result<(), String> {
    let strat = (torus_multicurve(), torus_multicurve(), torus_multicurve(), 1i64..=7, word(12));
    finish(runner(cases).run(&strat, |(x, y, z, k, w)| {
        let i = multicurve_intersection;
        prop_assert_eq!(i(&x, &y), i(&y, &x));
        prop_assert_eq!(i(&x.sum(&z), &y), i(&x, &y) + i(&z, &y));
        let k = BigRational::from_integer(BigInt::from(k));
        prop_assert_eq!(i(&x.scale(&k), &y), &k * i(&x, &y));
        let m = word_matrix(&w);
        prop_assert_eq!(i(&apply_matrix(&m, &x), &apply_matrix(&m, &y)), i(&x, &y));
        Ok(())
    }))
}

/// Metric axioms, adjacency and equivariance of the Farey distance.
pub fn farey_axioms(cases: u32) -> Result<(), String> {
    finish(runner(cases).run(&(slope(), slope(), slope(), word(15)), |(x, y, z, w)| {
        let d = farey_distance;
        prop_assert_eq!(d(&x, &y), d(&y, &x));
        prop_assert_eq!(d(&x, &y) == 0, x == y);
        prop_assert!(d(&x, &z) <= d(&x, &y) + d(&y, &z));
        let det = (x.p() * y.q() - x.q() * y.p()).magnitude().clone();
        prop_assert_eq!(d(&x, &y) == 1, det == 1u32.into());
        let m = word_matrix(&w);
        prop_assert_eq!(d(&x.apply(&m), &y.apply(&m)), d(&x, &y));
        Ok(())
    }))
}

/// A random valid weight vector: a positive combination of small
/// multicurves.
pub fn weight_vector(t: &IdealTriangulation) -> impl Strategy<Value = NormalCoords> {
    let basis = enumerate_multicurves(t, 8);
    let n = basis.len();
    let ne = t.num_edges();
    prop::collection::vec((0..n, 1i64..=5), 1..=4).prop_map(move |terms| {
        let mut w = vec![0i64; ne];
        for (i, k) in terms {
            for (acc, v) in w.iter_mut().zip(basis[i].iter()) {
                *acc += k * v;
            }
        }
        NormalCoords::new(w)
    })
}

/// Flipping any edge twice is the identity and keeps weights valid.
pub fn flip_involution(cases: u32) -> Result<(), String> {
    for (g, r) in SURFACES {
        let t = build_triangulation(SurfaceSpec::new(g, r).unwrap()).unwrap();
        let edges: Vec<usize> = (0..t.num_edges()).filter(|&e| t.is_flippable(e)).collect();
        finish(runner(cases).run(&weight_vector(&t), |w| {
            for &e in &edges {
                let (t2, w2) = flip_edge(&t, &w, e).map_err(|e| TestCaseError::fail(e.to_string()))?;
                prop_assert!(is_valid(&t2, &w2), "S_{g},{r}: flip {e} of {w} gives invalid {w2}");
                let (t3, w3) = flip_edge(&t2, &w2, e).map_err(|e| TestCaseError::fail(e.to_string()))?;
                prop_assert_eq!(&t3, &t);
                prop_assert_eq!(&w3, &w);
            }
            Ok(())
        }))
        .map_err(|e| format!("S_{g},{r}: {e}"))?;
    }
    Ok(())
}

/// Generators and their inverses map valid weights to valid weights,
/// commute with scaling, and invert each other.
pub fn generator_actions(cases: u32) -> Result<(), String> {
    let lib = GeneratorLibrary::standard();
    for (g, r) in SURFACES {
        let sl = lib.get(SurfaceSpec::new(g, r).unwrap()).unwrap();
        let t = &sl.triangulation;
        let gens = sl.compiled_generators().unwrap();
        finish(runner(cases).run(&(weight_vector(t), 2i64..=9), |(w, k)| {
            for pair in gens.chunks(2) {
                let [(_, f), (_, f_inv)] = pair else { unreachable!("generators come in inverse pairs") };
                let image = f.apply(&w);
                prop_assert!(is_valid(t, &image));
                prop_assert_eq!(f.apply(&w.scale(k)), image.scale(k));
                prop_assert_eq!(f_inv.apply(&image), w.clone());
            }
            Ok(())
        }))
        .map_err(|e| format!("S_{g},{r}: {e}"))?;
    }
    Ok(())
}
