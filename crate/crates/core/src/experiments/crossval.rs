//! Paired runs of the two engines on the once-punctured torus.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_torus::{classify_matrix, IntMatrix2, NTType, PrimitiveClass, TorusMulticurve};
use crate::lamination::classify::{ClassifyBudget, Classifier, Verdict};
use crate::lamination::coords::edge_weight;
use crate::lamination::library::GeneratorLibrary;
use crate::lamination::surface::SurfaceSpec;

use super::density::RhoData;

/// Matrices of the torus generators: `a` twists about the `(1, 0)` curve,
/// `b` about the `(0, 1)` curve, both left-handed.
pub fn generator_matrix(letter: char) -> Result<IntMatrix2> {
    match letter {
        'a' => IntMatrix2::from_i64(1, 1, 0, 1),
        'A' => IntMatrix2::from_i64(1, -1, 0, 1),
        'b' => IntMatrix2::from_i64(1, 0, -1, 1),
        'B' => IntMatrix2::from_i64(1, 0, 1, 1),
        _ => Err(Error::invalid(format!("unknown torus generator {letter:?}"))),
    }
}

/// Matrix of a generator word; in `ab` the letter `b` acts first.
pub fn word_matrix(word: &str) -> Result<IntMatrix2> {
    let mut m = IntMatrix2::identity();
    if word == "1" {
        return Ok(m);
    }
    for ch in word.chars() {
        m = &m * &generator_matrix(ch)?;
    }
    Ok(m)
}

/// The edge weights of the standard triangulation are the intersections with
/// the slopes `(1,0)`, `(0,1)` and `(1,1)`.
pub fn triangulation_dual() -> TorusMulticurve {
    TorusMulticurve::from_integer_weights([
        (PrimitiveClass::horizontal(), 1),
        (PrimitiveClass::vertical(), 1),
        (PrimitiveClass::from_i64(1, 1).expect("primitive"), 1),
    ])
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub word: String,
    pub torus: String,
    pub engine: String,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrossValidation {
    pub checked: usize,
    pub discrepancies: Vec<Discrepancy>,
}

impl CrossValidation {
    pub fn passed(&self) -> bool {
        self.discrepancies.is_empty()
    }
}

/// Order of `m` in `PSL(2, Z)`, for periodic `m`.
fn projective_order(m: &IntMatrix2) -> u32 {
    let mut p = m.clone();
    for n in 1..=6 {
        if p.is_central() {
            return n;
        }
        p = &p * m;
    }
    unreachable!("periodic elements of PSL(2,Z) have order at most 6")
}

/// Compares one word across the engines; `None` when they agree.
fn compare(word: &str, classifier: &Classifier, rho: &RhoData) -> Result<Option<Discrepancy>> {
    let lib = GeneratorLibrary::standard();
    let sl = lib.get(SurfaceSpec::new(1, 1)?)?;
    let m = word_matrix(word)?;
    let exact = classify_matrix(&m);
    let compiled = sl.spell(if word.is_empty() { "1" } else { word })?.compile(&sl.triangulation)?;
    let verdict = classifier.classify(&compiled);
    let mut reason = None;
    match (&exact, &verdict) {
        (NTType::Periodic { .. }, Verdict::Periodic(n)) => {
            if projective_order(&m) != *n {
                reason = Some(format!("period {} against {n}", projective_order(&m)));
            }
        }
        (NTType::Reducible, Verdict::ReducibleCertified(_)) => {}
        (NTType::PseudoAnosov { dilatation, .. }, Verdict::PseudoAnosovCandidate { dilatation: d, .. }) => {
            if (dilatation - d).abs() > 1e-6 * dilatation.max(1.0) {
                reason = Some(format!("dilatation {dilatation} against {d}"));
            }
        }
        _ => reason = Some("verdicts differ".to_string()),
    }
    // F of the marking image equals i(m(sigma), triangulation dual) exactly.
    if reason.is_none() {
        if let Some(mm) = m.to_i64() {
            let f: i64 = sl.gamma0.iter().map(|c| edge_weight(&compiled.apply(c))).sum();
            let r = rho.ceil(mm);
            if f != r {
                reason = Some(format!("F = {f} against rho = {r}"));
            }
        }
    }
    Ok(reason.map(|reason| Discrepancy {
        word: word.to_string(),
        torus: exact.to_string(),
        engine: verdict.label().to_string(),
        reason,
    }))
}

/// Classifies the empty word, the word for `[[2,1],[1,1]]`, and
/// `sample_size` random words of length at most `length_cap` with both
/// engines.
pub fn cross_validate_torus(sample_size: usize, length_cap: usize, seed: u64) -> Result<CrossValidation> {
    let lib = GeneratorLibrary::standard();
    let sl = lib.get(SurfaceSpec::new(1, 1)?)?;
    let classifier = Classifier::new(&sl.triangulation, ClassifyBudget::default());
    let rho = RhoData::new(&TorusMulticurve::standard_pair(), &triangulation_dual())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let letters = ['a', 'A', 'b', 'B'];
    let mut words = vec![String::new(), "aB".to_string()];
    for _ in 0..sample_size {
        let len = rng.gen_range(0..=length_cap);
        words.push((0..len).map(|_| letters[rng.gen_range(0..4)]).collect());
    }
    let mut discrepancies = Vec::new();
    for w in &words {
        if let Some(d) = compare(w, &classifier, &rho)? {
            discrepancies.push(d);
        }
    }
    Ok(CrossValidation { checked: words.len(), discrepancies })
}
