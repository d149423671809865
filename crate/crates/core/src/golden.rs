//! Reference values for the worked examples and the checks that regenerate
//! them from scratch.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::agcode::{build_onepoint_code, hermitian_readings, CodeSource, EvalSet, HermitianReadings, LinearCode};
use crate::curve::{Curve, CurveSpec};
use crate::error::Result;
use crate::gf::Field;
use crate::linalg::Matrix;
use crate::quantum::theorem_params;
use crate::rrspace::{dimension_comparison, DimensionComparison};

/// Generator of `C(D, 3P)` on `y^2 + y = x^3` over GF(4) as a 3x8 matrix of
/// canonical indices (`a -> 2`, `a + 1 -> 3`). The point order is not the
/// canonical one, so only code invariants are compared.
pub const HERMITIAN_Q2_GENERATOR: [[u32; 8]; 3] =
    [[1, 0, 0, 1, 2, 3, 1, 0], [0, 1, 0, 1, 1, 0, 3, 2], [0, 0, 1, 1, 2, 2, 3, 3]];

/// The matching 5x8 parity-check matrix.
pub const HERMITIAN_Q2_PARITY_CHECK: [[u32; 8]; 5] = [
    [1, 0, 0, 0, 0, 3, 3, 1],
    [0, 1, 0, 0, 0, 3, 2, 0],
    [0, 0, 1, 0, 0, 2, 1, 2],
    [0, 0, 0, 1, 0, 2, 0, 3],
    [0, 0, 0, 0, 1, 1, 1, 1],
];

/// Expected `(q, m, r, n, k, d)` rows of the stabilizer tables.
pub const QUANTUM_TABLE: [(u32, u32, i64, i64, i64, i64); 8] = [
    (3, 3, 2, 9, 5, 2),
    (3, 3, 3, 9, 3, 3),
    (3, 3, 4, 9, 1, 4),
    (5, 3, 4, 25, 19, 2),
    (5, 3, 5, 25, 17, 3),
    (5, 3, 6, 25, 15, 4),
    (5, 3, 7, 25, 13, 5),
    (5, 3, 8, 25, 11, 6),
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldenCheck {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub passed: bool,
}

impl GoldenCheck {
    fn new(name: &str, expected: impl ToString, actual: impl ToString) -> Self {
        let (expected, actual) = (expected.to_string(), actual.to_string());
        GoldenCheck { name: name.into(), passed: expected == actual, expected, actual }
    }
}

/// Everything regenerated by [`golden_report`]: pass/fail checks plus
/// observations that are recorded but not judged.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldenReport {
    pub checks: Vec<GoldenCheck>,
    /// Reference `G * H^T == 0`.
    pub reference_orthogonal: bool,
    pub dimension_comparison: DimensionComparison,
    pub hermitian_verdicts: Vec<HermitianReadings>,
}

impl GoldenReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&GoldenCheck> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }
}

fn gf4() -> Result<Arc<Field>> {
    Ok(Arc::new(Field::new(2, 2)?))
}

fn rows<const N: usize>(m: &[[u32; N]]) -> Vec<Vec<u32>> {
    m.iter().map(|r| r.to_vec()).collect()
}

pub fn reference_generator() -> Result<LinearCode> {
    let m = Matrix::from_indices(8, &rows(&HERMITIAN_Q2_GENERATOR))?;
    LinearCode::from_generator(gf4()?, m, CodeSource::Explicit { label: "reference G".into() })
}

pub fn reference_parity_check() -> Result<Matrix> {
    Matrix::from_indices(8, &rows(&HERMITIAN_Q2_PARITY_CHECK))
}

fn params(code: &LinearCode, budget: u128) -> String {
    let d = code.min_distance(budget).d.map_or("?".into(), |d| d.to_string());
    format!("[{}, {}, {}]_{}", code.n(), code.k(), d, code.field().order())
}

/// Regenerates every golden value. `budget` caps brute-force enumeration.
pub fn golden_report(budget: u128) -> Result<GoldenReport> {
    let mut checks = Vec::new();
    let f4 = gf4()?;
    checks.push(GoldenCheck::new("GF(4) modulus", "[1, 1, 1]", format!("{:?}", f4.modulus())));

    let h2 = Curve::new(CurveSpec::hermitian(2)?)?;
    let saturated = build_onepoint_code(&h2, 9, &EvalSet::First(4))?;
    checks.push(GoldenCheck::new("saturated code over GF(4)", "[4, 4, 1]_4", params(&saturated, budget)));
    let words: u64 = saturated.weight_distribution(budget).map_or(0, |w| w.iter().sum());
    checks.push(GoldenCheck::new("saturated code size", 256, words));

    let code = build_onepoint_code(&h2, 3, &EvalSet::AllAffine)?;
    checks.push(GoldenCheck::new("C(D, 3P) on y^2 + y = x^3", "[8, 3, 5]_4", params(&code, budget)));
    checks.push(GoldenCheck::new("dual of C(D, 3P)", "[8, 5, 3]_4", params(&code.dual(), budget)));

    let reference = reference_generator()?;
    let ours = code.weight_distribution(budget).ok();
    let theirs = reference.weight_distribution(budget).ok();
    checks.push(GoldenCheck::new("reference G weight distribution", format!("{ours:?}"), format!("{theirs:?}")));
    let h = reference_parity_check()?;
    checks.push(GoldenCheck::new("reference H rank", 5, h.rank(&f4)));
    let reference_orthogonal = reference.generator().mul_transpose(&h, &f4)?.is_zero();

    for (spec, expected) in [(CurveSpec::superelliptic(3, 3)?, 16), (CurveSpec::hermitian(2)?, 9)] {
        let report = Curve::new(spec.clone())?.maximality_check();
        checks.push(GoldenCheck::new(&format!("points on {spec}"), expected, report.count_points));
        checks.push(GoldenCheck::new(&format!("{spec} is maximal"), true, report.is_maximal));
    }

    for (q, m, r, n, k, d) in QUANTUM_TABLE {
        let p = theorem_params(q, m, r);
        checks.push(GoldenCheck::new(
            &format!("stabilizer q={q} m={m} r={r}"),
            format!("[[{n}, {k}, {d}]] singleton_ok=true"),
            format!("[[{}, {}, {}]] singleton_ok={}", p.n, p.k, p.d, p.bound_checks.singleton_ok),
        ));
    }

    let c33 = Curve::new(CurveSpec::superelliptic(3, 3)?)?;
    let dimension_comparison = dimension_comparison(&c33, 0..=30)?;
    let hermitian_verdicts =
        (0..=2).map(|r| hermitian_readings(&c33, r, &EvalSet::AllAffine)).collect::<Result<_>>()?;

    Ok(GoldenReport { checks, reference_orthogonal, dimension_comparison, hermitian_verdicts })
}
