//! One-point evaluation codes `C(D, r P_inf)`, duals, brute-force distances and
//! self-orthogonality checks.

use std::fmt;
use std::path::Path;
use std::sync::Arc;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curve::{Curve, CurvePoint, CurveSpec};
use crate::error::{Error, Result};
use crate::gf::{Felt, Field};
use crate::linalg::{dot, weight, Matrix};
use crate::rrspace::{verified_basis, MonomialBasis};

/// Default cap on the number of codewords enumerated by brute force.
pub const DEFAULT_BUDGET: u128 = 1 << 20;

/// Which affine points form the evaluation divisor `D`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum EvalSet {
    /// Every affine GF(q^2)-rational point, canonical order.
    #[default]
    AllAffine,
    /// The first `n` affine points in canonical order.
    First(usize),
    /// Positions into the canonical affine point list.
    Indices(Vec<usize>),
}

impl EvalSet {
    pub fn select(&self, curve: &Curve) -> Result<Vec<CurvePoint>> {
        let all = curve.affine_points();
        let pts = match self {
            EvalSet::AllAffine => all,
            EvalSet::First(n) => {
                if *n > all.len() {
                    return Err(Error::DimensionMismatch(format!(
                        "asked for {n} points, curve has {} affine points",
                        all.len()
                    )));
                }
                all[..*n].to_vec()
            }
            EvalSet::Indices(idx) => {
                let mut seen = std::collections::BTreeSet::new();
                idx.iter()
                    .map(|&i| {
                        if !seen.insert(i) {
                            return Err(Error::DimensionMismatch(format!("point {i} selected twice")));
                        }
                        all.get(i)
                            .copied()
                            .ok_or_else(|| Error::DimensionMismatch(format!("point index {i} out of range")))
                    })
                    .collect::<Result<_>>()?
            }
        };
        if pts.is_empty() {
            return Err(Error::EmptyEvaluationSet);
        }
        Ok(pts)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CodeSource {
    OnePoint { curve: CurveSpec, r: i64, eval_set: EvalSet },
    Dual { of: Box<CodeSource> },
    HermitianDual { of: Box<CodeSource> },
    Explicit { label: String },
}

impl fmt::Display for CodeSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CodeSource::OnePoint { curve, r, .. } => write!(f, "C(D, {r}P) on {curve}"),
            CodeSource::Dual { of } => write!(f, "dual of {of}"),
            CodeSource::HermitianDual { of } => write!(f, "Hermitian dual of {of}"),
            CodeSource::Explicit { label } => write!(f, "explicit {label}"),
        }
    }
}

/// A linear code with full-rank generator and parity-check matrices.
#[derive(Clone, Debug)]
pub struct LinearCode {
    field: Arc<Field>,
    generator: Matrix,
    parity_check: Matrix,
    points: Vec<CurvePoint>,
    basis: Option<MonomialBasis>,
    source: CodeSource,
}

impl LinearCode {
    /// Wraps a full-row-rank generator; the parity-check matrix is its null space.
    pub fn from_generator(field: Arc<Field>, generator: Matrix, source: CodeSource) -> Result<Self> {
        if generator.to_indices().iter().flatten().any(|&v| v >= field.order()) {
            return Err(Error::ElementOutOfRange { index: field.order(), order: field.order() });
        }
        let rank = generator.rank(&field);
        if rank != generator.rows() {
            return Err(Error::RankDeficient { rows: generator.rows(), rank });
        }
        let parity_check = generator.null_space(&field);
        Ok(LinearCode { field, generator, parity_check, points: Vec::new(), basis: None, source })
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.generator.cols()
    }

    pub fn k(&self) -> usize {
        self.generator.rows()
    }

    pub fn generator(&self) -> &Matrix {
        &self.generator
    }

    pub fn parity_check(&self) -> &Matrix {
        &self.parity_check
    }

    pub fn points(&self) -> &[CurvePoint] {
        &self.points
    }

    pub fn basis(&self) -> Option<&MonomialBasis> {
        self.basis.as_ref()
    }

    pub fn source(&self) -> &CodeSource {
        &self.source
    }

    /// Zero code or full space.
    pub fn is_trivial(&self) -> bool {
        self.k() == 0 || self.k() == self.n()
    }

    /// Euclidean dual: generator and parity-check matrices swap roles.
    pub fn dual(&self) -> LinearCode {
        LinearCode {
            field: Arc::clone(&self.field),
            generator: self.parity_check.clone(),
            parity_check: self.generator.clone(),
            points: self.points.clone(),
            basis: None,
            source: CodeSource::Dual { of: Box::new(self.source.clone()) },
        }
    }

    /// `{v : <v, c>_H = 0 for all c}` = Euclidean dual of the conjugate code.
    pub fn hermitian_dual(&self) -> Result<LinearCode> {
        if !self.field.is_quadratic_extension() {
            return Err(Error::UnsupportedField("Hermitian dual needs GF(q^2)".into()));
        }
        let conj = self.generator.map(|v| self.field.conj(v));
        let generator = conj.null_space(&self.field);
        let mut code = LinearCode::from_generator(
            Arc::clone(&self.field),
            generator,
            CodeSource::HermitianDual { of: Box::new(self.source.clone()) },
        )?;
        code.points = self.points.clone();
        Ok(code)
    }

    /// Designed distance `n - deg G` for one-point AG codes.
    pub fn designed_distance(&self) -> Option<i64> {
        match &self.source {
            CodeSource::OnePoint { r, .. } => Some(self.n() as i64 - *r),
            _ => None,
        }
    }

    pub fn encode(&self, message: &[Felt]) -> Result<Vec<Felt>> {
        if message.len() != self.k() {
            return Err(Error::DimensionMismatch(format!("message of length {} for k = {}", message.len(), self.k())));
        }
        self.generator.vec_mul(message, &self.field)
    }

    pub fn syndrome(&self, word: &[Felt]) -> Result<Vec<Felt>> {
        self.parity_check.mul_vec(word, &self.field)
    }

    pub fn contains(&self, word: &[Felt]) -> Result<bool> {
        Ok(self.syndrome(word)?.iter().all(|s| s.is_zero()))
    }

    /// Same row space (and length) as `other`.
    pub fn same_code(&self, other: &LinearCode) -> bool {
        *self.field == *other.field && self.generator.same_row_space(&other.generator, &self.field)
    }

    fn codeword_count(&self) -> u128 {
        (self.field.order() as u128).saturating_pow(self.k() as u32)
    }

    fn check_budget(&self, budget: u128) -> Result<()> {
        let needed = self.codeword_count();
        if needed > budget {
            Err(Error::BudgetExceeded { needed, budget })
        } else {
            Ok(())
        }
    }

    /// Number of codewords of each weight `0..=n`, by enumerating all `q^k` messages.
    pub fn weight_distribution(&self, budget: u128) -> Result<Vec<u64>> {
        self.check_budget(budget)?;
        Ok(self.weight_histogram())
    }

    fn weight_histogram(&self) -> Vec<u64> {
        let n = self.n();
        let k = self.k();
        let f = &*self.field;
        let mut hist = vec![0u64; n + 1];
        if k == 0 {
            hist[0] = 1;
            return hist;
        }
        // multiples[row][lambda] = lambda * g_row
        let multiples: Vec<Vec<Vec<Felt>>> = self
            .generator
            .row_iter()
            .map(|row| f.elements().map(|l| row.iter().map(|&v| f.mul(l, v)).collect()).collect())
            .collect();
        (0..f.order() as usize)
            .into_par_iter()
            .map(|l0| {
                let mut local = vec![0u64; n + 1];
                let mut scratch = vec![vec![Felt::ZERO; n]; k];
                scratch[0].copy_from_slice(&multiples[0][l0]);
                walk(1, &multiples, f, &mut scratch, &mut local);
                local
            })
            .reduce(
                || vec![0u64; n + 1],
                |mut a, b| {
                    a.iter_mut().zip(&b).for_each(|(x, y)| *x += y);
                    a
                },
            )
    }

    /// Exact minimum distance when `q^k <= budget`, otherwise designed and
    /// Singleton bounds.
    pub fn min_distance(&self, budget: u128) -> DistanceResult {
        let singleton = self.n() - self.k() + 1;
        if self.k() == 0 {
            return DistanceResult { d: None, lower: None, upper: None, method: DistanceMethod::Empty };
        }
        if self.codeword_count() > budget {
            let lower = self.designed_distance().filter(|&d| d > 0).unwrap_or(1) as usize;
            return DistanceResult {
                d: None,
                lower: Some(lower),
                upper: Some(singleton),
                method: DistanceMethod::BoundsOnly,
            };
        }
        let hist = self.weight_histogram();
        let d = (1..hist.len()).find(|&w| hist[w] > 0);
        DistanceResult { d, lower: d, upper: d, method: DistanceMethod::BruteForce }
    }

    pub fn is_euclidean_self_orthogonal(&self) -> bool {
        self.generator.mul_transpose(&self.generator, &self.field).map(|m| m.is_zero()).unwrap_or(false)
    }

    /// Checks `<lambda g_i, g_j>_H = 0` for every pair of generator rows and
    /// `lambda` in a GF(q)-basis `{1, w}` of GF(q^2). Returns the first
    /// violating row pair.
    pub fn hermitian_violation(&self) -> Result<Option<(usize, usize)>> {
        let f = &*self.field;
        if !f.is_quadratic_extension() {
            return Err(Error::UnsupportedField("Hermitian form needs GF(q^2)".into()));
        }
        let omega = f.elements().find(|&a| f.conj(a) != a).expect("GF(q^2) is larger than GF(q)");
        for i in 0..self.k() {
            for j in 0..self.k() {
                for lambda in [Felt::ONE, omega] {
                    let scaled: Vec<Felt> = self.generator.row(i).iter().map(|&v| f.mul(lambda, v)).collect();
                    if !hermitian_inner(f, &scaled, self.generator.row(j))?.is_zero() {
                        return Ok(Some((i, j)));
                    }
                }
            }
        }
        Ok(None)
    }

    pub fn is_hermitian_self_orthogonal(&self) -> Result<bool> {
        Ok(self.hermitian_violation()?.is_none())
    }

    pub fn report(&self, budget: u128) -> CodeReport {
        let distance = self.min_distance(budget);
        let d_designed = self.designed_distance();
        let singleton_ok = distance.d.map(|d| d <= self.n() - self.k() + 1);
        let goppa_bound_ok = match (distance.d, d_designed) {
            (Some(d), Some(dd)) if dd > 0 => Some(d as i64 >= dd),
            _ => None,
        };
        CodeReport {
            n: self.n(),
            k: self.k(),
            field_order: self.field.order(),
            source: self.source.clone(),
            distance,
            d_designed,
            claimed_length: match &self.source {
                CodeSource::OnePoint { curve, .. } => Some((curve.q * curve.q) as usize),
                _ => None,
            },
            singleton_ok,
            goppa_bound_ok,
            trivial: self.is_trivial(),
            euclidean_self_orthogonal: self.is_euclidean_self_orthogonal(),
            hermitian_self_orthogonal: self.is_hermitian_self_orthogonal().ok(),
            weight_distribution: self.weight_distribution(budget).ok(),
            duality_claim: None,
            hermitian_readings: None,
        }
    }
}

fn walk(depth: usize, multiples: &[Vec<Vec<Felt>>], f: &Field, scratch: &mut [Vec<Felt>], hist: &mut [u64]) {
    let k = multiples.len();
    if depth == k {
        hist[weight(&scratch[depth - 1])] += 1;
        return;
    }
    if depth == k - 1 {
        let partial = &scratch[depth - 1];
        for mult in &multiples[depth] {
            let w = partial.iter().zip(mult).filter(|(&a, &b)| !f.add(a, b).is_zero()).count();
            hist[w] += 1;
        }
        return;
    }
    for mult in &multiples[depth] {
        {
            let (done, rest) = scratch.split_at_mut(depth);
            for ((o, &a), &b) in rest[0].iter_mut().zip(&done[depth - 1]).zip(mult) {
                *o = f.add(a, b);
            }
        }
        walk(depth + 1, multiples, f, scratch, hist);
    }
}

/// `<a, b>_H = sum a_i b_i^q`
pub fn hermitian_inner(f: &Field, a: &[Felt], b: &[Felt]) -> Result<Felt> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch(format!("lengths {} and {}", a.len(), b.len())));
    }
    if !f.is_quadratic_extension() {
        return Err(Error::UnsupportedField("Hermitian form needs GF(q^2)".into()));
    }
    Ok(a.iter().zip(b).fold(Felt::ZERO, |acc, (&x, &y)| f.add(acc, f.mul(x, f.conj(y)))))
}

pub fn euclidean_inner(f: &Field, a: &[Felt], b: &[Felt]) -> Result<Felt> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch(format!("lengths {} and {}", a.len(), b.len())));
    }
    Ok(dot(a, b, f))
}

/// `C(D, r P_inf)`: evaluations of the rank-filtered monomial basis at `D`.
pub fn build_onepoint_code(curve: &Curve, r: i64, eval_set: &EvalSet) -> Result<LinearCode> {
    let points = eval_set.select(curve)?;
    let (basis, generator) = verified_basis(curve, r, &points)?;
    let field = Arc::clone(curve.field());
    let parity_check = generator.null_space(&field);
    Ok(LinearCode {
        field,
        generator,
        parity_check,
        points,
        basis: Some(basis),
        source: CodeSource::OnePoint { curve: curve.spec().clone(), r, eval_set: eval_set.clone() },
    })
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DistanceMethod {
    BruteForce,
    BoundsOnly,
    /// Zero code: minimum distance undefined.
    Empty,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceResult {
    pub d: Option<usize>,
    pub lower: Option<usize>,
    pub upper: Option<usize>,
    pub method: DistanceMethod,
}

/// Outcome of comparing `dual(C_r)` with `C_{r'}`, `r' = q^2 + (q-1)(m-1)/2 - r`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualityClaim {
    pub r: i64,
    pub r_prime: String,
    pub applicable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub dual_dim: Option<usize>,
    pub claimed_dim: Option<usize>,
    pub row_spaces_equal: Option<bool>,
    pub claimed_in_dual: Option<bool>,
    pub dual_in_claimed: Option<bool>,
}

pub fn check_duality_claim(curve: &Curve, r: i64, eval_set: &EvalSet) -> Result<DualityClaim> {
    let spec = curve.spec();
    let q = spec.q as i64;
    let r_prime = Ratio::new(2 * q * q + (q - 1) * (spec.m as i64 - 1), 2) - Ratio::from_integer(r);
    let mut claim = DualityClaim {
        r,
        r_prime: r_prime.to_string(),
        applicable: false,
        reason: None,
        dual_dim: None,
        claimed_dim: None,
        row_spaces_equal: None,
        claimed_in_dual: None,
        dual_in_claimed: None,
    };
    if !r_prime.is_integer() {
        claim.reason = Some("r' is not an integer".into());
        return Ok(claim);
    }
    let rp = r_prime.to_integer();
    if rp < 0 {
        claim.reason = Some("r' < 0".into());
        return Ok(claim);
    }
    let dual = build_onepoint_code(curve, r, eval_set)?.dual();
    let claimed = build_onepoint_code(curve, rp, eval_set)?;
    let f = curve.field();
    claim.applicable = true;
    claim.dual_dim = Some(dual.k());
    claim.claimed_dim = Some(claimed.k());
    claim.row_spaces_equal = Some(dual.same_code(&claimed));
    claim.claimed_in_dual = Some(dual.generator().row_space_contains(claimed.generator(), f));
    claim.dual_in_claimed = Some(claimed.generator().row_space_contains(dual.generator(), f));
    Ok(claim)
}

/// Hermitian self-orthogonality of `C(D, r P)` under the two possible readings
/// of the divisor degree: `r` and `r(q+1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HermitianReadings {
    pub r: i64,
    /// Whether `r <= q - 1`, the range where self-orthogonality is claimed.
    pub claim_applies: bool,
    pub degree_r: bool,
    pub degree_r_q_plus_1: bool,
}

pub fn hermitian_readings(curve: &Curve, r: i64, eval_set: &EvalSet) -> Result<HermitianReadings> {
    let q = curve.spec().q as i64;
    let a = build_onepoint_code(curve, r, eval_set)?.is_hermitian_self_orthogonal()?;
    let b = build_onepoint_code(curve, r * (q + 1), eval_set)?.is_hermitian_self_orthogonal()?;
    Ok(HermitianReadings { r, claim_applies: r < q, degree_r: a, degree_r_q_plus_1: b })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeReport {
    pub n: usize,
    pub k: usize,
    pub field_order: u32,
    pub source: CodeSource,
    pub distance: DistanceResult,
    /// `n - deg G`
    pub d_designed: Option<i64>,
    /// Length `q^2` claimed for the construction, reported next to the actual `n`.
    pub claimed_length: Option<usize>,
    pub singleton_ok: Option<bool>,
    pub goppa_bound_ok: Option<bool>,
    pub trivial: bool,
    pub euclidean_self_orthogonal: bool,
    pub hermitian_self_orthogonal: Option<bool>,
    pub weight_distribution: Option<Vec<u64>>,
    pub duality_claim: Option<DualityClaim>,
    pub hermitian_readings: Option<HermitianReadings>,
}

/// Parses the matrix file format: a header line `q2=<size> n=<n> k=<k>`
/// followed by `k` rows of `n` canonical element indices.
pub fn parse_matrix(text: &str) -> Result<(Arc<Field>, Matrix)> {
    let mut lines =
        text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hline, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "missing header".into() })?;
    let (mut q2, mut n, mut k) = (None, None, None);
    for tok in header.split_whitespace() {
        let (key, val) = tok
            .split_once('=')
            .ok_or_else(|| Error::Parse { line: hline, msg: format!("bad header token {tok:?}") })?;
        let val: u64 = val.parse().map_err(|_| Error::Parse { line: hline, msg: format!("bad number in {tok:?}") })?;
        match key {
            "q2" => q2 = Some(val),
            "n" => n = Some(val as usize),
            "k" => k = Some(val as usize),
            _ => return Err(Error::Parse { line: hline, msg: format!("unknown header key {key:?}") }),
        }
    }
    let missing = |what: &str| Error::Parse { line: hline, msg: format!("header lacks {what}") };
    let (q2, n, k) = (q2.ok_or_else(|| missing("q2"))?, n.ok_or_else(|| missing("n"))?, k.ok_or_else(|| missing("k"))?);
    let field = Arc::new(Field::with_order(q2)?);
    let mut rows = Vec::with_capacity(k);
    for (line, l) in lines {
        let row = l
            .split_whitespace()
            .map(|t| {
                let v: u32 = t.parse().map_err(|_| Error::Parse { line, msg: format!("bad entry {t:?}") })?;
                field
                    .element(v)
                    .map_err(|_| Error::Parse { line, msg: format!("entry {v} is not an element of GF({q2})") })
            })
            .collect::<Result<Vec<_>>>()?;
        if row.len() != n {
            return Err(Error::Parse { line, msg: format!("expected {n} entries, found {}", row.len()) });
        }
        rows.push(row);
    }
    if rows.len() != k {
        return Err(Error::Parse { line: hline, msg: format!("expected {k} rows, found {}", rows.len()) });
    }
    Ok((field, Matrix::from_rows(n, rows)?))
}

pub fn format_matrix(field: &Field, m: &Matrix) -> String {
    let mut out = format!("q2={} n={} k={}\n", field.order(), m.cols(), m.rows());
    for row in m.row_iter() {
        let line: Vec<String> = row.iter().map(|v| v.index().to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

pub fn load_explicit_code_str(text: &str, label: &str) -> Result<LinearCode> {
    let (field, m) = parse_matrix(text)?;
    LinearCode::from_generator(field, m, CodeSource::Explicit { label: label.to_string() })
}

pub fn load_explicit_code(path: &Path) -> Result<LinearCode> {
    let text = std::fs::read_to_string(path)?;
    load_explicit_code_str(&text, &path.display().to_string())
}
