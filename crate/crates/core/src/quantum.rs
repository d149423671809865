//! Stabilizer code parameters `[[n, k, d]]_q` obtained from Hermitian
//! self-orthogonal codes over GF(q^2).

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::agcode::{CodeSource, DistanceMethod, LinearCode};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ParamSource {
    /// Closed-form family evaluated at `(q, m, r)`.
    Formula { m: u32, r: i64, in_range: bool, integral: bool },
    /// Computed from an explicit Hermitian self-orthogonal code.
    DerivedFromCode { distance_verified: bool },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundChecks {
    /// `k + 2d <= n + 2`
    pub singleton_ok: bool,
    pub k_nonnegative: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuantumParams {
    pub q: u32,
    pub n: i64,
    pub k: i64,
    pub d: i64,
    pub source: ParamSource,
    pub bound_checks: BoundChecks,
    /// `k == n`: nothing is protected.
    pub degenerate: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl QuantumParams {
    fn new(q: u32, n: i64, k: i64, d: i64, source: ParamSource) -> Self {
        QuantumParams {
            q,
            n,
            k,
            d,
            source,
            bound_checks: BoundChecks { singleton_ok: k + 2 * d <= n + 2, k_nonnegative: k >= 0 },
            degenerate: k == n,
            notes: Vec::new(),
        }
    }

    pub fn is_valid(&self) -> bool {
        self.bound_checks.k_nonnegative && self.n >= 1 && self.d >= 1
    }

    pub fn triple(&self) -> (i64, i64, i64) {
        (self.n, self.k, self.d)
    }
}

impl std::fmt::Display for QuantumParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[[{}, {}, {}]]_{}", self.n, self.k, self.d, self.q)
    }
}

/// `[[n, n - 2k, d_perp]]_q` from a Hermitian self-orthogonal `[n, k]` code over GF(q^2).
///
/// `d_perp` is the brute-forced minimum distance of the Hermitian dual when it
/// fits in `budget`; otherwise the designed value is reported and tagged as
/// unverified.
pub fn from_self_orthogonal(code: &LinearCode, budget: u128) -> Result<QuantumParams> {
    let q = code.field().subfield_order().ok_or_else(|| Error::UnsupportedField("code must be over GF(q^2)".into()))?;
    if let Some((i, j)) = code.hermitian_violation()? {
        return Err(Error::NotSelfOrthogonal(i, j));
    }
    let n = code.n() as i64;
    let k = n - 2 * code.k() as i64;
    let hdual = code.hermitian_dual()?;
    let dist = hdual.min_distance(budget);
    let (d, verified, note) = match dist.method {
        DistanceMethod::BruteForce => (dist.d.expect("brute force yields d") as i64, true, None),
        // the Hermitian dual of the zero code is the full space
        DistanceMethod::Empty => (1, true, None),
        DistanceMethod::BoundsOnly => match code.source() {
            CodeSource::OnePoint { curve, r, .. } => {
                let half = (curve.q as i64 - 1) * (curve.m as i64 - 1) / 2;
                (r - half + 2, false, Some("dual distance unverified: designed value".to_string()))
            }
            _ => {
                (dist.lower.unwrap_or(1) as i64, false, Some("dual distance unverified: lower bound only".to_string()))
            }
        },
    };
    let mut params = QuantumParams::new(q, n, k, d, ParamSource::DerivedFromCode { distance_verified: verified });
    params.notes.extend(note);
    if params.degenerate {
        params.notes.push("degenerate: zero code protects nothing".into());
    }
    Ok(params)
}

/// `[[q^2, q^2 + (q-1)(m-1)/2 - 2 - 2r, r - (q-1)(m-1)/2 + 2]]_q`, evaluated literally.
pub fn theorem_params(q: u32, m: u32, r: i64) -> QuantumParams {
    let qi = q as i64;
    let num = (qi - 1) * (m as i64 - 1);
    let integral = num % 2 == 0;
    let half = num / 2;
    let n = qi * qi;
    let k = n + half - 2 - 2 * r;
    let d = r - half + 2;
    let in_range = qi - 1 <= r && r <= 2 * (qi - 1);
    let mut params = QuantumParams::new(q, n, k, d, ParamSource::Formula { m, r, in_range, integral });
    if !in_range {
        params.notes.push(format!("r = {r} outside [{}, {}]", qi - 1, 2 * (qi - 1)));
    }
    if !integral {
        params.notes.push("(q-1)(m-1) is odd; values truncated".into());
    }
    if !params.bound_checks.singleton_ok {
        params.notes.push("violates k + 2d <= n + 2".into());
    }
    params
}

/// An externally known code for the comparison column.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnownCode {
    pub n: i64,
    pub k: i64,
    pub d: i64,
    pub reference: String,
}

/// Reads `n,k,d,reference-tag` rows (header optional).
pub fn read_known_codes<R: Read>(input: R) -> Result<Vec<KnownCode>> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(input);
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        if rec.get(0).is_some_and(|f| f == "n") {
            continue;
        }
        let num = |i: usize| -> Result<i64> {
            rec.get(i).and_then(|s| s.parse().ok()).ok_or_else(|| Error::Parse {
                line: rec.position().map_or(0, |p| p.line() as usize),
                msg: format!("bad field {i}"),
            })
        };
        out.push(KnownCode { n: num(0)?, k: num(1)?, d: num(2)?, reference: rec.get(3).unwrap_or("").to_string() });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub m: u32,
    pub r: i64,
    pub params: QuantumParams,
    pub comparison: String,
}

fn compare(p: &QuantumParams, known: &[KnownCode]) -> String {
    let notes: Vec<String> = known
        .iter()
        .filter(|c| c.n == p.n && (c.k == p.k || c.d == p.d))
        .map(|c| {
            let verdict = if c.k == p.k && c.d == p.d {
                "matches"
            } else if c.k >= p.k && c.d >= p.d {
                "dominated by"
            } else if c.k <= p.k && c.d <= p.d {
                "dominates"
            } else {
                "trades off against"
            };
            format!("{verdict} [[{}, {}, {}]] ({})", c.n, c.k, c.d, c.reference)
        })
        .collect();
    notes.join("; ")
}

/// One record per `r` in `rs`, sorted by `r`.
pub fn table(q: u32, m: u32, rs: impl IntoIterator<Item = i64>, known: &[KnownCode]) -> Vec<TableRow> {
    let mut rs: Vec<i64> = rs.into_iter().collect();
    rs.sort_unstable();
    rs.dedup();
    rs.into_iter()
        .map(|r| {
            let params = theorem_params(q, m, r);
            let comparison = compare(&params, known);
            TableRow { m, r, params, comparison }
        })
        .collect()
}

/// CSV with columns `q,m,r,n,k,d,singleton_ok,source,comparison`.
pub fn write_table_csv<W: Write>(rows: &[TableRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["q", "m", "r", "n", "k", "d", "singleton_ok", "source", "comparison"])?;
    for row in rows {
        let p = &row.params;
        let source = match p.source {
            ParamSource::Formula { in_range: true, .. } => "formula",
            ParamSource::Formula { in_range: false, .. } => "formula-out-of-range",
            ParamSource::DerivedFromCode { .. } => "derived-from-code",
        };
        w.write_record([
            p.q.to_string(),
            row.m.to_string(),
            row.r.to_string(),
            p.n.to_string(),
            p.k.to_string(),
            p.d.to_string(),
            p.bound_checks.singleton_ok.to_string(),
            source.to_string(),
            row.comparison.clone(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
