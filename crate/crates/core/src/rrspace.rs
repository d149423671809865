//! Monomial bases of `L(r P_inf)`, the counting function `T(r)`, the Weierstrass
//! semigroup at infinity, and the closed-form dimension formula kept for
//! comparison against computed ranks.

use std::io::Write;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::curve::{Curve, CurvePoint, CurveSpec};
use crate::error::{Error, Result};
use crate::gf::{gcd, Felt, Field};
use crate::linalg::{IncrementalBasis, Matrix};

/// `x^i y^j` with its pole order `i * pole_order_x + j * pole_order_y` at infinity.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Monomial {
    pub i: u32,
    pub j: u32,
    pub pole_order: u64,
}

impl Monomial {
    pub fn eval(&self, f: &Field, x: Felt, y: Felt) -> Felt {
        f.mul(f.pow(x, self.i as u64), f.pow(y, self.j as u64))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialBasis {
    pub r: i64,
    /// Sorted by pole order, then `j`, then `i`.
    pub monomials: Vec<Monomial>,
    /// Candidates rejected by rank filtering, in candidate order.
    pub dropped: Vec<Monomial>,
    pub verified: bool,
}

#[derive(Serialize)]
struct BasisExport<'a> {
    r: i64,
    monomials: Vec<[u32; 2]>,
    dropped: Vec<[u32; 2]>,
    verified: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pole_orders: Option<&'a [u64]>,
}

impl MonomialBasis {
    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn pole_orders(&self) -> Vec<u64> {
        self.monomials.iter().map(|m| m.pole_order).collect()
    }

    /// `{r, monomials: [[i, j], ...], dropped: [...]}`
    pub fn to_json(&self) -> serde_json::Value {
        let export = BasisExport {
            r: self.r,
            monomials: self.monomials.iter().map(|m| [m.i, m.j]).collect(),
            dropped: self.dropped.iter().map(|m| [m.i, m.j]).collect(),
            verified: self.verified,
            pole_orders: None,
        };
        serde_json::to_value(export).expect("plain data")
    }
}

/// All `x^i y^j` with `i*rho_x + j*rho_y <= r`, `i >= 0`, `0 <= j <= q - 1`.
pub fn candidate_monomials(spec: &CurveSpec, r: i64) -> MonomialBasis {
    let mut monomials = Vec::new();
    if r >= 0 {
        let (rx, ry) = (spec.pole_order_x as i64, spec.pole_order_y as i64);
        for j in 0..=spec.j_max() {
            let rest = r - j as i64 * ry;
            if rest < 0 {
                break;
            }
            for i in 0..=(rest / rx) {
                monomials.push(Monomial { i: i as u32, j, pole_order: (i * rx + j as i64 * ry) as u64 });
            }
        }
    }
    monomials.sort_by_key(|m| (m.pole_order, m.j, m.i));
    MonomialBasis { r, monomials, dropped: Vec::new(), verified: false }
}

/// `T(r)`, counted per power of `y` without listing the monomials.
pub fn t_count(spec: &CurveSpec, r: i64) -> u64 {
    if r < 0 {
        return 0;
    }
    (0..=spec.j_max() as i64)
        .map(|j| r - j * spec.pole_order_y as i64)
        .take_while(|&rest| rest >= 0)
        .map(|rest| (rest / spec.pole_order_x as i64 + 1) as u64)
        .sum()
}

/// `T` at a rational argument: the count only depends on its floor.
pub fn t_count_rational(spec: &CurveSpec, r: Ratio<i64>) -> u64 {
    t_count(spec, r.floor().to_integer())
}

/// Evaluation matrix: one row per monomial, one column per affine point.
pub fn evaluation_matrix(field: &Field, monomials: &[Monomial], points: &[CurvePoint]) -> Result<Matrix> {
    let coords = affine_coords(points)?;
    let rows = monomials.iter().map(|m| coords.iter().map(|&(x, y)| m.eval(field, x, y)).collect()).collect();
    Matrix::from_rows(coords.len(), rows)
}

fn affine_coords(points: &[CurvePoint]) -> Result<Vec<(Felt, Felt)>> {
    if points.is_empty() {
        return Err(Error::EmptyEvaluationSet);
    }
    points
        .iter()
        .map(|p| p.coords().ok_or_else(|| Error::InvalidCurve("evaluation points must be affine".into())))
        .collect()
}

/// Greedily keeps the candidates whose evaluation vectors at `points` are
/// linearly independent of those already kept.
pub fn verified_basis(curve: &Curve, r: i64, points: &[CurvePoint]) -> Result<(MonomialBasis, Matrix)> {
    let field = curve.field();
    let coords = affine_coords(points)?;
    let candidates = candidate_monomials(curve.spec(), r);
    let mut basis = IncrementalBasis::new(coords.len());
    let mut kept = Vec::new();
    let mut dropped = Vec::new();
    let mut rows = Vec::new();
    for m in candidates.monomials {
        if basis.rank() == coords.len() {
            dropped.push(m);
            continue;
        }
        let v: Vec<Felt> = coords.iter().map(|&(x, y)| m.eval(field, x, y)).collect();
        if basis.insert(&v, field) {
            kept.push(m);
            rows.push(v);
        } else {
            dropped.push(m);
        }
    }
    let generator = Matrix::from_rows(coords.len(), rows)?;
    Ok((MonomialBasis { r, monomials: kept, dropped, verified: true }, generator))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemigroupTable {
    pub generators: (u64, u64),
    pub bound: u64,
    pub elements: Vec<u64>,
    pub gaps: Vec<u64>,
}

impl SemigroupTable {
    pub fn contains(&self, v: u64) -> bool {
        self.elements.binary_search(&v).is_ok()
    }

    /// Number of elements `<= r`.
    pub fn count_upto(&self, r: u64) -> usize {
        self.elements.partition_point(|&e| e <= r)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["value", "kind"])?;
        for v in 0..=self.bound {
            let kind = if self.contains(v) { "element" } else { "gap" };
            w.write_record([v.to_string().as_str(), kind])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// The numerical semigroup `<a, b>` truncated to `[0, bound]`.
pub fn semigroup_of(a: u64, b: u64, bound: u64) -> Result<SemigroupTable> {
    if a == 0 || b == 0 || gcd(a, b) != 1 {
        return Err(Error::InfiniteGaps(a, b));
    }
    let mut member = vec![false; bound as usize + 1];
    member[0] = true;
    for v in 1..=bound as usize {
        member[v] = (v >= a as usize && member[v - a as usize]) || (v >= b as usize && member[v - b as usize]);
    }
    let (elements, gaps) = (0..=bound).partition(|&v| member[v as usize]);
    Ok(SemigroupTable { generators: (a, b), bound, elements, gaps })
}

/// Weierstrass semigroup at infinity, generated by the pole orders of `x` and `y`.
pub fn semigroup(spec: &CurveSpec, bound: u64) -> Result<SemigroupTable> {
    semigroup_of(spec.pole_order_x as u64, spec.pole_order_y as u64, bound)
}

/// Total number of gaps of `<a, b>` (all gaps lie below `a*b - a - b + 1`).
pub fn total_gaps(a: u64, b: u64) -> Result<u64> {
    let frobenius = (a * b).saturating_sub(a + b);
    Ok(semigroup_of(a, b, frobenius)?.gaps.len() as u64)
}

/// Value of the closed-form dimension formula for `k_r`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormulaValue {
    pub case: u8,
    #[serde(with = "ratio_string")]
    pub k_r: Ratio<i64>,
    pub integral: bool,
}

mod ratio_string {
    use num_rational::Ratio;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Ratio<i64>, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Ratio<i64>, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Evaluates the five-case formula literally, including the
/// `r(q+1) - (q-1)(m-1)/4` middle case.
pub fn dimension_formula(spec: &CurveSpec, r: i64) -> FormulaValue {
    let q = spec.q as i64;
    let m = spec.m as i64;
    let half = Ratio::new((q - 1) * (m - 1), 2);
    let quarter = Ratio::new((q - 1) * (m - 1), 4);
    let rr = Ratio::from_integer(r);
    let q2 = Ratio::from_integer(q * q);
    let (case, k_r) = if r < 0 {
        (1, Ratio::from_integer(0))
    } else if rr <= half {
        (2, Ratio::from_integer(t_count(spec, r) as i64))
    } else if rr < q2 {
        (3, Ratio::from_integer(r * (q + 1)) - quarter)
    } else if rr <= q2 + half {
        (4, q2 - Ratio::from_integer(t_count_rational(spec, q2 + half - rr) as i64))
    } else {
        (5, q2)
    };
    FormulaValue { case, k_r, integral: k_r.is_integer() }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionRow {
    pub r: i64,
    pub formula: FormulaValue,
    /// Rank of the evaluation matrix of all candidates.
    pub rank: usize,
    pub basis_len: usize,
    /// Dimension predicted by Riemann-Roch and the Weierstrass semigroup,
    /// where it is determined without knowing the class of the evaluation divisor.
    pub predicted: Option<i64>,
    pub formula_agrees: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionComparison {
    pub curve: CurveSpec,
    pub n: usize,
    pub genus: u32,
    pub rows: Vec<DimensionRow>,
    /// Values of `r` where the closed-form value differs from the computed rank.
    pub disagreements: Vec<i64>,
}

/// Dimension of `C(D, r P_inf)` predicted without linear algebra:
/// `#(H cap [0, r])` while `r < n`, and `n` once `r >= n + 2g - 1`.
pub fn predicted_dimension(table: &SemigroupTable, r: i64, n: usize, genus: u32) -> Option<i64> {
    let n = n as i64;
    if r < 0 {
        Some(0)
    } else if r < n {
        Some(table.count_upto(r as u64) as i64)
    } else if r >= n + 2 * genus as i64 - 1 {
        Some(n)
    } else {
        None
    }
}

/// Compares the closed-form formula against ranks over all affine points.
pub fn dimension_comparison(curve: &Curve, rs: impl IntoIterator<Item = i64>) -> Result<DimensionComparison> {
    let points = curve.affine_points();
    let g = curve.genus();
    let rs: Vec<i64> = rs.into_iter().collect();
    let bound = rs.iter().copied().max().unwrap_or(0).max(0) as u64;
    let table = semigroup(curve.spec(), bound)?;
    let mut rows = Vec::with_capacity(rs.len());
    let mut disagreements = Vec::new();
    for r in rs {
        let (basis, _) = verified_basis(curve, r, &points)?;
        let cands = candidate_monomials(curve.spec(), r);
        let rank = if cands.is_empty() {
            0
        } else {
            evaluation_matrix(curve.field(), &cands.monomials, &points)?.rank(curve.field())
        };
        let formula = dimension_formula(curve.spec(), r);
        let agrees = formula.k_r == Ratio::from_integer(rank as i64);
        if !agrees {
            disagreements.push(r);
        }
        rows.push(DimensionRow {
            r,
            formula,
            rank,
            basis_len: basis.len(),
            predicted: predicted_dimension(&table, r, points.len(), g),
            formula_agrees: agrees,
        });
    }
    Ok(DimensionComparison { curve: curve.spec().clone(), n: points.len(), genus: g, rows, disagreements })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairs(b: &MonomialBasis) -> Vec<(u32, u32)> {
        b.monomials.iter().map(|m| (m.i, m.j)).collect()
    }

    #[test]
    fn hermitian_r3_candidates() {
        let spec = CurveSpec::hermitian(2).unwrap();
        let b = candidate_monomials(&spec, 3);
        assert_eq!(pairs(&b), vec![(0, 0), (1, 0), (0, 1)]);
        assert!(candidate_monomials(&spec, -1).is_empty());
    }

    #[test]
    fn superelliptic_small_r() {
        let spec = CurveSpec::superelliptic(3, 3).unwrap();
        assert_eq!(pairs(&candidate_monomials(&spec, 2)), vec![(0, 0), (1, 0)]);
        assert_eq!(t_count(&spec, 2), 2);
        assert_eq!(t_count(&spec, -1), 0);
    }

    #[test]
    fn t_increments_bounded_by_y_range() {
        let spec = CurveSpec::superelliptic(3, 3).unwrap();
        for r in 0..=20 {
            let inc = t_count(&spec, r) - t_count(&spec, r - 1);
            assert!(inc <= 3, "r = {r}");
        }
    }

    #[test]
    fn semigroup_two_three() {
        let t = semigroup_of(2, 3, 6).unwrap();
        assert_eq!(t.elements, vec![0, 2, 3, 4, 5, 6]);
        assert_eq!(t.gaps, vec![1]);
        let t0 = semigroup_of(2, 3, 0).unwrap();
        assert_eq!(t0.elements, vec![0]);
        assert!(t0.gaps.is_empty());
        assert!(matches!(semigroup_of(3, 3, 10), Err(Error::InfiniteGaps(3, 3))));
        assert_eq!(total_gaps(4, 5).unwrap(), 6);
    }

    #[test]
    fn semigroup_gap_count_is_genus() {
        for spec in [
            CurveSpec::hermitian(2).unwrap(),
            CurveSpec::hermitian(4).unwrap(),
            CurveSpec::superelliptic(3, 3).unwrap(),
            CurveSpec::superelliptic(5, 2).unwrap(),
            CurveSpec::superelliptic(7, 3).unwrap(),
        ] {
            let g = spec.genus() as u64;
            let t = semigroup(&spec, 2 * g + 4).unwrap();
            assert_eq!(t.gaps.len() as u64, g, "{spec}");
        }
    }

    #[test]
    fn formula_cases() {
        let spec = CurveSpec::superelliptic(3, 3).unwrap();
        assert_eq!(dimension_formula(&spec, -3).case, 1);
        assert_eq!(dimension_formula(&spec, -3).k_r, Ratio::from_integer(0));
        let f = dimension_formula(&spec, 2);
        assert_eq!((f.case, f.k_r), (2, Ratio::from_integer(2)));
        let f = dimension_formula(&spec, 3);
        assert_eq!((f.case, f.k_r), (3, Ratio::from_integer(11)));
        let f = dimension_formula(&spec, 9);
        assert_eq!((f.case, f.k_r), (4, Ratio::from_integer(9 - 2)));
        let f = dimension_formula(&spec, 12);
        assert_eq!((f.case, f.k_r), (5, Ratio::from_integer(9)));
        // q = 5, m = 2: (q-1)(m-1)/4 = 1, half = 2
        let spec = CurveSpec::superelliptic(5, 2).unwrap();
        let f = dimension_formula(&spec, 3);
        assert_eq!((f.case, f.k_r, f.integral), (3, Ratio::from_integer(17), true));
        // q = 3, m = 2 is not a valid curve but (q-1)(m-1)/4 = 1/2 shows the flag
        let odd = CurveSpec { m: 2, ..CurveSpec::superelliptic(3, 3).unwrap() };
        let f = dimension_formula(&odd, 2);
        assert_eq!(f.case, 3);
        assert!(!f.integral);
    }

    #[test]
    fn basis_json_shape() {
        let curve = Curve::new(CurveSpec::hermitian(2).unwrap()).unwrap();
        let (b, g) = verified_basis(&curve, 3, &curve.affine_points()).unwrap();
        assert_eq!(g.rows(), 3);
        let v = b.to_json();
        assert_eq!(v["r"], 3);
        assert_eq!(v["monomials"], serde_json::json!([[0, 0], [1, 0], [0, 1]]));
        assert_eq!(v["dropped"], serde_json::json!([]));
    }

    #[test]
    fn verified_basis_rejects_bad_points() {
        let curve = Curve::new(CurveSpec::hermitian(2).unwrap()).unwrap();
        assert!(matches!(verified_basis(&curve, 3, &[]), Err(Error::EmptyEvaluationSet)));
        assert!(verified_basis(&curve, 3, &[CurvePoint::Infinity]).is_err());
    }
}
