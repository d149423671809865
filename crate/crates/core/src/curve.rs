//! The curve families `y^n = x^m + x` (with `n = (q+1)/2`) and the Hermitian
//! curve `y^q + y = x^(q+1)`, both over GF(q^2), modelled as an affine plane
//! curve plus one point at infinity.

use std::fmt;
use std::io::Write;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{gcd, prime_power, Felt, Field};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// `y^n = x^m + x` with `n = (q + 1) / 2`.
    Superelliptic,
    /// `y^q + y = x^(q + 1)`.
    Hermitian,
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "superelliptic" | "cyclic" => Ok(Family::Superelliptic),
            "hermitian" => Ok(Family::Hermitian),
            other => Err(Error::InvalidCurve(format!("unknown family {other:?}"))),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Superelliptic => "superelliptic",
            Family::Hermitian => "hermitian",
        })
    }
}

/// Curve parameters. For the Hermitian family `n = q` and `m = q + 1` are the
/// exponents of `y` and `x`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CurveSpec {
    pub family: Family,
    pub q: u32,
    pub n: u32,
    pub m: u32,
    pub pole_order_x: u32,
    pub pole_order_y: u32,
    /// Hypotheses of the family that fail for these parameters (only
    /// populated by [`CurveSpec::superelliptic_relaxed`]).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub violations: Vec<String>,
}

/// Genus `(m - 1)(n - 1) / 2`; odd numerators are rejected.
pub fn genus_formula(m: u32, n: u32) -> Result<u32> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidCurve("exponents must be positive".into()));
    }
    let num = (m - 1) * (n - 1);
    if num % 2 == 1 {
        return Err(Error::InvalidCurve(format!("(m-1)(n-1) = {num} is odd, genus would not be an integer")));
    }
    Ok(num / 2)
}

impl CurveSpec {
    /// `y^((q+1)/2) = x^m + x` over GF(q^2), with all hypotheses enforced.
    pub fn superelliptic(q: u32, m: u32) -> Result<Self> {
        let spec = Self::superelliptic_relaxed(q, m)?;
        if !spec.violations.is_empty() {
            return Err(Error::InvalidCurve(spec.violations.join("; ")));
        }
        Ok(spec)
    }

    /// Like [`CurveSpec::superelliptic`] but the gcd hypotheses are recorded in
    /// `violations` instead of rejected. Structural requirements (odd prime
    /// power `q`, `m >= 2`, integral genus) are still enforced.
    pub fn superelliptic_relaxed(q: u32, m: u32) -> Result<Self> {
        if prime_power(q as u64).is_none() {
            return Err(Error::InvalidCurve(format!("q = {q} is not a prime power")));
        }
        if q.is_multiple_of(2) {
            return Err(Error::InvalidCurve(format!("q = {q} is even, (q+1)/2 is not an integer")));
        }
        let n = q.div_ceil(2);
        if n < 2 {
            return Err(Error::InvalidCurve("n = (q+1)/2 must be at least 2".into()));
        }
        if m < 2 {
            return Err(Error::InvalidCurve(format!("m = {m} must be at least 2")));
        }
        genus_formula(m, n)?;
        let mut violations = Vec::new();
        if gcd(n as u64, m as u64) != 1 {
            violations.push(format!("gcd(n, m) = gcd({n}, {m}) != 1"));
        }
        if gcd(q as u64, n as u64) != 1 {
            violations.push(format!("gcd(q, n) = gcd({q}, {n}) != 1"));
        }
        if gcd(q as u64, (m - 1) as u64) != 1 {
            violations.push(format!("gcd(q, m-1) = gcd({q}, {}) != 1", m - 1));
        }
        Ok(CurveSpec { family: Family::Superelliptic, q, n, m, pole_order_x: n, pole_order_y: m, violations })
    }

    pub fn hermitian(q: u32) -> Result<Self> {
        if prime_power(q as u64).is_none() {
            return Err(Error::InvalidCurve(format!("q = {q} is not a prime power")));
        }
        Ok(CurveSpec {
            family: Family::Hermitian,
            q,
            n: q,
            m: q + 1,
            pole_order_x: q,
            pole_order_y: q + 1,
            violations: Vec::new(),
        })
    }

    pub fn new(family: Family, q: u32, m: Option<u32>) -> Result<Self> {
        match family {
            Family::Superelliptic => {
                Self::superelliptic(q, m.ok_or_else(|| Error::InvalidCurve("the superelliptic family needs m".into()))?)
            }
            Family::Hermitian => Self::hermitian(q),
        }
    }

    pub fn genus(&self) -> u32 {
        match self.family {
            Family::Superelliptic => genus_formula(self.m, self.n).expect("validated at construction"),
            Family::Hermitian => self.q * (self.q - 1) / 2,
        }
    }

    /// Largest power of `y` admitted in the monomial candidates.
    pub fn j_max(&self) -> u32 {
        self.q - 1
    }

    pub fn equation(&self) -> String {
        match self.family {
            Family::Superelliptic => format!("y^{} = x^{} + x", self.n, self.m),
            Family::Hermitian => format!("y^{} + y = x^{}", self.q, self.q + 1),
        }
    }
}

impl fmt::Display for CurveSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} over GF({})", self.equation(), self.q * self.q)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CurvePoint {
    Affine { x: Felt, y: Felt },
    Infinity,
}

impl CurvePoint {
    pub fn affine(x: Felt, y: Felt) -> Self {
        CurvePoint::Affine { x, y }
    }

    pub fn is_affine(&self) -> bool {
        matches!(self, CurvePoint::Affine { .. })
    }

    pub fn coords(&self) -> Option<(Felt, Felt)> {
        match *self {
            CurvePoint::Affine { x, y } => Some((x, y)),
            CurvePoint::Infinity => None,
        }
    }
}

/// Point count against the Hasse-Weil upper bound over GF(q^2).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaximalityReport {
    pub affine_points: u64,
    /// Affine points plus the point at infinity.
    pub count_points: u64,
    pub genus: u32,
    /// `q^2 + 1 + 2 g q`
    pub expected: u64,
    pub is_maximal: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub violations: Vec<String>,
}

/// A curve together with its field of definition GF(q^2).
#[derive(Clone, Debug)]
pub struct Curve {
    spec: CurveSpec,
    field: Arc<Field>,
}

impl Curve {
    pub fn new(spec: CurveSpec) -> Result<Self> {
        let (p, s) = prime_power(spec.q as u64)
            .ok_or_else(|| Error::InvalidCurve(format!("q = {} is not a prime power", spec.q)))?;
        let field = Arc::new(Field::new(p, 2 * s)?);
        Ok(Curve { spec, field })
    }

    /// Uses an existing GF(q^2) (e.g. one built with a custom modulus).
    pub fn with_field(spec: CurveSpec, field: Arc<Field>) -> Result<Self> {
        if field.subfield_order() != Some(spec.q) {
            return Err(Error::InvalidCurve(format!("field of order {} is not GF({}^2)", field.order(), spec.q)));
        }
        Ok(Curve { spec, field })
    }

    pub fn spec(&self) -> &CurveSpec {
        &self.spec
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn genus(&self) -> u32 {
        self.spec.genus()
    }

    fn lhs(&self, y: Felt) -> Felt {
        let f = &self.field;
        match self.spec.family {
            Family::Superelliptic => f.pow(y, self.spec.n as u64),
            Family::Hermitian => f.add(f.pow(y, self.spec.q as u64), y),
        }
    }

    fn rhs(&self, x: Felt) -> Felt {
        let f = &self.field;
        match self.spec.family {
            Family::Superelliptic => f.add(f.pow(x, self.spec.m as u64), x),
            Family::Hermitian => f.pow(x, self.spec.q as u64 + 1),
        }
    }

    pub fn is_on_curve(&self, pt: &CurvePoint) -> Result<bool> {
        match *pt {
            CurvePoint::Infinity => Ok(true),
            CurvePoint::Affine { x, y } => {
                for v in [x, y] {
                    self.field.element(v.index())?;
                }
                Ok(self.lhs(y) == self.rhs(x))
            }
        }
    }

    /// Affine GF(q^2)-rational points in canonical `(x, y)` order.
    pub fn affine_points(&self) -> Vec<CurvePoint> {
        let order = self.field.order() as usize;
        // bucket y by the value of the y-side of the equation
        let mut fibres: Vec<Vec<Felt>> = vec![Vec::new(); order];
        for y in self.field.elements() {
            fibres[self.lhs(y).index() as usize].push(y);
        }
        let mut pts = Vec::new();
        for x in self.field.elements() {
            for &y in &fibres[self.rhs(x).index() as usize] {
                pts.push(CurvePoint::affine(x, y));
            }
        }
        pts
    }

    /// Affine points followed by the point at infinity.
    pub fn enumerate_points(&self) -> Vec<CurvePoint> {
        let mut pts = self.affine_points();
        pts.push(CurvePoint::Infinity);
        pts
    }

    pub fn maximality_check(&self) -> MaximalityReport {
        let affine = self.affine_points().len() as u64;
        let q = self.spec.q as u64;
        let g = self.genus();
        let expected = q * q + 1 + 2 * g as u64 * q;
        MaximalityReport {
            affine_points: affine,
            count_points: affine + 1,
            genus: g,
            expected,
            is_maximal: affine + 1 == expected,
            violations: self.spec.violations.clone(),
        }
    }

    /// Writes `kind,x,y,x_index,y_index` rows; coordinates in coefficient notation.
    pub fn write_points_csv<W: Write>(&self, points: &[CurvePoint], out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["kind", "x", "y", "x_index", "y_index"])?;
        for pt in points {
            match pt {
                CurvePoint::Affine { x, y } => w.write_record([
                    "affine".to_string(),
                    self.field.coeff_string(*x),
                    self.field.coeff_string(*y),
                    x.index().to_string(),
                    y.index().to_string(),
                ])?,
                CurvePoint::Infinity => w.write_record(["infinity", "", "", "", ""])?,
            }
        }
        w.flush()?;
        Ok(())
    }
}
