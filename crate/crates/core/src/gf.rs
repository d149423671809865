//! Finite fields GF(p^e) in polynomial-basis representation.
//!
//! Elements are stored as their canonical index `c0 + c1*p + ... + c_{e-1}*p^(e-1)`,
//! where `c_i` are the coordinates in the basis `1, x, ..., x^(e-1)` modulo the
//! field's defining polynomial. Index order is the canonical enumeration order:
//! zero first, then lexicographic on the coefficient vector read from the
//! constant term upwards (GF(4) enumerates as `0, 1, a, a+1`).
//!
//! Multiplication goes through log/exp tables built from a primitive element.
//! When `e` is even the field is treated as GF(q^2) with `q = p^(e/2)` and the
//! Frobenius map `a -> a^q` is tabulated once.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_FIELD_ORDER: u64 = 1 << 16;

/// Additive tables are materialised up to this order.
const ADD_TABLE_MAX: u32 = 256;

/// Conway polynomials, constant term first.
const CONWAY: &[(u32, u32, &[u32])] = &[
    (2, 1, &[1, 1]),
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (2, 5, &[1, 0, 1, 0, 0, 1]),
    (2, 6, &[1, 1, 0, 1, 1, 0, 1]),
    (2, 7, &[1, 1, 0, 0, 0, 0, 0, 1]),
    (2, 8, &[1, 0, 1, 1, 1, 0, 0, 0, 1]),
    (3, 1, &[1, 1]),
    (3, 2, &[2, 2, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (3, 4, &[2, 0, 0, 2, 1]),
    (5, 1, &[3, 1]),
    (5, 2, &[2, 4, 1]),
    (5, 3, &[3, 3, 0, 1]),
    (7, 1, &[4, 1]),
    (7, 2, &[3, 6, 1]),
    (11, 2, &[2, 7, 1]),
    (13, 2, &[2, 12, 1]),
];

/// A field element, identified by its canonical index.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Felt(u32);

impl Felt {
    pub const ZERO: Felt = Felt(0);
    pub const ONE: Felt = Felt(1);

    pub const fn from_index(index: u32) -> Self {
        Felt(index)
    }

    pub const fn index(self) -> u32 {
        self.0
    }

    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// JSON-serialisable description of a field: `{p, e, modulus, primitive}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescription {
    pub p: u32,
    pub e: u32,
    pub order: u32,
    /// Monic defining polynomial, constant term first (length `e + 1`).
    pub modulus: Vec<u32>,
    /// Coefficients of the primitive element (length `e`).
    pub primitive: Vec<u32>,
}

/// GF(p^e) with precomputed arithmetic tables. Immutable after construction.
pub struct Field {
    p: u32,
    e: u32,
    order: u32,
    modulus: Vec<u32>,
    primitive: Felt,
    // exp has length 2 * (order - 1) so that log a + log b never needs a reduction.
    exp: Vec<u32>,
    log: Vec<u32>,
    neg: Vec<u32>,
    add_table: Option<Vec<u16>>,
    conj: Option<Vec<u32>>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("p", &self.p)
            .field("e", &self.e)
            .field("modulus", &self.modulus)
            .field("primitive", &self.primitive)
            .finish()
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.e == other.e && self.modulus == other.modulus
    }
}

impl Eq for Field {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `n` as `p^e` with `p` prime, if possible.
pub fn prime_power(n: u64) -> Option<(u32, u32)> {
    if n < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= n && !n.is_multiple_of(p) {
        p += 1;
    }
    if !n.is_multiple_of(p) {
        p = n;
    }
    let mut m = n;
    let mut e = 0;
    while m.is_multiple_of(p) {
        m /= p;
        e += 1;
    }
    (m == 1).then_some((p as u32, e))
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Remainder of `a` modulo the monic polynomial `m` over GF(p).
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let dm = m.len() - 1;
    let mut r = a.to_vec();
    while r.len() > dm {
        let lead = r.pop().unwrap();
        if lead != 0 {
            let off = r.len() - dm;
            for (k, &mk) in m[..dm].iter().enumerate() {
                let sub = (lead as u64 * mk as u64 % p as u64) as u32;
                r[off + k] = (r[off + k] + p - sub) % p;
            }
        }
    }
    r.resize(dm, 0);
    r
}

fn poly_mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ai as u64 * bj as u64) % p as u64;
        }
    }
    let prod: Vec<u32> = prod.into_iter().map(|c| c as u32).collect();
    poly_rem(&prod, m, p)
}

fn poly_powmod(base: &[u32], mut k: u64, m: &[u32], p: u32) -> Vec<u32> {
    let e = m.len() - 1;
    let mut acc = vec![0; e];
    acc[0] = 1;
    let mut b = base.to_vec();
    while k > 0 {
        if k & 1 == 1 {
            acc = poly_mulmod(&acc, &b, m, p);
        }
        b = poly_mulmod(&b, &b, m, p);
        k >>= 1;
    }
    acc
}

fn is_one(v: &[u32]) -> bool {
    v[0] == 1 && v[1..].iter().all(|&c| c == 0)
}

/// Irreducibility by trial division with every monic polynomial of degree
/// at most `deg / 2`.
pub fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let deg = modulus.len() - 1;
    if deg == 0 {
        return false;
    }
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for idx in 0..count {
            let mut f = index_to_coeffs(idx as u32, p, d as u32);
            f.push(1);
            if poly_rem(modulus, &f, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn index_to_coeffs(mut idx: u32, p: u32, e: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(e as usize);
    for _ in 0..e {
        out.push(idx % p);
        idx /= p;
    }
    out
}

fn coeffs_to_index(coeffs: &[u32], p: u32) -> u32 {
    coeffs.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// Looks up the built-in defining polynomial for GF(p^e), falling back to the
/// first primitive polynomial in canonical order.
pub fn default_modulus(p: u32, e: u32) -> Result<Vec<u32>> {
    validate_params(p, e)?;
    if let Some((_, _, m)) = CONWAY.iter().find(|(cp, ce, _)| *cp == p && *ce == e) {
        return Ok(m.to_vec());
    }
    let order = (p as u64).pow(e);
    let factors = prime_factors(order - 1);
    for idx in 0..(p as u64).pow(e) {
        let mut m = index_to_coeffs(idx as u32, p, e);
        if m[0] == 0 {
            continue;
        }
        m.push(1);
        if !is_irreducible(&m, p) {
            continue;
        }
        let mut x = vec![0; e as usize];
        if e == 1 {
            // GF(p)[x]/(x - c): x reduces to the constant c.
            x[0] = (p - m[0]) % p;
        } else {
            x[1] = 1;
        }
        if factors.iter().all(|&f| !is_one(&poly_powmod(&x, (order - 1) / f, &m, p))) {
            return Ok(m);
        }
    }
    Err(Error::InvalidField(format!("no primitive polynomial found for GF({p}^{e})")))
}

fn validate_params(p: u32, e: u32) -> Result<()> {
    if !is_prime(p as u64) {
        return Err(Error::InvalidField(format!("characteristic {p} is not prime")));
    }
    if e == 0 {
        return Err(Error::InvalidField("extension degree must be at least 1".into()));
    }
    let order = (p as u64).checked_pow(e).unwrap_or(u64::MAX);
    if order > MAX_FIELD_ORDER {
        return Err(Error::FieldTooLarge(order));
    }
    Ok(())
}

impl Field {
    /// GF(p^e) with the built-in defining polynomial.
    pub fn new(p: u32, e: u32) -> Result<Self> {
        let modulus = default_modulus(p, e)?;
        Self::with_modulus(p, e, modulus)
    }

    /// Field of the given prime-power order.
    pub fn with_order(order: u64) -> Result<Self> {
        let (p, e) = prime_power(order).ok_or_else(|| Error::InvalidField(format!("{order} is not a prime power")))?;
        Self::new(p, e)
    }

    /// GF(p^e) with a user-supplied monic irreducible modulus (constant term first).
    pub fn with_modulus(p: u32, e: u32, modulus: Vec<u32>) -> Result<Self> {
        validate_params(p, e)?;
        if modulus.len() != e as usize + 1 {
            return Err(Error::InvalidField(format!(
                "modulus must have {} coefficients, got {}",
                e + 1,
                modulus.len()
            )));
        }
        if modulus[e as usize] != 1 || modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidField("modulus must be monic with coefficients in [0, p)".into()));
        }
        if !is_irreducible(&modulus, p) {
            return Err(Error::ReducibleModulus { p, modulus });
        }

        let order = p.pow(e);
        let group = (order - 1) as u64;
        let factors = prime_factors(group);
        let primitive = (1..order)
            .find(|&idx| {
                let v = index_to_coeffs(idx, p, e);
                factors.iter().all(|&f| !is_one(&poly_powmod(&v, group / f, &modulus, p)))
            })
            .expect("multiplicative group of a finite field is cyclic");
        let g = index_to_coeffs(primitive, p, e);

        let n = group as usize;
        let mut exp = vec![0u32; 2 * n.max(1)];
        let mut log = vec![u32::MAX; order as usize];
        let mut cur = index_to_coeffs(1, p, e);
        for i in 0..n {
            let idx = coeffs_to_index(&cur, p);
            exp[i] = idx;
            exp[i + n] = idx;
            log[idx as usize] = i as u32;
            cur = poly_mulmod(&cur, &g, &modulus, p);
        }

        let neg = (0..order)
            .map(|a| {
                let c: Vec<u32> = index_to_coeffs(a, p, e).iter().map(|&c| (p - c) % p).collect();
                coeffs_to_index(&c, p)
            })
            .collect();

        let mut field =
            Field { p, e, order, modulus, primitive: Felt(primitive), exp, log, neg, add_table: None, conj: None };

        if order <= ADD_TABLE_MAX && p != 2 {
            let mut table = vec![0u16; (order * order) as usize];
            for a in 0..order {
                for b in 0..order {
                    table[(a * order + b) as usize] = field.add_digits(a, b) as u16;
                }
            }
            field.add_table = Some(table);
        }

        if e.is_multiple_of(2) {
            let q = p.pow(e / 2) as u64;
            let conj = (0..order).map(|a| field.pow(Felt(a), q).0).collect();
            field.conj = Some(conj);
        }

        Ok(field)
    }

    pub fn from_description(desc: &FieldDescription) -> Result<Self> {
        let field = Self::with_modulus(desc.p, desc.e, desc.modulus.clone())?;
        if !desc.primitive.is_empty() {
            let g = field.from_coeffs(&desc.primitive)?;
            if field.multiplicative_order(g) != Some(field.order as u64 - 1) {
                return Err(Error::InvalidField("declared primitive element is not primitive".into()));
            }
        }
        Ok(field)
    }

    pub fn description(&self) -> FieldDescription {
        FieldDescription {
            p: self.p,
            e: self.e,
            order: self.order,
            modulus: self.modulus.clone(),
            primitive: self.coeffs(self.primitive),
        }
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn primitive(&self) -> Felt {
        self.primitive
    }

    /// The element `x` of the polynomial basis (the class of the indeterminate).
    pub fn generator(&self) -> Felt {
        if self.e == 1 {
            Felt((self.p - self.modulus[0]) % self.p)
        } else {
            Felt(self.p)
        }
    }

    /// All elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = Felt> + '_ {
        (0..self.order).map(Felt)
    }

    pub fn element(&self, index: u32) -> Result<Felt> {
        if index < self.order {
            Ok(Felt(index))
        } else {
            Err(Error::ElementOutOfRange { index, order: self.order })
        }
    }

    pub fn contains(&self, a: Felt) -> bool {
        a.0 < self.order
    }

    pub fn coeffs(&self, a: Felt) -> Vec<u32> {
        index_to_coeffs(a.0, self.p, self.e)
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<Felt> {
        if coeffs.len() != self.e as usize || coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::InvalidField(format!("expected {} coefficients in [0, {})", self.e, self.p)));
        }
        Ok(Felt(coeffs_to_index(coeffs, self.p)))
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, v: i64) -> Felt {
        Felt(v.rem_euclid(self.p as i64) as u32)
    }

    fn add_digits(&self, mut a: u32, mut b: u32) -> u32 {
        let p = self.p;
        let (mut out, mut place) = (0, 1);
        for _ in 0..self.e {
            out += (a % p + b % p) % p * place;
            a /= p;
            b /= p;
            place *= p;
        }
        out
    }

    #[inline]
    pub fn add(&self, a: Felt, b: Felt) -> Felt {
        if self.p == 2 {
            Felt(a.0 ^ b.0)
        } else if let Some(t) = &self.add_table {
            Felt(t[(a.0 * self.order + b.0) as usize] as u32)
        } else {
            Felt(self.add_digits(a.0, b.0))
        }
    }

    #[inline]
    pub fn neg(&self, a: Felt) -> Felt {
        Felt(self.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: Felt, b: Felt) -> Felt {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Felt, b: Felt) -> Felt {
        if a.0 == 0 || b.0 == 0 {
            return Felt::ZERO;
        }
        Felt(self.exp[(self.log[a.0 as usize] + self.log[b.0 as usize]) as usize])
    }

    pub fn inv(&self, a: Felt) -> Result<Felt> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        let n = self.order - 1;
        Ok(Felt(self.exp[((n - self.log[a.0 as usize]) % n) as usize]))
    }

    pub fn div(&self, a: Felt, b: Felt) -> Result<Felt> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Felt, k: u64) -> Felt {
        if k == 0 {
            return Felt::ONE;
        }
        if a.0 == 0 {
            return Felt::ZERO;
        }
        let n = (self.order - 1) as u64;
        let l = self.log[a.0 as usize] as u64;
        Felt(self.exp[((l * (k % n)) % n) as usize])
    }

    /// Discrete log base the primitive element.
    pub fn log(&self, a: Felt) -> Option<u32> {
        (a.0 != 0).then(|| self.log[a.0 as usize])
    }

    pub fn exp(&self, k: u64) -> Felt {
        let n = (self.order - 1) as u64;
        Felt(self.exp[(k % n) as usize])
    }

    pub fn multiplicative_order(&self, a: Felt) -> Option<u64> {
        let l = self.log(a)? as u64;
        let n = (self.order - 1) as u64;
        Some(n / gcd(l, n))
    }

    /// Order `q` of the distinguished subfield when this is GF(q^2).
    pub fn subfield_order(&self) -> Option<u32> {
        self.e.is_multiple_of(2).then(|| self.p.pow(self.e / 2))
    }

    /// The conjugation `a -> a^q` on GF(q^2).
    pub fn frobenius_q(&self, a: Felt) -> Result<Felt> {
        match &self.conj {
            Some(t) => Ok(Felt(t[a.0 as usize])),
            None => Err(Error::UnsupportedField(format!("GF({}^{}) is not a quadratic extension", self.p, self.e))),
        }
    }

    #[inline]
    pub(crate) fn conj(&self, a: Felt) -> Felt {
        Felt(self.conj.as_ref().expect("quadratic extension")[a.0 as usize])
    }

    pub fn is_quadratic_extension(&self) -> bool {
        self.conj.is_some()
    }

    pub fn is_in_subfield(&self, a: Felt) -> Result<bool> {
        Ok(self.frobenius_q(a)? == a)
    }

    /// Elements of GF(q) inside GF(q^2), in canonical order.
    pub fn subfield_elements(&self) -> Result<Vec<Felt>> {
        let t = self.conj.as_ref().ok_or_else(|| {
            Error::UnsupportedField(format!("GF({}^{}) is not a quadratic extension", self.p, self.e))
        })?;
        Ok((0..self.order).filter(|&a| t[a as usize] == a).map(Felt).collect())
    }

    /// Polynomial notation in the basis element `a`, e.g. `2a^2+a+1`.
    pub fn format(&self, v: Felt) -> String {
        let c = self.coeffs(v);
        let mut terms = Vec::new();
        for (i, &ci) in c.iter().enumerate().rev() {
            if ci == 0 {
                continue;
            }
            let coef = if ci == 1 && i > 0 { String::new() } else { ci.to_string() };
            terms.push(match i {
                0 => coef,
                1 => format!("{coef}a"),
                _ => format!("{coef}a^{i}"),
            });
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }

    /// Space-separated coefficient vector, constant term first.
    pub fn coeff_string(&self, v: Felt) -> String {
        self.coeffs(v).iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ")
    }
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Embedding of GF(p^s) into GF(p^t) for `s | t`, sending the basis element of
/// the small field to the first root (canonical order) of its modulus.
#[derive(Debug, Clone)]
pub struct SubfieldEmbedding {
    image: Vec<Felt>,
}

impl SubfieldEmbedding {
    pub fn new(small: &Field, big: &Field) -> Result<Self> {
        if small.p != big.p || !big.e.is_multiple_of(small.e) {
            return Err(Error::UnsupportedField(format!(
                "GF({}^{}) does not embed in GF({}^{})",
                small.p, small.e, big.p, big.e
            )));
        }
        let eval = |x: Felt, poly: &[u32]| {
            poly.iter().rev().fold(Felt::ZERO, |acc, &c| big.add(big.mul(acc, x), big.from_int(c as i64)))
        };
        let beta = big
            .elements()
            .find(|&x| eval(x, &small.modulus).is_zero())
            .ok_or_else(|| Error::UnsupportedField("modulus has no root in the extension".into()))?;
        let image = small.elements().map(|a| eval(beta, &small.coeffs(a))).collect();
        Ok(SubfieldEmbedding { image })
    }

    pub fn embed(&self, a: Felt) -> Result<Felt> {
        self.image
            .get(a.0 as usize)
            .copied()
            .ok_or(Error::ElementOutOfRange { index: a.0, order: self.image.len() as u32 })
    }

    pub fn image(&self) -> &[Felt] {
        &self.image
    }
}

/// A field element bundled with its field, for callers that need mismatch
/// checking (bindings, user input).
#[derive(Clone)]
pub struct FieldElement {
    field: Arc<Field>,
    value: Felt,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in GF({}^{})", self.field.format(self.value), self.field.p, self.field.e)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.field.format(self.value))
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value && same_field(&self.field, &other.field)
    }
}

fn same_field(a: &Arc<Field>, b: &Arc<Field>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl FieldElement {
    pub fn new(field: Arc<Field>, value: Felt) -> Result<Self> {
        field.element(value.0)?;
        Ok(FieldElement { field, value })
    }

    pub fn value(&self) -> Felt {
        self.value
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    fn check(&self, other: &Self) -> Result<()> {
        if same_field(&self.field, &other.field) {
            Ok(())
        } else {
            Err(Error::FieldMismatch {
                left: format!("GF({}^{}) mod {:?}", self.field.p, self.field.e, self.field.modulus),
                right: format!("GF({}^{}) mod {:?}", other.field.p, other.field.e, other.field.modulus),
            })
        }
    }

    fn with(&self, value: Felt) -> Self {
        FieldElement { field: Arc::clone(&self.field), value }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.with(self.field.add(self.value, other.value)))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.with(self.field.sub(self.value, other.value)))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.with(self.field.mul(self.value, other.value)))
    }

    pub fn inv(&self) -> Result<Self> {
        Ok(self.with(self.field.inv(self.value)?))
    }

    pub fn frobenius_q(&self) -> Result<Self> {
        Ok(self.with(self.field.frobenius_q(self.value)?))
    }
}
