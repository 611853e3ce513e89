//! Arithmetic in GF(p^r) for small orders.
//!
//! Elements are encoded as integer indices in `[0, q)`: the base-`p` digits
//! of an index are the coordinates of the element in the polynomial basis
//! `1, γ, γ^2, …` where `γ` is a root of the field modulus. Index 0 is the
//! additive identity and index 1 the multiplicative identity.
//!
//! Multiplication goes through exponent/logarithm tables built from a
//! primitive element found at construction time. Addition is digit-wise
//! (XOR for characteristic 2, a lookup table for orders up to 256).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 16;

const ADD_TABLE_MAX_ORDER: u32 = 256;

/// An element of a finite field, identified by its canonical index.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub const fn new(index: u32) -> Self {
        FieldElement(index)
    }

    pub const fn index(self) -> u32 {
        self.0
    }

    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A validated finite field context GF(p^r).
///
/// Immutable after construction; every operation is a pure function of its
/// arguments, so a `Field` can be shared freely between threads.
#[derive(Clone)]
pub struct Field {
    p: u32,
    r: u32,
    q: u32,
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    inv: Vec<u32>,
    neg: Vec<u32>,
    add_table: Option<Vec<u16>>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("p", &self.p)
            .field("r", &self.r)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.modulus == other.modulus
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

impl Field {
    /// Builds GF(p^r). Without an explicit modulus the lexicographically
    /// smallest monic irreducible of degree `r` is used, comparing
    /// coefficients from the constant term upwards.
    pub fn new(p: u32, r: u32, modulus: Option<&[u32]>) -> Result<Field> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if r == 0 {
            return Err(Error::BadModulus(
                "extension degree must be at least 1".into(),
            ));
        }
        let q = (p as u64).checked_pow(r).unwrap_or(u64::MAX);
        if !(3..=MAX_ORDER).contains(&q) {
            return Err(Error::UnsupportedOrder(q));
        }
        let modulus = match modulus {
            Some(m) => {
                if m.len() != r as usize + 1 || m[r as usize] != 1 {
                    return Err(Error::BadModulus(format!(
                        "expected {} ascending coefficients ending in 1",
                        r + 1
                    )));
                }
                if let Some(&c) = m.iter().find(|&&c| c >= p) {
                    return Err(Error::BadModulus(format!(
                        "coefficient {c} is not reduced mod {p}"
                    )));
                }
                if !is_irreducible(m, p) {
                    return Err(Error::BadModulus(format!(
                        "{} is reducible over GF({p})",
                        poly_string(m)
                    )));
                }
                m.to_vec()
            }
            None => default_modulus(p, r),
        };
        Ok(Self::build(p, r, q as u32, modulus))
    }

    /// GF(p) for a prime `p >= 3`.
    pub fn prime(p: u32) -> Result<Field> {
        Self::new(p, 1, None)
    }

    /// The field of order `q` with its default modulus.
    pub fn with_order(q: u64) -> Result<Field> {
        let (p, r) = prime_power(q).ok_or(Error::UnsupportedOrder(q))?;
        Self::new(p, r, None)
    }

    fn build(p: u32, r: u32, q: u32, modulus: Vec<u32>) -> Field {
        let neg = (0..q)
            .map(|a| digit_map(a, p, r, |d| (p - d) % p))
            .collect();
        let mut field = Field {
            p,
            r,
            q,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
            inv: Vec::new(),
            neg,
            add_table: None,
        };
        if q <= ADD_TABLE_MAX_ORDER {
            let mut table = vec![0u16; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    table[(a * q + b) as usize] = field.add_digits(a, b) as u16;
                }
            }
            field.add_table = Some(table);
        }
        field.build_log_tables();
        field.inv = (0..q)
            .map(|c| field.pow(FieldElement(c), (q - 2) as u64).0)
            .collect();
        field
    }

    fn build_log_tables(&mut self) {
        let order = self.q - 1;
        for g in 2..self.q {
            let mut powers = Vec::with_capacity(order as usize);
            let mut x = 1u32;
            loop {
                powers.push(x);
                x = self.mul_slow(x, g);
                if x == 1 || powers.len() > order as usize {
                    break;
                }
            }
            if powers.len() == order as usize {
                self.install_generator(powers);
                return;
            }
        }
        unreachable!("the multiplicative group of a finite field is cyclic")
    }

    fn install_generator(&mut self, powers: Vec<u32>) {
        let order = powers.len();
        let mut log = vec![0u32; self.q as usize];
        for (k, &x) in powers.iter().enumerate() {
            log[x as usize] = k as u32;
        }
        let mut exp = powers.clone();
        exp.extend_from_slice(&powers);
        debug_assert_eq!(exp.len(), 2 * order);
        self.exp = exp;
        self.log = log;
    }

    fn add_digits(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        if self.r == 1 {
            return (a + b) % self.p;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.r {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    /// Schoolbook product in GF(p)[γ]/(modulus); used only to bootstrap the
    /// logarithm tables.
    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        let p = self.p as u64;
        let r = self.r as usize;
        let da = digits(a, self.p, self.r);
        let db = digits(b, self.p, self.r);
        let mut prod = vec![0u64; 2 * r - 1];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        for k in (r..prod.len()).rev() {
            let lead = prod[k];
            if lead == 0 {
                continue;
            }
            for (i, &m) in self.modulus[..r].iter().enumerate() {
                let idx = k - r + i;
                prod[idx] = (prod[idx] + (p - lead) * m as u64) % p;
            }
            prod[k] = 0;
        }
        prod[..r].iter().rev().fold(0u64, |acc, &d| acc * p + d) as u32
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.r
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn size(&self) -> usize {
        self.q as usize
    }

    /// Modulus coefficients in ascending order (monic, length `r + 1`).
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn is_odd(&self) -> bool {
        self.p != 2
    }

    /// Canonical spec string, `p^r:c0,...,cr`.
    pub fn spec_string(&self) -> String {
        if self.r == 1 {
            return self.p.to_string();
        }
        let coeffs: Vec<String> = self.modulus.iter().map(u32::to_string).collect();
        format!("{}^{}:{}", self.p, self.r, coeffs.join(","))
    }

    pub fn element(&self, index: u32) -> Result<FieldElement> {
        if index < self.q {
            Ok(FieldElement(index))
        } else {
            Err(Error::ElementOutOfRange { index, q: self.q })
        }
    }

    pub fn contains(&self, c: FieldElement) -> bool {
        c.0 < self.q
    }

    /// All elements in ascending index order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + Clone {
        (0..self.q).map(FieldElement)
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = FieldElement> + Clone {
        (1..self.q).map(FieldElement)
    }

    /// The element `γ` (index `p`), or the integer 2 in a prime field.
    pub fn generator_of_basis(&self) -> FieldElement {
        if self.r == 1 {
            FieldElement(2 % self.p)
        } else {
            FieldElement(self.p)
        }
    }

    /// Embeds an integer via the prime subfield.
    pub fn from_int(&self, n: i64) -> FieldElement {
        FieldElement(n.rem_euclid(self.p as i64) as u32)
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        match &self.add_table {
            Some(t) => FieldElement(t[(a.0 * self.q + b.0) as usize] as u32),
            None => FieldElement(self.add_digits(a.0, b.0)),
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        FieldElement(self.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement::ZERO;
        }
        let k = self.log[a.0 as usize] + self.log[b.0 as usize];
        FieldElement(self.exp[k as usize])
    }

    /// Square-and-multiply exponentiation; `pow(0, 0) = 1`.
    pub fn pow(&self, base: FieldElement, mut e: u64) -> FieldElement {
        let mut acc = FieldElement::ONE;
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }

    /// The inversion map `c ↦ c^{q-2}`: 0 goes to 0, everything else to its
    /// multiplicative inverse. Served from a table filled by [`Field::pow`].
    #[inline]
    pub fn inv_pow(&self, c: FieldElement) -> FieldElement {
        FieldElement(self.inv[c.0 as usize])
    }

    /// Multiplicative inverse of a nonzero element.
    pub fn inverse(&self, c: FieldElement) -> Option<FieldElement> {
        (!c.is_zero()).then(|| self.inv_pow(c))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Option<FieldElement> {
        self.inverse(b).map(|bi| self.mul(a, bi))
    }

    /// Quadratic character η: 0 at 0, +1 on nonzero squares, −1 otherwise.
    pub fn quad_char(&self, c: FieldElement) -> Result<i32> {
        if !self.is_odd() {
            return Err(Error::EvenCharacteristic);
        }
        Ok(self.eta(c))
    }

    // Unchecked η for odd fields.
    pub(crate) fn eta(&self, c: FieldElement) -> i32 {
        if c.is_zero() {
            0
        } else if self.log[c.0 as usize].is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// Absolute trace `c + c^p + … + c^{p^{r-1}}`, an element of the prime
    /// subfield (index in `[0, p)`).
    pub fn abs_trace(&self, c: FieldElement) -> FieldElement {
        let mut acc = FieldElement::ZERO;
        let mut conj = c;
        for _ in 0..self.r {
            acc = self.add(acc, conj);
            conj = self.pow(conj, self.p as u64);
        }
        debug_assert!(acc.0 < self.p);
        acc
    }

    /// Renders an element as a polynomial in `γ`, e.g. `γ^2 + 1`.
    pub fn format_element(&self, c: FieldElement) -> String {
        if self.r == 1 {
            return c.0.to_string();
        }
        let ds = digits(c.0, self.p, self.r);
        let mut terms = Vec::new();
        for (i, &d) in ds.iter().enumerate().rev() {
            if d == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "γ".to_string(),
                _ => format!("γ^{i}"),
            };
            terms.push(match (d, i) {
                (_, 0) => d.to_string(),
                (1, _) => mono,
                _ => format!("{d}{mono}"),
            });
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }

    /// Attaches the field to an element for checked arithmetic.
    pub fn bind(&self, c: FieldElement) -> Result<Gf<'_>> {
        Ok(Gf {
            field: self,
            value: self.element(c.0)?,
        })
    }
}

/// An element together with its field, for arithmetic that must reject
/// operands from different fields.
#[derive(Clone, Copy, Debug)]
pub struct Gf<'f> {
    field: &'f Field,
    value: FieldElement,
}

impl<'f> Gf<'f> {
    pub fn value(&self) -> FieldElement {
        self.value
    }

    pub fn field(&self) -> &'f Field {
        self.field
    }

    fn same_field(&self, other: &Gf<'_>) -> Result<()> {
        if std::ptr::eq(self.field, other.field) || self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    fn wrap(&self, value: FieldElement) -> Gf<'f> {
        Gf {
            field: self.field,
            value,
        }
    }

    pub fn try_add(&self, other: &Gf<'_>) -> Result<Gf<'f>> {
        self.same_field(other)?;
        Ok(self.wrap(self.field.add(self.value, other.value)))
    }

    pub fn try_sub(&self, other: &Gf<'_>) -> Result<Gf<'f>> {
        self.same_field(other)?;
        Ok(self.wrap(self.field.sub(self.value, other.value)))
    }

    pub fn try_mul(&self, other: &Gf<'_>) -> Result<Gf<'f>> {
        self.same_field(other)?;
        Ok(self.wrap(self.field.mul(self.value, other.value)))
    }

    pub fn neg(&self) -> Gf<'f> {
        self.wrap(self.field.neg(self.value))
    }

    pub fn inv_pow(&self) -> Gf<'f> {
        self.wrap(self.field.inv_pow(self.value))
    }
}

impl PartialEq for Gf<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.value == other.value
    }
}

/// Field spec strings: `p`, `q`, `p^r`, each optionally followed by
/// `:c0,c1,...,cr` giving the modulus in ascending order.
impl FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Field> {
        let bad = || Error::FieldSpec(s.to_string());
        let s = s.trim();
        let (head, modulus) = match s.split_once(':') {
            Some((h, m)) => {
                let coeffs = m
                    .split(',')
                    .map(|c| c.trim().parse::<u32>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|_| bad())?;
                (h.trim(), Some(coeffs))
            }
            None => (s, None),
        };
        let (p, r) = match head.split_once('^') {
            Some((p, r)) => (
                p.trim().parse::<u32>().map_err(|_| bad())?,
                r.trim().parse::<u32>().map_err(|_| bad())?,
            ),
            None => {
                let q = head.parse::<u64>().map_err(|_| bad())?;
                match prime_power(q) {
                    Some(pr) => pr,
                    None if q < 2 => return Err(bad()),
                    None => return Err(Error::NotPrime(q)),
                }
            }
        };
        Field::new(p, r, modulus.as_deref())
    }
}

/// Decomposes `q = p^r`.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut r = 0;
    let mut m = q;
    while m.is_multiple_of(p) {
        m /= p;
        r += 1;
    }
    (m == 1).then_some((p as u32, r))
}

fn digits(mut a: u32, p: u32, r: u32) -> Vec<u32> {
    (0..r)
        .map(|_| {
            let d = a % p;
            a /= p;
            d
        })
        .collect()
}

fn digit_map(a: u32, p: u32, r: u32, f: impl Fn(u32) -> u32) -> u32 {
    digits(a, p, r)
        .into_iter()
        .rev()
        .fold(0, |acc, d| acc * p + f(d))
}

/// Remainder of `a` modulo the monic polynomial `m` over GF(p), ascending
/// coefficients.
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut rem: Vec<u64> = a.iter().map(|&c| c as u64).collect();
    let dm = m.len() - 1;
    let p = p as u64;
    while rem.len() > dm {
        let lead = rem.pop().unwrap();
        if lead != 0 {
            let off = rem.len() - dm;
            for (i, &c) in m[..dm].iter().enumerate() {
                rem[off + i] = (rem[off + i] + (p - lead) * c as u64 % p) % p;
            }
        }
    }
    rem.into_iter().map(|c| c as u32).collect()
}

/// Exhaustive trial division by every monic polynomial of degree
/// `1..=deg/2`.
pub fn is_irreducible(m: &[u32], p: u32) -> bool {
    let deg = m.len() - 1;
    if deg == 0 {
        return false;
    }
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for idx in 0..count {
            let mut divisor = digits(idx as u32, p, d as u32);
            divisor.push(1);
            if poly_rem(m, &divisor, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn default_modulus(p: u32, r: u32) -> Vec<u32> {
    // Lexicographic over (c0, c1, ..., c_{r-1}) with c0 most significant.
    let count = (p as u64).pow(r);
    for idx in 0..count {
        let mut coeffs = digits(idx as u32, p, r);
        coeffs.reverse();
        coeffs.push(1);
        if is_irreducible(&coeffs, p) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

fn poly_string(m: &[u32]) -> String {
    let terms: Vec<String> = m
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| match (i, c) {
            (0, c) => c.to_string(),
            (1, 1) => "x".into(),
            (1, c) => format!("{c}x"),
            (i, 1) => format!("x^{i}"),
            (i, c) => format!("{c}x^{i}"),
        })
        .collect();
    terms.join(" + ")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf8() -> Field {
        Field::new(2, 3, Some(&[1, 1, 0, 1])).unwrap()
    }

    #[test]
    fn construction() {
        let f = Field::new(7, 1, None).unwrap();
        assert_eq!(
            f.elements().map(|e| e.index()).collect::<Vec<_>>(),
            (0..7).collect::<Vec<_>>()
        );
        assert_eq!(
            Field::new(2, 1, None).unwrap_err(),
            Error::UnsupportedOrder(2)
        );
        assert_eq!(Field::new(6, 1, None).unwrap_err(), Error::NotPrime(6));
        assert!(matches!(
            Field::new(2, 3, Some(&[1, 0, 0, 1])),
            Err(Error::BadModulus(_))
        ));
        assert!(matches!(
            Field::new(2, 3, Some(&[1, 1, 1])),
            Err(Error::BadModulus(_))
        ));
        assert!(matches!(
            Field::new(2, 17, None),
            Err(Error::UnsupportedOrder(_))
        ));
        // Low-degree coefficients compare first: x^3 + x^2 + 1 precedes x^3 + x + 1.
        assert_eq!(Field::new(2, 3, None).unwrap().modulus(), &[1, 0, 1, 1]);
        assert_eq!(Field::new(2, 4, None).unwrap().modulus(), &[1, 0, 0, 1, 1]);
        // x^2 + 1 is the default for GF(9).
        assert_eq!(Field::with_order(9).unwrap().modulus(), &[1, 0, 1]);
        let f9 = Field::with_order(9).unwrap();
        assert_eq!(f9.elements().filter(|c| c.index() < 3).count(), 3);
    }

    #[test]
    fn spec_strings() {
        assert_eq!("7".parse::<Field>().unwrap().order(), 7);
        assert_eq!("8".parse::<Field>().unwrap().modulus(), &[1, 0, 1, 1]);
        assert_eq!("2^3:1,1,0,1".parse::<Field>().unwrap(), gf8());
        assert_eq!(
            "8:1,1,0,1".parse::<Field>().unwrap().modulus(),
            &[1, 1, 0, 1]
        );
        assert_eq!("3^2".parse::<Field>().unwrap().order(), 9);
        assert!("6".parse::<Field>().is_err());
        assert!("x".parse::<Field>().is_err());
        let f = gf8();
        assert_eq!(f.spec_string().parse::<Field>().unwrap(), f);
    }

    #[test]
    fn small_arithmetic() {
        let f7 = Field::prime(7).unwrap();
        let e = FieldElement::new;
        assert_eq!(f7.add(e(3), e(5)), e(1));
        assert_eq!(f7.neg(e(0)), e(0));
        assert_eq!(f7.inv_pow(e(3)), e(5));
        assert_eq!(f7.inv_pow(e(0)), e(0));

        let f8 = gf8();
        let g = f8.generator_of_basis();
        let g2 = f8.mul(g, g);
        assert_eq!(g2, e(4));
        // γ^3 = γ + 1
        assert_eq!(f8.mul(g, g2), e(3));
        // γ^{-1} = γ^2 + 1
        assert_eq!(f8.inv_pow(g), e(5));
        assert_eq!(f8.format_element(e(5)), "γ^2 + 1");
    }

    #[test]
    fn slow_and_fast_multiplication_agree() {
        for q in [9u64, 16, 25, 27, 49, 64, 81, 125, 128] {
            let f = Field::with_order(q).unwrap();
            for a in f.elements() {
                for b in f.elements() {
                    assert_eq!(f.mul(a, b).index(), f.mul_slow(a.index(), b.index()));
                }
            }
        }
    }

    #[test]
    fn field_axioms_exhaustive() {
        for q in [3u64, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27] {
            let f = Field::with_order(q).unwrap();
            for a in f.elements() {
                assert_eq!(f.add(a, f.neg(a)), FieldElement::ZERO);
                assert_eq!(f.mul(a, FieldElement::ONE), a);
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv_pow(a)), FieldElement::ONE);
                }
                for b in f.elements() {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in f.elements().step_by(3) {
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn inversion_is_an_involution() {
        for q in [3u64, 4, 5, 7, 8, 9, 16, 25, 27, 32, 49] {
            let f = Field::with_order(q).unwrap();
            let mut seen = vec![false; f.size()];
            for c in f.elements() {
                assert_eq!(f.inv_pow(f.inv_pow(c)), c);
                seen[f.inv_pow(c).index() as usize] = true;
            }
            assert!(seen.into_iter().all(|s| s));
        }
    }

    #[test]
    fn quadratic_character() {
        let f7 = Field::prime(7).unwrap();
        let e = FieldElement::new;
        assert_eq!(f7.quad_char(e(2)).unwrap(), 1);
        assert_eq!(f7.quad_char(e(6)).unwrap(), -1);
        assert_eq!(f7.quad_char(e(0)).unwrap(), 0);
        assert_eq!(gf8().quad_char(e(1)), Err(Error::EvenCharacteristic));

        for q in [3u64, 5, 7, 9, 11, 13, 25, 27, 31] {
            let f = Field::with_order(q).unwrap();
            let squares: std::collections::BTreeSet<_> =
                f.nonzero_elements().map(|c| f.mul(c, c)).collect();
            for c in f.nonzero_elements() {
                let expected = if squares.contains(&c) { 1 } else { -1 };
                assert_eq!(f.quad_char(c).unwrap(), expected);
                for d in f.nonzero_elements() {
                    assert_eq!(f.eta(f.mul(c, d)), f.eta(c) * f.eta(d));
                }
            }
            assert_eq!(squares.len(), (f.size() - 1) / 2);
        }
    }

    #[test]
    fn character_sum_of_shifted_squares() {
        for q in [3u64, 5, 7, 9, 11, 13, 25, 27] {
            let f = Field::with_order(q).unwrap();
            for a in f.nonzero_elements() {
                let s: i32 = f.elements().map(|u| f.eta(f.add(f.mul(u, u), a))).sum();
                assert_eq!(s, -1, "q={q} a={a}");
            }
        }
    }

    #[test]
    fn trace() {
        let f8 = gf8();
        let e = FieldElement::new;
        assert_eq!(f8.abs_trace(e(1)), e(1));
        assert_eq!(f8.abs_trace(f8.generator_of_basis()), e(0));
        let f7 = Field::prime(7).unwrap();
        assert_eq!(f7.abs_trace(e(5)), e(5));

        for q in [4u64, 8, 9, 16, 25, 27, 32] {
            let f = Field::with_order(q).unwrap();
            let mut counts = vec![0usize; f.characteristic() as usize];
            for c in f.elements() {
                counts[f.abs_trace(c).index() as usize] += 1;
                for d in f.elements().step_by(5) {
                    assert_eq!(
                        f.abs_trace(f.add(c, d)),
                        f.add(f.abs_trace(c), f.abs_trace(d))
                    );
                }
            }
            let fiber = f.size() / f.characteristic() as usize;
            assert!(counts.iter().all(|&n| n == fiber), "q={q}: {counts:?}");
        }
    }

    #[test]
    fn bound_elements_reject_mixed_fields() {
        let f7 = Field::prime(7).unwrap();
        let f5 = Field::prime(5).unwrap();
        let other7 = Field::prime(7).unwrap();
        let a = f7.bind(FieldElement::new(3)).unwrap();
        let b = f5.bind(FieldElement::new(3)).unwrap();
        let c = other7.bind(FieldElement::new(5)).unwrap();
        assert_eq!(a.try_add(&b).unwrap_err(), Error::FieldMismatch);
        assert_eq!(a.try_add(&c).unwrap().value(), FieldElement::new(1));
        assert_eq!(a.try_mul(&c).unwrap().value(), FieldElement::new(1));
        assert!(f5.bind(FieldElement::new(5)).is_err());
    }
}
