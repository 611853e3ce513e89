//! Carlitz representations of permutations of GF(q).
//!
//! A representation with `n` inversions and constants `a_0, …, a_{n+1}` is
//!
//! ```text
//! P_n(x) = (…((a_0 x + a_1)^{q-2} + a_2)^{q-2} … + a_n)^{q-2} + a_{n+1}
//! ```
//!
//! The normalized form drops `a_1` and `a_{n+1}` and relabels the remaining
//! constants as `c_0 = a_0`, `c_i = a_{i+1}`. Its convergent
//! `R_n(x) = (α_{n-1}x + β_{n-1}) / (α_n x + β_n)` agrees with `P_n` away
//! from the poles `x_i = -β_i/α_i`.

mod rank;

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gf::{Field, FieldElement};
use crate::permpoly::ValueTable;

pub use rank::{
    carlitz_rank, pack_table, unpack_table, Rank, RankConfig, RankSearch, RANK_MAX_ORDER,
};

/// Which zero constants a [`CarlitzRep`] may contain.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RepMode {
    /// `a_i != 0` for `i = 0, 2, …, n`.
    Strict,
    /// Only `a_0 != 0` is required.
    Relaxed,
}

/// Constants `a_0, …, a_{n+1}` of a Carlitz representation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CarlitzRep {
    a: Vec<FieldElement>,
}

/// Constants `c_0, …, c_{n-1}`, all nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NormalizedRep {
    c: Vec<FieldElement>,
}

/// Result of [`CarlitzRep::normalize`]: `P(c) = normalized(c + shift) + tail`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Normalization {
    pub rep: NormalizedRep,
    pub shift: FieldElement,
    pub tail: FieldElement,
}

fn check_elements(field: &Field, xs: &[FieldElement]) -> Result<()> {
    match xs.iter().find(|&&c| !field.contains(c)) {
        Some(c) => Err(Error::ElementOutOfRange {
            index: c.index(),
            q: field.order(),
        }),
        None => Ok(()),
    }
}

impl CarlitzRep {
    pub fn new(field: &Field, a: Vec<FieldElement>, mode: RepMode) -> Result<Self> {
        check_elements(field, &a)?;
        if a.len() < 2 {
            return Err(Error::InvalidRep(
                "need at least the two constants a_0, a_1".into(),
            ));
        }
        if a[0].is_zero() {
            return Err(Error::InvalidRep("a_0 must be nonzero".into()));
        }
        let n = a.len() - 2;
        if mode == RepMode::Strict {
            if let Some(i) = (2..=n).find(|&i| a[i].is_zero()) {
                return Err(Error::InvalidRep(format!("a_{i} must be nonzero")));
            }
        }
        Ok(CarlitzRep { a })
    }

    pub fn strict(field: &Field, a: Vec<FieldElement>) -> Result<Self> {
        Self::new(field, a, RepMode::Strict)
    }

    pub fn from_indices(field: &Field, a: &[u32], mode: RepMode) -> Result<Self> {
        Self::new(
            field,
            a.iter().map(|&i| FieldElement::new(i)).collect(),
            mode,
        )
    }

    pub fn constants(&self) -> &[FieldElement] {
        &self.a
    }

    /// Number of inversions `n`.
    pub fn inversions(&self) -> usize {
        self.a.len() - 2
    }

    pub fn is_strict(&self) -> bool {
        (2..=self.inversions()).all(|i| !self.a[i].is_zero())
    }

    pub fn eval(&self, field: &Field, c: FieldElement) -> FieldElement {
        let mut y = field.add(field.mul(self.a[0], c), self.a[1]);
        for &a in &self.a[2..] {
            y = field.add(field.inv_pow(y), a);
        }
        y
    }

    pub fn to_table(&self, field: &Field) -> ValueTable {
        ValueTable::from_fn(field, |c| self.eval(field, c))
    }

    /// Splits off the substitution `x ↦ x + a_0^{-1} a_1` and the tail
    /// constant `a_{n+1}`.
    pub fn normalize(&self, field: &Field) -> Result<Normalization> {
        let n = self.inversions();
        if n == 0 {
            return Err(Error::InvalidRep(
                "normalization needs at least one inversion".into(),
            ));
        }
        if !self.is_strict() {
            return Err(Error::InvalidRep(
                "normalization needs a strict representation".into(),
            ));
        }
        let mut c = Vec::with_capacity(n);
        c.push(self.a[0]);
        c.extend_from_slice(&self.a[2..=n]);
        let shift = field.mul(field.inv_pow(self.a[0]), self.a[1]);
        Ok(Normalization {
            rep: NormalizedRep { c },
            shift,
            tail: self.a[n + 1],
        })
    }
}

impl fmt::Display for CarlitzRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}; {}", self.inversions(), join(&self.a))
    }
}

impl NormalizedRep {
    pub fn new(field: &Field, c: Vec<FieldElement>) -> Result<Self> {
        check_elements(field, &c)?;
        if c.is_empty() {
            return Err(Error::InvalidRep(
                "a normalized representation has n >= 1".into(),
            ));
        }
        if let Some(i) = c.iter().position(|x| x.is_zero()) {
            return Err(Error::InvalidRep(format!("c_{i} must be nonzero")));
        }
        Ok(NormalizedRep { c })
    }

    pub fn from_indices(field: &Field, c: &[u32]) -> Result<Self> {
        Self::new(field, c.iter().map(|&i| FieldElement::new(i)).collect())
    }

    // For enumerators that already guarantee nonzero in-range constants.
    pub(crate) fn from_vec_unchecked(c: Vec<FieldElement>) -> Self {
        debug_assert!(!c.is_empty() && c.iter().all(|x| !x.is_zero()));
        NormalizedRep { c }
    }

    pub fn constants(&self) -> &[FieldElement] {
        &self.c
    }

    pub fn n(&self) -> usize {
        self.c.len()
    }

    pub fn to_carlitz_rep(&self) -> CarlitzRep {
        let mut a = Vec::with_capacity(self.c.len() + 2);
        a.push(self.c[0]);
        a.push(FieldElement::ZERO);
        a.extend_from_slice(&self.c[1..]);
        a.push(FieldElement::ZERO);
        CarlitzRep { a }
    }

    pub fn eval(&self, field: &Field, x: FieldElement) -> FieldElement {
        let mut y = field.inv_pow(field.mul(self.c[0], x));
        for &c in &self.c[1..] {
            y = field.inv_pow(field.add(y, c));
        }
        y
    }

    pub fn to_table(&self, field: &Field) -> ValueTable {
        ValueTable::from_fn(field, |x| self.eval(field, x))
    }

    /// `(α_k, β_k)` for `k = 0..=n`, from `α_k = c_{k-1}α_{k-1} + α_{k-2}`,
    /// `β_k = c_{k-1}β_{k-1} + β_{k-2}` with `α_0 = 0, α_1 = c_0, β_0 = 1,
    /// β_1 = 0`.
    pub fn convergents(&self, field: &Field) -> Vec<(FieldElement, FieldElement)> {
        let mut seq = Vec::with_capacity(self.c.len() + 1);
        seq.push((FieldElement::ZERO, FieldElement::ONE));
        seq.push((self.c[0], FieldElement::ZERO));
        for k in 2..=self.c.len() {
            let (a1, b1) = seq[k - 1];
            let (a2, b2) = seq[k - 2];
            let ck = self.c[k - 1];
            seq.push((
                field.add(field.mul(ck, a1), a2),
                field.add(field.mul(ck, b1), b2),
            ));
        }
        seq
    }

    pub fn convergent(&self, field: &Field) -> Convergent {
        let seq = self.convergents(field);
        let n = self.c.len();
        let (alpha_prev, beta_prev) = seq[n - 1];
        let (alpha_n, beta_n) = seq[n];
        Convergent {
            n,
            alpha_prev,
            beta_prev,
            alpha_n,
            beta_n,
        }
    }

    /// Poles `x_i = -β_i/α_i` for `i = 1..=n`, multiplicity kept.
    pub fn poles(&self, field: &Field) -> PoleSet {
        let poles = self.convergents(field)[1..]
            .iter()
            .map(|&(alpha, beta)| match field.div(field.neg(beta), alpha) {
                Some(x) => Pole::Finite(x),
                None => Pole::Infinity,
            })
            .collect();
        PoleSet { poles }
    }

    /// `P_n(c) = R_n(c)` for every `c` outside the pole set.
    pub fn agreement_check(&self, field: &Field) -> bool {
        let conv = self.convergent(field);
        let poles = self.poles(field);
        field
            .elements()
            .filter(|&c| !poles.contains(c))
            .all(|c| conv.eval(field, c) == Some(self.eval(field, c)))
    }

    /// `α_n β_{n-1} - α_{n-1} β_n = (-1)^{n-1} c_0`.
    pub fn det_identity_check(&self, field: &Field) -> bool {
        let conv = self.convergent(field);
        let lhs = field.sub(
            field.mul(conv.alpha_n, conv.beta_prev),
            field.mul(conv.alpha_prev, conv.beta_n),
        );
        let rhs = if self.c.len() % 2 == 1 {
            self.c[0]
        } else {
            field.neg(self.c[0])
        };
        lhs == rhs
    }
}

impl fmt::Display for NormalizedRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}; {}", self.n(), join(&self.c))
    }
}

impl Serialize for NormalizedRep {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.c.iter())
    }
}

impl Serialize for CarlitzRep {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.a.iter())
    }
}

fn join(xs: &[FieldElement]) -> String {
    xs.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// A representation read from the `n; a_0,...,a_{n+1}` or `n; c_0,...,c_{n-1}`
/// line formats.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParsedRep {
    Full(CarlitzRep),
    Normalized(NormalizedRep),
}

impl ParsedRep {
    pub fn parse(field: &Field, line: &str) -> Result<ParsedRep> {
        let (n, rest) = line
            .split_once(';')
            .ok_or_else(|| Error::Parse(format!("expected `n; constants`, got `{line}`")))?;
        let n: usize = n
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad inversion count `{}`", n.trim())))?;
        let consts = rest
            .split(',')
            .map(|c| {
                c.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad constant `{}`", c.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        if consts.len() == n + 2 {
            Ok(ParsedRep::Full(CarlitzRep::from_indices(
                field,
                &consts,
                RepMode::Strict,
            )?))
        } else if consts.len() == n {
            Ok(ParsedRep::Normalized(NormalizedRep::from_indices(
                field, &consts,
            )?))
        } else {
            Err(Error::Parse(format!(
                "{} constants for n = {n}; expected {} or {n}",
                consts.len(),
                n + 2
            )))
        }
    }

    pub fn to_table(&self, field: &Field) -> ValueTable {
        match self {
            ParsedRep::Full(r) => r.to_table(field),
            ParsedRep::Normalized(r) => r.to_table(field),
        }
    }

    pub fn inversions(&self) -> usize {
        match self {
            ParsedRep::Full(r) => r.inversions(),
            ParsedRep::Normalized(r) => r.n(),
        }
    }
}

/// The quadruple `(α_{n-1}, β_{n-1}, α_n, β_n)` of the `n`-th convergent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Convergent {
    pub n: usize,
    pub alpha_prev: FieldElement,
    pub beta_prev: FieldElement,
    pub alpha_n: FieldElement,
    pub beta_n: FieldElement,
}

impl Convergent {
    /// `R_n(c)`, or `None` where the denominator vanishes.
    pub fn eval(&self, field: &Field, c: FieldElement) -> Option<FieldElement> {
        let num = field.add(field.mul(self.alpha_prev, c), self.beta_prev);
        let den = field.add(field.mul(self.alpha_n, c), self.beta_n);
        field.div(num, den)
    }

    /// `α_{n-1} β_n - α_n β_{n-1}`.
    pub fn determinant(&self, field: &Field) -> FieldElement {
        field.sub(
            field.mul(self.alpha_prev, self.beta_n),
            field.mul(self.alpha_n, self.beta_prev),
        )
    }
}

/// A point of GF(q) ∪ {∞}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pole {
    Finite(FieldElement),
    Infinity,
}

impl Serialize for Pole {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Pole::Finite(x) => s.serialize_u32(x.index()),
            Pole::Infinity => s.serialize_str("inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct PoleSet {
    poles: Vec<Pole>,
}

impl PoleSet {
    pub fn poles(&self) -> &[Pole] {
        &self.poles
    }

    pub fn contains(&self, c: FieldElement) -> bool {
        self.poles.contains(&Pole::Finite(c))
    }

    pub fn has_infinity(&self) -> bool {
        self.poles.contains(&Pole::Infinity)
    }

    /// The last pole `x_n`.
    pub fn last(&self) -> Pole {
        *self.poles.last().expect("pole sets are nonempty")
    }

    pub fn distinct_finite(&self) -> usize {
        let mut xs: Vec<_> = self
            .poles
            .iter()
            .filter_map(|p| match p {
                Pole::Finite(x) => Some(*x),
                Pole::Infinity => None,
            })
            .collect();
        xs.sort();
        xs.dedup();
        xs.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permpoly::Poly;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn e(i: u32) -> FieldElement {
        FieldElement::new(i)
    }

    fn gf8() -> Field {
        Field::new(2, 3, Some(&[1, 1, 0, 1])).unwrap()
    }

    /// Constants of `((((γc)^6+1)^6+γ^{-3})^6+1)^6` over GF(8).
    fn gf8_example(f: &Field) -> NormalizedRep {
        let g = f.generator_of_basis();
        let g_inv3 = f.inv_pow(f.pow(g, 3));
        NormalizedRep::new(f, vec![g, e(1), g_inv3, e(1)]).unwrap()
    }

    #[test]
    fn evaluation_examples() {
        let f7 = Field::prime(7).unwrap();
        let rep = NormalizedRep::from_indices(&f7, &[1, 3, 3]).unwrap();
        assert_eq!(rep.eval(&f7, e(0)), e(1));
        let quartic = Poly::from_indices(&[1, 6, 3, 6, 1]).to_table(&f7).unwrap();
        assert_eq!(rep.to_table(&f7), quartic);

        let f8 = gf8();
        let g = f8.generator_of_basis();
        let g_inv = f8.inv_pow(g);
        // γ(x^4 + 1) + γ^{-1}(x^2 + x)
        let poly = Poly::new(vec![g, g_inv, g_inv, e(0), g]);
        assert_eq!(gf8_example(&f8).to_table(&f8), poly.to_table(&f8).unwrap());

        let affine = CarlitzRep::from_indices(&f7, &[3, 2], RepMode::Strict).unwrap();
        for c in f7.elements() {
            assert_eq!(affine.eval(&f7, c), f7.add(f7.mul(e(3), c), e(2)));
        }
    }

    #[test]
    fn rep_validation() {
        let f7 = Field::prime(7).unwrap();
        assert!(CarlitzRep::from_indices(&f7, &[0, 1], RepMode::Strict).is_err());
        assert!(CarlitzRep::from_indices(&f7, &[1], RepMode::Strict).is_err());
        assert!(CarlitzRep::from_indices(&f7, &[1, 0, 0, 2], RepMode::Strict).is_err());
        assert!(CarlitzRep::from_indices(&f7, &[1, 0, 0, 2], RepMode::Relaxed).is_ok());
        // a_1 and a_{n+1} may vanish in strict mode.
        assert!(CarlitzRep::from_indices(&f7, &[1, 0, 2, 0], RepMode::Strict).is_ok());
        assert!(NormalizedRep::from_indices(&f7, &[]).is_err());
        assert!(NormalizedRep::from_indices(&f7, &[1, 0]).is_err());
        assert!(NormalizedRep::from_indices(&f7, &[1, 7]).is_err());
    }

    #[test]
    fn normalization() {
        let f7 = Field::prime(7).unwrap();
        let rep = CarlitzRep::from_indices(&f7, &[2, 4, 1, 5], RepMode::Strict).unwrap();
        let norm = rep.normalize(&f7).unwrap();
        assert_eq!(norm.rep.constants(), &[e(2), e(1)]);
        assert_eq!(norm.shift, e(2));
        assert_eq!(norm.tail, e(5));
        for c in f7.elements() {
            let via = f7.add(norm.rep.eval(&f7, f7.add(c, norm.shift)), norm.tail);
            assert_eq!(via, rep.eval(&f7, c));
        }

        let already = CarlitzRep::from_indices(&f7, &[3, 0, 2, 0], RepMode::Strict).unwrap();
        let norm = already.normalize(&f7).unwrap();
        assert_eq!((norm.shift, norm.tail), (e(0), e(0)));
        assert_eq!(norm.rep.to_carlitz_rep(), already);

        let affine = CarlitzRep::from_indices(&f7, &[3, 2], RepMode::Strict).unwrap();
        assert!(affine.normalize(&f7).is_err());
    }

    #[test]
    fn normalization_exhaustive_small() {
        for q in [3u64, 4, 5] {
            let f = Field::with_order(q).unwrap();
            let qq = f.order();
            for n in 1..=2usize {
                for idx in 0..qq.pow(n as u32 + 2) {
                    let a: Vec<u32> = (0..n + 2).map(|i| idx / qq.pow(i as u32) % qq).collect();
                    let Ok(rep) = CarlitzRep::from_indices(&f, &a, RepMode::Strict) else {
                        continue;
                    };
                    let norm = rep.normalize(&f).unwrap();
                    for c in f.elements() {
                        assert_eq!(
                            f.add(norm.rep.eval(&f, f.add(c, norm.shift)), norm.tail),
                            rep.eval(&f, c)
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn convergent_examples() {
        let f7 = Field::prime(7).unwrap();
        let rep = NormalizedRep::from_indices(&f7, &[5]).unwrap();
        let seq = rep.convergents(&f7);
        assert_eq!(seq[0], (e(0), e(1)));
        assert_eq!(seq[1], (e(5), e(0)));
        let conv = rep.convergent(&f7);
        assert_eq!(
            (conv.alpha_prev, conv.beta_prev, conv.alpha_n, conv.beta_n),
            (e(0), e(1), e(5), e(0))
        );

        let rep = NormalizedRep::from_indices(&f7, &[1, 1]).unwrap();
        assert_eq!(rep.convergents(&f7)[2], (e(1), e(1)));
        assert_eq!(
            rep.poles(&f7).poles(),
            &[Pole::Finite(e(0)), Pole::Finite(e(6))]
        );
        assert!(rep.det_identity_check(&f7));
        let conv = rep.convergent(&f7);
        let lhs = f7.sub(
            f7.mul(conv.alpha_n, conv.beta_prev),
            f7.mul(conv.alpha_prev, conv.beta_n),
        );
        assert_eq!(lhs, e(6));
    }

    #[test]
    fn poles_match_closed_form_for_two_inversions() {
        let f = Field::prime(11).unwrap();
        for c0 in f.nonzero_elements() {
            for c1 in f.nonzero_elements() {
                let rep = NormalizedRep::new(&f, vec![c0, c1]).unwrap();
                let x2 = f.neg(f.inv_pow(f.mul(c0, c1)));
                assert_eq!(
                    rep.poles(&f).poles(),
                    &[Pole::Finite(e(0)), Pole::Finite(x2)]
                );
            }
        }
    }

    #[test]
    fn infinite_poles_appear_when_alpha_vanishes() {
        // α_2 = c_1 c_0 ≠ 0, α_3 = c_2 c_1 c_0 + c_0 = 0 when c_1 c_2 = -1.
        let f7 = Field::prime(7).unwrap();
        let rep = NormalizedRep::from_indices(&f7, &[1, 1, 6]).unwrap();
        let poles = rep.poles(&f7);
        assert!(poles.has_infinity());
        assert_eq!(poles.last(), Pole::Infinity);
        assert!(rep.agreement_check(&f7));
        assert_eq!(rep.convergent(&f7).alpha_n, e(0));
    }

    #[test]
    fn machinery_exhaustive_small_fields() {
        for q in [3u64, 4, 5, 7, 8] {
            let f = Field::with_order(q).unwrap();
            let m = f.order() - 1;
            for n in 1..=3u32 {
                for idx in 0..m.pow(n) {
                    let c: Vec<u32> = (0..n).map(|i| idx / m.pow(i) % m + 1).collect();
                    let rep = NormalizedRep::from_indices(&f, &c).unwrap();
                    assert!(rep.det_identity_check(&f), "q={q} {rep}");
                    assert!(rep.agreement_check(&f), "q={q} {rep}");
                    let poles = rep.poles(&f);
                    assert_eq!(poles.poles()[0], Pole::Finite(e(0)));
                    assert_eq!(poles.poles().len(), n as usize);
                    assert!(rep.to_table(&f).is_permutation());
                }
            }
        }
    }

    #[test]
    fn machinery_random_reps() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for q in [9u64, 11, 13, 16, 25, 27, 49] {
            let f = Field::with_order(q).unwrap();
            for _ in 0..1000 {
                let n = rng.gen_range(1..=8);
                let c = (0..n).map(|_| e(rng.gen_range(1..f.order()))).collect();
                let rep = NormalizedRep::new(&f, c).unwrap();
                assert!(rep.det_identity_check(&f));
                assert!(rep.agreement_check(&f));
                let conv = rep.convergent(&f);
                if !conv.alpha_n.is_zero() {
                    let t = rep.to_table(&f);
                    let off = f
                        .elements()
                        .filter(|&c| conv.eval(&f, c) != Some(t.get(c)))
                        .count();
                    assert!(off <= n);
                }
            }
        }
    }

    #[test]
    fn rep_line_format() {
        let f7 = Field::prime(7).unwrap();
        let full = ParsedRep::parse(&f7, "2; 2,4,1,5").unwrap();
        assert!(matches!(full, ParsedRep::Full(_)));
        let norm = ParsedRep::parse(&f7, "3; 1,3,3").unwrap();
        match &norm {
            ParsedRep::Normalized(r) => assert_eq!(r.to_string(), "3; 1,3,3"),
            _ => panic!("expected normalized"),
        }
        assert!(ParsedRep::parse(&f7, "3; 1,3").is_err());
        assert!(ParsedRep::parse(&f7, "1,3").is_err());
        assert!(ParsedRep::parse(&f7, "1; 0").is_err());
        let rep = CarlitzRep::from_indices(&f7, &[2, 4, 1, 5], RepMode::Strict).unwrap();
        assert_eq!(rep.to_string(), "2; 2,4,1,5");
    }
}
