//! Self-maps of GF(q) as polynomials and as value tables.
//!
//! Value tables are the canonical identity of a function: two maps are equal
//! iff their tables are. Polynomials are a derived view, reduced modulo
//! `x^q - x`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{Field, FieldElement};

/// Largest order for which [`linearity`] runs its `O(q^2)` scan.
pub const LINEARITY_MAX_ORDER: u32 = 4096;

/// Polynomial with ascending coefficients and no trailing zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Poly {
    coeffs: Vec<FieldElement>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<FieldElement>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly::default()
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Poly::new(vec![FieldElement::ZERO, FieldElement::ONE])
    }

    pub fn from_indices(coeffs: &[u32]) -> Self {
        Poly::new(coeffs.iter().map(|&c| FieldElement::new(c)).collect())
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn check(&self, field: &Field) -> Result<()> {
        match self.coeffs.iter().find(|&&c| !field.contains(c)) {
            Some(c) => Err(Error::ElementOutOfRange {
                index: c.index(),
                q: field.order(),
            }),
            None => Ok(()),
        }
    }

    /// Horner evaluation.
    pub fn eval(&self, field: &Field, c: FieldElement) -> Result<FieldElement> {
        self.check(field)?;
        if !field.contains(c) {
            return Err(Error::ElementOutOfRange {
                index: c.index(),
                q: field.order(),
            });
        }
        Ok(self.eval_unchecked(field, c))
    }

    fn eval_unchecked(&self, field: &Field, c: FieldElement) -> FieldElement {
        self.coeffs
            .iter()
            .rev()
            .fold(FieldElement::ZERO, |acc, &a| {
                field.add(field.mul(acc, c), a)
            })
    }

    /// Reduces modulo `x^q - x`: the exponent `k >= q` folds onto
    /// `((k - 1) mod (q - 1)) + 1`.
    pub fn reduce(&self, field: &Field) -> Result<Poly> {
        self.check(field)?;
        let q = field.size();
        if self.coeffs.len() <= q {
            return Ok(self.clone());
        }
        let mut out = vec![FieldElement::ZERO; q];
        for (k, &a) in self.coeffs.iter().enumerate() {
            let slot = if k < q { k } else { (k - 1) % (q - 1) + 1 };
            out[slot] = field.add(out[slot], a);
        }
        Ok(Poly::new(out))
    }

    pub fn to_table(&self, field: &Field) -> Result<ValueTable> {
        self.check(field)?;
        Ok(ValueTable::from_fn(field, |c| {
            self.eval_unchecked(field, c)
        }))
    }

    /// Renders with elements written as polynomials in `γ`.
    pub fn pretty(&self, field: &Field) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut terms = Vec::new();
        for (k, &a) in self.coeffs.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            let coeff = field.format_element(a);
            let coeff = if coeff.contains(" + ") && k > 0 {
                format!("({coeff})")
            } else {
                coeff
            };
            let mono = match k {
                0 => String::new(),
                1 => "x".into(),
                _ => format!("x^{k}"),
            };
            terms.push(match (k, a == FieldElement::ONE) {
                (0, _) => coeff,
                (_, true) => mono,
                _ => format!("{coeff}·{mono}"),
            });
        }
        terms.join(" + ")
    }
}

/// Comma-separated ascending coefficient indices, e.g. `1,6,3,6,1`.
impl FromStr for Poly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Poly> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Poly::zero());
        }
        let coeffs = s
            .split(',')
            .map(|c| {
                c.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad coefficient `{c}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly::from_indices(&coeffs))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(","))
        }
    }
}

/// The graph of a self-map of GF(q): entry `c` holds `f(c)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ValueTable {
    values: Vec<FieldElement>,
}

impl ValueTable {
    pub fn from_fn(field: &Field, mut f: impl FnMut(FieldElement) -> FieldElement) -> Self {
        ValueTable {
            values: field.elements().map(&mut f).collect(),
        }
    }

    /// Validates length and entries against `field`.
    pub fn new(field: &Field, values: Vec<FieldElement>) -> Result<Self> {
        if values.len() != field.size() {
            return Err(Error::TableLength {
                got: values.len(),
                expected: field.size(),
            });
        }
        if let Some(c) = values.iter().find(|&&c| !field.contains(c)) {
            return Err(Error::ElementOutOfRange {
                index: c.index(),
                q: field.order(),
            });
        }
        Ok(ValueTable { values })
    }

    pub fn from_indices(field: &Field, values: &[u32]) -> Result<Self> {
        Self::new(
            field,
            values.iter().map(|&v| FieldElement::new(v)).collect(),
        )
    }

    /// Parses a JSON array of `q` integers.
    pub fn from_json(field: &Field, json: &str) -> Result<Self> {
        let values: Vec<u32> =
            serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_indices(field, &values)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.values).expect("integer arrays always serialize")
    }

    pub fn identity(field: &Field) -> Self {
        Self::from_fn(field, |c| c)
    }

    pub fn constant(field: &Field, value: FieldElement) -> Self {
        Self::from_fn(field, |_| value)
    }

    pub fn values(&self) -> &[FieldElement] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, c: FieldElement) -> FieldElement {
        self.values[c.index() as usize]
    }

    pub fn indices(&self) -> Vec<u32> {
        self.values.iter().map(|c| c.index()).collect()
    }

    fn check(&self, field: &Field) -> Result<()> {
        if self.values.len() != field.size() {
            return Err(Error::TableLength {
                got: self.values.len(),
                expected: field.size(),
            });
        }
        Ok(())
    }

    pub fn is_permutation(&self) -> bool {
        let mut seen = vec![false; self.values.len()];
        self.values
            .iter()
            .all(|v| match seen.get_mut(v.index() as usize) {
                Some(slot) if !*slot => {
                    *slot = true;
                    true
                }
                _ => false,
            })
    }

    /// The image of the map, in ascending index order.
    pub fn value_set(&self) -> Vec<FieldElement> {
        let mut seen = vec![false; self.values.len()];
        for v in &self.values {
            seen[v.index() as usize] = true;
        }
        seen.iter()
            .enumerate()
            .filter(|(_, &s)| s)
            .map(|(i, _)| FieldElement::new(i as u32))
            .collect()
    }

    pub fn value_set_size(&self) -> usize {
        let mut seen = vec![false; self.values.len()];
        self.values
            .iter()
            .filter(|v| !std::mem::replace(&mut seen[v.index() as usize], true))
            .count()
    }

    /// The table of `f + x`.
    pub fn add_identity(&self, field: &Field) -> ValueTable {
        ValueTable {
            values: field
                .elements()
                .zip(&self.values)
                .map(|(c, &v)| field.add(v, c))
                .collect(),
        }
    }

    /// Pointwise `f + a`.
    pub fn add_constant(&self, field: &Field, a: FieldElement) -> ValueTable {
        ValueTable {
            values: self.values.iter().map(|&v| field.add(v, a)).collect(),
        }
    }

    /// Lagrange interpolation over all of GF(q).
    ///
    /// Uses `f = Σ_c f(c)(1 - (x - c)^{q-1})` with
    /// `(x - c)^{q-1} = Σ_{k=0}^{q-1} c^{q-1-k} x^k`, giving `a_0 = f(0)` and
    /// `a_k = -Σ_c f(c) c^{q-1-k}` for `k >= 1` (with `c^0 = 1`).
    pub fn interpolate(&self, field: &Field) -> Result<Poly> {
        self.check(field)?;
        let q = field.size();
        let mut sums = vec![FieldElement::ZERO; q];
        // c = 0 only contributes through 0^0 at k = q - 1.
        sums[q - 1] = self.values[0];
        for c in field.nonzero_elements() {
            let value = self.get(c);
            if value.is_zero() {
                continue;
            }
            let mut power = FieldElement::ONE;
            for m in 0..q - 1 {
                let k = q - 1 - m;
                sums[k] = field.add(sums[k], field.mul(value, power));
                power = field.mul(power, c);
            }
        }
        let mut coeffs: Vec<FieldElement> = sums.into_iter().map(|s| field.neg(s)).collect();
        coeffs[0] = self.values[0];
        Ok(Poly::new(coeffs))
    }
}

/// `L(f) = max_{a,b} |{c : f(c) = a·c + b}|`.
///
/// For each slope `a` the best intercept is the most frequent value of
/// `f(c) - a·c`, so the scan costs `O(q^2)`.
pub fn linearity(field: &Field, table: &ValueTable) -> Result<usize> {
    table.check(field)?;
    if field.order() > LINEARITY_MAX_ORDER {
        return Err(Error::CapExceeded(format!(
            "linearity is capped at q <= {LINEARITY_MAX_ORDER}"
        )));
    }
    let q = field.size();
    let mut counts = vec![0usize; q];
    let mut best = 0;
    for a in field.elements() {
        counts.iter_mut().for_each(|n| *n = 0);
        for (c, &v) in field.elements().zip(table.values()) {
            let b = field.sub(v, field.mul(a, c));
            let slot = &mut counts[b.index() as usize];
            *slot += 1;
            best = best.max(*slot);
        }
        if best == q {
            break;
        }
    }
    Ok(best)
}
