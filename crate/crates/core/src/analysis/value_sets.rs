//! Value-set bounds for `F = f + x` and exact sizes for one and two
//! inversions. Brute force is always computed alongside the predictions.

use serde::Serialize;

use crate::carlitz::{Convergent, NormalizedRep};
use crate::error::{Error, Result};
use crate::gf::{Field, FieldElement};
use crate::permpoly::ValueTable;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundsReport {
    pub q: usize,
    pub n: usize,
    /// `⌈(q - n)/2⌉`
    pub lower: usize,
    /// `min{n + ⌊(q + 1)/2⌋, q}`
    pub upper: usize,
    pub actual: usize,
    /// Points where `F` agrees with the fractional form.
    pub agreement: usize,
    pub holds: bool,
}

/// Checks `⌈(q-n)/2⌉ <= |V_F| <= min{n + ⌊(q+1)/2⌋, q}` for a map `F`
/// agreeing with `(α_{n-1}c + β_{n-1})/(α_n c + β_n) + c` on at least
/// `q - n` points.
pub fn theorem2_bounds(
    field: &Field,
    conv: &Convergent,
    f: &ValueTable,
    n: usize,
) -> Result<BoundsReport> {
    let q = field.size();
    if f.len() != q {
        return Err(Error::TableLength {
            got: f.len(),
            expected: q,
        });
    }
    if conv.alpha_n.is_zero() {
        return Err(Error::Precondition("α_n must be nonzero".into()));
    }
    if conv.determinant(field).is_zero() {
        return Err(Error::Precondition(
            "α_{n-1}β_n - α_nβ_{n-1} must be nonzero".into(),
        ));
    }
    let agreement = field
        .elements()
        .filter(|&c| conv.eval(field, c).map(|r| field.add(r, c)) == Some(f.get(c)))
        .count();
    if agreement + n < q {
        return Err(Error::Precondition(format!(
            "F agrees with the fractional form at {agreement} points, fewer than q - n = {}",
            q.saturating_sub(n)
        )));
    }
    let lower = q.saturating_sub(n).div_ceil(2);
    let upper = (n + q.div_ceil(2)).min(q);
    let actual = f.value_set_size();
    Ok(BoundsReport {
        q,
        n,
        lower,
        upper,
        actual,
        agreement,
        holds: lower <= actual && actual <= upper,
    })
}

/// Bounds for `F = P_n + x` built from a normalized representation.
pub fn bounds_for_rep(field: &Field, rep: &NormalizedRep) -> Result<BoundsReport> {
    let f = rep.to_table(field).add_identity(field);
    theorem2_bounds(field, &rep.convergent(field), &f, rep.n())
}

fn eta(field: &Field, c: FieldElement) -> i64 {
    field.eta(c) as i64
}

fn tr_bit(field: &Field, c: FieldElement) -> i64 {
    field.abs_trace(c).index() as i64
}

/// Predicted `|V_F|` for `F = (c_0 x)^{q-2} + x`.
pub fn prop1_predict(field: &Field, c0: FieldElement) -> Result<usize> {
    if c0.is_zero() {
        return Err(Error::Precondition("c_0 must be nonzero".into()));
    }
    let q = field.size() as i64;
    if !field.is_odd() {
        return Ok((q / 2) as usize);
    }
    let v = (q + 1 + eta(field, c0) - eta(field, field.neg(c0))) / 2;
    Ok(v as usize)
}

pub fn prop1_actual(field: &Field, c0: FieldElement) -> usize {
    ValueTable::from_fn(field, |x| field.add(field.inv_pow(field.mul(c0, x)), x)).value_set_size()
}

/// Predicted `|V_F|` for `F = ((c_0 x)^{q-2} + c_1)^{q-2} + x`, or a
/// precondition error when `(c_0, c_1)` is outside the admissible range.
pub fn prop2_predict(field: &Field, c0: FieldElement, c1: FieldElement) -> Result<usize> {
    if c0.is_zero() || c1.is_zero() {
        return Err(Error::Precondition("c_0 and c_1 must be nonzero".into()));
    }
    let q = field.size() as i64;
    let one = FieldElement::ONE;
    if field.is_odd() {
        let four = field.from_int(4);
        let four_c0_plus_1 = field.add(field.mul(four, c0), one);
        let c0_plus_4 = field.add(c0, four);
        if four_c0_plus_1.is_zero() || c0_plus_4.is_zero() {
            return Err(Error::Precondition(
                "4c_0 + 1 and c_0 + 4 must be nonzero".into(),
            ));
        }
        let v = if c0 == field.neg(one) {
            (q - eta(field, field.from_int(-3))) / 2
        } else {
            let c0_sq_4c0 = field.mul(c0, c0_plus_4);
            (q + 2 - eta(field, four_c0_plus_1) - eta(field, c0_sq_4c0) + eta(field, field.neg(c0)))
                / 2
        };
        Ok(v as usize)
    } else {
        let v = if c0 == one {
            q / 2 + tr_bit(field, one) - 1
        } else {
            q / 2 + tr_bit(field, c0) + tr_bit(field, field.inv_pow(c0))
        };
        Ok(v as usize)
    }
}

pub fn prop2_actual(field: &Field, c0: FieldElement, c1: FieldElement) -> usize {
    ValueTable::from_fn(field, |x| {
        let y = field.inv_pow(field.add(field.inv_pow(field.mul(c0, x)), c1));
        field.add(y, x)
    })
    .value_set_size()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropRow {
    pub c0: FieldElement,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c1: Option<FieldElement>,
    /// `None` when the pair violates the hypothesis.
    pub predicted: Option<usize>,
    pub actual: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl PropRow {
    pub fn admissible(&self) -> bool {
        self.predicted.is_some()
    }

    pub fn holds(&self) -> bool {
        self.predicted.is_none_or(|p| p == self.actual)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropReport {
    pub q: usize,
    pub n: usize,
    pub rows: Vec<PropRow>,
    pub admissible: usize,
    pub mismatches: usize,
    pub holds: bool,
}

/// Predicted versus brute-force value-set sizes over every `c_0` (and
/// `c_1` when `n = 2`).
pub fn verify_prop(field: &Field, n: usize) -> Result<PropReport> {
    let mut rows = Vec::new();
    match n {
        1 => {
            for c0 in field.nonzero_elements() {
                rows.push(PropRow {
                    c0,
                    c1: None,
                    predicted: Some(prop1_predict(field, c0)?),
                    actual: prop1_actual(field, c0),
                    note: None,
                });
            }
        }
        2 => {
            for c0 in field.nonzero_elements() {
                for c1 in field.nonzero_elements() {
                    let (predicted, note) = match prop2_predict(field, c0, c1) {
                        Ok(v) => (Some(v), None),
                        Err(Error::Precondition(msg)) => (None, Some(msg)),
                        Err(e) => return Err(e),
                    };
                    rows.push(PropRow {
                        c0,
                        c1: Some(c1),
                        predicted,
                        actual: prop2_actual(field, c0, c1),
                        note,
                    });
                }
            }
        }
        _ => {
            return Err(Error::Precondition(format!(
                "exact value-set formulas exist for n = 1 and n = 2, not {n}"
            )))
        }
    }
    let admissible = rows.iter().filter(|r| r.admissible()).count();
    let mismatches = rows.iter().filter(|r| !r.holds()).count();
    Ok(PropReport {
        q: field.size(),
        n,
        rows,
        admissible,
        mismatches,
        holds: mismatches == 0,
    })
}
