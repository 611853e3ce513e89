//! Exhaustive check that complete mappings of small Carlitz rank have large
//! linearity, plus the two counting arguments behind it.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use super::{chunk_ranges, complete_fast, linearity_threshold, rank_threshold, rep_at, rep_count};
use crate::carlitz::{pack_table, unpack_table};
use crate::error::{Error, Result};
use crate::gf::{Field, FieldElement};
use crate::permpoly::{linearity, ValueTable};

/// Largest order accepted by [`theorem1_verify`].
pub const THEOREM1_MAX_ORDER: u32 = 13;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    /// Fewest inversions among the enumerated representations of the table.
    pub n: usize,
    pub table: ValueTable,
    pub linearity: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Theorem1Report {
    pub q: usize,
    /// Largest inversion count enumerated, `⌊q/2⌋ - 1`.
    pub max_n: usize,
    pub linearity_threshold: usize,
    /// Normalized representations enumerated per inversion count
    /// (`n = 0` holds the maps `c_0 x`).
    pub reps_per_n: Vec<u64>,
    pub reps_enumerated: u64,
    pub distinct_tables: usize,
    pub complete_mappings: usize,
    /// Linearity → number of distinct complete tables.
    pub complete_linearities: BTreeMap<usize, usize>,
    pub violations: Vec<Violation>,
    pub holds: bool,
}

/// Enumerates every normalized representation with `n < ⌊q/2⌋` (and the
/// maps `c_0 x` for `n = 0`), dedups by table and checks that no complete
/// mapping among them has linearity below `⌊(q+5)/2⌋`.
///
/// Shifts `x ↦ x + s` and tails `+ a_{n+1}` preserve both completeness and
/// linearity, so normalized representations cover every rank-`n` map.
pub fn theorem1_verify(field: &Field) -> Result<Theorem1Report> {
    if field.order() > THEOREM1_MAX_ORDER {
        return Err(Error::CapExceeded(format!(
            "exhaustive verification is capped at q <= {THEOREM1_MAX_ORDER}"
        )));
    }
    let q = field.size();
    let threshold = linearity_threshold(q);
    let max_n = rank_threshold(q).saturating_sub(1);

    // packed table -> fewest inversions seen
    let mut tables: HashMap<u64, usize> = HashMap::new();
    let mut reps_per_n = Vec::new();
    for a0 in field.nonzero_elements() {
        let t = ValueTable::from_fn(field, |c| field.mul(a0, c));
        tables.entry(pack_table(field, &t)?).or_insert(0);
    }
    reps_per_n.push(q as u64 - 1);

    for n in 1..=max_n {
        let count = rep_count(field, n).expect("bounded by the order cap");
        let chunks: Vec<Vec<u64>> = chunk_ranges(count, 1 << 14)
            .into_par_iter()
            .map(|range| {
                range
                    .map(|i| {
                        let t = rep_at(field, n, i).to_table(field);
                        pack_table(field, &t).expect("order checked above")
                    })
                    .collect()
            })
            .collect();
        for packed in chunks.into_iter().flatten() {
            tables.entry(packed).or_insert(n);
        }
        reps_per_n.push(count);
    }

    let mut distinct: Vec<(u64, usize)> = tables.into_iter().collect();
    distinct.sort_unstable();
    let complete: Vec<(ValueTable, usize, usize)> = distinct
        .par_iter()
        .filter_map(|&(packed, n)| {
            let t = unpack_table(field, packed);
            complete_fast(field, &t).then(|| {
                let l = linearity(field, &t).expect("small field");
                (t, n, l)
            })
        })
        .collect();

    let mut complete_linearities = BTreeMap::new();
    let mut violations = Vec::new();
    for (t, n, l) in &complete {
        *complete_linearities.entry(*l).or_insert(0) += 1;
        if *l < threshold {
            violations.push(Violation {
                n: *n,
                table: t.clone(),
                linearity: *l,
            });
        }
    }
    Ok(Theorem1Report {
        q,
        max_n,
        linearity_threshold: threshold,
        reps_enumerated: reps_per_n.iter().sum(),
        reps_per_n,
        distinct_tables: distinct.len(),
        complete_mappings: complete.len(),
        complete_linearities,
        holds: violations.is_empty(),
        violations,
    })
}

/// Parity of the inversion count `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    /// `(-1)^n` as a field element.
    fn sign(self, field: &Field) -> FieldElement {
        match self {
            Parity::Even => FieldElement::ONE,
            Parity::Odd => field.neg(FieldElement::ONE),
        }
    }
}

fn require_odd(field: &Field) -> Result<()> {
    if field.is_odd() {
        Ok(())
    } else {
        Err(Error::EvenCharacteristic)
    }
}

fn require_even(field: &Field) -> Result<()> {
    if field.is_odd() {
        Err(Error::OddCharacteristic)
    } else {
        Ok(())
    }
}

fn require_nonzero(c0: FieldElement, alpha_n: FieldElement) -> Result<()> {
    if c0.is_zero() || alpha_n.is_zero() {
        Err(Error::Precondition("c_0 and α_n must be nonzero".into()))
    } else {
        Ok(())
    }
}

/// Number of `u` with `D_u = u^2 + 4(-1)^n c_0 α_n^{-2}` a nonzero square.
pub fn discriminant_census(
    field: &Field,
    c0: FieldElement,
    alpha_n: FieldElement,
    parity: Parity,
) -> Result<usize> {
    require_odd(field)?;
    require_nonzero(c0, alpha_n)?;
    let four = field.from_int(4);
    let alpha_inv = field.inv_pow(alpha_n);
    let shift = field.mul(
        field.mul(four, parity.sign(field)),
        field.mul(c0, field.mul(alpha_inv, alpha_inv)),
    );
    Ok(field
        .elements()
        .filter(|&u| field.eta(field.add(field.mul(u, u), shift)) == 1)
        .count())
}

/// `(q - 2 - η((-1)^{n-1} c_0)) / 2`.
pub fn discriminant_prediction(field: &Field, c0: FieldElement, parity: Parity) -> Result<usize> {
    require_odd(field)?;
    // (-1)^{n-1} = -(-1)^n
    let signed = field.mul(field.neg(parity.sign(field)), c0);
    Ok(((field.size() as i64 - 2 - field.eta(signed) as i64) / 2) as usize)
}

/// Number of `u != 0` with `Tr(c_0^{q/2} / (α_n u)) = 0`.
pub fn trace_census(field: &Field, c0: FieldElement, alpha_n: FieldElement) -> Result<usize> {
    require_even(field)?;
    require_nonzero(c0, alpha_n)?;
    let root = field.pow(c0, field.order() as u64 / 2);
    Ok(field
        .nonzero_elements()
        .filter(|&u| {
            let x = field.mul(root, field.inv_pow(field.mul(alpha_n, u)));
            field.abs_trace(x).is_zero()
        })
        .count())
}

/// `q/2 - 1`.
pub fn trace_prediction(field: &Field) -> Result<usize> {
    require_even(field)?;
    Ok(field.size() / 2 - 1)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusRow {
    pub c0: FieldElement,
    pub alpha_n: FieldElement,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parity: Option<Parity>,
    pub predicted: usize,
    pub actual: usize,
}

impl CensusRow {
    pub fn holds(&self) -> bool {
        self.predicted == self.actual
    }
}

/// Discriminant census for every `(c_0, α_n)` and both parities.
pub fn census_disc_rows(field: &Field) -> Result<Vec<CensusRow>> {
    require_odd(field)?;
    let mut rows = Vec::new();
    for c0 in field.nonzero_elements() {
        for alpha_n in field.nonzero_elements() {
            for parity in [Parity::Even, Parity::Odd] {
                rows.push(CensusRow {
                    c0,
                    alpha_n,
                    parity: Some(parity),
                    predicted: discriminant_prediction(field, c0, parity)?,
                    actual: discriminant_census(field, c0, alpha_n, parity)?,
                });
            }
        }
    }
    Ok(rows)
}

/// Trace census for every `(c_0, α_n)`.
pub fn census_trace_rows(field: &Field) -> Result<Vec<CensusRow>> {
    let predicted = trace_prediction(field)?;
    let mut rows = Vec::new();
    for c0 in field.nonzero_elements() {
        for alpha_n in field.nonzero_elements() {
            rows.push(CensusRow {
                c0,
                alpha_n,
                parity: None,
                predicted,
                actual: trace_census(field, c0, alpha_n)?,
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carlitz::NormalizedRep;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn e(i: u32) -> FieldElement {
        FieldElement::new(i)
    }

    #[test]
    fn small_fields_have_no_violations() {
        for q in [4u64, 5, 7, 8, 9] {
            let f = Field::with_order(q).unwrap();
            let report = theorem1_verify(&f).unwrap();
            assert!(report.holds, "q={q}: {:?}", report.violations);
            assert!(report
                .complete_linearities
                .keys()
                .all(|&l| l >= report.linearity_threshold));
        }
        let f7 = Field::prime(7).unwrap();
        let report = theorem1_verify(&f7).unwrap();
        assert_eq!(report.max_n, 2);
        assert_eq!(report.reps_per_n, vec![6, 6, 36]);
        assert!(theorem1_verify(&Field::with_order(16).unwrap()).is_err());
    }

    #[test]
    fn identity_is_a_low_linearity_complete_mapping_over_gf3() {
        // ⌊(3+5)/2⌋ = 4 exceeds q, so the affine complete mapping x has
        // linearity 3 < 4 and rank 0 < ⌊3/2⌋.
        let f3 = Field::prime(3).unwrap();
        let report = theorem1_verify(&f3).unwrap();
        assert!(!report.holds);
        assert_eq!(report.max_n, 0);
        assert_eq!(report.violations.len(), 1);
        let v = &report.violations[0];
        assert_eq!((v.n, v.linearity), (0, 3));
        assert_eq!(v.table, ValueTable::identity(&f3));
    }

    #[test]
    fn discriminant_examples() {
        let f7 = Field::prime(7).unwrap();
        assert_eq!(
            discriminant_census(&f7, e(1), e(1), Parity::Odd).unwrap(),
            2
        );
        assert_eq!(discriminant_prediction(&f7, e(1), Parity::Odd).unwrap(), 2);
        assert_eq!(
            discriminant_census(&f7, e(1), e(1), Parity::Even).unwrap(),
            3
        );
        assert_eq!(discriminant_prediction(&f7, e(1), Parity::Even).unwrap(), 3);
        let f8 = Field::with_order(8).unwrap();
        assert_eq!(
            discriminant_census(&f8, e(1), e(1), Parity::Odd),
            Err(Error::EvenCharacteristic)
        );
        assert!(discriminant_census(&f7, e(0), e(1), Parity::Odd).is_err());
    }

    #[test]
    fn censuses_match_predictions() {
        for q in [3u64, 5, 7, 9, 11, 13] {
            let f = Field::with_order(q).unwrap();
            assert!(
                census_disc_rows(&f).unwrap().iter().all(CensusRow::holds),
                "q={q}"
            );
        }
        for q in [4u64, 8, 16] {
            let f = Field::with_order(q).unwrap();
            let rows = census_trace_rows(&f).unwrap();
            assert_eq!(rows.len(), (f.size() - 1).pow(2));
            assert!(rows.iter().all(|r| r.actual == f.size() / 2 - 1), "q={q}");
        }
        assert_eq!(
            trace_census(&Field::with_order(8).unwrap(), e(3), e(5)).unwrap(),
            3
        );
        assert_eq!(
            trace_census(&Field::with_order(4).unwrap(), e(2), e(3)).unwrap(),
            1
        );
        assert_eq!(
            trace_census(&Field::prime(7).unwrap(), e(1), e(1)),
            Err(Error::OddCharacteristic)
        );
    }

    /// Roots of `x^2 + b x + c` found by brute force.
    fn roots(f: &Field, b: FieldElement, c: FieldElement) -> usize {
        f.elements()
            .filter(|&x| f.add(f.add(f.mul(x, x), f.mul(b, x)), c).is_zero())
            .count()
    }

    #[test]
    fn census_counts_two_root_quadratics_of_actual_reps() {
        // For real convergents, count u for which
        // x^2 + (2β_n/α_n - u)x + ((-1)^{n-1}c_0 + β_n^2 - uα_nβ_n)/α_n^2
        // has two roots, and compare with the census formulas.
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for q in [5u64, 7, 8, 9, 11, 13, 16] {
            let f = Field::with_order(q).unwrap();
            let mut tried = 0;
            while tried < 40 {
                let n = rng.gen_range(1..=6);
                let c: Vec<_> = (0..n).map(|_| e(rng.gen_range(1..f.order()))).collect();
                let rep = NormalizedRep::new(&f, c.clone()).unwrap();
                let conv = rep.convergent(&f);
                if conv.alpha_n.is_zero() {
                    continue;
                }
                tried += 1;
                let ai = f.inv_pow(conv.alpha_n);
                let parity = if n % 2 == 0 {
                    Parity::Even
                } else {
                    Parity::Odd
                };
                let signed_c0 = f.mul(f.neg(parity.sign(&f)), c[0]);
                let two = f.from_int(2);
                let two_root = f
                    .elements()
                    .filter(|&u| {
                        let b = f.sub(f.mul(two, f.mul(ai, conv.beta_n)), u);
                        let k = f.sub(
                            f.add(signed_c0, f.mul(conv.beta_n, conv.beta_n)),
                            f.mul(u, f.mul(conv.alpha_n, conv.beta_n)),
                        );
                        roots(&f, b, f.mul(k, f.mul(ai, ai))) == 2
                    })
                    .count();
                let expected = if f.is_odd() {
                    discriminant_census(&f, c[0], conv.alpha_n, parity).unwrap()
                } else {
                    trace_census(&f, c[0], conv.alpha_n).unwrap()
                };
                assert_eq!(two_root, expected, "q={q} {rep}");
            }
        }
    }
}
