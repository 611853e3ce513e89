//! Complete mappings and the value sets of `f + x`.

mod search;
mod theorem1;
mod value_sets;

use serde::Serialize;

use crate::carlitz::{NormalizedRep, Rank, RankSearch};
use crate::error::{Error, Result};
use crate::gf::{Field, FieldElement};
use crate::permpoly::{linearity, ValueTable, LINEARITY_MAX_ORDER};

pub use search::{search_complete, SearchMode, SearchReport, Witness};
pub use theorem1::{
    census_disc_rows, census_trace_rows, discriminant_census, discriminant_prediction,
    theorem1_verify, trace_census, trace_prediction, CensusRow, Parity, Theorem1Report, Violation,
};
pub use value_sets::{
    bounds_for_rep, prop1_actual, prop1_predict, prop2_actual, prop2_predict, theorem2_bounds,
    verify_prop, BoundsReport, PropReport, PropRow,
};

/// `⌊q/2⌋`, the rank threshold for complete mappings of small linearity.
pub fn rank_threshold(q: usize) -> usize {
    q / 2
}

/// `⌊(q+5)/2⌋`, the linearity threshold.
pub fn linearity_threshold(q: usize) -> usize {
    (q + 5) / 2
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompletenessReport {
    pub is_perm: bool,
    pub is_complete: bool,
    /// `None` above the linearity scan cap.
    pub linearity: Option<usize>,
    pub v_f_plus_x: usize,
    pub crk: Option<Rank>,
}

/// Checks `f` and `f + x` for bijectivity and records `L(f)` and
/// `|V_{f+x}|`. The rank is left empty; see [`is_complete_with_rank`].
pub fn is_complete(field: &Field, table: &ValueTable) -> Result<CompletenessReport> {
    if table.len() != field.size() {
        return Err(Error::TableLength {
            got: table.len(),
            expected: field.size(),
        });
    }
    let is_perm = table.is_permutation();
    let v_f_plus_x = table.add_identity(field).value_set_size();
    let linearity = if field.order() <= LINEARITY_MAX_ORDER {
        Some(linearity(field, table)?)
    } else {
        None
    };
    Ok(CompletenessReport {
        is_perm,
        is_complete: is_perm && v_f_plus_x == field.size(),
        linearity,
        v_f_plus_x,
        crk: None,
    })
}

/// [`is_complete`] plus the Carlitz rank (for permutations, `q <= 16`).
pub fn is_complete_with_rank(
    field: &Field,
    table: &ValueTable,
    search: &RankSearch,
    max_n: usize,
) -> Result<CompletenessReport> {
    let mut report = is_complete(field, table)?;
    if report.is_perm {
        report.crk = Some(search.rank(table, max_n)?);
    }
    Ok(report)
}

/// Cheap completeness test without the linearity scan.
pub(crate) fn complete_fast(field: &Field, table: &ValueTable) -> bool {
    table.is_permutation() && table.add_identity(field).is_permutation()
}

fn nonzero(c: FieldElement, what: &str) -> Result<()> {
    if c.is_zero() {
        Err(Error::Precondition(format!("{what} must be nonzero")))
    } else {
        Ok(())
    }
}

/// Brute-force completeness of `a·x^p`.
pub fn mann_check(field: &Field, a: FieldElement) -> Result<bool> {
    nonzero(a, "a")?;
    let p = field.characteristic() as u64;
    let table = ValueTable::from_fn(field, |c| field.mul(a, field.pow(c, p)));
    Ok(complete_fast(field, &table))
}

/// `a^{(p^r - 1)/(p - 1)} != (-1)^r`.
pub fn mann_criterion(field: &Field, a: FieldElement) -> bool {
    let p = field.characteristic() as u64;
    let e = (field.order() as u64 - 1) / (p - 1);
    let sign = if field.degree().is_multiple_of(2) {
        FieldElement::ONE
    } else {
        field.neg(FieldElement::ONE)
    };
    field.pow(a, e) != sign
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MannRow {
    pub a: FieldElement,
    pub criterion: bool,
    pub complete: bool,
}

pub fn mann_rows(field: &Field) -> Vec<MannRow> {
    field
        .nonzero_elements()
        .map(|a| MannRow {
            a,
            criterion: mann_criterion(field, a),
            complete: mann_check(field, a).expect("a is nonzero"),
        })
        .collect()
}

/// Number of normalized representations with `n` inversions.
pub(crate) fn rep_count(field: &Field, n: usize) -> Option<u64> {
    (field.order() as u64 - 1).checked_pow(n as u32)
}

/// The `index`-th normalized representation in lexicographic order of
/// `(c_0, …, c_{n-1})`.
pub(crate) fn rep_at(field: &Field, n: usize, mut index: u64) -> NormalizedRep {
    let base = field.order() as u64 - 1;
    let mut c = vec![FieldElement::ZERO; n];
    for slot in c.iter_mut().rev() {
        *slot = FieldElement::new((index % base) as u32 + 1);
        index /= base;
    }
    NormalizedRep::from_vec_unchecked(c)
}

/// Splits `0..count` into contiguous chunks for parallel enumeration.
pub(crate) fn chunk_ranges(count: u64, chunk: u64) -> Vec<std::ops::Range<u64>> {
    (0..count.div_ceil(chunk))
        .map(|i| i * chunk..((i + 1) * chunk).min(count))
        .collect()
}
