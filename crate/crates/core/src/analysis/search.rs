//! Search for complete mappings with a prescribed number of inversions and
//! small linearity.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{chunk_ranges, complete_fast, rep_at, rep_count};
use crate::carlitz::{NormalizedRep, Rank, RankConfig, RankSearch, RANK_MAX_ORDER};
use crate::error::{Error, Result};
use crate::gf::{Field, FieldElement};
use crate::permpoly::{linearity, ValueTable};

/// Largest order searched exhaustively.
pub const EXHAUSTIVE_MAX_ORDER: u32 = 13;
/// Largest number of representations walked in one exhaustive search.
pub const EXHAUSTIVE_MAX_REPS: u64 = 100_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum SearchMode {
    Exhaustive,
    Sample { seed: u64, samples: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub rep: NormalizedRep,
    pub table: ValueTable,
    pub linearity: usize,
    /// Certified Carlitz rank; `None` when `q` is beyond the rank search.
    pub crk: Option<Rank>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchReport {
    pub q: usize,
    pub n_target: usize,
    pub linearity_cap: usize,
    pub mode: SearchMode,
    pub reps_examined: u64,
    /// Distinct complete tables among the examined representations.
    pub complete_tables: usize,
    pub witnesses: Vec<Witness>,
    /// Witnesses whose certified rank equals `n_target`.
    pub exact_rank_witnesses: usize,
}

/// Collects representations with `n_target` inversions whose table is a
/// complete mapping of linearity below `linearity_cap`.
///
/// Only tail constant 0 is tried: adding a constant to `f` shifts `f + x`
/// and changes neither completeness nor linearity. Witnesses are deduped by
/// table, keep the lexicographically first representation, and carry a rank
/// certified by the level search (`max_n = n_target`).
pub fn search_complete(
    field: &Field,
    n_target: usize,
    linearity_cap: usize,
    mode: SearchMode,
    rank_config: RankConfig,
) -> Result<SearchReport> {
    if n_target == 0 {
        return Err(Error::Precondition("n_target must be at least 1".into()));
    }
    let (reps_examined, hits) = match mode {
        SearchMode::Exhaustive => {
            if field.order() > EXHAUSTIVE_MAX_ORDER {
                return Err(Error::CapExceeded(format!(
                    "exhaustive search is capped at q <= {EXHAUSTIVE_MAX_ORDER}; use sampling"
                )));
            }
            let count = rep_count(field, n_target)
                .filter(|&c| c <= EXHAUSTIVE_MAX_REPS)
                .ok_or_else(|| {
                    Error::CapExceeded(format!(
                        "more than {EXHAUSTIVE_MAX_REPS} representations; use sampling"
                    ))
                })?;
            let hits: Vec<Vec<(NormalizedRep, ValueTable)>> = chunk_ranges(count, 1 << 14)
                .into_par_iter()
                .map(|range| {
                    range
                        .filter_map(|i| {
                            let rep = rep_at(field, n_target, i);
                            let t = rep.to_table(field);
                            complete_fast(field, &t).then_some((rep, t))
                        })
                        .collect()
                })
                .collect();
            (count, hits.into_iter().flatten().collect::<Vec<_>>())
        }
        SearchMode::Sample { seed, samples } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let upper = field.order();
            let reps: Vec<NormalizedRep> = (0..samples)
                .map(|_| {
                    let c = (0..n_target)
                        .map(|_| FieldElement::new(rng.gen_range(1..upper)))
                        .collect();
                    NormalizedRep::from_vec_unchecked(c)
                })
                .collect();
            let mut hits: Vec<(NormalizedRep, ValueTable)> = reps
                .into_par_iter()
                .filter_map(|rep| {
                    let t = rep.to_table(field);
                    complete_fast(field, &t).then_some((rep, t))
                })
                .collect();
            hits.sort();
            (samples, hits)
        }
    };

    let mut seen = HashSet::new();
    let mut complete_tables = 0;
    let mut candidates = Vec::new();
    for (rep, t) in hits {
        if !seen.insert(t.clone()) {
            continue;
        }
        complete_tables += 1;
        let l = linearity(field, &t)?;
        if l < linearity_cap {
            candidates.push((rep, t, l));
        }
    }

    let search = if field.order() <= RANK_MAX_ORDER && !candidates.is_empty() {
        Some(RankSearch::new(field, n_target, rank_config)?)
    } else {
        None
    };
    let witnesses = candidates
        .into_par_iter()
        .map(|(rep, table, linearity)| {
            let crk = match &search {
                Some(s) => Some(s.rank(&table, n_target)?),
                None => None,
            };
            Ok(Witness {
                rep,
                table,
                linearity,
                crk,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let exact_rank_witnesses = witnesses
        .iter()
        .filter(|w| w.crk == Some(Rank::Exact(n_target)))
        .count();
    Ok(SearchReport {
        q: field.size(),
        n_target,
        linearity_cap,
        mode,
        reps_examined,
        complete_tables,
        witnesses,
        exact_rank_witnesses,
    })
}
