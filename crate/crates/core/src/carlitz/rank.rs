//! Carlitz rank by level search.
//!
//! Level 0 holds the affine permutations; level `k + 1` holds every
//! `inv_pow ∘ t + a` for `t` in level `k` and any constant `a` (zero
//! allowed). With global deduplication the first level containing a table is
//! its rank. Zero constants never shorten a representation: `inv(t) + 0`
//! followed by another inversion just steps back through the involution.
//!
//! Forward levels are materialized up to a memory budget. Deeper ranks are
//! resolved from the other end: `t = inv(s) + a` iff `s = inv(t - a)`, so a
//! backward frontier from the target meets the stored levels, and
//! `rank(t) = j + min{rank(s) : s in backward frontier j}` for the first
//! `j` at which the frontier touches a stored level.
//!
//! Tables over fields with `q <= 16` pack exactly into a `u64` (one nibble
//! per point), so the packed word is both the hash key and the full table.

use std::collections::{HashMap, HashSet};

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gf::{Field, FieldElement};
use crate::permpoly::ValueTable;

/// Largest order handled by the rank search.
pub const RANK_MAX_ORDER: u32 = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RankConfig {
    /// Upper bound on tables held in the backward search (and on any single
    /// projected level).
    pub node_budget: u64,
    /// Upper bound on tables stored in the forward levels.
    pub forward_budget: u64,
}

impl Default for RankConfig {
    fn default() -> Self {
        RankConfig {
            node_budget: 100_000_000,
            forward_budget: 4_000_000,
        }
    }
}

/// Outcome of a rank query.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rank {
    Exact(usize),
    /// No representation with at most this many inversions.
    Exceeds(usize),
}

impl Rank {
    pub fn exact(self) -> Option<usize> {
        match self {
            Rank::Exact(n) => Some(n),
            Rank::Exceeds(_) => None,
        }
    }
}

impl std::fmt::Display for Rank {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Rank::Exact(n) => write!(f, "{n}"),
            Rank::Exceeds(n) => write!(f, "EXCEEDS({n})"),
        }
    }
}

impl Serialize for Rank {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Rank::Exact(n) => s.serialize_u64(*n as u64),
            Rank::Exceeds(_) => s.serialize_str(&self.to_string()),
        }
    }
}

fn check_order(field: &Field) -> Result<()> {
    if field.order() > RANK_MAX_ORDER {
        Err(Error::CapExceeded(format!(
            "rank search supports q <= {RANK_MAX_ORDER}, got {}",
            field.order()
        )))
    } else {
        Ok(())
    }
}

/// Packs a table over a field with `q <= 16` into nibbles.
pub fn pack_table(field: &Field, table: &ValueTable) -> Result<u64> {
    check_order(field)?;
    if table.len() != field.size() {
        return Err(Error::TableLength {
            got: table.len(),
            expected: field.size(),
        });
    }
    Ok(table
        .values()
        .iter()
        .enumerate()
        .fold(0u64, |acc, (i, v)| acc | (v.index() as u64) << (4 * i)))
}

pub fn unpack_table(field: &Field, packed: u64) -> ValueTable {
    ValueTable::from_fn(field, |c| {
        FieldElement::new((packed >> (4 * c.index()) & 0xf) as u32)
    })
}

/// A nibble-wise map applied to a packed table one byte at a time.
#[derive(Clone)]
struct ByteMap([u8; 256]);

impl ByteMap {
    fn new(q: u32, f: impl Fn(u32) -> u32) -> Self {
        let g = |v: u32| if v < q { f(v) as u8 } else { 0 };
        let mut map = [0u8; 256];
        for (b, slot) in map.iter_mut().enumerate() {
            let b = b as u32;
            *slot = g(b & 0xf) | (g(b >> 4) << 4);
        }
        ByteMap(map)
    }

    #[inline]
    fn apply(&self, x: u64, mask: u64) -> u64 {
        let mut out = 0u64;
        for i in 0..8 {
            let byte = (x >> (8 * i)) & 0xff;
            out |= (self.0[byte as usize] as u64) << (8 * i);
        }
        out & mask
    }
}

/// Forward levels of the Carlitz level search for one field, queried by
/// [`RankSearch::rank`]. Read-only after construction, so queries can run
/// concurrently.
pub struct RankSearch {
    q: u32,
    mask: u64,
    inv: ByteMap,
    add: Vec<ByteMap>,
    levels: HashMap<u64, u8>,
    level_sizes: Vec<usize>,
    depth: usize,
    saturated: bool,
    config: RankConfig,
}

impl RankSearch {
    /// Builds forward levels `0..=max_depth`, stopping early when the next
    /// level would exceed the forward budget.
    pub fn new(field: &Field, max_depth: usize, config: RankConfig) -> Result<Self> {
        check_order(field)?;
        let q = field.order();
        let mask = if q == 16 {
            u64::MAX
        } else {
            (1u64 << (4 * q)) - 1
        };
        let inv = ByteMap::new(q, |v| field.inv_pow(FieldElement::new(v)).index());
        let add = field
            .elements()
            .map(|a| ByteMap::new(q, |v| field.add(FieldElement::new(v), a).index()))
            .collect();
        let mut search = RankSearch {
            q,
            mask,
            inv,
            add,
            levels: HashMap::new(),
            level_sizes: Vec::new(),
            depth: 0,
            saturated: false,
            config,
        };

        let mut frontier = Vec::new();
        for a0 in field.nonzero_elements() {
            for a1 in field.elements() {
                let t = ValueTable::from_fn(field, |c| field.add(field.mul(a0, c), a1));
                let packed = pack_table(field, &t)?;
                if search.levels.insert(packed, 0).is_none() {
                    frontier.push(packed);
                }
            }
        }
        search.level_sizes.push(frontier.len());

        while search.depth < max_depth {
            let projected = frontier.len() as u64 * q as u64;
            if search.levels.len() as u64 + projected > config.forward_budget {
                break;
            }
            let candidates: Vec<Vec<u64>> = frontier
                .par_chunks(4096)
                .map(|chunk| chunk.iter().flat_map(|&t| search.successors(t)).collect())
                .collect();
            let level = (search.depth + 1) as u8;
            let mut next = Vec::new();
            for t in candidates.into_iter().flatten() {
                if let std::collections::hash_map::Entry::Vacant(slot) = search.levels.entry(t) {
                    slot.insert(level);
                    next.push(t);
                }
            }
            search.depth += 1;
            search.level_sizes.push(next.len());
            if next.is_empty() {
                search.saturated = true;
                break;
            }
            frontier = next;
        }
        Ok(search)
    }

    fn successors(&self, t: u64) -> impl Iterator<Item = u64> + '_ {
        let s = self.inv.apply(t, self.mask);
        self.add.iter().map(move |a| a.apply(s, self.mask))
    }

    fn predecessors(&self, t: u64) -> impl Iterator<Item = u64> + '_ {
        // inv(t + a) over all a is the same set as inv(t - a).
        self.add
            .iter()
            .map(move |a| self.inv.apply(a.apply(t, self.mask), self.mask))
    }

    /// Number of new tables first reached at each stored level.
    pub fn level_sizes(&self) -> &[usize] {
        &self.level_sizes
    }

    /// Deepest fully stored level.
    pub fn forward_depth(&self) -> usize {
        self.depth
    }

    /// Whether the forward levels already contain every permutation.
    pub fn is_saturated(&self) -> bool {
        self.saturated
    }

    /// Rank of a stored table, if it lies within the forward levels.
    pub fn stored_rank(&self, packed: u64) -> Option<usize> {
        self.levels.get(&packed).map(|&k| k as usize)
    }

    /// The least `n <= max_n` such that `table` has a representation with
    /// `n` inversions, or [`Rank::Exceeds`].
    pub fn rank(&self, table: &ValueTable, max_n: usize) -> Result<Rank> {
        if table.len() != self.q as usize {
            return Err(Error::TableLength {
                got: table.len(),
                expected: self.q as usize,
            });
        }
        if !table.is_permutation() {
            return Err(Error::NotPermutation);
        }
        let target = table
            .values()
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, v)| acc | (v.index() as u64) << (4 * i));

        let mut frontier: HashSet<u64> = HashSet::from([target]);
        let mut spent = 1u64;
        for j in 0.. {
            if let Some(r) = frontier.iter().filter_map(|&s| self.stored_rank(s)).min() {
                let rank = r + j;
                return Ok(if rank <= max_n {
                    Rank::Exact(rank)
                } else {
                    Rank::Exceeds(max_n)
                });
            }
            // Nothing stored: rank(target) > depth + j.
            if self.saturated || self.depth + j >= max_n {
                return Ok(Rank::Exceeds(max_n));
            }
            let projected = frontier.len() as u64 * self.q as u64;
            if spent + projected > self.config.node_budget {
                return Err(Error::CapExceeded(format!(
                    "backward search would visit more than {} tables",
                    self.config.node_budget
                )));
            }
            frontier = frontier
                .iter()
                .flat_map(|&t| self.predecessors(t))
                .collect();
            spent += frontier.len() as u64;
        }
        unreachable!()
    }
}

/// One-off rank query with the default configuration.
pub fn carlitz_rank(field: &Field, table: &ValueTable, max_n: usize) -> Result<Rank> {
    RankSearch::new(field, max_n, RankConfig::default())?.rank(table, max_n)
}
