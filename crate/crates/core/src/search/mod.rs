//! Bounded enumeration of canonical multidegrees and invariant-collision search.
//!
//! The space is split into partitions by the first degree after the fixed prefix.
//! Partitions are independent, so they can be evaluated concurrently and merged in
//! partition order without changing the output.

mod collisions;
pub mod verify;

pub use collisions::{
    find_collisions, find_collisions_among, Checkpoint, CollisionKey, CollisionRecord, PairVerdict,
    ProfileKey,
};
pub use verify::{
    verify_paper_examples, verify_paper_examples_with, RegressionCheck, RegressionReport,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::invariants::MultiDegree;

/// Longest codimension accepted without a fixed total degree.
pub const MAX_UNBOUNDED_CODIM: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub n: u32,
    pub codim_min: usize,
    pub codim_max: usize,
    /// Upper bound on every degree after the prefix.
    pub max_degree: u64,
    #[serde(default)]
    pub total_degree: Option<u64>,
    /// Leading degrees fixed in every emitted list, non-increasing.
    #[serde(default)]
    pub prefix: Vec<u64>,
    #[serde(default = "default_jobs")]
    pub jobs: usize,
    #[serde(default)]
    pub key: CollisionKey,
    /// Maximum number of multidegrees held in the index.
    #[serde(default)]
    pub budget: Option<usize>,
}

fn default_jobs() -> usize {
    1
}

impl SearchConfig {
    pub fn new(n: u32, codim_min: usize, codim_max: usize, max_degree: u64) -> Self {
        SearchConfig {
            n,
            codim_min,
            codim_max,
            max_degree,
            total_degree: None,
            prefix: Vec::new(),
            jobs: 1,
            key: CollisionKey::Full,
            budget: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Precondition(m));
        if self.n == 0 {
            return bad("dimension n must be >= 1".into());
        }
        if self.codim_min < 1 {
            return bad("codimension range must start at 1 or more".into());
        }
        if self.codim_min > self.codim_max {
            return bad(format!(
                "empty codimension range [{}, {}]",
                self.codim_min, self.codim_max
            ));
        }
        if self.max_degree < 2 {
            return bad("max degree must be >= 2".into());
        }
        if self.total_degree.is_none() && self.codim_max > MAX_UNBOUNDED_CODIM {
            return bad(format!(
                "codimension bound {} is effectively unbounded (limit {MAX_UNBOUNDED_CODIM} without a fixed total degree)",
                self.codim_max
            ));
        }
        if self.total_degree == Some(0) {
            return bad("fixed total degree must be positive".into());
        }
        if self.prefix.len() > self.codim_max {
            return bad("prefix is longer than the maximal codimension".into());
        }
        if self.prefix.iter().any(|&d| d < 2) {
            return bad("prefix degrees must be >= 2".into());
        }
        if self.prefix.windows(2).any(|w| w[0] < w[1]) {
            return bad("prefix must be non-increasing".into());
        }
        Ok(())
    }

    /// Largest degree allowed after the prefix.
    fn tail_cap(&self) -> u64 {
        self.prefix
            .last()
            .map_or(self.max_degree, |&last| last.min(self.max_degree))
    }

    fn tail_product_target(&self) -> Option<u64> {
        let t = self.total_degree?;
        let prefix: u128 = self.prefix.iter().map(|&d| d as u128).product();
        (t as u128)
            .is_multiple_of(prefix)
            .then(|| (t as u128 / prefix) as u64)
    }
}

/// One unit of work: lists whose first post-prefix degree is `lead`, or the bare
/// prefix when `lead` is `None`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    pub id: usize,
    pub lead: Option<u64>,
}

pub fn partitions(cfg: &SearchConfig) -> Result<Vec<Partition>> {
    cfg.validate()?;
    let mut out = Vec::new();
    let prefix_len = cfg.prefix.len();
    let bare_prefix_ok = prefix_len >= cfg.codim_min
        && match cfg.total_degree {
            Some(_) => cfg.tail_product_target() == Some(1),
            None => true,
        };
    if bare_prefix_ok && prefix_len > 0 {
        out.push(Partition { id: 0, lead: None });
    }
    let target = cfg.tail_product_target();
    if cfg.total_degree.is_some() && target.is_none() {
        return Ok(out);
    }
    if prefix_len < cfg.codim_max {
        for lead in 2..=cfg.tail_cap() {
            if target.is_some_and(|t| t % lead != 0) {
                continue;
            }
            out.push(Partition {
                id: out.len(),
                lead: Some(lead),
            });
        }
    }
    Ok(out)
}

/// Degree lists of one partition, in deterministic depth-first order.
pub fn enumerate_partition(cfg: &SearchConfig, part: Partition) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut current = cfg.prefix.clone();
    let Some(lead) = part.lead else {
        out.push(current);
        return out;
    };
    let target = cfg.tail_product_target();
    current.push(lead);
    let remaining = target.map(|t| t / lead);
    extend(cfg, &mut current, lead, remaining, &mut out);
    out
}

/// Extends `current` (whose last entry is `cap`) with non-increasing entries.
/// Appends `current` whenever it is a complete list.
fn extend(
    cfg: &SearchConfig,
    current: &mut Vec<u64>,
    cap: u64,
    remaining: Option<u64>,
    out: &mut Vec<Vec<u64>>,
) {
    let len = current.len();
    let complete = len >= cfg.codim_min && remaining.is_none_or(|r| r == 1);
    if complete {
        out.push(current.clone());
    }
    if len == cfg.codim_max {
        return;
    }
    if let Some(r) = remaining {
        if r == 1 {
            return;
        }
        // r must split into at most `slots` factors, each ≤ cap.
        let slots = (cfg.codim_max - len) as u32;
        if (cap as u128)
            .checked_pow(slots)
            .is_some_and(|reach| reach < r as u128)
        {
            return;
        }
    }
    // Fill ascending so the emitted order matches lexicographic-by-tail.
    for next in 2..=cap {
        let rest = match remaining {
            Some(r) if r % next != 0 => continue,
            Some(r) => Some(r / next),
            None => None,
        };
        current.push(next);
        extend(cfg, current, next, rest, out);
        current.pop();
    }
}

/// Every canonical multidegree admitted by `cfg`, one partition at a time.
pub fn enumerate_multidegrees(
    cfg: &SearchConfig,
) -> Result<impl Iterator<Item = MultiDegree> + '_> {
    let parts = partitions(cfg)?;
    Ok(parts.into_iter().flat_map(move |p| {
        enumerate_partition(cfg, p).into_iter().map(move |degrees| {
            MultiDegree::new(cfg.n, degrees).expect("enumerated degrees are >= 2")
        })
    }))
}
