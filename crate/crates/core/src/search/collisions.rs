use std::collections::HashMap;
use std::hash::{DefaultHasher, Hash, Hasher};

use serde::{Deserialize, Serialize};

use super::{enumerate_partition, partitions, SearchConfig};
use crate::classify::{verdict_from_profiles, ClassificationVerdict};
use crate::error::{Error, Result};
use crate::exactmath::{decimal, BigInt};
use crate::invariants::{invariant_profile, InvariantProfile, MultiDegree};
use crate::parallel::ordered_map;

/// Which invariants two multidegrees must share to count as colliding.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CollisionKey {
    /// `(d, p_1..p_⌊n/2⌋, e)`.
    #[default]
    Full,
    /// `(d, p_1..p_⌊n/2⌋)`.
    DegreeAndPontrjagin,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ProfileKey {
    pub n: u32,
    #[serde(with = "decimal")]
    pub d: BigInt,
    #[serde(with = "decimal::vec")]
    pub p: Vec<BigInt>,
    #[serde(with = "decimal::option", default)]
    pub e: Option<BigInt>,
}

impl ProfileKey {
    pub fn from_profile(profile: &InvariantProfile, key: CollisionKey) -> Self {
        ProfileKey {
            n: profile.n,
            d: profile.d.clone(),
            p: profile.p.clone(),
            e: match key {
                CollisionKey::Full => Some(profile.e.clone()),
                CollisionKey::DegreeAndPontrjagin => None,
            },
        }
    }

    fn bucket(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.hash(&mut h);
        h.finish()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairVerdict {
    pub left: usize,
    pub right: usize,
    pub verdict: ClassificationVerdict,
}

/// Distinct multidegrees sharing one key, with verdicts for every pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollisionRecord {
    pub key: ProfileKey,
    pub members: Vec<MultiDegree>,
    pub verdicts: Vec<PairVerdict>,
}

/// Progress marker written when a search stops early.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub last_completed_partition: Option<usize>,
}

struct Entry {
    md: MultiDegree,
    profile: InvariantProfile,
    key: ProfileKey,
}

/// Hash buckets over the key, confirmed by exact equality before grouping.
#[derive(Default)]
struct Index {
    entries: Vec<Entry>,
    buckets: HashMap<u64, Vec<Vec<usize>>>,
}

impl Index {
    fn insert(&mut self, entry: Entry) {
        let idx = self.entries.len();
        let groups = self.buckets.entry(entry.key.bucket()).or_default();
        match groups
            .iter_mut()
            .find(|g| self.entries[g[0]].key == entry.key)
        {
            Some(group) => group.push(idx),
            None => groups.push(vec![idx]),
        }
        self.entries.push(entry);
    }

    fn len(&self) -> usize {
        self.entries.len()
    }

    fn into_records(self) -> Result<Vec<CollisionRecord>> {
        let mut records = Vec::new();
        for groups in self.buckets.values() {
            for group in groups {
                let mut members: Vec<&Entry> = group.iter().map(|&i| &self.entries[i]).collect();
                members.sort_by(|a, b| a.md.cmp(&b.md));
                members.dedup_by(|a, b| a.md == b.md);
                if members.len() < 2 {
                    continue;
                }
                let mut verdicts = Vec::new();
                for i in 0..members.len() {
                    for j in i + 1..members.len() {
                        verdicts.push(PairVerdict {
                            left: i,
                            right: j,
                            verdict: verdict_from_profiles(
                                &members[i].profile,
                                &members[j].profile,
                            )?,
                        });
                    }
                }
                records.push(CollisionRecord {
                    key: members[0].key.clone(),
                    members: members.iter().map(|e| e.md.clone()).collect(),
                    verdicts,
                });
            }
        }
        records.sort_by(|a, b| {
            a.key
                .d
                .cmp(&b.key.d)
                .then_with(|| a.members[0].degrees().cmp(b.members[0].degrees()))
        });
        Ok(records)
    }
}

fn profile_entries(mds: Vec<MultiDegree>, key: CollisionKey) -> Result<Vec<Entry>> {
    mds.into_iter()
        .map(|md| {
            let profile = invariant_profile(&md)?;
            let key = ProfileKey::from_profile(&profile, key);
            Ok(Entry { md, profile, key })
        })
        .collect()
}

/// Groups of ≥ 2 enumerated multidegrees sharing the configured key.
///
/// Output is ordered by total degree, then by the first member's degree list,
/// and does not depend on `cfg.jobs`.
pub fn find_collisions(cfg: &SearchConfig) -> Result<Vec<CollisionRecord>> {
    let parts = partitions(cfg)?;
    let mut index = Index::default();
    let batch = cfg.jobs.max(1);
    let mut last_completed = None;
    for chunk in parts.chunks(batch) {
        let computed = ordered_map(chunk.to_vec(), cfg.jobs, |part| {
            let mds = enumerate_partition(cfg, part)
                .into_iter()
                .map(|d| MultiDegree::new(cfg.n, d))
                .collect::<Result<Vec<_>>>()?;
            profile_entries(mds, cfg.key)
        });
        for (part, entries) in chunk.iter().zip(computed) {
            let entries = entries?;
            if let Some(budget) = cfg.budget {
                if index.len() + entries.len() > budget {
                    return Err(Error::BudgetExceeded {
                        budget,
                        last_completed_partition: last_completed,
                    });
                }
            }
            for e in entries {
                index.insert(e);
            }
            last_completed = Some(part.id);
        }
    }
    index.into_records()
}

/// Collisions among an explicit candidate set.
pub fn find_collisions_among(
    candidates: &[MultiDegree],
    key: CollisionKey,
) -> Result<Vec<CollisionRecord>> {
    let mut index = Index::default();
    for e in profile_entries(candidates.to_vec(), key)? {
        index.insert(e);
    }
    index.into_records()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn md(n: u32, d: &[u64]) -> MultiDegree {
        MultiDegree::new(n, d.iter().copied()).unwrap()
    }

    #[test]
    fn explicit_pair_collides() {
        let set = [
            md(5, &[46, 36, 34, 21, 14, 13, 12, 11, 3, 2, 2]),
            md(5, &[44, 42, 26, 23, 18, 17, 7, 6, 6, 4]),
            md(5, &[7, 3]),
        ];
        let recs = find_collisions_among(&set, CollisionKey::Full).unwrap();
        assert_eq!(recs.len(), 1);
        assert_eq!(recs[0].members.len(), 2);
        assert_eq!(
            recs[0].verdicts[0].verdict,
            ClassificationVerdict::Diffeomorphic
        );
    }

    #[test]
    fn duplicate_candidates_are_not_collisions() {
        let x = md(5, &[7, 3]);
        let recs = find_collisions_among(&[x.clone(), x], CollisionKey::Full).unwrap();
        assert!(recs.is_empty());
    }

    #[test]
    fn budget_is_enforced() {
        let mut cfg = SearchConfig::new(5, 1, 3, 12);
        cfg.budget = Some(50);
        match find_collisions(&cfg) {
            Err(Error::BudgetExceeded {
                budget,
                last_completed_partition,
            }) => {
                assert_eq!(budget, 50);
                assert!(last_completed_partition.is_some());
            }
            other => panic!("expected budget error, got {other:?}"),
        }
    }
}
