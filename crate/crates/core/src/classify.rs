//! Pairwise classification of complete intersections from their invariants.
//!
//! In complex dimensions 5, 6 and 7 two complete intersections are homeomorphic
//! exactly when total degree, Pontrjagin classes and Euler characteristic agree.
//! Homeomorphic ones are moreover diffeomorphic when the total degree is divisible
//! by enough small primes (Traving's condition):
//!
//! ```text
//! ν_p(d) ≥ (2n+1) / (2(p-1)) + 1     for every prime p with p(p-1) ≤ n+1
//! ```

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::{decimal, is_prime_u64, valuation, BigInt};
use crate::invariants::{invariant_profile, InvariantProfile, MultiDegree, ProfileDocument};

/// Dimensions where equal invariants are known to imply homeomorphism.
pub const HOMEOMORPHISM_CRITERION_DIMS: [u32; 3] = [5, 6, 7];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TravingPrime {
    pub p: u64,
    /// Least exponent that satisfies the bound.
    pub threshold: u32,
    pub exponent: u32,
    pub satisfied: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TravingReport {
    pub n: u32,
    #[serde(with = "decimal")]
    pub d: BigInt,
    pub primes: Vec<TravingPrime>,
    pub holds: bool,
}

/// Smallest `ν` with `2(p-1)ν ≥ 2n+1 + 2(p-1)`.
pub fn traving_threshold(n: u32, p: u64) -> u32 {
    let step = 2 * (p - 1);
    let need = 2 * n as u64 + 1 + step;
    need.div_ceil(step) as u32
}

/// Primes with `p(p-1) ≤ n+1`.
pub fn traving_primes(n: u32) -> Vec<u64> {
    (2u64..)
        .take_while(|p| p * (p - 1) <= n as u64 + 1)
        .filter(|&p| is_prime_u64(p))
        .collect()
}

pub fn traving_condition(n: u32, d: &BigInt) -> Result<TravingReport> {
    if d < &BigInt::from(1) {
        return Err(Error::Precondition(format!(
            "total degree must be positive, got {d}"
        )));
    }
    let primes: Vec<TravingPrime> = traving_primes(n)
        .into_iter()
        .map(|p| {
            let threshold = traving_threshold(n, p);
            let exponent = valuation(d, p);
            TravingPrime {
                p,
                threshold,
                exponent,
                satisfied: exponent >= threshold,
            }
        })
        .collect();
    let holds = primes.iter().all(|e| e.satisfied);
    Ok(TravingReport {
        n,
        d: d.clone(),
        primes,
        holds,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Invariant {
    TotalDegree,
    Pontrjagin(usize),
    Euler,
}

impl fmt::Display for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Invariant::TotalDegree => f.write_str("d"),
            Invariant::Pontrjagin(k) => write!(f, "p_{k}"),
            Invariant::Euler => f.write_str("e"),
        }
    }
}

impl Serialize for Invariant {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Invariant {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        match text.as_str() {
            "d" => Ok(Invariant::TotalDegree),
            "e" => Ok(Invariant::Euler),
            other => other
                .strip_prefix("p_")
                .and_then(|k| k.parse().ok())
                .map(Invariant::Pontrjagin)
                .ok_or_else(|| serde::de::Error::custom(format!("unknown invariant {other:?}"))),
        }
    }
}

/// One invariant on which the two sides disagree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub invariant: Invariant,
    #[serde(with = "decimal")]
    pub left: BigInt,
    #[serde(with = "decimal")]
    pub right: BigInt,
}

impl Witness {
    fn mirrored(&self) -> Self {
        Witness {
            invariant: self.invariant,
            left: self.right.clone(),
            right: self.left.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum ClassificationVerdict {
    SameMultidegree,
    Diffeomorphic,
    /// Homeomorphic, but Traving's sufficient condition fails; smoothing type unknown.
    HomeomorphicSmoothingUnknown,
    NotHomeomorphic {
        witness: Witness,
        differences: Vec<Witness>,
    },
    /// Invariants agree but no homeomorphism criterion is available in this dimension.
    InvariantsEqualInconclusive,
    /// Only `d` or Pontrjagin numbers differ and `n ≤ 2`, where they are not
    /// topological invariants of the underlying manifold.
    InvariantsDifferInconclusive {
        differences: Vec<Witness>,
    },
}

impl ClassificationVerdict {
    /// The verdict with left and right swapped in every witness.
    pub fn mirrored(&self) -> Self {
        let flip = |ws: &[Witness]| ws.iter().map(Witness::mirrored).collect();
        match self {
            ClassificationVerdict::NotHomeomorphic {
                witness,
                differences,
            } => ClassificationVerdict::NotHomeomorphic {
                witness: witness.mirrored(),
                differences: flip(differences),
            },
            ClassificationVerdict::InvariantsDifferInconclusive { differences } => {
                ClassificationVerdict::InvariantsDifferInconclusive {
                    differences: flip(differences),
                }
            }
            other => other.clone(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ClassificationVerdict::SameMultidegree => "same_multidegree",
            ClassificationVerdict::Diffeomorphic => "diffeomorphic",
            ClassificationVerdict::HomeomorphicSmoothingUnknown => "homeomorphic_smoothing_unknown",
            ClassificationVerdict::NotHomeomorphic { .. } => "not_homeomorphic",
            ClassificationVerdict::InvariantsEqualInconclusive => "invariants_equal_inconclusive",
            ClassificationVerdict::InvariantsDifferInconclusive { .. } => {
                "invariants_differ_inconclusive"
            }
        }
    }

    pub fn is_diffeomorphic(&self) -> bool {
        matches!(
            self,
            ClassificationVerdict::SameMultidegree | ClassificationVerdict::Diffeomorphic
        )
    }
}

impl fmt::Display for ClassificationVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassificationVerdict::NotHomeomorphic { witness, .. } => write!(
                f,
                "not_homeomorphic ({}: {} vs {})",
                witness.invariant, witness.left, witness.right
            ),
            other => f.write_str(other.name()),
        }
    }
}

pub fn differences(a: &InvariantProfile, b: &InvariantProfile) -> Vec<Witness> {
    let mut out = Vec::new();
    let mut push = |invariant, l: &BigInt, r: &BigInt| {
        if l != r {
            out.push(Witness {
                invariant,
                left: l.clone(),
                right: r.clone(),
            });
        }
    };
    push(Invariant::TotalDegree, &a.d, &b.d);
    for (k, (l, r)) in a.p.iter().zip(&b.p).enumerate() {
        push(Invariant::Pontrjagin(k + 1), l, r);
    }
    push(Invariant::Euler, &a.e, &b.e);
    out
}

/// Verdict from two already-computed profiles of distinct canonical multidegrees.
pub fn verdict_from_profiles(
    a: &InvariantProfile,
    b: &InvariantProfile,
) -> Result<ClassificationVerdict> {
    if a.n != b.n {
        return Err(Error::DimensionMismatch {
            left: a.n,
            right: b.n,
        });
    }
    let n = a.n;
    let diffs = differences(a, b);
    if diffs.is_empty() {
        if !HOMEOMORPHISM_CRITERION_DIMS.contains(&n) {
            return Ok(ClassificationVerdict::InvariantsEqualInconclusive);
        }
        return Ok(if traving_condition(n, &a.d)?.holds {
            ClassificationVerdict::Diffeomorphic
        } else {
            ClassificationVerdict::HomeomorphicSmoothingUnknown
        });
    }
    // The Euler characteristic is a homotopy invariant in every dimension; d and the
    // Pontrjagin multiples of x^{2k} are topological once x generates H^2 (n ≥ 3).
    let witness = if n >= 3 {
        diffs.first().cloned()
    } else {
        diffs
            .iter()
            .find(|w| w.invariant == Invariant::Euler)
            .cloned()
    };
    Ok(match witness {
        Some(witness) => ClassificationVerdict::NotHomeomorphic {
            witness,
            differences: diffs,
        },
        None => ClassificationVerdict::InvariantsDifferInconclusive { differences: diffs },
    })
}

pub fn classify_pair(a: &MultiDegree, b: &MultiDegree) -> Result<ClassificationVerdict> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch {
            left: a.n(),
            right: b.n(),
        });
    }
    if a == b {
        return Ok(ClassificationVerdict::SameMultidegree);
    }
    verdict_from_profiles(&invariant_profile(a)?, &invariant_profile(b)?)
}

/// Full comparison document: both profiles, the verdict and Traving reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Comparison {
    pub left: ProfileDocument,
    pub right: ProfileDocument,
    #[serde(flatten)]
    pub verdict: ClassificationVerdict,
    pub traving: TravingReport,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub traving_right: Option<TravingReport>,
}

pub fn compare(a: &MultiDegree, b: &MultiDegree) -> Result<Comparison> {
    let verdict = classify_pair(a, b)?;
    let (pa, pb) = (invariant_profile(a)?, invariant_profile(b)?);
    let traving = traving_condition(a.n(), &pa.d)?;
    let traving_right = if pa.d != pb.d {
        Some(traving_condition(b.n(), &pb.d)?)
    } else {
        None
    };
    Ok(Comparison {
        left: ProfileDocument::new(a, &pa),
        right: ProfileDocument::new(b, &pb),
        verdict,
        traving,
        traving_right,
    })
}
