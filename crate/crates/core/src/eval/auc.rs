use std::fmt;
use std::str::FromStr;

use super::EvalError;

/// Treatment of a positive and a negative with equal scores.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum TiePolicy {
    /// Ties count as failures.
    #[default]
    Strict,
    /// Ties count one half.
    Half,
}

impl fmt::Display for TiePolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TiePolicy::Strict => "strict",
            TiePolicy::Half => "half",
        })
    }
}

impl FromStr for TiePolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "strict" => Ok(TiePolicy::Strict),
            "half" => Ok(TiePolicy::Half),
            other => Err(format!("unknown tie policy '{other}' (expected strict or half)")),
        }
    }
}

fn check(pos: &[f64], neg: &[f64]) -> Result<(), EvalError> {
    if pos.is_empty() || neg.is_empty() {
        return Err(EvalError::EmptyScores);
    }
    if pos.iter().chain(neg).any(|s| !s.is_finite()) {
        return Err(EvalError::NonFiniteScore);
    }
    Ok(())
}

fn finish(greater: u64, equal: u64, m: usize, n: usize, policy: TiePolicy) -> f64 {
    let pairs = (m as f64) * (n as f64);
    match policy {
        TiePolicy::Strict => greater as f64 / pairs,
        TiePolicy::Half => (greater as f64 + 0.5 * equal as f64) / pairs,
    }
}

/// Fraction of (positive, negative) score pairs in which the positive
/// scores higher, in `O((m + n) log n)`.
pub fn auc(pos: &[f64], neg: &[f64], policy: TiePolicy) -> Result<f64, EvalError> {
    check(pos, neg)?;
    let mut sorted = neg.to_vec();
    sorted.sort_by(f64::total_cmp);
    let (mut greater, mut equal) = (0u64, 0u64);
    for &p in pos {
        let below = sorted.partition_point(|&x| x < p);
        let not_above = sorted.partition_point(|&x| x <= p);
        greater += below as u64;
        equal += (not_above - below) as u64;
    }
    Ok(finish(greater, equal, pos.len(), neg.len(), policy))
}

/// Double-loop reference implementation of [`auc`].
pub fn auc_brute_force(pos: &[f64], neg: &[f64], policy: TiePolicy) -> Result<f64, EvalError> {
    check(pos, neg)?;
    let (mut greater, mut equal) = (0u64, 0u64);
    for &p in pos {
        for &q in neg {
            if p > q {
                greater += 1;
            } else if p == q {
                equal += 1;
            }
        }
    }
    Ok(finish(greater, equal, pos.len(), neg.len(), policy))
}
