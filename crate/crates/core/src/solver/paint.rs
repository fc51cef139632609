//! Paintability search over the threshold.
//!
//! Pusher winning at threshold Γ implies winning at Γ − 1, so the values
//! over increasing Γ switch from Pusher to Remover at most once. The
//! paintability is the first Γ won by Remover.

use super::{evaluate_with, SolveError, SolveStats, SolverConfig, Value};
use crate::game::{GameError, GameSpec};

#[derive(Debug, Clone, serde::Serialize)]
pub struct PaintReport {
    pub sizes: Vec<usize>,
    pub low: u32,
    pub high: u32,
    pub value: u32,
    /// Every threshold evaluated, in order.
    pub evaluations: Vec<(u32, Value, SolveStats)>,
}

/// Default search range: from the number of parts (the chromatic number) up
/// to `⌊3n/2⌋` for `n` parts of size 3, `parts + #3-parts` for parts of
/// sizes 2 and 3, and the vertex count otherwise.
pub fn default_bounds(sizes: &[usize]) -> (u32, u32) {
    let parts = sizes.len() as u32;
    let threes = sizes.iter().filter(|&&s| s == 3).count() as u32;
    let high = if !sizes.is_empty() && threes == parts {
        (3 * parts / 2).max(1)
    } else if sizes.iter().all(|&s| s == 2 || s == 3) {
        parts + threes
    } else {
        sizes.iter().sum::<usize>() as u32
    };
    (parts.max(1), high.max(parts.max(1)))
}

pub fn paintability(sizes: &[usize]) -> Result<PaintReport, SolveError> {
    let (low, high) = default_bounds(sizes);
    paintability_with(sizes, low, high, &SolverConfig::default())
}

/// Smallest Γ in `low..=high` whose game is won by Remover.
pub fn paintability_with(
    sizes: &[usize],
    low: u32,
    high: u32,
    config: &SolverConfig,
) -> Result<PaintReport, SolveError> {
    if low == 0 || low > high {
        return Err(GameError::InvalidSpec(format!("bad threshold range {low}..={high}")).into());
    }
    let base = GameSpec::new(low, sizes)?;
    let mut evaluations = Vec::new();
    for threshold in low..=high {
        let spec = base.with_threshold(threshold)?;
        let result = evaluate_with(&spec, config)?;
        evaluations.push((threshold, result.value, result.stats));
        if result.value == Value::RemoverWins {
            return Ok(PaintReport { sizes: base.sizes().to_vec(), low, high, value: threshold, evaluations });
        }
    }
    Err(SolveError::RangeExhausted {
        low,
        high,
        evaluated: evaluations.into_iter().map(|(g, v, _)| (g, v)).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounds() {
        assert_eq!(default_bounds(&[3, 3, 3, 3]), (4, 6));
        assert_eq!(default_bounds(&[3, 3, 3, 3, 3]), (5, 7));
        assert_eq!(default_bounds(&[2, 2, 2, 3, 3, 3]), (6, 9));
        assert_eq!(default_bounds(&[2, 2]), (2, 2));
        assert_eq!(default_bounds(&[1, 3]), (2, 4));
    }

    #[test]
    fn small_known_values() {
        assert_eq!(paintability(&[2, 2]).unwrap().value, 2);
        assert_eq!(paintability(&[2, 2, 2]).unwrap().value, 3);
        assert_eq!(paintability(&[2, 3]).unwrap().value, 2);
        assert_eq!(paintability(&[2, 2, 3]).unwrap().value, 4);
        assert_eq!(paintability(&[1, 1, 1]).unwrap().value, 3);
    }

    #[test]
    fn exhausted_range_reports_values() {
        let err = paintability_with(&[1, 1, 1], 1, 2, &SolverConfig::default()).unwrap_err();
        match err {
            SolveError::RangeExhausted { evaluated, .. } => {
                assert_eq!(evaluated, vec![(1, Value::PusherWins), (2, Value::PusherWins)]);
            }
            other => panic!("unexpected {other}"),
        }
        assert!(paintability_with(&[1], 3, 2, &SolverConfig::default()).is_err());
    }
}
