use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::BenchError;
use crate::cube::{scramble, CubeState, MoveSequence};

/// One scrambled start state. `scramble(seed, depth)` reproduces it.
#[derive(Clone, Debug, PartialEq)]
pub struct Sample {
    pub index: usize,
    pub seed: u64,
    pub depth: usize,
    pub state: CubeState,
    pub moves: MoveSequence,
}

#[derive(Clone, Debug, Serialize)]
pub(crate) struct SampleSummary {
    pub index: usize,
    pub seed: u64,
    pub depth: usize,
    pub scramble: String,
    pub key: String,
}

impl From<&Sample> for SampleSummary {
    fn from(s: &Sample) -> Self {
        Self {
            index: s.index,
            seed: s.seed,
            depth: s.depth,
            scramble: s.moves.to_string(),
            key: s.state.canonical_key().to_hex(),
        }
    }
}

/// `n` distinct scrambles with depths drawn uniformly from
/// `min_depth..=max_depth`. Repeated states are redrawn.
pub fn gen_samples(
    n: usize,
    min_depth: usize,
    max_depth: usize,
    seed: u64,
) -> Result<Vec<Sample>, BenchError> {
    if n == 0 {
        return Err(BenchError::Config("sample count must be positive".into()));
    }
    if min_depth > max_depth {
        return Err(BenchError::Config(format!(
            "depth range [{min_depth}, {max_depth}] is empty"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = HashSet::with_capacity(n);
    let mut out = Vec::with_capacity(n);
    let max_attempts = n.saturating_mul(200).saturating_add(1000);
    let mut attempts = 0;
    while out.len() < n {
        if attempts == max_attempts {
            return Err(BenchError::CorpusExhausted {
                requested: n,
                found: out.len(),
            });
        }
        attempts += 1;
        let depth = rng.random_range(min_depth..=max_depth);
        let sub_seed: u64 = rng.random();
        let (state, moves) = scramble(sub_seed, depth);
        if seen.insert(state.canonical_key()) {
            out.push(Sample {
                index: out.len(),
                seed: sub_seed,
                depth,
                state,
                moves,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_hundred_distinct_states() {
        let c = gen_samples(200, 5, 12, 7).unwrap();
        assert_eq!(c.len(), 200);
        let keys: HashSet<_> = c.iter().map(|s| s.state.canonical_key()).collect();
        assert_eq!(keys.len(), 200);
        for s in &c {
            assert!((5..=12).contains(&s.depth));
            assert_eq!(scramble(s.seed, s.depth), (s.state, s.moves.clone()));
        }
    }

    #[test]
    fn depth_zero_is_solved() {
        let c = gen_samples(1, 0, 0, 3).unwrap();
        assert!(c[0].state.is_solved());
    }

    #[test]
    fn deterministic() {
        assert_eq!(
            gen_samples(30, 2, 6, 99).unwrap(),
            gen_samples(30, 2, 6, 99).unwrap()
        );
    }

    #[test]
    fn exhaustion_and_config_errors() {
        assert!(matches!(
            gen_samples(2, 0, 0, 1),
            Err(BenchError::CorpusExhausted {
                requested: 2,
                found: 1
            })
        ));
        assert!(matches!(
            gen_samples(14, 0, 1, 1),
            Err(BenchError::CorpusExhausted { .. })
        ));
        assert!(gen_samples(13, 0, 1, 1).is_ok());
        assert!(matches!(
            gen_samples(0, 1, 2, 1),
            Err(BenchError::Config(_))
        ));
        assert!(matches!(
            gen_samples(3, 4, 2, 1),
            Err(BenchError::Config(_))
        ));
    }
}
