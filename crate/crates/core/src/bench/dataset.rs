//! Supervised policy data: one line per table state except solved.
//!
//! ```text
//! # cubewcd-dataset v1: key<TAB>distance<TAB>optimal_actions<TAB>onehot
//! <26 hex digits><TAB>1<TAB>1<TAB>000100...
//! ```
//!
//! `optimal_actions` lists, comma-separated, the indices (in
//! `R r L l U u D d F f B b` order) of every move that lowers the exact
//! distance. `onehot` is the 324-entry sticker encoding as `0`/`1`
//! characters. Lines starting with `#` are comments.

use std::io::{BufRead, Write};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::BenchError;
use crate::cube::{encode_onehot, CubeState, StateKey, ONEHOT_LEN};
use crate::heuristic::{DistanceTable, MlpPolicy, PolicyEvaluator, ProbVector12};

pub const DATASET_HEADER: &str = "# cubewcd-dataset v1: key\tdistance\toptimal_actions\tonehot";

#[derive(Clone, Debug, PartialEq)]
pub struct DatasetRecord {
    pub key: StateKey,
    pub distance: u8,
    pub optimal: Vec<usize>,
    pub input: Vec<f64>,
}

/// Moves from `s` that reach a state one step closer in `table`.
pub fn optimal_actions(table: &DistanceTable, s: &CubeState, distance: u8) -> Vec<usize> {
    s.neighbors()
        .iter()
        .enumerate()
        .filter(|(_, (_, n))| {
            table
                .get(n.canonical_key())
                .is_some_and(|d| d + 1 == distance)
        })
        .map(|(i, _)| i)
        .collect()
}

/// Writes every non-solved state of `table`, ordered by (distance, key) or
/// shuffled by `seed`. Returns the record count.
pub fn export_dataset<W: Write>(
    table: &DistanceTable,
    seed: Option<u64>,
    mut out: W,
) -> Result<usize, BenchError> {
    let mut entries: Vec<(StateKey, u8)> = table.iter().filter(|(_, d)| *d > 0).collect();
    entries.sort_unstable_by_key(|(k, d)| (*d, *k));
    if let Some(seed) = seed {
        entries.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    }
    writeln!(out, "{DATASET_HEADER}")?;
    for (key, d) in &entries {
        let s = CubeState::from_key(*key).expect("table keys are valid");
        let optimal = optimal_actions(table, &s, *d);
        debug_assert!(!optimal.is_empty());
        let actions = optimal
            .iter()
            .map(usize::to_string)
            .collect::<Vec<_>>()
            .join(",");
        let bits: String = encode_onehot(&s)
            .iter()
            .map(|&x| if x == 1.0 { '1' } else { '0' })
            .collect();
        writeln!(out, "{}\t{d}\t{actions}\t{bits}", key.to_hex())?;
    }
    out.flush()?;
    Ok(entries.len())
}

pub fn read_dataset<R: BufRead>(input: R) -> Result<Vec<DatasetRecord>, BenchError> {
    let mut out = Vec::new();
    for (lineno, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |msg: String| BenchError::Dataset(format!("line {}: {msg}", lineno + 1));
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 4 {
            return Err(bad(format!("expected 4 fields, got {}", fields.len())));
        }
        let key = StateKey::from_hex(fields[0]).map_err(|e| bad(e.to_string()))?;
        let distance = fields[1].parse().map_err(|_| bad("bad distance".into()))?;
        let optimal = fields[2]
            .split(',')
            .map(|a| match a.parse::<usize>() {
                Ok(i) if i < 12 => Ok(i),
                _ => Err(bad(format!("bad action index {a:?}"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        if fields[3].len() != ONEHOT_LEN {
            return Err(bad(format!("onehot has {} entries", fields[3].len())));
        }
        let input = fields[3]
            .chars()
            .map(|c| match c {
                '0' => Ok(0.0),
                '1' => Ok(1.0),
                _ => Err(bad(format!("bad onehot character {c:?}"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        out.push(DatasetRecord {
            key,
            distance,
            optimal,
            input,
        });
    }
    Ok(out)
}

/// Fraction of records whose argmax action (lowest index on ties) is one
/// of the record's optimal actions.
pub fn top1_accuracy(policy: &MlpPolicy, records: &[DatasetRecord]) -> Result<f64, BenchError> {
    if records.is_empty() {
        return Ok(0.0);
    }
    let mut hits = 0usize;
    for r in records {
        let out = policy
            .model()
            .forward(&r.input)
            .map_err(|e| BenchError::Dataset(e.to_string()))?;
        let p = ProbVector12::new(out.try_into().expect("12 outputs"))?;
        if r.optimal.contains(&p.argmax()) {
            hits += 1;
        }
    }
    Ok(hits as f64 / records.len() as f64)
}

/// Same as [`top1_accuracy`] but through any policy on decoded states.
pub fn policy_accuracy(
    policy: &dyn PolicyEvaluator,
    records: &[DatasetRecord],
) -> Result<f64, BenchError> {
    if records.is_empty() {
        return Ok(0.0);
    }
    let mut hits = 0usize;
    for r in records {
        let s = CubeState::from_key(r.key).map_err(|e| BenchError::Dataset(e.to_string()))?;
        if r.optimal.contains(&policy.policy(&s)?.argmax()) {
            hits += 1;
        }
    }
    Ok(hits as f64 / records.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::Move;
    use crate::heuristic::{Activation, BoltzmannPolicy, Layer, MlpModel, TableDistance};
    use std::sync::Arc;

    fn export(depth: u8, seed: Option<u64>) -> (usize, String) {
        let t = DistanceTable::build(depth).unwrap();
        let mut buf = Vec::new();
        let n = export_dataset(&t, seed, &mut buf).unwrap();
        (n, String::from_utf8(buf).unwrap())
    }

    #[test]
    fn depth_one_has_twelve_single_action_records() {
        let (n, text) = export(1, None);
        assert_eq!(n, 12);
        let recs = read_dataset(text.as_bytes()).unwrap();
        assert_eq!(recs.len(), 12);
        for r in &recs {
            assert_eq!(r.distance, 1);
            assert_eq!(r.optimal.len(), 1);
            let s = CubeState::from_key(r.key).unwrap();
            assert!(s.apply_move(Move::ALL[r.optimal[0]]).is_solved());
            assert_eq!(r.input, encode_onehot(&s));
        }
    }

    #[test]
    fn depth_two_record_count_and_nonempty_labels() {
        let (n, text) = export(2, None);
        assert_eq!(n, 126);
        let recs = read_dataset(text.as_bytes()).unwrap();
        assert!(recs.iter().all(|r| !r.optimal.is_empty()));
        // sorted by distance first
        assert!(recs
            .windows(2)
            .all(|w| (w[0].distance, w[0].key) < (w[1].distance, w[1].key)));
    }

    #[test]
    fn seeded_shuffle_is_stable() {
        let (_, a) = export(2, Some(5));
        let (_, b) = export(2, Some(5));
        let (_, c) = export(2, None);
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn malformed_lines_are_rejected() {
        assert!(read_dataset("abc\t1\t0".as_bytes()).is_err());
        let (_, text) = export(1, None);
        let line = text.lines().nth(1).unwrap();
        assert!(read_dataset(line.replace("\t1\t", "\tx\t").as_bytes()).is_err());
        let truncated = &line[..line.len() - 1];
        assert!(read_dataset(truncated.as_bytes()).is_err());
        let parts: Vec<&str> = line.split('\t').collect();
        let bad = format!("{}\t{}\t12\t{}", parts[0], parts[1], parts[3]);
        assert!(read_dataset(bad.as_bytes()).is_err());
    }

    #[test]
    fn accuracy_of_cold_boltzmann_is_perfect() {
        let t = Arc::new(DistanceTable::build(3).unwrap());
        let mut buf = Vec::new();
        export_dataset(&t, None, &mut buf).unwrap();
        let recs = read_dataset(buf.as_slice()).unwrap();
        let p = BoltzmannPolicy::new(Arc::new(TableDistance::new(t)), 0.05).unwrap();
        assert_eq!(policy_accuracy(&p, &recs).unwrap(), 1.0);
    }

    #[test]
    fn zero_model_accuracy_matches_first_action_rule() {
        let (_, text) = export(2, None);
        let recs = read_dataset(text.as_bytes()).unwrap();
        let m = MlpModel::onehot(vec![Layer {
            input: 324,
            output: 12,
            weights: vec![0.0; 324 * 12],
            bias: vec![0.0; 12],
            activation: Activation::Softmax,
        }])
        .unwrap();
        let p = MlpPolicy::new(m).unwrap();
        // uniform output: argmax is action 0 for every record
        let expected =
            recs.iter().filter(|r| r.optimal.contains(&0)).count() as f64 / recs.len() as f64;
        assert_eq!(top1_accuracy(&p, &recs).unwrap(), expected);
        assert_eq!(policy_accuracy(&p, &recs).unwrap(), expected);
    }
}
