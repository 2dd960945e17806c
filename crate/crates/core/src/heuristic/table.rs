use std::collections::hash_map::Entry;
use std::collections::HashMap;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::Path;

use thiserror::Error;

use super::{DistanceEvaluator, EvalError};
use crate::cube::{CubeState, StateKey, KEY_BYTES};

/// Depth used when no table depth is configured.
pub const DEFAULT_TABLE_DEPTH: u8 = 6;

/// Default cap on stored states (depth 7 holds 9,222,844).
pub const DEFAULT_ENTRY_BUDGET: usize = 12_000_000;

pub const TABLE_MAGIC: [u8; 4] = *b"CWDT";
pub const TABLE_VERSION: u16 = 1;

const HEADER_LEN: usize = 16;
const RECORD_LEN: usize = KEY_BYTES + 1;

#[derive(Debug, Error)]
pub enum TableError {
    #[error("distance table budget of {limit} entries exceeded while expanding depth {depth}")]
    BudgetExceeded { limit: usize, depth: u8 },
    #[error("malformed distance table file: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Exact distance-from-solved for every state within `max_depth` moves.
#[derive(Clone, Debug)]
pub struct DistanceTable {
    max_depth: u8,
    entries: HashMap<StateKey, u8>,
}

impl DistanceTable {
    /// Breadth-first enumeration from the solved state.
    pub fn build(max_depth: u8) -> Result<Self, TableError> {
        Self::build_with_budget(max_depth, DEFAULT_ENTRY_BUDGET)
    }

    pub fn build_with_budget(max_depth: u8, budget: usize) -> Result<Self, TableError> {
        let solved = CubeState::solved();
        if budget < 1 {
            return Err(TableError::BudgetExceeded {
                limit: budget,
                depth: 0,
            });
        }
        let mut entries = HashMap::new();
        entries.insert(solved.canonical_key(), 0u8);
        let mut frontier = vec![solved];
        for depth in 1..=max_depth {
            let mut next = Vec::with_capacity(frontier.len() * 10);
            for s in &frontier {
                for (_, n) in s.neighbors() {
                    let key = n.canonical_key();
                    if let Entry::Vacant(e) = entries.entry(key) {
                        e.insert(depth);
                        next.push(n);
                        if entries.len() > budget {
                            return Err(TableError::BudgetExceeded {
                                limit: budget,
                                depth,
                            });
                        }
                    }
                }
            }
            frontier = next;
        }
        Ok(Self { max_depth, entries })
    }

    pub fn max_depth(&self) -> u8 {
        self.max_depth
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, key: StateKey) -> Option<u8> {
        self.entries.get(&key).copied()
    }

    /// Exact distance, or `OutOfRange` beyond `max_depth`.
    pub fn exact_distance(&self, s: &CubeState) -> Result<u8, EvalError> {
        self.get(s.canonical_key()).ok_or(EvalError::OutOfRange {
            max_depth: self.max_depth,
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = (StateKey, u8)> + '_ {
        self.entries.iter().map(|(k, d)| (*k, *d))
    }

    /// Entries sorted by key.
    pub fn sorted_entries(&self) -> Vec<(StateKey, u8)> {
        let mut v: Vec<_> = self.iter().collect();
        v.sort_unstable_by_key(|(k, _)| *k);
        v
    }

    /// Number of states at each distance `0..=max_depth`.
    pub fn layer_sizes(&self) -> Vec<usize> {
        let mut out = vec![0; usize::from(self.max_depth) + 1];
        for d in self.entries.values() {
            out[usize::from(*d)] += 1;
        }
        out
    }

    /// Writes the binary table format (see the crate README).
    ///
    /// Header, little-endian: magic `CWDT`, version `u16`, max_depth `u8`,
    /// key width `u8`, entry count `u64`. Then one record per state in
    /// ascending key order: the 13 key bytes followed by one distance byte.
    pub fn write_to<W: Write>(&self, mut w: W) -> Result<(), TableError> {
        let mut header = [0u8; HEADER_LEN];
        header[0..4].copy_from_slice(&TABLE_MAGIC);
        header[4..6].copy_from_slice(&TABLE_VERSION.to_le_bytes());
        header[6] = self.max_depth;
        header[7] = KEY_BYTES as u8;
        header[8..16].copy_from_slice(&(self.entries.len() as u64).to_le_bytes());
        w.write_all(&header)?;
        for (key, d) in self.sorted_entries() {
            w.write_all(&key.to_bytes())?;
            w.write_all(&[d])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_from<R: Read>(mut r: R) -> Result<Self, TableError> {
        let mut header = [0u8; HEADER_LEN];
        read_exact_or_format(&mut r, &mut header, "header")?;
        if header[0..4] != TABLE_MAGIC {
            return Err(TableError::Format("bad magic".into()));
        }
        let version = u16::from_le_bytes([header[4], header[5]]);
        if version != TABLE_VERSION {
            return Err(TableError::Format(format!("unsupported version {version}")));
        }
        let max_depth = header[6];
        if usize::from(header[7]) != KEY_BYTES {
            return Err(TableError::Format(format!(
                "key width {} != {KEY_BYTES}",
                header[7]
            )));
        }
        let count = u64::from_le_bytes(header[8..16].try_into().expect("8 bytes"));
        let count = usize::try_from(count)
            .map_err(|_| TableError::Format(format!("entry count {count} too large")))?;

        let mut entries = HashMap::with_capacity(count.min(DEFAULT_ENTRY_BUDGET));
        let mut rec = [0u8; RECORD_LEN];
        let mut prev: Option<StateKey> = None;
        for i in 0..count {
            read_exact_or_format(&mut r, &mut rec, &format!("record {i}"))?;
            let key = StateKey::from_bytes(rec[..KEY_BYTES].try_into().expect("key bytes"));
            let d = rec[KEY_BYTES];
            if d > max_depth {
                return Err(TableError::Format(format!(
                    "record {i}: distance {d} exceeds max_depth {max_depth}"
                )));
            }
            if prev.is_some_and(|p| p >= key) {
                return Err(TableError::Format(format!(
                    "record {i}: keys not strictly ascending"
                )));
            }
            CubeState::from_key(key).map_err(|e| TableError::Format(format!("record {i}: {e}")))?;
            prev = Some(key);
            entries.insert(key, d);
        }
        let mut trailing = [0u8; 1];
        if r.read(&mut trailing)? != 0 {
            return Err(TableError::Format(
                "trailing bytes after last record".into(),
            ));
        }
        if entries.get(&CubeState::solved().canonical_key()) != Some(&0) {
            return Err(TableError::Format("solved state missing or nonzero".into()));
        }
        Ok(Self { max_depth, entries })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), TableError> {
        self.write_to(BufWriter::new(File::create(path)?))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, TableError> {
        Self::read_from(BufReader::new(File::open(path)?))
    }
}

fn read_exact_or_format<R: Read>(r: &mut R, buf: &mut [u8], what: &str) -> Result<(), TableError> {
    r.read_exact(buf).map_err(|e| match e.kind() {
        io::ErrorKind::UnexpectedEof => TableError::Format(format!("truncated {what}")),
        _ => TableError::Io(e),
    })
}

/// [`DistanceTable`] as an `f_d`.
///
/// With `fallback` set, states beyond the radius evaluate to
/// `max_depth + 1` instead of failing.
#[derive(Clone, Debug)]
pub struct TableDistance {
    table: std::sync::Arc<DistanceTable>,
    fallback: bool,
}

impl TableDistance {
    pub fn new(table: std::sync::Arc<DistanceTable>) -> Self {
        Self {
            table,
            fallback: true,
        }
    }

    pub fn strict(table: std::sync::Arc<DistanceTable>) -> Self {
        Self {
            table,
            fallback: false,
        }
    }

    pub fn table(&self) -> &DistanceTable {
        &self.table
    }
}

impl DistanceEvaluator for TableDistance {
    fn distance(&self, s: &CubeState) -> Result<f64, EvalError> {
        match self.table.exact_distance(s) {
            Ok(d) => Ok(f64::from(d)),
            Err(e) if self.fallback => Ok(e.fallback_distance().expect("out of range")),
            Err(e) => Err(e),
        }
    }
}
