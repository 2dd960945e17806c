//! A* over the cube graph with a WCD heuristic.
//!
//! Costs are unit per move, `f = g + h`, and `h` is 0 at the solved state
//! and `d^(k)` elsewhere. Ties on `f` go to the larger `g`, then to the
//! smaller state key. Stale heap entries are skipped on pop, closed states
//! are never reopened, and the path is rebuilt from parent links.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use thiserror::Error;

use crate::cube::{CubeState, Move, MoveSequence, StateKey, Violation};
use crate::heuristic::{DistanceEvaluator, PolicyEvaluator};
use crate::wcd::{wcd, WcdError, WcdParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchLimits {
    pub max_closed_nodes: usize,
    pub max_time: Duration,
}

impl Default for SearchLimits {
    fn default() -> Self {
        Self {
            max_closed_nodes: 5_000_000,
            max_time: Duration::from_secs(600),
        }
    }
}

impl SearchLimits {
    pub fn new(max_closed_nodes: usize, max_time: Duration) -> Result<Self, SolveError> {
        if max_closed_nodes == 0 || max_time.is_zero() {
            return Err(SolveError::InvalidLimits);
        }
        Ok(Self {
            max_closed_nodes,
            max_time,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LimitKind {
    ClosedNodes,
    Time,
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum SolveError {
    #[error("start state is invalid: {0}")]
    InvalidStart(Violation),
    #[error("search limits must be positive")]
    InvalidLimits,
    #[error("{kind:?} limit exceeded after closing {closed} nodes in {elapsed:?}")]
    LimitExceeded {
        kind: LimitKind,
        closed: usize,
        elapsed: Duration,
    },
    #[error("heuristic evaluation failed: {0}")]
    Heuristic(#[from] WcdError),
    #[error("internal error: broken parent chain at {0}")]
    BrokenChain(StateKey),
}

/// `h(n)`: 0 at the solved state, otherwise the `k`-layer WCD.
pub fn heuristic_h(
    n: &CubeState,
    params: WcdParams,
    f_d: &dyn DistanceEvaluator,
    f_p: &dyn PolicyEvaluator,
) -> Result<f64, WcdError> {
    if n.is_solved() {
        return Ok(0.0);
    }
    wcd(n, params, f_d, f_p)
}

/// A configured heuristic: WCD parameters plus the two evaluators.
#[derive(Clone)]
pub struct Heuristic {
    params: WcdParams,
    f_d: Arc<dyn DistanceEvaluator>,
    f_p: Arc<dyn PolicyEvaluator>,
    label: String,
    parallel: bool,
}

impl Heuristic {
    pub fn new(
        params: WcdParams,
        f_d: Arc<dyn DistanceEvaluator>,
        f_p: Arc<dyn PolicyEvaluator>,
    ) -> Self {
        let label = if params.k() == 0 {
            "k0".to_string()
        } else {
            format!("wcd-k{}-mu{}", params.k(), params.mu())
        };
        Self {
            params,
            f_d,
            f_p,
            label,
            parallel: false,
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Evaluate each expansion's new children concurrently.
    pub fn with_parallel(mut self, parallel: bool) -> Self {
        self.parallel = parallel;
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn params(&self) -> WcdParams {
        self.params
    }

    pub fn h(&self, s: &CubeState) -> Result<f64, WcdError> {
        heuristic_h(s, self.params, self.f_d.as_ref(), self.f_p.as_ref())
    }

    fn h_many(&self, states: &[CubeState]) -> Vec<Result<f64, WcdError>> {
        if self.parallel && states.len() > 1 {
            states.par_iter().map(|s| self.h(s)).collect()
        } else {
            states.iter().map(|s| self.h(s)).collect()
        }
    }
}

impl std::fmt::Debug for Heuristic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Heuristic")
            .field("params", &self.params)
            .field("label", &self.label)
            .finish()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    pub moves: MoveSequence,
    pub searched_nodes: usize,
    pub elapsed: Duration,
    pub heuristic: String,
}

impl Solution {
    pub fn length(&self) -> usize {
        self.moves.len()
    }
}

/// Heap entry. `Ord` ranks the entry to expand next as the greatest.
#[derive(Clone, Copy, Debug)]
pub struct SearchNode {
    pub key: StateKey,
    pub g: u32,
    pub h: f64,
    pub f: f64,
}

impl SearchNode {
    fn new(key: StateKey, g: u32, h: f64) -> Self {
        Self {
            key,
            g,
            h,
            f: f64::from(g) + h,
        }
    }
}

impl PartialEq for SearchNode {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for SearchNode {}

impl PartialOrd for SearchNode {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SearchNode {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .f
            .total_cmp(&self.f)
            .then(self.g.cmp(&other.g))
            .then(other.key.cmp(&self.key))
    }
}

/// Bookkeeping for every generated state.
#[derive(Clone, Debug)]
pub struct NodeRecord {
    pub state: CubeState,
    pub g: u32,
    pub h: f64,
    /// Predecessor and the move taken from it; `None` for the start.
    pub parent: Option<(StateKey, Move)>,
    pub closed: bool,
}

pub type NodeTable = HashMap<StateKey, NodeRecord>;

/// Walks parent links from `goal` back to the start and returns the moves
/// in forward order.
pub fn reconstruct_path(goal: StateKey, nodes: &NodeTable) -> Result<MoveSequence, SolveError> {
    let mut moves = Vec::new();
    let mut cur = goal;
    loop {
        let rec = nodes.get(&cur).ok_or(SolveError::BrokenChain(cur))?;
        match rec.parent {
            None => break,
            Some((prev, m)) => {
                moves.push(m);
                cur = prev;
            }
        }
        if moves.len() > nodes.len() {
            return Err(SolveError::BrokenChain(cur));
        }
    }
    moves.reverse();
    Ok(MoveSequence(moves))
}

pub fn astar_solve(
    start: &CubeState,
    heuristic: &Heuristic,
    limits: SearchLimits,
) -> Result<Solution, SolveError> {
    start.validate().map_err(SolveError::InvalidStart)?;
    let t0 = Instant::now();
    let start_key = start.canonical_key();
    let h0 = heuristic.h(start)?;

    let mut nodes: NodeTable = HashMap::new();
    nodes.insert(
        start_key,
        NodeRecord {
            state: *start,
            g: 0,
            h: h0,
            parent: None,
            closed: false,
        },
    );
    let mut open = BinaryHeap::new();
    open.push(SearchNode::new(start_key, 0, h0));
    let mut closed = 0usize;

    while let Some(entry) = open.pop() {
        let rec = nodes
            .get_mut(&entry.key)
            .expect("pushed nodes are recorded");
        if rec.closed || entry.g > rec.g {
            continue;
        }
        rec.closed = true;
        closed += 1;
        let state = rec.state;
        let g = rec.g;

        if state.is_solved() {
            let moves = reconstruct_path(entry.key, &nodes)?;
            return Ok(Solution {
                moves,
                searched_nodes: closed,
                elapsed: t0.elapsed(),
                heuristic: heuristic.label().to_string(),
            });
        }
        if closed >= limits.max_closed_nodes {
            return Err(SolveError::LimitExceeded {
                kind: LimitKind::ClosedNodes,
                closed,
                elapsed: t0.elapsed(),
            });
        }
        if t0.elapsed() > limits.max_time {
            return Err(SolveError::LimitExceeded {
                kind: LimitKind::Time,
                closed,
                elapsed: t0.elapsed(),
            });
        }

        let child_g = g + 1;
        let mut updates: Vec<(Move, CubeState, StateKey, Option<f64>)> = Vec::with_capacity(12);
        for (m, child) in state.neighbors() {
            let key = child.canonical_key();
            match nodes.get(&key) {
                Some(r) if r.closed || r.g <= child_g => {}
                Some(r) => updates.push((m, child, key, Some(r.h))),
                None => updates.push((m, child, key, None)),
            }
        }
        let fresh: Vec<CubeState> = updates
            .iter()
            .filter(|u| u.3.is_none())
            .map(|u| u.1)
            .collect();
        let mut fresh_h = heuristic.h_many(&fresh).into_iter();
        for (m, child, key, cached) in updates {
            let h = match cached {
                Some(h) => h,
                None => fresh_h.next().expect("one value per fresh child")?,
            };
            nodes.insert(
                key,
                NodeRecord {
                    state: child,
                    g: child_g,
                    h,
                    parent: Some((entry.key, m)),
                    closed: false,
                },
            );
            open.push(SearchNode::new(key, child_g, h));
        }
    }
    unreachable!("the cube graph is connected, so the solved state is always reached")
}
