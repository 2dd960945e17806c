//! Weighted convolutional distance.
//!
//! ```text
//! d0(s)     = f_d(s)
//! dj+1(s)   = mu * dj(s) + (1 - mu) * sum_A p_A(s) * dj(s_A)
//! ```
//!
//! Layer `k` at the query state only needs layer `j` at states within
//! `k - j` moves of it, so the radius-`k` ball is expanded once (deduplicated
//! by key) and each layer is evaluated on a shrinking prefix of the
//! breadth-first node list. Nothing outside the ball is ever evaluated.

use std::collections::HashMap;

use rayon::prelude::*;
use thiserror::Error;

use crate::cube::{CubeState, Move, StateKey};
use crate::heuristic::{DistanceEvaluator, EvalError, PolicyEvaluator, ProbVector12};

/// Ball size used when no budget is configured. Radius 4 holds 11,206
/// states around any center.
pub const DEFAULT_BALL_BUDGET: usize = 1_000_000;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum WcdError {
    #[error("mu must lie strictly between 0 and 1, got {0}")]
    InvalidMu(f64),
    #[error("neighborhood ball exceeds the budget of {limit} states at radius {radius}")]
    BudgetExceeded { limit: usize, radius: usize },
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Mixing weight `mu` in (0, 1) and layer count `k`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WcdParams {
    mu: f64,
    k: usize,
}

impl WcdParams {
    pub fn new(mu: f64, k: usize) -> Result<Self, WcdError> {
        if !(mu > 0.0 && mu < 1.0) {
            return Err(WcdError::InvalidMu(mu));
        }
        Ok(Self { mu, k })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn k(&self) -> usize {
        self.k
    }
}

#[derive(Clone, Debug)]
struct BallNode {
    state: CubeState,
    key: StateKey,
    depth: usize,
    /// Indices of the twelve successors in `Move::ALL` order; present for
    /// every node strictly inside the ball.
    neighbors: Option<[usize; 12]>,
}

/// The deduplicated radius-`r` ball around a center, in breadth-first
/// order, with memoized layer values once evaluated.
#[derive(Clone, Debug)]
pub struct NeighborhoodCache {
    nodes: Vec<BallNode>,
    index: HashMap<StateKey, usize>,
    radius: usize,
    /// `depth_ends[r]` = number of nodes at depth <= r.
    depth_ends: Vec<usize>,
    /// `layers[j][i]` = d^(j) of node `i`, for `i < depth_ends[radius - j]`.
    layers: Vec<Vec<f64>>,
}

/// Breadth-first expansion of every state within `radius` moves of `s`.
pub fn expand_ball(s: &CubeState, radius: usize) -> Result<NeighborhoodCache, WcdError> {
    expand_ball_with_budget(s, radius, DEFAULT_BALL_BUDGET)
}

pub fn expand_ball_with_budget(
    s: &CubeState,
    radius: usize,
    budget: usize,
) -> Result<NeighborhoodCache, WcdError> {
    if budget == 0 {
        return Err(WcdError::BudgetExceeded {
            limit: budget,
            radius: 0,
        });
    }
    let key = s.canonical_key();
    let mut nodes = vec![BallNode {
        state: *s,
        key,
        depth: 0,
        neighbors: None,
    }];
    let mut index = HashMap::from([(key, 0usize)]);
    let mut depth_ends = vec![1];
    let mut start = 0;
    for depth in 1..=radius {
        let end = nodes.len();
        for i in start..end {
            let mut nbrs = [0usize; 12];
            for (slot, m) in nbrs.iter_mut().zip(Move::ALL) {
                let n = nodes[i].state.apply_move(m);
                let nk = n.canonical_key();
                *slot = match index.get(&nk) {
                    Some(&j) => j,
                    None => {
                        let j = nodes.len();
                        if j >= budget {
                            return Err(WcdError::BudgetExceeded {
                                limit: budget,
                                radius: depth,
                            });
                        }
                        nodes.push(BallNode {
                            state: n,
                            key: nk,
                            depth,
                            neighbors: None,
                        });
                        index.insert(nk, j);
                        j
                    }
                };
            }
            nodes[i].neighbors = Some(nbrs);
        }
        depth_ends.push(nodes.len());
        start = end;
    }
    Ok(NeighborhoodCache {
        nodes,
        index,
        radius,
        depth_ends,
        layers: Vec::new(),
    })
}

impl NeighborhoodCache {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn center(&self) -> &CubeState {
        &self.nodes[0].state
    }

    pub fn contains(&self, key: StateKey) -> bool {
        self.index.contains_key(&key)
    }

    pub fn keys(&self) -> impl Iterator<Item = StateKey> + '_ {
        self.nodes.iter().map(|n| n.key)
    }

    pub fn states(&self) -> impl Iterator<Item = &CubeState> + '_ {
        self.nodes.iter().map(|n| &n.state)
    }

    /// Graph distance from the center, if `key` is in the ball.
    pub fn depth_of(&self, key: StateKey) -> Option<usize> {
        self.index.get(&key).map(|&i| self.nodes[i].depth)
    }

    /// Keys of the twelve successors of an interior state.
    pub fn neighbor_keys(&self, key: StateKey) -> Option<[StateKey; 12]> {
        let i = *self.index.get(&key)?;
        self.nodes[i]
            .neighbors
            .map(|n| n.map(|j| self.nodes[j].key))
    }

    /// Memoized `d^(layer)` for `key`, available after [`Self::evaluate`]
    /// for states within `radius - layer` of the center.
    pub fn value(&self, key: StateKey, layer: usize) -> Option<f64> {
        let i = *self.index.get(&key)?;
        self.layers.get(layer).and_then(|l| l.get(i)).copied()
    }

    /// Fills every layer `0..=radius` and returns `d^(radius)` at the center.
    pub fn evaluate(
        &mut self,
        mu: f64,
        f_d: &dyn DistanceEvaluator,
        f_p: &dyn PolicyEvaluator,
    ) -> Result<f64, WcdError> {
        let k = self.radius;
        let base: Vec<f64> = self
            .nodes
            .iter()
            .map(|n| f_d.distance(&n.state))
            .collect::<Result<_, _>>()?;
        let interior = if k == 0 { 0 } else { self.depth_ends[k - 1] };
        let policies: Vec<ProbVector12> = self.nodes[..interior]
            .iter()
            .map(|n| f_p.policy(&n.state))
            .collect::<Result<_, _>>()?;

        let mut layers = Vec::with_capacity(k + 1);
        layers.push(base);
        for j in 1..=k {
            let prev = &layers[j - 1];
            let n = self.depth_ends[k - j];
            let mut cur = Vec::with_capacity(n);
            for i in 0..n {
                let nbrs = self.nodes[i].neighbors.expect("interior node");
                let p = policies[i].as_array();
                let mut acc = 0.0;
                for a in 0..12 {
                    acc += p[a] * prev[nbrs[a]];
                }
                cur.push(mu * prev[i] + (1.0 - mu) * acc);
            }
            layers.push(cur);
        }
        let top = layers[k][0];
        self.layers = layers;
        Ok(top)
    }
}

/// `d^(k)(s)` under `params`.
pub fn wcd(
    s: &CubeState,
    params: WcdParams,
    f_d: &dyn DistanceEvaluator,
    f_p: &dyn PolicyEvaluator,
) -> Result<f64, WcdError> {
    if params.k == 0 {
        return Ok(f_d.distance(s)?);
    }
    let mut ball = expand_ball(s, params.k)?;
    ball.evaluate(params.mu, f_d, f_p)
}

/// [`wcd`] for each input, evaluated in parallel; element `i` is
/// bit-identical to `wcd(&states[i], ..)`.
pub fn wcd_batch(
    states: &[CubeState],
    params: WcdParams,
    f_d: &dyn DistanceEvaluator,
    f_p: &dyn PolicyEvaluator,
) -> Vec<Result<f64, WcdError>> {
    states
        .par_iter()
        .map(|s| wcd(s, params, f_d, f_p))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::scramble;
    use crate::heuristic::{BoltzmannPolicy, DistanceTable, TableDistance, UniformPolicy};
    use std::sync::Arc;

    struct Constant(f64);
    impl DistanceEvaluator for Constant {
        fn distance(&self, _s: &CubeState) -> Result<f64, EvalError> {
            Ok(self.0)
        }
    }

    /// 0 at solved, 1 everywhere else.
    struct SolvedIsZero;
    impl DistanceEvaluator for SolvedIsZero {
        fn distance(&self, s: &CubeState) -> Result<f64, EvalError> {
            Ok(if s.is_solved() { 0.0 } else { 1.0 })
        }
    }

    /// Plain 12^k recursion, no sharing.
    fn naive(
        s: &CubeState,
        k: usize,
        mu: f64,
        f_d: &dyn DistanceEvaluator,
        f_p: &dyn PolicyEvaluator,
    ) -> f64 {
        if k == 0 {
            return f_d.distance(s).unwrap();
        }
        let p = f_p.policy(s).unwrap();
        let mut acc = 0.0;
        for (a, m) in Move::ALL.iter().enumerate() {
            acc += p.as_array()[a] * naive(&s.apply_move(*m), k - 1, mu, f_d, f_p);
        }
        mu * naive(s, k - 1, mu, f_d, f_p) + (1.0 - mu) * acc
    }

    fn exact(depth: u8) -> Arc<TableDistance> {
        Arc::new(TableDistance::new(Arc::new(
            DistanceTable::build(depth).unwrap(),
        )))
    }

    #[test]
    fn params_validate_mu() {
        assert!(WcdParams::new(0.0, 1).is_err());
        assert!(WcdParams::new(1.0, 1).is_err());
        assert!(WcdParams::new(f64::NAN, 1).is_err());
        assert!(WcdParams::new(0.5, 0).is_ok());
    }

    #[test]
    fn ball_sizes_around_solved() {
        let s = CubeState::solved();
        let b0 = expand_ball(&s, 0).unwrap();
        assert_eq!(b0.len(), 1);
        assert!(b0.contains(s.canonical_key()));
        assert_eq!(expand_ball(&s, 1).unwrap().len(), 13);
        assert_eq!(expand_ball(&s, 2).unwrap().len(), 127);
        assert_eq!(expand_ball(&s, 3).unwrap().len(), 1195);
    }

    #[test]
    fn ball_budget() {
        let s = CubeState::solved();
        assert!(matches!(
            expand_ball_with_budget(&s, 2, 100),
            Err(WcdError::BudgetExceeded {
                limit: 100,
                radius: 2
            })
        ));
        assert!(expand_ball_with_budget(&s, 2, 127).is_ok());
    }

    #[test]
    fn ball_neighbor_links_are_consistent() {
        let (s, _) = scramble(3, 4);
        let b = expand_ball(&s, 2).unwrap();
        for key in b.keys() {
            let st = CubeState::from_key(key).unwrap();
            match b.neighbor_keys(key) {
                Some(nk) => {
                    assert!(b.depth_of(key).unwrap() < 2);
                    for ((_, n), k) in st.neighbors().iter().zip(nk) {
                        assert_eq!(n.canonical_key(), k);
                    }
                }
                None => assert_eq!(b.depth_of(key), Some(2)),
            }
        }
    }

    #[test]
    fn k_zero_is_base_distance() {
        let f = exact(3);
        for mu in [0.1, 0.5, 0.9] {
            let p = WcdParams::new(mu, 0).unwrap();
            for seed in 0..20 {
                let (s, _) = scramble(seed, 3);
                assert_eq!(
                    wcd(&s, p, f.as_ref(), &UniformPolicy).unwrap(),
                    f.distance(&s).unwrap()
                );
            }
        }
    }

    #[test]
    fn constant_distance_is_a_fixed_point() {
        let (s, _) = scramble(1, 5);
        for k in 0..=3 {
            for mu in [0.2, 0.5, 0.8] {
                let v = wcd(
                    &s,
                    WcdParams::new(mu, k).unwrap(),
                    &Constant(4.5),
                    &UniformPolicy,
                )
                .unwrap();
                assert!((v - 4.5).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn one_layer_direct_substitution() {
        let v = wcd(
            &CubeState::solved(),
            WcdParams::new(0.5, 1).unwrap(),
            &SolvedIsZero,
            &UniformPolicy,
        )
        .unwrap();
        assert!((v - 0.5).abs() <= 1e-15);
    }

    #[test]
    fn uniform_policy_is_plain_neighbor_average() {
        let f = exact(4);
        let (s, _) = scramble(8, 3);
        let mu = 0.3;
        let v = wcd(
            &s,
            WcdParams::new(mu, 1).unwrap(),
            f.as_ref(),
            &UniformPolicy,
        )
        .unwrap();
        let avg: f64 = s
            .neighbors()
            .iter()
            .map(|(_, n)| f.distance(n).unwrap())
            .sum::<f64>()
            / 12.0;
        assert!((v - (mu * f.distance(&s).unwrap() + (1.0 - mu) * avg)).abs() <= 1e-12);
    }

    #[test]
    fn memoized_matches_naive_recursion() {
        let f = exact(4);
        let boltz = BoltzmannPolicy::new(f.clone(), 0.5).unwrap();
        let r = CubeState::solved().apply_move(Move::ALL[0]);
        for k in 0..=2 {
            for policy in [&UniformPolicy as &dyn PolicyEvaluator, &boltz] {
                let p = WcdParams::new(0.5, k).unwrap();
                let fast = wcd(&r, p, f.as_ref(), policy).unwrap();
                let slow = naive(&r, k, 0.5, f.as_ref(), policy);
                assert!((fast - slow).abs() <= 1e-12, "k={k}: {fast} vs {slow}");
            }
        }
    }

    #[test]
    fn memo_exposes_intermediate_layers() {
        let f = exact(4);
        let s = CubeState::solved().apply_move(Move::ALL[4]);
        let mut b = expand_ball(&s, 2).unwrap();
        let top = b.evaluate(0.5, f.as_ref(), &UniformPolicy).unwrap();
        let key = s.canonical_key();
        assert_eq!(b.value(key, 2), Some(top));
        assert_eq!(b.value(key, 0), Some(1.0));
        let nk = b.neighbor_keys(key).unwrap();
        let n0 = CubeState::from_key(nk[0]).unwrap();
        let expected = naive(&n0, 1, 0.5, f.as_ref(), &UniformPolicy);
        assert!((b.value(nk[0], 1).unwrap() - expected).abs() <= 1e-12);
        // boundary states only carry layer 0
        let far = b.keys().find(|k| b.depth_of(*k) == Some(2)).unwrap();
        assert!(b.value(far, 1).is_none());
    }

    #[test]
    fn batch_matches_scalar_bitwise() {
        let f = exact(5);
        let pol = BoltzmannPolicy::new(f.clone(), 0.5).unwrap();
        let p = WcdParams::new(0.5, 2).unwrap();
        let states: Vec<CubeState> = CubeState::solved()
            .neighbors()
            .iter()
            .map(|(_, n)| *n)
            .collect();
        let batch = wcd_batch(&states, p, f.as_ref(), &pol);
        assert_eq!(batch.len(), 12);
        for (s, b) in states.iter().zip(&batch) {
            assert_eq!(
                b.as_ref().unwrap().to_bits(),
                wcd(s, p, f.as_ref(), &pol).unwrap().to_bits()
            );
        }
        let mut rev = states.clone();
        rev.reverse();
        let rb = wcd_batch(&rev, p, f.as_ref(), &pol);
        for (a, b) in batch.iter().zip(rb.iter().rev()) {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn batch_errors_are_per_element() {
        let strict = TableDistance::strict(Arc::new(DistanceTable::build(2).unwrap()));
        let p = WcdParams::new(0.5, 1).unwrap();
        let near = CubeState::solved().apply_move(Move::ALL[0]);
        let (far, _) = scramble(4, 8);
        let out = wcd_batch(&[near, far], p, &strict, &UniformPolicy);
        assert!(out[0].is_ok());
        assert!(matches!(
            out[1],
            Err(WcdError::Eval(EvalError::OutOfRange { max_depth: 2 }))
        ));
    }
}
