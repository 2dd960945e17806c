use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{CubeState, Move, MoveSequence};

/// Applies `depth` seeded random quarter turns to the solved cube.
///
/// A move is never immediately followed by its own inverse; same-face
/// repeats are allowed. Returns the scrambled state and the moves used.
pub fn scramble(seed: u64, depth: usize) -> (CubeState, MoveSequence) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    scramble_with(&mut rng, depth)
}

pub(crate) fn scramble_with<R: Rng>(rng: &mut R, depth: usize) -> (CubeState, MoveSequence) {
    let mut moves = Vec::with_capacity(depth);
    let mut state = CubeState::solved();
    let mut prev: Option<Move> = None;
    for _ in 0..depth {
        let m = match prev {
            None => Move::ALL[rng.random_range(0..12)],
            Some(p) => {
                let banned = p.inverse().index();
                let mut i = rng.random_range(0..11);
                if i >= banned {
                    i += 1;
                }
                Move::ALL[i]
            }
        };
        state = state.apply_move(m);
        moves.push(m);
        prev = Some(m);
    }
    (state, MoveSequence(moves))
}
