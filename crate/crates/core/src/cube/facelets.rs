//! Sticker rendering of a piece-level state and the one-hot network input.
//!
//! Sticker positions run face by face in the order U, R, F, D, L, B, nine
//! per face in reading order (row-major as seen looking at that face), so
//! position `9 * face + 4` is a center.

use super::CubeState;

/// Sticker color, named after the face whose center carries it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Color {
    U,
    R,
    F,
    D,
    L,
    B,
}

impl Color {
    const BY_FACE: [Color; 6] = [Color::U, Color::R, Color::F, Color::D, Color::L, Color::B];
}

/// Color channel order inside each 6-wide one-hot block:
/// Front, Up, Left, Back, Down, Right.
pub const ONEHOT_COLOR_ORDER: [Color; 6] =
    [Color::F, Color::U, Color::L, Color::B, Color::D, Color::R];

/// 54 stickers x 6 colors.
pub const ONEHOT_LEN: usize = 54 * 6;

const fn pos(face: usize, n: usize) -> usize {
    face * 9 + n - 1
}

const UF: usize = 0;
const RF: usize = 1;
const FF: usize = 2;
const DF: usize = 3;
const LF: usize = 4;
const BF: usize = 5;

/// Sticker positions of each corner slot, U/D sticker first, then clockwise.
const CORNER_FACELETS: [[usize; 3]; 8] = [
    [pos(UF, 9), pos(RF, 1), pos(FF, 3)],
    [pos(UF, 7), pos(FF, 1), pos(LF, 3)],
    [pos(UF, 1), pos(LF, 1), pos(BF, 3)],
    [pos(UF, 3), pos(BF, 1), pos(RF, 3)],
    [pos(DF, 3), pos(FF, 9), pos(RF, 7)],
    [pos(DF, 1), pos(LF, 9), pos(FF, 7)],
    [pos(DF, 7), pos(BF, 9), pos(LF, 7)],
    [pos(DF, 9), pos(RF, 9), pos(BF, 7)],
];

const EDGE_FACELETS: [[usize; 2]; 12] = [
    [pos(UF, 6), pos(RF, 2)],
    [pos(UF, 8), pos(FF, 2)],
    [pos(UF, 4), pos(LF, 2)],
    [pos(UF, 2), pos(BF, 2)],
    [pos(DF, 6), pos(RF, 8)],
    [pos(DF, 2), pos(FF, 8)],
    [pos(DF, 4), pos(LF, 8)],
    [pos(DF, 8), pos(BF, 8)],
    [pos(FF, 6), pos(RF, 4)],
    [pos(FF, 4), pos(LF, 6)],
    [pos(BF, 6), pos(LF, 4)],
    [pos(BF, 4), pos(RF, 6)],
];

const CORNER_COLORS: [[Color; 3]; 8] = {
    use Color::*;
    [
        [U, R, F],
        [U, F, L],
        [U, L, B],
        [U, B, R],
        [D, F, R],
        [D, L, F],
        [D, B, L],
        [D, R, B],
    ]
};

const EDGE_COLORS: [[Color; 2]; 12] = {
    use Color::*;
    [
        [U, R],
        [U, F],
        [U, L],
        [U, B],
        [D, R],
        [D, F],
        [D, L],
        [D, B],
        [F, R],
        [F, L],
        [B, L],
        [B, R],
    ]
};

/// Renders the 54 sticker colors of `s`.
pub fn facelets(s: &CubeState) -> [Color; 54] {
    let mut out = [Color::U; 54];
    for (face, color) in Color::BY_FACE.iter().enumerate() {
        for n in 0..9 {
            out[face * 9 + n] = *color;
        }
    }
    for slot in 0..8 {
        let piece = s.corner_perm[slot] as usize;
        let ori = s.corner_ori[slot] as usize;
        for n in 0..3 {
            out[CORNER_FACELETS[slot][(n + ori) % 3]] = CORNER_COLORS[piece][n];
        }
    }
    for slot in 0..12 {
        let piece = s.edge_perm[slot] as usize;
        let ori = s.edge_ori[slot] as usize;
        for n in 0..2 {
            out[EDGE_FACELETS[slot][(n + ori) % 2]] = EDGE_COLORS[piece][n];
        }
    }
    out
}

fn channel(c: Color) -> usize {
    ONEHOT_COLOR_ORDER
        .iter()
        .position(|&x| x == c)
        .expect("every color has a channel")
}

/// One-hot sticker encoding: entry `6 * position + channel` is 1 where the
/// sticker at `position` has the color in [`ONEHOT_COLOR_ORDER`]`[channel]`.
pub fn encode_onehot(s: &CubeState) -> Vec<f64> {
    let mut out = vec![0.0; ONEHOT_LEN];
    for (p, &c) in facelets(s).iter().enumerate() {
        out[p * 6 + channel(c)] = 1.0;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::Move;

    fn mv(c: char) -> Move {
        Move::from_letter(c).unwrap()
    }

    #[test]
    fn solved_faces_are_uniform() {
        let f = facelets(&CubeState::solved());
        for (face, color) in Color::BY_FACE.iter().enumerate() {
            assert!(f[face * 9..face * 9 + 9].iter().all(|c| c == color));
        }
    }

    #[test]
    fn every_position_is_covered_once() {
        let mut hits = [0; 54];
        for c in CORNER_FACELETS.iter().flatten() {
            hits[*c] += 1;
        }
        for e in EDGE_FACELETS.iter().flatten() {
            hits[*e] += 1;
        }
        for face in 0..6 {
            hits[face * 9 + 4] += 1;
        }
        assert!(hits.iter().all(|&h| h == 1));
    }

    #[test]
    fn clockwise_u_brings_right_stickers_to_front() {
        let f = facelets(&CubeState::solved().apply_move(mv('U')));
        for n in 1..=3 {
            assert_eq!(f[pos(FF, n)], Color::R);
            assert_eq!(f[pos(LF, n)], Color::F);
        }
        assert_eq!(f[pos(FF, 4)], Color::F);
    }

    #[test]
    fn clockwise_r_brings_front_stickers_up() {
        let f = facelets(&CubeState::solved().apply_move(mv('R')));
        for n in [3, 6, 9] {
            assert_eq!(f[pos(UF, n)], Color::F);
        }
    }

    #[test]
    fn clockwise_f_brings_up_stickers_to_right() {
        let f = facelets(&CubeState::solved().apply_move(mv('F')));
        for n in [1, 4, 7] {
            assert_eq!(f[pos(RF, n)], Color::U);
        }
    }

    #[test]
    fn every_face_has_nine_of_each_color_after_moves() {
        let mut s = CubeState::solved();
        for m in "R U f B l D d F".chars().filter(|c| !c.is_whitespace()) {
            s = s.apply_move(mv(m));
            let f = facelets(&s);
            for color in Color::BY_FACE {
                assert_eq!(f.iter().filter(|&&c| c == color).count(), 9);
            }
        }
    }

    #[test]
    fn onehot_of_solved_has_home_blocks() {
        let x = encode_onehot(&CubeState::solved());
        assert_eq!(x.len(), ONEHOT_LEN);
        assert_eq!(x.iter().sum::<f64>(), 54.0);
        for (face, &color) in Color::BY_FACE.iter().enumerate() {
            for n in 0..9 {
                assert_eq!(x[(face * 9 + n) * 6 + channel(color)], 1.0);
            }
        }
    }

    #[test]
    fn one_quarter_turn_changes_twelve_stickers() {
        let a = encode_onehot(&CubeState::solved());
        let b = encode_onehot(&CubeState::solved().apply_move(mv('U')));
        let diff = a.iter().zip(&b).filter(|(x, y)| x != y).count();
        assert_eq!(diff, 24);
    }
}
