//! Piece-level mechanics of the 3x3x3 cube.
//!
//! A [`CubeState`] stores corner and edge permutations plus orientations.
//! The twelve quarter turns are applied through fixed cubie tables, and
//! every 12-vector in the crate is indexed in [`Move::ALL`] order
//! (`R r L l U u D d F f B b`).

mod facelets;
mod scramble;
mod tables;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub use facelets::{encode_onehot, facelets, Color, ONEHOT_COLOR_ORDER, ONEHOT_LEN};
pub use scramble::scramble;

use tables::MOVE_TABLES;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Face {
    R,
    L,
    U,
    D,
    F,
    B,
}

impl Face {
    pub const ALL: [Face; 6] = [Face::R, Face::L, Face::U, Face::D, Face::F, Face::B];

    pub fn letter(self) -> char {
        match self {
            Face::R => 'R',
            Face::L => 'L',
            Face::U => 'U',
            Face::D => 'D',
            Face::F => 'F',
            Face::B => 'B',
        }
    }

    /// Faces on the same axis commute.
    pub fn opposite(self) -> Face {
        match self {
            Face::R => Face::L,
            Face::L => Face::R,
            Face::U => Face::D,
            Face::D => Face::U,
            Face::F => Face::B,
            Face::B => Face::F,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    Clockwise,
    CounterClockwise,
}

/// One of the twelve quarter-turn actions.
///
/// Uppercase letters are clockwise turns, lowercase counter-clockwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Move {
    pub face: Face,
    pub direction: Direction,
}

impl Move {
    /// The fixed action order used for every 12-vector.
    pub const ALL: [Move; 12] = {
        let mut out = [Move::new(Face::R, Direction::Clockwise); 12];
        let mut i = 0;
        while i < 12 {
            out[i] = Move::from_index(i);
            i += 1;
        }
        out
    };

    pub const fn new(face: Face, direction: Direction) -> Self {
        Self { face, direction }
    }

    /// Position in [`Move::ALL`].
    pub const fn index(self) -> usize {
        let f = match self.face {
            Face::R => 0,
            Face::L => 1,
            Face::U => 2,
            Face::D => 3,
            Face::F => 4,
            Face::B => 5,
        };
        let d = match self.direction {
            Direction::Clockwise => 0,
            Direction::CounterClockwise => 1,
        };
        f * 2 + d
    }

    /// Panics if `i >= 12`.
    pub const fn from_index(i: usize) -> Self {
        let face = match i / 2 {
            0 => Face::R,
            1 => Face::L,
            2 => Face::U,
            3 => Face::D,
            4 => Face::F,
            5 => Face::B,
            _ => panic!("move index out of range"),
        };
        let direction = if i.is_multiple_of(2) {
            Direction::Clockwise
        } else {
            Direction::CounterClockwise
        };
        Self { face, direction }
    }

    pub const fn inverse(self) -> Self {
        let direction = match self.direction {
            Direction::Clockwise => Direction::CounterClockwise,
            Direction::CounterClockwise => Direction::Clockwise,
        };
        Self {
            face: self.face,
            direction,
        }
    }

    pub fn letter(self) -> char {
        let c = self.face.letter();
        match self.direction {
            Direction::Clockwise => c,
            Direction::CounterClockwise => c.to_ascii_lowercase(),
        }
    }

    pub fn from_letter(c: char) -> Option<Self> {
        let direction = if c.is_ascii_uppercase() {
            Direction::Clockwise
        } else {
            Direction::CounterClockwise
        };
        let face = match c.to_ascii_uppercase() {
            'R' => Face::R,
            'L' => Face::L,
            'U' => Face::U,
            'D' => Face::D,
            'F' => Face::F,
            'B' => Face::B,
            _ => return None,
        };
        Some(Self { face, direction })
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseMoveError {
    #[error("unknown move token {0:?} (expected one of R r L l U u D d F f B b)")]
    UnknownToken(String),
}

impl FromStr for Move {
    type Err = ParseMoveError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut chars = s.chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) => {
                Move::from_letter(c).ok_or_else(|| ParseMoveError::UnknownToken(s.to_string()))
            }
            _ => Err(ParseMoveError::UnknownToken(s.to_string())),
        }
    }
}

/// An ordered list of moves, written as whitespace-separated letters.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct MoveSequence(pub Vec<Move>);

impl MoveSequence {
    pub fn new() -> Self {
        Self(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn moves(&self) -> &[Move] {
        &self.0
    }

    /// Reversed and inverted: undoes `self`.
    pub fn inverse(&self) -> Self {
        Self(self.0.iter().rev().map(|m| m.inverse()).collect())
    }

    pub fn apply_to(&self, state: &CubeState) -> CubeState {
        self.0.iter().fold(*state, |s, &m| s.apply_move(m))
    }
}

impl fmt::Display for MoveSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, m) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

impl FromStr for MoveSequence {
    type Err = ParseMoveError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.split_whitespace()
            .map(str::parse)
            .collect::<Result<Vec<_>, _>>()
            .map(Self)
    }
}

impl From<Vec<Move>> for MoveSequence {
    fn from(v: Vec<Move>) -> Self {
        Self(v)
    }
}

/// Number of bytes in a [`StateKey`] byte string.
pub const KEY_BYTES: usize = 13;

/// Fixed-width packed identity of a cube state.
///
/// Bit layout from the most significant end of a 100-bit field:
/// corner_perm (8 x 3 bits), corner_ori (8 x 2), edge_perm (12 x 4),
/// edge_ori (12 x 1). Serialized big-endian into [`KEY_BYTES`] bytes, so
/// byte order and numeric order agree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateKey(u128);

impl StateKey {
    pub fn to_bytes(self) -> [u8; KEY_BYTES] {
        let full = self.0.to_be_bytes();
        let mut out = [0u8; KEY_BYTES];
        out.copy_from_slice(&full[16 - KEY_BYTES..]);
        out
    }

    pub fn from_bytes(bytes: [u8; KEY_BYTES]) -> Self {
        let mut full = [0u8; 16];
        full[16 - KEY_BYTES..].copy_from_slice(&bytes);
        Self(u128::from_be_bytes(full))
    }

    pub fn to_hex(self) -> String {
        hex::encode(self.to_bytes())
    }

    pub fn from_hex(s: &str) -> Result<Self, KeyError> {
        let raw = hex::decode(s.trim()).map_err(|e| KeyError::Hex(e.to_string()))?;
        let bytes: [u8; KEY_BYTES] = raw
            .try_into()
            .map_err(|v: Vec<u8>| KeyError::Length(v.len()))?;
        Ok(Self::from_bytes(bytes))
    }

    pub fn as_u128(self) -> u128 {
        self.0
    }

    /// Unpacks the fields. The result is not validated.
    pub fn to_state(self) -> CubeState {
        let mut bits = self.0;
        let mut s = CubeState::SOLVED;
        for i in (0..12).rev() {
            s.edge_ori[i] = (bits & 1) as u8;
            bits >>= 1;
        }
        for i in (0..12).rev() {
            s.edge_perm[i] = (bits & 0xf) as u8;
            bits >>= 4;
        }
        for i in (0..8).rev() {
            s.corner_ori[i] = (bits & 0x3) as u8;
            bits >>= 2;
        }
        for i in (0..8).rev() {
            s.corner_perm[i] = (bits & 0x7) as u8;
            bits >>= 3;
        }
        s
    }
}

impl fmt::Display for StateKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum KeyError {
    #[error("invalid hex in state key: {0}")]
    Hex(String),
    #[error("state key must be {KEY_BYTES} bytes, got {0}")]
    Length(usize),
    #[error("state key decodes to an invalid cube: {0}")]
    Invalid(Violation),
}

/// The first invariant a [`CubeState`] fails.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("corner permutation")]
    CornerPermutation,
    #[error("edge permutation")]
    EdgePermutation,
    #[error("corner orientation value")]
    CornerOrientationValue,
    #[error("edge orientation value")]
    EdgeOrientationValue,
    #[error("corner orientation sum")]
    CornerOrientationSum,
    #[error("edge orientation sum")]
    EdgeOrientationSum,
    #[error("parity mismatch")]
    ParityMismatch,
}

/// Piece-based cube configuration.
///
/// `corner_perm[i]` is the corner piece sitting in slot `i` and
/// `corner_ori[i]` its twist; edges likewise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CubeState {
    pub corner_perm: [u8; 8],
    pub corner_ori: [u8; 8],
    pub edge_perm: [u8; 12],
    pub edge_ori: [u8; 12],
}

impl Default for CubeState {
    fn default() -> Self {
        Self::SOLVED
    }
}

impl CubeState {
    pub const SOLVED: Self = Self {
        corner_perm: [0, 1, 2, 3, 4, 5, 6, 7],
        corner_ori: [0; 8],
        edge_perm: [0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11],
        edge_ori: [0; 12],
    };

    pub fn solved() -> Self {
        Self::SOLVED
    }

    pub fn is_solved(&self) -> bool {
        *self == Self::SOLVED
    }

    #[must_use]
    pub fn apply_move(&self, m: Move) -> Self {
        let t = &MOVE_TABLES[m.index()];
        let mut out = *self;
        for i in 0..8 {
            let src = t.cp[i] as usize;
            out.corner_perm[i] = self.corner_perm[src];
            out.corner_ori[i] = (self.corner_ori[src] + t.co[i]) % 3;
        }
        for i in 0..12 {
            let src = t.ep[i] as usize;
            out.edge_perm[i] = self.edge_perm[src];
            out.edge_ori[i] = (self.edge_ori[src] + t.eo[i]) % 2;
        }
        out
    }

    pub fn apply_moves<'a>(&self, moves: impl IntoIterator<Item = &'a Move>) -> Self {
        moves.into_iter().fold(*self, |s, &m| s.apply_move(m))
    }

    /// All twelve successors, in [`Move::ALL`] order.
    pub fn neighbors(&self) -> [(Move, CubeState); 12] {
        Move::ALL.map(|m| (m, self.apply_move(m)))
    }

    pub fn canonical_key(&self) -> StateKey {
        let mut bits: u128 = 0;
        for &p in &self.corner_perm {
            bits = (bits << 3) | u128::from(p & 0x7);
        }
        for &o in &self.corner_ori {
            bits = (bits << 2) | u128::from(o & 0x3);
        }
        for &p in &self.edge_perm {
            bits = (bits << 4) | u128::from(p & 0xf);
        }
        for &o in &self.edge_ori {
            bits = (bits << 1) | u128::from(o & 0x1);
        }
        StateKey(bits)
    }

    /// Decodes and validates a key produced by [`CubeState::canonical_key`].
    pub fn from_key(key: StateKey) -> Result<Self, KeyError> {
        let s = key.to_state();
        s.validate().map_err(KeyError::Invalid)?;
        // reject keys with stray high bits
        if s.canonical_key() != key {
            return Err(KeyError::Invalid(Violation::CornerPermutation));
        }
        Ok(s)
    }

    pub fn validate(&self) -> Result<(), Violation> {
        let corner_parity =
            permutation_parity(&self.corner_perm).ok_or(Violation::CornerPermutation)?;
        let edge_parity = permutation_parity(&self.edge_perm).ok_or(Violation::EdgePermutation)?;
        if self.corner_ori.iter().any(|&o| o > 2) {
            return Err(Violation::CornerOrientationValue);
        }
        if self.edge_ori.iter().any(|&o| o > 1) {
            return Err(Violation::EdgeOrientationValue);
        }
        if self.corner_ori.iter().map(|&o| u32::from(o)).sum::<u32>() % 3 != 0 {
            return Err(Violation::CornerOrientationSum);
        }
        if self.edge_ori.iter().map(|&o| u32::from(o)).sum::<u32>() % 2 != 0 {
            return Err(Violation::EdgeOrientationSum);
        }
        if corner_parity != edge_parity {
            return Err(Violation::ParityMismatch);
        }
        Ok(())
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }
}

/// `Some(true)` for odd permutations, `None` if `perm` is not a bijection
/// on `0..perm.len()`.
fn permutation_parity(perm: &[u8]) -> Option<bool> {
    let n = perm.len();
    let mut seen = [false; 16];
    for &p in perm {
        let p = p as usize;
        if p >= n || seen[p] {
            return None;
        }
        seen[p] = true;
    }
    let mut visited = [false; 16];
    let mut transpositions = 0;
    for start in 0..n {
        if visited[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !visited[i] {
            visited[i] = true;
            i = perm[i] as usize;
            len += 1;
        }
        transpositions += len - 1;
    }
    Some(transpositions % 2 == 1)
}

/// Number of reachable cube states:
/// `(8! * 3^8 / 3) * (12! * 2^12 / 2) / 2`, in exact integer arithmetic.
pub fn state_space_size() -> u128 {
    corner_arrangements() * edge_arrangements() / 2
}

/// `8! * 3^7`.
pub fn corner_arrangements() -> u128 {
    factorial(8) * 3u128.pow(8) / 3
}

/// `12! * 2^11`.
pub fn edge_arrangements() -> u128 {
    factorial(12) * 2u128.pow(12) / 2
}

fn factorial(n: u32) -> u128 {
    (1..=u128::from(n)).product()
}
