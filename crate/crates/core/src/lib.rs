//! Rubik's Cube solving with A* search over the weighted convolutional
//! distance (WCD) heuristic.

pub mod bench;
pub mod cli;
pub mod cube;
pub mod heuristic;
pub mod solver;
pub mod wcd;
