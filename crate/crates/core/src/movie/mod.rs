//! Chain maps induced by movies of link diagrams.

mod cancel;
mod counterexample;
mod file;
mod map;
mod morse;
mod r2;

#[cfg(test)]
mod tests;

use thiserror::Error;

use crate::complex::ComplexError;
use crate::diagram::DiagramError;
use crate::homology::HomologyError;
use crate::poly::Poly;

pub use cancel::{gaussian_cancel, Contraction, Reduction};
pub use counterexample::{
    random_r2_dance, report_for, run_counterexample, run_counterexample_at, sliding_movie, sphere_movie,
    star_events, star_sequence, CounterexampleReport, Placement,
};
pub use file::{induced_chain_map, induced_self_map, DiagramSource, Event, Movie, Replay};
pub use map::{BlockDump, ChainMap, ChainMapDump, Homotopy};
pub use morse::{isotopy_map, isotopy_map_with, morse_map, r2_down_map, r2_up_map};
pub use r2::{bigon_dart, r2_equivalence, R2Equivalence};

#[derive(Debug, Error)]
pub enum MovieError {
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Homology(#[from] HomologyError),
    #[error("component {from} -> {to} at level {level} is {coeff}, not a unit")]
    NotUnit { level: i32, from: usize, to: usize, coeff: Poly },
    #[error("inconsistent chain data: {0}")]
    Inconsistent(String),
    #[error("final diagram is not isotopic to the initial one")]
    NotIsotopic,
    #[error("malformed movie: {0}")]
    Parse(String),
    #[error("endpoint complex has a nonzero differential, so chains are not homology")]
    NonZeroDifferential,
}
