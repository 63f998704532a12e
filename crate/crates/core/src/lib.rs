//! Coincidence statistics of polarization-entangled photon pairs versus
//! exhaustive classical strategy mixtures.
//!
//! The library has four layers:
//!
//! - [`quantum`]: Born-rule outcome and coincidence probabilities for
//!   two-photon polarization states, the closed-form coincidence kernels of
//!   the four Bell states and two standard mixtures, and the facts triple
//!   `(F1, F2, F3)` observed with three analyzer angles.
//! - [`strategies`]: the eight deterministic answer strategies available to a
//!   pair of non-communicating players, their four coincidence-equivalence
//!   classes, the analytic mixture-to-facts map, and the feasibility solver
//!   that decides whether a facts pair is classically attainable.
//! - [`sweep`]: exhaustive enumeration of the strategy-mixture simplex on a
//!   regular grid, mapping every mixture into facts space and locating a
//!   target relative to the classical region.
//! - [`montecarlo`]: seeded, reproducible run-by-run simulation of both the
//!   classical game and the quantum experiment, with per-offset tallies and
//!   standard errors.

pub mod error;
pub mod montecarlo;
pub mod quantum;
pub mod strategies;
pub mod sweep;

mod linalg;

pub use error::Error;

use std::fmt;

/// A binary detector/player response: the photon passes the analyzer or is
/// absorbed; the player presses `P` or `A`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Response {
    Pass,
    Absorb,
}

impl Response {
    /// The complementary response.
    pub fn flip(self) -> Self {
        match self {
            Response::Pass => Response::Absorb,
            Response::Absorb => Response::Pass,
        }
    }

    /// Single-letter code used in run logs.
    pub fn code(self) -> char {
        match self {
            Response::Pass => 'P',
            Response::Absorb => 'A',
        }
    }
}

impl fmt::Display for Response {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code())
    }
}
