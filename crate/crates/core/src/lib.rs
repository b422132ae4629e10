//! Evaluators and certifiers for the two-copy discriminability game.
//!
//! - [`qubit`]: Bloch/density algebra, qubit fidelity and Helstrom guessing.
//! - [`game`]: Gram-type state, SWAP pass statistics and the game score.
//! - [`ontic`]: the two-state preparation-noncontextual model and its bound.
//! - [`bell`]: conditional preparations, separation parameters and CHSH.
//! - [`sampling`] and [`optimize`]: seeded Monte Carlo and 1-D search helpers.

#[cfg(test)]
macro_rules! assert_close {
    ($a:expr, $b:expr, $tol:expr) => {{
        let (a, b): (f64, f64) = ($a, $b);
        assert!((a - b).abs() <= $tol, "{a} vs {b} (tol {:e})", $tol);
    }};
}

pub mod bell;
pub mod error;
pub mod game;
pub mod ontic;
pub mod optimize;
pub mod qubit;
pub mod sampling;

pub use error::{Error, Result};
pub use game::{GameStats, Labeling, StatsMode, TwoStateEnsemble};
pub use ontic::{OnticModel2, ResponseMatrix, SharpModelConfig};
pub use qubit::{Complex2x2, QubitState};
