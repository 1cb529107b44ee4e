//! Randomized graph states.
//!
//! A randomized graph state is the mixture of all spanning-subgraph states of
//! a graph `G`, each subgraph `F` weighted by `p^|E_F| (1-p)^|E_G \ E_F|`. It is
//! the state produced when every controlled-Z gate of a graph-state
//! preparation succeeds independently with probability `p`.
//!
//! The crate is organised bottom-up:
//!
//! - [`graph`]: graphs, family generators, edge masks, class counts, vertex cover.
//! - [`state`]: pure graph states in sign representation and their overlaps.
//! - [`density`]: dense randomized density matrices, partial transpose,
//!   negativity, numerical rank and the subgraph-state-space dimension.
//! - [`witness`]: randomization overlap (exact, closed form, truncated), the
//!   projector GME witness and bisection thresholds.
//! - [`lhv`]: stabilizer elements, the graph Bell operator, the classical
//!   bound `D(G)` and nonlocality thresholds.
//! - [`sampler`]: seeded Monte Carlo of the probabilistic CZ preparation.
//! - [`cli`]: the `rgstate` command line front end.


pub mod cli;
pub mod density;
pub mod error;
pub mod graph;
pub mod lhv;
pub mod sampler;
pub mod state;
pub mod witness;

pub use error::{Error, Result};
pub use graph::{ClassCounts, EdgeMask, Family, Graph};

pub(crate) fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::ProbabilityOutOfRange(p))
    }
}

/// Rounds to `digits` significant decimal digits.
pub fn round_significant(x: f64, digits: usize) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{:.*e}", digits.saturating_sub(1), x)
        .parse()
        .unwrap_or(x)
}
