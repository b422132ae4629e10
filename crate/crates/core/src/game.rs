//! The two-copy discriminability game.
//!
//! For a two-state pure ensemble `{(η₁,|ψ⟩),(η₂,|φ⟩)}` the game compares a
//! copy of the Gram-type state `ρ_T` with either a relabeled prior state
//! `η_p` (mixed experiment) or a second copy of `ρ_T` (purity experiment)
//! using the SWAP test. The score
//!
//! ```text
//! D_op = max_p [(2 p_mix^(p) − 1) + 2 √(η₁ η₂ (1 − p_pur))]
//! ```
//!
//! reproduces `max_p F(ρ_T, η_p)` for qubits, and that in turn equals the
//! closed form evaluated by [`d_closed_form`].

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::qubit::{check_priors, Complex2x2, STATE_TOL};
use crate::sampling::{bernoulli_frequency, stream_rng, Frequency};

/// Two pure states with priors, described by their overlap `γ₁₂ = ⟨ψ|φ⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoStateEnsemble {
    eta1: f64,
    eta2: f64,
    gamma12: Complex64,
}

impl TwoStateEnsemble {
    pub fn new(eta1: f64, eta2: f64, gamma12: Complex64) -> Result<Self> {
        check_priors(eta1, eta2)?;
        let g = gamma12.norm();
        if !g.is_finite() || g > 1.0 + STATE_TOL {
            return Err(Error::InvalidArgument {
                name: "gamma12",
                value: g,
                reason: "overlap modulus exceeds 1",
            });
        }
        Ok(Self { eta1, eta2, gamma12 })
    }

    /// Priors `(η₁, 1−η₁)` and a real non-negative overlap with `|γ₁₂|² = gamma_sq`.
    pub fn from_overlap_sq(eta1: f64, gamma_sq: f64) -> Result<Self> {
        let g = checked_overlap_sq(gamma_sq)?;
        Self::new(eta1, 1.0 - eta1, Complex64::new(g.sqrt(), 0.0))
    }

    pub fn eta1(&self) -> f64 {
        self.eta1
    }

    pub fn eta2(&self) -> f64 {
        self.eta2
    }

    pub fn gamma12(&self) -> Complex64 {
        self.gamma12
    }

    pub fn overlap_sq(&self) -> f64 {
        self.gamma12.norm_sqr().min(1.0)
    }

    pub fn eta_min(&self) -> f64 {
        self.eta1.min(self.eta2)
    }
}

/// Permutation of the two prior outcomes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Labeling {
    Identity,
    Swap,
}

impl Labeling {
    pub const ALL: [Labeling; 2] = [Labeling::Identity, Labeling::Swap];

    pub fn name(self) -> &'static str {
        match self {
            Labeling::Identity => "identity",
            Labeling::Swap => "swap",
        }
    }
}

/// Half-widths of the three 3σ intervals of an empirical run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Halfwidths {
    pub mix_id: f64,
    pub mix_swap: f64,
    pub pur: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StatsMode {
    Exact,
    Empirical { n_samples: u64, ci: Halfwidths },
}

/// Pass probabilities of the game, exact or estimated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GameStats {
    pub p_mix_id: f64,
    pub p_mix_swap: f64,
    pub p_pur: f64,
    pub mode: StatsMode,
}

impl GameStats {
    pub fn p_mix(&self, labeling: Labeling) -> f64 {
        match labeling {
            Labeling::Identity => self.p_mix_id,
            Labeling::Swap => self.p_mix_swap,
        }
    }
}

/// Gram-type state of the ensemble.
///
/// The first basis vector is the state carrying the larger prior; when
/// `η₁ ≥ η₂` this is `|ψ⟩` and the matrix is
///
/// ```text
/// [ η₁ + η₂|γ|²          η₂ γ √(1−|γ|²) ]
/// [ η₂ γ* √(1−|γ|²)      η₂ (1−|γ|²)    ]
/// ```
///
/// For `η₁ < η₂` the roles are exchanged (priors swapped, `γ ↦ γ*`), which
/// keeps `max_p F(ρ_T, η_p)` invariant under reordering the ensemble.
pub fn gram_state(ens: &TwoStateEnsemble) -> Complex2x2 {
    let (major, minor, gamma) = if ens.eta1 >= ens.eta2 {
        (ens.eta1, ens.eta2, ens.gamma12)
    } else {
        (ens.eta2, ens.eta1, ens.gamma12.conj())
    };
    let g = ens.overlap_sq();
    let tail = (1.0 - g).max(0.0).sqrt();
    let off = gamma * (minor * tail);
    Complex2x2::new(
        Complex64::from(major + minor * g),
        off,
        off.conj(),
        Complex64::from(minor * (1.0 - g)),
    )
}

/// Diagonal prior state `η_p`.
pub fn prior_state(ens: &TwoStateEnsemble, labeling: Labeling) -> Complex2x2 {
    match labeling {
        Labeling::Identity => Complex2x2::diag(ens.eta1, ens.eta2),
        Labeling::Swap => Complex2x2::diag(ens.eta2, ens.eta1),
    }
}

/// SWAP-test pass probability `(1 + Tr ρσ)/2` for density matrices.
pub fn swap_pass_prob(rho: &Complex2x2, sigma: &Complex2x2) -> f64 {
    0.5 * (1.0 + rho.trace_product(sigma).re)
}

pub fn game_stats_exact(ens: &TwoStateEnsemble) -> GameStats {
    let rho_t = gram_state(ens);
    GameStats {
        p_mix_id: swap_pass_prob(&rho_t, &prior_state(ens, Labeling::Identity)),
        p_mix_swap: swap_pass_prob(&rho_t, &prior_state(ens, Labeling::Swap)),
        p_pur: swap_pass_prob(&rho_t, &rho_t),
        mode: StatsMode::Exact,
    }
}

/// Simulates `n` runs of each experiment from stream 0 of `seed`.
pub fn game_stats_sampled(ens: &TwoStateEnsemble, n: u64, seed: u64) -> Result<GameStats> {
    game_stats_sampled_with(ens, n, &mut stream_rng(seed, 0))
}

/// Simulates `n` runs of each experiment with the supplied generator.
///
/// Draw order is mixed/identity, mixed/swap, then purity.
pub fn game_stats_sampled_with<R: Rng + ?Sized>(ens: &TwoStateEnsemble, n: u64, rng: &mut R) -> Result<GameStats> {
    let exact = game_stats_exact(ens);
    let mix_id = bernoulli_frequency(exact.p_mix_id, n, rng)?;
    let mix_swap = bernoulli_frequency(exact.p_mix_swap, n, rng)?;
    let pur = bernoulli_frequency(exact.p_pur, n, rng)?;
    Ok(empirical_stats(mix_id, mix_swap, pur))
}

pub fn empirical_stats(mix_id: Frequency, mix_swap: Frequency, pur: Frequency) -> GameStats {
    GameStats {
        p_mix_id: mix_id.estimate(),
        p_mix_swap: mix_swap.estimate(),
        p_pur: pur.estimate(),
        mode: StatsMode::Empirical {
            n_samples: mix_id.n,
            ci: Halfwidths {
                mix_id: mix_id.ci_halfwidth(),
                mix_swap: mix_swap.ci_halfwidth(),
                pur: pur.ci_halfwidth(),
            },
        },
    }
}

/// Game score and the labeling that attains it (identity on ties).
pub fn d_op_argmax(stats: &GameStats, ens: &TwoStateEnsemble) -> Result<(f64, Labeling)> {
    let purity_term = purity_term(stats.p_pur, ens.eta1 * ens.eta2)?;
    let id = 2.0 * stats.p_mix_id - 1.0 + purity_term;
    let swap = 2.0 * stats.p_mix_swap - 1.0 + purity_term;
    if id >= swap {
        Ok((id, Labeling::Identity))
    } else {
        Ok((swap, Labeling::Swap))
    }
}

/// `D_op` from observed pass probabilities; empirical values are not clamped.
pub fn d_op(stats: &GameStats, ens: &TwoStateEnsemble) -> Result<f64> {
    d_op_argmax(stats, ens).map(|(value, _)| value)
}

/// `2√(η₁η₂(1 − p_pur))` with the radicand clamped above `−1e−12`.
pub(crate) fn purity_term(p_pur: f64, prior_product: f64) -> Result<f64> {
    let radicand = prior_product * (1.0 - p_pur);
    if radicand < -STATE_TOL {
        return Err(Error::NegativeRadicand(radicand));
    }
    Ok(2.0 * radicand.max(0.0).sqrt())
}

/// Closed-form discriminability
/// `η₁² + η₂² + 2η₁η₂√(1−|γ|²) + |γ|²(η₁η₂ − η_min²)`.
pub fn d_closed_form(eta1: f64, eta2: f64, gamma_sq: f64) -> Result<f64> {
    check_priors(eta1, eta2)?;
    let g = checked_overlap_sq(gamma_sq)?;
    let eta_min = eta1.min(eta2);
    let prod = eta1 * eta2;
    Ok(eta1 * eta1 + eta2 * eta2 + 2.0 * prod * (1.0 - g).sqrt() + g * (prod - eta_min * eta_min))
}

fn checked_overlap_sq(gamma_sq: f64) -> Result<f64> {
    if gamma_sq.is_finite() && (-STATE_TOL..=1.0 + STATE_TOL).contains(&gamma_sq) {
        Ok(gamma_sq.clamp(0.0, 1.0))
    } else {
        Err(Error::InvalidArgument {
            name: "gamma_sq",
            value: gamma_sq,
            reason: "squared overlap must lie in [0, 1]",
        })
    }
}
