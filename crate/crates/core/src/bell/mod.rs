//! Bell-coupled scenario: Alice's setting and outcome prepare Bob's qubit.
//!
//! For each Alice setting `x` Bob holds `ρ_{±|x} = ½(I + s_{±|x}·σ)` with
//! probabilities `π_{±|x}`. Correlators reduce to `E_xy = r_x·b_y` with the
//! weighted steering vector `r_x = π₊s₊ − π₋s₋`, whose norm is recovered
//! from SWAP statistics alone. The CHSH value is then bounded by
//! `2√(R̃₀² + R̃₁²)`.

mod optimize;

pub use optimize::{maximize_chsh, ChshMaximum, ChshOptimizer};

use nalgebra::Vector3;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::game::{d_closed_form, swap_pass_prob};
use crate::qubit::{check_priors, pauli, Complex2x2, QubitState, STATE_TOL};
use crate::sampling::{bernoulli_frequency, Frequency};

/// Threshold above which the separation radicand counts as sampling noise.
pub const RADICAND_TOL: f64 = 1e-10;

/// Bob's two conditional states for one Alice setting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionalPair {
    pub pi_plus: f64,
    pub pi_minus: f64,
    pub s_plus: Vector3<f64>,
    pub s_minus: Vector3<f64>,
}

impl ConditionalPair {
    pub fn new(pi_plus: f64, pi_minus: f64, s_plus: Vector3<f64>, s_minus: Vector3<f64>) -> Result<Self> {
        check_priors(pi_plus, pi_minus)?;
        QubitState::from_bloch(s_plus)?;
        QubitState::from_bloch(s_minus)?;
        Ok(Self {
            pi_plus,
            pi_minus,
            s_plus,
            s_minus,
        })
    }

    pub fn state_plus(&self) -> QubitState {
        QubitState::from_bloch(self.s_plus).expect("validated Bloch vector")
    }

    pub fn state_minus(&self) -> QubitState {
        QubitState::from_bloch(self.s_minus).expect("validated Bloch vector")
    }

    /// Bloch vector of Bob's unconditioned state `π₊ρ₊ + π₋ρ₋`.
    pub fn marginal_bloch(&self) -> Vector3<f64> {
        self.s_plus * self.pi_plus + self.s_minus * self.pi_minus
    }
}

/// Conditional preparations for Alice settings `x ∈ {0, 1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionalScenario {
    pub settings: [ConditionalPair; 2],
}

impl ConditionalScenario {
    pub fn new(setting0: ConditionalPair, setting1: ConditionalPair) -> Self {
        Self {
            settings: [setting0, setting1],
        }
    }

    pub fn pair(&self, x: usize) -> &ConditionalPair {
        &self.settings[x]
    }

    /// Equal priors and pure conditionals `s_{±|x} = cos α ẑ ± sin α m_x`
    /// with `m₀ = x̂`, `m₁ = ŷ` and `sin α = 2D − 1`, so that both settings
    /// have discriminability `D` and orthogonal steering vectors. Bob's
    /// marginal `cos α ẑ` is the same for both settings.
    pub fn symmetric_discriminability(d: f64) -> Result<Self> {
        if !(0.5 - STATE_TOL..=1.0 + STATE_TOL).contains(&d) {
            return Err(Error::InvalidArgument {
                name: "D",
                value: d,
                reason: "must lie in [1/2, 1]",
            });
        }
        let sin_a = (2.0 * d - 1.0).clamp(0.0, 1.0);
        let cos_a = (1.0 - sin_a * sin_a).max(0.0).sqrt();
        let pair = |m: Vector3<f64>| {
            ConditionalPair::new(
                0.5,
                0.5,
                Vector3::z() * cos_a + m * sin_a,
                Vector3::z() * cos_a - m * sin_a,
            )
        };
        Ok(Self::new(pair(Vector3::x())?, pair(Vector3::y())?))
    }
}

/// Bob's two measurement directions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BobSettings {
    pub b0: Vector3<f64>,
    pub b1: Vector3<f64>,
}

impl BobSettings {
    pub fn new(b0: Vector3<f64>, b1: Vector3<f64>) -> Result<Self> {
        for b in [&b0, &b1] {
            let norm = b.norm();
            if (norm - 1.0).abs() > STATE_TOL {
                return Err(Error::InvalidArgument {
                    name: "bob_direction",
                    value: norm,
                    reason: "measurement directions must be unit vectors",
                });
            }
        }
        Ok(Self { b0, b1 })
    }

    /// `b₀ = (ẑ + x̂)/√2`, `b₁ = (ẑ − x̂)/√2`, optimal when Alice measures
    /// `ẑ` then `x̂` on `|Φ⁺⟩`.
    pub fn standard_chsh() -> Self {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            b0: Vector3::new(r, 0.0, r),
            b1: Vector3::new(-r, 0.0, r),
        }
    }

    pub fn get(&self, y: usize) -> Vector3<f64> {
        if y == 0 {
            self.b0
        } else {
            self.b1
        }
    }
}

/// Normalized two-qubit pure state; amplitude index `2a + b` with Alice's
/// qubit first.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitPure {
    amps: [Complex64; 4],
}

impl TwoQubitPure {
    pub fn new(amps: [Complex64; 4]) -> Result<Self> {
        let norm2: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if !norm2.is_finite() || (norm2 - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidState(format!("two-qubit state has squared norm {norm2}")));
        }
        Ok(Self { amps })
    }

    /// Normalizes `amps`; errors on the zero vector.
    pub fn normalized(amps: [Complex64; 4]) -> Result<Self> {
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidState("zero two-qubit vector".into()));
        }
        Self::new(amps.map(|a| a / norm))
    }

    pub fn phi_plus() -> Self {
        Self::partially_entangled(std::f64::consts::FRAC_PI_4)
    }

    /// `cos θ|00⟩ + sin θ|11⟩`.
    pub fn partially_entangled(theta: f64) -> Self {
        let z = Complex64::from(0.0);
        Self {
            amps: [theta.cos().into(), z, z, theta.sin().into()],
        }
    }

    pub fn product(alice: [Complex64; 2], bob: [Complex64; 2]) -> Result<Self> {
        Self::normalized([
            alice[0] * bob[0],
            alice[0] * bob[1],
            alice[1] * bob[0],
            alice[1] * bob[1],
        ])
    }

    /// Haar-random pure state from normalized complex Gaussian amplitudes.
    pub fn haar_random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let mut amps = [Complex64::from(0.0); 4];
            for a in &mut amps {
                *a = Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
            }
            if let Ok(s) = Self::normalized(amps) {
                return s;
            }
        }
    }

    pub fn amplitudes(&self) -> &[Complex64; 4] {
        &self.amps
    }

    fn coeff(&self, a: usize, b: usize) -> Complex64 {
        self.amps[2 * a + b]
    }

    /// Bob's unnormalized state `Tr_A[(P ⊗ I)|ψ⟩⟨ψ|]` for an Alice operator `P`.
    pub fn bob_conditional(&self, alice_op: &Complex2x2) -> Complex2x2 {
        let mut out = [[Complex64::from(0.0); 2]; 2];
        for (j, row) in out.iter_mut().enumerate() {
            for (k, cell) in row.iter_mut().enumerate() {
                for i in 0..2 {
                    for ip in 0..2 {
                        *cell += alice_op.entry(ip, i) * self.coeff(i, j) * self.coeff(ip, k).conj();
                    }
                }
            }
        }
        Complex2x2::new(out[0][0], out[0][1], out[1][0], out[1][1])
    }

    /// Bob's reduced state.
    pub fn bob_reduced(&self) -> Complex2x2 {
        self.bob_conditional(&Complex2x2::identity())
    }
}

/// Projector `½(I + a n·σ)` onto outcome `a = ±1` along `n`.
pub fn spin_projector(n: &Vector3<f64>, outcome: i8) -> Complex2x2 {
    let [sx, sy, sz] = pauli();
    let a = f64::from(outcome);
    let n_sigma = sx * Complex64::from(n.x) + sy * Complex64::from(n.y) + sz * Complex64::from(n.z);
    Complex2x2(Complex2x2::identity().0 + n_sigma * Complex64::from(a)).scale(0.5)
}

/// Bob's conditional ensembles when Alice measures along `alice_dirs[x]`.
pub fn conditional_from_bipartite(psi: &TwoQubitPure, alice_dirs: [Vector3<f64>; 2]) -> Result<ConditionalScenario> {
    let mut pairs = Vec::with_capacity(2);
    for (x, n) in alice_dirs.iter().enumerate() {
        let norm = n.norm();
        if (norm - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidArgument {
                name: "alice_direction",
                value: norm,
                reason: "measurement directions must be unit vectors",
            });
        }
        let outcome = |a: i8| -> Result<(f64, Vector3<f64>)> {
            let unnormalized = psi.bob_conditional(&spin_projector(n, a));
            let prob = unnormalized.trace().re;
            if prob < STATE_TOL {
                return Err(Error::DegenerateConditioning {
                    setting: x,
                    outcome: a,
                    probability: prob,
                });
            }
            let mut s = unnormalized.scale(1.0 / prob).bloch_vector();
            // Pure conditionals can land a few ulps outside the ball.
            let len = s.norm();
            if len > 1.0 {
                s /= len;
            }
            Ok((prob, s))
        };
        let (pi_plus, s_plus) = outcome(1)?;
        let (pi_minus, s_minus) = outcome(-1)?;
        let total = pi_plus + pi_minus;
        pairs.push(ConditionalPair::new(
            pi_plus / total,
            pi_minus / total,
            s_plus,
            s_minus,
        )?);
    }
    Ok(ConditionalScenario::new(pairs[0], pairs[1]))
}

/// `r_x = π₊ s₊ − π₋ s₋`.
pub fn steering_vector(sc: &ConditionalScenario, x: usize) -> Vector3<f64> {
    let p = sc.pair(x);
    p.s_plus * p.pi_plus - p.s_minus * p.pi_minus
}

/// SWAP pass probabilities among Bob's conditional states at one setting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwapSeparationStats {
    pub p_pur_plus: f64,
    pub p_pur_minus: f64,
    pub p_ov: f64,
}

pub fn swap_separation_stats(sc: &ConditionalScenario, x: usize) -> SwapSeparationStats {
    let p = sc.pair(x);
    let plus = p.state_plus().matrix();
    let minus = p.state_minus().matrix();
    SwapSeparationStats {
        p_pur_plus: swap_pass_prob(&plus, &plus),
        p_pur_minus: swap_pass_prob(&minus, &minus),
        p_ov: swap_pass_prob(&plus, &minus),
    }
}

/// Empirical separation statistics from `n` SWAP runs per experiment,
/// drawn in the order purity(+), purity(−), overlap.
pub fn swap_separation_stats_sampled<R: Rng + ?Sized>(
    sc: &ConditionalScenario,
    x: usize,
    n: u64,
    rng: &mut R,
) -> Result<(SwapSeparationStats, [Frequency; 3])> {
    let exact = swap_separation_stats(sc, x);
    let plus = bernoulli_frequency(exact.p_pur_plus, n, rng)?;
    let minus = bernoulli_frequency(exact.p_pur_minus, n, rng)?;
    let ov = bernoulli_frequency(exact.p_ov, n, rng)?;
    Ok((
        SwapSeparationStats {
            p_pur_plus: plus.estimate(),
            p_pur_minus: minus.estimate(),
            p_ov: ov.estimate(),
        },
        [plus, minus, ov],
    ))
}

/// Weighted separation `R̃` from priors and SWAP statistics.
pub fn separation_weighted_from_stats(pi_plus: f64, pi_minus: f64, stats: &SwapSeparationStats) -> Result<f64> {
    let squared = 2.0
        * (pi_plus * pi_plus * (2.0 * stats.p_pur_plus - 1.0) + pi_minus * pi_minus * (2.0 * stats.p_pur_minus - 1.0)
            - 2.0 * pi_plus * pi_minus * (2.0 * stats.p_ov - 1.0))
        - (pi_plus - pi_minus).powi(2);
    checked_root(squared)
}

/// `R̃ₓ`, computed from the exact SWAP statistics of setting `x`.
pub fn separation_weighted(sc: &ConditionalScenario, x: usize) -> Result<f64> {
    let p = sc.pair(x);
    separation_weighted_from_stats(p.pi_plus, p.pi_minus, &swap_separation_stats(sc, x))
}

/// Equal-prior separation `Rₓ = √(p_pur⁺ + p_pur⁻ − 2p_ov)`.
pub fn separation_symmetric(stats: &SwapSeparationStats) -> Result<f64> {
    checked_root(stats.p_pur_plus + stats.p_pur_minus - 2.0 * stats.p_ov)
}

fn checked_root(squared: f64) -> Result<f64> {
    if squared < -RADICAND_TOL {
        Err(Error::InconsistentStatistics(squared))
    } else {
        Ok(squared.max(0.0).sqrt())
    }
}

/// `E_xy = r_x · b_y`.
pub fn correlator(sc: &ConditionalScenario, x: usize, b: &Vector3<f64>) -> f64 {
    steering_vector(sc, x).dot(b)
}

/// `E_xy = Σ_a a π_{a|x} Tr(ρ_{a|x} B_y)` with `B_y = b·σ` as a matrix.
pub fn correlator_outcome_sum(sc: &ConditionalScenario, x: usize, b: &Vector3<f64>) -> f64 {
    let p = sc.pair(x);
    let b_op = spin_projector(b, 1).sub(&spin_projector(b, -1));
    let plus = p.state_plus().matrix().trace_product(&b_op).re;
    let minus = p.state_minus().matrix().trace_product(&b_op).re;
    p.pi_plus * plus - p.pi_minus * minus
}

/// `S = E₀₀ + E₀₁ + E₁₀ − E₁₁`.
pub fn chsh(sc: &ConditionalScenario, settings: &BobSettings) -> f64 {
    chsh_from_steering(
        &steering_vector(sc, 0),
        &steering_vector(sc, 1),
        &settings.b0,
        &settings.b1,
    )
}

/// `r₀·(b₀ + b₁) + r₁·(b₀ − b₁)`.
pub fn chsh_from_steering(r0: &Vector3<f64>, r1: &Vector3<f64>, b0: &Vector3<f64>, b1: &Vector3<f64>) -> f64 {
    r0.dot(&(b0 + b1)) + r1.dot(&(b0 - b1))
}

/// `2√(R̃₀² + R̃₁²)`.
pub fn chsh_bound(sc: &ConditionalScenario) -> Result<f64> {
    Ok(chsh_bound_from_separations(
        separation_weighted(sc, 0)?,
        separation_weighted(sc, 1)?,
    ))
}

pub fn chsh_bound_from_separations(r0: f64, r1: f64) -> f64 {
    2.0 * (r0 * r0 + r1 * r1).sqrt()
}

/// `2√((2D₀ − 1)² + (2D₁ − 1)²)` for `D₀, D₁ ∈ [½, 1]`.
pub fn discriminability_bound(d0: f64, d1: f64) -> Result<f64> {
    for d in [d0, d1] {
        if !(d.is_finite() && (0.5 - STATE_TOL..=1.0 + STATE_TOL).contains(&d)) {
            return Err(Error::InvalidArgument {
                name: "D",
                value: d,
                reason: "discriminability must lie in [1/2, 1]",
            });
        }
    }
    Ok(chsh_bound_from_separations(2.0 * d0 - 1.0, 2.0 * d1 - 1.0))
}

/// Pure-state purity tolerance for the discriminability comparison.
pub const PURE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeparationVsDiscriminability {
    pub r_tilde: f64,
    pub discriminability: f64,
    pub two_d_minus_one: f64,
    pub holds: bool,
}

/// Discriminability `Dₓ` of the conditional ensemble, with
/// `|γ|² = (1 + s₊·s₋)/2`; both states must be pure.
pub fn conditional_discriminability(sc: &ConditionalScenario, x: usize) -> Result<f64> {
    let p = sc.pair(x);
    let (np, nm) = (p.s_plus.norm(), p.s_minus.norm());
    if (np - 1.0).abs() > PURE_TOL || (nm - 1.0).abs() > PURE_TOL {
        return Err(Error::MixedConditionalStates {
            setting: x,
            norm_plus: np,
            norm_minus: nm,
        });
    }
    let gamma_sq = (0.5 * (1.0 + p.s_plus.dot(&p.s_minus) / (np * nm))).clamp(0.0, 1.0);
    d_closed_form(p.pi_plus, p.pi_minus, gamma_sq)
}

/// Checks `R̃ₓ ≤ 2Dₓ − 1` (with slack `1e−10`) for pure conditionals.
pub fn lemma3_check(sc: &ConditionalScenario, x: usize) -> Result<SeparationVsDiscriminability> {
    let d = conditional_discriminability(sc, x)?;
    let r_tilde = separation_weighted(sc, x)?;
    let two_d_minus_one = 2.0 * d - 1.0;
    Ok(SeparationVsDiscriminability {
        r_tilde,
        discriminability: d,
        two_d_minus_one,
        holds: r_tilde <= two_d_minus_one + 1e-10,
    })
}
