//! Two-state ontological model of the discriminability game.
//!
//! Each of the four preparations `P_T, P_T̃, P_η, P_η̃` is a Bernoulli
//! distribution over the ontic states `{0, 1}`; we store its weight on
//! state 0. Preparation noncontextuality for the mixture equivalence
//! `½P_T + ½P_T̃ ≃ ½P_η + ½P_η̃` reduces to `t + t̃ = e + ẽ`.

mod general;
mod search;

pub use general::{search_nc_max_general, GeneralConstraints, GeneralSearchResult};
pub use search::{search_nc_max, SearchResult};

use crate::error::{ensure_range, Error, Result};
use crate::game::{d_op, swap_pass_prob, GameStats, Labeling, StatsMode};
use crate::qubit::{check_priors, Complex2x2, STATE_TOL};

/// Epistemic-state weights on ontic state 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OnticModel2 {
    pub t: f64,
    pub t_tilde: f64,
    pub e: f64,
    pub e_tilde: f64,
}

impl OnticModel2 {
    pub fn new(t: f64, t_tilde: f64, e: f64, e_tilde: f64) -> Result<Self> {
        ensure_range("t", t, 0.0, 1.0)?;
        ensure_range("t_tilde", t_tilde, 0.0, 1.0)?;
        ensure_range("e", e, 0.0, 1.0)?;
        ensure_range("e_tilde", e_tilde, 0.0, 1.0)?;
        Ok(Self { t, t_tilde, e, e_tilde })
    }

    /// `|t + t̃ − e − ẽ|`.
    pub fn pnc_residual(&self) -> f64 {
        (self.t + self.t_tilde - self.e - self.e_tilde).abs()
    }

    pub fn is_pnc_valid(&self) -> bool {
        self.pnc_residual() <= STATE_TOL
    }

    /// Weight of the prior preparation used under `labeling`: relabeling
    /// the two prior outcomes swaps the ontic weights, `e ↦ 1 − e`.
    pub fn prior_weight(&self, labeling: Labeling) -> f64 {
        match labeling {
            Labeling::Identity => self.e,
            Labeling::Swap => 1.0 - self.e,
        }
    }

    fn as_tuple(&self) -> (f64, f64, f64, f64) {
        (self.t, self.t_tilde, self.e, self.e_tilde)
    }
}

/// Symmetric two-copy pass matrix `[[a, b], [b, c]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResponseMatrix {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl ResponseMatrix {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        ensure_range("a", a, 0.0, 1.0)?;
        ensure_range("b", b, 0.0, 1.0)?;
        ensure_range("c", c, 0.0, 1.0)?;
        Ok(Self { a, b, c })
    }

    /// `[[1, q], [q, 1]]`: equal ontic states always pass.
    pub fn swap_like(q: f64) -> Result<Self> {
        check_q(q)?;
        Ok(Self { a: 1.0, b: q, c: 1.0 })
    }

    /// `Σᵢⱼ Ξᵢⱼ μ(i) ν(j)` for Bernoulli weights `x = μ(0)`, `y = ν(0)`.
    pub fn pass_probability(&self, x: f64, y: f64) -> f64 {
        self.a * x * y + self.b * x * (1.0 - y) + self.b * (1.0 - x) * y + self.c * (1.0 - x) * (1.0 - y)
    }
}

/// Sharp-test configuration `μ_T=(1,0)`, `μ_T̃=(0,1)`, `μ_η=(c,1−c)`,
/// `μ_η̃=(1−c,c)` with a SWAP-like response of parameter `q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SharpModelConfig {
    pub c_confusability: f64,
    pub q: f64,
}

impl SharpModelConfig {
    pub fn new(c_confusability: f64, q: f64) -> Result<Self> {
        ensure_range("c", c_confusability, 0.0, 1.0)?;
        check_q(q)?;
        Ok(Self { c_confusability, q })
    }

    pub fn model(&self) -> OnticModel2 {
        let c = self.c_confusability;
        OnticModel2 {
            t: 1.0,
            t_tilde: 0.0,
            e: c,
            e_tilde: 1.0 - c,
        }
    }

    pub fn response(&self) -> ResponseMatrix {
        ResponseMatrix {
            a: 1.0,
            b: self.q,
            c: 1.0,
        }
    }

    pub fn d_op(&self, eta1: f64, eta2: f64) -> Result<f64> {
        d_op_model(&self.model(), self.q, eta1, eta2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GameProbs {
    pub p_pur: f64,
    pub p_mix: f64,
}

/// Purity and mixed pass probabilities of `μ_T` against itself and `μ_η`.
pub fn game_probs(m: &OnticModel2, xi: &ResponseMatrix) -> GameProbs {
    GameProbs {
        p_pur: xi.pass_probability(m.t, m.t),
        p_mix: xi.pass_probability(m.t, m.e),
    }
}

/// Disagreement probability `δ = t + e − 2te`.
pub fn disagreement(t: f64, e: f64) -> f64 {
    t + e - 2.0 * t * e
}

/// `1 − 2(1−q)δ + 2√(2η₁η₂(1−q)t(1−t))` for a single prior weight.
pub(crate) fn d_op_formula(t: f64, e: f64, q: f64, prior_product: f64) -> f64 {
    let u = 1.0 - q;
    let radicand = (2.0 * prior_product * u * t * (1.0 - t)).max(0.0);
    1.0 - 2.0 * u * disagreement(t, e) + 2.0 * radicand.sqrt()
}

/// Best score over the two prior labelings; identity wins ties.
pub(crate) fn d_op_formula_max(t: f64, e: f64, q: f64, prior_product: f64) -> (f64, Labeling) {
    let id = d_op_formula(t, e, q, prior_product);
    let swap = d_op_formula(t, 1.0 - e, q, prior_product);
    if id >= swap {
        (id, Labeling::Identity)
    } else {
        (swap, Labeling::Swap)
    }
}

/// Game score of a PNC-valid model under the SWAP-like response `Ξ_q`,
/// maximized over the two prior labelings.
pub fn d_op_model(m: &OnticModel2, q: f64, eta1: f64, eta2: f64) -> Result<f64> {
    check_q(q)?;
    check_priors(eta1, eta2)?;
    if !m.is_pnc_valid() {
        return Err(Error::Infeasible(format!(
            "model violates the mixture constraint (residual {})",
            m.pnc_residual()
        )));
    }
    Ok(d_op_formula_max(m.t, m.e, q, eta1 * eta2).0)
}

/// `1 − 2(1−q) min{c, 1−c}`.
pub fn direct_bound(q: f64, c: f64) -> Result<f64> {
    check_q(q)?;
    ensure_range("c", c, 0.0, 1.0)?;
    Ok(1.0 - 2.0 * (1.0 - q) * c.min(1.0 - c))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Saturation {
    pub d_qm: f64,
    pub bound: f64,
    pub gap: f64,
}

/// Quantum score of `ρ_T = |0⟩⟨0|` against `η = diag(c, 1−c)` with the SWAP
/// test, compared with the noncontextual bound at `q = ½`.
pub fn quantum_saturation(c: f64) -> Result<Saturation> {
    ensure_range("c", c, 0.0, 0.5)?;
    let rho_t = Complex2x2::diag(1.0, 0.0);
    let stats = GameStats {
        p_mix_id: swap_pass_prob(&rho_t, &Complex2x2::diag(c, 1.0 - c)),
        p_mix_swap: swap_pass_prob(&rho_t, &Complex2x2::diag(1.0 - c, c)),
        p_pur: swap_pass_prob(&rho_t, &rho_t),
        mode: StatsMode::Exact,
    };
    // Identical states with priors (c, 1−c): the ensemble whose Gram state is |0⟩⟨0|.
    let priors = crate::game::TwoStateEnsemble::new(c, 1.0 - c, 1.0.into())?;
    let d_qm = d_op(&stats, &priors)?;
    let bound = direct_bound(0.5, c)?;
    Ok(Saturation {
        d_qm,
        bound,
        gap: bound - d_qm,
    })
}

/// Smallest `q` at which the direct bound with `c = η_min` reaches `D`:
/// `q* = 1 − (1 − D)/(2η_min)`.
pub fn q_star(eta_min: f64, d: f64) -> Result<f64> {
    if !(eta_min > 0.0 && eta_min <= 0.5) {
        return Err(Error::InvalidArgument {
            name: "eta_min",
            value: eta_min,
            reason: "must lie in (0, 1/2]",
        });
    }
    ensure_range("D", d, 0.0, 1.0)?;
    let q = 1.0 - (1.0 - d) / (2.0 * eta_min);
    debug_assert!(d == 1.0 || q < 1.0);
    Ok(q)
}

fn check_q(q: f64) -> Result<()> {
    if q.is_finite() && (0.0..1.0).contains(&q) {
        Ok(())
    } else {
        Err(Error::InvalidArgument {
            name: "q",
            value: q,
            reason: "must lie in [0, 1)",
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Explicit sum over the 2×2 joint ontic distribution.
    fn joint_pass(xi: &ResponseMatrix, x: f64, y: f64) -> f64 {
        let mu = [x, 1.0 - x];
        let nu = [y, 1.0 - y];
        let m = [[xi.a, xi.b], [xi.b, xi.c]];
        (0..2)
            .flat_map(|i| (0..2).map(move |j| (i, j)))
            .map(|(i, j)| m[i][j] * mu[i] * nu[j])
            .sum()
    }

    #[test]
    fn pnc_residual_examples() {
        assert_close!(OnticModel2::new(0.3, 0.7, 0.4, 0.6).unwrap().pnc_residual(), 0.0, 1e-15);
        assert_eq!(OnticModel2::new(1.0, 0.0, 1.0, 0.0).unwrap().pnc_residual(), 0.0);
        assert_eq!(OnticModel2::new(1.0, 0.0, 0.0, 0.0).unwrap().pnc_residual(), 1.0);
        assert!(OnticModel2::new(1.2, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn game_probs_examples() {
        for q in [0.0, 0.3, 0.9] {
            let xi = ResponseMatrix::swap_like(q).unwrap();
            let m = OnticModel2::new(1.0, 0.0, 1.0, 0.0).unwrap();
            let p = game_probs(&m, &xi);
            assert_close!(p.p_pur, 1.0, 1e-15);
            assert_close!(p.p_mix, 1.0, 1e-15);
        }

        let xi = ResponseMatrix::swap_like(0.0).unwrap();
        let m = OnticModel2::new(0.5, 0.5, 0.5, 0.5).unwrap();
        let p = game_probs(&m, &xi);
        assert_close!(joint_pass(&xi, 0.5, 0.5), 0.5, 1e-15);
        assert_close!(p.p_pur, 0.5, 1e-15);
        assert_close!(p.p_mix, 0.5, 1e-15);

        for (q, c) in [(0.5, 0.2), (0.1, 0.7)] {
            let xi = ResponseMatrix::swap_like(q).unwrap();
            let m = SharpModelConfig::new(c, q).unwrap().model();
            assert_close!(game_probs(&m, &xi).p_mix, q + (1.0 - q) * c, 1e-15);
        }
    }

    #[test]
    fn general_response_matches_joint_sum() {
        let xi = ResponseMatrix::new(0.9, 0.3, 0.6).unwrap();
        let m = OnticModel2::new(0.35, 0.5, 0.7, 0.15).unwrap();
        let p = game_probs(&m, &xi);
        assert_close!(p.p_pur, joint_pass(&xi, 0.35, 0.35), 1e-15);
        assert_close!(p.p_mix, joint_pass(&xi, 0.35, 0.7), 1e-15);
    }

    #[test]
    fn d_op_model_examples() {
        let m = OnticModel2::new(1.0, 0.0, 1.0, 0.0).unwrap();
        assert_close!(d_op_model(&m, 0.0, 0.5, 0.5).unwrap(), 1.0, 1e-15);

        for c in [0.0, 0.2, 0.5, 0.8] {
            let m = SharpModelConfig::new(c, 0.5).unwrap().model();
            let expected = 1.0 - f64::min(c, 1.0 - c);
            assert_close!(d_op_model(&m, 0.5, 0.5, 0.5).unwrap(), expected, 1e-15);
        }

        let m = OnticModel2::new(0.5, 0.5, 0.5, 0.5).unwrap();
        let direct = d_op_model(&m, 0.0, 0.5, 0.5).unwrap();
        assert_close!(direct, 2.0 * (1.0f64 / 8.0).sqrt(), 1e-15);
        // Same value via the pass probabilities and the game score.
        let p = game_probs(&m, &ResponseMatrix::swap_like(0.0).unwrap());
        let via_probs = 2.0 * p.p_mix - 1.0 + 2.0 * (0.25 * (1.0 - p.p_pur)).sqrt();
        assert_close!(direct, via_probs, 1e-15);
    }

    #[test]
    fn d_op_model_rejects_contextual_models() {
        let m = OnticModel2::new(1.0, 0.0, 0.0, 0.0).unwrap();
        assert!(matches!(d_op_model(&m, 0.5, 0.5, 0.5), Err(Error::Infeasible(_))));
        let ok = OnticModel2::new(1.0, 0.0, 1.0, 0.0).unwrap();
        assert!(d_op_model(&ok, 1.0, 0.5, 0.5).is_err());
    }

    #[test]
    fn direct_bound_examples() {
        assert_close!(direct_bound(0.5, 0.2).unwrap(), 0.8, 1e-15);
        assert_close!(direct_bound(0.0, 0.5).unwrap(), 0.0, 1e-15);
        assert_close!(direct_bound(0.0, 0.2).unwrap(), 0.6, 1e-15);
        assert_close!(direct_bound(0.3, 0.2).unwrap(), direct_bound(0.3, 0.8).unwrap(), 1e-15);
        assert!(direct_bound(1.0, 0.2).is_err());
    }

    #[test]
    fn sharp_configuration_attains_bound() {
        for (q, c) in [(0.0, 0.3), (0.5, 0.2), (0.75, 0.9)] {
            let cfg = SharpModelConfig::new(c, q).unwrap();
            assert_close!(cfg.d_op(0.3, 0.7).unwrap(), direct_bound(q, c).unwrap(), 1e-15);
        }
    }

    #[test]
    fn quantum_saturation_examples() {
        let s = quantum_saturation(0.0).unwrap();
        assert_close!(s.d_qm, 1.0, 1e-15);
        assert_close!(s.bound, 1.0, 1e-15);
        let s = quantum_saturation(0.2).unwrap();
        assert_close!(s.d_qm, 0.8, 1e-15);
        assert_close!(s.bound, 0.8, 1e-15);
        assert!(s.gap.abs() <= 1e-12);
        // diag(½,½) against |0⟩⟨0|: both labelings pass with probability ¾.
        let s = quantum_saturation(0.5).unwrap();
        assert_close!(s.d_qm, 0.5, 1e-15);
        assert_close!(s.gap, 0.0, 1e-15);
        assert!(quantum_saturation(0.6).is_err());
    }

    #[test]
    fn q_star_examples() {
        let d = 0.5 * (1.0 + 0.5f64.sqrt());
        assert_close!(q_star(0.5, d).unwrap(), d, 1e-15);
        assert_close!(q_star(0.5, 1.0).unwrap(), 1.0, 1e-15);
        assert_close!(q_star(0.3, 0.9).unwrap(), 1.0 - 0.1 / 0.6, 1e-15);
        assert_close!(q_star(0.3, 0.9).unwrap(), 0.833333333333, 1e-12);
        assert!(q_star(0.0, 0.9).is_err());
    }
}
