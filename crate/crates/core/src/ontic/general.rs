//! Exploratory search over `n`-state models with sharp supports.
//!
//! Results are lower bounds on the noncontextual maximum for the given
//! support structure. Nothing here is a proven inequality.

use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use super::check_q;
use crate::error::{ensure_range, Error, Result};
use crate::game::{purity_term, Labeling};
use crate::qubit::{check_priors, STATE_TOL};
use crate::sampling::stream_rng;

/// Support structure and confusability for the sharp single-copy test.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralConstraints {
    /// Ontic states on which `μ_T` may have weight.
    pub t_support: Vec<usize>,
    /// Ontic states on which `μ_T̃` may have weight; disjoint from `t_support`.
    pub t_tilde_support: Vec<usize>,
    /// Required `p(T|M_T,P_η) = Σ_{i∈supp T} μ_η(i)`.
    pub confusability: f64,
}

impl GeneralConstraints {
    /// `μ_T` on `{0}`, `μ_T̃` on the remaining `n − 1` states.
    pub fn point_vs_rest(n: usize, confusability: f64) -> Self {
        Self {
            t_support: vec![0],
            t_tilde_support: (1..n).collect(),
            confusability,
        }
    }

    fn validate(&self, n: usize) -> Result<()> {
        ensure_range("confusability", self.confusability, 0.0, 1.0)?;
        let mut seen = vec![false; n];
        for &i in self.t_support.iter().chain(&self.t_tilde_support) {
            if i >= n {
                return Err(Error::Infeasible(format!("support index {i} outside 0..{n}")));
            }
            if seen[i] {
                return Err(Error::Infeasible(format!("support index {i} repeated or shared")));
            }
            seen[i] = true;
        }
        if self.t_support.is_empty() || self.t_tilde_support.is_empty() {
            return Err(Error::Infeasible("sharp supports must be non-empty".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneralSearchResult {
    /// Best score found; a lower bound on the noncontextual maximum.
    pub best_d_op: f64,
    pub labeling: Labeling,
    pub mu_t: Vec<f64>,
    pub mu_t_tilde: Vec<f64>,
    pub mu_eta: Vec<f64>,
    pub mu_eta_tilde: Vec<f64>,
    pub evaluations: u64,
    /// False when the evaluation budget ran out before every restart converged.
    pub complete: bool,
}

/// Free parameters: `μ_T` and `μ_T̃` on their supports, and the shapes
/// `α`, `β` of `μ_η` on the two supports (masses fixed to `c` and `1 − c`).
#[derive(Debug, Clone)]
struct Point {
    mu_t: Vec<f64>,
    mu_t_tilde: Vec<f64>,
    alpha: Vec<f64>,
    beta: Vec<f64>,
}

struct Problem<'a> {
    n: usize,
    q: f64,
    prior_product: f64,
    cons: &'a GeneralConstraints,
}

impl Problem<'_> {
    fn distributions(&self, p: &Point) -> [Vec<f64>; 4] {
        let c = self.cons.confusability;
        let mut mu_t = vec![0.0; self.n];
        let mut mu_tt = vec![0.0; self.n];
        let mut mu_eta = vec![0.0; self.n];
        for (k, &i) in self.cons.t_support.iter().enumerate() {
            mu_t[i] = p.mu_t[k];
            mu_eta[i] = c * p.alpha[k];
        }
        for (k, &i) in self.cons.t_tilde_support.iter().enumerate() {
            mu_tt[i] = p.mu_t_tilde[k];
            mu_eta[i] = (1.0 - c) * p.beta[k];
        }
        // Mixture constraint: μ_η̃ = μ_T + μ_T̃ − μ_η.
        let mu_eta_tilde = (0..self.n).map(|i| mu_t[i] + mu_tt[i] - mu_eta[i]).collect();
        [mu_t, mu_tt, mu_eta, mu_eta_tilde]
    }

    /// `None` when the completion `μ_η̃` has negative weight.
    fn score(&self, p: &Point) -> Option<(f64, Labeling)> {
        let [mu_t, _, mu_eta, mu_eta_tilde] = self.distributions(p);
        if mu_eta_tilde.iter().any(|&w| w < -STATE_TOL) {
            return None;
        }
        // Ξ(i,j) = 1 if i = j else q, so Σ Ξ μ ν = q + (1 − q) Σ μ(i) ν(i).
        let pass = |nu: &[f64]| self.q + (1.0 - self.q) * mu_t.iter().zip(nu).map(|(a, b)| a * b).sum::<f64>();
        let p_pur = pass(&mu_t);
        let root = purity_term(p_pur, self.prior_product).ok()?;
        let id = 2.0 * pass(&mu_eta) - 1.0 + root;
        let swap = 2.0 * pass(&mu_eta_tilde) - 1.0 + root;
        Some(if id >= swap {
            (id, Labeling::Identity)
        } else {
            (swap, Labeling::Swap)
        })
    }
}

fn normalize(w: &mut [f64]) {
    for x in w.iter_mut() {
        *x = x.abs();
    }
    let s: f64 = w.iter().sum();
    if s > 0.0 {
        w.iter_mut().for_each(|x| *x /= s);
    } else {
        let u = 1.0 / w.len() as f64;
        w.iter_mut().for_each(|x| *x = u);
    }
}

fn random_simplex<R: Rng>(len: usize, rng: &mut R) -> Vec<f64> {
    let mut w: Vec<f64> = (0..len).map(|_| Exp1.sample(rng)).collect();
    normalize(&mut w);
    w
}

fn perturb<R: Rng>(w: &[f64], step: f64, rng: &mut R) -> Vec<f64> {
    let mut out: Vec<f64> = w
        .iter()
        .map(|&x| x + step * <StandardNormal as Distribution<f64>>::sample(&StandardNormal, rng))
        .collect();
    normalize(&mut out);
    out
}

const RESTARTS: usize = 8;
const MIN_STEP: f64 = 1e-10;

/// Maximizes the score over `n`-state epistemic states subject to the sharp
/// supports, the confusability and the mixture constraint, with response
/// `ξ(i,j) = 1` for `i = j` and `q` otherwise.
///
/// The first restart starts from point masses (the `n = 2` sharp
/// configuration); later restarts are random. Each restart is a (1+1)
/// evolution strategy with step adaptation that stops once the step falls
/// below `1e−10`. `budget` caps the total number of score evaluations.
pub fn search_nc_max_general(
    n: usize,
    q: f64,
    eta1: f64,
    eta2: f64,
    constraints: &GeneralConstraints,
    budget: u64,
    seed: u64,
) -> Result<GeneralSearchResult> {
    if n < 2 {
        return Err(Error::InvalidArgument {
            name: "n",
            value: n as f64,
            reason: "at least two ontic states are required",
        });
    }
    check_q(q)?;
    check_priors(eta1, eta2)?;
    constraints.validate(n)?;
    let problem = Problem {
        n,
        q,
        prior_product: eta1 * eta2,
        cons: constraints,
    };
    let mut rng = stream_rng(seed, 0);
    let point_mass = |len: usize| {
        let mut v = vec![0.0; len];
        v[0] = 1.0;
        v
    };

    let mut evaluations = 0u64;
    let mut converged_restarts = 0;
    let mut best: Option<(f64, Labeling, Point)> = None;

    'restarts: for restart in 0..RESTARTS {
        let mut current = if restart == 0 {
            Point {
                mu_t: point_mass(constraints.t_support.len()),
                mu_t_tilde: point_mass(constraints.t_tilde_support.len()),
                alpha: point_mass(constraints.t_support.len()),
                beta: point_mass(constraints.t_tilde_support.len()),
            }
        } else {
            let mu_t = random_simplex(constraints.t_support.len(), &mut rng);
            let mu_t_tilde = random_simplex(constraints.t_tilde_support.len(), &mut rng);
            // α = μ_T, β = μ_T̃ keeps μ_η̃ non-negative.
            Point {
                alpha: mu_t.clone(),
                beta: mu_t_tilde.clone(),
                mu_t,
                mu_t_tilde,
            }
        };
        if evaluations >= budget {
            break;
        }
        evaluations += 1;
        let Some(mut current_score) = problem.score(&current) else {
            continue;
        };
        let mut step = 0.1;
        while step >= MIN_STEP {
            if evaluations >= budget {
                record(&mut best, current_score, &current);
                break 'restarts;
            }
            let trial = Point {
                mu_t: perturb(&current.mu_t, step, &mut rng),
                mu_t_tilde: perturb(&current.mu_t_tilde, step, &mut rng),
                alpha: perturb(&current.alpha, step, &mut rng),
                beta: perturb(&current.beta, step, &mut rng),
            };
            evaluations += 1;
            match problem.score(&trial) {
                Some(s) if s.0 > current_score.0 => {
                    current = trial;
                    current_score = s;
                    step *= 1.5;
                }
                _ => step *= 0.95,
            }
        }
        converged_restarts += 1;
        record(&mut best, current_score, &current);
    }

    let (best_d_op, labeling, point) =
        best.ok_or_else(|| Error::Infeasible("no feasible starting point within the budget".into()))?;
    let [mu_t, mu_t_tilde, mu_eta, mu_eta_tilde] = problem.distributions(&point);
    Ok(GeneralSearchResult {
        best_d_op,
        labeling,
        mu_t,
        mu_t_tilde,
        mu_eta,
        mu_eta_tilde: mu_eta_tilde.into_iter().map(|w: f64| w.max(0.0)).collect(),
        evaluations,
        complete: converged_restarts == RESTARTS,
    })
}

fn record(best: &mut Option<(f64, Labeling, Point)>, score: (f64, Labeling), point: &Point) {
    if best.as_ref().is_none_or(|b| score.0 > b.0) {
        *best = Some((score.0, score.1, point.clone()));
    }
}
