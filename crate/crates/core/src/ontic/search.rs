//! Grid-then-refine maximization of the game score over two-state models.

use std::cell::Cell;

use rayon::prelude::*;

use super::{check_q, d_op_formula_max, OnticModel2};
use crate::error::{ensure_range, Error, Result};
use crate::game::Labeling;
use crate::optimize::golden_section_max;
use crate::qubit::{check_priors, STATE_TOL};

/// Largest score found and the model attaining it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchResult {
    pub max_d_op: f64,
    pub model: OnticModel2,
    pub labeling: Labeling,
    pub resolution: usize,
    pub evaluations: u64,
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    value: f64,
    model: OnticModel2,
    labeling: Labeling,
}

impl Candidate {
    /// Larger value wins; equal values go to the lexicographically smaller model.
    fn better_than(&self, other: &Candidate) -> bool {
        self.value > other.value
            || (self.value == other.value
                && self.model.as_tuple().partial_cmp(&other.model.as_tuple()) == Some(std::cmp::Ordering::Less))
    }
}

fn best_of(a: Candidate, b: Candidate) -> Candidate {
    if b.better_than(&a) {
        b
    } else {
        a
    }
}

fn grid(resolution: usize) -> Vec<f64> {
    let last = (resolution - 1) as f64;
    (0..resolution).map(|k| k as f64 / last).collect()
}

/// Maximizes the score over PNC-valid models on a uniform grid.
///
/// With `sharp = false` the free parameters are `(t, e)` on
/// `resolution × resolution` points; every such pair is PNC-completable and
/// the completion `t̃ = max(0, e − t)`, `ẽ = t + t̃ − e` is reported. The best
/// cell is then refined coordinate-wise by golden-section search.
///
/// With `sharp = true` the sharp test pins `μ_T, μ_T̃` to point masses on
/// opposite ontic states (both assignments are enumerated) and `c` is
/// required. The mixture constraint forces `ẽ = 1 − e`; `e` ranges over the
/// grid plus the constraint-active values `{c, 1−c}`, and only candidates
/// whose confusability `p(T|M_T,P_η)` equals `c` are admitted.
pub fn search_nc_max(
    q: f64,
    eta1: f64,
    eta2: f64,
    sharp: bool,
    c: Option<f64>,
    resolution: usize,
) -> Result<SearchResult> {
    check_q(q)?;
    check_priors(eta1, eta2)?;
    if resolution < 10 {
        return Err(Error::InvalidArgument {
            name: "resolution",
            value: resolution as f64,
            reason: "at least 10 grid points per parameter are required",
        });
    }
    let prior_product = eta1 * eta2;
    if sharp {
        let c = c.ok_or(Error::InvalidArgument {
            name: "c",
            value: f64::NAN,
            reason: "the sharp model requires a confusability",
        })?;
        ensure_range("c", c, 0.0, 1.0)?;
        search_sharp(q, prior_product, c, resolution)
    } else {
        search_free(q, prior_product, resolution)
    }
}

fn search_sharp(q: f64, prior_product: f64, c: f64, resolution: usize) -> Result<SearchResult> {
    let mut e_values = grid(resolution);
    e_values.extend([c, 1.0 - c]);

    let mut best: Option<Candidate> = None;
    let mut evaluations = 0;
    for t in [0.0, 1.0] {
        let t_tilde = 1.0 - t;
        for &e in &e_values {
            // The sharp test responds T exactly on the support of μ_T.
            let confusability = if t == 1.0 { e } else { 1.0 - e };
            if (confusability - c).abs() > STATE_TOL {
                continue;
            }
            let model = OnticModel2 {
                t,
                t_tilde,
                e,
                e_tilde: 1.0 - e,
            };
            debug_assert!(model.is_pnc_valid());
            let (value, labeling) = d_op_formula_max(t, e, q, prior_product);
            evaluations += 1;
            let cand = Candidate { value, model, labeling };
            best = Some(match best {
                Some(b) => best_of(b, cand),
                None => cand,
            });
        }
    }
    let best = best.ok_or_else(|| Error::Infeasible(format!("no sharp model has confusability {c}")))?;
    Ok(SearchResult {
        max_d_op: best.value,
        model: best.model,
        labeling: best.labeling,
        resolution,
        evaluations,
    })
}

fn completed(t: f64, e: f64) -> OnticModel2 {
    let t_tilde = (e - t).max(0.0);
    OnticModel2 {
        t,
        t_tilde,
        e,
        e_tilde: (t + t_tilde - e).clamp(0.0, 1.0),
    }
}

fn search_free(q: f64, prior_product: f64, resolution: usize) -> Result<SearchResult> {
    let points = grid(resolution);
    let eval = |t: f64, e: f64| {
        let (value, labeling) = d_op_formula_max(t, e, q, prior_product);
        Candidate {
            value,
            model: completed(t, e),
            labeling,
        }
    };

    let grid_best = points
        .par_iter()
        .map(|&t| {
            points
                .iter()
                .map(|&e| eval(t, e))
                .reduce(best_of)
                .expect("non-empty grid")
        })
        .collect::<Vec<_>>()
        .into_iter()
        .reduce(best_of)
        .expect("non-empty grid");
    let mut evaluations = (resolution * resolution) as u64;

    // Coordinate-wise golden-section refinement within one cell of the best point.
    let h = 1.0 / (resolution - 1) as f64;
    let (mut t, mut e) = (grid_best.model.t, grid_best.model.e);
    let lo_t = (t - h).max(0.0);
    let hi_t = (t + h).min(1.0);
    let lo_e = (e - h).max(0.0);
    let hi_e = (e + h).min(1.0);
    let refine_evals = Cell::new(0u64);
    let counted = |t: f64, e: f64| {
        refine_evals.set(refine_evals.get() + 1);
        eval(t, e)
    };
    let mut best = grid_best;
    for _ in 0..50 {
        let (nt, _) = golden_section_max(|x| counted(x, e).value, lo_t, hi_t, 1e-13);
        let (ne, _) = golden_section_max(|y| counted(nt, y).value, lo_e, hi_e, 1e-13);
        let cand = counted(nt, ne);
        let moved = (nt - t).abs() + (ne - e).abs();
        if cand.value > best.value {
            best = cand;
        }
        t = nt;
        e = ne;
        if moved < 1e-14 {
            break;
        }
    }

    evaluations += refine_evals.get();

    Ok(SearchResult {
        max_d_op: best.value,
        model: best.model,
        labeling: best.labeling,
        resolution,
        evaluations,
    })
}
