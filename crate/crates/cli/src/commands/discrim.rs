use discrimlab_core::game::{
    d_closed_form, d_op, game_stats_exact, game_stats_sampled_with, gram_state, prior_state, StatsMode,
};
use discrimlab_core::qubit::fidelity_qubit;
use discrimlab_core::sampling::stream_rng;
use discrimlab_core::{GameStats, Labeling, TwoStateEnsemble};
use num_complex::Complex64;

use super::{cartesian, par_rows};
use crate::config::RunConfig;
use crate::error::Result;
use crate::report::{Cell, Report};

pub const EQUIVALENCE_TOL: f64 = 1e-10;

const COLUMNS: [&str; 12] = [
    "eta1",
    "gamma2",
    "d_closed",
    "d_op_exact",
    "d_fidelity",
    "equivalence_gap",
    "tol",
    "pass",
    "samples",
    "d_op_sampled",
    "d_op_ci",
    "sampled_in_ci",
];

pub(super) fn ensemble(eta1: f64, gamma2: f64, phase: f64) -> Result<TwoStateEnsemble> {
    if !(0.0..=1.0).contains(&gamma2) {
        return Err(discrimlab_core::Error::InvalidArgument {
            name: "gamma2",
            value: gamma2,
            reason: "squared overlap must lie in [0, 1]",
        }
        .into());
    }
    Ok(TwoStateEnsemble::new(
        eta1,
        1.0 - eta1,
        Complex64::from_polar(gamma2.sqrt(), phase),
    )?)
}

/// Envelope on the sampled score: the mixed term moves by at most
/// `2h_mix`, the purity term by its largest change over `p_pur ± h_pur`.
fn score_halfwidth(stats: &GameStats, ens: &TwoStateEnsemble) -> f64 {
    let StatsMode::Empirical { ci, .. } = stats.mode else {
        return 0.0;
    };
    let prod = ens.eta1() * ens.eta2();
    let term = |p: f64| 2.0 * (prod * (1.0 - p.clamp(0.0, 1.0))).max(0.0).sqrt();
    let centre = term(stats.p_pur);
    let purity = (term(stats.p_pur - ci.pur) - centre)
        .abs()
        .max((term(stats.p_pur + ci.pur) - centre).abs());
    2.0 * ci.mix_id.max(ci.mix_swap) + purity
}

pub(super) fn run(cfg: &RunConfig) -> Result<Report> {
    let p = &cfg.params;
    let grid = cartesian(&p.f64_list("eta1", &[0.5])?, &p.f64_list("gamma2", &[0.5])?);
    let phase = p.f64("phase", 0.0)?;

    let rows = par_rows(&grid, |row, &(eta1, gamma2)| -> Result<Vec<Cell>> {
        let ens = ensemble(eta1, gamma2, phase)?;
        let closed = d_closed_form(ens.eta1(), ens.eta2(), ens.overlap_sq())?;
        let exact = d_op(&game_stats_exact(&ens), &ens)?;
        let rho_t = gram_state(&ens);
        let mut fid = f64::NEG_INFINITY;
        for l in Labeling::ALL {
            fid = fid.max(fidelity_qubit(&rho_t, &prior_state(&ens, l))?);
        }
        let gap = (exact - closed).abs().max((fid - closed).abs());

        let stats = game_stats_sampled_with(&ens, cfg.samples, &mut stream_rng(cfg.seed, row))?;
        let sampled = d_op(&stats, &ens)?;
        let ci = score_halfwidth(&stats, &ens);
        Ok(vec![
            eta1.into(),
            gamma2.into(),
            closed.into(),
            exact.into(),
            fid.into(),
            gap.into(),
            EQUIVALENCE_TOL.into(),
            (gap <= EQUIVALENCE_TOL).into(),
            cfg.samples.into(),
            sampled.into(),
            ci.into(),
            ((sampled - exact).abs() <= ci).into(),
        ])
    })?;

    Ok(Report::from_rows(&COLUMNS, rows))
}
