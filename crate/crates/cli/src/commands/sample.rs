use discrimlab_core::game::{d_op, game_stats_exact};
use discrimlab_core::sampling::{bernoulli_frequency, stream_rng};

use super::{discrim::ensemble, par_rows, Outcome};
use crate::config::RunConfig;
use crate::error::{config_err, Result};
use crate::report::{Cell, Report};

/// Fraction of runs whose three frequencies must all fall inside their 3σ envelopes.
pub const COVERAGE_TARGET: f64 = 0.99;

const COLUMNS: [&str; 13] = [
    "run",
    "p_mix_id",
    "mix_id_hat",
    "mix_id_ci",
    "p_mix_swap",
    "mix_swap_hat",
    "mix_swap_ci",
    "p_pur",
    "pur_hat",
    "pur_ci",
    "covered",
    "d_op_exact",
    "d_op_sampled",
];

/// Repeated seeded runs of the three SWAP experiments; run `r` draws from
/// stream `r` of the seed. Fails when coverage drops below the target.
pub(super) fn run(cfg: &RunConfig) -> Result<Outcome> {
    let p = &cfg.params;
    let ens = ensemble(p.f64("eta1", 0.5)?, p.f64("gamma2", 0.5)?, p.f64("phase", 0.0)?)?;
    let runs = p.u64("runs", 100)?;
    if runs == 0 {
        return Err(config_err("runs must be at least 1"));
    }
    let exact = game_stats_exact(&ens);
    let d_exact = d_op(&exact, &ens)?;

    let ids: Vec<u64> = (0..runs).collect();
    let rows = par_rows(&ids, |_, &run| -> Result<(bool, Vec<Cell>)> {
        let mut rng = stream_rng(cfg.seed, run);
        let mix_id = bernoulli_frequency(exact.p_mix_id, cfg.samples, &mut rng)?;
        let mix_swap = bernoulli_frequency(exact.p_mix_swap, cfg.samples, &mut rng)?;
        let pur = bernoulli_frequency(exact.p_pur, cfg.samples, &mut rng)?;
        let covered = mix_id.covers(exact.p_mix_id) && mix_swap.covers(exact.p_mix_swap) && pur.covers(exact.p_pur);
        let stats = discrimlab_core::game::empirical_stats(mix_id, mix_swap, pur);
        Ok((
            covered,
            vec![
                run.into(),
                exact.p_mix_id.into(),
                mix_id.estimate().into(),
                mix_id.ci_halfwidth().into(),
                exact.p_mix_swap.into(),
                mix_swap.estimate().into(),
                mix_swap.ci_halfwidth().into(),
                exact.p_pur.into(),
                pur.estimate().into(),
                pur.ci_halfwidth().into(),
                covered.into(),
                d_exact.into(),
                d_op(&stats, &ens)?.into(),
            ],
        ))
    })?;

    let covered = rows.iter().filter(|(c, _)| *c).count() as u64;
    let coverage = covered as f64 / runs as f64;
    Ok(Outcome {
        report: Report::from_rows(&COLUMNS, rows.into_iter().map(|(_, r)| r).collect()),
        failed: coverage < COVERAGE_TARGET,
        notes: vec![format!(
            "coverage {covered}/{runs} = {coverage} (target {COVERAGE_TARGET})"
        )],
    })
}
