use discrimlab_core::game::d_closed_form;
use discrimlab_core::ontic::{
    direct_bound, q_star, quantum_saturation, search_nc_max, search_nc_max_general, GeneralConstraints,
};
use discrimlab_core::SharpModelConfig;

use super::{cartesian, discrim::ensemble, par_rows, row_seed};
use crate::config::RunConfig;
use crate::error::{config_err, Result};
use crate::report::{Cell, Report};

pub const ATTAIN_TOL: f64 = 1e-12;
pub const SEARCH_TOL: f64 = 1e-9;

const BOUND_COLUMNS: [&str; 9] = [
    "q",
    "c",
    "bound",
    "sharp_d_op",
    "attain_gap",
    "qm_value",
    "qm_gap",
    "tol",
    "pass",
];

const QSTAR_COLUMNS: [&str; 10] = [
    "eta1",
    "gamma2",
    "c",
    "d_closed",
    "q_star",
    "bound_at_q_star",
    "gap",
    "min_margin_above",
    "tol",
    "pass",
];

const SEARCH_COLUMNS: [&str; 16] = [
    "q",
    "c",
    "n",
    "sharp",
    "resolution",
    "search_max",
    "t",
    "t_tilde",
    "e",
    "e_tilde",
    "labeling",
    "evaluations",
    "complete",
    "reference",
    "tol",
    "pass",
];

const QSTAR_PROBES: usize = 20;

pub(super) fn run_bound(cfg: &RunConfig) -> Result<Report> {
    match cfg.params.get("mode").unwrap_or("bound") {
        "bound" => run_direct(cfg),
        "qstar" => run_qstar(cfg),
        other => Err(config_err(format!("mode must be bound or qstar, got `{other}`"))),
    }
}

fn run_direct(cfg: &RunConfig) -> Result<Report> {
    let p = &cfg.params;
    let grid = cartesian(
        &p.f64_list("q", &[0.5])?,
        &p.f64_list("c", &[0.0, 0.1, 0.2, 0.3, 0.4, 0.5])?,
    );
    let eta1 = p.f64("eta1", 0.5)?;
    let rows = par_rows(&grid, |_, &(q, c)| -> Result<Vec<Cell>> {
        let bound = direct_bound(q, c)?;
        let sharp = SharpModelConfig::new(c, q)?.d_op(eta1, 1.0 - eta1)?;
        let attain_gap = (bound - sharp).abs();
        let qm = if c <= 0.5 {
            Some(quantum_saturation(c)?.d_qm)
        } else {
            None
        };
        let qm_gap = qm.map(|v| bound - v);
        // Saturation is a claim about the SWAP-like response with q = ½.
        let saturated = q != 0.5 || qm_gap.is_none_or(|g| g.abs() <= ATTAIN_TOL);
        Ok(vec![
            q.into(),
            c.into(),
            bound.into(),
            sharp.into(),
            attain_gap.into(),
            qm.into(),
            qm_gap.into(),
            ATTAIN_TOL.into(),
            (attain_gap <= ATTAIN_TOL && saturated).into(),
        ])
    })?;
    Ok(Report::from_rows(&BOUND_COLUMNS, rows))
}

fn run_qstar(cfg: &RunConfig) -> Result<Report> {
    let p = &cfg.params;
    let grid = cartesian(&p.f64_list("eta1", &[0.3])?, &p.f64_list("gamma2", &[0.5])?);
    let rows = par_rows(&grid, |_, &(eta1, gamma2)| -> Result<Vec<Cell>> {
        let ens = ensemble(eta1, gamma2, 0.0)?;
        let c = ens.eta_min();
        let d = d_closed_form(ens.eta1(), ens.eta2(), ens.overlap_sq())?;
        let qs = q_star(c, d)?;
        let at = direct_bound(qs, c)?;
        let gap = at - d;
        let mut margin = f64::INFINITY;
        for k in 0..QSTAR_PROBES {
            let q = qs + (1.0 - qs) * k as f64 / QSTAR_PROBES as f64;
            margin = margin.min(direct_bound(q, c)? - d);
        }
        Ok(vec![
            eta1.into(),
            gamma2.into(),
            c.into(),
            d.into(),
            qs.into(),
            at.into(),
            gap.into(),
            margin.into(),
            ATTAIN_TOL.into(),
            (gap.abs() <= ATTAIN_TOL && margin >= -ATTAIN_TOL).into(),
        ])
    })?;
    Ok(Report::from_rows(&QSTAR_COLUMNS, rows))
}

pub(super) fn run_search(cfg: &RunConfig) -> Result<Report> {
    let p = &cfg.params;
    let sharp = p.bool("sharp", true)?;
    let n = p.usize("n", 2)?;
    let resolution = p.usize("resolution", 1000)?;
    let budget = p.u64("budget", 20_000)?;
    let eta1 = p.f64("eta1", 0.5)?;
    let qs = p.f64_list("q", &[0.5])?;
    if n > 2 && !sharp {
        return Err(config_err("n > 2 supports only the sharp single-copy test"));
    }
    // The free search does not involve a confusability.
    let grid: Vec<(f64, Option<f64>)> = if sharp {
        cartesian(&qs, &p.f64_list("c", &[0.2])?)
            .into_iter()
            .map(|(q, c)| (q, Some(c)))
            .collect()
    } else {
        qs.iter().map(|&q| (q, None)).collect()
    };

    let rows = par_rows(&grid, |row, &(q, c)| -> Result<Vec<Cell>> {
        if n == 2 {
            let r = search_nc_max(q, eta1, 1.0 - eta1, sharp, c, resolution)?;
            // Sharp: the direct bound. Free: the trivial value 1.
            let (reference, pass) = match c {
                Some(c) => {
                    let b = direct_bound(q, c)?;
                    (b, r.max_d_op <= b + SEARCH_TOL)
                }
                None => (1.0, (r.max_d_op - 1.0).abs() <= SEARCH_TOL),
            };
            Ok(vec![
                q.into(),
                c.into(),
                n.into(),
                sharp.into(),
                resolution.into(),
                r.max_d_op.into(),
                r.model.t.into(),
                r.model.t_tilde.into(),
                r.model.e.into(),
                r.model.e_tilde.into(),
                r.labeling.name().into(),
                r.evaluations.into(),
                true.into(),
                reference.into(),
                SEARCH_TOL.into(),
                pass.into(),
            ])
        } else {
            let c = c.expect("sharp rows carry c");
            let constraints = GeneralConstraints::point_vs_rest(n, c);
            let r = search_nc_max_general(n, q, eta1, 1.0 - eta1, &constraints, budget, row_seed(cfg.seed, row))?;
            // Only a lower bound on the maximum: nothing to certify.
            Ok(vec![
                q.into(),
                c.into(),
                n.into(),
                sharp.into(),
                Cell::Null,
                r.best_d_op.into(),
                Cell::Null,
                Cell::Null,
                Cell::Null,
                Cell::Null,
                r.labeling.name().into(),
                r.evaluations.into(),
                r.complete.into(),
                Cell::Null,
                Cell::Null,
                Cell::Null,
            ])
        }
    })?;
    Ok(Report::from_rows(&SEARCH_COLUMNS, rows))
}
