//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::f64::consts::{FRAC_1_SQRT_2, TAU};
use std::time::{Duration, Instant};

use discrimlab_cli::{run, Cell, CommandKind, Format, Report, RunConfig};
use discrimlab_core::bell::{
    chsh_bound, conditional_from_bipartite, lemma3_check, maximize_chsh, separation_weighted, steering_vector,
    ConditionalPair, ConditionalScenario, TwoQubitPure,
};
use discrimlab_core::game::{d_closed_form, d_op, game_stats_exact, gram_state, prior_state};
use discrimlab_core::ontic::{d_op_model, direct_bound, q_star, quantum_saturation, search_nc_max};
use discrimlab_core::qubit::fidelity_qubit;
use discrimlab_core::sampling::stream_rng;
use discrimlab_core::{Labeling, OnticModel2, SharpModelConfig, TwoStateEnsemble};
use nalgebra::Vector3;
use num_complex::Complex64;
use rand::Rng;

struct Verdict {
    pass: bool,
    detail: String,
}

type Criterion = (&'static str, fn() -> Verdict);

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

fn secs(d: Duration) -> f64 {
    d.as_secs_f64()
}

fn unit<R: Rng>(rng: &mut R) -> Vector3<f64> {
    loop {
        let v = Vector3::new(
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        );
        let n = v.norm();
        if (1e-3..=1.0).contains(&n) {
            return v / n;
        }
    }
}

fn random_ensemble<R: Rng>(rng: &mut R) -> TwoStateEnsemble {
    let eta1 = rng.random_range(0.01..=0.99);
    let g: f64 = rng.random_range(0.0..=1.0);
    let phase = rng.random_range(0.0..TAU);
    TwoStateEnsemble::new(eta1, 1.0 - eta1, Complex64::from_polar(g.sqrt(), phase)).unwrap()
}

fn haar_scenario<R: Rng>(rng: &mut R) -> ConditionalScenario {
    loop {
        let psi = TwoQubitPure::haar_random(rng);
        if let Ok(sc) = conditional_from_bipartite(&psi, [unit(rng), unit(rng)]) {
            return sc;
        }
    }
}

fn criterion_1() -> Verdict {
    let start = Instant::now();
    let mut rng = stream_rng(1, 0);
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let ens = random_ensemble(&mut rng);
        let op = d_op(&game_stats_exact(&ens), &ens).unwrap();
        let closed = d_closed_form(ens.eta1(), ens.eta2(), ens.overlap_sq()).unwrap();
        let rho_t = gram_state(&ens);
        let fid = Labeling::ALL
            .iter()
            .map(|&l| fidelity_qubit(&rho_t, &prior_state(&ens, l)).unwrap())
            .fold(f64::NEG_INFINITY, f64::max);
        worst = worst.max((op - closed).abs()).max((fid - closed).abs());
    }
    let t = start.elapsed();
    verdict(
        worst <= 1e-10 && secs(t) < 5.0,
        format!(
            "max gap {worst:.3e} (tol 1e-10) over 10^4 ensembles in {:.3} s (limit 5 s)",
            secs(t)
        ),
    )
}

fn criterion_2() -> Verdict {
    let mut worst = 0.0f64;
    for k in 0..1000 {
        let g = k as f64 / 999.0;
        let d = d_closed_form(0.5, 0.5, g).unwrap();
        worst = worst.max((d - 0.5 * (1.0 + (1.0 - g).sqrt())).abs());
    }
    let at_half = d_closed_form(0.5, 0.5, 0.5).unwrap();
    let threshold = 0.5 * (1.0 + FRAC_1_SQRT_2);
    let gap = (at_half - threshold).abs();
    verdict(
        worst <= 1e-12 && gap <= 1e-12,
        format!("max gap {worst:.3e} on 10^3 grid; D(|γ|²=1/2) = {at_half:.12} vs threshold {threshold:.12}"),
    )
}

fn criterion_3() -> Verdict {
    let start = Instant::now();
    let mut rng = stream_rng(3, 0);
    let mut worst_excess = f64::NEG_INFINITY;
    let mut worst_attain = 0.0f64;
    for _ in 0..1000 {
        let q = rng.random_range(0.0..1.0);
        let c = rng.random_range(0.0..=1.0);
        let bound = direct_bound(q, c).unwrap();
        let found = search_nc_max(q, 0.5, 0.5, true, Some(c), 1000).unwrap().max_d_op;
        worst_excess = worst_excess.max(found - bound);
        let analytic = SharpModelConfig::new(c, q).unwrap().d_op(0.5, 0.5).unwrap();
        worst_attain = worst_attain.max((analytic - bound).abs());
    }
    let t = start.elapsed();
    verdict(
        worst_excess <= 1e-9 && worst_attain <= 1e-15 && secs(t) < 60.0,
        format!(
            "max(search - bound) = {worst_excess:.3e} (tol 1e-9); analytic attainment gap {worst_attain:.3e}; {:.3} s (limit 60 s)",
            secs(t)
        ),
    )
}

fn criterion_4() -> Verdict {
    let cases = [(0.0, 0.5), (0.5, 0.5), (0.3, 0.8), (0.9, 0.1)];
    let mut lines = Vec::new();
    let mut all = true;
    for (q, eta1) in cases {
        let r = search_nc_max(q, eta1, 1.0 - eta1, false, None, 1000).unwrap();
        let witness = OnticModel2::new(1.0, 0.0, 1.0, 0.0).unwrap();
        let at_witness = d_op_model(&witness, q, eta1, 1.0 - eta1).unwrap();
        let ok = (r.max_d_op - 1.0).abs() <= 1e-9 && at_witness == 1.0;
        all &= ok;
        lines.push(format!(
            "q={q} eta1={eta1}: search max {:.9} at (t,e)=({:.6},{:.6}), witness t=e=1 gives {at_witness}",
            r.max_d_op, r.model.t, r.model.e
        ));
    }
    verdict(all, lines.join("; "))
}

fn criterion_5() -> Verdict {
    let mut worst = 0.0f64;
    for k in 0..100 {
        let c = 0.5 * k as f64 / 99.0;
        worst = worst.max(quantum_saturation(c).unwrap().gap.abs());
    }
    verdict(
        worst <= 1e-12,
        format!("max |gap| {worst:.3e} over 100 values of c in [0, 1/2]"),
    )
}

fn criterion_6() -> Verdict {
    let mut rng = stream_rng(6, 0);
    let mut worst_at = 0.0f64;
    let mut worst_above = f64::INFINITY;
    let mut tested = 0;
    while tested < 1000 {
        let ens = random_ensemble(&mut rng);
        let g = ens.overlap_sq();
        if g <= 0.0 || g >= 1.0 {
            continue;
        }
        tested += 1;
        let c = ens.eta_min();
        let d = d_closed_form(ens.eta1(), ens.eta2(), g).unwrap();
        let qs = q_star(c, d).unwrap();
        worst_at = worst_at.max((direct_bound(qs, c).unwrap() - d).abs());
        for k in 1..50 {
            let q = qs + (1.0 - qs) * k as f64 / 50.0;
            worst_above = worst_above.min(direct_bound(q, c).unwrap() - d);
        }
    }
    verdict(
        worst_at <= 1e-12 && worst_above >= 0.0,
        format!("max |bound(q*) - D| {worst_at:.3e}; min over q > q* of bound - D = {worst_above:.3e}"),
    )
}

fn criterion_7() -> Verdict {
    let mut rng = stream_rng(7, 0);
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let sc = haar_scenario(&mut rng);
        for x in 0..2 {
            worst = worst.max((separation_weighted(&sc, x).unwrap() - steering_vector(&sc, x).norm()).abs());
        }
    }
    verdict(
        worst < 1e-10,
        format!("max |R̃ - |r|| = {worst:.3e} over 10^4 scenarios"),
    )
}

fn criterion_8() -> Verdict {
    let start = Instant::now();
    let mut rng = stream_rng(8, 0);
    let mut worst = f64::NEG_INFINITY;
    let mut worst_gap_nonorth = 0.0f64;
    for _ in 0..1000 {
        let sc = haar_scenario(&mut rng);
        let s = maximize_chsh(&sc, 1e-8).s_max;
        let bound = chsh_bound(&sc).unwrap();
        worst = worst.max(s - bound);
        worst_gap_nonorth = worst_gap_nonorth.max(bound - s);
    }
    let phi = conditional_from_bipartite(&TwoQubitPure::phi_plus(), [Vector3::z(), Vector3::x()]).unwrap();
    let s_phi = maximize_chsh(&phi, 1e-8).s_max;
    let r = [
        separation_weighted(&phi, 0).unwrap(),
        separation_weighted(&phi, 1).unwrap(),
    ];
    let t = start.elapsed();
    let pass = worst <= 1e-6
        && (s_phi - 2.0 * 2f64.sqrt()).abs() <= 1e-6
        && r.iter().all(|v| (v - 1.0).abs() <= 1e-10)
        && secs(t) < 120.0;
    verdict(
        pass,
        format!(
            "max(s_max - bound) = {worst:.3e} (tol 1e-6), largest observed slack {worst_gap_nonorth:.3e}; \
             Phi+ s_max = {s_phi:.12}, R̃ = ({:.12}, {:.12}); {:.2} s (limit 120 s)",
            r[0],
            r[1],
            secs(t)
        ),
    )
}

fn criterion_9() -> Verdict {
    let mut rng = stream_rng(9, 0);
    let mut violations = 0;
    for _ in 0..10_000 {
        let mut pair = || {
            let pi = rng.random_range(0.001..0.999);
            ConditionalPair::new(pi, 1.0 - pi, unit(&mut rng), unit(&mut rng)).unwrap()
        };
        let sc = ConditionalScenario::new(pair(), pair());
        for x in 0..2 {
            if !lemma3_check(&sc, x).unwrap().holds {
                violations += 1;
            }
        }
    }
    let threshold = 0.5 * (1.0 + FRAC_1_SQRT_2);
    let mut below_violating = Vec::new();
    let mut onset = None;
    for k in 0..=500 {
        let d = 0.5 + k as f64 * 1e-3;
        let sc = ConditionalScenario::symmetric_discriminability(d).unwrap();
        let s = maximize_chsh(&sc, 1e-8).s_max;
        if s > 2.0 + 1e-9 {
            if d <= threshold {
                below_violating.push(d);
            }
            onset.get_or_insert(d);
        }
    }
    let onset_ok = onset.is_some_and(|d| d > threshold && d - threshold <= 1e-3);
    verdict(
        violations == 0 && below_violating.is_empty() && onset_ok,
        format!(
            "{violations} Lemma violations in 2x10^4 checks; first violating D = {:?} vs threshold {threshold:.6}; \
             violations at or below threshold: {below_violating:?}",
            onset
        ),
    )
}

fn sample_report(seed: u64) -> (Vec<u8>, Report, bool) {
    let seed = seed.to_string();
    let cfg = RunConfig::new(
        CommandKind::Sample,
        &[("samples", "1000000"), ("runs", "100"), ("seed", seed.as_str())],
    )
    .unwrap();
    let outcome = run(&cfg).unwrap();
    let bytes = outcome.report.render(Format::Csv).unwrap();
    (bytes, outcome.report, outcome.failed)
}

fn criterion_10() -> Verdict {
    let (a, report, failed) = sample_report(10);
    let (b, _, _) = sample_report(10);
    let col = report.column("covered").unwrap();
    let covered = report.rows.iter().filter(|r| r[col] == Cell::Bool(true)).count();
    verdict(
        covered >= 99 && report.rows.len() == 100 && a == b && !failed,
        format!(
            "{covered}/{} runs inside the 3σ envelope at n=10^6; repeated seed byte-identical: {}",
            report.rows.len(),
            a == b
        ),
    )
}

fn main() {
    if std::env::args().any(|a| a == "--list") {
        return;
    }
    let criteria: [Criterion; 10] = [
        ("score equivalence", criterion_1),
        ("equal-prior guessing identity", criterion_2),
        ("sharp-test bound", criterion_3),
        ("free-model maximum equals 1", criterion_4),
        ("quantum saturation", criterion_5),
        ("q* consistency", criterion_6),
        ("separation equals steering norm", criterion_7),
        ("CHSH below separation bound", criterion_8),
        ("separation vs discriminability and threshold", criterion_9),
        ("Monte Carlo coverage and determinism", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let v = f();
        if !v.pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {}: {name}: {}",
            i + 1,
            if v.pass { "PASS" } else { "FAIL" },
            v.detail
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
