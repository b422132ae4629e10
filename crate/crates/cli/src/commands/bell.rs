use std::f64::consts::FRAC_PI_4;
use std::path::{Path, PathBuf};

use discrimlab_core::bell::{
    chsh, chsh_bound, conditional_from_bipartite, discriminability_bound, lemma3_check, separation_weighted,
    BobSettings, ChshOptimizer, ConditionalPair, ConditionalScenario, TwoQubitPure,
};
use discrimlab_core::Error as CoreError;
use nalgebra::Vector3;
use num_complex::Complex64;
use serde_json::Value;

use super::{par_rows, row_seed};
use crate::config::RunConfig;
use crate::error::{config_err, CliError, Result};
use crate::report::{Cell, Report};

/// Slack on every CHSH-versus-bound comparison.
pub const BELL_TOL: f64 = 1e-6;

const VIOLATION_SLACK: f64 = 1e-9;

const VERIFY_COLUMNS: [&str; 22] = [
    "source",
    "theta",
    "r_tilde0",
    "r_tilde1",
    "bound",
    "s_max",
    "margin",
    "b0_x",
    "b0_y",
    "b0_z",
    "b1_x",
    "b1_y",
    "b1_z",
    "s_given",
    "d0",
    "d1",
    "lemma3_0",
    "lemma3_1",
    "tol",
    "pass",
    "violation",
    "error",
];

const SYMMETRIC_COLUMNS: [&str; 11] = [
    "d",
    "bound_d",
    "r_tilde0",
    "r_tilde1",
    "bound",
    "s_max",
    "margin",
    "violation",
    "threshold",
    "tol",
    "pass",
];

/// One scenario to verify: Bob's conditionals plus optional fixed settings.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioInput {
    pub source: String,
    pub theta: Option<f64>,
    pub scenario: std::result::Result<ConditionalScenario, CoreError>,
    pub bob: Option<BobSettings>,
}

impl ScenarioInput {
    pub fn partially_entangled(theta: f64) -> Self {
        let psi = TwoQubitPure::partially_entangled(theta);
        Self {
            source: "partially_entangled".into(),
            theta: Some(theta),
            scenario: conditional_from_bipartite(&psi, [Vector3::z(), Vector3::x()]),
            bob: None,
        }
    }
}

fn optimizer(cfg: &RunConfig, row: u64) -> Result<ChshOptimizer> {
    let starts = cfg.params.usize("starts", 32)?;
    let tol = cfg.params.f64("tol", 1e-8)?;
    if starts < 1 || tol <= 0.0 {
        return Err(config_err("starts must be positive and tol > 0"));
    }
    Ok(ChshOptimizer::new(starts, tol, row_seed(cfg.seed, row)))
}

fn verify_row(input: &ScenarioInput, opt: &ChshOptimizer) -> Result<Vec<Cell>> {
    let mut row = vec![Cell::from(input.source.as_str()), input.theta.into()];
    let sc = match &input.scenario {
        Ok(sc) => sc,
        Err(e @ CoreError::DegenerateConditioning { .. }) => {
            row.resize(VERIFY_COLUMNS.len() - 1, Cell::Null);
            row.push(e.to_string().into());
            return Ok(row);
        }
        Err(e) => return Err(e.clone().into()),
    };
    let r0 = separation_weighted(sc, 0)?;
    let r1 = separation_weighted(sc, 1)?;
    let bound = chsh_bound(sc)?;
    let best = opt.maximize(sc);
    let margin = bound - best.s_max;
    let s_given = input.bob.map(|b| chsh(sc, &b));
    let lemma = |x| match lemma3_check(sc, x) {
        Ok(c) => Ok(Some(c)),
        Err(CoreError::MixedConditionalStates { .. }) => Ok(None),
        Err(e) => Err(e),
    };
    let (l0, l1) = (lemma(0)?, lemma(1)?);
    let pass = margin >= -BELL_TOL
        && s_given.is_none_or(|s| s <= bound + BELL_TOL)
        && [l0, l1].iter().flatten().all(|c| c.holds);
    let (b0, b1) = (best.settings.b0, best.settings.b1);
    row.extend([
        r0.into(),
        r1.into(),
        bound.into(),
        best.s_max.into(),
        margin.into(),
        b0.x.into(),
        b0.y.into(),
        b0.z.into(),
        b1.x.into(),
        b1.y.into(),
        b1.z.into(),
        s_given.into(),
        l0.map(|c| c.discriminability).into(),
        l1.map(|c| c.discriminability).into(),
        l0.map(|c| c.holds).into(),
        l1.map(|c| c.holds).into(),
        BELL_TOL.into(),
        pass.into(),
        (best.s_max > 2.0 + VIOLATION_SLACK).into(),
        Cell::Null,
    ]);
    Ok(row)
}

fn verify_report(cfg: &RunConfig, inputs: &[ScenarioInput]) -> Result<Report> {
    let rows = par_rows(inputs, |row, input| verify_row(input, &optimizer(cfg, row)?))?;
    Ok(Report::from_rows(&VERIFY_COLUMNS, rows))
}

pub(super) fn run_verify(cfg: &RunConfig) -> Result<Report> {
    let inputs = match cfg.params.get("scenario") {
        Some(path) => {
            if cfg.params.contains("theta") {
                return Err(config_err("give either theta or scenario, not both"));
            }
            read_scenarios(Path::new(path))?
        }
        None => cfg
            .params
            .f64_list("theta", &[FRAC_PI_4])?
            .into_iter()
            .map(ScenarioInput::partially_entangled)
            .collect(),
    };
    verify_report(cfg, &inputs)
}

pub(super) fn run_sweep(cfg: &RunConfig) -> Result<Report> {
    match cfg.params.get("sweep").unwrap_or("theta") {
        "theta" => {
            let points = cfg.params.usize("points", 64)?.max(1);
            let inputs: Vec<_> = (1..=points)
                .map(|k| ScenarioInput::partially_entangled(FRAC_PI_4 * k as f64 / points as f64))
                .collect();
            verify_report(cfg, &inputs)
        }
        "symmetric-d" => run_symmetric(cfg),
        other => Err(config_err(format!("sweep must be theta or symmetric-d, got `{other}`"))),
    }
}

/// Smallest per-setting discriminability at which CHSH violation is possible.
pub fn violation_threshold() -> f64 {
    0.5 * (1.0 + std::f64::consts::FRAC_1_SQRT_2)
}

fn run_symmetric(cfg: &RunConfig) -> Result<Report> {
    let points = cfg.params.usize("points", 501)?.max(2);
    let ds: Vec<f64> = (0..points)
        .map(|k| 0.5 + 0.5 * k as f64 / (points - 1) as f64)
        .collect();
    let threshold = violation_threshold();
    let rows = par_rows(&ds, |row, &d| -> Result<Vec<Cell>> {
        let sc = ConditionalScenario::symmetric_discriminability(d)?;
        let bound_d = discriminability_bound(d, d)?;
        let bound = chsh_bound(&sc)?;
        let s_max = optimizer(cfg, row)?.maximize(&sc).s_max;
        let margin = bound - s_max;
        let violation = s_max > 2.0 + VIOLATION_SLACK;
        let pass = margin >= -BELL_TOL && s_max <= bound_d + BELL_TOL && (!violation || d > threshold);
        Ok(vec![
            d.into(),
            bound_d.into(),
            separation_weighted(&sc, 0)?.into(),
            separation_weighted(&sc, 1)?.into(),
            bound.into(),
            s_max.into(),
            margin.into(),
            violation.into(),
            threshold.into(),
            BELL_TOL.into(),
            pass.into(),
        ])
    })?;
    Ok(Report::from_rows(&SYMMETRIC_COLUMNS, rows))
}

/// Reads one scenario record or an array of them.
///
/// A record holds either `amplitudes` (four `[re, im]` pairs, Alice's qubit
/// first) with optional `alice_dirs`, or a `table` of two
/// `{pi_plus, pi_minus, s_plus, s_minus}` entries; `bob_dirs` is optional.
pub fn read_scenarios(path: &Path) -> Result<Vec<ScenarioInput>> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_scenarios(path, &text)
}

pub fn parse_scenarios(path: &Path, text: &str) -> Result<Vec<ScenarioInput>> {
    let bad = |message: String| CliError::Scenario {
        path: PathBuf::from(path),
        message,
    };
    let value: Value = serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
    let records = match value {
        Value::Array(v) => v,
        obj @ Value::Object(_) => vec![obj],
        _ => return Err(bad("expected an object or an array of objects".into())),
    };
    records
        .iter()
        .enumerate()
        .map(|(i, rec)| parse_record(rec).map_err(|m| bad(format!("record {i}: {m}"))))
        .collect()
}

fn number(v: &Value, what: &str) -> std::result::Result<f64, String> {
    v.as_f64().ok_or_else(|| format!("{what} must be a number"))
}

fn vector(v: &Value, what: &str) -> std::result::Result<Vector3<f64>, String> {
    match v.as_array().map(Vec::as_slice) {
        Some([x, y, z]) => Ok(Vector3::new(number(x, what)?, number(y, what)?, number(z, what)?)),
        _ => Err(format!("{what} must be a 3-vector")),
    }
}

fn vector_pair(v: &Value, what: &str) -> std::result::Result<[Vector3<f64>; 2], String> {
    match v.as_array().map(Vec::as_slice) {
        Some([a, b]) => Ok([vector(a, what)?, vector(b, what)?]),
        _ => Err(format!("{what} must hold two 3-vectors")),
    }
}

fn parse_record(rec: &Value) -> std::result::Result<ScenarioInput, String> {
    let obj = rec.as_object().ok_or("a record must be an object")?;
    for key in obj.keys() {
        if !["amplitudes", "table", "alice_dirs", "bob_dirs"].contains(&key.as_str()) {
            return Err(format!("unknown field `{key}`"));
        }
    }
    let bob = obj
        .get("bob_dirs")
        .map(|v| {
            let [b0, b1] = vector_pair(v, "bob_dirs")?;
            BobSettings::new(b0, b1).map_err(|e| e.to_string())
        })
        .transpose()?;
    let (source, scenario) = match (obj.get("amplitudes"), obj.get("table")) {
        (Some(amps), None) => {
            let list = amps
                .as_array()
                .filter(|a| a.len() == 4)
                .ok_or("amplitudes must hold four entries")?;
            let mut c = [Complex64::from(0.0); 4];
            for (slot, entry) in c.iter_mut().zip(list) {
                *slot = match entry {
                    Value::Array(p) if p.len() == 2 => {
                        Complex64::new(number(&p[0], "amplitude")?, number(&p[1], "amplitude")?)
                    }
                    other => Complex64::from(number(other, "amplitude")?),
                };
            }
            let psi = TwoQubitPure::new(c).map_err(|e| e.to_string())?;
            let dirs = match obj.get("alice_dirs") {
                Some(v) => vector_pair(v, "alice_dirs")?,
                None => [Vector3::z(), Vector3::x()],
            };
            ("amplitudes", conditional_from_bipartite(&psi, dirs))
        }
        (None, Some(table)) => {
            if obj.contains_key("alice_dirs") {
                return Err("alice_dirs applies only to amplitudes".into());
            }
            let entries = table
                .as_array()
                .filter(|t| t.len() == 2)
                .ok_or("table must hold two settings")?;
            let mut pairs = Vec::with_capacity(2);
            for entry in entries {
                let field = |k: &str| entry.get(k).ok_or_else(|| format!("table entry lacks `{k}`"));
                let pair = ConditionalPair::new(
                    number(field("pi_plus")?, "pi_plus")?,
                    number(field("pi_minus")?, "pi_minus")?,
                    vector(field("s_plus")?, "s_plus")?,
                    vector(field("s_minus")?, "s_minus")?,
                )
                .map_err(|e| e.to_string())?;
                pairs.push(pair);
            }
            ("table", Ok(ConditionalScenario::new(pairs[0], pairs[1])))
        }
        _ => return Err("give exactly one of `amplitudes` or `table`".into()),
    };
    Ok(ScenarioInput {
        source: source.into(),
        theta: None,
        scenario,
        bob,
    })
}
