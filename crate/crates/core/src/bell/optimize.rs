//! Multistart maximization of the CHSH value over Bob's unit settings.

use std::f64::consts::{PI, TAU};

use nalgebra::Vector3;
use rand::Rng;
use rayon::prelude::*;

use super::{chsh_from_steering, steering_vector, BobSettings, ConditionalScenario};
use crate::optimize::periodic_max;
use crate::sampling::stream_rng;

const SCAN_POINTS: usize = 24;
const MAX_SWEEPS: usize = 200;
const TIE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChshMaximum {
    pub s_max: f64,
    pub settings: BobSettings,
    /// `(θ₀, φ₀, θ₁, φ₁)` with `θ ∈ [0, π]`, `φ ∈ [0, 2π)`.
    pub angles: [f64; 4],
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChshOptimizer {
    pub starts: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for ChshOptimizer {
    fn default() -> Self {
        Self {
            starts: 32,
            tol: 1e-8,
            seed: 0,
        }
    }
}

fn direction(theta: f64, phi: f64) -> Vector3<f64> {
    Vector3::new(theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos())
}

/// Maps any `(θ, φ)` to the same direction with `θ ∈ [0, π]`, `φ ∈ [0, 2π)`.
fn canonical(theta: f64, phi: f64) -> (f64, f64) {
    let t = theta.rem_euclid(TAU);
    let (t, p) = if t > PI { (TAU - t, phi + PI) } else { (t, phi) };
    let p = if t == 0.0 || t == PI { 0.0 } else { p.rem_euclid(TAU) };
    (t, p)
}

fn angles_of(v: &Vector3<f64>) -> (f64, f64) {
    let theta = v.z.clamp(-1.0, 1.0).acos();
    canonical(theta, v.y.atan2(v.x))
}

impl ChshOptimizer {
    pub fn new(starts: usize, tol: f64, seed: u64) -> Self {
        Self { starts, tol, seed }
    }

    pub fn maximize(&self, sc: &ConditionalScenario) -> ChshMaximum {
        self.maximize_steering(&steering_vector(sc, 0), &steering_vector(sc, 1))
    }

    /// Maximizes `r₀·(b₀+b₁) + r₁·(b₀−b₁)` over unit `b₀, b₁`.
    pub fn maximize_steering(&self, r0: &Vector3<f64>, r1: &Vector3<f64>) -> ChshMaximum {
        let objective = |a: &[f64; 4]| chsh_from_steering(r0, r1, &direction(a[0], a[1]), &direction(a[2], a[3]));
        let tol = self.tol.max(f64::EPSILON);

        let mut candidates: Vec<ChshMaximum> = (0..self.starts.max(1) as u64)
            .into_par_iter()
            .map(|k| {
                let mut rng = stream_rng(self.seed, k);
                let start = [
                    rng.random::<f64>() * PI,
                    rng.random::<f64>() * TAU,
                    rng.random::<f64>() * PI,
                    rng.random::<f64>() * TAU,
                ];
                finish(coordinate_ascent(&objective, start, tol), &objective)
            })
            .collect();

        if let Some(a) = analytic_alignment(r0, r1) {
            candidates.push(finish(a, &objective));
        }

        candidates.into_iter().reduce(better).expect("at least one start")
    }
}

fn coordinate_ascent(f: &impl Fn(&[f64; 4]) -> f64, start: [f64; 4], tol: f64) -> [f64; 4] {
    let mut a = start;
    let mut value = f(&a);
    for _ in 0..MAX_SWEEPS {
        let before = value;
        for i in 0..4 {
            let (x, fx) = periodic_max(
                |x| {
                    let mut b = a;
                    b[i] = x;
                    f(&b)
                },
                SCAN_POINTS,
                tol,
            );
            if fx >= value {
                a[i] = x;
                value = fx;
            }
        }
        if value - before <= tol * tol {
            break;
        }
    }
    a
}

/// `b₀ ∝ r₀ + r₁`, `b₁ ∝ r₀ − r₁`, available when the steering vectors are
/// orthogonal and nonzero.
fn analytic_alignment(r0: &Vector3<f64>, r1: &Vector3<f64>) -> Option<[f64; 4]> {
    let (n0, n1) = (r0.norm(), r1.norm());
    if n0 == 0.0 || n1 == 0.0 || (r0.dot(r1) / (n0 * n1)).abs() >= 1e-8 {
        return None;
    }
    let (t0, p0) = angles_of(&(r0 + r1).normalize());
    let (t1, p1) = angles_of(&(r0 - r1).normalize());
    Some([t0, p0, t1, p1])
}

fn finish(a: [f64; 4], f: &impl Fn(&[f64; 4]) -> f64) -> ChshMaximum {
    let (t0, p0) = canonical(a[0], a[1]);
    let (t1, p1) = canonical(a[2], a[3]);
    let angles = [t0, p0, t1, p1];
    ChshMaximum {
        s_max: f(&angles),
        settings: BobSettings {
            b0: direction(t0, p0),
            b1: direction(t1, p1),
        },
        angles,
    }
}

fn better(a: ChshMaximum, b: ChshMaximum) -> ChshMaximum {
    if b.s_max > a.s_max + TIE_TOL {
        b
    } else if a.s_max > b.s_max + TIE_TOL {
        a
    } else if b.angles.partial_cmp(&a.angles) == Some(std::cmp::Ordering::Less) {
        b
    } else {
        a
    }
}

/// [`ChshOptimizer`] with 32 starts and seed 0 at tolerance `tol`.
pub fn maximize_chsh(sc: &ConditionalScenario, tol: f64) -> ChshMaximum {
    ChshOptimizer {
        tol,
        ..ChshOptimizer::default()
    }
    .maximize(sc)
}
