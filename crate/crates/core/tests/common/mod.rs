#![allow(dead_code)]

use discrimlab_core::bell::{conditional_from_bipartite, ConditionalScenario, TwoQubitPure};
use discrimlab_core::TwoStateEnsemble;
use nalgebra::Vector3;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha20Rng {
    discrimlab_core::sampling::stream_rng(seed, 0)
}

pub fn unit_vector<R: Rng>(rng: &mut R) -> Vector3<f64> {
    loop {
        let v = Vector3::new(
            rng.sample::<f64, _>(StandardNormal),
            rng.sample::<f64, _>(StandardNormal),
            rng.sample::<f64, _>(StandardNormal),
        );
        let n = v.norm();
        if n > 1e-6 {
            return v / n;
        }
    }
}

/// Uniform in the Bloch ball, with one draw in eight placed on the surface.
pub fn bloch_vector<R: Rng>(rng: &mut R) -> Vector3<f64> {
    let u = unit_vector(rng);
    if rng.random_range(0..8) == 0 {
        u
    } else {
        u * rng.random::<f64>().cbrt()
    }
}

pub fn ensemble<R: Rng>(rng: &mut R) -> TwoStateEnsemble {
    let eta1 = rng.random_range(0.01..=0.99);
    let g: f64 = rng.random();
    let phase = rng.random_range(0.0..std::f64::consts::TAU);
    TwoStateEnsemble::new(eta1, 1.0 - eta1, Complex64::from_polar(g.sqrt(), phase)).unwrap()
}

pub fn bipartite_scenario<R: Rng>(rng: &mut R) -> (TwoQubitPure, [Vector3<f64>; 2], ConditionalScenario) {
    loop {
        let psi = TwoQubitPure::haar_random(rng);
        let dirs = [unit_vector(rng), unit_vector(rng)];
        if let Ok(sc) = conditional_from_bipartite(&psi, dirs) {
            return (psi, dirs, sc);
        }
    }
}
