#![allow(dead_code)]

use std::sync::OnceLock;

use revolv_core::counterexamples::{build_bonnesen_pair, build_klee_body, BonnesenConfig, BonnesenPair, KleeConfig};
use revolv_core::BodyOfRevolution;

pub fn pair6() -> &'static BonnesenPair {
    static PAIR: OnceLock<BonnesenPair> = OnceLock::new();
    PAIR.get_or_init(|| build_bonnesen_pair(&BonnesenConfig::new(6)).expect("pair builds"))
}

pub fn klee() -> BodyOfRevolution {
    build_klee_body(&KleeConfig::default()).expect("klee builds")
}

/// Ball, Klee body and the two perturbed bodies.
pub fn test_bodies() -> Vec<(&'static str, BodyOfRevolution)> {
    vec![
        ("ball", BodyOfRevolution::ball(4).unwrap()),
        ("klee", klee()),
        ("plus", pair6().plus.clone()),
        ("minus", pair6().minus.clone()),
    ]
}

/// `v_n` from `v_0 = 1`, `v_1 = 2`, `v_n = 2π/n · v_{n−2}`.
pub fn ball_volume(n: usize) -> f64 {
    match n {
        0 => 1.0,
        1 => 2.0,
        _ => 2.0 * std::f64::consts::PI / n as f64 * ball_volume(n - 2),
    }
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}
