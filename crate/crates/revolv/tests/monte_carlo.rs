//! Sampling estimates of sections and shadows, independent of the
//! quadrature-based formulas.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
mod common;

use common::mc;
use revolv_core::counterexamples::{build_bonnesen_pair, build_klee_body, BonnesenConfig, KleeConfig};
use revolv_core::functionals::projection;
use revolv_core::BodyOfRevolution;

const SAMPLES: usize = 200_000;

fn bodies() -> Vec<BodyOfRevolution> {
    let pair = build_bonnesen_pair(&BonnesenConfig::new(6)).unwrap();
    vec![
        BodyOfRevolution::ball(4).unwrap().with_scale(1.5).unwrap(),
        build_klee_body(&KleeConfig::default()).unwrap(),
        pair.plus,
        pair.minus,
    ]
}

#[test]
fn sections_match_sampling() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for body in bodies() {
        for _ in 0..3 {
            let s = rng.gen_range(0.0..5.0);
            let range = body.intercept_range(s);
            let h = range.lower() + rng.gen_range(0.2..0.8) * range.width();
            let exact = body.section_volume(s, h).unwrap();
            let est = mc::section_volume(&body, s, h, SAMPLES, &mut rng);
            assert!(
                (est - exact).abs() <= 0.02 * exact,
                "d={} s={s} h={h}: {est} vs {exact}",
                body.dim()
            );
        }
    }
}

#[test]
fn shadows_match_sampling() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for body in bodies() {
        let s = rng.gen_range(0.0..5.0);
        let exact = projection(&body, s).unwrap();
        let est = mc::projection(&body, s, SAMPLES / 4, &mut rng);
        assert!(
            (est - exact).abs() <= 0.03 * exact,
            "d={} s={s}: {est} vs {exact}",
            body.dim()
        );
    }
}
