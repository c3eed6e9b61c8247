//! Shared helpers for the integration and acceptance suites.

#![allow(dead_code)]

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sqzcool::params::{validate, OptomechParams, SqueezerParams, ValidatedModel};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random valid model spanning the regimes the formulas cover: arbitrary
/// squeezing phase, split loss channels, red detuning.
pub fn random_model(rng: &mut ChaCha8Rng) -> ValidatedModel {
    let kappa_c: f64 = rng.gen_range(0.2..20.0);
    // keep a margin below threshold so squeezing magnitudes stay floating-point friendly
    let chi = rng.gen_range(0.0..0.95) * kappa_c;
    let kcs_frac: f64 = rng.gen_range(0.0..=1.0);
    let optomech = OptomechParams {
        omega_m: 1.0,
        gamma: rng.gen_range(1e-7..1e-3),
        n_th: rng.gen_range(0.0..1e4),
        kappa_a_s: rng.gen_range(0.05..5.0),
        kappa_a_loss: rng.gen_range(0.0..2.0),
        delta_a: rng.gen_range(0.1..3.0),
        g: rng.gen_range(0.0..0.3),
    };
    let squeezer = SqueezerParams {
        chi,
        kappa_c_s: kcs_frac * kappa_c,
        kappa_c_loss: (1.0 - kcs_frac) * kappa_c,
        phi: rng.gen_range(0.0..std::f64::consts::PI),
    };
    validate(&optomech, &squeezer).expect("random model must validate")
}

/// Distance between two phases under the pi-periodic identification.
pub fn phase_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(std::f64::consts::PI);
    d.min(std::f64::consts::PI - d)
}

/// Bracketed 1-D minimization over the phase circle [0, pi): coarse scan,
/// golden-section refinement, then one parabolic fit to average out the
/// floating-point noise floor near the minimum.
pub fn minimize_phase_bracketed<F: Fn(f64) -> f64>(f: F) -> f64 {
    use std::f64::consts::PI;
    let n = 96;
    let step = PI / n as f64;
    let mut best = (0usize, f64::INFINITY);
    for i in 0..n {
        let v = f(step * i as f64);
        if v < best.1 {
            best = (i, v);
        }
    }
    // golden-section on the (possibly wrapping) enclosing bracket
    let a = step * (best.0 as f64 - 1.0);
    let b = step * (best.0 as f64 + 1.0);
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut lo, mut hi) = (a, b);
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1.rem_euclid(PI));
    let mut f2 = f(x2.rem_euclid(PI));
    while hi - lo > 1e-6 {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1.rem_euclid(PI));
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2.rem_euclid(PI));
        }
    }
    let x0 = 0.5 * (lo + hi);
    let h = 1e-4;
    let (fm, f0, fp) = (
        f((x0 - h).rem_euclid(PI)),
        f(x0.rem_euclid(PI)),
        f((x0 + h).rem_euclid(PI)),
    );
    let denom = fm - 2.0 * f0 + fp;
    let x = if denom > 0.0 {
        x0 + 0.5 * h * (fm - fp) / denom
    } else {
        x0
    };
    x.rem_euclid(PI)
}

/// Composite Simpson quadrature of `f` over `[a, b]` with `n` panels (n even).
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    assert!(n % 2 == 0 && n >= 2);
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + h * i as f64);
    }
    acc * h / 3.0
}
