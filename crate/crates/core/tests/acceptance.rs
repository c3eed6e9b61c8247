//! Acceptance suite: one test per criterion, each printing a pass line and
//! holding its stated tolerance and runtime budget.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

mod common;

use std::time::{Duration, Instant};

use common::{minimize_phase_bracketed, phase_distance, random_model, rng};
use rand::Rng;
use sqzcool::params::{from_observables, validate, OptomechParams, SqueezerParams};
use sqzcool::{cooling, optimizer, oracle, spectra, sweep};

fn fig1_optomech(g: f64) -> OptomechParams {
    OptomechParams {
        omega_m: 1.0,
        gamma: 2e-7,
        n_th: 1000.0,
        kappa_a_s: 1.0,
        kappa_a_loss: 0.0,
        delta_a: 1.0,
        g,
    }
}

fn no_squeezing() -> SqueezerParams {
    SqueezerParams {
        chi: 0.0,
        kappa_c_s: 0.0,
        kappa_c_loss: 1.0,
        phi: 0.0,
    }
}

/// The figure-1 configuration at purity `xi`: phase from the closed form,
/// bandwidth matched for `s0`.
fn matched_model(s0: f64, xi: f64, g: f64) -> sqzcool::ValidatedModel {
    let phi = optimizer::optimal_phase(1.0, 1.0).unwrap();
    let mb = optimizer::matched_bandwidth(s0, xi, 1.0, 1.0).unwrap();
    let sq = from_observables(s0, mb.r_plus.expect("matched"), xi, phi).unwrap();
    validate(&fig1_optomech(g), &sq).unwrap()
}

fn budget(start: Instant, limit: Duration, label: &str) {
    let elapsed = start.elapsed();
    assert!(
        elapsed <= limit,
        "{label} exceeded its runtime budget: {elapsed:?} > {limit:?}"
    );
}

#[test]
fn criterion_1_worked_example() {
    let start = Instant::now();
    // Q = 5e6 => gamma = 2e-7, N_th = 1000, kappa_a = delta_a = omega_m,
    // G = 0.1, 5 dB squeezing, matched bandwidth
    let s0 = 10f64.powf(-0.5);
    let mb = optimizer::matched_bandwidth(s0, 1.0, 1.0, 1.0).unwrap();
    let r_plus = mb.r_plus.unwrap();
    assert!((r_plus - 3.066).abs() < 5e-3, "matched r_+ = {r_plus}");

    let m = matched_model(s0, 1.0, 0.1);
    let report = cooling::report(&m).unwrap();
    assert!(
        (report.n_st_approx - 0.0100).abs() <= 0.0005,
        "approximate route: {}",
        report.n_st_approx
    );
    assert!(
        (report.n_st - 0.0125).abs() <= 0.0001,
        "exact route: {}",
        report.n_st
    );
    let discrepancy = report.n_st - report.n_st_approx;
    assert!(discrepancy.abs() > 1e-3, "the two routes should visibly differ");

    let bare = validate(&fig1_optomech(0.1), &no_squeezing()).unwrap();
    let bare_report = cooling::report(&bare).unwrap();
    assert!(
        (bare_report.n_st_approx - 0.26).abs() <= 0.005,
        "baseline approximate: {}",
        bare_report.n_st_approx
    );
    assert!((bare_report.n_st - 0.26).abs() <= 0.005);

    budget(start, Duration::from_secs(1), "criterion 1");
    println!(
        "acceptance 1 (worked example): PASS  r_+ = {r_plus:.4}, N_st = {:.6} exact / {:.4} approx (discrepancy {discrepancy:+.4}), baseline {:.4}",
        report.n_st, report.n_st_approx, bare_report.n_st
    );
}

#[test]
fn criterion_2_full_stokes_suppression() {
    let start = Instant::now();
    let m = matched_model(0.3, 1.0, 0.1);
    let stokes = spectra::force_spectrum(-1.0, &m);
    assert!(stokes.abs() <= 1e-10, "s_a(-omega_m) = {stokes}");
    let n_a = cooling::backaction_limit(&m).unwrap();
    assert!(n_a <= 1e-9, "N_a = {n_a}");

    let m8 = matched_model(0.3, 0.8, 0.1);
    let n_a8 = cooling::backaction_limit(&m8).unwrap();
    assert!((n_a8 - 0.05).abs() <= 1e-6, "N_a at xi=0.8: {n_a8}");

    budget(start, Duration::from_secs(1), "criterion 2");
    println!(
        "acceptance 2 (full Stokes suppression): PASS  s_a(-1) = {stokes:.2e}, N_a = {n_a:.2e}, N_a(xi=0.8) = {n_a8:.8}"
    );
}

#[test]
fn criterion_3_cooling_rate_invariance() {
    let start = Instant::now();
    let mut r = rng(101);
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let m = random_model(&mut r);
        let closed = cooling::cooling_rate(&m).unwrap();
        let g2 = m.g() * m.g();
        let spectral =
            g2 * (spectra::force_spectrum(1.0, &m) - spectra::force_spectrum(-1.0, &m));
        if closed != 0.0 {
            worst = worst.max((spectral - closed).abs() / closed.abs());
        }
        // independence from the squeezer: bit-identical to the bare rate
        let bare = validate(m.optomech(), &no_squeezing()).unwrap();
        assert_eq!(closed.to_bits(), cooling::cooling_rate(&bare).unwrap().to_bits());
    }
    assert!(worst <= 1e-10, "worst relative route disagreement: {worst:.3e}");
    budget(start, Duration::from_secs(10), "criterion 3");
    println!(
        "acceptance 3 (cooling-rate invariance, 1e4 models): PASS  worst relative deviation {worst:.3e}"
    );
}

#[test]
fn criterion_4_purity_identity() {
    let start = Instant::now();
    let mut r = rng(102);
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let kappa_c: f64 = r.gen_range(0.2..20.0);
        let chi = r.gen_range(0.0..0.95) * kappa_c;
        let omega: f64 = r.gen_range(-5.0..5.0);
        let om = fig1_optomech(0.1);
        let pure = validate(
            &om,
            &SqueezerParams {
                chi,
                kappa_c_s: kappa_c,
                kappa_c_loss: 0.0,
                phi: 0.0,
            },
        )
        .unwrap();
        let nt = spectra::n_tilde(omega, &pure);
        let mt = spectra::m_tilde(omega, &pure);
        if mt > 0.0 {
            worst = worst.max((mt * mt - nt * (nt + 1.0)).abs() / (mt * mt));
        }

        let xi: f64 = r.gen_range(0.01..1.0);
        let kappa_c_s = xi * kappa_c;
        let lossy = validate(
            &om,
            &SqueezerParams {
                chi,
                kappa_c_s,
                kappa_c_loss: kappa_c - kappa_c_s,
                phi: 0.0,
            },
        )
        .unwrap();
        let nt = spectra::n_tilde(omega, &lossy);
        let mt = spectra::m_tilde(omega, &lossy);
        assert!(mt * mt <= nt * (nt + 1.0) + 1e-12 * (mt * mt).max(1.0));
    }
    assert!(worst <= 1e-12, "worst purity-identity deviation: {worst:.3e}");
    budget(start, Duration::from_secs(5), "criterion 4");
    println!("acceptance 4 (purity identity, 1e4 draws): PASS  worst relative deviation {worst:.3e}");
}

#[test]
fn criterion_5_oracle_equivalence() {
    let start = Instant::now();

    // (a) zero-coupling force spectrum: oracle vs closed form on 101
    // frequencies across 100 random models
    let mut r = rng(103);
    let mut worst_a = 0.0f64;
    for _ in 0..100 {
        let m = random_model(&mut r).with_coupling(0.0).unwrap();
        let lg = oracle::build_model(&m).unwrap();
        for k in 0..101 {
            let w = -3.0 + 6.0 * k as f64 / 100.0;
            let o = oracle::oracle_force_spectrum(w, &lg).unwrap();
            let a = spectra::force_spectrum(w, &m);
            let err = (o - a).abs() / (a.abs() + 1e-12);
            worst_a = worst_a.max(err);
        }
    }
    assert!(worst_a <= 1e-6, "worst spectrum error {worst_a:.3e}");

    // (b) steady occupancy: the squeezed configuration at weak coupling and
    // the no-squeezing baseline at G = 0.1 (where the analytic occupancy is
    // not vanishingly small), plus the quadratic error scaling
    let mut rel = Vec::new();
    for g in [0.02, 0.01] {
        let m = matched_model(0.3, 1.0, g);
        let analytic = cooling::steady_state(&m).unwrap();
        let res = oracle::solve_steady_state(&oracle::build_model(&m).unwrap()).unwrap();
        rel.push((res.phonon_number - analytic).abs() / analytic);
    }
    assert!(rel[1] <= 0.03, "G = 0.01 relative error {:.3e}", rel[1]);
    assert!(
        rel[1] <= rel[0] / 3.0,
        "halving G did not shrink the error 3x: {:.3e} -> {:.3e}",
        rel[0],
        rel[1]
    );
    let bare = validate(&fig1_optomech(0.1), &no_squeezing()).unwrap();
    let analytic = cooling::steady_state(&bare).unwrap();
    let res = oracle::solve_steady_state(&oracle::build_model(&bare).unwrap()).unwrap();
    let rel_bare = (res.phonon_number - analytic).abs() / analytic;
    assert!(rel_bare <= 0.10, "G = 0.1 baseline relative error {rel_bare:.3e}");

    budget(start, Duration::from_secs(30), "criterion 5");
    println!(
        "acceptance 5 (oracle equivalence): PASS  spectra worst {worst_a:.2e}; N_st rel err {:.2e} (G=0.01) / {:.2e} (G=0.02) / {rel_bare:.2e} (G=0.1, xi=0)",
        rel[1], rel[0]
    );
}

#[test]
fn criterion_6_figure_sweeps() {
    let start = Instant::now();
    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    let out_a = sweep::write_figures(dir_a.path(), sweep::fig1_optomech()).unwrap();
    let out_b = sweep::write_figures(dir_b.path(), sweep::fig1_optomech()).unwrap();
    for ((pa, _), (pb, _)) in out_a.iter().zip(out_b.iter()) {
        let a = std::fs::read(pa).unwrap();
        let b = std::fs::read(pb).unwrap();
        assert_eq!(a, b, "{} differs across runs", pa.display());
    }

    // fig1b: pi-periodic minima at phi_opt +- k pi with the expected depths
    let result = sweep::run_sweep(&sweep::fig1b_spec(sweep::fig1_optomech())).unwrap();
    let trace: Vec<(f64, f64)> = result
        .records
        .iter()
        .filter(|rec| rec.segment == "matched" && rec.xi == 1.0)
        .map(|rec| (rec.axes[0], rec.n_st))
        .collect();
    assert_eq!(trace.len(), 721);
    let mut minima = Vec::new();
    for i in 1..trace.len() - 1 {
        if trace[i].1 < trace[i - 1].1 && trace[i].1 <= trace[i + 1].1 {
            minima.push(trace[i]);
        }
    }
    assert_eq!(minima.len(), 2, "expected two interior minima, got {minima:?}");
    let step = trace[1].0 - trace[0].0;
    let spacing = minima[1].0 - minima[0].0;
    assert!(
        (spacing - std::f64::consts::PI).abs() <= step,
        "minima spacing {spacing} is not pi"
    );
    let phi_opt = optimizer::optimal_phase(1.0, 1.0).unwrap();
    for (phi, n_st) in &minima {
        assert!(phase_distance(*phi, phi_opt) <= step);
        assert!((n_st - 0.0125).abs() <= 1e-4, "minimum value {n_st}");
    }
    let baseline: Vec<f64> = result
        .records
        .iter()
        .filter(|rec| rec.segment == "baseline")
        .map(|rec| rec.n_st)
        .collect();
    assert_eq!(baseline.len(), 721);
    let (lo, hi) = baseline
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    assert!(hi - lo <= 1e-12, "baseline is not flat: spread {}", hi - lo);
    assert!((lo - 0.2625).abs() <= 1e-4);

    budget(start, Duration::from_secs(300), "criterion 6");
    println!(
        "acceptance 6 (figure sweeps): PASS  byte-identical across runs; fig1b minima at {:.5} and {:.5} (value {:.6}), baseline {:.6}",
        minima[0].0, minima[1].0, minima[0].1, lo
    );
}

#[test]
fn criterion_7_optimal_phase_verification() {
    let start = Instant::now();
    let mut r = rng(104);
    let mut worst = 0.0f64;
    let mut checked = 0;
    while checked < 1000 {
        let da: f64 = r.gen_range(0.1..3.0);
        let ka: f64 = r.gen_range(0.05..5.0);
        let xi: f64 = r.gen_range(0.5..=1.0);
        let Ok(mb_probe) = optimizer::matched_bandwidth(0.99, xi, da, ka) else {
            continue;
        };
        let lo = (1.0 - xi) + 1e-4;
        let hi = mb_probe.s0_threshold - 1e-4;
        if hi <= lo {
            continue;
        }
        let s0 = lo + (hi - lo) * r.gen_range(0.1..0.9);
        let Ok(mb) = optimizer::matched_bandwidth(s0, xi, da, ka) else {
            continue;
        };
        let Some(r_plus) = mb.r_plus else { continue };
        let sq = from_observables(s0, r_plus, xi, 0.0).unwrap();
        let m = validate(&fig1_optomech(0.1), &sq)
            .unwrap()
            .with_coupling(0.1)
            .unwrap();
        let mut om = *m.optomech();
        om.delta_a = da;
        om.kappa_a_s = ka;
        let m = validate(&om, m.squeezer()).unwrap();

        let numeric =
            minimize_phase_bracketed(|phi| spectra::force_spectrum(-1.0, &m.with_phase(phi)));
        let closed = optimizer::optimal_phase(da, ka).unwrap();
        worst = worst.max(phase_distance(numeric, closed));
        checked += 1;
    }
    assert!(worst <= 1e-8, "worst phase deviation {worst:.3e} rad");
    budget(start, Duration::from_secs(10), "criterion 7");
    println!(
        "acceptance 7 (optimal phase, 1e3 geometries): PASS  worst deviation {worst:.2e} rad"
    );
}

#[test]
fn criterion_8_feasibility_boundary() {
    let start = Instant::now();
    let phi = optimizer::optimal_phase(1.0, 1.0).unwrap();
    for xi in [1.0, 0.8] {
        let threshold = optimizer::matched_bandwidth(0.99, xi, 1.0, 1.0)
            .unwrap()
            .s0_threshold;
        let mut diffs = Vec::new();
        for k in 1..=50 {
            // approach the threshold geometrically from 1e-2 down to ~1e-8
            let delta = 10f64.powf(-1.0 - 7.0 * k as f64 / 50.0);
            let below = threshold - delta;
            let above = threshold + delta;
            let r_plus = optimizer::matched_bandwidth(below, xi, 1.0, 1.0)
                .unwrap()
                .r_plus
                .expect("below threshold is matched");
            let sq = from_observables(below, r_plus, xi, phi).unwrap();
            let m = validate(&fig1_optomech(0.1), &sq).unwrap();
            let matched_na = cooling::backaction_limit(&m).unwrap();
            let broadband_na =
                optimizer::infinite_bandwidth_backaction(above, xi, 1.0, 1.0).unwrap();
            diffs.push((matched_na - broadband_na).abs());
        }
        let tail_worst = diffs[25..].iter().cloned().fold(0.0f64, f64::max);
        assert!(
            tail_worst <= 1e-6,
            "xi = {xi}: branches stay {tail_worst:.3e} apart near the threshold"
        );
        assert!(
            diffs[49] <= diffs[0],
            "xi = {xi}: branch gap does not shrink toward the threshold"
        );
    }
    budget(start, Duration::from_secs(10), "criterion 8");
    println!("acceptance 8 (feasibility boundary): PASS  branch gap < 1e-6 on the approach tail");
}
