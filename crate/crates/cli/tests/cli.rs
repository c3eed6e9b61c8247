//! End-to-end CLI behavior: exit codes, output shapes, shared validation.

use std::path::PathBuf;

use sqzcool_cli::{run, EXIT_INFEASIBLE, EXIT_IO, EXIT_OK, EXIT_VALIDATION};

const FIG1: &str = "\
# figure-1 matched configuration, rates in units of omega_m
omega_m = 1.0
gamma = 2e-7
n_th = 1000
kappa_a_s = 1.0
kappa_a_loss = 0.0
delta_a = 1.0
g = 0.1
chi = 0.6209608376408716
kappa_c_s = 2.124968007342215
kappa_c_loss = 0.0
phi = 1.0172219678978514
";

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn sqzcool(args: &[&str]) -> Run {
    let mut argv = vec!["sqzcool".to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(argv, &mut out, &mut err);
    Run {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn write_config(dir: &tempfile::TempDir, text: &str) -> PathBuf {
    let path = dir.path().join("model.cfg");
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn help_lists_every_flag() {
    let top = sqzcool(&["--help"]);
    assert_eq!(top.code, EXIT_OK);
    for sub in ["spectrum", "cool", "optimize", "sweep", "oracle-check", "figures"] {
        assert!(top.stdout.contains(sub), "missing subcommand {sub} in help");
    }
    let cool = sqzcool(&["cool", "--help"]);
    for flag in ["--config", "--set", "--out", "--format"] {
        assert!(cool.stdout.contains(flag), "missing {flag} in cool help");
    }
    let spectrum = sqzcool(&["spectrum", "--help"]);
    assert!(spectrum.stdout.contains("--omega"));
    let oracle = sqzcool(&["oracle-check", "--help"]);
    assert!(oracle.stdout.contains("--g"));
    assert!(oracle.stdout.contains("--dump-matrices"));
    let sweep = sqzcool(&["sweep", "--help"]);
    assert!(sweep.stdout.contains("--kind"));
}

#[test]
fn cool_prints_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, FIG1);
    let r = sqzcool(&["cool", "--config", cfg.to_str().unwrap()]);
    assert_eq!(r.code, EXIT_OK, "stderr: {}", r.stderr);
    assert!(r.stdout.contains("Gamma               = 1.600000e-2"), "{}", r.stdout);
    assert!(r.stdout.contains("N_st (exact)        = 0.012500"));
    assert!(r.stdout.contains("N_st (approx)       = 0.010000"));
    // csv variant has a header and one data row
    let csv = sqzcool(&["cool", "--config", cfg.to_str().unwrap(), "--format", "csv"]);
    let lines: Vec<&str> = csv.stdout.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("a_plus,a_minus,gamma_cool"));
}

#[test]
fn exit_codes_follow_the_table() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, FIG1);

    // 0: success
    assert_eq!(sqzcool(&["cool", "--config", cfg.to_str().unwrap()]).code, EXIT_OK);

    // 1: validation error (above-threshold oscillator), message names it
    let r = sqzcool(&[
        "cool",
        "--config",
        cfg.to_str().unwrap(),
        "--set",
        "squeezer.chi=5.0",
    ]);
    assert_eq!(r.code, EXIT_VALIDATION);
    assert!(r.stderr.contains("threshold"), "stderr: {}", r.stderr);

    // 1: unknown config key
    let bad = write_config(&dir, "gamma = 1e-6\nbogus_key = 1\n");
    let r = sqzcool(&["cool", "--config", bad.to_str().unwrap()]);
    assert_eq!(r.code, EXIT_VALIDATION);
    assert!(r.stderr.contains("unknown key"));

    // 1: bad flags
    assert_eq!(sqzcool(&["cool"]).code, EXIT_VALIDATION);

    // 2: infeasibility as the primary result (S(0) above the threshold)
    let r = sqzcool(&[
        "optimize",
        "--config",
        cfg.to_str().unwrap(),
        "--set",
        "chi=0.05",
        "--set",
        "kappa_c_s=3.0",
    ]);
    assert_eq!(r.code, EXIT_INFEASIBLE, "stderr: {}", r.stderr);
    assert!(r.stdout.contains("infeasible"), "{}", r.stdout);

    // 3: missing config file
    let r = sqzcool(&["cool", "--config", "/nonexistent/nope.cfg"]);
    assert_eq!(r.code, EXIT_IO);
}

#[test]
fn optimize_reports_the_matched_drive() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, FIG1);
    let r = sqzcool(&["optimize", "--config", cfg.to_str().unwrap()]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.stdout.contains("phi_opt             = 1.01722"), "{}", r.stdout);
    assert!(r.stdout.contains("matched r_+         = 2.74593"), "{}", r.stdout);
}

#[test]
fn spectrum_grid_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, FIG1);
    let r = sqzcool(&[
        "spectrum",
        "--config",
        cfg.to_str().unwrap(),
        "--omega",
        "-1:1:5",
        "--format",
        "csv",
    ]);
    assert_eq!(r.code, EXIT_OK);
    let lines: Vec<&str> = r.stdout.lines().collect();
    assert_eq!(lines.len(), 6);
    assert_eq!(lines[0], "omega,n_tilde,m_tilde,s_in,s_force");
    // the matched config fully suppresses the Stokes weight at omega = -1
    let first: Vec<&str> = lines[1].split(',').collect();
    let s_force: f64 = first[4].parse().unwrap();
    assert!(s_force.abs() <= 1e-10);

    let r = sqzcool(&["spectrum", "--config", cfg.to_str().unwrap(), "--omega", "0:1:0"]);
    assert_eq!(r.code, EXIT_VALIDATION);
}

#[test]
fn oracle_check_agrees_at_weak_coupling() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, FIG1);
    let prefix = dir.path().join("dump_");
    let r = sqzcool(&[
        "oracle-check",
        "--config",
        cfg.to_str().unwrap(),
        "--g",
        "0.01",
        "--dump-matrices",
        prefix.to_str().unwrap(),
    ]);
    assert_eq!(r.code, EXIT_OK, "stderr: {}", r.stderr);
    let rel_line = r
        .stdout
        .lines()
        .find(|l| l.contains("relative error"))
        .expect("relative error line");
    let rel: f64 = rel_line.split('=').nth(1).unwrap().trim().parse().unwrap();
    assert!(rel < 0.03, "relative error {rel}");
    for name in ["drift.csv", "diffusion.csv", "covariance.csv"] {
        let path = dir.path().join(format!("dump_{name}"));
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().count(), 6, "{name} should have 6 rows");
    }
}

#[test]
fn sweep_phase_writes_records() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, FIG1);
    let out = dir.path().join("phase.csv");
    let r = sqzcool(&[
        "sweep",
        "--config",
        cfg.to_str().unwrap(),
        "--kind",
        "phase",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(r.code, EXIT_OK, "stderr: {}", r.stderr);
    let text = std::fs::read_to_string(&out).unwrap();
    // header + 3 purity segments x 721 points
    assert_eq!(text.lines().count(), 1 + 3 * 721);
}

#[test]
fn every_subcommand_accepts_a_cool_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, FIG1);
    let cfg = cfg.to_str().unwrap();
    let figdir = dir.path().join("figs");
    let sweep_out = dir.path().join("s.csv");
    let cases: Vec<Vec<&str>> = vec![
        vec!["spectrum", "--config", cfg, "--omega", "-1:1:3"],
        vec!["cool", "--config", cfg],
        vec!["optimize", "--config", cfg],
        vec!["sweep", "--config", cfg, "--kind", "phase", "--out", sweep_out.to_str().unwrap()],
        vec!["oracle-check", "--config", cfg, "--g", "0.05"],
        vec!["figures", "--config", cfg, "--out", figdir.to_str().unwrap()],
    ];
    for args in cases {
        let r = sqzcool(&args);
        assert!(
            r.code == EXIT_OK,
            "{args:?} exited {} (stderr: {})",
            r.code,
            r.stderr
        );
    }
    for name in ["fig1b.csv", "fig2.csv", "fig3.csv"] {
        assert!(figdir.join(name).exists(), "missing {name}");
    }
}
