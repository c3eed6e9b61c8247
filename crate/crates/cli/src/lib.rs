//! `sqzcool` command-line front end.
//!
//! Exit codes: 0 success, 1 validation error (including bad flags/config),
//! 2 infeasibility surfaced as the primary result, 3 I/O error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use sqzcool::config::{load_config, RawConfig};
use sqzcool::params::{validate, ValidatedModel};
use sqzcool::{cooling, optimizer, oracle, spectra, sweep, Error};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Parser)]
#[command(
    name = "sqzcool",
    version,
    about = "Steady-state optomechanical cooling with a squeezed-light drive",
    after_help = "All rates are dimensionless in units of omega_m; configs carrying a \
                  physical omega_m are normalized on ingestion. SQZCOOL_THREADS caps \
                  sweep parallelism."
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate the reservoir spectra and force spectrum over a frequency grid
    Spectrum(SpectrumArgs),
    /// Print the cooling report (rates, back-action limit, occupancies)
    Cool(ModelArgs),
    /// Optimal phase and matched bandwidth for the configured S(0) and purity
    Optimize(ModelArgs),
    /// Run one named parameter sweep and emit CSV
    Sweep(SweepArgs),
    /// Cross-check the analytic occupancy against the Lyapunov steady state
    OracleCheck(OracleArgs),
    /// Write the three default figure sweeps (fig1b.csv, fig2.csv, fig3.csv)
    Figures(FiguresArgs),
}

#[derive(Args)]
struct ModelArgs {
    /// Path to a `key = value` model configuration
    #[arg(long)]
    config: PathBuf,
    /// Override a config key (repeatable), e.g. --set squeezer.chi=0.6
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Write output here instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Human)]
    format: Format,
}

#[derive(Args)]
struct SpectrumArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Frequency grid as MIN:MAX:N (units of omega_m)
    #[arg(long, value_name = "MIN:MAX:N", default_value = "-3:3:2001")]
    omega: String,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Which sweep to run
    #[arg(long, value_enum)]
    kind: SweepKindArg,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Override the optomechanical coupling for the check
    #[arg(long)]
    g: Option<f64>,
    /// Dump drift/diffusion/covariance as CSV files with this path prefix
    #[arg(long, value_name = "PREFIX")]
    dump_matrices: Option<PathBuf>,
}

#[derive(Args)]
struct FiguresArgs {
    /// Optional model config providing the mechanical/cavity baseline
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override a config key (repeatable)
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Output directory
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Human,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum SweepKindArg {
    Phase,
    Squeezing,
    Cavity,
}

struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::Io(_) => EXIT_IO,
            _ => EXIT_VALIDATION,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Failure {
        Failure {
            code: EXIT_IO,
            message: e.to_string(),
        }
    }
}

/// Run the CLI against `argv` (including the program name), writing to the
/// given streams. Returns the process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{rendered}");
                EXIT_VALIDATION
            } else {
                // --help / --version
                let _ = write!(out, "{rendered}");
                EXIT_OK
            };
        }
    };
    let outcome = match cli.cmd {
        Cmd::Spectrum(args) => cmd_spectrum(&args, out),
        Cmd::Cool(args) => cmd_cool(&args, out),
        Cmd::Optimize(args) => cmd_optimize(&args, out),
        Cmd::Sweep(args) => cmd_sweep(&args, out),
        Cmd::OracleCheck(args) => cmd_oracle_check(&args, out),
        Cmd::Figures(args) => cmd_figures(&args, out),
    };
    match outcome {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn apply_overrides(cfg: &mut RawConfig, sets: &[String]) -> Result<(), Failure> {
    for s in sets {
        let Some((key, value)) = s.split_once('=') else {
            return Err(Failure {
                code: EXIT_VALIDATION,
                message: format!("--set expects KEY=VALUE, got `{s}`"),
            });
        };
        let value: f64 = value.trim().parse().map_err(|_| Failure {
            code: EXIT_VALIDATION,
            message: format!("--set {key}: `{value}` is not a number"),
        })?;
        cfg.set(key.trim(), value, 0)?;
    }
    Ok(())
}

/// The one validation path every subcommand shares.
fn load_model(config: &Path, sets: &[String]) -> Result<ValidatedModel, Failure> {
    let mut cfg = load_config(config)?;
    apply_overrides(&mut cfg, sets)?;
    let (optomech, squeezer) = cfg.into_params()?;
    Ok(validate(&optomech, &squeezer)?)
}

fn emit(text: &str, out_path: &Option<PathBuf>, out: &mut dyn Write) -> Result<(), Failure> {
    match out_path {
        Some(path) => std::fs::write(path, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn parse_omega_grid(spec: &str) -> Result<Vec<f64>, Failure> {
    let bad = |msg: &str| Failure {
        code: EXIT_VALIDATION,
        message: format!("--omega expects MIN:MAX:N, {msg}: `{spec}`"),
    };
    let parts: Vec<&str> = spec.split(':').collect();
    let [min, max, n] = parts.as_slice() else {
        return Err(bad("wrong number of fields"));
    };
    let min: f64 = min.parse().map_err(|_| bad("bad MIN"))?;
    let max: f64 = max.parse().map_err(|_| bad("bad MAX"))?;
    let n: usize = n.parse().map_err(|_| bad("bad N"))?;
    if n < 2 || !(min < max) {
        return Err(bad("need N >= 2 and MIN < MAX"));
    }
    Ok((0..n)
        .map(|i| min + (max - min) * i as f64 / (n as f64 - 1.0))
        .collect())
}

fn cmd_spectrum(args: &SpectrumArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let model = load_model(&args.model.config, &args.model.set)?;
    let grid = parse_omega_grid(&args.omega)?;
    let mut text = String::new();
    match args.model.format {
        Format::Csv => {
            text.push_str("omega,n_tilde,m_tilde,s_in,s_force\n");
            for w in grid {
                let p = spectra::spectra_point(w, &model);
                text.push_str(&format!(
                    "{:.11e},{:.11e},{:.11e},{:.11e},{:.11e}\n",
                    p.omega, p.n_tilde, p.m_tilde, p.s_in, p.s_force
                ));
            }
        }
        Format::Human => {
            text.push_str(&format!(
                "{:>12} {:>14} {:>14} {:>14} {:>14}\n",
                "omega", "n_tilde", "m_tilde", "S(omega)", "s_a(omega)"
            ));
            for w in grid {
                let p = spectra::spectra_point(w, &model);
                text.push_str(&format!(
                    "{:>12.6} {:>14.8} {:>14.8} {:>14.8} {:>14.8}\n",
                    p.omega, p.n_tilde, p.m_tilde, p.s_in, p.s_force
                ));
            }
        }
    }
    emit(&text, &args.model.out, out)?;
    Ok(EXIT_OK)
}

fn cmd_cool(args: &ModelArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let model = load_model(&args.config, &args.set)?;
    let r = cooling::report(&model)?;
    let text = match args.format {
        Format::Csv => {
            let mut t = String::from(
                "a_plus,a_minus,gamma_cool,zeta,n0,n_a,n_st,n_st_approx,cooperativity,weak_coupling_warning,off_sideband_warning\n",
            );
            t.push_str(&format!(
                "{:.11e},{:.11e},{:.11e},{:.11e},{:.11e},{:.11e},{:.11e},{:.11e},{:.11e},{},{}\n",
                r.a_plus,
                r.a_minus,
                r.gamma_cool,
                r.zeta,
                r.n0,
                r.n_a,
                r.n_st,
                r.n_st_approx,
                r.cooperativity,
                r.weak_coupling_warning,
                r.off_sideband_warning
            ));
            t
        }
        Format::Human => {
            let mut t = String::from("cooling report (rates in units of omega_m)\n");
            t.push_str(&format!("  A_+ (Stokes)        = {:.6e}\n", r.a_plus));
            t.push_str(&format!("  A_- (anti-Stokes)   = {:.6e}\n", r.a_minus));
            t.push_str(&format!("  Gamma               = {:.6e}\n", r.gamma_cool));
            t.push_str(&format!("  zeta                = {:.6}\n", r.zeta));
            t.push_str(&format!("  N_0                 = {:.6}\n", r.n0));
            t.push_str(&format!("  N_a                 = {:.6e}\n", r.n_a));
            t.push_str(&format!("  N_st (exact)        = {:.6}\n", r.n_st));
            t.push_str(&format!("  N_st (approx)       = {:.6}\n", r.n_st_approx));
            t.push_str(&format!("  cooperativity C     = {:.6e}\n", r.cooperativity));
            if r.weak_coupling_warning {
                t.push_str("  warning: outside the weak-coupling hierarchy gamma << G << r_-, kappa_a, omega_m\n");
            }
            if r.off_sideband_warning {
                t.push_str("  warning: delta_a != omega_m; the approximate occupancy assumes red-sideband driving\n");
            }
            t
        }
    };
    emit(&text, &args.out, out)?;
    Ok(EXIT_OK)
}

fn cmd_optimize(args: &ModelArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let model = load_model(&args.config, &args.set)?;
    let s0 = spectra::input_squeezing_spectrum(0.0, &model);
    let xi = model.xi();
    let opt = optimizer::optimal_squeezing(s0, xi, model.delta_a(), model.kappa_a())?;
    let text = match args.format {
        Format::Csv => {
            let mut t =
                String::from("s0,xi,phi_opt,feasible,r_plus_matched,n_a_predicted,s0_threshold\n");
            t.push_str(&format!(
                "{:.11e},{:.11e},{:.11e},{},{},{:.11e},{:.11e}\n",
                s0,
                xi,
                opt.phi_opt,
                opt.feasible,
                opt.r_plus_matched
                    .map(|r| format!("{r:.11e}"))
                    .unwrap_or_else(|| "inf".into()),
                opt.n_a_predicted,
                opt.s0_threshold
            ));
            t
        }
        Format::Human => {
            let mut t = String::from("optimal squeezed drive for this geometry\n");
            t.push_str(&format!("  configured S(0)     = {s0:.6}  (purity xi = {xi:.6})\n"));
            t.push_str(&format!(
                "  phi_opt             = {:.5} rad ({:.5} pi)\n",
                opt.phi_opt,
                opt.phi_opt / std::f64::consts::PI
            ));
            t.push_str(&format!("  feasibility bound   = S(0) < {:.6}\n", opt.s0_threshold));
            match opt.r_plus_matched {
                Some(r) => t.push_str(&format!("  matched r_+         = {r:.5}\n")),
                None => t.push_str(
                    "  matched r_+         = none (finite-bandwidth matching infeasible; broadband limit applies)\n",
                ),
            }
            t.push_str(&format!("  predicted N_a       = {:.6e}\n", opt.n_a_predicted));
            t
        }
    };
    emit(&text, &args.out, out)?;
    Ok(if opt.feasible { EXIT_OK } else { EXIT_INFEASIBLE })
}

fn cmd_sweep(args: &SweepArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let model = load_model(&args.model.config, &args.model.set)?;
    let optomech = *model.optomech();
    let spec = match args.kind {
        SweepKindArg::Phase => sweep::fig1b_spec(optomech),
        SweepKindArg::Squeezing => sweep::fig2_spec(optomech),
        SweepKindArg::Cavity => sweep::fig3_spec(optomech),
    };
    let result = sweep::run_sweep(&spec)?;
    match &args.model.out {
        Some(path) => {
            sweep::emit_csv_to_path(&result, path)?;
        }
        None => {
            let mut buf = Vec::new();
            sweep::emit_csv(&result, &mut buf)?;
            out.write_all(&buf)?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_oracle_check(args: &OracleArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let mut model = load_model(&args.model.config, &args.model.set)?;
    if let Some(g) = args.g {
        model = model.with_coupling(g)?;
    }
    let analytic = cooling::steady_state(&model)?;
    let lg = oracle::build_model(&model)?;
    let res = oracle::solve_steady_state(&lg)?;
    let rel = (res.phonon_number - analytic).abs() / analytic.abs().max(f64::MIN_POSITIVE);

    if let Some(prefix) = &args.dump_matrices {
        let base = prefix.as_os_str().to_string_lossy();
        std::fs::write(format!("{base}drift.csv"), oracle::matrix_to_csv(lg.drift()))?;
        std::fs::write(
            format!("{base}diffusion.csv"),
            oracle::matrix_to_csv(lg.diffusion()),
        )?;
        std::fs::write(
            format!("{base}covariance.csv"),
            oracle::matrix_to_csv(&res.covariance),
        )?;
    }

    let text = match args.model.format {
        Format::Csv => format!(
            "g,n_st_analytic,n_st_oracle,relative_error,stability_margin\n{:.11e},{:.11e},{:.11e},{:.11e},{:.11e}\n",
            model.g(),
            analytic,
            res.phonon_number,
            rel,
            res.stability_margin
        ),
        Format::Human => {
            let mut t = String::from("Lyapunov steady-state cross-check\n");
            t.push_str(&format!("  coupling G          = {:.6}\n", model.g()));
            t.push_str(&format!("  N_st analytic       = {analytic:.8}\n"));
            t.push_str(&format!("  N_st oracle         = {:.8}\n", res.phonon_number));
            t.push_str(&format!("  relative error      = {rel:.3e}\n"));
            t.push_str(&format!(
                "  stability margin    = {:.3e}\n",
                res.stability_margin
            ));
            t
        }
    };
    emit(&text, &args.model.out, out)?;
    Ok(EXIT_OK)
}

fn cmd_figures(args: &FiguresArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let optomech = match &args.config {
        Some(path) => *load_model(path, &args.set)?.optomech(),
        None => {
            if !args.set.is_empty() {
                let mut cfg = default_figure_config();
                apply_overrides(&mut cfg, &args.set)?;
                let (optomech, squeezer) = cfg.into_params()?;
                *validate(&optomech, &squeezer)?.optomech()
            } else {
                sweep::fig1_optomech()
            }
        }
    };
    std::fs::create_dir_all(&args.out)?;
    let written = sweep::write_figures(&args.out, optomech)?;
    for (path, bytes) in written {
        writeln!(out, "wrote {} ({bytes} bytes)", path.display())?;
    }
    Ok(EXIT_OK)
}

fn default_figure_config() -> RawConfig {
    let om = sweep::fig1_optomech();
    let mut cfg = RawConfig::default();
    for (k, v) in [
        ("gamma", om.gamma),
        ("n_th", om.n_th),
        ("kappa_a_s", om.kappa_a_s),
        ("kappa_a_loss", om.kappa_a_loss),
        ("delta_a", om.delta_a),
        ("g", om.g),
        ("chi", 0.0),
        ("kappa_c_s", 0.0),
        ("kappa_c_loss", 1.0),
        ("phi", 0.0),
    ] {
        cfg.set(k, v, 0).expect("default keys are known");
    }
    cfg
}
