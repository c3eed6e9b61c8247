//! Deterministic parameter sweeps reproducing the three paper figures, with
//! CSV emission.
//!
//! Grid points are pure functions of their coordinates, evaluated in
//! parallel and gathered back into row-major axis order, so identical specs
//! produce byte-identical output regardless of thread count. The
//! `SQZCOOL_THREADS` environment variable caps the worker pool.

use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::cooling;
use crate::error::{Error, Result};
use crate::optimizer::{self, optimal_phase};
use crate::params::{self, OptomechParams, SqueezerParams, ValidatedModel};
use crate::spectra;

/// Finite stand-in for the broadband limit `r_+ → ∞` when the matching
/// condition has no finite solution: such points are evaluated at
/// `r_+ = 10³ ω_m` and flagged infeasible rather than dropped.
pub const BROADBAND_PROXY: f64 = 1e3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxisScale {
    Linear,
    Log,
}

/// One sweep axis.
#[derive(Debug, Clone)]
pub struct Axis {
    pub name: String,
    pub min: f64,
    pub max: f64,
    pub points: usize,
    pub scale: AxisScale,
}

impl Axis {
    pub fn linear(name: &str, min: f64, max: f64, points: usize) -> Axis {
        Axis {
            name: name.into(),
            min,
            max,
            points,
            scale: AxisScale::Linear,
        }
    }

    pub fn log(name: &str, min: f64, max: f64, points: usize) -> Axis {
        Axis {
            name: name.into(),
            min,
            max,
            points,
            scale: AxisScale::Log,
        }
    }

    fn check(&self) -> Result<()> {
        if self.points < 2 {
            return Err(Error::Domain(format!(
                "axis {}: points = {} must be >= 2",
                self.name, self.points
            )));
        }
        if !(self.min < self.max) {
            return Err(Error::Domain(format!(
                "axis {}: min = {} must be < max = {}",
                self.name, self.min, self.max
            )));
        }
        if self.scale == AxisScale::Log && self.min <= 0.0 {
            return Err(Error::Domain(format!(
                "axis {}: log scale requires min > 0, got {}",
                self.name, self.min
            )));
        }
        Ok(())
    }

    /// Grid values, endpoints included.
    pub fn values(&self) -> Vec<f64> {
        let n = self.points;
        let t = |i: usize| i as f64 / (n as f64 - 1.0);
        match self.scale {
            AxisScale::Linear => (0..n).map(|i| self.min + (self.max - self.min) * t(i)).collect(),
            AxisScale::Log => {
                let (la, lb) = (self.min.ln(), self.max.ln());
                (0..n).map(|i| (la + (lb - la) * t(i)).exp()).collect()
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepKind {
    /// Occupancy versus squeezing phase at the matched bandwidth (Fig. 1b recipe).
    Phase,
    /// Occupancy over the (S(0), r_+) plane plus the matched curve (Fig. 2 recipe).
    Squeezing,
    /// Occupancy over the (kappa_a, delta_a) plane plus minimizing traces (Fig. 3 recipe).
    Cavity,
}

/// Fixed parameters shared by every grid point.
#[derive(Debug, Clone)]
pub struct SweepBase {
    /// Mechanical/cavity template; the cavity split is made lossless so the
    /// purity list below is realized in the oscillator channel.
    pub optomech: OptomechParams,
    /// Squeezing at the central frequency used by the derived policies.
    pub s0: f64,
    /// Purity values swept as separate segments (0 selects the no-squeezing baseline).
    pub xis: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub kind: SweepKind,
    pub axes: Vec<Axis>,
    pub base: SweepBase,
}

/// One evaluated grid point.
#[derive(Debug, Clone)]
pub struct SweepRecord {
    /// Which part of the figure the row belongs to (`grid`, `matched`,
    /// `baseline`, `min_trace`).
    pub segment: &'static str,
    pub xi: f64,
    /// Axis coordinates, parallel to the spec's axis list.
    pub axes: Vec<f64>,
    pub n_tilde_wm: f64,
    pub m_tilde_wm: f64,
    pub s_a_plus_wm: f64,
    pub s_a_minus_wm: f64,
    pub gamma_cool: f64,
    pub n_a: f64,
    pub n_st: f64,
    /// False where the bandwidth-matching condition has no finite solution
    /// and the broadband proxy was evaluated instead.
    pub feasible: bool,
    pub phi_used: f64,
    pub r_plus_used: f64,
}

/// Records plus the axis naming needed to emit them.
#[derive(Debug, Clone)]
pub struct SweepResult {
    pub axis_names: Vec<String>,
    pub records: Vec<SweepRecord>,
}

fn thread_pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("SQZCOOL_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            builder = builder.num_threads(n);
        }
    }
    builder
        .build()
        .map_err(|e| Error::SolverFailure(format!("thread pool: {e}")))
}

fn lossless(template: &OptomechParams, delta_a: f64, kappa_a: f64) -> OptomechParams {
    OptomechParams {
        delta_a,
        kappa_a_s: kappa_a,
        kappa_a_loss: 0.0,
        ..*template
    }
}

fn baseline_squeezer(phi: f64) -> SqueezerParams {
    // xi = 0 through the channel split: plain sideband cooling
    SqueezerParams {
        chi: 0.0,
        kappa_c_s: 0.0,
        kappa_c_loss: 1.0,
        phi,
    }
}

struct PointFields {
    n_tilde_wm: f64,
    m_tilde_wm: f64,
    s_a_plus_wm: f64,
    s_a_minus_wm: f64,
    gamma_cool: f64,
    n_a: f64,
    n_st: f64,
    phi_used: f64,
    r_plus_used: f64,
}

fn fields_of(model: &ValidatedModel) -> Result<PointFields> {
    let wm = model.omega_m();
    let (a_plus, _) = cooling::scattering_rates(model);
    let gamma_cool = cooling::cooling_rate(model)?;
    Ok(PointFields {
        n_tilde_wm: spectra::n_tilde(wm, model),
        m_tilde_wm: spectra::m_tilde(wm, model),
        s_a_plus_wm: spectra::force_spectrum(wm, model),
        s_a_minus_wm: spectra::force_spectrum(-wm, model),
        gamma_cool,
        n_a: if gamma_cool > 0.0 { a_plus / gamma_cool } else { 0.0 },
        n_st: cooling::steady_state(model)?,
        phi_used: model.phi(),
        r_plus_used: model.r_plus(),
    })
}

/// Build and evaluate the model at one grid point from explicit observables.
fn eval_explicit(
    template: &OptomechParams,
    delta_a: f64,
    kappa_a: f64,
    s0: f64,
    r_plus: f64,
    xi: f64,
    phi: f64,
) -> Result<PointFields> {
    let optomech = lossless(template, delta_a, kappa_a);
    let squeezer = if xi == 0.0 || s0 >= 1.0 {
        baseline_squeezer(phi)
    } else {
        params::from_observables(s0, r_plus, xi, phi)?
    };
    let model = params::validate(&optomech, &squeezer)?;
    fields_of(&model)
}

/// Matched-bandwidth evaluation with the broadband-proxy fallback; the bool
/// is the feasibility flag.
fn eval_matched(
    template: &OptomechParams,
    delta_a: f64,
    kappa_a: f64,
    s0: f64,
    xi: f64,
    phi: f64,
) -> Result<(PointFields, bool)> {
    if xi == 0.0 || s0 >= 1.0 {
        let fields = eval_explicit(template, delta_a, kappa_a, s0, BROADBAND_PROXY, 0.0, phi)?;
        return Ok((fields, true));
    }
    let mb = optimizer::matched_bandwidth(s0, xi, delta_a, kappa_a)?;
    match mb.r_plus {
        Some(r_plus) => {
            let fields = eval_explicit(template, delta_a, kappa_a, s0, r_plus, xi, phi)?;
            Ok((fields, true))
        }
        None => {
            let fields = eval_explicit(template, delta_a, kappa_a, s0, BROADBAND_PROXY, xi, phi)?;
            Ok((fields, false))
        }
    }
}

fn record(segment: &'static str, xi: f64, axes: Vec<f64>, f: PointFields, feasible: bool) -> SweepRecord {
    SweepRecord {
        segment,
        xi,
        axes,
        n_tilde_wm: f.n_tilde_wm,
        m_tilde_wm: f.m_tilde_wm,
        s_a_plus_wm: f.s_a_plus_wm,
        s_a_minus_wm: f.s_a_minus_wm,
        gamma_cool: f.gamma_cool,
        n_a: f.n_a,
        n_st: f.n_st,
        feasible,
        phi_used: f.phi_used,
        r_plus_used: f.r_plus_used,
    }
}

/// Occupancy versus squeezing phase: one segment per purity value, each at
/// its own matched bandwidth.
pub fn sweep_phase(spec: &SweepSpec) -> Result<SweepResult> {
    let [phi_axis] = spec.axes.as_slice() else {
        return Err(Error::Domain("phase sweep expects exactly one axis".into()));
    };
    phi_axis.check()?;
    let phis = phi_axis.values();
    let base = &spec.base;
    let (da, ka) = (base.optomech.delta_a, base.optomech.kappa_a());

    let pool = thread_pool()?;
    let mut records = Vec::new();
    for &xi in &base.xis {
        let seg_records: Vec<SweepRecord> = pool.install(|| {
            phis.par_iter()
                .map(|&phi| -> Result<SweepRecord> {
                    let (fields, feasible) = eval_matched(&base.optomech, da, ka, base.s0, xi, phi)?;
                    let segment = if xi == 0.0 { "baseline" } else { "matched" };
                    Ok(record(segment, xi, vec![phi], fields, feasible))
                })
                .collect::<Result<Vec<_>>>()
        })?;
        records.extend(seg_records);
    }
    Ok(SweepResult {
        axis_names: vec![phi_axis.name.clone()],
        records,
    })
}

/// Occupancy over the (S(0), r_+) plane at fixed optimal phase, plus the
/// matched curve for each purity and the no-squeezing baseline.
///
/// Matched-curve rows are restricted to targets above the purity bound
/// `S(0) > 1 − ξ`; spectra below it are unphysical at any bandwidth.
pub fn sweep_squeezing(spec: &SweepSpec) -> Result<SweepResult> {
    let [s0_axis, rp_axis] = spec.axes.as_slice() else {
        return Err(Error::Domain(
            "squeezing sweep expects axes (s0, r_plus)".into(),
        ));
    };
    s0_axis.check()?;
    rp_axis.check()?;
    let s0s = s0_axis.values();
    let rps = rp_axis.values();
    let base = &spec.base;
    let (da, ka) = (base.optomech.delta_a, base.optomech.kappa_a());
    let phi = optimal_phase(da, ka)?;

    let pool = thread_pool()?;
    let grid: Vec<SweepRecord> = pool.install(|| {
        (0..s0s.len() * rps.len())
            .into_par_iter()
            .map(|idx| -> Result<SweepRecord> {
                let (i, j) = (idx / rps.len(), idx % rps.len());
                let (s0, rp) = (s0s[i], rps[j]);
                let fields = eval_explicit(&base.optomech, da, ka, s0, rp, 1.0, phi)?;
                Ok(record("grid", 1.0, vec![s0, rp], fields, true))
            })
            .collect::<Result<Vec<_>>>()
    })?;

    let mut records = grid;
    for &xi in &base.xis {
        if xi == 0.0 {
            for &s0 in &s0s {
                let (fields, _) = eval_matched(&base.optomech, da, ka, s0, 0.0, phi)?;
                records.push(record("baseline", 0.0, vec![s0, fields.r_plus_used], fields, true));
            }
            continue;
        }
        for &s0 in &s0s {
            if (1.0 - s0) / xi >= 1.0 - 1e-9 {
                continue;
            }
            let (fields, feasible) = eval_matched(&base.optomech, da, ka, s0, xi, phi)?;
            records.push(record(
                "matched",
                xi,
                vec![s0, fields.r_plus_used],
                fields,
                feasible,
            ));
        }
    }
    Ok(SweepResult {
        axis_names: vec![s0_axis.name.clone(), rp_axis.name.clone()],
        records,
    })
}

/// Occupancy over the (kappa_a, delta_a) plane with the squeezed drive
/// re-optimized per point, plus the detuning-minimizing trace per purity.
pub fn sweep_cavity(spec: &SweepSpec) -> Result<SweepResult> {
    let [ka_axis, da_axis] = spec.axes.as_slice() else {
        return Err(Error::Domain(
            "cavity sweep expects axes (kappa_a, delta_a)".into(),
        ));
    };
    ka_axis.check()?;
    da_axis.check()?;
    let kas = ka_axis.values();
    let das = da_axis.values();
    let base = &spec.base;

    let pool = thread_pool()?;
    let grid: Vec<SweepRecord> = pool.install(|| {
        (0..kas.len() * das.len())
            .into_par_iter()
            .map(|idx| -> Result<SweepRecord> {
                let (i, j) = (idx / das.len(), idx % das.len());
                let (ka, da) = (kas[i], das[j]);
                let phi = optimal_phase(da, ka)?;
                let (fields, feasible) = eval_matched(&base.optomech, da, ka, base.s0, 1.0, phi)?;
                Ok(record("grid", 1.0, vec![ka, da], fields, feasible))
            })
            .collect::<Result<Vec<_>>>()
    })?;

    let window = (da_axis.min, da_axis.max);
    let mut records = grid;
    for &xi in &base.xis {
        let trace: Vec<SweepRecord> = pool.install(|| {
            kas.par_iter()
                .map(|&ka| -> Result<SweepRecord> {
                    let template = lossless(&base.optomech, base.optomech.delta_a, ka);
                    let delta_opt =
                        match optimizer::optimize_detuning(&template, base.s0, xi, window) {
                            Ok(opt) => opt.delta_opt,
                            // monotone objective: the constrained minimum sits on
                            // a window edge; keep the better endpoint
                            Err(Error::NoMinimumInWindow { lo, hi }) => {
                                let flo =
                                    optimizer::occupancy_at_detuning(&template, base.s0, xi, lo)?;
                                let fhi =
                                    optimizer::occupancy_at_detuning(&template, base.s0, xi, hi)?;
                                if flo <= fhi {
                                    lo
                                } else {
                                    hi
                                }
                            }
                            Err(e) => return Err(e),
                        };
                    let phi = optimal_phase(delta_opt, ka)?;
                    let (fields, feasible) =
                        eval_matched(&base.optomech, delta_opt, ka, base.s0, xi, phi)?;
                    Ok(record("min_trace", xi, vec![ka, delta_opt], fields, feasible))
                })
                .collect::<Result<Vec<_>>>()
        })?;
        records.extend(trace);
    }
    Ok(SweepResult {
        axis_names: vec![ka_axis.name.clone(), da_axis.name.clone()],
        records,
    })
}

/// Run the sweep named by the spec.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    match spec.kind {
        SweepKind::Phase => sweep_phase(spec),
        SweepKind::Squeezing => sweep_squeezing(spec),
        SweepKind::Cavity => sweep_cavity(spec),
    }
}

/// 12 significant digits, scientific; deterministic across platforms.
fn fmt12(x: f64) -> String {
    format!("{:.11e}", x)
}

/// Emit records as CSV. Returns the number of bytes written.
pub fn emit_csv<W: Write>(result: &SweepResult, dest: &mut W) -> Result<u64> {
    if result.records.is_empty() {
        return Err(Error::EmptyInput("no sweep records to emit"));
    }
    let mut bytes: u64 = 0;
    let mut writeln = |line: String, dest: &mut W| -> Result<()> {
        dest.write_all(line.as_bytes())?;
        dest.write_all(b"\n")?;
        bytes += line.len() as u64 + 1;
        Ok(())
    };
    let header = format!(
        "segment,xi,{},n_tilde_wm,m_tilde_wm,s_a_plus_wm,s_a_minus_wm,gamma_cool,n_a,n_st,feasible,phi_used,r_plus_used",
        result.axis_names.join(",")
    );
    writeln(header, dest)?;
    for r in &result.records {
        debug_assert_eq!(r.axes.len(), result.axis_names.len());
        let axes: Vec<String> = r.axes.iter().map(|&v| fmt12(v)).collect();
        let line = format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.segment,
            fmt12(r.xi),
            axes.join(","),
            fmt12(r.n_tilde_wm),
            fmt12(r.m_tilde_wm),
            fmt12(r.s_a_plus_wm),
            fmt12(r.s_a_minus_wm),
            fmt12(r.gamma_cool),
            fmt12(r.n_a),
            fmt12(r.n_st),
            r.feasible,
            fmt12(r.phi_used),
            fmt12(r.r_plus_used),
        );
        writeln(line, dest)?;
    }
    dest.flush()?;
    Ok(bytes)
}

/// Emit to a file path.
pub fn emit_csv_to_path(result: &SweepResult, path: &Path) -> Result<u64> {
    let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
    emit_csv(result, &mut file)
}

/// The mechanical/cavity baseline every figure uses.
pub fn fig1_optomech() -> OptomechParams {
    OptomechParams {
        omega_m: 1.0,
        gamma: 2e-7,
        n_th: 1000.0,
        kappa_a_s: 1.0,
        kappa_a_loss: 0.0,
        delta_a: 1.0,
        g: 0.1,
    }
}

fn default_base(optomech: OptomechParams) -> SweepBase {
    SweepBase {
        optomech,
        s0: 0.3,
        xis: vec![1.0, 0.8, 0.0],
    }
}

/// Occupancy versus squeezing phase: 721 points over [0, 2π].
pub fn fig1b_spec(optomech: OptomechParams) -> SweepSpec {
    SweepSpec {
        kind: SweepKind::Phase,
        axes: vec![Axis::linear("phi", 0.0, 2.0 * std::f64::consts::PI, 721)],
        base: default_base(optomech),
    }
}

/// Occupancy over (S(0), r_+): 201×201, log bandwidth axis.
pub fn fig2_spec(optomech: OptomechParams) -> SweepSpec {
    SweepSpec {
        kind: SweepKind::Squeezing,
        axes: vec![
            Axis::linear("s0", 0.05, 1.0, 201),
            Axis::log("r_plus", 0.5, 20.0, 201),
        ],
        base: default_base(optomech),
    }
}

/// Occupancy over (kappa_a, delta_a): 201×201, log linewidth axis.
pub fn fig3_spec(optomech: OptomechParams) -> SweepSpec {
    SweepSpec {
        kind: SweepKind::Cavity,
        axes: vec![
            Axis::log("kappa_a", 0.05, 5.0, 201),
            Axis::linear("delta_a", 0.2, 3.0, 201),
        ],
        base: default_base(optomech),
    }
}

/// Run the three figure sweeps into `fig1b.csv`, `fig2.csv`, `fig3.csv`
/// under `dir`. Returns (path, bytes) per file.
pub fn write_figures(dir: &Path, optomech: OptomechParams) -> Result<Vec<(PathBuf, u64)>> {
    let jobs = [
        ("fig1b.csv", fig1b_spec(optomech)),
        ("fig2.csv", fig2_spec(optomech)),
        ("fig3.csv", fig3_spec(optomech)),
    ];
    let mut out = Vec::with_capacity(jobs.len());
    for (name, spec) in jobs {
        let result = run_sweep(&spec)?;
        let path = dir.join(name);
        let bytes = emit_csv_to_path(&result, &path)?;
        out.push((path, bytes));
    }
    Ok(out)
}
