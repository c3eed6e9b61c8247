//! Scattering rates, cooling rate, back-action limit and phonon occupancy.
//!
//! The Stokes/anti-Stokes rates are `A_± = G² s_a(∓ω_m)`; the cooling rate
//! `Γ = A_− − A_+` has the squeezing-independent closed form
//!
//! ```text
//! Γ = 2 κ_a G² [ 1/(κ_a² + (Δ_a−ω_m)²) − 1/(κ_a² + (Δ_a+ω_m)²) ]
//! ```
//!
//! and the steady occupancy mixes the thermal and light-induced baths,
//! `N_st = (γ N_th + Γ N_a)/(γ + Γ)` with `N_a = A_+/Γ`.

use crate::error::{Error, Result};
use crate::params::ValidatedModel;
use crate::spectra::force_spectrum;

/// Ratio above which the weak-coupling hierarchy `γ ≪ G ≪ r_±, κ_a, ω_m`
/// is flagged as questionable. Advisory only, never a hard error.
pub const WEAK_COUPLING_RATIO: f64 = 0.3;

/// Everything the cooling analysis produces for one model.
#[derive(Debug, Clone, Copy)]
pub struct CoolingReport {
    /// Stokes (heating) rate `A_+ = G² s_a(−ω_m)`.
    pub a_plus: f64,
    /// Anti-Stokes (cooling) rate `A_− = G² s_a(+ω_m)`.
    pub a_minus: f64,
    /// Net cooling rate `Γ = A_− − A_+`.
    pub gamma_cool: f64,
    /// Sideband asymmetry parameter `ζ = [D_−/D_+]^{1/2}`, in (0, 1] for red detuning.
    pub zeta: f64,
    /// Standard back-action limit without squeezing, `N_0 = D_−/(4Δ_a ω_m)`.
    pub n0: f64,
    /// Back-action limit `N_a = A_+/Γ`.
    pub n_a: f64,
    /// Exact steady occupancy from the rate mixture.
    pub n_st: f64,
    /// Approximate occupancy `N_th/C + N_0(1−ξ)` (resolved red sideband).
    pub n_st_approx: f64,
    /// Cooperativity `C = 2G²/(γ κ_a)`.
    pub cooperativity: f64,
    /// Set when `γ/G` or `G/min(r_±, κ_a, ω_m)` exceeds [`WEAK_COUPLING_RATIO`].
    pub weak_coupling_warning: bool,
    /// Set when `Δ_a ≠ ω_m`, where the approximate occupancy formula is not derived.
    pub off_sideband_warning: bool,
}

/// Approximate-occupancy result.
#[derive(Debug, Clone, Copy)]
pub struct ApproxSteadyState {
    pub n_st: f64,
    pub cooperativity: f64,
    /// The formula assumes `Δ_a = ω_m`; set when evaluated elsewhere.
    pub off_sideband_warning: bool,
}

/// Sideband asymmetry parameter `ζ` (< 1 for `Δ_a > 0`).
pub fn zeta(model: &ValidatedModel) -> f64 {
    let ka = model.kappa_a();
    let (da, wm) = (model.delta_a(), model.omega_m());
    let dm = ka * ka + (da - wm) * (da - wm);
    let dp = ka * ka + (da + wm) * (da + wm);
    (dm / dp).sqrt()
}

/// Back-action limit of plain sideband cooling, `N_0`.
pub fn backaction_floor(model: &ValidatedModel) -> f64 {
    let ka = model.kappa_a();
    let (da, wm) = (model.delta_a(), model.omega_m());
    (ka * ka + (da - wm) * (da - wm)) / (4.0 * da * wm)
}

/// Stokes and anti-Stokes scattering rates `(A_+, A_−)`.
///
/// Mathematically nonnegative; round-off noise from the interference
/// cancellation (|value| ≲ 1e-10) is clamped to zero.
pub fn scattering_rates(model: &ValidatedModel) -> (f64, f64) {
    let g2 = model.g() * model.g();
    let clamp = |x: f64| {
        debug_assert!(x > -1e-10, "force spectrum went negative: {x}");
        x.max(0.0)
    };
    let a_plus = g2 * clamp(force_spectrum(-model.omega_m(), model));
    let a_minus = g2 * clamp(force_spectrum(model.omega_m(), model));
    (a_plus, a_minus)
}

/// Cooling rate `Γ` from the closed form, cross-checked against the spectral
/// difference `A_− − A_+`.
///
/// The closed form is the authoritative route (it is immune to cancellation
/// near full Stokes suppression); disagreement beyond 1e-10 relative is an
/// internal error.
pub fn cooling_rate(model: &ValidatedModel) -> Result<f64> {
    let ka = model.kappa_a();
    let (da, wm, g) = (model.delta_a(), model.omega_m(), model.g());
    let dm = ka * ka + (da - wm) * (da - wm);
    let dp = ka * ka + (da + wm) * (da + wm);
    let closed = 2.0 * ka * g * g * (1.0 / dm - 1.0 / dp);

    let (a_plus, a_minus) = scattering_rates(model);
    let spectral = a_minus - a_plus;
    // the spectral route subtracts large squeezing terms; scale the tolerance
    // by what was actually summed so the check stays meaningful at Gamma ~ 0
    let scale = closed
        .abs()
        .max(1e-3 * (a_plus + a_minus))
        .max(f64::MIN_POSITIVE);
    if (spectral - closed).abs() > 1e-10 * scale {
        return Err(Error::InternalInconsistency(format!(
            "cooling rate routes disagree: closed form {closed} vs spectral {spectral}"
        )));
    }
    Ok(closed)
}

/// Back-action limit `N_a = A_+/Γ`.
pub fn backaction_limit(model: &ValidatedModel) -> Result<f64> {
    let gamma_cool = cooling_rate(model)?;
    if gamma_cool <= 0.0 {
        return Err(Error::NotCooling {
            total_rate: gamma_cool,
        });
    }
    let (a_plus, _) = scattering_rates(model);
    Ok(a_plus / gamma_cool)
}

/// Steady-state phonon occupancy `N_st = (γ N_th + A_+)/(γ + Γ)`.
///
/// Identical to the `(γ N_th + Γ N_a)/(γ + Γ)` mixture whenever `Γ > 0`,
/// and well defined down to `Γ = 0` (thermal equilibrium at `G = 0`).
pub fn steady_state(model: &ValidatedModel) -> Result<f64> {
    let gamma_cool = cooling_rate(model)?;
    let total = model.gamma() + gamma_cool;
    if total <= 0.0 {
        return Err(Error::NotCooling { total_rate: total });
    }
    let (a_plus, _) = scattering_rates(model);
    Ok((model.gamma() * model.n_th() + a_plus) / total)
}

/// Approximate occupancy `N_st ≃ N_th/C + N_0(1−ξ)` with cooperativity
/// `C = 2G²/(γ κ_a)`; valid on the red sideband `Δ_a = ω_m`.
pub fn approx_steady_state(model: &ValidatedModel) -> ApproxSteadyState {
    let g = model.g();
    let cooperativity = 2.0 * g * g / (model.gamma() * model.kappa_a());
    let n_st = model.n_th() / cooperativity + backaction_floor(model) * (1.0 - model.xi());
    ApproxSteadyState {
        n_st,
        cooperativity,
        off_sideband_warning: (model.delta_a() - model.omega_m()).abs() > 1e-9,
    }
}

/// Phonon number at time `t` from the rate equation
/// `Ṅ = −(γ+Γ)N + γN_th + A_+`:
/// exponential relaxation from `n_initial` toward the steady state.
pub fn phonon_evolution(t: f64, n_initial: f64, model: &ValidatedModel) -> Result<f64> {
    let n_st = steady_state(model)?;
    let total = model.gamma() + cooling_rate(model)?;
    Ok(n_st + (n_initial - n_st) * (-total * t).exp())
}

fn weak_coupling_warning(model: &ValidatedModel) -> bool {
    let g = model.g();
    if g == 0.0 {
        return true;
    }
    let fast = model
        .r_minus()
        .min(model.r_plus())
        .min(model.kappa_a())
        .min(model.omega_m());
    model.gamma() / g > WEAK_COUPLING_RATIO || g / fast > WEAK_COUPLING_RATIO
}

/// Full cooling report. Requires net cooling (`Γ > 0`).
pub fn report(model: &ValidatedModel) -> Result<CoolingReport> {
    let gamma_cool = cooling_rate(model)?;
    if gamma_cool <= 0.0 {
        return Err(Error::NotCooling {
            total_rate: gamma_cool,
        });
    }
    let (a_plus, a_minus) = scattering_rates(model);
    let approx = approx_steady_state(model);
    Ok(CoolingReport {
        a_plus,
        a_minus,
        gamma_cool,
        zeta: zeta(model),
        n0: backaction_floor(model),
        n_a: a_plus / gamma_cool,
        n_st: steady_state(model)?,
        n_st_approx: approx.n_st,
        cooperativity: approx.cooperativity,
        weak_coupling_warning: weak_coupling_warning(model),
        off_sideband_warning: approx.off_sideband_warning,
    })
}
