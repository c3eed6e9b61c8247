//! Physical parameters, validation, and the (chi, kappa_c) <-> (S(0), r_+)
//! conversions.
//!
//! All rates and frequencies are stored dimensionless in units of the
//! mechanical frequency (`omega_m == 1` after validation). Inputs carrying a
//! physical `omega_m` are normalized on ingestion.

use crate::error::{Error, Result};

/// Guard against `r_- -> 0` singularities when solving for (chi, kappa_c):
/// targets with `(1 - s0)/xi >= 1 - FEASIBILITY_MARGIN` are rejected.
pub const FEASIBILITY_MARGIN: f64 = 1e-12;

/// Mechanical resonator and optical cavity parameters.
///
/// `kappa_a_s` is the cavity decay into the squeezed drive channel and
/// `kappa_a_loss` the decay into uncontrolled vacuum; the total linewidth is
/// their sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptomechParams {
    /// Mechanical angular frequency (reference unit; 1 after validation).
    pub omega_m: f64,
    /// Mechanical energy damping rate.
    pub gamma: f64,
    /// Thermal occupation of the mechanical bath.
    pub n_th: f64,
    /// Cavity decay into the squeezed drive channel.
    pub kappa_a_s: f64,
    /// Cavity decay into the uncontrolled vacuum channel.
    pub kappa_a_loss: f64,
    /// Laser-cavity detuning (positive = red detuned).
    pub delta_a: f64,
    /// Linearized optomechanical coupling strength.
    pub g: f64,
}

impl OptomechParams {
    /// Total cavity linewidth `kappa_a_s + kappa_a_loss`.
    pub fn kappa_a(&self) -> f64 {
        self.kappa_a_s + self.kappa_a_loss
    }
}

/// Below-threshold parametric oscillator parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezerParams {
    /// Parametric self-interaction strength.
    pub chi: f64,
    /// Oscillator decay into the controlled drive channel.
    pub kappa_c_s: f64,
    /// Oscillator decay into the uncontrolled channel.
    pub kappa_c_loss: f64,
    /// Squeezing phase in radians (physically periodic with period pi).
    pub phi: f64,
}

impl SqueezerParams {
    /// Total oscillator linewidth `kappa_c_s + kappa_c_loss`.
    pub fn kappa_c(&self) -> f64 {
        self.kappa_c_s + self.kappa_c_loss
    }
}

/// A fully validated model with derived quadrature decay rates and the loss
/// factor. Immutable after construction; every instance satisfies all type
/// invariants.
#[derive(Debug, Clone, Copy)]
pub struct ValidatedModel {
    optomech: OptomechParams,
    squeezer: SqueezerParams,
    r_plus: f64,
    r_minus: f64,
    xi: f64,
}

impl ValidatedModel {
    pub fn optomech(&self) -> &OptomechParams {
        &self.optomech
    }

    pub fn squeezer(&self) -> &SqueezerParams {
        &self.squeezer
    }

    /// Decay rate of the squeezed quadrature, `kappa_c + chi`.
    pub fn r_plus(&self) -> f64 {
        self.r_plus
    }

    /// Decay rate of the anti-squeezed quadrature, `kappa_c - chi` (> 0).
    pub fn r_minus(&self) -> f64 {
        self.r_minus
    }

    /// Purity factor `kappa_a_s * kappa_c_s / (kappa_a * kappa_c)` in [0, 1].
    pub fn xi(&self) -> f64 {
        self.xi
    }

    /// Mechanical frequency; identically 1 in internal units.
    pub fn omega_m(&self) -> f64 {
        self.optomech.omega_m
    }

    pub fn gamma(&self) -> f64 {
        self.optomech.gamma
    }

    pub fn n_th(&self) -> f64 {
        self.optomech.n_th
    }

    pub fn kappa_a(&self) -> f64 {
        self.optomech.kappa_a()
    }

    pub fn delta_a(&self) -> f64 {
        self.optomech.delta_a
    }

    pub fn g(&self) -> f64 {
        self.optomech.g
    }

    pub fn chi(&self) -> f64 {
        self.squeezer.chi
    }

    pub fn kappa_c(&self) -> f64 {
        self.squeezer.kappa_c()
    }

    /// Squeezing phase canonicalized to [0, pi).
    pub fn phi(&self) -> f64 {
        self.squeezer.phi
    }

    /// Same model with a different squeezing phase. The phase cannot break
    /// any other invariant, so this is infallible.
    pub fn with_phase(&self, phi: f64) -> ValidatedModel {
        let mut out = *self;
        out.squeezer.phi = canonical_phase(phi);
        out
    }

    /// Same model with a different optomechanical coupling.
    pub fn with_coupling(&self, g: f64) -> Result<ValidatedModel> {
        let mut optomech = self.optomech;
        optomech.g = g;
        validate(&optomech, &self.squeezer)
    }
}

fn canonical_phase(phi: f64) -> f64 {
    let p = phi.rem_euclid(std::f64::consts::PI);
    // rem_euclid can return exactly pi when phi is a tiny negative number
    if p >= std::f64::consts::PI {
        0.0
    } else {
        p
    }
}

fn check_finite(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite { name, value })
    }
}

fn check_nonnegative(name: &'static str, value: f64) -> Result<()> {
    check_finite(name, value)?;
    if value < 0.0 {
        Err(Error::NegativeInput { name, value })
    } else {
        Ok(())
    }
}

fn check_positive(name: &'static str, value: f64) -> Result<()> {
    check_finite(name, value)?;
    if value <= 0.0 {
        Err(Error::NonPositiveRate { name, value })
    } else {
        Ok(())
    }
}

/// Validate raw parameters into a [`ValidatedModel`], normalizing all rates
/// to units of `omega_m`.
///
/// Either every invariant holds on the returned model or a typed error is
/// produced; there is no partially constructed result.
pub fn validate(optomech: &OptomechParams, squeezer: &SqueezerParams) -> Result<ValidatedModel> {
    check_positive("omega_m", optomech.omega_m)?;
    check_positive("gamma", optomech.gamma)?;
    check_nonnegative("n_th", optomech.n_th)?;
    check_nonnegative("g", optomech.g)?;
    check_nonnegative("kappa_a_s", optomech.kappa_a_s)?;
    check_nonnegative("kappa_a_loss", optomech.kappa_a_loss)?;
    check_finite("delta_a", optomech.delta_a)?;
    check_positive("kappa_a", optomech.kappa_a())?;
    check_nonnegative("chi", squeezer.chi)?;
    check_nonnegative("kappa_c_s", squeezer.kappa_c_s)?;
    check_nonnegative("kappa_c_loss", squeezer.kappa_c_loss)?;
    check_finite("phi", squeezer.phi)?;
    check_positive("kappa_c", squeezer.kappa_c())?;

    let w = optomech.omega_m;
    let optomech = OptomechParams {
        omega_m: 1.0,
        gamma: optomech.gamma / w,
        n_th: optomech.n_th,
        kappa_a_s: optomech.kappa_a_s / w,
        kappa_a_loss: optomech.kappa_a_loss / w,
        delta_a: optomech.delta_a / w,
        g: optomech.g / w,
    };
    let squeezer = SqueezerParams {
        chi: squeezer.chi / w,
        kappa_c_s: squeezer.kappa_c_s / w,
        kappa_c_loss: squeezer.kappa_c_loss / w,
        phi: canonical_phase(squeezer.phi),
    };

    let kappa_c = squeezer.kappa_c();
    if squeezer.chi >= kappa_c {
        return Err(Error::ThresholdViolation {
            chi: squeezer.chi,
            kappa_c,
        });
    }

    let xi = loss_factor(
        optomech.kappa_a_s,
        optomech.kappa_a_loss,
        squeezer.kappa_c_s,
        squeezer.kappa_c_loss,
    )?;

    Ok(ValidatedModel {
        optomech,
        squeezer,
        r_plus: kappa_c + squeezer.chi,
        r_minus: kappa_c - squeezer.chi,
        xi,
    })
}

/// Loss factor `xi = kappa_a_s * kappa_c_s / (kappa_a * kappa_c)`.
///
/// `xi = 1` is pure squeezed driving, `xi = 0` leaves only ordinary vacuum
/// noise at the cavity input.
pub fn loss_factor(
    kappa_a_s: f64,
    kappa_a_loss: f64,
    kappa_c_s: f64,
    kappa_c_loss: f64,
) -> Result<f64> {
    check_nonnegative("kappa_a_s", kappa_a_s)?;
    check_nonnegative("kappa_a_loss", kappa_a_loss)?;
    check_nonnegative("kappa_c_s", kappa_c_s)?;
    check_nonnegative("kappa_c_loss", kappa_c_loss)?;
    let kappa_a = kappa_a_s + kappa_a_loss;
    let kappa_c = kappa_c_s + kappa_c_loss;
    check_positive("kappa_a", kappa_a)?;
    check_positive("kappa_c", kappa_c)?;
    Ok((kappa_a_s * kappa_c_s) / (kappa_a * kappa_c))
}

/// Recover oscillator parameters from the measurable pair: squeezing at the
/// central frequency `S(0)` and squeezing bandwidth `r_+`.
///
/// Solves `chi * kappa_c = (1 - s0) r_+^2 / (4 xi)` together with
/// `chi + kappa_c = r_+`, keeping the below-threshold root `chi < kappa_c`.
/// The requested purity is realized entirely in the oscillator's output
/// split (`kappa_c_s = xi * kappa_c`); pair the result with a lossless
/// cavity so the validated model reproduces `xi`.
pub fn from_observables(s0: f64, r_plus: f64, xi: f64, phi: f64) -> Result<SqueezerParams> {
    check_finite("s0", s0)?;
    check_finite("phi", phi)?;
    check_positive("r_plus", r_plus)?;
    check_positive("xi", xi)?;
    if !(0.0..=1.0).contains(&s0) || s0 == 0.0 {
        return Err(Error::Domain(format!("s0 = {s0} must lie in (0, 1]")));
    }
    if xi > 1.0 {
        return Err(Error::Domain(format!("xi = {xi} must lie in (0, 1]")));
    }
    let ratio = (1.0 - s0) / xi;
    if ratio >= 1.0 - FEASIBILITY_MARGIN {
        return Err(Error::Infeasible { s0, xi, ratio });
    }
    // chi and kappa_c are the roots of x^2 - r_+ x + product = 0; forming
    // chi by subtraction keeps chi + kappa_c == r_plus bit-exact
    let product = (1.0 - s0) * r_plus * r_plus / (4.0 * xi);
    let disc = r_plus * r_plus - 4.0 * product;
    let root = disc.sqrt();
    let kappa_c = 0.5 * (r_plus + root);
    let chi = r_plus - kappa_c;
    // double-complement split: guarantees the parts re-sum to kappa_c
    // bit-exactly, so the validated model reproduces r_plus exactly
    let kappa_c_loss = kappa_c - xi * kappa_c;
    let kappa_c_s = kappa_c - kappa_c_loss;
    Ok(SqueezerParams {
        chi,
        kappa_c_s,
        kappa_c_loss,
        phi: canonical_phase(phi),
    })
}
