//! Full cascaded linear model (parametric oscillator → cavity ⟷ mechanics)
//! as a 6-dimensional quadrature system, with a steady-state Lyapunov solve.
//!
//! This is the independent oracle for every analytic formula in the crate:
//! it never evaluates the closed-form spectra, only the linear quantum
//! Langevin system itself. Quadrature ordering is fixed as
//! `(X_c, Y_c, X_a, Y_a, X_b, Y_b)` with `X = (o + o†)/√2`,
//! `Y = −i(o − o†)/√2` and vacuum variance 1/2.
//!
//! Cascade structure: the oscillator output drives the cavity through the
//! shared traveling field, giving a one-way drift block
//! `2√(κ_a⁽ˢ⁾ κ_c⁽ˢ⁾)` and a negative cross-diffusion between the two modes;
//! nothing couples back onto the oscillator. The noise prefactors follow the
//! `√(2κ)` input convention, which is the one that reproduces the analytic
//! reservoir spectra (calibrated against them in the test suite).

mod lyapunov;

pub use lyapunov::{solve_lyapunov, solve_sylvester};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::ValidatedModel;

/// Dimension of the quadrature system.
pub const DIM: usize = 6;

/// Drift and diffusion of the cascaded linear system.
#[derive(Debug, Clone)]
pub struct LinearGaussianModel {
    drift: DMatrix<f64>,
    diffusion: DMatrix<f64>,
    /// Full (non-symmetrized) noise correlation: `diffusion + i/2 · J` with
    /// `J` the channel commutator matrix. Needed for quantum spectra, where
    /// operator ordering carries the sideband asymmetry.
    noise_full: DMatrix<Complex64>,
    stability_margin: f64,
}

impl LinearGaussianModel {
    /// 6×6 drift matrix `A`.
    pub fn drift(&self) -> &DMatrix<f64> {
        &self.drift
    }

    /// 6×6 symmetric positive-semidefinite diffusion matrix `D`.
    pub fn diffusion(&self) -> &DMatrix<f64> {
        &self.diffusion
    }

    /// Largest real part over the drift eigenvalues (negative for a stable model).
    pub fn stability_margin(&self) -> f64 {
        self.stability_margin
    }
}

/// Steady state of the cascaded model.
#[derive(Debug, Clone)]
pub struct OracleResult {
    /// 6×6 symmetrized covariance matrix.
    pub covariance: DMatrix<f64>,
    /// Mechanical occupancy `(V_xb + V_yb)/2 − 1/2`.
    pub phonon_number: f64,
    /// Largest real part over the drift eigenvalues.
    pub stability_margin: f64,
}

struct NoiseChannel {
    /// 6×2 map from the channel quadratures into the state noise vector.
    map: DMatrix<f64>,
    /// Symmetrized channel variance (1/2 for vacuum, N_th + 1/2 thermal).
    variance: f64,
}

fn channels(model: &ValidatedModel) -> Vec<NoiseChannel> {
    let kcs = model.squeezer().kappa_c_s;
    let kcl = model.squeezer().kappa_c_loss;
    let kas = model.optomech().kappa_a_s;
    let kal = model.optomech().kappa_a_loss;
    let gamma = model.gamma();

    let mut out = Vec::with_capacity(4);
    // controlled squeezer input: feeds the oscillator and, after reflection,
    // the cavity (the -√(2κ_a^s) term of the cascade input)
    let mut map = DMatrix::zeros(DIM, 2);
    map[(0, 0)] = (2.0 * kcs).sqrt();
    map[(1, 1)] = (2.0 * kcs).sqrt();
    map[(2, 0)] = -(2.0 * kas).sqrt();
    map[(3, 1)] = -(2.0 * kas).sqrt();
    out.push(NoiseChannel { map, variance: 0.5 });
    // uncontrolled oscillator loss
    let mut map = DMatrix::zeros(DIM, 2);
    map[(0, 0)] = (2.0 * kcl).sqrt();
    map[(1, 1)] = (2.0 * kcl).sqrt();
    out.push(NoiseChannel { map, variance: 0.5 });
    // cavity vacuum loss
    let mut map = DMatrix::zeros(DIM, 2);
    map[(2, 0)] = (2.0 * kal).sqrt();
    map[(3, 1)] = (2.0 * kal).sqrt();
    out.push(NoiseChannel { map, variance: 0.5 });
    // mechanical thermal bath
    let mut map = DMatrix::zeros(DIM, 2);
    map[(4, 0)] = gamma.sqrt();
    map[(5, 1)] = gamma.sqrt();
    out.push(NoiseChannel {
        map,
        variance: model.n_th() + 0.5,
    });
    out
}

/// Build the 6×6 drift and diffusion for a validated model.
///
/// Errors with [`Error::UnstableModel`] when any drift eigenvalue has a
/// nonnegative real part (e.g. blue detuning at strong coupling).
pub fn build_model(model: &ValidatedModel) -> Result<LinearGaussianModel> {
    let kc = model.kappa_c();
    let chi = model.chi();
    let ka = model.kappa_a();
    let da = model.delta_a();
    let g = model.g();
    let gamma = model.gamma();
    let wm = model.omega_m();
    let (s2p, c2p) = (2.0 * model.phi()).sin_cos();
    let cascade = 2.0 * (model.optomech().kappa_a_s * model.squeezer().kappa_c_s).sqrt();

    let mut a = DMatrix::zeros(DIM, DIM);
    // oscillator: pump rotates the squeezing ellipse by the phase
    a[(0, 0)] = -kc + chi * c2p;
    a[(0, 1)] = -chi * s2p;
    a[(1, 0)] = -chi * s2p;
    a[(1, 1)] = -kc - chi * c2p;
    // cavity, driven one-way by the oscillator output
    a[(2, 0)] = cascade;
    a[(2, 2)] = -ka;
    a[(2, 3)] = da;
    a[(3, 1)] = cascade;
    a[(3, 2)] = -da;
    a[(3, 3)] = -ka;
    a[(3, 4)] = 2.0 * g;
    // mechanics
    a[(4, 4)] = -0.5 * gamma;
    a[(4, 5)] = wm;
    a[(5, 2)] = 2.0 * g;
    a[(5, 4)] = -wm;
    a[(5, 5)] = -0.5 * gamma;

    let margin = a
        .complex_eigenvalues()
        .iter()
        .map(|e| e.re)
        .fold(f64::NEG_INFINITY, f64::max);
    if margin >= 0.0 {
        return Err(Error::UnstableModel { margin });
    }

    let mut diffusion = DMatrix::<f64>::zeros(DIM, DIM);
    let mut noise_full = DMatrix::<Complex64>::zeros(DIM, DIM);
    let eps = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]);
    for ch in channels(model) {
        diffusion += ch.variance * &ch.map * ch.map.transpose();
        let corr = (&ch.map * &eps * ch.map.transpose()).map(|x| Complex64::new(0.0, 0.5 * x));
        noise_full += corr;
    }
    noise_full += diffusion.map(|x| Complex64::new(x, 0.0));

    Ok(LinearGaussianModel {
        drift: a,
        diffusion,
        noise_full,
        stability_margin: margin,
    })
}

/// Solve `A V + V Aᵀ + D = 0` for the steady covariance and phonon number.
///
/// The drift is block lower-triangular in the cascade ordering, so the solve
/// proceeds oscillator block → cross block (Sylvester) → cavity+mechanics
/// block. The oscillator covariance therefore depends only on oscillator
/// parameters, bit for bit.
pub fn solve_steady_state(model: &LinearGaussianModel) -> Result<OracleResult> {
    let a = &model.drift;
    let d = &model.diffusion;
    let a1 = a.view((0, 0), (2, 2)).into_owned();
    let a21 = a.view((2, 0), (4, 2)).into_owned();
    let a22 = a.view((2, 2), (4, 4)).into_owned();
    let d11 = d.view((0, 0), (2, 2)).into_owned();
    let d12 = d.view((0, 2), (2, 4)).into_owned();
    let d22 = d.view((2, 2), (4, 4)).into_owned();

    let v11 = solve_lyapunov(&a1, &d11)?;
    // A₁ V₁₂ + V₁₂ A₂₂ᵀ + (V₁₁ A₂₁ᵀ + D₁₂) = 0
    let v12 = solve_sylvester(&a1, &a22.transpose(), &(&v11 * a21.transpose() + &d12))?;
    // A₂₂ V₂₂ + V₂₂ A₂₂ᵀ + (A₂₁ V₁₂ + (A₂₁ V₁₂)ᵀ + D₂₂) = 0
    let cross = &a21 * &v12;
    let q22 = &cross + cross.transpose() + &d22;
    let v22 = solve_lyapunov(&a22, &q22)?;

    let mut v = DMatrix::<f64>::zeros(DIM, DIM);
    v.view_mut((0, 0), (2, 2)).copy_from(&v11);
    v.view_mut((0, 2), (2, 4)).copy_from(&v12);
    v.view_mut((2, 0), (4, 2)).copy_from(&v12.transpose());
    v.view_mut((2, 2), (4, 4)).copy_from(&v22);

    let residual = a * &v + &v * a.transpose() + d;
    if residual.norm() > 1e-10 * d.norm() {
        return Err(Error::SolverFailure(format!(
            "Lyapunov residual {:.3e} exceeds 1e-10 of the diffusion norm",
            residual.norm() / d.norm()
        )));
    }

    Ok(OracleResult {
        phonon_number: 0.5 * (v[(4, 4)] + v[(5, 5)]) - 0.5,
        covariance: v,
        stability_margin: model.stability_margin,
    })
}

/// Symplectic form for the `(X, Y)` pairs: `[X_i, X_j] = i Ω_ij`.
pub fn symplectic_form() -> DMatrix<f64> {
    let mut omega = DMatrix::zeros(DIM, DIM);
    for k in 0..3 {
        omega[(2 * k, 2 * k + 1)] = 1.0;
        omega[(2 * k + 1, 2 * k)] = -1.0;
    }
    omega
}

/// Smallest eigenvalue of `V + iΩ/2`; nonnegative (within round-off) for any
/// physical Gaussian state.
pub fn physicality_margin(covariance: &DMatrix<f64>) -> f64 {
    let omega = symplectic_form();
    let m = covariance.map(|x| Complex64::new(x, 0.0))
        + omega.map(|x| Complex64::new(0.0, 0.5 * x));
    SymmetricEigen::new(m)
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

fn resolvent(a: &DMatrix<f64>, omega: f64) -> Result<DMatrix<Complex64>> {
    let n = a.nrows();
    let mut m = a.map(|x| Complex64::new(x, 0.0));
    for i in 0..n {
        m[(i, i)] += Complex64::new(0.0, omega);
    }
    m.try_inverse()
        .ok_or_else(|| Error::SolverFailure(format!("drift + i{omega} not invertible")))
}

/// Stationary quantum spectrum matrix `S(ω) = (A + iω)⁻¹ N (Aᵀ − iω)⁻¹`
/// with `N` the full noise correlation.
fn spectrum_matrix(model: &LinearGaussianModel, omega: f64) -> Result<DMatrix<Complex64>> {
    let r1 = resolvent(&model.drift, omega)?;
    let r2 = resolvent(&model.drift.transpose(), -omega)?;
    Ok(&r1 * &model.noise_full * &r2)
}

/// Force spectrum `s_a(ω) = ∫dt e^{iωt} ⟨Y(t)Y(0)⟩` with `Y = a + a† = √2 X_a`,
/// computed from the transfer function of the cascaded system.
///
/// Requires a model built at zero optomechanical coupling, since the analytic
/// spectrum is defined for the undisturbed cavity field.
pub fn oracle_force_spectrum(omega: f64, model: &LinearGaussianModel) -> Result<f64> {
    if model.drift[(3, 4)] != 0.0 || model.drift[(5, 2)] != 0.0 {
        return Err(Error::Domain(
            "oracle force spectrum requires a model built with g = 0".into(),
        ));
    }
    let s = spectrum_matrix(model, omega)?;
    let val = s[(2, 2)];
    debug_assert!(val.im.abs() <= 1e-9 * (1.0 + val.re.abs()));
    Ok(2.0 * val.re)
}

/// Input squeezing spectrum of the field entering the cavity, computed in the
/// frequency domain from the oscillator's input-output relations (never from
/// the analytic reservoir spectra).
///
/// Evaluates the power spectrum of the maximally squeezed input quadrature
/// `Y_in = a_in e^{i(π/2+φ)} + a_in† e^{−i(π/2+φ)}`.
pub fn oracle_input_squeezing_spectrum(omega: f64, model: &ValidatedModel) -> Result<f64> {
    let kc = model.kappa_c();
    let chi = model.chi();
    let kcs = model.squeezer().kappa_c_s;
    let kcl = model.squeezer().kappa_c_loss;
    let kas = model.optomech().kappa_a_s;
    let kal = model.optomech().kappa_a_loss;
    let ka = model.kappa_a();
    let (s2p, c2p) = (2.0 * model.phi()).sin_cos();

    let a_osc = DMatrix::from_row_slice(
        2,
        2,
        &[-kc + chi * c2p, -chi * s2p, -chi * s2p, -kc - chi * c2p],
    );
    // G_c(ω) = (−iω − A)⁻¹
    let mut m = a_osc.map(|x| Complex64::new(-x, 0.0));
    m[(0, 0)] -= Complex64::new(0.0, omega);
    m[(1, 1)] -= Complex64::new(0.0, omega);
    let gc = m
        .try_inverse()
        .ok_or_else(|| Error::SolverFailure("oscillator resolvent not invertible".into()))?;

    let c = |x: f64| Complex64::new(x, 0.0);
    let eye = DMatrix::<Complex64>::identity(2, 2);
    // cavity input z(ω) = T_s w_s + T_cl w_cl + T_al w_al
    let t_s = (&gc * c(2.0 * kcs) - &eye) * c((kas / ka).sqrt());
    let t_cl = &gc * c(2.0 * (kas * kcs * kcl / ka).sqrt());
    let t_al = &eye * c((kal / ka).sqrt());

    let vac = DMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::new(0.5, 0.0),
            Complex64::new(0.0, 0.5),
            Complex64::new(0.0, -0.5),
            Complex64::new(0.5, 0.0),
        ],
    );
    let mut s_z = DMatrix::<Complex64>::zeros(2, 2);
    for t in [&t_s, &t_cl, &t_al] {
        s_z += t * &vac * t.adjoint();
    }

    let theta = std::f64::consts::FRAC_PI_2 + model.phi();
    let v = nalgebra::DVector::from_column_slice(&[
        Complex64::new(theta.cos(), 0.0),
        Complex64::new(-theta.sin(), 0.0),
    ]);
    let val = (v.transpose() * &s_z * &v)[(0, 0)];
    debug_assert!(val.im.abs() <= 1e-9);
    Ok(2.0 * val.re)
}

/// Render a matrix as CSV, row-major, with 17 significant digits.
pub fn matrix_to_csv(m: &DMatrix<f64>) -> String {
    let mut out = String::new();
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols()).map(|j| format!("{:.16e}", m[(i, j)])).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}
