//! Closed forms of the dephasing matrices for an uncut bath with integer
//! Ohmicity `s ≥ 2`, split into vacuum and thermal parts.
//!
//! The vacuum parts are sums of `℘(s−1)(1+x²)^{(1−s)/2}{cos,sin}((s−1)·atan x)`
//! evaluated at `x = τ` and at the retarded/advanced times `t ∓ τ`. The thermal
//! parts come from expanding `coth` and `tanh` in powers of `e^{−ω/T}` and
//! summing the resulting Hurwitz series as polygamma functions of order `s−2`.
//!
//! Conventions adopted after fitting against the quadrature kernels:
//! - `Γ^th` carries the prefactor `(−1)^{s−1} τ_T^{1−s}` in front of
//!   `Re[2Ψ(z_τ) − Ψ(z_+) − Ψ(z_−)]`, i.e. half of `[2Ψ − Ψ − Ψ + c.c.]`.
//! - `Γ⁻` is `℘(s−1)/2 · [2S(τ) + S(t−τ) − S(t+τ)]`, which vanishes at `τ = 0`
//!   and at `t = 0`, and is odd in `τ`.
//! - the second polygamma term of `B^th` is taken at `τ`, not at `t`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::specfun::{gamma_fn, polygamma, PolyOrder};

/// Retarded and advanced times `t ∓ τ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RetardedTimes {
    pub t_minus: f64,
    pub t_plus: f64,
}

impl RetardedTimes {
    pub fn new(tau: f64, t: f64) -> Self {
        Self {
            t_minus: t - tau,
            t_plus: t + tau,
        }
    }
}

fn integer_exponent(s: f64) -> Result<f64> {
    if s.fract() != 0.0 || s < 2.0 {
        return Err(Error::UnsupportedBranch {
            s,
            reason: "closed forms need an integer exponent s >= 2; use quadrature",
        });
    }
    Ok(s)
}

fn check_time(t: f64) -> Result<()> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::Domain {
            function: "analytic",
            detail: format!("time t = {t} must be finite and >= 0"),
        });
    }
    Ok(())
}

/// `(1 + x²)^{−p/2}` through logs so large `x` cannot overflow.
fn damping(x: f64, p: f64) -> f64 {
    (-0.5 * p * (x * x).ln_1p()).exp()
}

/// `(1+x²)^{(1−s)/2} cos((s−1) atan x)`.
fn vac_cos(s: f64, x: f64) -> f64 {
    damping(x, s - 1.0) * ((s - 1.0) * x.atan()).cos()
}

/// `(1+x²)^{(1−s)/2} sin((s−1) atan x)`.
fn vac_sin(s: f64, x: f64) -> f64 {
    damping(x, s - 1.0) * ((s - 1.0) * x.atan()).sin()
}

/// Vacuum part of `Γ_nm(t)`, shared with the fidelity matrix.
pub fn gamma_vac(s: f64, tau: f64, t: f64) -> Result<f64> {
    let s = integer_exponent(s)?;
    check_time(t)?;
    let r = RetardedTimes::new(tau, t);
    let g = gamma_fn(s - 1.0)?;
    Ok(0.5 * g * (2.0 * vac_cos(s, tau) - vac_cos(s, r.t_minus) - vac_cos(s, r.t_plus)))
}

fn thermal_arg(base: f64, shift: f64, x: f64, scale: f64) -> Complex64 {
    Complex64::new(base + shift, -x * scale)
}

fn assert_reflection_free(z: Complex64) {
    debug_assert!(z.re >= 0.5, "polygamma argument {z} left the Re z >= 1/2 domain");
}

/// Thermal correction to `Γ_nm(t)` at temperature `T = 1/τ_T`.
pub fn gamma_th(s: f64, tau: f64, t: f64, temperature: f64) -> Result<f64> {
    let s = integer_exponent(s)?;
    check_time(t)?;
    check_temperature(temperature)?;
    if temperature == 0.0 {
        return Ok(0.0);
    }
    let order = PolyOrder::from_ohmicity(s)?;
    let r = RetardedTimes::new(tau, t);
    let psi = |x: f64| -> Result<Complex64> {
        let z = thermal_arg(1.0, temperature, x, temperature);
        assert_reflection_free(z);
        polygamma(order, z)
    };
    let combo = 2.0 * psi(tau)? - psi(r.t_plus)? - psi(r.t_minus)?;
    Ok(sign_s_minus_1(s) * temperature.powf(s - 1.0) * combo.re)
}

/// `Γ⁺_nm(t)`; independent of temperature.
pub fn gamma_plus_analytic(s: f64, tau: f64, t: f64) -> Result<f64> {
    let s = integer_exponent(s)?;
    check_time(t)?;
    let r = RetardedTimes::new(tau, t);
    let g = gamma_fn(s - 1.0)?;
    let linear = 2.0 * (s - 1.0) * t * damping(tau, s) * (s * tau.atan()).cos();
    Ok(0.5 * g * (linear - vac_sin(s, r.t_minus) - vac_sin(s, r.t_plus)))
}

/// `Γ⁻_nm(t)`; independent of temperature, odd in `τ`.
pub fn gamma_minus_analytic(s: f64, tau: f64, t: f64) -> Result<f64> {
    let s = integer_exponent(s)?;
    check_time(t)?;
    let r = RetardedTimes::new(tau, t);
    let g = gamma_fn(s - 1.0)?;
    Ok(0.5 * g * (2.0 * vac_sin(s, tau) + vac_sin(s, r.t_minus) - vac_sin(s, r.t_plus)))
}

/// Thermal part of the fidelity matrix, `B^th_nm(t)`.
pub fn fidelity_th(s: f64, tau: f64, t: f64, temperature: f64) -> Result<f64> {
    let s = integer_exponent(s)?;
    check_time(t)?;
    check_temperature(temperature)?;
    if temperature == 0.0 {
        return Ok(0.0);
    }
    let order = PolyOrder::from_ohmicity(s)?;
    let r = RetardedTimes::new(tau, t);
    let half_t = 0.5 * temperature;
    let psi = |base: f64, x: f64| -> Result<Complex64> {
        let z = thermal_arg(base, half_t, x, half_t);
        assert_reflection_free(z);
        polygamma(order, z)
    };
    let combo = psi(1.0, tau)? - psi(0.5, tau)?
        - 0.5 * (psi(1.0, r.t_plus)? - psi(0.5, r.t_plus)?)
        - 0.5 * (psi(1.0, r.t_minus)? - psi(0.5, r.t_minus)?);
    Ok(sign_s_minus_1(s) * half_t.powf(s - 1.0) * 2.0 * combo.re)
}

/// Full fidelity entry `B^vac + B^th` with `B^vac = Γ^vac`.
pub fn fidelity_th_analytic(s: f64, tau: f64, t: f64, temperature: f64) -> Result<f64> {
    Ok(gamma_vac(s, tau, t)? + fidelity_th(s, tau, t, temperature)?)
}

/// Full decoherence entry `Γ^vac + Γ^th`.
pub fn gamma_analytic(s: f64, tau: f64, t: f64, temperature: f64) -> Result<f64> {
    Ok(gamma_vac(s, tau, t)? + gamma_th(s, tau, t, temperature)?)
}

/// Large-time limit of `Γ^vac`: `℘(s−1)(1+τ²)^{(1−s)/2} cos((s−1) atan τ)`.
pub fn gamma_vac_asymptote(s: f64, tau: f64) -> Result<f64> {
    let s = integer_exponent(s)?;
    Ok(gamma_fn(s - 1.0)? * vac_cos(s, tau))
}

fn sign_s_minus_1(s: f64) -> f64 {
    if (s as i64 - 1) % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn check_temperature(temperature: f64) -> Result<()> {
    if !temperature.is_finite() || temperature < 0.0 {
        return Err(Error::Domain {
            function: "analytic thermal part",
            detail: format!("temperature {temperature} must be finite and >= 0"),
        });
    }
    Ok(())
}

/// Dephasing matrices of an uncut bath from the closed forms.
pub fn assemble_uncut(
    s: f64,
    temperature: f64,
    geometry: &crate::geometry::Geometry,
    t: f64,
) -> Result<crate::register::DephasingMatrices> {
    use nalgebra::DMatrix;
    let l = geometry.len();
    let mut gamma = DMatrix::zeros(l, l);
    let mut gamma_plus = DMatrix::zeros(l, l);
    let mut gamma_minus = DMatrix::zeros(l, l);
    let mut fid = DMatrix::zeros(l, l);
    for n in 0..l {
        for m in n..l {
            let tau = geometry.tau(n, m);
            let vac = gamma_vac(s, tau, t)?;
            let g = vac + gamma_th(s, tau, t, temperature)?;
            let b = vac + fidelity_th(s, tau, t, temperature)?;
            let gp = gamma_plus_analytic(s, tau, t)?;
            gamma[(n, m)] = g;
            gamma[(m, n)] = g;
            fid[(n, m)] = b;
            fid[(m, n)] = b;
            gamma_plus[(n, m)] = gp;
            gamma_plus[(m, n)] = gp;
            if n != m {
                let gm = gamma_minus_analytic(s, tau, t)?;
                gamma_minus[(n, m)] = gm;
                gamma_minus[(m, n)] = -gm;
            }
        }
    }
    let mut fids = std::collections::BTreeMap::new();
    fids.insert(crate::kernels::UNCUT_MACROFRACTION.to_string(), fid);
    crate::register::DephasingMatrices::new(gamma, gamma_plus, gamma_minus, fids, t)
}
