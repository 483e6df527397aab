//! Independent reference implementations used as test oracles. Nothing here
//! calls into the library's quadrature or special-function code.
#![allow(dead_code)]

use num_complex::Complex64;

/// Composite Simpson rule with `n` (even) panels.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    assert!(n.is_multiple_of(2));
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + k as f64 * h);
    }
    acc * h / 3.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Gamma,
    GammaPlus,
    GammaMinus,
    Fidelity,
}

/// Kernel integrand written out directly from its definition, with the
/// `ω → 0` limit (zero for every kind when `s ≥ 2`).
pub fn integrand(kind: Kind, s: f64, temp: f64, tau: f64, t: f64, w: f64) -> f64 {
    if w == 0.0 {
        return 0.0;
    }
    let j = w.powf(s) * (-w).exp();
    let x = w / (2.0 * temp);
    let (coth, tanh) = if temp == 0.0 { (1.0, 1.0) } else { (1.0 / x.tanh(), x.tanh()) };
    match kind {
        Kind::Gamma => j * (1.0 - (w * t).cos()) / (w * w) * coth * (w * tau).cos(),
        Kind::GammaPlus => j * (w * t - (w * t).sin()) / (w * w) * (w * tau).cos(),
        Kind::GammaMinus => j * (1.0 - (w * t).cos()) / (w * w) * (w * tau).sin(),
        Kind::Fidelity => j * (1.0 - (w * t).cos()) / (w * w) * tanh * (w * tau).cos(),
    }
}

/// Full-window kernel entry by Simpson on `[0, 90]` with step `5e-4`.
pub fn kernel_simpson(kind: Kind, s: f64, temp: f64, tau: f64, t: f64) -> f64 {
    simpson(|w| integrand(kind, s, temp, tau, t, w), 0.0, 90.0, 180_000)
}

/// `Ψ^(m)(z)` from its defining series, summed term by term over `n` terms
/// (smallest first) with an Euler–Maclaurin tail.
///
/// `m ≥ 1`: `(−1)^{m+1} m! Σ_k (z+k)^{−(m+1)}`.
/// `m = 0`: `−γ_E + Σ_k [1/(k+1) − 1/(k+z)]`.
pub fn polygamma_series(m: u32, z: Complex64, n: usize) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    let nn = Complex64::new(n as f64, 0.0);
    if m == 0 {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in (0..n).rev() {
            let k = k as f64;
            acc += 1.0 / (k + 1.0) - one / (z + k);
        }
        // tail Σ_{k≥n} f(k), f(k) = 1/(k+1) − 1/(k+z)
        let f = one / (nn + 1.0) - one / (nn + z);
        let df = -one / ((nn + 1.0) * (nn + 1.0)) + one / ((nn + z) * (nn + z));
        let integral = ((nn + z) / (nn + 1.0)).ln();
        let tail = integral + f * 0.5 - df / 12.0;
        return -0.577_215_664_901_532_9 + acc + tail;
    }
    let p = (m + 1) as i32;
    let mut acc = Complex64::new(0.0, 0.0);
    for k in (0..n).rev() {
        acc += (z + k as f64).powi(-p);
    }
    let f = (nn + z).powi(-p);
    let df = -(p as f64) * (nn + z).powi(-p - 1);
    let integral = (nn + z).powi(-(m as i32)) / m as f64;
    let tail = integral + f * 0.5 - df / 12.0;
    let fact: f64 = (1..=m).map(f64::from).product();
    let sign = if m.is_multiple_of(2) { -1.0 } else { 1.0 };
    (acc + tail) * (sign * fact)
}

/// `ln Γ(x)` for `x > 0` by upward recurrence to `x ≥ 30` and the Stirling
/// series.
pub fn ln_gamma_stirling(mut x: f64) -> f64 {
    let mut shift = 0.0;
    while x < 30.0 {
        shift -= x.ln();
        x += 1.0;
    }
    let x2 = x * x;
    let series = 1.0 / (12.0 * x) - 1.0 / (360.0 * x * x2) + 1.0 / (1260.0 * x * x2 * x2)
        - 1.0 / (1680.0 * x * x2 * x2 * x2);
    shift + (x - 0.5) * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI).ln() + series
}

pub fn rel_err(a: f64, b: f64, floor: f64) -> f64 {
    let d = (a - b).abs();
    if d <= floor {
        0.0
    } else {
        d / b.abs().max(1e-300)
    }
}
