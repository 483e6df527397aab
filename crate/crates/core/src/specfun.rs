//! Euler gamma, Hurwitz zeta and polygamma functions.
//!
//! Polygamma and Hurwitz zeta share one strategy: shift the argument upwards
//! with the recurrence until its real part is large, then sum an asymptotic
//! (Euler–Maclaurin) tail whose coefficients are Bernoulli numbers. This gives
//! close to full double precision for `Re z ≥ 1/2` without arbitrary
//! precision arithmetic.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// `B_2, B_4, …, B_26`.
const BERNOULLI_EVEN: [f64; 13] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
];

/// Real part the argument is shifted to before the asymptotic tail is used.
const SHIFT_THRESHOLD: f64 = 16.0;

/// Order `m ≥ 0` of the polygamma function `Ψ^(m)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PolyOrder(pub u32);

impl PolyOrder {
    /// The order `s − 2` used by the thermal closed forms of an Ohmic-family
    /// bath with integer exponent `s ≥ 2`.
    pub fn from_ohmicity(s: f64) -> Result<Self> {
        if s.fract() != 0.0 || s < 2.0 {
            return Err(Error::UnsupportedBranch {
                s,
                reason: "thermal closed form needs an integer exponent s >= 2",
            });
        }
        Ok(PolyOrder((s - 2.0) as u32))
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Euler gamma function for real `x > 0`.
pub fn gamma_fn(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain {
            function: "gamma_fn",
            detail: format!("x = {x} (need finite x > 0)"),
        });
    }
    if x.fract() == 0.0 && x <= 171.0 {
        return Ok(factorial(x as u32 - 1));
    }
    if x < 0.5 {
        // reflection keeps the Lanczos sum in its accurate range
        return Ok(PI / ((PI * x).sin() * lanczos(1.0 - x)));
    }
    Ok(lanczos(x))
}

fn lanczos(x: f64) -> f64 {
    let x = x - 1.0;
    let mut acc = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * acc
}

/// Hurwitz zeta `ζ(s, z) = Σ_{k≥0} (z + k)^{−s}` for real `s > 1`, `Re z > 0`.
pub fn hurwitz_zeta(s: f64, z: Complex64) -> Result<Complex64> {
    if !(s > 1.0) || !s.is_finite() {
        return Err(Error::Domain {
            function: "hurwitz_zeta",
            detail: format!("s = {s} (need s > 1)"),
        });
    }
    if !(z.re > 0.0) || !z.im.is_finite() {
        return Err(Error::Domain {
            function: "hurwitz_zeta",
            detail: format!("z = {z} (need Re z > 0)"),
        });
    }
    let target = SHIFT_THRESHOLD + s;
    let shift = if z.re < target {
        (target - z.re).ceil() as usize
    } else {
        0
    };
    let mut head = Complex64::new(0.0, 0.0);
    for k in 0..shift {
        head += (-s * (z + k as f64).ln()).exp();
    }
    let w = z + shift as f64;
    let ln_w = w.ln();
    let w_pow = |p: f64| (p * ln_w).exp();

    let mut tail = w_pow(1.0 - s) / (s - 1.0) + 0.5 * w_pow(-s);
    // rising factorial s(s+1)…(s+2j−2) over (2j)!
    let mut coeff = s / 2.0;
    let mut power = w_pow(-s - 1.0);
    let inv_w2 = 1.0 / (w * w);
    for (j, b) in BERNOULLI_EVEN.iter().enumerate() {
        let term = *b * coeff * power;
        tail += term;
        if term.norm() <= 1e-18 * tail.norm() {
            break;
        }
        let j = (j + 1) as f64;
        coeff *= (s + 2.0 * j - 1.0) * (s + 2.0 * j) / ((2.0 * j + 1.0) * (2.0 * j + 2.0));
        power *= inv_w2;
    }
    Ok(head + tail)
}

fn is_pole(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0
}

/// Polygamma `Ψ^(m)(z) = d^{m+1}/dz^{m+1} ln Γ(z)` at complex `z`.
///
/// For `m ≥ 1` this equals `Σ_k (−1)^{m+1} m! / (z + k)^{m+1}`; `m = 0` is the
/// digamma function.
pub fn polygamma(m: PolyOrder, z: Complex64) -> Result<Complex64> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::Domain {
            function: "polygamma",
            detail: format!("z = {z} is not finite"),
        });
    }
    if is_pole(z) {
        return Err(Error::Domain {
            function: "polygamma",
            detail: format!("z = {z} is a pole"),
        });
    }
    let m = m.get();
    let mf = factorial(m);
    let sign = if m.is_multiple_of(2) { -1.0 } else { 1.0 }; // (−1)^{m+1}

    let shift = if z.re < SHIFT_THRESHOLD {
        (SHIFT_THRESHOLD - z.re).ceil() as usize
    } else {
        0
    };
    let mut head = Complex64::new(0.0, 0.0);
    for k in 0..shift {
        let inv = 1.0 / (z + k as f64);
        head += inv.powu(m + 1);
    }
    head *= sign * mf;

    let w = z + shift as f64;
    let inv_w = 1.0 / w;
    let inv_w2 = inv_w * inv_w;

    let tail = if m == 0 {
        let mut acc = w.ln() - 0.5 * inv_w;
        let mut power = inv_w2;
        for (k, b) in BERNOULLI_EVEN.iter().enumerate() {
            let term = *b / (2.0 * (k + 1) as f64) * power;
            acc -= term;
            if term.norm() <= 1e-18 * acc.norm() {
                break;
            }
            power *= inv_w2;
        }
        acc
    } else {
        let mut acc = factorial(m - 1) * inv_w.powu(m) + 0.5 * mf * inv_w.powu(m + 1);
        // (2k+m−1)!/(2k)! for k = 1
        let mut coeff: f64 = (2..=m).map(|j| f64::from(j + 1)).product();
        let mut power = inv_w.powu(m + 2);
        for (k, b) in BERNOULLI_EVEN.iter().enumerate() {
            let term = *b * coeff * power;
            acc += term;
            if term.norm() <= 1e-18 * acc.norm() {
                break;
            }
            let k = (k + 1) as f64;
            let mm = f64::from(m);
            coeff *= (2.0 * k + mm) * (2.0 * k + mm + 1.0) / ((2.0 * k + 1.0) * (2.0 * k + 2.0));
            power *= inv_w2;
        }
        sign * acc
    };
    Ok(head + tail)
}
