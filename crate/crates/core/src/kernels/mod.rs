//! Continuum-limit matrix elements of the four dephasing matrices, evaluated
//! by quadrature over arbitrary frequency windows.
//!
//! With `w(ω) = J(ω)/ω²` the entries for a transit time `τ` are
//!
//! ```text
//! Γ(τ, t)   = ∫_{unobserved} w(ω) (1 − cos ωt) coth(ω/2T) cos ωτ dω
//! Γ⁺(τ, t)  = ∫_{unobserved} w(ω) (ωt − sin ωt)            cos ωτ dω
//! Γ⁻(τ, t)  = ∫_{unobserved} w(ω) (1 − cos ωt)             sin ωτ dω
//! B^M(τ, t) = ∫_{M}          w(ω) (1 − cos ωt) tanh(ω/2T) cos ωτ dω
//! ```
//!
//! `Γ⁻` carries no factor ½: that normalisation is the one the Gaussian mode
//! algebra produces for the phase `−2εᵀΓ⁻ε′` (see `gaussian`).

mod bath;
pub mod quadrature;

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::PI;

use nalgebra::DMatrix;

pub use bath::{BathSpec, FrequencyWindow, SpectralDensity, UNCUT_MACROFRACTION};
pub use quadrature::{Estimate, QuadConfig};

use crate::error::{Error, Result};
use crate::geometry::Geometry;
use crate::register::DephasingMatrices;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EntryKind {
    Gamma,
    GammaPlus,
    GammaMinus,
    Fidelity,
}

/// `1 − cos x` without cancellation.
pub fn one_minus_cos(x: f64) -> f64 {
    let h = (0.5 * x).sin();
    2.0 * h * h
}

/// `x − sin x` without cancellation.
pub fn x_minus_sin(x: f64) -> f64 {
    if x.abs() < 0.1 {
        let x2 = x * x;
        x * x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0 * (1.0 - x2 / 72.0)))
    } else {
        x - x.sin()
    }
}

/// `coth(ω/2T)`, equal to 1 at `T = 0`.
pub fn coth_factor(omega: f64, temperature: f64) -> f64 {
    if temperature == 0.0 {
        return 1.0;
    }
    1.0 / (omega / (2.0 * temperature)).tanh()
}

/// `tanh(ω/2T)`, equal to 1 at `T = 0`.
pub fn tanh_factor(omega: f64, temperature: f64) -> f64 {
    if temperature == 0.0 {
        return 1.0;
    }
    (omega / (2.0 * temperature)).tanh()
}

/// Integrand of the requested entry at frequency `omega > 0`.
pub fn integrand(kind: EntryKind, sd: &SpectralDensity, temperature: f64, tau: f64, t: f64, omega: f64) -> f64 {
    let w = sd.weight(omega);
    match kind {
        EntryKind::Gamma => {
            w * one_minus_cos(omega * t) * coth_factor(omega, temperature) * (omega * tau).cos()
        }
        EntryKind::GammaPlus => w * x_minus_sin(omega * t) * (omega * tau).cos(),
        EntryKind::GammaMinus => w * one_minus_cos(omega * t) * (omega * tau).sin(),
        EntryKind::Fidelity => {
            w * one_minus_cos(omega * t) * tanh_factor(omega, temperature) * (omega * tau).cos()
        }
    }
}

/// Bound on `∫_{cut}^∞ |integrand|` used to decide whether the truncated
/// frequency axis is long enough.
fn tail_bound(kind: EntryKind, sd: &SpectralDensity, temperature: f64, t: f64, cut: f64) -> f64 {
    let (power, scale) = match kind {
        EntryKind::GammaPlus => (sd.s() - 1.0, t + 1.0 / cut),
        EntryKind::Gamma => (sd.s() - 2.0, 2.0 * coth_factor(cut, temperature)),
        EntryKind::GammaMinus | EntryKind::Fidelity => (sd.s() - 2.0, 2.0),
    };
    if cut <= power {
        return f64::INFINITY;
    }
    scale * (power * cut.ln() - cut).exp() / (1.0 - power / cut)
}

fn panel_breaks(lo: f64, hi: f64, max_len: f64) -> Vec<f64> {
    let n = ((hi - lo) / max_len).ceil().max(1.0) as usize;
    let step = (hi - lo) / n as f64;
    let mut out: Vec<f64> = (0..n).map(|k| lo + k as f64 * step).collect();
    out.push(hi);
    out
}

/// Integral of one entry over `window`.
pub fn entry_over(
    kind: EntryKind,
    sd: &SpectralDensity,
    temperature: f64,
    window: &FrequencyWindow,
    tau: f64,
    t: f64,
    cfg: &QuadConfig,
) -> Result<Estimate> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::Domain {
            function: "kernel entry",
            detail: format!("time t = {t} must be finite and >= 0"),
        });
    }
    if !tau.is_finite() {
        return Err(Error::Domain {
            function: "kernel entry",
            detail: format!("transit time τ = {tau} must be finite"),
        });
    }
    if t == 0.0 || window.is_empty() {
        return Ok(Estimate::zero());
    }
    if kind == EntryKind::GammaMinus && tau == 0.0 {
        return Ok(Estimate::zero());
    }
    let f = |omega: f64| integrand(kind, sd, temperature, tau, t, omega);
    let max_len = PI / (t + tau.abs()).max(1.0);

    let mut cut = sd.truncation();
    let mut total = Estimate::zero();
    let mut done = 0.0;
    loop {
        for &(lo, hi) in window.intervals() {
            let (a, b) = (lo.max(done), hi.min(cut));
            if a < b {
                total = total + quadrature::integrate(&f, &panel_breaks(a, b, max_len), cfg);
            }
        }
        done = cut;
        let beyond = window.intervals().iter().any(|&(_, hi)| hi > cut);
        if !beyond {
            break;
        }
        let tail = tail_bound(kind, sd, temperature, t, cut);
        if tail <= cfg.abs_tol.max(0.01 * cfg.rel_tol * total.value.abs()) {
            total.error += tail;
            break;
        }
        cut += 20.0;
        if cut > 1e4 {
            total.error += tail;
            break;
        }
    }
    if !total.value.is_finite() || !total.error.is_finite() {
        return Err(Error::NonConvergent {
            value: total.value,
            error: total.error,
        });
    }
    Ok(total)
}

/// `Γ_nm(t)` over the unobserved window for transit time `tau`.
pub fn gamma_entry(bath: &BathSpec, tau: f64, t: f64) -> Result<Estimate> {
    entry_over(
        EntryKind::Gamma,
        bath.sd(),
        bath.temperature(),
        bath.unobserved(),
        tau,
        t,
        &QuadConfig::default(),
    )
}

/// `Γ⁺_nm(t)` over the unobserved window.
pub fn gamma_plus_entry(bath: &BathSpec, tau: f64, t: f64) -> Result<Estimate> {
    entry_over(
        EntryKind::GammaPlus,
        bath.sd(),
        bath.temperature(),
        bath.unobserved(),
        tau,
        t,
        &QuadConfig::default(),
    )
}

/// `Γ⁻_nm(t)` over the unobserved window; odd in `tau`.
pub fn gamma_minus_entry(bath: &BathSpec, tau: f64, t: f64) -> Result<Estimate> {
    entry_over(
        EntryKind::GammaMinus,
        bath.sd(),
        bath.temperature(),
        bath.unobserved(),
        tau,
        t,
        &QuadConfig::default(),
    )
}

/// `B^M_nm(t)` over the window of macrofraction `mac`.
pub fn fidelity_entry(bath: &BathSpec, mac: &str, tau: f64, t: f64) -> Result<Estimate> {
    entry_over(
        EntryKind::Fidelity,
        bath.sd(),
        bath.temperature(),
        bath.macrofraction(mac)?,
        tau,
        t,
        &QuadConfig::default(),
    )
}

/// Dephasing matrices together with the largest quadrature error estimate
/// among their entries.
#[derive(Debug, Clone, PartialEq)]
pub struct Assembly {
    pub matrices: DephasingMatrices,
    pub max_error: f64,
}

pub fn assemble(bath: &BathSpec, geometry: &Geometry, t: f64) -> Result<Assembly> {
    assemble_with(bath, geometry, t, &QuadConfig::default())
}

/// Fill all four matrices entry by entry. Entries are computed once per
/// distinct transit time, so equal transit times give bitwise-equal entries.
pub fn assemble_with(bath: &BathSpec, geometry: &Geometry, t: f64, cfg: &QuadConfig) -> Result<Assembly> {
    let l = geometry.len();
    let sd = bath.sd();
    let temp = bath.temperature();
    let mut max_error: f64 = 0.0;

    let mut cache: HashMap<(u64, EntryKind, Option<usize>), f64> = HashMap::new();
    let mut lookup = |kind: EntryKind, mac: Option<usize>, window: &FrequencyWindow, tau: f64| -> Result<f64> {
        let key = (tau.to_bits(), kind, mac);
        if let Some(v) = cache.get(&key) {
            return Ok(*v);
        }
        let est = entry_over(kind, sd, temp, window, tau, t, cfg)?;
        max_error = max_error.max(est.error);
        cache.insert(key, est.value);
        Ok(est.value)
    };

    let mut gamma = DMatrix::zeros(l, l);
    let mut gamma_plus = DMatrix::zeros(l, l);
    let mut gamma_minus = DMatrix::zeros(l, l);
    let mut fid: BTreeMap<String, DMatrix<f64>> = bath
        .macrofractions()
        .keys()
        .map(|k| (k.clone(), DMatrix::zeros(l, l)))
        .collect();

    for n in 0..l {
        for m in n..l {
            let tau = geometry.tau(n, m);
            let g = lookup(EntryKind::Gamma, None, bath.unobserved(), tau)?;
            let gp = lookup(EntryKind::GammaPlus, None, bath.unobserved(), tau)?;
            gamma[(n, m)] = g;
            gamma[(m, n)] = g;
            gamma_plus[(n, m)] = gp;
            gamma_plus[(m, n)] = gp;
            if n != m {
                let gm = lookup(EntryKind::GammaMinus, None, bath.unobserved(), tau)?;
                gamma_minus[(n, m)] = gm;
                gamma_minus[(m, n)] = -gm;
            }
            for (k, (id, window)) in bath.macrofractions().iter().enumerate() {
                let b = lookup(EntryKind::Fidelity, Some(k), window, tau)?;
                let mat = fid.get_mut(id).expect("macrofraction matrix allocated above");
                mat[(n, m)] = b;
                mat[(m, n)] = b;
            }
        }
    }

    Ok(Assembly {
        matrices: DephasingMatrices::new(gamma, gamma_plus, gamma_minus, fid, t)?,
        max_error,
    })
}
