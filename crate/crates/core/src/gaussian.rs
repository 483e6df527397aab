//! Single bosonic modes under the controlled displacement, evaluated with
//! closed Gaussian-state formulas. This is the discrete ground truth the
//! continuum kernels are checked against.
//!
//! Each mode evolves as `U_k(t; ε) = D(α(t) ε·g) · exp(i|ε·g|² ξ(t))`, with
//! `α(t) = (1 − e^{iωt})/ω` and `ξ(t) = (ωt − sin ωt)/ω²`, starting from a
//! thermal state.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernels::{
    coth_factor, entry_over, one_minus_cos, tanh_factor, x_minus_sin, BathSpec, EntryKind, FrequencyWindow,
    QuadConfig,
};
use crate::register::{log_decoherence, log_fidelity, pair_delta, DephasingMatrices, RegisterLabel};

/// Identifier of the single-mode fidelity matrix in [`mode_summands`].
pub const MODE_MACROFRACTION: &str = "mode";

/// `α(t) = (1 − e^{iωt})/ω`.
pub fn alpha_t(omega: f64, t: f64) -> Complex64 {
    (Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, omega * t)) / omega
}

/// `ξ(t) = (ωt − sin ωt)/ω²`. For small `ω` it behaves as `ωt³/6`, so it
/// vanishes at `ω = 0`.
pub fn xi_t(omega: f64, t: f64) -> f64 {
    if omega == 0.0 {
        return 0.0;
    }
    x_minus_sin(omega * t) / (omega * omega)
}

/// Bose–Einstein occupation `1/(e^{ω/T} − 1)`, zero at `T = 0`.
pub fn nbar(omega: f64, temperature: f64) -> f64 {
    if temperature == 0.0 {
        return 0.0;
    }
    1.0 / (omega / temperature).exp_m1()
}

/// One field mode and its couplings `g_k^n = g·e^{−iφ_n}` to the `L` qubits,
/// with `φ_n = k·r_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeSpec {
    omega: f64,
    g: f64,
    phases: Vec<f64>,
}

impl ModeSpec {
    pub fn new(omega: f64, g: f64, phases: Vec<f64>) -> Result<Self> {
        if !(omega > 0.0) || !omega.is_finite() {
            return Err(Error::Domain {
                function: "ModeSpec::new",
                detail: format!("mode frequency {omega} must be > 0"),
            });
        }
        if !g.is_finite() || g < 0.0 {
            return Err(Error::Domain {
                function: "ModeSpec::new",
                detail: format!("coupling magnitude {g} must be finite and >= 0"),
            });
        }
        if phases.is_empty() {
            return Err(Error::EmptyRegister);
        }
        if phases.iter().any(|p| !p.is_finite()) {
            return Err(Error::Domain {
                function: "ModeSpec::new",
                detail: "phases must be finite".into(),
            });
        }
        Ok(Self { omega, g, phases })
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub fn len(&self) -> usize {
        self.phases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phases.is_empty()
    }

    pub fn coupling(&self, n: usize) -> Complex64 {
        Complex64::from_polar(self.g, -self.phases[n])
    }

    /// `ε·g_k = Σ_n ε_n g_k^n`.
    pub fn contract(&self, eps: &RegisterLabel) -> Result<Complex64> {
        if eps.len() != self.len() {
            return Err(Error::Dimension {
                expected: self.len(),
                got: eps.len(),
            });
        }
        Ok(eps
            .values()
            .iter()
            .enumerate()
            .map(|(n, &e)| self.coupling(n) * e)
            .sum())
    }
}

/// `D(β) ρ_th D(β)†` for a thermal state of occupation `nbar`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DisplacedThermalMode {
    pub beta: Complex64,
    pub nbar: f64,
}

impl DisplacedThermalMode {
    pub fn new(beta: Complex64, nbar: f64) -> Result<Self> {
        if !(nbar >= 0.0) {
            return Err(Error::Domain {
                function: "DisplacedThermalMode::new",
                detail: format!("occupation {nbar} must be >= 0"),
            });
        }
        Ok(Self { beta, nbar })
    }

    fn same_bath(&self, other: &Self) -> Result<()> {
        if self.nbar != other.nbar {
            return Err(Error::Domain {
                function: "DisplacedThermalMode",
                detail: format!("occupations differ ({} vs {})", self.nbar, other.nbar),
            });
        }
        Ok(())
    }

    /// `tr[D(β) ρ_th D(β′)†] = exp(−(n̄+½)|β−β′|²) · exp(i Im(β′* β))`.
    pub fn overlap(&self, other: &Self) -> Result<Complex64> {
        self.same_bath(other)?;
        let d = self.beta - other.beta;
        let modulus = if d == Complex64::new(0.0, 0.0) {
            1.0
        } else {
            (-(self.nbar + 0.5) * d.norm_sqr()).exp()
        };
        Ok(Complex64::from_polar(modulus, (other.beta.conj() * self.beta).im))
    }

    /// Uhlmann root fidelity `tr√(√ρ σ √ρ) = exp(−|β−β′|² / (2(2n̄+1)))`.
    pub fn fidelity(&self, other: &Self) -> Result<f64> {
        self.same_bath(other)?;
        let d = (self.beta - other.beta).norm_sqr();
        if d == 0.0 {
            return Ok(1.0);
        }
        Ok((-d / (2.0 * (2.0 * self.nbar + 1.0))).exp())
    }
}

fn check_temperature(temperature: f64) -> Result<()> {
    if !(temperature >= 0.0) {
        return Err(Error::Bath(format!("temperature {temperature} must be >= 0")));
    }
    Ok(())
}

/// `tr[U_k(t;ε) ρ_th U_k(t;ε′)†]` for one mode.
///
/// Its logarithm is the complex conjugate of the per-mode contribution to
/// [`log_decoherence`]; the modulus matches exactly.
pub fn mode_decoherence(
    mode: &ModeSpec,
    eps: &RegisterLabel,
    eps2: &RegisterLabel,
    temperature: f64,
    t: f64,
) -> Result<Complex64> {
    check_temperature(temperature)?;
    let a = alpha_t(mode.omega, t);
    let (c1, c2) = (mode.contract(eps)?, mode.contract(eps2)?);
    if eps.len() != eps2.len() {
        return Err(Error::Dimension {
            expected: eps.len(),
            got: eps2.len(),
        });
    }
    let n = if temperature.is_infinite() { f64::INFINITY } else { nbar(mode.omega, temperature) };
    let s1 = DisplacedThermalMode::new(a * c1, n)?;
    let s2 = DisplacedThermalMode::new(a * c2, n)?;
    let xi = xi_t(mode.omega, t);
    Ok(s1.overlap(&s2)? * Complex64::from_polar(1.0, xi * (c1.norm_sqr() - c2.norm_sqr())))
}

/// Root fidelity between the mode states conditioned on `eps` and `eps2`.
pub fn mode_fidelity(
    mode: &ModeSpec,
    eps: &RegisterLabel,
    eps2: &RegisterLabel,
    temperature: f64,
    t: f64,
) -> Result<f64> {
    check_temperature(temperature)?;
    if eps.len() != eps2.len() {
        return Err(Error::Dimension {
            expected: eps.len(),
            got: eps2.len(),
        });
    }
    let a = alpha_t(mode.omega, t);
    let n = if temperature.is_infinite() { f64::INFINITY } else { nbar(mode.omega, temperature) };
    let s1 = DisplacedThermalMode::new(a * mode.contract(eps)?, n)?;
    let s2 = DisplacedThermalMode::new(a * mode.contract(eps2)?, n)?;
    s1.fidelity(&s2)
}

/// The one-mode contributions to the four dephasing matrices:
///
/// ```text
/// Γ_nm  = g²(1 − cos ωt)/ω² · coth(ω/2T) · cos(φ_n − φ_m)
/// Γ⁺_nm = g² ξ(t)                         · cos(φ_n − φ_m)
/// Γ⁻_nm = g²(1 − cos ωt)/ω²               · sin(φ_n − φ_m)
/// B_nm  = g²(1 − cos ωt)/ω² · tanh(ω/2T) · cos(φ_n − φ_m)
/// ```
///
/// The fidelity matrix is stored under [`MODE_MACROFRACTION`].
pub fn mode_summands(mode: &ModeSpec, temperature: f64, t: f64) -> Result<DephasingMatrices> {
    check_temperature(temperature)?;
    let l = mode.len();
    let w = mode.omega;
    let g2 = mode.g * mode.g;
    let base = g2 * one_minus_cos(w * t) / (w * w);
    let plus = g2 * xi_t(w, t);
    let coth = coth_factor(w, temperature);
    let tanh = tanh_factor(w, temperature);
    let phase = |n: usize, m: usize| mode.phases[n] - mode.phases[m];
    let cos = DMatrix::from_fn(l, l, |n, m| phase(n, m).cos());
    let sin = DMatrix::from_fn(l, l, |n, m| phase(n, m).sin());
    let mut fid = BTreeMap::new();
    fid.insert(MODE_MACROFRACTION.to_string(), &cos * (base * tanh));
    DephasingMatrices::new(&cos * (base * coth), &cos * plus, &sin * base, fid, t)
}

/// `−log` of the mode decoherence factor, taken from the summand matrices.
pub fn summand_log_decoherence(
    mode: &ModeSpec,
    eps: &RegisterLabel,
    eps2: &RegisterLabel,
    temperature: f64,
    t: f64,
) -> Result<Complex64> {
    let d = pair_delta(eps, eps2)?;
    log_decoherence(&d, &mode_summands(mode, temperature, t)?)
}

/// `−log` of the mode fidelity, taken from the summand matrices.
pub fn summand_log_fidelity(
    mode: &ModeSpec,
    eps: &RegisterLabel,
    eps2: &RegisterLabel,
    temperature: f64,
    t: f64,
) -> Result<f64> {
    let d = pair_delta(eps, eps2)?;
    log_fidelity(&d, &mode_summands(mode, temperature, t)?, MODE_MACROFRACTION)
}

/// Midpoint discretisation of `[lo, hi]` into `modes` equal cells.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeGrid {
    lo: f64,
    hi: f64,
    modes: usize,
}

impl ModeGrid {
    pub fn new(lo: f64, hi: f64, modes: usize) -> Result<Self> {
        if !(lo >= 0.0) || !(hi > lo) || !hi.is_finite() || modes == 0 {
            return Err(Error::Domain {
                function: "ModeGrid::new",
                detail: format!("need 0 <= lo < hi < inf and modes > 0, got [{lo}, {hi}] with {modes}"),
            });
        }
        Ok(Self { lo, hi, modes })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn spacing(&self) -> f64 {
        (self.hi - self.lo) / self.modes as f64
    }

    pub fn frequencies(&self) -> impl Iterator<Item = f64> + '_ {
        let h = self.spacing();
        (0..self.modes).map(move |k| self.lo + (k as f64 + 0.5) * h)
    }

    /// Same range, twice as many modes.
    pub fn refined(&self) -> Self {
        Self {
            modes: 2 * self.modes,
            ..*self
        }
    }
}

/// One entry of a [`RiemannReport`].
#[derive(Debug, Clone, PartialEq)]
pub struct RiemannEntry {
    /// `gamma`, `gamma_plus`, `gamma_minus` or `fid:<macrofraction>`.
    pub name: String,
    pub discrete: f64,
    pub continuum: f64,
    pub continuum_error: f64,
}

impl RiemannEntry {
    pub fn gap(&self) -> f64 {
        (self.discrete - self.continuum).abs()
    }

    /// Gap relative to the continuum value (absolute when that is zero).
    pub fn rel_gap(&self) -> f64 {
        if self.continuum == 0.0 {
            self.gap()
        } else {
            self.gap() / self.continuum.abs()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RiemannReport {
    pub grid: ModeGrid,
    pub tau: f64,
    pub t: f64,
    pub entries: Vec<RiemannEntry>,
}

impl RiemannReport {
    pub fn max_rel_gap(&self) -> f64 {
        self.entries.iter().map(RiemannEntry::rel_gap).fold(0.0, f64::max)
    }

    pub fn entry(&self, name: &str) -> Option<&RiemannEntry> {
        self.entries.iter().find(|e| e.name == name)
    }
}

/// Largest admissible `Δω · max(t, |τ|)`.
pub const MAX_GRID_PHASE_STEP: f64 = 0.1;

/// Compare the discrete mode sum (modes with `|g_k|² = J(ω_k)Δω`) against the
/// continuum kernels over the same part of the frequency axis, for the
/// off-diagonal entry with transit time `tau`.
pub fn riemann_sum_check(bath: &BathSpec, grid: &ModeGrid, tau: f64, t: f64) -> Result<RiemannReport> {
    let step = grid.spacing() * t.max(tau.abs());
    if step > MAX_GRID_PHASE_STEP {
        return Err(Error::UnderResolved(step));
    }
    let sd = bath.sd();
    let temp = bath.temperature();
    let h = grid.spacing();

    let mut windows: Vec<(String, EntryKind, &FrequencyWindow)> = vec![
        ("gamma".into(), EntryKind::Gamma, bath.unobserved()),
        ("gamma_plus".into(), EntryKind::GammaPlus, bath.unobserved()),
        ("gamma_minus".into(), EntryKind::GammaMinus, bath.unobserved()),
    ];
    for (id, w) in bath.macrofractions() {
        windows.push((format!("fid:{id}"), EntryKind::Fidelity, w));
    }

    let mut discrete = vec![0.0; windows.len()];
    for omega in grid.frequencies() {
        // phases chosen so that φ_0 − φ_1 = ωτ
        let mode = ModeSpec::new(omega, (sd.value(omega) * h).sqrt(), vec![omega * tau, 0.0])?;
        let m = mode_summands(&mode, temp, t)?;
        for (k, (_, kind, window)) in windows.iter().enumerate() {
            if !window.contains(omega) {
                continue;
            }
            discrete[k] += match kind {
                EntryKind::Gamma => m.gamma[(0, 1)],
                EntryKind::GammaPlus => m.gamma_plus[(0, 1)],
                EntryKind::GammaMinus => m.gamma_minus[(0, 1)],
                EntryKind::Fidelity => m.fid[MODE_MACROFRACTION][(0, 1)],
            };
        }
    }

    let cfg = QuadConfig::default();
    let mut entries = Vec::with_capacity(windows.len());
    for ((name, kind, window), sum) in windows.into_iter().zip(discrete) {
        let clipped = window.split_at(grid.lo).1.split_at(grid.hi).0;
        let est = entry_over(kind, sd, temp, &clipped, tau, t, &cfg)?;
        entries.push(RiemannEntry {
            name,
            discrete: sum,
            continuum: est.value,
            continuum_error: est.error,
        });
    }
    Ok(RiemannReport {
        grid: *grid,
        tau,
        t,
        entries,
    })
}
