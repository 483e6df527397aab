use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// `J(ω) = ω^s Λ^{1−s} e^{−ω/Λ}` with `Λ = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralDensity {
    s: f64,
}

impl SpectralDensity {
    pub fn new(s: f64) -> Result<Self> {
        if !s.is_finite() || s < 1.0 {
            return Err(Error::Bath(format!("Ohmicity exponent s = {s} must be >= 1")));
        }
        Ok(Self { s })
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn value(&self, omega: f64) -> f64 {
        if omega <= 0.0 {
            return 0.0;
        }
        (self.s * omega.ln() - omega).exp()
    }

    /// `J(ω)/ω²`, the common prefactor of every kernel integrand.
    pub fn weight(&self, omega: f64) -> f64 {
        ((self.s - 2.0) * omega.ln() - omega).exp()
    }

    /// Upper truncation of the frequency axis, `s·ln 10 + 40`.
    pub fn truncation(&self) -> f64 {
        self.s * std::f64::consts::LN_10 + 40.0
    }
}

/// Ordered, disjoint union of half-open frequency intervals `[lo, hi)`.
/// `hi` may be `+∞`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyWindow {
    intervals: Vec<(f64, f64)>,
}

impl FrequencyWindow {
    /// Intervals with `lo == hi` are dropped; the rest must be ordered,
    /// disjoint and start at `lo ≥ 0`.
    pub fn new(intervals: Vec<(f64, f64)>) -> Result<Self> {
        let intervals: Vec<(f64, f64)> = intervals.into_iter().filter(|(lo, hi)| lo != hi).collect();
        let mut prev_hi = 0.0;
        for (i, &(lo, hi)) in intervals.iter().enumerate() {
            if lo.is_nan() || hi.is_nan() || !lo.is_finite() {
                return Err(Error::Window(format!("interval {i} has non-finite lower bound")));
            }
            if lo < 0.0 {
                return Err(Error::Window(format!("interval {i} starts below zero ({lo})")));
            }
            if hi < lo {
                return Err(Error::Window(format!("interval {i} is reversed ([{lo}, {hi}))")));
            }
            if i > 0 && lo < prev_hi {
                return Err(Error::Window(format!("interval {i} overlaps or is out of order")));
            }
            prev_hi = hi;
        }
        Ok(Self { intervals })
    }

    pub fn full() -> Self {
        Self {
            intervals: vec![(0.0, f64::INFINITY)],
        }
    }

    pub fn empty() -> Self {
        Self { intervals: vec![] }
    }

    pub fn band(lo: f64, hi: f64) -> Result<Self> {
        Self::new(vec![(lo, hi)])
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Complement within `[0, ∞)`.
    pub fn complement(&self) -> Self {
        let mut out = Vec::new();
        let mut cursor = 0.0;
        for &(lo, hi) in &self.intervals {
            if lo > cursor {
                out.push((cursor, lo));
            }
            cursor = hi;
        }
        if cursor < f64::INFINITY {
            out.push((cursor, f64::INFINITY));
        }
        Self { intervals: out }
    }

    pub fn contains(&self, omega: f64) -> bool {
        self.intervals.iter().any(|&(lo, hi)| lo <= omega && omega < hi)
    }

    pub fn overlaps(&self, other: &FrequencyWindow) -> bool {
        self.intervals.iter().any(|&(a, b)| {
            other
                .intervals
                .iter()
                .any(|&(c, d)| a.max(c) < b.min(d))
        })
    }

    /// Split at `omega`: the parts below and above.
    pub fn split_at(&self, omega: f64) -> (Self, Self) {
        let mut below = Vec::new();
        let mut above = Vec::new();
        for &(lo, hi) in &self.intervals {
            if hi <= omega {
                below.push((lo, hi));
            } else if lo >= omega {
                above.push((lo, hi));
            } else {
                below.push((lo, omega));
                above.push((omega, hi));
            }
        }
        (Self { intervals: below }, Self { intervals: above })
    }
}

/// Thermal bath together with the observer split of its frequency axis.
#[derive(Debug, Clone, PartialEq)]
pub struct BathSpec {
    sd: SpectralDensity,
    temperature: f64,
    unobserved: FrequencyWindow,
    macrofractions: BTreeMap<String, FrequencyWindow>,
    uncut: bool,
}

/// Identifier of the single macrofraction of an uncut bath.
pub const UNCUT_MACROFRACTION: &str = "full";

impl BathSpec {
    /// Observed and unobserved parts each see the whole spectrum.
    pub fn uncut(sd: SpectralDensity, temperature: f64) -> Result<Self> {
        check_temperature(temperature)?;
        let mut macrofractions = BTreeMap::new();
        macrofractions.insert(UNCUT_MACROFRACTION.to_string(), FrequencyWindow::full());
        Ok(Self {
            sd,
            temperature,
            unobserved: FrequencyWindow::full(),
            macrofractions,
            uncut: true,
        })
    }

    /// Sharp spectral cut: the windows must be pairwise disjoint.
    pub fn cut(
        sd: SpectralDensity,
        temperature: f64,
        unobserved: FrequencyWindow,
        macrofractions: BTreeMap<String, FrequencyWindow>,
    ) -> Result<Self> {
        check_temperature(temperature)?;
        let wins: Vec<(&str, &FrequencyWindow)> = std::iter::once(("unobserved", &unobserved))
            .chain(macrofractions.iter().map(|(k, v)| (k.as_str(), v)))
            .collect();
        for (i, (a, wa)) in wins.iter().enumerate() {
            for (b, wb) in &wins[i + 1..] {
                if wa.overlaps(wb) {
                    return Err(Error::Bath(format!("windows `{a}` and `{b}` overlap")));
                }
            }
        }
        Ok(Self {
            sd,
            temperature,
            unobserved,
            macrofractions,
            uncut: false,
        })
    }

    /// One observed band `[alpha, alpha + delta)` named `mac`; everything else
    /// is traced out.
    pub fn with_observed_band(
        sd: SpectralDensity,
        temperature: f64,
        mac: &str,
        alpha: f64,
        delta: f64,
    ) -> Result<Self> {
        if !(delta >= 0.0) {
            return Err(Error::Window(format!("band width {delta} must be >= 0")));
        }
        let observed = FrequencyWindow::band(alpha, alpha + delta)?;
        let unobserved = observed.complement();
        let mut macs = BTreeMap::new();
        macs.insert(mac.to_string(), observed);
        Self::cut(sd, temperature, unobserved, macs)
    }

    pub fn sd(&self) -> &SpectralDensity {
        &self.sd
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    /// `τ_T = 1/T`; infinite at zero temperature.
    pub fn thermal_time(&self) -> f64 {
        1.0 / self.temperature
    }

    pub fn unobserved(&self) -> &FrequencyWindow {
        &self.unobserved
    }

    pub fn macrofractions(&self) -> &BTreeMap<String, FrequencyWindow> {
        &self.macrofractions
    }

    pub fn macrofraction(&self, id: &str) -> Result<&FrequencyWindow> {
        self.macrofractions
            .get(id)
            .ok_or_else(|| Error::UnknownMacrofraction(id.to_string()))
    }

    pub fn is_uncut(&self) -> bool {
        self.uncut
    }

    pub fn with_temperature(&self, temperature: f64) -> Result<Self> {
        check_temperature(temperature)?;
        Ok(Self {
            temperature,
            ..self.clone()
        })
    }
}

fn check_temperature(t: f64) -> Result<()> {
    if !t.is_finite() || t < 0.0 {
        return Err(Error::Bath(format!("temperature {t} must be finite and >= 0")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_validation() {
        assert!(FrequencyWindow::new(vec![(0.0, 1.0), (2.0, f64::INFINITY)]).is_ok());
        assert!(FrequencyWindow::new(vec![(1.0, 0.5)]).is_err());
        assert!(FrequencyWindow::new(vec![(-1.0, 0.5)]).is_err());
        assert!(FrequencyWindow::new(vec![(0.0, 2.0), (1.0, 3.0)]).is_err());
        assert!(FrequencyWindow::new(vec![(2.0, 3.0), (0.0, 1.0)]).is_err());
        assert!(FrequencyWindow::new(vec![(1.0, 1.0)]).unwrap().is_empty());
    }

    #[test]
    fn complement_of_band() {
        let w = FrequencyWindow::band(1.0, 3.0).unwrap();
        assert_eq!(w.complement().intervals(), &[(0.0, 1.0), (3.0, f64::INFINITY)]);
        assert_eq!(FrequencyWindow::full().complement(), FrequencyWindow::empty());
        assert_eq!(FrequencyWindow::band(0.0, 2.0).unwrap().complement().intervals(), &[(2.0, f64::INFINITY)]);
        assert!(!w.overlaps(&w.complement()));
        assert!(w.contains(1.0) && !w.contains(3.0) && w.complement().contains(3.0));
    }

    #[test]
    fn split_window() {
        let (a, b) = FrequencyWindow::full().split_at(2.5);
        assert_eq!(a.intervals(), &[(0.0, 2.5)]);
        assert_eq!(b.intervals(), &[(2.5, f64::INFINITY)]);
    }

    #[test]
    fn bath_rejects_overlap() {
        let sd = SpectralDensity::new(3.0).unwrap();
        let mut macs = BTreeMap::new();
        macs.insert("a".to_string(), FrequencyWindow::band(1.0, 3.0).unwrap());
        assert!(BathSpec::cut(sd, 0.3, FrequencyWindow::band(2.0, 4.0).unwrap(), macs.clone()).is_err());
        assert!(BathSpec::cut(sd, 0.3, FrequencyWindow::band(3.0, 4.0).unwrap(), macs).is_ok());
        assert!(BathSpec::uncut(sd, -1.0).is_err());
        assert!(SpectralDensity::new(0.5).is_err());
    }

    #[test]
    fn spectral_density_shape() {
        let sd = SpectralDensity::new(5.0).unwrap();
        assert!((sd.value(1.0) - (-1.0f64).exp()).abs() < 1e-16);
        assert_eq!(sd.value(0.0), 0.0);
        assert!((sd.weight(2.0) - 8.0 * (-2.0f64).exp()).abs() < 1e-14);
    }
}
