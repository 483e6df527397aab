//! Register labels, label pairs and the quadratic forms that turn the
//! dephasing matrices into per-pair decoherence factors and fidelities.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Eigenvalue of `J_z = σ_z / 2` for one qubit.
///
/// Ordered so that `Up < Down`, which gives the label enumeration order
/// `+1/2 < -1/2` used throughout reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Spin {
    Up,
    Down,
}

impl Spin {
    pub fn value(self) -> f64 {
        match self {
            Spin::Up => 0.5,
            Spin::Down => -0.5,
        }
    }

    pub fn from_value(v: f64) -> Result<Self> {
        if v == 0.5 {
            Ok(Spin::Up)
        } else if v == -0.5 {
            Ok(Spin::Down)
        } else {
            Err(Error::InvalidSpin(v))
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Spin::Up => Spin::Down,
            Spin::Down => Spin::Up,
        }
    }

    fn symbol(self) -> char {
        match self {
            Spin::Up => '+',
            Spin::Down => '-',
        }
    }
}

/// Pointer-basis label `ε = (ε_1, …, ε_L)` with `ε_n = ±1/2`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RegisterLabel {
    spins: Vec<Spin>,
}

impl RegisterLabel {
    pub fn new(spins: Vec<Spin>) -> Result<Self> {
        if spins.is_empty() {
            return Err(Error::EmptyRegister);
        }
        Ok(Self { spins })
    }

    /// Build a label from explicit `±0.5` values.
    pub fn from_values(values: &[f64]) -> Result<Self> {
        let spins = values
            .iter()
            .map(|&v| Spin::from_value(v))
            .collect::<Result<Vec<_>>>()?;
        Self::new(spins)
    }

    /// Parse a `+`/`-` string such as `"+-"`.
    pub fn parse(s: &str) -> Result<Self> {
        let spins = s
            .trim()
            .chars()
            .map(|c| match c {
                '+' => Ok(Spin::Up),
                '-' => Ok(Spin::Down),
                _ => Err(Error::Domain {
                    function: "RegisterLabel::parse",
                    detail: format!("unexpected character {c:?} in {s:?}"),
                }),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(spins)
    }

    /// Label with the given enumeration index (most significant qubit first,
    /// `Up` ↦ bit 0).
    pub fn from_index(len: usize, index: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::EmptyRegister);
        }
        if len >= usize::BITS as usize || index >> len != 0 {
            return Err(Error::Domain {
                function: "RegisterLabel::from_index",
                detail: format!("index {index} out of range for L = {len}"),
            });
        }
        let spins = (0..len)
            .map(|n| {
                if (index >> (len - 1 - n)) & 1 == 0 {
                    Spin::Up
                } else {
                    Spin::Down
                }
            })
            .collect();
        Ok(Self { spins })
    }

    pub fn index(&self) -> usize {
        self.spins
            .iter()
            .fold(0, |acc, s| (acc << 1) | usize::from(*s == Spin::Down))
    }

    /// All `2^L` labels in enumeration order.
    pub fn all(len: usize) -> Result<Vec<Self>> {
        if len == 0 {
            return Err(Error::EmptyRegister);
        }
        if len > 24 {
            return Err(Error::RegisterTooLarge(len));
        }
        (0..1usize << len).map(|i| Self::from_index(len, i)).collect()
    }

    pub fn len(&self) -> usize {
        self.spins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spins.is_empty()
    }

    pub fn spins(&self) -> &[Spin] {
        &self.spins
    }

    pub fn values(&self) -> Vec<f64> {
        self.spins.iter().map(|s| s.value()).collect()
    }

    /// `Σ_n ε_n`.
    pub fn magnetization(&self) -> f64 {
        self.spins.iter().map(|s| s.value()).sum()
    }

    /// Copy with qubit `n` flipped.
    pub fn with_flip(&self, n: usize) -> Self {
        let mut spins = self.spins.clone();
        spins[n] = spins[n].flipped();
        Self { spins }
    }
}

impl fmt::Display for RegisterLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.spins {
            write!(f, "{}", s.symbol())?;
        }
        Ok(())
    }
}

/// All ordered off-diagonal pairs `(ε, ε′)`, `ε ≠ ε′`, lexicographic on the pair.
pub fn ordered_pairs(len: usize) -> Result<Vec<(RegisterLabel, RegisterLabel)>> {
    let labels = RegisterLabel::all(len)?;
    let mut out = Vec::with_capacity(labels.len() * labels.len().saturating_sub(1));
    for a in &labels {
        for b in &labels {
            if a != b {
                out.push((a.clone(), b.clone()));
            }
        }
    }
    Ok(out)
}

/// Unordered off-diagonal pairs, each reported once as `(ε, ε′)` with `ε < ε′`.
pub fn unordered_pairs(len: usize) -> Result<Vec<(RegisterLabel, RegisterLabel)>> {
    let labels = RegisterLabel::all(len)?;
    let mut out = Vec::new();
    for (i, a) in labels.iter().enumerate() {
        for b in &labels[i + 1..] {
            out.push((a.clone(), b.clone()));
        }
    }
    Ok(out)
}

/// `Δε = ε − ε′` together with the pair it came from.
///
/// The source pair is kept because the phase of the decoherence factor is
/// not a function of `Δε` alone.
#[derive(Debug, Clone, PartialEq)]
pub struct PairDelta {
    delta: Vec<i8>,
    eps: RegisterLabel,
    eps_prime: RegisterLabel,
}

impl PairDelta {
    pub fn delta(&self) -> &[i8] {
        &self.delta
    }

    pub fn eps(&self) -> &RegisterLabel {
        &self.eps
    }

    pub fn eps_prime(&self) -> &RegisterLabel {
        &self.eps_prime
    }

    pub fn len(&self) -> usize {
        self.delta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.delta.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.delta.iter().all(|&d| d == 0)
    }

    /// `Σ_n Δε_n`.
    pub fn total(&self) -> i32 {
        self.delta.iter().map(|&d| i32::from(d)).sum()
    }

    /// `Δε₁Δε₂`; only meaningful for two qubits.
    pub fn parity_2q(&self) -> Option<i8> {
        match self.delta[..] {
            [a, b] => Some(a * b),
            _ => None,
        }
    }

    fn as_f64(&self) -> Vec<f64> {
        self.delta.iter().map(|&d| f64::from(d)).collect()
    }
}

pub fn pair_delta(a: &RegisterLabel, b: &RegisterLabel) -> Result<PairDelta> {
    if a.len() != b.len() {
        return Err(Error::Dimension {
            expected: a.len(),
            got: b.len(),
        });
    }
    let delta = a
        .spins()
        .iter()
        .zip(b.spins())
        .map(|(x, y)| (x.value() - y.value()) as i8)
        .collect();
    Ok(PairDelta {
        delta,
        eps: a.clone(),
        eps_prime: b.clone(),
    })
}

/// The four dephasing matrices at one instant.
///
/// `gamma`, `gamma_plus` and every `fid` entry are symmetric, `gamma_minus`
/// is antisymmetric and every matrix has a constant diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct DephasingMatrices {
    pub gamma: DMatrix<f64>,
    pub gamma_plus: DMatrix<f64>,
    pub gamma_minus: DMatrix<f64>,
    pub fid: BTreeMap<String, DMatrix<f64>>,
    pub time: f64,
}

impl DephasingMatrices {
    pub fn new(
        gamma: DMatrix<f64>,
        gamma_plus: DMatrix<f64>,
        gamma_minus: DMatrix<f64>,
        fid: BTreeMap<String, DMatrix<f64>>,
        time: f64,
    ) -> Result<Self> {
        let l = gamma.nrows();
        let square = |m: &DMatrix<f64>| -> Result<()> {
            if m.nrows() != l || m.ncols() != l {
                return Err(Error::Dimension {
                    expected: l,
                    got: m.nrows().max(m.ncols()),
                });
            }
            Ok(())
        };
        square(&gamma)?;
        square(&gamma_plus)?;
        square(&gamma_minus)?;
        for m in fid.values() {
            square(m)?;
        }
        Ok(Self {
            gamma,
            gamma_plus,
            gamma_minus,
            fid,
            time,
        })
    }

    pub fn zeros<S: Into<String>>(
        len: usize,
        macrofractions: impl IntoIterator<Item = S>,
        time: f64,
    ) -> Self {
        let z = DMatrix::zeros(len, len);
        Self {
            gamma: z.clone(),
            gamma_plus: z.clone(),
            gamma_minus: z.clone(),
            fid: macrofractions
                .into_iter()
                .map(|id| (id.into(), z.clone()))
                .collect(),
            time,
        }
    }

    pub fn dim(&self) -> usize {
        self.gamma.nrows()
    }

    fn check(&self, d: &PairDelta) -> Result<()> {
        if d.len() != self.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                got: d.len(),
            });
        }
        Ok(())
    }
}

fn quad_form(x: &[f64], m: &DMatrix<f64>, y: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (n, &xn) in x.iter().enumerate() {
        if xn == 0.0 {
            continue;
        }
        let row: f64 = y.iter().enumerate().map(|(k, &yk)| m[(n, k)] * yk).sum();
        acc += xn * row;
    }
    acc
}

/// `−log γ_{εε′} = ΔεᵀΓΔε + i[εᵀΓ⁺ε − ε′ᵀΓ⁺ε′ − 2εᵀΓ⁻ε′]`.
pub fn log_decoherence(d: &PairDelta, m: &DephasingMatrices) -> Result<Complex64> {
    m.check(d)?;
    let re = quad_form(&d.as_f64(), &m.gamma, &d.as_f64());
    let e = d.eps.values();
    let ep = d.eps_prime.values();
    let im = quad_form(&e, &m.gamma_plus, &e) - quad_form(&ep, &m.gamma_plus, &ep)
        - 2.0 * quad_form(&e, &m.gamma_minus, &ep);
    Ok(Complex64::new(re, im))
}

/// Real part of [`log_decoherence`]: `ΔεᵀΓΔε`.
pub fn log_real_decoherence(d: &PairDelta, m: &DephasingMatrices) -> Result<f64> {
    m.check(d)?;
    let x = d.as_f64();
    Ok(quad_form(&x, &m.gamma, &x))
}

/// `−log B^M_{εε′} = Δεᵀ B^M Δε` for the macrofraction `mac`.
pub fn log_fidelity(d: &PairDelta, m: &DephasingMatrices, mac: &str) -> Result<f64> {
    m.check(d)?;
    let b = m
        .fid
        .get(mac)
        .ok_or_else(|| Error::UnknownMacrofraction(mac.to_string()))?;
    let x = d.as_f64();
    Ok(quad_form(&x, b, &x))
}

/// The decoherence factor `γ_{εε′}` itself.
pub fn decoherence_factor(d: &PairDelta, m: &DephasingMatrices) -> Result<Complex64> {
    Ok((-log_decoherence(d, m)?).exp())
}

/// Converts a `−log` value in the register convention (`J_z = σ_z/2`) to the
/// spin-boson convention (`σ_z` coupling), where it is four times larger.
pub fn to_spin_boson_convention(neg_log: f64) -> f64 {
    4.0 * neg_log
}
