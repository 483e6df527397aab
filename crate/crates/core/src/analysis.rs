//! Protected subspaces, two-qubit pair classes and SBS proximity reports.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::Geometry;
use crate::kernels::{assemble, BathSpec};
use crate::register::{decoherence_factor, log_fidelity, pair_delta, PairDelta, RegisterLabel};

/// Largest register for which the `2^L` labels are enumerated.
pub const MAX_ENUMERATED_QUBITS: usize = 12;

/// Default tolerance on `|1 − γ|` and `|1 − B|` for numerical subspace checks.
pub const DEFAULT_SUBSPACE_TOL: f64 = 1e-8;

/// Classes of two-qubit label pairs, by the sign of `Δε₁Δε₂`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PairClass {
    Diagonal,
    SingleQubit,
    /// `Δε₁Δε₂ = −1`, e.g. `(+½,−½)` vs `(−½,+½)`.
    Singlet,
    /// `Δε₁Δε₂ = +1`, e.g. `(+½,+½)` vs `(−½,−½)`.
    Ghz,
}

impl PairClass {
    pub fn name(self) -> &'static str {
        match self {
            PairClass::Diagonal => "diagonal",
            PairClass::SingleQubit => "single",
            PairClass::Singlet => "singlet",
            PairClass::Ghz => "ghz",
        }
    }

    /// A representative `(ε, ε′)` of the class.
    pub fn representative(self) -> (RegisterLabel, RegisterLabel) {
        let (a, b) = match self {
            PairClass::Diagonal => ("++", "++"),
            PairClass::SingleQubit => ("++", "+-"),
            PairClass::Singlet => ("+-", "-+"),
            PairClass::Ghz => ("++", "--"),
        };
        (
            RegisterLabel::parse(a).expect("valid literal"),
            RegisterLabel::parse(b).expect("valid literal"),
        )
    }
}

impl std::str::FromStr for PairClass {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "diagonal" => Ok(PairClass::Diagonal),
            "single" | "single-qubit" | "single_qubit" => Ok(PairClass::SingleQubit),
            "singlet" => Ok(PairClass::Singlet),
            "ghz" => Ok(PairClass::Ghz),
            other => Err(Error::Domain {
                function: "PairClass::from_str",
                detail: format!("unknown pair class `{other}`"),
            }),
        }
    }
}

pub fn classify_pair_2q(d: &PairDelta) -> Result<PairClass> {
    let p = d.parity_2q().ok_or(Error::Dimension {
        expected: 2,
        got: d.len(),
    })?;
    Ok(match p {
        -1 => PairClass::Singlet,
        1 => PairClass::Ghz,
        _ if d.is_zero() => PairClass::Diagonal,
        _ => PairClass::SingleQubit,
    })
}

fn check_lengths(eps: &RegisterLabel, eps2: &RegisterLabel) -> Result<()> {
    if eps.len() != eps2.len() {
        return Err(Error::Dimension {
            expected: eps.len(),
            got: eps2.len(),
        });
    }
    Ok(())
}

/// Collective limit (all `τ_nm = 0`):
/// `−log γ = Γ₁₁(ΣΔε)² + iΓ⁺₁₁[(Σε)² − (Σε′)²]`.
pub fn collective_log_gamma(
    eps: &RegisterLabel,
    eps2: &RegisterLabel,
    gamma11: f64,
    gamma_plus11: f64,
) -> Result<Complex64> {
    check_lengths(eps, eps2)?;
    let (m, m2) = (eps.magnetization(), eps2.magnetization());
    Ok(Complex64::new(
        gamma11 * (m - m2).powi(2),
        gamma_plus11 * (m * m - m2 * m2),
    ))
}

/// Collective limit: `−log B = B₁₁(ΣΔε)²`.
pub fn collective_log_fidelity(eps: &RegisterLabel, eps2: &RegisterLabel, b11: f64) -> Result<f64> {
    check_lengths(eps, eps2)?;
    Ok(b11 * (eps.magnetization() - eps2.magnetization()).powi(2))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DfsMode {
    Strong,
    Weak,
}

/// Outcome of a numerical subspace test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DfsClass {
    /// `γ = 1` for every pair.
    Strong,
    /// `|γ| = 1` for every pair, but some phase survives.
    Weak,
    None,
}

/// The `2^L` labels grouped by magnetization `Σ_n ε_n`, largest first.
pub fn magnetization_classes(len: usize) -> Result<Vec<Vec<RegisterLabel>>> {
    if len > MAX_ENUMERATED_QUBITS {
        return Err(Error::RegisterTooLarge(len));
    }
    let mut classes: Vec<Vec<RegisterLabel>> = vec![Vec::new(); len + 1];
    for label in RegisterLabel::all(len)? {
        let downs = label.spins().iter().filter(|s| s.value() < 0.0).count();
        classes[downs].push(label);
    }
    Ok(classes)
}

/// Maximal label sets forming a simultaneous DFS and OFS under collective
/// coupling.
///
/// Both conditions reduce to equal magnetization: `ΣΔε = 0` is the weak
/// condition, and it already fixes `(Σε)² = (Σε′)²`. Strong and weak sets
/// therefore coincide. Opposite magnetizations `m, −m` satisfy the
/// second condition alone, which is not enough for either.
pub fn find_dfs_ofs(len: usize, mode: DfsMode) -> Result<Vec<Vec<RegisterLabel>>> {
    let classes = magnetization_classes(len)?;
    Ok(match mode {
        DfsMode::Strong | DfsMode::Weak => classes,
    })
}

fn check_label_set(labels: &[RegisterLabel], geometry: &Geometry) -> Result<()> {
    if labels.is_empty() {
        return Err(Error::EmptyLabelSet);
    }
    for (i, a) in labels.iter().enumerate() {
        if a.len() != geometry.len() {
            return Err(Error::Dimension {
                expected: geometry.len(),
                got: a.len(),
            });
        }
        if labels[..i].contains(a) {
            return Err(Error::Domain {
                function: "subspace check",
                detail: format!("label {a} appears twice"),
            });
        }
    }
    Ok(())
}

fn label_pairs(labels: &[RegisterLabel]) -> Result<Vec<PairDelta>> {
    let mut out = Vec::new();
    for (i, a) in labels.iter().enumerate() {
        for b in &labels[i + 1..] {
            out.push(pair_delta(a, b)?);
        }
    }
    Ok(out)
}

/// Direct numerical test of the DFS conditions on a time grid: strong if
/// `|1 − γ| ≤ tol`, weak if `|1 − |γ|| ≤ tol`, for every pair and time.
pub fn check_dfs_general(
    bath: &BathSpec,
    geometry: &Geometry,
    labels: &[RegisterLabel],
    t_grid: &[f64],
    tol: f64,
) -> Result<DfsClass> {
    check_label_set(labels, geometry)?;
    let pairs = label_pairs(labels)?;
    if pairs.is_empty() {
        return Ok(DfsClass::Strong);
    }
    let mut class = DfsClass::Strong;
    for &t in t_grid {
        let m = assemble(bath, geometry, t)?.matrices;
        for d in &pairs {
            let g = decoherence_factor(d, &m)?;
            if (1.0 - g.norm()).abs() > tol {
                return Ok(DfsClass::None);
            }
            if (Complex64::new(1.0, 0.0) - g).norm() > tol {
                class = DfsClass::Weak;
            }
        }
    }
    Ok(class)
}

/// Direct numerical test of the OFS condition: `|1 − B^M| ≤ tol` for every
/// pair, macrofraction and time.
pub fn check_ofs_general(
    bath: &BathSpec,
    geometry: &Geometry,
    labels: &[RegisterLabel],
    t_grid: &[f64],
    tol: f64,
) -> Result<bool> {
    check_label_set(labels, geometry)?;
    let pairs = label_pairs(labels)?;
    for &t in t_grid {
        let m = assemble(bath, geometry, t)?.matrices;
        for d in &pairs {
            for mac in m.fid.keys() {
                if (1.0 - (-log_fidelity(d, &m, mac)?).exp()).abs() > tol {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Initial register state `c_{εε′} = ⟨ε|ρ₀|ε′⟩`, rows and columns in label
/// index order.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialRegister {
    len: usize,
    coeffs: DMatrix<Complex64>,
}

const STATE_TOL: f64 = 1e-10;

impl InitialRegister {
    pub fn new(len: usize, coeffs: DMatrix<Complex64>) -> Result<Self> {
        if len == 0 {
            return Err(Error::EmptyRegister);
        }
        if len > MAX_ENUMERATED_QUBITS {
            return Err(Error::RegisterTooLarge(len));
        }
        let dim = 1usize << len;
        if coeffs.nrows() != dim || coeffs.ncols() != dim {
            return Err(Error::Dimension {
                expected: dim,
                got: coeffs.nrows().max(coeffs.ncols()),
            });
        }
        if (&coeffs - coeffs.adjoint()).norm() > STATE_TOL {
            return Err(Error::InitialState("matrix is not Hermitian".into()));
        }
        let trace = coeffs.trace();
        if (trace - Complex64::new(1.0, 0.0)).norm() > STATE_TOL {
            return Err(Error::InitialState(format!("trace is {trace}, expected 1")));
        }
        let min_eig = coeffs
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        if min_eig < -STATE_TOL {
            return Err(Error::InitialState(format!("negative eigenvalue {min_eig}")));
        }
        Ok(Self { len, coeffs })
    }

    /// `|ψ⟩⟨ψ|` for amplitudes in label index order; `ψ` must be normalised.
    pub fn pure(len: usize, amplitudes: &[Complex64]) -> Result<Self> {
        let psi = nalgebra::DVector::from_column_slice(amplitudes);
        Self::new(len, &psi * psi.adjoint())
    }

    /// Equal-weight superposition of the given labels.
    pub fn superposition(labels: &[RegisterLabel]) -> Result<Self> {
        let first = labels.first().ok_or(Error::EmptyLabelSet)?;
        let len = first.len();
        if len > MAX_ENUMERATED_QUBITS {
            return Err(Error::RegisterTooLarge(len));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << len];
        let w = 1.0 / (labels.len() as f64).sqrt();
        for l in labels {
            check_lengths(first, l)?;
            let slot = &mut amps[l.index()];
            if slot.re != 0.0 {
                return Err(Error::InitialState(format!("label {l} repeated")));
            }
            *slot = Complex64::new(w, 0.0);
        }
        Self::pure(len, &amps)
    }

    /// `|+⟩^{⊗L}`: every label with equal amplitude.
    pub fn uniform(len: usize) -> Result<Self> {
        Self::superposition(&RegisterLabel::all(len)?)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn coeffs(&self) -> &DMatrix<Complex64> {
        &self.coeffs
    }

    pub fn coeff(&self, a: &RegisterLabel, b: &RegisterLabel) -> Complex64 {
        self.coeffs[(a.index(), b.index())]
    }

    /// Labels with non-zero population, in index order.
    pub fn support(&self) -> Vec<RegisterLabel> {
        (0..self.coeffs.nrows())
            .filter(|&i| self.coeffs[(i, i)].re > STATE_TOL)
            .map(|i| RegisterLabel::from_index(self.len, i).expect("index below 2^L"))
            .collect()
    }

    /// `Π ρ₀ Π` restricted to `labels`, rows and columns in the given order.
    pub fn block(&self, labels: &[RegisterLabel]) -> DMatrix<Complex64> {
        DMatrix::from_fn(labels.len(), labels.len(), |i, j| self.coeff(&labels[i], &labels[j]))
    }
}

/// Values for one off-diagonal pair of populated labels.
#[derive(Debug, Clone, PartialEq)]
pub struct PairReport {
    pub eps: RegisterLabel,
    pub eps_prime: RegisterLabel,
    pub gamma: Complex64,
    pub fidelities: BTreeMap<String, f64>,
    /// Two-qubit class; `None` for other register sizes.
    pub class: Option<PairClass>,
    /// Both labels lie in one reported DFS ∩ OFS subspace.
    pub protected: bool,
}

impl PairReport {
    pub fn abs_gamma(&self) -> f64 {
        self.gamma.norm()
    }

    pub fn max_fidelity(&self) -> f64 {
        self.fidelities.values().copied().fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    pub labels: Vec<RegisterLabel>,
    pub class: DfsClass,
}

/// Block of a coarse-grained SBS: a protected subspace together with the
/// projected initial coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct CoarseSbsBlock {
    pub support: Vec<RegisterLabel>,
    pub block: DMatrix<Complex64>,
    /// Per macrofraction, the collective displacement `Σ_n ε_n` shared by all
    /// labels of the support. It fixes the environment state of the block
    /// without singling out a representative label.
    pub environment: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SbsReport {
    pub t: f64,
    pub pairs: Vec<PairReport>,
    pub dfs_subspaces: Vec<Subspace>,
    pub ofs_subspaces: Vec<Vec<RegisterLabel>>,
    pub coarse_blocks: Vec<CoarseSbsBlock>,
    /// `max(|γ|, max_M B^M)` maximised over unprotected pairs: a scalar
    /// diagnostic of how far the state is from SBS form, not a trace-norm
    /// bound. Zero when no unprotected pair remains.
    pub sbs_distance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SbsOptions {
    pub tol: f64,
    /// Times at which candidate subspaces are re-checked.
    pub check_grid: Vec<f64>,
}

impl Default for SbsOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_SUBSPACE_TOL,
            check_grid: (1..=40).map(|k| 0.5 * k as f64).collect(),
        }
    }
}

pub fn sbs_report(initial: &InitialRegister, bath: &BathSpec, geometry: &Geometry, t: f64) -> Result<SbsReport> {
    sbs_report_with(initial, bath, geometry, t, &SbsOptions::default())
}

/// Pair values, verified protected subspaces and the SBS distance at `t`.
///
/// Candidate subspaces are the magnetization classes intersected with the
/// populated labels; each is kept only if the numerical check on
/// `opts.check_grid` (plus `t`) confirms it. Coarse-grained blocks are
/// emitted for collective geometries, where every confirmed DFS ∩ OFS block
/// shares one environment state.
pub fn sbs_report_with(
    initial: &InitialRegister,
    bath: &BathSpec,
    geometry: &Geometry,
    t: f64,
    opts: &SbsOptions,
) -> Result<SbsReport> {
    if initial.len() != geometry.len() {
        return Err(Error::Dimension {
            expected: geometry.len(),
            got: initial.len(),
        });
    }
    let support = initial.support();
    let mut grid = opts.check_grid.clone();
    grid.push(t);

    let mut dfs_subspaces = Vec::new();
    let mut ofs_subspaces = Vec::new();
    let mut protected_sets: Vec<Vec<RegisterLabel>> = Vec::new();
    for class in magnetization_classes(initial.len())? {
        let cand: Vec<RegisterLabel> = class.into_iter().filter(|l| support.contains(l)).collect();
        if cand.len() < 2 {
            continue;
        }
        let dfs = check_dfs_general(bath, geometry, &cand, &grid, opts.tol)?;
        let ofs = check_ofs_general(bath, geometry, &cand, &grid, opts.tol)?;
        if dfs != DfsClass::None {
            dfs_subspaces.push(Subspace {
                labels: cand.clone(),
                class: dfs,
            });
        }
        if ofs {
            ofs_subspaces.push(cand.clone());
        }
        if dfs == DfsClass::Strong && ofs {
            protected_sets.push(cand);
        }
    }

    let m = assemble(bath, geometry, t)?.matrices;
    let mut pairs = Vec::new();
    for (i, a) in support.iter().enumerate() {
        for b in &support[i + 1..] {
            let d = pair_delta(a, b)?;
            let mut fidelities = BTreeMap::new();
            for mac in m.fid.keys() {
                fidelities.insert(mac.clone(), (-log_fidelity(&d, &m, mac)?).exp());
            }
            pairs.push(PairReport {
                eps: a.clone(),
                eps_prime: b.clone(),
                gamma: decoherence_factor(&d, &m)?,
                fidelities,
                class: if a.len() == 2 { Some(classify_pair_2q(&d)?) } else { None },
                protected: protected_sets.iter().any(|s| s.contains(a) && s.contains(b)),
            });
        }
    }

    let sbs_distance = pairs
        .iter()
        .filter(|p| !p.protected)
        .map(|p| p.abs_gamma().max(p.max_fidelity()))
        .fold(0.0, f64::max);

    let coarse_blocks = if geometry.is_collective() {
        protected_sets
            .iter()
            .map(|s| CoarseSbsBlock {
                support: s.clone(),
                block: initial.block(s),
                environment: bath
                    .macrofractions()
                    .keys()
                    .map(|k| (k.clone(), s[0].magnetization()))
                    .collect(),
            })
            .collect()
    } else {
        Vec::new()
    };

    Ok(SbsReport {
        t,
        pairs,
        dfs_subspaces,
        ofs_subspaces,
        coarse_blocks,
        sbs_distance,
    })
}
