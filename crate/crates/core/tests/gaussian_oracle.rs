//! The closed Gaussian formulas against a brute-force Fock-space evaluation,
//! and the discrete mode sum against the continuum kernels.

use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use spinreg::gaussian::{
    alpha_t, mode_decoherence, mode_fidelity, riemann_sum_check, summand_log_decoherence, ModeGrid, ModeSpec,
};
use spinreg::{BathSpec, RegisterLabel, SpectralDensity};

fn ln_factorial(n: usize) -> f64 {
    (1..=n).map(|k| (k as f64).ln()).sum()
}

/// Generalised Laguerre polynomial `L_n^{(a)}(x)` by its three-term recurrence.
fn laguerre(n: usize, a: f64, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, 1.0 + a - x);
    if n == 0 {
        return prev;
    }
    for k in 1..n {
        let k = k as f64;
        let next = ((2.0 * k + 1.0 + a - x) * cur - (k + a) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// `⟨m|D(β)|n⟩` from the closed Laguerre expression.
fn displacement_element(m: usize, n: usize, beta: Complex64) -> Complex64 {
    let x = beta.norm_sqr();
    let (lo, hi, z) = if m >= n { (n, m, beta) } else { (m, n, -beta.conj()) };
    let d = hi - lo;
    let mag = (0.5 * (ln_factorial(lo) - ln_factorial(hi)) - 0.5 * x).exp();
    z.powi(d as i32) * mag * laguerre(lo, d as f64, x)
}

fn thermal_populations(omega: f64, temp: f64) -> Vec<f64> {
    if temp == 0.0 {
        return vec![1.0];
    }
    let q = (-omega / temp).exp();
    let mut p = Vec::new();
    let mut w = 1.0 - q;
    while w > 1e-16 || p.len() < 2 {
        p.push(w);
        w *= q;
    }
    p
}

/// `tr[D(β) ρ_th D(β′)†]` summed in the number basis.
fn fock_overlap(beta: Complex64, beta2: Complex64, omega: f64, temp: f64) -> Complex64 {
    let p = thermal_populations(omega, temp);
    let cutoff = p.len() + 80;
    let mut acc = Complex64::new(0.0, 0.0);
    for (n, pn) in p.iter().enumerate() {
        let mut inner = Complex64::new(0.0, 0.0);
        for m in 0..cutoff {
            inner += displacement_element(m, n, beta2).conj() * displacement_element(m, n, beta);
        }
        acc += inner * *pn;
    }
    acc
}

/// Root fidelity of `D(β)ρ_thD(β)†` and `D(β′)ρ_thD(β′)†` as the trace norm
/// of `√P D(β′−β) √P` in the number basis.
fn fock_fidelity(beta: Complex64, beta2: Complex64, omega: f64, temp: f64) -> f64 {
    let p = thermal_populations(omega, temp);
    let k = p.len();
    let delta = beta2 - beta;
    let a = DMatrix::from_fn(k, k, |m, n| displacement_element(m, n, delta) * (p[m] * p[n]).sqrt());
    a.svd(false, false).singular_values.sum()
}

fn random_label(rng: &mut impl Rng) -> RegisterLabel {
    let v: Vec<f64> = (0..2).map(|_| if rng.random_bool(0.5) { 0.5 } else { -0.5 }).collect();
    RegisterLabel::from_values(&v).unwrap()
}

#[test]
fn closed_forms_match_fock_space() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(11);
    for _ in 0..30 {
        let omega = rng.random_range(0.5..5.0);
        let g = rng.random_range(0.05..0.5);
        let temp = [0.0, 1.0 / 3.0, 1.0][rng.random_range(0..3)];
        let t = rng.random_range(0.0..10.0);
        let mode = ModeSpec::new(omega, g, vec![rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)]).unwrap();
        let (e, ep) = (random_label(&mut rng), random_label(&mut rng));
        let a = alpha_t(omega, t);
        let (b1, b2) = (a * mode.contract(&e).unwrap(), a * mode.contract(&ep).unwrap());

        let xi = (omega * t - (omega * t).sin()) / (omega * omega);
        let phase = Complex64::from_polar(1.0, xi * (mode.contract(&e).unwrap().norm_sqr() - mode.contract(&ep).unwrap().norm_sqr()));
        let want = fock_overlap(b1, b2, omega, temp) * phase;
        let got = mode_decoherence(&mode, &e, &ep, temp, t).unwrap();
        assert!((got - want).norm() < 1e-11, "{got} vs {want}");

        let want = fock_fidelity(b1, b2, omega, temp);
        let got = mode_fidelity(&mode, &e, &ep, temp, t).unwrap();
        assert!((got - want).abs() < 1e-11, "{got} vs {want}");
    }
}

#[test]
fn singlet_mode_example() {
    // L=2, phases (0, ωτ) with τ=1, ω=1, g=0.3, T=1/3, t=2
    let mode = ModeSpec::new(1.0, 0.3, vec![0.0, 1.0]).unwrap();
    let (e, ep) = (RegisterLabel::parse("+-").unwrap(), RegisterLabel::parse("-+").unwrap());
    let got = mode_decoherence(&mode, &e, &ep, 1.0 / 3.0, 2.0).unwrap();
    let a = alpha_t(1.0, 2.0);
    let brute = fock_overlap(a * mode.contract(&e).unwrap(), a * mode.contract(&ep).unwrap(), 1.0, 1.0 / 3.0);
    assert!((got.norm() - brute.norm()).abs() < 1e-13);
    let sum = summand_log_decoherence(&mode, &e, &ep, 1.0 / 3.0, 2.0).unwrap();
    assert!((-got.norm().ln() - sum.re).abs() < 1e-14);
    // hand evaluation: |Δβ|² = |α|²g²|1 − e^{−i}|²·... with Δε·g = g(1 − e^{−iωτ})
    let hand = 0.5 * a.norm_sqr() * 0.09 * (2.0 - 2.0 * 1f64.cos()) / (1.5f64).tanh();
    assert!((sum.re - hand).abs() < 1e-15);
}

#[test]
fn riemann_sum_converges() {
    let bath = BathSpec::uncut(SpectralDensity::new(3.0).unwrap(), 1.0 / 3.0).unwrap();
    let grid = ModeGrid::new(0.0, 30.0, 10_000).unwrap();
    let coarse = riemann_sum_check(&bath, &grid, 1.0, 2.0).unwrap();
    assert!(coarse.max_rel_gap() <= 1e-4, "{coarse:?}");
    let fine = riemann_sum_check(&bath, &grid.refined(), 1.0, 2.0).unwrap();
    assert!(fine.max_rel_gap() < coarse.max_rel_gap());
    // Γ carries the largest discretisation error; the midpoint rule must
    // converge at least as Δω² (the integrand is flat at ω = 0, so the
    // observed order is 4). The other entries already sit at round-off.
    let (c, f) = (coarse.entry("gamma").unwrap(), fine.entry("gamma").unwrap());
    assert!(c.gap() / f.gap() > 3.5, "{} -> {}", c.gap(), f.gap());
    for e in &fine.entries {
        assert!(e.rel_gap() < 1e-10, "{e:?}");
    }
}

#[test]
fn riemann_sum_on_cut_bath() {
    let bath = BathSpec::with_observed_band(SpectralDensity::new(5.0).unwrap(), 1.0 / 3.0, "m", 1.0, 2.0).unwrap();
    // band edges fall on cell boundaries, so the midpoint rule keeps O(Δω²)
    let grid = ModeGrid::new(0.0, 40.0, 20_000).unwrap();
    let r = riemann_sum_check(&bath, &grid, 5.0, 4.0).unwrap();
    assert_eq!(r.entries.len(), 4);
    assert!(r.entry("fid:m").unwrap().continuum > 0.0);
    assert!(r.max_rel_gap() < 1e-4, "{r:?}");
}

fn label_strategy() -> impl Strategy<Value = RegisterLabel> {
    proptest::collection::vec(prop_oneof![Just(0.5), Just(-0.5)], 3)
        .prop_map(|v| RegisterLabel::from_values(&v).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn unitarity_and_symmetry(omega in 0.1f64..10.0, g in 0.0f64..1.0, temp in 0.0f64..3.0, t in 0.0f64..10.0,
                              phases in proptest::collection::vec(-4.0f64..4.0, 3),
                              e in label_strategy(), ep in label_strategy()) {
        let mode = ModeSpec::new(omega, g, phases).unwrap();
        let d = mode_decoherence(&mode, &e, &ep, temp, t).unwrap();
        prop_assert!(d.norm() <= 1.0 + 1e-15);
        let contraction = (mode.contract(&e).unwrap() - mode.contract(&ep).unwrap()) * alpha_t(omega, t);
        if contraction.norm() == 0.0 {
            prop_assert_eq!(d.norm(), 1.0);
        }
        let f = mode_fidelity(&mode, &e, &ep, temp, t).unwrap();
        prop_assert!(f > 0.0 && f <= 1.0);
        prop_assert_eq!(f, mode_fidelity(&mode, &ep, &e, temp, t).unwrap());
        // swapping the pair conjugates the overlap
        let swapped = mode_decoherence(&mode, &ep, &e, temp, t).unwrap();
        prop_assert!((swapped - d.conj()).norm() < 1e-14);
    }
}
