mod common;

use std::collections::BTreeMap;

use proptest::prelude::*;
use spinreg::analytic::{
    fidelity_th_analytic, gamma_analytic, gamma_minus_analytic, gamma_plus_analytic, gamma_vac,
};
use spinreg::kernels::{
    assemble, entry_over, fidelity_entry, gamma_entry, gamma_minus_entry, gamma_plus_entry, EntryKind,
    QuadConfig, UNCUT_MACROFRACTION,
};
use spinreg::{BathSpec, FrequencyWindow, Geometry, SpectralDensity};

use common::{kernel_simpson, rel_err, Kind};

fn uncut(s: f64, temp: f64) -> BathSpec {
    BathSpec::uncut(SpectralDensity::new(s).unwrap(), temp).unwrap()
}

#[test]
fn quadrature_against_simpson() {
    let cases = [
        (Kind::Gamma, 5.0, 1.0 / 3.0, 5.0, 10.0),
        (Kind::GammaPlus, 5.0, 1.0 / 3.0, 1.0, 3.0),
        (Kind::GammaPlus, 2.0, 1.0 / 3.0, 0.0, 4.0),
        (Kind::GammaMinus, 5.0, 1.0 / 3.0, 5.0, 10.0),
        (Kind::GammaMinus, 3.0, 0.0, 1.0, 7.5),
        (Kind::Fidelity, 2.0, 1.0 / 3.0, 5.0, 10.0),
        (Kind::Gamma, 2.0, 1.0 / 3.0, 1.0, 3.0),
        (Kind::Fidelity, 4.0, 0.01, 2.0, 6.0),
    ];
    for (kind, s, temp, tau, t) in cases {
        let b = uncut(s, temp);
        let q = match kind {
            Kind::Gamma => gamma_entry(&b, tau, t),
            Kind::GammaPlus => gamma_plus_entry(&b, tau, t),
            Kind::GammaMinus => gamma_minus_entry(&b, tau, t),
            Kind::Fidelity => fidelity_entry(&b, UNCUT_MACROFRACTION, tau, t),
        }
        .unwrap();
        let oracle = kernel_simpson(kind, s, temp, tau, t);
        assert!(rel_err(q.value, oracle, 1e-12) < 1e-8, "{kind:?} s={s} τ={tau} t={t}: {} vs {oracle}", q.value);
        assert!(q.error < 1e-8 * q.value.abs().max(1e-6));
    }
}

#[test]
fn analytic_against_simpson_including_even_s() {
    for s in [2.0, 3.0, 4.0, 5.0, 6.0] {
        for (tau, t, temp) in [(0.0, 2.5, 1.0 / 3.0), (1.5, 4.0, 0.01), (5.0, 6.0, 0.5)] {
            let checks = [
                (Kind::Gamma, gamma_analytic(s, tau, t, temp).unwrap()),
                (Kind::GammaPlus, gamma_plus_analytic(s, tau, t).unwrap()),
                (Kind::GammaMinus, gamma_minus_analytic(s, tau, t).unwrap()),
                (Kind::Fidelity, fidelity_th_analytic(s, tau, t, temp).unwrap()),
            ];
            for (kind, a) in checks {
                let oracle = kernel_simpson(kind, s, temp, tau, t);
                assert!(rel_err(a, oracle, 1e-12) < 1e-8, "{kind:?} s={s} τ={tau} t={t} T={temp}: {a} vs {oracle}");
            }
        }
    }
}

#[test]
fn analytic_against_quadrature_grid() {
    for s in [2.0, 3.0, 5.0] {
        for tau in [0.0, 1.0, 5.0] {
            for temp in [0.01, 1.0 / 3.0] {
                let b = uncut(s, temp);
                for k in 0..=40 {
                    let t = 0.5 * f64::from(k);
                    let pairs = [
                        (gamma_entry(&b, tau, t).unwrap().value, gamma_analytic(s, tau, t, temp).unwrap()),
                        (gamma_plus_entry(&b, tau, t).unwrap().value, gamma_plus_analytic(s, tau, t).unwrap()),
                        (gamma_minus_entry(&b, tau, t).unwrap().value, gamma_minus_analytic(s, tau, t).unwrap()),
                        (
                            fidelity_entry(&b, UNCUT_MACROFRACTION, tau, t).unwrap().value,
                            fidelity_th_analytic(s, tau, t, temp).unwrap(),
                        ),
                    ];
                    for (i, (q, a)) in pairs.into_iter().enumerate() {
                        assert!(rel_err(a, q, 1e-9) <= 1e-6, "entry {i} s={s} τ={tau} T={temp} t={t}: {a} vs {q}");
                    }
                }
            }
        }
    }
}

#[test]
fn zero_temperature_gamma_equals_fidelity() {
    let b = uncut(3.0, 0.0);
    for t in [0.5, 3.0, 9.0] {
        let g = gamma_entry(&b, 1.0, t).unwrap().value;
        let f = fidelity_entry(&b, UNCUT_MACROFRACTION, 1.0, t).unwrap().value;
        assert_eq!(g, f);
        assert!(rel_err(gamma_vac(3.0, 1.0, t).unwrap(), g, 1e-12) < 1e-9);
    }
}

#[test]
fn fidelity_plateau_on_band() {
    // s=5, T=1/3, window [1,3], τ=0, t=100: the (1 − cos ωt) factor averages
    // to 1; the oscillating remainder ∫ f cos(ωt) is bounded by
    // (|f(1)| + |f(3)| + ∫|f′|)/t.
    let (s, temp, t) = (5.0, 1.0 / 3.0, 100.0);
    let f = |w: f64| w.powf(s - 2.0) * (-w).exp() * (w / (2.0 * temp)).tanh();
    let plateau = common::simpson(f, 1.0, 3.0, 20_000);
    let h = 1e-5;
    let df_abs = common::simpson(|w| ((f(w + h) - f(w - h)) / (2.0 * h)).abs(), 1.0, 3.0, 20_000);
    let bound = (f(1.0) + f(3.0) + df_abs) / t;
    let mut macs = BTreeMap::new();
    macs.insert("band".to_string(), FrequencyWindow::band(1.0, 3.0).unwrap());
    let bath = BathSpec::cut(
        SpectralDensity::new(s).unwrap(),
        temp,
        FrequencyWindow::band(1.0, 3.0).unwrap().complement(),
        macs,
    )
    .unwrap();
    let v = fidelity_entry(&bath, "band", 0.0, t).unwrap().value;
    assert!((v - plateau).abs() <= bound, "{v} vs plateau {plateau} ± {bound}");
    let exact_remainder = common::simpson(|w| f(w) * (w * t).cos(), 1.0, 3.0, 200_000);
    assert!((v - (plateau - exact_remainder)).abs() < 1e-10);
}

#[test]
fn infinite_temperature_fidelity_vanishes() {
    let hot = uncut(3.0, 1e8);
    let v = fidelity_entry(&hot, UNCUT_MACROFRACTION, 0.0, 2.0).unwrap().value;
    assert!(v.abs() < 1e-7);
}

#[test]
fn assemble_small_cases() {
    let b = uncut(3.0, 0.3);
    let m = assemble(&b, &Geometry::collective(1).unwrap(), 2.0).unwrap().matrices;
    assert_eq!(m.dim(), 1);
    assert_eq!(m.gamma_minus[(0, 0)], 0.0);

    let m = assemble(&b, &Geometry::collective(2).unwrap(), 2.0).unwrap().matrices;
    assert_eq!(m.gamma[(0, 1)], m.gamma[(0, 0)]);
    assert_eq!(m.fid[UNCUT_MACROFRACTION][(0, 1)], m.fid[UNCUT_MACROFRACTION][(1, 1)]);

    let tri = Geometry::from_rows(&[vec![0.0, 2.0, 2.0], vec![2.0, 0.0, 2.0], vec![2.0, 2.0, 0.0]]).unwrap();
    let m = assemble(&b, &tri, 3.0).unwrap().matrices;
    for (n, k) in [(0, 2), (1, 2), (1, 0), (2, 0)] {
        assert_eq!(m.gamma[(n, k)], m.gamma[(0, 1)]);
        assert_eq!(m.gamma_plus[(n, k)], m.gamma_plus[(0, 1)]);
    }
    assert_eq!(m.gamma_minus[(0, 1)], m.gamma_minus[(1, 2)]);
    assert_eq!(m.gamma_minus[(1, 0)], -m.gamma_minus[(0, 1)]);
}

#[test]
fn monotone_in_temperature() {
    let temps = [0.0, 0.05, 0.1, 0.3, 1.0, 3.0];
    let sd = SpectralDensity::new(3.0).unwrap();
    let mut prev_g = 0.0;
    let mut prev_b = f64::INFINITY;
    for temp in temps {
        let b = BathSpec::uncut(sd, temp).unwrap();
        let g = gamma_entry(&b, 0.0, 4.0).unwrap().value;
        let f = fidelity_entry(&b, UNCUT_MACROFRACTION, 0.0, 4.0).unwrap().value;
        assert!(g >= prev_g && f <= prev_b, "T = {temp}");
        prev_g = g;
        prev_b = f;
    }
}

fn collinear_geometry(xs: &[f64]) -> Geometry {
    let rows: Vec<Vec<f64>> = xs.iter().map(|a| xs.iter().map(|b| (a - b).abs()).collect()).collect();
    Geometry::from_rows(&rows).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn window_additivity(s in 1.0f64..6.0, temp in 0.0f64..2.0, tau in 0.0f64..6.0, t in 0.0f64..15.0,
                         cut in 0.05f64..12.0) {
        let sd = SpectralDensity::new(s).unwrap();
        let cfg = QuadConfig::default();
        let (lo, hi) = FrequencyWindow::full().split_at(cut);
        for kind in [EntryKind::Gamma, EntryKind::GammaPlus, EntryKind::GammaMinus, EntryKind::Fidelity] {
            let whole = entry_over(kind, &sd, temp, &FrequencyWindow::full(), tau, t, &cfg).unwrap().value;
            let parts = entry_over(kind, &sd, temp, &lo, tau, t, &cfg).unwrap().value
                + entry_over(kind, &sd, temp, &hi, tau, t, &cfg).unwrap().value;
            prop_assert!((whole - parts).abs() <= 1e-9, "{:?}: {} vs {}", kind, whole, parts);
        }
    }

    #[test]
    fn matrix_structure(s in 1.0f64..6.0, temp in 0.0f64..2.0, t in 0.0f64..20.0,
                        xs in proptest::collection::vec(0.0f64..6.0, 2..5)) {
        let g = collinear_geometry(&xs);
        let b = uncut(s, temp);
        let m = assemble(&b, &g, t).unwrap().matrices;
        let l = m.dim();
        let fid = &m.fid[UNCUT_MACROFRACTION];
        for mat in [&m.gamma, fid] {
            prop_assert!((mat - mat.transpose()).norm() == 0.0);
            let min_eig = mat.clone().symmetric_eigenvalues().min();
            prop_assert!(min_eig >= -1e-10 * mat.trace().abs().max(1e-300), "min eigenvalue {}", min_eig);
            for n in 0..l {
                prop_assert_eq!(mat[(n, n)], mat[(0, 0)]);
                for k in 0..l {
                    prop_assert!(mat[(n, k)].abs() <= mat[(0, 0)] * (1.0 + 1e-12) + 1e-15);
                }
            }
        }
        prop_assert!((&m.gamma_minus + m.gamma_minus.transpose()).norm() == 0.0);
        prop_assert!(m.gamma_plus.iter().all(|v| v.abs() <= m.gamma_plus[(0, 0)] * (1.0 + 1e-12) + 1e-15));
    }
}
