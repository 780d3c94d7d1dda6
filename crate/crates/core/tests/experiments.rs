use std::f64::consts::PI;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use srl_core::experiments::{
    fit_exponent, sharpness_exact, sharpness_exact_rational, sharpness_ratio, sweep_exterior_mass, sweep_neumann,
    sweep_sharpness, Classification, ExteriorParams, SweepReport,
};
use srl_core::models::{FamilyKind, FamilySpec, IndexRange};
use srl_core::traces::{Data, Hypersurface};

#[test]
fn fit_recovers_noisy_exponent() {
    let mut rng = StdRng::seed_from_u64(7);
    let points: Vec<(f64, f64)> = (0..20)
        .map(|i| {
            let h = 10f64.powf(-(i as f64) * 2.0 / 19.0);
            let noise = 1.0 + 0.01 * rng.gen_range(-1.0..1.0);
            (h, 3.0 * h.powf(1.0 / 6.0) * noise)
        })
        .collect();
    let fit = fit_exponent(&points).unwrap();
    assert!((0.13..=0.20).contains(&fit.slope), "slope {}", fit.slope);
    assert!((fit.decades() - 2.0).abs() < 1e-12);
    assert!(fit.r_squared > 0.99);
}

#[test]
fn sharpness_decreases_to_one_over_pi() {
    let mut prev = f64::INFINITY;
    for k in 1..=500 {
        let v = sharpness_exact(k).unwrap();
        assert!(v < prev, "k={k}");
        assert!((1.0 / PI..=1.0).contains(&v));
        prev = v;
    }
    // the gap closes like 1/k
    assert!(prev - 1.0 / PI < 1.0 / 500.0);
}

#[test]
fn rational_and_log_paths_agree() {
    for k in [1, 2, 3, 10, 57, 150, 300, 500] {
        let r = sharpness_ratio(k).unwrap();
        let rational = r.rational_value().unwrap();
        assert!((rational - r.exact).abs() <= 1e-12 * rational, "k={k}");
    }
    assert_eq!(sharpness_exact_rational(2).unwrap().to_string(), "15/32");
}

#[test]
fn sharpness_report_round_trips() {
    let report = sweep_sharpness(IndexRange::new(1, 40)).unwrap();
    let text = serde_json::to_string(&report).unwrap();
    let back: SweepReport = serde_json::from_str(&text).unwrap();
    assert_eq!(back.columns, report.columns);
    assert_eq!(back.verdicts, report.verdicts);
    assert_eq!(back.rows.len(), report.rows.len());
    assert!(report.passed());
}

#[test]
fn sweeps_do_not_depend_on_thread_count() {
    let family = FamilySpec {
        kind: FamilyKind::DiscWhispering {
            r0: 0.5,
            offset_exponent: 2.0 / 3.0,
            offset: 1.0,
        },
        range: IndexRange::new(40, 140),
    };
    let circle = Hypersurface::disc_circle(0.5).unwrap();
    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let many = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
    let a = single.install(|| sweep_neumann(&family, &circle, 0.6, Data::Neumann).unwrap());
    let b = many.install(|| sweep_neumann(&family, &circle, 0.6, Data::Neumann).unwrap());
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}

#[test]
fn exterior_zeros_respect_support() {
    let report = sweep_exterior_mass(ExteriorParams {
        r0: 0.5,
        dprime: 2.0 / 3.0,
        z: 0.15,
        delta_window: 0.6,
        range: IndexRange::new(150, 260),
    })
    .unwrap();
    let predicted = report.column("support_zero_predicted").unwrap();
    let mass = report.column("exterior_mass").unwrap();
    for ((_, p), (_, m)) in predicted.iter().zip(&mass) {
        if *p == 1.0 {
            assert_eq!(*m, 0.0);
        }
    }
    let v = report.verdict("window-support-zeros").unwrap();
    assert!(v.passed, "{}", v.detail);
    assert!(matches!(v.classification, Classification::ExactZeros { .. }));
}

#[test]
fn short_ranges_are_inconclusive() {
    let family = FamilySpec {
        kind: FamilyKind::SphereHighestWeight,
        range: IndexRange::new(5, 9),
    };
    let report = sweep_neumann(&family, &Hypersurface::sphere_meridian(), 0.6, Data::Neumann).unwrap();
    assert!(!report.passed());
}
