mod common;

use std::f64::consts::PI;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use srl_core::models::{
    disc_eigenfunction, evaluate, laplacian, sphere_highest_weight, sphere_norm_squared, torus_plane_wave,
    whispering_family, EigenfunctionSpec, FamilyKind, FamilySpec, IndexRange, ModelId,
};

fn catalog() -> Vec<EigenfunctionSpec> {
    let mut specs = Vec::new();
    for (n, k) in [(0, 1), (1, 1), (0, 3), (5, 2), (12, 3), (20, 5), (40, 10)] {
        specs.push(disc_eigenfunction(n, k).unwrap());
    }
    for k in [1, 2, 5, 10, 40, 100] {
        specs.push(sphere_highest_weight(k).unwrap());
    }
    for (m1, m2) in [(1, 0), (3, 4), (-7, 2), (0, -9), (12, 5)] {
        specs.push(torus_plane_wave(m1, m2).unwrap());
    }
    specs
}

#[test]
fn normalization_oracle() {
    for spec in catalog() {
        let got = common::norm_squared_2d(&spec);
        assert!((got - 1.0).abs() <= 1e-9, "{:?}: {got}", spec.quantum);
    }
}

#[test]
fn whispering_members_are_normalized() {
    for (_, m) in whispering_family(0.5, 2.0 / 3.0, 1.0, IndexRange::new(40, 60).with_stride(10)).unwrap() {
        let m = m.unwrap();
        let got = common::norm_squared_2d(&m.spec);
        assert!((got - 1.0).abs() <= 1e-9, "{:?}: {got}", m.spec.quantum);
    }
}

fn random_point(rng: &mut StdRng, model: ModelId) -> [f64; 2] {
    match model {
        ModelId::Disc => [rng.gen_range(0.05..0.99), rng.gen_range(0.0..2.0 * PI)],
        ModelId::Sphere => [rng.gen_range(0.05..PI - 0.05), rng.gen_range(0.0..2.0 * PI)],
        ModelId::Torus => [rng.gen_range(0.0..2.0 * PI), rng.gen_range(0.0..2.0 * PI)],
    }
}

#[test]
fn eigen_residual_on_random_points() {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for spec in catalog() {
        let l2 = spec.lambda * spec.lambda;
        for _ in 0..100 {
            let p = random_point(&mut rng, spec.model);
            let phi = evaluate(&spec, p).unwrap();
            let residual = (laplacian(&spec, p).unwrap() + l2 * phi).norm();
            assert!(
                residual <= 1e-6 * l2 * phi.norm() + 1e-9,
                "{:?} at {p:?}: {residual:e}",
                spec.quantum
            );
        }
    }
}

#[test]
fn sphere_product_formulas() {
    for k in 1..=100u32 {
        let kf = k as f64;
        let norm = common::panels(0.0, PI, 8, 40)
            .iter()
            .map(|&(phi, w)| w * phi.sin().powi(2 * k as i32 + 1))
            .sum::<f64>()
            * 2.0
            * PI;
        let closed = sphere_norm_squared(k);
        assert!((norm - closed).abs() <= 1e-8 * closed, "k={k}: {norm} vs {closed}");

        let meridian = common::panels(0.0, 2.0 * PI, 16, 40)
            .iter()
            .map(|&(phi, w)| w * (kf * phi.sin().powi(k as i32 - 1)).powi(2))
            .sum::<f64>();
        let product: f64 = (1..k).map(|j| (2 * j - 1) as f64 / (2 * j) as f64).product();
        let closed = kf * kf * 2.0 * PI * product;
        assert!(
            (meridian - closed).abs() <= 1e-8 * closed,
            "k={k}: {meridian} vs {closed}"
        );
    }
}

#[test]
fn whispering_offset_identity_and_sign() {
    let (r0, dprime) = (0.5, 2.0 / 3.0);
    let members = whispering_family(r0, dprime, 1.0, IndexRange::new(40, 400)).unwrap();
    let mut scaled = Vec::new();
    for (n, m) in members {
        let m = m.unwrap();
        let z = m.z_eff.unwrap();
        let h = m.spec.h;
        let lhs = n as f64 * h / r0;
        assert!((lhs - (1.0 + z * h.powf(dprime))).abs() <= 1e-13, "n={n}");
        if n == 100 {
            assert!((0.5..=1.5).contains(&z), "z_eff {z}");
            let predicted = 2.0 * n as f64 * (1.0 - z * h.powf(dprime));
            assert!((m.spec.lambda - predicted).abs() / m.spec.lambda < 0.01);
        }
        scaled.push((m.spec.lambda - 2.0 * n as f64) / (n as f64).cbrt());
    }
    let hi = scaled.iter().cloned().fold(f64::MIN, f64::max);
    let lo = scaled.iter().cloned().fold(f64::MAX, f64::min);
    // lambda sits below 2n by an amount of order n^{1/3}
    assert!(hi < 0.0 && lo > -10.0, "range [{lo}, {hi}]");
}

#[test]
fn family_members_are_deterministic() {
    let family = FamilySpec {
        kind: FamilyKind::DiscWhispering {
            r0: 0.5,
            offset_exponent: 2.0 / 3.0,
            offset: 1.0,
        },
        range: IndexRange::new(40, 120),
    };
    let a = family.members().unwrap();
    let b = family.members().unwrap();
    assert_eq!(a.len(), 81);
    for ((i, x), (j, y)) in a.iter().zip(&b) {
        assert_eq!(i, j);
        assert_eq!(x.as_ref().unwrap(), y.as_ref().unwrap());
    }
    assert_eq!(family.member(77).unwrap(), *a[37].1.as_ref().unwrap());
}

#[test]
fn families_reject_bad_parameters() {
    let bad = FamilySpec {
        kind: FamilyKind::DiscWhispering {
            r0: 1.5,
            offset_exponent: 2.0 / 3.0,
            offset: 1.0,
        },
        range: IndexRange::new(40, 50),
    };
    assert!(bad.validate().is_err());
    assert!(sphere_highest_weight(0).is_err());
    assert!(sphere_highest_weight(501).is_err());
    assert!(torus_plane_wave(0, 0).is_err());
    assert!(disc_eigenfunction(3, 0).is_err());
}
