use srl_core::models::{disc_eigenfunction, whispering_family, IndexRange};
use srl_core::rellich::{boundary_side_disc, commutator_lhs_disc, rellich_disc, Collar};
use srl_core::traces::{restrict, Hypersurface};

#[test]
fn closure_on_documented_specs() {
    let circle = Hypersurface::disc_circle(0.5).unwrap();
    for (n, k) in [(0, 1), (5, 2), (20, 5), (40, 10)] {
        let trace = restrict(&disc_eigenfunction(n, k).unwrap(), &circle, None).unwrap();
        let r = rellich_disc(&trace, 0.6, 0.2).unwrap();
        assert!(r.closes(1e-6), "({n},{k}): {:?}", r.closure_residual);
        assert!(r.t_neu >= 0.0 && r.t_in >= 0.0);
    }
}

#[test]
fn closure_along_whispering_family() {
    let circle = Hypersurface::disc_circle(0.5).unwrap();
    for (n, m) in whispering_family(0.5, 2.0 / 3.0, 1.0, IndexRange::new(40, 400).with_stride(60)).unwrap() {
        let trace = restrict(&m.unwrap().spec, &circle, None).unwrap();
        let r = rellich_disc(&trace, 0.6, 0.2).unwrap();
        assert!(r.closes(1e-6), "n={n}: {:?}", r.closure_residual);
    }
}

#[test]
fn collar_choice_does_not_matter() {
    for (n, k) in [(3, 2), (12, 4)] {
        let spec = disc_eigenfunction(n, k).unwrap();
        let boundary = boundary_side_disc(&spec, 0.5).unwrap();
        for eps in [0.1, 0.2, 0.3] {
            let lhs = commutator_lhs_disc(&spec, 0.5, Collar::Bump { eps }).unwrap();
            assert!(
                (lhs - boundary).abs() <= 1e-8 * (boundary.abs() + 1.0),
                "eps={eps}: {lhs} vs {boundary}"
            );
        }
        assert!(commutator_lhs_disc(&spec, 0.5, Collar::Bump { eps: 0.6 }).is_err());
    }
}
