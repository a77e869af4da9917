//! End-to-end monodromy verification against the Kodaira table.

use arakelov::kodaira::FiberType;
use arakelov::parse::parse_poly;
use arakelov::picard_fuchs::{check_apparent, global_monodromy, verify_monodromy, PfOptions};
use arakelov::weierstrass::{build_family, WeierstrassFamily};

fn family(g2: &str, g3: &str, level: u32) -> WeierstrassFamily {
    build_family(parse_poly(g2).unwrap(), parse_poly(g3).unwrap(), level).unwrap()
}

#[test]
fn i1_fibers_of_g2_t() {
    let f = family("t", "1", 1);
    let checks = verify_monodromy(&f, &PfOptions::default()).unwrap();
    assert_eq!(checks.len(), 1, "one finite place bundling the three I1s");
    for c in &checks {
        assert_eq!(c.predicted, FiberType::In(1));
        assert!(c.ok, "trace_err {}", c.trace_err);
        assert!(c.trace_err < 1e-4);
        assert_eq!(c.transport.n_recovered, Some(1));
    }
}

#[test]
fn iv_fiber_has_order_three_trace() {
    let f = family("3*t^2", "t^2", 1);
    let checks = verify_monodromy(&f, &PfOptions::default()).unwrap();
    assert_eq!(checks.len(), 2);
    let iv = checks
        .iter()
        .find(|c| c.predicted == FiberType::IV)
        .expect("IV fiber at t = 0");
    assert!(iv.ok, "trace_err {}", iv.trace_err);
    assert!((iv.transport.trace.re + 1.0).abs() < 1e-4, "expected trace -1");
    let i1 = checks
        .iter()
        .find(|c| c.predicted == FiberType::In(1))
        .expect("I1 over t^2 - 1");
    assert!(i1.ok);
}

#[test]
fn apparent_singularity_is_trivial() {
    // dee = 6t with Δ(0) ≠ 0: loop around 0 must be the identity
    let f = family("t^2 + 12", "1", 1);
    let checks = check_apparent(&f, &PfOptions::default()).unwrap();
    assert_eq!(checks.len(), 1);
    assert!(checks[0].deviation < 1e-4, "deviation {}", checks[0].deviation);
}

#[test]
fn isotrivial_verifies_vacuously() {
    let f = family("0", "1", 1);
    assert!(verify_monodromy(&f, &PfOptions::default())
        .unwrap()
        .is_empty());
}

#[test]
fn global_relation_g2_t() {
    let f = family("t", "1", 1);
    let g = global_monodromy(&f, &PfOptions::default()).unwrap();
    assert_eq!(g.loops, 3);
    assert!(g.residual < 1e-3, "global residual {}", g.residual);
    // III* at infinity: trace 0
    assert!(g.infinity_trace_err.unwrap() < 1e-3);
}

#[test]
fn global_relation_3t2_t2() {
    let f = family("3*t^2", "t^2", 1);
    let g = global_monodromy(&f, &PfOptions::default()).unwrap();
    assert_eq!(g.loops, 3);
    assert!(g.residual < 1e-3, "global residual {}", g.residual);
    assert!(g.infinity_trace_err.unwrap() < 1e-3);
}
