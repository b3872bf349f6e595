use minlab_cli::config::*;
use minlab_cli::export::{fmt17, to_json};
use minlab_core::catalog::SurfaceClass;
use minlab_core::deform::Branch;
use minlab_core::wrep::Rect;
use proptest::prelude::*;

fn surface() -> impl Strategy<Value = SurfaceSpec> {
    prop_oneof![
        Just(SurfaceSpec::Class(SurfaceClass::Enneper)),
        (1.01f64..10.0).prop_map(|c2| SurfaceSpec::Class(SurfaceClass::BonnetTimelike1 { c2 })),
        (0.01f64..0.99).prop_map(|c2| SurfaceSpec::Class(SurfaceClass::BonnetSpacelike { c2 })),
        (-3.0f64..3.0).prop_map(|phi| SurfaceSpec::Class(SurfaceClass::CatenoidLightlikeAssoc { phi })),
        (0.0f64..1.0).prop_map(|theta| SurfaceSpec::Family { branch: Branch::CL, theta }),
    ]
}

prop_compose! {
    fn job()(
        surface in surface(),
        nx in 2usize..500,
        ny in 2usize..500,
        domain in proptest::option::of((-5.0f64..0.0, 0.1f64..5.0, -5.0f64..0.0, 0.1f64..5.0)),
        tol in 1e-12f64..1.0,
        perturb in proptest::option::of(-1.0f64..1.0),
        conjugate: bool,
        obj: bool,
        steps in 2usize..400,
    ) -> JobConfig {
        let mut cfg = JobConfig::new(CommandKind::Verify, surface);
        cfg.grid = GridConfig { nx, ny, domain: domain.map(|(a, b, c, d)| Rect::new(a, b, c, d)) };
        cfg.tolerances.gauss = tol;
        cfg.tolerances.planarity = tol * 3.0;
        cfg.verify = VerifyOptions { perturb, conjugate };
        cfg.format.obj = obj;
        cfg.deform.steps = steps;
        cfg.output.stem = Some(format!("job_{nx}"));
        cfg
    }
}

proptest! {
    #[test]
    fn job_config_round_trips(cfg in job()) {
        let back = JobConfig::from_json(&cfg.to_json()).unwrap();
        prop_assert_eq!(back, cfg);
    }

    #[test]
    fn fixed_width_floats_round_trip(v in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL | proptest::num::f64::ZERO) {
        let s = fmt17(v);
        prop_assert_eq!(s.parse::<f64>().unwrap(), v);
        let j = to_json(&v);
        prop_assert_eq!(j.trim().parse::<f64>().unwrap(), v);
    }
}

#[test]
fn sweep_config_round_trips() {
    let cfg = JobConfig::new(CommandKind::Deform, SurfaceSpec::Branch(Branch::S2));
    assert_eq!(JobConfig::from_json(&cfg.to_json()).unwrap(), cfg);
}

#[test]
fn partial_config_uses_defaults() {
    let cfg = JobConfig::from_json(r#"{"command":"singular","surface":{"class":{"tag":"B_L1"}}}"#).unwrap();
    assert_eq!(cfg.singular.resolution, 200);
    assert_eq!(cfg.tolerances, Tolerances::default());
    assert_eq!(cfg.stem(), "B_L1");
}

#[test]
fn invalid_configs_are_rejected() {
    for s in [
        r#"{"command":"deform","surface":{"class":{"tag":"E"}}}"#,
        r#"{"command":"generate","surface":{"branch":"P"}}"#,
        r#"{"command":"verify","surface":{"class":{"tag":"B_S","c2":2.0}}}"#,
        r#"{"command":"verify","surface":{"class":{"tag":"E"}},"grid":{"nx":1,"ny":5,"domain":null}}"#,
        r#"{"command":"verify","surface":{"class":{"tag":"E"}},"tolerances":{"gauss":-1.0}}"#,
        r#"{"command":"launch","surface":{"class":{"tag":"E"}}}"#,
    ] {
        assert!(JobConfig::from_json(s).is_err(), "{s}");
    }
}

#[test]
fn stems_are_file_name_safe() {
    let s = SurfaceSpec::Class(SurfaceClass::BonnetTimelike1 { c2: 2.0 });
    assert_eq!(s.stem(), "B_T1_c2_2");
    let f = SurfaceSpec::Family { branch: Branch::P, theta: -0.25 };
    assert_eq!(f.stem(), "P_theta_-0.25");
}
