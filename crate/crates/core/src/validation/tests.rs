use std::f64::consts::PI;

use proptest::prelude::*;

use super::*;
use crate::certificates::{
    synthesize_certificate, AssumptionPath, BoundForm, Certificate, SynthesisOptions,
};
use crate::grid::build_grid;
use crate::models::{make_ginzburg_landau, make_transport, ReactionForm, ReactionTerm};
use crate::params::BoundaryParams;
use crate::series::FourierSeries;
use crate::signal::DisturbanceSignal;
use crate::solver::{simulate, InitialCondition, Scenario, Trace};

fn transport_cert() -> (Certificate, BoundaryParams) {
    let model = make_transport(2.0, 0.0, 1.0).unwrap();
    let bc = model.boundary_params(1.5, 0.0).unwrap();
    let cert = synthesize_certificate(
        &bc,
        -1.0,
        0.0,
        ReactionForm::LinearForm,
        &SynthesisOptions::default(),
    )
    .unwrap()
    .into_certificate()
    .unwrap();
    (cert, bc)
}

fn transport_trace(d: DisturbanceSignal, n: usize, dt: f64, t_end: f64) -> Trace {
    let model = make_transport(2.0, 0.0, 1.0).unwrap();
    let bc = model.boundary_params(1.5, 0.0).unwrap();
    let s = Scenario::new(
        bc,
        model.term,
        d,
        InitialCondition::Polynomial { coeffs: vec![1.0] },
        build_grid(n).unwrap(),
        t_end,
        dt,
    )
    .unwrap()
    .with_output_stride(10);
    simulate(&s).unwrap()
}

fn sin_d() -> DisturbanceSignal {
    DisturbanceSignal::Sinusoid {
        amp: 0.1,
        freq: 2.0,
        phase: 0.0,
    }
}

const Z: DisturbanceSignal = DisturbanceSignal::Zero;

#[test]
fn zero_trace_passes_with_abs_margin() {
    let (cert, bc) = transport_cert();
    let trace = Trace {
        times: (0..20).map(|k| k as f64 * 0.1).collect(),
        energies: vec![0.0; 20],
        boundary_left: vec![0.0; 20],
        boundary_right: vec![0.0; 20],
        fields: None,
    };
    let tol = Tolerances {
        rel_tol: 0.01,
        abs_tol: 1e-6,
    };
    for form in [BoundForm::Eiiss, BoundForm::Eiss] {
        let r = verify_iss_trajectory(&trace, &cert, &bc, -1.0, 0.0, &Z, &Z, form, tol).unwrap();
        assert!(r.pass);
        assert!(r.samples.iter().all(|s| s.margin == 1e-6));
        assert_eq!(r.first_violation_time, None);
    }
}

#[test]
fn transport_trajectory_within_bound() {
    let (cert, bc) = transport_cert();
    let trace = transport_trace(sin_d(), 64, 1e-3, 10.0);
    for form in [BoundForm::Eiiss, BoundForm::Eiss] {
        let r = verify_iss_trajectory(
            &trace,
            &cert,
            &bc,
            -1.0,
            0.0,
            &sin_d(),
            &Z,
            form,
            Tolerances::default(),
        )
        .unwrap();
        assert!(r.pass, "{form:?}: {}", r.to_json());
        assert!(r.max_relative_violation <= 0.0);
    }
}

#[test]
fn doubled_bound_is_caught() {
    let (cert, bc) = transport_cert();
    let d = DisturbanceSignal::Constant { value: 0.2 };
    let times: Vec<f64> = (0..30).map(|k| k as f64 * 0.2).collect();
    // E0 = 0 keeps the doubled trace anchored at the same initial energy.
    let energies: Vec<f64> = times
        .iter()
        .map(|&t| {
            2.0 * crate::certificates::iss_bound(&cert, 0.0, &d, &Z, t, BoundForm::Eiiss).unwrap()
        })
        .collect();
    let trace = Trace {
        boundary_left: vec![0.0; 30],
        boundary_right: vec![0.0; 30],
        times: times.clone(),
        energies,
        fields: None,
    };
    let r = verify_iss_trajectory(
        &trace,
        &cert,
        &bc,
        -1.0,
        0.0,
        &d,
        &Z,
        BoundForm::Eiiss,
        Tolerances::default(),
    )
    .unwrap();
    assert!(!r.pass);
    assert_eq!(r.first_violation_time, Some(times[1]));
    assert!(r.max_relative_violation > 0.9);
    let json: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
    assert_eq!(json["pass"], false);
    assert_eq!(json["n_samples"], 30);
}

#[test]
fn inflated_decay_fails() {
    let (mut cert, bc) = transport_cert();
    cert.c_decay *= 10.0;
    let trace = transport_trace(sin_d(), 64, 1e-3, 10.0);
    for form in [BoundForm::Eiiss, BoundForm::Eiss] {
        let r = verify_iss_trajectory(
            &trace,
            &cert,
            &bc,
            -1.0,
            0.0,
            &sin_d(),
            &Z,
            form,
            Tolerances::default(),
        )
        .unwrap();
        assert!(!r.pass, "{form:?}");
    }
}

#[test]
fn mismatched_certificate_rejected() {
    let (cert, _) = transport_cert();
    let dirichlet = BoundaryParams::new(1.0, 0.0, 0.0, 1.0, 1.0).unwrap();
    let trace = transport_trace(Z, 16, 1e-2, 1.0);
    let r = verify_iss_trajectory(
        &trace,
        &cert,
        &dirichlet,
        -1.0,
        0.0,
        &Z,
        &Z,
        BoundForm::Eiss,
        Tolerances::default(),
    );
    assert!(r.is_err());
    // larger M1 breaks the stored decay margin
    let (cert, bc) = transport_cert();
    let r = verify_iss_trajectory(
        &trace,
        &cert,
        &bc,
        0.5,
        0.0,
        &Z,
        &Z,
        BoundForm::Eiss,
        Tolerances::default(),
    );
    assert!(r.is_err());
}

fn exp_trace(rate: f64, scale: f64) -> Trace {
    let times: Vec<f64> = (0..=40).map(|k| k as f64 * 0.05).collect();
    let energies = times.iter().map(|t| scale * (-rate * t).exp()).collect();
    Trace {
        boundary_left: vec![0.0; times.len()],
        boundary_right: vec![0.0; times.len()],
        times,
        energies,
        fields: None,
    }
}

#[test]
fn decay_rate_examples() {
    assert!((measure_decay_rate(&exp_trace(2.0, 1.0), None).unwrap() - 2.0).abs() < 1e-9);
    assert!(
        measure_decay_rate(&exp_trace(0.0, 1.0), None)
            .unwrap()
            .abs()
            < 1e-12
    );
    let mut t = exp_trace(1.0, 1.0);
    t.energies[35] = 0.0;
    assert!(measure_decay_rate(&t, None).is_err());
    assert!(measure_decay_rate(&exp_trace(1.0, 1.0), Some((0.0, 0.3))).is_err());
}

#[test]
fn heat_decay_rate() {
    let u0 = InitialCondition::Polynomial {
        coeffs: vec![1.0, 0.0, -1.0],
    };
    let s = Scenario::new(
        BoundaryParams::new(1.0, 0.0, 0.0, 1.0, 1.0).unwrap(),
        ReactionTerm::zero(),
        Z,
        u0,
        build_grid(128).unwrap(),
        2.0,
        1e-3,
    )
    .unwrap()
    .with_output_stride(10);
    let rate = measure_decay_rate(&simulate(&s).unwrap(), None).unwrap();
    let want = PI * PI / 2.0;
    assert!((rate - want).abs() < 0.02 * want, "{rate}");
}

#[test]
fn certified_rates_are_conservative() {
    let (cert, _) = transport_cert();
    let rate = measure_decay_rate(&transport_trace(Z, 128, 1e-3, 4.0), None).unwrap();
    assert!(rate >= 0.95 * cert.c_decay, "{rate} vs {}", cert.c_decay);

    let bc = BoundaryParams::new(1.0, 0.0, 0.0, 1.0, 1.0).unwrap();
    let gl = make_ginzburg_landau(-1.0, 1.0).unwrap();
    let cert = synthesize_certificate(
        &bc,
        -1.0,
        0.0,
        ReactionForm::GeneralBound,
        &SynthesisOptions::default(),
    )
    .unwrap()
    .into_certificate()
    .unwrap();
    assert_eq!(cert.path, AssumptionPath::A2_1);
    let u0 = InitialCondition::Fourier(FourierSeries::new(vec![0.0, 0.5], vec![]).unwrap());
    let s = Scenario::new(bc, gl, Z, u0, build_grid(128).unwrap(), 2.0, 1e-3)
        .unwrap()
        .with_output_stride(10);
    let rate = measure_decay_rate(&simulate(&s).unwrap(), None).unwrap();
    assert!(rate >= 0.95 * cert.c_decay, "{rate} vs {}", cert.c_decay);
}

fn heat_template(n: usize) -> Scenario {
    let u0 = InitialCondition::Fourier(FourierSeries::new(vec![0.0, 1.0], vec![]).unwrap());
    Scenario::new(
        BoundaryParams::new(1.0, 0.0, 0.0, 1.0, 1.0).unwrap(),
        ReactionTerm::zero(),
        Z,
        u0,
        build_grid(n).unwrap(),
        0.1,
        1e-5,
    )
    .unwrap()
}

#[test]
fn manufactured_order() {
    let r = convergence_study(
        &heat_template(32),
        |t, x| ManufacturedSolution::HeatCosine.value(t, x, 1.0),
        &[32, 64, 128, 256],
    )
    .unwrap();
    let order = r.order.unwrap();
    assert!((1.8..=2.2).contains(&order), "{r:?}");
    assert!(!r.degenerate);
    assert!(r.rows.windows(2).all(|w| w[1].error < w[0].error));
}

#[test]
fn convergence_errors_and_degenerate() {
    let t = heat_template(8);
    let exact = |t: f64, x: f64| ManufacturedSolution::HeatCosine.value(t, x, 1.0);
    assert!(convergence_study(&t, exact, &[8, 16]).is_err());
    assert!(convergence_study(&t, exact, &[8, 8, 16]).is_err());
    let zero = Scenario {
        u0: InitialCondition::Zero,
        dt: 1e-3,
        ..t
    };
    let r = convergence_study(&zero, |_, _| 0.0, &[8, 16, 32]).unwrap();
    assert!(r.degenerate);
    assert_eq!(r.order, None);
    assert!(r.rows.iter().all(|row| row.error == 0.0));
}

#[test]
fn lemma_suite_thousand() {
    let r = run_lemma_suite(1000, 42).unwrap();
    assert!(r.pass, "{r:?}");
    assert_eq!(r.stats.len(), 5);
}

proptest! {
    #[test]
    fn decay_rate_ignores_scale(rate in -3.0f64..5.0, kappa in 1e-3f64..1e3) {
        let a = measure_decay_rate(&exp_trace(rate, 1.0), None).unwrap();
        let b = measure_decay_rate(&exp_trace(rate, kappa), None).unwrap();
        prop_assert!((a - b).abs() <= 1e-12, "{} vs {}", a, b);
    }

    #[test]
    fn looser_tolerances_never_fail(
        noise in proptest::collection::vec(0.5f64..2.5, 25),
        rel in 0.0f64..0.2,
        abs in 0.0f64..1e-2,
        extra_rel in 0.0f64..0.5,
        extra_abs in 0.0f64..1e-2,
    ) {
        let (cert, bc) = transport_cert_cached();
        let times: Vec<f64> = (0..25).map(|k| k as f64 * 0.1).collect();
        let d = DisturbanceSignal::Constant { value: 0.1 };
        let mut energies: Vec<f64> = times
            .iter()
            .map(|&t| crate::certificates::iss_bound(&cert, 1.0, &d, &Z, t, BoundForm::Eiss).unwrap())
            .zip(&noise)
            .map(|(b, k)| b * k)
            .collect();
        energies[0] = 1.0;
        let trace = Trace {
            boundary_left: vec![0.0; 25],
            boundary_right: vec![0.0; 25],
            times,
            energies,
            fields: None,
        };
        let run = |rel_tol, abs_tol| {
            verify_iss_trajectory(&trace, &cert, &bc, -1.0, 0.0, &d, &Z, BoundForm::Eiss, Tolerances { rel_tol, abs_tol })
                .unwrap()
        };
        let tight = run(rel, abs);
        let loose = run(rel + extra_rel, abs + extra_abs);
        prop_assert!(!tight.pass || loose.pass);
        prop_assert!(loose.max_relative_violation <= tight.max_relative_violation + 1e-15);
    }
}

fn transport_cert_cached() -> (Certificate, BoundaryParams) {
    use std::sync::OnceLock;
    static CERT: OnceLock<(Certificate, BoundaryParams)> = OnceLock::new();
    CERT.get_or_init(transport_cert).clone()
}
