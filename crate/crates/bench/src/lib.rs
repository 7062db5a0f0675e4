//! Fixtures shared by the benchmarks.

use pde_iss_core::{
    build_grid, make_transport, BoundaryParams, DisturbanceSignal, InitialCondition, Scenario,
};

/// Transport example `m = 2, n = 0, a = 1.5, b = 0, mu = 1` in the
/// drift-free variable.
pub fn transport_bc() -> BoundaryParams {
    make_transport(2.0, 0.0, 1.0)
        .and_then(|t| t.boundary_params(1.5, 0.0))
        .expect("transport parameters are valid")
}

pub fn transport_scenario(n_cells: usize, dt: f64, t_end: f64) -> Scenario {
    let model = make_transport(2.0, 0.0, 1.0).expect("valid");
    Scenario::new(
        transport_bc(),
        model.term,
        DisturbanceSignal::Sinusoid {
            amp: 0.1,
            freq: 2.0,
            phase: 0.0,
        },
        InitialCondition::Polynomial { coeffs: vec![1.0] },
        build_grid(n_cells).expect("valid grid"),
        t_end,
        dt,
    )
    .expect("valid scenario")
    .with_output_stride(10)
}
