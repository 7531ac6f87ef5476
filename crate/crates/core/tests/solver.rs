use wake_core::kernels::{apply_kernel, multiplier_l, KernelId, Multiplier};
use wake_core::ops::reflect;
use wake_core::solver::{
    boundary_fit, duhamel_map, make_boundary, picard_iterate, picard_solve, picard_solve_full, BoundaryData,
    DuhamelMap, Family, FlowState,
};
use wake_core::{Grid, Params, Slice, WakeError};

fn small() -> Params {
    Params { ny: 128, half_width: 200.0, nx: 48, x_max: 600.0, ..Params::reference() }
}

fn max_abs(s: &FlowState) -> f64 {
    [&s.u, &s.v, &s.w].iter().flat_map(|f| f.slices.iter()).map(Slice::max_abs).fold(0.0, f64::max)
}

fn rel_diff(a: &FlowState, b: &FlowState) -> f64 {
    max_abs(&a.diff(b)) / max_abs(b)
}

#[test]
fn linear_regime_equals_direct_kernel_application() {
    let p = Params { nonlinear: false, ..small() };
    let g = Grid::new(&p).unwrap();
    let b = make_boundary(&p, &g, Family::GaussianWake, 0.01, 11).unwrap();
    let st = picard_solve(&p, &g, &b).unwrap();
    assert_eq!(st.meta.sweeps, 1);
    let lu = multiplier_l(&g, Multiplier::Lu, p.strouhal, p.mean_tol, &b.w).unwrap();
    let lv = multiplier_l(&g, Multiplier::Lv, p.strouhal, p.mean_tol, &b.w).unwrap();
    let mut worst: f64 = 0.0;
    for (i, &x) in g.stations().iter().enumerate() {
        let s = x - p.x0;
        let k1 = |f: &Slice| apply_kernel(&g, KernelId::K1, s, p.strouhal, f).unwrap();
        let k0 = |f: &Slice| apply_kernel(&g, KernelId::K0, s, p.strouhal, f).unwrap();
        let w = k1(&b.w);
        let u = &k1(&lu) + &k0(&b.nu);
        let v = &k1(&lv) + &k0(&b.mu);
        for (got, want) in [(&st.u.slices[i], &u), (&st.v.slices[i], &v), (&st.w.slices[i], &w)] {
            let scale = want.max_abs();
            if scale > 0.0 {
                worst = worst.max((got - want).max_abs() / scale);
            }
        }
    }
    assert!(worst < 1e-10, "{worst}");
}

#[test]
fn zero_boundary_gives_zero_state_in_one_sweep() {
    let p = small();
    let g = Grid::new(&p).unwrap();
    let b = BoundaryData::zeros(p.nt, p.ny);
    let st = picard_solve(&p, &g, &b).unwrap();
    assert_eq!(st.meta.sweeps, 1);
    assert_eq!(max_abs(&st), 0.0);
}

#[test]
fn one_sweep_is_two_homogeneous() {
    let p = small();
    let g = Grid::new(&p).unwrap();
    let b = make_boundary(&p, &g, Family::GaussianWake, 0.01, 5).unwrap();
    let lin = DuhamelMap::new(&p, &g, &b).unwrap().apply_quads(None).unwrap().state;
    let full = duhamel_map(&p, &g, &b, &lin).unwrap();
    let quad = full.diff(&lin);
    let lam = 3.0;
    let bl = b.scale(lam);
    let lin_l = DuhamelMap::new(&p, &g, &bl).unwrap().apply_quads(None).unwrap().state;
    let full_l = duhamel_map(&p, &g, &bl, &lin_l).unwrap();
    let lin_scaled = lin.scale(lam);
    assert!(rel_diff(&lin_l, &lin_scaled) < 1e-13);
    let quad_l = full_l.diff(&lin_l);
    let quad_scaled = quad.scale(lam * lam);
    assert!(rel_diff(&quad_l, &quad_scaled) < 1e-10, "{}", rel_diff(&quad_l, &quad_scaled));
}

#[test]
fn window_halving_changes_output_below_tolerance() {
    let p = small();
    let g = Grid::new(&p).unwrap();
    let b = make_boundary(&p, &g, Family::SymmetricWake, 0.01, 1).unwrap();
    let a = picard_solve(&Params { window_tol: 1e-8, ..p.clone() }, &g, &b).unwrap();
    let c = picard_solve(&Params { window_tol: 1e-10, ..p.clone() }, &g, &b).unwrap();
    assert!(rel_diff(&a, &c) < 1e-7, "{}", rel_diff(&a, &c));
}

#[test]
fn station_refinement_is_second_order() {
    // Compare the state at x_max, shared by all three station sets.
    let base = Params { nx: 24, ..small() };
    let last = |nx: usize| -> FlowState {
        let p = Params { nx, ..base.clone() };
        let g = Grid::new(&p).unwrap();
        let b = make_boundary(&p, &g, Family::GaussianWake, 0.05, 2).unwrap();
        let st = picard_solve(&p, &g, &b).unwrap();
        let mut out = FlowState::zeros(1, p.nt, p.ny);
        out.u.slices[0] = st.u.slices[nx - 1].clone();
        out.v.slices[0] = st.v.slices[nx - 1].clone();
        out.w.slices[0] = st.w.slices[nx - 1].clone();
        out
    };
    let (a, b, c) = (last(24), last(47), last(93));
    let e1 = rel_diff(&a, &c);
    let e2 = rel_diff(&b, &c);
    // Richardson-type ratio of successive differences: ≈ 4 for second order
    // (measured against the finest grid it approaches 5).
    assert!(e1 / e2 > 3.0, "{e1} {e2}");
}

#[test]
fn contraction_improves_when_x0_doubles() {
    // Boundary data of the same composite norm ρ, built on the natural
    // scales of x₀ and of 2x₀.
    let rho = 2.0;
    let ratio = |x0: f64| -> f64 {
        let p = Params { x0, x_max: 30.0 * x0, ..small() };
        let g = Grid::new(&p).unwrap();
        let b = make_boundary(&p, &g, Family::SymmetricWake, 1.0, 4).unwrap();
        let b = b.scale(rho / b.norm(&p, &g).unwrap().total());
        let out = picard_solve_full(&p, &g, &b).unwrap();
        let mut r = out.state.meta.ratios.clone();
        r.sort_by(f64::total_cmp);
        r[r.len() / 2]
    };
    let (r20, r40) = (ratio(20.0), ratio(40.0));
    assert!(r40 < r20 && r20 < 0.5, "{r20} {r40}");
}

#[test]
fn large_data_is_non_contractive() {
    let p = small();
    let g = Grid::new(&p).unwrap();
    let b = make_boundary(&p, &g, Family::SymmetricWake, 1.0, 1).unwrap();
    match picard_solve(&p, &g, &b) {
        Err(e @ WakeError::NonContractive { .. }) => assert_eq!(e.class(), wake_core::ErrorClass::Convergence),
        other => panic!("expected NonContractive, got {other:?}"),
    }
}

#[test]
fn symmetric_data_keeps_parity_through_sweeps() {
    let p = Params { picard_tol: 0.0, ..small() };
    let g = Grid::new(&p).unwrap();
    let b = make_boundary(&p, &g, Family::SymmetricWake, 0.05, 9).unwrap();
    let mut worst: f64 = 0.0;
    let mut obs = |_: usize, st: &FlowState| {
        let scale = max_abs(st);
        for (f, sign) in [(&st.u, 1.0), (&st.v, -1.0), (&st.w, -1.0)] {
            for s in &f.slices {
                let d = (s - &reflect(&g, s).scale(sign)).max_abs();
                worst = worst.max(d / scale);
            }
        }
    };
    let r = picard_iterate(&p, &g, &b, 10, Some(&mut obs));
    assert!(matches!(r, Err(WakeError::MaxSweeps { .. })));
    assert!(worst < 1e-10, "{worst}");
}

#[test]
fn forward_traces_round_trip_through_boundary_fit() {
    let p = small();
    let g = Grid::new(&p).unwrap();
    let b = make_boundary(&p, &g, Family::GaussianWake, 0.01, 21).unwrap();
    let st = picard_solve(&p, &g, &b).unwrap();
    let fit = boundary_fit(&p, &g, &st.u.slices[0], &st.v.slices[0], &st.w.slices[0]).unwrap();
    let scale = b.w.max_abs().max(b.nu.max_abs());
    let err = (&fit.boundary.w - &b.w).max_abs().max((&fit.boundary.nu - &b.nu).max_abs()) / scale;
    assert!(err < 1e-6, "{err}");
    assert!(fit.residual < 1e-6, "{}", fit.residual);
}

#[test]
fn zero_traces_fit_to_zero() {
    let p = small();
    let g = Grid::new(&p).unwrap();
    let z = Slice::zeros(p.nt, p.ny);
    let fit = boundary_fit(&p, &g, &z, &z, &z).unwrap();
    assert_eq!(fit.boundary, BoundaryData::zeros(p.nt, p.ny));
    assert_eq!(fit.residual, 0.0);
}

#[test]
fn symmetric_traces_have_zero_mean_vorticity() {
    let p = small();
    let g = Grid::new(&p).unwrap();
    let b = make_boundary(&p, &g, Family::SymmetricWake, 0.01, 8).unwrap();
    let st = picard_solve(&p, &g, &b).unwrap();
    let fit = boundary_fit(&p, &g, &st.u.slices[0], &st.v.slices[0], &st.w.slices[0]).unwrap();
    assert!(fit.mean_defect < 1e-10, "{}", fit.mean_defect);
}
