use std::f64::consts::PI;

use proptest::prelude::*;

use super::*;
use crate::seed::trial_rng;

pub(crate) use super::samples::{su2_constant, su2_linear, u1_quadratic};

/// `∬ (∂_x a_y - ∂_y a_x)` over `[x0, x1] × [y0, y1]` for the planar
/// quadratic catalog, from the monomial integrals.
fn stokes_flux(a: &GaugePotential, [x0, y0, x1, y1]: [f64; 4]) -> f64 {
    let (cx, cy) = (&a.coeffs()[0], &a.coeffs()[1]);
    let get = |row: &Vec<f64>, k: usize| row.get(k).copied().unwrap_or(0.0);
    // ∂_x a_y = cy1 + 2 cy3 x + cy4 y, ∂_y a_x = cx2 + cx4 x + 2 cx5 y
    let (c0, cxx, cyy) = (get(cy, 1) - get(cx, 2), 2.0 * get(cy, 3) - get(cx, 4), get(cy, 4) - 2.0 * get(cx, 5));
    let (w, h) = (x1 - x0, y1 - y0);
    let (ix, iy) = ((x1 * x1 - x0 * x0) / 2.0, (y1 * y1 - y0 * y0) / 2.0);
    c0 * w * h + cxx * ix * h + cyy * iy * w
}

fn phase(x: &SmoothElement) -> f64 {
    match x {
        SmoothElement::Phase(a) => *a,
        _ => panic!("U1 expected"),
    }
}

fn wrapped(a: f64, b: f64) -> f64 {
    SmoothElement::Phase(a).distance(&SmoothElement::Phase(b))
}

#[test]
fn zero_potential_is_flat() {
    let z = GaugePotential::zero(2, SmoothGroup::SU2);
    let mut rng = trial_rng(1, 0);
    let c = random_loop(&mut rng, Point::new(0.0, 0.0), 0.5, 2);
    assert!(transport_ode(&z, &c, 16).unwrap().is_identity());
}

#[test]
fn constant_u1_unit_segment() {
    let a = GaugePotential::constant_u1(&[0.83, -0.2]).unwrap();
    let h = transport_with(&a, &Curve::line(Point::new(0.0, 0.0), Point::new(1.0, 0.0)), 1, Scheme::Midpoint).unwrap();
    assert!(wrapped(phase(&h), -0.83) < 1e-15);
}

#[test]
fn rectangle_flux_matches_stokes() {
    for a in [GaugePotential::uniform_field(1.7), u1_quadratic()] {
        for rect in [[0.0, 0.0, 1.0, 1.0], [-0.3, 0.2, 0.8, 0.5]] {
            let c = Curve::rectangle(rect[0], rect[1], rect[2], rect[3]);
            let h = transport_with(&a, &c, 10_000, Scheme::Midpoint).unwrap();
            let flux = stokes_flux(&a, rect);
            assert!(wrapped(phase(&h), -flux) < 1e-6, "{a}");
            assert!((polygon_line_integral(&a, &c).unwrap() - flux).abs() < 1e-12);
        }
    }
}

#[test]
fn circle_flux_matches_area() {
    let b = 0.9;
    let a = GaugePotential::uniform_field(b);
    let r = 0.4;
    let h =
        transport_with(&a, &Curve::circle_through(Point::new(0.2, -0.1), r, 1.0), 10_000, Scheme::Midpoint).unwrap();
    assert!(wrapped(phase(&h), -b * PI * r * r) < 1e-6);
}

#[test]
fn midpoint_scheme_is_second_order() {
    let circle = Curve::circle_through(Point::new(0.1, 0.2), 0.6, 0.3);
    for a in [su2_constant(), u1_quadratic(), su2_linear()] {
        let r = convergence_study(&a, &circle, &[64, 128, 256, 512, 1024], Scheme::Midpoint).unwrap();
        assert!(!r.exact && r.meets(2.0, 0.2), "{a}: {}", r.order);
    }
}

#[test]
fn left_point_fixture_is_flagged() {
    let circle = Curve::circle_through(Point::new(0.1, 0.2), 0.6, 0.3);
    let r = convergence_study(&u1_quadratic(), &circle, &[64, 128, 256, 512, 1024], Scheme::LeftPoint).unwrap();
    assert!(!r.meets(2.0, 0.2));
    assert!(r.meets(1.0, 0.2), "{}", r.order);
}

#[test]
fn axioms_hold_for_constant_su2() {
    let r = axiom_check(&su2_constant(), Point::new(0.0, 0.0), 7, 100, 10_000, Scheme::Midpoint).unwrap();
    assert!(r.passed(), "{:?}", r.failures);
    assert!(r.max_residual() < 1e-6);
}

#[test]
fn axioms_trivial_for_zero_potential() {
    let r =
        axiom_check(&GaugePotential::zero(3, SmoothGroup::U1), Point([0.0; 3]), 3, 10, 32, Scheme::Midpoint).unwrap();
    assert_eq!(r.max_residual(), 0.0);
    assert!(r.passed());
}

#[test]
fn circle_family_derivative_matches_flux() {
    let b = 1.3;
    let r =
        family_smoothness_check(&GaugePotential::uniform_field(b), &LoopFamily::preset("circles").unwrap(), 33, 2048)
            .unwrap();
    assert!(r.grid_stable);
    for d in &r.derivatives {
        // θ(r) = -b π r²
        assert!((d.d1[0][0] + 2.0 * PI * b * d.params[0]).abs() < 1e-4);
    }
}

#[test]
fn translation_family_is_grid_stable() {
    let r = family_smoothness_check(&su2_constant(), &LoopFamily::preset("translations").unwrap(), 9, 128).unwrap();
    assert!(r.grid_stable, "{:?} {:?}", r.first_difference_change, r.levels);
    assert!((r.first_difference_ratio - 4.0).abs() < 0.5);
}

#[test]
fn zero_potential_family_is_constant() {
    let r = family_smoothness_check(
        &GaugePotential::zero(2, SmoothGroup::U1),
        &LoopFamily::preset("circles").unwrap(),
        5,
        8,
    )
    .unwrap();
    assert!(r.levels.iter().all(|l| l.max_first_difference == 0.0 && l.max_second_difference == 0.0));
    assert!(r.grid_stable);
}

#[test]
fn zero_lattice_is_flat() {
    let f = lattice_discretize(&GaugePotential::zero(2, SmoothGroup::SU2), &LatticeBox::unit(), 4).unwrap();
    assert!(f.links().iter().all(|l| l.is_identity()));
    assert_eq!(f.graph().vertex_count(), 25);
    assert_eq!(f.graph().edge_count(), 40);
    assert_eq!(f.graph().vertex_name(crate::path::VertexId(6)), "v_1_1");
}

#[test]
fn plaquette_phase_is_enclosed_flux() {
    let a = GaugePotential::uniform_field(2.1);
    let res = 64;
    let f = lattice_discretize(&a, &LatticeBox::unit(), res).unwrap();
    let h = 1.0 / res as f64;
    for (i, j) in [(0, 0), (10, 33), (63, 63)] {
        let flux = stokes_flux(&a, [i as f64 * h, j as f64 * h, (i + 1) as f64 * h, (j + 1) as f64 * h]);
        let p = SmoothElement::from_element(&plaquette(&f, res, i, j)).unwrap();
        let got = -phase(&p);
        let got = if got < -PI {
            got + 2.0 * PI
        } else if got > PI {
            got - 2.0 * PI
        } else {
            got
        };
        assert!((got - flux).abs() / flux.abs() < 1e-3);
    }
}

#[test]
fn lattice_wilson_loops_converge() {
    let bx = LatticeBox::unit();
    let aligned =
        lattice_continuum_study(&su2_linear(), &bx, [0.25, 0.25, 0.75, 0.5], &[4, 8, 16, 32, 64], 20_000).unwrap();
    assert!(!aligned.exact && aligned.converges_at(1.0) && aligned.slope > 1.8);
    let constant = lattice_continuum_study(&su2_constant(), &bx, [0.25, 0.25, 0.75, 0.5], &[4, 8, 16], 20_000).unwrap();
    assert!(constant.rows.iter().all(|r| r.distance < 1e-10), "{:?}", constant.rows);
    let snapped =
        lattice_continuum_study(&su2_constant(), &bx, [0.2, 0.3, 0.9, 0.65], &[4, 16, 64, 256], 20_000).unwrap();
    assert!(snapped.converges_at(1.0), "{}", snapped.slope);
}

#[test]
fn potential_file_round_trip() {
    let a = u1_quadratic();
    let s = serde_json::to_string(&a).unwrap();
    assert_eq!(serde_json::from_str::<GaugePotential>(&s).unwrap(), a);
    let lin = r#"{"dim":2,"group":"U1","catalog":"linear","coeffs":[[0,0,-0.5],[0,0.5,0]]}"#;
    assert_eq!(serde_json::from_str::<GaugePotential>(lin).unwrap(), GaugePotential::uniform_field(1.0));
    let extra = r#"{"dim":2,"group":"U1","catalog":"zero","colour":1}"#;
    assert!(serde_json::from_str::<GaugePotential>(extra).unwrap_err().to_string().contains("colour"));
    let short = r#"{"dim":2,"group":"U1","catalog":"linear","coeffs":[[0,0],[0,0,0]]}"#;
    assert!(serde_json::from_str::<GaugePotential>(short).is_err());
}

#[test]
fn curve_file_round_trip() {
    let mut rng = trial_rng(2, 0);
    let c = random_loop(&mut rng, Point::new(0.1, 0.1), 0.5, 2);
    let s = serde_json::to_string(&c).unwrap();
    assert_eq!(serde_json::from_str::<Curve>(&s).unwrap(), c);
    let gap = r#"[{"type":"line","from":[0,0],"to":[1,0]},{"type":"line","from":[1,1],"to":[0,0]}]"#;
    assert!(serde_json::from_str::<Curve>(gap).unwrap_err().to_string().contains("gap"));
}

#[test]
fn non_finite_values_are_reported() {
    let a = GaugePotential::uniform_field(1.0);
    let c = Curve::line(Point::new(0.0, 0.0), Point::new(f64::MAX, f64::MAX));
    assert!(matches!(transport_with(&a, &c, 4, Scheme::Midpoint), Err(SmoothError::NonFinite(..))));
    assert!(transport_with(&a, &c, 0, Scheme::Midpoint).is_err());
}

#[test]
fn zero_length_segments_are_skipped() {
    let a = su2_constant();
    let p = Point::new(0.3, 0.3);
    let c = Curve::line(p, p).then(&Curve::line(p, Point::new(0.5, 0.1))).unwrap();
    let d = Curve::line(p, Point::new(0.5, 0.1));
    let (x, y) =
        (transport_with(&a, &c, 8, Scheme::Midpoint).unwrap(), transport_with(&a, &d, 8, Scheme::Midpoint).unwrap());
    assert_eq!(x, y);
}

fn potentials() -> Vec<GaugePotential> {
    vec![su2_constant(), su2_linear(), u1_quadratic(), GaugePotential::uniform_field(0.7)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn reversal_inverts(seed in any::<u64>(), which in 0usize..4) {
        let a = &potentials()[which];
        let c = random_loop(&mut trial_rng(seed, 0), Point::new(0.0, 0.0), 0.6, 2);
        let c = c.split_at(0, 0.4);
        let fwd = transport_with(a, &c, 64, Scheme::Midpoint).unwrap();
        let back = transport_with(a, &c.invert(), 64, Scheme::Midpoint).unwrap();
        prop_assert!(back.mul(&fwd).distance(&SmoothElement::identity(a.group())) < 1e-12);
    }

    #[test]
    fn doubling_one_segment_stays_within_the_estimate(seed in any::<u64>(), which in 0usize..4) {
        let a = &potentials()[which];
        let c = random_loop(&mut trial_rng(seed, 1), Point::new(0.0, 0.0), 0.6, 2);
        let n = c.segments().len();
        let k = (seed as usize) % n;
        let base = transport_with(a, &c, 128, Scheme::Midpoint).unwrap();
        let mut steps = vec![128; n];
        steps[k] = 256;
        let denser = transport_per_segment(a, &c, &steps, Scheme::Midpoint).unwrap();
        // sum of per-segment Richardson estimates at 128 steps
        let bound: f64 = c
            .segments()
            .iter()
            .map(|s| {
                let one = Curve::new(vec![s.clone()]).unwrap();
                let (_, e) = richardson_estimate(a, &one, 128, Scheme::Midpoint).unwrap();
                4.0 * e
            })
            .sum();
        prop_assert!(base.distance(&denser) <= bound + 1e-13, "{} > {}", base.distance(&denser), bound);
    }

    #[test]
    fn abelian_polygons_are_exact(pts in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 2..6)) {
        let a = u1_quadratic();
        let mut p: Vec<Point> = vec![Point::new(0.0, 0.0)];
        p.extend(pts.iter().map(|&(x, y)| Point::new(x, y)));
        p.push(Point::new(0.0, 0.0));
        let c = Curve::polygon(&p).unwrap();
        let exact = polygon_line_integral(&a, &c).unwrap();
        let h = transport_with(&a, &c, 10_000, Scheme::Midpoint).unwrap();
        prop_assert!(wrapped(phase(&h), -exact) < 1e-7);
    }
}
