//! Fixed potentials shared by the suites, examples and bundled fixtures.

use super::{Catalog, GaugePotential, SmoothGroup};

/// Constant SU(2) potential on the plane.
pub fn su2_constant() -> GaugePotential {
    GaugePotential::constant_su2(&[[0.7, 0.2, -0.3], [-0.1, 0.5, 0.4]]).expect("valid coefficients")
}

/// SU(2) potential linear in the coordinates; its curvature varies, so
/// lattice loops on grid-aligned rectangles still carry discretization error.
pub fn su2_linear() -> GaugePotential {
    GaugePotential::new(
        2,
        SmoothGroup::SU2,
        Catalog::Linear,
        vec![
            vec![0.7, 0.2, -0.3, 0.1, 0.5, -0.2, 0.3, -0.4, 0.6],
            vec![-0.1, 0.5, 0.4, -0.6, 0.2, 0.3, 0.2, 0.1, -0.5],
        ],
    )
    .expect("valid coefficients")
}

/// U(1) potential with a quadratic in each component.
pub fn u1_quadratic() -> GaugePotential {
    GaugePotential::new(
        2,
        SmoothGroup::U1,
        Catalog::Quadratic,
        vec![vec![0.1, 0.2, 0.3, 0.5, -0.4, 0.2], vec![-0.3, 0.4, 0.1, 0.3, 0.6, -0.2]],
    )
    .expect("valid coefficients")
}
