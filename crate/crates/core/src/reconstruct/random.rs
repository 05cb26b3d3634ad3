//! Seeded pointed fields for the reconstruction and equivalence suites.

use std::sync::Arc;

use rand::Rng;

use crate::bundle::{apply_gauge, BundlePoint, GaugeField, GaugeTransformation};
use crate::category::HolonomyMap;
use crate::group::GroupDescriptor;
use crate::path::random as prand;

use super::{reconstruct, PointedField};

/// A random field on a random connected graph with cycle rank at least one,
/// pointed at a random vertex and fiber.
pub fn random_pointed<R: Rng + ?Sized>(rng: &mut R, group: &GroupDescriptor, max_vertices: usize) -> PointedField {
    let graph = Arc::new(prand::connected_graph(rng, max_vertices, 1, 3));
    let field = GaugeField::random(rng, graph, *group);
    let x = prand::vertex(rng, field.graph());
    let basepoint = BundlePoint::new(x, group.random(rng));
    PointedField { field, basepoint }
}

/// A pointed field inducing exactly `h`, in a random gauge.
pub fn realize<R: Rng + ?Sized>(rng: &mut R, h: &HolonomyMap) -> PointedField {
    let rec = reconstruct(h);
    let t = GaugeTransformation::random(rng, rec.field.graph(), rec.field.group());
    let field = apply_gauge(&rec.field, &t).expect("same group");
    let basepoint = BundlePoint::new(h.base(), t.at(h.base()).clone());
    PointedField { field, basepoint }
}
