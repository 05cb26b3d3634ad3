use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::path::{random, Walk};
use crate::seed::trial_rng;

use super::{BundleError, BundlePoint, GaugeField};

/// A transport rule, pluggable so that faulty variants can be tested.
pub type TransportFn = fn(&GaugeField, &Walk, &BundlePoint) -> Result<BundlePoint, BundleError>;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Lemma1Failure {
    pub trial: u64,
    pub property: char,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Lemma1Report {
    pub trials: u64,
    pub failures: Vec<Lemma1Failure>,
    pub max_residual: f64,
}

impl Lemma1Report {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn field_transport(field: &GaugeField, w: &Walk, p: &BundlePoint) -> Result<BundlePoint, BundleError> {
    field.transport(w, p)
}

/// Checks the four transport identities on seeded random inputs:
/// (a) composite transport equals composed transports, (b) returning to `u`
/// iff the transports agree, (c) trivial holonomy iff `u` is fixed,
/// (d) right equivariance.
pub fn check_lemma1(field: &GaugeField, trials: u64, seed: u64) -> Lemma1Report {
    check_lemma1_with(field, trials, seed, field_transport)
}

pub fn check_lemma1_with(field: &GaugeField, trials: u64, seed: u64, transport: TransportFn) -> Lemma1Report {
    let results: Vec<(Vec<Lemma1Failure>, f64)> =
        (0..trials).into_par_iter().map(|t| lemma1_trial(field, t, seed, transport)).collect();
    let mut failures = Vec::new();
    let mut max_residual: f64 = 0.0;
    for (f, r) in results {
        failures.extend(f);
        max_residual = max_residual.max(r);
    }
    Lemma1Report { trials, failures, max_residual }
}

fn lemma1_trial(field: &GaugeField, trial: u64, seed: u64, transport: TransportFn) -> (Vec<Lemma1Failure>, f64) {
    let mut rng = trial_rng(seed, trial);
    let graph = field.graph();
    let group = field.group();
    let x = random::vertex(&mut rng, graph);
    let u = BundlePoint::new(x, group.random(&mut rng));
    let g = group.random(&mut rng);
    let alpha = {
        let len = rng.gen_range(0..8);
        random::walk(&mut rng, graph, x, len)
    };
    let y = alpha.end();
    let alpha2 = if rng.gen_bool(0.5) {
        // a retraced spur keeps the transport unchanged
        let len = rng.gen_range(0..4);
        let spur = random::walk(&mut rng, graph, y, len);
        alpha.then(&spur).and_then(|w| w.then(&spur.invert())).expect("spur starts at the end of alpha")
    } else {
        let len = rng.gen_range(0..8);
        random::walk_between(&mut rng, graph, x, y, len)
    };
    let gamma = if rng.gen_bool(0.5) {
        let len = rng.gen_range(0..10);
        random::random_loop(&mut rng, graph, x, len)
    } else {
        let len = rng.gen_range(0..5);
        let w = random::walk(&mut rng, graph, x, len);
        w.then(&w.invert()).expect("w⁻¹ starts where w ends")
    };

    let mut failures = Vec::new();
    let mut residual: f64 = 0.0;
    let describe = |extra: &str| {
        format!(
            "u=({}, {}) alpha=\"{}\" alpha'=\"{}\" gamma=\"{}\" g={} {extra}",
            graph.vertex_name(u.vertex),
            u.fiber,
            alpha.display(graph),
            alpha2.display(graph),
            gamma.display(graph),
            g
        )
    };
    let mut fail = |property: char, extra: String| {
        failures.push(Lemma1Failure { trial, property, detail: describe(&extra) });
    };
    let run = |w: &Walk, p: &BundlePoint| transport(field, w, p).expect("walks start at the point");

    let alpha_inv = alpha.invert();
    // (a)
    let composite = alpha2.then(&alpha_inv).expect("co-terminal walks");
    let lhs = run(&composite, &u);
    let rhs = run(&alpha_inv, &run(&alpha2, &u));
    residual = residual.max(lhs.fiber.distance(&rhs.fiber));
    if !lhs.approx_eq(&rhs) {
        fail('a', format!("composite {} vs composed {}", lhs.fiber, rhs.fiber));
    }
    // (b)
    let back = rhs.approx_eq(&u);
    let same = run(&alpha, &u).approx_eq(&run(&alpha2, &u));
    if back != same {
        fail('b', format!("returns={back} agree={same}"));
    }
    // (c)
    let hol = field.holonomy(&gamma, &u).expect("gamma is a loop at u");
    let fixed = run(&gamma, &u).approx_eq(&u);
    if hol.is_identity() != fixed {
        fail('c', format!("holonomy {hol} fixed={fixed}"));
    }
    // (d)
    let lhs = run(&alpha, &u.act(&g));
    let rhs = run(&alpha, &u).act(&g);
    residual = residual.max(lhs.fiber.distance(&rhs.fiber));
    if !lhs.approx_eq(&rhs) {
        fail('d', format!("{} vs {}", lhs.fiber, rhs.fiber));
    }
    if group.is_finite() {
        residual = 0.0;
    }
    (failures, residual)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupDescriptor;
    use crate::path::random;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    /// Acts on the right of the fiber, which breaks equivariance.
    fn right_transport(field: &GaugeField, w: &Walk, p: &BundlePoint) -> Result<BundlePoint, BundleError> {
        let mut fiber = p.fiber.clone();
        for s in w.steps() {
            fiber = &fiber * &field.step_value(*s);
        }
        Ok(BundlePoint::new(w.end(), fiber))
    }

    #[test]
    fn flat_field_passes() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let g = Arc::new(random::connected_graph(&mut rng, 8, 1, 4));
        let f = GaugeField::flat(g, GroupDescriptor::symmetric(4).unwrap());
        assert!(check_lemma1(&f, 100, 1).passed());
    }

    #[test]
    fn random_symmetric_fields_pass() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let s4 = GroupDescriptor::symmetric(4).unwrap();
        for k in 0..10 {
            let g = Arc::new(random::connected_graph(&mut rng, 10, 1, 5));
            let f = GaugeField::random(&mut rng, g, s4);
            let r = check_lemma1(&f, 100, k);
            assert!(r.passed(), "{:?}", r.failures.first());
        }
    }

    #[test]
    fn corrupted_transport_is_caught() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let s3 = GroupDescriptor::symmetric(3).unwrap();
        let g = Arc::new(random::connected_graph(&mut rng, 5, 2, 4));
        let f = GaugeField::random(&mut rng, g, s3);
        let r = check_lemma1_with(&f, 200, 3, right_transport);
        assert!(r.failures.iter().any(|x| x.property == 'd'));
    }

    #[test]
    fn report_is_deterministic() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let g = Arc::new(random::connected_graph(&mut rng, 6, 1, 3));
        let f = GaugeField::random(&mut rng, g, GroupDescriptor::su2());
        let a = check_lemma1(&f, 50, 5);
        assert!(a.passed());
        assert!(a.max_residual < 1e-9);
        assert_eq!(a, check_lemma1(&f, 50, 5));
    }
}
