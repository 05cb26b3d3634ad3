use std::sync::Arc;

use rand::Rng;

use crate::bundle::{check_lemma1, BundlePoint, GaugeField};
use crate::category::random::{random_chain, random_map};
use crate::category::{
    make_iso, q_non_faithful_witness, q_not_split_witness, quotient, CategoryError, HolIso, HolStarIso, HolonomyMap,
};
use crate::group::{GroupDescriptor, GroupElement};
use crate::io::FileFormat;
use crate::path::{fixtures, random as prand, Walk};
use crate::seed::TrialRng;

use super::{sample_groups, Outcome, Suite, SuiteConfig, Tally};

const MATRIX_TOL: f64 = 1e-9;

pub(crate) fn field_inputs(field: &GaugeField) -> String {
    serde_json::to_string(&field.to_repr()).expect("serializable")
}

fn map_inputs(h: &HolonomyMap) -> String {
    serde_json::to_string(&h.to_repr()).expect("serializable")
}

fn tol_for(g: &GroupDescriptor) -> Option<f64> {
    g.is_matrix().then(|| g.tolerance())
}

fn compare(g: &GroupDescriptor, a: &GroupElement, b: &GroupElement) -> (bool, f64) {
    let d = a.distance(b);
    if g.is_matrix() {
        (d <= g.tolerance(), d)
    } else {
        (a.approx_eq(b), 0.0)
    }
}

/// Ordered link product along `w`, written out without the transport code.
fn direct_product(field: &GaugeField, w: &Walk) -> GroupElement {
    w.steps().iter().fold(field.group().identity(), |acc, s| {
        let u = field.link(s.edge);
        let u = if s.dir == crate::path::Direction::Forward { u.clone() } else { u.inverse() };
        &u * &acc
    })
}

/// The four transport identities on a fresh random field per trial.
pub(super) fn transport_identities(cfg: &SuiteConfig) -> super::Report {
    let mut tally = Tally::new(Suite::Lemma1, cfg);
    let n = cfg.trials_for(Suite::Lemma1);
    for (k, g) in sample_groups(Some(cfg.tol_or(MATRIX_TOL))).iter().enumerate() {
        let out = cfg.run(k as u64, n, |rng, _| {
            let graph = Arc::new(prand::connected_graph(rng, cfg.bounds.max_vertices, 0, 4));
            let field = GaugeField::random(rng, graph, *g);
            let r = check_lemma1(&field, 1, rng.gen());
            Outcome::new(r.passed(), r.max_residual, || field_inputs(&field), || format!("{:?}", r.failures))
        });
        tally.record(format!("transport identities, {g}"), tol_for(g), out);
    }
    tally.finish()
}

fn pointed(rng: &mut TrialRng, g: &GroupDescriptor, max_vertices: usize) -> (GaugeField, BundlePoint) {
    let graph = Arc::new(prand::connected_graph(rng, max_vertices, 0, 4));
    let field = GaugeField::random(rng, graph, *g);
    let x = prand::vertex(rng, field.graph());
    let u = BundlePoint::new(x, g.random(rng));
    (field, u)
}

/// Holonomy seen from a point moved along a curve, and under a change of
/// fiber point.
pub(super) fn relocated_loops(cfg: &SuiteConfig) -> super::Report {
    let mut tally = Tally::new(Suite::Lemma2, cfg);
    let n = cfg.trials_for(Suite::Lemma2);
    for (k, g) in sample_groups(Some(cfg.tol_or(MATRIX_TOL))).iter().enumerate() {
        let out = cfg.run(k as u64, n, |rng, _| {
            let (field, u) = pointed(rng, g, cfg.bounds.max_vertices);
            let graph = field.graph();
            let x = u.vertex;
            let y = prand::vertex(rng, graph);
            let len = rng.gen_range(0..8);
            let alpha = prand::walk_between(rng, graph, y, x, len);
            let len = rng.gen_range(0..10);
            let gamma = prand::random_loop(rng, graph, x, len);
            let h = g.random(rng);
            let inputs = || {
                format!(
                    "field={} u=({}, {}) alpha=\"{}\" gamma=\"{}\" g={h}",
                    field_inputs(&field),
                    graph.vertex_name(x),
                    u.fiber,
                    alpha.display(graph),
                    gamma.display(graph)
                )
            };

            // relocated loop at v = transport(α⁻¹, u)
            let v = field.transport(&alpha.invert(), &u).expect("α ends at x");
            let moved = alpha.then(&gamma).and_then(|w| w.then(&alpha.invert())).expect("endpoints line up");
            let at_u = field.holonomy(&gamma, &u).expect("loop at x");
            let at_v = field.holonomy(&moved, &v).expect("loop at y");
            let oracle = &(&u.fiber.inverse() * &direct_product(&field, &gamma)) * &u.fiber;
            let (ok1, d1) = compare(g, &at_u, &at_v);
            let (ok2, d2) = compare(g, &at_u, &oracle);
            let relocated =
                Outcome::new(ok1 && ok2, d1.max(d2), inputs, || format!("H_u={at_u} H_v={at_v} oracle={oracle}"));

            let shifted = field.holonomy(&gamma, &u.act(&h)).expect("loop at x");
            let expected = &(&h.inverse() * &at_u) * &h;
            let (ok, d) = compare(g, &shifted, &expected);
            let conj = Outcome::new(ok, d, inputs, || format!("H_(u·g)={shifted} g⁻¹H_u g={expected}"));
            vec![relocated, conj]
        });
        tally.record_many(
            &[
                (format!("holonomy at transported point, {g}"), tol_for(g)),
                (format!("base-point conjugation, {g}"), tol_for(g)),
            ],
            out,
        );
    }
    tally.finish()
}

/// A Hol-equal variant of `a`: its curve followed by a loop at the source
/// base whose holonomy is the identity (finite kinds) or, failing that, the
/// curve with a cancelling detour.
fn variant(rng: &mut TrialRng, a: &HolIso) -> HolIso {
    let h = a.source();
    let x = h.base();
    let len = rng.gen_range(1..6);
    let gamma = prand::random_loop(rng, h.graph(), x, len);
    let k = h.evaluate(&gamma).ok().and_then(|e| e.order()).unwrap_or(1);
    let mut delta = Walk::empty(x);
    for _ in 0..k {
        delta = delta.then(&gamma).expect("loop at x");
    }
    let alpha = a.alpha().walk().then(&delta).expect("α ends at x");
    make_iso(a.psi().clone(), &alpha, a.phi().clone(), h.clone(), a.target().clone()).unwrap_or_else(|_| a.clone())
}

fn law(ok: bool, what: &str, inputs: &dyn Fn() -> String) -> Outcome {
    Outcome::new(ok, 0.0, inputs, || format!("{what} violated"))
}

/// Associativity, identity and inverse laws in both groupoids, and
/// compatibility of coarse arrow equality with composition.
pub(super) fn groupoid_laws(cfg: &SuiteConfig) -> super::Report {
    let mut tally = Tally::new(Suite::Prop1, cfg);
    let n = cfg.trials_for(Suite::Prop1);
    let groups = sample_groups(cfg.tol);
    let max_v = cfg.bounds.max_vertices.min(8);
    let out = cfg.run(0, n, |rng, t| {
        let g = &groups[t as usize % groups.len()];
        let h = random_map(rng, g, max_v, 1, 3);
        let c = random_chain(rng, &h, 3, 6);
        let inputs = || {
            let arrows: Vec<String> = c.iter().map(|a| a.alpha().display(a.source().graph())).collect();
            format!("group={g} map={} curves={arrows:?}", map_inputs(&h))
        };
        let (s, q): (Vec<HolStarIso>, Vec<HolIso>) = (c.clone(), c.iter().map(quotient).collect());
        let star_assoc = {
            let l = s[2].after(&s[1]).and_then(|x| x.after(&s[0]));
            let r = s[1].after(&s[0]).and_then(|x| s[2].after(&x));
            matches!((l, r), (Ok(l), Ok(r)) if l.same_arrow(&r))
        };
        let hol_assoc = {
            let l = q[2].after(&q[1]).and_then(|x| x.after(&q[0]));
            let r = q[1].after(&q[0]).and_then(|x| q[2].after(&x));
            matches!((l, r), (Ok(l), Ok(r)) if l.same_arrow(&r))
        };
        let star_identity = {
            let (src, dst) = (HolStarIso::identity(s[0].source()), HolStarIso::identity(s[0].target()));
            s[0].after(&src).is_ok_and(|x| x.same_arrow(&s[0])) && dst.after(&s[0]).is_ok_and(|x| x.same_arrow(&s[0]))
        };
        let hol_identity = {
            let (src, dst) = (HolIso::identity(q[0].source()), HolIso::identity(q[0].target()));
            q[0].after(&src).is_ok_and(|x| x.same_arrow(&q[0])) && dst.after(&q[0]).is_ok_and(|x| x.same_arrow(&q[0]))
        };
        let star_inverse = s[1].inverse().is_ok_and(|inv| {
            inv.after(&s[1]).is_ok_and(|x| x.same_arrow(&HolStarIso::identity(s[1].source())))
                && s[1].after(&inv).is_ok_and(|x| x.same_arrow(&HolStarIso::identity(s[1].target())))
        });
        let hol_inverse = q[1].inverse().is_ok_and(|inv| {
            inv.after(&q[1]).is_ok_and(|x| x.same_arrow(&HolIso::identity(q[1].source())))
                && q[1].after(&inv).is_ok_and(|x| x.same_arrow(&HolIso::identity(q[1].target())))
        });
        // a ~ a' ~ a'' with a' and a'' built independently
        let a1 = variant(rng, &q[1]);
        let a2 = variant(rng, &a1);
        let equivalence = q[1].same_arrow(&q[1])
            && a1.same_arrow(&q[1]) == q[1].same_arrow(&a1)
            && (!(q[1].same_arrow(&a1) && a1.same_arrow(&a2)) || q[1].same_arrow(&a2));
        let congruence = q[1].same_arrow(&a1)
            && matches!((q[2].after(&q[1]), q[2].after(&a1)), (Ok(l), Ok(r)) if l.same_arrow(&r))
            && matches!((q[1].after(&q[0]), a1.after(&q[0])), (Ok(l), Ok(r)) if l.same_arrow(&r));
        vec![
            law(star_assoc, "associativity (thin classes)", &inputs),
            law(hol_assoc, "associativity (holonomy classes)", &inputs),
            law(star_identity, "identity laws (thin classes)", &inputs),
            law(hol_identity, "identity laws (holonomy classes)", &inputs),
            law(star_inverse, "inverse laws (thin classes)", &inputs),
            law(hol_inverse, "inverse laws (holonomy classes)", &inputs),
            law(equivalence, "arrow equality is an equivalence", &inputs),
            law(congruence, "arrow equality is a congruence", &inputs),
        ]
    });
    let names = [
        "associativity, thin classes",
        "associativity, holonomy classes",
        "identity laws, thin classes",
        "identity laws, holonomy classes",
        "inverse laws, thin classes",
        "inverse laws, holonomy classes",
        "arrow equality is an equivalence relation",
        "arrow equality is a congruence",
    ];
    tally.record_many(&names.map(|s| (s.to_string(), None)), out);
    tally.finish()
}

/// Functoriality of the quotient, and the witnesses about what it fails to
/// do.
pub(super) fn quotient_functor(cfg: &SuiteConfig) -> super::Report {
    let mut tally = Tally::new(Suite::Prop2, cfg);
    let n = cfg.trials_for(Suite::Prop2);
    let groups = sample_groups(cfg.tol);
    let max_v = cfg.bounds.max_vertices.min(8);
    let out = cfg.run(0, n, |rng, t| {
        let g = &groups[t as usize % groups.len()];
        let h = random_map(rng, g, max_v, 1, 3);
        let c = random_chain(rng, &h, 2, 6);
        let inputs = || {
            format!(
                "group={g} map={} curves=[{}, {}]",
                map_inputs(&h),
                c[0].alpha().display(h.graph()),
                c[1].alpha().display(c[1].source().graph())
            )
        };
        let composite = c[1].after(&c[0]).map(|x| quotient(&x));
        let parts = quotient(&c[1]).after(&quotient(&c[0]));
        let functorial = matches!((composite, parts), (Ok(l), Ok(r)) if l.same_arrow(&r));
        let unit = quotient(&HolStarIso::identity(&h)).same_arrow(&HolIso::identity(&h));
        let full = quotient(&quotient(&c[0]).lift()).same_arrow(&quotient(&c[0]));
        vec![
            law(functorial, "Q(b∘a) = Q(b)∘Q(a)", &inputs),
            law(unit, "Q(1) = 1", &inputs),
            law(full, "Q(lift(a)) = a", &inputs),
        ]
    });
    tally.record_many(
        &[
            ("quotient preserves composition".to_string(), None),
            ("quotient preserves identities".to_string(), None),
            ("quotient is full on stored representatives".to_string(), None),
        ],
        out,
    );

    let c2 = GroupDescriptor::cyclic(2).expect("valid");
    let theta = Arc::new(fixtures::theta());
    let o = match q_non_faithful_witness(theta.clone(), c2) {
        Ok(w) => Outcome::new(
            w.holds(),
            0.0,
            || "theta graph, cyclic(2), flat".into(),
            || format!("starred_equal={} quotient_equal={}", w.starred_equal, w.quotient_equal),
        ),
        Err(e) => Outcome::fail("theta graph, cyclic(2), flat".into(), e.to_string()),
    };
    tally.single("non-faithfulness witness, theta graph", None, o);

    for (label, graph, group) in [
        ("theta graph", theta, c2),
        ("figure-eight", Arc::new(fixtures::figure_eight()), GroupDescriptor::quaternion8()),
    ] {
        match q_not_split_witness(graph, group) {
            Ok(r) => {
                tally.single(
                    format!("non-splitting report, {label}, {group}"),
                    None,
                    Outcome::new(
                        r.hol_composite_is_identity && r.chosen_lift_composite_nonempty,
                        0.0,
                        || format!("{label}, {group}"),
                        || format!("{r:?}"),
                    ),
                );
                tally.note(format!(
                    "{label}, {group}: alpha \"{}\", alpha' \"{}\"; coarse composite is the identity: {}; \
                     same-curve lift composite \"{}\" (nonempty: {}); lift pair (\"{}\", \"{}\") composes to a \
                     nonempty curve: {}; every lift composite nonempty: {}",
                    r.alpha,
                    r.alpha_prime,
                    r.hol_composite_is_identity,
                    r.chosen_lift_composite,
                    r.chosen_lift_composite_nonempty,
                    r.cancelling_lift.0,
                    r.cancelling_lift.1,
                    r.cancelling_lift_composite_nonempty,
                    r.every_lift_nonempty
                ));
            }
            Err(e) => tally.single(
                format!("non-splitting report, {label}, {group}"),
                None,
                Outcome::fail(label.into(), e.to_string()),
            ),
        }
    }
    let tree = q_not_split_witness(Arc::new(fixtures::path3()), c2);
    tally.single(
        "tree graph is rejected as unsuitable",
        None,
        Outcome::new(
            matches!(tree, Err(CategoryError::Unsuitable(_))),
            0.0,
            || "path graph x-y-z, cyclic(2)".into(),
            || format!("{tree:?}"),
        ),
    );
    tally.finish()
}
