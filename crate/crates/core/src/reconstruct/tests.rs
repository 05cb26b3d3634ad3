pub(crate) use super::random::{random_pointed, realize};
use super::*;
use crate::category::random::{random_arrow, random_map};
use crate::category::{quotient, HolIso};
use crate::group::GroupDescriptor;
use crate::path::{fixtures, ChordBasis, GraphIso};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub(crate) fn groups() -> Vec<GroupDescriptor> {
    vec![
        GroupDescriptor::cyclic(4).unwrap(),
        GroupDescriptor::symmetric(3).unwrap(),
        GroupDescriptor::dihedral(4).unwrap(),
        GroupDescriptor::quaternion8(),
        GroupDescriptor::u1(),
        GroupDescriptor::su2(),
    ]
}

fn loop_field(group: GroupDescriptor, u: GroupElement) -> PointedField {
    let field = GaugeField::new(Arc::new(fixtures::loop1()), group, vec![u]).unwrap();
    let basepoint = field.identity_point(VertexId(0));
    PointedField { field, basepoint }
}

#[test]
fn reconstruction_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for g in groups() {
        for _ in 0..10 {
            let h = random_map(&mut rng, &g, 6, 0, 4);
            let rec = reconstruct(&h);
            assert!(rec.holonomy_map().unwrap().same_map(&h), "{g}");
            for e in h.tree().edges() {
                assert!(rec.field.link(e).is_identity());
            }
        }
    }
}

#[test]
fn identity_arrow_gives_identity_morphism() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for g in groups() {
        let p = random_pointed(&mut rng, &g, 5);
        let h = Arc::new(p.holonomy_map().unwrap());
        let m = functor_on_arrow(&HolIso::identity(&h), &p, &p).unwrap();
        assert!(m.same_as(&BundleMorphism::identity(p.field.graph(), &g)), "{g}");
    }
}

#[test]
fn arrows_become_connection_preserving_maps() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for g in groups() {
        for _ in 0..8 {
            let src = random_pointed(&mut rng, &g, 5);
            let h = Arc::new(src.holonomy_map().unwrap());
            let a = random_arrow(&mut rng, &h, 4);
            let dst = realize(&mut rng, a.target());
            let m = functor_on_arrow(&a, &src, &dst).unwrap();
            assert!(connection_residual(&m, &src.field, &dst.field).unwrap() < 1e-9, "{g}");
            // z = transport(α⁻¹, u) lands on u'
            let z = src.field.transport(&a.alpha().walk().invert(), &src.basepoint).unwrap();
            assert!(m.apply(&z).approx_eq(&dst.basepoint));
        }
    }
}

#[test]
fn functor_respects_composition() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for g in groups() {
        for _ in 0..6 {
            let src = random_pointed(&mut rng, &g, 5);
            let h = Arc::new(src.holonomy_map().unwrap());
            let a = random_arrow(&mut rng, &h, 3);
            let mid = realize(&mut rng, a.target());
            let b = random_arrow(&mut rng, a.target(), 3);
            let dst = realize(&mut rng, b.target());
            let ba = b.after(&a).unwrap();
            let whole = functor_on_arrow(&ba, &src, &dst).unwrap();
            let parts =
                functor_on_arrow(&a, &src, &mid).unwrap().then(&functor_on_arrow(&b, &mid, &dst).unwrap()).unwrap();
            assert!(whole.same_as(&parts), "{g}: {}", whole.distance(&parts));
        }
    }
}

#[test]
fn path_choice_does_not_matter() {
    // β_v preceded by a loop twice around the first generator at its start
    let detour = |g: &Graph, a: VertexId, b: VertexId| {
        let t = spanning_tree(g, a);
        let basis = ChordBasis::new(g, t.clone(), a);
        let lp = basis.generators().first().map(|w| w.walk().clone()).unwrap_or_else(|| Walk::empty(a));
        lp.then(&lp).unwrap().then(t.path(g, a, b).walk()).unwrap()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for g in groups() {
        for _ in 0..6 {
            let src = random_pointed(&mut rng, &g, 5);
            let h = Arc::new(src.holonomy_map().unwrap());
            let a = random_arrow(&mut rng, &h, 3);
            let dst = realize(&mut rng, a.target());
            let m1 = functor_on_arrow(&a, &src, &dst).unwrap();
            let m2 = functor_on_arrow_with(&a, &src, &dst, &detour).unwrap();
            assert!(m1.same_as(&m2), "{g}");
        }
    }
}

#[test]
fn mismatched_fields_are_rejected() {
    let c4 = GroupDescriptor::cyclic(4).unwrap();
    let p = loop_field(c4, c4.residue(1).unwrap());
    let q = loop_field(c4, c4.residue(3).unwrap());
    let h = Arc::new(p.holonomy_map().unwrap());
    let err = functor_on_arrow(&HolIso::identity(&h), &p, &q).unwrap_err();
    assert_eq!(err, ReconstructError::Mismatch("target"));
}

#[test]
fn extraction_inverts_the_functor() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for g in groups() {
        for _ in 0..8 {
            let src = random_pointed(&mut rng, &g, 5);
            let h = Arc::new(src.holonomy_map().unwrap());
            let a = quotient(&random_arrow(&mut rng, &h, 4));
            let dst = realize(&mut rng, a.target());
            let m = functor_on_arrow(&a, &src, &dst).unwrap();
            let ex = extract_hol_iso(&m, &src, &dst).unwrap();
            assert!(!ex.adjusted, "{g}");
            assert!(ex.iso.same_arrow(&a), "{g}");
            let back = functor_on_arrow(&ex.iso, &src, &dst).unwrap();
            assert!(back.same_as(&m), "{g}: {}", back.distance(&m));
        }
    }
}

#[test]
fn gauge_transformation_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for g in groups() {
        let src = random_pointed(&mut rng, &g, 5);
        let x = src.basepoint.vertex;
        let t = GaugeTransformation::random(&mut rng, src.field.graph(), &g);
        let moved = apply_gauge(&src.field, &t).unwrap();
        let dst = PointedField::new(moved, BundlePoint::new(x, t.at(x) * &src.basepoint.fiber)).unwrap();
        let m = BundleMorphism::vertical(src.field.graph(), &g, &t);
        let ex = extract_hol_iso(&m, &src, &dst).unwrap();
        assert!(!ex.adjusted && ex.defect.is_identity());
        assert!(functor_on_arrow(&ex.iso, &src, &dst).unwrap().same_as(&m), "{g}");
    }
}

#[test]
fn s3_vertical_map_outside_the_image() {
    let s3 = GroupDescriptor::symmetric(3).unwrap();
    let src = loop_field(s3, s3.cycles(&[&[0, 1]]).unwrap());
    let dst = loop_field(s3, s3.cycles(&[&[1, 2]]).unwrap());
    let graph = src.field.graph();
    let m =
        BundleMorphism::new(GraphIso::identity(graph), GroupHom::identity(&s3), vec![s3.cycles(&[&[0, 2]]).unwrap()])
            .unwrap();
    assert!(connection_residual(&m, &src.field, &dst.field).unwrap() < 1e-12);
    let ex = extract_hol_iso(&m, &src, &dst).unwrap();
    assert!(ex.adjusted);
    assert_eq!(ex.defect, s3.cycles(&[&[0, 2]]).unwrap());
    ex.iso.revalidate().unwrap();
    // no arrow with φ = id has image m
    let (h, h2) = (Arc::new(src.holonomy_map().unwrap()), Arc::new(dst.holonomy_map().unwrap()));
    let a = Walk::parse(graph, "x: a").unwrap();
    for k in -3i32..=3 {
        let mut w = Walk::empty(VertexId(0));
        for _ in 0..k.unsigned_abs() {
            w = w.then(&if k < 0 { a.invert() } else { a.clone() }).unwrap();
        }
        if let Ok(arrow) = make_iso(GraphIso::identity(graph), &w, GroupHom::identity(&s3), h.clone(), h2.clone()) {
            assert!(!functor_on_arrow(&arrow, &src, &dst).unwrap().same_as(&m));
        }
    }
}

#[test]
fn faithfulness_has_no_violations() {
    let mut rng = ChaCha8Rng::seed_from_u64(18);
    for g in groups() {
        let src = random_pointed(&mut rng, &g, 4);
        let h = Arc::new(src.holonomy_map().unwrap());
        let a = quotient(&random_arrow(&mut rng, &h, 3));
        let dst = realize(&mut rng, a.target());
        let gens = h.basis().generators();
        // same (Ψ, φ), curve shifted by a loop
        let shifted = match gens.first() {
            Some(gen) => a.alpha().walk().then(gen.walk()).unwrap(),
            None => a.alpha().walk().clone(),
        };
        let b = make_iso(a.psi().clone(), &shifted, a.phi().clone(), a.source().clone(), a.target().clone());
        if let Ok(b) = b {
            let r = faithfulness_check(&a, &b, &src, &dst).unwrap();
            assert!(!r.violation, "{g}");
        }
    }
}

#[test]
fn essential_surjectivity_certificates() {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    for g in groups() {
        for _ in 0..5 {
            let p = random_pointed(&mut rng, &g, 6);
            let r = essential_surjectivity_check(&p.field, &p.basepoint).unwrap();
            assert!(r.tree_links_identity);
            let (c, d) = r.certificate.verify(1e-8).unwrap();
            assert!(c < 1e-8 && d < 1e-8, "{g}: {c:e} {d:e}");
        }
    }
}

#[test]
fn fields_with_equal_holonomy_are_gauge_related() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for g in groups() {
        for _ in 0..5 {
            let p = random_pointed(&mut rng, &g, 6);
            let rec = reconstruct(&p.holonomy_map().unwrap());
            let t = basepoint_fixing_gauge(&p, &rec).unwrap().expect("same holonomy map");
            assert!(apply_gauge(&p.field, &t).unwrap().same_links(&rec.field));
        }
    }
}

#[test]
fn gauge_copies_are_certified() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for g in groups() {
        for _ in 0..6 {
            let src = random_pointed(&mut rng, &g, 5);
            let h = Arc::new(src.holonomy_map().unwrap());
            let a = random_arrow(&mut rng, &h, 3);
            let dst = realize(&mut rng, a.target());
            let v = gauge_equivalent(&src, &dst, &Candidates::default(), &SearchBounds::default());
            let cert = v.certificate().unwrap_or_else(|| panic!("{g}: {v:?}"));
            cert.verify(1e-8).unwrap();
            cert.holiso().unwrap();
        }
    }
}

#[test]
fn theta_edge_swap_is_found() {
    let s3 = GroupDescriptor::symmetric(3).unwrap();
    let g = Arc::new(fixtures::theta());
    let (a, b, c) = (s3.cycles(&[&[0, 1]]).unwrap(), s3.cycles(&[&[1, 2]]).unwrap(), s3.cycles(&[&[0, 1, 2]]).unwrap());
    let f = GaugeField::new(g.clone(), s3, vec![a.clone(), b.clone(), c.clone()]).unwrap();
    let f2 = GaugeField::new(g, s3, vec![b, a, c]).unwrap();
    let src = PointedField { basepoint: f.identity_point(VertexId(0)), field: f };
    let dst = PointedField { basepoint: f2.identity_point(VertexId(0)), field: f2 };
    let cert = gauge_equivalent(&src, &dst, &Candidates::default(), &SearchBounds::default());
    let cert = cert.certificate().expect("swapping two parallel edges is a symmetry");
    cert.verify(1e-12).unwrap();
}

#[test]
fn different_orders_are_refuted() {
    let c4 = GroupDescriptor::cyclic(4).unwrap();
    let src = loop_field(c4, c4.residue(2).unwrap());
    let dst = loop_field(c4, c4.residue(1).unwrap());
    match gauge_equivalent(&src, &dst, &Candidates::default(), &SearchBounds::default()) {
        GaugeVerdict::Refuted(r @ Refutation::Witnesses(_)) => {
            let Refutation::Witnesses(ws) = &r else { unreachable!() };
            assert_eq!(ws[0].source, Invariant::Order(2));
            assert_eq!(ws[0].target, Invariant::Order(4));
            assert!(r.recheck(&src, &dst, 10));
        }
        v => panic!("{v:?}"),
    }
}

#[test]
fn structural_refutations() {
    let c2 = GroupDescriptor::cyclic(2).unwrap();
    let loop_c2 = loop_field(c2, c2.residue(1).unwrap());
    let theta = GaugeField::flat(Arc::new(fixtures::theta()), c2);
    let theta = PointedField { basepoint: theta.identity_point(VertexId(0)), field: theta };
    let v = gauge_equivalent(&loop_c2, &theta, &Candidates::default(), &SearchBounds::default());
    assert!(matches!(v, GaugeVerdict::Refuted(Refutation::GraphsNotIsomorphic)));

    let c4 = GroupDescriptor::cyclic(4).unwrap();
    let loop_c4 = loop_field(c4, c4.residue(1).unwrap());
    let v = gauge_equivalent(&loop_c2, &loop_c4, &Candidates::default(), &SearchBounds::default());
    match v {
        GaugeVerdict::Refuted(r @ Refutation::GroupsNotIsomorphic { .. }) => assert!(r.recheck(&loop_c2, &loop_c4, 10)),
        v => panic!("{v:?}"),
    }

    let u1 = GroupDescriptor::u1();
    let loop_u1 = loop_field(u1, u1.angle(0.5).unwrap());
    let v = gauge_equivalent(&loop_c2, &loop_u1, &Candidates::default(), &SearchBounds::default());
    assert!(matches!(v, GaugeVerdict::Refuted(Refutation::GroupsNotIsomorphic { .. })));
}

#[test]
fn restricted_candidates_are_inconclusive() {
    let c4 = GroupDescriptor::cyclic(4).unwrap();
    let src = loop_field(c4, c4.residue(1).unwrap());
    let dst = loop_field(c4, c4.residue(3).unwrap());
    // identity Ψ and φ only: edge reversal and inversion are excluded
    let only_id =
        Candidates { psi: Some(vec![GraphIso::identity(src.field.graph())]), phi: Some(vec![GroupHom::identity(&c4)]) };
    let v = gauge_equivalent(&src, &dst, &only_id, &SearchBounds::default());
    assert!(matches!(v, GaugeVerdict::Inconclusive(_)), "{v:?}");
    let v = gauge_equivalent(&src, &dst, &Candidates::default(), &SearchBounds::default());
    assert!(v.certificate().is_some());
}

#[test]
fn u1_angles_up_to_sign() {
    let u1 = GroupDescriptor::u1();
    let src = loop_field(u1, u1.angle(0.7).unwrap());
    let flipped = loop_field(u1, u1.angle(-0.7).unwrap());
    let other = loop_field(u1, u1.angle(0.8).unwrap());
    let v = gauge_equivalent(&src, &flipped, &Candidates::default(), &SearchBounds::default());
    v.certificate().expect("complex conjugation").verify(1e-10).unwrap();
    let v = gauge_equivalent(&src, &other, &Candidates::default(), &SearchBounds::default());
    assert!(matches!(v, GaugeVerdict::Refuted(Refutation::Witnesses(_))), "{v:?}");
}

#[test]
fn tampered_certificates_fail() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let s3 = GroupDescriptor::symmetric(3).unwrap();
    let src = random_pointed(&mut rng, &s3, 4);
    let h = Arc::new(src.holonomy_map().unwrap());
    let a = random_arrow(&mut rng, &h, 2);
    let dst = realize(&mut rng, a.target());
    let v = gauge_equivalent(&src, &dst, &Candidates::default(), &SearchBounds::default());
    let cert = v.certificate().unwrap().clone();
    cert.verify(1e-12).unwrap();

    let mut bad = cert.clone();
    let mut frames = bad.morphism.frames().to_vec();
    frames[0] = &frames[0] * &s3.cycles(&[&[0, 1]]).unwrap();
    bad.morphism = BundleMorphism::new(bad.psi.clone(), bad.phi.clone(), frames).unwrap();
    assert!(bad.verify(1e-9).is_err());

    let mut bad = cert.clone();
    bad.target.basepoint = bad.target.basepoint.act(&s3.cycles(&[&[0, 1, 2]]).unwrap());
    assert!(bad.verify(1e-9).is_err());

    let mut bad = cert;
    bad.phi = GroupHom::conjugation(&s3.cycles(&[&[0, 1]]).unwrap()).compose(&bad.phi).unwrap();
    assert!(bad.verify(1e-9).is_err());
}
