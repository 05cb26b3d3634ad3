//! Deciding whether two pointed fields are gauge equivalent. A positive
//! answer comes with a certificate that re-verifies from its file alone; a
//! negative one with a checkable witness.

use std::error::Error;
use std::path::Path;
use std::sync::Arc;

use holonomy::bundle::GaugeField;
use holonomy::category::random::random_arrow;
use holonomy::group::GroupDescriptor;
use holonomy::io::{from_json, parse_basepoint, read_file, to_json};
use holonomy::reconstruct::random::{random_pointed, realize};
use holonomy::reconstruct::{
    gauge_equivalent, Candidates, EquivalenceCertificate, GaugeVerdict, PointedField, Refutation, SearchBounds,
};
use holonomy::seed::trial_rng;

fn pointed(name: &str) -> Result<PointedField, Box<dyn Error>> {
    let field: GaugeField = read_file(&Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name))?;
    let u = parse_basepoint(field.graph(), field.group(), "x:e")?;
    Ok(PointedField::new(field, u)?)
}

fn describe(v: &GaugeVerdict) -> String {
    match v {
        GaugeVerdict::Equivalent(c) => format!("equivalent, residuals {:?}", c.verify(1e-8)),
        GaugeVerdict::Refuted(Refutation::Witnesses(ws)) => format!("refuted by {} loop witnesses", ws.len()),
        GaugeVerdict::Refuted(r) => format!("refuted: {r:?}"),
        GaugeVerdict::Inconclusive(why) => format!("inconclusive: {why}"),
    }
}

fn main() -> Result<(), Box<dyn Error>> {
    let (cands, bounds) = (Candidates::default(), SearchBounds::default());

    // the same field with edges b and c swapped
    let (a, b) = (pointed("theta-s3.json")?, pointed("theta-s3-swapped.json")?);
    let v = gauge_equivalent(&a, &b, &cands, &bounds);
    println!("theta-s3 vs theta-s3-swapped: {}", describe(&v));
    if let Some(cert) = v.certificate() {
        let text = to_json(cert);
        println!("certificate is {} bytes of JSON", text.len());
        let back: EquivalenceCertificate = from_json(&text)?;
        println!("re-read and verified: {:?}", back.verify(1e-8));
    }

    // different graphs cannot be equivalent
    let f8 = pointed("figure-eight-q8.json")?;
    println!("\ntheta-s3 vs figure-eight-q8: {}", describe(&gauge_equivalent(&a, &f8, &cands, &bounds)));

    // same graph, every link the same transposition: the field is flat, so
    // each relabelling meets a loop with a nontrivial holonomy on one side
    let t = a.field.group().cycles(&[&[0, 1]])?;
    let changed = PointedField::new(
        GaugeField::new(a.field.graph_arc().clone(), *a.field.group(), vec![t; 3])?,
        a.basepoint.clone(),
    )?;
    println!("theta-s3 vs all links (0 1): {}", describe(&gauge_equivalent(&a, &changed, &cands, &bounds)));

    // an SU2 field and a random relabelled, re-gauged partner
    let su2 = GroupDescriptor::su2();
    let mut rng = trial_rng(14, 0);
    let src = random_pointed(&mut rng, &su2, 5);
    let h = Arc::new(src.holonomy_map()?);
    let arrow = random_arrow(&mut rng, &h, 3);
    let dst = realize(&mut rng, arrow.target());
    println!(
        "\nSU2 on {} vertices, {} edges: {}",
        src.field.graph().vertex_count(),
        src.field.graph().edge_count(),
        describe(&gauge_equivalent(&src, &dst, &cands, &bounds))
    );
    Ok(())
}
