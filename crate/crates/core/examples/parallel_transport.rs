//! Transport of bundle points along walks, holonomy at a point, and what
//! gauge transformations and moving the base point do to it.

use std::error::Error;
use std::path::Path;

use holonomy::bundle::{apply_gauge, check_lemma1, holonomy_subbundle, GaugeField, GaugeTransformation};
use holonomy::io::{format_basepoint, read_file};
use holonomy::path::Walk;

fn main() -> Result<(), Box<dyn Error>> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/theta-s3.json");
    let field: GaugeField = read_file(&path)?;
    let g = field.graph_arc().clone();
    let s3 = *field.group();
    for e in g.edge_ids() {
        println!("U({}) = {}", g.edge(e).name, field.link(e));
    }

    let x = g.vertex("x")?;
    let u = field.identity_point(x);
    let ab = Walk::parse(&g, "x: a b~")?;
    let half = Walk::parse(&g, "x: a")?;
    let p = field.transport(&half, &u)?;
    println!("\n{} transported along a lands at {}", format_basepoint(&g, &u), format_basepoint(&g, &p));
    let h = field.holonomy(&ab, &u)?;
    println!("holonomy of {} at {}: {h}", ab.display(&g), format_basepoint(&g, &u));

    // same loop, fiber point moved by c: the holonomy is conjugated
    let c = s3.cycles(&[&[0, 1]])?;
    let uc = u.act(&c);
    println!(
        "at {}: {}   (c^-1 H c = {})",
        format_basepoint(&g, &uc),
        field.holonomy(&ab, &uc)?,
        h.conjugated_by(&c.inverse())
    );

    // a gauge transformation changes the links but not the holonomy at the
    // transformed point
    let t = GaugeTransformation::new(vec![c.clone(), s3.cycles(&[&[0, 1, 2]])?]);
    let moved = apply_gauge(&field, &t)?;
    let ut = moved.point(x, t.at(x) * &u.fiber)?;
    println!("after a gauge transformation: {}", moved.holonomy(&ab, &ut)?);

    let sub = holonomy_subbundle(&field, &u)?;
    println!("\nholonomy group at u has order {:?}", sub.holonomy_group().order());
    for v in g.vertex_ids() {
        println!("reachable fiber over {}: {:?}", g.vertex_name(v), sub.fiber(v).map(|f| f.len()));
    }

    let report = check_lemma1(&field, 200, 7);
    println!("\ntransport identities on 200 random walks: passed {}", report.passed());
    Ok(())
}
