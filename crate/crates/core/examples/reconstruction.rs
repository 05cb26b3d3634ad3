//! From a holonomy map back to a gauge field: links are the identity on a
//! spanning tree and each chord carries its generator's image.

use std::error::Error;
use std::path::Path;

use holonomy::bundle::{apply_gauge, GaugeTransformation};
use holonomy::category::HolonomyMap;
use holonomy::io::read_file;
use holonomy::reconstruct::{basepoint_fixing_gauge, reconstruct, PointedField};
use holonomy::seed::trial_rng;

fn main() -> Result<(), Box<dyn Error>> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/theta-s3-map.json");
    let h: HolonomyMap = read_file(&path)?;
    let g = h.graph();
    let tree: Vec<&str> = h.tree().edges().iter().map(|e| g.edge(*e).name.as_str()).collect();
    println!(
        "map on theta at {}, tree {tree:?}, images {:?}",
        g.vertex_name(h.base()),
        h.images().iter().map(|x| x.to_string()).collect::<Vec<_>>()
    );

    let rec = reconstruct(&h);
    for e in g.edge_ids() {
        println!("  U({}) = {}", g.edge(e).name, rec.field.link(e));
    }
    println!("induced map equals the input: {}", rec.holonomy_map()?.same_map(&h));

    // a gauge transformation fixing the base fiber induces the same map, and
    // any two fields inducing it are related by one
    let mut rng = trial_rng(3, 0);
    let mut t = GaugeTransformation::random(&mut rng, g, h.group()).values().to_vec();
    t[h.base().0] = h.group().identity();
    let other = PointedField::new(apply_gauge(&rec.field, &GaugeTransformation::new(t))?, rec.basepoint.clone())?;
    println!("\ngauge-moved field induces the same map: {}", other.holonomy_map()?.same_map(&h));
    match basepoint_fixing_gauge(&rec, &other)? {
        Some(found) => {
            println!("recovered gauge: {:?}", found.values().iter().map(|x| x.to_string()).collect::<Vec<_>>())
        }
        None => println!("no basepoint-fixing gauge found"),
    }
    Ok(())
}
