//! The quotient from thin classes of curves to holonomy classes: a pair of
//! arrows it identifies, and the splitting report on two small graphs.

use std::sync::Arc;

use holonomy::category::{q_non_faithful_witness, q_not_split_witness, CategoryError};
use holonomy::group::GroupDescriptor;
use holonomy::io::pretty;
use holonomy::path::fixtures;

fn main() -> Result<(), CategoryError> {
    let c2 = GroupDescriptor::cyclic(2)?;
    let theta = Arc::new(fixtures::theta());
    let w = q_non_faithful_witness(theta.clone(), c2)?;
    println!("flat map on theta, cyclic(2)");
    println!("  alpha {} vs alpha {}", w.first.alpha().display(&theta), w.second.alpha().display(&theta));
    println!("  equal before the quotient: {}, after: {}", w.starred_equal, w.quotient_equal);

    for (graph, group) in [(theta, c2), (Arc::new(fixtures::figure_eight()), GroupDescriptor::quaternion8())] {
        let r = q_not_split_witness(graph, group)?;
        println!("\n{}", pretty(&r));
        println!("identity below with no identity lift above: {}", r.obstruction_holds());
    }

    match q_not_split_witness(Arc::new(fixtures::path3()), c2) {
        Err(e) => println!("\npath graph: {e}"),
        Ok(_) => println!("\npath graph unexpectedly accepted"),
    }
    Ok(())
}
