//! Walks on a graph, free reduction, and loops written in chord generators.

use holonomy::path::{fixtures, spanning_tree, ChordBasis, PathError, Walk};

fn main() -> Result<(), PathError> {
    // two vertices x, y joined by edges a, b, c
    let g = fixtures::theta();
    println!("theta: {} vertices, {} edges, cycle rank {}", g.vertex_count(), g.edge_count(), g.cycle_rank());

    let w = Walk::parse(&g, "x: a a~ b c~ c a~")?;
    let r = w.reduce();
    println!("{}  reduces to  {}", w.display(&g), r.display(&g));
    println!("closed at x: {}", w.is_loop());

    let u = Walk::parse(&g, "x: a c~")?;
    let v = Walk::parse(&g, "x: c b~")?;
    let uv = u.then(&v)?;
    println!("({}) then ({}) = {}", u.display(&g), v.display(&g), uv.reduce().display(&g));
    println!("inverse of the product: {}", uv.invert().reduce().display(&g));

    let x = g.vertex("x")?;
    let basis = ChordBasis::new(&g, spanning_tree(&g, x), x);
    let tree: Vec<String> = basis.tree().edges().iter().map(|e| g.edge(*e).name.clone()).collect();
    println!("\nspanning tree edges {tree:?}");
    for (i, gen) in basis.generators().iter().enumerate() {
        println!("generator {i}: {}", gen.display(&g));
    }
    let lp = Walk::parse(&g, "x: b a~ c a~ a b~")?;
    let word = basis.decompose(&lp)?;
    println!("{} = word {word:?}", lp.display(&g));
    println!("expanded again: {}", basis.expand(&word).display(&g));
    Ok(())
}
