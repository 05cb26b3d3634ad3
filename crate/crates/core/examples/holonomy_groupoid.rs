//! Holonomy maps as objects and their isomorphisms `(Ψ, α, φ)` as arrows:
//! composition, inverses, and when two arrows count as equal.

use std::error::Error;
use std::path::Path;
use std::sync::Arc;

use holonomy::category::{alpha_equivalent, make_iso, make_star_iso, quotient, HolIso, HolonomyMap};
use holonomy::group::GroupHom;
use holonomy::io::read_file;
use holonomy::path::{Graph, GraphIso, Walk};

fn main() -> Result<(), Box<dyn Error>> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/figure-eight.json");
    let g: Arc<Graph> = Arc::new(read_file(&path)?);
    let q8 = holonomy::group::GroupDescriptor::quaternion8();
    let x = g.vertex("x")?;
    // generator images i and j on the two petals
    let h = Arc::new(HolonomyMap::with_default_tree(g.clone(), x, q8, vec![q8.q8("i")?, q8.q8("j")?])?);
    for lp in ["x: a b", "x: b a", "x: a a a a"] {
        println!("H({lp}) = {}", h.evaluate(&Walk::parse(&g, lp)?)?);
    }

    // going once around petal a: targets are conjugated by H(a)^-1
    let id = GraphIso::identity(&g);
    let around_a = Walk::parse(&g, "x: a")?;
    let ha = h.evaluate(&around_a)?;
    let a = make_iso(id.clone(), &around_a, GroupHom::conjugation(&ha.inverse()), h.clone(), h.clone())?;
    let a2 = a.after(&a)?;
    let a4 = a2.after(&a2)?;
    println!("\nA = (id, a, conj i^-1); A.A has alpha {}", a2.alpha().display(&g));
    println!("A^4 equals the identity arrow: {}", a4.same_arrow(&HolIso::identity(&h)));
    println!("A then A^-1 is the identity: {}", a.inverse()?.after(&a)?.same_arrow(&HolIso::identity(&h)));

    // twice around a gives H = -1, which is central: the same translation as
    // staying put, so the two are one arrow of Hol but two of Hol*
    let twice = Walk::parse(&g, "x: a a")?;
    println!("\nalpha a a ~ empty: {}", alpha_equivalent(&h, &twice, &Walk::empty(x))?);
    let s1 = make_star_iso(id.clone(), &twice, GroupHom::identity(&q8), h.clone(), h.clone())?;
    let s2 = make_star_iso(id, &Walk::empty(x), GroupHom::identity(&q8), h.clone(), h.clone())?;
    println!("equal in Hol*: {}", s1.same_arrow(&s2));
    println!("equal after the quotient: {}", quotient(&s1).same_arrow(&quotient(&s2)));
    println!("canonical alpha of the image: {:?}", quotient(&s1).canonical_alpha()?.map(|w| w.display(&g)));
    Ok(())
}
