//! The structure groups: finite catalog, U1, SU2, subgroups and isomorphisms.

use holonomy::group::{isomorphism_search, subgroup_generated, GroupDescriptor, GroupError};

fn main() -> Result<(), GroupError> {
    let catalog = [
        GroupDescriptor::cyclic(6)?,
        GroupDescriptor::symmetric(4)?,
        GroupDescriptor::dihedral(4)?,
        GroupDescriptor::quaternion8(),
        GroupDescriptor::u1(),
        GroupDescriptor::su2(),
    ];
    for g in &catalog {
        let order = g.order().map_or("infinite".to_string(), |n| n.to_string());
        println!("{:<14} order {order:<9} abelian {}", g.to_string(), g.is_abelian());
    }

    let s3 = GroupDescriptor::symmetric(3)?;
    let a = s3.cycles(&[&[0, 1]])?;
    let b = s3.cycles(&[&[1, 2]])?;
    println!("\n(0 1)(1 2) = {}", &a * &b);
    println!("(1 2)(0 1) = {}", &b * &a);
    let h = subgroup_generated(&s3, std::slice::from_ref(&a))?;
    println!("<(0 1)> has order {:?}", h.order());
    println!("<(0 1), (1 2)> has order {:?}", subgroup_generated(&s3, &[a, b])?.order());

    let q8 = GroupDescriptor::quaternion8();
    let (i, j) = (q8.q8("i")?, q8.q8("j")?);
    println!("\nin Q8: i j = {}, j i = {}, i^4 = {}", &i * &j, &j * &i, i.pow(4));

    let d4 = GroupDescriptor::dihedral(4)?;
    println!("\nisomorphisms Q8 -> Q8: {}", isomorphism_search(&q8, &q8)?.len());
    println!("isomorphisms D4 -> D4: {}", isomorphism_search(&d4, &d4)?.len());
    println!("isomorphisms D4 -> Q8: {}", isomorphism_search(&d4, &q8)?.len());

    let su2 = GroupDescriptor::su2();
    let x = su2.quaternion([0.0, 1.0, 0.0, 0.0])?;
    let y = su2.quaternion([0.0, 0.0, 1.0, 0.0])?;
    println!("\nSU2: distance(xy, yx) = {:.3}", (&x * &y).distance(&(&y * &x)));
    Ok(())
}
