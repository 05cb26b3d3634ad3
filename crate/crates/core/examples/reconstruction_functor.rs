//! The reconstruction functor on arrows: each holonomy isomorphism becomes a
//! connection-preserving bundle map, and one can be read back from it.

use std::error::Error;
use std::sync::Arc;

use holonomy::bundle::{morphism_preserves_connection, BundleMorphism, GaugeField, GaugeTransformation};
use holonomy::category::quotient;
use holonomy::category::random::random_arrow;
use holonomy::group::{GroupDescriptor, GroupHom};
use holonomy::path::fixtures;
use holonomy::reconstruct::random::random_pointed;
use holonomy::reconstruct::{
    essential_surjectivity_check, extract_hol_iso, faithfulness_check, functor_on_arrow, reconstruct, PointedField,
};
use holonomy::seed::trial_rng;

fn main() -> Result<(), Box<dyn Error>> {
    let mut rng = trial_rng(5, 0);
    let sample = random_pointed(&mut rng, &GroupDescriptor::quaternion8(), 5);
    let h = Arc::new(sample.holonomy_map()?);
    let a = quotient(&random_arrow(&mut rng, &h, 3));
    let dst = reconstruct(a.target());
    let src = reconstruct(&h);

    let m = functor_on_arrow(&a, &src, &dst)?;
    println!("C(a) preserves the connection: {}", morphism_preserves_connection(&m, &src.field, &dst.field));
    let back = extract_hol_iso(&m, &src, &dst)?;
    println!("extracted arrow equals a: {} (adjusted: {})", back.iso.same_arrow(&a), back.adjusted);

    let b = a.inverse()?;
    let ba = b.after(&a)?;
    let composite = functor_on_arrow(&ba, &src, &src)?;
    let identity = BundleMorphism::identity(src.field.graph(), src.field.group());
    println!("C(a^-1 a) is the identity map: {}", composite.same_as(&identity));
    println!("faithful on (a, a): {:?}", faithfulness_check(&a, &a, &src, &dst)?);

    let e = essential_surjectivity_check(&src.field, &src.basepoint)?;
    println!("field is isomorphic to its reconstruction: {:?}", e.certificate.verify(1e-8).is_ok());

    // a vertical map whose frame at the base is not a holonomy: it preserves
    // the connection, yet no arrow with phi = id has it as image
    let s3 = GroupDescriptor::symmetric(3)?;
    let g = Arc::new(fixtures::loop1());
    let f = |c: &[u8]| -> Result<PointedField, Box<dyn Error>> {
        let field = GaugeField::new(g.clone(), s3, vec![s3.cycles(&[c])?])?;
        let u = field.identity_point(g.vertex("x")?);
        Ok(PointedField::new(field, u)?)
    };
    let (p, q) = (f(&[0, 1])?, f(&[1, 2])?);
    let v = BundleMorphism::vertical(&g, &s3, &GaugeTransformation::new(vec![s3.cycles(&[&[0, 2]])?]));
    println!("\nvertical (0 2) preserves the connection: {}", morphism_preserves_connection(&v, &p.field, &q.field));
    let x = extract_hol_iso(&v, &p, &q)?;
    println!(
        "extraction adjusted phi: {}, phi is the identity: {}",
        x.adjusted,
        x.iso.phi().same_as(&GroupHom::identity(&s3))
    );
    Ok(())
}
