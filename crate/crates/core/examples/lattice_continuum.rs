//! Discretizing a potential onto a square lattice: plaquettes carry the
//! enclosed flux, and lattice Wilson loops approach the continuum holonomy
//! as the mesh shrinks.

use holonomy::smooth::samples::{su2_constant, su2_linear};
use holonomy::smooth::{
    lattice_continuum_study, lattice_discretize, plaquette, GaugePotential, LatticeBox, SmoothElement, SmoothError,
};

fn main() -> Result<(), SmoothError> {
    let bx = LatticeBox::unit();
    let (b, res) = (2.1, 32);
    let field = lattice_discretize(&GaugePotential::uniform_field(b), &bx, res)?;
    println!("uniform B = {b} on a {res}x{res} lattice: {} links", field.graph().edge_count());
    let p = SmoothElement::from_element(&plaquette(&field, res, 5, 7)).expect("U1");
    let flux = -b / (res * res) as f64;
    println!("plaquette (5, 7) vs expected phase {flux:.6}: distance {:.2e}", p.distance(&SmoothElement::Phase(flux)));

    for (name, a, rect) in [
        ("linear SU2", su2_linear(), [0.25, 0.25, 0.75, 0.5]),
        ("constant SU2, off-grid rectangle", su2_constant(), [0.2, 0.3, 0.9, 0.65]),
    ] {
        let s = lattice_continuum_study(&a, &bx, rect, &[4, 8, 16, 32, 64], 20_000)?;
        println!("\n{name}");
        for r in &s.rows {
            println!("  res {:>3}  mesh {:.4}  distance {:.3e}", r.resolution, r.mesh, r.distance);
        }
        println!("  slope {:.2}", s.slope);
    }
    Ok(())
}
