//! Path-ordered transport of a smooth potential in the plane: closed forms,
//! integrator order, the two holonomy axioms and smooth loop families.

use std::error::Error;
use std::fs;
use std::path::Path;

use holonomy::io::parse;
use holonomy::smooth::samples::{su2_linear, u1_quadratic};
use holonomy::smooth::{
    axiom_check, convergence_study, family_smoothness_check, transport_with, Curve, GaugePotential, LoopFamily, Point,
    Scheme, SmoothElement,
};

fn fixture(name: &str) -> Result<String, std::io::Error> {
    fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name))
}

fn main() -> Result<(), Box<dyn Error>> {
    let a: GaugePotential = parse("potential", &fixture("uniform.json")?)?;
    let square: Curve = parse("curve", &fixture("unit-square.json")?)?;
    let h = transport_with(&a, &square, 1000, Scheme::Midpoint)?;
    // B = 1 through the unit square
    println!("{a} around the unit square: {h:?}, closed form {:?}", SmoothElement::Phase(-1.0));

    let circle = Curve::circle_through(Point::new(0.1, 0.2), 0.6, 0.3);
    let steps = [64, 128, 256, 512, 1024];
    for scheme in [Scheme::Midpoint, Scheme::LeftPoint] {
        let r = convergence_study(&su2_linear(), &circle, &steps, scheme)?;
        println!("{scheme:?} rule on linear SU2: observed order {:.3}", r.order);
    }

    let r = axiom_check(&u1_quadratic(), Point::new(0.0, 0.0), 1, 20, 10_000, Scheme::Midpoint)?;
    println!(
        "\nspur and product axioms on 20 random loops: passed {}, max residual {:.2e}",
        r.passed(),
        r.max_residual()
    );

    let fam = LoopFamily::preset("circles")?;
    let f = family_smoothness_check(&GaugePotential::uniform_field(1.3), &fam, 9, 512)?;
    println!("\ncircle family under B = 1.3: grid-stable {}", f.grid_stable);
    for d in f.derivatives.iter().take(3) {
        println!(
            "  d phase / d r at r = {:.3}: {:.5} (flux derivative {:.5})",
            d.params[0],
            d.d1[0][0],
            -2.0 * std::f64::consts::PI * 1.3 * d.params[0]
        );
    }
    Ok(())
}
