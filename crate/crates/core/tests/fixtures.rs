use std::path::PathBuf;

use holonomy::bundle::GaugeField;
use holonomy::category::HolonomyMap;
use holonomy::group::GroupDescriptor;
use holonomy::io::{from_json, parse, pretty, to_json, FileFormat};
use holonomy::path::Graph;
use holonomy::smooth::{Curve, GaugePotential};

fn dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn text(name: &str) -> String {
    std::fs::read_to_string(dir().join(format!("{name}.json"))).unwrap()
}

fn same<T: FileFormat>(name: &str) {
    let s = text(name);
    let x: T = from_json(&s).unwrap_or_else(|e| panic!("{name}: {e}"));
    assert_eq!(to_json(&x).trim_end(), s.trim_end(), "{name}");
}

#[test]
fn every_fixture_round_trips_verbatim() {
    let mut seen = 0;
    for name in ["c2", "c6", "s3", "s4", "d4", "q8", "u1", "su2"] {
        same::<GroupDescriptor>(name);
        seen += 1;
    }
    for name in ["theta", "figure-eight", "tree", "loop"] {
        same::<Graph>(name);
        seen += 1;
    }
    for name in ["theta-s3", "theta-s3-swapped", "figure-eight-q8"] {
        same::<GaugeField>(name);
        seen += 1;
    }
    for name in ["theta-s3-map", "theta-s3-swapped-map"] {
        same::<HolonomyMap>(name);
        seen += 1;
    }
    for name in ["uniform", "su2-constant", "su2-linear", "u1-quadratic"] {
        let a: GaugePotential = parse("potential", &text(name)).unwrap();
        assert_eq!(pretty(&a).trim_end(), text(name).trim_end(), "{name}");
        seen += 1;
    }
    for name in ["unit-square", "circle"] {
        let c: Curve = parse("curve", &text(name)).unwrap();
        assert_eq!(pretty(&c).trim_end(), text(name).trim_end(), "{name}");
        seen += 1;
    }
    // nothing in the directory goes untested
    assert_eq!(std::fs::read_dir(dir()).unwrap().count(), seen);
}

#[test]
fn truncated_fixtures_are_rejected() {
    for name in ["theta-s3", "theta-s3-map", "theta"] {
        let s = text(name);
        let cut = &s[..s.len() / 2];
        assert!(from_json::<GaugeField>(cut).is_err());
        assert!(from_json::<HolonomyMap>(cut).is_err());
        assert!(from_json::<Graph>(cut).is_err());
    }
}

#[test]
fn swapped_fixture_is_a_relabelling() {
    let a: HolonomyMap = from_json(&text("theta-s3-map")).unwrap();
    let b: HolonomyMap = from_json(&text("theta-s3-swapped-map")).unwrap();
    assert_eq!(a.graph().vertex_count(), b.graph().vertex_count());
    assert_ne!(to_json(&a), to_json(&b));
}
