//! JSON file formats for graphs, groups, fields, holonomy maps, arrows and
//! certificates. Every object rejects unknown keys; maps keyed by vertex or
//! edge name are written in sorted order so output is stable.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value as Json;
use thiserror::Error;

use crate::bundle::{BundleMorphism, BundlePoint, GaugeField};
use crate::category::{make_iso, HolIso, HolonomyMap};
use crate::group::{GroupDescriptor, GroupElement, GroupHom, GroupKind, HomTag, Value, DEFAULT_MATRIX_TOL};
use crate::path::{ChordBasis, Direction, EdgeId, Graph, GraphIso, Step, Tree, VertexId, Walk};
use crate::reconstruct::{EquivalenceCertificate, PointedField};

#[derive(Debug, Error)]
pub enum IoError {
    /// Malformed JSON or a missing, unknown or mistyped key; carries line and column.
    #[error("{what}: {source}")]
    Syntax {
        what: &'static str,
        #[source]
        source: serde_json::Error,
    },
    /// Well-formed but meaningless: an unknown vertex, a bad element, a broken relation.
    #[error("{what}: {reason}")]
    Invalid { what: String, reason: String },
    #[error("{path}: {source}")]
    File {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

fn invalid(what: impl Into<String>, reason: impl ToString) -> IoError {
    IoError::Invalid { what: what.into(), reason: reason.to_string() }
}

/// A type with an on-disk JSON representation.
pub trait FileFormat: Sized {
    const WHAT: &'static str;
    type Repr: Serialize + DeserializeOwned;
    fn to_repr(&self) -> Self::Repr;
    fn from_repr(repr: Self::Repr) -> Result<Self, IoError>;
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: FileFormat>(x: &T) -> String {
    pretty(&x.to_repr())
}

pub fn from_json<T: FileFormat>(s: &str) -> Result<T, IoError> {
    T::from_repr(parse(T::WHAT, s)?)
}

pub fn read_file<T: FileFormat>(path: &Path) -> Result<T, IoError> {
    from_json(&read_text(path)?)
}

pub fn write_file<T: FileFormat>(path: &Path, x: &T) -> Result<(), IoError> {
    write_text(path, &to_json(x))
}

pub fn pretty<T: Serialize + ?Sized>(x: &T) -> String {
    let mut s = serde_json::to_string_pretty(x).expect("file representations serialize");
    s.push('\n');
    s
}

pub fn parse<T: DeserializeOwned>(what: &'static str, s: &str) -> Result<T, IoError> {
    serde_json::from_str(s).map_err(|source| IoError::Syntax { what, source })
}

pub fn read_text(path: &Path) -> Result<String, IoError> {
    std::fs::read_to_string(path).map_err(|source| IoError::File { path: path.display().to_string(), source })
}

pub fn write_text(path: &Path, text: &str) -> Result<(), IoError> {
    std::fs::write(path, text).map_err(|source| IoError::File { path: path.display().to_string(), source })
}

// ---------------------------------------------------------------- groups

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum GroupRepr {
    #[serde(rename = "cyclic")]
    Cyclic { n: u32 },
    #[serde(rename = "symmetric")]
    Symmetric { n: u32 },
    #[serde(rename = "dihedral")]
    Dihedral { n: u32 },
    #[serde(rename = "quaternion8")]
    Quaternion8,
    U1 {
        #[serde(default = "default_tol")]
        tol: f64,
    },
    SU2 {
        #[serde(default = "default_tol")]
        tol: f64,
    },
}

fn default_tol() -> f64 {
    DEFAULT_MATRIX_TOL
}

impl FileFormat for GroupDescriptor {
    const WHAT: &'static str = "group";
    type Repr = GroupRepr;

    fn to_repr(&self) -> GroupRepr {
        match self.kind() {
            GroupKind::Cyclic(n) => GroupRepr::Cyclic { n },
            GroupKind::Symmetric(n) => GroupRepr::Symmetric { n },
            GroupKind::Dihedral(n) => GroupRepr::Dihedral { n },
            GroupKind::Quaternion8 => GroupRepr::Quaternion8,
            GroupKind::U1 => GroupRepr::U1 { tol: self.tolerance() },
            GroupKind::Su2 => GroupRepr::SU2 { tol: self.tolerance() },
        }
    }

    fn from_repr(r: GroupRepr) -> Result<Self, IoError> {
        let g = match r {
            GroupRepr::Cyclic { n } => GroupDescriptor::cyclic(n),
            GroupRepr::Symmetric { n } => GroupDescriptor::symmetric(n),
            GroupRepr::Dihedral { n } => GroupDescriptor::dihedral(n),
            GroupRepr::Quaternion8 => Ok(GroupDescriptor::quaternion8()),
            GroupRepr::U1 { tol } => GroupDescriptor::u1().with_tolerance(tol),
            GroupRepr::SU2 { tol } => GroupDescriptor::su2().with_tolerance(tol),
        };
        g.map_err(|e| invalid("group", e))
    }
}

/// Integer (cyclic), image array (symmetric), `{"rot":k}` / `{"ref":k}`
/// (dihedral), label (quaternion8), angle (U1), `[w,x,y,z]` (SU2).
pub fn encode_element(x: &GroupElement) -> Json {
    match x.value() {
        Value::Residue(k) => Json::from(*k),
        Value::Perm(p) => Json::from(p.clone()),
        Value::Dihedral { rot, reflect } => {
            let key = if *reflect { "ref" } else { "rot" };
            serde_json::json!({ key: rot })
        }
        Value::Q8(_) => Json::from(x.q8_label().expect("q8 value")),
        Value::Angle(a) => Json::from(*a),
        Value::Quat(q) => Json::from(q.to_vec()),
    }
}

pub fn decode_element(group: &GroupDescriptor, v: &Json) -> Result<GroupElement, String> {
    let shape = || format!("{v} is not an element of {group}");
    let uint = |v: &Json| v.as_u64().and_then(|k| u32::try_from(k).ok()).ok_or_else(shape);
    let value = match group.kind() {
        GroupKind::Cyclic(_) => Value::Residue(uint(v)?),
        GroupKind::Symmetric(_) => {
            let arr = v.as_array().ok_or_else(shape)?;
            Value::Perm(
                arr.iter()
                    .map(|i| i.as_u64().and_then(|k| u8::try_from(k).ok()).ok_or_else(shape))
                    .collect::<Result<_, _>>()?,
            )
        }
        GroupKind::Dihedral(_) => {
            let obj = v.as_object().filter(|o| o.len() == 1).ok_or_else(shape)?;
            let (key, k) = obj.iter().next().expect("one entry");
            let reflect = match key.as_str() {
                "rot" => false,
                "ref" => true,
                _ => return Err(shape()),
            };
            Value::Dihedral { rot: uint(k)?, reflect }
        }
        GroupKind::Quaternion8 => {
            let label = v.as_str().ok_or_else(shape)?;
            return group.q8(label).map_err(|e| e.to_string());
        }
        GroupKind::U1 => Value::Angle(v.as_f64().ok_or_else(shape)?),
        GroupKind::Su2 => {
            let arr = v.as_array().filter(|a| a.len() == 4).ok_or_else(shape)?;
            let mut q = [0.0; 4];
            for (slot, c) in q.iter_mut().zip(arr) {
                *slot = c.as_f64().ok_or_else(shape)?;
            }
            Value::Quat(q)
        }
    };
    group.element(value).map_err(|e| e.to_string())
}

/// `"x:e"` for the identity fiber, otherwise `"x:"` followed by the element
/// in its JSON encoding (quaternion8 labels may be written bare).
pub fn parse_basepoint(graph: &Graph, group: &GroupDescriptor, literal: &str) -> Result<BundlePoint, IoError> {
    let what = || format!("basepoint {literal:?}");
    let (v, fiber) = literal.split_once(':').ok_or_else(|| invalid(what(), "expected \"vertex:element\""))?;
    let vertex = graph.vertex(v.trim()).map_err(|e| invalid(what(), e))?;
    let fiber = fiber.trim();
    let fiber = if fiber == "e" {
        group.identity()
    } else {
        let json = serde_json::from_str(fiber).unwrap_or_else(|_| Json::from(fiber));
        decode_element(group, &json).map_err(|e| invalid(what(), e))?
    };
    Ok(BundlePoint::new(vertex, fiber))
}

pub fn format_basepoint(graph: &Graph, u: &BundlePoint) -> String {
    let name = graph.vertex_name(u.vertex);
    if *u.fiber.value() == *u.fiber.group().identity().value() {
        format!("{name}:e")
    } else {
        format!("{name}:{}", encode_element(&u.fiber))
    }
}

// ---------------------------------------------------------------- graphs

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeRepr {
    pub name: String,
    pub tail: String,
    pub head: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphRepr {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeRepr>,
}

impl FileFormat for Graph {
    const WHAT: &'static str = "graph";
    type Repr = GraphRepr;

    fn to_repr(&self) -> GraphRepr {
        GraphRepr {
            vertices: self.vertex_names().to_vec(),
            edges: self
                .edges()
                .iter()
                .map(|e| EdgeRepr {
                    name: e.name.clone(),
                    tail: self.vertex_name(e.tail).into(),
                    head: self.vertex_name(e.head).into(),
                })
                .collect(),
        }
    }

    fn from_repr(r: GraphRepr) -> Result<Self, IoError> {
        Graph::new(r.vertices, r.edges.into_iter().map(|e| (e.name, e.tail, e.head))).map_err(|e| invalid("graph", e))
    }
}

fn by_name<T>(
    what: &str,
    names: impl Iterator<Item = String>,
    mut entries: BTreeMap<String, T>,
) -> Result<Vec<T>, IoError> {
    let mut out = Vec::new();
    for name in names {
        out.push(entries.remove(&name).ok_or_else(|| invalid(what, format!("no entry for {name:?}")))?);
    }
    if let Some(extra) = entries.keys().next() {
        return Err(invalid(what, format!("unknown name {extra:?}")));
    }
    Ok(out)
}

fn elements_by_name(
    what: &str,
    group: &GroupDescriptor,
    names: impl Iterator<Item = String>,
    entries: BTreeMap<String, Json>,
) -> Result<Vec<GroupElement>, IoError> {
    by_name(what, names.collect::<Vec<_>>().into_iter(), entries)?
        .iter()
        .map(|v| decode_element(group, v).map_err(|e| invalid(what, e)))
        .collect()
}

fn edge_names(g: &Graph) -> impl Iterator<Item = String> + '_ {
    g.edges().iter().map(|e| e.name.clone())
}

// ---------------------------------------------------------------- fields

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldRepr {
    pub graph: GraphRepr,
    pub group: GroupRepr,
    pub links: BTreeMap<String, Json>,
}

impl FileFormat for GaugeField {
    const WHAT: &'static str = "field";
    type Repr = FieldRepr;

    fn to_repr(&self) -> FieldRepr {
        let g = self.graph();
        FieldRepr {
            graph: g.to_repr(),
            group: self.group().to_repr(),
            links: edge_names(g).zip(self.links().iter().map(encode_element)).collect(),
        }
    }

    fn from_repr(r: FieldRepr) -> Result<Self, IoError> {
        let graph = Graph::from_repr(r.graph)?;
        let group = GroupDescriptor::from_repr(r.group)?;
        let links = elements_by_name("field links", &group, edge_names(&graph), r.links)?;
        GaugeField::new(Arc::new(graph), group, links).map_err(|e| invalid("field", e))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointedRepr {
    pub field: FieldRepr,
    pub base: String,
}

impl FileFormat for PointedField {
    const WHAT: &'static str = "pointed field";
    type Repr = PointedRepr;

    fn to_repr(&self) -> PointedRepr {
        PointedRepr { field: self.field.to_repr(), base: format_basepoint(self.field.graph(), &self.basepoint) }
    }

    fn from_repr(r: PointedRepr) -> Result<Self, IoError> {
        let field = GaugeField::from_repr(r.field)?;
        let u = parse_basepoint(field.graph(), field.group(), &r.base)?;
        PointedField::new(field, u).map_err(|e| invalid("pointed field", e))
    }
}

// ---------------------------------------------------------------- holonomy maps

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapRepr {
    pub graph: GraphRepr,
    pub base: String,
    pub group: GroupRepr,
    pub tree: Vec<String>,
    pub images: BTreeMap<String, Json>,
}

impl FileFormat for HolonomyMap {
    const WHAT: &'static str = "holonomy map";
    type Repr = MapRepr;

    fn to_repr(&self) -> MapRepr {
        let g = self.graph();
        let basis = self.basis();
        MapRepr {
            graph: g.to_repr(),
            base: g.vertex_name(self.base()).into(),
            group: self.group().to_repr(),
            tree: self.tree().edges().iter().map(|e| g.edge(*e).name.clone()).collect(),
            images: basis
                .chords()
                .iter()
                .zip(self.images())
                .map(|(e, x)| (g.edge(*e).name.clone(), encode_element(x)))
                .collect(),
        }
    }

    fn from_repr(r: MapRepr) -> Result<Self, IoError> {
        let graph = Graph::from_repr(r.graph)?;
        let group = GroupDescriptor::from_repr(r.group)?;
        let base = graph.vertex(&r.base).map_err(|e| invalid("holonomy map base", e))?;
        let tree_edges = r
            .tree
            .iter()
            .map(|n| graph.edge_id(n))
            .collect::<Result<Vec<EdgeId>, _>>()
            .map_err(|e| invalid("holonomy map tree", e))?;
        let tree = Tree::from_edges(&graph, base, &tree_edges).map_err(|e| invalid("holonomy map tree", e))?;
        let chords: Vec<String> =
            ChordBasis::new(&graph, tree.clone(), base).chords().iter().map(|e| graph.edge(*e).name.clone()).collect();
        let images = elements_by_name("holonomy map images", &group, chords.into_iter(), r.images)?;
        HolonomyMap::new(Arc::new(graph), base, group, tree, images).map_err(|e| invalid("holonomy map", e))
    }
}

// ---------------------------------------------------------------- arrows

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphIsoRepr {
    pub vertices: BTreeMap<String, String>,
    /// Target steps, with `~` marking reversal.
    pub edges: BTreeMap<String, String>,
}

pub fn encode_graph_iso(psi: &GraphIso, src: &Graph, dst: &Graph) -> GraphIsoRepr {
    GraphIsoRepr {
        vertices: src
            .vertex_ids()
            .map(|v| (src.vertex_name(v).to_string(), dst.vertex_name(psi.vertex(v)).to_string()))
            .collect(),
        edges: src.edge_ids().map(|e| (src.edge(e).name.clone(), dst.step_name(psi.step(Step::forward(e))))).collect(),
    }
}

pub fn decode_graph_iso(r: GraphIsoRepr, src: &Graph, dst: &Graph) -> Result<GraphIso, IoError> {
    let what = "graph isomorphism";
    let names: Vec<String> = src.vertex_names().to_vec();
    let vmap = by_name(what, names.into_iter(), r.vertices)?
        .iter()
        .map(|n| dst.vertex(n))
        .collect::<Result<Vec<VertexId>, _>>()
        .map_err(|e| invalid(what, e))?;
    let emap = by_name(what, edge_names(src), r.edges)?
        .iter()
        .map(|s| {
            let (name, dir) = match s.strip_suffix('~') {
                Some(n) => (n, Direction::Reverse),
                None => (s.as_str(), Direction::Forward),
            };
            let e = dst.edge_id(name)?;
            Ok(if dir == Direction::Forward { Step::forward(e) } else { Step::reverse(e) })
        })
        .collect::<Result<Vec<Step>, crate::path::PathError>>()
        .map_err(|e| invalid(what, e))?;
    GraphIso::new(src, dst, vmap, emap).map_err(|e| invalid(what, e))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case", deny_unknown_fields)]
pub enum HomRepr {
    /// Images of the source's standard generators.
    Images {
        images: Vec<Json>,
    },
    U1Identity,
    U1Conjugation,
    Su2Conjugation {
        q: [f64; 4],
    },
}

pub fn encode_hom(phi: &GroupHom) -> HomRepr {
    match phi.tag() {
        HomTag::Images(images) => HomRepr::Images { images: images.iter().map(encode_element).collect() },
        HomTag::U1Identity => HomRepr::U1Identity,
        HomTag::U1Conjugation => HomRepr::U1Conjugation,
        HomTag::Su2Conjugation(q) => HomRepr::Su2Conjugation { q },
    }
}

pub fn decode_hom(r: HomRepr, source: &GroupDescriptor, target: &GroupDescriptor) -> Result<GroupHom, IoError> {
    let what = "homomorphism";
    let tag = match r {
        HomRepr::Images { images } => HomTag::Images(
            images.iter().map(|v| decode_element(target, v)).collect::<Result<_, _>>().map_err(|e| invalid(what, e))?,
        ),
        HomRepr::U1Identity => HomTag::U1Identity,
        HomRepr::U1Conjugation => HomTag::U1Conjugation,
        HomRepr::Su2Conjugation { q } => HomTag::Su2Conjugation(q),
    };
    GroupHom::from_tag(*source, *target, tag).map_err(|e| invalid(what, e))
}

/// An arrow of the holonomy groupoid; the endpoint maps are supplied
/// separately.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IsoRepr {
    pub psi: GraphIsoRepr,
    /// Walk literal in the source graph.
    pub alpha: String,
    pub phi: HomRepr,
}

pub fn encode_iso(a: &HolIso) -> IsoRepr {
    let (g, g2) = (a.source().graph(), a.target().graph());
    IsoRepr { psi: encode_graph_iso(a.psi(), g, g2), alpha: a.alpha().display(g), phi: encode_hom(a.phi()) }
}

/// Rebuilds and re-validates an arrow between `src` and `dst`.
pub fn decode_iso(r: IsoRepr, src: Arc<HolonomyMap>, dst: Arc<HolonomyMap>) -> Result<HolIso, IoError> {
    let psi = decode_graph_iso(r.psi, src.graph(), dst.graph())?;
    let alpha = Walk::parse(src.graph(), &r.alpha).map_err(|e| invalid("arrow alpha", e))?;
    let phi = decode_hom(r.phi, src.group(), dst.group())?;
    make_iso(psi, &alpha, phi, src, dst).map_err(|e| invalid("arrow", e))
}

// ---------------------------------------------------------------- certificates

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateRepr {
    pub source: PointedRepr,
    pub target: PointedRepr,
    pub psi: GraphIsoRepr,
    pub alpha: String,
    pub phi: HomRepr,
    /// Fiber frame `g(v)` of the bundle map at each source vertex.
    pub frames: BTreeMap<String, Json>,
    pub connection_residual: f64,
    pub diagram_residual: f64,
}

impl FileFormat for EquivalenceCertificate {
    const WHAT: &'static str = "certificate";
    type Repr = CertificateRepr;

    fn to_repr(&self) -> CertificateRepr {
        let (g, g2) = (self.source.field.graph(), self.target.field.graph());
        CertificateRepr {
            source: self.source.to_repr(),
            target: self.target.to_repr(),
            psi: encode_graph_iso(&self.psi, g, g2),
            alpha: self.alpha.display(g),
            phi: encode_hom(&self.phi),
            frames: g
                .vertex_ids()
                .map(|v| (g.vertex_name(v).to_string(), encode_element(self.morphism.frame(v))))
                .collect(),
            connection_residual: self.connection_residual,
            diagram_residual: self.diagram_residual,
        }
    }

    /// Decodes without checking the claims; see [`EquivalenceCertificate::verify`].
    fn from_repr(r: CertificateRepr) -> Result<Self, IoError> {
        let source = PointedField::from_repr(r.source)?;
        let target = PointedField::from_repr(r.target)?;
        let (g, g2) = (source.field.graph(), target.field.graph());
        let psi = decode_graph_iso(r.psi, g, g2)?;
        let alpha = Walk::parse(g, &r.alpha).map_err(|e| invalid("certificate alpha", e))?.reduce();
        let phi = decode_hom(r.phi, source.field.group(), target.field.group())?;
        let names: Vec<String> = g.vertex_names().to_vec();
        let frames = elements_by_name("certificate frames", target.field.group(), names.into_iter(), r.frames)?;
        let morphism =
            BundleMorphism::new(psi.clone(), phi.clone(), frames).map_err(|e| invalid("certificate morphism", e))?;
        Ok(EquivalenceCertificate {
            source,
            target,
            psi,
            alpha,
            phi,
            morphism,
            connection_residual: r.connection_residual,
            diagram_residual: r.diagram_residual,
        })
    }
}
