//! The `hol` command line. Exit status: 0 pass, 1 fail, 2 malformed or
//! unsuitable input, 3 search or size bound exceeded, 4 file I/O.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value as Json};
use thiserror::Error;

use crate::bundle::GaugeField;
use crate::category::{q_non_faithful_witness, q_not_split_witness, CategoryError, HolonomyMap};
use crate::group::GroupDescriptor;
use crate::io::{
    decode_iso, encode_element, encode_graph_iso, encode_iso, format_basepoint, parse, parse_basepoint, pretty,
    read_file, read_text, to_json, write_file, write_text, IoError, IsoRepr,
};
use crate::path::{Graph, Walk};
use crate::props::{run_suite, Suite, SuiteConfig};
use crate::reconstruct::{
    gauge_equivalent, reconstruct, Candidates, GaugeVerdict, PointedField, Refutation, SearchBounds,
};
use crate::smooth::{
    family_smoothness_check, lattice_discretize, richardson_estimate, Curve, GaugePotential, LatticeBox, LoopFamily,
    Scheme, SmoothError,
};

/// Largest lattice resolution `smooth lattice` accepts.
pub const MAX_LATTICE_RES: usize = 1024;
/// Largest step count the smooth commands accept.
pub const MAX_STEPS: usize = 10_000_000;

#[derive(Debug, Parser)]
#[command(name = "hol", version, about = "Discrete gauge fields, holonomy maps and their equivalence")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Master seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Trials per sampled family (props).
    #[arg(long, global = true)]
    pub trials: Option<u64>,
    /// Comparison tolerance for matrix kinds.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long, global = true, default_value_t = 64)]
    pub max_group_order: u64,
    #[arg(long, global = true, default_value_t = 10)]
    pub max_vertices: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    /// One JSON object per line.
    Structured,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Holonomy of a loop at a point of a field.
    Eval {
        #[arg(long)]
        field: String,
        /// Walk literal, e.g. "x: a b~ a".
        #[arg(long = "loop")]
        lp: String,
        /// "vertex:element", e.g. "x:e".
        #[arg(long)]
        base: String,
    },
    /// Field in spanning-tree gauge inducing a holonomy map.
    Reconstruct {
        #[arg(long)]
        map: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for a holonomy isomorphism (maps) or a bundle isomorphism (fields).
    IsoFind(IsoFind),
    /// Push a loop through a stored holonomy isomorphism and check the diagram.
    IsoApply {
        #[arg(long)]
        iso: String,
        #[arg(long)]
        src: String,
        #[arg(long)]
        dst: String,
        /// Loop at the source base.
        #[arg(long = "loop")]
        lp: String,
    },
    /// Quotient-functor witnesses on the flat map of a graph.
    QCheck {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        group: String,
    },
    /// Run a seeded property suite.
    Props {
        /// lemma1, lemma2, prop1, prop2, thm1, thm2, roundtrip, smooth or all.
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 0)]
        first_trial: u64,
        /// Also write the structured report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    #[command(subcommand)]
    Smooth(SmoothCommand),
    /// Re-check a certificate file from its raw fields.
    Verify { certificate: String },
}

#[derive(Debug, Args)]
pub struct IsoFind {
    /// Source holonomy map.
    #[arg(long, requires = "dst", conflicts_with_all = ["src_field", "dst_field"])]
    pub src: Option<String>,
    #[arg(long, requires = "src")]
    pub dst: Option<String>,
    #[arg(long, requires_all = ["src_base", "dst_field", "dst_base"])]
    pub src_field: Option<String>,
    #[arg(long)]
    pub src_base: Option<String>,
    #[arg(long, requires = "src_field")]
    pub dst_field: Option<String>,
    #[arg(long)]
    pub dst_base: Option<String>,
    /// Write the arrow or certificate here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum SmoothCommand {
    /// Path-ordered transport of a potential along a curve.
    Holonomy {
        #[arg(long)]
        potential: String,
        #[arg(long)]
        curve: String,
        #[arg(long, default_value_t = 4096)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = SchemeArg::Midpoint)]
        scheme: SchemeArg,
    },
    /// Difference quotients of holonomy over a loop family on nested grids.
    Family {
        #[arg(long)]
        potential: String,
        /// circles, translations, or a family file.
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = 33)]
        grid: usize,
        #[arg(long, default_value_t = 2048)]
        steps: usize,
    },
    /// Lattice field approximating a potential on a box.
    Lattice {
        #[arg(long)]
        potential: String,
        /// x0,y0,x1,y1
        #[arg(long = "box", default_value = "0,0,1,1")]
        bx: String,
        #[arg(long, default_value_t = 64)]
        res: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    Midpoint,
    LeftPoint,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Bound(String),
    #[error("{0}")]
    File(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Bound(_) => 3,
            CliError::File(_) => 4,
        }
    }
}

impl From<IoError> for CliError {
    fn from(e: IoError) -> Self {
        match e {
            IoError::File { .. } => CliError::File(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<SmoothError> for CliError {
    fn from(e: SmoothError) -> Self {
        match e {
            SmoothError::Bounds(_) => CliError::Bound(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

fn input(e: impl ToString) -> CliError {
    CliError::Input(e.to_string())
}

/// Directory searched for inputs given by bare name.
pub fn fixtures_dir() -> PathBuf {
    std::env::var_os("HOL_FIXTURES")
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures"))
}

/// `name` as given if it exists, else `name` or `name.json` in the fixture
/// directory.
pub fn resolve(name: &str) -> PathBuf {
    let p = PathBuf::from(name);
    if p.exists() {
        return p;
    }
    let dir = fixtures_dir();
    let bare = dir.join(name);
    if bare.exists() {
        return bare;
    }
    let with_ext = dir.join(format!("{name}.json"));
    if with_ext.exists() {
        with_ext
    } else {
        p
    }
}

fn load<T: crate::io::FileFormat>(name: &str) -> Result<T, CliError> {
    Ok(read_file(&resolve(name))?)
}

fn load_serde<T: serde::de::DeserializeOwned>(what: &'static str, name: &str) -> Result<T, CliError> {
    let text = read_text(&resolve(name))?;
    Ok(parse(what, &text)?)
}

/// Parses and runs one command line, writing reports to `out` and errors to
/// `err`. Returns the exit status.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match run(&cli, out) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

/// Runs a parsed command. `Ok(passed)` on completion.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<bool, CliError> {
    let g = &cli.global;
    let bounds =
        SearchBounds { max_vertices: g.max_vertices, max_group_order: g.max_group_order, ..SearchBounds::default() };
    let mut emit = |text: String, structured: Json| -> Result<(), CliError> {
        let s = match g.format {
            Format::Text => text,
            Format::Structured => format!("{structured}\n"),
        };
        out.write_all(s.as_bytes()).map_err(|e| CliError::File(format!("standard output: {e}")))
    };
    match &cli.command {
        Command::Eval { field, lp, base } => {
            let field: GaugeField = load(field)?;
            let graph = field.graph();
            let u = parse_basepoint(graph, field.group(), base)?;
            let w = Walk::parse(graph, lp).map_err(input)?;
            if !w.is_loop() || w.start() != u.vertex {
                return Err(input(format!(
                    "loop {lp:?} is not a closed walk at the base vertex {:?}",
                    graph.vertex_name(u.vertex)
                )));
            }
            let h = field.holonomy(&w, &u).map_err(input)?;
            let e = encode_element(&h);
            emit(format!("{e}\n"), json!({ "holonomy": e }))?;
            Ok(true)
        }
        Command::Reconstruct { map, out: path } => {
            let h: HolonomyMap = load(map)?;
            let rec = reconstruct(&h);
            let base = format_basepoint(rec.field.graph(), &rec.basepoint);
            match path {
                Some(p) => {
                    write_file(p, &rec.field)?;
                    emit(format!("wrote {} (basepoint {base})\n", p.display()), json!({ "field": p, "base": base }))?;
                }
                None => {
                    let f = rec.field.to_repr_json();
                    emit(format!("{}basepoint {base}\n", pretty(&f)), json!({ "field": f, "base": base }))?;
                }
            }
            Ok(true)
        }
        Command::IsoFind(args) => iso_find(args, &bounds, &mut emit),
        Command::IsoApply { iso, src, dst, lp } => {
            let h = Arc::new(load::<HolonomyMap>(src)?);
            let h2 = Arc::new(load::<HolonomyMap>(dst)?);
            let repr: IsoRepr = load_serde("arrow", iso)?;
            let a = decode_iso(repr, h.clone(), h2.clone())?;
            let gamma = Walk::parse(h.graph(), lp).map_err(input)?;
            if !gamma.is_loop() || gamma.start() != h.base() {
                return Err(input(format!("loop {lp:?} is not a closed walk at the source base")));
            }
            let alpha = a.alpha().walk();
            let moved = alpha.then(&gamma).and_then(|w| w.then(&alpha.invert())).map_err(input)?;
            let image = a.psi().walk(&moved).reduce();
            let lhs = a.phi().apply(&h.evaluate(&gamma).map_err(input)?);
            let rhs = h2.evaluate(image.walk()).map_err(input)?;
            let d = lhs.distance(&rhs);
            let ok = if h.group().is_matrix() { d <= h2.group().tolerance() } else { lhs.approx_eq(&rhs) };
            let literal = image.display(h2.graph());
            emit(
                format!(
                    "image loop {literal}\nphi(H(loop)) = {}\nH'(image)    = {}\ndiagram {}\n",
                    encode_element(&lhs),
                    encode_element(&rhs),
                    if ok { "commutes" } else { "fails" }
                ),
                json!({"image": literal, "phi_h": encode_element(&lhs), "h_image": encode_element(&rhs), "residual": d, "commutes": ok}),
            )?;
            Ok(ok)
        }
        Command::QCheck { graph, group } => {
            let graph = Arc::new(load::<Graph>(graph)?);
            let group: GroupDescriptor = load(group)?;
            let report = q_not_split_witness(graph.clone(), group).map_err(|e| match e {
                CategoryError::Unsuitable(why) => input(format!("unsuitable graph: {why}")),
                other => input(other),
            })?;
            let nf = q_non_faithful_witness(graph, group).map_err(input)?;
            let produced = report.hol_composite_is_identity && report.chosen_lift_composite_nonempty && nf.holds();
            let text = format!(
                "non-faithful: starred arrows differ ({}), quotient arrows agree ({})\n\
                 alpha = {}, alpha' = {}\n\
                 coarse composite is the identity: {}\n\
                 same-curve lift composite: {} (nonempty: {})\n\
                 cancelling lift ({}, {}) composite nonempty: {}\n\
                 every lift composite nonempty: {}\n",
                !nf.starred_equal,
                nf.quotient_equal,
                report.alpha,
                report.alpha_prime,
                report.hol_composite_is_identity,
                report.chosen_lift_composite,
                report.chosen_lift_composite_nonempty,
                report.cancelling_lift.0,
                report.cancelling_lift.1,
                report.cancelling_lift_composite_nonempty,
                report.every_lift_nonempty
            );
            let mut s = serde_json::to_value(&report).map_err(input)?;
            s["non_faithful"] = json!({"starred_equal": nf.starred_equal, "quotient_equal": nf.quotient_equal});
            emit(text, s)?;
            Ok(produced)
        }
        Command::Props { suite, first_trial, out: path } => {
            let suites =
                if suite == "all" { Suite::ALL.to_vec() } else { vec![suite.parse::<Suite>().map_err(input)?] };
            let cfg = SuiteConfig { seed: g.seed, trials: g.trials, first_trial: *first_trial, tol: g.tol, bounds };
            let mut passed = true;
            let mut structured = String::new();
            for s in suites {
                let r = run_suite(s, &cfg);
                passed &= r.passed();
                let lines = r.to_structured();
                structured.push_str(&lines);
                let text = match g.format {
                    Format::Text => r.to_text(),
                    Format::Structured => lines,
                };
                out.write_all(text.as_bytes()).map_err(|e| CliError::File(format!("standard output: {e}")))?;
            }
            if let Some(p) = path {
                write_text(p, &structured)?;
            }
            Ok(passed)
        }
        Command::Smooth(cmd) => smooth(cmd, &mut emit),
        Command::Verify { certificate } => {
            let text = read_text(&resolve(certificate))?;
            let cert = match crate::io::from_json::<crate::reconstruct::EquivalenceCertificate>(&text) {
                Ok(c) => c,
                // well-formed but inconsistent data is a failed check, not an input error
                Err(IoError::Invalid { what, reason }) => {
                    emit(
                        format!("FAIL: {what}: {reason}\n"),
                        json!({"verdict": "fail", "reason": format!("{what}: {reason}")}),
                    )?;
                    return Ok(false);
                }
                Err(e) => return Err(e.into()),
            };
            let tol = g.tol.unwrap_or(1e-8);
            match cert.verify(tol) {
                Ok((c, d)) => {
                    emit(
                        format!("PASS: connection residual {c:.3e}, diagram residual {d:.3e} (tol {tol:e})\n"),
                        json!({"verdict": "pass", "connection_residual": c, "diagram_residual": d, "tol": tol}),
                    )?;
                    Ok(true)
                }
                Err(e) => {
                    emit(format!("FAIL: {e}\n"), json!({"verdict": "fail", "reason": e.to_string()}))?;
                    Ok(false)
                }
            }
        }
    }
}

type Emit<'a> = dyn FnMut(String, Json) -> Result<(), CliError> + 'a;

fn refutation_json(r: &Refutation, src: &PointedField, dst: &PointedField) -> Json {
    let (g, g2) = (src.field.graph(), dst.field.graph());
    match r {
        Refutation::GraphsNotIsomorphic => json!({"refutation": "graphs_not_isomorphic"}),
        Refutation::GroupsNotIsomorphic { source, target } => {
            json!({"refutation": "groups_not_isomorphic", "source": source, "target": target})
        }
        Refutation::Witnesses(ws) => json!({
            "refutation": "loop_witnesses",
            "witnesses": ws.iter().map(|w| json!({
                "psi": encode_graph_iso(&w.psi, g, g2),
                "loop": w.lp.display(g),
                "source": w.source,
                "target": w.target,
            })).collect::<Vec<_>>(),
        }),
        Refutation::Exhaustive { graph_isos, group_isos } => {
            json!({"refutation": "exhaustive", "graph_isos": graph_isos, "group_isos": group_isos})
        }
    }
}

fn iso_find(args: &IsoFind, bounds: &SearchBounds, emit: &mut Emit<'_>) -> Result<bool, CliError> {
    let (src, dst, maps) = match (&args.src, &args.dst, &args.src_field, &args.dst_field) {
        (Some(a), Some(b), _, _) => (reconstruct(&load(a)?), reconstruct(&load(b)?), true),
        (_, _, Some(a), Some(b)) => {
            let (fa, fb): (GaugeField, GaugeField) = (load(a)?, load(b)?);
            let ua = parse_basepoint(fa.graph(), fa.group(), args.src_base.as_deref().unwrap_or_default())?;
            let ub = parse_basepoint(fb.graph(), fb.group(), args.dst_base.as_deref().unwrap_or_default())?;
            (PointedField::new(fa, ua).map_err(input)?, PointedField::new(fb, ub).map_err(input)?, false)
        }
        _ => return Err(input("give --src and --dst maps, or --src-field/--src-base/--dst-field/--dst-base")),
    };
    for p in [&src, &dst] {
        let n = p.field.graph().vertex_count();
        if n > bounds.max_vertices {
            return Err(CliError::Bound(format!(
                "graph has {n} vertices, above --max-vertices {}",
                bounds.max_vertices
            )));
        }
    }
    let mut write = |doc: String, summary: String, structured: Json| -> Result<(), CliError> {
        match &args.out {
            Some(p) => {
                write_text(p, &doc)?;
                emit(format!("{summary}; wrote {}\n", p.display()), structured)
            }
            None => emit(doc, structured),
        }
    };
    match gauge_equivalent(&src, &dst, &Candidates::default(), bounds) {
        GaugeVerdict::Equivalent(cert) => {
            if maps {
                let a = cert.holiso().map_err(input)?;
                let repr = encode_iso(&a);
                write(pretty(&repr), "holonomy isomorphism found".into(), json!({ "iso": repr }))?;
            } else {
                let doc = to_json(cert.as_ref());
                let v: Json = serde_json::from_str(&doc).expect("own output");
                write(doc, "certificate found".into(), json!({ "certificate": v }))?;
            }
            Ok(true)
        }
        GaugeVerdict::Refuted(r) => {
            if maps {
                emit(
                    "none found (within search bounds)\n".into(),
                    json!({"iso": null, "refuted": refutation_json(&r, &src, &dst)}),
                )?;
            } else {
                let v = refutation_json(&r, &src, &dst);
                write(pretty(&v), "no isomorphism: refutation".into(), v.clone())?;
            }
            Ok(false)
        }
        GaugeVerdict::Inconclusive(why) => Err(CliError::Bound(format!("none found (within search bounds): {why}"))),
    }
}

fn check_steps(steps: usize) -> Result<(), CliError> {
    if steps == 0 || steps > MAX_STEPS {
        return Err(CliError::Bound(format!("--steps must lie in 1..={MAX_STEPS}, got {steps}")));
    }
    Ok(())
}

fn smooth(cmd: &SmoothCommand, emit: &mut Emit<'_>) -> Result<bool, CliError> {
    match cmd {
        SmoothCommand::Holonomy { potential, curve, steps, scheme } => {
            check_steps(*steps)?;
            let a: GaugePotential = load_serde("potential", potential)?;
            let c: Curve = load_serde("curve", curve)?;
            let scheme = match scheme {
                SchemeArg::Midpoint => Scheme::Midpoint,
                SchemeArg::LeftPoint => Scheme::LeftPoint,
            };
            let (h, err) = richardson_estimate(&a, &c, *steps, scheme)?;
            let e = encode_element(&h.to_element());
            emit(
                format!("{e}\nerror estimate {err:.3e} ({} steps per segment)\n", 2 * steps),
                json!({"holonomy": e, "error_estimate": err, "steps": 2 * steps}),
            )?;
            Ok(true)
        }
        SmoothCommand::Family { potential, family, grid, steps } => {
            check_steps(*steps)?;
            if !(3..=257).contains(grid) {
                return Err(CliError::Bound(format!("--grid must lie in 3..=257, got {grid}")));
            }
            let a: GaugePotential = load_serde("potential", potential)?;
            let fam = match LoopFamily::preset(family) {
                Ok(f) => f,
                Err(_) => load_serde("loop family", family)?,
            };
            let r = family_smoothness_check(&a, &fam, *grid, *steps)?;
            let mut text = String::new();
            for l in &r.levels {
                text.push_str(&format!(
                    "grid {:>4}: max |first difference| {:.6e}, max |second difference| {:.6e}\n",
                    l.points_per_axis, l.max_first_difference, l.max_second_difference
                ));
            }
            text.push_str(&format!(
                "first-difference change {:?}, ratio {:.3}\n{}\n",
                r.first_difference_change,
                r.first_difference_ratio,
                if r.grid_stable { "grid-stable" } else { "not grid-stable" }
            ));
            emit(text, serde_json::to_value(&r).map_err(input)?)?;
            Ok(r.grid_stable)
        }
        SmoothCommand::Lattice { potential, bx, res, out } => {
            if *res == 0 || *res > MAX_LATTICE_RES {
                return Err(CliError::Bound(format!("--res must lie in 1..={MAX_LATTICE_RES}, got {res}")));
            }
            let a: GaugePotential = load_serde("potential", potential)?;
            let bx: LatticeBox = bx.parse()?;
            let f = lattice_discretize(&a, &bx, *res)?;
            let (v, e) = (f.graph().vertex_count(), f.graph().edge_count());
            match out {
                Some(p) => {
                    write_file(p, &f)?;
                    emit(
                        format!("wrote {} ({v} vertices, {e} edges)\n", p.display()),
                        json!({"field": p, "vertices": v, "edges": e}),
                    )?;
                }
                None => {
                    let j = f.to_repr_json();
                    emit(pretty(&j), json!({ "field": j }))?;
                }
            }
            Ok(true)
        }
    }
}

trait ReprJson {
    fn to_repr_json(&self) -> Json;
}

impl<T: crate::io::FileFormat> ReprJson for T {
    fn to_repr_json(&self) -> Json {
        serde_json::to_value(self.to_repr()).expect("serializable")
    }
}
