//! The `polarized` command line. Every subcommand prints one JSON object
//! carrying `"schema": 1` on standard output. Grids, rasters and map files
//! go to the path given by `--out`.
//!
//! Exit status is 0 on success, 1 when an operation fails (or a check
//! reports a mismatch) and 2 on a usage error, including unreadable map
//! files.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};
use thiserror::Error;

use crate::arith::{integral_gcd, parse_coefficient, BigRational, IntegralElement, QuadElem, QuadField};
use crate::heights::{naive_height, naive_height_by_places, neron_tate, CanonicalHeight, HeightOptions};
use crate::lattes::{
    catalog_entries, catalog_entry, for_lambda, lattes_double, predict_profile, ramification_detail, ramification_profile, verify_lattes,
    CatalogEntry, EllipticCurveCM, LattesError, Multiplier, RamificationProfile,
};
use crate::map::{commute_check, ProjPoint, RationalMap};
use crate::mapfile::{map_to_json, read_map, MapFileError};
use crate::measures::roots::poly_roots;
use crate::measures::{
    compare_l1, correlation, green_field, green_homogeneous, julia_raster, ks_uniform_angles, lattes_density, measure_from_green,
    periodic_points, preimage_sample, singular_mask, total_mass, DensityGrid, GreenField, Lift, RasterMode, SpherePoint, StartMetric,
    Window,
};
use crate::poly::{poly_gcd, Poly};
use crate::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Which library operations each subcommand is built around. Every
/// operation appears under exactly one subcommand.
pub const DISPATCH: &[(&str, &[&str])] = &[
    ("height", &["heights::canonical_height", "heights::naive_height", "heights::naive_height_by_places"]),
    ("nt-height", &["heights::neron_tate"]),
    ("commute", &["map::commute_check", "map::RationalMap::equals"]),
    ("compose", &["map::RationalMap::normalize", "map::RationalMap::compose", "map::RationalMap::iterate", "map::RationalMap::eval"]),
    (
        "ramify",
        &[
            "lattes::two_torsion_targets",
            "lattes::ramification_profile",
            "lattes::for_lambda",
            "map::RationalMap::distinct_preimages",
            "map::RationalMap::derivative",
        ],
    ),
    ("table-check", &["lattes::predict_profile"]),
    ("green", &["measures::green", "measures::green_field"]),
    ("measure", &["measures::measure_from_green"]),
    ("density-compare", &["measures::preimage_sample", "measures::lattes_density", "measures::compare_l1"]),
    ("periodic", &["measures::periodic_points"]),
    ("julia", &["measures::julia_raster"]),
    ("catalog", &["lattes::catalog", "lattes::lattes_double"]),
    ("arith", &["arith::field_ops", "arith::conj", "arith::norm", "arith::integral_gcd", "poly::poly_gcd", "measures::poly_roots"]),
];

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Domain(#[from] Error),
    #[error("{0}")]
    CheckFailed(String),
    #[error("cannot write {path}: {source}")]
    Output { path: String, source: io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            _ => EXIT_DOMAIN,
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

impl From<MapFileError> for CliError {
    fn from(e: MapFileError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<LattesError> for CliError {
    fn from(e: LattesError) -> Self {
        match e {
            LattesError::UnknownName { .. } => CliError::Usage(e.to_string()),
            e => CliError::Domain(e.into()),
        }
    }
}

macro_rules! domain_from {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Domain(e.into())
            }
        }
    )*};
}

domain_from!(crate::arith::ArithError, crate::map::MapError, crate::heights::HeightError, crate::measures::MeasureError);

#[derive(Parser, Debug)]
#[command(name = "polarized", version, about = "Canonical heights, metrics and measures of rational maps on the projective line")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Canonical height of points under a map, with an error bound.
    Height(HeightArgs),
    /// Néron–Tate height of a point of E1 or E2, from its x-coordinate.
    NtHeight(NtHeightArgs),
    /// Whether two maps commute, and which catalog map their composite is.
    Commute(CommuteArgs),
    /// Composite of maps (the last one is applied first), or an iterate.
    Compose(ComposeArgs),
    /// Ramification of a Lattès map over the images of the 2-torsion.
    Ramify(RamifyArgs),
    /// Computed ramification multisets against the predicted ones.
    TableCheck(TableCheckArgs),
    /// Green's function at points, or on a grid written as CSV.
    Green(GreenArgs),
    /// Canonical measure from the Green field, written as CSV.
    Measure(MeasureArgs),
    /// Preimage histogram against a reference density.
    DensityCompare(DensityCompareArgs),
    /// Periodic points and their multipliers.
    Periodic(PeriodicArgs),
    /// PGM/PPM raster of the Julia set.
    Julia(JuliaArgs),
    /// List the catalog, or print one of its maps.
    Catalog(CatalogArgs),
    /// Arithmetic in Q, Q(i) and Q(sqrt -3).
    Arith(ArithArgs),
}

#[derive(Args, Debug, Clone, Default)]
pub struct MapArgs {
    /// Catalog map name(s); see `polarized catalog`.
    #[arg(long, num_args = 1.., value_name = "NAME")]
    pub catalog: Vec<String>,
    /// JSON map file(s).
    #[arg(long = "map", value_name = "FILE")]
    pub map: Vec<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CurveName {
    #[value(name = "E1", alias = "e1")]
    E1,
    #[value(name = "E2", alias = "e2")]
    E2,
}

impl CurveName {
    fn curve(self) -> EllipticCurveCM {
        match self {
            CurveName::E1 => EllipticCurveCM::e1(),
            CurveName::E2 => EllipticCurveCM::e2(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MetricName {
    Sup,
    FubiniStudy,
}

impl From<MetricName> for StartMetric {
    fn from(m: MetricName) -> Self {
        match m {
            MetricName::Sup => StartMetric::Sup,
            MetricName::FubiniStudy => StartMetric::FubiniStudy,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeName {
    Density,
    Green,
}

#[derive(Args, Debug)]
pub struct HeightArgs {
    #[command(flatten)]
    pub maps: MapArgs,
    /// Point `X,Y` (or `X` for `X,1`) in the coefficient grammar.
    #[arg(long = "point", value_name = "X,Y", required = true)]
    pub points: Vec<String>,
    /// Field of the points, `d` in Q(sqrt -d); defaults to the map's field.
    #[arg(long)]
    pub field: Option<u32>,
    /// Target error of the Tate limit.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Iteration budget.
    #[arg(long, default_value_t = 400)]
    pub iters: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write CSV here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct NtHeightArgs {
    #[arg(long, value_enum, default_value_t = CurveName::E1)]
    pub curve: CurveName,
    /// The x-coordinate, as `X` or `X,Y` for `X/Y`.
    #[arg(long = "point", value_name = "X[,Y]", required = true)]
    pub points: Vec<String>,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}

#[derive(Args, Debug)]
pub struct CommuteArgs {
    #[command(flatten)]
    pub maps: MapArgs,
}

#[derive(Args, Debug)]
pub struct ComposeArgs {
    #[command(flatten)]
    pub maps: MapArgs,
    /// Iterate the composite this many times.
    #[arg(long, default_value_t = 1)]
    pub iters: u32,
    /// Also evaluate the result at these points.
    #[arg(long = "point", value_name = "X,Y")]
    pub points: Vec<String>,
    /// Write the result as a map file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct RamifyArgs {
    #[command(flatten)]
    pub maps: MapArgs,
    /// Multiplier `a,b,d` meaning `a + b·sqrt(-d)`.
    #[arg(long, value_name = "A,B,D")]
    pub lambda: Option<String>,
    /// Curve; inferred from the map or the multiplier when omitted.
    #[arg(long, value_enum)]
    pub curve: Option<CurveName>,
}

#[derive(Args, Debug)]
pub struct TableCheckArgs {
    /// Multiplier(s) `a,b,d`; defaults to 1+i, 2, 3, 1+2i on E1 and
    /// sqrt(-3) on E2.
    #[arg(long, value_name = "A,B,D")]
    pub lambda: Vec<String>,
}

#[derive(Args, Debug)]
pub struct GreenArgs {
    #[command(flatten)]
    pub maps: MapArgs,
    /// Complex point `re,im`.
    #[arg(long = "point", value_name = "RE,IM", value_parser = parse_complex)]
    pub points: Vec<Complex64>,
    #[arg(long, default_value_t = 30)]
    pub iters: usize,
    #[arg(long, value_enum, default_value_t = MetricName::Sup)]
    pub metric: MetricName,
    #[arg(long, value_parser = parse_window, default_value = "-2,2,-2,2")]
    pub window: Window,
    #[arg(long, default_value_t = 128)]
    pub res: usize,
    /// Write the Green field on the grid as CSV (with a `.json` sidecar).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct MeasureArgs {
    #[command(flatten)]
    pub maps: MapArgs,
    #[arg(long, default_value_t = 30)]
    pub iters: usize,
    #[arg(long, value_parser = parse_window, default_value = "-2,2,-2,2")]
    pub window: Window,
    #[arg(long, default_value_t = 128)]
    pub res: usize,
    /// Write the cell masses as CSV (with a `.json` sidecar).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct DensityCompareArgs {
    #[command(flatten)]
    pub maps: MapArgs,
    #[arg(long, default_value_t = 9)]
    pub depth: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Point whose preimages are sampled.
    #[arg(long, value_parser = parse_complex, default_value = "0.5,0.25")]
    pub start: Complex64,
    /// Iterations for the Green-based reference of non-Lattès maps.
    #[arg(long, default_value_t = 30)]
    pub iters: usize,
    #[arg(long, value_parser = parse_window, default_value = "-3,3,-3,3")]
    pub window: Window,
    #[arg(long, default_value_t = 64)]
    pub res: usize,
    /// Write the preimage histogram as CSV (with a `.json` sidecar).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct PeriodicArgs {
    #[command(flatten)]
    pub maps: MapArgs,
    /// Points of period dividing this.
    #[arg(long, default_value_t = 1)]
    pub period: u32,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write CSV here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct JuliaArgs {
    #[command(flatten)]
    pub maps: MapArgs,
    #[arg(long, default_value_t = 30)]
    pub iters: usize,
    #[arg(long, value_parser = parse_window, default_value = "-2,2,-2,2")]
    pub window: Window,
    #[arg(long, default_value_t = 256)]
    pub res: usize,
    #[arg(long, value_enum, default_value_t = ModeName::Density)]
    pub mode: ModeName,
    /// Recorded in the image header.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output image; a `.ppm` extension selects color (P6), anything
    /// else grayscale (P5).
    #[arg(long, required = true)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct CatalogArgs {
    /// Print this map in full.
    #[arg(long, value_name = "NAME", conflicts_with = "double")]
    pub show: Option<String>,
    /// Print the doubling map of this curve.
    #[arg(long, value_enum, value_name = "CURVE")]
    pub double: Option<CurveName>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Inv,
    Conj,
    Norm,
    /// Gcd in the ring of integers.
    Gcd,
    /// Monic gcd of two polynomials given as `c0,c1,...`.
    PolyGcd,
    /// Complex roots of `re,im re,im ...` (lowest degree first).
    Roots,
}

#[derive(Args, Debug)]
pub struct ArithArgs {
    #[arg(value_enum)]
    pub op: ArithOp,
    #[arg(allow_hyphen_values = true)]
    pub operands: Vec<String>,
    /// `d` in Q(sqrt -d).
    #[arg(long, default_value_t = 1)]
    pub field: u32,
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| t.parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err(format!("expected RE,IM, got {s:?}")),
    }
}

fn parse_window(s: &str) -> Result<Window, String> {
    s.parse::<Window>().map_err(|e| e.to_string())
}

fn parse_point(s: &str, field: QuadField) -> Result<ProjPoint, CliError> {
    let coord = |t: &str| parse_coefficient(t, field).map_err(|e| usage(format!("--point {s}: {e}")));
    let parts: Vec<&str> = s.split(',').collect();
    let (x, y) = match parts.as_slice() {
        [x] => (coord(x)?, QuadElem::one(field)),
        [x, y] => (coord(x)?, coord(y)?),
        _ => return Err(usage(format!("--point {s}: expected X,Y"))),
    };
    ProjPoint::new(x, y).map_err(|e| usage(format!("--point {s}: {e}")))
}

/// `a,b,d` as `a + b·√−d`.
pub fn parse_lambda(s: &str) -> Result<QuadElem, CliError> {
    let bad = |msg: String| usage(format!("--lambda {s}: {msg}"));
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [a, b, d] = parts.as_slice() else {
        return Err(bad("expected A,B,D".into()));
    };
    let d: u32 = d.parse().map_err(|e| bad(format!("{e}")))?;
    let field = QuadField::from_d(d).map_err(|e| bad(e.to_string()))?;
    let rational = |t: &str| -> Result<BigRational, CliError> {
        let x = parse_coefficient(t, QuadField::Rational).map_err(|e| bad(e.to_string()))?;
        Ok(x.re_part().clone())
    };
    let (a, b) = (rational(a)?, rational(b)?);
    if field == QuadField::Rational && b != BigRational::from_integer(0.into()) {
        return Err(bad("b must be 0 when d = 0".into()));
    }
    QuadElem::new(field, a, b).map_err(|e| bad(e.to_string()))
}

struct NamedMap {
    label: String,
    map: RationalMap,
    entry: Option<CatalogEntry>,
}

fn load_maps(args: &MapArgs) -> Result<Vec<NamedMap>, CliError> {
    let mut out = Vec::new();
    for name in &args.catalog {
        let entry = catalog_entry(name)?;
        out.push(NamedMap { label: entry.name.clone(), map: entry.map.clone(), entry: Some(entry) });
    }
    for path in &args.map {
        out.push(NamedMap { label: path.display().to_string(), map: read_map(path)?, entry: None });
    }
    Ok(out)
}

fn load_one(args: &MapArgs) -> Result<NamedMap, CliError> {
    let mut maps = load_maps(args)?;
    if maps.len() != 1 {
        return Err(usage(format!("expected exactly one map (--catalog NAME or --map FILE), got {}", maps.len())));
    }
    Ok(maps.remove(0))
}

/// Name of the first catalog map equal to `map`.
fn catalog_match(map: &RationalMap) -> Option<String> {
    catalog_entries().into_iter().find_map(|e| {
        let candidate = e.map.in_field(map.field()).ok()?;
        (candidate.field() == map.field() && candidate.equals(map).ok()?).then_some(e.name)
    })
}

fn map_json(map: &RationalMap) -> Value {
    serde_json::from_str(&map_to_json(map)).expect("map file JSON")
}

fn profile_json(p: &RamificationProfile) -> Value {
    json!({ "counts": p.counts, "multiset": p.multiset() })
}

fn with_schema(mut v: Value) -> Value {
    if let Value::Object(m) = &mut v {
        m.insert("schema".into(), json!(1));
    }
    v
}

fn emit(out: &mut dyn Write, v: Value) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(&with_schema(v)).expect("JSON values serialize");
    writeln!(out, "{text}").map_err(|source| CliError::Output { path: "standard output".into(), source })
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|source| CliError::Output { path: path.display().to_string(), source })
}

fn write_csv(out: &mut dyn Write, path: Option<&Path>, csv: &str) -> Result<(), CliError> {
    match path {
        Some(p) => write_file(p, csv.as_bytes()),
        None => out.write_all(csv.as_bytes()).map_err(|source| CliError::Output { path: "standard output".into(), source }),
    }
}

fn sidecar(path: &Path) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".json");
    PathBuf::from(name)
}

fn write_grid(path: &Path, csv: &str, meta: &Value) -> Result<(), CliError> {
    write_file(path, csv.as_bytes())?;
    let text = serde_json::to_string_pretty(meta).expect("JSON values serialize") + "\n";
    write_file(&sidecar(path), text.as_bytes())
}

fn complex_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn sphere_json(p: SpherePoint) -> Value {
    match p {
        SpherePoint::Finite(z) => complex_json(z),
        SpherePoint::Infinity => json!("inf"),
    }
}

fn window_json(w: &Window) -> Value {
    json!([w.x0, w.x1, w.y0, w.y1])
}

/// Parses `args` (program name first), runs the subcommand and returns the
/// exit status. Diagnostics go to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{rendered}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{rendered}");
                EXIT_OK
            };
        }
    };
    match execute(&config, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(config: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    match &config.command {
        Command::Height(a) => height(a, out),
        Command::NtHeight(a) => nt_height(a, out),
        Command::Commute(a) => commute(a, out),
        Command::Compose(a) => compose(a, out),
        Command::Ramify(a) => ramify(a, out),
        Command::TableCheck(a) => table_check(a, out),
        Command::Green(a) => green_cmd(a, out),
        Command::Measure(a) => measure(a, out),
        Command::DensityCompare(a) => density_compare(a, out),
        Command::Periodic(a) => periodic(a, out),
        Command::Julia(a) => julia(a, out),
        Command::Catalog(a) => catalog_cmd(a, out),
        Command::Arith(a) => arith(a, out),
    }
}

fn height(a: &HeightArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let named = load_one(&a.maps)?;
    let map_field = named.map.field();
    let field = match a.field {
        Some(d) => QuadField::from_d(d).map_err(|e| usage(format!("--field: {e}")))?,
        None => map_field,
    };
    let map = if map_field == field {
        named.map.clone()
    } else if map_field == QuadField::Rational {
        named.map.in_field(field)?
    } else {
        return Err(usage(format!("points over {field} cannot be used with a map over {map_field}")));
    };
    if !(a.tol > 0.0) {
        return Err(usage("--tol must be positive"));
    }
    let ch = CanonicalHeight::new(&map)?;
    let opts = HeightOptions { target_error: a.tol, max_iterations: a.iters, ..HeightOptions::default() };
    let mut rows = Vec::new();
    for s in &a.points {
        let p = parse_point(s, field)?;
        let h = ch.eval(&p, &opts)?;
        let naive = naive_height(&p);
        let by_places = naive_height_by_places(&p).ok().map(|h| h.value);
        rows.push((p, h, naive.value, by_places));
    }
    if a.format == Format::Csv {
        let mut csv = String::from("point,map,value,error_bound,iterations,naive\n");
        for (p, h, naive, _) in &rows {
            writeln!(csv, "{p},{},{:.15e},{:.3e},{},{:.15e}", named.label, h.value, h.error_bound, h.iterations, naive).expect("String");
        }
        return write_csv(out, a.out.as_deref(), &csv);
    }
    let objects: Vec<Value> = rows
        .iter()
        .map(|(p, h, naive, by_places)| {
            json!({
                "point": p.to_string(),
                "map": named.label,
                "value": h.value,
                "error_bound": h.error_bound,
                "iterations": h.iterations,
                "exact_iterations": h.exact_iterations,
                "naive": naive,
                "naive_by_places": by_places,
            })
        })
        .collect();
    match objects.as_slice() {
        [one] => emit(out, one.clone()),
        _ => emit(out, json!({ "map": named.label, "results": objects })),
    }
}

fn nt_height(a: &NtHeightArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let curve = a.curve.curve();
    let mut results = Vec::new();
    for s in &a.points {
        let p = parse_point(s, curve.field())?;
        let (value, error_bound, iterations) = match p.affine_coord() {
            Some(x) => {
                let h = neron_tate(&curve, &x, a.tol)?;
                (h.value, h.error_bound, h.iterations)
            }
            None => (0.0, 0.0, 0),
        };
        results.push(json!({ "point": p.to_string(), "value": value, "error_bound": error_bound, "iterations": iterations }));
    }
    let mut v = json!({ "curve": curve.name() });
    if let [one] = results.as_slice() {
        for (k, x) in one.as_object().expect("object") {
            v[k] = x.clone();
        }
    } else {
        v["results"] = json!(results);
    }
    emit(out, v)
}

fn commute(a: &CommuteArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let maps = load_maps(&a.maps)?;
    let [f, g] = maps.as_slice() else {
        return Err(usage(format!("commute needs exactly two maps, got {}", maps.len())));
    };
    let (fm, gm) = common_field(&f.map, &g.map)?;
    let commutes = commute_check(&fm, &gm)?;
    let composite = fm.compose(&gm)?;
    emit(
        out,
        json!({
            "maps": [f.label, g.label],
            "commute": commutes,
            "composition_equals": catalog_match(&composite),
        }),
    )
}

fn common_field(f: &RationalMap, g: &RationalMap) -> Result<(RationalMap, RationalMap), CliError> {
    let field = match (f.field(), g.field()) {
        (a, b) if a == b => a,
        (QuadField::Rational, b) => b,
        (a, QuadField::Rational) => a,
        (a, b) => return Err(usage(format!("maps over {a} and {b} cannot be combined"))),
    };
    Ok((f.in_field(field)?, g.in_field(field)?))
}

fn compose(a: &ComposeArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let maps = load_maps(&a.maps)?;
    let Some((last, rest)) = maps.split_last() else {
        return Err(usage("compose needs at least one map"));
    };
    let mut acc = last.map.clone();
    for f in rest.iter().rev() {
        let (fm, am) = common_field(&f.map, &acc)?;
        acc = fm.compose(&am)?;
    }
    let acc = acc.iterate(a.iters)?;
    let normalized = RationalMap::normalize(acc.num().clone(), acc.den().clone())?;
    let mut images = Vec::new();
    for s in &a.points {
        let p = parse_point(s, normalized.field())?;
        images.push(json!({ "point": p.to_string(), "image": normalized.eval(&p)?.to_string() }));
    }
    if let Some(path) = &a.out {
        write_file(path, (map_to_json(&normalized) + "\n").as_bytes())?;
    }
    emit(
        out,
        json!({
            "maps": maps.iter().map(|m| m.label.clone()).collect::<Vec<_>>(),
            "iterations": a.iters,
            "degree": normalized.degree(),
            "map": map_json(&normalized),
            "equals": catalog_match(&normalized),
            "images": images,
        }),
    )
}

fn curve_for_field(field: QuadField) -> EllipticCurveCM {
    EllipticCurveCM::for_field(field).unwrap_or_else(EllipticCurveCM::e1)
}

fn ramify(a: &RamifyArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let (label, map, curve, lambda) = match &a.lambda {
        Some(s) => {
            if !a.maps.catalog.is_empty() || !a.maps.map.is_empty() {
                return Err(usage("give either --lambda or a map, not both"));
            }
            let lambda = parse_lambda(s)?;
            let curve = a.curve.map(CurveName::curve).unwrap_or_else(|| curve_for_field(lambda.field()));
            let map = for_lambda(&curve, &lambda)?;
            let label = catalog_match(&map).unwrap_or_else(|| format!("lambda {lambda}"));
            (label, map, curve, Some(lambda))
        }
        None => {
            let named = load_one(&a.maps)?;
            let entry_curve = named.entry.as_ref().and_then(CatalogEntry::curve);
            let curve = a.curve.map(CurveName::curve).or(entry_curve).unwrap_or_else(|| curve_for_field(named.map.field()));
            let lambda = named.entry.as_ref().and_then(|e| e.lambda.clone());
            (named.label, named.map, curve, lambda)
        }
    };
    let map = map.in_field(curve.field())?;
    let detail = ramification_detail(&map, &curve)?;
    let computed = ramification_profile(&map, &curve)?;
    let lattes = verify_lattes(&map, &curve);
    let (predicted, prediction_error) = match &lambda {
        Some(l) => match Multiplier::new(l.clone(), curve.clone()).and_then(|m| predict_profile(&m)) {
            Ok(p) => (Some(p), None),
            Err(e) => (None, Some(e.to_string())),
        },
        None => (None, None),
    };
    let derivative = map.derivative()?;
    let targets: Vec<Value> = detail
        .iter()
        .map(|t| json!({ "target": t.target.to_string(), "distinct": t.distinct, "multiplicities": t.multiplicities }))
        .collect();
    emit(
        out,
        json!({
            "map": label,
            "curve": curve.name(),
            "degree": map.degree(),
            "lambda": lambda.as_ref().map(ToString::to_string),
            "targets": targets,
            "computed": profile_json(&computed),
            "predicted": predicted.as_ref().map(profile_json),
            "prediction_error": prediction_error,
            "multisets_agree": predicted.as_ref().map(|p| p.same_multiset(&computed)),
            "lattes": lattes.is_ok(),
            "lattes_error": lattes.err().map(|e| e.to_string()),
            "derivative": { "num": derivative.num.to_string(), "den": derivative.den.to_string() },
        }),
    )
}

const DEFAULT_TABLE_ROWS: [&str; 5] = ["1,1,1", "2,0,1", "3,0,1", "1,2,1", "0,1,3"];

fn table_check(a: &TableCheckArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let specs: Vec<&str> = if a.lambda.is_empty() { DEFAULT_TABLE_ROWS.to_vec() } else { a.lambda.iter().map(String::as_str).collect() };
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for s in specs {
        let lambda = parse_lambda(s)?;
        let curve = curve_for_field(lambda.field());
        let map = for_lambda(&curve, &lambda)?;
        let computed = ramification_profile(&map, &curve)?;
        let predicted = Multiplier::new(lambda.clone(), curve.clone()).and_then(|m| predict_profile(&m));
        let matches = predicted.as_ref().is_ok_and(|p| p.same_multiset(&computed));
        if !matches {
            failures.push(s.to_string());
        }
        rows.push(json!({
            "lambda": s,
            "value": lambda.to_string(),
            "curve": curve.name(),
            "norm": lambda.norm().to_string(),
            "computed": computed.multiset(),
            "predicted": predicted.as_ref().ok().map(RamificationProfile::multiset),
            "error": predicted.as_ref().err().map(ToString::to_string),
            "match": matches,
        }));
    }
    emit(out, json!({ "rows": rows, "all_match": failures.is_empty() }))?;
    if failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::CheckFailed(format!("computed and predicted multisets differ for {}", failures.join(" "))))
    }
}

fn field_csv(values: &[f64], nx: usize) -> String {
    let mut out = String::new();
    for row in values.chunks(nx) {
        let line: Vec<String> = row.iter().map(|v| format!("{v:.12e}")).collect();
        writeln!(out, "{}", line.join(",")).expect("String");
    }
    out
}

fn check_res(res: usize) -> Result<(), CliError> {
    if res == 0 || res > 4096 {
        return Err(usage(format!("--res {res} is outside 1..=4096")));
    }
    Ok(())
}

fn green_cmd(a: &GreenArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let named = load_one(&a.maps)?;
    let lift = Lift::from_map(&named.map)?;
    let metric = StartMetric::from(a.metric);
    let one = Complex64::new(1.0, 0.0);
    let mut values = Vec::new();
    for &z in &a.points {
        values.push(json!({ "z": complex_json(z), "green": green_homogeneous(&lift, z, one, a.iters, metric)? }));
    }
    let mut v = json!({
        "map": named.label,
        "iterations": a.iters,
        "error_bound": lift.tail_bound(a.iters),
        "values": values,
    });
    if let Some(path) = &a.out {
        check_res(a.res)?;
        let field = green_field(&lift, a.window, a.res, a.res, a.iters, metric)?;
        let meta = json!({
            "schema": 1,
            "map": named.label,
            "window": window_json(&field.window),
            "resolution": [field.nx, field.ny],
            "order": "row-major, row 0 at y0",
            "iterations": field.iterations,
            "error_bound": field.error_bound,
        });
        write_grid(path, &field_csv(&field.values, field.nx), &meta)?;
        v["grid_mean"] = json!(field.mean());
        v["out"] = json!(path.display().to_string());
    }
    emit(out, v)
}

fn green_grid(named: &NamedMap, window: Window, res: usize, iters: usize) -> Result<GreenField, CliError> {
    check_res(res)?;
    let lift = Lift::from_map(&named.map)?;
    Ok(green_field(&lift, window, res, res, iters, StartMetric::Sup)?)
}

fn measure(a: &MeasureArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let named = load_one(&a.maps)?;
    let field = green_grid(&named, a.window, a.res, a.iters)?;
    let grid = measure_from_green(&field)?;
    let mut v = json!({
        "map": named.label,
        "window": window_json(&grid.window),
        "resolution": [grid.nx, grid.ny],
        "iterations": a.iters,
        "window_fraction": grid.window_fraction,
    });
    if let Some(path) = &a.out {
        write_grid(path, &grid.to_csv(), &grid.metadata_json(json!({ "map": named.label, "iterations": a.iters })))?;
        v["out"] = json!(path.display().to_string());
    }
    emit(out, v)
}

fn density_compare(a: &DensityCompareArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let named = load_one(&a.maps)?;
    check_res(a.res)?;
    let (nx, ny) = (a.res, a.res);
    let sample = preimage_sample(&named.map, SpherePoint::Finite(a.start), a.depth, a.seed)?;
    let empirical = DensityGrid::from_samples(&sample.points, a.window, nx, ny)?;
    let lattes_curve = named.entry.as_ref().filter(|e| e.lattes).and_then(CatalogEntry::curve);
    let (reference_kind, reference, keep, mass) = match &lattes_curve {
        Some(curve) => {
            let reference = lattes_density(curve, a.window, nx, ny)?;
            (format!("lattes {}", curve.name()), reference, singular_mask(curve, a.window, nx, ny, 1.5), Some(total_mass(curve)))
        }
        None => {
            let field = green_grid(&named, a.window, a.res, a.iters)?;
            ("green".to_string(), measure_from_green(&field)?, vec![true; nx * ny], None)
        }
    };
    let l1 = compare_l1(&empirical, &reference)?;
    let corr = correlation(&empirical, &reference, &keep)?;
    let mut v = json!({
        "map": named.label,
        "reference": reference_kind,
        "depth": a.depth,
        "seed": a.seed,
        "samples": sample.len(),
        "infinite": sample.infinite,
        "window": window_json(&a.window),
        "resolution": [nx, ny],
        "l1": l1,
        "correlation": corr,
        "correlation_cells": keep.iter().filter(|&&k| k).count(),
        "empirical_window_fraction": empirical.window_fraction,
        "reference_window_fraction": reference.window_fraction,
        "reference_total_mass": mass,
        "ks_angles": ks_uniform_angles(&sample.angles()),
    });
    if let Some(path) = &a.out {
        let meta = empirical.metadata_json(json!({ "map": named.label, "depth": a.depth, "seed": a.seed }));
        write_grid(path, &empirical.to_csv(), &meta)?;
        v["out"] = json!(path.display().to_string());
    }
    emit(out, v)
}

fn periodic(a: &PeriodicArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let named = load_one(&a.maps)?;
    let points = periodic_points(&named.map, a.period)?;
    if a.format == Format::Csv {
        let mut csv = String::from("re,im,multiplier_re,multiplier_im,abs_multiplier,repelling\n");
        for p in &points {
            let (re, im) = match p.point {
                SpherePoint::Finite(z) => (format!("{:.15e}", z.re), format!("{:.15e}", z.im)),
                SpherePoint::Infinity => ("inf".into(), "inf".into()),
            };
            let m = p.multiplier;
            writeln!(csv, "{re},{im},{:.15e},{:.15e},{:.15e},{}", m.re, m.im, m.norm(), p.is_repelling()).expect("String");
        }
        return write_csv(out, a.out.as_deref(), &csv);
    }
    let list: Vec<Value> = points
        .iter()
        .map(|p| {
            json!({
                "z": sphere_json(p.point),
                "multiplier": complex_json(p.multiplier),
                "abs_multiplier": p.multiplier.norm(),
                "repelling": p.is_repelling(),
            })
        })
        .collect();
    emit(out, json!({ "map": named.label, "period": a.period, "count": list.len(), "points": list }))
}

fn julia(a: &JuliaArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let named = load_one(&a.maps)?;
    let field = green_grid(&named, a.window, a.res, a.iters)?;
    let mode = match a.mode {
        ModeName::Density => RasterMode::Density,
        ModeName::Green => RasterMode::Green,
    };
    let comments = vec![
        format!("map {}", named.label),
        format!("window {}", a.window),
        format!("resolution {}x{}", a.res, a.res),
        format!("seed {}", a.seed),
        format!("iterations {}", a.iters),
    ];
    let raster = julia_raster(&field, mode, comments)?;
    let color = a.out.extension().is_some_and(|e| e.eq_ignore_ascii_case("ppm"));
    let mut bytes = Vec::new();
    if color {
        raster.write_ppm(&mut bytes)
    } else {
        raster.write_pgm(&mut bytes)
    }
    .expect("writing to a Vec");
    write_file(&a.out, &bytes)?;
    emit(
        out,
        json!({
            "map": named.label,
            "out": a.out.display().to_string(),
            "format": if color { "P6" } else { "P5" },
            "width": raster.width,
            "height": raster.height,
        }),
    )
}

fn entry_json(e: &CatalogEntry) -> Value {
    json!({
        "name": e.name,
        "degree": e.map.degree(),
        "field": e.map.field().d(),
        "curve": e.curve,
        "lambda": e.lambda.as_ref().map(ToString::to_string),
        "lattes": e.lattes,
        "provenance": format!("{:?}", e.provenance).to_lowercase(),
        "note": e.note,
    })
}

fn catalog_cmd(a: &CatalogArgs, out: &mut dyn Write) -> Result<(), CliError> {
    if let Some(name) = &a.show {
        let e = catalog_entry(name)?;
        let mut v = entry_json(&e);
        v["map"] = map_json(&e.map);
        return emit(out, v);
    }
    if let Some(c) = a.double {
        let curve = c.curve();
        let map = lattes_double(&curve);
        return emit(out, json!({ "curve": curve.name(), "map": map_json(&map), "equals": catalog_match(&map) }));
    }
    let maps: Vec<Value> = catalog_entries().iter().map(entry_json).collect();
    emit(out, json!({ "maps": maps }))
}

fn arith(a: &ArithArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let field = QuadField::from_d(a.field).map_err(|e| usage(format!("--field: {e}")))?;
    let ops = &a.operands;
    let arity = match a.op {
        ArithOp::Neg | ArithOp::Inv | ArithOp::Conj | ArithOp::Norm => Some(1),
        ArithOp::Add | ArithOp::Sub | ArithOp::Mul | ArithOp::Div | ArithOp::Gcd | ArithOp::PolyGcd => Some(2),
        ArithOp::Roots => None,
    };
    if let Some(n) = arity {
        if ops.len() != n {
            return Err(usage(format!("{:?} takes {n} operand(s), got {}", a.op, ops.len())));
        }
    }
    let elem = |s: &str| parse_coefficient(s, field).map_err(|e| usage(e.to_string()));
    let result: Value = match a.op {
        ArithOp::Add => json!(elem(&ops[0])?.checked_add(&elem(&ops[1])?)?.to_string()),
        ArithOp::Sub => json!(elem(&ops[0])?.checked_sub(&elem(&ops[1])?)?.to_string()),
        ArithOp::Mul => json!(elem(&ops[0])?.checked_mul(&elem(&ops[1])?)?.to_string()),
        ArithOp::Div => json!(elem(&ops[0])?.checked_div(&elem(&ops[1])?)?.to_string()),
        ArithOp::Neg => json!((-elem(&ops[0])?).to_string()),
        ArithOp::Inv => json!(elem(&ops[0])?.inv()?.to_string()),
        ArithOp::Conj => json!(elem(&ops[0])?.conj().to_string()),
        ArithOp::Norm => json!(elem(&ops[0])?.norm().to_string()),
        ArithOp::Gcd => {
            let x = IntegralElement::try_from(&elem(&ops[0])?)?;
            let y = IntegralElement::try_from(&elem(&ops[1])?)?;
            json!(integral_gcd(&x, &y)?.to_quad().to_string())
        }
        ArithOp::PolyGcd => {
            let poly = |s: &str| -> Result<Poly, CliError> {
                let cs = s.split(',').map(elem).collect::<Result<Vec<_>, _>>()?;
                Ok(Poly::new(field, cs)?)
            };
            let g = poly_gcd(&poly(&ops[0])?, &poly(&ops[1])?)?;
            json!(g.coeffs().iter().map(ToString::to_string).collect::<Vec<_>>())
        }
        ArithOp::Roots => {
            let cs = ops.iter().map(|s| parse_complex(s).map_err(usage)).collect::<Result<Vec<_>, _>>()?;
            json!(poly_roots(&cs)?.into_iter().map(complex_json).collect::<Vec<_>>())
        }
    };
    emit(out, json!({ "op": format!("{:?}", a.op).to_lowercase(), "field": field.d(), "operands": ops, "result": result }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;
    use std::collections::BTreeSet;

    /// The public operations of the library modules, listed independently
    /// of the dispatch table.
    const OPERATIONS: &[&str] = &[
        "arith::field_ops",
        "arith::conj",
        "arith::norm",
        "arith::integral_gcd",
        "poly::poly_gcd",
        "map::RationalMap::normalize",
        "map::RationalMap::eval",
        "map::RationalMap::compose",
        "map::RationalMap::iterate",
        "map::RationalMap::equals",
        "map::commute_check",
        "map::RationalMap::distinct_preimages",
        "map::RationalMap::derivative",
        "heights::naive_height",
        "heights::naive_height_by_places",
        "heights::canonical_height",
        "heights::neron_tate",
        "lattes::lattes_double",
        "lattes::catalog",
        "lattes::for_lambda",
        "lattes::two_torsion_targets",
        "lattes::ramification_profile",
        "lattes::predict_profile",
        "measures::green",
        "measures::green_field",
        "measures::measure_from_green",
        "measures::poly_roots",
        "measures::preimage_sample",
        "measures::lattes_density",
        "measures::compare_l1",
        "measures::periodic_points",
        "measures::julia_raster",
    ];

    #[test]
    fn every_operation_has_exactly_one_subcommand() {
        let mut seen = BTreeSet::new();
        for (_, ops) in DISPATCH {
            for op in *ops {
                assert!(seen.insert(*op), "{op} is dispatched twice");
            }
        }
        let expected: BTreeSet<&str> = OPERATIONS.iter().copied().collect();
        assert_eq!(seen, expected);
    }

    #[test]
    fn dispatch_rows_are_the_subcommands() {
        let cmd = RunConfig::command();
        let names: BTreeSet<&str> = cmd.get_subcommands().map(|c| c.get_name()).collect();
        let rows: BTreeSet<&str> = DISPATCH.iter().map(|(n, _)| *n).collect();
        assert_eq!(names, rows);
        RunConfig::command().debug_assert();
    }

    #[test]
    fn lambda_syntax() {
        assert_eq!(parse_lambda("1,2,1").unwrap(), QuadElem::from_ints(QuadField::Gaussian, 1, 2).unwrap());
        assert_eq!(parse_lambda("0,1,3").unwrap(), QuadElem::w(QuadField::Eisenstein));
        assert!(parse_lambda("1,2").is_err());
        assert!(parse_lambda("1,1,0").is_err());
        assert!(parse_lambda("1,1,2").is_err());
    }

    #[test]
    fn points_accept_one_or_two_coordinates() {
        let p = parse_point("2", QuadField::Rational).unwrap();
        assert_eq!(p, parse_point("4,2", QuadField::Rational).unwrap());
        assert!(parse_point("0,0", QuadField::Rational).is_err());
        assert!(parse_point("1,2,3", QuadField::Rational).is_err());
    }
}
