//! Subcommand implementations.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::Args;
use ellsurf::elliptic::{jacobi, EllipticModulus};
use ellsurf::ksurf::{KGrid, KParams};
use ellsurf::sg::Family;
use ellsurf::surfaces::{closure_period, gamma_point, kaleidocycle_params, snapshot, CurveSnapshot, SurfaceParams};
use ellsurf::verify::{run_all, run_group, Group, Report, SuiteResult, VerifyConfig};
use serde::Serialize;

use crate::config::{ConfigFile, Format, IndexRange, Quantity, TimeSamples};
use crate::error::CliError;
use crate::output::{self, SCHEMA};

/// Tolerance applied to exported K-surface meshes.
pub const MESH_TOLERANCE: f64 = 1e-9;
/// Tolerance applied to kaleidocycle closure.
pub const CLOSURE_TOLERANCE: f64 = 1e-9;

fn modulus(k: f64) -> Result<EllipticModulus<f64>, CliError> {
    EllipticModulus::new(k).map_err(|e| CliError::Config(format!("k = {k}: {e}")))
}

fn forbid(cfg: &ConfigFile, key: &str, flag_given: bool, why: &str) -> Result<(), CliError> {
    if flag_given || cfg.contains(key) {
        return Err(CliError::Config(format!("'{key}' cannot be set here: {why}")));
    }
    Ok(())
}

fn check_format(format: Format, allowed: &[Format], command: &str) -> Result<(), CliError> {
    if allowed.contains(&format) {
        Ok(())
    } else {
        Err(CliError::Config(format!("{command} does not write {format:?} output")))
    }
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    /// Solution family: dn or cn.
    #[arg(long)]
    pub family: Option<Family>,
    /// Use the twisted surface (ε = −1).
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub twisted: Option<bool>,
    /// Elliptic modulus, 0 < k < 1.
    #[arg(long, allow_hyphen_values = true)]
    pub k: Option<f64>,
    /// Lattice step γ, e.g. 0.7 or K/4.
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<Quantity>,
    /// Time rate β.
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    /// Vertex indices, a..b or a..=b.
    #[arg(long = "m-range", allow_hyphen_values = true)]
    pub m_range: Option<IndexRange>,
    /// Time slices: t1,t2,… or start:end:count.
    #[arg(long = "t-samples", allow_hyphen_values = true)]
    pub t_samples: Option<TimeSamples>,
    /// csv or json.
    #[arg(long)]
    pub format: Option<Format>,
    /// Output file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct CurveConfig {
    command: &'static str,
    family: Family,
    twisted: bool,
    k: f64,
    gamma: f64,
    beta: f64,
    m_range: IndexRange,
    t: Vec<f64>,
    format: Format,
}

#[derive(Serialize)]
struct SnapshotJson {
    t: f64,
    m_start: i64,
    points: Vec<[f64; 3]>,
    binormals: Vec<[f64; 3]>,
}

#[derive(Serialize)]
struct CurveDocument<'a> {
    schema: u32,
    config: &'a CurveConfig,
    segment_length: f64,
    torsion_cos: f64,
    snapshots: Vec<SnapshotJson>,
}

fn xyz(v: &ellsurf::Vec3) -> [f64; 3] {
    [v.x, v.y, v.z]
}

pub fn curve(args: CurveArgs, cfg: &ConfigFile) -> Result<Vec<PathBuf>, CliError> {
    let k = cfg.pick_or("k", args.k, 0.6)?;
    let md = modulus(k)?;
    let conf = CurveConfig {
        command: "curve",
        family: cfg.pick_or("family", args.family, Family::Dn)?,
        twisted: cfg.pick_or("twisted", args.twisted, false)?,
        k,
        gamma: cfg.pick_or("gamma", args.gamma, Quantity::of_k(0.25))?.resolve(md.K),
        beta: cfg.pick_or("beta", args.beta, 1.0)?,
        m_range: cfg.pick_or("m-range", args.m_range, IndexRange { start: 0, end: 17 })?,
        t: cfg.pick_or("t-samples", args.t_samples, TimeSamples::List(vec![Quantity::plain(0.0)]))?.resolve(md.K),
        format: cfg.pick_or("format", args.format, Format::Csv)?,
    };
    check_format(conf.format, &[Format::Csv, Format::Json], "curve")?;
    let out = cfg.pick_or("out", args.out, PathBuf::from(if conf.format == Format::Json { "curve.json" } else { "curve.csv" }))?;
    let p = SurfaceParams::with_admissible_sign(md, conf.family, conf.twisted, conf.gamma, conf.beta)?;
    let snaps = conf.t.iter().map(|&t| snapshot(&p, conf.m_range.range(), t)).collect::<Result<Vec<_>, _>>()?;
    let text = match conf.format {
        Format::Json => output::json(&CurveDocument {
            schema: SCHEMA,
            config: &conf,
            segment_length: p.segment_length(),
            torsion_cos: p.torsion_cos(),
            snapshots: snaps
                .iter()
                .map(|s| SnapshotJson {
                    t: s.t,
                    m_start: s.m_start,
                    points: s.points.iter().map(xyz).collect(),
                    binormals: s.binormals.iter().map(xyz).collect(),
                })
                .collect(),
        }),
        _ => output::curve_csv(&snaps),
    };
    output::write_file(&out, &text)?;
    Ok(vec![out])
}

/// A literal `sin` value: a number or `c*sn(q)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum RawSine {
    Value(f64),
    ScaledSn { factor: f64, arg: Quantity },
}

impl RawSine {
    pub fn resolve(self, md: &EllipticModulus<f64>) -> f64 {
        match self {
            RawSine::Value(v) => v,
            RawSine::ScaledSn { factor, arg } => factor * jacobi(arg.resolve(md.K), md).sn,
        }
    }
}

impl FromStr for RawSine {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let t = s.trim();
        let Some(idx) = t.find("sn(") else {
            return t.parse().map(RawSine::Value).map_err(|_| format!("'{s}' is not a number or c*sn(q)"));
        };
        let inner = t[idx + 3..].strip_suffix(')').ok_or_else(|| format!("unbalanced parenthesis in '{s}'"))?;
        let factor = match t[..idx].trim().trim_end_matches('*').trim() {
            "" => 1.0,
            "-" => -1.0,
            c => c.parse().map_err(|_| format!("bad factor '{c}' in '{s}'"))?,
        };
        Ok(RawSine::ScaledSn { factor, arg: inner.parse()? })
    }
}

fn angle_from_sine(sin: f64, negative_cos: bool, what: &str) -> Result<f64, CliError> {
    if !(-1.0..=1.0).contains(&sin) {
        return Err(CliError::Config(format!("{what} = {sin} is not a sine")));
    }
    let a = sin.asin();
    Ok(if negative_cos { std::f64::consts::PI - a } else { a })
}

#[derive(Debug, Args)]
pub struct KSurfaceArgs {
    /// Solution family: dn or cn.
    #[arg(long)]
    pub family: Option<Family>,
    /// Elliptic modulus, 0 < k < 1.
    #[arg(long, allow_hyphen_values = true)]
    pub k: Option<f64>,
    /// m-direction step γ.
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<Quantity>,
    /// n-direction step δ.
    #[arg(long, allow_hyphen_values = true)]
    pub delta: Option<Quantity>,
    /// m indices.
    #[arg(long = "m-range", allow_hyphen_values = true)]
    pub m_range: Option<IndexRange>,
    /// n indices.
    #[arg(long = "n-range", allow_hyphen_values = true)]
    pub n_range: Option<IndexRange>,
    /// Literal sin α (number or c*sn(q)); bypasses the elliptic constraint.
    #[arg(long = "raw-alpha", allow_hyphen_values = true)]
    pub raw_alpha: Option<RawSine>,
    /// Literal sin β, used with --raw-alpha.
    #[arg(long = "raw-beta", allow_hyphen_values = true)]
    pub raw_beta: Option<RawSine>,
    /// obj (with a JSON sidecar) or csv.
    #[arg(long)]
    pub format: Option<Format>,
    /// Output file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct KSurfaceConfig {
    command: &'static str,
    family: Family,
    k: f64,
    gamma: f64,
    delta: f64,
    alpha: f64,
    beta: f64,
    constraint: &'static str,
    m_range: IndexRange,
    n_range: IndexRange,
    format: Format,
}

#[derive(Debug, Serialize)]
struct MeshResiduals {
    edge_identity: f64,
    star_planarity: f64,
    opposite_edges_m: f64,
    opposite_edges_n: f64,
    normal_torsion: f64,
}

impl MeshResiduals {
    fn worst(&self) -> (&'static str, f64) {
        [
            ("edge identity", self.edge_identity),
            ("star planarity", self.star_planarity),
            ("opposite edges (m)", self.opposite_edges_m),
            ("opposite edges (n)", self.opposite_edges_n),
            ("normal torsion", self.normal_torsion),
        ]
        .into_iter()
        .fold(("", 0.0), |a, b| if b.1 > a.1 || b.1.is_nan() { b } else { a })
    }
}

#[derive(Serialize)]
struct MeshSidecar<'a> {
    schema: u32,
    config: &'a KSurfaceConfig,
    vertices: usize,
    faces: usize,
    a_lengths: Vec<f64>,
    b_lengths: Vec<f64>,
    residuals: &'a MeshResiduals,
    tolerance: f64,
    pass: bool,
}

pub fn ksurface(args: KSurfaceArgs, cfg: &ConfigFile) -> Result<Vec<PathBuf>, CliError> {
    let family = cfg.pick_or("family", args.family, Family::Dn)?;
    let k = cfg.pick_or("k", args.k, 0.8)?;
    let md = modulus(k)?;
    let gamma = cfg.pick_or("gamma", args.gamma, Quantity::of_k(1.0 / 16.0))?.resolve(md.K);
    let delta = cfg.pick_or("delta", args.delta, Quantity::of_k(1.0 / 16.0))?.resolve(md.K);
    let raw_alpha = cfg.pick("raw-alpha", args.raw_alpha)?;
    let raw_beta = cfg.pick("raw-beta", args.raw_beta)?;
    if raw_beta.is_some() && raw_alpha.is_none() {
        return Err(CliError::Config("'raw-beta' requires 'raw-alpha'".into()));
    }
    let derived = KParams::new(md, family, gamma, delta)?;
    let params = match raw_alpha {
        None => derived,
        Some(ra) => {
            let alpha = angle_from_sine(ra.resolve(&md), derived.alpha.cos() < 0.0, "raw-alpha")?;
            let beta = match raw_beta {
                Some(rb) => angle_from_sine(rb.resolve(&md), derived.beta.cos() < 0.0, "raw-beta")?,
                None => derived.beta,
            };
            KParams::with_raw_angles(md, family, gamma, delta, alpha, beta)
        }
    };
    let conf = KSurfaceConfig {
        command: "ksurface",
        family,
        k,
        gamma,
        delta,
        alpha: params.alpha,
        beta: params.beta,
        constraint: if params.raw_angles { "raw" } else { "derived" },
        m_range: cfg.pick_or("m-range", args.m_range, IndexRange { start: 0, end: 128 })?,
        n_range: cfg.pick_or("n-range", args.n_range, IndexRange { start: 0, end: 128 })?,
        format: cfg.pick_or("format", args.format, Format::Obj)?,
    };
    check_format(conf.format, &[Format::Obj, Format::Csv], "ksurface")?;
    let out = cfg.pick_or("out", args.out, PathBuf::from(if conf.format == Format::Csv { "ksurface.csv" } else { "ksurface.obj" }))?;

    let grid = KGrid::build(&params, conf.m_range.range(), conf.n_range.range())?;
    let lengths = grid.edge_lengths();
    let ((c1, _), (c2, _)) = params.torsions();
    let residuals = MeshResiduals {
        edge_identity: grid.edge_residual(),
        star_planarity: grid.planarity_residual(),
        opposite_edges_m: lengths.a_spread,
        opposite_edges_n: lengths.b_spread,
        normal_torsion: grid.torsion_residual(c1, c2),
    };
    let (worst_name, worst) = residuals.worst();
    let pass = worst <= MESH_TOLERANCE;

    let mesh = match conf.format {
        Format::Csv => output::kgrid_csv(&grid),
        _ => output::obj(&grid),
    };
    output::write_file(&out, &mesh)?;
    let sidecar = out.with_extension("json");
    output::write_file(
        &sidecar,
        &output::json(&MeshSidecar {
            schema: SCHEMA,
            config: &conf,
            vertices: grid.points.len(),
            faces: grid.quads().count(),
            a_lengths: lengths.a,
            b_lengths: lengths.b,
            residuals: &residuals,
            tolerance: MESH_TOLERANCE,
            pass,
        }),
    )?;
    if !pass {
        if params.raw_angles {
            eprintln!("warning: raw angles give {worst_name} residual {worst:e}; mesh is not a verified K-surface");
        } else {
            return Err(CliError::Validation(format!("{worst_name} residual {worst:e} exceeds {MESH_TOLERANCE:e}")));
        }
    }
    Ok(vec![out, sidecar])
}

#[derive(Debug, Args)]
pub struct KaleidocycleArgs {
    /// Order n ≥ 3; k = sin(π/n) and γ = K.
    #[arg(long)]
    pub n: Option<u32>,
    /// Solution family: dn (2n segments) or cn (2 segments).
    #[arg(long)]
    pub family: Option<Family>,
    /// Not accepted: the modulus is fixed by n.
    #[arg(long, allow_hyphen_values = true, hide = true)]
    pub k: Option<f64>,
    /// Time slices, one CSV per slice.
    #[arg(long = "t-samples", allow_hyphen_values = true)]
    pub t_samples: Option<TimeSamples>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn kaleidocycle(args: KaleidocycleArgs, cfg: &ConfigFile) -> Result<Vec<PathBuf>, CliError> {
    forbid(cfg, "k", args.k.is_some(), "the kaleidocycle modulus is k = sin(π/n)")?;
    forbid(cfg, "gamma", false, "the kaleidocycle step is γ = K")?;
    let n = cfg.pick_or("n", args.n, 6)?;
    if n < 3 {
        return Err(CliError::Config(format!("kaleidocycle order n = {n} must be at least 3")));
    }
    let family = cfg.pick_or("family", args.family, Family::Dn)?;
    let p = kaleidocycle_params::<f64>(n, family)?;
    let times = cfg
        .pick_or("t-samples", args.t_samples, TimeSamples::Grid { start: Quantity::plain(0.0), end: Quantity::of_k(4.0), count: 24 })?
        .resolve(p.modulus.K);
    let dir = cfg.pick_or("out", args.out, PathBuf::from("kaleidocycle"))?;
    let period = closure_period(n, family);
    let mut written = Vec::with_capacity(times.len());
    for (i, &t) in times.iter().enumerate() {
        let defect = (0..period).map(|m| (gamma_point(&p, m + period, t) - gamma_point(&p, m, t)).norm()).fold(0.0, f64::max);
        if defect > CLOSURE_TOLERANCE {
            return Err(CliError::Validation(format!("closure defect {defect:e} at t = {t} exceeds {CLOSURE_TOLERANCE:e}")));
        }
        let snap: CurveSnapshot<f64> = snapshot(&p, 0..period + 1, t)?;
        let path = dir.join(format!("frame_{i:04}.csv"));
        output::write_file(&path, &output::curve_csv([&snap]))?;
        written.push(path);
    }
    Ok(written)
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// RNG seed for random evaluation points.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Random evaluation points per identity.
    #[arg(long)]
    pub points: Option<usize>,
    /// Window half-width and grid side.
    #[arg(long)]
    pub grid: Option<i64>,
    /// Report file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Serialize)]
struct VerifyDocument<'a> {
    schema: u32,
    config: VerifyEcho<'a>,
    suites: &'a [SuiteResult],
    pass: bool,
}

#[derive(Serialize)]
struct VerifyEcho<'a> {
    command: &'static str,
    #[serde(flatten)]
    settings: &'a VerifyConfig,
}

fn verify_config(args: &VerifyArgs, cfg: &ConfigFile) -> Result<VerifyConfig, CliError> {
    let d = VerifyConfig::default();
    let vc = VerifyConfig {
        seed: cfg.pick_or("seed", args.seed, d.seed)?,
        points: cfg.pick_or("points", args.points, d.points)?,
        grid: cfg.pick_or("grid", args.grid, d.grid)?,
        moduli: d.moduli,
    };
    if vc.points == 0 || vc.grid < 2 {
        return Err(CliError::Config("points must be positive and grid at least 2".into()));
    }
    Ok(vc)
}

fn report(command: &'static str, vc: &VerifyConfig, rep: &Report, out: &Path) -> Result<Vec<PathBuf>, CliError> {
    for s in &rep.suites {
        println!(
            "{} {:<36} {:>12.3e} {} {:.0e}",
            if s.pass { "PASS" } else { "FAIL" },
            s.name,
            s.max_residual,
            if s.bound == ellsurf::verify::Bound::Upper { "<=" } else { "> " },
            s.tolerance
        );
    }
    let doc = VerifyDocument { schema: SCHEMA, config: VerifyEcho { command, settings: vc }, suites: &rep.suites, pass: rep.all_pass() };
    output::write_file(out, &output::json(&doc))?;
    if rep.all_pass() {
        Ok(vec![out.to_path_buf()])
    } else {
        let failed: Vec<&str> = rep.suites.iter().filter(|s| !s.pass).map(|s| s.name.as_str()).collect();
        Err(CliError::Validation(format!("{} suite(s) failed: {}", failed.len(), failed.join(", "))))
    }
}

pub fn verify(args: VerifyArgs, cfg: &ConfigFile) -> Result<Vec<PathBuf>, CliError> {
    let vc = verify_config(&args, cfg)?;
    let out = cfg.pick_or("out", args.out, PathBuf::from("verify.json"))?;
    report("verify", &vc, &run_all(&vc), &out)
}

pub fn identities(args: VerifyArgs, cfg: &ConfigFile) -> Result<Vec<PathBuf>, CliError> {
    let vc = verify_config(&args, cfg)?;
    let out = cfg.pick_or("out", args.out, PathBuf::from("identities.json"))?;
    let rep = Report { suites: run_group(Group::Identities, &vc) };
    report("identities", &vc, &rep, &out)
}
