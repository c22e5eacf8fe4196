mod export;
mod instance;

use std::f64::consts::PI;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bpoly_core::ballpoly::{
    euler_target, min_basic_radius, validate_basic, BasicBallPolyhedron, CenterPolytope, ValidationReport, Verdict,
};
use bpoly_core::bounds::ubt_check;
use bpoly_core::generate::{moment_points, random_convex_position, regular_simplex, unit_cube};
use bpoly_core::rigidity::{rigidity_compare, RigidityOptions, RigidityVerdict};
use bpoly_core::surface::sample_surface;
use bpoly_core::{Point, Tolerance};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use instance::InstanceFile;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("usage error: {0}")]
    Usage(String),
    #[error("I/O error: {0}")]
    Io(String),
    #[error("instance is not a basic r-ball polyhedron")]
    NotBasic,
    #[error("geometry error: {0}")]
    Geometry(bpoly_core::Error),
}

impl From<bpoly_core::Error> for CliError {
    fn from(e: bpoly_core::Error) -> Self {
        match e {
            bpoly_core::Error::NotBasic => CliError::NotBasic,
            other => CliError::Geometry(other),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::NotBasic => 1,
            CliError::Parse(_) | CliError::Usage(_) | CliError::Io(_) => 2,
            CliError::Geometry(_) => 3,
        }
    }
}

/// Build and check basic r-ball polyhedra.
#[derive(Parser, Debug)]
#[command(name = "bpoly", version)]
struct Cli {
    /// Relative geometric tolerance, scaled by the bounding-box diameter.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Seed for random generators.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Chords per edge arc in OBJ export.
    #[arg(long, global = true, default_value_t = 16)]
    arc_segments: usize,
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the admissibility conditions.
    Validate { instance: PathBuf },
    /// List the faces of P by dimension with their center sets.
    Faces { instance: PathBuf },
    /// Print the f-vector.
    Fvector { instance: PathBuf },
    /// Compare the f-vector with the cyclic-polytope upper bounds.
    Ubt { instance: PathBuf },
    /// Check the Euler-Poincare relation.
    Euler { instance: PathBuf },
    /// Inner dihedral angles along all (d-2)-faces.
    Dihedrals { instance: PathBuf },
    /// Write a generated instance.
    Gen(GenArgs),
    /// Decide congruence of two instances from lattices and dihedral angles.
    Compare {
        first: PathBuf,
        second: PathBuf,
        /// Largest angle difference (radians) counted as equal.
        #[arg(long, default_value_t = 1e-7)]
        angle_tol: f64,
    },
    /// Export geometry.
    Export {
        instance: PathBuf,
        #[arg(long, value_enum, default_value_t = ExportFormat::Obj)]
        format: ExportFormat,
        /// Subdivision depth of facet patches.
        #[arg(long, default_value_t = 1)]
        depth: u32,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(value_enum)]
    kind: GenKind,
    #[arg(long)]
    d: usize,
    /// Number of centers (moment and random).
    #[arg(long)]
    n: Option<usize>,
    /// Edge length of the simplex.
    #[arg(long, default_value_t = 1.0)]
    edge: f64,
    /// Generating radius; defaults to 1.1 times the minimal admissible radius.
    #[arg(long)]
    r: Option<f64>,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum GenKind {
    Moment,
    Simplex,
    Cube,
    Random,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum ExportFormat {
    Obj,
    Json,
}

/// Text and JSON renderings of a command result plus its pass/fail status.
struct Report {
    text: String,
    json: Value,
    ok: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            let body = if cli.json {
                format!("{}\n", serde_json::to_string_pretty(&report.json).expect("values serialize"))
            } else {
                report.text
            };
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(body.as_bytes());
            ExitCode::from(if report.ok { 0 } else { 1 })
        }
        Err(e) => {
            if cli.json {
                println!("{}", json!({ "status": "error", "exit_code": e.exit_code(), "error": e.to_string() }));
            }
            eprintln!("bpoly: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    if !(cli.tol > 0.0 && cli.tol.is_finite()) {
        return Err(CliError::Usage(format!("--tol must be positive, got {}", cli.tol)));
    }
    let tol = Tolerance::new(cli.tol);
    match &cli.command {
        Command::Validate { instance } => cmd_validate(instance, tol),
        Command::Faces { instance } => cmd_faces(instance, tol),
        Command::Fvector { instance } => cmd_fvector(instance, tol),
        Command::Ubt { instance } => cmd_ubt(instance, tol),
        Command::Euler { instance } => cmd_euler(instance, tol),
        Command::Dihedrals { instance } => cmd_dihedrals(instance, tol),
        Command::Gen(args) => cmd_gen(args, cli.seed, tol),
        Command::Compare {
            first,
            second,
            angle_tol,
        } => cmd_compare(first, second, *angle_tol, tol),
        Command::Export {
            instance,
            format,
            depth,
            out,
        } => cmd_export(instance, *format, *depth, cli.arc_segments, out.as_deref(), tol),
    }
}

fn load(path: &Path, tol: Tolerance) -> Result<(InstanceFile, CenterPolytope), CliError> {
    let inst = InstanceFile::read(path)?;
    let cp = CenterPolytope::new(inst.points(), inst.r, tol)?;
    Ok((inst, cp))
}

fn load_basic(path: &Path, tol: Tolerance) -> Result<(InstanceFile, BasicBallPolyhedron), CliError> {
    let (inst, cp) = load(path, tol)?;
    Ok((inst, BasicBallPolyhedron::new(cp)?))
}

fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::Holds => "holds",
        Verdict::Fails => "fails",
        Verdict::Indeterminate => "indeterminate",
    }
}

fn status(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "fail"
    }
}

fn validation_json(inst: &InstanceFile, rep: &ValidationReport) -> Value {
    json!({
        "hull_vertices_ok": rep.hull_vertices_ok,
        "r_convex_position": verdict_str(rep.r_convex_position),
        "r_convex_witness": rep.r_convex_witness.map(|i| inst.label(i)),
        "voronoi_vertices_interior": verdict_str(rep.voronoi_vertices_interior),
        "worst_circumradius": rep.worst_circumradius,
        "is_basic": rep.is_basic,
    })
}

fn cmd_validate(path: &Path, tol: Tolerance) -> Result<Report, CliError> {
    let (inst, cp) = load(path, tol)?;
    let rep = validate_basic(&cp);
    let mut text = String::new();
    text.push_str(&format!("hull vertices           {}\n", status(rep.hull_vertices_ok)));
    text.push_str(&format!("r-convex position       {}", verdict_str(rep.r_convex_position)));
    if let Some(w) = rep.r_convex_witness {
        text.push_str(&format!(" (witness {})", inst.label(w)));
    }
    text.push('\n');
    text.push_str(&format!("voronoi vertices inside {}", verdict_str(rep.voronoi_vertices_interior)));
    if let Some(w) = rep.worst_circumradius {
        text.push_str(&format!(" (worst circumradius {w:.12}, r {:.12})", inst.r));
    }
    text.push('\n');
    text.push_str(&format!("basic                   {}\n", if rep.is_basic { "yes" } else { "no" }));
    let mut js = validation_json(&inst, &rep);
    js["status"] = json!(status(rep.is_basic));
    Ok(Report {
        text,
        json: js,
        ok: rep.is_basic,
    })
}

fn cmd_faces(path: &Path, tol: Tolerance) -> Result<Report, CliError> {
    let (inst, p) = load_basic(path, tol)?;
    let mut text = String::new();
    let mut by_dim = Vec::new();
    for k in 0..p.dim() {
        let faces = p.lattice.faces(k);
        text.push_str(&format!("dim {k}: {} faces\n", faces.len()));
        let mut list = Vec::new();
        for s in faces {
            let labels: Vec<String> = s.iter().map(|&i| inst.label(i)).collect();
            text.push_str(&format!("  {{{}}}\n", labels.join(", ")));
            list.push(labels);
        }
        by_dim.push(json!({ "dim": k, "faces": list }));
    }
    Ok(Report {
        text,
        json: json!({ "status": "ok", "faces": by_dim }),
        ok: true,
    })
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

fn cmd_fvector(path: &Path, tol: Tolerance) -> Result<Report, CliError> {
    let (_, p) = load_basic(path, tol)?;
    let f = p.f_vector();
    Ok(Report {
        text: format!("{}\n", join(&f)),
        json: json!({ "status": "ok", "f_vector": f }),
        ok: true,
    })
}

fn cmd_ubt(path: &Path, tol: Tolerance) -> Result<Report, CliError> {
    let (_, p) = load_basic(path, tol)?;
    let f = p.f_vector();
    let d = p.dim();
    let rep = ubt_check(&f, p.centers.n(), d)?;
    let mut text = format!("f-vector {}\n", join(&f));
    for k in 1..=d {
        text.push_str(&format!(
            "k={k}: f_{} = {} <= c_{} = {}  margin {}\n",
            k - 1,
            f[k - 1],
            d - k,
            rep.bounds[k - 1],
            rep.margins[k - 1]
        ));
    }
    text.push_str(&format!("upper bound {}\n", if rep.holds { "holds" } else { "violated" }));
    Ok(Report {
        text,
        json: json!({
            "status": status(rep.holds),
            "f_vector": f,
            "bounds": rep.bounds,
            "margins": rep.margins,
            "holds": rep.holds,
        }),
        ok: rep.holds,
    })
}

fn cmd_euler(path: &Path, tol: Tolerance) -> Result<Report, CliError> {
    let (_, p) = load_basic(path, tol)?;
    let f = p.f_vector();
    let d = p.dim();
    let terms: Vec<String> = f
        .iter()
        .enumerate()
        .map(|(i, x)| if i == 0 { x.to_string() } else if i % 2 == 0 { format!("+ {x}") } else { format!("- {x}") })
        .collect();
    let sum: i64 = f
        .iter()
        .enumerate()
        .map(|(i, &x)| if i % 2 == 0 { x as i64 } else { -(x as i64) })
        .sum();
    let target = euler_target(d);
    let ok = sum == target;
    Ok(Report {
        text: format!("{} = {sum}, expected {target}: {}\n", terms.join(" "), if ok { "OK" } else { "FAIL" }),
        json: json!({ "status": status(ok), "f_vector": f, "sum": sum, "expected": target }),
        ok,
    })
}

fn cmd_dihedrals(path: &Path, tol: Tolerance) -> Result<Report, CliError> {
    let (inst, p) = load_basic(path, tol)?;
    let angles = p.dihedral_angles()?;
    let mut text = String::new();
    let mut rows = Vec::new();
    for a in &angles {
        let (i, j) = a.pair;
        text.push_str(&format!(
            "{} {}  {:.15}  ({:.9} pi)\n",
            inst.label(i),
            inst.label(j),
            a.theta,
            a.theta / PI
        ));
        rows.push(json!({ "pair": [inst.label(i), inst.label(j)], "theta": a.theta }));
    }
    Ok(Report {
        text,
        json: json!({ "status": "ok", "dihedrals": rows }),
        ok: true,
    })
}

fn cmd_gen(args: &GenArgs, seed: u64, tol: Tolerance) -> Result<Report, CliError> {
    let need_n = || args.n.ok_or_else(|| CliError::Usage(format!("--n is required for {:?}", args.kind)));
    if args.d < 2 {
        return Err(CliError::Usage(format!("--d must be at least 2, got {}", args.d)));
    }
    let points: Vec<Point> = match args.kind {
        GenKind::Moment => moment_points(need_n()?, args.d).map_err(usage)?,
        GenKind::Simplex => {
            if !(args.edge > 0.0) {
                return Err(CliError::Usage("--edge must be positive".into()));
            }
            regular_simplex(args.d, args.edge)
        }
        GenKind::Cube => unit_cube(args.d),
        GenKind::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            random_convex_position(need_n()?, args.d, &mut rng, tol).map_err(usage)?
        }
    };
    let r = match args.r {
        Some(r) if r > 0.0 && r.is_finite() => r,
        Some(r) => return Err(CliError::Usage(format!("--r must be positive, got {r}"))),
        None => 1.1 * min_basic_radius(&points, tol)?.r_star,
    };
    let text = InstanceFile::new(r, points).to_canonical_json();
    match &args.out {
        Some(path) => {
            std::fs::write(path, &text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            Ok(Report {
                text: String::new(),
                json: json!({ "status": "ok", "path": path.display().to_string() }),
                ok: true,
            })
        }
        None => Ok(Report {
            json: serde_json::from_str(&text).expect("canonical text is JSON"),
            text,
            ok: true,
        }),
    }
}

fn usage(e: bpoly_core::Error) -> CliError {
    CliError::Usage(e.to_string())
}

fn cmd_compare(first: &Path, second: &Path, angle_tol: f64, tol: Tolerance) -> Result<Report, CliError> {
    let a = InstanceFile::read(first)?;
    let b = InstanceFile::read(second)?;
    if a.dim != b.dim {
        return Err(CliError::Usage(format!("dimensions differ: {} vs {}", a.dim, b.dim)));
    }
    let (_, p1) = load_basic(first, tol)?;
    let (_, p2) = load_basic(second, tol)?;
    let opts = RigidityOptions {
        angle_tol,
        ..RigidityOptions::default()
    };
    let verdict = rigidity_compare(&p1, &p2, opts)?;
    let label_map = |m: &[usize]| -> Vec<Value> {
        m.iter()
            .enumerate()
            .map(|(i, &j)| json!([a.label(i), b.label(j)]))
            .collect()
    };
    let (text, js, ok) = match &verdict {
        RigidityVerdict::Congruent { isometry, facet_map } => {
            let d = isometry.linear.nrows();
            let rows: Vec<Vec<f64>> = (0..d)
                .map(|i| (0..d).map(|j| isometry.linear[(i, j)]).collect())
                .collect();
            let translation: Vec<f64> = isometry.translation.iter().copied().collect();
            let mut text = String::from("congruent\n");
            text.push_str(&format!(
                "{} isometry, residual {:.3e}\n",
                if isometry.is_proper() { "proper" } else { "improper" },
                isometry.residual
            ));
            text.push_str("linear\n");
            for row in &rows {
                let cells: Vec<String> = row.iter().map(|x| format!("{x:>16.12}")).collect();
                text.push_str(&format!("  {}\n", cells.join(" ")));
            }
            let t: Vec<String> = translation.iter().map(|x| format!("{x:.12}")).collect();
            text.push_str(&format!("translation {}\n", t.join(" ")));
            let pairs: Vec<String> = facet_map
                .iter()
                .enumerate()
                .map(|(i, &j)| format!("{}->{}", a.label(i), b.label(j)))
                .collect();
            text.push_str(&format!("facet map {}\n", pairs.join(" ")));
            let js = json!({
                "status": "congruent",
                "proper": isometry.is_proper(),
                "residual": isometry.residual,
                "linear": rows,
                "translation": translation,
                "facet_map": label_map(facet_map),
            });
            (text, js, true)
        }
        RigidityVerdict::LatticeMismatch => (
            "lattice mismatch\n".to_string(),
            json!({ "status": "lattice_mismatch" }),
            false,
        ),
        RigidityVerdict::AngleMismatch { max_deviation, pair } => (
            format!(
                "angle mismatch: deviation {max_deviation:.6e} at {{{}, {}}}\n",
                a.label(pair.0),
                a.label(pair.1)
            ),
            json!({
                "status": "angle_mismatch",
                "max_deviation": max_deviation,
                "pair": [a.label(pair.0), a.label(pair.1)],
            }),
            false,
        ),
        RigidityVerdict::RadiusMismatch { r1, r2 } => (
            format!("radius mismatch: {r1} vs {r2}\n"),
            json!({ "status": "radius_mismatch", "r1": r1, "r2": r2 }),
            false,
        ),
        RigidityVerdict::AlignmentFailure { facet_map, residual } => (
            format!("alignment failure: angles match but residual {residual:.6e}\n"),
            json!({
                "status": "alignment_failure",
                "residual": residual,
                "facet_map": label_map(facet_map),
            }),
            false,
        ),
    };
    Ok(Report { text, json: js, ok })
}

fn cmd_export(
    path: &Path,
    format: ExportFormat,
    depth: u32,
    segments: usize,
    out: Option<&Path>,
    tol: Tolerance,
) -> Result<Report, CliError> {
    let inst = InstanceFile::read(path)?;
    if format == ExportFormat::Obj && inst.dim != 3 {
        return Err(CliError::Usage(format!(
            "UnsupportedDimension: obj export needs d = 3, got {}",
            inst.dim
        )));
    }
    if segments == 0 {
        return Err(CliError::Usage("--arc-segments must be positive".into()));
    }
    let (inst, p) = load_basic(path, tol)?;
    let body = match format {
        ExportFormat::Obj => export::to_obj(&sample_surface(&p, segments, depth)?),
        ExportFormat::Json => {
            let v = export::to_json(&inst, &p)?;
            format!("{}\n", serde_json::to_string_pretty(&v).expect("values serialize"))
        }
    };
    match out {
        Some(target) => {
            std::fs::write(target, &body).map_err(|e| CliError::Io(format!("{}: {e}", target.display())))?;
            Ok(Report {
                text: String::new(),
                json: json!({ "status": "ok", "path": target.display().to_string() }),
                ok: true,
            })
        }
        None => Ok(Report {
            json: json!({ "status": "ok", "content": body }),
            text: body,
            ok: true,
        }),
    }
}
