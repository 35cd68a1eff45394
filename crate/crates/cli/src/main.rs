use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use jacpair_core::certify::{CertifyConfig, SamplingConfig, VerdictTag, DEFAULT_SEED};
use jacpair_core::edgecheck::{degeneracy_witness, edge_univariate};
use jacpair_core::enumerate::{audit_case, builtin_case, load_polygons, CaseSpec, PAPER_POLYGONS_JSON};
use jacpair_core::newton::{newton_polygon, quasi_leading_part, symbolic_restriction, Direction, LatticePolygon};
use jacpair_core::pipeline::{analyze_pair, generate_tame_pair};
use jacpair_core::polyarith::{
    format_poly, jacobian_det, parse_expr, parse_rational, Poly2, Rational, RationalInterval, RootRange, Var,
};

mod svg;

#[derive(Parser)]
#[command(name = "jacpair", version, about = "Exact certificates for real Jacobian pairs in the plane")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Certify a pair; exit 0 typical, 2 not a Jacobian pair, 3 inconclusive, 1 input error.
    Analyze(AnalyzeArgs),
    /// Newton polygon, outer edges and an optional face.
    Newton {
        poly: String,
        /// Face direction, e.g. `-1,1`.
        #[arg(long, allow_hyphen_values = true)]
        xi: Option<String>,
        /// Write an SVG plot of the polygon.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Restriction of a polynomial to the face in direction ξ.
    Restrict {
        poly: String,
        #[arg(long, allow_hyphen_values = true)]
        xi: String,
    },
    /// Real roots of a polynomial in one variable.
    Roots {
        poly: String,
        /// Count roots in `[lo, hi]` instead of on the whole line.
        #[arg(long, allow_hyphen_values = true)]
        lo: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        hi: Option<String>,
        /// Extra bisection steps for each isolating interval.
        #[arg(long, default_value_t = 0)]
        refine: usize,
    },
    /// Enumerate candidate polygons and audit them; exit 2 on audit failure.
    Enumerate {
        /// One of II, III, IV-x4, IV-x2y2, THM2.
        #[arg(long, conflicts_with = "constraints")]
        case: Option<String>,
        /// JSON file with `constraints` and optional `paper_ids`.
        #[arg(long)]
        constraints: Option<PathBuf>,
        /// Polygon list; defaults to the built-in transcription.
        #[arg(long)]
        audit: Option<PathBuf>,
        /// Worker threads (0 = all cores).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
    /// Random tame pairs (compositions of triangular and affine maps).
    GenTame {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        steps: u32,
        #[arg(long, default_value_t = 3)]
        bound: i64,
        #[arg(long, default_value_t = 1)]
        count: u64,
    },
}

#[derive(Args)]
struct AnalyzeArgs {
    #[arg(short = 'f', long = "f", allow_hyphen_values = true)]
    f: String,
    #[arg(short = 'g', long = "g", allow_hyphen_values = true)]
    g: String,
    /// Sampling grid covers [-b, b]^2.
    #[arg(long, default_value_t = 10)]
    grid_bound: i64,
    /// Grid points per axis.
    #[arg(long, default_value_t = 41)]
    grid_points: u32,
    #[arg(long, default_value_t = 200)]
    random_points: usize,
    #[arg(long, default_value_t = 16)]
    max_denominator: i64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Pencil multipliers μ for f + μ g, comma separated.
    #[arg(long, default_value = "1,-1,2,-2,1/2,-1/2,3", allow_hyphen_values = true)]
    mu: String,
    /// Vertex-parity search box for ξ.
    #[arg(long, default_value_t = 12)]
    xi_bound: i64,
    #[arg(long, default_value_t = 64)]
    refine_depth: u32,
}

struct Failure(String);

type CmdResult = Result<ExitCode, Failure>;

fn fail<T>(msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure(msg.into()))
}

fn poly_arg(name: &str, text: &str) -> Result<Poly2, Failure> {
    parse_expr(text).map_err(|e| Failure(format!("{name}: {e}")))
}

fn direction_arg(text: &str) -> Result<Direction, Failure> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [a, b] => match (a.parse(), b.parse()) {
            (Ok(a), Ok(b)) if (a, b) != (0, 0) => Ok(Direction::new(a, b)),
            _ => fail(format!("bad direction {text:?}")),
        },
        _ => fail(format!("direction must look like a,b: {text:?}")),
    }
}

fn rational_arg(text: &str) -> Result<Rational, Failure> {
    parse_rational(text.trim()).ok_or_else(|| Failure(format!("bad rational {text:?}")))
}

fn print_json<T: Serialize>(v: &T) {
    use std::io::Write;
    let text = serde_json::to_string_pretty(v).expect("serializable");
    // a closed pipe (e.g. `| head`) is not an error worth reporting
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn analyze(a: AnalyzeArgs) -> CmdResult {
    let f = poly_arg("f", &a.f)?;
    let g = poly_arg("g", &a.g)?;
    let mu_list = a.mu.split(',').map(rational_arg).collect::<Result<Vec<_>, _>>()?;
    if a.grid_points == 0 || a.grid_bound <= 0 || a.max_denominator <= 0 {
        return fail("grid bound, grid points and max denominator must be positive");
    }
    let cfg = CertifyConfig {
        sampling: SamplingConfig {
            grid_bound: a.grid_bound,
            grid_points: a.grid_points,
            random_points: a.random_points,
            max_denominator: a.max_denominator,
            seed: a.seed,
        },
        mu_list,
        xi_bound: a.xi_bound,
        xi_family_max: a.xi_bound,
        refine_depth: a.refine_depth,
    };
    let report = analyze_pair(&f, &g, &cfg);
    print_json(&report);
    Ok(ExitCode::from(match report.verdict.verdict {
        VerdictTag::TypicalCertified => 0,
        VerdictTag::NotAJacobianPair => 2,
        VerdictTag::Inconclusive => 3,
    }))
}

fn polygon_json(d: &LatticePolygon) -> Value {
    let edges: Vec<Value> = d
        .outer_edges()
        .unwrap_or_default()
        .iter()
        .map(|e| {
            let (a, b) = e.endpoints().expect("edge");
            json!({
                "start": a,
                "end": b,
                "normal": e.direction(),
                "lattice_length": e.lattice_length(),
                "interior_points": e.interior_lattice_points().unwrap_or_default(),
            })
        })
        .collect();
    json!({ "polygon": d, "outer_edges": edges })
}

fn face_json(p: &Poly2, xi: &Direction) -> Result<Value, Failure> {
    let d = newton_polygon(p).map_err(|e| Failure(e.to_string()))?;
    let face = d.face(xi).map_err(|e| Failure(e.to_string()))?;
    let restriction = symbolic_restriction(p, &face);
    let mut out = json!({
        "direction": xi,
        "value": face.value(),
        "points": face.points(),
        "restriction": format_poly(&restriction),
    });
    if face.is_edge() {
        if let Ok(r) = edge_univariate(p, &face) {
            out["reduction"] = serde_json::to_value(&r).expect("serializable");
        }
        let w = degeneracy_witness(p, &face).ok().flatten();
        out["degenerate"] = json!(w.is_some());
        out["multiple_factor"] = serde_json::to_value(&w).expect("serializable");
    }
    Ok(out)
}

fn newton(poly: &str, xi: Option<String>, svg_path: Option<PathBuf>) -> CmdResult {
    let p = poly_arg("poly", poly)?;
    let d = newton_polygon(&p).map_err(|e| Failure(e.to_string()))?;
    let mut out = polygon_json(&d);
    out["polynomial"] = json!(format_poly(&p));
    let dir = xi.as_deref().map(direction_arg).transpose()?;
    if let Some(dir) = &dir {
        out["face"] = face_json(&p, dir)?;
    }
    if let Some(path) = svg_path {
        let highlight = dir.and_then(|x| d.face(&x).ok());
        fs::write(&path, svg::render(&d, highlight.as_ref()))
            .map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    }
    print_json(&out);
    Ok(ExitCode::SUCCESS)
}

fn restrict(poly: &str, xi: &str) -> CmdResult {
    let p = poly_arg("poly", poly)?;
    let dir = direction_arg(xi)?;
    let mut out = face_json(&p, &dir)?;
    let lead = quasi_leading_part(&p, &dir).map_err(|e| Failure(e.to_string()))?;
    out["polynomial"] = json!(format_poly(&p));
    out["quasi_leading_part"] = json!(format_poly(&lead));
    print_json(&out);
    Ok(ExitCode::SUCCESS)
}

fn roots(poly: &str, lo: Option<String>, hi: Option<String>, refine: usize) -> CmdResult {
    let p = poly_arg("poly", poly)?;
    let var = if p.degree_in(Var::Y).unwrap_or(0) == 0 { Var::X } else { Var::Y };
    let Some(u) = p.to_uni(var) else {
        return fail("polynomial must involve a single variable");
    };
    if u.is_zero() {
        return fail("zero polynomial");
    }
    let dec = u.squarefree_decomposition().map_err(|e| Failure(e.to_string()))?;
    let s = u.squarefree_part().map_err(|e| Failure(e.to_string()))?;
    let intervals: Vec<RationalInterval> = u
        .isolate_real_roots()
        .map_err(|e| Failure(e.to_string()))?
        .into_iter()
        .map(|iv| if refine > 0 { s.refine_root(&iv, refine) } else { iv })
        .collect();
    let range = match (lo, hi) {
        (None, None) => RootRange::WholeLine,
        (Some(a), Some(b)) => {
            let iv = RationalInterval::new(rational_arg(&a)?, rational_arg(&b)?)
                .map_err(|e| Failure(e.to_string()))?;
            RootRange::Interval(iv)
        }
        _ => return fail("--lo and --hi go together"),
    };
    let count = u.count_real_roots(&range).map_err(|e| Failure(e.to_string()))?;
    let factors: Vec<Value> = dec
        .factors
        .iter()
        .map(|(f, k)| json!({ "factor": f, "multiplicity": k }))
        .collect();
    let range_json = match &range {
        RootRange::WholeLine => json!("whole line"),
        RootRange::Interval(iv) => json!(iv),
    };
    print_json(&json!({
        "polynomial": u,
        "variable": var,
        "squarefree_factors": factors,
        "sturm_sequence": s.sturm_sequence(),
        "range": range_json,
        "distinct_real_roots": count,
        "isolating_intervals": intervals,
    }));
    Ok(ExitCode::SUCCESS)
}

fn enumerate(case: Option<String>, constraints: Option<PathBuf>, audit: Option<PathBuf>, jobs: usize) -> CmdResult {
    if jobs > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| Failure(e.to_string()))?;
    }
    let spec: CaseSpec = match (case, constraints) {
        (Some(id), None) => builtin_case(&id).map_err(|e| Failure(e.to_string()))?,
        (None, Some(path)) => {
            let text = fs::read_to_string(&path).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
            serde_json::from_str(&text).map_err(|e| Failure(format!("{}: {e}", path.display())))?
        }
        _ => return fail("give exactly one of --case and --constraints"),
    };
    let list_text = match &audit {
        Some(path) => fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))?,
        None => PAPER_POLYGONS_JSON.to_string(),
    };
    let paper = load_polygons(&list_text).map_err(|e| Failure(e.to_string()))?;
    let report = audit_case(&spec, &paper).map_err(|e| Failure(e.to_string()))?;
    print_json(&report);
    Ok(if report.passed { ExitCode::SUCCESS } else { ExitCode::from(2) })
}

fn gen_tame(seed: u64, steps: u32, bound: i64, count: u64) -> CmdResult {
    if bound < 1 {
        return fail("bound must be at least 1");
    }
    let pairs: Vec<Value> = (seed..seed + count)
        .map(|s| {
            let (f, g) = generate_tame_pair(s, steps, bound);
            json!({ "seed": s, "f": f, "g": g, "jacobian": jacobian_det(&f, &g) })
        })
        .collect();
    print_json(&pairs);
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze(a) => analyze(a),
        Command::Newton { poly, xi, svg } => newton(&poly, xi, svg),
        Command::Restrict { poly, xi } => restrict(&poly, &xi),
        Command::Roots { poly, lo, hi, refine } => roots(&poly, lo, hi, refine),
        Command::Enumerate {
            case,
            constraints,
            audit,
            jobs,
        } => enumerate(case, constraints, audit, jobs),
        Command::GenTame {
            seed,
            steps,
            bound,
            count,
        } => gen_tame(seed, steps, bound, count),
    };
    match result {
        Ok(code) => code,
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
