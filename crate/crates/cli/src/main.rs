use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use surftsp_core::boundary::Check;
use surftsp_core::complex::{TriangleSet, DEFAULT_COMPLETE_CAP};
use surftsp_core::pipeline::{
    compare, execute, format_compare_table, load_instance, parse_tree, prepare, validate_report,
    ComplexSpec, ModelChoice, ModelSpec, PipelineError, RunReport,
};
use surftsp_core::plot::render_svg;
use surftsp_core::solve::{backend_by_id, lp::write_lp, Backend, HighsCli, HighsPy, SolveLimits};

#[derive(Parser)]
#[command(name = "surftsp", version, about = "Surface-based MILP models for the symmetric TSP")]
struct Cli {
    /// Key=value defaults (backend, python, highs, time_limit, threads, out, complete_cap).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build, solve, decode and verify one model.
    Solve(SolveArgs),
    /// Repeat several model/complex combinations over backend seeds.
    Compare(CompareArgs),
    /// Draw an instance, complex and solution as SVG.
    Plot(PlotArgs),
    /// Re-verify a saved report against its complex.
    Validate(ValidateArgs),
}

#[derive(Args, Clone)]
struct SolverArgs {
    /// Backend id: highspy or highs.
    #[arg(long)]
    backend: Option<String>,
    #[arg(long)]
    time_limit: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    mip_gap: f64,
    #[arg(long)]
    threads: Option<usize>,
    /// Backend random seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Largest complete complex to build.
    #[arg(long)]
    complete_cap: Option<usize>,
}

#[derive(Args)]
struct SolveArgs {
    /// TSPLIB file or generator (gen:euclidean:n=20:seed=3, gen:nonmetric:n=10:seed=7, gen:hexagons).
    #[arg(long)]
    instance: String,
    /// complete, delaunay, greedy or custom:<path.json>.
    #[arg(long, default_value = "delaunay")]
    complex: String,
    /// surface, surface-planar or mtz-baseline.
    #[arg(long, default_value = "surface")]
    model: String,
    /// flow or mtz.
    #[arg(long, default_value = "flow")]
    tree: String,
    #[command(flatten)]
    solver: SolverArgs,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Reference optimum for the gap column.
    #[arg(long)]
    reference: Option<f64>,
    /// Also write the LP file.
    #[arg(long)]
    emit_lp: bool,
}

#[derive(Args)]
struct CompareArgs {
    #[arg(long)]
    instance: String,
    /// model:tree:complex, repeatable. Defaults to the three Delaunay rows.
    #[arg(long = "combo")]
    combos: Vec<String>,
    #[arg(long, default_value_t = 10)]
    runs: usize,
    /// Concurrent solves.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[command(flatten)]
    solver: SolverArgs,
    /// Write the rows as JSON here.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct PlotArgs {
    #[arg(long)]
    instance: String,
    /// Candidate complex to draw: complete, delaunay, greedy or custom:<path.json>.
    #[arg(long)]
    complex: Option<String>,
    /// Run report whose surface and tour are drawn.
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(long)]
    report: PathBuf,
    /// Complex JSON the report was solved on.
    #[arg(long)]
    complex: PathBuf,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct Config {
    backend: Option<String>,
    python: Option<PathBuf>,
    highs: Option<PathBuf>,
    time_limit: Option<f64>,
    threads: Option<usize>,
    out: Option<PathBuf>,
    complete_cap: Option<usize>,
}

fn load_config(path: Option<&Path>) -> Result<Config, String> {
    let Some(path) = path else {
        return Ok(Config::default());
    };
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    toml::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

struct Resolved {
    backend: Box<dyn Backend>,
    limits: SolveLimits,
    complete_cap: usize,
}

fn resolve(args: &SolverArgs, cfg: &Config) -> Result<Resolved, String> {
    let id = args
        .backend
        .clone()
        .or_else(|| cfg.backend.clone())
        .unwrap_or_else(|| "highspy".into());
    let backend: Box<dyn Backend> = match (id.as_str(), &cfg.python, &cfg.highs) {
        ("highspy", Some(py), _) => Box::new(HighsPy::new(py)),
        ("highs", _, Some(exe)) => Box::new(HighsCli::new(exe)),
        _ => backend_by_id(&id).map_err(|e| e.to_string())?,
    };
    let limits = SolveLimits {
        time_limit_s: args.time_limit.or(cfg.time_limit).unwrap_or(3600.0),
        mip_gap: args.mip_gap,
        threads: args.threads.or(cfg.threads).unwrap_or(1),
        random_seed: args.seed,
    };
    limits.validate().map_err(|e| e.to_string())?;
    Ok(Resolved {
        backend,
        limits,
        complete_cap: args.complete_cap.or(cfg.complete_cap).unwrap_or(DEFAULT_COMPLETE_CAP),
    })
}

fn write(path: &Path, text: &str) -> Result<(), String> {
    std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))
}

fn file_stem(report: &RunReport, complex: &str, model: &str, tree: &str) -> String {
    let complex = if complex.starts_with("custom:") { "custom" } else { complex };
    let name: String = report
        .instance
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
        .collect();
    format!("{name}-{model}-{tree}-{complex}-s{}", report.seed)
}

fn cmd_solve(a: SolveArgs, cfg: &Config) -> Result<i32, String> {
    let r = resolve(&a.solver, cfg)?;
    let e = |e: PipelineError| e.to_string();
    let inst = load_instance(&a.instance).map_err(e)?;
    let mut spec = ModelSpec::new(
        a.complex.parse().map_err(e)?,
        a.model.parse::<ModelChoice>().map_err(e)?,
        parse_tree(&a.tree).map_err(e)?,
    );
    spec.complete_cap = r.complete_cap;
    let p = prepare(inst, &spec).map_err(e)?;
    let outcome = execute(&p, r.backend.as_ref(), &r.limits, a.reference).map_err(e)?;
    let report = &outcome.report;

    let out = a.out.or_else(|| cfg.out.clone()).unwrap_or_else(|| PathBuf::from("out"));
    std::fs::create_dir_all(&out).map_err(|e| format!("{}: {e}", out.display()))?;
    let stem = file_stem(report, &a.complex, &a.model, &a.tree);
    let report_path = out.join(format!("{stem}.report.json"));
    write(&report_path, &report.to_json())?;
    if let Some(ts) = &p.complex {
        write(&out.join(format!("{stem}.complex.json")), &ts.to_json())?;
    }
    if let Some(line) = report.tour_line() {
        write(&out.join(format!("{stem}.tour")), &format!("{line}\n"))?;
    }
    if a.emit_lp {
        write(&out.join(format!("{stem}.lp")), &write_lp(&p.model))?;
    }

    println!("instance   {} (N={})", report.instance, report.n);
    println!("model      {}", report.label);
    println!(
        "size       {} vars, {} cons, {} nonzeros",
        report.model_size.vars, report.model_size.cons, report.model_size.nonzeros
    );
    println!("status     {}", report.status);
    if let Some(z) = report.objective {
        println!("objective  {z}");
    }
    if let Some(len) = report.tour_length {
        println!("tour       {len}");
    }
    if let Some(g) = report.gap_percent {
        println!("gap        {g:+.2}%");
    }
    if let Some(v) = &report.verification {
        let failed: Vec<String> = v.failures().iter().map(Check::to_string).collect();
        if failed.is_empty() {
            println!("verified   all checks pass");
        } else {
            println!("verified   FAILED: {}", failed.join(", "));
        }
    }
    if let Some(err) = &report.decode_error {
        println!("decode     {err}");
    }
    println!(
        "time       {:.3}s, nodes {}",
        report.stats.runtime_s,
        report.stats.nodes.map_or("-".into(), |n| n.to_string())
    );
    println!("report     {}", report_path.display());
    Ok(report.exit.code())
}

fn cmd_compare(a: CompareArgs, cfg: &Config) -> Result<i32, String> {
    let r = resolve(&a.solver, cfg)?;
    let inst = load_instance(&a.instance).map_err(|e| e.to_string())?;
    let combos = if a.combos.is_empty() {
        vec![
            "mtz-baseline:flow:delaunay".to_string(),
            "surface:mtz:delaunay".into(),
            "surface:flow:delaunay".into(),
        ]
    } else {
        a.combos
    };
    let specs = combos
        .iter()
        .map(|c| {
            c.parse::<ModelSpec>().map(|mut s| {
                s.complete_cap = r.complete_cap;
                s
            })
        })
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    if a.runs == 0 {
        return Err("--runs must be at least 1".into());
    }
    let rows = compare(&inst, &specs, a.runs, &r.limits, a.jobs, r.backend.as_ref());
    print!("{}", format_compare_table(&rows));
    for row in rows.iter().filter(|r| r.error.is_some()) {
        eprintln!("{}: {}", row.label, row.error.as_deref().unwrap_or_default());
    }
    if let Some(path) = &a.json {
        let json = serde_json::to_string_pretty(&rows).map_err(|e| e.to_string())?;
        write(path, &json)?;
    }
    Ok(if rows.iter().all(|r| r.error.is_none()) { 0 } else { 1 })
}

fn cmd_plot(a: PlotArgs, cfg: &Config) -> Result<i32, String> {
    let inst = load_instance(&a.instance).map_err(|e| e.to_string())?;
    let complex = match &a.complex {
        Some(spec) => Some(
            spec.parse::<ComplexSpec>()
                .and_then(|s| s.build(&inst, cfg.complete_cap.unwrap_or(DEFAULT_COMPLETE_CAP)))
                .map_err(|e| e.to_string())?,
        ),
        None => None,
    };
    let report = match &a.report {
        Some(p) => Some(read_report(p)?),
        None => None,
    };
    let svg = render_svg(&inst, complex.as_ref(), report.as_ref()).map_err(|e| e.to_string())?;
    write(&a.out, &svg)?;
    println!("wrote {}", a.out.display());
    Ok(0)
}

fn read_report(path: &Path) -> Result<RunReport, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    RunReport::from_json(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn cmd_validate(a: ValidateArgs) -> Result<i32, String> {
    let report = read_report(&a.report)?;
    let text = std::fs::read_to_string(&a.complex)
        .map_err(|e| format!("{}: {e}", a.complex.display()))?;
    let ts = TriangleSet::from_json(&text).map_err(|e| format!("{}: {e}", a.complex.display()))?;
    let v = validate_report(&report, &ts).map_err(|e| e.to_string())?;
    if v.valid {
        println!(
            "valid: {} triangles, {} edges, boundary is a Hamiltonian cycle",
            v.num_triangles, v.num_edges
        );
        return Ok(0);
    }
    for c in v.failures() {
        println!("FAIL {c}");
    }
    for d in &v.details {
        println!("  {d}");
    }
    Ok(1)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = load_config(cli.config.as_deref()).and_then(|cfg| match cli.cmd {
        Cmd::Solve(a) => cmd_solve(a, &cfg),
        Cmd::Compare(a) => cmd_compare(a, &cfg),
        Cmd::Plot(a) => cmd_plot(a, &cfg),
        Cmd::Validate(a) => cmd_validate(a),
    });
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
