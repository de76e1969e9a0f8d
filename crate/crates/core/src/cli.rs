//! Command-line front end. `run` is the whole program; `main` only forwards
//! the process arguments and exit code.

use std::fs;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::constructions::{
    cube_c, cube_projected, k4_example, lowerbound_family, nonfano_s, search_r4_example,
    search_six_edge_r5, triangle_r,
};
use crate::geometry::quad_config;
use crate::hypergraph::{zk_hypergraph, Instance};
use crate::io::document::{parse, serialize, to_document, Metadata};
use crate::io::svg::{render_svg, DiagramSpec, Overlays};
use crate::lp::chain_report_from;
use crate::rational;
use crate::search::audit::{audit_with, suite_instances, AuditOptions, AuditReport, CheckStatus};
use crate::search::{
    enumerate_intersecting, generate_intersecting, generate_random, ratio_enumeration,
};
use crate::solvers::{chromatic_number_with, covering_number_with, matching_number_with, Limits};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_CONJECTURE: i32 = 3;
pub const EXIT_THEOREM: i32 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "seghyper",
    version,
    about = "Covering, matching and coloring of lattice segment hypergraphs"
)]
struct Cli {
    /// Worker threads for parallel searches. Never changes output.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact tau, nu and chi with witnesses; optionally nu*, tau* and slackness.
    Analyze(AnalyzeArgs),
    /// Emit a named configuration as a JSON document.
    Construct(ConstructArgs),
    /// Quadrilateral ratio tuples or exhaustive intersecting instances in a box.
    #[command(subcommand)]
    Search(SearchCommand),
    /// Audit an instance, or the built-in suite, against known bounds.
    Verify(VerifyArgs),
    /// Draw a segment instance as SVG.
    Render(RenderArgs),
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    /// Instance document, `-` for stdin.
    #[arg(default_value = "-")]
    file: String,
    #[arg(long)]
    fractional: bool,
    /// Skip the chromatic number.
    #[arg(long)]
    no_chi: bool,
    #[arg(long)]
    node_limit: Option<u64>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Named {
    K4,
    Triangle,
    Nonfano,
    Cube,
    CubeProjected,
    Lowerbound,
    Z2,
    Z3,
    Z4,
    R4Example,
    SixEdgeR5,
    Random,
    Intersecting,
}

#[derive(Args, Debug)]
struct ConstructArgs {
    name: Named,
    #[arg(long)]
    r: Option<i64>,
    #[arg(long = "box")]
    box_size: Option<i64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Edge target for the generators.
    #[arg(long)]
    edges: Option<usize>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum SearchCommand {
    /// Feasible b-ratio tuples up to relabeling.
    RatioTuples {
        #[arg(long)]
        r: i64,
    },
    /// Maximal intersecting families in a box, up to symmetry, as JSON lines.
    Enumerate {
        #[arg(long)]
        r: i64,
        #[arg(long = "box")]
        box_size: i64,
    },
}

#[derive(Args, Debug)]
struct VerifyArgs {
    file: Option<String>,
    #[arg(long, conflicts_with = "file")]
    suite: bool,
    /// Random and intersecting instances per r in the suite.
    #[arg(long, default_value_t = 20)]
    per_r: u64,
    /// Also compute chromatic numbers.
    #[arg(long)]
    chromatic: bool,
    #[arg(long)]
    node_limit: Option<u64>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Overlay {
    Cover,
    Matching,
    Coloring,
    Meets,
    Quad,
}

#[derive(Args, Debug)]
struct RenderArgs {
    #[arg(default_value = "-")]
    file: String,
    #[arg(long, value_delimiter = ',')]
    overlay: Vec<Overlay>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn invalid(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INVALID,
            message: message.into(),
        }
    }
}

struct Io<'a> {
    stdin: &'a mut (dyn Read + Send),
    stdout: &'a mut (dyn Write + Send),
    stderr: &'a mut (dyn Write + Send),
    json: bool,
}

/// Parse `args` (including the program name) and execute. Returns the exit
/// code: 0 success, 1 usage or I/O error, 2 invalid instance, 3 conjecture
/// counterexample, 4 theorem check failure.
pub fn run<I, T>(
    args: I,
    stdin: &mut (dyn Read + Send),
    stdout: &mut (dyn Write + Send),
    stderr: &mut (dyn Write + Send),
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let mut io = Io {
        stdin,
        stdout,
        stderr,
        json: cli.json,
    };
    let result = match cli.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| dispatch(cli.command, &mut io)),
            Err(e) => Err(Failure::usage(format!("cannot start {n} threads: {e}"))),
        },
        None => dispatch(cli.command, &mut io),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(io.stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(command: Command, io: &mut Io<'_>) -> Result<i32, Failure> {
    match command {
        Command::Analyze(a) => analyze(a, io),
        Command::Construct(c) => construct(c, io),
        Command::Search(s) => search(s, io),
        Command::Verify(v) => verify(v, io),
        Command::Render(r) => render(r, io),
    }
}

fn read_input(file: &str, io: &mut Io<'_>) -> Result<String, Failure> {
    if file == "-" {
        let mut text = String::new();
        io.stdin
            .read_to_string(&mut text)
            .map_err(|e| Failure::usage(format!("reading stdin: {e}")))?;
        Ok(text)
    } else {
        fs::read_to_string(file).map_err(|e| Failure::usage(format!("reading {file}: {e}")))
    }
}

fn load(file: &str, io: &mut Io<'_>) -> Result<(Instance, Option<Metadata>), Failure> {
    let text = read_input(file, io)?;
    let parsed = parse(&text).map_err(|e| Failure::invalid(e.to_string()))?;
    for w in &parsed.warnings {
        let _ = writeln!(io.stderr, "warning: {w}");
    }
    Ok((parsed.instance, parsed.metadata))
}

fn emit(io: &mut Io<'_>, output: Option<&PathBuf>, text: &str) -> Result<(), Failure> {
    match output {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::usage(format!("writing {}: {e}", path.display()))),
        None => io
            .stdout
            .write_all(text.as_bytes())
            .map_err(|e| Failure::usage(e.to_string())),
    }
}

fn out(io: &mut Io<'_>, text: impl AsRef<str>) -> Result<(), Failure> {
    writeln!(io.stdout, "{}", text.as_ref()).map_err(|e| Failure::usage(e.to_string()))
}

fn limits(node_limit: Option<u64>) -> Limits {
    Limits { node_limit }
}

fn vertex_names(instance: &Instance, ids: &[usize]) -> Vec<String> {
    let labels = instance.generic().labels();
    ids.iter().map(|&v| labels[v].clone()).collect()
}

fn analyze(args: AnalyzeArgs, io: &mut Io<'_>) -> Result<i32, Failure> {
    let (instance, _) = load(&args.file, io)?;
    let g = instance.generic();
    let lim = limits(args.node_limit);
    let unknown = |e: crate::solvers::SolveError| Failure::usage(e.to_string());
    let matching = matching_number_with(g, lim).map_err(unknown)?;
    let cover = covering_number_with(g, lim).map_err(unknown)?;
    let chi = if args.no_chi || g.edges().iter().any(|e| e.len() == 1) {
        None
    } else {
        Some(chromatic_number_with(g, lim).map_err(unknown)?)
    };
    let chain = if args.fractional {
        Some(
            chain_report_from(g, matching.clone(), cover.clone())
                .map_err(|e| Failure::invalid(e.to_string()))?,
        )
    } else {
        None
    };

    if io.json {
        let mut report = json!({
            "vertices": g.num_vertices(),
            "edges": g.num_edges(),
            "r": instance.uniformity(),
            "intersecting": g.num_edges() > 0 && g.is_intersecting(),
            "nu": { "value": matching.size(), "edges": matching.edges },
            "tau": { "value": cover.size(), "vertices": vertex_names(&instance, &cover.vertices) },
        });
        if let Some(c) = &chi {
            report["chi"] = json!({ "value": c.num_colors, "assignment": c.assignment });
        }
        if let Some(c) = &chain {
            report["fractional"] = json!({
                "nu_star": rational::format(c.nu_star()),
                "tau_star": rational::format(c.tau_star()),
                "matching": c.fractional.matching,
                "cover": c.fractional.cover,
                "slackness": c.slackness,
            });
        }
        out(
            io,
            serde_json::to_string_pretty(&report).expect("serializable"),
        )?;
        return Ok(EXIT_OK);
    }

    let kind = match instance.as_segment() {
        Some(h) => format!("segment instance, r = {}", h.r()),
        None => "generic instance".to_string(),
    };
    out(
        io,
        format!(
            "{kind}: {} vertices, {} edges",
            g.num_vertices(),
            g.num_edges()
        ),
    )?;
    out(
        io,
        format!(
            "nu = {}  matching edges {:?}",
            matching.size(),
            matching.edges
        ),
    )?;
    out(
        io,
        format!(
            "tau = {}  cover {}",
            cover.size(),
            vertex_names(&instance, &cover.vertices).join(" ")
        ),
    )?;
    if let Some(c) = &chi {
        out(
            io,
            format!("chi = {}  classes {:?}", c.num_colors, c.classes()),
        )?;
    }
    if let Some(c) = &chain {
        out(io, format!("nu* = {}", rational::format(c.nu_star())))?;
        out(io, format!("tau* = {}", rational::format(c.tau_star())))?;
        let saturated = c.slackness.vertices.len();
        let status = if c.slackness.holds() {
            "holds"
        } else {
            "VIOLATED"
        };
        out(
            io,
            format!(
                "slackness {status} ({saturated} weighted vertices, {} weighted edges)",
                c.slackness.edges.len()
            ),
        )?;
    }
    Ok(EXIT_OK)
}

fn construct(args: ConstructArgs, io: &mut Io<'_>) -> Result<i32, Failure> {
    let need_r = |default: i64| args.r.unwrap_or(default);
    let bad = |e: &dyn std::fmt::Display| Failure::usage(e.to_string());
    let mut seed = None;
    let mut provenance = format!("construct {:?}", args.name).to_lowercase();
    let instance: Instance = match args.name {
        Named::K4 => k4_example().into(),
        Named::Triangle => triangle_r().into(),
        Named::Nonfano => nonfano_s().into(),
        Named::Cube => cube_c().into(),
        Named::CubeProjected => cube_projected().map_err(|e| bad(&e))?.into(),
        Named::Lowerbound => {
            let r = need_r(5);
            provenance = format!("construct lowerbound --r {r}");
            lowerbound_family(r).map_err(|e| bad(&e))?.into()
        }
        Named::Z2 | Named::Z3 | Named::Z4 => {
            let k = match args.name {
                Named::Z2 => 2,
                Named::Z3 => 3,
                _ => 4,
            };
            zk_hypergraph(k).map_err(|e| bad(&e))?.to_generic().into()
        }
        Named::R4Example | Named::SixEdgeR5 => {
            let b = args
                .box_size
                .unwrap_or(if args.name == Named::R4Example { 3 } else { 6 });
            provenance = format!("{provenance} --box {b}");
            let found = if args.name == Named::R4Example {
                search_r4_example(b)
            } else {
                search_six_edge_r5(b)
            };
            match found {
                Some(h) => h.into(),
                None => {
                    return Err(Failure::usage(format!(
                        "inconclusive: no instance found within box {b}"
                    )))
                }
            }
        }
        Named::Random | Named::Intersecting => {
            let r = need_r(3);
            let b = args.box_size.unwrap_or(3 * r);
            let edges = args.edges.unwrap_or(r as usize + 1);
            seed = Some(args.seed);
            provenance = format!(
                "{provenance} --r {r} --box {b} --edges {edges} --seed {}",
                args.seed
            );
            let g = if args.name == Named::Random {
                generate_random(r, edges, b, args.seed)
            } else {
                generate_intersecting(r, edges, b, args.seed)
            }
            .map_err(|e| bad(&e))?;
            if !g.reached {
                let _ = writeln!(
                    io.stderr,
                    "warning: reached {} of {edges} edges",
                    g.hypergraph.num_edges()
                );
            }
            g.hypergraph.into()
        }
    };
    let name = format!("{:?}", args.name).to_lowercase();
    let meta = Metadata {
        name: Some(name),
        seed,
        provenance: Some(provenance),
    };
    emit(io, args.output.as_ref(), &serialize(&instance, Some(meta)))?;
    Ok(EXIT_OK)
}

fn search(command: SearchCommand, io: &mut Io<'_>) -> Result<i32, Failure> {
    match command {
        SearchCommand::RatioTuples { r } => {
            if r < 4 {
                return Err(Failure::usage(format!("ratio tuples need r >= 4, got {r}")));
            }
            let e = ratio_enumeration(r);
            if io.json {
                out(io, serde_json::to_string_pretty(&e).expect("serializable"))?;
            } else {
                for t in &e.orbits {
                    out(io, t.to_string())?;
                }
                let _ = writeln!(
                    io.stderr,
                    "{} feasible tuples in {} orbits",
                    e.raw.len(),
                    e.orbits.len()
                );
            }
        }
        SearchCommand::Enumerate { r, box_size } => {
            if r < 3 || box_size < r - 1 {
                return Err(Failure::usage(format!(
                    "enumeration needs r >= 3 and box >= r - 1, got r = {r}, box = {box_size}"
                )));
            }
            let e = enumerate_intersecting(r, box_size);
            for (i, h) in e.instances.into_iter().enumerate() {
                let meta = Metadata {
                    name: Some(format!("enum-r{r}-box{box_size}-{i}")),
                    ..Default::default()
                };
                let doc = to_document(&h.into(), Some(meta));
                out(io, serde_json::to_string(&doc).expect("serializable"))?;
            }
            let _ = writeln!(
                io.stderr,
                "{}",
                serde_json::to_string(&e.stats).expect("serializable")
            );
            if e.stats.quad_ratio_violations > 0 {
                return Ok(EXIT_THEOREM);
            }
        }
    }
    Ok(EXIT_OK)
}

fn verify(args: VerifyArgs, io: &mut Io<'_>) -> Result<i32, Failure> {
    let instances: Vec<(String, Instance)> = match (&args.file, args.suite) {
        (None, true) => suite_instances(args.per_r).map_err(|e| Failure::usage(e.to_string()))?,
        (file, _) => {
            let file = file.as_deref().unwrap_or("-");
            let (instance, meta) = load(file, io)?;
            let name = meta
                .and_then(|m| m.name)
                .unwrap_or_else(|| file.to_string());
            vec![(name, instance)]
        }
    };
    let options = AuditOptions {
        chromatic: args.chromatic,
        limits: limits(args.node_limit),
    };
    let mut reports: Vec<AuditReport> = Vec::with_capacity(instances.len());
    for (name, instance) in &instances {
        reports.push(
            audit_with(instance, Some(name), options).map_err(|e| Failure::usage(e.to_string()))?,
        );
    }
    let theorem = reports.iter().any(|r| !r.theorem_failures().is_empty());
    let conjecture = reports.iter().any(|r| !r.conjecture_failures().is_empty());

    if io.json {
        out(
            io,
            serde_json::to_string_pretty(&reports).expect("serializable"),
        )?;
    } else {
        for report in &reports {
            let name = report.instance.as_deref().unwrap_or("instance");
            let inv = &report.invariants;
            out(
                io,
                format!(
                    "{name}: nu = {}, tau = {}, nu* = {}",
                    inv.nu,
                    inv.tau,
                    rational::format(&inv.nu_star)
                ),
            )?;
            for c in &report.checks {
                let status = match c.status {
                    CheckStatus::Pass => "pass",
                    CheckStatus::Fail => "FAIL",
                    CheckStatus::Skipped => "skip",
                };
                out(
                    io,
                    format!(
                        "  [{status}] {:?} {}: expected {}; observed {}",
                        c.kind, c.name, c.expected, c.observed
                    )
                    .to_lowercase(),
                )?;
            }
            if let Some(w) = &report.witness {
                out(
                    io,
                    format!(
                        "  witness: {}",
                        serde_json::to_string(w).expect("serializable")
                    ),
                )?;
            }
        }
        let failing = reports.iter().filter(|r| r.witness.is_some()).count();
        out(
            io,
            format!(
                "{} instances audited, {failing} with failures",
                reports.len()
            ),
        )?;
    }
    Ok(if theorem {
        EXIT_THEOREM
    } else if conjecture {
        EXIT_CONJECTURE
    } else {
        EXIT_OK
    })
}

fn render(args: RenderArgs, io: &mut Io<'_>) -> Result<i32, Failure> {
    let (instance, _) = load(&args.file, io)?;
    let Instance::Segment(h) = instance else {
        return Err(Failure::invalid(
            "only segment instances have coordinates to draw",
        ));
    };
    let g = h.as_generic();
    let mut overlays = Overlays::default();
    for o in &args.overlay {
        match o {
            Overlay::Cover => overlays.cover = Some(crate::solvers::covering_number(g).vertices),
            Overlay::Matching => overlays.matching = Some(crate::solvers::matching_number(g).edges),
            Overlay::Coloring => {
                overlays.coloring = Some(
                    chromatic_number_with(g, Limits::default())
                        .map_err(|e| Failure::invalid(e.to_string()))?,
                )
            }
            Overlay::Meets => overlays.meets = true,
            Overlay::Quad => overlays.quad = first_quad(&h),
        }
    }
    let svg = render_svg(&DiagramSpec {
        hypergraph: &h,
        overlays,
    })
    .map_err(|e| Failure::invalid(e.to_string()))?;
    emit(io, args.output.as_ref(), &svg)?;
    Ok(EXIT_OK)
}

fn first_quad(h: &crate::hypergraph::SegmentHypergraph) -> Option<crate::geometry::QuadConfig> {
    let e = h.edges();
    let m = e.len();
    for a in 0..m {
        for b in (a + 1)..m {
            for c in (b + 1)..m {
                for d in (c + 1)..m {
                    if let Ok(q) = quad_config(&[e[a], e[b], e[c], e[d]]) {
                        return Some(q);
                    }
                }
            }
        }
    }
    None
}

/// Names accepted by `construct`, for help text and tests.
pub fn construct_names() -> Vec<String> {
    Named::value_variants()
        .iter()
        .filter_map(|v| v.to_possible_value().map(|p| p.get_name().to_string()))
        .collect()
}
