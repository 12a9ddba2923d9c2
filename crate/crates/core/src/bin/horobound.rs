use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use horobound::graph::{bfs, enumerate_geodesics, Limits};
use horobound::group::{
    builtin_model, builtin_oracle, builtin_presentation, kb_complete, ConfluenceStatus,
    GraphDescriptor, KbBounds, Presentation,
};
use horobound::report::check::{paper_check, CheckOptions, CORRUPTIONS};
use horobound::report::{
    parse_pair, run, run_verified, split_list, verify, Operation, Params, Report, ScenarioSpec,
    VerificationStatus,
};
use horobound::{Error, Result};

/// Horofunction boundary experiments on graphs and Cayley graphs.
///
/// Exit codes: 0 success, 2 invalid input, 3 resource cap, 4 verification
/// failure.
#[derive(Parser)]
#[command(name = "horobound", version)]
struct Cli {
    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Largest distance field any single search may hold.
    #[arg(long, global = true, env = "HOROBOUND_MAX_VERTICES")]
    max_vertices: Option<usize>,

    /// Largest number of paths a geodesic listing may return.
    #[arg(long, global = true, env = "HOROBOUND_MAX_ENUMERATION")]
    max_enumeration: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and emit a JSON report.
    Run(RunArgs),
    /// Reload a report, rerun it and recheck its certificates.
    Verify {
        report: PathBuf,
    },
    /// Run the built-in check suite.
    PaperCheck {
        /// Criterion number or graph tag (e.g. `gamma1`, `heisenberg`).
        #[arg(long)]
        only: Option<String>,
        /// Replace a built-in by a different graph (negative control).
        #[arg(long, value_name = "GRAPH")]
        corrupt: Vec<String>,
        /// Also write the results as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Sphere sizes (and optionally vertices) of a ball.
    Ball {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        radius: u32,
        #[arg(long)]
        base: Option<String>,
        /// List every vertex with its distance.
        #[arg(long)]
        list: bool,
    },
    /// Distance, count and a listing of the minimal paths between two vertices.
    Geodesics {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long, default_value_t = horobound::report::DEFAULT_PATH_LIMIT)]
        limit: usize,
        #[arg(long, default_value_t = horobound::report::DEFAULT_GEODESIC_CAP)]
        cap: u32,
    },
    /// Canonical form of a group element given as a word.
    NormalForm {
        #[arg(long)]
        graph: String,
        word: String,
    },
    /// Knuth-Bendix completion of a built-in or file presentation.
    KbComplete {
        /// A built-in group name, `presentation:FILE`, or a JSON file.
        presentation: String,
        #[arg(long, default_value_t = KbBounds::default().max_rule_len)]
        max_rule_len: usize,
        #[arg(long, default_value_t = KbBounds::default().max_rules)]
        max_rules: usize,
        #[arg(long, default_value_t = KbBounds::default().max_pairs)]
        max_pairs: usize,
        /// Print the result as JSON.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Read the whole scenario from a JSON file instead of flags.
    #[arg(long, conflicts_with_all = ["graph", "op"])]
    spec: Option<PathBuf>,
    #[arg(long, required_unless_present = "spec")]
    graph: Option<String>,
    #[arg(long, required_unless_present = "spec")]
    op: Option<String>,
    #[arg(long)]
    base: Option<String>,
    /// Two vertices, `x,y`.
    #[arg(long)]
    pair: Option<String>,
    #[arg(long)]
    radius: Option<u32>,
    #[arg(long)]
    outer_radius: Option<u32>,
    #[arg(long)]
    side_cap: Option<u32>,
    #[arg(long)]
    count: Option<usize>,
    #[arg(long)]
    r_test: Option<u32>,
    /// Comma-separated radii.
    #[arg(long)]
    annuli: Option<String>,
    #[arg(long)]
    class_of: Option<String>,
    #[arg(long)]
    ray_length: Option<u32>,
    /// Comma-separated vertices.
    #[arg(long)]
    sequence: Option<String>,
    #[arg(long)]
    probe_radius: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    epsilon: Option<String>,
    #[arg(long)]
    start: Option<usize>,
    #[arg(long)]
    other: Option<String>,
    #[arg(long)]
    cap: Option<u32>,
    #[arg(long)]
    limit: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Also write a CSV table (rigid-scan, pathsjoin, witness, tail-bound, ball).
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Record the wall-clock time in the report.
    #[arg(long)]
    timestamp: bool,
    /// Skip the reload-and-recheck step.
    #[arg(long)]
    no_verify: bool,
}

impl RunArgs {
    fn scenario(&self) -> Result<ScenarioSpec> {
        if let Some(path) = &self.spec {
            let text = std::fs::read_to_string(path)?;
            return Ok(serde_json::from_str(&text)?);
        }
        let annuli = match &self.annuli {
            Some(a) => split_list(a)
                .iter()
                .map(|r| r.parse().map_err(|_| Error::InvalidInput(format!("bad annulus radius {r:?}"))))
                .collect::<Result<_>>()?,
            None => Vec::new(),
        };
        let params = Params {
            base: self.base.clone(),
            pair: self.pair.as_deref().map(parse_pair).transpose()?,
            radius: self.radius,
            outer_radius: self.outer_radius,
            side_cap: self.side_cap,
            count: self.count,
            r_test: self.r_test,
            annuli,
            class_of: self.class_of.clone(),
            ray_length: self.ray_length,
            sequence: self.sequence.as_deref().map(split_list).unwrap_or_default(),
            probe_radius: self.probe_radius,
            epsilon: self.epsilon.clone(),
            start: self.start,
            other: self.other.clone(),
            cap: self.cap,
            limit: self.limit,
        };
        let graph = self.graph.clone().expect("required by clap");
        let op = Operation::parse(self.op.as_deref().expect("required by clap"))?;
        Ok(ScenarioSpec::new(graph, op, params))
    }
}

fn write_or_print(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => Ok(std::fs::write(p, text)?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn status_code(status: &VerificationStatus) -> u8 {
    match status {
        VerificationStatus::Failed { reason } => {
            eprintln!("verification failed: {reason}");
            4
        }
        _ => 0,
    }
}

fn cmd_run(args: &RunArgs, limits: &Limits) -> Result<u8> {
    let mut spec = args.scenario()?;
    spec.validate()?;
    if spec.output.is_none() {
        spec.output = args.output.as_ref().map(|p| p.display().to_string());
    }
    let mut report = if args.no_verify {
        run(&spec, limits)?
    } else {
        run_verified(&spec, limits)?
    };
    if args.timestamp {
        report.provenance = horobound::report::Provenance::current(true);
    }
    let out = spec.output.as_deref().map(Path::new);
    write_or_print(out, &report.to_json()?)?;
    if let Some(csv) = &args.csv {
        std::fs::write(csv, report.csv()?)?;
    }
    Ok(status_code(&report.verification))
}

fn cmd_verify(path: &Path, limits: &Limits) -> Result<u8> {
    let report = Report::from_json(&std::fs::read_to_string(path)?)?;
    let status = verify(&report, limits)?;
    println!("{}", serde_json::to_string_pretty(&status)?);
    Ok(status_code(&status))
}

fn cmd_paper_check(only: Option<String>, corrupt: Vec<String>, json: Option<PathBuf>, limits: &Limits) -> Result<u8> {
    for c in &corrupt {
        if !CORRUPTIONS.iter().any(|(from, _)| from == c) {
            return Err(Error::InvalidInput(format!("cannot corrupt {c:?}")));
        }
    }
    let opts = CheckOptions {
        only,
        corrupt,
        limits: *limits,
    };
    let summary = paper_check(&opts, |r| println!("{r}"))?;
    let table = summary.table();
    println!("{}", table.lines().last().unwrap_or_default());
    if let Some(p) = json {
        std::fs::write(p, serde_json::to_string_pretty(&summary)? + "\n")?;
    }
    Ok(if summary.all_passed() { 0 } else { 4 })
}

fn cmd_ball(graph: &str, radius: u32, base: Option<&str>, list: bool, limits: &Limits) -> Result<u8> {
    let g = builtin_oracle(&GraphDescriptor::parse(graph)?)?;
    let center = match base {
        Some(b) => g.resolve(b)?,
        None => g.origin(),
    };
    let field = bfs(&*g, &center, radius, limits)?;
    let mut sizes = vec![0usize; radius as usize + 1];
    let entries = field.sorted_entries();
    for (_, d) in &entries {
        sizes[*d as usize] += 1;
    }
    println!("graph {}  center {}  radius {radius}", g.descriptor(), g.label(&center));
    for (r, n) in sizes.iter().enumerate() {
        println!("sphere {r}: {n}");
    }
    println!("ball: {}", field.len());
    if list {
        for (k, d) in entries {
            println!("{d}\t{}", g.label(k));
        }
    }
    Ok(0)
}

fn cmd_geodesics(graph: &str, from: &str, to: &str, limit: usize, cap: u32, limits: &Limits) -> Result<u8> {
    let g = builtin_oracle(&GraphDescriptor::parse(graph)?)?;
    let (a, c) = (g.resolve(from)?, g.resolve(to)?);
    let list = enumerate_geodesics(&*g, &a, &c, cap, limit.max(1), limits)?;
    println!("distance {}", list.paths[0].len() - 1);
    println!("minimal paths {}", list.total);
    for p in &list.paths {
        let labels: Vec<String> = p.iter().map(|v| g.label(v)).collect();
        println!("{}", labels.join(" -> "));
    }
    if list.truncated {
        println!("(listing truncated at {})", list.paths.len());
    }
    Ok(0)
}

fn cmd_normal_form(graph: &str, word: &str) -> Result<u8> {
    let model = builtin_model(&GraphDescriptor::parse(graph)?)?;
    let g = model.evaluate_str(word)?;
    println!("{}", model.describe(&g));
    println!("key {}", g.to_hex());
    Ok(0)
}

fn load_presentation(text: &str) -> Result<Presentation> {
    match GraphDescriptor::parse(text) {
        Ok(desc) => builtin_presentation(&desc),
        Err(Error::UnknownBuiltin(_)) if Path::new(text).is_file() => Presentation::load(Path::new(text)),
        Err(e) => Err(e),
    }
}

fn cmd_kb(text: &str, bounds: KbBounds, json: bool) -> Result<u8> {
    let p = load_presentation(text)?;
    let rs = kb_complete(&p, bounds)?;
    let rules = rs.format_rules();
    if json {
        let doc = serde_json::json!({
            "presentation": p.name(),
            "status": rs.status(),
            "rules": rules.iter().map(|(l, r)| [l, r]).collect::<Vec<_>>(),
        });
        println!("{}", serde_json::to_string_pretty(&doc)?);
    } else {
        println!("presentation {}", p.name());
        for (l, r) in &rules {
            println!("{l} -> {r}");
        }
        match rs.status() {
            ConfluenceStatus::Verified => println!("{} rules, confluence verified", rules.len()),
            ConfluenceStatus::Unverified { reason } => println!("{} rules, unverified: {reason}", rules.len()),
            ConfluenceStatus::Refuted { word, left, right } => {
                println!("not confluent: {word} reduces to {left} and {right}")
            }
        }
    }
    Ok(match rs.status() {
        ConfluenceStatus::Verified => 0,
        ConfluenceStatus::Unverified { .. } => 3,
        ConfluenceStatus::Refuted { .. } => 4,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.workers {
        if n == 0 {
            eprintln!("error: --workers must be positive");
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .expect("thread pool is configured once");
    }
    let mut limits = Limits::default();
    if let Some(v) = cli.max_vertices {
        limits.max_vertices = v;
    }
    if let Some(e) = cli.max_enumeration {
        limits.max_enumeration = e;
    }
    let outcome = match &cli.command {
        Command::Run(args) => cmd_run(args, &limits),
        Command::Verify { report } => cmd_verify(report, &limits),
        Command::PaperCheck { only, corrupt, json } => {
            cmd_paper_check(only.clone(), corrupt.clone(), json.clone(), &limits)
        }
        Command::Ball { graph, radius, base, list } => cmd_ball(graph, *radius, base.as_deref(), *list, &limits),
        Command::Geodesics { graph, from, to, limit, cap } => cmd_geodesics(graph, from, to, *limit, *cap, &limits),
        Command::NormalForm { graph, word } => cmd_normal_form(graph, word),
        Command::KbComplete {
            presentation,
            max_rule_len,
            max_rules,
            max_pairs,
            json,
        } => cmd_kb(
            presentation,
            KbBounds {
                max_rule_len: *max_rule_len,
                max_rules: *max_rules,
                max_pairs: *max_pairs,
            },
            *json,
        ),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
