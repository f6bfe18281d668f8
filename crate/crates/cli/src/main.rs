use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use cs5::compiler::{gates, search_compile, sk_compile, GateTarget, Toolkit};
use cs5::density::certify;
use cs5::encsim::{one_qubit_target, simulate_circuit, two_qubit_target, Circuit};
use cs5::fixtures::{matrix_from_json, JsonMatrix, MatrixFixture};
use cs5::linalg::CMat;
use cs5::{build_sector, disk_dimension, verify_relations, FusionContext, SectorRep, YoungDiagram};

/// Overrides the fixture directory (default `./fixtures`).
const FIXTURE_ENV: &str = "CS5_FIXTURE_DIR";
/// Entrywise tolerance when comparing a built sector with its stored fixture.
const FIXTURE_TOL: f64 = 1e-12;

#[derive(Parser)]
#[command(
    name = "cs5",
    version,
    about = "Jones representations, density certificates, braid compilation and encoded-qubit simulation"
)]
struct Cli {
    /// Progress messages on stderr (repeat for more).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit the projector and generator matrices of one sector as a fixture document.
    Rep {
        #[arg(long, default_value_t = 5)]
        r: u32,
        /// Two-row diagram, e.g. `4,2`.
        #[arg(long)]
        diagram: String,
        #[command(flatten)]
        out: OutArgs,
        /// Also store the document in the fixture directory.
        #[arg(long)]
        save: bool,
    },
    /// Check every defining relation of one sector (and its stored fixture, if any).
    Verify {
        #[arg(long, default_value_t = 5)]
        r: u32,
        #[arg(long)]
        diagram: String,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Disk-space dimensions for `n` points and every boundary label.
    Dims {
        #[arg(long, default_value_t = 5)]
        r: u32,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Lie-closure certificates for the two B(6) sectors of boundary 0 and 2, and their sum.
    Density {
        #[arg(long, default_value_t = 5)]
        r: u32,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Compile a gate into a braid word.
    Compile(CompileArgs),
    /// Simulate a circuit on encoded qubits.
    Simulate {
        #[arg(long)]
        circuit: PathBuf,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Args)]
struct OutArgs {
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CompileArgs {
    #[arg(long, default_value_t = 5)]
    r: u32,
    /// 3 for single-qubit gates (Solovay-Kitaev), 6 for two-qubit gates (search).
    #[arg(long)]
    strands: usize,
    /// Gate name (`h`, `t`, `cz`, ...) or a JSON matrix file.
    #[arg(long)]
    target: String,
    #[arg(long, conflicts_with = "budget")]
    epsilon: Option<f64>,
    #[arg(long)]
    budget: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    out: OutArgs,
}

enum Failure {
    /// Bad arguments or input files; exit 1.
    Usage(String),
    /// A check ran and did not pass, or a numerical certification failed; exit 2.
    Check(String),
}

impl From<cs5::Error> for Failure {
    fn from(e: cs5::Error) -> Self {
        match e {
            cs5::Error::Domain(_) | cs5::Error::Precondition(_) => Failure::Usage(e.to_string()),
            _ => Failure::Check(e.to_string()),
        }
    }
}

type Outcome = Result<bool, Failure>;

struct Ctx {
    verbose: u8,
    start: Instant,
}

impl Ctx {
    fn log(&self, msg: &str) {
        if self.verbose > 0 {
            eprintln!("[{:7.2}s] {msg}", self.start.elapsed().as_secs_f64());
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let ctx = Ctx {
        verbose: cli.verbose,
        start: Instant::now(),
    };
    match run(cli.cmd, &ctx) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cmd: Command, ctx: &Ctx) -> Outcome {
    match cmd {
        Command::Rep { r, diagram, out, save } => {
            let fctx = level(r)?;
            let rep = sector(&diagram, &fctx)?;
            let doc = MatrixFixture::from_sector(&rep).to_json();
            if save {
                let dir = fixture_dir();
                std::fs::create_dir_all(&dir).map_err(|e| Failure::Usage(format!("{}: {e}", dir.display())))?;
                let path = dir.join(fixture_name(r, &rep));
                std::fs::write(&path, format!("{doc}\n"))
                    .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
                ctx.log(&format!("saved {}", path.display()));
            }
            emit_text(&out, &doc)?;
            Ok(true)
        }
        Command::Verify { r, diagram, out } => {
            let fctx = level(r)?;
            let rep = sector(&diagram, &fctx)?;
            let report = verify_relations(&rep);
            let fixture = compare_fixture(r, &rep, ctx)?;
            let pass = report.pass && fixture.as_ref().is_none_or(|f| f["match"] == json!(true));
            let mut doc = serde_json::to_value(&report).expect("report serializes");
            doc["fixture"] = fixture.unwrap_or(Value::Null);
            doc["pass"] = json!(pass);
            emit(&out, &doc)?;
            Ok(pass)
        }
        Command::Dims { r, n, out } => {
            let fctx = level(r)?;
            let rows: Vec<Value> = fctx
                .labels()
                .map(|b| Ok(json!({"boundary": b, "dimension": disk_dimension(n, b, &fctx)?})))
                .collect::<Result<_, cs5::Error>>()?;
            emit(&out, &json!({"r": r, "n": n, "dimensions": rows}))?;
            Ok(true)
        }
        Command::Density { r, out } => {
            let fctx = level(r)?;
            let a = build_sector(YoungDiagram::new(3, 3)?, &fctx)?;
            let b = build_sector(YoungDiagram::new(4, 2)?, &fctx)?;
            let mut certs = Vec::new();
            let mut pass = true;
            for set in [vec![&a], vec![&b], vec![&a, &b]] {
                ctx.log(&format!("closing {} sector(s)", set.len()));
                let cert = certify(&set).map_err(|e| Failure::Check(e.to_string()))?;
                pass &= cert.pass;
                certs.push(serde_json::to_value(&cert).expect("certificate serializes"));
            }
            emit(&out, &json!({"r": r, "certificates": certs, "pass": pass}))?;
            Ok(pass)
        }
        Command::Compile(args) => compile(args, ctx),
        Command::Simulate { circuit, out } => {
            let text = read(&circuit)?;
            let circ = Circuit::from_json(&text).map_err(|e| Failure::Usage(format!("{}: {e}", circuit.display())))?;
            circ.validate()?;
            let fctx = FusionContext::r5();
            let kit = Toolkit::new(&fctx)?;
            ctx.log(&format!("simulating {} gates on {} qubits", circ.gates.len(), circ.k));
            let res = simulate_circuit(&circ, &kit)?;
            emit(&out, &serde_json::to_value(&res).expect("result serializes"))?;
            Ok(true)
        }
    }
}

fn compile(args: CompileArgs, ctx: &Ctx) -> Outcome {
    let fctx = level(args.r)?;
    match (args.strands, args.epsilon, args.budget) {
        (3, Some(eps), None) => {
            if !(eps > 0.0 && eps < 2.0) {
                return Err(Failure::Usage(format!("--epsilon must lie in (0, 2), got {eps}")));
            }
        }
        (6, None, Some(budget)) => {
            if budget < 1 {
                return Err(Failure::Usage("--budget must be at least 1".into()));
            }
        }
        (3, _, _) => return Err(Failure::Usage("--strands 3 takes --epsilon".into())),
        (6, _, _) => return Err(Failure::Usage("--strands 6 takes --budget".into())),
        (s, _, _) => return Err(Failure::Usage(format!("--strands must be 3 or 6, got {s}"))),
    }
    let g = target_matrix(&args.target, if args.strands == 3 { 2 } else { 4 })?;
    let kit = Toolkit::new(&fctx)?;
    let braid = if args.strands == 3 {
        let target: GateTarget = one_qubit_target(&g)?;
        ctx.log("building single-qubit net");
        let net = kit.net()?;
        ctx.log(&format!("net has {} entries", net.len()));
        sk_compile(
            &target,
            args.epsilon.unwrap_or_default(),
            net,
            &kit.rep21,
            kit.cfg.max_depth,
        )?
    } else {
        let target = two_qubit_target(&g, &fctx)?;
        let net = kit.pair_net()?;
        ctx.log(&format!("pair net has {} entries", net.words.len()));
        let cfg = cs5::compiler::SearchConfig {
            seed: args.seed,
            ..kit.cfg.search.clone()
        };
        search_compile(&target, &kit.pair(), net, args.budget.unwrap_or(1), &cfg)?
    };
    emit(
        &args.out,
        &serde_json::to_value(braid.document()).expect("braid serializes"),
    )?;
    Ok(true)
}

fn level(r: u32) -> Result<FusionContext, Failure> {
    FusionContext::new(r).map_err(|e| Failure::Usage(e.to_string()))
}

fn sector(diagram: &str, fctx: &FusionContext) -> Result<SectorRep, Failure> {
    let parts: Vec<&str> = diagram.trim_matches(|c| c == '[' || c == ']').split(',').collect();
    let parsed: Vec<usize> = parts
        .iter()
        .map(|p| p.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|_| Failure::Usage(format!("diagram {diagram:?} is not of the form l1,l2")))?;
    let d = match parsed[..] {
        [l1, l2] => YoungDiagram::new(l1, l2)?,
        [l1] => YoungDiagram::new(l1, 0)?,
        _ => return Err(Failure::Usage(format!("diagram {diagram:?} must have one or two rows"))),
    };
    Ok(build_sector(d, fctx)?)
}

fn fixture_dir() -> PathBuf {
    std::env::var_os(FIXTURE_ENV).map_or_else(|| PathBuf::from("fixtures"), PathBuf::from)
}

fn fixture_name(r: u32, rep: &SectorRep) -> String {
    format!("r{r}_{}-{}.json", rep.diagram.rows.0, rep.diagram.rows.1)
}

fn compare_fixture(r: u32, rep: &SectorRep, ctx: &Ctx) -> Result<Option<Value>, Failure> {
    let path = fixture_dir().join(fixture_name(r, rep));
    if !path.exists() {
        ctx.log(&format!("no fixture at {}", path.display()));
        return Ok(None);
    }
    let text = read(&path)?;
    let stored = MatrixFixture::from_json(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let built = MatrixFixture::from_sector(rep);
    let mut worst: f64 = 0.0;
    let mut same_layout = stored.order == built.order && stored.matrices.len() == built.matrices.len();
    for m in &built.matrices {
        match stored.get(&m.name) {
            Some(Ok(s)) => {
                let b = matrix_from_json(&m.data)?;
                if s.shape() != b.shape() {
                    same_layout = false;
                    continue;
                }
                worst = worst.max((s - b).iter().map(|z| z.norm()).fold(0.0, f64::max));
            }
            _ => same_layout = false,
        }
    }
    let ok = same_layout && worst < FIXTURE_TOL;
    Ok(Some(
        json!({"path": path.display().to_string(), "max_entry_difference": worst, "match": ok}),
    ))
}

fn target_matrix(name: &str, dim: usize) -> Result<CMat, Failure> {
    let named = if dim == 2 {
        gates::one_qubit(name)
    } else {
        gates::two_qubit(name)
    };
    if let Some(g) = named {
        return Ok(g);
    }
    let path = Path::new(name);
    if !path.exists() {
        return Err(Failure::Usage(format!("{name:?} is neither a known gate nor a file")));
    }
    let text = read(path)?;
    let bad = |e: serde_json::Error| Failure::Usage(format!("{}: {e}", path.display()));
    // a bare matrix, or a fixture document whose first matrix is the target
    let value: Value = serde_json::from_str(&text).map_err(bad)?;
    let data: JsonMatrix = if value.is_array() {
        serde_json::from_value(value).map_err(bad)?
    } else {
        let fx: MatrixFixture = serde_json::from_value(value).map_err(bad)?;
        fx.matrices
            .into_iter()
            .next()
            .ok_or_else(|| Failure::Usage(format!("{}: fixture holds no matrix", path.display())))?
            .data
    };
    let m = matrix_from_json(&data)?;
    if m.shape() != (dim, dim) {
        return Err(Failure::Usage(format!(
            "target is {}x{}, expected {dim}x{dim}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(m)
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn emit(out: &OutArgs, v: &Value) -> Result<(), Failure> {
    emit_text(out, &serde_json::to_string_pretty(v).expect("json serializes"))
}

fn emit_text(out: &OutArgs, text: &str) -> Result<(), Failure> {
    match &out.out {
        Some(p) => std::fs::write(p, format!("{text}\n")).map_err(|e| Failure::Usage(format!("{}: {e}", p.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}
