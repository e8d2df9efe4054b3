use std::collections::BTreeMap;
use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use vqc_core::compile::{compile, CompileOptions, Compiled, Mode};
use vqc_core::generate::{gen_qaoa, gen_ucc, QaoaGraph};
use vqc_core::pauli::{emit_kernel, parse_kernel, Kernel};
use vqc_core::qasm::to_qasm;
use vqc_core::synth::SynthConfig;
use vqc_core::topology::{topology_by_name, CouplingGraph, Mapping};

#[derive(Parser)]
#[command(name = "vqc", version, about = "Compile Pauli-string kernels onto coupling graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compile a kernel file to QASM and report metrics.
    Compile(CompileArgs),
    /// Write a random UCC-style kernel.
    GenUcc(GenUccArgs),
    /// Write a QAOA max-cut kernel over a random or regular graph.
    GenQaoa(GenQaoaArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Switch {
    On,
    Off,
}

#[derive(clap::Args)]
struct CompileArgs {
    #[arg(long)]
    input: PathBuf,
    /// `linear:N`, `grid:RxC`, `heavyhex[:RxC]`, `sycamore[:RxC]`, or a graph file.
    #[arg(long, default_value = "heavyhex")]
    topology: String,
    /// SWAP weight in the attachment score.
    #[arg(long, default_value_t = 3.0)]
    w: f64,
    /// Scheduler lookahead.
    #[arg(long, default_value_t = 10)]
    k: usize,
    #[arg(long, default_value = "tetris")]
    mode: Mode,
    #[arg(long, value_enum, default_value = "on")]
    bridge: Switch,
    /// Recorded in the CSV row; compilation itself is deterministic.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Value bound to every angle symbol in the QASM output.
    #[arg(long, default_value_t = 1.0)]
    theta: f64,
    /// File with one physical index per logical qubit.
    #[arg(long)]
    initial_mapping: Option<PathBuf>,
    #[arg(long)]
    qasm_out: Option<PathBuf>,
    /// JSON when the path ends in `.json`, `key=value` lines otherwise.
    #[arg(long)]
    report_out: Option<PathBuf>,
    /// Appends one row, writing the header if the file is new.
    #[arg(long)]
    csv_out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct GenUccArgs {
    #[arg(long)]
    n: usize,
    /// Defaults to n^2.
    #[arg(long)]
    blocks: Option<usize>,
    #[arg(long, default_value_t = 0.0)]
    single_fraction: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphKind {
    Random,
    Regular,
}

#[derive(clap::Args)]
struct GenQaoaArgs {
    #[arg(long, value_enum)]
    kind: GraphKind,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0.1)]
    density: f64,
    #[arg(long, default_value_t = 3)]
    degree: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

fn load_topology(spec: &str) -> Result<CouplingGraph> {
    if let Ok(g) = topology_by_name(spec) {
        return Ok(g);
    }
    let path = Path::new(spec);
    if !path.exists() {
        bail!("'{spec}' is neither a known topology nor a file");
    }
    let text = fs::read_to_string(path).with_context(|| format!("reading {spec}"))?;
    CouplingGraph::parse(&text).with_context(|| format!("parsing {spec}"))
}

fn load_kernel(path: &Path) -> Result<Kernel> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_kernel(&text).with_context(|| format!("parsing {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

const CSV_HEADER: &str = "input,topology,mode,w,k,bridge,seed,logical_cnots_before,canceled_cnots,gcr,\
logical_cnots,swap_cnots,cnot_count,swap_count,bridges,depth,duration,fidelity_proxy";

fn csv_row(args: &CompileArgs, out: &Compiled) -> String {
    let r = &out.report;
    let bridge = matches!(args.bridge, Switch::On);
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
        args.input.display(),
        args.topology,
        args.mode,
        args.w,
        args.k,
        bridge,
        args.seed,
        r.logical_cnots_before,
        r.canceled_cnots,
        r.gcr.map_or_else(String::new, |g| g.to_string()),
        r.logical_cnots_after,
        r.swap_induced_cnots,
        r.cnot_count,
        r.swap_count,
        r.bridges,
        r.depth,
        r.duration,
        r.fidelity_proxy
    )
}

fn append_csv(path: &Path, row: &str) -> Result<()> {
    let fresh = !path.exists();
    let mut f = OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .with_context(|| format!("opening {}", path.display()))?;
    if fresh {
        writeln!(f, "{CSV_HEADER}")?;
    }
    writeln!(f, "{row}")?;
    Ok(())
}

fn run_compile(args: &CompileArgs) -> Result<()> {
    let kernel = load_kernel(&args.input)?;
    let graph = load_topology(&args.topology)?;
    let initial_mapping = match &args.initial_mapping {
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            Some(Mapping::parse(&text, graph.num_qubits())?)
        }
        None => None,
    };
    let opts = CompileOptions {
        mode: args.mode,
        synth: SynthConfig {
            swap_weight: args.w,
            bridging: matches!(args.bridge, Switch::On),
            ..SynthConfig::default()
        },
        lookahead_k: args.k,
        initial_mapping,
        ..CompileOptions::default()
    };
    let out = compile(&kernel, &graph, &opts)?;

    if let Some(p) = &args.qasm_out {
        write(p, &to_qasm(&out.circuit, &BTreeMap::new(), args.theta))?;
    }
    let kv = out.report.to_key_value();
    match &args.report_out {
        Some(p) if p.extension().is_some_and(|e| e == "json") => write(p, &out.report.to_json())?,
        Some(p) => write(p, &kv)?,
        None => {}
    }
    if let Some(p) = &args.csv_out {
        append_csv(p, &csv_row(args, &out))?;
    }
    print!("{kv}");
    Ok(())
}

fn run() -> Result<()> {
    match Cli::parse().command {
        Command::Compile(args) => run_compile(&args),
        Command::GenUcc(a) => {
            let kernel = gen_ucc(a.n, a.blocks.unwrap_or(a.n * a.n), a.single_fraction, a.seed)?;
            write(&a.out, &emit_kernel(&kernel))
        }
        Command::GenQaoa(a) => {
            let graph = match a.kind {
                GraphKind::Random => QaoaGraph::Random { density: a.density },
                GraphKind::Regular => QaoaGraph::Regular { degree: a.degree },
            };
            write(&a.out, &emit_kernel(&gen_qaoa(graph, a.n, a.seed)?))
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
