use std::path::{Path as FsPath, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use geo_cli::{export, report, serve, trace_by_id, wire};
use geokernel::construction::{evaluate, BranchState, EngineError, Figure};
use geokernel::dsl::parse_bytes;
use geokernel::verify;

#[derive(Parser)]
#[command(
    name = "geo",
    version,
    about = "Ruler-and-compass constructions, loci and their checks"
)]
struct Cli {
    /// Seed for randomized verification suites.
    #[arg(long, global = true, env = "GEO_SEED", default_value_t = verify::DEFAULT_SEED)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a construction and print its protocol and coordinates.
    Run {
        file: PathBuf,
        /// Print the scene as a JSON scene frame instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Sweep a draggable point along a circle or line and record a target.
    Trace {
        file: PathBuf,
        #[arg(long)]
        mover: String,
        /// Circle or line-like object the mover travels along.
        #[arg(long)]
        path: String,
        #[arg(long)]
        target: String,
        #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u64).range(2..))]
        n: u64,
        /// Output format.
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        out: Format,
        /// Write to a file instead of stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run a verification suite, or `all`.
    Verify { suite: String },
    /// Serve websocket sessions speaking the JSON protocol.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Svg,
}

/// Failure with its exit code.
struct Fail(u8, String);

impl From<EngineError> for Fail {
    fn from(e: EngineError) -> Self {
        let code = if matches!(e, EngineError::NoDependency { .. }) {
            2
        } else {
            1
        };
        Fail(code, e.to_string())
    }
}

fn load(path: &FsPath) -> Result<Figure, Fail> {
    let bytes = std::fs::read(path).map_err(|e| Fail(1, format!("cannot read {}: {e}", path.display())))?;
    parse_bytes(&bytes).map_err(|errors| {
        let lines: Vec<String> = errors.iter().map(|e| format!("{}:{e}", path.display())).collect();
        Fail(1, lines.join("\n"))
    })
}

fn run(file: &FsPath, json: bool) -> Result<u8, Fail> {
    let fig = load(file)?;
    let scene = evaluate(&fig)?;
    if json {
        println!("{}", wire::scene_frame(&fig, &scene));
    } else {
        print!("{}", report::text(&fig, &scene));
    }
    Ok(if scene.all_exist() { 0 } else { 2 })
}

fn trace(
    file: &FsPath,
    mover: &str,
    path: &str,
    target: &str,
    n: usize,
    format: Format,
    output: Option<&FsPath>,
) -> Result<u8, Fail> {
    let fig = load(file)?;
    let state = BranchState::default();
    let poly = trace_by_id(&fig, &state, mover, path, target, n)?;
    let text = match format {
        Format::Csv => export::csv(&poly),
        Format::Svg => export::svg(&evaluate(&fig)?, &poly),
    };
    match output {
        Some(p) => std::fs::write(p, text).map_err(|e| Fail(1, format!("cannot write {}: {e}", p.display())))?,
        None => print!("{text}"),
    }
    Ok(0)
}

fn verify_cmd(suite: &str, seed: u64) -> Result<u8, Fail> {
    let reports = if suite == "all" {
        verify::run_all(seed)
    } else {
        vec![verify::run_suite(suite, seed)
            .map_err(|e| Fail(1, format!("{e}; known suites: all, {}", verify::SUITES.join(", "))))?]
    };
    for r in &reports {
        print!("{r}");
    }
    let passed = reports.iter().filter(|r| r.passed()).count();
    let secs: f64 = reports.iter().map(|r| r.elapsed.as_secs_f64()).sum();
    println!("{passed}/{} suites passed in {secs:.2} s (seed {seed})", reports.len());
    Ok(if passed == reports.len() { 0 } else { 1 })
}

fn serve_cmd(host: &str, port: u16) -> Result<u8, Fail> {
    let rt = tokio::runtime::Runtime::new().map_err(|e| Fail(1, e.to_string()))?;
    rt.block_on(async {
        let listener = tokio::net::TcpListener::bind((host, port))
            .await
            .map_err(|e| Fail(1, format!("cannot listen on {host}:{port}: {e}")))?;
        let addr = listener.local_addr().map_err(|e| Fail(1, e.to_string()))?;
        println!("listening on ws://{addr}/ws");
        let shutdown = async {
            let _ = tokio::signal::ctrl_c().await;
        };
        serve::serve(listener, shutdown)
            .await
            .map_err(|e| Fail(1, e.to_string()))?;
        Ok(0)
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run { file, json } => run(file, *json),
        Command::Trace {
            file,
            mover,
            path,
            target,
            n,
            out,
            output,
        } => trace(file, mover, path, target, *n as usize, *out, output.as_deref()),
        Command::Verify { suite } => verify_cmd(suite, cli.seed),
        Command::Serve { port, host } => serve_cmd(host, *port),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Fail(code, msg)) => {
            eprintln!("geo: {msg}");
            ExitCode::from(code)
        }
    }
}
