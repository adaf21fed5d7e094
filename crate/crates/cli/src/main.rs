use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use plane_monodromy::graph::direct_and_order;
use plane_monodromy::gyrograph::build_gyrograph;
use plane_monodromy::io::document::Id;
use plane_monodromy::io::pipeline::{nearest_generic, run_decorated};
use plane_monodromy::io::{graph_dot, render_report, Artifact, ChainMatrix, Emit, GraphDocument, OutputFormat, RunConfig};
use plane_monodromy::singular::{resolve_polynomial, AdapterConfig, Mode};
use plane_monodromy::{DecoratedGraph, Error, Turn};

#[derive(Parser)]
#[command(name = "plane-monodromy", version, about = "Integral monodromy and variation of a plane curve singularity")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Graph document (JSON, or TOML by extension).
    #[arg(long, global = true, conflicts_with = "polynomial")]
    graph: Option<PathBuf>,
    /// Polynomial in x and y, resolved through Singular or a recorded fixture.
    #[arg(long, global = true)]
    polynomial: Option<String>,
    /// Angle as a fraction of a full turn, in [0, 1).
    #[arg(long, global = true, default_value = "1/100", value_parser = parse_theta)]
    theta: Turn,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Comma-separated sections: graph, spine, nongeneric, matrices,
    /// homology, zeta, verify. Defaults depend on the subcommand.
    #[arg(long, global = true, value_delimiter = ',')]
    emit: Option<Vec<String>>,
    /// Write one file per artifact here instead of printing.
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// Comma-separated arrow ids, smallest branch first.
    #[arg(long, global = true, value_delimiter = ',')]
    branch_order: Option<Vec<String>>,
    #[arg(long, global = true, default_value = "Singular")]
    singular: PathBuf,
    #[arg(long, global = true, value_enum, default_value_t = CasMode::Auto)]
    cas_mode: CasMode,
    /// Seconds before the Singular process is killed.
    #[arg(long, global = true, default_value_t = 60)]
    cas_timeout: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Latex,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum CasMode {
    Fixture,
    Live,
    Auto,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Decorations and the table (b, c0, m, h, weight, dual weight).
    Analyze,
    /// Candidate non-generic angles and actual saddle connections.
    Nongeneric,
    /// B0 and B1 on the chain groups.
    Monodromy,
    /// The variation matrix V.
    Variation,
    /// The differential d1.
    Differential,
    /// Smith form of d1, M_H, Var_H and the identity checks.
    Homology,
    /// Zeta function from the graph against the characteristic polynomial.
    Zeta,
    /// DOT drawings of the resolution graph (and the spine with `--emit spine`).
    Render,
}

fn parse_theta(s: &str) -> Result<Turn, String> {
    let (n, d) = s.trim().split_once('/').unwrap_or((s.trim(), "1"));
    let n: i128 = n.trim().parse().map_err(|_| format!("`{s}` is not a fraction like 1/100"))?;
    let d: i128 = d.trim().parse().map_err(|_| format!("`{s}` is not a fraction like 1/100"))?;
    if d <= 0 || n < 0 || n >= d {
        return Err(format!("theta {s} must lie in [0, 1)"));
    }
    Ok(Turn::from_fraction(n, d))
}

fn load(common: &Common) -> Result<GraphDocument, Error> {
    let mut doc = match (&common.graph, &common.polynomial) {
        (Some(path), _) => GraphDocument::read(path)?,
        (None, Some(poly)) => {
            let cfg = AdapterConfig {
                binary: common.singular.clone(),
                timeout: Duration::from_secs(common.cas_timeout),
                mode: match common.cas_mode {
                    CasMode::Fixture => Mode::Fixture,
                    CasMode::Live => Mode::Live,
                    CasMode::Auto => Mode::Auto,
                },
            };
            resolve_polynomial(poly, &cfg)?
        }
        (None, None) => return Err(Error::SchemaError("one of --graph or --polynomial is required".into())),
    };
    if let Some(order) = &common.branch_order {
        doc.branch_order = Some(order.iter().map(|s| Id::from(s.as_str())).collect());
    }
    Ok(doc)
}

fn config(command: Command, common: &Common) -> Result<RunConfig, Error> {
    let defaults: &[Emit] = match command {
        Command::Analyze => &[Emit::Graph],
        Command::Nongeneric => &[Emit::Nongeneric],
        Command::Monodromy | Command::Variation | Command::Differential => &[Emit::Matrices],
        Command::Homology => &[Emit::Homology, Emit::Verify],
        Command::Zeta => &[Emit::Zeta],
        Command::Render => &[Emit::Graph],
    };
    let mut cfg = RunConfig::with_emit(common.theta, defaults);
    if let Some(list) = &common.emit {
        cfg.emit = list.iter().map(|s| Emit::parse(s.trim())).collect::<Result<_, _>>()?;
    }
    let only = |c: ChainMatrix| BTreeSet::from([c]);
    match command {
        Command::Monodromy => cfg.chain_matrices = only(ChainMatrix::Monodromy),
        Command::Variation => cfg.chain_matrices = only(ChainMatrix::Variation),
        Command::Differential => cfg.chain_matrices = only(ChainMatrix::Differential),
        _ => {}
    }
    Ok(cfg)
}

fn render_dot(dg: &DecoratedGraph, cfg: &RunConfig) -> Result<Vec<Artifact>, Error> {
    let mut out = Vec::new();
    if cfg.emit.contains(&Emit::Graph) {
        out.push(Artifact { name: "graph".into(), contents: graph_dot(dg) });
    }
    if cfg.emit.contains(&Emit::Spine) {
        let gg = build_gyrograph(dg, cfg.theta)?;
        out.push(Artifact { name: "spine".into(), contents: gg.to_dot() });
    }
    Ok(out)
}

fn emit(artifacts: &[Artifact], extension: &str, out_dir: Option<&Path>) -> Result<(), Error> {
    let io = |e: std::io::Error| Error::Io(e.to_string());
    match out_dir {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(io)?;
            for a in artifacts {
                let path = dir.join(format!("{}.{extension}", a.name));
                std::fs::write(&path, &a.contents).map_err(io)?;
                println!("{}", path.display());
            }
        }
        None if artifacts.len() == 1 => print!("{}", artifacts[0].contents),
        None => {
            for a in artifacts {
                println!("# {}", a.name);
                print!("{}", a.contents);
            }
        }
    }
    Ok(())
}

fn execute(cli: &Cli) -> Result<(), (Error, Option<DecoratedGraph>)> {
    let doc = load(&cli.common).map_err(|e| (e, None))?;
    let graph = doc.to_graph().map_err(|e| (e, None))?;
    let dg = direct_and_order(&graph).map_err(|e| (e, None))?;
    let fail = |e: Error| (e, Some(dg.clone()));
    let cfg = config(cli.command, &cli.common).map_err(fail)?;
    let out_dir = cli.common.out_dir.as_deref();
    if let Command::Render = cli.command {
        let artifacts = render_dot(&dg, &cfg).map_err(fail)?;
        return emit(&artifacts, "dot", out_dir).map_err(fail);
    }
    let format = match cli.common.format {
        Format::Json => OutputFormat::Json,
        Format::Latex => OutputFormat::Latex,
        Format::Csv => OutputFormat::Csv,
    };
    let report = run_decorated(&dg, &cfg).map_err(fail)?;
    let artifacts = render_report(&report, format).map_err(fail)?;
    emit(&artifacts, format.extension(), out_dir).map_err(fail)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err((e, dg)) => {
            let mut body = serde_json::json!({ "error": e.kind(), "message": e.to_string() });
            if let (Error::NonGenericAngle { theta, .. }, Some(dg)) = (&e, &dg) {
                if let Some(t) = nearest_generic(dg, *theta) {
                    body["suggested_theta"] = serde_json::Value::String(t.to_string());
                }
            }
            eprintln!("{body}");
            ExitCode::FAILURE
        }
    }
}
