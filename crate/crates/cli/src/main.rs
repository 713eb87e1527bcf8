//! Command-line front end: case pipelines, starting-point enumeration,
//! root construction and the elimination trace.
//!
//! Exit code 0 means every machine-checked step of the requested run passed.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use casebook_core::approxroot::{
    build_d, build_root, sample_admissible_p, shear_to_dtilde, verify_d_valuations, CaseKind,
    RootConfig,
};
use casebook_core::casebook::{list_cases, run_case};
use casebook_core::elimination::{divide_by_principal, eliminate, generate_system};
use casebook_core::newton::Direction;
use casebook_core::rng::Rng;
use casebook_core::startpoints::{filter_by_direction, possible_starting_points, LoopBound};

#[derive(Parser)]
#[command(name = "casebook", version, about = "Newton-polygon casebook workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Case table and per-case certificate pipelines.
    Case {
        #[command(subcommand)]
        cmd: CaseCmd,
    },
    /// Combinatorial enumerations.
    Algo {
        #[command(subcommand)]
        cmd: AlgoCmd,
    },
    /// Approximate-root construction.
    Root {
        #[command(subcommand)]
        cmd: RootCmd,
    },
    /// Symbolic elimination.
    Elim {
        #[command(subcommand)]
        cmd: ElimCmd,
    },
}

#[derive(Subcommand)]
enum CaseCmd {
    /// Print the ten-row case table.
    List {
        #[arg(long)]
        json: bool,
    },
    /// Replay a case pipeline: 8-32, 9-27, 9-24, 8-28, 7-21 or 72-108.
    Run {
        id: String,
        /// Seed; defaults to $CASEBOOK_SEED or 1.
        #[arg(long)]
        seed: Option<u64>,
        /// Write the JSON report here.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Write collected SVG renderings into this directory.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum AlgoCmd {
    /// Enumerate possible starting corners for an edge ending at (a/l, b).
    StartingPoints(StartingPointsArgs),
}

#[derive(Args)]
struct StartingPointsArgs {
    #[arg(long)]
    l: i64,
    #[arg(long)]
    a: i64,
    #[arg(long)]
    b: i64,
    /// Keep only candidates on this direction, e.g. --dir 1,-2
    #[arg(long)]
    dir: Option<String>,
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum RootCmd {
    /// Build the approximate square root for a random admissible input.
    Build {
        /// 9-27 or 7-21.
        #[arg(long = "case")]
        case: String,
        #[arg(long, default_value_t = 11)]
        depth: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum ElimCmd {
    /// Generate the coefficient system and run the elimination.
    Run {
        /// 9-27 or 7-21.
        #[arg(long = "case")]
        case: String,
        /// Write the full trace (every intermediate polynomial) here.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
}

fn default_seed(seed: Option<u64>) -> u64 {
    seed.or_else(|| {
        std::env::var("CASEBOOK_SEED")
            .ok()
            .and_then(|s| s.parse().ok())
    })
    .unwrap_or(1)
}

fn case_kind(id: &str) -> Result<CaseKind, String> {
    match id {
        "9-27" | "9-24" => Ok(CaseKind::Nine27),
        "7-21" => Ok(CaseKind::Seven21),
        other => Err(format!("no root/elimination family for case {other:?}")),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<bool, Box<dyn std::error::Error>> {
    match cli.command {
        Command::Case { cmd } => match cmd {
            CaseCmd::List { json } => {
                let table = list_cases();
                if json {
                    println!("{}", serde_json::to_string_pretty(&table)?);
                } else {
                    println!("{:<10} {:<8} {:<8} {:<17} notes", "A0", "(m,n)", "max", "status");
                    for row in table.as_array().unwrap() {
                        println!(
                            "{:<10} {:<8} {:<8} {:<17} {}",
                            format!("{}", row["A0"]),
                            format!("{}", row["mn"]),
                            format!("{}", row["max_deg"]),
                            row["status"].as_str().unwrap(),
                            row["sources"].as_str().unwrap()
                        );
                    }
                }
                Ok(true)
            }
            CaseCmd::Run { id, seed, json, svg } => {
                let seed = default_seed(seed);
                let report = run_case(&id, seed)?;
                if let Some(path) = json {
                    std::fs::write(&path, serde_json::to_string_pretty(&report.to_json())?)?;
                }
                if let Some(dir) = svg {
                    std::fs::create_dir_all(&dir)?;
                    for (name, content) in &report.svgs {
                        std::fs::write(dir.join(format!("{name}.svg")), content)?;
                    }
                }
                print!("{}", report.render_text());
                Ok(report.all_checks_pass())
            }
        },
        Command::Algo { cmd } => match cmd {
            AlgoCmd::StartingPoints(args) => {
                let mut cands =
                    possible_starting_points(args.l, args.a, args.b, LoopBound::Inclusive)?;
                if let Some(d) = &args.dir {
                    let parts: Vec<i64> = d
                        .split(',')
                        .map(|t| t.trim().parse())
                        .collect::<Result<_, _>>()?;
                    if parts.len() != 2 {
                        return Err("expected --dir RHO,SIGMA".into());
                    }
                    let dir = Direction::new(parts[0], parts[1])?;
                    cands = filter_by_direction(&cands, &dir);
                }
                if args.json {
                    let v: Vec<_> = cands.iter().map(|c| c.to_json()).collect();
                    println!("{}", serde_json::to_string_pretty(&json!(v))?);
                } else {
                    println!(
                        "{:<10} {:<10} {:<5} {:<5} {:<5} branch",
                        "(c/l, d)", "dir", "s", "N1", "N2"
                    );
                    for c in &cands {
                        println!(
                            "{:<10} {:<10} {:<5} {:<5} {:<5} {:?}",
                            format!("({}/{}, {})", c.c, c.l, c.d),
                            format!("({},{})", c.direction.rho, c.direction.sigma),
                            c.s,
                            c.n1,
                            c.n2,
                            c.accepted_by
                        );
                    }
                }
                Ok(true)
            }
        },
        Command::Root { cmd } => match cmd {
            RootCmd::Build { case, depth, seed, json } => {
                let kind = case_kind(&case)?;
                let seed = default_seed(seed);
                let mut rng = Rng::new(seed);
                let p = sample_admissible_p(kind, &mut rng);
                let cfg = RootConfig::new(kind, depth, p)?;
                let root = build_root(&cfg)?;
                let ds = build_d(&root)?;
                let dt = shear_to_dtilde(&ds)?;
                let cert = verify_d_valuations(kind, &dt)?;
                let out = json!({
                    "case": case,
                    "depth": depth,
                    "seed": seed,
                    "valuations": root.certs.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
                    "d_tilde": dt.iter()
                        .map(|(k, p)| (k.to_string(), p.to_text("y")))
                        .collect::<BTreeMap<String, String>>(),
                    "bounds": cert.to_json(),
                });
                match json {
                    Some(path) => std::fs::write(&path, serde_json::to_string_pretty(&out)?)?,
                    None => println!("{}", serde_json::to_string_pretty(&out)?),
                }
                Ok(true)
            }
        },
        Command::Elim { cmd } => match cmd {
            ElimCmd::Run { case, trace } => {
                let kind = case_kind(&case)?;
                let sys = generate_system(kind)?;
                let tr = eliminate(&sys)?;
                let cofactor = divide_by_principal(&tr)?;
                let out = json!({
                    "case": case,
                    "system": sys.equations.iter()
                        .map(|(l, e)| json!({"row": l, "equation": e.to_text()}))
                        .collect::<Vec<_>>(),
                    "trace": tr.to_json(),
                    "divides_principal": true,
                    "cofactor": cofactor.to_text(),
                });
                match trace {
                    Some(path) => std::fs::write(&path, serde_json::to_string_pretty(&out)?)?,
                    None => println!("{}", serde_json::to_string_pretty(&out)?),
                }
                Ok(true)
            }
        },
    }
}
