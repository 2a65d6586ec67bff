use std::fs;
use std::io::{self, Read};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Deserialize;
use serde_json::{json, Value};

use clusterlie::charcluster::cluster;
use clusterlie::formations::{formation_by_name, hypercentre, hypercentre_nilpotent_fast, is_hypercentral};
use clusterlie::liealg::{matrix_p_closure, p_envelope, Subalgebra};
use clusterlie::linalg::Matrix;
use clusterlie::schema::{
    matrix_record, parse_matrix, parse_subspace, subspace_record, AlgebraModuleRecord, AlgebraRecord, ClusterRecord,
    FieldRecord, InstanceRecord, MatrixRecord,
};
use clusterlie::theorem::{
    campaign, check_theorem_instance, proof_pipeline, random_instance_budget, CampaignConfig, Instance, Status,
    DEFAULT_MAX_DIM_L, DEFAULT_MAX_DIM_V, DEFAULT_MAX_DIM_X,
};

/// Restricted Lie algebras, character clusters and hypercentral modules over finite fields.
#[derive(Parser)]
#[command(name = "clusterlie", version)]
struct Cli {
    /// Print compact instead of indented JSON.
    #[arg(long, global = true)]
    compact: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct InputArg {
    /// JSON input file; stdin when omitted or `-`.
    input: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Check the hypotheses and conclusion on one instance.
    Check(InputArg),
    /// Replay the proof steps on an instance whose hypotheses hold.
    Pipeline(InputArg),
    /// Character cluster of a module.
    Cluster(InputArg),
    /// Hypercentre of a module, over a subalgebra when one is given.
    Hypercentre(InputArg),
    /// p-closure of matrices, or p-envelope of an ordinary Lie algebra.
    Envelope(InputArg),
    /// Generate a random instance.
    Gen {
        #[arg(long, default_value_t = 3)]
        p: u64,
        #[arg(long, default_value_t = DEFAULT_MAX_DIM_L)]
        max_dim_l: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_DIM_V)]
        max_dim_v: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_DIM_X)]
        max_dim_x: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run a batch of random instances and summarise.
    Campaign {
        #[arg(long, value_delimiter = ',', default_value = "2,3,5")]
        primes: Vec<u64>,
        #[arg(long, default_value_t = 200)]
        per_prime: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_DIM_L)]
        max_dim_l: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_DIM_V)]
        max_dim_v: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_DIM_X)]
        max_dim_x: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Skip the proof replay on confirmed instances.
        #[arg(long)]
        no_pipeline: bool,
        /// List every instance in the output.
        #[arg(long)]
        outcomes: bool,
    },
}

fn read_input(arg: &InputArg) -> Result<String> {
    match &arg.input {
        Some(p) if p.as_os_str() != "-" => fs::read_to_string(p).with_context(|| format!("reading {}", p.display())),
        _ => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).context("reading stdin")?;
            Ok(s)
        }
    }
}

fn parse<T: for<'de> Deserialize<'de>>(arg: &InputArg) -> Result<T> {
    let text = read_input(arg)?;
    serde_json::from_str(&text).context("parsing input JSON")
}

/// Input for `envelope`: either generating matrices, or an algebra with an
/// optional faithful representation.
#[derive(Deserialize)]
#[serde(untagged)]
enum EnvelopeInput {
    Matrices { field: FieldRecord, matrices: Vec<MatrixRecord> },
    Algebra { algebra: AlgebraRecord, #[serde(default)] faithful: Option<Vec<MatrixRecord>> },
}

fn matrices(field: &clusterlie::gf::Field, recs: &[MatrixRecord]) -> Result<Vec<Matrix>> {
    recs.iter().map(|m| Ok(parse_matrix(field, m, m.len())?)).collect()
}

/// Runs a command; the flag says whether the result is a failure.
fn run(cmd: &Command) -> Result<(Value, bool)> {
    match cmd {
        Command::Check(arg) => {
            let inst = Instance::from_record(&parse::<InstanceRecord>(arg)?)?;
            let verdict = check_theorem_instance(&inst)?;
            let bad = verdict.status == Status::Violation;
            Ok((serde_json::to_value(verdict)?, bad))
        }
        Command::Pipeline(arg) => {
            let inst = Instance::from_record(&parse::<InstanceRecord>(arg)?)?;
            let report = proof_pipeline(&inst)?;
            let bad = !report.completed;
            Ok((serde_json::to_value(report)?, bad))
        }
        Command::Cluster(arg) => {
            let rec: AlgebraModuleRecord = parse(arg)?;
            let l = Arc::new(rec.algebra.to_algebra()?);
            let m = rec.module.to_module(&l)?;
            let c = cluster(&m, 0)?;
            Ok((
                json!({
                    "cluster": ClusterRecord::from_cluster(&c),
                    "size": c.len(),
                    "factor_dims": c.factor_dims,
                }),
                false,
            ))
        }
        Command::Hypercentre(arg) => {
            let rec: AlgebraModuleRecord = parse(arg)?;
            let l = Arc::new(rec.algebra.to_algebra()?);
            let m = rec.module.to_module(&l)?;
            let s = match &rec.subalgebra {
                Some(rows) => Subalgebra::new(l.clone(), parse_subspace(l.field(), rows, l.dim())?)?,
                None => Subalgebra::whole(l.clone()),
            };
            let formation = formation_by_name(rec.formation.as_deref().unwrap_or("nilpotent"))?;
            let r = m.restrict_to_subalgebra(&s)?;
            let (h, series) = if formation.name() == "nilpotent" {
                hypercentre_nilpotent_fast(&r)
            } else {
                hypercentre(&r, formation.as_ref(), 0)
            };
            let report = if h.is_full() { None } else { Some(is_hypercentral(&r, formation.as_ref(), 0)) };
            Ok((
                json!({
                    "hypercentral": h.is_full(),
                    "hypercentre": subspace_record(&h),
                    "series_dims": series.iter().map(|u| u.dim()).collect::<Vec<_>>(),
                    "non_central_submodule": report.as_ref().and_then(|r| r.obstruction.as_ref()).map(subspace_record),
                    "non_central_factor_dim": report.as_ref().and_then(|r| r.obstruction_dim),
                }),
                false,
            ))
        }
        Command::Envelope(arg) => {
            let input: EnvelopeInput = parse(arg)?;
            match input {
                EnvelopeInput::Matrices { field, matrices: recs } => {
                    let f = field.to_field()?;
                    let closure = matrix_p_closure(&matrices(&f, &recs)?)?;
                    Ok((
                        json!({
                            "algebra": AlgebraRecord::from_algebra(closure.algebra()),
                            "basis": closure.basis().iter().map(matrix_record).collect::<Vec<_>>(),
                        }),
                        false,
                    ))
                }
                EnvelopeInput::Algebra { algebra, faithful } => {
                    let lie = algebra.to_lie()?;
                    let reps = faithful.map(|r| matrices(lie.field(), &r)).transpose()?;
                    let env = p_envelope(&lie, reps.as_deref())?;
                    Ok((
                        json!({
                            "algebra": AlgebraRecord::from_algebra(env.algebra()),
                            "embedding": matrix_record(&env.embedding),
                            "image": subspace_record(&env.image),
                        }),
                        false,
                    ))
                }
            }
        }
        Command::Gen { p, max_dim_l, max_dim_v, max_dim_x, seed } => {
            let inst = random_instance_budget(*p, *max_dim_l, *max_dim_v, *max_dim_x, *seed)?;
            Ok((serde_json::to_value(inst.to_record())?, false))
        }
        Command::Campaign { primes, per_prime, max_dim_l, max_dim_v, max_dim_x, seed, no_pipeline, outcomes } => {
            if primes.is_empty() {
                bail!("no primes given");
            }
            let cfg = CampaignConfig {
                primes: primes.clone(),
                per_prime: *per_prime,
                max_dim_l: *max_dim_l,
                max_dim_v: *max_dim_v,
                max_dim_x: *max_dim_x,
                seed: *seed,
                pipeline: !no_pipeline,
                outcomes: *outcomes,
            };
            let summary = campaign(&cfg);
            let bad = summary.failed();
            Ok((serde_json::to_value(summary)?, bad))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let print = |v: &Value| {
        let text = if cli.compact { serde_json::to_string(v) } else { serde_json::to_string_pretty(v) };
        println!("{}", text.expect("JSON values serialize"));
    };
    match run(&cli.command) {
        Ok((value, bad)) => {
            print(&value);
            if bad {
                ExitCode::FAILURE
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            print(&json!({ "error": format!("{e:#}") }));
            ExitCode::from(2)
        }
    }
}
