//! Experiment runner: every subcommand evaluates one reproducible check
//! suite and writes `<out-dir>/<name>.json` (plus a CSV table where the
//! experiment has one). Exit code 0 means all checks passed, 1 means a
//! check failed, 2 means a usage or configuration error.

mod config;
mod experiments;
mod report;
mod schema;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use config::ExperimentConfig;
use report::Report;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Parser)]
#[command(name = "lindyn", version, about = "linear-dynamics experiment runner")]
struct Cli {
    /// TOML experiment configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// RNG seed; overrides the config file.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory; defaults to $LINDYN_OUT_DIR, then the current
    /// directory.
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// Report format; `csv` additionally writes the experiment's table.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Worker threads; never affects the report contents.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Epsilon-net coverage of a single operator orbit.
    OrbitCoverage,
    /// Coset structure of an orbit coupled with a finite rotation group.
    CoupledOrbit,
    /// Closed subgroup generated by the powers of a torus point.
    TorusClosure,
    /// Winding-number properties over seeded random paths.
    WindingProps {
        #[arg(long)]
        seeds: Option<u64>,
    },
    /// Quantitative winding bound for the scaled-segment construction.
    LemmaMapDemo {
        #[arg(long)]
        z_turns: Option<f64>,
        #[arg(long)]
        m: Option<u64>,
        #[arg(long)]
        samples: Option<u64>,
    },
    /// Residual curves of the supercyclicity criterion for a shift witness.
    ScCriterion,
    /// Direct-sum witness combination and its exact residual maxima.
    CombineWitnesses,
    /// Positive-ray dichotomy over the fixture table.
    RplusClassify,
    /// Finite-ray obstruction from a unimodular dual eigenvalue.
    RayObstruction,
    /// Algebraic identities of the one-dimensional extension.
    SuIdentities {
        #[arg(long)]
        seeds: Option<u64>,
    },
    /// Krylov rank of a single operator/vector pair.
    Krylov,
    /// Vandermonde span checks over seeded eigenvalue tuples.
    Vandermonde {
        #[arg(long)]
        seeds: Option<u64>,
    },
    /// Distinct-product cyclicity criterion against the Krylov oracle.
    DirectSumCyclicity {
        #[arg(long)]
        trials: Option<u64>,
    },
    /// Ratio structure of direct-sum orbits of scalar multiples.
    RatioStructure {
        #[arg(long)]
        seeds: Option<u64>,
    },
    /// Intertwining residual decay and pairing annihilation on the grid.
    Volterra,
    /// Growth table for the weighted binomial sums.
    Asymptotics {
        /// Values of n; overrides the config list.
        #[arg(long, num_args = 1..)]
        n: Vec<u64>,
    },
    /// Rank deficiency of the semigroup example along a parameter sweep.
    SemigroupEx1,
    /// Validate a report file against the published schema.
    ValidateReport {
        #[arg(long)]
        file: PathBuf,
    },
}

fn usage_error(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn override_u64(cfg: &mut ExperimentConfig, key: &str, value: Option<u64>) {
    if let Some(v) = value {
        cfg.params.insert(key.to_string(), toml::Value::Integer(v as i64));
    }
}

fn override_f64(cfg: &mut ExperimentConfig, key: &str, value: Option<f64>) {
    if let Some(v) = value {
        cfg.params.insert(key.to_string(), toml::Value::Float(v));
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    if let Command::ValidateReport { file } = &cli.command {
        return match schema::validate_report_file(file) {
            Ok(()) => {
                println!("{}: valid", file.display());
                ExitCode::SUCCESS
            }
            Err(e) if e.starts_with("cannot read") => usage_error(&e),
            Err(e) => {
                eprintln!("{}: {e}", file.display());
                ExitCode::from(1)
            }
        };
    }

    let mut cfg = match &cli.config {
        Some(path) => match ExperimentConfig::load(path) {
            Ok(cfg) => cfg,
            Err(e) => return usage_error(&e),
        },
        None => ExperimentConfig::default(),
    };
    let seed = cli.seed.or(cfg.seed).unwrap_or(0);
    let jobs = cli.jobs.max(1);
    let out_dir = cli
        .out_dir
        .clone()
        .or_else(|| std::env::var_os("LINDYN_OUT_DIR").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));

    let (name, outcome) = match &cli.command {
        Command::OrbitCoverage => ("orbit-coverage", experiments::orbit_coverage(&cfg, seed, jobs)),
        Command::CoupledOrbit => ("coupled-orbit", experiments::coupled_orbit_run(&cfg, seed, jobs)),
        Command::TorusClosure => ("torus-closure", experiments::torus_closure(&cfg, seed, jobs)),
        Command::WindingProps { seeds } => {
            override_u64(&mut cfg, "seeds", *seeds);
            ("winding-props", experiments::winding_props(&cfg, seed, jobs))
        }
        Command::LemmaMapDemo { z_turns, m, samples } => {
            override_f64(&mut cfg, "z_turns", *z_turns);
            override_u64(&mut cfg, "m", *m);
            override_u64(&mut cfg, "samples", *samples);
            ("lemma-map-demo", experiments::lemma_map(&cfg, seed, jobs))
        }
        Command::ScCriterion => ("sc-criterion", experiments::sc_criterion(&cfg, seed, jobs)),
        Command::CombineWitnesses => (
            "combine-witnesses",
            experiments::combine_witnesses_run(&cfg, seed, jobs),
        ),
        Command::RplusClassify => ("rplus-classify", experiments::rplus_classify(&cfg, seed, jobs)),
        Command::RayObstruction => ("ray-obstruction", experiments::ray_obstruction(&cfg, seed, jobs)),
        Command::SuIdentities { seeds } => {
            override_u64(&mut cfg, "seeds", *seeds);
            ("su-identities", experiments::su_identities(&cfg, seed, jobs))
        }
        Command::Krylov => ("krylov", experiments::krylov(&cfg, seed, jobs)),
        Command::Vandermonde { seeds } => {
            override_u64(&mut cfg, "seeds", *seeds);
            ("vandermonde", experiments::vandermonde(&cfg, seed, jobs))
        }
        Command::DirectSumCyclicity { trials } => {
            override_u64(&mut cfg, "trials", *trials);
            (
                "direct-sum-cyclicity",
                experiments::direct_sum_cyclicity_run(&cfg, seed, jobs),
            )
        }
        Command::RatioStructure { seeds } => {
            override_u64(&mut cfg, "seeds", *seeds);
            ("ratio-structure", experiments::ratio_structure(&cfg, seed, jobs))
        }
        Command::Volterra => ("volterra", experiments::volterra(&cfg, seed, jobs)),
        Command::Asymptotics { n } => ("asymptotics", experiments::asymptotics(&cfg, seed, n)),
        Command::SemigroupEx1 => ("semigroup-ex1", experiments::semigroup_ex1(&cfg, seed, jobs)),
        Command::ValidateReport { .. } => unreachable!("handled above"),
    };

    let (pass, results, table) = match outcome {
        Ok(out) => out,
        Err(e) => return usage_error(&format!("{name}: {e}")),
    };
    if cli.format == Format::Csv && table.is_none() {
        return usage_error(&format!("{name} has no CSV table"));
    }

    let report = Report::new(name, seed, cfg.echo(seed), pass, results);
    let path = match report.write_json(&out_dir) {
        Ok(path) => path,
        Err(e) => return usage_error(&format!("cannot write report: {e}")),
    };
    if cli.format == Format::Csv {
        if let Some(table) = table {
            if let Err(e) = table.write(&out_dir, name) {
                return usage_error(&format!("cannot write table: {e}"));
            }
        }
    }
    println!("{name}: {} ({})", if pass { "pass" } else { "FAIL" }, path.display());
    if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
