use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::parser::ValueSource;
use clap::{CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};

use partial_match::experiment::{checks, run_experiment_with_threads, uniform_query_grid, ExperimentKind, ExperimentSpec, TreeFlavor};
use partial_match::kdtree::Axis;
use partial_match::limitproc::Variant;
use partial_match::output::{emit_csv, emit_plot_data, Table};
use partial_match::tables;
use partial_match::Error;

/// Partial-match query costs in random quadtrees and 2-d trees.
///
/// Settings may also come from `--config FILE` with one `key = value` per
/// line (keys are flag names without dashes); flags given on the command
/// line take precedence.
#[derive(Parser, Debug)]
#[command(name = "partial-match", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Base seed of all random streams.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Worker threads (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Output file (default: stdout).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Key-value config file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Csv,
    Plot,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Tree {
    Quad,
    Kd,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RootAxis {
    V,
    H,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum VariantArg {
    Quad,
    Kd,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print all derived constants.
    Constants,
    /// Moments of the marginal factor.
    Moments {
        #[arg(long, default_value_t = 10)]
        max_order: usize,
    },
    /// Second-moment iterates K^n(h^2) against their limit.
    SecondMoment {
        #[arg(long, default_value_t = 10)]
        iters: usize,
        #[arg(long, default_value_t = 513)]
        grid: usize,
    },
    /// Partial-match cost of random trees at one query line.
    SimulateCost {
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long, default_value_t = 0.5)]
        s: f64,
        /// Use a Poisson(T) number of points instead of n.
        #[arg(long, value_name = "T")]
        poisson: Option<f64>,
        #[arg(long, value_enum, default_value_t = Tree::Quad)]
        tree: Tree,
        #[arg(long, value_enum, default_value_t = RootAxis::V)]
        root_axis: RootAxis,
        #[arg(long, default_value_t = 1)]
        replications: u64,
    },
    /// Exact cost profile of one random tree.
    Profile {
        #[arg(long, default_value_t = 100)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Tree::Quad)]
        tree: Tree,
        #[arg(long, value_enum, default_value_t = RootAxis::V)]
        root_axis: RootAxis,
    },
    /// Limit-process approximant Z_n: a path, or samples at one s.
    SimulateLimit {
        #[arg(long, default_value_t = 10)]
        depth: u32,
        #[arg(long, default_value_t = 257)]
        grid: usize,
        #[arg(long, value_enum, default_value_t = VariantArg::Quad)]
        variant: VariantArg,
        /// Sample Z_n(s) over this many environments instead of a path.
        #[arg(long)]
        replications: Option<u64>,
        #[arg(long, default_value_t = 0.5)]
        s: f64,
    },
    /// Seeded Monte Carlo experiment.
    Experiment {
        #[arg(long, value_parser = parse_kind)]
        kind: ExperimentKind,
        /// Tree sizes, comma separated and increasing.
        #[arg(long, value_delimiter = ',')]
        n: Option<Vec<usize>>,
        /// Poisson intensity.
        #[arg(long)]
        t: Option<f64>,
        #[arg(long)]
        replications: Option<u64>,
        /// Number of equally spaced query positions.
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long)]
        s: Option<f64>,
        /// Approximant levels, comma separated.
        #[arg(long, value_delimiter = ',')]
        depths: Option<Vec<u32>>,
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long, value_enum, default_value_t = Tree::Quad)]
        tree: Tree,
        #[arg(long, value_enum, default_value_t = RootAxis::V)]
        root_axis: RootAxis,
        #[arg(long, value_enum, default_value_t = VariantArg::Quad)]
        variant: VariantArg,
        /// Evaluate the tolerance checks; exit 4 if any fails.
        #[arg(long)]
        check: bool,
    },
    /// Maximal cell width and minimal boundary gap of the limit partition.
    Diagnostics {
        #[arg(long, default_value_t = 6)]
        depth: u32,
        #[arg(long, default_value_t = 1)]
        replications: u64,
    },
}

fn parse_kind(s: &str) -> Result<ExperimentKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn flavor(tree: Tree, axis: RootAxis) -> TreeFlavor {
    match (tree, axis) {
        (Tree::Quad, _) => TreeFlavor::Quad,
        (Tree::Kd, RootAxis::V) => TreeFlavor::Kd(Axis::Vertical),
        (Tree::Kd, RootAxis::H) => TreeFlavor::Kd(Axis::Horizontal),
    }
}

fn variant(v: VariantArg) -> Variant {
    match v {
        VariantArg::Quad => Variant::Quad,
        VariantArg::Kd => Variant::Kd,
    }
}

fn read_config(path: &Path) -> Result<BTreeMap<String, String>, Error> {
    let text = std::fs::read_to_string(path)?;
    let mut map = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::InvalidSpec(format!("config line {}: expected key = value", i + 1)))?;
        map.insert(k.trim().replace('_', "-"), v.trim().to_string());
    }
    Ok(map)
}

/// Appends config entries not already given as flags and parses again.
fn parse_with_config(mut argv: Vec<String>) -> Result<Cli, Error> {
    let matches = Cli::command().args_override_self(true).get_matches_from(&argv);
    let cli = Cli::from_arg_matches(&matches).map_err(|e| e.exit()).expect("exits on error");
    let Some(path) = cli.config.clone() else {
        return Ok(cli);
    };
    let (_, sub) = matches.subcommand().expect("subcommand is required");
    for (key, value) in read_config(&path)? {
        let id = key.replace('-', "_");
        let source = match sub.try_contains_id(&id) {
            Ok(_) => sub.value_source(&id),
            Err(_) => return Err(Error::InvalidSpec(format!("unknown config key '{key}'"))),
        };
        if source == Some(ValueSource::CommandLine) || key == "config" {
            continue;
        }
        match value.as_str() {
            "true" => argv.push(format!("--{key}")),
            "false" => {}
            _ => argv.extend([format!("--{key}"), value]),
        }
    }
    let matches = Cli::command().args_override_self(true).get_matches_from(&argv);
    Ok(Cli::from_arg_matches(&matches).map_err(|e| e.exit()).expect("exits on error"))
}

fn emit(cli: &Cli, table: &Table) -> Result<(), Error> {
    match cli.format {
        Format::Csv => emit_csv(table, cli.out.as_deref()),
        Format::Plot => emit_plot_data(table, cli.out.as_deref()),
    }
}

fn run(cli: &Cli) -> Result<ExitCode, Error> {
    let seed = cli.seed;
    let table = match &cli.command {
        Command::Constants => tables::constants_table(),
        Command::Moments { max_order } => tables::moments_table(*max_order)?,
        Command::SecondMoment { iters, grid } => tables::second_moment_table(*iters, *grid)?,
        Command::SimulateCost {
            n,
            s,
            poisson,
            tree,
            root_axis,
            replications,
        } => tables::cost_samples(flavor(*tree, *root_axis), *n, *poisson, *s, *replications, seed)?,
        Command::Profile { n, tree, root_axis } => tables::profile_table(flavor(*tree, *root_axis), *n, seed)?,
        Command::SimulateLimit {
            depth,
            grid,
            variant: v,
            replications,
            s,
        } => match replications {
            Some(m) => tables::limit_samples_table(*depth, *s, variant(*v), *m, seed)?,
            None => tables::limit_path_table(*depth, *grid, variant(*v), seed)?,
        },
        Command::Diagnostics { depth, replications } => tables::diagnostics_table(*depth, *replications, seed)?,
        Command::Experiment {
            kind,
            n,
            t,
            replications,
            grid,
            s,
            depths,
            epsilon,
            tree,
            root_axis,
            variant: v,
            check,
        } => {
            let mut spec = ExperimentSpec::new(*kind);
            spec.seed = seed;
            spec.tree = flavor(*tree, *root_axis);
            spec.variant = variant(*v);
            spec.output = cli.out.clone();
            if let Some(n) = n {
                spec.sizes = n.clone();
            }
            if let Some(t) = t {
                spec.t = *t;
            }
            if let Some(m) = replications {
                spec.replications = *m;
            }
            if let Some(g) = grid {
                spec.grid = uniform_query_grid(*g);
            }
            if let Some(s) = s {
                spec.s = *s;
            }
            if let Some(d) = depths {
                spec.depths = d.clone();
            }
            if let Some(e) = epsilon {
                spec.epsilon = *e;
            }
            let table = run_experiment_with_threads(&spec, cli.threads)?;
            emit(cli, &table)?;
            if *check {
                let mut ok = true;
                for c in checks(&spec, &table)? {
                    eprintln!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
                    ok &= c.passed;
                }
                if !ok {
                    return Ok(ExitCode::from(4));
                }
            }
            return Ok(ExitCode::SUCCESS);
        }
    };
    emit(cli, &table)?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let result = parse_with_config(argv).and_then(|cli| run(&cli));
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::CapExceeded { .. } => 3,
                Error::Io(_) => 1,
                _ => 2,
            })
        }
    }
}
