use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use seqpairs_cli::config::{system_spec, Config, ConfigError};
use seqpairs_cli::run::{run_config, RunOptions};
use seqpairs_cli::{bundled, selfcheck};
use seqpairs_core::panel::acceptance_panel;

#[derive(Parser)]
#[command(name = "seqpairs", version, about = "Exact experiments on sequence entropy, independence and mean-sensitivity pairs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a config file, or a shipped one given as `bundled:NAME`.
    Run {
        config: String,
        #[arg(long, default_value = "out")]
        out_dir: PathBuf,
        /// Derive every seed of the config from this one.
        #[arg(long)]
        seed_override: Option<u64>,
        #[arg(long)]
        threads: Option<usize>,
        /// Fill the runtime_ms column; reports then differ between runs.
        #[arg(long)]
        timing: bool,
    },
    /// Print the reference panel as config TOML.
    ListPanel,
    /// Run the acceptance checks.
    Selfcheck,
}

fn load(source: &str) -> Result<(String, String), ConfigError> {
    if let Some(name) = source.strip_prefix("bundled:") {
        let text = bundled::get(name).ok_or_else(|| {
            let names: Vec<&str> = bundled::CONFIGS.iter().map(|(n, _)| *n).collect();
            ConfigError::new("config", format!("no bundled config {name:?}; available: {}", names.join(", ")))
        })?;
        return Ok((name.to_string(), text.to_string()));
    }
    let text = std::fs::read_to_string(source).map_err(|e| ConfigError::new("config", format!("{source}: {e}")))?;
    let stem = Path::new(source).file_stem().and_then(|s| s.to_str()).unwrap_or("report").to_string();
    Ok((stem, text))
}

fn run(source: &str, out_dir: &Path, opts: RunOptions) -> ExitCode {
    let result = load(source).and_then(|(stem, text)| Ok((stem, Config::parse(&text)?)));
    let (stem, config) = match result {
        Ok(v) => v,
        Err(e) => {
            eprintln!("config error: {e}");
            return ExitCode::from(1);
        }
    };
    let report = match run_config(&config, &opts) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("config error: {e}");
            return ExitCode::from(1);
        }
    };
    match report.write(out_dir, &stem) {
        Ok((csv, json)) => println!("wrote {} and {}", csv.display(), json.display()),
        Err(e) => {
            eprintln!("cannot write reports to {}: {e}", out_dir.display());
            return ExitCode::from(2);
        }
    }
    for row in report.rows.iter().filter(|r| r.verdict == "error") {
        eprintln!("{} ({}): {}", row.experiment_id, row.operation, row.outputs);
    }
    ExitCode::from(report.status.exit_code() as u8)
}

fn list_panel() -> ExitCode {
    let mut root = toml::Table::new();
    let systems = acceptance_panel().iter().map(|s| toml::Value::try_from(system_spec(s)).expect("system serializes")).collect();
    root.insert("system".into(), toml::Value::Array(systems));
    print!("{}", toml::to_string(&root).expect("panel serializes"));
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { config, out_dir, seed_override, threads, timing } => {
            run(&config, &out_dir, RunOptions { seed_override, threads, timing })
        }
        Command::ListPanel => list_panel(),
        Command::Selfcheck => {
            let results = selfcheck::run_all(|r| println!("{}", r.line()));
            let failed = results.iter().filter(|r| !r.passed).count();
            println!("{} of {} checks passed", results.len() - failed, results.len());
            if failed == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
    }
}
