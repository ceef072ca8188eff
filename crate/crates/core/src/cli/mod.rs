//! Command-line front end: configuration, experiment runs and report output.

pub mod config;
pub mod emit;
pub mod run;

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;

use clap::Parser;

pub use config::{parse_config, ConfigError, Experiment, ExperimentConfig, Format};
pub use emit::emit;
pub use run::{run, ExperimentReport, Metric, RunReport};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

/// Environment variable capping the worker threads; 0 or unset means one per core.
pub const THREADS_ENV: &str = "TOPOCHARGE_THREADS";

const AFTER_HELP: &str = "\
Config files hold one `key = value` per line; `#` starts a comment. See
config/reference.conf for every key and its default. Required keys: `n` for
charge, `g` for monopole and quantize.

Exit status: 0 when every check passes, 1 when a check fails, 2 on a
configuration, usage or output error.

Set TOPOCHARGE_THREADS to cap the worker threads (0 = one per core).";

#[derive(Debug, Parser)]
#[command(name = "topocharge-lab", version, about = "Numerical checks of hedgehog winding, Dirac monopoles, the Dirac algebra and a Born-series fermion probe.", after_help = AFTER_HELP)]
pub struct Args {
    /// charge, monopole, quantize, gamma, fermion-probe or all
    pub experiment: Experiment,
    /// key = value config file
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// JSON config file; its keys override --config
    #[arg(long)]
    pub json_config: Option<PathBuf>,
    /// write the report here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// json or csv
    #[arg(long)]
    pub format: Option<Format>,
    /// fail quantize unless 2eg/hbar_c is an integer
    #[arg(long)]
    pub require_quantized: bool,
    /// RNG seed, decimal or 0x-prefixed hex
    #[arg(long, value_parser = |s: &str| config::parse_seed(s).ok_or("not an integer"))]
    pub seed: Option<u64>,
}

/// Builds the effective configuration: file keys, then JSON keys, then flags.
pub fn load(args: &Args) -> Result<ExperimentConfig, String> {
    let mut map = std::collections::BTreeMap::new();
    if let Some(path) = &args.config {
        let text = fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        map.extend(config::parse_key_values(&text).map_err(|e| e.to_string())?);
    }
    if let Some(path) = &args.json_config {
        let text = fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        map.extend(config::parse_json_map(&text).map_err(|e| e.to_string())?);
    }
    map.insert("experiment".into(), args.experiment.name().into());
    let mut cfg = config::from_map(&map).map_err(|e| e.to_string())?;
    if args.require_quantized {
        cfg.require_quantized = true;
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(format) = args.format {
        cfg.format = format;
    }
    if let Some(out) = &args.out {
        cfg.output = Some(out.clone());
    }
    Ok(cfg)
}

fn configure_threads() -> Result<(), String> {
    let Ok(value) = std::env::var(THREADS_ENV) else { return Ok(()) };
    let threads: usize = value
        .trim()
        .parse()
        .map_err(|_| format!("{THREADS_ENV} must be a non-negative integer, got `{value}`"))?;
    // a second initialization in the same process keeps the first pool
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    Ok(())
}

/// Entry point used by the binary; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return EXIT_CONFIG;
    }
    let cfg = match load(&args) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("error: {msg}");
            return EXIT_CONFIG;
        }
    };
    let report = run(&cfg);
    let text = match emit(&report, cfg.format) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_CONFIG;
        }
    };
    match &cfg.output {
        Some(path) => {
            if let Err(e) = fs::write(path, &text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return EXIT_CONFIG;
            }
        }
        None => print!("{text}"),
    }
    for exp in report.experiments.iter().filter(|e| !e.pass) {
        match &exp.error {
            Some(err) => eprintln!("{}: FAIL ({err})", exp.experiment),
            None => eprintln!("{}: FAIL", exp.experiment),
        }
    }
    if report.overall_pass {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}
