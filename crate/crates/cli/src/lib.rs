//! Command-line front end for the `fblab_core` experiments.
//!
//! Every subcommand resolves its parameters from built-in defaults, then the
//! `[subcommand]` section of an optional INI file, then command-line flags. A
//! run writes its artifacts, the effective `config.ini` and a `manifest.json`
//! into one output directory.

pub mod commands;
pub mod error;
pub mod manifest;
pub mod output;
pub mod params;
pub mod suites;
pub mod svg;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Arg, ArgAction, ArgMatches, Command};

use commands::{Ctx, Experiment, Outcome, EXPERIMENTS};
use error::{CliError, CliResult};
use manifest::RunManifest;
use output::RunDir;
use params::Params;

pub fn command() -> Command {
    let mut cmd = Command::new("fblab")
        .version(manifest::TOOL_VERSION)
        .about("Blow-up geometry and potential theory experiments for twisted Szulkin and oscillating graph domains")
        .subcommand_required(true)
        .arg(Arg::new("config").long("config").global(true).value_name("FILE").help("INI file with [global] and per-subcommand sections"))
        .arg(Arg::new("out").long("out").global(true).value_name("DIR").help("output directory [default: $FBLAB_OUT/<subcommand>]"))
        .arg(Arg::new("force").long("force").global(true).action(ArgAction::SetTrue).help("write into a non-empty output directory"))
        .arg(Arg::new("seed").long("seed").global(true).value_name("N").help("master seed [default: 0]"))
        .arg(Arg::new("threads").long("threads").global(true).value_name("N").help("worker cap [default: $FBLAB_THREADS or all cores]"));
    for e in EXPERIMENTS {
        let mut sub = Command::new(e.name).about(e.about);
        for d in e.params {
            sub = sub.arg(
                Arg::new(d.key)
                    .long(d.key)
                    .value_name("VALUE")
                    .allow_hyphen_values(true)
                    .help(format!("{} [default: {}]", d.help, if d.default.is_empty() { "none" } else { d.default })),
            );
        }
        cmd = cmd.subcommand(sub);
    }
    cmd
}

/// A completed run.
pub struct Invocation {
    pub dir: PathBuf,
    pub manifest: RunManifest,
    pub outcome: Outcome,
}

/// What the process should do after parsing and running.
pub enum Action {
    Ran(Invocation),
    /// Help or version text.
    Print(String),
}

fn parse_u64(key: &str, v: &str) -> CliResult<u64> {
    v.trim().parse().map_err(|_| CliError::param(key, format!("expected a nonnegative integer, got '{v}'")))
}

fn execute(e: &Experiment, m: &ArgMatches) -> CliResult<Invocation> {
    let file = match m.get_one::<String>("config") {
        Some(path) => Some(params::load_config(path.as_ref())?),
        None => None,
    };
    let flags: Vec<(String, String)> = e
        .params
        .iter()
        .filter_map(|d| m.get_one::<String>(d.key).map(|v| (d.key.to_string(), v.clone())))
        .collect();
    let params = Params::resolve(e.name, e.params, file.as_ref(), &flags)?;
    let from_file = |k: &str| file.as_ref().and_then(|f| f.get_from(Some("global"), k).map(str::to_string));
    let seed = match m.get_one::<String>("seed").cloned().or_else(|| from_file("seed")) {
        Some(s) => parse_u64("seed", &s)?,
        None => 0,
    };
    let threads = match m
        .get_one::<String>("threads")
        .cloned()
        .or_else(|| std::env::var("FBLAB_THREADS").ok().filter(|s| !s.is_empty()))
        .or_else(|| from_file("threads"))
    {
        Some(s) => {
            let n = parse_u64("threads", &s)? as usize;
            if n == 0 {
                return Err(CliError::param("threads", "must be at least 1"));
            }
            Some(n)
        }
        None => None,
    };
    if let Some(n) = threads {
        // the global pool can be built once per process; later runs keep it
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let dir = match m.get_one::<String>("out") {
        Some(d) => PathBuf::from(d),
        None => PathBuf::from(std::env::var("FBLAB_OUT").unwrap_or_else(|_| "fblab-out".into())).join(e.name),
    };
    let id = manifest::manifest_id(&params, seed);
    let mut run = RunDir::create(&dir, id, seed, m.get_flag("force"))?;
    let ctx = Ctx { params: &params, seed, threads };
    let outcome = (e.run)(&ctx, &mut run)?;
    let manifest = run.finish(&params, outcome.tolerance_tags.clone())?;
    Ok(Invocation { dir, manifest, outcome })
}

/// Parse `args` (program name first) and run the selected experiment.
///
/// On failure the error comes with the experiment name, if one was selected.
pub fn run<I, T>(args: I) -> Result<Action, (CliError, Option<String>)>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let m = match command().try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    Ok(Action::Print(e.render().to_string()))
                }
                ErrorKind::InvalidSubcommand => {
                    let name = e.get(clap::error::ContextKind::InvalidSubcommand).map(|v| v.to_string()).unwrap_or_default();
                    Err((CliError::UnknownExperiment(name), None))
                }
                _ => Err((CliError::Usage(e.render().to_string().trim().to_string()), None)),
            };
        }
    };
    let (name, sub) = m.subcommand().expect("subcommand is required");
    let e = commands::find(name).expect("subcommands come from the registry");
    execute(e, sub).map(Action::Ran).map_err(|err| (err, Some(name.to_string())))
}

/// Run and report: summary on stdout, JSON error record on stderr. Returns the exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let fail = |err: CliError, exp: Option<&str>| {
        eprintln!("{}", err.record(exp));
        err.exit_code()
    };
    match run(args) {
        Ok(Action::Print(text)) => {
            print!("{text}");
            0
        }
        Ok(Action::Ran(inv)) => {
            for line in &inv.outcome.summary {
                println!("{line}");
            }
            println!("manifest {} -> {}", inv.manifest.id, inv.dir.display());
            if inv.outcome.failed > 0 {
                let err = CliError::Verify { failed: inv.outcome.failed, total: inv.outcome.checked };
                return fail(err, Some(&inv.manifest.experiment));
            }
            0
        }
        Err((err, exp)) => fail(err, exp.as_deref()),
    }
}
