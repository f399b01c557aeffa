//! Command-line front end: argument parsing, input files, JSON reports and
//! CSV plot data.

pub mod args;
pub mod commands;
pub mod input;
pub mod report;

use std::ffi::OsString;
use std::io::Write;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};
use commands::{Failure, Output};
use report::{InputEcho, Report, SCHEMA};

pub const EXIT_INPUT: i32 = 3;
pub const EXIT_COMPUTE: i32 = 4;
pub const EXIT_IO: i32 = 5;
pub const EXIT_USAGE: i32 = 64;

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Analyze(_) => "analyze",
        Command::Markov(_) => "markov",
        Command::Decompose(_) => "decompose",
        Command::Extend(_) => "extend",
        Command::ProbeDn(_) => "probe-dn",
        Command::Catalog(_) => "catalog",
    }
}

fn execute(cmd: &Command) -> Result<Output, Failure> {
    match cmd {
        Command::Analyze(a) => commands::analyze(a),
        Command::Markov(a) => commands::markov(a),
        Command::Decompose(a) => commands::decompose(a),
        Command::Extend(a) => commands::extend(a),
        Command::ProbeDn(a) => commands::probe_dn(a),
        Command::Catalog(a) => commands::catalog(a),
    }
}

/// Builds the report for a parsed command line; exit code on failure.
pub fn report_for(cli: &Cli) -> Result<Report, (i32, String)> {
    whitney::numerics::set_precision(cli.precision_bits)
        .map_err(|e| (EXIT_USAGE, e.to_string()))?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if cli.workers > 0 {
        pool = pool.num_threads(cli.workers);
    }
    let pool = pool.build().map_err(|e| (EXIT_IO, e.to_string()))?;
    let out = pool.install(|| execute(&cli.command)).map_err(|f| match f {
        Failure::Usage(m) => (EXIT_USAGE, m),
        Failure::Input(e) => (EXIT_INPUT, e.to_string()),
        Failure::Compute(e) => (EXIT_COMPUTE, e.to_string()),
    })?;
    let mut verdicts = out.verdicts;
    verdicts.iter_mut().for_each(report::sanitize);
    let mut parameters = out.parameters;
    if let Some(obj) = parameters.as_object_mut() {
        obj.insert("precision_bits".into(), cli.precision_bits.into());
    }
    let result = out.result;
    Ok(Report {
        schema: SCHEMA,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        command: command_name(&cli.command).to_string(),
        input: InputEcho::new(parameters, out.files),
        outcome: out.outcome.name().to_string(),
        exit_code: out.outcome.code(),
        verdicts,
        result,
    })
}

/// Runs one command line and returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(stdout, "{text}")
            } else {
                write!(stderr, "{text}")
            };
            return code;
        }
    };
    let report = match report_for(&cli) {
        Ok(r) => r,
        Err((code, msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            return code;
        }
    };
    let text = report::render(&report);
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &text),
        None => stdout.write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: writing report: {e}");
        return EXIT_IO;
    }
    if let Some(path) = &cli.plot_data {
        let series: Vec<&whitney::conditions::Series> =
            report.verdicts.iter().flat_map(|v| &v.series).collect();
        if let Err(e) = std::fs::write(path, report::plot_csv(&series)) {
            let _ = writeln!(stderr, "error: writing plot data: {e}");
            return EXIT_IO;
        }
    }
    report.exit_code
}
