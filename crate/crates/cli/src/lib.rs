//! Command-line front end for the `wiretap_lab` library.

pub mod args;
pub mod commands;
pub mod error;
pub mod inputs;
pub mod output;
pub mod registry;

use std::io::Write;
use std::path::Path;

use clap::Parser;
use serde_json::{Map, Value};

use args::{Cli, Format};
use error::{CliError, CliResult};

/// Flag values from a JSON config file, appended as `--key value` tokens for
/// every key not already given on the command line.
fn merge_config(argv: &[String]) -> CliResult<Vec<String>> {
    let mut path = None;
    for (i, a) in argv.iter().enumerate() {
        if a == "--" {
            break;
        }
        if a == "--config" {
            path = argv.get(i + 1).cloned();
        } else if let Some(p) = a.strip_prefix("--config=") {
            path = Some(p.to_string());
        }
    }
    let Some(path) = path else { return Ok(argv.to_vec()) };
    let text = inputs::read(Path::new(&path))?;
    let map: Map<String, Value> =
        serde_json::from_str(&text).map_err(|e| error::input(format!("{path}: config must be a JSON object: {e}")))?;
    let mut out = argv.to_vec();
    for (key, v) in map {
        let flag = format!("--{}", key.replace('_', "-"));
        let given = argv.iter().any(|a| *a == flag || a.starts_with(&format!("{flag}=")));
        if given {
            continue;
        }
        let scalar = |v: &Value| -> CliResult<String> {
            match v {
                Value::String(s) => Ok(s.clone()),
                Value::Number(n) => Ok(n.to_string()),
                Value::Bool(b) => Ok(b.to_string()),
                other => Err(error::input(format!("{path}: unsupported value for {key}: {other}"))),
            }
        };
        match &v {
            Value::Bool(true) => out.push(flag),
            Value::Bool(false) | Value::Null => {}
            Value::Array(items) => {
                let joined = items.iter().map(scalar).collect::<CliResult<Vec<_>>>()?.join(",");
                out.push(format!("{flag}={joined}"));
            }
            other => out.push(format!("{flag}={}", scalar(other)?)),
        }
    }
    Ok(out)
}

fn render(cli: &Cli) -> CliResult<(String, i32)> {
    let mut report = commands::run(&cli.command)?;
    let (path, leaf) = commands::describe(&cli.command)?;
    let mut config = match leaf {
        Value::Object(m) => m,
        _ => Map::new(),
    };
    config.insert("command".into(), Value::String(path));
    config.insert("format".into(), output::to_value(cli.format)?);
    report.body.insert("config".into(), Value::Object(config));
    let text = match cli.format {
        Format::Json => output::json(&report.body)?,
        Format::Csv => output::csv(&report)?,
    };
    Ok((text, report.status))
}

fn execute(cli: &Cli) -> CliResult<(String, i32)> {
    match cli.workers {
        Some(0) => Err(error::input("--workers must be at least 1")),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::Output(format!("thread pool: {e}")))?;
            pool.install(|| render(cli))
        }
        None => render(cli),
    }
}

/// Parses `argv` (program name first), runs the subcommand and writes the
/// report to `out`. Returns the process exit status.
pub fn dispatch(argv: Vec<String>, out: &mut impl Write, err: &mut impl Write) -> i32 {
    let argv = match merge_config(&argv) {
        Ok(a) => a,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return e.exit_code();
        }
    };
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                2
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    match execute(&cli) {
        Ok((text, status)) => match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
            Ok(()) => status,
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                1
            }
        },
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
