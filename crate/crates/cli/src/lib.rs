//! Command-line front end for the freebeam library.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod args;
mod commands;
mod output;
mod values;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter};
use std::path::Path;

use clap::{CommandFactory, Parser};
use serde_json::Value;

pub use args::Cli;
pub use output::g12;

const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Exit status for a usage problem (bad flags, unreadable config).
pub const EXIT_USAGE: i32 = 1;
/// Exit status when the library rejects the inputs.
pub const EXIT_CONTRACT: i32 = 2;

/// Parses `argv`, runs the command and returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let argv = match merge_config(argv) {
        Ok(a) => a,
        Err(msg) => {
            eprintln!("error: {msg}");
            return EXIT_USAGE;
        }
    };
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    configure_threads();

    let effective = match serde_json::to_value(&cli.command) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    if let Some(path) = &cli.emit_config {
        let text = serde_json::to_string_pretty(&effective).expect("arguments serialize") + "\n";
        if let Err(e) = std::fs::write(path, text) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return EXIT_USAGE;
        }
    }

    let table = match commands::run(&cli.command) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_CONTRACT;
        }
    };
    let header = vec![
        format!("freebeam {VERSION} {}", cli.command.name()),
        format!("input: {}", serde_json::to_string(&effective).expect("arguments serialize")),
    ];
    let written = match &cli.output {
        Some(path) => File::create(path).and_then(|f| table.write(&header, BufWriter::new(f))),
        None => table.write(&header, io::stdout().lock()),
    };
    if let Err(e) = written {
        if e.kind() != io::ErrorKind::BrokenPipe {
            eprintln!("error: {e}");
            return EXIT_CONTRACT;
        }
    }
    0
}

fn configure_threads() {
    if let Some(n) = std::env::var("FREEBEAM_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if n > 0 {
            // a second call in the same process keeps the first pool
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn config_path(argv: &[OsString]) -> Result<Option<String>, String> {
    let mut found = None;
    let mut it = argv.iter().skip(1);
    while let Some(a) = it.next() {
        let a = a.to_string_lossy();
        if a == "--" {
            break;
        }
        if a == "--config" {
            let v = it.next().ok_or("--config needs a file")?;
            found = Some(v.to_string_lossy().into_owned());
        } else if let Some(v) = a.strip_prefix("--config=") {
            found = Some(v.to_string());
        }
    }
    Ok(found)
}

fn flag_tokens(key: &str, value: &Value) -> Result<Vec<String>, String> {
    let flag = format!("--{key}");
    Ok(match value {
        Value::Null | Value::Bool(false) => vec![],
        Value::Bool(true) => vec![flag],
        Value::Number(n) => vec![flag, n.to_string()],
        Value::String(s) => vec![flag, s.clone()],
        Value::Array(items) => {
            let parts: Result<Vec<String>, String> = items
                .iter()
                .map(|v| match v {
                    Value::String(s) => Ok(s.clone()),
                    Value::Number(n) => Ok(n.to_string()),
                    _ => Err(format!("config key {key:?} holds an unsupported list item")),
                })
                .collect();
            let sep = if key == "color" { ";" } else { "," };
            vec![flag, parts?.join(sep)]
        }
        Value::Object(_) => return Err(format!("config key {key:?} must not be an object")),
    })
}

/// Splices flags from the `--config` file in front of the command-line flags,
/// so that flags given explicitly override the file.
fn merge_config(mut argv: Vec<OsString>) -> Result<Vec<OsString>, String> {
    let Some(path) = config_path(&argv)? else {
        return Ok(argv);
    };
    let text = std::fs::read_to_string(Path::new(&path)).map_err(|e| format!("cannot read {path}: {e}"))?;
    let json: Value = serde_json::from_str(&text).map_err(|e| format!("{path}: {e}"))?;
    let Value::Object(map) = json else {
        return Err(format!("{path}: config must be a JSON object"));
    };

    let names: Vec<String> = Cli::command().get_subcommands().map(|c| c.get_name().to_string()).collect();
    let mut sub = argv.iter().position(|a| names.iter().any(|n| a.to_string_lossy() == n.as_str()));
    if sub.is_none() {
        let name = match map.get("command") {
            Some(Value::String(s)) => s.clone(),
            _ => return Err(format!("{path}: no subcommand given on the command line or as \"command\"")),
        };
        // the program name stays first
        argv.insert(1, name.into());
        sub = Some(1);
    }
    let mut tokens = Vec::new();
    for (key, value) in &map {
        if matches!(key.as_str(), "command" | "config" | "emit-config") {
            continue;
        }
        tokens.extend(flag_tokens(key, value)?);
    }
    let at = sub.unwrap() + 1;
    argv.splice(at..at, tokens.into_iter().map(OsString::from));
    Ok(argv)
}
