//! JSON config files.
//!
//! A config file is a JSON object whose keys are the long flag names of the
//! subcommand, with `-` or `_` as separator (`"train_size"` and
//! `"train-size"` both mean `--train-size`). Values are strings, numbers or
//! booleans; a repeatable flag also takes an array. `null` is ignored.
//! Flags given on the command line win over the file.

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;

use clap::parser::ValueSource;
use clap::{ArgMatches, Command};
use serde_json::Value;

use crate::error::{CliError, CliResult};

fn scalar(key: &str, v: &Value) -> CliResult<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(x) => Ok(x.to_string()),
        Value::Bool(b) => Ok(b.to_string()),
        _ => Err(CliError::Usage(format!("config key {key:?}: expected a string, number or boolean"))),
    }
}

/// `argv` with the settings of the subcommand's `--config` file appended,
/// or unchanged when there is none.
pub fn merge(cmd: &Command, matches: &ArgMatches, mut argv: Vec<OsString>) -> CliResult<Vec<OsString>> {
    let Some((name, sub)) = matches.subcommand() else {
        return Ok(argv);
    };
    let Ok(Some(path)) = sub.try_get_one::<PathBuf>("config") else {
        return Ok(argv);
    };
    let text = fs::read_to_string(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    let json: Value = serde_json::from_str(&text).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    let Value::Object(map) = json else {
        return Err(CliError::Data(format!("{}: config must be a JSON object", path.display())));
    };
    let sub_cmd = cmd.find_subcommand(name).expect("matched subcommand exists");
    for (key, value) in &map {
        let long = key.replace('_', "-");
        let arg = sub_cmd
            .get_arguments()
            .find(|a| a.get_long() == Some(long.as_str()))
            .ok_or_else(|| CliError::Usage(format!("unknown config key {key:?} for {name}")))?;
        if long == "config" {
            return Err(CliError::Usage("a config file cannot name another config file".into()));
        }
        if sub.value_source(arg.get_id().as_str()) == Some(ValueSource::CommandLine) {
            continue;
        }
        let flag = format!("--{long}");
        let values = match value {
            Value::Null => continue,
            Value::Array(items) => items.iter().map(|v| scalar(key, v)).collect::<CliResult<Vec<_>>>()?,
            v => vec![scalar(key, v)?],
        };
        for v in values {
            argv.push(flag.clone().into());
            argv.push(v.into());
        }
    }
    Ok(argv)
}
