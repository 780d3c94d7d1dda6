//! Argument parsing with `--config` merging.
//!
//! A config file holds `key = value` lines keyed by long flag names; blank
//! lines and `#` comments are skipped. Explicit flags win over the file.

use std::ffi::OsString;
use std::path::Path;

use clap::parser::ValueSource;
use clap::{ArgMatches, CommandFactory, FromArgMatches};

use crate::args::Cli;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseError {
    /// Help or version text; not an error for the caller.
    Display(String),
    /// One-line message for a bad invocation.
    Usage(String),
}

impl From<clap::Error> for ParseError {
    fn from(e: clap::Error) -> Self {
        use clap::error::ErrorKind::*;
        match e.kind() {
            DisplayHelp | DisplayVersion | DisplayHelpOnMissingArgumentOrSubcommand => {
                ParseError::Display(e.render().to_string())
            }
            _ => {
                let text = e.render().to_string();
                let first = text.lines().next().unwrap_or("invalid arguments");
                ParseError::Usage(first.trim_start_matches("error: ").to_string())
            }
        }
    }
}

pub fn parse_args<I, T>(argv: I) -> Result<Cli, ParseError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let mut argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let matches = Cli::command().try_get_matches_from(&argv)?;
    let cli = Cli::from_arg_matches(&matches)?;
    let Some(path) = cli.config.clone() else {
        return Ok(cli);
    };
    let entries = read_config(&path)?;
    let mut cmd = Cli::command();
    cmd.build();
    let (leaf_cmd, leaf_matches) = leaf(&cmd, &matches);
    for (key, value) in entries {
        if key == "config" {
            return Err(ParseError::Usage(
                "--config: a config file cannot name another config file".into(),
            ));
        }
        let arg = leaf_cmd
            .get_arguments()
            .find(|a| a.get_long() == Some(key.as_str()))
            .ok_or_else(|| ParseError::Usage(format!("--config: unknown key `{key}` for `{}`", leaf_cmd.get_name())))?;
        if leaf_matches.value_source(arg.get_id().as_str()) == Some(ValueSource::CommandLine) {
            continue;
        }
        argv.push(format!("--{key}").into());
        argv.push(value.into());
    }
    let merged = Cli::command().try_get_matches_from(&argv)?;
    Ok(Cli::from_arg_matches(&merged)?)
}

fn leaf<'a>(mut cmd: &'a clap::Command, mut m: &'a ArgMatches) -> (&'a clap::Command, &'a ArgMatches) {
    while let Some((name, sub)) = m.subcommand() {
        match cmd.find_subcommand(name) {
            Some(c) => {
                cmd = c;
                m = sub;
            }
            None => break,
        }
    }
    (cmd, m)
}

fn read_config(path: &Path) -> Result<Vec<(String, String)>, ParseError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ParseError::Usage(format!("--config: cannot read {}: {e}", path.display())))?;
    parse_config(&text)
}

pub(crate) fn parse_config(text: &str) -> Result<Vec<(String, String)>, ParseError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| ParseError::Usage(format!("--config line {}: expected `key = value`", i + 1)))?;
        let k = k.trim().trim_start_matches("--");
        let v = v.trim().trim_matches('"');
        if k.is_empty() {
            return Err(ParseError::Usage(format!("--config line {}: empty key", i + 1)));
        }
        out.push((k.to_string(), v.to_string()));
    }
    Ok(out)
}
