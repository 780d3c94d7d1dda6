use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use srl_core::experiments::SweepReport;

use crate::args::{Cli, Format};

pub const TOOL: &str = "srl";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// JSON wrapper: tool version and the full resolved configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope<T> {
    pub tool: String,
    pub version: String,
    pub config: Cli,
    pub report: T,
}

pub(crate) struct Sink<'a> {
    cli: &'a Cli,
}

impl<'a> Sink<'a> {
    pub fn new(cli: &'a Cli) -> Self {
        Sink { cli }
    }

    pub fn emit<T: Serialize>(&self, report: &T, csv: String) -> anyhow::Result<()> {
        let text = match self.cli.format {
            Format::Json => {
                let env = Envelope {
                    tool: TOOL.into(),
                    version: VERSION.into(),
                    config: self.cli.clone(),
                    report,
                };
                let mut s = serde_json::to_string_pretty(&env)?;
                s.push('\n');
                s
            }
            Format::Csv => {
                let config = serde_json::to_string(self.cli)?;
                format!("# {TOOL} {VERSION}\n# config {config}\n{csv}")
            }
        };
        match &self.cli.out {
            Some(path) => write_atomic(path, text.as_bytes()),
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout.write_all(text.as_bytes())?;
                stdout.flush()?;
                Ok(())
            }
        }
    }
}

/// Write through a temporary file in the same directory, then rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> anyhow::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// `<name>.csv` with the data and `<name>_fit.csv` with the fitted curve.
pub fn write_plot_data(dir: &Path, report: &SweepReport) -> anyhow::Result<()> {
    std::fs::create_dir_all(dir)?;
    for (name, fit) in &report.fits {
        let mut data = format!("h,{name}\n");
        let mut line = format!("h,{name}_fit\n");
        for (h, v) in fit.h.iter().zip(&fit.values) {
            data += &format!("{h:.16e},{v:.16e}\n");
            line += &format!("{h:.16e},{:.16e}\n", fit.predict(*h));
        }
        write_atomic(&dir.join(format!("{name}.csv")), data.as_bytes())?;
        write_atomic(&dir.join(format!("{name}_fit.csv")), line.as_bytes())?;
    }
    for (name, fit) in &report.linear_fits {
        let mut data = String::from("x,y\n");
        let mut line = String::from("x,y_fit\n");
        for (x, y) in fit.x.iter().zip(&fit.y) {
            data += &format!("{x:.16e},{y:.16e}\n");
            line += &format!("{x:.16e},{:.16e}\n", fit.slope * x + fit.intercept);
        }
        write_atomic(&dir.join(format!("{name}.csv")), data.as_bytes())?;
        write_atomic(&dir.join(format!("{name}_fit.csv")), line.as_bytes())?;
    }
    Ok(())
}
