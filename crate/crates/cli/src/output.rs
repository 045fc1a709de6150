use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::settings::{Format, Settings};
use crate::CliError;

/// Run metadata written next to every output file.
#[derive(Serialize)]
pub struct Meta<'a> {
    pub command: &'a str,
    pub version: &'static str,
    pub rng: &'static str,
    pub settings: &'a std::collections::BTreeMap<String, String>,
}

pub fn sidecar_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().unwrap_or_default().to_os_string();
    name.push(".meta.json");
    out.with_file_name(name)
}

/// `dir/report.json` -> `dir/report_<suffix>.<ext>`.
pub fn companion_path(out: &Path, suffix: &str, ext: &str) -> PathBuf {
    let stem = out.file_stem().unwrap_or_default().to_string_lossy();
    out.with_file_name(format!("{stem}_{suffix}.{ext}"))
}

pub fn write_meta(command: &str, settings: &Settings, out: Option<&Path>) -> Result<(), CliError> {
    let meta = Meta {
        command,
        version: env!("CARGO_PKG_VERSION"),
        rng: cslab::vmc::RNG_NAME,
        settings: settings.resolved(),
    };
    let text = serde_json::to_string_pretty(&meta)?;
    match out {
        Some(p) => std::fs::write(sidecar_path(p), text + "\n")?,
        None => eprintln!("# meta {}", serde_json::to_string(&meta)?),
    }
    Ok(())
}

fn sink(out: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match out {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir)?;
            }
            Box::new(io::BufWriter::new(File::create(p)?))
        }
        None => Box::new(io::stdout().lock()),
    })
}

/// Writes flat rows as CSV or a JSON array.
pub fn write_rows<T: Serialize>(rows: &[T], format: Format, out: Option<&Path>) -> Result<(), CliError> {
    let mut w = sink(out)?;
    match format {
        Format::Csv => {
            let mut csv = csv::Writer::from_writer(&mut w);
            for r in rows {
                csv.serialize(r)?;
            }
            csv.flush()?;
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut w, rows)?;
            writeln!(w)?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<T: Serialize + ?Sized>(value: &T, out: Option<&Path>) -> Result<(), CliError> {
    let mut w = sink(out)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

/// Streaming CSV writer for row counts too large to collect.
pub fn csv_writer(out: Option<&Path>) -> Result<csv::Writer<Box<dyn Write>>, CliError> {
    Ok(csv::Writer::from_writer(sink(out)?))
}
