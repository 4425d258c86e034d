//! Tables, manifests and error classification.

use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use serde_json::{json, Map, Value};

/// Failure classes, mapped onto the process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Invalid flags or grids: exit code 2.
    Usage(String),
    /// A library error or a result outside tolerance: exit code 1.
    Numerical(String),
    /// Output could not be written: exit code 1.
    Io(io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numerical(_) | CliError::Io(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<qgamma::Error> for CliError {
    fn from(e: qgamma::Error) -> Self {
        match e {
            qgamma::Error::InvalidGrid(_) | qgamma::Error::InvalidArgument(_) => CliError::Usage(e.to_string()),
            other => CliError::Numerical(other.to_string()),
        }
    }
}

/// The command and every parameter that determines its output. Wall-clock
/// time is kept out so that identical runs give identical tables; it is
/// reported in the summary instead.
#[derive(Debug, Clone)]
pub struct RunManifest {
    command: &'static str,
    params: Map<String, Value>,
}

impl RunManifest {
    pub fn new(command: &'static str) -> Self {
        Self {
            command,
            params: Map::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn to_json(&self) -> Value {
        json!({
            "command": self.command,
            "version": env!("CARGO_PKG_VERSION"),
            "params": self.params,
        })
    }
}

/// `{:.16e}`: 17 significant digits, enough to round-trip an `f64`.
pub fn float(x: f64) -> String {
    format!("{x:.16e}")
}

/// A CSV table with its manifest as a leading `#` comment line.
pub struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn render(&self, manifest: &RunManifest) -> String {
        let mut s = format!("# {}\n{}\n", manifest.to_json(), self.header.join(","));
        for row in &self.rows {
            s.push_str(&row.join(","));
            s.push('\n');
        }
        s
    }
}

fn summary_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".summary.json");
    PathBuf::from(name)
}

fn with_manifest(summary: Value, manifest: &RunManifest, elapsed: Duration) -> Value {
    json!({
        "manifest": manifest.to_json(),
        "duration_seconds": elapsed.as_secs_f64(),
        "summary": summary,
    })
}

/// Writes the table to `out` (or standard output) and the summary next to it
/// as `<out>.summary.json` (or to standard error when the table goes to
/// standard output).
pub fn emit_table(
    out: Option<&Path>,
    manifest: &RunManifest,
    table: &Table,
    summary: Value,
    elapsed: Duration,
) -> Result<(), CliError> {
    let summary = serde_json::to_string_pretty(&with_manifest(summary, manifest, elapsed)).expect("JSON value");
    match out {
        Some(path) => {
            fs::write(path, table.render(manifest))?;
            fs::write(summary_path(path), summary + "\n")?;
        }
        None => {
            io::stdout().lock().write_all(table.render(manifest).as_bytes())?;
            eprintln!("{summary}");
        }
    }
    Ok(())
}

/// Writes a JSON report to `out` or standard output.
pub fn emit_report(out: Option<&Path>, manifest: &RunManifest, report: Value, elapsed: Duration) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(&with_manifest(report, manifest, elapsed)).expect("JSON value") + "\n";
    match out {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// JSON cannot hold NaN or infinities; those become `null`.
pub fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for x in [0.1, -1.0 / 3.0, 1e-300, 7.660_370_925_243_513, f64::MIN_POSITIVE] {
            assert_eq!(float(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn table_render() {
        let mut t = Table::new(&["a", "b"]);
        t.push(vec!["1".into(), "2".into()]);
        let m = RunManifest::new("test").param("k", 3);
        let s = t.render(&m);
        let mut lines = s.lines();
        let first = lines.next().unwrap();
        assert!(first.starts_with("# {"));
        let v: Value = serde_json::from_str(&first[2..]).unwrap();
        assert_eq!(v["command"], "test");
        assert_eq!(v["params"]["k"], 3);
        assert_eq!(lines.next(), Some("a,b"));
        assert_eq!(lines.next(), Some("1,2"));
        assert!(s.ends_with('\n') && !s.contains('\r'));
    }

    #[test]
    fn error_classes() {
        assert_eq!(CliError::from(qgamma::Error::InvalidGrid("x".into())).exit_code(), 2);
        assert_eq!(CliError::from(qgamma::Error::Nonconvergence { diff: 1.0, tol: 0.1 }).exit_code(), 1);
        assert_eq!(num(f64::NAN), Value::Null);
        assert_eq!(summary_path(Path::new("/tmp/x.csv")), PathBuf::from("/tmp/x.csv.summary.json"));
    }
}
