use serde::Serialize;
use serde_json::{json, Value};

use crate::RunConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug)]
pub struct CliError {
    pub code: String,
    pub message: String,
    pub exit_code: u8,
}

impl CliError {
    pub fn new(code: &str, message: impl Into<String>, exit_code: u8) -> Self {
        CliError { code: code.into(), message: message.into(), exit_code }
    }

    pub fn invalid(message: impl Into<String>) -> Self {
        CliError::new("invalid_parameter", message, 2)
    }

    pub fn to_json(&self) -> String {
        json!({"error": {"code": self.code, "message": self.message}}).to_string()
    }
}

impl From<k3vol::Error> for CliError {
    fn from(e: k3vol::Error) -> Self {
        let exit = if e.is_numerical() { 3 } else { 2 };
        CliError::new(e.code(), e.to_string(), exit)
    }
}

/// Everything needed to reproduce a run.
#[derive(Clone, Debug, Serialize)]
pub struct Header {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub input: Option<String>,
    pub seed: Option<u64>,
    pub defaults: Value,
}

impl Header {
    pub fn new(command: &str, cfg: &RunConfig) -> Self {
        use k3vol::binaryforms::CLUSTER_EPS;
        use k3vol::eisenman::{BASE_DISK_FRACTION, REFERENCE_METRIC_VERSION};
        use k3vol::fibration::{DEFAULT_FD_STEP, KODAIRA_TABLE_VERSION};
        use k3vol::k3lattice::{DEFAULT_NS_TOL, DEFAULT_QUADRIC_TOL};
        Header {
            tool: "k3vol",
            version: env!("CARGO_PKG_VERSION"),
            command: command.into(),
            input: cfg.input.as_ref().map(|p| p.display().to_string()),
            seed: if cfg.input.is_some() { None } else { cfg.seed },
            defaults: json!({
                "tol_wp": cfg.tol_wp,
                "tol_eis": cfg.tol_eis,
                "tol_residual": cfg.tol_residual,
                "tol_roundtrip": cfg.tol_roundtrip,
                "tol_slope": cfg.tol_slope,
                "ns_tol": DEFAULT_NS_TOL,
                "quadric_tol": DEFAULT_QUADRIC_TOL,
                "fd_step": DEFAULT_FD_STEP,
                "cluster_eps": CLUSTER_EPS,
                "kodaira_table_version": KODAIRA_TABLE_VERSION,
                "reference_metric_version": REFERENCE_METRIC_VERSION,
                "base_disk_fraction": BASE_DISK_FRACTION,
            }),
        }
    }
}

/// A command's output. `failures` lists checks that missed their tolerance;
/// any failure makes the exit code 3 but the report is still printed.
#[derive(Debug)]
pub struct Report {
    pub header: Header,
    pub result: Value,
    pub csv: String,
    pub failures: Vec<String>,
    pub exit_code: u8,
}

impl Report {
    pub fn new(header: Header, result: Value, csv: String) -> Self {
        Report { header, result, csv, failures: Vec::new(), exit_code: 0 }
    }

    pub fn require(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
            self.exit_code = 3;
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let status = if self.failures.is_empty() { "ok" } else { "tolerance_exceeded" };
                let doc = json!({
                    "header": self.header,
                    "status": status,
                    "failures": self.failures,
                    "result": self.result,
                });
                let mut s = serde_json::to_string_pretty(&doc).expect("values serialize");
                s.push('\n');
                s
            }
            Format::Csv => {
                let mut s = String::new();
                s.push_str(&format!("# {} {} {}\n", self.header.tool, self.header.version, self.header.command));
                if let Some(p) = &self.header.input {
                    s.push_str(&format!("# input={p}\n"));
                }
                if let Some(seed) = self.header.seed {
                    s.push_str(&format!("# seed={seed}\n"));
                }
                if let Value::Object(map) = &self.header.defaults {
                    for (k, v) in map {
                        s.push_str(&format!("# {k}={v}\n"));
                    }
                }
                for f in &self.failures {
                    s.push_str(&format!("# failed: {f}\n"));
                }
                s.push_str(&self.csv);
                s
            }
        }
    }
}
