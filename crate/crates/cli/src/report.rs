//! JSON reports and CSV plot data.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};
use whitney::conditions::{Series, Status, Verdict};

pub const SCHEMA: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InputEcho {
    /// Parameters that determine the result; worker count and output paths are left out.
    pub parameters: Value,
    pub files: Vec<FileDigest>,
    /// SHA-256 of the parameters and file digests.
    pub digest: String,
}

impl InputEcho {
    pub fn new(parameters: Value, files: Vec<FileDigest>) -> Self {
        let mut h = Sha256::new();
        h.update(serde_json::to_vec(&parameters).expect("json value"));
        for f in &files {
            h.update(f.sha256.as_bytes());
        }
        InputEcho {
            parameters,
            files,
            digest: hex(&h.finalize()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub tool_version: String,
    pub command: String,
    pub input: InputEcho,
    /// `holds`, `fails`, `unknown`.
    pub outcome: String,
    pub exit_code: i32,
    pub verdicts: Vec<Verdict>,
    pub result: Value,
}

pub fn hex(bytes: &[u8]) -> String {
    bytes.iter().fold(String::new(), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

pub fn file_digest(path: &str, contents: &str) -> FileDigest {
    FileDigest {
        path: path.to_string(),
        sha256: hex(&Sha256::digest(contents.as_bytes())),
    }
}

/// Outcome of a command: 0 holds, 1 fails, 2 unknown.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Holds,
    Fails,
    Unknown,
}

impl Outcome {
    pub fn code(self) -> i32 {
        match self {
            Outcome::Holds => 0,
            Outcome::Fails => 1,
            Outcome::Unknown => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Outcome::Holds => "holds",
            Outcome::Fails => "fails",
            Outcome::Unknown => "unknown",
        }
    }

    /// Fails if any verdict fails, holds if all hold on the grid, unknown otherwise.
    pub fn of(verdicts: &[Verdict]) -> Outcome {
        if verdicts.iter().any(|v| v.status == Status::Fails) {
            Outcome::Fails
        } else if verdicts.iter().all(|v| v.status == Status::HoldsOnGrid) {
            Outcome::Holds
        } else {
            Outcome::Unknown
        }
    }
}

/// JSON has no encoding for non-finite numbers.
pub fn finite(v: f64) -> Value {
    if v.is_finite() {
        Value::from(v)
    } else {
        Value::Null
    }
}

/// Series ready for CSV: every point must be finite.
pub fn plot_csv(series: &[&Series]) -> String {
    let mut out = String::new();
    for s in series {
        let _ = writeln!(out, "# {}: {} vs {}", s.name, s.y_label, s.x_label);
        out.push_str("x,y\n");
        for (x, y) in s.x.iter().zip(&s.y) {
            if x.is_finite() && y.is_finite() {
                let _ = writeln!(out, "{x},{y}");
            }
        }
    }
    out
}

/// Replaces non-finite numbers in verdict series and fits so the report round-trips.
pub fn sanitize(v: &mut Verdict) {
    for s in &mut v.series {
        let (x, y) = s
            .x
            .iter()
            .zip(&s.y)
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .map(|(x, y)| (*x, *y))
            .unzip();
        s.x = x;
        s.y = y;
    }
    for f in &mut v.slopes {
        for x in [&mut f.slope, &mut f.intercept, &mut f.residual_rms] {
            if !x.is_finite() {
                *x = 0.0;
                v.notes.push(format!("non-finite fit value in {}", f.name));
            }
        }
    }
    for p in v.parameters.values_mut() {
        if !p.is_finite() {
            *p = 0.0;
        }
    }
}

pub fn render(report: &Report) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}
