//! JSON reports shared by all subcommands.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Identifier of the published schema for a command's report.
pub fn schema_id(command: &str) -> String {
    format!("cuspenv/{command}-report/v1")
}

/// The input as given and as understood.
#[derive(Clone, Debug, Default, Serialize)]
pub struct InputEcho {
    /// Source text of the germ, family or CTF data, when there is one.
    pub text: Option<String>,
    /// Canonical re-printing of the parsed input.
    pub canonical: Option<String>,
    pub kind: Option<String>,
    pub parameters: Vec<String>,
    pub deformations: Vec<String>,
    /// Remaining flags, as strings.
    pub flags: BTreeMap<String, String>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Exactness {
    pub working_order: u32,
    /// Degree through which the reported series are exact, when known.
    pub exact_through: Option<u32>,
    /// All reported quantities are exact rationals or symbolic expressions.
    pub exact: bool,
    pub notes: Vec<String>,
}

impl Exactness {
    pub fn exact(order: u32) -> Self {
        Exactness {
            working_order: order,
            exact_through: None,
            exact: true,
            notes: Vec::new(),
        }
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }
}

/// Outcome class; `negative` maps to exit status 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Positive,
    Negative,
    Informational,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: String,
    pub version: &'static str,
    pub command: String,
    pub input: InputEcho,
    pub exactness: Exactness,
    pub verdict: Verdict,
    pub summary: String,
    pub result: Value,
}

impl Report {
    pub fn new(command: &str, input: InputEcho, exactness: Exactness, verdict: Verdict, summary: impl Into<String>, result: Value) -> Self {
        Report {
            schema: schema_id(command),
            version: VERSION,
            command: command.into(),
            input,
            exactness,
            verdict,
            summary: summary.into(),
            result,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.verdict {
            Verdict::Negative => 2,
            _ => 0,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}
