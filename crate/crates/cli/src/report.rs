use std::fmt::Write as _;
use std::path::PathBuf;

use decmin_core::{CanonicalDecomposition, Certificate, Error, Subset};
use serde_json::{json, Value};

/// What a command produced: a text rendering, a JSON value, and the exit code.
pub struct Report {
    pub text: String,
    pub json: Value,
    pub code: u8,
}

impl Report {
    pub fn new(json: Value) -> Self {
        Report { text: String::new(), json, code: 0 }
    }

    pub fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }

    pub fn print(&self, as_json: bool) {
        if as_json {
            println!("{}", serde_json::to_string_pretty(&self.json).expect("json output"));
        } else {
            print!("{}", self.text);
        }
    }

    pub fn decomposition(&mut self, d: &CanonicalDecomposition) {
        self.line(format!("values: {}", join(&d.values)));
        self.line(format!("chain: {}", sets(&d.chain)));
        self.line(format!("partition: {}", sets(&d.partition)));
        self.line(format!("small box: f* = ({}), g* = ({})", join(&d.f_star), join(&d.g_star)));
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Core(Error::Infeasible { .. }) => 2,
            CliError::Core(Error::Parse { .. }) | CliError::Io { .. } => 3,
            CliError::Core(Error::Capacity { .. } | Error::Budget(_)) => 4,
            _ => 1,
        }
    }

    fn certificate(&self) -> Option<&Certificate> {
        match self {
            CliError::Core(Error::Infeasible { certificate, .. }) => Some(certificate),
            _ => None,
        }
    }

    pub fn print(&self, as_json: bool) {
        let cert = self.certificate().map(certificate_text);
        if as_json {
            let v = json!({ "error": self.to_string(), "exit_code": self.code(), "certificate": cert });
            println!("{}", serde_json::to_string_pretty(&v).expect("json output"));
        } else {
            eprintln!("error: {self}");
            if let Some(c) = cert {
                eprintln!("certificate: {c}");
            }
        }
    }
}

fn certificate_text(c: &Certificate) -> String {
    match c {
        Certificate::Set(s) => format!("set {s}"),
        Certificate::Nodes(v) => format!("set {{{}}}", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")),
        Certificate::Bridge(e) => format!("bridge edge {e}"),
        Certificate::Note(s) => s.clone(),
    }
}

pub fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

pub fn sets(xs: &[Subset]) -> String {
    let mut out = String::new();
    for (i, s) in xs.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        let _ = write!(out, "{s}");
    }
    out
}

pub fn decomposition_json(d: &CanonicalDecomposition) -> Value {
    serde_json::to_value(d).expect("decomposition serializes")
}
