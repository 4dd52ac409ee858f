//! Run reports rendered as Markdown, CSV or JSON.

use std::time::Duration;

use rvl_core::rational::{format, to_decimal};
use rvl_core::Rational;
use serde::Serialize;
use sha2::{Digest, Sha256};

/// Significant digits of every decimal annotation.
pub const DIGITS: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Md,
    Csv,
    Json,
}

#[derive(Clone, Debug, Serialize)]
pub struct Output {
    pub name: String,
    pub exact: String,
    pub decimal: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Assertion {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

/// Field order is the JSON order.
#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs_digest: String,
    pub outputs: Vec<Output>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub assertions: Vec<Assertion>,
    pub elapsed_ms: u128,
    pub pass: bool,
}

impl RunReport {
    /// `inputs` is hashed in its canonical JSON form.
    pub fn new(command: impl Into<String>, inputs: &serde_json::Value) -> Self {
        let canonical = serde_json::to_string(inputs).expect("JSON values serialize");
        Self {
            command: command.into(),
            inputs_digest: format!("{:x}", Sha256::digest(canonical.as_bytes())),
            outputs: Vec::new(),
            notes: Vec::new(),
            assertions: Vec::new(),
            elapsed_ms: 0,
            pass: true,
        }
    }

    pub fn value(&mut self, name: impl Into<String>, v: &Rational) {
        self.outputs.push(Output {
            name: name.into(),
            exact: format(v),
            decimal: to_decimal(v, DIGITS),
        });
    }

    pub fn values<'a>(
        &mut self,
        name: &str,
        labels: impl IntoIterator<Item = String>,
        vs: impl IntoIterator<Item = &'a Rational>,
    ) {
        for (label, v) in labels.into_iter().zip(vs) {
            self.value(format!("{name}[{label}]"), v);
        }
    }

    /// A non-numeric output.
    pub fn text(&mut self, name: impl Into<String>, text: impl Into<String>) {
        let text = text.into();
        self.outputs.push(Output {
            name: name.into(),
            exact: text,
            decimal: String::new(),
        });
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn assert(
        &mut self,
        name: impl Into<String>,
        expected: impl Into<String>,
        actual: impl Into<String>,
        pass: bool,
    ) {
        self.pass &= pass;
        self.assertions.push(Assertion {
            name: name.into(),
            expected: expected.into(),
            actual: actual.into(),
            pass,
        });
    }

    pub fn assert_eq(&mut self, name: impl Into<String>, actual: &Rational, expected: &Rational) {
        self.assert(
            name,
            format!("= {}", format(expected)),
            format(actual),
            actual == expected,
        );
    }

    pub fn finish(mut self, elapsed: Duration) -> Self {
        self.elapsed_ms = elapsed.as_millis();
        self
    }

    pub fn render(&self, f: Format) -> String {
        match f {
            Format::Md => self.markdown(),
            Format::Csv => self.csv(),
            Format::Json => serde_json::to_string_pretty(self).expect("report serializes") + "\n",
        }
    }

    fn markdown(&self) -> String {
        let mut s = format!("# {}\n\ninputs sha256: `{}`\n\n", self.command, self.inputs_digest);
        if !self.outputs.is_empty() {
            s += "| output | exact | decimal |\n|---|---|---|\n";
            for o in &self.outputs {
                s += &format!("| {} | {} | {} |\n", o.name, o.exact, o.decimal);
            }
            s += "\n";
        }
        for n in &self.notes {
            s += &format!("- {n}\n");
        }
        if !self.notes.is_empty() {
            s += "\n";
        }
        if !self.assertions.is_empty() {
            s += "| assertion | expected | actual | result |\n|---|---|---|---|\n";
            for a in &self.assertions {
                s += &format!(
                    "| {} | {} | {} | {} |\n",
                    a.name,
                    a.expected,
                    a.actual,
                    if a.pass { "PASS" } else { "FAIL" }
                );
            }
            s += "\n";
        }
        s += &format!(
            "{} in {} ms\n",
            if self.pass { "PASS" } else { "FAIL" },
            self.elapsed_ms
        );
        s
    }

    fn csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["kind", "name", "exact", "decimal", "expected", "pass"])
            .expect("in-memory write");
        for o in &self.outputs {
            w.write_record(["output", &o.name, &o.exact, &o.decimal, "", ""])
                .expect("in-memory write");
        }
        for a in &self.assertions {
            w.write_record([
                "assertion",
                &a.name,
                &a.actual,
                "",
                &a.expected,
                if a.pass { "true" } else { "false" },
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
    }
}
