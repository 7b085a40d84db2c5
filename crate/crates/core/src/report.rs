//! Line-delimited JSON records and their human rendering.
//!
//! Every record carries a `record` field naming its kind. The stream starts
//! with one `header` and ends with one `summary`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::detect::RingReport;
use crate::resolution::DimCertificate;
use crate::stable::{BtorValue, CertificateRecord, StorAnswer, StorValue, Strategy, Verdict};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Value {
    Dimension { dimension: usize },
    Certificate { certificate: DimCertificate },
    Infinite,
    NotComputable { reason: String },
}

impl std::fmt::Display for Value {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Value::Dimension { dimension } => write!(f, "{dimension}"),
            Value::Certificate { certificate } => write!(f, "{certificate}"),
            Value::Infinite => write!(f, "Infinite"),
            Value::NotComputable { reason } => write!(f, "NotComputable ({reason})"),
        }
    }
}

impl From<BtorValue> for Value {
    fn from(b: BtorValue) -> Self {
        match b {
            BtorValue::Finite(dimension) => Value::Dimension { dimension },
            BtorValue::Infinite => Value::Infinite,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "record", rename_all = "snake_case")]
pub enum Record {
    Header {
        command: String,
        params: BTreeMap<String, String>,
    },
    Value {
        theory: String,
        degree: Option<i64>,
        value: Value,
        strategy: Option<Strategy>,
        certificates: Vec<CertificateRecord>,
    },
    Check {
        check: String,
        degree: i64,
        left: Option<usize>,
        right: Option<usize>,
        verdict: Verdict,
    },
    Instance {
        tag: String,
        ring: String,
        subject: String,
        verdict: Verdict,
        detail: String,
    },
    Ring {
        report: RingReport,
    },
    Note {
        text: String,
    },
    Summary {
        pass: usize,
        fail: usize,
        not_computable: usize,
        exit_code: i32,
    },
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_NOT_COMPUTABLE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

/// Collects the records of one invocation and derives its exit code.
#[derive(Debug, Default)]
pub struct Report {
    records: Vec<Record>,
    pass: usize,
    fail: usize,
    not_computable: usize,
}

impl Report {
    pub fn new(command: &str, params: BTreeMap<String, String>) -> Self {
        Report { records: vec![Record::Header { command: command.into(), params }], ..Default::default() }
    }

    pub fn records(&self) -> &[Record] {
        &self.records
    }

    pub fn push(&mut self, r: Record) {
        match &r {
            Record::Value { value: Value::NotComputable { .. }, .. } => self.not_computable += 1,
            Record::Value { .. } => self.pass += 1,
            Record::Check { verdict, .. } | Record::Instance { verdict, .. } => match verdict {
                Verdict::Pass => self.pass += 1,
                Verdict::Fail => self.fail += 1,
                Verdict::Skipped(_) => {}
            },
            _ => {}
        }
        self.records.push(r);
    }

    pub fn value(&mut self, theory: &str, degree: Option<i64>, value: Value) {
        self.push(Record::Value { theory: theory.into(), degree, value, strategy: None, certificates: Vec::new() });
    }

    pub fn stor(&mut self, theory: &str, s: &StorAnswer) {
        let value = match &s.value {
            StorValue::Computed { dimension, .. } => Value::Dimension { dimension: *dimension },
            StorValue::NotComputable { reason } => Value::NotComputable { reason: reason.clone() },
        };
        self.push(Record::Value {
            theory: theory.into(),
            degree: Some(s.degree),
            value,
            strategy: s.strategy(),
            certificates: s.certificates.clone(),
        });
    }

    /// A computation that could not be carried out with the given bounds.
    pub fn not_computable(&mut self, theory: &str, degree: Option<i64>, reason: String) {
        self.value(theory, degree, Value::NotComputable { reason });
    }

    /// Counts a check with no evaluable rows as not computable.
    pub fn mark_not_computable(&mut self) {
        self.not_computable += 1;
    }

    pub fn exit_code(&self) -> i32 {
        if self.fail > 0 {
            EXIT_FAIL
        } else if self.not_computable > 0 {
            EXIT_NOT_COMPUTABLE
        } else {
            EXIT_OK
        }
    }

    fn summary(&self) -> Record {
        Record::Summary { pass: self.pass, fail: self.fail, not_computable: self.not_computable, exit_code: self.exit_code() }
    }

    pub fn machine(&self) -> String {
        let mut out = String::new();
        for r in self.records.iter().chain(std::iter::once(&self.summary())) {
            out.push_str(&serde_json::to_string(r).expect("records serialize"));
            out.push('\n');
        }
        out
    }

    pub fn human(&self) -> String {
        let mut out = String::new();
        for r in self.records.iter().chain(std::iter::once(&self.summary())) {
            render(&mut out, r);
        }
        out
    }
}

fn render(out: &mut String, r: &Record) {
    match r {
        Record::Header { command, params } => {
            let ps: Vec<String> = params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let _ = writeln!(out, "# stabhom {command} {}", ps.join(" "));
        }
        Record::Value { theory, degree, value, strategy, .. } => {
            let deg = degree.map(|d| format!("_{d}")).unwrap_or_default();
            let strat = strategy.map(|s| format!("  [{s:?}]")).unwrap_or_default();
            let _ = writeln!(out, "{theory}{deg} = {value}{strat}");
        }
        Record::Check { check, degree, left, right, verdict } => {
            let show = |v: &Option<usize>| v.map_or("-".to_string(), |x| x.to_string());
            let _ = writeln!(out, "{check} {degree}: {} vs {}  {}", show(left), show(right), verdict_word(verdict));
        }
        Record::Instance { tag, ring, subject, verdict, detail } => {
            let _ = writeln!(out, "{tag} [{ring}] {subject}: {}  {detail}", verdict_word(verdict));
        }
        Record::Ring { report } => {
            let _ = writeln!(out, "commutative: {}", report.commutative);
            let _ = writeln!(out, "local: {:?}", report.local);
            let _ = writeln!(out, "self-injective: {}", report.self_injective);
            let _ = writeln!(out, "id of A (left, right): {}, {}", report.id_left, report.id_right);
            let _ = writeln!(out, "Iwanaga-Gorenstein: {:?}", report.iwanaga_gorenstein);
            let _ = writeln!(out, "regular artinian: {:?}", report.regular_artinian);
        }
        Record::Note { text } => {
            let _ = writeln!(out, "{text}");
        }
        Record::Summary { pass, fail, not_computable, exit_code } => {
            let word = match *exit_code {
                EXIT_OK => "PASS",
                EXIT_FAIL => "FAIL",
                _ => "NOT COMPUTABLE",
            };
            let _ = writeln!(out, "{word}: {pass} passed, {fail} failed, {not_computable} not computable");
        }
    }
}

fn verdict_word(v: &Verdict) -> String {
    match v {
        Verdict::Pass => "PASS".into(),
        Verdict::Fail => "FAIL".into(),
        Verdict::Skipped(r) => format!("SKIPPED ({r})"),
    }
}
