//! Report model shared by every command, with JSON, CSV and text writers.
//!
//! JSON layout (schema version "1"):
//! `{schema_version, command, config_echo, rows, summary}` with keys in that
//! order, row keys in a fixed per-command order, reals printed with 12
//! significant digits and integers printed exactly.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_complex::Complex64;

use crate::conjecture::ConjectureReport;
use crate::identities::{IdentityDescriptor, SweepReport, SweepRow, SweepSummary};
use crate::search::SearchReport;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Null,
    Bool(bool),
    Int(i128),
    Real(f64),
    Str(String),
    Array(Vec<Value>),
    Object(Vec<(String, Value)>),
}

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Bool(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Str(v.to_string())
    }
}

impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::Str(v)
    }
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Real(v)
    }
}

macro_rules! int_value {
    ($($t:ty),*) => {$(
        impl From<$t> for Value {
            fn from(v: $t) -> Self {
                Value::Int(v as i128)
            }
        }
    )*};
}
int_value!(i8, i32, i64, i128, u32, u64, u128, usize);

impl<T: Into<Value>> From<Option<T>> for Value {
    fn from(v: Option<T>) -> Self {
        v.map_or(Value::Null, Into::into)
    }
}

/// Real with 12 significant digits; non-finite values become `null`.
pub fn format_real(x: f64) -> String {
    if !x.is_finite() {
        return "null".into();
    }
    if x == 0.0 {
        return "0.0".into();
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("float round trip");
    format!("{rounded:?}")
}

fn write_json(out: &mut String, v: &Value) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Int(i) => {
            let _ = write!(out, "{i}");
        }
        Value::Real(x) => out.push_str(&format_real(*x)),
        Value::Str(s) => write_json_str(out, s),
        Value::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_json(out, item);
            }
            out.push(']');
        }
        Value::Object(fields) => {
            out.push('{');
            for (i, (k, item)) in fields.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_json_str(out, k);
                out.push(':');
                write_json(out, item);
            }
            out.push('}');
        }
    }
}

fn write_json_str(out: &mut String, s: &str) {
    out.push('"');
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
}

fn csv_cell(v: &Value) -> String {
    let raw = match v {
        Value::Null => String::new(),
        Value::Bool(b) => b.to_string(),
        Value::Int(i) => i.to_string(),
        Value::Real(x) if x.is_finite() => format_real(*x),
        Value::Real(_) => String::new(),
        Value::Str(s) => s.clone(),
        other => {
            let mut s = String::new();
            write_json(&mut s, other);
            s
        }
    };
    if raw.contains([',', '"', '\n']) {
        format!("\"{}\"", raw.replace('"', "\"\""))
    } else {
        raw
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub fields: Vec<(String, Value)>,
    /// Cells in [`Report::columns`] order.
    pub cells: Vec<Value>,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skip: usize,
    pub max_residual: f64,
    pub numeric_failures: usize,
    pub extra: Vec<(String, Value)>,
}

impl Summary {
    fn from_sweep(s: &SweepSummary) -> Self {
        Summary {
            pass: s.pass,
            fail: s.fail,
            skip: s.skip,
            max_residual: s.max_residual,
            numeric_failures: s.numeric_failures,
            extra: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    pub config_echo: Vec<(String, Value)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Row>,
    pub summary: Summary,
}

pub const VERIFY_COLUMNS: [&str; 7] =
    ["identity", "modulus", "n", "lhs", "rhs", "residual", "pass"];
pub const SEARCH_COLUMNS: [&str; 5] = ["c", "f", "g", "primes_checked", "twisted"];
pub const CONJECTURE_COLUMNS: [&str; 6] = [
    "p",
    "k",
    "value",
    "catalan",
    "main_term",
    "normalized_residual",
];
pub const SUM_COLUMNS: [&str; 8] = ["family", "q", "m", "n", "k", "re", "im", "abs"];

fn obj(fields: Vec<(&str, Value)>) -> Vec<(String, Value)> {
    fields
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect()
}

impl Report {
    pub fn empty(
        command: &str,
        config_echo: Vec<(String, Value)>,
        columns: &[&'static str],
    ) -> Self {
        Report {
            command: command.to_string(),
            config_echo,
            columns: columns.to_vec(),
            rows: Vec::new(),
            summary: Summary::default(),
        }
    }

    /// Identity sweeps; `descriptors` supplies the modulus key (`p` or `q`).
    pub fn verify(
        command: &str,
        config_echo: Vec<(String, Value)>,
        sweeps: &[(IdentityDescriptor, SweepReport)],
    ) -> Self {
        let mut report = Self::empty(command, config_echo, &VERIFY_COLUMNS);
        let mut summary = SweepSummary::default();
        for (descriptor, sweep) in sweeps {
            summary.merge(&sweep.summary);
            let modulus_key = if descriptor.prime_modulus { "p" } else { "q" };
            report
                .rows
                .extend(sweep.rows.iter().map(|r| verify_row(modulus_key, r)));
        }
        report.summary = Summary::from_sweep(&summary);
        report
    }

    pub fn conjecture(config_echo: Vec<(String, Value)>, conj: &ConjectureReport) -> Self {
        let mut report = Self::empty("conjecture", config_echo, &CONJECTURE_COLUMNS);
        for row in &conj.rows {
            let consistent = row.residual < crate::exp_sums::RESIDUAL_TOLERANCE
                && row.matches_closed_form() != Some(false);
            if consistent {
                report.summary.pass += 1;
            } else {
                report.summary.fail += 1;
            }
            report.rows.push(Row {
                fields: obj(vec![
                    ("p", row.p.into()),
                    ("k", row.k.into()),
                    ("value", row.value.into()),
                    ("catalan", row.catalan.into()),
                    ("main_term", row.main_term.into()),
                    ("normalized_residual", row.normalized_residual.into()),
                    ("residual", row.residual.into()),
                    ("closed_form", row.closed_form.into()),
                    ("closed_form_match", row.matches_closed_form().into()),
                ]),
                cells: vec![
                    row.p.into(),
                    row.k.into(),
                    row.value.into(),
                    row.catalan.into(),
                    row.main_term.into(),
                    row.normalized_residual.into(),
                ],
                text: format!(
                    "p={} k={} value={} main_term={} normalized_residual={}{}",
                    row.p,
                    row.k,
                    row.value,
                    row.main_term,
                    format_real(row.normalized_residual),
                    match row.matches_closed_form() {
                        Some(true) => " closed_form=match",
                        Some(false) => " closed_form=MISMATCH",
                        None => "",
                    }
                ),
            });
        }
        report.summary.max_residual = conj.max_residual;
        report.summary.numeric_failures = conj.numeric_failures.len();
        report.summary.extra = obj(vec![
            (
                "max_abs_normalized_residual",
                conj.max_abs_normalized_residual.into(),
            ),
            ("closed_form_checked", conj.closed_form_checked.into()),
        ]);
        report
    }

    pub fn search(config_echo: Vec<(String, Value)>, search: &SearchReport) -> Self {
        let mut report = Self::empty("search", config_echo, &SEARCH_COLUMNS);
        for hit in &search.hits {
            report.rows.push(Row {
                fields: obj(vec![
                    ("c", hit.c.into()),
                    ("f", hit.f.to_string().into()),
                    ("g", hit.g.to_string().into()),
                    ("primes_checked", hit.primes.len().into()),
                    ("twisted", hit.twisted.into()),
                    ("structural_notes", hit.structural_notes.clone().into()),
                ]),
                cells: vec![
                    hit.c.into(),
                    hit.f.to_string().into(),
                    hit.g.to_string().into(),
                    hit.primes.len().into(),
                    hit.twisted.into(),
                ],
                text: format!(
                    "c={} {}f=[{}] g=[{}] ({})",
                    hit.c,
                    if hit.twisted { "twisted " } else { "" },
                    hit.f,
                    hit.g,
                    hit.structural_notes
                ),
            });
        }
        let hist = |h: &BTreeMap<i64, usize>| {
            Value::Object(
                h.iter()
                    .map(|(c, n)| (c.to_string(), Value::from(*n)))
                    .collect(),
            )
        };
        report.summary.pass = search.hits.len();
        report.summary.extra = obj(vec![
            ("histogram", hist(&search.histogram)),
            ("twisted_histogram", hist(&search.twisted_histogram)),
            ("polys_enumerated", search.polys_enumerated.into()),
            ("primes", search.primes.len().into()),
            (
                "fundamentally_different",
                "operational: symbols differ at some x where neither vanishes".into(),
            ),
        ]);
        report
    }

    /// One ad-hoc sum evaluation.
    pub fn sum(
        config_echo: Vec<(String, Value)>,
        family: &str,
        q: u64,
        m: i64,
        n: Option<i64>,
        k: Option<u32>,
        value: Complex64,
    ) -> Self {
        let mut report = Self::empty("sum", config_echo, &SUM_COLUMNS);
        let sign = if value.im < 0.0 { '-' } else { '+' };
        report.rows.push(Row {
            fields: obj(vec![
                ("family", family.into()),
                ("q", q.into()),
                ("m", m.into()),
                ("n", n.into()),
                ("k", k.into()),
                ("re", value.re.into()),
                ("im", value.im.into()),
                ("abs", value.norm().into()),
            ]),
            cells: vec![
                family.into(),
                q.into(),
                m.into(),
                n.into(),
                k.into(),
                value.re.into(),
                value.im.into(),
                value.norm().into(),
            ],
            text: format!("{:.7} {sign} {:.7}i", value.re, value.im.abs()),
        });
        report.summary.pass = 1;
        report
    }

    pub fn to_json_value(&self) -> Value {
        let mut summary = obj(vec![
            ("pass", self.summary.pass.into()),
            ("fail", self.summary.fail.into()),
            ("skip", self.summary.skip.into()),
            ("max_residual", self.summary.max_residual.into()),
        ]);
        summary.extend(self.summary.extra.iter().cloned());
        Value::Object(obj(vec![
            ("schema_version", SCHEMA_VERSION.into()),
            ("command", self.command.as_str().into()),
            ("config_echo", Value::Object(self.config_echo.clone())),
            (
                "rows",
                Value::Array(
                    self.rows
                        .iter()
                        .map(|r| Value::Object(r.fields.clone()))
                        .collect(),
                ),
            ),
            ("summary", Value::Object(summary)),
        ]))
    }
}

fn verify_row(modulus_key: &str, row: &SweepRow) -> Row {
    match row {
        SweepRow::Evaluated(o) => {
            let mut fields = vec![
                ("identity".to_string(), o.identity_id.into()),
                (modulus_key.to_string(), o.modulus.into()),
            ];
            if let Some(n) = o.n {
                fields.push(("n".into(), n.into()));
            }
            fields.extend(obj(vec![
                ("lhs", o.lhs.into()),
                ("rhs", o.rhs.into()),
                ("residual", o.residual.into()),
                ("pass", o.pass.into()),
            ]));
            if o.numeric_failure {
                fields.push(("numeric_failure".into(), true.into()));
            }
            Row {
                fields,
                cells: vec![
                    o.identity_id.into(),
                    o.modulus.into(),
                    o.n.into(),
                    o.lhs.into(),
                    o.rhs.into(),
                    o.residual.into(),
                    o.pass.into(),
                ],
                text: format!(
                    "{} {}={}{} lhs={} rhs={} residual={} {}",
                    o.identity_id,
                    modulus_key,
                    o.modulus,
                    o.n.map(|n| format!(" n={n}")).unwrap_or_default(),
                    o.lhs,
                    o.rhs,
                    format_real(o.residual),
                    if o.pass { "PASS" } else { "FAIL" }
                ),
            }
        }
        SweepRow::Skipped {
            identity_id,
            modulus,
            n,
            reason,
        } => {
            let mut fields = vec![
                ("identity".to_string(), (*identity_id).into()),
                (modulus_key.to_string(), (*modulus).into()),
            ];
            if let Some(n) = n {
                fields.push(("n".into(), (*n).into()));
            }
            fields.push(("skipped".into(), reason.as_str().into()));
            Row {
                fields,
                cells: vec![
                    (*identity_id).into(),
                    (*modulus).into(),
                    (*n).into(),
                    Value::Null,
                    Value::Null,
                    Value::Null,
                    "skip".into(),
                ],
                text: format!("{identity_id} {modulus_key}={modulus} skipped: {reason}"),
            }
        }
        SweepRow::Errored {
            identity_id,
            modulus,
            n,
            message,
        } => {
            let mut fields = vec![
                ("identity".to_string(), (*identity_id).into()),
                (modulus_key.to_string(), (*modulus).into()),
            ];
            if let Some(n) = n {
                fields.push(("n".into(), (*n).into()));
            }
            fields.push(("pass".into(), false.into()));
            fields.push(("error".into(), message.as_str().into()));
            Row {
                fields,
                cells: vec![
                    (*identity_id).into(),
                    (*modulus).into(),
                    (*n).into(),
                    Value::Null,
                    Value::Null,
                    Value::Null,
                    "error".into(),
                ],
                text: format!("{identity_id} {modulus_key}={modulus} ERROR: {message}"),
            }
        }
    }
}

pub fn emit_json(report: &Report) -> Vec<u8> {
    let mut out = String::new();
    write_json(&mut out, &report.to_json_value());
    out.push('\n');
    out.into_bytes()
}

pub fn emit_csv(report: &Report) -> Vec<u8> {
    let mut out = report.columns.join(",");
    out.push('\n');
    for row in &report.rows {
        let cells: Vec<String> = row.cells.iter().map(csv_cell).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out.into_bytes()
}

pub fn emit_text(report: &Report) -> Vec<u8> {
    let mut out = String::new();
    for row in &report.rows {
        out.push_str(&row.text);
        out.push('\n');
    }
    if report.command != "sum" {
        let _ = writeln!(
            out,
            "summary: pass={} fail={} skip={} max_residual={}",
            report.summary.pass,
            report.summary.fail,
            report.summary.skip,
            format_real(report.summary.max_residual)
        );
    }
    out.into_bytes()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identities::{list_identities, sweep};

    #[test]
    fn real_formatting() {
        assert_eq!(format_real(0.0), "0.0");
        assert_eq!(format_real(0.381_966_011_250_105_1), "0.38196601125");
        assert_eq!(format_real(1.0), "1.0");
        assert_eq!(format_real(-2.5e-13), "-2.5e-13");
        assert_eq!(format_real(1.234_567_890_123_4e20), "1.23456789012e20");
        assert_eq!(format_real(f64::NAN), "null");
    }

    #[test]
    fn empty_sweep_json() {
        let r = Report::verify("verify", Vec::new(), &[]);
        let s = String::from_utf8(emit_json(&r)).unwrap();
        assert_eq!(
            s,
            "{\"schema_version\":\"1\",\"command\":\"verify\",\"config_echo\":{},\"rows\":[],\
             \"summary\":{\"pass\":0,\"fail\":0,\"skip\":0,\"max_residual\":0.0}}\n"
        );
    }

    #[test]
    fn corollary_row_json() {
        let d = list_identities()
            .into_iter()
            .find(|d| d.id == "corollary1")
            .unwrap();
        let s = sweep("corollary1", 5, 5, &[]).unwrap();
        let r = Report::verify("verify", Vec::new(), &[(d, s)]);
        let json = String::from_utf8(emit_json(&r)).unwrap();
        assert!(json.contains(
            "{\"identity\":\"corollary1\",\"p\":5,\"lhs\":2,\"rhs\":2,\"residual\":0.0,\"pass\":true}"
        ));
    }

    #[test]
    fn csv_quoting() {
        assert_eq!(csv_cell(&Value::Str("a,b".into())), "\"a,b\"");
        assert_eq!(csv_cell(&Value::Str("x^2 + 1".into())), "x^2 + 1");
        assert_eq!(csv_cell(&Value::Null), "");
    }

    #[test]
    fn json_string_escapes() {
        let mut s = String::new();
        write_json_str(&mut s, "a\"b\\c\n\u{1}");
        assert_eq!(s, "\"a\\\"b\\\\c\\n\\u0001\"");
    }

    #[test]
    fn sum_text() {
        let r = Report::sum(
            Vec::new(),
            "kloosterman",
            5,
            1,
            Some(1),
            None,
            Complex64::new(0.381_966_011_25, 1e-17),
        );
        assert_eq!(
            String::from_utf8(emit_text(&r)).unwrap(),
            "0.3819660 + 0.0000000i\n"
        );
        let r = Report::sum(
            Vec::new(),
            "twisted",
            5,
            1,
            None,
            Some(2),
            Complex64::new(-0.5, -2.0),
        );
        assert_eq!(
            String::from_utf8(emit_text(&r)).unwrap(),
            "-0.5000000 - 2.0000000i\n"
        );
    }
}
