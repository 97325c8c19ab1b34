//! Table, CSV and JSON renderings of command results.
//!
//! Every rendering starts with the resolved configuration: `# key = value`
//! lines for table and CSV, a `config` object for JSON. Floats are printed
//! with Rust's shortest round-trip formatting, so table and CSV values carry
//! the same precision as JSON.

use oscnet_core::enumerate::EntropyClassReport;
use oscnet_core::netgraph::SchemeTensor;
use oscnet_core::strata::{FamilyReport, StratumBlock};
use oscnet_core::EntropyResult;
use serde_json::{json, Map, Value};

use crate::tables::{CheckKind, TableCheck};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

impl Format {
    pub fn as_str(&self) -> &'static str {
        match self {
            Format::Table => "table",
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// Ordered configuration echoed at the top of every output.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Header(Vec<(String, String)>);

impl Header {
    pub fn push(&mut self, key: &str, value: impl ToString) {
        self.0.push((key.to_string(), value.to_string()));
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.0
    }

    fn comments(&self) -> String {
        self.0.iter().map(|(k, v)| format!("# {k} = {v}\n")).collect()
    }

    fn json(&self) -> Value {
        Value::Object(
            self.0
                .iter()
                .map(|(k, v)| (k.clone(), Value::String(v.clone())))
                .collect(),
        )
    }
}

fn aligned(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let line = |cells: Vec<&str>| {
        let mut s = String::new();
        for (i, (cell, w)) in cells.iter().zip(&widths).enumerate() {
            if i + 1 == cells.len() {
                s.push_str(cell);
            } else {
                s.push_str(&format!("{cell:<w$}  "));
            }
        }
        let mut s = s.trim_end().to_string();
        s.push('\n');
        s
    };
    let mut out = line(headers.to_vec());
    for row in rows {
        out.push_str(&line(row.iter().map(String::as_str).collect()));
    }
    out
}

fn csv_rows(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(headers).expect("writing to memory");
    for row in rows {
        w.write_record(row).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("writing to memory")).expect("csv output is UTF-8")
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn joined(labels: &[usize], sep: &str) -> String {
    labels.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(sep)
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| "undefined".to_string(), |v| v.to_string())
}

pub fn entropy(header: &Header, r: &EntropyResult, format: Format) -> String {
    let rows: Vec<Vec<String>> = r
        .modes
        .iter()
        .enumerate()
        .map(|(i, m)| {
            vec![
                (i + 1).to_string(),
                m.gamma.to_string(),
                m.nu.to_string(),
                m.entropy.to_string(),
                m.degeneracy.to_string(),
            ]
        })
        .collect();
    let headers = ["mode", "gamma", "nu", "entropy", "degeneracy"];
    let mode_count: usize = r.modes.iter().map(|m| m.degeneracy).sum();
    match format {
        Format::Table => format!(
            "{}# total_entropy = {}\n{}",
            header.comments(),
            r.total_entropy,
            aligned(&headers, &rows)
        ),
        Format::Csv => {
            let mut all = rows;
            all.push(vec![
                "TOTAL".into(),
                String::new(),
                String::new(),
                r.total_entropy.to_string(),
                mode_count.to_string(),
            ]);
            header.comments() + &csv_rows(&headers, &all)
        }
        Format::Json => pretty(&json!({
            "config": header.json(),
            "convention": header_value(header, "convention"),
            "log_base": r.log_base.as_str(),
            "total_entropy": r.total_entropy,
            "modes": r.modes.iter().map(|m| json!({
                "gamma": m.gamma,
                "nu": m.nu,
                "entropy": m.entropy,
                "degeneracy": m.degeneracy,
            })).collect::<Vec<_>>(),
        })),
    }
}

fn header_value(header: &Header, key: &str) -> Value {
    header
        .entries()
        .iter()
        .find(|(k, _)| k == key)
        .map_or(Value::Null, |(_, v)| Value::String(v.clone()))
}

fn check_status(c: &TableCheck) -> &'static str {
    match (c.kind, c.passed) {
        (CheckKind::Note, _) => "NOTE",
        (_, true) => "PASS",
        (_, false) => "FAIL",
    }
}

fn check_lines(checks: &[TableCheck]) -> String {
    let mut out = String::new();
    for c in checks {
        out.push_str(&format!("# check {}: {}\n", c.name, check_status(c)));
        for d in &c.details {
            out.push_str(&format!("#   {d}\n"));
        }
    }
    out
}

pub fn scan(
    header: &Header,
    report: &EntropyClassReport,
    checks: &[TableCheck],
    show_members: bool,
    format: Format,
) -> String {
    let mut headers = vec!["class_id", "entropy", "abundance", "agent", "min_cut", "max_cut"];
    if show_members {
        headers.push("members");
    }
    let rows: Vec<Vec<String>> = report
        .classes
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let mut row = vec![
                (k + 1).to_string(),
                c.entropy.to_string(),
                c.abundance.to_string(),
                joined(&c.agent.to_one_based(), ";"),
                c.min_cut.to_string(),
                c.max_cut.to_string(),
            ];
            if show_members {
                let members = c.members.as_deref().unwrap_or(&[]);
                row.push(
                    members
                        .iter()
                        .map(|p| joined(&p.to_one_based(), ";"))
                        .collect::<Vec<_>>()
                        .join(" "),
                );
            }
            row
        })
        .collect();
    let summary = format!(
        "# total_partitions = {}\n# classes = {}\n# min_gap = {}\n# min_relative_gap = {}\n",
        report.total_partitions,
        report.classes.len(),
        opt(report.min_gap),
        opt(report.min_relative_gap)
    );
    match format {
        Format::Table => header.comments() + &summary + &aligned(&headers, &rows) + &check_lines(checks),
        Format::Csv => header.comments() + &summary + &csv_rows(&headers, &rows) + &check_lines(checks),
        Format::Json => pretty(&json!({
            "config": header.json(),
            "total_partitions": report.total_partitions,
            "min_gap": report.min_gap,
            "min_relative_gap": report.min_relative_gap,
            "classes": report.classes.iter().enumerate().map(|(k, c)| {
                let mut o = Map::new();
                o.insert("class_id".into(), json!(k + 1));
                o.insert("entropy".into(), json!(c.entropy));
                o.insert("min_entropy".into(), json!(c.min_entropy));
                o.insert("max_entropy".into(), json!(c.max_entropy));
                o.insert("abundance".into(), json!(c.abundance));
                o.insert("agent".into(), json!(c.agent.to_one_based()));
                o.insert("min_cut".into(), json!(c.min_cut));
                o.insert("max_cut".into(), json!(c.max_cut));
                if show_members {
                    let members: Vec<Vec<usize>> = c.members.as_deref().unwrap_or(&[])
                        .iter().map(|p| p.to_one_based()).collect();
                    o.insert("members".into(), json!(members));
                }
                Value::Object(o)
            }).collect::<Vec<_>>(),
            "checks": checks,
        })),
    }
}

/// `scale` converts the base-2 entropies of `r` to the requested base.
pub fn analytic(header: &Header, r: &FamilyReport, scale: f64, format: Format) -> String {
    let s = |x: Option<f64>| x.map(|v| v * scale);
    let headers = ["mode", "gamma", "degeneracy", "oracle_degeneracy", "entropy"];
    let rows: Vec<Vec<String>> = r
        .modes
        .iter()
        .enumerate()
        .map(|(i, m)| {
            vec![
                (i + 1).to_string(),
                m.gamma.to_string(),
                m.degeneracy.to_string(),
                m.oracle_degeneracy.to_string(),
                opt(s(m.entropy)),
            ]
        })
        .collect();
    let mut summary = format!(
        "# entropy = {}\n# derived_entropy = {}\n# oracle_entropy = {}\n# abs_diff = {}\n# agreement = {}\n",
        opt(s(r.entropy)),
        opt(s(r.derived_entropy)),
        r.oracle_entropy * scale,
        opt(s(r.abs_diff)),
        r.agreement
    );
    for n in &r.notes {
        summary.push_str(&format!("# note: {n}\n"));
    }
    match format {
        Format::Table => header.comments() + &summary + &aligned(&headers, &rows),
        Format::Csv => header.comments() + &summary + &csv_rows(&headers, &rows),
        Format::Json => pretty(&json!({
            "config": header.json(),
            "family": r.family.as_str(),
            "d": r.d,
            "n": r.n,
            "g": r.g,
            "convention": header_value(header, "convention"),
            "general": r.general,
            "modes": r.modes.iter().map(|m| json!({
                "gamma": m.gamma,
                "degeneracy": m.degeneracy,
                "oracle_degeneracy": m.oracle_degeneracy,
                "entropy": s(m.entropy),
            })).collect::<Vec<_>>(),
            "entropy": s(r.entropy),
            "derived_entropy": s(r.derived_entropy),
            "oracle_entropy": r.oracle_entropy * scale,
            "agreement": r.agreement,
            "abs_diff": s(r.abs_diff),
            "notes": r.notes,
        })),
    }
}

pub fn blocks(header: &Header, blocks: &[StratumBlock], term_counts: &[(usize, u128)], format: Format) -> String {
    let headers = [
        "block",
        "d_prime",
        "m",
        "level_offset",
        "multiplicity",
        "diag",
        "offdiag",
    ];
    let rows: Vec<Vec<String>> = blocks
        .iter()
        .enumerate()
        .map(|(i, b)| {
            let list = |xs: &[f64]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(";");
            vec![
                (i + 1).to_string(),
                b.d_prime.to_string(),
                b.m.to_string(),
                b.level_offset.to_string(),
                b.multiplicity.to_string(),
                list(b.chain.diag()),
                list(b.chain.offdiag()),
            ]
        })
        .collect();
    let dimension: u128 = blocks.iter().map(|b| b.multiplicity * (b.d_prime as u128 + 1)).sum();
    let terms: u128 = term_counts.iter().map(|t| t.1).sum();
    let summary = format!(
        "# dimension = {dimension}\n# term_counts = {}\n# term_total = {terms}\n",
        term_counts
            .iter()
            .map(|t| t.1.to_string())
            .collect::<Vec<_>>()
            .join(";")
    );
    match format {
        Format::Table => header.comments() + &summary + &aligned(&headers, &rows),
        Format::Csv => header.comments() + &summary + &csv_rows(&headers, &rows),
        Format::Json => pretty(&json!({
            "config": header.json(),
            "dimension": dimension.to_string(),
            "blocks": blocks.iter().map(|b| json!({
                "d_prime": b.d_prime,
                "m": b.m,
                "level_offset": b.level_offset,
                "multiplicity": b.multiplicity.to_string(),
                "diag": b.chain.diag(),
                "offdiag": b.chain.offdiag(),
            })).collect::<Vec<_>>(),
            "term_counts": term_counts.iter().map(|(m, c)| json!({"m": m, "count": c.to_string()})).collect::<Vec<_>>(),
            "term_total": terms.to_string(),
        })),
    }
}

pub fn verify(header: &Header, t: &SchemeTensor, format: Format) -> String {
    let c = t.class_count();
    let headers = ["k", "i", "j", "p"];
    let mut rows = Vec::new();
    for k in 0..c {
        for i in 0..c {
            for j in 0..c {
                rows.push(vec![
                    k.to_string(),
                    i.to_string(),
                    j.to_string(),
                    t.p(k, i, j).to_string(),
                ]);
            }
        }
    }
    let valencies: Vec<u64> = (0..c).map(|i| t.valency(i)).collect();
    let summary = format!(
        "# classes = {c}\n# valencies = {}\n# commutative = {}\n",
        valencies.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(";"),
        t.is_commutative()
    );
    match format {
        Format::Table => header.comments() + &summary + &aligned(&headers, &rows),
        Format::Csv => header.comments() + &summary + &csv_rows(&headers, &rows),
        Format::Json => {
            let p: Vec<Vec<Vec<u64>>> = (0..c)
                .map(|k| (0..c).map(|i| (0..c).map(|j| t.p(k, i, j)).collect()).collect())
                .collect();
            pretty(&json!({
                "config": header.json(),
                "classes": c,
                "valencies": valencies,
                "commutative": t.is_commutative(),
                "p": p,
            }))
        }
    }
}
