//! Reference class tables for `H(2,3)` and `H(2,4)` and checks of scan
//! reports against them.
//!
//! The `H(2,3)` table names vertices by figure labels, mapped to mixed-radix
//! positions through `label_positions`. The `H(2,4)` table uses 1-based
//! mixed-radix indices directly. Both files are embedded at build time.

use std::collections::BTreeMap;

use oscnet_core::enumerate::EntropyClassReport;
use oscnet_core::Bipartition;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const TABLE1_JSON: &str = include_str!("../data/h23_table1.json");
pub const TABLE2_JSON: &str = include_str!("../data/h24_table2.json");

#[derive(Debug, Clone, Deserialize)]
pub struct GraphShape {
    pub d: usize,
    pub n: usize,
}

#[derive(Debug, Clone, Deserialize)]
pub struct Table1Set {
    pub set: usize,
    pub partitions: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct Table1 {
    pub format_version: u32,
    pub graph: GraphShape,
    pub part_size: usize,
    pub labeling: String,
    /// `[row, col]` of each figure label, label 1 first.
    pub label_positions: Vec<[usize; 2]>,
    pub sets: Vec<Table1Set>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct Table2Row {
    pub set: usize,
    pub abundance: usize,
    pub agent: Vec<usize>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct Table2 {
    pub format_version: u32,
    pub graph: GraphShape,
    pub part_size: usize,
    pub labeling: String,
    pub rows: Vec<Table2Row>,
    pub max_entropy_partition_in_text: Vec<usize>,
    pub min_entropy_partition_in_text: Vec<usize>,
}

pub fn table1() -> Table1 {
    serde_json::from_str(TABLE1_JSON).expect("embedded H(2,3) table is valid JSON")
}

pub fn table2() -> Table2 {
    serde_json::from_str(TABLE2_JSON).expect("embedded H(2,4) table is valid JSON")
}

impl Table1 {
    pub fn vertex_of_label(&self, label: usize) -> Option<usize> {
        let [row, col] = *self.label_positions.get(label.checked_sub(1)?)?;
        Some(row * self.graph.n + col)
    }

    pub fn bipartition(&self, labels: &[usize]) -> Result<Bipartition, CliError> {
        let total = self.graph.n.pow(self.graph.d as u32);
        let verts = labels
            .iter()
            .map(|&l| {
                self.vertex_of_label(l)
                    .ok_or_else(|| CliError::Validation(format!("figure label {l} out of range")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Bipartition::new(verts, total)?)
    }

    /// Every distinct listed partition with the (sorted, deduplicated) sets
    /// it appears in and the number of times it is listed.
    pub fn listings(&self) -> Result<BTreeMap<Bipartition, (Vec<usize>, usize)>, CliError> {
        let mut out: BTreeMap<Bipartition, (Vec<usize>, usize)> = BTreeMap::new();
        for s in &self.sets {
            for labels in &s.partitions {
                let entry = out.entry(self.bipartition(labels)?).or_default();
                if !entry.0.contains(&s.set) {
                    entry.0.push(s.set);
                    entry.0.sort_unstable();
                }
                entry.1 += 1;
            }
        }
        Ok(out)
    }

    pub fn labels_of(&self, p: &Bipartition) -> Vec<usize> {
        let mut labels: Vec<usize> = p
            .part_a()
            .iter()
            .filter_map(|&v| (1..=self.label_positions.len()).find(|&l| self.vertex_of_label(l) == Some(v)))
            .collect();
        labels.sort_unstable();
        labels
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckKind {
    /// Must hold for the check flag to succeed.
    Requirement,
    /// Informational; never fails.
    Note,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableCheck {
    pub name: String,
    pub kind: CheckKind,
    pub passed: bool,
    pub details: Vec<String>,
}

impl TableCheck {
    fn requirement(name: &str, passed: bool, details: Vec<String>) -> Self {
        TableCheck {
            name: name.into(),
            kind: CheckKind::Requirement,
            passed,
            details,
        }
    }

    fn note(name: &str, details: Vec<String>) -> Self {
        TableCheck {
            name: name.into(),
            kind: CheckKind::Note,
            passed: true,
            details,
        }
    }
}

/// Failed requirements rendered as a diff-like listing, or `None`.
pub fn failure_summary(checks: &[TableCheck]) -> Option<String> {
    let failed: Vec<&TableCheck> = checks.iter().filter(|c| !c.passed).collect();
    if failed.is_empty() {
        return None;
    }
    let mut out = String::new();
    for c in failed {
        out.push_str(&format!("- {}\n", c.name));
        for d in &c.details {
            out.push_str(&format!("    {d}\n"));
        }
    }
    Some(out)
}

fn fmt_labels(labels: &[usize]) -> String {
    let parts: Vec<String> = labels.iter().map(|l| l.to_string()).collect();
    format!("({})", parts.join(","))
}

fn fmt_class(class: Option<usize>) -> String {
    class.map_or_else(|| "none".to_string(), |c| (c + 1).to_string())
}

fn require_members(report: &EntropyClassReport) -> Result<(), CliError> {
    if report.classes.iter().any(|c| c.members.is_none()) {
        return Err(CliError::Validation(
            "table checks need a scan that kept class members".into(),
        ));
    }
    Ok(())
}

/// Checks a `size_a = 5` scan of `H(2,3)`. Class `k` (1-based, largest
/// entropy first) is compared with set `k`. A partition listed in several
/// sets must land in one of them; the repeats are reported as notes.
pub fn check_table1(report: &EntropyClassReport, table: &Table1) -> Result<Vec<TableCheck>, CliError> {
    require_members(report)?;
    let listings = table.listings()?;
    let listed_total: usize = table.sets.iter().map(|s| s.partitions.len()).sum();
    let mut checks = vec![
        TableCheck::requirement(
            "partition count",
            report.total_partitions == listed_total,
            vec![format!(
                "scan {}, table lists {}",
                report.total_partitions, listed_total
            )],
        ),
        TableCheck::requirement(
            "class count",
            report.classes.len() == table.sets.len(),
            vec![format!("scan {}, table {}", report.classes.len(), table.sets.len())],
        ),
    ];

    let mut wrong = Vec::new();
    let mut repeated = Vec::new();
    for (p, (sets, count)) in &listings {
        let labels = fmt_labels(&table.labels_of(p));
        let class = report.class_of(p);
        let found = fmt_class(class);
        if !class.is_some_and(|c| sets.contains(&(c + 1))) {
            wrong.push(format!("{labels}: listed in set(s) {sets:?}, scan class {found}"));
        }
        if *count > 1 {
            repeated.push(format!(
                "{labels}: listed {count} times in set(s) {sets:?}, scan class {found}"
            ));
        }
    }
    checks.push(TableCheck::requirement(
        "set membership",
        wrong.is_empty(),
        if wrong.is_empty() {
            vec![format!("{} distinct listed partitions in their sets", listings.len())]
        } else {
            wrong
        },
    ));
    checks.push(TableCheck::note("repeated listings", repeated));

    let mut unlisted = Vec::new();
    for (k, class) in report.classes.iter().enumerate() {
        for p in class.members.as_deref().unwrap_or(&[]) {
            if !listings.contains_key(p) {
                unlisted.push(format!("{}: scan class {}", fmt_labels(&table.labels_of(p)), k + 1));
            }
        }
    }
    checks.push(TableCheck::note("unlisted partitions", unlisted));
    Ok(checks)
}

/// Looks `labels` (1-based) up in a report, using the complement when the
/// scan kept only partitions containing vertex 0.
pub fn class_of_labels(report: &EntropyClassReport, labels: &[usize], total: usize) -> Result<Option<usize>, CliError> {
    let p = Bipartition::from_one_based(labels, total)?;
    Ok(report.class_of(&p).or_else(|| report.class_of(&p.complement())))
}

/// Checks a `size_a = 8` scan of `H(2,4)` with complements merged.
pub fn check_table2(report: &EntropyClassReport, table: &Table2) -> Result<Vec<TableCheck>, CliError> {
    require_members(report)?;
    let total = table.graph.n.pow(table.graph.d as u32);
    let expected: Vec<usize> = table.rows.iter().map(|r| r.abundance).collect();
    let found: Vec<usize> = report.classes.iter().map(|c| c.abundance).collect();
    let expected_sum: usize = expected.iter().sum();

    let mut checks = vec![
        TableCheck::requirement(
            "partition count",
            report.total_partitions == expected_sum,
            vec![format!(
                "scan {}, table abundances sum to {}",
                report.total_partitions, expected_sum
            )],
        ),
        TableCheck::requirement(
            "class count",
            found.len() == expected.len(),
            vec![format!("scan {}, table {}", found.len(), expected.len())],
        ),
    ];

    let mut sorted_expected = expected.clone();
    sorted_expected.sort_unstable();
    let mut sorted_found = found.clone();
    sorted_found.sort_unstable();
    checks.push(TableCheck::requirement(
        "abundance multiset",
        sorted_found == sorted_expected,
        vec![format!("scan {sorted_found:?}"), format!("table {sorted_expected:?}")],
    ));
    let mut order = Vec::new();
    for (k, (e, f)) in expected.iter().zip(&found).enumerate() {
        if e != f {
            order.push(format!("row {}: table {e}, scan {f}", k + 1));
        }
    }
    checks.push(TableCheck::requirement(
        "abundance order",
        order.is_empty() && found.len() == expected.len(),
        order,
    ));

    let min_labels = &table.min_entropy_partition_in_text;
    let min_class = class_of_labels(report, min_labels, total)?;
    let last = report.classes.len().checked_sub(1);
    let smallest = report.classes.last().map(|c| c.abundance);
    checks.push(TableCheck::requirement(
        "minimum class",
        min_class.is_some() && min_class == last && smallest == table.rows.last().map(|r| r.abundance),
        vec![format!(
            "{} in class {} of {}, abundance {}",
            fmt_labels(min_labels),
            fmt_class(min_class),
            report.classes.len(),
            smallest.map_or_else(|| "none".to_string(), |a| a.to_string())
        )],
    ));

    let mut agents = Vec::new();
    let mut agents_ok = true;
    for (k, row) in table.rows.iter().enumerate().skip(1) {
        let class = class_of_labels(report, &row.agent, total)?;
        if class != Some(k) {
            agents_ok = false;
            agents.push(format!(
                "row {}: agent {} in scan class {}",
                row.set,
                fmt_labels(&row.agent),
                fmt_class(class)
            ));
        }
    }
    if agents_ok {
        agents.push(format!("rows 2..={} agents in their own classes", table.rows.len()));
    }
    checks.push(TableCheck::requirement("agents", agents_ok, agents));

    let mut top = Vec::new();
    if let Some(first) = table.rows.first() {
        let class = class_of_labels(report, &first.agent, total)?;
        top.push(format!(
            "row 1 agent {} is in scan class {}",
            fmt_labels(&first.agent),
            fmt_class(class)
        ));
    }
    let stated = &table.max_entropy_partition_in_text;
    let class = class_of_labels(report, stated, total)?;
    top.push(format!(
        "stated maximum {} is in scan class {}",
        fmt_labels(stated),
        fmt_class(class)
    ));
    checks.push(TableCheck::note("top class", top));
    Ok(checks)
}
