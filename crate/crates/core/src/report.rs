//! Tabular views over derived evaluation items.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use crate::derive::{EvaluationItem, EvaluationItemSet};
use crate::diagnostic::{codes, Diagnostic};
use crate::taxonomy::Leaf;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Markdown,
    Csv,
}

impl ReportFormat {
    pub fn as_str(self) -> &'static str {
        match self {
            ReportFormat::Markdown => "markdown",
            ReportFormat::Csv => "csv",
        }
    }
}

impl fmt::Display for ReportFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "markdown" | "md" => Ok(ReportFormat::Markdown),
            "csv" => Ok(ReportFormat::Csv),
            _ => Err(format!("unknown report format `{s}`")),
        }
    }
}

const ITEM_COLUMNS: [&str; 6] = ["id", "category", "description", "sources", "severity", "rule"];

fn item_row(item: &EvaluationItem) -> [String; 6] {
    [
        item.id.clone(),
        item.category.path(),
        item.description.clone(),
        item.sources.join(", "),
        item.severity.map(|s| s.as_str().to_string()).unwrap_or_default(),
        item.rule.as_str().to_string(),
    ]
}

/// One row per item, in itemset order.
pub fn item_table(itemset: &EvaluationItemSet, format: ReportFormat) -> String {
    let rows: Vec<[String; 6]> = itemset.items.iter().map(item_row).collect();
    match format {
        ReportFormat::Markdown => {
            let mut out = markdown_row(ITEM_COLUMNS.iter().copied());
            out.push_str(&markdown_rule(ITEM_COLUMNS.len()));
            for row in &rows {
                out.push_str(&markdown_row(row.iter().map(String::as_str)));
            }
            out
        }
        ReportFormat::Csv => {
            let mut writer = csv_writer();
            writer.write_record(ITEM_COLUMNS).expect("in-memory write");
            for row in &rows {
                writer.write_record(row).expect("in-memory write");
            }
            finish_csv(writer)
        }
    }
}

/// Leaves × systems grid of item descriptions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    pub rows: Vec<Leaf>,
    pub columns: Vec<String>,
    /// `cells[row][column]`
    pub cells: Vec<Vec<Vec<String>>>,
    /// Leaves populated in every column.
    pub common_row_ids: Vec<Leaf>,
}

impl Matrix {
    /// Fails with E400 when two itemsets share a system name.
    pub fn build(itemsets: &[EvaluationItemSet]) -> Result<Matrix, Diagnostic> {
        let mut seen = HashSet::new();
        for set in itemsets {
            if !seen.insert(set.system_name.as_str()) {
                return Err(Diagnostic::error(
                    codes::DUPLICATE_SYSTEM,
                    format!("system `{}` appears more than once", set.system_name),
                )
                .with_subject(set.system_name.clone()));
            }
        }
        let rows = Leaf::ALL.to_vec();
        let cells: Vec<Vec<Vec<String>>> = rows
            .iter()
            .map(|leaf| {
                itemsets
                    .iter()
                    .map(|set| {
                        set.items
                            .iter()
                            .filter(|i| i.category == *leaf)
                            .map(|i| i.description.clone())
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let common_row_ids = rows
            .iter()
            .zip(&cells)
            .filter(|(_, row)| !row.is_empty() && row.iter().all(|cell| !cell.is_empty()))
            .map(|(leaf, _)| *leaf)
            .collect();
        Ok(Matrix {
            rows,
            columns: itemsets.iter().map(|s| s.system_name.clone()).collect(),
            cells,
            common_row_ids,
        })
    }

    pub fn entry_count(&self) -> usize {
        self.cells.iter().flatten().map(Vec::len).sum()
    }

    pub fn render(&self, format: ReportFormat) -> String {
        match format {
            ReportFormat::Markdown => self.render_markdown(),
            ReportFormat::Csv => self.render_csv(),
        }
    }

    fn render_markdown(&self) -> String {
        let mut out = String::from("# Evaluation items\n\n## Common to all systems\n\n");
        if self.common_row_ids.is_empty() {
            out.push_str("(none)\n");
        }
        for leaf in &self.common_row_ids {
            out.push_str(&format!("- {} (`{}`)\n", leaf.title(), leaf.path()));
        }
        out.push_str("\n## By category\n\n");
        let header: Vec<&str> = ["Category"]
            .into_iter()
            .chain(self.columns.iter().map(String::as_str))
            .collect();
        out.push_str(&markdown_row(header.iter().copied()));
        out.push_str(&markdown_rule(header.len()));
        for (leaf, row) in self.rows.iter().zip(&self.cells) {
            let joined: Vec<String> = row
                .iter()
                .map(|cell| {
                    cell.iter()
                        .map(|d| escape_markdown(d))
                        .collect::<Vec<_>>()
                        .join("<br>")
                })
                .collect();
            let mut line = format!("| {} |", leaf.title());
            for cell in joined {
                if cell.is_empty() {
                    line.push_str(" |");
                } else {
                    line.push_str(&format!(" {cell} |"));
                }
            }
            line.push('\n');
            out.push_str(&line);
        }
        out
    }

    fn render_csv(&self) -> String {
        let mut writer = csv_writer();
        let header: Vec<&str> = ["section", "category", "title"]
            .into_iter()
            .chain(self.columns.iter().map(String::as_str))
            .collect();
        writer.write_record(&header).expect("in-memory write");
        let common: HashSet<Leaf> = self.common_row_ids.iter().copied().collect();
        for section in ["common", "category"] {
            for (leaf, row) in self.rows.iter().zip(&self.cells) {
                if section == "common" && !common.contains(leaf) {
                    continue;
                }
                let mut record = vec![section.to_string(), leaf.path(), leaf.title().to_string()];
                record.extend(row.iter().map(|cell| cell.join("\n")));
                writer.write_record(&record).expect("in-memory write");
            }
        }
        finish_csv(writer)
    }
}

/// Builds and renders the comparison matrix.
pub fn matrix(itemsets: &[EvaluationItemSet], format: ReportFormat) -> Result<String, Diagnostic> {
    Ok(Matrix::build(itemsets)?.render(format))
}

fn escape_markdown(text: &str) -> String {
    text.replace('\\', "\\\\")
        .replace('|', "\\|")
        .replace(['\r', '\n'], " ")
}

fn markdown_row<'a>(cells: impl Iterator<Item = &'a str>) -> String {
    let mut line = String::from("|");
    for cell in cells {
        let cell = escape_markdown(cell);
        if cell.is_empty() {
            line.push_str(" |");
        } else {
            line.push_str(&format!(" {cell} |"));
        }
    }
    line.push('\n');
    line
}

fn markdown_rule(columns: usize) -> String {
    let mut line = String::from("|");
    for _ in 0..columns {
        line.push_str(" --- |");
    }
    line.push('\n');
    line
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new())
}

fn finish_csv(writer: csv::Writer<Vec<u8>>) -> String {
    let bytes = writer.into_inner().expect("in-memory flush");
    String::from_utf8(bytes).expect("csv of utf-8 input is utf-8")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Rule;

    fn item(id: &str, category: Leaf, description: &str) -> EvaluationItem {
        EvaluationItem {
            id: id.into(),
            category,
            description: description.into(),
            sources: vec!["src".into()],
            severity: None,
            rule: Rule::Cost,
        }
    }

    fn set(name: &str, items: Vec<EvaluationItem>) -> EvaluationItemSet {
        EvaluationItemSet {
            system_name: name.into(),
            items,
            warnings: vec![],
        }
    }

    #[test]
    fn empty_itemset_is_header_only() {
        let s = set("X", vec![]);
        assert_eq!(item_table(&s, ReportFormat::Markdown).lines().count(), 2);
        assert_eq!(
            item_table(&s, ReportFormat::Csv),
            "id,category,description,sources,severity,rule\n"
        );
    }

    #[test]
    fn pipes_are_escaped() {
        let s = set("X", vec![item("a", Leaf::HumanResources, "x | y")]);
        assert!(item_table(&s, ReportFormat::Markdown).contains("x \\| y"));
        assert!(item_table(&s, ReportFormat::Csv).contains("x | y"));
    }

    #[test]
    fn duplicate_names_rejected() {
        let err = Matrix::build(&[set("A", vec![]), set("A", vec![])]).unwrap_err();
        assert_eq!(err.code, codes::DUPLICATE_SYSTEM);
    }

    #[test]
    fn common_rows() {
        let m = Matrix::build(&[
            set("A", vec![item("1", Leaf::HumanResources, "h"), item("2", Leaf::Privacy, "p")]),
            set("B", vec![item("1", Leaf::HumanResources, "h2")]),
        ])
        .unwrap();
        assert_eq!(m.common_row_ids, vec![Leaf::HumanResources]);
        assert_eq!(m.entry_count(), 3);
        let md = m.render(ReportFormat::Markdown);
        assert!(md.contains("- Cost for human resources (`cost/human_resources`)"));
        assert!(md.contains("| Privacy | p | |"));
    }
}
