//! The JSON report shared by `check` and `analyze`, and aggregate counts.
//!
//! ```json
//! {"files": [{"path": "a.c", "violations": [
//!     {"offset": 8, "line": 1, "col": 9, "kind": "unmatched_opener",
//!      "found": "{", "expected": null, "context": "string_literal"}]}],
//!  "summary": {"total": 1, "by_context": {...}, "by_file": {"a.c": 1}}}
//! ```

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::analyzer::{ContextViolation, RegionContext};
use crate::validate::{Violation, ViolationKind};

/// Per-context, per-kind violation counts plus per-file totals.
///
/// `by_context` always lists every context and every kind, zeros included.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub by_context: BTreeMap<RegionContext, BTreeMap<ViolationKind, usize>>,
    pub by_file: BTreeMap<String, usize>,
}

impl Default for Summary {
    fn default() -> Self {
        let kinds: BTreeMap<ViolationKind, usize> = ViolationKind::ALL.iter().map(|&k| (k, 0)).collect();
        Summary {
            total: 0,
            by_context: RegionContext::ALL.iter().map(|&c| (c, kinds.clone())).collect(),
            by_file: BTreeMap::new(),
        }
    }
}

impl Summary {
    pub fn add(&mut self, v: &ContextViolation) {
        self.total += 1;
        *self
            .by_context
            .entry(v.context)
            .or_default()
            .entry(v.violation.kind)
            .or_default() += 1;
        *self.by_file.entry(v.file.clone()).or_default() += 1;
    }

    /// Combines two summaries. Associative and commutative, with
    /// `Summary::default()` as identity.
    pub fn merge(mut self, other: &Summary) -> Summary {
        self.total += other.total;
        for (ctx, kinds) in &other.by_context {
            let mine = self.by_context.entry(*ctx).or_default();
            for (kind, n) in kinds {
                *mine.entry(*kind).or_default() += n;
            }
        }
        for (file, n) in &other.by_file {
            *self.by_file.entry(file.clone()).or_default() += n;
        }
        self
    }

    pub fn count(&self, context: RegionContext) -> usize {
        self.by_context.get(&context).map_or(0, |k| k.values().sum())
    }
}

pub fn aggregate_report(results: &[ContextViolation]) -> Summary {
    let mut summary = Summary::default();
    for v in results {
        summary.add(v);
    }
    summary
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportViolation {
    pub offset: usize,
    pub line: usize,
    pub col: usize,
    pub kind: ViolationKind,
    pub found: char,
    pub expected: Option<char>,
    /// `null` when the text was checked without a language profile.
    pub context: Option<RegionContext>,
}

impl ReportViolation {
    pub fn new(v: &Violation, context: Option<RegionContext>) -> Self {
        ReportViolation {
            offset: v.offset,
            line: v.line,
            col: v.column,
            kind: v.kind,
            found: v.found,
            expected: v.expected,
            context,
        }
    }

    pub fn to_violation(&self) -> Violation {
        Violation {
            offset: self.offset,
            line: self.line,
            column: self.col,
            kind: self.kind,
            found: self.found,
            expected: self.expected,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileReport {
    pub path: String,
    pub violations: Vec<ReportViolation>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub files: Vec<FileReport>,
    pub summary: Summary,
}

impl Report {
    /// Builds a report from analyzer results; files appear in path order.
    pub fn from_analysis(paths: impl IntoIterator<Item = String>, results: &[ContextViolation]) -> Self {
        let mut files: BTreeMap<String, Vec<ReportViolation>> = paths.into_iter().map(|p| (p, Vec::new())).collect();
        for v in results {
            files
                .entry(v.file.clone())
                .or_default()
                .push(ReportViolation::new(&v.violation, Some(v.context)));
        }
        let mut summary = aggregate_report(results);
        for path in files.keys() {
            summary.by_file.entry(path.clone()).or_insert(0);
        }
        Report {
            files: files
                .into_iter()
                .map(|(path, violations)| FileReport { path, violations })
                .collect(),
            summary,
        }
    }

    /// Builds a report for plain validation, with no context labels.
    ///
    /// Summary counts land in the `code` bucket.
    pub fn from_validation(files: Vec<(String, Vec<Violation>)>) -> Self {
        let mut summary = Summary::default();
        let files = files
            .into_iter()
            .map(|(path, vs)| {
                summary.by_file.entry(path.clone()).or_insert(0);
                for v in &vs {
                    summary.add(&ContextViolation {
                        file: path.clone(),
                        violation: v.clone(),
                        context: RegionContext::Code,
                    });
                }
                FileReport {
                    violations: vs.iter().map(|v| ReportViolation::new(v, None)).collect(),
                    path,
                }
            })
            .collect();
        Report { files, summary }
    }
}
