//! Report assembly and output (CSV rows, JSON report, SVG line charts).

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{DunklError, Result};
use crate::harness::config::ExperimentConfig;
use crate::inequalities::{Cell, RatioSample, TheoremId};

/// Cells of one theorem that did not apply to one corpus member.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkippedCell {
    pub theorem: TheoremId,
    pub corpus_id: String,
    pub cells: usize,
    pub reason: String,
}

/// One value of a two-sided equivalence ratio.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceSample {
    pub name: String,
    pub corpus_id: String,
    pub params: String,
    pub value: f64,
}

/// `[min, max]` of an equivalence ratio over the sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bracket {
    pub name: String,
    pub min: f64,
    pub max: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub theorem: TheoremId,
    pub rows: usize,
    /// Over non-degenerate rows; 0 when there are none.
    pub max_ratio: f64,
    pub min_ratio: f64,
    pub degenerate: usize,
    pub surrogate: usize,
}

/// Drift of one summary quantity between the base and the refined run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RefinementDelta {
    pub quantity: String,
    pub base: f64,
    pub refined: f64,
    pub rel_change: f64,
    pub flagged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub config: ExperimentConfig,
    pub rows: Vec<RatioSample>,
    pub summaries: Vec<Summary>,
    pub skipped: Vec<SkippedCell>,
    pub equivalences: Vec<EquivalenceSample>,
    pub brackets: Vec<Bracket>,
    pub refinement: Vec<RefinementDelta>,
}

fn cmp_opt(a: Option<f64>, b: Option<f64>) -> Ordering {
    match (a, b) {
        (None, None) => Ordering::Equal,
        (None, Some(_)) => Ordering::Less,
        (Some(_), None) => Ordering::Greater,
        (Some(x), Some(y)) => x.total_cmp(&y),
    }
}

fn cmp_cells(a: &Cell, b: &Cell) -> Ordering {
    cmp_opt(a.p, b.p)
        .then(cmp_opt(a.q, b.q))
        .then(cmp_opt(a.r, b.r))
        .then(cmp_opt(a.m, b.m))
        .then(cmp_opt(a.s, b.s))
        .then(cmp_opt(a.n_or_delta, b.n_or_delta))
        .then(a.variant_label().cmp(&b.variant_label()))
}

/// Sort key of a row: theorem, corpus id, cell.
pub fn row_order(a: &RatioSample, b: &RatioSample) -> Ordering {
    a.theorem.cmp(&b.theorem).then(a.corpus_id.cmp(&b.corpus_id)).then(cmp_cells(&a.cell, &b.cell))
}

impl Report {
    /// Sorts everything by key and recomputes summaries and brackets.
    pub fn assemble(
        config: ExperimentConfig,
        mut rows: Vec<RatioSample>,
        mut skipped: Vec<SkippedCell>,
        mut equivalences: Vec<EquivalenceSample>,
    ) -> Self {
        rows.sort_by(row_order);
        skipped.sort_by(|a, b| a.theorem.cmp(&b.theorem).then(a.corpus_id.cmp(&b.corpus_id)));
        equivalences.sort_by(|a, b| {
            a.name.cmp(&b.name).then(a.corpus_id.cmp(&b.corpus_id)).then(a.params.cmp(&b.params))
        });
        let summaries = summarize(&rows);
        let brackets = brackets(&equivalences);
        Self { config, rows, summaries, skipped, equivalences, brackets, refinement: Vec::new() }
    }

    pub fn summary(&self, id: TheoremId) -> Option<&Summary> {
        self.summaries.iter().find(|s| s.theorem == id)
    }

    pub fn bracket(&self, name: &str) -> Option<&Bracket> {
        self.brackets.iter().find(|b| b.name == name)
    }

    /// Whether the refinement study flagged any quantity.
    pub fn unstable(&self) -> bool {
        self.refinement.iter().any(|d| d.flagged)
    }
}

/// Per-theorem summaries, recomputable from the rows.
pub fn summarize(rows: &[RatioSample]) -> Vec<Summary> {
    let mut by: BTreeMap<TheoremId, Vec<&RatioSample>> = BTreeMap::new();
    for r in rows {
        by.entry(r.theorem).or_default().push(r);
    }
    by.into_iter()
        .map(|(theorem, rs)| {
            let live: Vec<f64> = rs.iter().filter(|r| !r.degenerate).map(|r| r.ratio).collect();
            Summary {
                theorem,
                rows: rs.len(),
                max_ratio: live.iter().copied().fold(0.0, f64::max),
                min_ratio: if live.is_empty() {
                    0.0
                } else {
                    live.iter().copied().fold(f64::INFINITY, f64::min)
                },
                degenerate: rs.iter().filter(|r| r.degenerate).count(),
                surrogate: rs.iter().filter(|r| r.surrogate).count(),
            }
        })
        .collect()
}

/// Brackets per equivalence name.
pub fn brackets(samples: &[EquivalenceSample]) -> Vec<Bracket> {
    let mut by: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
    for s in samples {
        by.entry(&s.name).or_default().push(s.value);
    }
    by.into_iter()
        .map(|(name, v)| Bracket {
            name: name.to_string(),
            min: v.iter().copied().fold(f64::INFINITY, f64::min),
            max: v.iter().copied().fold(0.0, f64::max),
            samples: v.len(),
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    SvgLines,
}

impl std::str::FromStr for Format {
    type Err = DunklError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "svg" | "svg-lines" => Ok(Format::SvgLines),
            _ => Err(DunklError::Config(format!("unknown report format {s:?}"))),
        }
    }
}

/// Flat CSV row.
#[derive(Debug, Serialize, Deserialize)]
struct CsvRow {
    theorem: TheoremId,
    corpus_id: String,
    p: Option<f64>,
    q: Option<f64>,
    r: Option<f64>,
    m: Option<f64>,
    s: Option<f64>,
    n_or_delta: Option<f64>,
    lhs: f64,
    rhs: f64,
    ratio: f64,
    surrogate: bool,
    degenerate: bool,
}

/// Writes the report in `format` under `dir`; returns the files written.
pub fn emit_report(report: &Report, format: Format, dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    match format {
        Format::Csv => {
            let path = dir.join("ratios.csv");
            write_csv(&report.rows, &path)?;
            Ok(vec![path])
        }
        Format::Json => {
            let path = dir.join("report.json");
            serde_json::to_writer_pretty(BufWriter::new(File::create(&path)?), report)?;
            Ok(vec![path])
        }
        Format::SvgLines => {
            let mut out = Vec::new();
            for s in &report.summaries {
                let rows: Vec<&RatioSample> =
                    report.rows.iter().filter(|r| r.theorem == s.theorem).collect();
                let path = dir.join(format!("{}.svg", s.theorem));
                std::fs::write(&path, svg_chart(s.theorem, &rows))?;
                out.push(path);
            }
            Ok(out)
        }
    }
}

/// Writes rows in the CSV schema.
pub fn write_csv(rows: &[RatioSample], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_writer(BufWriter::new(File::create(path)?));
    for r in rows {
        w.serialize(CsvRow {
            theorem: r.theorem,
            corpus_id: tagged_corpus_id(r),
            p: r.cell.p,
            q: r.cell.q,
            r: r.cell.r,
            m: r.cell.m,
            s: r.cell.s,
            n_or_delta: r.cell.n_or_delta,
            lhs: r.lhs,
            rhs: r.rhs,
            ratio: r.ratio,
            surrogate: r.surrogate,
            degenerate: r.degenerate,
        })?;
    }
    w.flush()?;
    Ok(())
}

/// The CSV corpus id: the member id with the variant label appended after `#`.
pub fn tagged_corpus_id(r: &RatioSample) -> String {
    match r.cell.variant_label() {
        Some(v) => format!("{}#{v}", r.corpus_id),
        None => r.corpus_id.clone(),
    }
}

/// Reads rows written by [`write_csv`].
pub fn read_csv(path: &Path) -> Result<Vec<RatioSample>> {
    let mut rdr = csv::Reader::from_reader(BufReader::new(File::open(path)?));
    rdr.deserialize::<CsvRow>()
        .map(|row| {
            let row = row?;
            let (corpus_id, variant) = match row.corpus_id.split_once('#') {
                Some((a, b)) => (a.to_string(), Some(b.to_string())),
                None => (row.corpus_id, None),
            };
            let mut cell = Cell {
                p: row.p,
                q: row.q,
                r: row.r,
                m: row.m,
                s: row.s,
                n_or_delta: row.n_or_delta,
                ..Default::default()
            };
            if let Some(v) = variant {
                for part in v.split('/') {
                    match part {
                        "lower" => cell.side = Some(crate::inequalities::Side::Lower),
                        "upper" => cell.side = Some(crate::inequalities::Side::Upper),
                        "near-best" => {
                            cell.approximant = Some(crate::besov::ApproximantChoice::NearBest)
                        }
                        "vallee-poussin" => {
                            cell.approximant = Some(crate::besov::ApproximantChoice::ValleePoussin)
                        }
                        other => {
                            return Err(DunklError::Config(format!(
                                "unknown row variant {other:?}"
                            )))
                        }
                    }
                }
            }
            Ok(RatioSample {
                theorem: row.theorem,
                corpus_id,
                cell,
                lhs: row.lhs,
                rhs: row.rhs,
                ratio: row.ratio,
                surrogate: row.surrogate,
                degenerate: row.degenerate,
            })
        })
        .collect()
}

/// Reads a report written with [`Format::Json`].
pub fn read_json(path: &Path) -> Result<Report> {
    Ok(serde_json::from_reader(BufReader::new(File::open(path)?))?)
}

const PALETTE: [&str; 8] =
    ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#7f7f7f"];

/// One polyline per corpus id: `log10(ratio)` against the cell index in
/// sorted order.
fn svg_chart(id: TheoremId, rows: &[&RatioSample]) -> String {
    let (w, h, pad) = (720.0, 420.0, 50.0);
    let mut series: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    for r in rows {
        if !r.degenerate && r.ratio > 0.0 {
            series.entry(tagged_corpus_id(r)).or_default().push(r.ratio.log10());
        }
    }
    let all: Vec<f64> = series.values().flatten().copied().collect();
    let (lo, hi) =
        all.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), v| (l.min(*v), h.max(*v)));
    let (lo, hi) = if all.is_empty() {
        (-1.0, 1.0)
    } else if hi - lo < 1e-9 {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    };
    let longest = series.values().map(Vec::len).max().unwrap_or(1).max(2);
    let x = |i: usize| pad + (w - 2.0 * pad) * i as f64 / (longest - 1) as f64;
    let y = |v: f64| h - pad - (h - 2.0 * pad) * (v - lo) / (hi - lo);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{pad}" y="20" font-size="14">{id}: log10(lhs/rhs) per cell</text>"#
    );
    let _ = writeln!(
        s,
        r#"<line x1="{pad}" y1="{0}" x2="{1}" y2="{0}" stroke="black"/><line x1="{pad}" y1="{pad}" x2="{pad}" y2="{0}" stroke="black"/>"#,
        h - pad,
        w - pad
    );
    let _ = writeln!(
        s,
        r#"<text x="4" y="{:.1}">{hi:.2}</text><text x="4" y="{:.1}">{lo:.2}</text>"#,
        y(hi) + 4.0,
        y(lo)
    );
    for (k, (name, vals)) in series.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let pts: Vec<String> =
            vals.iter().enumerate().map(|(i, v)| format!("{:.2},{:.2}", x(i), y(*v))).collect();
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.2" points="{}"/>"#,
            pts.join(" ")
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" fill="{color}">{}</text>"#,
            w - pad - 200.0,
            pad + 12.0 * k as f64,
            escape(name)
        );
    }
    s.push_str("</svg>\n");
    s
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
