use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;

use clap::ValueEnum;
use ghwlab::defining::{DefiningSetExport, ExportedElement};
use ghwlab::ghw::{CodeReport, HierarchyReport, HierarchyRow};
use ghwlab::sweep::SweepReport;
use ghwlab::Error;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

pub struct Writer {
    format: Format,
    out: Option<PathBuf>,
}

fn io_err(e: impl std::fmt::Display) -> Error {
    Error::Parameter(format!("output: {e}"))
}

fn params_line(class: &str, params: &BTreeMap<String, String>) -> String {
    let kv: Vec<String> = params.iter().map(|(k, v)| format!("{k}={v}")).collect();
    format!("class {class}  {}", kv.join(" "))
}

fn params_compact(params: &BTreeMap<String, String>) -> String {
    params
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn opt(v: Option<usize>) -> String {
    v.map_or_else(|| "-".to_string(), |v| v.to_string())
}

/// `{wt_1=12, wt_2=16, wt_3=18}`
fn wt_list(values: &[usize]) -> String {
    let items: Vec<String> = values
        .iter()
        .enumerate()
        .map(|(i, v)| format!("wt_{}={v}", i + 1))
        .collect();
    format!("{{{}}}", items.join(", "))
}

fn ok(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "FAILED"
    }
}

#[derive(Serialize)]
struct HierarchyCsvRow<'a> {
    r: usize,
    d_support: Option<usize>,
    d_dual: Option<usize>,
    d_formula: Option<usize>,
    witness: Option<&'a str>,
    agree: bool,
}

impl<'a> From<&'a HierarchyRow> for HierarchyCsvRow<'a> {
    fn from(row: &'a HierarchyRow) -> Self {
        HierarchyCsvRow {
            r: row.r,
            d_support: row.d_support,
            d_dual: row.d_dual,
            d_formula: row.d_formula,
            witness: row.witness.as_deref(),
            agree: row.agree,
        }
    }
}

#[derive(Serialize)]
struct SweepCsvRow<'a> {
    class: &'a str,
    params: String,
    n: usize,
    dim: usize,
    status: String,
    r: usize,
    d_support: Option<usize>,
    d_dual: Option<usize>,
    d_formula: Option<usize>,
    agree: bool,
}

impl Writer {
    pub fn new(format: Format, out: Option<PathBuf>) -> Self {
        Writer { format, out }
    }

    fn emit(&self, text: &str) -> Result<(), Error> {
        match &self.out {
            Some(path) => std::fs::write(path, text).map_err(io_err),
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout.write_all(text.as_bytes()).map_err(io_err)?;
                stdout.flush().map_err(io_err)
            }
        }
    }

    fn json<T: Serialize>(&self, value: &T) -> Result<(), Error> {
        let mut s = serde_json::to_string_pretty(value).map_err(io_err)?;
        s.push('\n');
        self.emit(&s)
    }

    fn csv<T: Serialize>(&self, rows: impl IntoIterator<Item = T>) -> Result<(), Error> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for row in rows {
            w.serialize(row).map_err(io_err)?;
        }
        let bytes = w.into_inner().map_err(io_err)?;
        self.emit(&String::from_utf8(bytes).map_err(io_err)?)
    }

    pub fn code(&self, report: &CodeReport) -> Result<(), Error> {
        match self.format {
            Format::Json => self.json(report),
            Format::Csv => self.csv(
                report
                    .weight_distribution
                    .counts
                    .iter()
                    .map(|(w, c)| [w.to_string(), c.to_string()]),
            ),
            Format::Table => {
                let mut s = String::new();
                let _ = writeln!(s, "{}", params_line(&report.class, &report.params));
                let _ = writeln!(
                    s,
                    "[{}, {}, {}]  message dim {}, kernel dim {}",
                    report.n,
                    report.dim,
                    opt(report.d),
                    report.message_dim,
                    report.kernel_dim
                );
                let wd: Vec<String> = report
                    .weight_distribution
                    .counts
                    .iter()
                    .map(|(w, c)| format!("A_{w}={c}"))
                    .collect();
                let _ = writeln!(s, "weight distribution: {}", wd.join(" "));
                self.emit(&s)
            }
        }
    }

    pub fn defset(&self, export: &DefiningSetExport) -> Result<(), Error> {
        let flat = |e: &ExportedElement| match e {
            ExportedElement::Single(x) => x.clone(),
            ExportedElement::Pair([x, y]) => format!("({x},{y})"),
        };
        match self.format {
            Format::Json => self.json(export),
            Format::Csv => self.csv(export.elements.iter().map(|e| match e {
                ExportedElement::Single(x) => vec![x.clone()],
                ExportedElement::Pair([x, y]) => vec![x.clone(), y.clone()],
            })),
            Format::Table => {
                let mut s = String::new();
                let _ = writeln!(s, "{}", params_line(&export.class, &export.params));
                let _ = writeln!(s, "ambient: {}", export.ambient.join(" x "));
                let _ = writeln!(s, "|D| = {}", export.elements.len());
                let items: Vec<String> = export.elements.iter().map(flat).collect();
                let _ = writeln!(s, "{}", items.join(" "));
                self.emit(&s)
            }
        }
    }

    pub fn hierarchy(&self, report: &HierarchyReport) -> Result<(), Error> {
        match self.format {
            Format::Json => self.json(report),
            Format::Csv => self.csv(report.rows.iter().map(HierarchyCsvRow::from)),
            Format::Table => self.emit(&hierarchy_table(report)),
        }
    }

    pub fn sweep(&self, report: &SweepReport) -> Result<(), Error> {
        match self.format {
            Format::Json => self.json(report),
            Format::Csv => self.csv(report.points.iter().flat_map(|p| {
                p.rows.iter().map(move |row| SweepCsvRow {
                    class: &p.class,
                    params: params_compact(&p.params),
                    n: p.n,
                    dim: p.dim,
                    status: format!("{:?}", p.status).to_lowercase(),
                    r: row.r,
                    d_support: row.d_support,
                    d_dual: row.d_dual,
                    d_formula: row.d_formula,
                    agree: row.agree,
                })
            })),
            Format::Table => {
                let mut s = String::new();
                for p in &report.points {
                    let _ = writeln!(
                        s,
                        "{:<9} class {} {:<40} [{}, {}]  {}",
                        format!("{:?}", p.status).to_lowercase(),
                        p.class,
                        params_compact(&p.params),
                        p.n,
                        p.dim,
                        wt_list(&p.hierarchy())
                    );
                }
                let sm = &report.summary;
                let _ = writeln!(
                    s,
                    "{} points: {} passed, {} failed, {} incomplete (over budget)",
                    sm.total, sm.passed, sm.failed, sm.incomplete
                );
                self.emit(&s)
            }
        }
    }
}

fn hierarchy_table(report: &HierarchyReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{}", params_line(&report.class, &report.params));
    let d = report.rows.first().and_then(HierarchyRow::value);
    let _ = writeln!(
        s,
        "[{}, {}, {}]  message dim {}, kernel dim {}",
        report.n,
        report.dim,
        opt(d),
        report.message_dim,
        report.kernel_dim
    );
    let _ = writeln!(
        s,
        "{:>3} {:>8} {:>8} {:>8}  agree",
        "r", "support", "dual", "formula"
    );
    for row in &report.rows {
        let _ = writeln!(
            s,
            "{:>3} {:>8} {:>8} {:>8}  {}",
            row.r,
            opt(row.d_support),
            opt(row.d_dual),
            opt(row.d_formula),
            if row.agree { "yes" } else { "NO" }
        );
    }
    let _ = writeln!(s, "weight hierarchy: {}", wt_list(&report.hierarchy()));
    let c = &report.checks;
    let mut checks = format!("monotone {}, singleton {}", ok(c.monotone), ok(c.singleton));
    if let Some(t) = c.top_weight {
        let _ = write!(checks, ", top weight {}", ok(t));
    }
    let _ = writeln!(s, "checks: {checks}");
    for l in &c.lemma_checks {
        let _ = writeln!(s, "  {}: {} over {} cases", l.name, ok(l.passed), l.checked);
        for v in &l.violations {
            let _ = writeln!(s, "    {v}");
        }
    }
    for r in &report.refused {
        let _ = writeln!(s, "refused: {r}");
    }
    for n in &report.notes {
        let _ = writeln!(s, "note: {n}");
    }
    if let Some(t) = &report.timings {
        let items: Vec<String> = t.iter().map(|(k, v)| format!("{k} {v:.1} ms")).collect();
        let _ = writeln!(s, "timings: {}", items.join(", "));
    }
    let _ = writeln!(
        s,
        "status: {}",
        format!("{:?}", report.status).to_lowercase()
    );
    s
}
