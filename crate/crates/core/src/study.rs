//! Comprehension-study measurements, snippet manifests and per-snippet
//! aggregation, including the timed-correctness composite.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, RowError};
use crate::lexer::Language;
use crate::metrics::analyze_file;

pub const MEASUREMENT_HEADER: [&str; 5] = ["dataset_id", "snippet_id", "participant_id", "variable", "value"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variable {
    Time,
    Correctness,
    Rating,
    Physiological,
    /// Derived from time and correctness; never ingested directly.
    Composite,
}

impl Variable {
    pub const ALL: [Variable; 5] = [
        Variable::Time,
        Variable::Correctness,
        Variable::Rating,
        Variable::Physiological,
        Variable::Composite,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Variable::Time => "time",
            Variable::Correctness => "correctness",
            Variable::Rating => "rating",
            Variable::Physiological => "physiological",
            Variable::Composite => "composite",
        }
    }

    pub fn parse(s: &str) -> Option<Variable> {
        Variable::ALL.into_iter().find(|v| v.as_str() == s)
    }

    /// Whether the variable can appear in a measurements file.
    pub fn is_measured(self) -> bool {
        self != Variable::Composite
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Measurement {
    pub dataset_id: String,
    pub snippet_id: String,
    pub participant_id: String,
    pub variable: Variable,
    pub value: f64,
    /// Optional outcome or subgroup label; effects sharing a dataset and
    /// variable but differing here are pooled within the study.
    pub outcome: Option<String>,
    /// 1-based line in the source file (header is line 1).
    pub row: usize,
}

pub fn load_measurements(path: &Path) -> Result<Vec<Measurement>> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    parse_measurements(file, path)
}

/// Parses a measurements CSV. All offending rows are reported together.
pub fn parse_measurements(reader: impl std::io::Read, path: &Path) -> Result<Vec<Measurement>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|source| Error::Csv {
            path: path.to_path_buf(),
            source,
        })?
        .clone();
    let names: Vec<&str> = headers.iter().collect();
    let has_outcome = names.len() == 6 && names[5] == "outcome";
    if names.len() < 5 || names[..5] != MEASUREMENT_HEADER || (names.len() > 5 && !has_outcome) {
        return Err(Error::Schema {
            path: path.to_path_buf(),
            rows: vec![RowError {
                row: 1,
                message: format!(
                    "expected header `{}[,outcome]`, found `{}`",
                    MEASUREMENT_HEADER.join(","),
                    names.join(",")
                ),
            }],
        });
    }

    let mut out = Vec::new();
    let mut schema_errors = Vec::new();
    let mut value_errors = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let row = i + 2;
        let record = match record {
            Ok(r) => r,
            Err(e) => {
                schema_errors.push(RowError {
                    row,
                    message: e.to_string(),
                });
                continue;
            }
        };
        if record.len() != names.len() {
            schema_errors.push(RowError {
                row,
                message: format!("expected {} fields, found {}", names.len(), record.len()),
            });
            continue;
        }
        let variable = match Variable::parse(&record[3]) {
            Some(v) if v.is_measured() => v,
            _ => {
                schema_errors.push(RowError {
                    row,
                    message: format!("unknown variable `{}`", &record[3]),
                });
                continue;
            }
        };
        if record[0].is_empty() || record[1].is_empty() {
            schema_errors.push(RowError {
                row,
                message: "empty dataset_id or snippet_id".to_string(),
            });
            continue;
        }
        let value = match record[4].parse::<f64>() {
            Ok(v) if v.is_finite() => v,
            Ok(v) => {
                value_errors.push(RowError {
                    row,
                    message: format!("non-finite value {v}"),
                });
                continue;
            }
            Err(_) => {
                value_errors.push(RowError {
                    row,
                    message: format!("non-numeric value `{}`", &record[4]),
                });
                continue;
            }
        };
        if variable == Variable::Time && value <= 0.0 {
            value_errors.push(RowError {
                row,
                message: format!("time must be positive, got {value}"),
            });
            continue;
        }
        let outcome = if has_outcome && !record[5].is_empty() {
            Some(record[5].to_string())
        } else {
            None
        };
        out.push(Measurement {
            dataset_id: record[0].to_string(),
            snippet_id: record[1].to_string(),
            participant_id: record[2].to_string(),
            variable,
            value,
            outcome,
            row,
        });
    }
    if !schema_errors.is_empty() {
        return Err(Error::Schema {
            path: path.to_path_buf(),
            rows: schema_errors,
        });
    }
    if !value_errors.is_empty() {
        return Err(Error::Value {
            path: path.to_path_buf(),
            rows: value_errors,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub snippet_id: String,
    pub path: PathBuf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub language: Option<String>,
    /// Measure only this method instead of the whole file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub invert_rating: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub dataset_id: String,
    pub entries: Vec<ManifestEntry>,
    #[serde(default)]
    pub invert_rating: bool,
    /// `[min, max]` of the rating scale, used when inverting ratings.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rating_scale: Option<[f64; 2]>,
    /// Declared `[min, max]` of correctness values; unchecked when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub correctness_range: Option<[f64; 2]>,
    /// Directory the entry paths are relative to.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

impl Manifest {
    pub fn resolve(&self, entry: &ManifestEntry) -> PathBuf {
        if entry.path.is_absolute() {
            entry.path.clone()
        } else {
            self.base_dir.join(&entry.path)
        }
    }

    fn manifest_error(path: &Path, message: impl Into<String>) -> Error {
        Error::Manifest {
            path: path.to_path_buf(),
            message: message.into(),
        }
    }

    fn validate(&self, path: &Path) -> Result<()> {
        if self.dataset_id.is_empty() {
            return Err(Self::manifest_error(path, "empty dataset_id"));
        }
        let mut seen = BTreeSet::new();
        for e in &self.entries {
            if !seen.insert(e.snippet_id.as_str()) {
                return Err(Self::manifest_error(
                    path,
                    format!("duplicate snippet_id `{}`", e.snippet_id),
                ));
            }
            if let Some(lang) = &e.language {
                if Language::parse(lang).is_none() {
                    return Err(Self::manifest_error(
                        path,
                        format!("snippet `{}`: unknown language `{lang}`", e.snippet_id),
                    ));
                }
            }
            let file = self.resolve(e);
            if !file.is_file() {
                return Err(Self::manifest_error(
                    path,
                    format!("snippet `{}`: file {} does not exist", e.snippet_id, file.display()),
                ));
            }
        }
        for (name, range) in [
            ("rating_scale", self.rating_scale),
            ("correctness_range", self.correctness_range),
        ] {
            if let Some([lo, hi]) = range {
                if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                    return Err(Self::manifest_error(
                        path,
                        format!("{name} must be [min, max] with min < max"),
                    ));
                }
            }
        }
        Ok(())
    }
}

pub fn load_manifest(path: &Path) -> Result<Manifest> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut manifest: Manifest = serde_json::from_str(&text).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })?;
    manifest.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    manifest.validate(path)?;
    Ok(manifest)
}

/// Cognitive Complexity per snippet id. A snippet naming a method takes that
/// method's value (matched on the full or unqualified name); otherwise the
/// file total is used.
pub fn snippet_metrics(manifest: &Manifest) -> Result<BTreeMap<String, u32>> {
    let mut out = BTreeMap::new();
    for entry in &manifest.entries {
        let lang = entry.language.as_deref().and_then(Language::parse);
        let path = manifest.resolve(entry);
        let report = analyze_file(&path, lang)?;
        for w in &report.warnings {
            log::warn!("{w}");
        }
        let value = match &entry.method {
            None => report.total_cognitive,
            Some(name) => report
                .methods
                .iter()
                .find(|m| &m.name == name || m.name.rsplit(['.', ':']).next() == Some(name.as_str()))
                .map(|m| m.cognitive)
                .ok_or_else(|| Error::Manifest {
                    path: path.clone(),
                    message: format!("snippet `{}`: method `{name}` not found", entry.snippet_id),
                })?,
        };
        out.insert(entry.snippet_id.clone(), value);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VariableStats {
    pub n: usize,
    pub mean: f64,
    pub median: f64,
    pub min: f64,
    pub max: f64,
}

impl VariableStats {
    pub fn of(values: &[f64]) -> Option<VariableStats> {
        if values.is_empty() {
            return None;
        }
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let n = sorted.len();
        let median = if n % 2 == 1 {
            sorted[n / 2]
        } else {
            (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
        };
        let mean = sorted.iter().sum::<f64>() / n as f64;
        let (min, max) = (sorted[0], sorted[n - 1]);
        Some(VariableStats {
            n,
            mean: mean.clamp(min, max),
            median,
            min,
            max,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SnippetAggregate {
    pub dataset_id: String,
    pub snippet_id: String,
    pub outcome: Option<String>,
    pub cognitive_complexity: u32,
    pub stats: BTreeMap<Variable, VariableStats>,
}

impl SnippetAggregate {
    pub fn mean(&self, v: Variable) -> Option<f64> {
        self.stats.get(&v).map(|s| s.mean)
    }
}

/// Applies the manifest's validation and rating inversion to one dataset's
/// measurements.
pub fn prepare(measurements: &[Measurement], manifest: &Manifest) -> Result<Vec<Measurement>> {
    let invert: BTreeMap<&str, bool> = manifest
        .entries
        .iter()
        .map(|e| (e.snippet_id.as_str(), e.invert_rating.unwrap_or(manifest.invert_rating)))
        .collect();
    let mut errors = Vec::new();
    let mut out = Vec::new();
    for m in measurements.iter().filter(|m| m.dataset_id == manifest.dataset_id) {
        let mut m = m.clone();
        if m.variable == Variable::Correctness {
            if let Some([lo, hi]) = manifest.correctness_range {
                if m.value < lo || m.value > hi {
                    errors.push(RowError {
                        row: m.row,
                        message: format!("correctness {} outside [{lo}, {hi}]", m.value),
                    });
                    continue;
                }
            }
        }
        if m.variable == Variable::Rating && invert.get(m.snippet_id.as_str()).copied().unwrap_or(false) {
            m.value = match manifest.rating_scale {
                Some([lo, hi]) => lo + hi - m.value,
                None => -m.value,
            };
        }
        out.push(m);
    }
    if !errors.is_empty() {
        return Err(Error::Value {
            path: PathBuf::from(format!("dataset {}", manifest.dataset_id)),
            rows: errors,
        });
    }
    Ok(out)
}

/// Groups measurements by snippet (and outcome) and summarizes each variable.
/// Output is sorted by snippet id, then outcome.
pub fn aggregate(measurements: &[Measurement], metrics: &BTreeMap<String, u32>) -> Result<Vec<SnippetAggregate>> {
    type Key<'a> = (&'a str, &'a str, Option<&'a str>);
    let mut groups: BTreeMap<Key<'_>, BTreeMap<Variable, Vec<f64>>> = BTreeMap::new();
    for m in measurements {
        if !metrics.contains_key(&m.snippet_id) {
            return Err(Error::MissingSnippet {
                dataset: m.dataset_id.clone(),
                snippet: m.snippet_id.clone(),
            });
        }
        groups
            .entry((m.dataset_id.as_str(), m.snippet_id.as_str(), m.outcome.as_deref()))
            .or_default()
            .entry(m.variable)
            .or_default()
            .push(m.value);
    }
    let mut out: Vec<SnippetAggregate> = groups
        .into_iter()
        .map(|((dataset, snippet, outcome), vars)| SnippetAggregate {
            dataset_id: dataset.to_string(),
            snippet_id: snippet.to_string(),
            outcome: outcome.map(str::to_string),
            cognitive_complexity: metrics[snippet],
            stats: vars
                .into_iter()
                .filter_map(|(v, mut values)| {
                    // summation order must not depend on row order
                    values.sort_by(f64::total_cmp);
                    VariableStats::of(&values).map(|s| (v, s))
                })
                .collect(),
        })
        .collect();
    out.sort_by(|a, b| (&a.dataset_id, &a.snippet_id, &a.outcome).cmp(&(&b.dataset_id, &b.snippet_id, &b.outcome)));
    Ok(out)
}

/// Timed correctness per snippet:
/// `(time / max time) * (1 - correctness / max correctness)`, where time is
/// the median and correctness the mean unless `use_means` is set.
pub fn composite_timed_correctness(aggregates: &[SnippetAggregate], use_means: bool) -> Result<Vec<(String, f64)>> {
    let mut rows = Vec::with_capacity(aggregates.len());
    for a in aggregates {
        let get = |v: Variable| {
            a.stats.get(&v).ok_or_else(|| Error::MissingVariable {
                dataset: a.dataset_id.clone(),
                snippet: a.snippet_id.clone(),
                variable: v.to_string(),
            })
        };
        let t = get(Variable::Time)?;
        let c = get(Variable::Correctness)?;
        rows.push((a, if use_means { t.mean } else { t.median }, c.mean));
    }
    let t_max = rows.iter().map(|r| r.1).fold(f64::NEG_INFINITY, f64::max);
    let c_max = rows.iter().map(|r| r.2).fold(f64::NEG_INFINITY, f64::max);
    if rows.is_empty() {
        return Ok(Vec::new());
    }
    let dataset = rows[0].0.dataset_id.clone();
    if !(t_max > 0.0) {
        return Err(Error::DegenerateDataset {
            dataset,
            reason: "maximum time is not positive".into(),
        });
    }
    if !(c_max > 0.0) {
        return Err(Error::DegenerateDataset {
            dataset,
            reason: "all correctness values are 0".into(),
        });
    }
    Ok(rows
        .into_iter()
        .map(|(a, t, c)| (a.snippet_id.clone(), (t / t_max) * (1.0 - c / c_max)))
        .collect())
}
