//! End-to-end runs: metrics, aggregation, correlation and pooling over the
//! datasets named in a JSON config.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::correlation::{correlate, effects_to_csv, to_effect_size, EffectSize, Method, MethodChoice};
use crate::error::{Error, Result};
use crate::lexer::Language;
use crate::meta::{meta_to_csv, random_effects, study_effects, MetaResult, Tau2Estimator};
use crate::metrics::{analyze_paths, to_csv, ComplexityReport};
use crate::plot::{render_ascii, render_svg, ForestPlotSpec};
use crate::study::{
    aggregate, composite_timed_correctness, load_manifest, load_measurements, prepare, snippet_metrics, Manifest,
    Measurement, SnippetAggregate, Variable,
};

/// Effect sizes of one dataset plus the non-fatal problems met on the way.
#[derive(Debug, Clone, Default)]
pub struct DatasetEffects {
    pub effects: Vec<EffectSize>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Copy)]
pub struct CorrelateOptions {
    pub method: MethodChoice,
    /// Use mean time in the composite instead of the median.
    pub use_means: bool,
    /// Fail instead of skipping variables the dataset does not measure.
    pub strict: bool,
}

impl Default for CorrelateOptions {
    fn default() -> Self {
        CorrelateOptions {
            method: MethodChoice::Auto,
            use_means: false,
            strict: true,
        }
    }
}

fn x_y_for(
    aggregates: &[&SnippetAggregate],
    variable: Variable,
    use_means: bool,
) -> Result<(Vec<f64>, Vec<f64>, Vec<String>)> {
    let mut warnings = Vec::new();
    if variable == Variable::Composite {
        let owned: Vec<SnippetAggregate> = aggregates.iter().map(|a| (*a).clone()).collect();
        let composite = composite_timed_correctness(&owned, use_means)?;
        let cc: BTreeMap<&str, u32> = aggregates
            .iter()
            .map(|a| (a.snippet_id.as_str(), a.cognitive_complexity))
            .collect();
        let (x, y) = composite.iter().map(|(id, v)| (cc[id.as_str()] as f64, *v)).unzip();
        return Ok((x, y, warnings));
    }
    let mut x = Vec::new();
    let mut y = Vec::new();
    for a in aggregates {
        match a.mean(variable) {
            Some(v) => {
                x.push(a.cognitive_complexity as f64);
                y.push(v);
            }
            None => warnings.push(format!(
                "dataset {}: snippet {} has no {variable} measurements; omitted",
                a.dataset_id, a.snippet_id
            )),
        }
    }
    Ok((x, y, warnings))
}

/// Correlates Cognitive Complexity with each requested variable for one
/// dataset. Measurements of other datasets are ignored.
pub fn correlate_dataset(
    manifest: &Manifest,
    measurements: &[Measurement],
    variables: &[Variable],
    options: CorrelateOptions,
) -> Result<DatasetEffects> {
    let metrics = snippet_metrics(manifest)?;
    let prepared = prepare(measurements, manifest)?;
    let aggregates = aggregate(&prepared, &metrics)?;
    let dataset = manifest.dataset_id.as_str();
    let mut out = DatasetEffects::default();
    if aggregates.is_empty() {
        let msg = format!("dataset {dataset}: no measurements");
        if options.strict {
            return Err(Error::DegenerateDataset {
                dataset: dataset.into(),
                reason: "no measurements".into(),
            });
        }
        out.warnings.push(msg);
        return Ok(out);
    }

    let mut by_outcome: BTreeMap<Option<&str>, Vec<&SnippetAggregate>> = BTreeMap::new();
    for a in &aggregates {
        by_outcome.entry(a.outcome.as_deref()).or_default().push(a);
    }
    let measured = |v: Variable| aggregates.iter().any(|a| a.stats.contains_key(&v));

    for &variable in variables {
        let missing = match variable {
            Variable::Composite => [Variable::Time, Variable::Correctness]
                .into_iter()
                .find(|v| !measured(*v)),
            v => (!measured(v)).then_some(v),
        };
        if let Some(m) = missing {
            if options.strict {
                return Err(Error::MissingVariable {
                    dataset: dataset.into(),
                    snippet: "*".into(),
                    variable: m.to_string(),
                });
            }
            continue;
        }
        for (outcome, group) in &by_outcome {
            let attempt = (|| -> Result<EffectSize> {
                let (x, y, warnings) = x_y_for(group, variable, options.use_means)?;
                out.warnings.extend(warnings);
                let result = correlate(dataset, variable, *outcome, &x, &y, options.method)?;
                if result.forced {
                    out.warnings.push(format!(
                        "dataset {dataset}, {variable}: method {} forced against the normality check",
                        result.method
                    ));
                }
                let effect = to_effect_size(&result)?;
                if effect.clamped {
                    out.warnings
                        .push(format!("dataset {dataset}, {variable}: perfect correlation clamped"));
                }
                Ok(effect)
            })();
            match attempt {
                Ok(e) => out.effects.push(e),
                Err(e) if !options.strict => out
                    .warnings
                    .push(format!("dataset {dataset}, {variable}: skipped: {e}")),
                Err(e) => return Err(e),
            }
        }
    }
    Ok(out)
}

/// One meta-analysis per variable, in variable order.
pub fn meta_by_variable(effects: &[EffectSize], estimator: Tau2Estimator, rho: f64) -> Result<Vec<MetaResult>> {
    study_effects(effects, rho)?
        .values()
        .map(|studies| random_effects(studies, estimator))
        .collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DatasetConfig {
    pub manifest: Option<PathBuf>,
    pub measurements: Option<PathBuf>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RawConfig {
    pub datasets: Option<Vec<DatasetConfig>>,
    #[serde(default)]
    pub variables: Option<Vec<String>>,
    #[serde(default)]
    pub method: Option<String>,
    #[serde(default)]
    pub tau2_estimator: Option<String>,
    #[serde(default)]
    pub rho: Option<f64>,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    #[serde(default)]
    pub use_means: Option<bool>,
    #[serde(default)]
    pub plots: Option<Vec<String>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotFormat {
    Svg,
    Ascii,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub datasets: Vec<(PathBuf, PathBuf)>,
    pub variables: Vec<Variable>,
    pub method: MethodChoice,
    pub tau2_estimator: Tau2Estimator,
    pub rho: f64,
    pub output_dir: PathBuf,
    pub use_means: bool,
    pub plots: Vec<PlotFormat>,
    /// Directory that paths in metrics.csv are written relative to.
    pub base_dir: PathBuf,
}

pub fn parse_method(s: &str) -> Option<MethodChoice> {
    match s {
        "auto" => Some(MethodChoice::Auto),
        other => Method::parse(other).map(MethodChoice::Force),
    }
}

/// Loads and validates a run config. Relative paths are resolved against the
/// config file's directory.
pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let raw: RawConfig = serde_json::from_str(&text).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    let resolve = |p: &Path| if p.is_absolute() { p.to_path_buf() } else { base.join(p) };

    let datasets = raw
        .datasets
        .ok_or_else(|| Error::Config("missing field `datasets`".into()))?;
    if datasets.is_empty() {
        return Err(Error::Config("`datasets` must list at least one dataset".into()));
    }
    let mut resolved = Vec::new();
    for (i, d) in datasets.iter().enumerate() {
        let manifest = d
            .manifest
            .as_deref()
            .ok_or_else(|| Error::Config(format!("missing field `datasets[{i}].manifest`")))?;
        let measurements = d
            .measurements
            .as_deref()
            .ok_or_else(|| Error::Config(format!("missing field `datasets[{i}].measurements`")))?;
        resolved.push((resolve(manifest), resolve(measurements)));
    }
    let variables = match raw.variables {
        None => Variable::ALL.to_vec(),
        Some(list) => list
            .iter()
            .map(|v| Variable::parse(v).ok_or_else(|| Error::Config(format!("`variables`: unknown variable `{v}`"))))
            .collect::<Result<Vec<_>>>()?,
    };
    let method = match raw.method.as_deref() {
        None => MethodChoice::Auto,
        Some(m) => parse_method(m).ok_or_else(|| Error::Config(format!("`method`: unknown method `{m}`")))?,
    };
    let tau2_estimator = match raw.tau2_estimator.as_deref() {
        None => Tau2Estimator::Dl,
        Some(t) => Tau2Estimator::parse(t)
            .ok_or_else(|| Error::Config(format!("`tau2_estimator`: unknown estimator `{t}`")))?,
    };
    let rho = raw.rho.unwrap_or(1.0);
    if !(-1.0..=1.0).contains(&rho) {
        return Err(Error::Config(format!("`rho` must lie in [-1, 1], got {rho}")));
    }
    let output_dir = resolve(
        raw.output_dir
            .as_deref()
            .ok_or_else(|| Error::Config("missing field `output_dir`".into()))?,
    );
    let plots = match raw.plots {
        None => vec![PlotFormat::Svg, PlotFormat::Ascii],
        Some(list) => list
            .iter()
            .map(|p| match p.as_str() {
                "svg" => Ok(PlotFormat::Svg),
                "ascii" => Ok(PlotFormat::Ascii),
                other => Err(Error::Config(format!("`plots`: unknown format `{other}`"))),
            })
            .collect::<Result<Vec<_>>>()?,
    };
    Ok(RunConfig {
        datasets: resolved,
        variables,
        method,
        tau2_estimator,
        rho,
        output_dir,
        use_means: raw.use_means.unwrap_or(false),
        plots,
        base_dir: base,
    })
}

/// Research question each variable answers.
pub fn research_question(v: Variable) -> &'static str {
    match v {
        Variable::Time => "RQ1.1",
        Variable::Correctness => "RQ1.2",
        Variable::Rating => "RQ1.3",
        Variable::Physiological => "RQ1.4",
        Variable::Composite => "RQ1.5",
    }
}

/// Fixed-width table with one row per research question. Variables without
/// any effect are listed as such.
pub fn summary_table(metas: &[MetaResult], variables: &[Variable]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<6}  {:<13}  {:>2}  {:>9}  {:>21}  {:>9}  {:>9}  {:>7}  interpretation",
        "rq", "variable", "k", "summary_r", "95% CI", "p", "tau2", "I2"
    );
    for &v in variables {
        match metas.iter().find(|m| m.variable == v) {
            Some(m) => {
                let _ = writeln!(
                    out,
                    "{:<6}  {:<13}  {:>2}  {:>9.6}  [{:>9.6}, {:>9.6}]  {:>9.6}  {:>9.6}  {:>7.2}  {}{}",
                    research_question(v),
                    v.as_str(),
                    m.k,
                    m.summary_r,
                    m.ci_low_r,
                    m.ci_high_r,
                    m.p_value,
                    m.tau2,
                    m.i2,
                    m.interpretation,
                    if m.pooled { "" } else { " (not pooled)" }
                );
            }
            None => {
                let _ = writeln!(out, "{:<6}  {:<13}   0  no effects", research_question(v), v.as_str());
            }
        }
    }
    out
}

#[derive(Debug, Default)]
pub struct PipelineOutcome {
    pub reports: Vec<ComplexityReport>,
    pub effects: Vec<EffectSize>,
    pub metas: Vec<MetaResult>,
    pub warnings: Vec<String>,
    /// Datasets that failed entirely; the others still ran.
    pub failures: Vec<(PathBuf, String)>,
    pub written: Vec<PathBuf>,
}

fn write_file(path: &Path, contents: &str, written: &mut Vec<PathBuf>) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| Error::io(path, e))?;
    written.push(path.to_path_buf());
    Ok(())
}

/// Runs analyze → aggregate → correlate → meta and writes the bundle:
/// metrics.csv, effects.csv, meta.csv, summary.txt and one forest plot per
/// variable.
pub fn run_pipeline(config: &RunConfig) -> Result<PipelineOutcome> {
    let mut outcome = PipelineOutcome::default();
    let mut snippet_files = Vec::new();
    let mut file_langs: BTreeMap<PathBuf, Option<Language>> = BTreeMap::new();

    for (manifest_path, measurements_path) in &config.datasets {
        let run = (|| -> Result<(DatasetEffects, Manifest)> {
            let manifest = load_manifest(manifest_path)?;
            let measurements = load_measurements(measurements_path)?;
            let effects = correlate_dataset(
                &manifest,
                &measurements,
                &config.variables,
                CorrelateOptions {
                    method: config.method,
                    use_means: config.use_means,
                    strict: false,
                },
            )?;
            Ok((effects, manifest))
        })();
        match run {
            Ok((effects, manifest)) => {
                for e in &manifest.entries {
                    let path = manifest.resolve(e);
                    file_langs.insert(path.clone(), e.language.as_deref().and_then(Language::parse));
                    snippet_files.push(path);
                }
                outcome.effects.extend(effects.effects);
                outcome.warnings.extend(effects.warnings);
            }
            Err(e) => {
                log::debug!("{}: {e}", manifest_path.display());
                outcome.failures.push((manifest_path.clone(), e.to_string()));
            }
        }
    }

    snippet_files.sort();
    snippet_files.dedup();
    // files whose language comes from the manifest are analyzed one by one
    let (overridden, detected): (Vec<PathBuf>, Vec<PathBuf>) = snippet_files
        .into_iter()
        .partition(|p| file_langs.get(p).copied().flatten().is_some());
    let mut results = analyze_paths(&detected, None);
    for p in overridden {
        let lang = file_langs[&p];
        results.extend(analyze_paths(std::slice::from_ref(&p), lang));
    }
    results.sort_by(|a, b| a.0.cmp(&b.0));
    for (path, r) in results {
        match r {
            Ok(report) => {
                outcome.warnings.extend(report.warnings.iter().cloned());
                outcome.reports.push(report);
            }
            Err(e) => outcome.warnings.push(format!("{}: {e}", path.display())),
        }
    }

    outcome
        .effects
        .sort_by(|a, b| (a.variable, &a.dataset_id, &a.outcome).cmp(&(b.variable, &b.dataset_id, &b.outcome)));
    outcome.metas = meta_by_variable(&outcome.effects, config.tau2_estimator, config.rho)?;
    for m in &outcome.metas {
        if !m.pooled {
            outcome.warnings.push(format!(
                "{}: only one study; effect reported without pooling",
                m.variable
            ));
        }
    }

    let dir = &config.output_dir;
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = Vec::new();
    // relative paths keep the bundle identical wherever the study lives
    let relative: Vec<ComplexityReport> = outcome
        .reports
        .iter()
        .map(|r| {
            let mut r = r.clone();
            if let Ok(rel) = r.path.strip_prefix(&config.base_dir) {
                r.path = rel.to_path_buf();
            }
            r
        })
        .collect();
    write_file(&dir.join("metrics.csv"), &to_csv(&relative, false), &mut written)?;
    write_file(
        &dir.join("effects.csv"),
        &effects_to_csv(&outcome.effects),
        &mut written,
    )?;
    write_file(&dir.join("meta.csv"), &meta_to_csv(&outcome.metas), &mut written)?;
    write_file(
        &dir.join("summary.txt"),
        &summary_table(&outcome.metas, &config.variables),
        &mut written,
    )?;
    for m in &outcome.metas {
        let spec = ForestPlotSpec::from_meta(m);
        for format in &config.plots {
            match format {
                PlotFormat::Svg => write_file(
                    &dir.join(format!("forest_{}.svg", m.variable)),
                    &render_svg(&spec),
                    &mut written,
                )?,
                PlotFormat::Ascii => write_file(
                    &dir.join(format!("forest_{}.txt", m.variable)),
                    &render_ascii(&spec),
                    &mut written,
                )?,
            }
        }
    }
    outcome.written = written;
    Ok(outcome)
}
