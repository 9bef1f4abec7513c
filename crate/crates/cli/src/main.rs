use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use cogscope_core::correlation::{effects_to_csv, load_effects, EffectSize};
use cogscope_core::lexer::{scan, Language};
use cogscope_core::meta::{meta_to_csv, Tau2Estimator};
use cogscope_core::metrics::{analyze_paths, collect_sources, to_csv};
use cogscope_core::pipeline::{
    correlate_dataset, load_config, meta_by_variable, parse_method, run_pipeline, summary_table, CorrelateOptions,
};
use cogscope_core::plot::{render_ascii, render_svg, ForestPlotSpec};
use cogscope_core::structure::build_structure;
use cogscope_core::study::{load_manifest, load_measurements, Variable};

/// Cognitive Complexity metrics and their correlation with comprehension data.
#[derive(Parser)]
#[command(name = "cogscope", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Measure Cognitive and Cyclomatic Complexity of source files.
    Analyze(AnalyzeArgs),
    /// Correlate complexity with one dataset's comprehension measurements.
    Correlate(CorrelateArgs),
    /// Pool effect sizes across studies and draw forest plots.
    Meta(MetaArgs),
    /// Run the whole chain from a JSON config.
    Pipeline(PipelineArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum PlotKind {
    Svg,
    Ascii,
}

#[derive(Clone, Copy, ValueEnum)]
enum GroupBy {
    Variable,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Files or directories (searched recursively).
    #[arg(required = true)]
    paths: Vec<PathBuf>,
    /// Language override: java, c, cpp, csharp, javascript.
    #[arg(long, value_parser = parse_language)]
    lang: Option<Language>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// One row per method (default).
    #[arg(long, conflicts_with = "per_file")]
    per_method: bool,
    /// One row per file.
    #[arg(long)]
    per_file: bool,
    /// Print the structure trees as JSON instead of metrics.
    #[arg(long)]
    dump_structure: bool,
    /// Write to this file instead of stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CorrelateArgs {
    #[arg(long)]
    manifest: PathBuf,
    #[arg(long)]
    measurements: PathBuf,
    /// Variables to correlate; repeatable. Defaults to every variable the
    /// dataset measures.
    #[arg(long = "variable", value_parser = parse_variable)]
    variables: Vec<Variable>,
    /// auto, pearson or kendall.
    #[arg(long, default_value = "auto")]
    method: String,
    /// Use mean instead of median time in the composite.
    #[arg(long)]
    use_means: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct MetaArgs {
    /// Effects CSV files; repeatable.
    #[arg(long = "effects", required = true)]
    effects: Vec<PathBuf>,
    #[arg(long, value_enum, default_value = "variable")]
    group_by: GroupBy,
    /// Forest plot format; repeatable. ASCII goes to stdout, SVG to --out.
    #[arg(long = "plot", value_enum)]
    plots: Vec<PlotKind>,
    /// dl or reml.
    #[arg(long, default_value = "dl")]
    tau2_estimator: String,
    /// Assumed correlation between outcomes pooled within one study.
    #[arg(long, default_value_t = 1.0)]
    rho: f64,
    /// Directory for meta.csv and SVG plots; meta CSV goes to stdout otherwise.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PipelineArgs {
    #[arg(long)]
    config: PathBuf,
}

fn parse_language(s: &str) -> Result<Language, String> {
    Language::parse(s).ok_or_else(|| format!("unknown language `{s}`"))
}

fn parse_variable(s: &str) -> Result<Variable, String> {
    Variable::parse(s).ok_or_else(|| format!("unknown variable `{s}`"))
}

/// Outcome of a command that did not fail outright.
#[derive(PartialEq)]
enum Status {
    Clean,
    Warnings,
}

fn emit(output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(p) => std::fs::write(p, text).with_context(|| format!("{}: cannot write", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

fn warn_all(warnings: &[String]) -> Status {
    for w in warnings {
        eprintln!("warning: {w}");
    }
    if warnings.is_empty() {
        Status::Clean
    } else {
        Status::Warnings
    }
}

fn analyze(args: AnalyzeArgs) -> Result<Status> {
    let files = collect_sources(&args.paths, args.lang)?;
    if args.dump_structure {
        let mut dumps = Vec::new();
        let mut failed = false;
        for path in &files {
            let dump = (|| -> Result<serde_json::Value> {
                let profile = cogscope_core::lexer::detect_language(path, args.lang)?;
                let source = std::fs::read(path).with_context(|| format!("{}: cannot read", path.display()))?;
                let tokens = scan(&String::from_utf8_lossy(&source), profile).tokens;
                let built = build_structure(&tokens, profile);
                Ok(serde_json::json!({ "path": path, "units": built.units }))
            })();
            match dump {
                Ok(d) => dumps.push(d),
                Err(e) => {
                    eprintln!("error: {e:#}");
                    failed = true;
                }
            }
        }
        emit(args.output.as_deref(), &(serde_json::to_string_pretty(&dumps)? + "\n"))?;
        if failed {
            bail!("some files could not be analyzed");
        }
        return Ok(Status::Clean);
    }

    let mut reports = Vec::new();
    let mut failed = 0usize;
    let mut warnings = Vec::new();
    for (_, r) in analyze_paths(&files, args.lang) {
        match r {
            Ok(report) => {
                warnings.extend(report.warnings.iter().cloned());
                reports.push(report);
            }
            Err(e) => {
                eprintln!("error: {e}");
                failed += 1;
            }
        }
    }
    let text = match args.format {
        Format::Csv => to_csv(&reports, !args.per_file),
        Format::Json => serde_json::to_string_pretty(&reports)? + "\n",
    };
    emit(args.output.as_deref(), &text)?;
    let status = warn_all(&warnings);
    if failed > 0 {
        bail!("{failed} file(s) could not be analyzed");
    }
    Ok(status)
}

fn correlate(args: CorrelateArgs) -> Result<Status> {
    let method = parse_method(&args.method)
        .with_context(|| format!("unknown method `{}` (expected auto, pearson or kendall)", args.method))?;
    let manifest = load_manifest(&args.manifest)?;
    let measurements = load_measurements(&args.measurements)?;
    let explicit = !args.variables.is_empty();
    let variables = if explicit {
        args.variables
    } else {
        Variable::ALL.to_vec()
    };
    let result = correlate_dataset(
        &manifest,
        &measurements,
        &variables,
        CorrelateOptions {
            method,
            use_means: args.use_means,
            strict: explicit,
        },
    )?;
    emit(args.output.as_deref(), &effects_to_csv(&result.effects))?;
    Ok(warn_all(&result.warnings))
}

fn meta(args: MetaArgs) -> Result<Status> {
    let GroupBy::Variable = args.group_by;
    let estimator = Tau2Estimator::parse(&args.tau2_estimator)
        .with_context(|| format!("unknown estimator `{}` (expected dl or reml)", args.tau2_estimator))?;
    if !(-1.0..=1.0).contains(&args.rho) {
        bail!("--rho must lie in [-1, 1]");
    }
    let mut effects: Vec<EffectSize> = Vec::new();
    for path in &args.effects {
        effects.extend(load_effects(path)?);
    }
    if effects.is_empty() {
        bail!("no effect rows found");
    }
    let metas = meta_by_variable(&effects, estimator, args.rho)?;
    let mut warnings = Vec::new();
    for m in &metas {
        if !m.pooled {
            warnings.push(format!(
                "{}: only one study; effect reported without pooling",
                m.variable
            ));
        }
    }

    let csv = meta_to_csv(&metas);
    let mut stdout = String::new();
    match &args.out {
        Some(dir) => {
            std::fs::create_dir_all(dir).with_context(|| format!("{}: cannot create", dir.display()))?;
            emit(Some(&dir.join("meta.csv")), &csv)?;
        }
        None => stdout.push_str(&csv),
    }
    for m in &metas {
        let spec = ForestPlotSpec::from_meta(m);
        if args.plots.contains(&PlotKind::Ascii) {
            stdout.push('\n');
            stdout.push_str(&render_ascii(&spec));
        }
        if args.plots.contains(&PlotKind::Svg) {
            let dir = args.out.clone().unwrap_or_else(|| PathBuf::from("."));
            emit(
                Some(&dir.join(format!("forest_{}.svg", m.variable))),
                &render_svg(&spec),
            )?;
        }
    }
    if !stdout.is_empty() {
        emit(None, &stdout)?;
    }
    Ok(warn_all(&warnings))
}

fn pipeline(args: PipelineArgs) -> Result<Status> {
    let config = load_config(&args.config)?;
    let outcome = run_pipeline(&config)?;
    emit(None, &summary_table(&outcome.metas, &config.variables))?;
    let mut warnings = outcome.warnings.clone();
    for (path, e) in &outcome.failures {
        warnings.push(format!("{}: dataset skipped: {e}", path.display()));
    }
    Ok(warn_all(&warnings))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze(a) => analyze(a),
        Command::Correlate(a) => correlate(a),
        Command::Meta(a) => meta(a),
        Command::Pipeline(a) => pipeline(a),
    };
    match result {
        Ok(Status::Clean) => ExitCode::SUCCESS,
        Ok(Status::Warnings) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
