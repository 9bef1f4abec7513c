//! Cognitive and Cyclomatic Complexity over structure trees.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lexer::{detect_language, scan, Language, LanguageProfile};
use crate::structure::{build_structure, ConstructKind, Contribution, MethodUnit, Span, StructuralNode};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Increment {
    pub span: Span,
    pub kind: ConstructKind,
    pub base: u32,
    pub nesting_penalty: u32,
    pub total: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MethodMetrics {
    pub name: String,
    pub parameters: String,
    pub span: Span,
    pub cognitive: u32,
    pub cyclomatic: u32,
    pub loc: u32,
    pub tolerant: bool,
    pub increments: Vec<Increment>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComplexityReport {
    pub path: PathBuf,
    pub language: Language,
    pub methods: Vec<MethodMetrics>,
    pub total_cognitive: u32,
    pub max_cognitive: u32,
    pub total_cyclomatic: u32,
    /// Non-blank, non-comment lines of the whole file.
    pub loc: u32,
    /// Scanner or builder recovered from malformed input.
    pub tolerant: bool,
    pub warnings: Vec<String>,
}

fn increment_for(node: &StructuralNode) -> Option<Increment> {
    let (base, penalty) = match node.kind.contribution() {
        Contribution::Structural => (1, node.nesting_depth),
        Contribution::Flat => (1, 0),
        Contribution::NestingOnly | Contribution::Neutral => return None,
    };
    Some(Increment {
        span: node.span,
        kind: node.kind,
        base,
        nesting_penalty: penalty,
        total: base + penalty,
    })
}

/// Cognitive Complexity of `unit` with one increment per contributing node.
pub fn cognitive_complexity(unit: &MethodUnit) -> (u32, Vec<Increment>) {
    let increments: Vec<Increment> = unit.body.walk().filter_map(increment_for).collect();
    (increments.iter().map(|i| i.total).sum(), increments)
}

pub fn cyclomatic_complexity(unit: &MethodUnit) -> u32 {
    let decisions: u32 = unit
        .body
        .walk()
        .map(|n| match n.kind {
            ConstructKind::If
            | ConstructKind::ElseIf
            | ConstructKind::Ternary
            | ConstructKind::For
            | ConstructKind::Foreach
            | ConstructKind::While
            | ConstructKind::DoWhile
            | ConstructKind::Catch => 1,
            ConstructKind::Switch | ConstructKind::LogicalOperatorSequence => n.count,
            _ => 0,
        })
        .sum();
    1 + decisions
}

pub fn method_metrics(unit: &MethodUnit) -> MethodMetrics {
    let (cognitive, increments) = cognitive_complexity(unit);
    MethodMetrics {
        name: unit.name.clone(),
        parameters: unit.parameters.clone(),
        span: unit.span,
        cognitive,
        cyclomatic: cyclomatic_complexity(unit),
        loc: unit.loc,
        tolerant: unit.tolerant,
        increments,
    }
}

/// Scans, builds and measures one source text.
pub fn analyze_source(source: &str, profile: &LanguageProfile, path: &Path) -> ComplexityReport {
    let scanned = scan(source, profile);
    let built = build_structure(&scanned.tokens, profile);
    let lines: BTreeSet<u32> = scanned
        .tokens
        .iter()
        .filter(|t| !t.is_eoi())
        .flat_map(|t| t.line..=t.end().line)
        .collect();

    let mut warnings: Vec<String> = scanned
        .diagnostics
        .iter()
        .map(|d| format!("{}:{d}", path.display()))
        .collect();
    warnings.extend(built.diagnostics.iter().map(|d| format!("{}:{d}", path.display())));

    let methods: Vec<MethodMetrics> = built
        .units
        .iter()
        .map(|u| {
            let mut m = method_metrics(u);
            m.tolerant |= scanned.tolerant();
            m
        })
        .collect();
    ComplexityReport {
        path: path.to_path_buf(),
        language: profile.language,
        total_cognitive: methods.iter().map(|m| m.cognitive).sum(),
        max_cognitive: methods.iter().map(|m| m.cognitive).max().unwrap_or(0),
        total_cyclomatic: methods.iter().map(|m| m.cyclomatic).sum(),
        loc: lines.len() as u32,
        tolerant: !warnings.is_empty(),
        methods,
        warnings,
    }
}

pub fn analyze_file(path: &Path, lang: Option<Language>) -> Result<ComplexityReport> {
    let profile = detect_language(path, lang)?;
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    let source = String::from_utf8_lossy(&bytes);
    Ok(analyze_source(&source, profile, path))
}

/// Expands directories (recursively, known extensions only) and keeps
/// explicit file paths as given. Output is sorted and deduplicated.
pub fn collect_sources(paths: &[PathBuf], lang: Option<Language>) -> Result<Vec<PathBuf>> {
    fn walk(dir: &Path, lang: Option<Language>, out: &mut BTreeSet<PathBuf>) -> Result<()> {
        let entries = std::fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
        for entry in entries {
            let entry = entry.map_err(|e| Error::io(dir, e))?;
            let path = entry.path();
            if path.is_dir() {
                walk(&path, lang, out)?;
            } else if lang.is_some() || detect_language(&path, None).is_ok() {
                out.insert(path);
            }
        }
        Ok(())
    }
    let mut out = BTreeSet::new();
    for p in paths {
        if p.is_dir() {
            walk(p, lang, &mut out)?;
        } else {
            out.insert(p.clone());
        }
    }
    Ok(out.into_iter().collect())
}

/// Analyzes every file in parallel; results come back sorted by path.
pub fn analyze_paths(paths: &[PathBuf], lang: Option<Language>) -> Vec<(PathBuf, Result<ComplexityReport>)> {
    let mut results: Vec<_> =
        crate::with_thread_limit(|| paths.par_iter().map(|p| (p.clone(), analyze_file(p, lang))).collect());
    results.sort_by(|a, b| a.0.cmp(&b.0));
    results
}

pub const CSV_HEADER: &str = "path,method,cognitive,cyclomatic,loc";

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// CSV with one row per method, or one `*` row per file when `per_method` is
/// false. Files without any method produce no row.
pub fn to_csv(reports: &[ComplexityReport], per_method: bool) -> String {
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in reports {
        let path = csv_field(&r.path.to_string_lossy().replace('\\', "/"));
        if per_method {
            for m in &r.methods {
                let _ = writeln!(
                    out,
                    "{path},{},{},{},{}",
                    csv_field(&m.name),
                    m.cognitive,
                    m.cyclomatic,
                    m.loc
                );
            }
        } else if !r.methods.is_empty() {
            let _ = writeln!(out, "{path},*,{},{},{}", r.total_cognitive, r.total_cyclomatic, r.loc);
        }
    }
    out
}
