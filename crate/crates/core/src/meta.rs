//! Random-effects meta-analysis on the Fisher-z scale.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use serde::Serialize;
use statrs::function::erf::erfc;

use crate::correlation::EffectSize;
use crate::error::{Error, Result};
use crate::study::Variable;

pub const Z_95: f64 = 1.96;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Tau2Estimator {
    /// DerSimonian–Laird method of moments.
    #[default]
    Dl,
    /// Restricted maximum likelihood by fixed-point iteration.
    Reml,
}

impl Tau2Estimator {
    pub fn parse(s: &str) -> Option<Tau2Estimator> {
        match s.to_ascii_lowercase().as_str() {
            "dl" => Some(Tau2Estimator::Dl),
            "reml" | "reml-iterative" => Some(Tau2Estimator::Reml),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Interpretation {
    None,
    Small,
    Medium,
    Large,
}

impl Interpretation {
    pub fn as_str(self) -> &'static str {
        match self {
            Interpretation::None => "none",
            Interpretation::Small => "small",
            Interpretation::Medium => "medium",
            Interpretation::Large => "large",
        }
    }
}

impl fmt::Display for Interpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Cohen's benchmarks with exclusive lower bounds: > 0.1 small, > 0.3 medium,
/// > 0.5 large.
pub fn interpret(summary_r: f64) -> Interpretation {
    let a = summary_r.abs();
    if a > 0.5 {
        Interpretation::Large
    } else if a > 0.3 {
        Interpretation::Medium
    } else if a > 0.1 {
        Interpretation::Small
    } else {
        Interpretation::None
    }
}

/// One study's effect as entered into the meta-analysis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StudyEffect {
    pub dataset_id: String,
    pub variable: Variable,
    pub z: f64,
    pub var_z: f64,
    /// Outcome labels combined into this effect (empty for a single effect).
    pub members: Vec<String>,
    pub pooled: bool,
    pub p_value: Option<f64>,
}

impl StudyEffect {
    pub fn from_effect(e: &EffectSize) -> StudyEffect {
        StudyEffect {
            dataset_id: e.dataset_id.clone(),
            variable: e.variable,
            z: e.z,
            var_z: e.var_z,
            members: e.outcome.iter().cloned().collect(),
            pooled: false,
            p_value: Some(e.p_value),
        }
    }

    pub fn r(&self) -> f64 {
        self.z.tanh()
    }

    pub fn ci_r(&self) -> (f64, f64) {
        let half = Z_95 * self.var_z.sqrt();
        ((self.z - half).tanh(), (self.z + half).tanh())
    }

    /// Label shown in plots: the dataset id, marked when pooled.
    pub fn label(&self) -> String {
        if self.pooled {
            format!("{} (pooled)", self.dataset_id)
        } else {
            match self.members.as_slice() {
                [only] => format!("{} [{only}]", self.dataset_id),
                _ => self.dataset_id.clone(),
            }
        }
    }
}

/// Combines several outcomes of one study: the mean of the z values with
/// variance `(1/m²) Σᵢⱼ ρᵢⱼ √(vᵢ vⱼ)`, ρ = 1 on the diagonal.
pub fn pool_within_study(effects: &[EffectSize], rho: f64) -> Result<StudyEffect> {
    let first = effects
        .first()
        .ok_or_else(|| Error::InvalidEffect("nothing to pool".into()))?;
    if let Some(other) = effects
        .iter()
        .find(|e| e.dataset_id != first.dataset_id || e.variable != first.variable)
    {
        return Err(Error::MixedStudies(format!(
            "{}/{} vs {}/{}",
            first.dataset_id, first.variable, other.dataset_id, other.variable
        )));
    }
    if !(-1.0..=1.0).contains(&rho) {
        return Err(Error::InvalidEffect(format!("rho must lie in [-1, 1], got {rho}")));
    }
    if effects.len() == 1 {
        return Ok(StudyEffect::from_effect(first));
    }
    let mut sorted: Vec<&EffectSize> = effects.iter().collect();
    sorted.sort_by(|a, b| {
        a.outcome
            .cmp(&b.outcome)
            .then(a.z.total_cmp(&b.z))
            .then(a.var_z.total_cmp(&b.var_z))
    });
    let m = sorted.len() as f64;
    let z = sorted.iter().map(|e| e.z).sum::<f64>() / m;
    let mut cov = 0.0;
    for (i, a) in sorted.iter().enumerate() {
        for (j, b) in sorted.iter().enumerate() {
            let c = if i == j { 1.0 } else { rho };
            cov += c * (a.var_z * b.var_z).sqrt();
        }
    }
    Ok(StudyEffect {
        dataset_id: first.dataset_id.clone(),
        variable: first.variable,
        z,
        var_z: cov / (m * m),
        members: sorted
            .iter()
            .enumerate()
            .map(|(i, e)| e.outcome.clone().unwrap_or_else(|| format!("#{}", i + 1)))
            .collect(),
        pooled: true,
        p_value: None,
    })
}

/// Groups effects by variable, pooling several outcomes of one dataset.
/// Studies within a variable are ordered by dataset id.
pub fn study_effects(effects: &[EffectSize], rho: f64) -> Result<BTreeMap<Variable, Vec<StudyEffect>>> {
    let mut groups: BTreeMap<(Variable, &str), Vec<EffectSize>> = BTreeMap::new();
    for e in effects {
        groups
            .entry((e.variable, e.dataset_id.as_str()))
            .or_default()
            .push(e.clone());
    }
    let mut out: BTreeMap<Variable, Vec<StudyEffect>> = BTreeMap::new();
    for ((variable, _), members) in groups {
        out.entry(variable).or_default().push(pool_within_study(&members, rho)?);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetaResult {
    pub variable: Variable,
    pub k: usize,
    pub estimator: Tau2Estimator,
    pub summary_z: f64,
    pub se: f64,
    pub summary_r: f64,
    pub ci_low_r: f64,
    pub ci_high_r: f64,
    pub ci_low_z: f64,
    pub ci_high_z: f64,
    pub tau2: f64,
    pub q: f64,
    pub i2: f64,
    /// Two-sided normal test of the summary effect.
    pub p_value: f64,
    /// Normalized random-effects weights, aligned with `studies`.
    pub weights: Vec<f64>,
    pub interpretation: Interpretation,
    /// False when fewer than two studies were available.
    pub pooled: bool,
    pub studies: Vec<StudyEffect>,
}

fn validate(effects: &[StudyEffect]) -> Result<Variable> {
    let first = effects
        .first()
        .ok_or_else(|| Error::InvalidEffect("no studies to pool".into()))?;
    for e in effects {
        if e.variable != first.variable {
            return Err(Error::MixedStudies(format!("{} vs {}", first.variable, e.variable)));
        }
        if !(e.var_z > 0.0 && e.var_z.is_finite()) {
            return Err(Error::InvalidEffect(format!(
                "{}: var_z must be positive, got {}",
                e.dataset_id, e.var_z
            )));
        }
        if !e.z.is_finite() {
            return Err(Error::InvalidEffect(format!("{}: non-finite z", e.dataset_id)));
        }
    }
    Ok(first.variable)
}

fn weighted_mean(z: &[f64], w: &[f64]) -> f64 {
    let sw: f64 = w.iter().sum();
    z.iter().zip(w).map(|(z, w)| z * w).sum::<f64>() / sw
}

/// DerSimonian–Laird τ² together with Cochran's Q.
pub fn tau2_dl(z: &[f64], v: &[f64]) -> (f64, f64) {
    let w: Vec<f64> = v.iter().map(|v| 1.0 / v).collect();
    let fixed = weighted_mean(z, &w);
    let q: f64 = z.iter().zip(&w).map(|(z, w)| w * (z - fixed).powi(2)).sum();
    let sw: f64 = w.iter().sum();
    let sw2: f64 = w.iter().map(|w| w * w).sum();
    let k = z.len() as f64;
    let c = sw - sw2 / sw;
    let tau2 = if c > 0.0 { ((q - (k - 1.0)) / c).max(0.0) } else { 0.0 };
    (tau2, q)
}

/// REML τ² by the standard fixed-point iteration, started from the DL value.
pub fn tau2_reml(z: &[f64], v: &[f64]) -> f64 {
    let mut tau2 = tau2_dl(z, v).0;
    for _ in 0..10_000 {
        let w: Vec<f64> = v.iter().map(|v| 1.0 / (v + tau2)).collect();
        let mu = weighted_mean(z, &w);
        let sw: f64 = w.iter().sum();
        let sw2: f64 = w.iter().map(|w| w * w).sum();
        let num: f64 = z
            .iter()
            .zip(v)
            .zip(&w)
            .map(|((z, v), w)| w * w * ((z - mu).powi(2) - v))
            .sum();
        let next = (num / sw2 + 1.0 / sw).max(0.0);
        if (next - tau2).abs() <= 1e-14 * next.max(1.0) {
            return next;
        }
        tau2 = next;
    }
    tau2
}

/// Random-effects pooling. With a single study the effect passes through
/// unpooled.
pub fn random_effects(effects: &[StudyEffect], estimator: Tau2Estimator) -> Result<MetaResult> {
    let variable = validate(effects)?;
    let mut studies = effects.to_vec();
    // canonical order keeps every sum independent of input order
    studies.sort_by(|a, b| {
        a.dataset_id
            .cmp(&b.dataset_id)
            .then(a.z.total_cmp(&b.z))
            .then(a.var_z.total_cmp(&b.var_z))
            .then(a.members.cmp(&b.members))
    });
    let z: Vec<f64> = studies.iter().map(|s| s.z).collect();
    let v: Vec<f64> = studies.iter().map(|s| s.var_z).collect();
    let k = studies.len();

    let (dl_tau2, q) = tau2_dl(&z, &v);
    let tau2 = if k < 2 {
        0.0
    } else {
        match estimator {
            Tau2Estimator::Dl => dl_tau2,
            Tau2Estimator::Reml => tau2_reml(&z, &v),
        }
    };
    let w: Vec<f64> = v.iter().map(|v| 1.0 / (v + tau2)).collect();
    let sw: f64 = w.iter().sum();
    let summary_z = weighted_mean(&z, &w);
    let se = (1.0 / sw).sqrt();
    let (ci_low_z, ci_high_z) = (summary_z - Z_95 * se, summary_z + Z_95 * se);
    let i2 = if q > 0.0 && k >= 2 {
        ((q - (k as f64 - 1.0)) / q).max(0.0) * 100.0
    } else {
        0.0
    };
    let summary_r = summary_z.tanh();
    Ok(MetaResult {
        variable,
        k,
        estimator,
        summary_z,
        se,
        summary_r,
        ci_low_r: ci_low_z.tanh(),
        ci_high_r: ci_high_z.tanh(),
        ci_low_z,
        ci_high_z,
        tau2,
        q,
        i2,
        p_value: erfc((summary_z / se).abs() * FRAC_1_SQRT_2).clamp(0.0, 1.0),
        weights: w.iter().map(|w| w / sw).collect(),
        interpretation: interpret(summary_r),
        pooled: k >= 2,
        studies,
    })
}

pub const META_HEADER: &str = "variable,k,summary_r,ci_low,ci_high,tau2,Q,I2,interpretation";

pub fn meta_to_csv(results: &[MetaResult]) -> String {
    let mut out = String::from(META_HEADER);
    out.push('\n');
    for m in results {
        out.push_str(&format!(
            "{},{},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{}\n",
            m.variable, m.k, m.summary_r, m.ci_low_r, m.ci_high_r, m.tau2, m.q, m.i2, m.interpretation
        ));
    }
    out
}
