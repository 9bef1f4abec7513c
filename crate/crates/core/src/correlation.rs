//! Per-study correlations and their conversion to Fisher-z effect sizes.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use statrs::function::beta::beta_reg;
use statrs::function::erf::erfc;

use crate::error::{Error, Result, RowError};
use crate::study::Variable;

/// Significance level of the normality check.
pub const NORMALITY_ALPHA: f64 = 0.05;
/// Magnitude perfect correlations are clamped to before the z transform.
pub const CLAMP_R: f64 = 0.9999;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Pearson,
    Kendall,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Pearson => "pearson",
            Method::Kendall => "kendall",
        }
    }

    pub fn parse(s: &str) -> Option<Method> {
        match s {
            "pearson" => Some(Method::Pearson),
            "kendall" => Some(Method::Kendall),
            _ => None,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum MethodChoice {
    #[default]
    Auto,
    Force(Method),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Positive,
    Negative,
}

/// Hypothesized sign of the correlation with Cognitive Complexity.
pub fn expected_direction(v: Variable) -> Direction {
    match v {
        Variable::Time | Variable::Composite => Direction::Positive,
        Variable::Correctness | Variable::Rating | Variable::Physiological => Direction::Negative,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Correlation {
    pub coefficient: f64,
    pub p_value: f64,
}

fn check_pair(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.len() < 3 {
        return Err(Error::TooFewObservations { n: x.len(), min: 3 });
    }
    Ok(())
}

fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

/// Pearson product-moment correlation with a two-sided t-test p-value.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<Correlation> {
    check_pair(x, y)?;
    let (mx, my) = (mean(x), mean(y));
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::ConstantInput);
    }
    let r = (sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0);
    let df = (x.len() - 2) as f64;
    // P(|T| > t) for T ~ t(df) written as a regularized incomplete beta.
    let p = if r.abs() == 1.0 {
        0.0
    } else {
        beta_reg(df / 2.0, 0.5, 1.0 - r * r)
    };
    Ok(Correlation {
        coefficient: r,
        p_value: p.clamp(0.0, 1.0),
    })
}

/// Sizes of the groups of equal values (only groups larger than one).
fn tie_groups(v: &[f64]) -> Vec<f64> {
    let mut sorted = v.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut out = Vec::new();
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i + 1;
        while j < sorted.len() && sorted[j] == sorted[i] {
            j += 1;
        }
        if j - i > 1 {
            out.push((j - i) as f64);
        }
        i = j;
    }
    out
}

/// Kendall's tau-b with a normal-approximation p-value whose variance is
/// adjusted for ties in both vectors.
pub fn kendall_tau_b(x: &[f64], y: &[f64]) -> Result<Correlation> {
    check_pair(x, y)?;
    let n = x.len();
    let (mut concordant, mut discordant) = (0i64, 0i64);
    let (mut tied_x, mut tied_y) = (0i64, 0i64);
    for i in 0..n {
        for j in i + 1..n {
            let dx = x[i].total_cmp(&x[j]) as i8;
            let dy = y[i].total_cmp(&y[j]) as i8;
            if dx == 0 {
                tied_x += 1;
            }
            if dy == 0 {
                tied_y += 1;
            }
            match dx * dy {
                1 => concordant += 1,
                -1 => discordant += 1,
                _ => {}
            }
        }
    }
    let total = (n * (n - 1) / 2) as i64;
    if tied_x == total || tied_y == total {
        return Err(Error::AllTied);
    }
    let s = (concordant - discordant) as f64;
    let tau = (s / (((total - tied_x) as f64).sqrt() * ((total - tied_y) as f64).sqrt())).clamp(-1.0, 1.0);

    let sums = |groups: &[f64]| {
        groups.iter().fold((0.0, 0.0, 0.0), |(t1, t2, t3), &t| {
            (
                t1 + t * (t - 1.0),
                t2 + t * (t - 1.0) * (t - 2.0),
                t3 + t * (t - 1.0) * (2.0 * t + 5.0),
            )
        })
    };
    let (xtie, x0, x1) = sums(&tie_groups(x));
    let (ytie, y0, y1) = sums(&tie_groups(y));
    let nf = n as f64;
    let m = nf * (nf - 1.0);
    let var = (m * (2.0 * nf + 5.0) - x1 - y1) / 18.0 + 2.0 * xtie * ytie / m + x0 * y0 / (9.0 * m * (nf - 2.0));
    let z = s / var.sqrt();
    let p = erfc(z.abs() * FRAC_1_SQRT_2);
    Ok(Correlation {
        coefficient: tau,
        p_value: p.clamp(0.0, 1.0),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Normality {
    pub w: f64,
    pub p_value: f64,
    pub normal: bool,
}

/// Shapiro–Wilk test; the sample fails when p < 0.05.
pub fn normality_check(x: &[f64]) -> Result<Normality> {
    let (w, p) = shapiro_wilk(x)?;
    Ok(Normality {
        w,
        p_value: p,
        normal: p >= NORMALITY_ALPHA,
    })
}

/// Shapiro–Wilk W and p-value (Royston's AS R94 approximation).
pub fn shapiro_wilk(x: &[f64]) -> Result<(f64, f64)> {
    let n = x.len();
    if !(3..=5000).contains(&n) {
        return Err(Error::OutOfRangeN { n, min: 3, max: 5000 });
    }
    let mut sorted = x.to_vec();
    sorted.sort_by(f64::total_cmp);
    let center = sorted[n / 2];
    for v in &mut sorted {
        *v -= center;
    }
    if sorted[n - 1] - sorted[0] < SMALL {
        return Err(Error::ConstantInput);
    }
    let (w, mut p) = swilk(&sorted);
    if n == 3 {
        p = (6.0 / PI * (w.sqrt().asin() - 0.75f64.sqrt().asin())).max(0.0);
    }
    Ok((w, p.clamp(0.0, 1.0)))
}

const SMALL: f64 = 1e-19;

/// Polynomial with coefficients in increasing order of power.
fn poly(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &k| acc * x + k)
}

/// Upper tail of the standard normal (AS 66).
fn alnorm_upper(x: f64) -> f64 {
    let (mut z, mut upper) = (x, true);
    if !(z > 0.0) {
        upper = false;
        z = -z;
    }
    if !(z <= 7.0 || (upper && z <= 38.0)) {
        return if upper { 0.0 } else { 1.0 };
    }
    let y = 0.5 * z * z;
    let temp = if z <= 1.28 {
        0.5 - z
            * (0.398942280444
                - 0.399903438504 * y
                    / (y + 5.75885480458 - 29.8213557808 / (y + 2.62433121679 + 48.6959930692 / (y + 5.92885724438))))
    } else {
        0.398942280385 * (-y).exp()
            / (z - 3.8052e-8
                + 1.00000615302
                    / (z + 3.98064794e-4
                        + 1.98615381364
                            / (z - 0.151679116635
                                + 5.29330324926
                                    / (z + 4.8385912808
                                        - 15.1508972451 / (z + 0.742380924027 + 30.789933034 / (z + 3.99019417011))))))
    };
    if upper {
        temp
    } else {
        1.0 - temp
    }
}

/// Normal quantile (AS 111).
fn ppnd(p: f64) -> f64 {
    let q = p - 0.5;
    if q.abs() <= 0.42 {
        let r = q * q;
        return q * (((-25.44106049637 * r + 41.39119773534) * r - 18.61500062529) * r + 2.50662823884)
            / ((((3.13082909833 * r - 21.06224101826) * r + 23.08336743743) * r - 8.47351093090) * r + 1.0);
    }
    let r = if q > 0.0 { 1.0 - p } else { p };
    if r <= 0.0 {
        return 0.0;
    }
    let r = (-r.ln()).sqrt();
    let v = (((2.32121276858 * r + 4.85014127135) * r - 2.29796479134) * r - 2.78718931138)
        / ((1.63706781897 * r + 3.54388924762) * r + 1.0);
    if q < 0.0 {
        -v
    } else {
        v
    }
}

/// Core of AS R94 for complete samples; `x` must be sorted ascending.
fn swilk(x: &[f64]) -> (f64, f64) {
    const C1: [f64; 6] = [0.0, 0.221157, -0.147981, -2.07119, 4.434685, -2.706056];
    const C2: [f64; 6] = [0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633];
    const C3: [f64; 4] = [0.5440, -0.39978, 0.025054, -6.714e-4];
    const C4: [f64; 4] = [1.3822, -0.77857, 0.062767, -0.0020322];
    const C5: [f64; 4] = [-1.5861, -0.31082, -0.083751, 0.0038915];
    const C6: [f64; 3] = [-0.4803, -0.082676, 0.0030302];
    const G: [f64; 2] = [-2.273, 0.459];

    let n = x.len();
    let nn2 = n / 2;
    let an = n as f64;
    let mut a = vec![0.0; nn2];
    if n == 3 {
        a[0] = FRAC_1_SQRT_2;
    } else {
        let an25 = an + 0.25;
        let mut summ2 = 0.0;
        for (i, ai) in a.iter_mut().enumerate() {
            *ai = ppnd((i as f64 + 1.0 - 0.375) / an25);
            summ2 += *ai * *ai;
        }
        summ2 *= 2.0;
        let ssumm2 = summ2.sqrt();
        let rsn = 1.0 / an.sqrt();
        let a1 = poly(&C1, rsn) - a[0] / ssumm2;
        let (first, fac) = if n > 5 {
            let a2 = -a[1] / ssumm2 + poly(&C2, rsn);
            let fac = ((summ2 - 2.0 * a[0] * a[0] - 2.0 * a[1] * a[1]) / (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2)).sqrt();
            a[1] = a2;
            (2, fac)
        } else {
            let fac = ((summ2 - 2.0 * a[0] * a[0]) / (1.0 - 2.0 * a1 * a1)).sqrt();
            (1, fac)
        };
        a[0] = a1;
        for ai in &mut a[first..] {
            *ai = -*ai / fac;
        }
    }

    let range = x[n - 1] - x[0];
    // coefficient for position i of the sorted sample (antisymmetric)
    let coef = |i: usize| {
        let j = n - 1 - i;
        if i == j {
            0.0
        } else if i < j {
            -a[i]
        } else {
            a[j]
        }
    };
    let mut sx = x[0] / range;
    let mut sa = -a[0];
    for (i, xi) in x.iter().enumerate().take(n).skip(1) {
        sx += xi / range;
        sa += coef(i);
    }
    sa /= an;
    sx /= an;
    let (mut ssa, mut ssx, mut sax) = (0.0, 0.0, 0.0);
    for (i, xi) in x.iter().enumerate() {
        let asa = coef(i) - sa;
        let xsx = xi / range - sx;
        ssa += asa * asa;
        ssx += xsx * xsx;
        sax += asa * xsx;
    }
    let ssassx = (ssa * ssx).sqrt();
    let w1 = (ssassx - sax) * (ssassx + sax) / (ssa * ssx);
    let w = 1.0 - w1;

    if n == 3 {
        return (w.max(0.75), 1.0 - 6.0 / PI * w.sqrt().acos());
    }
    let y = w1.ln();
    if n <= 11 {
        let gamma = poly(&G, an);
        if y >= gamma {
            return (w, SMALL);
        }
        let y = -(gamma - y).ln();
        let m = poly(&C3, an);
        let s = poly(&C4, an).exp();
        return (w, alnorm_upper((y - m) / s));
    }
    let xx = an.ln();
    let m = poly(&C5, xx);
    let s = poly(&C6, xx).exp();
    (w, alnorm_upper((y - m) / s))
}

/// Pearson when both samples pass the normality check, Kendall otherwise.
pub fn select_method(x: &[f64], y: &[f64]) -> Result<Method> {
    let nx = normality_check(x)?;
    let ny = normality_check(y)?;
    Ok(if nx.normal && ny.normal {
        Method::Pearson
    } else {
        Method::Kendall
    })
}

/// Greiner's relation between Kendall's tau and Pearson's r.
pub fn kendall_to_pearson(tau: f64) -> f64 {
    (PI * tau / 2.0).sin()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationResult {
    pub dataset_id: String,
    pub variable: Variable,
    pub outcome: Option<String>,
    pub method: Method,
    pub coefficient: f64,
    pub n: usize,
    pub p_value: f64,
    pub expected_direction: Direction,
    /// The method was forced against the normality check's choice.
    pub forced: bool,
}

/// Correlates `x` (complexity) with `y` (a comprehension variable).
pub fn correlate(
    dataset_id: &str,
    variable: Variable,
    outcome: Option<&str>,
    x: &[f64],
    y: &[f64],
    choice: MethodChoice,
) -> Result<CorrelationResult> {
    check_pair(x, y)?;
    let (method, forced) = match choice {
        MethodChoice::Auto => (select_method(x, y)?, false),
        MethodChoice::Force(m) => {
            let natural = select_method(x, y).ok();
            let forced = natural.is_some_and(|nat| nat != m);
            if forced {
                log::debug!(
                    "dataset {dataset_id}, {variable}: {m} forced although the normality check selects otherwise"
                );
            }
            (m, forced)
        }
    };
    let c = match method {
        Method::Pearson => pearson(x, y)?,
        Method::Kendall => kendall_tau_b(x, y)?,
    };
    Ok(CorrelationResult {
        dataset_id: dataset_id.to_string(),
        variable,
        outcome: outcome.map(str::to_string),
        method,
        coefficient: c.coefficient,
        n: x.len(),
        p_value: c.p_value,
        expected_direction: expected_direction(variable),
        forced,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EffectSize {
    pub dataset_id: String,
    pub variable: Variable,
    pub outcome: Option<String>,
    pub method: Method,
    pub coefficient: f64,
    pub n: usize,
    pub r: f64,
    pub z: f64,
    pub var_z: f64,
    pub p_value: f64,
    pub converted_from_kendall: bool,
    /// |r| was 1 and has been pulled back to 0.9999.
    pub clamped: bool,
}

pub fn to_effect_size(result: &CorrelationResult) -> Result<EffectSize> {
    if result.n < 4 {
        return Err(Error::NTooSmall { n: result.n });
    }
    let converted = result.method == Method::Kendall;
    let mut r = if converted {
        kendall_to_pearson(result.coefficient)
    } else {
        result.coefficient
    };
    let clamped = r.abs() >= 1.0;
    if clamped {
        log::debug!(
            "dataset {}, {}: perfect correlation clamped to ±{CLAMP_R}",
            result.dataset_id,
            result.variable
        );
        r = CLAMP_R.copysign(r);
    }
    Ok(EffectSize {
        dataset_id: result.dataset_id.clone(),
        variable: result.variable,
        outcome: result.outcome.clone(),
        method: result.method,
        coefficient: result.coefficient,
        n: result.n,
        r,
        z: r.atanh(),
        var_z: 1.0 / (result.n as f64 - 3.0),
        p_value: result.p_value,
        converted_from_kendall: converted,
        clamped,
    })
}

pub const EFFECTS_HEADER: &str = "dataset_id,variable,method,coefficient,n,r,z,var_z,p_value";

/// Effects CSV with 6-decimal reals. An `outcome` column is appended when any
/// effect carries one.
pub fn effects_to_csv(effects: &[EffectSize]) -> String {
    let with_outcome = effects.iter().any(|e| e.outcome.is_some());
    let mut out = String::from(EFFECTS_HEADER);
    if with_outcome {
        out.push_str(",outcome");
    }
    out.push('\n');
    for e in effects {
        out.push_str(&format!(
            "{},{},{},{:.6},{},{:.6},{:.6},{:.6},{:.6}",
            e.dataset_id, e.variable, e.method, e.coefficient, e.n, e.r, e.z, e.var_z, e.p_value
        ));
        if with_outcome {
            out.push(',');
            out.push_str(e.outcome.as_deref().unwrap_or(""));
        }
        out.push('\n');
    }
    out
}

pub fn load_effects(path: &Path) -> Result<Vec<EffectSize>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_effects(&text, path)
}

/// Reads an effects CSV. `z` and `var_z` are taken as written; `r` is
/// recomputed as `tanh(z)` when the two disagree beyond printed precision.
pub fn parse_effects(text: &str, path: &Path) -> Result<Vec<EffectSize>> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let headers = rdr
        .headers()
        .map_err(|source| Error::Csv {
            path: path.to_path_buf(),
            source,
        })?
        .clone();
    let names: Vec<&str> = headers.iter().collect();
    let expected: Vec<&str> = EFFECTS_HEADER.split(',').collect();
    let has_outcome = names.len() == expected.len() + 1 && names[expected.len()] == "outcome";
    if names.len() < expected.len()
        || names[..expected.len()] != expected[..]
        || (names.len() > expected.len() && !has_outcome)
    {
        return Err(Error::Schema {
            path: path.to_path_buf(),
            rows: vec![RowError {
                row: 1,
                message: format!("expected header `{EFFECTS_HEADER}[,outcome]`"),
            }],
        });
    }
    let mut out = Vec::new();
    let mut errors = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let row = i + 2;
        let rec = match rec {
            Ok(r) if r.len() == names.len() => r,
            Ok(r) => {
                errors.push(RowError {
                    row,
                    message: format!("expected {} fields, found {}", names.len(), r.len()),
                });
                continue;
            }
            Err(e) => {
                errors.push(RowError {
                    row,
                    message: e.to_string(),
                });
                continue;
            }
        };
        let parsed = (|| -> std::result::Result<EffectSize, String> {
            let variable = Variable::parse(&rec[1]).ok_or_else(|| format!("unknown variable `{}`", &rec[1]))?;
            let method = Method::parse(&rec[2]).ok_or_else(|| format!("unknown method `{}`", &rec[2]))?;
            let num = |k: usize| -> std::result::Result<f64, String> {
                rec[k]
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| format!("invalid {} `{}`", names[k], &rec[k]))
            };
            let n: usize = rec[4].parse().map_err(|_| format!("invalid n `{}`", &rec[4]))?;
            let (coefficient, r, z, var_z, p_value) = (num(3)?, num(5)?, num(6)?, num(7)?, num(8)?);
            if !(var_z > 0.0) {
                return Err(format!("var_z must be positive, got {var_z}"));
            }
            if r.abs() >= 1.0 {
                return Err(format!("r must lie in (-1, 1), got {r}"));
            }
            Ok(EffectSize {
                dataset_id: rec[0].to_string(),
                variable,
                outcome: if has_outcome && !rec[9].is_empty() {
                    Some(rec[9].to_string())
                } else {
                    None
                },
                method,
                coefficient,
                n,
                r,
                z,
                var_z,
                p_value,
                converted_from_kendall: method == Method::Kendall,
                clamped: false,
            })
        })();
        match parsed {
            Ok(e) => out.push(e),
            Err(message) => errors.push(RowError { row, message }),
        }
    }
    if !errors.is_empty() {
        return Err(Error::Value {
            path: path.to_path_buf(),
            rows: errors,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn pearson_examples() {
        let r = pearson(&[1., 2., 3., 4.], &[3., 5., 7., 9.]).unwrap();
        assert!(close(r.coefficient, 1.0, 1e-15));
        let r = pearson(&[1., 2., 3.], &[3., 2., 1.]).unwrap();
        assert!(close(r.coefficient, -1.0, 1e-15));
        let r = pearson(&[1., 2., 3., 4., 5.], &[2., 1., 4., 3., 5.]).unwrap();
        assert!(close(r.coefficient, 0.8, 1e-12));
        assert!(matches!(
            pearson(&[1., 1., 1.], &[1., 2., 3.]),
            Err(Error::ConstantInput)
        ));
    }

    #[test]
    fn kendall_examples() {
        let t = kendall_tau_b(&[1., 2., 3., 4.], &[1., 2., 3., 4.]).unwrap();
        assert_eq!(t.coefficient, 1.0);
        let t = kendall_tau_b(&[1., 2., 3., 4.], &[4., 3., 2., 1.]).unwrap();
        assert_eq!(t.coefficient, -1.0);
        let t = kendall_tau_b(&[1., 1., 2., 3.], &[1., 2., 2., 3.]).unwrap();
        // (C - D) = 4, ties: one in x, one in y over 6 pairs -> 4 / sqrt(5 * 5)
        assert!(close(t.coefficient, 0.8, 1e-15));
        assert!(matches!(
            kendall_tau_b(&[1., 1., 1.], &[1., 2., 3.]),
            Err(Error::AllTied)
        ));
    }

    #[test]
    fn conversions() {
        assert_eq!(kendall_to_pearson(0.0), 0.0);
        assert!(close(kendall_to_pearson(1.0), 1.0, 1e-15));
        assert!(close(kendall_to_pearson(0.5), (0.5f64).sqrt(), 1e-15));
    }

    fn result(method: Method, coefficient: f64, n: usize) -> CorrelationResult {
        CorrelationResult {
            dataset_id: "d".into(),
            variable: Variable::Time,
            outcome: None,
            method,
            coefficient,
            n,
            p_value: 0.5,
            expected_direction: Direction::Positive,
            forced: false,
        }
    }

    #[test]
    fn effect_sizes() {
        let e = to_effect_size(&result(Method::Pearson, 0.0, 20)).unwrap();
        assert_eq!((e.z, e.var_z), (0.0, 1.0 / 17.0));
        let e = to_effect_size(&result(Method::Pearson, 0.5, 12)).unwrap();
        assert!(close(e.z, 0.549306, 1e-6));
        assert_eq!(e.var_z, 1.0 / 9.0);
        let e = to_effect_size(&result(Method::Kendall, 0.4, 30)).unwrap();
        assert!(close(e.r, 0.587785, 1e-6));
        assert!(close(e.z, 0.674275, 1e-6));
        assert_eq!(e.var_z, 1.0 / 27.0);
        let e = to_effect_size(&result(Method::Pearson, -1.0, 10)).unwrap();
        assert!(e.clamped && e.r == -CLAMP_R);
        assert!(matches!(
            to_effect_size(&result(Method::Pearson, 0.1, 3)),
            Err(Error::NTooSmall { n: 3 })
        ));
    }

    #[test]
    fn shapiro_rejects_skew_and_constants() {
        let skew = [0., 0., 0., 0., 0., 0., 0., 0., 0., 10.];
        assert!(!normality_check(&skew).unwrap().normal);
        assert!(matches!(normality_check(&[2., 2., 2.]), Err(Error::ConstantInput)));
        assert!(matches!(normality_check(&[1., 2.]), Err(Error::OutOfRangeN { .. })));
    }

    #[test]
    fn effects_csv_round_trip() {
        let e = to_effect_size(&result(Method::Kendall, 0.4, 30)).unwrap();
        let text = effects_to_csv(std::slice::from_ref(&e));
        assert!(text.starts_with(EFFECTS_HEADER));
        let back = parse_effects(&text, Path::new("e.csv")).unwrap();
        assert_eq!(back.len(), 1);
        assert!(close(back[0].z, e.z, 1e-6));
        assert_eq!(back[0].method, Method::Kendall);
    }
}
