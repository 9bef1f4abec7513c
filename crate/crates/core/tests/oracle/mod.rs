//! Comparison against the frozen scipy/statsmodels results in
//! `fixtures/oracle/stats.json`.

use cogscope_core::correlation::{kendall_tau_b, pearson, shapiro_wilk};
use cogscope_core::meta::{random_effects, StudyEffect, Tau2Estimator};
use cogscope_core::study::Variable;
use serde_json::Value;
use std::path::Path;

pub const TOL: f64 = 1e-6;

pub fn load() -> Value {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/oracle/stats.json");
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn floats(v: &Value) -> Vec<f64> {
    v.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect()
}

struct Checker {
    failures: Vec<String>,
    checked: usize,
}

impl Checker {
    fn close(&mut self, what: String, got: f64, want: f64) {
        self.checked += 1;
        if (got - want).abs() > TOL || !got.is_finite() {
            self.failures.push(format!("{what}: got {got}, expected {want}"));
        }
    }
}

pub struct Outcome {
    pub checked: usize,
    pub failures: Vec<String>,
}

pub fn correlation_mismatches(oracle: &Value) -> Outcome {
    let mut c = Checker {
        failures: vec![],
        checked: 0,
    };
    for case in oracle["correlation"].as_array().unwrap() {
        let n = case["n"].as_u64().unwrap();
        let x = floats(&case["x"]);
        let y = floats(&case["y"]);
        let normal = floats(&case["normal_sample"]);
        let f = |k: &str| case[k].as_f64().unwrap();

        let p = pearson(&x, &y).unwrap();
        c.close(format!("n={n} pearson r"), p.coefficient, f("pearson_r"));
        c.close(format!("n={n} pearson p"), p.p_value, f("pearson_p"));
        c.close(format!("n={n} fisher z"), p.coefficient.atanh(), f("fisher_z"));

        let k = kendall_tau_b(&x, &y).unwrap();
        c.close(format!("n={n} kendall tau"), k.coefficient, f("kendall_tau"));
        c.close(format!("n={n} kendall p"), k.p_value, f("kendall_p"));

        for (name, sample) in [("x", &x), ("y", &y), ("normal", &normal)] {
            let (w, pv) = shapiro_wilk(sample).unwrap();
            c.close(format!("n={n} shapiro {name} W"), w, f(&format!("shapiro_{name}_w")));
            c.close(format!("n={n} shapiro {name} p"), pv, f(&format!("shapiro_{name}_p")));
        }
    }
    Outcome {
        checked: c.checked,
        failures: c.failures,
    }
}

fn studies(case: &Value) -> Vec<StudyEffect> {
    floats(&case["z"])
        .into_iter()
        .zip(floats(&case["var"]))
        .enumerate()
        .map(|(i, (z, var_z))| StudyEffect {
            dataset_id: format!("s{i:02}"),
            variable: Variable::Time,
            z,
            var_z,
            members: vec![],
            pooled: false,
            p_value: None,
        })
        .collect()
}

pub fn meta_mismatches(oracle: &Value) -> Outcome {
    let mut c = Checker {
        failures: vec![],
        checked: 0,
    };
    for (i, case) in oracle["meta"].as_array().unwrap().iter().enumerate() {
        let k = case["k"].as_u64().unwrap();
        let f = |key: &str| case[key].as_f64().unwrap();
        let s = studies(case);

        let dl = random_effects(&s, Tau2Estimator::Dl).unwrap();
        let tag = format!("case {i} (k={k}) DL");
        c.close(format!("{tag} summary z"), dl.summary_z, f("dl_summary_z"));
        c.close(format!("{tag} se"), dl.se, f("dl_se"));
        c.close(format!("{tag} tau2"), dl.tau2, f("dl_tau2"));
        c.close(format!("{tag} Q"), dl.q, f("dl_q"));
        c.close(format!("{tag} I2"), dl.i2, f("dl_i2"));
        c.close(format!("{tag} ci low"), dl.ci_low_z, f("dl_ci_low"));
        c.close(format!("{tag} ci high"), dl.ci_high_z, f("dl_ci_high"));

        let reml = random_effects(&s, Tau2Estimator::Reml).unwrap();
        let tag = format!("case {i} (k={k}) REML");
        c.close(format!("{tag} tau2"), reml.tau2, f("reml_tau2"));
        c.close(format!("{tag} summary z"), reml.summary_z, f("reml_summary_z"));
    }
    Outcome {
        checked: c.checked,
        failures: c.failures,
    }
}
