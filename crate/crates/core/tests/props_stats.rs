use std::collections::BTreeMap;

use cogscope_core::correlation::{kendall_tau_b, pearson, select_method, Correlation};
use cogscope_core::meta::{meta_to_csv, random_effects, MetaResult, StudyEffect, Tau2Estimator};
use cogscope_core::plot::{render_ascii, render_svg, ForestPlotSpec};
use cogscope_core::study::{aggregate, composite_timed_correctness, Measurement, SnippetAggregate, Variable};
use proptest::prelude::*;

fn config() -> ProptestConfig {
    let cases = std::env::var("PROPTEST_CASES")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(0);
    ProptestConfig {
        cases: cases.max(256),
        ..ProptestConfig::default()
    }
}

// ---------------------------------------------------------------- study

/// Per snippet: (time values, correctness values).
fn snippet_data() -> impl Strategy<Value = Vec<(Vec<f64>, Vec<f64>)>> {
    prop::collection::vec(
        (
            prop::collection::vec(1.0f64..500.0, 1..6),
            prop::collection::vec(prop_oneof![Just(0.0), Just(1.0), 0.0f64..1.0], 1..6),
        ),
        2..12,
    )
}

fn measurements(data: &[(Vec<f64>, Vec<f64>)], time_scale: f64) -> (Vec<Measurement>, BTreeMap<String, u32>) {
    let mut rows = Vec::new();
    let mut metrics = BTreeMap::new();
    for (i, (times, corr)) in data.iter().enumerate() {
        let snippet = format!("s{i:02}");
        metrics.insert(snippet.clone(), i as u32);
        let mut push = |variable, value, p: usize| {
            rows.push(Measurement {
                dataset_id: "d".into(),
                snippet_id: snippet.clone(),
                participant_id: format!("p{p}"),
                variable,
                value,
                outcome: None,
                row: rows.len() + 2,
            })
        };
        for (p, t) in times.iter().enumerate() {
            push(Variable::Time, t * time_scale, p);
        }
        for (p, c) in corr.iter().enumerate() {
            push(Variable::Correctness, *c, p);
        }
    }
    (rows, metrics)
}

fn aggregates(data: &[(Vec<f64>, Vec<f64>)], scale: f64) -> Vec<SnippetAggregate> {
    let (rows, metrics) = measurements(data, scale);
    aggregate(&rows, &metrics).unwrap()
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn composite_lies_in_unit_interval(data in snippet_data(), use_means in any::<bool>()) {
        let aggs = aggregates(&data, 1.0);
        prop_assume!(aggs.iter().any(|a| a.stats[&Variable::Correctness].mean > 0.0));
        let comp = composite_timed_correctness(&aggs, use_means).unwrap();
        let c_max = aggs.iter().map(|a| a.stats[&Variable::Correctness].mean).fold(f64::MIN, f64::max);
        let t_of = |a: &SnippetAggregate| {
            let s = a.stats[&Variable::Time];
            if use_means { s.mean } else { s.median }
        };
        let t_max = aggs.iter().map(t_of).fold(f64::MIN, f64::max);
        for (a, (id, v)) in aggs.iter().zip(&comp) {
            prop_assert_eq!(&a.snippet_id, id);
            prop_assert!((0.0..=1.0).contains(v));
            let c = a.stats[&Variable::Correctness].mean;
            // 1 is reached only by the slowest snippet with zero correctness
            if *v == 1.0 {
                prop_assert!(c == 0.0 && t_of(a) == t_max);
            }
            prop_assert_eq!(*v == 0.0, c == c_max, "snippet {} value {}", id, v);
        }
    }

    #[test]
    fn composite_ignores_time_scale(data in snippet_data(), scale in 0.001f64..1000.0, use_means in any::<bool>()) {
        let a = aggregates(&data, 1.0);
        let b = aggregates(&data, scale);
        prop_assume!(a.iter().any(|a| a.stats[&Variable::Correctness].mean > 0.0));
        let ca = composite_timed_correctness(&a, use_means).unwrap();
        let cb = composite_timed_correctness(&b, use_means).unwrap();
        for ((ia, va), (ib, vb)) in ca.iter().zip(&cb) {
            prop_assert_eq!(ia, ib);
            prop_assert!((va - vb).abs() <= 1e-12, "{} vs {}", va, vb);
        }
    }

    #[test]
    fn aggregation_ignores_row_order(data in snippet_data(), perm in any::<u64>()) {
        let (rows, metrics) = measurements(&data, 1.0);
        let mut shuffled = rows.clone();
        let mut state = perm;
        for i in (1..shuffled.len()).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            shuffled.swap(i, (state >> 33) as usize % (i + 1));
        }
        prop_assert_eq!(aggregate(&rows, &metrics).unwrap(), aggregate(&shuffled, &metrics).unwrap());
    }
}

// ---------------------------------------------------------- correlation

fn paired(max: usize) -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (4usize..max).prop_flat_map(|n| {
        (
            prop::collection::vec(prop_oneof![(0i32..20).prop_map(f64::from), -50.0f64..50.0], n),
            prop::collection::vec(prop_oneof![(0i32..20).prop_map(f64::from), -50.0f64..50.0], n),
        )
    })
}

fn both(x: &[f64], y: &[f64]) -> Vec<Correlation> {
    [pearson(x, y), kendall_tau_b(x, y)]
        .into_iter()
        .filter_map(Result::ok)
        .collect()
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn coefficients_and_p_values_in_range((x, y) in paired(40)) {
        for c in both(&x, &y) {
            prop_assert!((-1.0..=1.0).contains(&c.coefficient), "{:?}", c);
            prop_assert!((0.0..=1.0).contains(&c.p_value), "{:?}", c);
        }
    }

    #[test]
    fn pearson_affine_invariance((x, y) in paired(40), a in prop_oneof![-100.0f64..-0.01, 0.01f64..100.0], b in -100.0f64..100.0) {
        let Ok(base) = pearson(&x, &y) else { return Ok(()) };
        let xs: Vec<f64> = x.iter().map(|v| a * v + b).collect();
        let moved = pearson(&xs, &y).unwrap();
        prop_assert!((moved.coefficient - a.signum() * base.coefficient).abs() <= 1e-12,
            "{} vs {}", moved.coefficient, base.coefficient);
    }

    #[test]
    fn kendall_monotone_invariance((x, y) in paired(40), f in 0usize..3) {
        let Ok(base) = kendall_tau_b(&x, &y) else { return Ok(()) };
        let g = |v: f64| match f {
            0 => 3.0 * v + 7.0,
            1 => (v / 25.0).exp(),
            _ => v * v * v,
        };
        let xs: Vec<f64> = x.iter().map(|v| g(*v)).collect();
        // the transform must keep distinct values distinct
        let distinct = |v: &[f64]| {
            let mut s = v.to_vec();
            s.sort_by(f64::total_cmp);
            s.dedup();
            s.len()
        };
        prop_assume!(distinct(&xs) == distinct(&x));
        prop_assert_eq!(kendall_tau_b(&xs, &y).unwrap(), base);
    }

    #[test]
    fn correlation_is_symmetric((x, y) in paired(40)) {
        if let (Ok(a), Ok(b)) = (pearson(&x, &y), pearson(&y, &x)) {
            prop_assert!((a.coefficient - b.coefficient).abs() <= 1e-12);
            prop_assert!((a.p_value - b.p_value).abs() <= 1e-12);
        }
        if let (Ok(a), Ok(b)) = (kendall_tau_b(&x, &y), kendall_tau_b(&y, &x)) {
            prop_assert!((a.coefficient - b.coefficient).abs() <= 1e-12);
            prop_assert!((a.p_value - b.p_value).abs() <= 1e-12);
        }
    }

    #[test]
    fn fisher_round_trip(r in -0.999f64..=0.999) {
        prop_assert!((r.atanh().tanh() - r).abs() <= 1e-12);
    }

    #[test]
    fn method_selection_is_total((x, y) in paired(60)) {
        // either a method or a clean error, never a panic
        let _ = select_method(&x, &y);
    }
}

// ----------------------------------------------------------------- meta

fn study(i: usize, z: f64, v: f64) -> StudyEffect {
    StudyEffect {
        dataset_id: format!("ds{i:02}"),
        variable: Variable::Time,
        z,
        var_z: v,
        members: vec![],
        pooled: false,
        p_value: None,
    }
}

fn studies(min_k: usize) -> impl Strategy<Value = Vec<StudyEffect>> {
    prop::collection::vec((-1.5f64..1.5, 0.005f64..0.5), min_k..12).prop_map(|v| {
        v.into_iter()
            .enumerate()
            .map(|(i, (z, var))| study(i, z, var))
            .collect()
    })
}

// tight spread relative to the sampling variance keeps Q at or below k - 1
fn homogeneous_studies() -> impl Strategy<Value = Vec<StudyEffect>> {
    (
        -1.0f64..1.0,
        prop::collection::vec((-0.05f64..0.05, 0.2f64..0.5), 2..12),
    )
        .prop_map(|(c, v)| {
            v.into_iter()
                .enumerate()
                .map(|(i, (d, var))| study(i, c + d, var))
                .collect()
        })
}

fn estimator() -> impl Strategy<Value = Tau2Estimator> {
    prop_oneof![Just(Tau2Estimator::Dl), Just(Tau2Estimator::Reml)]
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn weights_sum_to_one(s in studies(1), est in estimator()) {
        let m = random_effects(&s, est).unwrap();
        prop_assert!((m.weights.iter().sum::<f64>() - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn summary_within_study_range(s in studies(1), est in estimator()) {
        let m = random_effects(&s, est).unwrap();
        let rs: Vec<f64> = s.iter().map(StudyEffect::r).collect();
        let lo = rs.iter().cloned().fold(f64::MAX, f64::min);
        let hi = rs.iter().cloned().fold(f64::MIN, f64::max);
        prop_assert!(m.summary_r >= lo - 1e-12 && m.summary_r <= hi + 1e-12);
    }

    #[test]
    fn input_order_is_irrelevant(s in studies(1), est in estimator(), seed in any::<u64>()) {
        let mut shuffled = s.clone();
        let mut state = seed;
        for i in (1..shuffled.len()).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            shuffled.swap(i, (state >> 33) as usize % (i + 1));
        }
        prop_assert_eq!(random_effects(&s, est).unwrap(), random_effects(&shuffled, est).unwrap());
    }

    #[test]
    fn identical_effects_reduce_to_fixed_effect(
        z in -1.5f64..1.5,
        vars in prop::collection::vec(0.005f64..0.5, 2..12),
        est in estimator(),
    ) {
        let s: Vec<StudyEffect> = vars.iter().enumerate().map(|(i, v)| study(i, z, *v)).collect();
        let m = random_effects(&s, est).unwrap();
        let w: Vec<f64> = vars.iter().map(|v| 1.0 / v).collect();
        let sw: f64 = w.iter().sum();
        let fixed = w.iter().map(|w| w * z).sum::<f64>() / sw;
        prop_assert_eq!(m.tau2, 0.0);
        prop_assert!((m.summary_z - fixed).abs() <= 1e-12);
        prop_assert!((m.se - (1.0 / sw).sqrt()).abs() <= 1e-12);
        prop_assert!(m.q.abs() <= 1e-12);
    }

    #[test]
    fn adding_a_study_at_the_summary_keeps_it_homogeneous(s in homogeneous_studies(), v in 0.005f64..0.5) {
        // without between-study variance the new study sits exactly at the
        // fixed-effect mean, so Q and hence tau2 stay unchanged
        let m = random_effects(&s, Tau2Estimator::Dl).unwrap();
        prop_assume!(m.tau2 == 0.0);
        let mut more = s.clone();
        more.push(study(99, m.summary_z, v));
        let m2 = random_effects(&more, Tau2Estimator::Dl).unwrap();
        prop_assert_eq!(m2.tau2, 0.0);
        prop_assert!((m2.summary_z - m.summary_z).abs() <= 1e-9);
    }
}

// ----------------------------------------------------------------- plots

fn parse_ascii(text: &str) -> (Vec<[f64; 4]>, [f64; 3]) {
    let mut rows = Vec::new();
    let mut summary = [0.0; 3];
    for line in text.lines().skip(2) {
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() < 6 || fields[0].starts_with('+') || fields[0].starts_with('-') {
            continue;
        }
        let n = fields.len();
        let num = |i: usize| fields[n - 5 + i].parse::<f64>().unwrap();
        if line.starts_with("Summary") {
            summary = [num(0), num(1), num(2)];
        } else {
            rows.push([num(0), num(1), num(2), num(3)]);
        }
    }
    (rows, summary)
}

fn parse_svg(text: &str) -> (Vec<[f64; 4]>, [f64; 3]) {
    let doc = roxmltree::Document::parse(text).unwrap();
    let attr = |n: &roxmltree::Node, a: &str| n.attribute(a).unwrap().parse::<f64>().unwrap();
    let mut rows = Vec::new();
    let mut summary = [0.0; 3];
    for g in doc.descendants().filter(|n| n.has_tag_name("g")) {
        match g.attribute("class") {
            Some("study") => rows.push([
                attr(&g, "data-r"),
                attr(&g, "data-ci-low"),
                attr(&g, "data-ci-high"),
                attr(&g, "data-weight"),
            ]),
            Some("summary") => summary = [attr(&g, "data-r"), attr(&g, "data-ci-low"), attr(&g, "data-ci-high")],
            _ => {}
        }
    }
    (rows, summary)
}

fn csv_summary(m: &MetaResult) -> [f64; 3] {
    let csv = meta_to_csv(std::slice::from_ref(m));
    let f: Vec<f64> = csv
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .skip(2)
        .take(3)
        .map(|s| s.parse().unwrap())
        .collect();
    [f[0], f[1], f[2]]
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn ascii_and_svg_encode_the_same_numbers(s in studies(1), est in estimator()) {
        let m = random_effects(&s, est).unwrap();
        let spec = ForestPlotSpec::from_meta(&m);
        let (ascii_rows, ascii_summary) = parse_ascii(&render_ascii(&spec));
        let (svg_rows, svg_summary) = parse_svg(&render_svg(&spec));
        prop_assert_eq!(ascii_rows.len(), s.len());
        prop_assert_eq!(svg_rows.len(), s.len());
        let csv = csv_summary(&m);
        for i in 0..3 {
            prop_assert!((ascii_summary[i] - csv[i]).abs() < 5e-7);
            prop_assert!((svg_summary[i] - csv[i]).abs() < 5e-7);
        }
        for (a, b) in ascii_rows.iter().zip(&svg_rows) {
            for i in 0..3 {
                prop_assert!((a[i] - b[i]).abs() < 5e-7);
            }
            // ASCII prints weights with two decimals, so allow half a unit in the last place
            prop_assert!((a[3] - b[3]).abs() <= 5e-3 + 1e-9, "{:?} vs {:?}", a, b);
        }
    }

    #[test]
    fn plots_stay_on_the_axis(s in studies(1), est in estimator()) {
        let m = random_effects(&s, est).unwrap();
        let spec = ForestPlotSpec::from_meta(&m);
        for r in &spec.rows {
            prop_assert!(-1.0 <= r.ci_low && r.ci_low <= r.r && r.r <= r.ci_high && r.ci_high <= 1.0);
        }
        let labels: Vec<&str> = spec.rows.iter().map(|r| r.label.as_str()).collect();
        let mut sorted = labels.clone();
        sorted.sort();
        prop_assert_eq!(labels, sorted);
        for line in render_ascii(&spec).lines() {
            prop_assert!(!line.contains("NaN"));
        }
    }
}
