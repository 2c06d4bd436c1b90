use std::fs::File;
use std::path::Path;

use mmk_core::cogmech::ComposeParams;
use mmk_core::equivalence::{
    check_instance_against_matrix, classify_equivalence, compatibility_matrix, EquivalenceReport,
    FiniteMap,
};
use mmk_core::speclang::{self, Diagnostic, Document};
use mmk_core::stats::{
    estimate_params, monte_carlo_compose, read_rows, read_triples, test_composition,
    verify_compose, ActivationDataset,
};
use mmk_core::theoryzoo::{classify_structure, violations, Element, Family};
use serde_json::{json, Value};

use crate::report::{grid, key_values, Output};
use crate::Failure;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn domain(msg: impl std::fmt::Display) -> Failure {
    Failure::Domain(msg.to_string())
}

fn read_source(path: &Path) -> Result<Vec<u8>, Failure> {
    std::fs::read(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

fn render_diagnostics(path: &Path, diags: &[Diagnostic]) -> String {
    diags
        .iter()
        .map(|d| format!("{}:{d}\n", path.display()))
        .collect()
}

/// Parses `path`; any diagnostic is a usage failure.
fn load(path: &Path) -> Result<Document, Failure> {
    let bytes = read_source(path)?;
    speclang::parse_bytes(&bytes).map_err(|diags| {
        let mut msg = format!("{} has errors\n", path.display());
        msg.push_str(render_diagnostics(path, &diags).trim_end());
        usage(msg)
    })
}

/// Parses and checks `path`; semantic errors are domain failures.
fn load_checked(path: &Path) -> Result<Document, Failure> {
    let doc = load(path)?;
    let diags = speclang::check(&doc);
    let errors: Vec<Diagnostic> = diags.into_iter().filter(Diagnostic::is_error).collect();
    if !errors.is_empty() {
        let mut msg = format!("{} fails semantic checks\n", path.display());
        msg.push_str(render_diagnostics(path, &errors).trim_end());
        return Err(domain(msg));
    }
    Ok(doc)
}

fn fmt_f(x: f64) -> String {
    x.to_string()
}

pub fn canonical(path: &Path) -> Result<String, Failure> {
    Ok(speclang::serialize(&load(path)?))
}

pub fn parse(path: &Path, check: bool) -> Result<Output, Failure> {
    let bytes = read_source(path)?;
    let inputs = json!({ "file": path.display().to_string(), "check": check });
    let (doc, diags, exit) = match speclang::parse_bytes(&bytes) {
        Ok(doc) => {
            let diags = if check { speclang::check(&doc) } else { Vec::new() };
            let exit = u8::from(diags.iter().any(Diagnostic::is_error));
            (Some(doc), diags, exit)
        }
        Err(diags) => (None, diags, 2),
    };
    let counts = doc.as_ref().map(|d| {
        json!({
            "worlds": d.worlds.len(),
            "theories": d.theories.len(),
            "maps": d.maps.len(),
            "experiments": d.experiments.len(),
            "concepts": d.concepts.len(),
        })
    });
    let errors = diags.iter().filter(|d| d.is_error()).count();
    let results = json!({
        "ok": errors == 0,
        "errors": errors,
        "warnings": diags.len() - errors,
        "declarations": counts,
        "diagnostics": diags,
    });
    let mut table = render_diagnostics(path, &diags);
    table.push_str(&format!(
        "{}: {} error(s), {} warning(s)\n",
        path.display(),
        errors,
        diags.len() - errors
    ));
    Ok(Output::new("parse", None, inputs, results)
        .table(table)
        .exit(exit))
}

pub fn classify(path: &Path) -> Result<Output, Failure> {
    let doc = load_checked(path)?;
    let mut theories = Vec::new();
    let mut rows = Vec::new();
    for t in &doc.theories {
        let instance = doc.theory_instance(&t.name.text).map_err(domain)?;
        let class = classify_structure(&instance);
        let labels = |set: &[Element]| set.iter().map(Element::label).collect::<Vec<_>>();
        let families: Vec<&str> = class.families.iter().map(|f| f.keyword()).collect();
        rows.push(vec![
            t.name.text.clone(),
            t.family.keyword().to_string(),
            families.join(" "),
        ]);
        theories.push(json!({
            "theory": t.name.text,
            "declared": t.family,
            "families": class.families,
            "notes": class.notes,
            "violations": violations(&instance),
            "mental": labels(&instance.mental),
            "material": labels(&instance.material),
        }));
    }
    let inputs = json!({ "file": path.display().to_string() });
    let mut table = grid(&["theory", "declared", "families"], &rows);
    for t in &theories {
        for n in t["notes"].as_array().into_iter().flatten() {
            table.push_str(&format!("note ({}): {}\n", t["theory"].as_str().unwrap_or(""), n.as_str().unwrap_or("")));
        }
    }
    Ok(Output::new("classify", None, inputs, json!({ "theories": theories })).table(table))
}

fn equiv_table(report: &EquivalenceReport, extra: &[(&str, String)]) -> String {
    let mut rows = vec![
        ("class", format!("{:?}", report.class)),
        ("mental objects", report.mental_objects.join(" ")),
        ("material objects", report.material_objects.join(" ")),
        ("(G∘F)(I)", report.image_gf.join(" ")),
        ("(F∘G)(M)", report.image_fg.join(" ")),
        ("isomorphism", report.isomorphism.to_string()),
    ];
    rows.extend(extra.iter().cloned());
    let mut s = key_values(&rows);
    for n in &report.notes {
        s.push_str(&format!("note: {n}\n"));
    }
    s
}

pub fn equiv(path: &Path, maps: &[String], theory: Option<&str>) -> Result<Output, Failure> {
    let [f_name, g_name] = maps else {
        return Err(usage(format!("expected exactly two --map options (F then G), got {}", maps.len())));
    };
    let doc = load_checked(path)?;
    let f_pairs = doc.map_pairs(f_name).map_err(|e| usage(e.to_string()))?;
    let g_pairs = doc.map_pairs(g_name).map_err(|e| usage(e.to_string()))?;
    let inputs = json!({
        "file": path.display().to_string(),
        "maps": [f_name, g_name],
        "theory": theory,
    });
    let matrix = compatibility_matrix();
    let permitting = |class| -> Vec<Family> {
        Family::ALL
            .into_iter()
            .filter(|f| matrix.permits(*f, class))
            .collect()
    };

    let Some(theory) = theory else {
        let mental: Vec<String> = f_pairs.iter().map(|(k, _)| k.clone()).collect();
        let material: Vec<String> = g_pairs.iter().map(|(k, _)| k.clone()).collect();
        let f = FiniteMap::new(mental.clone(), material.clone(), f_pairs).map_err(domain)?;
        let g = FiniteMap::new(material, mental, g_pairs).map_err(domain)?;
        let report = classify_equivalence(&f, &g).map_err(domain)?;
        let families = permitting(report.class);
        let names: Vec<&str> = families.iter().map(|f| f.keyword()).collect();
        let table = equiv_table(&report, &[("permitted by", names.join(" "))]);
        let results = json!({ "report": report, "permitted_by": families });
        return Ok(Output::new("equiv", None, inputs, results).table(table));
    };

    let instance = doc.theory_instance(theory).map_err(|e| match e {
        speclang::SpecError::Unknown { .. } => usage(e.to_string()),
        other => domain(other),
    })?;
    let labels = |set: &[Element]| set.iter().map(Element::label).collect::<Vec<_>>();
    let mental = labels(&instance.mental);
    let material = labels(&instance.material);
    let f = FiniteMap::new(mental.clone(), material.clone(), f_pairs).map_err(domain)?;
    let g = FiniteMap::new(material, mental, g_pairs).map_err(domain)?;
    let check = check_instance_against_matrix(&instance, &f, &g).map_err(domain)?;
    let table = equiv_table(
        &check.report,
        &[
            ("theory", format!("{theory} ({})", check.family)),
            ("consistent", check.consistent.to_string()),
        ],
    );
    let exit = u8::from(!check.consistent);
    let results = json!({
        "report": check.report,
        "permitted_by": permitting(check.class),
        "family": check.family,
        "consistent": check.consistent,
    });
    Ok(Output::new("equiv", None, inputs, results)
        .table(table)
        .exit(exit))
}

fn params(n: usize, alpha: usize, beta: usize) -> Result<ComposeParams, Failure> {
    ComposeParams::new(n, alpha, beta).map_err(domain)
}

fn sim_inputs(n: usize, alpha: usize, beta: usize, trials: u64, seed: u64, workers: usize) -> Value {
    json!({
        "n": n,
        "alpha": alpha,
        "beta": beta,
        "trials": trials,
        "seed": seed,
        "workers": workers,
    })
}

pub fn simulate(
    n: usize,
    alpha: usize,
    beta: usize,
    trials: u64,
    seed: u64,
    workers: usize,
) -> Result<Output, Failure> {
    let p = params(n, alpha, beta)?;
    let r = monte_carlo_compose(p, trials, seed, workers).map_err(domain)?;
    let table = key_values(&[
        ("mean |A ∪ B|", fmt_f(r.mean_union)),
        ("  standard error", fmt_f(r.mean_union_se)),
        ("mean shared", fmt_f(r.mean_shared)),
        ("mean |F(d)|", fmt_f(r.mean_result_size)),
        ("mean |S_A ∩ S_B|", fmt_f(r.mean_selected_overlap)),
        ("in-union frequency", fmt_f(r.in_union_freq)),
        ("  standard error", fmt_f(r.in_union_se)),
        ("outside frequency", fmt_f(r.outside_freq)),
        ("  standard error", fmt_f(r.outside_se)),
        ("either frequency", fmt_f(r.either_freq)),
        ("oversize trials", r.oversize_trials.to_string()),
    ]);
    let mut csv = String::from("neuron,frequency\n");
    for (i, f) in r.neuron_freq.iter().enumerate() {
        csv.push_str(&format!("{i},{f}\n"));
    }
    let results = serde_json::to_value(&r).expect("reports serialize");
    Ok(Output::new("simulate", Some(seed), sim_inputs(n, alpha, beta, trials, seed, workers), results)
        .table(table)
        .csv(csv))
}

pub fn verify(
    n: usize,
    alpha: usize,
    beta: usize,
    trials: u64,
    seed: u64,
    workers: usize,
) -> Result<Output, Failure> {
    let p = params(n, alpha, beta)?;
    let v = verify_compose(p, trials, seed, workers).map_err(domain)?;
    let rows: Vec<Vec<String>> = v
        .rows
        .iter()
        .map(|r| {
            vec![
                r.quantity.to_string(),
                fmt_f(r.analytic),
                fmt_f(r.empirical),
                fmt_f(r.deviation),
                fmt_f(r.tolerance),
                if r.within { "yes" } else { "NO" }.to_string(),
            ]
        })
        .collect();
    let header = ["quantity", "analytic", "empirical", "deviation", "tolerance", "within"];
    let mut table = grid(&header, &rows);
    table.push_str(if v.all_within {
        "all deviations within tolerance\n"
    } else {
        "some deviations exceed tolerance\n"
    });
    let mut csv = header.join(",");
    csv.push('\n');
    for r in &rows {
        csv.push_str(&r.join(","));
        csv.push('\n');
    }
    let exit = u8::from(!v.all_within);
    let results = serde_json::to_value(&v).expect("reports serialize");
    Ok(Output::new("verify", Some(seed), sim_inputs(n, alpha, beta, trials, seed, workers), results)
        .table(table)
        .csv(csv)
        .exit(exit))
}

fn open(path: &Path) -> Result<File, Failure> {
    File::open(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn detect(data: &Path, triples: &Path, n: usize, significance: f64) -> Result<Output, Failure> {
    let rows = read_rows(open(data)?).map_err(|e| usage(format!("{}: {e}", data.display())))?;
    let trips = read_triples(open(triples)?).map_err(|e| usage(format!("{}: {e}", triples.display())))?;
    let dataset = ActivationDataset::new(n, rows, trips).map_err(domain)?;
    let test = test_composition(&dataset, significance).map_err(domain)?;
    let estimate = estimate_params(&dataset).map_err(domain)?;
    let inputs = json!({
        "data": data.display().to_string(),
        "triples": triples.display().to_string(),
        "n": n,
        "significance": significance,
    });
    let mut table = key_values(&[
        ("triples", test.triples.len().to_string()),
        ("alpha estimate", fmt_f(estimate.alpha_hat)),
        ("beta estimate", estimate.beta_hat.map_or("-".into(), fmt_f)),
        ("statistic", fmt_f(test.fisher_statistic)),
        ("null mean", fmt_f(test.null_mean)),
        ("null variance", fmt_f(test.null_variance)),
        ("degrees of freedom", fmt_f(test.degrees_of_freedom)),
        ("aggregate p-value", fmt_f(test.aggregate_p_value)),
        ("method", test.method.to_string()),
    ]);
    table.push_str(if test.reject {
        "independence rejected: compositional structure detected\n"
    } else {
        "independence not rejected\n"
    });
    let mut csv = String::from("component_a,component_b,composed,observed_overlap,null_mean,p_value,reject\n");
    for t in &test.triples {
        csv.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            csv_field(&t.a),
            csv_field(&t.b),
            csv_field(&t.composed),
            t.observed_overlap,
            t.null_mean,
            t.p_value,
            t.reject
        ));
    }
    let results = json!({ "estimate": estimate, "test": test });
    Ok(Output::new("detect", None, inputs, results).table(table).csv(csv))
}
