use std::collections::BTreeMap;
use std::fmt::Write as _;

use anyhow::anyhow;
use serde_json::json;

use crate::input::{load, InputRecord, Source};
use crate::report::{Output, Report};
use crate::Failure;
use fanotope::fixtures::LaurentInput;
use fanotope::lattice::Rat;
use fanotope::param::parse_assignments;
use fanotope::periods::{classical_period, compare_series, quantum_period, PowerSeries, SeriesComparison};
use fanotope::polygon::{polygon_report, PolygonJson};
use fanotope::scaffold::{run_scaffolding, FiberVerdict, ScaffoldInput, ScaffoldRun};

/// Largest order accepted for a classical period with free parameters.
pub const SYMBOLIC_ORDER_CAP: usize = 6;

fn to_value<T: serde::Serialize>(x: &T) -> serde_json::Value {
    serde_json::to_value(x).expect("results serialize")
}

fn comma_list(s: &PowerSeries) -> String {
    s.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ")
}

pub fn polygon(source: &Source) -> Result<Output, Failure> {
    let (input, record): (PolygonJson, _) = load(source, "polygon")?;
    let r = polygon_report(&input.vertices).map_err(Failure::precondition)?;

    let mut text = String::new();
    let verts: Vec<String> = r.vertices.iter().map(|v| v.to_string()).collect();
    let _ = writeln!(text, "vertices: {}", verts.join(" "));
    let _ = writeln!(text, "polar volume: {}", r.polar_volume);
    let sings: Vec<String> = r.singularity_multiset.iter().map(|(q, n)| format!("{q} x{n}")).collect();
    let _ = writeln!(text, "singularities: {}", if sings.is_empty() { "none".into() } else { sings.join(", ") });
    let bary: Vec<String> = r.polar_barycenter.iter().map(|x| x.to_string()).collect();
    let _ = writeln!(text, "polar barycenter: ({})", bary.join(", "));
    let _ = writeln!(text, "K-polystable: {}", r.k_polystable);
    let _ = writeln!(text, "symmetry order: {}", r.symmetry_order());
    let _ = writeln!(text, "qg dimension: {}", r.qg_dimension);

    Ok(Output {
        report: Report::new("polygon", vec![record], to_value(&r)),
        text,
        mismatch: false,
    })
}

pub struct ScaffoldOptions {
    pub check_hull: bool,
    pub avoid: Option<Vec<String>>,
}

fn scaffold_text(run: &ScaffoldRun) -> String {
    let cox = &run.cox;
    let mut t = String::new();
    let _ = writeln!(t, "equation: {}", run.hypersurface.equation);
    let _ = writeln!(t, "class: {}", run.hypersurface.class);
    let _ = writeln!(t, "anticanonical class: {}", run.anticanonical_class);
    let _ = writeln!(t, "rays:");
    for (i, n) in cox.names.iter().enumerate() {
        let _ = writeln!(t, "  {n} {} weight {}", cox.rays.row(i), cox.class_of_var(i));
    }
    let sections: Vec<String> = run.sections.iter().map(|s| s.to_string()).collect();
    let _ = writeln!(t, "sections: {}", sections.join(", "));
    let _ = writeln!(t, "family: {}", run.family);
    let _ = writeln!(t, "charts: {}", run.charts.len());
    for c in &run.charts {
        let qs = match &c.quasi_smooth_linear_variable {
            Some(v) => format!("quasi-smooth ({v} linear)"),
            None => "-".to_string(),
        };
        let _ = writeln!(
            t,
            "  {} {} {} {}",
            c.cone_names.join(" "),
            c.quotient,
            qs,
            c.local_equation
        );
    }
    if let Some(f) = &run.fiber {
        let verdict = match &f.verdict {
            FiberVerdict::Verified => "verified".to_string(),
            FiberVerdict::Inconclusive(_) => format!("inconclusive at {{{}}}", f.witness_names.join(", ")),
        };
        let _ = writeln!(t, "fibre avoidance {{{}}}: {verdict}", f.forced_zero.join(", "));
    }
    if let Some(h) = run.hull_matches_target {
        let _ = writeln!(t, "strut hull equals target: {}", if h { "yes" } else { "no" });
    }
    t
}

pub fn scaffold(source: &Source, opts: &ScaffoldOptions) -> Result<Output, Failure> {
    let (mut input, record): (ScaffoldInput, _) = load(source, "scaffolding")?;
    if let Some(avoid) = &opts.avoid {
        input.avoid = Some(avoid.clone());
    }
    let run = run_scaffolding(&input).map_err(Failure::precondition)?;
    let mismatch = if opts.check_hull {
        match run.hull_matches_target {
            Some(ok) => !ok,
            None => {
                return Err(Failure::precondition(anyhow!(
                    "--check-hull needs a target polygon in the scaffolding"
                )))
            }
        }
    } else {
        false
    };
    Ok(Output {
        text: scaffold_text(&run),
        report: Report::new("scaffold", vec![record], to_value(&run)),
        mismatch,
    })
}

pub struct ClassicalOptions {
    pub order: usize,
    pub symbolic: bool,
    pub assign: Option<String>,
}

fn assignments(file: &LaurentInput, symbolic: bool, extra: Option<&str>) -> Result<BTreeMap<String, Rat>, Failure> {
    let mut values = if symbolic {
        BTreeMap::new()
    } else {
        file.assignments().map_err(Failure::invalid)?
    };
    if let Some(s) = extra {
        values.extend(parse_assignments(s).map_err(|e| Failure::invalid(anyhow!("--assign: {e}")))?);
    }
    Ok(values)
}

/// Loads a Laurent polynomial and specializes it. Without `symbolic` every
/// parameter must end up with a value.
fn laurent(
    source: &Source,
    symbolic: bool,
    assign: Option<&str>,
) -> Result<(fanotope::periods::LaurentPolynomial, BTreeMap<String, Rat>, InputRecord), Failure> {
    let (input, record): (LaurentInput, _) = load(source, "laurent")?;
    let values = assignments(&input, symbolic, assign)?;
    let f = input.f.specialize(&values);
    let free = f.params();
    if !symbolic && !free.is_empty() {
        let names: Vec<String> = free.into_iter().collect();
        return Err(Failure::invalid(anyhow!(
            "unassigned parameter(s) {}; pass --assign or --symbolic",
            names.join(", ")
        )));
    }
    Ok((f, values, record))
}

fn rat_strings(values: &BTreeMap<String, Rat>) -> BTreeMap<String, String> {
    values.iter().map(|(k, v)| (k.clone(), v.to_string())).collect()
}

pub fn classical(source: &Source, opts: &ClassicalOptions) -> Result<Output, Failure> {
    let (f, values, record) = laurent(source, opts.symbolic, opts.assign.as_deref())?;
    if !f.params().is_empty() && opts.order > SYMBOLIC_ORDER_CAP {
        return Err(Failure::invalid(anyhow!(
            "symbolic periods are limited to order {SYMBOLIC_ORDER_CAP}, got {}",
            opts.order
        )));
    }
    let pi = classical_period(&f, opts.order);
    let mut text = String::new();
    let _ = writeln!(text, "f = {f}");
    for (k, c) in pi.coeffs().iter().enumerate() {
        let _ = writeln!(text, "t^{k}: {c}");
    }
    if f.params().is_empty() {
        let _ = writeln!(text, "coefficients: {}", comma_list(&pi));
    }
    let result = json!({
        "laurent": to_value(&f),
        "assignments": rat_strings(&values),
        "symbolic": !f.params().is_empty(),
        "period": to_value(&pi),
    });
    Ok(Output {
        report: Report::new("periods classical", vec![record], result),
        text,
        mismatch: false,
    })
}

fn quantum_of(source: &Source, order: usize) -> Result<(fanotope::periods::QuantumPeriod, InputRecord), Failure> {
    let (input, record): (ScaffoldInput, _) = load(source, "scaffolding")?;
    let run = run_scaffolding(&input).map_err(Failure::precondition)?;
    let q = quantum_period(&run.cox, &run.hypersurface.class, order).map_err(Failure::precondition)?;
    Ok((q, record))
}

pub fn quantum(source: &Source, order: usize) -> Result<Output, Failure> {
    let (q, record) = quantum_of(source, order)?;
    let mut text = String::new();
    let nef: Vec<String> = q.nef.iter().map(|v| v.to_string()).collect();
    let _ = writeln!(text, "nef cone: {}", nef.join(" "));
    let rays: Vec<String> = q.lambda.rays.iter().map(|v| v.to_string()).collect();
    let _ = writeln!(text, "summation cone rays: {}", rays.join(" "));
    let _ = writeln!(text, "classes summed: {}", q.classes_summed);
    let _ = writeln!(text, "G: {}", comma_list(&q.g));
    let _ = writeln!(text, "regularized: {}", comma_list(&q.regularized));
    Ok(Output {
        report: Report::new("periods quantum", vec![record], to_value(&q)),
        text,
        mismatch: false,
    })
}

pub fn compare(scaffold: &Source, laurent_source: &Source, order: usize, assign: Option<&str>) -> Result<Output, Failure> {
    let (q, q_record) = quantum_of(scaffold, order)?;
    let (f, values, f_record) = laurent(laurent_source, false, assign)?;
    let pi = classical_period(&f, order);
    let verdict = compare_series(&q.regularized, &pi, order).map_err(Failure::precondition)?;
    let text = match verdict {
        SeriesComparison::Equal => format!("EQUAL through t^{order}\n"),
        SeriesComparison::FirstMismatch(k) => format!(
            "MISMATCH at t^{k}: regularized quantum {} vs classical {}\n",
            q.regularized.coeff(k),
            pi.coeff(k)
        ),
    };
    let result = json!({
        "order": order,
        "verdict": to_value(&verdict),
        "assignments": rat_strings(&values),
        "regularized_quantum": to_value(&q.regularized),
        "classical": to_value(&pi),
    });
    Ok(Output {
        report: Report::new("periods compare", vec![q_record, f_record], result),
        text,
        mismatch: verdict != SeriesComparison::Equal,
    })
}
