//! Deterministic output formatting: every float is rounded to 12 significant
//! digits before printing, so identical inputs always produce byte-identical
//! bytes, and all orderings are fixed by the library's canonical sorts.

use affine_spectra::cycles::{CycleSearch, ExtremeCycle, SpectralReport, Verdict};
use affine_spectra::RVector;
use serde_json::{json, Value};

/// Round to 12 significant digits through a fixed-width scientific rendering;
/// the result is bit-deterministic for equal inputs.
pub fn round_sig12(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0; // normalizes -0.0 as well
    }
    format!("{x:.11e}").parse().expect("scientific float reparses")
}

/// Shortest decimal that round-trips the 12-significant-digit value (the
/// same renderer JSON output uses).
pub fn fmt_float(x: f64) -> String {
    json!(round_sig12(x)).to_string()
}

/// JSON number carrying the rounded value.
pub fn json_float(x: f64) -> Value {
    json!(round_sig12(x))
}

pub fn fmt_vector(v: &RVector) -> String {
    v.coords()
        .iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn json_vector(v: &RVector) -> Value {
    Value::Array(v.coords().iter().map(|c| json!(c.to_string())).collect())
}

/// `points` / `digits` CSV cells: coordinates space-separated inside a
/// point, points semicolon-separated.
pub fn fmt_point_list(points: &[RVector]) -> String {
    points
        .iter()
        .map(fmt_vector)
        .collect::<Vec<_>>()
        .join(";")
}

pub const CYCLE_CSV_HEADER: &str = "cycle_index,length,points,digits";

pub fn cycle_csv_row(index: usize, cycle: &ExtremeCycle) -> String {
    format!(
        "{index},{},{},{}",
        cycle.len(),
        fmt_point_list(cycle.points()),
        fmt_point_list(cycle.digits())
    )
}

pub fn cycles_to_csv(search: &CycleSearch) -> String {
    let mut out = String::from(CYCLE_CSV_HEADER);
    out.push('\n');
    for (i, cycle) in search.cycles.iter().enumerate() {
        out.push_str(&cycle_csv_row(i, cycle));
        out.push('\n');
    }
    out
}

pub fn verdict_token(v: Verdict) -> &'static str {
    match v {
        Verdict::Onb => "onb",
        Verdict::NotOnb => "not-onb",
        Verdict::Inconclusive => "inconclusive",
    }
}

fn cycle_to_json(cycle: &ExtremeCycle) -> Value {
    json!({
        "length": cycle.len(),
        "points": cycle.points().iter().map(json_vector).collect::<Vec<_>>(),
        "digits": cycle.digits().iter().map(json_vector).collect::<Vec<_>>(),
    })
}

pub fn report_to_json(report: &SpectralReport, search: &CycleSearch) -> Value {
    json!({
        "side": report.side.to_string(),
        "mode": search.mode.to_string(),
        "exhaustive": report.exhaustive,
        "trivial_cycle_found": report.trivial_cycle_found,
        "nodes_explored": search.nodes_explored,
        "cycles": report.cycles.iter().map(cycle_to_json).collect::<Vec<_>>(),
        "verdict": verdict_token(report.verdict),
        "note": report.dimension_note,
    })
}

pub fn report_to_text(report: &SpectralReport, search: &CycleSearch) -> String {
    let mut out = format!(
        "side {} ({} search, {}): {} nontrivial cycle(s){}\n",
        report.side,
        search.mode,
        if report.exhaustive {
            "exhaustive"
        } else {
            "bounded"
        },
        report.cycles.len(),
        if report.trivial_cycle_found {
            ", plus the trivial cycle {0}"
        } else {
            ""
        },
    );
    for cycle in &report.cycles {
        out.push_str(&format!("  {cycle}\n"));
    }
    out.push_str(&format!("verdict: {}\n  {}\n", report.verdict, report.dimension_note));
    out
}

pub fn to_pretty_json(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}
