//! One function per subcommand; each returns the full output text plus the
//! exit code, or a typed error that main maps to exit 1 or 2.

use std::path::Path;

use num_traits::{One, Zero};
use serde_json::json;

use affine_spectra::algebra::{parse_rational, rational_to_f64, Rational};
use affine_spectra::cycles::{
    find_cycles, onb_verdict, CycleSearchConfig, LConvention, ScanRow, SearchMode,
};
use affine_spectra::density::{
    beurling_lower_estimate, geometric_sum_windows, FrequencySet,
};
use affine_spectra::fourier::{attractor_cloud, mu_hat, sigma_partial, two_digit_product_form};
use affine_spectra::system::{system_from_json, validate};
use affine_spectra::{HadamardSystem, RVector, Side};

use crate::output::{
    cycle_csv_row, cycles_to_csv, fmt_float, json_float, report_to_json, report_to_text,
    to_pretty_json,
};
use crate::{CliError, CmdOutput, CycleFormat, ReportFormat};

/// Parse one rational CLI argument: "num/den", an integer, or a decimal
/// like "7.25" / "-2.6" (read exactly, not through floats).
pub fn parse_rational_arg(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    if let Some(dot) = s.find('.') {
        let (head, tail) = (&s[..dot], &s[dot + 1..]);
        let (negative, int_part) = match head.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, head.strip_prefix('+').unwrap_or(head)),
        };
        if !int_part.chars().all(|c| c.is_ascii_digit())
            || !tail.chars().all(|c| c.is_ascii_digit())
            || (int_part.is_empty() && tail.is_empty())
        {
            return Err(format!("cannot parse `{s}` as a decimal"));
        }
        let digits = format!("{}{}", if int_part.is_empty() { "0" } else { int_part }, tail);
        let num: num_bigint::BigInt = digits
            .parse()
            .map_err(|_| format!("cannot parse `{s}` as a decimal"))?;
        let den = num_bigint::BigInt::from(10u32).pow(tail.len() as u32);
        let value = Rational::new(num, den);
        Ok(if negative { -value } else { value })
    } else {
        parse_rational(s).map_err(|e| e.to_string())
    }
}

/// Parse a comma-separated point, e.g. "3/10" or "1/2,-0.25".
pub fn parse_vector_arg(s: &str) -> Result<RVector, String> {
    let coords = s
        .split(',')
        .map(parse_rational_arg)
        .collect::<Result<Vec<_>, _>>()?;
    if coords.is_empty() {
        return Err("empty point".into());
    }
    Ok(RVector::new(coords))
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Domain(format!("cannot read {}: {e}", path.display())))
}

pub fn load_system(path: &Path) -> Result<HadamardSystem, CliError> {
    let text = read_file(path)?;
    let (r, b, l) =
        system_from_json(&text).map_err(|e| CliError::Domain(format!("{}: {e}", path.display())))?;
    HadamardSystem::new(r, b, l)
        .map_err(|e| CliError::Domain(format!("{}: {e}", path.display())))
}

pub fn cmd_validate(path: &Path, format: ReportFormat) -> Result<CmdOutput, CliError> {
    let text = read_file(path)?;
    let (r, b, l) =
        system_from_json(&text).map_err(|e| CliError::Domain(format!("{}: {e}", path.display())))?;
    let report = validate(&r, &b, &l);
    let code = u8::from(!report.ok());
    let rendered = match format {
        ReportFormat::Text => format!("{report}\n"),
        ReportFormat::Json => to_pretty_json(&json!({
            "valid": report.ok(),
            "dimension": r.dim(),
            "n": b.len(),
            "failures": report
                .failures
                .iter()
                .map(|f| json!({"axiom": f.axiom.to_string(), "detail": f.detail}))
                .collect::<Vec<_>>(),
            "notes": report.notes,
            "unitarity_defect": report.unitarity_defect.map(json_float),
        })),
    };
    Ok(CmdOutput {
        text: rendered,
        code,
    })
}

pub fn cmd_cycles(
    path: &Path,
    side: Side,
    mode: Option<SearchMode>,
    max_word_len: usize,
    assume_sufficient: bool,
    format: CycleFormat,
) -> Result<CmdOutput, CliError> {
    let sys = load_system(path)?;
    let config = CycleSearchConfig {
        mode,
        max_word_length: max_word_len,
        ..CycleSearchConfig::default()
    };
    let search = find_cycles(&sys, side, &config).map_err(|e| CliError::Domain(e.to_string()))?;
    let report = onb_verdict(&sys, side, &search, assume_sufficient);
    let text = match format {
        CycleFormat::Csv => cycles_to_csv(&search),
        CycleFormat::Json => to_pretty_json(&report_to_json(&report, &search)),
        CycleFormat::Text => report_to_text(&report, &search),
    };
    Ok(CmdOutput::ok(text))
}

pub const SCAN_CSV_HEADER: &str = "p,cycle_index,length,points,digits";

/// The scan table as a CSV string; failed rows become stderr-style notes
/// collected separately so stdout stays machine-readable.
pub fn scan_to_csv(rows: &[ScanRow]) -> (String, Vec<String>) {
    let mut out = String::from(SCAN_CSV_HEADER);
    out.push('\n');
    let mut notes = Vec::new();
    for row in rows {
        match &row.result {
            Ok(search) => {
                for (i, cycle) in search.cycles.iter().enumerate() {
                    out.push_str(&format!("{},{}\n", row.p, cycle_csv_row(i, cycle)));
                }
            }
            Err(e) => notes.push(format!("p={}: {e}", row.p)),
        }
    }
    (out, notes)
}

pub fn scan_rows(
    r: i64,
    b: &str,
    convention: LConvention,
    p_min: u64,
    p_max: Option<u64>,
    p_list: Option<&[u64]>,
) -> Result<Vec<ScanRow>, CliError> {
    let b_digits: Vec<RVector> = b
        .split(',')
        .map(|s| parse_rational_arg(s).map(|v| RVector::new(vec![v])))
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::Usage(format!("--b: {e}")))?;
    let config = CycleSearchConfig::default();
    let rows = match (p_list, p_max) {
        (Some(list), _) => list
            .iter()
            .flat_map(|&p| {
                affine_spectra::cycles::scan_admissibility(
                    r, &b_digits, convention, p, p, false, &config,
                )
            })
            .collect(),
        (None, Some(p_max)) => affine_spectra::cycles::scan_admissibility(
            r, &b_digits, convention, p_min, p_max, true, &config,
        ),
        (None, None) => {
            return Err(CliError::Usage(
                "scan needs --p-max (range of odd p) or --p-list".into(),
            ))
        }
    };
    Ok(rows)
}

pub fn cmd_scan(
    r: i64,
    b: &str,
    convention: LConvention,
    p_min: u64,
    p_max: Option<u64>,
    p_list: Option<&[u64]>,
) -> Result<CmdOutput, CliError> {
    let rows = scan_rows(r, b, convention, p_min, p_max, p_list)?;
    let (csv, notes) = scan_to_csv(&rows);
    for note in notes {
        eprintln!("note: {note}");
    }
    Ok(CmdOutput::ok(csv))
}

fn parse_t(sys: &HadamardSystem, t: &str) -> Result<RVector, CliError> {
    let v = parse_vector_arg(t).map_err(|e| CliError::Usage(format!("--t: {e}")))?;
    if v.dim() != sys.dim() {
        return Err(CliError::Usage(format!(
            "--t has {} coordinate(s), the system needs {}",
            v.dim(),
            sys.dim()
        )));
    }
    Ok(v)
}

fn t_json(t: &RVector) -> serde_json::Value {
    serde_json::Value::Array(
        t.coords()
            .iter()
            .map(|c| json!(c.to_string()))
            .collect(),
    )
}

pub fn cmd_sigma(
    path: &Path,
    side: Side,
    t: &str,
    level: usize,
    tol: f64,
    format: ReportFormat,
) -> Result<CmdOutput, CliError> {
    let sys = load_system(path)?;
    let t = parse_t(&sys, t)?;
    let sample =
        sigma_partial(&sys, side, &t, level, tol).map_err(|e| CliError::Domain(e.to_string()))?;
    let text = match format {
        ReportFormat::Json => to_pretty_json(&json!({
            "side": side.to_string(),
            "t": t_json(&t),
            "level": level,
            "value": json_float(sample.value),
            "error_budget": json_float(sample.error_budget),
        })),
        ReportFormat::Text => format!(
            "sigma_{level}({}) = {} (± {})\n",
            crate::output::fmt_vector(&t),
            fmt_float(sample.value),
            fmt_float(sample.error_budget)
        ),
    };
    Ok(CmdOutput::ok(text))
}

pub fn cmd_muhat(
    path: &Path,
    side: Side,
    t: &str,
    tol: f64,
    closed_form: bool,
    format: ReportFormat,
) -> Result<CmdOutput, CliError> {
    let sys = load_system(path)?;
    let t = parse_t(&sys, t)?;
    let m = mu_hat(&sys, side, &t, tol).map_err(|e| CliError::Domain(e.to_string()))?;

    let mut closed = None;
    if closed_form {
        if sys.dim() != 1 {
            return Err(CliError::Domain(
                "the closed-form cross-check needs a one-dimensional system".into(),
            ));
        }
        let digits = side.measure_digits(&sys);
        let nonzero: Vec<&RVector> = digits.iter().filter(|d| !d.is_zero()).collect();
        if digits.len() != 2 || nonzero.len() != 1 {
            return Err(CliError::Domain(
                "the closed-form cross-check needs measure digits {0, b}".into(),
            ));
        }
        let b = nonzero[0].coords()[0].clone();
        let r = side.scale(&sys).at(0, 0).clone();
        let value = two_digit_product_form(&b, &r, &t.coords()[0], m.truncation_k + 40);
        closed = Some((value, (m.value - value).norm()));
    }

    let text = match format {
        ReportFormat::Json => {
            let mut obj = json!({
                "side": side.to_string(),
                "t": t_json(&t),
                "value_re": json_float(m.value.re),
                "value_im": json_float(m.value.im),
                "abs": json_float(m.value.norm()),
                "truncation_k": m.truncation_k,
                "error_bound": json_float(m.error_bound),
            });
            if let Some((value, deviation)) = closed {
                obj["closed_form"] = json!({
                    "value_re": json_float(value.re),
                    "value_im": json_float(value.im),
                    "deviation": json_float(deviation),
                });
            }
            to_pretty_json(&obj)
        }
        ReportFormat::Text => {
            let mut s = format!(
                "muhat({}) = {} + {}i (|.| = {}, {} factors, error ≤ {})\n",
                crate::output::fmt_vector(&t),
                fmt_float(m.value.re),
                fmt_float(m.value.im),
                fmt_float(m.value.norm()),
                m.truncation_k,
                fmt_float(m.error_bound)
            );
            if let Some((_, deviation)) = closed {
                s.push_str(&format!(
                    "closed-form deviation: {}\n",
                    fmt_float(deviation)
                ));
            }
            s
        }
    };
    Ok(CmdOutput::ok(text))
}

pub const DENSITY_CSV_HEADER: &str = "n,h,count,ratio";

/// Build the density CSV for the shipped window family.  `set_spec` is
/// "gamma1" or "scaled:q"; windows are dilated together with the set.
pub fn density_csv(set_spec: &str, alpha: f64, n_max: usize) -> Result<String, CliError> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(CliError::Usage(format!(
            "--alpha must lie in (0, 1], got {alpha}"
        )));
    }
    if n_max == 0 {
        return Err(CliError::Usage("--n-max must be at least 1".into()));
    }
    let base = FrequencySet::from_digits(
        &[RVector::from_integers(&[0]), RVector::from_integers(&[1])],
        &Rational::from_integer(4.into()),
        n_max,
    )
    .map_err(|e| CliError::Domain(e.to_string()))?;

    let factor = match set_spec {
        "gamma1" => Rational::one(),
        other => match other.strip_prefix("scaled:") {
            Some(q) => {
                let q = parse_rational_arg(q).map_err(|e| CliError::Usage(format!("--set: {e}")))?;
                if q <= Rational::zero() {
                    return Err(CliError::Usage(format!(
                        "--set scaled:q needs a positive q, got {q}"
                    )));
                }
                q
            }
            None => {
                return Err(CliError::Usage(format!(
                    "--set must be `gamma1` or `scaled:q`, got `{other}`"
                )))
            }
        },
    };
    let set = if factor.is_one() {
        base
    } else {
        base.scaled(&factor)
            .map_err(|e| CliError::Domain(e.to_string()))?
    };

    let windows: Vec<Rational> = geometric_sum_windows(4, n_max)
        .into_iter()
        .map(|h| h * &factor)
        .collect();
    let estimate = beurling_lower_estimate(&set, alpha, &windows)
        .map_err(|e| CliError::Domain(e.to_string()))?;

    let mut out = String::from(DENSITY_CSV_HEADER);
    out.push('\n');
    for (i, s) in estimate.samples.iter().enumerate() {
        out.push_str(&format!(
            "{},{},{},{}\n",
            i + 1,
            s.h,
            s.count,
            fmt_float(s.ratio)
        ));
    }
    Ok(out)
}

pub fn cmd_density(set_spec: &str, alpha: f64, n_max: usize) -> Result<CmdOutput, CliError> {
    density_csv(set_spec, alpha, n_max).map(CmdOutput::ok)
}

pub fn cmd_attractor(
    path: &Path,
    side: Side,
    depth: usize,
    float: bool,
) -> Result<CmdOutput, CliError> {
    let sys = load_system(path)?;
    let cloud =
        attractor_cloud(&sys, side, depth).map_err(|e| CliError::Domain(e.to_string()))?;
    let d = sys.dim();
    let header: Vec<String> = match d {
        1 => vec!["x".into()],
        2 => vec!["x".into(), "y".into()],
        3 => vec!["x".into(), "y".into(), "z".into()],
        _ => (0..d).map(|i| format!("x{i}")).collect(),
    };
    let mut out = header.join(",");
    out.push('\n');
    for p in &cloud {
        let cells: Vec<String> = p
            .coords()
            .iter()
            .map(|c| {
                if float {
                    fmt_float(rational_to_f64(c))
                } else {
                    c.to_string()
                }
            })
            .collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    Ok(CmdOutput::ok(out))
}
