//! One-shot regression of every reference result: each claim re-derives a
//! published value from scratch and compares it against the hardcoded or
//! on-disk golden copy, reporting a diff on mismatch.

use std::path::Path;

use num_bigint::BigInt;

use affine_spectra::algebra::{rat, rat_int, RMatrix, RVector, Rational};
use affine_spectra::cycles::{
    find_cycles, onb_verdict, repunit_admissible_instance, top_digit_fixed_point,
    CycleSearchConfig, LConvention, Verdict,
};
use affine_spectra::density::{
    beurling_lower_estimate, count_in_window, geometric_sum_windows, FrequencySet,
};
use affine_spectra::fourier::{mu_hat, two_digit_product_form};
use affine_spectra::system::validate;
use affine_spectra::{HadamardSystem, Side};

use crate::commands::{load_system, scan_rows, scan_to_csv};
use crate::{CliError, CmdOutput};

pub struct Claim {
    pub name: &'static str,
    pub about: &'static str,
    run: fn(&Path) -> Result<(), String>,
}

pub fn claims() -> Vec<Claim> {
    vec![
        Claim {
            name: "cycle-table",
            about: "scan of (4, {0,2}, {0,p}) over odd p < 100 equals the golden CSV fixture byte-for-byte",
            run: claim_cycle_table,
        },
        Claim {
            name: "onb-complement",
            about: "the 32 odd p < 100 whose searches come back empty (dual family is a basis)",
            run: claim_onb_complement,
        },
        Claim {
            name: "large-cycles",
            about: "base-2n repunit instances n=2,3,4 give p = 85, 9331, 2396745, each with exactly one nontrivial cycle",
            run: claim_large_cycles,
        },
        Claim {
            name: "power-scaling",
            about: "p = 5^k has no nontrivial cycles for k = 0..6",
            run: claim_power_scaling,
        },
        Claim {
            name: "fixed-points",
            about: "top-digit fixed points np/(2(2n-1)) = 1, 3/2, 2 for (n,p) = (2,3), (3,5), (4,7), matching the detector exactly",
            run: claim_fixed_points,
        },
        Claim {
            name: "closed-form",
            about: "two-digit cosine-product form matches the certified transform within 1e-9 at four sample points",
            run: claim_closed_form,
        },
        Claim {
            name: "parity",
            about: "(4, {0,2}, {0,p}) passes validation iff p is odd, for p = 1..20",
            run: claim_parity,
        },
        Claim {
            name: "density",
            about: "window counts 2^n at h_n for n <= 12, half-power ratio at n=10 within 1e-4 of sqrt(3), exact dilation law at q=5",
            run: claim_density,
        },
        Claim {
            name: "verdicts",
            about: "basis verdicts of the two shipped example systems (radix-8 twist and the planar three-digit system)",
            run: claim_verdicts,
        },
    ]
}

pub fn default_fixture_dir() -> &'static Path {
    Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures"))
}

pub fn cmd_reproduce(list: bool, fixture_dir: Option<&Path>) -> Result<CmdOutput, CliError> {
    let claims = claims();
    if list {
        let mut text = String::new();
        for c in &claims {
            text.push_str(&format!("{:<16} {}\n", c.name, c.about));
        }
        return Ok(CmdOutput::ok(text));
    }
    let dir = fixture_dir.unwrap_or(default_fixture_dir());
    let mut text = String::new();
    let mut failed = 0usize;
    for c in &claims {
        match (c.run)(dir) {
            Ok(()) => text.push_str(&format!("claim {}: ok\n", c.name)),
            Err(diff) => {
                failed += 1;
                text.push_str(&format!("claim {}: FAIL\n", c.name));
                for line in diff.lines() {
                    text.push_str(&format!("  {line}\n"));
                }
            }
        }
    }
    if failed == 0 {
        text.push_str(&format!("all {} claims hold\n", claims.len()));
    } else {
        text.push_str(&format!("{} claims checked, {failed} failed\n", claims.len()));
    }
    Ok(CmdOutput {
        text,
        code: u8::from(failed > 0),
    })
}

/// Line diff of two texts, capped at six mismatches.
fn text_diff(expected_label: &str, expected: &str, got_label: &str, got: &str) -> Option<String> {
    if expected == got {
        return None;
    }
    let a: Vec<&str> = expected.lines().collect();
    let b: Vec<&str> = got.lines().collect();
    let mut out = String::new();
    let mut shown = 0;
    for i in 0..a.len().max(b.len()) {
        let left = a.get(i).copied();
        let right = b.get(i).copied();
        if left != right {
            if shown == 6 {
                out.push_str("(further differences elided)\n");
                break;
            }
            out.push_str(&format!(
                "line {}:\n  {expected_label}: {}\n  {got_label}: {}\n",
                i + 1,
                left.unwrap_or("<missing>"),
                right.unwrap_or("<missing>"),
            ));
            shown += 1;
        }
    }
    if a.len() != b.len() {
        out.push_str(&format!(
            "{expected_label} has {} lines, {got_label} has {}\n",
            a.len(),
            b.len()
        ));
    }
    Some(out)
}

fn cli_err(e: CliError) -> String {
    match e {
        CliError::Domain(m) | CliError::Usage(m) => m,
    }
}

fn scan_table_csv() -> Result<String, String> {
    let rows = scan_rows(4, "0,2", LConvention::ZeroP, 1, Some(100), None).map_err(cli_err)?;
    let (csv, notes) = scan_to_csv(&rows);
    if !notes.is_empty() {
        return Err(format!("scan produced unexpected per-row failures: {notes:?}"));
    }
    Ok(csv)
}

fn claim_cycle_table(dir: &Path) -> Result<(), String> {
    let fixture_path = dir.join("cycle_table_r4_p100.csv");
    let fixture = std::fs::read_to_string(&fixture_path)
        .map_err(|e| format!("cannot read {}: {e}", fixture_path.display()))?;
    let computed = scan_table_csv()?;
    match text_diff("fixture ", &fixture, "computed", &computed) {
        None => Ok(()),
        Some(diff) => Err(diff),
    }
}

fn claim_onb_complement(_dir: &Path) -> Result<(), String> {
    let expected: Vec<u64> = vec![
        1, 5, 7, 11, 13, 17, 19, 23, 25, 29, 31, 35, 37, 41, 43, 47, 49, 53, 55, 59, 61, 65, 67,
        71, 73, 77, 79, 83, 89, 91, 95, 97,
    ];
    let rows = scan_rows(4, "0,2", LConvention::ZeroP, 1, Some(100), None).map_err(cli_err)?;
    let mut empty = Vec::new();
    for row in &rows {
        let search = row.result.as_ref().map_err(|e| format!("p={}: {e}", row.p))?;
        if search.cycles.is_empty() {
            empty.push(row.p);
        }
    }
    if empty == expected {
        Ok(())
    } else {
        Err(format!("expected {expected:?}\ngot      {empty:?}"))
    }
}

fn point_strings(points: &[RVector]) -> Vec<String> {
    points.iter().map(|p| p.to_string()).collect()
}

fn two_digit_system(r: i64, top: Rational) -> Result<HadamardSystem, String> {
    HadamardSystem::new(
        RMatrix::scalar(rat_int(r)),
        vec![RVector::from_integers(&[0]), RVector::from_integers(&[2])],
        vec![RVector::zero(1), RVector::new(vec![top])],
    )
    .map_err(|e| e.to_string())
}

fn claim_large_cycles(_dir: &Path) -> Result<(), String> {
    let expected: [(u64, &str, &[&str]); 3] = [
        (2, "85", &["7", "23", "27", "28"]),
        (
            3,
            "9331",
            &["933/2", "4821/2", "5469/2", "5577/2", "5595/2", "2799"],
        ),
        (
            4,
            "2396745",
            &[
                "85598", "609886", "675422", "683614", "684638", "684766", "684782", "684784",
            ],
        ),
    ];
    for (n, p_expected, cycle_expected) in expected {
        let (p, r) = repunit_admissible_instance(n).map_err(|e| e.to_string())?;
        if p.to_string() != p_expected {
            return Err(format!("n={n}: expected p = {p_expected}, got {p}"));
        }
        let top = Rational::new(BigInt::from(r as i64) * &p, BigInt::from(4));
        let sys = two_digit_system(r as i64, top)?;
        let search =
            find_cycles(&sys, Side::B, &CycleSearchConfig::default()).map_err(|e| e.to_string())?;
        if search.cycles.len() != 1 || !search.trivial_cycle_found || !search.exhaustive {
            return Err(format!(
                "n={n}: expected exactly one nontrivial cycle (exhaustive, with the trivial one), \
                 got {} cycles",
                search.cycles.len()
            ));
        }
        let got = point_strings(search.cycles[0].points());
        if got != cycle_expected {
            return Err(format!(
                "n={n}: expected cycle {cycle_expected:?}\ngot {got:?}"
            ));
        }
    }
    Ok(())
}

fn claim_power_scaling(_dir: &Path) -> Result<(), String> {
    let ps: Vec<u64> = (0..=6).map(|k| 5u64.pow(k)).collect();
    let rows = scan_rows(4, "0,2", LConvention::ZeroP, 1, None, Some(&ps)).map_err(cli_err)?;
    for row in &rows {
        let search = row.result.as_ref().map_err(|e| format!("p={}: {e}", row.p))?;
        if !search.cycles.is_empty() {
            return Err(format!(
                "p={}: expected no nontrivial cycles, found {}",
                row.p,
                search.cycles.len()
            ));
        }
    }
    Ok(())
}

fn claim_fixed_points(_dir: &Path) -> Result<(), String> {
    let cases: [(u64, i64, Rational); 3] = [
        (2, 3, rat_int(1)),
        (3, 5, rat(3, 2)),
        (4, 7, rat_int(2)),
    ];
    for (n, p, expected) in cases {
        let formula = top_digit_fixed_point(n, &BigInt::from(p))
            .map_err(|e| e.to_string())?
            .ok_or_else(|| format!("(n,p)=({n},{p}): 2n-1 should divide p"))?;
        if formula != expected {
            return Err(format!(
                "(n,p)=({n},{p}): formula gave {formula}, expected {expected}"
            ));
        }
        // The detector must find the same point as a singleton cycle.
        let r = 2 * n as i64;
        let top = rat(r * p, 4).reduced();
        let sys = two_digit_system(r, top)?;
        let search =
            find_cycles(&sys, Side::B, &CycleSearchConfig::default()).map_err(|e| e.to_string())?;
        let points: Vec<Vec<String>> = search
            .cycles
            .iter()
            .map(|c| point_strings(c.points()))
            .collect();
        if points != vec![vec![expected.to_string()]] {
            return Err(format!(
                "(n,p)=({n},{p}): detector found {points:?}, expected the singleton {{{expected}}}"
            ));
        }
    }
    Ok(())
}

fn claim_closed_form(_dir: &Path) -> Result<(), String> {
    let sys = two_digit_system(4, rat_int(1))?;
    for t in [rat(3, 10), rat_int(1), rat(29, 4), rat(-13, 5)] {
        let m = mu_hat(&sys, Side::B, &RVector::new(vec![t.clone()]), 1e-12)
            .map_err(|e| e.to_string())?;
        let closed = two_digit_product_form(&rat_int(2), &rat_int(4), &t, m.truncation_k + 40);
        let deviation = (m.value - closed).norm();
        if deviation >= 1e-9 {
            return Err(format!("t={t}: closed-form deviation {deviation:e} >= 1e-9"));
        }
    }
    Ok(())
}

fn claim_parity(_dir: &Path) -> Result<(), String> {
    for p in 1..=20i64 {
        let report = validate(
            &RMatrix::scalar(rat_int(4)),
            &[RVector::from_integers(&[0]), RVector::from_integers(&[2])],
            &[RVector::from_integers(&[0]), RVector::from_integers(&[p])],
        );
        if report.ok() != (p % 2 == 1) {
            return Err(format!(
                "p={p}: validation {} but p is {}",
                if report.ok() { "passed" } else { "failed" },
                if p % 2 == 1 { "odd" } else { "even" }
            ));
        }
    }
    Ok(())
}

fn claim_density(_dir: &Path) -> Result<(), String> {
    let set = FrequencySet::from_digits(
        &[RVector::from_integers(&[0]), RVector::from_integers(&[1])],
        &rat_int(4),
        12,
    )
    .map_err(|e| e.to_string())?;
    let windows = geometric_sum_windows(4, 12);
    let origin = RVector::zero(1);
    for (i, h) in windows.iter().enumerate() {
        let n = i + 1;
        let count = count_in_window(&set, &origin, h).map_err(|e| e.to_string())?;
        if count != 1u64 << n {
            return Err(format!("window h_{n} = {h}: count {count}, expected {}", 1u64 << n));
        }
    }
    let est = beurling_lower_estimate(&set, 0.5, &windows).map_err(|e| e.to_string())?;
    let gap = (est.samples[9].ratio - 3f64.sqrt()).abs();
    if gap >= 1e-4 {
        return Err(format!(
            "half-power ratio at n=10 is {} ({gap:e} from sqrt(3))",
            est.samples[9].ratio
        ));
    }
    let q = rat_int(5);
    let scaled = set.scaled(&q).map_err(|e| e.to_string())?;
    for h in &windows {
        let base = count_in_window(&set, &origin, h).map_err(|e| e.to_string())?;
        let image = count_in_window(&scaled, &origin, &(h * &q)).map_err(|e| e.to_string())?;
        if base != image {
            return Err(format!("dilation law broken at h = {h}: {base} vs {image}"));
        }
    }
    Ok(())
}

fn claim_verdicts(dir: &Path) -> Result<(), String> {
    let config = CycleSearchConfig::default();

    // Radix-8 twist: side B carries the singleton cycle {1}; side L is an
    // exhaustive miss, so its dual family is a basis.
    let twist = load_system(&dir.join("radix8_twist.json")).map_err(cli_err)?;
    let b_search = find_cycles(&twist, Side::B, &config).map_err(|e| e.to_string())?;
    let b_report = onb_verdict(&twist, Side::B, &b_search, false);
    let b_points: Vec<Vec<String>> = b_search
        .cycles
        .iter()
        .map(|c| point_strings(c.points()))
        .collect();
    if b_report.verdict != Verdict::NotOnb || b_points != vec![vec!["1".to_string()]] {
        return Err(format!(
            "radix-8 twist side B: expected not-onb via {{1}}, got {:?} with cycles {b_points:?}",
            b_report.verdict
        ));
    }
    let l_search = find_cycles(&twist, Side::L, &config).map_err(|e| e.to_string())?;
    let l_report = onb_verdict(&twist, Side::L, &l_search, false);
    if l_report.verdict != Verdict::Onb || !l_search.exhaustive {
        return Err(format!(
            "radix-8 twist side L: expected an exhaustive onb verdict, got {:?}",
            l_report.verdict
        ));
    }

    // Planar three-digit system: side L carries {(0,1/2)}; side B finds
    // nothing, which a bounded search must report as inconclusive.
    let plane = load_system(&dir.join("plane3.json")).map_err(cli_err)?;
    let pl = find_cycles(&plane, Side::L, &config).map_err(|e| e.to_string())?;
    let pl_report = onb_verdict(&plane, Side::L, &pl, false);
    let pl_points: Vec<Vec<String>> = pl
        .cycles
        .iter()
        .map(|c| point_strings(c.points()))
        .collect();
    if pl_report.verdict != Verdict::NotOnb || pl_points != vec![vec!["0 1/2".to_string()]] {
        return Err(format!(
            "planar system side L: expected not-onb via {{(0,1/2)}}, got {:?} with cycles {pl_points:?}",
            pl_report.verdict
        ));
    }
    let pb = find_cycles(&plane, Side::B, &config).map_err(|e| e.to_string())?;
    let pb_report = onb_verdict(&plane, Side::B, &pb, false);
    if pb_report.verdict != Verdict::Inconclusive || !pb.cycles.is_empty() {
        return Err(format!(
            "planar system side B: expected an inconclusive empty search, got {:?} with {} cycles",
            pb_report.verdict,
            pb.cycles.len()
        ));
    }
    Ok(())
}
