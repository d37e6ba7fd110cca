//! Digit systems `(R, B, L)` and their interaction matrices.
//!
//! A triple qualifies as a *Hadamard digit system* when
//!
//! 1. `R` is a square integer matrix, expansive (every eigenvalue strictly
//!    outside the unit circle);
//! 2. `B` and `L` are equal-cardinality digit sets in `ℝ^d`, both containing
//!    the origin, with no repeated digits;
//! 3. `R^k b · l ∈ ℤ` for all `b ∈ B`, `l ∈ L` and **all** `k ≥ 0`; and
//! 4. the interaction matrix `H = N^{-1/2} (e^{2πi R⁻¹ b·l})_{b∈B, l∈L}` is
//!    unitary (a complex Hadamard matrix).
//!
//! [`validate`] checks each axiom exactly (unitarity alone involves floats,
//! with exact phase angles) and reports every violation rather than stopping
//! at the first.  A [`HadamardSystem`] can only be obtained from a clean
//! validation, so downstream code may assume the axioms.
//!
//! The [`Side`] enum names the two dual questions consistently across the
//! crate: `Side::B` is about the measure `μ_B` — its transform contracts by
//! powers of `Rᵀ` and its candidate frequency set is `Γ(L)` — while
//! `Side::L` is about `μ_L`, with `R` and `Γ(B)`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra::{
    self, exact_phase, frac_part, integrality_forever, is_expansive, rat_int, AlgebraError,
    RMatrix, RVector, Rational,
};

/// Tolerance for the unitarity defect `max |H†H − I|` of interaction
/// matrices; the angles feeding `H` are exact rationals, so any genuine
/// defect is O(1), far above this.
pub const UNITARITY_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum SystemError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("system file is not valid JSON: {0}")]
    Json(String),
    #[error("system file schema error: {0}")]
    Schema(String),
    #[error("digit system failed validation:\n{0}")]
    Invalid(ValidationReport),
    #[error("matrix dimensions are incompatible: {0}")]
    Shape(String),
    #[error("`{0}` is not a permutation of 0..{1}")]
    NotPermutation(String, usize),
    #[error("standard system requires N ≥ 1 and q ≥ 2, got N={n}, q={q}")]
    StandardParams { n: usize, q: i64 },
}

/// Which of the dual measures a computation is about.
///
/// * `Side::B`: the measure `μ_B` on the attractor of `τ_b(x) = R⁻¹(x+b)`.
///   Its transform is `μ̂_B(t) = Π_k χ_B((Rᵀ)^{-k} t)` and its candidate
///   frequency set is `Γ(L) = {Σ (Rᵀ)^k l_k}`.
/// * `Side::L`: the measure `μ_L` driven by `L` and `Rᵀ`; its transform
///   contracts by `R^{-k}` and its frequency set is `Γ(B) = {Σ R^k b_k}`.
///
/// The orthonormal-basis question for `Side::B` — is `Γ(L)` an ONB of
/// `L²(μ_B)`? — is decided by `B`-extreme cycles inside the dual attractor
/// `X(L)`, and symmetrically for `Side::L`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    B,
    L,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::B => Side::L,
            Side::L => Side::B,
        }
    }

    /// Digits of the measure on this side (`B` for `Side::B`).
    pub fn measure_digits(self, sys: &HadamardSystem) -> &[RVector] {
        match self {
            Side::B => sys.digits_b(),
            Side::L => sys.digits_l(),
        }
    }

    /// Digits generating the candidate frequency set for this side
    /// (`L` for `Side::B`).
    pub fn frequency_digits(self, sys: &HadamardSystem) -> &[RVector] {
        match self {
            Side::B => sys.digits_l(),
            Side::L => sys.digits_b(),
        }
    }

    /// The scale matrix whose inverse powers contract the transform on this
    /// side and whose direct powers build the frequency set: `Rᵀ` for
    /// `Side::B`, `R` for `Side::L`.
    pub fn scale(self, sys: &HadamardSystem) -> &RMatrix {
        match self {
            Side::B => sys.r_transpose(),
            Side::L => sys.r(),
        }
    }

    pub fn scale_inv(self, sys: &HadamardSystem) -> &RMatrix {
        match self {
            Side::B => sys.rt_inv(),
            Side::L => sys.r_inv(),
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::B => write!(f, "B"),
            Side::L => write!(f, "L"),
        }
    }
}

impl FromStr for Side {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "b" | "B" => Ok(Side::B),
            "l" | "L" => Ok(Side::L),
            other => Err(format!("unknown side `{other}` (expected `b` or `l`)")),
        }
    }
}

/// The axiom a validation failure refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axiom {
    IntegerMatrix,
    Expansive,
    DigitDimensions,
    EqualCardinality,
    NoDuplicateDigits,
    ContainsZero,
    Integrality,
    Unitarity,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Axiom::IntegerMatrix => "scale matrix has integer entries",
            Axiom::Expansive => "scale matrix is expansive",
            Axiom::DigitDimensions => "digit dimensions match the matrix",
            Axiom::EqualCardinality => "digit sets have equal size N ≥ 1",
            Axiom::NoDuplicateDigits => "digit sets have no repeats",
            Axiom::ContainsZero => "both digit sets contain 0",
            Axiom::Integrality => "R^k b · l ∈ ℤ for all k ≥ 0",
            Axiom::Unitarity => "interaction matrix is unitary",
        };
        write!(f, "{name}")
    }
}

#[derive(Debug, Clone)]
pub struct ValidationFailure {
    pub axiom: Axiom,
    pub detail: String,
}

/// Outcome of [`validate`]: every violated axiom with detail, plus
/// non-fatal notes (e.g. fractional digits in `B`, which the theory allows
/// but which is unusual enough to flag).
#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub failures: Vec<ValidationFailure>,
    pub notes: Vec<String>,
    /// Unitarity defect `max |H†H − I|` when the interaction matrix could
    /// be formed.
    pub unitarity_defect: Option<f64>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    fn fail(&mut self, axiom: Axiom, detail: impl Into<String>) {
        self.failures.push(ValidationFailure {
            axiom,
            detail: detail.into(),
        });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok() {
            write!(f, "valid Hadamard digit system")?;
        } else {
            write!(f, "invalid digit system:")?;
            for fl in &self.failures {
                write!(f, "\n  - {}: {}", fl.axiom, fl.detail)?;
            }
        }
        for note in &self.notes {
            write!(f, "\n  note: {note}")?;
        }
        Ok(())
    }
}

/// A validated Hadamard digit system.  Construction goes through
/// [`HadamardSystem::new`], so holders may rely on every axiom.
#[derive(Debug, Clone)]
pub struct HadamardSystem {
    r: RMatrix,
    r_transpose: RMatrix,
    r_inv: RMatrix,
    rt_inv: RMatrix,
    b: Vec<RVector>,
    l: Vec<RVector>,
}

impl HadamardSystem {
    /// Validate and wrap a digit system; on failure the full report comes
    /// back as the error.
    pub fn new(r: RMatrix, b: Vec<RVector>, l: Vec<RVector>) -> Result<Self, SystemError> {
        let report = validate(&r, &b, &l);
        if !report.ok() {
            return Err(SystemError::Invalid(report));
        }
        let r_inv = r.inverse()?;
        let r_transpose = r.transpose();
        let rt_inv = r_transpose.inverse()?;
        Ok(HadamardSystem {
            r,
            r_transpose,
            r_inv,
            rt_inv,
            b,
            l,
        })
    }

    pub fn r(&self) -> &RMatrix {
        &self.r
    }

    pub fn r_transpose(&self) -> &RMatrix {
        &self.r_transpose
    }

    pub fn r_inv(&self) -> &RMatrix {
        &self.r_inv
    }

    pub fn rt_inv(&self) -> &RMatrix {
        &self.rt_inv
    }

    pub fn digits_b(&self) -> &[RVector] {
        &self.b
    }

    pub fn digits_l(&self) -> &[RVector] {
        &self.l
    }

    /// Common digit-set size `N`.
    pub fn n(&self) -> usize {
        self.b.len()
    }

    /// Ambient dimension `d`.
    pub fn dim(&self) -> usize {
        self.r.dim()
    }

    /// The interaction matrix `N^{-1/2}(e^{2πi R⁻¹b·l})`, rows indexed by
    /// `B`, columns by `L`.
    pub fn hadamard_matrix(&self) -> ComplexMatrix {
        // Cannot fail: validation guarantees invertibility and dimensions.
        hadamard_matrix(&self.r, &self.b, &self.l).expect("validated system")
    }
}

/// Check every Hadamard-system axiom for `(R, B, L)` and report all
/// violations.  Checks that depend on structurally broken input (e.g.
/// unitarity when digit dimensions are wrong) are skipped rather than
/// reported spuriously.
pub fn validate(r: &RMatrix, b: &[RVector], l: &[RVector]) -> ValidationReport {
    let mut report = ValidationReport::default();
    let d = r.dim();

    if !r.is_integer() {
        report.fail(Axiom::IntegerMatrix, format!("R = [{r}] has fractional entries"));
    }

    match is_expansive(r) {
        Ok(true) => {}
        Ok(false) => report.fail(Axiom::Expansive, format!("R = [{r}] has an eigenvalue of modulus ≤ 1")),
        Err(e) => report.fail(Axiom::Expansive, e.to_string()),
    }

    let mut dims_ok = true;
    for (name, set) in [("B", b), ("L", l)] {
        for v in set {
            if v.dim() != d {
                dims_ok = false;
                report.fail(
                    Axiom::DigitDimensions,
                    format!("{name} digit ({v}) has dimension {}, expected {d}", v.dim()),
                );
            }
        }
    }

    if b.len() != l.len() || b.is_empty() {
        report.fail(
            Axiom::EqualCardinality,
            format!("#B = {}, #L = {}", b.len(), l.len()),
        );
    }

    for (name, set) in [("B", b), ("L", l)] {
        for i in 0..set.len() {
            for j in (i + 1)..set.len() {
                if set[i] == set[j] {
                    report.fail(
                        Axiom::NoDuplicateDigits,
                        format!("{name} repeats the digit ({})", set[i]),
                    );
                }
            }
        }
        if dims_ok && !set.iter().any(RVector::is_zero) {
            report.fail(Axiom::ContainsZero, format!("0 ∉ {name}"));
        }
    }

    if !dims_ok || !report.failures.iter().all(|f| {
        matches!(f.axiom, Axiom::ContainsZero | Axiom::NoDuplicateDigits | Axiom::EqualCardinality)
    }) {
        // Structural problems (non-integer or non-expansive R, bad
        // dimensions) make the remaining checks meaningless.
        return report;
    }

    for (i, bv) in b.iter().enumerate() {
        for (j, lv) in l.iter().enumerate() {
            match integrality_forever(r, bv, lv) {
                Ok(true) => {}
                Ok(false) => report.fail(
                    Axiom::Integrality,
                    format!("R^k b·l ∉ ℤ for b = B[{i}] = ({bv}), l = L[{j}] = ({lv})"),
                ),
                Err(e) => report.fail(Axiom::Integrality, e.to_string()),
            }
        }
    }

    if b.len() == l.len() && !b.is_empty() {
        if let Ok(h) = hadamard_matrix(r, b, l) {
            let defect = h.unitarity_defect();
            report.unitarity_defect = Some(defect);
            // NaN must fail the gate, so test for the failing condition.
            if defect.is_nan() || defect >= UNITARITY_TOL {
                report.fail(
                    Axiom::Unitarity,
                    format!("unitarity defect {defect:.3e} exceeds {UNITARITY_TOL:.1e}"),
                );
            }
        }
    }

    if b.iter().any(|v| !v.is_integer()) {
        report
            .notes
            .push("B contains non-integer digits; invariance results assuming B ⊂ ℤ^d do not apply".into());
    }

    report
}

/// The interaction matrix `N^{-1/2}(e^{2πi R⁻¹ b·l})` with exact rational
/// phase angles, rows indexed by `B`, columns by `L`.
pub fn hadamard_matrix(
    r: &RMatrix,
    b: &[RVector],
    l: &[RVector],
) -> Result<ComplexMatrix, SystemError> {
    let r_inv = r.inverse()?;
    let n = b.len();
    let scale = 1.0 / (n as f64).sqrt();
    let mut rows = Vec::with_capacity(n);
    for bv in b {
        let rb = r_inv.mul_vec(bv);
        let mut row = Vec::with_capacity(l.len());
        for lv in l {
            let angle = frac_part(&rb.dot(lv));
            row.push(exact_phase(&angle) * scale);
        }
        rows.push(row);
    }
    ComplexMatrix::from_rows(rows)
}

/// The canonical one-dimensional family: `R = (qN)`, `B = q·{0..N−1}`,
/// `L = {0..N−1}`.  Its interaction matrix is the `ℤ_N` Fourier matrix, so
/// the triple is always a valid Hadamard digit system.
pub fn standard_system(n: usize, q: i64) -> Result<HadamardSystem, SystemError> {
    if n < 1 || q < 2 {
        return Err(SystemError::StandardParams { n, q });
    }
    let r = RMatrix::scalar(rat_int(q * n as i64));
    let b = (0..n as i64)
        .map(|k| RVector::new(vec![rat_int(q * k)]))
        .collect();
    let l = (0..n as i64).map(|k| RVector::from_integers(&[k])).collect();
    HadamardSystem::new(r, b, l)
}

/// A dense complex matrix, used for interaction matrices and the unitary
/// constructions that combine them.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self, SystemError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r == 0 || c == 0 || rows.iter().any(|row| row.len() != c) {
            return Err(SystemError::Shape("rows empty or ragged".into()));
        }
        Ok(ComplexMatrix {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            entries[i * n + i] = Complex64::new(1.0, 0.0);
        }
        ComplexMatrix {
            rows: n,
            cols: n,
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.cols + j]
    }

    pub fn mul(&self, other: &ComplexMatrix) -> Result<ComplexMatrix, SystemError> {
        if self.cols != other.rows {
            return Err(SystemError::Shape(format!(
                "{}×{} · {}×{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut entries = vec![Complex64::new(0.0, 0.0); self.rows * other.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                for j in 0..other.cols {
                    entries[i * other.cols + j] += a * other.at(k, j);
                }
            }
        }
        Ok(ComplexMatrix {
            rows: self.rows,
            cols: other.cols,
            entries,
        })
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> ComplexMatrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.at(i, j).conj());
            }
        }
        ComplexMatrix {
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    /// `max |（H†H − I)_{ij}|`; zero (to float precision) iff unitary.
    /// Non-square matrices report `∞`.
    pub fn unitarity_defect(&self) -> f64 {
        if self.rows != self.cols {
            return f64::INFINITY;
        }
        let product = self.dagger().mul(self).expect("square");
        let identity = ComplexMatrix::identity(self.rows);
        product.max_abs_diff(&identity)
    }

    /// Largest entrywise deviation `max |A_{ij} − B_{ij}|`.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Is this a complex Hadamard matrix: square, unitary, all entry moduli
    /// equal to `n^{-1/2}`?
    pub fn is_hadamard(&self, tol: f64) -> bool {
        if self.rows != self.cols {
            return false;
        }
        let want = 1.0 / (self.rows as f64).sqrt();
        self.unitarity_defect() < tol
            && self
                .entries
                .iter()
                .all(|e| (e.norm() - want).abs() < tol)
    }

    /// Kronecker product; unitarity is preserved.
    pub fn tensor(&self, other: &ComplexMatrix) -> ComplexMatrix {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut entries = Vec::with_capacity(rows * cols);
        for i1 in 0..self.rows {
            for i2 in 0..other.rows {
                for j1 in 0..self.cols {
                    for j2 in 0..other.cols {
                        entries.push(self.at(i1, j1) * other.at(i2, j2));
                    }
                }
            }
        }
        ComplexMatrix { rows, cols, entries }
    }

    fn check_perm(&self, perm: &[usize], len: usize) -> Result<(), SystemError> {
        let mut seen = vec![false; len];
        if perm.len() == len && perm.iter().all(|&p| p < len && !std::mem::replace(&mut seen[p], true)) {
            Ok(())
        } else {
            Err(SystemError::NotPermutation(format!("{perm:?}"), len))
        }
    }

    /// Reorder rows: row `i` of the result is row `perm[i]` of the input.
    pub fn permute_rows(&self, perm: &[usize]) -> Result<ComplexMatrix, SystemError> {
        self.check_perm(perm, self.rows)?;
        let mut entries = Vec::with_capacity(self.entries.len());
        for &p in perm {
            entries.extend_from_slice(&self.entries[p * self.cols..(p + 1) * self.cols]);
        }
        Ok(ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    /// Reorder columns: column `j` of the result is column `perm[j]`.
    pub fn permute_cols(&self, perm: &[usize]) -> Result<ComplexMatrix, SystemError> {
        self.check_perm(perm, self.cols)?;
        let mut entries = Vec::with_capacity(self.entries.len());
        for i in 0..self.rows {
            for &p in perm {
                entries.push(self.at(i, p));
            }
        }
        Ok(ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    /// Multiply one row by a phase `e^{2πi·angle}` (exact angle reduction).
    pub fn phase_row(&self, row: usize, angle: &Rational) -> ComplexMatrix {
        assert!(row < self.rows, "row {row} out of range");
        let mut out = self.clone();
        let phase = exact_phase(angle);
        for j in 0..self.cols {
            out.entries[row * self.cols + j] *= phase;
        }
        out
    }
}

impl fmt::Display for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            if i > 0 {
                writeln!(f)?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, "  ")?;
                }
                let e = self.at(i, j);
                write!(f, "{:+.4}{:+.4}i", e.re, e.im)?;
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// System files
//
// The on-disk format is a single JSON object
//
//     { "R": [[4]], "B": [[0], [2]], "L": [[0], ["27993/2"]] }
//
// with `R` a square row-major integer matrix and `B`/`L` lists of length-d
// digit vectors.  Entries are JSON integers or exact `"num/den"` strings;
// floats are rejected (no exact meaning), as are unknown keys.
// ---------------------------------------------------------------------------

fn value_to_rational(v: &Value, context: &str) -> Result<Rational, SystemError> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(rat_int(i))
            } else {
                Err(SystemError::Schema(format!(
                    "{context}: `{n}` is not an integer; write fractions as \"num/den\" strings"
                )))
            }
        }
        Value::String(s) => algebra::parse_rational(s)
            .map_err(|e| SystemError::Schema(format!("{context}: {e}"))),
        other => Err(SystemError::Schema(format!(
            "{context}: expected integer or \"num/den\" string, got {other}"
        ))),
    }
}

fn value_to_vector(v: &Value, context: &str) -> Result<RVector, SystemError> {
    let Value::Array(coords) = v else {
        return Err(SystemError::Schema(format!(
            "{context}: expected an array of coordinates, got {v}"
        )));
    };
    let coords = coords
        .iter()
        .enumerate()
        .map(|(i, c)| value_to_rational(c, &format!("{context}[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(RVector::new(coords))
}

/// Parse the raw `(R, B, L)` parts of a system file.  No validation beyond
/// the schema happens here; pass the parts to [`validate`] or
/// [`HadamardSystem::new`].
pub fn system_from_json(text: &str) -> Result<(RMatrix, Vec<RVector>, Vec<RVector>), SystemError> {
    let root: Value = serde_json::from_str(text).map_err(|e| SystemError::Json(e.to_string()))?;
    let Value::Object(map) = root else {
        return Err(SystemError::Schema("top level must be an object".into()));
    };
    for key in map.keys() {
        if !matches!(key.as_str(), "R" | "B" | "L") {
            return Err(SystemError::Schema(format!(
                "unknown key `{key}` (expected exactly R, B, L)"
            )));
        }
    }
    let get = |key: &str| {
        map.get(key)
            .ok_or_else(|| SystemError::Schema(format!("missing key `{key}`")))
    };

    let Value::Array(r_rows) = get("R")? else {
        return Err(SystemError::Schema("R must be an array of rows".into()));
    };
    let rows = r_rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let Value::Array(cells) = row else {
                return Err(SystemError::Schema(format!("R[{i}] must be an array")));
            };
            cells
                .iter()
                .enumerate()
                .map(|(j, c)| value_to_rational(c, &format!("R[{i}][{j}]")))
                .collect()
        })
        .collect::<Result<Vec<Vec<_>>, _>>()?;
    let r = RMatrix::from_rows(rows).map_err(|_| {
        SystemError::Schema("R must be a non-empty square matrix".into())
    })?;

    let parse_digits = |key: &str| -> Result<Vec<RVector>, SystemError> {
        let Value::Array(items) = get(key)? else {
            return Err(SystemError::Schema(format!("{key} must be an array of digit vectors")));
        };
        items
            .iter()
            .enumerate()
            .map(|(i, v)| value_to_vector(v, &format!("{key}[{i}]")))
            .collect()
    };

    Ok((r, parse_digits("B")?, parse_digits("L")?))
}

fn rational_to_value(x: &Rational) -> Value {
    if x.is_integer() {
        if let Some(i) = x.to_integer().to_i64() {
            return json!(i);
        }
    }
    json!(x.to_string())
}

/// Serialize `(R, B, L)` back to the system-file JSON format.
pub fn system_to_json(r: &RMatrix, b: &[RVector], l: &[RVector]) -> String {
    let matrix: Vec<Vec<Value>> = (0..r.dim())
        .map(|i| (0..r.dim()).map(|j| rational_to_value(r.at(i, j))).collect())
        .collect();
    let digits = |set: &[RVector]| -> Vec<Vec<Value>> {
        set.iter()
            .map(|v| v.coords().iter().map(rational_to_value).collect())
            .collect()
    };
    let obj = json!({ "R": matrix, "B": digits(b), "L": digits(l) });
    serde_json::to_string_pretty(&obj).expect("serializable")
}
