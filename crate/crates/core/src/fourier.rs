//! Fourier data of the dual pair of fractal measures.
//!
//! For a digit set `D` of size `N` the *digit exponential sum* is
//!
//! ```text
//! χ_D(t) = (1/N) Σ_{d∈D} e^{2πi d·t},
//! ```
//!
//! and the transform of the measure on side `B` is the infinite product
//! `μ̂_B(t) = Π_{k≥1} χ_B((Rᵀ)^{-k} t)` (side `L` contracts by `R^{-k}`).
//! Every angle `d·t` here is an exact rational reduced mod 1 before any
//! floating point enters, so `χ` values are accurate to a few ulps and
//! `|χ(x)| = 1` is a *decidable* predicate: it holds iff `d·x ∈ ℤ` for every
//! digit ([`chi_is_extreme`]).
//!
//! [`mu_hat`] truncates the product after `K` factors with a certified
//! error bound: `|μ̂(t) − Π_{k≤K}| ≤ e^S − 1` where
//! `S = 2π · max_d ‖d‖₁ · ‖t‖∞ · Σ_{k>K} ‖scale^{-k}‖` and the tail sum is
//! bounded exactly by [`crate::algebra::contraction_tail_bound`].
//!
//! The truncated frequency sets are `Γ_n(L) = {Σ_{k≤n} (Rᵀ)^k l_k}` (and
//! `Γ_n(B)` with `R`); for a valid Hadamard system the `N^{n+1}` points are
//! pairwise distinct, which [`gamma_level`] verifies rather than assumes.
//! Partial spectral sums
//!
//! ```text
//! σ_n(t) = Σ_{γ ∈ Γ_n} |μ̂(t+γ)|²
//! ```
//!
//! increase to at most 1, with equality everywhere exactly when the
//! frequency set is an orthonormal basis; [`sigma_partial`] reports the sum
//! together with an accumulated μ̂ error budget.  [`transfer_apply`] applies
//! the weighted transfer operator whose iterates reproduce the σ recursion,
//! and [`duality_check`] tests the exact symmetry that swaps the two sides
//! through a compatible matrix `G`.

use num_complex::Complex64;
use num_traits::{One, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::algebra::{
    exact_phase, frac_part, next_up, rational_to_f64, AlgebraError, ContractionTail, RMatrix,
    RVector, Rational,
};
use crate::system::{HadamardSystem, Side};

/// Hard cap on enumerated points in [`gamma_level`] and
/// [`attractor_cloud`].
pub const GAMMA_POINT_CAP: usize = 10_000_000;

/// Hard cap on the number of product factors [`mu_hat`] will certify.
const TRUNCATION_CAP: usize = 2_000;

#[derive(Debug, Error)]
pub enum FourierError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("point has dimension {got}, system has dimension {expected}")]
    Dimension { expected: usize, got: usize },
    #[error("tolerance must be positive and finite, got {0}")]
    BadTolerance(f64),
    #[error("cannot certify tolerance {tol:e} within {cap} product factors")]
    TruncationCap { tol: f64, cap: usize },
    #[error("level-{level} frequency set needs {needed} points, over the cap of {cap}")]
    GammaCap { level: usize, needed: u128, cap: usize },
    #[error("frequency set degenerate at level {level}: digit words {word_a:?} and {word_b:?} both give the point ({point})")]
    GammaCollision {
        level: usize,
        word_a: Vec<usize>,
        word_b: Vec<usize>,
        point: String,
    },
    #[error("duality hypotheses violated: {}", .0.join("; "))]
    DualityHypotheses(Vec<String>),
}

fn check_dim(sys: &HadamardSystem, t: &RVector) -> Result<(), FourierError> {
    if t.dim() != sys.dim() {
        return Err(FourierError::Dimension {
            expected: sys.dim(),
            got: t.dim(),
        });
    }
    Ok(())
}

/// The digit exponential sum `χ_D(t) = (1/N) Σ_d e^{2πi d·t}`, with each
/// angle reduced mod 1 exactly.  Satisfies `|χ| ≤ 1` and `χ(0) = 1`.
pub fn chi(digits: &[RVector], t: &RVector) -> Complex64 {
    let mut sum = Complex64::zero();
    for d in digits {
        sum += exact_phase(&d.dot(t));
    }
    sum / digits.len() as f64
}

/// Exact decision of `|χ_D(x)| = 1`: with `0 ∈ D` the triangle inequality
/// is tight iff every phase is 1, i.e. iff `d·x ∈ ℤ` for all `d ∈ D`.
pub fn chi_is_extreme(digits: &[RVector], x: &RVector) -> bool {
    debug_assert!(
        digits.iter().any(RVector::is_zero),
        "extremality test assumes 0 is a digit"
    );
    digits.iter().all(|d| d.dot(x).is_integer())
}

/// A certified evaluation of the infinite-product transform.
#[derive(Debug, Clone)]
pub struct MuHatResult {
    pub value: Complex64,
    /// Number of product factors evaluated.
    pub truncation_k: usize,
    /// Certified bound on `|value − μ̂(t)|` (truncation plus float slack).
    pub error_bound: f64,
}

/// The raw truncated product `Π_{k=1..K} χ(scale^{-k} t)` with no
/// certificate; use [`mu_hat`] for a bound, this for cross-checks.
pub fn mu_hat_truncated(sys: &HadamardSystem, side: Side, t: &RVector, k: usize) -> Complex64 {
    let digits = side.measure_digits(sys);
    let scale_inv = side.scale_inv(sys);
    let mut s = t.clone();
    let mut value = Complex64::new(1.0, 0.0);
    for _ in 0..k {
        s = scale_inv.mul_vec(&s);
        value *= chi(digits, &s);
    }
    value
}

/// Evaluate `μ̂_side(t)` to within `tol`, choosing the truncation level from
/// the exact contraction tail bound.  The reported [`MuHatResult::error_bound`]
/// is a true bound and is `0` for `t = 0`.
pub fn mu_hat(
    sys: &HadamardSystem,
    side: Side,
    t: &RVector,
    tol: f64,
) -> Result<MuHatResult, FourierError> {
    check_dim(sys, t)?;
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(FourierError::BadTolerance(tol));
    }
    if t.is_zero() {
        return Ok(MuHatResult {
            value: Complex64::new(1.0, 0.0),
            truncation_k: 0,
            error_bound: 0.0,
        });
    }

    let digits = side.measure_digits(sys);
    let max_digit = digits
        .iter()
        .map(RVector::norm_1)
        .max()
        .unwrap_or_else(Rational::zero);
    // |χ(s) − 1| ≤ 2π·max‖d‖₁·‖s‖∞; inflate slightly so float rounding in
    // the constant cannot invalidate the certificate.
    let c = std::f64::consts::TAU
        * next_up(rational_to_f64(&max_digit))
        * next_up(rational_to_f64(&t.norm_inf()))
        * (1.0 + 1e-9);

    let mut tail = ContractionTail::new(side.scale(sys))?;
    let mut k = 1;
    let error_bound = loop {
        let s = c * next_up(rational_to_f64(&tail.bound(k)));
        // |Π_{k>K}(1+ε_k) − 1| ≤ e^S − 1; the second term covers float
        // rounding in the evaluated prefix.
        let err = s.exp_m1() * (1.0 + 1e-9) + 1e-15 * k as f64;
        if err < tol {
            break err;
        }
        k += 1;
        if k > TRUNCATION_CAP {
            return Err(FourierError::TruncationCap {
                tol,
                cap: TRUNCATION_CAP,
            });
        }
    };

    Ok(MuHatResult {
        value: mu_hat_truncated(sys, side, t, k),
        truncation_k: k,
        error_bound,
    })
}

/// Verify the one-step functional equation
/// `μ̂(t) = χ(scale⁻¹t) · μ̂(scale⁻¹t)` within the combined certified budget.
pub fn mu_hat_functional_check(
    sys: &HadamardSystem,
    side: Side,
    t: &RVector,
    tol: f64,
) -> Result<bool, FourierError> {
    let s = side.scale_inv(sys).mul_vec(t);
    let lhs = mu_hat(sys, side, t, tol)?;
    let inner = mu_hat(sys, side, &s, tol)?;
    let rhs = chi(side.measure_digits(sys), &s) * inner.value;
    // |χ| ≤ 1, so the inner budget passes through unamplified.
    let budget = lhs.error_bound + inner.error_bound + 1e-12;
    Ok((lhs.value - rhs).norm() <= budget)
}

/// The level-`n` truncated frequency set
/// `Γ_n = {d_0 + S d_1 + … + S^n d_n : d_k ∈ digits}`, enumerated in
/// lexicographic digit-word order with an exact distinctness check.
#[derive(Debug, Clone)]
pub struct GammaLevel {
    level: usize,
    points: Vec<RVector>,
}

impl GammaLevel {
    pub fn level(&self) -> usize {
        self.level
    }

    /// Points in lexicographic word order (`N^{level+1}` of them).
    pub fn points(&self) -> &[RVector] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

fn word_from_index(mut idx: usize, n: usize, len: usize) -> Vec<usize> {
    // Index in the lexicographic enumeration, most significant digit first.
    let mut w = vec![0; len];
    for pos in (0..len).rev() {
        w[pos] = idx % n;
        idx /= n;
    }
    w
}

/// Enumerate `Γ_level` for an arbitrary digit set and scale matrix.  Errors
/// if the point count would exceed [`GAMMA_POINT_CAP`] or if two digit
/// words collide (which a valid Hadamard system forbids).
pub fn gamma_level(
    digits: &[RVector],
    scale: &RMatrix,
    level: usize,
) -> Result<GammaLevel, FourierError> {
    let n = digits.len();
    assert!(n > 0, "empty digit set");
    let needed = (n as u128)
        .checked_pow(level as u32 + 1)
        .unwrap_or(u128::MAX);
    if needed > GAMMA_POINT_CAP as u128 {
        return Err(FourierError::GammaCap {
            level,
            needed,
            cap: GAMMA_POINT_CAP,
        });
    }

    // scaled[k][j] = S^k · digits[j], so a word sums in O(level) vector adds.
    let mut scaled: Vec<Vec<RVector>> = Vec::with_capacity(level + 1);
    let mut power = RMatrix::identity(scale.dim());
    for _ in 0..=level {
        scaled.push(digits.iter().map(|d| power.mul_vec(d)).collect());
        power = power.mul(scale);
    }

    // Depth-first enumeration in lexicographic word order, reusing partial
    // sums along the prefix.  Word position 0 is the most significant.
    let mut points = Vec::with_capacity(needed as usize);
    let mut prefix: Vec<RVector> = vec![RVector::zero(digits[0].dim()); level + 2];
    let mut word = vec![0usize; level + 1];
    let mut pos = 0usize;
    loop {
        if pos == level + 1 {
            points.push(prefix[pos].clone());
            // Advance the odometer.
            loop {
                if pos == 0 {
                    let mut seen = std::collections::HashMap::new();
                    for (idx, p) in points.iter().enumerate() {
                        if let Some(prev) = seen.insert(p.clone(), idx) {
                            return Err(FourierError::GammaCollision {
                                level,
                                word_a: word_from_index(prev, n, level + 1),
                                word_b: word_from_index(idx, n, level + 1),
                                point: p.to_string(),
                            });
                        }
                    }
                    return Ok(GammaLevel { level, points });
                }
                pos -= 1;
                word[pos] += 1;
                if word[pos] < n {
                    break;
                }
                word[pos] = 0;
            }
        }
        prefix[pos + 1] = prefix[pos].add(&scaled[pos][word[pos]]);
        pos += 1;
    }
}

/// `Γ_level` on the frequency side of `side`: digits `L` with scale `Rᵀ`
/// for `Side::B`, digits `B` with scale `R` for `Side::L`.
pub fn gamma_level_for(
    sys: &HadamardSystem,
    side: Side,
    level: usize,
) -> Result<GammaLevel, FourierError> {
    gamma_level(side.frequency_digits(sys), side.scale(sys), level)
}

/// Finite-depth attractor sample: all points `Σ_{k=1..depth} S^{-k} d_k` of
/// the iterated function system on `side`'s *measure* (digits `B` with
/// scale `R` for `Side::B`).  Depth 0 gives `{0}`.
pub fn attractor_cloud(
    sys: &HadamardSystem,
    side: Side,
    depth: usize,
) -> Result<Vec<RVector>, FourierError> {
    // The attractor X(B) contracts by R (the frequency-side scale matrix of
    // the *other* side, transposed); concretely: X(B) uses R, X(L) uses Rᵀ.
    let (digits, scale_inv) = match side {
        Side::B => (sys.digits_b(), sys.r_inv()),
        Side::L => (sys.digits_l(), sys.rt_inv()),
    };
    let n = digits.len();
    let needed = (n as u128).checked_pow(depth as u32).unwrap_or(u128::MAX);
    if needed > GAMMA_POINT_CAP as u128 {
        return Err(FourierError::GammaCap {
            level: depth,
            needed,
            cap: GAMMA_POINT_CAP,
        });
    }
    let mut points = vec![RVector::zero(sys.dim())];
    for _ in 0..depth {
        let mut next = Vec::with_capacity(points.len() * n);
        for p in &points {
            for d in digits {
                next.push(scale_inv.mul_vec(&p.add(d)));
            }
        }
        points = next;
    }
    Ok(points)
}

/// One certified sample of a partial spectral sum.
#[derive(Debug, Clone)]
pub struct SigmaSample {
    pub t: RVector,
    pub level: usize,
    pub value: f64,
    /// Accumulated bound on how far `value` may sit from the exact partial
    /// sum (μ̂ truncation budgets plus float slack).
    pub error_budget: f64,
}

/// The partial spectral sum `σ_n(t) = Σ_{γ∈Γ_n} |μ̂(t+γ)|²` on the given
/// side, summed in lexicographic word order (term evaluation parallelizes;
/// the reduction is sequential, so results are deterministic).
pub fn sigma_partial(
    sys: &HadamardSystem,
    side: Side,
    t: &RVector,
    level: usize,
    tol: f64,
) -> Result<SigmaSample, FourierError> {
    check_dim(sys, t)?;
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(FourierError::BadTolerance(tol));
    }
    let gamma = gamma_level_for(sys, side, level)?;
    let per_term_tol = tol / (3.0 * gamma.len() as f64);

    let terms: Vec<(f64, f64)> = gamma
        .points()
        .par_iter()
        .map(|g| -> Result<(f64, f64), FourierError> {
            let m = mu_hat(sys, side, &t.add(g), per_term_tol)?;
            let v = m.value.norm();
            // | |v|² − |μ̂|² | ≤ (2v + err)·err.
            Ok((v * v, (2.0 * v + m.error_bound) * m.error_bound))
        })
        .collect::<Result<_, _>>()?;

    let mut value = 0.0;
    let mut error_budget = 0.0;
    for (v, e) in &terms {
        value += v;
        error_budget += e;
    }
    error_budget += 1e-15 * terms.len() as f64;

    Ok(SigmaSample {
        t: t.clone(),
        level,
        value,
        error_budget,
    })
}

/// Apply the transfer operator on `side` to `f` at `t`:
///
/// ```text
/// (T f)(t) = Σ_{l ∈ freq digits} |χ_meas(τ_l t)|² f(τ_l t),
/// τ_l(t) = scale⁻¹(t + l).
/// ```
///
/// The weights sum to 1 exactly (unitarity of the interaction matrix), so
/// `T` preserves constants; its iterates turn `σ_n` into `σ_{n+1}`.
pub fn transfer_apply<F>(sys: &HadamardSystem, side: Side, mut f: F, t: &RVector) -> f64
where
    F: FnMut(&RVector) -> f64,
{
    let meas = side.measure_digits(sys);
    let scale_inv = side.scale_inv(sys);
    side.frequency_digits(sys)
        .iter()
        .map(|l| {
            let u = scale_inv.mul_vec(&t.add(l));
            chi(meas, &u).norm_sqr() * f(&u)
        })
        .sum()
}

/// Defect of the exact partition `Σ_l |χ(τ_l t)|² = 1` at `t` (pure float
/// noise for a valid system; useful as a cheap self-check).
pub fn qmf_defect(sys: &HadamardSystem, side: Side, t: &RVector) -> f64 {
    (transfer_apply(sys, side, |_| 1.0, t) - 1.0).abs()
}

/// Closed product form of the transform of a two-digit measure: for digits
/// `{0, b}` on the line with scalar scale `r > 1`,
///
/// ```text
/// μ̂(t) = e^{iπ b t/(r−1)} · Π_{k≥1} cos(π b t / r^k),
/// ```
///
/// truncated after `factors` cosines.  Each angle is reduced mod 1 exactly
/// before the float cosine, so precision does not degrade with `t`.
pub fn two_digit_product_form(
    b: &Rational,
    r: &Rational,
    t: &Rational,
    factors: usize,
) -> Complex64 {
    // e^{iπ x} = e^{2πi (x/2)}.
    let half_bt = b * t / Rational::from_integer(2.into());
    let phase = exact_phase(&frac_part(&(&half_bt / (r - Rational::one()))));
    let mut product = 1.0;
    let mut angle = half_bt;
    for _ in 0..factors {
        angle /= r;
        product *= (std::f64::consts::TAU * rational_to_f64(&frac_part(&angle))).cos();
    }
    phase * product
}

/// Outcome of a [`duality_check`]: the two partial sums that the symmetry
/// forces to agree, and whether they did (within certified budgets).
#[derive(Debug, Clone)]
pub struct DualityOutcome {
    /// `σ_{Γ(B)}(t)` on side `L`.
    pub lhs: SigmaSample,
    /// `σ_{Γ(L)}(G·t)` on side `B`.
    pub rhs: SigmaSample,
    /// Exact set equality `G·Γ_n(B) = Γ_n(L)` at this level.
    pub gamma_sets_match: bool,
    pub agrees: bool,
}

/// Exact check of the duality hypotheses for `G`: `R` symmetric, `G`
/// symmetric, `GR = RG`, `G` invertible, and `G(B) = L` as sets.  Returns
/// the list of violations (empty = all hold).
pub fn duality_hypothesis_violations(sys: &HadamardSystem, g: &RMatrix) -> Vec<String> {
    let mut violations = Vec::new();
    if g.dim() != sys.dim() {
        violations.push(format!("G has dimension {}, system has {}", g.dim(), sys.dim()));
        return violations;
    }
    if sys.r() != sys.r_transpose() {
        violations.push("R is not symmetric".into());
    }
    if g != &g.transpose() {
        violations.push("G is not symmetric".into());
    }
    if g.mul(sys.r()) != sys.r().mul(g) {
        violations.push("G does not commute with R".into());
    }
    if g.determinant().is_zero() {
        violations.push("G is singular".into());
    }
    let image: std::collections::BTreeSet<RVector> =
        sys.digits_b().iter().map(|b| g.mul_vec(b)).collect();
    let l_set: std::collections::BTreeSet<RVector> = sys.digits_l().iter().cloned().collect();
    if image != l_set {
        violations.push(format!(
            "G(B) ≠ L: G(B) = {{{}}}",
            image
                .iter()
                .map(|v| format!("({v})"))
                .collect::<Vec<_>>()
                .join(", ")
        ));
    }
    violations
}

/// Exact set equality `G·Γ_level(B) = Γ_level(L)`.
pub fn gamma_image_matches(
    sys: &HadamardSystem,
    g: &RMatrix,
    level: usize,
) -> Result<bool, FourierError> {
    let gb = gamma_level_for(sys, Side::L, level)?; // Γ(B), scale R
    let gl = gamma_level_for(sys, Side::B, level)?; // Γ(L), scale Rᵀ
    let image: std::collections::BTreeSet<RVector> =
        gb.points().iter().map(|p| g.mul_vec(p)).collect();
    let target: std::collections::BTreeSet<RVector> = gl.points().iter().cloned().collect();
    Ok(image == target)
}

/// Verify the duality identity `σ_{Γ(B)}(t) = σ_{Γ(L)}(G·t)` at one point
/// and level.  The hypotheses on `G` are checked exactly first and reported
/// individually on failure; then the level-`n` sets are compared exactly and
/// the two partial sums must agree within their combined error budgets.
pub fn duality_check(
    sys: &HadamardSystem,
    g: &RMatrix,
    t: &RVector,
    level: usize,
    tol: f64,
) -> Result<DualityOutcome, FourierError> {
    let violations = duality_hypothesis_violations(sys, g);
    if !violations.is_empty() {
        return Err(FourierError::DualityHypotheses(violations));
    }
    let gamma_sets_match = gamma_image_matches(sys, g, level)?;
    let lhs = sigma_partial(sys, Side::L, t, level, tol)?;
    let rhs = sigma_partial(sys, Side::B, &g.mul_vec(t), level, tol)?;
    let agrees =
        (lhs.value - rhs.value).abs() <= lhs.error_budget + rhs.error_budget + 1e-12;
    Ok(DualityOutcome {
        lhs,
        rhs,
        gamma_sets_match,
        agrees,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, rat_int};
    use crate::system::standard_system;

    fn cantor4() -> HadamardSystem {
        standard_system(2, 2).unwrap()
    }

    fn cantor4_p(p: i64) -> HadamardSystem {
        HadamardSystem::new(
            RMatrix::scalar(rat_int(4)),
            vec![RVector::from_integers(&[0]), RVector::from_integers(&[2])],
            vec![RVector::from_integers(&[0]), RVector::from_integers(&[p])],
        )
        .unwrap()
    }

    fn plane3() -> HadamardSystem {
        HadamardSystem::new(
            RMatrix::from_integer_rows(&[&[3, 0], &[0, 3]]).unwrap(),
            vec![
                RVector::from_integers(&[0, 0]),
                RVector::from_integers(&[1, 0]),
                RVector::from_integers(&[0, 1]),
            ],
            vec![
                RVector::from_integers(&[0, 0]),
                RVector::from_integers(&[1, 2]),
                RVector::from_integers(&[-1, -2]),
            ],
        )
        .unwrap()
    }

    fn r1(x: Rational) -> RVector {
        RVector::new(vec![x])
    }

    #[test]
    fn chi_values_and_extremality() {
        let b = [RVector::from_integers(&[0]), RVector::from_integers(&[2])];
        // χ_B(1/4) = (1 + e^{πi})/2 = 0, bit-exact thanks to exact phases.
        assert_eq!(chi(&b, &r1(rat(1, 4))), Complex64::new(0.0, 0.0));
        assert_eq!(chi(&b, &r1(rat_int(0))), Complex64::new(1.0, 0.0));
        // |χ| = 1 exactly on the half-integer lattice, and nowhere else.
        assert!(chi_is_extreme(&b, &r1(rat(1, 2))));
        assert!(chi_is_extreme(&b, &r1(rat(-7, 2))));
        assert!(!chi_is_extreme(&b, &r1(rat(1, 4))));
        assert!(!chi_is_extreme(&b, &r1(rat(1, 3))));

        // Plane system: |χ_L(x,y)| = 1 iff x + 2y ∈ ℤ.
        let sys = plane3();
        let x = RVector::new(vec![rat_int(0), rat(1, 2)]);
        assert!(chi_is_extreme(sys.digits_l(), &x));
        assert!((chi(sys.digits_l(), &x).norm() - 1.0).abs() < 1e-15);
        assert!(!chi_is_extreme(sys.digits_b(), &x));
        assert!(chi(sys.digits_b(), &x).norm() < 1.0 - 1e-3);
    }

    #[test]
    fn chi_is_periodic_under_integral_translations() {
        // γ ∈ Γ(L) has b·γ ∈ ℤ for all b, so χ_B(t+γ) = χ_B(t) *bit-exactly*
        // (the reduced angles are identical rationals).
        let sys = cantor4();
        let t = r1(rat(3, 7));
        for g in [5i64, 1, 4, 21] {
            let shifted = t.add(&RVector::from_integers(&[g]));
            assert_eq!(chi(sys.digits_b(), &t), chi(sys.digits_b(), &shifted));
        }
    }

    #[test]
    fn gamma_level_small_cases() {
        let digits = [RVector::from_integers(&[0]), RVector::from_integers(&[1])];
        let scale = RMatrix::scalar(rat_int(4));
        let g = gamma_level(&digits, &scale, 1).unwrap();
        let mut pts: Vec<i64> = g
            .points()
            .iter()
            .map(|p| p.coords()[0].to_integer().try_into().unwrap())
            .collect();
        pts.sort();
        assert_eq!(pts, vec![0, 1, 4, 5]);

        let digits = [RVector::from_integers(&[0]), RVector::from_integers(&[2])];
        let g = gamma_level(&digits, &scale, 1).unwrap();
        let mut pts: Vec<i64> = g
            .points()
            .iter()
            .map(|p| p.coords()[0].to_integer().try_into().unwrap())
            .collect();
        pts.sort();
        assert_eq!(pts, vec![0, 2, 8, 10]);

        // Level n has exactly N^{n+1} distinct points and contains level n−1.
        let sys = plane3();
        let g2 = gamma_level_for(&sys, Side::B, 2).unwrap();
        assert_eq!(g2.len(), 27);
        let g1 = gamma_level_for(&sys, Side::B, 1).unwrap();
        let set: std::collections::HashSet<_> = g2.points().iter().collect();
        assert!(g1.points().iter().all(|p| set.contains(p)));
    }

    #[test]
    fn gamma_collision_is_reported() {
        // Digits {0,1,4} with scale 4: words (1,0) and (4-digit, then 0)…
        // 4 = 0 + 4·1 collides with 4 = 4 + 4·0.
        let digits = [
            RVector::from_integers(&[0]),
            RVector::from_integers(&[1]),
            RVector::from_integers(&[4]),
        ];
        let err = gamma_level(&digits, &RMatrix::scalar(rat_int(4)), 1).unwrap_err();
        match err {
            FourierError::GammaCollision { point, .. } => assert_eq!(point, "4"),
            other => panic!("expected collision, got {other}"),
        }
    }

    #[test]
    fn gamma_cap_is_enforced() {
        let digits: Vec<RVector> = (0..10).map(|k| RVector::from_integers(&[k])).collect();
        let err = gamma_level(&digits, &RMatrix::scalar(rat_int(100)), 7).unwrap_err();
        assert!(matches!(err, FourierError::GammaCap { .. }));
    }

    #[test]
    fn mu_hat_at_zero_and_soundness() {
        let sys = cantor4();
        let m = mu_hat(&sys, Side::B, &r1(rat_int(0)), 1e-12).unwrap();
        assert_eq!(m.value, Complex64::new(1.0, 0.0));
        assert_eq!(m.truncation_k, 0);
        assert_eq!(m.error_bound, 0.0);

        // Doubling the truncation must stay within the certified bound.
        for t in [rat(3, 10), rat_int(1), rat(29, 4), rat(-13, 5), rat(355, 113)] {
            let t = r1(t);
            for side in [Side::B, Side::L] {
                let m = mu_hat(&sys, side, &t, 1e-9).unwrap();
                let finer = mu_hat_truncated(&sys, side, &t, 2 * m.truncation_k);
                assert!(
                    (finer - m.value).norm() <= m.error_bound,
                    "side {side}, t={}: moved {} > bound {}",
                    t,
                    (finer - m.value).norm(),
                    m.error_bound
                );
            }
        }
    }

    #[test]
    fn mu_hat_matches_cosine_closed_form() {
        // For B = {0, 2} and scale 4: χ_B(s) = e^{2πi·2s}/2 + 1/2
        //   = e^{2πis}·cos(2πs), so the product telescopes to
        //   μ̂(t) = e^{2πit/3} Π_{k≥1} cos(2πt/4^k)   (Σ 4^{-k} = 1/3).
        let sys = cantor4();
        for (num, den) in [(3i64, 10i64), (1, 1), (29, 4), (-13, 5)] {
            let t = rat(num, den);
            let m = mu_hat(&sys, Side::B, &r1(t.clone()), 1e-10).unwrap();
            let tf = rational_to_f64(&t);
            let mut expected = Complex64::from_polar(1.0, std::f64::consts::TAU * tf / 3.0);
            for k in 1..60 {
                expected *= (std::f64::consts::TAU * tf / 4f64.powi(k)).cos();
            }
            assert!(
                (m.value - expected).norm() < 1e-9,
                "t = {t}: {} vs {}",
                m.value,
                expected
            );
        }
    }

    #[test]
    fn mu_hat_functional_equation_holds() {
        let sys = cantor4();
        for t in [rat(3, 10), rat(29, 4), rat(-13, 5)] {
            for side in [Side::B, Side::L] {
                assert!(mu_hat_functional_check(&sys, side, &r1(t.clone()), 1e-10).unwrap());
            }
        }
        let plane = plane3();
        let t = RVector::new(vec![rat(1, 3), rat(1, 7)]);
        assert!(mu_hat_functional_check(&plane, Side::B, &t, 1e-9).unwrap());
        assert!(mu_hat_functional_check(&plane, Side::L, &t, 1e-9).unwrap());
    }

    #[test]
    fn mu_hat_rejects_bad_tolerances() {
        let sys = cantor4();
        assert!(matches!(
            mu_hat(&sys, Side::B, &r1(rat_int(1)), 0.0),
            Err(FourierError::BadTolerance(_))
        ));
        assert!(matches!(
            mu_hat(&sys, Side::B, &r1(rat_int(1)), -1.0),
            Err(FourierError::BadTolerance(_))
        ));
        // Unreachably tight: the float-slack term alone exceeds it.
        assert!(matches!(
            mu_hat(&sys, Side::B, &r1(rat_int(1)), 1e-300),
            Err(FourierError::TruncationCap { .. })
        ));
    }

    #[test]
    fn orthogonality_of_frequency_points() {
        // For a valid system, μ̂_B vanishes on nonzero points of Γ(L).
        let sys = cantor4();
        let gamma = gamma_level_for(&sys, Side::B, 2).unwrap();
        for g in gamma.points() {
            if g.is_zero() {
                continue;
            }
            let m = mu_hat(&sys, Side::B, g, 1e-10).unwrap();
            assert!(
                m.value.norm() < 1e-9,
                "μ̂_B({g}) = {} should vanish",
                m.value.norm()
            );
        }
    }

    #[test]
    fn sigma_is_one_at_zero_and_monotone() {
        let sys = cantor4();
        for level in [0usize, 2, 4] {
            let s = sigma_partial(&sys, Side::B, &r1(rat_int(0)), level, 1e-9).unwrap();
            assert!((s.value - 1.0).abs() <= s.error_budget + 1e-9, "level {level}");
        }

        let t = r1(rat(3, 10));
        let mut prev = -1.0;
        for level in 0..=6 {
            let s = sigma_partial(&sys, Side::B, &t, level, 1e-10).unwrap();
            assert!(
                s.value + s.error_budget >= prev,
                "σ not monotone at level {level}"
            );
            assert!(s.value <= 1.0 + s.error_budget + 1e-12);
            prev = s.value - s.error_budget;
        }
    }

    #[test]
    fn sigma_approaches_one_for_a_spectral_pair() {
        // (4, {0,2}, {0,1}) has Γ(L) an orthonormal basis, so σ → 1.
        let sys = cantor4();
        let s = sigma_partial(&sys, Side::B, &r1(rat(3, 10)), 12, 1e-9).unwrap();
        assert!(s.value > 0.95 && s.value <= 1.0 + s.error_budget + 1e-12, "{}", s.value);
    }

    #[test]
    fn sigma_stays_below_one_for_a_defective_pair() {
        // (4, {0,2}, {0,3}): Γ(L) is orthogonal but not total, so σ must sit
        // strictly below 1 somewhere.  Independent oracle for the same sum:
        // the cosine closed form for μ̂_B plus direct digit enumeration of
        // Γ({0,3}) (no GammaLevel, no mu_hat).
        let sys = cantor4_p(3);
        let t = rat(1, 2);
        let level = 12;
        let s = sigma_partial(&sys, Side::B, &r1(t.clone()), level, 1e-9).unwrap();

        let tf = rational_to_f64(&t);
        let muhat_cos = |x: f64| -> f64 {
            let mut v = 1.0;
            for k in 1..60 {
                v *= (std::f64::consts::TAU * x / 4f64.powi(k)).cos();
            }
            v.abs()
        };
        let mut oracle = 0.0;
        let count = 1usize << (level + 1);
        for bits in 0..count {
            let mut gamma = 0f64;
            for pos in 0..=level {
                if bits >> pos & 1 == 1 {
                    gamma += 3.0 * 4f64.powi(pos as i32);
                }
            }
            let v = muhat_cos(tf + gamma);
            oracle += v * v;
        }

        assert!((s.value - oracle).abs() < 1e-6, "{} vs oracle {}", s.value, oracle);
        assert!(s.value < 0.99, "σ = {} should be bounded away from 1", s.value);
    }

    #[test]
    fn qmf_partition_holds_everywhere() {
        let sys = cantor4();
        for t in [rat(3, 10), rat(1, 3), rat(-355, 113), rat_int(2)] {
            assert!(qmf_defect(&sys, Side::B, &r1(t.clone())) < 1e-12);
            assert!(qmf_defect(&sys, Side::L, &r1(t)) < 1e-12);
        }
        let plane = plane3();
        let t = RVector::new(vec![rat(1, 3), rat(5, 7)]);
        assert!(qmf_defect(&plane, Side::B, &t) < 1e-12);
        assert!(qmf_defect(&plane, Side::L, &t) < 1e-12);
    }

    #[test]
    fn transfer_reproduces_sigma_recursion() {
        let sys = cantor4_p(5);
        for (num, den) in [(3, 10), (-5, 7)] {
            let t = r1(rat(num, den));
            let level = 3;
            let tol = 1e-10;
            let direct = sigma_partial(&sys, Side::B, &t, level + 1, tol).unwrap();
            let mut inner_budget = 0.0;
            let stepped = transfer_apply(
                &sys,
                Side::B,
                |u| {
                    let s = sigma_partial(&sys, Side::B, u, level, tol).unwrap();
                    inner_budget += s.error_budget;
                    s.value
                },
                &t,
            );
            assert!(
                (stepped - direct.value).abs() <= direct.error_budget + inner_budget + 1e-10,
                "T(σ_{level}) = {stepped} vs σ_{} = {}",
                level + 1,
                direct.value
            );
        }
    }

    #[test]
    fn duality_holds_for_scalar_g() {
        // (4, {0,2}, {0,5}) with G = (5/2): all hypotheses hold exactly.
        let sys = cantor4_p(5);
        let g = RMatrix::scalar(rat(5, 2));
        assert!(duality_hypothesis_violations(&sys, &g).is_empty());
        for level in 0..=4 {
            assert!(gamma_image_matches(&sys, &g, level).unwrap(), "level {level}");
        }
        let out = duality_check(&sys, &g, &r1(rat(3, 7)), 4, 1e-9).unwrap();
        assert!(out.gamma_sets_match);
        assert!(out.agrees, "lhs {} vs rhs {}", out.lhs.value, out.rhs.value);
    }

    #[test]
    fn duality_hypotheses_are_reported_individually() {
        let plane = plane3();
        let g = RMatrix::identity(2);
        let violations = duality_hypothesis_violations(&plane, &g);
        assert!(violations.iter().any(|v| v.contains("G(B) ≠ L")));

        let sys = cantor4_p(5);
        let wrong = RMatrix::scalar(rat(7, 2));
        let err = duality_check(&sys, &wrong, &r1(rat(1, 3)), 2, 1e-8).unwrap_err();
        assert!(matches!(err, FourierError::DualityHypotheses(_)));
    }

    #[test]
    fn attractor_cloud_depth_growth() {
        let sys = cantor4();
        assert_eq!(attractor_cloud(&sys, Side::B, 0).unwrap().len(), 1);
        let cloud = attractor_cloud(&sys, Side::B, 3).unwrap();
        assert_eq!(cloud.len(), 8);
        // X(B) for (4, {0,2}) sits inside [0, max(B)/(R−1)] = [0, 2/3].
        for p in &cloud {
            assert!(p.coords()[0] >= rat_int(0) && p.coords()[0] <= rat(2, 3));
        }
        // Depth-1 points are exactly R⁻¹B.
        let d1 = attractor_cloud(&sys, Side::B, 1).unwrap();
        let set: std::collections::BTreeSet<_> = d1.into_iter().collect();
        let expect: std::collections::BTreeSet<_> =
            [r1(rat_int(0)), r1(rat(1, 2))].into_iter().collect();
        assert_eq!(set, expect);
    }

    #[test]
    fn dimension_mismatches_are_rejected() {
        let sys = cantor4();
        let t2 = RVector::from_integers(&[1, 2]);
        assert!(matches!(
            mu_hat(&sys, Side::B, &t2, 1e-8),
            Err(FourierError::Dimension { .. })
        ));
        assert!(matches!(
            sigma_partial(&sys, Side::B, &t2, 2, 1e-8),
            Err(FourierError::Dimension { .. })
        ));
    }

    #[test]
    fn two_digit_product_form_matches_the_certified_transform() {
        // B = {0, 2}, r = 4 and B = {0, 3}, r = 6 — the closed form holds
        // for any two-digit measure on the line.
        let cases = [(cantor4(), rat_int(2), rat_int(4)), {
            let sys = standard_system(2, 3).unwrap();
            (sys, rat_int(3), rat_int(6))
        }];
        for (sys, b, r) in &cases {
            for t in [rat(3, 10), rat_int(1), rat(29, 4), rat(-13, 5), rat(1, 3)] {
                let certified = mu_hat(sys, Side::B, &r1(t.clone()), 1e-12).unwrap();
                let closed = two_digit_product_form(b, r, &t, 40);
                assert!(
                    (certified.value - closed).norm() < 1e-9,
                    "t = {t}: {} vs {closed}",
                    certified.value
                );
            }
        }
    }
}
