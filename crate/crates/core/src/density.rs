//! Exact window counting and Beurling-type lower density estimation for
//! one-dimensional frequency sets.
//!
//! The α-density of a frequency set `Λ` compares window counts against a
//! power of the window radius: `#(Λ ∩ (x + h[−1,1])) / h^α`.  For truncated
//! digit sets `Γ_n = {Σ_{k≤n} R^k d_k}` the counts are exact integers, and a
//! truncation level is *certified* sufficient for a window when every point
//! first appearing beyond that level provably lies outside the window — for
//! nonnegative digits and scale `R > 1`, any such point is at least
//! `R^{level+1}·(smallest nonzero digit)`.
//!
//! Only evaluation at the origin with explicit window sequences is offered:
//! the true `limsup_{h→∞} sup_x` is not computable at desk scale, and the
//! geometric windows `h_n = 1 + R + … + R^{n−1}` are exactly the radii at
//! which the counts of `Γ({0,1})` double.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::algebra::{rational_to_f64, AlgebraError, RMatrix, RVector, Rational};
use crate::fourier::{gamma_level, FourierError};

#[derive(Debug, Error)]
pub enum DensityError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Fourier(#[from] FourierError),
    #[error("density counting requires dimension 1, got {0}")]
    WrongDimension(usize),
    #[error("unsupported frequency set: {0}")]
    UnsupportedSet(String),
    #[error("window radius must be nonnegative, got {0}")]
    NegativeWindow(String),
    #[error("truncation level {level} cannot certify the window reaching {edge}; rebuild the set at level {required_level}")]
    LevelInsufficient {
        level: usize,
        edge: String,
        required_level: usize,
    },
    #[error("bad parameter: {0}")]
    BadParameter(String),
}

/// A truncated frequency set `q·Γ_level(digits, R)` on the line, carrying the
/// exact threshold below which its point list is provably complete: every
/// point of the untruncated set that is missing from `points` is
/// ≥ `threshold`.
#[derive(Clone, Debug)]
pub struct FrequencySet {
    points: Vec<RVector>,
    level: usize,
    scale: Rational,
    factor: Rational,
    /// `factor · min_nonzero_digit · scale^{level+1}`.
    threshold: Rational,
}

impl FrequencySet {
    /// Realize `Γ_level = {Σ_{k≤level} R^k d_k}` for nonnegative rational
    /// digits (one of them zero, one of them positive) and a rational scale
    /// `R > 1`.  These restrictions are what make the completeness threshold
    /// valid; they cover every shipped density target.
    pub fn from_digits(
        digits: &[RVector],
        scale: &Rational,
        level: usize,
    ) -> Result<Self, DensityError> {
        if digits.is_empty() {
            return Err(DensityError::UnsupportedSet("empty digit set".into()));
        }
        for d in digits {
            if d.dim() != 1 {
                return Err(DensityError::WrongDimension(d.dim()));
            }
            if d.coords()[0] < Rational::zero() {
                return Err(DensityError::UnsupportedSet(format!(
                    "negative digit {d}: no completeness threshold exists"
                )));
            }
        }
        if !digits.iter().any(|d| d.is_zero()) {
            return Err(DensityError::UnsupportedSet(
                "digit set must contain zero".into(),
            ));
        }
        let min_nonzero = digits
            .iter()
            .map(|d| &d.coords()[0])
            .filter(|v| !v.is_zero())
            .min()
            .cloned()
            .ok_or_else(|| {
                DensityError::UnsupportedSet("all digits are zero".into())
            })?;
        if scale <= &Rational::one() {
            return Err(DensityError::UnsupportedSet(format!(
                "scale must exceed 1, got {scale}"
            )));
        }
        let gamma = gamma_level(digits, &RMatrix::scalar(scale.clone()), level)?;
        let threshold = min_nonzero * pow_rational(scale, level + 1);
        Ok(FrequencySet {
            points: gamma.points().to_vec(),
            level,
            scale: scale.clone(),
            factor: Rational::one(),
            threshold,
        })
    }

    /// The pointwise dilation `q·Λ` for positive rational `q`; counts inside
    /// matching windows are in exact bijection with the original's.
    pub fn scaled(&self, q: &Rational) -> Result<Self, DensityError> {
        if q <= &Rational::zero() {
            return Err(DensityError::BadParameter(format!(
                "scaling factor must be positive, got {q}"
            )));
        }
        Ok(FrequencySet {
            points: self.points.iter().map(|p| p.scale(q)).collect(),
            level: self.level,
            scale: self.scale.clone(),
            factor: &self.factor * q,
            threshold: &self.threshold * q,
        })
    }

    pub fn points(&self) -> &[RVector] {
        &self.points
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn factor(&self) -> &Rational {
        &self.factor
    }

    /// Smallest level whose realization certifies windows reaching `edge`.
    fn required_level(&self, edge: &Rational) -> usize {
        let mut level = self.level;
        let mut threshold = self.threshold.clone();
        while &threshold <= edge {
            threshold *= &self.scale;
            level += 1;
        }
        level
    }
}

fn pow_rational(x: &Rational, k: usize) -> Rational {
    let mut out = Rational::one();
    for _ in 0..k {
        out *= x;
    }
    out
}

/// Exact count of points in the closed window `[center−h, center+h]`.
/// Errors when `h < 0`, and when the set's truncation level cannot certify
/// that no point beyond the realized level falls inside the window.
pub fn count_in_window(
    set: &FrequencySet,
    center: &RVector,
    h: &Rational,
) -> Result<u64, DensityError> {
    if center.dim() != 1 {
        return Err(DensityError::WrongDimension(center.dim()));
    }
    if h < &Rational::zero() {
        return Err(DensityError::NegativeWindow(h.to_string()));
    }
    let c = &center.coords()[0];
    let upper = c + h;
    let lower = c - h;
    if upper >= set.threshold {
        return Err(DensityError::LevelInsufficient {
            level: set.level,
            edge: upper.to_string(),
            required_level: set.required_level(&upper),
        });
    }
    let count = set
        .points
        .iter()
        .filter(|p| {
            let v = &p.coords()[0];
            v >= &lower && v <= &upper
        })
        .count();
    Ok(count as u64)
}

/// One evaluated window of a density estimate.
#[derive(Clone, Debug)]
pub struct DensitySample {
    pub h: Rational,
    pub count: u64,
    /// `count / h^alpha`, the only float in the record.
    pub ratio: f64,
}

/// A lower density estimate at the origin: the witnessed ratios over an
/// explicit window sequence and the best one.
#[derive(Clone, Debug)]
pub struct DensityEstimate {
    pub alpha: f64,
    pub samples: Vec<DensitySample>,
    /// Max of the witnessed ratios — the value this finite sequence certifies.
    pub lower_bound: f64,
}

impl fmt::Display for DensityEstimate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "alpha = {}, lower bound {}", self.alpha, self.lower_bound)?;
        for s in &self.samples {
            writeln!(f, "  h = {} : count {} ratio {}", s.h, s.count, s.ratio)?;
        }
        Ok(())
    }
}

/// Evaluate `count/h^alpha` at the origin over the given windows
/// (all positive, `0 < alpha ≤ 1`).
pub fn beurling_lower_estimate(
    set: &FrequencySet,
    alpha: f64,
    windows: &[Rational],
) -> Result<DensityEstimate, DensityError> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(DensityError::BadParameter(format!(
            "alpha must lie in (0, 1], got {alpha}"
        )));
    }
    if windows.is_empty() {
        return Err(DensityError::BadParameter("empty window sequence".into()));
    }
    let origin = RVector::zero(1);
    let mut samples = Vec::with_capacity(windows.len());
    let mut lower_bound = f64::NEG_INFINITY;
    for h in windows {
        if h <= &Rational::zero() {
            return Err(DensityError::BadParameter(format!(
                "windows must be positive, got {h}"
            )));
        }
        let count = count_in_window(set, &origin, h)?;
        let ratio = count as f64 / rational_to_f64(h).powf(alpha);
        lower_bound = lower_bound.max(ratio);
        samples.push(DensitySample {
            h: h.clone(),
            count,
            ratio,
        });
    }
    Ok(DensityEstimate {
        alpha,
        samples,
        lower_bound,
    })
}

/// The window radii `h_n = 1 + R + … + R^{n−1}` for `n = 1..=n_max` — the
/// exact radii at which `Γ({0,1}, R)` counts double.
pub fn geometric_sum_windows(base: u64, n_max: usize) -> Vec<Rational> {
    let mut out = Vec::with_capacity(n_max);
    let mut h = BigInt::zero();
    let mut pw = BigInt::one();
    for _ in 0..n_max {
        h += &pw;
        pw *= base;
        out.push(Rational::from_integer(h.clone()));
    }
    out
}
