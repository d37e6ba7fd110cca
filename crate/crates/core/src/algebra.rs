//! Exact rational linear algebra for digit systems.
//!
//! Everything in this module computes over arbitrary-precision rationals
//! (`num`'s `BigRational`); floating point appears only at the final
//! conversion step, and every float that leaves this module is either an
//! exact conversion or a certified upper bound.
//!
//! Three decision procedures live here alongside the vector/matrix plumbing:
//!
//! * [`is_expansive`] — is every eigenvalue of an integer matrix strictly
//!   outside the unit circle?  Decided by norm decay of exact inverse powers
//!   (a proof when it fires), with a floating-point eigenvalue check used
//!   only to classify the cap-exceeded case.
//! * [`contraction_tail_bound`] — a certified upper bound on
//!   `Σ_{k>K} ‖M^{-k}‖` via submultiplicativity and a geometric tail, used
//!   to truncate infinite products with a known error budget.
//! * [`integrality_forever`] — does `M^k b · l ∈ ℤ` hold for *all* `k ≥ 0`?
//!   Decided exactly by iterating residues modulo the common denominator
//!   until the (finite) state space repeats.

use std::collections::HashSet;
use std::fmt;
use std::ops::Index;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Exact rational scalar: arbitrary-precision numerator and denominator,
/// always in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// Iteration cap for the norm-decay loops in [`is_expansive`] and
/// [`contraction_tail_bound`].
const NORM_DECAY_CAP: usize = 200;

/// State cap for the residue iteration in [`integrality_forever`].
const INTEGRALITY_STATE_CAP: usize = 10_000_000;

/// Margin around `|λ| = 1` inside which the floating-point eigenvalue check
/// refuses to classify a matrix as expansive or not.
const EIGEN_MARGIN: f64 = 1e-9;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("matrix rows have inconsistent lengths or are empty")]
    MalformedMatrix,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("matrix must have integer entries")]
    NotInteger,
    #[error("cannot parse `{0}` as a rational (use an integer or \"num/den\")")]
    ParseRational(String),
    #[error("expansiveness undecided: no inverse-power norm dropped below 1 within {cap} iterations and the eigenvalue estimate is too close to the unit circle")]
    ExpansivenessUndecided { cap: usize },
    #[error("matrix is not expansive, so the contraction tail diverges")]
    NotContracting,
    #[error("integrality iteration exceeded the state cap of {cap} residue vectors")]
    IntegralityStateCap { cap: usize },
}

/// Parse an integer (`"5"`, `"-7"`) or a fraction (`"num/den"`) into a
/// [`Rational`].  Zero denominators and malformed input are errors.
pub fn parse_rational(s: &str) -> Result<Rational, AlgebraError> {
    let s = s.trim();
    let err = || AlgebraError::ParseRational(s.to_string());
    let (num_s, den_s) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (s, None),
    };
    let num: BigInt = num_s.parse().map_err(|_| err())?;
    let den: BigInt = match den_s {
        Some(d) => d.parse().map_err(|_| err())?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(err());
    }
    Ok(Rational::new(num, den))
}

/// Shorthand for the rational `num/den`.  Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Shorthand for an integer as a rational.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Fractional part reduced to `[0, 1)`: `x - ⌊x⌋`.
pub fn frac_part(x: &Rational) -> Rational {
    x - x.floor()
}

/// Convert an exact rational to the nearest `f64`, staying accurate even
/// when numerator or denominator overflow `f64` range.
pub fn rational_to_f64(x: &Rational) -> f64 {
    // Fast path: both parts convert exactly-enough on their own.
    if x.numer().bits() <= 52 && x.denom().bits() <= 52 {
        return x.numer().to_f64().unwrap() / x.denom().to_f64().unwrap();
    }
    // Split off the integer part and render the fractional part in 64-bit
    // fixed point; this survives denominators far beyond f64 range.
    let floor = x.floor();
    let frac = x - &floor;
    let scaled = (frac.numer() << 64u32) / frac.denom();
    let frac_f = scaled.to_f64().unwrap_or(0.0) / 2f64.powi(64);
    floor.to_integer().to_f64().unwrap_or(f64::INFINITY) + frac_f
}

/// `e^{2πi·angle}` with the angle reduced mod 1 exactly before any float
/// enters.  Angles landing on the four axis points come out bit-exact
/// (`±1`, `±i`), which keeps Hadamard matrices of small systems crisp.
pub fn exact_phase(angle: &Rational) -> Complex64 {
    let f = frac_part(angle);
    let den = f.denom();
    if den.is_one() {
        return Complex64::new(1.0, 0.0);
    }
    if *den == BigInt::from(2) {
        return Complex64::new(-1.0, 0.0);
    }
    if *den == BigInt::from(4) {
        return if *f.numer() == BigInt::one() {
            Complex64::new(0.0, 1.0)
        } else {
            Complex64::new(0.0, -1.0)
        };
    }
    let theta = std::f64::consts::TAU * rational_to_f64(&f);
    Complex64::new(theta.cos(), theta.sin())
}

/// A vector with exact rational coordinates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RVector(Vec<Rational>);

impl RVector {
    pub fn new(coords: Vec<Rational>) -> Self {
        RVector(coords)
    }

    pub fn zero(dim: usize) -> Self {
        RVector(vec![Rational::zero(); dim])
    }

    pub fn from_integers(coords: &[i64]) -> Self {
        RVector(coords.iter().map(|&c| rat_int(c)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Rational::is_zero)
    }

    pub fn is_integer(&self) -> bool {
        self.0.iter().all(Rational::is_integer)
    }

    pub fn add(&self, other: &RVector) -> RVector {
        debug_assert_eq!(self.dim(), other.dim());
        RVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &RVector) -> RVector {
        debug_assert_eq!(self.dim(), other.dim());
        RVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> RVector {
        RVector(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, c: &Rational) -> RVector {
        RVector(self.0.iter().map(|a| a * c).collect())
    }

    pub fn dot(&self, other: &RVector) -> Rational {
        debug_assert_eq!(self.dim(), other.dim());
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a * b)
            .fold(Rational::zero(), |acc, t| acc + t)
    }

    /// Largest coordinate magnitude (`ℓ∞` norm), exact.
    pub fn norm_inf(&self) -> Rational {
        self.0
            .iter()
            .map(|a| a.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    /// Sum of coordinate magnitudes (`ℓ1` norm), exact.
    pub fn norm_1(&self) -> Rational {
        self.0
            .iter()
            .map(|a| a.abs())
            .fold(Rational::zero(), |acc, t| acc + t)
    }

    /// Least common multiple of the coordinate denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.0
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }
}

impl Index<usize> for RVector {
    type Output = Rational;
    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl fmt::Display for RVector {
    /// One coordinate prints bare (`"933/2"`); several print space-joined
    /// (`"0 1/2"`), which stays safe inside comma- and semicolon-delimited
    /// table cells.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for c in &self.0 {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{c}")?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for RVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RVector({self})")
    }
}

/// A square matrix with exact rational entries, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RMatrix {
    dim: usize,
    entries: Vec<Rational>,
}

impl RMatrix {
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self, AlgebraError> {
        let dim = rows.len();
        if dim == 0 || rows.iter().any(|r| r.len() != dim) {
            return Err(AlgebraError::MalformedMatrix);
        }
        Ok(RMatrix {
            dim,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_integer_rows(rows: &[&[i64]]) -> Result<Self, AlgebraError> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| rat_int(x)).collect())
                .collect(),
        )
    }

    /// The 1×1 matrix `(r)`.
    pub fn scalar(r: Rational) -> Self {
        RMatrix {
            dim: 1,
            entries: vec![r],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = RMatrix {
            dim,
            entries: vec![Rational::zero(); dim * dim],
        };
        for i in 0..dim {
            m.entries[i * dim + i] = Rational::one();
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn at(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.dim + j]
    }

    pub fn is_integer(&self) -> bool {
        self.entries.iter().all(Rational::is_integer)
    }

    pub fn transpose(&self) -> RMatrix {
        let d = self.dim;
        let mut entries = Vec::with_capacity(d * d);
        for j in 0..d {
            for i in 0..d {
                entries.push(self.at(i, j).clone());
            }
        }
        RMatrix { dim: d, entries }
    }

    pub fn mul_vec(&self, v: &RVector) -> RVector {
        debug_assert_eq!(self.dim, v.dim());
        let mut out = Vec::with_capacity(self.dim);
        for i in 0..self.dim {
            let mut acc = Rational::zero();
            for j in 0..self.dim {
                acc += self.at(i, j) * &v[j];
            }
            out.push(acc);
        }
        RVector(out)
    }

    pub fn mul(&self, other: &RMatrix) -> RMatrix {
        debug_assert_eq!(self.dim, other.dim);
        let d = self.dim;
        let mut entries = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                let mut acc = Rational::zero();
                for k in 0..d {
                    acc += self.at(i, k) * other.at(k, j);
                }
                entries.push(acc);
            }
        }
        RMatrix { dim: d, entries }
    }

    pub fn pow(&self, k: usize) -> RMatrix {
        let mut acc = RMatrix::identity(self.dim);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn sub(&self, other: &RMatrix) -> RMatrix {
        debug_assert_eq!(self.dim, other.dim);
        RMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn determinant(&self) -> Rational {
        // Rational Gaussian elimination; exact, no pivot-growth concerns
        // beyond bigint size, and the matrices here are small.
        let d = self.dim;
        let mut a = self.entries.clone();
        let mut det = Rational::one();
        for col in 0..d {
            let pivot = (col..d).find(|&r| !a[r * d + col].is_zero());
            let Some(pivot) = pivot else {
                return Rational::zero();
            };
            if pivot != col {
                for j in 0..d {
                    a.swap(pivot * d + j, col * d + j);
                }
                det = -det;
            }
            let p = a[col * d + col].clone();
            det *= &p;
            for r in (col + 1)..d {
                let factor = &a[r * d + col] / &p;
                if factor.is_zero() {
                    continue;
                }
                for j in col..d {
                    let sub = &factor * &a[col * d + j];
                    a[r * d + j] -= sub;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Result<RMatrix, AlgebraError> {
        let d = self.dim;
        let mut a = self.entries.clone();
        let mut inv = RMatrix::identity(d).entries;
        for col in 0..d {
            let pivot = (col..d).find(|&r| !a[r * d + col].is_zero());
            let Some(pivot) = pivot else {
                return Err(AlgebraError::Singular);
            };
            if pivot != col {
                for j in 0..d {
                    a.swap(pivot * d + j, col * d + j);
                    inv.swap(pivot * d + j, col * d + j);
                }
            }
            let p = a[col * d + col].clone();
            for j in 0..d {
                a[col * d + j] /= &p;
                inv[col * d + j] /= &p;
            }
            for r in 0..d {
                if r == col || a[r * d + col].is_zero() {
                    continue;
                }
                let factor = a[r * d + col].clone();
                for j in 0..d {
                    let s = &factor * &a[col * d + j];
                    a[r * d + j] -= s;
                    let s = &factor * &inv[col * d + j];
                    inv[r * d + j] -= s;
                }
            }
        }
        Ok(RMatrix {
            dim: d,
            entries: inv,
        })
    }

    /// Operator norm induced by `ℓ∞`: the maximum absolute row sum, exact.
    pub fn max_row_sum_norm(&self) -> Rational {
        let d = self.dim;
        (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| self.at(i, j).abs())
                    .fold(Rational::zero(), |acc, t| acc + t)
            })
            .max()
            .unwrap_or_else(Rational::zero)
    }

    /// Entries as big integers; `Err` if any entry is non-integer.
    pub fn to_integer_entries(&self) -> Result<Vec<BigInt>, AlgebraError> {
        if !self.is_integer() {
            return Err(AlgebraError::NotInteger);
        }
        Ok(self.entries.iter().map(|e| e.to_integer()).collect())
    }
}

impl fmt::Display for RMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.dim {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.dim {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.at(i, j))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for RMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RMatrix[{self}]")
    }
}

/// Floating-point eigenvalue probe: the smallest eigenvalue modulus of `m`.
fn min_eigenvalue_modulus(m: &RMatrix) -> f64 {
    let d = m.dim();
    let data: Vec<f64> = (0..d)
        .flat_map(|i| (0..d).map(move |j| rational_to_f64(m.at(i, j))))
        .collect();
    let nm = nalgebra::DMatrix::from_row_slice(d, d, &data);
    nm.complex_eigenvalues()
        .iter()
        .map(|l| l.norm())
        .fold(f64::INFINITY, f64::min)
}

/// Decide whether every eigenvalue of `m` lies strictly outside the unit
/// circle.
///
/// The exact route computes `‖m^{-k}‖` (max row sum) for growing `k`; any
/// value below 1 proves the spectral radius of `m^{-1}` is below 1, hence
/// expansiveness.  If no norm drops below 1 within the cap, a floating-point
/// eigenvalue estimate classifies the failure: clearly non-expansive reports
/// `false`, while an estimate within [`EIGEN_MARGIN`] of the unit circle is
/// refused as [`AlgebraError::ExpansivenessUndecided`] rather than silently
/// misreported.
pub fn is_expansive(m: &RMatrix) -> Result<bool, AlgebraError> {
    let inv = m.inverse()?;
    let mut power = inv.clone();
    for _ in 0..NORM_DECAY_CAP {
        if power.max_row_sum_norm() < Rational::one() {
            return Ok(true);
        }
        power = power.mul(&inv);
    }
    let min_mod = min_eigenvalue_modulus(m);
    if min_mod < 1.0 + EIGEN_MARGIN {
        Ok(false)
    } else {
        Err(AlgebraError::ExpansivenessUndecided {
            cap: NORM_DECAY_CAP,
        })
    }
}

/// Incremental certified bounds on the contraction tails `Σ_{k>K} ‖M^{-k}‖`.
///
/// Built once per matrix, then queried for many `K` (each query extends the
/// cached norm sequence as needed).  With `A = M^{-1}`, `c_k = ‖A^k‖`, and a
/// window `w` such that `r = c_w < 1`, submultiplicativity gives
///
/// ```text
/// Σ_{k>K} c_k  ≤  (c_{K+1} + … + c_{K+w}) / (1 − r),
/// ```
///
/// which is exact-rational throughout and decreasing in `K`.
pub(crate) struct ContractionTail {
    inv: RMatrix,
    /// `norms[k] = ‖M^{-k}‖`, with `norms[0] = 1`.
    norms: Vec<Rational>,
    /// Latest computed power `M^{-(norms.len()-1)}`.
    last_power: RMatrix,
    window: usize,
    one_minus_r: Rational,
}

impl ContractionTail {
    pub fn new(m: &RMatrix) -> Result<Self, AlgebraError> {
        let inv = m.inverse()?;
        let mut norms = vec![Rational::one()];
        let mut last_power = RMatrix::identity(m.dim());
        let mut window = None;
        for k in 1..=NORM_DECAY_CAP {
            last_power = last_power.mul(&inv);
            norms.push(last_power.max_row_sum_norm());
            if norms[k] < Rational::one() {
                window = Some(k);
                break;
            }
        }
        let Some(window) = window else {
            return Err(AlgebraError::NotContracting);
        };
        let one_minus_r = Rational::one() - &norms[window];
        Ok(ContractionTail {
            inv,
            norms,
            last_power,
            window,
            one_minus_r,
        })
    }

    fn norm(&mut self, k: usize) -> Rational {
        while self.norms.len() <= k {
            self.last_power = self.last_power.mul(&self.inv);
            self.norms.push(self.last_power.max_row_sum_norm());
        }
        self.norms[k].clone()
    }

    /// Exact-rational upper bound on `Σ_{k>K} ‖M^{-k}‖`.
    pub fn bound(&mut self, k: usize) -> Rational {
        let mut window_sum = Rational::zero();
        for s in 1..=self.window {
            window_sum += self.norm(k + s);
        }
        window_sum / &self.one_minus_r
    }
}

/// Certified upper bound on `Σ_{k>K} ‖M^{-k}‖` in the max-row-sum norm,
/// rounded up when converted to `f64`.  Errors if `m` is singular or not
/// expansive (the tail would diverge).
pub fn contraction_tail_bound(m: &RMatrix, k: usize) -> Result<f64, AlgebraError> {
    let mut tail = ContractionTail::new(m)?;
    let exact = tail.bound(k);
    // `rational_to_f64` rounds to nearest; one ulp up keeps this a true bound.
    Ok(next_up(rational_to_f64(&exact)))
}

/// Smallest `f64` strictly above `x` (for non-negative finite `x`).
pub(crate) fn next_up(x: f64) -> f64 {
    if x == 0.0 {
        return f64::MIN_POSITIVE;
    }
    f64::from_bits(x.to_bits() + 1)
}

/// Decide exactly whether `m^k b · l ∈ ℤ` for **every** `k ≥ 0`.
///
/// Write `b = u/e` and `l = v/D` with integer vectors `u, v`.  Then
/// `m^k b · l ∈ ℤ` iff `(m^k u) · v ≡ 0 (mod eD)`, and the residue vector
/// `m^k u mod eD` lives in a finite state space.  Iterating until a state
/// repeats decides the property for all `k` at once; the cap exists only to
/// bound memory on adversarial moduli and is reported, never silently hit.
pub fn integrality_forever(m: &RMatrix, b: &RVector, l: &RVector) -> Result<bool, AlgebraError> {
    let entries = m.to_integer_entries()?;
    let d = m.dim();
    if b.dim() != d {
        return Err(AlgebraError::DimensionMismatch {
            expected: d,
            got: b.dim(),
        });
    }
    if l.dim() != d {
        return Err(AlgebraError::DimensionMismatch {
            expected: d,
            got: l.dim(),
        });
    }

    let e = b.denominator_lcm();
    let dd = l.denominator_lcm();
    let modulus = &e * &dd;
    if modulus.is_one() {
        // Integer vectors and an integer matrix: every dot product is integral.
        return Ok(true);
    }

    let u: Vec<BigInt> = b
        .coords()
        .iter()
        .map(|c| (c * Rational::from_integer(e.clone())).to_integer())
        .collect();
    let v: Vec<BigInt> = l
        .coords()
        .iter()
        .map(|c| (c * Rational::from_integer(dd.clone())).to_integer().mod_floor(&modulus))
        .collect();

    let mut state: Vec<BigInt> = u.iter().map(|x| x.mod_floor(&modulus)).collect();
    let mut seen: HashSet<Vec<BigInt>> = HashSet::new();
    loop {
        let dot = state
            .iter()
            .zip(&v)
            .fold(BigInt::zero(), |acc, (a, b)| acc + a * b);
        if !dot.mod_floor(&modulus).is_zero() {
            return Ok(false);
        }
        if !seen.insert(state.clone()) {
            return Ok(true);
        }
        if seen.len() > INTEGRALITY_STATE_CAP {
            return Err(AlgebraError::IntegralityStateCap {
                cap: INTEGRALITY_STATE_CAP,
            });
        }
        let mut next = Vec::with_capacity(d);
        for i in 0..d {
            let mut acc = BigInt::zero();
            for j in 0..d {
                acc += &entries[i * d + j] * &state[j];
            }
            next.push(acc.mod_floor(&modulus));
        }
        state = next;
    }
}
