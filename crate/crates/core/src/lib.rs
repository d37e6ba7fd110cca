//! Exact-arithmetic tools for Hadamard digit systems and their dual pair of
//! fractal measures.
//!
//! A *digit system* is a triple `(R, B, L)`: an expansive integer matrix `R`,
//! a set `B` of translation digits driving the contractions
//! `τ_b(x) = R⁻¹(x + b)`, and a set `L` of candidate frequencies driving the
//! dual contractions `(Rᵀ)⁻¹(x + l)`.  When the interaction matrix
//! `N^{-1/2}(e^{2πi R⁻¹b·l})` is unitary the two attractors carry measures
//! `μ_B`, `μ_L` whose Fourier transforms are infinite products of digit
//! exponential sums, and the lattice-like sets `Γ(L)`, `Γ(B)` become
//! candidate orthogonal frequency sets for `L²(μ_B)`, `L²(μ_L)`.
//!
//! The crate is organised bottom-up:
//!
//! * [`algebra`] — exact rational vectors/matrices, expansiveness,
//!   contraction tail bounds, and the "integral forever" decision.
//! * [`system`] — digit-system validation, interaction matrices, and small
//!   unitary constructions (tensor, permutation, phase).
//! * [`fourier`] — digit exponential sums `χ`, certified evaluation of the
//!   infinite-product transforms `μ̂`, truncated frequency sets `Γ`, partial
//!   spectral functions `σ`, a duality check, and the transfer operator.
//! * [`cycles`] — exhaustive extreme-cycle detection (the exact
//!   obstruction to orthonormality), admissibility scans, and verdicts.
//! * [`density`] — exact window counts and Beurling-type lower density
//!   estimates for frequency sets.
//!
//! All core computations are exact; floating point appears only in final
//! conversions, each accompanied by a certified error bound where one is
//! meaningful.

pub mod algebra;
pub mod cycles;
pub mod density;
pub mod fourier;
mod graph;
pub mod system;

pub use algebra::{RMatrix, RVector, Rational};
pub use system::{HadamardSystem, Side};
