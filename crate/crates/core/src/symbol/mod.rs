//! Symbol calculus for the resolvent of `Δ_k = kΔ`.
//!
//! Symbols are finite sums of noncommutative words in `b₀ = (k|ξ|² - λ)^{-1}`,
//! `k`, `∇k`, `∇²k`, multiplied by `ξ`-monomials, powers of `r = |ξ|` and
//! exact coefficients. Since `b₀` and `k` commute, the engine gathers them
//! inside each maximal run; no other letters are ever reordered.

pub mod calculus;
pub mod coeff;
pub mod format;
pub mod sphere;
pub mod term;

pub use calculus::{resolvent_b, star_aj, RawPoly};
pub use coeff::{Coeff, GaussianRational, Poly, RatFunc};
pub use format::{from_json, to_json, to_latex, PolyJson, TermJson};
pub use sphere::{sphere_integrate, sphere_volume};
pub use term::{Generator, Index, SymbolPoly, SymbolTerm};

/// Sphere-integrated `b₂` as the term-by-term image of canonical `b₂`.
pub fn b2_integrated() -> crate::Result<SymbolPoly<RatFunc>> {
    sphere_integrate(&resolvent_b(2)?)
}
