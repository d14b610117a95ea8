//! Star product terms `a_j(p, q) = (-i)^j/j! (D^j p)·(∇^j q)` and the
//! resolvent expansion `b₀, b₁, b₂` for the symbol `p₂ = k|ξ|²`.
//!
//! Vertical derivatives act on `ξ` (and on `b₀` through `D b₀ = -b₀² D p₂`),
//! horizontal ones act on the coefficients `k`; `∇k` and `∇²k` stay symbolic.

use super::coeff::{Coeff, GaussianRational};
use super::term::{Generator, Index, SymbolPoly, SymbolTerm, FREE_BASE};
use crate::error::{Error, Result};

pub type RawPoly = SymbolPoly<GaussianRational>;
type RawTerm = SymbolTerm<GaussianRational>;

/// `p₂ = k r²`.
pub fn p2() -> RawPoly {
    SymbolPoly::from_term(SymbolTerm::new(GaussianRational::one(), vec![], vec![], 2, vec![Generator::K(1)]))
}

fn b0() -> RawPoly {
    SymbolPoly::from_term(SymbolTerm::word(vec![Generator::B0(1)]))
}

fn with_word(t: &RawTerm, pos: usize, replacement: &[Generator]) -> Vec<Generator> {
    let mut w = t.word[..pos].to_vec();
    w.extend_from_slice(replacement);
    w.extend_from_slice(&t.word[pos + 1..]);
    w
}

/// `D_μ` on one term.
pub fn vertical_derivative(t: &RawTerm, mu: Index) -> Vec<RawTerm> {
    let mut out = Vec::new();
    if t.r_power != 0 {
        let mut xi = t.xi.clone();
        xi.push(mu);
        out.push(SymbolTerm::new(
            t.coeff.mul(&GaussianRational::from_int(t.r_power as i64)),
            xi,
            t.deltas.clone(),
            t.r_power - 2,
            t.word.clone(),
        ));
    }
    for p in 0..t.xi.len() {
        let mut xi = t.xi.clone();
        let nu = xi.remove(p);
        let mut deltas = t.deltas.clone();
        deltas.push((nu, mu));
        out.push(SymbolTerm::new(t.coeff.clone(), xi, deltas, t.r_power, t.word.clone()));
    }
    for (pos, g) in t.word.iter().enumerate() {
        if let Generator::B0(a) = *g {
            // D b₀ = -b₀ (D p₂) b₀ = -2 ξ_μ b₀ k b₀, summed over the a factors
            for s in 0..a {
                let mut piece = Vec::new();
                if s > 0 {
                    piece.push(Generator::B0(s));
                }
                piece.extend([Generator::B0(2), Generator::K(1)]);
                if a - 1 - s > 0 {
                    piece.push(Generator::B0(a - 1 - s));
                }
                let mut xi = t.xi.clone();
                xi.push(mu);
                out.push(SymbolTerm::new(
                    t.coeff.mul(&GaussianRational::from_int(-2)),
                    xi,
                    t.deltas.clone(),
                    t.r_power,
                    with_word(t, pos, &piece),
                ));
            }
        }
    }
    out
}

/// `∇_μ` on one term.
pub fn horizontal_derivative(t: &RawTerm, mu: Index) -> Result<Vec<RawTerm>> {
    let mut out = Vec::new();
    for (pos, g) in t.word.iter().enumerate() {
        match *g {
            Generator::K(e) => {
                for s in 0..e {
                    let mut piece = Vec::new();
                    if s > 0 {
                        piece.push(Generator::K(s));
                    }
                    piece.push(Generator::GradK(mu));
                    if e - 1 - s > 0 {
                        piece.push(Generator::K(e - 1 - s));
                    }
                    out.push(SymbolTerm::new(
                        t.coeff.clone(),
                        t.xi.clone(),
                        t.deltas.clone(),
                        t.r_power,
                        with_word(t, pos, &piece),
                    ));
                }
            }
            Generator::GradK(i) => out.push(SymbolTerm::new(
                t.coeff.clone(),
                t.xi.clone(),
                t.deltas.clone(),
                t.r_power,
                with_word(t, pos, &[Generator::hess(i, mu)]),
            )),
            Generator::HessK(..) => {
                return Err(Error::UnsupportedDerivative("third derivatives of k are not represented".into()))
            }
            Generator::B0(a) => {
                // ∇ b₀ = -b₀ (∇p₂) b₀ = -r² b₀ (∇k) b₀
                for s in 0..a {
                    let piece = vec![Generator::B0(s + 1), Generator::GradK(mu), Generator::B0(a - s)];
                    out.push(SymbolTerm::new(
                        t.coeff.neg(),
                        t.xi.clone(),
                        t.deltas.clone(),
                        t.r_power + 2,
                        with_word(t, pos, &piece),
                    ));
                }
            }
        }
    }
    Ok(out)
}

fn apply_vertical(p: &RawPoly, mu: Index) -> RawPoly {
    SymbolPoly::new(p.terms.iter().flat_map(|t| vertical_derivative(t, mu)).collect())
}

fn apply_horizontal(p: &RawPoly, mu: Index) -> Result<RawPoly> {
    let mut terms = Vec::new();
    for t in &p.terms {
        terms.extend(horizontal_derivative(t, mu)?);
    }
    Ok(SymbolPoly::new(terms))
}

/// `a_j(p, q)` for `j ≤ 2`; `q` must be free of `b₀`.
pub fn star_aj(p: &RawPoly, q: &RawPoly, j: u32) -> Result<RawPoly> {
    if j > 2 {
        return Err(Error::UnsupportedJ(j as usize));
    }
    if q.terms.iter().any(|t| t.word.iter().any(|g| matches!(g, Generator::B0(_)))) {
        return Err(Error::UnsupportedDerivative("horizontal derivative of b0 in the right factor".into()));
    }
    let offset = p.terms.iter().filter_map(|t| t.max_index()).max().map_or(0, |i| i + 1);
    let q = SymbolPoly::new(q.terms.iter().map(|t| t.shifted(offset)).collect());
    let mut dp = p.clone();
    let mut nq = q;
    for s in 0..j {
        let mu = FREE_BASE + s;
        dp = apply_vertical(&dp, mu);
        nq = apply_horizontal(&nq, mu)?;
    }
    let mut terms = Vec::new();
    for a in &dp.terms {
        for b in &nq.terms {
            terms.push(a.mul(b));
        }
    }
    // the contracted indices become ordinary bound indices
    let base = terms.iter().filter_map(|t| t.max_index()).max().map_or(0, |i| i + 1);
    let product = SymbolPoly::new(
        terms.iter().map(|t| t.rename(|i| if i >= FREE_BASE { base + (i - FREE_BASE) } else { i })).collect(),
    );
    Ok(product.scaled(&GaussianRational::minus_i_power_over_factorial(j)).canonical())
}

/// Resolvent terms `b_j` of `Δ_k = kΔ` (`p₁ = p₀ = 0`) for `j ≤ 2`, canonical.
pub fn resolvent_b(j: u32) -> Result<RawPoly> {
    let minus_b0 = b0().scaled(&GaussianRational::from_int(-1));
    match j {
        0 => Ok(b0()),
        1 => Ok(star_aj(&b0(), &p2(), 1)?.mul(&minus_b0).canonical()),
        2 => {
            let b1 = resolvent_b(1)?;
            let inner = star_aj(&b1, &p2(), 1)?.add(&star_aj(&b0(), &p2(), 2)?);
            Ok(inner.mul(&minus_b0).canonical())
        }
        _ => Err(Error::UnsupportedJ(j as usize)),
    }
}
