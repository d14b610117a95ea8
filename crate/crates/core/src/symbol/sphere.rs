//! Averaging over the unit sphere: `ξ_a ξ_b ↦ r² δ_ab / m`, odd monomials
//! vanish, and Kronecker deltas are contracted afterwards.

use std::f64::consts::PI;

use num_traits::Zero;

use super::coeff::{Coeff, GaussianRational, RatFunc};
use super::term::{Generator, SymbolPoly, SymbolTerm};
use crate::error::{Error, Result};
use crate::special_fn::gamma;

/// `Vol(S^{m-1}) = 2 π^{m/2} / Γ(m/2)`.
pub fn sphere_volume(m: f64) -> f64 {
    2.0 * PI.powf(m / 2.0) / gamma(m / 2.0)
}

/// `Vol(S^{m-1})^{-1} ∫_{S^{m-1}} p ds`, term by term in input order with
/// vanishing terms dropped. Coefficients become rational functions of `m`.
/// Call [`SymbolPoly::canonical`] on the result to merge like terms.
pub fn sphere_integrate(p: &SymbolPoly<GaussianRational>) -> Result<SymbolPoly<RatFunc>> {
    let mut out = Vec::with_capacity(p.len());
    for t in &p.terms {
        if !t.coeff.im.is_zero() {
            return Err(Error::domain(format!("imaginary coefficient {} cannot be integrated", t.coeff)));
        }
        let coeff = RatFunc::from_rational(t.coeff.re.clone());
        let deg = t.xi.len();
        if deg % 2 == 1 {
            continue;
        }
        let term = match deg {
            0 => SymbolTerm::new(coeff, vec![], t.deltas.clone(), t.r_power, t.word.clone()),
            2 => {
                let mut deltas = t.deltas.clone();
                deltas.push((t.xi[0], t.xi[1]));
                SymbolTerm::new(coeff.mul(&RatFunc::inv_m()), vec![], deltas, t.r_power + 2, t.word.clone())
            }
            _ => return Err(Error::UnsupportedXiDegree(deg)),
        };
        out.push(contract(term));
    }
    Ok(SymbolPoly::new(out))
}

/// Eliminate every Kronecker delta: `δ_aa = m`, otherwise substitute `b → a`.
pub fn contract<C: Coeff + ContractScalar>(t: SymbolTerm<C>) -> SymbolTerm<C> {
    let mut t = t;
    while let Some(&(a, b)) = t.deltas.first() {
        let mut rest = t.deltas[1..].to_vec();
        if a == b {
            t = SymbolTerm::new(t.coeff.mul(&C::dimension()), t.xi, rest, t.r_power, t.word);
            continue;
        }
        let sub = |i| if i == b { a } else { i };
        rest = rest.into_iter().map(|(x, y)| (sub(x), sub(y))).collect();
        let word = t
            .word
            .iter()
            .map(|g| match *g {
                Generator::GradK(i) => Generator::GradK(sub(i)),
                Generator::HessK(x, y) => Generator::hess(sub(x), sub(y)),
                other => other,
            })
            .collect();
        let xi = t.xi.iter().map(|&i| sub(i)).collect();
        t = SymbolTerm::new(t.coeff, xi, rest, t.r_power, word);
    }
    t
}

/// Coefficient rings that can represent the trace `δ_aa = m`.
pub trait ContractScalar {
    fn dimension() -> Self;
}

impl ContractScalar for RatFunc {
    fn dimension() -> Self {
        RatFunc::m()
    }
}
