//! Spectral functions of the second heat coefficient of `Δ_k = kΔ`.
//!
//! [`rearrange`] turns the sphere-integrated `b₂` into terms
//! `k^{-(d+1)+e} · Π(1-z_l)^{e_l} · H_α(z̄; m)` acting on `Tr(∇²k)` or
//! `Tr(∇k⊗∇k)`; [`k_combo`] and [`h_combo`] collect them. `K` and `H` can be
//! evaluated from that combination, from `₂F₁`/Appell `F₁`, or from the
//! elementary closed forms. The common factor `Vol(S^{m-1})/2` is left out
//! everywhere and available as [`overall_factor`].

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::dd::{self, dd};
use crate::divided_diff::{divdiff, NodeList, WithDerivatives};
use crate::error::{Error, Result};
use crate::h_family::{self, HFamilyArgs, HRoute, MultiIndex};
use crate::multivar_hyper::appell_f1;
use crate::special_fn::{gamma, gauss_2f1, GaussParams};
use crate::symbol::{self, Coeff, Generator, RatFunc, SymbolPoly};

const TOL: f64 = 1e-13;

/// Operand of a rearranged term after the index sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Operand {
    /// `Tr(∇²k) = Σ_l ∇_l² k`
    TraceHess,
    /// `Tr(∇k ⊗ ∇k) = Σ_l ∇_l k ⊗ ∇_l k`
    TraceGradGrad,
}

impl fmt::Display for Operand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Operand::TraceHess => write!(f, "Tr(hess k)"),
            Operand::TraceGradGrad => write!(f, "Tr(grad k ⊗ grad k)"),
        }
    }
}

/// One word `b₀^{α₀} k^{e₀} ρ₁ b₀^{α₁} k^{e₁} … ρ_n b₀^{α_n} k^{e_n}` after
/// the contour and radial integrals.
#[derive(Debug, Clone, PartialEq)]
pub struct RearrangedTerm {
    pub alpha: MultiIndex,
    /// Power of `k` on the left: `-(d+1) + Σ e_l`.
    pub k_exponent: f64,
    /// `β_l` in `Π_l (1 - z_l)^{β_l}`, one entry per variable.
    pub modular_multiplier: Vec<u32>,
    pub operand: Option<Operand>,
    pub coefficient: RatFunc,
}

/// `Vol(S^{m-1})/2`.
pub fn overall_factor(m: f64) -> f64 {
    symbol::sphere_volume(m) / 2.0
}

/// `(b0 power, k power)` per run, and the derivative letters between runs.
type ParsedWord = (Vec<(u32, u32)>, Vec<Generator>);

fn parse_word(word: &[Generator]) -> Result<ParsedWord> {
    let mut runs = Vec::new();
    let mut rhos = Vec::new();
    let (mut b, mut k) = (0u32, 0u32);
    for g in word {
        match *g {
            Generator::B0(a) => b += a,
            Generator::K(a) => k += a,
            rho => {
                runs.push((b, k));
                rhos.push(rho);
                b = 0;
                k = 0;
            }
        }
    }
    runs.push((b, k));
    if runs.iter().any(|r| r.0 == 0) {
        let text: Vec<String> = word.iter().map(|g| g.to_string()).collect();
        return Err(Error::MalformedWord(format!("every gap must hold a power of b0: {}", text.join("."))));
    }
    Ok((runs, rhos))
}

fn operand_of(rhos: &[Generator]) -> Result<Option<Operand>> {
    match rhos {
        [] => Ok(None),
        [Generator::HessK(a, b)] if a == b => Ok(Some(Operand::TraceHess)),
        [Generator::GradK(a), Generator::GradK(b)] if a == b => Ok(Some(Operand::TraceGradGrad)),
        _ => {
            let text: Vec<String> = rhos.iter().map(|g| g.to_string()).collect();
            Err(Error::MalformedWord(format!("no trace operand for {}", text.join(" ⊗ "))))
        }
    }
}

/// Rearrange every term of a `ξ`-free symbol of order `-2-j`.
pub fn rearrange(p: &SymbolPoly<RatFunc>, m: f64, j: u32) -> Result<Vec<RearrangedTerm>> {
    let mut out = Vec::with_capacity(p.len());
    for t in &p.terms {
        if !t.xi.is_empty() || !t.deltas.is_empty() {
            return Err(Error::MalformedWord(format!("term still carries ξ or δ: {t}")));
        }
        let (runs, rhos) = parse_word(&t.word)?;
        let operand = operand_of(&rhos)?;
        let alpha = MultiIndex::new(runs.iter().map(|r| r.0).collect())?;
        let expected = 2 * alpha.abs() as i32 - 2 - j as i32;
        if t.r_power != expected {
            return Err(Error::HomogeneityMismatch(format!("{alpha} needs r^{expected}, term has r^{}", t.r_power)));
        }
        let k_total: u32 = runs.iter().map(|r| r.1).sum();
        out.push(RearrangedTerm {
            k_exponent: -(alpha.d(m, j) + 1.0) + k_total as f64,
            modular_multiplier: runs[1..].iter().map(|r| r.1).collect(),
            alpha,
            operand,
            coefficient: t.coeff.clone(),
        });
    }
    Ok(out)
}

/// `coeff · Π (1-z_l)^{multiplier_l} · H_alpha`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComboTerm {
    pub coeff: RatFunc,
    pub alpha: MultiIndex,
    pub multiplier: Vec<u32>,
}

impl fmt::Display for ComboTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.coeff)?;
        for (l, &e) in self.multiplier.iter().enumerate() {
            match e {
                0 => {}
                1 => write!(f, " (1-z{})", l + 1)?,
                _ => write!(f, " (1-z{})^{e}", l + 1)?,
            }
        }
        let idx: Vec<String> = self.alpha.0.iter().map(|a| a.to_string()).collect();
        write!(f, " H_{{{}}}", idx.join(","))
    }
}

/// A spectral function as a combination of `H_α`, multiplying `k^{k_exponent}`
/// and the operand.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralCombo {
    pub operand: Operand,
    /// The power of `k` is `-m/2 + k_exponent_const`.
    pub k_exponent_const: i32,
    pub terms: Vec<ComboTerm>,
}

impl SpectralCombo {
    /// Evaluate with a caller-supplied `H_α`.
    pub fn eval_with(
        &self,
        zbar: &[f64],
        m: f64,
        mut h: impl FnMut(&MultiIndex, &[f64]) -> Result<f64>,
    ) -> Result<f64> {
        let mut acc = 0.0;
        for t in &self.terms {
            let mut factor = t.coeff.eval(m);
            for (&e, &z) in t.multiplier.iter().zip(zbar) {
                factor *= (1.0 - z).powi(e as i32);
            }
            acc += factor * h(&t.alpha, zbar)?;
        }
        Ok(acc)
    }

    pub fn eval(&self, zbar: &[f64], m: f64, route: HRoute, tol: f64) -> Result<f64> {
        self.eval_with(zbar, m, |alpha, z| h_family::h_alpha(alpha, &HFamilyArgs::new(z.to_vec(), m), route, tol))
    }
}

impl fmt::Display for SpectralCombo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.terms.iter().map(|t| t.to_string()).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Collect rearranged terms by operand. The `k` power must be the same
/// within each operand; it is returned relative to `-m/2`.
pub fn assemble(terms: &[RearrangedTerm], m: f64) -> Result<Vec<SpectralCombo>> {
    type Coeffs = BTreeMap<(MultiIndex, Vec<u32>), RatFunc>;
    let mut groups: BTreeMap<Operand, (f64, Coeffs)> = BTreeMap::new();
    for t in terms {
        let Some(op) = t.operand else { continue };
        let entry = groups.entry(op).or_insert_with(|| (t.k_exponent, BTreeMap::new()));
        if (entry.0 - t.k_exponent).abs() > 1e-12 {
            return Err(Error::HomogeneityMismatch(format!(
                "{op}: k exponents {} and {} differ",
                entry.0, t.k_exponent
            )));
        }
        let slot = entry.1.entry((t.alpha.clone(), t.modular_multiplier.clone())).or_insert_with(RatFunc::zero);
        *slot = slot.add(&t.coefficient);
    }
    let mut out = Vec::new();
    for (operand, (k_exp, terms)) in groups {
        let shift = k_exp + m / 2.0;
        if (shift - shift.round()).abs() > 1e-12 {
            return Err(Error::HomogeneityMismatch(format!("{operand}: k exponent {k_exp} at m = {m}")));
        }
        out.push(SpectralCombo {
            operand,
            k_exponent_const: shift.round() as i32,
            terms: terms
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|((alpha, multiplier), coeff)| ComboTerm { coeff, alpha, multiplier })
                .collect(),
        });
    }
    Ok(out)
}

fn pipeline() -> &'static (SpectralCombo, SpectralCombo) {
    static CELL: OnceLock<(SpectralCombo, SpectralCombo)> = OnceLock::new();
    CELL.get_or_init(|| {
        let b2 = symbol::b2_integrated().expect("b2 derivation").canonical();
        // any generic m; the combination itself is symbolic in m
        let m = 3.0;
        let combos = assemble(&rearrange(&b2, m, 2).expect("rearrangement"), m).expect("assembly");
        let pick = |op| combos.iter().find(|c| c.operand == op).cloned().expect("operand present");
        (pick(Operand::TraceHess), pick(Operand::TraceGradGrad))
    })
}

/// `K_{Δ_k}` as derived from `b₂`.
pub fn k_combo() -> &'static SpectralCombo {
    &pipeline().0
}

/// `H_{Δ_k}` as derived from `b₂`.
pub fn h_combo() -> &'static SpectralCombo {
    &pipeline().1
}

/// How `K` and `H` are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectralRoute {
    /// The `H_α` combination, each `H_α` through its `₂F₁` reduction.
    HAlpha,
    /// `₂F₁` and Appell `F₁` with explicit Gamma prefactors.
    Hyper,
    /// Elementary closed forms, extrapolated across removable points.
    Closed,
}

impl SpectralRoute {
    pub const ALL: [SpectralRoute; 3] = [SpectralRoute::HAlpha, SpectralRoute::Hyper, SpectralRoute::Closed];
}

impl fmt::Display for SpectralRoute {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SpectralRoute::HAlpha => "h-alpha",
            SpectralRoute::Hyper => "hyper",
            SpectralRoute::Closed => "closed",
        })
    }
}

impl std::str::FromStr for SpectralRoute {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "h-alpha" | "halpha" => Ok(Self::HAlpha),
            "hyper" => Ok(Self::Hyper),
            "closed" => Ok(Self::Closed),
            _ => Err(Error::domain(format!("unknown route '{s}'"))),
        }
    }
}

fn check_m(m: f64) -> Result<()> {
    if !(m >= 2.0) || !m.is_finite() {
        return Err(Error::domain(format!("dimension m must be >= 2, got {m}")));
    }
    Ok(())
}

fn check_y(y: f64) -> Result<()> {
    if !(y > 0.0) || !y.is_finite() {
        return Err(Error::domain(format!("modular variable must be > 0, got {y}")));
    }
    Ok(())
}

/// `K_{Δ_k}(y; m)`.
pub fn k_delta(y: f64, m: f64, route: SpectralRoute) -> Result<f64> {
    check_y(y)?;
    check_m(m)?;
    let z = 1.0 - y;
    match route {
        SpectralRoute::HAlpha => k_combo().eval(&[z], m, HRoute::Reduced, TOL),
        SpectralRoute::Hyper => {
            let f = |a: f64, c: f64| gauss_2f1(GaussParams::new(a, 1.0, c), z, TOL);
            Ok(-0.5 * gamma(m / 2.0 + 1.0) * f(m / 2.0 + 1.0, 3.0)?
                + 2.0 * gamma(m / 2.0 + 2.0) / (3.0 * m) * f(m / 2.0 + 2.0, 4.0)?)
        }
        SpectralRoute::Closed => k_closed(y, m),
    }
}

/// `K_{Δ_k}` from the `H_α` combination with a chosen `H_α` route.
pub fn k_delta_by(y: f64, m: f64, route: HRoute, tol: f64) -> Result<f64> {
    check_y(y)?;
    check_m(m)?;
    k_combo().eval(&[1.0 - y], m, route, tol)
}

/// `d^k/dy^k K_{Δ_k}(y; m)`, exact through the `₂F₁` derivatives.
pub fn k_delta_derivative(y: f64, m: f64, k: usize) -> Result<f64> {
    check_y(y)?;
    check_m(m)?;
    let z = 1.0 - y;
    let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    let mut acc = 0.0;
    for t in &k_combo().terms {
        if t.alpha.n() != 1 || t.alpha.0[1] != 1 || t.multiplier.iter().any(|&e| e != 0) {
            return Err(Error::DerivativeUnavailable { order: k, at: y });
        }
        acc += t.coeff.eval(m) * h_family::h_a1_derivative(t.alpha.0[0], z, m, 2, k)?;
    }
    Ok(sign * acc)
}

/// `H_{Δ_k}(y₁, y₂; m)` with `z₁ = 1 - y₁`, `z₂ = 1 - y₁y₂`.
pub fn h_delta(y1: f64, y2: f64, m: f64, route: SpectralRoute) -> Result<f64> {
    check_y(y1)?;
    check_y(y2)?;
    check_m(m)?;
    let (z1, z2) = (1.0 - y1, 1.0 - y1 * y2);
    match route {
        SpectralRoute::HAlpha => h_combo().eval(&[z1, z2], m, HRoute::Reduced, TOL),
        SpectralRoute::Hyper => h_hyper(z1, z2, m, 2.0),
        SpectralRoute::Closed => h_closed(y1, y2, m),
    }
}

/// `H_{Δ_k}` from the `H_α` combination with a chosen `H_α` route.
pub fn h_delta_by(y1: f64, y2: f64, m: f64, route: HRoute, tol: f64) -> Result<f64> {
    check_y(y1)?;
    check_y(y2)?;
    check_m(m)?;
    h_combo().eval(&[1.0 - y1, 1.0 - y1 * y2], m, route, tol)
}

/// The Appell form of `H`; `second_weight` multiplies the
/// `F₁(m/2+3; 1, 1; 5)` term and equals 2.
pub fn h_hyper(z1: f64, z2: f64, m: f64, second_weight: f64) -> Result<f64> {
    let pre = 1.0 / (6.0 * m);
    let g3 = gamma(m / 2.0 + 3.0);
    let f1 = |a: f64, b1: f64, c: f64| appell_f1(a, b1, 1.0, c, z1, z2, TOL);
    Ok(pre * 2.0 * (m + 2.0) * gamma(m / 2.0 + 2.0) * f1(m / 2.0 + 2.0, 1.0, 4.0)?
        - pre * g3 * second_weight * f1(m / 2.0 + 3.0, 1.0, 5.0)?
        - pre * g3 * (1.0 - z1) * f1(m / 2.0 + 3.0, 2.0, 5.0)?)
}

/// `H_{Δ_k}(y, y⁻¹; m)`: here `z₂ = 0` exactly and each
/// `H_{a,b,c}(z, 0)` collapses to `H_{a+c,b}(z)`.
pub fn h_delta_reciprocal(y: f64, m: f64) -> Result<f64> {
    check_y(y)?;
    check_m(m)?;
    let z = 1.0 - y;
    h_combo().eval_with(&[z, 0.0], m, |alpha, _| {
        let a = &alpha.0;
        let collapsed = MultiIndex::new(vec![a[0] + a[2], a[1]])?;
        h_family::h_alpha_reduced(&collapsed, &HFamilyArgs::new(vec![z], m), TOL)
    })
}

/// The one-variable closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum H1Kind {
    H21,
    H31,
    H41,
}

impl H1Kind {
    pub const ALL: [H1Kind; 3] = [H1Kind::H21, H1Kind::H31, H1Kind::H41];

    pub fn alpha(self) -> MultiIndex {
        let a = match self {
            H1Kind::H21 => 2,
            H1Kind::H31 => 3,
            H1Kind::H41 => 4,
        };
        MultiIndex(vec![a, 1])
    }
}

/// Half-width of the extrapolation stencil around removable points.
const RADIUS_Z: f64 = 1e-3;
const RADIUS_M: f64 = 1e-2;
const RADIUS_H: f64 = 1e-2;
const STENCIL: [f64; 8] = [-3.0, -2.0, -1.5, -1.0, 1.0, 1.5, 2.0, 3.0];

/// `f(x)`, or a polynomial extrapolation from a symmetric stencil around `x0`
/// when `x` is within `radius` of the removable point `x0`.
fn removable(x: f64, x0: f64, radius: f64, f: &dyn Fn(f64) -> Result<f64>) -> Result<f64> {
    if (x - x0).abs() >= radius {
        return f(x);
    }
    let xs: Vec<f64> = STENCIL.iter().map(|s| x0 + s * radius).collect();
    let mut acc = 0.0;
    for (i, &xi) in xs.iter().enumerate() {
        let mut w = 1.0;
        for (j, &xj) in xs.iter().enumerate() {
            if i != j {
                w *= (x - xj) / (xi - xj);
            }
        }
        acc += w * f(xi)?;
    }
    Ok(acc)
}

fn h1_raw(kind: H1Kind, z: f64, m: f64) -> f64 {
    let (zz, mm) = (dd(z), dd(m));
    // (1-z)^{-m/2}
    let w = dd::powf(dd(1.0) - zz, dd(-m / 2.0));
    let one_minus_z = dd(1.0) - zz;
    let (num, den, g) = match kind {
        H1Kind::H21 => {
            let num = (-((mm - 2.0) * zz + 2.0) + one_minus_z * w * 2.0) * 2.0;
            (num, (mm - 2.0) * mm * zz * zz, gamma(m / 2.0 + 1.0))
        }
        H1Kind::H31 => {
            let num = -((mm - 2.0) * zz * (mm * zz + 4.0) + 8.0) + one_minus_z * w * 8.0;
            (num, mm * (mm * mm - 4.0) * zz * zz * zz, gamma(m / 2.0 + 2.0))
        }
        H1Kind::H41 => {
            let inner = mm * zz * ((mm + 2.0) * zz + 6.0) + 24.0;
            let num = -((mm - 2.0) * zz * inner + 48.0) + one_minus_z * w * 48.0;
            let den = (mm - 2.0) * mm * (mm + 2.0) * (mm + 4.0) * zz * zz * zz * zz * 3.0;
            (num, den, gamma(m / 2.0 + 3.0))
        }
    };
    dd::div(num, den).hi() * g
}

/// Closed form of `H_{2,1}`, `H_{3,1}`, `H_{4,1}` at `(z; m)`, `z < 1`,
/// `m ≥ 2`; the points `z = 0` and `m = 2` are reached by extrapolation.
pub fn closed_form_h1(kind: H1Kind, z: f64, m: f64) -> Result<f64> {
    if !(z < 1.0) {
        return Err(Error::domain(format!("z must be < 1, got {z}")));
    }
    check_m(m)?;
    removable(m, 2.0, RADIUS_M, &|mm| removable(z, 0.0, RADIUS_Z, &|zz| Ok(h1_raw(kind, zz, mm))))
}

fn k_raw(y: f64, m: f64) -> f64 {
    let (yy, mm) = (dd(y), dd(m));
    let v = dd::powf(yy, dd(-m / 2.0));
    let ym1 = yy - 1.0;
    let num = ((mm * ym1 - yy * 4.0) + yy * (mm * ym1 + 4.0) * v) * -8.0;
    let den = (mm - 2.0) * mm * mm * (mm + 2.0) * ym1 * ym1 * ym1;
    dd::div(num, den).hi() * gamma(m / 2.0 + 2.0)
}

fn k_closed(y: f64, m: f64) -> Result<f64> {
    removable(m, 2.0, RADIUS_M, &|mm| removable(y, 1.0, RADIUS_Z, &|yy| Ok(k_raw(yy, mm))))
}

fn h_raw(y1: f64, y2: f64, m: f64) -> f64 {
    let (a, b, mm) = (dd(y1), dd(y2), dd(m));
    let ab = a * b;
    let v1 = dd::powf(a, dd(-m / 2.0));
    let v12 = dd::powf(ab, dd(-m / 2.0));
    let (am1, bm1, abm1) = (a - 1.0, b - 1.0, ab - 1.0);
    let half_m = mm / 2.0;
    let t1 = v1 * abm1 * abm1 * abm1 * 2.0;
    let t2 = bm1 * bm1 * (half_m * am1 * abm1 + a * (dd(1.0) - a * 2.0) * b + 1.0) * 2.0;
    let t3 = am1 * am1 * b * v12 * (half_m * bm1 * abm1 + a * b * b + b - 2.0) * 2.0;
    // overall 8/((m-2) m²)
    let den = am1 * am1 * bm1 * bm1 * abm1 * abm1 * abm1 * (mm - 2.0) * mm * mm;
    dd::div((t1 + t2 - t3) * 8.0, den).hi() * gamma(m / 2.0 + 1.0)
}

fn h_closed(y1: f64, y2: f64, m: f64) -> Result<f64> {
    removable(m, 2.0, RADIUS_M, &|mm| {
        removable(y1, 1.0, RADIUS_H, &|a| {
            removable(y2, 1.0 / a, RADIUS_H / a, &|b| removable(b, 1.0, RADIUS_H, &|b| Ok(h_raw(a, b, mm))))
        })
    })
}

/// `T(y)` at `m = 2` by its definition and by the simplified `₂F₁` form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TValues {
    pub definitional: f64,
    pub simplified: f64,
}

/// `K_{Δ_k}(1; 2)`.
pub fn k_at_one() -> Result<f64> {
    k_delta(1.0, 2.0, SpectralRoute::HAlpha)
}

/// `T(y) = -K(1) (y⁻¹ - 1)/(y - 1) + H(y, y⁻¹)` and
/// `T(y) = K(1) (y⁻¹ - ₂F₁(3, 1; 5; 1 - y))` at `m = 2`.
pub fn t_function(y: f64) -> Result<TValues> {
    check_y(y)?;
    let k1 = k_at_one()?;
    // (y⁻¹ - 1)/(y - 1) = -1/y
    let definitional = k1 / y + h_delta_reciprocal(y, 2.0)?;
    let simplified = k1 * (1.0 / y - gauss_2f1(GaussParams::new(3.0, 1.0, 5.0), 1.0 - y, TOL)?);
    Ok(TValues { definitional, simplified })
}

/// `max_y |T(y) + y⁻² T(y⁻¹)|` over the grid, using the definitional form.
pub fn gauss_bonnet_residual(y_grid: &[f64]) -> Result<f64> {
    let mut worst = 0.0f64;
    for &y in y_grid {
        let r = t_function(y)?.definitional + t_function(1.0 / y)?.definitional / (y * y);
        worst = worst.max(r.abs());
    }
    Ok(worst)
}

/// Both sides of the functional relation between `K` and `H`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CmSides {
    /// `-H(y₁, y₂; m)`
    pub lhs: f64,
    /// `y₁^{-m/2-2} K[y₁⁻¹, y₂] - (y₁y₂)^{-m/2-2} K[(y₁y₂)⁻¹, y₂⁻¹] - K[y₁y₂, y₁]`
    pub rhs: f64,
}

impl CmSides {
    pub fn residual(&self) -> f64 {
        (self.lhs - self.rhs).abs()
    }
}

pub fn cm_sides(y1: f64, y2: f64, m: f64, route: SpectralRoute) -> Result<CmSides> {
    check_y(y1)?;
    check_y(y2)?;
    check_m(m)?;
    // derivative oracle is route independent
    let k = WithDerivatives { f: |y| k_delta(y, m, route), d: |y, k| k_delta_derivative(y, m, k) };
    let dd2 = |a: f64, b: f64| divdiff(&k, &NodeList::simple(&[a, b])?);
    let p = -m / 2.0 - 2.0;
    let y12 = y1 * y2;
    let rhs = y1.powf(p) * dd2(1.0 / y1, y2)? - y12.powf(p) * dd2(1.0 / y12, 1.0 / y2)? - dd2(y12, y1)?;
    Ok(CmSides { lhs: -h_delta(y1, y2, m, route)?, rhs })
}

/// `|-H(y₁, y₂; m) - RHS|`.
pub fn cm_residual(y1: f64, y2: f64, m: f64, route: SpectralRoute) -> Result<f64> {
    Ok(cm_sides(y1, y2, m, route)?.residual())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::coeff::rational;

    fn rf(n: i64) -> RatFunc {
        RatFunc::from_rational(rational(n, 1))
    }

    #[test]
    fn rearrange_examples() {
        let word = vec![
            Generator::B0(2),
            Generator::K(1),
            Generator::GradK(0),
            Generator::B0(2),
            Generator::K(1),
            Generator::GradK(0),
            Generator::B0(1),
        ];
        let p = SymbolPoly::new(vec![symbol::SymbolTerm::new(rf(1), vec![], vec![], 6, word)]);
        let r = rearrange(&p, 4.0, 2).unwrap();
        assert_eq!(r[0].alpha, MultiIndex(vec![2, 2, 1]));
        assert_eq!(r[0].modular_multiplier, vec![1, 0]);
        assert_eq!(r[0].operand, Some(Operand::TraceGradGrad));
        assert_eq!(r[0].k_exponent, -3.0);

        let lone = SymbolPoly::new(vec![symbol::SymbolTerm::new(rf(1), vec![], vec![], 0, vec![Generator::B0(1)])]);
        let r = rearrange(&lone, 4.0, 0).unwrap();
        assert_eq!(r[0].alpha, MultiIndex(vec![1]));
        assert_eq!(r[0].operand, None);
        assert_eq!(r[0].alpha.d(4.0, 0), 1.0);
    }

    #[test]
    fn rearrange_errors() {
        let bad = SymbolPoly::new(vec![symbol::SymbolTerm::new(
            rf(1),
            vec![],
            vec![],
            4,
            vec![Generator::B0(1), Generator::GradK(0), Generator::GradK(0), Generator::B0(1)],
        )]);
        assert!(matches!(rearrange(&bad, 3.0, 2), Err(Error::MalformedWord(_))));
        let off = SymbolPoly::new(vec![symbol::SymbolTerm::new(
            rf(1),
            vec![],
            vec![],
            4,
            vec![Generator::B0(2), Generator::HessK(0, 0), Generator::B0(1)],
        )]);
        assert!(matches!(rearrange(&off, 3.0, 2), Err(Error::HomogeneityMismatch(_))));
    }

    #[test]
    fn pipeline_k_exponents() {
        assert_eq!(k_combo().k_exponent_const, 0);
        assert_eq!(h_combo().k_exponent_const, -1);
        assert_eq!(k_combo().terms.len(), 2);
        assert_eq!(h_combo().terms.len(), 3);
    }

    #[test]
    fn k_at_one_is_one_sixth() {
        for route in SpectralRoute::ALL {
            let v = k_delta(1.0, 2.0, route).unwrap();
            assert!((v - 1.0 / 6.0).abs() < 1e-12, "{route:?}: {v}");
        }
    }

    #[test]
    fn k_routes_agree() {
        for &m in &[2.0, 2.5, 3.0, 4.0, 5.5, 10.0] {
            for &y in &[0.2, 0.7, 1.0, 1.0005, 2.0, 5.0] {
                let a = k_delta(y, m, SpectralRoute::HAlpha).unwrap();
                let b = k_delta(y, m, SpectralRoute::Hyper).unwrap();
                let c = k_delta(y, m, SpectralRoute::Closed).unwrap();
                let s = a.abs().max(1.0);
                assert!((a - b).abs() < 1e-10 * s && (a - c).abs() < 1e-10 * s, "m={m} y={y}: {a} {b} {c}");
            }
        }
    }

    #[test]
    fn h_routes_agree() {
        for &m in &[2.0, 3.0, 4.0, 10.0] {
            for &(y1, y2) in &[(0.8, 1.25), (0.5, 1.5), (2.0, 0.7), (1.0, 1.0), (1.3, 1.0), (3.0, 3.0), (1.002, 0.999)]
            {
                let a = h_delta(y1, y2, m, SpectralRoute::HAlpha).unwrap();
                let b = h_delta(y1, y2, m, SpectralRoute::Hyper).unwrap();
                let c = h_delta(y1, y2, m, SpectralRoute::Closed).unwrap();
                let s = a.abs().max(1.0);
                assert!((a - b).abs() < 1e-8 * s && (a - c).abs() < 1e-8 * s, "m={m} ({y1},{y2}): {a} {b} {c}");
            }
        }
    }

    #[test]
    fn appell_form_weight_is_two() {
        let (z1, z2, m) = (0.3, -0.4, 3.0);
        let reference = h_combo().eval(&[z1, z2], m, HRoute::Reduced, TOL).unwrap();
        assert!((h_hyper(z1, z2, m, 2.0).unwrap() - reference).abs() < 1e-10);
        assert!((h_hyper(z1, z2, m, 1.0).unwrap() - reference).abs() > 1e-2);
    }

    #[test]
    fn closed_h1_against_reduction() {
        for kind in H1Kind::ALL {
            for &(z, m) in &[(0.3, 4.0), (0.0, 4.0), (-2.0, 3.0), (0.2, 6.0), (0.5, 2.0), (1e-5, 2.5)] {
                let c = closed_form_h1(kind, z, m).unwrap();
                let r = h_family::h_alpha_reduced(&kind.alpha(), &HFamilyArgs::new(vec![z], m), 1e-14).unwrap();
                assert!((c - r).abs() < 1e-10 * r.abs().max(1.0), "{kind:?} z={z} m={m}: {c} vs {r}");
            }
        }
        assert!((closed_form_h1(H1Kind::H21, 0.0, 4.0).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn reciprocal_collapse() {
        for &y in &[0.4, 1.0, 2.5] {
            let a = h_delta_reciprocal(y, 3.0).unwrap();
            let b = h_combo().eval(&[1.0 - y, 0.0], 3.0, HRoute::Quadrature, 1e-12).unwrap();
            assert!((a - b).abs() < 1e-9, "{y}: {a} {b}");
        }
    }

    #[test]
    fn t_function_forms() {
        let t1 = t_function(1.0).unwrap();
        assert!(t1.definitional.abs() < 1e-13 && t1.simplified.abs() < 1e-13);
        for &y in &[0.3, 0.7, 2.0, 3.3] {
            let t = t_function(y).unwrap();
            assert!((t.definitional - t.simplified).abs() < 1e-10, "{y}: {t:?}");
        }
        let a = t_function(0.5).unwrap().simplified;
        let b = t_function(2.0).unwrap().simplified;
        assert!((a + 4.0 * b).abs() < 1e-12);
        assert!(gauss_bonnet_residual(&[0.3, 0.5, 1.0, 2.0, 3.3]).unwrap() < 1e-10);
    }

    #[test]
    fn cm_relation_samples() {
        for route in SpectralRoute::ALL {
            for &(y1, y2, m) in &[(0.7, 1.6, 3.0), (2.0, 0.5, 4.0), (1.4, 1.0, 3.0), (0.6, 0.6, 2.0)] {
                let r = cm_residual(y1, y2, m, route).unwrap();
                assert!(r < 1e-8, "{route:?} ({y1},{y2},{m}): {r}");
            }
        }
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(k_delta(0.0, 3.0, SpectralRoute::HAlpha), Err(Error::Domain(_))));
        assert!(matches!(h_delta(1.0, -1.0, 3.0, SpectralRoute::Closed), Err(Error::Domain(_))));
        assert!(matches!(closed_form_h1(H1Kind::H31, 1.0, 3.0), Err(Error::Domain(_))));
    }
}
