//! Gauss hypergeometric function `₂F₁` on the real branch `z < 1`.
//!
//! Evaluation dispatches on the argument:
//!
//! * `|z| ≤ 0.5`: the defining power series;
//! * `z < -0.5`: Pfaff transformation to `w = z/(z-1) ∈ (1/3, 1)`;
//! * `0.5 < z < 1`: the Euler transformation `(1-z)^{c-a-b} ₂F₁(c-a, c-b; c; z)`
//!   when it yields the faster-decaying series, else the plain series.
//!
//! Besides evaluation the module exposes the contiguity and transformation
//! algebra as residual checks, each of which should vanish numerically.

use crate::error::{Error, Result};
use crate::quadrature;

/// Default relative tolerance for series evaluations.
pub const SERIES_TOL: f64 = 1e-12;
/// Default relative tolerance for quadrature evaluations.
pub const QUAD_TOL: f64 = 1e-10;
/// Hard cap on the number of series terms.
pub const MAX_SERIES_TERMS: usize = 1_000_000;

/// Compensated (Kahan–Babuška) accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn new(init: f64) -> Self {
        Self { sum: init, comp: 0.0 }
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn is_non_positive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

/// Gamma function: exact factorials for small positive integers, Lanczos
/// approximation otherwise, reflection for `x < 1/2`.
pub fn gamma(x: f64) -> f64 {
    if is_non_positive_integer(x) {
        return f64::NAN;
    }
    if x == x.round() && x > 0.0 && x <= 171.0 {
        let mut acc = 1.0;
        let mut k = 2.0;
        while k < x {
            acc *= k;
            k += 1.0;
        }
        return acc;
    }
    if x < 0.5 {
        return std::f64::consts::PI / ((std::f64::consts::PI * x).sin() * gamma(1.0 - x));
    }
    if x > 171.7 {
        return f64::INFINITY;
    }
    let x = x - 1.0;
    let t = x + LANCZOS_G + 0.5;
    let mut series = LANCZOS_COEF[0];
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        series += c / (x + i as f64);
    }
    (2.0 * std::f64::consts::PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * series
}

/// `ln |Γ(x)|`.
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        let s = (std::f64::consts::PI * x).sin().abs();
        return std::f64::consts::PI.ln() - s.ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let t = x + LANCZOS_G + 0.5;
    let mut series = LANCZOS_COEF[0];
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        series += c / (x + i as f64);
    }
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + series.ln()
}

/// Euler beta function `Γ(a)Γ(b)/Γ(a+b)`.
pub fn beta_fn(a: f64, b: f64) -> f64 {
    let (ga, gb, gab) = (gamma(a), gamma(b), gamma(a + b));
    if ga.is_finite() && gb.is_finite() && gab.is_finite() {
        ga * gb / gab
    } else {
        (ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)).exp()
    }
}

/// Rising factorial `(a)_n` as a running product.
pub fn pochhammer(a: f64, n: usize) -> f64 {
    (0..n).fold(1.0, |acc, k| acc * (a + k as f64))
}

/// Parameters `(a, b; c)` of `₂F₁`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl GaussParams {
    pub fn new(a: f64, b: f64, c: f64) -> Self {
        Self { a, b, c }
    }

    pub fn validate(&self) -> Result<()> {
        if is_non_positive_integer(self.c) {
            return Err(Error::PoleAtC(self.c));
        }
        if !(self.a.is_finite() && self.b.is_finite() && self.c.is_finite()) {
            return Err(Error::domain("non-finite 2F1 parameter"));
        }
        Ok(())
    }

    fn shifted(&self, da: f64, db: f64, dc: f64) -> Self {
        Self::new(self.a + da, self.b + db, self.c + dc)
    }
}

/// Plain power series, relative tolerance with a geometric tail bound.
pub(crate) fn series_2f1(a: f64, b: f64, c: f64, z: f64, tol: f64) -> Result<f64> {
    let inner_tol = (tol * 1e-2).max(1e-17);
    let mut sum = KahanSum::new(1.0);
    let mut term = 1.0;
    for n in 0..MAX_SERIES_TERMS {
        let nf = n as f64;
        term *= (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * z;
        if term == 0.0 {
            return Ok(sum.value());
        }
        sum.add(term);
        let next = ((a + nf + 1.0) * (b + nf + 1.0) / ((c + nf + 1.0) * (nf + 2.0)) * z).abs();
        let bound = next.max(z.abs());
        if bound < 1.0 && term.abs() * bound / (1.0 - bound) <= inner_tol * sum.value().abs() {
            return Ok(sum.value());
        }
    }
    Err(Error::NoConvergence { context: "2F1 series", iterations: MAX_SERIES_TERMS })
}

/// `₂F₁(a, b; c; z)` for real `z < 1`.
pub fn gauss_2f1(p: GaussParams, z: f64, tol: f64) -> Result<f64> {
    p.validate()?;
    if !(z < 1.0) {
        return Err(Error::domain(format!("2F1 argument z = {z} must satisfy z < 1")));
    }
    if z == 0.0 {
        return Ok(1.0);
    }
    let GaussParams { a, b, c } = p;
    if z.abs() <= 0.5 {
        series_2f1(a, b, c, z, tol)
    } else if z < -0.5 {
        let w = z / (z - 1.0);
        Ok((1.0 - z).powf(-a) * near_one(a, c - b, c, w, tol)?)
    } else {
        near_one(a, b, c, z, tol)
    }
}

/// `0 < z < 1`: pick between the plain and the Euler-transformed series by
/// the decay exponent of their terms (`n^{a+b-c-1}` vs `n^{c-a-b-1}`).
fn near_one(a: f64, b: f64, c: f64, z: f64, tol: f64) -> Result<f64> {
    if z <= 0.5 {
        return series_2f1(a, b, c, z, tol);
    }
    if a + b > c {
        Ok((1.0 - z).powf(c - a - b) * series_2f1(c - a, c - b, c, z, tol)?)
    } else {
        series_2f1(a, b, c, z, tol)
    }
}

/// Convenience wrapper with the default series tolerance.
pub fn hyp2f1(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    gauss_2f1(GaussParams::new(a, b, c), z, SERIES_TOL)
}

/// `d^k/dz^k ₂F₁(a, b; c; z) = (a)_k (b)_k / (c)_k · ₂F₁(a+k, b+k; c+k; z)`.
pub fn gauss_2f1_derivative(p: GaussParams, z: f64, k: usize, tol: f64) -> Result<f64> {
    let factor = pochhammer(p.a, k) * pochhammer(p.b, k) / pochhammer(p.c, k);
    if factor == 0.0 {
        return Ok(0.0);
    }
    let kf = k as f64;
    Ok(factor * gauss_2f1(p.shifted(kf, kf, kf), z, tol)?)
}

/// Euler integral `Γ(c)/(Γ(b)Γ(c-b)) ∫_0^1 t^{b-1}(1-t)^{c-b-1}(1-zt)^{-a} dt`,
/// with the endpoint powers absorbed by a Gauss–Jacobi rule.
pub fn gauss_2f1_euler_integral(p: GaussParams, z: f64, tol: f64) -> Result<f64> {
    p.validate()?;
    if !(p.c > p.b && p.b > 0.0) {
        return Err(Error::domain(format!("Euler integral needs c > b > 0, got b = {}, c = {}", p.b, p.c)));
    }
    if !(z < 1.0) {
        return Err(Error::domain(format!("2F1 argument z = {z} must satisfy z < 1")));
    }
    let integral = quadrature::jacobi_integrate(p.b - 1.0, p.c - p.b - 1.0, |t| (1.0 - z * t).powf(-p.a), tol)?;
    Ok(integral / beta_fn(p.b, p.c - p.b))
}

/// Kummer's `₁F₁(a; b; z) = Σ (a)_n / ((b)_n n!) zⁿ`. Negative `z` goes
/// through `₁F₁(a; b; z) = e^z ₁F₁(b-a; b; -z)` so the series has no
/// cancellation.
pub fn kummer_1f1(a: f64, b: f64, z: f64, tol: f64) -> Result<f64> {
    if b <= 0.0 && b.fract() == 0.0 {
        return Err(Error::PoleAtC(b));
    }
    if !z.is_finite() {
        return Err(Error::domain(format!("1F1 argument must be finite, got {z}")));
    }
    if z < 0.0 {
        return Ok(z.exp() * kummer_1f1(b - a, b, -z, tol)?);
    }
    let mut sum = KahanSum::new(1.0);
    let mut term = 1.0;
    for n in 0..MAX_SERIES_TERMS {
        let nf = n as f64;
        term *= (a + nf) / (b + nf) * z / (nf + 1.0);
        sum.add(term);
        if term == 0.0 || (nf > z && term.abs() <= tol * sum.value().abs()) {
            return Ok(sum.value());
        }
    }
    Err(Error::NoConvergence { context: "1F1 series", iterations: MAX_SERIES_TERMS })
}

/// `₁F₁(a; b; z) = Γ(b)/(Γ(a)Γ(b-a)) ∫_0^1 e^{zt} t^{a-1}(1-t)^{b-a-1} dt`,
/// `b > a > 0`.
pub fn kummer_1f1_integral(a: f64, b: f64, z: f64, tol: f64) -> Result<f64> {
    if !(b > a && a > 0.0) {
        return Err(Error::domain(format!("1F1 integral needs b > a > 0, got a = {a}, b = {b}")));
    }
    let integral = quadrature::jacobi_integrate(a - 1.0, b - a - 1.0, |t| (z * t).exp(), tol)?;
    Ok(integral / beta_fn(a, b - a))
}

/// The six right-hand expressions for `z F'(z)` that involve contiguous
/// functions; pairing any two gives one of Gauss' 15 relations.
pub fn contiguous_expressions(p: GaussParams, z: f64) -> Result<[f64; 6]> {
    let GaussParams { a, b, c } = p;
    let f = |da, db, dc| gauss_2f1(p.shifted(da, db, dc), z, 1e-15);
    let base = f(0.0, 0.0, 0.0)?;
    Ok([
        a * (f(1.0, 0.0, 0.0)? - base),
        b * (f(0.0, 1.0, 0.0)? - base),
        (c - 1.0) * (f(0.0, 0.0, -1.0)? - base),
        ((c - a) * f(-1.0, 0.0, 0.0)? + (a - c + b * z) * base) / (1.0 - z),
        ((c - b) * f(0.0, -1.0, 0.0)? + (b - c + a * z) * base) / (1.0 - z),
        z * ((c - a) * (c - b) * f(0.0, 0.0, 1.0)? + c * (a + b - c) * base) / (c * (1.0 - z)),
    ])
}

/// Residuals `E_i - E_j` of all 15 contiguous relations, scaled by
/// `max(1, |F|, |E_i|, |E_j|)` so they are comparable across magnitudes.
pub fn contiguous_residuals(p: GaussParams, z: f64) -> Result<Vec<f64>> {
    if !(z > -1.0 && z < 1.0) {
        return Err(Error::domain(format!("contiguous check needs z in (-1, 1), got {z}")));
    }
    for dc in [-1.0, 0.0, 1.0] {
        p.shifted(0.0, 0.0, dc).validate()?;
    }
    let exprs = contiguous_expressions(p, z)?;
    let scale_f = gauss_2f1(p, z, 1e-15)?.abs();
    let mut out = Vec::with_capacity(15);
    for i in 0..6 {
        for j in i + 1..6 {
            let scale = 1f64.max(scale_f).max(exprs[i].abs()).max(exprs[j].abs());
            out.push((exprs[i] - exprs[j]) / scale);
        }
    }
    Ok(out)
}

/// Residuals of the two Pfaff transformations and the Euler transformation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformResiduals {
    pub pfaff_a: f64,
    pub pfaff_b: f64,
    pub euler: f64,
}

impl TransformResiduals {
    pub fn max_abs(&self) -> f64 {
        self.pfaff_a.abs().max(self.pfaff_b.abs()).max(self.euler.abs())
    }
}

/// Scaled residuals of
/// `F = (1-z)^{-b} F(c-a, b; c; z/(z-1)) = (1-z)^{-a} F(a, c-b; c; z/(z-1))`
/// and `F = (1-z)^{c-a-b} F(c-a, c-b; c; z)`.
pub fn transform_check(p: GaussParams, z: f64) -> Result<TransformResiduals> {
    p.validate()?;
    let w = z / (z - 1.0);
    if !(z < 1.0 && w < 1.0) {
        return Err(Error::domain(format!("transforms need z < 1 and z/(z-1) < 1, got z = {z}")));
    }
    let GaussParams { a, b, c } = p;
    let tol = 1e-15;
    let f = gauss_2f1(p, z, tol)?;
    let scale = f.abs().max(1.0);
    let pf_b = (1.0 - z).powf(-b) * gauss_2f1(GaussParams::new(c - a, b, c), w, tol)?;
    let pf_a = (1.0 - z).powf(-a) * gauss_2f1(GaussParams::new(a, c - b, c), w, tol)?;
    let eu = (1.0 - z).powf(c - a - b) * gauss_2f1(GaussParams::new(c - a, c - b, c), z, tol)?;
    Ok(TransformResiduals { pfaff_a: (f - pf_b) / scale, pfaff_b: (f - pf_a) / scale, euler: (f - eu) / scale })
}

/// `|z(1-z)w'' + (c-(a+b+1)z)w' - ab·w|` for an arbitrary `w`, derivatives
/// by central differences with step `h`.
pub fn ode_residual_of(w: impl Fn(f64) -> Result<f64>, p: GaussParams, z: f64, h: f64) -> Result<f64> {
    let GaussParams { a, b, c } = p;
    let (wm, w0, wp) = (w(z - h)?, w(z)?, w(z + h)?);
    let d1 = (wp - wm) / (2.0 * h);
    let d2 = (wp - 2.0 * w0 + wm) / (h * h);
    Ok((z * (1.0 - z) * d2 + (c - (a + b + 1.0) * z) * d1 - a * b * w0).abs())
}

/// Hypergeometric ODE residual of `₂F₁` itself.
pub fn ode_residual(p: GaussParams, z: f64, h: f64) -> Result<f64> {
    if !(z > -0.9 && z < 0.9) {
        return Err(Error::domain(format!("ODE check needs z in (-0.9, 0.9), got {z}")));
    }
    ode_residual_of(|x| gauss_2f1(p, x, 1e-15), p, z, h)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn gamma_matches_known_values() {
        assert_eq!(gamma(5.0), 24.0);
        assert!(close(gamma(0.5), std::f64::consts::PI.sqrt(), 1e-14));
        assert!(close(gamma(-1.5), 4.0 * std::f64::consts::PI.sqrt() / 3.0, 1e-13));
        assert!(close(gamma(7.3), ln_gamma(7.3).exp(), 1e-13));
        assert!(gamma(-2.0).is_nan());
    }

    #[test]
    fn modified_log_value() {
        let v = hyp2f1(1.0, 1.0, 2.0, 0.5).unwrap();
        assert!(close(v, 2.0 * 2f64.ln(), 1e-14));
    }

    #[test]
    fn kummer_values() {
        assert!(close(kummer_1f1(1.0, 2.0, 1.5, 1e-15).unwrap(), (1.5f64.exp() - 1.0) / 1.5, 1e-14));
        assert!(close(kummer_1f1(2.5, 2.5, -3.0, 1e-15).unwrap(), (-3.0f64).exp(), 1e-14));
        assert!(close(kummer_1f1(-2.0, 1.0, 3.0, 1e-15).unwrap(), 1.0 - 6.0 + 4.5, 1e-14));
        assert!(matches!(kummer_1f1(1.0, -1.0, 0.5, 1e-15), Err(Error::PoleAtC(_))));
        for (a, b, z) in [(0.5, 2.0, 3.0), (2.0, 5.0, -4.0), (1.5, 1.7, 0.2), (3.0, 7.5, -12.0)] {
            let s = kummer_1f1(a, b, z, 1e-15).unwrap();
            let q = kummer_1f1_integral(a, b, z, 1e-13).unwrap();
            assert!(close(s, q, 1e-11), "{a} {b} {z}: {s} vs {q}");
        }
    }

    #[test]
    fn kummer_is_the_two_point_g() {
        use crate::h_family::{g_alpha_simplex, MultiIndex};
        for (a, b, s0, s1) in [(2u32, 3u32, 0.7, 1.9), (1, 1, 2.0, 0.5), (3, 2, 1.1, 1.1)] {
            let g = g_alpha_simplex(&MultiIndex::new(vec![a, b]).unwrap(), &[s0, s1], 1e-14).unwrap();
            let c = (a + b) as f64;
            let want = (-s1).exp() / gamma(c) * kummer_1f1(a as f64, c, s1 - s0, 1e-15).unwrap();
            assert!(close(g, want, 1e-13), "{g} vs {want}");
        }
    }

    #[test]
    fn binomial_collapse() {
        let v = hyp2f1(3.0, 2.0, 2.0, 0.5).unwrap();
        assert!(close(v, 8.0, 1e-14));
    }

    #[test]
    fn origin_is_exactly_one() {
        assert_eq!(hyp2f1(2.3, -1.1, 0.7, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn pole_and_domain_errors() {
        assert_eq!(hyp2f1(1.0, 1.0, -2.0, 0.1), Err(Error::PoleAtC(-2.0)));
        assert!(matches!(hyp2f1(1.0, 1.0, 2.0, 1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn terminating_series_is_a_polynomial() {
        // F(-2, b; c; z) = 1 - 2bz/c + b(b+1)z^2/(c(c+1))
        let (b, c, z) = (1.5, 2.5, 0.7);
        let exact = 1.0 - 2.0 * b * z / c + b * (b + 1.0) * z * z / (c * (c + 1.0));
        assert!(close(hyp2f1(-2.0, b, c, z).unwrap(), exact, 1e-14));
    }

    #[test]
    fn far_negative_argument_uses_pfaff() {
        // F(1,1;2;z) = -ln(1-z)/z
        for z in [-0.7, -3.0, -20.0] {
            let v = hyp2f1(1.0, 1.0, 2.0, z).unwrap();
            assert!(close(v, -(1.0 - z).ln() / z, 1e-13), "z = {z}");
        }
    }

    #[test]
    fn euler_integral_examples() {
        let v = gauss_2f1_euler_integral(GaussParams::new(1.0, 1.0, 2.0), 0.5, 1e-12).unwrap();
        assert!(close(v, 2.0 * 2f64.ln(), 1e-12));
        let v = gauss_2f1_euler_integral(GaussParams::new(2.0, 1.0, 3.0), 0.0, 1e-12).unwrap();
        assert!(close(v, 1.0, 1e-13));
        let p = GaussParams::new(2.5, 1.2, 4.1);
        let q = gauss_2f1_euler_integral(p, 0.3, 1e-12).unwrap();
        assert!(close(q, gauss_2f1(p, 0.3, 1e-14).unwrap(), 1e-10));
        assert!(gauss_2f1_euler_integral(GaussParams::new(1.0, 2.0, 2.0), 0.1, 1e-10).is_err());
    }

    #[test]
    fn contiguous_examples() {
        for (p, z) in [(GaussParams::new(3.0, 4.0, 5.0), 0.3), (GaussParams::new(2.0, 2.0, 3.0), -0.4)] {
            let r = contiguous_residuals(p, z).unwrap();
            assert_eq!(r.len(), 15);
            assert!(r.iter().all(|x| x.abs() < 1e-10), "{r:?}");
        }
        let r = contiguous_residuals(GaussParams::new(1.0, 1.0, 2.0), 0.0).unwrap();
        assert!(r.iter().all(|&x| x == 0.0));
        assert!(matches!(contiguous_residuals(GaussParams::new(1.0, 1.0, 1.0), 0.2), Err(Error::PoleAtC(_))));
    }

    #[test]
    fn transform_examples() {
        let r = transform_check(GaussParams::new(2.0, 3.0, 4.0), 0.5).unwrap();
        assert!(r.max_abs() < 1e-10);
        let r = transform_check(GaussParams::new(1.5, 0.7, 2.2), -2.0).unwrap();
        assert!(r.max_abs() < 1e-10);
        let r = transform_check(GaussParams::new(1.5, 0.7, 2.2), 0.0).unwrap();
        assert_eq!(r.max_abs(), 0.0);
    }

    #[test]
    fn ode_examples() {
        assert!(ode_residual(GaussParams::new(2.0, 3.0, 4.0), 0.2, 1e-4).unwrap() < 1e-6);
        assert!(ode_residual(GaussParams::new(1.0, 1.0, 2.0), 0.0, 1e-4).unwrap() < 1e-6);
        let p = GaussParams::new(1.5, -2.0, 3.0);
        let r = ode_residual_of(|_| Ok(1.0), p, 0.3, 1e-4).unwrap();
        assert!(close(r, 3.0, 1e-12));
    }

    #[test]
    fn derivative_relation() {
        let p = GaussParams::new(1.3, 2.1, 3.7);
        let h = 1e-4;
        let z = 0.35;
        let fd = (hyp2f1(p.a, p.b, p.c, z + h).unwrap() - hyp2f1(p.a, p.b, p.c, z - h).unwrap()) / (2.0 * h);
        let exact = gauss_2f1_derivative(p, z, 1, 1e-15).unwrap();
        assert!(close(fd, exact, 1e-7));
    }
}
