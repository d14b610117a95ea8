//! Appell `F₁`, `F₂` and Lauricella `F_D^{(n)}`.
//!
//! The multiple series are summed shell by shell in the total degree
//! `k = β₁ + … + β_n`. Every one of these series factors as
//! `Σ_k P(k) Σ_{|β| = k} Π_i t_i(β_i)`, so the inner shell sums are running
//! convolutions of one-variable sequences and cost `O(n k)` per shell.

use crate::error::{Error, Result};
use crate::quadrature::{self, dirichlet_mass};
use crate::special_fn::{self, GaussParams, KahanSum};

/// Parameters `(a; α₁, …, α_n; c)` of `F_D^{(n)}`.
#[derive(Debug, Clone, PartialEq)]
pub struct LauricellaParams {
    pub a: f64,
    pub alphas: Vec<f64>,
    pub c: f64,
}

impl LauricellaParams {
    pub fn new(a: f64, alphas: Vec<f64>, c: f64) -> Self {
        Self { a, alphas, c }
    }

    pub fn validate(&self) -> Result<()> {
        if self.c <= 0.0 && self.c == self.c.round() {
            return Err(Error::PoleAtC(self.c));
        }
        if self.alphas.is_empty() {
            return Err(Error::domain("Lauricella F_D needs n >= 1"));
        }
        Ok(())
    }
}

const MAX_SHELLS: usize = 20_000;

/// Sum `Σ_k P(k) C(k)` where `C` is the convolution of the sequences
/// `t_i(0) = 1, t_i(k+1) = t_i(k)·ratio_i(k)` and `P(0) = 1,
/// P(k+1) = P(k)·outer(k)`. `rho` bounds the geometric decay of the shells.
fn shell_series(
    outer: impl Fn(f64) -> f64,
    ratios: &[&dyn Fn(f64) -> f64],
    rho: f64,
    tol: f64,
    context: &'static str,
) -> Result<f64> {
    let n = ratios.len();
    let inner_tol = (tol * 1e-2).max(1e-17);
    let tail_factor = if rho < 1.0 { 1.0 / (1.0 - rho) } else { f64::INFINITY };
    // seqs[i] holds t_i, partial[i] the convolution of t_0..t_i.
    let mut seqs: Vec<Vec<f64>> = vec![vec![1.0]; n];
    let mut partial: Vec<Vec<f64>> = vec![vec![1.0]; n];
    let mut prefactor = 1.0;
    let mut sum = KahanSum::new(1.0);
    let mut quiet = 0;
    for k in 1..MAX_SHELLS {
        let kf = (k - 1) as f64;
        prefactor *= outer(kf);
        for i in 0..n {
            let prev = *seqs[i].last().unwrap();
            seqs[i].push(prev * ratios[i](kf));
        }
        partial[0].push(seqs[0][k]);
        for i in 1..n {
            let mut acc = KahanSum::default();
            for s in 0..=k {
                acc.add(partial[i - 1][s] * seqs[i][k - s]);
            }
            partial[i].push(acc.value());
        }
        let shell = prefactor * partial[n - 1][k];
        sum.add(shell);
        if prefactor == 0.0 {
            return Ok(sum.value());
        }
        if shell.abs() * tail_factor <= inner_tol * sum.value().abs() {
            quiet += 1;
            if quiet >= 3 {
                return Ok(sum.value());
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::NoConvergence { context, iterations: MAX_SHELLS })
}

/// `F_D^{(n)}` by its defining series; converges for `max |z_i| < 1`.
pub fn lauricella_series(p: &LauricellaParams, zs: &[f64], tol: f64) -> Result<f64> {
    p.validate()?;
    check_len(p, zs)?;
    let rho = zs.iter().fold(0.0f64, |m, z| m.max(z.abs()));
    if rho >= 1.0 {
        return Err(Error::domain("F_D series needs max |z_i| < 1"));
    }
    let (a, c) = (p.a, p.c);
    let closures: Vec<Box<dyn Fn(f64) -> f64>> = p
        .alphas
        .iter()
        .zip(zs)
        .map(|(&al, &z)| Box::new(move |k: f64| (al + k) * z / (k + 1.0)) as Box<dyn Fn(f64) -> f64>)
        .collect();
    let refs: Vec<&dyn Fn(f64) -> f64> = closures.iter().map(|b| b.as_ref()).collect();
    shell_series(|k| (a + k) / (c + k), &refs, rho, tol, "Lauricella series")
}

/// `Γ(c)/(Γ(a)Γ(c-a)) ∫_0^1 t^{a-1}(1-t)^{c-a-1} Π(1 - z_i t)^{-α_i} dt`.
pub fn lauricella_line_integral(p: &LauricellaParams, zs: &[f64], tol: f64) -> Result<f64> {
    p.validate()?;
    check_len(p, zs)?;
    if !(p.c > p.a && p.a > 0.0) {
        return Err(Error::domain("single-integral representation needs c > a > 0"));
    }
    let integral = quadrature::jacobi_integrate(
        p.a - 1.0,
        p.c - p.a - 1.0,
        |t| p.alphas.iter().zip(zs).map(|(al, z)| (1.0 - z * t).powf(-al)).product(),
        tol,
    )?;
    Ok(integral / special_fn::beta_fn(p.a, p.c - p.a))
}

/// `Γ(c) ∫_{Δⁿ} ω_{α̃}(u)(1 - z·u)^{-a} du` with `α̃₀ = c - Σα_i`.
pub fn lauricella_simplex_integral(p: &LauricellaParams, zs: &[f64], tol: f64) -> Result<f64> {
    p.validate()?;
    check_len(p, zs)?;
    let mut exps = Vec::with_capacity(zs.len() + 1);
    exps.push(p.c - p.alphas.iter().sum::<f64>());
    exps.extend_from_slice(&p.alphas);
    if exps.iter().any(|&e| !(e > 0.0)) {
        return Err(Error::domain("simplex representation needs α_i > 0 and c > Σα_i"));
    }
    let integral = quadrature::simplex_integrate(
        &exps,
        |u| (1.0 - u.iter().zip(zs).map(|(u, z)| u * z).sum::<f64>()).powf(-p.a),
        tol,
    )?;
    Ok(integral / dirichlet_mass(&exps))
}

fn check_len(p: &LauricellaParams, zs: &[f64]) -> Result<()> {
    if p.alphas.len() != zs.len() {
        return Err(Error::domain(format!("{} parameters α_i but {} arguments", p.alphas.len(), zs.len())));
    }
    if zs.iter().any(|&z| !(z < 1.0)) {
        return Err(Error::domain(format!("F_D arguments must be < 1, got {zs:?}")));
    }
    Ok(())
}

/// Lauricella `F_D^{(n)}(a; α; c; z)` for real `z_i < 1`.
///
/// Small arguments (`Σ|z_i| < 0.8`) use the series; otherwise the single
/// integral when `c > a > 0`, the simplex integral when `c > Σα_i` with
/// `α_i > 0`, and finally the series again while it still converges.
pub fn lauricella_fd(p: &LauricellaParams, zs: &[f64], tol: f64) -> Result<f64> {
    p.validate()?;
    check_len(p, zs)?;
    if zs.iter().all(|&z| z == 0.0) {
        return Ok(1.0);
    }
    let l1: f64 = zs.iter().map(|z| z.abs()).sum();
    if l1 < 0.8 {
        return lauricella_series(p, zs, tol);
    }
    if p.c > p.a && p.a > 0.0 {
        return lauricella_line_integral(p, zs, tol);
    }
    if p.alphas.iter().all(|&a| a > 0.0) && p.c > p.alphas.iter().sum::<f64>() {
        return lauricella_simplex_integral(p, zs, tol);
    }
    if zs.len() == 1 {
        return special_fn::gauss_2f1(GaussParams::new(p.a, p.alphas[0], p.c), zs[0], tol);
    }
    lauricella_series(p, zs, tol)
}

/// Appell `F₁(a; b, b′; c; x, y)`.
#[allow(clippy::too_many_arguments)]
pub fn appell_f1(a: f64, b: f64, b2: f64, c: f64, x: f64, y: f64, tol: f64) -> Result<f64> {
    let p = LauricellaParams::new(a, vec![b, b2], c);
    p.validate()?;
    if !(x < 1.0 && y < 1.0) {
        return Err(Error::domain(format!("F1 needs x, y < 1, got ({x}, {y})")));
    }
    if x.abs() <= 0.4 && y.abs() <= 0.4 {
        return lauricella_series(&p, &[x, y], tol);
    }
    if b > 0.0 && b2 > 0.0 && c - b - b2 > 0.0 {
        let exps = [c - b - b2, b, b2];
        // Pfaff-type transform: exponent c - a in place of a.
        let (pre, a, x, y) = if (c - a).abs() < a.abs() {
            ((1.0 - x).powf(-b) * (1.0 - y).powf(-b2), c - a, x / (x - 1.0), y / (y - 1.0))
        } else {
            (1.0, a, x, y)
        };
        let integral = quadrature::simplex_integrate(&exps, |u| (1.0 - x * u[0] - y * u[1]).powf(-a), tol)?;
        return Ok(pre * integral / dirichlet_mass(&exps));
    }
    lauricella_fd(&p, &[x, y], tol)
}

/// Appell `F₂(a; b, b′; c, c′; x, y)` by its double series, `|x| + |y| < 1`.
#[allow(clippy::too_many_arguments)]
pub fn appell_f2(a: f64, b: f64, b2: f64, c: f64, c2: f64, x: f64, y: f64, tol: f64) -> Result<f64> {
    for cc in [c, c2] {
        if cc <= 0.0 && cc == cc.round() {
            return Err(Error::PoleAtC(cc));
        }
    }
    let rho = x.abs() + y.abs();
    if rho >= 1.0 {
        return Err(Error::domain(format!("F2 series needs |x| + |y| < 1, got {rho}")));
    }
    let tx = move |k: f64| (b + k) * x / ((c + k) * (k + 1.0));
    let ty = move |k: f64| (b2 + k) * y / ((c2 + k) * (k + 1.0));
    shell_series(|k| a + k, &[&tx, &ty], rho, tol, "Appell F2 series")
}

/// Right-hand side of the reduction of `F₂(q+1; a, p+1; b, p+2; x, y)` to
/// Gauss functions, for integers `0 ≤ p < q`.
pub fn f2_reduction_pq(q: u32, a: f64, p: u32, b: f64, x: f64, y: f64) -> Result<f64> {
    if p >= q {
        return Err(Error::domain(format!("reduction needs p < q, got p = {p}, q = {q}")));
    }
    if b <= 0.0 && b == b.round() {
        return Err(Error::PoleAtC(b));
    }
    if x.abs() + y.abs() >= 1.0 {
        return Err(Error::domain("reduction needs |x| + |y| < 1"));
    }
    if y == 0.0 {
        return Err(Error::domain("reduction formula is singular at y = 0"));
    }
    let tol = 1e-15;
    let (pf, qf) = (p as f64, q as f64);
    let scale = (pf + 1.0) / y.powi(p as i32 + 1);
    let fact_p = special_fn::gamma(pf + 1.0);
    let lead = -fact_p / (qf * special_fn::pochhammer(1.0 - qf, p as usize))
        * special_fn::gauss_2f1(GaussParams::new(a, qf - pf, b), x, tol)?;
    let w = x / (1.0 - y);
    let mut outer = KahanSum::default();
    for k in 0..=p {
        let kf = k as f64;
        let mut inner = KahanSum::default();
        for m in 0..=(p - k) {
            let mf = m as f64;
            inner.add(
                (-x).powi(m as i32) * binomial(p - k, m) * special_fn::pochhammer(a, m as usize)
                    / special_fn::pochhammer(b, m as usize)
                    * special_fn::gauss_2f1(GaussParams::new(a + mf, qf - kf, b + mf), w, tol)?,
            );
        }
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        outer.add(sign * binomial(p, k) / ((qf - kf) * (1.0 - y).powf(qf - kf)) * inner.value());
    }
    Ok(scale * (lead + outer.value()))
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special_fn::hyp2f1;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn f1_reduces_to_gauss_on_axes() {
        let v = appell_f1(2.0, 1.0, 1.0, 4.0, 0.3, 0.0, 1e-13).unwrap();
        assert!(close(v, hyp2f1(2.0, 1.0, 4.0, 0.3).unwrap(), 1e-12));
        assert_eq!(appell_f1(2.0, 1.5, 0.5, 3.0, 0.0, 0.0, 1e-12).unwrap(), 1.0);
    }

    #[test]
    fn f1_on_diagonal() {
        let x = 0.4;
        let v = appell_f1(3.0, 1.0, 1.0, 5.0, x, x, 1e-13).unwrap();
        let exact = (1.0 - x).powf(5.0 - 3.0 - 2.0) * hyp2f1(2.0, 3.0, 5.0, x).unwrap();
        assert!(close(v, exact, 1e-11));
    }

    #[test]
    fn f1_quadrature_branch_matches_series() {
        let (a, b, b2, c) = (1.7, 0.8, 1.3, 4.5);
        let quad = appell_f1(a, b, b2, c, 0.6, -0.5, 1e-12).unwrap();
        let series = lauricella_series(&LauricellaParams::new(a, vec![b, b2], c), &[0.6, -0.5], 1e-14).unwrap();
        assert!(close(quad, series, 1e-10), "{quad} vs {series}");
    }

    #[test]
    fn f1_transformed_quadrature_matches_series() {
        let (a, b, b2, c) = (6.5, 1.0, 1.0, 4.0);
        let quad = appell_f1(a, b, b2, c, 0.5, 0.3, 1e-12).unwrap();
        let series = lauricella_series(&LauricellaParams::new(a, vec![b, b2], c), &[0.5, 0.3], 1e-14).unwrap();
        assert!(close(quad, series, 1e-10), "{quad} vs {series}");
        assert!(appell_f1(7.0, 1.0, 1.0, 4.0, 0.8, 0.96, 1e-12).unwrap().is_finite());
    }

    #[test]
    fn f1_as_divided_difference() {
        let (a, c, x, y) = (3.0, 5.0, 0.2, 0.6);
        let lhs = lauricella_fd(&LauricellaParams::new(a, vec![1.0, 1.0], c), &[x, y], 1e-13).unwrap();
        let rhs = (x * hyp2f1(a, 1.0, c, x).unwrap() - y * hyp2f1(a, 1.0, c, y).unwrap()) / (x - y);
        assert!(close(lhs, rhs, 1e-10));
    }

    #[test]
    fn fd_collapses() {
        let v = lauricella_fd(&LauricellaParams::new(2.0, vec![1.0], 3.0), &[0.4], 1e-14).unwrap();
        assert!(close(v, hyp2f1(2.0, 1.0, 3.0, 0.4).unwrap(), 1e-12));
        let v = lauricella_fd(&LauricellaParams::new(2.0, vec![1.0, 2.0, 0.5], 3.0), &[0.0; 3], 1e-12).unwrap();
        assert_eq!(v, 1.0);
    }

    #[test]
    fn fd_routes_agree_for_large_arguments() {
        let p = LauricellaParams::new(2.5, vec![1.0, 2.0, 1.0], 6.0);
        let z = [0.85, -0.4, 0.6];
        let line = lauricella_line_integral(&p, &z, 1e-13).unwrap();
        let simplex = lauricella_simplex_integral(&p, &z, 1e-12).unwrap();
        let series = lauricella_series(&p, &z, 1e-13).unwrap();
        assert!(close(line, series, 1e-10), "{line} {series}");
        assert!(close(simplex, series, 1e-9), "{simplex} {series}");
    }

    #[test]
    fn negative_integer_alpha_truncates() {
        // α = -1 in the only variable: F = 1 - a z / c
        let v = lauricella_series(&LauricellaParams::new(2.0, vec![-1.0], 3.0), &[0.6], 1e-14).unwrap();
        assert!(close(v, 1.0 - 2.0 * 0.6 / 3.0, 1e-15));
    }

    #[test]
    fn f2_at_origin_and_vs_square_quadrature() {
        assert_eq!(appell_f2(2.0, 1.0, 1.0, 3.0, 2.0, 0.0, 0.0, 1e-12).unwrap(), 1.0);
        let (a, b, b2, c, c2, x, y) = (2.0, 1.0, 1.0, 3.0, 2.0, 0.2, 0.3);
        let ru = crate::quadrature::gauss_jacobi(40, b - 1.0, c - b - 1.0);
        let rv = crate::quadrature::gauss_jacobi(40, b2 - 1.0, c2 - b2 - 1.0);
        let mut acc = 0.0;
        for (u, wu) in ru.nodes.iter().zip(&ru.weights) {
            for (v, wv) in rv.nodes.iter().zip(&rv.weights) {
                acc += wu * wv * (1.0 - x * u - y * v).powf(-a);
            }
        }
        let oracle = acc / (special_fn::beta_fn(b, c - b) * special_fn::beta_fn(b2, c2 - b2));
        assert!(close(appell_f2(a, b, b2, c, c2, x, y, 1e-13).unwrap(), oracle, 1e-10));
    }

    #[test]
    fn f1_from_f2() {
        let (a, b, b2, c, x, y) = (1.5, 0.7, 1.2, 3.0, 0.3, 0.5);
        let f1 = appell_f1(a, b, b2, c, x, y, 1e-13).unwrap();
        let f2 = appell_f2(b + b2, a, b2, c, b + b2, x, 1.0 - x / y, 1e-13).unwrap();
        assert!(close(f1, (x / y).powf(b2) * f2, 1e-10));
    }

    #[test]
    fn reduction_matches_series() {
        for (q, a, p, b, x, y) in [(1, 1.5, 0, 3.0, 0.2, 0.3), (2, 1.5, 0, 3.0, 0.2, 0.3), (2, 2.0, 1, 4.0, 0.1, 0.25)]
        {
            let pf = p as f64;
            let lhs = appell_f2(q as f64 + 1.0, a, pf + 1.0, b, pf + 2.0, x, y, 1e-14).unwrap();
            let rhs = f2_reduction_pq(q, a, p, b, x, y).unwrap();
            assert!(close(lhs, rhs, 1e-10), "q={q} p={p}: {lhs} vs {rhs}");
        }
        assert!(f2_reduction_pq(1, 1.0, 1, 2.0, 0.1, 0.2).is_err());
    }
}
