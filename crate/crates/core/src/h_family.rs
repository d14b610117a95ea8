//! The hypergeometric family
//! `H_α(z̄; m; j) = Γ(d+1) ∫_{Δⁿ} ω_α(u) (1 - z̄·u)^{-d-1} du`,
//! `d = |α| + (m-j)/2 - 2`, and the contour integrals `G_α` behind it.
//!
//! `H_α` is available by four independent routes:
//!
//! * [`h_alpha_quadrature`]: the simplex integral itself;
//! * [`h_alpha_via_fd`]: `Γ(d̃)/Γ(|α|) F_D^{(n)}(d̃; α₁..α_n; |α|; z̄)`, `d̃ = d + 1`;
//! * [`h_alpha_reduced`]: a divided difference of `z^{n-1} H_{α₀+n-1,1}(z)`
//!   over the nodes `z_l` repeated `α_l` times, with `H_{a,1}` a single `₂F₁`;
//! * [`h_even_m`]: a Taylor coefficient of an explicit product, for even `m ≥ 4`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::divided_diff::{self, DivDiffOptions, NodeList, WithDerivatives};
use crate::error::{Error, Result};
use crate::multivar_hyper::{self, LauricellaParams};
use crate::quadrature;
use crate::special_fn::{self, gamma, GaussParams};

/// Largest number of variables supported by the `H_α` routines.
pub const MAX_VARIABLES: usize = 4;

/// `α = (α₀, α₁, …, α_n)` with positive integer entries.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Result<Self> {
        if entries.is_empty() || entries.contains(&0) {
            return Err(Error::domain(format!("multi-index entries must be >= 1, got {entries:?}")));
        }
        Ok(Self(entries))
    }

    /// Number of variables `n`.
    pub fn n(&self) -> usize {
        self.0.len() - 1
    }

    pub fn abs(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `d(α; m; j) = |α| + (m - j)/2 - 2`.
    pub fn d(&self, m: f64, j: u32) -> f64 {
        self.abs() as f64 + (m - j as f64) / 2.0 - 2.0
    }

    /// `α + e_q`.
    pub fn raised(&self, q: usize) -> Self {
        let mut e = self.0.clone();
        e[q] += 1;
        Self(e)
    }

    fn exponents(&self) -> Vec<f64> {
        self.0.iter().map(|&a| a as f64).collect()
    }
}

impl std::fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|a| a.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Arguments `(z̄; m; j)` of `H_α`.
#[derive(Debug, Clone, PartialEq)]
pub struct HFamilyArgs {
    pub zbar: Vec<f64>,
    pub m: f64,
    pub j: u32,
}

impl HFamilyArgs {
    pub fn new(zbar: Vec<f64>, m: f64) -> Self {
        Self { zbar, m, j: 2 }
    }

    pub fn with_j(mut self, j: u32) -> Self {
        self.j = j;
        self
    }

    fn check(&self, alpha: &MultiIndex) -> Result<()> {
        if alpha.n() != self.zbar.len() {
            return Err(Error::domain(format!(
                "multi-index {alpha} needs {} arguments, got {}",
                alpha.n(),
                self.zbar.len()
            )));
        }
        if alpha.n() > MAX_VARIABLES {
            return Err(Error::domain(format!("at most {MAX_VARIABLES} variables are supported")));
        }
        if let Some(z) = self.zbar.iter().find(|z| !(**z < 1.0)) {
            return Err(Error::domain(format!("H_alpha arguments must be < 1, got {z}")));
        }
        let d = alpha.d(self.m, self.j);
        if !(d > -1.0) {
            return Err(Error::domain(format!("d(alpha; m; j) = {d} must exceed -1")));
        }
        Ok(())
    }
}

/// Evaluation routes for `H_α`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HRoute {
    Quadrature,
    ViaFd,
    Reduced,
    EvenM,
}

impl HRoute {
    pub const ALL: [HRoute; 4] = [HRoute::Quadrature, HRoute::ViaFd, HRoute::Reduced, HRoute::EvenM];

    pub fn name(self) -> &'static str {
        match self {
            HRoute::Quadrature => "quadrature",
            HRoute::ViaFd => "via-fd",
            HRoute::Reduced => "reduced",
            HRoute::EvenM => "even-m",
        }
    }
}

impl std::fmt::Display for HRoute {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for HRoute {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        HRoute::ALL
            .into_iter()
            .find(|r| r.name() == key)
            .ok_or_else(|| Error::domain(format!("unknown H_alpha route '{s}'")))
    }
}

/// `H_α` by the requested route.
pub fn h_alpha(alpha: &MultiIndex, args: &HFamilyArgs, route: HRoute, tol: f64) -> Result<f64> {
    match route {
        HRoute::Quadrature => h_alpha_quadrature(alpha, args, tol),
        HRoute::ViaFd => h_alpha_via_fd(alpha, args, tol),
        HRoute::Reduced => h_alpha_reduced(alpha, args, tol),
        HRoute::EvenM => {
            if args.j != 2 {
                return Err(Error::domain("even-m formula is stated for j = 2"));
            }
            let m = args.m;
            if m.fract() != 0.0 {
                return Err(Error::domain(format!("even-m formula needs integer m, got {m}")));
            }
            h_even_m(alpha, &args.zbar, m as u32)
        }
    }
}

/// `ω_α(u) = (1 - Σu)^{α₀-1} Π u_s^{α_s-1} / Π Γ(α_i)`.
pub fn weight_omega(alpha: &MultiIndex, u: &[f64]) -> Result<f64> {
    if u.len() != alpha.n() {
        return Err(Error::domain("point dimension does not match the multi-index"));
    }
    let rest = 1.0 - u.iter().sum::<f64>();
    let norm: f64 = alpha.0.iter().map(|&a| gamma(a as f64)).product();
    let mut w = rest.powi(alpha.0[0] as i32 - 1);
    for (ui, &a) in u.iter().zip(&alpha.0[1..]) {
        w *= ui.powi(a as i32 - 1);
    }
    Ok(w / norm)
}

fn omega_norm(alpha: &MultiIndex) -> f64 {
    alpha.0.iter().map(|&a| gamma(a as f64)).product()
}

/// `G_α(s̄) = ∫_{Δⁿ} ω_α(u) e^{-B_n(s̄, u)} du`,
/// `B_n = s₀(1 - Σu) + Σ s_l u_l`.
pub fn g_alpha_simplex(alpha: &MultiIndex, sbar: &[f64], tol: f64) -> Result<f64> {
    check_s(alpha, sbar)?;
    let s0 = sbar[0];
    let integral = quadrature::simplex_integrate(
        &alpha.exponents(),
        |u| {
            let b = s0 + u.iter().zip(&sbar[1..]).map(|(u, s)| u * (s - s0)).sum::<f64>();
            (-b).exp()
        },
        tol,
    )?;
    Ok(integral / omega_norm(alpha))
}

fn check_s(alpha: &MultiIndex, sbar: &[f64]) -> Result<()> {
    if sbar.len() != alpha.0.len() {
        return Err(Error::domain(format!(
            "multi-index {alpha} needs {} spectral values, got {}",
            alpha.0.len(),
            sbar.len()
        )));
    }
    if sbar.iter().any(|&s| !(s > 0.0)) {
        return Err(Error::domain("spectral values must be positive"));
    }
    Ok(())
}

/// `G_α(s̄) = (2πi)^{-1} ∫ e^{-λ} Π (s_j - λ)^{-α_j} dλ` along a wedge
/// `λ₀ + t e^{±iπ/4}`, `t ≥ 0`, whose vertex `λ₀ ≤ 0` sits at the real saddle
/// point of the integrand so that the two rays cancel as little as possible.
pub fn g_alpha_contour(alpha: &MultiIndex, sbar: &[f64], tol: f64) -> Result<f64> {
    check_s(alpha, sbar)?;
    let powers: Vec<f64> = alpha.exponents();
    let slope = |lam: f64| powers.iter().zip(sbar).map(|(a, s)| a / (s - lam)).sum::<f64>();
    // Saddle: Σ α_j / (s_j - λ) = 1 with λ < min s_j; only move left of 0.
    let lam0 = if slope(0.0) > 1.0 {
        let (mut lo, mut hi) = (-1.0, 0.0);
        while slope(lo) > 1.0 {
            lo *= 2.0;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if slope(mid) > 1.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    } else {
        0.0
    };
    let w = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
    let f = |t: f64| -> f64 {
        let lam = Complex64::new(lam0, 0.0) + w * t;
        let mut v = (-lam).exp() * w;
        for (a, s) in powers.iter().zip(sbar) {
            v *= (Complex64::new(*s, 0.0) - lam).powf(-a);
        }
        v.im
    };
    let scale = (-lam0).exp() * powers.iter().zip(sbar).map(|(a, s)| (s - lam0).powf(-a)).product::<f64>();
    let mut upper = 8.0;
    while f(upper).abs() > 1e-20 * scale && upper < 1e4 {
        upper *= 2.0;
    }
    let integral = quadrature::adaptive_gk15(f, 0.0, upper, tol * 1e-3 * scale, tol * 1e-3)?;
    Ok(integral / std::f64::consts::PI)
}

/// `H_α` as the defining simplex integral.
pub fn h_alpha_quadrature(alpha: &MultiIndex, args: &HFamilyArgs, tol: f64) -> Result<f64> {
    args.check(alpha)?;
    let d = alpha.d(args.m, args.j);
    let zs = &args.zbar;
    let integral = quadrature::simplex_integrate(
        &alpha.exponents(),
        |u| (1.0 - u.iter().zip(zs).map(|(u, z)| u * z).sum::<f64>()).powf(-d - 1.0),
        tol,
    )?;
    Ok(gamma(d + 1.0) * integral / omega_norm(alpha))
}

/// `H_α` through the Lauricella function; `₂F₁` when `n = 1`.
pub fn h_alpha_via_fd(alpha: &MultiIndex, args: &HFamilyArgs, tol: f64) -> Result<f64> {
    args.check(alpha)?;
    let dt = alpha.d(args.m, args.j) + 1.0;
    let c = alpha.abs() as f64;
    let prefactor = gamma(dt) / gamma(c);
    if alpha.n() == 0 {
        return Ok(prefactor);
    }
    if alpha.n() == 1 {
        let b = alpha.0[1] as f64;
        return Ok(prefactor * special_fn::gauss_2f1(GaussParams::new(dt, b, c), args.zbar[0], tol)?);
    }
    let p = LauricellaParams::new(dt, alpha.exponents()[1..].to_vec(), c);
    Ok(prefactor * multivar_hyper::lauricella_fd(&p, &args.zbar, tol)?)
}

/// `d^k/dz^k H_{a,1}(z; m; j)`, exact through the `₂F₁` derivative relation.
pub fn h_a1_derivative(a: u32, z: f64, m: f64, j: u32, k: usize) -> Result<f64> {
    let c = a as f64 + 1.0;
    let dt = c + (m - j as f64) / 2.0 - 1.0;
    if !(dt > 0.0) {
        return Err(Error::domain(format!("d(alpha; m; j) = {} must exceed -1", dt - 1.0)));
    }
    let p = GaussParams::new(dt, 1.0, c);
    Ok(gamma(dt) / gamma(c) * special_fn::gauss_2f1_derivative(p, z, k, 1e-15)?)
}

/// `d^k/dz^k [z^p H_{a,1}(z)]` by the Leibniz rule.
fn power_times_h_derivative(p: u32, a: u32, z: f64, m: f64, j: u32, k: usize) -> Result<f64> {
    let mut acc = special_fn::KahanSum::default();
    let mut binom = 1.0;
    for i in 0..=k.min(p as usize) {
        // d^i z^p = p!/(p-i)! z^{p-i}
        let falling: f64 = (0..i).map(|s| (p as usize - s) as f64).product();
        acc.add(binom * falling * z.powi(p as i32 - i as i32) * h_a1_derivative(a, z, m, j, k - i)?);
        binom = binom * (k - i) as f64 / (i + 1) as f64;
    }
    Ok(acc.value())
}

/// `H_α = (z^{n-1} H_{α₀+n-1,1}(z))[z₁^{(α₁)}, …, z_n^{(α_n)}]`, where `z^{(k)}`
/// denotes a node of multiplicity `k`.
pub fn h_alpha_reduced(alpha: &MultiIndex, args: &HFamilyArgs, tol: f64) -> Result<f64> {
    args.check(alpha)?;
    let n = alpha.n();
    if n == 0 {
        return h_alpha_via_fd(alpha, args, tol);
    }
    let p = n as u32 - 1;
    let a = alpha.0[0] + p;
    let (m, j) = (args.m, args.j);
    let g = WithDerivatives {
        f: move |z: f64| power_times_h_derivative(p, a, z, m, j, 0),
        d: move |z: f64, k: usize| power_times_h_derivative(p, a, z, m, j, k),
    };
    let nodes = NodeList::new(args.zbar.iter().zip(&alpha.0[1..]).map(|(&z, &k)| (z, k as usize)).collect())?;
    let opts = DivDiffOptions { tol: tol.min(1e-12), ..Default::default() };
    divided_diff::divdiff_with(&g, &nodes, &opts)
}

/// Even `m ≥ 4`, `n ≤ 2`: `H_α = ∂_z^{j_m}|_{z=0} (1-z)^{-α₀} Π_l (1 - z_l - z)^{-α_l}`,
/// `j_m = (m-4)/2`, from the Taylor coefficients of the factors.
pub fn h_even_m(alpha: &MultiIndex, zbar: &[f64], m: u32) -> Result<f64> {
    if m < 4 || m % 2 == 1 {
        return Err(Error::domain(format!("even-m formula needs even m >= 4, got {m}")));
    }
    if alpha.n() > 2 || alpha.n() != zbar.len() {
        return Err(Error::domain("even-m formula covers one or two variables"));
    }
    let order = ((m - 4) / 2) as usize;
    let mut shifts = vec![0.0];
    shifts.extend_from_slice(zbar);
    let mut product = vec![0.0; order + 1];
    product[0] = 1.0;
    for (&a, &u) in alpha.0.iter().zip(&shifts) {
        let w = 1.0 - u;
        if !(w > 0.0) {
            return Err(Error::domain(format!("argument {u} must be < 1")));
        }
        let a = a as f64;
        // (w - z)^{-a} = w^{-a} Σ (a)_k/k! (z/w)^k
        let mut coef = vec![w.powf(-a); order + 1];
        for k in 1..=order {
            coef[k] = coef[k - 1] * (a + (k - 1) as f64) / (k as f64 * w);
        }
        let mut next = vec![0.0; order + 1];
        for i in 0..=order {
            for k in 0..=order - i {
                next[i + k] += product[i] * coef[k];
            }
        }
        product = next;
    }
    Ok(product[order] * gamma(order as f64 + 1.0))
}

/// Residuals of the dimension-raising recursions, each scaled by the size of
/// its left side:
///
/// * `H_{a,b}(m+2) - a H_{a+1,b}(m) - b H_{a,b+1}(m)`;
/// * `H_{a,b}(m+2) - (d̃_m + z d/dz) H_{a,b}(m)`, `d̃_m = a + b + m/2 - 2`;
///
/// and with `c` present the three-index analogues with `u∂_u + v∂_v`.
pub fn recursion_residuals_m(a: u32, b: u32, c: Option<u32>, zbar: &[f64], m: f64) -> Result<Vec<f64>> {
    let tol = 1e-14;
    let alpha = match c {
        Some(c) => MultiIndex::new(vec![a, b, c])?,
        None => MultiIndex::new(vec![a, b])?,
    };
    let h = |al: &MultiIndex, z: &[f64], mm: f64| h_alpha_reduced(al, &HFamilyArgs::new(z.to_vec(), mm), tol);
    let lifted = h(&alpha, zbar, m + 2.0)?;
    let scale = lifted.abs().max(1.0);
    let mut raised = 0.0;
    for q in 0..alpha.0.len() {
        raised += alpha.0[q] as f64 * h(&alpha.raised(q), zbar, m)?;
    }
    let dt = alpha.abs() as f64 + m / 2.0 - 2.0;
    let mut euler = dt * h(&alpha, zbar, m)?;
    for l in 0..zbar.len() {
        let z = zbar[l];
        let at = |x: f64| -> Result<f64> {
            let mut zs = zbar.to_vec();
            zs[l] = x;
            h(&alpha, &zs, m)
        };
        let step = 1e-3 * (1.0 + z.abs());
        let central = |s: f64| -> Result<f64> { Ok((at(z + s)? - at(z - s)?) / (2.0 * s)) };
        let deriv = (4.0 * central(step / 2.0)? - central(step)?) / 3.0;
        euler += z * deriv;
    }
    Ok(vec![(lifted - raised) / scale, (lifted - euler) / scale])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec()).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn omega_examples() {
        assert_eq!(weight_omega(&mi(&[1, 1]), &[0.3]).unwrap(), 1.0);
        assert_eq!(weight_omega(&mi(&[2, 1]), &[0.5]).unwrap(), 0.5);
        let mass =
            quadrature::simplex_integrate(&[1.0, 1.0], |u| weight_omega(&mi(&[2, 1]), u).unwrap(), 1e-14).unwrap();
        assert!(close(mass, 0.5, 1e-13));
    }

    #[test]
    fn g_alpha_examples() {
        let v = g_alpha_simplex(&mi(&[2]), &[1.0], 1e-12).unwrap();
        assert!(close(v, (-1.0f64).exp(), 1e-15));
        let v = g_alpha_simplex(&mi(&[1, 1]), &[1.0, 1.0], 1e-12).unwrap();
        assert!(close(v, (-1.0f64).exp(), 1e-13));
        let v = g_alpha_contour(&mi(&[3]), &[2.0], 1e-12).unwrap();
        assert!(close(v, (-2.0f64).exp() / 2.0, 1e-11), "{v}");
        for (alpha, s) in [(mi(&[2, 3]), vec![0.5, 2.0]), (mi(&[1, 2]), vec![1.0, 1.0])] {
            let a = g_alpha_simplex(&alpha, &s, 1e-12).unwrap();
            let b = g_alpha_contour(&alpha, &s, 1e-12).unwrap();
            assert!((a - b).abs() < 1e-10 * a.abs(), "{alpha}: {a} vs {b}");
        }
    }

    #[test]
    fn g_alpha_scaling_both_ways() {
        let alpha = mi(&[2, 1]);
        let s: Vec<f64> = [1.0, 2.0].iter().map(|x| 3.0 * x).collect();
        let a = g_alpha_simplex(&alpha, &s, 1e-12).unwrap();
        let b = g_alpha_contour(&alpha, &s, 1e-12).unwrap();
        assert!((a - b).abs() < 1e-10 * a.abs());
    }

    #[test]
    fn h_quadrature_examples() {
        let v = h_alpha_quadrature(&mi(&[2, 1]), &HFamilyArgs::new(vec![0.0], 4.0), 1e-12).unwrap();
        assert!(close(v, 1.0, 1e-12));
        let v = h_alpha_quadrature(&mi(&[1, 1]), &HFamilyArgs::new(vec![0.5], 2.0), 1e-12).unwrap();
        assert!(close(v, 2.0 * 2f64.ln(), 1e-11));
        let args = HFamilyArgs::new(vec![0.3], 4.0);
        let q = h_alpha_quadrature(&mi(&[3, 1]), &args, 1e-12).unwrap();
        let f = h_alpha_via_fd(&mi(&[3, 1]), &args, 1e-13).unwrap();
        assert!(close(q, f, 1e-10));
    }

    #[test]
    fn fd_route_examples() {
        let args = HFamilyArgs::new(vec![0.3], 4.0);
        let q = h_alpha_quadrature(&mi(&[2, 1]), &args, 1e-13).unwrap();
        assert!(close(h_alpha_via_fd(&mi(&[2, 1]), &args, 1e-14).unwrap(), q, 1e-10));
        let args = HFamilyArgs::new(vec![0.0, 0.0], 5.0);
        let v = h_alpha_via_fd(&mi(&[2, 1, 2]), &args, 1e-12).unwrap();
        assert_eq!(v, gamma(5.5) / gamma(5.0));
        let args = HFamilyArgs::new(vec![0.2, 0.5], 3.0);
        let q = h_alpha_quadrature(&mi(&[2, 1, 1]), &args, 1e-12).unwrap();
        assert!(close(h_alpha_via_fd(&mi(&[2, 1, 1]), &args, 1e-13).unwrap(), q, 1e-9));
    }

    #[test]
    fn reduced_route_examples() {
        let args = HFamilyArgs::new(vec![0.2, 0.6], 4.0);
        let q = h_alpha_quadrature(&mi(&[2, 1, 1]), &args, 1e-12).unwrap();
        let r = h_alpha_reduced(&mi(&[2, 1, 1]), &args, 1e-12).unwrap();
        assert!(close(r, q, 1e-10), "{r} vs {q}");
        let args = HFamilyArgs::new(vec![0.45], 3.0);
        let r = h_alpha_reduced(&mi(&[3, 1]), &args, 1e-12).unwrap();
        assert!(close(r, h_alpha_via_fd(&mi(&[3, 1]), &args, 1e-14).unwrap(), 1e-12));
        // H_{2,2,1} = ∂_{z₁} H_{2,1,1}
        let h = 1e-4;
        let at = |z1: f64| h_alpha_reduced(&mi(&[2, 1, 1]), &HFamilyArgs::new(vec![z1, 0.5], 4.0), 1e-13).unwrap();
        let fd = (at(0.25 + h) - at(0.25 - h)) / (2.0 * h);
        let r = h_alpha_reduced(&mi(&[2, 2, 1]), &HFamilyArgs::new(vec![0.25, 0.5], 4.0), 1e-13).unwrap();
        assert!(close(r, fd, 1e-6));
    }

    #[test]
    fn even_m_examples() {
        assert!(close(h_even_m(&mi(&[2, 1]), &[0.5], 4).unwrap(), 2.0, 1e-15));
        // one derivative: a/(1-u)^b + b/(1-u)^{b+1} = 2 + 4
        let v = h_even_m(&mi(&[1, 1]), &[0.5], 6).unwrap();
        assert!(close(v, 6.0, 1e-15));
        let q = h_alpha_quadrature(&mi(&[1, 1]), &HFamilyArgs::new(vec![0.5], 6.0), 1e-13).unwrap();
        assert!(close(v, q, 1e-11));
        let v = h_even_m(&mi(&[1, 1, 1]), &[0.2, 0.4], 4).unwrap();
        assert!(close(v, 1.0 / (0.8 * 0.6), 1e-15));
        assert!(h_even_m(&mi(&[1, 1]), &[0.2], 5).is_err());
    }

    #[test]
    fn recursion_examples() {
        for r in recursion_residuals_m(2, 1, None, &[0.3], 3.0).unwrap() {
            assert!(r.abs() < 1e-9, "{r}");
        }
        let r = recursion_residuals_m(2, 1, None, &[0.0], 3.0).unwrap();
        assert!(r[0].abs() < 1e-12);
        for r in recursion_residuals_m(2, 1, Some(1), &[0.2, 0.5], 2.7).unwrap() {
            assert!(r.abs() < 1e-8, "{r}");
        }
    }

    #[test]
    fn argument_validation() {
        assert!(MultiIndex::new(vec![1, 0]).is_err());
        let err = h_alpha_quadrature(&mi(&[2, 1]), &HFamilyArgs::new(vec![1.0], 4.0), 1e-10);
        assert!(matches!(err, Err(Error::Domain(_))));
        let err = h_alpha_quadrature(&mi(&[1]), &HFamilyArgs::new(vec![], 2.0).with_j(6), 1e-10);
        assert!(matches!(err, Err(Error::Domain(_))));
    }
}
