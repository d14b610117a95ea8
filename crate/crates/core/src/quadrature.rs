//! Quadrature rules shared by the evaluation routes.
//!
//! Gauss–Jacobi rules on `[0, 1]` are built with the Golub–Welsch
//! eigenvalue method and cached per `(order, p, q)`. Simplex rules are
//! tensor products of Jacobi rules under the collapsed (Duffy) map, so the
//! boundary powers of a Dirichlet-type weight are absorbed exactly.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::special_fn::{beta_fn, gamma};

/// A one-dimensional rule `∫_0^1 t^p (1-t)^q g(t) dt ≈ Σ w_i g(t_i)`.
#[derive(Debug, Clone)]
pub struct JacobiRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

type RuleKey = (usize, u64, u64);

fn rule_cache() -> &'static Mutex<HashMap<RuleKey, Arc<JacobiRule>>> {
    static CACHE: OnceLock<Mutex<HashMap<RuleKey, Arc<JacobiRule>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Gauss–Jacobi rule of the given order for the weight `t^p (1-t)^q` on `[0, 1]`.
///
/// Requires `p > -1` and `q > -1`.
pub fn gauss_jacobi(order: usize, p: f64, q: f64) -> Arc<JacobiRule> {
    assert!(order >= 1, "rule order must be positive");
    assert!(p > -1.0 && q > -1.0, "Jacobi exponents must exceed -1");
    let key = (order, p.to_bits(), q.to_bits());
    if let Some(rule) = rule_cache().lock().unwrap().get(&key) {
        return Arc::clone(rule);
    }
    let rule = Arc::new(build_jacobi(order, p, q));
    rule_cache().lock().unwrap().insert(key, Arc::clone(&rule));
    rule
}

fn build_jacobi(n: usize, p: f64, q: f64) -> JacobiRule {
    // On [-1, 1] the weight is (1-x)^alpha (1+x)^beta with t = (1+x)/2.
    let alpha = q;
    let beta = p;
    let ab = alpha + beta;
    let mut jac = DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        let kf = k as f64;
        let diag = if k == 0 {
            (beta - alpha) / (ab + 2.0)
        } else {
            (beta * beta - alpha * alpha) / ((2.0 * kf + ab) * (2.0 * kf + ab + 2.0))
        };
        jac[(k, k)] = diag;
        if k + 1 < n {
            let j = (k + 1) as f64;
            let off_sq = if k == 0 {
                4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab).powi(2) * (3.0 + ab))
            } else {
                4.0 * j * (j + alpha) * (j + beta) * (j + ab)
                    / ((2.0 * j + ab).powi(2) * (2.0 * j + ab + 1.0) * (2.0 * j + ab - 1.0))
            };
            let off = off_sq.sqrt();
            jac[(k, k + 1)] = off;
            jac[(k + 1, k)] = off;
        }
    }
    let eig = SymmetricEigen::new(jac);
    let mass = beta_fn(p + 1.0, q + 1.0);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let v0 = eig.eigenvectors[(0, i)];
            (0.5 * (1.0 + eig.eigenvalues[i]), mass * v0 * v0)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    JacobiRule { nodes: pairs.iter().map(|p| p.0).collect(), weights: pairs.iter().map(|p| p.1).collect() }
}

/// Tensor-product rule on the standard simplex `Δⁿ = {u_i ≥ 0, Σ u_i ≤ 1}`.
///
/// Integrates against `(1 - Σu)^{e_0 - 1} Π u_s^{e_s - 1} du` for exponents
/// `e = (e_0, …, e_n)`, all positive. With every `e_s = 1` this is Lebesgue
/// measure and the weights sum to `1/n!`.
#[derive(Debug, Clone)]
pub struct SimplexQuadRule {
    pub dim: usize,
    /// Row-major, `dim` coordinates per node.
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl SimplexQuadRule {
    pub fn new(exponents: &[f64], order: usize) -> Result<Self> {
        if exponents.is_empty() {
            return Err(Error::domain("simplex weight needs at least one exponent"));
        }
        if exponents.iter().any(|&e| !(e > 0.0)) {
            return Err(Error::domain(format!("simplex weight exponents must be positive, got {exponents:?}")));
        }
        let dim = exponents.len() - 1;
        if dim == 0 {
            return Ok(Self { dim, nodes: Vec::new(), weights: vec![1.0] });
        }
        // Collapsed coordinate x_i carries x_i^{e_i - 1} (1 - x_i)^{e_0 - 1 + Σ_{k>i} e_k}.
        let rules: Vec<Arc<JacobiRule>> = (1..=dim)
            .map(|i| {
                let tail: f64 = exponents[i + 1..].iter().sum();
                gauss_jacobi(order, exponents[i] - 1.0, exponents[0] - 1.0 + tail)
            })
            .collect();
        let count = order.pow(dim as u32);
        let mut nodes = Vec::with_capacity(count * dim);
        let mut weights = Vec::with_capacity(count);
        let mut idx = vec![0usize; dim];
        let mut u = vec![0.0; dim];
        for _ in 0..count {
            let mut w = 1.0;
            let mut remaining = 1.0;
            for i in 0..dim {
                let x = rules[i].nodes[idx[i]];
                w *= rules[i].weights[idx[i]];
                u[i] = x * remaining;
                remaining *= 1.0 - x;
            }
            nodes.extend_from_slice(&u);
            weights.push(w);
            for i in (0..dim).rev() {
                idx[i] += 1;
                if idx[i] < order {
                    break;
                }
                idx[i] = 0;
            }
        }
        Ok(Self { dim, nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn node(&self, i: usize) -> &[f64] {
        &self.nodes[i * self.dim..(i + 1) * self.dim]
    }

    /// Ordered sum, so results do not depend on scheduling.
    pub fn integrate(&self, mut f: impl FnMut(&[f64]) -> f64) -> f64 {
        let mut acc = crate::special_fn::KahanSum::default();
        for i in 0..self.len() {
            acc.add(self.weights[i] * f(self.node(i)));
        }
        acc.value()
    }
}

/// Integrate `f` against the Dirichlet-type weight with exponents `e`,
/// doubling the per-axis order until two successive estimates agree to `tol`
/// (relative, with an absolute floor of `tol * 1e-3`).
pub fn simplex_integrate(exponents: &[f64], mut f: impl FnMut(&[f64]) -> f64, tol: f64) -> Result<f64> {
    let dim = exponents.len().saturating_sub(1);
    if dim == 0 {
        return Ok(f(&[]));
    }
    let max_order = match dim {
        1 => 512,
        2 => 128,
        3 => 48,
        _ => 24,
    };
    let mut order = match dim {
        1 | 2 => 8,
        _ => 6,
    };
    let mut prev = SimplexQuadRule::new(exponents, order)?.integrate(&mut f);
    while order < max_order {
        order = (order * 2).min(max_order);
        let next = SimplexQuadRule::new(exponents, order)?.integrate(&mut f);
        if (next - prev).abs() <= tol * next.abs().max(1e-3) {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::NoConvergence { context: "simplex quadrature", iterations: order })
}

/// Integrate `g` against `t^p (1-t)^q` on `[0, 1]` with order doubling.
pub fn jacobi_integrate(p: f64, q: f64, mut g: impl FnMut(f64) -> f64, tol: f64) -> Result<f64> {
    let eval = |order: usize, g: &mut dyn FnMut(f64) -> f64| {
        let rule = gauss_jacobi(order, p, q);
        let mut acc = crate::special_fn::KahanSum::default();
        for (t, w) in rule.nodes.iter().zip(&rule.weights) {
            acc.add(w * g(*t));
        }
        acc.value()
    };
    let mut order = 16;
    let mut prev = eval(order, &mut g);
    while order < 512 {
        order *= 2;
        let next = eval(order, &mut g);
        if (next - prev).abs() <= tol * next.abs().max(1e-3) {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::NoConvergence { context: "Gauss-Jacobi quadrature", iterations: order })
}

#[allow(clippy::excessive_precision)]
const GK_NODES: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
#[allow(clippy::excessive_precision)]
const GK_WEIGHTS: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
#[allow(clippy::excessive_precision)]
const GAUSS7_WEIGHTS: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15(f: &mut dyn FnMut(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = fc * GK_WEIGHTS[7];
    let mut gauss = fc * GAUSS7_WEIGHTS[3];
    for i in 0..7 {
        let x = h * GK_NODES[i];
        let s = f(c - x) + f(c + x);
        kronrod += GK_WEIGHTS[i] * s;
        if i % 2 == 1 {
            gauss += GAUSS7_WEIGHTS[i / 2] * s;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

/// Adaptive Gauss–Kronrod (7/15) on a finite interval.
pub fn adaptive_gk15(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Result<f64> {
    const MAX_INTERVALS: usize = 4000;
    let (v, e) = gk15(&mut f, a, b);
    let mut intervals = vec![(a, b, v, e)];
    for _ in 0..MAX_INTERVALS {
        let total: f64 = intervals.iter().map(|s| s.2).sum();
        let err: f64 = intervals.iter().map(|s| s.3).sum();
        if err <= abs_tol.max(rel_tol * total.abs()) {
            return Ok(total);
        }
        let (worst, _) = intervals.iter().enumerate().max_by(|x, y| x.1 .3.total_cmp(&y.1 .3)).unwrap();
        let (lo, hi, _, _) = intervals.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = gk15(&mut f, lo, mid);
        let (v2, e2) = gk15(&mut f, mid, hi);
        intervals.push((lo, mid, v1, e1));
        intervals.push((mid, hi, v2, e2));
    }
    Err(Error::NoConvergence { context: "adaptive Gauss-Kronrod", iterations: MAX_INTERVALS })
}

/// Dirichlet integral `∫_{Δⁿ} Π u^{e-1} (1-Σu)^{e_0-1} du = ΠΓ(e_i)/Γ(Σe_i)`.
pub fn dirichlet_mass(exponents: &[f64]) -> f64 {
    let total: f64 = exponents.iter().sum();
    exponents.iter().map(|&e| gamma(e)).product::<f64>() / gamma(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobi_rule_integrates_polynomials_exactly() {
        let rule = gauss_jacobi(5, 1.0, 2.0);
        // ∫ t (1-t)^2 t^3 dt = B(5, 3) = 4! 2! / 7!
        let got: f64 = rule.nodes.iter().zip(&rule.weights).map(|(t, w)| w * t.powi(3)).sum();
        assert!((got - 24.0 * 2.0 / 5040.0).abs() < 1e-15);
    }

    #[test]
    fn fractional_exponents_have_beta_mass() {
        let rule = gauss_jacobi(12, -0.3, 0.7);
        let sum: f64 = rule.weights.iter().sum();
        assert!((sum - beta_fn(0.7, 1.7)).abs() < 1e-14);
        assert!(rule.nodes.iter().all(|&t| t > 0.0 && t < 1.0));
    }

    #[test]
    fn lebesgue_simplex_weights_sum_to_inverse_factorial() {
        for (dim, fact) in [(1usize, 1.0), (2, 2.0), (3, 6.0)] {
            let rule = SimplexQuadRule::new(&vec![1.0; dim + 1], 6).unwrap();
            let sum: f64 = rule.weights.iter().sum();
            assert!((sum - 1.0 / fact).abs() < 1e-14, "dim {dim}");
            for i in 0..rule.len() {
                let u = rule.node(i);
                assert!(u.iter().all(|&x| x >= 0.0));
                assert!(u.iter().sum::<f64>() <= 1.0 + 1e-15);
            }
        }
    }

    #[test]
    fn dirichlet_weight_masses() {
        let e = [2.0, 3.0, 1.5];
        let rule = SimplexQuadRule::new(&e, 10).unwrap();
        let sum: f64 = rule.weights.iter().sum();
        assert!((sum - dirichlet_mass(&e)).abs() < 1e-14);
    }

    #[test]
    fn gk15_handles_smooth_integrands() {
        let v = adaptive_gk15(|x| x.exp(), 0.0, 1.0, 1e-14, 1e-14).unwrap();
        assert!((v - (1f64.exp() - 1.0)).abs() < 1e-13);
    }

    #[test]
    fn non_positive_exponent_is_rejected() {
        assert!(SimplexQuadRule::new(&[1.0, 0.0], 4).is_err());
    }
}
