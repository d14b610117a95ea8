//! Divided differences over real nodes with multiplicities.
//!
//! Three evaluation paths:
//!
//! * well-separated simple nodes: the symmetric sum `Σ f(x_l) Π_{s≠l} (x_l - x_s)^{-1}`;
//! * clustered nodes with an analytic derivative of order `n`: the
//!   Hermite–Genocchi integral `∫_{Δⁿ} f^{(n)}(Σ t_i x_i) dt`, which has no
//!   cancellation at all;
//! * otherwise the confluent Newton table, with derivatives from the oracle or
//!   from Richardson-extrapolated central differences.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature;

/// A real function with optional analytic derivatives.
pub trait Func1D {
    fn eval(&self, x: f64) -> Result<f64>;

    /// `f^{(k)}(x)`, if available analytically.
    fn derivative(&self, _x: f64, _k: usize) -> Option<Result<f64>> {
        None
    }
}

impl<F: Fn(f64) -> f64> Func1D for F {
    fn eval(&self, x: f64) -> Result<f64> {
        Ok(self(x))
    }
}

/// A fallible function paired with an analytic derivative oracle.
pub struct WithDerivatives<F, D> {
    pub f: F,
    pub d: D,
}

impl<F, D> Func1D for WithDerivatives<F, D>
where
    F: Fn(f64) -> Result<f64>,
    D: Fn(f64, usize) -> Result<f64>,
{
    fn eval(&self, x: f64) -> Result<f64> {
        (self.f)(x)
    }

    fn derivative(&self, x: f64, k: usize) -> Option<Result<f64>> {
        Some(if k == 0 { (self.f)(x) } else { (self.d)(x, k) })
    }
}

/// A fallible function without derivatives.
pub struct Fallible<F>(pub F);

impl<F: Fn(f64) -> Result<f64>> Func1D for Fallible<F> {
    fn eval(&self, x: f64) -> Result<f64> {
        (self.0)(x)
    }
}

/// Nodes `x_i` with multiplicities `m_i ≥ 1`; the order is `Σ m_i - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeList {
    nodes: Vec<(f64, usize)>,
}

impl NodeList {
    /// Groups equal values; fails on an empty list or zero multiplicity.
    pub fn new(nodes: Vec<(f64, usize)>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::domain("node list is empty"));
        }
        let mut grouped: Vec<(f64, usize)> = Vec::with_capacity(nodes.len());
        for (x, m) in nodes {
            if m == 0 || !x.is_finite() {
                return Err(Error::domain(format!("invalid node ({x}, multiplicity {m})")));
            }
            match grouped.iter_mut().find(|(y, _)| *y == x) {
                Some(entry) => entry.1 += m,
                None => grouped.push((x, m)),
            }
        }
        Ok(Self { nodes: grouped })
    }

    pub fn simple(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&x| (x, 1)).collect())
    }

    pub fn groups(&self) -> &[(f64, usize)] {
        &self.nodes
    }

    /// Number of nodes counted with multiplicity.
    pub fn len(&self) -> usize {
        self.nodes.iter().map(|n| n.1).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn max_multiplicity(&self) -> usize {
        self.nodes.iter().map(|n| n.1).max().unwrap_or(0)
    }

    /// Values repeated according to multiplicity.
    pub fn expanded(&self) -> Vec<f64> {
        self.nodes.iter().flat_map(|&(x, m)| std::iter::repeat_n(x, m)).collect()
    }

    fn scale(&self) -> f64 {
        self.nodes.iter().fold(1.0f64, |s, n| s.max(n.0.abs()))
    }

    /// Merge groups closer than `rel · scale` into one confluent node.
    pub fn merged(&self, rel: f64) -> Self {
        let thresh = rel * self.scale();
        let mut sorted = self.nodes.clone();
        sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut out: Vec<(f64, usize)> = Vec::with_capacity(sorted.len());
        for (x, m) in sorted {
            match out.last_mut() {
                Some(last) if (x - last.0).abs() < thresh => {
                    let total = last.1 + m;
                    last.0 = (last.0 * last.1 as f64 + x * m as f64) / total as f64;
                    last.1 = total;
                }
                _ => out.push((x, m)),
            }
        }
        Self { nodes: out }
    }

    /// Smallest gap between distinct groups relative to the spread of the
    /// nodes; `∞` for a single group.
    pub fn relative_gap(&self) -> f64 {
        let mut xs: Vec<f64> = self.nodes.iter().map(|n| n.0).collect();
        if xs.len() < 2 {
            return f64::INFINITY;
        }
        xs.sort_by(f64::total_cmp);
        let spread = (xs[xs.len() - 1] - xs[0]).max(self.scale() * 1e-300);
        xs.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min) / spread.max(1.0)
    }

    /// Growth factor of the symmetric sum formula, `Σ_l Π_{s≠l} |x_l - x_s|^{-1}`
    /// scaled by `spread^{n}`; large values signal cancellation.
    pub fn condition_estimate(&self) -> f64 {
        let xs = self.expanded();
        let n = xs.len();
        if n < 2 || self.nodes.len() < n {
            return if n < 2 { 1.0 } else { f64::INFINITY };
        }
        let lo = xs.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let spread = (hi - lo).powi(n as i32 - 1);
        xs.iter()
            .enumerate()
            .map(|(l, xl)| {
                xs.iter().enumerate().filter(|(s, _)| *s != l).map(|(_, xs)| 1.0 / (xl - xs).abs()).product::<f64>()
            })
            .sum::<f64>()
            * spread
    }
}

/// Tuning knobs for [`divdiff_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DivDiffOptions {
    /// Groups closer than `merge_rel · max(1, max|x|)` are merged.
    pub merge_rel: f64,
    /// Relative gap below which the integral form is preferred.
    pub cluster_rel: f64,
    /// Allow finite-difference derivatives when no oracle is present.
    pub finite_difference: bool,
    pub tol: f64,
}

impl Default for DivDiffOptions {
    fn default() -> Self {
        Self { merge_rel: 1e-8, cluster_rel: 1e-2, finite_difference: true, tol: 1e-13 }
    }
}

/// `f[x_0, …, x_n]` with default options.
pub fn divdiff(f: &dyn Func1D, nodes: &NodeList) -> Result<f64> {
    divdiff_with(f, nodes, &DivDiffOptions::default())
}

pub fn divdiff_with(f: &dyn Func1D, nodes: &NodeList, opts: &DivDiffOptions) -> Result<f64> {
    let nodes = nodes.merged(opts.merge_rel);
    let order = nodes.len() - 1;
    if order == 0 {
        return f.eval(nodes.groups()[0].0);
    }
    let confluent = nodes.max_multiplicity() > 1;
    let clustered = nodes.relative_gap() < opts.cluster_rel;
    if clustered && f.derivative(nodes.groups()[0].0, order).is_some() {
        return hermite_genocchi(f, &nodes, opts.tol);
    }
    if !confluent {
        return symmetric_sum(f, &nodes.expanded());
    }
    newton_table(f, &nodes, opts.finite_difference)
}

fn symmetric_sum(f: &dyn Func1D, xs: &[f64]) -> Result<f64> {
    let values: Vec<f64> = xs.iter().map(|&x| f.eval(x)).collect::<Result<_>>()?;
    if values.iter().all(|&v| v == values[0]) {
        return Ok(0.0);
    }
    let mut acc = crate::special_fn::KahanSum::default();
    for (l, &xl) in xs.iter().enumerate() {
        let mut denom = 1.0;
        for (s, &xs_) in xs.iter().enumerate() {
            if s != l {
                denom *= xl - xs_;
            }
        }
        acc.add(values[l] / denom);
    }
    Ok(acc.value())
}

/// `∫_{Δⁿ} f^{(n)}(x_0 + Σ t_i (x_i - x_0)) dt` over the expanded nodes.
fn hermite_genocchi(f: &dyn Func1D, nodes: &NodeList, tol: f64) -> Result<f64> {
    let xs = nodes.expanded();
    let n = xs.len() - 1;
    let mut failure = None;
    let value = quadrature::simplex_integrate(
        &vec![1.0; n + 1],
        |t| {
            let x = xs[0] + t.iter().zip(&xs[1..]).map(|(ti, xi)| ti * (xi - xs[0])).sum::<f64>();
            match f.derivative(x, n) {
                Some(Ok(v)) => v,
                Some(Err(e)) => {
                    failure.get_or_insert(e);
                    f64::NAN
                }
                None => {
                    failure.get_or_insert(Error::DerivativeUnavailable { order: n, at: x });
                    f64::NAN
                }
            }
        },
        tol,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    value
}

fn newton_table(f: &dyn Func1D, nodes: &NodeList, finite_difference: bool) -> Result<f64> {
    let xs = {
        let mut groups = nodes.groups().to_vec();
        groups.sort_by(|a, b| a.0.total_cmp(&b.0));
        groups.iter().flat_map(|&(x, m)| std::iter::repeat_n(x, m)).collect::<Vec<_>>()
    };
    let n = xs.len();
    let mut factorial = vec![1.0; n];
    for k in 1..n {
        factorial[k] = factorial[k - 1] * k as f64;
    }
    let deriv = |x: f64, k: usize| -> Result<f64> {
        if k == 0 {
            return f.eval(x);
        }
        match f.derivative(x, k) {
            Some(v) => v,
            None if finite_difference => richardson_derivative(f, x, k),
            None => Err(Error::DerivativeUnavailable { order: k, at: x }),
        }
    };
    let mut col: Vec<f64> = xs.iter().map(|&x| f.eval(x)).collect::<Result<_>>()?;
    for j in 1..n {
        let mut next = Vec::with_capacity(n - j);
        for i in 0..n - j {
            if xs[i + j] == xs[i] {
                next.push(deriv(xs[i], j)? / factorial[j]);
            } else {
                next.push((col[i + 1] - col[i]) / (xs[i + j] - xs[i]));
            }
        }
        col = next;
    }
    Ok(col[0])
}

/// `f^{(k)}(x)` by central differences, one Richardson step.
pub fn richardson_derivative(f: &dyn Func1D, x: f64, k: usize) -> Result<f64> {
    let base = if k == 1 { 1e-5 } else { f64::EPSILON.powf(1.0 / (k as f64 + 4.0)) };
    let h = base * (1.0 + x.abs());
    let central = |h: f64| -> Result<f64> {
        let mut acc = 0.0;
        let mut binom = 1.0;
        for i in 0..=k {
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            acc += sign * binom * f.eval(x + (k as f64 / 2.0 - i as f64) * h)?;
            binom = binom * (k - i) as f64 / (i + 1) as f64;
        }
        Ok(acc / h.powi(k as i32))
    };
    let coarse = central(h)?;
    let fine = central(h / 2.0)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

/// Divided difference as the contour integral
/// `(2πi)^{-1} ∮ f(z) / Π (z - x_i)^{m_i} dz` over a circle centred at the
/// mean node, by the trapezoidal rule.
pub fn divdiff_residue(f: impl Fn(Complex64) -> Complex64, nodes: &NodeList, radius: f64, npts: usize) -> Result<f64> {
    let xs = nodes.expanded();
    let center = xs.iter().sum::<f64>() / xs.len() as f64;
    if let Some(x) = xs.iter().find(|x| (*x - center).abs() >= radius) {
        return Err(Error::domain(format!("node {x} is not inside the contour of radius {radius}")));
    }
    if npts == 0 {
        return Err(Error::domain("contour needs at least one point"));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..npts {
        let theta = 2.0 * std::f64::consts::PI * k as f64 / npts as f64;
        let offset = Complex64::from_polar(radius, theta);
        let z = Complex64::new(center, 0.0) + offset;
        let denom = xs.iter().fold(Complex64::new(1.0, 0.0), |d, &x| d * (z - x));
        acc += f(z) / denom * offset;
    }
    Ok((acc / npts as f64).re)
}

/// Residual of `(fg)[x_0, x_1] = f(x_0) g[x_0, x_1] + g(x_1) f[x_0, x_1]`.
pub fn leibniz_residual(f: &dyn Func1D, g: &dyn Func1D, nodes: &NodeList) -> Result<f64> {
    let xs = nodes.expanded();
    if xs.len() != 2 || xs[0] == xs[1] {
        return Err(Error::domain("two-node Leibniz rule needs two distinct nodes"));
    }
    let (x0, x1) = (xs[0], xs[1]);
    let fg = Fallible(|x| Ok(f.eval(x)? * g.eval(x)?));
    let lhs = divdiff(&fg, nodes)?;
    let rhs = f.eval(x0)? * divdiff(g, nodes)? + g.eval(x1)? * divdiff(f, nodes)?;
    Ok(lhs - rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_examples() {
        let sq = |x: f64| x * x;
        assert_eq!(divdiff(&sq, &NodeList::simple(&[1.0, 3.0]).unwrap()).unwrap(), 4.0);
        let c = |_: f64| 2.5;
        assert_eq!(divdiff(&c, &NodeList::simple(&[0.1, 0.7, 2.0]).unwrap()).unwrap(), 0.0);
        let cube = |x: f64| x * x * x;
        let v = divdiff(&cube, &NodeList::new(vec![(2.0, 2)]).unwrap()).unwrap();
        assert!((v - 12.0).abs() < 1e-8, "{v}");
    }

    #[test]
    fn confluent_with_oracle_is_exact() {
        let f = WithDerivatives {
            f: |x: f64| Ok(x.powi(3)),
            d: |x: f64, k: usize| Ok([3.0 * x * x, 6.0 * x, 6.0, 0.0][k - 1]),
        };
        let v = divdiff(&f, &NodeList::new(vec![(2.0, 2)]).unwrap()).unwrap();
        assert!((v - 12.0).abs() < 1e-13);
        // x³ over {1, 2, 2}: leading coefficient of the quadratic interpolant = 1 + 2 + 2
        let v = divdiff(&f, &NodeList::new(vec![(1.0, 1), (2.0, 2)]).unwrap()).unwrap();
        assert!((v - 5.0).abs() < 1e-12);
    }

    #[test]
    fn missing_derivative_is_reported() {
        let opts = DivDiffOptions { finite_difference: false, ..Default::default() };
        let f = |x: f64| x.exp();
        let err = divdiff_with(&f, &NodeList::new(vec![(0.0, 1), (1.0, 2)]).unwrap(), &opts);
        assert!(matches!(err, Err(Error::DerivativeUnavailable { .. })));
    }

    #[test]
    fn residue_examples() {
        let v = divdiff_residue(|z| z * z, &NodeList::simple(&[1.0, 3.0]).unwrap(), 3.0, 256).unwrap();
        assert!((v - 4.0).abs() < 1e-10);
        let v = divdiff_residue(|z| z.exp(), &NodeList::simple(&[0.0, 1.0]).unwrap(), 2.0, 64).unwrap();
        assert!((v - (std::f64::consts::E - 1.0)).abs() < 1e-12);
        let nodes = NodeList::simple(&[1.0, 2.0, 3.0]).unwrap();
        let v = divdiff_residue(|z| 1.0 / (5.0 - z), &nodes, 2.5, 512).unwrap();
        let exact = divdiff(&|x: f64| 1.0 / (5.0 - x), &nodes).unwrap();
        assert!((v - exact).abs() < 1e-10);
        assert!(divdiff_residue(|z| z, &nodes, 0.5, 16).is_err());
    }

    #[test]
    fn leibniz_examples() {
        let id = |x: f64| x;
        let nodes = NodeList::simple(&[1.0, 2.0]).unwrap();
        assert_eq!(leibniz_residual(&id, &id, &nodes).unwrap(), 0.0);
        let r = leibniz_residual(&|x: f64| x * x, &|x: f64| x.exp(), &NodeList::simple(&[0.3, 1.1]).unwrap());
        assert!(r.unwrap().abs() < 1e-12);
        let r = leibniz_residual(&|_: f64| 1.0, &|x: f64| x.sin(), &nodes).unwrap();
        assert_eq!(r, 0.0);
    }

    #[test]
    fn near_coincident_nodes_merge() {
        let f = |x: f64| x.exp();
        let v = divdiff(&f, &NodeList::simple(&[0.5, 0.5 + 1e-10]).unwrap()).unwrap();
        assert!((v - 0.5f64.exp()).abs() < 1e-8);
    }

    #[test]
    fn clustered_nodes_use_integral_form() {
        let f = WithDerivatives { f: |x: f64| Ok(x.exp()), d: |x: f64, _k: usize| Ok(x.exp()) };
        let xs = [0.3, 0.3 + 1e-5, 0.3 + 3e-5];
        let v = divdiff(&f, &NodeList::simple(&xs).unwrap()).unwrap();
        // e^x[x0,x1,x2] = e^{x0}(e^{h1}... ) computed via the mean value form
        let approx = (0.3f64 + 4e-5 / 3.0).exp() / 2.0;
        assert!((v - approx).abs() < 1e-9, "{v} {approx}");
    }

    #[test]
    fn condition_estimate_grows_with_clustering() {
        let wide = NodeList::simple(&[0.0, 1.0, 2.0]).unwrap().condition_estimate();
        let tight = NodeList::simple(&[0.0, 1e-3, 2.0]).unwrap().condition_estimate();
        assert!(tight > 100.0 * wide);
    }
}
