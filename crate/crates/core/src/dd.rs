//! Double-double `exp`, `ln` and division on top of `twofloat` arithmetic,
//! with relative errors near 1e-30 on moderate arguments.

use twofloat::TwoFloat;

const SQUARINGS: i32 = 4;

pub(crate) fn dd(x: f64) -> TwoFloat {
    TwoFloat::from(x)
}

fn ln2() -> TwoFloat {
    TwoFloat::new_add(std::f64::consts::LN_2, 2.3190468138462996e-17)
}

pub(crate) fn exp(x: TwoFloat) -> TwoFloat {
    if x.hi() == 0.0 {
        return dd(1.0);
    }
    let ln2 = ln2();
    let k = (x.hi() / ln2.hi()).round();
    let r = (x - ln2 * k) / 2f64.powi(SQUARINGS);
    let mut term = dd(1.0);
    let mut sum = dd(1.0);
    for n in 1..30 {
        term = term * r / n as f64;
        sum += term;
        if term.hi().abs() < 1e-36 {
            break;
        }
    }
    for _ in 0..SQUARINGS {
        sum = sum * sum;
    }
    sum * 2f64.powi(k as i32)
}

pub(crate) fn ln(x: TwoFloat) -> TwoFloat {
    let mut y = dd(x.hi().ln());
    for _ in 0..2 {
        y = y + x * exp(-y) - 1.0;
    }
    y
}

/// `a / b` by long division; `twofloat`'s own quotient keeps only about
/// 17 digits.
pub(crate) fn div(a: TwoFloat, b: TwoFloat) -> TwoFloat {
    let q1 = a.hi() / b.hi();
    let r = a - b * q1;
    let q2 = r.hi() / b.hi();
    let r = r - b * q2;
    let q3 = r.hi() / b.hi();
    TwoFloat::new_add(q1, q2) + q3
}

/// `x^p` for `x > 0`.
pub(crate) fn powf(x: TwoFloat, p: TwoFloat) -> TwoFloat {
    exp(ln(x) * p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_ln_inverse() {
        for x in [1e-3, 0.3, 1.0, 2.5, 17.0, 1e3] {
            let v = dd(x);
            let back = exp(ln(v));
            let err = div(back - v, v).hi().abs();
            assert!(err < 1e-29, "{x}: {err:e}");
        }
    }

    #[test]
    fn long_division() {
        let q = div(dd(1.0), dd(3.0));
        assert!((q * 3.0 - 1.0).hi().abs() < 1e-32);
        let b = exp(dd(0.7));
        assert!((div(b * 5.0, b) - 5.0).hi().abs() < 1e-30);
    }

    #[test]
    fn exp_matches_f64() {
        for x in [-3.0, -0.1, 0.5, 2.0, 10.0] {
            assert!((exp(dd(x)).hi() / x.exp() - 1.0).abs() < 4e-16);
        }
        // e² = e·e in double-double
        let e = exp(dd(1.0));
        assert!(div(exp(dd(2.0)) - e * e, e * e).hi().abs() < 1e-29);
    }
}
