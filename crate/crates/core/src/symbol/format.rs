//! JSON and LaTeX renderings of symbol polynomials.
//!
//! JSON terms carry ordered word tokens, `ξ` and δ index names, the power of
//! `r`, and the coefficient as numerator and denominator polynomials in `m`
//! (rational strings, lowest degree first).

use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::coeff::{Coeff, GaussianRational, Poly, RatFunc};
use super::term::{index_name, parse_index_name, Generator, SymbolPoly, SymbolTerm};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoeffJson {
    pub num: Vec<String>,
    pub den: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub word: Vec<String>,
    pub xi: Vec<String>,
    pub deltas: Vec<[String; 2]>,
    pub r_power: i32,
    pub coeff: CoeffJson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyJson {
    pub terms: Vec<TermJson>,
}

/// Real raw coefficients as constant rational functions.
pub fn to_real(p: &SymbolPoly<GaussianRational>) -> Result<SymbolPoly<RatFunc>> {
    if let Some(t) = p.terms.iter().find(|t| !t.coeff.is_real()) {
        return Err(Error::domain(format!("coefficient {} is not real", t.coeff)));
    }
    Ok(p.map_coeff(|c| RatFunc::from_rational(c.re.clone())))
}

fn poly_strings(p: &Poly) -> Vec<String> {
    p.coeffs().iter().map(|c| c.to_string()).collect()
}

fn parse_poly(v: &[String]) -> Result<Poly> {
    let coeffs = v
        .iter()
        .map(|s| BigRational::from_str(s).map_err(|_| Error::domain(format!("bad rational '{s}'"))))
        .collect::<Result<Vec<_>>>()?;
    Ok(Poly::new(coeffs))
}

pub fn to_json(p: &SymbolPoly<RatFunc>) -> PolyJson {
    PolyJson {
        terms: p
            .terms
            .iter()
            .map(|t| TermJson {
                word: t.word.iter().map(|g| g.to_string()).collect(),
                xi: t.xi.iter().map(|&i| index_name(i)).collect(),
                deltas: t.deltas.iter().map(|&(a, b)| [index_name(a), index_name(b)]).collect(),
                r_power: t.r_power,
                coeff: CoeffJson { num: poly_strings(t.coeff.num()), den: poly_strings(t.coeff.den()) },
            })
            .collect(),
    }
}

fn parse_token(tok: &str) -> Result<Generator> {
    let bad = || Error::MalformedWord(format!("unknown token '{tok}'"));
    let power = |rest: &str| -> Result<u32> {
        if rest.is_empty() {
            Ok(1)
        } else {
            rest.strip_prefix('^').and_then(|p| p.parse().ok()).ok_or_else(bad)
        }
    };
    let args = |rest: &str| -> Result<Vec<u32>> {
        let inner = rest.strip_prefix('[').and_then(|r| r.strip_suffix(']')).ok_or_else(bad)?;
        inner.split(',').map(|s| parse_index_name(s.trim()).ok_or_else(bad)).collect()
    };
    if let Some(rest) = tok.strip_prefix("grad_k") {
        match args(rest)?.as_slice() {
            [i] => Ok(Generator::GradK(*i)),
            _ => Err(bad()),
        }
    } else if let Some(rest) = tok.strip_prefix("hess_k") {
        match args(rest)?.as_slice() {
            [a, b] => Ok(Generator::hess(*a, *b)),
            _ => Err(bad()),
        }
    } else if let Some(rest) = tok.strip_prefix("b0") {
        Ok(Generator::B0(power(rest)?))
    } else if let Some(rest) = tok.strip_prefix('k') {
        Ok(Generator::K(power(rest)?))
    } else {
        Err(bad())
    }
}

pub fn from_json(p: &PolyJson) -> Result<SymbolPoly<RatFunc>> {
    let idx = |s: &String| parse_index_name(s).ok_or_else(|| Error::MalformedWord(format!("bad index '{s}'")));
    let mut terms = Vec::with_capacity(p.terms.len());
    for t in &p.terms {
        let den = parse_poly(&t.coeff.den)?;
        if den.is_zero() {
            return Err(Error::domain("zero denominator"));
        }
        terms.push(SymbolTerm::new(
            RatFunc::new(parse_poly(&t.coeff.num)?, den),
            t.xi.iter().map(idx).collect::<Result<_>>()?,
            t.deltas.iter().map(|[a, b]| Ok((idx(a)?, idx(b)?))).collect::<Result<_>>()?,
            t.r_power,
            t.word.iter().map(|w| parse_token(w)).collect::<Result<_>>()?,
        ));
    }
    Ok(SymbolPoly::new(terms))
}

fn latex_poly(p: &Poly) -> String {
    let mut s = String::new();
    for (k, c) in p.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        if s.is_empty() {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        let mag = c.abs();
        let num = latex_rational(&mag);
        match k {
            0 => s.push_str(&num),
            _ => {
                if !mag.is_one() {
                    s.push_str(&num);
                }
                s.push('m');
                if k > 1 {
                    s.push_str(&format!("^{{{k}}}"));
                }
            }
        }
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

fn latex_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("\\frac{{{}}}{{{}}}", r.numer(), r.denom())
    }
}

/// Sign and magnitude of a coefficient in LaTeX; the magnitude is empty for 1.
fn latex_coeff(c: &RatFunc) -> (bool, String) {
    let nonzero: Vec<&BigRational> = c.num().coeffs().iter().filter(|x| !x.is_zero()).collect();
    let neg = !nonzero.is_empty() && nonzero.iter().all(|x| x.is_negative());
    let num = if neg { c.num().neg() } else { c.num().clone() };
    if c.den().degree() == 0 {
        let body = latex_poly(&num);
        let body = if body == "1" {
            String::new()
        } else if nonzero.len() > 1 {
            format!("({body})")
        } else {
            body
        };
        return (neg, body);
    }
    (neg, format!("\\frac{{{}}}{{{}}}", latex_poly(&num), latex_poly(c.den())))
}

fn latex_generator(g: &Generator) -> String {
    match *g {
        Generator::B0(1) => "b_0".into(),
        Generator::B0(a) => format!("b_0^{{{a}}}"),
        Generator::K(1) => "k".into(),
        Generator::K(a) => format!("k^{{{a}}}"),
        Generator::GradK(i) => format!("(\\nabla k)_{{{}}}", index_name(i)),
        Generator::HessK(a, b) => format!("(\\nabla^2 k)_{{{}{}}}", index_name(a), index_name(b)),
    }
}

/// One term per line, joined by explicit signs.
pub fn to_latex(p: &SymbolPoly<RatFunc>) -> String {
    let mut lines = Vec::with_capacity(p.len());
    for (n, t) in p.terms.iter().enumerate() {
        let (neg, mag) = latex_coeff(&t.coeff);
        let mut s = String::new();
        s.push_str(match (n, neg) {
            (0, false) => "",
            (0, true) => "-",
            (_, false) => "+ ",
            (_, true) => "- ",
        });
        s.push_str(&mag);
        if t.r_power != 0 {
            s.push_str(&format!(" r^{{{}}}", t.r_power));
        }
        if mag.is_empty() {
            s = s.replacen("  ", " ", 1);
        }
        for &i in &t.xi {
            s.push_str(&format!(" \\xi_{{{}}}", index_name(i)));
        }
        for &(a, b) in &t.deltas {
            s.push_str(&format!(" \\mathbf{{1}}_{{{}{}}}", index_name(a), index_name(b)));
        }
        for g in &t.word {
            s.push(' ');
            s.push_str(&latex_generator(g));
        }
        lines.push(s);
    }
    lines.join(" \\\\\n")
}
