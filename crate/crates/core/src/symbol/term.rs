//! Noncommutative symbol terms and their canonical form.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::coeff::Coeff;

/// Abstract tensor index. Bound indices are renamed to `0, 1, …` by
/// canonicalization; ids at or above [`FREE_BASE`] are never renamed.
pub type Index = u32;

/// Start of the id range used for free indices.
pub const FREE_BASE: Index = 1 << 20;

/// Letters used when printing canonical indices.
const INDEX_NAMES: [&str; 6] = ["j", "l", "p", "q", "s", "t"];

pub fn index_name(i: Index) -> String {
    INDEX_NAMES.get(i as usize).map(|s| s.to_string()).unwrap_or_else(|| format!("i{i}"))
}

pub fn parse_index_name(s: &str) -> Option<Index> {
    if let Some(p) = INDEX_NAMES.iter().position(|n| *n == s) {
        return Some(p as Index);
    }
    s.strip_prefix('i')?.parse().ok()
}

/// Letters of the words: powers of `b₀` and `k`, `(∇k)_j`, `(∇²k)_{jl}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub enum Generator {
    B0(u32),
    K(u32),
    GradK(Index),
    /// Indices kept sorted, as the Hessian is symmetric.
    HessK(Index, Index),
}

impl Generator {
    pub fn hess(a: Index, b: Index) -> Self {
        Generator::HessK(a.min(b), a.max(b))
    }

    fn rename(self, f: &impl Fn(Index) -> Index) -> Self {
        match self {
            Generator::GradK(i) => Generator::GradK(f(i)),
            Generator::HessK(a, b) => Generator::hess(f(a), f(b)),
            g => g,
        }
    }

    fn indices(&self) -> Vec<Index> {
        match *self {
            Generator::GradK(i) => vec![i],
            Generator::HessK(a, b) => vec![a, b],
            _ => vec![],
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Generator::B0(1) => write!(f, "b0"),
            Generator::B0(a) => write!(f, "b0^{a}"),
            Generator::K(1) => write!(f, "k"),
            Generator::K(a) => write!(f, "k^{a}"),
            Generator::GradK(i) => write!(f, "grad_k[{}]", index_name(i)),
            Generator::HessK(a, b) => write!(f, "hess_k[{},{}]", index_name(a), index_name(b)),
        }
    }
}

/// Merge equal neighbours and, inside runs of the mutually commuting letters
/// `b₀` and `k`, put the `b₀` power first.
pub fn normalize_word(word: &[Generator]) -> Vec<Generator> {
    let mut out = Vec::with_capacity(word.len());
    let (mut b, mut k) = (0u32, 0u32);
    let flush = |out: &mut Vec<Generator>, b: &mut u32, k: &mut u32| {
        if *b > 0 {
            out.push(Generator::B0(*b));
        }
        if *k > 0 {
            out.push(Generator::K(*k));
        }
        *b = 0;
        *k = 0;
    };
    for g in word {
        match *g {
            Generator::B0(a) => b += a,
            Generator::K(a) => k += a,
            other => {
                flush(&mut out, &mut b, &mut k);
                out.push(other);
            }
        }
    }
    flush(&mut out, &mut b, &mut k);
    out
}

/// `coeff · ξ-monomial · Π δ · r^{r_power} · word`.
#[derive(Clone, PartialEq, Debug)]
pub struct SymbolTerm<C> {
    pub coeff: C,
    /// Sorted multiset of `ξ` indices.
    pub xi: Vec<Index>,
    /// Kronecker deltas, each pair sorted, list sorted.
    pub deltas: Vec<(Index, Index)>,
    pub r_power: i32,
    pub word: Vec<Generator>,
}

/// Everything about a term except its coefficient.
pub type TermKey = (Vec<Generator>, Vec<Index>, Vec<(Index, Index)>, i32);

impl<C: Coeff> SymbolTerm<C> {
    pub fn new(coeff: C, xi: Vec<Index>, deltas: Vec<(Index, Index)>, r_power: i32, word: Vec<Generator>) -> Self {
        let mut t = Self { coeff, xi, deltas, r_power, word };
        t.tidy();
        t
    }

    /// A word with coefficient one and no `ξ` or `r` factors.
    pub fn word(word: Vec<Generator>) -> Self {
        Self::new(C::one(), vec![], vec![], 0, word)
    }

    fn tidy(&mut self) {
        self.xi.sort_unstable();
        for d in &mut self.deltas {
            *d = (d.0.min(d.1), d.0.max(d.1));
        }
        self.deltas.sort_unstable();
        self.word = normalize_word(&self.word);
    }

    /// Homogeneity in `(ξ, λ)` with `λ` of degree 2: `r + |ξ| - 2 Σ b₀`.
    pub fn degree(&self) -> i32 {
        self.r_power + self.xi.len() as i32 - 2 * self.b0_total() as i32
    }

    pub fn b0_total(&self) -> u32 {
        self.word.iter().map(|g| if let Generator::B0(a) = g { *a } else { 0 }).sum()
    }

    pub fn key(&self) -> TermKey {
        (self.word.clone(), self.xi.clone(), self.deltas.clone(), self.r_power)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut xi = self.xi.clone();
        xi.extend_from_slice(&o.xi);
        let mut deltas = self.deltas.clone();
        deltas.extend_from_slice(&o.deltas);
        let mut word = self.word.clone();
        word.extend_from_slice(&o.word);
        Self::new(self.coeff.mul(&o.coeff), xi, deltas, self.r_power + o.r_power, word)
    }

    pub fn scaled(&self, c: &C) -> Self {
        Self { coeff: self.coeff.mul(c), ..self.clone() }
    }

    pub fn map_coeff<D: Coeff>(&self, f: impl Fn(&C) -> D) -> SymbolTerm<D> {
        SymbolTerm {
            coeff: f(&self.coeff),
            xi: self.xi.clone(),
            deltas: self.deltas.clone(),
            r_power: self.r_power,
            word: self.word.clone(),
        }
    }

    pub fn rename(&self, f: impl Fn(Index) -> Index) -> Self {
        Self::new(
            self.coeff.clone(),
            self.xi.iter().map(|&i| f(i)).collect(),
            self.deltas.iter().map(|&(a, b)| (f(a), f(b))).collect(),
            self.r_power,
            self.word.iter().map(|g| g.rename(&f)).collect(),
        )
    }

    /// Indices with their number of occurrences, in order of first appearance.
    pub fn index_counts(&self) -> Vec<(Index, usize)> {
        let mut seen: Vec<(Index, usize)> = Vec::new();
        let all = self
            .word
            .iter()
            .flat_map(|g| g.indices())
            .chain(self.xi.iter().copied())
            .chain(self.deltas.iter().flat_map(|&(a, b)| [a, b]));
        for i in all {
            match seen.iter_mut().find(|(j, _)| *j == i) {
                Some(e) => e.1 += 1,
                None => seen.push((i, 1)),
            }
        }
        seen
    }

    /// Rename bound indices (those appearing at least twice) to `0, 1, …`,
    /// choosing the assignment with the smallest key.
    pub fn canonical(&self) -> Self {
        let bound: Vec<Index> =
            self.index_counts().into_iter().filter(|&(i, c)| c >= 2 && i < FREE_BASE).map(|(i, _)| i).collect();
        let mut best: Option<Self> = None;
        for perm in permutations(bound.len()) {
            let map: BTreeMap<Index, Index> = bound.iter().zip(&perm).map(|(&i, &p)| (i, p as Index)).collect();
            let cand = self.rename(|i| *map.get(&i).unwrap_or(&i));
            if best.as_ref().is_none_or(|b| cand.key() < b.key()) {
                best = Some(cand);
            }
        }
        best.unwrap_or_else(|| self.clone())
    }

    /// Shift every bound index by `offset`.
    pub fn shifted(&self, offset: Index) -> Self {
        self.rename(|i| if i < FREE_BASE { i + offset } else { i })
    }

    pub fn max_index(&self) -> Option<Index> {
        self.index_counts().into_iter().map(|(i, _)| i).filter(|&i| i < FREE_BASE).max()
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Sum of terms with implicit summation over repeated indices.
#[derive(Clone, PartialEq, Debug)]
pub struct SymbolPoly<C> {
    pub terms: Vec<SymbolTerm<C>>,
}

impl<C: Coeff> Default for SymbolPoly<C> {
    fn default() -> Self {
        Self { terms: Vec::new() }
    }
}

impl<C: Coeff> SymbolPoly<C> {
    pub fn new(terms: Vec<SymbolTerm<C>>) -> Self {
        Self { terms }
    }

    pub fn from_term(t: SymbolTerm<C>) -> Self {
        Self { terms: vec![t] }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Canonical indices, like terms merged, zeros dropped, terms sorted by
    /// `(word, ξ, δ, r)`.
    pub fn canonical(&self) -> Self {
        let mut merged: BTreeMap<TermKey, C> = BTreeMap::new();
        for t in &self.terms {
            let c = t.canonical();
            merged.entry(c.key()).and_modify(|acc| *acc = acc.add(&c.coeff)).or_insert(c.coeff);
        }
        let terms = merged
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|((word, xi, deltas, r_power), coeff)| SymbolTerm { coeff, xi, deltas, r_power, word })
            .collect();
        Self { terms }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(o.terms.iter().cloned());
        Self { terms }
    }

    /// Product with the bound indices of `o` shifted clear of those of `self`.
    pub fn mul(&self, o: &Self) -> Self {
        let offset = self.terms.iter().filter_map(|t| t.max_index()).max().map_or(0, |i| i + 1);
        let mut terms = Vec::with_capacity(self.len() * o.len());
        for a in &self.terms {
            for b in &o.terms {
                terms.push(a.mul(&b.shifted(offset)));
            }
        }
        Self { terms }
    }

    pub fn scaled(&self, c: &C) -> Self {
        Self { terms: self.terms.iter().map(|t| t.scaled(c)).collect() }
    }

    pub fn map_coeff<D: Coeff>(&self, f: impl Fn(&C) -> D) -> SymbolPoly<D> {
        SymbolPoly { terms: self.terms.iter().map(|t| t.map_coeff(&f)).collect() }
    }

    /// Degrees of all terms, deduplicated and sorted.
    pub fn degrees(&self) -> Vec<i32> {
        let mut d: Vec<i32> = self.terms.iter().map(|t| t.degree()).collect();
        d.sort_unstable();
        d.dedup();
        d
    }
}

impl<C: Coeff + fmt::Display> fmt::Display for SymbolTerm<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.coeff)?;
        if self.r_power != 0 {
            write!(f, " r^{}", self.r_power)?;
        }
        for i in &self.xi {
            write!(f, " xi[{}]", index_name(*i))?;
        }
        for (a, b) in &self.deltas {
            write!(f, " delta[{},{}]", index_name(*a), index_name(*b))?;
        }
        let word: Vec<String> = self.word.iter().map(|g| g.to_string()).collect();
        write!(f, " {}", word.join("."))
    }
}

impl<C: Coeff + fmt::Display> fmt::Display for SymbolPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, t) in self.terms.iter().enumerate() {
            if n > 0 {
                writeln!(f)?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::super::coeff::GaussianRational;
    use super::*;
    use Generator::*;

    type T = SymbolTerm<GaussianRational>;

    #[test]
    fn commuting_letters_are_gathered() {
        let w = normalize_word(&[B0(2), K(1), B0(1), GradK(0), B0(1), K(1), B0(1)]);
        assert_eq!(w, vec![B0(3), K(1), GradK(0), B0(2), K(1)]);
    }

    #[test]
    fn renaming_makes_terms_comparable() {
        let a = T::new(GaussianRational::one(), vec![5, 9], vec![], 2, vec![B0(2), K(1), GradK(9), B0(1), GradK(5)]);
        let b = T::new(GaussianRational::one(), vec![1, 0], vec![], 2, vec![B0(2), K(1), GradK(0), B0(1), GradK(1)]);
        assert_eq!(a.canonical(), b.canonical());
        let p = SymbolPoly::new(vec![a.clone(), b]).canonical();
        assert_eq!(p.len(), 1);
        assert_eq!(p.terms[0].coeff, GaussianRational::from_int(2));
    }

    #[test]
    fn free_indices_keep_their_names() {
        let t = T::new(GaussianRational::one(), vec![FREE_BASE, 3], vec![], 0, vec![GradK(3)]);
        let c = t.canonical();
        assert_eq!(c.xi, vec![0, FREE_BASE]);
    }

    #[test]
    fn degree_counts_resolvent_powers() {
        let t = T::new(GaussianRational::one(), vec![0, 1], vec![], 2, vec![B0(3), K(2), Generator::hess(1, 0), B0(1)]);
        assert_eq!(t.degree(), -4);
    }
}
