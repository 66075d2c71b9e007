//! Graded arithmetic in the free associative algebra on two letters and in
//! its cyclic quotient (necklaces).
//!
//! Two alphabets are in use: the generators `X, Y` of the free Lie algebra
//! and the ad-letters `x = ad X`, `y = ad Y` in which universal traces are
//! written. Letters are stored as `0` and `1` in both cases; the alphabet tag
//! only decides how they print and which series may be combined.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{format_term, inv_factorial, join_terms, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Alphabet {
    /// `X < Y`
    Generators,
    /// `x = ad X < y = ad Y`
    Ad,
}

impl Alphabet {
    pub fn letter(self, l: u8) -> char {
        match (self, l) {
            (Alphabet::Generators, 0) => 'X',
            (Alphabet::Generators, 1) => 'Y',
            (Alphabet::Ad, 0) => 'x',
            (Alphabet::Ad, 1) => 'y',
            _ => '?',
        }
    }

    pub fn parse_letter(self, c: char) -> Option<u8> {
        match (self, c) {
            (Alphabet::Generators, 'X') | (Alphabet::Ad, 'x') => Some(0),
            (Alphabet::Generators, 'Y') | (Alphabet::Ad, 'y') => Some(1),
            _ => None,
        }
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Alphabet::Generators => f.write_str("{X,Y}"),
            Alphabet::Ad => f.write_str("{x,y}"),
        }
    }
}

/// A word over a two-letter alphabet. Ordered by length first, then
/// lexicographically, so that maps keyed by words iterate degree by degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters(letters: Vec<u8>) -> Self {
        debug_assert!(letters.iter().all(|&l| l < 2));
        Word(letters)
    }

    pub fn parse(alphabet: Alphabet, s: &str) -> Option<Self> {
        s.chars()
            .map(|c| alphabet.parse_letter(c))
            .collect::<Option<Vec<_>>>()
            .map(Word)
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn render(&self, alphabet: Alphabet) -> String {
        if self.0.is_empty() {
            return "1".to_string();
        }
        self.0.iter().map(|&l| alphabet.letter(l)).collect()
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

fn add_into<K: Ord + Clone>(map: &mut BTreeMap<K, Q>, key: &K, c: Q) {
    if c.is_zero() {
        return;
    }
    match map.get_mut(key) {
        Some(v) => {
            *v += c;
            if v.is_zero() {
                map.remove(key);
            }
        }
        None => {
            map.insert(key.clone(), c);
        }
    }
}

/// Truncated noncommutative power series with rational coefficients.
///
/// Every stored word has length at most `max_degree` and no coefficient is
/// zero. Two series compare equal when their coefficients agree through the
/// smaller of the two truncation orders.
#[derive(Clone, Debug)]
pub struct AssocSeries {
    alphabet: Alphabet,
    max_degree: usize,
    terms: BTreeMap<Word, Q>,
}

impl PartialEq for AssocSeries {
    fn eq(&self, other: &Self) -> bool {
        if self.alphabet != other.alphabet {
            return false;
        }
        let d = self.max_degree.min(other.max_degree);
        let a = self.terms.iter().filter(|(w, _)| w.len() <= d);
        let b = other.terms.iter().filter(|(w, _)| w.len() <= d);
        a.eq(b)
    }
}

impl AssocSeries {
    pub fn zero(alphabet: Alphabet, max_degree: usize) -> Self {
        Self {
            alphabet,
            max_degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(alphabet: Alphabet, max_degree: usize) -> Self {
        Self::monomial(alphabet, max_degree, Word::empty(), Q::one())
    }

    pub fn letter(alphabet: Alphabet, max_degree: usize, l: u8) -> Self {
        Self::monomial(alphabet, max_degree, Word::from_letters(vec![l]), Q::one())
    }

    pub fn monomial(alphabet: Alphabet, max_degree: usize, w: Word, c: Q) -> Self {
        let mut s = Self::zero(alphabet, max_degree);
        if w.len() <= max_degree {
            add_into(&mut s.terms, &w, c);
        }
        s
    }

    pub fn from_terms(
        alphabet: Alphabet,
        max_degree: usize,
        terms: impl IntoIterator<Item = (Word, Q)>,
    ) -> Self {
        let mut s = Self::zero(alphabet, max_degree);
        for (w, c) in terms {
            if w.len() <= max_degree {
                add_into(&mut s.terms, &w, c);
            }
        }
        s
    }

    /// Parses a sum like `"XY - YX + 1/2 X"`: terms separated by `+`/`-`, each
    /// an optional rational factor followed by a word (or `1`).
    pub fn parse(alphabet: Alphabet, max_degree: usize, s: &str) -> Option<Self> {
        let mut out = Self::zero(alphabet, max_degree);
        let cleaned = s.replace([' ', '·', '*'], "");
        let mut chunk = String::new();
        let mut chunks = Vec::new();
        for ch in cleaned.chars() {
            if (ch == '+' || ch == '-') && !chunk.is_empty() {
                chunks.push(std::mem::take(&mut chunk));
            }
            chunk.push(ch);
        }
        if !chunk.is_empty() {
            chunks.push(chunk);
        }
        for ch in chunks {
            let (sign, body) = match ch.strip_prefix('-') {
                Some(b) => (-Q::one(), b),
                None => (Q::one(), ch.strip_prefix('+').unwrap_or(&ch)),
            };
            let split = body
                .find(|c: char| alphabet.parse_letter(c).is_some())
                .unwrap_or(body.len());
            let (num, word) = body.split_at(split);
            let c = if num.is_empty() {
                Q::one()
            } else {
                crate::rational::parse_rational(num)?
            };
            let w = Word::parse(alphabet, word)?;
            if w.len() <= max_degree {
                add_into(&mut out.terms, &w, sign * c);
            }
        }
        Some(out)
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn terms(&self) -> &BTreeMap<Word, Q> {
        &self.terms
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Word, &Q)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &Word) -> Q {
        self.terms.get(w).cloned().unwrap_or_else(Q::zero)
    }

    pub fn constant_term(&self) -> Q {
        self.coeff(&Word::empty())
    }

    /// Smallest degree carrying a nonzero coefficient.
    pub fn min_degree(&self) -> Option<usize> {
        self.terms.keys().next().map(Word::len)
    }

    pub fn homogeneous(&self, n: usize) -> Self {
        Self {
            alphabet: self.alphabet,
            max_degree: self.max_degree,
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.len() == n)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn truncate(&self, max_degree: usize) -> Self {
        let d = max_degree.min(self.max_degree);
        Self {
            alphabet: self.alphabet,
            max_degree: d,
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.len() <= d)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    /// Same coefficients read over another alphabet (e.g. `X -> x`).
    pub fn relabel(&self, alphabet: Alphabet) -> Self {
        Self {
            alphabet,
            max_degree: self.max_degree,
            terms: self.terms.clone(),
        }
    }

    fn check_alphabet(&self, other: &Self) -> Result<()> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch {
                left: self.alphabet.to_string(),
                right: other.alphabet.to_string(),
            });
        }
        Ok(())
    }

    /// `self += c * other`, keeping the smaller truncation order.
    pub fn add_scaled(&mut self, other: &Self, c: &Q) -> Result<()> {
        self.check_alphabet(other)?;
        if other.max_degree < self.max_degree {
            *self = self.truncate(other.max_degree);
        }
        for (w, a) in &other.terms {
            if w.len() <= self.max_degree {
                add_into(&mut self.terms, w, a * c);
            }
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let mut s = self.clone();
        s.add_scaled(other, &Q::one())?;
        Ok(s)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        let mut s = self.clone();
        s.add_scaled(other, &-Q::one())?;
        Ok(s)
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero(self.alphabet, self.max_degree);
        }
        Self {
            alphabet: self.alphabet,
            max_degree: self.max_degree,
            terms: self.terms.iter().map(|(w, a)| (w.clone(), a * c)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Q::one())
    }

    /// Concatenation product, exact through `maxdeg` (and through the
    /// truncation orders of both factors).
    pub fn mul(&self, other: &Self, maxdeg: usize) -> Result<Self> {
        self.check_alphabet(other)?;
        // The product is known through min(a_max + b_min, b_max + a_min).
        let a_min = self.min_degree().unwrap_or(usize::MAX / 4);
        let b_min = other.min_degree().unwrap_or(usize::MAX / 4);
        let known = (self.max_degree + b_min).min(other.max_degree + a_min);
        let d = maxdeg.min(known);
        let mut out = BTreeMap::new();
        for (u, a) in &self.terms {
            if u.len() > d {
                break;
            }
            for (v, b) in &other.terms {
                if u.len() + v.len() > d {
                    break;
                }
                add_into(&mut out, &u.concat(v), a * b);
            }
        }
        Ok(Self {
            alphabet: self.alphabet,
            max_degree: d,
            terms: out,
        })
    }

    /// `self·other − other·self`
    pub fn commutator(&self, other: &Self, maxdeg: usize) -> Result<Self> {
        self.mul(other, maxdeg)?.sub(&other.mul(self, maxdeg)?)
    }

    /// Truncated exponential; the input must have zero constant term.
    pub fn exp(&self, maxdeg: usize) -> Result<Self> {
        let c0 = self.constant_term();
        if !c0.is_zero() {
            return Err(Error::ConstantTerm {
                expected: "0".into(),
                found: c0.to_string(),
            });
        }
        let d = maxdeg.min(self.max_degree);
        let mut out = Self::one(self.alphabet, d);
        let mut power = Self::one(self.alphabet, d);
        for k in 1..=d {
            power = power.mul(self, d)?;
            if power.is_zero() {
                break;
            }
            out.add_scaled(&power, &inv_factorial(k))?;
        }
        Ok(out)
    }

    /// Truncated logarithm; the input must have constant term 1.
    pub fn log(&self, maxdeg: usize) -> Result<Self> {
        let c0 = self.constant_term();
        if !c0.is_one() {
            return Err(Error::ConstantTerm {
                expected: "1".into(),
                found: c0.to_string(),
            });
        }
        let d = maxdeg.min(self.max_degree);
        let mut w = self.truncate(d);
        w.terms.remove(&Word::empty());
        let mut out = Self::zero(self.alphabet, d);
        let mut power = Self::one(self.alphabet, d);
        for m in 1..=d {
            power = power.mul(&w, d)?;
            if power.is_zero() {
                break;
            }
            let sign: i64 = if m % 2 == 1 { 1 } else { -1 };
            out.add_scaled(&power, &Q::new(sign.into(), (m as i64).into()))?;
        }
        Ok(out)
    }

    pub fn display_terms(&self) -> Vec<String> {
        self.terms
            .iter()
            .map(|(w, c)| format_term(c, &w.render(self.alphabet)))
            .collect()
    }
}

impl fmt::Display for AssocSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        f.write_str(&join_terms(&self.display_terms()))
    }
}

/// A cyclic word over `{x, y}`, stored as its lexicographically least
/// rotation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Necklace(Vec<u8>);

impl Necklace {
    /// Canonical representative of the rotation class of a nonempty word.
    pub fn canonical(letters: &[u8]) -> Self {
        assert!(!letters.is_empty(), "the empty word has no necklace");
        let n = letters.len();
        let mut best = 0;
        for r in 1..n {
            let better = (0..n)
                .map(|i| (letters[(r + i) % n], letters[(best + i) % n]))
                .find(|(a, b)| a != b)
                .is_some_and(|(a, b)| a < b);
            if better {
                best = r;
            }
        }
        Necklace((0..n).map(|i| letters[(best + i) % n]).collect())
    }

    pub fn parse(s: &str) -> Option<Self> {
        let w = Word::parse(Alphabet::Ad, s)?;
        if w.is_empty() {
            None
        } else {
            Some(Self::canonical(w.letters()))
        }
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl Ord for Necklace {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Necklace {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Necklace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &l in &self.0 {
            write!(f, "{}", Alphabet::Ad.letter(l))?;
        }
        Ok(())
    }
}

/// Rational combination of necklaces; the universal home of trace
/// polynomials `tr(ad w_1 ⋯ ad w_k)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CyclicSeries {
    terms: BTreeMap<Necklace, Q>,
}

impl CyclicSeries {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Necklace, Q)>) -> Self {
        let mut s = Self::zero();
        for (n, c) in terms {
            add_into(&mut s.terms, &n, c);
        }
        s
    }

    pub fn single(necklace: &str, c: Q) -> Self {
        Self::from_terms([(Necklace::parse(necklace).expect("necklace over {x,y}"), c)])
    }

    pub fn terms(&self) -> &BTreeMap<Necklace, Q> {
        &self.terms
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Necklace, &Q)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, n: &Necklace) -> Q {
        self.terms.get(n).cloned().unwrap_or_else(Q::zero)
    }

    pub fn homogeneous(&self, n: usize) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| k.len() == n)
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn truncate(&self, n: usize) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| k.len() <= n)
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn add_scaled(&mut self, other: &Self, c: &Q) {
        for (k, a) in &other.terms {
            add_into(&mut self.terms, k, a * c);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut s = self.clone();
        s.add_scaled(other, &Q::one());
        s
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut s = self.clone();
        s.add_scaled(other, &-Q::one());
        s
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut s = Self::zero();
        s.add_scaled(self, c);
        s
    }

    pub fn display_terms(&self) -> Vec<String> {
        self.terms
            .iter()
            .map(|(k, c)| format_term(c, &format!("({k})")))
            .collect()
    }
}

impl fmt::Display for CyclicSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        f.write_str(&join_terms(&self.display_terms()))
    }
}

/// Sends every word over `{x, y}` to its necklace and sums coefficients of
/// rotation-equivalent words. Constant terms are not allowed: a trace of the
/// identity is not universal, so callers must cancel it beforehand.
pub fn cyclic_reduce(a: &AssocSeries) -> Result<CyclicSeries> {
    if a.alphabet() != Alphabet::Ad {
        return Err(Error::AlphabetMismatch {
            left: a.alphabet().to_string(),
            right: Alphabet::Ad.to_string(),
        });
    }
    let c0 = a.constant_term();
    if !c0.is_zero() {
        return Err(Error::ConstantTerm {
            expected: "0".into(),
            found: c0.to_string(),
        });
    }
    Ok(CyclicSeries::from_terms(a.iter().map(|(w, c)| {
        (Necklace::canonical(w.letters()), c.clone())
    })))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    fn gens(s: &str, d: usize) -> AssocSeries {
        AssocSeries::parse(Alphabet::Generators, d, s).unwrap()
    }

    fn ads(s: &str, d: usize) -> AssocSeries {
        AssocSeries::parse(Alphabet::Ad, d, s).unwrap()
    }

    #[test]
    fn mul_examples() {
        let x = gens("X", 4);
        let y = gens("Y", 4);
        assert_eq!(x.mul(&y, 4).unwrap(), gens("XY", 4));
        let a = gens("1 + X", 4);
        let b = gens("1 + Y", 4);
        assert_eq!(a.mul(&b, 4).unwrap(), gens("1 + X + Y + XY", 4));
        let c = gens("XY - YX", 4);
        assert_eq!(c.mul(&x, 4).unwrap(), gens("XYX - YXX", 4));
    }

    #[test]
    fn mul_truncates_and_checks_alphabet() {
        let x = gens("X + XX", 5);
        let p = x.mul(&x, 3).unwrap();
        assert_eq!(p.max_degree(), 3);
        assert_eq!(p, gens("XX + 2XXX", 3));
        assert!(matches!(
            x.mul(&ads("x", 5), 3),
            Err(Error::AlphabetMismatch { .. })
        ));
    }

    #[test]
    fn exp_log_examples() {
        let d = 6;
        let x = gens("X", d);
        let y = gens("Y", d);
        assert_eq!(x.exp(d).unwrap().log(d).unwrap(), x);
        let p = x.exp(d).unwrap().mul(&y.exp(d).unwrap(), d).unwrap();
        assert_eq!(
            p.coeff(&Word::parse(Alphabet::Generators, "XY").unwrap()),
            qi(1)
        );
        assert_eq!(
            p.coeff(&Word::parse(Alphabet::Generators, "XXY").unwrap()),
            q(1, 2)
        );
    }

    #[test]
    fn exp_log_reject_bad_constant_terms() {
        let a = gens("1 + X", 4);
        assert!(matches!(a.exp(4), Err(Error::ConstantTerm { .. })));
        assert!(matches!(
            gens("X", 4).log(4),
            Err(Error::ConstantTerm { .. })
        ));
        assert!(matches!(
            gens("2 + X", 4).log(4),
            Err(Error::ConstantTerm { .. })
        ));
    }

    #[test]
    fn necklace_canonical_rotation() {
        assert_eq!(Necklace::parse("yx").unwrap().to_string(), "xy");
        assert_eq!(Necklace::parse("yxx").unwrap().to_string(), "xxy");
        assert_eq!(Necklace::parse("xyxy").unwrap().to_string(), "xyxy");
        assert_eq!(Necklace::parse("yxyx").unwrap().to_string(), "xyxy");
        assert_eq!(Necklace::parse("xyxxy").unwrap().to_string(), "xxyxy");
    }

    #[test]
    fn cyclic_reduce_examples() {
        assert!(cyclic_reduce(&ads("xy - yx", 4)).unwrap().is_zero());
        assert_eq!(
            cyclic_reduce(&ads("xxy + yxx", 4)).unwrap(),
            CyclicSeries::single("xxy", qi(2))
        );
        assert_eq!(
            cyclic_reduce(&ads("xyxy", 4)).unwrap(),
            CyclicSeries::single("xyxy", qi(1))
        );
    }

    #[test]
    fn cyclic_reduce_rejects_constants_and_generators() {
        assert!(cyclic_reduce(&ads("1 + x", 3)).is_err());
        assert!(cyclic_reduce(&gens("X", 3)).is_err());
    }

    #[test]
    fn parse_handles_rationals() {
        let a = gens("1/2XY - 3/4 YX + 2", 3);
        assert_eq!(a.constant_term(), qi(2));
        assert_eq!(
            a.coeff(&Word::parse(Alphabet::Generators, "YX").unwrap()),
            q(-3, 4)
        );
    }
}
