//! The free Lie algebra on `X < Y`, written on the Lyndon basis.
//!
//! A Lyndon word `w` of length at least two has a standard factorization
//! `w = uv` where `v` is its longest proper Lyndon suffix; its basis element is
//! the bracketing `b(w) = [b(u), b(v)]`. Brackets of basis elements are
//! rewritten back onto the basis with the classical Jacobi recursion and the
//! results are memoized process-wide.
//!
//! A second, independent route goes through the associative algebra:
//! expanding brackets as commutators and reading Lyndon coordinates off the
//! lexicographically smallest word (the expansion of `b(w)` is `w` plus larger
//! words). [`bracket_via_assoc`] and [`lie_bracket`] must agree.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, LazyLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::free_algebra::{Alphabet, AssocSeries, Word};
use crate::rational::{format_term, join_terms, Q};
use crate::series::PowerSeries;

pub const X: u8 = 0;
pub const Y: u8 = 1;

/// A word over `{X < Y}` that is strictly smaller than each of its proper
/// rotations. Ordered by length, then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LyndonWord(Vec<u8>);

pub fn is_lyndon(w: &[u8]) -> bool {
    let n = w.len();
    if n == 0 {
        return false;
    }
    // A word is Lyndon iff it is strictly smaller than all its proper suffixes.
    (1..n).all(|i| w < &w[i..])
}

impl LyndonWord {
    pub fn new(letters: Vec<u8>) -> Result<Self> {
        if letters.iter().all(|&l| l < 2) && is_lyndon(&letters) {
            Ok(LyndonWord(letters))
        } else {
            Err(Error::NotLyndon(
                letters
                    .iter()
                    .map(|&l| Alphabet::Generators.letter(l))
                    .collect(),
            ))
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let w = Word::parse(Alphabet::Generators, s).ok_or_else(|| Error::NotLyndon(s.into()))?;
        Self::new(w.letters().to_vec())
    }

    pub fn letter(l: u8) -> Self {
        LyndonWord(vec![l])
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

    /// Number of `Y` letters.
    pub fn y_degree(&self) -> usize {
        self.0.iter().filter(|&&l| l == Y).count()
    }

    pub fn x_degree(&self) -> usize {
        self.0.len() - self.y_degree()
    }

    /// `(u, v)` with `v` the longest proper Lyndon suffix; `None` for letters.
    pub fn standard_factorization(&self) -> Option<(LyndonWord, LyndonWord)> {
        let n = self.0.len();
        (1..n).find(|&i| is_lyndon(&self.0[i..])).map(|i| {
            (
                LyndonWord(self.0[..i].to_vec()),
                LyndonWord(self.0[i..].to_vec()),
            )
        })
    }

    /// The bracketing `b(w)`, e.g. `[X,[X,Y]]` for `XXY`.
    pub fn bracket_string(&self) -> String {
        match self.standard_factorization() {
            None => Alphabet::Generators.letter(self.0[0]).to_string(),
            Some((u, v)) => format!("[{},{}]", u.bracket_string(), v.bracket_string()),
        }
    }
}

impl fmt::Display for LyndonWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &l in &self.0 {
            write!(f, "{}", Alphabet::Generators.letter(l))?;
        }
        Ok(())
    }
}

impl Ord for LyndonWord {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for LyndonWord {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// All Lyndon words of length at most `n`, in lexicographic order (Duval).
pub fn lyndon_words_up_to(n: usize) -> Vec<LyndonWord> {
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    let mut w: Vec<u8> = vec![0];
    loop {
        out.push(LyndonWord(w.clone()));
        let m = w.len();
        while w.len() < n {
            w.push(w[w.len() - m]);
        }
        while w.last() == Some(&1) {
            w.pop();
        }
        match w.last_mut() {
            Some(last) => *last += 1,
            None => break,
        }
    }
    out
}

/// Lyndon words of length exactly `n`, lexicographically ordered.
pub fn lyndon_basis(n: usize) -> Vec<LyndonWord> {
    lyndon_words_up_to(n)
        .into_iter()
        .filter(|w| w.len() == n)
        .collect()
}

type Combination = Arc<Vec<(LyndonWord, Q)>>;
type Expansion = Arc<Vec<(Word, BigInt)>>;

static BRACKETS: LazyLock<RwLock<HashMap<(LyndonWord, LyndonWord), Combination>>> =
    LazyLock::new(Default::default);
static EXPANSIONS: LazyLock<RwLock<HashMap<LyndonWord, Expansion>>> =
    LazyLock::new(Default::default);

fn accumulate(map: &mut BTreeMap<LyndonWord, Q>, w: &LyndonWord, c: Q) {
    if c.is_zero() {
        return;
    }
    match map.get_mut(w) {
        Some(v) => {
            *v += c;
            if v.is_zero() {
                map.remove(w);
            }
        }
        None => {
            map.insert(w.clone(), c);
        }
    }
}

/// `[b(u), b(v)]` on the Lyndon basis.
pub fn bracket_basis(u: &LyndonWord, v: &LyndonWord) -> Combination {
    if u == v {
        return Arc::new(Vec::new());
    }
    if u.0 > v.0 {
        let c = bracket_basis(v, u);
        return Arc::new(c.iter().map(|(w, a)| (w.clone(), -a)).collect());
    }
    let key = (u.clone(), v.clone());
    if let Some(c) = BRACKETS.read().expect("bracket cache").get(&key) {
        return c.clone();
    }
    let mut uv = u.0.clone();
    uv.extend_from_slice(&v.0);
    let result: Vec<(LyndonWord, Q)> = match u.standard_factorization() {
        Some((u1, u2)) if u2.0 < v.0 => {
            // [[u1,u2],v] = [u1,[u2,v]] - [u2,[u1,v]]
            let mut acc = BTreeMap::new();
            for (w, c) in bracket_basis(&u2, v).iter() {
                for (z, d) in bracket_basis(&u1, w).iter() {
                    accumulate(&mut acc, z, c * d);
                }
            }
            for (w, c) in bracket_basis(&u1, v).iter() {
                for (z, d) in bracket_basis(&u2, w).iter() {
                    accumulate(&mut acc, z, -(c * d));
                }
            }
            acc.into_iter().collect()
        }
        _ => vec![(LyndonWord(uv), Q::one())],
    };
    let result = Arc::new(result);
    BRACKETS
        .write()
        .expect("bracket cache")
        .insert(key, result.clone());
    result
}

/// Commutator expansion of `b(w)` in the free associative algebra.
pub fn expand_basis(w: &LyndonWord) -> Expansion {
    if let Some(e) = EXPANSIONS.read().expect("expansion cache").get(w) {
        return e.clone();
    }
    let result = match w.standard_factorization() {
        None => vec![(Word::from_letters(w.0.clone()), BigInt::one())],
        Some((u, v)) => {
            let eu = expand_basis(&u);
            let ev = expand_basis(&v);
            let mut acc: BTreeMap<Word, BigInt> = BTreeMap::new();
            for (a, ca) in eu.iter() {
                for (b, cb) in ev.iter() {
                    *acc.entry(a.concat(b)).or_default() += ca * cb;
                    *acc.entry(b.concat(a)).or_default() -= ca * cb;
                }
            }
            acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
        }
    };
    let result = Arc::new(result);
    EXPANSIONS
        .write()
        .expect("expansion cache")
        .insert(w.clone(), result.clone());
    result
}

/// An element of the completed free Lie algebra, truncated at `max_degree`,
/// as coefficients of the Lyndon bracketings.
#[derive(Clone, Debug)]
pub struct LieSeries {
    max_degree: usize,
    terms: BTreeMap<LyndonWord, Q>,
}

impl PartialEq for LieSeries {
    /// Coefficientwise through the smaller truncation order.
    fn eq(&self, other: &Self) -> bool {
        let d = self.max_degree.min(other.max_degree);
        let a = self.terms.iter().filter(|(w, _)| w.len() <= d);
        let b = other.terms.iter().filter(|(w, _)| w.len() <= d);
        a.eq(b)
    }
}

impl LieSeries {
    pub fn zero(max_degree: usize) -> Self {
        Self {
            max_degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn generator(l: u8, max_degree: usize) -> Self {
        Self::basis(LyndonWord::letter(l), max_degree)
    }

    pub fn x(max_degree: usize) -> Self {
        Self::generator(X, max_degree)
    }

    pub fn y(max_degree: usize) -> Self {
        Self::generator(Y, max_degree)
    }

    pub fn basis(w: LyndonWord, max_degree: usize) -> Self {
        Self::from_terms(max_degree, [(w, Q::one())])
    }

    pub fn from_terms(max_degree: usize, terms: impl IntoIterator<Item = (LyndonWord, Q)>) -> Self {
        let mut s = Self::zero(max_degree);
        for (w, c) in terms {
            if w.len() <= max_degree {
                accumulate(&mut s.terms, &w, c);
            }
        }
        s
    }

    /// Builds a series from `(lyndon word, coefficient)` string pairs.
    pub fn parse_terms(max_degree: usize, terms: &[(&str, Q)]) -> Result<Self> {
        let mut s = Self::zero(max_degree);
        for (w, c) in terms {
            let w = LyndonWord::parse(w)?;
            if w.len() <= max_degree {
                accumulate(&mut s.terms, &w, c.clone());
            }
        }
        Ok(s)
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn terms(&self) -> &BTreeMap<LyndonWord, Q> {
        &self.terms
    }

    pub fn iter(&self) -> impl Iterator<Item = (&LyndonWord, &Q)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &LyndonWord) -> Q {
        self.terms.get(w).cloned().unwrap_or_else(Q::zero)
    }

    /// Coefficient of a basis element given as a letter string, e.g. `"XXY"`.
    pub fn coeff_of(&self, w: &str) -> Q {
        LyndonWord::parse(w)
            .map(|w| self.coeff(&w))
            .unwrap_or_else(|_| Q::zero())
    }

    pub fn min_degree(&self) -> Option<usize> {
        self.terms.keys().next().map(LyndonWord::len)
    }

    pub fn homogeneous(&self, n: usize) -> Self {
        self.filter(|w| w.len() == n)
    }

    pub fn filter(&self, keep: impl Fn(&LyndonWord) -> bool) -> Self {
        Self {
            max_degree: self.max_degree,
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| keep(w))
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn truncate(&self, max_degree: usize) -> Self {
        let d = max_degree.min(self.max_degree);
        let mut s = self.filter(|w| w.len() <= d);
        s.max_degree = d;
        s
    }

    /// Forgets the truncation order and sets a new one (dropping terms above it).
    pub fn with_max_degree(&self, max_degree: usize) -> Self {
        let mut s = self.filter(|w| w.len() <= max_degree);
        s.max_degree = max_degree;
        s
    }

    pub fn add_scaled(&mut self, other: &Self, c: &Q) {
        if other.max_degree < self.max_degree {
            *self = self.truncate(other.max_degree);
        }
        for (w, a) in &other.terms {
            if w.len() <= self.max_degree {
                accumulate(&mut self.terms, w, a * c);
            }
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
        let mut s = Self::zero(self.max_degree);
        s.add_scaled(self, c);
        s
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Q::one())
    }

    /// Multiplies the degree-`n` component by `f(n)`.
    pub fn scale_by_degree(&self, f: impl Fn(usize) -> Q) -> Self {
        Self::from_terms(
            self.max_degree,
            self.terms.iter().map(|(w, c)| (w.clone(), c * f(w.len()))),
        )
    }

    /// Terms as `coefficient·[bracket]` strings, degree by degree.
    pub fn display_terms(&self) -> Vec<String> {
        self.terms
            .iter()
            .map(|(w, c)| format_term(c, &w.bracket_string()))
            .collect()
    }
}

impl fmt::Display for LieSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        f.write_str(&join_terms(&self.display_terms()))
    }
}

fn known_product_degree(u: &LieSeries, v: &LieSeries, maxdeg: usize) -> usize {
    let um = u.min_degree().unwrap_or(usize::MAX / 4);
    let vm = v.min_degree().unwrap_or(usize::MAX / 4);
    maxdeg.min((u.max_degree + vm).min(v.max_degree + um))
}

/// `[u, v]` on the Lyndon basis, exact through `maxdeg`.
pub fn lie_bracket(u: &LieSeries, v: &LieSeries, maxdeg: usize) -> LieSeries {
    let d = known_product_degree(u, v, maxdeg);
    let mut out = LieSeries::zero(d);
    for (a, ca) in &u.terms {
        if a.len() >= d {
            break;
        }
        for (b, cb) in &v.terms {
            if a.len() + b.len() > d {
                break;
            }
            let c = ca * cb;
            for (w, e) in bracket_basis(a, b).iter() {
                accumulate(&mut out.terms, w, &c * e);
            }
        }
    }
    out
}

/// Expands brackets as commutators in the free associative algebra on `X, Y`.
pub fn lie_to_assoc(u: &LieSeries) -> AssocSeries {
    let mut acc: BTreeMap<Word, Q> = BTreeMap::new();
    for (w, c) in &u.terms {
        for (word, e) in expand_basis(w).iter() {
            let v = acc.entry(word.clone()).or_insert_with(Q::zero);
            *v += c * Q::from_integer(e.clone());
        }
    }
    AssocSeries::from_terms(Alphabet::Generators, u.max_degree, acc)
}

/// The image under `ad`: `X -> x`, `Y -> y`, brackets to commutators.
pub fn lie_to_ad(u: &LieSeries) -> AssocSeries {
    lie_to_assoc(u).relabel(Alphabet::Ad)
}

/// Lyndon coordinates of an associative element that is known to be a Lie
/// polynomial, by peeling off the smallest word. Fails if the input is not a
/// Lie element (some smallest word is not Lyndon).
pub fn lyndon_coordinates(a: &AssocSeries) -> Result<LieSeries> {
    if a.alphabet() != Alphabet::Generators {
        return Err(Error::AlphabetMismatch {
            left: a.alphabet().to_string(),
            right: Alphabet::Generators.to_string(),
        });
    }
    let mut rest: BTreeMap<Word, Q> = a.terms().clone();
    let mut out = LieSeries::zero(a.max_degree());
    while let Some((w, c)) = rest.iter().next().map(|(w, c)| (w.clone(), c.clone())) {
        let lw = LyndonWord::new(w.letters().to_vec())
            .map_err(|_| Error::NotLie(w.render(Alphabet::Generators)))?;
        for (word, e) in expand_basis(&lw).iter() {
            let v = rest.entry(word.clone()).or_insert_with(Q::zero);
            *v -= &c * Q::from_integer(e.clone());
            if v.is_zero() {
                rest.remove(word);
            }
        }
        accumulate(&mut out.terms, &lw, c);
    }
    Ok(out)
}

/// Same bracket as [`lie_bracket`], computed through the associative
/// embedding and [`lyndon_coordinates`].
pub fn bracket_via_assoc(u: &LieSeries, v: &LieSeries, maxdeg: usize) -> Result<LieSeries> {
    let d = known_product_degree(u, v, maxdeg);
    let c = lie_to_assoc(u).commutator(&lie_to_assoc(v), d)?;
    let mut l = lyndon_coordinates(&c)?;
    l.max_degree = d;
    Ok(l)
}

/// Right-nested bracket `[a_1,[a_2,…,[a_{n-1},a_n]…]]` expanded in the free
/// associative algebra, applied wordwise to a homogeneous polynomial.
fn right_nested_assoc(p: &BTreeMap<Vec<u8>, Q>, n: usize) -> BTreeMap<Vec<u8>, Q> {
    if n <= 1 {
        return p.clone();
    }
    let mut out: BTreeMap<Vec<u8>, Q> = BTreeMap::new();
    for letter in [X, Y] {
        let tail: BTreeMap<Vec<u8>, Q> = p
            .iter()
            .filter(|(w, _)| w[0] == letter)
            .map(|(w, c)| (w[1..].to_vec(), c.clone()))
            .collect();
        if tail.is_empty() {
            continue;
        }
        for (w, c) in right_nested_assoc(&tail, n - 1) {
            let mut left = Vec::with_capacity(n);
            left.push(letter);
            left.extend_from_slice(&w);
            let mut right = w;
            right.push(letter);
            *out.entry(left).or_insert_with(Q::zero) += &c;
            *out.entry(right).or_insert_with(Q::zero) -= &c;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// The Dynkin projection: each word of length `n` goes to `1/n` times its
/// right-nested bracketing. It is the identity on Lie elements.
pub fn dynkin_project(a: &AssocSeries) -> Result<LieSeries> {
    if a.alphabet() != Alphabet::Generators {
        return Err(Error::AlphabetMismatch {
            left: a.alphabet().to_string(),
            right: Alphabet::Generators.to_string(),
        });
    }
    let c0 = a.constant_term();
    if !c0.is_zero() {
        return Err(Error::ConstantTerm {
            expected: "0".into(),
            found: c0.to_string(),
        });
    }
    let mut out = LieSeries::zero(a.max_degree());
    for n in 1..=a.max_degree() {
        let p: BTreeMap<Vec<u8>, Q> = a
            .iter()
            .filter(|(w, _)| w.len() == n)
            .map(|(w, c)| (w.letters().to_vec(), c.clone()))
            .collect();
        if p.is_empty() {
            continue;
        }
        let scale = Q::new(BigInt::one(), BigInt::from(n));
        let nested = AssocSeries::from_terms(
            Alphabet::Generators,
            a.max_degree(),
            right_nested_assoc(&p, n)
                .into_iter()
                .map(|(w, c)| (Word::from_letters(w), c * &scale)),
        );
        out.add_scaled(&lyndon_coordinates(&nested)?, &Q::one());
    }
    Ok(out)
}

/// Applies the Lie morphism `X -> image_x`, `Y -> image_y` to `u`.
///
/// Images are Lie series and so have no constant term; the result is exact
/// through `maxdeg` and the truncation orders of the inputs.
pub fn substitute(
    u: &LieSeries,
    image_x: &LieSeries,
    image_y: &LieSeries,
    maxdeg: usize,
) -> LieSeries {
    let d = maxdeg
        .min(u.max_degree)
        .min(image_x.max_degree)
        .min(image_y.max_degree);
    let mut memo: HashMap<LyndonWord, LieSeries> = HashMap::new();
    memo.insert(LyndonWord::letter(X), image_x.truncate(d));
    memo.insert(LyndonWord::letter(Y), image_y.truncate(d));
    fn image(w: &LyndonWord, memo: &mut HashMap<LyndonWord, LieSeries>, d: usize) -> LieSeries {
        if let Some(s) = memo.get(w) {
            return s.clone();
        }
        let (a, b) = w.standard_factorization().expect("letters are seeded");
        let ia = image(&a, memo, d);
        let ib = image(&b, memo, d);
        let s = lie_bracket(&ia, &ib, d);
        memo.insert(w.clone(), s.clone());
        s
    }
    let mut out = LieSeries::zero(d);
    for (w, c) in &u.terms {
        if w.len() > d {
            break;
        }
        let img = image(w, &mut memo, d);
        out.add_scaled(&img, c);
    }
    out
}

/// `Σ_k φ_k ad(A)^k v`, exact through `maxdeg`.
///
/// Since `A` has no degree-0 part each application of `ad(A)` raises the
/// degree, so the sum is finite; a truncated `φ` must be known far enough.
pub fn apply_ad_series(
    phi: &PowerSeries,
    a: &LieSeries,
    v: &LieSeries,
    maxdeg: usize,
) -> Result<LieSeries> {
    let d = maxdeg.min(a.max_degree).min(v.max_degree);
    let mut term = v.truncate(d);
    let mut out = term.scale(&phi.coeff(0)?);
    let mut k = 0;
    loop {
        k += 1;
        term = lie_bracket(a, &term, d);
        if term.is_zero() {
            break;
        }
        out.add_scaled(&term, &phi.coeff(k)?);
    }
    Ok(out.with_max_degree(d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    fn lw(s: &str) -> LyndonWord {
        LyndonWord::parse(s).unwrap()
    }

    #[test]
    fn lyndon_basis_small_degrees() {
        let b1: Vec<String> = lyndon_basis(1).iter().map(|w| w.to_string()).collect();
        assert_eq!(b1, ["X", "Y"]);
        let b2: Vec<String> = lyndon_basis(2).iter().map(|w| w.to_string()).collect();
        assert_eq!(b2, ["XY"]);
        let b4: Vec<String> = lyndon_basis(4).iter().map(|w| w.to_string()).collect();
        assert_eq!(b4, ["XXXY", "XXYY", "XYYY"]);
        assert_eq!(lyndon_basis(6).len(), 9);
    }

    #[test]
    fn lyndon_validation() {
        assert!(LyndonWord::parse("XXY").is_ok());
        assert!(LyndonWord::parse("XYX").is_err());
        assert!(LyndonWord::parse("XX").is_err());
        assert!(LyndonWord::parse("").is_err());
    }

    #[test]
    fn standard_factorization_and_bracketing() {
        assert_eq!(lw("XXY").bracket_string(), "[X,[X,Y]]");
        assert_eq!(lw("XYY").bracket_string(), "[[X,Y],Y]");
        assert_eq!(lw("XXYXY").standard_factorization().unwrap().1, lw("XY"));
        assert_eq!(lw("XYXYY").bracket_string(), "[[X,Y],[[X,Y],Y]]");
    }

    #[test]
    fn bracket_examples() {
        let d = 6;
        let x = LieSeries::x(d);
        let y = LieSeries::y(d);
        assert_eq!(lie_bracket(&x, &y, d), LieSeries::basis(lw("XY"), d));
        assert!(lie_bracket(&x, &x, d).is_zero());
        // [X,[Y,[X,Y]]] + [Y,[[X,Y],X]] + [[X,Y],[X,Y]] = 0
        let xy = lie_bracket(&x, &y, d);
        let a = lie_bracket(&x, &lie_bracket(&y, &xy, d), d);
        let b = lie_bracket(&y, &lie_bracket(&xy, &x, d), d);
        let c = lie_bracket(&xy, &xy, d);
        assert!(a.add(&b).add(&c).is_zero());
    }

    #[test]
    fn bracket_of_xy_with_xxy_needs_rewriting() {
        // [XY, XXY]: XY > XXY so it is -[XXY, XY]; XXY = [X, XY] and XY >= XY,
        // so XXYXY is the standard factorization.
        let d = 5;
        let r = lie_bracket(
            &LieSeries::basis(lw("XY"), d),
            &LieSeries::basis(lw("XXY"), d),
            d,
        );
        assert_eq!(r, LieSeries::basis(lw("XXYXY"), d).neg());
        // [XYY, XY] needs the Jacobi step.
        let r = lie_bracket(
            &LieSeries::basis(lw("XY"), d),
            &LieSeries::basis(lw("XYY"), d),
            d,
        );
        let via = bracket_via_assoc(
            &LieSeries::basis(lw("XY"), d),
            &LieSeries::basis(lw("XYY"), d),
            d,
        )
        .unwrap();
        assert_eq!(r, via);
    }

    #[test]
    fn dynkin_examples() {
        let d = 4;
        let g = |s: &str| AssocSeries::parse(Alphabet::Generators, d, s).unwrap();
        assert_eq!(dynkin_project(&g("X")).unwrap(), LieSeries::x(d));
        assert_eq!(
            dynkin_project(&g("XY - YX")).unwrap(),
            LieSeries::basis(lw("XY"), d)
        );
        assert_eq!(
            dynkin_project(&g("XY")).unwrap(),
            LieSeries::basis(lw("XY"), d).scale(&q(1, 2))
        );
        assert!(matches!(
            dynkin_project(&g("1 + X")),
            Err(Error::ConstantTerm { .. })
        ));
    }

    #[test]
    fn lyndon_coordinates_rejects_non_lie() {
        let a = AssocSeries::parse(Alphabet::Generators, 3, "XY").unwrap();
        assert!(matches!(lyndon_coordinates(&a), Err(Error::NotLie(_))));
    }

    #[test]
    fn ad_examples() {
        let d = 4;
        let ad = |s: &str| AssocSeries::parse(Alphabet::Ad, d, s).unwrap();
        assert_eq!(lie_to_ad(&LieSeries::x(d)), ad("x"));
        assert_eq!(lie_to_ad(&LieSeries::basis(lw("XY"), d)), ad("xy - yx"));
        assert_eq!(
            lie_to_ad(&LieSeries::basis(lw("XXY"), d)),
            ad("xxy - 2xyx + yxx")
        );
    }

    #[test]
    fn substitute_examples() {
        let d = 5;
        let x = LieSeries::x(d);
        let y = LieSeries::y(d);
        let xy = LieSeries::basis(lw("XY"), d);
        assert_eq!(substitute(&xy, &y.neg(), &x.neg(), d), xy.neg());
        assert_eq!(substitute(&x, &x.add(&y), &y, d), x.add(&y));
        let xxy = LieSeries::basis(lw("XXY"), d);
        let expected = lie_bracket(&y, &lie_bracket(&y, &x, d), d);
        assert_eq!(substitute(&xxy, &y, &x, d), expected);
        assert_eq!(substitute(&xxy, &x, &y, d), xxy);
    }

    #[test]
    fn apply_ad_series_examples() {
        let d = 4;
        let x = LieSeries::x(d);
        let y = LieSeries::y(d);
        let xy = LieSeries::basis(lw("XY"), d);
        let r = apply_ad_series(&PowerSeries::one_minus_exp_neg(d), &x, &y, d).unwrap();
        assert_eq!(r.homogeneous(2), xy);
        assert_eq!(r.homogeneous(1), LieSeries::zero(d));
        let z = PowerSeries::polynomial(vec![Q::zero(), Q::one()]);
        assert_eq!(apply_ad_series(&z, &x, &y, d).unwrap(), xy);
        let e = apply_ad_series(&PowerSeries::exp(d), &y, &y, d).unwrap();
        assert_eq!(e, y);
    }

    #[test]
    fn apply_ad_series_needs_enough_coefficients() {
        let d = 5;
        let short = PowerSeries::exp(2);
        let r = apply_ad_series(&short, &LieSeries::x(d), &LieSeries::y(d), d);
        assert!(matches!(r, Err(Error::NonTruncating { .. })));
    }

    #[test]
    fn coefficient_lookup_by_string() {
        let s = LieSeries::parse_terms(3, &[("XY", qi(2)), ("XXY", q(1, 3))]).unwrap();
        assert_eq!(s.coeff_of("XY"), qi(2));
        assert_eq!(s.coeff_of("XYY"), Q::zero());
        assert_eq!(s.to_string(), "2·[X,Y] + 1/3·[X,[X,Y]]");
    }
}
