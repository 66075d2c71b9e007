//! The symmetric Kashiwara-Vergne couple `(F⁰, G⁰)`.
//!
//! ```text
//! ψ(z)  = (e^z - 1 - z) / ((e^z - 1)(1 - e^{-z}))
//! F¹    = ∫₀¹ (1 - e^{-t ad X})/(1 - e^{-ad X}) ∘ ψ(ad Z(tX, tY)) dt · (X + Y)
//! F⁰    = ½(F¹(X,Y) + e^{ad X} F¹(-X,-Y)) + ¼(Z(X,Y) - X)
//! G⁰    = F⁰(-Y, -X)
//! ```
//!
//! The integrand is a Lie series whose coefficients are polynomials in `t`
//! ([`TLieSeries`]); the integral is taken coefficientwise and exactly.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::bch::bch_dynkin;
use crate::error::{Error, Result};
use crate::free_lie::{
    apply_ad_series, bracket_basis, lie_bracket, substitute, LieSeries, LyndonWord, X, Y,
};
use crate::rational::{inv_factorial, Q};
use crate::series::PowerSeries;

/// Polynomial in the formal parameter `t`, lowest power first.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TPoly(Vec<Q>);

impl TPoly {
    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        TPoly(coeffs)
    }

    pub fn constant(c: Q) -> Self {
        Self::new(vec![c])
    }

    /// `c t^k`
    pub fn monomial(c: Q, k: usize) -> Self {
        let mut v = vec![Q::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len());
        Self::new(
            (0..n)
                .map(|k| {
                    let a = self.0.get(k).cloned().unwrap_or_else(Q::zero);
                    let b = other.0.get(k).cloned().unwrap_or_else(Q::zero);
                    a + b
                })
                .collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::default();
        }
        let mut v = vec![Q::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        Self::new(v)
    }

    pub fn scale(&self, c: &Q) -> Self {
        Self::new(self.0.iter().map(|a| a * c).collect())
    }

    pub fn eval(&self, t: &Q) -> Q {
        self.0.iter().rev().fold(Q::zero(), |acc, c| acc * t + c)
    }

    /// `∫₀¹ p(t) dt`
    pub fn integrate_unit(&self) -> Q {
        self.0
            .iter()
            .enumerate()
            .map(|(k, c)| c / Q::from_integer((k as i64 + 1).into()))
            .fold(Q::zero(), |a, b| a + b)
    }
}

impl fmt::Display for TPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => format!("{c}"),
                1 => format!("{c}·t"),
                _ => format!("{c}·t^{k}"),
            })
            .collect();
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&crate::rational::join_terms(&parts))
        }
    }
}

/// A Lie series whose coefficients are polynomials in `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct TLieSeries {
    max_degree: usize,
    terms: BTreeMap<LyndonWord, TPoly>,
}

impl TLieSeries {
    pub fn zero(max_degree: usize) -> Self {
        Self {
            max_degree,
            terms: BTreeMap::new(),
        }
    }

    /// Constant in `t`.
    pub fn from_lie(u: &LieSeries) -> Self {
        Self::from_lie_with(u, |_| TPoly::constant(Q::one()))
    }

    /// Multiplies the degree-`n` component of `u` by `f(n)`.
    pub fn from_lie_with(u: &LieSeries, f: impl Fn(usize) -> TPoly) -> Self {
        let mut s = Self::zero(u.max_degree());
        for (w, c) in u.iter() {
            s.add_term(w, &f(w.len()).scale(c));
        }
        s
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn terms(&self) -> &BTreeMap<LyndonWord, TPoly> {
        &self.terms
    }

    pub fn coeff(&self, w: &LyndonWord) -> TPoly {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, w: &LyndonWord, p: &TPoly) {
        if p.is_zero() || w.len() > self.max_degree {
            return;
        }
        let sum = match self.terms.get(w) {
            Some(old) => old.add(p),
            None => p.clone(),
        };
        if sum.is_zero() {
            self.terms.remove(w);
        } else {
            self.terms.insert(w.clone(), sum);
        }
    }

    /// `self += p(t) · other`
    pub fn add_scaled(&mut self, other: &Self, p: &TPoly) {
        for (w, c) in &other.terms {
            self.add_term(w, &c.mul(p));
        }
    }

    /// `[u, v]`, exact through `maxdeg`.
    pub fn bracket(u: &Self, v: &Self, maxdeg: usize) -> Self {
        let d = maxdeg.min(u.max_degree).min(v.max_degree);
        let mut out = Self::zero(d);
        for (a, pa) in &u.terms {
            for (b, pb) in &v.terms {
                if a.len() + b.len() > d {
                    break;
                }
                let p = pa.mul(pb);
                for (w, e) in bracket_basis(a, b).iter() {
                    out.add_term(w, &p.scale(e));
                }
            }
        }
        out
    }

    /// `Σ_k c_k(t) ad(A)^k v`.
    pub fn apply_ad_series(coeffs: &[TPoly], a: &Self, v: &Self, maxdeg: usize) -> Result<Self> {
        let d = maxdeg.min(a.max_degree).min(v.max_degree);
        let mut term = v.clone();
        term.max_degree = d;
        term.terms.retain(|w, _| w.len() <= d);
        let mut out = Self::zero(d);
        let mut k = 0;
        while !term.is_zero() {
            let c = coeffs.get(k).ok_or(Error::NonTruncating {
                known: coeffs.len().saturating_sub(1),
                needed: k,
            })?;
            out.add_scaled(&term, c);
            term = Self::bracket(a, &term, d);
            k += 1;
        }
        Ok(out)
    }

    /// Coefficientwise `∫₀¹ dt`.
    pub fn integrate_unit(&self) -> LieSeries {
        LieSeries::from_terms(
            self.max_degree,
            self.terms
                .iter()
                .map(|(w, p)| (w.clone(), p.integrate_unit())),
        )
    }

    /// Specializes `t`.
    pub fn evaluate(&self, t: &Q) -> LieSeries {
        LieSeries::from_terms(
            self.max_degree,
            self.terms.iter().map(|(w, p)| (w.clone(), p.eval(t))),
        )
    }

    /// Whether every coefficient has `t`-degree at most its word length.
    pub fn respects_grading(&self) -> bool {
        self.terms
            .iter()
            .all(|(w, p)| p.degree().is_none_or(|k| k <= w.len()))
    }
}

/// A couple `(F, G)` of Lie series without constant term.
#[derive(Clone, Debug, PartialEq)]
pub struct KVPair {
    pub f: LieSeries,
    pub g: LieSeries,
}

impl KVPair {
    pub fn new(f: LieSeries, g: LieSeries) -> Self {
        Self { f, g }
    }

    pub fn zero(maxdeg: usize) -> Self {
        Self::new(LieSeries::zero(maxdeg), LieSeries::zero(maxdeg))
    }

    pub fn max_degree(&self) -> usize {
        self.f.max_degree().min(self.g.max_degree())
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(self.f.add(&other.f), self.g.add(&other.g))
    }

    pub fn scale(&self, c: &Q) -> Self {
        Self::new(self.f.scale(c), self.g.scale(c))
    }

    /// `(G(-Y,-X), F(-Y,-X))`, again a solution whenever `self` is.
    pub fn flip(&self) -> Self {
        let d = self.max_degree();
        Self::new(swap_negate(&self.g, d), swap_negate(&self.f, d))
    }

    /// Whether `G(X,Y) = F(-Y,-X)`.
    pub fn is_symmetric(&self) -> bool {
        swap_negate(&self.f, self.max_degree()) == self.g
    }
}

/// `u(-Y, -X)`
pub fn swap_negate(u: &LieSeries, maxdeg: usize) -> LieSeries {
    substitute(
        u,
        &LieSeries::y(maxdeg).neg(),
        &LieSeries::x(maxdeg).neg(),
        maxdeg,
    )
}

/// Taylor coefficients of `ψ(z) = (e^z - 1 - z)/((e^z - 1)(1 - e^{-z}))`
/// through `maxdeg`, by exact division once both sides are divided by `z²`.
pub fn psi_series(maxdeg: usize) -> PowerSeries {
    let n = maxdeg + 2;
    let mut num: Vec<Q> = (0..=n).map(inv_factorial).collect();
    num[0] = Q::zero();
    num[1] = Q::zero();
    // (e^z - 1)(1 - e^{-z}) = e^z + e^{-z} - 2
    let den: Vec<Q> = (0..=n)
        .map(|k| {
            if k == 0 || k % 2 == 1 {
                Q::zero()
            } else {
                inv_factorial(k) * Q::from_integer(2.into())
            }
        })
        .collect();
    let num = PowerSeries::truncated(num)
        .shift_down(2)
        .expect("starts at z^2");
    let den = PowerSeries::truncated(den)
        .shift_down(2)
        .expect("starts at z^2");
    num.div(&den, maxdeg).expect("denominator starts with 1")
}

/// Coefficients `c_k(t)` of `(1 - e^{-tz})/(1 - e^{-z}) = Σ_k c_k(t) z^k`,
/// through `z^maxdeg`. Numerator and denominator are both divided by `z`.
pub fn dilation_prefactor(maxdeg: usize) -> Vec<TPoly> {
    let den_inv = PowerSeries::one_minus_exp_neg_over_z(maxdeg)
        .inverse(maxdeg)
        .expect("constant term 1");
    // (1 - e^{-tz})/z = Σ_j (-1)^j t^{j+1} z^j / (j+1)!
    let num: Vec<TPoly> = (0..=maxdeg)
        .map(|j| {
            let c = inv_factorial(j + 1);
            TPoly::monomial(if j % 2 == 0 { c } else { -c }, j + 1)
        })
        .collect();
    (0..=maxdeg)
        .map(|k| {
            (0..=k).fold(TPoly::default(), |acc, j| {
                acc.add(&num[j].scale(&den_inv.coeffs()[k - j]))
            })
        })
        .collect()
}

/// `(1/t) u(tX, tY)`: the degree-`n` component times `t^{n-1}`.
pub fn dilate(u: &LieSeries) -> TLieSeries {
    TLieSeries::from_lie_with(u, |n| TPoly::monomial(Q::one(), n - 1))
}

/// The integrand of `F¹` as a `t`-polynomial Lie series.
pub fn f1_integrand(maxdeg: usize) -> Result<TLieSeries> {
    let z = bch_dynkin(maxdeg)?;
    // Z(t) = Z(tX, tY)
    let zt = TLieSeries::from_lie_with(&z, |n| TPoly::monomial(Q::one(), n));
    let x_plus_y = TLieSeries::from_lie(&LieSeries::x(maxdeg).add(&LieSeries::y(maxdeg)));
    let psi: Vec<TPoly> = psi_series(maxdeg)
        .coeffs()
        .iter()
        .map(|c| TPoly::constant(c.clone()))
        .collect();
    let inner = TLieSeries::apply_ad_series(&psi, &zt, &x_plus_y, maxdeg)?;
    let x = TLieSeries::from_lie(&LieSeries::x(maxdeg));
    TLieSeries::apply_ad_series(&dilation_prefactor(maxdeg), &x, &inner, maxdeg)
}

pub fn f1_series(maxdeg: usize) -> Result<LieSeries> {
    Ok(f1_integrand(maxdeg)?.integrate_unit())
}

/// The symmetric couple `(F⁰, G⁰)` through `maxdeg`.
pub fn f0_g0(maxdeg: usize) -> Result<KVPair> {
    let f1 = f1_series(maxdeg)?;
    let x = LieSeries::x(maxdeg);
    let y = LieSeries::y(maxdeg);
    let f1_neg = substitute(&f1, &x.neg(), &y.neg(), maxdeg);
    let conj = apply_ad_series(&PowerSeries::exp(maxdeg), &x, &f1_neg, maxdeg)?;
    let z = bch_dynkin(maxdeg)?;
    let half = Q::new(1.into(), 2.into());
    let quarter = Q::new(1.into(), 4.into());
    let f0 = f1.add(&conj).scale(&half).add(&z.sub(&x).scale(&quarter));
    let g0 = swap_negate(&f0, maxdeg);
    Ok(KVPair::new(f0, g0))
}

/// Reads an ad-monomial such as `"yxxY"` (meaning `[Y,[X,[X,Y]]]`): ad-letters
/// `x, y` acting on a final generator `X` or `Y`.
pub fn ad_monomial(s: &str, maxdeg: usize) -> Option<LieSeries> {
    let mut chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
    let last = chars.pop()?;
    let mut acc = match last {
        'X' => LieSeries::generator(X, maxdeg),
        'Y' => LieSeries::generator(Y, maxdeg),
        _ => return None,
    };
    for c in chars.into_iter().rev() {
        let a = match c {
            'x' => LieSeries::generator(X, maxdeg),
            'y' => LieSeries::generator(Y, maxdeg),
            _ => return None,
        };
        acc = lie_bracket(&a, &acc, maxdeg);
    }
    Some(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn psi_examples() {
        let psi = psi_series(12);
        assert_eq!(psi.coeffs()[0], q(1, 2));
        assert_eq!(psi.coeffs()[1], q(1, 6));
        // ψ(z) + ψ(-z) = 1
        let sum = psi.add(&psi.reflect());
        assert_eq!(sum.coeffs()[0], Q::one());
        assert!(sum.coeffs()[1..].iter().all(Zero::is_zero));
    }

    #[test]
    fn psi_matches_direct_oracle() {
        // Independent route: ψ = (sinh z - z)/(2cosh z - 2) + 1/2, with the odd
        // part checked against numerator·inverse(denominator) by multiplication.
        let n = 10;
        let psi = psi_series(n);
        let den = PowerSeries::truncated(
            (0..=n + 2)
                .map(|k| {
                    if k >= 2 && k % 2 == 0 {
                        inv_factorial(k) * Q::from_integer(2.into())
                    } else {
                        Q::zero()
                    }
                })
                .collect(),
        );
        let prod = psi.mul(&den.shift_down(2).unwrap());
        for k in 0..=n {
            assert_eq!(prod.coeffs()[k], inv_factorial(k + 2), "k = {k}");
        }
    }

    #[test]
    fn prefactor_low_orders() {
        let p = dilation_prefactor(3);
        assert_eq!(p[0], TPoly::monomial(Q::one(), 1));
        // (t - t²)/2 from (tz - t²z²/2)(1 + z/2) at z¹
        assert_eq!(p[1], TPoly::new(vec![Q::zero(), q(1, 2), q(-1, 2)]));
        // t = 1 gives 1 identically
        for (k, c) in p.iter().enumerate() {
            let v = c.eval(&Q::one());
            assert_eq!(v, if k == 0 { Q::one() } else { Q::zero() });
        }
    }

    #[test]
    fn f1_degree_one() {
        let f1 = f1_series(3).unwrap();
        assert_eq!(f1.coeff_of("X"), q(1, 4));
        assert_eq!(f1.coeff_of("Y"), q(1, 4));
        assert!(f1_integrand(4).unwrap().respects_grading());
    }

    #[test]
    fn f0_low_degree() {
        let p = f0_g0(3).unwrap();
        assert_eq!(p.f.homogeneous(1), LieSeries::y(3).scale(&q(1, 4)));
        assert_eq!(p.f.coeff_of("XY"), q(1, 24));
        assert!(p.is_symmetric());
    }

    #[test]
    fn dilate_examples() {
        let d = 4;
        let xy = LieSeries::x(d).add(&LieSeries::y(d));
        assert_eq!(dilate(&xy), TLieSeries::from_lie(&xy));
        let h = LieSeries::parse_terms(d, &[("XY", q(1, 2))]).unwrap();
        let dh = dilate(&h);
        assert_eq!(
            dh.coeff(&LyndonWord::parse("XY").unwrap()),
            TPoly::monomial(q(1, 2), 1)
        );
        let z = bch_dynkin(d).unwrap();
        assert_eq!(dilate(&z).evaluate(&Q::zero()), xy);
        assert_eq!(dilate(&z).evaluate(&Q::one()), z);
    }

    #[test]
    fn ad_monomial_reader() {
        let d = 4;
        assert_eq!(
            ad_monomial("xY", d).unwrap(),
            LieSeries::parse_terms(d, &[("XY", Q::one())]).unwrap()
        );
        assert!(ad_monomial("xz", d).is_none());
    }
}
