//! The two Kashiwara-Vergne equations for a couple `(F, G)`:
//!
//! ```text
//! (7)  X + Y - log(e^Y e^X) = (1 - e^{-ad X}) F + (e^{ad Y} - 1) G
//! (8)  tr(ad X ∘ ∂_X F + ad Y ∘ ∂_Y G)
//!          = ½ tr(B(ad X) + B(ad Y) - B(ad Z) - 1),   B(z) = z/(e^z - 1)
//! ```
//!
//! The first is an identity of Lie series. The second is checked in the space
//! of cyclic words in `x = ad X`, `y = ad Y`, where every trace polynomial
//! that holds for all Lie algebras lives.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::bch::{bch_dynkin, bernoulli_series};
use crate::error::Result;
use crate::free_algebra::{cyclic_reduce, Alphabet, AssocSeries, CyclicSeries};
use crate::free_lie::{apply_ad_series, lie_to_ad, substitute, LieSeries, LyndonWord, X, Y};
use crate::kv_solution::KVPair;
use crate::rational::{max_abs_numerator, Q};
use crate::series::PowerSeries;

#[derive(Clone, Debug, PartialEq)]
pub struct Eq7Residual {
    pub residual: LieSeries,
    /// `(degree, max |numerator|)` for every degree `1..=max_degree`.
    pub max_numerators: Vec<(usize, BigInt)>,
}

impl Eq7Residual {
    pub fn is_zero(&self) -> bool {
        self.residual.is_zero()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Eq8Residual {
    pub residual: CyclicSeries,
    pub max_degree: usize,
}

impl Eq8Residual {
    pub fn is_zero(&self) -> bool {
        self.residual.is_zero()
    }

    /// Whether the residual vanishes in every degree up to `d`.
    pub fn is_zero_through(&self, d: usize) -> bool {
        self.residual.truncate(d).is_zero()
    }

    pub fn degree(&self, d: usize) -> CyclicSeries {
        self.residual.homogeneous(d)
    }
}

/// `X + Y - Z(Y, X)`
pub fn eq7_lhs(maxdeg: usize) -> Result<LieSeries> {
    let z = bch_dynkin(maxdeg)?;
    let x = LieSeries::x(maxdeg);
    let y = LieSeries::y(maxdeg);
    let zyx = substitute(&z, &y, &x, maxdeg);
    Ok(x.add(&y).sub(&zyx))
}

/// `(1 - e^{-ad X}) F + (e^{ad Y} - 1) G`
pub fn eq7_rhs(p: &KVPair, maxdeg: usize) -> Result<LieSeries> {
    let x = LieSeries::x(maxdeg);
    let y = LieSeries::y(maxdeg);
    let a = apply_ad_series(&PowerSeries::one_minus_exp_neg(maxdeg), &x, &p.f, maxdeg)?;
    let b = apply_ad_series(&PowerSeries::exp_minus_one(maxdeg), &y, &p.g, maxdeg)?;
    Ok(a.add(&b))
}

pub fn check_eq7(p: &KVPair, maxdeg: usize) -> Result<Eq7Residual> {
    let d = maxdeg.min(p.max_degree());
    let residual = eq7_lhs(d)?.sub(&eq7_rhs(p, d)?);
    let max_numerators = (1..=d)
        .map(|n| {
            let h = residual.homogeneous(n);
            (n, max_abs_numerator(h.terms().values()))
        })
        .collect();
    Ok(Eq7Residual {
        residual,
        max_numerators,
    })
}

/// Operator `s ↦ ∂_g b(w)·s` written as a polynomial in ad-letters, where
/// `g` is the differentiation generator. For `[A, B]`:
/// `N([A,B]) = ad(A)·N(B) - ad(B)·N(A)` (slot in `B`, then slot in `A` via
/// antisymmetry).
struct SlotForms {
    generator: u8,
    maxdeg: usize,
    memo: HashMap<LyndonWord, AssocSeries>,
}

impl SlotForms {
    fn new(generator: u8, maxdeg: usize) -> Self {
        Self {
            generator,
            maxdeg,
            memo: HashMap::new(),
        }
    }

    fn form(&mut self, w: &LyndonWord) -> Result<AssocSeries> {
        if let Some(n) = self.memo.get(w) {
            return Ok(n.clone());
        }
        let d = self.maxdeg;
        let n = match w.standard_factorization() {
            None => {
                if w.letters()[0] == self.generator {
                    AssocSeries::one(Alphabet::Ad, d)
                } else {
                    AssocSeries::zero(Alphabet::Ad, d)
                }
            }
            Some((a, b)) => {
                let na = self.form(&a)?;
                let nb = self.form(&b)?;
                let ad_a = lie_to_ad(&LieSeries::basis(a, d));
                let ad_b = lie_to_ad(&LieSeries::basis(b, d));
                ad_a.mul(&nb, d)?.sub(&ad_b.mul(&na, d)?)?
            }
        };
        self.memo.insert(w.clone(), n.clone());
        Ok(n)
    }

    /// `Σ c_w N(w)` for `u = Σ c_w b(w)`.
    fn series(&mut self, u: &LieSeries) -> Result<AssocSeries> {
        let mut out = AssocSeries::zero(Alphabet::Ad, self.maxdeg);
        for (w, c) in u.iter() {
            if w.len() > self.maxdeg {
                break;
            }
            let n = self.form(w)?;
            out.add_scaled(&n, c)?;
        }
        Ok(out)
    }
}

/// `∂_g u` as an ad-polynomial acting on the slot (placed rightmost).
pub fn slot_derivative(u: &LieSeries, generator: u8) -> Result<AssocSeries> {
    SlotForms::new(generator, u.max_degree()).series(u)
}

/// `tr(ad X ∘ ∂_X F + ad Y ∘ ∂_Y G)` as a cyclic series.
pub fn divergence(p: &KVPair, maxdeg: usize) -> Result<CyclicSeries> {
    let d = maxdeg.min(p.max_degree());
    let mut out = CyclicSeries::zero();
    for (generator, series) in [(X, &p.f), (Y, &p.g)] {
        let n = SlotForms::new(generator, d).series(&series.truncate(d))?;
        let letter = AssocSeries::letter(Alphabet::Ad, d, generator);
        out = out.add(&cyclic_reduce(&letter.mul(&n, d)?)?);
    }
    Ok(out)
}

/// `Σ_k φ_k a^k` for an associative series `a` without constant term.
fn eval_power_series(phi: &PowerSeries, a: &AssocSeries, maxdeg: usize) -> Result<AssocSeries> {
    let mut out = AssocSeries::one(a.alphabet(), maxdeg).scale(&phi.coeff(0)?);
    let mut power = AssocSeries::one(a.alphabet(), maxdeg);
    for k in 1..=maxdeg {
        power = power.mul(a, maxdeg)?;
        if power.is_zero() {
            break;
        }
        out.add_scaled(&power, &phi.coeff(k)?)?;
    }
    Ok(out)
}

/// `B(ad X) + B(ad Y) - B(ad Z) - 1` before taking traces. Its constant term
/// is exactly zero.
pub fn trace_rhs_operator(maxdeg: usize) -> Result<AssocSeries> {
    let b = bernoulli_series(maxdeg);
    let x = AssocSeries::letter(Alphabet::Ad, maxdeg, X);
    let y = AssocSeries::letter(Alphabet::Ad, maxdeg, Y);
    let adz = lie_to_ad(&bch_dynkin(maxdeg)?);
    let one = AssocSeries::one(Alphabet::Ad, maxdeg);
    eval_power_series(&b, &x, maxdeg)?
        .add(&eval_power_series(&b, &y, maxdeg)?)?
        .sub(&eval_power_series(&b, &adz, maxdeg)?)?
        .sub(&one)
}

/// The universal right-hand side `T(X, Y)` of the trace equation.
pub fn trace_rhs(maxdeg: usize) -> Result<CyclicSeries> {
    let op = trace_rhs_operator(maxdeg)?;
    assert!(
        op.constant_term().is_zero(),
        "constant terms of B(x) + B(y) - B(ad Z) - 1 must cancel, got {}",
        op.constant_term()
    );
    Ok(cyclic_reduce(&op)?.scale(&Q::new(1.into(), 2.into())))
}

pub fn check_eq8(p: &KVPair, maxdeg: usize) -> Result<Eq8Residual> {
    let d = maxdeg.min(p.max_degree());
    let residual = divergence(p, d)?.sub(&trace_rhs(d)?);
    Ok(Eq8Residual {
        residual,
        max_degree: d,
    })
}

/// Degrees `1..=max_degree` where a cyclic series has nonzero component.
pub fn nonzero_degrees(c: &CyclicSeries, max_degree: usize) -> Vec<usize> {
    (1..=max_degree)
        .filter(|&n| !c.homogeneous(n).is_zero())
        .collect()
}

/// Largest absolute numerator in each degree.
pub fn cyclic_max_numerators(c: &CyclicSeries, max_degree: usize) -> Vec<(usize, BigInt)> {
    (1..=max_degree)
        .map(|n| {
            let h = c.homogeneous(n);
            let m = max_abs_numerator(h.terms().values());
            (n, if h.is_zero() { BigInt::zero() } else { m })
        })
        .collect()
}

/// Sums coefficients of necklaces with the same `(#x, #y)` letter content.
///
/// On a Lie algebra where all `ad` operators are simultaneously triangular
/// (for instance any solvable algebra over ℂ), the trace of a word depends
/// only on its letter content, so a cyclic series whose content sums all
/// vanish is invisible there.
pub fn letter_content(c: &CyclicSeries) -> BTreeMap<(usize, usize), Q> {
    let mut out: BTreeMap<(usize, usize), Q> = BTreeMap::new();
    for (n, coeff) in c.iter() {
        let ys = n.letters().iter().filter(|&&l| l == Y).count();
        *out.entry((n.len() - ys, ys)).or_insert_with(Q::zero) += coeff;
    }
    out.retain(|_, v| !v.is_zero());
    out
}
