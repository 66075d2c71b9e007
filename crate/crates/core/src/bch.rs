//! The Campbell-Hausdorff series `Z(X, Y) = log(e^X e^Y)` by two independent
//! routes, the Bernoulli numbers and the series of the exponential
//! differential.
//!
//! * [`bch_dynkin`] enumerates the block sequences `X^{p_1} Y^{q_1} ⋯` of the
//!   Dynkin formula and brackets each word with the Lyndon rewriting rules.
//! * [`bch_log`] takes the associative logarithm of `e^X e^Y` and projects it
//!   with the Dynkin idempotent, whose Lyndon coordinates are read through the
//!   associative embedding.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, LazyLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::free_algebra::{Alphabet, AssocSeries};
use crate::free_lie::{
    apply_ad_series, bracket_basis, dynkin_project, LieSeries, LyndonWord, X, Y,
};
use crate::rational::{factorial, inv_factorial, Q};
use crate::series::PowerSeries;

/// `x/(e^x - 1)` through degree `n`.
pub fn bernoulli_series(n: usize) -> PowerSeries {
    PowerSeries::expm1_over_z(n)
        .inverse(n)
        .expect("(e^x - 1)/x has constant term 1")
}

/// `b_0, …, b_n` with `Σ b_k x^k / k! = x/(e^x - 1)`.
pub fn bernoulli_table(n: usize) -> Vec<Q> {
    bernoulli_series(n)
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| c * Q::from_integer(factorial(k)))
        .collect()
}

pub fn bernoulli(n: usize) -> Q {
    bernoulli_table(n).pop().expect("table has n + 1 entries")
}

/// `z/(1 - e^{-z})` through degree `n`.
pub fn exp_differential_inverse_series(n: usize) -> PowerSeries {
    PowerSeries::one_minus_exp_neg_over_z(n)
        .inverse(n)
        .expect("(1 - e^{-z})/z has constant term 1")
}

fn check_degree(maxdeg: usize) -> Result<()> {
    if maxdeg < 1 {
        return Err(Error::Degree {
            min: 1,
            got: maxdeg,
        });
    }
    Ok(())
}

/// Coefficients of the words of `log(e^X e^Y)` via the block expansion
/// `Σ_m (-1)^{m-1}/m Σ X^{p_1}Y^{q_1}⋯X^{p_m}Y^{q_m} / (p_1! q_1! ⋯)`,
/// blocks with `p_i + q_i > 0`, total degree at most `maxdeg`.
fn dynkin_word_coefficients(maxdeg: usize) -> HashMap<Vec<u8>, Q> {
    fn walk(
        word: &mut Vec<u8>,
        weight: &Q,
        m: usize,
        remaining: usize,
        out: &mut HashMap<Vec<u8>, Q>,
    ) {
        for size in 1..=remaining {
            for p in 0..=size {
                let q = size - p;
                let len = word.len();
                word.extend(std::iter::repeat_n(X, p));
                word.extend(std::iter::repeat_n(Y, q));
                let w = weight * inv_factorial(p) * inv_factorial(q);
                let sign: i64 = if m.is_multiple_of(2) { 1 } else { -1 };
                let c = Q::new(BigInt::from(sign), BigInt::from(m + 1)) * &w;
                *out.entry(word.clone()).or_insert_with(Q::zero) += c;
                walk(word, &w, m + 1, remaining - size, out);
                word.truncate(len);
            }
        }
    }
    let mut out = HashMap::new();
    walk(&mut Vec::new(), &Q::one(), 0, maxdeg, &mut out);
    out.retain(|_, c| !c.is_zero());
    out
}

/// Right-nested bracket `[a_1,[a_2,…,a_n]]` of a word, on the Lyndon basis.
fn right_nested(
    word: &[u8],
    memo: &mut HashMap<Vec<u8>, BTreeMap<LyndonWord, Q>>,
) -> BTreeMap<LyndonWord, Q> {
    if let Some(r) = memo.get(word) {
        return r.clone();
    }
    let r = if word.len() == 1 {
        BTreeMap::from([(LyndonWord::letter(word[0]), Q::one())])
    } else {
        let head = LyndonWord::letter(word[0]);
        let tail = right_nested(&word[1..], memo);
        let mut acc: BTreeMap<LyndonWord, Q> = BTreeMap::new();
        for (w, c) in &tail {
            for (z, d) in bracket_basis(&head, w).iter() {
                *acc.entry(z.clone()).or_insert_with(Q::zero) += c * d;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        acc
    };
    memo.insert(word.to_vec(), r.clone());
    r
}

/// `Z(X, Y)` through `maxdeg` from the Dynkin bracket formula.
pub fn bch_dynkin(maxdeg: usize) -> Result<LieSeries> {
    check_degree(maxdeg)?;
    let coeffs = dynkin_word_coefficients(maxdeg);
    let mut words: Vec<(Vec<u8>, Q)> = coeffs.into_iter().collect();
    // Deterministic accumulation order.
    words.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(&b.0)));
    let mut memo = HashMap::new();
    let mut out = LieSeries::zero(maxdeg);
    for (w, c) in words {
        // [a, a] = 0 kills every word ending in a repeated letter.
        if w.len() >= 2 && w[w.len() - 1] == w[w.len() - 2] {
            continue;
        }
        let scale = c * Q::new(BigInt::one(), BigInt::from(w.len()));
        let nested = LieSeries::from_terms(maxdeg, right_nested(&w, &mut memo));
        out.add_scaled(&nested, &scale);
    }
    Ok(out)
}

static BCH_CACHE: LazyLock<RwLock<HashMap<usize, Arc<LieSeries>>>> =
    LazyLock::new(|| RwLock::new(HashMap::new()));

/// [`bch_dynkin`], memoized per truncation degree.
pub fn bch_cached(maxdeg: usize) -> Result<Arc<LieSeries>> {
    if let Some(z) = BCH_CACHE.read().expect("bch cache poisoned").get(&maxdeg) {
        return Ok(z.clone());
    }
    let z = Arc::new(bch_dynkin(maxdeg)?);
    BCH_CACHE
        .write()
        .expect("bch cache poisoned")
        .insert(maxdeg, z.clone());
    Ok(z)
}

/// `Z(X, Y)` through `maxdeg` as the Dynkin projection of `log(e^X e^Y)`.
pub fn bch_log(maxdeg: usize) -> Result<LieSeries> {
    check_degree(maxdeg)?;
    let x = AssocSeries::letter(Alphabet::Generators, maxdeg, X);
    let y = AssocSeries::letter(Alphabet::Generators, maxdeg, Y);
    let prod = x.exp(maxdeg)?.mul(&y.exp(maxdeg)?, maxdeg)?;
    dynkin_project(&prod.log(maxdeg)?)
}

/// The part of `Z` of degree at most one in `Y`:
/// `X + (ad X / (1 - e^{-ad X})) Y`.
pub fn bch_linear_in_y(maxdeg: usize) -> Result<LieSeries> {
    check_degree(maxdeg)?;
    let x = LieSeries::x(maxdeg);
    let y = LieSeries::y(maxdeg);
    let phi = exp_differential_inverse_series(maxdeg);
    Ok(x.add(&apply_ad_series(&phi, &x, &y, maxdeg)?))
}

/// Terms of Y-degree at most one.
pub fn y_linear_part(z: &LieSeries) -> LieSeries {
    z.filter(|w| w.y_degree() <= 1)
}
