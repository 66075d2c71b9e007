use std::collections::HashMap;
use std::f64::consts::LN_2;

use nalgebra::DMatrix;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::algebra::LieAlgebraData;
use super::matfun::{ad_matrix, j_value, spectral_norm, trace_of_word};
use crate::bch::bch_cached;
use crate::error::{Error, Result};
use crate::free_algebra::CyclicSeries;
use crate::free_lie::{LieSeries, LyndonWord};

/// A point `Σ x_i e_i` of a concrete Lie algebra.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AlgebraPoint(Vec<f64>);

impl AlgebraPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.iter().all(|c| c.is_finite()) {
            Ok(AlgebraPoint(coords))
        } else {
            Err(Error::Structure(
                "algebra point has non-finite coordinates".into(),
            ))
        }
    }

    pub fn zero(dim: usize) -> Self {
        AlgebraPoint(vec![0.0; dim])
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn norm(&self) -> f64 {
        norm(&self.0)
    }

    pub fn scale(&self, s: f64) -> Self {
        AlgebraPoint(self.0.iter().map(|v| v * s).collect())
    }

    /// `self + s·v`
    pub fn axpy(&self, s: f64, v: &[f64]) -> Self {
        AlgebraPoint(self.0.iter().zip(v).map(|(a, b)| a + s * b).collect())
    }
}

pub(crate) fn norm(v: &[f64]) -> f64 {
    v.iter().map(|c| c * c).sum::<f64>().sqrt()
}

/// A Lie series summed at a point, with an estimate of the neglected tail.
#[derive(Clone, Debug, PartialEq)]
pub struct Evaluation {
    pub value: Vec<f64>,
    pub tail_estimate: f64,
}

/// Checks `‖ad X‖ + ‖ad Y‖ ≤ ln 2` (spectral norms), a sufficient condition
/// for the Campbell-Hausdorff series to converge. Returns the ratio of the
/// left side to `ln 2`.
pub fn bch_guard(alg: &LieAlgebraData, x: &AlgebraPoint, y: &AlgebraPoint) -> Result<f64> {
    let s = spectral_norm(&ad_matrix(alg, x.coords())) + spectral_norm(&ad_matrix(alg, y.coords()));
    if s > LN_2 {
        return Err(Error::NormGuard {
            what: "‖ad X‖ + ‖ad Y‖".into(),
            value: s,
            bound: LN_2,
        });
    }
    Ok(s / LN_2)
}

/// Values of the Lyndon bracketings at `(x, y)`, memoized per call.
struct BracketValues<'a> {
    alg: &'a LieAlgebraData,
    memo: HashMap<LyndonWord, Vec<f64>>,
}

impl<'a> BracketValues<'a> {
    fn new(alg: &'a LieAlgebraData, x: &AlgebraPoint, y: &AlgebraPoint) -> Self {
        let mut memo = HashMap::new();
        memo.insert(LyndonWord::letter(0), x.coords().to_vec());
        memo.insert(LyndonWord::letter(1), y.coords().to_vec());
        Self { alg, memo }
    }

    fn value(&mut self, w: &LyndonWord) -> Vec<f64> {
        if let Some(v) = self.memo.get(w) {
            return v.clone();
        }
        let (a, b) = w
            .standard_factorization()
            .expect("letters are seeded in the memo");
        let va = self.value(&a);
        let vb = self.value(&b);
        let v = self.alg.bracket(&va, &vb);
        self.memo.insert(w.clone(), v.clone());
        v
    }
}

/// Homogeneous components `u_1(x, y), …, u_N(x, y)` of a Lie series, indexed
/// by degree (entry 0 is the zero vector). No convergence guard: each
/// component is a polynomial.
pub fn evaluate_components(
    u: &LieSeries,
    alg: &LieAlgebraData,
    x: &AlgebraPoint,
    y: &AlgebraPoint,
) -> Vec<Vec<f64>> {
    let d = alg.dim();
    let mut out = vec![vec![0.0; d]; u.max_degree() + 1];
    let mut values = BracketValues::new(alg, x, y);
    for (w, c) in u.iter() {
        let c = c.to_f64().unwrap_or(f64::NAN);
        let v = values.value(w);
        for (o, vi) in out[w.len()].iter_mut().zip(v) {
            *o += c * vi;
        }
    }
    out
}

/// Sum of the components, each scaled by `t^{n-1}`: the dilated series
/// `u_t(x, y) = u(tx, ty)/t` evaluated from precomputed components.
pub fn dilated_sum(components: &[Vec<f64>], t: f64) -> Vec<f64> {
    let d = components.first().map_or(0, Vec::len);
    let mut out = vec![0.0; d];
    let mut power = 1.0;
    for comp in components.iter().skip(1) {
        for (o, c) in out.iter_mut().zip(comp) {
            *o += power * c;
        }
        power *= t;
    }
    out
}

/// The Lie polynomial `u` evaluated at `(x, y)`, without a guard.
pub fn evaluate_lie_polynomial(
    u: &LieSeries,
    alg: &LieAlgebraData,
    x: &AlgebraPoint,
    y: &AlgebraPoint,
) -> Vec<f64> {
    dilated_sum(&evaluate_components(u, alg, x, y), 1.0)
}

/// A truncated Lie series summed at `(x, y)` inside the convergence guard.
/// The tail estimate is geometric: `‖u_N‖ ρ/(1 - ρ)` with `ρ` the guard
/// ratio.
pub fn evaluate_lie_series(
    u: &LieSeries,
    alg: &LieAlgebraData,
    x: &AlgebraPoint,
    y: &AlgebraPoint,
) -> Result<Evaluation> {
    let rho = bch_guard(alg, x, y)?;
    let comps = evaluate_components(u, alg, x, y);
    let last = comps.last().map_or(0.0, |c| norm(c));
    let tail_estimate = if last == 0.0 {
        0.0
    } else if rho < 1.0 {
        last * rho / (1.0 - rho)
    } else {
        f64::INFINITY
    };
    Ok(Evaluation {
        value: dilated_sum(&comps, 1.0),
        tail_estimate,
    })
}

fn positive_j(alg: &LieAlgebraData, x: &[f64]) -> Result<f64> {
    let j = j_value(alg, x)?;
    if j > 0.0 {
        Ok(j)
    } else {
        Err(Error::NonPositiveJ(j))
    }
}

/// `D(X, Y) = j^{1/2}(X) j^{1/2}(Y) / j^{1/2}(Z(X, Y))` with `Z` given.
pub fn density_with(
    alg: &LieAlgebraData,
    z: &LieSeries,
    x: &AlgebraPoint,
    y: &AlgebraPoint,
) -> Result<f64> {
    let zv = evaluate_lie_series(z, alg, x, y)?.value;
    let jx = positive_j(alg, x.coords())?;
    let jy = positive_j(alg, y.coords())?;
    let jz = positive_j(alg, &zv)?;
    Ok((jx * jy / jz).sqrt())
}

pub fn density_value(
    alg: &LieAlgebraData,
    x: &AlgebraPoint,
    y: &AlgebraPoint,
    maxdeg: usize,
) -> Result<f64> {
    density_with(alg, &*bch_cached(maxdeg)?, x, y)
}

/// Numeric value of a universal trace polynomial at `(ad X, ad Y)`.
pub fn evaluate_cyclic(c: &CyclicSeries, adx: &DMatrix<f64>, ady: &DMatrix<f64>) -> f64 {
    c.iter()
        .map(|(n, coeff)| {
            coeff.to_f64().unwrap_or(f64::NAN) * trace_of_word(&[adx, ady], n.letters())
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn pt(v: &[f64]) -> AlgebraPoint {
        AlgebraPoint::new(v.to_vec()).unwrap()
    }

    #[test]
    fn generator_evaluates_to_its_point() {
        let alg = LieAlgebraData::sl2();
        let x = pt(&[0.01, 0.02, -0.03]);
        let y = pt(&[0.0, 0.01, 0.01]);
        let v = evaluate_lie_series(&LieSeries::x(4), &alg, &x, &y).unwrap();
        assert_eq!(v.value, x.coords());
    }

    #[test]
    fn heisenberg_bch_terminates() {
        let alg = LieAlgebraData::heisenberg();
        let x = pt(&[0.1, 0.2, 0.0]);
        let y = pt(&[-0.1, 0.15, 0.05]);
        let z = bch_cached(8).unwrap();
        let e = evaluate_lie_series(&z, &alg, &x, &y).unwrap();
        let br = alg.bracket(x.coords(), y.coords());
        let expected: Vec<f64> = (0..3)
            .map(|i| x.coords()[i] + y.coords()[i] + 0.5 * br[i])
            .collect();
        for (a, b) in e.value.iter().zip(&expected) {
            assert!((a - b).abs() < 1e-15);
        }
        assert_eq!(e.tail_estimate, 0.0);
    }

    #[test]
    fn guard_rejects_large_points() {
        let alg = LieAlgebraData::so3();
        let x = pt(&[0.5, 0.0, 0.0]);
        assert!(matches!(
            evaluate_lie_series(&LieSeries::x(2), &alg, &x, &x),
            Err(Error::NormGuard { .. })
        ));
    }

    #[test]
    fn density_oracles() {
        let sl2 = LieAlgebraData::sl2();
        let x = pt(&[0.05, -0.02, 0.03]);
        let y = pt(&[-0.01, 0.04, 0.02]);
        assert!((density_value(&sl2, &x, &AlgebraPoint::zero(3), 8).unwrap() - 1.0).abs() < 1e-15);
        let dxy = density_value(&sl2, &x, &y, 10).unwrap();
        let dyx = density_value(&sl2, &y, &x, 10).unwrap();
        assert!((dxy - dyx).abs() < 1e-12);
        let h = LieAlgebraData::heisenberg();
        let d = density_value(&h, &pt(&[0.05, 0.02, 0.0]), &pt(&[0.01, -0.06, 0.02]), 8).unwrap();
        assert!((d - 1.0).abs() < 1e-14);
    }

    #[test]
    fn cyclic_evaluation() {
        let sl2 = LieAlgebraData::sl2();
        let adx = ad_matrix(&sl2, &[1.0, 0.0, 0.0]);
        let ady = ad_matrix(&sl2, &[0.0, 1.0, 1.0]);
        let c = CyclicSeries::single("xx", q(1, 8)).add(&CyclicSeries::single("xy", q(1, 2)));
        // tr(ad h ad h) = 8, tr(ad h ad(e+f)) = 0
        assert_eq!(evaluate_cyclic(&c, &adx, &ady), 1.0);
    }
}
