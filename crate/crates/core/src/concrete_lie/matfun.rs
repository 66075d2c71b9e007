use std::f64::consts::PI;
use std::sync::LazyLock;

use nalgebra::DMatrix;
use num_traits::ToPrimitive;

use super::algebra::LieAlgebraData;
use crate::bch::bernoulli_table;
use crate::error::{Error, Result};

/// Bound on the neglected tail of every matrix Taylor sum.
pub const TAIL_TOLERANCE: f64 = 1e-13;

const TABLE_LEN: usize = 120;

/// `(ad X)_{kj} = Σ_i x_i c_{ij}^k`
pub fn ad_matrix(alg: &LieAlgebraData, x: &[f64]) -> DMatrix<f64> {
    let d = alg.dim();
    DMatrix::from_fn(d, d, |k, j| {
        (0..d).map(|i| x[i] * alg.constant_f64(i, j, k)).sum()
    })
}

/// Largest singular value.
pub fn spectral_norm(a: &DMatrix<f64>) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    a.singular_values().max()
}

#[derive(Clone, Copy, Debug)]
enum Tail {
    /// `|c_n| ≤ 1/n!`
    Factorial,
    /// `|c_n| ≤ scale / radius^n`
    Geometric { scale: f64, radius: f64 },
}

/// A scalar power series `Σ c_n z^n` applied to square matrices by a Taylor
/// sum, cut where the tail `Σ_{n>K} |c_n| ‖A‖^n` provably drops below
/// [`TAIL_TOLERANCE`] (Frobenius norm, which is submultiplicative).
#[derive(Clone, Debug)]
pub struct AnalyticFn {
    name: &'static str,
    coeffs: Vec<f64>,
    tail: Tail,
}

static EXP: LazyLock<AnalyticFn> = LazyLock::new(|| {
    let mut c = vec![1.0; TABLE_LEN];
    for n in 1..TABLE_LEN {
        c[n] = c[n - 1] / n as f64;
    }
    AnalyticFn {
        name: "exp",
        coeffs: c,
        tail: Tail::Factorial,
    }
});

static PHI: LazyLock<AnalyticFn> = LazyLock::new(|| {
    // (-1)^n / (n+1)!
    let c = EXP.coeffs.windows(2).enumerate().map(|(n, w)| {
        let s = if n % 2 == 0 { 1.0 } else { -1.0 };
        s * w[1]
    });
    AnalyticFn {
        name: "(1 - e^-z)/z",
        coeffs: c.collect(),
        tail: Tail::Factorial,
    }
});

static SINHC_HALF: LazyLock<AnalyticFn> = LazyLock::new(|| {
    // (z/2)^{2m} / (2m+1)!
    let mut c = vec![0.0; TABLE_LEN - 1];
    for (n, slot) in c.iter_mut().enumerate() {
        if n % 2 == 0 {
            *slot = EXP.coeffs[n + 1] * 0.5f64.powi(n as i32);
        }
    }
    AnalyticFn {
        name: "sinh(z/2)/(z/2)",
        coeffs: c,
        tail: Tail::Factorial,
    }
});

static BERNOULLI: LazyLock<AnalyticFn> = LazyLock::new(|| {
    let c = bernoulli_table(TABLE_LEN)
        .iter()
        .zip(EXP.coeffs.iter())
        .map(|(b, inv_fact)| b.to_f64().unwrap_or(f64::NAN) * inv_fact)
        .collect();
    // |b_n| / n! = 2 ζ(n) / (2π)^n ≤ 4 / (2π)^n for n ≥ 2.
    AnalyticFn {
        name: "z/(e^z - 1)",
        coeffs: c,
        tail: Tail::Geometric {
            scale: 4.0,
            radius: 2.0 * PI,
        },
    }
});

impl AnalyticFn {
    pub fn exp() -> &'static Self {
        &EXP
    }

    /// `(1 - e^{-z})/z`
    pub fn phi() -> &'static Self {
        &PHI
    }

    /// `sinh(z/2)/(z/2)`
    pub fn sinhc_half() -> &'static Self {
        &SINHC_HALF
    }

    /// `B(z) = z/(e^z - 1)`
    pub fn bernoulli() -> &'static Self {
        &BERNOULLI
    }

    pub fn name(&self) -> &'static str {
        self.name
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Upper bound for `Σ_{n>k} |c_n| r^n`.
    fn tail_bound(&self, k: usize, r: f64) -> f64 {
        match self.tail {
            Tail::Factorial => {
                let m = (k + 2) as f64;
                if r >= m {
                    return f64::INFINITY;
                }
                // r^{k+1}/(k+1)! times the geometric ratio bound r/(k+2)
                let lead = (0..=k).fold(1.0, |acc, n| acc * r / (n + 1) as f64);
                lead / (1.0 - r / m)
            }
            Tail::Geometric { scale, radius } => {
                let q = r / radius;
                if q >= 1.0 {
                    return f64::INFINITY;
                }
                scale * q.powi(k as i32 + 1) / (1.0 - q)
            }
        }
    }

    /// Number of terms needed at norm `r`, or a guard error.
    pub fn terms_needed(&self, r: f64) -> Result<usize> {
        if let Tail::Geometric { radius, .. } = self.tail {
            if r >= radius {
                return Err(Error::NormGuard {
                    what: format!("‖A‖ for {}", self.name),
                    value: r,
                    bound: radius,
                });
            }
        }
        (0..self.coeffs.len())
            .find(|&k| self.tail_bound(k, r) < TAIL_TOLERANCE)
            .map(|k| k + 1)
            .ok_or_else(|| Error::NormGuard {
                what: format!("‖A‖ for {}", self.name),
                value: r,
                bound: self.largest_norm(),
            })
    }

    fn largest_norm(&self) -> f64 {
        let k = self.coeffs.len() - 1;
        let (mut lo, mut hi) = (0.0, 1e3);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if self.tail_bound(k, mid) < TAIL_TOLERANCE {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }

    /// `f(A)` by Horner's rule.
    pub fn apply(&self, a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        assert!(a.is_square(), "matrix functions need a square matrix");
        let n = a.nrows();
        let k = self.terms_needed(a.norm())?;
        let id = DMatrix::<f64>::identity(n, n);
        let mut acc = &id * self.coeffs[k - 1];
        for c in self.coeffs[..k - 1].iter().rev() {
            acc = &acc * a + &id * *c;
        }
        Ok(acc)
    }

    pub fn apply_scalar(&self, z: f64) -> Result<f64> {
        let k = self.terms_needed(z.abs())?;
        Ok(self.coeffs[..k]
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * z + c))
    }
}

/// `j(X) = det((1 - e^{-ad X})/ad X)`
pub fn j_value(alg: &LieAlgebraData, x: &[f64]) -> Result<f64> {
    Ok(AnalyticFn::phi().apply(&ad_matrix(alg, x))?.determinant())
}

/// `q(X) = det(sinh(ad X/2)/(ad X/2))`
pub fn q_value(alg: &LieAlgebraData, x: &[f64]) -> Result<f64> {
    Ok(AnalyticFn::sinhc_half()
        .apply(&ad_matrix(alg, x))?
        .determinant())
}

/// `e^{-tr(ad X)/2} q(X)`, the second expression of `j`.
pub fn j_from_q(alg: &LieAlgebraData, x: &[f64]) -> Result<f64> {
    let tr = ad_matrix(alg, x).trace();
    Ok((-0.5 * tr).exp() * q_value(alg, x)?)
}

/// `ln j(X) = -tr(ad X)/2 + Σ_{n≥1} b_{2n} tr((ad X)^{2n}) / ((2n)! 2n)`
pub fn log_j_series(alg: &LieAlgebraData, x: &[f64]) -> Result<f64> {
    let a = ad_matrix(alg, x);
    let b = AnalyticFn::bernoulli();
    let r = a.norm();
    let k = b.terms_needed(r)?;
    let a2 = &a * &a;
    let mut power = a2.clone();
    let mut s = -0.5 * a.trace();
    for n in (1..).take_while(|n| 2 * n < k) {
        s += b.coeffs()[2 * n] * power.trace() / (2 * n) as f64;
        power = &power * &a2;
    }
    Ok(s)
}

/// `tr(M_1 ⋯ M_k)` for the word of matrices picked by `letters`.
pub fn trace_of_word(mats: &[&DMatrix<f64>], letters: &[u8]) -> f64 {
    let n = mats[0].nrows();
    let mut acc = DMatrix::<f64>::identity(n, n);
    for &l in letters {
        acc = &acc * mats[l as usize];
    }
    acc.trace()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn ad_matrices() {
        let ab = LieAlgebraData::abelian();
        assert_eq!(ad_matrix(&ab, &[0.3, -0.2]), DMatrix::zeros(2, 2));
        let h = LieAlgebraData::heisenberg();
        let ade = ad_matrix(&h, &[1.0, 0.0, 0.0]);
        // ad(e) f = z: column f, row z.
        let mut expected = DMatrix::zeros(3, 3);
        expected[(2, 1)] = 1.0;
        assert_eq!(ade, expected);
        let sl2 = LieAlgebraData::sl2();
        let adh = ad_matrix(&sl2, &[1.0, 0.0, 0.0]);
        assert_eq!(
            adh,
            DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![0.0, 2.0, -2.0]))
        );
    }

    #[test]
    fn scalar_functions() {
        let z: f64 = 0.7;
        assert!(close(
            AnalyticFn::exp().apply_scalar(z).unwrap(),
            z.exp(),
            2.0 * TAIL_TOLERANCE
        ));
        assert!(close(
            AnalyticFn::phi().apply_scalar(z).unwrap(),
            (1.0 - (-z).exp()) / z,
            2.0 * TAIL_TOLERANCE
        ));
        assert!(close(
            AnalyticFn::sinhc_half().apply_scalar(z).unwrap(),
            (z / 2.0).sinh() / (z / 2.0),
            2.0 * TAIL_TOLERANCE
        ));
        assert!(close(
            AnalyticFn::bernoulli().apply_scalar(z).unwrap(),
            z / z.exp_m1(),
            2.0 * TAIL_TOLERANCE
        ));
        assert!(matches!(
            AnalyticFn::bernoulli().apply_scalar(7.0),
            Err(Error::NormGuard { .. })
        ));
    }

    #[test]
    fn exp_of_nilpotent() {
        let h = LieAlgebraData::heisenberg();
        let a = ad_matrix(&h, &[0.5, 0.0, 0.0]);
        let e = AnalyticFn::exp().apply(&a).unwrap();
        let expected = DMatrix::identity(3, 3) + &a;
        assert!((e - expected).norm() < 1e-15);
    }

    #[test]
    fn j_oracles() {
        let ab = LieAlgebraData::abelian();
        assert_eq!(j_value(&ab, &[0.1, 0.2]).unwrap(), 1.0);
        let h = LieAlgebraData::heisenberg();
        assert!(close(j_value(&h, &[0.3, -0.2, 0.1]).unwrap(), 1.0, 1e-14));
        let sl2 = LieAlgebraData::sl2();
        for s in [0.05f64, 0.3, 1.0] {
            let expected = (s.sinh() / s).powi(2);
            assert!(close(
                j_value(&sl2, &[s, 0.0, 0.0]).unwrap(),
                expected,
                1e-12
            ));
            assert!(close(
                q_value(&sl2, &[s, 0.0, 0.0]).unwrap(),
                expected,
                1e-12
            ));
        }
        // aff(1) is not unimodular: j(s a) = (1 - e^{-s})/s.
        let aff = LieAlgebraData::aff1();
        let s: f64 = 0.4;
        assert!(close(
            j_value(&aff, &[s, 0.0]).unwrap(),
            (1.0 - (-s).exp()) / s,
            1e-14
        ));
        assert!(close(
            j_from_q(&aff, &[s, 0.3]).unwrap(),
            j_value(&aff, &[s, 0.3]).unwrap(),
            1e-14
        ));
        for alg in [aff, sl2, LieAlgebraData::so3()] {
            let x = vec![0.2; alg.dim()];
            let j = j_value(&alg, &x).unwrap();
            assert!(close(log_j_series(&alg, &x).unwrap(), j.ln(), 1e-13));
        }
    }

    #[test]
    fn word_traces() {
        let sl2 = LieAlgebraData::sl2();
        let x = ad_matrix(&sl2, &[1.0, 0.0, 0.0]);
        let y = ad_matrix(&sl2, &[0.0, 1.0, 0.0]);
        assert_eq!(trace_of_word(&[&x, &y], &[0, 0]), 8.0);
        assert_eq!(trace_of_word(&[&x, &y], &[0, 1]), 0.0);
    }
}
