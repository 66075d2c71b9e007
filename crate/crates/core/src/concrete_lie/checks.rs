use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::algebra::LieAlgebraData;
use super::eval::{
    bch_guard, density_with, dilated_sum, evaluate_components, evaluate_cyclic,
    evaluate_lie_series, norm, AlgebraPoint,
};
use super::matfun::{ad_matrix, j_from_q, j_value, AnalyticFn};
use crate::bch::bch_cached;
use crate::error::{Error, Result};
use crate::free_algebra::CyclicSeries;
use crate::free_lie::LieSeries;
use crate::kv_solution::KVPair;

/// Settings shared by the numeric checks.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NumericConfig {
    pub samples: usize,
    pub seed: u64,
    /// Upper bound on `‖X‖` and `‖Y‖` (Euclidean coordinates).
    pub radius: f64,
    /// Central finite-difference step.
    pub step: f64,
    /// Dilation parameter at which `t`-derivatives are taken.
    pub t: f64,
    pub tolerance: f64,
    /// Truncation degree of the series evaluated numerically.
    pub max_degree: usize,
}

impl Default for NumericConfig {
    fn default() -> Self {
        Self {
            samples: 20,
            seed: 0,
            radius: 0.1,
            step: 1e-4,
            t: 0.5,
            tolerance: 1e-6,
            max_degree: 8,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleResult {
    pub index: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    pub x: AlgebraPoint,
    pub y: AlgebraPoint,
    pub lhs: Vec<f64>,
    pub rhs: Vec<f64>,
    pub abs_error: f64,
    pub rel_error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NumericReport {
    pub check: String,
    pub algebra: String,
    pub seed: u64,
    pub tolerance: f64,
    pub samples: Vec<SampleResult>,
    pub max_abs_error: f64,
    pub max_rel_error: f64,
    pub pass: bool,
}

impl NumericReport {
    fn new(
        check: &str,
        alg: &LieAlgebraData,
        cfg: &NumericConfig,
        samples: Vec<SampleResult>,
    ) -> Self {
        let max_abs_error = samples.iter().fold(0.0f64, |m, s| m.max(s.abs_error));
        let max_rel_error = samples.iter().fold(0.0f64, |m, s| m.max(s.rel_error));
        let pass = samples.iter().all(|s| s.rel_error <= cfg.tolerance);
        Self {
            check: check.to_string(),
            algebra: alg.name().to_string(),
            seed: cfg.seed,
            tolerance: cfg.tolerance,
            samples,
            max_abs_error,
            max_rel_error,
            pass,
        }
    }
}

/// `|a - b|` and `|a - b| / max(|a|, |b|, scale)`; both zero when `a = b`.
fn errors(lhs: &[f64], rhs: &[f64], scale: f64) -> (f64, f64) {
    let diff: Vec<f64> = lhs.iter().zip(rhs).map(|(a, b)| a - b).collect();
    let abs = norm(&diff);
    let denom = norm(lhs).max(norm(rhs)).max(scale);
    let rel = if abs == 0.0 { 0.0 } else { abs / denom };
    (abs, rel)
}

fn sample(
    index: usize,
    x: &AlgebraPoint,
    y: &AlgebraPoint,
    lhs: Vec<f64>,
    rhs: Vec<f64>,
    scale: f64,
) -> SampleResult {
    let (abs_error, rel_error) = errors(&lhs, &rhs, scale);
    SampleResult {
        index,
        degree: None,
        x: x.clone(),
        y: y.clone(),
        lhs,
        rhs,
        abs_error,
        rel_error,
    }
}

fn random_direction(rng: &mut ChaCha8Rng, dim: usize, min_norm: f64) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..=1.0)).collect();
        let n = norm(&v);
        if n <= 1.0 && n >= min_norm {
            return v;
        }
    }
}

/// Pairs drawn uniformly from the ball of the given radius, with norms kept
/// above a quarter of the radius so relative errors stay meaningful.
pub fn sample_pairs(
    dim: usize,
    n: usize,
    radius: f64,
    seed: u64,
) -> Vec<(AlgebraPoint, AlgebraPoint)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let point = |rng: &mut ChaCha8Rng| {
        let v = random_direction(rng, dim, 0.25);
        AlgebraPoint::new(v.iter().map(|c| c * radius).collect()).expect("finite sample")
    };
    (0..n)
        .map(|_| {
            let x = point(&mut rng);
            (x, point(&mut rng))
        })
        .collect()
}

/// Pairs of unit vectors.
pub fn unit_sample_pairs(dim: usize, n: usize, seed: u64) -> Vec<(AlgebraPoint, AlgebraPoint)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let point = |rng: &mut ChaCha8Rng| {
        let v = random_direction(rng, dim, 0.25);
        let s = norm(&v);
        AlgebraPoint::new(v.iter().map(|c| c / s).collect()).expect("finite sample")
    };
    (0..n)
        .map(|_| {
            let x = point(&mut rng);
            (x, point(&mut rng))
        })
        .collect()
}

fn run<F>(pairs: &[(AlgebraPoint, AlgebraPoint)], f: F) -> Result<Vec<SampleResult>>
where
    F: Fn(usize, &AlgebraPoint, &AlgebraPoint) -> Result<SampleResult> + Sync,
{
    pairs
        .par_iter()
        .enumerate()
        .map(|(i, (x, y))| f(i, x, y))
        .collect()
}

fn central(plus: &[f64], minus: &[f64], h: f64) -> Vec<f64> {
    plus.iter()
        .zip(minus)
        .map(|(p, m)| (p - m) / (2.0 * h))
        .collect()
}

/// `([X, F_t], [Y, G_t])` at `(x, y)`.
fn adjoint_field(
    alg: &LieAlgebraData,
    p: &KVPair,
    x: &AlgebraPoint,
    y: &AlgebraPoint,
    t: f64,
) -> (Vec<f64>, Vec<f64>) {
    let ft = dilated_sum(&evaluate_components(&p.f, alg, x, y), t);
    let gt = dilated_sum(&evaluate_components(&p.g, alg, x, y), t);
    (alg.bracket(x.coords(), &ft), alg.bracket(y.coords(), &gt))
}

/// `∂_t Z_t = [X, F_t]·∂_X Z_t + [Y, G_t]·∂_Y Z_t` at `t = cfg.t`.
pub fn check_eq10(alg: &LieAlgebraData, p: &KVPair, cfg: &NumericConfig) -> Result<NumericReport> {
    let z = bch_cached(cfg.max_degree)?;
    let (t, h) = (cfg.t, cfg.step);
    let pairs = sample_pairs(alg.dim(), cfg.samples, cfg.radius, cfg.seed);
    let rows = run(&pairs, |i, x, y| {
        bch_guard(alg, &x.scale(t + h), &y.scale(t + h))?;
        let zc = evaluate_components(&z, alg, x, y);
        let lhs = central(&dilated_sum(&zc, t + h), &dilated_sum(&zc, t - h), h);
        let (v, w) = adjoint_field(alg, p, x, y, t);
        let zt = |s: f64| {
            dilated_sum(
                &evaluate_components(&z, alg, &x.axpy(s, &v), &y.axpy(s, &w)),
                t,
            )
        };
        let rhs = central(&zt(h), &zt(-h), h);
        Ok(sample(i, x, y, lhs, rhs, x.norm() * y.norm()))
    })?;
    Ok(NumericReport::new("eq10", alg, cfg, rows))
}

/// `j^{-1/2}(tX) ∂_t j^{1/2}(tX) = ½ tr(ad X/(e^{t ad X} - 1) - 1/t)`
pub fn check_eq11(alg: &LieAlgebraData, cfg: &NumericConfig) -> Result<NumericReport> {
    let (t, h) = (cfg.t, cfg.step);
    let pairs = sample_pairs(alg.dim(), cfg.samples, cfg.radius, cfg.seed);
    let rows = run(&pairs, |i, x, y| {
        let half_log_j = |s: f64| -> Result<f64> {
            let j = j_value(alg, x.scale(s).coords())?;
            if j <= 0.0 {
                return Err(Error::NonPositiveJ(j));
            }
            Ok(0.5 * j.ln())
        };
        let lhs = (half_log_j(t + h)? - half_log_j(t - h)?) / (2.0 * h);
        let a = ad_matrix(alg, x.coords()) * t;
        let n = alg.dim();
        let b = AnalyticFn::bernoulli().apply(&a)? - DMatrix::<f64>::identity(n, n);
        let rhs = 0.5 * b.trace() / t;
        Ok(sample(i, x, y, vec![lhs], vec![rhs], x.norm() * x.norm()))
    })?;
    Ok(NumericReport::new("eq11", alg, cfg, rows))
}

/// Jacobian of `u_t` (or of its degree-`n` component) in the `x` or `y`
/// coordinates, by central differences.
#[allow(clippy::too_many_arguments)]
fn jacobian(
    alg: &LieAlgebraData,
    u: &LieSeries,
    x: &AlgebraPoint,
    y: &AlgebraPoint,
    wrt_x: bool,
    t: f64,
    h: f64,
    degree: Option<usize>,
) -> DMatrix<f64> {
    let d = alg.dim();
    let eval = |x: &AlgebraPoint, y: &AlgebraPoint| {
        let comps = evaluate_components(u, alg, x, y);
        match degree {
            Some(n) => comps.get(n).cloned().unwrap_or_else(|| vec![0.0; d]),
            None => dilated_sum(&comps, t),
        }
    };
    let mut jac = DMatrix::zeros(d, d);
    for i in 0..d {
        let mut e = vec![0.0; d];
        e[i] = 1.0;
        let (plus, minus) = if wrt_x {
            (eval(&x.axpy(h, &e), y), eval(&x.axpy(-h, &e), y))
        } else {
            (eval(x, &y.axpy(h, &e)), eval(x, &y.axpy(-h, &e)))
        };
        for (k, v) in central(&plus, &minus, h).into_iter().enumerate() {
            jac[(k, i)] = v;
        }
    }
    jac
}

/// `tr(ad X ∘ ∂_X F_t + ad Y ∘ ∂_Y G_t)` by finite-difference Jacobians; with
/// `degree = Some(n)` the homogeneous components `F_n`, `G_n` are used instead.
pub fn divergence_value(
    alg: &LieAlgebraData,
    p: &KVPair,
    x: &AlgebraPoint,
    y: &AlgebraPoint,
    t: f64,
    h: f64,
    degree: Option<usize>,
) -> f64 {
    let adx = ad_matrix(alg, x.coords());
    let ady = ad_matrix(alg, y.coords());
    let jf = jacobian(alg, &p.f, x, y, true, t, h, degree);
    let jg = jacobian(alg, &p.g, x, y, false, t, h, degree);
    (adx * jf).trace() + (ady * jg).trace()
}

/// `∂_t D_t = ([X, F_t]·∂_X + [Y, G_t]·∂_Y) D_t + tr(ad X ∘ ∂_X F_t + ad Y ∘ ∂_Y G_t) D_t`
pub fn check_eq19(alg: &LieAlgebraData, p: &KVPair, cfg: &NumericConfig) -> Result<NumericReport> {
    let z = bch_cached(cfg.max_degree)?;
    let (t, h) = (cfg.t, cfg.step);
    let pairs = sample_pairs(alg.dim(), cfg.samples, cfg.radius, cfg.seed);
    let rows = run(&pairs, |i, x, y| {
        let dt = |s: f64, x: &AlgebraPoint, y: &AlgebraPoint| {
            density_with(alg, &z, &x.scale(s), &y.scale(s))
        };
        let lhs = (dt(t + h, x, y)? - dt(t - h, x, y)?) / (2.0 * h);
        let (v, w) = adjoint_field(alg, p, x, y, t);
        let field = (dt(t, &x.axpy(h, &v), &y.axpy(h, &w))?
            - dt(t, &x.axpy(-h, &v), &y.axpy(-h, &w))?)
            / (2.0 * h);
        let trace = divergence_value(alg, p, x, y, t, h, None);
        let rhs = field + trace * dt(t, x, y)?;
        Ok(sample(i, x, y, vec![lhs], vec![rhs], x.norm() * y.norm()))
    })?;
    Ok(NumericReport::new("eq19", alg, cfg, rows))
}

/// `j(X) = e^{-tr(ad X)/2} q(X)`
pub fn check_jq(alg: &LieAlgebraData, cfg: &NumericConfig) -> Result<NumericReport> {
    let pairs = sample_pairs(alg.dim(), cfg.samples, cfg.radius, cfg.seed);
    let rows = run(&pairs, |i, x, y| {
        let j = j_value(alg, x.coords())?;
        let jq = j_from_q(alg, x.coords())?;
        Ok(sample(i, x, y, vec![j], vec![jq], 1.0))
    })?;
    Ok(NumericReport::new("jq", alg, cfg, rows))
}

/// `D(X, Y) = D(Y, X)`; the sides are reported so callers can inspect `D`.
pub fn check_density(alg: &LieAlgebraData, cfg: &NumericConfig) -> Result<NumericReport> {
    let z = bch_cached(cfg.max_degree)?;
    let pairs = sample_pairs(alg.dim(), cfg.samples, cfg.radius, cfg.seed);
    let rows = run(&pairs, |i, x, y| {
        let dxy = density_with(alg, &z, x, y)?;
        let dyx = density_with(alg, &z, y, x)?;
        Ok(sample(i, x, y, vec![dxy], vec![dyx], 1.0))
    })?;
    Ok(NumericReport::new("density", alg, cfg, rows))
}

/// `exp(ad Z(X, Y)) = exp(ad X) exp(ad Y)` as matrices.
pub fn check_exp_functoriality(alg: &LieAlgebraData, cfg: &NumericConfig) -> Result<NumericReport> {
    let z = bch_cached(cfg.max_degree)?;
    let pairs = sample_pairs(alg.dim(), cfg.samples, cfg.radius, cfg.seed);
    let exp = AnalyticFn::exp();
    let rows = run(&pairs, |i, x, y| {
        let zv = evaluate_lie_series(&z, alg, x, y)?.value;
        let lhs = exp.apply(&ad_matrix(alg, &zv))?;
        let rhs =
            exp.apply(&ad_matrix(alg, x.coords()))? * exp.apply(&ad_matrix(alg, y.coords()))?;
        Ok(sample(
            i,
            x,
            y,
            lhs.as_slice().to_vec(),
            rhs.as_slice().to_vec(),
            1.0,
        ))
    })?;
    Ok(NumericReport::new("exp-functoriality", alg, cfg, rows))
}

/// Degree-`d` part of `T(X, Y) = ½ tr(B(ad X) + B(ad Y) - B(ad Z) - 1)`
/// from matrix products of the homogeneous components of `Z`.
pub fn trace_rhs_component(
    alg: &LieAlgebraData,
    z: &LieSeries,
    x: &AlgebraPoint,
    y: &AlgebraPoint,
    d: usize,
) -> f64 {
    assert!(
        d >= 1 && d <= z.max_degree(),
        "degree {d} outside 1..={}",
        z.max_degree()
    );
    let n = alg.dim();
    let b = AnalyticFn::bernoulli().coeffs();
    let zc = evaluate_components(z, alg, x, y);
    let ads: Vec<DMatrix<f64>> = zc.iter().map(|c| ad_matrix(alg, c)).collect();
    // power[m] = degree-m part of (ad Z)^k
    let mut power: Vec<DMatrix<f64>> = ads.iter().take(d + 1).cloned().collect();
    let mut sum_z = b[1] * power[d].trace();
    for (k, bk) in b.iter().enumerate().take(d + 1).skip(2) {
        let mut next = vec![DMatrix::<f64>::zeros(n, n); d + 1];
        for m in k..=d {
            for j in 1..=(m - k + 1) {
                next[m] += &ads[j] * &power[m - j];
            }
        }
        power = next;
        sum_z += bk * power[d].trace();
    }
    let adx = ad_matrix(alg, x.coords());
    let ady = ad_matrix(alg, y.coords());
    let pure = adx.pow(d as u32).trace() + ady.pow(d as u32).trace();
    0.5 * (b[d] * pure - sum_z)
}

/// Compares, degree by degree, the numeric divergence of `p` minus the numeric
/// `T` against the numeric value of the universal residual `residual`. Where
/// the universal residual is zero this checks the trace identity itself.
/// Samples are unit vectors; components are polynomials so no guard applies.
pub fn check_eq8_bridge(
    alg: &LieAlgebraData,
    p: &KVPair,
    residual: &CyclicSeries,
    cfg: &NumericConfig,
) -> Result<NumericReport> {
    let maxdeg = p.max_degree().min(cfg.max_degree);
    let z = bch_cached(maxdeg)?;
    let pairs = unit_sample_pairs(alg.dim(), cfg.samples, cfg.seed);
    let nested: Vec<Vec<SampleResult>> = pairs
        .par_iter()
        .enumerate()
        .map(|(i, (x, y))| {
            let adx = ad_matrix(alg, x.coords());
            let ady = ad_matrix(alg, y.coords());
            (1..=maxdeg)
                .map(|d| {
                    let div = divergence_value(alg, p, x, y, 1.0, cfg.step, Some(d));
                    let t = trace_rhs_component(alg, &z, x, y, d);
                    let r = evaluate_cyclic(&residual.homogeneous(d), &adx, &ady);
                    let (abs_error, _) = errors(&[div - t], &[r], 0.0);
                    let rel_error = abs_error / 1f64.max(div.abs()).max(t.abs());
                    SampleResult {
                        index: i,
                        degree: Some(d),
                        x: x.clone(),
                        y: y.clone(),
                        lhs: vec![div],
                        rhs: vec![t + r],
                        abs_error,
                        rel_error,
                    }
                })
                .collect()
        })
        .collect();
    Ok(NumericReport::new(
        "eq8-bridge",
        alg,
        cfg,
        nested.into_iter().flatten().collect(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kv_equations::check_eq8;
    use crate::kv_solution::f0_g0;

    fn quick() -> NumericConfig {
        NumericConfig {
            samples: 4,
            max_degree: 6,
            ..Default::default()
        }
    }

    #[test]
    fn samples_are_reproducible_and_bounded() {
        let a = sample_pairs(3, 5, 0.1, 7);
        assert_eq!(a, sample_pairs(3, 5, 0.1, 7));
        assert_ne!(a, sample_pairs(3, 5, 0.1, 8));
        for (x, y) in &a {
            assert!(x.norm() <= 0.1 && y.norm() <= 0.1);
        }
        for (x, _) in unit_sample_pairs(2, 3, 1) {
            assert!((x.norm() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn abelian_checks_are_exact() {
        let alg = LieAlgebraData::abelian();
        let p = f0_g0(6).unwrap();
        let cfg = quick();
        for r in [
            check_eq10(&alg, &p, &cfg).unwrap(),
            check_eq11(&alg, &cfg).unwrap(),
            check_eq19(&alg, &p, &cfg).unwrap(),
        ] {
            assert!(r.samples.iter().all(|s| s.abs_error == 0.0), "{}", r.check);
            assert!(
                r.samples.iter().all(|s| s.lhs.iter().all(|v| *v == 0.0)),
                "{}",
                r.check
            );
        }
    }

    #[test]
    fn f0_passes_and_zero_pair_fails_on_sl2() {
        let alg = LieAlgebraData::sl2();
        let p = f0_g0(6).unwrap();
        let cfg = quick();
        assert!(check_eq10(&alg, &p, &cfg).unwrap().pass);
        assert!(check_eq19(&alg, &p, &cfg).unwrap().pass);
        let zero = KVPair::zero(6);
        assert!(!check_eq10(&alg, &zero, &cfg).unwrap().pass);
        let wrong = KVPair::new(p.g.clone(), p.f.clone());
        assert!(!check_eq10(&alg, &wrong, &cfg).unwrap().pass);
    }

    #[test]
    fn eq11_on_the_h_line() {
        // j^{1/2}(t s h) = sinh(ts)/(ts), so the left side is
        // d/dt log(sinh(ts)/(ts)) = s coth(ts) - 1/t.
        let alg = LieAlgebraData::sl2();
        let s = 0.08f64;
        let t = 0.5;
        let a = ad_matrix(&alg, &[s, 0.0, 0.0]) * t;
        let b = AnalyticFn::bernoulli().apply(&a).unwrap() - DMatrix::<f64>::identity(3, 3);
        let rhs = 0.5 * b.trace() / t;
        let closed = s / (t * s).tanh() - 1.0 / t;
        assert!((rhs - closed).abs() < 1e-12);
    }

    #[test]
    fn bridge_sees_only_true_residuals() {
        let p = f0_g0(4).unwrap();
        let r = check_eq8(&p, 4).unwrap();
        let cfg = NumericConfig {
            samples: 3,
            ..Default::default()
        };
        for alg in [LieAlgebraData::sl2(), LieAlgebraData::aff1()] {
            assert!(check_eq8_bridge(&alg, &p, &r.residual, &cfg).unwrap().pass);
            // Pretending the residual is (xx) must be caught wherever tr(ad X²) ≠ 0.
            let fake = CyclicSeries::single("xx", crate::rational::qi(1));
            assert!(!check_eq8_bridge(&alg, &p, &fake, &cfg).unwrap().pass);
        }
        let zero = KVPair::zero(4);
        let sl2 = LieAlgebraData::sl2();
        assert!(
            !check_eq8_bridge(&sl2, &zero, &CyclicSeries::zero(), &cfg)
                .unwrap()
                .pass
        );
        let rz = check_eq8(&zero, 4).unwrap();
        assert!(
            check_eq8_bridge(&sl2, &zero, &rz.residual, &cfg)
                .unwrap()
                .pass
        );
    }

    #[test]
    fn exp_functoriality_on_so3() {
        let cfg = NumericConfig {
            samples: 5,
            radius: 0.05,
            max_degree: 10,
            tolerance: 1e-8,
            ..Default::default()
        };
        assert!(
            check_exp_functoriality(&LieAlgebraData::so3(), &cfg)
                .unwrap()
                .pass
        );
    }
}
