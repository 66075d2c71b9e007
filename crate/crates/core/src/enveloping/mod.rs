//! The universal enveloping algebra `U(𝔤)` of a concrete Lie algebra in PBW
//! normal form, the symmetrization `β: S[𝔤] → U(𝔤)`, the Gutt star product
//! and the Duflo map `γ = β ∘ j^{1/2}(∂)`.
//!
//! PBW order is the declared basis order. Everything is exact.

mod elements;

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use elements::{SymElement, UEAElement};

use crate::bch::bernoulli_table;
use crate::concrete_lie::LieAlgebraData;
use crate::error::{Error, Result};
use crate::rational::{inv_factorial, Q};

type Terms = BTreeMap<Vec<usize>, Q>;
type LmulMemo = HashMap<(usize, Vec<usize>), Rc<Terms>>;

fn add_term(acc: &mut Terms, m: &[usize], c: &Q) {
    if c.is_zero() {
        return;
    }
    let e = acc.entry(m.to_vec()).or_insert_with(Q::zero);
    *e += c;
    if e.is_zero() {
        acc.remove(m);
    }
}

/// Working context over one algebra, memoizing PBW rewriting and
/// symmetrization across calls.
pub struct Uea<'a> {
    alg: &'a LieAlgebraData,
    lmul_memo: RefCell<LmulMemo>,
    beta_memo: RefCell<HashMap<Vec<usize>, Rc<Terms>>>,
}

impl<'a> Uea<'a> {
    pub fn new(alg: &'a LieAlgebraData) -> Self {
        Self {
            alg,
            lmul_memo: RefCell::new(HashMap::new()),
            beta_memo: RefCell::new(HashMap::new()),
        }
    }

    pub fn algebra(&self) -> &LieAlgebraData {
        self.alg
    }

    /// `e_i · s` for a sorted monomial `s`, in normal form. Uses
    /// `e_i e_j = e_j e_i + [e_i, e_j]` for `i > j`.
    fn lmul(&self, i: usize, s: &[usize]) -> Rc<Terms> {
        if s.first().is_none_or(|&s0| i <= s0) {
            let mut m = Vec::with_capacity(s.len() + 1);
            m.push(i);
            m.extend_from_slice(s);
            return Rc::new(BTreeMap::from([(m, Q::one())]));
        }
        let key = (i, s.to_vec());
        if let Some(r) = self.lmul_memo.borrow().get(&key) {
            return r.clone();
        }
        let (s0, rest) = (s[0], &s[1..]);
        let mut out = Terms::new();
        for (t, c) in self.lmul(i, rest).iter() {
            for (u, d) in self.lmul(s0, t).iter() {
                add_term(&mut out, u, &(c * d));
            }
        }
        for k in 0..self.alg.dim() {
            let c = self.alg.constant(i, s0, k);
            if c.is_zero() {
                continue;
            }
            for (u, d) in self.lmul(k, rest).iter() {
                add_term(&mut out, u, &(c * d));
            }
        }
        let out = Rc::new(out);
        self.lmul_memo.borrow_mut().insert(key, out.clone());
        out
    }

    /// Left-multiplies a normal form by the word `a`.
    fn word_times(&self, a: &[usize], v: &Terms) -> Terms {
        let mut cur = v.clone();
        for &l in a.iter().rev() {
            let mut next = Terms::new();
            for (t, c) in &cur {
                for (u, d) in self.lmul(l, t).iter() {
                    add_term(&mut next, u, &(c * d));
                }
            }
            cur = next;
        }
        cur
    }

    pub fn pbw_normal_form(&self, word: &[usize]) -> UEAElement {
        let one = BTreeMap::from([(Vec::new(), Q::one())]);
        UEAElement::from_map(self.word_times(word, &one))
    }

    pub fn mul(&self, u: &UEAElement, v: &UEAElement) -> UEAElement {
        let mut out = Terms::new();
        for (a, ca) in u.iter() {
            for (m, c) in self.word_times(a, v.terms()) {
                add_term(&mut out, &m, &(ca * c));
            }
        }
        UEAElement::from_map(out)
    }

    pub fn commutator(&self, u: &UEAElement, v: &UEAElement) -> UEAElement {
        self.mul(u, v).sub(&self.mul(v, u))
    }

    /// `β(m) = (1/n) Σ_k e_{m_k} β(m without m_k)`
    fn beta_monomial(&self, m: &[usize]) -> Rc<Terms> {
        if m.len() <= 1 {
            return Rc::new(BTreeMap::from([(m.to_vec(), Q::one())]));
        }
        if let Some(r) = self.beta_memo.borrow().get(m) {
            return r.clone();
        }
        let n = Q::from_integer(m.len().into());
        let mut out = Terms::new();
        let mut k = 0;
        while k < m.len() {
            let i = m[k];
            let mult = m[k..].iter().take_while(|&&j| j == i).count();
            let mut rest = m.to_vec();
            rest.remove(k);
            let weight = Q::from_integer(mult.into()) / &n;
            for (t, c) in self.beta_monomial(&rest).iter() {
                for (u, d) in self.lmul(i, t).iter() {
                    add_term(&mut out, u, &(&weight * c * d));
                }
            }
            k += mult;
        }
        let out = Rc::new(out);
        self.beta_memo.borrow_mut().insert(m.to_vec(), out.clone());
        out
    }

    /// `β`: average over all orderings, then PBW normal form.
    pub fn symmetrize(&self, p: &SymElement) -> UEAElement {
        let mut out = Terms::new();
        for (m, c) in p.iter() {
            for (u, d) in self.beta_monomial(m).iter() {
                add_term(&mut out, u, &(c * d));
            }
        }
        UEAElement::from_map(out)
    }

    /// `β^{-1}`: the top-degree part of `β(m)` is `m` itself, so peel off the
    /// highest degree repeatedly.
    pub fn unsymmetrize(&self, u: &UEAElement) -> SymElement {
        let mut rem = u.clone();
        let mut out = SymElement::zero();
        while let Some(n) = rem.degree() {
            let top = rem.homogeneous(n);
            for (m, c) in top.iter() {
                out.add_scaled(&SymElement::monomial(m.clone(), Q::one()), c);
                let b = UEAElement::from_map((*self.beta_monomial(m)).clone());
                rem.add_scaled(&b, &-c.clone());
            }
        }
        out
    }

    /// `w ⋆ v = β^{-1}(β(w) β(v))`
    pub fn gutt_star(&self, w: &SymElement, v: &SymElement) -> SymElement {
        self.unsymmetrize(&self.mul(&self.symmetrize(w), &self.symmetrize(v)))
    }

    /// `γ(P) = β(j^{1/2}(∂) P)`
    pub fn duflo_map(&self, p: &SymElement) -> UEAElement {
        let n = p.degree().unwrap_or(0);
        let op = j_half_polynomial(self.alg, n);
        self.symmetrize(&apply_differential_operator(&op, p))
    }

    /// `γ(PQ) - γ(P)γ(Q)` for invariant `P`, `Q`.
    pub fn check_duflo_multiplicative(&self, p: &SymElement, q: &SymElement) -> Result<DufloCheck> {
        for (name, e) in [("P", p), ("Q", q)] {
            if !is_invariant(e, self.alg) {
                return Err(Error::NotInvariant(format!(
                    "{name} = {}",
                    e.display_with(self.alg.labels())
                )));
            }
        }
        let residual = self
            .duflo_map(&p.mul(q))
            .sub(&self.mul(&self.duflo_map(p), &self.duflo_map(q)));
        Ok(DufloCheck {
            holds: residual.is_zero(),
            residual,
        })
    }

    /// `β(PQ) - β(P)β(Q)`; nonzero in general.
    pub fn beta_multiplicativity_residual(&self, p: &SymElement, q: &SymElement) -> UEAElement {
        self.symmetrize(&p.mul(q))
            .sub(&self.mul(&self.symmetrize(p), &self.symmetrize(q)))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DufloCheck {
    pub holds: bool,
    pub residual: UEAElement,
}

pub fn pbw_normal_form(word: &[usize], alg: &LieAlgebraData) -> UEAElement {
    Uea::new(alg).pbw_normal_form(word)
}

pub fn symmetrize(p: &SymElement, alg: &LieAlgebraData) -> UEAElement {
    Uea::new(alg).symmetrize(p)
}

pub fn unsymmetrize(u: &UEAElement, alg: &LieAlgebraData) -> SymElement {
    Uea::new(alg).unsymmetrize(u)
}

pub fn gutt_star(w: &SymElement, v: &SymElement, alg: &LieAlgebraData) -> SymElement {
    Uea::new(alg).gutt_star(w, v)
}

pub fn duflo_map(p: &SymElement, alg: &LieAlgebraData) -> UEAElement {
    Uea::new(alg).duflo_map(p)
}

pub fn check_duflo_multiplicative(
    p: &SymElement,
    q: &SymElement,
    alg: &LieAlgebraData,
) -> Result<DufloCheck> {
    Uea::new(alg).check_duflo_multiplicative(p, q)
}

/// The derivation of `S[𝔤]` extending `ad(e_i)`.
pub fn ad_derivation(i: usize, p: &SymElement, alg: &LieAlgebraData) -> SymElement {
    let mut out = SymElement::zero();
    for (m, c) in p.iter() {
        for pos in 0..m.len() {
            for k in 0..alg.dim() {
                let ck = alg.constant(i, m[pos], k);
                if ck.is_zero() {
                    continue;
                }
                let mut mm = m.clone();
                mm[pos] = k;
                out.add_scaled(&SymElement::monomial(mm, Q::one()), &(c * ck));
            }
        }
    }
    out
}

pub fn is_invariant(p: &SymElement, alg: &LieAlgebraData) -> bool {
    (0..alg.dim()).all(|i| ad_derivation(i, p, alg).is_zero())
}

/// Sorted index multisets of size `k` over `0..d`.
fn multisets(d: usize, k: usize) -> Vec<Vec<usize>> {
    fn walk(d: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..d {
            cur.push(i);
            walk(d, k, i, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    walk(d, k, 0, &mut Vec::new(), &mut out);
    out
}

/// Basis of the kernel of a rational matrix given by rows.
fn nullspace(mut rows: Vec<Vec<Q>>, ncols: usize) -> Vec<Vec<Q>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = Q::one() / &rows[r][c];
        for v in rows[r].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= &f * pv;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    (0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![Q::zero(); ncols];
            v[free] = Q::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -rows[row][free].clone();
            }
            v
        })
        .collect()
}

/// A basis of the invariant homogeneous polynomials of degree `k` in `S[𝔤]`.
pub fn invariants_of_degree(alg: &LieAlgebraData, k: usize) -> Vec<SymElement> {
    let monos = multisets(alg.dim(), k);
    let mut eq_index: BTreeMap<(usize, Vec<usize>), usize> = BTreeMap::new();
    let mut columns: Vec<Vec<(usize, Q)>> = Vec::with_capacity(monos.len());
    for m in &monos {
        let mut col = Vec::new();
        let p = SymElement::monomial(m.clone(), Q::one());
        for i in 0..alg.dim() {
            for (target, c) in ad_derivation(i, &p, alg).iter() {
                let n = eq_index.len();
                let row = *eq_index.entry((i, target.clone())).or_insert(n);
                col.push((row, c.clone()));
            }
        }
        columns.push(col);
    }
    let mut rows = vec![vec![Q::zero(); monos.len()]; eq_index.len()];
    for (j, col) in columns.into_iter().enumerate() {
        for (i, c) in col {
            rows[i][j] = c;
        }
    }
    nullspace(rows, monos.len())
        .into_iter()
        .map(|v| SymElement::from_terms(monos.iter().cloned().zip(v)))
        .collect()
}

/// Polynomial matrix `ad X = Σ x_i ad(e_i)` with entries in the coordinates
/// `x_i` (stored as [`SymElement`] keys).
fn ad_polynomial_matrix(alg: &LieAlgebraData) -> Vec<Vec<SymElement>> {
    let d = alg.dim();
    (0..d)
        .map(|k| {
            (0..d)
                .map(|j| {
                    SymElement::from_terms(
                        (0..d)
                            .filter(|&i| !alg.constant(i, j, k).is_zero())
                            .map(|i| (vec![i], alg.constant(i, j, k).clone())),
                    )
                })
                .collect()
        })
        .collect()
}

/// `tr((ad X)^k)` for `k = 1..=n`, as polynomials in the coordinates of `X`.
pub fn ad_power_traces(alg: &LieAlgebraData, n: usize) -> Vec<SymElement> {
    let d = alg.dim();
    let m = ad_polynomial_matrix(alg);
    let mut power = m.clone();
    let mut out = Vec::with_capacity(n);
    for k in 1..=n {
        out.push((0..d).fold(SymElement::zero(), |acc, i| acc.add(&power[i][i])));
        if k == n {
            break;
        }
        power = (0..d)
            .map(|r| {
                (0..d)
                    .map(|c| {
                        (0..d).fold(SymElement::zero(), |acc, l| {
                            acc.add(&power[r][l].mul(&m[l][c]))
                        })
                    })
                    .collect()
            })
            .collect();
    }
    out
}

/// `j^{1/2}(X)` through degree `n` as a polynomial in the coordinates of `X`,
/// from `ln j = -tr(ad X)/2 + Σ_{k≥1} b_{2k} tr((ad X)^{2k}) / ((2k)! 2k)`.
pub fn j_half_polynomial(alg: &LieAlgebraData, n: usize) -> SymElement {
    if n == 0 {
        return SymElement::one();
    }
    let traces = ad_power_traces(alg, n);
    let b = bernoulli_table(n);
    let half = Q::new(1.into(), 2.into());
    let mut log_j = traces[0].scale(&-half.clone());
    for k in (2..=n).step_by(2) {
        let c = &b[k] * inv_factorial(k) / Q::from_integer(k.into());
        log_j.add_scaled(&traces[k - 1], &c);
    }
    let f = log_j.scale(&half);
    let mut out = SymElement::one();
    let mut power = SymElement::one();
    for m in 1..=n {
        power = power.mul(&f).truncate(n);
        if power.is_zero() {
            break;
        }
        out.add_scaled(&power, &inv_factorial(m));
    }
    out
}

/// `Σ_α a_α ∂^α P` for the constant-coefficient operator `Σ_α a_α x^α`.
pub fn apply_differential_operator(op: &SymElement, p: &SymElement) -> SymElement {
    let mut out = SymElement::zero();
    for (alpha, a) in op.iter() {
        let mut d = p.clone();
        for &i in alpha {
            d = d.partial(i);
            if d.is_zero() {
                break;
            }
        }
        out.add_scaled(&d, a);
    }
    out
}

/// A seeded random element of `S[𝔤]` with `terms` monomials of degree at most
/// `max_degree` and small rational coefficients.
pub fn random_element(
    dim: usize,
    max_degree: usize,
    terms: usize,
    rng: &mut ChaCha8Rng,
) -> SymElement {
    let mut out = SymElement::zero();
    for _ in 0..terms {
        let deg = rng.random_range(0..=max_degree);
        let m: Vec<usize> = (0..deg).map(|_| rng.random_range(0..dim)).collect();
        let num: i64 = rng.random_range(1..=5) * if rng.random_bool(0.5) { 1 } else { -1 };
        let den: i64 = rng.random_range(1..=3);
        out.add_scaled(
            &SymElement::monomial(m, Q::new(num.into(), den.into())),
            &Q::one(),
        );
    }
    out
}

/// `½h² + ef + fe = ½h² + 2ef` in `S[sl₂]` with basis `(h, e, f)`.
pub fn sl2_casimir() -> SymElement {
    SymElement::from_terms([
        (vec![0, 0], Q::new(1.into(), 2.into())),
        (vec![1, 2], Q::from_integer(2.into())),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    fn gen(i: usize) -> SymElement {
        SymElement::generator(i)
    }

    #[test]
    fn pbw_rewriting() {
        let h = LieAlgebraData::heisenberg();
        // f e = e f - z
        let fe = pbw_normal_form(&[1, 0], &h);
        let expected =
            UEAElement::monomial(vec![0, 1], qi(1)).sub(&UEAElement::monomial(vec![2], qi(1)));
        assert_eq!(fe, expected);
        assert_eq!(
            pbw_normal_form(&[0, 1, 2], &h),
            UEAElement::monomial(vec![0, 1, 2], qi(1))
        );
        let sl2 = LieAlgebraData::sl2();
        // e h = h e - 2e
        let eh = pbw_normal_form(&[1, 0], &sl2);
        let expected =
            UEAElement::monomial(vec![0, 1], qi(1)).sub(&UEAElement::monomial(vec![1], qi(2)));
        assert_eq!(eh, expected);
    }

    #[test]
    fn symmetrization() {
        let h = LieAlgebraData::heisenberg();
        // β(ef) = ef - z/2
        let b = symmetrize(&SymElement::monomial(vec![0, 1], qi(1)), &h);
        let expected =
            UEAElement::monomial(vec![0, 1], qi(1)).sub(&UEAElement::monomial(vec![2], q(1, 2)));
        assert_eq!(b, expected);
        let sl2 = LieAlgebraData::sl2();
        // β(e^n) = e^n
        for n in 0..5 {
            let p = SymElement::monomial(vec![1; n], qi(1));
            assert_eq!(
                symmetrize(&p, &sl2),
                UEAElement::monomial(vec![1; n], qi(1))
            );
        }
        let u = Uea::new(&sl2);
        let p = SymElement::from_terms([
            (vec![0, 1, 2], qi(3)),
            (vec![2, 2, 0], q(-1, 2)),
            (vec![1], qi(1)),
        ]);
        assert_eq!(u.unsymmetrize(&u.symmetrize(&p)), p);
    }

    #[test]
    fn star_product_basics() {
        let sl2 = LieAlgebraData::sl2();
        let u = Uea::new(&sl2);
        // h ⋆ e = he + ½[h, e] = he + e
        let he = u.gutt_star(&gen(0), &gen(1));
        assert_eq!(
            he,
            SymElement::from_terms([(vec![0, 1], qi(1)), (vec![1], qi(1))])
        );
        let x = gen(0).add(&gen(1));
        assert_eq!(u.gutt_star(&x, &x), x.mul(&x));
        let v = SymElement::from_terms([(vec![1, 2], qi(2)), (vec![0], qi(1))]);
        assert_eq!(u.gutt_star(&SymElement::one(), &v), v);
        let ab = LieAlgebraData::abelian();
        let w = SymElement::from_terms([(vec![0, 1], qi(1)), (vec![1], q(1, 3))]);
        assert_eq!(gutt_star(&w, &w, &ab), w.mul(&w));
    }

    #[test]
    fn j_half_expansion() {
        let sl2 = LieAlgebraData::sl2();
        // tr(ad X^2) = 8 a^2 + 8 bc for X = a h + b e + c f, so
        // j^{1/2} = 1 + (a^2 + bc)/6 + …
        let j = j_half_polynomial(&sl2, 2);
        assert_eq!(
            j,
            SymElement::from_terms([
                (vec![], qi(1)),
                (vec![0, 0], q(1, 6)),
                (vec![1, 2], q(1, 6))
            ])
        );
        assert_eq!(
            j_half_polynomial(&LieAlgebraData::heisenberg(), 6),
            SymElement::one()
        );
        // aff(1): j(X) = (1 - e^{-a})/a, so j^{1/2} = 1 - a/4 + …
        let j = j_half_polynomial(&LieAlgebraData::aff1(), 1);
        assert_eq!(
            j,
            SymElement::from_terms([(vec![], qi(1)), (vec![0], q(-1, 4))])
        );
    }

    #[test]
    fn casimir_duflo_snapshot() {
        let sl2 = LieAlgebraData::sl2();
        let c = sl2_casimir();
        assert!(is_invariant(&c, &sl2));
        let u = Uea::new(&sl2);
        let shift = u.duflo_map(&c).sub(&u.symmetrize(&c));
        assert_eq!(shift, UEAElement::scalar(q(1, 2)));
        // Degree ≤ 1: γ = β.
        let p = gen(0).scale(&qi(3)).add(&SymElement::scalar(qi(2)));
        assert_eq!(u.duflo_map(&p), u.symmetrize(&p));
    }

    #[test]
    fn duflo_is_multiplicative_on_casimir_powers() {
        let sl2 = LieAlgebraData::sl2();
        let u = Uea::new(&sl2);
        let c = sl2_casimir();
        let r = u.check_duflo_multiplicative(&c, &c).unwrap();
        assert!(r.holds, "residual {}", r.residual);
        assert!(!u.beta_multiplicativity_residual(&c, &c).is_zero());
        assert!(matches!(
            u.check_duflo_multiplicative(&gen(0), &c),
            Err(Error::NotInvariant(_))
        ));
    }

    #[test]
    fn heisenberg_central_powers() {
        let h = LieAlgebraData::heisenberg();
        let u = Uea::new(&h);
        for (a, b) in [(1, 1), (2, 3)] {
            let p = SymElement::monomial(vec![2; a], qi(1));
            let q = SymElement::monomial(vec![2; b], qi(1));
            assert!(u.check_duflo_multiplicative(&p, &q).unwrap().holds);
        }
    }

    #[test]
    fn invariant_polynomials() {
        let sl2 = LieAlgebraData::sl2();
        assert!(invariants_of_degree(&sl2, 1).is_empty());
        let inv2 = invariants_of_degree(&sl2, 2);
        assert_eq!(inv2.len(), 1);
        // Proportional to the Casimir.
        let c = sl2_casimir();
        let ratio = inv2[0].coeff(&[1, 2]) / c.coeff(&[1, 2]);
        assert_eq!(inv2[0], c.scale(&ratio));
        assert!(invariants_of_degree(&sl2, 3).is_empty());
        assert_eq!(invariants_of_degree(&sl2, 4).len(), 1);
        let h = LieAlgebraData::heisenberg();
        assert_eq!(invariants_of_degree(&h, 1), vec![gen(2)]);
        assert_eq!(invariants_of_degree(&LieAlgebraData::aff1(), 2), vec![]);
        assert_eq!(invariants_of_degree(&LieAlgebraData::abelian(), 2).len(), 3);
        assert_eq!(invariants_of_degree(&LieAlgebraData::so3(), 2).len(), 1);
    }

    #[test]
    fn beta_intertwines_derivations() {
        let sl2 = LieAlgebraData::sl2();
        let u = Uea::new(&sl2);
        let p = SymElement::from_terms([
            (vec![0, 1, 1], qi(2)),
            (vec![2, 2], q(1, 3)),
            (vec![0], qi(1)),
        ]);
        for i in 0..3 {
            let lhs = u.symmetrize(&ad_derivation(i, &p, &sl2));
            let rhs = u.commutator(&UEAElement::generator(i), &u.symmetrize(&p));
            assert_eq!(lhs, rhs);
        }
    }
}
