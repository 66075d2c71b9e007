use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::rational::{format_term, join_terms, Q};

/// Renders a nondecreasing index sequence as `h^2 e f`.
pub(crate) fn render_monomial(m: &[usize], labels: &[String]) -> String {
    if m.is_empty() {
        return "1".into();
    }
    let mut parts = Vec::new();
    let mut i = 0;
    while i < m.len() {
        let mut j = i;
        while j < m.len() && m[j] == m[i] {
            j += 1;
        }
        let name = labels
            .get(m[i])
            .cloned()
            .unwrap_or_else(|| format!("e{}", m[i] + 1));
        parts.push(if j - i == 1 {
            name
        } else {
            format!("{name}^{}", j - i)
        });
        i = j;
    }
    parts.join(" ")
}

fn render(terms: &BTreeMap<Vec<usize>, Q>, labels: &[String]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let parts: Vec<String> = terms
        .iter()
        .map(|(m, c)| {
            if m.is_empty() {
                c.to_string()
            } else {
                format_term(c, &render_monomial(m, labels))
            }
        })
        .collect();
    join_terms(&parts)
}

fn add_into(acc: &mut BTreeMap<Vec<usize>, Q>, m: &[usize], c: &Q) {
    if c.is_zero() {
        return;
    }
    let e = acc.entry(m.to_vec()).or_insert_with(Q::zero);
    *e += c;
    if e.is_zero() {
        acc.remove(m);
    }
}

macro_rules! linear_ops {
    ($t:ident) => {
        impl $t {
            pub fn zero() -> Self {
                Self(BTreeMap::new())
            }

            pub fn one() -> Self {
                Self::monomial(Vec::new(), Q::one())
            }

            pub fn scalar(c: Q) -> Self {
                Self::monomial(Vec::new(), c)
            }

            pub fn generator(i: usize) -> Self {
                Self::monomial(vec![i], Q::one())
            }

            pub fn terms(&self) -> &BTreeMap<Vec<usize>, Q> {
                &self.0
            }

            pub fn iter(&self) -> impl Iterator<Item = (&Vec<usize>, &Q)> {
                self.0.iter()
            }

            pub fn len(&self) -> usize {
                self.0.len()
            }

            pub fn is_empty(&self) -> bool {
                self.0.is_empty()
            }

            pub fn is_zero(&self) -> bool {
                self.0.is_empty()
            }

            pub fn coeff(&self, m: &[usize]) -> Q {
                self.0.get(m).cloned().unwrap_or_else(Q::zero)
            }

            /// Highest degree present; `None` for zero.
            pub fn degree(&self) -> Option<usize> {
                self.0.keys().map(Vec::len).max()
            }

            pub fn homogeneous(&self, n: usize) -> Self {
                Self(
                    self.0
                        .iter()
                        .filter(|(m, _)| m.len() == n)
                        .map(|(m, c)| (m.clone(), c.clone()))
                        .collect(),
                )
            }

            pub fn add_scaled(&mut self, other: &Self, c: &Q) {
                for (m, v) in &other.0 {
                    add_into(&mut self.0, m, &(v * c));
                }
            }

            pub fn add(&self, other: &Self) -> Self {
                let mut out = self.clone();
                out.add_scaled(other, &Q::one());
                out
            }

            pub fn sub(&self, other: &Self) -> Self {
                let mut out = self.clone();
                out.add_scaled(other, &-Q::one());
                out
            }

            pub fn scale(&self, c: &Q) -> Self {
                if c.is_zero() {
                    return Self::zero();
                }
                Self(self.0.iter().map(|(m, v)| (m.clone(), v * c)).collect())
            }

            pub fn display_with(&self, labels: &[String]) -> String {
                render(&self.0, labels)
            }

            pub fn display_terms(&self, labels: &[String]) -> Vec<String> {
                self.0
                    .iter()
                    .map(|(m, c)| {
                        if m.is_empty() {
                            c.to_string()
                        } else {
                            format_term(c, &render_monomial(m, labels))
                        }
                    })
                    .collect()
            }
        }

        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&render(&self.0, &[]))
            }
        }
    };
}

/// An element of the symmetric algebra `S[𝔤]`: commutative polynomials in the
/// basis, keyed by sorted index multisets.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SymElement(BTreeMap<Vec<usize>, Q>);

/// An element of `U(𝔤)` in PBW normal form: nondecreasing index sequences.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct UEAElement(BTreeMap<Vec<usize>, Q>);

linear_ops!(SymElement);
linear_ops!(UEAElement);

impl SymElement {
    /// Sorts each key; repeated keys are summed.
    pub fn monomial(mut m: Vec<usize>, c: Q) -> Self {
        m.sort_unstable();
        let mut out = BTreeMap::new();
        add_into(&mut out, &m, &c);
        SymElement(out)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Vec<usize>, Q)>) -> Self {
        let mut out = Self::zero();
        for (m, c) in terms {
            out.add_scaled(&Self::monomial(m, c), &Q::one());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = BTreeMap::new();
        for (a, ca) in &self.0 {
            for (b, cb) in &other.0 {
                let mut m = a.clone();
                m.extend_from_slice(b);
                m.sort_unstable();
                add_into(&mut out, &m, &(ca * cb));
            }
        }
        SymElement(out)
    }

    pub fn pow(&self, n: usize) -> Self {
        (0..n).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// `∂/∂e_i`
    pub fn partial(&self, i: usize) -> Self {
        let mut out = BTreeMap::new();
        for (m, c) in &self.0 {
            let k = m.iter().filter(|&&j| j == i).count();
            if k == 0 {
                continue;
            }
            let pos = m.iter().position(|&j| j == i).expect("counted above");
            let mut rest = m.clone();
            rest.remove(pos);
            add_into(&mut out, &rest, &(c * Q::from_integer(k.into())));
        }
        SymElement(out)
    }

    /// Drops all terms of degree above `n`.
    pub fn truncate(&self, n: usize) -> Self {
        SymElement(
            self.0
                .iter()
                .filter(|(m, _)| m.len() <= n)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        )
    }
}

impl UEAElement {
    /// `m` must already be nondecreasing.
    pub fn monomial(m: Vec<usize>, c: Q) -> Self {
        assert!(
            m.windows(2).all(|w| w[0] <= w[1]),
            "PBW monomials are sorted"
        );
        let mut out = BTreeMap::new();
        add_into(&mut out, &m, &c);
        UEAElement(out)
    }

    pub(crate) fn from_map(map: BTreeMap<Vec<usize>, Q>) -> Self {
        debug_assert!(map.keys().all(|m| m.windows(2).all(|w| w[0] <= w[1])));
        UEAElement(map.into_iter().filter(|(_, c)| !c.is_zero()).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    #[test]
    fn symmetric_algebra_is_commutative() {
        let a = SymElement::from_terms([(vec![1, 0], qi(2)), (vec![2], qi(1))]);
        let b = SymElement::from_terms([(vec![0], q(1, 2)), (vec![], qi(3))]);
        assert_eq!(a.mul(&b), b.mul(&a));
        assert_eq!(a.coeff(&[0, 1]), qi(2));
        assert_eq!(a.pow(0), SymElement::one());
    }

    #[test]
    fn partial_derivatives() {
        // ∂_0 (x0^3 x1) = 3 x0^2 x1
        let p = SymElement::monomial(vec![0, 0, 0, 1], qi(1));
        assert_eq!(p.partial(0), SymElement::monomial(vec![0, 0, 1], qi(3)));
        assert!(p.partial(2).is_zero());
    }

    #[test]
    fn rendering() {
        let labels: Vec<String> = ["h", "e", "f"].iter().map(|s| s.to_string()).collect();
        let p =
            SymElement::from_terms([(vec![0, 0], q(1, 2)), (vec![1, 2], qi(2)), (vec![], qi(-1))]);
        assert_eq!(p.display_with(&labels), "-1 + 1/2·h^2 + 2·e f");
        assert_eq!(UEAElement::zero().to_string(), "0");
    }
}
