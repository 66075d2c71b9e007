//! Univariate power series with exact rational coefficients.
//!
//! A series is either an exact polynomial or a truncation known through a
//! fixed order. Truncated series carry their precision so that consumers can
//! refuse to read coefficients that were never computed.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{inv_factorial, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSeries {
    coeffs: Vec<Q>,
    exact: bool,
}

impl PowerSeries {
    /// A polynomial: every coefficient beyond `coeffs` is zero.
    pub fn polynomial(coeffs: Vec<Q>) -> Self {
        Self {
            coeffs,
            exact: true,
        }
    }

    /// A series known through degree `coeffs.len() - 1`.
    pub fn truncated(coeffs: Vec<Q>) -> Self {
        Self {
            coeffs,
            exact: false,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    /// Highest degree whose coefficient is known, `None` for polynomials.
    pub fn precision(&self) -> Option<usize> {
        if self.exact {
            None
        } else {
            Some(self.coeffs.len().saturating_sub(1))
        }
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    /// Coefficient of `z^k`, or an error if it lies beyond the precision.
    pub fn coeff(&self, k: usize) -> Result<Q> {
        match self.coeffs.get(k) {
            Some(c) => Ok(c.clone()),
            None if self.exact => Ok(Q::zero()),
            None => Err(Error::NonTruncating {
                known: self.coeffs.len().saturating_sub(1),
                needed: k,
            }),
        }
    }

    /// `exp(z)` through degree `n`.
    pub fn exp(n: usize) -> Self {
        Self::truncated((0..=n).map(inv_factorial).collect())
    }

    /// `(e^z - 1)/z` through degree `n`.
    pub fn expm1_over_z(n: usize) -> Self {
        Self::truncated((0..=n).map(|k| inv_factorial(k + 1)).collect())
    }

    /// `(1 - e^{-z})/z` through degree `n`.
    pub fn one_minus_exp_neg_over_z(n: usize) -> Self {
        Self::truncated(
            (0..=n)
                .map(|k| {
                    let c = inv_factorial(k + 1);
                    if k % 2 == 0 {
                        c
                    } else {
                        -c
                    }
                })
                .collect(),
        )
    }

    /// `1 - e^{-z}` through degree `n`.
    pub fn one_minus_exp_neg(n: usize) -> Self {
        let mut c: Vec<Q> = (0..=n)
            .map(|k| {
                let f = inv_factorial(k);
                if k % 2 == 1 {
                    f
                } else {
                    -f
                }
            })
            .collect();
        c[0] = Q::zero();
        Self::truncated(c)
    }

    /// `e^z - 1` through degree `n`.
    pub fn exp_minus_one(n: usize) -> Self {
        let mut c: Vec<Q> = (0..=n).map(inv_factorial).collect();
        c[0] = Q::zero();
        Self::truncated(c)
    }

    /// Substitutes `z -> -z`.
    pub fn reflect(&self) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| if k % 2 == 1 { -c } else { c.clone() })
                .collect(),
            exact: self.exact,
        }
    }

    fn common_len(&self, other: &Self) -> usize {
        match (self.exact, other.exact) {
            (true, true) => self.coeffs.len().max(other.coeffs.len()),
            (true, false) => other.coeffs.len(),
            (false, true) => self.coeffs.len(),
            (false, false) => self.coeffs.len().min(other.coeffs.len()),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.common_len(other);
        let coeffs = (0..len)
            .map(|k| {
                self.coeffs.get(k).cloned().unwrap_or_else(Q::zero)
                    + other.coeffs.get(k).cloned().unwrap_or_else(Q::zero)
            })
            .collect();
        Self {
            coeffs,
            exact: self.exact && other.exact,
        }
    }

    pub fn scale(&self, c: &Q) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
            exact: self.exact,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let exact = self.exact && other.exact;
        let len = if exact {
            (self.coeffs.len() + other.coeffs.len()).saturating_sub(1)
        } else {
            self.common_len(other)
        };
        let mut out = vec![Q::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                out[i + j] += a * b;
            }
        }
        Self { coeffs: out, exact }
    }

    /// Multiplicative inverse; requires a nonzero constant term. The result
    /// is truncated at `n` (or at the input precision, whichever is lower).
    pub fn inverse(&self, n: usize) -> Result<Self> {
        let c0 = self.coeff(0)?;
        if c0.is_zero() {
            return Err(Error::ConstantTerm {
                expected: "nonzero".into(),
                found: "0".into(),
            });
        }
        let len = match self.precision() {
            Some(p) => p.min(n) + 1,
            None => n + 1,
        };
        let inv0 = Q::one() / &c0;
        let mut out = vec![inv0.clone()];
        for k in 1..len {
            let mut s = Q::zero();
            for i in 1..=k {
                let a = self.coeff(i)?;
                if !a.is_zero() {
                    s += a * &out[k - i];
                }
            }
            out.push(-s * &inv0);
        }
        Ok(Self::truncated(out))
    }

    /// Exact quotient `self / other` through degree `n`.
    pub fn div(&self, other: &Self, n: usize) -> Result<Self> {
        let inv = other.inverse(n)?;
        let mut q = self.mul(&inv);
        q.coeffs.truncate(n + 1);
        q.exact = false;
        Ok(q)
    }

    /// Drops the leading `k` coefficients (division by `z^k`); they must be zero.
    pub fn shift_down(&self, k: usize) -> Result<Self> {
        for i in 0..k {
            let c = self.coeff(i)?;
            if !c.is_zero() {
                return Err(Error::ConstantTerm {
                    expected: format!("vanishing through order {}", k - 1),
                    found: format!("coefficient {c} at order {i}"),
                });
            }
        }
        Ok(Self {
            coeffs: self.coeffs.iter().skip(k).cloned().collect(),
            exact: self.exact,
        })
    }

    pub fn truncate(&self, n: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.truncate(n + 1);
        Self {
            coeffs,
            exact: self.exact && self.coeffs.len() <= n + 1,
        }
    }
}
