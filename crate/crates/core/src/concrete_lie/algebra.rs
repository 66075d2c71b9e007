use std::fmt;

use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::{parse_rational, Q};

/// A finite-dimensional real Lie algebra given by exact structure constants
/// `[e_i, e_j] = Σ_k c_{ij}^k e_k` in a fixed ordered basis.
#[derive(Clone, Debug, PartialEq)]
pub struct LieAlgebraData {
    name: String,
    labels: Vec<String>,
    dim: usize,
    /// `c[(i * d + j) * d + k] = c_{ij}^k`
    c: Vec<Q>,
    cf: Vec<f64>,
}

pub const BUNDLED: [&str; 5] = ["abelian", "heisenberg", "aff1", "sl2", "so3"];

const HEISENBERG: &str = "3\n1 2 3 1\n";
const AFF1: &str = "2\n1 2 2 1\n";
const SL2: &str = "3\n1 2 2 2\n1 3 3 -2\n2 3 1 1\n";
const SO3: &str = "3\n1 2 3 1\n2 3 1 1\n3 1 2 1\n";
const ABELIAN: &str = "2\n";

impl LieAlgebraData {
    /// Builds an algebra from nonzero constants `(i, j, k, c_{ij}^k)`, 0-based.
    /// A constant given only for `(i, j)` is mirrored to `(j, i)` with the
    /// opposite sign; antisymmetry and the Jacobi identity are then checked
    /// exactly.
    pub fn new(name: &str, dim: usize, entries: &[(usize, usize, usize, Q)]) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Structure("dimension must be positive".into()));
        }
        let idx = |i: usize, j: usize, k: usize| (i * dim + j) * dim + k;
        let mut c = vec![Q::zero(); dim * dim * dim];
        let mut given = vec![false; dim * dim * dim];
        for (i, j, k, v) in entries {
            let (i, j, k) = (*i, *j, *k);
            if i >= dim || j >= dim || k >= dim {
                return Err(Error::Structure(format!(
                    "index ({}, {}, {}) out of range for dimension {dim}",
                    i + 1,
                    j + 1,
                    k + 1
                )));
            }
            if given[idx(i, j, k)] {
                return Err(Error::Structure(format!(
                    "c_{{{} {}}}^{} given twice",
                    i + 1,
                    j + 1,
                    k + 1
                )));
            }
            given[idx(i, j, k)] = true;
            c[idx(i, j, k)] = v.clone();
        }
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    if given[idx(i, j, k)] && !given[idx(j, i, k)] {
                        c[idx(j, i, k)] = -c[idx(i, j, k)].clone();
                    }
                }
            }
        }
        let cf = c.iter().map(|v| v.to_f64().unwrap_or(f64::NAN)).collect();
        let alg = LieAlgebraData {
            name: name.to_string(),
            labels: (1..=dim).map(|i| format!("e{i}")).collect(),
            dim,
            c,
            cf,
        };
        alg.check_antisymmetry()?;
        alg.check_jacobi()?;
        Ok(alg)
    }

    /// Parses the text format: a line holding the dimension `d`, then one line
    /// `i j k p/q` per nonzero constant `c_{ij}^k` with 1-based indices.
    /// Blank lines and `#` comments are ignored.
    pub fn parse(name: &str, text: &str) -> Result<Self> {
        let mut dim = None;
        let mut entries = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = n + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let parse_err = |msg: String| Error::Parse { line, msg };
            let fields: Vec<&str> = body.split_whitespace().collect();
            match dim {
                None => {
                    if fields.len() != 1 {
                        return Err(parse_err(format!("expected dimension, found `{body}`")));
                    }
                    let d: usize = fields[0]
                        .parse()
                        .map_err(|_| parse_err(format!("bad dimension `{}`", fields[0])))?;
                    dim = Some(d);
                }
                Some(d) => {
                    if fields.len() != 4 {
                        return Err(parse_err(format!("expected `i j k p/q`, found `{body}`")));
                    }
                    let mut ijk = [0usize; 3];
                    for (slot, f) in ijk.iter_mut().zip(&fields[..3]) {
                        let v: usize = f
                            .parse()
                            .map_err(|_| parse_err(format!("bad index `{f}`")))?;
                        if v == 0 || v > d {
                            return Err(parse_err(format!("index {v} outside 1..={d}")));
                        }
                        *slot = v - 1;
                    }
                    let c = parse_rational(fields[3])
                        .ok_or_else(|| parse_err(format!("bad rational `{}`", fields[3])))?;
                    if !c.is_zero() {
                        entries.push((ijk[0], ijk[1], ijk[2], c));
                    }
                }
            }
        }
        let dim = dim.ok_or(Error::Parse {
            line: 0,
            msg: "missing dimension line".into(),
        })?;
        Self::new(name, dim, &entries)
    }

    pub fn bundled(name: &str) -> Option<Self> {
        let (text, labels): (&str, &[&str]) = match name {
            "abelian" => (ABELIAN, &["e1", "e2"]),
            "heisenberg" => (HEISENBERG, &["e", "f", "z"]),
            "aff1" => (AFF1, &["a", "b"]),
            "sl2" => (SL2, &["h", "e", "f"]),
            "so3" => (SO3, &["e1", "e2", "e3"]),
            _ => return None,
        };
        let mut alg = Self::parse(name, text).expect("bundled algebras are valid");
        alg.labels = labels.iter().map(|s| s.to_string()).collect();
        Some(alg)
    }

    pub fn abelian() -> Self {
        Self::bundled("abelian").expect("bundled")
    }

    pub fn heisenberg() -> Self {
        Self::bundled("heisenberg").expect("bundled")
    }

    pub fn aff1() -> Self {
        Self::bundled("aff1").expect("bundled")
    }

    pub fn sl2() -> Self {
        Self::bundled("sl2").expect("bundled")
    }

    pub fn so3() -> Self {
        Self::bundled("so3").expect("bundled")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `c_{ij}^k`, 0-based.
    pub fn constant(&self, i: usize, j: usize, k: usize) -> &Q {
        &self.c[(i * self.dim + j) * self.dim + k]
    }

    pub fn constant_f64(&self, i: usize, j: usize, k: usize) -> f64 {
        self.cf[(i * self.dim + j) * self.dim + k]
    }

    /// `[e_i, e_j]` as exact coordinates.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<Q> {
        (0..self.dim)
            .map(|k| self.constant(i, j, k).clone())
            .collect()
    }

    pub fn bracket(&self, a: &[f64], b: &[f64]) -> Vec<f64> {
        let d = self.dim;
        let mut out = vec![0.0; d];
        for (i, ai) in a.iter().enumerate() {
            if *ai == 0.0 {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                let w = ai * bj;
                if w == 0.0 {
                    continue;
                }
                for (k, o) in out.iter_mut().enumerate() {
                    *o += w * self.cf[(i * d + j) * d + k];
                }
            }
        }
        out
    }

    /// `max |c_{ij}^k|`
    pub fn structure_max_norm(&self) -> f64 {
        self.cf.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn is_abelian(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    fn check_antisymmetry(&self) -> Result<()> {
        let d = self.dim;
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    if *self.constant(i, j, k) != -self.constant(j, i, k).clone() {
                        return Err(Error::Structure(format!(
                            "c_{{{} {}}}^{} is not antisymmetric",
                            i + 1,
                            j + 1,
                            k + 1
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    fn check_jacobi(&self) -> Result<()> {
        let d = self.dim;
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for m in 0..d {
                        // [[e_i,e_j],e_k] + [[e_j,e_k],e_i] + [[e_k,e_i],e_j]
                        let mut s = Q::zero();
                        for l in 0..d {
                            s += self.constant(i, j, l) * self.constant(l, k, m);
                            s += self.constant(j, k, l) * self.constant(l, i, m);
                            s += self.constant(k, i, l) * self.constant(l, j, m);
                        }
                        if !s.is_zero() {
                            return Err(Error::Structure(format!(
                                "Jacobi identity fails for (e{}, e{}, e{})",
                                i + 1,
                                j + 1,
                                k + 1
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for LieAlgebraData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.dim)?;
        let d = self.dim;
        for i in 0..d {
            for j in (i + 1)..d {
                for k in 0..d {
                    let c = self.constant(i, j, k);
                    if !c.is_zero() {
                        writeln!(f, "{} {} {} {}", i + 1, j + 1, k + 1, c)?;
                    }
                }
            }
        }
        Ok(())
    }
}
