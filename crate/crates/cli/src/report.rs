use std::fmt::Write as _;

use liekv::concrete_lie::NumericReport;
use liekv::enveloping::{SymElement, UEAElement};
use liekv::rational::{format_term, max_abs_numerator, Q};
use liekv::{CyclicSeries, LieSeries};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Versions {
    pub liekv: String,
    pub cli: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    /// Arguments after the program name.
    pub command: Vec<String>,
    pub versions: Versions,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub checks: Vec<CheckResult>,
    pub pass: bool,
}

/// One rational term: `key` is a Lyndon word, necklace or PBW monomial,
/// `coeff` a `p/q` string, `display` the human form `coeff·basis`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub key: String,
    pub coeff: String,
    pub display: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegreeSummary {
    pub degree: usize,
    pub zero: bool,
    pub terms: usize,
    pub max_abs_numerator: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    #[serde(default)]
    pub conjectural: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub terms: Vec<Term>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub degrees: Vec<DegreeSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub numeric: Option<NumericReport>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl CheckResult {
    pub fn new(name: &str, pass: bool) -> Self {
        Self {
            name: name.to_string(),
            pass,
            conjectural: false,
            terms: Vec::new(),
            degrees: Vec::new(),
            numeric: None,
            notes: Vec::new(),
        }
    }

    pub fn with_terms(mut self, terms: Vec<Term>) -> Self {
        self.terms = terms;
        self
    }

    pub fn with_degrees(mut self, degrees: Vec<DegreeSummary>) -> Self {
        self.degrees = degrees;
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }
}

fn term(key: String, c: &Q, basis: &str) -> Term {
    Term {
        key,
        coeff: c.to_string(),
        display: format_term(c, basis),
    }
}

pub fn lie_terms(u: &LieSeries) -> Vec<Term> {
    u.iter()
        .map(|(w, c)| term(w.to_string(), c, &w.bracket_string()))
        .collect()
}

pub fn cyclic_terms(c: &CyclicSeries) -> Vec<Term> {
    c.iter()
        .map(|(n, v)| term(n.to_string(), v, &format!("({n})")))
        .collect()
}

fn monomial_terms<'a>(
    iter: impl Iterator<Item = (&'a Vec<usize>, &'a Q)>,
    labels: &[String],
) -> Vec<Term> {
    iter.map(|(m, c)| {
        let key = SymElement::monomial(m.clone(), Q::from_integer(1.into())).display_with(labels);
        if m.is_empty() {
            Term {
                key,
                coeff: c.to_string(),
                display: c.to_string(),
            }
        } else {
            term(key.clone(), c, &key)
        }
    })
    .collect()
}

pub fn sym_terms(p: &SymElement, labels: &[String]) -> Vec<Term> {
    monomial_terms(p.iter(), labels)
}

pub fn uea_terms(u: &UEAElement, labels: &[String]) -> Vec<Term> {
    monomial_terms(u.iter(), labels)
}

pub fn lie_degrees(u: &LieSeries, max_degree: usize) -> Vec<DegreeSummary> {
    (1..=max_degree)
        .map(|d| {
            let h = u.homogeneous(d);
            DegreeSummary {
                degree: d,
                zero: h.is_zero(),
                terms: h.len(),
                max_abs_numerator: max_abs_numerator(h.terms().values()).to_string(),
            }
        })
        .collect()
}

pub fn cyclic_degrees(c: &CyclicSeries, max_degree: usize) -> Vec<DegreeSummary> {
    (1..=max_degree)
        .map(|d| {
            let h = c.homogeneous(d);
            DegreeSummary {
                degree: d,
                zero: h.is_zero(),
                terms: h.terms().len(),
                max_abs_numerator: max_abs_numerator(h.terms().values()).to_string(),
            }
        })
        .collect()
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

impl RunReport {
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let flag = if c.conjectural { " (conjectural)" } else { "" };
            let _ = writeln!(out, "== {}: {}{}", c.name, verdict(c.pass), flag);
            for t in &c.terms {
                let _ = writeln!(out, "{}", t.display);
            }
            for d in &c.degrees {
                let state = if d.zero {
                    "0".to_string()
                } else {
                    format!("{} terms, max |numerator| {}", d.terms, d.max_abs_numerator)
                };
                let _ = writeln!(out, "  degree {}: {}", d.degree, state);
            }
            if let Some(n) = &c.numeric {
                for s in &n.samples {
                    let deg = s.degree.map(|d| format!(" degree {d}")).unwrap_or_default();
                    let _ = writeln!(
                        out,
                        "  sample {:>3}{}: rel {:.3e}  abs {:.3e}",
                        s.index, deg, s.rel_error, s.abs_error
                    );
                }
                let _ = writeln!(
                    out,
                    "  max rel error {:.3e} (tolerance {:.0e}), max abs error {:.3e}",
                    n.max_rel_error, n.tolerance, n.max_abs_error
                );
            }
            for note in &c.notes {
                let _ = writeln!(out, "  {note}");
            }
        }
        let _ = writeln!(out, "overall: {}", verdict(self.pass));
        out
    }
}
