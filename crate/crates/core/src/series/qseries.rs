//! Truncated multivariate power series in the sewing parameters.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::rat::{display, from_strings, to_strings, Rat};
use crate::error::{Error, Result};

/// Exponent vector `(n_1, ..., n_g)`.
pub type Exponent = Vec<u32>;

/// A power series in `vars` variables, truncated at total degree `trunc`.
///
/// Optional per-variable caps drop every term whose `i`-th exponent exceeds
/// `caps[i]`; products and inverses respect them. Absent terms are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    vars: usize,
    trunc: u32,
    caps: Option<Vec<u32>>,
    terms: BTreeMap<Exponent, Rat>,
}

impl QSeries {
    pub fn zero(vars: usize, trunc: u32) -> Self {
        QSeries { vars, trunc, caps: None, terms: BTreeMap::new() }
    }

    pub fn one(vars: usize, trunc: u32) -> Self {
        Self::constant(vars, trunc, Rat::one())
    }

    pub fn constant(vars: usize, trunc: u32, c: Rat) -> Self {
        let mut s = Self::zero(vars, trunc);
        s.set(vec![0; vars], c);
        s
    }

    /// The series `q_i`.
    pub fn var(vars: usize, trunc: u32, i: usize) -> Self {
        assert!(i < vars);
        let mut s = Self::zero(vars, trunc);
        let mut e = vec![0; vars];
        e[i] = 1;
        s.set(e, Rat::one());
        s
    }

    pub fn with_caps(mut self, caps: Vec<u32>) -> Result<Self> {
        if caps.len() != self.vars {
            return Err(Error::Shape(format!(
                "{} caps for {} variables",
                caps.len(),
                self.vars
            )));
        }
        self.caps = Some(caps);
        self.terms.retain(|e, _| within(e, self.trunc, &self.caps));
        Ok(self)
    }

    pub fn from_terms<I>(vars: usize, trunc: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Exponent, Rat)>,
    {
        let mut s = Self::zero(vars, trunc);
        for (e, c) in terms {
            if e.len() != vars {
                return Err(Error::Shape(format!(
                    "exponent {e:?} has {} entries, expected {vars}",
                    e.len()
                )));
            }
            let acc = s.coeff(&e) + c;
            s.set(e, acc);
        }
        Ok(s)
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    pub fn caps(&self) -> Option<&[u32]> {
        self.caps.as_deref()
    }

    pub fn admits(&self, e: &[u32]) -> bool {
        e.len() == self.vars && within(e, self.trunc, &self.caps)
    }

    /// Sets a coefficient; exponents beyond the truncation are silently dropped.
    pub fn set(&mut self, e: Exponent, c: Rat) {
        assert_eq!(e.len(), self.vars, "exponent length");
        if !within(&e, self.trunc, &self.caps) {
            return;
        }
        if c.is_zero() {
            self.terms.remove(&e);
        } else {
            self.terms.insert(e, c);
        }
    }

    pub fn coeff(&self, e: &[u32]) -> Rat {
        self.terms.get(e).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn constant_term(&self) -> Rat {
        self.coeff(&vec![0; self.vars])
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Rat)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.vars != other.vars || self.trunc != other.trunc || self.caps != other.caps {
            return Err(Error::Shape(format!(
                "series shapes differ: ({} vars, trunc {}, caps {:?}) vs ({} vars, trunc {}, caps {:?})",
                self.vars, self.trunc, self.caps, other.vars, other.trunc, other.caps
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            let acc = out.coeff(e) + c;
            out.set(e.clone(), acc);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rat::one())
    }

    pub fn scale(&self, k: &Rat) -> Self {
        let mut out = Self { terms: BTreeMap::new(), ..self.clone() };
        if k.is_zero() {
            return out;
        }
        out.terms = self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect();
        out
    }

    /// Coefficientwise convolution, truncated.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut acc: BTreeMap<Exponent, Rat> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            let da: u32 = ea.iter().sum();
            for (eb, cb) in &other.terms {
                if da + eb.iter().sum::<u32>() > self.trunc {
                    continue;
                }
                let e: Exponent = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                if !within(&e, self.trunc, &self.caps) {
                    continue;
                }
                *acc.entry(e).or_insert_with(Rat::zero) += ca * cb;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(Self { terms: acc, ..self.clone() })
    }

    /// Multiplicative inverse up to truncation.
    pub fn inv(&self) -> Result<Self> {
        let a0 = self.constant_term();
        if a0.is_zero() {
            return Err(Error::NotInvertible);
        }
        let a0_inv = a0.recip();
        let mut out = Self { terms: BTreeMap::new(), ..self.clone() };
        let rest: Vec<(&Exponent, &Rat)> =
            self.terms.iter().filter(|(e, _)| e.iter().any(|&n| n > 0)).collect();
        for e in exponents_by_degree(self.vars, self.trunc, &self.caps) {
            let value = if e.iter().all(|&n| n == 0) {
                a0_inv.clone()
            } else {
                let mut s = Rat::zero();
                for (d, ad) in &rest {
                    if d.iter().zip(&e).all(|(x, y)| x <= y) {
                        let f: Exponent = e.iter().zip(d.iter()).map(|(x, y)| x - y).collect();
                        if let Some(bf) = out.terms.get(&f) {
                            s += *ad * bf;
                        }
                    }
                }
                -s * &a0_inv
            };
            out.set(e, value);
        }
        Ok(out)
    }

    /// Integer power; negative exponents go through [`QSeries::inv`].
    pub fn pow(&self, n: i64) -> Result<Self> {
        let (base, mut k) = if n < 0 { (self.inv()?, (-n) as u64) } else { (self.clone(), n as u64) };
        let mut result = Self { terms: BTreeMap::new(), ..self.clone() };
        result.set(vec![0; self.vars], Rat::one());
        let mut sq = base;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&sq)?;
            }
            k >>= 1;
            if k > 0 {
                sq = sq.mul(&sq)?;
            }
        }
        Ok(result)
    }

    /// Terms whose exponent in variable `var` equals `n`, as a series in the same variables.
    pub fn slice(&self, var: usize, n: u32) -> Self {
        let mut out = Self { terms: BTreeMap::new(), ..self.clone() };
        for (e, c) in &self.terms {
            if e[var] == n {
                out.terms.insert(e.clone(), c.clone());
            }
        }
        out
    }

    /// Re-truncates at a lower total degree (and optional caps).
    pub fn truncate(&self, trunc: u32) -> Self {
        let mut out = Self { trunc, terms: BTreeMap::new(), ..self.clone() };
        for (e, c) in &self.terms {
            out.set(e.clone(), c.clone());
        }
        out
    }

    /// Embeds into a series with more variables, placing this one's variables at `positions`.
    pub fn embed(&self, vars: usize, positions: &[usize]) -> Result<Self> {
        if positions.len() != self.vars || positions.iter().any(|&p| p >= vars) {
            return Err(Error::Shape("bad embedding positions".into()));
        }
        let mut out = Self::zero(vars, self.trunc);
        for (e, c) in &self.terms {
            let mut f = vec![0; vars];
            for (i, &p) in positions.iter().enumerate() {
                f[p] = e[i];
            }
            out.set(f, c.clone());
        }
        Ok(out)
    }

    /// Lexicographically first exponent (in degree order) where the two series differ.
    pub fn first_difference(&self, other: &Self) -> Option<(Exponent, Rat, Rat)> {
        let mut keys: Vec<&Exponent> = self.terms.keys().chain(other.terms.keys()).collect();
        keys.sort_by(|a, b| degree_order(a, b));
        keys.dedup();
        keys.into_iter().find_map(|e| {
            let (x, y) = (self.coeff(e), other.coeff(e));
            (x != y).then(|| (e.clone(), x, y))
        })
    }

    pub fn to_json(&self) -> QSeriesJson {
        let mut keys: Vec<&Exponent> = self.terms.keys().collect();
        keys.sort_by(|a, b| degree_order(a, b));
        QSeriesJson {
            vars: self.vars,
            trunc: self.trunc,
            caps: self.caps.clone(),
            terms: keys
                .into_iter()
                .map(|e| {
                    let (num, den) = to_strings(&self.terms[e]);
                    TermJson { exp: e.clone(), num, den }
                })
                .collect(),
        }
    }

    pub fn from_json(j: &QSeriesJson) -> Result<Self> {
        let mut s = Self::zero(j.vars, j.trunc);
        if let Some(caps) = &j.caps {
            s = s.with_caps(caps.clone())?;
        }
        for t in &j.terms {
            if !s.admits(&t.exp) {
                return Err(Error::Shape(format!("term {:?} outside truncation", t.exp)));
            }
            s.set(t.exp.clone(), from_strings(&t.num, &t.den)?);
        }
        Ok(s)
    }
}

fn within(e: &[u32], trunc: u32, caps: &Option<Vec<u32>>) -> bool {
    e.iter().sum::<u32>() <= trunc
        && caps.as_ref().is_none_or(|c| e.iter().zip(c).all(|(x, m)| x <= m))
}

/// Total degree first, then lexicographic.
pub fn degree_order(a: &[u32], b: &[u32]) -> std::cmp::Ordering {
    let (da, db): (u32, u32) = (a.iter().sum(), b.iter().sum());
    da.cmp(&db).then_with(|| a.cmp(b))
}

/// All exponent vectors with total degree at most `trunc`, in degree order.
pub fn exponents_by_degree(vars: usize, trunc: u32, caps: &Option<Vec<u32>>) -> Vec<Exponent> {
    let mut out = Vec::new();
    for d in 0..=trunc {
        let mut cur = vec![0; vars];
        compositions(vars, d, 0, &mut cur, &mut out);
    }
    out.retain(|e| within(e, trunc, caps));
    out
}

fn compositions(vars: usize, remaining: u32, pos: usize, cur: &mut Exponent, out: &mut Vec<Exponent>) {
    if vars == 0 {
        if remaining == 0 {
            out.push(Vec::new());
        }
        return;
    }
    if pos == vars - 1 {
        cur[pos] = remaining;
        out.push(cur.clone());
        return;
    }
    for k in (0..=remaining).rev() {
        cur[pos] = k;
        compositions(vars, remaining - k, pos + 1, cur, out);
    }
    cur[pos] = 0;
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut keys: Vec<&Exponent> = self.terms.keys().collect();
        keys.sort_by(|a, b| degree_order(a, b));
        for (i, e) in keys.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({})", display(&self.terms[*e]))?;
            for (v, n) in e.iter().enumerate() {
                match n {
                    0 => {}
                    1 => write!(f, "*q{}", v + 1)?,
                    _ => write!(f, "*q{}^{}", v + 1, n)?,
                }
            }
        }
        Ok(())
    }
}

/// Wire form: `{"vars": g, "trunc": N, "terms": [{"exp": [...], "num": "...", "den": "..."}]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct QSeriesJson {
    pub vars: usize,
    pub trunc: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub caps: Option<Vec<u32>>,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TermJson {
    pub exp: Vec<u32>,
    pub num: String,
    pub den: String,
}
