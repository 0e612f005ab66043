//! Sparse multivariate power series truncated at a total degree.
//!
//! Every [`TruncatedSeries`] carries its coefficient ring, its number of
//! variables and its truncation bound `D`; binary operations reject operands
//! that disagree on any of the three instead of silently re-truncating.

mod ring;

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_rational::BigRational;
use num_traits::Signed;
use smallvec::SmallVec;

pub use ring::{Coeff, CoeffRing, SymPoly, Symbols};

use crate::error::{domain, precondition, structural, Result};

/// An exponent vector together with its total degree.
///
/// Ordered by total degree first and then reverse-lexicographically on the
/// exponents, so `x1^d` precedes every other monomial of degree `d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    deg: u32,
    exps: SmallVec<[u16; 8]>,
}

impl Monomial {
    pub fn new(exps: &[u32]) -> Self {
        Monomial {
            deg: exps.iter().sum(),
            exps: exps.iter().map(|&e| e as u16).collect(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Monomial {
            deg: 0,
            exps: SmallVec::from_elem(0, nvars),
        }
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = Monomial::one(nvars);
        m.exps[i] = 1;
        m.deg = 1;
        m
    }

    pub fn degree(&self) -> u32 {
        self.deg
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn exp(&self, i: usize) -> u32 {
        self.exps[i] as u32
    }

    pub fn exps(&self) -> Vec<u32> {
        self.exps.iter().map(|&e| e as u32).collect()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            deg: self.deg + other.deg,
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn render(&self, names: &[String]) -> String {
        let parts: Vec<String> = self
            .exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                if e == 1 {
                    names[i].clone()
                } else {
                    format!("{}^{e}", names[i])
                }
            })
            .collect();
        parts.join("*")
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.deg
            .cmp(&other.deg)
            .then_with(|| other.exps.cmp(&self.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All exponent vectors in `nvars` variables of total degree `d`, in the
/// canonical [`Monomial`] order.
pub fn monomials_of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
    fn rec(nvars: usize, i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i + 1 == nvars {
            cur.push(left);
            out.push(Monomial::new(cur));
            cur.pop();
            return;
        }
        for e in (0..=left).rev() {
            cur.push(e);
            rec(nvars, i + 1, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if nvars == 0 {
        if d == 0 {
            out.push(Monomial::one(0));
        }
        return out;
    }
    rec(nvars, 0, d, &mut Vec::with_capacity(nvars), &mut out);
    out
}

/// A power series in `nvars` variables over `ring`, known modulo total
/// degree `trunc + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    ring: CoeffRing,
    nvars: usize,
    trunc: u32,
    terms: BTreeMap<Monomial, Coeff>,
}

impl TruncatedSeries {
    pub fn zero(ring: &CoeffRing, nvars: usize, trunc: u32) -> Self {
        TruncatedSeries {
            ring: ring.clone(),
            nvars,
            trunc,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ring: &CoeffRing, nvars: usize, trunc: u32, c: Coeff) -> Self {
        let mut s = Self::zero(ring, nvars, trunc);
        s.insert(Monomial::one(nvars), c);
        s
    }

    pub fn one(ring: &CoeffRing, nvars: usize, trunc: u32) -> Self {
        Self::constant(ring, nvars, trunc, ring.one())
    }

    /// The series consisting of the single variable `x_i` (zero-based).
    pub fn var(ring: &CoeffRing, nvars: usize, trunc: u32, i: usize) -> Self {
        let mut s = Self::zero(ring, nvars, trunc);
        s.insert(Monomial::var(nvars, i), ring.one());
        s
    }

    /// Builds a series from `(exponents, coefficient)` pairs, adding
    /// duplicates and dropping terms beyond the truncation.
    pub fn from_terms(
        ring: &CoeffRing,
        nvars: usize,
        trunc: u32,
        terms: impl IntoIterator<Item = (Vec<u32>, Coeff)>,
    ) -> Result<Self> {
        let mut s = Self::zero(ring, nvars, trunc);
        for (exps, c) in terms {
            if exps.len() != nvars {
                return Err(structural(format!(
                    "exponent vector of length {} in a series of {nvars} variables",
                    exps.len()
                )));
            }
            if !ring.contains(&c) {
                return Err(structural(format!(
                    "coefficient {c:?} is not an element of {ring}"
                )));
            }
            s.insert(Monomial::new(&exps), c);
        }
        Ok(s)
    }

    /// Adds `c·m` in place, dropping the term if it exceeds the truncation.
    fn insert(&mut self, m: Monomial, c: Coeff) {
        use std::collections::btree_map::Entry;
        if m.deg > self.trunc || c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                o.get_mut().add_assign(&c);
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn ring(&self) -> &CoeffRing {
        &self.ring
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical order; coefficients are never zero.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Coeff)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u32]) -> Coeff {
        self.terms
            .get(&Monomial::new(exps))
            .cloned()
            .unwrap_or_else(|| self.ring.zero())
    }

    pub fn constant_term(&self) -> Coeff {
        self.terms
            .get(&Monomial::one(self.nvars))
            .cloned()
            .unwrap_or_else(|| self.ring.zero())
    }

    fn check_same_space(&self, other: &Self) -> Result<()> {
        if self.ring != other.ring {
            return Err(structural(format!(
                "coefficient rings differ: {} vs {}",
                self.ring, other.ring
            )));
        }
        if self.nvars != other.nvars {
            return Err(structural(format!(
                "variable counts differ: {} vs {}",
                self.nvars, other.nvars
            )));
        }
        if self.trunc != other.trunc {
            return Err(structural(format!(
                "truncation degrees differ: {} vs {}",
                self.trunc, other.trunc
            )));
        }
        Ok(())
    }

    pub fn same_space(&self, other: &Self) -> bool {
        self.check_same_space(other).is_ok()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_space(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        TruncatedSeries {
            ring: self.ring.clone(),
            nvars: self.nvars,
            trunc: self.trunc,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.neg()))
                .collect(),
        }
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale(&self, c: &Coeff) -> Self {
        let mut out = Self::zero(&self.ring, self.nvars, self.trunc);
        for (m, a) in &self.terms {
            out.insert(m.clone(), a.mul(c));
        }
        out
    }

    pub fn scale_int(&self, k: i64) -> Self {
        self.scale(&self.ring.from_int(k))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same_space(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let trunc = self.trunc;
        let mut acc: HashMap<Monomial, Coeff> = HashMap::new();
        for (ma, ca) in &self.terms {
            let room = trunc - ma.deg;
            for (mb, cb) in &other.terms {
                if mb.deg > room {
                    break;
                }
                let m = ma.mul(mb);
                let c = ca.mul(cb);
                match acc.get_mut(&m) {
                    Some(e) => e.add_assign(&c),
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        TruncatedSeries {
            ring: self.ring.clone(),
            nvars: self.nvars,
            trunc,
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn pow(&self, mut k: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.ring, self.nvars, self.trunc);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        acc
    }

    /// Replaces variable `i` by `images[i]`.
    ///
    /// All images must share one series space (their ring must equal this
    /// series' ring) and have zero constant term; the result lives in that
    /// space. `self` must be known at least as far as the images' truncation.
    pub fn substitute(&self, images: &[TruncatedSeries]) -> Result<Self> {
        if images.len() != self.nvars {
            return Err(structural(format!(
                "{} images supplied for a series in {} variables",
                images.len(),
                self.nvars
            )));
        }
        let Some(first) = images.first() else {
            return Ok(self.clone());
        };
        for img in &images[1..] {
            first.check_same_space(img)?;
        }
        if first.ring != self.ring {
            return Err(structural(format!(
                "cannot substitute series over {} into a series over {}",
                first.ring, self.ring
            )));
        }
        if self.trunc < first.trunc {
            return Err(structural(format!(
                "series known to degree {} cannot be evaluated to degree {}",
                self.trunc, first.trunc
            )));
        }
        for (i, img) in images.iter().enumerate() {
            if !img.constant_term().is_zero() {
                return Err(domain(format!(
                    "image of variable {i} has a nonzero constant term"
                )));
            }
        }
        let trunc = first.trunc;
        let vals: Vec<u32> = images
            .iter()
            .map(|s| s.valuation().unwrap_or(trunc + 1))
            .collect();
        let mut powers: Vec<Vec<TruncatedSeries>> = images
            .iter()
            .map(|_| vec![Self::one(&first.ring, first.nvars, trunc)])
            .collect();
        let mut out = Self::zero(&first.ring, first.nvars, trunc);
        for (m, c) in &self.terms {
            let min_deg: u32 = (0..self.nvars).map(|i| m.exp(i) * vals[i]).sum();
            if min_deg > trunc {
                continue;
            }
            let mut term = Self::constant(&first.ring, first.nvars, trunc, c.clone());
            for i in 0..self.nvars {
                let e = m.exp(i) as usize;
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e {
                    let next = powers[i].last().unwrap().mul_unchecked(&images[i]);
                    powers[i].push(next);
                }
                term = term.mul_unchecked(&powers[i][e]);
            }
            for (tm, tc) in term.terms {
                out.insert(tm, tc);
            }
        }
        Ok(out)
    }

    /// The multiplicative inverse of a series whose constant term is a unit.
    pub fn invert_unit(&self) -> Result<Self> {
        let c0 = self.constant_term();
        let inv0 = self.ring.inverse(&c0).ok_or_else(|| {
            domain(format!(
                "constant term {} is not invertible in {}",
                self.ring.format(&c0),
                self.ring
            ))
        })?;
        let one = Self::one(&self.ring, self.nvars, self.trunc);
        // f = c0 (1 + u) with u = c0^{-1} (f - c0); 1/(1+u) = 1 - u + u^2 - ...
        let u = self
            .sub(&Self::constant(&self.ring, self.nvars, self.trunc, c0))?
            .scale(&inv0);
        let neg_u = u.neg();
        let mut g = one.clone();
        for _ in 0..self.trunc {
            g = one.add(&neg_u.mul_unchecked(&g))?;
        }
        Ok(g.scale(&inv0))
    }

    /// The sum of all terms of total degree exactly `d`.
    pub fn homogeneous_part(&self, d: u32) -> Self {
        TruncatedSeries {
            ring: self.ring.clone(),
            nvars: self.nvars,
            trunc: self.trunc,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.deg == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Least total degree of a nonzero term; `None` stands for the zero
    /// series (infinite valuation). Only certified up to the truncation.
    pub fn valuation(&self) -> Option<u32> {
        self.terms.keys().next().map(|m| m.deg)
    }

    /// Drops all terms above `trunc` and records the lower bound.
    pub fn truncate_to(&self, trunc: u32) -> Result<Self> {
        if trunc > self.trunc {
            return Err(precondition(format!(
                "cannot raise truncation from {} to {trunc}",
                self.trunc
            )));
        }
        Ok(TruncatedSeries {
            ring: self.ring.clone(),
            nvars: self.nvars,
            trunc,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.deg <= trunc)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        })
    }

    /// Re-expresses the coefficients in `ring` along the canonical map.
    pub fn change_ring(&self, ring: &CoeffRing) -> Result<Self> {
        let mut out = Self::zero(ring, self.nvars, self.trunc);
        for (m, c) in &self.terms {
            out.insert(m.clone(), ring.convert(c, &self.ring)?);
        }
        Ok(out)
    }

    /// Embeds the series into a space with more variables; variable `i`
    /// becomes variable `positions[i]`.
    pub fn embed(&self, nvars: usize, positions: &[usize]) -> Result<Self> {
        if positions.len() != self.nvars || positions.iter().any(|&p| p >= nvars) {
            return Err(structural("invalid variable embedding"));
        }
        let mut out = Self::zero(&self.ring, nvars, self.trunc);
        for (m, c) in &self.terms {
            let mut exps = vec![0u32; nvars];
            for (i, &p) in positions.iter().enumerate() {
                exps[p] += m.exp(i);
            }
            out.insert(Monomial::new(&exps), c.clone());
        }
        Ok(out)
    }

    /// Formal partial derivative in variable `i`. The truncation drops by one.
    pub fn derivative(&self, i: usize) -> Result<Self> {
        if i >= self.nvars {
            return Err(structural(format!("no variable {i}")));
        }
        if self.trunc == 0 {
            return Err(precondition(
                "cannot differentiate a series truncated at degree 0",
            ));
        }
        let mut out = Self::zero(&self.ring, self.nvars, self.trunc - 1);
        for (m, c) in &self.terms {
            let e = m.exp(i);
            if e == 0 {
                continue;
            }
            let mut exps = m.exps();
            exps[i] -= 1;
            out.insert(Monomial::new(&exps), c.mul(&self.ring.from_int(e as i64)));
        }
        Ok(out)
    }

    /// Formal antiderivative in variable `i` with zero integration constant.
    /// The truncation rises by one; needs `e + 1` invertible for every
    /// exponent `e` that occurs.
    pub fn integrate(&self, i: usize) -> Result<Self> {
        if i >= self.nvars {
            return Err(structural(format!("no variable {i}")));
        }
        let mut out = Self::zero(&self.ring, self.nvars, self.trunc + 1);
        for (m, c) in &self.terms {
            let mut exps = m.exps();
            exps[i] += 1;
            out.insert(Monomial::new(&exps), self.ring.div_int(c, exps[i] as i64)?);
        }
        Ok(out)
    }

    /// Renders the series with the given variable names.
    pub fn display_with(&self, names: &[&str]) -> String {
        let names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        self.render(&names)
    }

    fn render(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let mono = m.render(names);
            let first = i == 0;
            match c {
                Coeff::Int(k) => ring::push_signed_term(
                    &mut out,
                    first,
                    &BigRational::from_integer(k.clone()),
                    &mono,
                ),
                Coeff::Rat(q) => ring::push_signed_term(&mut out, first, q, &mono),
                Coeff::Mod { value, .. } => {
                    let q = BigRational::from_integer((*value).into());
                    ring::push_signed_term(&mut out, first, &q, &mono)
                }
                Coeff::Poly(p) => {
                    let text = self.ring.format(c);
                    let single = p.terms().count() == 1;
                    if single {
                        // Pull a leading sign out of a one-term coefficient.
                        let (_, q) = p.terms().next().unwrap();
                        let (neg, body) = match text.strip_prefix('-') {
                            Some(rest) if q.is_negative() => (true, rest.to_string()),
                            _ => (false, text.clone()),
                        };
                        if !first {
                            out.push_str(if neg { " - " } else { " + " });
                        } else if neg {
                            out.push('-');
                        }
                        if mono.is_empty() {
                            out.push_str(&body);
                        } else if body == "1" {
                            out.push_str(&mono);
                        } else {
                            out.push_str(&format!("{body}*{mono}"));
                        }
                    } else {
                        if !first {
                            out.push_str(" + ");
                        }
                        if mono.is_empty() {
                            out.push_str(&format!("({text})"));
                        } else {
                            out.push_str(&format!("({text})*{mono}"));
                        }
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.nvars).map(|i| format!("x{i}")).collect();
        write!(f, "{}", self.render(&names))
    }
}

/// Integer coefficient of a series over ℤ, for lattice extraction.
pub(crate) fn int_coeff(c: &Coeff) -> Result<num_bigint::BigInt> {
    c.as_bigint()
        .cloned()
        .ok_or_else(|| domain("integer coefficients required"))
}
