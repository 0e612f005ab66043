//! The truncated formal group algebra `R[[Λ]]_F / I_F^{D+1}`.
//!
//! Elements are series in `x_{ω_1}, …, x_{ω_n}`: every class `x_λ` is
//! rewritten through the fundamental-weight coordinates of `λ`, so the
//! defining relations never need to be stored. Consequently the deformation
//! map between two laws fixes every representation; [`deform`] only changes
//! which law the element is read against.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;

use crate::error::{precondition, structural, Result};
use crate::fgl::FormalGroupLaw;
use crate::rootsys::{RootSystem, Weight};
use crate::series::{int_coeff, monomials_of_degree, Coeff, CoeffRing, Monomial, TruncatedSeries};

/// A root system, a formal group law and a truncation degree.
pub struct FgaContext {
    rs: Arc<RootSystem>,
    fgl: Arc<FormalGroupLaw>,
    trunc: u32,
    classes: Mutex<HashMap<Weight, TruncatedSeries>>,
    reflections: OnceLock<Vec<Vec<TruncatedSeries>>>,
}

impl fmt::Debug for FgaContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FgaContext")
            .field("type", &self.rs.label())
            .field("fgl", &self.fgl.name())
            .field("trunc", &self.trunc)
            .finish()
    }
}

impl FgaContext {
    /// The law must be known to at least degree `trunc`; it is cut down to
    /// exactly `trunc`.
    pub fn new(rs: Arc<RootSystem>, fgl: Arc<FormalGroupLaw>, trunc: u32) -> Result<Arc<Self>> {
        if trunc == 0 {
            return Err(precondition("truncation degree must be positive"));
        }
        if fgl.trunc() < trunc {
            return Err(structural(format!(
                "law known to degree {} cannot serve truncation degree {trunc}",
                fgl.trunc()
            )));
        }
        let fgl = if fgl.trunc() == trunc {
            fgl
        } else {
            Arc::new(FormalGroupLaw::from_series(
                fgl.name(),
                fgl.series().truncate_to(trunc)?,
            )?)
        };
        Ok(Arc::new(FgaContext {
            rs,
            fgl,
            trunc,
            classes: Mutex::new(HashMap::new()),
            reflections: OnceLock::new(),
        }))
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn root_system_arc(&self) -> &Arc<RootSystem> {
        &self.rs
    }

    pub fn fgl(&self) -> &FormalGroupLaw {
        &self.fgl
    }

    pub fn ring(&self) -> &CoeffRing {
        self.fgl.ring()
    }

    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    pub fn rank(&self) -> usize {
        self.rs.rank()
    }

    fn compatible(&self, other: &FgaContext) -> bool {
        *self.rs == *other.rs && self.ring() == other.ring() && self.trunc == other.trunc
    }

    /// `x_λ = (a_1 ·_F x_{ω_1}) +_F ⋯ +_F (a_n ·_F x_{ω_n})` for
    /// `λ = Σ a_i ω_i`, memoized per weight.
    pub fn class_series(&self, weight: &Weight) -> TruncatedSeries {
        if let Some(s) = self.classes.lock().unwrap().get(weight) {
            return s.clone();
        }
        let n = self.rank();
        let ring = self.ring();
        let mut acc = TruncatedSeries::zero(ring, n, self.trunc);
        for (i, &a) in weight.coords().iter().enumerate() {
            if a == 0 {
                continue;
            }
            let x = TruncatedSeries::var(ring, n, self.trunc, i);
            let term = self
                .fgl
                .int_multiple(a, &x)
                .expect("variables have no constant term");
            acc = if acc.is_zero() {
                term
            } else {
                self.fgl.formal_sum(&acc, &term).expect("same space")
            };
        }
        self.classes
            .lock()
            .unwrap()
            .entry(weight.clone())
            .or_insert(acc)
            .clone()
    }

    /// Images of `x_{ω_j}` under each simple reflection.
    fn reflection_images(&self) -> &[Vec<TruncatedSeries>] {
        self.reflections.get_or_init(|| {
            let n = self.rank();
            (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| self.class_series(&self.rs.reflect(i, &Weight::fundamental(n, j))))
                        .collect()
                })
                .collect()
        })
    }

    pub fn zero(self: &Arc<Self>) -> FgaElement {
        self.wrap(TruncatedSeries::zero(self.ring(), self.rank(), self.trunc))
    }

    pub fn one(self: &Arc<Self>) -> FgaElement {
        self.wrap(TruncatedSeries::one(self.ring(), self.rank(), self.trunc))
    }

    pub fn x_of_weight(self: &Arc<Self>, weight: &Weight) -> FgaElement {
        self.wrap(self.class_series(weight))
    }

    /// `x_{e_j}` for the `j`-th vector of the `e`-realization.
    pub fn x_of_e(self: &Arc<Self>, j: usize) -> Result<FgaElement> {
        Ok(self.x_of_weight(&self.rs.e_basis_weight(j)?))
    }

    /// Wraps a series in `n` variables at this context's truncation.
    pub fn element(self: &Arc<Self>, series: TruncatedSeries) -> Result<FgaElement> {
        if series.nvars() != self.rank()
            || series.trunc() != self.trunc
            || series.ring() != self.ring()
        {
            return Err(structural(
                "series does not live in this formal group algebra",
            ));
        }
        Ok(self.wrap(series))
    }

    fn wrap(self: &Arc<Self>, series: TruncatedSeries) -> FgaElement {
        FgaElement {
            ctx: Arc::clone(self),
            series,
        }
    }
}

/// An element of a truncated formal group algebra.
#[derive(Clone, Debug)]
pub struct FgaElement {
    ctx: Arc<FgaContext>,
    series: TruncatedSeries,
}

impl PartialEq for FgaElement {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.compatible(&other.ctx) && self.series == other.series
    }
}

impl FgaElement {
    pub fn context(&self) -> &Arc<FgaContext> {
        &self.ctx
    }

    pub fn series(&self) -> &TruncatedSeries {
        &self.series
    }

    pub fn into_series(self) -> TruncatedSeries {
        self.series
    }

    pub fn is_zero(&self) -> bool {
        self.series.is_zero()
    }

    pub fn valuation(&self) -> Option<u32> {
        self.series.valuation()
    }

    fn check(&self, other: &FgaElement) -> Result<()> {
        if Arc::ptr_eq(&self.ctx, &other.ctx) || self.ctx.compatible(&other.ctx) {
            Ok(())
        } else {
            Err(structural("elements of different formal group algebras"))
        }
    }

    pub fn add(&self, other: &FgaElement) -> Result<FgaElement> {
        self.check(other)?;
        Ok(self.ctx.wrap(self.series.add(&other.series)?))
    }

    pub fn sub(&self, other: &FgaElement) -> Result<FgaElement> {
        self.check(other)?;
        Ok(self.ctx.wrap(self.series.sub(&other.series)?))
    }

    pub fn mul(&self, other: &FgaElement) -> Result<FgaElement> {
        self.check(other)?;
        Ok(self.ctx.wrap(self.series.mul(&other.series)?))
    }

    pub fn neg(&self) -> FgaElement {
        self.ctx.wrap(self.series.neg())
    }

    pub fn scale(&self, c: &Coeff) -> FgaElement {
        self.ctx.wrap(self.series.scale(c))
    }

    /// The ring automorphism induced by the word `s_{w[0]} s_{w[1]} ⋯`
    /// (letters 1-based, last letter acting first).
    pub fn weyl_act(&self, word: &[usize]) -> Result<FgaElement> {
        let n = self.ctx.rank();
        if let Some(&bad) = word.iter().find(|&&l| l == 0 || l > n) {
            return Err(crate::error::domain(format!(
                "reflection index {bad} outside 1..={n}"
            )));
        }
        let images = self.ctx.reflection_images();
        let mut s = self.series.clone();
        for &letter in word.iter().rev() {
            s = s.substitute(&images[letter - 1])?;
        }
        Ok(self.ctx.wrap(s))
    }

    /// Whether every simple reflection fixes this element.
    pub fn is_weyl_invariant(&self) -> bool {
        (1..=self.ctx.rank()).all(|i| self.weyl_act(&[i]).is_ok_and(|g| g.series == self.series))
    }

    /// The augmentation `x_λ ↦ 0`.
    pub fn augment(&self) -> Coeff {
        self.series.constant_term()
    }

    /// The class of this element in `I^d / I^{d+1} ≅ S^d(Λ)`.
    pub fn leading_form(&self, d: u32) -> Result<SymmetricSlice> {
        if let Some(v) = self.valuation() {
            if v < d {
                return Err(precondition(format!(
                    "element has valuation {v}, so it does not lie in I^{d}"
                )));
            }
        }
        if d > self.ctx.trunc {
            return Err(precondition(format!(
                "degree {d} exceeds the truncation degree {}",
                self.ctx.trunc
            )));
        }
        Ok(SymmetricSlice::from_series(&self.series, d))
    }
}

/// Reads `f` as an element of the algebra for another law. In
/// fundamental-weight coordinates the deformation map fixes each `x_{ω_i}`
/// and is a ring map, so the series is carried over unchanged.
pub fn deform(dst: &Arc<FgaContext>, f: &FgaElement) -> Result<FgaElement> {
    if !f.ctx.compatible(dst) {
        return Err(structural(
            "deformation needs the same root system, coefficient ring and truncation",
        ));
    }
    Ok(dst.wrap(f.series.clone()))
}

/// A vector in `S^d(Λ) ⊗ R`, indexed by the degree-`d` monomials in the
/// fundamental weights in canonical order.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricSlice {
    ring: CoeffRing,
    nvars: usize,
    degree: u32,
    coeffs: Vec<Coeff>,
}

impl SymmetricSlice {
    /// Coefficients of the degree-`d` part of `s`.
    pub fn from_series(s: &TruncatedSeries, d: u32) -> Self {
        let basis = monomials_of_degree(s.nvars(), d);
        let coeffs = basis.iter().map(|m| s.coeff(&m.exps())).collect();
        SymmetricSlice {
            ring: s.ring().clone(),
            nvars: s.nvars(),
            degree: d,
            coeffs,
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn ring(&self) -> &CoeffRing {
        &self.ring
    }

    pub fn coeffs(&self) -> &[Coeff] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Coeff::is_zero)
    }

    pub fn basis(&self) -> Vec<Monomial> {
        monomials_of_degree(self.nvars, self.degree)
    }

    /// The vector as integers; fails unless the coefficients are integers.
    pub fn to_integers(&self) -> Result<Vec<BigInt>> {
        self.coeffs.iter().map(int_coeff).collect()
    }

    /// The homogeneous series with these coefficients.
    pub fn to_series(&self, trunc: u32) -> Result<TruncatedSeries> {
        TruncatedSeries::from_terms(
            &self.ring,
            self.nvars,
            trunc,
            self.basis()
                .into_iter()
                .map(|m| m.exps())
                .zip(self.coeffs.iter().cloned()),
        )
    }
}

impl fmt::Display for SymmetricSlice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.nvars).map(|i| format!("w{i}")).collect();
        let names: Vec<&str> = names.iter().map(String::as_str).collect();
        match self.to_series(self.degree.max(1)) {
            Ok(s) => write!(f, "{}", s.display_with(&names)),
            Err(_) => write!(f, "<slice>"),
        }
    }
}
