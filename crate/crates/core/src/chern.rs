//! Characteristic classes through Chern roots over an arbitrary formal group
//! law.
//!
//! Bundles are described by their Chern roots, which are series in a shared
//! [`ClassSpace`]. Total classes are polynomials in a formal variable `t`
//! whose `t^i` coefficient is the `i`-th class. The `γ`-filtration step
//! `γ^{r+1}` is modelled by discarding terms of root degree above `r`: it is
//! generated by products of at least `r+1` first classes, each of root
//! valuation one.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{domain, precondition, structural, Result};
use crate::fgl::FormalGroupLaw;
use crate::series::{CoeffRing, TruncatedSeries};

/// The series ring holding the Chern roots, truncated at the class degree.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassSpace {
    ring: CoeffRing,
    nvars: usize,
    class_degree: u32,
}

impl ClassSpace {
    pub fn new(ring: &CoeffRing, nvars: usize, class_degree: u32) -> Result<Self> {
        if class_degree == 0 {
            return Err(domain("class degree must be positive"));
        }
        Ok(ClassSpace {
            ring: ring.clone(),
            nvars,
            class_degree,
        })
    }

    pub fn ring(&self) -> &CoeffRing {
        &self.ring
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn class_degree(&self) -> u32 {
        self.class_degree
    }

    /// The `i`-th root variable.
    pub fn root(&self, i: usize) -> TruncatedSeries {
        TruncatedSeries::var(&self.ring, self.nvars.max(1), self.class_degree, i)
    }

    pub fn zero(&self) -> TruncatedSeries {
        TruncatedSeries::zero(&self.ring, self.nvars.max(1), self.class_degree)
    }

    pub fn one(&self) -> TruncatedSeries {
        TruncatedSeries::one(&self.ring, self.nvars.max(1), self.class_degree)
    }

    /// A bundle whose roots are the variables `first..first+rank`.
    pub fn bundle(&self, first: usize, rank: usize) -> Result<RootBundle> {
        if first + rank > self.nvars {
            return Err(structural(format!(
                "roots {first}..{} exceed the {} variables of the class space",
                first + rank,
                self.nvars
            )));
        }
        Ok(RootBundle {
            roots: (first..first + rank).map(|i| self.root(i)).collect(),
        })
    }

    /// The trivial line bundle (single root 0).
    pub fn trivial_line(&self) -> RootBundle {
        RootBundle {
            roots: vec![self.zero()],
        }
    }
}

/// A bundle given by its Chern roots.
#[derive(Clone, Debug, PartialEq)]
pub struct RootBundle {
    pub roots: Vec<TruncatedSeries>,
}

impl RootBundle {
    pub fn rank(&self) -> usize {
        self.roots.len()
    }

    /// Direct sum.
    pub fn sum(&self, other: &RootBundle) -> RootBundle {
        RootBundle {
            roots: self.roots.iter().chain(&other.roots).cloned().collect(),
        }
    }
}

/// `1 + c_1 t + c_2 t^2 + ⋯`, stored up to `t^D`.
#[derive(Clone, Debug, PartialEq)]
pub struct TotalClass {
    coeffs: Vec<TruncatedSeries>,
}

impl TotalClass {
    pub fn one(space: &ClassSpace) -> Self {
        let mut coeffs = vec![space.zero(); space.class_degree as usize + 1];
        coeffs[0] = space.one();
        TotalClass { coeffs }
    }

    /// `1 + x t`.
    pub fn linear(space: &ClassSpace, x: &TruncatedSeries) -> Self {
        let mut c = Self::one(space);
        c.coeffs[1] = x.clone();
        c
    }

    /// The coefficient of `t^i` (zero beyond the stored range).
    pub fn class(&self, i: usize) -> TruncatedSeries {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| self.coeffs[0].scale_int(0))
    }

    pub fn coeffs(&self) -> &[TruncatedSeries] {
        &self.coeffs
    }

    /// Highest `i` with a nonzero `t^i` coefficient.
    pub fn t_degree(&self) -> usize {
        self.coeffs.iter().rposition(|c| !c.is_zero()).unwrap_or(0)
    }

    pub fn mul(&self, other: &TotalClass) -> Result<TotalClass> {
        let top = self.coeffs.len();
        if other.coeffs.len() != top {
            return Err(structural("total classes of different class degrees"));
        }
        let zero = self.coeffs[0].scale_int(0);
        let mut out = vec![zero; top];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..top - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = out[i + j].add(&a.mul(b)?)?;
                }
            }
        }
        Ok(TotalClass { coeffs: out })
    }

    /// The inverse in `1 + t·(…)`.
    pub fn inverse(&self) -> Result<TotalClass> {
        if self.coeffs[0].len() != 1 || !self.coeffs[0].constant_term().is_one() {
            return Err(domain("total classes start with 1"));
        }
        let top = self.coeffs.len();
        let mut g = vec![self.coeffs[0].clone()];
        for k in 1..top {
            let mut acc = self.coeffs[0].scale_int(0);
            for i in 1..=k {
                acc = acc.add(&self.coeffs[i].mul(&g[k - i])?)?;
            }
            g.push(acc.neg());
        }
        Ok(TotalClass { coeffs: g })
    }
}

impl fmt::Display for TotalClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})t")?,
                _ => write!(f, "({c})t^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Bundles built from root bundles by duals, tensor and exterior powers.
#[derive(Clone, Debug, PartialEq)]
pub enum BundleExpr {
    Bundle(RootBundle),
    Dual(Box<BundleExpr>),
    Tensor(Box<BundleExpr>, Box<BundleExpr>),
    Exterior(Box<BundleExpr>, usize),
}

impl BundleExpr {
    pub fn dual(self) -> Self {
        BundleExpr::Dual(Box::new(self))
    }

    pub fn tensor(self, other: BundleExpr) -> Self {
        BundleExpr::Tensor(Box::new(self), Box::new(other))
    }

    pub fn exterior(self, l: usize) -> Self {
        BundleExpr::Exterior(Box::new(self), l)
    }
}

/// Chern-root calculus for one law on one class space.
pub struct Calculus<'a> {
    fgl: &'a FormalGroupLaw,
    space: ClassSpace,
}

impl<'a> Calculus<'a> {
    pub fn new(fgl: &'a FormalGroupLaw, space: ClassSpace) -> Result<Self> {
        if fgl.ring() != space.ring() {
            return Err(structural(format!(
                "law over {} used on classes over {}",
                fgl.ring(),
                space.ring()
            )));
        }
        if fgl.trunc() < space.class_degree() {
            return Err(structural(format!(
                "law known to degree {} cannot serve class degree {}",
                fgl.trunc(),
                space.class_degree()
            )));
        }
        Ok(Calculus { fgl, space })
    }

    pub fn space(&self) -> &ClassSpace {
        &self.space
    }

    /// `ι_F(x)`.
    pub fn inverse_of(&self, x: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.fgl
            .formal_inverse()
            .substitute(std::slice::from_ref(x))
    }

    /// `x_1 +_F x_2 +_F ⋯`, folded from the left; `0` for no summands.
    pub fn formal_sum_all(&self, xs: &[TruncatedSeries]) -> Result<TruncatedSeries> {
        let Some((first, rest)) = xs.split_first() else {
            return Ok(self.space.zero());
        };
        rest.iter()
            .try_fold(first.clone(), |acc, x| self.fgl.formal_sum(&acc, x))
    }

    /// Chern roots of a bundle expression.
    pub fn roots(&self, e: &BundleExpr) -> Result<Vec<TruncatedSeries>> {
        match e {
            BundleExpr::Bundle(b) => Ok(b.roots.clone()),
            BundleExpr::Dual(inner) => self
                .roots(inner)?
                .iter()
                .map(|x| self.inverse_of(x))
                .collect(),
            BundleExpr::Tensor(a, b) => {
                let (ra, rb) = (self.roots(a)?, self.roots(b)?);
                let mut out = Vec::with_capacity(ra.len() * rb.len());
                for x in &ra {
                    for y in &rb {
                        out.push(self.fgl.formal_sum(x, y)?);
                    }
                }
                Ok(out)
            }
            BundleExpr::Exterior(inner, l) => {
                let r = self.roots(inner)?;
                if *l == 0 {
                    return Ok(vec![self.space.zero()]);
                }
                let mut out = Vec::new();
                for subset in subsets(r.len(), *l) {
                    let parts: Vec<TruncatedSeries> =
                        subset.iter().map(|&i| r[i].clone()).collect();
                    out.push(self.formal_sum_all(&parts)?);
                }
                Ok(out)
            }
        }
    }

    /// `∏ (1 + x t)` over the given roots.
    pub fn class_of_roots(&self, roots: &[TruncatedSeries]) -> Result<TotalClass> {
        roots
            .iter()
            .try_fold(TotalClass::one(&self.space), |acc, x| {
                acc.mul(&TotalClass::linear(&self.space, x))
            })
    }

    pub fn total_class(&self, e: &RootBundle) -> Result<TotalClass> {
        self.class_of_roots(&e.roots)
    }

    pub fn dual_class(&self, e: &RootBundle) -> Result<TotalClass> {
        self.class_of(&BundleExpr::Bundle(e.clone()).dual())
    }

    pub fn tensor_class(&self, e: &RootBundle, f: &RootBundle) -> Result<TotalClass> {
        self.class_of(&BundleExpr::Bundle(e.clone()).tensor(BundleExpr::Bundle(f.clone())))
    }

    /// `∧^l E` for `1 ≤ l ≤ rank E`.
    pub fn exterior_class(&self, e: &RootBundle, l: usize) -> Result<TotalClass> {
        if l == 0 || l > e.rank() {
            return Err(domain(format!(
                "exterior power {l} of a rank-{} bundle is outside 1..=rank",
                e.rank()
            )));
        }
        self.class_of(&BundleExpr::Bundle(e.clone()).exterior(l))
    }

    pub fn class_of(&self, e: &BundleExpr) -> Result<TotalClass> {
        self.class_of_roots(&self.roots(e)?)
    }

    /// `∏ ch(E_k)^{±1}` for a formal sum `Σ ±E_k`.
    pub fn virtual_class(&self, terms: &[(i32, BundleExpr)]) -> Result<TotalClass> {
        let mut acc = TotalClass::one(&self.space);
        for (sign, e) in terms {
            let c = self.class_of(e)?;
            acc = match sign.signum() {
                1 => acc.mul(&c)?,
                -1 => acc.mul(&c.inverse()?)?,
                _ => return Err(domain("virtual bundle coefficients are +1 or -1")),
            };
        }
        Ok(acc)
    }
}

/// `k`-element subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Outcome of an identity check on characteristic classes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCheckReport {
    pub check: String,
    pub law: String,
    pub r: usize,
    pub class_degree: u32,
    pub pass: bool,
    pub expected: String,
    pub actual: String,
    /// First monomial (exponents of the roots) where the two sides differ.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failing_exponent: Option<Vec<u32>>,
}

fn root_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("a{i}")).collect()
}

fn show(s: &TruncatedSeries) -> String {
    let names = root_names(s.nvars());
    let names: Vec<&str> = names.iter().map(String::as_str).collect();
    s.display_with(&names)
}

/// `ch_r(∏_{l=1}^r (1 - L_l^∨)) ≡ (-1)^{r-1} (r-1)! ch_1(L_1)⋯ch_1(L_r)`
/// modulo `γ^{r+1}`, with `∏(1 - L^∨) = Σ (-1)^l ∧^l E^∨` for
/// `E = L_1 ⊕ ⋯ ⊕ L_r`.
pub fn verify_gamma_congruence(
    fgl: &FormalGroupLaw,
    r: usize,
    class_degree: u32,
) -> Result<ClassCheckReport> {
    if r == 0 {
        return Err(domain("the congruence needs r >= 1"));
    }
    if (class_degree as usize) < r {
        return Err(precondition(format!(
            "class degree {class_degree} is below r = {r}"
        )));
    }
    let space = ClassSpace::new(fgl.ring(), r, class_degree)?;
    let calc = Calculus::new(fgl, space)?;
    let e = calc.space().bundle(0, r)?;
    let e_dual = BundleExpr::Bundle(e).dual();
    let terms: Vec<(i32, BundleExpr)> = (1..=r)
        .map(|l| (if l % 2 == 0 { 1 } else { -1 }, e_dual.clone().exterior(l)))
        .collect();
    let total = calc.virtual_class(&terms)?;
    let actual = total.class(r).homogeneous_part(r as u32);

    let sign: i64 = if r % 2 == 1 { 1 } else { -1 };
    let fact: i64 = (1..r as i64).product();
    let product = (0..r).fold(calc.space().one(), |acc, i| {
        acc.mul(&calc.space().root(i)).expect("same space")
    });
    let expected = product.scale_int(sign * fact).homogeneous_part(r as u32);
    let failing = crate::fgl::first_difference(&actual, &expected).map(|m| m.exps());
    Ok(ClassCheckReport {
        check: "gamma".into(),
        law: fgl.name().to_string(),
        r,
        class_degree,
        pass: failing.is_none(),
        expected: show(&expected),
        actual: show(&actual),
        failing_exponent: failing,
    })
}

/// `ch(∧^l(E ⊕ L)) = ch(∧^{l-1}E ⊗ L) · ch(∧^l E)` for every
/// `1 ≤ l ≤ r + 1`, where `E` has rank `r` and `∧^l E = 0` for `l > r`.
pub fn verify_exterior_recursion(
    fgl: &FormalGroupLaw,
    r: usize,
    class_degree: u32,
) -> Result<ClassCheckReport> {
    let space = ClassSpace::new(fgl.ring(), r + 1, class_degree)?;
    let calc = Calculus::new(fgl, space)?;
    let e = BundleExpr::Bundle(calc.space().bundle(0, r)?);
    let line = BundleExpr::Bundle(calc.space().bundle(r, 1)?);
    let e_plus_l = BundleExpr::Bundle(calc.space().bundle(0, r + 1)?);
    let mut failing = None;
    let mut shown = (String::new(), String::new());
    for l in 1..=r + 1 {
        let lhs = calc.class_of(&e_plus_l.clone().exterior(l))?;
        let twisted = calc.class_of(&e.clone().exterior(l - 1).tensor(line.clone()))?;
        let rest = if l <= r {
            calc.class_of(&e.clone().exterior(l))?
        } else {
            TotalClass::one(calc.space())
        };
        let rhs = twisted.mul(&rest)?;
        if let Some(i) = (0..lhs.coeffs().len()).find(|&i| lhs.class(i) != rhs.class(i)) {
            let m = crate::fgl::first_difference(&lhs.class(i), &rhs.class(i)).map(|m| m.exps());
            failing = m.map(|mut v| {
                v.insert(0, l as u32);
                v
            });
            shown = (show(&rhs.class(i)), show(&lhs.class(i)));
            break;
        }
    }
    let pass = failing.is_none();
    Ok(ClassCheckReport {
        check: "exterior-recursion".into(),
        law: fgl.name().to_string(),
        r,
        class_degree,
        pass,
        expected: if pass { "identity".into() } else { shown.0 },
        actual: if pass { "identity".into() } else { shown.1 },
        failing_exponent: failing,
    })
}
