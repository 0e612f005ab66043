//! One-dimensional commutative formal group laws as truncated bivariate
//! series `F(u, v) = u + v + Σ a_ij u^i v^j`.

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{domain, precondition, structural, Result};
use crate::series::{Coeff, CoeffRing, Monomial, TruncatedSeries};

/// The closed-form laws.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BuiltinLaw {
    /// `u + v`
    Additive,
    /// `u + v - uv`
    Multiplicative,
    /// `(u + v) / (1 + uv)`
    Lorentz,
}

impl BuiltinLaw {
    pub fn name(self) -> &'static str {
        match self {
            BuiltinLaw::Additive => "additive",
            BuiltinLaw::Multiplicative => "multiplicative",
            BuiltinLaw::Lorentz => "lorentz",
        }
    }
}

/// A formal group law truncated at total degree `D`.
///
/// The formal inverse and the logarithm are computed on first use and cached.
#[derive(Clone, Debug)]
pub struct FormalGroupLaw {
    name: String,
    series: TruncatedSeries,
    inverse: OnceLock<TruncatedSeries>,
    log: OnceLock<Result<TruncatedSeries>>,
}

impl PartialEq for FormalGroupLaw {
    fn eq(&self, other: &Self) -> bool {
        self.series == other.series
    }
}

impl FormalGroupLaw {
    /// Wraps an arbitrary bivariate series. Nothing beyond the shape is
    /// checked; use [`FormalGroupLaw::verify_axioms`] for the group law axioms.
    pub fn from_series(name: impl Into<String>, series: TruncatedSeries) -> Result<Self> {
        if series.nvars() != 2 {
            return Err(structural(format!(
                "a formal group law is a series in 2 variables, got {}",
                series.nvars()
            )));
        }
        if !series.constant_term().is_zero() {
            return Err(domain("a formal group law has no constant term"));
        }
        Ok(FormalGroupLaw {
            name: name.into(),
            series,
            inverse: OnceLock::new(),
            log: OnceLock::new(),
        })
    }

    pub fn builtin(which: BuiltinLaw, ring: &CoeffRing, trunc: u32) -> Self {
        let u = TruncatedSeries::var(ring, 2, trunc, 0);
        let v = TruncatedSeries::var(ring, 2, trunc, 1);
        let sum = u.add(&v).expect("same space");
        let uv = u.mul(&v).expect("same space");
        let series = match which {
            BuiltinLaw::Additive => sum,
            BuiltinLaw::Multiplicative => sum.sub(&uv).expect("same space"),
            BuiltinLaw::Lorentz => {
                let denom = TruncatedSeries::one(ring, 2, trunc)
                    .add(&uv)
                    .expect("same space");
                let inv = denom.invert_unit().expect("constant term 1 is a unit");
                sum.mul(&inv).expect("same space")
            }
        };
        Self::from_series(which.name(), series).expect("builtin laws are well formed")
    }

    /// The law of the Weierstrass curve
    /// `w = z³ + a1·z·w + a2·z²·w + a3·w² + a4·z·w² + a6·w³` in the local
    /// parameter `z` at the origin. `coeffs` is `[a1, a2, a3, a4, a6]`.
    pub fn elliptic(coeffs: &[Coeff; 5], ring: &CoeffRing, trunc: u32) -> Result<Self> {
        if trunc < 2 {
            return Err(precondition(
                "elliptic expansion needs truncation degree at least 2",
            ));
        }
        if let Some(c) = coeffs.iter().find(|c| !ring.contains(c)) {
            return Err(structural(format!(
                "coefficient {c:?} is not an element of {ring}"
            )));
        }
        let [a1, a2, a3, a4, a6] = coeffs;

        // w(z) by fixed-point iteration; each pass fixes one more degree.
        // One extra degree is needed because the chord slope divides by v - u.
        let z = TruncatedSeries::var(ring, 1, trunc + 1, 0);
        let z2 = z.mul(&z)?;
        let z3 = z2.mul(&z)?;
        let mut w = z3.clone();
        for _ in 0..=trunc {
            let w2 = w.mul(&w)?;
            let w3 = w2.mul(&w)?;
            w = z3
                .add(&z.mul(&w)?.scale(a1))?
                .add(&z2.mul(&w)?.scale(a2))?
                .add(&w2.scale(a3))?
                .add(&z.mul(&w2)?.scale(a4))?
                .add(&w3.scale(a6))?;
        }

        // Chord through (u, w(u)) and (v, w(v)): w = λ z + ν.
        let u = TruncatedSeries::var(ring, 2, trunc, 0);
        let v = TruncatedSeries::var(ring, 2, trunc, 1);
        let mut lambda = TruncatedSeries::zero(ring, 2, trunc);
        for (m, c) in w.terms() {
            // (v^k - u^k)/(v - u) = Σ_{i+j=k-1} u^i v^j
            let k = m.degree();
            let h = TruncatedSeries::from_terms(
                ring,
                2,
                trunc,
                (0..k).map(|i| (vec![i, k - 1 - i], c.clone())),
            )?;
            lambda = lambda.add(&h)?;
        }
        let w = w.truncate_to(trunc)?;
        let wu = w.substitute(std::slice::from_ref(&u))?;
        let nu = wu.sub(&lambda.mul(&u)?)?;

        // Plugging the chord into the curve gives A z³ + B z² + ... = 0,
        // so the third root is z3 = -u - v - B/A.
        let l2 = lambda.mul(&lambda)?;
        let l3 = l2.mul(&lambda)?;
        let one = TruncatedSeries::one(ring, 2, trunc);
        let big_a = one
            .add(&lambda.scale(a2))?
            .add(&l2.scale(a4))?
            .add(&l3.scale(a6))?;
        let big_b = lambda
            .scale(a1)
            .add(&nu.scale(a2))?
            .add(&l2.scale(a3))?
            .add(&lambda.mul(&nu)?.scale(&a4.mul(&ring.from_int(2))))?
            .add(&l2.mul(&nu)?.scale(&a6.mul(&ring.from_int(3))))?;
        let third = u.add(&v)?.add(&big_b.mul(&big_a.invert_unit()?)?)?.neg();

        // Negation on the curve: z ↦ -z / (1 - a1 z - a3 w(z)).
        let w_third = w.substitute(std::slice::from_ref(&third))?;
        let denom = one.sub(&third.scale(a1))?.sub(&w_third.scale(a3))?;
        let series = third.neg().mul(&denom.invert_unit()?)?;
        Self::from_series("elliptic", series)
    }

    /// Elliptic law with `a1, a2, a3, a4, a6` kept as free symbols.
    pub fn elliptic_symbolic(trunc: u32) -> Result<Self> {
        let ring = CoeffRing::poly_over_integers(["a1", "a2", "a3", "a4", "a6"]);
        let coeffs = [
            ring.symbol("a1")?,
            ring.symbol("a2")?,
            ring.symbol("a3")?,
            ring.symbol("a4")?,
            ring.symbol("a6")?,
        ];
        Self::elliptic(&coeffs, &ring, trunc)
    }

    /// Elliptic law over ℤ with integer Weierstrass coefficients.
    pub fn elliptic_integral(a: [i64; 5], trunc: u32) -> Result<Self> {
        let ring = CoeffRing::Integers;
        Self::elliptic(&a.map(|k| ring.from_int(k)), &ring, trunc)
    }

    /// `u + v + Σ a_ij u^i v^j` with free symbols `a_ij = a_ji`; the
    /// associativity relations are not imposed.
    pub fn symbolic(trunc: u32) -> Self {
        let mut pairs = Vec::new();
        for i in 1..trunc {
            for j in i..=trunc.saturating_sub(i) {
                pairs.push((i, j));
            }
        }
        let names: Vec<String> = pairs.iter().map(|&(i, j)| symbol_name(i, j)).collect();
        let ring = CoeffRing::poly_over_integers(names.clone());
        let mut terms = vec![(vec![1, 0], ring.one()), (vec![0, 1], ring.one())];
        for ((i, j), name) in pairs.into_iter().zip(&names) {
            let a = ring.symbol(name).expect("declared symbol");
            terms.push((vec![i, j], a.clone()));
            if i != j {
                terms.push((vec![j, i], a));
            }
        }
        let series = TruncatedSeries::from_terms(&ring, 2, trunc, terms).expect("well formed");
        Self::from_series("symbolic", series).expect("well formed")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn series(&self) -> &TruncatedSeries {
        &self.series
    }

    pub fn ring(&self) -> &CoeffRing {
        self.series.ring()
    }

    pub fn trunc(&self) -> u32 {
        self.series.trunc()
    }

    /// Whether the truncated law is exactly `u + v`.
    pub fn is_additive(&self) -> bool {
        self.series
            == FormalGroupLaw::builtin(BuiltinLaw::Additive, self.ring(), self.trunc()).series
    }

    /// Checks `F(u,0) = u`, `F(u,v) = F(v,u)` and associativity up to `D`.
    pub fn verify_axioms(&self) -> AxiomReport {
        let ring = self.ring();
        let d = self.trunc();

        let u1 = TruncatedSeries::var(ring, 1, d, 0);
        let zero1 = TruncatedSeries::zero(ring, 1, d);
        let unit = match self.series.substitute(&[u1.clone(), zero1]) {
            Ok(s) => AxiomCheck::compare(&s, &u1),
            Err(_) => AxiomCheck::fail(vec![0]),
        };

        let mut commutativity = AxiomCheck::pass();
        for (m, c) in self.series.terms() {
            let swapped = [m.exp(1), m.exp(0)];
            if &self.series.coeff(&swapped) != c {
                commutativity = AxiomCheck::fail(m.exps());
                break;
            }
        }

        let x: Vec<_> = (0..3)
            .map(|i| TruncatedSeries::var(ring, 3, d, i))
            .collect();
        let assoc = (|| -> Result<AxiomCheck> {
            let left_inner = self.series.substitute(&[x[0].clone(), x[1].clone()])?;
            let left = self.series.substitute(&[left_inner, x[2].clone()])?;
            let right_inner = self.series.substitute(&[x[1].clone(), x[2].clone()])?;
            let right = self.series.substitute(&[x[0].clone(), right_inner])?;
            Ok(AxiomCheck::compare(&left, &right))
        })();
        let associativity = assoc.unwrap_or_else(|_| AxiomCheck::fail(vec![0, 0, 0]));

        AxiomReport {
            unit,
            commutativity,
            associativity,
        }
    }

    /// `ι(u) = -u + O(2)` with `F(u, ι(u)) = 0`, solved one degree at a time.
    pub fn formal_inverse(&self) -> &TruncatedSeries {
        self.inverse.get_or_init(|| {
            let ring = self.ring();
            let d = self.trunc();
            let u = TruncatedSeries::var(ring, 1, d, 0);
            let mut inv = u.neg();
            for k in 2..=d {
                // The coefficient of u^k in F(u, ι) is linear in ι_k with slope 1.
                let residual = self
                    .series
                    .substitute(&[u.clone(), inv.clone()])
                    .expect("images share a space");
                let e = residual.coeff(&[k]);
                if !e.is_zero() {
                    let fix = TruncatedSeries::from_terms(ring, 1, d, [(vec![k], e.neg())])
                        .expect("well formed");
                    inv = inv.add(&fix).expect("same space");
                }
            }
            inv
        })
    }

    /// The one-variable series `[n]_F(u)`.
    pub fn multiple_series(&self, n: i64) -> TruncatedSeries {
        let ring = self.ring();
        let d = self.trunc();
        let u = TruncatedSeries::var(ring, 1, d, 0);
        let base = if n < 0 {
            self.formal_inverse().clone()
        } else {
            u
        };
        let mut acc = TruncatedSeries::zero(ring, 1, d);
        for _ in 0..n.unsigned_abs() {
            acc = self
                .series
                .substitute(&[acc, base.clone()])
                .expect("images share a space");
        }
        acc
    }

    /// `n ·_F s`: the n-fold formal sum, using `ι_F` for negative `n`.
    pub fn int_multiple(&self, n: i64, s: &TruncatedSeries) -> Result<TruncatedSeries> {
        if !s.constant_term().is_zero() {
            return Err(domain(
                "formal multiples need a series without constant term",
            ));
        }
        self.multiple_series(n).substitute(std::slice::from_ref(s))
    }

    /// `s +_F t = F(s, t)`.
    pub fn formal_sum(&self, s: &TruncatedSeries, t: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.series.substitute(&[s.clone(), t.clone()])
    }

    /// `log_F(u) = ∫ du / g(u)` with `g(u) = ∂F/∂v (u, 0)`, over the
    /// rational extension of the coefficient ring.
    pub fn logarithm(&self) -> Result<&TruncatedSeries> {
        self.log
            .get_or_init(|| {
                if self.ring().characteristic() != 0 {
                    return Err(domain(format!(
                        "the logarithm needs characteristic 0, {} has characteristic {}",
                        self.ring(),
                        self.ring().characteristic()
                    )));
                }
                let ext = self.ring().rational_extension()?;
                let d = self.trunc();
                let f = self.series.change_ring(&ext)?;
                let g = TruncatedSeries::from_terms(
                    &ext,
                    1,
                    d - 1,
                    f.terms()
                        .filter(|(m, _)| m.exp(1) == 1)
                        .map(|(m, c)| (vec![m.exp(0)], c.clone())),
                )?;
                g.invert_unit()?.integrate(0)
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    /// The law as text in the variables `u`, `v`.
    pub fn display(&self) -> String {
        self.series.display_with(&["u", "v"])
    }
}

impl fmt::Display for FormalGroupLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display())
    }
}

fn symbol_name(i: u32, j: u32) -> String {
    if i < 10 && j < 10 {
        format!("a{i}{j}")
    } else {
        format!("a{i}_{j}")
    }
}

/// Outcome of one axiom check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomCheck {
    pub pass: bool,
    /// Exponent vector of the first coefficient (in canonical monomial
    /// order) at which the two sides differ.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub failing_exponent: Option<Vec<u32>>,
}

impl AxiomCheck {
    fn pass() -> Self {
        AxiomCheck {
            pass: true,
            failing_exponent: None,
        }
    }

    fn fail(exps: Vec<u32>) -> Self {
        AxiomCheck {
            pass: false,
            failing_exponent: Some(exps),
        }
    }

    fn compare(lhs: &TruncatedSeries, rhs: &TruncatedSeries) -> Self {
        match first_difference(lhs, rhs) {
            None => Self::pass(),
            Some(m) => Self::fail(m.exps()),
        }
    }
}

/// First monomial (in canonical order) where two series in the same space differ.
pub fn first_difference(lhs: &TruncatedSeries, rhs: &TruncatedSeries) -> Option<Monomial> {
    let diff = lhs.sub(rhs).ok()?;
    let first = diff.terms().next().map(|(m, _)| m.clone());
    first
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub unit: AxiomCheck,
    pub commutativity: AxiomCheck,
    pub associativity: AxiomCheck,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        self.unit.pass && self.commutativity.pass && self.associativity.pass
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn z() -> CoeffRing {
        CoeffRing::Integers
    }

    fn series(ring: &CoeffRing, nvars: usize, d: u32, terms: &[(&[u32], i64)]) -> TruncatedSeries {
        TruncatedSeries::from_terms(
            ring,
            nvars,
            d,
            terms.iter().map(|(e, c)| (e.to_vec(), ring.from_int(*c))),
        )
        .unwrap()
    }

    fn rat(n: i64, d: i64) -> Coeff {
        Coeff::Rat(BigRational::new(n.into(), d.into()))
    }

    #[test]
    fn builtin_laws() {
        let fa = FormalGroupLaw::builtin(BuiltinLaw::Additive, &z(), 4);
        assert_eq!(fa.display(), "u + v");
        let fm = FormalGroupLaw::builtin(BuiltinLaw::Multiplicative, &z(), 4);
        assert_eq!(fm.display(), "u + v - u*v");
        let fl = FormalGroupLaw::builtin(BuiltinLaw::Lorentz, &z(), 4);
        assert_eq!(fl.display(), "u + v - u^2*v - u*v^2");
    }

    #[test]
    fn lorentz_matches_closed_form_sum() {
        let d = 9;
        let fl = FormalGroupLaw::builtin(BuiltinLaw::Lorentz, &z(), d);
        let mut terms: Vec<(Vec<u32>, i64)> = vec![(vec![1, 0], 1), (vec![0, 1], 1)];
        for i in 1..d {
            if 2 * i + 1 > d {
                break;
            }
            let sign = if i % 2 == 0 { 1 } else { -1 };
            terms.push((vec![i, i + 1], sign));
            terms.push((vec![i + 1, i], sign));
        }
        let expected = TruncatedSeries::from_terms(
            &z(),
            2,
            d,
            terms.into_iter().map(|(e, c)| (e, z().from_int(c))),
        )
        .unwrap();
        assert_eq!(fl.series(), &expected);
    }

    #[test]
    fn axioms_of_builtins() {
        for law in [
            BuiltinLaw::Additive,
            BuiltinLaw::Multiplicative,
            BuiltinLaw::Lorentz,
        ] {
            assert!(
                FormalGroupLaw::builtin(law, &z(), 8)
                    .verify_axioms()
                    .all_pass(),
                "{law:?}"
            );
        }
    }

    #[test]
    fn asymmetric_series_fails_commutativity_at_uv2() {
        let f = FormalGroupLaw::from_series(
            "bad",
            series(&z(), 2, 4, &[(&[1, 0], 1), (&[0, 1], 1), (&[1, 2], 1)]),
        )
        .unwrap();
        let report = f.verify_axioms();
        assert!(report.unit.pass);
        assert!(!report.commutativity.pass);
        assert_eq!(report.commutativity.failing_exponent, Some(vec![1, 2]));
        assert!(!report.all_pass());
    }

    #[test]
    fn inverses() {
        let fa = FormalGroupLaw::builtin(BuiltinLaw::Additive, &z(), 4);
        assert_eq!(fa.formal_inverse(), &series(&z(), 1, 4, &[(&[1], -1)]));
        let fm = FormalGroupLaw::builtin(BuiltinLaw::Multiplicative, &z(), 4);
        assert_eq!(
            fm.formal_inverse(),
            &series(
                &z(),
                1,
                4,
                &[(&[1], -1), (&[2], -1), (&[3], -1), (&[4], -1)]
            )
        );
        let fs = FormalGroupLaw::symbolic(2);
        let ring = fs.ring().clone();
        let expected = TruncatedSeries::from_terms(
            &ring,
            1,
            2,
            [
                (vec![1], ring.from_int(-1)),
                (vec![2], ring.symbol("a11").unwrap()),
            ],
        )
        .unwrap();
        assert_eq!(fs.formal_inverse(), &expected);
    }

    #[test]
    fn multiples() {
        let fm = FormalGroupLaw::builtin(BuiltinLaw::Multiplicative, &z(), 4);
        let u = TruncatedSeries::var(&z(), 1, 4, 0);
        assert_eq!(
            fm.int_multiple(2, &u).unwrap(),
            series(&z(), 1, 4, &[(&[1], 2), (&[2], -1)])
        );
        assert_eq!(&fm.int_multiple(-1, &u).unwrap(), fm.formal_inverse());
        assert!(fm.int_multiple(0, &u).unwrap().is_zero());
        let fa = FormalGroupLaw::builtin(BuiltinLaw::Additive, &z(), 4);
        assert_eq!(
            fa.int_multiple(7, &u).unwrap(),
            series(&z(), 1, 4, &[(&[1], 7)])
        );
        let one = TruncatedSeries::one(&z(), 1, 4);
        assert!(matches!(
            fa.int_multiple(2, &one),
            Err(crate::Error::Domain(_))
        ));
    }

    #[test]
    fn formal_sums() {
        let fm = FormalGroupLaw::builtin(BuiltinLaw::Multiplicative, &z(), 3);
        let x1 = TruncatedSeries::var(&z(), 2, 3, 0);
        let x2 = TruncatedSeries::var(&z(), 2, 3, 1);
        assert_eq!(
            fm.formal_sum(&x1, &x2).unwrap(),
            series(&z(), 2, 3, &[(&[1, 0], 1), (&[0, 1], 1), (&[1, 1], -1)])
        );
        let zero = TruncatedSeries::zero(&z(), 2, 3);
        assert_eq!(fm.formal_sum(&x1, &zero).unwrap(), x1);
        let inv = fm
            .formal_inverse()
            .substitute(std::slice::from_ref(&x1))
            .unwrap();
        assert!(fm.formal_sum(&x1, &inv).unwrap().is_zero());
    }

    #[test]
    fn logarithms() {
        let fm = FormalGroupLaw::builtin(BuiltinLaw::Multiplicative, &z(), 4);
        let log = fm.logarithm().unwrap();
        assert_eq!(log.ring(), &CoeffRing::Rationals);
        for k in 1..=4u32 {
            assert_eq!(log.coeff(&[k]), rat(1, k as i64));
        }

        let fl = FormalGroupLaw::builtin(BuiltinLaw::Lorentz, &z(), 5);
        let log = fl.logarithm().unwrap();
        let expect = [rat(1, 1), rat(0, 1), rat(1, 3), rat(0, 1), rat(1, 5)];
        for (k, c) in expect.iter().enumerate() {
            assert_eq!(&log.coeff(&[k as u32 + 1]), c);
        }

        let fs = FormalGroupLaw::symbolic(2);
        let log = fs.logarithm().unwrap();
        assert_eq!(log.display_with(&["u"]), "u - 1/2*a11*u^2");

        let f2 = FormalGroupLaw::builtin(BuiltinLaw::Multiplicative, &CoeffRing::IntegersMod(3), 4);
        assert!(matches!(f2.logarithm(), Err(crate::Error::Domain(_))));
    }

    #[test]
    fn symbolic_law_shape() {
        let f = FormalGroupLaw::symbolic(2);
        assert_eq!(f.display(), "u + v + a11*u*v");
        let f3 = FormalGroupLaw::symbolic(3);
        assert_eq!(f3.series().coeff(&[2, 1]), f3.series().coeff(&[1, 2]));
        assert_eq!(f3.series().coeff(&[2, 1]), f3.ring().symbol("a12").unwrap());
        let lin = f3.series().homogeneous_part(1);
        assert_eq!(lin.display_with(&["u", "v"]), "u + v");
    }

    #[test]
    fn elliptic_low_degrees() {
        let f = FormalGroupLaw::elliptic_symbolic(4).unwrap();
        let r = f.ring().clone();
        let a = |s: &str| r.symbol(s).unwrap();
        let s = f.series();
        assert_eq!(s.coeff(&[1, 0]), r.one());
        assert_eq!(s.coeff(&[1, 1]), a("a1").neg());
        assert_eq!(s.coeff(&[2, 1]), a("a2").neg());
        assert_eq!(s.coeff(&[1, 2]), a("a2").neg());
        assert_eq!(
            s.coeff(&[2, 2]),
            a("a1").mul(&a("a2")).sub(&a("a3").mul(&r.from_int(3)))
        );
        assert!(s.coeff(&[2, 0]).is_zero());
        assert!(s.coeff(&[3, 0]).is_zero());

        let zero = FormalGroupLaw::elliptic_integral([0; 5], 4).unwrap();
        assert!(zero.is_additive());
    }

    #[test]
    fn elliptic_rejects_tiny_truncation() {
        assert!(FormalGroupLaw::elliptic_integral([1, 0, 0, 0, 0], 1).is_err());
    }
}
