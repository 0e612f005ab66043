//! Exact coefficient rings.
//!
//! A [`CoeffRing`] is a runtime description of where coefficients live; a
//! [`Coeff`] is one element. Every coefficient is kept in canonical form
//! (reduced fractions, residues in `0..m`, symbolic polynomials without zero
//! terms), so structural equality is ring equality.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use smallvec::SmallVec;

use crate::error::{domain, parse, structural, Result};

/// Ordered list of symbol names for polynomial coefficient rings.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Symbols(Arc<[String]>);

impl Symbols {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Self {
        Symbols(names.into_iter().map(Into::into).collect::<Vec<_>>().into())
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|s| s == name)
    }
}

/// The coefficient ring of a series.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CoeffRing {
    Integers,
    Rationals,
    /// ℤ/m with m ≥ 2.
    IntegersMod(u64),
    /// ℤ[symbols], no relations among the symbols.
    PolyOverIntegers(Symbols),
    /// ℚ[symbols]; the rational extension of [`CoeffRing::PolyOverIntegers`].
    PolyOverRationals(Symbols),
}

impl CoeffRing {
    pub fn integers_mod(m: u64) -> Result<Self> {
        if m < 2 {
            return Err(domain(format!("modulus must be at least 2, got {m}")));
        }
        Ok(CoeffRing::IntegersMod(m))
    }

    pub fn poly_over_integers<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Self {
        CoeffRing::PolyOverIntegers(Symbols::new(names))
    }

    /// Parses `Z`, `Q` and `Z/<m>`.
    pub fn parse(spec: &str) -> Result<Self> {
        match spec.trim() {
            "Z" => Ok(CoeffRing::Integers),
            "Q" => Ok(CoeffRing::Rationals),
            s => match s.strip_prefix("Z/") {
                Some(m) => {
                    let m: u64 = m
                        .parse()
                        .map_err(|_| parse(format!("bad modulus in ring spec {s:?}")))?;
                    CoeffRing::integers_mod(m)
                }
                None => Err(parse(format!("unknown ring spec {s:?}"))),
            },
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            CoeffRing::IntegersMod(m) => *m,
            _ => 0,
        }
    }

    pub fn symbols(&self) -> Option<&Symbols> {
        match self {
            CoeffRing::PolyOverIntegers(s) | CoeffRing::PolyOverRationals(s) => Some(s),
            _ => None,
        }
    }

    /// True when `ℤ/m` has `m` prime or the ring has characteristic zero and
    /// no zero divisors.
    pub fn is_integral_domain(&self) -> bool {
        match self {
            CoeffRing::IntegersMod(m) => is_prime(*m),
            _ => true,
        }
    }

    /// Whether the integer `k` is a unit of this ring.
    pub fn int_is_unit(&self, k: i64) -> bool {
        match self {
            CoeffRing::Integers | CoeffRing::PolyOverIntegers(_) => k == 1 || k == -1,
            CoeffRing::Rationals | CoeffRing::PolyOverRationals(_) => k != 0,
            CoeffRing::IntegersMod(m) => (k.rem_euclid(*m as i64) as u64).gcd(m) == 1,
        }
    }

    /// The ring obtained by adjoining inverses of all nonzero integers.
    pub fn rational_extension(&self) -> Result<CoeffRing> {
        match self {
            CoeffRing::Integers | CoeffRing::Rationals => Ok(CoeffRing::Rationals),
            CoeffRing::PolyOverIntegers(s) | CoeffRing::PolyOverRationals(s) => {
                Ok(CoeffRing::PolyOverRationals(s.clone()))
            }
            CoeffRing::IntegersMod(m) => Err(domain(format!(
                "ℤ/{m} has positive characteristic and no rational extension"
            ))),
        }
    }

    pub fn zero(&self) -> Coeff {
        self.from_bigint(BigInt::zero())
    }

    pub fn one(&self) -> Coeff {
        self.from_bigint(BigInt::one())
    }

    pub fn from_int(&self, k: i64) -> Coeff {
        self.from_bigint(BigInt::from(k))
    }

    pub fn from_bigint(&self, k: BigInt) -> Coeff {
        match self {
            CoeffRing::Integers => Coeff::Int(k),
            CoeffRing::Rationals => Coeff::Rat(BigRational::from_integer(k)),
            CoeffRing::IntegersMod(m) => {
                let r = k
                    .mod_floor(&BigInt::from(*m))
                    .to_u64()
                    .expect("residue fits u64");
                Coeff::Mod {
                    value: r,
                    modulus: *m,
                }
            }
            CoeffRing::PolyOverIntegers(_) | CoeffRing::PolyOverRationals(_) => {
                Coeff::Poly(SymPoly::constant(BigRational::from_integer(k)))
            }
        }
    }

    /// A rational constant; fails unless the ring contains ℚ.
    pub fn from_ratio(&self, q: BigRational) -> Result<Coeff> {
        if q.is_integer() {
            return Ok(self.from_bigint(q.to_integer()));
        }
        match self {
            CoeffRing::Rationals => Ok(Coeff::Rat(q)),
            CoeffRing::PolyOverRationals(_) => Ok(Coeff::Poly(SymPoly::constant(q))),
            _ => Err(domain(format!("{q} is not an element of {self}"))),
        }
    }

    /// The coefficient given by a named symbol.
    pub fn symbol(&self, name: &str) -> Result<Coeff> {
        let syms = self
            .symbols()
            .ok_or_else(|| domain(format!("{self} has no symbols")))?;
        let idx = syms
            .index_of(name)
            .ok_or_else(|| domain(format!("unknown symbol {name:?} in {self}")))?;
        Ok(Coeff::Poly(SymPoly::variable(idx)))
    }

    /// Checks that `c` is a canonical element of this ring.
    pub fn contains(&self, c: &Coeff) -> bool {
        match (self, c) {
            (CoeffRing::Integers, Coeff::Int(_)) => true,
            (CoeffRing::Rationals, Coeff::Rat(_)) => true,
            (CoeffRing::IntegersMod(m), Coeff::Mod { value, modulus }) => m == modulus && value < m,
            (CoeffRing::PolyOverIntegers(s), Coeff::Poly(p)) => {
                p.is_integral() && p.max_symbol().is_none_or(|i| i < s.names().len())
            }
            (CoeffRing::PolyOverRationals(s), Coeff::Poly(p)) => {
                p.max_symbol().is_none_or(|i| i < s.names().len())
            }
            _ => false,
        }
    }

    /// Multiplicative inverse, if `c` is a unit.
    pub fn inverse(&self, c: &Coeff) -> Option<Coeff> {
        match (self, c) {
            (CoeffRing::Integers, Coeff::Int(k)) => {
                (k.abs().is_one()).then(|| Coeff::Int(k.clone()))
            }
            (CoeffRing::Rationals, Coeff::Rat(q)) => (!q.is_zero()).then(|| Coeff::Rat(q.recip())),
            (CoeffRing::IntegersMod(m), Coeff::Mod { value, .. }) => {
                mod_inverse(*value, *m).map(|v| Coeff::Mod {
                    value: v,
                    modulus: *m,
                })
            }
            (CoeffRing::PolyOverIntegers(_), Coeff::Poly(p)) => {
                let q = p.as_constant()?;
                (q.is_integer() && q.abs().is_one())
                    .then(|| Coeff::Poly(SymPoly::constant(q.clone())))
            }
            (CoeffRing::PolyOverRationals(_), Coeff::Poly(p)) => {
                let q = p.as_constant()?;
                (!q.is_zero()).then(|| Coeff::Poly(SymPoly::constant(q.recip())))
            }
            _ => None,
        }
    }

    /// Maps `c` from `from` into this ring along the canonical map
    /// (ℤ → anything, ℤ[s] → ℚ[s], ...).
    pub fn convert(&self, c: &Coeff, from: &CoeffRing) -> Result<Coeff> {
        if self == from {
            return Ok(c.clone());
        }
        match (from, c) {
            (CoeffRing::Integers, Coeff::Int(k)) => Ok(self.from_bigint(k.clone())),
            (CoeffRing::Rationals, Coeff::Rat(q)) => self.from_ratio(q.clone()),
            (CoeffRing::PolyOverIntegers(a), Coeff::Poly(p))
            | (CoeffRing::PolyOverRationals(a), Coeff::Poly(p)) => match self {
                CoeffRing::PolyOverIntegers(b) | CoeffRing::PolyOverRationals(b) if a == b => {
                    let out = Coeff::Poly(p.clone());
                    if self.contains(&out) {
                        Ok(out)
                    } else {
                        Err(domain(format!(
                            "{} is not an element of {self}",
                            from.format(c)
                        )))
                    }
                }
                _ => match p.as_constant() {
                    Some(q) => self.from_ratio(q.clone()),
                    None => Err(structural(format!(
                        "cannot map {} into {self}",
                        from.format(c)
                    ))),
                },
            },
            _ => Err(structural(format!(
                "cannot map coefficients of {from} into {self}"
            ))),
        }
    }

    /// `c / k` for a nonzero integer `k`, when the quotient exists.
    pub fn div_int(&self, c: &Coeff, k: i64) -> Result<Coeff> {
        let inv = self
            .inverse(&self.from_int(k))
            .ok_or_else(|| domain(format!("{k} is not invertible in {self}")))?;
        Ok(c.mul(&inv))
    }

    /// Human-readable rendering of a coefficient, using symbol names.
    pub fn format(&self, c: &Coeff) -> String {
        match c {
            Coeff::Int(k) => k.to_string(),
            Coeff::Rat(q) => q.to_string(),
            Coeff::Mod { value, .. } => value.to_string(),
            Coeff::Poly(p) => p.format(self.symbols().map(Symbols::names).unwrap_or(&[])),
        }
    }
}

impl fmt::Display for CoeffRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoeffRing::Integers => write!(f, "Z"),
            CoeffRing::Rationals => write!(f, "Q"),
            CoeffRing::IntegersMod(m) => write!(f, "Z/{m}"),
            CoeffRing::PolyOverIntegers(s) => write!(f, "Z[{}]", s.names().join(",")),
            CoeffRing::PolyOverRationals(s) => write!(f, "Q[{}]", s.names().join(",")),
        }
    }
}

/// One coefficient. Binary operations require both operands to come from
/// the same ring; mixing kinds is a programming error and panics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coeff {
    Int(BigInt),
    Rat(BigRational),
    Mod { value: u64, modulus: u64 },
    Poly(SymPoly),
}

impl Coeff {
    pub fn is_zero(&self) -> bool {
        match self {
            Coeff::Int(k) => k.is_zero(),
            Coeff::Rat(q) => q.is_zero(),
            Coeff::Mod { value, .. } => *value == 0,
            Coeff::Poly(p) => p.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Coeff::Int(k) => k.is_one(),
            Coeff::Rat(q) => q.is_one(),
            Coeff::Mod { value, .. } => *value == 1,
            Coeff::Poly(p) => p.as_constant().is_some_and(One::is_one),
        }
    }

    pub fn add(&self, other: &Coeff) -> Coeff {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &Coeff) {
        match (self, other) {
            (Coeff::Int(a), Coeff::Int(b)) => *a += b,
            (Coeff::Rat(a), Coeff::Rat(b)) => *a += b,
            (
                Coeff::Mod {
                    value: a,
                    modulus: m,
                },
                Coeff::Mod {
                    value: b,
                    modulus: m2,
                },
            ) => {
                debug_assert_eq!(m, m2);
                *a = ((*a as u128 + *b as u128) % *m as u128) as u64;
            }
            (Coeff::Poly(a), Coeff::Poly(b)) => a.add_assign(b),
            (a, b) => panic!("mixed coefficient kinds: {a:?} + {b:?}"),
        }
    }

    pub fn sub(&self, other: &Coeff) -> Coeff {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Coeff {
        match self {
            Coeff::Int(a) => Coeff::Int(-a),
            Coeff::Rat(a) => Coeff::Rat(-a),
            Coeff::Mod { value, modulus } => Coeff::Mod {
                value: if *value == 0 { 0 } else { modulus - value },
                modulus: *modulus,
            },
            Coeff::Poly(p) => Coeff::Poly(p.neg()),
        }
    }

    pub fn mul(&self, other: &Coeff) -> Coeff {
        match (self, other) {
            (Coeff::Int(a), Coeff::Int(b)) => Coeff::Int(a * b),
            (Coeff::Rat(a), Coeff::Rat(b)) => Coeff::Rat(a * b),
            (
                Coeff::Mod {
                    value: a,
                    modulus: m,
                },
                Coeff::Mod { value: b, .. },
            ) => Coeff::Mod {
                value: ((*a as u128 * *b as u128) % *m as u128) as u64,
                modulus: *m,
            },
            (Coeff::Poly(a), Coeff::Poly(b)) => Coeff::Poly(a.mul(b)),
            (a, b) => panic!("mixed coefficient kinds: {a:?} * {b:?}"),
        }
    }

    /// The integer value, for `Int` coefficients.
    pub fn as_bigint(&self) -> Option<&BigInt> {
        match self {
            Coeff::Int(k) => Some(k),
            _ => None,
        }
    }
}

type SymMono = SmallVec<[u16; 6]>;

/// A polynomial in numbered symbols with rational coefficients.
///
/// Exponent vectors are stored without trailing zeros, so the representation
/// does not depend on how many symbols the ambient ring declares.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SymPoly {
    terms: BTreeMap<SymMono, BigRational>,
}

impl SymPoly {
    pub fn zero() -> Self {
        SymPoly::default()
    }

    pub fn constant(q: BigRational) -> Self {
        let mut p = SymPoly::zero();
        if !q.is_zero() {
            p.terms.insert(SymMono::new(), q);
        }
        p
    }

    pub fn variable(idx: usize) -> Self {
        let mut m: SymMono = SmallVec::from_elem(0, idx + 1);
        m[idx] = 1;
        let mut p = SymPoly::zero();
        p.terms.insert(m, BigRational::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<&BigRational> {
        match self.terms.len() {
            0 => None,
            1 => self.terms.get(&SymMono::new()),
            _ => None,
        }
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(BigRational::is_integer)
    }

    fn max_symbol(&self) -> Option<usize> {
        self.terms
            .keys()
            .filter_map(|m| m.len().checked_sub(1))
            .max()
    }

    /// Coefficient of the monomial with the given exponents.
    pub fn coeff(&self, exps: &[u16]) -> BigRational {
        let mut m: SymMono = exps.iter().copied().collect();
        while m.last() == Some(&0) {
            m.pop();
        }
        self.terms
            .get(&m)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u16], &BigRational)> {
        self.terms.iter().map(|(m, c)| (m.as_slice(), c))
    }

    fn add_term(&mut self, m: SymMono, c: BigRational) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                if !c.is_zero() {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn add_assign(&mut self, other: &SymPoly) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    fn neg(&self) -> SymPoly {
        SymPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    fn mul(&self, other: &SymPoly) -> SymPoly {
        let mut out = SymPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let len = ma.len().max(mb.len());
                let m: SymMono = (0..len)
                    .map(|i| ma.get(i).copied().unwrap_or(0) + mb.get(i).copied().unwrap_or(0))
                    .collect();
                out.add_term(m, ca * cb);
            }
        }
        out
    }

    fn format(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        // Highest total degree first; within a degree, lexicographically largest first.
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| {
            let da: u32 = a.iter().map(|&e| e as u32).sum();
            let db: u32 = b.iter().map(|&e| e as u32).sum();
            db.cmp(&da).then_with(|| cmp_padded(b, a))
        });
        let mut out = String::new();
        for (i, (m, c)) in terms.into_iter().enumerate() {
            let mono: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(j, &e)| {
                    let name = names.get(j).cloned().unwrap_or_else(|| format!("s{j}"));
                    if e == 1 {
                        name
                    } else {
                        format!("{name}^{e}")
                    }
                })
                .collect();
            push_signed_term(&mut out, i == 0, c, &mono.join("*"));
        }
        out
    }
}

fn cmp_padded(a: &[u16], b: &[u16]) -> Ordering {
    let len = a.len().max(b.len());
    for i in 0..len {
        let (x, y) = (
            a.get(i).copied().unwrap_or(0),
            b.get(i).copied().unwrap_or(0),
        );
        match x.cmp(&y) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

/// Appends `± c*mono` in the usual `a - 3*b + c` style.
pub(crate) fn push_signed_term(out: &mut String, first: bool, c: &BigRational, mono: &str) {
    let neg = c.is_negative();
    let abs = c.abs();
    if first {
        if neg {
            out.push('-');
        }
    } else {
        out.push_str(if neg { " - " } else { " + " });
    }
    if mono.is_empty() {
        out.push_str(&abs.to_string());
    } else if abs.is_one() {
        out.push_str(mono);
    } else {
        out.push_str(&format!("{abs}*{mono}"));
    }
}

fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let e = (a as i128).extended_gcd(&(m as i128));
    (e.gcd == 1).then(|| e.x.rem_euclid(m as i128) as u64)
}

fn is_prime(m: u64) -> bool {
    m >= 2
        && (2..)
            .take_while(|d: &u64| d * d <= m)
            .all(|d| !m.is_multiple_of(d))
}
