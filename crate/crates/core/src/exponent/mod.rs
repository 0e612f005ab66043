//! Lattice engine and the exponents between formal group laws.
//!
//! For laws `F`, `F'` the graded invariant slices `L = (I_F^W)^{(d)}` and
//! `L' = (I_{F'}^W)^{(d)}` live in the same `S^d(Λ)`, because the
//! deformation map is the identity on fundamental-weight monomials. The
//! exponent is the least `N` with `N·L' ⊆ L`. The admissible `N` form the
//! ideal of multiples of the exponent of the finite group `(L + L')/L`, which
//! is the lcm of the orders of the generators of `L'`; so "least" and "gcd of
//! all admissible `N`" agree.

pub mod lattice;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub use lattice::{
    hnf, left_kernel, order_mod_lattice, rank_mod_p, snf, EchelonLattice, Hnf, IntegerMatrix, Snf,
};

use crate::error::{domain, parse, precondition, Error, Result};
use crate::fga::FgaContext;
use crate::fgl::FormalGroupLaw;
use crate::invariants::{
    graded_invariant_matrix, invariant_generators, slice_exactness, GeneratorPool,
    GradedSliceMatrix, PoolPolicy, SliceExactness,
};
use crate::rootsys::{DynkinType, RootSystem};
use crate::series::{monomials_of_degree, CoeffRing};

/// How far a computed exponent can be trusted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Exactness {
    /// Both slices are generated completely.
    Exact,
    /// Only the source slice may be too small, so the value is a multiple of
    /// the true exponent.
    MultipleOfTrueTau,
    /// The target slice may be too small; the value is not certified.
    GeneratorLimited,
}

impl Exactness {
    pub fn name(self) -> &'static str {
        match self {
            Exactness::Exact => "EXACT",
            Exactness::MultipleOfTrueTau => "MULTIPLE_OF_TRUE_TAU",
            Exactness::GeneratorLimited => "GENERATOR_LIMITED",
        }
    }
}

impl fmt::Display for Exactness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn to_u64(x: &BigInt, what: &str) -> Result<u64> {
    x.to_u64()
        .ok_or_else(|| domain(format!("{what} {x} does not fit in 64 bits")))
}

/// Result of an exponent computation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentReport {
    #[serde(rename = "type")]
    pub root_type: String,
    pub d: u32,
    pub fgl_from: String,
    pub fgl_to: String,
    pub tau: u64,
    pub exactness: Exactness,
    /// Nontrivial invariant factors of `(L + L')/L`.
    pub elementary_divisors: Vec<u64>,
    pub policy_from: PoolPolicy,
    pub policy_to: PoolPolicy,
    pub generators_from: usize,
    pub generators_to: usize,
    pub rank_from: usize,
    pub rank_to: usize,
}

/// Pools for the two sides; `None` picks the default for the law and type.
#[derive(Clone, Debug, Default)]
pub struct TauOptions {
    pub pool_from: Option<GeneratorPool>,
    pub pool_to: Option<GeneratorPool>,
}

/// The default policy: an exact invariant basis for the additive law, the Θ
/// family for types A and C, and Θ plus orbit sums otherwise.
pub fn default_policy(rs: &RootSystem, fgl: &FormalGroupLaw) -> PoolPolicy {
    if fgl.is_additive() {
        PoolPolicy::Invariants
    } else if matches!(rs.family(), DynkinType::A | DynkinType::C) {
        PoolPolicy::ThetaOnly
    } else {
        PoolPolicy::Combined
    }
}

/// The graded invariant slice of degree `d` for `fgl`, truncated at `d`.
pub fn invariant_slice(
    rs: &Arc<RootSystem>,
    fgl: &FormalGroupLaw,
    d: u32,
    pool: Option<&GeneratorPool>,
) -> Result<(GradedSliceMatrix, usize)> {
    let ctx = FgaContext::new(Arc::clone(rs), Arc::new(fgl.clone()), d)?;
    let pool = pool
        .cloned()
        .unwrap_or_else(|| GeneratorPool::default_for(rs, default_policy(rs, fgl)));
    let gens = invariant_generators(&ctx, &pool, d)?;
    let m = graded_invariant_matrix(&ctx, &gens, d)?;
    Ok((m, gens.generators.len()))
}

/// `τ` and the invariant factors of `(L + L')/L` for explicit row sets.
pub fn lattice_exponent(
    cols: usize,
    l: &[Vec<BigInt>],
    l_prime: &[Vec<BigInt>],
    d: u32,
) -> Result<(BigInt, Vec<BigInt>)> {
    let lat = EchelonLattice::from_rows(cols, l.iter().map(Vec::as_slice));
    let mut tau = BigInt::one();
    for v in l_prime {
        match lat.order_of(v) {
            Some(k) => tau = tau.lcm(&k),
            None => {
                return Err(Error::SpanMismatch {
                    degree: d,
                    detail: "a target invariant has no multiple in the source slice".into(),
                })
            }
        }
    }
    let mut sum = lat.clone();
    for v in l_prime {
        sum.insert(v.clone());
    }
    let coords: Vec<Vec<BigInt>> = lat
        .basis_rows()
        .iter()
        .map(|r| sum.coordinates(r).expect("L lies in L + L'"))
        .collect();
    let divisors = if coords.is_empty() {
        Vec::new()
    } else {
        snf(&IntegerMatrix::from_rows(sum.rank(), coords))
            .invariant_factors()
            .into_iter()
            .filter(|x| !x.is_one())
            .collect()
    };
    Ok((tau, divisors))
}

/// The `d`-th exponent from `from` to `to` on the root system `rs`.
pub fn tau(
    rs: &Arc<RootSystem>,
    from: &FormalGroupLaw,
    to: &FormalGroupLaw,
    d: u32,
    options: &TauOptions,
) -> Result<ExponentReport> {
    if d == 0 {
        return Err(precondition("the exponent is defined for d >= 1"));
    }
    for f in [from, to] {
        if *f.ring() != CoeffRing::Integers {
            return Err(domain(format!(
                "exponents are computed over Z, law {} is over {}",
                f.name(),
                f.ring()
            )));
        }
    }
    let (l, gens_from) = invariant_slice(rs, from, d, options.pool_from.as_ref())?;
    let (lp, gens_to) = invariant_slice(rs, to, d, options.pool_to.as_ref())?;
    let cols = monomials_of_degree(rs.rank(), d).len();
    let (t, divisors) = lattice_exponent(cols, &l.integer_rows()?, &lp.integer_rows()?, d)?;
    let exactness = match (l.exactness, lp.exactness) {
        (SliceExactness::Exact, SliceExactness::Exact) => Exactness::Exact,
        (_, SliceExactness::Exact) => Exactness::MultipleOfTrueTau,
        _ => Exactness::GeneratorLimited,
    };
    let rank_of = |m: &GradedSliceMatrix| -> Result<usize> {
        let rows = m.integer_rows()?;
        Ok(EchelonLattice::from_rows(cols, rows.iter().map(Vec::as_slice)).rank())
    };
    Ok(ExponentReport {
        root_type: rs.label(),
        d,
        fgl_from: from.name().to_string(),
        fgl_to: to.name().to_string(),
        tau: to_u64(&t, "exponent")?,
        exactness,
        elementary_divisors: divisors
            .iter()
            .map(|x| to_u64(x, "elementary divisor"))
            .collect::<Result<_>>()?,
        policy_from: options
            .pool_from
            .as_ref()
            .map_or_else(|| default_policy(rs, from), |p| p.policy),
        policy_to: options
            .pool_to
            .as_ref()
            .map_or_else(|| default_policy(rs, to), |p| p.policy),
        generators_from: gens_from,
        generators_to: gens_to,
        rank_from: rank_of(&l)?,
        rank_to: rank_of(&lp)?,
    })
}

/// Scalars for the flag-model diagnostics: `ℤ`, `ℚ`, or `ℤ` with some
/// primes inverted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub enum ScalarRing {
    #[default]
    Integers,
    Rationals,
    Localized(Vec<u64>),
}

impl ScalarRing {
    pub fn inverts(&self, p: u64) -> bool {
        match self {
            ScalarRing::Integers => false,
            ScalarRing::Rationals => true,
            ScalarRing::Localized(ps) => ps.contains(&p),
        }
    }

    /// Removes the invertible primes from `x`.
    fn strip(&self, x: &BigInt) -> BigInt {
        match self {
            ScalarRing::Integers => x.clone(),
            ScalarRing::Rationals => BigInt::one(),
            ScalarRing::Localized(ps) => {
                let mut x = x.clone();
                for &p in ps {
                    let p = BigInt::from(p);
                    while !x.is_zero() && x.is_multiple_of(&p) {
                        x /= &p;
                    }
                }
                x
            }
        }
    }
}

fn is_prime(p: u64) -> bool {
    p >= 2
        && (2..)
            .take_while(|k| k * k <= p)
            .all(|k| !p.is_multiple_of(k))
}

impl FromStr for ScalarRing {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        match t.as_str() {
            "Z" => return Ok(ScalarRing::Integers),
            "Q" => return Ok(ScalarRing::Rationals),
            _ => {}
        }
        let inner = t
            .strip_prefix("Z[")
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| {
                parse(format!(
                    "unsupported scalar ring {s:?}; use Z, Q or Z[1/p,...]"
                ))
            })?;
        let mut primes = Vec::new();
        for part in inner.split(',') {
            let p: u64 = part
                .strip_prefix("1/")
                .and_then(|q| q.parse().ok())
                .ok_or_else(|| parse(format!("bad localization {part:?} in {s:?}")))?;
            if !is_prime(p) {
                return Err(parse(format!("{p} is not a prime")));
            }
            primes.push(p);
        }
        primes.sort_unstable();
        primes.dedup();
        Ok(ScalarRing::Localized(primes))
    }
}

impl fmt::Display for ScalarRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarRing::Integers => f.write_str("Z"),
            ScalarRing::Rationals => f.write_str("Q"),
            ScalarRing::Localized(ps) => {
                let parts: Vec<String> = ps.iter().map(|p| format!("1/{p}")).collect();
                write!(f, "Z[{}]", parts.join(","))
            }
        }
    }
}

/// Structure of `S^d(Λ)/(I_F^W)^{(d)}` over the chosen scalars.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlagSliceReport {
    #[serde(rename = "type")]
    pub root_type: String,
    pub fgl: String,
    pub ring: String,
    pub d: u32,
    pub dim: usize,
    pub rank: usize,
    pub relations: usize,
    pub expected_rank: u64,
    /// Invariant factors of the quotient that are not units in the ring.
    pub torsion: Vec<u64>,
    pub rank_matches: bool,
    /// Whether the torsion primes of the type are inverted, the case in
    /// which the quotient is known to be torsion free.
    pub torsion_free_expected: bool,
    pub exactness: SliceExactness,
}

impl FlagSliceReport {
    pub fn torsion_free(&self) -> bool {
        self.torsion.is_empty()
    }
}

/// Rank and torsion of `S^d(Λ)/(I_F^W)^{(d)}`, compared with the number of
/// Weyl group elements of length `d`.
pub fn flag_diagnostics(
    rs: &Arc<RootSystem>,
    fgl: &FormalGroupLaw,
    d: u32,
    ring: &ScalarRing,
    pool: Option<&GeneratorPool>,
) -> Result<FlagSliceReport> {
    if *fgl.ring() != CoeffRing::Integers {
        return Err(domain("flag diagnostics need a law defined over Z"));
    }
    let dim = monomials_of_degree(rs.rank(), d).len();
    let expected_rank = rs.enumerate_by_length(d as usize)[d as usize];
    let torsion_free_expected = rs.torsion_primes().iter().all(|&p| ring.inverts(p));
    if d == 0 {
        return Ok(FlagSliceReport {
            root_type: rs.label(),
            fgl: fgl.name().to_string(),
            ring: ring.to_string(),
            d,
            dim,
            rank: dim,
            relations: 0,
            expected_rank,
            torsion: Vec::new(),
            rank_matches: dim as u64 == expected_rank,
            torsion_free_expected,
            exactness: SliceExactness::Exact,
        });
    }
    let (m, _) = invariant_slice(rs, fgl, d, pool)?;
    let rows = m.integer_rows()?;
    let lat = EchelonLattice::from_rows(dim, rows.iter().map(Vec::as_slice));
    let factors = if lat.rank() == 0 {
        Vec::new()
    } else {
        snf(&lat.basis()).invariant_factors()
    };
    let relations = factors.len();
    let rank = dim - relations;
    let mut torsion = Vec::new();
    for f in &factors {
        let s = ring.strip(f);
        if !s.is_one() {
            torsion.push(to_u64(&s, "torsion coefficient")?);
        }
    }
    let policy = pool.map_or_else(|| default_policy(rs, fgl), |p| p.policy);
    let exactness = slice_exactness(rs, fgl.is_additive(), ring.inverts(2), policy);
    Ok(FlagSliceReport {
        root_type: rs.label(),
        fgl: fgl.name().to_string(),
        ring: ring.to_string(),
        d,
        dim,
        rank,
        relations,
        expected_rank,
        torsion,
        rank_matches: rank as u64 == expected_rank,
        torsion_free_expected,
        exactness,
    })
}

/// Torsion bounds for the flag model in degree `d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnihilatorBound {
    pub d: u32,
    /// Annihilates the torsion of the source theory: `τ^{F→F'} τ'`.
    pub forward: u64,
    /// The same with the roles exchanged: `τ^{F'→F} τ'`.
    pub backward: u64,
}

/// Combines the two exponents with the reference kernel exponent `τ'`.
pub fn annihilator_bound(
    fwd: &ExponentReport,
    bwd: &ExponentReport,
    reference: u64,
) -> Result<AnnihilatorBound> {
    if fwd.d != bwd.d
        || fwd.root_type != bwd.root_type
        || fwd.fgl_from != bwd.fgl_to
        || fwd.fgl_to != bwd.fgl_from
    {
        return Err(precondition(
            "the two reports must be opposite exponents of one slice",
        ));
    }
    if reference == 0 {
        return Err(precondition("the reference exponent must be positive"));
    }
    if fwd.d == 1 {
        return Ok(AnnihilatorBound {
            d: 1,
            forward: 1,
            backward: 1,
        });
    }
    let mul = |a: u64| {
        a.checked_mul(reference)
            .ok_or_else(|| domain("annihilator bound overflows 64 bits"))
    };
    Ok(AnnihilatorBound {
        d: fwd.d,
        forward: mul(fwd.tau)?,
        backward: mul(bwd.tau)?,
    })
}
