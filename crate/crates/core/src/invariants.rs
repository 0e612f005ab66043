//! Weyl-invariant elements of the formal group algebra: orbit sums, the
//! Θ families, generator pools and the graded invariant slices.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{domain, parse, precondition, Result};
use crate::exponent::lattice::{left_kernel, IntegerMatrix};
use crate::fga::{FgaContext, FgaElement, SymmetricSlice};
use crate::rootsys::{DynkinType, RootSystem, Weight};
use crate::series::{monomials_of_degree, Coeff, CoeffRing, Monomial, TruncatedSeries};

/// Declared degree of `Θ_index` (1-based).
pub fn theta_degree(rs: &RootSystem, index: usize) -> Result<u32> {
    let n = rs.rank();
    let count = theta_count(rs);
    if index == 0 || index > count {
        return Err(domain(format!(
            "{} has Θ_1..Θ_{count}, not Θ_{index}",
            rs.label()
        )));
    }
    let d = index as u32;
    Ok(match rs.family() {
        DynkinType::A => d + 1,
        DynkinType::B | DynkinType::C => 2 * d,
        DynkinType::D if index == n => n as u32,
        DynkinType::D => 2 * d,
        DynkinType::G => [2, 6][index - 1],
    })
}

pub fn theta_count(rs: &RootSystem) -> usize {
    rs.rank()
}

/// `e_k(s_1, …, s_m)` for `k = 0..=m`.
fn elementary_symmetric(items: &[TruncatedSeries], one: TruncatedSeries) -> Vec<TruncatedSeries> {
    let zero = one.scale_int(0);
    let mut e = vec![one];
    e.resize(items.len() + 1, zero);
    for (j, s) in items.iter().enumerate() {
        for k in (1..=j + 1).rev() {
            let t = e[k - 1].mul(s).expect("same space");
            e[k] = e[k].add(&t).expect("same space");
        }
    }
    e
}

/// Builds `Θ_index` from the classes `x_{±e_j}` supplied by `class`
/// (`class(j, negative)`), for the families defined through the
/// `e`-realization.
fn theta_from_e(
    family: DynkinType,
    n: usize,
    index: usize,
    one: TruncatedSeries,
    class: impl Fn(usize, bool) -> TruncatedSeries,
) -> TruncatedSeries {
    match family {
        DynkinType::A => {
            let xs: Vec<_> = (0..=n).map(|j| class(j, false)).collect();
            elementary_symmetric(&xs, one).swap_remove(index + 1)
        }
        DynkinType::B | DynkinType::C => {
            let ys: Vec<_> = (0..n)
                .map(|j| class(j, false).mul(&class(j, true)).expect("same space"))
                .collect();
            elementary_symmetric(&ys, one).swap_remove(index)
        }
        DynkinType::D if index == n => (0..n).fold(one, |acc, j| {
            let diff = class(j, false).sub(&class(j, true)).expect("same space");
            acc.mul(&diff).expect("same space")
        }),
        DynkinType::D => {
            let ys: Vec<_> = (0..n)
                .map(|j| class(j, false).mul(&class(j, true)).expect("same space"))
                .collect();
            elementary_symmetric(&ys, one).swap_remove(index)
        }
        DynkinType::G => unreachable!("G2 is not built from the e-realization"),
    }
}

/// The element `Θ_index` (1-based) of the context's type.
pub fn theta(ctx: &Arc<FgaContext>, index: usize) -> Result<FgaElement> {
    let rs = ctx.root_system();
    theta_degree(rs, index)?;
    let one = ctx.one().into_series();
    let series = if rs.family() == DynkinType::G {
        let pairs: Vec<TruncatedSeries> = [vec![1, 0], vec![-1, 1], vec![-2, 1]]
            .into_iter()
            .map(|c| {
                let b = Weight(c);
                ctx.class_series(&b)
                    .mul(&ctx.class_series(&b.neg()))
                    .expect("same space")
            })
            .collect();
        if index == 1 {
            pairs
                .iter()
                .skip(1)
                .fold(pairs[0].clone(), |a, b| a.add(b).expect("same space"))
        } else {
            pairs.iter().fold(one, |a, b| a.mul(b).expect("same space"))
        }
    } else {
        theta_from_e(rs.family(), rs.rank(), index, one, |j, neg| {
            let w = rs.e_basis_weight(j).expect("e_j is a weight outside G2");
            ctx.class_series(&if neg { w.neg() } else { w })
        })
    };
    ctx.element(series)
}

/// `Θ_index` under the additive law written as a polynomial in the
/// `e`-coordinates (variables `e_1, …, e_m`), where the mod-`M` independence
/// of the products `Θ(α)` is stated.
pub fn theta_e_coordinates(rs: &RootSystem, index: usize, trunc: u32) -> Result<TruncatedSeries> {
    if rs.family() == DynkinType::G {
        return Err(domain("G2 has no e-coordinate Θ family"));
    }
    theta_degree(rs, index)?;
    let ring = CoeffRing::Integers;
    let m = rs.e_dim();
    let one = TruncatedSeries::one(&ring, m, trunc);
    Ok(theta_from_e(
        rs.family(),
        rs.rank(),
        index,
        one,
        |j, neg| {
            let v = TruncatedSeries::var(&ring, m, trunc, j);
            if neg {
                v.neg()
            } else {
                v
            }
        },
    ))
}

/// Exponent vectors `α` with `Σ α_i deg Θ_i = d`, in lexicographic order.
pub fn theta_exponents(degrees: &[u32], d: u32) -> Vec<Vec<u32>> {
    fn rec(degrees: &[u32], d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == degrees.len() {
            if d == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        let deg = degrees[prefix.len()];
        for a in (0..=d / deg).rev() {
            prefix.push(a);
            rec(degrees, d - a * deg, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(degrees, d, &mut Vec::new(), &mut out);
    out
}

/// `Θ(α) = ∏ Θ_i^{α_i}`.
pub fn theta_product(thetas: &[TruncatedSeries], alpha: &[u32]) -> TruncatedSeries {
    let t0 = &thetas[0];
    let one = TruncatedSeries::one(t0.ring(), t0.nvars(), t0.trunc());
    thetas
        .iter()
        .zip(alpha)
        .fold(one, |acc, (t, &a)| acc.mul(&t.pow(a)).expect("same space"))
}

/// The Weyl orbit of a multiset of weights, each member sorted.
fn multiset_orbit(rs: &RootSystem, start: Vec<Weight>) -> Vec<Vec<Weight>> {
    let mut start = start;
    start.sort();
    let mut seen: HashSet<Vec<Weight>> = HashSet::new();
    seen.insert(start.clone());
    let mut out = vec![start];
    let mut head = 0;
    while head < out.len() {
        let cur = out[head].clone();
        head += 1;
        for i in 0..rs.rank() {
            let mut next: Vec<Weight> = cur.iter().map(|w| rs.reflect(i, w)).collect();
            next.sort();
            if seen.insert(next.clone()) {
                out.push(next);
            }
        }
    }
    out
}

/// `ρ(x_{η_1}⋯x_{η_s})`: the sum of `x_{λ_1}⋯x_{λ_s}` over the distinct
/// members `{λ_1, …, λ_s}` of the Weyl orbit of the multiset `{η_i}`.
pub fn orbit_sum(ctx: &Arc<FgaContext>, weights: &[Weight]) -> Result<FgaElement> {
    if weights.is_empty() {
        return Err(precondition("an orbit sum needs at least one weight"));
    }
    let rs = ctx.root_system();
    if let Some(w) = weights.iter().find(|w| w.rank() != rs.rank()) {
        return Err(domain(format!(
            "weight {w} has the wrong rank for {}",
            rs.label()
        )));
    }
    let mut acc = ctx.zero().into_series();
    for member in multiset_orbit(rs, weights.to_vec()) {
        let prod = member.iter().fold(ctx.one().into_series(), |p, w| {
            p.mul(&ctx.class_series(w)).expect("same space")
        });
        acc = acc.add(&prod)?;
    }
    ctx.element(acc)
}

/// Which invariants feed the graded slices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PoolPolicy {
    /// The Θ family.
    ThetaOnly,
    /// Orbit sums of products of pool weights.
    OrbitSums,
    /// Θ family and orbit sums.
    Combined,
    /// A ℤ-basis of `S^k(Λ)^W` for every `k ≤ d`; additive law only.
    Invariants,
}

impl PoolPolicy {
    pub fn name(self) -> &'static str {
        match self {
            PoolPolicy::ThetaOnly => "theta_only",
            PoolPolicy::OrbitSums => "orbit_sums",
            PoolPolicy::Combined => "combined",
            PoolPolicy::Invariants => "invariants",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "theta_only" | "theta" => Ok(PoolPolicy::ThetaOnly),
            "orbit_sums" | "orbits" => Ok(PoolPolicy::OrbitSums),
            "combined" => Ok(PoolPolicy::Combined),
            "invariants" => Ok(PoolPolicy::Invariants),
            other => Err(parse(format!("unknown pool policy {other:?}"))),
        }
    }

    fn uses_theta(self) -> bool {
        matches!(self, PoolPolicy::ThetaOnly | PoolPolicy::Combined)
    }

    fn uses_orbits(self) -> bool {
        matches!(self, PoolPolicy::OrbitSums | PoolPolicy::Combined)
    }
}

impl fmt::Display for PoolPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Seeds for orbit sums. The seeds are closed under the Weyl group before
/// use; products have length at most `max_length` (default: the degree).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorPool {
    pub weights: Vec<Weight>,
    pub policy: PoolPolicy,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_length: Option<usize>,
}

impl GeneratorPool {
    /// Weyl orbits of all fundamental weights.
    pub fn default_for(rs: &RootSystem, policy: PoolPolicy) -> Self {
        let n = rs.rank();
        GeneratorPool {
            weights: (0..n).map(|i| Weight::fundamental(n, i)).collect(),
            policy,
            max_length: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| parse(format!("pool document: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("pool serializes")
    }

    pub fn validate(&self, rs: &RootSystem) -> Result<()> {
        for w in &self.weights {
            if w.rank() != rs.rank() {
                return Err(domain(format!(
                    "pool weight {w} has the wrong rank for {}",
                    rs.label()
                )));
            }
            if w.is_zero() {
                return Err(domain("pool weights must be nonzero"));
            }
        }
        Ok(())
    }

    /// The W-closure of the seeds, sorted.
    pub fn closed_weights(&self, rs: &RootSystem) -> Vec<Weight> {
        let mut all: Vec<Weight> = self
            .weights
            .iter()
            .flat_map(|w| rs.weyl_orbit(w))
            .collect::<HashSet<_>>()
            .into_iter()
            .collect();
        all.sort();
        all
    }
}

/// One invariant together with a description of where it came from.
#[derive(Clone, Debug)]
pub struct InvariantGenerator {
    pub element: FgaElement,
    pub description: String,
}

#[derive(Clone, Debug)]
pub struct GeneratorSet {
    pub policy: PoolPolicy,
    pub generators: Vec<InvariantGenerator>,
}

/// All orbit sums of products of at most `max_s` pool weights whose
/// valuation is at most `d`, ordered by product length and then by the least
/// member of the orbit.
fn pool_orbit_sums(
    ctx: &Arc<FgaContext>,
    pool: &[Weight],
    max_s: usize,
    d: u32,
) -> Vec<InvariantGenerator> {
    let rs = ctx.root_system();
    if pool.is_empty() || max_s == 0 {
        return Vec::new();
    }
    let index: HashMap<&Weight, u16> = pool
        .iter()
        .enumerate()
        .map(|(i, w)| (w, i as u16))
        .collect();
    let perm: Vec<Vec<u16>> = (0..rs.rank())
        .map(|i| pool.iter().map(|w| index[&rs.reflect(i, w)]).collect())
        .collect();
    let classes: Vec<TruncatedSeries> = pool.iter().map(|w| ctx.class_series(w)).collect();

    let mut orbit_of: HashMap<Vec<u16>, usize> = HashMap::new();
    let mut reps: Vec<Vec<u16>> = Vec::new();
    let mut sums: Vec<TruncatedSeries> = Vec::new();
    let zero = ctx.zero().into_series();

    struct Walk<'a> {
        perm: &'a [Vec<u16>],
        classes: &'a [TruncatedSeries],
        orbit_of: &'a mut HashMap<Vec<u16>, usize>,
        reps: &'a mut Vec<Vec<u16>>,
        sums: &'a mut Vec<TruncatedSeries>,
        zero: &'a TruncatedSeries,
        max_s: usize,
    }

    impl Walk<'_> {
        fn visit(&mut self, ms: &mut Vec<u16>, prod: &TruncatedSeries) {
            let id = match self.orbit_of.get(ms.as_slice()) {
                Some(&id) => id,
                None => {
                    let id = self.reps.len();
                    let mut queue = vec![ms.clone()];
                    self.orbit_of.insert(ms.clone(), id);
                    let mut least = ms.clone();
                    while let Some(cur) = queue.pop() {
                        for p in self.perm {
                            let mut next: Vec<u16> = cur.iter().map(|&k| p[k as usize]).collect();
                            next.sort_unstable();
                            if !self.orbit_of.contains_key(&next) {
                                self.orbit_of.insert(next.clone(), id);
                                if next < least {
                                    least = next.clone();
                                }
                                queue.push(next);
                            }
                        }
                    }
                    self.reps.push(least);
                    self.sums.push(self.zero.clone());
                    id
                }
            };
            self.sums[id] = self.sums[id].add(prod).expect("same space");
            if ms.len() == self.max_s {
                return;
            }
            let start = *ms.last().unwrap();
            for k in start..self.classes.len() as u16 {
                let next = prod.mul(&self.classes[k as usize]).expect("same space");
                if next.is_zero() {
                    continue;
                }
                ms.push(k);
                self.visit(ms, &next);
                ms.pop();
            }
        }
    }

    let mut walk = Walk {
        perm: &perm,
        classes: &classes,
        orbit_of: &mut orbit_of,
        reps: &mut reps,
        sums: &mut sums,
        zero: &zero,
        max_s,
    };
    for k in 0..classes.len() as u16 {
        let mut ms = vec![k];
        walk.visit(&mut ms, &classes[k as usize]);
    }

    let mut order: Vec<usize> = (0..reps.len()).collect();
    order.sort_by(|&a, &b| (reps[a].len(), &reps[a]).cmp(&(reps[b].len(), &reps[b])));
    order
        .into_iter()
        .filter(|&id| sums[id].valuation().is_some_and(|v| v <= d))
        .map(|id| {
            let names: Vec<String> = reps[id]
                .iter()
                .map(|&k| pool[k as usize].to_string())
                .collect();
            InvariantGenerator {
                element: ctx.element(sums[id].clone()).expect("context series"),
                description: format!("rho[{}]", names.join(" ")),
            }
        })
        .collect()
}

/// Integer matrix of `s_i` on `S^k(Λ)` in the monomial basis; row `r` holds
/// the coordinates of `s_i(m_r)`.
fn symmetric_power_action(ctx: &Arc<FgaContext>, i: usize, k: u32) -> Result<IntegerMatrix> {
    let n = ctx.rank();
    let basis = monomials_of_degree(n, k);
    let pos: HashMap<Monomial, usize> = basis
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, m)| (m, i))
        .collect();
    let mut rows = Vec::with_capacity(basis.len());
    for m in &basis {
        let s = TruncatedSeries::from_terms(
            ctx.ring(),
            n,
            ctx.trunc(),
            [(m.exps(), ctx.ring().one())],
        )?;
        let img = ctx.element(s)?.weyl_act(&[i + 1])?;
        let mut row = vec![BigInt::from(0); basis.len()];
        for (mono, c) in img.series().terms() {
            row[pos[mono]] = crate::series::int_coeff(c)?;
        }
        rows.push(row);
    }
    Ok(IntegerMatrix::from_rows(basis.len(), rows))
}

/// A ℤ-basis of `S^k(Λ)^W`, as homogeneous series. Needs the additive law
/// over the integers.
pub fn invariant_basis(ctx: &Arc<FgaContext>, k: u32) -> Result<Vec<FgaElement>> {
    if !ctx.fgl().is_additive() || *ctx.ring() != CoeffRing::Integers {
        return Err(precondition(
            "an exact invariant basis is only available for the additive law over Z",
        ));
    }
    if k > ctx.trunc() {
        return Err(precondition(format!(
            "degree {k} exceeds the truncation degree"
        )));
    }
    let n = ctx.rank();
    let dim = monomials_of_degree(n, k).len();
    let mut blocks = vec![Vec::new(); dim];
    for i in 0..n {
        let m = symmetric_power_action(ctx, i, k)?;
        for (r, block) in blocks.iter_mut().enumerate() {
            for c in 0..dim {
                let mut v = m.get(r, c).clone();
                if r == c {
                    v -= 1;
                }
                block.push(v);
            }
        }
    }
    let kernel = left_kernel(&IntegerMatrix::from_rows(dim * n, blocks));
    let ring = ctx.ring();
    kernel
        .rows()
        .map(|row| {
            let coeffs = row
                .iter()
                .map(|c| ring.from_bigint(c.clone()))
                .collect::<Vec<Coeff>>();
            let s = TruncatedSeries::from_terms(
                ring,
                n,
                ctx.trunc(),
                monomials_of_degree(n, k)
                    .into_iter()
                    .map(|m| m.exps())
                    .zip(coeffs),
            )?;
            ctx.element(s)
        })
        .collect()
}

/// The invariants selected by `pool` that can contribute to degree `d`.
pub fn invariant_generators(
    ctx: &Arc<FgaContext>,
    pool: &GeneratorPool,
    d: u32,
) -> Result<GeneratorSet> {
    if d > ctx.trunc() {
        return Err(precondition(format!(
            "degree {d} exceeds the truncation degree {}",
            ctx.trunc()
        )));
    }
    let rs = ctx.root_system();
    pool.validate(rs)?;
    let mut generators = Vec::new();
    if pool.policy == PoolPolicy::Invariants {
        for k in 1..=d {
            for (j, f) in invariant_basis(ctx, k)?.into_iter().enumerate() {
                generators.push(InvariantGenerator {
                    element: f,
                    description: format!("inv[{k}.{j}]"),
                });
            }
        }
    }
    if pool.policy.uses_theta() {
        for i in 1..=theta_count(rs) {
            if theta_degree(rs, i)? <= d {
                generators.push(InvariantGenerator {
                    element: theta(ctx, i)?,
                    description: format!("theta{i}"),
                });
            }
        }
    }
    if pool.policy.uses_orbits() {
        let max_s = pool.max_length.unwrap_or(d as usize).min(d as usize);
        let closed = pool.closed_weights(rs);
        generators.extend(pool_orbit_sums(ctx, &closed, max_s, d));
    }
    Ok(GeneratorSet {
        policy: pool.policy,
        generators,
    })
}

/// Whether the rows are known to generate all of `(I_F^W)^{(d)}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SliceExactness {
    Exact,
    Subgroup,
}

/// Exactness of the slices produced by `policy` over `ring`.
pub fn slice_exactness(
    rs: &RootSystem,
    additive: bool,
    two_invertible: bool,
    policy: PoolPolicy,
) -> SliceExactness {
    let exact = match policy {
        PoolPolicy::Invariants => additive,
        p if p.uses_theta() => {
            matches!(rs.family(), DynkinType::A | DynkinType::C) || two_invertible
        }
        _ => false,
    };
    if exact {
        SliceExactness::Exact
    } else {
        SliceExactness::Subgroup
    }
}

/// Leading forms in `S^d(Λ)` of the products `m·f` for every generator `f`
/// of valuation `k ≤ d` and every monomial `m` of degree `d - k`.
#[derive(Clone, Debug)]
pub struct GradedSliceMatrix {
    pub degree: u32,
    pub nvars: usize,
    pub rows: Vec<SymmetricSlice>,
    pub provenance: Vec<String>,
    pub exactness: SliceExactness,
}

impl GradedSliceMatrix {
    pub fn ncols(&self) -> usize {
        monomials_of_degree(self.nvars, self.degree).len()
    }

    /// Rows as integer vectors; fails for non-integer coefficients.
    pub fn integer_rows(&self) -> Result<Vec<Vec<BigInt>>> {
        self.rows.iter().map(SymmetricSlice::to_integers).collect()
    }
}

pub fn graded_invariant_matrix(
    ctx: &Arc<FgaContext>,
    gens: &GeneratorSet,
    d: u32,
) -> Result<GradedSliceMatrix> {
    if d > ctx.trunc() {
        return Err(precondition(format!(
            "degree {d} exceeds the truncation degree {}",
            ctx.trunc()
        )));
    }
    let n = ctx.rank();
    let ring = ctx.ring();
    let basis = monomials_of_degree(n, d);
    let pos: HashMap<Monomial, usize> = basis
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, m)| (m, i))
        .collect();
    let mut rows = Vec::new();
    let mut provenance = Vec::new();
    let mut seen: HashSet<Vec<String>> = HashSet::new();
    for g in &gens.generators {
        let Some(k) = g.element.valuation() else {
            continue;
        };
        if k > d {
            continue;
        }
        let lead = g.element.series().homogeneous_part(k);
        for m in monomials_of_degree(n, d - k) {
            let mut coeffs = vec![ring.zero(); basis.len()];
            for (t, c) in lead.terms() {
                coeffs[pos[&t.mul(&m)]] = c.clone();
            }
            if coeffs.iter().all(Coeff::is_zero)
                || !seen.insert(coeffs.iter().map(|c| ring.format(c)).collect())
            {
                continue;
            }
            let names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
            provenance.push(if m.degree() == 0 {
                g.description.clone()
            } else {
                format!("{}*{}", m.render(&names), g.description)
            });
            let s = TruncatedSeries::from_terms(
                ring,
                n,
                d,
                basis.iter().map(|b| b.exps()).zip(coeffs),
            )?;
            rows.push(SymmetricSlice::from_series(&s, d));
        }
    }
    let exactness = slice_exactness(
        ctx.root_system(),
        ctx.fgl().is_additive(),
        ring.int_is_unit(2),
        gens.policy,
    );
    Ok(GradedSliceMatrix {
        degree: d,
        nvars: n,
        rows,
        provenance,
        exactness,
    })
}
