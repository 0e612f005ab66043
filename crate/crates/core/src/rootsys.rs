//! Root systems of types A, B, C, D and G2 with their Weyl groups.
//!
//! Weights are integer vectors in the basis of fundamental weights. The
//! simple reflection `s_i` acts by `λ ↦ λ - λ_i α_i`, where `α_i` written in
//! fundamental weights is row `i` of the Cartan matrix.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{domain, parse, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DynkinType {
    A,
    B,
    C,
    D,
    G,
}

impl DynkinType {
    fn letter(self) -> char {
        match self {
            DynkinType::A => 'A',
            DynkinType::B => 'B',
            DynkinType::C => 'C',
            DynkinType::D => 'D',
            DynkinType::G => 'G',
        }
    }
}

/// A Dynkin label such as `B3` or `G2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CartanType {
    pub family: DynkinType,
    pub rank: usize,
}

impl CartanType {
    pub fn new(family: DynkinType, rank: usize) -> Result<Self> {
        let min = match family {
            DynkinType::A => 1,
            DynkinType::B => 3,
            DynkinType::C => 2,
            DynkinType::D => 4,
            DynkinType::G => 2,
        };
        let ok = match family {
            DynkinType::G => rank == 2,
            _ => rank >= min,
        };
        if !ok {
            return Err(domain(format!(
                "unsupported root system {}{}",
                family.letter(),
                rank
            )));
        }
        Ok(CartanType { family, rank })
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.letter(), self.rank)
    }
}

impl FromStr for CartanType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars();
        let family = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => DynkinType::A,
            Some('B') => DynkinType::B,
            Some('C') => DynkinType::C,
            Some('D') => DynkinType::D,
            Some('G') => DynkinType::G,
            _ => return Err(parse(format!("unknown type label {s:?}"))),
        };
        let rank: usize = chars
            .as_str()
            .parse()
            .map_err(|_| parse(format!("bad rank in type label {s:?}")))?;
        CartanType::new(family, rank)
    }
}

impl Serialize for CartanType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CartanType {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// An integral weight in fundamental-weight coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    pub fn zero(n: usize) -> Self {
        Weight(vec![0; n])
    }

    pub fn fundamental(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        Weight(v)
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> Weight {
        Weight(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, k: i64) -> Weight {
        Weight(self.0.iter().map(|a| k * a).collect())
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Static data of a root system: Cartan matrix, the ambient `e`-realization
/// and the primes dividing the torsion index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSystem {
    cartan_type: CartanType,
    cartan: Vec<Vec<i64>>,
    simple_roots_e: Vec<Vec<Rational64>>,
    omega_e: Vec<Vec<Rational64>>,
    e_dim: usize,
    torsion_primes: Vec<u64>,
}

fn r(n: i64) -> Rational64 {
    Rational64::from_integer(n)
}

fn half() -> Rational64 {
    Rational64::new(1, 2)
}

fn unit(dim: usize, i: usize) -> Vec<Rational64> {
    let mut v = vec![Rational64::zero(); dim];
    v[i] = Rational64::one();
    v
}

fn diff(dim: usize, i: usize, j: usize) -> Vec<Rational64> {
    let mut v = unit(dim, i);
    v[j] -= Rational64::one();
    v
}

fn prefix_sum(dim: usize, k: usize) -> Vec<Rational64> {
    (0..dim).map(|j| if j < k { r(1) } else { r(0) }).collect()
}

fn dot(a: &[Rational64], b: &[Rational64]) -> Rational64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl RootSystem {
    pub fn build(cartan_type: CartanType) -> Self {
        let n = cartan_type.rank;
        let (e_dim, roots, omegas, torsion_primes): (usize, Vec<_>, Vec<_>, Vec<u64>) =
            match cartan_type.family {
                DynkinType::A => {
                    let dim = n + 1;
                    let roots = (0..n).map(|i| diff(dim, i, i + 1)).collect();
                    let omegas = (1..=n).map(|k| prefix_sum(dim, k)).collect();
                    (dim, roots, omegas, vec![])
                }
                DynkinType::B => {
                    let mut roots: Vec<_> = (0..n - 1).map(|i| diff(n, i, i + 1)).collect();
                    roots.push(unit(n, n - 1));
                    let mut omegas: Vec<_> = (1..n).map(|k| prefix_sum(n, k)).collect();
                    omegas.push(vec![half(); n]);
                    (n, roots, omegas, vec![2])
                }
                DynkinType::C => {
                    let mut roots: Vec<_> = (0..n - 1).map(|i| diff(n, i, i + 1)).collect();
                    let mut last = unit(n, n - 1);
                    last[n - 1] = r(2);
                    roots.push(last);
                    let omegas = (1..=n).map(|k| prefix_sum(n, k)).collect();
                    (n, roots, omegas, vec![])
                }
                DynkinType::D => {
                    let mut roots: Vec<_> = (0..n - 1).map(|i| diff(n, i, i + 1)).collect();
                    let mut last = unit(n, n - 1);
                    last[n - 2] = r(1);
                    roots.push(last);
                    let mut omegas: Vec<_> = (1..n - 1).map(|k| prefix_sum(n, k)).collect();
                    let mut spin_minus = vec![half(); n];
                    spin_minus[n - 1] = -half();
                    omegas.push(spin_minus);
                    omegas.push(vec![half(); n]);
                    (n, roots, omegas, vec![2])
                }
                DynkinType::G => {
                    let roots = vec![vec![r(-1), r(1), r(0)], vec![r(1), r(-2), r(1)]];
                    let omegas = vec![vec![r(-1), r(0), r(1)], vec![r(-1), r(-1), r(2)]];
                    (3, roots, omegas, vec![2])
                }
            };
        let cartan = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let c = r(2) * dot(&roots[i], &roots[j]) / dot(&roots[j], &roots[j]);
                        debug_assert!(c.is_integer());
                        c.to_integer()
                    })
                    .collect()
            })
            .collect();
        RootSystem {
            cartan_type,
            cartan,
            simple_roots_e: roots,
            omega_e: omegas,
            e_dim,
            torsion_primes,
        }
    }

    /// Parses a label like `"B3"` and builds the root system.
    pub fn from_label(label: &str) -> Result<Self> {
        Ok(Self::build(label.parse()?))
    }

    pub fn cartan_type(&self) -> CartanType {
        self.cartan_type
    }

    pub fn family(&self) -> DynkinType {
        self.cartan_type.family
    }

    pub fn rank(&self) -> usize {
        self.cartan_type.rank
    }

    pub fn label(&self) -> String {
        self.cartan_type.to_string()
    }

    /// `C[i][j] = <α_i, α_j^∨>`; row `i` is `α_i` in fundamental weights.
    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn e_dim(&self) -> usize {
        self.e_dim
    }

    /// Primes dividing the torsion index.
    pub fn torsion_primes(&self) -> &[u64] {
        &self.torsion_primes
    }

    pub fn simple_root(&self, i: usize) -> Weight {
        Weight(self.cartan[i].clone())
    }

    pub fn simple_root_e(&self, i: usize) -> &[Rational64] {
        &self.simple_roots_e[i]
    }

    pub fn fundamental_weight_e(&self, i: usize) -> &[Rational64] {
        &self.omega_e[i]
    }

    /// `s_i(λ) = λ - λ_i α_i`.
    pub fn reflect(&self, i: usize, weight: &Weight) -> Weight {
        let k = weight.0[i];
        if k == 0 {
            return weight.clone();
        }
        Weight(
            weight
                .0
                .iter()
                .zip(&self.cartan[i])
                .map(|(a, c)| a - k * c)
                .collect(),
        )
    }

    /// Applies the word `s_{w[0]} s_{w[1]} ⋯` (letters are 1-based; the last
    /// letter acts first).
    pub fn act_on_weight(&self, word: &[usize], weight: &Weight) -> Result<Weight> {
        let mut out = weight.clone();
        for &letter in word.iter().rev() {
            if letter == 0 || letter > self.rank() {
                return Err(domain(format!(
                    "reflection index {letter} outside 1..={}",
                    self.rank()
                )));
            }
            out = self.reflect(letter - 1, &out);
        }
        Ok(out)
    }

    /// Matrix of `s_i` on fundamental-weight coordinates; column `j` is
    /// `s_i(ω_j)`.
    pub fn reflection_matrix(&self, i: usize) -> Vec<Vec<i64>> {
        let n = self.rank();
        let mut m = vec![vec![0i64; n]; n];
        for j in 0..n {
            let img = self.reflect(i, &Weight::fundamental(n, j));
            for (row, v) in img.0.into_iter().enumerate() {
                m[row][j] = v;
            }
        }
        m
    }

    /// Closure of `{λ}` under the simple reflections, in breadth-first order.
    pub fn weyl_orbit(&self, weight: &Weight) -> Vec<Weight> {
        let mut seen: HashSet<Weight> = HashSet::new();
        let mut out = vec![weight.clone()];
        seen.insert(weight.clone());
        let mut head = 0;
        while head < out.len() {
            let cur = out[head].clone();
            head += 1;
            for i in 0..self.rank() {
                let next = self.reflect(i, &cur);
                if seen.insert(next.clone()) {
                    out.push(next);
                }
            }
        }
        out
    }

    /// Elements of `W` of length at most `max_len`, each given by a reduced
    /// word, grouped by length. Words within a length are in lexicographic
    /// order.
    pub fn elements_by_length(&self, max_len: usize) -> Vec<Vec<Vec<usize>>> {
        let n = self.rank();
        let rho = Weight(vec![1; n]);
        let mut seen: HashSet<Weight> = HashSet::new();
        seen.insert(rho.clone());
        let mut levels: Vec<Vec<(Vec<usize>, Weight)>> = vec![vec![(vec![], rho)]];
        while levels.len() <= max_len {
            let prev = levels.last().unwrap();
            let mut next: Vec<(Vec<usize>, Weight)> = Vec::new();
            for (word, img) in prev {
                for i in 0..n {
                    let w = self.reflect(i, img);
                    if !seen.insert(w.clone()) {
                        continue;
                    }
                    let mut nw = Vec::with_capacity(word.len() + 1);
                    nw.push(i + 1);
                    nw.extend_from_slice(word);
                    next.push((nw, w));
                }
            }
            if next.is_empty() {
                break;
            }
            next.sort();
            levels.push(next);
        }
        levels
            .into_iter()
            .map(|lvl| lvl.into_iter().map(|(w, _)| w).collect())
            .collect()
    }

    /// `|{w : ℓ(w) = d}|` for `d = 0..=max_len` (zero past the longest element).
    pub fn enumerate_by_length(&self, max_len: usize) -> Vec<u64> {
        let mut counts: Vec<u64> = self
            .elements_by_length(max_len)
            .iter()
            .map(|l| l.len() as u64)
            .collect();
        counts.resize(max_len + 1, 0);
        counts
    }

    /// Number of positive roots, i.e. the length of the longest element.
    pub fn num_positive_roots(&self) -> usize {
        let n = self.rank();
        match self.family() {
            DynkinType::A => n * (n + 1) / 2,
            DynkinType::B | DynkinType::C => n * n,
            DynkinType::D => n * (n - 1),
            DynkinType::G => 6,
        }
    }

    pub fn weyl_order(&self) -> u64 {
        let n = self.rank() as u64;
        let fact = |k: u64| (1..=k).product::<u64>();
        match self.family() {
            DynkinType::A => fact(n + 1),
            DynkinType::B | DynkinType::C => (1u64 << n) * fact(n),
            DynkinType::D => (1u64 << (n - 1)) * fact(n),
            DynkinType::G => 12,
        }
    }

    /// Exact `e`-coordinates of a weight.
    pub fn omega_to_e(&self, weight: &Weight) -> Vec<Rational64> {
        let mut out = vec![Rational64::zero(); self.e_dim];
        for (a, omega) in weight.0.iter().zip(&self.omega_e) {
            for (o, w) in out.iter_mut().zip(omega) {
                *o += r(*a) * w;
            }
        }
        out
    }

    /// Fundamental-weight coordinates `λ_i = 2 (v·α_i)/(α_i·α_i)`; fails when
    /// `v` is not in the weight lattice.
    pub fn e_to_omega(&self, v: &[Rational64]) -> Result<Weight> {
        if v.len() != self.e_dim {
            return Err(domain(format!(
                "expected {} e-coordinates, got {}",
                self.e_dim,
                v.len()
            )));
        }
        let mut out = Vec::with_capacity(self.rank());
        for a in &self.simple_roots_e {
            let c = r(2) * dot(v, a) / dot(a, a);
            if !c.is_integer() {
                return Err(domain("vector is not an integral weight"));
            }
            out.push(c.to_integer());
        }
        Ok(Weight(out))
    }

    pub fn e_to_omega_int(&self, v: &[i64]) -> Result<Weight> {
        let v: Vec<Rational64> = v.iter().map(|&x| r(x)).collect();
        self.e_to_omega(&v)
    }

    /// `e_j` as a weight. For type A this is the class modulo the all-ones
    /// vector, so `e_{n+1} = -(e_1 + ⋯ + e_n)`. Fails for G2, whose `e_j`
    /// are not weights.
    pub fn e_basis_weight(&self, j: usize) -> Result<Weight> {
        if j >= self.e_dim {
            return Err(domain(format!("{} has no e_{}", self.label(), j + 1)));
        }
        self.e_to_omega(&unit(self.e_dim, j))
    }
}

impl fmt::Display for RootSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.cartan_type)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_small() -> Vec<RootSystem> {
        [
            "A1", "A2", "A3", "A4", "B3", "B4", "C2", "C3", "C4", "D4", "G2",
        ]
        .iter()
        .map(|l| RootSystem::from_label(l).unwrap())
        .collect()
    }

    fn matmul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
        let n = a.len();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum())
                    .collect()
            })
            .collect()
    }

    fn det(m: &[Vec<i64>]) -> i64 {
        let n = m.len();
        if n == 1 {
            return m[0][0];
        }
        (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(k, _)| *k != j)
                            .map(|(_, v)| *v)
                            .collect()
                    })
                    .collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * m[0][j] * det(&minor)
            })
            .sum()
    }

    fn coxeter_m(c: &[Vec<i64>], i: usize, j: usize) -> u32 {
        match c[i][j] * c[j][i] {
            0 => 2,
            1 => 3,
            2 => 4,
            3 => 6,
            _ => unreachable!(),
        }
    }

    #[test]
    fn rank_bounds() {
        assert!("B2".parse::<CartanType>().is_err());
        assert!("D3".parse::<CartanType>().is_err());
        assert!("G3".parse::<CartanType>().is_err());
        assert!("C1".parse::<CartanType>().is_err());
        assert!("E6".parse::<CartanType>().is_err());
        assert_eq!("a1".parse::<CartanType>().unwrap().to_string(), "A1");
    }

    #[test]
    fn fundamental_weights_are_dual_to_coroots() {
        for rs in all_small() {
            for i in 0..rs.rank() {
                let w = rs.e_to_omega(rs.fundamental_weight_e(i)).unwrap();
                assert_eq!(w, Weight::fundamental(rs.rank(), i), "{rs}");
            }
        }
    }

    #[test]
    fn reflections_are_unimodular_involutions_with_coxeter_relations() {
        for rs in all_small() {
            let n = rs.rank();
            let mats: Vec<_> = (0..n).map(|i| rs.reflection_matrix(i)).collect();
            for i in 0..n {
                assert_eq!(det(&mats[i]).abs(), 1);
                for j in 0..n {
                    let m = if i == j {
                        1
                    } else {
                        coxeter_m(rs.cartan(), i, j)
                    };
                    let prod = matmul(&mats[i], &mats[j]);
                    let mut acc = prod.clone();
                    for _ in 1..m {
                        acc = matmul(&acc, &prod);
                    }
                    let id: Vec<Vec<i64>> = (0..n)
                        .map(|a| (0..n).map(|b| i64::from(a == b)).collect())
                        .collect();
                    assert_eq!(acc, id, "{rs} s{i} s{j}");
                }
            }
        }
    }

    #[test]
    fn length_counts() {
        let a2 = RootSystem::from_label("A2").unwrap();
        assert_eq!(a2.enumerate_by_length(3), vec![1, 2, 2, 1]);
        for rs in all_small() {
            let counts = rs.enumerate_by_length(rs.num_positive_roots());
            assert_eq!(counts.iter().sum::<u64>(), rs.weyl_order(), "{rs}");
            let rev: Vec<u64> = counts.iter().rev().copied().collect();
            assert_eq!(counts, rev, "{rs}");
        }
    }

    #[test]
    fn b3_e_basis() {
        let rs = RootSystem::from_label("B3").unwrap();
        assert_eq!(rs.e_basis_weight(0).unwrap(), Weight(vec![1, 0, 0]));
        assert_eq!(rs.e_basis_weight(1).unwrap(), Weight(vec![-1, 1, 0]));
        assert_eq!(rs.e_basis_weight(2).unwrap(), Weight(vec![0, -1, 2]));
        for j in 0..3 {
            let w = rs.e_basis_weight(j).unwrap();
            assert_eq!(rs.omega_to_e(&w), unit(3, j));
        }
        let orbit = rs.weyl_orbit(&rs.e_basis_weight(0).unwrap());
        assert_eq!(orbit.len(), 6);
        let e3 = rs.e_basis_weight(2).unwrap();
        assert_eq!(rs.act_on_weight(&[3], &e3).unwrap(), e3.neg());
    }

    #[test]
    fn type_a_last_coordinate() {
        let rs = RootSystem::from_label("A3").unwrap();
        let sum = (0..4)
            .map(|j| rs.e_basis_weight(j).unwrap())
            .fold(Weight::zero(3), |a, b| a.add(&b));
        assert!(sum.is_zero());
        assert_eq!(rs.e_basis_weight(3).unwrap(), Weight(vec![0, 0, -1]));
    }

    #[test]
    fn a1_and_g2() {
        let a1 = RootSystem::from_label("A1").unwrap();
        assert_eq!(
            a1.act_on_weight(&[1], &Weight(vec![1])).unwrap(),
            Weight(vec![-1])
        );
        assert_eq!(
            a1.weyl_orbit(&Weight(vec![1])),
            vec![Weight(vec![1]), Weight(vec![-1])]
        );

        let g2 = RootSystem::from_label("G2").unwrap();
        assert_eq!(g2.cartan(), &[vec![2, -1], vec![-3, 2]]);
        assert_eq!(g2.e_to_omega_int(&[-1, 0, 1]).unwrap(), Weight(vec![1, 0]));
        assert_eq!(g2.e_to_omega_int(&[-1, -1, 2]).unwrap(), Weight(vec![0, 1]));
        assert_eq!(g2.weyl_orbit(&Weight(vec![1, 0])).len(), 6);
        assert_eq!(g2.enumerate_by_length(6).iter().sum::<u64>(), 12);
    }

    #[test]
    fn words_and_orbit_sizes() {
        for rs in all_small() {
            let n = rs.rank();
            let lam = Weight((1..=n as i64).collect());
            for i in 1..=n {
                assert_eq!(rs.act_on_weight(&[i, i], &lam).unwrap(), lam);
            }
            assert_eq!(rs.act_on_weight(&[], &lam).unwrap(), lam);
            for j in 0..n {
                let size = rs.weyl_orbit(&Weight::fundamental(n, j)).len() as u64;
                assert_eq!(rs.weyl_order() % size, 0);
            }
        }
        assert!(RootSystem::from_label("A2")
            .unwrap()
            .act_on_weight(&[3], &Weight(vec![1, 0]))
            .is_err());
    }
}
