//! Exact integer lattices: Hermite and Smith normal forms, membership and
//! quotient orders.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Dense row-major matrix of arbitrary-precision integers.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<BigInt>>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntegerMatrix {
            rows,
            cols,
            data: vec![vec![BigInt::zero(); cols]; rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows; every row must have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<Vec<BigInt>>) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        IntegerMatrix {
            rows: rows.len(),
            cols,
            data: rows,
        }
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        Self::from_rows(
            cols,
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[BigInt]> {
        self.data.iter().map(Vec::as_slice)
    }

    pub fn into_rows(self) -> Vec<Vec<BigInt>> {
        self.data
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i][j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().flatten().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j][i] = self.data[i][j].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other.data[k][j];
                    if !b.is_zero() {
                        out.data[i][j] += a * b;
                    }
                }
            }
        }
        out
    }

    /// Determinant by fraction-free elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut m = self.data.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else {
                return BigInt::zero();
            };
            if p != k {
                m.swap(p, k);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    m[i][j] = v / &prev;
                }
                m[i][k] = BigInt::zero();
            }
            prev = m[k][k].clone();
        }
        if n == 0 {
            return BigInt::one();
        }
        sign * &m[n - 1][n - 1]
    }

    fn row_axpy(&mut self, dst: usize, q: &BigInt, src: usize) {
        if q.is_zero() {
            return;
        }
        let (a, b) = if dst < src {
            let (lo, hi) = self.data.split_at_mut(src);
            (&mut lo[dst], &hi[0])
        } else {
            let (lo, hi) = self.data.split_at_mut(dst);
            (&mut hi[0], &lo[src])
        };
        for (x, y) in a.iter_mut().zip(b.iter()) {
            if !y.is_zero() {
                *x -= q * y;
            }
        }
    }

    fn col_axpy(&mut self, dst: usize, q: &BigInt, src: usize) {
        if q.is_zero() {
            return;
        }
        for row in &mut self.data {
            if !row[src].is_zero() {
                let t = q * &row[src];
                row[dst] -= t;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in &mut self.data[i] {
            *x = -std::mem::take(x);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for row in &mut self.data {
            row.swap(a, b);
        }
    }
}

impl fmt::Display for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.data {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Row-style Hermite normal form `H = U·M` with `U` unimodular.
///
/// The first `rank` rows of `H` are nonzero; row `i` has its leading entry
/// in column `pivots[i]`, that entry is positive, and every entry above it
/// lies in `[0, pivot)`.
#[derive(Clone, Debug)]
pub struct Hnf {
    pub h: IntegerMatrix,
    pub transform: IntegerMatrix,
    pub pivots: Vec<usize>,
}

impl Hnf {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// The nonzero rows of `H`: a basis of the row lattice.
    pub fn basis(&self) -> IntegerMatrix {
        IntegerMatrix::from_rows(self.h.cols, self.h.data[..self.rank()].to_vec())
    }
}

pub fn hnf(m: &IntegerMatrix) -> Hnf {
    let mut h = m.clone();
    let mut u = IntegerMatrix::identity(m.rows);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        loop {
            let best = (r..m.rows)
                .filter(|&i| !h.data[i][c].is_zero())
                .min_by(|&a, &b| h.data[a][c].abs().cmp(&h.data[b][c].abs()));
            let Some(best) = best else { break };
            h.data.swap(r, best);
            u.data.swap(r, best);
            let mut done = true;
            for i in r + 1..m.rows {
                if h.data[i][c].is_zero() {
                    continue;
                }
                let q = h.data[i][c].div_floor(&h.data[r][c]);
                h.row_axpy(i, &q, r);
                u.row_axpy(i, &q, r);
                if !h.data[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h.data[r][c].is_zero() {
            continue;
        }
        if h.data[r][c].is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        for i in 0..r {
            let q = h.data[i][c].div_floor(&h.data[r][c]);
            h.row_axpy(i, &q, r);
            u.row_axpy(i, &q, r);
        }
        pivots.push(c);
        r += 1;
    }
    Hnf {
        h,
        transform: u,
        pivots,
    }
}

/// A lattice kept in reduced Hermite form, grown one generator at a time.
///
/// Cheaper than [`hnf`] when there are many more generators than columns,
/// since the stored basis never exceeds the column count.
#[derive(Clone, Debug)]
pub struct EchelonLattice {
    cols: usize,
    basis: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
}

fn leading(v: &[BigInt]) -> Option<usize> {
    v.iter().position(|x| !x.is_zero())
}

fn axpy(dst: &mut [BigInt], q: &BigInt, src: &[BigInt]) {
    if q.is_zero() {
        return;
    }
    for (x, y) in dst.iter_mut().zip(src) {
        if !y.is_zero() {
            *x -= q * y;
        }
    }
}

impl EchelonLattice {
    pub fn new(cols: usize) -> Self {
        EchelonLattice {
            cols,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn from_rows<'a>(cols: usize, rows: impl IntoIterator<Item = &'a [BigInt]>) -> Self {
        let mut l = Self::new(cols);
        for r in rows {
            l.insert(r.to_vec());
        }
        l
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis_rows(&self) -> &[Vec<BigInt>] {
        &self.basis
    }

    pub fn basis(&self) -> IntegerMatrix {
        IntegerMatrix::from_rows(self.cols, self.basis.clone())
    }

    /// Adds a generator; returns whether the lattice changed.
    pub fn insert(&mut self, mut v: Vec<BigInt>) -> bool {
        assert_eq!(v.len(), self.cols, "generator length");
        let mut changed = false;
        let mut k = 0;
        while let Some(c) = leading(&v) {
            while k < self.pivots.len() && self.pivots[k] < c {
                k += 1;
            }
            if k == self.pivots.len() || self.pivots[k] != c {
                if v[c].is_negative() {
                    for x in &mut v {
                        *x = -std::mem::take(x);
                    }
                }
                self.basis.insert(k, v);
                self.pivots.insert(k, c);
                self.reduce_from(k);
                return true;
            }
            let b = &self.basis[k];
            let (bp, vp) = (b[c].clone(), v[c].clone());
            if vp.is_multiple_of(&bp) {
                let q = &vp / &bp;
                axpy(&mut v, &q, b);
            } else {
                let e = bp.extended_gcd(&vp);
                let (s, t) = (e.x, e.y);
                let nb: Vec<BigInt> = b.iter().zip(&v).map(|(x, y)| &s * x + &t * y).collect();
                let bq = &bp / &e.gcd;
                let vq = &vp / &e.gcd;
                let nv: Vec<BigInt> = b.iter().zip(&v).map(|(x, y)| &vq * x - &bq * y).collect();
                self.basis[k] = nb;
                if self.basis[k][c].is_negative() {
                    for x in &mut self.basis[k] {
                        *x = -std::mem::take(x);
                    }
                }
                self.reduce_from(k);
                v = nv;
                changed = true;
            }
            k += 1;
        }
        changed
    }

    /// Restores the reduced form after row `k` changed.
    fn reduce_from(&mut self, k: usize) {
        for i in (0..=k).rev() {
            self.reduce_row(i);
        }
    }

    fn reduce_row(&mut self, i: usize) {
        for j in i + 1..self.basis.len() {
            let p = self.pivots[j];
            let q = self.basis[i][p].div_floor(&self.basis[j][p]);
            if !q.is_zero() {
                let (lo, hi) = self.basis.split_at_mut(j);
                axpy(&mut lo[i], &q, &hi[0]);
            }
        }
    }

    /// Whether `v` lies in the lattice.
    pub fn contains(&self, v: &[BigInt]) -> bool {
        matches!(self.order_of(v), Some(k) if k.is_one())
    }

    /// Least `k ≥ 1` with `k·v` in the lattice, or `None` when no multiple of
    /// `v` lies in it.
    pub fn order_of(&self, v: &[BigInt]) -> Option<BigInt> {
        assert_eq!(v.len(), self.cols, "vector length");
        let mut rest: Vec<BigRational> = v.iter().cloned().map(BigRational::from_integer).collect();
        let mut denom = BigInt::one();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            if rest[..p].iter().any(|x| !x.is_zero()) {
                return None;
            }
            let x = &rest[p] / BigRational::from_integer(row[p].clone());
            if x.is_zero() {
                continue;
            }
            denom = denom.lcm(x.denom());
            for (r, b) in rest.iter_mut().zip(row) {
                if !b.is_zero() {
                    *r -= &x * BigRational::from_integer(b.clone());
                }
            }
        }
        if rest.iter().any(|x| !x.is_zero()) {
            return None;
        }
        Some(denom)
    }

    /// Integer coordinates of `v` in the stored basis, when `v` is a member.
    pub fn coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        let mut rest = v.to_vec();
        let mut out = Vec::with_capacity(self.basis.len());
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            if rest[..p].iter().any(|x| !x.is_zero()) {
                return None;
            }
            let (q, rem) = rest[p].div_rem(&row[p]);
            if !rem.is_zero() {
                return None;
            }
            axpy(&mut rest, &q, row);
            out.push(q);
        }
        rest.iter().all(Zero::is_zero).then_some(out)
    }
}

/// Least `k ≥ 1` with `k·v` in the row lattice of `l`, or `None` when `v` is
/// outside its rational span.
pub fn order_mod_lattice(v: &[BigInt], l: &IntegerMatrix) -> Option<BigInt> {
    EchelonLattice::from_rows(l.ncols(), l.rows()).order_of(v)
}

/// Smith normal form `D = P·M·Q` with `P`, `Q` unimodular and
/// `d_1 | d_2 | ⋯` on the diagonal (zeros last).
#[derive(Clone, Debug)]
pub struct Snf {
    pub d: IntegerMatrix,
    pub left: IntegerMatrix,
    pub right: IntegerMatrix,
}

impl Snf {
    /// The diagonal, of length `min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols))
            .map(|i| self.d.data[i][i].clone())
            .collect()
    }

    /// Nonzero diagonal entries.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.diagonal()
            .into_iter()
            .filter(|x| !x.is_zero())
            .collect()
    }
}

pub fn snf(m: &IntegerMatrix) -> Snf {
    let (rows, cols) = (m.rows, m.cols);
    let mut d = m.clone();
    let mut p = IntegerMatrix::identity(rows);
    let mut q = IntegerMatrix::identity(cols);
    let mut t = 0;
    while t < rows.min(cols) {
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                let x = &d.data[i][j];
                if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < d.data[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        d.data.swap(t, bi);
        p.data.swap(t, bi);
        d.swap_cols(t, bj);
        q.swap_cols(t, bj);
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if d.data[i][t].is_zero() {
                    continue;
                }
                let f = d.data[i][t].div_floor(&d.data[t][t]);
                d.row_axpy(i, &f, t);
                p.row_axpy(i, &f, t);
                if !d.data[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if d.data[t][j].is_zero() {
                    continue;
                }
                let f = d.data[t][j].div_floor(&d.data[t][t]);
                d.col_axpy(j, &f, t);
                q.col_axpy(j, &f, t);
                if !d.data[t][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                let mut best = (t, t);
                for i in t..rows {
                    let x = &d.data[i][t];
                    if !x.is_zero() && x.abs() < d.data[best.0][best.1].abs() {
                        best = (i, t);
                    }
                }
                for j in t..cols {
                    let x = &d.data[t][j];
                    if !x.is_zero() && x.abs() < d.data[best.0][best.1].abs() {
                        best = (t, j);
                    }
                }
                if best.0 != t {
                    d.data.swap(t, best.0);
                    p.data.swap(t, best.0);
                }
                if best.1 != t {
                    d.swap_cols(t, best.1);
                    q.swap_cols(t, best.1);
                }
                continue;
            }
            let pivot = d.data[t][t].clone();
            let bad = (t + 1..rows)
                .find(|&i| d.data[i][t + 1..].iter().any(|x| !x.is_multiple_of(&pivot)));
            match bad {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    d.row_axpy(t, &minus_one, i);
                    p.row_axpy(t, &minus_one, i);
                }
                None => break,
            }
        }
        if d.data[t][t].is_negative() {
            d.negate_row(t);
            p.negate_row(t);
        }
        t += 1;
    }
    Snf {
        d,
        left: p,
        right: q,
    }
}

/// A basis, in Hermite form, of `{x : x·M = 0}`.
pub fn left_kernel(m: &IntegerMatrix) -> IntegerMatrix {
    let h = hnf(m);
    let kernel: Vec<Vec<BigInt>> = h.transform.data[h.rank()..].to_vec();
    hnf(&IntegerMatrix::from_rows(m.rows, kernel)).basis()
}

/// Rank of the reduction of `m` modulo the prime `p`.
pub fn rank_mod_p(m: &IntegerMatrix, p: u64) -> usize {
    let p = p as i64;
    let mut a: Vec<Vec<i64>> = m
        .data
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| {
                    let v: BigInt = x.mod_floor(&BigInt::from(p));
                    i64::try_from(v).expect("residue fits")
                })
                .collect()
        })
        .collect();
    let inv = |x: i64| -> i64 {
        let e = x.extended_gcd(&p);
        e.x.rem_euclid(p)
    };
    let mut rank = 0;
    for c in 0..m.cols {
        let Some(piv) = (rank..a.len()).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(rank, piv);
        let s = inv(a[rank][c]);
        for x in &mut a[rank] {
            *x = (*x * s).rem_euclid(p);
        }
        for i in 0..a.len() {
            if i != rank && a[i][c] != 0 {
                let f = a[i][c];
                for j in 0..m.cols {
                    a[i][j] = (a[i][j] - f * a[rank][j]).rem_euclid(p);
                }
            }
        }
        rank += 1;
    }
    rank
}
