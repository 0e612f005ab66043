//! Normal-form reconstruction on random integer matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fgalg::exponent::{hnf, left_kernel, snf, EchelonLattice, IntegerMatrix};

/// Dense, sparse and rank-deficient matrices with entries in `[-1000, 1000]`.
fn random_matrix(rng: &mut ChaCha8Rng, max_dim: usize) -> IntegerMatrix {
    let rows = rng.gen_range(1..=max_dim);
    let cols = rng.gen_range(1..=max_dim);
    let style = rng.gen_range(0..3);
    let mut data: Vec<Vec<i64>> = (0..rows)
        .map(|_| {
            (0..cols)
                .map(|_| {
                    if style == 1 && rng.gen_bool(0.8) {
                        0
                    } else {
                        rng.gen_range(-1000..=1000)
                    }
                })
                .collect()
        })
        .collect();
    if style == 2 && rows > 1 {
        // Repeat rows, possibly negated, to force rank deficiency.
        for i in 0..rows / 2 {
            let src = rng.gen_range(0..rows);
            let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
            data[i] = data[src].iter().map(|x| sign * x).collect();
        }
    }
    IntegerMatrix::from_i64(&data)
}

fn is_unimodular(m: &IntegerMatrix) -> bool {
    m.determinant().abs().is_one()
}

fn matrices() -> Vec<IntegerMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5a1f);
    let mut out: Vec<IntegerMatrix> = (0..90).map(|_| random_matrix(&mut rng, 12)).collect();
    out.extend((0..10).map(|_| random_matrix(&mut rng, 40)));
    out
}

#[test]
fn smith_form_reconstructs() {
    for (k, m) in matrices().iter().enumerate() {
        let s = snf(m);
        assert!(
            is_unimodular(&s.left) && is_unimodular(&s.right),
            "case {k}"
        );
        assert_eq!(s.left.mul(m).mul(&s.right), s.d, "case {k}");
        for i in 0..s.d.nrows() {
            for j in 0..s.d.ncols() {
                if i != j {
                    assert!(s.d.get(i, j).is_zero(), "case {k}");
                }
            }
        }
        let diag = s.diagonal();
        let nonzero = s.invariant_factors();
        assert!(nonzero.iter().all(|x| x.is_positive()), "case {k}");
        assert_eq!(
            &diag[..nonzero.len()],
            &nonzero[..],
            "zeros come last in case {k}"
        );
        for w in nonzero.windows(2) {
            assert!(
                w[1].is_multiple_of(&w[0]),
                "case {k}: {} does not divide {}",
                w[0],
                w[1]
            );
        }
    }
}

#[test]
fn hermite_form_reconstructs() {
    for (k, m) in matrices().iter().enumerate() {
        let h = hnf(m);
        assert!(is_unimodular(&h.transform), "case {k}");
        assert_eq!(h.transform.mul(m), h.h, "case {k}");
        let mut last = None;
        for (i, &p) in h.pivots.iter().enumerate() {
            assert!(last.is_none_or(|q| p > q), "case {k}");
            last = Some(p);
            let piv = h.h.get(i, p);
            assert!(piv.is_positive(), "case {k}");
            for j in 0..p {
                assert!(h.h.get(i, j).is_zero(), "case {k}");
            }
            for above in 0..i {
                let x = h.h.get(above, p);
                assert!(!x.is_negative() && x < piv, "case {k}");
            }
        }
        for i in h.rank()..h.h.nrows() {
            assert!(h.h.row(i).iter().all(Zero::is_zero), "case {k}");
        }
        assert_eq!(h.rank(), snf(m).invariant_factors().len(), "case {k}");
    }
}

#[test]
fn left_kernel_annihilates() {
    for (k, m) in matrices().iter().take(40).enumerate() {
        let ker = left_kernel(m);
        let r = snf(m).invariant_factors().len();
        assert_eq!(ker.nrows(), m.nrows() - r, "case {k}");
        if ker.nrows() > 0 {
            assert!(ker.mul(m).is_zero(), "case {k}");
            // Saturated: the kernel basis is primitive.
            assert!(
                snf(&ker).invariant_factors().iter().all(One::is_one),
                "case {k}"
            );
        }
    }
}

#[test]
fn echelon_lattice_agrees_with_hermite_form() {
    for (k, m) in matrices().iter().take(40).enumerate() {
        let lat = EchelonLattice::from_rows(m.ncols(), m.rows());
        let h = hnf(m);
        assert_eq!(lat.rank(), h.rank(), "case {k}");
        assert_eq!(lat.basis(), h.basis(), "case {k}");
        for row in m.rows() {
            assert!(lat.contains(row), "case {k}");
            let doubled: Vec<BigInt> = row.iter().map(|x| x * 2 + 1).collect();
            if let Some(ord) = lat.order_of(&doubled) {
                let scaled: Vec<BigInt> = doubled.iter().map(|x| x * &ord).collect();
                assert!(lat.contains(&scaled), "case {k}");
            }
        }
    }
}
