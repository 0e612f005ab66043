#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

use fgalg::series::{Coeff, CoeffRing, TruncatedSeries};

/// Deterministic proptest configuration.
pub fn config(seed: u64, cases: u32) -> Config {
    Config {
        cases,
        rng_seed: RngSeed::Fixed(seed),
        failure_persistence: None,
        ..Config::default()
    }
}

/// One ring of each kind.
pub fn rings() -> Vec<CoeffRing> {
    vec![
        CoeffRing::Integers,
        CoeffRing::Rationals,
        CoeffRing::IntegersMod(6),
        CoeffRing::IntegersMod(7),
        CoeffRing::poly_over_integers(["s", "t"]),
        CoeffRing::poly_over_integers(["s", "t"])
            .rational_extension()
            .unwrap(),
    ]
}

/// A ring element from small integer data: `a/b` in ℚ, `a + b·s + c·t` over
/// polynomial rings, `a` otherwise.
pub fn coeff(ring: &CoeffRing, a: i64, b: i64, c: i64) -> Coeff {
    match ring {
        CoeffRing::Rationals => ring
            .from_ratio(BigRational::new(BigInt::from(a), BigInt::from(b.abs() + 1)))
            .unwrap(),
        CoeffRing::PolyOverIntegers(_) | CoeffRing::PolyOverRationals(_) => {
            let s = ring.symbol("s").unwrap().mul(&ring.from_int(b));
            let t = ring.symbol("t").unwrap().mul(&ring.from_int(c));
            ring.from_int(a).add(&s).add(&t)
        }
        _ => ring.from_int(a),
    }
}

pub type RawTerms = Vec<(Vec<u32>, (i64, i64, i64))>;

/// Sparse term data with total degree at most `max_deg`.
pub fn raw_terms(nvars: usize, max_deg: u32, max_terms: usize) -> impl Strategy<Value = RawTerms> {
    prop::collection::vec(
        (
            prop::collection::vec(0..=max_deg, nvars),
            (-9i64..=9, -4i64..=4, -3i64..=3),
        ),
        0..=max_terms,
    )
    .prop_map(move |ts| {
        ts.into_iter()
            .map(|(mut e, c)| {
                while e.iter().sum::<u32>() > max_deg {
                    let i = e.iter().position(|&x| x > 0).unwrap();
                    e[i] -= 1;
                }
                (e, c)
            })
            .collect()
    })
}

pub fn build(ring: &CoeffRing, nvars: usize, trunc: u32, raw: &RawTerms) -> TruncatedSeries {
    TruncatedSeries::from_terms(
        ring,
        nvars,
        trunc,
        raw.iter()
            .map(|(e, (a, b, c))| (e.clone(), coeff(ring, *a, *b, *c))),
    )
    .unwrap()
}

/// Drops the constant term.
pub fn without_constant(s: &TruncatedSeries) -> TruncatedSeries {
    s.sub(&TruncatedSeries::constant(
        s.ring(),
        s.nvars(),
        s.trunc(),
        s.constant_term(),
    ))
    .unwrap()
}
