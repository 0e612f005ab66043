mod common;

use common::{build, config, raw_terms, rings, without_constant};
use proptest::prelude::*;

use fgalg::series::{CoeffRing, TruncatedSeries};

proptest! {
    #![proptest_config(config(0x5e81e5, 64))]

    #[test]
    fn ring_axioms(
        ring_ix in 0usize..6,
        nvars in 1usize..=4,
        trunc in 0u32..=8,
        a in raw_terms(4, 8, 6),
        b in raw_terms(4, 8, 6),
        c in raw_terms(4, 8, 6),
    ) {
        let ring = &rings()[ring_ix];
        let cut = |r: &common::RawTerms| -> common::RawTerms {
            r.iter().map(|(e, k)| (e[..nvars].to_vec(), *k)).collect()
        };
        let (a, b, c) = (
            build(ring, nvars, trunc, &cut(&a)),
            build(ring, nvars, trunc, &cut(&b)),
            build(ring, nvars, trunc, &cut(&c)),
        );
        let one = TruncatedSeries::one(ring, nvars, trunc);
        prop_assert_eq!(a.mul(&b)?.mul(&c)?, a.mul(&b.mul(&c)?)?);
        prop_assert_eq!(a.add(&b)?.add(&c)?, a.add(&b.add(&c)?)?);
        prop_assert_eq!(a.mul(&b.add(&c)?)?, a.mul(&b)?.add(&a.mul(&c)?)?);
        prop_assert_eq!(a.mul(&b)?, b.mul(&a)?);
        prop_assert_eq!(a.mul(&one)?, a.clone());
        prop_assert!(a.add(&a.neg())?.is_zero());
    }

    #[test]
    fn substitution_composes(
        ring_ix in 0usize..6,
        trunc in 1u32..=6,
        f in raw_terms(2, 6, 5),
        g0 in raw_terms(2, 6, 4),
        g1 in raw_terms(2, 6, 4),
        h0 in raw_terms(2, 6, 4),
        h1 in raw_terms(2, 6, 4),
    ) {
        let ring = &rings()[ring_ix];
        let f = build(ring, 2, trunc, &f);
        let g = [g0, g1].map(|r| without_constant(&build(ring, 2, trunc, &r)));
        let h = [h0, h1].map(|r| without_constant(&build(ring, 2, trunc, &r)));
        let g_of_h: Vec<TruncatedSeries> = g.iter().map(|gi| gi.substitute(&h)).collect::<Result<_, _>>()?;
        prop_assert_eq!(f.substitute(&g)?.substitute(&h)?, f.substitute(&g_of_h)?);
    }

    #[test]
    fn unit_inverse(ring_ix in 0usize..6, nvars in 1usize..=3, trunc in 0u32..=6, f in raw_terms(3, 6, 6)) {
        let ring = &rings()[ring_ix];
        let f: common::RawTerms = f.into_iter().map(|(e, k)| (e[..nvars].to_vec(), k)).collect();
        let f = build(ring, nvars, trunc, &f);
        let one = TruncatedSeries::one(ring, nvars, trunc);
        match f.invert_unit() {
            Ok(g) => prop_assert_eq!(f.mul(&g)?, one.clone()),
            Err(_) => prop_assert!(ring.inverse(&f.constant_term()).is_none()),
        }
        let u = without_constant(&f).add(&one)?;
        prop_assert_eq!(u.mul(&u.invert_unit()?)?, one);
    }

    #[test]
    fn homogeneous_parts_and_valuation(
        ring_ix in 0usize..6,
        trunc in 0u32..=8,
        a in raw_terms(3, 8, 6),
        b in raw_terms(3, 8, 6),
    ) {
        let ring = &rings()[ring_ix];
        let (a, b) = (build(ring, 3, trunc, &a), build(ring, 3, trunc, &b));
        let sum = (0..=trunc).try_fold(TruncatedSeries::zero(ring, 3, trunc), |acc, d| acc.add(&a.homogeneous_part(d)))?;
        prop_assert_eq!(&sum, &a);
        let ab = a.mul(&b)?;
        if let (Some(va), Some(vb)) = (a.valuation(), b.valuation()) {
            match ab.valuation() {
                Some(v) => prop_assert!(v >= va + vb),
                None => prop_assert!(va + vb > trunc || !ring.is_integral_domain()),
            }
            if ring.is_integral_domain() && va + vb <= trunc {
                prop_assert_eq!(ab.valuation(), Some(va + vb));
            }
        }
    }
}

#[test]
fn integral_domain_flags() {
    let kinds: Vec<bool> = rings().iter().map(CoeffRing::is_integral_domain).collect();
    assert_eq!(kinds, [true, true, false, true, true, true]);
}
