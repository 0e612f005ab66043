mod common;

use std::sync::Arc;

use common::config;
use num_bigint::BigInt;
use proptest::prelude::*;

use fgalg::fga::{deform, FgaContext, FgaElement};
use fgalg::fgl::{BuiltinLaw, FormalGroupLaw};
use fgalg::rootsys::{RootSystem, Weight};
use fgalg::series::CoeffRing;

const LABELS: [&str; 6] = ["A2", "A3", "B3", "C2", "D4", "G2"];

fn law(ix: usize, trunc: u32) -> FormalGroupLaw {
    match ix {
        0 => FormalGroupLaw::builtin(BuiltinLaw::Additive, &CoeffRing::Integers, trunc),
        1 => FormalGroupLaw::builtin(BuiltinLaw::Multiplicative, &CoeffRing::Integers, trunc),
        2 => FormalGroupLaw::builtin(BuiltinLaw::Lorentz, &CoeffRing::Integers, trunc),
        _ => FormalGroupLaw::elliptic_integral([1, 0, 1, 0, 1], trunc).unwrap(),
    }
}

fn ctx(label: &str, law_ix: usize, trunc: u32) -> Arc<FgaContext> {
    let rs = Arc::new(RootSystem::from_label(label).unwrap());
    FgaContext::new(rs, Arc::new(law(law_ix, trunc)), trunc).unwrap()
}

fn weight(rank: usize, raw: &[i64]) -> Weight {
    Weight(raw[..rank].to_vec())
}

fn word(rank: usize, raw: &[usize]) -> Vec<usize> {
    raw.iter().map(|&i| i % rank + 1).collect()
}

proptest! {
    #![proptest_config(config(0xf6a, 40))]

    #[test]
    fn classes_add_by_the_law(
        type_ix in 0usize..6,
        law_ix in 0usize..4,
        l in prop::collection::vec(-3i64..=3, 4),
        m in prop::collection::vec(-3i64..=3, 4),
    ) {
        let c = ctx(LABELS[type_ix], law_ix, 4);
        let n = c.rank();
        let (l, m) = (weight(n, &l), weight(n, &m));
        let lhs = c.x_of_weight(&l.add(&m));
        let rhs = c.fgl().formal_sum(c.x_of_weight(&l).series(), c.x_of_weight(&m).series())?;
        prop_assert_eq!(lhs.series(), &rhs);
        let lead = c.x_of_weight(&l).leading_form(1)?.to_integers()?;
        let expected: Vec<BigInt> = l.coords().iter().map(|&k| BigInt::from(k)).collect();
        prop_assert_eq!(lead, expected);
    }

    #[test]
    fn weyl_action_is_an_automorphism(
        type_ix in 0usize..6,
        law_ix in 0usize..4,
        l in prop::collection::vec(-2i64..=2, 4),
        m in prop::collection::vec(-2i64..=2, 4),
        w1 in prop::collection::vec(0usize..4, 0..4),
        w2 in prop::collection::vec(0usize..4, 0..4),
    ) {
        let c = ctx(LABELS[type_ix], law_ix, 4);
        let n = c.rank();
        let a = c.x_of_weight(&weight(n, &l)).add(&c.one())?;
        let b = c.x_of_weight(&weight(n, &m)).mul(&c.x_of_weight(&weight(n, &l).neg()))?;
        let (w1, w2) = (word(n, &w1), word(n, &w2));
        let act = |e: &FgaElement| e.weyl_act(&w1);
        prop_assert_eq!(act(&a.mul(&b)?)?, act(&a)?.mul(&act(&b)?)?);
        prop_assert_eq!(act(&a.add(&b)?)?, act(&a)?.add(&act(&b)?)?);
        let both: Vec<usize> = w1.iter().chain(&w2).copied().collect();
        prop_assert_eq!(a.weyl_act(&both)?, a.weyl_act(&w2)?.weyl_act(&w1)?);
        let wl = c.root_system().act_on_weight(&w1, &weight(n, &l))?;
        prop_assert_eq!(c.x_of_weight(&weight(n, &l)).weyl_act(&w1)?, c.x_of_weight(&wl));
    }

    #[test]
    fn multiplicative_classes_are_exponentials(
        type_ix in 0usize..6,
        l in prop::collection::vec(-3i64..=3, 4),
        m in prop::collection::vec(-3i64..=3, 4),
    ) {
        let c = ctx(LABELS[type_ix], 1, 5);
        let n = c.rank();
        let (l, m) = (weight(n, &l), weight(n, &m));
        let e = |w: &Weight| c.one().sub(&c.x_of_weight(&w.neg()));
        prop_assert_eq!(e(&l)?.mul(&e(&m)?)?, e(&l.add(&m))?);
    }

    #[test]
    fn deformation_fixes_fundamental_coordinates(
        type_ix in 0usize..6,
        from in 0usize..4,
        to in 0usize..4,
        l in prop::collection::vec(-2i64..=2, 4),
    ) {
        let src = ctx(LABELS[type_ix], from, 4);
        let dst = ctx(LABELS[type_ix], to, 4);
        let n = src.rank();
        let f = src.x_of_weight(&weight(n, &l)).mul(&src.x_of_weight(&Weight::fundamental(n, 0)))?;
        prop_assert_eq!(src.x_of_e(0).is_ok(), LABELS[type_ix] != "G2");
        let g = deform(&dst, &f)?;
        prop_assert_eq!(g.series(), f.series());
        for i in 0..n {
            let w = Weight::fundamental(n, i);
            prop_assert_eq!(deform(&dst, &src.x_of_weight(&w))?, dst.x_of_weight(&w));
        }
    }
}
