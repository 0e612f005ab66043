mod common;

use std::sync::Arc;

use common::config;
use num_bigint::BigInt;
use proptest::prelude::*;

use fgalg::chern::{
    verify_exterior_recursion, verify_gamma_congruence, BundleExpr, Calculus, ClassSpace,
    RootBundle,
};
use fgalg::exponent::{invariant_slice, EchelonLattice};
use fgalg::fga::{deform, FgaContext, SymmetricSlice};
use fgalg::fgl::{BuiltinLaw, FormalGroupLaw};
use fgalg::rootsys::{RootSystem, Weight};
use fgalg::series::CoeffRing;

fn law(ix: usize, trunc: u32) -> FormalGroupLaw {
    match ix {
        0 => FormalGroupLaw::builtin(BuiltinLaw::Additive, &CoeffRing::Integers, trunc),
        1 => FormalGroupLaw::builtin(BuiltinLaw::Multiplicative, &CoeffRing::Integers, trunc),
        2 => FormalGroupLaw::builtin(BuiltinLaw::Lorentz, &CoeffRing::Integers, trunc),
        3 => FormalGroupLaw::elliptic_integral([1, 1, 1, 1, 1], trunc).unwrap(),
        _ => FormalGroupLaw::symbolic(trunc),
    }
}

proptest! {
    #![proptest_config(config(0xc4e, 24))]

    #[test]
    fn total_class_is_multiplicative_and_bounded_by_rank(
        law_ix in 0usize..5,
        r1 in 0usize..=2,
        r2 in 1usize..=2,
    ) {
        let f = law(law_ix, 4);
        let space = ClassSpace::new(f.ring(), r1 + r2, 4)?;
        let calc = Calculus::new(&f, space.clone())?;
        let e1 = space.bundle(0, r1)?;
        let e2 = space.bundle(r1, r2)?;
        let sum = calc.total_class(&e1.sum(&e2))?;
        prop_assert_eq!(&sum, &calc.total_class(&e1)?.mul(&calc.total_class(&e2)?)?);
        for i in r1 + r2 + 1..=4 {
            prop_assert!(sum.class(i).is_zero());
        }
        let dual = calc.dual_class(&e1.sum(&e2))?;
        prop_assert_eq!(dual.t_degree(), r1 + r2);
        let tensor = calc.tensor_class(&e1, &e2)?;
        prop_assert!(tensor.t_degree() <= r1 * r2);
    }

    #[test]
    fn exterior_recursion_for_every_law(law_ix in 0usize..5, r in 1usize..=3) {
        let f = law(law_ix, r as u32 + 1);
        let rep = verify_exterior_recursion(&f, r, r as u32 + 1)?;
        prop_assert!(rep.pass, "{:?}", rep);
    }
}

#[test]
fn gamma_congruence() {
    for r in 1..=3 {
        let s = FormalGroupLaw::symbolic(r as u32 + 1);
        let rep = verify_gamma_congruence(&s, r, r as u32 + 1).unwrap();
        assert!(rep.pass, "{rep:?}");
    }
    let m = law(1, 5);
    assert!(verify_gamma_congruence(&m, 4, 5).unwrap().pass);
    for ix in [0, 2, 3] {
        for r in 1..=3 {
            assert!(verify_gamma_congruence(&law(ix, 4), r, 4).unwrap().pass);
        }
    }
}

#[test]
fn virtual_classes_cancel() {
    let f = law(3, 4);
    let space = ClassSpace::new(f.ring(), 2, 4).unwrap();
    let calc = Calculus::new(&f, space.clone()).unwrap();
    let e = BundleExpr::Bundle(space.bundle(0, 2).unwrap());
    let c = calc
        .virtual_class(&[
            (1, e.clone().exterior(2)),
            (-1, e.clone().exterior(2)),
            (1, e.clone()),
        ])
        .unwrap();
    assert_eq!(c, calc.class_of(&e).unwrap());
}

/// Products of first classes `x_{λ_1}⋯x_{λ_d}`: the class of the virtual
/// bundle `∏(1 - L_{λ_i}^∨)` under `F`, compared in degree `d` with the
/// deformed product under the additive law, agree modulo the additive
/// invariant slice.
#[test]
fn characteristic_and_deformation_paths_agree() {
    let cases: [(&str, &[&[i64]]); 4] = [
        ("B3", &[&[1, 0, 0], &[0, -1, 1]]),
        ("B3", &[&[1, 1, 0], &[0, 0, 1], &[-1, 0, 2]]),
        ("G2", &[&[1, 0], &[-1, 1], &[2, -1]]),
        ("A2", &[&[1, 0], &[0, 1], &[1, -1]]),
    ];
    for (label, weights) in cases {
        let d = weights.len() as u32;
        let rs = Arc::new(RootSystem::from_label(label).unwrap());
        let m = Arc::new(law(1, d));
        let a = Arc::new(law(0, d));
        let cm = FgaContext::new(Arc::clone(&rs), Arc::clone(&m), d).unwrap();
        let ca = FgaContext::new(Arc::clone(&rs), Arc::clone(&a), d).unwrap();
        let ws: Vec<Weight> = weights.iter().map(|w| Weight(w.to_vec())).collect();

        // Characteristic-class path.
        let space = ClassSpace::new(m.ring(), rs.rank(), d).unwrap();
        let calc = Calculus::new(&m, space).unwrap();
        let roots = ws.iter().map(|w| cm.x_of_weight(w).into_series()).collect();
        let bundle = BundleExpr::Bundle(RootBundle { roots }).dual();
        let terms: Vec<(i32, BundleExpr)> = (1..=d as usize)
            .map(|l| (if l % 2 == 0 { 1 } else { -1 }, bundle.clone().exterior(l)))
            .collect();
        let chern = calc.virtual_class(&terms).unwrap().class(d as usize);
        let lhs = SymmetricSlice::from_series(&chern, d)
            .to_integers()
            .unwrap();

        // Deformation path, scaled by the congruence constant.
        let product = ws
            .iter()
            .try_fold(cm.one(), |acc, w| acc.mul(&cm.x_of_weight(w)))
            .unwrap();
        let moved = deform(&ca, &product).unwrap();
        let sign: i64 = if d % 2 == 1 { 1 } else { -1 };
        let fact: i64 = (1..d as i64).product();
        let rhs: Vec<BigInt> = moved
            .leading_form(d)
            .unwrap()
            .to_integers()
            .unwrap()
            .into_iter()
            .map(|x| x * sign * fact)
            .collect();

        let rows = invariant_slice(&rs, &a, d, None)
            .unwrap()
            .0
            .integer_rows()
            .unwrap();
        let slice = EchelonLattice::from_rows(lhs.len(), rows.iter().map(Vec::as_slice));
        let diff: Vec<BigInt> = lhs.iter().zip(&rhs).map(|(x, y)| x - y).collect();
        assert!(slice.contains(&diff), "{label} {weights:?}");
    }
}
