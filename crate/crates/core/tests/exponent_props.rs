use std::sync::Arc;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fgalg::exponent::{invariant_slice, lattice_exponent, tau, Exactness, TauOptions};
use fgalg::fgl::{BuiltinLaw, FormalGroupLaw};
use fgalg::rootsys::RootSystem;
use fgalg::series::{monomials_of_degree, CoeffRing};

fn builtin(b: BuiltinLaw, d: u32) -> FormalGroupLaw {
    FormalGroupLaw::builtin(b, &CoeffRing::Integers, d)
}

fn laws(d: u32) -> Vec<FormalGroupLaw> {
    vec![
        builtin(BuiltinLaw::Additive, d),
        builtin(BuiltinLaw::Multiplicative, d),
        builtin(BuiltinLaw::Lorentz, d),
        FormalGroupLaw::elliptic_integral([1, 0, 1, 0, 1], d.max(2)).unwrap(),
    ]
}

fn rs(label: &str) -> Arc<RootSystem> {
    Arc::new(RootSystem::from_label(label).unwrap())
}

fn m_to_a(label: &str, d: u32) -> u64 {
    let r = tau(
        &rs(label),
        &builtin(BuiltinLaw::Multiplicative, d + 2),
        &builtin(BuiltinLaw::Additive, d + 2),
        d,
        &TauOptions::default(),
    )
    .unwrap();
    r.tau
}

#[test]
fn first_exponent_is_one_everywhere() {
    for label in ["A1", "A2", "A3", "B3", "B4", "C2", "C3", "D4", "G2"] {
        let ls = laws(3);
        for from in &ls {
            for to in &ls {
                let r = tau(&rs(label), from, to, 1, &TauOptions::default()).unwrap();
                assert_eq!(r.tau, 1, "{label} {} -> {}", from.name(), to.name());
            }
        }
    }
}

#[test]
fn exponent_from_a_law_to_itself_is_one() {
    for (label, dmax) in [("A2", 4), ("B3", 3), ("C2", 4), ("G2", 4)] {
        for d in 1..=dmax {
            for f in laws(d) {
                let r = tau(&rs(label), &f, &f, d, &TauOptions::default()).unwrap();
                assert_eq!(r.tau, 1, "{label} d={d} {}", f.name());
                assert!(r.elementary_divisors.is_empty());
            }
        }
    }
}

#[test]
fn types_a_and_c_have_trivial_exponents() {
    for label in ["A1", "A2", "A3", "C2", "C3"] {
        for d in 1..=4 {
            let r = tau(
                &rs(label),
                &builtin(BuiltinLaw::Multiplicative, d),
                &builtin(BuiltinLaw::Additive, d),
                d,
                &TauOptions::default(),
            )
            .unwrap();
            assert_eq!((r.tau, r.exactness), (1, Exactness::Exact), "{label} d={d}");
        }
    }
}

#[test]
fn exponents_divide_the_torsion_bounds() {
    for (label, dmax) in [("B3", 4), ("D4", 3)] {
        for d in 1..=dmax {
            let t = m_to_a(label, d);
            assert_eq!((1u64 << d) % t, 0, "{label} d={d} tau={t}");
        }
    }
    for (d, zeta) in [(2, 1), (4, 2), (6, 3)] {
        let t = m_to_a("G2", d);
        assert_eq!((1u64 << zeta) % t, 0, "G2 d={d} tau={t}");
    }
}

/// Replaces `rows` by `U·rows` for a random unimodular `U`, then shuffles.
fn mix(rng: &mut ChaCha8Rng, rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let mut out = rows.to_vec();
    let n = out.len();
    if n > 1 {
        for _ in 0..4 * n {
            let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
            if i != j {
                let k = BigInt::from(rng.gen_range(-3i64..=3));
                let add: Vec<BigInt> = out[j].iter().map(|x| x * &k).collect();
                for (a, b) in out[i].iter_mut().zip(add) {
                    *a += b;
                }
            }
        }
    }
    for i in (1..n).rev() {
        out.swap(i, rng.gen_range(0..=i));
    }
    if n > 0 && rng.gen_bool(0.5) {
        let i = rng.gen_range(0..n);
        out[i] = out[i].iter().map(|x| -x).collect();
    }
    out
}

#[test]
fn exponent_ignores_the_choice_of_generators() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7a0);
    for (label, d) in [("B3", 2), ("B3", 3), ("D4", 2), ("G2", 4), ("A3", 3)] {
        let r = rs(label);
        let from = builtin(BuiltinLaw::Multiplicative, d);
        let to = builtin(BuiltinLaw::Additive, d);
        let l = invariant_slice(&r, &from, d, None)
            .unwrap()
            .0
            .integer_rows()
            .unwrap();
        let lp = invariant_slice(&r, &to, d, None)
            .unwrap()
            .0
            .integer_rows()
            .unwrap();
        let cols = monomials_of_degree(r.rank(), d).len();
        let base = lattice_exponent(cols, &l, &lp, d).unwrap();
        for _ in 0..5 {
            let mixed = lattice_exponent(cols, &mix(&mut rng, &l), &mix(&mut rng, &lp), d).unwrap();
            assert_eq!(mixed, base, "{label} d={d}");
        }
    }
}
