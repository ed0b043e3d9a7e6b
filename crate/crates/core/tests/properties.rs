mod common;

use std::sync::Arc;

use proptest::prelude::*;
use schreier::catalog::{Catalog, Payload};
use schreier::cleavage::{apply_change, canonical_cleavage, extract_action, kernel_units, transport, CleavageChange};
use schreier::cohomology::{coboundary, cohomologous, enumerate_cocycles, h2, verify_exact_sequences, Cocycle2, NModule};
use schreier::fibration::{analyze, check_closure_lemmas, product_check};
use schreier::generators::{cyclic_group, cyclic_monoid, cyclic_reduction};
use schreier::{FiniteMonoid, MonoidHom};

fn divisor_pair() -> impl Strategy<Value = (usize, usize)> {
    (1usize..=12).prop_flat_map(|a| {
        let divs: Vec<usize> = (1..=a).filter(|d| a % d == 0).collect();
        (Just(a), proptest::sample::select(divs))
    })
}

/// `C(i, p) -> C(1, p)`: collapse the tail onto the cycle.
fn cyclic_collapse(index: usize, period: usize) -> MonoidHom {
    let m = Arc::new(cyclic_monoid(index, period).unwrap());
    let n = Arc::new(cyclic_group(period).unwrap());
    let map = (0..index + period).map(|k| k % period).collect();
    MonoidHom::new(m, n, map).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn reductions_satisfy_closure_lemmas((a, b) in divisor_pair()) {
        let h = cyclic_reduction(a, b).unwrap();
        let r = analyze(&h);
        prop_assert_eq!(&r.pcar, &common::pcar(&h));
        prop_assert_eq!(&r.car, &common::car(&h));
        prop_assert!(r.car.iter().all(|x| r.pcar.contains(x)));
        for v in check_closure_lemmas(&h) {
            prop_assert!(v.passed, "{}", v);
        }
    }

    #[test]
    fn collapses_agree_with_oracle(index in 0usize..5, period in 1usize..5) {
        let h = cyclic_collapse(index, period);
        let r = analyze(&h);
        prop_assert_eq!(&r.pcar, &common::pcar(&h));
        prop_assert_eq!(&r.car, &common::car(&h));
        for v in check_closure_lemmas(&h) {
            prop_assert!(v.passed, "{}", v);
        }
    }

    #[test]
    fn products_preserve_fibrations(p in divisor_pair(), q in divisor_pair()) {
        prop_assume!(p.0 * q.0 <= 36);
        let h1 = cyclic_reduction(p.0, p.1).unwrap();
        let h2 = cyclic_reduction(q.0, q.1).unwrap();
        for v in product_check(&h1, &h2).unwrap() {
            prop_assert!(v.passed, "{}", v);
        }
    }

    #[test]
    fn coboundary_shift_stays_in_class(k in 1usize..=3, j in 2usize..=3, pick in any::<prop::sample::Index>(), tau_seed in proptest::collection::vec(0usize..16, 3)) {
        let n = Arc::new(cyclic_group(k).unwrap());
        let a = Arc::new(cyclic_group(j).unwrap());
        let m = Arc::new(NModule::trivial(&n, &a).unwrap());
        let cocycles = enumerate_cocycles(&m, true).unwrap();
        let g = &cocycles[pick.index(cocycles.len())];
        let mut tau: Vec<usize> = (0..k).map(|i| tau_seed[i] % j).collect();
        tau[n.identity()] = a.identity();
        let delta = coboundary(&m, &tau);
        let shifted: Vec<usize> = g.gamma.iter().zip(&delta).map(|(&x, &d)| a.mul(x, d)).collect();
        let h = Cocycle2::new(&m, shifted.clone()).unwrap();
        prop_assert!(cohomologous(g, &h).is_some());
        let classes = h2(&m, true).unwrap();
        prop_assert_eq!(classes.class_index(&g.gamma), classes.class_index(&shifted));
    }
}

fn hom(id: &str) -> MonoidHom {
    match Catalog::builtin().get(id).unwrap().payload.clone() {
        Payload::Hom(h) => h,
        _ => unreachable!(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn change_of_cleavage_formulas(id in proptest::sample::select(vec!["q8_over_klein4", "c4_over_c2", "s3_over_c2", "c6_to_c3", "l2_over_c2_lax"]), seed in proptest::collection::vec(any::<prop::sample::Index>(), 8)) {
        let h = hom(id);
        let cl = canonical_cleavage(&h).unwrap();
        let units = kernel_units(&cl);
        let n = h.target();
        let eta: Vec<usize> = n
            .elements()
            .map(|b| if b == n.identity() { cl.kernel().identity() } else { units[seed[b % seed.len()].index(units.len())] })
            .collect();
        let change = CleavageChange::new(&cl, eta.clone()).unwrap();
        let (before, after, verdict) = transport(&change);
        prop_assert!(verdict.passed, "{}", verdict);
        prop_assert!(apply_change(&before, &eta).unwrap() == after);
        prop_assert!(extract_action(&cl.twist(&eta).unwrap()) == after);
    }

    #[test]
    fn exact_reports_are_deterministic(seed in any::<u64>()) {
        let cl = canonical_cleavage(&hom("q8_over_klein4")).unwrap();
        let a = verify_exact_sequences(&cl, seed).unwrap().to_json();
        let b = verify_exact_sequences(&cl, seed).unwrap().to_json();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn monoid_json_round_trip(index in 0usize..6, period in 1usize..6) {
        let m = cyclic_monoid(index, period).unwrap();
        let text = serde_json::to_string(&m).unwrap();
        let back: FiniteMonoid = serde_json::from_str(&text).unwrap();
        prop_assert!(m.same_table(&back));
    }
}
