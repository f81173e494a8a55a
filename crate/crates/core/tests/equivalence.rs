mod common;

use std::time::{Duration, Instant};

use cubekit::canon::{canonical_relabeling, CanonOptions};
use cubekit::{are_equivalent, canonical_form, fixtures, CanonicalForm, Cubulation};
use proptest::prelude::*;

fn fixture_set() -> Vec<(&'static str, Cubulation)> {
    vec![
        ("example1", fixtures::example1()),
        ("example2", fixtures::example2()),
        ("seed", fixtures::seed()),
        ("two cusps R4", fixtures::two_cusps_r4()),
        ("two cusps -I", fixtures::two_cusps_minus_i()),
    ]
}

#[test]
fn invariant_under_random_relabelings() {
    let mut rng = common::rng(7);
    for (name, c) in fixture_set() {
        let form = canonical_form(&c).unwrap();
        for _ in 0..1000 {
            let g = common::random_relabeling(c.n(), &mut rng);
            assert_eq!(canonical_form(&c.relabel(&g)).unwrap(), form, "{name}");
        }
    }
}

#[test]
fn fixtures_are_pairwise_inequivalent() {
    let forms: Vec<CanonicalForm> = fixture_set().iter().map(|(_, c)| canonical_form(c).unwrap()).collect();
    for i in 0..forms.len() {
        for j in i + 1..forms.len() {
            assert_ne!(forms[i], forms[j]);
        }
    }
    assert!(!are_equivalent(&fixtures::example1(), &fixtures::seed()).unwrap());
}

#[test]
fn canonicalization_is_idempotent() {
    for (_, c) in fixture_set() {
        let (form, g) = canonical_relabeling(&c, &CanonOptions::default()).unwrap();
        let rep = form.decode().unwrap();
        assert_eq!(rep, c.relabel(&g));
        assert_eq!(canonical_form(&rep).unwrap(), form);
        assert_eq!(rep.relabel(&cubekit::Relabeling::identity(rep.n())), rep);
    }
}

#[test]
fn small_inputs_are_fast() {
    for n in 1..=3 {
        let c = common::random_connected(n, 99, true);
        let start = Instant::now();
        canonical_form(&c).unwrap();
        if n <= 2 {
            assert!(start.elapsed() < Duration::from_secs(1));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn random_relabeling_keeps_form(n in 1usize..=3, seed in any::<u64>(), orientable in any::<bool>(), g_seed in any::<u64>()) {
        let c = common::random_connected(n, seed, orientable);
        let g = common::random_relabeling(n, &mut common::rng(g_seed));
        let form = canonical_form(&c).unwrap();
        prop_assert_eq!(canonical_form(&c.relabel(&g)).unwrap(), form.clone());
        prop_assert_eq!(form.n(), n);
        prop_assert_eq!(CanonicalForm::from_hex(&form.to_hex()).unwrap(), form);
    }

    #[test]
    fn relabeling_keeps_cusps(n in 1usize..=3, seed in any::<u64>(), g_seed in any::<u64>()) {
        let c = common::random_connected(n, seed, true);
        let g = common::random_relabeling(n, &mut common::rng(g_seed));
        let sorted = |c: &Cubulation| {
            let mut p = cubekit::cycles::cusp_profile(c);
            p.sort();
            p
        };
        prop_assert_eq!(sorted(&c), sorted(&c.relabel(&g)));
        prop_assert_eq!(c.is_orientable(), c.relabel(&g).is_orientable());
    }
}
