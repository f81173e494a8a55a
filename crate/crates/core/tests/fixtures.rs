use cubekit::census::{find_one_cusp_seed, find_two_cusp_examples, SearchOptions};
use cubekit::cycles::MonodromyClass::{Identity, MinusIdentity, Rotation4};
use cubekit::{fixtures, invariant_report, Cubulation, Exec};

#[test]
fn fixtures_are_the_first_search_hits() {
    for exec in [Exec::Sequential, Exec::Parallel] {
        let opts = SearchOptions { exec, ..Default::default() };
        assert_eq!(find_one_cusp_seed(&opts).unwrap(), fixtures::seed());
        let (r4, minus_i) = find_two_cusp_examples(&opts).unwrap();
        assert_eq!(r4, fixtures::two_cusps_r4());
        assert_eq!(minus_i, fixtures::two_cusps_minus_i());
    }
}

#[test]
fn fixture_reports() {
    let report = |c: &Cubulation| {
        let r = invariant_report(c).unwrap();
        assert!(r.orientable);
        (r.n, r.chi, r.total_section_volume, r.profile())
    };
    assert_eq!(report(&fixtures::example1()), (1, 4, 96, vec![(4, Identity); 6]));
    assert_eq!(report(&fixtures::example2()), (2, 8, 192, vec![(2, Identity); 24]));
    assert_eq!(report(&fixtures::seed()), (1, 4, 96, vec![(24, Identity)]));
    assert_eq!(report(&fixtures::two_cusps_r4()), (1, 4, 96, vec![(20, Rotation4), (4, Rotation4)]));
    assert_eq!(report(&fixtures::two_cusps_minus_i()), (1, 4, 96, vec![(20, MinusIdentity), (4, MinusIdentity)]));
    assert_eq!(Cubulation::parse(fixtures::EXAMPLE1_CANONICAL).unwrap(), fixtures::example1());
}
