use grasscat::ar_tubes::{ar_sequence, tau_orbit, tube_fixtures};
use grasscat::census::{run_census, verify_conjectures, CensusOptions};
use grasscat::cm::{build_profile, build_rank1, lattice_diagram_data};
use grasscat::homological::{ext1, is_indecomposable, is_rigid, syzygy};
use grasscat::rims::{parse_profile, parse_rim, ArMiddle};
use grasscat::roots::{enumerate_degree2_real_roots, expected_rigid_rank2_count};

fn p(s: &str) -> grasscat::rims::Profile {
    parse_profile(s).unwrap()
}

#[test]
fn ext_between_interlacing_rims() {
    let e = ext1(&build_rank1(&parse_rim("135@(3,6)").unwrap()), &build_rank1(&parse_rim("246@(3,6)").unwrap())).unwrap();
    assert_eq!(e.exponents, vec![1, 1]);
    assert_eq!(e.describe(), "C ⊕ C");
    // a two-peak rim against its syzygy has Ext of length the minimal slope
    let i = parse_rim("145@(3,8)").unwrap();
    let m = build_rank1(&i);
    let e = ext1(&m, &syzygy(&m).unwrap()).unwrap();
    assert_eq!(e.exponents, vec![i.slopes().min_slope]);
}

#[test]
fn rigid_rank_two_examples() {
    for s in ["135|246@(3,6)", "1246|3578@(4,8)", "147|258@(3,9)"] {
        let m = build_profile(&p(s)).unwrap();
        assert!(is_rigid(&m).unwrap(), "{s}");
        assert!(is_indecomposable(&m).unwrap(), "{s}");
    }
    let pair = parse_rim("1357@(4,8)").unwrap().classify_pair(&parse_rim("2468@(4,8)").unwrap()).unwrap();
    assert_eq!((pair.interlacing_degree, pair.tight), (4, false));
    assert_eq!(pair.poset().as_deref(), Some("(1^4,2)"));
    assert!(!is_rigid(&build_profile(&p("1357|2468@(4,8)")).unwrap()).unwrap());
}

#[test]
fn small_censuses_match_counts() {
    let opts = CensusOptions::default();
    for (k, n, rigid) in [(3, 6, 2), (3, 7, 14), (3, 8, 56)] {
        let r = run_census(k, n, &opts).unwrap();
        assert_eq!(r.counts.rigid, rigid, "({k},{n})");
        assert_eq!(r.counts.real as u64, expected_rigid_rank2_count(k, n));
        assert!(r.fixture_diffs.is_empty(), "{:?}", r.fixture_diffs);
        assert!(r.swap_closed_real && r.fiber_defects.is_empty());
        let c = verify_conjectures(&r);
        assert!(c.tight_pairs_rigid.holds && c.high_interlacing_not_rigid.holds && c.counting.holds);
        assert_eq!(enumerate_degree2_real_roots(k, n).len() * 2, r.counts.real);
    }
}

#[test]
fn ar_sequence_middle_terms() {
    let s = ar_sequence(&parse_rim("145@(3,8)").unwrap()).unwrap();
    assert_eq!(s.middle, ArMiddle::Profile(p("246|135@(3,8)")));
    assert!(s.middle_rigid && s.middle_indecomposable && s.additive && s.right_is_syzygy);
    let s = ar_sequence(&parse_rim("134@(3,8)").unwrap()).unwrap();
    assert!(matches!(s.middle, ArMiddle::Decomposition { .. }));
    assert!(!s.middle_indecomposable && s.middle_rigid);
}

#[test]
fn orbits_and_fixtures() {
    let o = tau_orbit(&p("145@(3,9)")).unwrap();
    assert_eq!(o.period, 6);
    let o = tau_orbit(&p("126@(3,9)")).unwrap();
    assert_eq!(o.period, 3);
    assert!(tau_orbit(&p("123@(3,9)")).is_err());
    assert_eq!(tube_fixtures(3, 9).len(), 14);
    assert_eq!(tube_fixtures(4, 8).len(), 15);
}

#[test]
fn lattice_picture_geometry() {
    let d = lattice_diagram_data(&p("145@(3,8)"));
    assert_eq!(d.columns.len(), 9);
    assert_eq!(d.layers.len(), 1);
    // the rim goes down along rim labels and up along the others
    let h = &d.layers[0];
    assert_eq!(h[8] - h[0], 8 - 2 * 3);
    assert!(h.windows(2).all(|w| (w[0] - w[1]).abs() == 1));
}
