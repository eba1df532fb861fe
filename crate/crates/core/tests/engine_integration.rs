//! Deeper engine checks that go beyond the per-module unit tests.

use tilings_core::engine::{deflate, expand_det, Deflation};
use tilings_core::Symbol;

#[test]
fn level_five_locked_by_the_deflation_oracle() {
    // levels three to five of the 1101 supertile are pinned by the
    // round-trip rather than a transcribed picture
    let sym: Symbol = "1101".parse().unwrap();
    let p5 = expand_det(&sym, 5);
    assert_eq!(p5.len(), 1024);
    match deflate(&p5, &sym).unwrap() {
        Deflation::Parent(p4) => {
            assert_eq!(
                p4.normalized().dominoes,
                expand_det(&sym, 4).normalized().dominoes
            )
        }
        Deflation::NoDecomposition => panic!("level 5 must deflate"),
    }
    // and a wrong symbol refuses at this scale too
    let other: Symbol = "1102".parse().unwrap();
    assert_eq!(deflate(&p5, &other).unwrap(), Deflation::NoDecomposition);
}

#[test]
fn non_family_supertiles_parse_uniquely() {
    use tilings_core::engine::decompositions;
    for s in ["0123", "1101", "0231"] {
        let sm: Symbol = s.parse().unwrap();
        for n in [2u32, 3] {
            let p = expand_det(&sm, n);
            let parses = decompositions(&p, &[sm], 1);
            assert_eq!(parses.len(), 1, "{s} at level {n}");
        }
    }
}

#[test]
fn family_supertile_parses_factor_over_halves() {
    use tilings_core::engine::decompositions;
    // for 0011 the whole level-2 supertile parses into level-1 pieces in
    // more than one way under the family pair: each square half does
    let s: Symbol = "0011".parse().unwrap();
    let mate: Symbol = "1100".parse().unwrap();
    let p = expand_det(&s, 2);
    let parses = decompositions(&p, &[s, mate], 1);
    assert!(parses.len() > 1, "family supertile should be ambiguous");
}
