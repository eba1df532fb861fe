//! Acceptance suite: one test per criterion, each printing a PASS line
//! with the measured values once its assertions hold.

use std::collections::BTreeSet;
use std::time::Instant;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use tilings_core::blocks::{block_admissibility, closure, derive_atomics, Rule};
use tilings_core::engine::{
    decompositions, deflate, expand_det, family_mate, hier_equiv_check, periodicity_scan,
    square_halves, Deflation, Transforms,
};
use tilings_core::solver::{
    count_tilings, count_tilings_bruteforce, torus_search, verify_patch, Budget, Outcome, Region,
};
use tilings_core::symbol::DigitSet;
use tilings_core::synth::{
    atomic_tiles, build_marked_supertile, pair_tiles, shift_law_check, synthesize, SupertileContext,
};
use tilings_core::tile::TileName;
use tilings_core::{catalogue, census, Atom, Symbol, TileSet};

fn sym(s: &str) -> Symbol {
    s.parse().unwrap()
}

fn names(set: &TileSet) -> BTreeSet<String> {
    set.names().map(|n| n.to_string()).collect()
}

fn random_det(rng: &mut impl Rng) -> Symbol {
    Symbol::deterministic(
        rng.gen_range(0..4),
        rng.gen_range(0..4),
        rng.gen_range(0..4),
        rng.gen_range(0..4),
    )
}

fn random_full(rng: &mut impl Rng) -> Symbol {
    Symbol([(); 4].map(|_| DigitSet::from_mask(rng.gen_range(1..16))))
}

#[test]
fn criterion_01_census_exactness() {
    let t0 = Instant::now();
    let c = census();
    let elapsed = t0.elapsed();
    assert_eq!(c.full, 50625);
    assert_eq!(c.self_paired, 135);
    assert_eq!(c.classes, 25380);
    assert_eq!(c.det_symbols, 256);
    assert_eq!(c.det_classes, 128);
    assert!(elapsed.as_secs_f64() < 5.0, "census took {elapsed:?}");
    println!(
        "criterion 01 PASS: census full=50625 self_paired=135 classes=25380 det=256/128 in {elapsed:?}"
    );
}

#[test]
fn criterion_02_t1_closures_and_admissibility() {
    for (rules, want, size) in [
        (vec![Rule::Pi], "TPi", 16),
        (vec![Rule::Par], "TPar", 17),
        (vec![Rule::Xi], "TXi", 18),
        (vec![Rule::PibarEven, Rule::PibarOdd], "TPibar", 26),
    ] {
        let got = closure(&rules).unwrap();
        let expect = catalogue(want).unwrap();
        assert_eq!(got.len(), size);
        assert_eq!(names(&got), names(&expect), "closure vs listed {want}");
    }
    // element-for-element: T_pibar = T1 minus [02]
    let t1 = catalogue("T1").unwrap();
    let pibar = catalogue("TPibar").unwrap();
    assert_eq!(
        names(&t1.minus(&pibar, "d")),
        BTreeSet::from(["[02]".to_string()])
    );
    // both admissibility tables
    let t = |n: &str| catalogue(n).unwrap();
    let row =
        |s: &TileSet| -> Vec<&str> { block_admissibility(s).iter().map(|b| b.as_str()).collect() };
    assert_eq!(row(&t("TPi")), ["U", "I"]);
    assert_eq!(row(&t("TPar")), ["J"]);
    assert_eq!(row(&t("TXi")), ["U", "H"]);
    assert_eq!(row(&t("TPibar")), ["U", "J", "H"]);
    assert_eq!(row(&t("TPi").union(&t("TPar"), "u")), ["U", "J", "I"]);
    assert_eq!(row(&t("TPi").union(&t("TXi"), "u")), ["U", "I", "H"]);
    assert_eq!(row(&t("TPar").union(&t("TXi"), "u")), ["U", "J", "H"]);
    assert_eq!(
        row(&t("TPi").union(&t("TPar"), "u").union(&t("TXi"), "u")),
        ["U", "J", "I", "H"]
    );
    assert_eq!(row(&t("T1")), ["U", "J", "I", "H"]);
    println!(
        "criterion 02 PASS: closures 16/17/18/26 element-for-element, admissibility rows hold"
    );
}

#[test]
fn criterion_03_worked_examples() {
    let a = synthesize(&sym("1101")).unwrap();
    let b = synthesize(&sym("1023")).unwrap();
    assert_eq!(a.len(), 67, "T_1101 cardinality");
    assert_eq!(b.len(), 65, "T_1023 cardinality");
    // the listing for 1101 beyond the 35 common tiles, with the two
    // discrepancies in the printed source resolved by the derivation
    // (recorded in the project notes): [01|32] for "[11|32]", and the
    // pair verticals 02/22/32 in the second-slot row
    let common = catalogue("T+2")
        .unwrap()
        .union(&catalogue("T0").unwrap(), "common");
    let extra = names(&a.minus(&common, "x"));
    let expect: BTreeSet<String> = [
        "[13|00]", "[00|30]", "[10|+]", "[11|+]", "[12|+]", "[01|32]", "[12|02]", "[13|+]",
        "[10|33]", "[11|31]", "[12|23]", "[13|21]", "[13|11]", "[12|13]", "[30|+]", "[-32|+]",
        "[31|10]", "[-33|10]", "[30|02]", "[-32|02]", "[31|22]", "[-33|22]", "[31|32]", "[-33|32]",
        "[31|33]", "[-33|33]", "[30|23]", "[-32|23]", "[30|13]", "[-32|13]", "[31|01]", "[-33|01]",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    assert_eq!(extra, expect, "T_1101 listing");
    assert_eq!(extra.len(), 32);
    assert_eq!(names(&b.minus(&common, "x")).len(), 30);
    println!("criterion 03 PASS: |T_1101| = 67 and |T_1023| = 65, listings match");
}

#[test]
fn criterion_04_oracle_equivalence() {
    // atomic_tables() itself asserts fixture == derivation cell by cell;
    // repeat explicitly so a mismatch names the offending cell here too
    let derived = derive_atomics().unwrap();
    for atom in Atom::all() {
        let f: BTreeSet<String> = atomic_tiles(atom).iter().map(|t| t.to_string()).collect();
        let d: BTreeSet<String> = derived.atomic[&atom]
            .iter()
            .map(|t| t.to_string())
            .collect();
        assert_eq!(f, d, "atomic cell {atom}");
    }
    for p in Atom::all() {
        for c in Atom::all() {
            let f: BTreeSet<String> = pair_tiles(p, c).iter().map(|t| t.to_string()).collect();
            let d: BTreeSet<String> = derived.pairs[&(p, c)]
                .iter()
                .map(|t| t.to_string())
                .collect();
            assert_eq!(f, d, "pair cell {p}->{c}");
        }
    }
    println!("criterion 04 PASS: fixture equals derivation on 16 atomic sets and 256 pairs");
}

#[test]
fn criterion_05_shift_law() {
    for s in 0..4u8 {
        for t in 0..4 {
            for u in 0..4 {
                for v in 0..4 {
                    let s = Symbol::deterministic(s, t, u, v);
                    assert!(shift_law_check(&s).unwrap(), "shift law fails for {s}");
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..500 {
        let s = random_full(&mut rng);
        assert!(shift_law_check(&s).unwrap(), "shift law fails for {s}");
    }
    println!(
        "criterion 05 PASS: shift law holds for all 256 deterministic and 500 random full symbols"
    );
}

#[test]
fn criterion_06_mirror_law() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..100 {
        let s = random_det(&mut rng);
        let p = s.partner();
        for n in 1..=3 {
            let flipped = expand_det(&s, n).flip_vertical().recoded(2);
            let target = expand_det(&p, n);
            assert!(
                tilings_core::engine::congruent(&flipped, &target, Transforms::TRANSLATIONS),
                "mirror law fails for {s} at level {n}"
            );
        }
    }
    println!("criterion 06 PASS: flip + code swap matches the paired symbol, 100 symbols, n <= 3");
}

#[test]
fn criterion_07_distinctness() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut done = 0;
    while done < 50 {
        let a = random_det(&mut rng);
        let b = random_det(&mut rng);
        if a.equivalent(&b) {
            continue;
        }
        assert!(
            !hier_equiv_check(&a, &b, 3).unwrap(),
            "level-3 supertiles of {a} and {b} should be distinct"
        );
        done += 1;
    }
    println!("criterion 07 PASS: 50 non-equivalent pairs distinct at level 3");
}

#[test]
fn criterion_08_nonunique_decomposition() {
    // all twelve family members with s != u share their square halves
    // with the shifted mate; for the s^u = 1 members that mate is S+1,
    // the spec's 0011/1100 example among them
    for a in 0..4u8 {
        for delta in 1..4u8 {
            let s = Symbol::deterministic(a, a, a ^ delta, a ^ delta);
            let mate = family_mate(&s).unwrap();
            assert_eq!(mate, s.shift(tilings_core::FramingCode::new(delta)));
            // level 2: framed patches coincide exactly (crosswise)
            let (l2, r2) = square_halves(&expand_det(&s, 2));
            let (ml2, mr2) = square_halves(&expand_det(&mate, 2));
            assert!(
                (l2 == mr2 && r2 == ml2) || (l2 == ml2 && r2 == mr2),
                "framed halves differ at level 2 for {s}"
            );
            // levels 3 and 4: configurations coincide with one uniform
            // code shift (the relabelling between the two markings)
            for n in [3u32, 4] {
                let (l, r) = square_halves(&expand_det(&s, n));
                let (ml, mr) = square_halves(&expand_det(&mate, n));
                let ok = [0u8, 1, 2, 3].iter().any(|&k| {
                    (l.recoded(k) == mr && r.recoded(k) == ml)
                        || (l.recoded(k) == ml && r.recoded(k) == mr)
                });
                assert!(ok, "halves fail to coincide up to a shift for {s} at {n}");
            }
            // exactly 2 parses of a level-2 half under {S, mate}
            let (l2, _) = square_halves(&expand_det(&s, 2));
            let parses = decompositions(&l2, &[s, mate], 1);
            assert_eq!(parses.len(), 2, "parses of the {s} half");
        }
    }
    // the s = u members are periodic at level 3
    for a in 0..4u8 {
        let s = Symbol::deterministic(a, a, a, a);
        let periods = periodicity_scan(&expand_det(&s, 3));
        assert!(!periods.is_empty(), "no period found for {s}");
    }
    println!(
        "criterion 08 PASS: 12 family members share halves with their mates (framed at level 2, \
         up to the relabelling shift at 3-4), each half parses exactly 2 ways, s=u members periodic"
    );
}

#[test]
fn criterion_09_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..20 {
        let s = random_det(&mut rng);
        for n in 1..=4 {
            let p = expand_det(&s, n);
            match deflate(&p, &s).unwrap() {
                Deflation::Parent(q) => assert_eq!(
                    q.normalized().dominoes,
                    expand_det(&s, n - 1).normalized().dominoes,
                    "round trip for {s} at {n}"
                ),
                Deflation::NoDecomposition => panic!("round trip failed for {s} at level {n}"),
            }
        }
    }
    println!("criterion 09 PASS: deflate inverts expand for 20 symbols, n <= 4");
}

#[test]
fn criterion_10_supertile_admissibility() {
    for rules in [
        vec![Rule::Pi],
        vec![Rule::Par],
        vec![Rule::Xi],
        vec![Rule::PibarEven, Rule::PibarOdd],
    ] {
        let set = closure(&rules).unwrap();
        for level in [1u32, 2] {
            let patch =
                build_marked_supertile(&SupertileContext::Rules(rules.clone()), level).unwrap();
            assert_eq!(patch.len(), if level == 1 { 8 } else { 32 });
            let violations = verify_patch(&set, &patch);
            assert!(violations.is_empty(), "{violations:?}");
        }
    }
    let s = sym("1101");
    let set = synthesize(&s).unwrap();
    for level in [1u32, 2] {
        let patch = build_marked_supertile(&SupertileContext::Symbol(s), level).unwrap();
        let violations = verify_patch(&set, &patch);
        assert!(violations.is_empty(), "{violations:?}");
        if level == 2 {
            // the cornered tiles of the doubled-domino patch span exactly
            // a 3x7 window
            let corners: Vec<(i64, i64)> = patch
                .cells
                .iter()
                .filter(|(_, (t, _))| t.cornered)
                .map(|(&c, _)| c)
                .collect();
            let xs: Vec<i64> = corners.iter().map(|c| c.0).collect();
            let ys: Vec<i64> = corners.iter().map(|c| c.1).collect();
            let w = xs.iter().max().unwrap() - xs.iter().min().unwrap() + 1;
            let h = ys.iter().max().unwrap() - ys.iter().min().unwrap() + 1;
            assert_eq!((w.min(h), w.max(h)), (3, 7), "cornered span");
        }
    }
    println!(
        "criterion 10 PASS: marked supertiles for all four rule contexts and T_1101 verify with zero violations"
    );
}

#[test]
fn criterion_11_aperiodicity_falsification() {
    let set = synthesize(&sym("1101")).unwrap();
    let t0 = Instant::now();
    for p in [2usize, 4, 6] {
        for q in [2usize, 4, 6] {
            let r = torus_search(&set, p, q, Budget { nodes: 50_000_000 });
            assert_eq!(
                r,
                Outcome::Unsat,
                "torus {p}x{q} must report NONE, not a witness or timeout"
            );
        }
    }
    let elapsed = t0.elapsed();
    assert!(
        elapsed.as_secs() < 600,
        "torus sweep exceeded the desk budget: {elapsed:?}"
    );
    // 8x8 may time out under a small budget but must never yield a witness
    if let Outcome::Sat(_) = torus_search(&set, 8, 8, Budget { nodes: 2_000_000 }) {
        panic!("8x8 torus produced a periodic witness")
    }
    println!(
        "criterion 11 PASS: no periodic tiling of T_1101 on any even torus up to 6x6 ({elapsed:?}), 8x8 witness-free"
    );
}

#[test]
fn criterion_12_solver_oracle() {
    let t1 = catalogue("T1").unwrap();
    let all: Vec<TileName> = t1.names().copied().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for trial in 0..5 {
        let k = rng.gen_range(2..=4usize);
        let subset: Vec<TileName> = all.choose_multiple(&mut rng, k).copied().collect();
        let set = TileSet::from_names(&format!("subset{trial}"), subset);
        for (w, h) in [
            (1, 1),
            (2, 1),
            (1, 2),
            (2, 2),
            (3, 1),
            (1, 3),
            (2, 3),
            (3, 2),
        ] {
            let fast = match count_tilings(&set, &Region::free(w, h), Budget::default()) {
                Outcome::Count(c) => c,
                other => panic!("count returned {other:?}"),
            };
            let slow = count_tilings_bruteforce(&set, w, h);
            assert_eq!(fast, slow, "counts differ on {w}x{h} for subset {trial}");
        }
    }
    println!(
        "criterion 12 PASS: solver counts equal brute force on all regions up to 2x3, 5 subsets"
    );
}
