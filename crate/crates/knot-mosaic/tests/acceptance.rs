//! Acceptance gate: the seven headline checks for the 7-mosaic survey
//! engine, reported one line each. Criterion 3 re-runs the full survey and
//! dominates the runtime (tens of minutes single-threaded).

use std::collections::BTreeSet;
use std::sync::OnceLock;

use knot_mosaic::cli::expected_survey_names;
use knot_mosaic::invariants::{
    alexander, bracket_mosaic, fingerprint_mosaic, jones, kauffman_bracket, to_diagram_code,
    LaurentPoly,
};
use knot_mosaic::knottable::{builtin_exclusions, builtin_table};
use knot_mosaic::layouts::{derive_layouts, layout_catalog, tile_bounds};
use knot_mosaic::mosaic::{parse_mosaic, Mosaic};
use knot_mosaic::moves::{apply_move, builtin_rules, match_moves, reduce};
use knot_mosaic::search::{prune, run_survey, surviving_names, Prune, PruneReason, SurveyResult};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn report(criterion: usize, what: &str, ok: bool) {
    println!("criterion {criterion} ({what}): {}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {criterion} ({what}) failed");
}

/// One survey per layout, shared across criteria.
fn surveys() -> &'static [Vec<SurveyResult>; 3] {
    static SURVEYS: OnceLock<[Vec<SurveyResult>; 3]> = OnceLock::new();
    SURVEYS.get_or_init(|| {
        let table = builtin_table();
        let excl = builtin_exclusions();
        [1, 2, 3].map(|id| run_survey(&[id], 9, &table, &excl).expect("survey runs"))
    })
}

fn result_mosaic(r: &SurveyResult) -> Mosaic {
    parse_mosaic(&r.mosaic.join("\n")).expect("stored mosaics parse")
}

#[test]
fn criterion_1_tile_bounds() {
    let expected =
        [(4, (12, 12)), (5, (17, 17)), (6, (22, 32)), (7, (27, 41)), (8, (32, 60)), (9, (37, 73))];
    let ok = expected.iter().all(|&(n, want)| tile_bounds(n).unwrap() == want)
        && tile_bounds(7).unwrap() == (27, 41);
    report(1, "tile-count bounds 5n-8 and n^2-4 / n^2-8 for n=4..=9", ok);
}

#[test]
fn criterion_2_layout_catalog() {
    let derived = derive_layouts();
    let catalog = layout_catalog();
    let counts: Vec<usize> = catalog.iter().map(|l| l.non_blank_count).collect();
    let distinct: BTreeSet<usize> = counts.iter().copied().collect();
    let ok = derived.layouts.len() == catalog.len()
        && derived
            .layouts
            .iter()
            .zip(catalog)
            .all(|(d, c)| d.mosaic.to_string() == c.mosaic.to_string())
        && distinct == BTreeSet::from([27, 29, 31, 32, 34, 36, 37, 39, 41])
        && counts.iter().filter(|&&c| c == 27).count() == 3
        && derived.outer_shells == 20
        && derived.first_two_row_options == 4;
    report(2, "derived layout catalog, tile counts, shell and first-row counts", ok);
}

#[test]
fn criterion_3_survey_name_set() {
    let [s1, s2, s3] = surveys();
    let n1 = surviving_names(s1);
    let n2 = surviving_names(s2);
    let n3 = surviving_names(s3);
    let union: BTreeSet<String> = n1.union(&n2).cloned().chain(n3.iter().cloned()).collect();
    let expected = expected_survey_names();
    let missing: Vec<&String> = expected.difference(&union).collect();
    let extra: Vec<&String> = union.difference(&expected).collect();
    if !missing.is_empty() || !extra.is_empty() {
        eprintln!("missing: {missing:?}\nextra: {extra:?}");
    }
    let ok = union == expected && n2.is_subset(&n1) && n3.is_subset(&n1);
    report(3, "survey over layouts 1-3 yields exactly the 60 expected knots", ok);
}

#[test]
fn criterion_3b_survey_is_deterministic() {
    let table = builtin_table();
    let excl = builtin_exclusions();
    let a = run_survey(&[1], 12, &table, &excl).unwrap();
    let b = run_survey(&[1], 12, &table, &excl).unwrap();
    let ser = |rs: &[SurveyResult]| serde_json::to_string(rs).unwrap();
    report(3, "re-running the survey produces byte-identical output", ser(&a) == ser(&b));
}

#[test]
fn criterion_4_invariant_engine_properties() {
    // (a) Jones(1) = 1, odd determinant, Alexander symmetry for every
    // surveyed diagram
    let mut ok = true;
    let mut diagrams: Vec<Mosaic> = Vec::new();
    for r in surveys().iter().flatten() {
        let m = result_mosaic(r);
        let code = to_diagram_code(&m).unwrap();
        let v = jones(&code).unwrap();
        ok &= v.mul_monomial(1, -v.min_exp().unwrap_or(0)).eval_int(1) == 1;
        ok &= r.determinant % 2 == 1;
        let a = alexander(&code);
        ok &= normalized(&a) == normalized(&a.invert_variable());
        diagrams.push(m);
    }
    report(4, "Jones(1)=1, odd determinant, Alexander symmetry on all survey output", ok);

    // (b) the two bracket evaluation paths agree on random small diagrams
    let mut rng = StdRng::seed_from_u64(7);
    let mut checked = 0;
    let mut agree = true;
    'outer: loop {
        for m in &diagrams {
            if m.crossing_count() > 10 {
                continue;
            }
            // randomize crossing signs to vary the diagram
            let mut v = m.clone();
            for (r, c) in m.positions().collect::<Vec<_>>() {
                if v.get(r, c).is_crossing_like() && rng.gen_bool(0.5) {
                    v.set(r, c, v.get(r, c).switch_crossing());
                }
            }
            let code = to_diagram_code(&v).unwrap();
            agree &= bracket_mosaic(&v).unwrap() == kauffman_bracket(&code);
            checked += 1;
            if checked >= 200 {
                break 'outer;
            }
        }
    }
    report(4, "tangle-contraction bracket equals the state-sum bracket (200 diagrams)", agree);

    // (c) fingerprints are invariant under 1,000 random move applications
    // across 50 mosaics
    let rules = builtin_rules();
    let mut applications = 0;
    let mut invariant = true;
    let sample: Vec<&Mosaic> = diagrams.iter().take(50).collect();
    assert!(sample.len() >= 50, "survey yields at least 50 mosaics");
    while applications < 1000 {
        for m in &sample {
            let fp = fingerprint_mosaic(m).unwrap();
            let mut cur = (*m).clone();
            for _ in 0..20 {
                let moves = match_moves(&cur);
                if moves.is_empty() {
                    break;
                }
                let pick = &moves[rng.gen_range(0..moves.len())];
                cur = apply_move(&cur, &rules[pick.rule], pick.anchor).unwrap();
                applications += 1;
            }
            invariant &= fingerprint_mosaic(&cur).unwrap() == fp;
        }
    }
    report(
        4,
        "fingerprints invariant under random isotopy moves",
        invariant && applications >= 1000,
    );
}

/// Shift to lowest degree zero and make the leading coefficient positive.
fn normalized(p: &LaurentPoly) -> LaurentPoly {
    if p.is_zero() {
        return LaurentPoly::zero();
    }
    let shifted = p.mul_monomial(1, -p.min_exp().unwrap());
    if shifted.terms().last().map(|(_, c)| c < 0).unwrap_or(false) {
        shifted.neg()
    } else {
        shifted
    }
}

#[test]
fn criterion_5_reduction() {
    let nineteen =
        parse_mosaic(include_str!("fixtures/cinquefoil_19.txt")).unwrap();
    let seventeen_fp =
        fingerprint_mosaic(&parse_mosaic(include_str!("fixtures/cinquefoil_17.txt")).unwrap())
            .unwrap();
    assert_eq!(nineteen.non_blank_count(), 19);
    let outcome = reduce(&nineteen, 100);
    let ok = outcome.mosaic.non_blank_count() == 17
        && fingerprint_mosaic(&outcome.mosaic).unwrap() == seventeen_fp
        && fingerprint_mosaic(&nineteen).unwrap() == seventeen_fp;
    report(5, "19-tile cinquefoil reduces to 17 tiles, fingerprint unchanged", ok);

    let granny = parse_mosaic(include_str!("fixtures/granny_composite.txt")).unwrap();
    let pruned = matches!(
        prune(&granny),
        Prune::Discard(PruneReason::Composite { .. } | PruneReason::Reducible { .. })
    );
    report(5, "composite mosaic is pruned with a witness", pruned);
}

#[test]
fn criterion_6_identification_fixtures() {
    let table = builtin_table();
    let fixtures = fixtures_27();
    assert!(fixtures.len() >= 10, "need at least 10 identification fixtures");
    let required = ["13a4304", "9_10", "10_11", "10_20", "10_21", "11a341"];
    let mut ok = required.iter().all(|r| fixtures.iter().any(|(n, _)| n == r));
    for (name, text) in &fixtures {
        let m = parse_mosaic(text).unwrap();
        let code = to_diagram_code(&m).unwrap();
        let fp = fingerprint_mosaic(&m).unwrap();
        let ids = table.identify_code(&code, &fp);
        ok &= m.non_blank_count() == 27 && ids == [name.as_str()];
    }
    report(6, "27-tile fixtures identify uniquely to their names", ok);
}

fn fixtures_27() -> Vec<(String, &'static str)> {
    macro_rules! fixture {
        ($name:literal) => {
            ($name.to_string(), include_str!(concat!("fixtures/mosaic27_", $name, ".txt")))
        };
    }
    vec![
        fixture!("9_6"),
        fixture!("9_10"),
        fixture!("10_5"),
        fixture!("10_11"),
        fixture!("10_20"),
        fixture!("10_21"),
        fixture!("11a90"),
        fixture!("11a341"),
        fixture!("12a541"),
        fixture!("12a1126"),
        fixture!("13a4304"),
    ]
}

#[test]
fn criterion_7_documented_scope() {
    // The larger layouts exist in the catalog but their surveys, and the
    // re-derivation of 6-mosaic minimal mosaic tile numbers consumed via the
    // exclusion list, are deliberately out of scope; the README says so.
    let heavier =
        layout_catalog().iter().filter(|l| l.non_blank_count > 27).count();
    let readme = include_str!("../../../README.md");
    let ok = heavier == 13 && readme.contains("out of scope");
    report(7, "29-41-tile surveys and prior-work re-derivations documented out of scope", ok);
}
