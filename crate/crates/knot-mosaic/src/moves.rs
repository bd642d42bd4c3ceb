//! Planar isotopy moves as local 2x2 rewrite rules, reduction of non-blank
//! tile count, and local space-efficiency checks.
//!
//! The rule catalog is generated, not hand-listed: every suitably connected
//! 2x2 sub-tangle with at most one crossing is enumerated, and each is mapped
//! to the minimal realizations of the same boundary tangle (same boundary
//! connection points, same strand pairing, same over-strand for a crossing,
//! kinks removed). Soundness is by construction; the classes realize the
//! Reidemeister-I removals, segment collapses, cap normalizations, arc
//! slides, and crossing rotations.

use crate::mosaic::Mosaic;
use crate::tiles::{Cell, Side, Tile, TILES};
use crate::Error;
use std::sync::OnceLock;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoveRule {
    pub name: String,
    /// Row-major 2x2 pattern.
    pub pattern: [Tile; 4],
    pub replacement: [Tile; 4],
    /// Strictly lowers the non-blank count.
    pub reducing: bool,
    /// Removes a crossing (Reidemeister I).
    pub removes_crossing: bool,
    /// The inverse rewrite is also in the catalog.
    pub reversible: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoveApplication {
    pub rule: usize,
    pub anchor: (usize, usize),
}

/// Boundary points of a 2x2 window, clockwise from the top-left cell's top.
const BOUNDARY: [(usize, Side); 8] = [
    (0, Side::Top),
    (1, Side::Top),
    (1, Side::Right),
    (3, Side::Right),
    (3, Side::Bottom),
    (2, Side::Bottom),
    (2, Side::Left),
    (0, Side::Left),
];

fn cell_index(r: usize, c: usize) -> usize {
    r * 2 + c
}

fn window_consistent(w: &[Tile; 4]) -> bool {
    let cp = |i: usize, s: Side| w[i].connection_points().contains(s);
    cp(0, Side::Right) == cp(1, Side::Left)
        && cp(2, Side::Right) == cp(3, Side::Left)
        && cp(0, Side::Bottom) == cp(2, Side::Top)
        && cp(1, Side::Bottom) == cp(3, Side::Top)
}

/// Tangle structure of a consistent window: strand pairing on the 8 boundary
/// points, plus crossing annotations. None if the window contains a closed
/// internal loop (impossible inside a knot mosaic).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Signature {
    /// sorted pairs (i, j), i < j, of connected boundary points
    pairing: Vec<(u8, u8)>,
    /// boundary pair carried by the over strand, for one-crossing windows
    over_pair: Option<(u8, u8)>,
}

struct Walked {
    signature: Signature,
    /// (boundary point, boundary point) pairs that pass through the crossing,
    /// used to spot kinks (a strand meeting the crossing twice)
    kink: bool,
}

fn walk_window(w: &[Tile; 4]) -> Option<Walked> {
    let boundary_at = |i: usize, s: Side| -> Option<u8> {
        BOUNDARY.iter().position(|&(ci, cs)| ci == i && cs == s).map(|p| p as u8)
    };
    let neighbor = |i: usize, s: Side| -> Option<(usize, Side)> {
        let (r, c) = (i / 2, i % 2);
        let (nr, nc) = match s {
            Side::Top => (r.wrapping_sub(1), c),
            Side::Bottom => (r + 1, c),
            Side::Left => (r, c.wrapping_sub(1)),
            Side::Right => (r, c + 1),
        };
        (nr < 2 && nc < 2).then(|| (cell_index(nr, nc), s.opposite()))
    };
    let mut consumed = [0u8; 4]; // per cell, bitmask of used sides
    let mut pairing = Vec::new();
    let mut over_pair = None;
    let mut kink = false;
    let mut crossing_hits: Vec<(usize, bool)> = Vec::new(); // (strand id, over?)
    for start in 0..8u8 {
        let (ci, cs) = BOUNDARY[start as usize];
        if !w[ci].connection_points().contains(cs) || consumed[ci] & cs.bit() != 0 {
            continue;
        }
        // walk inward from this boundary point
        let (mut i, mut entry) = (ci, cs);
        let strand_id = pairing.len();
        loop {
            consumed[i] |= entry.bit();
            let exit = w[i].pass(entry)?;
            consumed[i] |= exit.bit();
            if w[i].is_crossing() {
                crossing_hits.push((strand_id, w[i].over_sides().unwrap().contains(entry)));
            }
            match neighbor(i, exit) {
                Some((ni, ns)) => {
                    i = ni;
                    entry = ns;
                }
                None => {
                    let end = boundary_at(i, exit).unwrap();
                    pairing.push((start.min(end), start.max(end)));
                    break;
                }
            }
        }
    }
    // leftover connection points mean an internal closed loop
    for i in 0..4 {
        if consumed[i] != w[i].connection_points().0 {
            return None;
        }
    }
    let crossings = w.iter().filter(|t| t.is_crossing()).count();
    if crossings == 1 {
        let hits = &crossing_hits;
        debug_assert_eq!(hits.len(), 2);
        if hits[0].0 == hits[1].0 {
            kink = true;
        } else {
            let over_strand = if hits[0].1 { hits[0].0 } else { hits[1].0 };
            over_pair = Some(pairing[over_strand]);
        }
    }
    pairing.sort();
    Some(Walked { signature: Signature { pairing, over_pair }, kink })
}

fn nonblank(w: &[Tile; 4]) -> usize {
    w.iter().filter(|t| !t.is_blank()).count()
}

fn has_segment(w: &[Tile; 4]) -> bool {
    w.iter().any(|t| matches!(t, Tile::T5 | Tile::T6))
}

fn serialize(w: &[Tile; 4]) -> String {
    w.iter().map(|t| t.index().to_string()).collect::<Vec<_>>().join(" ")
}

fn generate_rules() -> Vec<MoveRule> {
    // enumerate consistent loop-free windows with <= 1 crossing
    let mut crossingless: Vec<([Tile; 4], Signature)> = Vec::new();
    let mut one_crossing: Vec<([Tile; 4], Signature)> = Vec::new();
    let mut kinks: Vec<([Tile; 4], Vec<(u8, u8)>)> = Vec::new();
    for a in TILES {
        for b in TILES {
            for c in TILES {
                for d in TILES {
                    let w = [a, b, c, d];
                    let nx = w.iter().filter(|t| t.is_crossing()).count();
                    if nx > 1 || !window_consistent(&w) {
                        continue;
                    }
                    let Some(walked) = walk_window(&w) else { continue };
                    if nx == 0 {
                        crossingless.push((w, walked.signature));
                    } else if walked.kink {
                        kinks.push((w, walked.signature.pairing));
                    } else {
                        one_crossing.push((w, walked.signature));
                    }
                }
            }
        }
    }
    // best realizations per signature, ordered by (count, serialization)
    let best_of = |group: &[([Tile; 4], Signature)], sig: &Signature| -> Vec<[Tile; 4]> {
        let mut reps: Vec<[Tile; 4]> =
            group.iter().filter(|(_, s)| s == sig).map(|(w, _)| *w).collect();
        reps.sort_by_key(|w| (nonblank(w), serialize(w)));
        reps
    };
    let mut rules = Vec::new();
    let mut push = |class: &str, pattern: [Tile; 4], replacement: [Tile; 4], reversible: bool| {
        let reducing = nonblank(&replacement) < nonblank(&pattern)
            || replacement.iter().filter(|t| t.is_crossing()).count()
                < pattern.iter().filter(|t| t.is_crossing()).count();
        rules.push(MoveRule {
            name: String::new(), // named after sorting
            pattern,
            replacement,
            reducing,
            removes_crossing: pattern.iter().any(|t| t.is_crossing())
                && !replacement.iter().any(|t| t.is_crossing()),
            reversible,
        });
        let _ = class;
    };
    // Reidemeister-I removals: kink window -> minimal crossingless realization
    for (w, pairing) in &kinks {
        let sig = Signature { pairing: pairing.clone(), over_pair: None };
        let reps = best_of(&crossingless, &sig);
        let best = *reps.first().expect("every kink pairing is realizable without the kink");
        push("r1", *w, best, false);
    }
    // crossingless rewrites: to the minimal realization (reducing), and between
    // minimal realizations (neutral slides)
    let mut seen_sigs: Vec<&Signature> = Vec::new();
    for (w, sig) in &crossingless {
        let reps = best_of(&crossingless, sig);
        let min = nonblank(&reps[0]);
        if nonblank(w) > min {
            push("collapse", *w, reps[0], false);
        } else if !seen_sigs.contains(&sig) {
            seen_sigs.push(sig);
            let minimal: Vec<_> = reps.iter().take_while(|r| nonblank(r) == min).collect();
            for x in &minimal {
                for y in &minimal {
                    if x != y {
                        push("slide", **x, **y, true);
                    }
                }
            }
        }
    }
    // one-crossing rewrites: same pairing and same over strand
    let mut seen_sigs: Vec<&Signature> = Vec::new();
    for (w, sig) in &one_crossing {
        let reps = best_of(&one_crossing, sig);
        let min = nonblank(&reps[0]);
        if nonblank(w) > min {
            push("rotate", *w, reps[0], false);
        } else if !seen_sigs.contains(&sig) {
            seen_sigs.push(sig);
            let minimal: Vec<_> = reps.iter().take_while(|r| nonblank(r) == min).collect();
            for x in &minimal {
                for y in &minimal {
                    if x != y {
                        push("rotate", **x, **y, true);
                    }
                }
            }
        }
    }
    // order: R1 removals, segment collapses, cap normalizations, then the
    // neutral rotations and slides; deterministic within each class
    let class_rank = |r: &MoveRule| -> u8 {
        if r.removes_crossing {
            0
        } else if r.reducing && has_segment(&r.pattern) {
            1
        } else if r.reducing {
            2
        } else if r.pattern.iter().any(|t| t.is_crossing()) {
            3
        } else {
            4
        }
    };
    rules.sort_by_key(|r| (class_rank(r), serialize(&r.pattern), serialize(&r.replacement)));
    rules.dedup_by(|a, b| a.pattern == b.pattern && a.replacement == b.replacement);
    let mut counters = [0usize; 5];
    for r in &mut rules {
        let k = class_rank(r) as usize;
        counters[k] += 1;
        let class = ["r1", "segment-collapse", "cap-normalize", "rotate", "arc-slide"][k];
        r.name = format!("{class}-{:03}", counters[k]);
    }
    rules
}

/// The generated rule catalog, ordered: R1 removals, segment collapses,
/// cap normalizations, crossing rotations, arc slides.
pub fn builtin_rules() -> &'static [MoveRule] {
    static RULES: OnceLock<Vec<MoveRule>> = OnceLock::new();
    RULES.get_or_init(generate_rules)
}

fn window_at(m: &Mosaic, r: usize, c: usize) -> Option<[Tile; 4]> {
    let mut w = [Tile::T0; 4];
    for (k, (dr, dc)) in [(0, 0), (0, 1), (1, 0), (1, 1)].iter().enumerate() {
        match m.get(r + dr, c + dc) {
            Cell::Det(t) => w[k] = t,
            _ => return None,
        }
    }
    Some(w)
}

/// All (rule, anchor) pairs that match, in rule order then row-major anchors.
pub fn match_moves(m: &Mosaic) -> Vec<MoveApplication> {
    let rules = builtin_rules();
    let mut out = Vec::new();
    for (ri, rule) in rules.iter().enumerate() {
        for r in 0..m.n() - 1 {
            for c in 0..m.n() - 1 {
                if window_at(m, r, c) == Some(rule.pattern) {
                    out.push(MoveApplication { rule: ri, anchor: (r, c) });
                }
            }
        }
    }
    out
}

pub fn apply_move(m: &Mosaic, rule: &MoveRule, anchor: (usize, usize)) -> Result<Mosaic, Error> {
    let (r, c) = anchor;
    if r + 1 >= m.n() || c + 1 >= m.n() || window_at(m, r, c) != Some(rule.pattern) {
        return Err(Error::Invalid(format!("rule {} does not match at {anchor:?}", rule.name)));
    }
    let mut out = m.clone();
    for (k, (dr, dc)) in [(0, 0), (0, 1), (1, 0), (1, 1)].iter().enumerate() {
        out.set(r + dr, c + dc, Cell::Det(rule.replacement[k]));
    }
    debug_assert!(out.is_suitably_connected().is_ok());
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct ReduceOutcome {
    pub mosaic: Mosaic,
    pub budget_exhausted: bool,
    /// applied (rule name, anchor) sequence: the reduction witness
    pub steps: Vec<(String, (usize, usize))>,
}

fn first_reducing(m: &Mosaic) -> Option<MoveApplication> {
    let rules = builtin_rules();
    match_moves(m).into_iter().find(|a| rules[a.rule].reducing)
}

/// Greedy best-first reduction: apply reducing rules as found; when stuck,
/// search up to `lookahead` neutral moves for a state with a reducing match.
pub fn reduce(m: &Mosaic, budget: usize) -> ReduceOutcome {
    reduce_with_lookahead(m, budget, 3)
}

pub fn reduce_with_lookahead(m: &Mosaic, budget: usize, lookahead: usize) -> ReduceOutcome {
    let rules = builtin_rules();
    let mut cur = m.clone();
    let mut steps: Vec<(String, (usize, usize))> = Vec::new();
    let mut budget = budget;
    loop {
        if budget == 0 {
            return ReduceOutcome { mosaic: cur, budget_exhausted: true, steps };
        }
        if let Some(app) = first_reducing(&cur) {
            cur = apply_move(&cur, &rules[app.rule], app.anchor).unwrap();
            steps.push((rules[app.rule].name.clone(), app.anchor));
            budget -= 1;
            continue;
        }
        // bounded breadth-first search through neutral moves
        let mut frontier: Vec<(Mosaic, Vec<MoveApplication>)> = vec![(cur.clone(), vec![])];
        let mut visited: std::collections::HashSet<String> =
            [cur.to_string()].into_iter().collect();
        let mut found: Option<Vec<MoveApplication>> = None;
        'search: for _depth in 0..lookahead {
            let mut next = Vec::new();
            for (state, path) in &frontier {
                for app in match_moves(state) {
                    if rules[app.rule].reducing {
                        continue;
                    }
                    let ns = apply_move(state, &rules[app.rule], app.anchor).unwrap();
                    if !visited.insert(ns.to_string()) {
                        continue;
                    }
                    let mut np = path.clone();
                    np.push(app);
                    if first_reducing(&ns).is_some() {
                        found = Some(np);
                        break 'search;
                    }
                    if visited.len() > 4000 {
                        break 'search;
                    }
                    next.push((ns, np));
                }
            }
            frontier = next;
        }
        match found {
            Some(path) if path.len() < budget => {
                for app in path {
                    cur = apply_move(&cur, &rules[app.rule], app.anchor).unwrap();
                    steps.push((rules[app.rule].name.clone(), app.anchor));
                    budget -= 1;
                }
            }
            Some(_) => return ReduceOutcome { mosaic: cur, budget_exhausted: true, steps },
            None => return ReduceOutcome { mosaic: cur, budget_exhausted: false, steps },
        }
    }
}

/// Checks the local space-efficiency facts: blank bounding-box corners, caps
/// only in the first/last occupied rows and columns, four connection points
/// next to every cap, and (for 7-mosaics) no segments in the second or
/// penultimate occupied rows and columns.
pub fn local_space_efficiency_report(m: &Mosaic) -> Vec<String> {
    let mut report = Vec::new();
    let Some((r0, r1)) = m.occupied_rows() else {
        return vec!["mosaic is empty".into()];
    };
    let (c0, c1) = m.occupied_cols().unwrap();
    for (r, c) in [(r0, c0), (r0, c1), (r1, c0), (r1, c1)] {
        if !m.get(r, c).is_blank() {
            report.push(format!("corner ({r},{c}) of the occupied box is not blank"));
        }
    }
    // first/last occupied rows: only top/bottom caps
    let row_caps = |r: usize, a: Tile, b: Tile, what: &str, report: &mut Vec<String>| {
        let mut c = c0;
        while c <= c1 {
            if m.get(r, c).is_blank() {
                c += 1;
                continue;
            }
            if c + 1 <= c1 && m.get(r, c) == Cell::Det(a) && m.get(r, c + 1) == Cell::Det(b) {
                c += 2;
            } else {
                report.push(format!("row {r} is not made of {what} caps at column {c}"));
                c += 1;
            }
        }
    };
    row_caps(r0, Tile::T2, Tile::T1, "top", &mut report);
    if r1 != r0 {
        row_caps(r1, Tile::T3, Tile::T4, "bottom", &mut report);
    }
    let col_caps = |c: usize, a: Tile, b: Tile, what: &str, report: &mut Vec<String>| {
        let mut r = r0;
        while r <= r1 {
            if m.get(r, c).is_blank() {
                r += 1;
                continue;
            }
            if r + 1 <= r1 && m.get(r, c) == Cell::Det(a) && m.get(r + 1, c) == Cell::Det(b) {
                r += 2;
            } else {
                report.push(format!("column {c} is not made of {what} caps at row {r}"));
                r += 1;
            }
        }
    };
    col_caps(c0, Tile::T2, Tile::T3, "left", &mut report);
    if c1 != c0 {
        col_caps(c1, Tile::T1, Tile::T4, "right", &mut report);
    }
    // cells adjacent to a cap opening must have four connection points
    for cap in m.find_caps() {
        let on_rim = cap.positions.iter().all(|&(r, c)| r == r0 || r == r1 || c == c0 || c == c1);
        if !on_rim {
            continue;
        }
        for &(r, c) in &cap.positions {
            let (nr, nc) = match cap.kind {
                Side::Top => (r + 1, c),
                Side::Bottom => (r.wrapping_sub(1), c),
                Side::Left => (r, c + 1),
                Side::Right => (r, c.wrapping_sub(1)),
            };
            let four = m
                .get(nr, nc)
                .connection_points()
                .map(|s| s.len() == 4)
                .unwrap_or(true);
            if !four {
                report.push(format!(
                    "cell ({nr},{nc}) next to the cap at {:?} lacks four connection points",
                    cap.positions
                ));
            }
        }
    }
    if m.n() == 7 {
        for r in [r0 + 1, r1.saturating_sub(1)] {
            for c in c0..=c1 {
                if matches!(m.get(r, c), Cell::Det(Tile::T5) | Cell::Det(Tile::T6)) {
                    report.push(format!("segment in second/penultimate occupied row at ({r},{c})"));
                }
            }
        }
        for c in [c0 + 1, c1.saturating_sub(1)] {
            for r in r0..=r1 {
                if matches!(m.get(r, c), Cell::Det(Tile::T5) | Cell::Det(Tile::T6)) {
                    report.push(format!(
                        "segment in second/penultimate occupied column at ({r},{c})"
                    ));
                }
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mosaic::parse_mosaic;

    #[test]
    fn rules_are_well_formed() {
        let rules = builtin_rules();
        assert!(!rules.is_empty());
        let mut r1 = 0;
        for rule in rules {
            // boundary connection points must match exactly
            for (i, s) in BOUNDARY {
                assert_eq!(
                    rule.pattern[i].connection_points().contains(s),
                    rule.replacement[i].connection_points().contains(s),
                    "{}",
                    rule.name
                );
            }
            if rule.reducing {
                assert!(
                    nonblank(&rule.replacement) < nonblank(&rule.pattern)
                        || rule.removes_crossing,
                    "{}",
                    rule.name
                );
            }
            if rule.removes_crossing {
                r1 += 1;
            }
            if rule.reversible {
                assert!(rules.iter().any(|o| {
                    o.pattern == rule.replacement && o.replacement == rule.pattern
                }));
            }
        }
        // kink removals exist in both chiralities and all orientations
        assert!(r1 >= 8, "{r1}");
    }

    #[test]
    fn rules_preserve_tangle() {
        for rule in builtin_rules() {
            let pw = walk_window(&rule.pattern).unwrap();
            let rw = walk_window(&rule.replacement).unwrap();
            assert_eq!(pw.signature.pairing, rw.signature.pairing, "{}", rule.name);
            if !rule.removes_crossing {
                assert_eq!(pw.signature.over_pair, rw.signature.over_pair, "{}", rule.name);
            }
        }
    }

    #[test]
    fn unknot_is_a_fixed_point() {
        let m = parse_mosaic("2 1\n3 4").unwrap();
        let rules = builtin_rules();
        assert!(match_moves(&m).iter().all(|a| !rules[a.rule].reducing));
        let out = reduce(&m, 100);
        assert_eq!(out.mosaic.non_blank_count(), 4);
        assert!(!out.budget_exhausted);
    }

    #[test]
    fn kink_is_removed() {
        // trefoil with an extra R1 kink spliced into the bottom cap region
        let kinked = parse_mosaic(
            "0 2 1 0 0\n2 10 9 1 0\n3 9 7 4 0\n0 3 8 1 0\n0 0 3 4 0",
        )
        .unwrap();
        assert!(kinked.is_suitably_connected().is_ok());
        assert_eq!(kinked.trace().unwrap().len(), 1);
        let base = parse_mosaic(
            "0 2 1 0 0\n2 10 9 1 0\n3 9 7 4 0\n0 3 4 0 0\n0 0 0 0 0",
        )
        .unwrap();
        let kinked_fp = crate::invariants::fingerprint_mosaic(&kinked).unwrap();
        assert_eq!(kinked_fp, crate::invariants::fingerprint_mosaic(&base).unwrap());
        let out = reduce(&kinked, 100);
        assert_eq!(out.mosaic.crossing_count(), 3);
        assert_eq!(crate::invariants::fingerprint_mosaic(&out.mosaic).unwrap(), kinked_fp);
    }

    #[test]
    fn moves_preserve_fingerprint_and_components() {
        let m = parse_mosaic("0 2 1 0\n2 10 9 1\n3 9 7 4\n0 3 4 0").unwrap();
        let fp = crate::invariants::fingerprint_mosaic(&m).unwrap();
        let rules = builtin_rules();
        for app in match_moves(&m) {
            let next = apply_move(&m, &rules[app.rule], app.anchor).unwrap();
            assert!(next.is_suitably_connected().is_ok());
            assert_eq!(next.trace().unwrap().len(), 1, "{}", rules[app.rule].name);
            assert_eq!(
                crate::invariants::fingerprint_mosaic(&next).unwrap(),
                fp,
                "{} at {:?}",
                rules[app.rule].name,
                app.anchor
            );
        }
    }

    #[test]
    fn space_efficiency_report() {
        let m = parse_mosaic("0 2 1 0\n2 10 9 1\n3 9 7 4\n0 3 4 0").unwrap();
        assert!(
            local_space_efficiency_report(&m).is_empty(),
            "{:?}",
            local_space_efficiency_report(&m)
        );
        let seg = parse_mosaic("2 1 0\n6 6 0\n3 4 0").unwrap();
        assert!(!local_space_efficiency_report(&seg).is_empty());
    }
}
