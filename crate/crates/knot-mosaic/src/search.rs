//! Survey pipeline over the space-efficient layouts: fill layout interiors
//! with double arcs and crossings, assign crossing signs, prune links,
//! composites and reducible diagrams, dedup by symmetry, and identify the
//! survivors against the knot table.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::invariants::{fingerprint_mosaic, is_connected_sum, to_diagram_code, Fingerprint};
use crate::knottable::KnotTable;
use crate::layouts::{block_fill_ok, block_frame, layout_catalog, Layout};
use crate::mosaic::{CanonLevel, Mosaic, Strand, Transform, SYMMETRIES};
use crate::moves::{apply_move, builtin_rules, match_moves};
use crate::tiles::{Cell, Side, Tile};
use crate::Error;

/// A choice of interior cells for a layout: each cell is a double arc
/// (T7/T8) or a crossing (kept nondeterministic at the shadow stage).
#[derive(Debug, Clone)]
pub struct FillAssignment {
    pub layout_id: usize,
    /// Per interior cell, in row-major interior order.
    pub choices: Vec<Cell>,
    /// Number of crossing cells among the choices.
    pub crossings: usize,
}

/// One surveyed knot: a canonical representative mosaic plus its
/// identification and invariants.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SurveyResult {
    /// Canonical mosaic, one token row per string.
    pub mosaic: Vec<String>,
    /// Identified knot name(s); empty if not in the table, several if the
    /// identification is ambiguous.
    pub knot: Vec<String>,
    /// Non-blank tile count of the representative.
    pub tiles: usize,
    /// Crossing tile count of the representative.
    pub crossings: usize,
    /// Mirror-canonical Jones polynomial serialization.
    pub jones: String,
    /// Normalized Alexander polynomial serialization.
    pub alexander: String,
    pub determinant: u128,
    /// Layout the representative came from.
    pub layout: usize,
    /// Sorted markers: `ambiguous`, `unidentified`,
    /// `crossing-number-at-most-8`, `excluded-prior-work`.
    pub flags: Vec<String>,
}

/// `pmap[r * n + c]` = the original position displayed at `(r, c)` after
/// applying `g`, mirroring [`Mosaic::transform`].
fn position_map(n: usize, g: Transform) -> Vec<(usize, usize)> {
    let mut m: Vec<(usize, usize)> = (0..n * n).map(|i| (i / n, i % n)).collect();
    if g.reflect {
        let prev = m.clone();
        for r in 0..n {
            for c in 0..n {
                m[r * n + (n - 1 - c)] = prev[r * n + c];
            }
        }
    }
    for _ in 0..g.rot % 4 {
        let prev = m.clone();
        for r in 0..n {
            for c in 0..n {
                m[(n - 1 - c) * n + r] = prev[r * n + c];
            }
        }
    }
    m
}

/// A corner of the layout that matches the 3×3 building-block frame.
///
/// Most surviving fills place one of the corner building blocks here, but
/// this is a diagnostic, not an enumeration filter: a few genuine survivors
/// (a 27-tile mosaic of 10_21, for example) fill a block corner with a
/// pattern outside the block catalog, so enumeration must not reject them.
pub struct BlockCorner {
    /// Interior indices, in the transformed reading order
    /// (1,1), (1,2), (2,1), (2,2) relative to the corner.
    pub idx: [usize; 4],
    /// Symmetry mapping the layout so this corner sits in the canonical
    /// building-block orientation.
    pub transform: Transform,
}

impl BlockCorner {
    /// Is the 2x2 corner region of this interior fill one of the corner
    /// building blocks (after reorienting)?
    pub fn fill_is_block(&self, choices: &[Cell]) -> bool {
        let g = self.transform;
        let mut fill = [Cell::Crossing; 4];
        for (slot, &i) in self.idx.iter().enumerate() {
            let mut c = choices[i];
            if g.reflect {
                c = c.reflect();
            }
            for _ in 0..g.rot % 4 {
                c = c.rotate_ccw();
            }
            fill[slot] = c;
        }
        fill.iter().filter(|c| **c == Cell::Crossing).count() >= 2 && block_fill_ok(&fill)
    }
}

/// Corners of the layout whose occupied-box corner matches the
/// building-block frame under some symmetry, deduped by position set.
pub fn block_corners(layout: &Layout) -> Vec<BlockCorner> {
    let n = layout.mosaic.n();
    let interior = layout.interior();
    let index_of: HashMap<(usize, usize), usize> =
        interior.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let frame = block_frame();
    let mut seen: BTreeSet<[usize; 4]> = BTreeSet::new();
    let mut out = Vec::new();
    for &g in &SYMMETRIES {
        let t = layout.mosaic.transform(g);
        let Some((r0, _)) = t.occupied_rows() else { continue };
        let (c0, _) = t.occupied_cols().unwrap();
        let matches = (0..3).all(|r| {
            (0..3).all(|c| {
                let cell = t.get(r0 + r, c0 + c);
                if r == 0 || c == 0 {
                    cell == frame[r][c]
                } else {
                    cell == Cell::FourCp
                }
            })
        });
        if !matches {
            continue;
        }
        let pmap = position_map(n, g);
        let mut idx = [0usize; 4];
        let mut all_interior = true;
        for (slot, (dr, dc)) in [(1, 1), (1, 2), (2, 1), (2, 2)].into_iter().enumerate() {
            let orig = pmap[(r0 + dr) * n + (c0 + dc)];
            match index_of.get(&orig) {
                Some(&i) => idx[slot] = i,
                None => {
                    all_interior = false;
                    break;
                }
            }
        }
        if !all_interior {
            continue;
        }
        let mut key = idx;
        key.sort_unstable();
        if seen.insert(key) {
            out.push(BlockCorner { idx, transform: g });
        }
    }
    out
}

/// Does the strand pass through the same crossing cell twice in a row? Such
/// a twist is removable by an R1 move for every sign assignment, so the
/// whole shadow can be skipped.
fn shadow_has_removable_twist(strand: &Strand, m: &Mosaic) -> bool {
    let visits: Vec<(usize, usize)> = strand
        .steps
        .iter()
        .filter(|s| m.get(s.pos.0, s.pos.1).is_crossing_like())
        .map(|s| s.pos)
        .collect();
    let n = visits.len();
    n > 0 && (0..n).any(|i| visits[i] == visits[(i + 1) % n])
}

/// All interior fills of `layout` with at least `min_crossings` crossing
/// cells, filtered to single-strand twist-free shadows and deduped by
/// shadow canonical form. Deterministic order.
pub fn enumerate_fills(layout: &Layout, min_crossings: usize) -> Vec<Mosaic> {
    let interior = layout.interior();
    let k = interior.len();
    if min_crossings > k {
        return Vec::new();
    }
    assert!(k < 31, "layout interior too large to enumerate");
    let mut seen: HashSet<String> = HashSet::new();
    let mut out = Vec::new();
    for mask in 0u32..(1u32 << k) {
        if (mask.count_ones() as usize) < min_crossings {
            continue;
        }
        let arcs: Vec<usize> = (0..k).filter(|i| mask >> i & 1 == 0).collect();
        for arc_bits in 0u32..(1u32 << arcs.len()) {
            let mut choices = vec![Cell::Crossing; k];
            for (j, &i) in arcs.iter().enumerate() {
                choices[i] =
                    Cell::Det(if arc_bits >> j & 1 == 0 { Tile::T7 } else { Tile::T8 });
            }
            let m = layout.with_interior(&choices).expect("four-cp fill");
            let Ok(strands) = m.trace_shadow() else { continue };
            if strands.len() != 1 || shadow_has_removable_twist(&strands[0], &m) {
                continue;
            }
            if seen.insert(m.canonical_form(CanonLevel::Shadow).to_string()) {
                out.push(m);
            }
        }
    }
    out
}

/// All sign assignments of a single-component shadow: the two alternating
/// diagrams first (mirror images of each other), then every combination,
/// deduped by diagram canonical form including the global crossing switch.
pub fn assign_crossings(shadow: &Mosaic) -> Result<Vec<Mosaic>, Error> {
    let strands = shadow.trace_shadow()?;
    if strands.len() != 1 {
        return Err(Error::NotAKnot(format!("shadow has {} components", strands.len())));
    }
    let crossings: Vec<(usize, usize)> = shadow
        .positions()
        .filter(|&(r, c)| shadow.get(r, c).is_crossing_like())
        .collect();
    let k = crossings.len();
    if k >= 26 {
        return Err(Error::Other(format!("{k} crossings is too many to enumerate signs")));
    }

    // Alternating assignment: walk the strand, alternating over and under.
    // The parity of a planar Gauss sequence makes the two visits of each
    // crossing consistent. The horizontal strand of T9 runs on top; the
    // vertical strand of T10 does.
    let mut alternating = shadow.clone();
    let mut assigned: HashMap<(usize, usize), Tile> = HashMap::new();
    let mut over = true;
    for step in &strands[0].steps {
        if !shadow.get(step.pos.0, step.pos.1).is_crossing_like() {
            continue;
        }
        let horizontal = matches!(step.entry, Side::Left | Side::Right);
        let tile = if over == horizontal { Tile::T9 } else { Tile::T10 };
        match assigned.get(&step.pos) {
            Some(&prev) => debug_assert_eq!(prev, tile, "alternating parity at {:?}", step.pos),
            None => {
                assigned.insert(step.pos, tile);
                alternating.set(step.pos.0, step.pos.1, Cell::Det(tile));
            }
        }
        over = !over;
    }
    let mirror = alternating.switch_crossings();

    let mut seen: HashSet<String> = HashSet::new();
    let mut out = Vec::new();
    let all = (0..(1u32 << k)).map(|mask| {
        let mut m = shadow.clone();
        for (i, &(r, c)) in crossings.iter().enumerate() {
            m.set(r, c, Cell::Det(if mask >> i & 1 == 0 { Tile::T9 } else { Tile::T10 }));
        }
        m
    });
    for m in [alternating, mirror].into_iter().chain(all) {
        if seen.insert(m.canonical_form(CanonLevel::Diagram).to_string()) {
            out.push(m);
        }
    }
    Ok(out)
}

/// Why a diagram was discarded by [`prune`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PruneReason {
    /// Traces to several closed components.
    Link { components: usize },
    /// Diagrammatic connected sum; the witness names the cut.
    Composite { witness: String },
    /// The reducer lowers the non-blank or crossing count; the witness is
    /// the applied (rule name, anchor) sequence.
    Reducible { witness: Vec<(String, (usize, usize))> },
}

/// Outcome of [`prune`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Prune {
    Keep,
    Discard(PruneReason),
}

/// Discard links, diagrammatic composites, and diagrams whose tile or
/// crossing count is easily reduced. Conservative: a kept diagram may still
/// be non-minimal, which only adds duplicate knot names downstream.
pub fn prune(m: &Mosaic) -> Prune {
    match m.trace() {
        Ok(strands) if strands.len() == 1 => {}
        Ok(strands) => return Prune::Discard(PruneReason::Link { components: strands.len() }),
        Err(_) => return Prune::Discard(PruneReason::Link { components: 0 }),
    }
    if let Some((line, _, _)) = m.straight_cut_split() {
        return Prune::Discard(PruneReason::Composite { witness: format!("straight cut {line:?}") });
    }
    if let Ok(code) = to_diagram_code(m) {
        if is_connected_sum(&code) {
            return Prune::Discard(PruneReason::Composite {
                witness: "Gauss-interval connected sum".into(),
            });
        }
    }
    let rules = builtin_rules();
    let mut cur = m.clone();
    let mut witness = Vec::new();
    while let Some(app) = match_moves(&cur).into_iter().find(|a| rules[a.rule].reducing) {
        let rule = &rules[app.rule];
        cur = apply_move(&cur, rule, app.anchor).expect("matched move applies");
        witness.push((rule.name.clone(), app.anchor));
        if witness.len() > 200 {
            break;
        }
    }
    if cur.non_blank_count() < m.non_blank_count() || cur.crossing_count() < m.crossing_count() {
        return Prune::Discard(PruneReason::Reducible { witness });
    }
    Prune::Keep
}

/// Run the whole pipeline over the given catalog layout ids and collect one
/// result per identified knot (or ambiguity set). Knots on the exclusion
/// list, with crossing number ≤ 8, unidentified, or ambiguous are flagged
/// rather than dropped. Output order and content are deterministic.
pub fn run_survey(
    layout_ids: &[usize],
    min_crossings: usize,
    table: &KnotTable,
    exclusions: &[String],
) -> Result<Vec<SurveyResult>, Error> {
    let excluded: BTreeSet<&str> = exclusions.iter().map(|s| s.as_str()).collect();
    // canonical diagram -> (mosaic, layout id); BTreeMap for determinism
    let mut diagrams: BTreeMap<String, (Mosaic, usize)> = BTreeMap::new();
    for &id in layout_ids {
        let layout = layout_catalog()
            .iter()
            .find(|l| l.id == id)
            .ok_or_else(|| Error::Other(format!("no layout with id {id}")))?;
        let shadows = enumerate_fills(layout, min_crossings);
        let per_shadow: Vec<Vec<(String, Mosaic)>> = shadows
            .par_iter()
            .map(|s| {
                assign_crossings(s)
                    .unwrap_or_default()
                    .into_iter()
                    .map(|m| (m.canonical_form(CanonLevel::Diagram).to_string(), m))
                    .collect()
            })
            .collect();
        for batch in per_shadow {
            for (key, m) in batch {
                diagrams.entry(key).or_insert((m, id));
            }
        }
    }

    let kept: Vec<(Mosaic, usize, Fingerprint, Vec<String>)> = diagrams
        .par_iter()
        .filter_map(|(_, (m, layout_id))| {
            if prune(m) != Prune::Keep {
                return None;
            }
            let code = to_diagram_code(m).ok()?;
            let fp = fingerprint_mosaic(m).ok()?;
            let names = table.identify_code(&code, &fp);
            Some((m.clone(), *layout_id, fp, names))
        })
        .collect();

    let mut by_key: BTreeMap<String, SurveyResult> = BTreeMap::new();
    for (m, layout_id, fp, names) in kept {
        let key = if names.is_empty() {
            format!("?det={}/jones={}", fp.determinant, fp.jones)
        } else {
            names.join(",")
        };
        let mut flags: Vec<String> = Vec::new();
        if names.is_empty() {
            flags.push("unidentified".into());
        }
        if names.len() > 1 {
            flags.push("ambiguous".into());
        }
        if let Some(rec) = names.first().and_then(|n| table.get(n)) {
            if rec.crossings <= 8 {
                flags.push("crossing-number-at-most-8".into());
            }
        }
        if names.iter().any(|n| excluded.contains(n.as_str())) {
            flags.push("excluded-prior-work".into());
        }
        flags.sort();
        let canon = m.canonical_form(CanonLevel::Diagram);
        let result = SurveyResult {
            mosaic: canon.to_string().trim_end().lines().map(str::to_string).collect(),
            knot: names,
            tiles: m.non_blank_count(),
            crossings: m.crossing_count(),
            jones: fp.jones,
            alexander: fp.alexander,
            determinant: fp.determinant,
            layout: layout_id,
            flags,
        };
        by_key
            .entry(key)
            .and_modify(|existing| {
                if result.mosaic < existing.mosaic {
                    *existing = result.clone();
                }
            })
            .or_insert(result);
    }
    Ok(by_key.into_values().collect())
}

/// Serialize survey results as JSONL, one object per line.
pub fn write_jsonl<W: std::io::Write>(results: &[SurveyResult], mut w: W) -> Result<(), Error> {
    for r in results {
        serde_json::to_writer(&mut w, r).map_err(|e| Error::Other(e.to_string()))?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

/// Knot names of the clean survey results: identified, unambiguous,
/// crossing number at least 9, and not on the exclusion list.
pub fn surviving_names(results: &[SurveyResult]) -> BTreeSet<String> {
    results
        .iter()
        .filter(|r| r.flags.is_empty() && r.knot.len() == 1)
        .map(|r| r.knot[0].clone())
        .collect()
}
