//! The n-by-n grid: parsing, validation, tracing, caps, symmetries, canonical forms.

use crate::tiles::{Cell, Side, SideSet, Tile, SIDES};
use crate::Error;
use std::fmt;

/// A square grid of cells. Immutable by convention; operations return new mosaics.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mosaic {
    n: usize,
    cells: Vec<Cell>,
}

/// One step of a traced strand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Step {
    pub pos: (usize, usize),
    pub entry: Side,
    pub exit: Side,
    /// For crossing cells: whether this passage runs on top.
    pub over: Option<bool>,
}

/// A closed strand: a cyclic list of steps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Strand {
    pub steps: Vec<Step>,
}

impl Strand {
    pub fn crossing_visits(&self) -> usize {
        self.steps.iter().filter(|s| s.over.is_some()).count()
    }
}

/// A cap: two adjacent arcs joined on their shared edge, opening into one row/column.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cap {
    /// Side of the pair the opening faces away from: a top cap opens downward.
    pub kind: Side,
    pub positions: [(usize, usize); 2],
}

/// A symmetry of the square: optional reflection (across the vertical axis)
/// followed by `rot` counterclockwise quarter turns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Transform {
    pub rot: u8,
    pub reflect: bool,
}

pub const SYMMETRIES: [Transform; 8] = [
    Transform { rot: 0, reflect: false },
    Transform { rot: 1, reflect: false },
    Transform { rot: 2, reflect: false },
    Transform { rot: 3, reflect: false },
    Transform { rot: 0, reflect: true },
    Transform { rot: 1, reflect: true },
    Transform { rot: 2, reflect: true },
    Transform { rot: 3, reflect: true },
];

/// Symmetry level for canonical forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CanonLevel {
    /// The 8 symmetries of the square.
    Shadow,
    /// The 16 elements: square symmetries and the global crossing switch.
    Diagram,
}

impl Mosaic {
    pub fn new(n: usize, cells: Vec<Cell>) -> Result<Mosaic, Error> {
        if n < 2 {
            return Err(Error::Parse(format!("mosaic dimension {n} < 2")));
        }
        if cells.len() != n * n {
            return Err(Error::Parse("cell count does not match dimension".into()));
        }
        Ok(Mosaic { n, cells })
    }

    pub fn blank(n: usize) -> Mosaic {
        Mosaic { n, cells: vec![Cell::Det(Tile::T0); n * n] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, r: usize, c: usize) -> Cell {
        self.cells[r * self.n + c]
    }

    pub fn set(&mut self, r: usize, c: usize, cell: Cell) {
        self.cells[r * self.n + c] = cell;
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn positions(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |r| (0..self.n).map(move |c| (r, c)))
    }

    pub fn non_blank_count(&self) -> usize {
        self.cells.iter().filter(|c| !c.is_blank()).count()
    }

    pub fn crossing_count(&self) -> usize {
        self.cells.iter().filter(|c| c.is_crossing_like()).count()
    }

    pub fn is_deterministic(&self) -> bool {
        self.cells.iter().all(|c| matches!(c, Cell::Det(_)))
    }

    fn neighbor(&self, r: usize, c: usize, s: Side) -> Option<(usize, usize)> {
        match s {
            Side::Top => r.checked_sub(1).map(|r| (r, c)),
            Side::Bottom => (r + 1 < self.n).then_some((r + 1, c)),
            Side::Left => c.checked_sub(1).map(|c| (r, c)),
            Side::Right => (c + 1 < self.n).then_some((r, c + 1)),
        }
    }

    /// Connection points of the cell at (r, c); SegOrArc cells have none determined.
    fn cp(&self, r: usize, c: usize) -> SideSet {
        self.get(r, c).connection_points().unwrap_or_default()
    }

    /// Every connection point must be matched by the adjacent cell, and the
    /// boundary must carry none. Returns the first violation in row-major,
    /// Top/Right/Bottom/Left order.
    pub fn is_suitably_connected(&self) -> Result<(), ((usize, usize), Side)> {
        for (r, c) in self.positions() {
            let cp = self.cp(r, c);
            for s in SIDES {
                let here = cp.contains(s);
                let there = match self.neighbor(r, c, s) {
                    Some((nr, nc)) => self.cp(nr, nc).contains(s.opposite()),
                    None => false,
                };
                if here != there {
                    return Err(((r, c), s));
                }
            }
        }
        Ok(())
    }

    /// Trace all strands. Requires deterministic cells; every connection point
    /// is consumed exactly once, each crossing visited twice (over and under).
    pub fn trace(&self) -> Result<Vec<Strand>, Error> {
        if !self.is_deterministic() {
            return Err(Error::Invalid("trace requires deterministic cells".into()));
        }
        self.trace_shadow()
    }

    /// Like `trace`, but also accepts Crossing cells (both crossings route the
    /// same way); over/under is unset for them.
    pub fn trace_shadow(&self) -> Result<Vec<Strand>, Error> {
        self.is_suitably_connected()
            .map_err(|(pos, side)| Error::Invalid(format!("connection mismatch at {pos:?} side {side:?}")))?;
        let pass = |cell: Cell, from: Side| -> Option<Side> {
            match cell {
                Cell::Det(t) => t.pass(from),
                Cell::Crossing => Some(from.opposite()),
                _ => None,
            }
        };
        for &cell in &self.cells {
            if matches!(cell, Cell::FourCp | Cell::SegOrArc) {
                return Err(Error::Invalid("trace requires routed cells".into()));
            }
        }
        let mut used = vec![0u8; self.n * self.n]; // bitmask of consumed entry sides
        let mut strands = Vec::new();
        for (r, c) in self.positions() {
            let cp = self.cp(r, c);
            for s in SIDES {
                if !cp.contains(s) || used[r * self.n + c] & s.bit() != 0 {
                    continue;
                }
                // walk a new closed strand starting by entering (r, c) at s
                let (mut pr, mut pc, mut entry) = (r, c, s);
                let mut steps = Vec::new();
                loop {
                    if used[pr * self.n + pc] & entry.bit() != 0 {
                        break;
                    }
                    used[pr * self.n + pc] |= entry.bit();
                    let cell = self.get(pr, pc);
                    let exit = pass(cell, entry)
                        .ok_or_else(|| Error::Invalid(format!("no passage at ({pr},{pc})")))?;
                    used[pr * self.n + pc] |= exit.bit();
                    let over = match cell {
                        Cell::Det(t) if t.is_crossing() => {
                            Some(t.over_sides().unwrap().contains(entry))
                        }
                        _ => None,
                    };
                    steps.push(Step { pos: (pr, pc), entry, exit, over });
                    let (nr, nc) = self
                        .neighbor(pr, pc, exit)
                        .ok_or_else(|| Error::Invalid("strand ran off the boundary".into()))?;
                    pr = nr;
                    pc = nc;
                    entry = exit.opposite();
                }
                strands.push(Strand { steps });
            }
        }
        Ok(strands)
    }

    /// Apply a square symmetry. Reflections also switch crossings, so every
    /// transform preserves the knot type.
    pub fn transform(&self, g: Transform) -> Mosaic {
        let n = self.n;
        let mut m = self.clone();
        if g.reflect {
            let mut cells = vec![Cell::Det(Tile::T0); n * n];
            for (r, c) in self.positions() {
                cells[r * n + (n - 1 - c)] = self.get(r, c).reflect();
            }
            m = Mosaic { n, cells };
        }
        for _ in 0..(g.rot % 4) {
            let mut cells = vec![Cell::Det(Tile::T0); n * n];
            for r in 0..n {
                for c in 0..n {
                    // counterclockwise: column c becomes row n-1-c
                    cells[(n - 1 - c) * n + r] = m.get(r, c).rotate_ccw();
                }
            }
            m = Mosaic { n, cells };
        }
        m
    }

    /// Switch every crossing (the mirror diagram).
    pub fn switch_crossings(&self) -> Mosaic {
        Mosaic { n: self.n, cells: self.cells.iter().map(|c| c.switch_crossing()).collect() }
    }

    /// Lexicographically least serialization over the symmetry group.
    pub fn canonical_form(&self, level: CanonLevel) -> Mosaic {
        let mut best: Option<(String, Mosaic)> = None;
        let mut consider = |m: Mosaic| {
            let s = m.to_string();
            if best.as_ref().map_or(true, |(b, _)| s < *b) {
                best = Some((s, m));
            }
        };
        for g in SYMMETRIES {
            let t = self.transform(g);
            if level == CanonLevel::Diagram {
                consider(t.switch_crossings());
            }
            consider(t);
        }
        best.unwrap().1
    }

    /// All caps: pairs of adjacent arcs joined on their shared edge whose free
    /// connection points enter the same neighboring row or column.
    pub fn find_caps(&self) -> Vec<Cap> {
        let mut caps = Vec::new();
        for (r, c) in self.positions() {
            // horizontal pair (r,c)-(r,c+1): top cap T2,T1 opens down; bottom cap T3,T4 opens up
            if c + 1 < self.n {
                let (a, b) = (self.get(r, c), self.get(r, c + 1));
                if a == Cell::Det(Tile::T2) && b == Cell::Det(Tile::T1) {
                    caps.push(Cap { kind: Side::Top, positions: [(r, c), (r, c + 1)] });
                }
                if a == Cell::Det(Tile::T3) && b == Cell::Det(Tile::T4) {
                    caps.push(Cap { kind: Side::Bottom, positions: [(r, c), (r, c + 1)] });
                }
            }
            // vertical pair (r,c)-(r+1,c): left cap T2,T3 opens right; right cap T1,T4 opens left
            if r + 1 < self.n {
                let (a, b) = (self.get(r, c), self.get(r + 1, c));
                if a == Cell::Det(Tile::T2) && b == Cell::Det(Tile::T3) {
                    caps.push(Cap { kind: Side::Left, positions: [(r, c), (r + 1, c)] });
                }
                if a == Cell::Det(Tile::T1) && b == Cell::Det(Tile::T4) {
                    caps.push(Cap { kind: Side::Right, positions: [(r, c), (r + 1, c)] });
                }
            }
        }
        caps
    }

    /// A horizontal or vertical grid line crossed by exactly two strand points
    /// with at least one crossing strictly on each side: a witness of an
    /// obviously reducible or composite configuration.
    pub fn straight_cut_split(&self) -> Option<(CutLine, Mosaic, Mosaic)> {
        let n = self.n;
        for k in 1..n {
            // horizontal line between rows k-1 and k
            let pierced: usize =
                (0..n).filter(|&c| self.cp(k - 1, c).contains(Side::Bottom)).count();
            let above = (0..k).any(|r| (0..n).any(|c| self.get(r, c).is_crossing_like()));
            let below = (k..n).any(|r| (0..n).any(|c| self.get(r, c).is_crossing_like()));
            if pierced == 2 && above && below {
                return Some((CutLine::Horizontal(k), self.half(CutLine::Horizontal(k), false), self.half(CutLine::Horizontal(k), true)));
            }
            // vertical line between columns k-1 and k
            let pierced: usize =
                (0..n).filter(|&r| self.cp(r, k - 1).contains(Side::Right)).count();
            let left = (0..n).any(|r| (0..k).any(|c| self.get(r, c).is_crossing_like()));
            let right = (0..n).any(|r| (k..n).any(|c| self.get(r, c).is_crossing_like()));
            if pierced == 2 && left && right {
                return Some((CutLine::Vertical(k), self.half(CutLine::Vertical(k), false), self.half(CutLine::Vertical(k), true)));
            }
        }
        None
    }

    /// One side of a cut, with the other side blanked out. The two strand
    /// points on the cut are left dangling; this is a witness, not a knot.
    fn half(&self, cut: CutLine, second: bool) -> Mosaic {
        let mut m = self.clone();
        for (r, c) in self.positions() {
            let in_second = match cut {
                CutLine::Horizontal(k) => r >= k,
                CutLine::Vertical(k) => c >= k,
            };
            if in_second != second {
                m.set(r, c, Cell::Det(Tile::T0));
            }
        }
        m
    }

    /// Occupied row range (first, last), if any cell is non-blank.
    pub fn occupied_rows(&self) -> Option<(usize, usize)> {
        let occ: Vec<usize> =
            (0..self.n).filter(|&r| (0..self.n).any(|c| !self.get(r, c).is_blank())).collect();
        Some((*occ.first()?, *occ.last()?))
    }

    pub fn occupied_cols(&self) -> Option<(usize, usize)> {
        let occ: Vec<usize> =
            (0..self.n).filter(|&c| (0..self.n).any(|r| !self.get(r, c).is_blank())).collect();
        Some((*occ.first()?, *occ.last()?))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CutLine {
    /// Between rows k-1 and k.
    Horizontal(usize),
    /// Between columns k-1 and k.
    Vertical(usize),
}

impl fmt::Display for Mosaic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.n {
            for c in 0..self.n {
                if c > 0 {
                    f.write_str(" ")?;
                }
                f.write_str(&self.get(r, c).token())?;
            }
            f.write_str("\n")?;
        }
        Ok(())
    }
}

/// Parse the mosaic file format: '#' comment lines, then n lines of n tokens.
pub fn parse_mosaic(text: &str) -> Result<Mosaic, Error> {
    let mut rows: Vec<Vec<Cell>> = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        rows.push(line.split_whitespace().map(Cell::parse).collect::<Result<_, _>>()?);
    }
    let n = rows.len();
    if n < 2 {
        return Err(Error::Parse(format!("mosaic has {n} rows, need at least 2")));
    }
    for (i, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(Error::Parse(format!("row {i} has {} tokens, expected {n}", row.len())));
        }
    }
    Mosaic::new(n, rows.concat())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tiles::TILES;

    fn unknot2() -> Mosaic {
        parse_mosaic("2 1\n3 4").unwrap()
    }

    #[test]
    fn parse_roundtrip() {
        let m = unknot2();
        assert_eq!(parse_mosaic(&m.to_string()).unwrap(), m);
        assert!(parse_mosaic("0 0\n0").is_err());
        assert!(parse_mosaic("0 0\n0 0").is_ok());
        assert!(parse_mosaic("# comment\n2 1\n3 4").unwrap() == m);
        assert!(parse_mosaic("0").is_err());
    }

    #[test]
    fn suitable_connectivity() {
        assert!(unknot2().is_suitably_connected().is_ok());
        assert!(Mosaic::blank(3).is_suitably_connected().is_ok());
        let mut m = unknot2();
        m.set(0, 0, Cell::Det(Tile::T0));
        let v = m.is_suitably_connected().unwrap_err();
        assert_eq!(v.0, (0, 0));
    }

    #[test]
    fn trace_unknot() {
        let s = unknot2().trace().unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].steps.len(), 4);
        assert_eq!(s[0].crossing_visits(), 0);
    }

    #[test]
    fn trace_two_circles() {
        let m = parse_mosaic("2 1 0 0 0\n3 4 0 0 0\n0 0 0 0 0\n0 0 0 2 1\n0 0 0 3 4").unwrap();
        assert_eq!(m.trace().unwrap().len(), 2);
    }

    #[test]
    fn trace_trefoil() {
        // 4-mosaic of the trefoil: three crossings on one strand
        let m = parse_mosaic("0 2 1 0\n2 10 9 1\n3 9 7 4\n0 3 4 0").unwrap();
        let s = m.trace().unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(m.crossing_count(), 3);
        let visits: usize = s.iter().map(|s| s.crossing_visits()).sum();
        assert_eq!(visits, 6);
    }

    #[test]
    fn transform_group_law() {
        let m = parse_mosaic("0 2 1 0\n2 10 9 1\n3 9 7 4\n0 3 4 0").unwrap();
        let id = Transform { rot: 0, reflect: false };
        assert_eq!(m.transform(id), m);
        for g in SYMMETRIES {
            let t = m.transform(g);
            assert!(t.is_suitably_connected().is_ok());
            assert_eq!(t.non_blank_count(), m.non_blank_count());
            assert_eq!(t.crossing_count(), m.crossing_count());
            assert_eq!(t.trace().unwrap().len(), m.trace().unwrap().len());
            // inverse: reflection-first transforms invert as (rot, refl) -> conjugate
            let inv = if g.reflect {
                Transform { rot: g.rot, reflect: true }
            } else {
                Transform { rot: (4 - g.rot) % 4, reflect: false }
            };
            assert_eq!(t.transform(inv), m, "{g:?}");
        }
    }

    #[test]
    fn canonical_is_orbit_constant() {
        let m = parse_mosaic("0 2 1 0\n2 10 9 1\n3 9 7 4\n0 3 4 0").unwrap();
        for level in [CanonLevel::Shadow, CanonLevel::Diagram] {
            let canon = m.canonical_form(level);
            assert_eq!(canon.canonical_form(level), canon);
            for g in SYMMETRIES {
                assert_eq!(m.transform(g).canonical_form(level), canon);
            }
        }
        assert_eq!(
            m.switch_crossings().canonical_form(CanonLevel::Diagram),
            m.canonical_form(CanonLevel::Diagram)
        );
    }

    #[test]
    fn asymmetric_orbit_has_eight_forms() {
        // trefoil off the diagonal of a 5-mosaic: no symmetry fixes it
        let m = parse_mosaic(
            "0 0 2 1 0\n0 2 10 9 1\n0 3 9 7 4\n0 0 3 4 0\n0 0 0 0 0",
        )
        .unwrap();
        let orbit: std::collections::HashSet<String> =
            SYMMETRIES.iter().map(|&g| m.transform(g).to_string()).collect();
        assert_eq!(orbit.len(), 8);
    }

    #[test]
    fn caps_of_unknot() {
        let caps = unknot2().find_caps();
        assert_eq!(caps.len(), 4);
        assert!(Mosaic::blank(3).find_caps().is_empty());
    }

    #[test]
    fn straight_cut() {
        assert!(unknot2().straight_cut_split().is_none());
        let m = parse_mosaic("0 2 1 0\n2 10 9 1\n3 9 7 4\n0 3 4 0").unwrap();
        assert!(m.straight_cut_split().is_none());
        // granny-style composite: two trefoil tangles stacked vertically,
        // joined by two segments across the line between rows 2 and 3
        let g = parse_mosaic(
            "0 2 1 0 0 0 0\n2 10 9 1 0 0 0\n3 9 7 4 0 0 0\n0 6 6 0 0 0 0\n2 10 8 1 0 0 0\n3 9 10 4 0 0 0\n0 3 4 0 0 0 0",
        )
        .unwrap();
        assert!(g.is_suitably_connected().is_ok());
        assert_eq!(g.trace().unwrap().len(), 1);
        assert!(g.straight_cut_split().is_some());
    }

    #[test]
    fn connection_points_even() {
        for m in [unknot2(), parse_mosaic("0 2 1 0\n2 10 9 1\n3 9 7 4\n0 3 4 0").unwrap()] {
            let total: usize = m
                .positions()
                .map(|(r, c)| m.get(r, c).connection_points().unwrap().len())
                .sum();
            assert_eq!(total % 2, 0);
            let consumed: usize =
                m.trace().unwrap().iter().map(|s| s.steps.len() * 2).sum();
            assert_eq!(consumed, total);
        }
    }

    #[test]
    fn all_tiles_have_tokens() {
        for t in TILES {
            assert!(Cell::parse(&Cell::Det(t).token()).is_ok());
        }
    }
}
