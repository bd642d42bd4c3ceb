//! The eleven mosaic tiles, their connection points, and the symmetry action.

use crate::Error;
use std::fmt;

/// One side of a unit tile (equivalently, of a grid cell).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Top,
    Right,
    Bottom,
    Left,
}

pub const SIDES: [Side; 4] = [Side::Top, Side::Right, Side::Bottom, Side::Left];

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Top => Side::Bottom,
            Side::Right => Side::Left,
            Side::Bottom => Side::Top,
            Side::Left => Side::Right,
        }
    }

    /// Next side counterclockwise (row 0 drawn at the top): Top -> Left -> Bottom -> Right.
    pub fn ccw(self) -> Side {
        match self {
            Side::Top => Side::Left,
            Side::Left => Side::Bottom,
            Side::Bottom => Side::Right,
            Side::Right => Side::Top,
        }
    }

    pub fn cw(self) -> Side {
        self.ccw().ccw().ccw()
    }

    pub fn bit(self) -> u8 {
        match self {
            Side::Top => 1,
            Side::Right => 2,
            Side::Bottom => 4,
            Side::Left => 8,
        }
    }
}

/// A set of sides, as a 4-bit mask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct SideSet(pub u8);

impl SideSet {
    pub fn empty() -> SideSet {
        SideSet(0)
    }

    pub fn of(sides: &[Side]) -> SideSet {
        SideSet(sides.iter().fold(0, |m, s| m | s.bit()))
    }

    pub fn contains(self, s: Side) -> bool {
        self.0 & s.bit() != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = Side> {
        SIDES.into_iter().filter(move |s| self.contains(*s))
    }
}

/// The tile alphabet. Arcs are quarter circles joining two adjacent sides,
/// segments join opposite sides, double arcs and crossings touch all four sides.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tile {
    /// Blank.
    T0,
    /// Arc joining Bottom and Left.
    T1,
    /// Arc joining Bottom and Right.
    T2,
    /// Arc joining Top and Right.
    T3,
    /// Arc joining Top and Left.
    T4,
    /// Horizontal segment.
    T5,
    /// Vertical segment.
    T6,
    /// Double arc: Top-Left and Bottom-Right.
    T7,
    /// Double arc: Top-Right and Bottom-Left.
    T8,
    /// Crossing, horizontal strand on top.
    T9,
    /// Crossing, vertical strand on top.
    T10,
}

pub const TILES: [Tile; 11] = [
    Tile::T0,
    Tile::T1,
    Tile::T2,
    Tile::T3,
    Tile::T4,
    Tile::T5,
    Tile::T6,
    Tile::T7,
    Tile::T8,
    Tile::T9,
    Tile::T10,
];

impl Tile {
    pub fn index(self) -> usize {
        TILES.iter().position(|t| *t == self).unwrap()
    }

    pub fn from_index(i: usize) -> Option<Tile> {
        TILES.get(i).copied()
    }

    /// Sides touched by a strand.
    pub fn connection_points(self) -> SideSet {
        use Side::*;
        match self {
            Tile::T0 => SideSet::empty(),
            Tile::T1 => SideSet::of(&[Bottom, Left]),
            Tile::T2 => SideSet::of(&[Bottom, Right]),
            Tile::T3 => SideSet::of(&[Top, Right]),
            Tile::T4 => SideSet::of(&[Top, Left]),
            Tile::T5 => SideSet::of(&[Left, Right]),
            Tile::T6 => SideSet::of(&[Top, Bottom]),
            _ => SideSet::of(&[Top, Right, Bottom, Left]),
        }
    }

    pub fn is_crossing(self) -> bool {
        matches!(self, Tile::T9 | Tile::T10)
    }

    pub fn is_blank(self) -> bool {
        self == Tile::T0
    }

    /// The side a strand entering at `from` leaves through, if any.
    pub fn pass(self, from: Side) -> Option<Side> {
        use Side::*;
        let pairs: &[(Side, Side)] = match self {
            Tile::T0 => &[],
            Tile::T1 => &[(Bottom, Left)],
            Tile::T2 => &[(Bottom, Right)],
            Tile::T3 => &[(Top, Right)],
            Tile::T4 => &[(Top, Left)],
            Tile::T5 => &[(Left, Right)],
            Tile::T6 => &[(Top, Bottom)],
            Tile::T7 => &[(Top, Left), (Bottom, Right)],
            Tile::T8 => &[(Top, Right), (Bottom, Left)],
            // strands of a crossing go straight through
            Tile::T9 | Tile::T10 => &[(Top, Bottom), (Left, Right)],
        };
        for &(a, b) in pairs {
            if from == a {
                return Some(b);
            }
            if from == b {
                return Some(a);
            }
        }
        None
    }

    /// For a crossing, the sides of the over strand.
    pub fn over_sides(self) -> Option<SideSet> {
        match self {
            Tile::T9 => Some(SideSet::of(&[Side::Left, Side::Right])),
            Tile::T10 => Some(SideSet::of(&[Side::Top, Side::Bottom])),
            _ => None,
        }
    }

    /// Quarter turn counterclockwise.
    pub fn rotate_ccw(self) -> Tile {
        match self {
            Tile::T0 => Tile::T0,
            Tile::T1 => Tile::T2,
            Tile::T2 => Tile::T3,
            Tile::T3 => Tile::T4,
            Tile::T4 => Tile::T1,
            Tile::T5 => Tile::T6,
            Tile::T6 => Tile::T5,
            Tile::T7 => Tile::T8,
            Tile::T8 => Tile::T7,
            Tile::T9 => Tile::T10,
            Tile::T10 => Tile::T9,
        }
    }

    /// Reflection across the vertical axis (Left and Right swap). Reflections
    /// also exchange the crossing types, so every element of the symmetry
    /// group preserves the knot type of a mosaic.
    pub fn reflect(self) -> Tile {
        match self {
            Tile::T1 => Tile::T2,
            Tile::T2 => Tile::T1,
            Tile::T3 => Tile::T4,
            Tile::T4 => Tile::T3,
            Tile::T7 => Tile::T8,
            Tile::T8 => Tile::T7,
            Tile::T9 => Tile::T10,
            Tile::T10 => Tile::T9,
            t => t,
        }
    }

    /// Swap the crossing type; identity on everything else.
    pub fn switch_crossing(self) -> Tile {
        match self {
            Tile::T9 => Tile::T10,
            Tile::T10 => Tile::T9,
            t => t,
        }
    }
}

/// A cell of a mosaic: either a concrete tile or a nondeterministic token
/// standing for a set of tiles that share a connection-point set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cell {
    Det(Tile),
    /// Any tile with four connection points: T7, T8, T9 or T10.
    FourCp,
    /// Either crossing: T9 or T10.
    Crossing,
    /// Horizontal segment or one of the arcs reachable from it in context;
    /// connection points are not determined, so such cells block tracing.
    SegOrArc,
}

impl Cell {
    /// Connection points, when the token determines them.
    pub fn connection_points(self) -> Option<SideSet> {
        match self {
            Cell::Det(t) => Some(t.connection_points()),
            Cell::FourCp | Cell::Crossing => {
                Some(SideSet::of(&[Side::Top, Side::Right, Side::Bottom, Side::Left]))
            }
            Cell::SegOrArc => None,
        }
    }

    pub fn is_blank(self) -> bool {
        self == Cell::Det(Tile::T0)
    }

    pub fn is_crossing_like(self) -> bool {
        matches!(self, Cell::Crossing) || matches!(self, Cell::Det(t) if t.is_crossing())
    }

    pub fn rotate_ccw(self) -> Cell {
        match self {
            Cell::Det(t) => Cell::Det(t.rotate_ccw()),
            c => c,
        }
    }

    pub fn reflect(self) -> Cell {
        match self {
            Cell::Det(t) => Cell::Det(t.reflect()),
            c => c,
        }
    }

    pub fn switch_crossing(self) -> Cell {
        match self {
            Cell::Det(t) => Cell::Det(t.switch_crossing()),
            c => c,
        }
    }

    pub fn token(self) -> String {
        match self {
            Cell::Det(t) => t.index().to_string(),
            Cell::FourCp => "X4".to_string(),
            Cell::Crossing => "XC".to_string(),
            Cell::SegOrArc => "XS".to_string(),
        }
    }

    pub fn parse(tok: &str) -> Result<Cell, Error> {
        match tok {
            "X4" => return Ok(Cell::FourCp),
            "XC" => return Ok(Cell::Crossing),
            "XS" => return Ok(Cell::SegOrArc),
            _ => {}
        }
        let digits = tok.strip_prefix('T').unwrap_or(tok);
        let i: usize = digits
            .parse()
            .map_err(|_| Error::Parse(format!("bad tile token {tok:?}")))?;
        Tile::from_index(i).map(Cell::Det).ok_or_else(|| Error::Parse(format!("bad tile token {tok:?}")))
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.token())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotation_has_order_four() {
        for t in TILES {
            let r4 = t.rotate_ccw().rotate_ccw().rotate_ccw().rotate_ccw();
            assert_eq!(r4, t);
        }
    }

    #[test]
    fn reflection_is_involution() {
        for t in TILES {
            assert_eq!(t.reflect().reflect(), t);
        }
    }

    #[test]
    fn transforms_act_on_connection_points() {
        for t in TILES {
            let rot: SideSet = SideSet(
                t.connection_points()
                    .iter()
                    .fold(0, |m, s| m | s.ccw().bit()),
            );
            assert_eq!(t.rotate_ccw().connection_points(), rot, "{t:?}");
            let refl_side = |s: Side| match s {
                Side::Left => Side::Right,
                Side::Right => Side::Left,
                s => s,
            };
            let refl: SideSet =
                SideSet(t.connection_points().iter().fold(0, |m, s| m | refl_side(s).bit()));
            assert_eq!(t.reflect().connection_points(), refl, "{t:?}");
        }
    }

    #[test]
    fn arc_cycle() {
        assert_eq!(Tile::T1.rotate_ccw(), Tile::T2);
        assert_eq!(Tile::T2.rotate_ccw(), Tile::T3);
        assert_eq!(Tile::T3.rotate_ccw(), Tile::T4);
        assert_eq!(Tile::T5.rotate_ccw(), Tile::T6);
        assert_eq!(Tile::T9.rotate_ccw(), Tile::T10);
        assert_eq!(Tile::T9.reflect(), Tile::T10);
    }

    #[test]
    fn pass_is_symmetric() {
        for t in TILES {
            for s in SIDES {
                if let Some(out) = t.pass(s) {
                    assert_eq!(t.pass(out), Some(s));
                    assert!(t.connection_points().contains(s));
                    assert!(t.connection_points().contains(out));
                }
            }
        }
    }

    #[test]
    fn tokens_roundtrip() {
        for t in TILES {
            let c = Cell::Det(t);
            assert_eq!(Cell::parse(&c.token()).unwrap(), c);
            assert_eq!(Cell::parse(&format!("T{}", t.index())).unwrap(), c);
        }
        assert_eq!(Cell::parse("X4").unwrap(), Cell::FourCp);
        assert_eq!(Cell::parse("XC").unwrap(), Cell::Crossing);
        assert_eq!(Cell::parse("XS").unwrap(), Cell::SegOrArc);
        assert!(Cell::parse("11").is_err());
        assert!(Cell::parse("x4").is_err());
    }
}
