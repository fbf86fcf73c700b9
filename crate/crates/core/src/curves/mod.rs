//! Space-filling curves over `2^k x 2^k` grids.
//!
//! Every curve is materialised as a [`CurveMap`]: a forward table from linear
//! index to [`GridPoint`] and the inverse table from point to index. Points use
//! `x` for the column and `y` for the row, with the origin in the top-left
//! corner.
//!
//! | id | kind     | family        | construction                                  |
//! |----|----------|---------------|-----------------------------------------------|
//! | 0  | Hilbert  | recursive     | four-rule quadrant grammar                    |
//! | 1  | Z        | recursive     | bit de-interleaving (`x` odd bits, `y` even)  |
//! | 2  | Gray     | recursive     | reflected Gray code of the index, then Z      |
//! | 3  | H        | recursive     | bisection of right isosceles triangles        |
//! | 4  | OptR     | recursive     | two-motif quadrant grammar with corner steps  |
//! | 5  | Sweep    | non-recursive | row-major                                     |
//! | 6  | Scan     | non-recursive | boustrophedon rows                            |
//! | 7  | Diagonal | non-recursive | boustrophedon anti-diagonals                  |

mod grammar;
pub mod hcurve;
pub mod hilbert;
pub mod optr;
pub mod raster;
pub mod zorder;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// The eight curves, in id order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CurveKind {
    Hilbert,
    Z,
    Gray,
    H,
    OptR,
    Sweep,
    Scan,
    Diagonal,
}

impl CurveKind {
    pub const ALL: [CurveKind; 8] = [
        CurveKind::Hilbert,
        CurveKind::Z,
        CurveKind::Gray,
        CurveKind::H,
        CurveKind::OptR,
        CurveKind::Sweep,
        CurveKind::Scan,
        CurveKind::Diagonal,
    ];

    /// Stable numeric id used by the file formats.
    pub fn id(self) -> u8 {
        self as u8
    }

    pub fn from_id(id: u8) -> Result<Self> {
        Self::ALL
            .get(id as usize)
            .copied()
            .ok_or(Error::UnknownCurve(id))
    }

    pub fn name(self) -> &'static str {
        match self {
            CurveKind::Hilbert => "hilbert",
            CurveKind::Z => "z",
            CurveKind::Gray => "gray",
            CurveKind::H => "h",
            CurveKind::OptR => "optr",
            CurveKind::Sweep => "sweep",
            CurveKind::Scan => "scan",
            CurveKind::Diagonal => "diagonal",
        }
    }

    /// Recursive curves are built by subdividing cells of the previous order.
    pub fn is_recursive(self) -> bool {
        (self as u8) < 5
    }
}

impl fmt::Display for CurveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CurveKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let kind = match lower.as_str() {
            "hilbert" => CurveKind::Hilbert,
            "z" | "zorder" | "z-order" | "morton" => CurveKind::Z,
            "gray" => CurveKind::Gray,
            "h" | "hcurve" | "h-curve" => CurveKind::H,
            "optr" => CurveKind::OptR,
            "sweep" => CurveKind::Sweep,
            "scan" => CurveKind::Scan,
            "diagonal" => CurveKind::Diagonal,
            _ => {
                return Err(Error::InvalidParameter(format!("unknown curve '{s}'")));
            }
        };
        Ok(kind)
    }
}

/// Curve order `k`; the grid side is `2^k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CurveOrder(u32);

impl CurveOrder {
    pub const MIN: u32 = 1;
    pub const MAX: u32 = 13;

    pub fn new(k: u32) -> Result<Self> {
        if (Self::MIN..=Self::MAX).contains(&k) {
            Ok(CurveOrder(k))
        } else {
            Err(Error::OrderOutOfRange(k))
        }
    }

    pub fn k(self) -> u32 {
        self.0
    }

    /// Grid side `N = 2^k`.
    pub fn side(self) -> u32 {
        1 << self.0
    }

    /// Number of cells `4^k`.
    pub fn cells(self) -> usize {
        1 << (2 * self.0)
    }
}

impl fmt::Display for CurveOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Grid cell: `x` is the column, `y` the row.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GridPoint {
    pub x: u32,
    pub y: u32,
}

impl GridPoint {
    pub const fn new(x: u32, y: u32) -> Self {
        GridPoint { x, y }
    }

    /// Chebyshev distance.
    pub fn dist_inf(self, other: GridPoint) -> u32 {
        self.x.abs_diff(other.x).max(self.y.abs_diff(other.y))
    }

    /// Manhattan distance.
    pub fn dist_l1(self, other: GridPoint) -> u32 {
        self.x.abs_diff(other.x) + self.y.abs_diff(other.y)
    }

    pub fn dist_l2(self, other: GridPoint) -> f64 {
        let dx = f64::from(self.x.abs_diff(other.x));
        let dy = f64::from(self.y.abs_diff(other.y));
        dx.hypot(dy)
    }
}

impl From<(u32, u32)> for GridPoint {
    fn from((x, y): (u32, u32)) -> Self {
        GridPoint { x, y }
    }
}

/// Precomputed bijection between `[0, 4^k)` and the `2^k x 2^k` grid.
///
/// Immutable once built, so a single map can be shared between threads.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveMap {
    kind: CurveKind,
    order: CurveOrder,
    forward: Vec<GridPoint>,
    // row-major: inverse[y * side + x]
    inverse: Vec<u32>,
}

/// Build the order-`k` table for `kind`.
pub fn build_curve(kind: CurveKind, order: CurveOrder) -> CurveMap {
    let k = order.k();
    let forward = match kind {
        CurveKind::Hilbert => hilbert::points(k),
        CurveKind::Z => zorder::z_points(k),
        CurveKind::Gray => zorder::gray_points(k),
        CurveKind::H => hcurve::points(k),
        CurveKind::OptR => optr::points(k),
        CurveKind::Sweep => raster::sweep_points(k),
        CurveKind::Scan => raster::scan_points(k),
        CurveKind::Diagonal => raster::diagonal_points(k),
    };
    CurveMap::from_forward(kind, order, forward)
}

impl CurveMap {
    /// Wraps a forward table, deriving the inverse.
    ///
    /// Panics if `forward` is not a permutation of the grid; every builder in
    /// this module produces one, and the tests check it exhaustively.
    fn from_forward(kind: CurveKind, order: CurveOrder, forward: Vec<GridPoint>) -> Self {
        let side = order.side() as usize;
        assert_eq!(forward.len(), order.cells(), "{kind} table has wrong size");
        let mut inverse = vec![u32::MAX; forward.len()];
        for (t, p) in forward.iter().enumerate() {
            let slot = &mut inverse[p.y as usize * side + p.x as usize];
            assert_eq!(*slot, u32::MAX, "{kind} visits {p:?} twice");
            *slot = t as u32;
        }
        CurveMap {
            kind,
            order,
            forward,
            inverse,
        }
    }

    pub fn kind(&self) -> CurveKind {
        self.kind
    }

    pub fn order(&self) -> CurveOrder {
        self.order
    }

    pub fn side(&self) -> u32 {
        self.order.side()
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    pub fn forward(&self) -> &[GridPoint] {
        &self.forward
    }

    /// Row-major table of curve indices.
    pub fn inverse(&self) -> &[u32] {
        &self.inverse
    }

    pub fn index_to_point(&self, t: usize) -> Result<GridPoint> {
        self.forward.get(t).copied().ok_or(Error::IndexOutOfRange {
            index: t,
            cells: self.forward.len(),
        })
    }

    pub fn point_to_index(&self, p: GridPoint) -> Result<usize> {
        let side = self.side();
        if p.x >= side || p.y >= side {
            return Err(Error::PointOutOfRange {
                x: p.x,
                y: p.y,
                side,
            });
        }
        Ok(self.inverse[(p.y * side + p.x) as usize] as usize)
    }

    /// Indices `t` where `forward[t]` and `forward[t + 1]` are not neighbours
    /// (Chebyshev distance above one), in ascending order.
    pub fn jump_positions(&self) -> Vec<usize> {
        self.forward
            .windows(2)
            .enumerate()
            .filter(|(_, w)| w[0].dist_inf(w[1]) > 1)
            .map(|(t, _)| t)
            .collect()
    }

    /// Grid of curve indices, one row per line, for eyeballing a layout.
    pub fn render_indices(&self) -> String {
        let side = self.side() as usize;
        let width = (self.len() - 1).to_string().len();
        let mut out = String::new();
        for row in self.inverse.chunks(side) {
            let line: Vec<String> = row.iter().map(|t| format!("{t:>width$}")).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn map(kind: CurveKind, k: u32) -> CurveMap {
        build_curve(kind, CurveOrder::new(k).unwrap())
    }

    fn pts(v: &[(u32, u32)]) -> Vec<GridPoint> {
        v.iter().copied().map(GridPoint::from).collect()
    }

    #[test]
    fn order_range() {
        assert!(matches!(CurveOrder::new(0), Err(Error::OrderOutOfRange(0))));
        assert!(matches!(
            CurveOrder::new(14),
            Err(Error::OrderOutOfRange(14))
        ));
        let k7 = CurveOrder::new(7).unwrap();
        assert_eq!(k7.side(), 128);
        assert_eq!(k7.cells(), 16384);
    }

    #[test]
    fn ids_are_stable() {
        for (i, kind) in CurveKind::ALL.iter().enumerate() {
            assert_eq!(kind.id() as usize, i);
            assert_eq!(CurveKind::from_id(i as u8).unwrap(), *kind);
            assert_eq!(kind.name().parse::<CurveKind>().unwrap(), *kind);
        }
        assert!(CurveKind::from_id(8).is_err());
        assert!("peano".parse::<CurveKind>().is_err());
    }

    #[test]
    fn z_order_one() {
        assert_eq!(
            map(CurveKind::Z, 1).forward(),
            &pts(&[(0, 0), (0, 1), (1, 0), (1, 1)])[..]
        );
    }

    #[test]
    fn sweep_order_one() {
        assert_eq!(
            map(CurveKind::Sweep, 1).forward(),
            &pts(&[(0, 0), (1, 0), (0, 1), (1, 1)])[..]
        );
    }

    #[test]
    fn z_bit_convention() {
        let z = map(CurveKind::Z, 2);
        assert_eq!(z.index_to_point(0).unwrap(), GridPoint::new(0, 0));
        // 6 = 0b0110: odd bits (3, 1) = 0b01 -> x, even bits (2, 0) = 0b10 -> y
        assert_eq!(z.index_to_point(6).unwrap(), GridPoint::new(1, 2));
    }

    #[test]
    fn sweep_lookups() {
        let s = map(CurveKind::Sweep, 3);
        assert_eq!(s.index_to_point(9).unwrap(), GridPoint::new(1, 1));
        assert_eq!(s.point_to_index(GridPoint::new(1, 1)).unwrap(), 9);
        assert_eq!(
            map(CurveKind::Z, 1)
                .point_to_index(GridPoint::new(0, 0))
                .unwrap(),
            0
        );
    }

    #[test]
    fn lookups_reject_out_of_range() {
        let s = map(CurveKind::Hilbert, 2);
        assert!(matches!(
            s.index_to_point(16),
            Err(Error::IndexOutOfRange {
                index: 16,
                cells: 16
            })
        ));
        assert!(matches!(
            s.point_to_index(GridPoint::new(4, 0)),
            Err(Error::PointOutOfRange { .. })
        ));
        assert!(s.point_to_index(GridPoint::new(0, 4)).is_err());
    }

    #[test]
    fn hilbert_two_is_unit_stepped() {
        let h = map(CurveKind::Hilbert, 2);
        assert_eq!(h.len(), 16);
        for w in h.forward().windows(2) {
            assert_eq!(w[0].dist_l1(w[1]), 1);
        }
    }

    #[test]
    fn jump_census_order_three() {
        assert!(map(CurveKind::Hilbert, 3).jump_positions().is_empty());
        assert!(map(CurveKind::Scan, 3).jump_positions().is_empty());
        assert_eq!(
            map(CurveKind::Sweep, 3).jump_positions(),
            vec![7, 15, 23, 31, 39, 47, 55]
        );
        assert!(!map(CurveKind::Z, 3).jump_positions().is_empty());
    }

    #[test]
    fn every_kind_covers_the_grid_at_order_three() {
        for kind in CurveKind::ALL {
            let m = map(kind, 3);
            let mut seen = [false; 64];
            for p in m.forward() {
                let cell = (p.y * 8 + p.x) as usize;
                assert!(!seen[cell], "{kind} revisits {p:?}");
                seen[cell] = true;
            }
            assert!(seen.iter().all(|&s| s));
        }
    }

    #[test]
    fn render_shows_layout() {
        let text = map(CurveKind::Sweep, 1).render_indices();
        assert_eq!(text, "0 1\n2 3\n");
    }
}
