//! Hilbert curve.
//!
//! The table builder expands the classic four-rule grammar: the `U` motif runs
//! from the top-left to the top-right corner through the quadrants
//! TL, BL, BR, TR; the first quadrant is transposed and the last one reflected
//! through the anti-diagonal so that consecutive quadrants meet edge to edge.
//! [`d2xy`] is the usual iterative bit transformation and produces the same
//! layout.

use super::grammar::{Child, Grammar, Sym};
use super::GridPoint;

const U: [Child; 4] = [
    Child {
        quadrant: (0, 0),
        motif: 0,
        sym: Sym::TRANSPOSE,
    },
    Child {
        quadrant: (0, 1),
        motif: 0,
        sym: Sym::ID,
    },
    Child {
        quadrant: (1, 1),
        motif: 0,
        sym: Sym::ID,
    },
    Child {
        quadrant: (1, 0),
        motif: 0,
        sym: Sym::ANTI_TRANSPOSE,
    },
];

pub(crate) fn points(k: u32) -> Vec<GridPoint> {
    Grammar { productions: &[U] }.expand(0, k)
}

/// Index to point on the order-`k` Hilbert curve without a table.
pub fn d2xy(k: u32, d: u64) -> GridPoint {
    let n = 1u64 << k;
    let (mut x, mut y) = (0u64, 0u64);
    let mut t = d;
    let mut s = 1u64;
    while s < n {
        let rx = 1 & (t / 2);
        let ry = 1 & (t ^ rx);
        if ry == 0 {
            if rx == 1 {
                x = s - 1 - x;
                y = s - 1 - y;
            }
            std::mem::swap(&mut x, &mut y);
        }
        x += s * rx;
        y += s * ry;
        t /= 4;
        s *= 2;
    }
    GridPoint::new(x as u32, y as u32)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grammar_matches_bit_transform() {
        for k in 1..=8 {
            let table = points(k);
            for (d, p) in table.iter().enumerate() {
                assert_eq!(*p, d2xy(k, d as u64), "k={k} d={d}");
            }
        }
    }

    #[test]
    fn starts_and_ends_on_top_corners() {
        for k in 1..=6 {
            let table = points(k);
            let n = 1u32 << k;
            assert_eq!(table[0], GridPoint::new(0, 0));
            assert_eq!(*table.last().unwrap(), GridPoint::new(n - 1, 0));
        }
    }
}
