//! H curve.
//!
//! The square is cut along its main diagonal into two right isosceles
//! triangles, and each triangle is cut recursively by the altitude from its
//! right angle, walking the halves entry vertex -> apex -> exit vertex. The
//! recursion stops at triangles with axis-parallel legs of two cells: such a
//! triangle owns its apex cell outright and half of the two cells on its
//! hypotenuse. Counting from zero within each half of the square, the `i`-th
//! of these triangles keeps the half-cell on its entry side when `i` has an
//! even number of set bits and the one on its exit side otherwise (the
//! Thue-Morse sequence). With that assignment the walk is a Hamiltonian cycle
//! of unit axis steps starting at the origin.

use super::GridPoint;

type Vertex = (i64, i64);

pub(crate) fn points(k: u32) -> Vec<GridPoint> {
    let n = 1i64 << k;
    let mut walk = Walk {
        leaf: 0,
        out: Vec::with_capacity(1 << (2 * k)),
    };
    walk.triangle((n, 0), (0, 0), (n, n));
    walk.leaf = 0;
    walk.triangle((0, n), (n, n), (0, 0));
    walk.out
}

struct Walk {
    leaf: u64,
    out: Vec<GridPoint>,
}

impl Walk {
    /// Triangle with right angle at `apex`, walked from `entry` to `exit`.
    fn triangle(&mut self, apex: Vertex, entry: Vertex, exit: Vertex) {
        let axis_legs = apex.0 == entry.0 || apex.1 == entry.1;
        let leg = (apex.0 - entry.0).abs().max((apex.1 - entry.1).abs());
        if axis_legs && leg == 2 {
            let apex_cell = cell_at(apex, entry, exit, (1, 1), 4);
            if self.leaf.count_ones().is_multiple_of(2) {
                self.out.push(cell_at(apex, entry, exit, (15, 4), 20));
                self.out.push(apex_cell);
            } else {
                self.out.push(apex_cell);
                self.out.push(cell_at(apex, entry, exit, (4, 15), 20));
            }
            self.leaf += 1;
            return;
        }
        let mid = ((entry.0 + exit.0) / 2, (entry.1 + exit.1) / 2);
        self.triangle(mid, entry, apex);
        self.triangle(mid, apex, exit);
    }
}

/// Cell containing `apex + (s/den)(entry - apex) + (t/den)(exit - apex)`.
fn cell_at(apex: Vertex, entry: Vertex, exit: Vertex, (s, t): (i64, i64), den: i64) -> GridPoint {
    let coord = |a: i64, e: i64, x: i64| (den * a + s * (e - a) + t * (x - a)).div_euclid(den);
    GridPoint::new(
        coord(apex.0, entry.0, exit.0) as u32,
        coord(apex.1, entry.1, exit.1) as u32,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_one_is_a_square_cycle() {
        let expect: Vec<GridPoint> = [(0, 0), (1, 0), (1, 1), (0, 1)]
            .into_iter()
            .map(GridPoint::from)
            .collect();
        assert_eq!(points(1), expect);
    }

    #[test]
    fn closed_cycle_of_unit_steps() {
        for k in 1..=7 {
            let p = points(k);
            assert_eq!(p.len(), 1 << (2 * k));
            for w in p.windows(2) {
                assert_eq!(w[0].dist_l1(w[1]), 1, "k={k}");
            }
            assert_eq!(p[0].dist_l1(*p.last().unwrap()), 1, "k={k} not closed");
        }
    }

    #[test]
    fn each_half_of_the_square_is_one_triangle() {
        // first half of the cycle stays on or above the main diagonal band
        let k = 4;
        let p = points(k);
        let half = p.len() / 2;
        assert!(p[..half].iter().all(|c| c.x + 1 >= c.y));
        assert!(p[half..].iter().all(|c| c.y + 1 >= c.x));
    }
}
