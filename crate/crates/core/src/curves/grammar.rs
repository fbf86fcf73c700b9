//! Quadrant grammars: a curve is a set of motifs, each of which visits the
//! four quadrants of its block in a fixed order, with every quadrant filled by
//! a (possibly transformed) motif one order lower.
//!
//! Transforms are elements of the square's symmetry group, stored as integer
//! 2x2 matrices acting on doubled, centred coordinates (`2u - (n - 1)`), so a
//! transform never depends on the block size.

use super::GridPoint;

/// Square symmetry as a signed permutation matrix `[[a, b], [c, d]]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Sym([[i32; 2]; 2]);

impl Sym {
    pub const ID: Sym = Sym([[1, 0], [0, 1]]);
    /// Swap x and y.
    pub const TRANSPOSE: Sym = Sym([[0, 1], [1, 0]]);
    /// Reflection through the anti-diagonal.
    pub const ANTI_TRANSPOSE: Sym = Sym([[0, -1], [-1, 0]]);
    /// Quarter turn clockwise on screen (y grows downwards).
    pub const ROT_CW: Sym = Sym([[0, -1], [1, 0]]);
    /// Mirror top and bottom.
    pub const FLIP_Y: Sym = Sym([[1, 0], [0, -1]]);

    fn apply(self, (u, v): (i32, i32)) -> (i32, i32) {
        let [[a, b], [c, d]] = self.0;
        (a * u + b * v, c * u + d * v)
    }

    fn then(self, inner: Sym) -> Sym {
        let [[a, b], [c, d]] = self.0;
        let [[e, f], [g, h]] = inner.0;
        Sym([
            [a * e + b * g, a * f + b * h],
            [c * e + d * g, c * f + d * h],
        ])
    }
}

/// One quadrant of a production: which canonical quadrant, which motif fills
/// it, and how that motif is oriented inside the quadrant.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Child {
    pub quadrant: (u32, u32),
    pub motif: usize,
    pub sym: Sym,
}

/// Productions indexed by motif; each lists its quadrants in visiting order.
pub(crate) struct Grammar<'a> {
    pub productions: &'a [[Child; 4]],
}

impl Grammar<'_> {
    /// Expands `root` to order `k` with the identity orientation.
    pub fn expand(&self, root: usize, k: u32) -> Vec<GridPoint> {
        let mut out = Vec::with_capacity(1 << (2 * k));
        self.walk(root, Sym::ID, (0, 0), 1 << k, &mut out);
        out
    }

    fn walk(
        &self,
        motif: usize,
        sym: Sym,
        origin: (u32, u32),
        size: u32,
        out: &mut Vec<GridPoint>,
    ) {
        if size == 1 {
            out.push(GridPoint::new(origin.0, origin.1));
            return;
        }
        let half = size / 2;
        for child in &self.productions[motif] {
            let (qx, qy) = child.quadrant;
            let centre = (2 * qx as i32 - 1, 2 * qy as i32 - 1);
            let (ax, ay) = sym.apply(centre);
            let child_origin = (
                origin.0 + half * ((ax + 1) / 2) as u32,
                origin.1 + half * ((ay + 1) / 2) as u32,
            );
            self.walk(child.motif, sym.then(child.sym), child_origin, half, out);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn corner(sym: Sym, p: (i32, i32)) -> (i32, i32) {
        sym.apply(p)
    }

    const TL: (i32, i32) = (-1, -1);
    const TR: (i32, i32) = (1, -1);
    const BL: (i32, i32) = (-1, 1);
    const BR: (i32, i32) = (1, 1);

    #[test]
    fn named_symmetries_move_corners() {
        assert_eq!(corner(Sym::TRANSPOSE, TR), BL);
        assert_eq!(corner(Sym::ANTI_TRANSPOSE, TL), BR);
        assert_eq!(corner(Sym::ANTI_TRANSPOSE, TR), TR);
        assert_eq!(corner(Sym::ROT_CW, TL), TR);
        assert_eq!(corner(Sym::ROT_CW, TR), BR);
        assert_eq!(corner(Sym::FLIP_Y, TL), BL);
        assert_eq!(corner(Sym::FLIP_Y, BR), TR);
    }

    #[test]
    fn composition_is_matrix_product() {
        let r2 = Sym::ROT_CW.then(Sym::ROT_CW);
        assert_eq!(corner(r2, TL), BR);
        let r4 = r2.then(r2);
        assert_eq!(r4, Sym::ID);
        assert_eq!(Sym::TRANSPOSE.then(Sym::TRANSPOSE), Sym::ID);
    }
}
