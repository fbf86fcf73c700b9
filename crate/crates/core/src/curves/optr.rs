//! OptR curve.
//!
//! A recursive curve built from two motifs. `U` enters a block at its top-left
//! corner and leaves at the top-right; `D` enters top-left and leaves at the
//! opposite, bottom-right corner. Each motif splits into quadrants filled by
//! both kinds of motif, and quadrants that touch only at a corner are joined by
//! a diagonal step. Every step therefore has Chebyshev length one, and the
//! first `4^(k-1)` indices always fill one quadrant.
//!
//! ```text
//! U (TL -> TR)            D (TL -> BR)
//!   TL: D                   TL: U
//!   BL: U  rotated cw       TR: U  transposed
//!   BR: D  flipped in y     BL: U  rotated cw      (diagonal step in)
//!   TR: U  anti-transposed  BR: U  flipped in y
//! ```

use super::grammar::{Child, Grammar, Sym};
use super::GridPoint;

const MOTIF_U: usize = 0;
const MOTIF_D: usize = 1;

const PRODUCTIONS: [[Child; 4]; 2] = [
    [
        Child {
            quadrant: (0, 0),
            motif: MOTIF_D,
            sym: Sym::ID,
        },
        Child {
            quadrant: (0, 1),
            motif: MOTIF_U,
            sym: Sym::ROT_CW,
        },
        Child {
            quadrant: (1, 1),
            motif: MOTIF_D,
            sym: Sym::FLIP_Y,
        },
        Child {
            quadrant: (1, 0),
            motif: MOTIF_U,
            sym: Sym::ANTI_TRANSPOSE,
        },
    ],
    [
        Child {
            quadrant: (0, 0),
            motif: MOTIF_U,
            sym: Sym::ID,
        },
        Child {
            quadrant: (1, 0),
            motif: MOTIF_U,
            sym: Sym::TRANSPOSE,
        },
        Child {
            quadrant: (0, 1),
            motif: MOTIF_U,
            sym: Sym::ROT_CW,
        },
        Child {
            quadrant: (1, 1),
            motif: MOTIF_U,
            sym: Sym::FLIP_Y,
        },
    ],
];

pub(crate) fn points(k: u32) -> Vec<GridPoint> {
    Grammar {
        productions: &PRODUCTIONS,
    }
    .expand(MOTIF_U, k)
}
