//! Non-recursive layouts: Sweep, Scan and Diagonal.

use super::GridPoint;

/// Row-major order: the sequence cut into rows of `2^k` and stacked.
pub(crate) fn sweep_points(k: u32) -> Vec<GridPoint> {
    let n = 1u32 << k;
    (0..n)
        .flat_map(|y| (0..n).map(move |x| GridPoint::new(x, y)))
        .collect()
}

/// Like Sweep, with every odd row reversed.
pub(crate) fn scan_points(k: u32) -> Vec<GridPoint> {
    let n = 1u32 << k;
    (0..n)
        .flat_map(|y| {
            (0..n).map(move |i| {
                let x = if y % 2 == 0 { i } else { n - 1 - i };
                GridPoint::new(x, y)
            })
        })
        .collect()
}

/// Scan turned by 45 degrees: anti-diagonals `x + y = s` in turn, alternating
/// direction, clipped to the grid.
pub(crate) fn diagonal_points(k: u32) -> Vec<GridPoint> {
    let n = 1u32 << k;
    let mut out = Vec::with_capacity((n * n) as usize);
    for s in 0..(2 * n - 1) {
        let lo = s.saturating_sub(n - 1);
        let hi = s.min(n - 1);
        if s % 2 == 0 {
            // climb towards the top-right: x ascending
            out.extend((lo..=hi).map(|x| GridPoint::new(x, s - x)));
        } else {
            out.extend((lo..=hi).rev().map(|x| GridPoint::new(x, s - x)));
        }
    }
    out
}
