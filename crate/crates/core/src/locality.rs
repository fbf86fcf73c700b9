//! Locality profiles: how far apart on the grid two indices `g` apart can be.
//!
//! For every requested gap the profile scans all start indices (exhaustive up
//! to order [`EXHAUSTIVE_MAX_ORDER`], a fixed-seed uniform subsample above it)
//! and records worst-case and mean distances together with the ratios against
//! `sqrt(g)` and `g`.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::curves::{build_curve, CurveKind, CurveMap, CurveOrder};
use crate::error::{Error, Result};

/// Largest order scanned exhaustively; cost is `O(4^k)` per gap.
pub const EXHAUSTIVE_MAX_ORDER: u32 = 8;
/// Start indices drawn per gap above [`EXHAUSTIVE_MAX_ORDER`].
pub const SUBSAMPLE_SIZE: usize = 1 << 16;
pub const SUBSAMPLE_SEED: u64 = 0x5fc0_10ca_1175;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Norm {
    L1,
    L2,
    Inf,
}

/// `p`-norm distance between the cells at indices `i` and `j`.
pub fn grid_distance(map: &CurveMap, i: usize, j: usize, norm: Norm) -> Result<f64> {
    let a = map.index_to_point(i)?;
    let b = map.index_to_point(j)?;
    Ok(match norm {
        Norm::L1 => f64::from(a.dist_l1(b)),
        Norm::L2 => a.dist_l2(b),
        Norm::Inf => f64::from(a.dist_inf(b)),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct GapRow {
    pub gap: usize,
    pub worst_inf: u32,
    pub worst_l1: u32,
    pub worst_l2: f64,
    pub mean_inf: f64,
    /// `worst_inf / sqrt(gap)`
    pub ratio_sqrt: f64,
    /// `worst_inf / gap`
    pub ratio_lin: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LocalityReport {
    pub kind: CurveKind,
    pub order: CurveOrder,
    pub rows: Vec<GapRow>,
    pub jump_count: usize,
    /// False when the rows come from the fixed-seed subsample.
    pub exhaustive: bool,
}

impl LocalityReport {
    pub fn row(&self, gap: usize) -> Option<&GapRow> {
        self.rows.iter().find(|r| r.gap == gap)
    }
}

pub fn worst_case_profile(map: &CurveMap, gaps: &[usize]) -> Result<LocalityReport> {
    if gaps.is_empty() {
        return Err(Error::InvalidParameter("gap list is empty".into()));
    }
    let cells = map.len();
    if let Some(&g) = gaps.iter().find(|&&g| g == 0 || g >= cells) {
        return Err(Error::InvalidParameter(format!(
            "gap {g} outside 1..{cells} for order {}",
            map.order()
        )));
    }
    let exhaustive = map.order().k() <= EXHAUSTIVE_MAX_ORDER;
    let pts = map.forward();
    let rows = gaps
        .iter()
        .map(|&gap| {
            let mut acc = Accum::default();
            if exhaustive {
                for i in 0..cells - gap {
                    acc.add(pts[i], pts[i + gap]);
                }
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(SUBSAMPLE_SEED ^ gap as u64);
                for _ in 0..SUBSAMPLE_SIZE {
                    let i = rng.random_range(0..cells - gap);
                    acc.add(pts[i], pts[i + gap]);
                }
            }
            acc.finish(gap)
        })
        .collect();
    Ok(LocalityReport {
        kind: map.kind(),
        order: map.order(),
        rows,
        jump_count: map.jump_positions().len(),
        exhaustive,
    })
}

#[derive(Default)]
struct Accum {
    worst_inf: u32,
    worst_l1: u32,
    worst_l2: f64,
    sum_inf: u64,
    count: u64,
}

impl Accum {
    fn add(&mut self, a: crate::curves::GridPoint, b: crate::curves::GridPoint) {
        let inf = a.dist_inf(b);
        self.worst_inf = self.worst_inf.max(inf);
        self.worst_l1 = self.worst_l1.max(a.dist_l1(b));
        self.worst_l2 = self.worst_l2.max(a.dist_l2(b));
        self.sum_inf += u64::from(inf);
        self.count += 1;
    }

    fn finish(self, gap: usize) -> GapRow {
        let g = gap as f64;
        GapRow {
            gap,
            worst_inf: self.worst_inf,
            worst_l1: self.worst_l1,
            worst_l2: self.worst_l2,
            mean_inf: self.sum_inf as f64 / self.count.max(1) as f64,
            ratio_sqrt: f64::from(self.worst_inf) / g.sqrt(),
            ratio_lin: f64::from(self.worst_inf) / g,
        }
    }
}

/// One report per curve kind, in id order, over the same gaps.
pub fn compare_curves(order: CurveOrder, gaps: &[usize]) -> Result<Vec<LocalityReport>> {
    if order.k() > EXHAUSTIVE_MAX_ORDER {
        return Err(Error::InvalidParameter(format!(
            "curve comparison is limited to k <= {EXHAUSTIVE_MAX_ORDER}, got {order}"
        )));
    }
    CurveKind::ALL
        .iter()
        .map(|&kind| worst_case_profile(&build_curve(kind, order), gaps))
        .collect()
}

pub const CSV_HEADER: &str =
    "kind,k,gap,worst_inf,worst_l1,worst_l2,mean_inf,ratio_sqrt,ratio_lin,jump_count";

/// One comma-separated line per (kind, gap), header included.
pub fn to_csv(reports: &[LocalityReport]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for rep in reports {
        for r in &rep.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{:.6},{:.6},{:.6},{:.6},{}",
                rep.kind,
                rep.order,
                r.gap,
                r.worst_inf,
                r.worst_l1,
                r.worst_l2,
                r.mean_inf,
                r.ratio_sqrt,
                r.ratio_lin,
                rep.jump_count
            );
        }
    }
    out
}

pub fn to_text(reports: &[LocalityReport]) -> String {
    let mut out = format!(
        "{:<9} {:>2} {:>6} {:>9} {:>8} {:>9} {:>9} {:>10} {:>9} {:>6}\n",
        "kind",
        "k",
        "gap",
        "worst_inf",
        "worst_l1",
        "worst_l2",
        "mean_inf",
        "ratio_sqrt",
        "ratio_lin",
        "jumps"
    );
    for rep in reports {
        for r in &rep.rows {
            let _ = writeln!(
                out,
                "{:<9} {:>2} {:>6} {:>9} {:>8} {:>9.3} {:>9.3} {:>10.4} {:>9.4} {:>6}",
                rep.kind.name(),
                rep.order,
                r.gap,
                r.worst_inf,
                r.worst_l1,
                r.worst_l2,
                r.mean_inf,
                r.ratio_sqrt,
                r.ratio_lin,
                rep.jump_count
            );
        }
    }
    out
}
