//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
//! Every check recomputes its expectation from first principles rather than
//! reusing library helpers where that would make it circular.

use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sfc_core::curves::{build_curve, CurveKind, CurveMap, CurveOrder, GridPoint};
use sfc_core::equivariance::{find_counterexample, replay, sweep_lemma, ValueKind};
use sfc_core::imaging::{
    decode, encode, export_raw, import_raw, mix, raw_bytes, raw_from_bytes, scatter, LambdaSampler,
    MixupParams,
};
use sfc_core::locality::worst_case_profile;
use sfc_core::signal::{center, decode_wav, encode_wav, AudioClip, CenterParams, SAMPLE_RATE};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const BIJECTIVITY_BUDGET: Duration = Duration::from_secs(5);
const LEMMA_BUDGET: Duration = Duration::from_secs(60);
const LOCALITY_BUDGET: Duration = Duration::from_secs(30);
const LEMMA_TRIALS: u32 = 100;
const WITNESS_TRIALS: u32 = 1000;
const ROUND_TRIP_CLIPS: usize = 1000;
const PCM_STEP: f32 = 1.0 / 32768.0;
const LINEARITY_TOLERANCE: f64 = 1e-12;
const LOCALITY_GAPS: [usize; 5] = [1, 4, 16, 64, 256];
/// Frozen H-curve `worst_inf / sqrt(gap)` over `LOCALITY_GAPS` at k = 6.
const H_RATIO_SQRT_K6: [f64; 5] = [1.0, 1.5, 1.75, 1.875, 1.9375];
const H_RATIO_SQRT_BOUND: f64 = 2.0;
const BETA_DRAWS: usize = 100_000;
const BETA_MEAN_TOLERANCE: f64 = 0.01;
const SEED: u64 = 20_240_611;

fn order(k: u32) -> CurveOrder {
    CurveOrder::new(k).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, budget: Duration) -> Result<Duration, String> {
    let took = start.elapsed();
    ensure(took < budget, || {
        format!("took {took:.2?}, budget {budget:?}")
    })?;
    Ok(took)
}

fn jumps(map: &CurveMap) -> usize {
    map.forward()
        .windows(2)
        .filter(|w| w[0].x.abs_diff(w[1].x).max(w[0].y.abs_diff(w[1].y)) > 1)
        .count()
}

fn bijectivity() -> Outcome {
    let start = Instant::now();
    for kind in CurveKind::ALL {
        for k in 1..=7 {
            let map = build_curve(kind, order(k));
            let n = map.side();
            let mut seen = vec![false; map.len()];
            for (t, p) in map.forward().iter().enumerate() {
                ensure(p.x < n && p.y < n, || {
                    format!("{kind} k={k}: t={t} off grid")
                })?;
                let cell = (p.y * n + p.x) as usize;
                ensure(!seen[cell], || {
                    format!("{kind} k={k}: cell {p:?} visited twice")
                })?;
                seen[cell] = true;
                ensure(map.inverse()[cell] as usize == t, || {
                    format!("{kind} k={k}: inverse[{p:?}] != {t}")
                })?;
            }
        }
    }
    let took = within(start, BIJECTIVITY_BUDGET)?;
    Ok(format!("8 curves x k=1..7, {took:.2?}"))
}

fn continuity_census() -> Outcome {
    // every pair of cells on a 2x2 grid is adjacent in the inf-norm, so k = 1
    // has no jumps at all; the per-class rules start at k = 2
    for kind in CurveKind::ALL {
        let j = jumps(&build_curve(kind, order(1)));
        ensure(j == 0, || format!("{kind} k=1: {j} jumps"))?;
    }
    for k in 2..=7 {
        for kind in CurveKind::ALL {
            let j = jumps(&build_curve(kind, order(k)));
            let expect = match kind {
                CurveKind::Hilbert | CurveKind::H | CurveKind::Scan | CurveKind::Diagonal => j == 0,
                CurveKind::Sweep => j == (1 << k) - 1,
                CurveKind::Z | CurveKind::Gray => j >= 1,
                // not classified by the criterion
                CurveKind::OptR => true,
            };
            ensure(expect, || format!("{kind} k={k}: {j} jumps"))?;
        }
    }
    let sweep3 = jumps(&build_curve(CurveKind::Sweep, order(3)));
    ensure(sweep3 == 7, || format!("sweep k=3: {sweep3} jumps"))?;
    Ok("classes hold for k=2..7, none at k=1, sweep k=3 has 7 jumps".into())
}

fn lemma_positive() -> Outcome {
    let start = Instant::now();
    let s = sweep_lemma(
        CurveKind::Z,
        &[2, 3, 4],
        &[1, 2],
        LEMMA_TRIALS,
        SEED,
        ValueKind::Integer,
    )
    .map_err(|e| e.to_string())?;
    ensure(s.cells.len() == 5, || {
        format!("{} (k, l) cells", s.cells.len())
    })?;
    for c in &s.cells {
        ensure(c.trials >= LEMMA_TRIALS, || {
            format!("k={} l={}: {} trials", c.k, c.l, c.trials)
        })?;
        ensure(
            c.checks == c.trials as usize * (1 << (2 * (c.k - c.l))),
            || format!("k={} l={}: not every shift checked", c.k, c.l),
        )?;
        ensure(c.failed_checks == 0 && c.max_abs_difference == 0.0, || {
            format!(
                "k={} l={}: {} failures, max diff {}",
                c.k, c.l, c.failed_checks, c.max_abs_difference
            )
        })?;
    }
    let checks: usize = s.cells.iter().map(|c| c.checks).sum();
    let took = within(start, LEMMA_BUDGET)?;
    Ok(format!("{checks} bit-exact checks, {took:.2?}"))
}

fn lemma_negative() -> Outcome {
    let w = find_counterexample(CurveKind::Hilbert, 3, 1, WITNESS_TRIALS, SEED)
        .map_err(|e| e.to_string())?
        .ok_or_else(|| format!("no witness in {WITNESS_TRIALS} trials"))?;
    ensure(!w.holds && w.max_abs_difference > 0.0, || {
        format!("witness does not fail: {w:?}")
    })?;
    let again = replay(&w, ValueKind::Integer).map_err(|e| e.to_string())?;
    ensure(again == w, || format!("replay differs: {again:?} vs {w:?}"))?;
    Ok(format!(
        "seed={} d={} max|A-B|={}",
        w.seed.unwrap_or_default(),
        w.d,
        w.max_abs_difference
    ))
}

fn round_trips() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    for i in 0..ROUND_TRIP_CLIPS {
        let kind = CurveKind::ALL[rng.random_range(0..8)];
        let k = rng.random_range(1..=7);
        let len = rng.random_range(0..=order(k).cells());
        let samples: Vec<f32> = (0..len).map(|_| rng.random_range(-1.0f32..=1.0)).collect();
        let clip = AudioClip::new(samples, SAMPLE_RATE).map_err(|e| e.to_string())?;
        let img = encode(&clip, kind, order(k)).map_err(|e| e.to_string())?;
        let back = decode(&img).map_err(|e| e.to_string())?;
        let bits = |c: &AudioClip| c.samples().iter().map(|s| s.to_bits()).collect::<Vec<_>>();
        ensure(bits(&back) == bits(&clip), || {
            format!("clip {i} ({kind}, k={k}) not bit-exact")
        })?;

        let bytes = raw_bytes(&img).map_err(|e| e.to_string())?;
        let parsed = raw_from_bytes(&bytes).map_err(|e| e.to_string())?;
        let pix = |im: &sfc_core::imaging::SfcImage| {
            im.pixels().iter().map(|p| p.to_bits()).collect::<Vec<_>>()
        };
        ensure(
            pix(&parsed) == pix(&img) && parsed.original_len() == len,
            || format!("clip {i}: raw bytes round trip differs"),
        )?;
        if i % 100 == 0 {
            let path = dir.path().join(format!("{i}.sfci"));
            export_raw(&img, &path).map_err(|e| e.to_string())?;
            let file = import_raw(&path).map_err(|e| e.to_string())?;
            ensure(pix(&file) == pix(&img), || {
                format!("clip {i}: file round trip differs")
            })?;
        }

        let wav = decode_wav(&encode_wav(&back)).map_err(|e| e.to_string())?;
        let worst = clip
            .samples()
            .iter()
            .zip(wav.samples())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f32, f32::max);
        ensure(wav.len() == len && worst <= PCM_STEP, || {
            format!("clip {i}: PCM error {worst}")
        })?;
    }
    Ok(format!("{ROUND_TRIP_CLIPS} clips, raw files and PCM16"))
}

fn linearity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 6);
    for kind in CurveKind::ALL {
        for k in 1..=5 {
            let map = build_curve(kind, order(k));
            let n = map.len();
            for integral in [true, false] {
                let draw = |rng: &mut ChaCha8Rng| {
                    if integral {
                        f64::from(rng.random_range(-50i32..=50))
                    } else {
                        rng.random_range(-1.0..1.0)
                    }
                };
                let x: Vec<f64> = (0..n).map(|_| draw(&mut rng)).collect();
                let y: Vec<f64> = (0..n).map(|_| draw(&mut rng)).collect();
                let lambda = if integral {
                    f64::from(rng.random_range(-3i32..=3))
                } else {
                    rng.random_range(0.0..1.0)
                };
                let z: Vec<f64> = x
                    .iter()
                    .zip(&y)
                    .map(|(a, b)| lambda * a + (1.0 - lambda) * b)
                    .collect();
                let lhs = scatter(&z, &map, 0.0).map_err(|e| e.to_string())?;
                let (ex, ey) = (
                    scatter(&x, &map, 0.0).unwrap(),
                    scatter(&y, &map, 0.0).unwrap(),
                );
                let tol = if integral { 0.0 } else { LINEARITY_TOLERANCE };
                for ((l, a), b) in lhs.pixels().iter().zip(ex.pixels()).zip(ey.pixels()) {
                    let r = lambda * a + (1.0 - lambda) * b;
                    ensure((l - r).abs() <= tol, || format!("{kind} k={k}: {l} vs {r}"))?;
                }
            }
        }
    }
    Ok("integer inputs exact, real inputs within 1e-12".into())
}

fn locality() -> Outcome {
    let start = Instant::now();
    let profile = |kind| {
        worst_case_profile(&build_curve(kind, order(6)), &LOCALITY_GAPS).map_err(|e| e.to_string())
    };
    let h = profile(CurveKind::H)?;
    ensure(h.rows[0].worst_inf == 1, || {
        format!("H worst_inf(1) = {}", h.rows[0].worst_inf)
    })?;
    for (row, frozen) in h.rows.iter().zip(H_RATIO_SQRT_K6) {
        ensure(
            row.ratio_sqrt == frozen && row.ratio_sqrt <= H_RATIO_SQRT_BOUND,
            || {
                format!(
                    "H ratio_sqrt({}) = {}, frozen {frozen}",
                    row.gap, row.ratio_sqrt
                )
            },
        )?;
    }
    let sweep = profile(CurveKind::Sweep)?;
    ensure(sweep.rows[0].worst_inf == 63, || {
        format!("Sweep worst_inf(1) = {}", sweep.rows[0].worst_inf)
    })?;
    let scan = profile(CurveKind::Scan)?;
    for row in scan.rows.iter().filter(|r| r.gap < 64) {
        ensure(row.worst_inf as usize >= row.gap, || {
            format!("Scan worst_inf({}) = {}", row.gap, row.worst_inf)
        })?;
    }
    // brute force over all pairs at gap 1 for the sweep figure
    let map = build_curve(CurveKind::Sweep, order(6));
    let brute = (0..map.len() - 1)
        .map(|t| {
            let (a, b): (GridPoint, GridPoint) = (map.forward()[t], map.forward()[t + 1]);
            a.x.abs_diff(b.x).max(a.y.abs_diff(b.y))
        })
        .max()
        .unwrap_or(0);
    ensure(brute == 63, || format!("brute-force sweep gap 1 = {brute}"))?;
    let took = within(start, LOCALITY_BUDGET)?;
    Ok(format!("H ratio_sqrt <= {H_RATIO_SQRT_BOUND}, {took:.2?}"))
}

fn energy_midpoint(samples: &[f32]) -> f64 {
    let (num, den) = samples
        .iter()
        .enumerate()
        .fold((0.0, 0.0), |(n, d), (t, &s)| {
            let e = f64::from(s) * f64::from(s);
            (n + t as f64 * e, d + e)
        });
    num / den
}

fn centering() -> Outcome {
    let p = CenterParams::default();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 8);
    let mut s = vec![0.0f32; 16_000];
    for v in &mut s[..2000] {
        *v = rng.random_range(-1.0..=1.0);
    }
    let clip = AudioClip::new(s, SAMPLE_RATE).map_err(|e| e.to_string())?;
    let mid = energy_midpoint(center(&clip, &p).samples());
    ensure((mid - 8000.0).abs() <= p.window as f64, || {
        format!("energy midpoint at {mid:.1}")
    })?;
    let zeros = AudioClip::silence(16_000, SAMPLE_RATE);
    ensure(center(&zeros, &p) == zeros, || "silence moved".into())?;
    Ok(format!("energy midpoint {mid:.1}"))
}

fn mixup() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 9);
    let random_clip = |rng: &mut ChaCha8Rng| {
        AudioClip::new(
            (0..1000).map(|_| rng.random_range(-1.0f32..=1.0)).collect(),
            SAMPLE_RATE,
        )
        .unwrap()
    };
    let a = encode(&random_clip(&mut rng), CurveKind::Z, order(5)).map_err(|e| e.to_string())?;
    let b = encode(&random_clip(&mut rng), CurveKind::Z, order(5)).map_err(|e| e.to_string())?;
    for lambda in [0.0, 0.25, 0.5, 0.9, 1.0, rng.random_range(0.0..1.0)] {
        let m = mix(&a, &b, lambda).map_err(|e| e.to_string())?;
        for ((&v, &x), &y) in m.pixels().iter().zip(a.pixels()).zip(b.pixels()) {
            let expect = (lambda * f64::from(x) + (1.0 - lambda) * f64::from(y)) as f32;
            ensure(v.to_bits() == expect.to_bits(), || {
                format!("lambda {lambda}: {v} vs {expect}")
            })?;
        }
    }
    let mut sampler = LambdaSampler::new(&MixupParams {
        alpha: 0.2,
        seed: SEED,
    })
    .map_err(|e| e.to_string())?;
    let mut sum = 0.0;
    let mut tails = 0usize;
    for _ in 0..BETA_DRAWS {
        let l = sampler.sample();
        ensure((0.0..=1.0).contains(&l), || {
            format!("lambda {l} outside [0, 1]")
        })?;
        sum += l;
        if !(0.1..=0.9).contains(&l) {
            tails += 1;
        }
    }
    let mean = sum / BETA_DRAWS as f64;
    ensure((mean - 0.5).abs() <= BETA_MEAN_TOLERANCE, || {
        format!("Beta mean {mean:.4}")
    })?;
    // U shape: most of Beta(0.2, 0.2) sits near the ends
    ensure(tails * 2 > BETA_DRAWS, || {
        format!("only {tails} draws near 0 or 1")
    })?;
    Ok(format!("exact mixes, Beta(0.2, 0.2) mean {mean:.4}"))
}

fn sizing() -> Outcome {
    let clip = AudioClip::new(vec![0.5; 16_000], SAMPLE_RATE).map_err(|e| e.to_string())?;
    let img = encode(&clip, CurveKind::Z, order(7)).map_err(|e| e.to_string())?;
    ensure(img.side() == 128 && img.pixels().len() == 128 * 128, || {
        format!("side {}", img.side())
    })?;
    let pad = img.pixels().iter().filter(|&&p| p == 0.0).count();
    ensure(pad == 128 * 128 - 16_000, || format!("{pad} pad cells"))?;
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = dir.path().join("clip.sfci");
    export_raw(&img, &path).map_err(|e| e.to_string())?;
    let size = std::fs::metadata(&path).map_err(|e| e.to_string())?.len();
    ensure(size == 12 + 4 * 16_384, || format!("file is {size} bytes"))?;
    Ok(format!("128x128, {pad} pad cells, {size} bytes"))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("bijectivity", bijectivity),
        ("continuity census", continuity_census),
        ("equivariance, Z holds", lemma_positive),
        ("equivariance, Hilbert witness", lemma_negative),
        ("lossless round trip", round_trips),
        ("linearity", linearity),
        ("locality profile", locality),
        ("centering", centering),
        ("mixup", mixup),
        ("end-to-end sizing", sizing),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .unwrap_or_else(|| "panicked".into()))
        });
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
