//! Hausdorff distance between a digital segment and the Euclidean segment
//! joining its endpoints, and the `√5 · log2 L` bound for 2-adic segments.
//!
//! Squared distances from lattice points to a lattice segment are rationals
//! with the common denominator `|q - p|²`, so every comparison here is done
//! on integers.

use std::cmp::Ordering;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::conformance::Window;
use crate::order::TotalOrder;
use crate::segment::{order_segment, DigitalSegment, GridPoint, SegmentError};

#[derive(Debug, Error)]
pub enum HausdorffError {
    #[error(transparent)]
    Segment(#[from] SegmentError),
    #[error("{0} is not on the segment")]
    NotOnSegment(GridPoint),
    #[error("reverse distance {reverse} exceeds forward distance {forward}")]
    ReverseExceedsForward { forward: f64, reverse: f64 },
    #[error("empty segment")]
    Empty,
}

/// Exact non-negative rational `num / den`, `den > 0`. Equality is by value.
#[derive(Debug, Clone, Copy)]
pub struct SquaredRational {
    pub num: u128,
    pub den: u128,
}

impl SquaredRational {
    pub fn integer(v: u128) -> Self {
        Self { num: v, den: 1 }
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

/// Compares `a/b` with `c/d` by continued-fraction expansion; never overflows.
fn cmp_fractions(mut a: u128, mut b: u128, mut c: u128, mut d: u128) -> Ordering {
    let mut flipped = false;
    loop {
        let (qa, ra) = (a / b, a % b);
        let (qc, rc) = (c / d, c % d);
        let ord = qa.cmp(&qc);
        if ord != Ordering::Equal {
            return if flipped { ord.reverse() } else { ord };
        }
        match (ra == 0, rc == 0) {
            (true, true) => return Ordering::Equal,
            (true, false) => return if flipped { Ordering::Greater } else { Ordering::Less },
            (false, true) => return if flipped { Ordering::Less } else { Ordering::Greater },
            _ => {}
        }
        // a/b = q + ra/b, so compare b/ra with d/rc the other way round.
        (a, b, c, d) = (b, ra, d, rc);
        flipped = !flipped;
    }
}

impl Ord for SquaredRational {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.den == other.den {
            return self.num.cmp(&other.num);
        }
        cmp_fractions(self.num, self.den, other.num, other.den)
    }
}

impl PartialEq for SquaredRational {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for SquaredRational {}

impl PartialOrd for SquaredRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Distance {
    pub value: f64,
    pub squared: Option<SquaredRational>,
}

impl Distance {
    pub const ZERO: Distance = Distance {
        value: 0.0,
        squared: Some(SquaredRational { num: 0, den: 1 }),
    };

    fn exact(sq: SquaredRational) -> Self {
        Self {
            value: sq.to_f64().sqrt(),
            squared: Some(sq),
        }
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// `|r - pq|²` scaled by `|q - p|²` (or by 1 when `p = q`).
fn scaled_squared(r: GridPoint, p: GridPoint, q: GridPoint) -> u128 {
    let (vx, vy) = ((q.x - p.x) as i128, (q.y - p.y) as i128);
    let (wx, wy) = ((r.x - p.x) as i128, (r.y - p.y) as i128);
    let vv = vx * vx + vy * vy;
    let ww = (wx * wx + wy * wy) as u128;
    if vv == 0 {
        return ww;
    }
    let dot = wx * vx + wy * vy;
    if dot <= 0 {
        return ww * vv as u128;
    }
    if dot >= vv {
        let (ux, uy) = ((r.x - q.x) as i128, (r.y - q.y) as i128);
        return (ux * ux + uy * uy) as u128 * vv as u128;
    }
    let cross = wx * vy - wy * vx;
    (cross * cross) as u128
}

fn common_den(p: GridPoint, q: GridPoint) -> u128 {
    let (vx, vy) = ((q.x - p.x) as i128, (q.y - p.y) as i128);
    ((vx * vx + vy * vy) as u128).max(1)
}

/// Euclidean distance from `r` to the closed segment `pq`.
pub fn point_to_euclidean_segment(r: GridPoint, p: GridPoint, q: GridPoint) -> Distance {
    Distance::exact(SquaredRational {
        num: scaled_squared(r, p, q),
        den: common_den(p, q),
    })
}

/// Largest distance from a point of `seg` to the chord between its endpoints.
/// The chord's points are never farther from the digital path, so this is the
/// Hausdorff distance.
pub fn hausdorff_distance(seg: &DigitalSegment) -> Distance {
    let (Some(p), Some(q)) = (seg.first(), seg.last()) else {
        return Distance::ZERO;
    };
    let num = seg.points().iter().map(|&r| scaled_squared(r, p, q)).max().unwrap_or(0);
    Distance::exact(SquaredRational {
        num,
        den: common_den(p, q),
    })
}

/// [`hausdorff_distance`] plus a sampled estimate of the distance from the
/// chord to the path, taken at `64·L + 1` evenly spaced chord points. The
/// path is the polyline through the segment's points: against the bare point
/// set a chord midpoint between two lattice points of a straight segment is
/// already 1/2 away.
pub fn hausdorff_distance_checked(seg: &DigitalSegment) -> Result<Distance, HausdorffError> {
    let forward = hausdorff_distance(seg);
    let (Some(p), Some(q)) = (seg.first(), seg.last()) else {
        return Err(HausdorffError::Empty);
    };
    let samples = 64 * seg.l1_length().max(1);
    let mut reverse = 0f64;
    for i in 0..=samples {
        let t = i as f64 / samples as f64;
        let vx = p.x as f64 + t * (q.x - p.x) as f64;
        let vy = p.y as f64 + t * (q.y - p.y) as f64;
        let nearest = if seg.len() == 1 {
            (p.x as f64 - vx).hypot(p.y as f64 - vy)
        } else {
            seg.points()
                .windows(2)
                .map(|e| distance_to_edge(vx, vy, e[0], e[1]))
                .fold(f64::INFINITY, f64::min)
        };
        reverse = reverse.max(nearest);
    }
    if reverse > forward.value + 1e-9 {
        return Err(HausdorffError::ReverseExceedsForward {
            forward: forward.value,
            reverse,
        });
    }
    Ok(forward)
}

fn distance_to_edge(vx: f64, vy: f64, a: GridPoint, b: GridPoint) -> f64 {
    let (ex, ey) = ((b.x - a.x) as f64, (b.y - a.y) as f64);
    let (wx, wy) = (vx - a.x as f64, vy - a.y as f64);
    let len2 = ex * ex + ey * ey;
    let t = if len2 == 0.0 {
        0.0
    } else {
        ((wx * ex + wy * ey) / len2).clamp(0.0, 1.0)
    };
    (wx - t * ex).hypot(wy - t * ey)
}

/// `(x + 1/2) / sqrt(x² + 1)`; its maximum over `x >= 0` is `√5/2`, at `x = 2`.
pub fn lemma2_ratio(x: f64) -> f64 {
    (x + 0.5) / (x * x + 1.0).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundCheck {
    pub holds: bool,
    /// `L < 2`: the logarithm is not positive and nothing is claimed.
    pub vacuous: bool,
    pub l1: u64,
    pub distance: Distance,
    pub bound: f64,
}

/// `H ≤ √5 · log2 L` with `L` the L1 length of the endpoint pair.
///
/// For `L` a power of two the comparison `H² ≤ 5 m²` is exact. Otherwise
/// `log2 L` is transcendental, so `H` (the root of a rational) cannot equal
/// the bound and a floating comparison cannot be fooled by a tie.
pub fn check_bound(seg: &DigitalSegment) -> BoundCheck {
    let distance = hausdorff_distance(seg);
    let l1 = seg.l1_length();
    if l1 < 2 {
        return BoundCheck {
            holds: true,
            vacuous: true,
            l1,
            distance,
            bound: 0.0,
        };
    }
    let log = (l1 as f64).log2();
    let bound = 5f64.sqrt() * log;
    let sq = distance.squared.expect("lattice distances are exact");
    let holds = if l1.is_power_of_two() {
        let m = l1.trailing_zeros() as u128;
        sq <= SquaredRational::integer(5 * m * m)
    } else {
        sq.to_f64() <= 5.0 * log * log
    };
    BoundCheck {
        holds,
        vacuous: false,
        l1,
        distance,
        bound,
    }
}

/// `H(rs, S(r, s)) ≤ 2 · H(pq, S(p, q))` for `r`, `s` on `S(p, q)`.
pub fn check_subsegment_inequality(
    order: &TotalOrder,
    p: GridPoint,
    q: GridPoint,
    r: GridPoint,
    s: GridPoint,
) -> Result<bool, HausdorffError> {
    let outer = order_segment(order, p, q)?;
    for x in [r, s] {
        if !outer.contains(&x) {
            return Err(HausdorffError::NotOnSegment(x));
        }
    }
    let inner = order_segment(order, r, s)?;
    let h_outer = hausdorff_distance(&outer).squared.expect("exact");
    let h_inner = hausdorff_distance(&inner).squared.expect("exact");
    let four_outer = SquaredRational {
        num: h_outer.num * 4,
        den: h_outer.den,
    };
    Ok(h_inner <= four_outer)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepMode {
    /// Every unordered pair of distinct points of the window.
    Exhaustive(Window),
    /// `count` pairs: `p` uniform in `[-2^20, 2^20]²`, `L` uniform in
    /// `[1, max_l]`, then a uniform split of `L` into `|dx| + |dy|` with a
    /// random sign on `dy`.
    Random { count: u64, max_l: u64, seed: u64 },
}

/// One measured pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub p: GridPoint,
    pub q: GridPoint,
    pub l1: u64,
    pub distance: Distance,
    pub bound: f64,
    /// `H / log2 L`, or 0 for `L < 2`.
    pub ratio: f64,
    pub holds: bool,
}

impl SweepRow {
    pub const CSV_HEADER: &'static str = "px,py,qx,qy,L,hausdorff,bound,ratio";

    fn measure(order: &TotalOrder, p: GridPoint, q: GridPoint) -> Result<Self, SegmentError> {
        let seg = order_segment(order, p, q)?;
        let check = check_bound(&seg);
        let ratio = if check.vacuous {
            0.0
        } else {
            check.distance.value / (check.l1 as f64).log2()
        };
        Ok(Self {
            p,
            q,
            l1: check.l1,
            distance: check.distance,
            bound: check.bound,
            ratio,
            holds: check.holds,
        })
    }

    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{:.9},{:.9},{:.9}",
            self.p.x, self.p.y, self.q.x, self.q.y, self.l1, self.distance.value, self.bound, self.ratio
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    /// Per `L`, ascending: the pair with the largest `H` (first in sweep order
    /// on ties).
    pub rows: Vec<SweepRow>,
    pub pairs: u64,
    /// Non-vacuous pairs that break the bound.
    pub failures: Vec<SweepRow>,
    pub max_ratio: f64,
}

/// The pairs a sweep visits, in order.
pub fn sweep_pairs(mode: &SweepMode) -> Box<dyn Iterator<Item = (GridPoint, GridPoint)> + Send> {
    match *mode {
        SweepMode::Exhaustive(w) => {
            let n = w.len();
            Box::new((0..n).flat_map(move |i| (i + 1..n).map(move |j| (w.point_at(i), w.point_at(j)))))
        }
        SweepMode::Random { count, max_l, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let span = 1i64 << 20;
            Box::new((0..count).map(move |_| {
                let p = GridPoint::new(rng.gen_range(-span..=span), rng.gen_range(-span..=span));
                let l = rng.gen_range(1..=max_l.max(1)) as i64;
                let dx = rng.gen_range(0..=l);
                let dy = if rng.gen_bool(0.5) { l - dx } else { dx - l };
                (p, p.offset(dx, dy))
            }))
        }
    }
}

/// Measures every pair of the sweep; `each` sees the rows in sweep order.
pub fn sweep_with<F: FnMut(&SweepRow)>(
    order: &TotalOrder,
    mode: &SweepMode,
    mut each: F,
) -> Result<SweepReport, SegmentError> {
    let mut pairs = sweep_pairs(mode);
    let mut total = 0u64;
    let mut best: Vec<Option<SweepRow>> = Vec::new();
    let mut failures = Vec::new();
    let mut max_ratio = 0f64;
    loop {
        let chunk: Vec<(GridPoint, GridPoint)> = pairs.by_ref().take(1 << 16).collect();
        if chunk.is_empty() {
            break;
        }
        total += chunk.len() as u64;
        let rows: Vec<SweepRow> = chunk
            .par_iter()
            .map(|&(p, q)| SweepRow::measure(order, p, q))
            .collect::<Result<_, _>>()?;
        for row in rows {
            each(&row);
            let l = row.l1 as usize;
            if best.len() <= l {
                best.resize(l + 1, None);
            }
            let better = match &best[l] {
                None => true,
                Some(old) => row.distance.squared > old.distance.squared,
            };
            if better {
                best[l] = Some(row);
            }
            if !row.holds {
                failures.push(row);
            }
            max_ratio = max_ratio.max(row.ratio);
        }
    }
    Ok(SweepReport {
        rows: best.into_iter().flatten().collect(),
        pairs: total,
        failures,
        max_ratio,
    })
}

pub fn sweep(order: &TotalOrder, mode: &SweepMode) -> Result<SweepReport, SegmentError> {
    sweep_with(order, mode, |_| {})
}
