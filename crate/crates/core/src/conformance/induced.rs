//! Orders induced by a segment system at a base point, and the global order
//! of a diagonally translation-invariant system.
//!
//! On the side `[s_p, ∞)` (`s_p = p.x + p.y`) a segment from `p` into the
//! upper-right quadrant that goes right at diagonal `D` and up at diagonal `E`
//! records `D ≺_p E`. The side `(-∞, s_p - 1]` is handled by reflecting the
//! system through `p`, which maps diagonal `D` to `2·s_p - 1 - D`. The two
//! sides are never compared with each other.

use std::cmp::Ordering;

use thiserror::Error;

use super::{check_translation_invariance, Violation, Window};
use crate::order::{IntegerInterval, PermutationOrder, TotalOrder};
use crate::segment::{DigitalSegment, GridPoint, SegmentError, SegmentOracle};

#[derive(Debug, Error)]
pub enum ExtractError {
    #[error(transparent)]
    Segment(#[from] SegmentError),
    #[error("domain {domain} straddles the base diagonal {base}")]
    Straddles { base: i64, domain: IntegerInterval },
    #[error("segment {p}-{q} is not a monotone path from {p}")]
    NotMonotone { p: GridPoint, q: GridPoint },
    #[error("no segment from the base point splits at diagonal {diagonal}")]
    NoSplit { diagonal: i64 },
    #[error("both {d} before {e} and {e} before {d} were observed")]
    Conflict { d: i64, e: i64 },
    #[error("no segment relates {d} and {e}")]
    Undecided { d: i64, e: i64 },
    #[error("derived relation is not transitive at {d}, {e}")]
    NotTransitive { d: i64, e: i64 },
}

impl ExtractError {
    fn map_diagonals(self, f: impl Fn(i64) -> i64) -> Self {
        match self {
            ExtractError::NoSplit { diagonal } => ExtractError::NoSplit { diagonal: f(diagonal) },
            ExtractError::Conflict { d, e } => ExtractError::Conflict { d: f(d), e: f(e) },
            ExtractError::Undecided { d, e } => ExtractError::Undecided { d: f(d), e: f(e) },
            ExtractError::NotTransitive { d, e } => ExtractError::NotTransitive { d: f(d), e: f(e) },
            other => other,
        }
    }
}

/// A strict total order on `domain`, stored as the ≺-increasing list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InducedOrder {
    base_point: GridPoint,
    domain: IntegerInterval,
    ranking: Vec<i64>,
    /// `rank[x - domain.lo]`.
    rank: Vec<u32>,
}

impl InducedOrder {
    fn new(base_point: GridPoint, domain: IntegerInterval, ranking: Vec<i64>) -> Self {
        let mut rank = vec![0u32; ranking.len()];
        for (r, &x) in ranking.iter().enumerate() {
            rank[(x - domain.lo()) as usize] = r as u32;
        }
        Self {
            base_point,
            domain,
            ranking,
            rank,
        }
    }

    pub fn base_point(&self) -> GridPoint {
        self.base_point
    }

    pub fn domain(&self) -> IntegerInterval {
        self.domain
    }

    /// Elements of the domain in ≺-increasing order.
    pub fn ranking(&self) -> &[i64] {
        &self.ranking
    }

    pub fn compare(&self, d: i64, e: i64) -> Option<Ordering> {
        if !self.domain.contains(d) || !self.domain.contains(e) {
            return None;
        }
        let lo = self.domain.lo();
        Some(self.rank[(d - lo) as usize].cmp(&self.rank[(e - lo) as usize]))
    }

    pub fn precedes(&self, d: i64, e: i64) -> Option<bool> {
        self.compare(d, e).map(|o| o == Ordering::Less)
    }

    /// The relation as a set of pairs `(D, E)` with `D ≺ E`.
    pub fn pairs(&self) -> Vec<(i64, i64)> {
        let mut out = Vec::new();
        for (i, &d) in self.ranking.iter().enumerate() {
            for &e in &self.ranking[i + 1..] {
                out.push((d, e));
            }
        }
        out
    }

    pub fn to_total_order(&self) -> TotalOrder {
        let perm = PermutationOrder::from_ranking(self.domain.lo(), self.domain.hi(), &self.ranking)
            .expect("ranking is a permutation of the domain");
        TotalOrder::Permutation(perm)
    }
}

/// View of a system reflected through `center`.
struct PointReflection<'a, O: ?Sized> {
    inner: &'a O,
    center: GridPoint,
}

impl<O: SegmentOracle + ?Sized> PointReflection<'_, O> {
    fn map(&self, p: GridPoint) -> GridPoint {
        GridPoint::new(2 * self.center.x - p.x, 2 * self.center.y - p.y)
    }
}

impl<O: SegmentOracle + ?Sized> SegmentOracle for PointReflection<'_, O> {
    fn segment(&self, p: GridPoint, q: GridPoint) -> Result<DigitalSegment, SegmentError> {
        let seg = self.inner.segment(self.map(p), self.map(q))?;
        Ok(DigitalSegment::from_points(
            seg.points().iter().map(|&r| self.map(r)).collect(),
        ))
    }
}

/// The order `≺_p` restricted to `domain`, which must lie entirely on one
/// side of `p.x + p.y`.
pub fn extract_order<O: SegmentOracle + ?Sized>(
    oracle: &O,
    p: GridPoint,
    domain: IntegerInterval,
) -> Result<InducedOrder, ExtractError> {
    let base = p.diagonal();
    if domain.lo() >= base {
        let ranking = upper_ranking(oracle, p, domain)?;
        return Ok(InducedOrder::new(p, domain, ranking));
    }
    if domain.hi() < base {
        let flip = |d: i64| 2 * base - 1 - d;
        let view = PointReflection {
            inner: oracle,
            center: p,
        };
        let mirrored = IntegerInterval::new(flip(domain.hi()), flip(domain.lo())).expect("non-empty");
        let ranking = upper_ranking(&view, p, mirrored).map_err(|e| e.map_diagonals(flip))?;
        let ranking = ranking.into_iter().map(flip).collect();
        return Ok(InducedOrder::new(p, domain, ranking));
    }
    Err(ExtractError::Straddles { base, domain })
}

fn upper_ranking<O: SegmentOracle + ?Sized>(
    oracle: &O,
    p: GridPoint,
    domain: IntegerInterval,
) -> Result<Vec<i64>, ExtractError> {
    let base = p.diagonal();
    let lo = domain.lo();
    let n = domain.len() as usize;
    // before[i * n + j]: i ≺ j observed (offsets into the domain).
    let mut before = vec![false; n * n];
    let in_domain = |d: i64| (d >= lo && d <= domain.hi()).then(|| (d - lo) as usize);

    for e in domain.iter() {
        let reach = e + 1 - base;
        let mut split_seen = false;
        // Step taken at diagonal `e`, keyed by the x of the point there.
        let mut at_e: Vec<(i64, bool)> = Vec::with_capacity(reach as usize + 1);
        for i in 0..=reach {
            let r = p.offset(i, reach - i);
            let steps = walk_steps(oracle, p, r)?;
            let (mut rights, mut ups) = (Vec::new(), Vec::new());
            for (k, &up) in steps.iter().enumerate() {
                if let Some(d) = in_domain(base + k as i64) {
                    if up {
                        ups.push(d);
                    } else {
                        rights.push(d);
                    }
                }
            }
            for &d in &rights {
                for &u in &ups {
                    before[d * n + u] = true;
                }
            }
            let x_at_e = p.x + steps[..(e - base) as usize].iter().filter(|&&up| !up).count() as i64;
            at_e.push((x_at_e, steps[(e - base) as usize]));
        }
        at_e.sort_unstable();
        for w in at_e.windows(2) {
            if w[0].0 == w[1].0 && w[0].1 != w[1].1 {
                split_seen = true;
                break;
            }
        }
        if !split_seen {
            return Err(ExtractError::NoSplit { diagonal: e });
        }
    }

    for i in 0..n {
        for j in i + 1..n {
            let (d, e) = (lo + i as i64, lo + j as i64);
            match (before[i * n + j], before[j * n + i]) {
                (true, true) => return Err(ExtractError::Conflict { d, e }),
                (false, false) => return Err(ExtractError::Undecided { d, e }),
                _ => {}
            }
        }
    }

    // A tournament is transitive iff the predecessor counts are 0..n.
    let mut by_count: Vec<(usize, usize)> = (0..n)
        .map(|j| ((0..n).filter(|&i| before[i * n + j]).count(), j))
        .collect();
    by_count.sort_unstable();
    for (rank, &(count, j)) in by_count.iter().enumerate() {
        if count != rank {
            let k = by_count[rank.saturating_sub(1)].1;
            return Err(ExtractError::NotTransitive {
                d: lo + k as i64,
                e: lo + j as i64,
            });
        }
    }
    Ok(by_count.into_iter().map(|(_, j)| lo + j as i64).collect())
}

/// Step directions (`true` = up) of the segment from `p` to `r`, for `r` in
/// the closed upper-right quadrant of `p`.
fn walk_steps<O: SegmentOracle + ?Sized>(oracle: &O, p: GridPoint, r: GridPoint) -> Result<Vec<bool>, ExtractError> {
    let seg = oracle.segment(p, r)?;
    let pts: Vec<GridPoint> = if seg.first() == Some(p) {
        seg.into_points()
    } else {
        seg.into_points().into_iter().rev().collect()
    };
    let bad = || ExtractError::NotMonotone { p, q: r };
    if pts.first() != Some(&p) || pts.last() != Some(&r) {
        return Err(bad());
    }
    pts.windows(2)
        .map(|w| {
            if w[1] == w[0].offset(0, 1) {
                Ok(true)
            } else if w[1] == w[0].offset(1, 0) {
                Ok(false)
            } else {
                Err(bad())
            }
        })
        .collect()
}

#[derive(Debug, Error)]
pub enum RecoverError {
    #[error("system is not diagonally translation invariant: {0}")]
    Precondition(Violation),
    #[error("orders at {p} and {q} disagree: {a} before {b} at {p} but not at {q}")]
    Conflict { p: GridPoint, q: GridPoint, a: i64, b: i64 },
    #[error(transparent)]
    Extract(#[from] ExtractError),
    #[error(transparent)]
    Segment(#[from] SegmentError),
}

/// Shifts tried when checking translation invariance before recovery.
pub const INVARIANCE_SHIFTS: std::ops::RangeInclusive<i64> = -3..=3;

/// Recovers the single order `≺` with `S = S_≺` on `domain`, comparing the
/// induced orders of several base points below the domain.
pub fn recover_global_order<O: SegmentOracle + ?Sized>(
    oracle: &O,
    w: &Window,
    domain: IntegerInterval,
) -> Result<InducedOrder, RecoverError> {
    if let Some(v) = check_translation_invariance(oracle, w, INVARIANCE_SHIFTS)?
        .into_iter()
        .next()
    {
        return Err(RecoverError::Precondition(v));
    }
    let bases = base_points(w, domain.lo());
    let reference = extract_order(oracle, bases[0], domain)?;
    for &q in &bases[1..] {
        let other = extract_order(oracle, q, domain)?;
        for (a, b) in reference.pairs() {
            if other.precedes(a, b) != Some(true) {
                return Err(RecoverError::Conflict { p: bases[0], q, a, b });
            }
        }
    }
    Ok(reference)
}

/// Base points on up to four distinct diagonals at or below `top`, taken from
/// the window where possible (the scan-first point of each diagonal) and
/// completed outside it so that at least two are compared.
fn base_points(w: &Window, top: i64) -> Vec<GridPoint> {
    let low = w.lo().diagonal();
    let high = w.hi().diagonal().min(top);
    let mut diagonals = vec![high, high - 1, (low + high).div_euclid(2), low];
    diagonals.retain(|&d| d >= low && d <= high);
    diagonals.dedup();
    let mut seen = Vec::new();
    for d in diagonals {
        if !seen.contains(&d) {
            seen.push(d);
        }
    }
    let mut points: Vec<GridPoint> = seen
        .into_iter()
        .filter_map(|d| w.points().find(|r| r.diagonal() == d))
        .collect();
    let mut d = points.last().map_or(top, |r| r.diagonal() - 1);
    while points.len() < 2 {
        points.push(GridPoint::new(d - w.lo().y, w.lo().y));
        d -= 1;
    }
    points
}
