//! Order-derived segments in `Z^d`.
//!
//! For `p <= q` componentwise the segment interval `[Σp, Σq - 1]` is cut by
//! ≺ into blocks: the `q_d - p_d` greatest sums step in direction `d`, the
//! next `q_{d-1} - p_{d-1}` in direction `d - 1`, and so on down to direction
//! 1 for the smallest. Other slope types are reduced to this case by
//! reflecting the coordinates that decrease; see [`mixed_segment`].

use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::conformance::{Axiom, Violation, WitnessItem};
use crate::order::{OrderError, TotalOrder};

#[derive(Debug, Error)]
pub enum HighDimError {
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error("points of dimension {0} and {1}")]
    DimensionMismatch(usize, usize),
    #[error("{p} to {q} does not have strictly positive slope")]
    NotPositive { p: GridPointD, q: GridPointD },
    #[error("empty box")]
    EmptyBox,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GridPointD(Vec<i64>);

impl GridPointD {
    pub fn new(coords: Vec<i64>) -> Self {
        Self(coords)
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn sum(&self) -> i64 {
        self.0.iter().sum()
    }

    /// Moves `delta` along axis `i` (0-based).
    pub fn step(&self, i: usize, delta: i64) -> Self {
        let mut c = self.0.clone();
        c[i] += delta;
        Self(c)
    }

    pub fn dominated_by(&self, other: &GridPointD) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    fn reflect(&self, signs: &SlopeType) -> Self {
        Self(self.0.iter().zip(&signs.0).map(|(&c, &s)| c * s as i64).collect())
    }
}

impl fmt::Display for GridPointD {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

impl From<&GridPointD> for WitnessItem {
    fn from(p: &GridPointD) -> Self {
        WitnessItem::Point(p.0.clone())
    }
}

/// Per-coordinate signs: `+1` where `p_i <= q_i`, `-1` otherwise.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SlopeType(Vec<i8>);

impl SlopeType {
    pub fn of(p: &GridPointD, q: &GridPointD) -> Self {
        Self(p.0.iter().zip(&q.0).map(|(a, b)| if a <= b { 1 } else { -1 }).collect())
    }

    pub fn positive(d: usize) -> Self {
        Self(vec![1; d])
    }

    pub fn signs(&self) -> &[i8] {
        &self.0
    }
}

/// Axis-aligned box `[lo, hi]` in `Z^d`, iterated lexicographically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoxD {
    lo: Vec<i64>,
    hi: Vec<i64>,
}

impl BoxD {
    pub fn new(lo: Vec<i64>, hi: Vec<i64>) -> Result<Self, HighDimError> {
        if lo.len() != hi.len() {
            return Err(HighDimError::DimensionMismatch(lo.len(), hi.len()));
        }
        if lo.is_empty() || lo.iter().zip(&hi).any(|(a, b)| a > b) {
            return Err(HighDimError::EmptyBox);
        }
        Ok(Self { lo, hi })
    }

    /// `[lo, hi]^d`.
    pub fn cube(d: usize, lo: i64, hi: i64) -> Result<Self, HighDimError> {
        Self::new(vec![lo; d], vec![hi; d])
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn points(&self) -> Vec<GridPointD> {
        let mut out = vec![Vec::new()];
        for (&lo, &hi) in self.lo.iter().zip(&self.hi) {
            out = out
                .into_iter()
                .flat_map(|prefix: Vec<i64>| {
                    (lo..=hi).map(move |c| {
                        let mut v = prefix.clone();
                        v.push(c);
                        v
                    })
                })
                .collect();
        }
        out.into_iter().map(GridPointD).collect()
    }
}

fn check_dims(p: &GridPointD, q: &GridPointD) -> Result<(), HighDimError> {
    if p.dim() != q.dim() {
        return Err(HighDimError::DimensionMismatch(p.dim(), q.dim()));
    }
    Ok(())
}

/// The segment from `p` to `q >= p`.
pub fn segment_d(order: &TotalOrder, p: &GridPointD, q: &GridPointD) -> Result<Vec<GridPointD>, HighDimError> {
    check_dims(p, q)?;
    if !p.dominated_by(q) {
        return Err(HighDimError::NotPositive {
            p: p.clone(),
            q: q.clone(),
        });
    }
    let start = p.sum();
    let steps = (q.sum() - start) as usize;
    let mut keyed: Vec<(u64, usize)> = (0..steps)
        .map(|i| Ok((order.rank_key(start + i as i64)?, i)))
        .collect::<Result<_, OrderError>>()?;
    keyed.sort_unstable_by(|a, b| b.cmp(a));
    let mut direction = vec![0usize; steps];
    let mut next = keyed.iter();
    for axis in (0..p.dim()).rev() {
        let count = (q.0[axis] - p.0[axis]) as usize;
        for &(_, i) in next.by_ref().take(count) {
            direction[i] = axis;
        }
    }
    let mut points = Vec::with_capacity(steps + 1);
    let mut cur = p.clone();
    points.push(cur.clone());
    for &axis in &direction {
        cur = cur.step(axis, 1);
        points.push(cur.clone());
    }
    debug_assert_eq!(&cur, q);
    Ok(points)
}

/// Segment for any slope type: orient the pair so that its last differing
/// coordinate increases, negate the coordinates that then decrease, walk with
/// [`segment_d`] and negate back. In two dimensions this is the usual mirror
/// over the y-axis. The result runs from `p` to `q`.
pub fn mixed_segment(order: &TotalOrder, p: &GridPointD, q: &GridPointD) -> Result<Vec<GridPointD>, HighDimError> {
    check_dims(p, q)?;
    let last_diff = (0..p.dim()).rev().find(|&i| p.0[i] != q.0[i]);
    let flip = matches!(last_diff, Some(i) if p.0[i] > q.0[i]);
    let (a, b) = if flip { (q, p) } else { (p, q) };
    let signs = SlopeType::of(a, b);
    let mut points: Vec<GridPointD> = segment_d(order, &a.reflect(&signs), &b.reflect(&signs))?
        .iter()
        .map(|r| r.reflect(&signs))
        .collect();
    if flip {
        points.reverse();
    }
    Ok(points)
}

fn pts(points: &[&GridPointD]) -> Vec<WitnessItem> {
    points.iter().map(|&p| p.into()).collect()
}

/// S1 to S5 for every pair `p <= q` of the box, with S2 and S3 read from
/// both ends and S4 tried at both ends.
pub fn check_axioms_d(order: &TotalOrder, window: &BoxD) -> Result<Vec<Violation>, HighDimError> {
    let points = window.points();
    let d = window.dim();
    let rows: Vec<Vec<Violation>> = points
        .par_iter()
        .map(|p| {
            let mut out = Vec::new();
            for q in points.iter().filter(|q| p.dominated_by(q)) {
                let seg = segment_d(order, p, q)?;
                let unit = seg
                    .windows(2)
                    .all(|w| w[0].0.iter().zip(&w[1].0).map(|(a, b)| (a - b).abs()).sum::<i64>() == 1);
                if !unit || seg.first() != Some(p) || seg.last() != Some(q) {
                    out.push(Violation::new(Axiom::S1, pts(&[p, q])));
                }
                let back = mixed_segment(order, q, p)?;
                if back.iter().rev().ne(seg.iter()) {
                    out.push(Violation::new(Axiom::S2, pts(&[p, q])));
                }
                for r in &seg {
                    let head = segment_d(order, p, r)?;
                    let tail = segment_d(order, r, q)?;
                    if !head.iter().chain(&tail).all(|x| seg.contains(x)) {
                        out.push(Violation::new(Axiom::S3, pts(&[p, q, r])));
                        break;
                    }
                }
                let mut prolongs = false;
                for i in 0..d {
                    let longer = segment_d(order, p, &q.step(i, 1))?;
                    let earlier = segment_d(order, &p.step(i, -1), q)?;
                    if seg.iter().all(|x| longer.contains(x)) || seg.iter().all(|x| earlier.contains(x)) {
                        prolongs = true;
                        break;
                    }
                }
                if !prolongs {
                    out.push(Violation::new(Axiom::S4, pts(&[p, q])));
                }
                let flat = (0..d).any(|i| p.0[i] == q.0[i] && seg.iter().any(|r| r.0[i] != p.0[i]));
                if flat {
                    out.push(Violation::new(Axiom::S5, pts(&[p, q])));
                }
            }
            Ok(out)
        })
        .collect::<Result<_, HighDimError>>()?;
    Ok(rows.into_iter().flatten().collect())
}

/// `r` on `S(p, q)` with `S(p, r)` not contained in `S(p, q)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixedWitness {
    pub p: GridPointD,
    pub q: GridPointD,
    pub r: GridPointD,
}

impl MixedWitness {
    pub fn to_violation(&self) -> Violation {
        Violation::new(Axiom::S3, pts(&[&self.p, &self.q, &self.r]))
    }
}

impl fmt::Display for MixedWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p={} q={} r={}", self.p, self.q, self.r)
    }
}

/// Lexicographically first S3 failure of [`mixed_segment`] over ordered pairs
/// of the box (all slope types).
pub fn find_mixed_s3_violation(order: &TotalOrder, window: &BoxD) -> Result<Option<MixedWitness>, HighDimError> {
    find_s3_violation(order, window, None)
}

/// As [`find_mixed_s3_violation`], optionally for the system of one slope
/// type `σ` alone: every pair whose difference is compatible with `σ` (up to
/// swapping the endpoints, zero components allowed) and every subsegment is
/// built with the `σ` reflection. Without `only`, pairs on the boundary
/// between types (some `p_i = q_i`) get whatever type [`mixed_segment`]
/// assigns them, which is where the mixed system breaks.
pub fn find_s3_violation(
    order: &TotalOrder,
    window: &BoxD,
    only: Option<&SlopeType>,
) -> Result<Option<MixedWitness>, HighDimError> {
    let points = window.points();
    let build = |a: &GridPointD, b: &GridPointD| -> Result<Option<Vec<GridPointD>>, HighDimError> {
        match only {
            None => mixed_segment(order, a, b).map(Some),
            Some(signs) => typed_segment(order, signs, a, b),
        }
    };
    let found: Vec<Option<MixedWitness>> = points
        .par_iter()
        .map(|p| {
            for q in &points {
                let Some(seg) = build(p, q)? else { continue };
                for r in &seg {
                    let sub = build(p, r)?.expect("subsegments share the type");
                    if !sub.iter().all(|x| seg.contains(x)) {
                        return Ok(Some(MixedWitness {
                            p: p.clone(),
                            q: q.clone(),
                            r: r.clone(),
                        }));
                    }
                }
            }
            Ok(None)
        })
        .collect::<Result<_, HighDimError>>()?;
    Ok(found.into_iter().flatten().next())
}

/// The segment of the single-type system `σ`, or `None` when `q - p` is not
/// compatible with `σ`.
fn typed_segment(
    order: &TotalOrder,
    signs: &SlopeType,
    p: &GridPointD,
    q: &GridPointD,
) -> Result<Option<Vec<GridPointD>>, HighDimError> {
    check_dims(p, q)?;
    let (a, b) = (p.reflect(signs), q.reflect(signs));
    let walk = if a.dominated_by(&b) {
        segment_d(order, &a, &b)?
    } else if b.dominated_by(&a) {
        let mut back = segment_d(order, &b, &a)?;
        back.reverse();
        back
    } else {
        return Ok(None);
    };
    Ok(Some(walk.iter().map(|r| r.reflect(signs)).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::segment::{order_segment, GridPoint};

    fn pd(c: &[i64]) -> GridPointD {
        GridPointD::new(c.to_vec())
    }

    #[test]
    fn unit_cube_diagonal() {
        let seg = segment_d(&TotalOrder::Natural, &pd(&[0, 0, 0]), &pd(&[1, 1, 1])).unwrap();
        assert_eq!(
            seg,
            vec![pd(&[0, 0, 0]), pd(&[1, 0, 0]), pd(&[1, 1, 0]), pd(&[1, 1, 1])]
        );
        let single = segment_d(&TotalOrder::Pow2, &pd(&[2, -1, 4]), &pd(&[2, -1, 4])).unwrap();
        assert_eq!(single, vec![pd(&[2, -1, 4])]);
        assert!(matches!(
            segment_d(&TotalOrder::Pow2, &pd(&[1, 0, 0]), &pd(&[0, 1, 1])),
            Err(HighDimError::NotPositive { .. })
        ));
        assert!(segment_d(&TotalOrder::Pow2, &pd(&[0, 0]), &pd(&[0, 0, 0])).is_err());
    }

    #[test]
    fn step_counts_are_conserved() {
        let order = TotalOrder::Pow2;
        let (p, q) = (pd(&[-2, 1, 0, 3]), pd(&[3, 1, 4, 5]));
        let seg = segment_d(&order, &p, &q).unwrap();
        assert_eq!(seg.len() as i64, q.sum() - p.sum() + 1);
        for w in seg.windows(2) {
            assert_eq!(w[1].sum(), w[0].sum() + 1);
        }
    }

    #[test]
    fn two_dimensions_match_planar_segments() {
        for order in [TotalOrder::Natural, TotalOrder::Pow2] {
            for a in -3..=3 {
                for b in -3..=3 {
                    for c in -3..=3 {
                        for e in -3..=3 {
                            let planar = order_segment(&order, GridPoint::new(a, b), GridPoint::new(c, e)).unwrap();
                            let mixed = mixed_segment(&order, &pd(&[a, b]), &pd(&[c, e])).unwrap();
                            let as_planar: Vec<GridPoint> =
                                mixed.iter().map(|r| GridPoint::new(r.0[0], r.0[1])).collect();
                            assert_eq!(planar.points(), &as_planar[..], "{order} ({a},{b})-({c},{e})");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn box_iteration() {
        let b = BoxD::cube(3, 0, 1).unwrap();
        let pts = b.points();
        assert_eq!(pts.len(), 8);
        assert_eq!(pts[1], pd(&[0, 0, 1]));
        assert!(pts.windows(2).all(|w| w[0] < w[1]));
        assert!(BoxD::new(vec![0, 2], vec![1, 1]).is_err());
    }

    #[test]
    fn small_positive_systems_are_clean() {
        let w = BoxD::cube(3, 0, 2).unwrap();
        assert!(check_axioms_d(&TotalOrder::Pow2, &w).unwrap().is_empty());
        let w2 = BoxD::cube(2, -2, 2).unwrap();
        assert_eq!(find_mixed_s3_violation(&TotalOrder::Pow2, &w2).unwrap(), None);
    }
}
