//! Digital segment systems on the integer grid.
//!
//! [`SegmentSystem`] answers `segment(p, q)` queries. The order-derived kind
//! walks from the lower-left endpoint to the upper-right one, stepping up at
//! exactly those diagonals `x + y` that are among the `q_y - p_y` ≺-greatest
//! elements of the segment interval `[p_x + p_y, q_x + q_y - 1]`. Negative
//! slopes reuse the walk on the endpoints reflected over the y-axis.
//!
//! The remaining kinds are hand-built systems: the box-boundary system, the
//! waterline system (segments route along the x-axis when they cross it), a
//! generalisation of the waterline to any monotone staircase, and an external
//! process speaking the line protocol in [`crate::external`].

use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::external::ExternalOracle;
use crate::order::{top_k_flags, IntegerInterval, OrderError, TotalOrder};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GridPoint {
    pub x: i64,
    pub y: i64,
}

impl GridPoint {
    pub const fn new(x: i64, y: i64) -> Self {
        Self { x, y }
    }

    /// The diagonal index `x + y`.
    pub fn diagonal(&self) -> i64 {
        self.x + self.y
    }

    pub fn offset(&self, dx: i64, dy: i64) -> Self {
        Self::new(self.x + dx, self.y + dy)
    }

    pub fn is_adjacent(&self, other: &GridPoint) -> bool {
        (self.x - other.x).abs() + (self.y - other.y).abs() == 1
    }

    /// Componentwise `<=`.
    pub fn dominated_by(&self, other: &GridPoint) -> bool {
        self.x <= other.x && self.y <= other.y
    }
}

impl fmt::Display for GridPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

impl FromStr for GridPoint {
    type Err = String;

    /// Parses `x,y`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (x, y) = s
            .trim()
            .split_once(',')
            .ok_or_else(|| format!("expected x,y but got {s:?}"))?;
        let x = x.trim().parse().map_err(|_| format!("bad x in {s:?}"))?;
        let y = y.trim().parse().map_err(|_| format!("bad y in {s:?}"))?;
        Ok(Self::new(x, y))
    }
}

#[derive(Debug, Error)]
pub enum SegmentError {
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error("query {p}-{q} leaves the covered window of the special line")]
    OutsideCoveredWindow { p: GridPoint, q: GridPoint },
    #[error("invalid staircase: {0}")]
    InvalidStaircase(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("oracle transport failure: {0}")]
    Transport(String),
    #[error("malformed oracle response: {0}")]
    Malformed(String),
    #[error("invalid system specification {0:?}")]
    BadSpec(String),
    #[error("reading {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// An ordered list of lattice points. Validity (unit steps, no repeats) is
/// checked by [`DigitalSegment::is_grid_path`] rather than enforced, so that
/// conformance checks can inspect malformed oracle output.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DigitalSegment {
    points: Vec<GridPoint>,
}

impl DigitalSegment {
    pub fn from_points(points: Vec<GridPoint>) -> Self {
        Self { points }
    }

    pub fn single(p: GridPoint) -> Self {
        Self { points: vec![p] }
    }

    pub fn points(&self) -> &[GridPoint] {
        &self.points
    }

    pub fn into_points(self) -> Vec<GridPoint> {
        self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn first(&self) -> Option<GridPoint> {
        self.points.first().copied()
    }

    pub fn last(&self) -> Option<GridPoint> {
        self.points.last().copied()
    }

    pub fn contains(&self, p: &GridPoint) -> bool {
        self.points.contains(p)
    }

    pub fn reversed(mut self) -> Self {
        self.points.reverse();
        self
    }

    /// Unit steps between neighbours and no repeated points.
    pub fn is_grid_path(&self) -> bool {
        if self.points.is_empty() {
            return false;
        }
        if !self.points.windows(2).all(|w| w[0].is_adjacent(&w[1])) {
            return false;
        }
        let mut seen: Vec<GridPoint> = self.points.clone();
        seen.sort_unstable();
        seen.windows(2).all(|w| w[0] != w[1])
    }

    /// L1 distance between the endpoints.
    pub fn l1_length(&self) -> u64 {
        match (self.first(), self.last()) {
            (Some(a), Some(b)) => (a.x - b.x).unsigned_abs() + (a.y - b.y).unsigned_abs(),
            _ => 0,
        }
    }
}

pub fn translate_diagonal(seg: &DigitalSegment, t: i64) -> DigitalSegment {
    DigitalSegment::from_points(seg.points.iter().map(|p| p.offset(t, -t)).collect())
}

/// Anything that can answer segment queries. Implementations must tolerate
/// concurrent calls.
pub trait SegmentOracle: Sync {
    fn segment(&self, p: GridPoint, q: GridPoint) -> Result<DigitalSegment, SegmentError>;
}

impl<T: SegmentOracle + ?Sized> SegmentOracle for &T {
    fn segment(&self, p: GridPoint, q: GridPoint) -> Result<DigitalSegment, SegmentError> {
        (**self).segment(p, q)
    }
}

#[derive(Debug, Clone)]
pub enum SegmentSystem {
    OrderDerived(TotalOrder),
    BoxBoundary,
    Waterline,
    SpecialLine(Arc<MonotonePath>),
    External(Arc<ExternalOracle>),
}

impl SegmentSystem {
    /// Parses `order:<orderspec>`, `box`, `waterline`, `specialline:<file>`
    /// or `extern:<command>`. The last two touch the file system or spawn a
    /// process.
    pub fn from_spec(spec: &str) -> Result<Self, SegmentError> {
        match spec {
            "box" => return Ok(SegmentSystem::BoxBoundary),
            "waterline" => return Ok(SegmentSystem::Waterline),
            _ => {}
        }
        if let Some(order) = spec.strip_prefix("order:") {
            return Ok(SegmentSystem::OrderDerived(order.parse()?));
        }
        if let Some(path) = spec.strip_prefix("specialline:") {
            return Ok(SegmentSystem::SpecialLine(Arc::new(MonotonePath::from_file(path)?)));
        }
        if let Some(command) = spec.strip_prefix("extern:") {
            return Ok(SegmentSystem::External(Arc::new(ExternalOracle::spawn(command)?)));
        }
        Err(SegmentError::BadSpec(spec.to_string()))
    }

    pub fn order(&self) -> Option<&TotalOrder> {
        match self {
            SegmentSystem::OrderDerived(order) => Some(order),
            _ => None,
        }
    }
}

impl SegmentOracle for SegmentSystem {
    fn segment(&self, p: GridPoint, q: GridPoint) -> Result<DigitalSegment, SegmentError> {
        match self {
            SegmentSystem::OrderDerived(order) => order_segment(order, p, q),
            SegmentSystem::BoxBoundary => Ok(oriented(p, q, box_path)),
            SegmentSystem::Waterline => Ok(oriented(p, q, |a, b| {
                if is_descending(a, b) {
                    box_path(a, b)
                } else {
                    guided_walk(&AxisGuide, a, b)
                }
            })),
            SegmentSystem::SpecialLine(line) => {
                if !line.covers(&p) || !line.covers(&q) {
                    return Err(SegmentError::OutsideCoveredWindow { p, q });
                }
                Ok(oriented(p, q, |a, b| {
                    if is_descending(a, b) {
                        box_path(a, b)
                    } else {
                        guided_walk(line.as_ref(), a, b)
                    }
                }))
            }
            SegmentSystem::External(oracle) => oracle.segment(p, q),
        }
    }
}

/// Orders the endpoints by `(x, y)`, builds the path from the smaller to the
/// larger one and hands it back oriented from `p` to `q`.
fn oriented<F>(p: GridPoint, q: GridPoint, build: F) -> DigitalSegment
where
    F: FnOnce(GridPoint, GridPoint) -> Vec<GridPoint>,
{
    if p <= q {
        DigitalSegment::from_points(build(p, q))
    } else {
        DigitalSegment::from_points(build(q, p)).reversed()
    }
}

fn try_oriented<F>(p: GridPoint, q: GridPoint, build: F) -> Result<DigitalSegment, SegmentError>
where
    F: FnOnce(GridPoint, GridPoint) -> Result<Vec<GridPoint>, SegmentError>,
{
    if p <= q {
        Ok(DigitalSegment::from_points(build(p, q)?))
    } else {
        Ok(DigitalSegment::from_points(build(q, p)?).reversed())
    }
}

/// For canonically ordered `a <= b`: true when the pair has strictly negative
/// slope.
fn is_descending(a: GridPoint, b: GridPoint) -> bool {
    a.y > b.y
}

/// Walks from `start` to the componentwise-larger `end`; `up(i)` decides the
/// `i`-th step.
fn monotone_walk<F>(start: GridPoint, end: GridPoint, mut up: F) -> Vec<GridPoint>
where
    F: FnMut(usize) -> bool,
{
    let steps = ((end.x - start.x) + (end.y - start.y)) as usize;
    let mut points = Vec::with_capacity(steps + 1);
    let mut cur = start;
    points.push(cur);
    for i in 0..steps {
        cur = if up(i) { cur.offset(0, 1) } else { cur.offset(1, 0) };
        points.push(cur);
    }
    debug_assert_eq!(cur, end);
    points
}

/// Order-derived path between `a <= b` componentwise.
pub(crate) fn order_walk(order: &TotalOrder, a: GridPoint, b: GridPoint) -> Result<Vec<GridPoint>, SegmentError> {
    let steps = (b.x - a.x) + (b.y - a.y);
    if steps == 0 {
        return Ok(vec![a]);
    }
    let start = a.diagonal();
    let interval = IntegerInterval::new(start, start + steps - 1)?;
    let ups = top_k_flags(order, &interval, (b.y - a.y) as u64)?;
    Ok(monotone_walk(a, b, |i| ups[i]))
}

pub fn order_segment(order: &TotalOrder, p: GridPoint, q: GridPoint) -> Result<DigitalSegment, SegmentError> {
    try_oriented(p, q, |a, b| {
        if !is_descending(a, b) {
            return order_walk(order, a, b);
        }
        // Mirror over the y-axis: the walk runs from (-b.x, b.y) to (-a.x, a.y).
        let mirrored = order_walk(order, GridPoint::new(-b.x, b.y), GridPoint::new(-a.x, a.y))?;
        Ok(mirrored.into_iter().rev().map(|r| GridPoint::new(-r.x, r.y)).collect())
    })
}

/// Box-boundary path: along the row of the lower endpoint, then vertically
/// along the column of the upper one.
fn box_path(a: GridPoint, b: GridPoint) -> Vec<GridPoint> {
    let (lower, upper, flipped) = if a.y <= b.y { (a, b, false) } else { (b, a, true) };
    let mut points = Vec::new();
    let dx = (upper.x - lower.x).signum();
    let mut cur = lower;
    points.push(cur);
    while cur.x != upper.x {
        cur = cur.offset(dx, 0);
        points.push(cur);
    }
    while cur.y != upper.y {
        cur = cur.offset(0, 1);
        points.push(cur);
    }
    if flipped {
        points.reverse();
    }
    points
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    Above,
    On,
    Below,
}

/// A monotone line that positive-slope segments route along.
trait LineGuide {
    fn side(&self, p: &GridPoint) -> Side;
    /// Successor of an on-line point.
    fn next_on(&self, p: &GridPoint) -> GridPoint;
}

struct AxisGuide;

impl LineGuide for AxisGuide {
    fn side(&self, p: &GridPoint) -> Side {
        match p.y.cmp(&0) {
            std::cmp::Ordering::Greater => Side::Above,
            std::cmp::Ordering::Equal => Side::On,
            std::cmp::Ordering::Less => Side::Below,
        }
    }

    fn next_on(&self, p: &GridPoint) -> GridPoint {
        p.offset(1, 0)
    }
}

/// Above the line: right first, then up. Below: up first, then right. On
/// the line: follow it until one coordinate of the target is reached.
fn guided_walk<G: LineGuide + ?Sized>(guide: &G, a: GridPoint, b: GridPoint) -> Vec<GridPoint> {
    let mut cur = a;
    let mut points = vec![cur];
    while cur != b {
        let right = cur.offset(1, 0);
        let up = cur.offset(0, 1);
        cur = match guide.side(&cur) {
            Side::On => {
                let next = guide.next_on(&cur);
                let follow = if next == up { cur.y < b.y } else { cur.x < b.x };
                if follow {
                    next
                } else if cur.x == b.x {
                    up
                } else {
                    right
                }
            }
            Side::Above => {
                if cur.x < b.x {
                    right
                } else {
                    up
                }
            }
            Side::Below => {
                if cur.y < b.y {
                    up
                } else {
                    right
                }
            }
        };
        points.push(cur);
    }
    points
}

/// A finite staircase with positive slope standing in for an infinite one.
///
/// Only queries strictly inside the bounding box of the staircase are
/// answered; outside it the infinite continuation is unknown.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonotonePath {
    points: Vec<GridPoint>,
    /// `(lowest, highest)` y of the staircase in each column, indexed by
    /// `x - first.x`.
    columns: Vec<(i64, i64)>,
    successor: HashMap<GridPoint, GridPoint>,
}

impl MonotonePath {
    pub fn new(points: Vec<GridPoint>) -> Result<Self, SegmentError> {
        let bad = |msg: &str| Err(SegmentError::InvalidStaircase(msg.to_string()));
        if points.len() < 2 {
            return bad("needs at least two points");
        }
        for w in points.windows(2) {
            let step = (w[1].x - w[0].x, w[1].y - w[0].y);
            if step != (1, 0) && step != (0, 1) {
                return bad("consecutive points must differ by one step up or right");
            }
        }
        let first = points[0];
        let last = points[points.len() - 1];
        if first.x == last.x || first.y == last.y {
            return bad("staircase must not lie on a single horizontal or vertical line");
        }
        let mut columns = vec![(i64::MAX, i64::MIN); (last.x - first.x + 1) as usize];
        for p in &points {
            let c = &mut columns[(p.x - first.x) as usize];
            c.0 = c.0.min(p.y);
            c.1 = c.1.max(p.y);
        }
        let successor = points.windows(2).map(|w| (w[0], w[1])).collect();
        Ok(Self {
            points,
            columns,
            successor,
        })
    }

    /// Reads whitespace-separated `x y` pairs, one point per line; `#` starts
    /// a comment.
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self, SegmentError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| SegmentError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, SegmentError> {
        let mut points = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let nums: Vec<i64> = line
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| t.parse())
                .collect::<Result<_, _>>()
                .map_err(|_| SegmentError::InvalidStaircase(format!("line {}: {line:?}", lineno + 1)))?;
            if nums.len() != 2 {
                return Err(SegmentError::InvalidStaircase(format!(
                    "line {}: expected two integers",
                    lineno + 1
                )));
            }
            points.push(GridPoint::new(nums[0], nums[1]));
        }
        Self::new(points)
    }

    pub fn points(&self) -> &[GridPoint] {
        &self.points
    }

    /// True when `p` lies strictly inside the staircase's bounding box.
    pub fn covers(&self, p: &GridPoint) -> bool {
        let first = self.points[0];
        let last = self.points[self.points.len() - 1];
        first.x < p.x && p.x < last.x && first.y < p.y && p.y < last.y
    }
}

impl LineGuide for MonotonePath {
    fn side(&self, p: &GridPoint) -> Side {
        let (lo, hi) = self.columns[(p.x - self.points[0].x) as usize];
        if p.y > hi {
            Side::Above
        } else if p.y < lo {
            Side::Below
        } else {
            Side::On
        }
    }

    fn next_on(&self, p: &GridPoint) -> GridPoint {
        self.successor[p]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Prolongation {
    pub point: GridPoint,
    /// Both the vertical and the horizontal extension contain the segment.
    pub split: bool,
}

/// One-step extension `r` of the order-derived segment from `p` to
/// `q` (with `p` the lower-left endpoint) such that `S(p, q) ⊂ S(p, r)`.
pub fn prolong(order: &TotalOrder, p: GridPoint, q: GridPoint) -> Result<Prolongation, SegmentError> {
    if !p.dominated_by(&q) {
        return Err(SegmentError::Precondition(format!(
            "{p} is not the lower-left endpoint of {p}-{q}"
        )));
    }
    let interval = IntegerInterval::new(p.diagonal(), q.diagonal())?;
    order.check_interval(&interval)?;
    let end = q.diagonal();
    let mut greater = 0u64;
    for t in interval.iter() {
        if order.precedes(end, t)? {
            greater += 1;
        }
    }
    let k = (q.y - p.y) as u64;
    if greater <= k {
        Ok(Prolongation {
            point: q.offset(0, 1),
            split: greater == k,
        })
    } else {
        Ok(Prolongation {
            point: q.offset(1, 0),
            split: false,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(list: &[(i64, i64)]) -> Vec<GridPoint> {
        list.iter().map(|&(x, y)| GridPoint::new(x, y)).collect()
    }

    fn seg(system: &SegmentSystem, p: (i64, i64), q: (i64, i64)) -> Vec<GridPoint> {
        system
            .segment(GridPoint::new(p.0, p.1), GridPoint::new(q.0, q.1))
            .unwrap()
            .into_points()
    }

    #[test]
    fn natural_order_example() {
        let system = SegmentSystem::OrderDerived(TotalOrder::Natural);
        assert_eq!(
            seg(&system, (0, 0), (2, 2)),
            pts(&[(0, 0), (1, 0), (2, 0), (2, 1), (2, 2)])
        );
    }

    #[test]
    fn pow2_example_splits_at_greatest() {
        let system = SegmentSystem::OrderDerived(TotalOrder::Pow2);
        assert_eq!(
            seg(&system, (2, 3), (7, 5)),
            pts(&[(2, 3), (3, 3), (4, 3), (5, 3), (5, 4), (6, 4), (6, 5), (7, 5)])
        );
    }

    #[test]
    fn orientation_follows_the_request() {
        let system = SegmentSystem::OrderDerived(TotalOrder::Pow2);
        let forward = seg(&system, (2, 3), (7, 5));
        let mut backward = seg(&system, (7, 5), (2, 3));
        backward.reverse();
        assert_eq!(forward, backward);

        let down = seg(&system, (0, 4), (3, 0));
        assert_eq!(down.first(), Some(&GridPoint::new(0, 4)));
        assert_eq!(down.last(), Some(&GridPoint::new(3, 0)));
    }

    #[test]
    fn mirror_rule_reflects_over_y_axis() {
        let order = TotalOrder::Pow2;
        let p = GridPoint::new(1, 5);
        let q = GridPoint::new(6, 2);
        let got = order_segment(&order, p, q).unwrap().into_points();
        let reflected: Vec<GridPoint> = order_segment(&order, GridPoint::new(-q.x, q.y), GridPoint::new(-p.x, p.y))
            .unwrap()
            .into_points()
            .into_iter()
            .rev()
            .map(|r| GridPoint::new(-r.x, r.y))
            .collect();
        assert_eq!(got, reflected);
    }

    #[test]
    fn degenerate_and_axis_parallel() {
        let system = SegmentSystem::OrderDerived(TotalOrder::Pow2);
        assert_eq!(seg(&system, (3, 3), (3, 3)), pts(&[(3, 3)]));
        assert_eq!(seg(&system, (0, 0), (0, 3)), pts(&[(0, 0), (0, 1), (0, 2), (0, 3)]));
        assert_eq!(seg(&system, (0, 3), (0, 0)), pts(&[(0, 3), (0, 2), (0, 1), (0, 0)]));
        assert_eq!(seg(&system, (2, 1), (-1, 1)), pts(&[(2, 1), (1, 1), (0, 1), (-1, 1)]));
    }

    #[test]
    fn waterline_example() {
        assert_eq!(
            seg(&SegmentSystem::Waterline, (0, -2), (3, 1)),
            pts(&[(0, -2), (0, -1), (0, 0), (1, 0), (2, 0), (3, 0), (3, 1)])
        );
        // entirely above: right, then up
        assert_eq!(
            seg(&SegmentSystem::Waterline, (0, 1), (2, 2)),
            pts(&[(0, 1), (1, 1), (2, 1), (2, 2)])
        );
        // entirely below: up, then right
        assert_eq!(
            seg(&SegmentSystem::Waterline, (0, -3), (2, -2)),
            pts(&[(0, -3), (0, -2), (1, -2), (2, -2)])
        );
    }

    #[test]
    fn waterline_matches_clamped_route() {
        for ax in -4..=4 {
            for ay in -4..=4 {
                for bx in ax..=4 {
                    for by in ay..=4 {
                        let a = GridPoint::new(ax, ay);
                        let b = GridPoint::new(bx, by);
                        let level = 0i64.clamp(ay, by);
                        let mut expected = vec![a];
                        let mut cur = a;
                        while cur.y < level {
                            cur = cur.offset(0, 1);
                            expected.push(cur);
                        }
                        while cur.x < bx {
                            cur = cur.offset(1, 0);
                            expected.push(cur);
                        }
                        while cur.y < by {
                            cur = cur.offset(0, 1);
                            expected.push(cur);
                        }
                        assert_eq!(SegmentSystem::Waterline.segment(a, b).unwrap().into_points(), expected);
                    }
                }
            }
        }
    }

    #[test]
    fn box_boundary_l_shape() {
        assert_eq!(
            seg(&SegmentSystem::BoxBoundary, (0, 0), (5, 3)),
            pts(&[(0, 0), (1, 0), (2, 0), (3, 0), (4, 0), (5, 0), (5, 1), (5, 2), (5, 3)])
        );
        assert_eq!(
            seg(&SegmentSystem::BoxBoundary, (3, 0), (0, 2)),
            pts(&[(3, 0), (2, 0), (1, 0), (0, 0), (0, 1), (0, 2)])
        );
    }

    #[test]
    fn translate_examples() {
        let s = DigitalSegment::from_points(pts(&[(0, 0), (1, 0)]));
        assert_eq!(translate_diagonal(&s, 1).into_points(), pts(&[(1, -1), (2, -1)]));
        assert_eq!(translate_diagonal(&s, 0), s);
        let example = order_segment(&TotalOrder::Natural, GridPoint::new(0, 0), GridPoint::new(2, 2)).unwrap();
        let moved = translate_diagonal(&example, 3);
        for (a, b) in example.points().iter().zip(moved.points()) {
            assert_eq!(*b, a.offset(3, -3));
        }
    }

    #[test]
    fn prolong_examples() {
        let o = GridPoint::new(0, 0);
        let natural = prolong(&TotalOrder::Natural, o, GridPoint::new(2, 0)).unwrap();
        assert_eq!(natural.point, GridPoint::new(2, 1));
        let pow2 = prolong(&TotalOrder::Pow2, o, GridPoint::new(1, 0)).unwrap();
        assert_eq!(
            pow2,
            Prolongation {
                point: GridPoint::new(2, 0),
                split: false
            }
        );
        let single = prolong(&TotalOrder::Pow2, o, o).unwrap();
        assert_eq!(
            single,
            Prolongation {
                point: GridPoint::new(0, 1),
                split: true
            }
        );
        assert!(prolong(&TotalOrder::Pow2, GridPoint::new(1, 1), o).is_err());
    }

    #[test]
    fn prolongation_contains_the_segment() {
        for order in [TotalOrder::Natural, TotalOrder::Pow2] {
            for qx in 0..8 {
                for qy in 0..8 {
                    let p = GridPoint::new(0, 0);
                    let q = GridPoint::new(qx, qy);
                    let base = order_segment(&order, p, q).unwrap();
                    let ext = prolong(&order, p, q).unwrap();
                    let longer = order_segment(&order, p, ext.point).unwrap();
                    assert!(base.points().iter().all(|r| longer.contains(r)));
                    if ext.split {
                        let other = order_segment(&order, p, q.offset(1, 0)).unwrap();
                        assert!(base.points().iter().all(|r| other.contains(r)));
                    }
                }
            }
        }
    }

    #[test]
    fn staircase_validation() {
        assert!(MonotonePath::new(pts(&[(0, 0)])).is_err());
        assert!(MonotonePath::new(pts(&[(0, 0), (2, 0)])).is_err());
        assert!(MonotonePath::new(pts(&[(0, 0), (1, 0), (2, 0)])).is_err());
        assert!(MonotonePath::new(pts(&[(0, 0), (1, 0), (1, 1)])).is_ok());
        let parsed = MonotonePath::parse("# staircase\n0 0\n1 0\n1 1 # corner\n2 1\n").unwrap();
        assert_eq!(parsed.points().len(), 4);
        assert!(MonotonePath::parse("0 0\n1\n").is_err());
    }

    #[test]
    fn special_line_rejects_uncovered_queries() {
        let line = MonotonePath::new(pts(&[(0, 0), (1, 0), (1, 1), (2, 1), (2, 2), (3, 2), (3, 3)])).unwrap();
        let system = SegmentSystem::SpecialLine(Arc::new(line));
        assert!(system.segment(GridPoint::new(1, 1), GridPoint::new(2, 2)).is_ok());
        assert!(matches!(
            system.segment(GridPoint::new(0, 1), GridPoint::new(2, 2)),
            Err(SegmentError::OutsideCoveredWindow { .. })
        ));
    }

    #[test]
    fn spec_strings() {
        assert!(matches!(
            SegmentSystem::from_spec("order:pow2").unwrap(),
            SegmentSystem::OrderDerived(TotalOrder::Pow2)
        ));
        assert!(matches!(
            SegmentSystem::from_spec("box").unwrap(),
            SegmentSystem::BoxBoundary
        ));
        assert!(matches!(
            SegmentSystem::from_spec("waterline").unwrap(),
            SegmentSystem::Waterline
        ));
        assert!(SegmentSystem::from_spec("order:bogus").is_err());
        assert!(SegmentSystem::from_spec("spiral").is_err());
        assert!(SegmentSystem::from_spec("specialline:/nonexistent/path").is_err());
        assert_eq!("3,-4".parse::<GridPoint>().unwrap(), GridPoint::new(3, -4));
        assert!("3;4".parse::<GridPoint>().is_err());
    }
}
