//! Digital lines of an order-derived system, restricted to a window of
//! diagonals.
//!
//! A line of non-negative slope steps up at `(x, y)` exactly when `x + y`
//! belongs to its slope, a ≺-upward-closed set of integers. A [`LineWindow`]
//! over the diagonal interval `[lo, hi]` holds the points with sums
//! `lo..=hi + 1`, i.e. one step per element of the interval.
//!
//! "Half-line" is read at window scale: a shared run of points that reaches
//! the first or last diagonal of the window.

use std::fmt;
use std::path::Path;

use thiserror::Error;

use crate::order::{sort_interval, IntegerInterval, OrderError, TotalOrder};
use crate::segment::{order_segment, GridPoint, SegmentError};

#[derive(Debug, Error)]
pub enum LineError {
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error(transparent)]
    Segment(#[from] SegmentError),
    #[error("{point} does not lie on the diagonals of {diag}")]
    OutsideDiagonals { point: GridPoint, diag: IntegerInterval },
    #[error("slope membership of {0} is not known to the predicate")]
    Undecided(i64),
    #[error("{member} is a member but {above} above it is not")]
    NotUpwardClosed { member: i64, above: i64 },
    #[error("{0} lies on the line")]
    OnLine(GridPoint),
    #[error("line windows cover different diagonals")]
    MismatchedWindows,
    #[error("window {diag} cannot separate the parallels of {slope}")]
    Inconclusive { slope: String, diag: IntegerInterval },
    #[error("invalid slope specification: {0}")]
    Parse(String),
}

/// An upward-closed set known only on `domain`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredicateSlope {
    domain: IntegerInterval,
    members: Vec<bool>,
}

impl PredicateSlope {
    pub fn new(
        order: &TotalOrder,
        domain: IntegerInterval,
        members: impl IntoIterator<Item = i64>,
    ) -> Result<Self, LineError> {
        let mut flags = vec![false; domain.len() as usize];
        for m in members {
            if !domain.contains(m) {
                return Err(LineError::Undecided(m));
            }
            flags[(m - domain.lo()) as usize] = true;
        }
        // Upward closed iff the members form a suffix of the ≺-ascending list.
        let ascending = sort_interval(order, &domain)?;
        let is_member = |x: i64| flags[(x - domain.lo()) as usize];
        if let Some(first) = ascending.iter().position(|&x| is_member(x)) {
            if let Some(&gap) = ascending[first..].iter().find(|&&x| !is_member(x)) {
                return Err(LineError::NotUpwardClosed {
                    member: ascending[first],
                    above: gap,
                });
            }
        }
        Ok(Self { domain, members: flags })
    }

    pub fn domain(&self) -> IntegerInterval {
        self.domain
    }

    pub fn contains(&self, a: i64) -> Result<bool, LineError> {
        if !self.domain.contains(a) {
            return Err(LineError::Undecided(a));
        }
        Ok(self.members[(a - self.domain.lo()) as usize])
    }

    pub fn members(&self) -> impl Iterator<Item = i64> + '_ {
        self.domain
            .iter()
            .filter(|&a| self.members[(a - self.domain.lo()) as usize])
    }

    /// ≺-least member and ≺-greatest non-member of the domain.
    fn boundary(&self, order: &TotalOrder) -> Result<(Option<i64>, Option<i64>), LineError> {
        let ascending = sort_interval(order, &self.domain)?;
        let least_member = ascending.iter().copied().find(|&x| self.contains(x).unwrap_or(false));
        let greatest_outsider = ascending
            .iter()
            .rev()
            .copied()
            .find(|&x| !self.contains(x).unwrap_or(true));
        Ok((least_member, greatest_outsider))
    }

    fn with(&self, a: i64, member: bool) -> Self {
        let mut out = self.clone();
        out.members[(a - self.domain.lo()) as usize] = member;
        out
    }

    /// Text form: a line `lo hi`, then member values separated by whitespace.
    /// `#` starts a comment.
    pub fn parse(order: &TotalOrder, text: &str) -> Result<Self, LineError> {
        let bad = |m: &str| LineError::Parse(m.to_string());
        let mut numbers = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or(""))
            .flat_map(str::split_whitespace)
            .map(|t| t.parse::<i64>().map_err(|_| bad(&format!("not an integer: {t:?}"))));
        let lo = numbers.next().ok_or_else(|| bad("missing domain"))??;
        let hi = numbers.next().ok_or_else(|| bad("missing domain upper end"))??;
        let members: Vec<i64> = numbers.collect::<Result<_, _>>()?;
        Self::new(order, IntegerInterval::new(lo, hi)?, members)
    }

    pub fn from_file(order: &TotalOrder, path: impl AsRef<Path>) -> Result<Self, LineError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| SegmentError::Io {
            path: path.display().to_string(),
            source: e,
        })?;
        Self::parse(order, &text)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Slope {
    All,
    Empty,
    /// `{a : a ⪰ c}`.
    RationalInclusive(i64),
    /// `{a : a ≻ c}`.
    RationalExclusive(i64),
    WindowPredicate(PredicateSlope),
}

impl Slope {
    pub fn contains(&self, order: &TotalOrder, a: i64) -> Result<bool, LineError> {
        Ok(match self {
            Slope::All => true,
            Slope::Empty => false,
            Slope::RationalInclusive(c) => a == *c || order.precedes(*c, a)?,
            Slope::RationalExclusive(c) => order.precedes(*c, a)?,
            Slope::WindowPredicate(pred) => pred.contains(a)?,
        })
    }

    /// `all`, `empty`, `ratinc:<c>`, `ratexc:<c>` or `pred:<file>`.
    pub fn parse(order: &TotalOrder, spec: &str) -> Result<Self, LineError> {
        let bad = || LineError::Parse(spec.to_string());
        match spec {
            "all" => return Ok(Slope::All),
            "empty" => return Ok(Slope::Empty),
            _ => {}
        }
        let (kind, arg) = spec.split_once(':').ok_or_else(bad)?;
        match kind {
            "ratinc" => Ok(Slope::RationalInclusive(arg.parse().map_err(|_| bad())?)),
            "ratexc" => Ok(Slope::RationalExclusive(arg.parse().map_err(|_| bad())?)),
            "pred" => Ok(Slope::WindowPredicate(PredicateSlope::from_file(order, arg)?)),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slope::All => f.write_str("all"),
            Slope::Empty => f.write_str("empty"),
            Slope::RationalInclusive(c) => write!(f, "ratinc:{c}"),
            Slope::RationalExclusive(c) => write!(f, "ratexc:{c}"),
            Slope::WindowPredicate(p) => {
                write!(f, "pred[{}]{{", p.domain)?;
                for (i, m) in p.members().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{m}")?;
                }
                f.write_str("}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineWindow {
    slope: Slope,
    diag: IntegerInterval,
    points: Vec<GridPoint>,
}

impl LineWindow {
    pub fn slope(&self) -> &Slope {
        &self.slope
    }

    pub fn diag(&self) -> IntegerInterval {
        self.diag
    }

    pub fn points(&self) -> &[GridPoint] {
        &self.points
    }

    pub fn contains(&self, p: &GridPoint) -> bool {
        self.point_on(p.diagonal()) == Some(*p)
    }

    /// The line's point with coordinate sum `d`.
    pub fn point_on(&self, d: i64) -> Option<GridPoint> {
        let i = d - self.diag.lo();
        (0..self.points.len() as i64)
            .contains(&i)
            .then(|| self.points[i as usize])
    }

    /// Wraps an arbitrary point list, e.g. a deliberately broken one.
    pub fn from_points(slope: Slope, diag: IntegerInterval, points: Vec<GridPoint>) -> Self {
        Self { slope, diag, points }
    }
}

/// The line through `p` with the given slope, over the step sums `diag`.
pub fn line_window(
    order: &TotalOrder,
    p: GridPoint,
    slope: Slope,
    diag: IntegerInterval,
) -> Result<LineWindow, LineError> {
    let s = p.diagonal();
    if s < diag.lo() || s > diag.hi() + 1 {
        return Err(LineError::OutsideDiagonals { point: p, diag });
    }
    let mut below = Vec::new();
    let mut cur = p;
    for d in (diag.lo()..s).rev() {
        cur = if slope.contains(order, d)? {
            cur.offset(0, -1)
        } else {
            cur.offset(-1, 0)
        };
        below.push(cur);
    }
    below.reverse();
    let mut points = below;
    points.push(p);
    cur = p;
    for d in s..=diag.hi() {
        cur = if slope.contains(order, d)? {
            cur.offset(0, 1)
        } else {
            cur.offset(1, 0)
        };
        points.push(cur);
    }
    Ok(LineWindow { slope, diag, points })
}

/// Whether the segment between any two points of the window is the piece of
/// the window between them.
pub fn contains_own_segments(order: &TotalOrder, lw: &LineWindow) -> Result<bool, LineError> {
    let pts = lw.points();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let seg = order_segment(order, pts[i], pts[j])?;
            if seg.points() != &pts[i..=j] {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Intersection {
    Disjoint,
    /// Shared points that stop short of both window ends.
    CrossWithCommonSegment,
    /// A shared run reaching the first or last diagonal of the window.
    CommonHalflineInWindow,
}

pub fn classify_intersection(l1: &LineWindow, l2: &LineWindow) -> Result<Intersection, LineError> {
    if l1.diag != l2.diag || l1.points.len() != l2.points.len() {
        return Err(LineError::MismatchedWindows);
    }
    let shared: Vec<usize> = (0..l1.points.len()).filter(|&i| l1.points[i] == l2.points[i]).collect();
    let (Some(&first), Some(&last)) = (shared.first(), shared.last()) else {
        return Ok(Intersection::Disjoint);
    };
    let contiguous = last - first + 1 == shared.len();
    let reaches_end = first == 0 || last == l1.points.len() - 1;
    Ok(if contiguous && reaches_end {
        Intersection::CommonHalflineInWindow
    } else {
        Intersection::CrossWithCommonSegment
    })
}

/// Slopes of the lines through `p` that do not cross `lw` inside its window.
///
/// Candidates are the slope of `lw` and the slopes obtained by adding or
/// removing its boundary element; each is kept only if the line through `p`
/// stays clear of `lw` or merges with it into a half-line.
pub fn parallels_through(order: &TotalOrder, lw: &LineWindow, p: GridPoint) -> Result<Vec<Slope>, LineError> {
    let diag = lw.diag();
    if lw.contains(&p) {
        return Err(LineError::OnLine(p));
    }
    let inconclusive = || LineError::Inconclusive {
        slope: lw.slope().to_string(),
        diag,
    };
    let mut candidates = vec![lw.slope().clone()];
    match lw.slope() {
        Slope::RationalInclusive(c) => {
            if !diag.contains(*c) {
                return Err(inconclusive());
            }
            candidates.push(Slope::RationalExclusive(*c));
        }
        Slope::RationalExclusive(c) => {
            if !diag.contains(*c) {
                return Err(inconclusive());
            }
            candidates.push(Slope::RationalInclusive(*c));
        }
        Slope::All => {
            let least = sort_interval(order, &diag)?[0];
            candidates.push(Slope::RationalExclusive(least));
        }
        Slope::Empty => {
            let greatest = *sort_interval(order, &diag)?.last().expect("non-empty");
            candidates.push(Slope::RationalInclusive(greatest));
        }
        Slope::WindowPredicate(pred) => {
            let (least_member, greatest_outsider) = pred.boundary(order)?;
            if let Some(m) = least_member.filter(|&m| diag.contains(m)) {
                candidates.push(Slope::WindowPredicate(pred.with(m, false)));
            }
            if let Some(g) = greatest_outsider.filter(|&g| diag.contains(g)) {
                candidates.push(Slope::WindowPredicate(pred.with(g, true)));
            }
        }
    }
    let mut out = Vec::new();
    for slope in candidates {
        let line = line_window(order, p, slope.clone(), diag)?;
        if classify_intersection(lw, &line)? != Intersection::CrossWithCommonSegment {
            out.push(slope);
        }
    }
    Ok(out)
}

/// Some `c` strictly between `a` and `b` in ≺, searched outward from `a` up
/// to distance `radius`.
pub fn find_between(order: &TotalOrder, a: i64, b: i64, radius: i64) -> Result<Option<i64>, OrderError> {
    let (lo, hi) = if order.precedes(a, b)? { (a, b) } else { (b, a) };
    let (klo, khi) = (order.rank_key(lo)?, order.rank_key(hi)?);
    for dist in 1..=radius {
        for c in [a - dist, a + dist] {
            let Ok(k) = order.rank_key(c) else { continue };
            if klo < k && k < khi {
                return Ok(Some(c));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(lo: i64, hi: i64) -> IntegerInterval {
        IntegerInterval::new(lo, hi).unwrap()
    }

    fn pt(x: i64, y: i64) -> GridPoint {
        GridPoint::new(x, y)
    }

    #[test]
    fn trivial_slopes() {
        let order = TotalOrder::Pow2;
        let up = line_window(&order, pt(0, 0), Slope::All, iv(-2, 1)).unwrap();
        assert_eq!(up.points(), &[pt(0, -2), pt(0, -1), pt(0, 0), pt(0, 1), pt(0, 2)]);
        let flat = line_window(&order, pt(0, 0), Slope::Empty, iv(-2, 1)).unwrap();
        assert_eq!(flat.points(), &[pt(-2, 0), pt(-1, 0), pt(0, 0), pt(1, 0), pt(2, 0)]);
        assert_eq!(
            classify_intersection(&up, &flat).unwrap(),
            Intersection::CrossWithCommonSegment
        );
        assert_eq!(
            classify_intersection(&up, &up).unwrap(),
            Intersection::CommonHalflineInWindow
        );
    }

    #[test]
    fn single_member_slope() {
        let lw = line_window(&TotalOrder::Pow2, pt(0, 0), Slope::RationalInclusive(0), iv(-2, 2)).unwrap();
        assert_eq!(
            lw.points(),
            &[pt(-2, 0), pt(-1, 0), pt(0, 0), pt(0, 1), pt(1, 1), pt(2, 1)]
        );
        assert!(contains_own_segments(&TotalOrder::Pow2, &lw).unwrap());
    }

    #[test]
    fn corrupted_window_detected() {
        let order = TotalOrder::Pow2;
        let lw = line_window(&order, pt(0, 0), Slope::RationalInclusive(1), iv(0, 7)).unwrap();
        assert!(contains_own_segments(&order, &lw).unwrap());
        let mut pts = lw.points().to_vec();
        // Swap the first pair of differing neighbouring steps.
        let step = |a: GridPoint, b: GridPoint| (b.x - a.x, b.y - a.y);
        let i = (1..pts.len() - 1)
            .find(|&i| step(pts[i - 1], pts[i]) != step(pts[i], pts[i + 1]))
            .unwrap();
        let second = step(pts[i], pts[i + 1]);
        pts[i] = pts[i - 1].offset(second.0, second.1);
        let broken = LineWindow::from_points(lw.slope().clone(), lw.diag(), pts);
        assert!(!contains_own_segments(&order, &broken).unwrap());
        let one = line_window(&order, pt(3, 3), Slope::All, iv(6, 6)).unwrap();
        assert!(contains_own_segments(&order, &one).unwrap());
    }

    #[test]
    fn predicate_validation() {
        let order = TotalOrder::Pow2;
        // 0 is the ≺-greatest element, so {0} is upward closed; {1} is not.
        assert!(PredicateSlope::new(&order, iv(-4, 4), [0]).is_ok());
        assert!(matches!(
            PredicateSlope::new(&order, iv(-4, 4), [1]),
            Err(LineError::NotUpwardClosed { member: 1, .. })
        ));
        assert!(matches!(
            PredicateSlope::new(&order, iv(-4, 4), [9]),
            Err(LineError::Undecided(9))
        ));
        let pred = PredicateSlope::parse(&order, "# domain\n-4 4\n0 4 -4\n").unwrap();
        assert_eq!(pred.members().collect::<Vec<_>>(), vec![-4, 0, 4]);
        let lw = line_window(&order, pt(0, 0), Slope::WindowPredicate(pred), iv(-5, 4));
        assert!(matches!(lw, Err(LineError::Undecided(-5))));
    }

    #[test]
    fn slope_spec_strings() {
        let order = TotalOrder::Pow2;
        assert_eq!(Slope::parse(&order, "all").unwrap(), Slope::All);
        assert_eq!(Slope::parse(&order, "ratexc:-3").unwrap(), Slope::RationalExclusive(-3));
        assert_eq!(Slope::RationalInclusive(5).to_string(), "ratinc:5");
        assert!(Slope::parse(&order, "ratinc:x").is_err());
        assert!(Slope::parse(&order, "steep").is_err());
    }

    #[test]
    fn rational_parallels() {
        let order = TotalOrder::Pow2;
        let diag = iv(-8, 8);
        let lw = line_window(&order, pt(0, 0), Slope::RationalInclusive(2), diag).unwrap();
        for p in [pt(1, -1), pt(-1, 1), pt(3, -3), pt(-2, 2)] {
            let got = parallels_through(&order, &lw, p).unwrap();
            assert_eq!(
                got,
                vec![Slope::RationalInclusive(2), Slope::RationalExclusive(2)],
                "through {p}"
            );
        }
        assert!(matches!(
            parallels_through(&order, &lw, pt(0, 0)),
            Err(LineError::OnLine(_))
        ));
        let far = line_window(&order, pt(0, 0), Slope::RationalInclusive(100), diag).unwrap();
        assert!(matches!(
            parallels_through(&order, &far, pt(1, -1)),
            Err(LineError::Inconclusive { .. })
        ));
    }

    #[test]
    fn density_probe() {
        let order = TotalOrder::Pow2;
        assert_eq!(find_between(&order, 3, 3, 10).unwrap(), None);
        let c = find_between(&order, -1, -5, 1 << 10).unwrap().unwrap();
        assert!(order.precedes(-1, c).unwrap() && order.precedes(c, -5).unwrap());
        assert_eq!(find_between(&TotalOrder::Natural, 1, 2, 100).unwrap(), None);
    }
}
