use std::ops::RangeInclusive;

use rayon::prelude::*;

use super::table::{sorted, SegmentTable};
use super::{Axiom, Violation, Window, WitnessItem};
use crate::segment::{translate_diagonal, DigitalSegment, GridPoint, SegmentError, SegmentOracle};

/// Outcome of [`check_axioms_report`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AxiomReport {
    pub violations: Vec<Violation>,
    /// Pairs for which no prolongation witness exists inside the window grown
    /// by one cell. Not counted as violations.
    pub inconclusive: Vec<(GridPoint, GridPoint)>,
}

pub fn check_axioms<O: SegmentOracle + ?Sized>(oracle: &O, w: &Window) -> Result<Vec<Violation>, SegmentError> {
    Ok(check_axioms_report(oracle, w)?.violations)
}

/// Checks S1 to S5 for every ordered pair of `w`.
pub fn check_axioms_report<O: SegmentOracle + ?Sized>(oracle: &O, w: &Window) -> Result<AxiomReport, SegmentError> {
    let rows: Vec<AxiomReport> = (0..w.len())
        .into_par_iter()
        .map(|i| axiom_row(oracle, w, i))
        .collect::<Result<_, _>>()?;
    let mut report = AxiomReport::default();
    for row in rows {
        report.violations.extend(row.violations);
        report.inconclusive.extend(row.inconclusive);
    }
    Ok(report)
}

fn neighbours(q: GridPoint) -> [GridPoint; 4] {
    [q.offset(1, 0), q.offset(0, 1), q.offset(-1, 0), q.offset(0, -1)]
}

fn axiom_row<O: SegmentOracle + ?Sized>(oracle: &O, w: &Window, i: usize) -> Result<AxiomReport, SegmentError> {
    let table = SegmentTable::build_rows(oracle, *w, i..i + 1)?;
    let p = w.point_at(i);
    let mut out = AxiomReport::default();
    for j in 0..table.n() {
        let q = w.point_at(j);
        let seg = table.seg(j);

        let ends = (seg.first(), seg.last());
        let ends_ok = ends == (Some(p), Some(q)) || ends == (Some(q), Some(p));
        if !ends_ok || !seg.is_grid_path() {
            out.violations.push(Violation::points(Axiom::S1, &[p, q]));
        }

        if j > i && sorted(seg) != sorted(&oracle.segment(q, p)?) {
            out.violations.push(Violation::points(Axiom::S2, &[p, q]));
        }

        for &r in seg.points() {
            let sub = table.lookup(oracle, p, r)?;
            if !table.entry_subset_of(&sub, j) {
                out.violations.push(Violation::points(Axiom::S3, &[p, q, r]));
            }
        }

        match prolongation_witness(oracle, &table, w, p, q, j)? {
            Some(_) => {}
            None => out.inconclusive.push((p, q)),
        }

        let straight = (p.x == q.x && seg.points().iter().any(|r| r.x != p.x))
            || (p.y == q.y && seg.points().iter().any(|r| r.y != p.y));
        if straight {
            out.violations.push(Violation::points(Axiom::S5, &[p, q]));
        }
    }
    Ok(out)
}

/// Some `r` off `S(p, q)` with `S(p, q) ⊆ S(p, r)`: the four neighbours of
/// `q` first, then every point of the grown window in scan order.
fn prolongation_witness<O: SegmentOracle + ?Sized>(
    oracle: &O,
    table: &SegmentTable,
    w: &Window,
    p: GridPoint,
    q: GridPoint,
    j: usize,
) -> Result<Option<GridPoint>, SegmentError> {
    let grown = w.grown(1);
    let candidates = neighbours(q).into_iter().chain(grown.points());
    for r in candidates {
        if !grown.contains(&r) || table.holds(j, &r) {
            continue;
        }
        let longer = table.lookup(oracle, p, r)?;
        if table.subset_of_entry(j, &longer) {
            return Ok(Some(r));
        }
    }
    Ok(None)
}

/// C1 (monotone with the slope sign of `q - p`) and C2 (box containment),
/// once per unordered pair: `q` runs over the points after `p` in scan order.
/// Orientation mismatches are S2's business.
pub fn check_box_and_slope<O: SegmentOracle + ?Sized>(oracle: &O, w: &Window) -> Result<Vec<Violation>, SegmentError> {
    let rows: Vec<Vec<Violation>> = (0..w.len())
        .into_par_iter()
        .map(|i| {
            let p = w.point_at(i);
            let mut out = Vec::new();
            for q in w.points().skip(i + 1) {
                let seg = oracle.segment(p, q)?;
                if let Some((a, b)) = slope_witness(&seg, p, q) {
                    out.push(Violation::points(Axiom::C1, &[p, q, a, b]));
                }
                let (xl, xh) = (p.x.min(q.x), p.x.max(q.x));
                let (yl, yh) = (p.y.min(q.y), p.y.max(q.y));
                if let Some(&r) = seg
                    .points()
                    .iter()
                    .find(|r| r.x < xl || r.x > xh || r.y < yl || r.y > yh)
                {
                    out.push(Violation::points(Axiom::C2, &[p, q, r]));
                }
            }
            Ok(out)
        })
        .collect::<Result<_, SegmentError>>()?;
    Ok(rows.into_iter().flatten().collect())
}

/// Two points of the segment whose difference has the wrong slope sign.
fn slope_witness(seg: &DigitalSegment, p: GridPoint, q: GridPoint) -> Option<(GridPoint, GridPoint)> {
    let sign = (q.x - p.x).signum() * (q.y - p.y).signum();
    let increasing = || {
        let mut pts = seg.points().to_vec();
        pts.sort_unstable();
        pts.windows(2).find(|w| w[1].y < w[0].y).map(|w| (w[0], w[1]))
    };
    let decreasing = || {
        let mut pts = seg.points().to_vec();
        pts.sort_unstable_by_key(|r| (r.x, -r.y));
        pts.windows(2).find(|w| w[1].y > w[0].y).map(|w| (w[0], w[1]))
    };
    match sign {
        1 => increasing(),
        -1 => decreasing(),
        _ => increasing().and(decreasing()),
    }
}

/// C3 in its pairwise form: for every ordered `(p, q)` and points `a`, `b` of
/// `S(p, q)` (in path order), `S(a, b) ⊆ S(p, q)`. This is equivalent to
/// every pair of segments meeting in a segment. Builds a table of all pairs,
/// so keep `w` small.
pub fn check_intersections<O: SegmentOracle + ?Sized>(oracle: &O, w: &Window) -> Result<Vec<Violation>, SegmentError> {
    let table = SegmentTable::build(oracle, *w)?;
    let n = table.n();
    let rows: Vec<Vec<Violation>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let p = w.point_at(i);
            let mut out = Vec::new();
            for j in 0..n {
                let q = w.point_at(j);
                let idx = i * n + j;
                let pts = table.seg(idx).points();
                'pair: for (ai, &a) in pts.iter().enumerate() {
                    for &b in &pts[ai + 1..] {
                        let sub = table.lookup(oracle, a, b)?;
                        if !table.entry_subset_of(&sub, idx) {
                            out.push(Violation::points(Axiom::C3, &[p, q, a, b]));
                            break 'pair;
                        }
                    }
                }
            }
            Ok(out)
        })
        .collect::<Result<_, SegmentError>>()?;
    debug_assert_eq!(table.window(), w);
    Ok(rows.into_iter().flatten().collect())
}

/// C1 and C2 followed by C3, all on `w`.
pub fn check_consequences<O: SegmentOracle + ?Sized>(oracle: &O, w: &Window) -> Result<Vec<Violation>, SegmentError> {
    let mut out = check_box_and_slope(oracle, w)?;
    out.extend(check_intersections(oracle, w)?);
    Ok(out)
}

/// `S(p + τ, q + τ) = S(p, q) + τ` for `τ = (t, -t)`, `t` in `shifts`, over
/// the pairs of non-negative slope. Reports the first failing `t` per pair.
///
/// Negative-slope pairs are skipped: the mirrored construction makes them
/// depend on `y - x`, which a `(t, -t)` shift changes, so even order-derived
/// systems only satisfy the property on the non-negative half.
pub fn check_translation_invariance<O: SegmentOracle + ?Sized>(
    oracle: &O,
    w: &Window,
    shifts: RangeInclusive<i64>,
) -> Result<Vec<Violation>, SegmentError> {
    let rows: Vec<Vec<Violation>> = (0..w.len())
        .into_par_iter()
        .map(|i| {
            let p = w.point_at(i);
            let mut out = Vec::new();
            for q in w.points().filter(|q| (q.x - p.x) * (q.y - p.y) >= 0) {
                let base = oracle.segment(p, q)?;
                for t in shifts.clone().filter(|&t| t != 0) {
                    let moved = oracle.segment(p.offset(t, -t), q.offset(t, -t))?;
                    if sorted(&moved) != sorted(&translate_diagonal(&base, t)) {
                        out.push(Violation::new(
                            Axiom::Obs1,
                            vec![p.into(), q.into(), WitnessItem::Int(t)],
                        ));
                        break;
                    }
                }
            }
            Ok(out)
        })
        .collect::<Result<_, SegmentError>>()?;
    Ok(rows.into_iter().flatten().collect())
}

/// Looks at every segment from `p` to a point of `w` on the diagonal
/// `x + y = c + 1` (in the quadrant above `p`) and reports each pair where one
/// goes up at `(a, c - a)`, the other right at `(b, c - b)`, and `a > b`.
/// Witness: `[p, c, r_up, r_right]`.
pub fn check_no_cross<O: SegmentOracle + ?Sized>(
    oracle: &O,
    p: GridPoint,
    c: i64,
    w: &Window,
) -> Result<Vec<Violation>, SegmentError> {
    if !w.contains(&p) {
        return Err(SegmentError::Precondition(format!("{p} is not in {w}")));
    }
    let mut ups: Vec<(i64, GridPoint)> = Vec::new();
    let mut rights: Vec<(i64, GridPoint)> = Vec::new();
    for r in w.points() {
        if r.diagonal() != c + 1 || !p.dominated_by(&r) || r == p {
            continue;
        }
        let seg = oracle.segment(p, r)?;
        let pts = seg.points();
        let from_p: Vec<GridPoint> = if pts.first() == Some(&p) {
            pts.to_vec()
        } else {
            pts.iter().rev().copied().collect()
        };
        let Some(at) = from_p.iter().position(|s| s.diagonal() == c) else {
            continue;
        };
        let (Some(&cur), Some(&next)) = (from_p.get(at), from_p.get(at + 1)) else {
            continue;
        };
        if next == cur.offset(0, 1) {
            ups.push((cur.x, r));
        } else if next == cur.offset(1, 0) {
            rights.push((cur.x, r));
        }
    }
    let mut out = Vec::new();
    for &(a, r_up) in &ups {
        for &(b, r_right) in &rights {
            if a > b {
                out.push(Violation::new(
                    Axiom::NoCross,
                    vec![p.into(), WitnessItem::Int(c), r_up.into(), r_right.into()],
                ));
            }
        }
    }
    Ok(out)
}
