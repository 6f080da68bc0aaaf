//! Verification of segment systems on finite windows.
//!
//! The checks in [`axioms`] replay the grid-path, symmetry, subsegment,
//! prolongation and monotonicity axioms (plus their box/slope/intersection
//! consequences) for every point pair of a [`Window`]. [`induced`] recovers
//! the total order a system induces at a point, and the global order of a
//! translation-invariant system. [`alternation`] checks the left/right
//! alternation of the 2-adic order around a dyadic midpoint.
//!
//! Violations are reported in scan order: pairs `(p, q)` are visited with `p`
//! and then `q` running lexicographically over the window.

pub mod alternation;
pub mod axioms;
pub mod induced;
mod table;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::segment::GridPoint;

pub use alternation::{check_alternation, AlternationError};
pub use axioms::{
    check_axioms, check_axioms_report, check_box_and_slope, check_consequences, check_intersections, check_no_cross,
    check_translation_invariance, AxiomReport,
};
pub use induced::{extract_order, recover_global_order, ExtractError, InducedOrder, RecoverError};

#[derive(Debug, Error)]
#[error("empty window {lo}..{hi}")]
pub struct WindowError {
    pub lo: GridPoint,
    pub hi: GridPoint,
}

/// Inclusive lattice rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Window {
    lo: GridPoint,
    hi: GridPoint,
}

impl Window {
    pub fn new(lo: GridPoint, hi: GridPoint) -> Result<Self, WindowError> {
        if lo.x > hi.x || lo.y > hi.y {
            return Err(WindowError { lo, hi });
        }
        Ok(Self { lo, hi })
    }

    /// `[-n, n]²`.
    pub fn centered(n: i64) -> Self {
        Self::new(GridPoint::new(-n, -n), GridPoint::new(n, n)).expect("n must be non-negative")
    }

    /// `[lo, hi]²`.
    pub fn square(lo: i64, hi: i64) -> Result<Self, WindowError> {
        Self::new(GridPoint::new(lo, lo), GridPoint::new(hi, hi))
    }

    pub fn lo(&self) -> GridPoint {
        self.lo
    }

    pub fn hi(&self) -> GridPoint {
        self.hi
    }

    pub fn width(&self) -> usize {
        (self.hi.x - self.lo.x + 1) as usize
    }

    pub fn height(&self) -> usize {
        (self.hi.y - self.lo.y + 1) as usize
    }

    pub fn len(&self) -> usize {
        self.width() * self.height()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, p: &GridPoint) -> bool {
        self.lo.x <= p.x && p.x <= self.hi.x && self.lo.y <= p.y && p.y <= self.hi.y
    }

    pub fn grown(&self, margin: i64) -> Self {
        Self {
            lo: self.lo.offset(-margin, -margin),
            hi: self.hi.offset(margin, margin),
        }
    }

    /// Position of `p` in scan order.
    pub fn index_of(&self, p: &GridPoint) -> Option<usize> {
        if !self.contains(p) {
            return None;
        }
        Some((p.x - self.lo.x) as usize * self.height() + (p.y - self.lo.y) as usize)
    }

    pub fn point_at(&self, index: usize) -> GridPoint {
        let h = self.height();
        GridPoint::new(self.lo.x + (index / h) as i64, self.lo.y + (index % h) as i64)
    }

    /// Points in scan order: `x` outer, `y` inner.
    pub fn points(&self) -> impl Iterator<Item = GridPoint> + '_ {
        (self.lo.x..=self.hi.x).flat_map(move |x| (self.lo.y..=self.hi.y).map(move |y| GridPoint::new(x, y)))
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]x[{}, {}]", self.lo.x, self.hi.x, self.lo.y, self.hi.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Axiom {
    S1,
    S2,
    S3,
    S4,
    S5,
    C1,
    C2,
    C3,
    #[serde(rename = "OBS1")]
    Obs1,
    #[serde(rename = "NOCROSS")]
    NoCross,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Axiom::S1 => "S1",
            Axiom::S2 => "S2",
            Axiom::S3 => "S3",
            Axiom::S4 => "S4",
            Axiom::S5 => "S5",
            Axiom::C1 => "C1",
            Axiom::C2 => "C2",
            Axiom::C3 => "C3",
            Axiom::Obs1 => "OBS1",
            Axiom::NoCross => "NOCROSS",
        };
        f.write_str(name)
    }
}

/// One entry of a witness: a lattice point (any dimension) or an integer.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WitnessItem {
    Int(i64),
    Point(Vec<i64>),
}

impl From<GridPoint> for WitnessItem {
    fn from(p: GridPoint) -> Self {
        WitnessItem::Point(vec![p.x, p.y])
    }
}

impl From<i64> for WitnessItem {
    fn from(v: i64) -> Self {
        WitnessItem::Int(v)
    }
}

impl WitnessItem {
    pub fn as_point(&self) -> Option<GridPoint> {
        match self {
            WitnessItem::Point(c) if c.len() == 2 => Some(GridPoint::new(c[0], c[1])),
            _ => None,
        }
    }
}

/// A failed check together with enough data to replay it.
///
/// Witness layouts, by axiom:
/// - `S1`, `S2`, `S4`, `S5`: `[p, q]`
/// - `S3`: `[p, q, r]` with `r` on `S(p, q)` and `S(p, r)` not contained in it
///   (one entry per failing `r`)
/// - `C1`: `[p, q, a, b]` with `a, b` on `S(p, q)` spanning the wrong slope sign
/// - `C2`: `[p, q, r]` with `r` outside the box of `p` and `q`
/// - `C3`: `[p, q, a, b]` with `a, b` on `S(p, q)` and `S(a, b)` not contained in it
/// - `OBS1`: `[p, q, t]`
/// - `NOCROSS`: `[p, C, r_up, r_right]`
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Violation {
    pub axiom: Axiom,
    pub witness: Vec<WitnessItem>,
}

impl Violation {
    pub fn new(axiom: Axiom, witness: Vec<WitnessItem>) -> Self {
        Self { axiom, witness }
    }

    pub fn points(axiom: Axiom, points: &[GridPoint]) -> Self {
        Self::new(axiom, points.iter().copied().map(WitnessItem::from).collect())
    }

    /// Single-line JSON, as emitted by the command-line verifier.
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("violations always serialise")
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_json_line())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_scan_order() {
        let w = Window::square(0, 2).unwrap();
        let pts: Vec<GridPoint> = w.points().collect();
        assert_eq!(pts.len(), 9);
        assert_eq!(pts[0], GridPoint::new(0, 0));
        assert_eq!(pts[1], GridPoint::new(0, 1));
        assert_eq!(pts[3], GridPoint::new(1, 0));
        for (i, p) in pts.iter().enumerate() {
            assert_eq!(w.index_of(p), Some(i));
            assert_eq!(w.point_at(i), *p);
        }
        assert_eq!(w.index_of(&GridPoint::new(3, 0)), None);
        assert!(Window::new(GridPoint::new(1, 0), GridPoint::new(0, 0)).is_err());
        assert_eq!(Window::centered(1).grown(1), Window::centered(2));
    }

    #[test]
    fn violation_json_shape() {
        let v = Violation::new(
            Axiom::Obs1,
            vec![GridPoint::new(0, 0).into(), GridPoint::new(1, 1).into(), 1.into()],
        );
        assert_eq!(v.to_json_line(), r#"{"axiom":"OBS1","witness":[[0,0],[1,1],1]}"#);
        let back: Violation = serde_json::from_str(&v.to_json_line()).unwrap();
        assert_eq!(back, v);
        let nc = Violation::new(Axiom::NoCross, vec![]);
        assert_eq!(nc.to_json_line(), r#"{"axiom":"NOCROSS","witness":[]}"#);
    }
}
