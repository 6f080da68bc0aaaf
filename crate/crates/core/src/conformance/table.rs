//! Segments of a window, answered once, with bitset membership.
//!
//! A table holds the segments `S(p, q)` for `p` in a range of source rows and
//! every `q` in the window. Memory grows with rows × window × segment length,
//! so the axiom pass builds one row at a time.

use std::ops::Range;

use rayon::prelude::*;

use super::Window;
use crate::segment::{DigitalSegment, GridPoint, SegmentError, SegmentOracle};

pub(crate) struct SegmentTable {
    window: Window,
    n: usize,
    rows: Range<usize>,
    words: usize,
    segs: Vec<DigitalSegment>,
    masks: Vec<u64>,
    /// Segment has a point outside the window; membership falls back to a scan.
    escapes: Vec<bool>,
}

impl SegmentTable {
    /// Every pair of the window.
    pub(crate) fn build<O: SegmentOracle + ?Sized>(oracle: &O, window: Window) -> Result<Self, SegmentError> {
        let n = window.len();
        Self::build_rows(oracle, window, 0..n)
    }

    /// Sources restricted to the scan-order indices in `rows`.
    pub(crate) fn build_rows<O: SegmentOracle + ?Sized>(
        oracle: &O,
        window: Window,
        rows: Range<usize>,
    ) -> Result<Self, SegmentError> {
        let n = window.len();
        let words = n.div_ceil(64);
        let row = |i: usize| -> Result<Vec<(DigitalSegment, Vec<u64>, bool)>, SegmentError> {
            let p = window.point_at(i);
            (0..n)
                .map(|j| {
                    let seg = oracle.segment(p, window.point_at(j))?;
                    let mut mask = vec![0u64; words];
                    let mut escapes = false;
                    for pt in seg.points() {
                        match window.index_of(pt) {
                            Some(k) => mask[k / 64] |= 1 << (k % 64),
                            None => escapes = true,
                        }
                    }
                    Ok((seg, mask, escapes))
                })
                .collect()
        };
        let built: Vec<Vec<_>> = if rows.len() > 1 {
            rows.clone().into_par_iter().map(row).collect::<Result<_, _>>()?
        } else {
            rows.clone().map(row).collect::<Result<_, _>>()?
        };
        let cells = rows.len() * n;
        let mut segs = Vec::with_capacity(cells);
        let mut masks = Vec::with_capacity(cells * words);
        let mut escapes = Vec::with_capacity(cells);
        for (seg, mask, esc) in built.into_iter().flatten() {
            segs.push(seg);
            masks.extend_from_slice(&mask);
            escapes.push(esc);
        }
        Ok(Self {
            window,
            n,
            rows,
            words,
            segs,
            masks,
            escapes,
        })
    }

    pub(crate) fn window(&self) -> &Window {
        &self.window
    }

    pub(crate) fn n(&self) -> usize {
        self.n
    }

    pub(crate) fn index(&self, p: &GridPoint, q: &GridPoint) -> Option<usize> {
        let i = self.window.index_of(p)?;
        if !self.rows.contains(&i) {
            return None;
        }
        Some((i - self.rows.start) * self.n + self.window.index_of(q)?)
    }

    pub(crate) fn seg(&self, i: usize) -> &DigitalSegment {
        &self.segs[i]
    }

    fn mask(&self, i: usize) -> &[u64] {
        &self.masks[i * self.words..(i + 1) * self.words]
    }

    pub(crate) fn holds(&self, i: usize, pt: &GridPoint) -> bool {
        match self.window.index_of(pt) {
            Some(k) => self.mask(i)[k / 64] >> (k % 64) & 1 == 1,
            None => self.escapes[i] && self.segs[i].contains(pt),
        }
    }

    /// Whether every point of `seg` lies on segment `i`.
    pub(crate) fn covers(&self, i: usize, seg: &DigitalSegment) -> bool {
        seg.points().iter().all(|pt| self.holds(i, pt))
    }

    /// Segment `a` ⊆ segment `b`.
    pub(crate) fn subset(&self, a: usize, b: usize) -> bool {
        if self.escapes[a] {
            return self.covers(b, &self.segs[a]);
        }
        self.mask(a).iter().zip(self.mask(b)).all(|(x, y)| x & !y == 0)
    }

    /// The table entry for `(p, q)` if both lie in the window, else a fresh query.
    pub(crate) fn lookup<O: SegmentOracle + ?Sized>(
        &self,
        oracle: &O,
        p: GridPoint,
        q: GridPoint,
    ) -> Result<Entry, SegmentError> {
        match self.index(&p, &q) {
            Some(i) => Ok(Entry::Table(i)),
            None => Ok(Entry::Fresh(oracle.segment(p, q)?)),
        }
    }

    /// Segment `i` ⊆ `e`.
    pub(crate) fn subset_of_entry(&self, i: usize, e: &Entry) -> bool {
        match e {
            Entry::Table(j) => self.subset(i, *j),
            Entry::Fresh(s) => self.segs[i].points().iter().all(|pt| s.contains(pt)),
        }
    }

    /// `e` ⊆ segment `i`.
    pub(crate) fn entry_subset_of(&self, e: &Entry, i: usize) -> bool {
        match e {
            Entry::Table(j) => self.subset(*j, i),
            Entry::Fresh(s) => self.covers(i, s),
        }
    }
}

pub(crate) enum Entry {
    Table(usize),
    Fresh(DigitalSegment),
}

pub(crate) fn sorted(seg: &DigitalSegment) -> Vec<GridPoint> {
    let mut pts = seg.points().to_vec();
    pts.sort_unstable();
    pts.dedup();
    pts
}
