//! SVG and PPM pictures of digital segments.
//!
//! Lattice point `(x, y)` is drawn as the cell whose lower-left corner sits at
//! `(x - x0, y - y0)` cells from the canvas origin, with y growing upwards.
//! Every coordinate written to the SVG is an integer, so identical inputs give
//! byte-identical files.

use std::fmt::Write as _;

use cdseg::segment::{DigitalSegment, GridPoint, SegmentError, SegmentOracle};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Svg,
    Ppm,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RenderSpec {
    pub pairs: Vec<(GridPoint, GridPoint)>,
    pub lo: GridPoint,
    pub hi: GridPoint,
    pub cell: u32,
    pub format: Format,
    pub chords: bool,
}

impl RenderSpec {
    /// Checks that the canvas holds every endpoint.
    pub fn validate(&self) -> Result<(), String> {
        if self.cell < 2 {
            return Err("cell size must be at least 2".to_string());
        }
        if self.lo.x > self.hi.x || self.lo.y > self.hi.y {
            return Err(format!("empty canvas {}..{}", self.lo, self.hi));
        }
        let inside = |p: &GridPoint| (self.lo.x..=self.hi.x).contains(&p.x) && (self.lo.y..=self.hi.y).contains(&p.y);
        for (p, q) in &self.pairs {
            for r in [p, q] {
                if !inside(r) {
                    return Err(format!("endpoint {r} lies outside the canvas {}..{}", self.lo, self.hi));
                }
            }
        }
        Ok(())
    }

    fn columns(&self) -> u32 {
        (self.hi.x - self.lo.x + 1) as u32
    }

    fn rows(&self) -> u32 {
        (self.hi.y - self.lo.y + 1) as u32
    }

    /// Top-left pixel of the cell of `p`.
    fn corner(&self, p: GridPoint) -> (i64, i64) {
        let c = self.cell as i64;
        ((p.x - self.lo.x) * c, (self.hi.y - p.y) * c)
    }

    fn center(&self, p: GridPoint) -> (i64, i64) {
        let (x, y) = self.corner(p);
        let half = self.cell as i64 / 2;
        (x + half, y + half)
    }
}

const PALETTE: [(u8, u8, u8); 6] = [
    (31, 119, 180),
    (214, 39, 40),
    (44, 160, 44),
    (148, 103, 189),
    (255, 127, 14),
    (23, 190, 207),
];

/// Segments for every pair, in order.
pub fn segments<O: SegmentOracle + ?Sized>(oracle: &O, spec: &RenderSpec) -> Result<Vec<DigitalSegment>, SegmentError> {
    spec.pairs.iter().map(|&(p, q)| oracle.segment(p, q)).collect()
}

pub fn render(spec: &RenderSpec, segs: &[DigitalSegment]) -> Vec<u8> {
    match spec.format {
        Format::Svg => svg(spec, segs).into_bytes(),
        Format::Ppm => ppm(spec, segs),
    }
}

fn hex((r, g, b): (u8, u8, u8)) -> String {
    format!("#{r:02x}{g:02x}{b:02x}")
}

fn svg(spec: &RenderSpec, segs: &[DigitalSegment]) -> String {
    let c = spec.cell as i64;
    let (w, h) = (spec.columns() as i64 * c, spec.rows() as i64 * c);
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n");
    out.push_str(
        "<!DOCTYPE svg PUBLIC \"-//W3C//DTD SVG 1.1//EN\" \"http://www.w3.org/Graphics/SVG/1.1/DTD/svg11.dtd\">\n",
    );
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">"
    );
    let _ = writeln!(
        out,
        "<rect x=\"0\" y=\"0\" width=\"{w}\" height=\"{h}\" fill=\"#ffffff\"/>"
    );
    out.push_str("<g stroke=\"#dddddd\" stroke-width=\"1\">\n");
    for i in 0..=spec.columns() as i64 {
        let _ = writeln!(out, "<line x1=\"{x}\" y1=\"0\" x2=\"{x}\" y2=\"{h}\"/>", x = i * c);
    }
    for j in 0..=spec.rows() as i64 {
        let _ = writeln!(out, "<line x1=\"0\" y1=\"{y}\" x2=\"{w}\" y2=\"{y}\"/>", y = j * c);
    }
    out.push_str("</g>\n");
    for (k, seg) in segs.iter().enumerate() {
        let colour = hex(PALETTE[k % PALETTE.len()]);
        let _ = writeln!(out, "<g fill=\"{colour}\" fill-opacity=\"0.6\">");
        for &r in seg.points() {
            let (x, y) = spec.corner(r);
            let _ = writeln!(out, "<rect x=\"{x}\" y=\"{y}\" width=\"{c}\" height=\"{c}\"/>");
        }
        out.push_str("</g>\n");
    }
    if spec.chords {
        out.push_str("<g stroke=\"#000000\" stroke-width=\"1\">\n");
        for seg in segs {
            if let (Some(p), Some(q)) = (seg.first(), seg.last()) {
                let ((x1, y1), (x2, y2)) = (spec.center(p), spec.center(q));
                let _ = writeln!(out, "<line x1=\"{x1}\" y1=\"{y1}\" x2=\"{x2}\" y2=\"{y2}\"/>");
            }
        }
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    out
}

fn ppm(spec: &RenderSpec, segs: &[DigitalSegment]) -> Vec<u8> {
    let c = spec.cell as i64;
    let (w, h) = (spec.columns() as i64 * c, spec.rows() as i64 * c);
    let mut pixels = vec![(255u8, 255u8, 255u8); (w * h) as usize];
    let mut put = |x: i64, y: i64, colour: (u8, u8, u8)| {
        if (0..w).contains(&x) && (0..h).contains(&y) {
            pixels[(y * w + x) as usize] = colour;
        }
    };
    for i in 0..=spec.columns() as i64 {
        for y in 0..h {
            put((i * c).min(w - 1), y, (221, 221, 221));
        }
    }
    for j in 0..=spec.rows() as i64 {
        for x in 0..w {
            put(x, (j * c).min(h - 1), (221, 221, 221));
        }
    }
    for (k, seg) in segs.iter().enumerate() {
        let colour = PALETTE[k % PALETTE.len()];
        for &r in seg.points() {
            let (x0, y0) = spec.corner(r);
            for y in y0 + 1..y0 + c {
                for x in x0 + 1..x0 + c {
                    put(x, y, colour);
                }
            }
        }
    }
    if spec.chords {
        for seg in segs {
            if let (Some(p), Some(q)) = (seg.first(), seg.last()) {
                let (a, b) = (spec.center(p), spec.center(q));
                let steps = (b.0 - a.0).abs().max((b.1 - a.1).abs()).max(1);
                for s in 0..=steps {
                    // Rounded integer interpolation; no floating point.
                    let x = a.0 + ((b.0 - a.0) * s * 2 + steps).div_euclid(2 * steps);
                    let y = a.1 + ((b.1 - a.1) * s * 2 + steps).div_euclid(2 * steps);
                    put(x, y, (0, 0, 0));
                }
            }
        }
    }
    let mut out = format!("P3\n{w} {h}\n255\n").into_bytes();
    for row in pixels.chunks(w as usize) {
        let line: Vec<String> = row.iter().map(|(r, g, b)| format!("{r} {g} {b}")).collect();
        out.extend_from_slice(line.join(" ").as_bytes());
        out.push(b'\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use cdseg::segment::SegmentSystem;

    fn spec(format: Format) -> RenderSpec {
        RenderSpec {
            pairs: vec![(GridPoint::new(0, 0), GridPoint::new(5, 3))],
            lo: GridPoint::new(0, 0),
            hi: GridPoint::new(5, 3),
            cell: 10,
            format,
            chords: true,
        }
    }

    #[test]
    fn box_pair_is_an_l_shape() {
        let s = spec(Format::Svg);
        let segs = segments(&SegmentSystem::BoxBoundary, &s).unwrap();
        let svg = String::from_utf8(render(&s, &segs)).unwrap();
        assert!(svg.starts_with("<?xml"));
        assert!(svg.contains("<!DOCTYPE svg"));
        // (0,0) is the bottom-left cell, (5,0) the bottom-right corner of the L.
        assert!(svg.contains("<rect x=\"0\" y=\"30\" width=\"10\" height=\"10\"/>"));
        assert!(svg.contains("<rect x=\"50\" y=\"30\" width=\"10\" height=\"10\"/>"));
        assert!(!svg.contains("<rect x=\"0\" y=\"0\" width=\"10\""));
        assert!(svg.contains("<line x1=\"5\" y1=\"35\" x2=\"55\" y2=\"5\"/>"));
        for attr in ["x", "y", "x1", "y1", "x2", "y2", "width", "height"] {
            let key = format!(" {attr}=\"");
            for (i, _) in svg.match_indices(&key) {
                let rest = &svg[i + key.len()..];
                let value = &rest[..rest.find('"').unwrap()];
                assert!(value.parse::<i64>().is_ok(), "{attr}={value}");
            }
        }
    }

    #[test]
    fn ppm_dimensions() {
        let s = spec(Format::Ppm);
        let segs = segments(&SegmentSystem::BoxBoundary, &s).unwrap();
        let ppm = String::from_utf8(render(&s, &segs)).unwrap();
        let mut lines = ppm.lines();
        assert_eq!(lines.next(), Some("P3"));
        assert_eq!(lines.next(), Some("60 40"));
        assert_eq!(lines.next(), Some("255"));
        assert_eq!(lines.count(), 40);
    }

    #[test]
    fn canvas_must_hold_endpoints() {
        let mut s = spec(Format::Svg);
        assert!(s.validate().is_ok());
        s.hi = GridPoint::new(4, 3);
        assert!(s.validate().is_err());
    }
}
