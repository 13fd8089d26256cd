//! Projections, density rasters and the PGM/CSV writers.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::hmodule::PointSet;

/// Coordinate selection per point, order preserved.
pub fn project(points: &PointSet, axes: &[usize]) -> Result<PointSet> {
    points.project(axes)
}

/// Per-pixel hit counts, row 0 at the top.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Raster {
    pub width: usize,
    pub height: usize,
    pub counts: Vec<u64>,
    /// Points that fell outside the window.
    pub dropped: usize,
}

impl Raster {
    pub fn empty(width: usize, height: usize) -> Self {
        Raster {
            width,
            height,
            counts: vec![0; width * height],
            dropped: 0,
        }
    }

    /// Count at column `x`, row `y` (from the top).
    pub fn get(&self, x: usize, y: usize) -> u64 {
        self.counts[y * self.width + x]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// Bin index of `v` in `[lo, hi]` split into `n` bins; the right edge
/// belongs to the last bin.
fn bin(v: f64, lo: f64, hi: f64, n: usize) -> Option<usize> {
    if !(v >= lo && v <= hi) {
        return None;
    }
    let t = ((v - lo) / (hi - lo) * n as f64).floor() as usize;
    Some(t.min(n - 1))
}

/// Bins two-dimensional points into a `width × height` raster over
/// `window = [xmin, xmax, ymin, ymax]`.
pub fn rasterize(points: &PointSet, width: usize, height: usize, window: [f64; 4]) -> Result<Raster> {
    if points.dim() != 2 {
        return Err(Error::Shape(format!(
            "rasterizing {}-dimensional points",
            points.dim()
        )));
    }
    let [x0, x1, y0, y1] = window;
    if !([x0, x1, y0, y1].iter().all(|v| v.is_finite()) && x0 < x1 && y0 < y1) {
        return Err(Error::InvalidArgument(format!("degenerate window {window:?}")));
    }
    if width == 0 || height == 0 {
        return Err(Error::InvalidArgument("raster with no pixels".into()));
    }
    let mut r = Raster::empty(width, height);
    for p in points.iter() {
        match (bin(p[0], x0, x1, width), bin(p[1], y0, y1, height)) {
            (Some(px), Some(py)) => r.counts[(height - 1 - py) * width + px] += 1,
            _ => r.dropped += 1,
        }
    }
    Ok(r)
}

/// Binary P5 image with log-scaled intensities.
pub fn pgm_bytes(r: &Raster) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", r.width, r.height).into_bytes();
    let cmax = r.counts.iter().copied().max().unwrap_or(0);
    let denom = (cmax as f64).ln_1p();
    out.extend(r.counts.iter().map(|&c| {
        if cmax == 0 {
            0
        } else {
            (255.0 * (c as f64).ln_1p() / denom).round() as u8
        }
    }));
    out
}

pub fn write_pgm(r: &Raster, path: &Path) -> Result<()> {
    fs::write(path, pgm_bytes(r))?;
    Ok(())
}

/// C-style `%.17g` formatting; round-trips every finite `f64`.
pub fn format_g17(x: f64) -> String {
    const P: i32 = 17;
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0" } else { "0" }.into();
    }
    let sci = format!("{:.*e}", (P - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..P).contains(&exp) {
        let fixed = format!("{:.*}", (P - 1 - exp) as usize, x);
        strip_zeros(&fixed).to_string()
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", strip_zeros(mantissa), exp.abs())
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// One row per point in canonical order, comma separated, no header.
pub fn csv_string(points: &PointSet) -> String {
    let mut out = String::new();
    for p in points.canonical().iter() {
        let row: Vec<String> = p.iter().map(|&v| format_g17(v)).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn write_csv(points: &PointSet, path: &Path) -> Result<()> {
    fs::write(path, csv_string(points))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[[f64; 2]]) -> PointSet {
        PointSet::new(2, v.iter().flatten().copied().collect()).unwrap()
    }

    #[test]
    fn center_point_lands_in_center() {
        let r = rasterize(&pts(&[[0.5, 0.5]]), 3, 3, [0.0, 1.0, 0.0, 1.0]).unwrap();
        assert_eq!(r.get(1, 1), 1);
        assert_eq!(r.total(), 1);
    }

    #[test]
    fn right_and_top_edges_clamp() {
        let r = rasterize(&pts(&[[1.0, 0.0], [0.0, 1.0]]), 4, 4, [0.0, 1.0, 0.0, 1.0]).unwrap();
        assert_eq!(r.get(3, 3), 1);
        assert_eq!(r.get(0, 0), 1);
        assert_eq!(r.dropped, 0);
    }

    #[test]
    fn outside_points_are_dropped() {
        let r = rasterize(&pts(&[[-0.1, 0.5], [0.5, 1.5], [0.2, 0.2]]), 2, 2, [0.0, 1.0, 0.0, 1.0])
            .unwrap();
        assert_eq!((r.total(), r.dropped), (1, 2));
    }

    #[test]
    fn degenerate_window_is_rejected() {
        assert!(rasterize(&pts(&[[0.0, 0.0]]), 2, 2, [1.0, 1.0, 0.0, 1.0]).is_err());
    }

    #[test]
    fn pgm_layout() {
        let empty = pgm_bytes(&Raster::empty(3, 2));
        assert_eq!(&empty[..11], b"P5\n3 2\n255\n");
        assert!(empty[11..].iter().all(|&b| b == 0));
        assert_eq!(empty.len(), 11 + 6);

        let mut one = Raster::empty(2, 2);
        one.counts[1] = 1;
        assert_eq!(&pgm_bytes(&one)[11..], &[0, 255, 0, 0]);

        let mut two = Raster::empty(2, 1);
        two.counts = vec![1, 3];
        // 255·ln 2 / ln 4 = 127.5 rounds away from zero
        assert_eq!(&pgm_bytes(&two)[11..], &[128, 255]);
    }

    #[test]
    fn g17_matches_printf() {
        // reference strings from C printf("%.17g")
        let cases = [
            (0.5, "0.5"),
            (0.1, "0.10000000000000001"),
            (-0.3, "-0.29999999999999999"),
            (1e-5, "1.0000000000000001e-05"),
            (1e20, "1e+20"),
            (123456789.0, "123456789"),
            (0.0001, "0.0001"),
            (1e16, "10000000000000000"),
            (1e17, "1e+17"),
            (-0.0, "-0"),
            (2.0f64.sqrt(), "1.4142135623730951"),
        ];
        for (x, s) in cases {
            assert_eq!(format_g17(x), s, "{x:e}");
        }
    }

    #[test]
    fn csv_is_sorted_and_round_trips() {
        let p = pts(&[[0.1, 2.0], [-1.0, 1.0 / 3.0]]);
        let text = csv_string(&p);
        assert_eq!(text, "-1,0.33333333333333331\n0.10000000000000001,2\n");
        let back: Vec<f64> = text
            .lines()
            .flat_map(|l| l.split(',').map(|v| v.parse::<f64>().unwrap()))
            .collect();
        assert_eq!(back, p.canonical().as_flat());
    }
}
