//! Marching-squares contours of `f = 0` and SVG output.

use std::collections::HashMap;
use std::fmt::Write as _;

use nalgebra::DMatrix;
use num_traits::ToPrimitive;
use squarepeg::solver::RenderSquare;
use squarepeg::Curve;

pub const MIN_GRID: usize = 16;

pub const PALETTE: [&str; 14] = [
    "navy", "orange", "plum", "cyan", "blue", "green", "black", "maroon", "gold", "brown", "pink",
    "coral", "magenta", "khaki",
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Viewport {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
}

impl Viewport {
    pub fn new(x: (f64, f64), y: (f64, f64)) -> Self {
        Viewport {
            xmin: x.0,
            xmax: x.1,
            ymin: y.0,
            ymax: y.1,
        }
    }

    pub fn is_empty(&self) -> bool {
        !(self.xmin < self.xmax && self.ymin < self.ymax)
            || ![self.xmin, self.xmax, self.ymin, self.ymax]
                .iter()
                .all(|v| v.is_finite())
    }

    pub fn width(&self) -> f64 {
        self.xmax - self.xmin
    }

    pub fn height(&self) -> f64 {
        self.ymax - self.ymin
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RenderSpec {
    /// Fitted to the squares and curve sample points when absent.
    pub viewport: Option<Viewport>,
    /// Samples per axis; at least [`MIN_GRID`].
    pub grid: usize,
    pub curve_color: String,
    pub palette: Vec<String>,
}

impl Default for RenderSpec {
    fn default() -> Self {
        RenderSpec {
            viewport: None,
            grid: 400,
            curve_color: "red".to_string(),
            palette: PALETTE.iter().map(|s| s.to_string()).collect(),
        }
    }
}

/// `f` with float coefficients, evaluated at real points.
pub struct RealCurve {
    terms: Vec<(f64, usize, usize)>,
    degree: usize,
}

impl RealCurve {
    pub fn new(f: &Curve) -> Self {
        let terms = f
            .poly()
            .terms()
            .map(|(e, c)| (c.to_f64().unwrap_or(0.0), e.get(0) as usize, e.get(1) as usize))
            .collect();
        RealCurve {
            terms,
            degree: f.degree() as usize,
        }
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let mut px = vec![1.0; self.degree + 1];
        let mut py = vec![1.0; self.degree + 1];
        for k in 1..=self.degree {
            px[k] = px[k - 1] * x;
            py[k] = py[k - 1] * y;
        }
        self.terms.iter().map(|&(c, i, j)| c * px[i] * py[j]).sum()
    }

    /// Coefficients (ascending) of `f(x0, y)` in `y`, or of `f(x, y0)` in
    /// `x` when `along_x` is set.
    fn restrict(&self, fixed: f64, along_x: bool) -> Vec<f64> {
        let mut coeffs = vec![0.0; self.degree + 1];
        for &(c, i, j) in &self.terms {
            if along_x {
                coeffs[i] += c * fixed.powi(j as i32);
            } else {
                coeffs[j] += c * fixed.powi(i as i32);
            }
        }
        coeffs
    }

    /// Real points of the curve on the lines `x = v` and `y = v` for
    /// `v` in `{-1, 0, 1}`.
    pub fn sample_points(&self) -> Vec<(f64, f64)> {
        let mut pts = Vec::new();
        for v in [-1.0, 0.0, 1.0] {
            for r in real_roots(&self.restrict(v, false)) {
                pts.push((v, r));
            }
            for r in real_roots(&self.restrict(v, true)) {
                pts.push((r, v));
            }
        }
        pts
    }
}

/// Real roots of `Σ c_k t^k` from the companion matrix eigenvalues.
pub fn real_roots(coeffs: &[f64]) -> Vec<f64> {
    let scale = coeffs.iter().fold(0.0f64, |a, c| a.max(c.abs()));
    if scale == 0.0 {
        return Vec::new();
    }
    let Some(n) = coeffs.iter().rposition(|c| c.abs() > 1e-14 * scale) else {
        return Vec::new();
    };
    if n == 0 {
        return Vec::new();
    }
    let lead = coeffs[n];
    let mut comp = DMatrix::<f64>::zeros(n, n);
    for i in 1..n {
        comp[(i, i - 1)] = 1.0;
    }
    for i in 0..n {
        comp[(i, n - 1)] = -coeffs[i] / lead;
    }
    comp.complex_eigenvalues()
        .iter()
        .filter(|z| z.im.abs() <= 1e-8 * (1.0 + z.re.abs()))
        .map(|z| z.re)
        .collect()
}

/// Bounding box of the square corners and curve sample points, widened to
/// integers and padded by one; `[-2, 2]^2` when there is nothing to fit.
pub fn auto_viewport(f: &Curve, squares: &[RenderSquare]) -> Viewport {
    let mut pts = RealCurve::new(f).sample_points();
    for sq in squares {
        pts.extend_from_slice(&sq.corners);
    }
    pts.retain(|p| p.0.is_finite() && p.1.is_finite());
    if pts.is_empty() {
        return Viewport::new((-2.0, 2.0), (-2.0, 2.0));
    }
    let fold = |sel: fn(&(f64, f64)) -> f64| {
        let lo = pts.iter().map(sel).fold(f64::INFINITY, f64::min);
        let hi = pts.iter().map(sel).fold(f64::NEG_INFINITY, f64::max);
        (lo.floor() - 1.0, hi.ceil() + 1.0)
    };
    Viewport::new(fold(|p| p.0), fold(|p| p.1))
}

/// Edge between two adjacent samples: `(i, j, vertical)` names the edge
/// from sample `(i, j)` to `(i + 1, j)` or, if vertical, to `(i, j + 1)`.
type EdgeId = (usize, usize, bool);

/// Zero set of `f` on an `n x n` lattice of samples placed at cell
/// centres, `x_i = xmin + (i + 1/2) w / n`, as polylines.
pub fn marching_squares(f: &Curve, vp: &Viewport, n: usize) -> Vec<Vec<(f64, f64)>> {
    let rc = RealCurve::new(f);
    let hx = vp.width() / n as f64;
    let hy = vp.height() / n as f64;
    let xs: Vec<f64> = (0..n).map(|i| vp.xmin + (i as f64 + 0.5) * hx).collect();
    let ys: Vec<f64> = (0..n).map(|j| vp.ymin + (j as f64 + 0.5) * hy).collect();
    let vals: Vec<Vec<f64>> = xs
        .iter()
        .map(|&x| ys.iter().map(|&y| rc.eval(x, y)).collect())
        .collect();
    let pos = |i: usize, j: usize| vals[i][j] > 0.0;

    let crossing = |e: EdgeId| -> (f64, f64) {
        let (i, j, vertical) = e;
        let (i2, j2) = if vertical { (i, j + 1) } else { (i + 1, j) };
        let (v0, v1) = (vals[i][j], vals[i2][j2]);
        let s = if v0 == v1 { 0.5 } else { v0 / (v0 - v1) };
        (xs[i] + s * (xs[i2] - xs[i]), ys[j] + s * (ys[j2] - ys[j]))
    };

    let mut segments: Vec<(EdgeId, EdgeId)> = Vec::new();
    for i in 0..n.saturating_sub(1) {
        for j in 0..n.saturating_sub(1) {
            let bottom = (i, j, false);
            let right = (i + 1, j, true);
            let top = (i, j + 1, false);
            let left = (i, j, true);
            let (b00, b10, b11, b01) = (pos(i, j), pos(i + 1, j), pos(i + 1, j + 1), pos(i, j + 1));
            let mut cut = Vec::with_capacity(4);
            if b00 != b10 {
                cut.push(bottom);
            }
            if b10 != b11 {
                cut.push(right);
            }
            if b11 != b01 {
                cut.push(top);
            }
            if b01 != b00 {
                cut.push(left);
            }
            match cut.len() {
                2 => segments.push((cut[0], cut[1])),
                4 => {
                    let centre =
                        (vals[i][j] + vals[i + 1][j] + vals[i + 1][j + 1] + vals[i][j + 1]) / 4.0;
                    if (centre > 0.0) == b00 {
                        segments.push((bottom, right));
                        segments.push((top, left));
                    } else {
                        segments.push((left, bottom));
                        segments.push((right, top));
                    }
                }
                _ => {}
            }
        }
    }
    chain(&segments)
        .into_iter()
        .map(|line| line.into_iter().map(crossing).collect())
        .collect()
}

/// Joins segments sharing an edge into maximal polylines. Closed loops
/// repeat their first point at the end.
fn chain(segments: &[(EdgeId, EdgeId)]) -> Vec<Vec<EdgeId>> {
    let mut adj: HashMap<EdgeId, Vec<usize>> = HashMap::new();
    for (k, (a, b)) in segments.iter().enumerate() {
        adj.entry(*a).or_default().push(k);
        adj.entry(*b).or_default().push(k);
    }
    let mut used = vec![false; segments.len()];
    let mut lines = Vec::new();
    let other = |k: usize, e: EdgeId| {
        let (a, b) = segments[k];
        if a == e {
            b
        } else {
            a
        }
    };
    let walk = |start_seg: usize, from: EdgeId, used: &mut Vec<bool>| {
        let mut line = vec![from];
        let mut seg = start_seg;
        let mut at = from;
        loop {
            used[seg] = true;
            at = other(seg, at);
            line.push(at);
            match adj[&at].iter().find(|&&s| !used[s]) {
                Some(&s) => seg = s,
                None => break,
            }
        }
        line
    };
    // open polylines start at an edge used by a single segment
    let mut ends: Vec<EdgeId> = adj
        .iter()
        .filter(|(_, v)| v.len() == 1)
        .map(|(e, _)| *e)
        .collect();
    ends.sort_unstable();
    for e in ends {
        let s = adj[&e][0];
        if !used[s] {
            lines.push(walk(s, e, &mut used));
        }
    }
    for k in 0..segments.len() {
        if !used[k] {
            lines.push(walk(k, segments[k].0, &mut used));
        }
    }
    lines
}

fn plural(n: usize, word: &str) -> String {
    if n == 1 {
        format!("{} {}", n, word)
    } else {
        format!("{} {}s", n, word)
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// An SVG with the contour of `f` and every square as a closed 4-gon.
///
/// Coordinates are world coordinates under a `scale(1 -1)` flip; square
/// corners are written with full precision, contour points with six
/// decimals.
pub fn render_svg(f: &Curve, squares: &[RenderSquare], spec: &RenderSpec) -> String {
    let vp = spec.viewport.unwrap_or_else(|| auto_viewport(f, squares));
    let lines = marching_squares(f, &vp, spec.grid.max(MIN_GRID));
    let (w, h) = (vp.width(), vp.height());
    let pixel_w = 600.0;
    let pixel_h = (pixel_w * h / w).round();
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="{} {} {} {}">"#,
        pixel_w, pixel_h, vp.xmin, -vp.ymax, w, h
    );
    let caption = format!("{} inscribing {}.", f, plural(squares.len(), "square"));
    let _ = writeln!(out, "<title>{}</title>", escape(&caption));
    let _ = writeln!(out, r#"<g transform="scale(1 -1)">"#);
    for line in &lines {
        let pts: Vec<String> = line.iter().map(|(x, y)| format!("{:.6},{:.6}", x, y)).collect();
        let _ = writeln!(
            out,
            r#"<polyline class="curve" fill="none" stroke="{}" stroke-width="1.5" vector-effect="non-scaling-stroke" points="{}"/>"#,
            spec.curve_color,
            pts.join(" ")
        );
    }
    for (k, sq) in squares.iter().enumerate() {
        let color = if spec.palette.is_empty() {
            "black"
        } else {
            &spec.palette[k % spec.palette.len()]
        };
        let pts: Vec<String> = sq.corners.iter().map(|(x, y)| format!("{},{}", x, y)).collect();
        let _ = writeln!(
            out,
            r#"<polygon class="square" fill="none" stroke="{}" stroke-width="2" vector-effect="non-scaling-stroke" points="{}"/>"#,
            color,
            pts.join(" ")
        );
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" font-size="{}" font-family="sans-serif">{}</text>"#,
        vp.xmin + 0.02 * w,
        -vp.ymax + 0.05 * h,
        0.035 * h,
        escape(&caption)
    );
    let _ = writeln!(out, "</svg>");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use squarepeg::parse_curve;

    #[test]
    fn roots_of_quadratics() {
        let mut r = real_roots(&[-1.0, 0.0, 1.0]);
        r.sort_by(f64::total_cmp);
        assert!((r[0] + 1.0).abs() < 1e-12 && (r[1] - 1.0).abs() < 1e-12);
        assert!(real_roots(&[1.0, 0.0, 1.0]).is_empty());
        assert!(real_roots(&[3.0]).is_empty());
        assert!(real_roots(&[0.0, 0.0]).is_empty());
        assert_eq!(real_roots(&[2.0, -4.0, 0.0]), vec![0.5]);
    }

    #[test]
    fn viewport_of_ellipse() {
        let f = parse_curve("2 0 1\n0 2 4\n0 0 -1").unwrap();
        let vp = auto_viewport(&f, &[]);
        assert_eq!(vp, Viewport::new((-2.0, 2.0), (-2.0, 2.0)));
    }

    #[test]
    fn viewport_falls_back_without_real_points() {
        let f = parse_curve("2 0 1\n0 2 1\n0 0 1").unwrap();
        assert_eq!(auto_viewport(&f, &[]), Viewport::new((-2.0, 2.0), (-2.0, 2.0)));
    }

    #[test]
    fn circle_contour_is_one_closed_loop() {
        let f = parse_curve("2 0 1\n0 2 1\n0 0 -1").unwrap();
        let vp = Viewport::new((-2.0, 2.0), (-2.0, 2.0));
        let lines = marching_squares(&f, &vp, 64);
        assert_eq!(lines.len(), 1);
        let l = &lines[0];
        assert_eq!(l.first(), l.last());
        for (x, y) in l {
            assert!(((x * x + y * y).sqrt() - 1.0).abs() < 2e-3);
        }
    }

    #[test]
    fn saddle_cells_split_consistently() {
        // xy = 0 with an odd grid puts samples on the axes.
        let f = parse_curve("1 1 1").unwrap();
        let vp = Viewport::new((-2.0, 2.0), (-2.0, 2.0));
        for n in [16, 17, 33] {
            let lines = marching_squares(&f, &vp, n);
            let pts: usize = lines.iter().map(|l| l.len()).sum();
            assert!(pts > 0);
            for l in &lines {
                for (x, y) in l {
                    assert!(x.abs() < 1e-12 || y.abs() < 1e-12, "({}, {})", x, y);
                }
            }
        }
    }
}
