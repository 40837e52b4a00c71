//! Delaunay triangulations by edge flips, and the systole.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::saddle;
use crate::surface::{cross, FlipRecord, Surface};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DelaunayReport {
    pub flips_performed: usize,
    pub all_delaunay: bool,
    pub min_edge_length: f64,
    /// Circumradius per triangle, in face order of the returned surface.
    pub circumradii: Vec<f64>,
    #[serde(skip)]
    pub flips: Vec<FlipRecord>,
}

/// Positions of the quadrilateral around the edge of `h`, developed in the
/// chart of the triangle of `h`: origin(h), end of h, apex of h, apex across.
fn quad(surface: &Surface, h: usize) -> [Complex64; 4] {
    let g = surface.opp(h);
    let p = Complex64::new(0.0, 0.0);
    let q = surface.vec(h);
    let c = q + surface.vec(surface.next(h));
    let d = surface.sign_of(h) * surface.vec(surface.next(g));
    [p, q, c, d]
}

/// Incircle determinant: positive iff `d` lies strictly inside the circle
/// through the counterclockwise triangle `a, b, c`.
fn incircle(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> f64 {
    let (ad, bd, cd) = (a - d, b - d, c - d);
    let (la, lb, lc) = (ad.norm_sqr(), bd.norm_sqr(), cd.norm_sqr());
    la * cross(bd, cd) - lb * cross(ad, cd) + lc * cross(ad, bd)
}

/// True iff the far vertex across the edge of `h` lies on or outside the
/// circumcircle of the triangle of `h`.
pub fn is_delaunay(surface: &Surface, h: usize) -> bool {
    let [p, q, c, d] = quad(surface, h);
    let scale = [q, c, d].iter().map(|z| z.norm()).fold(0.0, f64::max);
    incircle(p, q, c, d) <= 1e-12 * scale.powi(4)
}

/// Circumradius of the triangle containing `h`.
pub fn circumradius(surface: &Surface, h: usize) -> f64 {
    let a = surface.vec(h);
    let b = -surface.vec(surface.prev(h));
    a.norm() * b.norm() * (a - b).norm() / (2.0 * cross(a, b))
}

fn all_edges_delaunay(surface: &Surface) -> bool {
    surface.edges().iter().all(|&[a, b]| is_delaunay(surface, a) && is_delaunay(surface, b))
}

/// Flips non-Delaunay edges until none remain. The input is not modified.
pub fn delaunayize(surface: &Surface) -> Result<(Surface, DelaunayReport)> {
    let mut s = surface.clone();
    let edges = s.edges().len();
    let cap = 50 * edges * edges;
    let mut flips = Vec::new();
    let mut stack: Vec<usize> = (0..edges).rev().collect();
    let mut queued = vec![true; edges];
    while let Some(e) = stack.pop() {
        queued[e] = false;
        let h = s.edges()[e][0];
        if is_delaunay(&s, h) && is_delaunay(&s, s.opp(h)) {
            continue;
        }
        // non-convex quads are skipped; their edge is Delaunay up to rounding
        let Some(record) = s.flip(h) else { continue };
        if flips.len() >= cap {
            return Err(Error::FlipLimitExceeded(cap));
        }
        for k in [s.next(h), s.prev(h), s.next(record.opposite), s.prev(record.opposite)] {
            let f = s.edge_of(k);
            if !queued[f] {
                queued[f] = true;
                stack.push(f);
            }
        }
        flips.push(record);
    }
    s.refresh_cone_data()?;
    let report = DelaunayReport {
        flips_performed: flips.len(),
        all_delaunay: all_edges_delaunay(&s),
        min_edge_length: s.shortest_edge(),
        circumradii: s.faces().iter().map(|t| circumradius(&s, t[0])).collect(),
        flips,
    };
    Ok((s, report))
}

/// Length of the shortest saddle connection (the quantity 2r).
pub fn systole(surface: &Surface) -> Result<f64> {
    let (s, report) = delaunayize(surface)?;
    // the shortest edge is itself a saddle connection
    let bound = report.min_edge_length * (1.0 + 1e-9);
    let found = saddle::enumerate(&s, bound, &saddle::Options::default())?;
    Ok(found.iter().map(|sc| sc.length).fold(report.min_edge_length, f64::min))
}
