//! Saddle connections by developing triangle strips.
//!
//! A connection is recorded by its starting corner (the outgoing half-edge `h`
//! whose triangle contains the initial direction, counterclockwise from
//! `vec(h)`) and the half-edges it crosses. Edges of the triangulation are the
//! connections with no crossings.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::cochain::Cochain;
use crate::error::{Error, Result};
use crate::surface::{cross, Surface};

pub const DEFAULT_BUDGET: usize = 10_000_000;
const WEDGE_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SaddleConnection {
    pub start: usize,
    pub end: usize,
    pub holonomy: Complex64,
    pub length: f64,
    pub corner: usize,
    pub crossings: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Options {
    /// Maximum number of developed strips.
    pub budget: usize,
    /// Worker threads; 1 keeps everything on the calling thread.
    pub threads: usize,
}

impl Default for Options {
    fn default() -> Self {
        Self { budget: DEFAULT_BUDGET, threads: 1 }
    }
}

type Key = (usize, Vec<usize>);

struct Strip {
    cross: usize,
    p: Complex64,
    q: Complex64,
    lambda: f64,
    right: Complex64,
    left: Complex64,
    crossings: Vec<usize>,
}

#[inline]
fn strictly_left(a: Complex64, b: Complex64) -> bool {
    cross(a, b) > WEDGE_EPS * a.norm() * b.norm()
}

/// Distance from the origin to the part of segment `p q` inside the wedge,
/// or `None` if no part of it is visible.
fn visible_distance(p: Complex64, q: Complex64, right: Complex64, left: Complex64) -> Option<f64> {
    let d = q - p;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    // cross(right, p + s d) >= 0 and cross(p + s d, left) >= 0
    for (c0, c1) in [(cross(right, p), cross(right, d)), (cross(p, left), cross(d, left))] {
        let slack = 1e-9 * (p.norm() + q.norm()) * right.norm().max(left.norm());
        if c1.abs() <= f64::EPSILON * (c0.abs() + 1.0) {
            if c0 < -slack {
                return None;
            }
        } else if c1 > 0.0 {
            lo = lo.max((-c0 - slack) / c1);
        } else {
            hi = hi.min((-c0 - slack) / c1);
        }
    }
    let (lo, hi) = (lo.clamp(0.0, 1.0), hi.clamp(0.0, 1.0));
    if lo > hi {
        return None;
    }
    // closest point of the clipped segment to the origin
    let s0 = if d.norm_sqr() > 0.0 { -(p.re * d.re + p.im * d.im) / d.norm_sqr() } else { 0.0 };
    let s = s0.clamp(lo, hi);
    Some((p + s * d).norm())
}

/// All saddle connections starting in the open corner wedge at `h`, as
/// (key, holonomy, end vertex).
fn explore_corner(surface: &Surface, h: usize, max_len: f64, budget: usize) -> Result<(Vec<(Key, Complex64, usize)>, usize)> {
    let mut out = Vec::new();
    let right = surface.vec(h);
    let left = -surface.vec(surface.prev(h));
    let mut stack = vec![Strip {
        cross: surface.next(h),
        p: right,
        q: left,
        lambda: 1.0,
        right,
        left,
        crossings: Vec::new(),
    }];
    let mut strips = 0usize;
    let bound = max_len * (1.0 + 1e-12);
    while let Some(st) = stack.pop() {
        strips += 1;
        if strips > budget {
            return Err(Error::BudgetExceeded(budget));
        }
        match visible_distance(st.p, st.q, st.right, st.left) {
            Some(d) if d <= bound => {}
            _ => continue,
        }
        let g = st.cross;
        let g2 = surface.opp(g);
        let lambda = st.lambda * surface.sign_of(g);
        let w = st.p + lambda * surface.vec(surface.next(g2));
        let mut crossings = st.crossings;
        crossings.push(g);
        let inside_right = strictly_left(st.right, w);
        let inside_left = strictly_left(w, st.left);
        if inside_right && inside_left {
            if w.norm() <= bound {
                out.push(((h, crossings.clone()), w, surface.origin(surface.prev(g2))));
            }
            stack.push(Strip { cross: surface.prev(g2), p: w, q: st.q, lambda, right: w, left: st.left, crossings: crossings.clone() });
            stack.push(Strip { cross: surface.next(g2), p: st.p, q: w, lambda, right: st.right, left: w, crossings });
        } else if !inside_right {
            stack.push(Strip { cross: surface.prev(g2), p: w, q: st.q, lambda, right: st.right, left: st.left, crossings });
        } else {
            stack.push(Strip { cross: surface.next(g2), p: st.p, q: w, lambda, right: st.right, left: st.left, crossings });
        }
    }
    Ok((out, strips))
}

/// Develops `values` (one per half-edge, with the surface's gluing signs)
/// along a connection key. Returns the end position relative to the start
/// and the chart multiplier of the last triangle.
fn develop_values(surface: &Surface, values: &[Complex64], corner: usize, crossings: &[usize]) -> (Complex64, f64) {
    if crossings.is_empty() {
        return (values[corner], 1.0);
    }
    let mut p = values[corner];
    let mut lambda = 1.0;
    let mut w = p;
    for (i, &g) in crossings.iter().enumerate() {
        let g2 = surface.opp(g);
        lambda *= surface.sign_of(g);
        w = p + lambda * values[surface.next(g2)];
        // the next crossing either keeps the right endpoint or starts at w
        if crossings.get(i + 1).is_some_and(|&nxt| nxt != surface.next(g2)) {
            p = w;
        }
    }
    (w, lambda)
}

/// Developed end position of a connection (its holonomy in the start chart).
pub fn develop(surface: &Surface, sc: &SaddleConnection) -> Complex64 {
    develop_values(surface, surface.vectors(), sc.corner, &sc.crossings).0
}

/// Integral of a cochain along a connection.
pub fn period(surface: &Surface, sc: &SaddleConnection, eta: &Cochain) -> Result<Complex64> {
    eta.check_len(surface.half_edge_count())?;
    Ok(develop_values(surface, eta.values(), sc.corner, &sc.crossings).0)
}

fn reverse_key(surface: &Surface, corner: usize, crossings: &[usize]) -> Key {
    match crossings.last() {
        None => (surface.opp(corner), Vec::new()),
        Some(&last) => {
            let rev = crossings.iter().rev().map(|&g| surface.opp(g)).collect();
            (surface.prev(surface.opp(last)), rev)
        }
    }
}

fn upper(z: Complex64) -> bool {
    let tol = 1e-12 * z.norm();
    z.im > tol || (z.im.abs() <= tol && z.re > 0.0)
}

fn connection(surface: &Surface, key: Key) -> SaddleConnection {
    let (corner, crossings) = key;
    let holonomy = develop_values(surface, surface.vectors(), corner, &crossings).0;
    let end = match crossings.last() {
        None => surface.origin(surface.next(corner)),
        Some(&g) => surface.origin(surface.prev(surface.opp(g))),
    };
    SaddleConnection { start: surface.origin(corner), end, holonomy, length: holonomy.norm(), corner, crossings }
}

/// Chooses the canonical orientation of a connection found as `key`.
fn canonical(surface: &Surface, key: Key) -> SaddleConnection {
    let rev = reverse_key(surface, key.0, &key.1);
    let a = connection(surface, key);
    let b = connection(surface, rev);
    let (ua, ub) = (upper(a.holonomy), upper(b.holonomy));
    let a_first = match (ua, ub) {
        (true, false) => true,
        (false, true) => false,
        _ => (a.start, a.corner, &a.crossings) <= (b.start, b.corner, &b.crossings),
    };
    if a_first {
        a
    } else {
        b
    }
}

/// Every saddle connection of length at most `max_len`, once each in
/// canonical orientation, sorted by length.
pub fn enumerate(surface: &Surface, max_len: f64, opts: &Options) -> Result<Vec<SaddleConnection>> {
    if !(max_len > 0.0) || !max_len.is_finite() {
        return Err(Error::InvalidArgument(format!("length bound must be positive, got {max_len}")));
    }
    let n = surface.half_edge_count();
    let run = |h: usize| explore_corner(surface, h, max_len, opts.budget);
    let per_corner: Vec<Result<(Vec<(Key, Complex64, usize)>, usize)>> = if opts.threads > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.threads)
            .build()
            .map_err(|e| Error::InvalidArgument(e.to_string()))?;
        pool.install(|| (0..n).into_par_iter().map(run).collect())
    } else {
        (0..n).map(run).collect()
    };

    let mut keys: Vec<Key> = Vec::new();
    let mut strips = 0usize;
    for r in per_corner {
        let (found, used) = r?;
        strips += used;
        if strips > opts.budget {
            return Err(Error::BudgetExceeded(opts.budget));
        }
        keys.extend(found.into_iter().map(|(k, _, _)| k));
    }
    let bound = max_len * (1.0 + 1e-12);
    for h in 0..n {
        if surface.vec(h).norm() <= bound {
            keys.push((h, Vec::new()));
        }
    }

    let mut unique: BTreeMap<Key, SaddleConnection> = BTreeMap::new();
    for key in keys {
        let rev = reverse_key(surface, key.0, &key.1);
        let id = key.clone().min(rev);
        unique.entry(id).or_insert_with(|| canonical(surface, key));
    }
    let mut out: Vec<SaddleConnection> = unique.into_values().collect();
    out.sort_by(|a, b| {
        a.length
            .total_cmp(&b.length)
            .then(a.start.cmp(&b.start))
            .then_with(|| (a.corner, &a.crossings).cmp(&(b.corner, &b.crossings)))
    });
    Ok(out)
}

/// Sorted lengths of all connections up to `max_len`.
pub fn length_spectrum(surface: &Surface, max_len: f64, opts: &Options) -> Result<Vec<f64>> {
    Ok(enumerate(surface, max_len, opts)?.into_iter().map(|sc| sc.length).collect())
}
