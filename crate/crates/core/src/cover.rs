//! The orientation double cover of a half-translation surface.
//!
//! Half-edge `h` of sheet `s` becomes `s * n + h` with vector `(-1)^s vec(h)`.
//! Edges glued with sign `+1` stay on their sheet, edges glued with a
//! half-turn switch sheets. The deck involution swaps the sheets.

use num_complex::Complex64;

use crate::cochain::{Cochain, Parity};
use crate::document::SurfaceDocument;
use crate::error::{Error, Result};
use crate::linalg;
use crate::surface::{Kind, Surface};

#[derive(Debug, Clone)]
pub struct DoubleCover {
    pub total: Surface,
    /// Base half-edge under each half-edge of the total space.
    pub proj: Vec<usize>,
    /// Sheet swap on half-edges of the total space.
    pub tau: Vec<usize>,
}

pub fn double_cover(base: &Surface) -> Result<DoubleCover> {
    if base.signs().iter().all(|&s| s == 1) {
        return Err(Error::AlreadySquare);
    }
    let n = base.half_edge_count();
    let mut triangles = Vec::with_capacity(2 * base.faces().len());
    let mut vectors = vec![Complex64::new(0.0, 0.0); 2 * n];
    for s in 0..2 {
        let k = if s == 0 { 1.0 } else { -1.0 };
        for t in base.faces() {
            triangles.push([s * n + t[0], s * n + t[1], s * n + t[2]]);
        }
        for h in 0..n {
            vectors[s * n + h] = k * base.vec(h);
        }
    }
    let mut pairs = Vec::with_capacity(2 * base.edges().len());
    for (e, &[a, b]) in base.edges().iter().enumerate() {
        if base.signs()[e] == 1 {
            pairs.push([a, b]);
            pairs.push([n + a, n + b]);
        } else {
            pairs.push([a, n + b]);
            pairs.push([n + a, b]);
        }
    }
    let signs = vec![1; pairs.len()];
    let mut total = match Surface::new(Kind::Translation, &triangles, &pairs, vectors.clone(), signs) {
        Err(Error::Disconnected) => return Err(Error::AlreadySquare),
        other => other?,
    };
    // keep the sheets exact negatives of each other
    total.overwrite_vectors(vectors);
    let proj = (0..2 * n).map(|h| h % n).collect();
    let tau = (0..2 * n).map(|h| (h + n) % (2 * n)).collect();
    Ok(DoubleCover { total, proj, tau })
}

impl DoubleCover {
    /// Vertices of the total space fixed by the involution.
    pub fn ramification_vertices(&self) -> Vec<usize> {
        self.total
            .vertices()
            .iter()
            .filter(|v| self.total.origin(self.tau[v.half_edge]) == v.id)
            .map(|v| v.id)
            .collect()
    }

    pub fn to_document(&self) -> SurfaceDocument {
        let mut doc = SurfaceDocument::from_surface(&self.total);
        doc.tau = Some(self.tau.clone());
        doc.proj = Some(self.proj.clone());
        doc
    }
}

/// `(tau^* eta)(h) = eta(tau(h))`.
pub fn tau_pullback(cover: &DoubleCover, eta: &Cochain) -> Result<Cochain> {
    eta.check_len(cover.tau.len())?;
    let values = cover.tau.iter().map(|&t| eta.value(t)).collect();
    Ok(Cochain::from_raw(values, eta.parity()))
}

/// `(eta - tau^* eta) / 2`.
pub fn project_anti_invariant(cover: &DoubleCover, eta: &Cochain) -> Result<Cochain> {
    let pulled = tau_pullback(cover, eta)?;
    let values = eta.values().iter().zip(pulled.values()).map(|(a, b)| (a - b) * 0.5).collect();
    Ok(Cochain::from_raw(values, Parity::AntiInvariant))
}

/// Lifts a cochain on the base, with the sheet sign that makes `omega` lift
/// to the total space's `omega`. The result is anti-invariant.
pub fn lift(cover: &DoubleCover, base: &Surface, eta: &Cochain) -> Result<Cochain> {
    eta.check_len(base.half_edge_count())?;
    let n = base.half_edge_count();
    if cover.tau.len() != 2 * n {
        return Err(Error::CochainMismatch { expected: cover.tau.len() / 2, found: n });
    }
    let values = (0..2 * n).map(|h| if h < n { eta.value(h) } else { -eta.value(h - n) }).collect();
    Ok(Cochain::from_raw(values, Parity::AntiInvariant))
}

/// Largest violation of `tau^* eta = -eta`, relative to the largest value.
pub fn anti_invariance_defect(cover: &DoubleCover, eta: &Cochain) -> Result<f64> {
    let pulled = tau_pullback(cover, eta)?;
    let scale = eta.values().iter().map(|v| v.norm()).fold(0.0, f64::max);
    let worst = eta.values().iter().zip(pulled.values()).map(|(a, b)| (a + b).norm()).fold(0.0, f64::max);
    Ok(if scale > 0.0 { worst / scale } else { 0.0 })
}

fn orientation(s: &Surface, h: usize) -> i64 {
    if s.edges()[s.edge_of(h)][0] == h {
        1
    } else {
        -1
    }
}

/// Dimension of anti-invariant cocycles modulo anti-invariant coboundaries,
/// by exact rank computations.
pub fn anti_invariant_dimension(cover: &DoubleCover) -> usize {
    let s = &cover.total;
    let ne = s.edges().len();
    let mut rows: Vec<Vec<i64>> = Vec::new();
    for t in s.faces() {
        let mut row = vec![0; ne];
        for &h in t {
            row[s.edge_of(h)] += orientation(s, h);
        }
        rows.push(row);
    }
    for (e, &[h, _]) in s.edges().iter().enumerate() {
        // eta(tau h) + eta(h) = 0
        let t = cover.tau[h];
        let mut row = vec![0; ne];
        row[e] += 1;
        row[s.edge_of(t)] += orientation(s, t);
        rows.push(row);
    }
    let cocycles = ne - linalg::exact_rank(&rows);

    let mut coboundaries: Vec<Vec<i64>> = Vec::new();
    for v in s.vertices() {
        let w = s.origin(cover.tau[v.half_edge]);
        if w <= v.id {
            continue;
        }
        let f = |u: usize| (u == v.id) as i64 - (u == w) as i64;
        coboundaries.push(s.edges().iter().map(|&[h, _]| f(s.origin(s.next(h))) - f(s.origin(h))).collect());
    }
    let exact = if coboundaries.is_empty() { 0 } else { linalg::exact_rank(&coboundaries) };
    cocycles - exact
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;

    #[test]
    fn principal_cover_has_genus_five() {
        let q = gallery::principal_genus2();
        let cover = double_cover(&q).unwrap();
        assert_eq!(cover.total.genus(), 5);
        assert_eq!(cover.ramification_vertices().len(), 4);
        assert_eq!(cover.total.vertices().len(), 4);
        assert!((cover.total.area() - 2.0 * q.area()).abs() < 1e-12 * q.area());
        for h in 0..cover.tau.len() {
            assert_eq!(cover.tau[cover.tau[h]], h);
            assert_ne!(cover.tau[h], h);
            assert_eq!(cover.proj[cover.tau[h]], cover.proj[h]);
        }
    }

    #[test]
    fn omega_is_anti_invariant() {
        let cover = double_cover(&gallery::principal_genus2()).unwrap();
        let w = Cochain::omega(&cover.total);
        let pulled = tau_pullback(&cover, &w).unwrap();
        assert!(pulled.values().iter().zip(w.values()).all(|(a, b)| *a == -*b));
        let p = project_anti_invariant(&cover, &w).unwrap();
        assert_eq!(p.values(), w.values());
        assert_eq!(anti_invariant_dimension(&cover), 6);
    }

    #[test]
    fn projection_of_random_cochain() {
        let cover = double_cover(&gallery::principal_genus2()).unwrap();
        let r = Cochain::random(&cover.total, 11, 1.0);
        let p = project_anti_invariant(&cover, &r).unwrap();
        let back = tau_pullback(&cover, &p).unwrap();
        assert!(back.values().iter().zip(p.values()).all(|(a, b)| *a == -*b));
        assert!(Cochain::new(&cover.total, p.values().to_vec()).is_ok());
        // invariant part projects to zero
        let inv = r.add(&tau_pullback(&cover, &r).unwrap()).unwrap();
        assert!(project_anti_invariant(&cover, &inv).unwrap().values().iter().all(|v| v.norm() < 1e-15));
    }

    #[test]
    fn pillowcase_covers_a_torus() {
        // the rectangle [0,2]x[0,1] with left and right sides translated and
        // the top and bottom sides each folded by a half-turn
        let c = |x: f64, y: f64| Complex64::new(x, y);
        let tris = [[0, 1, 2], [3, 4, 5], [6, 7, 8], [9, 10, 11]];
        let v = vec![
            c(1.0, 0.0), c(0.0, 1.0), c(-1.0, -1.0),
            c(1.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0),
            c(1.0, 0.0), c(0.0, 1.0), c(-1.0, -1.0),
            c(1.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0),
        ];
        let pairs = [[2, 3], [8, 9], [1, 11], [5, 7], [0, 6], [4, 10]];
        let signs = vec![1, 1, 1, 1, -1, -1];
        let q = Surface::new(Kind::HalfTranslation, &tris, &pairs, v, signs).unwrap();
        assert_eq!(q.genus(), 0);
        assert_eq!(q.vertices().len(), 4);
        let cover = double_cover(&q).unwrap();
        assert_eq!(cover.total.genus(), 1);
    }

    #[test]
    fn squares_are_rejected() {
        assert!(matches!(double_cover(&gallery::square_torus()), Err(Error::AlreadySquare)));
    }
}
