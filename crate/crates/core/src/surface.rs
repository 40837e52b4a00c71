//! Flat surfaces given by triangles with complex edge vectors.
//!
//! A half-edge `h` runs from `origin(h)` to `origin(next(h))` and carries the
//! displacement `vec(h)` in the flat chart of its triangle. Gluing an edge may
//! involve a rotation by pi on half-translation surfaces:
//! `vec(opp(h)) = -sign(edge(h)) * vec(h)`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::map::CombinatorialMap;

/// Relative closure tolerance, measured against the longest edge of a triangle.
pub const CLOSURE_TOL: f64 = 1e-9;
const ANGLE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Translation,
    HalfTranslation,
}

impl Kind {
    /// Cone angle unit: a zero of order k has angle `unit * (k + offset)`.
    fn cone_unit(self) -> (f64, i32) {
        match self {
            Kind::Translation => (2.0 * PI, 1),
            Kind::HalfTranslation => (PI, 2),
        }
    }
}

/// A cone point of the flat metric.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Vertex {
    pub id: usize,
    /// Some outgoing half-edge.
    pub half_edge: usize,
    pub angle: f64,
    /// Order of the zero of the differential (0 for a marked regular point).
    pub order: i32,
}

/// A triangulated translation surface (`kind == Translation`, all gluing
/// signs `+1`) or half-translation surface.
#[derive(Debug, Clone, PartialEq)]
pub struct Surface {
    kind: Kind,
    map: CombinatorialMap,
    vec: Vec<Complex64>,
    edges: Vec<[usize; 2]>,
    edge_of: Vec<usize>,
    sign: Vec<i8>,
    faces: Vec<[usize; 3]>,
    face_of: Vec<usize>,
    origin: Vec<usize>,
    vertices: Vec<Vertex>,
}

#[inline]
pub(crate) fn cross(a: Complex64, b: Complex64) -> f64 {
    a.re * b.im - a.im * b.re
}

impl Surface {
    /// Builds and validates a surface.
    ///
    /// `triangles` lists half-edge triples in counterclockwise order, `pairs`
    /// lists the edges (edge index = position), `signs` holds one gluing sign
    /// per edge.
    pub fn new(
        kind: Kind,
        triangles: &[[usize; 3]],
        pairs: &[[usize; 2]],
        vectors: Vec<Complex64>,
        signs: Vec<i8>,
    ) -> Result<Self> {
        let n = vectors.len();
        if n == 0 || !n.is_multiple_of(3) {
            return Err(Error::NonTriangleFace(format!("{n} half-edges")));
        }
        if signs.len() != pairs.len() {
            return Err(Error::Parse("one sign per edge required".into()));
        }
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::Parse("gluing signs must be +1 or -1".into()));
        }
        if kind == Kind::Translation && signs.iter().any(|&s| s != 1) {
            return Err(Error::Parse("translation surfaces glue with sign +1 only".into()));
        }

        let mut next = vec![usize::MAX; n];
        for t in triangles {
            for i in 0..3 {
                let h = t[i];
                if h >= n || next[h] != usize::MAX {
                    return Err(Error::NonTriangleFace(format!("half-edge {h} listed twice or out of range")));
                }
                next[h] = t[(i + 1) % 3];
            }
        }
        if let Some(h) = next.iter().position(|&x| x == usize::MAX) {
            return Err(Error::NonTriangleFace(format!("half-edge {h} belongs to no triangle")));
        }
        let mut opp = vec![usize::MAX; n];
        for &[a, b] in pairs {
            if a >= n || b >= n || a == b || opp[a] != usize::MAX || opp[b] != usize::MAX {
                return Err(Error::UnpairedHalfEdge(a.min(n.saturating_sub(1))));
            }
            opp[a] = b;
            opp[b] = a;
        }
        if let Some(h) = opp.iter().position(|&x| x == usize::MAX) {
            return Err(Error::UnpairedHalfEdge(h));
        }
        let map = CombinatorialMap::new(next, opp)?;

        let mut edge_of = vec![0; n];
        for (e, &[a, b]) in pairs.iter().enumerate() {
            edge_of[a] = e;
            edge_of[b] = e;
        }

        let faces = map.faces();
        let mut face_of = vec![0; n];
        for (f, t) in faces.iter().enumerate() {
            for &h in t {
                face_of[h] = f;
            }
        }

        let mut s = Surface {
            kind,
            map,
            vec: vectors,
            edges: pairs.to_vec(),
            edge_of,
            sign: signs,
            faces,
            face_of,
            origin: Vec::new(),
            vertices: Vec::new(),
        };
        s.check_gluing()?;
        s.close_triangles()?;
        s.check_orientation()?;
        s.assign_vertices();
        s.compute_cone_data()?;
        Ok(s)
    }

    fn check_gluing(&mut self) -> Result<()> {
        for (e, &[a, b]) in self.edges.iter().enumerate() {
            let expect = -(self.sign[e] as f64) * self.vec[a];
            let scale = self.vec[a].norm().max(self.vec[b].norm());
            let mismatch = (self.vec[b] - expect).norm();
            if !(mismatch <= CLOSURE_TOL * scale) || scale == 0.0 {
                return Err(Error::GluingMismatch { edge: e, mismatch });
            }
        }
        Ok(())
    }

    /// Rejects open triangles, then moves the edge vectors to the nearest
    /// exactly closed configuration.
    fn close_triangles(&mut self) -> Result<()> {
        let mut any_residual = false;
        for (f, t) in self.faces.iter().enumerate() {
            let residual = (self.vec[t[0]] + self.vec[t[1]] + self.vec[t[2]]).norm();
            let longest = t.iter().map(|&h| self.vec[h].norm()).fold(0.0, f64::max);
            if !(residual <= CLOSURE_TOL * longest) {
                return Err(Error::TriangleNotClosed { face: f, residual });
            }
            any_residual |= residual != 0.0;
        }
        if any_residual {
            let x: Vec<Complex64> = self.edges.iter().map(|&[a, _]| self.vec[a]).collect();
            let closed = linalg::project_onto_kernel(&self.relation_matrix(), &x);
            self.set_edge_vectors(&closed);
        } else {
            self.sync_opposites();
        }
        Ok(())
    }

    fn sync_opposites(&mut self) {
        for (e, &[a, b]) in self.edges.iter().enumerate() {
            self.vec[b] = -(self.sign[e] as f64) * self.vec[a];
        }
    }

    fn set_edge_vectors(&mut self, x: &[Complex64]) {
        for (e, &[a, _]) in self.edges.iter().enumerate() {
            self.vec[a] = x[e];
        }
        self.sync_opposites();
    }

    /// Coefficient of edge `edge(h)`'s representative value in `value(h)`.
    #[inline]
    pub(crate) fn edge_coefficient(&self, h: usize) -> f64 {
        let e = self.edge_of[h];
        if self.edges[e][0] == h {
            1.0
        } else {
            -(self.sign[e] as f64)
        }
    }

    /// Faces x edges matrix of the (twisted) triangle relations.
    pub(crate) fn relation_matrix(&self) -> DMatrix<f64> {
        let mut a = DMatrix::zeros(self.faces.len(), self.edges.len());
        for (f, t) in self.faces.iter().enumerate() {
            for &h in t {
                a[(f, self.edge_of[h])] += self.edge_coefficient(h);
            }
        }
        a
    }

    fn check_orientation(&self) -> Result<()> {
        for (f, t) in self.faces.iter().enumerate() {
            let a = self.vec[t[0]];
            let b = self.vec[t[1]];
            let scale = a.norm_sqr().max(b.norm_sqr());
            if !(cross(a, b) > 1e-14 * scale) {
                return Err(Error::NegativeOrientation { face: f });
            }
        }
        Ok(())
    }

    fn assign_vertices(&mut self) {
        let n = self.vec.len();
        self.origin = vec![0; n];
        self.vertices.clear();
        for (id, orbit) in self.map.vertex_orbits().into_iter().enumerate() {
            for &h in &orbit {
                self.origin[h] = id;
            }
            self.vertices.push(Vertex { id, half_edge: orbit[0], angle: 0.0, order: 0 });
        }
    }

    /// Recomputes cone angles keeping the current vertex labels.
    fn compute_cone_data(&mut self) -> Result<()> {
        let (unit, offset) = self.kind.cone_unit();
        let mut angle = vec![0.0; self.vertices.len()];
        for h in 0..self.vec.len() {
            angle[self.origin[h]] += self.corner_angle(h);
        }
        for v in self.vertices.iter_mut() {
            let a = angle[v.id];
            let k = (a / unit).round() as i32 - offset;
            let min_order = if self.kind == Kind::Translation { 0 } else { -1 };
            if (a - unit * (k + offset) as f64).abs() > ANGLE_TOL || k < min_order {
                return Err(Error::BadConeAngle { vertex: v.id, angle: a });
            }
            v.angle = a;
            v.order = k;
        }
        let total: i32 = self.vertices.iter().map(|v| v.order).sum();
        let expected = match self.kind {
            Kind::Translation => 2 * self.genus() as i32 - 2,
            Kind::HalfTranslation => 4 * self.genus() as i32 - 4,
        };
        if total != expected {
            let v = &self.vertices[0];
            return Err(Error::BadConeAngle { vertex: v.id, angle: v.angle });
        }
        Ok(())
    }

    /// Interior angle of the triangle of `h` at the origin of `h`.
    pub fn corner_angle(&self, h: usize) -> f64 {
        let out = self.vec[h];
        let back = -self.vec[self.map.prev(h)];
        cross(out, back).atan2(out.re * back.re + out.im * back.im)
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn map(&self) -> &CombinatorialMap {
        &self.map
    }

    pub fn half_edge_count(&self) -> usize {
        self.vec.len()
    }

    #[inline]
    pub fn vec(&self, h: usize) -> Complex64 {
        self.vec[h]
    }

    pub fn vectors(&self) -> &[Complex64] {
        &self.vec
    }

    #[inline]
    pub fn next(&self, h: usize) -> usize {
        self.map.next(h)
    }

    #[inline]
    pub fn prev(&self, h: usize) -> usize {
        self.map.prev(h)
    }

    #[inline]
    pub fn opp(&self, h: usize) -> usize {
        self.map.opp(h)
    }

    #[inline]
    pub fn origin(&self, h: usize) -> usize {
        self.origin[h]
    }

    #[inline]
    pub fn edge_of(&self, h: usize) -> usize {
        self.edge_of[h]
    }

    /// Gluing sign of the edge containing `h`.
    #[inline]
    pub fn sign_of(&self, h: usize) -> f64 {
        self.sign[self.edge_of[h]] as f64
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    pub fn signs(&self) -> &[i8] {
        &self.sign
    }

    pub fn faces(&self) -> &[[usize; 3]] {
        &self.faces
    }

    #[inline]
    pub fn face_of(&self, h: usize) -> usize {
        self.face_of[h]
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edges.len() as i64 + self.faces.len() as i64
    }

    pub fn genus(&self) -> usize {
        ((2 - self.euler_characteristic()) / 2) as usize
    }

    /// Flat area: the sum of the triangle areas.
    pub fn area(&self) -> f64 {
        self.faces.iter().map(|t| self.triangle_area(t[0])).sum()
    }

    /// Area of the triangle containing `h`.
    pub fn triangle_area(&self, h: usize) -> f64 {
        0.5 * cross(self.vec[h], self.vec[self.map.next(h)])
    }

    /// Cone angle of every vertex, by vertex id.
    pub fn cone_angles(&self) -> Vec<(usize, f64)> {
        self.vertices.iter().map(|v| (v.id, v.angle)).collect()
    }

    pub fn longest_edge(&self) -> f64 {
        self.edges.iter().map(|&[a, _]| self.vec[a].norm()).fold(0.0, f64::max)
    }

    pub fn shortest_edge(&self) -> f64 {
        self.edges.iter().map(|&[a, _]| self.vec[a].norm()).fold(f64::INFINITY, f64::min)
    }

    /// Multiplies every edge vector by `c`, i.e. applies the linear map z -> c z.
    pub fn transform(&self, c: Complex64) -> Result<Surface> {
        if c == Complex64::new(0.0, 0.0) || !c.is_finite() {
            return Err(Error::ZeroScale);
        }
        let mut out = self.clone();
        for v in out.vec.iter_mut() {
            *v *= c;
        }
        Ok(out)
    }

    /// Rescales so the area equals `target`.
    pub fn normalized(&self, target: f64) -> Result<(Surface, f64)> {
        let c = (target / self.area()).sqrt();
        Ok((self.transform(Complex64::new(c, 0.0))?, c))
    }

    /// Replaces the edge vectors, re-running the closure, orientation and
    /// cone-angle validation. Combinatorics and vertex labels are kept.
    pub(crate) fn with_vectors(&self, vectors: Vec<Complex64>) -> Result<Surface> {
        let mut out = self.clone();
        out.vec = vectors;
        out.check_gluing()?;
        out.close_triangles()?;
        out.check_orientation()?;
        out.compute_cone_data()?;
        Ok(out)
    }

    /// Flips the edge of `h` inside the quadrilateral formed by its two
    /// triangles. Returns `false` (and changes nothing) when the quadrilateral
    /// is not strictly convex or both sides belong to one triangle.
    ///
    /// The triangle of `opp(h)` is re-expressed in the chart of the triangle of
    /// `h` first; the returned flag tells whether that needed a rotation by pi.
    pub(crate) fn flip(&mut self, h: usize) -> Option<FlipRecord> {
        let g = self.opp(h);
        if self.face_of[h] == self.face_of[g] {
            return None;
        }
        let (n1, p1) = (self.next(h), self.prev(h));
        let (n2, p2) = (self.next(g), self.prev(g));
        let lambda = self.sign_of(h);

        // developed quad in the chart of h's triangle, origin(h) at 0
        let p0 = Complex64::new(0.0, 0.0);
        let q1 = self.vec[h];
        let c = q1 + self.vec[n1];
        let d = p0 + lambda * self.vec[n2];
        let orient = |a: Complex64, b: Complex64, c: Complex64| cross(b - a, c - a);
        if !(orient(p0, d, q1) > 0.0 && orient(d, q1, c) > 0.0 && orient(q1, c, p0) > 0.0 && orient(c, p0, d) > 0.0) {
            return None;
        }
        let rotated = lambda < 0.0;
        if rotated {
            for k in [n2, p2] {
                self.vec[k] = -self.vec[k];
                let e = self.edge_of[k];
                self.sign[e] = -self.sign[e];
            }
        }
        let (oc, od) = (self.origin[p1], self.origin[p2]);

        // new triangles (p2, n1, h) and (p1, n2, g), h: C -> D
        self.vec[h] = d - c;
        self.vec[g] = c - d;
        let e = self.edge_of[h];
        self.sign[e] = 1;
        self.edges[e] = [h, g];
        self.map.set_next(p2, n1);
        self.map.set_next(n1, h);
        self.map.set_next(h, p2);
        self.map.set_next(p1, n2);
        self.map.set_next(n2, g);
        self.map.set_next(g, p1);
        self.origin[h] = oc;
        self.origin[g] = od;
        let (fa, fb) = (self.face_of[h], self.face_of[g]);
        self.faces[fa] = [h, p2, n1];
        self.faces[fb] = [g, p1, n2];
        for &k in &self.faces[fa] {
            self.face_of[k] = fa;
        }
        for &k in &self.faces[fb] {
            self.face_of[k] = fb;
        }
        for v in self.vertices.iter_mut() {
            // outgoing half-edge representatives may have moved
            v.half_edge = usize::MAX;
        }
        for k in 0..self.vec.len() {
            let v = &mut self.vertices[self.origin[k]];
            if v.half_edge == usize::MAX {
                v.half_edge = k;
            }
        }
        Some(FlipRecord { half_edge: h, opposite: g, rotated: rotated.then_some([n2, p2]), triangle: [p2, n1] })
    }

    /// Overwrites edge vectors that agree with the current ones up to rounding.
    pub(crate) fn overwrite_vectors(&mut self, vectors: Vec<Complex64>) {
        debug_assert!(self.vec.iter().zip(&vectors).all(|(a, b)| (a - b).norm() <= 1e-9 * (1.0 + a.norm())));
        self.vec = vectors;
    }

    pub(crate) fn refresh_cone_data(&mut self) -> Result<()> {
        self.compute_cone_data()
    }
}

/// What a flip did, so that cochains can follow along.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FlipRecord {
    /// The flipped half-edge; afterwards it runs between the two former apexes.
    pub half_edge: usize,
    pub opposite: usize,
    /// Half-edges whose chart was rotated by pi before the flip.
    pub rotated: Option<[usize; 2]>,
    /// The other two sides of the new triangle of `half_edge`.
    pub triangle: [usize; 2],
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn square_torus_basics() {
        let s = gallery::square_torus();
        assert_eq!(s.genus(), 1);
        assert_eq!(s.vertices().len(), 1);
        assert!((s.area() - 1.0).abs() < 1e-15);
        assert!((s.cone_angles()[0].1 - 2.0 * PI).abs() < 1e-12);
        assert_eq!(s.vertices()[0].order, 0);
    }

    #[test]
    fn negated_vector_is_not_closed() {
        let tri = [[0, 1, 2], [3, 4, 5]];
        let pairs = [[0, 3], [1, 4], [2, 5]];
        let v = vec![c(1.0, 0.0), c(0.0, 1.0), c(1.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0), c(-1.0, -1.0)];
        let r = Surface::new(Kind::Translation, &tri, &pairs, v, vec![1; 3]);
        assert!(matches!(r, Err(Error::TriangleNotClosed { .. })));
    }

    #[test]
    fn clockwise_triangles_rejected() {
        let tri = [[0, 2, 1], [3, 5, 4]];
        let pairs = [[0, 3], [1, 4], [2, 5]];
        let v = vec![c(1.0, 0.0), c(0.0, 1.0), c(-1.0, -1.0), c(-1.0, 0.0), c(0.0, -1.0), c(1.0, 1.0)];
        let r = Surface::new(Kind::Translation, &tri, &pairs, v, vec![1; 3]);
        assert!(matches!(r, Err(Error::NegativeOrientation { .. })));
    }

    #[test]
    fn small_residual_is_redistributed() {
        let tri = [[0, 1, 2], [3, 4, 5]];
        let pairs = [[0, 3], [1, 4], [2, 5]];
        let d = 1e-12;
        let v = vec![c(1.0 + d, 0.0), c(0.0, 1.0), c(-1.0, -1.0), c(-1.0 - d, 0.0), c(0.0, -1.0), c(1.0, 1.0)];
        let s = Surface::new(Kind::Translation, &tri, &pairs, v, vec![1; 3]).unwrap();
        for t in s.faces() {
            let r = s.vec(t[0]) + s.vec(t[1]) + s.vec(t[2]);
            assert!(r.norm() < 1e-15);
        }
    }

    #[test]
    fn transform_scales_area() {
        let s = gallery::square_torus();
        assert!((s.transform(c(0.0, 1.0)).unwrap().area() - 1.0).abs() < 1e-15);
        assert!((s.transform(c(2.0, 0.0)).unwrap().area() - 4.0).abs() < 1e-15);
        assert_eq!(s.transform(c(0.0, 0.0)), Err(Error::ZeroScale));
        let oct = gallery::regular_octagon();
        let k = (2.0 / oct.area()).sqrt();
        assert!((oct.transform(c(k, 0.0)).unwrap().area() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn octagon_is_genus_two_with_one_zero() {
        let oct = gallery::regular_octagon();
        assert_eq!(oct.genus(), 2);
        assert_eq!(oct.vertices().len(), 1);
        assert!((oct.vertices()[0].angle - 6.0 * PI).abs() < 1e-9);
        assert_eq!(oct.vertices()[0].order, 2);
        assert!((oct.area() - 2.0 * (1.0 + 2f64.sqrt())).abs() < 1e-12);
    }
}
