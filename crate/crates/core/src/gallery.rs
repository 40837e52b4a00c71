//! Deterministic example surfaces and tangent vectors.

use std::collections::HashMap;

use num_complex::Complex64;
use serde::Serialize;

use crate::cochain::Cochain;
use crate::error::{Error, Result};
use crate::surface::{Kind, Surface};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Polygons with explicit triangles and side gluings, assembled into a
/// triangulated surface. Gluing signs are read off the side vectors.
struct PolygonComplex {
    polygons: Vec<Vec<Complex64>>,
    /// (polygon, counterclockwise vertex indices)
    triangles: Vec<(usize, [usize; 3])>,
    /// ((polygon, side), (polygon, side)); side i runs from vertex i to i+1
    gluings: Vec<((usize, usize), (usize, usize))>,
}

impl PolygonComplex {
    fn fan(polygons: Vec<Vec<Complex64>>, gluings: Vec<((usize, usize), (usize, usize))>) -> Self {
        let mut triangles = Vec::new();
        for (p, pts) in polygons.iter().enumerate() {
            for k in 1..pts.len() - 1 {
                triangles.push((p, [0, k, k + 1]));
            }
        }
        Self { polygons, triangles, gluings }
    }

    fn build(&self) -> Result<(Surface, HashMap<(usize, usize, usize), usize>)> {
        let mut id = HashMap::new();
        let mut tris = Vec::new();
        let mut vectors = Vec::new();
        for &(p, t) in &self.triangles {
            let pts = &self.polygons[p];
            let mut tri = [0; 3];
            for i in 0..3 {
                let (a, b) = (t[i], t[(i + 1) % 3]);
                tri[i] = vectors.len();
                id.insert((p, a, b), vectors.len());
                vectors.push(pts[b] - pts[a]);
            }
            tris.push(tri);
        }
        let mut pairs = Vec::new();
        let mut signs = Vec::new();
        let mut seen = vec![false; vectors.len()];
        for &(p, t) in &self.triangles {
            for i in 0..3 {
                let (a, b) = (t[i], t[(i + 1) % 3]);
                let h = id[&(p, a, b)];
                if seen[h] {
                    continue;
                }
                if let Some(&g) = id.get(&(p, b, a)) {
                    seen[h] = true;
                    seen[g] = true;
                    pairs.push([h, g]);
                    signs.push(1);
                }
            }
        }
        for &((p, i), (q, j)) in &self.gluings {
            let side = |p: usize, i: usize| {
                let m = self.polygons[p].len();
                id.get(&(p, i, (i + 1) % m)).copied().ok_or_else(|| Error::InvalidArgument(format!("side {i} of polygon {p} is not a triangle side")))
            };
            let (h, g) = (side(p, i)?, side(q, j)?);
            let (vh, vg) = (vectors[h], vectors[g]);
            let sign = if (vg + vh).norm() <= 1e-12 * vh.norm() {
                1
            } else if (vg - vh).norm() <= 1e-12 * vh.norm() {
                -1
            } else {
                return Err(Error::InvalidArgument(format!("sides ({p},{i}) and ({q},{j}) are not parallel")));
            };
            seen[h] = true;
            seen[g] = true;
            pairs.push([h, g]);
            signs.push(sign);
        }
        if let Some(h) = seen.iter().position(|s| !s) {
            return Err(Error::UnpairedHalfEdge(h));
        }
        let kind = if signs.iter().any(|&s| s < 0) { Kind::HalfTranslation } else { Kind::Translation };
        Ok((Surface::new(kind, &tris, &pairs, vectors, signs)?, id))
    }
}

/// Unit square torus triangulated by one diagonal: vectors 1, i, -1-i.
pub fn square_torus() -> Surface {
    parallelogram_torus(c(1.0, 0.0), c(0.0, 1.0))
}

/// Torus spanned by `u` and `v` (counterclockwise), triangulated by the
/// diagonal `u + v`.
pub fn parallelogram_torus(u: Complex64, v: Complex64) -> Surface {
    let tris = [[0, 1, 2], [3, 4, 5]];
    let pairs = [[0, 3], [1, 4], [2, 5]];
    let vectors = vec![u, v, -u - v, -u, -v, u + v];
    Surface::new(Kind::Translation, &tris, &pairs, vectors, vec![1; 3]).expect("valid torus")
}

/// Regular octagon with unit sides, opposite sides glued, fan-triangulated.
pub fn regular_octagon() -> Surface {
    let mut pts = vec![c(0.0, 0.0)];
    for k in 0..7 {
        let last = *pts.last().unwrap();
        pts.push(last + Complex64::from_polar(1.0, k as f64 * std::f64::consts::FRAC_PI_4));
    }
    let gluings = (0..4).map(|i| ((0, i), (0, i + 4))).collect();
    PolygonComplex::fan(vec![pts], gluings).build().expect("valid octagon").0
}

/// A flat cylinder inside a tagged surface, recorded by the half-edges that
/// cross it from the bottom boundary to the top boundary.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cylinder {
    pub id: usize,
    pub upward: Vec<usize>,
    pub circumference: f64,
    pub height: f64,
}

/// A surface together with the cylinders its builder knows about.
#[derive(Debug, Clone)]
pub struct TaggedSurface {
    pub surface: Surface,
    pub cylinders: Vec<Cylinder>,
}

/// Unit square torus with a horizontal slit of length `eps`, into which a
/// vertical cylinder of circumference `eps` and height 1 is glued.
///
/// As a polygon this is the L-shaped table `[0,1]^2 ∪ [0,eps]x[1,2]`; the
/// result lies in H(2), has area `1 + eps` and shortest saddle connection
/// `eps` (the slit banks).
pub fn kw_surface(eps: f64) -> Result<TaggedSurface> {
    if !(eps > 0.0 && eps < 0.5) {
        return Err(Error::BadEpsilon(eps));
    }
    let pts = vec![
        c(0.0, 0.0),
        c(eps, 0.0),
        c(1.0, 0.0),
        c(1.0, 1.0),
        c(eps, 1.0),
        c(eps, 2.0),
        c(0.0, 2.0),
        c(0.0, 1.0),
    ];
    let complex = PolygonComplex {
        polygons: vec![pts],
        triangles: vec![
            (0, [7, 4, 5]),
            (0, [7, 5, 6]),
            (0, [0, 1, 4]),
            (0, [0, 4, 7]),
            (0, [1, 2, 3]),
            (0, [1, 3, 4]),
        ],
        gluings: vec![((0, 0), (0, 5)), ((0, 1), (0, 3)), ((0, 2), (0, 7)), ((0, 4), (0, 6))],
    };
    let (surface, id) = complex.build()?;
    let cylinder = Cylinder { id: 0, upward: vec![id[&(0, 4, 5)], id[&(0, 7, 5)]], circumference: eps, height: 1.0 };
    Ok(TaggedSurface { surface, cylinders: vec![cylinder] })
}

/// The cocycle Poincaré dual to the core curve of a tagged cylinder: value 1
/// on every edge crossing the cylinder upward, 0 on edges outside it. Its
/// period over the vertical crossing equals that crossing's length.
pub fn twist_cochain(tagged: &TaggedSurface, cylinder: usize) -> Result<Cochain> {
    let cyl = tagged.cylinders.iter().find(|c| c.id == cylinder).ok_or(Error::NoSuchCylinder(cylinder))?;
    let s = &tagged.surface;
    let mut values = vec![c(0.0, 0.0); s.half_edge_count()];
    for &h in &cyl.upward {
        values[h] = c(cyl.height, 0.0);
        values[s.opp(h)] = c(-cyl.height, 0.0);
    }
    Cochain::new(s, values)
}

/// The cochain whose time-1 deformation is one full Dehn twist of the cylinder.
pub fn dehn_twist_cochain(tagged: &TaggedSurface, cylinder: usize) -> Result<Cochain> {
    let cyl = tagged.cylinders.iter().find(|c| c.id == cylinder).ok_or(Error::NoSuchCylinder(cylinder))?;
    Ok(twist_cochain(tagged, cylinder)?.scaled(c(cyl.circumference / cyl.height, 0.0)))
}

/// Side vectors of the centrally symmetric octagon used by [`principal_genus2`].
const OCTAGON_SIDES: [(f64, f64); 4] = [(1.0, 0.0), (0.7, 0.6), (0.1, 1.0), (-0.6, 0.8)];

/// A quadratic differential with four simple zeros on a genus-2 surface,
/// made from two copies of a generic centrally symmetric octagon. Two side
/// pairs are glued by a half-turn, the rest by translations.
pub fn principal_genus2() -> Surface {
    let mut sides: Vec<Complex64> = OCTAGON_SIDES.iter().map(|&(x, y)| c(x, y)).collect();
    sides.extend(sides.clone().into_iter().map(|v| -v));
    let mut pts = vec![c(0.0, 0.0)];
    for v in &sides[..7] {
        let last = *pts.last().unwrap();
        pts.push(last + v);
    }
    let gluings = vec![
        ((0, 0), (0, 4)),
        ((0, 1), (0, 5)),
        ((0, 2), (1, 6)),
        ((0, 3), (1, 3)),
        ((0, 6), (1, 2)),
        ((0, 7), (1, 7)),
        ((1, 0), (1, 4)),
        ((1, 1), (1, 5)),
    ];
    PolygonComplex::fan(vec![pts.clone(), pts], gluings).build().expect("valid principal example").0
}

/// Deterministic random cocycle; see [`Cochain::random`].
pub fn random_cochain(surface: &Surface, seed: u64, magnitude: f64) -> Cochain {
    Cochain::random(surface, seed, magnitude)
}

/// Named examples for the command line.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExampleSpec {
    pub name: String,
    pub eps: Option<f64>,
    pub seed: Option<u64>,
}

pub const EXAMPLE_NAMES: [&str; 5] = ["square-torus", "parallelogram-torus", "octagon", "kw", "principal-genus2"];

impl ExampleSpec {
    pub fn build(&self) -> Result<Surface> {
        match self.name.as_str() {
            "square-torus" | "torus" => Ok(square_torus()),
            "parallelogram-torus" => Ok(parallelogram_torus(c(1.0, 0.0), c(0.1, 1.0))),
            "octagon" => Ok(regular_octagon()),
            "kw" => Ok(kw_surface(self.eps.unwrap_or(0.1))?.surface),
            "principal-genus2" => Ok(principal_genus2()),
            other => Err(Error::InvalidArgument(format!(
                "unknown example {other:?}; expected one of {}",
                EXAMPLE_NAMES.join(", ")
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn kw_structure() {
        for eps in [0.1, 0.05, 0.025] {
            let kw = kw_surface(eps).unwrap();
            let s = &kw.surface;
            assert_eq!(s.genus(), 2);
            assert_eq!(s.vertices().len(), 1);
            assert_eq!(s.vertices()[0].order, 2);
            assert!((s.vertices()[0].angle - 6.0 * PI).abs() < 1e-9);
            assert!((s.area() - (1.0 + eps)).abs() < 1e-12);
        }
        assert_eq!(kw_surface(0.5).err(), Some(Error::BadEpsilon(0.5)));
        assert_eq!(kw_surface(0.0).err(), Some(Error::BadEpsilon(0.0)));
    }

    #[test]
    fn twist_cochain_support() {
        let kw = kw_surface(0.1).unwrap();
        let t = twist_cochain(&kw, 0).unwrap();
        let nonzero = t.values().iter().filter(|v| v.norm() > 0.0).count();
        assert_eq!(nonzero, 4);
        assert_eq!(twist_cochain(&kw, 3).err(), Some(Error::NoSuchCylinder(3)));
    }

    #[test]
    fn principal_example_has_four_simple_zeros() {
        let q = principal_genus2();
        assert_eq!(q.kind(), Kind::HalfTranslation);
        assert_eq!(q.genus(), 2);
        assert_eq!(q.vertices().len(), 4);
        for v in q.vertices() {
            assert_eq!(v.order, 1);
            assert!((v.angle - 3.0 * PI).abs() < 1e-9);
        }
    }

    #[test]
    fn example_specs() {
        for name in EXAMPLE_NAMES {
            let spec = ExampleSpec { name: name.into(), eps: None, seed: None };
            assert!(spec.build().is_ok(), "{name}");
        }
        assert!(ExampleSpec { name: "nope".into(), eps: None, seed: None }.build().is_err());
    }
}
