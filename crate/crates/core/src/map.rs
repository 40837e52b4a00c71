//! Half-edge combinatorics of a triangulated closed surface.

use crate::error::{Error, Result};

/// Triangulation combinatorics: `next` walks counterclockwise inside a
/// triangle, `opp` pairs the two sides of an edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CombinatorialMap {
    next: Vec<usize>,
    opp: Vec<usize>,
}

impl CombinatorialMap {
    pub fn new(next: Vec<usize>, opp: Vec<usize>) -> Result<Self> {
        let n = next.len();
        if opp.len() != n {
            return Err(Error::Parse("next and opp have different lengths".into()));
        }
        for h in 0..n {
            let (a, b) = (next[h], opp[h]);
            if a >= n || b >= n {
                return Err(Error::Parse(format!("half-edge index out of range at {h}")));
            }
            if next[next[a]] != h || a == h {
                return Err(Error::NonTriangleFace(format!("half-edge {h}")));
            }
            if opp[b] != h || b == h {
                return Err(Error::UnpairedHalfEdge(h));
            }
        }
        let map = Self { next, opp };
        if !map.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(map)
    }

    pub fn half_edge_count(&self) -> usize {
        self.next.len()
    }

    #[inline]
    pub fn next(&self, h: usize) -> usize {
        self.next[h]
    }

    #[inline]
    pub fn prev(&self, h: usize) -> usize {
        self.next[self.next[h]]
    }

    #[inline]
    pub fn opp(&self, h: usize) -> usize {
        self.opp[h]
    }

    /// Next outgoing half-edge counterclockwise around the origin of `h`.
    #[inline]
    pub fn rot(&self, h: usize) -> usize {
        self.opp[self.prev(h)]
    }

    pub(crate) fn set_next(&mut self, h: usize, n: usize) {
        self.next[h] = n;
    }

    pub fn is_connected(&self) -> bool {
        let n = self.next.len();
        if n == 0 {
            return false;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(h) = stack.pop() {
            for g in [self.next[h], self.opp[h]] {
                if !seen[g] {
                    seen[g] = true;
                    count += 1;
                    stack.push(g);
                }
            }
        }
        count == n
    }

    /// Triangles as triples `[h, next(h), prev(h)]`, ordered by smallest half-edge.
    pub fn faces(&self) -> Vec<[usize; 3]> {
        let n = self.next.len();
        let mut seen = vec![false; n];
        let mut out = Vec::with_capacity(n / 3);
        for h in 0..n {
            if !seen[h] {
                let f = [h, self.next(h), self.prev(h)];
                for &g in &f {
                    seen[g] = true;
                }
                out.push(f);
            }
        }
        out
    }

    /// Orbits of `rot`: the outgoing half-edges around each vertex, in
    /// counterclockwise order, ordered by smallest half-edge.
    pub fn vertex_orbits(&self) -> Vec<Vec<usize>> {
        let n = self.next.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for h in 0..n {
            if seen[h] {
                continue;
            }
            let mut orbit = Vec::new();
            let mut g = h;
            loop {
                seen[g] = true;
                orbit.push(g);
                g = self.rot(g);
                if g == h {
                    break;
                }
            }
            out.push(orbit);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn torus() -> CombinatorialMap {
        // faces (0,1,2) and (3,4,5), edges {0,3} {1,4} {2,5}
        CombinatorialMap::new(vec![1, 2, 0, 4, 5, 3], vec![3, 4, 5, 0, 1, 2]).unwrap()
    }

    #[test]
    fn torus_counts() {
        let m = torus();
        assert_eq!(m.faces().len(), 2);
        assert_eq!(m.vertex_orbits().len(), 1);
        assert_eq!(m.vertex_orbits()[0].len(), 6);
    }

    #[test]
    fn rejects_bad_faces_and_pairings() {
        assert!(matches!(
            CombinatorialMap::new(vec![1, 0, 2, 4, 5, 3], vec![3, 4, 5, 0, 1, 2]),
            Err(Error::NonTriangleFace(_))
        ));
        assert!(matches!(
            CombinatorialMap::new(vec![1, 2, 0, 4, 5, 3], vec![3, 4, 5, 0, 2, 1]),
            Err(Error::UnpairedHalfEdge(_))
        ));
    }

    #[test]
    fn rejects_disconnected() {
        let next = vec![1, 2, 0, 4, 5, 3, 7, 8, 6, 10, 11, 9];
        let opp = vec![3, 4, 5, 0, 1, 2, 9, 10, 11, 6, 7, 8];
        assert_eq!(CombinatorialMap::new(next, opp), Err(Error::Disconnected));
    }
}
