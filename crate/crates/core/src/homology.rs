//! Absolute homology, intersection numbers and periods.
//!
//! Chains are integer vectors indexed by edge; the coefficient refers to the
//! edge's representative half-edge `edges()[e][0]`.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::cochain::Cochain;
use crate::error::{Error, Result};
use crate::linalg;
use crate::surface::{Kind, Surface};

/// Cycles `A_1..A_g`, `B_1..B_g` with `A_i . B_j = delta_ij` and all other
/// pairings zero.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymplecticBasis {
    pub genus: usize,
    pub a: Vec<Vec<i64>>,
    pub b: Vec<Vec<i64>>,
    /// Intersection matrix of `A_1..A_g, B_1..B_g` in that order.
    pub intersection: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeriodVector {
    pub a: Vec<Complex64>,
    pub b: Vec<Complex64>,
}

/// Coefficient of `h` (as traversed) on its edge's representative.
fn orientation(surface: &Surface, h: usize) -> i64 {
    if surface.edges()[surface.edge_of(h)][0] == h {
        1
    } else {
        -1
    }
}

fn chain_of_walk(surface: &Surface, walk: &[usize]) -> Vec<i64> {
    let mut c = vec![0; surface.edges().len()];
    for &h in walk {
        c[surface.edge_of(h)] += orientation(surface, h);
    }
    c
}

/// Closed walks whose classes form a basis of H_1, from a tree-cotree split.
fn tree_cotree_cycles(surface: &Surface) -> Vec<Vec<usize>> {
    let n = surface.half_edge_count();
    let nv = surface.vertices().len();
    // spanning tree of the vertex graph; parent_edge[v] points towards the root
    let mut parent: Vec<Option<usize>> = vec![None; nv];
    let mut in_tree = vec![false; surface.edges().len()];
    let mut seen = vec![false; nv];
    seen[0] = true;
    let mut queue = VecDeque::from([0usize]);
    let mut outgoing: Vec<Vec<usize>> = vec![Vec::new(); nv];
    for h in 0..n {
        outgoing[surface.origin(h)].push(h);
    }
    while let Some(v) = queue.pop_front() {
        for &h in &outgoing[v] {
            let w = surface.origin(surface.next(h));
            if !seen[w] {
                seen[w] = true;
                parent[w] = Some(surface.opp(h));
                in_tree[surface.edge_of(h)] = true;
                queue.push_back(w);
            }
        }
    }
    // spanning tree of the dual graph avoiding primal tree edges
    let nf = surface.faces().len();
    let mut in_cotree = vec![false; surface.edges().len()];
    let mut fseen = vec![false; nf];
    fseen[0] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(f) = queue.pop_front() {
        for &h in &surface.faces()[f] {
            let e = surface.edge_of(h);
            let g = surface.face_of(surface.opp(h));
            if !in_tree[e] && !fseen[g] {
                fseen[g] = true;
                in_cotree[e] = true;
                queue.push_back(g);
            }
        }
    }
    let path_to_root = |mut v: usize| {
        let mut walk = Vec::new();
        while let Some(h) = parent[v] {
            walk.push(h);
            v = surface.origin(surface.next(h));
        }
        walk
    };
    let mut cycles = Vec::new();
    for (e, &[h, _]) in surface.edges().iter().enumerate() {
        if in_tree[e] || in_cotree[e] {
            continue;
        }
        let (u, w) = (surface.origin(h), surface.origin(surface.next(h)));
        // h, then w -> root, then root -> u
        let mut walk = vec![h];
        walk.extend(path_to_root(w));
        let back: Vec<usize> = path_to_root(u).into_iter().rev().map(|k| surface.opp(k)).collect();
        walk.extend(back);
        // drop immediate backtracks
        let mut reduced: Vec<usize> = Vec::new();
        for k in walk {
            if reduced.last().is_some_and(|&l| surface.opp(l) == k) {
                reduced.pop();
            } else {
                reduced.push(k);
            }
        }
        while reduced.len() > 1 && surface.opp(reduced[0]) == *reduced.last().unwrap() {
            reduced.pop();
            reduced.remove(0);
        }
        cycles.push(reduced);
    }
    cycles
}

/// Intersection number of the chain `a` with the closed walk `b`, counted at
/// the vertices of `b` after pushing it off to its left.
fn intersect_walk(surface: &Surface, a: &[i64], b: &[usize]) -> i64 {
    let m = b.len();
    let mut total = 0;
    for i in 0..m {
        let incoming = surface.opp(b[i]);
        let out = b[(i + 1) % m];
        let mut k = surface.map().rot(out);
        while k != incoming {
            total -= a[surface.edge_of(k)] * orientation(surface, k);
            k = surface.map().rot(k);
        }
    }
    total
}

/// Intersection number of two closed walks.
pub fn intersection_number(surface: &Surface, a: &[usize], b: &[usize]) -> i64 {
    intersect_walk(surface, &chain_of_walk(surface, a), b)
}

fn form(m: &[Vec<BigInt>], x: &[BigInt], y: &[BigInt]) -> BigInt {
    let mut s = BigInt::zero();
    for (i, xi) in x.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        for (j, yj) in y.iter().enumerate() {
            if !yj.is_zero() {
                s += xi * yj * &m[i][j];
            }
        }
    }
    s
}

fn combine(vs: &[Vec<BigInt>], coeffs: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); vs[0].len()];
    for (v, c) in vs.iter().zip(coeffs) {
        if c.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(v) {
            *o += c * x;
        }
    }
    out
}

/// Integer symplectic reduction of a lattice carrying the unimodular form `m`.
/// Returns coefficient vectors `(x_k, y_k)` with `x_k . y_k = 1`.
fn symplectic_reduce(m: &[Vec<BigInt>]) -> Option<Vec<(Vec<BigInt>, Vec<BigInt>)>> {
    let dim = m.len();
    let mut rest: Vec<Vec<BigInt>> = (0..dim)
        .map(|i| (0..dim).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let mut pairs = Vec::new();
    while !rest.is_empty() {
        let x = rest.remove(0);
        let values: Vec<BigInt> = rest.iter().map(|z| form(m, &x, z)).collect();
        // combination y of the rest with x . y = gcd of the values
        let mut g = BigInt::zero();
        let mut coeffs = vec![BigInt::zero(); rest.len()];
        for (j, v) in values.iter().enumerate() {
            let (d, s, t) = linalg::ext_gcd(&g, v);
            for c in coeffs.iter_mut() {
                *c *= &s;
            }
            coeffs[j] += t;
            g = d;
        }
        if !g.is_one() {
            return None;
        }
        let y = combine(&rest, &coeffs);
        let projected: Vec<Vec<BigInt>> = rest
            .iter()
            .map(|z| {
                let zy = form(m, z, &y);
                let zx = form(m, z, &x);
                z.iter().zip(&x).zip(&y).map(|((zi, xi), yi)| zi - &zy * xi + &zx * yi).collect()
            })
            .collect();
        rest = linalg::lattice_basis(projected);
        pairs.push((x, y));
    }
    Some(pairs)
}

fn to_i64(v: &[BigInt]) -> Vec<i64> {
    v.iter().map(|x| x.to_i64().expect("small coefficient")).collect()
}

/// Rank of H_1 from exact boundary ranks.
fn homology_rank(surface: &Surface) -> usize {
    let ne = surface.edges().len();
    let d1: Vec<Vec<i64>> = (0..surface.vertices().len())
        .map(|v| {
            let mut row = vec![0; ne];
            for (e, &[h, _]) in surface.edges().iter().enumerate() {
                if surface.origin(h) == v {
                    row[e] -= 1;
                }
                if surface.origin(surface.next(h)) == v {
                    row[e] += 1;
                }
            }
            row
        })
        .collect();
    let d2: Vec<Vec<i64>> = surface
        .faces()
        .iter()
        .map(|t| {
            let mut row = vec![0; ne];
            for &h in t {
                row[surface.edge_of(h)] += orientation(surface, h);
            }
            row
        })
        .collect();
    ne - linalg::exact_rank(&d1) - linalg::exact_rank(&d2)
}

/// A symplectic basis of H_1 as integer edge chains.
pub fn h1_basis(surface: &Surface) -> Result<SymplecticBasis> {
    let g = surface.genus();
    let rank = homology_rank(surface);
    if rank != 2 * g {
        return Err(Error::RankMismatch { expected: 2 * g, found: rank });
    }
    let walks = tree_cotree_cycles(surface);
    if walks.len() != 2 * g {
        return Err(Error::RankMismatch { expected: 2 * g, found: walks.len() });
    }
    let chains: Vec<Vec<i64>> = walks.iter().map(|w| chain_of_walk(surface, w)).collect();
    for c in &chains {
        // closed: zero boundary
        let mut boundary = vec![0i64; surface.vertices().len()];
        for (e, &[h, _]) in surface.edges().iter().enumerate() {
            boundary[surface.origin(h)] -= c[e];
            boundary[surface.origin(surface.next(h))] += c[e];
        }
        debug_assert!(boundary.iter().all(|&x| x == 0));
    }
    let m: Vec<Vec<BigInt>> = chains
        .iter()
        .map(|a| walks.iter().map(|b| BigInt::from(intersect_walk(surface, a, b))).collect())
        .collect();
    let pairs = symplectic_reduce(&m).ok_or(Error::RankMismatch { expected: 2 * g, found: 0 })?;
    let big_chains: Vec<Vec<BigInt>> = chains.iter().map(|c| c.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut a = Vec::new();
    let mut b = Vec::new();
    let mut coeffs = Vec::new();
    for (x, y) in &pairs {
        a.push(to_i64(&combine(&big_chains, x)));
        b.push(to_i64(&combine(&big_chains, y)));
        coeffs.push(x.clone());
    }
    for (_, y) in &pairs {
        coeffs.push(y.clone());
    }
    let intersection: Vec<Vec<i64>> = coeffs
        .iter()
        .map(|x| coeffs.iter().map(|y| form(&m, x, y).to_i64().expect("small")).collect())
        .collect();
    let basis = SymplecticBasis { genus: g, a, b, intersection };
    if !is_standard(&basis.intersection, g) {
        return Err(Error::RankMismatch { expected: 2 * g, found: rank });
    }
    Ok(basis)
}

fn is_standard(m: &[Vec<i64>], g: usize) -> bool {
    (0..2 * g).all(|i| {
        (0..2 * g).all(|j| {
            let expect = if j == i + g && i < g {
                1
            } else if i == j + g && j < g {
                -1
            } else {
                0
            };
            m[i][j] == expect
        })
    })
}

/// Dimension of the space of edge cocycles, which is `2g + |vertices| - 1`.
pub fn cocycle_space_dim(surface: &Surface) -> Result<usize> {
    let ne = surface.edges().len();
    let rows: Vec<Vec<i64>> = surface
        .faces()
        .iter()
        .map(|t| {
            let mut row = vec![0; ne];
            for &h in t {
                row[surface.edge_of(h)] += orientation(surface, h);
            }
            row
        })
        .collect();
    let dim = ne - linalg::exact_rank(&rows);
    let expected = 2 * surface.genus() + surface.vertices().len() - 1;
    if dim != expected {
        return Err(Error::RankMismatch { expected, found: dim });
    }
    Ok(dim)
}

/// Integral of a cochain over an edge chain.
pub fn chain_period(surface: &Surface, chain: &[i64], eta: &Cochain) -> Complex64 {
    surface
        .edges()
        .iter()
        .zip(chain)
        .map(|(&[h, _], &c)| eta.value(h) * c as f64)
        .sum()
}

/// Periods of `eta` over the basis cycles. Only meaningful on translation
/// surfaces, where cochains integrate over closed cycles.
pub fn periods(surface: &Surface, basis: &SymplecticBasis, eta: &Cochain) -> Result<PeriodVector> {
    if surface.kind() != Kind::Translation {
        return Err(Error::WrongKind("periods need a translation surface; pass to the double cover"));
    }
    eta.check_len(surface.half_edge_count())?;
    Ok(PeriodVector {
        a: basis.a.iter().map(|c| chain_period(surface, c, eta)).collect(),
        b: basis.b.iter().map(|c| chain_period(surface, c, eta)).collect(),
    })
}

/// `(i/2) sum_k (a_k(x) conj(b_k(y)) - b_k(x) conj(a_k(y)))`.
pub fn hermitian_pairing(x: &PeriodVector, y: &PeriodVector) -> Complex64 {
    let s: Complex64 = (0..x.a.len()).map(|k| x.a[k] * y.b[k].conj() - x.b[k] * y.a[k].conj()).sum();
    Complex64::new(0.0, 0.5) * s
}

/// L2 norm of a holomorphic 1-form given by its period cochain.
pub fn hodge_norm(surface: &Surface, basis: &SymplecticBasis, beta: &Cochain) -> Result<f64> {
    let p = periods(surface, basis, beta)?;
    let v = hermitian_pairing(&p, &p).re;
    let scale: f64 = p.a.iter().chain(&p.b).map(|z| z.norm_sqr()).sum();
    if v < -1e-9 * scale.max(1.0) {
        return Err(Error::NegativePairing(v));
    }
    Ok(v.max(0.0).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn torus_basis_and_periods() {
        let s = gallery::square_torus();
        let basis = h1_basis(&s).unwrap();
        assert_eq!(basis.genus, 1);
        assert_eq!(basis.intersection, vec![vec![0, 1], vec![-1, 0]]);
        let p = periods(&s, &basis, &Cochain::omega(&s)).unwrap();
        assert!((hermitian_pairing(&p, &p) - c(1.0, 0.0)).norm() < 1e-12);
        let pb = periods(&s, &basis, &Cochain::conj_omega(&s)).unwrap();
        // anti-holomorphic periods pair negatively
        assert!((hermitian_pairing(&pb, &pb) - c(-1.0, 0.0)).norm() < 1e-12);
        assert!(hermitian_pairing(&p, &pb).norm() < 1e-12);
    }

    #[test]
    fn elementary_torus_intersection_sign() {
        let s = gallery::square_torus();
        // horizontal edge 0 and vertical edge 1 as closed walks
        assert_eq!(intersection_number(&s, &[0], &[1]), 1);
        assert_eq!(intersection_number(&s, &[1], &[0]), -1);
    }

    #[test]
    fn octagon_basis_is_standard_and_bilinear_relation_holds() {
        let oct = gallery::regular_octagon();
        let basis = h1_basis(&oct).unwrap();
        assert_eq!(basis.genus, 2);
        let h = hodge_norm(&oct, &basis, &Cochain::omega(&oct)).unwrap();
        assert!((h * h - oct.area()).abs() < 1e-9 * oct.area());
    }

    #[test]
    fn kw_cocycle_dimension() {
        let kw = gallery::kw_surface(0.1).unwrap();
        assert_eq!(cocycle_space_dim(&kw.surface).unwrap(), 4);
        assert_eq!(cocycle_space_dim(&gallery::square_torus()).unwrap(), 2);
        assert_eq!(cocycle_space_dim(&gallery::regular_octagon()).unwrap(), 4);
        let basis = h1_basis(&kw.surface).unwrap();
        let h = hodge_norm(&kw.surface, &basis, &Cochain::omega(&kw.surface)).unwrap();
        assert!((h * h - 1.1).abs() < 1e-9);
    }

    #[test]
    fn half_translation_periods_are_refused() {
        let q = gallery::principal_genus2();
        let basis = h1_basis(&q).unwrap();
        assert_eq!(basis.genus, 2);
        assert!(matches!(periods(&q, &basis, &Cochain::omega(&q)), Err(Error::WrongKind(_))));
    }

    #[test]
    fn pairing_is_sesquilinear() {
        let oct = gallery::regular_octagon();
        let basis = h1_basis(&oct).unwrap();
        let x = periods(&oct, &basis, &Cochain::random(&oct, 1, 1.0)).unwrap();
        let y = periods(&oct, &basis, &Cochain::random(&oct, 2, 1.0)).unwrap();
        let k = c(0.3, -1.2);
        let kx = PeriodVector { a: x.a.iter().map(|z| z * k).collect(), b: x.b.iter().map(|z| z * k).collect() };
        let ky = PeriodVector { a: y.a.iter().map(|z| z * k).collect(), b: y.b.iter().map(|z| z * k).collect() };
        let base = hermitian_pairing(&x, &y);
        assert!((hermitian_pairing(&kx, &y) - k * base).norm() < 1e-12);
        assert!((hermitian_pairing(&x, &ky) - k.conj() * base).norm() < 1e-12);
    }
}
