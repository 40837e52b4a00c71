//! Small dense linear algebra helpers: orthogonal projection onto the kernel of
//! a real constraint matrix, and exact rank over the rationals.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Orthogonal projection of complex `x` onto `ker(a)`, applied to real and
/// imaginary parts separately.
pub(crate) fn project_onto_kernel(a: &DMatrix<f64>, x: &[Complex64]) -> Vec<Complex64> {
    let (rows, cols) = a.shape();
    assert_eq!(cols, x.len());
    if rows == 0 {
        return x.to_vec();
    }
    let svd = a.clone().svd(false, true);
    let v_t = svd.v_t.expect("requested right singular vectors");
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let cutoff = smax * 1e-10 * (rows.max(cols) as f64);

    let mut out = x.to_vec();
    for (k, &s) in svd.singular_values.iter().enumerate() {
        if s <= cutoff {
            continue;
        }
        let row = v_t.row(k);
        let mut dot = Complex64::zero();
        for j in 0..cols {
            dot += x[j] * row[j];
        }
        for j in 0..cols {
            out[j] -= dot * row[j];
        }
    }
    out
}

/// Rank of an integer matrix, computed exactly over Q.
pub(crate) fn exact_rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| r.iter().map(|&v| BigRational::from_integer(BigInt::from(v))).collect())
        .collect();
    let nrows = m.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = m[0].len();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..nrows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        let inv = BigRational::one() / m[rank][col].clone();
        for c in col..ncols {
            m[rank][c] = &m[rank][c] * &inv;
        }
        for r in 0..nrows {
            if r != rank && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in col..ncols {
                    let delta = &factor * &m[rank][c];
                    m[r][c] -= delta;
                }
            }
        }
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    rank
}

/// Extended gcd: returns `(g, s, t)` with `s*a + t*b = g >= 0`.
pub(crate) fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let (mut old_r, mut r) = (a.clone(), b.clone());
    let (mut old_s, mut s) = (BigInt::one(), BigInt::zero());
    let (mut old_t, mut t) = (BigInt::zero(), BigInt::one());
    while !r.is_zero() {
        let q = &old_r / &r;
        let nr = &old_r - &q * &r;
        old_r = std::mem::replace(&mut r, nr);
        let ns = &old_s - &q * &s;
        old_s = std::mem::replace(&mut s, ns);
        let nt = &old_t - &q * &t;
        old_t = std::mem::replace(&mut t, nt);
    }
    if old_r < BigInt::zero() {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Row-reduces integer vectors to a basis of the lattice they span
/// (echelon form via gcd row operations). Zero rows are dropped.
pub(crate) fn lattice_basis(mut rows: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    rows.retain(|r| r.iter().any(|v| !v.is_zero()));
    if rows.is_empty() {
        return rows;
    }
    let ncols = rows[0].len();
    let mut basis = Vec::new();
    for col in 0..ncols {
        // fold every row with a nonzero entry in `col` into a single pivot row
        let mut pivot: Option<Vec<BigInt>> = None;
        let mut rest = Vec::with_capacity(rows.len());
        for row in rows.into_iter() {
            if row[col].is_zero() {
                rest.push(row);
                continue;
            }
            match pivot.take() {
                None => pivot = Some(row),
                Some(p) => {
                    let (g, s, t) = ext_gcd(&p[col], &row[col]);
                    let pa = &p[col] / &g;
                    let ra = &row[col] / &g;
                    let new_p: Vec<BigInt> =
                        p.iter().zip(&row).map(|(x, y)| &s * x + &t * y).collect();
                    let reduced: Vec<BigInt> =
                        p.iter().zip(&row).map(|(x, y)| &ra * x - &pa * y).collect();
                    debug_assert!(reduced[col].is_zero());
                    if reduced.iter().any(|v| !v.is_zero()) {
                        rest.push(reduced);
                    }
                    pivot = Some(new_p);
                }
            }
        }
        rows = rest;
        if let Some(p) = pivot {
            basis.push(p);
        }
        if rows.is_empty() {
            break;
        }
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_small_matrices() {
        assert_eq!(exact_rank(&[vec![1, 2], vec![2, 4]]), 1);
        assert_eq!(exact_rank(&[vec![1, 0, 1], vec![0, 1, 1], vec![1, 1, 2]]), 2);
        assert_eq!(exact_rank(&[vec![0, 0], vec![0, 0]]), 0);
        assert_eq!(exact_rank(&[]), 0);
    }

    #[test]
    fn gcd_identity() {
        let (g, s, t) = ext_gcd(&BigInt::from(12), &BigInt::from(-18));
        assert_eq!(g, BigInt::from(6));
        assert_eq!(s * 12 + t * -18, BigInt::from(6));
    }

    #[test]
    fn lattice_basis_keeps_index() {
        let b = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        let basis = lattice_basis(vec![b(&[2, 0]), b(&[3, 0]), b(&[0, 5]), b(&[1, 5])]);
        assert_eq!(basis.len(), 2);
        // lattice spanned is Z x 5Z: determinant 5
        let det = &basis[0][0] * &basis[1][1] - &basis[0][1] * &basis[1][0];
        assert_eq!(det.magnitude(), BigInt::from(5).magnitude());
    }

    #[test]
    fn kernel_projection_satisfies_constraints() {
        let a = DMatrix::from_row_slice(1, 3, &[1.0, 1.0, 1.0]);
        let x = [Complex64::new(1.0, 0.5), Complex64::new(2.0, 0.0), Complex64::new(0.0, -1.0)];
        let p = project_onto_kernel(&a, &x);
        let s: Complex64 = p.iter().sum();
        assert!(s.norm() < 1e-14);
    }
}
