//! Complex edge cochains: tangent vectors in period coordinates.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg;
use crate::surface::{FlipRecord, Surface};

/// Behaviour under the deck involution of a double cover.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Parity {
    Untyped,
    Invariant,
    AntiInvariant,
}

/// One complex value per half-edge, with `val(opp(h)) = -sign * val(h)` and
/// vanishing sum around every triangle.
#[derive(Debug, Clone, PartialEq)]
pub struct Cochain {
    values: Vec<Complex64>,
    parity: Parity,
}

/// Tolerance of the cocycle check relative to the largest value.
pub const COCYCLE_TOL: f64 = 1e-9;

impl Cochain {
    /// Validates `values` against the surface's gluing and triangle relations.
    pub fn new(surface: &Surface, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != surface.half_edge_count() {
            return Err(Error::CochainMismatch { expected: surface.half_edge_count(), found: values.len() });
        }
        let scale = values.iter().map(|v| v.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
        let mut worst: f64 = 0.0;
        for &[a, b] in surface.edges() {
            worst = worst.max((values[b] + surface.sign_of(a) * values[a]).norm());
        }
        for t in surface.faces() {
            worst = worst.max((values[t[0]] + values[t[1]] + values[t[2]]).norm());
        }
        if !(worst <= COCYCLE_TOL * scale) {
            return Err(Error::NotCocycle(worst / scale));
        }
        let mut values = values;
        for &[a, b] in surface.edges() {
            values[b] = -surface.sign_of(a) * values[a];
        }
        Ok(Self { values, parity: Parity::Untyped })
    }

    pub(crate) fn from_raw(values: Vec<Complex64>, parity: Parity) -> Self {
        Self { values, parity }
    }

    /// The period data of the flat structure itself.
    pub fn omega(surface: &Surface) -> Self {
        Self { values: surface.vectors().to_vec(), parity: Parity::Untyped }
    }

    /// Complex conjugate of [`Cochain::omega`]: the Teichmüller direction.
    pub fn conj_omega(surface: &Surface) -> Self {
        Self { values: surface.vectors().iter().map(|v| v.conj()).collect(), parity: Parity::Untyped }
    }

    /// Uniform values in the disk of radius `magnitude`, projected onto the
    /// cocycle space. Deterministic per seed.
    pub fn random(surface: &Surface, seed: u64, magnitude: f64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let raw: Vec<Complex64> = surface
            .edges()
            .iter()
            .map(|_| {
                let r = magnitude * rng.gen::<f64>().sqrt();
                let theta = rng.gen::<f64>() * std::f64::consts::TAU;
                Complex64::from_polar(r, theta)
            })
            .collect();
        let edge_values = linalg::project_onto_kernel(&surface.relation_matrix(), &raw);
        Self::from_edge_values(surface, &edge_values)
    }

    /// Builds from one value per edge (on the representative half-edge).
    pub(crate) fn from_edge_values(surface: &Surface, edge_values: &[Complex64]) -> Self {
        let mut values = vec![Complex64::new(0.0, 0.0); surface.half_edge_count()];
        for (e, &[a, b]) in surface.edges().iter().enumerate() {
            values[a] = edge_values[e];
            values[b] = -surface.sign_of(a) * edge_values[e];
        }
        Self { values, parity: Parity::Untyped }
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    #[inline]
    pub fn value(&self, h: usize) -> Complex64 {
        self.values[h]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn with_parity(mut self, parity: Parity) -> Self {
        self.parity = parity;
        self
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        Self { values: self.values.iter().map(|v| v * c).collect(), parity: self.parity }
    }

    pub fn conj(&self) -> Self {
        Self { values: self.values.iter().map(|v| v.conj()).collect(), parity: self.parity }
    }

    pub fn add(&self, other: &Cochain) -> Result<Self> {
        self.check_len(other.len())?;
        let parity = if self.parity == other.parity { self.parity } else { Parity::Untyped };
        Ok(Self { values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(), parity })
    }

    pub(crate) fn check_len(&self, expected: usize) -> Result<()> {
        if self.values.len() != expected {
            return Err(Error::CochainMismatch { expected, found: self.values.len() });
        }
        Ok(())
    }

    /// Largest triangle-sum residual (zero for an exact cocycle).
    pub fn cocycle_residual(&self, surface: &Surface) -> f64 {
        surface
            .faces()
            .iter()
            .map(|t| (self.values[t[0]] + self.values[t[1]] + self.values[t[2]]).norm())
            .fold(0.0, f64::max)
    }

    /// Carries the cochain across a sequence of edge flips.
    pub fn follow_flips(&self, flips: &[FlipRecord]) -> Self {
        let mut values = self.values.clone();
        for f in flips {
            if let Some(rot) = f.rotated {
                for k in rot {
                    values[k] = -values[k];
                }
            }
            let v = -(values[f.triangle[0]] + values[f.triangle[1]]);
            values[f.half_edge] = v;
            values[f.opposite] = -v;
        }
        Self { values, parity: self.parity }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;

    #[test]
    fn random_cochain_is_a_cocycle() {
        let s = gallery::regular_octagon();
        let c = Cochain::random(&s, 7, 0.3);
        assert!(c.cocycle_residual(&s) < 1e-14);
        assert!(Cochain::new(&s, c.values().to_vec()).is_ok());
        assert_eq!(c, Cochain::random(&s, 7, 0.3));
        assert_ne!(c, Cochain::random(&s, 8, 0.3));
    }

    #[test]
    fn rejects_non_cocycle() {
        let s = gallery::square_torus();
        let mut v = s.vectors().to_vec();
        v[0] += Complex64::new(0.5, 0.0);
        assert!(matches!(Cochain::new(&s, v), Err(Error::NotCocycle(_))));
        assert!(matches!(Cochain::new(&s, vec![]), Err(Error::CochainMismatch { .. })));
    }
}
