//! JSON documents for surfaces and cochains.
//!
//! ```json
//! { "kind": "translation",
//!   "triangles": [[0, 1, 2], [3, 4, 5]],
//!   "opposite": [[0, 3], [1, 4], [2, 5]],
//!   "vectors": { "0": [1.0, 0.0], "1": [0.0, 1.0], ... },
//!   "signs": { "0": 1 } }
//! ```

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cochain::Cochain;
use crate::error::{Error, Result};
use crate::surface::{Kind, Surface};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceDocument {
    pub kind: Kind,
    pub triangles: Vec<[usize; 3]>,
    pub opposite: Vec<[usize; 2]>,
    pub vectors: BTreeMap<String, [f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signs: Option<BTreeMap<String, i8>>,
    /// Deck involution on half-edges (double covers only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<Vec<usize>>,
    /// Projection of half-edges to the base surface (double covers only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub proj: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CochainDocument {
    pub values: BTreeMap<String, [f64; 2]>,
}

fn index(key: &str) -> Result<usize> {
    key.parse().map_err(|_| Error::Parse(format!("bad half-edge key {key:?}")))
}

fn complex_map(values: &BTreeMap<String, [f64; 2]>, n: usize, what: &str) -> Result<Vec<Complex64>> {
    let mut out = vec![None; n];
    for (k, &[re, im]) in values {
        let h = index(k)?;
        if h >= n {
            return Err(Error::Parse(format!("{what} key {h} out of range")));
        }
        if !re.is_finite() || !im.is_finite() {
            return Err(Error::Parse(format!("{what} for {h} is not finite")));
        }
        out[h] = Some(Complex64::new(re, im));
    }
    out.into_iter()
        .enumerate()
        .map(|(h, v)| v.ok_or_else(|| Error::Parse(format!("missing {what} for half-edge {h}"))))
        .collect()
}

fn to_map(values: &[Complex64]) -> BTreeMap<String, [f64; 2]> {
    values.iter().enumerate().map(|(h, v)| (h.to_string(), [v.re, v.im])).collect()
}

impl SurfaceDocument {
    pub fn from_surface(surface: &Surface) -> Self {
        let mut triangles = surface.faces().to_vec();
        // canonical rotation: smallest half-edge first
        for t in triangles.iter_mut() {
            let k = (0..3).min_by_key(|&i| t[i]).unwrap();
            t.rotate_left(k);
        }
        let signs = match surface.kind() {
            Kind::Translation => None,
            Kind::HalfTranslation => {
                Some(surface.signs().iter().enumerate().map(|(e, &s)| (e.to_string(), s)).collect())
            }
        };
        Self {
            kind: surface.kind(),
            triangles,
            opposite: surface.edges().to_vec(),
            vectors: to_map(surface.vectors()),
            signs,
            tau: None,
            proj: None,
        }
    }

    pub fn to_surface(&self) -> Result<Surface> {
        let n = 3 * self.triangles.len();
        if self.vectors.len() != n {
            return Err(Error::Parse(format!("expected {n} vectors, found {}", self.vectors.len())));
        }
        let vectors = complex_map(&self.vectors, n, "vector")?;
        let mut signs = vec![1i8; self.opposite.len()];
        if let Some(map) = &self.signs {
            if self.kind == Kind::Translation && map.values().any(|&s| s != 1) {
                return Err(Error::Parse("signs are only allowed on half-translation surfaces".into()));
            }
            for (k, &s) in map {
                let e = index(k)?;
                if e >= signs.len() {
                    return Err(Error::Parse(format!("sign for unknown edge {e}")));
                }
                signs[e] = s;
            }
        }
        Surface::new(self.kind, &self.triangles, &self.opposite, vectors, signs)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Pretty JSON with sorted keys.
    pub fn to_json(&self) -> String {
        canonical_json(self)
    }
}

impl CochainDocument {
    pub fn from_cochain(c: &Cochain) -> Self {
        Self { values: to_map(c.values()) }
    }

    pub fn to_cochain(&self, surface: &Surface) -> Result<Cochain> {
        let n = if self.values.len() == surface.half_edge_count() {
            surface.half_edge_count()
        } else {
            return Err(Error::CochainMismatch { expected: surface.half_edge_count(), found: self.values.len() });
        };
        Cochain::new(surface, complex_map(&self.values, n, "value")?)
    }

    /// Raw values without validation against a particular surface.
    pub fn raw_values(&self) -> Result<Vec<Complex64>> {
        complex_map(&self.values, self.values.len(), "value")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        canonical_json(self)
    }
}

/// Serializes through `serde_json::Value`, whose maps keep keys sorted.
pub fn canonical_json<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("serializable");
    serde_json::to_string_pretty(&v).expect("serializable")
}

pub fn read_surface(text: &str) -> Result<Surface> {
    SurfaceDocument::from_json(text)?.to_surface()
}

pub fn write_surface(surface: &Surface) -> String {
    SurfaceDocument::from_surface(surface).to_json()
}
