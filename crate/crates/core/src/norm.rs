//! AGY norm, Beltrami derivatives and the two-sided Teichmüller comparison.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::cochain::Cochain;
use crate::cover::{self, DoubleCover};
use crate::delaunay;
use crate::error::{Error, Result};
use crate::gallery;
use crate::homology;
use crate::saddle::{self, SaddleConnection};
use crate::surface::{cross, Kind, Surface};

/// Returned by [`max_deformation_time`] when no triangle ever degenerates.
pub const TIME_CAP: f64 = 1e9;
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AgyResult {
    pub value: f64,
    pub certificate: Option<SaddleConnection>,
    pub cutoff: f64,
    /// The value over connections up to `cutoff / 2` already equals `value`.
    pub stabilized: bool,
    pub connections: usize,
}

/// Sup of `|period(eta)| / |holonomy|` over the given connections.
pub fn agy_from_connections(
    surface: &Surface,
    eta: &Cochain,
    connections: &[SaddleConnection],
    cutoff: f64,
) -> Result<AgyResult> {
    let mut best = (0.0f64, None::<&SaddleConnection>);
    let mut half = 0.0f64;
    for sc in connections {
        let ratio = saddle::period(surface, sc, eta)?.norm() / sc.length;
        if sc.length <= 0.5 * cutoff {
            half = half.max(ratio);
        }
        if ratio > best.0 || best.1.is_none() {
            best = (ratio.max(best.0), Some(sc));
        }
    }
    let value = best.0;
    Ok(AgyResult {
        value,
        certificate: best.1.cloned(),
        cutoff,
        stabilized: (value - half).abs() <= 1e-12 * value.max(f64::MIN_POSITIVE),
        connections: connections.len(),
    })
}

/// AGY norm over all saddle connections up to `cutoff` (default twice the
/// longest edge, which is meant for Delaunay triangulations).
pub fn agy_norm(surface: &Surface, eta: &Cochain, cutoff: Option<f64>, opts: &saddle::Options) -> Result<AgyResult> {
    eta.check_len(surface.half_edge_count())?;
    let cutoff = cutoff.unwrap_or(2.0 * surface.longest_edge());
    let connections = saddle::enumerate(surface, cutoff, opts)?;
    agy_from_connections(surface, eta, &connections, cutoff)
}

/// Derivative at t = 0 of the Beltrami coefficient of the real-affine map
/// taking the triangle `0, a, b` to `0, a + t alpha, b + t beta`.
pub fn beltrami_derivative(a: Complex64, b: Complex64, alpha: Complex64, beta: Complex64) -> Result<Complex64> {
    let area2 = cross(a, b);
    if !(area2 > 0.0) {
        return Err(Error::DegenerateTriangle(0));
    }
    Ok((alpha / a - beta / b) / (a.conj() / a - b.conj() / b))
}

/// Beltrami coefficient `S / R` of `f(z) = R z + S conj(z)` with
/// `f(a) = a + t alpha`, `f(b) = b + t beta`.
pub fn beltrami_at(a: Complex64, b: Complex64, alpha: Complex64, beta: Complex64, t: f64) -> Result<Complex64> {
    let det = a * b.conj() - a.conj() * b;
    if det.norm() == 0.0 {
        return Err(Error::DegenerateTriangle(0));
    }
    let (fa, fb) = (a + t * alpha, b + t * beta);
    let r = (fa * b.conj() - a.conj() * fb) / det;
    let s = (a * fb - b * fa) / det;
    Ok(s / r)
}

/// Beltrami derivative of every triangle, in face order.
pub fn triangle_beltrami(surface: &Surface, eta: &Cochain) -> Result<Vec<Complex64>> {
    eta.check_len(surface.half_edge_count())?;
    surface
        .faces()
        .iter()
        .enumerate()
        .map(|(f, t)| {
            let a = surface.vec(t[0]);
            let b = -surface.vec(t[2]);
            beltrami_derivative(a, b, eta.value(t[0]), -eta.value(t[2])).map_err(|_| Error::DegenerateTriangle(f))
        })
        .collect()
}

/// `max_T |mu_T|`: an upper bound for the Teichmüller norm of the tangent vector.
pub fn teich_upper(surface: &Surface, eta: &Cochain) -> Result<f64> {
    Ok(triangle_beltrami(surface, eta)?.iter().map(|m| m.norm()).fold(0.0, f64::max))
}

/// `|sum_T mu_T Area(T)| / Area`: pairing against the unit quadratic
/// differential of the surface itself.
pub fn teich_lower(surface: &Surface, eta: &Cochain) -> Result<f64> {
    let mu = triangle_beltrami(surface, eta)?;
    let mut total = Complex64::new(0.0, 0.0);
    let mut area = 0.0;
    for (m, t) in mu.iter().zip(surface.faces()) {
        let a = surface.triangle_area(t[0]);
        total += m * a;
        area += a;
    }
    Ok(total.norm() / area)
}

/// Smallest positive root of `c + b t + a t^2`, touching roots included.
fn first_root(a: f64, b: f64, c: f64) -> Option<f64> {
    let scale = a.abs().max(b.abs()).max(c.abs());
    if a.abs() <= 1e-14 * scale {
        return (b < 0.0).then(|| -c / b);
    }
    let disc = b * b - 4.0 * a * c;
    if disc < -1e-12 * (b * b).max(scale * scale) {
        return None;
    }
    let sq = disc.max(0.0).sqrt();
    // numerically stable pair of roots
    let q = -0.5 * (b + b.signum() * sq);
    let mut roots = vec![q / a];
    if q != 0.0 {
        roots.push(c / q);
    }
    roots.into_iter().filter(|&t| t > 0.0).min_by(|x, y| x.total_cmp(y))
}

/// First time at which some triangle of `vec + t eta` degenerates, or
/// [`TIME_CAP`] if none does.
pub fn max_deformation_time(surface: &Surface, eta: &Cochain) -> Result<f64> {
    eta.check_len(surface.half_edge_count())?;
    let mut best = TIME_CAP;
    for t in surface.faces() {
        let (a, b) = (surface.vec(t[0]), -surface.vec(t[2]));
        let (al, be) = (eta.value(t[0]), -eta.value(t[2]));
        let c0 = cross(a, b);
        let c1 = cross(al, b) + cross(a, be);
        let c2 = cross(al, be);
        if let Some(r) = first_root(c2, c1, c0) {
            best = best.min(r);
        }
    }
    Ok(best)
}

/// The surface with edge vectors `vec + t eta`, fully revalidated.
pub fn deform(surface: &Surface, eta: &Cochain, t: f64) -> Result<Surface> {
    eta.check_len(surface.half_edge_count())?;
    let vectors: Vec<Complex64> = surface.vectors().iter().zip(eta.values()).map(|(v, e)| v + t * e).collect();
    for (f, tri) in surface.faces().iter().enumerate() {
        let (a, b) = (vectors[tri[0]], vectors[tri[1]]);
        if !(cross(a, b) > 1e-14 * a.norm_sqr().max(b.norm_sqr())) {
            return Err(Error::DegenerateAtT { face: f, t });
        }
    }
    surface.with_vectors(vectors).map_err(|e| match e {
        Error::NegativeOrientation { face } => Error::DegenerateAtT { face, t },
        other => other,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropLowerReport {
    pub holds: bool,
    pub worst_ratio: f64,
    pub bound: f64,
    pub hodge_norm: f64,
    pub r: f64,
}

/// Checks `|int beta| / |int omega| <= hodge_norm(beta) / r` over all saddle
/// connections up to `cutoff`, for `beta` the periods of a holomorphic form.
pub fn prop_lower_check(surface: &Surface, beta: &Cochain, cutoff: f64, opts: &saddle::Options) -> Result<PropLowerReport> {
    let basis = homology::h1_basis(surface)?;
    let hodge = homology::hodge_norm(surface, &basis, beta)?;
    let r = 0.5 * delaunay::systole(surface)?;
    let connections = saddle::enumerate(surface, cutoff, opts)?;
    let worst = agy_from_connections(surface, beta, &connections, cutoff)?.value;
    let bound = hodge / r;
    Ok(PropLowerReport { holds: worst <= bound + DEFAULT_TOL, worst_ratio: worst, bound, hodge_norm: hodge, r })
}

#[derive(Debug, Clone)]
pub struct CompareOptions {
    pub cutoff: Option<f64>,
    /// Periods of a holomorphic form whose conjugate is the tangent vector.
    pub beta: Option<Cochain>,
    /// Treat the tangent vector as anti-holomorphic even if it is not a
    /// multiple of `conj(omega)`.
    pub anti_holomorphic: bool,
    pub tol: f64,
    pub saddle: saddle::Options,
}

impl Default for CompareOptions {
    fn default() -> Self {
        Self { cutoff: None, beta: None, anti_holomorphic: false, tol: DEFAULT_TOL, saddle: saddle::Options::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareReport {
    pub area: f64,
    pub systole: f64,
    pub r: f64,
    pub flips: usize,
    pub agy: AgyResult,
    pub teich_upper: f64,
    pub teich_lower: f64,
    pub lower_bound: f64,
    pub upper_bound: f64,
    pub lower_constant_check: bool,
    pub upper_constant_check: bool,
    pub hodge_bound_check: Option<bool>,
    pub hodge_ratio: Option<f64>,
    /// The lower check only applies to anti-holomorphic directions.
    pub lower_check_advisory: bool,
    pub anti_invariant: Option<bool>,
    pub advisories: Vec<String>,
}

impl CompareReport {
    /// All checks that are not advisory pass.
    pub fn passed(&self) -> bool {
        self.upper_constant_check
            && (self.lower_check_advisory || self.lower_constant_check)
            && self.hodge_bound_check.unwrap_or(true)
    }
}

/// Least-squares multiple `c` with `eta ~ c conj(omega)`, if the fit is exact.
fn conj_omega_multiple(surface: &Surface, eta: &Cochain) -> Option<Complex64> {
    let w: Vec<Complex64> = surface.vectors().iter().map(|v| v.conj()).collect();
    let num: Complex64 = w.iter().zip(eta.values()).map(|(a, b)| a.conj() * b).sum();
    let den: f64 = w.iter().map(|a| a.norm_sqr()).sum();
    let c = num / den;
    let resid = w.iter().zip(eta.values()).map(|(a, b)| (b - c * a).norm()).fold(0.0, f64::max);
    let scale = eta.values().iter().map(|v| v.norm()).fold(0.0, f64::max);
    (resid <= 1e-9 * scale.max(f64::MIN_POSITIVE)).then_some(c)
}

/// Moves a base or total-space cochain to the anti-invariant part on the cover.
fn upstairs(cover: &DoubleCover, base: &Surface, eta: &Cochain, advisories: &mut Vec<String>) -> Result<(Cochain, bool)> {
    if eta.len() == base.half_edge_count() {
        return Ok((cover::lift(cover, base, eta)?, true));
    }
    eta.check_len(cover.total.half_edge_count())?;
    let defect = cover::anti_invariance_defect(cover, eta)?;
    let anti = defect <= 1e-9;
    if !anti {
        advisories.push(format!("cochain is not anti-invariant (defect {defect:.3e}); projected, checks advisory"));
    }
    Ok((cover::project_anti_invariant(cover, eta)?, anti))
}

/// The full comparison: pass to the double cover if needed, normalize to
/// area 2, Delaunay triangulate, then evaluate both sides of the estimates.
pub fn compare(surface: &Surface, eta: &Cochain, opts: &CompareOptions) -> Result<CompareReport> {
    let mut advisories = Vec::new();
    let (total, mut eta, mut beta, anti) = match surface.kind() {
        Kind::Translation => {
            eta.check_len(surface.half_edge_count())?;
            (surface.clone(), eta.clone(), opts.beta.clone(), None)
        }
        Kind::HalfTranslation => {
            let cov = cover::double_cover(surface)?;
            let (e, anti) = upstairs(&cov, surface, eta, &mut advisories)?;
            let b = match &opts.beta {
                Some(b) => Some(upstairs(&cov, surface, b, &mut advisories)?.0),
                None => None,
            };
            (cov.total, e, b, Some(anti))
        }
    };
    if let Some(b) = &beta {
        b.check_len(total.half_edge_count())?;
    }
    let (scaled, k) = total.normalized(2.0)?;
    let k = Complex64::new(k, 0.0);
    eta = eta.scaled(k);
    beta = beta.map(|b| b.scaled(k));
    let (del, report) = delaunay::delaunayize(&scaled)?;
    let eta = eta.follow_flips(&report.flips);
    let beta = beta.map(|b| b.follow_flips(&report.flips));

    let cutoff = opts.cutoff.unwrap_or(2.0 * del.longest_edge());
    let connections = saddle::enumerate(&del, cutoff.max(del.shortest_edge()), &opts.saddle)?;
    let shortest = del.shortest_edge();
    let systole = connections.iter().map(|sc| sc.length).fold(shortest, f64::min);
    let r = 0.5 * systole;
    let agy = agy_from_connections(&del, &eta, &connections, cutoff)?;
    if !agy.stabilized {
        advisories.push(format!("AGY value not stabilized between cutoff {:.6} and {:.6}", cutoff / 2.0, cutoff));
    }
    let upper = teich_upper(&del, &eta)?;
    let lower = teich_lower(&del, &eta)?;
    let lower_bound = r / 2f64.sqrt() * agy.value;
    let upper_bound = 8.0 / (PI.sqrt() * r) * agy.value;
    let anti_holomorphic = opts.anti_holomorphic || beta.is_some() || conj_omega_multiple(&del, &eta).is_some();
    if !anti_holomorphic {
        advisories.push("lower check is advisory: tangent vector not known to be anti-holomorphic".into());
    }
    let (hodge_bound_check, hodge_ratio) = match &beta {
        Some(b) => {
            let basis = homology::h1_basis(&del)?;
            let hb = homology::hodge_norm(&del, &basis, b)?;
            let hw = homology::hodge_norm(&del, &basis, &Cochain::omega(&del))?;
            let ratio = hb / hw;
            (Some(upper >= ratio - opts.tol), Some(ratio))
        }
        None => (None, None),
    };
    let advisory_from_parity = matches!(anti, Some(false));
    Ok(CompareReport {
        area: del.area(),
        systole,
        r,
        flips: report.flips_performed,
        agy,
        teich_upper: upper,
        teich_lower: lower,
        lower_bound,
        upper_bound,
        lower_constant_check: upper >= lower_bound - opts.tol,
        upper_constant_check: lower <= upper_bound + opts.tol,
        hodge_bound_check,
        hodge_ratio,
        lower_check_advisory: !anti_holomorphic || advisory_from_parity,
        anti_invariant: anti,
        advisories,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KwScanRow {
    pub eps: f64,
    pub r: f64,
    pub agy: f64,
    pub teich_upper: f64,
    pub teich_lower: f64,
    pub lower_check: bool,
    pub upper_check: bool,
}

/// Runs [`compare`] on the slit-cylinder family with its twist cochain.
pub fn kw_scan(eps: &[f64], opts: &CompareOptions) -> Result<Vec<KwScanRow>> {
    eps.iter()
        .map(|&e| {
            let kw = gallery::kw_surface(e)?;
            let eta = gallery::twist_cochain(&kw, 0)?;
            let rep = compare(&kw.surface, &eta, opts)?;
            Ok(KwScanRow {
                eps: e,
                r: rep.r,
                agy: rep.agy.value,
                teich_upper: rep.teich_upper,
                teich_lower: rep.teich_lower,
                lower_check: rep.lower_constant_check,
                upper_check: rep.upper_constant_check,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cochain::Parity;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn beltrami_examples() {
        let (a, b) = (c(1.0, 0.0), c(0.0, 1.0));
        assert!(beltrami_derivative(a, b, a, b).unwrap().norm() < 1e-15);
        assert!((beltrami_derivative(a, b, a.conj(), b.conj()).unwrap() - 1.0).norm() < 1e-15);
        let m = beltrami_derivative(a, b, c(0.0, 0.0), c(1.0, 0.0)).unwrap();
        assert!((m - c(0.0, 0.5)).norm() < 1e-15);
        let t = 1e-6;
        let fd = beltrami_at(a, b, c(0.0, 0.0), c(1.0, 0.0), t).unwrap() / t;
        assert!((fd - m).norm() < 10.0 * t);
        assert!(beltrami_derivative(a, a, a, a).is_err());
    }

    proptest! {
        #[test]
        fn finite_differences_agree(
            ar in 0.2f64..2.0, ath in -3.0f64..3.0, bth in 0.2f64..2.9, br in 0.2f64..2.0,
            al in (-1.0f64..1.0, -1.0f64..1.0), be in (-1.0f64..1.0, -1.0f64..1.0),
        ) {
            let a = Complex64::from_polar(ar, ath);
            let b = Complex64::from_polar(br, ath + bth);
            let (al, be) = (c(al.0, al.1), c(be.0, be.1));
            let t = 1e-6;
            let d = beltrami_derivative(a, b, al, be).unwrap();
            let fd = beltrami_at(a, b, al, be, t).unwrap() / t;
            prop_assert!((fd - d).norm() <= 10.0 * t * (1.0 + d.norm()));
        }

        #[test]
        fn rotation_invariance(th in 0.0f64..std::f64::consts::TAU, seed in 0u64..50) {
            let s = gallery::regular_octagon();
            let eta = Cochain::random(&s, seed, 0.5);
            let u = Complex64::from_polar(1.0, th);
            let rs = s.transform(u).unwrap();
            let reta = eta.scaled(u);
            let a = triangle_beltrami(&s, &eta).unwrap();
            let b = triangle_beltrami(&rs, &reta).unwrap();
            for (x, y) in a.iter().zip(&b) {
                prop_assert!((x.norm() - y.norm()).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn teich_estimates_on_torus() {
        let s = gallery::square_torus();
        assert!(teich_upper(&s, &Cochain::omega(&s).scaled(c(0.3, 2.0))).unwrap() < 1e-15);
        assert!((teich_upper(&s, &Cochain::conj_omega(&s)).unwrap() - 1.0).abs() < 1e-15);
        assert!((teich_lower(&s, &Cochain::conj_omega(&s)).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn lower_estimate_below_upper_with_mixed_signs() {
        let s = gallery::parallelogram_torus(c(1.0, 0.0), c(0.1, 1.0));
        for seed in 0..10 {
            let eta = Cochain::random(&s, seed, 1.0);
            assert!(teich_lower(&s, &eta).unwrap() <= teich_upper(&s, &eta).unwrap() + 1e-12);
        }
        // a cochain with different Beltrami derivatives on the two triangles:
        // the horizontal and vertical edges move, the diagonal is forced
        let eta = Cochain::new(&s, vec![c(0.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0)]).unwrap();
        let mu = triangle_beltrami(&s, &eta).unwrap();
        assert!((mu[0] - mu[1]).norm() < 1e-12, "a cocycle on a torus is affine");
        assert!(teich_lower(&s, &eta).unwrap() <= teich_upper(&s, &eta).unwrap() + 1e-12);
    }

    #[test]
    fn deformation_times() {
        let s = gallery::square_torus();
        assert_eq!(max_deformation_time(&s, &Cochain::omega(&s)).unwrap(), TIME_CAP);
        let neg = Cochain::omega(&s).scaled(c(-1.0, 0.0));
        assert!((max_deformation_time(&s, &neg).unwrap() - 1.0).abs() < 1e-12);
        assert!((max_deformation_time(&s, &Cochain::conj_omega(&s)).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn deform_examples() {
        let s = gallery::square_torus();
        let wb = Cochain::conj_omega(&s);
        assert_eq!(deform(&s, &wb, 0.0).unwrap().vectors(), s.vectors());
        assert!((deform(&s, &wb, 0.5).unwrap().area() - 0.75).abs() < 1e-15);
        assert!(matches!(deform(&s, &wb, 1.0), Err(Error::DegenerateAtT { .. })));
    }

    #[test]
    fn agy_examples() {
        let oct = gallery::regular_octagon();
        let opts = saddle::Options::default();
        let k = c(0.6, -0.8) * 1.7;
        let r = agy_norm(&oct, &Cochain::omega(&oct).scaled(k), Some(3.0), &opts).unwrap();
        assert!((r.value - k.norm()).abs() < 1e-12);
        let r = agy_norm(&oct, &Cochain::conj_omega(&oct), Some(3.0), &opts).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
        assert!(r.stabilized);
    }

    #[test]
    fn octagon_prop_lower() {
        let oct = gallery::regular_octagon();
        let rep = prop_lower_check(&oct, &Cochain::omega(&oct), 3.0, &saddle::Options::default()).unwrap();
        assert!(rep.holds);
        assert!((rep.worst_ratio - 1.0).abs() < 1e-12);
        assert!((rep.r - 0.5).abs() < 1e-12);
        assert!((rep.bound - oct.area().sqrt() / 0.5).abs() < 1e-9);
    }

    #[test]
    fn compare_conj_omega_on_cover() {
        let q = gallery::principal_genus2();
        let rep = compare(&q, &Cochain::conj_omega(&q), &CompareOptions::default()).unwrap();
        assert!((rep.area - 2.0).abs() < 1e-12);
        assert!((rep.agy.value - 1.0).abs() < 1e-9);
        assert!((rep.teich_upper - 1.0).abs() < 1e-9);
        assert!((rep.teich_lower - 1.0).abs() < 1e-9);
        assert!(rep.lower_constant_check && rep.upper_constant_check);
        assert!(!rep.lower_check_advisory);
        assert!(rep.passed());
    }

    #[test]
    fn compare_omega_marks_lower_check_advisory() {
        let s = gallery::regular_octagon();
        let rep = compare(&s, &Cochain::omega(&s), &CompareOptions::default()).unwrap();
        assert!(!rep.lower_constant_check);
        assert!(rep.lower_check_advisory);
        assert!(rep.passed());
    }

    #[test]
    fn hodge_check_with_beta() {
        let s = gallery::regular_octagon();
        let opts = CompareOptions { beta: Some(Cochain::omega(&s)), ..CompareOptions::default() };
        let rep = compare(&s, &Cochain::conj_omega(&s), &opts).unwrap();
        assert_eq!(rep.hodge_bound_check, Some(true));
        assert!((rep.hodge_ratio.unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn kw_twist_is_a_unit_shear_of_the_cylinder() {
        let rows = kw_scan(&[0.1], &CompareOptions::default()).unwrap();
        assert!((rows[0].agy - 1.0).abs() < 1e-9);
        assert!((rows[0].teich_upper - 0.5).abs() < 1e-9);
        assert!(rows[0].lower_check && rows[0].upper_check);
    }

    #[test]
    fn parity_is_tracked() {
        let q = gallery::principal_genus2();
        let cov = cover::double_cover(&q).unwrap();
        let lifted = cover::lift(&cov, &q, &Cochain::conj_omega(&q)).unwrap();
        assert_eq!(lifted.parity(), Parity::AntiInvariant);
    }
}
