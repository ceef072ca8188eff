//! Dirac monopole of strength `g` at the origin.
//!
//! The gauge potential uses the two Wu-Yang patches. With `n` the unit vector
//! opposite the configured string direction and `r = |x|`:
//!
//! ```text
//! North: A = +g (n x x) / (r (r + n.x))   singular on the ray along -n
//! South: A = -g (n x x) / (r (r - n.x))   singular on the ray along +n
//! ```
//!
//! which for the default string along `-z` are the familiar
//! `+-g (1 -+ cos t) / (r sin t)` azimuthal potentials. Both have curl
//! `B = g x / r^3` away from their string, and their difference is a pure
//! gauge whose circulation around any loop enclosing the axis is `4 pi g`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{gauss_legendre, sphere_point, SphereMesh, Vec3};
use crate::reduce::{pairwise_sum_by, par_pairwise_sum_by};

/// Angular distance to the string below which the potential is refused.
pub const STRING_TOL: f64 = 1e-9;

/// Distance from the origin below which `B` is refused.
pub const ORIGIN_TOL: f64 = 1e-12;

/// `|n - round(n)|` below which the Dirac index counts as an integer.
pub const QUANTIZED_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Patch {
    North,
    South,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonopoleConfig {
    pub g: f64,
    pub e: f64,
    pub hbar_c: f64,
    string_axis: Vec3,
    pub patch: Patch,
}

impl MonopoleConfig {
    /// North patch, string along `-z`.
    pub fn new(g: f64, e: f64, hbar_c: f64) -> Result<Self> {
        if e == 0.0 || !e.is_finite() {
            return Err(Error::InvalidCharge);
        }
        if !(hbar_c > 0.0 && hbar_c.is_finite()) {
            return Err(Error::InvalidMonopole(format!("hbar_c must be positive, got {hbar_c}")));
        }
        if !g.is_finite() {
            return Err(Error::InvalidMonopole(format!("g must be finite, got {g}")));
        }
        Ok(Self { g, e, hbar_c, string_axis: -Vec3::z(), patch: Patch::North })
    }

    pub fn with_patch(mut self, patch: Patch) -> Self {
        self.patch = patch;
        self
    }

    /// Direction of the North-patch string; normalized on the way in.
    pub fn with_string_axis(mut self, axis: Vec3) -> Result<Self> {
        let norm = axis.norm();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::InvalidMonopole("string axis must be a nonzero vector".into()));
        }
        self.string_axis = axis / norm;
        Ok(self)
    }

    pub fn string_axis(&self) -> Vec3 {
        self.string_axis
    }

    /// Direction of the string for the active patch.
    pub fn active_string(&self) -> Vec3 {
        match self.patch {
            Patch::North => self.string_axis,
            Patch::South => -self.string_axis,
        }
    }
}

fn check_origin(x: &Vec3) -> Result<f64> {
    let r = x.norm();
    if r < ORIGIN_TOL {
        return Err(Error::OriginSingularity { at: (*x).into() });
    }
    Ok(r)
}

/// Patch potential at `x`.
pub fn vector_potential(cfg: &MonopoleConfig, x: &Vec3) -> Result<Vec3> {
    let r = check_origin(x)?;
    let s = cfg.active_string();
    let off_string = s.cross(x).norm().atan2(s.dot(x));
    if off_string < STRING_TOL {
        return Err(Error::StringSingularity { at: (*x).into() });
    }
    let pole = -cfg.string_axis;
    let twist = pole.cross(x);
    let along = pole.dot(x);
    Ok(match cfg.patch {
        Patch::North => twist * (cfg.g / (r * (r + along))),
        Patch::South => twist * (-cfg.g / (r * (r - along))),
    })
}

/// `B = g x / |x|^3`, the same for both patches.
pub fn b_field(cfg: &MonopoleConfig, x: &Vec3) -> Result<Vec3> {
    let r = check_origin(x)?;
    Ok(x * (cfg.g / (r * r * r)))
}

/// Circle of colatitude `theta` (from +z) on the sphere of radius `radius`,
/// sampled at `samples` equally spaced azimuths.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Loop {
    pub radius: f64,
    pub theta: f64,
    pub samples: usize,
}

impl Loop {
    pub fn new(radius: f64, theta: f64, samples: usize) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidRadius(format!("loop radius must be positive, got {radius}")));
        }
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::InvalidRadius(format!("loop colatitude must lie in [0, pi], got {theta}")));
        }
        if samples == 0 {
            return Err(Error::TooFewSamples { min: 1, got: 0 });
        }
        Ok(Self { radius, theta, samples })
    }

    pub fn azimuth(&self, j: usize) -> f64 {
        2.0 * PI * j as f64 / self.samples as f64
    }

    pub fn point(&self, j: usize) -> Vec3 {
        sphere_point(self.radius, self.theta, self.azimuth(j))
    }

    /// `dx / dphi` at sample `j`.
    pub fn tangent(&self, j: usize) -> Vec3 {
        let (sp, cp) = self.azimuth(j).sin_cos();
        Vec3::new(-sp, cp, 0.0) * (self.radius * self.theta.sin())
    }
}

/// Trapezoid rule for `\oint A . dl`.
pub fn loop_circulation(cfg: &MonopoleConfig, lp: &Loop) -> Result<f64> {
    let terms = (0..lp.samples)
        .map(|j| vector_potential(cfg, &lp.point(j)).map(|a| a.dot(&lp.tangent(j))))
        .collect::<Result<Vec<_>>>()?;
    let dphi = 2.0 * PI / lp.samples as f64;
    Ok(pairwise_sum_by(terms.len(), |j| terms[j]) * dphi)
}

/// `2 pi g (1 - cos theta)`: North-patch circulation around a colatitude circle.
pub fn circulation_closed_form(g: f64, theta: f64) -> f64 {
    2.0 * PI * g * (1.0 - theta.cos())
}

/// Flux of `B` through the polar cap `colatitude < theta` of the sphere of
/// radius `r`: Gauss-Legendre in `cos` on `[cos theta, 1]` times a uniform
/// azimuth rule.
pub fn cap_flux(cfg: &MonopoleConfig, r: f64, theta: f64, n_theta: usize, n_phi: usize) -> Result<f64> {
    if n_theta == 0 || n_phi == 0 {
        return Err(Error::InvalidMesh(format!("cap mesh needs >= 1 node per axis, got ({n_theta}, {n_phi})")));
    }
    let (xs, ws) = gauss_legendre(n_theta);
    let lo = theta.cos();
    let half = 0.5 * (1.0 - lo);
    let dphi = 2.0 * PI / n_phi as f64;
    let terms = (0..n_theta * n_phi)
        .map(|k| {
            let (i, j) = (k / n_phi, k % n_phi);
            let c = lo + half * (xs[i] + 1.0);
            let x = sphere_point(r, c.clamp(-1.0, 1.0).acos(), dphi * j as f64);
            let b = b_field(cfg, &x)?;
            Ok(ws[i] * half * dphi * r * r * b.dot(&(x / r)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(pairwise_sum_by(terms.len(), |k| terms[k]))
}

/// Quadrature of `B . n` over the sphere of radius `r`.
pub fn sphere_flux(cfg: &MonopoleConfig, mesh: &SphereMesh, r: f64) -> Result<f64> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidRadius(format!("sphere radius must be positive, got {r}")));
    }
    let values = mesh
        .nodes()
        .iter()
        .zip(mesh.weights())
        .map(|(node, w)| {
            let n = node.direction();
            b_field(cfg, &(n * r)).map(|b| w * r * r * b.dot(&n))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(par_pairwise_sum_by(values.len(), |k| values[k]))
}

/// Total flux `4 pi g` leaving any sphere around the monopole.
pub fn total_flux(cfg: &MonopoleConfig) -> f64 {
    4.0 * PI * cfg.g
}

/// `exp(-i e Phi / hbar_c)` with `Phi = 4 pi g`.
pub fn single_valuedness_phase(cfg: &MonopoleConfig) -> Complex64 {
    Complex64::from_polar(1.0, -cfg.e * total_flux(cfg) / cfg.hbar_c)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantizationIndex {
    pub n: f64,
    pub is_quantized: bool,
}

/// Dirac index `n = 2 e g / hbar_c`.
pub fn quantization_index(cfg: &MonopoleConfig) -> QuantizationIndex {
    quantization_index_with_tol(cfg, QUANTIZED_TOL)
}

pub fn quantization_index_with_tol(cfg: &MonopoleConfig, tol: f64) -> QuantizationIndex {
    let n = 2.0 * cfg.e * cfg.g / cfg.hbar_c;
    QuantizationIndex { n, is_quantized: (n - n.round()).abs() < tol }
}

/// `Q = hbar_c n / (2 e^2)`.
pub fn quantized_topological_charge(n: i64, e: f64, hbar_c: f64) -> Result<f64> {
    if e == 0.0 {
        return Err(Error::InvalidCharge);
    }
    Ok(hbar_c * n as f64 / (2.0 * e * e))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonopoleReport {
    pub g: f64,
    pub e: f64,
    pub hbar_c: f64,
    pub flux: f64,
    pub circulation_table: Vec<(f64, f64)>,
    pub n: f64,
    pub is_quantized: bool,
    /// `g / e`
    #[serde(rename = "Q")]
    pub q: f64,
}

pub fn monopole_report(
    cfg: &MonopoleConfig,
    mesh: &SphereMesh,
    radius: f64,
    thetas: &[f64],
    samples: usize,
) -> Result<MonopoleReport> {
    let flux = sphere_flux(cfg, mesh, radius)?;
    let circulation_table = thetas
        .iter()
        .map(|&theta| {
            let lp = Loop::new(radius, theta, samples)?;
            Ok((theta, loop_circulation(cfg, &lp)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let index = quantization_index(cfg);
    Ok(MonopoleReport {
        g: cfg.g,
        e: cfg.e,
        hbar_c: cfg.hbar_c,
        flux,
        circulation_table,
        n: index.n,
        is_quantized: index.is_quantized,
        q: cfg.g / cfg.e,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::sphere_mesh;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cfg(g: f64) -> MonopoleConfig {
        MonopoleConfig::new(g, 1.0, 1.0).unwrap()
    }

    fn curl(c: &MonopoleConfig, x: &Vec3, h: f64) -> Vec3 {
        let d = |axis: usize| {
            let mut s = Vec3::zeros();
            s[axis] = h;
            (vector_potential(c, &(x + s)).unwrap() - vector_potential(c, &(x - s)).unwrap()) / (2.0 * h)
        };
        let (dx, dy, dz) = (d(0), d(1), d(2));
        Vec3::new(dy.z - dz.y, dz.x - dx.z, dx.y - dy.x)
    }

    #[test]
    fn config_validation() {
        assert_eq!(MonopoleConfig::new(1.0, 0.0, 1.0), Err(Error::InvalidCharge));
        assert!(MonopoleConfig::new(1.0, 1.0, 0.0).is_err());
        assert!(cfg(1.0).with_string_axis(Vec3::zeros()).is_err());
        let c = cfg(1.0).with_string_axis(Vec3::new(0.0, 3.0, 4.0)).unwrap();
        assert_abs_diff_eq!(c.string_axis().norm(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn equatorial_potential() {
        let a = vector_potential(&cfg(1.0), &Vec3::new(1.0, 0.0, 0.0)).unwrap();
        assert_abs_diff_eq!(a, Vec3::new(0.0, 1.0, 0.0), epsilon = 1e-15);
        let s = vector_potential(&cfg(1.0).with_patch(Patch::South), &Vec3::x()).unwrap();
        assert_abs_diff_eq!(s, Vec3::new(0.0, -1.0, 0.0), epsilon = 1e-15);
    }

    #[test]
    fn potential_regular_opposite_the_string() {
        for theta in [1e-3, 1e-6, 0.0] {
            let a = vector_potential(&cfg(1.0), &sphere_point(1.0, theta, 0.4)).unwrap();
            assert_abs_diff_eq!(a.norm(), (theta / 2.0).tan(), epsilon = 1e-15);
        }
    }

    #[test]
    fn potential_refuses_string_and_origin() {
        let c = cfg(1.0);
        assert!(matches!(vector_potential(&c, &Vec3::new(0.0, 0.0, -2.0)), Err(Error::StringSingularity { .. })));
        assert!(matches!(
            vector_potential(&c.clone().with_patch(Patch::South), &Vec3::new(0.0, 0.0, 2.0)),
            Err(Error::StringSingularity { .. })
        ));
        assert!(vector_potential(&c.clone().with_patch(Patch::South), &Vec3::new(0.0, 0.0, -2.0)).is_ok());
        assert!(matches!(vector_potential(&c, &Vec3::zeros()), Err(Error::OriginSingularity { .. })));
    }

    #[test]
    fn curl_reproduces_radial_field() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xD1AC);
        for patch in [Patch::North, Patch::South] {
            let c = cfg(1.0).with_patch(patch);
            let mut checked = 0;
            while checked < 100 {
                let x = Vec3::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
                // the potential of a string behaves like 2g/rho, so the
                // stencil error grows like h^2 / rho^4 near it
                let rho = x.x.hypot(x.y);
                if x.norm() < 0.5 || rho < 0.5 {
                    continue;
                }
                let got = curl(&c, &x, 1e-4);
                let want = b_field(&c, &x).unwrap();
                assert!((got - want).abs().max() < 1e-6, "{patch:?} at {x:?}: {got:?} vs {want:?}");
                checked += 1;
            }
        }
    }

    #[test]
    fn curl_with_tilted_string() {
        let c = cfg(0.7).with_string_axis(Vec3::new(1.0, 1.0, 0.0)).unwrap();
        let x = Vec3::new(0.3, -0.8, 0.9);
        assert!((curl(&c, &x, 1e-4) - b_field(&c, &x).unwrap()).abs().max() < 1e-6);
        assert!(matches!(
            vector_potential(&c, &Vec3::new(2.0, 2.0, 0.0)),
            Err(Error::StringSingularity { .. })
        ));
    }

    #[test]
    fn b_field_values() {
        assert_abs_diff_eq!(b_field(&cfg(1.0), &Vec3::new(0.0, 0.0, 2.0)).unwrap(), Vec3::new(0.0, 0.0, 0.25));
        assert_eq!(b_field(&cfg(0.0), &Vec3::new(1.0, 2.0, 3.0)).unwrap(), Vec3::zeros());
        assert_abs_diff_eq!(b_field(&cfg(1.0), &Vec3::new(2.0, 0.0, 0.0)).unwrap().norm(), 0.25);
        assert!(matches!(b_field(&cfg(1.0), &Vec3::zeros()), Err(Error::OriginSingularity { .. })));
    }

    #[test]
    fn circulation_closed_forms() {
        let c = cfg(1.0);
        let eq = loop_circulation(&c, &Loop::new(1.0, PI / 2.0, 256).unwrap()).unwrap();
        assert_abs_diff_eq!(eq, 2.0 * PI, epsilon = 1e-8);
        let tilt = loop_circulation(&c, &Loop::new(1.0, 2.0 * PI / 3.0, 256).unwrap()).unwrap();
        assert_abs_diff_eq!(tilt, 3.0 * PI, epsilon = 1e-8);
        let tiny = loop_circulation(&c, &Loop::new(1.0, 1e-6, 256).unwrap()).unwrap();
        assert!(tiny.abs() < 1e-10);
        assert_eq!(loop_circulation(&c, &Loop::new(1.0, 0.0, 256).unwrap()).unwrap(), 0.0);
        assert!(matches!(
            loop_circulation(&c, &Loop::new(1.0, PI, 16).unwrap()),
            Err(Error::StringSingularity { .. })
        ));
    }

    #[test]
    fn stokes_and_patch_difference() {
        for g in [1.0, -0.3, 2.5] {
            let north = cfg(g);
            let south = cfg(g).with_patch(Patch::South);
            for theta in [PI / 6.0, PI / 4.0, PI / 2.0, 3.0 * PI / 4.0] {
                let lp = Loop::new(1.3, theta, 256).unwrap();
                let circ = loop_circulation(&north, &lp).unwrap();
                let cap = cap_flux(&north, 1.3, theta, 32, 64).unwrap();
                assert_abs_diff_eq!(circ, cap, epsilon = 1e-7);
                let diff = circ - loop_circulation(&south, &lp).unwrap();
                assert_abs_diff_eq!(diff, 4.0 * PI * g, epsilon = 1e-7);
            }
        }
    }

    #[test]
    fn sphere_flux_values() {
        let mesh = sphere_mesh(16, 32).unwrap();
        assert_abs_diff_eq!(sphere_flux(&cfg(1.0), &mesh, 1.0).unwrap(), 12.566370614359172, epsilon = 1e-8);
        assert_eq!(sphere_flux(&cfg(0.0), &mesh, 1.0).unwrap(), 0.0);
        assert_abs_diff_eq!(sphere_flux(&cfg(0.5), &mesh, 1.0).unwrap(), 2.0 * PI, epsilon = 1e-8);
        let f1 = sphere_flux(&cfg(1.0), &mesh, 1.0).unwrap();
        for r in [0.5, 10.0] {
            assert_abs_diff_eq!(sphere_flux(&cfg(1.0), &mesh, r).unwrap(), f1, epsilon = 1e-9);
        }
        assert!(sphere_flux(&cfg(1.0), &mesh, 0.0).is_err());
    }

    #[test]
    fn phase_values() {
        let one = single_valuedness_phase(&MonopoleConfig::new(0.5, 1.0, 1.0).unwrap());
        assert!((one - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        let minus = single_valuedness_phase(&MonopoleConfig::new(0.25, 1.0, 1.0).unwrap());
        assert!((minus - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
        assert_eq!(single_valuedness_phase(&cfg(0.0)), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn phase_on_and_off_lattice() {
        for (e, hbar_c) in [(1.0, 1.0), (0.3, 2.0), (-1.5, 0.7)] {
            for k in -8i32..=8 {
                let g = f64::from(k) * hbar_c / (2.0 * e);
                let on = single_valuedness_phase(&MonopoleConfig::new(g, e, hbar_c).unwrap());
                assert!((on - 1.0).norm() < 1e-12, "k={k} e={e}");
                let mid = (f64::from(k) + 0.5) * hbar_c / (2.0 * e);
                let off = single_valuedness_phase(&MonopoleConfig::new(mid, e, hbar_c).unwrap());
                assert!((off - 1.0).norm() > 0.1);
            }
        }
    }

    #[test]
    fn quantization_index_values() {
        let q = |g| quantization_index(&cfg(g));
        assert_eq!(q(0.5), QuantizationIndex { n: 1.0, is_quantized: true });
        let off = q(0.7);
        assert_abs_diff_eq!(off.n, 1.4, epsilon = 1e-15);
        assert!(!off.is_quantized);
        assert_eq!(q(1.0), QuantizationIndex { n: 2.0, is_quantized: true });
    }

    #[test]
    fn quantized_charge_values() {
        assert_eq!(quantized_topological_charge(1, 1.0, 1.0).unwrap(), 0.5);
        assert_eq!(quantized_topological_charge(0, 1.0, 1.0).unwrap(), 0.0);
        assert_eq!(quantized_topological_charge(3, 2.0, 1.0).unwrap(), 0.375);
        assert_eq!(quantized_topological_charge(1, 0.0, 1.0), Err(Error::InvalidCharge));
    }

    #[test]
    fn report_json_shape() {
        let mesh = sphere_mesh(8, 16).unwrap();
        let r = monopole_report(&cfg(0.5), &mesh, 1.0, &[PI / 2.0], 64).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        for key in ["g", "e", "hbar_c", "flux", "circulation_table", "n", "is_quantized", "Q"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        assert_eq!(v["circulation_table"][0].as_array().unwrap().len(), 2);
        assert_abs_diff_eq!(r.q, 0.5);
    }

    proptest! {
        #[test]
        fn index_scale_invariant(g in -5.0f64..5.0, e in 0.1f64..3.0, hbar_c in 0.1f64..3.0, lambda in 0.01f64..100.0) {
            let a = quantization_index(&MonopoleConfig::new(g, e, hbar_c).unwrap());
            let b = quantization_index(&MonopoleConfig::new(lambda * g, e, lambda * hbar_c).unwrap());
            prop_assert!((a.n - b.n).abs() <= 1e-12 * (1.0 + a.n.abs()));
        }
    }
}
