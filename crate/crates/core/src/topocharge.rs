//! Charge integrals of unit triplet fields.
//!
//! The surface winding is the authoritative evaluator. For a unit field the
//! density `K0` vanishes identically away from singular points (the three
//! tangent vectors `d_i phi` all lie in the plane orthogonal to `phi`), so a
//! grid sum of `K0` over a volume converges to zero, not to the winding. The
//! volume form only appears here through [`shell_conservation_check`].

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{jacobian, levi_civita3, sphere_point, SphereMesh, TripletField, Vec3};

/// Angular step of the fourth-order stencil used for `d_theta`, `d_phi`.
pub const ANGULAR_STEP: f64 = 1e-3;

/// Residual above which the mesh is flagged as too coarse to resolve the degree.
pub const MESH_TOO_COARSE: f64 = 0.1;

/// Winding, magnetic charge and topological charge on one sphere.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChargeReport {
    pub winding: f64,
    pub magnetic_charge: f64,
    pub topological_charge: f64,
    pub nearest_integer: i64,
    pub winding_residual: f64,
    pub radius: f64,
    pub mesh: (usize, usize),
}

impl ChargeReport {
    pub fn mesh_too_coarse(&self) -> bool {
        self.winding_residual > MESH_TOO_COARSE
    }
}

/// `K0 = -(1/2e) eps^{ijk} eps_{abc} d_i phi^a d_j phi^b d_k phi^c` from the
/// central-difference Jacobian at `x`.
pub fn charge_density(field: &TripletField, e: f64, x: &Vec3, h: f64) -> Result<f64> {
    if e == 0.0 {
        return Err(Error::InvalidCharge);
    }
    let jac = jacobian(field, x, h)?;
    let mut acc = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                let eijk = levi_civita3(i, j, k);
                if eijk == 0 {
                    continue;
                }
                for a in 0..3 {
                    for b in 0..3 {
                        for c in 0..3 {
                            let eabc = levi_civita3(a, b, c);
                            if eabc == 0 {
                                continue;
                            }
                            acc += f64::from(eijk * eabc) * jac[(i, a)] * jac[(j, b)] * jac[(k, c)];
                        }
                    }
                }
            }
        }
    }
    Ok(-acc / (2.0 * e))
}

/// Field value plus `d_theta` and `d_phi` of `phi(r, theta, phi)` by the
/// five-point central stencil.
fn angular_frame(field: &TripletField, r: f64, theta: f64, phi: f64, step: f64) -> Result<(Vec3, Vec3, Vec3)> {
    let at = |t: f64, p: f64| field.eval(&sphere_point(r, t, p));
    let d = |fm2: Vec3, fm1: Vec3, fp1: Vec3, fp2: Vec3| (8.0 * (fp1 - fm1) - (fp2 - fm2)) / (12.0 * step);
    let center = at(theta, phi)?;
    let d_theta = d(
        at(theta - 2.0 * step, phi)?,
        at(theta - step, phi)?,
        at(theta + step, phi)?,
        at(theta + 2.0 * step, phi)?,
    );
    let d_phi = d(
        at(theta, phi - 2.0 * step)?,
        at(theta, phi - step)?,
        at(theta, phi + step)?,
        at(theta, phi + 2.0 * step)?,
    );
    Ok((center, d_theta, d_phi))
}

/// Degree of `field` restricted to the sphere of radius `r`:
/// `(1/4pi) \int phi . (d_theta phi x d_phi phi) dtheta dphi`.
pub fn winding_surface(field: &TripletField, r: f64, mesh: &SphereMesh) -> Result<f64> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidRadius(format!("sphere radius must be positive, got {r}")));
    }
    // The stencil crosses a pole if the step exceeds the node's polar distance.
    let step = ANGULAR_STEP.min(0.25 * mesh.polar_clearance());
    let total = mesh.try_integrate(|node| {
        let (v, dt, dp) = angular_frame(field, r, node.theta, node.phi, step)?;
        // mesh weights carry sin(theta); the integrand is per dtheta dphi
        Ok(v.dot(&dt.cross(&dp)) / node.theta.sin())
    })?;
    Ok(total / (4.0 * PI))
}

/// `M = W / e`.
pub fn magnetic_charge(field: &TripletField, e: f64, r: f64, mesh: &SphereMesh) -> Result<f64> {
    if e == 0.0 {
        return Err(Error::InvalidCharge);
    }
    Ok(winding_surface(field, r, mesh)? / e)
}

pub fn charge_report(field: &TripletField, e: f64, r: f64, mesh: &SphereMesh) -> Result<ChargeReport> {
    if e == 0.0 {
        return Err(Error::InvalidCharge);
    }
    let winding = winding_surface(field, r, mesh)?;
    let magnetic_charge = winding / e;
    let nearest = winding.round();
    Ok(ChargeReport {
        winding,
        magnetic_charge,
        topological_charge: magnetic_charge / e,
        nearest_integer: nearest as i64,
        winding_residual: (winding - nearest).abs(),
        radius: r,
        mesh: mesh.size(),
    })
}

/// `|W(r_out) - W(r_in)|`: the charge enclosed by the shell between the two
/// spheres, which is zero when the field is smooth there.
pub fn shell_conservation_check(field: &TripletField, r_in: f64, r_out: f64, mesh: &SphereMesh) -> Result<f64> {
    if !(r_in > 0.0 && r_in < r_out) {
        return Err(Error::InvalidRadius(format!(
            "shell needs 0 < r_in < r_out, got ({r_in}, {r_out})"
        )));
    }
    Ok((winding_surface(field, r_out, mesh)? - winding_surface(field, r_in, mesh)?).abs())
}

/// The two integer readings of one configuration: the winding itself, and
/// the Dirac index `2 e g / hbar_c` with the monopole strength `g` set to the
/// measured magnetic charge `M = W / e`. They differ by a factor of two.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexComparison {
    pub n_winding: f64,
    pub n_dirac: f64,
    pub discrepancy: bool,
}

pub fn index_comparison(report: &ChargeReport, e: f64, hbar_c: f64) -> IndexComparison {
    let n_dirac = 2.0 * e * report.magnetic_charge / hbar_c;
    IndexComparison {
        n_winding: report.winding,
        n_dirac,
        discrepancy: (n_dirac - report.winding).abs() > 1e-9,
    }
}
