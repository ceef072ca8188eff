//! Discretization plumbing shared by the charge, monopole and probe modules.
//!
//! Everything here is dimensionless. Positions are [`Vec3`]; a spherical
//! point is addressed by colatitude `theta` in `[0, pi]` measured from +z and
//! azimuth `phi` in `[0, 2pi)` measured from +x.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};

pub type Vec3 = Vector3<f64>;
pub type Mat3 = Matrix3<f64>;

/// Default central-difference step.
pub const DEFAULT_STEP: f64 = 1e-3;

/// Norm below which a field value counts as zero.
pub const ZERO_FIELD_TOL: f64 = 1e-12;

/// Uniform Cartesian grid. Node `(i, j, k)` sits at `origin + spacing * (i, j, k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid3 {
    origin: Vec3,
    spacing: f64,
    dims: [usize; 3],
}

impl Grid3 {
    pub fn new(origin: Vec3, spacing: f64, dims: [usize; 3]) -> Result<Self> {
        if !(spacing > 0.0 && spacing.is_finite()) {
            return Err(Error::InvalidGrid(format!("spacing must be positive, got {spacing}")));
        }
        if dims.contains(&0) {
            return Err(Error::InvalidGrid(format!("all dims must be >= 1, got {dims:?}")));
        }
        if !origin.iter().all(|c| c.is_finite()) {
            return Err(Error::InvalidGrid("origin must be finite".into()));
        }
        Ok(Self { origin, spacing, dims })
    }

    /// `cells^3` cubic cells tiling `[-half_width, half_width]^3`, one node at
    /// each cell midpoint.
    pub fn centered_cube(half_width: f64, cells: usize) -> Result<Self> {
        if !(half_width > 0.0) {
            return Err(Error::InvalidGrid(format!("half width must be positive, got {half_width}")));
        }
        if cells == 0 {
            return Err(Error::InvalidGrid("cell count must be >= 1".into()));
        }
        let h = 2.0 * half_width / cells as f64;
        let o = -half_width + 0.5 * h;
        Self::new(Vec3::new(o, o, o), h, [cells; 3])
    }

    pub fn origin(&self) -> Vec3 {
        self.origin
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn len(&self) -> usize {
        self.dims[0] * self.dims[1] * self.dims[2]
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing * self.spacing * self.spacing
    }

    pub fn node(&self, index: [usize; 3]) -> Vec3 {
        let h = self.spacing;
        Vec3::new(
            self.origin.x + h * index[0] as f64,
            self.origin.y + h * index[1] as f64,
            self.origin.z + h * index[2] as f64,
        )
    }

    /// Node by flat index, x fastest.
    pub fn node_flat(&self, flat: usize) -> Vec3 {
        let [nx, ny, _] = self.dims;
        self.node([flat % nx, (flat / nx) % ny, flat / (nx * ny)])
    }

    /// Whether `x` falls inside the union of cells (each node owns the cube of
    /// side `spacing` centred on it).
    pub fn covers(&self, x: &Vec3) -> bool {
        let half = 0.5 * self.spacing;
        (0..3).all(|ax| {
            let lo = self.origin[ax] - half;
            let hi = self.origin[ax] + self.spacing * (self.dims[ax] - 1) as f64 + half;
            x[ax] >= lo && x[ax] <= hi
        })
    }
}

/// One quadrature node on the unit sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereNode {
    pub theta: f64,
    pub phi: f64,
}

impl SphereNode {
    pub fn direction(&self) -> Vec3 {
        sphere_point(1.0, self.theta, self.phi)
    }
}

/// Gauss-Legendre nodes in `cos(theta)` crossed with a uniform periodic
/// trapezoid rule in `phi`. Weights are solid angles and sum to `4 pi`.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereMesh {
    n_theta: usize,
    n_phi: usize,
    nodes: Vec<SphereNode>,
    weights: Vec<f64>,
}

impl SphereMesh {
    pub fn size(&self) -> (usize, usize) {
        (self.n_theta, self.n_phi)
    }

    pub fn nodes(&self) -> &[SphereNode] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Smallest angular distance from any node to either pole.
    pub fn polar_clearance(&self) -> f64 {
        self.nodes
            .iter()
            .map(|n| n.theta.min(PI - n.theta))
            .fold(f64::INFINITY, f64::min)
    }

    /// `sum_k w_k f(node_k)` with a deterministic pairwise reduction.
    pub fn integrate<F>(&self, f: F) -> f64
    where
        F: Fn(&SphereNode) -> f64 + Sync,
    {
        crate::reduce::par_pairwise_sum_by(self.len(), |k| self.weights[k] * f(&self.nodes[k]))
    }

    /// Fallible variant of [`SphereMesh::integrate`]; the first error in node
    /// order wins.
    pub fn try_integrate<F>(&self, f: F) -> Result<f64>
    where
        F: Fn(&SphereNode) -> Result<f64> + Sync,
    {
        use rayon::prelude::*;
        let values: Vec<f64> = self
            .nodes
            .par_iter()
            .zip(self.weights.par_iter())
            .map(|(node, w)| f(node).map(|v| w * v))
            .collect::<Result<_>>()?;
        Ok(crate::reduce::par_pairwise_sum_by(values.len(), |k| values[k]))
    }
}

/// Builds the product mesh with `n_theta` Gauss nodes and `n_phi` azimuths.
pub fn sphere_mesh(n_theta: usize, n_phi: usize) -> Result<SphereMesh> {
    if n_theta == 0 || n_phi == 0 {
        return Err(Error::InvalidMesh(format!(
            "node counts must be >= 1, got ({n_theta}, {n_phi})"
        )));
    }
    let (xs, ws) = gauss_legendre(n_theta);
    let dphi = 2.0 * PI / n_phi as f64;
    let mut nodes = Vec::with_capacity(n_theta * n_phi);
    let mut weights = Vec::with_capacity(n_theta * n_phi);
    for (x, w) in xs.iter().zip(&ws) {
        let theta = x.clamp(-1.0, 1.0).acos();
        for j in 0..n_phi {
            nodes.push(SphereNode { theta, phi: dphi * j as f64 });
            weights.push(w * dphi);
        }
    }
    Ok(SphereMesh { n_theta, n_phi, nodes, weights })
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`, nodes descending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut xs = vec![0.0; n];
    let mut ws = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        xs[i] = x;
        ws[i] = w;
        xs[n - 1 - i] = -x;
        ws[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        xs[n / 2] = 0.0;
    }
    (xs, ws)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Cartesian point at radius `r`, colatitude `theta`, azimuth `phi`.
pub fn sphere_point(r: f64, theta: f64, phi: f64) -> Vec3 {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    Vec3::new(r * st * cp, r * st * sp, r * ct)
}

type Evaluator = dyn Fn(&Vec3) -> Result<Vec3> + Send + Sync;

/// A three-component field `x -> phi^a(x)`.
///
/// `unit` records that every value has norm one; [`hedgehog`] and
/// [`normalize`] set it.
#[derive(Clone)]
pub struct TripletField {
    eval: Arc<Evaluator>,
    unit: bool,
}

impl fmt::Debug for TripletField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TripletField").field("unit", &self.unit).finish_non_exhaustive()
    }
}

impl TripletField {
    pub fn from_fn<F>(f: F) -> Self
    where
        F: Fn(&Vec3) -> Result<Vec3> + Send + Sync + 'static,
    {
        Self { eval: Arc::new(f), unit: false }
    }

    /// Wraps an evaluator the caller guarantees to be unit-valued.
    pub fn unit_from_fn<F>(f: F) -> Self
    where
        F: Fn(&Vec3) -> Result<Vec3> + Send + Sync + 'static,
    {
        Self { eval: Arc::new(f), unit: true }
    }

    pub fn constant(value: Vec3) -> Self {
        let unit = (value.norm() - 1.0).abs() < 1e-12;
        Self { eval: Arc::new(move |_| Ok(value)), unit }
    }

    /// `phi^a = M_{ai} x_i`.
    pub fn linear(m: Mat3) -> Self {
        Self::from_fn(move |x| Ok(m * x))
    }

    pub fn eval(&self, x: &Vec3) -> Result<Vec3> {
        (self.eval)(x)
    }

    pub fn is_unit(&self) -> bool {
        self.unit
    }
}

/// Winding-`n` unit field `(sin t cos n p, sin t sin n p, cos t)` in the
/// spherical angles of the evaluation point. Singular only at the origin.
pub fn hedgehog(n: i32) -> TripletField {
    let n = f64::from(n);
    TripletField::unit_from_fn(move |x| {
        let rho = x.x.hypot(x.y);
        let r = rho.hypot(x.z);
        if r == 0.0 {
            return Err(Error::FieldSingularity { at: (*x).into() });
        }
        let theta = rho.atan2(x.z);
        let phi = x.y.atan2(x.x);
        Ok(sphere_point(1.0, theta, n * phi))
    })
}

/// Pointwise `phi / |phi|`.
pub fn normalize(field: TripletField) -> TripletField {
    if field.is_unit() {
        return field;
    }
    TripletField::unit_from_fn(move |x| {
        let v = field.eval(x)?;
        let norm = v.norm();
        if norm < ZERO_FIELD_TOL {
            return Err(Error::ZeroFieldPoint { at: (*x).into() });
        }
        Ok(v / norm)
    })
}

/// Second-order central-difference Jacobian with entry `(i, a) = d_i phi^a`.
pub fn jacobian(field: &TripletField, x: &Vec3, h: f64) -> Result<Mat3> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidStep(h));
    }
    let stencil = |p: Vec3| {
        field.eval(&p).map_err(|e| Error::StencilOutOfDomain {
            at: (*x).into(),
            source: Box::new(e),
        })
    };
    let mut jac = Mat3::zeros();
    for i in 0..3 {
        let mut step = Vec3::zeros();
        step[i] = h;
        let d = (stencil(x + step)? - stencil(x - step)?) / (2.0 * h);
        jac.set_row(i, &d.transpose());
    }
    Ok(jac)
}

/// Sign of the permutation `idx` of `0..idx.len()`, or 0 if an index repeats.
fn permutation_sign(idx: &[usize]) -> i32 {
    let mut sign = 1;
    for a in 0..idx.len() {
        for b in a + 1..idx.len() {
            if idx[a] == idx[b] {
                return 0;
            }
            if idx[a] > idx[b] {
                sign = -sign;
            }
        }
    }
    sign
}

/// Rank-3 Levi-Civita symbol over indices `0..3`, `epsilon(0, 1, 2) = +1`.
pub fn levi_civita3(i: usize, j: usize, k: usize) -> i32 {
    assert!(i < 3 && j < 3 && k < 3, "rank-3 index out of range");
    permutation_sign(&[i, j, k])
}

/// Rank-4 Levi-Civita symbol with upper indices, `epsilon^{0123} = +1`.
pub fn levi_civita4(mu: usize, nu: usize, rho: usize, sigma: usize) -> i32 {
    assert!(mu < 4 && nu < 4 && rho < 4 && sigma < 4, "rank-4 index out of range");
    permutation_sign(&[mu, nu, rho, sigma])
}
