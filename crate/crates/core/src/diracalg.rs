//! Gamma matrices and the momentum-space form of squaring the Dirac operator.
//!
//! On a plane wave `exp(-i p.x)` the derivative `i d_mu` becomes `p_mu`, so
//! applying `(i gamma.d + m)` to `(i gamma.d - m) Psi = 0` turns into the
//! matrix identity `(p/ - m)(p/ + m) = (p^2 - m^2) I`, with
//! `p/ = gamma^0 E - gamma^1 p_1 - gamma^2 p_2 - gamma^3 p_3`. That identity
//! holds for every `p` precisely because `{gamma^mu, gamma^nu} = 2 g^{mu nu}`,
//! and row by row it says each spinor component obeys Klein-Gordon.

use std::str::FromStr;

use nalgebra::{Matrix2, Matrix4, Vector4};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Mat4c = Matrix4<Complex64>;
pub type Spinor = Vector4<Complex64>;

/// Metric signature `diag(+1, -1, -1, -1)`.
pub const METRIC: [f64; 4] = [1.0, -1.0, -1.0, -1.0];

/// Residual bound used across the algebra checks.
pub const ALGEBRA_TOL: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Representation {
    Dirac,
}

impl FromStr for Representation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dirac" => Ok(Representation::Dirac),
            other => Err(Error::Unsupported(other.to_string())),
        }
    }
}

/// `sigma_1`, `sigma_2`, `sigma_3` for `i = 0, 1, 2`.
pub fn pauli(i: usize) -> Matrix2<Complex64> {
    match i {
        0 => Matrix2::new(ZERO, ONE, ONE, ZERO),
        1 => Matrix2::new(ZERO, -I, I, ZERO),
        2 => Matrix2::new(ONE, ZERO, ZERO, -ONE),
        _ => panic!("Pauli index {i} out of range"),
    }
}

fn blocks(a: &Matrix2<Complex64>, b: &Matrix2<Complex64>, c: &Matrix2<Complex64>, d: &Matrix2<Complex64>) -> Mat4c {
    let mut m = Mat4c::zeros();
    m.fixed_view_mut::<2, 2>(0, 0).copy_from(a);
    m.fixed_view_mut::<2, 2>(0, 2).copy_from(b);
    m.fixed_view_mut::<2, 2>(2, 0).copy_from(c);
    m.fixed_view_mut::<2, 2>(2, 2).copy_from(d);
    m
}

/// Block-diagonal spin matrix `Sigma_i = diag(sigma_i, sigma_i)`.
pub fn spin_matrix(i: usize) -> Mat4c {
    let s = pauli(i);
    let z = Matrix2::zeros();
    blocks(&s, &z, &z, &s)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GammaBasis {
    pub gamma: [Mat4c; 4],
    /// Off-diagonal block identity; commutes with every `Sigma_i`.
    pub rho1: Mat4c,
}

impl GammaBasis {
    /// `gamma^mu p_mu` with lower-index momentum built from `(E, p_1, p_2, p_3)`.
    pub fn slash(&self, p: &[f64; 4]) -> Mat4c {
        (0..4).fold(Mat4c::zeros(), |acc, mu| acc + self.gamma[mu] * Complex64::from(METRIC[mu] * p[mu]))
    }

    /// `S gamma^mu S^-1` for every `mu`.
    pub fn conjugated(&self, s: &Mat4c) -> Result<GammaBasis> {
        let inv = s
            .try_inverse()
            .ok_or_else(|| Error::Unsupported("singular similarity transform".into()))?;
        Ok(GammaBasis {
            gamma: self.gamma.map(|g| s * g * inv),
            rho1: s * self.rho1 * inv,
        })
    }
}

pub fn gamma_basis(representation: Representation) -> GammaBasis {
    match representation {
        Representation::Dirac => {
            let id = Matrix2::<Complex64>::identity();
            let z = Matrix2::zeros();
            let g0 = blocks(&id, &z, &z, &(-id));
            let spatial = [0, 1, 2].map(|i| {
                let s = pauli(i);
                blocks(&z, &s, &(-s), &z)
            });
            GammaBasis {
                gamma: [g0, spatial[0], spatial[1], spatial[2]],
                rho1: blocks(&z, &id, &id, &z),
            }
        }
    }
}

/// `gamma^mu gamma^nu + gamma^nu gamma^mu`.
pub fn anticommutator(basis: &GammaBasis, mu: usize, nu: usize) -> Result<Mat4c> {
    for idx in [mu, nu] {
        if idx > 3 {
            return Err(Error::InvalidIndex(idx));
        }
    }
    let (a, b) = (&basis.gamma[mu], &basis.gamma[nu]);
    Ok(a * b + b * a)
}

fn max_abs(m: &Mat4c) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest entry of `{gamma^mu, gamma^nu} - 2 g^{mu nu} I` over all 16 pairs.
pub fn anticommutation_residual(basis: &GammaBasis) -> f64 {
    let mut worst: f64 = 0.0;
    for mu in 0..4 {
        for nu in 0..4 {
            let metric = if mu == nu { 2.0 * METRIC[mu] } else { 0.0 };
            let ac = anticommutator(basis, mu, nu).expect("indices in range");
            worst = worst.max(max_abs(&(ac - Mat4c::identity() * Complex64::from(metric))));
        }
    }
    worst
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FourMomentum {
    /// `(E, p_1, p_2, p_3)`
    pub p: [f64; 4],
    pub m: f64,
}

impl FourMomentum {
    pub fn new(p: [f64; 4], m: f64) -> Self {
        Self { p, m }
    }

    /// `E^2 - |p|^2`
    pub fn invariant(&self) -> f64 {
        (0..4).map(|mu| METRIC[mu] * self.p[mu] * self.p[mu]).sum()
    }
}

fn kg_product(basis: &GammaBasis, pm: &FourMomentum) -> Mat4c {
    let slash = basis.slash(&pm.p);
    let m = Mat4c::identity() * Complex64::from(pm.m);
    (slash - m) * (slash + m)
}

/// `max |(p/ - m)(p/ + m) - (p^2 - m^2) I|`.
pub fn kg_factorization_residual(basis: &GammaBasis, pm: &FourMomentum) -> f64 {
    let target = Mat4c::identity() * Complex64::from(pm.invariant() - pm.m * pm.m);
    max_abs(&(kg_product(basis, pm) - target))
}

/// Applies `(p/ - m)(p/ + m)` to each unit spinor and checks it returns
/// `(p^2 - m^2)` times that spinor.
pub fn component_kg_check(basis: &GammaBasis, pm: &FourMomentum) -> [bool; 4] {
    let op = kg_product(basis, pm);
    let scale = Complex64::from(pm.invariant() - pm.m * pm.m);
    std::array::from_fn(|i| {
        let mut unit = Spinor::zeros();
        unit[i] = ONE;
        let out = op * unit;
        (out - unit * scale).iter().all(|z| z.norm() < ALGEBRA_TOL)
    })
}

/// `max |sum gamma^nu gamma^mu p_nu p_mu - sum 1/2 {gamma^nu, gamma^mu} p_nu p_mu|`.
pub fn symmetrization_check(basis: &GammaBasis, p: &[f64; 4]) -> f64 {
    let mut direct = Mat4c::zeros();
    let mut symmetric = Mat4c::zeros();
    for nu in 0..4 {
        for mu in 0..4 {
            let w = Complex64::from(p[nu] * p[mu]);
            direct += basis.gamma[nu] * basis.gamma[mu] * w;
            let ac = anticommutator(basis, nu, mu).expect("indices in range");
            symmetric += ac * (w * 0.5);
        }
    }
    max_abs(&(direct - symmetric))
}

/// Haar-distributed 4x4 unitary: QR of a complex Gaussian matrix with the
/// phases of `R`'s diagonal moved into `Q`.
pub fn random_unitary<R: Rng>(rng: &mut R) -> Mat4c {
    let z = Mat4c::from_fn(|_, _| {
        Complex64::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
    });
    let qr = z.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..4 {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { ONE };
        let mut col = q.column_mut(j);
        col *= phase;
    }
    q
}

/// Worst anticommutation residual over `samples` random unitary conjugates.
pub fn similarity_residual(basis: &GammaBasis, samples: usize, seed: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let s = random_unitary(&mut rng);
        worst = worst.max(anticommutation_residual(&basis.conjugated(&s)?));
    }
    Ok(worst)
}

pub fn random_momentum<R: Rng>(rng: &mut R, bound: f64) -> FourMomentum {
    let mut draw = || rng.random_range(-bound..=bound);
    FourMomentum::new([draw(), draw(), draw(), draw()], draw())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiracSuiteReport {
    pub anticommutation_pass: bool,
    pub factorization_max_residual: f64,
    pub component_pass: [bool; 4],
}

/// Exact anticommutation check plus `samples` random momenta with entries in
/// `[-bound, bound]`.
pub fn run_suite(basis: &GammaBasis, samples: usize, bound: f64, seed: u64) -> DiracSuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    let mut component_pass = [true; 4];
    for _ in 0..samples {
        let pm = random_momentum(&mut rng, bound);
        worst = worst.max(kg_factorization_residual(basis, &pm));
        for (acc, ok) in component_pass.iter_mut().zip(component_kg_check(basis, &pm)) {
            *acc &= ok;
        }
    }
    DiracSuiteReport {
        anticommutation_pass: anticommutation_residual(basis) == 0.0,
        factorization_max_residual: worst,
        component_pass,
    }
}
