//! First-Born probe of phase constancy around a loop enclosing the string.
//!
//! The squared Dirac equation carries the extra term
//! `f = Sigma.B - i e rho1 (Sigma.E)` on top of the Klein-Gordon operator.
//! Treating `-f Psi` as a source, the incident wave
//! `psi0(x) = chi exp(i (P - eA).x)` is corrected by one application of the
//! outgoing Helmholtz kernel:
//!
//! ```text
//! Psi1(x) = psi0(x) - sum_cells G(x, x') f(x') psi0(x') dV
//! ```
//!
//! The cell sum runs over the midpoints of a cubic grid with the ball
//! `|x'| < r_cut` and the tube of radius `rho_cut` around the active string
//! removed. On the evaluation loop the ratio `D = chi^dag Psi / exp(i (P - eA).x)`
//! is constant for the bare wave; its spread is the metric reported here.
//!
//! The monopole is static, so `E = 0` and `f = Sigma.B` in every shipped run.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diracalg::{gamma_basis, spin_matrix, Mat4c, Representation, Spinor};
use crate::error::{Error, Result};
use crate::geometry::{Grid3, Vec3};
use crate::monopole::{b_field, vector_potential, Loop, MonopoleConfig};
use crate::reduce::pairwise_sum_by;

/// Fewest loop samples the metric accepts.
pub const MIN_SAMPLES: usize = 8;

/// `|D|` below which a loop sample is considered degenerate.
pub const DEGENERATE_TOL: f64 = 1e-12;

/// Fermion/boson metric factor required to flag non-quantization.
pub const FLAG_FACTOR: f64 = 100.0;

/// `Sigma . v` with `Sigma_i = diag(sigma_i, sigma_i)`.
pub fn sigma_dot(v: &Vec3) -> Mat4c {
    (0..3).fold(Mat4c::zeros(), |acc, i| acc + spin_matrix(i) * Complex64::from(v[i]))
}

/// `-i e rho1 (Sigma . E)`.
pub fn electric_part(e: f64, electric: &Vec3) -> Mat4c {
    let rho1 = gamma_basis(Representation::Dirac).rho1;
    rho1 * sigma_dot(electric) * Complex64::new(0.0, -e)
}

/// Anything that can play the role of `f(x)` in the Born sum.
pub trait Source: Sync {
    fn at(&self, x: &Vec3) -> Result<Mat4c>;
}

/// `lambda (Sigma.B - i e rho1 Sigma.E)` for the static monopole.
#[derive(Debug, Clone, PartialEq)]
pub struct SourceTerm {
    monopole: MonopoleConfig,
    scale: f64,
}

impl SourceTerm {
    pub fn new(monopole: MonopoleConfig) -> Self {
        Self { monopole, scale: 1.0 }
    }

    pub fn scaled(mut self, lambda: f64) -> Self {
        self.scale *= lambda;
        self
    }

    /// Electric field of the static monopole.
    pub fn electric_field(&self, _x: &Vec3) -> Vec3 {
        Vec3::zeros()
    }
}

impl Source for SourceTerm {
    fn at(&self, x: &Vec3) -> Result<Mat4c> {
        let b = b_field(&self.monopole, x)?;
        let el = self.electric_field(x);
        let mut f = sigma_dot(&b);
        if el != Vec3::zeros() {
            f += electric_part(self.monopole.e, &el);
        }
        Ok(f * Complex64::from(self.scale))
    }
}

/// The boson branch: no extra term.
#[derive(Debug, Clone, Copy, Default)]
pub struct NoSource;

impl Source for NoSource {
    fn at(&self, _x: &Vec3) -> Result<Mat4c> {
        Ok(Mat4c::zeros())
    }
}

/// Outgoing free kernel `-exp(i k R) / (4 pi R)`, `R = |x - x'|`.
pub fn greens_kernel(k: f64, x: &Vec3, x_src: &Vec3) -> Result<Complex64> {
    let dist = (x - x_src).norm();
    if dist < 1e-12 {
        return Err(Error::CoincidentPoints);
    }
    Ok(-Complex64::from_polar(1.0, k * dist) / (4.0 * PI * dist))
}

/// Plane wave `chi exp(i P . x)` with unit spinor `chi`.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneWave {
    pub momentum: Vec3,
    pub spinor: Spinor,
}

impl PlaneWave {
    pub fn new(direction: Vec3, k: f64, spinor: Spinor) -> Result<Self> {
        let dn = direction.norm();
        let sn = spinor.norm();
        if !(dn > 0.0) || !(sn > 0.0) {
            return Err(Error::InvalidProbe("plane wave needs a nonzero direction and spinor".into()));
        }
        Ok(Self { momentum: direction * (k / dn), spinor: spinor / Complex64::from(sn) })
    }
}

/// Probe geometry and physics.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeConfig {
    pub monopole: MonopoleConfig,
    pub k: f64,
    pub grid: Grid3,
    pub r_cut: f64,
    pub rho_cut: f64,
    pub probe_loop: Loop,
    pub direction: Vec3,
    pub polarization: Spinor,
}

impl ProbeConfig {
    /// `k = 1`, incidence along +z with spin along +x, a 16^3 grid over
    /// `[-2, 2]^3`, cutoffs 0.5 and 0.2, and a 64-point equatorial loop of
    /// radius 3.
    pub fn new(monopole: MonopoleConfig) -> Result<Self> {
        let s = Complex64::from(std::f64::consts::FRAC_1_SQRT_2);
        let cfg = Self {
            monopole,
            k: 1.0,
            grid: Grid3::centered_cube(2.0, 16)?,
            r_cut: 0.5,
            rho_cut: 0.2,
            probe_loop: Loop::new(3.0, PI / 2.0, 64)?,
            direction: Vec3::z(),
            polarization: Spinor::new(s, s, Complex64::from(0.0), Complex64::from(0.0)),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_cells(mut self, half_width: f64, cells: usize) -> Result<Self> {
        self.grid = Grid3::centered_cube(half_width, cells)?;
        self.validate()?;
        Ok(self)
    }

    pub fn with_cutoffs(mut self, r_cut: f64, rho_cut: f64) -> Result<Self> {
        self.r_cut = r_cut;
        self.rho_cut = rho_cut;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.r_cut > 0.0) || !(self.rho_cut > 0.0) {
            return Err(Error::InvalidProbe(format!(
                "cutoffs must be positive, got r_cut={} rho_cut={}",
                self.r_cut, self.rho_cut
            )));
        }
        if !(self.k > 0.0 && self.k.is_finite()) {
            return Err(Error::InvalidProbe(format!("wavenumber must be positive, got {}", self.k)));
        }
        if self.probe_loop.samples < MIN_SAMPLES {
            return Err(Error::TooFewSamples { min: MIN_SAMPLES, got: self.probe_loop.samples });
        }
        for j in 0..self.probe_loop.samples {
            let p = self.probe_loop.point(j);
            if self.grid.covers(&p) {
                return Err(Error::GeometryOverlap { at: p.into() });
            }
        }
        Ok(())
    }

    pub fn incident(&self) -> Result<PlaneWave> {
        PlaneWave::new(self.direction, self.k, self.polarization)
    }

    fn excluded(&self, x: &Vec3) -> bool {
        if x.norm() < self.r_cut {
            return true;
        }
        let s = self.monopole.active_string();
        let along = x.dot(&s);
        along > 0.0 && (x - s * along).norm() < self.rho_cut
    }

    /// Midpoints of the grid cells that take part in the Born sum.
    pub fn source_cells(&self) -> Vec<Vec3> {
        (0..self.grid.len())
            .map(|c| self.grid.node_flat(c))
            .filter(|x| !self.excluded(x))
            .collect()
    }

    /// `exp(i (P - eA(x)) . x)`.
    fn reference_phase(&self, wave: &PlaneWave, x: &Vec3) -> Result<Complex64> {
        let a = vector_potential(&self.monopole, x)?;
        Ok(Complex64::from_polar(1.0, (wave.momentum - a * self.monopole.e).dot(x)))
    }
}

/// `f(x)` at a point, using the configured monopole.
pub fn source_term(cfg: &ProbeConfig, x: &Vec3) -> Result<Mat4c> {
    SourceTerm::new(cfg.monopole.clone()).at(x)
}

/// Wave function on the loop together with the reference phase it is
/// compared against.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveSample {
    pub points: Vec<Vec3>,
    pub psi: Vec<Spinor>,
    pub reference: Vec<Complex64>,
    pub polarization: Spinor,
}

impl WaveSample {
    /// `D_j = chi^dag Psi(x_j) / reference_j`.
    pub fn ratios(&self) -> Vec<Complex64> {
        self.psi
            .iter()
            .zip(&self.reference)
            .map(|(psi, r)| self.polarization.dotc(psi) / r)
            .collect()
    }
}

/// First Born iterate with the monopole source `Sigma.B`.
pub fn born_correction(cfg: &ProbeConfig, psi0: &PlaneWave) -> Result<WaveSample> {
    born_correction_with(cfg, &SourceTerm::new(cfg.monopole.clone()), psi0)
}

/// First Born iterate with an arbitrary source `f`.
pub fn born_correction_with<S: Source>(cfg: &ProbeConfig, source: &S, psi0: &PlaneWave) -> Result<WaveSample> {
    cfg.validate()?;
    let cells = cfg.source_cells();
    let dv = Complex64::from(cfg.grid.cell_volume());
    let weighted: Vec<Spinor> = cells
        .par_iter()
        .map(|x| {
            let f = source.at(x)?;
            let incident = psi0.spinor * cfg.reference_phase(psi0, x)?;
            Ok(f * incident * dv)
        })
        .collect::<Result<_>>()?;

    let lp = &cfg.probe_loop;
    let points: Vec<Vec3> = (0..lp.samples).map(|j| lp.point(j)).collect();
    let evaluated: Vec<(Spinor, Complex64)> = points
        .par_iter()
        .map(|x| {
            let kernels = cells
                .iter()
                .map(|c| greens_kernel(cfg.k, x, c))
                .collect::<Result<Vec<_>>>()?;
            let correction = pairwise_sum_by(cells.len(), |c| weighted[c] * kernels[c]);
            let phase = cfg.reference_phase(psi0, x)?;
            Ok((psi0.spinor * phase - correction, phase))
        })
        .collect::<Result<_>>()?;
    let (psi, reference) = evaluated.into_iter().unzip();
    Ok(WaveSample { points, psi, reference, polarization: psi0.spinor })
}

/// Relative spread of `|D|` plus the RMS angular deviation of `arg D` about
/// its circular mean. Zero exactly when `D` is constant around the loop.
pub fn phase_constancy_metric(sample: &WaveSample) -> Result<f64> {
    let d = sample.ratios();
    if d.len() < MIN_SAMPLES {
        return Err(Error::TooFewSamples { min: MIN_SAMPLES, got: d.len() });
    }
    if let Some((index, z)) = d.iter().enumerate().find(|(_, z)| z.norm() < DEGENERATE_TOL) {
        return Err(Error::DegenerateSample { index, magnitude: z.norm() });
    }
    let n = d.len() as f64;
    let mags: Vec<f64> = d.iter().map(|z| z.norm()).collect();
    let mean = pairwise_sum_by(mags.len(), |j| mags[j]) / n;
    let var = pairwise_sum_by(mags.len(), |j| (mags[j] - mean).powi(2)) / n;

    let units: Vec<Complex64> = d.iter().map(|z| z / z.norm()).collect();
    let centre = pairwise_sum_by(units.len(), |j| units[j]);
    let centre = if centre.norm() > 0.0 { centre / centre.norm() } else { Complex64::from(1.0) };
    let ang = pairwise_sum_by(units.len(), |j| (units[j] * centre.conj()).arg().powi(2)) / n;

    Ok(var.sqrt() / mean + ang.sqrt())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub boson_metric: f64,
    pub fermion_metric: f64,
    /// `fermion / boson`; `None` when the boson metric is exactly zero.
    pub ratio: Option<f64>,
    pub grid: [usize; 3],
    pub r_cut: f64,
    pub rho_cut: f64,
    pub k: f64,
    pub g: f64,
    pub e: f64,
    pub flag_not_quantized: bool,
}

/// Metric of the bare wave and of its Born-corrected counterpart on the same
/// geometry, plus the raw fermion `D_j` values.
pub fn boson_fermion_comparison(cfg: &ProbeConfig) -> Result<(ComparisonReport, Vec<Complex64>)> {
    compare_with(cfg, &SourceTerm::new(cfg.monopole.clone()))
}

pub fn compare_with<S: Source>(cfg: &ProbeConfig, source: &S) -> Result<(ComparisonReport, Vec<Complex64>)> {
    let wave = cfg.incident()?;
    let boson = born_correction_with(cfg, &NoSource, &wave)?;
    let fermion = born_correction_with(cfg, source, &wave)?;
    let boson_metric = phase_constancy_metric(&boson)?;
    let fermion_metric = phase_constancy_metric(&fermion)?;
    let ratio = (boson_metric > 0.0).then(|| fermion_metric / boson_metric);
    Ok((
        ComparisonReport {
            boson_metric,
            fermion_metric,
            ratio,
            grid: cfg.grid.dims(),
            r_cut: cfg.r_cut,
            rho_cut: cfg.rho_cut,
            k: cfg.k,
            g: cfg.monopole.g,
            e: cfg.monopole.e,
            flag_not_quantized: fermion_metric > FLAG_FACTOR * boson_metric,
        },
        fermion.ratios(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn monopole(g: f64) -> MonopoleConfig {
        MonopoleConfig::new(g, 1.0, 1.0).unwrap()
    }

    fn probe(g: f64) -> ProbeConfig {
        ProbeConfig::new(monopole(g)).unwrap()
    }

    fn max_abs(m: &Mat4c) -> f64 {
        m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn source_spectrum_along_z() {
        let cfg = probe(1.0);
        let f = source_term(&cfg, &Vec3::new(0.0, 0.0, 2.0)).unwrap();
        let eig = f.symmetric_eigen().eigenvalues;
        let mut vals: Vec<f64> = eig.iter().copied().collect();
        vals.sort_by(f64::total_cmp);
        for (v, want) in vals.iter().zip([-0.25, -0.25, 0.25, 0.25]) {
            assert_abs_diff_eq!(*v, want, epsilon = 1e-14);
        }
    }

    #[test]
    fn source_spectrum_general_direction() {
        let cfg = probe(1.0);
        let x = Vec3::new(1.2, -0.9, 1.3);
        let f = source_term(&cfg, &x).unwrap();
        let b = 1.0 / x.norm_squared();
        let mut vals: Vec<f64> = f.symmetric_eigen().eigenvalues.iter().copied().collect();
        vals.sort_by(f64::total_cmp);
        for (v, want) in vals.iter().zip([-b, -b, b, b]) {
            assert_abs_diff_eq!(*v, want, epsilon = 1e-13);
        }
        assert!(max_abs(&(f * f - Mat4c::identity() * Complex64::from(b * b))) < 1e-15);
    }

    #[test]
    fn source_zero_and_origin() {
        assert_eq!(source_term(&probe(0.0), &Vec3::x()).unwrap(), Mat4c::zeros());
        assert!(matches!(source_term(&probe(1.0), &Vec3::zeros()), Err(Error::OriginSingularity { .. })));
    }

    #[test]
    fn source_is_hermitian() {
        let cfg = probe(0.5);
        let mut rng = ChaCha8Rng::seed_from_u64(0xD1AC);
        for _ in 0..1000 {
            let x = Vec3::new(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
            let f = source_term(&cfg, &x).unwrap();
            assert!(max_abs(&(f - f.adjoint())) < 1e-14);
        }
    }

    #[test]
    fn electric_part_is_anti_hermitian() {
        let m = electric_part(0.7, &Vec3::new(0.3, -1.0, 2.0));
        assert!(max_abs(&(m + m.adjoint())) < 1e-15);
    }

    #[test]
    fn kernel_values() {
        let x = Vec3::zeros();
        let coulomb = greens_kernel(0.0, &x, &Vec3::x()).unwrap();
        assert!((coulomb - Complex64::from(-1.0 / (4.0 * PI))).norm() < 1e-16);
        let wrap = greens_kernel(PI, &x, &Vec3::new(0.0, 2.0, 0.0)).unwrap();
        assert!((wrap - Complex64::from(-1.0 / (8.0 * PI))).norm() < 1e-15);
        assert_eq!(greens_kernel(1.0, &x, &x), Err(Error::CoincidentPoints));
    }

    #[test]
    fn kernel_solves_helmholtz_away_from_source() {
        // (lap + k^2) G = 0 for x != x'; 7-point Laplacian check
        let k = 1.7;
        let src = Vec3::new(0.1, -0.2, 0.3);
        let x = Vec3::new(1.0, 0.5, -0.4);
        let h = 1e-3;
        let g = |p: Vec3| greens_kernel(k, &p, &src).unwrap();
        let mut lap = g(x) * -6.0;
        for ax in 0..3 {
            let mut s = Vec3::zeros();
            s[ax] = h;
            lap += g(x + s) + g(x - s);
        }
        lap /= h * h;
        assert!((lap + g(x) * k * k).norm() < 1e-5);
    }

    #[test]
    fn zero_source_leaves_wave_unchanged() {
        let cfg = probe(0.0);
        let wave = cfg.incident().unwrap();
        let s = born_correction(&cfg, &wave).unwrap();
        for (psi, r) in s.psi.iter().zip(&s.reference) {
            assert_eq!(*psi, wave.spinor * *r);
        }
    }

    struct OneCell {
        at: Vec3,
        f: Mat4c,
    }

    impl Source for OneCell {
        fn at(&self, x: &Vec3) -> Result<Mat4c> {
            Ok(if *x == self.at { self.f } else { Mat4c::zeros() })
        }
    }

    #[test]
    fn single_cell_source_closed_form() {
        let cfg = probe(0.5);
        let wave = cfg.incident().unwrap();
        let cell = cfg.source_cells()[137];
        let f = source_term(&cfg, &cell).unwrap();
        let s = born_correction_with(&cfg, &OneCell { at: cell, f }, &wave).unwrap();
        let dv = cfg.grid.cell_volume();
        let psi_cell = wave.spinor * Complex64::from_polar(1.0, wave.momentum.dot(&cell));
        for (x, psi) in s.points.iter().zip(&s.psi) {
            let psi0 = wave.spinor * Complex64::from_polar(1.0, wave.momentum.dot(x));
            let expect = psi0 - f * psi_cell * greens_kernel(cfg.k, x, &cell).unwrap() * Complex64::from(dv);
            assert!((psi - expect).norm() < 1e-14);
        }
    }

    #[test]
    fn correction_is_linear_in_source() {
        let cfg = probe(0.5);
        let wave = cfg.incident().unwrap();
        let base = born_correction(&cfg, &wave).unwrap();
        for lambda in [0.5, 2.0] {
            let src = SourceTerm::new(cfg.monopole.clone()).scaled(lambda);
            let s = born_correction_with(&cfg, &src, &wave).unwrap();
            for j in 0..s.psi.len() {
                let free = wave.spinor * base.reference[j];
                let c0 = base.psi[j] - free;
                let c1 = s.psi[j] - free;
                assert!((c1 - c0 * Complex64::from(lambda)).norm() <= 1e-12 * c0.norm().max(1e-300));
            }
        }
    }

    #[test]
    fn exclusions_remove_ball_and_tube() {
        let cfg = probe(0.5);
        let cells = cfg.source_cells();
        assert!(cells.len() < cfg.grid.len());
        assert!(cells.iter().all(|x| x.norm() >= 0.5));
        assert!(cells.iter().all(|x| !(x.z < 0.0 && x.x.hypot(x.y) < 0.2)));
        // the tube only follows the string, not the opposite ray
        assert!(cells.iter().any(|x| x.z > 1.0 && x.x.hypot(x.y) < 0.2));
    }

    #[test]
    fn overlapping_loop_rejected() {
        let mut cfg = probe(0.5);
        cfg.probe_loop = Loop::new(1.5, PI / 2.0, 32).unwrap();
        assert!(matches!(cfg.validate(), Err(Error::GeometryOverlap { .. })));
        let wave = PlaneWave::new(Vec3::z(), 1.0, Spinor::x()).unwrap();
        assert!(matches!(born_correction(&cfg, &wave), Err(Error::GeometryOverlap { .. })));
        assert!(probe(0.5).with_cutoffs(0.0, 0.2).is_err());
    }

    fn sample_from(d: &[Complex64]) -> WaveSample {
        WaveSample {
            points: vec![Vec3::zeros(); d.len()],
            psi: d.iter().map(|z| Spinor::new(*z, Complex64::from(0.0), Complex64::from(0.0), Complex64::from(0.0))).collect(),
            reference: vec![Complex64::from(1.0); d.len()],
            polarization: Spinor::x(),
        }
    }

    #[test]
    fn metric_edge_cases() {
        let constant = vec![Complex64::new(0.3, -0.4); 16];
        assert!(phase_constancy_metric(&sample_from(&constant)).unwrap() < 1e-15);
        assert!(matches!(
            phase_constancy_metric(&sample_from(&constant[..4])),
            Err(Error::TooFewSamples { .. })
        ));
        let mut degenerate = constant.clone();
        degenerate[5] = Complex64::from(0.0);
        assert!(matches!(
            phase_constancy_metric(&sample_from(&degenerate)),
            Err(Error::DegenerateSample { index: 5, .. })
        ));
    }

    #[test]
    fn metric_sees_modulus_and_phase() {
        // |D| alternating 1, 1.2: relative std = 0.1/1.1
        let mags: Vec<_> = (0..8).map(|j| Complex64::from(if j % 2 == 0 { 1.0 } else { 1.2 })).collect();
        assert_abs_diff_eq!(phase_constancy_metric(&sample_from(&mags)).unwrap(), 0.1 / 1.1, epsilon = 1e-14);
        // phases +-0.1 around a common direction; wraps across the branch cut
        let phases: Vec<_> = (0..8).map(|j| Complex64::from_polar(1.0, PI + if j % 2 == 0 { 0.1 } else { -0.1 })).collect();
        assert_abs_diff_eq!(phase_constancy_metric(&sample_from(&phases)).unwrap(), 0.1, epsilon = 1e-12);
    }

    #[test]
    fn boson_branch_is_constant() {
        for g in [0.5, 1.0, 1.5] {
            let cfg = probe(g);
            let s = born_correction_with(&cfg, &NoSource, &cfg.incident().unwrap()).unwrap();
            assert!(phase_constancy_metric(&s).unwrap() < 1e-12);
        }
    }

    #[test]
    fn comparison_default_config() {
        let (r, d) = boson_fermion_comparison(&probe(0.5)).unwrap();
        assert!(r.boson_metric < 1e-12);
        assert!(r.fermion_metric > 1e-3, "{r:?}");
        assert!(r.flag_not_quantized);
        assert_eq!(d.len(), 64);
        assert_eq!(r.grid, [16, 16, 16]);
    }

    #[test]
    fn comparison_without_field() {
        let (r, _) = boson_fermion_comparison(&probe(0.0)).unwrap();
        assert!(r.boson_metric < 1e-12 && r.fermion_metric < 1e-12);
        assert_eq!(r.boson_metric, r.fermion_metric);
        assert!(!r.flag_not_quantized);
    }

    #[test]
    fn doubling_source_moves_only_fermion_metric() {
        let cfg = probe(0.5);
        let (base, _) = boson_fermion_comparison(&cfg).unwrap();
        let (doubled, _) = compare_with(&cfg, &SourceTerm::new(cfg.monopole.clone()).scaled(2.0)).unwrap();
        assert_eq!(base.boson_metric, doubled.boson_metric);
        assert!((doubled.fermion_metric - base.fermion_metric).abs() > 1e-3);
    }

    #[test]
    fn report_json_shape() {
        let (r, _) = boson_fermion_comparison(&probe(0.5).with_cells(2.0, 8).unwrap()).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        for key in ["boson_metric", "fermion_metric", "ratio", "grid", "r_cut", "rho_cut", "k", "g", "e", "flag_not_quantized"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
    }
}
