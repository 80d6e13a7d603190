//! Monte Carlo sampler for the largest retained real eigenvalue of real
//! Ginibre matrices.
//!
//! Sample `i` of a run draws its matrix from ChaCha8 stream `2i` and its
//! thinning coins from stream `2i + 1`, both keyed by the run seed, so every
//! sample is reproducible on its own and runs do not depend on scheduling.

use nalgebra::{Complex, DMatrix};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::par::{self, Execution};

pub const MIN_DIM: usize = 2;
pub const MAX_DIM: usize = 1000;

/// Default imaginary-part threshold, relative to `1 + ||X||_F`.
pub const REAL_TOL: f64 = 1e-10;

/// Standard normals by Marsaglia's polar method.
#[derive(Debug, Clone)]
pub struct PolarNormals<R> {
    rng: R,
    spare: Option<f64>,
}

impl<R: RngCore> PolarNormals<R> {
    pub fn new(rng: R) -> Self {
        PolarNormals { rng, spare: None }
    }

    pub fn into_inner(self) -> R {
        self.rng
    }

    /// Uniform on `(-1, 1)` from the top 53 bits.
    fn symmetric_uniform(&mut self) -> f64 {
        let u = (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
        2.0 * u - 1.0
    }

    pub fn sample(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        loop {
            let u = self.symmetric_uniform();
            let v = self.symmetric_uniform();
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                let f = (-2.0 * s.ln() / s).sqrt();
                self.spare = Some(v * f);
                return u * f;
            }
        }
    }
}

/// Uniform on `[0, 1)` from the top 53 bits.
fn unit_uniform<R: RngCore>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// The matrix and thinning generators for one sample.
pub fn sample_streams(seed: u64, index: u64) -> (ChaCha8Rng, ChaCha8Rng) {
    let mut matrix = ChaCha8Rng::seed_from_u64(seed);
    matrix.set_stream(2 * index);
    let mut coins = ChaCha8Rng::seed_from_u64(seed);
    coins.set_stream(2 * index + 1);
    (matrix, coins)
}

fn check_dim(n: usize) -> Result<()> {
    if (MIN_DIM..=MAX_DIM).contains(&n) {
        Ok(())
    } else {
        Err(Error::Parameter(format!("matrix size must lie in {MIN_DIM}..={MAX_DIM}, got {n}")))
    }
}

/// `n x n` matrix of independent standard normals, filled row by row.
pub fn sample_matrix<R: RngCore>(n: usize, rng: &mut R) -> Result<DMatrix<f64>> {
    check_dim(n)?;
    let mut normals = PolarNormals::new(rng);
    Ok(DMatrix::from_row_iterator(n, n, std::iter::repeat_with(|| normals.sample()).take(n * n)))
}

const DEFLATION_ULPS: [f64; 4] = [1.0, 4.0, 16.0, 64.0];

/// All eigenvalues from the real Schur form.
pub fn eigenvalues(matrix: &DMatrix<f64>) -> Result<Vec<Complex<f64>>> {
    let n = matrix.nrows();
    if n != matrix.ncols() {
        return Err(Error::Parameter(format!("matrix must be square, got {}x{}", n, matrix.ncols())));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    if matrix.iter().any(|v| !v.is_finite()) {
        return Err(Error::Parameter("matrix has non-finite entries".into()));
    }
    // The QR sweep can stall at a deflation threshold of one ulp; a few
    // ulps are still far below the real/complex cut.
    for ulps in DEFLATION_ULPS {
        if let Some(schur) = nalgebra::linalg::Schur::try_new(matrix.clone(), ulps * f64::EPSILON, 100 * n.max(10)) {
            return Ok(schur.complex_eigenvalues().iter().copied().collect());
        }
    }
    Err(Error::Eigensolver(format!("Schur iteration did not converge for n = {n}")))
}

/// Eigenvalues with `|Im| <= tol (1 + ||X||_F)`, ascending.
pub fn real_eigenvalues(matrix: &DMatrix<f64>, tol: f64) -> Result<Vec<f64>> {
    if !(tol > 0.0) {
        return Err(Error::Parameter(format!("tolerance must be positive, got {tol}")));
    }
    let cut = tol * (1.0 + matrix.norm());
    let mut real: Vec<f64> = eigenvalues(matrix)?
        .into_iter()
        .filter(|z| z.im.abs() <= cut)
        .map(|z| z.re)
        .collect();
    real.sort_by(f64::total_cmp);
    Ok(real)
}

/// Keeps each value independently with probability `gamma`, one coin per
/// value in input order.
pub fn thin<R: RngCore>(values: &[f64], gamma: f64, rng: &mut R) -> Result<Vec<f64>> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::Domain(format!("gamma must lie in [0, 1], got {gamma}")));
    }
    if gamma == 1.0 {
        return Ok(values.to_vec());
    }
    if gamma == 0.0 {
        return Ok(Vec::new());
    }
    Ok(values.iter().copied().filter(|_| unit_uniform(rng) < gamma).collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McConfig {
    pub n: usize,
    pub gamma: f64,
    pub num_samples: usize,
    pub seed: u64,
}

impl McConfig {
    fn validate(&self) -> Result<()> {
        check_dim(self.n)?;
        if !(0.0..=1.0).contains(&self.gamma) {
            return Err(Error::Domain(format!("gamma must lie in [0, 1], got {}", self.gamma)));
        }
        if self.num_samples == 0 {
            return Err(Error::Parameter("sample count must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McRun {
    pub n: usize,
    pub gamma: f64,
    pub num_samples: usize,
    pub seed: u64,
    /// `max(retained) - sqrt(n)` for every sample that retained something,
    /// in sample order.
    pub maxima: Vec<f64>,
    /// Retained real eigenvalues per sample.
    pub retained_counts: Vec<usize>,
    /// Samples that retained no real eigenvalue.
    pub empty_samples: usize,
}

impl McRun {
    pub fn mean(&self) -> Option<f64> {
        if self.maxima.is_empty() {
            None
        } else {
            Some(self.maxima.iter().sum::<f64>() / self.maxima.len() as f64)
        }
    }

    /// Empirical `P(max - sqrt(n) <= t)`, counting empty samples as always
    /// below.
    pub fn empirical_cdf(&self, t: f64) -> f64 {
        let below = self.maxima.iter().filter(|&&m| m <= t).count();
        (self.empty_samples + below) as f64 / self.num_samples as f64
    }
}

/// Real eigenvalues of sample `index`, before thinning.
pub fn sample_real_eigenvalues(n: usize, seed: u64, index: u64) -> Result<Vec<f64>> {
    let (mut matrix_rng, _) = sample_streams(seed, index);
    real_eigenvalues(&sample_matrix(n, &mut matrix_rng)?, REAL_TOL)
}

pub fn run(config: McConfig, exec: Execution) -> Result<McRun> {
    config.validate()?;
    let McConfig { n, gamma, num_samples, seed } = config;
    let indices: Vec<u64> = (0..num_samples as u64).collect();
    let retained = par::try_map(exec, &indices, |&i| {
        if gamma == 0.0 {
            // nothing survives; skip the eigensolver
            return Ok(Vec::new());
        }
        let (mut matrix_rng, mut coins) = sample_streams(seed, i);
        let real = real_eigenvalues(&sample_matrix(n, &mut matrix_rng)?, REAL_TOL)?;
        thin(&real, gamma, &mut coins)
    })?;
    let shift = (n as f64).sqrt();
    let mut maxima = Vec::with_capacity(num_samples);
    let mut retained_counts = Vec::with_capacity(num_samples);
    let mut empty_samples = 0;
    for values in &retained {
        retained_counts.push(values.len());
        match values.last() {
            Some(&top) => maxima.push(top - shift),
            None => empty_samples += 1,
        }
    }
    Ok(McRun { n, gamma, num_samples, seed, maxima, retained_counts, empty_samples })
}

/// `sup_t |F_emp(t) - cdf(t)|` where `F_emp` puts mass `atom / total` at
/// `-inf` and `1 / total` at each sample. At every jump both one-sided
/// limits are compared; the left limit of `cdf` is read a relative `1e-9`
/// below the jump.
pub fn ks_statistic<F>(samples: &[f64], atom: usize, total: usize, cdf: F, exec: Execution) -> Result<f64>
where
    F: Fn(f64) -> Result<f64> + Sync + Send,
{
    if total == 0 || samples.len() + atom != total {
        return Err(Error::Parameter(format!(
            "{} samples plus {atom} empty do not make {total}",
            samples.len()
        )));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted.dedup();
    let exact = par::try_map(exec, &sorted, |&t| Ok((cdf(t - 1e-9 * (1.0 + t.abs()))?, cdf(t)?)))?;
    let mut counts = samples.to_vec();
    counts.sort_by(f64::total_cmp);
    let total = total as f64;
    let mut sup: f64 = 0.0;
    for (&t, &(left, right)) in sorted.iter().zip(&exact) {
        let before = (atom + counts.partition_point(|&v| v < t)) as f64 / total;
        let after = (atom + counts.partition_point(|&v| v <= t)) as f64 / total;
        sup = sup.max((left - before).abs()).max((right - after).abs());
    }
    if sorted.is_empty() {
        // only the atom: compare at +inf
        sup = sup.max((1.0 - cdf(f64::INFINITY)?).abs());
    }
    Ok(sup)
}

/// KS distance between a run and a reference law.
pub fn ks_distance<F>(run: &McRun, cdf: F, exec: Execution) -> Result<f64>
where
    F: Fn(f64) -> Result<f64> + Sync + Send,
{
    ks_statistic(&run.maxima, run.empty_samples, run.num_samples, cdf, exec)
}

/// Two-sample KS distance between empirical laws with atoms at `-inf`.
pub fn ks_two_sample(a: &McRun, b: &McRun) -> Result<f64> {
    if a.num_samples == 0 || b.num_samples == 0 {
        return Err(Error::Parameter("both runs need samples".into()));
    }
    let mut points: Vec<f64> = a.maxima.iter().chain(&b.maxima).copied().collect();
    points.sort_by(f64::total_cmp);
    let mut xa = a.maxima.clone();
    let mut xb = b.maxima.clone();
    xa.sort_by(f64::total_cmp);
    xb.sort_by(f64::total_cmp);
    let (na, nb) = (a.num_samples as f64, b.num_samples as f64);
    let mut sup = (a.empty_samples as f64 / na - b.empty_samples as f64 / nb).abs();
    for &p in &points {
        let fa = (a.empty_samples + xa.partition_point(|&v| v <= p)) as f64 / na;
        let fb = (b.empty_samples + xb.partition_point(|&v| v <= p)) as f64 / nb;
        sup = sup.max((fa - fb).abs());
    }
    Ok(sup)
}
