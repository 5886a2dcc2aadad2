use super::assemble::TwistedOperator;
use crate::error::{Error, Result};
use crate::sparse::Csr;
use faer::linalg::solvers::Solve;
use faer::sparse::{SparseColMat, Triplet};
use faer::{Mat, Side};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Largest dimension handled by the dense solver unless overridden.
pub const DEFAULT_DENSE_CAP: usize = 6000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverMode {
    Dense,
    Iterative,
}

impl std::str::FromStr for SolverMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dense" => Ok(Self::Dense),
            "iterative" => Ok(Self::Iterative),
            _ => Err(Error::InvalidConfig { key: "solver".into(), message: format!("unknown solver mode {s:?}") }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumOptions {
    pub mode: SolverMode,
    /// Relative residual every returned pair must reach.
    pub tol: f64,
    pub dense_cap: usize,
    pub vectors: bool,
    /// Seed of the iterative start block.
    pub seed: u64,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        Self { mode: SolverMode::Dense, tol: 1e-8, dense_cap: DEFAULT_DENSE_CAP, vectors: false, seed: 0 }
    }
}

/// Eigenvalues of the mass-generalized problem sorted by real part.
#[derive(Debug, Clone, Serialize)]
pub struct Spectrum {
    pub eigenvalues: Vec<Complex64>,
    /// Mass-normalized eigenvectors (`v^* M v = 1`), when requested.
    #[serde(skip)]
    pub eigenvectors: Option<Vec<Vec<Complex64>>>,
    /// `||(A - lambda M) v||_{M^-1} / ||v||_M` for each pair.
    pub residuals: Vec<f64>,
    pub level: usize,
    pub h: f64,
    pub mode: SolverMode,
    pub tol: f64,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().fold(0.0, |m, r| m.max(*r))
    }

    /// Number of eigenvalues with real part in `[a, b]`.
    pub fn count_real_part_in(&self, a: f64, b: f64) -> usize {
        self.eigenvalues.iter().filter(|z| z.re >= a && z.re <= b).count()
    }
}

fn sort_key(a: &Complex64, b: &Complex64) -> std::cmp::Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

/// `||(A - lambda M) v||_{M^-1} / ||v||_M` for a complex vector.
pub fn pair_residual(a: &Csr<f64>, mass: &[f64], lambda: Complex64, v: &[Complex64]) -> f64 {
    let re: Vec<f64> = v.iter().map(|z| z.re).collect();
    let im: Vec<f64> = v.iter().map(|z| z.im).collect();
    let (ar, ai) = (a.matvec(&re), a.matvec(&im));
    let mut num = 0.0;
    let mut den = 0.0;
    for k in 0..v.len() {
        let r = Complex64::new(ar[k], ai[k]) - lambda * mass[k] * v[k];
        num += r.norm_sqr() / mass[k];
        den += mass[k] * v[k].norm_sqr();
    }
    (num / den).sqrt()
}

fn mass_normalize(mass: &[f64], v: &mut [Complex64]) {
    let n: f64 = v.iter().zip(mass).map(|(z, m)| m * z.norm_sqr()).sum::<f64>().sqrt();
    // fix the phase by the largest component so output is reproducible
    let big = v.iter().copied().max_by(|a, b| a.norm_sqr().total_cmp(&b.norm_sqr())).unwrap_or(Complex64::new(1.0, 0.0));
    let phase = big.conj() / big.norm();
    v.iter_mut().for_each(|z| *z = *z * phase / n);
}

/// The `count` eigenvalues of smallest real part of `A v = lambda M v`.
pub fn compute_spectrum(op: &TwistedOperator, count: usize, opts: &SpectrumOptions) -> Result<Spectrum> {
    faer::set_global_parallelism(faer::Par::Seq);
    let n = op.dim();
    let count = count.min(n);
    if count == 0 {
        return Err(Error::InvalidArgument("requested zero eigenvalues".into()));
    }
    let a = op.matrix();
    let (vals, vecs) = match opts.mode {
        SolverMode::Dense => {
            if n > opts.dense_cap {
                return Err(Error::InvalidArgument(format!("dimension {n} exceeds dense cap {}", opts.dense_cap)));
            }
            dense_pairs(&a, &op.mass, op.is_untwisted())?
        }
        SolverMode::Iterative => iterative_pairs(&a, &op.mass, count, opts)?,
    };
    let mut vals = vals;
    if op.is_untwisted() {
        // The untwisted operator is positive semidefinite with the constants
        // as exact kernel; rounding-level values are the zero mode.
        let diag = a.diagonal();
        let scale = (0..n).map(|i| diag[i] / op.mass[i]).fold(0.0, f64::max);
        for z in vals.iter_mut().filter(|z| z.norm() <= 1e-12 * scale) {
            *z = Complex64::new(0.0, 0.0);
        }
    }
    let mut idx: Vec<usize> = (0..vals.len()).collect();
    idx.sort_by(|&i, &j| sort_key(&vals[i], &vals[j]));
    idx.truncate(count);
    let mut eigenvalues = Vec::with_capacity(count);
    let mut eigenvectors = Vec::with_capacity(count);
    let mut residuals = Vec::with_capacity(count);
    for &i in &idx {
        let mut v = vecs[i].clone();
        mass_normalize(&op.mass, &mut v);
        let r = pair_residual(&a, &op.mass, vals[i], &v);
        if !(r <= opts.tol) {
            return Err(Error::EigenFailure { message: format!("pair {} residual above tolerance", eigenvalues.len()), residual: r });
        }
        eigenvalues.push(vals[i]);
        residuals.push(r);
        eigenvectors.push(v);
    }
    Ok(Spectrum {
        eigenvalues,
        eigenvectors: opts.vectors.then_some(eigenvectors),
        residuals,
        level: op.level,
        h: op.h,
        mode: opts.mode,
        tol: opts.tol,
    })
}

type Pairs = (Vec<Complex64>, Vec<Vec<Complex64>>);

fn dense_pairs(a: &Csr<f64>, mass: &[f64], symmetric: bool) -> Result<Pairs> {
    let n = mass.len();
    let s: Vec<f64> = mass.iter().map(|m| 1.0 / m.sqrt()).collect();
    let mut c = Mat::<f64>::zeros(n, n);
    for (r, col, v) in a.triplets() {
        c[(r, col)] = s[r] * v * s[col];
    }
    let mut vals = Vec::with_capacity(n);
    let mut vecs = Vec::with_capacity(n);
    if symmetric {
        let e = c
            .self_adjoint_eigen(Side::Lower)
            .map_err(|e| Error::EigenFailure { message: format!("{e:?}"), residual: f64::NAN })?;
        let (sv, u) = (e.S(), e.U());
        for k in 0..n {
            vals.push(Complex64::new(sv[k], 0.0));
            vecs.push((0..n).map(|i| Complex64::new(u[(i, k)] * s[i], 0.0)).collect());
        }
    } else {
        let e = c.eigen().map_err(|e| Error::EigenFailure { message: format!("{e:?}"), residual: f64::NAN })?;
        let (sv, u) = (e.S(), e.U());
        for k in 0..n {
            vals.push(Complex64::new(sv[k].re, sv[k].im));
            vecs.push((0..n).map(|i| Complex64::new(u[(i, k)].re * s[i], u[(i, k)].im * s[i])).collect());
        }
    }
    Ok((vals, vecs))
}

fn csr_to_faer(a: &Csr<f64>) -> Result<SparseColMat<usize, f64>> {
    let trip: Vec<Triplet<usize, usize, f64>> = a.triplets().into_iter().map(|(r, c, v)| Triplet::new(r, c, v)).collect();
    SparseColMat::try_new_from_triplets(a.nrows, a.ncols, &trip)
        .map_err(|e| Error::InvalidArgument(format!("sparse assembly failed: {e:?}")))
}

fn matmul_sparse(a: &Csr<f64>, q: &Mat<f64>) -> Mat<f64> {
    let mut out = Mat::<f64>::zeros(q.nrows(), q.ncols());
    for j in 0..q.ncols() {
        let col: Vec<f64> = (0..q.nrows()).map(|i| q[(i, j)]).collect();
        for (i, v) in a.matvec(&col).into_iter().enumerate() {
            out[(i, j)] = v;
        }
    }
    out
}

/// Shift-invert subspace iteration with Rayleigh-Ritz extraction. The
/// shift sits below the real parts of the whole spectrum, so the dominant
/// subspace of `(A - sigma M)^-1 M` belongs to the smallest real parts.
fn iterative_pairs(a: &Csr<f64>, mass: &[f64], count: usize, opts: &SpectrumOptions) -> Result<Pairs> {
    let n = mass.len();
    let m = (count + count.max(16)).min(n);
    let diag = a.diagonal();
    // Gershgorin-type lower bound on the potential-driven negative part.
    let lowest = (0..n).map(|i| diag[i] / mass[i]).fold(f64::INFINITY, f64::min);
    let sigma = lowest.min(0.0) - 1.0;
    let mut shifted: Vec<(usize, usize, f64)> = a.triplets();
    shifted.extend(mass.iter().enumerate().map(|(i, mi)| (i, i, -sigma * mi)));
    let lu = csr_to_faer(&Csr::from_triplets(n, n, &shifted))?
        .sp_lu()
        .map_err(|e| Error::EigenFailure { message: format!("sparse LU failed: {e:?}"), residual: f64::NAN })?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut q = Mat::<f64>::from_fn(n, m, |_, _| rng.gen_range(-1.0..1.0));
    q = q.qr().compute_thin_Q();
    let mut worst = f64::INFINITY;
    for it in 0..400 {
        let mut z = Mat::<f64>::from_fn(n, m, |i, j| mass[i] * q[(i, j)]);
        lu.solve_in_place(z.as_mut());
        q = z.qr().compute_thin_Q();
        if it % 4 != 3 {
            continue;
        }
        let aq = matmul_sparse(a, &q);
        let g = q.transpose() * &aq;
        let mq = Mat::<f64>::from_fn(n, m, |i, j| mass[i] * q[(i, j)]);
        let hm = q.transpose() * &mq;
        let l = hm
            .llt(Side::Lower)
            .map_err(|e| Error::EigenFailure { message: format!("projected mass not definite: {e:?}"), residual: f64::NAN })?;
        // reduced standard problem L^-1 G L^-T
        let lmat = l.L().to_owned();
        let mut gt = g.clone();
        faer::linalg::triangular_solve::solve_lower_triangular_in_place(lmat.as_ref(), gt.as_mut(), faer::Par::Seq);
        let mut gtt = gt.transpose().to_owned();
        faer::linalg::triangular_solve::solve_lower_triangular_in_place(lmat.as_ref(), gtt.as_mut(), faer::Par::Seq);
        let red = gtt.transpose().to_owned();
        let e = red.eigen().map_err(|e| Error::EigenFailure { message: format!("{e:?}"), residual: f64::NAN })?;
        // y = L^-T u
        let u = e.U();
        let mut ure = Mat::<f64>::from_fn(m, m, |i, j| u[(i, j)].re);
        let mut uim = Mat::<f64>::from_fn(m, m, |i, j| u[(i, j)].im);
        let lt = lmat.transpose().to_owned();
        faer::linalg::triangular_solve::solve_upper_triangular_in_place(lt.as_ref(), ure.as_mut(), faer::Par::Seq);
        faer::linalg::triangular_solve::solve_upper_triangular_in_place(lt.as_ref(), uim.as_mut(), faer::Par::Seq);
        let (xre, xim) = (&q * &ure, &q * &uim);
        let sv = e.S();
        let mut vals: Vec<Complex64> = (0..m).map(|k| Complex64::new(sv[k].re, sv[k].im)).collect();
        let mut vecs: Vec<Vec<Complex64>> =
            (0..m).map(|k| (0..n).map(|i| Complex64::new(xre[(i, k)], xim[(i, k)])).collect()).collect();
        let mut idx: Vec<usize> = (0..m).collect();
        idx.sort_by(|&i, &j| sort_key(&vals[i], &vals[j]));
        idx.truncate(count);
        worst = idx.iter().map(|&k| pair_residual(a, mass, vals[k], &vecs[k])).fold(0.0, f64::max);
        if worst <= 0.1 * opts.tol {
            vals = idx.iter().map(|&k| vals[k]).collect();
            vecs = idx.iter().map(|&k| std::mem::take(&mut vecs[k])).collect();
            return Ok((vals, vecs));
        }
    }
    Err(Error::EigenFailure { message: "subspace iteration did not converge".into(), residual: worst })
}
