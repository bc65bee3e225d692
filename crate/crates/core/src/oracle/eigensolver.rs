//! Smallest eigenpairs of `K v = mu M v` for a Neumann stiffness `K` whose
//! kernel is the constant vector.
//!
//! Block inverse subspace iteration: each sweep solves `K y = M x` for the
//! current Ritz vectors by Jacobi-preconditioned CG restricted to the
//! complement of the constants, then Rayleigh-Ritz on the new block. The
//! constant mode is removed by explicit M-orthogonal projection.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::sparse::SparseSymmetric;
use crate::error::{Error, Result};
use crate::geometry::DEFAULT_SEED;

#[derive(Debug, Clone)]
pub enum Mass {
    Diagonal(Vec<f64>),
    Sparse(SparseSymmetric),
}

impl Mass {
    pub fn dim(&self) -> usize {
        match self {
            Mass::Diagonal(d) => d.len(),
            Mass::Sparse(m) => m.dim(),
        }
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        match self {
            Mass::Diagonal(d) => d.iter().zip(x).map(|(a, b)| a * b).collect(),
            Mass::Sparse(m) => m.apply(x),
        }
    }

    fn check(&self) -> Result<()> {
        let ok = match self {
            Mass::Diagonal(d) => d.iter().all(|v| *v > 0.0 && v.is_finite()),
            Mass::Sparse(m) => m.diagonal().iter().all(|v| *v > 0.0) && m.is_symmetric(1e-12),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::IndefiniteMass)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleMethod {
    FdBox,
    FemP12d,
    FdVoxel3d,
    Generic,
}

impl OracleMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            OracleMethod::FdBox => "fd-box",
            OracleMethod::FemP12d => "fem-p1-2d",
            OracleMethod::FdVoxel3d => "fd-voxel-3d",
            OracleMethod::Generic => "generic",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SpectrumResult {
    /// Ascending; `eigenvalues[0]` is the deflated constant mode.
    pub eigenvalues: Vec<f64>,
    pub h: f64,
    pub method: OracleMethod,
    pub residuals: Vec<f64>,
    pub dof: usize,
    /// M-normalized eigenvectors, one per eigenvalue.
    pub eigenvectors: Vec<Vec<f64>>,
    pub outer_iterations: usize,
    /// Set when the discretization cannot be trusted for tight tolerances.
    pub indicative: bool,
    pub note: Option<String>,
}

impl SpectrumResult {
    pub fn mu1(&self) -> Option<f64> {
        self.eigenvalues.get(1).copied()
    }

    /// CSV row `h, dof, mu0..muk, residuals...`.
    pub fn csv_row(&self) -> String {
        let mut cols = vec![self.h.to_string(), self.dof.to_string()];
        cols.extend(self.eigenvalues.iter().map(|v| v.to_string()));
        cols.extend(self.residuals.iter().map(|v| v.to_string()));
        cols.join(",")
    }

    pub fn csv_header(k: usize) -> String {
        let mut cols = vec!["h".to_string(), "dof".to_string()];
        cols.extend((0..=k).map(|i| format!("mu{i}")));
        cols.extend((0..=k).map(|i| format!("res{i}")));
        cols.join(",")
    }
}

#[derive(Debug, Clone)]
pub struct SolverOptions {
    pub tol: f64,
    pub max_outer: usize,
    pub max_inner: usize,
    /// Guard vectors beyond the requested ones.
    pub extra: usize,
    pub seed: u64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { tol: 1e-9, max_outer: 400, max_inner: 50_000, extra: 3, seed: DEFAULT_SEED }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    // fixed-size partial sums keep the reduction order independent of threading
    a.chunks(4096).zip(b.chunks(4096)).map(|(x, y)| x.iter().zip(y).map(|(p, q)| p * q).sum::<f64>()).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// Removes the mean so that `r` lies in the range of `K`.
fn project_mean(r: &mut [f64]) {
    let mean = r.iter().sum::<f64>() / r.len() as f64;
    for v in r.iter_mut() {
        *v -= mean;
    }
}

/// Jacobi-preconditioned CG for the singular consistent system `K x = b`.
fn pcg(k: &SparseSymmetric, dinv: &[f64], b: &[f64], x: &mut [f64], rel_tol: f64, max_iter: usize) -> Result<usize> {
    let n = b.len();
    let mut r = b.to_vec();
    let kx = k.apply(x);
    axpy(-1.0, &kx, &mut r);
    project_mean(&mut r);
    let target = rel_tol * norm(b);
    let mut z: Vec<f64> = r.iter().zip(dinv).map(|(a, d)| a * d).collect();
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let mut q = vec![0.0; n];
    let mut trace = Vec::new();
    let mut rn = norm(&r);
    for it in 0..max_iter {
        if rn <= target {
            return Ok(it);
        }
        if it % 500 == 0 {
            trace.push(format!("{it}:{rn:.3e}"));
        }
        k.matvec(&p, &mut q);
        let pq = dot(&p, &q);
        if pq <= 0.0 {
            break;
        }
        let alpha = rz / pq;
        axpy(alpha, &p, x);
        axpy(-alpha, &q, &mut r);
        project_mean(&mut r);
        rn = norm(&r);
        for ((zi, ri), di) in z.iter_mut().zip(&r).zip(dinv) {
            *zi = ri * di;
        }
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for (pi, zi) in p.iter_mut().zip(&z) {
            *pi = zi + beta * *pi;
        }
    }
    if rn <= 10.0 * target {
        return Ok(max_iter);
    }
    trace.push(format!("final:{rn:.3e} target:{target:.3e}"));
    Err(Error::SolverStagnation { trace: trace.join(" ") })
}

struct Deflation {
    ones: Vec<f64>,
    m_ones: Vec<f64>,
    one_m_one: f64,
}

impl Deflation {
    fn new(m: &Mass, n: usize) -> Result<Self> {
        let ones = vec![1.0; n];
        let m_ones = m.apply(&ones);
        let one_m_one = m_ones.iter().sum::<f64>();
        if !(one_m_one > 0.0) {
            return Err(Error::IndefiniteMass);
        }
        Ok(Self { ones, m_ones, one_m_one })
    }

    fn apply(&self, v: &mut [f64]) {
        let c = dot(&self.m_ones, v) / self.one_m_one;
        axpy(-c, &self.ones, v);
    }
}

fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
}

/// M-orthonormalizes `vs` in place (after deflating constants) and returns `M vs`.
fn m_orthonormalize(vs: &mut [Vec<f64>], m: &Mass, defl: &Deflation, rng: &mut ChaCha8Rng) -> Result<Vec<Vec<f64>>> {
    let n = defl.ones.len();
    let mut mvs: Vec<Vec<f64>> = Vec::with_capacity(vs.len());
    for i in 0..vs.len() {
        let mut attempts = 0;
        loop {
            let before = norm(&vs[i]);
            for _ in 0..2 {
                defl.apply(&mut vs[i]);
                for (j, mv) in mvs.iter().enumerate() {
                    let c = dot(mv, &vs[i]);
                    let (head, tail) = vs.split_at_mut(i);
                    axpy(-c, &head[j], &mut tail[0]);
                }
            }
            let w = m.apply(&vs[i]);
            let q = dot(&vs[i], &w);
            if q < 0.0 {
                return Err(Error::IndefiniteMass);
            }
            let nrm = q.sqrt();
            if nrm.is_finite() && nrm > 1e-10 * before.max(f64::MIN_POSITIVE) && norm(&vs[i]) > 1e-12 * before {
                for v in vs[i].iter_mut() {
                    *v /= nrm;
                }
                mvs.push(w.into_iter().map(|v| v / nrm).collect());
                break;
            }
            attempts += 1;
            if attempts > 5 {
                return Err(Error::NotConverged { trace: "could not complete an M-orthonormal block".into() });
            }
            vs[i] = random_vector(rng, n);
        }
    }
    Ok(mvs)
}

/// Generalized symmetric eigenproblem of a small block, ascending.
fn small_generalized(kb: &DMatrix<f64>, mb: &DMatrix<f64>) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let chol = mb.clone().cholesky().ok_or(Error::IndefiniteMass)?;
    let l = chol.l();
    let linv = l.clone().try_inverse().ok_or(Error::IndefiniteMass)?;
    let c = &linv * kb * linv.transpose();
    let c = (&c + c.transpose()) * 0.5;
    let eig = SymmetricEigen::new(c);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let q = linv.transpose() * &eig.eigenvectors;
    let vals = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = DMatrix::from_fn(q.nrows(), order.len(), |r, c| q[(r, order[c])]);
    Ok((vals, vecs))
}

fn combine(vs: &[Vec<f64>], q: &DMatrix<f64>, col: usize) -> Vec<f64> {
    let mut out = vec![0.0; vs[0].len()];
    for (j, v) in vs.iter().enumerate() {
        axpy(q[(j, col)], v, &mut out);
    }
    out
}

/// The `nev` smallest nonzero eigenpairs plus the constant mode.
pub fn smallest_eigs(k: &SparseSymmetric, m: &Mass, nev: usize, tol: f64) -> Result<SpectrumResult> {
    smallest_eigs_with(k, m, nev, &SolverOptions { tol, ..SolverOptions::default() })
}

pub fn smallest_eigs_with(k: &SparseSymmetric, m: &Mass, nev: usize, opts: &SolverOptions) -> Result<SpectrumResult> {
    let n = k.dim();
    if m.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: m.dim() });
    }
    if nev >= n {
        return Err(Error::TooManyEigenpairs { k: nev, dof: n });
    }
    m.check()?;
    let defl = Deflation::new(m, n)?;
    let k_norm = k.norm_inf().max(f64::MIN_POSITIVE);

    let v0: Vec<f64> = vec![1.0 / defl.one_m_one.sqrt(); n];
    let kv0 = k.apply(&v0);
    let mu0 = dot(&v0, &kv0).max(0.0);
    let mv0 = m.apply(&v0);
    let r0: Vec<f64> = kv0.iter().zip(&mv0).map(|(a, b)| a - mu0 * b).collect();
    let res0 = norm(&r0) / (k_norm * norm(&v0) + mu0 * norm(&mv0));

    let mut result = SpectrumResult {
        eigenvalues: vec![mu0],
        h: 0.0,
        method: OracleMethod::Generic,
        residuals: vec![res0],
        dof: n,
        eigenvectors: vec![v0],
        outer_iterations: 0,
        indicative: false,
        note: None,
    };
    if nev == 0 {
        return Ok(result);
    }

    let dinv: Vec<f64> = k.diagonal().iter().map(|d| if *d > 0.0 { 1.0 / d } else { 1.0 }).collect();
    let b = (nev + opts.extra).min(n - 1);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut vs: Vec<Vec<f64>> = (0..b).map(|_| random_vector(&mut rng, n)).collect();
    let mut history: Vec<String> = Vec::new();

    for outer in 0..opts.max_outer {
        let mvs = m_orthonormalize(&mut vs, m, &defl, &mut rng)?;
        let kvs: Vec<Vec<f64>> = vs.par_iter().map(|v| k.apply(v)).collect();
        let kb = DMatrix::from_fn(b, b, |i, j| 0.5 * (dot(&vs[i], &kvs[j]) + dot(&vs[j], &kvs[i])));
        let mb = DMatrix::from_fn(b, b, |i, j| 0.5 * (dot(&vs[i], &mvs[j]) + dot(&vs[j], &mvs[i])));
        let (theta, q) = small_generalized(&kb, &mb)?;
        let xs: Vec<Vec<f64>> = (0..b).map(|c| combine(&vs, &q, c)).collect();
        let kxs: Vec<Vec<f64>> = (0..b).map(|c| combine(&kvs, &q, c)).collect();
        let mxs: Vec<Vec<f64>> = (0..b).map(|c| combine(&mvs, &q, c)).collect();
        let res: Vec<f64> = (0..b)
            .map(|i| {
                let th = theta[i].max(0.0);
                let r: Vec<f64> = kxs[i].iter().zip(&mxs[i]).map(|(a, c)| a - th * c).collect();
                norm(&r) / (norm(&kxs[i]) + th * norm(&mxs[i])).max(f64::MIN_POSITIVE)
            })
            .collect();
        let worst = res[..nev].iter().cloned().fold(0.0, f64::max);
        history.push(format!("{outer}:{worst:.2e}"));
        if worst < opts.tol || b == n - 1 {
            result.eigenvalues.extend(theta[..nev].iter().map(|t| t.max(0.0)));
            result.residuals.extend_from_slice(&res[..nev]);
            result.eigenvectors.extend(xs.into_iter().take(nev));
            result.outer_iterations = outer + 1;
            return Ok(result);
        }
        let solved: Vec<Result<Vec<f64>>> = (0..b)
            .into_par_iter()
            .map(|i| {
                let mut rhs = mxs[i].clone();
                project_mean(&mut rhs);
                let mut x: Vec<f64> =
                    if theta[i] > 0.0 { xs[i].iter().map(|v| v / theta[i]).collect() } else { vec![0.0; n] };
                let inner_tol = (1e-2 * res[i]).clamp(1e-14, 1e-4);
                pcg(k, &dinv, &rhs, &mut x, inner_tol, opts.max_inner)?;
                Ok(x)
            })
            .collect();
        vs = solved.into_iter().collect::<Result<Vec<_>>>()?;
    }
    Err(Error::NotConverged { trace: history.join(" ") })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(n: usize) -> SparseSymmetric {
        let mut t = Vec::new();
        for i in 0..n - 1 {
            t.push((i, i, 1.0));
            t.push((i + 1, i + 1, 1.0));
            t.push((i, i + 1, -1.0));
        }
        SparseSymmetric::from_triplets(n, &t).unwrap()
    }

    #[test]
    fn neumann_chain_closed_form() {
        let k = chain(16);
        let res = smallest_eigs(&k, &Mass::Diagonal(vec![1.0; 16]), 3, 1e-11).unwrap();
        for j in 1..=3 {
            let exact = 2.0 - 2.0 * (std::f64::consts::PI * j as f64 / 16.0).cos();
            assert!((res.eigenvalues[j] - exact).abs() < 1e-12, "j={j}: {} vs {exact}", res.eigenvalues[j]);
        }
        assert!(res.eigenvalues[0] < 1e-8 * res.eigenvalues[1]);
        assert!(res.residuals.iter().all(|r| *r < 1e-11));
    }

    #[test]
    fn zero_request_returns_constant_mode() {
        let res = smallest_eigs(&chain(10), &Mass::Diagonal(vec![1.0; 10]), 0, 1e-10).unwrap();
        assert_eq!(res.eigenvalues.len(), 1);
        assert!(res.eigenvalues[0] < 1e-14);
    }

    #[test]
    fn too_many_and_indefinite() {
        let k = chain(4);
        assert!(matches!(
            smallest_eigs(&k, &Mass::Diagonal(vec![1.0; 4]), 4, 1e-10),
            Err(Error::TooManyEigenpairs { k: 4, dof: 4 })
        ));
        assert!(matches!(
            smallest_eigs(&k, &Mass::Diagonal(vec![1.0, -1.0, 1.0, 1.0]), 1, 1e-10),
            Err(Error::IndefiniteMass)
        ));
    }

    #[test]
    fn random_spd_mass_rayleigh_quotients() {
        let n = 60;
        let k = chain(n);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        // diagonally dominant symmetric mass with random couplings
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, 2.0 + rng.random_range(0.0..1.0)));
            if i + 1 < n {
                t.push((i, i + 1, rng.random_range(-0.5..0.5)));
            }
        }
        let m = Mass::Sparse(SparseSymmetric::from_triplets(n, &t).unwrap());
        let res = smallest_eigs(&k, &m, 2, 1e-10).unwrap();
        for (lam, v) in res.eigenvalues.iter().zip(&res.eigenvectors).skip(1) {
            let rq = dot(v, &k.apply(v)) / dot(v, &m.apply(v));
            assert!((rq - lam).abs() <= 1e-9 * lam, "{rq} vs {lam}");
        }
        assert!(res.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }
}
