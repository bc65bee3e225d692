//! Discrete Neumann-Laplace eigensolvers used as reference values.

pub mod eigensolver;
pub mod fd;
pub mod fem;
pub mod mesh;
pub mod sparse;

pub use eigensolver::{smallest_eigs, smallest_eigs_with, Mass, OracleMethod, SolverOptions, SpectrumResult};
pub use fd::{fd_box, fd_voxel_3d};
pub use fem::fem_p1_2d;
pub use mesh::TriMesh;
pub use sparse::SparseSymmetric;

use crate::error::{Error, Result};
use crate::geometry::DomainSpec;

/// `(2^order mu_h2 - mu_h) / (2^order - 1)` for results at `h` and `h/2`.
pub fn richardson(mu_h: f64, mu_h2: f64, order: u32) -> f64 {
    let f = 2f64.powi(order as i32);
    (f * mu_h2 - mu_h) / (f - 1.0)
}

/// Observed convergence order from errors at `h` and `h/2`.
pub fn observed_order(err_h: f64, err_h2: f64) -> f64 {
    (err_h.abs() / err_h2.abs()).log2()
}

/// Resolutions for a two-level oracle run. `None` picks the default for the domain.
#[derive(Debug, Clone, Copy, Default)]
pub struct Resolution {
    /// Cells per axis at the coarse level (finite differences).
    pub cells: Option<usize>,
    /// Coarse mesh size (finite elements).
    pub h: Option<f64>,
}

/// Oracle value of `mu_1` with a discretization slack.
#[derive(Debug, Clone)]
pub struct OracleEstimate {
    pub coarse: SpectrumResult,
    pub fine: SpectrumResult,
    /// Fine-level `mu_1`.
    pub mu1: f64,
    /// Richardson value when the scheme has a known order.
    pub extrapolated: Option<f64>,
    /// Three times the estimated discretization error.
    pub slack: f64,
    pub indicative: bool,
}

impl OracleEstimate {
    fn from_pair(coarse: SpectrumResult, fine: SpectrumResult, order: Option<u32>) -> Result<Self> {
        let (m0, m1) = (
            coarse.mu1().ok_or_else(|| Error::NotConverged { trace: "missing mu_1".into() })?,
            fine.mu1().ok_or_else(|| Error::NotConverged { trace: "missing mu_1".into() })?,
        );
        let extrapolated = order.map(|o| richardson(m0, m1, o));
        let slack = match extrapolated {
            Some(e) => 3.0 * (e - m1).abs(),
            None => 3.0 * (m1 - m0).abs(),
        };
        let indicative = coarse.indicative || fine.indicative;
        Ok(Self { coarse, fine, mu1: m1, extrapolated, slack, indicative })
    }
}

pub const DEFAULT_BOX_CELLS_2D: usize = 64;
pub const DEFAULT_BOX_CELLS_3D: usize = 32;
pub const DEFAULT_VOXEL_CELLS: usize = 48;
pub const DEFAULT_FEM_RINGS: f64 = 32.0;

/// Runs the matching oracle at a coarse and a doubled resolution.
pub fn estimate_mu1(d: &DomainSpec, res: Resolution) -> Result<OracleEstimate> {
    estimate_spectrum(d, res, 1)
}

/// As [`estimate_mu1`], keeping the `k` smallest nonzero eigenvalues per level.
pub fn estimate_spectrum(d: &DomainSpec, res: Resolution, k: usize) -> Result<OracleEstimate> {
    match d {
        DomainSpec::Box { sides } if sides.len() == 2 || sides.len() == 3 => {
            let default = if sides.len() == 2 { DEFAULT_BOX_CELLS_2D } else { DEFAULT_BOX_CELLS_3D };
            let c = res.cells.unwrap_or(default);
            OracleEstimate::from_pair(fd_box(d, c, k)?, fd_box(d, 2 * c, k)?, Some(2))
        }
        DomainSpec::Ball { dim: 2, .. } | DomainSpec::Polygon2D { .. } => fem_pair(d, res, k),
        DomainSpec::Ellipsoid { semiaxes } if semiaxes.len() == 2 => fem_pair(d, res, k),
        _ if d.dim() == 3 => {
            let c = res.cells.unwrap_or(DEFAULT_VOXEL_CELLS);
            OracleEstimate::from_pair(fd_voxel_3d(d, c, k)?, fd_voxel_3d(d, 2 * c, k)?, None)
        }
        _ => Err(Error::UnsupportedOracle(format!("no oracle for {}", d.label()))),
    }
}

fn fem_pair(d: &DomainSpec, res: Resolution, k: usize) -> Result<OracleEstimate> {
    let (lo, hi) = d.bounding_box();
    let extent = (hi[0] - lo[0]).max(hi[1] - lo[1]);
    let h = res.h.unwrap_or(0.5 * extent / DEFAULT_FEM_RINGS);
    OracleEstimate::from_pair(fem_p1_2d(d, h, k)?, fem_p1_2d(d, 0.5 * h, k)?, Some(2))
}
