//! Linear finite elements with consistent mass on planar domains.

use super::eigensolver::{smallest_eigs, Mass, OracleMethod, SpectrumResult};
use super::mesh::TriMesh;
use super::sparse::SparseSymmetric;
use crate::error::{Error, Result};
use crate::geometry::DomainSpec;

pub const DEFAULT_TOL: f64 = 1e-9;

pub fn assemble_p1(mesh: &TriMesh) -> Result<(SparseSymmetric, SparseSymmetric)> {
    mesh.check_quality()?;
    let mut kt = Vec::with_capacity(6 * mesh.triangles.len());
    let mut mt = Vec::with_capacity(6 * mesh.triangles.len());
    for tri in &mesh.triangles {
        let p = tri.map(|i| mesh.nodes[i]);
        let area = 0.5 * ((p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) - (p[2][0] - p[0][0]) * (p[1][1] - p[0][1]));
        // gradients of the barycentric coordinates times 2 * area
        let g = [0, 1, 2].map(|i| {
            let (a, b) = (p[(i + 1) % 3], p[(i + 2) % 3]);
            [a[1] - b[1], b[0] - a[0]]
        });
        for i in 0..3 {
            for j in i..3 {
                let kij = (g[i][0] * g[j][0] + g[i][1] * g[j][1]) / (4.0 * area);
                let mij = if i == j { area / 6.0 } else { area / 12.0 };
                let (a, b) = (tri[i], tri[j]);
                let (r, c) = (a.min(b), a.max(b));
                kt.push((r, c, kij));
                mt.push((r, c, mij));
            }
        }
    }
    let n = mesh.nodes.len();
    Ok((SparseSymmetric::from_triplets(n, &kt)?, SparseSymmetric::from_triplets(n, &mt)?))
}

/// Mesh for a planar domain at target edge length `h`.
pub fn mesh_for(d: &DomainSpec, h: f64) -> Result<TriMesh> {
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::Config(format!("mesh size must be > 0, got {h}")));
    }
    match d {
        DomainSpec::Ball { dim: 2, radius } => Ok(TriMesh::disc(*radius, (radius / h).ceil().max(2.0) as usize)),
        DomainSpec::Ellipsoid { semiaxes } if semiaxes.len() == 2 => {
            let big = semiaxes[0].max(semiaxes[1]);
            let mut m = TriMesh::disc(1.0, (big / h).ceil().max(2.0) as usize);
            m.map_diagonal(semiaxes[0], semiaxes[1]);
            Ok(m)
        }
        DomainSpec::Polygon2D { vertices } => TriMesh::polygon(vertices, h),
        DomainSpec::Box { sides } if sides.len() == 2 => {
            let v = [[0.0, 0.0], [sides[0], 0.0], [sides[0], sides[1]], [0.0, sides[1]]];
            TriMesh::polygon(&v, h)
        }
        _ => Err(Error::UnsupportedOracle(format!("fem-p1-2d cannot mesh {}", d.label()))),
    }
}

/// `k` smallest nonzero Neumann eigenvalues with P1 elements.
pub fn fem_p1_2d(d: &DomainSpec, h: f64, k: usize) -> Result<SpectrumResult> {
    let mesh = mesh_for(d, h)?;
    fem_on_mesh(&mesh, k)
}

pub fn fem_on_mesh(mesh: &TriMesh, k: usize) -> Result<SpectrumResult> {
    let (stiff, mass) = assemble_p1(mesh)?;
    let mut res = smallest_eigs(&stiff, &Mass::Sparse(mass), k, DEFAULT_TOL)?;
    res.h = mesh.max_edge();
    res.method = OracleMethod::FemP12d;
    Ok(res)
}
