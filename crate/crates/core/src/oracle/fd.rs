//! Cell-centred finite differences with mirror (reflecting) faces.

use std::collections::VecDeque;

use super::eigensolver::{smallest_eigs, Mass, OracleMethod, SpectrumResult};
use super::sparse::SparseSymmetric;
use crate::error::{Error, Result};
use crate::geometry::DomainSpec;

pub const MIN_BOX_CELLS: usize = 8;
pub const MIN_VOXEL_CELLS: usize = 32;
pub const MIN_VOXELS: usize = 100;
pub const DEFAULT_TOL: f64 = 1e-9;

/// Stiffness and diagonal mass of the box Laplacian with `cells` per axis.
pub fn assemble_box(sides: &[f64], cells: usize) -> Result<(SparseSymmetric, Vec<f64>, f64)> {
    let n = sides.len();
    let h: Vec<f64> = sides.iter().map(|s| s / cells as f64).collect();
    let vol: f64 = h.iter().product();
    let total = cells.pow(n as u32);
    let stride: Vec<usize> = (0..n).map(|i| cells.pow(i as u32)).collect();
    let mut t = Vec::with_capacity(total * (1 + 2 * n));
    for idx in 0..total {
        for axis in 0..n {
            let coord = (idx / stride[axis]) % cells;
            if coord + 1 < cells {
                let c = vol / (h[axis] * h[axis]);
                let j = idx + stride[axis];
                t.push((idx, idx, c));
                t.push((j, j, c));
                t.push((idx, j, -c));
            }
        }
    }
    let k = SparseSymmetric::from_triplets(total, &t)?;
    let hmax = h.iter().cloned().fold(0.0, f64::max);
    Ok((k, vec![vol; total], hmax))
}

/// `k` smallest nonzero Neumann eigenvalues of a box (n = 2 or 3).
pub fn fd_box(d: &DomainSpec, cells_per_axis: usize, k: usize) -> Result<SpectrumResult> {
    let DomainSpec::Box { sides } = d else {
        return Err(Error::UnsupportedOracle(format!("fd-box needs a box, got {}", d.label())));
    };
    if !(2..=3).contains(&sides.len()) {
        return Err(Error::UnsupportedOracle(format!("fd-box supports n = 2, 3, got n = {}", sides.len())));
    }
    if cells_per_axis < MIN_BOX_CELLS {
        return Err(Error::Config(format!("fd-box needs >= {MIN_BOX_CELLS} cells per axis, got {cells_per_axis}")));
    }
    let (stiff, mass, h) = assemble_box(sides, cells_per_axis)?;
    let mut res = smallest_eigs(&stiff, &Mass::Diagonal(mass), k, DEFAULT_TOL)?;
    res.h = h;
    res.method = OracleMethod::FdBox;
    Ok(res)
}

/// Voxel grid of a 3D domain: kept voxel centres and the grid index map.
#[derive(Debug, Clone)]
pub struct VoxelGrid {
    pub h: f64,
    pub dims: [usize; 3],
    pub origin: [f64; 3],
    /// Voxel index -> unknown number.
    pub index: Vec<Option<usize>>,
    pub count: usize,
}

/// Voxelizes `d` with cubic voxels, `cells` along its longest extent, keeping
/// the largest face-connected component of voxels whose centre is inside.
pub fn voxelize(d: &DomainSpec, cells: usize) -> Result<VoxelGrid> {
    if d.dim() != 3 {
        return Err(Error::UnsupportedOracle(format!("voxel oracle needs n = 3, got {}", d.label())));
    }
    let (lo, hi) = d.bounding_box();
    let extent: Vec<f64> = (0..3).map(|i| hi[i] - lo[i]).collect();
    let h = extent.iter().cloned().fold(0.0, f64::max) / cells as f64;
    let dims = [0, 1, 2].map(|i| ((extent[i] / h) - 1e-9).ceil().max(1.0) as usize);
    let origin = [lo[0], lo[1], lo[2]];
    let total = dims[0] * dims[1] * dims[2];
    let mut inside = vec![false; total];
    let mut x = [0.0; 3];
    for k in 0..dims[2] {
        x[2] = origin[2] + (k as f64 + 0.5) * h;
        for j in 0..dims[1] {
            x[1] = origin[1] + (j as f64 + 0.5) * h;
            for i in 0..dims[0] {
                x[0] = origin[0] + (i as f64 + 0.5) * h;
                inside[i + dims[0] * (j + dims[1] * k)] = d.contains_unchecked(&x);
            }
        }
    }
    // largest face-connected component
    let mut label = vec![usize::MAX; total];
    let mut best = (0usize, usize::MAX);
    let mut queue = VecDeque::new();
    let mut comp = 0;
    for start in 0..total {
        if !inside[start] || label[start] != usize::MAX {
            continue;
        }
        let mut size = 0;
        label[start] = comp;
        queue.push_back(start);
        while let Some(v) = queue.pop_front() {
            size += 1;
            for w in neighbours(v, dims) {
                if inside[w] && label[w] == usize::MAX {
                    label[w] = comp;
                    queue.push_back(w);
                }
            }
        }
        if size > best.0 {
            best = (size, comp);
        }
        comp += 1;
    }
    let mut index = vec![None; total];
    let mut count = 0;
    for v in 0..total {
        if label[v] == best.1 && best.1 != usize::MAX {
            index[v] = Some(count);
            count += 1;
        }
    }
    if count < MIN_VOXELS {
        return Err(Error::UnderResolved { count });
    }
    Ok(VoxelGrid { h, dims, origin, index, count })
}

fn neighbours(v: usize, dims: [usize; 3]) -> impl Iterator<Item = usize> {
    let i = v % dims[0];
    let j = (v / dims[0]) % dims[1];
    let k = v / (dims[0] * dims[1]);
    let sx = 1;
    let sy = dims[0];
    let sz = dims[0] * dims[1];
    [
        (i > 0).then(|| v - sx),
        (i + 1 < dims[0]).then(|| v + sx),
        (j > 0).then(|| v - sy),
        (j + 1 < dims[1]).then(|| v + sy),
        (k > 0).then(|| v - sz),
        (k + 1 < dims[2]).then(|| v + sz),
    ]
    .into_iter()
    .flatten()
}

pub fn assemble_voxels(grid: &VoxelGrid) -> Result<(SparseSymmetric, Vec<f64>)> {
    let h = grid.h;
    let mut t = Vec::with_capacity(grid.count * 10);
    for (v, idx) in grid.index.iter().enumerate() {
        let Some(p) = *idx else { continue };
        for w in neighbours(v, grid.dims) {
            if w > v {
                if let Some(q) = grid.index[w] {
                    t.push((p, p, h));
                    t.push((q, q, h));
                    t.push((p, q, -h));
                }
            }
        }
    }
    let k = SparseSymmetric::from_triplets(grid.count, &t)?;
    Ok((k, vec![h * h * h; grid.count]))
}

/// Staircase finite differences on a voxelized 3D domain. Results are
/// marked indicative: the boundary is resolved to first order at best.
pub fn fd_voxel_3d(d: &DomainSpec, cells: usize, k: usize) -> Result<SpectrumResult> {
    if cells < MIN_VOXEL_CELLS {
        return Err(Error::Config(format!("voxel oracle needs >= {MIN_VOXEL_CELLS} cells, got {cells}")));
    }
    let grid = voxelize(d, cells)?;
    let (stiff, mass) = assemble_voxels(&grid)?;
    let mut res = smallest_eigs(&stiff, &Mass::Diagonal(mass), k, DEFAULT_TOL)?;
    res.h = grid.h;
    res.method = OracleMethod::FdVoxel3d;
    res.indicative = true;
    res.note = Some(format!("staircase boundary, {} voxels; indicative only", grid.count));
    Ok(res)
}
