//! Planar triangle meshes: structured ring discs and refined polygons.

use std::collections::HashMap;
use std::f64::consts::PI;

use crate::error::{Error, Result};

pub const MAX_ASPECT: f64 = 1e6;

#[derive(Debug, Clone)]
pub struct TriMesh {
    pub nodes: Vec<[f64; 2]>,
    /// Counter-clockwise vertex triples.
    pub triangles: Vec<[usize; 3]>,
}

fn signed_area(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]))
}

fn dist2(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)
}

impl TriMesh {
    /// Disc of radius `radius`: ring `i` of `rings` carries `6 i` nodes.
    pub fn disc(radius: f64, rings: usize) -> Self {
        let mut nodes = vec![[0.0, 0.0]];
        let mut ring_start = vec![0usize];
        for i in 1..=rings {
            ring_start.push(nodes.len());
            let m = 6 * i;
            let r = radius * i as f64 / rings as f64;
            for j in 0..m {
                let t = 2.0 * PI * j as f64 / m as f64;
                nodes.push([r * t.cos(), r * t.sin()]);
            }
        }
        let mut triangles = Vec::new();
        for j in 0..6 {
            triangles.push([0, ring_start[1] + j, ring_start[1] + (j + 1) % 6]);
        }
        for i in 2..=rings {
            let (mi, mo) = (6 * (i - 1), 6 * i);
            let (si, so) = (ring_start[i - 1], ring_start[i]);
            let (mut a, mut b) = (0, 0);
            while a < mi || b < mo {
                let inner_next = (a + 1) as f64 / mi as f64;
                let outer_next = (b + 1) as f64 / mo as f64;
                if b == mo || (a < mi && inner_next < outer_next) {
                    triangles.push([si + a % mi, so + b % mo, si + (a + 1) % mi]);
                    a += 1;
                } else {
                    triangles.push([si + a % mi, so + b % mo, so + (b + 1) % mo]);
                    b += 1;
                }
            }
        }
        let mut mesh = Self { nodes, triangles };
        mesh.orient();
        mesh
    }

    /// Applies `x -> diag(a, b) x`.
    pub fn map_diagonal(&mut self, a: f64, b: f64) {
        for p in &mut self.nodes {
            p[0] *= a;
            p[1] *= b;
        }
        self.orient();
    }

    fn orient(&mut self) {
        for t in &mut self.triangles {
            if signed_area(self.nodes[t[0]], self.nodes[t[1]], self.nodes[t[2]]) < 0.0 {
                t.swap(1, 2);
            }
        }
    }

    /// Ear-clipping triangulation of a simple CCW polygon, refined uniformly
    /// (each triangle split into four) until every edge is at most `h`.
    pub fn polygon(vertices: &[[f64; 2]], h: f64) -> Result<Self> {
        let n = vertices.len();
        let mut idx: Vec<usize> = (0..n).collect();
        let mut triangles = Vec::new();
        let mut guard = 0;
        while idx.len() > 3 {
            let m = idx.len();
            let mut clipped = false;
            for k in 0..m {
                let (ia, ib, ic) = (idx[(k + m - 1) % m], idx[k], idx[(k + 1) % m]);
                let (a, b, c) = (vertices[ia], vertices[ib], vertices[ic]);
                if signed_area(a, b, c) <= 0.0 {
                    continue;
                }
                let blocked = idx.iter().any(|&j| {
                    j != ia && j != ib && j != ic && {
                        let p = vertices[j];
                        signed_area(a, b, p) >= 0.0 && signed_area(b, c, p) >= 0.0 && signed_area(c, a, p) >= 0.0
                    }
                });
                if !blocked {
                    triangles.push([ia, ib, ic]);
                    idx.remove(k);
                    clipped = true;
                    break;
                }
            }
            guard += 1;
            if !clipped || guard > 10 * n {
                return Err(Error::InvalidDomain("ear clipping failed; polygon not simple".into()));
            }
        }
        triangles.push([idx[0], idx[1], idx[2]]);
        let mut mesh = Self { nodes: vertices.to_vec(), triangles };
        while mesh.max_edge() > h {
            mesh = mesh.refine();
        }
        Ok(mesh)
    }

    /// Red refinement: every triangle into four similar ones.
    pub fn refine(&self) -> Self {
        let mut nodes = self.nodes.clone();
        let mut mids: HashMap<(usize, usize), usize> = HashMap::new();
        let mut mid = |a: usize, b: usize, nodes: &mut Vec<[f64; 2]>| {
            let key = (a.min(b), a.max(b));
            *mids.entry(key).or_insert_with(|| {
                let (p, q) = (nodes[a], nodes[b]);
                nodes.push([0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])]);
                nodes.len() - 1
            })
        };
        let mut triangles = Vec::with_capacity(4 * self.triangles.len());
        for &[a, b, c] in &self.triangles {
            let ab = mid(a, b, &mut nodes);
            let bc = mid(b, c, &mut nodes);
            let ca = mid(c, a, &mut nodes);
            triangles.extend([[a, ab, ca], [ab, b, bc], [ca, bc, c], [ab, bc, ca]]);
        }
        Self { nodes, triangles }
    }

    pub fn max_edge(&self) -> f64 {
        self.triangles
            .iter()
            .flat_map(|t| [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])])
            .map(|(a, b)| dist2(self.nodes[a], self.nodes[b]))
            .fold(0.0, f64::max)
            .sqrt()
    }

    pub fn area(&self) -> f64 {
        self.triangles.iter().map(|t| signed_area(self.nodes[t[0]], self.nodes[t[1]], self.nodes[t[2]])).sum()
    }

    /// Longest edge squared over twice the area, scaled so an equilateral
    /// triangle scores 1.
    pub fn aspect(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangles[t].map(|i| self.nodes[i]);
        let area = signed_area(a, b, c);
        let l2 = dist2(a, b).max(dist2(b, c)).max(dist2(c, a));
        if area <= 0.0 {
            return f64::INFINITY;
        }
        l2 * 3f64.sqrt() / (4.0 * area)
    }

    pub fn check_quality(&self) -> Result<()> {
        for t in 0..self.triangles.len() {
            let aspect = self.aspect(t);
            if !(aspect <= MAX_ASPECT) {
                return Err(Error::DegenerateTriangle { index: t, aspect });
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disc_mesh_is_valid() {
        let m = TriMesh::disc(1.0, 8);
        assert_eq!(m.nodes.len(), 1 + 3 * 8 * 9);
        // each ring band has 6(2i-1) triangles
        assert_eq!(m.triangles.len(), 6 * 64);
        m.check_quality().unwrap();
        let inscribed = 0.5 * 48.0 * (2.0 * PI / 48.0).sin();
        assert!((m.area() - inscribed).abs() < 1e-12);
        let worst = (0..m.triangles.len()).map(|t| m.aspect(t)).fold(0.0, f64::max);
        assert!(worst < 4.0, "{worst}");
    }

    #[test]
    fn polygon_mesh_area() {
        let l = [[0.0, 0.0], [2.0, 0.0], [2.0, 1.0], [1.0, 1.0], [1.0, 2.0], [0.0, 2.0]];
        let m = TriMesh::polygon(&l, 0.1).unwrap();
        assert!((m.area() - 3.0).abs() < 1e-12);
        assert!(m.max_edge() <= 0.1);
        m.check_quality().unwrap();
    }

    #[test]
    fn degenerate_triangle_detected() {
        let m = TriMesh { nodes: vec![[0.0, 0.0], [1.0, 0.0], [0.5, 1e-9]], triangles: vec![[0, 1, 2]] };
        assert!(matches!(m.check_quality(), Err(Error::DegenerateTriangle { .. })));
    }
}
