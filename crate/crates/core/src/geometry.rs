//! Parametric domains and their exact geometric quantities.
//!
//! Every kind carries closed forms for volume and diameter. Membership is
//! strict-interior: points on the boundary are reported as outside.

use std::f64::consts::PI;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// A point in R^n. Plain coordinates; dimension checks happen at use sites.
pub type Point = Vec<f64>;

/// Seed used whenever a caller does not supply one.
pub const DEFAULT_SEED: u64 = 0x5eed_2017;

#[derive(Debug, Clone, PartialEq)]
pub enum DomainSpec {
    /// `(0, a_1) x ... x (0, a_n)`.
    Box { sides: Vec<f64> },
    /// Ball of the given radius centred at the origin.
    Ball { dim: usize, radius: f64 },
    /// Axis-aligned ellipsoid centred at the origin.
    Ellipsoid { semiaxes: Vec<f64> },
    /// `0 < x_n < 1, 0 < x_i < x_n`.
    SimplexH1 { dim: usize },
    /// `0 < x_n < 1, 0 < x_i < x_n^{g_i}`; the dimension is `exponents.len() + 1`.
    HolderCusp { exponents: Vec<f64> },
    /// Simple counterclockwise polygon.
    Polygon2D { vertices: Vec<[f64; 2]> },
}

/// Volume of the unit ball in R^n, by the recurrence `w_n = w_{n-2} 2 pi / n`.
pub fn unit_ball_volume(n: usize) -> f64 {
    match n {
        0 => 1.0,
        1 => 2.0,
        2 => PI,
        _ => unit_ball_volume(n - 2) * 2.0 * PI / n as f64,
    }
}

fn positive_all(values: &[f64], what: &str) -> Result<()> {
    if values.iter().all(|v| v.is_finite() && *v > 0.0) {
        Ok(())
    } else {
        Err(Error::InvalidDomain(format!("{what} must be finite and > 0")))
    }
}

impl DomainSpec {
    pub fn unit_box(dim: usize) -> Result<Self> {
        Self::new_box(vec![1.0; dim])
    }

    pub fn new_box(sides: Vec<f64>) -> Result<Self> {
        let d = DomainSpec::Box { sides };
        d.validate()?;
        Ok(d)
    }

    pub fn ball(dim: usize, radius: f64) -> Result<Self> {
        let d = DomainSpec::Ball { dim, radius };
        d.validate()?;
        Ok(d)
    }

    pub fn ellipsoid(semiaxes: Vec<f64>) -> Result<Self> {
        let d = DomainSpec::Ellipsoid { semiaxes };
        d.validate()?;
        Ok(d)
    }

    pub fn simplex(dim: usize) -> Result<Self> {
        let d = DomainSpec::SimplexH1 { dim };
        d.validate()?;
        Ok(d)
    }

    pub fn holder_cusp(exponents: Vec<f64>) -> Result<Self> {
        let d = DomainSpec::HolderCusp { exponents };
        d.validate()?;
        Ok(d)
    }

    pub fn polygon(vertices: Vec<[f64; 2]>) -> Result<Self> {
        let d = DomainSpec::Polygon2D { vertices };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            DomainSpec::Box { sides } => {
                check_dim(sides.len())?;
                positive_all(sides, "box sides")
            }
            DomainSpec::Ball { dim, radius } => {
                check_dim(*dim)?;
                positive_all(&[*radius], "ball radius")
            }
            DomainSpec::Ellipsoid { semiaxes } => {
                check_dim(semiaxes.len())?;
                positive_all(semiaxes, "ellipsoid semiaxes")
            }
            DomainSpec::SimplexH1 { dim } => check_dim(*dim),
            DomainSpec::HolderCusp { exponents } => {
                check_dim(exponents.len() + 1)?;
                if exponents.iter().all(|g| g.is_finite() && *g >= 1.0) {
                    Ok(())
                } else {
                    Err(Error::InvalidDomain("cusp exponents must be >= 1".into()))
                }
            }
            DomainSpec::Polygon2D { vertices } => validate_polygon(vertices),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            DomainSpec::Box { sides } => sides.len(),
            DomainSpec::Ball { dim, .. } => *dim,
            DomainSpec::Ellipsoid { semiaxes } => semiaxes.len(),
            DomainSpec::SimplexH1 { dim } => *dim,
            DomainSpec::HolderCusp { exponents } => exponents.len() + 1,
            DomainSpec::Polygon2D { .. } => 2,
        }
    }

    /// `gamma = 1 + sum g_i` for cusps (equals `n` for the simplex).
    pub fn cusp_gamma(&self) -> Option<f64> {
        match self {
            DomainSpec::HolderCusp { exponents } => Some(1.0 + exponents.iter().sum::<f64>()),
            DomainSpec::SimplexH1 { dim } => Some(*dim as f64),
            _ => None,
        }
    }

    pub fn volume(&self) -> f64 {
        match self {
            DomainSpec::Box { sides } => sides.iter().product(),
            DomainSpec::Ball { dim, radius } => unit_ball_volume(*dim) * radius.powi(*dim as i32),
            DomainSpec::Ellipsoid { semiaxes } => unit_ball_volume(semiaxes.len()) * semiaxes.iter().product::<f64>(),
            DomainSpec::SimplexH1 { dim } => 1.0 / *dim as f64,
            DomainSpec::HolderCusp { .. } => 1.0 / self.cusp_gamma().unwrap(),
            DomainSpec::Polygon2D { vertices } => shoelace(vertices),
        }
    }

    pub fn diameter(&self) -> f64 {
        match self {
            DomainSpec::Box { sides } => sides.iter().map(|a| a * a).sum::<f64>().sqrt(),
            DomainSpec::Ball { radius, .. } => 2.0 * radius,
            DomainSpec::Ellipsoid { semiaxes } => 2.0 * semiaxes.iter().cloned().fold(0.0, f64::max),
            // The closure contains 0 and (1, ..., 1) and lies in the unit cube.
            DomainSpec::SimplexH1 { dim } => (*dim as f64).sqrt(),
            DomainSpec::HolderCusp { exponents } => ((exponents.len() + 1) as f64).sqrt(),
            DomainSpec::Polygon2D { vertices } => {
                let mut best: f64 = 0.0;
                for (i, p) in vertices.iter().enumerate() {
                    for q in &vertices[i + 1..] {
                        best = best.max(((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)).sqrt());
                    }
                }
                best
            }
        }
    }

    /// Radius of the ball with the same volume.
    pub fn equal_volume_ball_radius(&self) -> f64 {
        if let DomainSpec::Ball { radius, .. } = self {
            return *radius;
        }
        let n = self.dim();
        (self.volume() / unit_ball_volume(n)).powf(1.0 / n as f64)
    }

    pub fn is_convex(&self) -> bool {
        match self {
            DomainSpec::HolderCusp { exponents } => exponents.iter().all(|g| *g == 1.0),
            DomainSpec::Polygon2D { vertices } => polygon_is_convex(vertices),
            _ => true,
        }
    }

    /// Axis-aligned bounding box `(lo, hi)` of the closure.
    pub fn bounding_box(&self) -> (Point, Point) {
        let n = self.dim();
        match self {
            DomainSpec::Box { sides } => (vec![0.0; n], sides.clone()),
            DomainSpec::Ball { radius, .. } => (vec![-radius; n], vec![*radius; n]),
            DomainSpec::Ellipsoid { semiaxes } => (semiaxes.iter().map(|a| -a).collect(), semiaxes.clone()),
            DomainSpec::SimplexH1 { .. } | DomainSpec::HolderCusp { .. } => (vec![0.0; n], vec![1.0; n]),
            DomainSpec::Polygon2D { vertices } => {
                let mut lo = vec![f64::INFINITY; 2];
                let mut hi = vec![f64::NEG_INFINITY; 2];
                for v in vertices {
                    for k in 0..2 {
                        lo[k] = lo[k].min(v[k]);
                        hi[k] = hi[k].max(v[k]);
                    }
                }
                (lo, hi)
            }
        }
    }

    /// Strict-interior membership.
    pub fn contains(&self, x: &[f64]) -> Result<bool> {
        let n = self.dim();
        if x.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: x.len() });
        }
        Ok(self.contains_unchecked(x))
    }

    pub(crate) fn contains_unchecked(&self, x: &[f64]) -> bool {
        match self {
            DomainSpec::Box { sides } => x.iter().zip(sides).all(|(xi, a)| *xi > 0.0 && xi < a),
            DomainSpec::Ball { radius, .. } => x.iter().map(|v| v * v).sum::<f64>() < radius * radius,
            DomainSpec::Ellipsoid { semiaxes } => {
                x.iter().zip(semiaxes).map(|(v, a)| (v / a).powi(2)).sum::<f64>() < 1.0
            }
            DomainSpec::SimplexH1 { .. } => {
                let xn = x[x.len() - 1];
                xn > 0.0 && xn < 1.0 && x[..x.len() - 1].iter().all(|xi| *xi > 0.0 && *xi < xn)
            }
            DomainSpec::HolderCusp { exponents } => {
                let xn = x[x.len() - 1];
                xn > 0.0
                    && xn < 1.0
                    && x[..x.len() - 1].iter().zip(exponents).all(|(xi, g)| *xi > 0.0 && *xi < xn.powf(*g))
            }
            DomainSpec::Polygon2D { vertices } => polygon_contains(vertices, [x[0], x[1]]),
        }
    }

    /// Deterministic stratified interior points; at least `density` of them.
    pub fn sample_points(&self, density: usize) -> Vec<Point> {
        self.sample_points_seeded(density, None)
    }

    /// Like [`sample_points`](Self::sample_points); with a seed, each point is
    /// jittered uniformly inside its stratum instead of sitting at its centre.
    pub fn sample_points_seeded(&self, density: usize, seed: Option<u64>) -> Vec<Point> {
        let density = density.max(1);
        let n = self.dim();
        let mut rng = seed.map(ChaCha8Rng::seed_from_u64);
        let offset = |rng: &mut Option<ChaCha8Rng>| match rng {
            Some(r) => r.random_range(0.05..0.95),
            None => 0.5,
        };
        match self {
            DomainSpec::Box { sides } => grid_indices(n, density)
                .map(|idx| {
                    idx.iter().zip(sides).map(|(&i, a)| (i as f64 + offset(&mut rng)) / density as f64 * a).collect()
                })
                .collect(),
            DomainSpec::SimplexH1 { .. } | DomainSpec::HolderCusp { .. } => {
                let exps = self.cusp_exponents();
                let mut pts: Vec<Point> = grid_indices(n, density)
                    .map(|idx| {
                        let u: Vec<f64> = idx.iter().map(|&i| (i as f64 + offset(&mut rng)) / density as f64).collect();
                        cusp_param_point(&u, &exps)
                    })
                    .collect();
                // Probe the tip: x_n small enough that |x| < 1/density.
                let tip = 1.0 / (density as f64 * (n as f64 + 1.0));
                for j in 0..5 {
                    let xn = tip * 0.5f64.powi(j);
                    let mut u = vec![0.5; n];
                    u[n - 1] = xn;
                    pts.push(cusp_param_point(&u, &exps));
                }
                pts.retain(|p| self.contains_unchecked(p));
                pts
            }
            _ => {
                let (lo, hi) = self.bounding_box();
                let mut m = density;
                loop {
                    let pts: Vec<Point> = grid_indices(n, m)
                        .map(|idx| {
                            idx.iter()
                                .enumerate()
                                .map(|(k, &i)| lo[k] + (i as f64 + offset(&mut rng)) / m as f64 * (hi[k] - lo[k]))
                                .collect::<Point>()
                        })
                        .filter(|p| self.contains_unchecked(p))
                        .collect();
                    if pts.len() >= density {
                        return pts;
                    }
                    m *= 2;
                }
            }
        }
    }

    fn cusp_exponents(&self) -> Vec<f64> {
        match self {
            DomainSpec::HolderCusp { exponents } => exponents.clone(),
            DomainSpec::SimplexH1 { dim } => vec![1.0; dim - 1],
            _ => Vec::new(),
        }
    }

    /// Short comma-free identifier used in certificates and CSV rows.
    pub fn label(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for DomainSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[f64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(";");
        match self {
            DomainSpec::Box { sides } => write!(f, "box[{}]", join(sides)),
            DomainSpec::Ball { dim, radius } => write!(f, "ball[n={dim};R={radius}]"),
            DomainSpec::Ellipsoid { semiaxes } => write!(f, "ellipsoid[{}]", join(semiaxes)),
            DomainSpec::SimplexH1 { dim } => write!(f, "simplex[n={dim}]"),
            DomainSpec::HolderCusp { exponents } => write!(f, "holder-cusp[{}]", join(exponents)),
            DomainSpec::Polygon2D { vertices } => write!(f, "polygon[{} vertices]", vertices.len()),
        }
    }
}

fn check_dim(n: usize) -> Result<()> {
    if n >= 2 {
        Ok(())
    } else {
        Err(Error::InvalidDomain(format!("dimension must be >= 2, got {n}")))
    }
}

fn cusp_param_point(u: &[f64], exps: &[f64]) -> Point {
    let n = u.len();
    let xn = u[n - 1];
    let mut x: Point = exps.iter().zip(u).map(|(g, ui)| ui * xn.powf(*g)).collect();
    x.push(xn);
    x
}

/// All multi-indices in `{0..m}^n`, last axis fastest.
fn grid_indices(n: usize, m: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = m.pow(n as u32);
    (0..total).map(move |mut flat| {
        let mut idx = vec![0; n];
        for k in (0..n).rev() {
            idx[k] = flat % m;
            flat /= m;
        }
        idx
    })
}

fn shoelace(v: &[[f64; 2]]) -> f64 {
    let n = v.len();
    0.5 * (0..n)
        .map(|i| {
            let (p, q) = (v[i], v[(i + 1) % n]);
            p[0] * q[1] - q[0] * p[1]
        })
        .sum::<f64>()
}

fn cross(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

fn segments_intersect(p1: [f64; 2], p2: [f64; 2], q1: [f64; 2], q2: [f64; 2]) -> bool {
    let d1 = cross(q1, q2, p1);
    let d2 = cross(q1, q2, p2);
    let d3 = cross(p1, p2, q1);
    let d4 = cross(p1, p2, q2);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0)) {
        return true;
    }
    let on = |a: [f64; 2], b: [f64; 2], c: [f64; 2], d: f64| {
        d == 0.0 && c[0] >= a[0].min(b[0]) && c[0] <= a[0].max(b[0]) && c[1] >= a[1].min(b[1]) && c[1] <= a[1].max(b[1])
    };
    on(q1, q2, p1, d1) || on(q1, q2, p2, d2) || on(p1, p2, q1, d3) || on(p1, p2, q2, d4)
}

fn validate_polygon(v: &[[f64; 2]]) -> Result<()> {
    if v.len() < 3 {
        return Err(Error::InvalidDomain("polygon needs at least 3 vertices".into()));
    }
    if v.iter().flatten().any(|c| !c.is_finite()) {
        return Err(Error::InvalidDomain("polygon vertices must be finite".into()));
    }
    let n = v.len();
    for i in 0..n {
        for j in i + 1..n {
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            if adjacent {
                continue;
            }
            if segments_intersect(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n]) {
                return Err(Error::InvalidDomain(format!("polygon edges {i} and {j} intersect")));
            }
        }
    }
    if shoelace(v) <= 0.0 {
        return Err(Error::InvalidDomain("polygon must be counterclockwise".into()));
    }
    Ok(())
}

fn polygon_is_convex(v: &[[f64; 2]]) -> bool {
    let n = v.len();
    (0..n).all(|i| cross(v[i], v[(i + 1) % n], v[(i + 2) % n]) >= 0.0)
}

fn polygon_contains(v: &[[f64; 2]], p: [f64; 2]) -> bool {
    let n = v.len();
    let scale = v.iter().flatten().fold(0.0f64, |m, c| m.max(c.abs())).max(1.0);
    for i in 0..n {
        let (a, b) = (v[i], v[(i + 1) % n]);
        let len = ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt();
        let within = p[0] >= a[0].min(b[0]) - 1e-14 * scale
            && p[0] <= a[0].max(b[0]) + 1e-14 * scale
            && p[1] >= a[1].min(b[1]) - 1e-14 * scale
            && p[1] <= a[1].max(b[1]) + 1e-14 * scale;
        if within && (cross(a, b, p) / len).abs() <= 1e-14 * scale {
            return false;
        }
    }
    let mut inside = false;
    for i in 0..n {
        let (a, b) = (v[i], v[(i + 1) % n]);
        if (a[1] > p[1]) != (b[1] > p[1]) {
            let x = a[0] + (p[1] - a[1]) / (b[1] - a[1]) * (b[0] - a[0]);
            if p[0] < x {
                inside = !inside;
            }
        }
    }
    inside
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::SQRT_2;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn volumes() {
        assert!(close(DomainSpec::simplex(3).unwrap().volume(), 1.0 / 3.0, 1e-15));
        assert!(close(DomainSpec::ball(3, 1.0).unwrap().volume(), 4.0 * PI / 3.0, 1e-15));
        assert!(close(DomainSpec::holder_cusp(vec![2.0, 2.0]).unwrap().volume(), 0.2, 1e-15));
        let sq = DomainSpec::polygon(vec![[0.0, 0.0], [2.0, 0.0], [2.0, 1.0], [0.0, 1.0]]).unwrap();
        assert!(close(sq.volume(), 2.0, 1e-15));
    }

    #[test]
    fn diameters() {
        assert!(close(DomainSpec::new_box(vec![2.0, 1.0]).unwrap().diameter(), 5f64.sqrt(), 1e-15));
        assert!(close(DomainSpec::ellipsoid(vec![2.0, 1.0, 1.0]).unwrap().diameter(), 4.0, 1e-15));
        assert!(close(DomainSpec::simplex(3).unwrap().diameter(), 3f64.sqrt(), 1e-15));
    }

    #[test]
    fn simplex_diameter_by_dense_sampling() {
        // Max pairwise distance over the closure's vertex set {0, e-combos}: the
        // simplex closure is the convex hull of (0..0,0) and points with x_n = 1.
        let n = 3;
        let mut verts = vec![vec![0.0; n]];
        for mask in 0..(1 << (n - 1)) {
            let mut v = vec![0.0; n];
            for (i, vi) in v.iter_mut().enumerate().take(n - 1) {
                *vi = ((mask >> i) & 1) as f64;
            }
            v[n - 1] = 1.0;
            verts.push(v);
        }
        let mut best: f64 = 0.0;
        for a in &verts {
            for b in &verts {
                best = best.max(a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt());
            }
        }
        assert!(close(best, DomainSpec::simplex(3).unwrap().diameter(), 1e-15));
        let pts = DomainSpec::simplex(3).unwrap().sample_points(12);
        let mut sampled: f64 = 0.0;
        for a in &pts {
            for b in &pts {
                sampled = sampled.max(a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt());
            }
        }
        assert!(sampled < 3f64.sqrt() && sampled > 0.9 * 3f64.sqrt());
    }

    #[test]
    fn equal_volume_radius() {
        assert_eq!(DomainSpec::ball(2, 1.0).unwrap().equal_volume_ball_radius(), 1.0);
        assert!(close(DomainSpec::ellipsoid(vec![2.0, 1.0]).unwrap().equal_volume_ball_radius(), SQRT_2, 1e-15));
        assert!(close(DomainSpec::unit_box(2).unwrap().equal_volume_ball_radius(), 1.0 / PI.sqrt(), 1e-15));
    }

    #[test]
    fn ball_volume_recurrence() {
        assert_eq!(unit_ball_volume(2), PI);
        assert!(close(unit_ball_volume(3), 4.0 * PI / 3.0, 1e-15));
        assert!(close(unit_ball_volume(4), PI * PI / 2.0, 1e-15));
    }

    #[test]
    fn membership() {
        let cusp = DomainSpec::holder_cusp(vec![2.0, 2.0]).unwrap();
        assert!(cusp.contains(&[0.2, 0.2, 0.5]).unwrap());
        assert!(!cusp.contains(&[0.3, 0.2, 0.5]).unwrap());
        assert!(DomainSpec::ball(2, 1.0).unwrap().contains(&[0.0, 0.0]).unwrap());
        assert!(matches!(cusp.contains(&[0.1, 0.1]), Err(Error::DimensionMismatch { expected: 3, found: 2 })));
        // boundary points are outside
        assert!(!DomainSpec::unit_box(2).unwrap().contains(&[0.0, 0.5]).unwrap());
        let sq = DomainSpec::polygon(vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]).unwrap();
        assert!(!sq.contains(&[1.0, 0.5]).unwrap());
        assert!(sq.contains(&[0.5, 0.5]).unwrap());
    }

    #[test]
    fn sampling() {
        let pts = DomainSpec::unit_box(2).unwrap().sample_points(4);
        assert_eq!(pts.len(), 16);
        let cusp = DomainSpec::holder_cusp(vec![2.0, 2.0]).unwrap();
        let pts = cusp.sample_points(10);
        assert!(pts.len() >= 10);
        assert!(pts.iter().all(|p| cusp.contains(p).unwrap()));
        assert!(pts.iter().any(|p| p.iter().map(|c| c * c).sum::<f64>().sqrt() < 0.1));
        let ball = DomainSpec::ball(2, 1.0).unwrap();
        let pts = ball.sample_points(10);
        assert!(pts.len() >= 10 && pts.iter().all(|p| p[0].hypot(p[1]) < 1.0));
        let jittered = cusp.sample_points_seeded(6, Some(7));
        assert_eq!(jittered, cusp.sample_points_seeded(6, Some(7)));
        assert!(jittered.iter().all(|p| cusp.contains(p).unwrap()));
    }

    #[test]
    fn invalid_descriptors() {
        assert!(DomainSpec::new_box(vec![1.0, 0.0]).is_err());
        assert!(DomainSpec::holder_cusp(vec![0.5, 1.0]).is_err());
        assert!(DomainSpec::simplex(1).is_err());
        // bow-tie
        assert!(DomainSpec::polygon(vec![[0.0, 0.0], [1.0, 1.0], [1.0, 0.0], [0.0, 1.0]]).is_err());
        // clockwise
        assert!(DomainSpec::polygon(vec![[0.0, 0.0], [0.0, 1.0], [1.0, 1.0], [1.0, 0.0]]).is_err());
    }

    #[test]
    fn convexity() {
        assert!(!DomainSpec::holder_cusp(vec![2.0, 2.0]).unwrap().is_convex());
        assert!(DomainSpec::holder_cusp(vec![1.0, 1.0]).unwrap().is_convex());
        let l =
            DomainSpec::polygon(vec![[0.0, 0.0], [2.0, 0.0], [2.0, 1.0], [1.0, 1.0], [1.0, 2.0], [0.0, 2.0]]).unwrap();
        assert!(!l.is_convex());
        assert!(close(l.volume(), 3.0, 1e-15));
    }
}
