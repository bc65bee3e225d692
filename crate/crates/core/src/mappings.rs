//! Mapping families with analytic differentials and p-dilatation constants.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{DomainSpec, Point};

#[derive(Debug, Clone, PartialEq)]
pub enum MappingSpec {
    Identity {
        dim: usize,
    },
    /// `x -> diag(a_1, ..., a_n) x`.
    DiagonalLinear {
        coefficients: Vec<f64>,
    },
    /// The simplex-to-cusp map
    /// `x -> (x_1 x_n^{a g_1 - 1}, ..., x_{n-1} x_n^{a g_{n-1} - 1}, x_n^a)`.
    CuspMap {
        a: f64,
        exponents: Vec<f64>,
    },
}

#[derive(Debug, Clone)]
pub struct DifferentialData {
    pub matrix: DMatrix<f64>,
    pub det: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixNorm {
    Spectral,
    Frobenius,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DilatationMethod {
    Analytic,
    SampledSup,
    /// The unexpanded-sum defect and the missing `a^{-1/p}` factor reproduced as printed.
    PrintedVariant,
}

impl DilatationMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            DilatationMethod::Analytic => "analytic",
            DilatationMethod::SampledSup => "sampled-sup",
            DilatationMethod::PrintedVariant => "printed-variant",
        }
    }
}

#[derive(Debug, Clone)]
pub struct DilatationReport {
    pub p: f64,
    /// Upper bound for `K_p` (exact for linear maps).
    pub value: f64,
    /// `K_p^p`, computed without taking the root so that products cancel exactly.
    pub value_pow_p: f64,
    pub method: DilatationMethod,
    pub witness: Option<Point>,
    /// Largest pointwise dilatation actually observed.
    pub lower_witness_value: f64,
    pub evaluations: usize,
}

/// Admissible interval `(lower, upper]` for the cusp exponent `a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdmissibleRange {
    pub lower: f64,
    pub upper: f64,
}

impl AdmissibleRange {
    pub fn is_empty(&self) -> bool {
        self.lower >= self.upper
    }

    pub fn contains(&self, a: f64) -> bool {
        a > self.lower && a <= self.upper
    }
}

const SUP_BUDGET: usize = 100_000;
const SUP_ROUNDS: usize = 3;
const SUP_REFINE: usize = 4;

impl MappingSpec {
    pub fn identity(dim: usize) -> Result<Self> {
        let m = MappingSpec::Identity { dim };
        m.validate()?;
        Ok(m)
    }

    pub fn diagonal(coefficients: Vec<f64>) -> Result<Self> {
        let m = MappingSpec::DiagonalLinear { coefficients };
        m.validate()?;
        Ok(m)
    }

    pub fn cusp(a: f64, exponents: Vec<f64>) -> Result<Self> {
        let m = MappingSpec::CuspMap { a, exponents };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            MappingSpec::Identity { dim } if *dim >= 1 => Ok(()),
            MappingSpec::Identity { .. } => Err(Error::InvalidMapping("dimension must be >= 1".into())),
            MappingSpec::DiagonalLinear { coefficients } => {
                if !coefficients.is_empty() && coefficients.iter().all(|a| a.is_finite() && *a > 0.0) {
                    Ok(())
                } else {
                    Err(Error::InvalidMapping("diagonal coefficients must be finite and > 0".into()))
                }
            }
            MappingSpec::CuspMap { a, exponents } => {
                if !(a.is_finite() && *a > 0.0) {
                    return Err(Error::InvalidMapping(format!("cusp exponent a must be > 0, got {a}")));
                }
                if exponents.is_empty() || exponents.iter().any(|g| !g.is_finite() || *g < 1.0) {
                    return Err(Error::InvalidMapping("cusp exponents must be >= 1".into()));
                }
                Ok(())
            }
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            MappingSpec::Identity { dim } => *dim,
            MappingSpec::DiagonalLinear { coefficients } => coefficients.len(),
            MappingSpec::CuspMap { exponents, .. } => exponents.len() + 1,
        }
    }

    pub fn label(&self) -> String {
        let join = |v: &[f64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(";");
        match self {
            MappingSpec::Identity { dim } => format!("identity[n={dim}]"),
            MappingSpec::DiagonalLinear { coefficients } => format!("diagonal[{}]", join(coefficients)),
            MappingSpec::CuspMap { a, exponents } => format!("cusp-map[a={a};g={}]", join(exponents)),
        }
    }

    /// Checks that `d` is a valid source domain for this mapping.
    pub fn check_source(&self, d: &DomainSpec) -> Result<()> {
        if d.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: d.dim() });
        }
        match (self, d) {
            (MappingSpec::CuspMap { .. }, DomainSpec::SimplexH1 { .. }) => Ok(()),
            (MappingSpec::CuspMap { .. }, _) => {
                Err(Error::InvalidMapping(format!("the cusp map is defined on the simplex, not on {d}")))
            }
            _ => Ok(()),
        }
    }

    /// The image domain, when it belongs to one of the parametric kinds.
    pub fn image(&self, d: &DomainSpec) -> Result<DomainSpec> {
        self.check_source(d)?;
        match (self, d) {
            (MappingSpec::Identity { .. }, _) => Ok(d.clone()),
            (MappingSpec::DiagonalLinear { coefficients: c }, DomainSpec::Box { sides }) => {
                DomainSpec::new_box(sides.iter().zip(c).map(|(s, a)| s * a).collect())
            }
            (MappingSpec::DiagonalLinear { coefficients: c }, DomainSpec::Ball { radius, .. }) => {
                DomainSpec::ellipsoid(c.iter().map(|a| a * radius).collect())
            }
            (MappingSpec::DiagonalLinear { coefficients: c }, DomainSpec::Ellipsoid { semiaxes }) => {
                DomainSpec::ellipsoid(semiaxes.iter().zip(c).map(|(s, a)| s * a).collect())
            }
            (MappingSpec::DiagonalLinear { coefficients: c }, DomainSpec::Polygon2D { vertices }) => {
                DomainSpec::polygon(vertices.iter().map(|v| [v[0] * c[0], v[1] * c[1]]).collect())
            }
            (MappingSpec::CuspMap { exponents, .. }, DomainSpec::SimplexH1 { .. }) => {
                DomainSpec::holder_cusp(exponents.clone())
            }
            _ => Err(Error::InvalidMapping(format!("image of {d} under {} is not a parametric domain", self.label()))),
        }
    }

    /// Maps a point forward.
    pub fn apply(&self, x: &[f64]) -> Result<Point> {
        self.check_point(x)?;
        Ok(match self {
            MappingSpec::Identity { .. } => x.to_vec(),
            MappingSpec::DiagonalLinear { coefficients } => x.iter().zip(coefficients).map(|(xi, a)| xi * a).collect(),
            MappingSpec::CuspMap { a, exponents } => {
                let xn = x[x.len() - 1];
                let mut y: Point = exponents.iter().zip(x).map(|(g, xi)| xi * xn.powf(a * g - 1.0)).collect();
                y.push(xn.powf(*a));
                y
            }
        })
    }

    fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: x.len() });
        }
        if let MappingSpec::CuspMap { .. } = self {
            if x[x.len() - 1] <= 0.0 {
                return Err(Error::SingularPoint(format!(
                    "cusp map differential is singular at x_n = {}",
                    x[x.len() - 1]
                )));
            }
        }
        Ok(())
    }

    /// Exact Jacobi matrix and Jacobian determinant at `x`.
    pub fn differential(&self, x: &[f64]) -> Result<DifferentialData> {
        self.check_point(x)?;
        let n = self.dim();
        Ok(match self {
            MappingSpec::Identity { .. } => DifferentialData { matrix: DMatrix::identity(n, n), det: 1.0 },
            MappingSpec::DiagonalLinear { coefficients } => DifferentialData {
                matrix: DMatrix::from_diagonal(&DVector::from_column_slice(coefficients)),
                det: coefficients.iter().product(),
            },
            MappingSpec::CuspMap { a, exponents } => {
                let xn = x[n - 1];
                let mut m = DMatrix::zeros(n, n);
                for (i, g) in exponents.iter().enumerate() {
                    let ag = a * g;
                    m[(i, i)] = xn.powf(ag - 1.0);
                    m[(i, n - 1)] = (ag - 1.0) * x[i] * xn.powf(ag - 2.0);
                }
                m[(n - 1, n - 1)] = a * xn.powf(a - 1.0);
                let gamma = 1.0 + exponents.iter().sum::<f64>();
                DifferentialData { matrix: m, det: a * xn.powf(a * gamma - n as f64) }
            }
        })
    }

    /// `(|D phi(x)|^p / |J(x, phi)|)^{1/p}` with the spectral norm.
    pub fn pointwise_dilatation(&self, x: &[f64], p: f64) -> Result<f64> {
        self.pointwise_dilatation_with(x, p, MatrixNorm::Spectral)
    }

    pub fn pointwise_dilatation_with(&self, x: &[f64], p: f64, norm: MatrixNorm) -> Result<f64> {
        check_p(p)?;
        let d = self.differential(x)?;
        let dn = match norm {
            MatrixNorm::Spectral => operator_norm(&d.matrix)?,
            MatrixNorm::Frobenius => d.matrix.norm(),
        };
        let j = d.det.abs();
        if j == 0.0 {
            // finite-distortion convention
            return Ok(if dn == 0.0 { 0.0 } else { f64::INFINITY });
        }
        Ok((dn.powf(p) / j).powf(1.0 / p))
    }

    /// The weak p-quasiconformality coefficient `K_p` over the source domain `d`.
    pub fn dilatation_sup(&self, d: &DomainSpec, p: f64, method: DilatationMethod) -> Result<DilatationReport> {
        self.dilatation_sup_seeded(d, p, method, None)
    }

    /// As [`dilatation_sup`](Self::dilatation_sup); a seed jitters the sampled-sup grid.
    pub fn dilatation_sup_seeded(
        &self,
        d: &DomainSpec,
        p: f64,
        method: DilatationMethod,
        seed: Option<u64>,
    ) -> Result<DilatationReport> {
        check_p(p)?;
        self.check_source(d)?;
        match method {
            DilatationMethod::Analytic => self.analytic_dilatation(p),
            DilatationMethod::SampledSup => {
                let analytic = self.analytic_dilatation(p)?;
                let (witness, lower, evaluations) = self.sampled_sup(d, p, seed)?;
                Ok(DilatationReport {
                    method: DilatationMethod::SampledSup,
                    witness: Some(witness),
                    lower_witness_value: lower,
                    evaluations,
                    ..analytic
                })
            }
            DilatationMethod::PrintedVariant => match self {
                MappingSpec::CuspMap { a, exponents } => {
                    self.cusp_exponent_check(p)?;
                    let a2 = printed_a_squared(*a, exponents);
                    if a2 < 0.0 {
                        return Err(Error::Inapplicable(format!("printed A_a(gamma)^2 = {a2} is negative")));
                    }
                    let value = a2.sqrt();
                    Ok(DilatationReport {
                        p,
                        value,
                        value_pow_p: value.powf(p),
                        method,
                        witness: None,
                        lower_witness_value: 0.0,
                        evaluations: 0,
                    })
                }
                _ => self.analytic_dilatation(p),
            },
        }
    }

    /// `p(a - 1) - (a gamma - n)`; the dilatation is bounded iff this is >= 0.
    pub fn cusp_dilatation_exponent(&self, p: f64) -> Option<f64> {
        match self {
            MappingSpec::CuspMap { a, exponents } => {
                let gamma = 1.0 + exponents.iter().sum::<f64>();
                let n = (exponents.len() + 1) as f64;
                Some(p * (a - 1.0) - (a * gamma - n))
            }
            _ => None,
        }
    }

    fn cusp_exponent_check(&self, p: f64) -> Result<()> {
        match self.cusp_dilatation_exponent(p) {
            // tolerate rounding at the admissible endpoint a = (n-p)/(gamma-p)
            Some(e) if e < -1e-12 => Err(Error::UnboundedDilatation { exponent: e }),
            _ => Ok(()),
        }
    }

    fn analytic_dilatation(&self, p: f64) -> Result<DilatationReport> {
        let n = self.dim();
        let (value_pow_p, witness) = match self {
            MappingSpec::Identity { .. } => (1.0, vec![0.5; n]),
            MappingSpec::DiagonalLinear { coefficients } => {
                let max = coefficients.iter().cloned().fold(0.0, f64::max);
                (max.powf(p) / coefficients.iter().product::<f64>(), vec![0.5; n])
            }
            MappingSpec::CuspMap { a, exponents } => {
                self.cusp_exponent_check(p)?;
                // |D phi|^p / J <= A^p x_n^{p(a-1)-(a gamma-n)} / a and the power is <= 1.
                let frob = frobenius_bound_cusp(*a, exponents, n);
                let mut w = vec![0.5; n];
                w[n - 1] = 0.75;
                (frob.powf(p) / a, w)
            }
        };
        let value = if p == 1.0 { value_pow_p } else { value_pow_p.powf(1.0 / p) };
        let lower = self.pointwise_dilatation(&witness, p)?;
        Ok(DilatationReport {
            p,
            value,
            value_pow_p,
            method: DilatationMethod::Analytic,
            witness: Some(witness),
            lower_witness_value: lower,
            evaluations: 1,
        })
    }

    fn sampled_sup(&self, d: &DomainSpec, p: f64, seed: Option<u64>) -> Result<(Point, f64, usize)> {
        let n = d.dim();
        let global_budget = SUP_BUDGET / 2;
        let density = ((global_budget as f64).powf(1.0 / n as f64).floor() as usize).max(2);
        let pts = d.sample_points_seeded(density, seed);
        let mut evaluations = pts.len();
        let (mut witness, mut best) = self.argmax(&pts, p)?;

        let (lo, hi) = d.bounding_box();
        let mut h: Vec<f64> = lo.iter().zip(&hi).map(|(l, u)| (u - l) / density as f64).collect();
        let half = SUP_REFINE as i64;
        let per_axis = (2 * half + 1) as usize;
        for _ in 0..SUP_ROUNDS {
            if evaluations + per_axis.pow(n as u32) > SUP_BUDGET {
                break;
            }
            h.iter_mut().for_each(|hk| *hk /= SUP_REFINE as f64);
            let local: Vec<Point> = (0..per_axis.pow(n as u32))
                .map(|mut flat| {
                    let mut x = witness.clone();
                    for k in (0..n).rev() {
                        let off = (flat % per_axis) as i64 - half;
                        flat /= per_axis;
                        x[k] += off as f64 * h[k];
                    }
                    x
                })
                .filter(|x| d.contains_unchecked(x))
                .collect();
            evaluations += local.len();
            let (w, v) = self.argmax(&local, p)?;
            if v > best {
                best = v;
                witness = w;
            }
        }
        Ok((witness, best, evaluations))
    }

    /// First maximiser in iteration order.
    fn argmax(&self, pts: &[Point], p: f64) -> Result<(Point, f64)> {
        let values: Vec<f64> = pts.par_iter().map(|x| self.pointwise_dilatation(x, p)).collect::<Result<_>>()?;
        let mut best = (0usize, f64::NEG_INFINITY);
        for (i, v) in values.iter().enumerate() {
            if *v > best.1 {
                best = (i, *v);
            }
        }
        if pts.is_empty() {
            return Err(Error::InvalidDomain("no sample points available".into()));
        }
        Ok((pts[best.0].clone(), best.1))
    }
}

fn check_p(p: f64) -> Result<()> {
    if p.is_finite() && p >= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidExponents(format!("p must satisfy 1 <= p < inf, got {p}")))
    }
}

/// Spectral norm (largest singular value) via the symmetric eigenproblem of `M^T M`.
pub fn operator_norm(m: &DMatrix<f64>) -> Result<f64> {
    if m.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("matrix has non-finite entries".into()));
    }
    if m.is_empty() {
        return Ok(0.0);
    }
    let scale = m.amax();
    if scale == 0.0 {
        return Ok(0.0);
    }
    let s = m / scale;
    let gram = s.transpose() * &s;
    let eig = SymmetricEigen::new(gram);
    let top = eig.eigenvalues.iter().cloned().fold(0.0, f64::max);
    Ok(scale * top.sqrt())
}

/// Frobenius bound `A_a(g) = sqrt(sum (a g_i - 1)^2 + (n - 1) + a^2)` for the
/// factored cusp differential `D phi = x_n^{a-1} (...)`.
pub fn frobenius_bound_cusp(a: f64, exponents: &[f64], n: usize) -> f64 {
    let s: f64 = exponents.iter().map(|g| (a * g - 1.0).powi(2)).sum();
    (s + (n as f64 - 1.0) + a * a).sqrt()
}

/// The expansion `a^2 (sum g_i^2 + 1) - 2 a sum g_i` exactly as printed; may be negative.
pub fn printed_a_squared(a: f64, exponents: &[f64]) -> f64 {
    let sq: f64 = exponents.iter().map(|g| g * g).sum();
    let sum: f64 = exponents.iter().sum();
    a * a * (sq + 1.0) - 2.0 * a * sum
}

/// Range of cusp exponents `a` for which both the dilatation `K_p` and the
/// Jacobian norm `M_{r,p}` are finite: `(p n / (gamma r), (n - p) / (gamma - p)]`.
pub fn admissible_a_range(p: f64, r: f64, n: usize, gamma: f64) -> Result<AdmissibleRange> {
    let nf = n as f64;
    if !(p > 1.0 && p < nf) {
        return Err(Error::InvalidExponents(format!("need 1 < p < n, got p = {p}, n = {n}")));
    }
    if gamma <= p {
        return Err(Error::InvalidExponents(format!("need gamma > p, got gamma = {gamma}, p = {p}")));
    }
    if r <= p {
        return Err(Error::InvalidExponents(format!("need r > p, got r = {r}, p = {p}")));
    }
    Ok(AdmissibleRange { lower: p * nf / (gamma * r), upper: (nf - p) / (gamma - p) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_and_diagonal_differentials() {
        let id = MappingSpec::identity(3).unwrap();
        let d = id.differential(&[0.1, 0.2, 0.3]).unwrap();
        assert_eq!(d.matrix, DMatrix::identity(3, 3));
        assert_eq!(d.det, 1.0);
        let lin = MappingSpec::diagonal(vec![2.0, 1.0]).unwrap();
        let d = lin.differential(&[0.3, 0.4]).unwrap();
        assert_eq!(d.matrix, DMatrix::from_diagonal(&DVector::from_vec(vec![2.0, 1.0])));
        assert_eq!(d.det, 2.0);
    }

    #[test]
    fn cusp_differential_matches_closed_form_and_determinant() {
        let m = MappingSpec::cusp(1.0 / 3.0, vec![2.0, 2.0]).unwrap();
        let d = m.differential(&[0.1, 0.1, 0.5]).unwrap();
        let expected = (1.0 / 3.0) * 0.5f64.powf(-4.0 / 3.0);
        assert!((d.det - expected).abs() <= 1e-14 * expected);
        let assembled = d.matrix.determinant();
        assert!((assembled - expected).abs() <= 1e-12 * expected);
        // value from an independent numpy evaluation of the same matrix
        assert!((expected - 0.8399473665965821).abs() < 1e-14);
    }

    #[test]
    fn cusp_det_matches_closed_form_at_random_points() {
        let m = MappingSpec::cusp(0.4, vec![1.5, 2.5]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let xn: f64 = rng.random_range(0.01..1.0);
            let x = [rng.random_range(0.0..xn), rng.random_range(0.0..xn), xn];
            let d = m.differential(&x).unwrap();
            let closed = 0.4 * xn.powf(0.4 * 5.0 - 3.0);
            assert!((d.matrix.determinant() - closed).abs() <= 1e-12 * closed);
        }
    }

    #[test]
    fn singular_point_is_rejected() {
        let m = MappingSpec::cusp(0.5, vec![2.0, 2.0]).unwrap();
        assert!(matches!(m.differential(&[0.0, 0.0, 0.0]), Err(Error::SingularPoint(_))));
        assert!(matches!(m.pointwise_dilatation(&[0.0, 0.0, 0.0], 2.0), Err(Error::SingularPoint(_))));
    }

    #[test]
    fn operator_norm_examples() {
        let d = DMatrix::from_diagonal(&DVector::from_vec(vec![2.0, 1.0]));
        assert!((operator_norm(&d).unwrap() - 2.0).abs() < 1e-14);
        assert!((operator_norm(&DMatrix::identity(3, 3)).unwrap() - 1.0).abs() < 1e-14);
        let shift = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        assert!((operator_norm(&shift).unwrap() - 1.0).abs() < 1e-14);
        let bad = DMatrix::from_row_slice(1, 1, &[f64::NAN]);
        assert!(matches!(operator_norm(&bad), Err(Error::NonFinite(_))));
    }

    #[test]
    fn pointwise_examples() {
        let id = MappingSpec::identity(2).unwrap();
        assert!((id.pointwise_dilatation(&[0.3, 0.3], 2.0).unwrap() - 1.0).abs() < 1e-15);
        let lin = MappingSpec::diagonal(vec![2.0, 1.0]).unwrap();
        assert!((lin.pointwise_dilatation(&[0.3, 0.3], 2.0).unwrap() - 2f64.sqrt()).abs() < 1e-14);
        let cusp = MappingSpec::cusp(1.0 / 3.0, vec![2.0, 2.0]).unwrap();
        let v = cusp.pointwise_dilatation(&[0.1, 0.1, 0.5], 2.0).unwrap();
        // numpy SVD of the same matrix: sqrt(s_max^2 / |J|)
        assert!((v - 1.3821112744989867).abs() < 1e-12);
    }

    #[test]
    fn dilatation_sup_examples() {
        let sq = DomainSpec::unit_box(2).unwrap();
        let lin = MappingSpec::diagonal(vec![2.0, 1.0]).unwrap();
        let r = lin.dilatation_sup(&sq, 2.0, DilatationMethod::Analytic).unwrap();
        assert!((r.value - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(r.value_pow_p, 2.0);
        let id = MappingSpec::identity(2).unwrap();
        assert_eq!(id.dilatation_sup(&sq, 3.0, DilatationMethod::Analytic).unwrap().value, 1.0);

        let h1 = DomainSpec::simplex(3).unwrap();
        let cusp = MappingSpec::cusp(1.0 / 3.0, vec![2.0, 2.0]).unwrap();
        let s = cusp.dilatation_sup(&h1, 2.0, DilatationMethod::SampledSup).unwrap();
        assert!(s.lower_witness_value <= s.value);
        assert!(s.evaluations <= SUP_BUDGET);
        let expected = (7.0f64 / 3.0).sqrt() / (1.0f64 / 3.0).sqrt();
        assert!((s.value - expected).abs() < 1e-12);
        // deterministic
        let again = cusp.dilatation_sup(&h1, 2.0, DilatationMethod::SampledSup).unwrap();
        assert_eq!(s.lower_witness_value, again.lower_witness_value);
        assert_eq!(s.witness, again.witness);
    }

    #[test]
    fn unbounded_dilatation_is_reported() {
        let h1 = DomainSpec::simplex(3).unwrap();
        // a above (n-p)/(gamma-p) = 1/3
        let cusp = MappingSpec::cusp(0.5, vec![2.0, 2.0]).unwrap();
        assert!(matches!(
            cusp.dilatation_sup(&h1, 2.0, DilatationMethod::Analytic),
            Err(Error::UnboundedDilatation { .. })
        ));
    }

    #[test]
    fn frobenius_bound_examples() {
        let v = frobenius_bound_cusp(1.0 / 3.0, &[2.0, 2.0], 3);
        assert!((v - (7.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!((frobenius_bound_cusp(1.0, &[1.0, 1.0], 3) - 3f64.sqrt()).abs() < 1e-15);
        let printed = printed_a_squared(1.0 / 3.0, &[2.0, 2.0]);
        assert!((printed + 5.0 / 3.0).abs() < 1e-14);
        let h1 = DomainSpec::simplex(3).unwrap();
        let cusp = MappingSpec::cusp(1.0 / 3.0, vec![2.0, 2.0]).unwrap();
        assert!(matches!(cusp.dilatation_sup(&h1, 2.0, DilatationMethod::PrintedVariant), Err(Error::Inapplicable(_))));
    }

    #[test]
    fn admissible_ranges() {
        let r = admissible_a_range(2.0, 4.0, 3, 5.0).unwrap();
        assert!((r.lower - 0.3).abs() < 1e-15 && (r.upper - 1.0 / 3.0).abs() < 1e-15);
        let r = admissible_a_range(2.0, 4.0, 3, 3.0).unwrap();
        assert!((r.lower - 0.5).abs() < 1e-15 && (r.upper - 1.0).abs() < 1e-15);
        let r = admissible_a_range(2.0, 2.1, 3, 12.0).unwrap();
        assert!(r.is_empty());
        assert!((r.lower - 6.0 / (12.0 * 2.1)).abs() < 1e-15 && (r.upper - 0.1).abs() < 1e-15);
        assert!(admissible_a_range(2.0, 4.0, 3, 2.0).is_err());
        assert!(admissible_a_range(2.0, 2.0, 3, 5.0).is_err());
    }

    #[test]
    fn images() {
        let m = MappingSpec::cusp(0.3, vec![2.0, 2.0]).unwrap();
        let img = m.image(&DomainSpec::simplex(3).unwrap()).unwrap();
        assert_eq!(img, DomainSpec::holder_cusp(vec![2.0, 2.0]).unwrap());
        let lin = MappingSpec::diagonal(vec![2.0, 1.0]).unwrap();
        let e = lin.image(&DomainSpec::ball(2, 1.0).unwrap()).unwrap();
        assert_eq!(e, DomainSpec::ellipsoid(vec![2.0, 1.0]).unwrap());
        assert!(m.image(&DomainSpec::unit_box(3).unwrap()).is_err());
    }
}
