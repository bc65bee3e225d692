//! Scalar constants entering the eigenvalue bounds: Jacobian norms,
//! convex Sobolev-Poincare estimates, Bessel zeros and the classical
//! Payne-Weinberger / Szego-Weinberger bounds.

pub mod bessel;
pub mod quadrature;

use std::f64::consts::PI;

pub use bessel::{bessel_first_zero, BesselRoot};

use crate::error::{Error, Result};
use crate::geometry::{unit_ball_volume, DomainSpec};
use crate::mappings::MappingSpec;

/// Absolute tolerance for the Jacobian-norm quadrature fallback.
pub const QUADRATURE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormMethod {
    ClosedForm,
    Quadrature,
}

/// `M_{r,s}` (or `M_s` when `r == s`) of a mapping over its source domain.
#[derive(Debug, Clone, Copy)]
pub struct JacobianNorm {
    pub r: f64,
    pub s: f64,
    pub value: f64,
    /// `value^s`, kept unrooted so that products with `K_p^p` cancel exactly.
    pub value_pow_s: f64,
    pub method: NormMethod,
    pub quadrature_error_estimate: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PoincareSource {
    ConvexEstimate,
    ExactEigenvalue,
    UserSupplied,
}

impl PoincareSource {
    pub fn as_str(&self) -> &'static str {
        match self {
            PoincareSource::ConvexEstimate => "convex-estimate",
            PoincareSource::ExactEigenvalue => "exact-eigenvalue",
            PoincareSource::UserSupplied => "user-supplied",
        }
    }
}

/// Constraint record of a convex Poincare estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoincareValidity {
    pub convex: bool,
    /// `1/p - 1/r`, the exponent actually used.
    pub delta: f64,
    /// `delta` must stay strictly below `1/n`.
    pub limit: f64,
    /// `1/p + 1/r` as printed in the source of the estimate; never used.
    pub printed_delta: f64,
    /// The simplex estimate with unit diameter and `1/(n+1)!` volume factor,
    /// evaluated with the corrected `delta` for comparison only.
    pub printed_simplex_value: Option<f64>,
}

/// Upper bound for the best constant `B_{r,p}` in
/// `inf_c ||f - c||_r <= B ||grad f||_p`.
#[derive(Debug, Clone, Copy)]
pub struct PoincareConstantBound {
    pub r: f64,
    pub p: f64,
    pub value: f64,
    pub source: PoincareSource,
    pub validity: Option<PoincareValidity>,
}

impl PoincareConstantBound {
    /// `B_{2,2} = mu_1^{-1/2}`.
    pub fn from_eigenvalue(mu1: f64) -> Result<Self> {
        if !(mu1.is_finite() && mu1 > 0.0) {
            return Err(Error::NonFinite(format!("eigenvalue must be finite and > 0, got {mu1}")));
        }
        Ok(Self { r: 2.0, p: 2.0, value: mu1.powf(-0.5), source: PoincareSource::ExactEigenvalue, validity: None })
    }

    pub fn user_supplied(r: f64, p: f64, value: f64) -> Result<Self> {
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::NonFinite(format!("Poincare constant must be finite and > 0, got {value}")));
        }
        Ok(Self { r, p, value, source: PoincareSource::UserSupplied, validity: None })
    }
}

fn check_s(s: f64) -> Result<()> {
    if s.is_finite() && s >= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidExponents(format!("need s >= 1, got {s}")))
    }
}

/// `M_s = ess sup |J|^{1/s}`.
pub fn m_sup(m: &MappingSpec, d: &DomainSpec, s: f64) -> Result<JacobianNorm> {
    check_s(s)?;
    m.check_source(d)?;
    let pow = match m {
        MappingSpec::Identity { .. } => 1.0,
        MappingSpec::DiagonalLinear { coefficients } => coefficients.iter().product(),
        MappingSpec::CuspMap { a, exponents } => {
            let gamma = 1.0 + exponents.iter().sum::<f64>();
            let exponent = a * gamma - d.dim() as f64;
            // sup over 0 < x_n < 1 of a x_n^{exponent}
            if exponent < 0.0 {
                return Err(Error::UnboundedJacobian { exponent });
            }
            *a
        }
    };
    Ok(JacobianNorm {
        r: s,
        s,
        value: pow.powf(1.0 / s),
        value_pow_s: pow,
        method: NormMethod::ClosedForm,
        quadrature_error_estimate: 0.0,
    })
}

fn check_rs(r: f64, s: f64) -> Result<()> {
    check_s(s)?;
    if !(r.is_finite() && r > s) {
        return Err(Error::InvalidExponents(format!("need 1 <= s < r, got r = {r}, s = {s}")));
    }
    Ok(())
}

/// Threshold `n s / (gamma r)` above which the cusp Jacobian integral converges.
pub fn cusp_integrability_threshold(n: usize, gamma: f64, r: f64, s: f64) -> f64 {
    n as f64 * s / (gamma * r)
}

/// `M_{r,s} = (int |J|^{r/(r-s)})^{(r-s)/(rs)}` in closed form.
pub fn m_rs(m: &MappingSpec, d: &DomainSpec, r: f64, s: f64) -> Result<JacobianNorm> {
    check_rs(r, s)?;
    m.check_source(d)?;
    let outer = (r - s) / (r * s);
    let (value, value_pow_s) = match m {
        MappingSpec::Identity { .. } | MappingSpec::DiagonalLinear { .. } => {
            let jac: f64 = match m {
                MappingSpec::DiagonalLinear { coefficients } => coefficients.iter().product(),
                _ => 1.0,
            };
            let v = jac.powf(1.0 / s) * d.volume().powf(outer);
            (v, jac * d.volume().powf(outer * s))
        }
        MappingSpec::CuspMap { a, exponents } => {
            let n = d.dim();
            let nf = n as f64;
            let gamma = 1.0 + exponents.iter().sum::<f64>();
            let threshold = cusp_integrability_threshold(n, gamma, r, s);
            if *a <= threshold {
                return Err(Error::DivergentIntegral { a: *a, threshold });
            }
            // int_0^1 x^{(a gamma - n) r/(r-s)} x^{n-1} dx = (r-s) / ((a gamma - n) r + n (r-s))
            let integral = (r - s) / ((a * gamma - nf) * r + nf * (r - s));
            let v = a.powf(1.0 / s) * integral.powf(outer);
            (v, a * integral.powf(outer * s))
        }
    };
    Ok(JacobianNorm { r, s, value, value_pow_s, method: NormMethod::ClosedForm, quadrature_error_estimate: 0.0 })
}

/// `M_{r,s}` of the cusp map by iterated Gauss-Legendre over the simplex.
pub fn m_rs_quadrature(m: &MappingSpec, d: &DomainSpec, r: f64, s: f64) -> Result<JacobianNorm> {
    check_rs(r, s)?;
    m.check_source(d)?;
    let MappingSpec::CuspMap { a, exponents } = m else {
        return Err(Error::InvalidMapping("quadrature route is implemented for the cusp map only".into()));
    };
    let n = d.dim();
    let gamma = 1.0 + exponents.iter().sum::<f64>();
    let threshold = cusp_integrability_threshold(n, gamma, r, s);
    if *a <= threshold {
        return Err(Error::DivergentIntegral { a: *a, threshold });
    }
    let power = r / (r - s);
    let jexp = a * gamma - n as f64;
    let res = quadrature::integrate_simplex(n, |x| (a * x[n - 1].powf(jexp)).powf(power), 2, QUADRATURE_TOL)?;
    let outer = (r - s) / (r * s);
    let value = res.value.powf(outer);
    // first-order propagation of the integral's error through the outer power
    let err = outer * value * res.error_estimate / res.value;
    Ok(JacobianNorm {
        r,
        s,
        value,
        value_pow_s: res.value.powf(outer * s),
        method: NormMethod::Quadrature,
        quadrature_error_estimate: err,
    })
}

/// Convex-domain estimate of `B_{r,p}`:
/// `diam^n / (n |D|) ((1 - d) / (1/n - d))^{1-d} w_n^{1-1/n} |D|^{1/n - d}`
/// with `d = 1/p - 1/r`.
pub fn convex_poincare_bound(d: &DomainSpec, r: f64, p: f64) -> Result<PoincareConstantBound> {
    if !d.is_convex() {
        return Err(Error::NonConvex(d.label()));
    }
    if !(p.is_finite() && p >= 1.0 && r.is_finite() && r >= p) {
        return Err(Error::InvalidExponents(format!("need 1 <= p <= r, got p = {p}, r = {r}")));
    }
    let n = d.dim();
    let nf = n as f64;
    let delta = 1.0 / p - 1.0 / r;
    let limit = 1.0 / nf;
    if delta >= limit {
        return Err(Error::PoincareValidity { delta, limit });
    }
    let vol = d.volume();
    let value = convex_estimate(d.diameter(), vol, n, delta);
    let printed_simplex_value = match d {
        DomainSpec::SimplexH1 { .. } => {
            let fact: f64 = (1..=n + 1).map(|k| k as f64).product();
            Some(
                nf * ((1.0 - delta) / (limit - delta)).powf(1.0 - delta)
                    * unit_ball_volume(n).powf(1.0 - limit)
                    * (1.0 / fact).powf(limit - delta),
            )
        }
        _ => None,
    };
    Ok(PoincareConstantBound {
        r,
        p,
        value,
        source: PoincareSource::ConvexEstimate,
        validity: Some(PoincareValidity {
            convex: true,
            delta,
            limit,
            printed_delta: 1.0 / p + 1.0 / r,
            printed_simplex_value,
        }),
    })
}

fn convex_estimate(diam: f64, vol: f64, n: usize, delta: f64) -> f64 {
    let nf = n as f64;
    diam.powi(n as i32) / (nf * vol)
        * ((1.0 - delta) / (1.0 / nf - delta)).powf(1.0 - delta)
        * unit_ball_volume(n).powf(1.0 - 1.0 / nf)
        * vol.powf(1.0 / nf - delta)
}

/// Exact first nontrivial Neumann eigenvalue where a closed form exists.
pub fn exact_mu1(d: &DomainSpec) -> Option<f64> {
    match d {
        DomainSpec::Box { sides } => {
            let max = sides.iter().cloned().fold(0.0, f64::max);
            Some(PI * PI / (max * max))
        }
        DomainSpec::Ball { dim, radius } => {
            let root = bessel_first_zero(*dim).ok()?.value;
            Some((root / radius).powi(2))
        }
        _ => None,
    }
}

/// `mu_1 >= pi^2 / diam^2` for convex domains.
pub fn payne_weinberger(d: &DomainSpec) -> Result<f64> {
    if !d.is_convex() {
        return Err(Error::NonConvex(d.label()));
    }
    Ok(PI * PI / d.diameter().powi(2))
}

/// `mu_1 <= p_{n/2}^2 / R_*^2` with `R_*` the equal-volume ball radius.
pub fn szego_weinberger_upper(d: &DomainSpec) -> Result<f64> {
    let root = bessel_first_zero(d.dim())?.value;
    Ok((root / d.equal_volume_ball_radius()).powi(2))
}
