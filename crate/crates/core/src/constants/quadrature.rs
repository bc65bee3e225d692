//! Gauss-Legendre rules and an adaptive scheme for integrands with an
//! algebraic singularity at the left endpoint of `(0, 1]`.

use std::sync::OnceLock;

use crate::error::{Error, Result};

pub const DEFAULT_ORDER: usize = 64;
pub const EVALUATION_CAP: usize = 10_000_000;
const RATIO: f64 = 0.5;
const MAX_PANELS: usize = 4000;

#[derive(Debug, Clone)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`, by Newton iteration on `P_m`.
pub fn gauss_legendre(m: usize) -> Rule {
    assert!(m >= 1);
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    for i in 0..m.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=m {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pm = if m == 1 { x } else { p1 };
            let pm1 = if m == 1 { 1.0 } else { p0 };
            dp = m as f64 * (x * pm - pm1) / (x * x - 1.0);
            let dx = pm / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        if m == 1 {
            dp = 1.0;
            x = 0.0;
        }
        nodes[i] = -x;
        nodes[m - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[m - 1 - i] = w;
    }
    Rule { nodes, weights }
}

pub fn default_rule() -> &'static Rule {
    static RULE: OnceLock<Rule> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(DEFAULT_ORDER))
}

fn half_rule() -> &'static Rule {
    static RULE: OnceLock<Rule> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(DEFAULT_ORDER / 2))
}

impl Rule {
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F, a: f64, b: f64) -> f64 {
        let c = 0.5 * (b - a);
        let m = 0.5 * (b + a);
        self.nodes.iter().zip(&self.weights).map(|(x, w)| w * f(m + c * x)).sum::<f64>() * c
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

/// Integrates `f` over `(0, 1]` where `f` may blow up algebraically at 0.
///
/// The interval is cut into geometric panels `[q^{k+1}, q^k]`, each
/// integrated with the 64-point rule. Once consecutive panel ratios settle,
/// the remaining tail near 0 is summed as a geometric series. `tol` is
/// absolute for results below 1 in magnitude and relative above.
pub fn integrate_singular_left<F: FnMut(f64) -> f64>(mut f: F, tol: f64) -> Result<QuadratureResult> {
    let rule = default_rule();
    let coarse = half_rule();
    let mut sum = 0.0;
    let mut err = 0.0;
    let mut evaluations = 0;
    let mut panels: Vec<f64> = Vec::new();
    let mut hi = 1.0;
    for _ in 0..MAX_PANELS {
        let lo = hi * RATIO;
        let fine = rule.integrate(&mut f, lo, hi);
        let rough = coarse.integrate(&mut f, lo, hi);
        evaluations += rule.nodes.len() + coarse.nodes.len();
        if !fine.is_finite() {
            return Err(Error::Quadrature(format!("non-finite panel value on [{lo}, {hi}]")));
        }
        sum += fine;
        err += (fine - rough).abs() + f64::EPSILON * fine.abs();
        panels.push(fine);
        hi = lo;
        let k = panels.len();
        if k >= 4 {
            let (i0, i1, i2) = (panels[k - 3], panels[k - 2], panels[k - 1]);
            if i1 != 0.0 && i0 != 0.0 {
                let r1 = i2 / i1;
                let r0 = i1 / i0;
                if r1 > 0.0 && r1 < 1.0 {
                    let tail = i2 * r1 / (1.0 - r1);
                    let tail_err = i2.abs() * (r1 - r0).abs() / (1.0 - r1).powi(2) + tail.abs() * 4.0 * f64::EPSILON;
                    if tail_err + err <= tol * (sum + tail).abs().max(1.0) {
                        return Ok(QuadratureResult { value: sum + tail, error_estimate: tail_err + err, evaluations });
                    }
                }
            }
            if i2 == 0.0 && i1 == 0.0 {
                return Ok(QuadratureResult { value: sum, error_estimate: err, evaluations });
            }
        }
        if evaluations > EVALUATION_CAP || hi < 1e-300 {
            break;
        }
    }
    Err(Error::Quadrature(format!("no convergence after {evaluations} evaluations (partial sum {sum})")))
}

/// Integrates `f` over the simplex `0 < x_n < 1, 0 < x_i < x_n` by iterated
/// Gauss-Legendre: the outer `x_n` variable uses the geometric panels of
/// [`integrate_singular_left`], the inner cube `(0, x_n)^{n-1}` a tensor rule
/// of order `inner_order`.
pub fn integrate_simplex<F: Fn(&[f64]) -> f64>(
    n: usize,
    f: F,
    inner_order: usize,
    tol: f64,
) -> Result<QuadratureResult> {
    let inner = gauss_legendre(inner_order);
    let m = n - 1;
    let count = inner_order.pow(m as u32);
    let mut x = vec![0.0; n];
    let mut inner_evals = 0usize;
    let res = integrate_singular_left(
        |xn| {
            x[n - 1] = xn;
            let half = 0.5 * xn;
            let mut acc = 0.0;
            for mut flat in 0..count {
                let mut w = 1.0;
                for xi in x.iter_mut().take(m) {
                    let j = flat % inner_order;
                    flat /= inner_order;
                    *xi = half + half * inner.nodes[j];
                    w *= half * inner.weights[j];
                }
                acc += w * f(&x);
            }
            inner_evals += count;
            acc
        },
        tol,
    )?;
    if inner_evals > EVALUATION_CAP {
        return Err(Error::Quadrature(format!("evaluation cap exceeded ({inner_evals})")));
    }
    Ok(QuadratureResult { evaluations: inner_evals, ..res })
}
