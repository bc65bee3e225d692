//! Composition of dilatation, Jacobian and Poincare constants into
//! eigenvalue lower bounds, with optimization over the free exponents.

pub mod certificate;
pub mod optimize;

pub use certificate::{to_csv, BoundCertificate, Direction, Ledger, Method, Variant};

use crate::constants::{
    convex_poincare_bound, exact_mu1, m_rs, m_sup, payne_weinberger, szego_weinberger_upper, PoincareConstantBound,
};
use crate::error::{Error, Result};
use crate::geometry::DomainSpec;
use crate::mappings::{admissible_a_range, frobenius_bound_cusp, printed_a_squared, DilatationMethod, MappingSpec};

pub const R_GRID_POINTS: usize = 16;
pub const R_GRID_EPS: f64 = 1e-3;
pub const A_GRID_POINTS: usize = 64;
/// Gap kept between the optimized `a` and the open lower end of its range.
pub const A_LOWER_GAP: f64 = 1e-6;

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::NonFinite(format!("{name} must be finite and > 0, got {v}")))
    }
}

fn check_p(p: f64) -> Result<()> {
    if p.is_finite() && p > 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidExponents(format!("need p > 1, got {p}")))
    }
}

/// `x^{-p}`, with the `p = 2` case written out so that both (r,p) entry
/// points agree to the last bit.
fn inverse_power(x: f64, p: f64) -> f64 {
    if p == 2.0 {
        1.0 / (x * x)
    } else {
        x.powf(-p)
    }
}

/// `mu_1(target) >= mu1_base / (K_2^2 M_2^2)`. Takes the squares directly.
pub fn theorem_a_bound(k2_sq: f64, m2_sq: f64, mu1_base: f64) -> Result<BoundCertificate> {
    let mut c = p_laplace_pp_bound(k2_sq, m2_sq, mu1_base, 2.0)?;
    c.method = Method::TheoremA;
    Ok(c)
}

/// `mu_1(target) >= (K_2 M_{r,2} B_{r,2})^{-2}`.
pub fn theorem_c_bound(k2: f64, m_r2: f64, b_r2: f64) -> Result<BoundCertificate> {
    let mut c = p_laplace_rp_bound(k2, m_r2, b_r2, 2.0)?;
    c.method = Method::TheoremC;
    Ok(c)
}

/// `mu_{1,p}(target) >= mu_base / (K_p^p M_p^p)`. Takes the p-th powers directly.
pub fn p_laplace_pp_bound(kp_pow: f64, mp_pow: f64, mu_base: f64, p: f64) -> Result<BoundCertificate> {
    check_p(p)?;
    check_positive("K_p^p", kp_pow)?;
    check_positive("M_p^p", mp_pow)?;
    check_positive("base eigenvalue", mu_base)?;
    let ledger = Ledger {
        k: Some(kp_pow.powf(1.0 / p)),
        m: Some(mp_pow.powf(1.0 / p)),
        base: Some(mu_base),
        ..Ledger::with_p(p)
    };
    BoundCertificate::new(Method::PLaplacePp, Direction::Lower, mu_base / (kp_pow * mp_pow), ledger)
}

/// `mu_{1,p}(target) >= (K_p M_{r,p} B_{r,p})^{-p}`.
pub fn p_laplace_rp_bound(kp: f64, m_rp: f64, b_rp: f64, p: f64) -> Result<BoundCertificate> {
    check_p(p)?;
    check_positive("K_p", kp)?;
    check_positive("M_{r,p}", m_rp)?;
    check_positive("B_{r,p}", b_rp)?;
    let ledger = Ledger { k: Some(kp), m: Some(m_rp), b: Some(b_rp), ..Ledger::with_p(p) };
    BoundCertificate::new(Method::PLaplaceRp, Direction::Lower, inverse_power(kp * m_rp * b_rp, p), ledger)
}

/// `mu_1 >= pi^2 / diam^2` as a certificate (convex targets only).
pub fn payne_weinberger_certificate(d: &DomainSpec) -> Result<BoundCertificate> {
    let v = payne_weinberger(d)?;
    let ledger = Ledger { extra: vec![("diam".into(), d.diameter())], ..Ledger::with_p(2.0) };
    Ok(BoundCertificate::new(Method::PayneWeinberger, Direction::Lower, v, ledger)?.with_domain(d.clone()))
}

/// `mu_1 <= p_{n/2}^2 / R_*^2` as a certificate.
pub fn szego_weinberger_certificate(d: &DomainSpec) -> Result<BoundCertificate> {
    let v = szego_weinberger_upper(d)?;
    let root = crate::constants::bessel_first_zero(d.dim())?.value;
    let ledger = Ledger {
        extra: vec![("R_star".into(), d.equal_volume_ball_radius()), ("bessel_root".into(), root)],
        ..Ledger::with_p(2.0)
    };
    Ok(BoundCertificate::new(Method::SzegoWeinberger, Direction::Upper, v, ledger)?.with_domain(d.clone()))
}

/// `count` log-spaced points in `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![lo];
    }
    let (l, h) = (lo.ln(), hi.ln());
    (0..count).map(|i| if i + 1 == count { hi } else { (l + (h - l) * i as f64 / (count - 1) as f64).exp() }).collect()
}

/// Exponents `r` for which the convex Poincare estimate on an `n`-dimensional
/// source is valid: `(p, np/(n-p))`, or `(p, 32p]` when `p >= n`.
pub fn default_r_grid(n: usize, p: f64) -> Vec<f64> {
    let nf = n as f64;
    let hi = if p < nf { nf * p / (nf - p) - R_GRID_EPS } else { 32.0 * p };
    log_grid(p + R_GRID_EPS, hi, R_GRID_POINTS)
}

#[derive(Debug, Clone)]
pub struct TheoremBOptions {
    /// Empty means the default grid.
    pub r_grid: Vec<f64>,
    /// Replaces the convex estimate of `B_{r,2}(H_1)`.
    pub b_override: Option<f64>,
    pub a_grid: usize,
}

impl Default for TheoremBOptions {
    fn default() -> Self {
        Self { r_grid: Vec::new(), b_override: None, a_grid: A_GRID_POINTS }
    }
}

/// Per-`r` result of the Theorem B scan.
#[derive(Debug, Clone, Copy)]
pub struct RPoint {
    pub r: f64,
    pub lower: f64,
    pub upper: f64,
    pub b: f64,
    /// Best rigorous bound and the `a` achieving it.
    pub best: Option<(f64, f64)>,
    /// Best printed bound among valid points.
    pub printed_best: Option<(f64, f64)>,
    pub printed_invalid: usize,
    pub printed_total: usize,
}

#[derive(Debug, Clone)]
pub struct TheoremBScan {
    pub n: usize,
    pub exponents: Vec<f64>,
    pub points: Vec<RPoint>,
    pub rigorous: Option<BoundCertificate>,
    pub printed: Option<BoundCertificate>,
    pub printed_invalid: usize,
    pub printed_total: usize,
    /// First admissible `(a, r, A^2)` at which the printed `A^2` is negative.
    pub first_negative: Option<(f64, f64, f64)>,
}

/// `(r - 2)/(a gamma r - 2n)`: the cusp Jacobian integral at `s = 2`.
fn cusp_integral(a: f64, gamma: f64, r: f64, n: f64) -> f64 {
    (r - 2.0) / (a * gamma * r - 2.0 * n)
}

/// Rigorous Theorem B objective. The `a` from `K_2^2 = A^2/a` cancels the
/// one in `M_{r,2}^2 = a I^{(r-2)/r}`.
pub fn theorem_b_rigorous_value(a: f64, exponents: &[f64], r: f64, b: f64) -> f64 {
    let n = exponents.len() + 1;
    let gamma = 1.0 + exponents.iter().sum::<f64>();
    let a2 = frobenius_bound_cusp(a, exponents, n).powi(2);
    1.0 / (a2 * cusp_integral(a, gamma, r, n as f64).powf((r - 2.0) / r) * b * b)
}

/// The displayed product evaluated literally. `None` where the printed `A^2` is negative.
pub fn theorem_b_printed_value(a: f64, exponents: &[f64], r: f64, b: f64) -> Option<f64> {
    let n = (exponents.len() + 1) as f64;
    let gamma = 1.0 + exponents.iter().sum::<f64>();
    let a2 = printed_a_squared(a, exponents);
    if a2 <= 0.0 {
        return None;
    }
    Some(1.0 / (a2 * a * cusp_integral(a, gamma, r, n).powf((r - 2.0) / r) * b * b))
}

fn check_theorem_b_inputs(n: usize, exponents: &[f64], r_grid: &[f64]) -> Result<()> {
    if n < 3 {
        return Err(Error::InvalidExponents(format!("Theorem B needs n >= 3, got {n}")));
    }
    if exponents.len() != n - 1 {
        return Err(Error::DimensionMismatch { expected: n - 1, found: exponents.len() });
    }
    if let Some(g) = exponents.iter().find(|g| !(g.is_finite() && **g >= 1.0)) {
        return Err(Error::InvalidExponents(format!("cusp exponents must be >= 1, got {g}")));
    }
    let cap = 2.0 * n as f64 / (n as f64 - 2.0);
    if let Some(r) = r_grid.iter().find(|r| !(**r > 2.0 && **r < cap)) {
        return Err(Error::InvalidExponents(format!("need 2 < r < {cap}, got r = {r}")));
    }
    Ok(())
}

/// Scans `(a, r)` for the cusp `H_g` and returns both variants.
pub fn theorem_b_scan(n: usize, exponents: &[f64], opts: &TheoremBOptions) -> Result<TheoremBScan> {
    let r_grid = if opts.r_grid.is_empty() { default_r_grid(n, 2.0) } else { opts.r_grid.clone() };
    check_theorem_b_inputs(n, exponents, &r_grid)?;
    let gamma = 1.0 + exponents.iter().sum::<f64>();
    let h1 = DomainSpec::simplex(n)?;
    let mut points = Vec::with_capacity(r_grid.len());
    let mut last_range = None;
    let mut first_negative = None;
    for &r in &r_grid {
        let range = admissible_a_range(2.0, r, n, gamma)?;
        last_range = Some(range);
        let lo = range.lower + A_LOWER_GAP;
        if lo > range.upper {
            continue;
        }
        let b = match opts.b_override {
            Some(b) => b,
            None => convex_poincare_bound(&h1, r, 2.0)?.value,
        };
        let best =
            optimize::maximize(|a| Some(theorem_b_rigorous_value(a, exponents, r, b)), lo, range.upper, opts.a_grid)
                .map(|m| (m.x, m.value));
        let step = (range.upper - lo) / (opts.a_grid - 1) as f64;
        let mut invalid = 0;
        for i in 0..opts.a_grid {
            let a = lo + step * i as f64;
            if theorem_b_printed_value(a, exponents, r, b).is_none() {
                invalid += 1;
                if first_negative.is_none() {
                    first_negative = Some((a, r, printed_a_squared(a, exponents)));
                }
            }
        }
        let printed_best =
            optimize::maximize(|a| theorem_b_printed_value(a, exponents, r, b), lo, range.upper, opts.a_grid)
                .map(|m| (m.x, m.value));
        points.push(RPoint {
            r,
            lower: range.lower,
            upper: range.upper,
            b,
            best,
            printed_best,
            printed_invalid: invalid,
            printed_total: opts.a_grid,
        });
    }
    if points.is_empty() {
        let range = last_range.expect("r grid is non-empty");
        return Err(Error::EmptyAdmissibleRange { lower: range.lower, upper: range.upper });
    }
    let printed_invalid = points.iter().map(|p| p.printed_invalid).sum();
    let printed_total = points.iter().map(|p| p.printed_total).sum();
    let target = DomainSpec::holder_cusp(exponents.to_vec())?;

    let best_point = points.iter().filter_map(|p| p.best.map(|(a, v)| (p, a, v))).fold(
        None,
        |acc: Option<(&RPoint, f64, f64)>, x| match acc {
            Some(b) if b.2 >= x.2 => Some(b),
            _ => Some(x),
        },
    );
    let rigorous = match best_point {
        Some((pt, a, _)) => {
            let map = MappingSpec::cusp(a, exponents.to_vec())?;
            let k = map.dilatation_sup(&h1, 2.0, DilatationMethod::Analytic)?;
            let m = m_rs(&map, &h1, pt.r, 2.0)?;
            let mut c = theorem_c_bound(k.value, m.value, pt.b)?.with_domain(target.clone());
            c.method = Method::TheoremB;
            c.ledger.r = Some(pt.r);
            c.ledger.a = Some(a);
            c.notes.push(format!("a optimized on [{}, {}]", pt.lower + A_LOWER_GAP, pt.upper));
            if a - pt.lower < 1e-3 * (pt.upper - pt.lower) {
                c.notes.push("optimal a at the divergent lower end of its range".into());
            }
            c.notes.push(b_note(opts.b_override));
            if printed_invalid > 0 {
                c.notes.push(format!("printed A^2 negative at {printed_invalid} of {printed_total} scanned points"));
            }
            Some(c)
        }
        None => None,
    };

    let printed_point = points.iter().filter_map(|p| p.printed_best.map(|(a, v)| (p, a, v))).fold(
        None,
        |acc: Option<(&RPoint, f64, f64)>, x| match acc {
            Some(b) if b.2 >= x.2 => Some(b),
            _ => Some(x),
        },
    );
    let printed = match printed_point {
        Some((pt, a, v)) => {
            let a2 = printed_a_squared(a, exponents);
            let ledger = Ledger {
                k: Some(a2.sqrt()),
                m: Some((a * cusp_integral(a, gamma, pt.r, n as f64).powf((pt.r - 2.0) / pt.r)).sqrt()),
                b: Some(pt.b),
                r: Some(pt.r),
                a: Some(a),
                ..Ledger::with_p(2.0)
            };
            let mut c = BoundCertificate::new(Method::TheoremB, Direction::Lower, v, ledger)?.with_domain(target);
            c.variant = Variant::Printed;
            c.notes.push("evaluated from the printed product; not a rigorous bound".into());
            if printed_invalid > 0 {
                c.notes.push(format!("{printed_invalid} of {printed_total} points invalid (negative A^2)"));
            }
            Some(c)
        }
        None => None,
    };

    Ok(TheoremBScan {
        n,
        exponents: exponents.to_vec(),
        points,
        rigorous,
        printed,
        printed_invalid,
        printed_total,
        first_negative,
    })
}

fn b_note(b_override: Option<f64>) -> String {
    match b_override {
        Some(_) => "B_{r,2}(H_1) user-supplied".into(),
        None => "B_{r,2}(H_1) from the convex estimate".into(),
    }
}

/// Best Theorem B lower bound over the `r` grid (empty grid means default).
pub fn theorem_b_bound(n: usize, exponents: &[f64], r_grid: &[f64], variant: Variant) -> Result<BoundCertificate> {
    let opts = TheoremBOptions { r_grid: r_grid.to_vec(), ..TheoremBOptions::default() };
    theorem_b_bound_with(n, exponents, &opts, variant)
}

pub fn theorem_b_bound_with(
    n: usize,
    exponents: &[f64],
    opts: &TheoremBOptions,
    variant: Variant,
) -> Result<BoundCertificate> {
    let scan = theorem_b_scan(n, exponents, opts)?;
    match variant {
        Variant::Rigorous => {
            scan.rigorous.ok_or_else(|| Error::NoApplicableRoute("no finite rigorous value on the (a, r) grid".into()))
        }
        Variant::Printed => scan
            .printed
            .ok_or(Error::AllPrintedPointsInvalid { invalid: scan.printed_invalid, total: scan.printed_total }),
    }
}

#[derive(Debug, Clone)]
pub struct PipelineOptions {
    /// Base eigenvalue of the source, replacing the exact one (needed for `p != 2`).
    pub base_override: Option<f64>,
    /// Replaces the convex estimate of `B_{r,p}` on the source.
    pub b_override: Option<f64>,
    pub dilatation: DilatationMethod,
    /// Jitters the sampled-sup grid.
    pub seed: Option<u64>,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        Self { base_override: None, b_override: None, dilatation: DilatationMethod::Analytic, seed: None }
    }
}

/// Routes `map: source -> target` to the sharpest applicable bound.
pub fn auto_pipeline(source: &DomainSpec, map: &MappingSpec, p: f64, r_grid: &[f64]) -> Result<BoundCertificate> {
    auto_pipeline_with(source, map, p, r_grid, &PipelineOptions::default())
}

pub fn auto_pipeline_with(
    source: &DomainSpec,
    map: &MappingSpec,
    p: f64,
    r_grid: &[f64],
    opts: &PipelineOptions,
) -> Result<BoundCertificate> {
    check_p(p)?;
    map.check_source(source)?;
    let target = map.image(source)?;
    let k = map.dilatation_sup_seeded(source, p, opts.dilatation, opts.seed)?;
    let base = match opts.base_override {
        Some(b) => Some(b),
        None if p == 2.0 => exact_mu1(source),
        None => None,
    };
    let sup = m_sup(map, source, p);
    let mut cert = match (sup, base) {
        (Ok(m), Some(base)) => {
            let mut c = if p == 2.0 {
                theorem_a_bound(k.value_pow_p, m.value_pow_s, base)?
            } else {
                p_laplace_pp_bound(k.value_pow_p, m.value_pow_s, base, p)?
            };
            c.notes.push(format!("route: ({p},{p}); base eigenvalue {}", base_source(opts.base_override)));
            c
        }
        (sup, _) => {
            let reason = match sup {
                Err(e) => format!("M_p unavailable ({})", e.tag()),
                Ok(_) => "no base eigenvalue".into(),
            };
            let mut c = rp_route(source, map, p, k.value, r_grid, opts)?;
            c.notes.insert(0, format!("route: (r,p); {reason}"));
            c
        }
    };
    cert.ledger.a = match map {
        MappingSpec::CuspMap { a, .. } => Some(*a),
        _ => None,
    };
    if opts.dilatation != DilatationMethod::Analytic {
        cert.notes.push(format!("K_p via {}", opts.dilatation.as_str()));
    }
    cert.target_domain = Some(target.clone());
    attach_classical(&mut cert, &target);
    Ok(cert)
}

fn base_source(o: Option<f64>) -> &'static str {
    if o.is_some() {
        "user-supplied"
    } else {
        "exact"
    }
}

fn rp_route(
    source: &DomainSpec,
    map: &MappingSpec,
    p: f64,
    kp: f64,
    r_grid: &[f64],
    opts: &PipelineOptions,
) -> Result<BoundCertificate> {
    let grid = if r_grid.is_empty() { default_r_grid(source.dim(), p) } else { r_grid.to_vec() };
    let mut best: Option<(f64, f64, PoincareConstantBound, f64)> = None;
    let mut skipped = Vec::new();
    for &r in &grid {
        let m = match m_rs(map, source, r, p) {
            Ok(m) => m,
            Err(e) => {
                skipped.push(format!("r={r}: {}", e.tag()));
                continue;
            }
        };
        let b = match opts.b_override {
            Some(v) => PoincareConstantBound::user_supplied(r, p, v)?,
            None => match convex_poincare_bound(source, r, p) {
                Ok(b) => b,
                Err(e) => {
                    skipped.push(format!("r={r}: {}", e.tag()));
                    continue;
                }
            },
        };
        let v = inverse_power(kp * m.value * b.value, p);
        if v.is_finite() && best.as_ref().is_none_or(|x| v > x.3) {
            best = Some((r, m.value, b, v));
        }
    }
    let (r, m, b, _) =
        best.ok_or_else(|| Error::NoApplicableRoute(format!("no exponent r admissible: {}", skipped.join(", "))))?;
    let mut c = if p == 2.0 { theorem_c_bound(kp, m, b.value)? } else { p_laplace_rp_bound(kp, m, b.value, p)? };
    c.ledger.r = Some(r);
    c.notes.push(format!("argmax r over {} grid points", grid.len()));
    c.notes.push(format!("B_{{r,p}} {}", b.source.as_str()));
    if !skipped.is_empty() {
        c.notes.push(format!("{} grid points skipped", skipped.len()));
    }
    Ok(c)
}

/// Attaches Payne-Weinberger and Szego-Weinberger values of the target
/// (Laplacian only).
pub fn attach_classical(cert: &mut BoundCertificate, target: &DomainSpec) {
    if cert.ledger.p != 2.0 {
        return;
    }
    if let Ok(u) = szego_weinberger_upper(target) {
        cert.upper_bound = Some(u);
        if cert.bound_value > u {
            cert.notes.push("warning: lower bound exceeds the Szego-Weinberger upper bound".into());
        }
    }
    if let Ok(l) = payne_weinberger(target) {
        cert.classical_lower = Some(l);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    const J11: f64 = 1.841_183_781_340_659_3;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn theorem_a_examples() {
        let e = theorem_a_bound(2.0, 2.0, J11 * J11).unwrap();
        assert!(rel(e.bound_value, J11 * J11 / 4.0) < 1e-15);
        assert!((e.bound_value - 0.84749).abs() < 1e-5);
        let r = theorem_a_bound(3.0, 3.0, PI * PI).unwrap();
        assert_eq!(r.bound_value, PI * PI / 9.0);
        assert_eq!(theorem_a_bound(1.0, 1.0, 7.5).unwrap().bound_value, 7.5);
        assert!(theorem_a_bound(1.0, f64::INFINITY, 1.0).is_err());
        assert_eq!(r.method, Method::TheoremA);
    }

    #[test]
    fn theorem_c_and_rp_examples() {
        assert_eq!(theorem_c_bound(1.0, 1.0, 1.0).unwrap().bound_value, 1.0);
        assert_eq!(p_laplace_rp_bound(1.0, 1.0, 1.0, 3.0).unwrap().bound_value, 1.0);
        assert!(theorem_c_bound(1.0, f64::INFINITY, 1.0).is_err());
        for &(k, m, b) in &[(1.3, 0.7, 2.9), (2.0, 0.5, 64.0)] {
            assert_eq!(
                theorem_c_bound(k, m, b).unwrap().bound_value,
                p_laplace_rp_bound(k, m, b, 2.0).unwrap().bound_value
            );
        }
    }

    #[test]
    fn cusp_theorem_c_regression() {
        let h1 = DomainSpec::simplex(3).unwrap();
        let map = MappingSpec::cusp(0.32, vec![2.0, 2.0]).unwrap();
        let k = map.dilatation_sup(&h1, 2.0, DilatationMethod::Analytic).unwrap();
        let m = m_rs(&map, &h1, 4.0, 2.0).unwrap();
        let b = convex_poincare_bound(&h1, 4.0, 2.0).unwrap();
        // regression constants from an independent Python evaluation
        assert!(rel(k.value, 2.7166155414412247) < 1e-13);
        assert!(rel(m.value, 0.8458970107524512) < 1e-13);
        let c = theorem_c_bound(k.value, m.value, b.value).unwrap();
        assert!(rel(c.bound_value, 4.6200838688684926e-05) < 1e-12);
    }

    #[test]
    fn p_laplace_rp_cusp_regression() {
        let n = 4;
        let g = vec![2.0, 1.0, 1.0];
        let gamma = 5.0;
        // r = 3.5 leaves no admissible a
        assert!(admissible_a_range(3.0, 3.5, n, gamma).unwrap().is_empty());
        let h1 = DomainSpec::simplex(n).unwrap();
        let map = MappingSpec::cusp(0.45, g).unwrap();
        let k = map.dilatation_sup(&h1, 3.0, DilatationMethod::Analytic).unwrap();
        let m = m_rs(&map, &h1, 6.0, 3.0).unwrap();
        let b = convex_poincare_bound(&h1, 6.0, 3.0).unwrap();
        assert!(rel(k.value, 2.549678087812651) < 1e-13);
        assert!(rel(m.value, 0.8601532551232606) < 1e-13);
        assert!(rel(b.value, 321.5392262451959) < 1e-12);
        let c = p_laplace_rp_bound(k.value, m.value, b.value, 3.0).unwrap();
        assert!(rel(c.bound_value, 2.8517703318741534e-09) < 1e-12);
    }

    #[test]
    fn pp_cancellations() {
        let a: [f64; 3] = [2.0, 1.5, 1.0];
        for &p in &[1.5, 2.0, 3.0] {
            let kp = a[0].powf(p) / a.iter().product::<f64>();
            let mp = a.iter().product::<f64>();
            let c = p_laplace_pp_bound(kp, mp, 1.0, p).unwrap();
            assert!(rel(c.bound_value, 1.0 / a[0].powf(p)) < 1e-15);
        }
        assert_eq!(p_laplace_pp_bound(1.0, 1.0, 4.2, 3.0).unwrap().bound_value, 4.2);
    }

    #[test]
    fn theorem_b_simplex_and_cusp() {
        let c = theorem_b_bound(3, &[1.0, 1.0], &[], Variant::Rigorous).unwrap();
        assert!(c.bound_value > 0.0 && c.bound_value.is_finite());
        let c22 = theorem_b_bound(3, &[2.0, 2.0], &[3.0, 4.0, 5.0], Variant::Rigorous).unwrap();
        let r = c22.ledger.r.unwrap();
        assert!([3.0, 4.0, 5.0].contains(&r));
        let range = admissible_a_range(2.0, r, 3, 5.0).unwrap();
        assert!(range.contains(c22.ledger.a.unwrap()));
        assert!(c22.bound_value < c.bound_value);
        // the certificate is the composition of module constants
        let v = theorem_b_rigorous_value(c22.ledger.a.unwrap(), &[2.0, 2.0], r, c22.ledger.b.unwrap());
        assert!(rel(c22.bound_value, v) < 1e-12);
    }

    #[test]
    fn theorem_b_printed_variant_defect() {
        assert!(printed_a_squared(1.0 / 3.0, &[2.0, 2.0]) < 0.0);
        assert!(matches!(
            theorem_b_bound(3, &[2.0, 2.0], &[4.0], Variant::Printed),
            Err(Error::AllPrintedPointsInvalid { .. })
        ));
        let scan = theorem_b_scan(3, &[2.0, 2.0], &TheoremBOptions::default()).unwrap();
        assert!(scan.printed_invalid > 0);
        assert!(scan.first_negative.unwrap().2 < 0.0);
        assert!(scan.rigorous.unwrap().notes.iter().any(|n| n.contains("negative")));
    }

    #[test]
    fn theorem_b_input_errors() {
        assert!(theorem_b_bound(2, &[1.0], &[], Variant::Rigorous).is_err());
        assert!(theorem_b_bound(3, &[2.0, 2.0], &[7.0], Variant::Rigorous).is_err());
        assert!(theorem_b_bound(3, &[0.5, 2.0], &[], Variant::Rigorous).is_err());
        assert!(theorem_b_bound(3, &[2.0], &[], Variant::Rigorous).is_err());
    }

    #[test]
    fn golden_section_beats_fine_grid() {
        let g = [2.0, 2.0];
        for &r in &[4.0, 5.0, 5.9] {
            let range = admissible_a_range(2.0, r, 3, 5.0).unwrap();
            let lo = range.lower + A_LOWER_GAP;
            let b = 64.0;
            let f = |a: f64| theorem_b_rigorous_value(a, &g, r, b);
            let best = optimize::maximize(|a| Some(f(a)), lo, range.upper, A_GRID_POINTS).unwrap();
            for i in 0..1024 {
                let a = lo + (range.upper - lo) * i as f64 / 1023.0;
                assert!(best.value >= f(a) - 1e-9);
            }
        }
    }

    #[test]
    fn auto_pipeline_routes() {
        let sq = DomainSpec::unit_box(2).unwrap();
        let rect = auto_pipeline(&sq, &MappingSpec::diagonal(vec![3.0, 1.0]).unwrap(), 2.0, &[]).unwrap();
        assert_eq!(rect.method, Method::TheoremA);
        assert_eq!(rect.bound_value, PI * PI / 9.0);
        assert!(rect.upper_bound.unwrap() >= rect.bound_value);

        let h1 = DomainSpec::simplex(3).unwrap();
        let cusp = MappingSpec::cusp(0.32, vec![2.0, 2.0]).unwrap();
        let c = auto_pipeline(&h1, &cusp, 2.0, &[]).unwrap();
        assert_eq!(c.method, Method::TheoremC);
        assert!(c.notes[0].contains("unbounded-jacobian"));
        assert!(c.bound_value < c.upper_bound.unwrap());

        let ball = DomainSpec::ball(3, 1.0).unwrap();
        let e = auto_pipeline(&ball, &MappingSpec::diagonal(vec![2.0, 1.0, 1.0]).unwrap(), 2.0, &[]).unwrap();
        let root = crate::constants::bessel_first_zero(3).unwrap().value;
        assert_eq!(e.method, Method::TheoremA);
        assert!(rel(e.bound_value, root * root / 4.0) < 1e-15);
    }

    #[test]
    fn auto_pipeline_p_laplace_needs_base() {
        let cube = DomainSpec::unit_box(3).unwrap();
        let map = MappingSpec::diagonal(vec![2.0, 1.5, 1.0]).unwrap();
        let opts = PipelineOptions { base_override: Some(1.0), ..PipelineOptions::default() };
        let c = auto_pipeline_with(&cube, &map, 3.0, &[], &opts).unwrap();
        assert_eq!(c.method, Method::PLaplacePp);
        assert!(rel(c.bound_value, 1.0 / 8.0) < 1e-15);
        assert!(c.upper_bound.is_none());
        // without a base the (r,p) route with the convex estimate is taken
        let c = auto_pipeline(&cube, &map, 3.0, &[]).unwrap();
        assert_eq!(c.method, Method::PLaplaceRp);
    }

    #[test]
    fn no_route_when_everything_diverges() {
        let h1 = DomainSpec::simplex(3).unwrap();
        let cusp = MappingSpec::cusp(0.3, vec![2.0, 2.0]).unwrap();
        // r = 4 puts a = 0.3 exactly at the divergence threshold
        assert!(matches!(auto_pipeline(&h1, &cusp, 2.0, &[4.0]), Err(Error::NoApplicableRoute(_))));
    }
}
