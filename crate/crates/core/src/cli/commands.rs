//! Subcommand bodies. Each returns the text to emit and an exit code.

use std::f64::consts::PI;
use std::fmt::Write as _;

use rayon::prelude::*;

use super::config::{parse_dilatation, parse_variant, MapChoice, OutputFormat, RunConfig};
use super::scenarios::Scenario;
use crate::constants::{bessel_first_zero, convex_poincare_bound};
use crate::error::{Error, Result};
use crate::geometry::DomainSpec;
use crate::mappings::{printed_a_squared, MappingSpec};
use crate::oracle::{estimate_spectrum, OracleEstimate, Resolution, SpectrumResult};
use crate::transfer::certificate::csv_field;
use crate::transfer::{
    attach_classical, auto_pipeline_with, theorem_b_bound_with, BoundCertificate, PipelineOptions, TheoremBOptions,
    Variant, A_GRID_POINTS,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub output: String,
    pub code: i32,
}

impl Outcome {
    fn ok(output: String) -> Self {
        Self { output, code: EXIT_OK }
    }
}

/// Everything a subcommand needs after flags and config are merged.
#[derive(Debug, Clone)]
pub struct Context {
    pub cfg: RunConfig,
    pub scenario: Option<String>,
    pub format: OutputFormat,
    pub seed: Option<u64>,
}

impl Context {
    fn scenario(&self) -> Result<Scenario> {
        Scenario::resolve(&self.cfg, self.scenario.as_deref())
    }

    fn variant(&self) -> Result<Variant> {
        self.cfg.bound.variant.as_deref().map(parse_variant).transpose().map(|v| v.unwrap_or(Variant::Rigorous))
    }

    fn r_grid(&self) -> Vec<f64> {
        self.cfg.bound.r_grid.clone().unwrap_or_default()
    }

    fn pipeline_options(&self) -> Result<PipelineOptions> {
        let mut o = PipelineOptions {
            base_override: self.cfg.bound.base,
            b_override: self.cfg.bound.poincare,
            seed: self.seed,
            ..PipelineOptions::default()
        };
        if let Some(d) = &self.cfg.bound.dilatation {
            o.dilatation = parse_dilatation(d)?;
        }
        Ok(o)
    }

    fn theorem_b_options(&self, r_grid: Vec<f64>) -> TheoremBOptions {
        TheoremBOptions {
            r_grid,
            b_override: self.cfg.bound.poincare,
            a_grid: self.cfg.bound.a_grid_points.unwrap_or(A_GRID_POINTS),
        }
    }

    fn resolution(&self) -> Resolution {
        Resolution { cells: self.cfg.oracle.cells, h: self.cfg.oracle.h }
    }
}

/// Lower-bound certificate for a scenario.
pub fn certificate(ctx: &Context, sc: &Scenario) -> Result<BoundCertificate> {
    let variant = ctx.variant()?;
    match &sc.map {
        MapChoice::Fixed(m) => {
            if variant == Variant::Printed {
                return Err(Error::Inapplicable("the printed variant exists only for the optimized cusp map".into()));
            }
            auto_pipeline_with(&sc.source, m, sc.p, &ctx.r_grid(), &ctx.pipeline_options()?)
        }
        MapChoice::CuspOptimized { exponents } => {
            if sc.p != 2.0 {
                return Err(Error::Inapplicable(format!("optimized cusp bound needs p = 2, got {}", sc.p)));
            }
            let n = exponents.len() + 1;
            if sc.source != DomainSpec::simplex(n)? {
                return Err(Error::Config(format!("the optimized cusp map needs the {n}-simplex as source")));
            }
            let mut c = theorem_b_bound_with(n, exponents, &ctx.theorem_b_options(ctx.r_grid()), variant)?;
            let target = DomainSpec::holder_cusp(exponents.clone())?;
            attach_classical(&mut c, &target);
            Ok(c)
        }
    }
}

pub fn run_bound(ctx: &Context) -> Result<Outcome> {
    let sc = ctx.scenario()?;
    let c = certificate(ctx, &sc)?;
    let out = match ctx.format {
        OutputFormat::Csv => format!("{}\n{}\n", BoundCertificate::csv_header(), c.to_csv_row()),
        OutputFormat::Text => format!("scenario={}\n{}", sc.name, c.to_text()),
    };
    Ok(Outcome::ok(out))
}

fn oracle_estimate(ctx: &Context, sc: &Scenario, k: usize) -> Result<(DomainSpec, OracleEstimate)> {
    let target = sc.target()?;
    let est = estimate_spectrum(&target, ctx.resolution(), k)?;
    Ok((target, est))
}

pub fn run_oracle(ctx: &Context) -> Result<Outcome> {
    let sc = ctx.scenario()?;
    let k = ctx.cfg.oracle.k.unwrap_or(1);
    let (target, est) = oracle_estimate(ctx, &sc, k)?;
    let mut s = String::new();
    match ctx.format {
        OutputFormat::Csv => {
            let _ = writeln!(s, "domain,level,method,indicative,{}", SpectrumResult::csv_header(k));
            for (level, r) in [("coarse", &est.coarse), ("fine", &est.fine)] {
                let _ = writeln!(
                    s,
                    "{},{level},{},{},{}",
                    csv_field(&target.label()),
                    r.method.as_str(),
                    r.indicative,
                    r.csv_row()
                );
            }
        }
        OutputFormat::Text => {
            let _ = writeln!(s, "domain={}", target.label());
            let _ = writeln!(s, "method={}", est.fine.method.as_str());
            for (level, r) in [("coarse", &est.coarse), ("fine", &est.fine)] {
                let _ = writeln!(s, "{level}.h={}", r.h);
                let _ = writeln!(s, "{level}.dof={}", r.dof);
                for (i, v) in r.eigenvalues.iter().enumerate().skip(1) {
                    let _ = writeln!(s, "{level}.mu{i}={v}");
                }
            }
            write_estimate_summary(&mut s, &est);
        }
    }
    Ok(Outcome::ok(s))
}

fn write_estimate_summary(s: &mut String, est: &OracleEstimate) {
    let _ = writeln!(s, "mu1={}", est.mu1);
    if let Some(e) = est.extrapolated {
        let _ = writeln!(s, "richardson={e}");
    }
    let _ = writeln!(s, "slack={}", est.slack);
    let _ = writeln!(s, "indicative={}", est.indicative);
    if let Some(n) = &est.fine.note {
        let _ = writeln!(s, "note={n}");
    }
}

/// One ordering between a certificate value and the oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub name: String,
    pub value: f64,
    pub oracle: f64,
    pub slack: f64,
    /// `value <= oracle + slack` for lower bounds, `oracle <= value + slack` for upper.
    pub lower: bool,
    pub holds: bool,
}

impl Comparison {
    fn new(name: String, value: f64, oracle: f64, slack: f64, lower: bool) -> Self {
        let holds = if lower { value <= oracle + slack } else { oracle <= value + slack };
        Self { name, value, oracle, slack, lower, holds }
    }

    fn status(&self) -> &'static str {
        if self.holds {
            "PASS"
        } else {
            "FAIL"
        }
    }

    fn line(&self) -> String {
        let (lhs, rhs) = if self.lower { (self.value, self.oracle) } else { (self.oracle, self.value) };
        format!("{} {}: {lhs} <= {rhs} + slack {}", self.status(), self.name, self.slack)
    }
}

/// Certificate, oracle and every ordering between them.
#[derive(Debug, Clone)]
pub struct Validation {
    pub scenario: String,
    pub certificate: BoundCertificate,
    pub estimate: OracleEstimate,
    pub comparisons: Vec<Comparison>,
}

impl Validation {
    pub fn passed(&self) -> bool {
        self.comparisons.iter().all(|c| c.holds)
    }
}

pub fn validate(ctx: &Context, sc: &Scenario) -> Result<Validation> {
    if sc.p != 2.0 {
        return Err(Error::Inapplicable(format!(
            "the oracle solves the Laplacian; validate needs p = 2, got {}",
            sc.p
        )));
    }
    let cert = certificate(ctx, sc)?;
    let (_, est) = oracle_estimate(ctx, sc, 1)?;
    let (mu, slack) = (est.mu1, est.slack);
    let mut comparisons =
        vec![Comparison::new(format!("lower {}", cert.method.as_str()), cert.bound_value, mu, slack, true)];
    if let Some(l) = cert.classical_lower {
        comparisons.push(Comparison::new("lower payne-weinberger".into(), l, mu, slack, true));
    }
    if let Some(u) = cert.upper_bound {
        comparisons.push(Comparison::new("upper szego-weinberger".into(), u, mu, slack, false));
    }
    Ok(Validation { scenario: sc.name.clone(), certificate: cert, estimate: est, comparisons })
}

pub fn run_validate(ctx: &Context) -> Result<Outcome> {
    let sc = ctx.scenario()?;
    let v = validate(ctx, &sc)?;
    let mut s = String::new();
    match ctx.format {
        OutputFormat::Csv => {
            let _ = writeln!(s, "scenario,check,status,value,oracle_mu1,slack,indicative");
            for c in &v.comparisons {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{}",
                    csv_field(&v.scenario),
                    c.name,
                    c.status(),
                    c.value,
                    c.oracle,
                    c.slack,
                    v.estimate.indicative
                );
            }
        }
        OutputFormat::Text => {
            let _ = writeln!(s, "scenario={}", v.scenario);
            let _ = writeln!(s, "domain={}", v.certificate.domain_label());
            let _ = writeln!(s, "oracle={}", v.estimate.fine.method.as_str());
            let _ = writeln!(s, "coarse.mu1={}", v.estimate.coarse.mu1().unwrap_or(f64::NAN));
            write_estimate_summary(&mut s, &v.estimate);
            for c in &v.comparisons {
                let _ = writeln!(s, "{}", c.line());
            }
            let _ = writeln!(s, "result={}", if v.passed() { "PASS" } else { "FAIL" });
        }
    }
    let code = if v.passed() { EXIT_OK } else { EXIT_MISMATCH };
    Ok(Outcome { output: s, code })
}

pub fn run_sweep(ctx: &Context) -> Result<Outcome> {
    let sw = ctx.cfg.sweep.as_ref().ok_or_else(|| Error::Config("sweep needs a [sweep] section".into()))?;
    if sw.values.is_empty() {
        return Err(Error::Config("empty sweep grid".into()));
    }
    let n = sw.n.unwrap_or(3);
    if n < 3 {
        return Err(Error::Config(format!("sweep.n must be >= 3, got {n}")));
    }
    let base = sw.exponents.clone().unwrap_or_else(|| vec![2.0; n - 1]);
    if base.len() != n - 1 {
        return Err(Error::DimensionMismatch { expected: n - 1, found: base.len() });
    }
    if let Some(c) = sw.component {
        if c >= base.len() {
            return Err(Error::Config(format!("sweep.component {c} out of range for {} exponents", base.len())));
        }
    }
    let variant = ctx.variant()?;
    let opts = ctx.pipeline_options()?;
    let point = |v: f64| -> Result<BoundCertificate> {
        match sw.axis.as_str() {
            "gamma" => {
                let mut g = base.clone();
                match sw.component {
                    Some(c) => g[c] = v,
                    None => g.iter_mut().for_each(|x| *x = v),
                }
                theorem_b_bound_with(n, &g, &ctx.theorem_b_options(ctx.r_grid()), variant)
            }
            "r" => theorem_b_bound_with(n, &base, &ctx.theorem_b_options(vec![v]), variant),
            _ => {
                let map = MappingSpec::cusp(v, base.clone())?;
                auto_pipeline_with(&DomainSpec::simplex(n)?, &map, 2.0, &ctx.r_grid(), &opts)
            }
        }
    };
    let results: Vec<Result<BoundCertificate>> = sw.values.par_iter().map(|&v| point(v)).collect();
    if let Some(Err(e)) = results.iter().find(|r| r.is_err()).filter(|_| results.iter().all(|r| r.is_err())) {
        return Err(Error::NoApplicableRoute(format!("every sweep point failed; first: {}", e.tag())));
    }
    let best = results
        .iter()
        .enumerate()
        .filter_map(|(i, r)| r.as_ref().ok().map(|c| (i, c.bound_value)))
        .fold(None, |acc: Option<(usize, f64)>, x| match acc {
            Some(b) if b.1 >= x.1 => Some(b),
            _ => Some(x),
        })
        .map(|b| b.0);
    let mut s = format!("axis,value,status,{}\n", BoundCertificate::csv_header());
    for (i, (v, r)) in sw.values.iter().zip(&results).enumerate() {
        match r {
            Ok(c) => {
                let mut c = c.clone();
                if Some(i) == best {
                    c.notes.push(format!("argmax-{}", sw.axis));
                }
                let _ = writeln!(s, "{},{v},ok,{}", sw.axis, c.to_csv_row());
            }
            Err(e) => {
                let empty = ",".repeat(12);
                let msg = csv_field(&format!("error {}: {e}", e.tag()));
                let _ = writeln!(s, "{},{v},error,{empty}{msg}", sw.axis);
            }
        }
    }
    Ok(Outcome::ok(s))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    KnownDiscrepancy,
    Fail,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::KnownDiscrepancy => "KNOWN-DISCREPANCY",
            Status::Fail => "FAIL",
        }
    }
}

#[derive(Debug, Clone)]
pub struct ReproRow {
    pub quantity: String,
    pub published: String,
    pub computed: String,
    pub status: Status,
}

fn row(quantity: impl Into<String>, published: impl Into<String>, computed: impl Into<String>, ok: bool) -> ReproRow {
    ReproRow {
        quantity: quantity.into(),
        published: published.into(),
        computed: computed.into(),
        status: if ok { Status::Pass } else { Status::Fail },
    }
}

fn known(quantity: impl Into<String>, published: impl Into<String>, computed: impl Into<String>) -> ReproRow {
    ReproRow {
        quantity: quantity.into(),
        published: published.into(),
        computed: computed.into(),
        status: Status::KnownDiscrepancy,
    }
}

fn scenario_bound(name: &str, p: f64, base: Option<f64>) -> Result<BoundCertificate> {
    let mut sc = Scenario::builtin(name)?;
    sc.p = p;
    let MapChoice::Fixed(m) = &sc.map else {
        return Err(Error::Config(format!("{name} has no fixed mapping")));
    };
    let opts = PipelineOptions { base_override: base, ..PipelineOptions::default() };
    auto_pipeline_with(&sc.source, m, p, &[], &opts)
}

/// Every published number the library can regenerate, with its status.
pub fn reproduce_rows() -> Result<Vec<ReproRow>> {
    let mut rows = Vec::new();
    let j = bessel_first_zero(2)?.value;
    rows.push(row("j'_{1,1}", "1.84118", format!("{j:.5}"), format!("{j:.5}") == "1.84118"));

    let rect = scenario_bound("rect-3-1", 2.0, None)?.bound_value;
    rows.push(row(
        "rectangle (0,3)x(0,1) lower bound",
        format!("pi^2/9 = {}", PI * PI / 9.0),
        rect.to_string(),
        rect == PI * PI / 9.0,
    ));

    let ell = scenario_bound("ellipse-2-1", 2.0, None)?.bound_value;
    rows.push(row("ellipse (2,1) lower bound", "0.84749", format!("{ell:.5}"), format!("{ell:.5}") == "0.84749"));
    rows.push(row("2 j'_{1,1} > pi", format!("> {PI:.5}"), format!("{:.5}", 2.0 * j), 2.0 * j > PI));

    for (name, example, amax) in
        [("cube-parallelepiped", "parallelepiped", 2.0f64), ("ball-ellipsoid-211", "ellipsoid", 2.0)]
    {
        for p in [1.5, 2.0, 3.0] {
            let base = 1.0;
            let c = scenario_bound(name, p, Some(base))?;
            let expect = base / amax.powf(p);
            let ok = (c.bound_value - expect).abs() <= 4.0 * f64::EPSILON * expect;
            rows.push(row(
                format!("{example} p={p} bound / base"),
                format!("1/max(a_i)^p = {expect}"),
                c.bound_value.to_string(),
                ok,
            ));
        }
    }

    let p32 = bessel_first_zero(3)?.value;
    let ellipsoid = scenario_bound("ball-ellipsoid-211", 2.0, None)?.bound_value;
    rows.push(known(
        "ellipsoid (2,1,1) lower bound, printed without the square",
        format!("p_{{3/2}}/4 = {}", p32 / 4.0),
        format!("p_{{3/2}}^2/4 = {ellipsoid}"),
    ));

    let a2 = printed_a_squared(1.0 / 3.0, &[2.0, 2.0]);
    rows.push(known("printed A^2 at g=(2,2), a=1/3", "positive (a squared norm)", a2.to_string()));

    let v = convex_poincare_bound(&DomainSpec::simplex(3)?, 4.0, 2.0)?
        .validity
        .ok_or_else(|| Error::Inapplicable("missing validity record".into()))?;
    rows.push(known(
        "Poincare estimate delta at n=3, r=4, p=2",
        format!("1/p + 1/r = {}", v.printed_delta),
        format!("1/p - 1/r = {}", v.delta),
    ));
    Ok(rows)
}

pub fn run_reproduce(ctx: &Context) -> Result<Outcome> {
    let rows = reproduce_rows()?;
    let mut s = String::new();
    match ctx.format {
        OutputFormat::Csv => {
            s.push_str("quantity,published,computed,status\n");
            for r in &rows {
                let _ = writeln!(
                    s,
                    "{},{},{},{}",
                    csv_field(&r.quantity),
                    csv_field(&r.published),
                    csv_field(&r.computed),
                    r.status.as_str()
                );
            }
        }
        OutputFormat::Text => {
            let w0 = rows.iter().map(|r| r.quantity.len()).max().unwrap_or(0);
            let w1 = rows.iter().map(|r| r.published.len()).max().unwrap_or(0);
            let w2 = rows.iter().map(|r| r.computed.len()).max().unwrap_or(0);
            for r in &rows {
                let _ = writeln!(
                    s,
                    "{:<w0$}  {:<w1$}  {:<w2$}  {}",
                    r.quantity,
                    r.published,
                    r.computed,
                    r.status.as_str()
                );
            }
        }
    }
    let code = if rows.iter().any(|r| r.status == Status::Fail) { EXIT_MISMATCH } else { EXIT_OK };
    Ok(Outcome { output: s, code })
}
