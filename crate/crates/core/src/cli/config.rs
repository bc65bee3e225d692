//! TOML run configuration. Unknown keys are rejected before anything runs.

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::geometry::DomainSpec;
use crate::mappings::{DilatationMethod, MappingSpec};
use crate::transfer::Variant;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub run: RunSection,
    pub domain: Option<DomainConfig>,
    pub mapping: Option<MappingConfig>,
    #[serde(default)]
    pub bound: BoundSection,
    #[serde(default)]
    pub oracle: OracleSection,
    pub sweep: Option<SweepSection>,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    pub command: Option<String>,
    pub scenario: Option<String>,
    pub p: Option<f64>,
    pub seed: Option<u64>,
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainConfig {
    pub kind: String,
    pub dim: Option<usize>,
    pub sides: Option<Vec<f64>>,
    pub radius: Option<f64>,
    pub semiaxes: Option<Vec<f64>>,
    pub exponents: Option<Vec<f64>>,
    pub vertices: Option<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MappingConfig {
    pub kind: String,
    pub dim: Option<usize>,
    pub coefficients: Option<Vec<f64>>,
    /// Omitted for the cusp map: `a` is then optimized.
    pub a: Option<f64>,
    pub exponents: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundSection {
    pub r_grid: Option<Vec<f64>>,
    pub variant: Option<String>,
    /// Base eigenvalue of the source domain.
    pub base: Option<f64>,
    /// Poincare constant of the source domain.
    pub poincare: Option<f64>,
    pub dilatation: Option<String>,
    pub a_grid_points: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleSection {
    /// Coarse cells per axis (finite differences); the fine level doubles it.
    pub cells: Option<usize>,
    /// Coarse mesh size (finite elements); the fine level halves it.
    pub h: Option<f64>,
    /// Number of nonzero eigenvalues to report.
    pub k: Option<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    /// `gamma`, `r` or `a`.
    pub axis: String,
    pub values: Vec<f64>,
    pub n: Option<usize>,
    pub exponents: Option<Vec<f64>>,
    /// With `axis = "gamma"`: vary only this exponent (0-based); otherwise all.
    pub component: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub path: Option<String>,
    pub format: Option<String>,
}

fn cfg_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| cfg_err(one_line(&e.to_string())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &str) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| cfg_err(format!("cannot read {path}: {e}")))?;
        Self::parse(&text)
    }

    /// Range checks for every numeric parameter.
    pub fn validate(&self) -> Result<()> {
        if let Some(p) = self.run.p {
            if !(p.is_finite() && p > 1.0) {
                return Err(cfg_err(format!("run.p must be > 1, got {p}")));
            }
        }
        if self.run.threads == Some(0) {
            return Err(cfg_err("run.threads must be >= 1"));
        }
        if let Some(c) = &self.run.command {
            if !["bound", "oracle", "validate", "sweep", "reproduce"].contains(&c.as_str()) {
                return Err(cfg_err(format!("unknown run.command {c:?}")));
            }
        }
        if let Some(grid) = &self.bound.r_grid {
            if grid.is_empty() {
                return Err(cfg_err("bound.r_grid is empty"));
            }
            if let Some(r) = grid.iter().find(|r| !(r.is_finite() && **r > 1.0)) {
                return Err(cfg_err(format!("bound.r_grid entries must be > 1, got {r}")));
            }
        }
        for (name, v) in [("bound.base", self.bound.base), ("bound.poincare", self.bound.poincare)] {
            if let Some(v) = v {
                if !(v.is_finite() && v > 0.0) {
                    return Err(cfg_err(format!("{name} must be > 0, got {v}")));
                }
            }
        }
        if let Some(v) = &self.bound.variant {
            parse_variant(v)?;
        }
        if let Some(v) = &self.bound.dilatation {
            parse_dilatation(v)?;
        }
        if let Some(n) = self.bound.a_grid_points {
            if !(2..=100_000).contains(&n) {
                return Err(cfg_err(format!("bound.a_grid_points must be in [2, 100000], got {n}")));
            }
        }
        if let Some(c) = self.oracle.cells {
            if !(8..=512).contains(&c) {
                return Err(cfg_err(format!("oracle.cells must be in [8, 512], got {c}")));
            }
        }
        if let Some(h) = self.oracle.h {
            if !(h.is_finite() && h > 0.0 && h <= 1.0) {
                return Err(cfg_err(format!("oracle.h must be in (0, 1], got {h}")));
            }
        }
        if let Some(k) = self.oracle.k {
            if !(1..=16).contains(&k) {
                return Err(cfg_err(format!("oracle.k must be in [1, 16], got {k}")));
            }
        }
        if let Some(s) = &self.sweep {
            if !["gamma", "r", "a"].contains(&s.axis.as_str()) {
                return Err(cfg_err(format!("sweep.axis must be gamma, r or a, got {:?}", s.axis)));
            }
            if let Some(v) = s.values.iter().find(|v| !v.is_finite()) {
                return Err(cfg_err(format!("sweep.values must be finite, got {v}")));
            }
        }
        if let Some(f) = &self.output.format {
            OutputFormat::parse(f)?;
        }
        if let Some(d) = &self.domain {
            d.to_spec()?;
        }
        if let Some(m) = &self.mapping {
            m.check_kind()?;
        }
        Ok(())
    }
}

pub fn one_line(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

pub fn parse_variant(s: &str) -> Result<Variant> {
    match s {
        "rigorous" => Ok(Variant::Rigorous),
        "printed" => Ok(Variant::Printed),
        _ => Err(cfg_err(format!("bound.variant must be rigorous or printed, got {s:?}"))),
    }
}

pub fn parse_dilatation(s: &str) -> Result<DilatationMethod> {
    match s {
        "analytic" => Ok(DilatationMethod::Analytic),
        "sampled-sup" => Ok(DilatationMethod::SampledSup),
        "printed-variant" => Ok(DilatationMethod::PrintedVariant),
        _ => Err(cfg_err(format!("bound.dilatation must be analytic, sampled-sup or printed-variant, got {s:?}"))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Text,
}

impl OutputFormat {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Self::Csv),
            "text" => Ok(Self::Text),
            _ => Err(cfg_err(format!("format must be csv or text, got {s:?}"))),
        }
    }
}

fn need<T: Clone>(v: &Option<T>, kind: &str, key: &str) -> Result<T> {
    v.clone().ok_or_else(|| cfg_err(format!("{kind} needs key {key:?}")))
}

impl DomainConfig {
    pub fn to_spec(&self) -> Result<DomainSpec> {
        let k = self.kind.as_str();
        match k {
            "box" => match (&self.sides, self.dim) {
                (Some(s), _) => DomainSpec::new_box(s.clone()),
                (None, Some(n)) => DomainSpec::unit_box(n),
                (None, None) => Err(cfg_err("box needs sides or dim")),
            },
            "ball" => DomainSpec::ball(need(&self.dim, k, "dim")?, self.radius.unwrap_or(1.0)),
            "ellipsoid" => DomainSpec::ellipsoid(need(&self.semiaxes, k, "semiaxes")?),
            "simplex" => DomainSpec::simplex(need(&self.dim, k, "dim")?),
            "holder-cusp" => DomainSpec::holder_cusp(need(&self.exponents, k, "exponents")?),
            "polygon" => DomainSpec::polygon(need(&self.vertices, k, "vertices")?),
            _ => {
                Err(cfg_err(format!("unknown domain kind {k:?} (box, ball, ellipsoid, simplex, holder-cusp, polygon)")))
            }
        }
    }
}

/// A mapping whose cusp exponent may be left free.
#[derive(Debug, Clone, PartialEq)]
pub enum MapChoice {
    Fixed(MappingSpec),
    CuspOptimized { exponents: Vec<f64> },
}

impl MappingConfig {
    fn check_kind(&self) -> Result<()> {
        self.to_choice(None).map(|_| ())
    }

    pub fn to_choice(&self, dim_hint: Option<usize>) -> Result<MapChoice> {
        let k = self.kind.as_str();
        match k {
            "identity" => {
                let n = self.dim.or(dim_hint).unwrap_or(2);
                Ok(MapChoice::Fixed(MappingSpec::identity(n)?))
            }
            "diagonal" => Ok(MapChoice::Fixed(MappingSpec::diagonal(need(&self.coefficients, k, "coefficients")?)?)),
            "cusp" => {
                let g = need(&self.exponents, k, "exponents")?;
                match self.a {
                    Some(a) => Ok(MapChoice::Fixed(MappingSpec::cusp(a, g)?)),
                    None => Ok(MapChoice::CuspOptimized { exponents: g }),
                }
            }
            _ => Err(cfg_err(format!("unknown mapping kind {k:?} (identity, diagonal, cusp)"))),
        }
    }
}
