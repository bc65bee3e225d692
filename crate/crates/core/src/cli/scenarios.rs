//! Built-in named scenarios.

use super::config::{MapChoice, RunConfig};
use crate::error::{Error, Result};
use crate::geometry::DomainSpec;
use crate::mappings::MappingSpec;

pub const SCENARIOS: [&str; 5] = ["ellipse-2-1", "rect-3-1", "cusp-2-2", "ball-ellipsoid-211", "cube-parallelepiped"];

/// Source domain, mapping and exponent of one bound computation.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub source: DomainSpec,
    pub map: MapChoice,
    pub p: f64,
}

impl Scenario {
    pub fn builtin(name: &str) -> Result<Self> {
        let (source, map) = match name {
            "ellipse-2-1" => (DomainSpec::ball(2, 1.0)?, MapChoice::Fixed(MappingSpec::diagonal(vec![2.0, 1.0])?)),
            "rect-3-1" => (DomainSpec::unit_box(2)?, MapChoice::Fixed(MappingSpec::diagonal(vec![3.0, 1.0])?)),
            "cusp-2-2" => (DomainSpec::simplex(3)?, MapChoice::CuspOptimized { exponents: vec![2.0, 2.0] }),
            "ball-ellipsoid-211" => {
                (DomainSpec::ball(3, 1.0)?, MapChoice::Fixed(MappingSpec::diagonal(vec![2.0, 1.0, 1.0])?))
            }
            "cube-parallelepiped" => {
                (DomainSpec::unit_box(3)?, MapChoice::Fixed(MappingSpec::diagonal(vec![2.0, 1.5, 1.0])?))
            }
            _ => return Err(Error::Config(format!("unknown scenario {name:?} (known: {})", SCENARIOS.join(", ")))),
        };
        Ok(Self { name: name.to_string(), source, map, p: 2.0 })
    }

    /// Scenario from a config: a named preset, overridden by inline sections.
    pub fn resolve(cfg: &RunConfig, cli_scenario: Option<&str>) -> Result<Self> {
        let name = cli_scenario.map(str::to_string).or_else(|| cfg.run.scenario.clone());
        let mut sc = match &name {
            Some(n) => Self::builtin(n)?,
            None => {
                let d =
                    cfg.domain.as_ref().ok_or_else(|| Error::Config("no scenario and no [domain] section".into()))?;
                let source = d.to_spec()?;
                let n = source.dim();
                Self { name: "inline".into(), source, map: MapChoice::Fixed(MappingSpec::identity(n)?), p: 2.0 }
            }
        };
        if name.is_some() {
            if let Some(d) = &cfg.domain {
                sc.source = d.to_spec()?;
                sc.name.push_str("+domain");
            }
        }
        if let Some(m) = &cfg.mapping {
            sc.map = m.to_choice(Some(sc.source.dim()))?;
            if name.is_some() {
                sc.name.push_str("+mapping");
            }
        }
        if let Some(p) = cfg.run.p {
            sc.p = p;
        }
        if let MapChoice::Fixed(m) = &sc.map {
            m.check_source(&sc.source)?;
        }
        Ok(sc)
    }

    /// Image of the source under the mapping.
    pub fn target(&self) -> Result<DomainSpec> {
        match &self.map {
            MapChoice::Fixed(m) => m.image(&self.source),
            MapChoice::CuspOptimized { exponents } => DomainSpec::holder_cusp(exponents.clone()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_resolve() {
        for name in SCENARIOS {
            let s = Scenario::builtin(name).unwrap();
            assert!(s.target().is_ok(), "{name}");
        }
        assert!(Scenario::builtin("nope").is_err());
    }

    #[test]
    fn inline_overrides() {
        let cfg = RunConfig::parse(
            "[run]\nscenario = \"rect-3-1\"\n[mapping]\nkind = \"diagonal\"\ncoefficients = [5.0, 1.0]\n",
        )
        .unwrap();
        let s = Scenario::resolve(&cfg, None).unwrap();
        assert_eq!(s.target().unwrap(), DomainSpec::new_box(vec![5.0, 1.0]).unwrap());
        let bad = RunConfig::parse("[mapping]\nkind = \"diagonal\"\ncoefficients = [5.0, 1.0, 1.0]\n").unwrap();
        assert!(Scenario::resolve(&bad, Some("rect-3-1")).is_err());
    }
}
