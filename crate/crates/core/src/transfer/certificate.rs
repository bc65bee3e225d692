//! Bound certificates and their text / CSV serializations.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::geometry::DomainSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Lower,
    Upper,
}

impl Direction {
    pub fn as_str(&self) -> &'static str {
        match self {
            Direction::Lower => "lower",
            Direction::Upper => "upper",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    TheoremA,
    TheoremC,
    TheoremB,
    PLaplacePp,
    PLaplaceRp,
    PayneWeinberger,
    SzegoWeinberger,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::TheoremA => "theorem-A",
            Method::TheoremC => "theorem-C",
            Method::TheoremB => "theorem-B",
            Method::PLaplacePp => "p-laplace-pp",
            Method::PLaplaceRp => "p-laplace-rp",
            Method::PayneWeinberger => "payne-weinberger",
            Method::SzegoWeinberger => "szego-weinberger",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    Rigorous,
    Printed,
}

impl Variant {
    pub fn as_str(&self) -> &'static str {
        match self {
            Variant::Rigorous => "rigorous",
            Variant::Printed => "printed",
        }
    }
}

/// Named constants that produced a bound.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Ledger {
    /// `K_p`.
    pub k: Option<f64>,
    /// `M_p` or `M_{r,p}`.
    pub m: Option<f64>,
    /// `B_{r,p}`.
    pub b: Option<f64>,
    /// Base eigenvalue on the source domain.
    pub base: Option<f64>,
    pub p: f64,
    pub r: Option<f64>,
    pub a: Option<f64>,
    /// Anything else worth auditing (diameters, radii, roots).
    pub extra: Vec<(String, f64)>,
}

impl Ledger {
    pub fn with_p(p: f64) -> Self {
        Self { p, ..Self::default() }
    }

    fn named(&self) -> Vec<(&str, Option<f64>)> {
        let mut v = vec![
            ("K", self.k),
            ("M", self.m),
            ("B", self.b),
            ("base", self.base),
            ("p", Some(self.p)),
            ("r", self.r),
            ("a", self.a),
        ];
        v.extend(self.extra.iter().map(|(k, x)| (k.as_str(), Some(*x))));
        v
    }
}

#[derive(Debug, Clone)]
pub struct BoundCertificate {
    pub target_domain: Option<DomainSpec>,
    pub bound_value: f64,
    pub direction: Direction,
    pub method: Method,
    pub ledger: Ledger,
    pub variant: Variant,
    pub notes: Vec<String>,
    /// Szego-Weinberger value of the target, when attached.
    pub upper_bound: Option<f64>,
    /// Payne-Weinberger value of the target, when attached.
    pub classical_lower: Option<f64>,
}

impl BoundCertificate {
    pub fn new(method: Method, direction: Direction, bound_value: f64, ledger: Ledger) -> Result<Self> {
        let cert = Self {
            target_domain: None,
            bound_value,
            direction,
            method,
            ledger,
            variant: Variant::Rigorous,
            notes: Vec::new(),
            upper_bound: None,
            classical_lower: None,
        };
        cert.check()?;
        Ok(cert)
    }

    pub fn with_domain(mut self, d: DomainSpec) -> Self {
        self.target_domain = Some(d);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    /// Checks positivity, finiteness and that lower bounds carry their ledger.
    pub fn check(&self) -> Result<()> {
        if !(self.bound_value.is_finite() && self.bound_value > 0.0) {
            return Err(Error::NonFinite(format!(
                "{} bound must be finite and > 0, got {}",
                self.method.as_str(),
                self.bound_value
            )));
        }
        for (name, v) in self.ledger.named() {
            if let Some(x) = v {
                if !x.is_finite() {
                    return Err(Error::NonFinite(format!("ledger constant {name} = {x}")));
                }
            }
        }
        let l = &self.ledger;
        let complete = match self.method {
            Method::TheoremA | Method::PLaplacePp => l.k.is_some() && l.m.is_some() && l.base.is_some(),
            Method::TheoremC | Method::PLaplaceRp | Method::TheoremB => l.k.is_some() && l.m.is_some() && l.b.is_some(),
            Method::PayneWeinberger | Method::SzegoWeinberger => !l.extra.is_empty(),
        };
        if self.direction == Direction::Lower && !complete {
            return Err(Error::Inapplicable(format!("incomplete ledger for {}", self.method.as_str())));
        }
        Ok(())
    }

    pub fn domain_label(&self) -> String {
        self.target_domain.as_ref().map(|d| d.label()).unwrap_or_else(|| "unspecified".into())
    }

    /// Line-oriented `key=value` block.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "domain={}", self.domain_label());
        let _ = writeln!(s, "method={}", self.method.as_str());
        let _ = writeln!(s, "direction={}", self.direction.as_str());
        let _ = writeln!(s, "variant={}", self.variant.as_str());
        let _ = writeln!(s, "bound={}", self.bound_value);
        for (name, v) in self.ledger.named() {
            if let Some(x) = v {
                let _ = writeln!(s, "{name}={x}");
            }
        }
        if let Some(u) = self.upper_bound {
            let _ = writeln!(s, "upper_bound={u}");
        }
        if let Some(l) = self.classical_lower {
            let _ = writeln!(s, "payne_weinberger={l}");
        }
        for n in &self.notes {
            let _ = writeln!(s, "note={n}");
        }
        s
    }

    pub fn csv_header() -> &'static str {
        "domain,method,variant,p,r,a,K,M,B,base,bound,upper_bound,warnings"
    }

    pub fn to_csv_row(&self) -> String {
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        let l = &self.ledger;
        [
            csv_field(&self.domain_label()),
            self.method.as_str().to_string(),
            self.variant.as_str().to_string(),
            l.p.to_string(),
            opt(l.r),
            opt(l.a),
            opt(l.k),
            opt(l.m),
            opt(l.b),
            opt(l.base),
            self.bound_value.to_string(),
            opt(self.upper_bound),
            csv_field(&self.notes.join("; ")),
        ]
        .join(",")
    }
}

pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn to_csv(certs: &[BoundCertificate]) -> String {
    let mut s = String::from(BoundCertificate::csv_header());
    s.push('\n');
    for c in certs {
        s.push_str(&c.to_csv_row());
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> BoundCertificate {
        let ledger = Ledger { k: Some(2f64.sqrt()), m: Some(2f64.sqrt()), base: Some(3.0), ..Ledger::with_p(2.0) };
        BoundCertificate::new(Method::TheoremA, Direction::Lower, 0.75, ledger)
            .unwrap()
            .with_domain(DomainSpec::ellipsoid(vec![2.0, 1.0]).unwrap())
            .with_note("a, \"quoted\" note")
    }

    #[test]
    fn csv_row_has_stable_columns() {
        let c = sample();
        let header_cols = BoundCertificate::csv_header().split(',').count();
        assert_eq!(header_cols, 13);
        let row = c.to_csv_row();
        assert!(row.starts_with("ellipsoid[") || row.starts_with("\"ellipsoid["));
        assert!(row.ends_with("\"a, \"\"quoted\"\" note\""));
        assert!(row.contains(",theorem-A,rigorous,2,,,"));
    }

    #[test]
    fn text_block_lists_ledger() {
        let t = sample().to_text();
        assert!(t.contains("method=theorem-A\n"));
        assert!(t.contains("bound=0.75\n"));
        assert!(t.contains("base=3\n"));
        assert!(!t.contains("\nr="));
    }

    #[test]
    fn invalid_certificates_rejected() {
        let ledger = Ledger { k: Some(1.0), m: Some(1.0), base: Some(1.0), ..Ledger::with_p(2.0) };
        assert!(BoundCertificate::new(Method::TheoremA, Direction::Lower, -1.0, ledger.clone()).is_err());
        assert!(BoundCertificate::new(Method::TheoremA, Direction::Lower, f64::INFINITY, ledger.clone()).is_err());
        let partial = Ledger { base: None, ..ledger };
        assert!(BoundCertificate::new(Method::TheoremA, Direction::Lower, 1.0, partial).is_err());
    }
}
