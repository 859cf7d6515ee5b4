use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::{domain_from_range, make_disk, make_ellipse, ConvexDomain};
use crate::error::{Error, Result};
use crate::linalg::CMat;
use crate::scalar::Real;

fn default_nodes() -> usize {
    256
}

/// Domain description as it appears in configuration files:
/// `{"kind": "disk" | "ellipse" | "range", "params": {...}}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "lowercase")]
pub enum DomainSpec {
    Disk {
        #[serde(default)]
        center: [f64; 2],
        radius: f64,
    },
    Ellipse {
        #[serde(default)]
        center: [f64; 2],
        a: f64,
        b: f64,
        #[serde(default)]
        rot: f64,
    },
    /// Smoothed neighbourhood of the numerical range of the operator under study.
    Range {
        margin: f64,
        #[serde(default = "default_nodes")]
        nodes: usize,
    },
}

impl DomainSpec {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Input(format!("domain spec: {e}")))
    }

    /// Builds the domain; `range` domains need the operator.
    pub fn build<T: Real>(&self, op: Option<&CMat<T>>) -> Result<ConvexDomain<T>> {
        let c = |p: [f64; 2]| Complex::new(T::lit(p[0]), T::lit(p[1]));
        match *self {
            DomainSpec::Disk { center, radius } => make_disk(c(center), T::lit(radius)),
            DomainSpec::Ellipse { center, a, b, rot } => {
                make_ellipse(c(center), T::lit(a), T::lit(b), T::lit(rot))
            }
            DomainSpec::Range { margin, nodes } => {
                let op = op.ok_or_else(|| {
                    Error::Parameter("a range domain needs an operator".into())
                })?;
                domain_from_range(op, T::lit(margin), nodes)
            }
        }
    }
}
