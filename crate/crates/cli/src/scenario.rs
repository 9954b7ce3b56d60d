//! Scenario files: which bundle, which connection, which suites.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BundleKind {
    Trivial,
    Hopf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BaseKind {
    R2,
    Torus,
    S2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupKind {
    U1,
    Su2,
    Rn,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleSpec {
    pub kind: BundleKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<BaseKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupKind>,
    /// Dimension for `rn`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ConnectionSpec {
    Flat,
    Magnetic { field: f64 },
    HopfCanonical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    FbsExtension,
    ConnectionAxioms,
    Roundtrips,
    GroupoidAxioms,
    LlgpdExtension,
    Curvature,
    Flatness,
    SemidirectPipeline,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::FbsExtension,
        Suite::ConnectionAxioms,
        Suite::Roundtrips,
        Suite::GroupoidAxioms,
        Suite::LlgpdExtension,
        Suite::Curvature,
        Suite::Flatness,
        Suite::SemidirectPipeline,
    ];

    /// Position in the closed enumeration; seeds are derived from it.
    pub fn index(self) -> u64 {
        Suite::ALL.iter().position(|s| *s == self).unwrap() as u64
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Suite::FbsExtension => "fbs-extension",
            Suite::ConnectionAxioms => "connection-axioms",
            Suite::Roundtrips => "roundtrips",
            Suite::GroupoidAxioms => "groupoid-axioms",
            Suite::LlgpdExtension => "llgpd-extension",
            Suite::Curvature => "curvature",
            Suite::Flatness => "flatness",
            Suite::SemidirectPipeline => "semidirect-pipeline",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub bundle: BundleSpec,
    pub connection: ConnectionSpec,
    pub suites: Vec<Suite>,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
}

fn default_samples() -> usize {
    1000
}

fn default_tolerance() -> f64 {
    1e-9
}

#[derive(Debug)]
pub struct ScenarioError(pub String);

impl fmt::Display for ScenarioError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid scenario: {}", self.0)
    }
}

impl std::error::Error for ScenarioError {}

/// The bundle a valid scenario resolves to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResolvedBundle {
    Trivial { base: BaseKind, group: ResolvedGroup },
    Hopf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResolvedGroup {
    U1,
    Su2,
    Rn(usize),
}

pub const MAX_RN_DIM: usize = 3;

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self, ScenarioError> {
        let s: Scenario = serde_json::from_str(text).map_err(|e| ScenarioError(e.to_string()))?;
        s.validate()?;
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self, ScenarioError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ScenarioError(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        if self.samples == 0 {
            return Err(ScenarioError("samples must be at least 1".into()));
        }
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return Err(ScenarioError("tolerance must be a positive number".into()));
        }
        if self.suites.is_empty() {
            return Err(ScenarioError("no suites selected".into()));
        }
        let bundle = self.resolve_bundle()?;
        match (&self.connection, bundle) {
            (ConnectionSpec::Flat, ResolvedBundle::Trivial { .. }) => Ok(()),
            (ConnectionSpec::Magnetic { field }, ResolvedBundle::Trivial { base: BaseKind::R2, group: ResolvedGroup::U1 }) => {
                if field.is_finite() {
                    Ok(())
                } else {
                    Err(ScenarioError("magnetic field must be finite".into()))
                }
            }
            (ConnectionSpec::HopfCanonical, ResolvedBundle::Hopf) => Ok(()),
            (c, b) => Err(ScenarioError(format!("connection {c:?} is not available on {b:?}"))),
        }
    }

    pub fn resolve_bundle(&self) -> Result<ResolvedBundle, ScenarioError> {
        let b = &self.bundle;
        match b.kind {
            BundleKind::Hopf => {
                if !matches!(b.base, None | Some(BaseKind::S2)) || !matches!(b.group, None | Some(GroupKind::U1)) || b.dim.is_some() {
                    return Err(ScenarioError("the hopf bundle has base s2 and group u1".into()));
                }
                Ok(ResolvedBundle::Hopf)
            }
            BundleKind::Trivial => {
                let base = match b.base {
                    Some(BaseKind::R2) | None => BaseKind::R2,
                    Some(BaseKind::Torus) => BaseKind::Torus,
                    Some(BaseKind::S2) => return Err(ScenarioError("trivial bundles have base r2 or torus".into())),
                };
                let group = match (b.group, b.dim) {
                    (Some(GroupKind::U1) | None, None) => ResolvedGroup::U1,
                    (Some(GroupKind::Su2), None) => ResolvedGroup::Su2,
                    (Some(GroupKind::Rn), Some(n)) if (1..=MAX_RN_DIM).contains(&n) => ResolvedGroup::Rn(n),
                    (Some(GroupKind::Rn), _) => {
                        return Err(ScenarioError(format!("group rn needs dim between 1 and {MAX_RN_DIM}")))
                    }
                    (_, Some(_)) => return Err(ScenarioError("dim is only meaningful for group rn".into())),
                };
                Ok(ResolvedBundle::Trivial { base, group })
            }
        }
    }
}
