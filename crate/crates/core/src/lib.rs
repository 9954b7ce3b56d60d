//! Discrete connections on principal bundles, the discrete Atiyah sequence
//! as fiber bundles with section and as local Lie groupoids, discrete
//! curvature and semidirect products.

pub mod bundles;
pub mod connections;
pub mod curvature;
pub mod error;
pub mod fbs;
pub mod groupoids;
pub mod groups;
pub mod quotients;
pub mod report;
pub mod sampling;
pub mod semidirect;

pub use bundles::{HopfBundle, HopfPoint, PairSubset, PlanarBase, PrincipalBundle, SubsetKind, TrivialBundle, TrivialPoint};
pub use connections::{flat_trivial, hopf_canonical, magnetic, DiscreteConnection, HorizontalLift};
pub use error::{Error, Result};
pub use groupoids::{Extension, GroupoidMorphism, LocalGroupoid};
pub use groups::{Group, GroupElement, Rn, Su2, U1};
pub use quotients::{Conj, ConjClass, Gauge, GaugeClass};
pub use report::{CheckReport, ClauseReport};
pub use semidirect::{ExternalAction, Semidirect, SplitExtension};
