//! Rate regions of the two-user interference channel.

pub mod claims;
pub mod dist;
pub mod lp;
pub mod polytope;
pub mod regions;
pub mod sampler;
pub mod scalar;
pub mod symfm;
pub mod terms;

pub use scalar::Rational;

pub type Joint = dist::JointDist<f64>;
pub type Terms = terms::TermVector<f64>;
pub type Poly = polytope::HPoly<Rational>;
pub type PolyF64 = polytope::HPoly<f64>;
