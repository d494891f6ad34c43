//! Numerics for the colored Jones polynomial of the figure-eight knot at
//! q = e^{xi/N}, xi = u + 2p pi i: the quantum dilogarithm rewriting, the
//! saddle point asymptotics, the regions used in the Poisson summation
//! argument and the quantum modularity experiments.
//!
//! Everything is generic over [`Real`] (f32 or f64); the aliases at the crate
//! root fix f64.

pub mod error;
pub mod jones;
pub mod modularity;
pub mod numkernel;
pub mod qdilog;
pub mod quadrature;
pub mod region;
pub mod saddle;
pub mod scalar;

pub use error::{Error, Result};
pub use modularity::ModularMatrix;
pub use numkernel::LogComplex;
pub use quadrature::QuadratureConfig;
pub use scalar::{Cx, Real};

pub type C64 = Cx<f64>;
pub type LogC64 = LogComplex<f64>;
pub type Context = qdilog::EvalContext<f64>;
pub type Quadrature = QuadratureConfig<f64>;
pub type Evaluator = qdilog::TnEvaluator<f64>;
pub type Saddle = saddle::SaddleData<f64>;
pub type Polygon = region::PolygonData<f64>;
pub type Grid = region::RegionGrid<f64>;
