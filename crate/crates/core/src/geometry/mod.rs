//! Convex-body representations and geometric primitives.

pub mod body;
pub mod ellipsoid;
pub mod polygon;
pub mod random;
pub mod support;
pub mod trig;

pub use body::{BodySpec, ConvexBody, GeometricMoments, Transform};
pub use ellipsoid::EllipsoidN;
pub use polygon::Polygon2D;
pub use random::random_smooth_body;
pub use support::SupportBody2D;
pub use trig::{grid_angle, TrigSeries};
