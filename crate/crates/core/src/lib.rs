//! Kinematics and grasp analysis for a four-facet origami shape-morphing
//! fingertip.
//!
//! The fingertip is a central terrace on a ball joint surrounded by four
//! hinged leaf facets. Each facet is driven by a servo through a planar
//! slider-crank: the crank `AB` rotates about the servo axis `A`, and the
//! slider `B` runs along the facet guide `CB`, which is hinged to the
//! terrace at `C`. The two opposing pairs of facets act in orthogonal,
//! decoupled vertical planes.
//!
//! * [`linkage`]: one slider-crank half, servo angle to facet angle and back,
//!   plus the tilted-planar condition.
//! * [`fingertip`]: four halves assembled into morphing primitives, terrace
//!   equilibrium, cross-section profiles, pointer pose and transitions.
//! * [`grasp`]: 2D cross-section contacts, cradle stability, closure and
//!   pivot checks for two opposing fingertips.
//! * [`cli`]: configuration, experiment commands and output formatting.
//! * [`batch`]: data-parallel helpers (rayon behind the `parallel` feature).

pub mod batch;
pub mod cli;
mod error;
pub mod fingertip;
pub mod grasp;
pub mod linkage;
pub mod roots;

pub use error::{Error, Result};
pub use fingertip::{
    pointer_top, terrace_equilibrium, AxisState, FingertipConfig, FingertipState, MorphPrimitive,
};
pub use linkage::{FacetAngle, LinkageParams, ServoAngle};

/// Planar point or vector in millimetres.
pub type Vec2 = nalgebra::Vector2<f64>;
/// Spatial point or vector in millimetres.
pub type Vec3 = nalgebra::Vector3<f64>;
