//! Planar grasp analysis for two opposing fingertip cross-sections.
//!
//! Scene frame: the pinch axis is `x`. The left fingertip's ball joint sits
//! at `(x_L, 0)` with its surface facing `+x`; the right one at `(x_R, 0)`
//! facing `−x`. A fingertip profile given in its own frame `(u, v)` (`u`
//! along the surface, `v` outward) maps to `(x_L + v, u)` on the left and
//! `(x_R − v, u)` on the right.
//!
//! The model is first-order, rigid and quasi-static: contacts are points,
//! friction is Coulomb with a two-edge planar cone.

mod closure;
mod contact;
mod cradle;

pub use closure::{closure_classify, contact_wrenches, pivot_feasible, positively_spans, Closure};
pub use contact::{find_contacts, Contact, Feature, Side};
pub use cradle::{cradle_curvature_sign, cradle_height, rest_lift};

use crate::{Error, Result, Vec2};

/// Object cross-section.
#[derive(Debug, Clone, PartialEq)]
pub enum ObjectXSection {
    Circle {
        radius: f64,
        center: Vec2,
    },
    /// Convex, counter-clockwise.
    ConvexPolygon(Vec<Vec2>),
}

impl ObjectXSection {
    pub fn validate(&self) -> Result<()> {
        match self {
            ObjectXSection::Circle { radius, center } => {
                if !(radius.is_finite() && *radius > 0.0)
                    || !(center.x.is_finite() && center.y.is_finite())
                {
                    return Err(Error::InvalidParams(format!("bad circle radius {radius}")));
                }
            }
            ObjectXSection::ConvexPolygon(v) => {
                if v.len() < 3 || v.iter().any(|p| !(p.x.is_finite() && p.y.is_finite())) {
                    return Err(Error::InvalidParams(
                        "polygon needs 3 finite vertices".into(),
                    ));
                }
                let n = v.len();
                for i in 0..n {
                    let e0 = v[(i + 1) % n] - v[i];
                    let e1 = v[(i + 2) % n] - v[(i + 1) % n];
                    if e0.perp(&e1) <= 0.0 {
                        return Err(Error::InvalidParams(
                            "polygon must be strictly convex and counter-clockwise".into(),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn translated(&self, d: Vec2) -> Self {
        match self {
            ObjectXSection::Circle { radius, center } => ObjectXSection::Circle {
                radius: *radius,
                center: center + d,
            },
            ObjectXSection::ConvexPolygon(v) => {
                ObjectXSection::ConvexPolygon(v.iter().map(|p| p + d).collect())
            }
        }
    }

    /// Circle center or polygon vertex centroid.
    pub fn center(&self) -> Vec2 {
        match self {
            ObjectXSection::Circle { center, .. } => *center,
            ObjectXSection::ConvexPolygon(v) => {
                v.iter().fold(Vec2::zeros(), |a, p| a + p) / v.len() as f64
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GraspScene {
    /// Left profile in scene coordinates.
    pub left: Vec<Vec2>,
    /// Right profile in scene coordinates.
    pub right: Vec<Vec2>,
    /// Ball-joint positions.
    pub left_joint: Vec2,
    pub right_joint: Vec2,
    pub object: ObjectXSection,
    pub mu: f64,
}

fn place_left(local: &[Vec2], joint: Vec2) -> Vec<Vec2> {
    local.iter().map(|p| joint + Vec2::new(p.y, p.x)).collect()
}

fn place_right(local: &[Vec2], joint: Vec2) -> Vec<Vec2> {
    local.iter().map(|p| joint + Vec2::new(-p.y, p.x)).collect()
}

fn segments_cross(a0: Vec2, a1: Vec2, b0: Vec2, b1: Vec2) -> bool {
    let d1 = (a1 - a0).perp(&(b0 - a0));
    let d2 = (a1 - a0).perp(&(b1 - a0));
    let d3 = (b1 - b0).perp(&(a0 - b0));
    let d4 = (b1 - b0).perp(&(a1 - b0));
    d1 * d2 < 0.0 && d3 * d4 < 0.0
}

/// Rejects polylines with fewer than two points, non-finite points or
/// crossings between non-adjacent segments.
pub fn check_simple(poly: &[Vec2]) -> Result<()> {
    if poly.len() < 2 || poly.iter().any(|p| !(p.x.is_finite() && p.y.is_finite())) {
        return Err(Error::InvalidParams(
            "profile needs two finite points".into(),
        ));
    }
    let n = poly.len() - 1;
    for i in 0..n {
        for j in i + 2..n {
            if segments_cross(poly[i], poly[i + 1], poly[j], poly[j + 1]) {
                return Err(Error::InvalidParams(format!(
                    "profile self-intersects (segments {i} and {j})"
                )));
            }
        }
    }
    Ok(())
}

impl GraspScene {
    fn build(
        left_local: &[Vec2],
        right_local: &[Vec2],
        left_joint: Vec2,
        right_joint: Vec2,
        object: ObjectXSection,
        mu: f64,
    ) -> Result<Self> {
        check_simple(left_local)?;
        check_simple(right_local)?;
        object.validate()?;
        if !(mu.is_finite() && mu >= 0.0) {
            return Err(Error::InvalidParams(format!(
                "friction coefficient {mu} must be >= 0"
            )));
        }
        let gap = right_joint.x - left_joint.x;
        if gap.is_nan() || gap <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "gap must be positive, got {gap}"
            )));
        }
        Ok(Self {
            left: place_left(left_local, left_joint),
            right: place_right(right_local, right_joint),
            left_joint,
            right_joint,
            object,
            mu,
        })
    }

    /// Fingertip profiles (own frames) facing each other with the ball joints
    /// at `(±gap/2, 0)`.
    pub fn with_gap(
        left_local: &[Vec2],
        right_local: &[Vec2],
        gap: f64,
        object: ObjectXSection,
        mu: f64,
    ) -> Result<Self> {
        if !gap.is_finite() {
            return Err(Error::InvalidParams("non-finite gap".into()));
        }
        let half = Vec2::new(0.5 * gap, 0.0);
        Self::build(left_local, right_local, -half, half, object, mu)
    }

    /// Closes both fingertips along `x` until each just touches the object.
    pub fn seated(
        left_local: &[Vec2],
        right_local: &[Vec2],
        object: ObjectXSection,
        mu: f64,
    ) -> Result<Self> {
        object.validate()?;
        let (x_left, x_right) = match &object {
            ObjectXSection::Circle { radius, center } => {
                let hl = cradle_height(left_local, *radius, center.y)?;
                let hr = cradle_height(right_local, *radius, center.y)?;
                (center.x - hl, center.x + hr)
            }
            ObjectXSection::ConvexPolygon(v) => {
                let in_left: Vec<Vec2> = v.iter().map(|p| Vec2::new(p.y, p.x)).collect();
                let in_right: Vec<Vec2> = v.iter().map(|p| Vec2::new(p.y, -p.x)).collect();
                (
                    -rest_lift(left_local, &in_left)?,
                    rest_lift(right_local, &in_right)?,
                )
            }
        };
        Self::build(
            left_local,
            right_local,
            Vec2::new(x_left, 0.0),
            Vec2::new(x_right, 0.0),
            object,
            mu,
        )
    }

    pub fn gap(&self) -> f64 {
        self.right_joint.x - self.left_joint.x
    }

    /// Rigid translation of everything in the scene.
    pub fn translated(&self, d: Vec2) -> Self {
        Self {
            left: self.left.iter().map(|p| p + d).collect(),
            right: self.right.iter().map(|p| p + d).collect(),
            left_joint: self.left_joint + d,
            right_joint: self.right_joint + d,
            object: self.object.translated(d),
            mu: self.mu,
        }
    }

    pub fn profile(&self, side: Side) -> &[Vec2] {
        match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }
}

/// Closest point to `p` on segment `[a, b]`.
pub(crate) fn closest_on_segment(p: Vec2, a: Vec2, b: Vec2) -> Vec2 {
    let d = b - a;
    let len2 = d.norm_squared();
    if len2 == 0.0 {
        return a;
    }
    let t = ((p - a).dot(&d) / len2).clamp(0.0, 1.0);
    a + t * d
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polygon_validation() {
        let sq = vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(1.0, 1.0),
            Vec2::new(0.0, 1.0),
        ];
        assert!(ObjectXSection::ConvexPolygon(sq.clone()).validate().is_ok());
        let cw: Vec<Vec2> = sq.into_iter().rev().collect();
        assert!(ObjectXSection::ConvexPolygon(cw).validate().is_err());
        assert!(ObjectXSection::Circle {
            radius: 0.0,
            center: Vec2::zeros()
        }
        .validate()
        .is_err());
    }

    #[test]
    fn simple_polyline_check() {
        let zig = [
            Vec2::new(0.0, 0.0),
            Vec2::new(2.0, 0.0),
            Vec2::new(2.0, 1.0),
            Vec2::new(1.0, -1.0),
        ];
        assert!(check_simple(&zig).is_err());
        assert!(check_simple(&zig[..3]).is_ok());
    }

    #[test]
    fn rejects_bad_gap_and_mu() {
        let flat = [Vec2::new(-5.0, 0.0), Vec2::new(5.0, 0.0)];
        let c = ObjectXSection::Circle {
            radius: 1.0,
            center: Vec2::zeros(),
        };
        assert!(GraspScene::with_gap(&flat, &flat, 0.0, c.clone(), 0.0).is_err());
        assert!(GraspScene::with_gap(&flat, &flat, 2.0, c, -0.1).is_err());
    }
}
