//! Planar slider-crank geometry of one transmission half.
//!
//! Frame: origin at the ball joint `O`, `x` horizontal and pointing outward
//! (toward the modelled facet), `y` vertically up. The terrace hinge sits at
//! `C = (l_oc, 0)`. The servo axis `A` is at `oa`, the crank tip (slider)
//! at `B = A + l_ab·(sin a, cos a)` with crank angle `a = alpha0 − theta`
//! measured from the plumb line. The facet guide passes through `C` and `B`.
//!
//! The opposing half is the mirror image; it is modelled in its own outward
//! frame with the same parameters.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::roots::bisect;
use crate::{Error, Result, Vec2};

/// Slack allowed on range endpoints and attainable-interval checks.
const RANGE_EPS: f64 = 1e-12;

/// Direction-residual tolerance for the bracketed inverse.
pub const BISECT_FTOL: f64 = 1e-12;

/// Signed servo angle in radians; positive turns the crank toward the plumb
/// line and raises the facet.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default, Serialize, Deserialize)]
pub struct ServoAngle(pub f64);

/// Signed facet angle from the horizontal in radians; positive is concave.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default, Serialize, Deserialize)]
pub struct FacetAngle(pub f64);

macro_rules! angle_impl {
    ($t:ty) => {
        impl $t {
            pub fn from_degrees(deg: f64) -> Self {
                Self(deg.to_radians())
            }

            pub fn radians(self) -> f64 {
                self.0
            }

            pub fn degrees(self) -> f64 {
                self.0.to_degrees()
            }
        }
    };
}

angle_impl!(ServoAngle);
angle_impl!(FacetAngle);

/// Geometric design parameters of one slider-crank half.
///
/// Constructed only through validating constructors, so every value in
/// circulation satisfies the neutral-flatness constraint
/// `oa.y = −l_ab·cos(alpha0)` and has a jam-free operating range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkageParams {
    l_oc: f64,
    l_ab: f64,
    oa: Vec2,
    alpha0: f64,
    theta_min: f64,
    theta_max: f64,
}

impl Default for LinkageParams {
    fn default() -> Self {
        Self::new(10.0, 20.0, 11.0, 30f64.to_radians()).expect("default linkage is valid")
    }
}

/// Default operating range half-width: 12 steps of 3° spanning ±18°.
pub const DEFAULT_HALF_RANGE_DEG: f64 = 18.0;

impl LinkageParams {
    /// Builds parameters with `oa.y` derived from the neutral-flatness
    /// constraint and the default ±18° operating range.
    pub fn new(l_oc: f64, l_ab: f64, oa_x: f64, alpha0: f64) -> Result<Self> {
        let r = DEFAULT_HALF_RANGE_DEG.to_radians();
        Self::from_parts(
            l_oc,
            l_ab,
            Vec2::new(oa_x, -l_ab * alpha0.cos()),
            alpha0,
            (-r, r),
        )
    }

    /// Full constructor. `oa.y` must equal `−l_ab·cos(alpha0)` to within
    /// 1e−9 mm and the whole `range` must be free of jams.
    pub fn from_parts(
        l_oc: f64,
        l_ab: f64,
        oa: Vec2,
        alpha0: f64,
        range: (f64, f64),
    ) -> Result<Self> {
        let all = [l_oc, l_ab, oa.x, oa.y, alpha0, range.0, range.1];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParams("non-finite linkage parameter".into()));
        }
        if l_oc <= 0.0 || l_ab <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "link lengths must be positive (l_oc = {l_oc}, l_ab = {l_ab})"
            )));
        }
        if !(alpha0 > 0.0 && alpha0 < PI / 2.0) {
            return Err(Error::InvalidParams(format!(
                "alpha0 = {} deg outside (0, 90)",
                alpha0.to_degrees()
            )));
        }
        let neutral_y = -l_ab * alpha0.cos();
        if (oa.y - neutral_y).abs() > 1e-9 {
            return Err(Error::InvalidParams(format!(
                "neutral-flatness violated: oa.y = {} but -l_ab*cos(alpha0) = {neutral_y}",
                oa.y
            )));
        }
        if oa.x + l_ab * alpha0.sin() - l_oc <= 0.0 {
            return Err(Error::InvalidParams(
                "slider must sit outward of the hinge at neutral".into(),
            ));
        }
        let (theta_min, theta_max) = range;
        if !(theta_min <= 0.0 && 0.0 <= theta_max && theta_min < theta_max) {
            return Err(Error::InvalidParams(format!(
                "operating range [{}, {}] deg must contain 0",
                theta_min.to_degrees(),
                theta_max.to_degrees()
            )));
        }
        let params = Self {
            l_oc,
            l_ab,
            oa: Vec2::new(oa.x, neutral_y),
            alpha0,
            theta_min,
            theta_max,
        };
        // sin is unimodal on (0, π), so the clearance CB.x is smallest at a
        // range endpoint
        for theta in [theta_min, theta_max] {
            params
                .facet_geometry(ServoAngle(theta))
                .map_err(|e| Error::InvalidParams(format!("operating range jams: {e}")))?;
        }
        Ok(params)
    }

    /// Same geometry with a different operating range.
    pub fn with_range(&self, theta_min: f64, theta_max: f64) -> Result<Self> {
        Self::from_parts(
            self.l_oc,
            self.l_ab,
            self.oa,
            self.alpha0,
            (theta_min, theta_max),
        )
    }

    pub fn l_oc(&self) -> f64 {
        self.l_oc
    }

    pub fn l_ab(&self) -> f64 {
        self.l_ab
    }

    pub fn oa(&self) -> Vec2 {
        self.oa
    }

    pub fn alpha0(&self) -> f64 {
        self.alpha0
    }

    /// Operating range `(theta_min, theta_max)` in radians.
    pub fn range(&self) -> (f64, f64) {
        (self.theta_min, self.theta_max)
    }

    pub fn hinge(&self) -> Vec2 {
        Vec2::new(self.l_oc, 0.0)
    }

    /// Whether `theta` lies in the operating range (endpoints included).
    pub fn in_range(&self, theta: ServoAngle) -> bool {
        theta.0 >= self.theta_min - RANGE_EPS && theta.0 <= self.theta_max + RANGE_EPS
    }

    pub fn check_in_range(&self, theta: ServoAngle) -> Result<()> {
        if !theta.0.is_finite() {
            return Err(Error::InvalidParams("non-finite servo angle".into()));
        }
        if self.in_range(theta) {
            Ok(())
        } else {
            Err(Error::OutOfRange {
                theta_deg: theta.degrees(),
                reason: format!(
                    "outside operating range [{}, {}] deg",
                    self.theta_min.to_degrees(),
                    self.theta_max.to_degrees()
                ),
            })
        }
    }

    /// Slider position `B` for a servo angle.
    pub fn slider(&self, theta: ServoAngle) -> Result<Vec2> {
        if !theta.0.is_finite() {
            return Err(Error::InvalidParams("non-finite servo angle".into()));
        }
        let a = self.alpha0 - theta.0;
        if !(a > 0.0 && a < PI) {
            return Err(Error::OutOfRange {
                theta_deg: theta.degrees(),
                reason: format!("crank angle {} deg outside (0, 180)", a.to_degrees()),
            });
        }
        Ok(self.oa + self.l_ab * Vec2::new(a.sin(), a.cos()))
    }

    /// Full forward readout: `B`, `C`, `CB` and the facet angle.
    pub fn facet_geometry(&self, theta: ServoAngle) -> Result<FacetGeometry> {
        let b = self.slider(theta)?;
        let c = self.hinge();
        let cb = b - c;
        if cb.x <= 0.0 {
            return Err(Error::OutOfRange {
                theta_deg: theta.degrees(),
                reason: format!("slider passes inside the hinge (CB.x = {})", cb.x),
            });
        }
        Ok(FacetGeometry {
            theta,
            phi: FacetAngle(cb.y.atan2(cb.x)),
            b,
            c,
            cb,
        })
    }

    /// Facet angles at the two ends of the operating range.
    pub fn attainable_facet(&self) -> (FacetAngle, FacetAngle) {
        let lo = forward_facet(self, ServoAngle(self.theta_min)).expect("range validated");
        let hi = forward_facet(self, ServoAngle(self.theta_max)).expect("range validated");
        (lo, hi)
    }

    /// Largest tilt magnitude for which both mirrored halves stay in range.
    pub fn attainable_planar_tilt(&self) -> f64 {
        let hi = planar_condition_angle(self, ServoAngle(self.theta_max))
            .expect("range validated")
            .angle;
        let lo = planar_condition_angle(self, ServoAngle(self.theta_min))
            .expect("range validated")
            .angle;
        hi.min(-lo).max(0.0)
    }

    /// Servo angles whose slider direction, seen from `(base_x, 0)`, points
    /// along `target`. Closed form of
    /// `l_ab·cos(a + t) = (oa.x − base_x)·sin t − oa.y·cos t`.
    fn direction_solutions(&self, base_x: f64, target: f64) -> Vec<ServoAngle> {
        let (s, c) = target.sin_cos();
        let rhs = (self.oa.x - base_x) * s - self.oa.y * c;
        let ratio = rhs / self.l_ab;
        if ratio.abs() > 1.0 + 1e-12 {
            return Vec::new();
        }
        let beta = ratio.clamp(-1.0, 1.0).acos();
        let dir = Vec2::new(c, s);
        let base = Vec2::new(base_x, 0.0);
        let mut out = Vec::with_capacity(2);
        for a in [-target + beta, -target - beta] {
            // wrap to (−π, π]
            let a = (a + PI).rem_euclid(2.0 * PI) - PI;
            if !(a > 0.0 && a < PI) {
                continue;
            }
            let theta = ServoAngle(self.alpha0 - a);
            let b = self.oa + self.l_ab * Vec2::new(a.sin(), a.cos());
            if (b - base).dot(&dir) <= 0.0 || !self.in_range(theta) {
                continue;
            }
            let clamped = theta.0.clamp(self.theta_min, self.theta_max);
            out.push(ServoAngle(clamped));
        }
        out.sort_by(|x, y| x.0.abs().total_cmp(&y.0.abs()));
        out
    }
}

/// Forward readout of one half.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FacetGeometry {
    pub theta: ServoAngle,
    pub phi: FacetAngle,
    pub b: Vec2,
    pub c: Vec2,
    pub cb: Vec2,
}

/// Slider direction as seen from the ball joint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanarReadout {
    /// Polar angle of `OB`.
    pub angle: f64,
    /// `|OB|`, a dependent quantity since the slider moves along its guide.
    pub ob_len: f64,
    pub ob: Vec2,
}

/// Facet angle for a servo angle.
pub fn forward_facet(params: &LinkageParams, theta: ServoAngle) -> Result<FacetAngle> {
    params.facet_geometry(theta).map(|g| g.phi)
}

fn unreachable_facet(params: &LinkageParams, phi: FacetAngle) -> Error {
    let (lo, hi) = params.attainable_facet();
    Error::Unreachable {
        what: "facet angle",
        requested_deg: phi.degrees(),
        min_deg: lo.degrees(),
        max_deg: hi.degrees(),
    }
}

fn check_facet_target(params: &LinkageParams, phi: FacetAngle) -> Result<()> {
    if !phi.0.is_finite() {
        return Err(Error::InvalidParams("non-finite facet angle".into()));
    }
    let (lo, hi) = params.attainable_facet();
    if phi.0 < lo.0 - RANGE_EPS || phi.0 > hi.0 + RANGE_EPS {
        return Err(unreachable_facet(params, phi));
    }
    Ok(())
}

/// Servo angle producing a facet angle, by the closed form; falls back to
/// bisection over the operating range if no closed-form branch is admissible.
pub fn inverse_facet(params: &LinkageParams, phi: FacetAngle) -> Result<ServoAngle> {
    check_facet_target(params, phi)?;
    if phi.0 == 0.0 {
        return Ok(ServoAngle(0.0));
    }
    match params.direction_solutions(params.l_oc, phi.0).first() {
        Some(&theta) => Ok(theta),
        None => inverse_facet_bisect(params, phi),
    }
}

/// Bracketed inverse over `[theta_min, theta_max]` on the direction residual
/// `CB.y·cos φ − CB.x·sin φ`.
pub fn inverse_facet_bisect(params: &LinkageParams, phi: FacetAngle) -> Result<ServoAngle> {
    check_facet_target(params, phi)?;
    let (s, c) = phi.0.sin_cos();
    let hinge = params.hinge();
    let residual = |t: f64| {
        let cb = params.slider(ServoAngle(t)).expect("in range") - hinge;
        cb.y * c - cb.x * s
    };
    let (lo, hi) = params.range();
    bisect(residual, lo, hi, BISECT_FTOL)
        .map(ServoAngle)
        .ok_or_else(|| unreachable_facet(params, phi))
}

/// Polar angle of `OB = OA + AB` together with `|OB|`.
pub fn planar_condition_angle(params: &LinkageParams, theta: ServoAngle) -> Result<PlanarReadout> {
    let ob = params.slider(theta)?;
    if ob.x <= 0.0 {
        return Err(Error::OutOfRange {
            theta_deg: theta.degrees(),
            reason: format!("slider behind the ball joint (OB.x = {})", ob.x),
        });
    }
    Ok(PlanarReadout {
        angle: ob.y.atan2(ob.x),
        ob_len: ob.norm(),
        ob,
    })
}

fn unreachable_tilt(params: &LinkageParams, tilt: f64) -> Error {
    let lim = params.attainable_planar_tilt();
    Error::Unreachable {
        what: "planar tilt",
        requested_deg: tilt.to_degrees(),
        min_deg: -lim.to_degrees(),
        max_deg: lim.to_degrees(),
    }
}

/// Servo angle placing the slider on the ray from `O` at `angle`.
pub fn solve_planar_side(params: &LinkageParams, angle: f64) -> Result<ServoAngle> {
    if !angle.is_finite() {
        return Err(Error::InvalidParams("non-finite tilt".into()));
    }
    if angle == 0.0 {
        return Ok(ServoAngle(0.0));
    }
    if let Some(&theta) = params.direction_solutions(0.0, angle).first() {
        return Ok(theta);
    }
    solve_planar_side_bisect(params, angle)
}

/// Bracketed counterpart of [`solve_planar_side`].
pub fn solve_planar_side_bisect(params: &LinkageParams, angle: f64) -> Result<ServoAngle> {
    let (s, c) = angle.sin_cos();
    let residual = |t: f64| {
        let ob = params.slider(ServoAngle(t)).expect("in range");
        ob.y * c - ob.x * s
    };
    let (lo, hi) = params.range();
    bisect(residual, lo, hi, BISECT_FTOL)
        .map(ServoAngle)
        .ok_or_else(|| unreachable_tilt(params, angle))
}

/// Servo pair `(theta_1, theta_2)` keeping `B₁`, `O`, `B₂` on one straight
/// line tilted by `tilt`: the modelled half sees `OB₁` at `+tilt`, the
/// mirrored half sees `OB₂` at `−tilt` in its own outward frame.
pub fn solve_planar_pair(params: &LinkageParams, tilt: f64) -> Result<(ServoAngle, ServoAngle)> {
    if !tilt.is_finite() {
        return Err(Error::InvalidParams("non-finite tilt".into()));
    }
    if tilt.abs() > params.attainable_planar_tilt() + RANGE_EPS {
        return Err(unreachable_tilt(params, tilt));
    }
    let t1 = solve_planar_side(params, tilt)?;
    let t2 = solve_planar_side(params, -tilt)?;
    Ok((t1, t2))
}

/// Normalised collinearity residual `|OB₁ × OB₂| / (|OB₁|·|OB₂|)` of a pair,
/// with `OB₂` mirrored into the shared frame.
pub fn planar_residual(params: &LinkageParams, pos: ServoAngle, neg: ServoAngle) -> Result<f64> {
    let b1 = params.slider(pos)?;
    let b2 = params.slider(neg)?;
    let b2 = Vec2::new(-b2.x, b2.y);
    Ok(b1.perp(&b2).abs() / (b1.norm() * b2.norm()))
}
