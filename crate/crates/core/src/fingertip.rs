//! Full fingertip: two orthogonal, decoupled facet pairs around a terrace.
//!
//! Facet order everywhere is `[+x, −x, +y, −y]`. Each pair is handled by an
//! [`AxisState`] that only ever sees its own two servo angles.

use std::fmt;
use std::str::FromStr;

use nalgebra::Rotation3;

use crate::cli::format::fmt_sig;
use crate::linkage::{
    forward_facet, inverse_facet, planar_residual, solve_planar_pair, FacetAngle, LinkageParams,
    ServoAngle,
};
use crate::roots::bisect;
use crate::{batch, Error, Result, Vec2, Vec3};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FingertipConfig {
    /// Shared by all four facets.
    pub linkage: LinkageParams,
    /// Hinge `C` to facet tip, mm.
    pub facet_len: f64,
    /// Leaf-spring stiffness per crease, N·mm/rad.
    pub spring_k: f64,
    /// Pointer rod length, mm.
    pub rod_len: f64,
    /// Largest servo increment per trajectory step, degrees.
    pub step_deg: f64,
    pub step_count: usize,
}

impl Default for FingertipConfig {
    fn default() -> Self {
        Self {
            linkage: LinkageParams::default(),
            facet_len: 17.5,
            spring_k: 10.0,
            rod_len: 100.0,
            step_deg: 3.0,
            step_count: 13,
        }
    }
}

impl FingertipConfig {
    pub fn validate(&self) -> Result<()> {
        let checks = [
            ("facet_len", self.facet_len),
            ("spring_k", self.spring_k),
            ("rod_len", self.rod_len),
            ("step_deg", self.step_deg),
        ];
        for (name, v) in checks {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParams(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        if self.step_count < 2 {
            return Err(Error::InvalidParams("step_count must be at least 2".into()));
        }
        Ok(())
    }

    /// Plate diameter spanned by the flat cross-section.
    pub fn plate_diameter(&self) -> f64 {
        2.0 * (self.linkage.l_oc() + self.facet_len)
    }
}

/// Symbolic grasp mode with its degree of transformation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MorphPrimitive {
    Flat,
    /// All facets down; depth angle negative.
    Convex(FacetAngle),
    /// All facets up; depth angle positive.
    Concave(FacetAngle),
    /// Tilt of the x-pair and y-pair planes in radians; positive raises the
    /// `+` side.
    TiltedPlanar {
        x: f64,
        y: f64,
    },
}

impl MorphPrimitive {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParams(m));
        match *self {
            MorphPrimitive::Flat => Ok(()),
            MorphPrimitive::Convex(phi) if phi.0.is_nan() || phi.0 >= 0.0 => bad(format!(
                "convex depth must be negative, got {} deg",
                phi.degrees()
            )),
            MorphPrimitive::Concave(phi) if phi.0.is_nan() || phi.0 <= 0.0 => bad(format!(
                "concave depth must be positive, got {} deg",
                phi.degrees()
            )),
            MorphPrimitive::TiltedPlanar { x, y } if !(x.is_finite() && y.is_finite()) => {
                bad("non-finite tilt".into())
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for MorphPrimitive {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MorphPrimitive::Flat => write!(f, "flat"),
            MorphPrimitive::Convex(p) => write!(f, "convex:{}", fmt_sig(p.degrees())),
            MorphPrimitive::Concave(p) => write!(f, "concave:{}", fmt_sig(p.degrees())),
            MorphPrimitive::TiltedPlanar { x, y } => write!(
                f,
                "tilted:{},{}",
                fmt_sig(x.to_degrees()),
                fmt_sig(y.to_degrees())
            ),
        }
    }
}

/// Parses `flat`, `convex:<deg>`, `concave:<deg>` or `tilted:<deg>,<deg>`.
impl FromStr for MorphPrimitive {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (mode, arg) = s.split_once(':').unwrap_or((s, ""));
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidParams(format!("bad angle '{t}' in primitive '{s}'")))
        };
        let prim = match mode.to_ascii_lowercase().as_str() {
            "flat" if arg.is_empty() => MorphPrimitive::Flat,
            "convex" => MorphPrimitive::Convex(FacetAngle::from_degrees(num(arg)?)),
            "concave" => MorphPrimitive::Concave(FacetAngle::from_degrees(num(arg)?)),
            "tilted" | "tilted_planar" => {
                let (x, y) = arg.split_once(',').unwrap_or((arg, "0"));
                MorphPrimitive::TiltedPlanar {
                    x: num(x)?.to_radians(),
                    y: num(y)?.to_radians(),
                }
            }
            _ => return Err(Error::InvalidParams(format!("unknown primitive '{s}'"))),
        };
        prim.validate()?;
        Ok(prim)
    }
}

/// Torques about the ball joint driving each pair's terrace tilt, N·mm.
/// Positive raises the `+` side.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ExternalLoad {
    pub x: f64,
    pub y: f64,
}

/// One opposing facet pair.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisState {
    pub theta_pos: ServoAngle,
    pub theta_neg: ServoAngle,
    /// Forward-kinematic facet angles with the hinge at rest, each in its
    /// own outward frame.
    pub phi_pos: FacetAngle,
    pub phi_neg: FacetAngle,
    /// Settled terrace tilt, positive raising the `+` side.
    pub tilt: f64,
    /// Cross-section `[tip−, C−, C+, tip+]`, ordered from `−` to `+`.
    pub profile: Vec<Vec2>,
    /// Normalised `B₁–O–B₂` collinearity residual.
    pub collinearity: f64,
}

impl AxisState {
    pub fn new(
        cfg: &FingertipConfig,
        theta_pos: ServoAngle,
        theta_neg: ServoAngle,
        load_torque: f64,
    ) -> Result<Self> {
        let link = &cfg.linkage;
        link.check_in_range(theta_pos)?;
        link.check_in_range(theta_neg)?;
        let phi_pos = forward_facet(link, theta_pos)?;
        let phi_neg = forward_facet(link, theta_neg)?;
        let tilt = settle_terrace(link, theta_pos, theta_neg, cfg.spring_k, load_torque)?;
        let profile = surface_profile(cfg, theta_pos, theta_neg, tilt)?;
        let collinearity = planar_residual(link, theta_pos, theta_neg)?;
        Ok(Self {
            theta_pos,
            theta_neg,
            phi_pos,
            phi_neg,
            tilt,
            profile,
            collinearity,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FingertipState {
    pub x: AxisState,
    pub y: AxisState,
}

impl FingertipState {
    /// State for servo angles `[+x, −x, +y, −y]`.
    pub fn from_thetas(
        cfg: &FingertipConfig,
        thetas: [ServoAngle; 4],
        load: ExternalLoad,
    ) -> Result<Self> {
        Ok(Self {
            x: AxisState::new(cfg, thetas[0], thetas[1], load.x)?,
            y: AxisState::new(cfg, thetas[2], thetas[3], load.y)?,
        })
    }

    pub fn thetas(&self) -> [ServoAngle; 4] {
        [
            self.x.theta_pos,
            self.x.theta_neg,
            self.y.theta_pos,
            self.y.theta_neg,
        ]
    }

    pub fn phis(&self) -> [FacetAngle; 4] {
        [
            self.x.phi_pos,
            self.x.phi_neg,
            self.y.phi_pos,
            self.y.phi_neg,
        ]
    }

    pub fn terrace_tilt(&self) -> (f64, f64) {
        (self.x.tilt, self.y.tilt)
    }

    /// Pointer tip for the current terrace pose. Raising `+x` turns the
    /// normal toward `−x` (rotation about `y` by `−tilt_x`); raising `+y`
    /// turns it toward `−y` (rotation about `x` by `+tilt_y`).
    pub fn pointer(&self, cfg: &FingertipConfig) -> Vec3 {
        pointer_top(cfg, self.y.tilt, -self.x.tilt)
    }
}

/// Terrace angle minimising
/// `½k[(φ₊ − ψ)² + (φ₋ + ψ)²] − τψ`, i.e. `(φ₊ − φ₋)/2 + τ/(2k)`.
pub fn terrace_equilibrium(
    phi_pos: FacetAngle,
    phi_neg: FacetAngle,
    spring_k: f64,
    load_torque: f64,
) -> f64 {
    0.5 * (phi_pos.0 - phi_neg.0) + load_torque / (2.0 * spring_k)
}

/// Facet angles of a pair when the terrace is tilted by `psi`, with each
/// hinge carried along by the terrace. Each angle is in its own outward
/// frame.
fn displaced_facets(link: &LinkageParams, b_pos: Vec2, b_neg: Vec2, psi: f64) -> (Vec2, Vec2) {
    let l = link.l_oc();
    let (s, c) = psi.sin_cos();
    // in the mirrored frame the − hinge moves down when the terrace tilts up
    (
        b_pos - Vec2::new(l * c, l * s),
        b_neg - Vec2::new(l * c, -l * s),
    )
}

/// Terrace tilt consistent with the spring equilibrium of the facets it
/// carries: solves `ψ = terrace_equilibrium(φ₊(ψ), φ₋(ψ), k, τ)`.
///
/// Symmetric actuation gives exactly 0; a planar pair gives exactly its tilt.
pub fn settle_terrace(
    link: &LinkageParams,
    theta_pos: ServoAngle,
    theta_neg: ServoAngle,
    spring_k: f64,
    load_torque: f64,
) -> Result<f64> {
    if !(spring_k > 0.0 && spring_k.is_finite()) || !load_torque.is_finite() {
        return Err(Error::InvalidParams(
            "spring_k must be positive and load finite".into(),
        ));
    }
    let b_pos = link.slider(theta_pos)?;
    let b_neg = link.slider(theta_neg)?;
    let h = |psi: f64| {
        let (vp, vn) = displaced_facets(link, b_pos, b_neg, psi);
        let phi_pos = FacetAngle(vp.y.atan2(vp.x));
        let phi_neg = FacetAngle(vn.y.atan2(vn.x));
        terrace_equilibrium(phi_pos, phi_neg, spring_k, load_torque) - psi
    };
    let psi = if h(0.0) == 0.0 {
        0.0
    } else {
        let limit = std::f64::consts::FRAC_PI_4;
        let mut w = 0.05;
        loop {
            if h(-w) > 0.0 && h(w) < 0.0 {
                break bisect(h, -w, w, 0.0).expect("bracketed");
            }
            if w >= limit {
                return Err(Error::OutOfRange {
                    theta_deg: theta_pos.degrees(),
                    reason: "terrace equilibrium beyond ±45°".into(),
                });
            }
            w = (2.0 * w).min(limit);
        }
    };
    let (vp, vn) = displaced_facets(link, b_pos, b_neg, psi);
    let (s, c) = psi.sin_cos();
    if vp.dot(&Vec2::new(c, s)) <= 0.0 || vn.dot(&Vec2::new(c, -s)) <= 0.0 {
        return Err(Error::OutOfRange {
            theta_deg: theta_pos.degrees(),
            reason: "facet folds behind its hinge at the settled terrace tilt".into(),
        });
    }
    Ok(psi)
}

/// Cross-section polyline `[tip−, C−, C+, tip+]` of one pair: the terrace
/// of length `2·l_oc` tilted by `psi` about `O`, each facet hinged at its
/// `C` and aimed at its slider.
pub fn surface_profile(
    cfg: &FingertipConfig,
    theta_pos: ServoAngle,
    theta_neg: ServoAngle,
    psi: f64,
) -> Result<Vec<Vec2>> {
    let link = &cfg.linkage;
    let b_pos = link.slider(theta_pos)?;
    let b_neg = link.slider(theta_neg)?;
    let (vp, vn) = displaced_facets(link, b_pos, b_neg, psi);
    let (s, c) = psi.sin_cos();
    let out_pos = Vec2::new(c, s);
    let out_neg = Vec2::new(c, -s);
    for (v, out, th) in [(vp, out_pos, theta_pos), (vn, out_neg, theta_neg)] {
        if v.dot(&out) <= 0.0 {
            return Err(Error::OutOfRange {
                theta_deg: th.degrees(),
                reason: "slider passes inside the displaced hinge".into(),
            });
        }
    }
    let l = link.l_oc();
    let c_pos = Vec2::new(l * c, l * s);
    let c_neg = -c_pos;
    let tip_pos = c_pos + cfg.facet_len * vp.normalize();
    let dn = vn.normalize();
    let tip_neg = c_neg + cfg.facet_len * Vec2::new(-dn.x, dn.y);
    Ok(vec![tip_neg, c_neg, c_pos, tip_pos])
}

/// Tip of the pointer rod after rotating the terrace normal about `x` by
/// `rot_x`, then about `y` by `rot_y`. Coordinates relative to `O`.
pub fn pointer_top(cfg: &FingertipConfig, rot_x: f64, rot_y: f64) -> Vec3 {
    // R_z(0)·R_y(rot_y)·R_x(rot_x)
    Rotation3::from_euler_angles(rot_x, rot_y, 0.0) * Vec3::new(0.0, 0.0, cfg.rod_len)
}

/// Servo angles `[+x, −x, +y, −y]` realising a primitive.
pub fn primitive_thetas(cfg: &FingertipConfig, prim: MorphPrimitive) -> Result<[ServoAngle; 4]> {
    prim.validate()?;
    let link = &cfg.linkage;
    Ok(match prim {
        MorphPrimitive::Flat => [ServoAngle(0.0); 4],
        MorphPrimitive::Convex(phi) | MorphPrimitive::Concave(phi) => {
            [inverse_facet(link, phi)?; 4]
        }
        MorphPrimitive::TiltedPlanar { x, y } => {
            let (xp, xn) = solve_planar_pair(link, x)?;
            let (yp, yn) = solve_planar_pair(link, y)?;
            [xp, xn, yp, yn]
        }
    })
}

/// Fingertip state realising a primitive under zero load.
pub fn plan_primitive(cfg: &FingertipConfig, prim: MorphPrimitive) -> Result<FingertipState> {
    cfg.validate()?;
    let thetas = primitive_thetas(cfg, prim)?;
    FingertipState::from_thetas(cfg, thetas, ExternalLoad::default())
}

/// Quasi-static transition: linear interpolation in servo space with no
/// servo moving more than `step_deg` per step. Endpoints included; a
/// zero-motion transition yields one state.
pub fn transition_trajectory(
    cfg: &FingertipConfig,
    from: MorphPrimitive,
    to: MorphPrimitive,
) -> Result<Vec<FingertipState>> {
    cfg.validate()?;
    let start = primitive_thetas(cfg, from)?;
    let end = primitive_thetas(cfg, to)?;
    let max_delta = start
        .iter()
        .zip(&end)
        .map(|(a, b)| (b.0 - a.0).abs())
        .fold(0.0, f64::max);
    let step = cfg.step_deg.to_radians();
    // the small slack keeps exact multiples of the step from rounding up
    let n = (max_delta / step - 1e-9).ceil().max(0.0) as usize;
    let steps: Vec<usize> = (0..=n).collect();
    let states = batch::map(&steps, |&i| {
        let thetas: [ServoAngle; 4] = std::array::from_fn(|k| {
            if i == n {
                end[k]
            } else {
                ServoAngle(start[k].0 + (end[k].0 - start[k].0) * (i as f64 / n as f64))
            }
        });
        FingertipState::from_thetas(cfg, thetas, ExternalLoad::default()).map_err(|e| e.at_step(i))
    });
    states.into_iter().collect()
}
