use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize, Serializer};

use super::config::{OutputFormat, RunConfig, SweepSection};
use super::format::{fmt_sig, round_sig};
use super::{Cli, Command, Failure};
use crate::fingertip::{
    plan_primitive, pointer_top, primitive_thetas, transition_trajectory, FingertipConfig,
    FingertipState, MorphPrimitive,
};
use crate::grasp::{
    closure_classify, cradle_curvature_sign, find_contacts, pivot_feasible, Closure, GraspScene,
    ObjectXSection, Side,
};
use crate::linkage::{inverse_facet, FacetAngle, LinkageParams, ServoAngle};
use crate::{batch, Error, Result, Vec2, Vec3};

/// Serializers emitting every float at 9 significant digits.
mod sig {
    use super::*;

    pub fn num<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_f64(round_sig(*x))
    }

    pub fn arr<S: Serializer, const N: usize>(
        x: &[f64; N],
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        x.map(round_sig).serialize(s)
    }

    pub fn points<S: Serializer>(x: &[[f64; 2]], s: S) -> std::result::Result<S::Ok, S::Error> {
        x.iter()
            .map(|p| p.map(round_sig))
            .collect::<Vec<_>>()
            .serialize(s)
    }
}

fn v2(v: Vec2) -> [f64; 2] {
    [v.x, v.y]
}

fn v3(v: Vec3) -> [f64; 3] {
    [v.x, v.y, v.z]
}

fn deg<const N: usize>(x: [f64; N]) -> [f64; N] {
    x.map(f64::to_degrees)
}

/// Forward readout printed by `fk` and `ik`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FacetRecord {
    #[serde(serialize_with = "sig::num")]
    pub theta_deg: f64,
    #[serde(serialize_with = "sig::num")]
    pub phi_deg: f64,
    #[serde(rename = "B", serialize_with = "sig::arr")]
    pub b: [f64; 2],
    #[serde(rename = "C", serialize_with = "sig::arr")]
    pub c: [f64; 2],
    #[serde(rename = "CB", serialize_with = "sig::arr")]
    pub cb: [f64; 2],
}

pub fn fk_record(params: &LinkageParams, theta: ServoAngle) -> Result<FacetRecord> {
    let g = params.facet_geometry(theta)?;
    Ok(FacetRecord {
        theta_deg: g.theta.degrees(),
        phi_deg: g.phi.degrees(),
        b: v2(g.b),
        c: v2(g.c),
        cb: v2(g.cb),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub step: usize,
    #[serde(serialize_with = "sig::num")]
    pub theta_deg: f64,
    #[serde(serialize_with = "sig::num")]
    pub phi_deg: f64,
    #[serde(rename = "B_x_mm", serialize_with = "sig::num")]
    pub b_x_mm: f64,
    #[serde(rename = "B_y_mm", serialize_with = "sig::num")]
    pub b_y_mm: f64,
}

pub const SWEEP_HEADER: &str = "step,theta_deg,phi_deg,B_x_mm,B_y_mm";

/// Servo sweep rows, computed in parallel and returned in step order.
/// Fails at the first out-of-range step, or if the facet angle is not
/// strictly monotone along the sweep.
pub fn sweep_rows(params: &LinkageParams, sweep: &SweepSection) -> Result<Vec<SweepRow>> {
    sweep.validate()?;
    let steps: Vec<usize> = (0..sweep.count).collect();
    let rows = batch::map(&steps, |&i| {
        let mut theta_deg = sweep.start_deg + i as f64 * sweep.step_deg;
        if theta_deg.abs() < 1e-9 {
            theta_deg = 0.0;
        }
        let theta = ServoAngle::from_degrees(theta_deg);
        params
            .check_in_range(theta)
            .and_then(|_| params.facet_geometry(theta))
            .map(|g| SweepRow {
                step: i,
                theta_deg,
                phi_deg: g.phi.degrees(),
                b_x_mm: g.b.x,
                b_y_mm: g.b.y,
            })
            .map_err(|e| e.at_step(i))
    });
    let rows: Vec<SweepRow> = rows.into_iter().collect::<Result<_>>()?;
    let sign = (rows[1].phi_deg - rows[0].phi_deg).signum();
    for w in rows.windows(2) {
        let d = w[1].phi_deg - w[0].phi_deg;
        if d == 0.0 || d.signum() != sign {
            return Err(Error::OutOfRange {
                theta_deg: w[1].theta_deg,
                reason: "facet angle not strictly monotone along the sweep".into(),
            }
            .at_step(w[1].step));
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceRow {
    pub index: usize,
    /// Compass label of an extreme pose, empty for interpolated points.
    pub pose: String,
    #[serde(serialize_with = "sig::num")]
    pub tilt_x_deg: f64,
    #[serde(serialize_with = "sig::num")]
    pub tilt_y_deg: f64,
    #[serde(serialize_with = "sig::num")]
    pub x_mm: f64,
    #[serde(serialize_with = "sig::num")]
    pub y_mm: f64,
    #[serde(serialize_with = "sig::num")]
    pub z_mm: f64,
}

pub const TRACE_HEADER: &str = "index,pose,tilt_x_deg,tilt_y_deg,x_mm,y_mm,z_mm";

/// Extreme poses by the compass direction the pointer leans to,
/// counter-clockwise from `+x`.
const POSES: [(&str, f64, f64); 8] = [
    ("E", 1.0, 0.0),
    ("NE", 1.0, 1.0),
    ("N", 0.0, 1.0),
    ("NW", -1.0, 1.0),
    ("W", -1.0, 0.0),
    ("SW", -1.0, -1.0),
    ("S", 0.0, -1.0),
    ("SE", 1.0, -1.0),
];

/// Closed pointer-top loop through the eight extreme tilted-planar poses at
/// `psi_max`, with `segments` points per edge; the last row repeats the
/// first pose. Every pose is checked for reachability.
pub fn trace_rows(
    cfg: &FingertipConfig,
    psi_max_deg: f64,
    segments: usize,
) -> Result<Vec<TraceRow>> {
    if !psi_max_deg.is_finite() || psi_max_deg < 0.0 || segments == 0 {
        return Err(Error::InvalidParams(
            "trace needs psi_max >= 0 and at least one segment".into(),
        ));
    }
    let m = psi_max_deg.to_radians();
    // the pointer leans away from the raised side: lean +x needs tilt_x < 0
    let tilts = |k: usize| {
        let (_, ex, ey) = POSES[k % POSES.len()];
        (-ex * m, -ey * m)
    };
    let n = POSES.len() * segments;
    let idx: Vec<usize> = (0..=n).collect();
    let rows = batch::map(&idx, |&i| {
        let (k, j) = (i / segments, i % segments);
        let (ax, ay) = tilts(k);
        let (tx, ty) = if j == 0 {
            (ax, ay)
        } else {
            let (bx, by) = tilts(k + 1);
            let f = j as f64 / segments as f64;
            (ax + (bx - ax) * f, ay + (by - ay) * f)
        };
        primitive_thetas(cfg, MorphPrimitive::TiltedPlanar { x: tx, y: ty })
            .map_err(|e| e.at_step(i))?;
        let p = pointer_top(cfg, ty, -tx);
        Ok(TraceRow {
            index: i,
            pose: if j == 0 {
                POSES[k % POSES.len()].0.into()
            } else {
                String::new()
            },
            tilt_x_deg: tx.to_degrees(),
            tilt_y_deg: ty.to_degrees(),
            x_mm: p.x,
            y_mm: p.y,
            z_mm: p.z,
        })
    });
    rows.into_iter().collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StateRecord {
    #[serde(serialize_with = "sig::arr")]
    pub thetas_deg: [f64; 4],
    #[serde(serialize_with = "sig::arr")]
    pub phis_deg: [f64; 4],
    #[serde(serialize_with = "sig::arr")]
    pub terrace_tilt_deg: [f64; 2],
    #[serde(serialize_with = "sig::arr")]
    pub collinearity: [f64; 2],
    #[serde(serialize_with = "sig::points")]
    pub profile_x_mm: Vec<[f64; 2]>,
    #[serde(serialize_with = "sig::points")]
    pub profile_y_mm: Vec<[f64; 2]>,
    #[serde(serialize_with = "sig::arr")]
    pub pointer_mm: [f64; 3],
}

impl StateRecord {
    pub fn new(cfg: &FingertipConfig, s: &FingertipState) -> Self {
        let (tx, ty) = s.terrace_tilt();
        Self {
            thetas_deg: s.thetas().map(|t| t.degrees()),
            phis_deg: s.phis().map(|p| p.degrees()),
            terrace_tilt_deg: deg([tx, ty]),
            collinearity: [s.x.collinearity, s.y.collinearity],
            profile_x_mm: s.x.profile.iter().map(|p| v2(*p)).collect(),
            profile_y_mm: s.y.profile.iter().map(|p| v2(*p)).collect(),
            pointer_mm: v3(s.pointer(cfg)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlanRecord {
    pub primitive: String,
    #[serde(flatten)]
    pub state: StateRecord,
}

pub fn plan_record(cfg: &FingertipConfig, prim: MorphPrimitive) -> Result<PlanRecord> {
    let s = plan_primitive(cfg, prim)?;
    Ok(PlanRecord {
        primitive: prim.to_string(),
        state: StateRecord::new(cfg, &s),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
struct TransitionRecord {
    from: String,
    to: String,
    states: Vec<StateRecord>,
}

/// Scene file for `grasp`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraspSceneSpec {
    /// Primitive of each fingertip; its x-plane cross-section is used.
    pub left: String,
    pub right: String,
    pub object: ObjectSpec,
    #[serde(default)]
    pub mu: f64,
    /// Ball-joint separation; fingertips close onto the object when absent.
    #[serde(default)]
    pub gap_mm: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum ObjectSpec {
    Circle {
        radius_mm: f64,
        #[serde(default)]
        center_mm: [f64; 2],
    },
    Polygon {
        vertices_mm: Vec<[f64; 2]>,
    },
}

impl ObjectSpec {
    fn build(&self) -> ObjectXSection {
        match self {
            ObjectSpec::Circle {
                radius_mm,
                center_mm,
            } => ObjectXSection::Circle {
                radius: *radius_mm,
                center: Vec2::new(center_mm[0], center_mm[1]),
            },
            ObjectSpec::Polygon { vertices_mm } => ObjectXSection::ConvexPolygon(
                vertices_mm.iter().map(|v| Vec2::new(v[0], v[1])).collect(),
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContactRecord {
    #[serde(serialize_with = "sig::arr")]
    pub point_mm: [f64; 2],
    #[serde(serialize_with = "sig::arr")]
    pub normal: [f64; 2],
    pub side: Side,
    pub segment: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraspReport {
    pub contacts: Vec<ContactRecord>,
    pub pivot_feasible: bool,
    pub closure_class: Closure,
    /// `1` cradle minimum, `−1` maximum, `0` flat; absent for polygons or
    /// when the circle finds no support.
    pub cradle_curvature_sign: Option<i8>,
    #[serde(serialize_with = "sig::num")]
    pub gap_mm: f64,
}

pub fn grasp_report(cfg: &FingertipConfig, spec: &GraspSceneSpec) -> Result<GraspReport> {
    let left_prim: MorphPrimitive = spec.left.parse()?;
    let right_prim: MorphPrimitive = spec.right.parse()?;
    let left = plan_primitive(cfg, left_prim)?.x.profile;
    let right = plan_primitive(cfg, right_prim)?.x.profile;
    let object = spec.object.build();
    let scene = match spec.gap_mm {
        Some(gap) => GraspScene::with_gap(&left, &right, gap, object, spec.mu)?,
        None => GraspScene::seated(&left, &right, object, spec.mu)?,
    };
    let contacts = find_contacts(&scene)?;
    let closure = closure_classify(&contacts, spec.mu)?;
    let cradle = match &scene.object {
        ObjectXSection::Circle { radius, .. } => match cradle_curvature_sign(&left, *radius) {
            Ok(s) => Some(s),
            Err(Error::Unsupported { .. }) => None,
            Err(e) => return Err(e),
        },
        ObjectXSection::ConvexPolygon(_) => None,
    };
    Ok(GraspReport {
        pivot_feasible: pivot_feasible(&contacts),
        contacts: contacts
            .iter()
            .map(|c| ContactRecord {
                point_mm: v2(c.point),
                normal: v2(c.normal),
                side: c.feature.side,
                segment: c.feature.segment,
            })
            .collect(),
        closure_class: closure,
        cradle_curvature_sign: cradle,
        gap_mm: scene.gap(),
    })
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable") + "\n"
}

fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut s = String::from(SWEEP_HEADER);
    s.push('\n');
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{}",
            r.step,
            fmt_sig(r.theta_deg),
            fmt_sig(r.phi_deg),
            fmt_sig(r.b_x_mm),
            fmt_sig(r.b_y_mm)
        );
    }
    s
}

fn trace_csv(rows: &[TraceRow]) -> String {
    let mut s = String::from(TRACE_HEADER);
    s.push('\n');
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{}",
            r.index,
            r.pose,
            fmt_sig(r.tilt_x_deg),
            fmt_sig(r.tilt_y_deg),
            fmt_sig(r.x_mm),
            fmt_sig(r.y_mm),
            fmt_sig(r.z_mm)
        );
    }
    s
}

/// Writes to `path` if given (returning empty stdout), else returns the text.
fn emit(text: String, path: Option<&Path>) -> std::result::Result<String, Failure> {
    match path {
        Some(p) => {
            std::fs::write(p, text)
                .map_err(|e| Failure::config(format!("writing {}: {e}", p.display())))?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

pub(super) fn execute(cli: &Cli) -> std::result::Result<String, Failure> {
    let run = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let cfg = run.fingertip.build()?;
    let link = &cfg.linkage;
    match &cli.command {
        Command::Fk { theta } => Ok(json(&fk_record(link, ServoAngle::from_degrees(*theta))?)),
        Command::Ik { phi } => {
            let theta = inverse_facet(link, FacetAngle::from_degrees(*phi))?;
            Ok(json(&fk_record(link, theta)?))
        }
        Command::Plan { primitive, from } => {
            let to: MorphPrimitive = primitive.parse()?;
            match from {
                None => Ok(json(&plan_record(&cfg, to)?)),
                Some(f) => {
                    let from: MorphPrimitive = f.parse()?;
                    let states = transition_trajectory(&cfg, from, to)?;
                    Ok(json(&TransitionRecord {
                        from: from.to_string(),
                        to: to.to_string(),
                        states: states.iter().map(|s| StateRecord::new(&cfg, s)).collect(),
                    }))
                }
            }
        }
        Command::Sweep {
            start,
            step,
            count,
            format,
            out,
        } => {
            let mut sweep = run.sweep.clone();
            sweep.start_deg = start.unwrap_or(sweep.start_deg);
            sweep.step_deg = step.unwrap_or(sweep.step_deg);
            sweep.count = count.unwrap_or(sweep.count);
            let rows = sweep_rows(link, &sweep)?;
            let text = match format.unwrap_or(run.output.format) {
                OutputFormat::Csv => sweep_csv(&rows),
                OutputFormat::Json => json(&rows),
            };
            emit(text, out.as_deref().or(run.output.path.as_deref()))
        }
        Command::TracePointer {
            psi_max,
            segments,
            format,
            out,
        } => {
            let rows = trace_rows(
                &cfg,
                psi_max.unwrap_or(run.trace.psi_max_deg),
                segments.unwrap_or(run.trace.segments),
            )?;
            let text = match format.unwrap_or(run.output.format) {
                OutputFormat::Csv => trace_csv(&rows),
                OutputFormat::Json => json(&rows),
            };
            emit(text, out.as_deref().or(run.output.path.as_deref()))
        }
        Command::Grasp { scene } => {
            let text = std::fs::read_to_string(scene)
                .map_err(|e| Failure::config(format!("reading {}: {e}", scene.display())))?;
            let spec: GraspSceneSpec =
                serde_json::from_str(&text).map_err(|e| Failure::config(format!("scene: {e}")))?;
            Ok(json(&grasp_report(&cfg, &spec)?))
        }
    }
}
