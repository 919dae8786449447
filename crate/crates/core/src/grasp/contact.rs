use serde::Serialize;

use super::{closest_on_segment, GraspScene, ObjectXSection};
use crate::{Error, Result, Vec2};

/// Distance at which object and profile count as touching, mm.
pub const CONTACT_TOL: f64 = 1e-7;
/// Overlap beyond which the pose is rejected, mm.
pub const PENETRATION_TOL: f64 = 1e-6;
/// Contacts closer than this are merged, mm.
pub const DEDUP_TOL: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// Profile segment carrying a contact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Feature {
    pub side: Side,
    pub segment: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Contact {
    pub point: Vec2,
    /// Unit normal pointing into the object.
    pub normal: Vec2,
    pub feature: Feature,
}

fn push_dedup(out: &mut Vec<Contact>, c: Contact) {
    if out.iter().all(|o| (o.point - c.point).norm() > DEDUP_TOL) {
        out.push(c);
    }
}

/// Separating-axis overlap of a segment and a convex polygon; positive means
/// the interiors intersect by that depth.
fn sat_depth(a: Vec2, b: Vec2, poly: &[Vec2]) -> f64 {
    let n = poly.len();
    let mut axes: Vec<Vec2> = (0..n)
        .map(|i| {
            let e = poly[(i + 1) % n] - poly[i];
            Vec2::new(-e.y, e.x).normalize()
        })
        .collect();
    let d = b - a;
    if d.norm() > 0.0 {
        axes.push(Vec2::new(-d.y, d.x).normalize());
    }
    axes.iter()
        .map(|ax| {
            let (pmin, pmax) = poly
                .iter()
                .map(|p| p.dot(ax))
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                    (lo.min(v), hi.max(v))
                });
            let (sa, sb) = (a.dot(ax), b.dot(ax));
            let (smin, smax) = (sa.min(sb), sa.max(sb));
            (pmax - smin).min(smax - pmin)
        })
        .fold(f64::INFINITY, f64::min)
}

/// Part of `[a, b]` inside a counter-clockwise convex polygon (Cyrus–Beck).
fn clip_segment(a: Vec2, b: Vec2, poly: &[Vec2]) -> Option<(Vec2, Vec2)> {
    let n = poly.len();
    let d = b - a;
    let (mut t0, mut t1) = (0.0f64, 1.0f64);
    for i in 0..n {
        let e = poly[(i + 1) % n] - poly[i];
        let inward = Vec2::new(-e.y, e.x);
        let num = (a - poly[i]).dot(&inward);
        let den = d.dot(&inward);
        if den == 0.0 {
            if num < 0.0 {
                return None;
            }
        } else {
            let t = -num / den;
            if den > 0.0 {
                t0 = t0.max(t);
            } else {
                t1 = t1.min(t);
            }
        }
    }
    (t0 <= t1).then(|| (a + t0 * d, a + t1 * d))
}

/// All object–profile touch points, left side first, each side in segment
/// order.
pub fn find_contacts(scene: &GraspScene) -> Result<Vec<Contact>> {
    let mut out = Vec::new();
    for side in [Side::Left, Side::Right] {
        let profile = scene.profile(side);
        match &scene.object {
            ObjectXSection::Circle { radius, center } => {
                for (i, s) in profile.windows(2).enumerate() {
                    let q = closest_on_segment(*center, s[0], s[1]);
                    let d = (center - q).norm();
                    if d < radius - PENETRATION_TOL {
                        return Err(Error::Penetration {
                            witness: [q.x, q.y],
                            depth: radius - d,
                        });
                    }
                    if (d - radius).abs() <= CONTACT_TOL {
                        let c = Contact {
                            point: q,
                            normal: (center - q) / d,
                            feature: Feature { side, segment: i },
                        };
                        push_dedup(&mut out, c);
                    }
                }
            }
            ObjectXSection::ConvexPolygon(poly) => {
                let centroid = scene.object.center();
                let m = poly.len();
                for (i, s) in profile.windows(2).enumerate() {
                    let depth = sat_depth(s[0], s[1], poly);
                    if depth > PENETRATION_TOL {
                        let w = clip_segment(s[0], s[1], poly)
                            .map(|(p, q)| 0.5 * (p + q))
                            .unwrap_or(s[0]);
                        return Err(Error::Penetration {
                            witness: [w.x, w.y],
                            depth,
                        });
                    }
                    let feature = Feature { side, segment: i };
                    let d = s[1] - s[0];
                    let mut seg_normal = Vec2::new(-d.y, d.x).normalize();
                    if (centroid - s[0]).dot(&seg_normal) < 0.0 {
                        seg_normal = -seg_normal;
                    }
                    // polygon vertex on the profile segment
                    for p in poly {
                        if (p - closest_on_segment(*p, s[0], s[1])).norm() <= CONTACT_TOL {
                            push_dedup(
                                &mut out,
                                Contact {
                                    point: *p,
                                    normal: seg_normal,
                                    feature,
                                },
                            );
                        }
                    }
                    // profile vertex on a polygon edge; the last vertex is
                    // handled with the last segment
                    let ends: &[Vec2] = if i + 2 == profile.len() { s } else { &s[..1] };
                    for q in ends {
                        for k in 0..m {
                            let (e0, e1) = (poly[k], poly[(k + 1) % m]);
                            if (q - closest_on_segment(*q, e0, e1)).norm() <= CONTACT_TOL {
                                let e = e1 - e0;
                                push_dedup(
                                    &mut out,
                                    Contact {
                                        point: *q,
                                        normal: Vec2::new(-e.y, e.x).normalize(),
                                        feature,
                                    },
                                );
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}
