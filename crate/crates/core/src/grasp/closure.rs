//! Planar wrench-space closure and pivot tests.

use serde::Serialize;

use super::contact::{Contact, Side};
use crate::{Error, Result, Vec2, Vec3};

/// Margin on unit wrenches below which a separating plane counts as found.
pub const HULL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Closure {
    None,
    ForceClosure,
    FormClosure,
}

/// Contact wrenches `(fx, fy, τ/ρ)` with torque about the contact centroid
/// scaled by the largest contact radius `ρ`. Frictionless contacts give
/// their normal; with `mu > 0` each contact gives the two friction-cone
/// edges `n ± μt`.
pub fn contact_wrenches(contacts: &[Contact], mu: f64) -> Result<Vec<Vec3>> {
    if !(mu.is_finite() && mu >= 0.0) {
        return Err(Error::InvalidParams(format!(
            "friction coefficient {mu} must be >= 0"
        )));
    }
    if contacts.is_empty() {
        return Ok(Vec::new());
    }
    let centroid = contacts.iter().fold(Vec2::zeros(), |a, c| a + c.point) / contacts.len() as f64;
    let rho = contacts
        .iter()
        .map(|c| (c.point - centroid).norm())
        .fold(0.0, f64::max);
    let scale = if rho > 0.0 { rho } else { 1.0 };
    let mut out = Vec::with_capacity(2 * contacts.len());
    for c in contacts {
        let r = (c.point - centroid) / scale;
        let t = Vec2::new(-c.normal.y, c.normal.x);
        let dirs: &[Vec2] = if mu == 0.0 {
            &[c.normal]
        } else {
            &[c.normal + mu * t, c.normal - mu * t]
        };
        for f in dirs {
            out.push(Vec3::new(f.x, f.y, r.perp(f)));
        }
    }
    Ok(out)
}

/// Whether the vectors positively span ℝ³, i.e. the origin lies strictly
/// inside their convex hull.
///
/// Requires rank 3 and no plane through the origin with every vector on one
/// side. If such a plane exists, one exists through two of the vectors, so
/// only the normals `wᵢ × wⱼ` need checking.
pub fn positively_spans(wrenches: &[Vec3]) -> bool {
    let w: Vec<Vec3> = wrenches
        .iter()
        .filter(|v| v.norm() > 0.0)
        .map(|v| v.normalize())
        .collect();
    let n = w.len();
    if n < 4 {
        return false;
    }
    let mut full_rank = false;
    'rank: for i in 0..n {
        for j in i + 1..n {
            let c = w[i].cross(&w[j]);
            if w[j + 1..].iter().any(|v| c.dot(v).abs() > HULL_TOL) {
                full_rank = true;
                break 'rank;
            }
        }
    }
    if !full_rank {
        return false;
    }
    for i in 0..n {
        for j in i + 1..n {
            let c = w[i].cross(&w[j]);
            let len = c.norm();
            if len < 1e-12 {
                continue;
            }
            let c = c / len;
            let (lo, hi) = w
                .iter()
                .map(|v| c.dot(v))
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), d| {
                    (lo.min(d), hi.max(d))
                });
            if hi <= HULL_TOL || lo >= -HULL_TOL {
                return false;
            }
        }
    }
    true
}

/// Form closure if the frictionless normals already close the grasp, force
/// closure if the friction-cone edges do, otherwise none.
pub fn closure_classify(contacts: &[Contact], mu: f64) -> Result<Closure> {
    if contacts.len() >= 2
        && contacts
            .iter()
            .all(|c| (c.point - contacts[0].point).norm() <= 1e-9)
    {
        return Err(Error::Degenerate("all contacts coincide".into()));
    }
    if contacts.len() < 2 {
        contact_wrenches(contacts, mu)?;
        return Ok(Closure::None);
    }
    if positively_spans(&contact_wrenches(contacts, 0.0)?) {
        return Ok(Closure::FormClosure);
    }
    if mu > 0.0 && positively_spans(&contact_wrenches(contacts, mu)?) {
        return Ok(Closure::ForceClosure);
    }
    Ok(Closure::None)
}

fn angle_between(a: Vec2, b: Vec2) -> f64 {
    a.perp(&b).abs().atan2(a.dot(&b))
}

/// Pure pinch: one contact per side with anti-parallel normals along the
/// line joining the two contacts (to 1e−3 rad), so the object may spin
/// about that line.
pub fn pivot_feasible(contacts: &[Contact]) -> bool {
    const ANG_TOL: f64 = 1e-3;
    let pick = |side| {
        let mut it = contacts.iter().filter(move |c| c.feature.side == side);
        match (it.next(), it.next()) {
            (Some(c), None) => Some(*c),
            _ => None,
        }
    };
    let (Some(l), Some(r)) = (pick(Side::Left), pick(Side::Right)) else {
        return false;
    };
    let span = r.point - l.point;
    if span.norm() == 0.0 {
        return false;
    }
    angle_between(l.normal, -r.normal) <= ANG_TOL && angle_between(l.normal, span) <= ANG_TOL
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grasp::Feature;

    fn contact(p: (f64, f64), n: (f64, f64), side: Side) -> Contact {
        Contact {
            point: Vec2::new(p.0, p.1),
            normal: Vec2::new(n.0, n.1).normalize(),
            feature: Feature { side, segment: 0 },
        }
    }

    fn antipodal() -> Vec<Contact> {
        vec![
            contact((-5.0, 0.0), (1.0, 0.0), Side::Left),
            contact((5.0, 0.0), (-1.0, 0.0), Side::Right),
        ]
    }

    #[test]
    fn antipodal_needs_friction() {
        assert_eq!(closure_classify(&antipodal(), 0.0).unwrap(), Closure::None);
        assert_eq!(
            closure_classify(&antipodal(), 0.5).unwrap(),
            Closure::ForceClosure
        );
        assert!(pivot_feasible(&antipodal()));
    }

    #[test]
    fn coincident_is_degenerate() {
        let cs = vec![
            contact((1.0, 1.0), (1.0, 0.0), Side::Left),
            contact((1.0, 1.0), (0.0, 1.0), Side::Right),
        ];
        assert!(matches!(
            closure_classify(&cs, 0.3),
            Err(Error::Degenerate(_))
        ));
        assert_eq!(closure_classify(&cs[..1], 0.3).unwrap(), Closure::None);
        assert_eq!(closure_classify(&[], 0.3).unwrap(), Closure::None);
    }

    #[test]
    fn four_tilted_normals_form_close() {
        let (c, s) = (20f64.to_radians().cos(), 20f64.to_radians().sin());
        let cs = vec![
            contact((-3.0, 3.0), (c, -s), Side::Left),
            contact((-3.0, -3.0), (c, s), Side::Left),
            contact((3.0, 3.0), (-c, -s), Side::Right),
            contact((3.0, -3.0), (-c, s), Side::Right),
        ];
        assert_eq!(closure_classify(&cs, 0.0).unwrap(), Closure::FormClosure);
        assert_eq!(closure_classify(&cs, 0.4).unwrap(), Closure::FormClosure);
        assert!(!pivot_feasible(&cs));
    }

    #[test]
    fn offset_pinch_not_pivotable() {
        let cs = vec![
            contact((-5.0, 0.0), (1.0, 0.0), Side::Left),
            contact((5.0, 1.0), (-1.0, 0.0), Side::Right),
        ];
        assert!(!pivot_feasible(&cs));
        assert!(!pivot_feasible(&[]));
    }
}
