//! Resting heights under gravity (`−y`) on a fingertip profile.

use crate::{Error, Result, Vec2};

/// Highest `y` on the vertical line `x = u` within distance `r` of the
/// segment, i.e. the top of the capsule cut by that line.
fn capsule_top(a: Vec2, b: Vec2, r: f64, u: f64) -> Option<f64> {
    let mut best: Option<f64> = None;
    let mut take = |y: f64| best = Some(best.map_or(y, |m: f64| m.max(y)));
    for p in [a, b] {
        let dx = u - p.x;
        if dx.abs() <= r {
            take(p.y + (r * r - dx * dx).sqrt());
        }
    }
    let d = b - a;
    let len = d.norm();
    if len > 0.0 {
        // offset line along the upward normal
        let mut n = Vec2::new(-d.y, d.x) / len;
        if n.y < 0.0 {
            n = -n;
        }
        if d.x != 0.0 {
            let t = (u - r * n.x - a.x) / d.x;
            if (0.0..=1.0).contains(&t) {
                take(a.y + t * d.y + r * n.y);
            }
        }
    }
    best
}

/// Resting center height of a circle of `radius` lowered onto the profile
/// with its center at horizontal offset `u`.
pub fn cradle_height(profile: &[Vec2], radius: f64, u: f64) -> Result<f64> {
    if !(radius > 0.0 && radius.is_finite()) || !u.is_finite() {
        return Err(Error::InvalidParams(format!(
            "bad circle radius {radius} or offset {u}"
        )));
    }
    profile
        .windows(2)
        .filter_map(|s| capsule_top(s[0], s[1], radius, u))
        .reduce(f64::max)
        .ok_or(Error::Unsupported { offset: u })
}

/// Sign of the discrete curvature of the cradle height at `u = 0`
/// (step 0.1 mm): `1` for a strict local minimum, `−1` for a strict
/// local maximum, `0` when flat to 1e−9 mm.
pub fn cradle_curvature_sign(profile: &[Vec2], radius: f64) -> Result<i8> {
    const STEP: f64 = 0.1;
    let h0 = cradle_height(profile, radius, 0.0)?;
    let hp = cradle_height(profile, radius, STEP)?;
    let hm = cradle_height(profile, radius, -STEP)?;
    let (dp, dm) = (hp - h0, hm - h0);
    Ok(if dp > 1e-9 && dm > 1e-9 {
        1
    } else if dp < -1e-9 && dm < -1e-9 {
        -1
    } else {
        0
    })
}

/// `y` values where the vertical line `x = u` meets the segment.
fn segment_y_at(a: Vec2, b: Vec2, u: f64) -> Option<(f64, f64)> {
    let (lo, hi) = if a.x <= b.x { (a, b) } else { (b, a) };
    if u < lo.x || u > hi.x {
        return None;
    }
    if hi.x == lo.x {
        return Some((lo.y.min(hi.y), lo.y.max(hi.y)));
    }
    let y = lo.y + (u - lo.x) / (hi.x - lo.x) * (hi.y - lo.y);
    Some((y, y))
}

/// Vertical shift `ℓ` that sets the convex polygon `vertices` (any
/// orientation) resting on top of the profile: the polygon translated by
/// `(0, ℓ)` touches it without overlap.
pub fn rest_lift(profile: &[Vec2], vertices: &[Vec2]) -> Result<f64> {
    let n = vertices.len();
    let mut lift: Option<f64> = None;
    let mut take = |v: f64| lift = Some(lift.map_or(v, |m: f64| m.max(v)));
    // polygon vertex above a profile segment
    for p in vertices {
        for s in profile.windows(2) {
            if let Some((_, top)) = segment_y_at(s[0], s[1], p.x) {
                take(top - p.y);
            }
        }
    }
    // profile vertex below a polygon edge
    for q in profile {
        let lower = (0..n)
            .filter_map(|i| segment_y_at(vertices[i], vertices[(i + 1) % n], q.x))
            .map(|(lo, _)| lo)
            .reduce(f64::min);
        if let Some(lo) = lower {
            take(q.y - lo);
        }
    }
    lift.ok_or(Error::Unsupported {
        offset: vertices.iter().map(|p| p.x).sum::<f64>() / n.max(1) as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_profile_constant_height() {
        let flat = [Vec2::new(-10.0, 0.0), Vec2::new(10.0, 0.0)];
        for u in [-10.0, -3.0, 0.0, 4.5, 10.0] {
            assert_eq!(cradle_height(&flat, 2.0, u).unwrap(), 2.0);
        }
        // past the end the circle rolls over the corner
        let h = cradle_height(&flat, 2.0, 11.0).unwrap();
        assert!((h - 3f64.sqrt()).abs() < 1e-12);
        assert!(matches!(
            cradle_height(&flat, 2.0, 12.5),
            Err(Error::Unsupported { .. })
        ));
    }

    #[test]
    fn v_groove_seat() {
        // 45° V with apex at origin: center height r·√2
        let v = [
            Vec2::new(-10.0, 10.0),
            Vec2::new(0.0, 0.0),
            Vec2::new(10.0, 10.0),
        ];
        let h = cradle_height(&v, 1.0, 0.0).unwrap();
        assert!((h - 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(cradle_curvature_sign(&v, 1.0).unwrap(), 1);
        let ridge = [
            Vec2::new(-10.0, -10.0),
            Vec2::new(0.0, 0.0),
            Vec2::new(10.0, -10.0),
        ];
        assert_eq!(cradle_curvature_sign(&ridge, 1.0).unwrap(), -1);
    }

    #[test]
    fn square_rests_on_flat() {
        let flat = [Vec2::new(-10.0, 0.0), Vec2::new(10.0, 0.0)];
        let sq = [
            Vec2::new(-1.0, 5.0),
            Vec2::new(1.0, 5.0),
            Vec2::new(1.0, 7.0),
            Vec2::new(-1.0, 7.0),
        ];
        assert_eq!(rest_lift(&flat, &sq).unwrap(), -5.0);
        let far: Vec<Vec2> = sq.iter().map(|p| p + Vec2::new(50.0, 0.0)).collect();
        assert!(rest_lift(&flat, &far).is_err());
    }
}
