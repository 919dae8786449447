#![allow(dead_code)]

use morphtip::fingertip::{plan_primitive, FingertipConfig, MorphPrimitive};
use morphtip::grasp::{Closure, Contact, GraspScene, ObjectXSection};
use morphtip::{FacetAngle, Vec2, Vec3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Minimiser of the pair spring energy
/// `½k[(φ₊ − ψ)² + (φ₋ + ψ)²] − τψ` by repeated grid refinement.
///
/// Each level compares the energy change from the current center `c`,
/// `(a − δ)² − a² = δ(δ − 2a)`, so nearby grid points stay distinguishable
/// far below √ε.
pub fn energy_grid_min(phi_pos: f64, phi_neg: f64, k: f64, tau: f64) -> f64 {
    let mut c = 0.0;
    let mut w = 1.5;
    let n = 40;
    while w > 1e-16 {
        let (ap, an) = (phi_pos - c, phi_neg + c);
        let delta_e = |d: f64| 0.5 * k * (d * (d - 2.0 * ap) + d * (d + 2.0 * an)) - tau * d;
        let h = 2.0 * w / n as f64;
        let best = (0..=n)
            .map(|i| -w + i as f64 * h)
            .min_by(|a, b| delta_e(*a).total_cmp(&delta_e(*b)))
            .unwrap();
        c += best;
        w = h;
    }
    c
}

fn solve3(a: Vec3, b: Vec3, c: Vec3, g: Vec3) -> Option<[f64; 3]> {
    let det = a.dot(&b.cross(&c));
    if det.abs() < 1e-12 {
        return None;
    }
    // Cramer
    Some([
        g.dot(&b.cross(&c)) / det,
        a.dot(&g.cross(&c)) / det,
        a.dot(&b.cross(&g)) / det,
    ])
}

/// Brute force: the wrench cone is all of R³ if each of `samples` random
/// directions is a nonnegative combination of some three wrenches.
pub fn cone_covers_space(w: &[Vec3], samples: usize, rng: &mut ChaCha8Rng) -> bool {
    let n = w.len();
    for _ in 0..samples {
        let g = loop {
            let v = Vec3::new(
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
            );
            let len = v.norm();
            if len > 1e-3 && len <= 1.0 {
                break v / len;
            }
        };
        let mut hit = false;
        'tri: for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    if let Some(x) = solve3(w[i], w[j], w[k], g) {
                        if x.iter().all(|&c| c >= -1e-12) {
                            hit = true;
                            break 'tri;
                        }
                    }
                }
            }
        }
        if !hit {
            return false;
        }
    }
    true
}

/// Raw wrenches `(f, p × f)` about the origin.
pub fn raw_wrenches(contacts: &[Contact], mu: f64) -> Vec<Vec3> {
    let mut out = Vec::new();
    for c in contacts {
        let t = Vec2::new(-c.normal.y, c.normal.x);
        let forces = if mu == 0.0 {
            vec![c.normal]
        } else {
            vec![c.normal + mu * t, c.normal - mu * t]
        };
        for f in forces {
            out.push(Vec3::new(f.x, f.y, c.point.x * f.y - c.point.y * f.x));
        }
    }
    out
}

pub fn oracle_closure(contacts: &[Contact], mu: f64, rng: &mut ChaCha8Rng) -> Closure {
    const SAMPLES: usize = 10_000;
    if cone_covers_space(&raw_wrenches(contacts, 0.0), SAMPLES, rng) {
        Closure::FormClosure
    } else if mu > 0.0 && cone_covers_space(&raw_wrenches(contacts, mu), SAMPLES, rng) {
        Closure::ForceClosure
    } else {
        Closure::None
    }
}

pub fn rank(c: Closure) -> u8 {
    match c {
        Closure::None => 0,
        Closure::ForceClosure => 1,
        Closure::FormClosure => 2,
    }
}

pub fn x_profile(cfg: &FingertipConfig, prim: MorphPrimitive) -> Vec<Vec2> {
    plan_primitive(cfg, prim).unwrap().x.profile
}

pub fn concave(deg: f64) -> MorphPrimitive {
    MorphPrimitive::Concave(FacetAngle::from_degrees(deg))
}

pub fn convex(deg: f64) -> MorphPrimitive {
    MorphPrimitive::Convex(FacetAngle::from_degrees(deg))
}

pub fn random_primitive(rng: &mut ChaCha8Rng) -> MorphPrimitive {
    match rng.random_range(0..3) {
        0 => MorphPrimitive::Flat,
        1 => concave(rng.random_range(3.0..23.0)),
        _ => convex(rng.random_range(-13.0..-3.0)),
    }
}

pub fn regular_polygon(n: usize, r: f64, rot: f64, center: Vec2) -> Vec<Vec2> {
    (0..n)
        .map(|i| {
            let a = rot + i as f64 * std::f64::consts::TAU / n as f64;
            center + r * Vec2::new(a.cos(), a.sin())
        })
        .collect()
}

pub fn random_object(rng: &mut ChaCha8Rng) -> ObjectXSection {
    let center = Vec2::new(0.0, rng.random_range(-4.0..4.0));
    if rng.random_bool(0.3) {
        ObjectXSection::Circle {
            radius: rng.random_range(5.0..80.0),
            center,
        }
    } else {
        let n = rng.random_range(3..=6);
        ObjectXSection::ConvexPolygon(regular_polygon(
            n,
            rng.random_range(6.0..25.0),
            rng.random_range(0.0..std::f64::consts::TAU),
            center,
        ))
    }
}

/// Seated scenes from random primitives, objects and friction; poses that
/// cannot be seated are redrawn.
pub fn random_scenes(cfg: &FingertipConfig, count: usize, seed: u64) -> Vec<GraspScene> {
    let mut r = rng(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let left = x_profile(cfg, random_primitive(&mut r));
        let right = x_profile(cfg, random_primitive(&mut r));
        let object = random_object(&mut r);
        let mu = if r.random_bool(0.3) {
            0.0
        } else {
            r.random_range(0.05..1.0)
        };
        if let Ok(s) = GraspScene::seated(&left, &right, object, mu) {
            if morphtip::grasp::find_contacts(&s).is_ok() {
                out.push(s);
            }
        }
    }
    out
}
