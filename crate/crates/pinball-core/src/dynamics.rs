//! The billiard map, the pinball map and empirical orbit search.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{BoundaryPoint, HitKind, Polygon, THETA_TOL};
use crate::itinerary::Itinerary;

/// A boundary point together with an outgoing reflection angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    pub pos: BoundaryPoint,
    pub theta: f64,
}

impl PhasePoint {
    pub const fn new(side: usize, s: f64, theta: f64) -> Self {
        Self {
            pos: BoundaryPoint::new(side, s),
            theta,
        }
    }
}

/// One period of a pinball orbit.
#[derive(Debug, Clone)]
pub struct OrbitSegment {
    pub points: Vec<PhasePoint>,
    pub itinerary: Itinerary,
    pub lambda: f64,
}

/// One step of the elastic billiard map.
pub fn billiard_step(poly: &Polygon, p: &PhasePoint) -> Result<PhasePoint> {
    let hit = poly.cast_ray(&p.pos, p.theta)?;
    if hit.kind == HitKind::Vertex {
        return Err(Error::VertexHit);
    }
    let theta = poly.beta(p.pos.side, hit.target.side) - p.theta;
    Ok(PhasePoint {
        pos: hit.target,
        theta,
    })
}

/// One step of the pinball map: elastic bounce followed by scaling the
/// reflection angle by `lambda` towards the normal.
pub fn pinball_step(poly: &Polygon, p: &PhasePoint, lambda: f64) -> Result<PhasePoint> {
    let elastic = billiard_step(poly, p)?;
    let theta = lambda * elastic.theta;
    if theta.abs() >= PI / 2.0 - THETA_TOL {
        return Err(Error::AngleOverflow { step: 0 });
    }
    Ok(PhasePoint {
        pos: elastic.pos,
        theta,
    })
}

/// The reversing involution `(s, theta) -> (s, -theta)`.
pub fn involution(p: &PhasePoint) -> PhasePoint {
    PhasePoint {
        pos: p.pos,
        theta: -p.theta,
    }
}

/// Expansion factor `cos(lambda * theta) / cos(theta)` of one pinball bounce.
pub fn rho(theta: f64, lambda: f64) -> Result<f64> {
    if theta.abs() >= PI / 2.0 - THETA_TOL || (lambda * theta).abs() >= PI / 2.0 - THETA_TOL {
        return Err(Error::GrazingRay);
    }
    Ok((lambda * theta).cos() / theta.cos())
}

/// Solve for the unique periodic pinball orbit with the given itinerary, if
/// one exists.
///
/// The angle along the cycle is the fixed point of a composition of affine
/// maps `theta -> lambda * (beta - theta)`, and the position is the fixed
/// point of the induced affine map between supporting lines. The candidate
/// is then checked to be a genuine orbit (every leg lands inside the stated
/// side). For a parallel-sided ping-pong word the position map is the
/// identity; `s_hint` selects the member of the family in that case.
pub fn solve_periodic_orbit(
    poly: &Polygon,
    itinerary: &Itinerary,
    lambda: f64,
    s_hint: Option<f64>,
) -> Option<OrbitSegment> {
    let word = itinerary.word();
    let p = word.len();
    if itinerary.max_label() > poly.num_sides() {
        return None;
    }

    // Fixed point of the composed angle map.
    let mut a = 1.0;
    let mut b = 0.0;
    for k in 0..p {
        let beta = poly.beta(word[k], word[(k + 1) % p]);
        b = lambda * (beta - b);
        a *= -lambda;
    }
    if (1.0 - a).abs() < 1e-12 {
        return None;
    }
    let theta0 = b / (1.0 - a);

    let mut thetas = Vec::with_capacity(p);
    let mut theta = theta0;
    for k in 0..p {
        if theta.abs() >= PI / 2.0 - THETA_TOL {
            return None;
        }
        thetas.push(theta);
        theta = lambda * (poly.beta(word[k], word[(k + 1) % p]) - theta);
    }

    // Fixed point of the composed position map (affine between lines).
    let mut at_zero = 0.0;
    let mut at_one = 1.0;
    for k in 0..p {
        let (from, to) = (word[k], word[(k + 1) % p]);
        at_zero = poly.project_to_line(from, at_zero, thetas[k], to).ok()?.0;
        at_one = poly.project_to_line(from, at_one, thetas[k], to).ok()?.0;
    }
    let slope = at_one - at_zero;
    let s0 = if (1.0 - slope).abs() > 1e-9 {
        at_zero / (1.0 - slope)
    } else {
        s_hint?
    };

    // Verify against the actual dynamics.
    let start = PhasePoint::new(word[0], s0, theta0);
    let mut points = Vec::with_capacity(p);
    let mut cur = start;
    for k in 0..p {
        if cur.pos.side != word[k] {
            return None;
        }
        points.push(cur);
        cur = pinball_step(poly, &cur, lambda).ok()?;
    }
    let scale = poly.side_len(start.pos.side);
    let residual =
        ((cur.pos.s - start.pos.s) / scale).abs().max((cur.theta - start.theta).abs());
    if cur.pos.side != start.pos.side || residual > 1e-8 {
        return None;
    }

    Some(OrbitSegment {
        points,
        itinerary: itinerary.clone(),
        lambda,
    })
}

/// Sample phase space, iterate past a transient and report the periodic
/// cycles the trajectories settle on or shadow.
///
/// Periodic orbits of period above two are saddles for `lambda != 1`, so a
/// trajectory on the attractor only shadows them for finite stretches.
/// Detection therefore combines direct state recurrence with extraction of
/// repeating itinerary windows; every candidate word is resolved through
/// the closed-form orbit solver and verified against the dynamics before it
/// is reported.
pub fn find_attracting_cycles(
    poly: &Polygon,
    lambda: f64,
    n_samples: usize,
    transient: usize,
    max_period: usize,
    seed: u64,
) -> Vec<(Itinerary, OrbitSegment)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut found: BTreeMap<Itinerary, OrbitSegment> = BTreeMap::new();
    let window = 4 * max_period.max(2) + 32;

    for _ in 0..n_samples {
        let side = rng.gen_range(0..poly.num_sides());
        let s = rng.gen_range(0.02..0.98) * poly.side_len(side);
        let theta = rng.gen_range(-1.4..1.4);
        let mut cur = PhasePoint::new(side, s, theta);

        let mut alive = true;
        for _ in 0..transient {
            match pinball_step(poly, &cur, lambda) {
                Ok(next) => cur = next,
                Err(_) => {
                    alive = false;
                    break;
                }
            }
        }
        if !alive {
            continue;
        }

        let mut states = Vec::with_capacity(window);
        states.push(cur);
        for _ in 0..window - 1 {
            match pinball_step(poly, &cur, lambda) {
                Ok(next) => {
                    cur = next;
                    states.push(next);
                }
                Err(_) => break,
            }
        }
        if states.len() < 2 * max_period.max(2) {
            continue;
        }

        let letters: Vec<usize> = states.iter().map(|q| q.pos.side).collect();
        let last = states.len() - 1;

        let mut candidates: Vec<(Vec<usize>, f64)> = Vec::new();
        // direct recurrence of the state within the tail
        for p in 1..=max_period.min(last) {
            let a = &states[last];
            let b = &states[last - p];
            if a.pos.side == b.pos.side {
                let scale = poly.side_len(a.pos.side);
                if ((a.pos.s - b.pos.s) / scale).abs() + (a.theta - b.theta).abs() < 1e-8 {
                    candidates.push((letters[last - p..last].to_vec(), b.pos.s));
                }
            }
        }
        // repeating itinerary windows (shadowed saddles)
        for p in 2..=max_period {
            for off in 0..p {
                if p + off > last {
                    break;
                }
                let lo = states.len() - p - off;
                let word = letters[lo..lo + p].to_vec();
                candidates.push((word, states[lo].pos.s));
            }
        }

        for (word, hint) in candidates {
            let Ok(it) = Itinerary::new(word) else {
                continue;
            };
            // a power of a shorter word names the same cycle
            if !it.is_primitive() {
                continue;
            }
            let canonical = it.canonical();
            if found.contains_key(&canonical) {
                continue;
            }
            if let Some(orbit) = solve_periodic_orbit(poly, &canonical, lambda, Some(hint)) {
                found.insert(canonical, orbit);
            }
        }
    }

    found.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Polygon;
    use crate::vec2::Vec2;
    use std::f64::consts::{FRAC_PI_3, FRAC_PI_6};

    fn unit_square() -> Polygon {
        Polygon::from_vertices(vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(1.0, 1.0),
            Vec2::new(0.0, 1.0),
        ])
        .unwrap()
    }

    fn equilateral() -> Polygon {
        Polygon::from_vertices(vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(0.5, 3f64.sqrt() / 2.0),
        ])
        .unwrap()
    }

    #[test]
    fn square_ping_pong_is_period_two() {
        let p = unit_square();
        let start = PhasePoint::new(0, 0.5, 0.0);
        let next = billiard_step(&p, &start).unwrap();
        assert_eq!(next.pos.side, 2);
        assert!((next.pos.s - 0.5).abs() < 1e-12);
        assert!(next.theta.abs() < 1e-12);
        let back = billiard_step(&p, &next).unwrap();
        assert!((back.pos.s - 0.5).abs() < 1e-12);
        assert_eq!(back.pos.side, 0);
    }

    #[test]
    fn fagnano_step_on_equilateral() {
        let p = equilateral();
        let next = billiard_step(&p, &PhasePoint::new(0, 0.5, FRAC_PI_6)).unwrap();
        assert_eq!(next.pos.side, 1);
        assert!((next.pos.s - 0.5).abs() < 1e-12);
        assert!((next.theta - FRAC_PI_6).abs() < 1e-12);
    }

    #[test]
    fn reflection_law_angle() {
        // departing side 1 of the equilateral at pi/3 lands perpendicular
        let p = equilateral();
        let next = billiard_step(&p, &PhasePoint::new(0, 0.3, FRAC_PI_3)).unwrap();
        assert_eq!(next.pos.side, 1);
        assert!(next.theta.abs() < 1e-12);
    }

    #[test]
    fn pinball_at_unit_lambda_matches_billiard_bitwise() {
        let p = equilateral();
        let start = PhasePoint::new(0, 0.37, 0.41);
        let a = billiard_step(&p, &start).unwrap();
        let b = pinball_step(&p, &start, 1.0).unwrap();
        assert_eq!(a.pos.side, b.pos.side);
        assert_eq!(a.pos.s, b.pos.s);
        assert_eq!(a.theta, b.theta);
    }

    #[test]
    fn pinball_scales_reflected_angle() {
        let p = equilateral();
        // from side 2 at theta = 0 the ray lands on side 1
        let next = pinball_step(&p, &PhasePoint::new(1, 0.4, 0.0), 0.9).unwrap();
        assert_eq!(next.pos.side, 0);
        assert!((next.theta - 0.9 * (-FRAC_PI_3)).abs() < 1e-12);
    }

    #[test]
    fn involution_is_involutive() {
        let q = PhasePoint::new(0, 0.3, 0.4);
        let s = involution(&q);
        assert_eq!(s.theta, -0.4);
        assert_eq!(involution(&s), q);
    }

    #[test]
    fn rho_values() {
        assert!((rho(0.0, 0.7).unwrap() - 1.0).abs() < 1e-15);
        assert!((rho(0.83, 1.0).unwrap() - 1.0).abs() < 1e-15);
        let r = rho(FRAC_PI_3, 0.9).unwrap();
        assert!((r - 1.1755705045849463).abs() < 1e-12);
        assert!(rho(1.6, 0.9).is_err());
    }

    #[test]
    fn search_finds_square_ping_pong() {
        let p = unit_square();
        let cycles = find_attracting_cycles(&p, 0.9, 16, 200, 4, 7);
        assert!(cycles
            .iter()
            .any(|(it, orbit)| it.to_string() == "1,3" && orbit.points[0].theta.abs() < 1e-6));
    }

    #[test]
    fn solver_rejects_unrealizable_words() {
        let p = unit_square();
        // {1,2,3}: the angle fixed point exists but the legs cannot close
        let it: Itinerary = "1,2,3".parse().unwrap();
        assert!(solve_periodic_orbit(&p, &it, 0.9, Some(0.5)).is_none());
    }

    #[test]
    fn solver_locates_square_fagnano() {
        let p = unit_square();
        let it: Itinerary = "1,2,3,4".parse().unwrap();
        let orbit = solve_periodic_orbit(&p, &it, 0.95, Some(0.5)).unwrap();
        assert_eq!(orbit.points.len(), 4);
        // at lambda = 1 the whole family is periodic; near 1 the orbit is unique
        let again = solve_periodic_orbit(&p, &it, 0.95, Some(0.9)).unwrap();
        assert!((orbit.points[0].pos.s - again.points[0].pos.s).abs() < 1e-10);
    }
}
