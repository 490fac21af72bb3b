//! Stability of periodic cylinders under the contraction parameter: the
//! decision procedure, the endpoint derivative test, continuation of fixed
//! points in `lambda`, and the rectangle slope equation.

use std::f64::consts::PI;
use std::fmt;

use crate::cylinder::{
    affine_return_map, alternating_beta_sum, base_interval, departure_angle, path_lengths,
    theta0_of_lambda, Cylinder, NECESSARY_TOL,
};
use crate::dynamics::{pinball_step, solve_periodic_orbit, PhasePoint};
use crate::error::{Error, Result};
use crate::geometry::{Polygon, THETA_TOL};
use crate::itinerary::Itinerary;

/// Margin below which a strict inequality of the sufficient condition is
/// treated as an equality and the verdict stays inconclusive.
pub const STRICT_MARGIN: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// Even cylinder passing the sufficient inequality chain at its
    /// endpoints.
    LambdaStable,
    /// Even cylinder whose endpoint derivatives share a sign.
    NotLambdaStable,
    /// Boundary case: an endpoint quantity sits inside the strictness
    /// margin, so neither the sufficient test nor its negation applies.
    Inconclusive,
    /// Period-two orbit bouncing perpendicularly between parallel sides.
    PingPong,
    /// Realizable odd-period orbit; always survives the contraction limit.
    OddPeriod,
    /// The word admits no periodic orbit at the required departure angle.
    NoSuchOrbit,
}

impl Verdict {
    pub fn is_lambda_stable(self) -> bool {
        matches!(self, Verdict::LambdaStable | Verdict::PingPong | Verdict::OddPeriod)
    }

    pub fn name(self) -> &'static str {
        match self {
            Verdict::LambdaStable => "lambda-stable",
            Verdict::NotLambdaStable => "not-lambda-stable",
            Verdict::Inconclusive => "inconclusive",
            Verdict::PingPong => "ping-pong",
            Verdict::OddPeriod => "odd-period",
            Verdict::NoSuchOrbit => "no-such-orbit",
        }
    }
}

/// Numeric evidence backing a verdict.
#[derive(Debug, Clone, Default)]
pub struct Witnesses {
    pub alternating_beta_sum: Option<f64>,
    pub departure_angle: Option<f64>,
    pub omega0: Option<f64>,
    pub total_length: Option<f64>,
    pub omega0_times_length: Option<f64>,
    pub endpoint_sum_left: Option<f64>,
    pub endpoint_sum_right: Option<f64>,
    pub derivative_left: Option<f64>,
    pub derivative_right: Option<f64>,
    pub base_interval: Option<(f64, f64)>,
    /// Foot point of the surviving orbit when the verdict is stable.
    pub base_point: Option<f64>,
    pub bracket: Option<(f64, f64)>,
}

#[derive(Debug, Clone)]
pub struct StabilityReport {
    pub itinerary: Itinerary,
    pub verdict: Verdict,
    pub gsv_stable: bool,
    pub witnesses: Witnesses,
}

/// One row of a continuation table in `lambda`.
#[derive(Debug, Clone, Copy)]
pub struct ContinuationRow {
    pub lambda: f64,
    pub s0: f64,
    pub theta0: f64,
    pub residual: f64,
    /// Whether the fixed point of the extended return map is a genuine
    /// orbit: every leg lands inside the side named by the itinerary.
    pub legal: bool,
}

/// Robustness under polygon deformation in the sense of the alternating
/// letter sum: even words need the signed sum of their labels to vanish;
/// odd words always qualify (the doubled word cancels).
pub fn gsv_check(itinerary: &Itinerary) -> bool {
    if !itinerary.is_even() {
        return true;
    }
    let sum: i64 = itinerary
        .word()
        .iter()
        .enumerate()
        .map(|(k, &side)| {
            let label = side as i64 + 1;
            if k % 2 == 0 {
                label
            } else {
                -label
            }
        })
        .sum();
    sum == 0
}

/// `dF/dlambda` of the return map at `lambda = 1` evaluated at foot point
/// `s`: `(L*Omega_0 - sum_k (-1)^k theta_k L_k(s)) / cos(theta_0)`.
pub fn slope_derivative(poly: &Polygon, itinerary: &Itinerary, s: f64) -> Result<f64> {
    let cyl = Cylinder::build(poly, itinerary)?;
    let (lengths, total) = path_lengths(poly, itinerary, s)?;
    let sum = cyl.alternating_theta_length_sum(&lengths);
    Ok((total * cyl.omega0 - sum) / cyl.theta_hat[0].cos())
}

/// The sufficient inequality chain on a bracket `a < b` inside the base
/// interval. Returns the verdict together with the numbers it rests on.
pub fn sufficient_check(
    poly: &Polygon,
    itinerary: &Itinerary,
    a: f64,
    b: f64,
) -> Result<(bool, Witnesses)> {
    let cyl = Cylinder::build(poly, itinerary)?;
    let tol = 1e-9 * poly.perimeter();
    if !(a < b) || a < cyl.base.0 - tol || b > cyl.base.1 + tol {
        return Err(Error::InvalidBracket);
    }
    let (lengths_a, _) = path_lengths(poly, itinerary, a)?;
    let (lengths_b, _) = path_lengths(poly, itinerary, b)?;
    let sum_a = cyl.alternating_theta_length_sum(&lengths_a);
    let sum_b = cyl.alternating_theta_length_sum(&lengths_b);
    let target = cyl.omega0 * cyl.total_length;
    let holds = sum_a < target - STRICT_MARGIN && target + STRICT_MARGIN < sum_b;
    let mut w = Witnesses {
        departure_angle: Some(cyl.theta_hat[0]),
        omega0: Some(cyl.omega0),
        total_length: Some(cyl.total_length),
        omega0_times_length: Some(target),
        endpoint_sum_left: Some(sum_a),
        endpoint_sum_right: Some(sum_b),
        base_interval: Some(cyl.base),
        ..Default::default()
    };
    if holds {
        w.bracket = Some((a, b));
        w.base_point = base_point_from_sums(a, b, sum_a, sum_b, target);
    }
    Ok((holds, w))
}

fn base_point_from_sums(a: f64, b: f64, sum_a: f64, sum_b: f64, target: f64) -> Option<f64> {
    // The alternating sum is affine in the foot point; its crossing with
    // Omega_0 * L is where dF/dlambda vanishes, the surviving orbit.
    if (sum_b - sum_a).abs() < 1e-300 {
        return None;
    }
    Some(a + (target - sum_a) * (b - a) / (sum_b - sum_a))
}

/// Decide the fate of the cylinder with the given itinerary.
pub fn classify(poly: &Polygon, itinerary: &Itinerary) -> Result<StabilityReport> {
    if itinerary.max_label() > poly.num_sides() {
        return Err(Error::IllegalItinerary {
            reason: format!(
                "word references side {} but the polygon has {} sides",
                itinerary.max_label(),
                poly.num_sides()
            ),
        });
    }
    let gsv_stable = gsv_check(itinerary);
    let report = |verdict, witnesses| StabilityReport {
        itinerary: itinerary.clone(),
        verdict,
        gsv_stable,
        witnesses,
    };

    let (root, _) = itinerary.primitive_root();

    // Period-two orbits exist exactly between parallel sides and never go
    // through the return-map machinery.
    if root.period() == 2 {
        let (i, j) = (root.word()[0], root.word()[1]);
        let beta = poly.beta(i, j);
        let mut w = Witnesses {
            alternating_beta_sum: Some(2.0 * beta),
            departure_angle: Some(0.0),
            ..Default::default()
        };
        if beta.abs() > NECESSARY_TOL {
            return Ok(report(Verdict::NoSuchOrbit, w));
        }
        return match base_interval(poly, &root) {
            Ok(base) => {
                w.base_interval = Some(base);
                w.base_point = Some(0.5 * (base.0 + base.1));
                Ok(report(Verdict::PingPong, w))
            }
            Err(_) => Ok(report(Verdict::NoSuchOrbit, w)),
        };
    }

    if !itinerary.is_even() {
        // Odd-period orbits are unconditionally stable under the
        // contraction limit, provided they exist at all.
        return match solve_periodic_orbit(poly, itinerary, 1.0, None) {
            Some(orbit) => {
                let w = Witnesses {
                    departure_angle: Some(orbit.points[0].theta),
                    base_point: Some(orbit.points[0].pos.s),
                    ..Default::default()
                };
                Ok(report(Verdict::OddPeriod, w))
            }
            None => Ok(report(Verdict::NoSuchOrbit, Witnesses::default())),
        };
    }

    let sum = alternating_beta_sum(poly, itinerary)?;
    let mut witnesses = Witnesses {
        alternating_beta_sum: Some(sum),
        ..Default::default()
    };
    if sum.abs() > NECESSARY_TOL {
        return Ok(report(Verdict::NoSuchOrbit, witnesses));
    }
    let theta0 = departure_angle(poly, itinerary)?;
    witnesses.departure_angle = Some(theta0);
    if theta0.abs() >= PI / 2.0 - THETA_TOL {
        return Ok(report(Verdict::NoSuchOrbit, witnesses));
    }
    let cyl = match Cylinder::build(poly, itinerary) {
        Ok(c) => c,
        Err(_) => return Ok(report(Verdict::NoSuchOrbit, witnesses)),
    };

    let sum_l = cyl.endpoint_sum_left();
    let sum_r = cyl.endpoint_sum_right();
    let target = cyl.omega0 * cyl.total_length;
    let cos0 = cyl.theta_hat[0].cos();
    witnesses.omega0 = Some(cyl.omega0);
    witnesses.total_length = Some(cyl.total_length);
    witnesses.omega0_times_length = Some(target);
    witnesses.endpoint_sum_left = Some(sum_l);
    witnesses.endpoint_sum_right = Some(sum_r);
    witnesses.derivative_left = Some((target - sum_l) / cos0);
    witnesses.derivative_right = Some((target - sum_r) / cos0);
    witnesses.base_interval = Some(cyl.base);

    let verdict = if target - sum_l > STRICT_MARGIN && sum_r - target > STRICT_MARGIN {
        witnesses.bracket = Some(cyl.base);
        witnesses.base_point = base_point_from_sums(cyl.base.0, cyl.base.1, sum_l, sum_r, target);
        Verdict::LambdaStable
    } else if target - sum_r > STRICT_MARGIN || sum_l - target > STRICT_MARGIN {
        // both endpoint derivatives share a sign
        Verdict::NotLambdaStable
    } else {
        Verdict::Inconclusive
    };
    Ok(report(verdict, witnesses))
}

/// Track the fixed point of the return map across a grid of contraction
/// parameters.
pub fn continue_orbit(
    poly: &Polygon,
    itinerary: &Itinerary,
    lambdas: &[f64],
) -> Result<Vec<ContinuationRow>> {
    if !itinerary.is_even() {
        return Err(Error::OddPeriod {
            period: itinerary.period(),
        });
    }
    if itinerary.period() == 2 {
        return Err(Error::IllegalItinerary {
            reason: "continuation applies to even periods above two".into(),
        });
    }
    let sum = alternating_beta_sum(poly, itinerary)?;
    if sum.abs() > NECESSARY_TOL {
        return Err(Error::NecessaryConditionFailed { sum });
    }

    // Analytic limit point at lambda = 1: the zero of dF/dlambda.
    let limit_point = Cylinder::build(poly, itinerary).ok().and_then(|cyl| {
        base_point_from_sums(
            cyl.base.0,
            cyl.base.1,
            cyl.endpoint_sum_left(),
            cyl.endpoint_sum_right(),
            cyl.omega0 * cyl.total_length,
        )
    });

    let mut rows = Vec::with_capacity(lambdas.len());
    for &lambda in lambdas {
        let theta0 = theta0_of_lambda(poly, itinerary, lambda)?;
        let map = affine_return_map(poly, itinerary, lambda)?;
        let s0 = match map.fixed_point() {
            Some(s) => s,
            None => {
                if (lambda - 1.0).abs() < 1e-9 {
                    limit_point.ok_or(Error::SlopeOne)?
                } else {
                    return Err(Error::SlopeOne);
                }
            }
        };
        let residual = (map.apply(s0) - s0).abs();
        let legal = orbit_is_legal(poly, itinerary, s0, theta0, lambda);
        rows.push(ContinuationRow {
            lambda,
            s0,
            theta0,
            residual,
            legal,
        });
    }
    Ok(rows)
}

fn orbit_is_legal(poly: &Polygon, itinerary: &Itinerary, s0: f64, theta0: f64, lambda: f64) -> bool {
    let word = itinerary.word();
    let mut cur = PhasePoint::new(word[0], s0, theta0);
    for k in 0..word.len() {
        if cur.pos.side != word[k] {
            return false;
        }
        match pinball_step(poly, &cur, lambda) {
            Ok(next) => cur = next,
            Err(_) => return false,
        }
    }
    cur.pos.side == word[0]
        && (cur.pos.s - s0).abs() < 1e-8 * poly.perimeter()
        && (cur.theta - theta0).abs() < 1e-8
}

/// An admissible rectangle direction: cylinders of slope `p / (q w)` exist
/// and survive the contraction limit exactly when the aspect ratio matches
/// the cotangent relation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlopeCase {
    pub p: u64,
    pub q: u64,
    /// `p / (q w)`; the mirrored cylinder has the opposite sign.
    pub slope: f64,
}

/// Scan coprime pairs `p + q <= max_sum` for aspect ratios `w` satisfying
/// `w = (p/q) cot(pi p / (2 (p+q)))`. The perpendicular ping-pong pair is
/// reported as `p = 0`.
pub fn rectangle_admissible_slopes(w: f64, max_sum: u64) -> Result<Vec<SlopeCase>> {
    if !(w > 0.0) {
        return Err(Error::BadParameter(format!("aspect ratio must be positive, got {w}")));
    }
    if max_sum < 2 {
        return Err(Error::BadParameter("max_sum must be at least 2".into()));
    }
    let mut out = vec![SlopeCase {
        p: 0,
        q: 1,
        slope: 0.0,
    }];
    for total in 2..=max_sum {
        for p in 1..total {
            let q = total - p;
            if gcd(p, q) != 1 {
                continue;
            }
            let angle = PI * p as f64 / (2.0 * total as f64);
            let predicted = (p as f64 / q as f64) * (angle.cos() / angle.sin());
            if (w - predicted).abs() < 1e-9 {
                out.push(SlopeCase {
                    p,
                    q,
                    slope: p as f64 / (q as f64 * w),
                });
            }
        }
    }
    Ok(out)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn sig(x: f64) -> String {
    format!("{:.11e}", x)
}

impl fmt::Display for StabilityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<22} {}", "itinerary:", self.itinerary)?;
        writeln!(f, "{:<22} {}", "period:", self.itinerary.period())?;
        writeln!(f, "{:<22} {}", "verdict:", self.verdict.name())?;
        writeln!(f, "{:<22} {}", "gsv-stable:", self.gsv_stable)?;
        let w = &self.witnesses;
        fn line(f: &mut fmt::Formatter<'_>, label: &str, value: Option<f64>) -> fmt::Result {
            if let Some(v) = value {
                writeln!(f, "{:<22} {}", label, sig(v))?;
            }
            Ok(())
        }
        line(f, "alternating beta sum:", w.alternating_beta_sum)?;
        line(f, "departure angle:", w.departure_angle)?;
        line(f, "omega0:", w.omega0)?;
        line(f, "cylinder length:", w.total_length)?;
        line(f, "omega0 * length:", w.omega0_times_length)?;
        line(f, "endpoint sum left:", w.endpoint_sum_left)?;
        line(f, "endpoint sum right:", w.endpoint_sum_right)?;
        line(f, "derivative at left:", w.derivative_left)?;
        line(f, "derivative at right:", w.derivative_right)?;
        if let Some((l, r)) = w.base_interval {
            writeln!(f, "{:<22} ({}, {})", "base interval:", sig(l), sig(r))?;
        }
        line(f, "base point:", w.base_point)?;
        if let Some((a, b)) = w.bracket {
            writeln!(f, "{:<22} ({}, {})", "bracket:", sig(a), sig(b))?;
        }
        Ok(())
    }
}

/// Render continuation rows as CSV with the fixed header.
pub fn continuation_csv(rows: &[ContinuationRow]) -> String {
    let mut out = String::from("lambda,s0,theta0,residual,legal\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            sig(row.lambda),
            sig(row.s0),
            sig(row.theta0),
            sig(row.residual),
            row.legal
        ));
    }
    out
}
