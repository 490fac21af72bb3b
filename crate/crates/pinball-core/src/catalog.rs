//! Built-in polygon families and their known cylinder classifications,
//! with the numeric values the reproduction suite checks against.

use std::f64::consts::{FRAC_PI_3, FRAC_PI_6, PI, SQRT_2};

use crate::cylinder::Cylinder;
use crate::dynamics::{billiard_step, PhasePoint};
use crate::error::{Error, Result};
use crate::geometry::Polygon;
use crate::itinerary::Itinerary;
use crate::stability::{classify, Verdict};
use crate::vec2::Vec2;

/// Tolerance for closed-form witnesses (angles, derivative coefficients).
pub const CLOSED_FORM_TOL: f64 = 1e-12;
/// Tolerance for geometric witnesses (lengths, endpoint sums).
pub const LENGTH_TOL: f64 = 1e-9;

/// Expected numeric witnesses of a known cylinder, where the source states
/// them.
#[derive(Debug, Clone, Default)]
pub struct ExpectedWitnesses {
    pub departure_angle: Option<f64>,
    pub omega0: Option<f64>,
    pub total_length: Option<f64>,
    pub lengths_left: Option<Vec<f64>>,
    pub lengths_right: Option<Vec<f64>>,
    pub endpoint_sum_left: Option<f64>,
    pub endpoint_sum_right: Option<f64>,
}

/// A cylinder with a known classification.
#[derive(Debug, Clone)]
pub struct KnownCase {
    pub label: String,
    pub itinerary: Itinerary,
    pub expected: Verdict,
    /// Number of cylinders this word family stands for (a self-retracing
    /// family and its reversal share one canonical word but count as two).
    pub count: usize,
    /// Word reconstructed by unfolding rather than stated verbatim.
    pub derived_word: bool,
    pub witnesses: Option<ExpectedWitnesses>,
}

impl KnownCase {
    fn new(label: &str, word: &str, expected: Verdict) -> Self {
        Self {
            label: label.to_string(),
            itinerary: word.parse().expect("catalog word"),
            expected,
            count: 1,
            derived_word: false,
            witnesses: None,
        }
    }

    fn derived(mut self) -> Self {
        self.derived_word = true;
        self
    }

    fn counted(mut self, count: usize) -> Self {
        self.count = count;
        self
    }

    fn with_witnesses(mut self, w: ExpectedWitnesses) -> Self {
        self.witnesses = Some(w);
        self
    }
}

/// Construct a named polygon together with its known cylinder list.
///
/// Names: `square`, `rectangle(W)`, `equilateral`, `hexagon`, `tri306090`,
/// `tri454590`, `regular(D)`. Parameters also parse in `name:param` form.
pub fn known_polygon(name: &str) -> Result<(Polygon, Vec<KnownCase>)> {
    let (base, param) = split_name(name);
    match base {
        "square" => Ok((square(), square_cases())),
        "equilateral" => Ok((equilateral(), equilateral_cases())),
        "hexagon" => Ok((hexagon(), hexagon_cases())),
        "tri306090" => Ok((tri306090(), tri306090_cases())),
        "tri454590" => Ok((tri454590(), tri454590_cases())),
        "rectangle" => {
            let w: f64 = param
                .ok_or_else(|| Error::BadParameter("rectangle needs an aspect ratio".into()))?
                .parse()
                .map_err(|e| Error::BadParameter(format!("aspect ratio: {e}")))?;
            if !(w > 0.0) || !w.is_finite() {
                return Err(Error::BadParameter(format!("aspect ratio must be positive, got {w}")));
            }
            let poly = rectangle(w);
            let cases = rectangle_cases(&poly, w)?;
            Ok((poly, cases))
        }
        "regular" => {
            let d: usize = param
                .ok_or_else(|| Error::BadParameter("regular needs a side count".into()))?
                .parse()
                .map_err(|e| Error::BadParameter(format!("side count: {e}")))?;
            if d < 3 {
                return Err(Error::BadParameter(format!("need at least 3 sides, got {d}")));
            }
            Ok((regular(d), regular_cases(d)))
        }
        _ => Err(Error::UnknownName(name.to_string())),
    }
}

fn split_name(name: &str) -> (&str, Option<&str>) {
    if let Some((base, rest)) = name.split_once('(') {
        return (base, rest.strip_suffix(')'));
    }
    if let Some((base, rest)) = name.split_once(':') {
        return (base, Some(rest));
    }
    (name, None)
}

pub fn square() -> Polygon {
    rectangle(1.0)
}

pub fn rectangle(w: f64) -> Polygon {
    Polygon::from_vertices(vec![
        Vec2::new(0.0, 0.0),
        Vec2::new(w, 0.0),
        Vec2::new(w, 1.0),
        Vec2::new(0.0, 1.0),
    ])
    .expect("rectangle")
}

pub fn equilateral() -> Polygon {
    regular(3)
}

pub fn hexagon() -> Polygon {
    regular(6)
}

/// Right triangle with the 60-degree corner at the origin: horizontal
/// short leg of length 1, vertical long leg, hypotenuse back to the
/// origin. Sides are labeled counterclockwise from the horizontal edge.
pub fn tri306090() -> Polygon {
    Polygon::from_vertices(vec![
        Vec2::new(0.0, 0.0),
        Vec2::new(1.0, 0.0),
        Vec2::new(1.0, 3f64.sqrt()),
    ])
    .expect("tri306090")
}

/// Isosceles right triangle: horizontal and vertical legs of length 1,
/// the hypotenuse is the diagonal of the unit square it unfolds to.
pub fn tri454590() -> Polygon {
    Polygon::from_vertices(vec![
        Vec2::new(0.0, 0.0),
        Vec2::new(1.0, 0.0),
        Vec2::new(1.0, 1.0),
    ])
    .expect("tri454590")
}

/// Regular d-gon with unit sides, side 1 running from the origin along the
/// x-axis.
pub fn regular(d: usize) -> Polygon {
    let mut vertices = Vec::with_capacity(d);
    let mut cur = Vec2::new(0.0, 0.0);
    for k in 0..d {
        vertices.push(cur);
        let phi = 2.0 * PI * k as f64 / d as f64;
        cur = cur + Vec2::new(phi.cos(), phi.sin());
    }
    Polygon::from_vertices(vertices).expect("regular polygon")
}

/// The generalized Fagnano word on a regular d-gon: side indices advance
/// by `m` each bounce, starting at side 1.
pub fn fagnano_word(d: usize, m: usize) -> Itinerary {
    let g = gcd(d, m);
    let period = d / g;
    let word: Vec<usize> = (0..period).map(|k| (k * m) % d).collect();
    Itinerary::new(word).expect("fagnano word")
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn square_cases() -> Vec<KnownCase> {
    let rt2 = SQRT_2;
    vec![
        KnownCase::new("horizontal ping-pong", "1,3", Verdict::PingPong),
        KnownCase::new("vertical ping-pong", "2,4", Verdict::PingPong),
        KnownCase::new("diagonal cylinder, period 4", "1,2,3,4", Verdict::LambdaStable)
            .with_witnesses(ExpectedWitnesses {
                departure_angle: Some(PI / 4.0),
                omega0: Some(PI / 8.0),
                total_length: Some(2.0 * rt2),
                lengths_left: Some(vec![rt2, rt2, 2.0 * rt2, 2.0 * rt2]),
                lengths_right: Some(vec![0.0, rt2, rt2, 2.0 * rt2]),
                endpoint_sum_left: Some(0.0),
                endpoint_sum_right: Some(PI * rt2 / 2.0),
            }),
        KnownCase::new("reversed diagonal cylinder, period 4", "1,4,3,2", Verdict::LambdaStable)
            .with_witnesses(ExpectedWitnesses {
                departure_angle: Some(-PI / 4.0),
                omega0: Some(-PI / 8.0),
                total_length: Some(2.0 * rt2),
                ..Default::default()
            }),
    ]
}

fn equilateral_cases() -> Vec<KnownCase> {
    let rt3 = 3f64.sqrt();
    vec![
        KnownCase::new("Fagnano orbit, period 3", "1,2,3", Verdict::OddPeriod),
        KnownCase::new("reversed Fagnano orbit, period 3", "1,3,2", Verdict::OddPeriod),
        KnownCase::new(
            "perpendicular cylinder, period 4 (with its reversal)",
            "1,2,1,3",
            Verdict::LambdaStable,
        )
        .counted(2)
        .with_witnesses(ExpectedWitnesses {
            departure_angle: Some(FRAC_PI_3),
            omega0: Some(FRAC_PI_6),
            total_length: Some(rt3),
            lengths_left: Some(vec![rt3 / 2.0, rt3, rt3, rt3]),
            lengths_right: Some(vec![0.0, 0.0, rt3 / 2.0, rt3]),
            endpoint_sum_left: Some(0.0),
            endpoint_sum_right: Some(PI / rt3),
        }),
    ]
}

fn hexagon_cases() -> Vec<KnownCase> {
    vec![
        KnownCase::new("ping-pong 1-4", "1,4", Verdict::PingPong).derived(),
        KnownCase::new("ping-pong 2-5", "2,5", Verdict::PingPong).derived(),
        KnownCase::new("ping-pong 3-6", "3,6", Verdict::PingPong).derived(),
        KnownCase::new("Fagnano cylinder, period 6", "1,2,3,4,5,6", Verdict::LambdaStable)
            .with_witnesses(ExpectedWitnesses {
                departure_angle: Some(FRAC_PI_3),
                omega0: Some(FRAC_PI_6),
                ..Default::default()
            }),
        KnownCase::new("reversed Fagnano cylinder, period 6", "1,6,5,4,3,2", Verdict::LambdaStable)
            .with_witnesses(ExpectedWitnesses {
                departure_angle: Some(-FRAC_PI_3),
                omega0: Some(-FRAC_PI_6),
                ..Default::default()
            }),
        KnownCase::new("Fagnano orbit on odd sides, period 3", "1,3,5", Verdict::OddPeriod),
        KnownCase::new("Fagnano orbit on even sides, period 3", "2,4,6", Verdict::OddPeriod),
        KnownCase::new("reversed odd-side Fagnano, period 3", "1,5,3", Verdict::OddPeriod),
        KnownCase::new("reversed even-side Fagnano, period 3", "2,6,4", Verdict::OddPeriod),
    ]
}

fn tri306090_cases() -> Vec<KnownCase> {
    let rt3 = 3f64.sqrt();
    vec![
        KnownCase::new(
            "period 6 perpendicular to the short leg and the hypotenuse",
            "1,3,2,3,2,3",
            Verdict::LambdaStable,
        )
        .counted(2)
        .with_witnesses(ExpectedWitnesses {
            departure_angle: Some(0.0),
            omega0: Some(-5.0 * PI / 18.0),
            total_length: Some(2.0 * rt3),
            lengths_left: Some(vec![
                0.0,
                2.0 / rt3,
                rt3,
                4.0 / rt3,
                2.0 * rt3,
                2.0 * rt3,
            ]),
            lengths_right: Some(vec![rt3, rt3, rt3, rt3, rt3, 2.0 * rt3]),
            endpoint_sum_left: Some(-7.0 * PI / (3.0 * rt3)),
            endpoint_sum_right: Some(0.0),
        }),
        KnownCase::new(
            "period 10 perpendicular to the long leg",
            "1,2,3,2,3,2,1,3,2,3",
            Verdict::LambdaStable,
        )
        .counted(2)
        .with_witnesses(ExpectedWitnesses {
            departure_angle: Some(FRAC_PI_6),
            omega0: Some(PI / 5.0),
            total_length: Some(6.0),
            lengths_left: Some(vec![2.0, 2.0, 2.0, 2.0, 2.0, 4.0, 4.0, 5.0, 6.0, 6.0]),
            lengths_right: Some(vec![0.0, 1.0, 1.5, 2.0, 3.0, 3.0, 4.0, 4.5, 5.0, 6.0]),
            endpoint_sum_left: Some(0.0),
            endpoint_sum_right: Some(1.5 * PI),
        }),
        KnownCase::new(
            "period 6 perpendicular to the hypotenuse",
            "1,2,3,2,1,3",
            Verdict::LambdaStable,
        )
        .counted(2)
        .with_witnesses(ExpectedWitnesses {
            departure_angle: Some(FRAC_PI_3),
            omega0: Some(FRAC_PI_6),
            total_length: Some(2.0 * rt3),
            lengths_left: Some(vec![
                2.0 / rt3,
                rt3,
                4.0 / rt3,
                2.0 * rt3,
                2.0 * rt3,
                2.0 * rt3,
            ]),
            lengths_right: Some(vec![
                0.0,
                rt3 / 2.0,
                rt3,
                rt3,
                1.5 * rt3,
                2.0 * rt3,
            ]),
            endpoint_sum_left: Some(PI / (3.0 * rt3)),
            endpoint_sum_right: Some(rt3 * PI / 2.0),
        }),
    ]
}

fn tri454590_cases() -> Vec<KnownCase> {
    vec![
        KnownCase::new(
            "period 4 perpendicular to both legs",
            "1,3,2,3",
            Verdict::LambdaStable,
        )
        .counted(2)
        .derived()
        .with_witnesses(ExpectedWitnesses {
            departure_angle: Some(0.0),
            ..Default::default()
        }),
        KnownCase::new(
            "period 6 perpendicular to the hypotenuse",
            "1,2,3,2,1,3",
            Verdict::LambdaStable,
        )
        .counted(2)
        .derived()
        .with_witnesses(ExpectedWitnesses {
            departure_angle: Some(PI / 4.0),
            ..Default::default()
        }),
    ]
}

fn rectangle_cases(poly: &Polygon, w: f64) -> Result<Vec<KnownCase>> {
    let mut cases = vec![
        KnownCase::new("horizontal ping-pong", "1,3", Verdict::PingPong),
        KnownCase::new("vertical ping-pong", "2,4", Verdict::PingPong),
    ];
    for case in crate::stability::rectangle_admissible_slopes(w, 50)? {
        if case.p == 0 {
            continue;
        }
        if let Ok(word) = rectangle_cylinder_word(poly, w, case.p, case.q) {
            cases.push(
                KnownCase {
                    label: format!("slope cylinder p={} q={}", case.p, case.q),
                    itinerary: word,
                    expected: Verdict::LambdaStable,
                    count: 2,
                    derived_word: true,
                    witnesses: None,
                },
            );
        }
    }
    Ok(cases)
}

/// Reconstruct the itinerary of the rectangle cylinder with slope
/// `p / (q w)` by iterating the elastic billiard from the bottom side.
pub fn rectangle_cylinder_word(poly: &Polygon, w: f64, p: u64, q: u64) -> Result<Itinerary> {
    let period = 2 * (p + q) as usize;
    let theta = (q as f64 * w).atan2(p as f64);
    let mut last_err = Error::VertexHit;
    for k in 1..=16u64 {
        let s0 = w * k as f64 / 17.0;
        let mut cur = PhasePoint::new(0, s0, theta);
        let mut word = Vec::with_capacity(period);
        let mut ok = true;
        for _ in 0..period {
            word.push(cur.pos.side);
            match billiard_step(poly, &cur) {
                Ok(next) => cur = next,
                Err(e) => {
                    last_err = e;
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        if cur.pos.side == 0 && (cur.pos.s - s0).abs() < 1e-9 && (cur.theta - theta).abs() < 1e-9 {
            return Itinerary::new(word);
        }
    }
    Err(last_err)
}

/// One line of a reproduction report.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

fn check_value(checks: &mut Vec<Check>, name: &str, expected: f64, actual: f64, tol: f64) {
    let pass = (expected - actual).abs() <= tol;
    checks.push(Check {
        name: name.to_string(),
        pass,
        detail: format!("expected {expected:.12e}, got {actual:.12e}"),
    });
}

/// Classify a known case and compare every stated witness.
pub fn verify_case(poly: &Polygon, case: &KnownCase) -> Vec<Check> {
    let mut checks = Vec::new();
    match classify(poly, &case.itinerary) {
        Ok(report) => {
            checks.push(Check {
                name: "verdict".into(),
                pass: report.verdict == case.expected,
                detail: format!("expected {}, got {}", case.expected.name(), report.verdict.name()),
            });
        }
        Err(e) => {
            checks.push(Check {
                name: "verdict".into(),
                pass: false,
                detail: format!("classification failed: {e}"),
            });
            return checks;
        }
    }

    let Some(expected) = &case.witnesses else {
        return checks;
    };

    if let Some(theta) = expected.departure_angle {
        match crate::cylinder::departure_angle(poly, &case.itinerary) {
            Ok(actual) => check_value(&mut checks, "departure angle", theta, actual, CLOSED_FORM_TOL),
            Err(e) => checks.push(Check {
                name: "departure angle".into(),
                pass: false,
                detail: e.to_string(),
            }),
        }
    }
    if let Some(omega) = expected.omega0 {
        match crate::cylinder::omega0(poly, &case.itinerary) {
            Ok(actual) => check_value(&mut checks, "omega0", omega, actual, CLOSED_FORM_TOL),
            Err(e) => checks.push(Check {
                name: "omega0".into(),
                pass: false,
                detail: e.to_string(),
            }),
        }
    }

    let needs_cylinder = expected.total_length.is_some()
        || expected.lengths_left.is_some()
        || expected.lengths_right.is_some()
        || expected.endpoint_sum_left.is_some()
        || expected.endpoint_sum_right.is_some();
    if !needs_cylinder {
        return checks;
    }
    let cyl = match Cylinder::build(poly, &case.itinerary) {
        Ok(c) => c,
        Err(e) => {
            checks.push(Check {
                name: "cylinder".into(),
                pass: false,
                detail: format!("cannot build cylinder: {e}"),
            });
            return checks;
        }
    };
    if let Some(expected_total) = expected.total_length {
        check_value(&mut checks, "cylinder length", expected_total, cyl.total_length, LENGTH_TOL);
    }
    if let Some(table) = &expected.lengths_left {
        for (k, expected_len) in table.iter().enumerate() {
            check_value(
                &mut checks,
                &format!("L_{}(l)", k + 1),
                *expected_len,
                cyl.lengths_left[k],
                LENGTH_TOL,
            );
        }
    }
    if let Some(table) = &expected.lengths_right {
        for (k, expected_len) in table.iter().enumerate() {
            check_value(
                &mut checks,
                &format!("L_{}(r)", k + 1),
                *expected_len,
                cyl.lengths_right[k],
                LENGTH_TOL,
            );
        }
    }
    if let Some(sum) = expected.endpoint_sum_left {
        check_value(&mut checks, "endpoint sum left", sum, cyl.endpoint_sum_left(), LENGTH_TOL);
    }
    if let Some(sum) = expected.endpoint_sum_right {
        check_value(&mut checks, "endpoint sum right", sum, cyl.endpoint_sum_right(), LENGTH_TOL);
    }
    checks
}

/// The polygons covered by the one-shot reproduction run.
pub fn reproduction_names() -> Vec<String> {
    vec![
        "square".into(),
        "equilateral".into(),
        "hexagon".into(),
        "tri306090".into(),
        "tri454590".into(),
        // aspect ratio (1/2) cot(pi/6): admits the (1,2) slope family
        format!("rectangle({})", 0.5 * 3f64.sqrt()),
        "regular(5)".into(),
    ]
}

fn regular_cases(d: usize) -> Vec<KnownCase> {
    let mut cases = Vec::new();
    if d % 2 == 0 {
        for i in 0..d / 2 {
            let word = Itinerary::new(vec![i, i + d / 2]).expect("ping-pong word");
            cases.push(KnownCase {
                label: format!("ping-pong {}-{}", i + 1, i + 1 + d / 2),
                itinerary: word,
                expected: Verdict::PingPong,
                count: 1,
                derived_word: true,
                witnesses: None,
            });
        }
    }
    for m in 1..d {
        if 2 * m >= d {
            break;
        }
        let word = fagnano_word(d, m);
        let expected = if word.period() % 2 == 1 {
            Verdict::OddPeriod
        } else {
            Verdict::LambdaStable
        };
        let angle = 0.5 * PI * (1.0 - 2.0 * m as f64 / d as f64);
        cases.push(KnownCase {
            label: format!("Fagnano cylinder, step {m}"),
            itinerary: word,
            expected,
            count: 1,
            derived_word: false,
            witnesses: Some(ExpectedWitnesses {
                departure_angle: if expected == Verdict::LambdaStable {
                    Some(angle)
                } else {
                    None
                },
                ..Default::default()
            }),
        });
    }
    cases
}
