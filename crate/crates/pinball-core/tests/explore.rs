// Temporary exploration harness (deleted before release).

use pinball_core::catalog::{known_polygon, reproduction_names};
use pinball_core::cylinder::{base_interval, Cylinder};
use pinball_core::dynamics::{billiard_step, find_attracting_cycles, PhasePoint};
use pinball_core::itinerary::{primitive_words, Itinerary};
use pinball_core::stability::{classify, continue_orbit, gsv_check, Verdict};

#[test]
#[ignore]
fn search_equilateral() {
    let (poly, _) = known_polygon("equilateral").unwrap();
    for (seed, samples, transient) in [(1u64, 64usize, 2000usize), (2, 128, 5000)] {
        let found = find_attracting_cycles(&poly, 0.9, samples, transient, 6, seed);
        let words: Vec<String> = found.iter().map(|(it, _)| it.to_string()).collect();
        println!("seed {seed} samples {samples}: {words:?}");
    }
}

#[test]
#[ignore]
fn search_tri306090() {
    let (poly, _) = known_polygon("tri306090").unwrap();
    let found = find_attracting_cycles(&poly, 0.95, 128, 4000, 10, 11);
    let words: Vec<String> = found.iter().map(|(it, _)| it.to_string()).collect();
    println!("tri306090 lambda=0.95: {words:?}");
}

#[test]
#[ignore]
fn continuation_all_catalog() {
    let grid: Vec<f64> = (0..41).map(|k| 0.9 + 0.005 * k as f64).collect();
    for name in reproduction_names() {
        let (poly, cases) = known_polygon(&name).unwrap();
        for case in &cases {
            if case.expected != Verdict::LambdaStable || !case.itinerary.is_even() {
                continue;
            }
            match continue_orbit(&poly, &case.itinerary, &grid) {
                Ok(rows) => {
                    let illegal: Vec<f64> = rows
                        .iter()
                        .filter(|r| !r.legal)
                        .map(|r| r.lambda)
                        .collect();
                    let max_resid = rows.iter().map(|r| r.residual).fold(0.0, f64::max);
                    println!(
                        "{name} / {}: illegal at {:?}, max residual {:.2e}",
                        case.label, illegal, max_resid
                    );
                }
                Err(e) => println!("{name} / {}: continuation error {e}", case.label),
            }
        }
    }
}

#[test]
#[ignore]
fn square_census() {
    let (poly, _) = known_polygon("square").unwrap();
    let mut stable = Vec::new();
    for p in 2..=8 {
        for word in primitive_words(4, p) {
            let report = classify(&poly, &word).unwrap();
            if report.verdict.is_lambda_stable() {
                stable.push(format!("{} ({})", word, report.verdict.name()));
            }
        }
    }
    println!("square lambda-stable words: {stable:?}");
}

#[test]
#[ignore]
fn regular_fagnano_cylinders() {
    for d in 3..=8usize {
        let (poly, _) = known_polygon(&format!("regular({d})")).unwrap();
        for m in 1..d {
            if 2 * m >= d {
                break;
            }
            let word = pinball_core::catalog::fagnano_word(d, m);
            let even_word = if word.period() % 2 == 1 {
                let doubled: Vec<usize> = word
                    .word()
                    .iter()
                    .chain(word.word().iter())
                    .copied()
                    .collect();
                Itinerary::new(doubled).unwrap()
            } else {
                word.clone()
            };
            let verdict = classify(&poly, &even_word).unwrap().verdict;
            match Cylinder::build(&poly, &even_word) {
                Ok(cyl) => {
                    let n = cyl.period() / 2;
                    let (lengths_mid, total) =
                        pinball_core::cylinder::path_lengths(&poly, &even_word, cyl.midpoint())
                            .unwrap();
                    let mid_sum = cyl.alternating_theta_length_sum(&lengths_mid);
                    let mid_gap = (mid_sum - cyl.omega0 * cyl.total_length).abs();
                    let mut ladder_gap = 0.0f64;
                    for k in (1..2 * n).step_by(2) {
                        ladder_gap = ladder_gap.max(
                            (cyl.lengths_left[k] - cyl.lengths_left[k - 1] - cyl.lengths_right[0])
                                .abs(),
                        );
                        ladder_gap = ladder_gap.max(
                            (cyl.lengths_right[k] - cyl.lengths_right[k - 1] - cyl.lengths_left[0])
                                .abs(),
                        );
                    }
                    println!(
                        "d={d} m={m} word={even_word}: {} midgap {mid_gap:.2e} laddergap {ladder_gap:.2e} L={total:.6}",
                        verdict.name()
                    );
                }
                Err(e) => println!("d={d} m={m} word={even_word}: {} cylinder error {e}", verdict.name()),
            }
        }
    }
}

#[test]
#[ignore]
fn gsv_item2_search() {
    // find a word: letter-alternating sum 0 (gsv-stable), the cylinder
    // exists as an elastic billiard cylinder at some angle, but it is NOT
    // lambda-stable per classification
    for name in ["equilateral", "hexagon", "tri454590", "tri306090"] {
        let (poly, _) = known_polygon(name).unwrap();
        let d = poly.num_sides();
        for p in (4..=12usize).step_by(2) {
            for word in primitive_words(d, p) {
                if !gsv_check(&word) {
                    continue;
                }
                let report = classify(&poly, &word).unwrap();
                if report.verdict.is_lambda_stable() {
                    continue;
                }
                if let Some((theta, lo, hi, s_mid)) = even_word_realization(&poly, &word) {
                    println!(
                        "candidate: {name} {word} verdict {} realized theta={theta:.9} base=({lo:.6},{hi:.6}) s={s_mid:.9}",
                        report.verdict.name()
                    );
                }
            }
        }
    }
    println!("done");
}

/// Realizability oracle for an even word: at unit contraction the return
/// map is a translation in s whose shift depends on the starting angle;
/// cylinders sit at shift roots with a nonempty legality interval.
fn even_word_realization(
    poly: &pinball_core::Polygon,
    word: &Itinerary,
) -> Option<(f64, f64, f64, f64)> {
    let shift = |theta: f64| -> Option<f64> {
        let mut s = 0.0;
        let mut th = theta;
        for k in 0..word.period() {
            let (from, to) = (word.word()[k], word.letter(k + 1));
            if th.abs() >= 1.5707 {
                return None;
            }
            let (s_next, _) = poly.project_to_line(from, s, th, to).ok()?;
            s = s_next;
            th = poly.beta(from, to) - th;
        }
        Some(s)
    };
    let n_grid = 3000;
    let mut prev: Option<(f64, f64)> = None;
    for i in 0..=n_grid {
        let theta = -1.55 + 3.1 * i as f64 / n_grid as f64;
        let Some(c) = shift(theta) else {
            prev = None;
            continue;
        };
        if let Some((theta_prev, c_prev)) = prev {
            if c_prev == 0.0 || c_prev.signum() != c.signum() {
                // bisect
                let (mut a, mut b) = (theta_prev, theta);
                for _ in 0..80 {
                    let m = 0.5 * (a + b);
                    let cm = shift(m).unwrap_or(f64::NAN);
                    if !cm.is_finite() {
                        break;
                    }
                    if cm.signum() == shift(a).unwrap().signum() {
                        a = m;
                    } else {
                        b = m;
                    }
                }
                let theta_star = 0.5 * (a + b);
                if let Some((lo, hi)) = legality_interval(poly, word, theta_star) {
                    let s_mid = 0.5 * (lo + hi);
                    if verify_billiard_orbit(poly, word, s_mid, theta_star) {
                        return Some((theta_star, lo, hi, s_mid));
                    }
                }
            }
        }
        prev = Some((theta, c));
    }
    None
}

fn legality_interval(
    poly: &pinball_core::Polygon,
    word: &Itinerary,
    theta: f64,
) -> Option<(f64, f64)> {
    let p = word.period();
    let mut lo = 0.0f64;
    let mut hi = poly.side_len(word.word()[0]);
    let (mut z, mut o) = (0.0f64, 1.0f64);
    let mut th = theta;
    for k in 1..p {
        let (from, to) = (word.word()[k - 1], word.word()[k]);
        z = poly.project_to_line(from, z, th, to).ok()?.0;
        o = poly.project_to_line(from, o, th, to).ok()?.0;
        th = poly.beta(from, to) - th;
        let a = o - z;
        let len = poly.side_len(word.word()[k]);
        if a.abs() < 1e-14 {
            if z <= 0.0 || z >= len {
                return None;
            }
            continue;
        }
        let (c0, c1) = ((0.0 - z) / a, (len - z) / a);
        lo = lo.max(c0.min(c1));
        hi = hi.min(c0.max(c1));
        if lo >= hi {
            return None;
        }
    }
    (hi - lo > 1e-7).then_some((lo, hi))
}

fn verify_billiard_orbit(
    poly: &pinball_core::Polygon,
    word: &Itinerary,
    s: f64,
    theta: f64,
) -> bool {
    let mut cur = PhasePoint::new(word.word()[0], s, theta);
    for k in 0..word.period() {
        if cur.pos.side != word.word()[k] {
            return false;
        }
        match billiard_step(poly, &cur) {
            Ok(next) => cur = next,
            Err(_) => return false,
        }
    }
    cur.pos.side == word.word()[0] && (cur.pos.s - s).abs() < 1e-7 && (cur.theta - theta).abs() < 1e-7
}

#[test]
#[ignore]
fn slope_duality() {
    // slope of the word at lambda times the slope of the reversed word at
    // 1/lambda should be 1 by the conjugacy
    let (poly, _) = known_polygon("equilateral").unwrap();
    let it: Itinerary = "1,2,1,3".parse().unwrap();
    let rev = it.reversed();
    for lambda in [0.8, 0.9, 1.05, 1.25] {
        let a = pinball_core::cylinder::affine_return_map(&poly, &it, lambda).unwrap();
        let b = pinball_core::cylinder::affine_return_map(&poly, &rev, 1.0 / lambda).unwrap();
        println!("lambda {lambda}: slope {} dual {} product {}", a.slope, b.slope, a.slope * b.slope);
    }
}

#[test]
#[ignore]
fn slope_half_square_word() {
    let (poly, _) = known_polygon("square").unwrap();
    let word = pinball_core::catalog::rectangle_cylinder_word(&poly, 1.0, 1, 2).unwrap();
    println!("slope 1/2 word: {} (canonical {})", word, word.canonical());
    let report = classify(&poly, &word).unwrap();
    println!("verdict: {} gsv {}", report.verdict.name(), report.gsv_stable);
    let base = base_interval(&poly, &word);
    println!("base interval: {base:?}");
}
