//! Polygon geometry: boundary parametrization, the angle table, ray casting
//! and trajectory unfolding.
//!
//! Conventions used throughout the crate:
//!
//! * Vertices are counterclockwise; side `i` (0-based) runs from vertex `i`
//!   to vertex `i+1` and is parametrized by local arc length `s` from its
//!   start vertex.
//! * The reflection angle `theta` of an outgoing ray is measured from the
//!   side's inward normal, positive towards the side's direction of travel
//!   (increasing `s`). It lives in `(-pi/2, pi/2)`.
//! * `beta(i, j)` is pi minus the rotation taking side `i`'s direction onto
//!   side `j`'s direction, normalized so that an elastic bounce from side
//!   `i` to side `j` obeys `theta_out = beta(i, j) - theta_in` exactly.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::vec2::{Isometry, Vec2};

/// Rays closer than this (radians) to grazing are rejected.
pub const THETA_TOL: f64 = 1e-6;

/// A boundary hit within `VERTEX_TOL_FACTOR * perimeter` of a corner is
/// classified as a vertex hit.
pub const VERTEX_TOL_FACTOR: f64 = 1e-9;

/// A point on the boundary: side index (0-based) plus local arc length from
/// the side's start vertex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryPoint {
    pub side: usize,
    pub s: f64,
}

impl BoundaryPoint {
    pub const fn new(side: usize, s: f64) -> Self {
        Self { side, s }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HitKind {
    Interior,
    Vertex,
}

/// Result of casting a ray from the boundary back to the boundary.
#[derive(Debug, Clone, Copy)]
pub struct RayHit {
    pub target: BoundaryPoint,
    pub segment_length: f64,
    pub kind: HitKind,
}

#[derive(Debug, Clone)]
struct Side {
    start: Vec2,
    dir: Vec2,
    normal: Vec2,
    len: f64,
}

/// A simple counterclockwise polygon with its precomputed angle table.
#[derive(Debug, Clone)]
pub struct Polygon {
    vertices: Vec<Vec2>,
    sides: Vec<Side>,
    beta: Vec<f64>,
    perimeter: f64,
}

impl Polygon {
    pub fn from_vertices(vertices: Vec<Vec2>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::PolygonParse("need at least 3 vertices".into()));
        }
        let d = vertices.len();
        let scale = vertices
            .iter()
            .map(|v| v.norm())
            .fold(1.0_f64, f64::max);

        let mut sides = Vec::with_capacity(d);
        for i in 0..d {
            let a = vertices[i];
            let b = vertices[(i + 1) % d];
            let len = a.dist(b);
            if len < 1e-12 * scale {
                return Err(Error::DegenerateSide { side: i });
            }
            let dir = (b - a) / len;
            sides.push(Side {
                start: a,
                dir,
                normal: dir.perp(),
                len,
            });
        }

        check_simple(&vertices)?;

        let area2: f64 = (0..d)
            .map(|i| vertices[i].cross(vertices[(i + 1) % d]))
            .sum();
        if area2 <= 0.0 {
            return Err(Error::ClockwiseOrientation);
        }

        let mut beta = vec![0.0; d * d];
        for i in 0..d {
            for j in 0..d {
                if i == j {
                    continue;
                }
                let delta = {
                    let a = sides[j].dir.angle() - sides[i].dir.angle();
                    // normalize to [0, 2*pi)
                    let mut a = a % (2.0 * PI);
                    if a < 0.0 {
                        a += 2.0 * PI;
                    }
                    a
                };
                beta[i * d + j] = PI - delta;
            }
        }

        let perimeter = sides.iter().map(|s| s.len).sum();
        Ok(Self {
            vertices,
            sides,
            beta,
            perimeter,
        })
    }

    /// Parse the polygon text format: one `x y` vertex per line,
    /// counterclockwise, `#` starts a comment line.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut vertices = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut fields = line.split_whitespace();
            let parse = |f: Option<&str>| -> Result<f64> {
                f.ok_or_else(|| Error::PolygonParse(format!("line {}: expected `x y`", lineno + 1)))?
                    .parse::<f64>()
                    .map_err(|e| Error::PolygonParse(format!("line {}: {}", lineno + 1, e)))
            };
            let x = parse(fields.next())?;
            let y = parse(fields.next())?;
            if fields.next().is_some() {
                return Err(Error::PolygonParse(format!(
                    "line {}: expected exactly two fields",
                    lineno + 1
                )));
            }
            vertices.push(Vec2::new(x, y));
        }
        Self::from_vertices(vertices)
    }

    pub fn num_sides(&self) -> usize {
        self.sides.len()
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    pub fn side_len(&self, side: usize) -> f64 {
        self.sides[side].len
    }

    pub fn perimeter(&self) -> f64 {
        self.perimeter
    }

    pub fn diameter(&self) -> f64 {
        let mut best = 0.0_f64;
        for a in &self.vertices {
            for b in &self.vertices {
                best = best.max(a.dist(*b));
            }
        }
        best
    }

    /// The reflection-law angle between oriented sides `i` and `j` (0-based).
    pub fn beta(&self, i: usize, j: usize) -> f64 {
        self.beta[i * self.num_sides() + j]
    }

    pub fn direction(&self, side: usize) -> Vec2 {
        self.sides[side].dir
    }

    pub fn inward_normal(&self, side: usize) -> Vec2 {
        self.sides[side].normal
    }

    pub fn point_at(&self, p: &BoundaryPoint) -> Vec2 {
        let side = &self.sides[p.side];
        side.start + side.dir * p.s
    }

    /// Point on the supporting line of `side` at (possibly out-of-range)
    /// parameter `s`.
    pub fn line_point(&self, side: usize, s: f64) -> Vec2 {
        let side = &self.sides[side];
        side.start + side.dir * s
    }

    /// Unit velocity of a ray leaving `side` at angle `theta`.
    pub fn velocity(&self, side: usize, theta: f64) -> Vec2 {
        let sd = &self.sides[side];
        sd.normal * theta.cos() + sd.dir * theta.sin()
    }

    pub fn vertex_tol(&self) -> f64 {
        VERTEX_TOL_FACTOR * self.perimeter
    }

    pub fn is_corner(&self, p: &BoundaryPoint) -> bool {
        let tol = self.vertex_tol();
        p.s <= tol || p.s >= self.sides[p.side].len - tol
    }

    /// Cast a ray from an interior boundary point into the polygon and
    /// return the first boundary hit.
    pub fn cast_ray(&self, from: &BoundaryPoint, theta: f64) -> Result<RayHit> {
        if self.is_corner(from) {
            return Err(Error::VertexStart);
        }
        if theta.abs() >= PI / 2.0 - THETA_TOL {
            return Err(Error::GrazingRay);
        }
        let origin = self.point_at(from);
        let w = self.velocity(from.side, theta);
        let t_min = 1e-12 * self.perimeter;

        let mut best: Option<(f64, usize, f64)> = None;
        for (j, side) in self.sides.iter().enumerate() {
            let denom = w.cross(side.dir);
            if denom.abs() < 1e-14 {
                continue;
            }
            let rel = side.start - origin;
            let t = rel.cross(side.dir) / denom;
            let r = rel.cross(w) / denom;
            if t <= t_min {
                continue;
            }
            let tol = self.vertex_tol();
            if r < -tol || r > side.len + tol {
                continue;
            }
            if best.map_or(true, |(bt, _, _)| t < bt) {
                best = Some((t, j, r.clamp(0.0, side.len)));
            }
        }

        let (t, j, r) = best.ok_or(Error::NoBoundaryHit)?;
        let target = BoundaryPoint::new(j, r);
        let kind = if self.is_corner(&target) {
            HitKind::Vertex
        } else {
            HitKind::Interior
        };
        Ok(RayHit {
            target,
            segment_length: t,
            kind,
        })
    }

    /// Project a point of the supporting line of `from_side` onto the
    /// supporting line of `to_side` along the ray at angle `theta`.
    ///
    /// Returns the landing parameter on `to_side` and the oriented segment
    /// length (negative when the intersection lies behind the ray).
    pub fn project_to_line(
        &self,
        from_side: usize,
        s: f64,
        theta: f64,
        to_side: usize,
    ) -> Result<(f64, f64)> {
        let origin = self.line_point(from_side, s);
        let w = self.velocity(from_side, theta);
        let target = &self.sides[to_side];
        let denom = w.dot(target.normal);
        // denom = -cos(beta(from, to) - theta); vanishing means the ray
        // runs parallel to the target's supporting line.
        if denom.abs() < 1e-12 {
            return Err(Error::ParallelLines {
                from: from_side,
                to: to_side,
            });
        }
        let t = (target.start - origin).dot(target.normal) / denom;
        let s_out = (origin + w * t - target.start).dot(target.dir);
        Ok((s_out, t))
    }

    /// Oriented length of the segment joining a supporting-line point to its
    /// projection on another supporting line.
    pub fn oriented_length(
        &self,
        from_side: usize,
        s: f64,
        theta: f64,
        to_side: usize,
    ) -> Result<f64> {
        self.project_to_line(from_side, s, theta, to_side)
            .map(|(_, t)| t)
    }

    /// Straighten the trajectory with the given itinerary by reflecting the
    /// polygon instead of the ray.
    ///
    /// `word[0]` must be the starting side; the path visits `word[1]`,
    /// `word[2]`, ... and finally returns to `word[0]` (one full period).
    pub fn unfold(&self, word: &[usize], start: &BoundaryPoint, theta: f64) -> Result<Unfolding> {
        if word.is_empty() || word[0] != start.side {
            return Err(Error::IllegalItinerary {
                reason: "word must start at the starting side".into(),
            });
        }
        if self.is_corner(start) {
            return Err(Error::VertexStart);
        }
        let origin = self.point_at(start);
        let dir = self.velocity(start.side, theta);
        let tol = self.vertex_tol();

        let mut frame = Isometry::identity();
        let mut frames = vec![frame];
        let mut hits_unfolded = Vec::with_capacity(word.len());
        let mut hits = Vec::with_capacity(word.len());
        let mut prev_t = 0.0;

        for k in 1..=word.len() {
            let target = word[k % word.len()];
            let side = &self.sides[target];
            let img_start = frame.apply(side.start);
            let img_dir = frame.apply_dir(side.dir);

            let denom = dir.cross(img_dir);
            if denom.abs() < 1e-14 {
                return Err(Error::IllegalItinerary {
                    reason: format!("straightened line is parallel to the image of side {target}"),
                });
            }
            let rel = img_start - origin;
            let t = rel.cross(img_dir) / denom;
            let r = rel.cross(dir) / denom;
            if t <= prev_t + 1e-12 * self.perimeter {
                return Err(Error::IllegalItinerary {
                    reason: format!("image of side {target} is not ahead along the line"),
                });
            }
            if r <= tol || r >= side.len - tol {
                if r >= -tol && r <= side.len + tol {
                    return Err(Error::VertexCrossing);
                }
                return Err(Error::IllegalItinerary {
                    reason: format!("straightened line misses the image of side {target}"),
                });
            }
            prev_t = t;
            hits_unfolded.push(origin + dir * t);
            hits.push(BoundaryPoint::new(target, r));

            frame = Isometry::reflection(img_start, img_dir).compose(&frame);
            frames.push(frame);
        }

        Ok(Unfolding {
            line_start: origin,
            line_dir: dir,
            frames,
            hits_unfolded,
            hits,
        })
    }
}

/// A straightened trajectory: the line, the reflected frames and the bounce
/// points both in unfolded and in polygon coordinates.
#[derive(Debug, Clone)]
pub struct Unfolding {
    pub line_start: Vec2,
    pub line_dir: Vec2,
    /// `frames[k]` maps polygon coordinates to the unfolded frame of leg `k`.
    pub frames: Vec<Isometry>,
    pub hits_unfolded: Vec<Vec2>,
    /// Bounce points folded back to boundary coordinates.
    pub hits: Vec<BoundaryPoint>,
}

fn check_simple(vertices: &[Vec2]) -> Result<()> {
    let d = vertices.len();
    let seg = |i: usize| (vertices[i], vertices[(i + 1) % d]);
    for i in 0..d {
        for j in (i + 1)..d {
            let adjacent = j == i + 1 || (i == 0 && j == d - 1);
            if adjacent {
                continue;
            }
            let (a, b) = seg(i);
            let (c, e) = seg(j);
            if segments_intersect(a, b, c, e) {
                return Err(Error::NonSimplePolygon);
            }
        }
    }
    Ok(())
}

fn segments_intersect(a: Vec2, b: Vec2, c: Vec2, d: Vec2) -> bool {
    let orient = |p: Vec2, q: Vec2, r: Vec2| (q - p).cross(r - p);
    let d1 = orient(c, d, a);
    let d2 = orient(c, d, b);
    let d3 = orient(a, b, c);
    let d4 = orient(a, b, d);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    let on_segment = |p: Vec2, q: Vec2, r: Vec2| {
        orient(p, q, r).abs() < 1e-12
            && r.x >= p.x.min(q.x) - 1e-12
            && r.x <= p.x.max(q.x) + 1e-12
            && r.y >= p.y.min(q.y) - 1e-12
            && r.y <= p.y.max(q.y) + 1e-12
    };
    on_segment(c, d, a) || on_segment(c, d, b) || on_segment(a, b, c) || on_segment(a, b, d)
}
