//! Supports, Newton polygons, primitive directions, directional valuations,
//! leading forms, st/en endpoints and Pred/Succ navigation.
//!
//! Directions are ordered by the angle of (rho, sigma) in (-pi, pi], compared
//! exactly through quadrant ranks and cross products. Fractional corners
//! (a/l, b) are exact rationals; all functionals stay in integer arithmetic
//! after scaling by l.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{AlgError, Result};
use crate::exactalg::{Rat, Scalar};
use crate::laurent::LaurentPoly;

/// Exact planar point; polygon corners may have a fractional first coordinate.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct Point {
    pub x: Rat,
    pub y: Rat,
}

impl Point {
    pub fn int(x: i64, y: i64) -> Self {
        Point {
            x: Rat::from_int(x),
            y: Rat::from_int(y),
        }
    }

    pub fn frac(x_num: i64, x_den: i64, y: i64) -> Self {
        Point {
            x: Rat::from_frac(x_num, x_den),
            y: Rat::from_int(y),
        }
    }

    pub fn as_int(&self) -> Option<(i64, i64)> {
        if self.x.is_integer() && self.y.is_integer() {
            Some((self.x.numer().to_i64()?, self.y.numer().to_i64()?))
        } else {
            None
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Primitive integer direction (rho, sigma) != (0, 0).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Direction {
    pub rho: i64,
    pub sigma: i64,
}

impl Direction {
    pub fn new(rho: i64, sigma: i64) -> Result<Self> {
        if rho == 0 && sigma == 0 {
            return Err(AlgError::Precondition("direction (0,0)".into()));
        }
        let g = rho.gcd(&sigma);
        Ok(Direction {
            rho: rho / g,
            sigma: sigma / g,
        })
    }

    pub fn neg(&self) -> Self {
        Direction {
            rho: -self.rho,
            sigma: -self.sigma,
        }
    }

    /// v_{rho,sigma} of an integer lattice point.
    pub fn v_int(&self, i: i64, j: i64) -> i64 {
        self.rho * i + self.sigma * j
    }

    /// v_{rho,sigma} of an exact point.
    pub fn v_point(&self, p: &Point) -> Rat {
        p.x.mul(&Rat::from_int(self.rho))
            .add(&p.y.mul(&Rat::from_int(self.sigma)))
    }

    /// Angle rank in (-pi, pi]: lower half-plane first, then (1,0), upper
    /// half-plane, then (-1,0) at +pi.
    fn rank(&self) -> u8 {
        if self.sigma < 0 {
            0
        } else if self.sigma == 0 && self.rho > 0 {
            1
        } else if self.sigma > 0 {
            2
        } else {
            3
        }
    }

    /// Exact comparison by angle in (-pi, pi].
    pub fn angle_cmp(&self, other: &Direction) -> Ordering {
        let (ra, rb) = (self.rank(), other.rank());
        if ra != rb {
            return ra.cmp(&rb);
        }
        // same open half-plane: theta_a < theta_b iff cross(a, b) > 0
        let cross = self.rho * other.sigma - self.sigma * other.rho;
        match cross.cmp(&0) {
            Ordering::Greater => Ordering::Less,
            Ordering::Less => Ordering::Greater,
            Ordering::Equal => Ordering::Equal,
        }
    }

    /// Open-closed angular interval membership: self in ]lo, hi].
    pub fn in_interval(&self, lo: &Direction, hi: &Direction) -> bool {
        self.angle_cmp(lo) == Ordering::Greater && self.angle_cmp(hi) != Ordering::Greater
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.rho, self.sigma)
    }
}

fn primitive_int_pair(a: &Rat, b: &Rat) -> (i64, i64) {
    let lcm = a.denom().lcm(b.denom());
    let ai = a.numer() * (&lcm / a.denom());
    let bi = b.numer() * (&lcm / b.denom());
    let g = ai.gcd(&bi);
    let (ai, bi) = if g.is_zero() {
        (ai, bi)
    } else {
        (&ai / &g, &bi / &g)
    };
    (
        ai.to_i64().expect("direction exceeds i64"),
        bi.to_i64().expect("direction exceeds i64"),
    )
}

/// Primitive direction orthogonal to the segment a -> b, sign chosen with
/// rho > 0 (or sigma > 0 when rho = 0): the standalone lower-edge convention
/// used by the starting-point enumeration.
pub fn edge_dir(a: &Point, b: &Point) -> Result<Direction> {
    if a == b {
        return Err(AlgError::Precondition("edge_dir: equal points".into()));
    }
    let dx = b.x.sub(&a.x);
    let dy = b.y.sub(&a.y);
    // orthogonal: (dy, -dx)
    let (mut rho, mut sigma) = primitive_int_pair(&dy, &dx.neg());
    if rho < 0 || (rho == 0 && sigma < 0) {
        rho = -rho;
        sigma = -sigma;
    }
    Direction::new(rho, sigma)
}

/// Convex polygon with counterclockwise vertices (degenerate point/segment
/// hulls allowed).
#[derive(Clone, PartialEq, Debug)]
pub struct NewtonPolygon {
    vertices: Vec<Point>,
}

impl NewtonPolygon {
    /// Convex hull of a nonempty finite support.
    pub fn hull(points: &[Point]) -> Result<Self> {
        if points.is_empty() {
            return Err(AlgError::ZeroInput("hull"));
        }
        let mut pts: Vec<Point> = points.to_vec();
        pts.sort();
        pts.dedup();
        if pts.len() == 1 {
            return Ok(NewtonPolygon { vertices: pts });
        }
        let cross = |o: &Point, a: &Point, b: &Point| -> Ordering {
            let lhs = a.x.sub(&o.x).mul(&b.y.sub(&o.y));
            let rhs = a.y.sub(&o.y).mul(&b.x.sub(&o.x));
            lhs.cmp(&rhs)
        };
        let build = |iter: &mut dyn Iterator<Item = &Point>| -> Vec<Point> {
            let mut chain: Vec<Point> = vec![];
            for p in iter {
                while chain.len() >= 2
                    && cross(&chain[chain.len() - 2], &chain[chain.len() - 1], p)
                        != Ordering::Greater
                {
                    chain.pop();
                }
                chain.push(p.clone());
            }
            chain
        };
        let mut lower = build(&mut pts.iter());
        let mut upper = build(&mut pts.iter().rev());
        lower.pop();
        upper.pop();
        let mut vertices = lower;
        vertices.append(&mut upper);
        if vertices.is_empty() {
            // all collinear: keep the two extremes
            vertices = vec![pts.first().unwrap().clone(), pts.last().unwrap().clone()];
        }
        Ok(NewtonPolygon { vertices })
    }

    pub fn from_int_corners(corners: &[(i64, i64)]) -> Self {
        let pts: Vec<Point> = corners.iter().map(|&(i, j)| Point::int(i, j)).collect();
        Self::hull(&pts).expect("nonempty corners")
    }

    pub fn from_support<T: Scalar>(p: &LaurentPoly<T>) -> Result<Self> {
        if p.is_zero() {
            return Err(AlgError::ZeroInput("hull"));
        }
        let pts: Vec<Point> = p
            .support()
            .into_iter()
            .map(|(i, j)| Point {
                x: Rat::from_frac(i, p.l()),
                y: Rat::from_int(j),
            })
            .collect();
        Self::hull(&pts)
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn vertex_set_int(&self) -> Option<Vec<(i64, i64)>> {
        self.vertices.iter().map(|p| p.as_int()).collect()
    }

    /// Sorted integer corner set, for comparisons against stated corner lists.
    pub fn sorted_corners(&self) -> Vec<(i64, i64)> {
        let mut v = self.vertex_set_int().expect("integer corners");
        v.sort();
        v
    }

    /// Counterclockwise edges with their outward normal directions.
    pub fn edges(&self) -> Vec<(Point, Point, Direction)> {
        let n = self.vertices.len();
        if n < 2 {
            return vec![];
        }
        let idx: Vec<(usize, usize)> = if n == 2 {
            vec![(0, 1), (1, 0)]
        } else {
            (0..n).map(|i| (i, (i + 1) % n)).collect()
        };
        idx.into_iter()
            .map(|(i, j)| {
                let u = &self.vertices[i];
                let v = &self.vertices[j];
                let dx = v.x.sub(&u.x);
                let dy = v.y.sub(&u.y);
                let (rho, sigma) = primitive_int_pair(&dy, &dx.neg());
                (u.clone(), v.clone(), Direction { rho, sigma })
            })
            .collect()
    }

    /// Pred/Succ: the polygon's edge directions angularly before and after
    /// `dir` in (-pi, pi]. Errors when no edge qualifies on a side.
    pub fn pred_succ(&self, dir: &Direction) -> Result<(Direction, Direction)> {
        if self.vertices.len() < 2 {
            return Err(AlgError::Precondition(
                "pred_succ: polygon with fewer than 2 vertices".into(),
            ));
        }
        let dirs: Vec<Direction> = self.edges().into_iter().map(|(_, _, d)| d).collect();
        let pred = dirs
            .iter()
            .filter(|d| d.angle_cmp(dir) == Ordering::Less)
            .max_by(|a, b| a.angle_cmp(b))
            .copied()
            .ok_or_else(|| AlgError::Precondition(format!("no edge before {dir}")))?;
        let succ = dirs
            .iter()
            .filter(|d| d.angle_cmp(dir) == Ordering::Greater)
            .min_by(|a, b| a.angle_cmp(b))
            .copied()
            .ok_or_else(|| AlgError::Precondition(format!("no edge after {dir}")))?;
        Ok((pred, succ))
    }

    /// All integer lattice points inside or on the polygon (integer vertices).
    pub fn lattice_points(&self) -> Vec<(i64, i64)> {
        let (mut xmin, mut xmax) = (i64::MAX, i64::MIN);
        let (mut ymin, mut ymax) = (i64::MAX, i64::MIN);
        for p in &self.vertices {
            debug_assert!(p.x.is_integer() && p.y.is_integer());
            let fx = p.x.numer().to_i64().unwrap();
            let fy = p.y.numer().to_i64().unwrap();
            xmin = xmin.min(fx);
            xmax = xmax.max(fx);
            ymin = ymin.min(fy);
            ymax = ymax.max(fy);
        }
        let mut out = vec![];
        for i in xmin..=xmax {
            for j in ymin..=ymax {
                if self.contains_int(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn contains_int(&self, i: i64, j: i64) -> bool {
        let p = Point::int(i, j);
        match self.vertices.len() {
            0 => false,
            1 => self.vertices[0] == p,
            2 => {
                let (a, b) = (&self.vertices[0], &self.vertices[1]);
                let cross = b
                    .x
                    .sub(&a.x)
                    .mul(&p.y.sub(&a.y))
                    .sub(&b.y.sub(&a.y).mul(&p.x.sub(&a.x)));
                if !cross.is_zero() {
                    return false;
                }
                let in_range = |lo: &Rat, hi: &Rat, t: &Rat| {
                    let (a, b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
                    a <= t && t <= b
                };
                in_range(&a.x, &b.x, &p.x) && in_range(&a.y, &b.y, &p.y)
            }
            n => self.edges().iter().take(n).all(|(u, v, _)| {
                let cross = v
                    .x
                    .sub(&u.x)
                    .mul(&p.y.sub(&u.y))
                    .sub(&v.y.sub(&u.y).mul(&p.x.sub(&u.x)));
                !cross.is_negative()
            }),
        }
    }

    /// Polygon JSON `{"l": L, "vertices": [[a_num, a_den, b], ...]}`.
    pub fn to_json(&self) -> Value {
        let mut l = BigInt::one();
        for p in &self.vertices {
            l = l.lcm(p.x.denom());
        }
        let verts: Vec<Value> = self
            .vertices
            .iter()
            .map(|p| {
                json!([
                    p.x.numer().to_i64().unwrap(),
                    p.x.denom().to_i64().unwrap(),
                    p.y.numer().to_i64().unwrap()
                ])
            })
            .collect();
        json!({"l": l.to_i64().unwrap(), "vertices": verts})
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| AlgError::Parse(format!("polygon json: {m}"));
        let verts = v
            .get("vertices")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing vertices"))?;
        let mut pts = vec![];
        for t in verts {
            let a = t.as_array().ok_or_else(|| bad("vertex shape"))?;
            if a.len() != 3 {
                return Err(bad("vertex arity"));
            }
            let nums: Vec<i64> = a
                .iter()
                .map(|x| x.as_i64().ok_or_else(|| bad("vertex type")))
                .collect::<Result<_>>()?;
            pts.push(Point::frac(nums[0], nums[1], nums[2]));
        }
        Self::hull(&pts)
    }

    /// Plain-text rendering of the polygon on a character grid.
    pub fn render_ascii(&self) -> String {
        let to_f = |r: &Rat| r.numer().to_f64().unwrap() / r.denom().to_f64().unwrap();
        let xs: Vec<f64> = self.vertices.iter().map(|p| to_f(&p.x)).collect();
        let ys: Vec<f64> = self.vertices.iter().map(|p| to_f(&p.y)).collect();
        let xmin = xs.iter().cloned().fold(0.0f64, f64::min);
        let xmax = xs.iter().cloned().fold(1.0f64, f64::max);
        let ymin = ys.iter().cloned().fold(0.0f64, f64::min);
        let ymax = ys.iter().cloned().fold(1.0f64, f64::max);
        let w = 60usize;
        let h = 20usize;
        let mut grid = vec![vec![' '; w + 1]; h + 1];
        let proj = |x: f64, y: f64| -> (usize, usize) {
            let cx = ((x - xmin) / (xmax - xmin) * w as f64).round() as usize;
            let cy = ((y - ymin) / (ymax - ymin) * h as f64).round() as usize;
            (cx.min(w), h - cy.min(h))
        };
        let n = self.vertices.len();
        if n >= 2 {
            for (u, v, _) in self.edges().iter().take(if n == 2 { 1 } else { n }) {
                let (x0, y0) = (to_f(&u.x), to_f(&u.y));
                let (x1, y1) = (to_f(&v.x), to_f(&v.y));
                for t in 0..=100 {
                    let s = t as f64 / 100.0;
                    let (cx, cy) = proj(x0 + s * (x1 - x0), y0 + s * (y1 - y0));
                    grid[cy][cx] = '.';
                }
            }
        }
        for (x, y) in xs.iter().zip(&ys) {
            let (cx, cy) = proj(*x, *y);
            grid[cy][cx] = '*';
        }
        let mut out = String::new();
        for row in grid {
            let line: String = row.into_iter().collect();
            out.push_str(line.trim_end());
            out.push('\n');
        }
        out
    }

    /// SVG rendering (plot-emitting only).
    pub fn render_svg(&self) -> String {
        let to_f = |r: &Rat| r.numer().to_f64().unwrap() / r.denom().to_f64().unwrap();
        let pts: Vec<(f64, f64)> = self
            .vertices
            .iter()
            .map(|p| (to_f(&p.x), to_f(&p.y)))
            .collect();
        let xmax = pts.iter().map(|p| p.0).fold(1.0f64, f64::max);
        let ymax = pts.iter().map(|p| p.1).fold(1.0f64, f64::max);
        let xmin = pts.iter().map(|p| p.0).fold(0.0f64, f64::min);
        let ymin = pts.iter().map(|p| p.1).fold(0.0f64, f64::min);
        let scale = 400.0 / (xmax - xmin).max(ymax - ymin);
        let tx = |x: f64| (x - xmin) * scale + 30.0;
        let ty = |y: f64| 430.0 - (y - ymin) * scale;
        let mut path = String::new();
        for (k, (x, y)) in pts.iter().enumerate() {
            path.push_str(if k == 0 { "M" } else { "L" });
            path.push_str(&format!("{:.2},{:.2} ", tx(*x), ty(*y)));
        }
        if pts.len() > 2 {
            path.push('Z');
        }
        let mut marks = String::new();
        for (x, y) in &pts {
            marks.push_str(&format!(
                "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"#c22\"/>\n",
                tx(*x),
                ty(*y)
            ));
            marks.push_str(&format!(
                "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"10\">({}, {})</text>\n",
                tx(*x) + 5.0,
                ty(*y) - 5.0,
                x,
                y
            ));
        }
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 460 460\">\n\
             <line x1=\"{ox:.2}\" y1=\"0\" x2=\"{ox:.2}\" y2=\"460\" stroke=\"#999\"/>\n\
             <line x1=\"0\" y1=\"{oy:.2}\" x2=\"460\" y2=\"{oy:.2}\" stroke=\"#999\"/>\n\
             <path d=\"{path}\" fill=\"#fdd\" fill-opacity=\"0.6\" stroke=\"#c22\" stroke-width=\"1.5\"/>\n\
             {marks}</svg>\n",
            ox = tx(0.0),
            oy = ty(0.0),
        )
    }
}

/// max over the support of rho*(i/l) + sigma*j. Errors on zero input.
pub fn v<T: Scalar>(dir: &Direction, p: &LaurentPoly<T>) -> Result<Rat> {
    if p.is_zero() {
        return Err(AlgError::ZeroInput("v"));
    }
    Ok(p.support()
        .into_iter()
        .map(|(i, j)| Rat::from_frac(dir.rho * i, p.l()).add(&Rat::from_int(dir.sigma * j)))
        .max()
        .unwrap())
}

/// Sum of the terms attaining v(dir, p). Errors on zero input.
pub fn leading_form<T: Scalar>(dir: &Direction, p: &LaurentPoly<T>) -> Result<LaurentPoly<T>> {
    if p.is_zero() {
        return Err(AlgError::ZeroInput("leading_form"));
    }
    let vmax = v(dir, p)?;
    let terms: Vec<((i64, i64), T)> = p
        .terms()
        .filter(|(&(i, j), _)| {
            Rat::from_frac(dir.rho * i, p.l()).add(&Rat::from_int(dir.sigma * j)) == vmax
        })
        .map(|(&e, c)| (e, c.clone()))
        .collect();
    Ok(LaurentPoly::from_terms(terms).with_l(p.l()))
}

/// Extreme support points of the leading form: st minimizes and en maximizes
/// (i, j) -> -sigma*i + rho*j, so en - st is a nonnegative multiple of
/// (-sigma, rho).
pub fn st_en<T: Scalar>(dir: &Direction, p: &LaurentPoly<T>) -> Result<((i64, i64), (i64, i64))> {
    let lf = leading_form(dir, p)?;
    let key = |&(i, j): &(i64, i64)| -dir.sigma * i + dir.rho * j;
    let support = lf.support();
    let st = *support.iter().min_by_key(|e| key(e)).unwrap();
    let en = *support.iter().max_by_key(|e| key(e)).unwrap();
    Ok((st, en))
}

/// A factored (rho, sigma)-homogeneous edge form: a monomial times a product
/// of binomial factors (x^u y^v - lambda_i)^{m_i}, attached to the edge
/// segment its support spans.
#[derive(Clone, Debug)]
pub struct EdgeForm<T: Scalar> {
    pub dir: Direction,
    pub st: (i64, i64),
    pub en: (i64, i64),
    pub form: LaurentPoly<T>,
}

impl<T: Scalar> EdgeForm<T> {
    /// Build from the factored data and check homogeneity: v_{rho,sigma} must
    /// be constant on the support, with the direction read off the extremes.
    pub fn from_factored(
        coef: T,
        monomial: (i64, i64),
        factors: &[((i64, i64), T, u32)],
    ) -> Result<Self> {
        let mut form = LaurentPoly::monomial(coef, monomial.0, monomial.1);
        for ((u, v), lambda, mult) in factors {
            let binom = LaurentPoly::monomial(T::one(), *u, *v)
                .sub(&LaurentPoly::monomial(lambda.clone(), 0, 0));
            form = form.mul(&binom.pow(*mult));
        }
        if form.is_zero() {
            return Err(AlgError::ZeroInput("edge form"));
        }
        let support = form.support();
        let first = support[0];
        let last = *support.last().unwrap();
        if first == last {
            return Err(AlgError::Precondition(
                "edge form degenerates to a monomial".into(),
            ));
        }
        let dir = edge_dir(
            &Point::int(first.0, first.1),
            &Point::int(last.0, last.1),
        )?;
        // homogeneity: the whole support lies on one v_{rho,sigma} level
        let value = dir.v_int(first.0, first.1);
        if support.iter().any(|&(i, j)| dir.v_int(i, j) != value) {
            return Err(AlgError::Precondition(
                "support is not (rho,sigma)-homogeneous".into(),
            ));
        }
        let (st, en) = st_en(&dir, &form)?;
        Ok(EdgeForm { dir, st, en, form })
    }
}

/// One row of the corner-candidate divisibility table for the (9,27) case.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CornerCandidateRow {
    pub point: (i64, i64),
    pub lhs: i64,
    pub rhs: i64,
    pub passes: bool,
}

/// The candidate table: for each (a', b'), whether 21b' - 8a' divides
/// 13 gcd(21 - a', 8 - b'). Survivors must be exactly {(5,2), (13,5)};
/// (1,1) is excluded separately since it lies on the diagonal.
pub fn corner_candidates_9_27() -> Vec<CornerCandidateRow> {
    let candidates = [
        (-2, 0),
        (-1, 0),
        (2, 1),
        (4, 2),
        (5, 2),
        (7, 3),
        (10, 4),
        (13, 5),
    ];
    candidates
        .iter()
        .map(|&(a, b): &(i64, i64)| {
            let lhs = 21 * b - 8 * a;
            let rhs = 13 * (21 - a).gcd(&(8 - b));
            CornerCandidateRow {
                point: (a, b),
                lhs,
                rhs,
                passes: lhs != 0 && rhs % lhs == 0,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(terms: &[(i64, i64, i64)]) -> LaurentPoly<Rat> {
        LaurentPoly::from_terms(terms.iter().map(|&(c, i, j)| ((i, j), Rat::from_int(c))))
    }

    #[test]
    fn hull_point_and_paper_sets() {
        let p = NewtonPolygon::hull(&[Point::int(0, 0)]).unwrap();
        assert_eq!(p.vertices().len(), 1);

        // N(Q) of the (9,27) case: five corners survive interior points
        let mut pts: Vec<Point> = [(0, 0), (1, 0), (9, 24), (9, 27), (0, 27)]
            .iter()
            .map(|&(i, j)| Point::int(i, j))
            .collect();
        for &(i, j) in &[(4, 10), (5, 13), (2, 3), (9, 25), (1, 1)] {
            pts.push(Point::int(i, j));
        }
        let h = NewtonPolygon::hull(&pts).unwrap();
        assert_eq!(
            h.sorted_corners(),
            vec![(0, 0), (0, 27), (1, 0), (9, 24), (9, 27)]
        );

        // hand hull of the section-5 corner data (with the (6,2) reading)
        let h = NewtonPolygon::from_int_corners(&[(0, 0), (4, 0), (6, 2), (0, 14)]);
        assert_eq!(h.vertices().len(), 4);
    }

    #[test]
    fn hull_is_idempotent() {
        let mut rng = crate::rng::Rng::new(53);
        for _ in 0..100 {
            let pts: Vec<Point> = (0..12)
                .map(|_| Point::int(rng.i64_in(-6, 6), rng.i64_in(-6, 6)))
                .collect();
            let h = NewtonPolygon::hull(&pts).unwrap();
            let h2 = NewtonPolygon::hull(h.vertices()).unwrap();
            assert_eq!(h, h2);
        }
    }

    #[test]
    fn v_examples() {
        let d10 = Direction::new(1, 0).unwrap();
        assert_eq!(v(&d10, &lp(&[(1, 3, 8)])).unwrap(), Rat::from_int(3));

        // v_{4,-1} equal on (8,28) and (11/4, 7)
        let d = Direction::new(4, -1).unwrap();
        assert_eq!(d.v_point(&Point::int(8, 28)), Rat::from_int(4));
        assert_eq!(d.v_point(&Point::frac(11, 4, 7)), Rat::from_int(4));

        let d = Direction::new(7, -2).unwrap();
        assert_eq!(v(&d, &lp(&[(1, 5, 15)])).unwrap(), Rat::from_int(5));

        assert!(v(&d, &LaurentPoly::<Rat>::zero()).is_err());
    }

    #[test]
    fn leading_form_examples() {
        let d10 = Direction::new(1, 0).unwrap();
        // l_{1,0}(x^3 y^8 (y+1) + x^2 y) = x^3 y^8 (y+1)
        let p = lp(&[(1, 3, 9), (1, 3, 8), (1, 2, 1)]);
        assert_eq!(leading_form(&d10, &p).unwrap(), lp(&[(1, 3, 9), (1, 3, 8)]));
        // a monomial is its own leading form
        let m = lp(&[(7, 2, 5)]);
        assert_eq!(
            leading_form(&Direction::new(-3, 8).unwrap(), &m).unwrap(),
            m
        );
        // l_{1,0}((x^3 C3)^2 + lower) = x^6 C3^2
        let c3 = lp(&[(1, 0, 9), (1, 0, 8)]); // y^8(y+1) at x^0
        let r = lp(&[(1, 3, 0)]).mul(&c3);
        let p = r.mul(&r).add(&lp(&[(5, 4, 3), (2, 0, 0)]));
        assert_eq!(leading_form(&d10, &p).unwrap(), r.mul(&r));
    }

    #[test]
    fn st_en_examples() {
        // the theorem P-shape at direction (1,0): st = (6,16), en = (6,18)
        let p = lp(&[(1, 6, 16), (2, 6, 17), (1, 6, 18), (1, 1, 1), (3, 0, 0)]);
        let d10 = Direction::new(1, 0).unwrap();
        assert_eq!(st_en(&d10, &p).unwrap(), ((6, 16), (6, 18)));
        // monomial: st = en
        let m = lp(&[(4, 7, 21)]);
        assert_eq!(st_en(&d10, &m).unwrap(), ((7, 21), (7, 21)));
        // direction (7,-2) on the segment (1,0)-(7,21): en = (7,21)
        let seg = lp(&[(1, 1, 0), (1, 3, 7), (1, 5, 14), (1, 7, 21)]);
        let d = Direction::new(7, -2).unwrap();
        let (st, en) = st_en(&d, &seg).unwrap();
        assert_eq!(en, (7, 21));
        assert_eq!(st, (1, 0));
    }

    #[test]
    fn edge_dir_examples() {
        // dir((8,3) - (2,0)) = (1,-2)
        assert_eq!(
            edge_dir(&Point::int(2, 0), &Point::int(8, 3)).unwrap(),
            Direction { rho: 1, sigma: -2 }
        );
        // dir((8,3) - (3,1)) = (2,-5)
        assert_eq!(
            edge_dir(&Point::int(3, 1), &Point::int(8, 3)).unwrap(),
            Direction { rho: 2, sigma: -5 }
        );
        assert!(edge_dir(&Point::int(1, 1), &Point::int(1, 1)).is_err());
    }

    #[test]
    fn outward_edge_direction_9_27() {
        // edge (0,9)-(9,27) of the (9,27) base polygon has outward normal (-2,1)
        let q = NewtonPolygon::from_int_corners(&[(0, 0), (1, 0), (9, 24), (9, 27), (0, 9)]);
        let found = q
            .edges()
            .into_iter()
            .find(|(u, v, _)| {
                (u.as_int() == Some((9, 27)) && v.as_int() == Some((0, 9)))
                    || (u.as_int() == Some((0, 9)) && v.as_int() == Some((9, 27)))
            })
            .expect("edge present");
        assert_eq!(found.2, Direction { rho: -2, sigma: 1 });
    }

    #[test]
    fn pred_succ_square_and_section5_polygon() {
        let sq = NewtonPolygon::from_int_corners(&[(0, 0), (1, 0), (1, 1), (0, 1)]);
        let (pred, succ) = sq.pred_succ(&Direction::new(1, 0).unwrap()).unwrap();
        assert_eq!(pred, Direction { rho: 0, sigma: -1 });
        assert_eq!(succ, Direction { rho: 0, sigma: 1 });

        let p5 = NewtonPolygon::from_int_corners(&[(0, 0), (2, 0), (3, 1), (0, 7)]);
        let (pred, _) = p5.pred_succ(&Direction::new(1, 0).unwrap()).unwrap();
        assert_eq!(pred, Direction { rho: 1, sigma: -1 });
    }

    #[test]
    fn pred_of_transposed_9_24_polygon_in_interval() {
        // transposed (9,24) base polygon; Pred(-1,3) lies in ](0,-1),(1,-1)]
        let p = NewtonPolygon::from_int_corners(&[(0, 0), (6, 0), (24, 9), (0, 1)]);
        let dir = Direction::new(-1, 3).unwrap();
        let (pred, _) = p.pred_succ(&dir).unwrap();
        assert_eq!(pred, Direction { rho: 1, sigma: -2 });
        assert!(pred.in_interval(
            &Direction::new(0, -1).unwrap(),
            &Direction::new(1, -1).unwrap()
        ));
    }

    #[test]
    fn edge_form_from_factored() {
        // y^9 (x y^2 - a)^9 spans the edge (0,9)..(9,27) homogeneously
        let a = Rat::from_frac(5, 3);
        let ef = EdgeForm::from_factored(
            Rat::from_int(1),
            (0, 9),
            &[((1, 2), a, 9)],
        )
        .unwrap();
        assert_eq!((ef.st, ef.en), ((0, 9), (9, 27)));
        // standalone convention: rho > 0 (the outward (-2,1) is its negation)
        assert_eq!(ef.dir, Direction { rho: 2, sigma: -1 });
        let v0 = v(&ef.dir, &ef.form).unwrap();
        for (i, j) in ef.form.support() {
            assert_eq!(Rat::from_int(ef.dir.v_int(i, j)), v0);
        }
        // a non-homogeneous product is rejected
        assert!(EdgeForm::from_factored(
            Rat::from_int(1),
            (0, 0),
            &[((1, 2), Rat::from_int(1), 1), ((2, 1), Rat::from_int(1), 1)],
        )
        .is_err());
    }

    #[test]
    fn corner_table_rows_and_survivors() {
        let rows = corner_candidates_9_27();
        let get = |pt: (i64, i64)| rows.iter().find(|r| r.point == pt).unwrap().clone();
        assert_eq!(get((-2, 0)).lhs, 16);
        assert_eq!(get((-2, 0)).rhs, 13);
        assert!(!get((-2, 0)).passes);
        assert_eq!(get((5, 2)).lhs, 2);
        assert_eq!(get((5, 2)).rhs, 26);
        assert!(get((5, 2)).passes);
        assert_eq!(get((13, 5)).lhs, 1);
        assert_eq!(get((13, 5)).rhs, 13);
        assert!(get((13, 5)).passes);
        let survivors: Vec<(i64, i64)> =
            rows.iter().filter(|r| r.passes).map(|r| r.point).collect();
        assert_eq!(survivors, vec![(5, 2), (13, 5)]);
    }

    #[test]
    fn v_and_leading_form_are_multiplicative() {
        let mut rng = crate::rng::Rng::new(61);
        for _ in 0..100 {
            let mut mk = |n: u64| {
                let mut p = LaurentPoly::zero();
                for _ in 0..n {
                    p = p.add(&LaurentPoly::monomial(
                        rng.rat(),
                        rng.i64_in(-3, 4),
                        rng.i64_in(0, 4),
                    ));
                }
                p
            };
            let p = mk(5);
            let q = mk(5);
            if p.is_zero() || q.is_zero() {
                continue;
            }
            let dir = loop {
                let r = rng.i64_in(-3, 3);
                let s = rng.i64_in(-3, 3);
                if r != 0 || s != 0 {
                    break Direction::new(r, s).unwrap();
                }
            };
            assert_eq!(
                v(&dir, &p.mul(&q)).unwrap(),
                v(&dir, &p).unwrap().add(&v(&dir, &q).unwrap())
            );
            assert_eq!(
                leading_form(&dir, &p.mul(&q)).unwrap(),
                leading_form(&dir, &p)
                    .unwrap()
                    .mul(&leading_form(&dir, &q).unwrap())
            );
        }
    }

    #[test]
    fn st_en_endpoints_are_hull_vertices_and_walk_consistent() {
        let mut rng = crate::rng::Rng::new(67);
        for _ in 0..60 {
            let mut p = LaurentPoly::zero();
            for _ in 0..10 {
                p = p.add(&LaurentPoly::monomial(
                    rng.nonzero_rat(),
                    rng.i64_in(0, 7),
                    rng.i64_in(0, 7),
                ));
            }
            if p.support().len() < 3 {
                continue;
            }
            let hull = NewtonPolygon::from_support(&p).unwrap();
            if hull.vertices().len() < 3 {
                continue;
            }
            let hull_set = hull.vertex_set_int().unwrap();
            let edges = hull.edges();
            for (k, (_, _, d)) in edges.iter().enumerate() {
                let (st, en) = st_en(d, &p).unwrap();
                let lf = leading_form(d, &p).unwrap();
                if lf.num_terms() > 1 {
                    assert!(hull_set.contains(&st));
                    assert!(hull_set.contains(&en));
                }
                // en of this edge = st of the angularly next edge direction
                let next_d = &edges[(k + 1) % edges.len()].2;
                let (st_next, _) = st_en(next_d, &p).unwrap();
                assert_eq!(en, st_next);
            }
        }
    }

    #[test]
    fn polygon_json_roundtrip() {
        let p = NewtonPolygon::hull(&[
            Point::int(0, 0),
            Point::frac(11, 4, 7),
            Point::int(8, 28),
        ])
        .unwrap();
        let v = p.to_json();
        let q = NewtonPolygon::from_json(&v).unwrap();
        assert_eq!(p, q);
        assert_eq!(v["l"], json!(4));
    }

    #[test]
    fn renders_do_not_panic() {
        let p = NewtonPolygon::from_int_corners(&[(0, 0), (2, 0), (3, 1), (0, 7)]);
        let a = p.render_ascii();
        assert!(a.contains('*'));
        let s = p.render_svg();
        assert!(s.starts_with("<svg"));
    }
}
