//! Points, directions, lines and planes of the affine space `F_p^3`.
//!
//! Every object is stored in canonical form so that equality, hashing and
//! ordering agree with geometric identity:
//!
//! * a [`Direction`] is scaled so its first nonzero coordinate is 1;
//! * a [`Line`] stores its direction and its lexicographically least point;
//! * a [`Plane`] `ax + by + cz + d = 0` is scaled so the first nonzero of
//!   `(a, b, c)` is 1.
//!
//! Points are flattened as `index = x*p^2 + y*p + z`, which fixes the column
//! order of every dense weight vector in the crate.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::field::PrimeModulus;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: u32,
    pub y: u32,
    pub z: u32,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0, y: 0, z: 0 };

    pub fn new(p: PrimeModulus, x: u32, y: u32, z: u32) -> Result<Self> {
        for v in [x, y, z] {
            if v >= p.get() {
                return Err(Error::CoordinateOutOfRange {
                    value: v,
                    p: p.get(),
                });
            }
        }
        Ok(Point { x, y, z })
    }

    #[inline]
    pub fn coords(self) -> [u32; 3] {
        [self.x, self.y, self.z]
    }

    #[inline]
    pub fn from_coords(c: [u32; 3]) -> Self {
        Point {
            x: c[0],
            y: c[1],
            z: c[2],
        }
    }

    #[inline]
    pub fn index(self, p: PrimeModulus) -> usize {
        let q = p.get() as usize;
        (self.x as usize * q + self.y as usize) * q + self.z as usize
    }

    #[inline]
    pub fn from_index(p: PrimeModulus, idx: usize) -> Self {
        let q = p.get() as usize;
        Point {
            x: (idx / (q * q)) as u32,
            y: ((idx / q) % q) as u32,
            z: (idx % q) as u32,
        }
    }

    /// `self + t * v`.
    pub fn offset(self, p: PrimeModulus, v: [u32; 3], t: u32) -> Point {
        let c = self.coords();
        Point::from_coords([
            p.add(c[0], p.mul(t, v[0])),
            p.add(c[1], p.mul(t, v[1])),
            p.add(c[2], p.mul(t, v[2])),
        ])
    }

    /// Coordinatewise `self - other`.
    pub fn minus(self, p: PrimeModulus, other: Point) -> [u32; 3] {
        [
            p.sub(self.x, other.x),
            p.sub(self.y, other.y),
            p.sub(self.z, other.z),
        ]
    }
}

/// Every point of `F_p^3` in index order.
pub fn all_points(p: PrimeModulus) -> impl Iterator<Item = Point> {
    (0..p.cube()).map(move |i| Point::from_index(p, i))
}

/// A point at infinity: a nonzero vector up to scalars.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Direction {
    v: [u32; 3],
}

impl Direction {
    #[inline]
    pub fn vector(self) -> [u32; 3] {
        self.v
    }

    fn is_canonical(v: [u32; 3]) -> bool {
        v.iter().find(|&&c| c != 0) == Some(&1)
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.v[0], self.v[1], self.v[2])
    }
}

/// Scale `v` so its first nonzero coordinate is 1.
pub fn canonical_direction(p: PrimeModulus, v: [u32; 3]) -> Result<Direction> {
    for &c in &v {
        if c >= p.get() {
            return Err(Error::CoordinateOutOfRange {
                value: c,
                p: p.get(),
            });
        }
    }
    let lead = v
        .iter()
        .copied()
        .find(|&c| c != 0)
        .ok_or(Error::InvalidDirection)?;
    let s = p.inv(lead).expect("nonzero lead");
    Ok(Direction {
        v: [p.mul(v[0], s), p.mul(v[1], s), p.mul(v[2], s)],
    })
}

/// All `p^2 + p + 1` directions, lexicographic in the canonical vector.
pub fn enumerate_directions(p: PrimeModulus) -> Vec<Direction> {
    let q = p.get();
    let mut out = Vec::with_capacity((q * q + q + 1) as usize);
    for a in 0..q {
        for b in 0..q {
            for c in 0..q {
                let v = [a, b, c];
                if Direction::is_canonical(v) {
                    out.push(Direction { v });
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Line {
    p: PrimeModulus,
    dir: Direction,
    base: Point,
}

impl Line {
    /// The line through `point` with direction `dir`, canonicalized.
    pub fn new(p: PrimeModulus, dir: Direction, point: Point) -> Line {
        let base = (0..p.get())
            .map(|t| point.offset(p, dir.v, t))
            .min()
            .expect("p >= 2");
        Line { p, dir, base }
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.p
    }

    pub fn direction(&self) -> Direction {
        self.dir
    }

    pub fn base(&self) -> Point {
        self.base
    }

    /// The `p` points of the line, starting from the base point.
    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        (0..self.p.get()).map(move |t| self.base.offset(self.p, self.dir.v, t))
    }

    pub fn contains(&self, q: Point) -> bool {
        let diff = q.minus(self.p, self.base);
        if diff == [0, 0, 0] {
            return true;
        }
        canonical_direction(self.p, diff)
            .map(|d| d == self.dir)
            .unwrap_or(false)
    }
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [dx, dy, dz] = self.dir.v;
        let b = self.base;
        write!(f, "L {} {dx} {dy} {dz} {} {} {}", self.p, b.x, b.y, b.z)
    }
}

impl FromStr for Line {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let nums = parse_tagged(s, "L", 7)?;
        let p = PrimeModulus::new(nums[0])?;
        let dir = canonical_direction(p, [nums[1], nums[2], nums[3]])?;
        let base = Point::new(p, nums[4], nums[5], nums[6])?;
        Ok(Line::new(p, dir, base))
    }
}

/// The canonical line through two distinct points.
pub fn line_through(p: PrimeModulus, a: Point, b: Point) -> Result<Line> {
    if a == b {
        return Err(Error::DegenerateLine);
    }
    let dir = canonical_direction(p, b.minus(p, a))?;
    Ok(Line::new(p, dir, a))
}

pub fn are_parallel(l1: &Line, l2: &Line) -> bool {
    l1.dir == l2.dir
}

/// The `p^2` lines with direction `d`, ordered by base point.
pub fn lines_with_direction(p: PrimeModulus, d: Direction) -> Vec<Line> {
    let mut seen = vec![false; p.cube()];
    let mut out = Vec::with_capacity(p.square());
    for idx in 0..p.cube() {
        if seen[idx] {
            continue;
        }
        let base = Point::from_index(p, idx);
        for t in 0..p.get() {
            seen[base.offset(p, d.v, t).index(p)] = true;
        }
        // Every earlier point of this line would already have marked `base`.
        out.push(Line { p, dir: d, base });
    }
    out
}

/// All `p^2 (p^2 + p + 1)` lines: directions in enumeration order, then base
/// points lexicographically.
pub fn enumerate_lines(p: PrimeModulus) -> Vec<Line> {
    enumerate_directions(p)
        .into_iter()
        .flat_map(|d| lines_with_direction(p, d))
        .collect()
}

/// The affine plane `ax + by + cz + d = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Plane {
    p: PrimeModulus,
    normal: Direction,
    d: u32,
}

impl Plane {
    /// Canonicalizes the equation; rejects a zero normal.
    pub fn new(p: PrimeModulus, a: u32, b: u32, c: u32, d: u32) -> Result<Plane> {
        if d >= p.get() {
            return Err(Error::CoordinateOutOfRange {
                value: d,
                p: p.get(),
            });
        }
        let lead = [a, b, c]
            .into_iter()
            .find(|&x| x != 0)
            .ok_or(Error::InvalidDirection)?;
        let normal = canonical_direction(p, [a, b, c])?;
        let s = p.inv(lead).expect("nonzero");
        Ok(Plane {
            p,
            normal,
            d: p.mul(d, s),
        })
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.p
    }

    /// `(a, b, c, d)` in canonical scaling.
    pub fn coefficients(&self) -> [u32; 4] {
        let [a, b, c] = self.normal.v;
        [a, b, c, self.d]
    }

    pub fn normal(&self) -> Direction {
        self.normal
    }

    /// `ax + by + cz + d` evaluated at `q`.
    pub fn evaluate(&self, q: Point) -> u32 {
        let p = self.p;
        let [a, b, c] = self.normal.v;
        let s = p.add(p.add(p.mul(a, q.x), p.mul(b, q.y)), p.mul(c, q.z));
        p.add(s, self.d)
    }

    pub fn contains(&self, q: Point) -> bool {
        self.evaluate(q) == 0
    }

    /// Whether direction `v` is parallel to the plane.
    pub fn contains_direction(&self, v: Direction) -> bool {
        let p = self.p;
        let n = self.normal.v;
        let w = v.v;
        p.add(
            p.add(p.mul(n[0], w[0]), p.mul(n[1], w[1])),
            p.mul(n[2], w[2]),
        ) == 0
    }

    pub fn contains_line(&self, l: &Line) -> bool {
        self.contains_direction(l.dir) && self.contains(l.base)
    }

    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        all_points(self.p).filter(move |&q| self.contains(q))
    }
}

impl fmt::Display for Plane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.coefficients();
        write!(f, "P {} {a} {b} {c} {d}", self.p)
    }
}

impl FromStr for Plane {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let nums = parse_tagged(s, "P", 5)?;
        let p = PrimeModulus::new(nums[0])?;
        for &v in &nums[1..4] {
            if v >= p.get() {
                return Err(Error::CoordinateOutOfRange {
                    value: v,
                    p: p.get(),
                });
            }
        }
        Plane::new(p, nums[1], nums[2], nums[3], nums[4])
    }
}

fn parse_tagged(s: &str, tag: &str, count: usize) -> Result<Vec<u32>> {
    let mut it = s.split_whitespace();
    if it.next() != Some(tag) {
        return Err(Error::Parse(format!("expected `{tag} ...`, got {s:?}")));
    }
    let nums: Vec<u32> = it
        .map(|t| {
            t.parse::<u32>()
                .map_err(|e| Error::Parse(format!("{t:?}: {e}")))
        })
        .collect::<Result<_>>()?;
    if nums.len() != count {
        return Err(Error::Parse(format!(
            "`{tag}` record needs {count} numbers, got {}",
            nums.len()
        )));
    }
    Ok(nums)
}

/// All `p^3 + p^2 + p` planes: normals in direction order, then `d`.
pub fn enumerate_planes(p: PrimeModulus) -> Vec<Plane> {
    enumerate_directions(p)
        .into_iter()
        .flat_map(|normal| (0..p.get()).map(move |d| Plane { p, normal, d }))
        .collect()
}

/// Enumerations and incidence lists for one modulus, built once and shared.
#[derive(Debug)]
pub struct Geometry {
    pub p: PrimeModulus,
    pub directions: Vec<Direction>,
    pub lines: Vec<Line>,
    pub planes: Vec<Plane>,
    /// Point indices of `lines[i]`.
    pub line_points: Vec<Vec<usize>>,
    /// Point indices of `planes[i]`.
    pub plane_points: Vec<Vec<usize>>,
    line_index: HashMap<Line, usize>,
}

impl Geometry {
    pub fn get(p: PrimeModulus) -> Arc<Geometry> {
        static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Geometry>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(g) = cache.lock().unwrap().get(&p.get()) {
            return Arc::clone(g);
        }
        let built = Arc::new(Geometry::build(p));
        let mut guard = cache.lock().unwrap();
        Arc::clone(guard.entry(p.get()).or_insert(built))
    }

    fn build(p: PrimeModulus) -> Geometry {
        let directions = enumerate_directions(p);
        let lines = enumerate_lines(p);
        let planes = enumerate_planes(p);
        let line_points = lines
            .iter()
            .map(|l| l.points().map(|q| q.index(p)).collect())
            .collect();
        let plane_points = planes
            .iter()
            .map(|h| h.points().map(|q| q.index(p)).collect())
            .collect();
        let line_index = lines.iter().enumerate().map(|(i, l)| (*l, i)).collect();
        Geometry {
            p,
            directions,
            lines,
            planes,
            line_points,
            plane_points,
            line_index,
        }
    }

    pub fn line_id(&self, l: &Line) -> usize {
        self.line_index[l]
    }

    /// Range of `lines` that share direction `directions[k]`.
    pub fn parallel_class(&self, k: usize) -> std::ops::Range<usize> {
        let n = self.p.square();
        k * n..(k + 1) * n
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn pm(p: u32) -> PrimeModulus {
        PrimeModulus::new(p).unwrap()
    }

    #[test]
    fn canonical_direction_examples() {
        assert_eq!(
            canonical_direction(pm(3), [2, 0, 0]).unwrap().vector(),
            [1, 0, 0]
        );
        assert_eq!(
            canonical_direction(pm(3), [0, 2, 1]).unwrap().vector(),
            [0, 1, 2]
        );
        assert_eq!(
            canonical_direction(pm(5), [0, 0, 4]).unwrap().vector(),
            [0, 0, 1]
        );
        assert_eq!(
            canonical_direction(pm(5), [0, 0, 0]),
            Err(Error::InvalidDirection)
        );
    }

    #[test]
    fn enumeration_counts() {
        for p in [2u32, 3, 5, 7] {
            let m = pm(p);
            let dirs = enumerate_directions(m);
            assert_eq!(dirs.len() as u32, p * p + p + 1);
            assert_eq!(dirs.iter().collect::<HashSet<_>>().len(), dirs.len());
            let lines = enumerate_lines(m);
            assert_eq!(lines.len() as u32, p * p * (p * p + p + 1));
            assert_eq!(lines.iter().collect::<HashSet<_>>().len(), lines.len());
            let planes = enumerate_planes(m);
            assert_eq!(planes.len() as u32, p * p * p + p * p + p);
            assert_eq!(planes.iter().collect::<HashSet<_>>().len(), planes.len());
            for l in &lines {
                assert_eq!(l.points().collect::<HashSet<_>>().len(), p as usize);
            }
            for h in &planes {
                assert_eq!(h.points().count(), (p * p) as usize);
            }
        }
        assert_eq!(enumerate_lines(pm(2)).len(), 28);
        assert_eq!(enumerate_lines(pm(3)).len(), 117);
        assert_eq!(enumerate_planes(pm(2)).len(), 14);
        assert_eq!(enumerate_planes(pm(3)).len(), 39);
        assert_eq!(enumerate_planes(pm(5)).len(), 155);
    }

    #[test]
    fn enumeration_is_sorted() {
        let m = pm(3);
        let lines = enumerate_lines(m);
        assert!(lines.windows(2).all(|w| w[0] < w[1]));
        let planes = enumerate_planes(m);
        assert!(planes.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn each_point_on_p2_p_1_lines_and_planes() {
        for p in [2u32, 3, 5] {
            let m = pm(p);
            let g = Geometry::get(m);
            let mut on_lines = vec![0u32; m.cube()];
            for pts in &g.line_points {
                for &i in pts {
                    on_lines[i] += 1;
                }
            }
            let mut on_planes = vec![0u32; m.cube()];
            for pts in &g.plane_points {
                for &i in pts {
                    on_planes[i] += 1;
                }
            }
            let expect = p * p + p + 1;
            assert!(on_lines.iter().all(|&c| c == expect));
            assert!(on_planes.iter().all(|&c| c == expect));
        }
    }

    #[test]
    fn parallel_classes_partition() {
        for p in [2u32, 3, 5, 7] {
            let m = pm(p);
            for d in enumerate_directions(m) {
                let ls = lines_with_direction(m, d);
                assert_eq!(ls.len(), m.square());
                let mut cover = vec![0u8; m.cube()];
                for l in &ls {
                    for q in l.points() {
                        cover[q.index(m)] += 1;
                    }
                }
                assert!(cover.iter().all(|&c| c == 1));
            }
        }
        let m = pm(3);
        let vertical = canonical_direction(m, [0, 0, 1]).unwrap();
        assert_eq!(lines_with_direction(m, vertical).len(), 9);
    }

    #[test]
    fn line_through_examples() {
        let m = pm(3);
        let l = line_through(m, Point::ORIGIN, Point { x: 0, y: 0, z: 1 }).unwrap();
        assert_eq!(l.direction().vector(), [0, 0, 1]);
        assert_eq!(l.base(), Point::ORIGIN);
        let l = line_through(m, Point::ORIGIN, Point { x: 1, y: 2, z: 1 }).unwrap();
        assert_eq!(l.direction().vector(), [1, 2, 1]);
        assert_eq!(l.base(), Point::ORIGIN);
        let m5 = pm(5);
        let l = line_through(m5, Point { x: 1, y: 1, z: 1 }, Point { x: 1, y: 1, z: 3 }).unwrap();
        assert_eq!(l.direction().vector(), [0, 0, 1]);
        assert_eq!(l.base(), Point { x: 1, y: 1, z: 0 });
        assert_eq!(
            line_through(m5, Point::ORIGIN, Point::ORIGIN),
            Err(Error::DegenerateLine)
        );
    }

    #[test]
    fn parallelism() {
        let m = pm(3);
        let up = canonical_direction(m, [0, 0, 1]).unwrap();
        let l1 = Line::new(m, up, Point::ORIGIN);
        let l2 = Line::new(m, up, Point { x: 1, y: 2, z: 0 });
        assert!(are_parallel(&l1, &l2));
        assert!(are_parallel(&l1, &l1));
        let ex = Line::new(m, canonical_direction(m, [1, 0, 0]).unwrap(), Point::ORIGIN);
        let ey = Line::new(m, canonical_direction(m, [0, 1, 0]).unwrap(), Point::ORIGIN);
        assert!(!are_parallel(&ex, &ey));
    }

    #[test]
    fn text_round_trip() {
        let m = pm(5);
        for l in enumerate_lines(m).into_iter().step_by(37) {
            assert_eq!(l.to_string().parse::<Line>().unwrap(), l);
        }
        for h in enumerate_planes(m) {
            assert_eq!(h.to_string().parse::<Plane>().unwrap(), h);
        }
        // Non-canonical input canonicalizes.
        let h: Plane = "P 5 2 0 0 4".parse().unwrap();
        assert_eq!(h.to_string(), "P 5 1 0 0 2");
        let l: Line = "L 3 0 0 2 1 1 2".parse().unwrap();
        assert_eq!(l.to_string(), "L 3 0 0 1 1 1 0");
        assert!("L 3 0 0 0 1 1 1".parse::<Line>().is_err());
        assert!("P 4 1 0 0 0".parse::<Plane>().is_err());
        assert!("Q 3 1 0 0 0".parse::<Plane>().is_err());
    }

    #[test]
    fn line_contains_and_plane_contains_line() {
        let m = pm(5);
        let g = Geometry::get(m);
        let h = g.planes[17];
        let inside = g.lines.iter().filter(|l| h.contains_line(l)).count();
        // p + 1 directions in the plane, p lines each.
        assert_eq!(inside, 6 * 5);
        for l in g.lines.iter().step_by(11) {
            for q in all_points(m) {
                assert_eq!(l.contains(q), l.points().any(|r| r == q));
            }
        }
    }
}
