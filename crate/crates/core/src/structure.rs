//! Structure detection and small experiments on point sets.

use std::collections::BTreeSet;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{binomial, PrimeModulus};
use crate::geometry::{canonical_direction, line_through, Direction, Geometry, Line, Point};
use crate::weight::{WeightJson, WeightZ};

fn require_set(s: &WeightZ) -> Result<()> {
    if s.is_set() {
        Ok(())
    } else {
        Err(Error::precondition("input is not {0,1}-valued"))
    }
}

/// The first direction (enumeration order) along which `s` is a union of
/// `p` full lines.
pub fn is_cylinder(s: &WeightZ) -> Result<Option<Direction>> {
    require_set(s)?;
    let p = s.modulus();
    if s.total_weight() != p.square() as i64 {
        return Err(Error::SizeViolation {
            total: s.total_weight(),
            expected: p.square() as i64,
        });
    }
    let geo = Geometry::get(p);
    let vals = s.values();
    for (k, d) in geo.directions.iter().enumerate() {
        let full = geo.line_points[geo.parallel_class(k)]
            .iter()
            .filter(|pts| pts.iter().all(|&i| vals[i] == 1))
            .count();
        // Full parallel lines are disjoint, so p of them cover all p^2 points.
        if full == p.get() as usize {
            return Ok(Some(*d));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectionReport {
    pub determined: BTreeSet<Direction>,
    pub undetermined: BTreeSet<Direction>,
}

pub fn determined_directions(s: &WeightZ) -> Result<DirectionReport> {
    require_set(s)?;
    let p = s.modulus();
    let pts: Vec<Point> = s.support().map(|i| Point::from_index(p, i)).collect();
    let determined = directions_of(p, &pts);
    let undetermined = Geometry::get(p)
        .directions
        .iter()
        .filter(|d| !determined.contains(d))
        .copied()
        .collect();
    Ok(DirectionReport {
        determined,
        undetermined,
    })
}

/// Directions of all lines through two distinct points of `pts`.
pub fn directions_of(p: PrimeModulus, pts: &[Point]) -> BTreeSet<Direction> {
    let mut out = BTreeSet::new();
    for (i, &a) in pts.iter().enumerate() {
        for &b in &pts[i + 1..] {
            if a != b {
                out.insert(canonical_direction(p, b.minus(p, a)).expect("distinct points"));
            }
        }
    }
    out
}

/// First line (enumeration order) on which every point has weight >= 1.
pub fn contains_full_line(w: &WeightZ) -> Option<Line> {
    let geo = Geometry::get(w.modulus());
    let vals = w.values();
    geo.lines
        .iter()
        .zip(&geo.line_points)
        .find(|(_, pts)| pts.iter().all(|&i| vals[i] >= 1))
        .map(|(l, _)| *l)
}

/// `-1_{l1} - 1_{l2} + sum_i 1_{line through (i,0,0) and (0,1,sigma(i))}`
/// with `l1 = {(i,0,0)}` and `l2 = {(0,1,i)}`.
pub fn skew_lines_construction(p: PrimeModulus, bijection: &[u32]) -> Result<WeightZ> {
    let q = p.get();
    let mut seen = vec![false; q as usize];
    if bijection.len() != q as usize {
        return Err(Error::InvalidBijection { p: q });
    }
    for &s in bijection {
        if s >= q || std::mem::replace(&mut seen[s as usize], true) {
            return Err(Error::InvalidBijection { p: q });
        }
    }
    let mut w = WeightZ::zero(p);
    for line in skew_lines(p, bijection) {
        w.add_line(&line.0, line.1);
    }
    Ok(w)
}

/// The signed lines of the skew construction.
fn skew_lines(p: PrimeModulus, bijection: &[u32]) -> Vec<(Line, i64)> {
    let q = p.get();
    let l1 = line_through(p, Point::ORIGIN, Point { x: 1, y: 0, z: 0 }).expect("distinct");
    let l2 =
        line_through(p, Point { x: 0, y: 1, z: 0 }, Point { x: 0, y: 1, z: 1 }).expect("distinct");
    let mut out = vec![(l1, -1), (l2, -1)];
    for i in 0..q {
        let a = Point { x: i, y: 0, z: 0 };
        let b = Point {
            x: 0,
            y: 1,
            z: bijection[i as usize],
        };
        out.push((line_through(p, a, b).expect("y differs"), 1));
    }
    out
}

/// Whether `a -> a mod p` is affine on `F_p` (`sigma(i) = c i + e`).
pub fn is_affine_bijection(p: PrimeModulus, bijection: &[u32]) -> bool {
    let q = p.get();
    if bijection.len() != q as usize {
        return false;
    }
    let step = p.sub(bijection[1 % q as usize], bijection[0]);
    (0..q).all(|i| bijection[i as usize] == p.add(bijection[0], p.mul(step, i)))
}

/// Sands criterion: `|A||B| = p^3` and `(A - A) ∩ (B - B) = {0}`.
pub fn is_tiling_pair(p: PrimeModulus, a: &[Point], b: &[Point]) -> bool {
    let a: BTreeSet<Point> = a.iter().copied().collect();
    let b: BTreeSet<Point> = b.iter().copied().collect();
    if a.len() * b.len() != p.cube() {
        return false;
    }
    let diffs = |s: &BTreeSet<Point>| -> BTreeSet<[u32; 3]> {
        let mut out = BTreeSet::new();
        for &x in s {
            for &y in s {
                if x != y {
                    out.insert(x.minus(p, y));
                }
            }
        }
        out
    };
    diffs(&a).is_disjoint(&diffs(&b))
}

/// Direct check: every point is `a + b` in exactly one way.
pub fn tiles_by_representation(p: PrimeModulus, a: &[Point], b: &[Point]) -> bool {
    let a: BTreeSet<Point> = a.iter().copied().collect();
    let b: BTreeSet<Point> = b.iter().copied().collect();
    let mut hits = vec![0u32; p.cube()];
    for &x in &a {
        for &y in &b {
            let s = Point::from_coords([p.add(x.x, y.x), p.add(x.y, y.y), p.add(x.z, y.z)]);
            hits[s.index(p)] += 1;
        }
    }
    hits.iter().all(|&h| h == 1)
}

/// Outcome of an exhaustive or heuristic search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchReport {
    pub p: PrimeModulus,
    /// Candidates covered, counting every pruned subtree by its number of
    /// completions.
    pub candidates_examined: u128,
    /// Candidates that satisfied the filter (p-divisible sets, valid incumbents).
    pub accepted: u64,
    pub violations: Vec<WeightZ>,
    /// Best incumbent with its support size.
    pub best: Option<(WeightZ, usize)>,
    pub elapsed_ms: u128,
}

impl SearchReport {
    fn empty(p: PrimeModulus) -> Self {
        SearchReport {
            p,
            candidates_examined: 0,
            accepted: 0,
            violations: vec![],
            best: None,
            elapsed_ms: 0,
        }
    }

    /// JSON form; elapsed time is left out unless asked for so that output
    /// is reproducible.
    pub fn to_json(&self, with_timing: bool) -> SearchReportJson {
        SearchReportJson {
            p: self.p.get(),
            candidates_examined: self.candidates_examined.to_string(),
            accepted: self.accepted,
            violations: self.violations.iter().map(WeightJson::from).collect(),
            best: self.best.as_ref().map(|(w, s)| Incumbent {
                weight: WeightJson::from(w),
                support: *s,
            }),
            elapsed_ms: with_timing.then_some(self.elapsed_ms),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Incumbent {
    pub weight: WeightJson,
    pub support: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchReportJson {
    pub p: u32,
    /// Decimal string; the count can exceed 2^53.
    pub candidates_examined: String,
    pub accepted: u64,
    pub violations: Vec<WeightJson>,
    pub best: Option<Incumbent>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u128>,
}

/// Enumerates every `{0,1}` set of size `p^2` with plane-sum pruning, and
/// checks that each p-divisible one is a cylinder. `p <= 3` only.
pub fn exhaustive_scc_check(p: PrimeModulus, workers: usize) -> Result<SearchReport> {
    if p.get() > 3 {
        return Err(Error::ScaleRefused { p: p.get() });
    }
    let start = Instant::now();
    let search = SccSearch::new(p);
    let prefix_len = 4.min(search.n);
    let tasks: Vec<u32> = (0..1u32 << prefix_len).collect();
    let workers = workers.max(1);

    let partials: Vec<Partial> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|wid| {
                let search = &search;
                let tasks = &tasks;
                scope.spawn(move || {
                    let mut acc = Partial::default();
                    for &mask in tasks.iter().skip(wid).step_by(workers) {
                        search.run_prefix(mask, prefix_len, &mut acc);
                    }
                    acc
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("worker panicked"))
            .collect()
    });

    let mut report = SearchReport::empty(p);
    let mut violations = BTreeSet::new();
    for part in partials {
        report.candidates_examined += part.covered;
        report.accepted += part.divisible;
        violations.extend(part.violations);
    }
    report.violations = violations
        .into_iter()
        .map(|v| WeightZ::from_values(p, v).expect("length"))
        .collect();
    report.elapsed_ms = start.elapsed().as_millis();
    Ok(report)
}

#[derive(Debug, Default)]
struct Partial {
    covered: u128,
    divisible: u64,
    violations: Vec<Vec<i64>>,
}

struct SccSearch {
    p: PrimeModulus,
    n: usize,
    target: usize,
    point_planes: Vec<Vec<usize>>,
    plane_size: usize,
    n_planes: usize,
}

struct SccState {
    chosen: Vec<bool>,
    count: usize,
    plane_count: Vec<usize>,
    plane_left: Vec<usize>,
}

impl SccSearch {
    fn new(p: PrimeModulus) -> Self {
        let geo = Geometry::get(p);
        let n = p.cube();
        let mut point_planes = vec![Vec::new(); n];
        for (h, pts) in geo.plane_points.iter().enumerate() {
            for &i in pts {
                point_planes[i].push(h);
            }
        }
        SccSearch {
            p,
            n,
            target: p.square(),
            point_planes,
            plane_size: p.square(),
            n_planes: geo.planes.len(),
        }
    }

    fn fresh_state(&self) -> SccState {
        SccState {
            chosen: vec![false; self.n],
            count: 0,
            plane_count: vec![0; self.n_planes],
            plane_left: vec![self.plane_size; self.n_planes],
        }
    }

    /// Decide point `i`; false if some plane can no longer reach a multiple of p.
    fn apply(&self, st: &mut SccState, i: usize, include: bool) -> bool {
        let q = self.p.get() as usize;
        st.chosen[i] = include;
        if include {
            st.count += 1;
        }
        let mut ok = true;
        for &h in &self.point_planes[i] {
            st.plane_left[h] -= 1;
            if include {
                st.plane_count[h] += 1;
            }
            let r = st.plane_count[h] % q;
            if r != 0 && st.plane_left[h] < q - r {
                ok = false;
            }
        }
        ok
    }

    fn undo(&self, st: &mut SccState, i: usize, include: bool) {
        st.chosen[i] = false;
        if include {
            st.count -= 1;
        }
        for &h in &self.point_planes[i] {
            st.plane_left[h] += 1;
            if include {
                st.plane_count[h] -= 1;
            }
        }
    }

    fn completions(&self, decided: usize, count: usize) -> u128 {
        binomial(
            (self.n - decided) as u64,
            (self.target - count.min(self.target)) as u64,
        ) * u128::from(count <= self.target)
    }

    fn run_prefix(&self, mask: u32, prefix_len: usize, out: &mut Partial) {
        let mut st = self.fresh_state();
        for i in 0..prefix_len {
            let include = mask >> (prefix_len - 1 - i) & 1 == 1;
            let ok = self.apply(&mut st, i, include);
            if !ok {
                out.covered += self.completions(i + 1, st.count);
                return;
            }
        }
        if st.count <= self.target {
            self.dfs(&mut st, prefix_len, out);
        }
    }

    fn dfs(&self, st: &mut SccState, i: usize, out: &mut Partial) {
        if st.count == self.target && i == self.n {
            out.covered += 1;
            self.leaf(st, out);
            return;
        }
        if i == self.n {
            return;
        }
        for include in [true, false] {
            if include && st.count == self.target {
                continue;
            }
            if !include && self.n - i - 1 < self.target - st.count {
                continue;
            }
            if self.apply(st, i, include) {
                self.dfs(st, i + 1, out);
            } else {
                out.covered += self.completions(i + 1, st.count);
            }
            self.undo(st, i, include);
        }
    }

    fn leaf(&self, st: &SccState, out: &mut Partial) {
        // Every plane is fully decided here, so all plane sums are 0 mod p.
        out.divisible += 1;
        let values: Vec<i64> = st.chosen.iter().map(|&c| i64::from(c)).collect();
        let w = WeightZ::from_values(self.p, values.clone()).expect("length");
        let cylinder = is_cylinder(&w).expect("set of size p^2");
        if cylinder.is_none() || !w.is_p_divisible().divisible {
            out.violations.push(values);
        }
    }
}

/// Iteration cap used when none is given.
pub const DEFAULT_MIN_SEARCH_BUDGET: u64 = 2000;

/// Randomized search for a small nonnegative, nonzero integer combination
/// of lines containing no full line. Reports the best incumbent only; it
/// proves nothing about optimality.
pub fn min_support_search(
    p: PrimeModulus,
    max_support: usize,
    budget: u64,
    seed: u64,
) -> SearchReport {
    let start = Instant::now();
    let mut report = SearchReport::empty(p);
    if budget == 0 {
        return report;
    }
    let geo = Geometry::get(p);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = p.get();
    let identity: Vec<u32> = (0..q).collect();

    let admissible = |w: &WeightZ| -> Option<usize> {
        if !w.is_multiset() || w.is_zero() || contains_full_line(w).is_some() {
            return None;
        }
        let s = w.support_size();
        (s < max_support).then_some(s)
    };

    let mut best_support = usize::MAX;
    let mut current: Vec<(Line, i64)> = skew_lines(p, &identity);
    let mut consider = |combo: &[(Line, i64)], report: &mut SearchReport| -> bool {
        let mut w = WeightZ::zero(p);
        for (l, c) in combo {
            w.add_line(l, *c);
        }
        report.candidates_examined += 1;
        match admissible(&w) {
            Some(s) => {
                report.accepted += 1;
                if s < best_support {
                    best_support = s;
                    report.best = Some((w, s));
                }
                true
            }
            None => false,
        }
    };

    let seeded = consider(&current, &mut report);
    let mut current_ok = seeded;
    for _ in 1..budget {
        let candidate: Vec<(Line, i64)> = match rng.gen_range(0..3) {
            0 => {
                let mut sigma = identity.clone();
                sigma.shuffle(&mut rng);
                skew_lines(p, &sigma)
            }
            1 if current_ok => {
                // Local move: add a small multiple of a random line.
                let mut c = current.clone();
                let l = geo.lines[rng.gen_range(0..geo.lines.len())];
                c.push((l, if rng.gen_bool(0.5) { 1 } else { -1 }));
                c
            }
            _ => {
                let k = rng.gen_range(2..=(q as usize + 2));
                (0..k)
                    .map(|_| {
                        let l = geo.lines[rng.gen_range(0..geo.lines.len())];
                        (l, rng.gen_range(-1..=2))
                    })
                    .collect()
            }
        };
        if consider(&candidate, &mut report) {
            current = candidate;
            current_ok = true;
        }
    }
    report.elapsed_ms = start.elapsed().as_millis();
    report
}
