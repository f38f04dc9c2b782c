//! Seeded instance generators.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::field::PrimeModulus;
use crate::geometry::{
    canonical_direction, lines_with_direction, Direction, Geometry, Line, Plane,
};
use crate::structure::is_cylinder;
use crate::weight::{plane_indicator, WeightFp, WeightZ};

fn pick_direction(p: PrimeModulus, dir: Option<[u32; 3]>, rng: &mut impl Rng) -> Result<Direction> {
    match dir {
        Some(v) => canonical_direction(p, v),
        None => Ok(*Geometry::get(p).directions.choose(rng).expect("nonempty")),
    }
}

/// `p` distinct parallel lines of direction `dir` (random if `None`).
pub fn random_cylinder(
    p: PrimeModulus,
    dir: Option<[u32; 3]>,
    rng: &mut impl Rng,
) -> Result<WeightZ> {
    let d = pick_direction(p, dir, rng)?;
    let class = lines_with_direction(p, d);
    let mut w = WeightZ::zero(p);
    for l in class.choose_multiple(rng, p.get() as usize) {
        w.add_line(l, 1);
    }
    debug_assert!(is_cylinder(&w)?.is_some());
    Ok(w)
}

pub fn random_plane(p: PrimeModulus, rng: &mut impl Rng) -> Plane {
    *Geometry::get(p).planes.choose(rng).expect("nonempty")
}

/// A random line, with direction `dir` if given.
pub fn random_line(p: PrimeModulus, dir: Option<[u32; 3]>, rng: &mut impl Rng) -> Result<Line> {
    match dir {
        Some(_) => {
            let d = pick_direction(p, dir, rng)?;
            Ok(*lines_with_direction(p, d).choose(rng).expect("nonempty"))
        }
        None => Ok(*Geometry::get(p).lines.choose(rng).expect("nonempty")),
    }
}

/// A random `F_p` combination of parallel-line differences, shifted by a
/// plane with probability one half.
pub fn random_divisible_fp(p: PrimeModulus, rng: &mut impl Rng) -> WeightFp {
    let geo = Geometry::get(p);
    let q = p.get();
    let mut values = vec![0u32; p.cube()];
    let terms = rng.gen_range(1..=2 * q as usize);
    for _ in 0..terms {
        let k = rng.gen_range(0..geo.directions.len());
        let class = geo.parallel_class(k);
        let a = rng.gen_range(class.clone());
        let b = rng.gen_range(class);
        let c = rng.gen_range(1..q);
        for &i in &geo.line_points[a] {
            values[i] = p.add(values[i], c);
        }
        for &i in &geo.line_points[b] {
            values[i] = p.sub(values[i], c);
        }
    }
    if rng.gen_bool(0.5) {
        let h = rng.gen_range(0..geo.planes.len());
        let c = rng.gen_range(0..q);
        for &i in &geo.plane_points[h] {
            values[i] = p.add(values[i], c);
        }
    }
    let w = WeightFp::from_values(p, values).expect("length");
    debug_assert!(w.is_p_divisible().divisible);
    w
}

/// A nonnegative p-divisible multiset of total `p^2`: a plane moved by
/// random parallel-line differences, each kept only if it leaves all
/// values nonnegative.
pub fn random_divisible_multiset(p: PrimeModulus, moves: usize, rng: &mut impl Rng) -> WeightZ {
    let geo = Geometry::get(p);
    let mut w = plane_indicator(&random_plane(p, rng));
    let mut accepted = 0;
    let mut attempts = 0;
    while accepted < moves && attempts < 200 * moves.max(1) {
        attempts += 1;
        let k = rng.gen_range(0..geo.directions.len());
        let class = geo.parallel_class(k);
        let from = rng.gen_range(class.clone());
        let to = rng.gen_range(class);
        if from == to || geo.line_points[from].iter().any(|&i| w.values()[i] < 1) {
            continue;
        }
        for &i in &geo.line_points[from] {
            w.values_mut()[i] -= 1;
        }
        for &i in &geo.line_points[to] {
            w.values_mut()[i] += 1;
        }
        accepted += 1;
    }
    debug_assert!(w.is_multiset() && w.is_p_divisible().divisible);
    w
}

/// Parses `"a,b,c"` into a direction vector.
pub fn parse_vector(s: &str) -> Result<[u32; 3]> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(Error::Parse(format!(
            "expected three comma-separated coordinates, got {s:?}"
        )));
    }
    let mut v = [0u32; 3];
    for (slot, part) in v.iter_mut().zip(parts) {
        *slot = part.parse().map_err(|_| {
            Error::Parse(format!("coordinate {part:?} is not a nonnegative integer"))
        })?;
    }
    Ok(v)
}
