use proptest::prelude::*;

use cylinderlab::decompose::decompose_p_divisible;
use cylinderlab::geometry::{canonical_direction, line_through, Geometry, Line, Plane, Point};
use cylinderlab::lift::lift_set;
use cylinderlab::poly::{in_s1_perp, poly_from_weight, weight_from_poly};
use cylinderlab::structure::{is_cylinder, is_tiling_pair, tiles_by_representation};
use cylinderlab::weight::{WeightFp, WeightZ};
use cylinderlab::{verify_certificate, PrimeModulus};

fn prime() -> impl Strategy<Value = PrimeModulus> {
    prop::sample::select(vec![2u32, 3, 5, 7]).prop_map(|p| PrimeModulus::new(p).unwrap())
}

fn small_prime() -> impl Strategy<Value = PrimeModulus> {
    prop::sample::select(vec![2u32, 3, 5]).prop_map(|p| PrimeModulus::new(p).unwrap())
}

fn point(p: PrimeModulus) -> impl Strategy<Value = Point> {
    let q = p.get();
    (0..q, 0..q, 0..q).prop_map(|(x, y, z)| Point { x, y, z })
}

fn weight_fp(p: PrimeModulus) -> impl Strategy<Value = WeightFp> {
    prop::collection::vec(0..p.get(), p.cube())
        .prop_map(move |v| WeightFp::from_values(p, v).unwrap())
}

fn weight_z(p: PrimeModulus) -> impl Strategy<Value = WeightZ> {
    prop::collection::vec(-20i64..20, p.cube())
        .prop_map(move |v| WeightZ::from_values(p, v).unwrap())
}

/// Integer combination of differences of parallel lines, given by
/// `(direction index, line a, line b, coefficient)` quadruples.
fn diff_combination(p: PrimeModulus) -> impl Strategy<Value = WeightZ> {
    let geo = Geometry::get(p);
    let dirs = geo.directions.len();
    let class = p.square();
    prop::collection::vec((0..dirs, 0..class, 0..class, -3i64..=3), 0..12).prop_map(move |terms| {
        let geo = Geometry::get(p);
        let mut w = WeightZ::zero(p);
        for (k, a, b, c) in terms {
            let r = geo.parallel_class(k);
            w.add_line(&geo.lines[r.start + a], c);
            w.add_line(&geo.lines[r.start + b], -c);
        }
        w
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn direction_canonicalization_is_idempotent(p in prime(), v in (0u32..7, 0u32..7, 0u32..7), s in 1u32..7) {
        let q = p.get();
        let v = [v.0 % q, v.1 % q, v.2 % q];
        prop_assume!(v != [0, 0, 0] && s % q != 0);
        let d = canonical_direction(p, v).unwrap();
        prop_assert_eq!(canonical_direction(p, d.vector()).unwrap(), d);
        let scaled = v.map(|c| p.mul(c, s % q));
        prop_assert_eq!(canonical_direction(p, scaled).unwrap(), d);
    }

    #[test]
    fn line_canonical_form_is_point_independent((p, a, b) in prime().prop_flat_map(|p| (Just(p), point(p), point(p)))) {
        prop_assume!(a != b);
        let l = line_through(p, a, b).unwrap();
        prop_assert!(l.contains(a) && l.contains(b));
        for c in l.points() {
            prop_assert_eq!(Line::new(p, l.direction(), c), l);
        }
        prop_assert_eq!(l.to_string().parse::<Line>().unwrap(), l);
    }

    #[test]
    fn plane_text_round_trip(p in prime(), i in 0usize..400) {
        let geo = Geometry::get(p);
        let h = geo.planes[i % geo.planes.len()];
        prop_assert_eq!(h.to_string().parse::<Plane>().unwrap(), h);
    }

    #[test]
    fn poly_round_trip(w in prime().prop_flat_map(weight_fp)) {
        prop_assert_eq!(weight_from_poly(&poly_from_weight(&w)), w);
    }

    #[test]
    fn plane_sums_are_linear(
        (f, g) in small_prime().prop_flat_map(|p| (weight_z(p), weight_z(p))),
        k in -5i64..5,
        i in 0usize..200,
    ) {
        let p = f.modulus();
        let geo = Geometry::get(p);
        let h = geo.planes[i % geo.planes.len()];
        let mut comb = f.clone();
        comb.axpy(k, &g).unwrap();
        prop_assert_eq!(comb.plane_sum(&h), f.plane_sum(&h) + k * g.plane_sum(&h));
    }

    #[test]
    fn parallel_differences_are_divisible(w in small_prime().prop_flat_map(diff_combination)) {
        prop_assert!(w.is_p_divisible().divisible);
        prop_assert_eq!(w.total_weight(), 0);
        let fp = w.reduce_mod_p();
        prop_assert!(in_s1_perp(&fp));
        let c = decompose_p_divisible(&fp).unwrap();
        prop_assert_eq!(c.evaluate(), fp);
    }

    #[test]
    fn divisible_totals_vanish_mod_p(w in small_prime().prop_flat_map(weight_z)) {
        // Summing over a parallel class of planes counts every point once.
        if w.is_p_divisible().divisible {
            prop_assert_eq!(w.total_weight().rem_euclid(w.modulus().get() as i64), 0);
        }
        let fp = w.reduce_mod_p();
        prop_assert_eq!(fp.is_p_divisible().divisible, w.is_p_divisible().divisible);
    }

    #[test]
    fn cylinders_lift(p in small_prime(), k in 0usize..31, picks in prop::collection::vec(any::<prop::sample::Index>(), 5)) {
        let geo = Geometry::get(p);
        let k = k % geo.directions.len();
        let class: Vec<Line> = geo.lines[geo.parallel_class(k)].to_vec();
        let mut chosen: Vec<usize> = Vec::new();
        for idx in picks {
            let mut j = idx.index(class.len());
            while chosen.contains(&j) {
                j = (j + 1) % class.len();
            }
            chosen.push(j);
            if chosen.len() == p.get() as usize {
                break;
            }
        }
        let mut s = WeightZ::zero(p);
        for j in chosen {
            s.add_line(&class[j], 1);
        }
        prop_assert!(is_cylinder(&s).unwrap().is_some());
        prop_assert!(s.is_p_divisible().divisible);
        let c = lift_set(&s).unwrap();
        prop_assert!(verify_certificate(&c));
        prop_assert_eq!(c.evaluate(), s);
    }

    #[test]
    fn coset_transversals_tile_and_exclude_directions(p in prime(), k in 0usize..57, seed in any::<u64>()) {
        // A line through the origin tiles with one point from each of its cosets.
        let geo = Geometry::get(p);
        let k = k % geo.directions.len();
        let d = geo.directions[k];
        let class = &geo.lines[geo.parallel_class(k)];
        let a: Vec<Point> = class.iter().find(|l| l.contains(Point::ORIGIN)).unwrap().points().collect();
        let q = p.get() as u64;
        let b: Vec<Point> = class
            .iter()
            .enumerate()
            .map(|(i, l)| l.points().nth(((seed >> (i % 32)) % q) as usize).unwrap())
            .collect();
        prop_assert!(is_tiling_pair(p, &a, &b));
        prop_assert!(tiles_by_representation(p, &a, &b));
        let da = cylinderlab::structure::directions_of(p, &a);
        let db = cylinderlab::structure::directions_of(p, &b);
        prop_assert!(da.contains(&d) && da.len() == 1);
        prop_assert!(da.is_disjoint(&db));
    }
}

fn subset(p: PrimeModulus, mask: u64) -> Vec<Point> {
    (0..p.cube())
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| Point::from_index(p, i))
        .collect()
}

#[test]
fn sands_criterion_matches_representation_count_p2() {
    let p = PrimeModulus::new(2).unwrap();
    let mut tilings = 0;
    for ma in 1u64..256 {
        let a = subset(p, ma);
        for mb in 1u64..256 {
            let b = subset(p, mb);
            let sands = is_tiling_pair(p, &a, &b);
            assert_eq!(
                sands,
                tiles_by_representation(p, &a, &b),
                "{ma:08b} {mb:08b}"
            );
            tilings += usize::from(sands);
        }
    }
    assert!(tilings > 0);
}

#[test]
fn sands_criterion_matches_representation_count_p3() {
    use rand::{Rng, SeedableRng};
    // Every 3-set through the origin against sampled 9-sets and all planes.
    let p = PrimeModulus::new(3).unwrap();
    let geo = Geometry::get(p);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
    for i in 1..27usize {
        for j in i + 1..27 {
            let a = vec![
                Point::ORIGIN,
                Point::from_index(p, i),
                Point::from_index(p, j),
            ];
            for h in &geo.planes {
                let b: Vec<Point> = h.points().collect();
                assert_eq!(
                    is_tiling_pair(p, &a, &b),
                    tiles_by_representation(p, &a, &b)
                );
            }
            for _ in 0..20 {
                let mut mask = 0u64;
                while mask.count_ones() < 9 {
                    mask |= 1 << rng.gen_range(0..27);
                }
                let b = subset(p, mask);
                assert_eq!(
                    is_tiling_pair(p, &a, &b),
                    tiles_by_representation(p, &a, &b)
                );
            }
        }
    }
}
