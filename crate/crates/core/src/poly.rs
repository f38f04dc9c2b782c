//! Functions `F_p^3 -> F_p` viewed as reduced polynomials.
//!
//! A reduced polynomial has degree at most `p - 1` in each variable, so the
//! coefficient array has the same shape as a weight: entry `(i, j, k)` sits
//! at `i*p^2 + j*p + k`. Conversion in both directions is separable: a 1-D
//! transform (Vandermonde evaluation or its inverse) is applied along each
//! axis in turn.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{binomial_mod, PrimeModulus};
use crate::geometry::{enumerate_planes, Geometry, Plane};
use crate::weight::{bilinear, plane_indicator, WeightFp};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ReducedPoly {
    p: PrimeModulus,
    coeffs: Vec<u32>,
}

impl ReducedPoly {
    pub fn zero(p: PrimeModulus) -> Self {
        ReducedPoly {
            p,
            coeffs: vec![0; p.cube()],
        }
    }

    pub fn constant(p: PrimeModulus, c: u32) -> Self {
        let mut q = Self::zero(p);
        q.coeffs[0] = c % p.get();
        q
    }

    /// `c * x^i y^j z^k`; exponents must be below `p`.
    pub fn monomial(p: PrimeModulus, [i, j, k]: [u32; 3], c: u32) -> Self {
        let mut q = Self::zero(p);
        q.coeffs[exp_index(p, [i, j, k])] = c % p.get();
        q
    }

    /// `ax + by + cz + d`.
    pub fn linear(p: PrimeModulus, [a, b, c, d]: [u32; 4]) -> Self {
        let mut q = Self::constant(p, d);
        if p.get() > 1 {
            q.coeffs[exp_index(p, [1, 0, 0])] = a % p.get();
            q.coeffs[exp_index(p, [0, 1, 0])] = b % p.get();
            q.coeffs[exp_index(p, [0, 0, 1])] = c % p.get();
        }
        q
    }

    pub fn from_coeffs(p: PrimeModulus, coeffs: Vec<u32>) -> Result<Self> {
        if coeffs.len() != p.cube() {
            return Err(Error::WrongLength {
                expected: p.cube(),
                got: coeffs.len(),
            });
        }
        if let Some((index, &v)) = coeffs.iter().enumerate().find(|(_, &v)| v >= p.get()) {
            return Err(Error::ResidueOutOfRange {
                index,
                value: v as i64,
                p: p.get(),
            });
        }
        Ok(ReducedPoly { p, coeffs })
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.p
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn coeff(&self, e: [u32; 3]) -> u32 {
        self.coeffs[exp_index(self.p, e)]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Nonzero terms as `(exponents, coefficient)` in lexicographic exponent order.
    pub fn terms(&self) -> impl Iterator<Item = ([u32; 3], u32)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(idx, &c)| (exponents_of(self.p, idx), c))
    }

    pub fn add(&self, other: &ReducedPoly) -> ReducedPoly {
        let p = self.p;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| p.add(a, b))
            .collect();
        ReducedPoly { p, coeffs }
    }

    pub fn scale(&self, s: u32) -> ReducedPoly {
        let p = self.p;
        ReducedPoly {
            p,
            coeffs: self.coeffs.iter().map(|&a| p.mul(a, s)).collect(),
        }
    }

    /// Product in `F_p[x,y,z] / (x^p - x, y^p - y, z^p - z)`.
    pub fn mul(&self, other: &ReducedPoly) -> ReducedPoly {
        let p = self.p;
        let fold = |e: u32| if e >= p.get() { e - (p.get() - 1) } else { e };
        let mut out = ReducedPoly::zero(p);
        let rhs: Vec<_> = other.terms().collect();
        for (ea, ca) in self.terms() {
            for &(eb, cb) in &rhs {
                let e = [
                    fold(ea[0] + eb[0]),
                    fold(ea[1] + eb[1]),
                    fold(ea[2] + eb[2]),
                ];
                let idx = exp_index(p, e);
                out.coeffs[idx] = p.add(out.coeffs[idx], p.mul(ca, cb));
            }
        }
        out
    }

    pub fn pow(&self, mut e: u64) -> ReducedPoly {
        let mut acc = ReducedPoly::constant(self.p, 1);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Largest `i + j + k` over nonzero coefficients; `None` for the zero
    /// polynomial (degree minus infinity).
    pub fn total_degree(&self) -> Option<u32> {
        self.terms().map(|(e, _)| e[0] + e[1] + e[2]).max()
    }
}

#[inline]
fn exp_index(p: PrimeModulus, [i, j, k]: [u32; 3]) -> usize {
    let q = p.get() as usize;
    (i as usize * q + j as usize) * q + k as usize
}

#[inline]
fn exponents_of(p: PrimeModulus, idx: usize) -> [u32; 3] {
    let q = p.get() as usize;
    [
        (idx / (q * q)) as u32,
        ((idx / q) % q) as u32,
        (idx % q) as u32,
    ]
}

/// `V[a][i] = a^i`, with `0^0 = 1`.
fn vandermonde(p: PrimeModulus) -> Vec<Vec<u32>> {
    (0..p.get())
        .map(|a| (0..p.get()).map(|i| p.pow(a, i as u64)).collect())
        .collect()
}

/// `W[i][a]` = coefficient of `x^i` in the indicator `1 - (x - a)^(p-1)`.
fn interpolation(p: PrimeModulus) -> Vec<Vec<u32>> {
    let q = p.get();
    let mut w = vec![vec![0u32; q as usize]; q as usize];
    for a in 0..q {
        let neg_a = p.neg(a);
        for i in 0..q {
            let term = p.mul(
                binomial_mod(q as u64 - 1, i as u64, p),
                p.pow(neg_a, (q - 1 - i) as u64),
            );
            let delta = if i == 0 { 1 } else { 0 };
            w[i as usize][a as usize] = p.sub(delta, term);
        }
    }
    w
}

/// Apply `m` (rows = output index, cols = input index) along every axis.
fn transform3(p: PrimeModulus, data: &[u32], m: &[Vec<u32>]) -> Vec<u32> {
    let q = p.get() as usize;
    let mut cur = data.to_vec();
    for axis in 0..3 {
        let stride = q.pow(2 - axis as u32);
        let mut next = vec![0u32; cur.len()];
        for (idx, slot) in next.iter_mut().enumerate() {
            let out_digit = (idx / stride) % q;
            let rest = idx - out_digit * stride;
            let mut acc = 0u32;
            for (in_digit, &coef) in m[out_digit].iter().enumerate() {
                if coef != 0 {
                    acc = p.add(acc, p.mul(coef, cur[rest + in_digit * stride]));
                }
            }
            *slot = acc;
        }
        cur = next;
    }
    cur
}

pub fn poly_from_weight(w: &WeightFp) -> ReducedPoly {
    let p = w.modulus();
    ReducedPoly {
        p,
        coeffs: transform3(p, w.values(), &interpolation(p)),
    }
}

pub fn weight_from_poly(q: &ReducedPoly) -> WeightFp {
    let p = q.p;
    let values = transform3(p, &q.coeffs, &vandermonde(p));
    WeightFp::from_values(p, values).expect("residues in range")
}

/// Degree of the reduced polynomial of `w`.
pub fn weight_degree(w: &WeightFp) -> Option<u32> {
    poly_from_weight(w).total_degree()
}

fn degree_at_most(w: &WeightFp, bound: u32) -> bool {
    weight_degree(w).is_none_or(|d| d <= bound)
}

/// Membership in the span of plane indicators: degree `<= p - 1`.
pub fn in_s1(w: &WeightFp) -> bool {
    degree_at_most(w, w.modulus().get() - 1)
}

/// Membership in the orthogonal complement of the plane span: degree `<= 2p - 3`.
///
/// Debug builds also run [`in_s1_perp_by_scan`] and assert agreement.
pub fn in_s1_perp(w: &WeightFp) -> bool {
    let by_degree = degree_at_most(w, 2 * w.modulus().get() - 3);
    debug_assert_eq!(by_degree, in_s1_perp_by_scan(w));
    by_degree
}

/// Direct route: `<w, 1_H> = 0` for every plane `H`.
pub fn in_s1_perp_by_scan(w: &WeightFp) -> bool {
    let p = w.modulus();
    enumerate_planes(p)
        .iter()
        .all(|h| bilinear(w, &plane_indicator(h).reduce_mod_p()).unwrap() == 0)
}

/// Membership in the span of line indicators: degree `<= 2p - 2`.
pub fn in_s2(w: &WeightFp) -> bool {
    degree_at_most(w, 2 * w.modulus().get() - 2)
}

/// Number of exponent triples in `[0, p-1]^3` with sum `<= max_total`.
pub fn count_monomials(p: PrimeModulus, max_total: u32) -> usize {
    let q = p.get();
    let mut n = 0;
    for i in 0..q {
        for j in 0..q {
            for k in 0..q {
                if i + j + k <= max_total {
                    n += 1;
                }
            }
        }
    }
    n
}

/// A linear combination of plane indicators plus a constant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaneCombination {
    pub p: PrimeModulus,
    pub terms: Vec<(Plane, u32)>,
    pub constant_adjust: u32,
    /// The multinomial factor that was divided out, nonzero mod p.
    pub multinomial: u32,
}

impl PlaneCombination {
    pub fn evaluate(&self) -> WeightFp {
        let p = self.p;
        let g = Geometry::get(p);
        let mut vals = vec![self.constant_adjust; p.cube()];
        for (h, c) in &self.terms {
            let id = g.planes.binary_search(h).expect("enumerated plane");
            for &i in &g.plane_points[id] {
                vals[i] = p.add(vals[i], *c);
            }
        }
        WeightFp::from_values(p, vals).expect("residues")
    }

    /// Replace the constant by the pencil `x + d = 0`, `d` in `F_p`.
    pub fn into_planes_only(mut self) -> PlaneCombination {
        if self.constant_adjust != 0 {
            let c = self.constant_adjust;
            for d in 0..self.p.get() {
                let h = Plane::new(self.p, 1, 0, 0, d).expect("valid plane");
                self.terms.push((h, c));
            }
            self.constant_adjust = 0;
        }
        self
    }
}

/// Writes the monomial `x^i y^j z^k` (total degree at most `p - 1`) as a
/// combination of the planes `ax + by + cz + 1 = 0`, weighting each by
/// `a^s b^t c^u` with `(s, t, u) = (p-1-i, p-1-j, p-1-k)` and dividing out
/// the multinomial `(p-1)! / (i! j! k! (p-1-i-j-k)!)`.
///
/// The constant monomial is the exceptional case; it is returned as the
/// pencil of planes `x + d = 0`.
pub fn monomial_via_planes(p: PrimeModulus, [i, j, k]: [u32; 3]) -> Result<PlaneCombination> {
    let q = p.get();
    let degree = i + j + k;
    if degree > q - 1 {
        return Err(Error::DegreeTooHigh { degree, max: q - 1 });
    }
    if degree == 0 {
        let terms = (0..q)
            .map(|d| (Plane::new(p, 1, 0, 0, d).expect("valid"), 1))
            .collect();
        return Ok(PlaneCombination {
            p,
            terms,
            constant_adjust: 0,
            multinomial: 1,
        });
    }
    let (s, t, u) = ((q - 1 - i) as u64, (q - 1 - j) as u64, (q - 1 - k) as u64);
    let multinomial = multinomial_mod(p, q - 1, [i, j, k, q - 1 - degree]);
    let scale = p.inv(multinomial).expect("multinomial is a unit below p");
    let mut terms = Vec::new();
    for a in 0..q {
        for b in 0..q {
            for c in 0..q {
                if a == 0 && b == 0 && c == 0 {
                    // 1 - 1^(p-1) = 0: the empty "plane" contributes nothing.
                    continue;
                }
                let w = p.mul(p.mul(p.pow(a, s), p.pow(b, t)), p.pow(c, u));
                if w == 0 {
                    continue;
                }
                let h = Plane::new(p, a, b, c, 1).expect("nonzero normal");
                terms.push((h, p.mul(w, scale)));
            }
        }
    }
    Ok(PlaneCombination {
        p,
        terms,
        constant_adjust: 0,
        multinomial,
    })
}

fn multinomial_mod(p: PrimeModulus, n: u32, parts: [u32; 4]) -> u32 {
    let mut rest = n as u64;
    let mut acc = 1;
    for part in parts {
        acc = p.mul(acc, binomial_mod(rest, part as u64, p));
        rest -= part as u64;
    }
    acc
}

/// `sum_{a in F_p} a^s` with `0^0 = 1`.
pub fn power_sum(p: PrimeModulus, s: u64) -> u32 {
    (0..p.get()).fold(0, |acc, a| p.add(acc, p.pow(a, s)))
}

/// Polynomial interchange form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyJson {
    pub p: u32,
    pub coeffs: Vec<[u32; 4]>,
}

impl From<&ReducedPoly> for PolyJson {
    fn from(q: &ReducedPoly) -> Self {
        PolyJson {
            p: q.p.get(),
            coeffs: q.terms().map(|([i, j, k], c)| [i, j, k, c]).collect(),
        }
    }
}

impl TryFrom<PolyJson> for ReducedPoly {
    type Error = Error;
    fn try_from(j: PolyJson) -> Result<Self> {
        let p = PrimeModulus::new(j.p)?;
        let mut q = ReducedPoly::zero(p);
        for [i, jj, k, c] in j.coeffs {
            for e in [i, jj, k, c] {
                if e >= p.get() {
                    return Err(Error::CoordinateOutOfRange {
                        value: e,
                        p: p.get(),
                    });
                }
            }
            q.coeffs[exp_index(p, [i, jj, k])] = c;
        }
        Ok(q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{line_through, Point};
    use crate::weight::{line_indicator, point_indicator};
    use rand::{Rng, SeedableRng};

    fn pm(p: u32) -> PrimeModulus {
        PrimeModulus::new(p).unwrap()
    }

    /// Naive evaluation, independent of the separable transform.
    fn eval_naive(q: &ReducedPoly, pt: Point) -> u32 {
        let p = q.modulus();
        q.terms().fold(0, |acc, ([i, j, k], c)| {
            let m = p.mul(
                p.mul(p.pow(pt.x, i as u64), p.pow(pt.y, j as u64)),
                p.pow(pt.z, k as u64),
            );
            p.add(acc, p.mul(c, m))
        })
    }

    #[test]
    fn zero_round_trip() {
        let m = pm(5);
        assert!(poly_from_weight(&WeightFp::zero(m)).is_zero());
        assert!(weight_from_poly(&ReducedPoly::zero(m)).is_zero());
        assert_eq!(ReducedPoly::zero(m).total_degree(), None);
    }

    #[test]
    fn random_round_trips() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for p in [2u32, 3, 5, 7] {
            let m = pm(p);
            for _ in 0..100 {
                let w = WeightFp::from_fn(m, |_| rng.gen_range(0..p));
                let q = poly_from_weight(&w);
                assert_eq!(weight_from_poly(&q), w);
                for idx in (0..m.cube()).step_by(13) {
                    let pt = Point::from_index(m, idx);
                    assert_eq!(eval_naive(&q, pt), w.at(pt));
                }
            }
        }
    }

    #[test]
    fn plane_indicator_is_reduced_power() {
        for p in [2u32, 3, 5] {
            let m = pm(p);
            for h in enumerate_planes(m).into_iter().step_by(3) {
                let lin = ReducedPoly::linear(m, h.coefficients());
                let expected = ReducedPoly::constant(m, 1).add(&lin.pow(p as u64 - 1).scale(p - 1));
                let got = poly_from_weight(&plane_indicator(&h).reduce_mod_p());
                assert_eq!(got, expected);
                assert_eq!(got.total_degree(), Some(p - 1));
            }
        }
    }

    #[test]
    fn degrees_of_lines_and_points() {
        for p in [2u32, 3, 5] {
            let m = pm(p);
            let l = line_through(m, Point::ORIGIN, Point { x: 1, y: 1, z: 1 }).unwrap();
            assert_eq!(
                weight_degree(&line_indicator(&l).reduce_mod_p()),
                Some(2 * p - 2)
            );
            let pt = Point {
                x: 1 % p,
                y: 0,
                z: p - 1,
            };
            let w = point_indicator(m, pt).reduce_mod_p();
            let q = poly_from_weight(&w);
            assert_eq!(q.total_degree(), Some(3 * p - 3));
            // Leading coefficient of prod (1 - (x_t - a_t)^(p-1)) is (-1)^3.
            assert_eq!(q.coeff([p - 1, p - 1, p - 1]), p.wrapping_sub(1) % p);
        }
    }

    #[test]
    fn monomials_via_planes() {
        for p in [2u32, 3, 5, 7] {
            let m = pm(p);
            for i in 0..p {
                for j in 0..p - i {
                    for k in 0..p - i - j {
                        let comb = monomial_via_planes(m, [i, j, k]).unwrap();
                        assert_ne!(comb.multinomial % p, 0);
                        let target = weight_from_poly(&ReducedPoly::monomial(m, [i, j, k], 1));
                        assert_eq!(comb.evaluate(), target, "p={p} ({i},{j},{k})");
                        assert_eq!(comb.constant_adjust, 0);
                    }
                }
            }
        }
        assert_eq!(
            monomial_via_planes(pm(3), [1, 1, 1]),
            Err(Error::DegreeTooHigh { degree: 3, max: 2 })
        );
    }

    #[test]
    fn monomial_examples() {
        let m3 = pm(3);
        let c = monomial_via_planes(m3, [0, 0, 0]).unwrap();
        assert_eq!(c.terms.len(), 3);
        assert!(c.evaluate().values().iter().all(|&v| v == 1));
        let x = monomial_via_planes(m3, [1, 0, 0]).unwrap().evaluate();
        for idx in 0..27 {
            let pt = Point::from_index(m3, idx);
            assert_eq!(x.at(pt), pt.x);
        }
        let m5 = pm(5);
        let xy2z = monomial_via_planes(m5, [1, 2, 1]).unwrap().evaluate();
        for idx in 0..125 {
            let pt = Point::from_index(m5, idx);
            let expect = m5.mul(m5.mul(pt.x, m5.mul(pt.y, pt.y)), pt.z);
            assert_eq!(xy2z.at(pt), expect);
        }
    }

    #[test]
    fn constant_adjust_expands_to_pencil() {
        let m = pm(3);
        let comb = PlaneCombination {
            p: m,
            terms: vec![],
            constant_adjust: 2,
            multinomial: 1,
        };
        let before = comb.evaluate();
        let after = comb.into_planes_only();
        assert_eq!(after.constant_adjust, 0);
        assert_eq!(after.evaluate(), before);
    }

    #[test]
    fn membership_examples() {
        for p in [2u32, 3, 5] {
            let m = pm(p);
            let h = Plane::new(m, 1, 2 % p, 0, 1).unwrap();
            let wh = plane_indicator(&h).reduce_mod_p();
            assert!(in_s1(&wh));
            assert!(in_s1_perp(&wh));
            let pt = point_indicator(m, Point::ORIGIN).reduce_mod_p();
            assert!(!in_s1_perp(&pt));
            assert!(!in_s1_perp_by_scan(&pt));
            assert!(!in_s2(&pt));
        }
    }

    #[test]
    fn monomial_counts_match_dimension_identity() {
        for p in [2u32, 3, 5, 7, 11] {
            let m = pm(p);
            let cube = (p * p * p) as usize;
            let c = crate::field::binomial(p as u64 + 2, 3) as usize;
            assert_eq!(count_monomials(m, p - 1), c);
            assert_eq!(count_monomials(m, 2 * p - 3), cube - c);
        }
    }

    #[test]
    fn poly_json_round_trip() {
        let m = pm(3);
        let q = ReducedPoly::monomial(m, [1, 2, 0], 2).add(&ReducedPoly::constant(m, 1));
        let j = PolyJson::from(&q);
        assert_eq!(j.coeffs, vec![[0, 0, 0, 1], [1, 2, 0, 2]]);
        assert_eq!(ReducedPoly::try_from(j).unwrap(), q);
    }
}
