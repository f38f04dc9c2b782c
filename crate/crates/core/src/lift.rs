//! Integer certificates built from differences of parallel lines.
//!
//! The building block is the point-difference gadget: inside a plane through
//! `a` and `b`, every line through `a` that misses `b` is paired with its
//! parallel through `b`. The signed sum of the pairs is `p 1_a - p 1_b`.
//! Zero-sum weights scaled by `p` are sums of gadgets, and the two lifting
//! procedures below turn an `F_p` decomposition into an exact integer one.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::decompose::{decompose_p_divisible, FpCombination, Generator};
use crate::error::{Error, Result};
use crate::field::PrimeModulus;
use crate::geometry::{canonical_direction, Geometry, Line, Plane, Point};
use crate::weight::{plane_indicator, WeightJson, WeightZ};

/// Signed parallel-line pairs evaluating to `p 1_a - p 1_b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointDiffGadget {
    pub a: Point,
    pub b: Point,
    pub host_plane: Plane,
    /// `(line through a, parallel line through b)`; weight `+1` on the
    /// first and `-1` on the second.
    pub pairs: Vec<(Line, Line)>,
}

impl PointDiffGadget {
    pub fn evaluate(&self) -> WeightZ {
        let p = self.host_plane.modulus();
        let mut w = WeightZ::zero(p);
        for (l, m) in &self.pairs {
            w.add_line(l, 1);
            w.add_line(m, -1);
        }
        w
    }
}

pub fn point_difference_certificate(
    p: PrimeModulus,
    a: Point,
    b: Point,
) -> Result<PointDiffGadget> {
    if a == b {
        return Err(Error::DegeneratePair);
    }
    let geo = Geometry::get(p);
    let host_plane = *geo
        .planes
        .iter()
        .find(|h| h.contains(a) && h.contains(b))
        .expect("two points lie on a plane");
    let ab = canonical_direction(p, b.minus(p, a))?;
    let pairs = geo
        .directions
        .iter()
        .filter(|&&v| v != ab && host_plane.contains_direction(v))
        .map(|&v| (Line::new(p, v, a), Line::new(p, v, b)))
        .collect();
    Ok(PointDiffGadget {
        a,
        b,
        host_plane,
        pairs,
    })
}

/// Gadgets whose evaluations sum to `p u`, for `u` with total weight zero.
///
/// Units of positive weight are matched with units of negative weight in
/// point-index order; each match `(a, b)` contributes one `e_{a,b}`.
pub fn p_zero_sum_certificate(u: &WeightZ) -> Result<Vec<PointDiffGadget>> {
    let total = u.total_weight();
    if total != 0 {
        return Err(Error::precondition(format!(
            "zero-sum weight required, total is {total}"
        )));
    }
    let p = u.modulus();
    let units = |sign: i64| {
        u.values()
            .iter()
            .enumerate()
            .flat_map(move |(i, &v)| std::iter::repeat_n(i, (v * sign).max(0) as usize))
    };
    let mut cache: BTreeMap<(usize, usize), PointDiffGadget> = BTreeMap::new();
    let mut out = Vec::new();
    for (ia, ib) in units(1).zip(units(-1)) {
        let g = match cache.get(&(ia, ib)) {
            Some(g) => g.clone(),
            None => {
                let g = point_difference_certificate(
                    p,
                    Point::from_index(p, ia),
                    Point::from_index(p, ib),
                )?;
                cache.insert((ia, ib), g.clone());
                g
            }
        };
        out.push(g);
    }
    Ok(out)
}

/// `1_H + sum coeff (1_l1 - 1_l2)` claimed equal to `declared_target`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZCertificate {
    pub p: PrimeModulus,
    pub base_plane: Option<Plane>,
    pub diff_terms: Vec<(Line, Line, i64)>,
    pub declared_target: WeightZ,
}

impl ZCertificate {
    /// Evaluation through the crate's own weight machinery. The standalone
    /// check is [`verify_certificate`].
    pub fn evaluate(&self) -> WeightZ {
        let mut w = match &self.base_plane {
            Some(h) => plane_indicator(h),
            None => WeightZ::zero(self.p),
        };
        for (l1, l2, c) in &self.diff_terms {
            w.add_line(l1, *c);
            w.add_line(l2, -*c);
        }
        w
    }

    /// Evaluation of the difference terms alone.
    pub fn residual(&self) -> WeightZ {
        let mut w = WeightZ::zero(self.p);
        for (l1, l2, c) in &self.diff_terms {
            w.add_line(l1, *c);
            w.add_line(l2, -*c);
        }
        w
    }
}

/// Coalesces signed parallel pairs; `(l1, l2, c)` and `(l2, l1, -c)` merge.
#[derive(Debug, Default)]
struct DiffAccumulator {
    terms: BTreeMap<(Line, Line), i64>,
}

impl DiffAccumulator {
    fn add(&mut self, l1: Line, l2: Line, c: i64) {
        if c == 0 || l1 == l2 {
            return;
        }
        let (key, c) = if l1 < l2 {
            ((l1, l2), c)
        } else {
            ((l2, l1), -c)
        };
        *self.terms.entry(key).or_insert(0) += c;
    }

    fn add_gadget(&mut self, g: &PointDiffGadget) {
        for &(l, m) in &g.pairs {
            self.add(l, m, 1);
        }
    }

    fn add_combination(&mut self, comb: &FpCombination) {
        for (gen, c) in comb.generators() {
            match gen {
                Generator::Diff(l1, l2) => self.add(l1, l2, c as i64),
                other => unreachable!("expected a difference generator, got {other}"),
            }
        }
    }

    fn into_terms(self) -> Vec<(Line, Line, i64)> {
        self.terms
            .into_iter()
            .filter(|&(_, c)| c != 0)
            .map(|((l1, l2), c)| (l1, l2, c))
            .collect()
    }
}

/// One application of `e_{c,d}` during the negative-value repair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepairStep {
    pub c: Point,
    pub d: Point,
    pub negative_mass_before: i64,
    pub negative_mass_after: i64,
}

fn negative_mass(g: &[i64]) -> i64 {
    g.iter().filter(|&&v| v < 0).map(|v| -v).sum()
}

fn check_divisible(w: &WeightZ) -> Result<()> {
    let report = w.is_p_divisible();
    if report.divisible {
        Ok(())
    } else {
        Err(Error::PreconditionViolated {
            reason: "weight is not p-divisible".into(),
            witness: report.witness,
        })
    }
}

/// The plane itself when `w` is a plane indicator, else the first plane.
fn choose_base_plane(w: &WeightZ) -> Plane {
    let geo = Geometry::get(w.modulus());
    if w.is_set() && w.total_weight() == w.modulus().square() as i64 {
        let support: Vec<usize> = w.support().collect();
        if let Some(h) = geo
            .planes
            .iter()
            .zip(&geo.plane_points)
            .find(|(_, pts)| **pts == support)
        {
            return *h.0;
        }
    }
    geo.planes[0]
}

fn finish(cert: ZCertificate) -> Result<ZCertificate> {
    if verify_certificate(&cert) {
        Ok(cert)
    } else {
        Err(Error::CertificateMismatch)
    }
}

pub fn lift_set(s: &WeightZ) -> Result<ZCertificate> {
    lift_set_traced(s).map(|(c, _)| c)
}

/// [`lift_set`] together with the repair moves it applied.
pub fn lift_set_traced(s: &WeightZ) -> Result<(ZCertificate, Vec<RepairStep>)> {
    let p = s.modulus();
    let q = p.get() as i64;
    let size = p.square() as i64;
    if !s.is_set() {
        return Err(Error::precondition("input is not {0,1}-valued"));
    }
    if s.total_weight() != size {
        return Err(Error::SizeViolation {
            total: s.total_weight(),
            expected: size,
        });
    }
    check_divisible(s)?;

    let h = choose_base_plane(s);
    let one_h = plane_indicator(&h);
    let mut residue = s.clone();
    residue.axpy(-1, &one_h)?;
    let comb = decompose_p_divisible(&residue.reduce_mod_p())?;

    let mut acc = DiffAccumulator::default();
    acc.add_combination(&comb);
    // Coefficients lifted to {0, .., p-1}.
    let mut g = one_h.clone();
    for (gen, c) in comb.generators() {
        if let Generator::Diff(l1, l2) = gen {
            g.add_line(&l1, c as i64);
            g.add_line(&l2, -(c as i64));
        }
    }

    let residues: Vec<i64> = g.values().iter().map(|v| v.rem_euclid(q)).collect();
    let cap = q * g.values().iter().map(|v| v.abs()).sum::<i64>();
    let mut trace = Vec::new();
    loop {
        let vals = g.values();
        let Some(c) = vals.iter().position(|&v| v < 0) else {
            break;
        };
        let Some(d) = vals.iter().position(|&v| v >= q) else {
            return Err(Error::LiftObstruction {
                negative_at: c,
                state: vals.to_vec(),
            });
        };
        if trace.len() as i64 >= cap {
            return Err(Error::LiftObstruction {
                negative_at: c,
                state: vals.to_vec(),
            });
        }
        let before = negative_mass(vals);
        let (pc, pd) = (Point::from_index(p, c), Point::from_index(p, d));
        let gadget = point_difference_certificate(p, pc, pd)?;
        acc.add_gadget(&gadget);
        let v = g.values_mut();
        v[c] += q;
        v[d] -= q;
        let after = negative_mass(g.values());
        assert!(after < before, "repair must shrink the negative mass");
        assert_eq!(g.total_weight(), size);
        debug_assert!(g
            .values()
            .iter()
            .zip(&residues)
            .all(|(v, r)| v.rem_euclid(q) == *r));
        trace.push(RepairStep {
            c: pc,
            d: pd,
            negative_mass_before: before,
            negative_mass_after: after,
        });
    }

    let cert = ZCertificate {
        p,
        base_plane: Some(h),
        diff_terms: acc.into_terms(),
        declared_target: s.clone(),
    };
    if g != *s {
        return Err(Error::CertificateMismatch);
    }
    finish(cert).map(|c| (c, trace))
}

/// Certificate for `w - 1_H` as an integer combination of parallel
/// differences, for a nonnegative p-divisible `w` of total `p^2`.
pub fn lift_multiset(w: &WeightZ) -> Result<ZCertificate> {
    let p = w.modulus();
    let q = p.get() as i64;
    if let Some((index, &value)) = w.values().iter().enumerate().find(|(_, &v)| v < 0) {
        return Err(Error::NotAMultiset { index, value });
    }
    let size = p.square() as i64;
    if w.total_weight() != size {
        return Err(Error::SizeViolation {
            total: w.total_weight(),
            expected: size,
        });
    }
    check_divisible(w)?;

    // r = w mod p, decomposed and lifted to g with coefficients in {0..p-1}.
    let comb = decompose_p_divisible(&w.reduce_mod_p())?;
    let mut acc = DiffAccumulator::default();
    acc.add_combination(&comb);
    let mut g = WeightZ::zero(p);
    for (gen, c) in comb.generators() {
        if let Generator::Diff(l1, l2) = gen {
            g.add_line(&l1, c as i64);
            g.add_line(&l2, -(c as i64));
        }
    }
    debug_assert_eq!(g.total_weight(), 0);

    // t = (w - g) / p, total p.
    let mut t = w.clone();
    t.axpy(-1, &g)?;
    for v in t.values_mut() {
        debug_assert_eq!(v.rem_euclid(q), 0);
        *v /= q;
    }
    debug_assert_eq!(t.total_weight(), q);

    let geo = Geometry::get(p);
    let h = choose_base_plane(w);
    let anchor = *geo
        .lines
        .iter()
        .find(|l| h.contains_line(l))
        .expect("a plane contains lines");

    // p u with u = t - 1_l0.
    let mut u = t;
    u.add_line(&anchor, -1);
    for gadget in p_zero_sum_certificate(&u)? {
        acc.add_gadget(&gadget);
    }

    // -(1_H - p 1_l0) = -sum over the pencil of (1_l - 1_l0).
    let k = geo
        .directions
        .binary_search(&anchor.direction())
        .expect("direction");
    for l in &geo.lines[geo.parallel_class(k)] {
        if h.contains_line(l) {
            acc.add(*l, anchor, -1);
        }
    }

    finish(ZCertificate {
        p,
        base_plane: Some(h),
        diff_terms: acc.into_terms(),
        declared_target: w.clone(),
    })
}

/// Recomputes a certificate's value from scratch and compares it with the
/// declared target. Also rejects non-parallel or identical pairs and
/// modulus mismatches. Uses only coordinate arithmetic, none of the
/// producers' caches.
pub fn verify_certificate(c: &ZCertificate) -> bool {
    let p = c.p.get() as u64;
    let n = (p * p * p) as usize;
    if c.declared_target.modulus() != c.p || c.declared_target.values().len() != n {
        return false;
    }
    let idx = |x: u64, y: u64, z: u64| ((x * p + y) * p + z) as usize;
    let mut acc = vec![0i64; n];

    if let Some(h) = &c.base_plane {
        if h.modulus() != c.p {
            return false;
        }
        let [a, b, cc, d] = h.coefficients().map(|v| v as u64);
        for x in 0..p {
            for y in 0..p {
                for z in 0..p {
                    if (a * x + b * y + cc * z + d) % p == 0 {
                        acc[idx(x, y, z)] += 1;
                    }
                }
            }
        }
    }

    let mut stamp = |l: &Line, coeff: i64| {
        let v = l.direction().vector().map(|t| t as u64);
        let b = l.base();
        for t in 0..p {
            let x = (b.x as u64 + t * v[0]) % p;
            let y = (b.y as u64 + t * v[1]) % p;
            let z = (b.z as u64 + t * v[2]) % p;
            acc[idx(x, y, z)] += coeff;
        }
    };
    for (l1, l2, coeff) in &c.diff_terms {
        if l1.modulus() != c.p || l2.modulus() != c.p {
            return false;
        }
        if l1.direction() != l2.direction() || l1 == l2 {
            return false;
        }
        stamp(l1, *coeff);
        stamp(l2, -*coeff);
    }
    acc == c.declared_target.values()
}

/// Certificate interchange form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZCertificateJson {
    pub p: u32,
    pub base_plane: Option<String>,
    pub diffs: Vec<(String, String, i64)>,
    pub target: WeightJson,
}

impl From<&ZCertificate> for ZCertificateJson {
    fn from(c: &ZCertificate) -> Self {
        ZCertificateJson {
            p: c.p.get(),
            base_plane: c.base_plane.map(|h| h.to_string()),
            diffs: c
                .diff_terms
                .iter()
                .map(|(a, b, k)| (a.to_string(), b.to_string(), *k))
                .collect(),
            target: WeightJson::from(&c.declared_target),
        }
    }
}

impl TryFrom<ZCertificateJson> for ZCertificate {
    type Error = Error;
    fn try_from(j: ZCertificateJson) -> Result<Self> {
        let p = PrimeModulus::new(j.p)?;
        let base_plane = j
            .base_plane
            .map(|s| {
                s.parse::<Plane>()
                    .map_err(|e| Error::Parse(format!("base_plane: {e}")))
            })
            .transpose()?;
        let diff_terms = j
            .diffs
            .into_iter()
            .enumerate()
            .map(|(i, (a, b, k))| {
                let l1 = a
                    .parse::<Line>()
                    .map_err(|e| Error::Parse(format!("diffs[{i}][0]: {e}")))?;
                let l2 = b
                    .parse::<Line>()
                    .map_err(|e| Error::Parse(format!("diffs[{i}][1]: {e}")))?;
                Ok((l1, l2, k))
            })
            .collect::<Result<_>>()?;
        let declared_target =
            WeightZ::try_from(j.target).map_err(|e| Error::Parse(format!("target: {e}")))?;
        Ok(ZCertificate {
            p,
            base_plane,
            diff_terms,
            declared_target,
        })
    }
}
