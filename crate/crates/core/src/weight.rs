//! Weight functions on `F_p^3` and the p-divisibility test.
//!
//! A weight is a dense array of `p^3` values in point-index order. Sets are
//! `{0,1}`-valued weights, multisets are nonnegative integer weights, and
//! `F_p`-valued weights arise as reductions of either.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::PrimeModulus;
use crate::geometry::{Direction, Geometry, Line, Plane, Point};

/// An `F_p`-valued weight function.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightFp {
    p: PrimeModulus,
    values: Vec<u32>,
}

/// An integer-valued weight function. Entries may be negative.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightZ {
    p: PrimeModulus,
    values: Vec<i64>,
}

/// Result of scanning all planes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisibilityReport {
    pub divisible: bool,
    /// First plane in enumeration order whose sum is nonzero mod p, with
    /// that sum (reduced mod p for `F_p` weights, exact for integer ones).
    pub witness: Option<(Plane, i64)>,
}

impl WeightFp {
    pub fn zero(p: PrimeModulus) -> Self {
        WeightFp {
            p,
            values: vec![0; p.cube()],
        }
    }

    pub fn from_values(p: PrimeModulus, values: Vec<u32>) -> Result<Self> {
        if values.len() != p.cube() {
            return Err(Error::WrongLength {
                expected: p.cube(),
                got: values.len(),
            });
        }
        if let Some((index, &v)) = values.iter().enumerate().find(|(_, &v)| v >= p.get()) {
            return Err(Error::ResidueOutOfRange {
                index,
                value: v as i64,
                p: p.get(),
            });
        }
        Ok(WeightFp { p, values })
    }

    /// Build from an arbitrary function of the point.
    pub fn from_fn(p: PrimeModulus, mut f: impl FnMut(Point) -> u32) -> Self {
        let values = (0..p.cube())
            .map(|i| f(Point::from_index(p, i)) % p.get())
            .collect();
        WeightFp { p, values }
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.p
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn at(&self, q: Point) -> u32 {
        self.values[q.index(self.p)]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    /// Values as nonnegative integers in `[0, p)`.
    pub fn lift(&self) -> WeightZ {
        WeightZ {
            p: self.p,
            values: self.values.iter().map(|&v| v as i64).collect(),
        }
    }

    /// `self + scale * other`.
    pub fn axpy(&mut self, scale: u32, other: &WeightFp) -> Result<()> {
        check_same(self.p, other.p)?;
        let p = self.p;
        for (a, &b) in self.values.iter_mut().zip(&other.values) {
            *a = p.add(*a, p.mul(scale, b));
        }
        Ok(())
    }

    pub fn plane_sum(&self, h: &Plane) -> u32 {
        let p = self.p;
        h.points().fold(0, |acc, q| p.add(acc, self.at(q)))
    }

    pub fn total(&self) -> u32 {
        let p = self.p;
        self.values.iter().fold(0, |acc, &v| p.add(acc, v))
    }

    pub fn is_p_divisible(&self) -> DivisibilityReport {
        let g = Geometry::get(self.p);
        let p = self.p;
        for (h, pts) in g.planes.iter().zip(&g.plane_points) {
            let s = pts.iter().fold(0, |acc, &i| p.add(acc, self.values[i]));
            if s != 0 {
                return DivisibilityReport {
                    divisible: false,
                    witness: Some((*h, s as i64)),
                };
            }
        }
        DivisibilityReport {
            divisible: true,
            witness: None,
        }
    }
}

impl WeightZ {
    pub fn zero(p: PrimeModulus) -> Self {
        WeightZ {
            p,
            values: vec![0; p.cube()],
        }
    }

    pub fn from_values(p: PrimeModulus, values: Vec<i64>) -> Result<Self> {
        if values.len() != p.cube() {
            return Err(Error::WrongLength {
                expected: p.cube(),
                got: values.len(),
            });
        }
        Ok(WeightZ { p, values })
    }

    pub fn from_fn(p: PrimeModulus, mut f: impl FnMut(Point) -> i64) -> Self {
        let values = (0..p.cube()).map(|i| f(Point::from_index(p, i))).collect();
        WeightZ { p, values }
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.p
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [i64] {
        &mut self.values
    }

    pub fn at(&self, q: Point) -> i64 {
        self.values[q.index(self.p)]
    }

    pub fn total_weight(&self) -> i64 {
        self.values.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    /// All entries nonnegative.
    pub fn is_multiset(&self) -> bool {
        self.values.iter().all(|&v| v >= 0)
    }

    /// All entries in `{0, 1}`.
    pub fn is_set(&self) -> bool {
        self.values.iter().all(|&v| v == 0 || v == 1)
    }

    /// Indices with nonzero weight.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0)
            .map(|(i, _)| i)
    }

    pub fn support_size(&self) -> usize {
        self.support().count()
    }

    pub fn reduce_mod_p(&self) -> WeightFp {
        let p = self.p;
        WeightFp {
            p,
            values: self.values.iter().map(|&v| p.reduce(v)).collect(),
        }
    }

    /// `self + scale * other`.
    pub fn axpy(&mut self, scale: i64, other: &WeightZ) -> Result<()> {
        check_same(self.p, other.p)?;
        for (a, &b) in self.values.iter_mut().zip(&other.values) {
            *a += scale * b;
        }
        Ok(())
    }

    pub fn add_line(&mut self, line: &Line, coeff: i64) {
        for q in line.points() {
            self.values[q.index(self.p)] += coeff;
        }
    }

    pub fn plane_sum(&self, h: &Plane) -> i64 {
        h.points().map(|q| self.at(q)).sum()
    }

    pub fn is_p_divisible(&self) -> DivisibilityReport {
        let g = Geometry::get(self.p);
        let q = self.p.get() as i64;
        for (h, pts) in g.planes.iter().zip(&g.plane_points) {
            let s: i64 = pts.iter().map(|&i| self.values[i]).sum();
            if s.rem_euclid(q) != 0 {
                return DivisibilityReport {
                    divisible: false,
                    witness: Some((*h, s)),
                };
            }
        }
        DivisibilityReport {
            divisible: true,
            witness: None,
        }
    }
}

fn check_same(a: PrimeModulus, b: PrimeModulus) -> Result<()> {
    if a != b {
        return Err(Error::ModulusMismatch {
            left: a.get(),
            right: b.get(),
        });
    }
    Ok(())
}

/// `<f, g> = sum_x f(x) g(x)` over `F_p`.
pub fn bilinear(f: &WeightFp, g: &WeightFp) -> Result<u32> {
    check_same(f.p, g.p)?;
    let p = f.p;
    Ok(f.values
        .iter()
        .zip(&g.values)
        .fold(0, |acc, (&a, &b)| p.add(acc, p.mul(a, b))))
}

/// `p` lines sharing one direction, possibly repeated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CylinderSpec {
    pub direction: Direction,
    /// Base points of the fibers; each selects the line through it.
    pub fibers: Vec<Point>,
}

/// Objects with a characteristic function.
#[derive(Debug, Clone)]
pub enum Shape {
    Point(Point),
    Line(Line),
    Plane(Plane),
    Cylinder(CylinderSpec),
}

pub fn indicator(p: PrimeModulus, shape: &Shape) -> Result<WeightZ> {
    let mut w = WeightZ::zero(p);
    match shape {
        Shape::Point(q) => w.values[q.index(p)] = 1,
        Shape::Line(l) => {
            check_same(p, l.modulus())?;
            w.add_line(l, 1);
        }
        Shape::Plane(h) => {
            check_same(p, h.modulus())?;
            for q in h.points() {
                w.values[q.index(p)] = 1;
            }
        }
        Shape::Cylinder(spec) => {
            if spec.fibers.len() != p.get() as usize {
                return Err(Error::InvalidCylinderSpec {
                    expected: p.get() as usize,
                    got: spec.fibers.len(),
                });
            }
            for &b in &spec.fibers {
                w.add_line(&Line::new(p, spec.direction, b), 1);
            }
        }
    }
    Ok(w)
}

pub fn point_indicator(p: PrimeModulus, q: Point) -> WeightZ {
    let mut w = WeightZ::zero(p);
    w.values[q.index(p)] = 1;
    w
}

pub fn line_indicator(l: &Line) -> WeightZ {
    let mut w = WeightZ::zero(l.modulus());
    w.add_line(l, 1);
    w
}

pub fn plane_indicator(h: &Plane) -> WeightZ {
    indicator(h.modulus(), &Shape::Plane(*h)).expect("same modulus")
}

/// Interchange form shared by `F_p` and integer weights.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightJson {
    pub p: u32,
    pub values: Vec<i64>,
}

impl From<&WeightZ> for WeightJson {
    fn from(w: &WeightZ) -> Self {
        WeightJson {
            p: w.p.get(),
            values: w.values.clone(),
        }
    }
}

impl From<&WeightFp> for WeightJson {
    fn from(w: &WeightFp) -> Self {
        WeightJson {
            p: w.p.get(),
            values: w.values.iter().map(|&v| v as i64).collect(),
        }
    }
}

impl TryFrom<WeightJson> for WeightZ {
    type Error = Error;
    fn try_from(j: WeightJson) -> Result<Self> {
        let p = PrimeModulus::new(j.p)?;
        WeightZ::from_values(p, j.values)
    }
}

impl TryFrom<WeightJson> for WeightFp {
    type Error = Error;
    fn try_from(j: WeightJson) -> Result<Self> {
        let p = PrimeModulus::new(j.p)?;
        if j.values.len() != p.cube() {
            return Err(Error::WrongLength {
                expected: p.cube(),
                got: j.values.len(),
            });
        }
        let mut values = Vec::with_capacity(j.values.len());
        for (index, v) in j.values.into_iter().enumerate() {
            if v < 0 || v >= p.get() as i64 {
                return Err(Error::ResidueOutOfRange {
                    index,
                    value: v,
                    p: p.get(),
                });
            }
            values.push(v as u32);
        }
        Ok(WeightFp { p, values })
    }
}
