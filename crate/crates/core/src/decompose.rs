//! Explicit `F_p`-linear combinations over families of planes and lines.
//!
//! Each [`SpanFamily`] lists its generators in a fixed order; the
//! generator-by-point matrix is row reduced once per `(p, family)` and
//! cached, so every later membership query is a matrix-vector product.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::PrimeModulus;
use crate::geometry::{are_parallel, Geometry, Line, Plane};
use crate::linalg::{EchelonSystem, Solution};
use crate::weight::{WeightFp, WeightJson, WeightZ};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyTag {
    Planes,
    Lines,
    /// `1_l - 1_l0` with `l0` the least line of the parallel class of `l`.
    #[serde(rename = "diffs")]
    ParallelDiffs,
    /// The multiset of `p` parallel lines `l + (p-1) l0`, anchor as above.
    #[serde(rename = "cylinders")]
    CylinderType,
}

impl FamilyTag {
    pub const ALL: [FamilyTag; 4] = [
        FamilyTag::Planes,
        FamilyTag::Lines,
        FamilyTag::ParallelDiffs,
        FamilyTag::CylinderType,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyTag::Planes => "planes",
            FamilyTag::Lines => "lines",
            FamilyTag::ParallelDiffs => "diffs",
            FamilyTag::CylinderType => "cylinders",
        }
    }
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        FamilyTag::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown family {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Generator {
    Plane(Plane),
    Line(Line),
    Diff(Line, Line),
    /// `1_line + (p - 1) 1_anchor`.
    CylinderType {
        line: Line,
        anchor: Line,
    },
}

impl Generator {
    /// Exact integer evaluation.
    pub fn evaluate_z(&self, p: PrimeModulus) -> WeightZ {
        let mut w = WeightZ::zero(p);
        match self {
            Generator::Plane(h) => {
                for q in h.points() {
                    w.values_mut()[q.index(p)] = 1;
                }
            }
            Generator::Line(l) => w.add_line(l, 1),
            Generator::Diff(a, b) => {
                w.add_line(a, 1);
                w.add_line(b, -1);
            }
            Generator::CylinderType { line, anchor } => {
                w.add_line(line, 1);
                w.add_line(anchor, p.get() as i64 - 1);
            }
        }
        w
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Plane(h) => write!(f, "{h}"),
            Generator::Line(l) => write!(f, "{l}"),
            Generator::Diff(a, b) => write!(f, "{a} | {b}"),
            Generator::CylinderType { line, anchor } => write!(f, "C {line} | {anchor}"),
        }
    }
}

/// Generators of one family plus the lazily reduced system.
#[derive(Debug)]
pub struct SpanFamily {
    p: PrimeModulus,
    tag: FamilyTag,
    generators: Vec<Generator>,
    keys: HashMap<String, usize>,
    system: OnceLock<EchelonSystem>,
}

type FamilyCache = Mutex<HashMap<(u32, FamilyTag), Arc<SpanFamily>>>;

impl SpanFamily {
    /// Shared instance for `(p, tag)`.
    pub fn get(p: PrimeModulus, tag: FamilyTag) -> Arc<SpanFamily> {
        static CACHE: OnceLock<FamilyCache> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        let mut guard = cache.lock().unwrap();
        Arc::clone(
            guard
                .entry((p.get(), tag))
                .or_insert_with(|| Arc::new(SpanFamily::build(p, tag))),
        )
    }

    fn build(p: PrimeModulus, tag: FamilyTag) -> SpanFamily {
        let geo = Geometry::get(p);
        let mut generators = Vec::new();
        match tag {
            FamilyTag::Planes => generators.extend(geo.planes.iter().map(|&h| Generator::Plane(h))),
            FamilyTag::Lines => generators.extend(geo.lines.iter().map(|&l| Generator::Line(l))),
            FamilyTag::ParallelDiffs | FamilyTag::CylinderType => {
                for k in 0..geo.directions.len() {
                    let class = &geo.lines[geo.parallel_class(k)];
                    let anchor = class[0];
                    for &l in &class[1..] {
                        generators.push(match tag {
                            FamilyTag::ParallelDiffs => Generator::Diff(l, anchor),
                            _ => Generator::CylinderType { line: l, anchor },
                        });
                    }
                }
            }
        }
        let keys = generators
            .iter()
            .enumerate()
            .map(|(i, g)| (g.to_string(), i))
            .collect();
        SpanFamily {
            p,
            tag,
            generators,
            keys,
            system: OnceLock::new(),
        }
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.p
    }

    pub fn tag(&self) -> FamilyTag {
        self.tag
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn index_of_key(&self, key: &str) -> Option<usize> {
        self.keys.get(key).copied()
    }

    /// Generator `i` reduced mod p, as a dense column.
    fn column(&self, i: usize) -> Vec<u32> {
        self.generators[i]
            .evaluate_z(self.p)
            .reduce_mod_p()
            .values()
            .to_vec()
    }

    pub fn system(&self) -> &EchelonSystem {
        self.system.get_or_init(|| {
            let cols: Vec<Vec<u32>> = (0..self.generators.len()).map(|i| self.column(i)).collect();
            EchelonSystem::new(self.p, self.p.cube(), &cols)
        })
    }
}

/// Rank of the family's generator-by-point matrix over `F_p`.
pub fn span_dimension(p: PrimeModulus, tag: FamilyTag) -> usize {
    SpanFamily::get(p, tag).system().rank()
}

/// A target together with the generator coefficients that produce it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpCombination {
    pub family: FamilyTag,
    pub target: WeightFp,
    /// `(generator index, coefficient)`, indices strictly increasing.
    pub terms: Vec<(usize, u32)>,
}

impl FpCombination {
    pub fn modulus(&self) -> PrimeModulus {
        self.target.modulus()
    }

    /// `sum coeff * generator` mod p.
    pub fn evaluate(&self) -> WeightFp {
        let p = self.modulus();
        let fam = SpanFamily::get(p, self.family);
        let mut acc = WeightFp::zero(p);
        for &(i, c) in &self.terms {
            let g = fam.generators[i].evaluate_z(p).reduce_mod_p();
            acc.axpy(c, &g).expect("same modulus");
        }
        acc
    }

    pub fn is_valid(&self) -> bool {
        self.evaluate() == self.target
    }

    pub fn generators(&self) -> Vec<(Generator, u32)> {
        let fam = SpanFamily::get(self.modulus(), self.family);
        self.terms
            .iter()
            .map(|&(i, c)| (fam.generators[i], c))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpanSolution {
    InSpan(FpCombination),
    /// `witness` pairs to zero with every generator and nonzero with the target.
    NotInSpan {
        witness: WeightFp,
    },
}

pub fn solve_in_span(w: &WeightFp, family: &SpanFamily) -> Result<SpanSolution> {
    if w.modulus() != family.p {
        return Err(Error::ModulusMismatch {
            left: w.modulus().get(),
            right: family.p.get(),
        });
    }
    Ok(match family.system().solve(w.values()) {
        Solution::Combination(terms) => SpanSolution::InSpan(FpCombination {
            family: family.tag,
            target: w.clone(),
            terms,
        }),
        Solution::Witness(y) => SpanSolution::NotInSpan {
            witness: WeightFp::from_values(family.p, y).expect("residues"),
        },
    })
}

/// Writes a p-divisible weight as a combination of parallel-line differences.
pub fn decompose_p_divisible(w: &WeightFp) -> Result<FpCombination> {
    let report = w.is_p_divisible();
    if !report.divisible {
        return Err(Error::PreconditionViolated {
            reason: "weight is not p-divisible".into(),
            witness: report.witness,
        });
    }
    let fam = SpanFamily::get(w.modulus(), FamilyTag::ParallelDiffs);
    match solve_in_span(w, &fam)? {
        SpanSolution::InSpan(c) => Ok(c),
        SpanSolution::NotInSpan { .. } => Err(Error::precondition(
            "p-divisible weight fell outside the parallel-difference span",
        )),
    }
}

/// Rewrites `sum c(l) 1_l` over lines of one direction as
/// `sum c(l) (1_l - 1_l0)` against the anchor `l0` of that parallel class.
/// Requires `sum c(l) = 0` in `F_p`.
pub fn cylinder_type_to_diffs(p: PrimeModulus, lines: &[(Line, u32)]) -> Result<FpCombination> {
    let Some((first, _)) = lines.first() else {
        return Ok(FpCombination {
            family: FamilyTag::ParallelDiffs,
            target: WeightFp::zero(p),
            terms: vec![],
        });
    };
    if lines.iter().any(|(l, _)| l.modulus() != p) {
        return Err(Error::ModulusMismatch {
            left: p.get(),
            right: first.modulus().get(),
        });
    }
    if lines.iter().any(|(l, _)| !are_parallel(l, first)) {
        return Err(Error::precondition(
            "cylinder-type lines must share one direction",
        ));
    }
    let sum = lines.iter().fold(0, |acc, &(_, c)| p.add(acc, c % p.get()));
    if sum != 0 {
        return Err(Error::NotRepresentable { sum });
    }

    let geo = Geometry::get(p);
    let k = geo
        .directions
        .binary_search(&first.direction())
        .expect("enumerated direction");
    let anchor = geo.lines[geo.parallel_class(k).start];
    let fam = SpanFamily::get(p, FamilyTag::ParallelDiffs);

    let mut target = WeightZ::zero(p);
    let mut coeffs: BTreeMap<usize, u32> = BTreeMap::new();
    for &(l, c) in lines {
        target.add_line(&l, c as i64);
        if l == anchor {
            continue;
        }
        let idx = fam
            .index_of_key(&Generator::Diff(l, anchor).to_string())
            .expect("diff generator");
        let e = coeffs.entry(idx).or_insert(0);
        *e = p.add(*e, c % p.get());
    }
    Ok(FpCombination {
        family: FamilyTag::ParallelDiffs,
        target: target.reduce_mod_p(),
        terms: coeffs.into_iter().filter(|&(_, c)| c != 0).collect(),
    })
}

/// Certificate interchange form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FpCombinationJson {
    pub p: u32,
    pub family: FamilyTag,
    pub target: WeightJson,
    pub terms: Vec<(String, u32)>,
}

impl From<&FpCombination> for FpCombinationJson {
    fn from(c: &FpCombination) -> Self {
        let fam = SpanFamily::get(c.modulus(), c.family);
        FpCombinationJson {
            p: c.modulus().get(),
            family: c.family,
            target: WeightJson::from(&c.target),
            terms: c
                .terms
                .iter()
                .map(|&(i, k)| (fam.generators[i].to_string(), k))
                .collect(),
        }
    }
}

impl TryFrom<FpCombinationJson> for FpCombination {
    type Error = Error;
    fn try_from(j: FpCombinationJson) -> Result<Self> {
        let p = PrimeModulus::new(j.p)?;
        let target = WeightFp::try_from(j.target)?;
        if target.modulus() != p {
            return Err(Error::ModulusMismatch {
                left: p.get(),
                right: target.modulus().get(),
            });
        }
        let fam = SpanFamily::get(p, j.family);
        let mut coeffs: BTreeMap<usize, u32> = BTreeMap::new();
        for (key, c) in j.terms {
            let idx = fam.index_of_key(&key).ok_or_else(|| {
                Error::Parse(format!("terms: {key:?} is not a {} generator", j.family))
            })?;
            let e = coeffs.entry(idx).or_insert(0);
            *e = p.add(*e, c % p.get());
        }
        Ok(FpCombination {
            family: j.family,
            target,
            terms: coeffs.into_iter().filter(|&(_, c)| c != 0).collect(),
        })
    }
}
