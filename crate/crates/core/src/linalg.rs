//! Gaussian elimination over `F_p` with a recorded transform.
//!
//! Given generators `g_1..g_m` in `F_p^n`, the system `G c = w` (columns of
//! `G` are the generators) is reduced once to `T G = R` with `R` in reduced
//! row echelon form and `T` invertible. After that, any right-hand side is
//! solved by one product `T w`: the first `rank` entries are the pivot
//! coefficients and any nonzero entry past `rank` exposes a row `y` of `T`
//! with `y^T G = 0` and `y . w != 0`.

use crate::field::PrimeModulus;

#[derive(Debug, Clone)]
pub struct EchelonSystem {
    p: PrimeModulus,
    n: usize,
    rank: usize,
    /// Generator index of the pivot in row `i < rank`.
    pivots: Vec<usize>,
    /// Row `i` of `T`.
    transform: Vec<Vec<u32>>,
}

/// Outcome of solving against an [`EchelonSystem`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solution {
    /// `(generator index, coefficient)` pairs with nonzero coefficients,
    /// ordered by generator index.
    Combination(Vec<(usize, u32)>),
    /// A functional vanishing on every generator but not on the target.
    Witness(Vec<u32>),
}

impl EchelonSystem {
    /// `generators[j]` is column `j`; every generator has length `n`.
    pub fn new(p: PrimeModulus, n: usize, generators: &[Vec<u32>]) -> Self {
        let m = generators.len();
        let q = p.get() as u64;
        let width = m + n;
        // Row r = point r: generator entries followed by the identity block.
        let mut rows: Vec<Vec<u32>> = (0..n)
            .map(|r| {
                let mut row = Vec::with_capacity(width);
                row.extend(generators.iter().map(|g| g[r]));
                row.extend((0..n).map(|c| u32::from(c == r)));
                row
            })
            .collect();

        let mut pivots = Vec::new();
        let mut cur = 0;
        for col in 0..m {
            if cur == n {
                break;
            }
            let Some(found) = (cur..n).find(|&r| rows[r][col] != 0) else {
                continue;
            };
            rows.swap(cur, found);
            let inv = p.inv(rows[cur][col]).expect("nonzero pivot") as u64;
            for v in rows[cur][col..].iter_mut() {
                *v = (*v as u64 * inv % q) as u32;
            }
            // The pivot row is zero left of `col`.
            let pivot_row = std::mem::take(&mut rows[cur]);
            for (r, row) in rows.iter_mut().enumerate() {
                if r == cur || row[col] == 0 {
                    continue;
                }
                let f = q - row[col] as u64;
                for (v, &pv) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                    if pv != 0 {
                        *v = ((*v as u64 + f * pv as u64) % q) as u32;
                    }
                }
            }
            rows[cur] = pivot_row;
            pivots.push(col);
            cur += 1;
        }

        let rank = pivots.len();
        let transform = rows.into_iter().map(|row| row[m..].to_vec()).collect();
        EchelonSystem {
            p,
            n,
            rank,
            pivots,
            transform,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn solve(&self, target: &[u32]) -> Solution {
        assert_eq!(target.len(), self.n, "target length");
        let p = self.p;
        let q = p.get() as u64;
        let tw: Vec<u32> = self
            .transform
            .iter()
            .map(|row| {
                let s = row
                    .iter()
                    .zip(target)
                    .fold(0u64, |acc, (&a, &b)| (acc + a as u64 * b as u64) % q);
                s as u32
            })
            .collect();
        if let Some(bad) = (self.rank..self.n).find(|&i| tw[i] != 0) {
            return Solution::Witness(self.transform[bad].clone());
        }
        let mut terms: Vec<(usize, u32)> = self
            .pivots
            .iter()
            .zip(&tw)
            .filter(|(_, &c)| c != 0)
            .map(|(&g, &c)| (g, c))
            .collect();
        terms.sort_unstable();
        Solution::Combination(terms)
    }
}
