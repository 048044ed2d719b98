use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// `Z^n + Z/d_1 + .. + Z/d_t` with explicit coordinates; the torsion
/// coordinates of a canonical element lie in `[0, d_i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FgAbelianGroup {
    free_rank: usize,
    torsion: Vec<u64>,
}

impl FgAbelianGroup {
    pub fn new(free_rank: usize, torsion: Vec<u64>) -> Result<Self> {
        if let Some(&d) = torsion.iter().find(|&&d| d < 2) {
            return Err(Error::BadTriple(alloc::format!("torsion order {d} is below 2")));
        }
        if torsion.iter().any(|&d| d > i64::MAX as u64) {
            return Err(Error::Overflow);
        }
        Ok(FgAbelianGroup { free_rank, torsion })
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[u64] {
        &self.torsion
    }

    /// Number of coordinates.
    pub fn dim(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    pub fn zero(&self) -> Vec<i64> {
        vec![0; self.dim()]
    }

    /// The standard generators `e_1, .., e_(n+t)`.
    pub fn basis(&self) -> Vec<Vec<i64>> {
        (0..self.dim())
            .map(|i| {
                let mut v = self.zero();
                v[i] = 1;
                v
            })
            .collect()
    }

    /// Rows `d_i e_(n+i)` spanning the relations.
    pub fn relations(&self) -> Vec<Vec<i64>> {
        self.torsion
            .iter()
            .enumerate()
            .map(|(i, &d)| {
                let mut v = self.zero();
                v[self.free_rank + i] = d as i64;
                v
            })
            .collect()
    }

    pub fn canonical(&self, v: &[i64]) -> Result<Vec<i64>> {
        if v.len() != self.dim() {
            return Err(Error::BadTriple(alloc::format!(
                "element has {} coordinates, expected {}",
                v.len(),
                self.dim()
            )));
        }
        let mut out = v.to_vec();
        for (i, &d) in self.torsion.iter().enumerate() {
            out[self.free_rank + i] = out[self.free_rank + i].rem_euclid(d as i64);
        }
        Ok(out)
    }

    pub fn add(&self, a: &[i64], b: &[i64]) -> Result<Vec<i64>> {
        let sum = a.iter().zip(b).map(|(x, y)| x.checked_add(*y).ok_or(Error::Overflow)).collect::<Result<Vec<_>>>()?;
        self.canonical(&sum)
    }

    pub fn neg(&self, a: &[i64]) -> Result<Vec<i64>> {
        let n = a.iter().map(|x| x.checked_neg().ok_or(Error::Overflow)).collect::<Result<Vec<_>>>()?;
        self.canonical(&n)
    }

    pub fn sub(&self, a: &[i64], b: &[i64]) -> Result<Vec<i64>> {
        self.add(a, &self.neg(b)?)
    }

    pub fn is_zero(&self, a: &[i64]) -> bool {
        self.canonical(a).is_ok_and(|c| c.iter().all(|&x| x == 0))
    }
}

/// Sublattice of `Z^n` spanned by a list of generators, kept in Hermite
/// normal form together with the coefficients that produce each row.
#[derive(Clone, Debug)]
pub struct Lattice {
    dim: usize,
    gens: usize,
    rows: Vec<Vec<i128>>,
    pivots: Vec<usize>,
    transform: Vec<Vec<i128>>,
    kernel: Vec<Vec<i128>>,
}

fn checked_axpy(dst: &mut [i128], src: &[i128], q: i128) -> Result<()> {
    for (d, s) in dst.iter_mut().zip(src) {
        *d = s.checked_mul(q).and_then(|p| d.checked_sub(p)).ok_or(Error::Overflow)?;
    }
    Ok(())
}

impl Lattice {
    pub fn from_generators(dim: usize, gens: &[Vec<i64>]) -> Result<Self> {
        let r = gens.len();
        let mut a: Vec<Vec<i128>> = Vec::with_capacity(r);
        for g in gens {
            if g.len() != dim {
                return Err(Error::BadTriple(alloc::format!("vector has {} coordinates, expected {dim}", g.len())));
            }
            a.push(g.iter().map(|&x| x as i128).collect());
        }
        let mut u: Vec<Vec<i128>> = (0..r)
            .map(|i| {
                let mut row = vec![0i128; r];
                row[i] = 1;
                row
            })
            .collect();
        let mut pivots = Vec::new();
        let mut pr = 0;
        for c in 0..dim {
            if pr == r {
                break;
            }
            loop {
                let best = (pr..r).filter(|&i| a[i][c] != 0).min_by_key(|&i| a[i][c].unsigned_abs());
                let Some(best) = best else { break };
                a.swap(pr, best);
                u.swap(pr, best);
                let mut done = true;
                for i in pr + 1..r {
                    if a[i][c] != 0 {
                        let q = a[i][c].div_euclid(a[pr][c]);
                        let (src_a, src_u) = (a[pr].clone(), u[pr].clone());
                        checked_axpy(&mut a[i], &src_a, q)?;
                        checked_axpy(&mut u[i], &src_u, q)?;
                        done &= a[i][c] == 0;
                    }
                }
                if done {
                    break;
                }
            }
            if a[pr][c] == 0 {
                continue;
            }
            if a[pr][c] < 0 {
                for x in a[pr].iter_mut().chain(u[pr].iter_mut()) {
                    *x = -*x;
                }
            }
            for i in 0..pr {
                let q = a[i][c].div_euclid(a[pr][c]);
                if q != 0 {
                    let (src_a, src_u) = (a[pr].clone(), u[pr].clone());
                    checked_axpy(&mut a[i], &src_a, q)?;
                    checked_axpy(&mut u[i], &src_u, q)?;
                }
            }
            pivots.push(c);
            pr += 1;
        }
        let kernel = u.split_off(pr);
        a.truncate(pr);
        Ok(Lattice { dim, gens: r, rows: a, pivots, transform: u, kernel })
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank() == self.dim
    }

    /// `[Z^n : lattice]`, when finite.
    pub fn index(&self) -> Result<Option<u128>> {
        if !self.is_full_rank() {
            return Ok(None);
        }
        let mut acc = 1u128;
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            acc = acc.checked_mul(row[c] as u128).ok_or(Error::Overflow)?;
        }
        Ok(Some(acc))
    }

    /// Hermite normal form rows.
    pub fn rows(&self) -> &[Vec<i128>] {
        &self.rows
    }

    /// Integer relations among the generators, as coefficient vectors.
    pub fn kernel(&self) -> &[Vec<i128>] {
        &self.kernel
    }

    /// Coefficients `c` with `v = sum c_i gens_i`, if `v` lies in the lattice.
    pub fn solve(&self, v: &[i64]) -> Result<Option<Vec<i128>>> {
        if v.len() != self.dim {
            return Err(Error::BadTriple(alloc::format!("vector has {} coordinates, expected {}", v.len(), self.dim)));
        }
        let mut rest: Vec<i128> = v.iter().map(|&x| x as i128).collect();
        let mut coeffs = vec![0i128; self.gens];
        let mut next = 0;
        for c in 0..self.dim {
            if next < self.pivots.len() && self.pivots[next] == c {
                let row = &self.rows[next];
                if rest[c] % row[c] != 0 {
                    return Ok(None);
                }
                let q = rest[c] / row[c];
                checked_axpy(&mut rest, row, q)?;
                let neg: Vec<i128> = self.transform[next].iter().map(|x| -x).collect();
                checked_axpy(&mut coeffs, &neg, q)?;
                next += 1;
            } else if rest[c] != 0 {
                return Ok(None);
            }
        }
        Ok(Some(coeffs))
    }

    pub fn contains(&self, v: &[i64]) -> Result<bool> {
        Ok(self.solve(v)?.is_some())
    }
}
