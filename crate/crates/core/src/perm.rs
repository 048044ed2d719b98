//! Permutations of `{1..m}` acting on the right.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};

/// A permutation of `m` points, stored 0-indexed as an image table.
///
/// Composition follows right actions: in `a.then(b)` the point moves by `a`
/// first, so `i^(ab) = (i^a)^b`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(m: usize) -> Self {
        Permutation { images: (0..m as u32).collect() }
    }

    /// Builds from a 0-indexed image table.
    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut seen = alloc::vec![false; n];
        for &i in &images {
            let i = i as usize;
            if i >= n || seen[i] {
                return Err(Error::Malformed("image table is not a bijection".into()));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    /// Builds from 1-indexed cycles, e.g. `[[1, 3], [2, 4]]` for `(1 3)(2 4)`.
    pub fn from_cycles(m: usize, cycles: &[Vec<u32>]) -> Result<Self> {
        let mut images: Vec<u32> = (0..m as u32).collect();
        let mut used = alloc::vec![false; m];
        for cycle in cycles {
            for (k, &p) in cycle.iter().enumerate() {
                if p == 0 || p as usize > m {
                    return Err(Error::Malformed(alloc::format!("point {p} outside 1..={m}")));
                }
                if used[p as usize - 1] {
                    return Err(Error::Malformed(alloc::format!("point {p} repeated in cycles")));
                }
                used[p as usize - 1] = true;
                let next = cycle[(k + 1) % cycle.len()];
                images[p as usize - 1] = next - 1;
            }
        }
        Ok(Permutation { images })
    }

    /// The cycle `(1 2 ... m)`.
    pub fn full_cycle(m: usize) -> Self {
        Permutation { images: (0..m as u32).map(|i| (i + 1) % m as u32).collect() }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    /// Image of the 0-indexed point `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| i as u32 == v)
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Self) -> Self {
        Permutation { images: self.images.iter().map(|&i| other.images[i as usize]).collect() }
    }

    pub fn inverse(&self) -> Self {
        let mut images = alloc::vec![0u32; self.images.len()];
        for (i, &v) in self.images.iter().enumerate() {
            images[v as usize] = i as u32;
        }
        Permutation { images }
    }

    pub fn pow(&self, n: i64) -> Self {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = Self::identity(self.degree());
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.then(&b);
            }
            b = b.then(&b);
            e >>= 1;
        }
        acc
    }

    /// 1-indexed cycles of length at least two, each starting at its least point.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let mut seen = alloc::vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] || self.images[start] as usize == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cycle.push(i as u32 + 1);
                i = self.images[i] as usize;
            }
            out.push(cycle);
        }
        out
    }

    pub fn order(&self) -> u64 {
        self.cycles().iter().fold(1u64, |acc, c| acc.lcm(&(c.len() as u64)))
    }

    /// Orbits of the group generated by `perms` on `m` points, as sorted 1-indexed sets.
    pub fn orbits(m: usize, perms: &[Permutation]) -> Vec<Vec<u32>> {
        let mut label: Vec<Option<usize>> = alloc::vec![None; m];
        let mut out: Vec<Vec<u32>> = Vec::new();
        for start in 0..m {
            if label[start].is_some() {
                continue;
            }
            let id = out.len();
            let mut stack = alloc::vec![start];
            label[start] = Some(id);
            let mut orbit = Vec::new();
            while let Some(i) = stack.pop() {
                orbit.push(i as u32 + 1);
                for p in perms {
                    let j = p.apply(i);
                    if label[j].is_none() {
                        label[j] = Some(id);
                        stack.push(j);
                    }
                }
            }
            orbit.sort_unstable();
            out.push(orbit);
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            let parts: Vec<String> = c.iter().map(|p| alloc::format!("{p}")).collect();
            write!(f, "({})", parts.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn cycle_square() {
        let s = Permutation::full_cycle(3);
        let sq = s.then(&s);
        assert_eq!(sq, Permutation::from_cycles(3, &[vec![1, 3, 2]]).unwrap());
    }

    #[test]
    fn right_action_order() {
        // (1 2) then (2 3): 1 -> 2 -> 3
        let a = Permutation::from_cycles(3, &[vec![1, 2]]).unwrap();
        let b = Permutation::from_cycles(3, &[vec![2, 3]]).unwrap();
        assert_eq!(a.then(&b).apply(0), 2);
    }

    #[test]
    fn display_and_order() {
        let p = Permutation::from_cycles(5, &[vec![1, 2], vec![3, 4, 5]]).unwrap();
        assert_eq!(alloc::format!("{p}"), "(1 2)(3 4 5)");
        assert_eq!(p.order(), 6);
        assert_eq!(p.pow(6), Permutation::identity(5));
        assert_eq!(p.pow(-1), p.inverse());
    }

    #[test]
    fn bad_cycles() {
        assert!(Permutation::from_cycles(3, &[vec![1, 4]]).is_err());
        assert!(Permutation::from_cycles(3, &[vec![1, 2], vec![2, 3]]).is_err());
    }

    #[test]
    fn orbit_partition() {
        let p = Permutation::from_cycles(4, &[vec![1, 3], vec![2, 4]]).unwrap();
        assert_eq!(Permutation::orbits(4, &[p]), vec![vec![1, 3], vec![2, 4]]);
    }
}
