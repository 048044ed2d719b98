use alloc::vec::Vec;

use super::forest::{Forest, NodeId};
use crate::perm::Permutation;

/// An explicit depth-`L` portrait: one label per vertex of levels `0..L`,
/// in breadth-first order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Portrait {
    m: usize,
    depth: usize,
    labels: Vec<Permutation>,
}

impl Portrait {
    pub fn from_node(forest: &Forest, n: NodeId) -> Self {
        let m = forest.degree();
        let depth = forest.depth(n);
        let mut labels = Vec::new();
        let mut level = alloc::vec![n];
        for _ in 0..depth {
            let mut next = Vec::with_capacity(level.len() * m);
            for &v in &level {
                labels.push(forest.perm(v).clone());
                next.extend_from_slice(forest.children(v));
            }
            level = next;
        }
        Portrait { m, depth, labels }
    }

    /// Builds from breadth-first labels; `None` if the count is wrong.
    pub fn from_labels(m: usize, depth: usize, labels: Vec<Permutation>) -> Option<Self> {
        let expected = (0..depth).map(|t| m.pow(t as u32)).sum::<usize>();
        (labels.len() == expected && labels.iter().all(|p| p.degree() == m)).then_some(Portrait { m, depth, labels })
    }

    pub fn degree(&self) -> usize {
        self.m
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn labels(&self) -> &[Permutation] {
        &self.labels
    }

    fn index(&self, path: &[u32]) -> usize {
        let t = path.len() as u32;
        let offset = (0..t).map(|i| self.m.pow(i)).sum::<usize>();
        offset + path.iter().fold(0usize, |acc, &y| acc * self.m + y as usize)
    }

    /// Label at a vertex of level below the depth (0-indexed letters).
    pub fn label(&self, path: &[u32]) -> &Permutation {
        &self.labels[self.index(path)]
    }

    /// Image of a vertex of length at most the depth.
    pub fn image(&self, path: &[u32]) -> Vec<u32> {
        (0..path.len()).map(|i| self.label(&path[..i]).apply(path[i] as usize) as u32).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.labels.iter().all(Permutation::is_identity)
    }

    /// Label-wise wreath composition: first `self`, then `other`.
    pub fn then(&self, other: &Portrait) -> Portrait {
        assert_eq!((self.m, self.depth), (other.m, other.depth));
        let mut labels = Vec::with_capacity(self.labels.len());
        let mut path: Vec<u32> = Vec::new();
        for t in 0..self.depth {
            for v in 0..self.m.pow(t as u32) {
                path.clear();
                let mut rest = v;
                for _ in 0..t {
                    path.push((rest % self.m) as u32);
                    rest /= self.m;
                }
                path.reverse();
                let moved = self.image(&path);
                labels.push(self.label(&path).then(other.label(&moved)));
            }
        }
        Portrait { m: self.m, depth: self.depth, labels }
    }

    /// Portrait induced on the subtree of words over `letters` (0-indexed,
    /// sorted), relabelled as `0..letters.len()`. `None` if some label on
    /// that subtree does not preserve `letters`.
    pub fn restrict(&self, letters: &[u32]) -> Option<Portrait> {
        let k = letters.len();
        let pos = |y: usize| letters.iter().position(|&x| x as usize == y);
        let mut labels = Vec::new();
        let mut path: Vec<u32> = Vec::new();
        for t in 0..self.depth {
            for v in 0..k.pow(t as u32) {
                path.clear();
                let mut rest = v;
                for _ in 0..t {
                    path.push(letters[rest % k]);
                    rest /= k;
                }
                path.reverse();
                let label = self.label(&path);
                let images = letters
                    .iter()
                    .map(|&y| pos(label.apply(y as usize)).map(|i| i as u32))
                    .collect::<Option<Vec<u32>>>()?;
                labels.push(Permutation::from_images(images).ok()?);
            }
        }
        Some(Portrait { m: k, depth: self.depth, labels })
    }
}
