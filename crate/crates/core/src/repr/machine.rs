use alloc::collections::VecDeque;
use alloc::string::String;
use alloc::vec::Vec;

use hashbrown::HashMap;

use super::group::{FgAbelianGroup, Lattice};
use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::tree::{AutExpr, Forest, GenId, NodeId, System};

/// A homomorphism `f: H -> G` from a finite-index subgroup `H` of a finitely
/// generated abelian group `G`.
#[derive(Clone, Debug)]
pub struct VirtualEndo {
    group: FgAbelianGroup,
    h_gens: Vec<Vec<i64>>,
    f_images: Vec<Vec<i64>>,
    lattice: Lattice,
    index: usize,
}

impl VirtualEndo {
    pub fn new(group: FgAbelianGroup, h_gens: Vec<Vec<i64>>, f_images: Vec<Vec<i64>>) -> Result<Self> {
        if h_gens.len() != f_images.len() {
            return Err(Error::BadTriple(alloc::format!(
                "{} generators of H but {} images",
                h_gens.len(),
                f_images.len()
            )));
        }
        let h_gens = h_gens.iter().map(|v| group.canonical(v)).collect::<Result<Vec<_>>>()?;
        let f_images = f_images.iter().map(|v| group.canonical(v)).collect::<Result<Vec<_>>>()?;
        let mut spanning = h_gens.clone();
        spanning.extend(group.relations());
        let lattice = Lattice::from_generators(group.dim(), &spanning)?;
        let index = lattice.index()?.ok_or_else(|| Error::BadTriple("H has infinite index in G".into()))?;
        if index < 2 {
            return Err(Error::BadTriple("the index of H must be at least 2".into()));
        }
        let index = usize::try_from(index).map_err(|_| Error::Overflow)?;
        let endo = VirtualEndo { group, h_gens, f_images, lattice, index };
        for rel in endo.lattice.kernel() {
            let image = endo.combine(&rel[..endo.h_gens.len()])?;
            if !endo.group.is_zero(&image) {
                return Err(Error::IllDefined);
            }
        }
        Ok(endo)
    }

    pub fn group(&self) -> &FgAbelianGroup {
        &self.group
    }

    pub fn h_generators(&self) -> &[Vec<i64>] {
        &self.h_gens
    }

    pub fn f_images(&self) -> &[Vec<i64>] {
        &self.f_images
    }

    /// `[G : H]`.
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn contains(&self, v: &[i64]) -> Result<bool> {
        self.lattice.contains(v)
    }

    fn combine(&self, coeffs: &[i128]) -> Result<Vec<i64>> {
        let mut acc: Vec<i128> = alloc::vec![0; self.group.dim()];
        for (c, img) in coeffs.iter().zip(&self.f_images) {
            for (a, &x) in acc.iter_mut().zip(img) {
                *a = c.checked_mul(x as i128).and_then(|p| a.checked_add(p)).ok_or(Error::Overflow)?;
            }
        }
        let tors = self.group.torsion();
        let n = self.group.free_rank();
        for (i, &d) in tors.iter().enumerate() {
            acc[n + i] = acc[n + i].rem_euclid(d as i128);
        }
        acc.iter().map(|&x| i64::try_from(x).map_err(|_| Error::Overflow)).collect()
    }

    /// `f(h)`; fails when `h` is outside `H`.
    pub fn apply(&self, h: &[i64]) -> Result<Vec<i64>> {
        let coeffs = self.lattice.solve(h)?.ok_or_else(|| Error::BadTriple(alloc::format!("{h:?} is not in H")))?;
        self.combine(&coeffs[..self.h_gens.len()])
    }
}

/// A right transversal `x_1, .., x_m` of `H` in `G`.
#[derive(Clone, Debug)]
pub struct Transversal {
    reps: Vec<Vec<i64>>,
}

impl Transversal {
    pub fn new(endo: &VirtualEndo, reps: Vec<Vec<i64>>) -> Result<Self> {
        if reps.len() != endo.index() {
            return Err(Error::BadTriple(alloc::format!(
                "transversal has {} elements, the index is {}",
                reps.len(),
                endo.index()
            )));
        }
        let g = endo.group();
        let reps = reps.iter().map(|v| g.canonical(v)).collect::<Result<Vec<_>>>()?;
        for i in 0..reps.len() {
            for j in 0..i {
                if endo.contains(&g.sub(&reps[i], &reps[j])?)? {
                    return Err(Error::BadTriple(alloc::format!(
                        "representatives {} and {} lie in the same coset",
                        j + 1,
                        i + 1
                    )));
                }
            }
        }
        Ok(Transversal { reps })
    }

    pub fn reps(&self) -> &[Vec<i64>] {
        &self.reps
    }

    /// 0-indexed `i` with `g` in `H x_i`.
    pub fn coset_of(&self, endo: &VirtualEndo, g: &[i64]) -> Result<usize> {
        let grp = endo.group();
        for (i, x) in self.reps.iter().enumerate() {
            if endo.contains(&grp.sub(g, x)?)? {
                return Ok(i);
            }
        }
        Err(Error::BadTriple("transversal misses a coset".into()))
    }
}

/// `i -> j` where `H x_i g = H x_j`.
pub fn coset_permutation(endo: &VirtualEndo, t: &Transversal, g: &[i64]) -> Result<Permutation> {
    let grp = endo.group();
    let images =
        t.reps().iter().map(|x| t.coset_of(endo, &grp.add(x, g)?).map(|j| j as u32)).collect::<Result<Vec<_>>>()?;
    Permutation::from_images(images)
}

type Transition = (Permutation, Vec<Vec<i64>>);

/// The tree representation `g -> g^phi = ((x_i g x_(i g^pi)^-1)^(f phi))_i g^pi`
/// as a machine whose states are elements of `G`.
#[derive(Clone, Debug)]
pub struct SelfSimilarMachine {
    endo: VirtualEndo,
    transversal: Transversal,
    memo: HashMap<Vec<i64>, Transition>,
    nodes: HashMap<(Vec<i64>, usize), NodeId>,
}

/// States of a machine written out as generators of a [`System`].
#[derive(Clone, Debug)]
pub struct Materialized {
    pub ids: HashMap<Vec<i64>, GenId>,
    pub seeds: Vec<GenId>,
    /// `true` when every state reachable from the seeds was expanded, so the
    /// definitions are complete at every depth.
    pub closed: bool,
}

pub fn phi_rep(endo: &VirtualEndo, t: &Transversal) -> SelfSimilarMachine {
    SelfSimilarMachine::new(endo.clone(), t.clone())
}

impl SelfSimilarMachine {
    pub fn new(endo: VirtualEndo, transversal: Transversal) -> Self {
        SelfSimilarMachine { endo, transversal, memo: HashMap::new(), nodes: HashMap::new() }
    }

    pub fn endo(&self) -> &VirtualEndo {
        &self.endo
    }

    pub fn transversal(&self) -> &Transversal {
        &self.transversal
    }

    pub fn degree(&self) -> usize {
        self.endo.index()
    }

    /// Root permutation and first-level states of `g^phi`.
    pub fn transition(&mut self, g: &[i64]) -> Result<Transition> {
        let g = self.endo.group().canonical(g)?;
        if let Some(t) = self.memo.get(&g) {
            return Ok(t.clone());
        }
        let root = coset_permutation(&self.endo, &self.transversal, &g)?;
        let grp = self.endo.group();
        let reps = self.transversal.reps();
        let states = (0..reps.len())
            .map(|i| {
                let h = grp.sub(&grp.add(&reps[i], &g)?, &reps[root.apply(i)])?;
                self.endo.apply(&h)
            })
            .collect::<Result<Vec<_>>>()?;
        self.memo.insert(g, (root.clone(), states.clone()));
        Ok((root, states))
    }

    /// Portrait of `g^phi` to `depth`.
    pub fn node(&mut self, forest: &mut Forest, g: &[i64], depth: usize) -> Result<NodeId> {
        if depth == 0 {
            return Ok(forest.identity(0));
        }
        let g = self.endo.group().canonical(g)?;
        if let Some(&n) = self.nodes.get(&(g.clone(), depth)) {
            return Ok(n);
        }
        let (root, states) = self.transition(&g)?;
        let children = states.iter().map(|s| self.node(forest, s, depth - 1)).collect::<Result<Vec<_>>>()?;
        let n = forest.intern(&root, children);
        self.nodes.insert((g, depth), n);
        Ok(n)
    }

    /// Non-trivial states within `depth - 1` steps of the seeds whose images
    /// are trivial to the remaining depth: elements of the kernel as far as
    /// the truncation can see.
    pub fn kernel_witnesses(
        &mut self,
        forest: &mut Forest,
        seeds: &[Vec<i64>],
        depth: usize,
        cap: usize,
    ) -> Result<Vec<Vec<i64>>> {
        let reach = self.reachable(seeds, depth, cap)?;
        let grp = self.endo.group().clone();
        let mut out = Vec::new();
        for (g, dist) in reach {
            if !grp.is_zero(&g) {
                let n = self.node(forest, &g, depth - dist)?;
                if forest.is_identity(n) {
                    out.push(g);
                }
            }
        }
        out.sort();
        Ok(out)
    }

    /// States reachable from the seeds with their distances, breadth first,
    /// expanding only states closer than `depth`.
    fn reachable(&mut self, seeds: &[Vec<i64>], depth: usize, cap: usize) -> Result<Vec<(Vec<i64>, usize)>> {
        let grp = self.endo.group().clone();
        let mut dist: HashMap<Vec<i64>, usize> = HashMap::new();
        let mut order = Vec::new();
        let mut queue = VecDeque::new();
        for s in seeds {
            let s = grp.canonical(s)?;
            if !dist.contains_key(&s) {
                dist.insert(s.clone(), 0);
                order.push(s.clone());
                queue.push_back(s);
            }
        }
        while let Some(g) = queue.pop_front() {
            let d = dist[&g];
            if d >= depth {
                continue;
            }
            let (_, states) = self.transition(&g)?;
            for s in states {
                if !dist.contains_key(&s) {
                    if dist.len() >= cap {
                        return Err(Error::CapExceeded { what: "machine states", cap });
                    }
                    dist.insert(s.clone(), d + 1);
                    order.push(s.clone());
                    queue.push_back(s);
                }
            }
        }
        Ok(order
            .into_iter()
            .map(|g| {
                let d = dist[&g];
                (g, d)
            })
            .collect())
    }

    /// Declares one generator per state reachable from the seeds within
    /// `depth` steps, named `prefix` followed by a counter. A state at
    /// distance `d` is valid to depth `depth - d`; when the reachable set is
    /// closed the definitions are complete.
    pub fn materialize(
        &mut self,
        system: &mut System,
        prefix: &str,
        seeds: &[Vec<i64>],
        depth: usize,
        cap: usize,
    ) -> Result<Materialized> {
        if system.context().m as usize != self.degree() {
            return Err(Error::ContextMismatch { what: "tree degree and index of H" });
        }
        let reach = self.reachable(seeds, depth, cap)?;
        let mut ids = HashMap::new();
        for (i, (g, _)) in reach.iter().enumerate() {
            let name: String = alloc::format!("{prefix}{i}");
            ids.insert(g.clone(), system.declare(&name)?);
        }
        let mut closed = true;
        for (g, d) in &reach {
            if *d >= depth {
                let (_, states) = self.transition(g)?;
                closed &= states.iter().all(|s| ids.contains_key(s));
            }
        }
        for (g, d) in &reach {
            let (root, states) = self.transition(g)?;
            let entries: Option<Vec<AutExpr>> = states.iter().map(|s| ids.get(s).map(|&id| AutExpr::gen(id))).collect();
            let valid = if closed { None } else { Some(depth - d) };
            let entries = if closed || *d < depth { entries } else { None };
            system.define(ids[g], root, entries, valid)?;
        }
        let grp = self.endo.group();
        let seeds = seeds.iter().map(|s| Ok(ids[&grp.canonical(s)?])).collect::<Result<Vec<_>>>()?;
        Ok(Materialized { ids, seeds, closed })
    }
}
