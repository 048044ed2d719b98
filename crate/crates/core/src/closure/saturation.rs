use alloc::collections::VecDeque;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use hashbrown::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::tree::{AutExpr, Context, Engine, NodeId, System};

/// Default cap on the number of distinct states.
pub const DEFAULT_STATE_CAP: usize = 10_000;

/// Cap on words examined when looking for recurrence witnesses.
const WITNESS_SEARCH_CAP: usize = 20_000;

/// One element of a state-closed set, with its first-level decomposition
/// written as indices into the same set.
#[derive(Clone, Debug)]
pub struct ClosureElement {
    pub expr: AutExpr,
    pub node: NodeId,
    pub root: Permutation,
    pub states: Vec<usize>,
    /// Length of the shortest vertex word reaching this state from an input.
    pub distance: usize,
}

/// Result of saturating a set of automorphisms under taking states.
///
/// Elements are identified by their portraits at the report depth, so the
/// set is the state closure as seen to that depth.
#[derive(Clone, Debug)]
pub struct ClosureReport {
    pub depth: usize,
    /// All states, inputs first, in discovery order; includes `e` when it occurs.
    pub elements: Vec<ClosureElement>,
    /// Indices of the input words.
    pub inputs: Vec<usize>,
    /// Commutation of every pair to the report depth.
    pub abelian: bool,
    /// Orbits of `P(G)` on the 1-indexed alphabet.
    pub orbits: Vec<Vec<u32>>,
    pub transitive: bool,
    /// For every non-identity element `g`, some short word of the group fixes
    /// the first level and has first state `g`.
    pub recurrent_witnessed: bool,
    /// The digit precision covers the depth plus the deepest state distance.
    pub precision_margin: bool,
}

impl ClosureReport {
    /// Indices of the non-identity elements: the generating set of the closure.
    pub fn generators(&self) -> Vec<usize> {
        (0..self.elements.len()).filter(|&i| !self.is_identity(i)).collect()
    }

    pub fn is_identity(&self, i: usize) -> bool {
        let e = &self.elements[i];
        e.root.is_identity() && e.states.iter().all(|&s| s == i)
    }

    /// First-level permutations of the elements, deduplicated.
    pub fn first_level_generators(&self) -> Vec<Permutation> {
        let mut seen = HashSet::new();
        self.elements.iter().filter(|e| seen.insert(e.root.clone())).map(|e| e.root.clone()).collect()
    }

    /// Element names used by [`Self::as_system`].
    pub fn name(i: usize) -> String {
        alloc::format!("s{i}")
    }

    /// A self-contained system with one generator per element, whose entries
    /// point at the elements' states.
    pub fn as_system(&self, ctx: Context) -> Result<System> {
        let mut sys = System::new(ctx);
        let ids: Vec<_> = (0..self.elements.len()).map(|i| sys.declare(&Self::name(i))).collect::<Result<_>>()?;
        for (i, e) in self.elements.iter().enumerate() {
            let entries = e.states.iter().map(|&s| AutExpr::gen(ids[s])).collect();
            sys.define(ids[i], e.root.clone(), Some(entries), None)?;
        }
        Ok(sys)
    }
}

/// Saturates `inputs` under taking first-level states, to depth `L`.
///
/// States are normalized words; when the engine has abelian normalization on,
/// powers of generators merge and the words stay short.
pub fn state_closure(engine: &mut Engine, inputs: &[AutExpr], cap: usize) -> Result<ClosureReport> {
    let ctx = engine.context();
    let depth = ctx.l;
    let mut index: HashMap<NodeId, usize> = HashMap::new();
    let mut elements: Vec<ClosureElement> = Vec::new();
    let mut queue = VecDeque::new();
    let mut input_ids = Vec::new();
    for w in inputs {
        let w = engine.normalize(w);
        let node = engine.node(&w, depth)?;
        let i = *index.entry(node).or_insert_with(|| {
            elements.push(ClosureElement {
                expr: w.clone(),
                node,
                root: Permutation::identity(0),
                states: vec![],
                distance: 0,
            });
            queue.push_back(elements.len() - 1);
            elements.len() - 1
        });
        input_ids.push(i);
    }
    while let Some(i) = queue.pop_front() {
        let (root, states) = engine.decompose(&elements[i].expr)?;
        let mut ids = Vec::with_capacity(states.len());
        for s in states {
            let node = engine.node(&s, depth)?;
            let j = match index.get(&node) {
                Some(&j) => j,
                None => {
                    if elements.len() >= cap {
                        return Err(Error::SaturationOverflow { cap });
                    }
                    let distance = elements[i].distance + 1;
                    elements.push(ClosureElement {
                        expr: s,
                        node,
                        root: Permutation::identity(0),
                        states: vec![],
                        distance,
                    });
                    index.insert(node, elements.len() - 1);
                    queue.push_back(elements.len() - 1);
                    elements.len() - 1
                }
            };
            ids.push(j);
        }
        elements[i].root = root;
        elements[i].states = ids;
    }

    let known: Vec<bool> = elements.iter().map(|e| engine.is_commuting_word(&e.expr)).collect();
    let mut abelian = true;
    'outer: for a in 0..elements.len() {
        for b in 0..a {
            if known[a] && known[b] {
                continue;
            }
            let (x, y) = (elements[a].node, elements[b].node);
            let f = engine.forest_mut();
            if f.mul(x, y) != f.mul(y, x) {
                abelian = false;
                break 'outer;
            }
        }
    }
    let roots: Vec<Permutation> = elements.iter().map(|e| e.root.clone()).collect();
    let orbits = Permutation::orbits(ctx.m as usize, &roots);
    let transitive = orbits.len() == 1;
    let max_distance = elements.iter().map(|e| e.distance).max().unwrap_or(0);
    let mut report = ClosureReport {
        depth,
        elements,
        inputs: input_ids,
        abelian,
        orbits,
        transitive,
        recurrent_witnessed: false,
        precision_margin: ctx.k >= depth + max_distance,
    };
    report.recurrent_witnessed = transitive && witness_recurrence(engine, &report);
    Ok(report)
}

/// Breadth-first search over products of elements and their inverses (up to
/// length `m + 1`) for first-level stabilizing words whose first state is
/// each non-identity element in turn.
fn witness_recurrence(engine: &mut Engine, report: &ClosureReport) -> bool {
    let ctx = engine.context();
    let depth = report.depth;
    let below: HashMap<NodeId, usize> = report
        .generators()
        .into_iter()
        .map(|i| {
            let n = report.elements[i].node;
            (engine.forest_mut().truncate(n, depth - 1), i)
        })
        .collect();
    let mut missing: HashSet<usize> = below.values().copied().collect();
    if missing.is_empty() {
        return true;
    }
    let f = engine.forest_mut();
    let mut letters: Vec<NodeId> = Vec::new();
    for e in &report.elements {
        letters.push(e.node);
        letters.push(f.inv(e.node));
    }
    let mut seen: HashSet<NodeId> = letters.iter().copied().collect();
    let mut layer = letters.clone();
    let mut products = 0usize;
    for _ in 0..=ctx.m {
        for &w in &layer {
            if f.perm(w).is_identity() {
                if let Some(i) = below.get(&f.child(w, 0)) {
                    missing.remove(i);
                }
            }
        }
        if missing.is_empty() {
            return true;
        }
        let mut next = Vec::new();
        for &w in &layer {
            for &g in &letters {
                products += 1;
                if products > WITNESS_SEARCH_CAP {
                    return false;
                }
                let p = f.mul(w, g);
                if seen.insert(p) {
                    next.push(p);
                }
            }
        }
        layer = next;
    }
    missing.is_empty()
}
