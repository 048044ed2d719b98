use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashMap;
use num_bigint::BigUint;

use crate::perm::Permutation;

/// Handle of an interned truncated portrait. Equal handles mean equal portraits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(u32);

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Node {
    depth: u32,
    perm: u32,
    children: Box<[NodeId]>,
}

/// Hash-consed store of depth-truncated portraits.
///
/// A node of depth `d` is a root permutation with `m` children of depth
/// `d - 1`; depth 0 is the single empty portrait. Structural sharing makes
/// equality a handle comparison and lets products and inverses be memoized
/// per pair of handles.
#[derive(Debug)]
pub struct Forest {
    m: usize,
    perms: Vec<Permutation>,
    perm_ids: HashMap<Permutation, u32>,
    nodes: Vec<Node>,
    index: HashMap<Node, NodeId>,
    identities: Vec<NodeId>,
    mul_memo: HashMap<(NodeId, NodeId), NodeId>,
    inv_memo: HashMap<NodeId, NodeId>,
    diag_memo: HashMap<NodeId, NodeId>,
    trunc_memo: HashMap<(NodeId, u32), NodeId>,
}

impl Forest {
    pub fn new(m: usize) -> Self {
        let mut f = Forest {
            m,
            perms: Vec::new(),
            perm_ids: HashMap::new(),
            nodes: Vec::new(),
            index: HashMap::new(),
            identities: Vec::new(),
            mul_memo: HashMap::new(),
            inv_memo: HashMap::new(),
            diag_memo: HashMap::new(),
            trunc_memo: HashMap::new(),
        };
        let id = f.perm_id(&Permutation::identity(m));
        let leaf = Node { depth: 0, perm: id, children: Box::new([]) };
        f.nodes.push(leaf.clone());
        f.index.insert(leaf, NodeId(0));
        f.identities.push(NodeId(0));
        f
    }

    pub fn degree(&self) -> usize {
        self.m
    }

    /// Number of interned nodes.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn perm_id(&mut self, p: &Permutation) -> u32 {
        if let Some(&id) = self.perm_ids.get(p) {
            return id;
        }
        let id = self.perms.len() as u32;
        self.perms.push(p.clone());
        self.perm_ids.insert(p.clone(), id);
        id
    }

    fn node(&self, n: NodeId) -> &Node {
        &self.nodes[n.0 as usize]
    }

    pub fn depth(&self, n: NodeId) -> usize {
        self.node(n).depth as usize
    }

    /// Root label (the identity for depth 0).
    pub fn perm(&self, n: NodeId) -> &Permutation {
        &self.perms[self.node(n).perm as usize]
    }

    pub fn children(&self, n: NodeId) -> &[NodeId] {
        &self.node(n).children
    }

    /// Subtree below the 0-indexed letter `y`.
    pub fn child(&self, n: NodeId, y: usize) -> NodeId {
        self.node(n).children[y]
    }

    pub fn identity(&mut self, depth: usize) -> NodeId {
        while self.identities.len() <= depth {
            let below = *self.identities.last().unwrap();
            let id = self.perm_id(&Permutation::identity(self.m));
            let n = self.intern_raw(id, vec![below; self.m].into_boxed_slice());
            self.identities.push(n);
        }
        self.identities[depth]
    }

    pub fn is_identity(&mut self, n: NodeId) -> bool {
        let d = self.depth(n);
        self.identity(d) == n
    }

    fn intern_raw(&mut self, perm: u32, children: Box<[NodeId]>) -> NodeId {
        let depth = children.first().map_or(0, |c| self.depth(*c) as u32 + 1);
        let node = Node { depth, perm, children };
        if let Some(&id) = self.index.get(&node) {
            return id;
        }
        let id = NodeId(self.nodes.len() as u32);
        self.nodes.push(node.clone());
        self.index.insert(node, id);
        id
    }

    /// Node with the given root label and subtrees, which must share a depth.
    pub fn intern(&mut self, perm: &Permutation, children: Vec<NodeId>) -> NodeId {
        assert_eq!(children.len(), self.m, "one child per letter");
        debug_assert!(children.windows(2).all(|w| self.depth(w[0]) == self.depth(w[1])));
        let p = self.perm_id(perm);
        self.intern_raw(p, children.into_boxed_slice())
    }

    /// Rooted automorphism: `perm` at the root, identity below, truncated to `depth`.
    pub fn rooted(&mut self, perm: &Permutation, depth: usize) -> NodeId {
        if depth == 0 {
            return NodeId(0);
        }
        let below = self.identity(depth - 1);
        self.intern(perm, vec![below; self.m])
    }

    /// `a b`: first `a`, then `b`.
    pub fn mul(&mut self, a: NodeId, b: NodeId) -> NodeId {
        debug_assert_eq!(self.depth(a), self.depth(b));
        if self.depth(a) == 0 {
            return a;
        }
        if self.is_identity(a) {
            return b;
        }
        if self.is_identity(b) {
            return a;
        }
        if let Some(&r) = self.mul_memo.get(&(a, b)) {
            return r;
        }
        let pa = self.perm(a).clone();
        let pb = self.perm(b).clone();
        let children: Vec<NodeId> = (0..self.m)
            .map(|y| {
                let ca = self.child(a, y);
                let cb = self.child(b, pa.apply(y));
                self.mul(ca, cb)
            })
            .collect();
        let r = self.intern(&pa.then(&pb), children);
        self.mul_memo.insert((a, b), r);
        r
    }

    pub fn inv(&mut self, a: NodeId) -> NodeId {
        if self.is_identity(a) {
            return a;
        }
        if let Some(&r) = self.inv_memo.get(&a) {
            return r;
        }
        let pinv = self.perm(a).inverse();
        let children: Vec<NodeId> = (0..self.m)
            .map(|y| {
                let c = self.child(a, pinv.apply(y));
                self.inv(c)
            })
            .collect();
        let r = self.intern(&pinv, children);
        self.inv_memo.insert(a, r);
        self.inv_memo.insert(r, a);
        r
    }

    /// `a^(1) = (a, .., a)`, one level deeper than `a`.
    pub fn diag(&mut self, a: NodeId) -> NodeId {
        if let Some(&r) = self.diag_memo.get(&a) {
            return r;
        }
        let id = Permutation::identity(self.m);
        let r = self.intern(&id, vec![a; self.m]);
        self.diag_memo.insert(a, r);
        r
    }

    /// The diagonal applied `s` times.
    pub fn diag_pow(&mut self, a: NodeId, s: usize) -> NodeId {
        (0..s).fold(a, |acc, _| self.diag(acc))
    }

    /// Cuts a portrait down to `depth`.
    pub fn truncate(&mut self, a: NodeId, depth: usize) -> NodeId {
        let d = self.depth(a);
        assert!(depth <= d, "cannot truncate upwards");
        if depth == d {
            return a;
        }
        if depth == 0 {
            return NodeId(0);
        }
        if let Some(&r) = self.trunc_memo.get(&(a, depth as u32)) {
            return r;
        }
        let p = self.perm(a).clone();
        let children: Vec<NodeId> = (0..self.m)
            .map(|y| {
                let c = self.child(a, y);
                self.truncate(c, depth - 1)
            })
            .collect();
        let r = self.intern(&p, children);
        self.trunc_memo.insert((a, depth as u32), r);
        r
    }

    pub fn pow_u(&mut self, a: NodeId, e: &BigUint) -> NodeId {
        let d = self.depth(a);
        let mut acc = self.identity(d);
        let bits = e.bits();
        for i in (0..bits).rev() {
            acc = self.mul(acc, acc);
            if e.bit(i) {
                acc = self.mul(acc, a);
            }
        }
        acc
    }

    pub fn pow_i(&mut self, a: NodeId, e: i64) -> NodeId {
        let base = if e < 0 { self.inv(a) } else { a };
        self.pow_u(base, &BigUint::from(e.unsigned_abs()))
    }

    /// Label at the vertex reached by the 0-indexed letters `path`.
    pub fn label_at(&self, a: NodeId, path: &[u32]) -> &Permutation {
        let mut n = a;
        for &y in path {
            n = self.child(n, y as usize);
        }
        self.perm(n)
    }

    /// Subtree at the vertex `path`.
    pub fn subtree(&self, a: NodeId, path: &[u32]) -> NodeId {
        path.iter().fold(a, |n, &y| self.child(n, y as usize))
    }

    /// Image of a vertex (0-indexed letters, length at most the depth).
    pub fn act(&self, a: NodeId, path: &[u32]) -> Vec<u32> {
        let mut n = a;
        let mut out = Vec::with_capacity(path.len());
        for &y in path {
            out.push(self.perm(n).apply(y as usize) as u32);
            n = self.child(n, y as usize);
        }
        out
    }

    /// Permutation induced on level `l` as an image table; vertex
    /// `y_1 .. y_l` has index `sum y_t m^(l-t)`.
    pub fn level_permutation(&self, a: NodeId, l: usize) -> Vec<u32> {
        assert!(l <= self.depth(a), "level beyond depth");
        let size = self.m.pow(l as u32);
        let mut images = vec![0u32; size];
        let mut path = vec![0u32; l];
        for (v, img) in images.iter_mut().enumerate() {
            let mut rest = v;
            for t in (0..l).rev() {
                path[t] = (rest % self.m) as u32;
                rest /= self.m;
            }
            let image = self.act(a, &path);
            *img = image.iter().fold(0u32, |acc, &y| acc * self.m as u32 + y);
        }
        images
    }

    /// Smallest level carrying a non-identity label, if any.
    pub fn first_nontrivial_level(&self, a: NodeId) -> Option<usize> {
        let mut frontier = vec![a];
        let mut seen: hashbrown::HashSet<NodeId> = hashbrown::HashSet::new();
        for level in 0..self.depth(a) {
            if frontier.iter().any(|&n| !self.perm(n).is_identity()) {
                return Some(level);
            }
            let mut next = Vec::new();
            for &n in &frontier {
                for &c in self.children(n) {
                    if seen.insert(c) {
                        next.push(c);
                    }
                }
            }
            frontier = next;
        }
        None
    }
}
