//! Stallings core graphs of finitely generated subgroups of a free group.
//!
//! A [`SubgroupGraph`] is stored in canonical form: vertices are numbered in
//! breadth-first order from the basepoint (vertex 0), exploring edges in
//! letter order. Two graphs therefore compare equal exactly when they
//! represent the same subgroup.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use crate::word::{cyclic_reduce, CyclicWord, Letter, Word};

type Adjacency = Vec<BTreeMap<Letter, usize>>;

/// Folded based core graph. Each undirected edge is stored twice: as `l` at
/// its origin and as `l^-1` at its target.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubgroupGraph {
    adj: Adjacency,
}

/// Folded graph without basepoint in which every vertex has degree at least
/// two. Empty exactly when the subgroup is trivial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicCore {
    adj: Adjacency,
}

/// One cycle-bearing component of the fiber product of two cyclic cores.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentWitness {
    /// The subgroup read by loops at the component's least vertex.
    pub subgroup: SubgroupGraph,
    /// A nontrivial element of `subgroup`.
    pub witness: Word,
}

/// Union-find based folding of labelled graphs.
struct Folder {
    parent: Vec<usize>,
    size: Vec<usize>,
    adj: Adjacency,
    pending: Vec<(usize, usize)>,
}

impl Folder {
    fn new() -> Self {
        let mut f = Folder { parent: Vec::new(), size: Vec::new(), adj: Vec::new(), pending: Vec::new() };
        f.vertex();
        f
    }

    fn vertex(&mut self) -> usize {
        let v = self.parent.len();
        self.parent.push(v);
        self.size.push(1);
        self.adj.push(BTreeMap::new());
        v
    }

    fn find(&mut self, mut v: usize) -> usize {
        let mut root = v;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[v] != root {
            let next = self.parent[v];
            self.parent[v] = root;
            v = next;
        }
        root
    }

    fn add_edge(&mut self, u: usize, l: Letter, v: usize) {
        let u = self.find(u);
        let v = self.find(v);
        if let Some(&t) = self.adj[u].get(&l) {
            self.pending.push((t, v));
            return;
        }
        if let Some(&s) = self.adj[v].get(&l.inverse()) {
            self.pending.push((s, u));
            return;
        }
        self.adj[u].insert(l, v);
        self.adj[v].insert(l.inverse(), u);
    }

    /// Adds a loop at vertex 0 spelling `w`, reusing already present
    /// edges at both ends.
    fn add_loop(&mut self, w: &Word) {
        let ls = w.letters();
        if ls.is_empty() {
            return;
        }
        let mut start = self.find(0);
        let mut i = 0;
        while i < ls.len() {
            match self.adj[start].get(&ls[i]).copied() {
                Some(t) => {
                    start = self.find(t);
                    i += 1;
                }
                None => break,
            }
        }
        let mut end = self.find(0);
        let mut j = ls.len();
        while j > i {
            match self.adj[end].get(&ls[j - 1].inverse()).copied() {
                Some(t) => {
                    end = self.find(t);
                    j -= 1;
                }
                None => break,
            }
        }
        if i == j {
            self.pending.push((start, end));
            return;
        }
        let mut cur = start;
        for &l in &ls[i..j - 1] {
            let next = self.vertex();
            self.add_edge(cur, l, next);
            cur = next;
        }
        self.add_edge(cur, ls[j - 1], end);
    }

    fn fold(&mut self) {
        while let Some((a, b)) = self.pending.pop() {
            let a = self.find(a);
            let b = self.find(b);
            if a == b {
                continue;
            }
            let (keep, gone) = if self.size[a] >= self.size[b] { (a, b) } else { (b, a) };
            self.parent[gone] = keep;
            self.size[keep] += self.size[gone];
            let moved = std::mem::take(&mut self.adj[gone]);
            for (l, t) in moved {
                let t = self.find(t);
                match self.adj[keep].get(&l).copied() {
                    Some(s) => {
                        if self.find(s) != t {
                            self.pending.push((s, t));
                        }
                    }
                    None => {
                        self.adj[keep].insert(l, t);
                    }
                }
            }
        }
    }

    /// Resolved adjacency of the component of vertex 0 and the index of the
    /// basepoint in it.
    fn finish(mut self) -> (Adjacency, usize) {
        self.fold();
        let n = self.parent.len();
        let mut index = vec![usize::MAX; n];
        let mut roots = Vec::new();
        for v in 0..n {
            let r = self.find(v);
            if index[r] == usize::MAX {
                index[r] = roots.len();
                roots.push(r);
            }
        }
        let mut adj = vec![BTreeMap::new(); roots.len()];
        for (i, &r) in roots.iter().enumerate() {
            let entries: Vec<(Letter, usize)> = self.adj[r].iter().map(|(&l, &t)| (l, t)).collect();
            for (l, t) in entries {
                let t = self.find(t);
                adj[i].insert(l, index[t]);
            }
        }
        let base = index[self.find(0)];
        (adj, base)
    }
}

const DEAD: usize = usize::MAX;

/// Repeatedly deletes vertices of degree at most one, except `keep`.
/// Returns the surviving adjacency and the old-to-new index map (`DEAD` for
/// deleted vertices).
fn trim(mut adj: Adjacency, keep: Option<usize>) -> (Adjacency, Vec<usize>) {
    let n = adj.len();
    let mut alive = vec![true; n];
    let mut queue: VecDeque<usize> = (0..n).filter(|&v| adj[v].len() <= 1 && Some(v) != keep).collect();
    while let Some(v) = queue.pop_front() {
        if !alive[v] || adj[v].len() > 1 || Some(v) == keep {
            continue;
        }
        alive[v] = false;
        let entries: Vec<(Letter, usize)> = adj[v].iter().map(|(&l, &t)| (l, t)).collect();
        adj[v].clear();
        for (l, t) in entries {
            if t != v {
                adj[t].remove(&l.inverse());
                if adj[t].len() <= 1 && Some(t) != keep {
                    queue.push_back(t);
                }
            }
        }
    }
    let mut index = vec![DEAD; n];
    let mut count = 0;
    for v in 0..n {
        if alive[v] {
            index[v] = count;
            count += 1;
        }
    }
    let out = adj
        .into_iter()
        .enumerate()
        .filter(|(v, _)| alive[*v])
        .map(|(_, m)| m.into_iter().map(|(l, t)| (l, index[t])).collect())
        .collect();
    (out, index)
}

/// Renumbers the component of `base` in breadth-first letter order.
fn canonical(adj: &Adjacency, base: usize) -> Adjacency {
    let mut index = vec![usize::MAX; adj.len()];
    let mut order = vec![base];
    index[base] = 0;
    let mut head = 0;
    while head < order.len() {
        let v = order[head];
        head += 1;
        for &t in adj[v].values() {
            if index[t] == usize::MAX {
                index[t] = order.len();
                order.push(t);
            }
        }
    }
    order.iter().map(|&v| adj[v].iter().map(|(&l, &t)| (l, index[t])).collect()).collect()
}

fn edge_count(adj: &Adjacency) -> usize {
    adj.iter().map(|m| m.len()).sum::<usize>() / 2
}

/// Follows `letters` from `start`; `None` if some edge is missing.
fn read(adj: &Adjacency, start: usize, letters: &[Letter]) -> Option<usize> {
    letters.iter().try_fold(start, |v, l| adj[v].get(l).copied())
}

/// For each vertex, the label of a shortest path from `base` and the tree
/// edge `(parent, letter)` that reaches it.
fn spanning_tree(adj: &Adjacency, base: usize) -> (Vec<Word>, Vec<Option<(usize, Letter)>>) {
    let n = adj.len();
    let mut prefix = vec![Word::identity(); n];
    let mut tree_in: Vec<Option<(usize, Letter)>> = vec![None; n];
    let mut seen = vec![false; n];
    seen[base] = true;
    let mut queue = VecDeque::from([base]);
    while let Some(v) = queue.pop_front() {
        for (&l, &t) in &adj[v] {
            if !seen[t] {
                seen[t] = true;
                tree_in[t] = Some((v, l));
                prefix[t] = prefix[v].multiply(&Word::letter(l));
                queue.push_back(t);
            }
        }
    }
    (prefix, tree_in)
}

fn fmt_edges(adj: &Adjacency, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    for (u, m) in adj.iter().enumerate() {
        for (&l, &t) in m {
            if !l.is_inverse() {
                writeln!(f, "{u} -{l}-> {t}")?;
            }
        }
    }
    Ok(())
}

impl SubgroupGraph {
    /// Folded core graph of the subgroup generated by `generators`.
    pub fn build(generators: &[Word]) -> Self {
        let mut folder = Folder::new();
        for g in generators {
            folder.add_loop(g);
            folder.fold();
        }
        let (adj, base) = folder.finish();
        SubgroupGraph::from_adjacency(adj, base)
    }

    pub fn trivial() -> Self {
        SubgroupGraph { adj: vec![BTreeMap::new()] }
    }

    /// Builds a graph from already folded based data, coring it.
    fn from_adjacency(adj: Adjacency, base: usize) -> Self {
        let (adj, index) = trim(adj, Some(base));
        SubgroupGraph { adj: canonical(&adj, index[base]) }
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        edge_count(&self.adj)
    }

    /// Rank of the subgroup: `edges - vertices + 1`.
    pub fn rank(&self) -> usize {
        self.edge_count() + 1 - self.vertex_count()
    }

    pub fn is_trivial(&self) -> bool {
        self.adj[0].is_empty()
    }

    /// Directed edges `(origin, label, target)` with positive labels.
    pub fn edges(&self) -> Vec<(usize, Letter, usize)> {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, m)| m.iter().filter(|(l, _)| !l.is_inverse()).map(move |(&l, &t)| (u, l, t)))
            .collect()
    }

    /// Largest generator index labelling an edge, 0 for the trivial group.
    pub fn max_index(&self) -> u32 {
        self.adj.iter().flat_map(|m| m.keys()).map(|l| l.index()).max().unwrap_or(0)
    }

    /// Membership: `w` reads a closed loop at the basepoint.
    pub fn contains(&self, w: &Word) -> bool {
        read(&self.adj, 0, w.letters()) == Some(0)
    }

    /// Whether `other` is a subgroup of `self`.
    pub fn contains_subgroup(&self, other: &SubgroupGraph) -> bool {
        other.basis().iter().all(|w| self.contains(w))
    }

    /// Free basis read off a breadth-first spanning tree, one word per
    /// non-tree edge.
    pub fn basis(&self) -> Vec<Word> {
        let (prefix, tree_in) = spanning_tree(&self.adj, 0);
        let mut out = Vec::with_capacity(self.rank());
        for (u, l, t) in self.edges() {
            let is_tree = tree_in[t] == Some((u, l)) || tree_in[u] == Some((t, l.inverse()));
            if !is_tree {
                out.push(prefix[u].multiply(&Word::letter(l)).multiply(&prefix[t].inverse()));
            }
        }
        out
    }

    /// Label of the shortest path from the basepoint to vertex `v`.
    pub fn path_to(&self, v: usize) -> Word {
        spanning_tree(&self.adj, 0).0.swap_remove(v)
    }

    /// Subgroup intersection via the based fiber product.
    pub fn intersect(&self, other: &SubgroupGraph) -> SubgroupGraph {
        let mut index: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let mut pairs = vec![(0usize, 0usize)];
        index.insert((0, 0), 0);
        let mut adj: Adjacency = vec![BTreeMap::new()];
        let mut head = 0;
        while head < pairs.len() {
            let (u, v) = pairs[head];
            let from = head;
            head += 1;
            for (&l, &u2) in &self.adj[u] {
                if let Some(&v2) = other.adj[v].get(&l) {
                    let to = *index.entry((u2, v2)).or_insert_with(|| {
                        pairs.push((u2, v2));
                        adj.push(BTreeMap::new());
                        pairs.len() - 1
                    });
                    adj[from].insert(l, to);
                }
            }
        }
        SubgroupGraph::from_adjacency(adj, 0)
    }

    pub fn equals(&self, other: &SubgroupGraph) -> bool {
        self == other
    }

    /// Strips degree-one vertices, the basepoint included.
    pub fn cyclic_core(&self) -> CyclicCore {
        let (adj, _) = trim(self.adj.clone(), None);
        CyclicCore { adj }
    }

    /// Whether some conjugate of `w` lies in the subgroup.
    pub fn is_conjugate_into(&self, w: &Word) -> bool {
        if w.is_empty() {
            return true;
        }
        self.cyclic_core().reads_cycle(w)
    }

    /// Searches for `g` with `g K g^-1 <= self`, where `K = k`, by trying
    /// every placement of the cyclic core of `k` into this graph. Returns
    /// the conjugator when an immersion exists. Exact for conjugating the
    /// whole subgroup by a single element.
    pub fn conjugator_into(&self, k: &SubgroupGraph) -> Option<Word> {
        if k.is_trivial() {
            return Some(Word::identity());
        }
        let (core, index) = trim(k.adj.clone(), None);
        let x_old = index.iter().position(|&i| i != DEAD)?;
        let x = index[x_old];
        let to_x = k.path_to(x_old);
        for q in 0..self.adj.len() {
            if immerses(&core, x, &self.adj, q) {
                let p = self.path_to(q);
                return Some(p.multiply(&to_x.inverse()));
            }
        }
        None
    }
}

/// Label-preserving graph morphism from `src` (connected) to `dst` with
/// `from -> to`.
fn immerses(src: &Adjacency, from: usize, dst: &Adjacency, to: usize) -> bool {
    let mut image = vec![usize::MAX; src.len()];
    image[from] = to;
    let mut stack = vec![from];
    while let Some(u) = stack.pop() {
        for (&l, &t) in &src[u] {
            let Some(&s) = dst[image[u]].get(&l) else {
                return false;
            };
            if image[t] == usize::MAX {
                image[t] = s;
                stack.push(t);
            } else if image[t] != s {
                return false;
            }
        }
    }
    true
}

impl fmt::Display for SubgroupGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "vertices {} edges {} rank {} base 0", self.vertex_count(), self.edge_count(), self.rank())?;
        fmt_edges(&self.adj, f)
    }
}

impl CyclicCore {
    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        edge_count(&self.adj)
    }

    /// Whether the cyclic reduction of `w` reads a closed path at some vertex.
    pub fn reads_cycle(&self, w: &Word) -> bool {
        let (core, _) = cyclic_reduce(w);
        if core.is_empty() {
            return true;
        }
        (0..self.adj.len()).any(|v| read(&self.adj, v, core.letters()) == Some(v))
    }

    /// Every nontrivial conjugacy class of cyclic length at most `max_len`
    /// meeting the subgroup: the cyclically reduced closed paths of the core.
    pub fn cycles_up_to(&self, max_len: usize) -> BTreeSet<CyclicWord> {
        let mut out = BTreeSet::new();
        let mut path = Vec::with_capacity(max_len);
        for start in 0..self.adj.len() {
            walk_cycles(&self.adj, start, start, max_len, &mut path, &mut out);
        }
        out
    }
}

fn walk_cycles(
    adj: &Adjacency,
    start: usize,
    at: usize,
    max_len: usize,
    path: &mut Vec<Letter>,
    out: &mut BTreeSet<CyclicWord>,
) {
    if at == start && !path.is_empty() && path[0] != path[path.len() - 1].inverse() {
        out.insert(CyclicWord::new(&Word::from_letters(path.iter().copied())));
    }
    if path.len() == max_len {
        return;
    }
    for (&l, &t) in &adj[at] {
        if path.last().is_some_and(|p| p.inverse() == l) {
            continue;
        }
        path.push(l);
        walk_cycles(adj, start, t, max_len, path, out);
        path.pop();
    }
}

impl fmt::Display for CyclicCore {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "vertices {} edges {}", self.vertex_count(), self.edge_count())?;
        fmt_edges(&self.adj, f)
    }
}

/// Conjugacy classes meeting both subgroups, grouped by component of the
/// fiber product of the two cyclic cores over all vertex pairs. A nontrivial
/// word is conjugate into both `g1` and `g2` iff it is conjugate into the
/// subgroup of some returned component.
pub fn conjugacy_intersection(g1: &SubgroupGraph, g2: &SubgroupGraph) -> Vec<ComponentWitness> {
    let c1 = g1.cyclic_core();
    let c2 = g2.cyclic_core();
    let n2 = c2.adj.len();
    let total = c1.adj.len() * n2;
    let mut adj: Adjacency = vec![BTreeMap::new(); total];
    for u in 0..c1.adj.len() {
        for v in 0..n2 {
            for (&l, &u2) in &c1.adj[u] {
                if let Some(&v2) = c2.adj[v].get(&l) {
                    adj[u * n2 + v].insert(l, u2 * n2 + v2);
                }
            }
        }
    }
    let (adj, _) = trim(adj, None);
    let mut seen = vec![false; adj.len()];
    let mut out = Vec::new();
    for start in 0..adj.len() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &t in adj[v].values() {
                if !seen[t] {
                    seen[t] = true;
                    stack.push(t);
                }
            }
        }
        // every surviving vertex lies in a component with a cycle
        let subgroup = SubgroupGraph { adj: canonical(&adj, start) };
        let witness = subgroup.basis().into_iter().next().expect("cycle-bearing component");
        out.push(ComponentWitness { subgroup, witness });
    }
    out
}
