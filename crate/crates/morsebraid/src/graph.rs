//! Embedded graphs: rotation systems, sufficiency subdivision, maximal tree
//! selection and the induced linear vertex order.
//!
//! A graph carries a planar embedding as clockwise-ordered adjacency lists.
//! Once a maximal tree and a degree-one root are fixed, a depth-first walk of
//! the tree (children taken in clockwise order after the parent direction)
//! numbers the vertices; that numbering is the linear order everything
//! downstream depends on.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt::Write as _;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("graph is not connected")]
    Disconnected,
    #[error("strand count must be at least 1")]
    ZeroStrands,
    #[error("root vertex {0:?} has degree {1} in the tree; expected 1 (use a pendant root)")]
    BadRoot(String, usize),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("duplicate edge {0} - {1}")]
    DuplicateEdge(String, String),
    #[error("adjacency lists are inconsistent: {0} lists {1} but not vice versa")]
    AsymmetricAdjacency(String, String),
    #[error("self-loop at {0}")]
    SelfLoop(String),
    #[error("deleted edge {0} - {1} does not exist")]
    UnknownDeletedEdge(String, String),
    #[error("forced deleted edges do not leave a spanning tree")]
    BadForcedTree,
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("the basepoint has no parent edge")]
    RootHasNoParent,
    #[error("vertex order violates the order lemma: {0}")]
    OrderLemma(String),
}

pub type Vertex = usize;
pub type EdgeIdx = usize;

/// A finite graph with a rotation system (clockwise neighbor order per
/// vertex), a chosen root, and a maximal-tree / deleted-edge split.
#[derive(Debug, Clone)]
pub struct EmbeddedGraph {
    /// Original (input) label per vertex; subdivision vertices get synthesized
    /// labels of the form `a.b.2`.
    pub names: Vec<String>,
    /// Clockwise cyclic neighbor lists.
    pub rotation: Vec<Vec<Vertex>>,
    /// Edges as unordered pairs, `u < v` normalized by index.
    pub edges: Vec<(Vertex, Vertex)>,
    edge_ids: HashMap<(Vertex, Vertex), EdgeIdx>,
    pub root: Vertex,
    /// `true` for tree edges once a maximal tree has been chosen.
    pub in_tree: Vec<bool>,
    pub tree_chosen: bool,
}

fn norm(u: Vertex, v: Vertex) -> (Vertex, Vertex) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

impl EmbeddedGraph {
    pub fn new(names: Vec<String>, rotation: Vec<Vec<Vertex>>, root: Vertex) -> Result<Self, GraphError> {
        let mut edges = Vec::new();
        let mut edge_ids = HashMap::new();
        for (u, nbrs) in rotation.iter().enumerate() {
            let mut seen = HashSet::new();
            for &v in nbrs {
                if v == u {
                    return Err(GraphError::SelfLoop(names[u].clone()));
                }
                if !seen.insert(v) {
                    return Err(GraphError::DuplicateEdge(names[u].clone(), names[v].clone()));
                }
                if !rotation[v].contains(&u) {
                    return Err(GraphError::AsymmetricAdjacency(names[u].clone(), names[v].clone()));
                }
                let key = norm(u, v);
                if !edge_ids.contains_key(&key) {
                    edge_ids.insert(key, edges.len());
                    edges.push(key);
                }
            }
        }
        let n_edges = edges.len();
        let g = EmbeddedGraph {
            names,
            rotation,
            edges,
            edge_ids,
            root,
            in_tree: vec![false; n_edges],
            tree_chosen: false,
        };
        if !g.is_connected() {
            return Err(GraphError::Disconnected);
        }
        Ok(g)
    }

    pub fn n_vertices(&self) -> usize {
        self.names.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.rotation[v].len()
    }

    pub fn is_essential(&self, v: Vertex) -> bool {
        self.degree(v) >= 3
    }

    pub fn edge_id(&self, u: Vertex, v: Vertex) -> Option<EdgeIdx> {
        self.edge_ids.get(&norm(u, v)).copied()
    }

    pub fn deleted_edges(&self) -> Vec<EdgeIdx> {
        (0..self.edges.len()).filter(|&e| !self.in_tree[e]).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.n_vertices() as i64 - self.n_edges() as i64
    }

    pub fn is_tree(&self) -> bool {
        self.n_edges() + 1 == self.n_vertices()
    }

    fn is_connected(&self) -> bool {
        if self.names.is_empty() {
            return false;
        }
        let mut seen = vec![false; self.n_vertices()];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &v in &self.rotation[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    queue.push_back(v);
                }
            }
        }
        count == self.n_vertices()
    }

    fn tree_degree(&self, v: Vertex) -> usize {
        self.rotation[v]
            .iter()
            .filter(|&&w| self.in_tree[self.edge_id(v, w).unwrap()])
            .count()
    }

    pub fn tree_degree_of(&self, v: Vertex) -> usize {
        self.tree_degree(v)
    }

    /// Splits edge `(u, w)` into a path with `parts` edges, keeping the
    /// rotation slots of `u` and `w`. Returns the chain of edge ids from the
    /// `u` side to the `w` side. New interior vertices have degree 2. When a
    /// deleted edge is split, the middle part stays deleted and the rest
    /// joins the tree.
    fn split_edge(&mut self, u: Vertex, w: Vertex, parts: usize) -> Vec<EdgeIdx> {
        assert!(parts >= 1);
        if parts == 1 {
            return vec![self.edge_id(u, w).unwrap()];
        }
        let old = self.edge_id(u, w).unwrap();
        let was_tree = self.in_tree[old];
        let deleted_part = if self.tree_chosen && !was_tree {
            Some(parts / 2)
        } else {
            None
        };
        // fresh labels a.b.k on original endpoints' names
        let base = format!("{}.{}", self.names[u], self.names[w]);
        let mut chain = vec![u];
        for k in 1..parts {
            let nv = self.names.len();
            self.names.push(format!("{}.{}", base, k));
            self.rotation.push(Vec::new());
            chain.push(nv);
        }
        chain.push(w);
        // rewire rotations: u's slot for w now points to first new vertex,
        // w's slot for u points to the last one
        let iu = self.rotation[u].iter().position(|&x| x == w).unwrap();
        self.rotation[u][iu] = chain[1];
        let iw = self.rotation[w].iter().position(|&x| x == u).unwrap();
        self.rotation[w][iw] = chain[parts - 1];
        for k in 1..parts {
            self.rotation[chain[k]] = vec![chain[k - 1], chain[k + 1]];
        }
        // replace the old edge record with the first sub-edge, append the rest
        let mut ids = Vec::with_capacity(parts);
        self.edge_ids.remove(&norm(u, w));
        let first = norm(chain[0], chain[1]);
        self.edges[old] = first;
        self.edge_ids.insert(first, old);
        ids.push(old);
        for k in 1..parts {
            let key = norm(chain[k], chain[k + 1]);
            let id = self.edges.len();
            self.edges.push(key);
            self.edge_ids.insert(key, id);
            self.in_tree.push(was_tree);
            ids.push(id);
        }
        if let Some(mid) = deleted_part {
            for (k, &id) in ids.iter().enumerate() {
                self.in_tree[id] = k != mid;
            }
        }
        ids
    }

    /// Maximal chains of degree-2 vertices between branch/leaf vertices, as
    /// vertex paths. Pure cycles (every vertex of degree 2) yield nothing.
    fn segments(&self) -> Vec<Vec<Vertex>> {
        let mut segs = Vec::new();
        let mut seen_edges = vec![false; self.n_edges()];
        for s in 0..self.n_vertices() {
            if self.degree(s) == 2 {
                continue;
            }
            for i in 0..self.rotation[s].len() {
                let mut prev = s;
                let mut cur = self.rotation[s][i];
                let eid = self.edge_id(prev, cur).unwrap();
                if seen_edges[eid] {
                    continue;
                }
                seen_edges[eid] = true;
                let mut path = vec![s, cur];
                while self.degree(cur) == 2 {
                    let next = if self.rotation[cur][0] == prev {
                        self.rotation[cur][1]
                    } else {
                        self.rotation[cur][0]
                    };
                    seen_edges[self.edge_id(cur, next).unwrap()] = true;
                    prev = cur;
                    cur = next;
                    path.push(cur);
                }
                segs.push(path);
            }
        }
        segs
    }

    /// Length of a shortest cycle, if any.
    pub fn girth(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for s in 0..self.n_vertices() {
            // BFS that tracks the parent edge; an edge to a visited vertex
            // closes a cycle of length dist(u) + dist(v) + 1.
            let mut dist = vec![usize::MAX; self.n_vertices()];
            let mut par = vec![usize::MAX; self.n_vertices()];
            dist[s] = 0;
            let mut q = VecDeque::from([s]);
            while let Some(u) = q.pop_front() {
                for &v in &self.rotation[u] {
                    let e = self.edge_id(u, v).unwrap();
                    if dist[v] == usize::MAX {
                        dist[v] = dist[u] + 1;
                        par[v] = e;
                        q.push_back(v);
                    } else if par[u] != e {
                        let len = dist[u] + dist[v] + 1;
                        if best.map_or(true, |b| len < b) {
                            best = Some(len);
                        }
                    }
                }
            }
        }
        best
    }

    /// Both of Abrams' sufficiency conditions for `n` strands.
    pub fn is_sufficiently_subdivided(&self, n: usize) -> bool {
        if n <= 1 {
            return true;
        }
        for seg in self.segments() {
            if seg.len() - 1 < n - 1 {
                return false;
            }
        }
        if let Some(g) = self.girth() {
            if g < n + 1 {
                return false;
            }
        }
        true
    }

    /// Checks whether the requested root is usable and, with `pendant_root`,
    /// attaches a fresh degree-one vertex when it is not.
    pub fn ensure_pendant_root(&mut self, pendant_root: bool) -> Result<(), GraphError> {
        if self.degree(self.root) == 1 {
            return Ok(());
        }
        if !pendant_root {
            // A degree >= 2 vertex may still have tree degree 1 once a tree is
            // chosen; that is revalidated later. Only degree-1 roots are
            // accepted unconditionally here.
            return Ok(());
        }
        let r = self.root;
        let nv = self.names.len();
        self.names.push(format!("{}.root", self.names[r]));
        self.rotation.push(vec![r]);
        self.rotation[r].insert(0, nv);
        let key = norm(r, nv);
        self.edge_ids.insert(key, self.edges.len());
        self.edges.push(key);
        self.in_tree.push(false);
        self.root = nv;
        Ok(())
    }
}

/// Subdivides until both of Abrams' conditions hold for `n` strands: every
/// path between distinct vertices of degree != 2 has at least n-1 edges, and
/// every cycle has at least n+1 edges. Inserted vertices are spread evenly
/// over a segment's edges. The embedding order is preserved.
pub fn subdivide_for(graph: &EmbeddedGraph, n: usize) -> Result<EmbeddedGraph, GraphError> {
    if n == 0 {
        return Err(GraphError::ZeroStrands);
    }
    let mut g = graph.clone();
    if n == 1 {
        return Ok(g);
    }
    // condition 1: segments between degree-!=2 vertices need >= n-1 edges
    let segs: Vec<Vec<Vertex>> = g.segments();
    for seg in segs {
        let k = seg.len() - 1;
        if k >= n - 1 {
            continue;
        }
        let extra = (n - 1) - k;
        // spread extra vertices over the k edges, earliest edges first
        let per = extra / k;
        let rem = extra % k;
        for i in 0..k {
            let parts = 1 + per + if i < rem { 1 } else { 0 };
            g.split_edge(seg[i], seg[i + 1], parts);
        }
    }
    // condition 2: girth >= n+1
    while let Some(girth) = g.girth() {
        if girth >= n + 1 {
            break;
        }
        let cyc = shortest_cycle(&g).expect("girth reported a cycle");
        // lengthen the cycle's lexicographically least edge by one
        let (u, w) = *cyc
            .iter()
            .map(|&e| &g.edges[e])
            .min()
            .expect("cycle has edges");
        g.split_edge(u, w, 2);
    }
    Ok(g)
}

fn shortest_cycle(g: &EmbeddedGraph) -> Option<Vec<EdgeIdx>> {
    let mut best: Option<Vec<EdgeIdx>> = None;
    for s in 0..g.n_vertices() {
        let mut dist = vec![usize::MAX; g.n_vertices()];
        let mut par_edge = vec![usize::MAX; g.n_vertices()];
        let mut par = vec![usize::MAX; g.n_vertices()];
        dist[s] = 0;
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            for &v in &g.rotation[u] {
                let e = g.edge_id(u, v).unwrap();
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    par_edge[v] = e;
                    par[v] = u;
                    q.push_back(v);
                } else if par_edge[u] != e {
                    // walk both endpoints up to the root of the BFS tree
                    let mut cyc = vec![e];
                    let (mut a, mut b) = (u, v);
                    while dist[a] > dist[b] {
                        cyc.push(par_edge[a]);
                        a = par[a];
                    }
                    while dist[b] > dist[a] {
                        cyc.push(par_edge[b]);
                        b = par[b];
                    }
                    while a != b {
                        cyc.push(par_edge[a]);
                        cyc.push(par_edge[b]);
                        a = par[a];
                        b = par[b];
                    }
                    if best.as_ref().map_or(true, |c| cyc.len() < c.len()) {
                        best = Some(cyc);
                    }
                }
            }
        }
    }
    best
}

/// Chooses a maximal tree. Starting from a BFS tree, each deleted edge is
/// traded for the edge adjacent to its nearest essential vertex on the path
/// toward it (so deleted edges end up next to essential vertices), and then
/// any deleted edge with an endpoint of tree degree > 1 is split in three
/// with the middle part deleted. Forced deleted edges are honored as given.
pub fn choose_maximal_tree(
    graph: &EmbeddedGraph,
    forced_deleted: Option<&[(Vertex, Vertex)]>,
) -> Result<EmbeddedGraph, GraphError> {
    let mut g = graph.clone();
    match forced_deleted {
        Some(pairs) => {
            apply_forced_deleted(&mut g, pairs)?;
        }
        None => {
            // BFS tree from vertex 0, exploring in rotation order
            for e in g.in_tree.iter_mut() {
                *e = false;
            }
            let mut seen = vec![false; g.n_vertices()];
            seen[0] = true;
            let mut q = VecDeque::from([0usize]);
            while let Some(u) = q.pop_front() {
                for i in 0..g.rotation[u].len() {
                    let v = g.rotation[u][i];
                    if !seen[v] {
                        seen[v] = true;
                        let e = g.edge_id(u, v).unwrap();
                        g.in_tree[e] = true;
                        q.push_back(v);
                    }
                }
            }
            adjust_deleted_toward_essential(&mut g);
            g.tree_chosen = true;
        }
    }
    fix_deleted_endpoints(&mut g);
    Ok(g)
}

/// Marks the given edges as deleted and everything else as tree, validating
/// that the result spans.
pub fn apply_forced_deleted(
    g: &mut EmbeddedGraph,
    pairs: &[(Vertex, Vertex)],
) -> Result<(), GraphError> {
    for e in g.in_tree.iter_mut() {
        *e = true;
    }
    for &(u, w) in pairs {
        let id = g
            .edge_id(u, w)
            .ok_or_else(|| GraphError::UnknownDeletedEdge(g.names[u].clone(), g.names[w].clone()))?;
        g.in_tree[id] = false;
    }
    if !spanning_tree_ok(g) {
        return Err(GraphError::BadForcedTree);
    }
    g.tree_chosen = true;
    Ok(())
}

/// Splits every deleted edge with an endpoint of tree degree > 1 in three,
/// middle part deleted, so that both endpoints end up as tree leaves.
pub fn fix_deleted_endpoints(g: &mut EmbeddedGraph) {
    loop {
        let mut todo = None;
        for e in 0..g.n_edges() {
            if !g.in_tree[e] {
                let (u, w) = g.edges[e];
                if g.tree_degree(u) > 1 || g.tree_degree(w) > 1 {
                    todo = Some((u, w));
                    break;
                }
            }
        }
        match todo {
            None => break,
            Some((u, w)) => {
                let chain = g.split_edge(u, w, 3);
                g.in_tree[chain[0]] = true;
                g.in_tree[chain[1]] = false;
                g.in_tree[chain[2]] = true;
            }
        }
    }
}

fn spanning_tree_ok(g: &EmbeddedGraph) -> bool {
    let n_tree = g.in_tree.iter().filter(|&&t| t).count();
    if n_tree != g.n_vertices() - 1 {
        return false;
    }
    let mut seen = vec![false; g.n_vertices()];
    seen[0] = true;
    let mut q = VecDeque::from([0usize]);
    let mut count = 1;
    while let Some(u) = q.pop_front() {
        for &v in &g.rotation[u] {
            if g.in_tree[g.edge_id(u, v).unwrap()] && !seen[v] {
                seen[v] = true;
                count += 1;
                q.push_back(v);
            }
        }
    }
    count == g.n_vertices()
}

/// Provisional preorder used only to break ties deterministically while the
/// real vertex order does not exist yet.
fn provisional_preorder(g: &EmbeddedGraph) -> Vec<usize> {
    let mut order = vec![usize::MAX; g.n_vertices()];
    let mut next = 0;
    let mut stack = vec![0usize];
    let mut seen = vec![false; g.n_vertices()];
    seen[0] = true;
    while let Some(u) = stack.pop() {
        order[u] = next;
        next += 1;
        for &v in g.rotation[u].iter().rev() {
            if g.in_tree[g.edge_id(u, v).unwrap()] && !seen[v] {
                seen[v] = true;
                stack.push(v);
            }
        }
    }
    order
}

fn adjust_deleted_toward_essential(g: &mut EmbeddedGraph) {
    let pre = provisional_preorder(g);
    loop {
        let mut swap = None;
        'outer: for e in 0..g.n_edges() {
            if g.in_tree[e] {
                continue;
            }
            let (u, w) = g.edges[e];
            if g.is_essential(u) || g.is_essential(w) {
                continue; // already neighbors an essential vertex
            }
            // walk from each endpoint through degree-2 vertices to the first
            // essential vertex; the tree-path direction away from the edge
            let mut candidates = Vec::new();
            for (mut prev, mut cur) in [(w, u), (u, w)] {
                let mut dist = 1;
                loop {
                    if g.is_essential(cur) {
                        candidates.push((dist, pre[cur], cur, prev));
                        break;
                    }
                    if g.degree(cur) != 2 {
                        break; // hit a leaf: no essential vertex this way
                    }
                    let next = if g.rotation[cur][0] == prev {
                        g.rotation[cur][1]
                    } else {
                        g.rotation[cur][0]
                    };
                    prev = cur;
                    cur = next;
                    dist += 1;
                }
            }
            if candidates.is_empty() {
                continue; // cycle with no essential vertices at all
            }
            candidates.sort();
            let (_, _, v_e, towards) = candidates[0];
            let removed = g.edge_id(v_e, towards).unwrap();
            if !g.in_tree[removed] {
                continue; // nothing to trade
            }
            swap = Some((e, removed));
            break 'outer;
        }
        match swap {
            None => break,
            Some((add, remove)) => {
                g.in_tree[add] = true;
                g.in_tree[remove] = false;
                debug_assert!(spanning_tree_ok(g));
            }
        }
    }
}

/// The linear order on vertices induced by the embedding: a depth-first walk
/// of the tree from the root, taking directions 1, 2, ... (clockwise after
/// the parent) at every vertex. Index in the walk = position in the order.
#[derive(Debug, Clone)]
pub struct VertexOrder {
    /// `rank[v]` = position of vertex `v` in the order; the root has rank 0.
    pub rank: Vec<usize>,
    /// inverse of `rank`
    pub by_rank: Vec<Vertex>,
    /// tree parent (toward the root); `None` for the root
    pub parent: Vec<Option<Vertex>>,
    /// the tree edge `e(v)` to the parent
    pub parent_edge: Vec<Option<EdgeIdx>>,
    /// `direction[v]` lists the incident edges of `v` by direction label;
    /// label 0 is the parent edge for non-root vertices. For the root the
    /// tree edge carries label 1 and slot 0 is unused (`usize::MAX`).
    pub direction: Vec<Vec<EdgeIdx>>,
    /// direction label of each incident edge, keyed by (vertex, edge)
    pub dir_of: HashMap<(Vertex, EdgeIdx), usize>,
    /// DFS entry/exit times for ancestor tests
    tin: Vec<usize>,
    tout: Vec<usize>,
}

pub fn order_vertices(g: &EmbeddedGraph) -> Result<VertexOrder, GraphError> {
    assert!(g.tree_chosen, "choose a maximal tree first");
    let root = g.root;
    if g.tree_degree(root) != 1 {
        return Err(GraphError::BadRoot(g.names[root].clone(), g.tree_degree(root)));
    }
    let nv = g.n_vertices();
    let mut rank = vec![usize::MAX; nv];
    let mut by_rank = Vec::with_capacity(nv);
    let mut parent = vec![None; nv];
    let mut parent_edge = vec![None; nv];
    let mut direction = vec![Vec::new(); nv];
    let mut dir_of = HashMap::new();
    let mut tin = vec![0usize; nv];
    let mut tout = vec![0usize; nv];

    // direction labels: start right after the parent slot in the rotation
    // and go around; the root starts at its tree edge with label 1
    for v in 0..nv {
        let rot = &g.rotation[v];
        let d = rot.len();
        if v == root {
            let tree_pos = rot
                .iter()
                .position(|&w| g.in_tree[g.edge_id(v, w).unwrap()])
                .expect("root has a tree edge");
            direction[v].push(usize::MAX); // no direction 0 at the root
            for k in 0..d {
                let w = rot[(tree_pos + k) % d];
                let e = g.edge_id(v, w).unwrap();
                direction[v].push(e);
                dir_of.insert((v, e), k + 1);
            }
        }
        // non-root labels are assigned during the walk (parent is needed)
    }

    // iterative DFS over tree edges, children in clockwise order after parent
    let mut clock = 0usize;
    let mut stack: Vec<(Vertex, Option<Vertex>, usize)> = vec![(root, None, 0)];
    while let Some(&(v, par, state)) = stack.last() {
        if state == 0 {
            rank[v] = by_rank.len();
            by_rank.push(v);
            tin[v] = clock;
            clock += 1;
            if let Some(p) = par {
                let pe = g.edge_id(v, p).unwrap();
                parent[v] = Some(p);
                parent_edge[v] = Some(pe);
                let rot = &g.rotation[v];
                let d = rot.len();
                let ppos = rot.iter().position(|&w| w == p).unwrap();
                direction[v].push(pe);
                dir_of.insert((v, pe), 0);
                for k in 1..d {
                    let w = rot[(ppos + k) % d];
                    let e = g.edge_id(v, w).unwrap();
                    direction[v].push(e);
                    dir_of.insert((v, e), k);
                }
            }
        }
        // next unvisited tree child in direction order
        let mut next_child = None;
        let mut k = state;
        while k < direction[v].len() {
            let e = direction[v][k];
            k += 1;
            if e == usize::MAX || !g.in_tree[e] {
                continue;
            }
            let (a, b) = g.edges[e];
            let w = if a == v { b } else { a };
            if rank[w] == usize::MAX {
                next_child = Some(w);
                break;
            }
        }
        let top = stack.len() - 1;
        stack[top].2 = k;
        match next_child {
            Some(w) => stack.push((w, Some(v), 0)),
            None => {
                tout[v] = clock;
                clock += 1;
                stack.pop();
            }
        }
    }
    if by_rank.len() != nv {
        return Err(GraphError::Disconnected);
    }

    let order = VertexOrder {
        rank,
        by_rank,
        parent,
        parent_edge,
        direction,
        dir_of,
        tin,
        tout,
    };
    order.check_order_lemma(g)?;
    Ok(order)
}

impl VertexOrder {
    /// `a` lies on the tree geodesic from the root to `b`?
    pub fn is_ancestor_or_self(&self, a: Vertex, b: Vertex) -> bool {
        self.tin[a] <= self.tin[b] && self.tout[b] <= self.tout[a]
    }

    pub fn tin_of(&self, v: Vertex) -> usize {
        self.tin[v]
    }

    pub fn tout_of(&self, v: Vertex) -> usize {
        self.tout[v]
    }

    /// wedge of two vertices: the far endpoint of `[*,v1] /\ [*,v2]`
    pub fn wedge(&self, v1: Vertex, v2: Vertex) -> Vertex {
        let mut a = v1;
        while !self.is_ancestor_or_self(a, v2) {
            a = self.parent[a].expect("root is a common ancestor");
        }
        a
    }

    pub fn parent_edge(&self, v: Vertex) -> Result<EdgeIdx, GraphError> {
        self.parent_edge[v].ok_or(GraphError::RootHasNoParent)
    }

    /// direction label at `v1` of the tree geodesic toward `v2`; 0 if equal
    pub fn g(&self, g: &EmbeddedGraph, v1: Vertex, v2: Vertex) -> usize {
        if v1 == v2 {
            return 0;
        }
        if !self.is_ancestor_or_self(v1, v2) {
            return 0; // geodesic leaves toward the root
        }
        // the child of v1 whose subtree contains v2
        for (label, &e) in self.direction[v1].iter().enumerate() {
            if e == usize::MAX || !g.in_tree[e] {
                continue;
            }
            let (a, b) = g.edges[e];
            let w = if a == v1 { b } else { a };
            if self.parent[w] == Some(v1) && self.is_ancestor_or_self(w, v2) {
                return label;
            }
        }
        unreachable!("v2 is in some child subtree of v1");
    }

    /// endpoints ordered so that `iota >= tau`
    pub fn iota_tau(&self, g: &EmbeddedGraph, e: EdgeIdx) -> (Vertex, Vertex) {
        let (u, w) = g.edges[e];
        if self.rank[u] > self.rank[w] {
            (u, w)
        } else {
            (w, u)
        }
    }

    fn check_order_lemma(&self, g: &EmbeddedGraph) -> Result<(), GraphError> {
        // (i) v2 in [*, v1] implies v2 <= v1
        for v1 in 0..g.n_vertices() {
            let mut v2 = v1;
            loop {
                if self.rank[v2] > self.rank[v1] {
                    return Err(GraphError::OrderLemma(format!(
                        "{} on the geodesic to {} but ordered above it",
                        g.names[v2], g.names[v1]
                    )));
                }
                match self.parent[v2] {
                    Some(p) => v2 = p,
                    None => break,
                }
            }
        }
        // (ii) e(v) /\ e = tau(e), v < iota(e) forces tau(e) essential with
        //      0 < g(tau, v) < g(tau, iota)
        for e in 0..g.n_edges() {
            if !g.in_tree[e] {
                continue;
            }
            let (iota, tau) = self.iota_tau(g, e);
            for v in 0..g.n_vertices() {
                if v == iota || v == tau {
                    continue;
                }
                let Some(pe) = self.parent_edge[v] else { continue };
                let (pu, pw) = g.edges[pe];
                let touches_tau = pu == tau || pw == tau;
                let touches_iota = pu == iota || pw == iota;
                if touches_tau && !touches_iota && self.rank[v] < self.rank[iota] {
                    let gv = self.g(g, tau, v);
                    let gi = self.g(g, tau, iota);
                    if !(g.is_essential(tau) && 0 < gv && gv < gi) {
                        return Err(GraphError::OrderLemma(format!(
                            "edge {}-{} against vertex {}",
                            g.names[iota], g.names[tau], g.names[v]
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Line-oriented graph file:
/// ```text
/// root a
/// adj a: b c d
/// adj b: a
/// deleted c d
/// ```
/// Neighbor lists are clockwise. `deleted` lines force deleted edges.
pub fn parse_graph(text: &str) -> Result<(EmbeddedGraph, Vec<(Vertex, Vertex)>), GraphError> {
    let mut ids: HashMap<String, Vertex> = HashMap::new();
    let mut names: Vec<String> = Vec::new();
    let mut adj: Vec<(String, Vec<String>)> = Vec::new();
    let mut root_name: Option<String> = None;
    let mut deleted: Vec<(String, String)> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let lineno = lineno + 1;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |msg: &str| GraphError::Parse {
            line: lineno,
            msg: msg.to_string(),
        };
        if let Some(rest) = line.strip_prefix("root ") {
            if root_name.is_some() {
                return Err(err("duplicate root line"));
            }
            root_name = Some(rest.trim().to_string());
        } else if let Some(rest) = line.strip_prefix("adj ") {
            let (v, nbrs) = rest.split_once(':').ok_or_else(|| err("missing ':'"))?;
            let v = v.trim().to_string();
            if v.contains('.') {
                return Err(err("vertex ids must not contain '.'"));
            }
            if adj.iter().any(|(u, _)| *u == v) {
                return Err(err("duplicate adj line"));
            }
            let nbrs: Vec<String> = nbrs.split_whitespace().map(|s| s.to_string()).collect();
            adj.push((v, nbrs));
        } else if let Some(rest) = line.strip_prefix("deleted ") {
            let mut it = rest.split_whitespace();
            let (u, w) = (it.next(), it.next());
            match (u, w, it.next()) {
                (Some(u), Some(w), None) => deleted.push((u.to_string(), w.to_string())),
                _ => return Err(err("deleted needs exactly two vertices")),
            }
        } else {
            return Err(err("unrecognized line"));
        }
    }
    for (v, _) in &adj {
        ids.insert(v.clone(), names.len());
        names.push(v.clone());
    }
    let mut rotation = vec![Vec::new(); names.len()];
    for (v, nbrs) in &adj {
        let vi = ids[v];
        for w in nbrs {
            let wi = *ids
                .get(w)
                .ok_or_else(|| GraphError::UnknownVertex(w.clone()))?;
            rotation[vi].push(wi);
        }
    }
    let root_name = root_name.ok_or(GraphError::Parse {
        line: 0,
        msg: "missing root line".into(),
    })?;
    let root = *ids
        .get(&root_name)
        .ok_or(GraphError::UnknownVertex(root_name))?;
    let g = EmbeddedGraph::new(names, rotation, root)?;
    let mut del_pairs = Vec::new();
    for (u, w) in deleted {
        let ui = *ids.get(&u).ok_or_else(|| GraphError::UnknownVertex(u.clone()))?;
        let wi = *ids.get(&w).ok_or_else(|| GraphError::UnknownVertex(w.clone()))?;
        if g.edge_id(ui, wi).is_none() {
            return Err(GraphError::UnknownDeletedEdge(u, w));
        }
        del_pairs.push((ui, wi));
    }
    Ok((g, del_pairs))
}

pub fn serialize_graph(g: &EmbeddedGraph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "root {}", g.names[g.root]);
    for v in 0..g.n_vertices() {
        let nbrs: Vec<&str> = g.rotation[v].iter().map(|&w| g.names[w].as_str()).collect();
        let _ = writeln!(out, "adj {}: {}", g.names[v], nbrs.join(" "));
    }
    if g.tree_chosen {
        for e in g.deleted_edges() {
            let (u, w) = g.edges[e];
            let _ = writeln!(out, "deleted {} {}", g.names[u], g.names[w]);
        }
    }
    out
}

/// Splits every edge in two; used by the subdivision-stability tests.
pub fn barycentric_subdivision(g: &EmbeddedGraph) -> EmbeddedGraph {
    let mut out = g.clone();
    let pairs: Vec<(Vertex, Vertex)> = out.edges.clone();
    for (u, w) in pairs {
        out.split_edge(u, w, 2);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collection;

    #[test]
    fn single_edge_n1_unchanged() {
        let (g, _) = parse_graph("root a\nadj a: b\nadj b: a\n").unwrap();
        let s = subdivide_for(&g, 1).unwrap();
        assert_eq!(s.n_vertices(), 2);
        assert_eq!(s.n_edges(), 1);
    }

    #[test]
    fn y_graph_n2_unchanged() {
        let g = collection::y_graph();
        let s = subdivide_for(&g, 2).unwrap();
        assert_eq!(s.n_vertices(), 4);
        assert!(s.is_sufficiently_subdivided(2));
    }

    #[test]
    fn y_graph_n4_arms_of_three() {
        let g = collection::y_graph();
        let s = subdivide_for(&g, 4).unwrap();
        // center keeps degree 3; every arm now has 3 edges
        assert!(s.is_sufficiently_subdivided(4));
        assert_eq!(s.n_edges(), 9);
        assert_eq!(s.n_vertices(), 10);
        // minimality: removing any interior vertex breaks the condition, so
        // just pin the counts (3 arms x 3 edges)
    }

    #[test]
    fn subdivision_idempotent() {
        for n in 1..=5 {
            let g = collection::y_graph();
            let s1 = subdivide_for(&g, n).unwrap();
            let s2 = subdivide_for(&s1, n).unwrap();
            assert_eq!(s1.n_vertices(), s2.n_vertices(), "n={}", n);
            assert_eq!(s1.n_edges(), s2.n_edges(), "n={}", n);
        }
    }

    #[test]
    fn tree_has_no_deleted_edges() {
        let g = collection::fig1_tree();
        let t = choose_maximal_tree(&g, None).unwrap();
        assert!(t.deleted_edges().is_empty());
        assert_eq!(
            t.deleted_edges().len() as i64,
            1 - t.euler_characteristic()
        );
    }

    #[test]
    fn k4_radial_tree_three_deleted_with_leaf_endpoints() {
        let (g, forced) = collection::k4_star();
        let t = choose_maximal_tree(&g, Some(&forced)).unwrap();
        let del = t.deleted_edges();
        assert_eq!(del.len(), 3);
        assert_eq!(del.len() as i64, 1 - t.euler_characteristic());
        for e in del {
            let (u, w) = t.edges[e];
            assert_eq!(t.tree_degree(u), 1);
            assert_eq!(t.tree_degree(w), 1);
        }
    }

    #[test]
    fn auto_tree_on_k4_keeps_deleted_next_to_essential() {
        let (g, _) = collection::k4_star();
        let t = choose_maximal_tree(&g, None).unwrap();
        assert_eq!(t.deleted_edges().len(), 3);
        for e in t.deleted_edges() {
            let (u, w) = t.edges[e];
            assert_eq!(t.tree_degree(u), 1);
            assert_eq!(t.tree_degree(w), 1);
        }
    }

    #[test]
    fn cycle_six_one_deleted_edge() {
        let g = collection::cycle(6);
        let s = subdivide_for(&g, 2).unwrap();
        let t = choose_maximal_tree(&s, None).unwrap();
        assert_eq!(t.deleted_edges().len(), 1);
    }

    #[test]
    fn fig1_order_matches_paper_numbering() {
        let (g, ord) = collection::fig1_ordered();
        for i in 0..28 {
            let v = g.names.iter().position(|n| n == &format!("v{}", i)).unwrap();
            assert_eq!(ord.rank[v], i, "v{} should have rank {}", i, i);
        }
        let v = |i: usize| g.names.iter().position(|n| n == &format!("v{}", i)).unwrap();
        // g(v3, v4) = 1, g(v3, v7) = 2, g(v9, v13) = 1
        assert_eq!(ord.g(&g, v(3), v(4)), 1);
        assert_eq!(ord.g(&g, v(3), v(7)), 2);
        assert_eq!(ord.g(&g, v(9), v(13)), 1);
        // rank(*) = 0
        assert_eq!(ord.rank[g.root], 0);
    }

    #[test]
    fn fig1_wedge_and_parent_edge() {
        let (g, ord) = collection::fig1_ordered();
        let v = |i: usize| g.names.iter().position(|n| n == &format!("v{}", i)).unwrap();
        assert_eq!(ord.wedge(v(10), v(19)), v(9));
        assert_eq!(ord.wedge(v(5), v(5)), v(5));
        assert_eq!(ord.wedge(g.root, v(17)), g.root);
        let e19 = ord.parent_edge(v(19)).unwrap();
        let (a, b) = g.edges[e19];
        assert_eq!(norm(a, b), norm(v(19), v(9)));
        let e10 = ord.parent_edge(v(10)).unwrap();
        let (a, b) = g.edges[e10];
        assert_eq!(norm(a, b), norm(v(10), v(9)));
        assert!(ord.parent_edge(g.root).is_err());
    }

    #[test]
    fn wedge_below_both_arguments() {
        let (g, ord) = collection::fig1_ordered();
        for v1 in 0..g.n_vertices() {
            for v2 in 0..g.n_vertices() {
                let w = ord.wedge(v1, v2);
                assert!(ord.rank[w] <= ord.rank[v1]);
                assert!(ord.rank[w] <= ord.rank[v2]);
            }
        }
    }

    #[test]
    fn tree_edges_point_away_from_root() {
        let (g, ord) = collection::fig1_ordered();
        for e in 0..g.n_edges() {
            let (iota, tau) = ord.iota_tau(&g, e);
            assert!(ord.rank[tau] < ord.rank[iota]);
            assert_eq!(ord.parent[iota], Some(tau));
        }
    }

    #[test]
    fn parse_rejects_bad_input() {
        assert!(parse_graph("adj a: b\nadj b: a\n").is_err()); // no root
        assert!(parse_graph("root a\nadj a: b b\nadj b: a\n").is_err()); // dup edge
        assert!(parse_graph("root a\nadj a: b\nadj b:\n").is_err()); // asymmetric
        assert!(parse_graph("root a\nadj a: a\n").is_err()); // loop
        assert!(parse_graph("root a\nadj a: b\nadj b: a\ndeleted a c\n").is_err());
    }

    #[test]
    fn parse_serialize_round_trip() {
        let g = collection::h_tree();
        let text = serialize_graph(&g);
        let (g2, _) = parse_graph(&text).unwrap();
        assert_eq!(g.n_vertices(), g2.n_vertices());
        assert_eq!(g.n_edges(), g2.n_edges());
        assert_eq!(serialize_graph(&g2), text);
    }
}
