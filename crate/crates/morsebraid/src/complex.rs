//! The discretized configuration complex: cells are n-element sets of
//! vertices and closed edges with pairwise disjoint closures.
//!
//! Everything here works in rank space: once the vertex order is computed,
//! vertices are renumbered 0..nv by their position in the order (so the
//! basepoint is 0) and edges are renumbered by (iota, tau). A cell member is
//! a single `u32`: ranks below `nv` are vertices, `nv + e` is edge `e`.
//! Members of a cell are kept sorted by their key (the rank of a vertex, the
//! rank of iota for an edge), which is unique within a cell.

use std::collections::HashMap;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::graph::{serialize_graph, EmbeddedGraph, VertexOrder};

pub type Member = u32;
pub const NO_EDGE: u32 = u32::MAX;

#[derive(Debug, Error)]
pub enum ComplexError {
    #[error("cell cap of {cap} exceeded (instance too large)")]
    CapExceeded { cap: u64 },
    #[error("boundary words exist only for 2-cells, got dimension {0}")]
    NotATwoCell(usize),
}

/// One open cell of the complex, members sorted by key.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell(pub Vec<Member>);

impl Cell {
    pub fn members(&self) -> &[Member] {
        &self.0
    }
}

/// An oriented 1-cell: the positive direction runs from the endpoint where
/// the edge is replaced by iota to the one where it is replaced by tau.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrientedOneCell {
    pub cell: Cell,
    pub positive: bool,
}

/// Frozen, rank-indexed view of a prepared graph for one strand count.
#[derive(Debug, Clone)]
pub struct World {
    pub n: usize,
    pub nv: usize,
    /// display name per rank; rank 0 is the basepoint
    pub names: Vec<String>,
    /// parent rank, `u32::MAX` at the root
    pub parent: Vec<u32>,
    /// parent tree edge index, `NO_EDGE` at the root
    pub parent_edge: Vec<u32>,
    pub edge_iota: Vec<u32>,
    pub edge_tau: Vec<u32>,
    pub edge_in_tree: Vec<bool>,
    pub degree: Vec<u32>,
    pub essential: Vec<bool>,
    /// ranks of essential vertices, ascending; index = letter A, B, C, ...
    pub essential_list: Vec<u32>,
    /// `direction[v][label]` = incident edge; label 0 is the parent edge for
    /// non-root vertices and a `NO_EDGE` sentinel at the root
    pub direction: Vec<Vec<u32>>,
    tin: Vec<u32>,
    tout: Vec<u32>,
    /// members in canonical enumeration order
    pub universe: Vec<Member>,
    pub graph_hash: String,
    pub euler_graph: i64,
}

impl World {
    pub fn build(g: &EmbeddedGraph, ord: &VertexOrder, n: usize) -> World {
        assert!(g.tree_chosen);
        let nv = g.n_vertices();
        let rank = &ord.rank;
        // edges keyed by (iota rank, tau rank), sorted
        let mut edge_perm: Vec<usize> = (0..g.n_edges()).collect();
        let iota_tau: Vec<(usize, usize)> = (0..g.n_edges())
            .map(|e| {
                let (i, t) = ord.iota_tau(g, e);
                (rank[i], rank[t])
            })
            .collect();
        edge_perm.sort_by_key(|&e| iota_tau[e]);
        let mut edge_new = vec![0usize; g.n_edges()];
        for (new, &old) in edge_perm.iter().enumerate() {
            edge_new[old] = new;
        }
        let edge_iota: Vec<u32> = edge_perm.iter().map(|&e| iota_tau[e].0 as u32).collect();
        let edge_tau: Vec<u32> = edge_perm.iter().map(|&e| iota_tau[e].1 as u32).collect();
        let edge_in_tree: Vec<bool> = edge_perm.iter().map(|&e| g.in_tree[e]).collect();

        let mut names = vec![String::new(); nv];
        let mut parent = vec![u32::MAX; nv];
        let mut parent_edge = vec![NO_EDGE; nv];
        let mut degree = vec![0u32; nv];
        let mut direction = vec![Vec::new(); nv];
        let mut tin = vec![0u32; nv];
        let mut tout = vec![0u32; nv];
        for v in 0..nv {
            let r = rank[v];
            names[r] = g.names[v].clone();
            degree[r] = g.degree(v) as u32;
            if let Some(p) = ord.parent[v] {
                parent[r] = rank[p] as u32;
                parent_edge[r] = edge_new[ord.parent_edge[v].unwrap()] as u32;
            }
            direction[r] = ord.direction[v]
                .iter()
                .map(|&e| if e == usize::MAX { NO_EDGE } else { edge_new[e] as u32 })
                .collect();
            tin[r] = ord_tin(ord, v) as u32;
            tout[r] = ord_tout(ord, v) as u32;
        }
        let essential: Vec<bool> = (0..nv).map(|r| degree[r] >= 3).collect();
        let essential_list: Vec<u32> = (0..nv as u32).filter(|&r| essential[r as usize]).collect();

        let mut universe: Vec<Member> = Vec::with_capacity(nv + edge_iota.len());
        let mut edges_by_iota: HashMap<u32, Vec<u32>> = HashMap::new();
        for e in 0..edge_iota.len() {
            edges_by_iota.entry(edge_iota[e]).or_default().push(e as u32);
        }
        for v in 0..nv as u32 {
            universe.push(v);
            if let Some(es) = edges_by_iota.get(&v) {
                for &e in es {
                    universe.push(nv as u32 + e);
                }
            }
        }

        let mut hasher = Sha256::new();
        hasher.update(serialize_graph(g).as_bytes());
        let graph_hash = hex_prefix(&hasher.finalize());

        World {
            n,
            nv,
            names,
            parent,
            parent_edge,
            edge_iota,
            edge_tau,
            edge_in_tree,
            degree,
            essential,
            essential_list,
            direction,
            tin,
            tout,
            universe,
            graph_hash,
            euler_graph: g.euler_characteristic(),
        }
    }

    pub fn n_edges(&self) -> usize {
        self.edge_iota.len()
    }

    pub fn is_edge(&self, m: Member) -> bool {
        (m as usize) >= self.nv
    }

    pub fn as_edge(&self, m: Member) -> u32 {
        debug_assert!(self.is_edge(m));
        m - self.nv as u32
    }

    pub fn edge_member(&self, e: u32) -> Member {
        self.nv as u32 + e
    }

    /// sort key of a member: its own rank, or the rank of iota for an edge
    pub fn key(&self, m: Member) -> u32 {
        if self.is_edge(m) {
            self.edge_iota[self.as_edge(m) as usize]
        } else {
            m
        }
    }

    pub fn closure(&self, m: Member) -> (u32, Option<u32>) {
        if self.is_edge(m) {
            let e = self.as_edge(m) as usize;
            (self.edge_iota[e], Some(self.edge_tau[e]))
        } else {
            (m, None)
        }
    }

    pub fn is_ancestor_or_self(&self, a: u32, b: u32) -> bool {
        self.tin[a as usize] <= self.tin[b as usize]
            && self.tout[b as usize] <= self.tout[a as usize]
    }

    /// direction label at `v1` of the tree geodesic toward `v2`
    pub fn g(&self, v1: u32, v2: u32) -> usize {
        if v1 == v2 || !self.is_ancestor_or_self(v1, v2) {
            return 0;
        }
        for (label, &e) in self.direction[v1 as usize].iter().enumerate() {
            if e == NO_EDGE || !self.edge_in_tree[e as usize] {
                continue;
            }
            let child = self.other_endpoint(e, v1);
            if self.parent[child as usize] == v1 && self.is_ancestor_or_self(child, v2) {
                return label;
            }
        }
        unreachable!("v2 lies in some child subtree")
    }

    pub fn other_endpoint(&self, e: u32, v: u32) -> u32 {
        let e = e as usize;
        if self.edge_iota[e] == v {
            self.edge_tau[e]
        } else {
            self.edge_iota[e]
        }
    }

    /// neighbor of `v` in direction `label`
    pub fn neighbor_in_dir(&self, v: u32, label: usize) -> Option<u32> {
        let e = *self.direction[v as usize].get(label)?;
        if e == NO_EDGE {
            return None;
        }
        Some(self.other_endpoint(e, v))
    }

    pub fn wedge(&self, v1: u32, v2: u32) -> u32 {
        let mut a = v1;
        while !self.is_ancestor_or_self(a, v2) {
            a = self.parent[a as usize];
        }
        a
    }

    pub fn dim(&self, members: &[Member]) -> usize {
        members.iter().filter(|&&m| self.is_edge(m)).count()
    }

    pub fn display_member(&self, m: Member) -> String {
        if self.is_edge(m) {
            let e = self.as_edge(m) as usize;
            let iname = &self.names[self.edge_iota[e] as usize];
            if self.edge_in_tree[e] {
                match iname.strip_prefix('v').filter(|r| r.chars().all(|c| c.is_ascii_digit())) {
                    Some(digits) => format!("e{}", digits),
                    None => format!("e({})", iname),
                }
            } else {
                format!(
                    "D({}-{})",
                    self.names[self.edge_tau[e] as usize], iname
                )
            }
        } else if m == 0 {
            "*".to_string()
        } else {
            self.names[m as usize].clone()
        }
    }

    pub fn display_cell(&self, c: &Cell) -> String {
        let parts: Vec<String> = c.0.iter().map(|&m| self.display_member(m)).collect();
        format!("{{{}}}", parts.join(","))
    }

    /// cell from unsorted members; asserts disjoint closures in debug builds
    pub fn cell(&self, members: &[Member]) -> Cell {
        let mut v = members.to_vec();
        v.sort_by_key(|&m| self.key(m));
        debug_assert!(self.closures_disjoint(&v));
        Cell(v)
    }

    fn closures_disjoint(&self, members: &[Member]) -> bool {
        let mut seen = Vec::new();
        for &m in members {
            let (a, b) = self.closure(m);
            for x in [Some(a), b].into_iter().flatten() {
                if seen.contains(&x) {
                    return false;
                }
                seen.push(x);
            }
        }
        true
    }

    /// replace one member, keeping the key order
    pub fn replace_member(&self, c: &Cell, old: Member, new: Member) -> Cell {
        let mut v = c.0.clone();
        let pos = v.iter().position(|&m| m == old).expect("member present");
        if self.key(old) == self.key(new) {
            v[pos] = new;
        } else {
            v.remove(pos);
            let k = self.key(new);
            let at = v.partition_point(|&m| self.key(m) < k);
            v.insert(at, new);
        }
        debug_assert!(self.closures_disjoint(&v));
        Cell(v)
    }

    /// the two codimension-one faces obtained from one edge member
    pub fn faces_of_edge(&self, c: &Cell, e_member: Member) -> (Cell, Cell) {
        let e = self.as_edge(e_member) as usize;
        let at_iota = self.replace_member(c, e_member, self.edge_iota[e]);
        let at_tau = self.replace_member(c, e_member, self.edge_tau[e]);
        (at_iota, at_tau)
    }

    pub fn faces(&self, c: &Cell) -> Vec<Cell> {
        let mut out = Vec::with_capacity(2 * self.dim(&c.0));
        for &m in &c.0 {
            if self.is_edge(m) {
                let (a, b) = self.faces_of_edge(c, m);
                out.push(a);
                out.push(b);
            }
        }
        out
    }

    /// Canonical boundary word of a 2-cell: with the two edges ordered by
    /// tau, fix the tau-smaller edge at iota for the first side, then go
    /// around the square: top, right, inverse bottom, inverse left.
    pub fn boundary_word(&self, c: &Cell) -> Result<Vec<(Cell, bool)>, ComplexError> {
        let edges: Vec<Member> = c.0.iter().copied().filter(|&m| self.is_edge(m)).collect();
        if edges.len() != 2 {
            return Err(ComplexError::NotATwoCell(edges.len()));
        }
        let tau = |m: Member| self.edge_tau[self.as_edge(m) as usize];
        let (f, h) = if tau(edges[0]) < tau(edges[1]) {
            (edges[0], edges[1])
        } else {
            (edges[1], edges[0])
        };
        Ok(self.square_word(c, f, h))
    }

    /// Boundary word of the square `c` with `f` fixed first: the side where
    /// `f` sits at iota is traversed first, positively.
    pub fn square_word(&self, c: &Cell, f: Member, h: Member) -> Vec<(Cell, bool)> {
        let fe = self.as_edge(f) as usize;
        let he = self.as_edge(h) as usize;
        let top = self.replace_member(c, f, self.edge_iota[fe]); // contains h
        let bottom = self.replace_member(c, f, self.edge_tau[fe]); // contains h
        let left = self.replace_member(c, h, self.edge_iota[he]); // contains f
        let right = self.replace_member(c, h, self.edge_tau[he]); // contains f
        vec![(top, true), (right, true), (bottom, false), (left, false)]
    }
}

fn ord_tin(ord: &VertexOrder, v: usize) -> usize {
    ord.tin_of(v)
}
fn ord_tout(ord: &VertexOrder, v: usize) -> usize {
    ord.tout_of(v)
}

fn hex_prefix(bytes: &[u8]) -> String {
    bytes.iter().take(8).map(|b| format!("{:02x}", b)).collect()
}

pub const DEFAULT_CAP: u64 = 10_000_000;

#[derive(Debug, Clone, Copy)]
pub struct EnumFilter {
    pub dim: Option<usize>,
    pub cap: u64,
}

impl Default for EnumFilter {
    fn default() -> Self {
        EnumFilter {
            dim: None,
            cap: DEFAULT_CAP,
        }
    }
}

struct Enumerator<'a, F: FnMut(&[Member])> {
    w: &'a World,
    filter: EnumFilter,
    visit: F,
    count: u64,
    chosen: Vec<Member>,
    occupied: [u64; 4],
}

impl<'a, F: FnMut(&[Member])> Enumerator<'a, F> {
    fn occupy(&mut self, v: u32) -> bool {
        let (w, b) = (v as usize / 64, v as usize % 64);
        if self.occupied[w] & (1 << b) != 0 {
            return false;
        }
        self.occupied[w] |= 1 << b;
        true
    }

    fn release(&mut self, v: u32) {
        let (w, b) = (v as usize / 64, v as usize % 64);
        self.occupied[w] &= !(1 << b);
    }

    fn free(&self, v: u32) -> bool {
        let (w, b) = (v as usize / 64, v as usize % 64);
        self.occupied[w] & (1 << b) == 0
    }

    fn rec(&mut self, start: usize, remaining: usize, edges: usize) -> Result<(), ComplexError> {
        if remaining == 0 {
            if self.filter.dim.map_or(true, |d| edges == d) {
                self.count += 1;
                if self.count > self.filter.cap {
                    return Err(ComplexError::CapExceeded {
                        cap: self.filter.cap,
                    });
                }
                (self.visit)(&self.chosen);
            }
            return Ok(());
        }
        if let Some(d) = self.filter.dim {
            if edges > d || edges + remaining < d {
                return Ok(());
            }
        }
        let universe = &self.w.universe;
        if universe.len() - start < remaining {
            return Ok(());
        }
        for idx in start..universe.len() {
            if universe.len() - idx < remaining {
                break;
            }
            let m = universe[idx];
            let (a, b) = self.w.closure(m);
            if !self.free(a) || b.map_or(false, |x| !self.free(x)) {
                continue;
            }
            if let Some(d) = self.filter.dim {
                let is_e = self.w.is_edge(m);
                if is_e && edges == d {
                    continue;
                }
            }
            self.occupy(a);
            if let Some(x) = b {
                self.occupy(x);
            }
            self.chosen.push(m);
            let new_edges = edges + usize::from(self.w.is_edge(m));
            let r = self.rec(idx + 1, remaining - 1, new_edges);
            self.chosen.pop();
            self.release(a);
            if let Some(x) = b {
                self.release(x);
            }
            r?;
        }
        Ok(())
    }
}

/// Visits every cell of the complex exactly once, in canonical (lexicographic
/// by member keys) order. Returns how many were visited.
pub fn enumerate_cells<F: FnMut(&[Member])>(
    w: &World,
    filter: EnumFilter,
    visit: F,
) -> Result<u64, ComplexError> {
    assert!(w.nv <= 256, "vertex count exceeds the fixed bitset");
    let mut en = Enumerator {
        w,
        filter,
        visit,
        count: 0,
        chosen: Vec::with_capacity(w.n),
        occupied: [0u64; 4],
    };
    en.rec(0, w.n, 0)?;
    Ok(en.count)
}

/// Independent enumeration strategy for cross-checks: pick the edge subset
/// first, then fill in vertices.
pub fn enumerate_cells_edge_first(w: &World, dim: usize) -> Vec<Cell> {
    let mut out = Vec::new();
    let ne = w.n_edges();
    let mut edges: Vec<u32> = Vec::new();
    fn pick_edges(
        w: &World,
        start: usize,
        need: usize,
        edges: &mut Vec<u32>,
        out: &mut Vec<Cell>,
    ) {
        if need == 0 {
            // fill with vertices avoiding the closures
            let mut blocked = vec![false; w.nv];
            for &e in edges.iter() {
                blocked[w.edge_iota[e as usize] as usize] = true;
                blocked[w.edge_tau[e as usize] as usize] = true;
            }
            let free: Vec<u32> = (0..w.nv as u32).filter(|&v| !blocked[v as usize]).collect();
            let slots = w.n - edges.len();
            let mut pick = Vec::new();
            fn choose(
                w: &World,
                free: &[u32],
                start: usize,
                slots: usize,
                pick: &mut Vec<u32>,
                edges: &[u32],
                out: &mut Vec<Cell>,
            ) {
                if slots == 0 {
                    let mut members: Vec<Member> = pick.clone();
                    members.extend(edges.iter().map(|&e| w.edge_member(e)));
                    out.push(w.cell(&members));
                    return;
                }
                for i in start..free.len() {
                    if free.len() - i < slots {
                        break;
                    }
                    pick.push(free[i]);
                    choose(w, free, i + 1, slots - 1, pick, edges, out);
                    pick.pop();
                }
            }
            choose(w, &free, 0, slots, &mut pick, edges, out);
            return;
        }
        for e in start..w.n_edges() {
            let (i1, t1) = (w.edge_iota[e], w.edge_tau[e]);
            if edges.iter().any(|&f| {
                let (i2, t2) = (w.edge_iota[f as usize], w.edge_tau[f as usize]);
                i1 == i2 || i1 == t2 || t1 == i2 || t1 == t2
            }) {
                continue;
            }
            edges.push(e as u32);
            pick_edges(w, e + 1, need - 1, edges, out);
            edges.pop();
        }
    }
    let _ = ne;
    pick_edges(w, 0, dim, &mut edges, &mut out);
    out.sort();
    out
}

/// Euler characteristic of the configuration complex.
pub fn euler_characteristic(w: &World, cap: u64) -> Result<i64, ComplexError> {
    let mut chi: i64 = 0;
    let filter = EnumFilter { dim: None, cap };
    enumerate_cells(w, filter, |members| {
        let d = members.iter().filter(|&&m| m as usize >= w.nv).count();
        chi += if d % 2 == 0 { 1 } else { -1 };
    })?;
    Ok(chi)
}

/// Cell counts per dimension.
pub fn cell_counts(w: &World, cap: u64) -> Result<Vec<u64>, ComplexError> {
    let mut counts = vec![0u64; w.n + 1];
    enumerate_cells(w, EnumFilter { dim: None, cap }, |members| {
        let d = members.iter().filter(|&&m| m as usize >= w.nv).count();
        counts[d] += 1;
    })?;
    while counts.last() == Some(&0) {
        counts.pop();
    }
    Ok(counts)
}
