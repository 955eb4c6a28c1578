//! Subdivision-invariant names for cells built from blocked clusters: an
//! edge at an essential vertex with stacked vertices (`A2[(1,2)]`), clusters
//! with or without the essential vertex itself (`A.[...]` / `A[...]`),
//! deleted edges, and vertices stacked at the basepoint (`k*`).

use std::collections::HashMap;

use thiserror::Error;

use crate::complex::{Cell, Member, World};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NotationError {
    #[error("cell is not expressible in cluster notation: {0}")]
    NotExpressible(String),
    #[error("notation is ambiguous at {0}: the stack passes a branching vertex")]
    Ambiguous(String),
    #[error("stack runs out of room at {0}")]
    NoRoom(String),
    #[error("decoded members overlap")]
    Overlap,
    #[error("notation names {got} strands, expected {want}")]
    WrongCount { got: usize, want: usize },
    #[error("no edge in direction {dir} at essential vertex {at}")]
    BadDirection { at: String, dir: usize },
}

/// One additive term of a cluster expression. Directions are 1-based;
/// `vec[i-1]` counts the cells in direction `i`, with the edge of an
/// edge-term counted in its own direction.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    /// X_m[vec]: an edge in direction m at essential vertex X (tree edge,
    /// tau = X), vec[m-1] - 1 vertices stacked behind it, plus blocked
    /// vertex chains in the other directions
    EssEdge { ess: u32, dir: usize, vec: Vec<u32> },
    /// X.[vec]: the essential vertex itself plus its chains
    EssDotted { ess: u32, vec: Vec<u32> },
    /// X[vec]: the chains without the essential vertex
    EssPlain { ess: u32, vec: Vec<u32> },
    /// a deleted edge, listed as-is
    Deleted { edge: u32 },
    /// k vertices stacked at the basepoint, the basepoint included
    Star { count: u32 },
}

impl Term {
    pub fn strands(&self) -> usize {
        match self {
            Term::EssEdge { vec, .. } => vec.iter().sum::<u32>() as usize,
            Term::EssDotted { vec, .. } => 1 + vec.iter().sum::<u32>() as usize,
            Term::EssPlain { vec, .. } => vec.iter().sum::<u32>() as usize,
            Term::Deleted { .. } => 1,
            Term::Star { count } => *count as usize,
        }
    }

    fn sort_key(&self) -> (u8, u32) {
        match self {
            Term::EssEdge { ess, .. } | Term::EssDotted { ess, .. } | Term::EssPlain { ess, .. } => {
                (0, *ess)
            }
            Term::Deleted { edge } => (1, *edge),
            Term::Star { .. } => (2, 0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Notation(pub Vec<Term>);

impl Notation {
    pub fn new(mut terms: Vec<Term>) -> Notation {
        terms.retain(|t| !matches!(t, Term::Star { count: 0 }));
        terms.sort_by_key(Term::sort_key);
        Notation(terms)
    }

    pub fn strands(&self) -> usize {
        self.0.iter().map(Term::strands).sum()
    }
}

/// letter of the i-th essential vertex: A, B, ..., Z, then X26, X27, ...
pub fn essential_letter(i: usize) -> String {
    if i < 26 {
        ((b'A' + i as u8) as char).to_string()
    } else {
        format!("X{}", i)
    }
}

fn letter_of(w: &World, ess: u32) -> String {
    let idx = w
        .essential_list
        .iter()
        .position(|&v| v == ess)
        .expect("essential vertex");
    essential_letter(idx)
}

fn render_vec(vec: &[u32]) -> String {
    let inner: Vec<String> = vec.iter().map(|x| x.to_string()).collect();
    format!("({})", inner.join(","))
}

pub fn render(w: &World, n: &Notation) -> String {
    let parts: Vec<String> = n
        .0
        .iter()
        .map(|t| match t {
            Term::EssEdge { ess, dir, vec } => {
                format!("{}{}[{}]", letter_of(w, *ess), dir, render_vec(vec))
            }
            Term::EssDotted { ess, vec } => {
                format!("{}.[{}]", letter_of(w, *ess), render_vec(vec))
            }
            Term::EssPlain { ess, vec } => {
                format!("{}[{}]", letter_of(w, *ess), render_vec(vec))
            }
            Term::Deleted { edge } => w.display_member(w.edge_member(*edge)),
            Term::Star { count } => format!("{}*", count),
        })
        .collect();
    parts.join("+")
}

/// tree children of a vertex
fn tree_children(w: &World, v: u32) -> Vec<u32> {
    let mut out = Vec::new();
    for &e in &w.direction[v as usize] {
        if e == crate::complex::NO_EDGE || !w.edge_in_tree[e as usize] {
            continue;
        }
        let other = w.other_endpoint(e, v);
        if w.parent[other as usize] == v {
            out.push(other);
        }
    }
    out
}

/// Walks a stack of `count` vertices starting at `start` (inclusive),
/// following unique tree children; errors when the walk forks or runs out.
fn walk_chain(w: &World, start: u32, count: usize, out: &mut Vec<Member>) -> Result<(), NotationError> {
    let mut cur = start;
    for step in 0..count {
        out.push(cur);
        if step + 1 == count {
            break;
        }
        let kids = tree_children(w, cur);
        match kids.len() {
            0 => return Err(NotationError::NoRoom(w.names[cur as usize].clone())),
            1 => cur = kids[0],
            _ => return Err(NotationError::Ambiguous(w.names[cur as usize].clone())),
        }
    }
    Ok(())
}

/// Materializes the unique cell a notation names. Errors on stacks that pass
/// a branching vertex (ambiguous), run off the graph, overlap, or do not add
/// up to the world's strand count.
pub fn decode(w: &World, n: &Notation) -> Result<Cell, NotationError> {
    if n.strands() != w.n {
        return Err(NotationError::WrongCount {
            got: n.strands(),
            want: w.n,
        });
    }
    let mut members: Vec<Member> = Vec::with_capacity(w.n);
    for term in &n.0 {
        match term {
            Term::EssEdge { ess, dir, vec } => {
                let x = *ess;
                if *dir == 0 {
                    return Err(NotationError::BadDirection {
                        at: w.names[x as usize].clone(),
                        dir: 0,
                    });
                }
                let e = w.direction[x as usize]
                    .get(*dir)
                    .copied()
                    .filter(|&e| e != crate::complex::NO_EDGE && w.edge_in_tree[e as usize])
                    .ok_or(NotationError::BadDirection {
                        at: w.names[x as usize].clone(),
                        dir: *dir,
                    })?;
                if vec.get(dir - 1).copied().unwrap_or(0) == 0 {
                    return Err(NotationError::BadDirection {
                        at: w.names[x as usize].clone(),
                        dir: *dir,
                    });
                }
                members.push(w.edge_member(e));
                let behind = vec[dir - 1] as usize - 1;
                if behind > 0 {
                    let iota = w.edge_iota[e as usize];
                    let kids = tree_children(w, iota);
                    match kids.len() {
                        0 => return Err(NotationError::NoRoom(w.names[iota as usize].clone())),
                        1 => walk_chain(w, kids[0], behind, &mut members)?,
                        _ => {
                            return Err(NotationError::Ambiguous(w.names[iota as usize].clone()))
                        }
                    }
                }
                decode_side_chains(w, x, *dir, vec, &mut members)?;
            }
            Term::EssDotted { ess, vec } => {
                members.push(*ess);
                decode_side_chains(w, *ess, 0, vec, &mut members)?;
            }
            Term::EssPlain { ess, vec } => {
                decode_side_chains(w, *ess, 0, vec, &mut members)?;
            }
            Term::Deleted { edge } => {
                members.push(w.edge_member(*edge));
            }
            Term::Star { count } => {
                walk_chain(w, 0, *count as usize, &mut members)?;
            }
        }
    }
    // validate disjointness explicitly
    let mut seen = vec![false; w.nv];
    for &m in &members {
        let (a, b) = w.closure(m);
        for x in [Some(a), b].into_iter().flatten() {
            if seen[x as usize] {
                return Err(NotationError::Overlap);
            }
            seen[x as usize] = true;
        }
    }
    Ok(w.cell(&members))
}

fn decode_side_chains(
    w: &World,
    x: u32,
    skip_dir: usize,
    vec: &[u32],
    members: &mut Vec<Member>,
) -> Result<(), NotationError> {
    for (i, &count) in vec.iter().enumerate() {
        let dir = i + 1;
        if dir == skip_dir || count == 0 {
            continue;
        }
        let e = w.direction[x as usize]
            .get(dir)
            .copied()
            .filter(|&e| e != crate::complex::NO_EDGE && w.edge_in_tree[e as usize])
            .ok_or(NotationError::BadDirection {
                at: w.names[x as usize].clone(),
                dir,
            })?;
        let first = w.other_endpoint(e, x);
        walk_chain(w, first, count as usize, members)?;
    }
    Ok(())
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Cluster {
    Star,
    AtEss { x: u32, dir: usize },
    Behind { edge: u32 },
    Dot { x: u32 },
}

/// Expresses a cell in cluster notation, or explains why it cannot be.
/// The result always decodes back to the same cell.
pub fn encode(w: &World, c: &Cell) -> Result<Notation, NotationError> {
    let mut terms: Vec<Term> = Vec::new();
    let mut edge_at: HashMap<u32, (u32, usize)> = HashMap::new(); // essential -> (edge, dir)
    let mut behind_count: HashMap<u32, u32> = HashMap::new();
    for &m in &c.0 {
        if !w.is_edge(m) {
            continue;
        }
        let e = w.as_edge(m);
        if !w.edge_in_tree[e as usize] {
            terms.push(Term::Deleted { edge: e });
            continue;
        }
        let tau = w.edge_tau[e as usize];
        if !w.essential[tau as usize] {
            return Err(NotationError::NotExpressible(format!(
                "tree edge at inessential vertex {}",
                w.names[tau as usize]
            )));
        }
        let dir = w.direction[tau as usize]
            .iter()
            .position(|&d| d == e)
            .expect("incident edge has a direction");
        edge_at.insert(tau, (e, dir));
    }

    // assign each vertex member to a cluster; parents come first because
    // members are sorted by rank
    let in_cell: HashMap<u32, ()> = c
        .0
        .iter()
        .filter(|&&m| !w.is_edge(m))
        .map(|&m| (m, ()))
        .collect();
    let mut assignment: HashMap<u32, Cluster> = HashMap::new();
    let mut counts: HashMap<(u32, usize), u32> = HashMap::new();
    let mut dotted: Vec<u32> = Vec::new();
    let mut star = 0u32;
    for &m in &c.0 {
        if w.is_edge(m) {
            continue;
        }
        let v = m;
        let cluster = if v == 0 {
            Cluster::Star
        } else {
            let p = w.parent[v as usize];
            if in_cell.contains_key(&p) {
                match assignment[&p] {
                    Cluster::Dot { x } => {
                        let pe = w.parent_edge[v as usize];
                        let dir = w.direction[x as usize]
                            .iter()
                            .position(|&d| d == pe)
                            .expect("edge to parent");
                        Cluster::AtEss { x, dir }
                    }
                    other => other,
                }
            } else if let Some(&(_, _)) = edge_at.get(&p) {
                let pe = w.parent_edge[v as usize];
                let dir = w.direction[p as usize]
                    .iter()
                    .position(|&d| d == pe)
                    .expect("edge to parent");
                Cluster::AtEss { x: p, dir }
            } else if let Some(e) = c.0.iter().find_map(|&m2| {
                if w.is_edge(m2) {
                    let e2 = w.as_edge(m2);
                    if w.edge_iota[e2 as usize] == p && w.edge_in_tree[e2 as usize] {
                        return Some(e2);
                    }
                }
                None
            }) {
                Cluster::Behind { edge: e }
            } else if w.essential[p as usize] {
                let pe = w.parent_edge[v as usize];
                let dir = w.direction[p as usize]
                    .iter()
                    .position(|&d| d == pe)
                    .expect("edge to parent");
                Cluster::AtEss { x: p, dir }
            } else if w.essential[v as usize] {
                Cluster::Dot { x: v }
            } else {
                return Err(NotationError::NotExpressible(format!(
                    "vertex {} is not anchored to the basepoint or an essential vertex",
                    w.names[v as usize]
                )));
            }
        };
        assignment.insert(v, cluster);
        match cluster {
            Cluster::Star => star += 1,
            Cluster::AtEss { x, dir } => *counts.entry((x, dir)).or_default() += 1,
            Cluster::Behind { edge } => *behind_count.entry(edge).or_default() += 1,
            Cluster::Dot { x } => dotted.push(x),
        }
    }

    // assemble per essential vertex
    let mut seen_ess: Vec<u32> = Vec::new();
    for &(x, _) in counts.keys() {
        if !seen_ess.contains(&x) {
            seen_ess.push(x);
        }
    }
    for &x in edge_at.keys() {
        if !seen_ess.contains(&x) {
            seen_ess.push(x);
        }
    }
    for &x in &dotted {
        if !seen_ess.contains(&x) {
            seen_ess.push(x);
        }
    }
    seen_ess.sort_unstable();
    for x in seen_ess {
        let d = w.degree[x as usize] as usize;
        let mut vec = vec![0u32; d - 1];
        for dir in 1..d {
            if let Some(&cnt) = counts.get(&(x, dir)) {
                vec[dir - 1] = cnt;
            }
        }
        if let Some(&(e, dir)) = edge_at.get(&x) {
            vec[dir - 1] = 1 + behind_count.get(&e).copied().unwrap_or(0);
            terms.push(Term::EssEdge { ess: x, dir, vec });
        } else if dotted.contains(&x) {
            terms.push(Term::EssDotted { ess: x, vec });
        } else {
            terms.push(Term::EssPlain { ess: x, vec });
        }
    }
    if star > 0 {
        terms.push(Term::Star { count: star });
    }
    let notation = Notation::new(terms);
    // round-trip: the notation must name this cell and nothing else
    let back = decode(w, &notation)?;
    if &back != c {
        return Err(NotationError::NotExpressible(format!(
            "clusters of {} are not canonical stacks",
            w.display_cell(c)
        )));
    }
    Ok(notation)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collection;
    use crate::complex::World;
    use crate::pipeline::prepare_graph;

    fn fig1_world(n: usize) -> World {
        let (g, ord) = collection::fig1_ordered();
        World::build(&g, &ord, n)
    }

    fn v(w: &World, i: usize) -> u32 {
        let name = format!("v{}", i);
        (0..w.nv as u32).find(|&r| w.names[r as usize] == name).unwrap()
    }

    fn e(w: &World, i: usize) -> Member {
        let vi = v(w, i);
        w.edge_member(w.parent_edge[vi as usize])
    }

    #[test]
    fn paper_examples_encode_and_render() {
        let w = fig1_world(3);
        // A2[(1,2)] = {v4, e7, v8}
        let c = w.cell(&[v(&w, 4), e(&w, 7), v(&w, 8)]);
        let n = encode(&w, &c).unwrap();
        assert_eq!(render(&w, &n), "A2[(1,2)]");
        assert_eq!(decode(&w, &n).unwrap(), c);
        // A1[(3,0)] = {v6, v5, e4}
        let c = w.cell(&[v(&w, 6), v(&w, 5), e(&w, 4)]);
        let n = encode(&w, &c).unwrap();
        assert_eq!(render(&w, &n), "A1[(3,0)]");
        assert_eq!(decode(&w, &n).unwrap(), c);
    }

    #[test]
    fn star_and_edge_term_combination() {
        let w = fig1_world(4);
        // B2[(1,2)] + 1* = {v10, e19, v20, *}
        let c = w.cell(&[v(&w, 10), e(&w, 19), v(&w, 20), 0]);
        let n = encode(&w, &c).unwrap();
        assert_eq!(render(&w, &n), "B2[(1,2)]+1*");
        assert_eq!(decode(&w, &n).unwrap(), c);
    }

    #[test]
    fn dotted_and_plain_clusters() {
        let w = fig1_world(4);
        // B.[(2,1)] = {v9, v10, v11, v19}
        let c = w.cell(&[v(&w, 9), v(&w, 10), v(&w, 11), v(&w, 19)]);
        let n = encode(&w, &c).unwrap();
        assert_eq!(render(&w, &n), "B.[(2,1)]");
        assert_eq!(decode(&w, &n).unwrap(), c);
        // B[(2,1)] + 1* = {v10, v11, v19} + {*}
        let c = w.cell(&[v(&w, 10), v(&w, 11), v(&w, 19), 0]);
        let n = encode(&w, &c).unwrap();
        assert_eq!(render(&w, &n), "B[(2,1)]+1*");
        assert_eq!(decode(&w, &n).unwrap(), c);
    }

    #[test]
    fn two_cell_notation() {
        let w = fig1_world(4);
        // B2[(1,1)] + C2[(1,1)] = {v10, e19, v13, e16}
        let c = w.cell(&[v(&w, 10), e(&w, 19), v(&w, 13), e(&w, 16)]);
        let n = encode(&w, &c).unwrap();
        assert_eq!(render(&w, &n), "B2[(1,1)]+C2[(1,1)]");
    }

    #[test]
    fn ambiguous_stack_past_branching_vertex() {
        let w = fig1_world(4);
        // B1[(4,0)]: four cells stacked in direction 1 from B pass through C
        let bad = Notation::new(vec![Term::EssEdge {
            ess: v(&w, 9),
            dir: 1,
            vec: vec![4, 0],
        }]);
        match decode(&w, &bad) {
            Err(NotationError::Ambiguous(at)) => assert_eq!(at, "v12"),
            other => panic!("expected ambiguity, got {:?}", other),
        }
    }

    #[test]
    fn unblocked_inessential_vertex_is_not_expressible() {
        let w = fig1_world(5);
        // {v10, v9, v20, v22, e25}: v20 hangs loose
        let c = w.cell(&[v(&w, 10), v(&w, 9), v(&w, 20), v(&w, 22), e(&w, 25)]);
        assert!(matches!(
            encode(&w, &c),
            Err(NotationError::NotExpressible(_))
        ));
    }

    #[test]
    fn wrong_strand_count_rejected() {
        let w = fig1_world(4);
        let n = Notation::new(vec![Term::Star { count: 2 }]);
        assert_eq!(
            decode(&w, &n),
            Err(NotationError::WrongCount { got: 2, want: 4 })
        );
    }

    #[test]
    fn round_trip_on_all_critical_cells() {
        for n in [2, 3, 4] {
            let (w, _) = prepare_graph(&collection::fig1_tree(), n, None, false).unwrap();
            let crit = crate::morse::critical_cells(&w, 1_000_000).unwrap();
            for cells in &crit.per_dim[1..] {
                for c in cells {
                    let nt = encode(&w, c).expect("critical cells are expressible");
                    assert_eq!(decode(&w, &nt).unwrap(), *c);
                }
            }
        }
    }
}
