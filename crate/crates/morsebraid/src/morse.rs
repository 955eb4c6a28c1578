//! The discrete gradient vector field: blocked vertices, principal
//! reductions, order-respecting edges, and the local classification of every
//! cell as critical, redundant or collapsible.

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use crate::complex::{enumerate_cells, Cell, ComplexError, EnumFilter, Member, World};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Tag {
    Critical,
    Redundant,
    Collapsible,
}

#[derive(Debug, Error)]
pub enum MorseError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("{count} critical 0-cells found; the field demands exactly one ({examples})")]
    MultipleCriticalZeroCells { count: usize, examples: String },
    #[error("cycle detected in W-paths at {0}")]
    RankCycle(String),
    #[error("critical cell {cell} of dimension {dim} exceeds the bound {bound}")]
    DimBound { cell: String, dim: usize, bound: usize },
}

/// occupancy bitset over vertex ranks of all member closures
pub fn occupied(w: &World, members: &[Member]) -> [u64; 4] {
    let mut occ = [0u64; 4];
    for &m in members {
        let (a, b) = w.closure(m);
        occ[a as usize / 64] |= 1 << (a % 64);
        if let Some(x) = b {
            occ[x as usize / 64] |= 1 << (x % 64);
        }
    }
    occ
}

fn occ_has(occ: &[u64; 4], v: u32) -> bool {
    occ[v as usize / 64] & (1 << (v % 64)) != 0
}

/// A vertex is blocked when it is the basepoint or its parent edge meets
/// another member of the cell.
pub fn is_blocked(w: &World, members: &[Member], v: u32) -> bool {
    debug_assert!(members.contains(&v));
    if v == 0 {
        return true;
    }
    let occ = occupied(w, members);
    occ_has(&occ, w.parent[v as usize])
}

fn unblocked_with_occ(w: &World, members: &[Member], occ: &[u64; 4]) -> Vec<u32> {
    members
        .iter()
        .copied()
        .filter(|&m| !w.is_edge(m) && m != 0 && !occ_has(occ, w.parent[m as usize]))
        .collect()
}

pub fn unblocked_vertices(w: &World, members: &[Member]) -> Vec<u32> {
    let occ = occupied(w, members);
    unblocked_with_occ(w, members, &occ)
}

/// Replaces the smallest unblocked vertex with its parent edge.
pub fn principal_reduction(w: &World, c: &Cell) -> Option<Cell> {
    let v = *unblocked_vertices(w, &c.0).first()?;
    let e = w.parent_edge[v as usize];
    Some(w.replace_member(c, v, w.edge_member(e)))
}

/// A tree edge `e` of the cell is order-respecting when every cell vertex
/// whose parent edge meets `e` in tau(e) lies above iota(e).
pub fn is_order_respecting(w: &World, members: &[Member], e_member: Member) -> bool {
    let e = w.as_edge(e_member) as usize;
    if !w.edge_in_tree[e] {
        return false;
    }
    let (iota, tau) = (w.edge_iota[e], w.edge_tau[e]);
    for &m in members {
        if w.is_edge(m) || m == 0 {
            continue;
        }
        if w.parent[m as usize] == tau && m < iota {
            return false;
        }
    }
    true
}

/// All order-respecting edge members, in increasing iota order (which is the
/// member order), so the first entry is the minimal one.
pub fn order_respecting_edges(w: &World, members: &[Member]) -> Vec<Member> {
    members
        .iter()
        .copied()
        .filter(|&m| w.is_edge(m) && is_order_respecting(w, members, m))
        .collect()
}

/// Local classification straight from the classification theorem; no part of
/// W is materialized.
pub fn classify(w: &World, members: &[Member]) -> Tag {
    let occ = occupied(w, members);
    let mut min_unblocked: Option<u32> = None;
    for &m in members {
        if !w.is_edge(m) && m != 0 && !occ_has(&occ, w.parent[m as usize]) {
            min_unblocked = Some(m);
            break;
        }
    }
    let mut min_or: Option<u32> = None;
    for &m in members {
        if w.is_edge(m) && is_order_respecting(w, members, m) {
            min_or = Some(w.edge_iota[w.as_edge(m) as usize]);
            break;
        }
    }
    match (min_or, min_unblocked) {
        (None, None) => Tag::Critical,
        (None, Some(_)) => Tag::Redundant,
        (Some(iota), Some(v)) if v < iota => Tag::Redundant,
        (Some(_), _) => Tag::Collapsible,
    }
}

/// W itself: defined exactly on redundant cells, as the principal reduction.
pub fn apply_w(w: &World, c: &Cell) -> Option<Cell> {
    match classify(w, &c.0) {
        Tag::Redundant => {
            Some(principal_reduction(w, c).expect("redundant cells have a principal reduction"))
        }
        _ => None,
    }
}

/// Preimage of a collapsible cell: replace the minimal order-respecting edge
/// by its iota endpoint.
pub fn w_preimage(w: &World, c: &Cell) -> Option<Cell> {
    if classify(w, &c.0) != Tag::Collapsible {
        return None;
    }
    let e = *order_respecting_edges(w, &c.0).first().expect("collapsible cell");
    let iota = w.edge_iota[w.as_edge(e) as usize];
    Some(w.replace_member(c, e, iota))
}

/// Number of members contained in the tree geodesic from the basepoint to v.
pub fn f_v(w: &World, members: &[Member], v: u32) -> u32 {
    let mut count = 0;
    for &m in members {
        let inside = if w.is_edge(m) {
            let e = w.as_edge(m) as usize;
            w.edge_in_tree[e] && w.is_ancestor_or_self(w.edge_iota[e], v)
        } else {
            w.is_ancestor_or_self(m, v)
        };
        if inside {
            count += 1;
        }
    }
    count
}

#[derive(Default)]
pub struct RankCache {
    memo: HashMap<Cell, u32>,
}

/// Length of the longest repetition-free W-path from `c`; 1 for critical and
/// collapsible cells. Errors out if the traversal ever loops.
pub fn cell_rank(w: &World, cache: &mut RankCache, c: &Cell) -> Result<u32, MorseError> {
    const IN_PROGRESS: u32 = u32::MAX;
    if let Some(&r) = cache.memo.get(c) {
        if r == IN_PROGRESS {
            return Err(MorseError::RankCycle(w.display_cell(c)));
        }
        return Ok(r);
    }
    let rank = match apply_w(w, c) {
        None => 1,
        Some(image) => {
            cache.memo.insert(c.clone(), IN_PROGRESS);
            let mut best = 0;
            for face in w.faces(&image) {
                if &face == c {
                    continue;
                }
                best = best.max(cell_rank(w, cache, &face)?);
            }
            best + 1
        }
    };
    cache.memo.insert(c.clone(), rank);
    Ok(rank)
}

#[derive(Debug, Clone, Serialize)]
pub struct CriticalCells {
    /// critical cells grouped by dimension, canonical order within each
    #[serde(skip)]
    pub per_dim: Vec<Vec<Cell>>,
    /// m_p counts
    pub m: Vec<u64>,
    pub total_cells: u64,
}

/// Enumerates the whole complex once, keeping the critical cells. Checks the
/// unique-critical-0-cell invariant and the dimension bounds.
pub fn critical_cells(w: &World, cap: u64) -> Result<CriticalCells, MorseError> {
    let mut per_dim: Vec<Vec<Cell>> = vec![Vec::new(); w.n + 1];
    let mut total = 0u64;
    enumerate_cells(w, EnumFilter { dim: None, cap }, |members| {
        total += 1;
        if classify(w, members) == Tag::Critical {
            let d = w.dim(members);
            per_dim[d].push(Cell(members.to_vec()));
        }
    })?;
    while per_dim.len() > 1 && per_dim.last().map_or(false, |v| v.is_empty()) {
        per_dim.pop();
    }
    let m: Vec<u64> = per_dim.iter().map(|v| v.len() as u64).collect();
    if m[0] != 1 {
        let examples = per_dim[0]
            .iter()
            .take(3)
            .map(|c| w.display_cell(c))
            .collect::<Vec<_>>()
            .join(", ");
        return Err(MorseError::MultipleCriticalZeroCells {
            count: m[0] as usize,
            examples,
        });
    }
    let is_tree = w.euler_graph == 1;
    let essentials = w.essential_list.len();
    let bound = if is_tree {
        (w.n / 2).min(essentials)
    } else {
        ((w.n as i64 + 1 - w.euler_graph) / 2) as usize
    };
    for (d, cells) in per_dim.iter().enumerate() {
        if d > bound {
            if let Some(c) = cells.first() {
                return Err(MorseError::DimBound {
                    cell: w.display_cell(c),
                    dim: d,
                    bound,
                });
            }
        }
    }
    Ok(CriticalCells {
        per_dim,
        m,
        total_cells: total,
    })
}

/// Critical cells of one dimension only (cheaper than a full sweep).
pub fn critical_cells_dim(w: &World, dim: usize, cap: u64) -> Result<Vec<Cell>, MorseError> {
    let mut out = Vec::new();
    enumerate_cells(w, EnumFilter { dim: Some(dim), cap }, |members| {
        if classify(w, members) == Tag::Critical {
            out.push(Cell(members.to_vec()));
        }
    })?;
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct ClauseReport {
    pub passed: bool,
    pub counterexample: Option<String>,
}

impl ClauseReport {
    fn ok() -> Self {
        ClauseReport {
            passed: true,
            counterexample: None,
        }
    }
    fn fail(msg: String) -> Self {
        ClauseReport {
            passed: false,
            counterexample: Some(msg),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FieldReport {
    pub injective: ClauseReport,
    pub dom_im_disjoint: ClauseReport,
    pub paths_terminate: ClauseReport,
    pub f_v_monotone: ClauseReport,
    pub regular_faces: ClauseReport,
    pub counts_match: ClauseReport,
    pub total_cells: u64,
}

impl FieldReport {
    pub fn all_passed(&self) -> bool {
        self.injective.passed
            && self.dom_im_disjoint.passed
            && self.paths_terminate.passed
            && self.f_v_monotone.passed
            && self.regular_faces.passed
            && self.counts_match.passed
    }
}

/// Full validation of the vector-field axioms by exhaustive enumeration:
/// injectivity, dom/im disjointness, termination of W-paths (by traversal and
/// by the f_v potential), and the regular-face condition.
pub fn validate_field(w: &World, cap: u64) -> Result<FieldReport, MorseError> {
    let mut cells: Vec<Cell> = Vec::new();
    enumerate_cells(w, EnumFilter { dim: None, cap }, |members| {
        cells.push(Cell(members.to_vec()));
    })?;
    let total = cells.len() as u64;

    let mut injective = ClauseReport::ok();
    let mut dom_im = ClauseReport::ok();
    let mut regular = ClauseReport::ok();
    let mut counts = ClauseReport::ok();
    let mut images: HashMap<Cell, Cell> = HashMap::new();
    let mut redundant_by_dim: HashMap<usize, u64> = HashMap::new();
    let mut collapsible_by_dim: HashMap<usize, u64> = HashMap::new();

    for c in &cells {
        match classify(w, &c.0) {
            Tag::Redundant => {
                *redundant_by_dim.entry(w.dim(&c.0)).or_default() += 1;
                let image = apply_w(w, c).expect("redundant");
                if classify(w, &image.0) != Tag::Collapsible && dom_im.passed {
                    dom_im = ClauseReport::fail(format!(
                        "W({}) = {} is not collapsible",
                        w.display_cell(c),
                        w.display_cell(&image)
                    ));
                }
                let appearances = w.faces(&image).into_iter().filter(|f| f == c).count();
                if appearances != 1 && regular.passed {
                    regular = ClauseReport::fail(format!(
                        "{} appears {} times in the boundary of its image",
                        w.display_cell(c),
                        appearances
                    ));
                }
                if let Some(prev) = images.insert(image.clone(), c.clone()) {
                    if injective.passed {
                        injective = ClauseReport::fail(format!(
                            "{} and {} share the image {}",
                            w.display_cell(&prev),
                            w.display_cell(c),
                            w.display_cell(&image)
                        ));
                    }
                }
            }
            Tag::Collapsible => {
                *collapsible_by_dim.entry(w.dim(&c.0)).or_default() += 1;
                let pre = w_preimage(w, c).expect("collapsible");
                let back = apply_w(w, &pre);
                if back.as_ref() != Some(c) && dom_im.passed {
                    dom_im = ClauseReport::fail(format!(
                        "preimage of {} does not map back",
                        w.display_cell(c)
                    ));
                }
            }
            Tag::Critical => {}
        }
    }
    for (d, &r) in &redundant_by_dim {
        if collapsible_by_dim.get(&(d + 1)).copied().unwrap_or(0) != r && counts.passed {
            counts = ClauseReport::fail(format!(
                "redundant count in dim {} does not match collapsible count in dim {}",
                d,
                d + 1
            ));
        }
    }
    for (d, &c) in &collapsible_by_dim {
        if *d == 0 || redundant_by_dim.get(&(d - 1)).copied().unwrap_or(0) != c {
            if counts.passed {
                counts = ClauseReport::fail(format!("collapsible count mismatch in dim {}", d));
            }
        }
    }

    // termination by traversal over the W-path successor relation
    let mut paths = ClauseReport::ok();
    let mut color: HashMap<Cell, u8> = HashMap::new(); // 1 = on stack, 2 = done
    for c in &cells {
        if classify(w, &c.0) != Tag::Redundant || color.contains_key(c) {
            continue;
        }
        let mut stack: Vec<(Cell, Vec<Cell>, usize)> = Vec::new();
        let succ = |cell: &Cell| -> Vec<Cell> {
            match apply_w(w, cell) {
                None => Vec::new(),
                Some(img) => w.faces(&img).into_iter().filter(|f| f != cell).collect(),
            }
        };
        color.insert(c.clone(), 1);
        stack.push((c.clone(), succ(c), 0));
        while let Some((cur, succs, idx)) = stack.last_mut() {
            if *idx >= succs.len() {
                color.insert(cur.clone(), 2);
                stack.pop();
                continue;
            }
            let next = succs[*idx].clone();
            *idx += 1;
            match color.get(&next) {
                Some(1) => {
                    if paths.passed {
                        paths = ClauseReport::fail(format!(
                            "closed W-path through {}",
                            w.display_cell(&next)
                        ));
                    }
                }
                Some(_) => {}
                None => {
                    let s = succ(&next);
                    color.insert(next.clone(), 1);
                    stack.push((next, s, 0));
                }
            }
        }
    }

    // f_v potential: along c -> (face of W(c)), the total potential never
    // drops, and level moves must replace a tree edge by iota while the
    // minimal order-respecting iota strictly decreases
    let mut fv = ClauseReport::ok();
    let phi = |cell: &Cell| -> u64 {
        (0..w.nv as u32).map(|v| f_v(w, &cell.0, v) as u64).sum()
    };
    let min_or_iota = |cell: &Cell| -> u64 {
        order_respecting_edges(w, &cell.0)
            .first()
            .map(|&m| w.edge_iota[w.as_edge(m) as usize] as u64)
            .unwrap_or(u64::MAX)
    };
    let mut fv_checked = 0u64;
    'outer: for c in &cells {
        if classify(w, &c.0) != Tag::Redundant {
            continue;
        }
        let image = apply_w(w, c).expect("redundant");
        // property 1: f_v is constant under W
        for v in 0..w.nv as u32 {
            if f_v(w, &c.0, v) != f_v(w, &image.0, v) {
                fv = ClauseReport::fail(format!(
                    "f_v changed under W at {}",
                    w.display_cell(c)
                ));
                break 'outer;
            }
        }
        let pc = phi(c);
        for face in w.faces(&image) {
            if &face == c {
                continue;
            }
            let pf = phi(&face);
            if pf < pc {
                fv = ClauseReport::fail(format!(
                    "potential dropped from {} to {}",
                    w.display_cell(c),
                    w.display_cell(&face)
                ));
                break 'outer;
            }
            if pf == pc && classify(w, &face.0) == Tag::Redundant {
                if min_or_iota(&face) >= min_or_iota(c) {
                    fv = ClauseReport::fail(format!(
                        "level move without descent at {}",
                        w.display_cell(c)
                    ));
                    break 'outer;
                }
            }
        }
        fv_checked += 1;
        if fv_checked >= 100_000 {
            break; // deterministic prefix on very large instances
        }
    }

    Ok(FieldReport {
        injective,
        dom_im_disjoint: dom_im,
        paths_terminate: paths,
        f_v_monotone: fv,
        regular_faces: regular,
        counts_match: counts,
        total_cells: total,
    })
}

/// The inductive, dimension-by-dimension definition of W, materialized. Used
/// to test that the local classification agrees with the definition.
pub fn classify_inductive(w: &World, cap: u64) -> Result<HashMap<Cell, Tag>, MorseError> {
    let mut by_dim: Vec<Vec<Cell>> = vec![Vec::new(); w.n + 1];
    enumerate_cells(w, EnumFilter { dim: None, cap }, |members| {
        by_dim[w.dim(members)].push(Cell(members.to_vec()));
    })?;
    let mut tags = HashMap::new();
    let mut prev_image: std::collections::HashSet<Cell> = Default::default();
    for cells in by_dim.iter() {
        let mut cur_image = std::collections::HashSet::new();
        for c in cells {
            let principal = principal_reduction(w, c);
            let in_prev_image = prev_image.contains(c);
            match principal {
                Some(img) if !in_prev_image => {
                    tags.insert(c.clone(), Tag::Redundant);
                    cur_image.insert(img);
                }
                _ => {
                    // collapsible or critical, resolved below
                    tags.insert(c.clone(), Tag::Critical);
                }
            }
        }
        for c in cells {
            if prev_image.contains(c) {
                tags.insert(c.clone(), Tag::Collapsible);
            }
        }
        prev_image = cur_image;
    }
    // cells of top dimension that landed in an image set
    for c in prev_image {
        tags.insert(c.clone(), Tag::Collapsible);
    }
    Ok(tags)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collection;
    use crate::pipeline::prepare_graph;

    fn fig1_world(n: usize) -> World {
        let (g, ord) = collection::fig1_ordered();
        World::build(&g, &ord, n)
    }

    /// rank of the vertex named `vi`
    fn v(w: &World, i: usize) -> u32 {
        let name = format!("v{}", i);
        (0..w.nv as u32).find(|&r| w.names[r as usize] == name).unwrap()
    }

    fn e(w: &World, i: usize) -> Member {
        let vi = v(w, i);
        w.edge_member(w.parent_edge[vi as usize])
    }

    #[test]
    fn fig1_ranks_equal_indices() {
        let w = fig1_world(4);
        for i in 0..28 {
            assert_eq!(v(&w, i), i as u32);
        }
    }

    #[test]
    fn star_always_blocked_and_cluster_blocked() {
        let w = fig1_world(4);
        let c = w.cell(&[0, 1, 2, 3]); // 4* cluster
        for &m in c.members() {
            assert!(is_blocked(&w, c.members(), m));
        }
    }

    #[test]
    fn blocked_by_edge_through_shared_endpoint() {
        let w = fig1_world(4);
        // v10 in {v10, e19, v12, v16}: e(v10) meets e19 at v9
        let c = w.cell(&[v(&w, 10), e(&w, 19), v(&w, 12), v(&w, 16)]);
        assert!(is_blocked(&w, c.members(), v(&w, 10)));
    }

    #[test]
    fn principal_reduction_picks_minimal_unblocked() {
        let w = fig1_world(4);
        let c = w.cell(&[v(&w, 10), v(&w, 19), v(&w, 20), 0]);
        assert_eq!(
            unblocked_vertices(&w, c.members()),
            vec![v(&w, 10), v(&w, 19)]
        );
        let red = principal_reduction(&w, &c).unwrap();
        assert_eq!(red, w.cell(&[e(&w, 10), v(&w, 19), v(&w, 20), 0]));
        assert_eq!(classify(&w, c.members()), Tag::Redundant);
        let mut cache = RankCache::default();
        assert!(cell_rank(&w, &mut cache, &c).unwrap() >= 2);
    }

    #[test]
    fn all_blocked_star_cluster_is_the_unique_critical_zero_cell() {
        let w = fig1_world(4);
        let c = w.cell(&[0, 1, 2, 3]);
        assert_eq!(principal_reduction(&w, &c), None);
        assert_eq!(classify(&w, c.members()), Tag::Critical);
    }

    #[test]
    fn order_respecting_examples_from_the_text() {
        let w = fig1_world(4);
        // e19 not order-respecting in {v10, e19, v12, v16}
        let c1 = w.cell(&[v(&w, 10), e(&w, 19), v(&w, 12), v(&w, 16)]);
        assert!(!is_order_respecting(&w, c1.members(), e(&w, 19)));
        // e19 order-respecting in {e19, v20, v21, v22}
        let c2 = w.cell(&[e(&w, 19), v(&w, 20), v(&w, 21), v(&w, 22)]);
        assert!(is_order_respecting(&w, c2.members(), e(&w, 19)));
        // a deleted edge is never order-respecting: see the K4 tests
    }

    #[test]
    fn fig2_cell_is_critical() {
        let w = fig1_world(4);
        let c = w.cell(&[v(&w, 10), e(&w, 19), v(&w, 20), 0]);
        assert_eq!(classify(&w, c.members()), Tag::Critical);
        assert_eq!(apply_w(&w, &c), None);
        let mut cache = RankCache::default();
        assert_eq!(cell_rank(&w, &mut cache, &c).unwrap(), 1);
    }

    #[test]
    fn f_v_props_on_small_instance() {
        let w = fig1_world(2);
        let mut checked = 0;
        enumerate_cells(&w, EnumFilter::default(), |members| {
            let c = Cell(members.to_vec());
            if let Some(img) = apply_w(&w, &c) {
                for vtx in 0..w.nv as u32 {
                    assert_eq!(f_v(&w, &c.0, vtx), f_v(&w, &img.0, vtx));
                }
                checked += 1;
            }
            // replacing a tree edge by iota leaves every f_v unchanged
            for &m in &c.0 {
                if w.is_edge(m) && w.edge_in_tree[w.as_edge(m) as usize] {
                    let iota = w.edge_iota[w.as_edge(m) as usize];
                    let c2 = w.replace_member(&c, m, iota);
                    for vtx in 0..w.nv as u32 {
                        assert_eq!(f_v(&w, &c.0, vtx), f_v(&w, &c2.0, vtx));
                    }
                }
            }
        })
        .unwrap();
        assert!(checked > 0);
        // f_*(c) = 1 whenever * is a member
        let c = w.cell(&[0, v(&w, 5)]);
        assert_eq!(f_v(&w, &c.0, 0), 1);
    }

    #[test]
    fn fig1_n4_critical_counts() {
        let w = fig1_world(4);
        let crit = critical_cells(&w, 10_000_000).unwrap();
        assert_eq!(crit.m, vec![1, 24, 6]);
    }

    #[test]
    fn path_n2_no_critical_one_cells() {
        let g0 = collection::path(4);
        let (w, _) = prepare_graph(&g0, 2, None, true).unwrap();
        let crit = critical_cells(&w, 1_000_000).unwrap();
        assert_eq!(crit.m, vec![1]);
    }

    #[test]
    fn n1_critical_cells_are_deleted_edges_plus_basepoint() {
        let (g, forced) = collection::k4_star();
        let (w, _) = prepare_graph(&g, 1, Some(&forced), true).unwrap();
        let crit = critical_cells(&w, 1_000_000).unwrap();
        assert_eq!(crit.m, vec![1, 3]);
        for c in &crit.per_dim[1] {
            let m = c.0[0];
            assert!(w.is_edge(m));
            assert!(!w.edge_in_tree[w.as_edge(m) as usize]);
        }
    }

    #[test]
    fn radial_trees_have_no_critical_two_cells() {
        for d in 3..=5 {
            let g0 = collection::radial(d);
            let (w, _) = prepare_graph(&g0, 3, None, true).unwrap();
            let crit = critical_cells(&w, 10_000_000).unwrap();
            assert!(crit.m.len() <= 2, "d={} m={:?}", d, crit.m);
        }
    }

    #[test]
    fn validate_field_small_instances() {
        for (g0, n) in [
            (collection::fig1_tree(), 2),
            (collection::path(4), 2),
            (collection::y_graph(), 2),
        ] {
            let (w, _) = prepare_graph(&g0, n, None, true).unwrap();
            let report = validate_field(&w, 1_000_000).unwrap();
            assert!(report.all_passed(), "{:?}", report);
        }
    }

    #[test]
    fn classification_matches_inductive_definition() {
        for (g0, n, forced) in [
            (collection::fig1_tree(), 2, None),
            (collection::y_graph(), 3, None),
            (collection::k4_star().0, 2, Some(collection::k4_star().1)),
        ] {
            let (w, _) = prepare_graph(&g0, n, forced.as_deref(), true).unwrap();
            let tags = classify_inductive(&w, 1_000_000).unwrap();
            for (cell, tag) in tags {
                assert_eq!(classify(&w, &cell.0), tag, "{}", w.display_cell(&cell));
            }
        }
    }
}
