//! Presentations of graph braid groups: generators are the critical 1-cells,
//! relators the reduced boundary words of the critical 2-cells. For trees the
//! reduced words come from closed formulas; for general graphs they are
//! computed by running the rewrite system on the boundary word directly.

use std::collections::HashMap;

use thiserror::Error;

use crate::complex::{Cell, ComplexError, World};
use crate::homology;
use crate::morse::{self, MorseError};
use crate::notation::{self, Notation, NotationError, Term};
use crate::rewrite::{
    cyclic_normal_form, free_reduce, invert_word, RewriteEngine, RewriteError, Strategy,
    DEFAULT_BUDGET,
};

#[derive(Debug, Error)]
pub enum PresError {
    #[error(transparent)]
    Morse(#[from] MorseError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
    #[error(transparent)]
    Notation(#[from] NotationError),
    #[error("critical 2-cell {0} is not a pair of essential-vertex subconfigurations")]
    ClosedFormInapplicable(String),
    #[error("normal form letter {0} is not a known generator")]
    UnknownGenerator(String),
    #[error("the counting formula does not apply: {0}")]
    FormulaInapplicable(String),
}

#[derive(Debug, Clone)]
pub struct Generator {
    pub cell: Cell,
    pub notation: Option<Notation>,
}

/// Relator over generator letters: `+(i+1)` / `-(i+1)` refers to generator i.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relator {
    /// the two halves of the commutator form, when one is known
    pub halves: Option<(Vec<i32>, Vec<i32>)>,
    /// flattened, freely reduced word
    pub word: Vec<i32>,
}

impl Relator {
    pub fn from_halves(p: Vec<i32>, q: Vec<i32>) -> Relator {
        let pi = invert_word(&p);
        let qi = invert_word(&q);
        let word = free_reduce(
            &p.iter()
                .chain(q.iter())
                .chain(pi.iter())
                .chain(qi.iter())
                .copied()
                .collect::<Vec<_>>(),
        );
        Relator {
            halves: Some((p, q)),
            word,
        }
    }

    /// representative independent of the boundary-word starting corner
    pub fn normalized(&self) -> Vec<i32> {
        cyclic_normal_form(&self.word)
    }
}

#[derive(Debug, Clone)]
pub struct Presentation {
    pub generators: Vec<Generator>,
    pub relators: Vec<Relator>,
    /// critical cell counts per dimension
    pub m: Vec<u64>,
    pub n: usize,
    pub graph_hash: String,
    /// set on non-tree inputs, whose presentations are not optimized
    pub non_optimal: bool,
    pub convention: &'static str,
}

pub const CONVENTION: &str =
    "boundary=square(top,right,~bottom,~left) with edges tau-sorted; generators=deleted,(vertex,dir,vec,star); v1";

/// Critical 1-cells in presentation order: deleted-edge generators first (by
/// edge), then essential-vertex cells by (vertex, direction, vector, stars).
pub fn order_generators(w: &World, mut cells: Vec<Cell>) -> Vec<Generator> {
    #[derive(PartialEq, Eq, PartialOrd, Ord)]
    struct Key(u8, u64, u64, Vec<u32>, u64, Cell);
    let mut keyed: Vec<(Key, Generator)> = cells
        .drain(..)
        .map(|cell| {
            let notation = notation::encode(w, &cell).ok();
            let deleted = cell
                .0
                .iter()
                .find(|&&m| w.is_edge(m) && !w.edge_in_tree[w.as_edge(m) as usize]);
            let key = if let Some(&m) = deleted {
                Key(0, w.as_edge(m) as u64, 0, Vec::new(), 0, cell.clone())
            } else if let Some(nt) = &notation {
                let mut ess = 0u64;
                let mut dir = 0u64;
                let mut vec = Vec::new();
                let mut star = 0u64;
                for t in &nt.0 {
                    match t {
                        Term::EssEdge { ess: x, dir: d, vec: v } => {
                            ess = *x as u64;
                            dir = *d as u64;
                            vec = v.clone();
                        }
                        Term::Star { count } => star = *count as u64,
                        _ => {}
                    }
                }
                Key(1, ess, dir, vec, star, cell.clone())
            } else {
                Key(2, 0, 0, Vec::new(), 0, cell.clone())
            };
            (key, Generator { cell, notation })
        })
        .collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    keyed.into_iter().map(|(_, g)| g).collect()
}

pub fn generator_lit(idx: usize, positive: bool) -> i32 {
    let v = idx as i32 + 1;
    if positive {
        v
    } else {
        -v
    }
}

/// Reduced boundary words computed by the rewrite system. Works on any
/// graph.
pub fn relators_generic(
    w: &World,
    engine: &mut RewriteEngine,
    two_cells: &[Cell],
    generators: &[Generator],
) -> Result<Vec<Relator>, PresError> {
    let index: HashMap<&Cell, usize> = generators
        .iter()
        .enumerate()
        .map(|(i, g)| (&g.cell, i))
        .collect();
    let mut out = Vec::with_capacity(two_cells.len());
    for c in two_cells {
        let bw = w.boundary_word(c)?;
        let word = engine.word_from_cells(&bw);
        let nf = engine.reduce(&word, Strategy::Leftmost, DEFAULT_BUDGET)?;
        let mut gen_word = Vec::with_capacity(nf.len());
        for l in nf {
            let cell = engine.cell_of(crate::rewrite::lit_id(l));
            let idx = *index
                .get(cell)
                .ok_or_else(|| PresError::UnknownGenerator(w.display_cell(cell)))?;
            gen_word.push(generator_lit(idx, l > 0));
        }
        out.push(Relator {
            halves: None,
            word: free_reduce(&gen_word),
        });
    }
    Ok(out)
}

/// subtract 1 from the first non-zero entry
fn sub_first_nonzero(v: &mut [u32]) {
    for x in v.iter_mut() {
        if *x > 0 {
            *x -= 1;
            return;
        }
    }
    panic!("subtraction from the zero vector");
}

/// 1-based index of the smallest non-zero coordinate
fn first_nonzero_dir(v: &[u32]) -> usize {
    v.iter().position(|&x| x > 0).expect("non-zero vector") + 1
}

fn vec_sum(v: &[u32]) -> u32 {
    v.iter().sum()
}

struct TwoCellShape {
    a: u32,
    k: usize,
    avec: Vec<u32>,
    b: u32,
    l: usize,
    bvec: Vec<u32>,
    p: u32,
}

fn decompose_two_cell(w: &World, c: &Cell) -> Result<TwoCellShape, PresError> {
    let nt = notation::encode(w, c)
        .map_err(|_| PresError::ClosedFormInapplicable(w.display_cell(c)))?;
    let mut edges: Vec<(u32, usize, Vec<u32>)> = Vec::new();
    let mut p = 0u32;
    for t in &nt.0 {
        match t {
            Term::EssEdge { ess, dir, vec } => edges.push((*ess, *dir, vec.clone())),
            Term::Star { count } => p = *count,
            _ => return Err(PresError::ClosedFormInapplicable(w.display_cell(c))),
        }
    }
    if edges.len() != 2 {
        return Err(PresError::ClosedFormInapplicable(w.display_cell(c)));
    }
    let (a, k, avec) = edges[0].clone();
    let (b, l, bvec) = edges[1].clone();
    debug_assert!(a < b);
    Ok(TwoCellShape {
        a,
        k,
        avec,
        b,
        l,
        bvec,
        p,
    })
}

struct LetterTable<'a> {
    w: &'a World,
    by_notation: HashMap<Notation, usize>,
}

impl<'a> LetterTable<'a> {
    fn new(w: &'a World, generators: &[Generator]) -> Self {
        let by_notation = generators
            .iter()
            .enumerate()
            .filter_map(|(i, g)| g.notation.clone().map(|nt| (nt, i)))
            .collect();
        LetterTable { w, by_notation }
    }

    fn lit(&self, ess: u32, dir: usize, vec: Vec<u32>, star: u32, positive: bool) -> Result<i32, PresError> {
        let nt = Notation::new(vec![
            Term::EssEdge { ess, dir, vec },
            Term::Star { count: star },
        ]);
        let idx = self
            .by_notation
            .get(&nt)
            .copied()
            .ok_or_else(|| PresError::UnknownGenerator(notation::render(self.w, &nt)))?;
        Ok(generator_lit(idx, positive))
    }
}

/// The closed-form reduced boundary words for critical 2-cells of a tree,
/// one commutator per cell. With the two essential subconfigurations
/// A_k[a] (lower vertex) and B_l[b] and p stacked at the basepoint:
///
/// * when the lower vertex lies below the other, the relator is
///   `[ w3^-1 (A_k[a + |b| d_i] + p*) w3' , (B_l[b] + (p+|a|)*) ]`;
/// * when they hang off a common essential vertex C in directions i < j,
///   it is `[ (B_l[b] + (p+|a|)*) , w1 (A_k[a] + (p+|b|)*) w1^-1 ]`.
///
/// Factors of the connecting words that name collapsible cells are dropped.
pub fn relators_tree_closed_form(
    w: &World,
    two_cells: &[Cell],
    generators: &[Generator],
) -> Result<Vec<Relator>, PresError> {
    let table = LetterTable::new(w, generators);
    let mut out = Vec::with_capacity(two_cells.len());
    for c in two_cells {
        let shape = decompose_two_cell(w, c)?;
        let TwoCellShape {
            a,
            k,
            avec,
            b,
            l,
            bvec,
            p,
        } = shape;
        let meet = w.wedge(a, b);
        let relator = if meet == a {
            // the other subconfiguration hangs above A in direction i
            let i = w.g(a, b);
            let mut yvec = avec.clone();
            yvec[i - 1] += vec_sum(&bvec);
            let y = table.lit(a, k, yvec, p, true)?;
            let w3 = connecting_word_w3(&table, a, i, &avec, &bvec, p)?;
            let mut avec2 = avec.clone();
            avec2[k - 1] -= 1;
            let w3p = connecting_word_w3(&table, a, i, &avec2, &bvec, p + 1)?;
            let mut ph: Vec<i32> = invert_word(&w3);
            ph.push(y);
            ph.extend_from_slice(&w3p);
            let q = table.lit(b, l, bvec.clone(), p + vec_sum(&avec), true)?;
            Relator::from_halves(free_reduce(&ph), vec![q])
        } else {
            // both hang off the essential vertex C = meet in directions i < j
            let cvert = meet;
            let i = w.g(cvert, a);
            let j = w.g(cvert, b);
            debug_assert!(i < j, "vertex order puts the i-side first");
            let x = table.lit(b, l, bvec.clone(), p + vec_sum(&avec), true)?;
            let dc = w.degree[cvert as usize] as usize;
            let mut w1: Vec<i32> = Vec::new();
            let bsum = vec_sum(&bvec);
            for alpha in 0..bsum {
                let mut vec = vec![0u32; dc - 1];
                vec[i - 1] += vec_sum(&avec);
                vec[j - 1] += bsum - alpha;
                if first_nonzero_dir(&vec) < j {
                    w1.push(table.lit(cvert, j, vec, p + alpha, true)?);
                }
            }
            let y = table.lit(a, k, avec.clone(), p + bsum, true)?;
            let mut qh = w1.clone();
            qh.push(y);
            qh.extend(invert_word(&w1));
            Relator::from_halves(vec![x], free_reduce(&qh))
        };
        out.push(relator);
    }
    Ok(out)
}

/// w3 = prod over alpha of (A_beta[|b| d_i + (a - alpha)] + (p + alpha)*),
/// where `a - alpha` subtracts one from the first non-zero entry alpha
/// times, beta is the first non-zero direction of the result, and factors
/// with beta <= i name collapsible cells and are dropped.
fn connecting_word_w3(
    table: &LetterTable,
    a: u32,
    i: usize,
    avec: &[u32],
    bvec: &[u32],
    p: u32,
) -> Result<Vec<i32>, PresError> {
    let mut out = Vec::new();
    let mut current = avec.to_vec();
    let total = vec_sum(avec);
    let bsum = vec_sum(bvec);
    for alpha in 0..total {
        if alpha > 0 {
            sub_first_nonzero(&mut current);
        }
        let beta = first_nonzero_dir(&current);
        if beta > i {
            let mut vec = current.clone();
            vec[i - 1] += bsum;
            out.push(table.lit(a, beta, vec, p + alpha, true)?);
        }
    }
    Ok(out)
}

/// Generator count from the counting formula: deleted edges plus, for every
/// essential vertex, the number of admissible blocked configurations around
/// it. Requires deleted edges to end at inessential tree leaves.
pub fn generator_count_formula(w: &World) -> Result<u64, PresError> {
    let n = w.n as u64;
    let mut tree_degree = vec![0u64; w.nv];
    for e in 0..w.n_edges() {
        if w.edge_in_tree[e] {
            tree_degree[w.edge_iota[e] as usize] += 1;
            tree_degree[w.edge_tau[e] as usize] += 1;
        }
    }
    let mut deleted = 0u64;
    for e in 0..w.n_edges() {
        if !w.edge_in_tree[e] {
            for v in [w.edge_iota[e], w.edge_tau[e]] {
                if tree_degree[v as usize] != 1 {
                    return Err(PresError::FormulaInapplicable(format!(
                        "deleted edge endpoint {} has tree degree {}",
                        w.names[v as usize], tree_degree[v as usize]
                    )));
                }
                if w.essential[v as usize] {
                    return Err(PresError::FormulaInapplicable(format!(
                        "deleted edge endpoint {} is essential",
                        w.names[v as usize]
                    )));
                }
            }
            deleted += 1;
        }
    }
    let mut total = deleted;
    for &v in &w.essential_list {
        let d = w.degree[v as usize] as u64;
        for i in 2..d {
            total += binomial(n + d - 2, n - 1) - binomial(n + d - i - 1, n - 1);
        }
    }
    Ok(total)
}

/// Rank of the free braid group of a radial tree with central degree `d`.
pub fn radial_rank(d: u64, n: u64) -> u64 {
    let mut total = 0;
    for i in 2..d {
        total += binomial(n + d - 2, n - 1) - binomial(n + d - i - 1, n - 1);
    }
    total
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

#[derive(Debug, Clone)]
pub struct CommutationGraph {
    pub n_vertices: usize,
    pub edges: Vec<(usize, usize)>,
}

/// When every relator is a commutator of two distinct single generators,
/// returns the commutation graph; otherwise None.
pub fn raag_commutation_graph(p: &Presentation) -> Option<CommutationGraph> {
    let mut edges = Vec::new();
    for r in &p.relators {
        let nf = r.normalized();
        if nf.is_empty() {
            continue;
        }
        if nf.len() != 4 || nf[0] != -nf[2] || nf[1] != -nf[3] {
            return None;
        }
        let a = (nf[0].abs() - 1) as usize;
        let b = (nf[1].abs() - 1) as usize;
        if a == b {
            return None;
        }
        let pair = (a.min(b), a.max(b));
        if !edges.contains(&pair) {
            edges.push(pair);
        }
    }
    edges.sort_unstable();
    Some(CommutationGraph {
        n_vertices: p.generators.len(),
        edges,
    })
}

/// Does the graph contain a complete bipartite K33 as a subgraph?
pub fn contains_k33(g: &CommutationGraph) -> bool {
    let n = g.n_vertices;
    let words = (n + 63) / 64;
    let mut adj = vec![vec![0u64; words]; n];
    for &(a, b) in &g.edges {
        adj[a][b / 64] |= 1 << (b % 64);
        adj[b][a / 64] |= 1 << (a % 64);
    }
    let popcount = |bits: &[u64]| bits.iter().map(|w| w.count_ones()).sum::<u32>();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let mut common = vec![0u64; words];
                for k in 0..words {
                    common[k] = adj[a][k] & adj[b][k] & adj[c][k];
                }
                for x in [a, b, c] {
                    common[x / 64] &= !(1 << (x % 64));
                }
                if popcount(&common) >= 3 {
                    return true;
                }
            }
        }
    }
    false
}

/// Rank of the abelianized group: generators minus the integer rank of the
/// relator exponent matrix.
pub fn abelianization_rank(p: &Presentation) -> u64 {
    let mut cols: Vec<Vec<(u32, i64)>> = Vec::new();
    for r in &p.relators {
        let mut sums: HashMap<u32, i64> = HashMap::new();
        for &l in &r.word {
            let idx = (l.abs() - 1) as u32;
            *sums.entry(idx).or_default() += if l > 0 { 1 } else { -1 };
        }
        let mut col: Vec<(u32, i64)> = sums.into_iter().filter(|&(_, v)| v != 0).collect();
        col.sort_unstable();
        if !col.is_empty() {
            cols.push(col);
        }
    }
    let rank = homology::integer_rank(cols).rank;
    p.generators.len() as u64 - rank
}

/// Full pipeline on a prepared world: classify, pick generators, compute
/// relators (closed form on trees, rewrite engine elsewhere).
pub fn build_presentation(w: &World, cap: u64) -> Result<Presentation, PresError> {
    let crit = morse::critical_cells(w, cap)?;
    let generators = order_generators(w, crit.per_dim[1].clone());
    let two_cells = crit.per_dim.get(2).cloned().unwrap_or_default();
    let is_tree = w.euler_graph == 1;
    let relators = if is_tree {
        relators_tree_closed_form(w, &two_cells, &generators)?
    } else {
        let mut engine = RewriteEngine::new(w);
        relators_generic(w, &mut engine, &two_cells, &generators)?
    };
    Ok(Presentation {
        generators,
        relators,
        m: crit.m,
        n: w.n,
        graph_hash: w.graph_hash.clone(),
        non_optimal: !is_tree,
        convention: CONVENTION,
    })
}

pub fn render_generator(w: &World, g: &Generator) -> String {
    match &g.notation {
        Some(nt) => notation::render(w, nt),
        None => w.display_cell(&g.cell),
    }
}

fn render_letter(w: &World, p: &Presentation, l: i32) -> String {
    let idx = (l.abs() - 1) as usize;
    let base = format!("({})", render_generator(w, &p.generators[idx]));
    if l > 0 {
        base
    } else {
        format!("{}^-1", base)
    }
}

pub fn render_word(w: &World, p: &Presentation, word: &[i32]) -> String {
    if word.is_empty() {
        return "1".to_string();
    }
    word.iter()
        .map(|&l| render_letter(w, p, l))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn render_relator(w: &World, p: &Presentation, r: &Relator) -> String {
    match &r.halves {
        Some((a, b)) => format!(
            "[ {} , {} ]",
            render_word(w, p, a),
            render_word(w, p, b)
        ),
        None => render_word(w, p, &r.word),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collection;
    use crate::pipeline::prepare_graph;

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 3), 10);
        assert_eq!(binomial(4, 3), 4);
        assert_eq!(binomial(7, 5), 21);
        assert_eq!(binomial(6, 5), 6);
        assert_eq!(binomial(3, 5), 0);
    }

    #[test]
    fn radial_rank_values() {
        assert_eq!(radial_rank(3, 2), 1);
        assert_eq!(radial_rank(3, 4), 6);
        assert_eq!(radial_rank(3, 1), 0);
    }

    #[test]
    fn formula_on_trees() {
        // one strand on any tree: no generators
        let (w, _) = prepare_graph(&collection::y_graph(), 1, None, true).unwrap();
        assert_eq!(generator_count_formula(&w).unwrap(), 0);
        // the worked example: four essential vertices of degree 3, n = 4
        let (w, _) = prepare_graph(&collection::fig1_tree(), 4, None, false).unwrap();
        assert_eq!(generator_count_formula(&w).unwrap(), 24);
        // H-tree at n = 6: 2 [ C(7,5) - C(6,5) ] = 30
        let (w, _) = prepare_graph(&collection::h_tree(), 6, None, true).unwrap();
        assert_eq!(generator_count_formula(&w).unwrap(), 30);
    }

    #[test]
    fn formula_rejects_essential_deleted_endpoints() {
        let (g, forced) = collection::k4_star();
        let (w, _) = prepare_graph(&g, 2, Some(&forced), true).unwrap();
        assert!(matches!(
            generator_count_formula(&w),
            Err(PresError::FormulaInapplicable(_))
        ));
    }

    #[test]
    fn fig1_n4_generators() {
        let (w, _) = prepare_graph(&collection::fig1_tree(), 4, None, false).unwrap();
        let p = build_presentation(&w, 10_000_000).unwrap();
        assert_eq!(p.generators.len(), 24);
        assert_eq!(p.m, vec![1, 24, 6]);
        let rendered: Vec<String> = p
            .generators
            .iter()
            .map(|g| render_generator(&w, g))
            .collect();
        // six vectors per essential vertex, in vector order
        let vecs = ["(1,1)", "(1,2)", "(1,3)", "(2,1)", "(2,2)", "(3,1)"];
        let mut expected = Vec::new();
        for letter in ["A", "B", "C", "D"] {
            for v in vecs {
                let total: u32 = v[1..v.len() - 1]
                    .split(',')
                    .map(|x| x.parse::<u32>().unwrap())
                    .sum();
                let star = 4 - total;
                if star > 0 {
                    expected.push(format!("{}2[{}]+{}*", letter, v, star));
                } else {
                    expected.push(format!("{}2[{}]", letter, v));
                }
            }
        }
        assert_eq!(rendered, expected);
    }

    #[test]
    fn radial_presentations_are_free() {
        for (d, n) in [(3, 2), (3, 3), (4, 2), (5, 3)] {
            let (w, _) = prepare_graph(&collection::radial(d), n, None, true).unwrap();
            let p = build_presentation(&w, 10_000_000).unwrap();
            assert!(p.relators.is_empty(), "d={} n={}", d, n);
            assert_eq!(p.generators.len() as u64, radial_rank(d as u64, n as u64));
            let raag = raag_commutation_graph(&p).unwrap();
            assert!(raag.edges.is_empty());
            assert_eq!(abelianization_rank(&p), p.generators.len() as u64);
        }
    }

    #[test]
    fn k4_two_strands_free_of_rank_four() {
        let (g, forced) = collection::k4_star();
        let (w, _) = prepare_graph(&g, 2, Some(&forced), true).unwrap();
        let p = build_presentation(&w, 1_000_000).unwrap();
        assert_eq!(p.m, vec![1, 4]);
        assert!(p.relators.is_empty());
        assert!(p.non_optimal);
    }

    #[test]
    fn closed_form_matches_generic_on_small_trees() {
        for (g0, n) in [
            (collection::fig1_tree(), 4),
            (collection::h_tree(), 4),
            (collection::y_graph(), 4),
        ] {
            let (w, _) = prepare_graph(&g0, n, None, true).unwrap();
            let crit = morse::critical_cells(&w, 10_000_000).unwrap();
            let generators = order_generators(&w, crit.per_dim[1].clone());
            let two = crit.per_dim.get(2).cloned().unwrap_or_default();
            let closed = relators_tree_closed_form(&w, &two, &generators).unwrap();
            let mut engine = RewriteEngine::new(&w);
            let generic = relators_generic(&w, &mut engine, &two, &generators).unwrap();
            assert_eq!(closed.len(), generic.len());
            for (c, g) in closed.iter().zip(&generic) {
                assert_eq!(c.normalized(), g.normalized());
            }
        }
    }

    #[test]
    fn k33_detection() {
        let mut edges = Vec::new();
        for a in 0..3 {
            for b in 3..6 {
                edges.push((a, b));
            }
        }
        let g = CommutationGraph {
            n_vertices: 7,
            edges,
        };
        assert!(contains_k33(&g));
        let sparse = CommutationGraph {
            n_vertices: 6,
            edges: vec![(0, 3), (1, 4), (2, 5)],
        };
        assert!(!contains_k33(&sparse));
    }
}
