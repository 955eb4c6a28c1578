//! The complete string-rewriting system on words of oriented 1-cells: tree
//! edges erase, inverse pairs cancel, and each redundant 1-cell expands
//! through the square of its W-image. Normal forms are words in critical
//! 1-cells only and are independent of the reduction strategy.

use std::collections::HashMap;
use std::rc::Rc;

use thiserror::Error;

use crate::complex::{Cell, World};
use crate::morse::{self, Tag};
use crate::notation;

/// A letter is a signed interned 1-cell id: `+(id+1)` or `-(id+1)`.
pub type Lit = i32;

pub fn lit(id: u32, positive: bool) -> Lit {
    let v = id as i32 + 1;
    if positive {
        v
    } else {
        -v
    }
}

pub fn lit_id(l: Lit) -> u32 {
    (l.abs() - 1) as u32
}

pub fn lit_positive(l: Lit) -> bool {
    l > 0
}

pub fn invert_word(word: &[Lit]) -> Vec<Lit> {
    word.iter().rev().map(|&l| -l).collect()
}

/// concatenation with free cancellation at every junction
pub fn concat_reduced(parts: &[&[Lit]]) -> Vec<Lit> {
    let mut out: Vec<Lit> = Vec::new();
    for part in parts {
        for &l in *part {
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
    }
    out
}

pub fn free_reduce(word: &[Lit]) -> Vec<Lit> {
    concat_reduced(&[word])
}

/// cyclically reduce, then return the lexicographically least rotation
pub fn cyclic_normal_form(word: &[Lit]) -> Vec<Lit> {
    let mut w = free_reduce(word);
    while w.len() >= 2 && w.first() == w.last().map(|&l| -l).as_ref() {
        w.remove(0);
        w.pop();
        w = free_reduce(&w);
    }
    if w.is_empty() {
        return w;
    }
    let mut best = w.clone();
    for shift in 1..w.len() {
        let rotated: Vec<Lit> = w[shift..].iter().chain(w[..shift].iter()).copied().collect();
        if rotated < best {
            best = rotated;
        }
    }
    best
}

#[derive(Debug, Error)]
pub enum RewriteError {
    #[error("reduction budget of {0} steps exceeded; the rewrite system failed to terminate")]
    BudgetExceeded(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Leftmost,
    Rightmost,
}

pub const DEFAULT_BUDGET: u64 = 50_000_000;

/// Rewriting context: interns 1-cells, classifies them once, and derives the
/// square right-hand sides of redundant letters on demand.
pub struct RewriteEngine<'w> {
    pub w: &'w World,
    cells: Vec<Cell>,
    ids: HashMap<Cell, u32>,
    tags: Vec<Tag>,
    rhs: HashMap<u32, Rc<Vec<Lit>>>,
    flows: HashMap<u32, Rc<Vec<Lit>>>,
    rank: morse::RankCache,
    pub trace: bool,
}

impl<'w> RewriteEngine<'w> {
    pub fn new(w: &'w World) -> Self {
        RewriteEngine {
            w,
            cells: Vec::new(),
            ids: HashMap::new(),
            tags: Vec::new(),
            rhs: HashMap::new(),
            flows: HashMap::new(),
            rank: morse::RankCache::default(),
            trace: false,
        }
    }

    pub fn intern(&mut self, c: &Cell) -> u32 {
        if let Some(&id) = self.ids.get(c) {
            return id;
        }
        debug_assert_eq!(self.w.dim(&c.0), 1, "letters must be 1-cells");
        let id = self.cells.len() as u32;
        self.cells.push(c.clone());
        self.ids.insert(c.clone(), id);
        self.tags.push(morse::classify(self.w, &c.0));
        id
    }

    pub fn cell_of(&self, id: u32) -> &Cell {
        &self.cells[id as usize]
    }

    pub fn tag_of(&self, id: u32) -> Tag {
        self.tags[id as usize]
    }

    pub fn word_from_cells(&mut self, letters: &[(Cell, bool)]) -> Vec<Lit> {
        letters
            .iter()
            .map(|(c, pos)| {
                let id = self.intern(c);
                lit(id, *pos)
            })
            .collect()
    }

    pub fn display_lit(&self, l: Lit) -> String {
        let base = self.w.display_cell(self.cell_of(lit_id(l)));
        if lit_positive(l) {
            base
        } else {
            format!("{}^-1", base)
        }
    }

    pub fn display_word(&self, word: &[Lit]) -> String {
        if word.is_empty() {
            return "1".to_string();
        }
        word.iter().map(|&l| self.display_lit(l)).collect::<Vec<_>>().join(" ")
    }

    /// For a redundant 1-cell `c`, the type-3 right-hand side: the square of
    /// W(c) gives c -> c_iota c' inv(c_tau), with c' the opposite side and
    /// c_iota / c_tau the sides through the original edge of c.
    fn type3_rhs(&mut self, id: u32) -> Rc<Vec<Lit>> {
        if let Some(r) = self.rhs.get(&id) {
            return r.clone();
        }
        let c = self.cells[id as usize].clone();
        debug_assert_eq!(self.tags[id as usize], Tag::Redundant);
        let w = self.w;
        let image = morse::apply_w(w, &c).expect("redundant 1-cell");
        // the added edge is the parent edge of the minimal unblocked vertex
        let v = *morse::unblocked_vertices(w, &c.0).first().expect("redundant");
        let ev = w.edge_member(w.parent_edge[v as usize]);
        let e_orig = *c
            .0
            .iter()
            .find(|&&m| w.is_edge(m))
            .expect("a 1-cell has an edge");
        let c_prime = w.replace_member(&image, ev, w.edge_tau[w.as_edge(ev) as usize]);
        let (c_iota, c_tau) = w.faces_of_edge(&image, e_orig);
        debug_assert_eq!(w.replace_member(&image, ev, v), c);
        let rhs: Vec<Lit> = {
            let li = lit(self.intern(&c_iota), true);
            let lp = lit(self.intern(&c_prime), true);
            let lt = lit(self.intern(&c_tau), false);
            vec![li, lp, lt]
        };
        #[cfg(debug_assertions)]
        {
            // every letter of the right side sits strictly below c in rank
            let rc = morse::cell_rank(w, &mut self.rank, &c).expect("no W cycles");
            for &l in &rhs {
                let cell = self.cells[lit_id(l) as usize].clone();
                let rl = morse::cell_rank(w, &mut self.rank, &cell).expect("no W cycles");
                debug_assert!(rl < rc, "type-3 right side must drop in rank");
            }
        }
        let rhs = Rc::new(rhs);
        self.rhs.insert(id, rhs.clone());
        rhs
    }

    fn redex_at(&mut self, word: &[Lit], i: usize) -> Option<Redex> {
        let l = word[i];
        let id = lit_id(l);
        match self.tags[id as usize] {
            Tag::Collapsible => Some(Redex::Erase),
            _ if i + 1 < word.len() && word[i + 1] == -l => Some(Redex::Cancel),
            Tag::Redundant => Some(Redex::Expand),
            _ => None,
        }
    }

    /// One rewrite step at the given strategy's redex. Returns false when the
    /// word is already reduced.
    fn step(&mut self, word: &mut Vec<Lit>, strategy: Strategy) -> bool {
        let positions: Box<dyn Iterator<Item = usize>> = match strategy {
            Strategy::Leftmost => Box::new(0..word.len()),
            Strategy::Rightmost => Box::new((0..word.len()).rev()),
        };
        let mut hit = None;
        for i in positions {
            if let Some(r) = self.redex_at(word, i) {
                hit = Some((i, r));
                break;
            }
        }
        let Some((i, redex)) = hit else { return false };
        match redex {
            Redex::Erase => {
                if self.trace {
                    eprintln!("({} -> 1) @ {}", self.display_lit(word[i]), i);
                }
                word.remove(i);
            }
            Redex::Cancel => {
                if self.trace {
                    eprintln!(
                        "({} {} -> 1) @ {}",
                        self.display_lit(word[i]),
                        self.display_lit(word[i + 1]),
                        i
                    );
                }
                word.drain(i..i + 2);
            }
            Redex::Expand => {
                let l = word[i];
                let rhs = self.type3_rhs(lit_id(l));
                let replacement: Vec<Lit> = if lit_positive(l) {
                    rhs.to_vec()
                } else {
                    invert_word(&rhs)
                };
                if self.trace {
                    eprintln!(
                        "({} -> {}) @ {}",
                        self.display_lit(l),
                        self.display_word(&replacement),
                        i
                    );
                }
                word.splice(i..i + 1, replacement);
            }
        }
        true
    }

    /// Normal form of the word: no tree (collapsible) letters, no redundant
    /// letters, freely reduced. Independent of the strategy.
    pub fn reduce(
        &mut self,
        word: &[Lit],
        strategy: Strategy,
        budget: u64,
    ) -> Result<Vec<Lit>, RewriteError> {
        let mut w = word.to_vec();
        let mut steps = 0u64;
        while self.step(&mut w, strategy) {
            steps += 1;
            if steps > budget {
                return Err(RewriteError::BudgetExceeded(budget));
            }
        }
        Ok(w)
    }

    /// Normal form of a single 1-cell through the fast path of the redundant
    /// 1-cells lemma: while the open order-interval between the moved vertex
    /// and its parent is clear of the cell, move the vertex home directly;
    /// otherwise expand one square and recurse on strictly smaller rank.
    pub fn flow_1cell(&mut self, c: &Cell) -> Rc<Vec<Lit>> {
        let id = self.intern(c);
        if let Some(f) = self.flows.get(&id) {
            return f.clone();
        }
        let result = match self.tags[id as usize] {
            Tag::Critical => Rc::new(vec![lit(id, true)]),
            Tag::Collapsible => Rc::new(Vec::new()),
            Tag::Redundant => {
                let w = self.w;
                let v = *morse::unblocked_vertices(w, &c.0).first().expect("redundant");
                let t = w.parent[v as usize];
                // lemma hypothesis: nothing of the cell sits strictly
                // between tau(e(v)) and v in the vertex order
                let mut clear = true;
                for &m in &c.0 {
                    if m == v {
                        continue;
                    }
                    let (a, b) = w.closure(m);
                    for x in [Some(a), b].into_iter().flatten() {
                        if t < x && x < v {
                            clear = false;
                        }
                    }
                }
                if clear {
                    let direct = w.replace_member(c, v, t);
                    self.flow_1cell(&direct)
                } else {
                    let rhs = self.type3_rhs(id).to_vec();
                    let mut parts: Vec<Rc<Vec<Lit>>> = Vec::new();
                    for &l in &rhs {
                        let cell = self.cells[lit_id(l) as usize].clone();
                        let f = self.flow_1cell(&cell);
                        parts.push(if lit_positive(l) {
                            f
                        } else {
                            Rc::new(invert_word(&f))
                        });
                    }
                    let slices: Vec<&[Lit]> = parts.iter().map(|p| p.as_slice()).collect();
                    Rc::new(concat_reduced(&slices))
                }
            }
        };
        self.flows.insert(id, result.clone());
        result
    }

    /// Slides an unblocked vertex one step home while its parent edge's
    /// endpoints are consecutive in the order, preferring the largest such
    /// vertex, and stops as soon as the cell is notation-expressible.
    pub fn slide_normalize(&mut self, c: &Cell) -> Cell {
        let w = self.w;
        let mut cur = c.clone();
        loop {
            if notation::encode(w, &cur).is_ok() {
                return cur;
            }
            let occ = morse::occupied(w, &cur.0);
            let mut slid = None;
            for &m in cur.0.iter().rev() {
                if w.is_edge(m) || m == 0 {
                    continue;
                }
                let p = w.parent[m as usize];
                let blocked = occ[p as usize / 64] & (1 << (p % 64)) != 0;
                if !blocked && p + 1 == m {
                    slid = Some((m, p));
                    break;
                }
            }
            match slid {
                Some((v, p)) => cur = w.replace_member(&cur, v, p),
                None => return cur,
            }
        }
    }
}

enum Redex {
    Erase,
    Cancel,
    Expand,
}

#[derive(Debug, Default)]
pub struct ConfluenceReport {
    pub words_checked: u64,
    pub overlaps_checked: u64,
    pub divergences: Vec<String>,
    pub strategy_mismatches: Vec<String>,
}

impl ConfluenceReport {
    pub fn passed(&self) -> bool {
        self.divergences.is_empty() && self.strategy_mismatches.is_empty()
    }
}

/// For every pair of overlapping redexes in each word, checks that the two
/// one-step descendants reduce to the same normal form, and that leftmost
/// and rightmost strategies agree on the word itself. The type-2/type-2
/// overlap (e inv(e) e) reduces to e along both routes; it is exercised
/// whenever sampled words contain it.
pub fn check_local_confluence(
    engine: &mut RewriteEngine,
    words: &[Vec<Lit>],
    budget: u64,
) -> Result<ConfluenceReport, RewriteError> {
    let mut report = ConfluenceReport::default();
    for word in words {
        report.words_checked += 1;
        let nf_l = engine.reduce(word, Strategy::Leftmost, budget)?;
        let nf_r = engine.reduce(word, Strategy::Rightmost, budget)?;
        if nf_l != nf_r {
            report
                .strategy_mismatches
                .push(engine.display_word(word));
        }
        // collect all redexes with spans
        let mut redexes: Vec<(usize, usize, u8)> = Vec::new(); // (start, len, kind)
        for i in 0..word.len() {
            let id = lit_id(word[i]);
            match engine.tag_of(id) {
                Tag::Collapsible => redexes.push((i, 1, 1)),
                Tag::Redundant => redexes.push((i, 1, 3)),
                Tag::Critical => {}
            }
            if i + 1 < word.len() && word[i + 1] == -word[i] {
                redexes.push((i, 2, 2));
            }
        }
        for a in 0..redexes.len() {
            for b in a + 1..redexes.len() {
                let (s1, l1, _) = redexes[a];
                let (s2, l2, _) = redexes[b];
                if s1 + l1 <= s2 || s2 + l2 <= s1 {
                    continue; // disjoint: commute trivially
                }
                report.overlaps_checked += 1;
                let w1 = apply_redex(engine, word, redexes[a]);
                let w2 = apply_redex(engine, word, redexes[b]);
                let n1 = engine.reduce(&w1, Strategy::Leftmost, budget)?;
                let n2 = engine.reduce(&w2, Strategy::Leftmost, budget)?;
                if n1 != n2 {
                    report.divergences.push(engine.display_word(word));
                }
            }
        }
    }
    Ok(report)
}

fn apply_redex(engine: &mut RewriteEngine, word: &[Lit], redex: (usize, usize, u8)) -> Vec<Lit> {
    let (start, len, kind) = redex;
    let mut out = word.to_vec();
    match kind {
        1 => {
            out.remove(start);
        }
        2 => {
            out.drain(start..start + len);
        }
        3 => {
            let l = word[start];
            let rhs = engine.type3_rhs(lit_id(l));
            let replacement: Vec<Lit> = if lit_positive(l) {
                rhs.to_vec()
            } else {
                invert_word(&rhs)
            };
            out.splice(start..start + 1, replacement);
        }
        _ => unreachable!(),
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collection;
    use crate::complex::{enumerate_cells, EnumFilter, Member};
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
    fn cancellation_and_critical_letters() {
        let w = fig1_world(4);
        let mut eng = RewriteEngine::new(&w);
        // critical 1-cell reduces to itself
        let crit = w.cell(&[v(&w, 10), e(&w, 19), v(&w, 20), 0]);
        let id = eng.intern(&crit);
        let g = lit(id, true);
        assert_eq!(eng.reduce(&[g], Strategy::Leftmost, 1000).unwrap(), vec![g]);
        // e inv(e) cancels
        assert!(eng.reduce(&[g, -g], Strategy::Leftmost, 1000).unwrap().is_empty());
        assert!(eng.reduce(&[-g, g], Strategy::Rightmost, 1000).unwrap().is_empty());
    }

    #[test]
    fn collapsible_letters_erase() {
        let w = fig1_world(4);
        let mut eng = RewriteEngine::new(&w);
        // {e10, v19, v20, *}: e10 order-respecting (v10 gone), cell collapsible
        let c = w.cell(&[e(&w, 10), v(&w, 19), v(&w, 20), 0]);
        assert_eq!(morse::classify(&w, &c.0), Tag::Collapsible);
        let id = eng.intern(&c);
        assert!(eng
            .reduce(&[lit(id, true)], Strategy::Leftmost, 1000)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn flow_agrees_with_reduce_on_all_one_cells_of_small_instances() {
        for (g0, n) in [
            (collection::y_graph(), 2),
            (collection::y_graph(), 3),
            (collection::fig1_tree(), 2),
        ] {
            let (w, _) = prepare_graph(&g0, n, None, true).unwrap();
            let mut cells = Vec::new();
            enumerate_cells(&w, EnumFilter { dim: Some(1), cap: 1_000_000 }, |m| {
                cells.push(Cell(m.to_vec()));
            })
            .unwrap();
            let mut eng = RewriteEngine::new(&w);
            for c in &cells {
                let id = eng.intern(c);
                let via_flow = eng.flow_1cell(c).to_vec();
                let via_reduce = eng
                    .reduce(&[lit(id, true)], Strategy::Leftmost, DEFAULT_BUDGET)
                    .unwrap();
                let via_right = eng
                    .reduce(&[lit(id, true)], Strategy::Rightmost, DEFAULT_BUDGET)
                    .unwrap();
                assert_eq!(via_flow, via_reduce, "{}", w.display_cell(c));
                assert_eq!(via_flow, via_right, "{}", w.display_cell(c));
                for &l in &via_flow {
                    assert_eq!(eng.tag_of(lit_id(l)), Tag::Critical);
                }
            }
        }
    }

    #[test]
    fn slide_example_from_the_text() {
        let w = fig1_world(5);
        let mut eng = RewriteEngine::new(&w);
        // {v10, v9, v20, v22, e25} slides to {v10, v9, v19, v22, e25}
        let c = w.cell(&[v(&w, 10), v(&w, 9), v(&w, 20), v(&w, 22), e(&w, 25)]);
        let slid = eng.slide_normalize(&c);
        assert_eq!(
            slid,
            w.cell(&[v(&w, 10), v(&w, 9), v(&w, 19), v(&w, 22), e(&w, 25)])
        );
        // fully blocked cells stay put
        let blocked = w.cell(&[v(&w, 10), e(&w, 19), v(&w, 20), 0, 1]);
        assert_eq!(eng.slide_normalize(&blocked), blocked);
    }

    #[test]
    fn slides_preserve_normal_forms() {
        let (w, _) = prepare_graph(&collection::fig1_tree(), 2, None, false).unwrap();
        let mut cells = Vec::new();
        enumerate_cells(&w, EnumFilter { dim: Some(1), cap: 100_000 }, |m| {
            cells.push(Cell(m.to_vec()));
        })
        .unwrap();
        let mut eng = RewriteEngine::new(&w);
        for c in &cells {
            let slid = eng.slide_normalize(c);
            let f1 = eng.flow_1cell(c);
            let f2 = eng.flow_1cell(&slid);
            assert_eq!(f1, f2, "{}", w.display_cell(c));
        }
    }

    #[test]
    fn local_confluence_on_assorted_overlaps() {
        let w = fig1_world(4);
        let mut eng = RewriteEngine::new(&w);
        // a collapsible letter t, a critical g, a redundant r
        let t = {
            let c = w.cell(&[e(&w, 10), v(&w, 19), v(&w, 20), 0]);
            lit(eng.intern(&c), true)
        };
        let g = {
            let c = w.cell(&[v(&w, 10), e(&w, 19), v(&w, 20), 0]);
            lit(eng.intern(&c), true)
        };
        let r = {
            let c = w.cell(&[v(&w, 4), e(&w, 19), v(&w, 20), 0]);
            assert_eq!(morse::classify(&w, &c.0), Tag::Redundant);
            lit(eng.intern(&c), true)
        };
        let words = vec![
            vec![t, -t, g],     // type 1 / type 2 overlap
            vec![g, -g, g],     // type 2 / type 2 overlap
            vec![r, -r],        // type 3 / type 2 overlap
            vec![t, r, -r, -t], // mixed
        ];
        let report = check_local_confluence(&mut eng, &words, DEFAULT_BUDGET).unwrap();
        assert!(report.passed(), "{:?}", report);
        assert!(report.overlaps_checked >= 4);
        // the two-type-2 overlap e inv(e) e resolves to e on both routes
        let nf = eng.reduce(&[g, -g, g], Strategy::Leftmost, 1000).unwrap();
        assert_eq!(nf, vec![g]);
    }
}
