//! Independent homology oracle: integer boundary matrices of the complex,
//! exact sparse elimination over Z, and Smith-style invariant factors. Used
//! to cross-check generator counts and abelianization ranks without touching
//! any of the Morse machinery.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::complex::{enumerate_cells, Cell, ComplexError, EnumFilter, World};

#[derive(Debug, Error)]
pub enum HomologyError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("torsion subproblem too large ({0} columns)")]
    TorsionTooLarge(usize),
}

trait Ent: Clone + PartialEq + std::fmt::Display {
    fn from_i64(v: i64) -> Self;
    fn vanishes(&self) -> bool;
    fn is_unit(&self) -> bool;
    /// self + other * q, None on overflow
    fn add_mul(&self, other: &Self, q: &Self) -> Option<Self>;
    fn div_trunc(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn to_bigint(&self) -> BigInt;
}

impl Ent for i64 {
    fn from_i64(v: i64) -> Self {
        v
    }
    fn vanishes(&self) -> bool {
        *self == 0
    }
    fn is_unit(&self) -> bool {
        self.abs() == 1
    }
    fn add_mul(&self, other: &Self, q: &Self) -> Option<Self> {
        other.checked_mul(*q).and_then(|p| self.checked_add(p))
    }
    fn div_trunc(&self, other: &Self) -> Self {
        self / other
    }
    fn neg(&self) -> Self {
        -*self
    }
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Ent for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_unit(&self) -> bool {
        self.abs() == BigInt::one()
    }
    fn add_mul(&self, other: &Self, q: &Self) -> Option<Self> {
        Some(self + other * q)
    }
    fn div_trunc(&self, other: &Self) -> Self {
        self / other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn to_bigint(&self) -> BigInt {
        self.clone()
    }
}

type Col<T> = Vec<(u32, T)>;

/// incoming = incoming - q * pivot, merged by row; None on overflow
fn col_sub_mul<T: Ent>(incoming: &Col<T>, pivot: &Col<T>, q: &T) -> Option<Col<T>> {
    let nq = q.neg();
    let mut out = Vec::with_capacity(incoming.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < incoming.len() || j < pivot.len() {
        if j >= pivot.len() || (i < incoming.len() && incoming[i].0 < pivot[j].0) {
            out.push(incoming[i].clone());
            i += 1;
        } else if i >= incoming.len() || pivot[j].0 < incoming[i].0 {
            let v = T::from_i64(0).add_mul(&pivot[j].1, &nq)?;
            if !v.vanishes() {
                out.push((pivot[j].0, v));
            }
            j += 1;
        } else {
            let v = incoming[i].1.add_mul(&pivot[j].1, &nq)?;
            if !v.vanishes() {
                out.push((incoming[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    Some(out)
}

struct Echelon<T> {
    /// reduced pivot columns, keyed by their lowest (largest-index) row
    cols: HashMap<u32, Col<T>>,
}

impl<T: Ent> Echelon<T> {
    fn new() -> Self {
        Echelon {
            cols: HashMap::new(),
        }
    }

    /// Reduce a column against the current echelon and absorb what is left.
    /// Returns None on arithmetic overflow.
    fn add_column(&mut self, mut col: Col<T>) -> Option<()> {
        col.retain(|(_, v)| !v.vanishes());
        loop {
            let Some(&(low, _)) = col.last() else { return Some(()) };
            match self.cols.get_mut(&low) {
                None => {
                    self.cols.insert(low, col);
                    return Some(());
                }
                Some(stored) => {
                    // integer gcd dance at the shared low row
                    loop {
                        let v = col.last().expect("nonempty").1.clone();
                        let d = stored.last().expect("pivot").1.clone();
                        let q = v.div_trunc(&d);
                        if !q.vanishes() {
                            col = col_sub_mul(&col, stored, &q)?;
                        }
                        match col.last() {
                            Some(&(r, _)) if r == low => {
                                // remainder nonzero at the pivot row: smaller
                                // absolute value, so swap roles and continue
                                std::mem::swap(stored, &mut col);
                            }
                            _ => break,
                        }
                    }
                }
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct RankResult {
    pub rank: u64,
    /// invariant factors different from 1 (empty means torsion-free)
    pub torsion: Vec<String>,
}

/// Exact integer rank and torsion of a sparse column matrix. Elimination
/// runs over 64-bit integers and retries with arbitrary precision if an
/// intermediate value overflows.
pub fn integer_rank(cols: Vec<Col<i64>>) -> RankResult {
    match rank_with::<i64>(cols.clone()) {
        Some(r) => r,
        None => {
            let big: Vec<Col<BigInt>> = cols
                .into_iter()
                .map(|c| c.into_iter().map(|(r, v)| (r, BigInt::from(v))).collect())
                .collect();
            rank_with::<BigInt>(big).expect("bigint arithmetic cannot overflow")
        }
    }
}

/// Streaming variant: columns are fed one at a time through a callback-driven
/// producer so the full matrix never needs to be stored.
pub struct StreamingRank {
    small: Option<Echelon<i64>>,
    big: Option<Echelon<BigInt>>,
    saved: Vec<Col<i64>>,
    keep_for_retry: bool,
}

impl StreamingRank {
    pub fn new(keep_for_retry: bool) -> Self {
        StreamingRank {
            small: Some(Echelon::new()),
            big: None,
            saved: Vec::new(),
            keep_for_retry,
        }
    }

    pub fn push(&mut self, col: Col<i64>) {
        if self.keep_for_retry {
            self.saved.push(col.clone());
        }
        if let Some(small) = &mut self.small {
            if small.add_column(col).is_some() {
                return;
            }
            // overflow: replay everything in big integers
            assert!(
                self.keep_for_retry,
                "overflow without retry columns; raise the entry width"
            );
            let mut big = Echelon::<BigInt>::new();
            for c in &self.saved {
                let bc: Col<BigInt> = c.iter().map(|(r, v)| (*r, BigInt::from(*v))).collect();
                big.add_column(bc).expect("bigint");
            }
            self.small = None;
            self.big = Some(big);
        } else if let Some(big) = &mut self.big {
            let bc: Col<BigInt> = col.iter().map(|(r, v)| (*r, BigInt::from(*v))).collect();
            big.add_column(bc).expect("bigint");
        }
    }

    pub fn finish(self) -> RankResult {
        match (self.small, self.big) {
            (Some(e), _) => finish_echelon(e),
            (_, Some(e)) => finish_echelon(e),
            _ => unreachable!(),
        }
    }
}

fn rank_with<T: Ent>(cols: Vec<Col<T>>) -> Option<RankResult> {
    let mut ech = Echelon::<T>::new();
    for col in cols {
        ech.add_column(col)?;
    }
    Some(finish_echelon(ech))
}

fn finish_echelon<T: Ent>(ech: Echelon<T>) -> RankResult {
    let rank = ech.cols.len() as u64;
    let all_unit = ech.cols.values().all(|c| c.last().unwrap().1.is_unit());
    if all_unit {
        // unit pivots at distinct rows: column and row operations clear the
        // rest, so every invariant factor is 1
        return RankResult {
            rank,
            torsion: Vec::new(),
        };
    }
    let torsion = dense_invariant_factors(&ech);
    RankResult { rank, torsion }
}

/// Classic dense Smith reduction on the (small) non-trivial part of the
/// echelon. Only runs when some pivot is not a unit.
fn dense_invariant_factors<T: Ent>(ech: &Echelon<T>) -> Vec<String> {
    let cols: Vec<&Col<T>> = ech.cols.values().collect();
    let mut rows: Vec<u32> = cols
        .iter()
        .flat_map(|c| c.iter().map(|(r, _)| *r))
        .collect();
    rows.sort_unstable();
    rows.dedup();
    let row_index: HashMap<u32, usize> = rows.iter().enumerate().map(|(i, &r)| (r, i)).collect();
    let (nr, nc) = (rows.len(), cols.len());
    if nr.max(nc) > 4000 {
        // a graph-braid boundary matrix with non-unit pivots this large has
        // never been observed; bail out loudly rather than thrash
        return vec![format!("torsion computation skipped ({} x {})", nr, nc)];
    }
    let mut m = vec![vec![BigInt::zero(); nc]; nr];
    for (j, col) in cols.iter().enumerate() {
        for (r, v) in col.iter() {
            m[row_index[r]][j] = v.to_bigint();
        }
    }
    let mut factors = Vec::new();
    let mut top = 0usize;
    while top < nr.min(nc) {
        // find the smallest nonzero entry in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in top..nr {
            for j in top..nc {
                if !m[i][j].is_zero()
                    && best.map_or(true, |(bi, bj)| m[i][j].abs() < m[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        m.swap(top, bi);
        for row in m.iter_mut() {
            row.swap(top, bj);
        }
        let mut clean = false;
        while !clean {
            clean = true;
            for i in top + 1..nr {
                if m[i][top].is_zero() {
                    continue;
                }
                let q = &m[i][top] / &m[top][top];
                if !q.is_zero() {
                    for j in top..nc {
                        let sub = &m[top][j] * &q;
                        m[i][j] = &m[i][j] - sub;
                    }
                }
                if !m[i][top].is_zero() {
                    m.swap(top, i);
                    clean = false;
                }
            }
            for j in top + 1..nc {
                if m[top][j].is_zero() {
                    continue;
                }
                let q = &m[top][j] / &m[top][top];
                if !q.is_zero() {
                    for row in m.iter_mut().skip(top) {
                        let sub = &row[top] * &q;
                        row[j] = &row[j] - sub;
                    }
                }
                if !m[top][j].is_zero() {
                    for row in m.iter_mut() {
                        row.swap(top, j);
                    }
                    clean = false;
                }
            }
        }
        factors.push(m[top][top].abs());
        top += 1;
    }
    // enforce the divisibility chain
    let mut i = 0;
    while i + 1 < factors.len() {
        if (factors[i + 1].clone() % factors[i].clone()).is_zero() {
            i += 1;
        } else {
            let g = num_integer::Integer::gcd(&factors[i], &factors[i + 1]);
            let l = num_integer::Integer::lcm(&factors[i], &factors[i + 1]);
            factors[i] = g;
            factors[i + 1] = l;
            i = 0;
        }
    }
    factors
        .into_iter()
        .filter(|f| *f != BigInt::one() && !f.is_zero())
        .map(|f| f.to_string())
        .collect()
}

fn pack_cell(w: &World, members: &[u32]) -> u64 {
    let bits = 64 / w.n.max(1);
    let max = 1u64 << bits.min(63);
    let mut out = 0u64;
    for &m in members {
        let v = m as u64 + 1;
        assert!(v < max, "cell does not pack into 64 bits");
        out = (out << bits) | v;
    }
    out
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct HomologyReport {
    pub cells: Vec<u64>,
    pub h0_rank: u64,
    pub h1_rank: u64,
    pub torsion: Vec<String>,
}

/// Rank of H1 of the configuration complex, plus torsion, by exact integer
/// elimination of the first two boundary matrices.
pub fn h1_rank(w: &World, cap: u64) -> Result<HomologyReport, HomologyError> {
    let mut zero_index: HashMap<u64, u32> = HashMap::new();
    enumerate_cells(w, EnumFilter { dim: Some(0), cap }, |members| {
        let next = zero_index.len() as u32;
        zero_index.insert(pack_cell(w, members), next);
    })?;
    let n0 = zero_index.len() as u64;

    let mut one_index: HashMap<u64, u32> = HashMap::new();
    let mut d1 = StreamingRank::new(false);
    {
        let zero_index = &zero_index;
        enumerate_cells(w, EnumFilter { dim: Some(1), cap }, |members| {
            let next = one_index.len() as u32;
            one_index.insert(pack_cell(w, members), next);
            let cell = Cell(members.to_vec());
            let m = *cell
                .0
                .iter()
                .find(|&&m| w.is_edge(m))
                .expect("1-cell has an edge");
            let (at_iota, at_tau) = w.faces_of_edge(&cell, m);
            let head = zero_index[&pack_cell(w, &at_tau.0)];
            let tail = zero_index[&pack_cell(w, &at_iota.0)];
            let mut col = vec![(head, 1i64), (tail, -1i64)];
            col.sort_unstable();
            d1.push(col);
        })?;
    }
    let n1 = one_index.len() as u64;
    let rank_d1 = d1.finish().rank;

    let mut n2 = 0u64;
    let mut d2 = StreamingRank::new(true);
    enumerate_cells(w, EnumFilter { dim: Some(2), cap }, |members| {
        n2 += 1;
        let cell = Cell(members.to_vec());
        let mut col: Vec<(u32, i64)> = Vec::with_capacity(4);
        let mut sign = 1i64;
        for &m in members {
            if !w.is_edge(m) {
                continue;
            }
            let (at_iota, at_tau) = w.faces_of_edge(&cell, m);
            col.push((one_index[&pack_cell(w, &at_tau.0)], sign));
            col.push((one_index[&pack_cell(w, &at_iota.0)], -sign));
            sign = -sign;
        }
        col.sort_unstable();
        d2.push(col);
    })?;
    let d2_result = d2.finish();

    let h0 = n0 - rank_d1;
    let h1 = n1 - rank_d1 - d2_result.rank;
    Ok(HomologyReport {
        cells: vec![n0, n1, n2],
        h0_rank: h0,
        h1_rank: h1,
        torsion: d2_result.torsion,
    })
}

/// Number of connected components of the 1-skeleton, by union-find.
pub fn connected_components(w: &World, cap: u64) -> Result<u64, HomologyError> {
    let mut zero_index: HashMap<u64, u32> = HashMap::new();
    enumerate_cells(w, EnumFilter { dim: Some(0), cap }, |members| {
        let next = zero_index.len() as u32;
        zero_index.insert(pack_cell(w, members), next);
    })?;
    let mut parent: Vec<u32> = (0..zero_index.len() as u32).collect();
    fn find(parent: &mut Vec<u32>, mut x: u32) -> u32 {
        while parent[x as usize] != x {
            parent[x as usize] = parent[parent[x as usize] as usize];
            x = parent[x as usize];
        }
        x
    }
    enumerate_cells(w, EnumFilter { dim: Some(1), cap }, |members| {
        let cell = Cell(members.to_vec());
        let m = *cell.0.iter().find(|&&m| w.is_edge(m)).expect("edge");
        let (at_iota, at_tau) = w.faces_of_edge(&cell, m);
        let a = find(&mut parent, zero_index[&pack_cell(w, &at_iota.0)]);
        let b = find(&mut parent, zero_index[&pack_cell(w, &at_tau.0)]);
        if a != b {
            parent[a as usize] = b;
        }
    })?;
    let mut count = 0u64;
    for i in 0..parent.len() as u32 {
        if find(&mut parent, i) == i {
            count += 1;
        }
    }
    Ok(count)
}

/// d(p-1) . d(p) = 0 for the cubical sign convention, checked explicitly on
/// an instance; test support.
pub fn boundary_squared_is_zero(w: &World, cap: u64) -> Result<bool, HomologyError> {
    let mut ok = true;
    for p in 2..=w.n {
        let mut lower_index: HashMap<u64, u32> = HashMap::new();
        enumerate_cells(w, EnumFilter { dim: Some(p - 1), cap }, |members| {
            let next = lower_index.len() as u32;
            lower_index.insert(pack_cell(w, members), next);
        })?;
        if lower_index.is_empty() {
            break;
        }
        enumerate_cells(w, EnumFilter { dim: Some(p), cap }, |members| {
            let cell = Cell(members.to_vec());
            // composite: accumulate signed faces-of-faces
            let mut acc: HashMap<u64, i64> = HashMap::new();
            let mut sign = 1i64;
            for &m in members.iter() {
                if !w.is_edge(m) {
                    continue;
                }
                let (at_iota, at_tau) = w.faces_of_edge(&cell, m);
                for (face, s) in [(at_tau, sign), (at_iota, -sign)] {
                    let mut inner_sign = 1i64;
                    for &m2 in face.0.iter() {
                        if !w.is_edge(m2) {
                            continue;
                        }
                        let (f_iota, f_tau) = w.faces_of_edge(&face, m2);
                        *acc.entry(pack_cell(w, &f_tau.0)).or_default() += s * inner_sign;
                        *acc.entry(pack_cell(w, &f_iota.0)).or_default() -= s * inner_sign;
                        inner_sign = -inner_sign;
                    }
                }
                sign = -sign;
            }
            if acc.values().any(|&v| v != 0) {
                ok = false;
            }
        })?;
    }
    Ok(ok)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collection;
    use crate::pipeline::prepare_graph;

    #[test]
    fn rank_of_small_matrices() {
        // identity-ish
        let r = integer_rank(vec![vec![(0, 1)], vec![(1, -1)]]);
        assert_eq!(r.rank, 2);
        assert!(r.torsion.is_empty());
        // dependent columns
        let r = integer_rank(vec![vec![(0, 1), (1, 1)], vec![(0, 2), (1, 2)]]);
        assert_eq!(r.rank, 1);
        // torsion: multiplication by 2
        let r = integer_rank(vec![vec![(0, 2)]]);
        assert_eq!(r.rank, 1);
        assert_eq!(r.torsion, vec!["2".to_string()]);
        // 2x2 with invariant factors 1, 6
        let r = integer_rank(vec![vec![(0, 2), (1, 0i64)], vec![(1, 3)]]);
        assert_eq!(r.rank, 2);
        assert_eq!(r.torsion, vec!["6".to_string()]);
    }

    #[test]
    fn tree_one_strand_is_contractible() {
        let (w, _) = prepare_graph(&collection::fig1_tree(), 1, None, true).unwrap();
        let h = h1_rank(&w, 1_000_000).unwrap();
        assert_eq!(h.h0_rank, 1);
        assert_eq!(h.h1_rank, 0);
        assert!(h.torsion.is_empty());
    }

    #[test]
    fn radial_two_strands_is_a_circle() {
        let (w, _) = prepare_graph(&collection::radial(3), 2, None, true).unwrap();
        let h = h1_rank(&w, 1_000_000).unwrap();
        assert_eq!(h.h0_rank, 1);
        assert_eq!(h.h1_rank, 1);
    }

    #[test]
    fn path_three_vertices_two_strands() {
        let (w, _) = prepare_graph(&collection::path(3), 2, None, false).unwrap();
        let h = h1_rank(&w, 1_000).unwrap();
        assert_eq!(h.cells, vec![3, 2, 0]);
        assert_eq!(h.h0_rank, 1);
        assert_eq!(h.h1_rank, 0);
        assert_eq!(connected_components(&w, 1_000).unwrap(), 1);
    }

    #[test]
    fn boundary_squared_zero_on_instances() {
        for (g0, n) in [
            (collection::fig1_tree(), 3),
            (collection::y_graph(), 4),
            (collection::k4_star().0, 2),
        ] {
            let (w, _) = prepare_graph(&g0, n, None, true).unwrap();
            assert!(boundary_squared_is_zero(&w, 1_000_000).unwrap());
        }
    }

    #[test]
    fn circle_complex_has_h1_one() {
        let g = collection::cycle(6);
        let (w, _) = crate::pipeline::prepare_graph_auto_root(&g, 2, None, true).unwrap();
        let h = h1_rank(&w, 1_000_000).unwrap();
        assert_eq!(h.h0_rank, 1);
        assert_eq!(h.h1_rank, 1);
    }
}
