//! Individualization-refinement backtracking on pairs of edge-coloured
//! complete digraphs sharing one colour alphabet.
//!
//! Pruning rules, each sound for colour-preserving bijections `f: A -> B`:
//! - refinement: a vertex's new colour is its old colour plus the multiset of
//!   (edge colour, neighbour colour) over its out-edges; any such `f` maps a
//!   vertex to one with an identical signature, so signatures are named
//!   jointly for both sides and a histogram mismatch kills the branch;
//! - individualization: a source vertex and a target candidate receive the
//!   same fresh colour, which only restricts to bijections mapping one to the
//!   other;
//! - leaves are verified on all `n^2` pairs before being reported.
//!
//! Exhausting the tree therefore certifies that no isomorphism exists.

use std::collections::HashMap;

use num_bigint::BigUint;

use super::color::ColorMatrix;
use crate::perm::{orbits, Perm};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Coloring {
    colors: Vec<u32>,
    cells: u32,
}

impl Coloring {
    pub(crate) fn unit(n: usize) -> Self {
        Coloring {
            colors: vec![0; n],
            cells: if n == 0 { 0 } else { 1 },
        }
    }

    fn individualize(&mut self, v: usize) {
        self.colors[v] = self.cells;
        self.cells += 1;
    }

    /// Smallest non-singleton cell (ties by colour) and its smallest vertex.
    fn target_cell(&self) -> Option<(u32, usize)> {
        let mut sizes = vec![0usize; self.cells as usize];
        for &c in &self.colors {
            sizes[c as usize] += 1;
        }
        let (color, _) = sizes
            .iter()
            .enumerate()
            .filter(|(_, &s)| s > 1)
            .min_by_key(|&(c, &s)| (s, c))?;
        let v = self.colors.iter().position(|&c| c as usize == color)?;
        Some((color as u32, v))
    }

    fn members(&self, color: u32) -> Vec<usize> {
        (0..self.colors.len())
            .filter(|&v| self.colors[v] == color)
            .collect()
    }
}

fn signatures(m: &ColorMatrix, c: &Coloring) -> Vec<(u32, Vec<u64>)> {
    let n = m.size();
    let k = c.cells as u64;
    (0..n)
        .map(|v| {
            let row = m.row(v);
            let mut keys: Vec<u64> = (0..n)
                .map(|w| row[w] as u64 * k + c.colors[w] as u64)
                .collect();
            keys.sort_unstable();
            // run-length compress: (key, count) packed pairs
            let mut packed = Vec::with_capacity(keys.len());
            let mut i = 0;
            while i < keys.len() {
                let mut j = i;
                while j < keys.len() && keys[j] == keys[i] {
                    j += 1;
                }
                packed.push(keys[i]);
                packed.push((j - i) as u64);
                i = j;
            }
            (c.colors[v], packed)
        })
        .collect()
}

/// Refines both colourings jointly to a stable pair. Returns false when the
/// colour histograms of the two sides diverge.
pub(crate) fn refine_pair(
    a: &ColorMatrix,
    b: &ColorMatrix,
    ca: &mut Coloring,
    cb: &mut Coloring,
) -> bool {
    let n = a.size();
    loop {
        let sa = signatures(a, ca);
        let sb = signatures(b, cb);
        let mut distinct: Vec<&(u32, Vec<u64>)> = sa.iter().chain(sb.iter()).collect();
        distinct.sort_unstable();
        distinct.dedup();
        let ids: HashMap<&(u32, Vec<u64>), u32> = distinct
            .iter()
            .enumerate()
            .map(|(i, s)| (*s, i as u32))
            .collect();
        let mut hist = vec![0i64; distinct.len()];
        for s in &sa {
            hist[ids[s] as usize] += 1;
        }
        for s in &sb {
            hist[ids[s] as usize] -= 1;
        }
        if hist.iter().any(|&h| h != 0) {
            return false;
        }
        let cells = distinct.len() as u32;
        let stable = cells == ca.cells;
        ca.colors = sa.iter().map(|s| ids[s]).collect();
        cb.colors = sb.iter().map(|s| ids[s]).collect();
        ca.cells = cells;
        cb.cells = cells;
        if stable || cells as usize == n {
            return true;
        }
    }
}

fn verify(a: &ColorMatrix, b: &ColorMatrix, f: &[usize]) -> bool {
    let n = a.size();
    (0..n).all(|x| {
        let (ra, rb) = (a.row(x), b.row(f[x]));
        (0..n).all(|y| ra[y] == rb[f[y]])
    })
}

/// Search statistics, mainly for diagnostics and benchmarks.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    pub leaves: u64,
}

pub(crate) struct IsoSearch<'a> {
    a: &'a ColorMatrix,
    b: &'a ColorMatrix,
    pub(crate) stats: SearchStats,
    reverse: bool,
}

impl<'a> IsoSearch<'a> {
    pub(crate) fn new(a: &'a ColorMatrix, b: &'a ColorMatrix) -> Self {
        IsoSearch {
            a,
            b,
            stats: SearchStats::default(),
            reverse: false,
        }
    }

    pub(crate) fn reversed(mut self, reverse: bool) -> Self {
        self.reverse = reverse;
        self
    }

    /// First colour-preserving bijection extending the individualized pairs,
    /// exploring candidates in ascending order.
    pub(crate) fn find(&mut self, pairs: &[(usize, usize)]) -> Option<Perm> {
        let n = self.a.size();
        if n != self.b.size() {
            return None;
        }
        let mut ca = Coloring::unit(n);
        let mut cb = Coloring::unit(n);
        for &(v, w) in pairs {
            if !refine_pair(self.a, self.b, &mut ca, &mut cb) || ca.colors[v] != cb.colors[w] {
                return None;
            }
            ca.individualize(v);
            cb.individualize(w);
        }
        self.extend(ca, cb)
    }

    /// Continues from colourings that already have the pending pair individualized.
    pub(crate) fn extend(&mut self, mut ca: Coloring, mut cb: Coloring) -> Option<Perm> {
        self.stats.nodes += 1;
        if !refine_pair(self.a, self.b, &mut ca, &mut cb) {
            return None;
        }
        let Some((color, v)) = ca.target_cell() else {
            self.stats.leaves += 1;
            let mut f = vec![0usize; ca.colors.len()];
            let mut pos = vec![0usize; ca.cells as usize];
            for (w, &c) in cb.colors.iter().enumerate() {
                pos[c as usize] = w;
            }
            for (x, &c) in ca.colors.iter().enumerate() {
                f[x] = pos[c as usize];
            }
            return verify(self.a, self.b, &f).then(|| Perm::from_images_unchecked(f));
        };
        let mut candidates = cb.members(color);
        if self.reverse {
            candidates.reverse();
        }
        for w in candidates {
            let mut na = ca.clone();
            let mut nb = cb.clone();
            na.individualize(v);
            nb.individualize(w);
            if let Some(f) = self.extend(na, nb) {
                return Some(f);
            }
        }
        None
    }
}

/// Stabilizer chain of the colour automorphisms fixing vertex 0.
#[derive(Clone, Debug)]
pub(crate) struct StabilizerChain {
    /// Base points after vertex 0.
    pub base: Vec<usize>,
    /// Strong generators; each fixes 0 and the base points before its level.
    pub generators: Vec<Perm>,
    pub orbit_lengths: Vec<usize>,
    pub stats: SearchStats,
}

impl StabilizerChain {
    pub fn order(&self) -> BigUint {
        self.orbit_lengths
            .iter()
            .fold(BigUint::from(1u32), |acc, &l| acc * BigUint::from(l))
    }
}

/// Computes `Aut(M)_0` by walking a base path and, level by level from the
/// bottom, searching for coset representatives of candidates not yet covered
/// by the orbit of the generators found so far.
pub(crate) fn stabilizer_chain(m: &ColorMatrix, reverse: bool) -> StabilizerChain {
    let n = m.size();
    let mut stats = SearchStats::default();
    if n <= 1 {
        return StabilizerChain {
            base: Vec::new(),
            generators: Vec::new(),
            orbit_lengths: Vec::new(),
            stats,
        };
    }
    let mut ca = Coloring::unit(n);
    let mut cb = Coloring::unit(n);
    refine_pair(m, m, &mut ca, &mut cb);
    ca.individualize(0);
    let mut prefix_colorings: Vec<Coloring> = Vec::new();
    let mut base = Vec::new();
    let mut candidates = Vec::new();
    loop {
        let mut cb = ca.clone();
        refine_pair(m, m, &mut ca, &mut cb);
        match ca.target_cell() {
            None => break,
            Some((color, v)) => {
                prefix_colorings.push(ca.clone());
                base.push(v);
                let mut cands = ca.members(color);
                if reverse {
                    cands.reverse();
                }
                candidates.push(cands);
                ca.individualize(v);
            }
        }
    }

    let k = base.len();
    let mut level_gens: Vec<Vec<Perm>> = vec![Vec::new(); k];
    let mut orbit_lengths = vec![1usize; k];
    for i in (0..k).rev() {
        let mut gens: Vec<Perm> = level_gens[i..].iter().flatten().cloned().collect();
        let mut orbit = orbit_of(n, &gens, base[i]);
        for &c in &candidates[i] {
            if orbit.contains(&c) {
                continue;
            }
            let mut search = IsoSearch::new(m, m).reversed(reverse);
            let mut na = prefix_colorings[i].clone();
            let mut nb = prefix_colorings[i].clone();
            na.individualize(base[i]);
            nb.individualize(c);
            let found = search.extend(na, nb);
            stats.nodes += search.stats.nodes;
            stats.leaves += search.stats.leaves;
            if let Some(f) = found {
                level_gens[i].push(f.clone());
                gens.push(f);
                orbit = orbit_of(n, &gens, base[i]);
            }
        }
        orbit_lengths[i] = orbit.len();
    }
    StabilizerChain {
        base,
        generators: level_gens.into_iter().flatten().collect(),
        orbit_lengths,
        stats,
    }
}

fn orbit_of(n: usize, gens: &[Perm], point: usize) -> Vec<usize> {
    orbits(n, gens)
        .into_iter()
        .find(|o| o.binary_search(&point).is_ok())
        .expect("point orbit")
}
