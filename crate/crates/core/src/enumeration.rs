//! Exhaustive enumeration of S-rings over small abelian groups, reduction up
//! to Cayley isomorphism, and the classification over `C_p^3`.
//!
//! The search works with bitmask partitions. Its building block is the
//! Schur closure of a partition: the coarsest S-ring refining it, obtained by
//! splitting cells by product multiplicities and rational conjugates until
//! stable. Every S-ring refining the input refines the closure.
//!
//! A set `X` can be a basic set of some S-ring only if it is a basic set of
//! the closure of `{e}, X, G \ (X + e)`; such sets are precomputed. The search
//! then fixes, for the smallest element not yet placed, its basic set among
//! the precomputed sets inside its current closure cell, and closes again.
//! Each S-ring is produced by exactly one path, the one that fixes its own
//! basic sets.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{aut_alg_induced, is_schurian};
use crate::error::{Error, Result};
use crate::group::{automorphism_group_with_bound, enumerate_abelian_groups, GroupSpec};
use crate::sring::{restricted_growth, SRing};

/// Default largest group order for enumeration.
pub const ENUM_BOUND: usize = 32;
/// Largest number of candidate basic sets the search will generate.
pub const CANDIDATE_BOUND: u64 = 1 << 24;
/// Largest `|Aut(G)|` that `up_to_cayley` will list.
pub const AUT_LIST_BOUND: usize = 50_000;

pub(crate) struct Closure {
    n: usize,
    /// `diff[z * n + a] = z a^-1`
    diff: Vec<usize>,
    /// `conj[i][z] = z^m` for the units `m != 1` modulo the exponent.
    conj: Vec<Vec<usize>>,
}

impl Closure {
    pub(crate) fn new(g: &GroupSpec) -> Self {
        let n = g.order();
        let mut diff = vec![0; n * n];
        for z in 0..n {
            for a in 0..n {
                diff[z * n + a] = g.mul(z, g.inv(a));
            }
        }
        let e = g.exponent();
        let conj = (2..e)
            .filter(|&m| num_integer::gcd(m, e) == 1)
            .map(|m| (0..n).map(|z| g.pow(z, m as i64)).collect())
            .collect();
        Closure { n, diff, conj }
    }

    /// Refines `labels` (values `0..k`) to the Schur closure. Fails as soon
    /// as one of the `watch` masks stops being a single cell.
    pub(crate) fn close(&self, labels: &mut [u8], watch: &[u64]) -> Option<usize> {
        let n = self.n;
        let width = 1 + self.conj.len() + n;
        let mut keys = vec![0u16; n * width];
        let mut order: Vec<usize> = (0..n).collect();
        let mut cells = count_labels(labels);
        loop {
            for z in 0..n {
                let row = &mut keys[z * width..(z + 1) * width];
                row[0] = labels[z] as u16;
                for (i, c) in self.conj.iter().enumerate() {
                    row[1 + i] = labels[c[z]] as u16;
                }
                let pairs = &mut row[1 + self.conj.len()..];
                for a in 0..n {
                    pairs[a] = (labels[a] as u16) << 8 | labels[self.diff[z * n + a]] as u16;
                }
                pairs.sort_unstable();
            }
            order.sort_by(|&x, &y| {
                keys[x * width..(x + 1) * width].cmp(&keys[y * width..(y + 1) * width])
            });
            let mut next = 0u8;
            for i in 0..n {
                let z = order[i];
                if i > 0 {
                    let p = order[i - 1];
                    if keys[p * width..(p + 1) * width] != keys[z * width..(z + 1) * width] {
                        next += 1;
                    }
                }
                labels[z] = next;
            }
            let new_cells = next as usize + 1;
            for &w in watch {
                let first = labels[w.trailing_zeros() as usize];
                if bits(w).any(|z| labels[z] != first) {
                    return None;
                }
            }
            if new_cells == cells {
                return Some(cells);
            }
            cells = new_cells;
        }
    }

    fn conjugates(&self, mask: u64) -> Vec<u64> {
        let mut out: Vec<u64> = self
            .conj
            .iter()
            .map(|c| bits(mask).fold(0, |acc, z| acc | 1 << c[z]))
            .collect();
        out.push(mask);
        out.sort_unstable();
        out.dedup();
        out
    }
}

fn count_labels(labels: &[u8]) -> usize {
    labels.iter().map(|&l| l as usize + 1).max().unwrap_or(0)
}

fn bits(mask: u64) -> impl Iterator<Item = usize> {
    let mut m = mask;
    std::iter::from_fn(move || {
        if m == 0 {
            return None;
        }
        let z = m.trailing_zeros() as usize;
        m &= m - 1;
        Some(z)
    })
}

fn cell_mask(labels: &[u8], l: u8) -> u64 {
    labels
        .iter()
        .enumerate()
        .filter(|(_, &x)| x == l)
        .fold(0, |acc, (z, _)| acc | 1 << z)
}

/// Subgroups of the multiplier group `(Z/e)^*`, each as a sorted list.
fn unit_subgroups(e: u64) -> Vec<Vec<u64>> {
    let units: Vec<u64> = (1..e.max(2))
        .filter(|&m| num_integer::gcd(m, e) == 1)
        .collect();
    let close = |gens: &[u64]| -> Vec<u64> {
        let mut set: BTreeSet<u64> = BTreeSet::from([1 % e.max(2)]);
        let mut frontier = vec![1 % e.max(2)];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = x * g % e;
                if set.insert(y) {
                    frontier.push(y);
                }
            }
        }
        set.into_iter().collect()
    };
    let mut found: BTreeSet<Vec<u64>> = BTreeSet::from([close(&[])]);
    let mut frontier: Vec<Vec<u64>> = found.iter().cloned().collect();
    while let Some(s) = frontier.pop() {
        for &u in &units {
            if s.contains(&u) {
                continue;
            }
            let mut gens = s.clone();
            gens.push(u);
            let t = close(&gens);
            if found.insert(t.clone()) {
                frontier.push(t);
            }
        }
    }
    found.into_iter().collect()
}

/// Sets `X` that respect rational conjugacy (each conjugate equals `X` or is
/// disjoint from it) and are a basic set of the closure they generate.
pub(crate) fn candidate_basic_sets(g: &GroupSpec, closure: &Closure) -> Result<Vec<u64>> {
    let n = g.order();
    let e = g.exponent();
    let units: Vec<u64> = (1..e.max(2))
        .filter(|&m| num_integer::gcd(m, e) == 1)
        .collect();
    let pow: Vec<Vec<usize>> = units
        .iter()
        .map(|&m| (0..n).map(|z| g.pow(z, m as i64)).collect())
        .collect();
    let image = |mask: u64, i: usize| bits(mask).fold(0u64, |acc, z| acc | 1 << pow[i][z]);

    let mut raw: Vec<u64> = Vec::new();
    let mut estimate: u64 = 0;
    for m in unit_subgroups(e) {
        let in_m: Vec<bool> = units.iter().map(|u| m.contains(u)).collect();
        let mut orbits: BTreeSet<u64> = BTreeSet::new();
        for z in 1..n {
            let o = (0..units.len())
                .filter(|&i| in_m[i])
                .fold(0u64, |acc, i| acc | 1 << pow[i][z]);
            orbits.insert(o);
        }
        // M-orbits with stabilizer exactly M, grouped by their U-orbit
        let mut families: Vec<(u64, Vec<u64>)> = Vec::new();
        for &o in &orbits {
            if (0..units.len()).any(|i| !in_m[i] && image(o, i) & o != 0) {
                continue;
            }
            let u_orbit = (0..units.len()).fold(0u64, |acc, i| acc | image(o, i));
            match families.iter_mut().find(|(k, _)| *k == u_orbit) {
                Some((_, list)) => list.push(o),
                None => families.push((u_orbit, vec![o])),
            }
        }
        let count = families
            .iter()
            .fold(1u64, |acc, (_, f)| acc.saturating_mul(f.len() as u64 + 1));
        estimate = estimate.saturating_add(count);
        if estimate > CANDIDATE_BOUND {
            return Err(Error::BoundExceeded {
                what: "candidate basic sets",
                size: estimate.min(usize::MAX as u64) as usize,
                bound: CANDIDATE_BOUND as usize,
            });
        }
        let mut stack = vec![(0usize, 0u64)];
        while let Some((i, acc)) = stack.pop() {
            if i == families.len() {
                if acc != 0 {
                    raw.push(acc);
                }
                continue;
            }
            stack.push((i + 1, acc));
            for &o in &families[i].1 {
                stack.push((i + 1, acc | o));
            }
        }
    }
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut out: Vec<u64> = raw
        .into_par_iter()
        .filter(|&x| {
            let mut labels = vec![0u8; n];
            for z in 1..n {
                labels[z] = if x >> z & 1 == 1 { 1 } else { 2 };
            }
            if full & !x & !1 == 0 {
                labels.iter_mut().skip(1).for_each(|l| *l = 1);
            }
            closure.close(&mut labels, &[x]).is_some()
        })
        .collect();
    out.sort_unstable();
    Ok(out)
}

struct Search<'a> {
    n: usize,
    full: u64,
    closure: &'a Closure,
    /// candidates indexed by their smallest element
    by_min: Vec<Vec<u64>>,
}

struct Node {
    labels: Vec<u8>,
    fixed: u64,
    classes: Vec<u64>,
}

impl Search<'_> {
    fn children(&self, node: &Node) -> Vec<Node> {
        let x = (!node.fixed & self.full).trailing_zeros() as usize;
        let k = cell_mask(&node.labels, node.labels[x]);
        let cells = count_labels(&node.labels) as u8;
        let mut out = Vec::new();
        for &cand in &self.by_min[x] {
            if cand & !k != 0 {
                continue;
            }
            let mut labels = node.labels.clone();
            if cand != k {
                for z in bits(cand) {
                    labels[z] = cells;
                }
            }
            let mut watch = node.classes.clone();
            watch.push(cand);
            if self.closure.close(&mut labels, &watch).is_none() {
                continue;
            }
            let mut fixed = node.fixed;
            let mut classes = node.classes.clone();
            for c in self.closure.conjugates(cand) {
                if fixed & c == 0 {
                    fixed |= c;
                    classes.push(c);
                }
            }
            // a singleton cell is a basic set of every refinement
            for z in 0..self.n {
                if fixed >> z & 1 == 0 && labels.iter().filter(|&&l| l == labels[z]).count() == 1 {
                    fixed |= 1 << z;
                    classes.push(1 << z);
                }
            }
            out.push(Node {
                labels,
                fixed,
                classes,
            });
        }
        out
    }

    fn leaves(&self, node: Node, out: &mut Vec<Vec<u8>>) {
        if node.fixed == self.full {
            out.push(node.labels);
            return;
        }
        for child in self.children(&node) {
            self.leaves(child, out);
        }
    }
}

fn check_enum_bound(g: &GroupSpec, bound: usize) -> Result<()> {
    if g.order() > bound.min(64) {
        return Err(Error::BoundExceeded {
            what: "enumeration group order",
            size: g.order(),
            bound,
        });
    }
    Ok(())
}

/// Every S-ring over `g` exactly once, sorted canonically.
pub fn enumerate_srings(g: &GroupSpec) -> Result<Vec<SRing>> {
    enumerate_srings_with_bound(g, ENUM_BOUND)
}

pub fn enumerate_srings_with_bound(g: &GroupSpec, bound: usize) -> Result<Vec<SRing>> {
    check_enum_bound(g, bound)?;
    let n = g.order();
    if n == 1 {
        return Ok(vec![SRing::group_ring(g)]);
    }
    let closure = Closure::new(g);
    let mut by_min = vec![Vec::new(); n];
    for x in candidate_basic_sets(g, &closure)? {
        by_min[x.trailing_zeros() as usize].push(x);
    }
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let search = Search {
        n,
        full,
        closure: &closure,
        by_min,
    };
    let mut labels = vec![1u8; n];
    labels[0] = 0;
    closure.close(&mut labels, &[]);
    let root = Node {
        labels,
        fixed: 1,
        classes: vec![1],
    };
    let first = search.children(&root);
    let found: Vec<Vec<u8>> = first
        .into_par_iter()
        .flat_map_iter(|child| {
            let mut out = Vec::new();
            search.leaves(child, &mut out);
            out
        })
        .collect();
    let mut rings = found
        .into_iter()
        .map(|l| {
            let labels: Vec<usize> = l.iter().map(|&x| x as usize).collect();
            SRing::from_labels(g, &restricted_growth(&labels))
        })
        .collect::<Result<Vec<_>>>()?;
    rings.sort();
    Ok(rings)
}

/// Relabels the partition of `a` by a group automorphism given as element images.
fn image_labels(labels: &[usize], images: &[usize]) -> Vec<usize> {
    let mut out = vec![0; labels.len()];
    for (z, &l) in labels.iter().enumerate() {
        out[images[z]] = l;
    }
    restricted_growth(&out)
}

/// One representative per Cayley-isomorphism class: the lexicographically
/// least class-label string in the `Aut(G)`-orbit.
pub fn up_to_cayley(rings: &[SRing], g: &GroupSpec) -> Result<Vec<SRing>> {
    let autos = automorphism_group_with_bound(g, usize::MAX)?.elements(AUT_LIST_BOUND)?;
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut reps = Vec::new();
    for a in rings {
        if a.group() != g {
            return Err(Error::GroupMismatch {
                expected: g.factors().to_vec(),
                got: a.group().factors().to_vec(),
            });
        }
        if seen.contains(a.labels()) {
            continue;
        }
        let orbit: BTreeSet<Vec<usize>> = autos
            .iter()
            .map(|s| image_labels(a.labels(), s.images()))
            .collect();
        let least = orbit.first().expect("orbit contains the ring").clone();
        seen.extend(orbit);
        reps.push(SRing::from_labels(g, &least)?);
    }
    reps.sort();
    Ok(reps)
}

/// Canonical form of `a` under `Aut(G)`, from a precomputed element list.
pub fn cayley_canonical_labels(a: &SRing, autos: &[crate::perm::Perm]) -> Vec<usize> {
    autos
        .iter()
        .map(|s| image_labels(a.labels(), s.images()))
        .min()
        .unwrap_or_else(|| a.labels().to_vec())
}

/// All S-rings over all abelian groups of order `n`, up to Cayley isomorphism.
pub fn exhaustive_targets(n: usize) -> Result<Vec<SRing>> {
    let mut out = Vec::new();
    for g in enumerate_abelian_groups(n as u64) {
        out.extend(up_to_cayley(&enumerate_srings(&g)?, &g)?);
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Label {
    Rank2,
    Tensor,
    SWreathSmall,
    Exceptional,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::Rank2 => "RANK2",
            Label::Tensor => "TENSOR",
            Label::SWreathSmall => "S_WREATH_SMALL",
            Label::Exceptional => "EXCEPTIONAL",
        })
    }
}

/// Classifies an S-ring over `C_p^3`, `p` in `{2, 3}`: rank two, a
/// nontrivial tensor product, a proper S-wreath product with `|U/L| <= p`,
/// or exceptional.
pub fn classify(a: &SRing) -> Result<Label> {
    let f = a.group().factors();
    let p = match f {
        [2, 2, 2] => 2,
        [3, 3, 3] => 3,
        _ => return Err(Error::WrongGroup(f.to_vec())),
    };
    if a.rank() == 2 {
        return Ok(Label::Rank2);
    }
    let subgroups = a.a_subgroups()?;
    if !a.detect_tensor_from(&subgroups).is_empty() {
        return Ok(Label::Tensor);
    }
    if a.detect_s_wreath_from(&subgroups)?
        .iter()
        .any(|s| s.order() <= p)
    {
        return Ok(Label::SWreathSmall);
    }
    Ok(Label::Exceptional)
}

/// One row of the exceptional-ring table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table1Row {
    pub name: String,
    pub rank: usize,
    pub sizes: Vec<usize>,
    pub schurian: bool,
    pub aut_order: BigUint,
    pub iso_over_aut: BigUint,
    pub aut_alg_order: usize,
}

/// `1 13^2` style rendering of an ascending size list.
pub fn format_sizes(sizes: &[usize]) -> String {
    let mut parts = Vec::new();
    let mut i = 0;
    while i < sizes.len() {
        let j = sizes[i..].iter().take_while(|&&s| s == sizes[i]).count();
        parts.push(if j == 1 {
            sizes[i].to_string()
        } else {
            format!("{}^{}", sizes[i], j)
        });
        i += j;
    }
    parts.join(" ")
}

/// Rows for the exceptional rings among `reps`, ordered by rank and then by
/// size list, larger lists first.
pub fn table1_report(reps: &[SRing]) -> Result<Vec<Table1Row>> {
    let mut exceptional = Vec::new();
    for a in reps {
        if classify(a)? == Label::Exceptional {
            exceptional.push(a);
        }
    }
    exceptional.sort_by(|a, b| {
        a.rank()
            .cmp(&b.rank())
            .then_with(|| b.size_multiset().cmp(&a.size_multiset()))
            .then_with(|| a.cmp(b))
    });
    exceptional
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let s = aut_alg_induced(a)?;
            Ok(Table1Row {
                name: format!("A{}", i + 1),
                rank: a.rank(),
                sizes: a.size_multiset(),
                schurian: is_schurian(a)?.schurian,
                iso_over_aut: &s.iso_order / &s.aut_order,
                aut_order: s.aut_order,
                aut_alg_order: s.aut_alg.len(),
            })
        })
        .collect()
}

pub const TABLE1_HEADER: &str = "name,rank,sizes,schurian,aut_order,iso_over_aut,aut_alg_order";

pub fn table1_csv(rows: &[Table1Row]) -> String {
    let mut out = String::from(TABLE1_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.name,
            r.rank,
            format_sizes(&r.sizes),
            r.schurian,
            r.aut_order,
            r.iso_over_aut,
            r.aut_alg_order
        ));
    }
    out
}

/// Enumerates `C3^3`, reduces up to Cayley isomorphism and tabulates the
/// exceptional rings. Also returns the total and reduced counts.
pub fn table1() -> Result<(Vec<Table1Row>, usize, usize)> {
    let g = GroupSpec::new(vec![3, 3, 3])?;
    let all = enumerate_srings(&g)?;
    let reps = up_to_cayley(&all, &g)?;
    Ok((table1_report(&reps)?, all.len(), reps.len()))
}
