//! Class bijections preserving the structure-constant tensor.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{generated_subgroup, quotient_section, Section, Subgroup};
use crate::sring::{radical, SRing};

/// A bijection of basic-set indices, `class_map[x]` being the image of class `x`.
///
/// The source and target rings are not stored; every operation takes them
/// explicitly.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AlgMap {
    pub class_map: Vec<usize>,
}

impl AlgMap {
    pub fn identity(rank: usize) -> Self {
        AlgMap {
            class_map: (0..rank).collect(),
        }
    }

    /// Checks that `class_map` is a bijection of `0..len`.
    pub fn new(class_map: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; class_map.len()];
        for &c in &class_map {
            if c >= seen.len() || std::mem::replace(&mut seen[c], true) {
                return Err(Error::InvalidPermutation(format!("{class_map:?}")));
            }
        }
        Ok(AlgMap { class_map })
    }

    pub fn rank(&self) -> usize {
        self.class_map.len()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.class_map[x]
    }

    pub fn is_identity(&self) -> bool {
        self.class_map.iter().enumerate().all(|(i, &c)| i == c)
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &AlgMap) -> AlgMap {
        AlgMap {
            class_map: self.class_map.iter().map(|&c| other.class_map[c]).collect(),
        }
    }

    pub fn inverse(&self) -> AlgMap {
        let mut inv = vec![0; self.rank()];
        for (i, &c) in self.class_map.iter().enumerate() {
            inv[c] = i;
        }
        AlgMap { class_map: inv }
    }

    pub fn order(&self) -> usize {
        let mut p = self.clone();
        let mut k = 1;
        while !p.is_identity() {
            p = p.then(self);
            k += 1;
        }
        k
    }
}

/// A structure constant that a class map fails to preserve.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TensorViolation {
    pub x: usize,
    pub y: usize,
    pub z: usize,
    pub source: u32,
    pub target: u32,
}

impl std::fmt::Display for TensorViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "c[{}][{}][{}] = {} but its image is {}",
            self.x, self.y, self.z, self.source, self.target
        )
    }
}

/// Compares every structure constant of `a` with its image in `b`.
///
/// Sizes are checked first through `|X| = c[X][X*][e]`, so a size mismatch is
/// reported as the triple `(X, X*, 0)`.
pub fn is_algebraic_iso(
    a: &SRing,
    b: &SRing,
    m: &AlgMap,
) -> std::result::Result<(), TensorViolation> {
    let (ta, tb) = (a.structure_constants(), b.structure_constants());
    let r = a.rank();
    let check = |x: usize, y: usize, z: usize| {
        let (s, t) = (ta.get(x, y, z), tb.get(m.apply(x), m.apply(y), m.apply(z)));
        if s == t {
            Ok(())
        } else {
            Err(TensorViolation {
                x,
                y,
                z,
                source: s,
                target: t,
            })
        }
    };
    if r != b.rank() || m.rank() != r {
        return Err(TensorViolation {
            x: 0,
            y: 0,
            z: 0,
            source: r as u32,
            target: b.rank() as u32,
        });
    }
    for x in 0..r {
        check(x, a.inverse_class(x), 0)?;
    }
    for x in 0..r {
        for y in 0..r {
            for z in 0..r {
                check(x, y, z)?;
            }
        }
    }
    Ok(())
}

/// Validates the shape of `m` and then the tensor condition.
pub fn check_algebraic_iso(a: &SRing, b: &SRing, m: &AlgMap) -> Result<()> {
    if a.rank() != b.rank() || m.rank() != a.rank() {
        return Err(Error::MapNotAlgebraic(format!(
            "rank mismatch: {} -> {} with a map of length {}",
            a.rank(),
            b.rank(),
            m.rank()
        )));
    }
    AlgMap::new(m.class_map.clone())?;
    is_algebraic_iso(a, b, m).map_err(|v| Error::MapNotAlgebraic(v.to_string()))
}

/// Per-class data that any algebraic isomorphism preserves.
fn class_invariant(a: &SRing, x: usize) -> (usize, bool, Vec<u32>, Vec<u32>) {
    let t = a.structure_constants();
    let r = a.rank();
    let mut out: Vec<u32> = (0..r).flat_map(|y| t.row(x, y).iter().copied()).collect();
    out.sort_unstable();
    let mut into: Vec<u32> = (0..r)
        .flat_map(|y| (0..r).map(move |z| (y, z)))
        .map(|(y, z)| t.get(y, z, x))
        .collect();
    into.sort_unstable();
    (a.class_size(x), a.inverse_class(x) == x, out, into)
}

struct AlgSearch<'a> {
    a: &'a SRing,
    b: &'a SRing,
    allowed: Vec<Vec<usize>>,
    map: Vec<Option<usize>>,
    used: Vec<bool>,
    assigned: Vec<usize>,
    limit: usize,
    out: Vec<AlgMap>,
}

impl AlgSearch<'_> {
    fn consistent(&self, new: &[usize]) -> bool {
        let (ta, tb) = (self.a.structure_constants(), self.b.structure_constants());
        let m = |x: usize| self.map[x].expect("assigned");
        for &w in new {
            for &y in &self.assigned {
                for &z in &self.assigned {
                    if ta.get(w, y, z) != tb.get(m(w), m(y), m(z))
                        || ta.get(y, w, z) != tb.get(m(y), m(w), m(z))
                        || ta.get(y, z, w) != tb.get(m(y), m(z), m(w))
                    {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn run(&mut self) {
        if self.out.len() >= self.limit {
            return;
        }
        let Some(x) = (0..self.map.len()).find(|&x| self.map[x].is_none()) else {
            let class_map = self.map.iter().map(|c| c.expect("complete")).collect();
            self.out.push(AlgMap { class_map });
            return;
        };
        let xi = self.a.inverse_class(x);
        for idx in 0..self.allowed[x].len() {
            let c = self.allowed[x][idx];
            if self.used[c] {
                continue;
            }
            let ci = self.b.inverse_class(c);
            if xi != x && self.used[ci] {
                continue;
            }
            let mut new = vec![x];
            self.map[x] = Some(c);
            self.used[c] = true;
            if xi != x {
                self.map[xi] = Some(ci);
                self.used[ci] = true;
                new.push(xi);
            }
            let mark = self.assigned.len();
            self.assigned.extend(&new);
            if self.consistent(&new) {
                self.run();
            }
            self.assigned.truncate(mark);
            for &w in &new {
                self.used[self.map[w].expect("assigned")] = false;
                self.map[w] = None;
            }
            if self.out.len() >= self.limit {
                return;
            }
        }
    }
}

fn search(a: &SRing, b: &SRing, limit: usize, bound: usize) -> Result<Vec<AlgMap>> {
    if a.rank() > bound {
        return Err(Error::BoundExceeded {
            what: "rank",
            size: a.rank(),
            bound,
        });
    }
    if a.rank() != b.rank() || a.group().order() != b.group().order() {
        return Ok(Vec::new());
    }
    let r = a.rank();
    let inv_b: Vec<_> = (0..r).map(|y| class_invariant(b, y)).collect();
    let allowed = (0..r)
        .map(|x| {
            let ix = class_invariant(a, x);
            (0..r).filter(|&y| inv_b[y] == ix).collect()
        })
        .collect();
    let mut s = AlgSearch {
        a,
        b,
        allowed,
        map: vec![None; r],
        used: vec![false; r],
        assigned: Vec::new(),
        limit,
        out: Vec::new(),
    };
    // the identity class is the only class of size one containing e
    if s.allowed[0].contains(&0) {
        s.map[0] = Some(0);
        s.used[0] = true;
        s.assigned.push(0);
        if s.consistent(&[0]) {
            s.run();
        }
    }
    Ok(s.out)
}

/// All algebraic isomorphisms `a -> b`, in lexicographic order of their class maps.
pub fn algebraic_isomorphisms(a: &SRing, b: &SRing) -> Result<Vec<AlgMap>> {
    search(a, b, usize::MAX, super::ALG_RANK_BOUND)
}

pub fn algebraic_isomorphisms_with_bound(
    a: &SRing,
    b: &SRing,
    bound: usize,
) -> Result<Vec<AlgMap>> {
    search(a, b, usize::MAX, bound)
}

/// The lexicographically least algebraic isomorphism, if any.
pub fn first_algebraic_isomorphism(a: &SRing, b: &SRing) -> Result<Option<AlgMap>> {
    Ok(search(a, b, 1, super::ALG_RANK_BOUND)?.pop())
}

/// `Aut_alg(A)`.
pub fn algebraic_automorphisms(a: &SRing) -> Result<Vec<AlgMap>> {
    algebraic_isomorphisms(a, a)
}

pub fn algebraic_automorphisms_with_bound(a: &SRing, bound: usize) -> Result<Vec<AlgMap>> {
    algebraic_isomorphisms_with_bound(a, a, bound)
}

/// Image of an `a`-set under `m`, as a sorted element list of `b`'s group.
pub fn extend_to_sets(a: &SRing, b: &SRing, m: &AlgMap, set: &[usize]) -> Result<Vec<usize>> {
    let classes = a.classes_in(set)?;
    let mut out: Vec<usize> = classes
        .iter()
        .flat_map(|&c| b.class(m.apply(c)).iter().copied())
        .collect();
    out.sort_unstable();
    Ok(out)
}

/// Image of an `a`-subgroup, which is a `b`-subgroup.
pub fn extend_to_subgroup(a: &SRing, b: &SRing, m: &AlgMap, h: &Subgroup) -> Result<Subgroup> {
    let members = extend_to_sets(a, b, m, h.members())?;
    Subgroup::from_members(b.group(), &members)
}

/// Image of an `a`-section `U/L`.
pub fn extend_to_sections(a: &SRing, b: &SRing, m: &AlgMap, s: &Section) -> Result<Section> {
    let upper = extend_to_subgroup(a, b, m, &s.upper)?;
    let lower = extend_to_subgroup(a, b, m, &s.lower)?;
    quotient_section(b.group(), &upper, &lower)
}

/// `<X>` and `rad(X)` of a class, as subgroups.
pub fn class_subgroups(a: &SRing, x: usize) -> Result<(Subgroup, Subgroup)> {
    let g = a.group();
    Ok((generated_subgroup(g, a.class(x)), radical(g, a.class(x))?))
}
