//! Permutations and permutation groups with a stabilizer chain.
//!
//! Permutations act on the right: `p.apply(i)` is the image of `i`, and
//! `p.then(&q)` applies `p` first and `q` second.

use std::collections::VecDeque;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Perm(Vec<usize>);

impl Perm {
    pub fn identity(degree: usize) -> Self {
        Perm((0..degree).collect())
    }

    /// Builds a permutation from its image array, checking bijectivity.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(Error::InvalidPermutation(format!(
                    "image {x} repeated or out of range for degree {n}"
                )));
            }
            seen[x] = true;
        }
        Ok(Perm(images))
    }

    pub(crate) fn from_images_unchecked(images: Vec<usize>) -> Self {
        debug_assert!(Perm::from_images(images.clone()).is_ok());
        Perm(images)
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn into_images(self) -> Vec<usize> {
        self.0
    }

    pub fn then(&self, other: &Perm) -> Perm {
        Perm(self.0.iter().map(|&i| other.0[i]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Perm(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn pow(&self, mut e: u64) -> Perm {
        let mut base = self.clone();
        let mut acc = Perm::identity(self.degree());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.then(&base);
            }
            base = base.then(&base);
            e >>= 1;
        }
        acc
    }

    /// Order of the permutation as the lcm of its cycle lengths.
    pub fn order(&self) -> u64 {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut ord = 1u64;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0u64;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.0[x];
                len += 1;
            }
            ord = num_integer::lcm(ord, len);
        }
        ord
    }
}

/// Orbits of the group generated by `gens`, each sorted, listed by smallest point.
pub fn orbits(degree: usize, gens: &[Perm]) -> Vec<Vec<usize>> {
    let mut label = vec![usize::MAX; degree];
    let mut out = Vec::new();
    for start in 0..degree {
        if label[start] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut orbit = vec![start];
        label[start] = id;
        let mut k = 0;
        while k < orbit.len() {
            let x = orbit[k];
            k += 1;
            for g in gens {
                let y = g.apply(x);
                if label[y] == usize::MAX {
                    label[y] = id;
                    orbit.push(y);
                }
            }
        }
        orbit.sort_unstable();
        out.push(orbit);
    }
    out
}

#[derive(Clone, Debug)]
struct Level {
    point: usize,
    gens: Vec<Perm>,
    orbit: Vec<usize>,
    transversal: Vec<Option<Perm>>,
}

impl Level {
    fn new(point: usize, degree: usize, gens: Vec<Perm>) -> Self {
        let mut level = Level {
            point,
            gens,
            orbit: Vec::new(),
            transversal: Vec::new(),
        };
        level.rebuild(degree);
        level
    }

    fn rebuild(&mut self, degree: usize) {
        let mut transversal: Vec<Option<Perm>> = vec![None; degree];
        transversal[self.point] = Some(Perm::identity(degree));
        let mut orbit = vec![self.point];
        let mut queue = VecDeque::from([self.point]);
        while let Some(x) = queue.pop_front() {
            for s in &self.gens {
                let y = s.apply(x);
                if transversal[y].is_none() {
                    let u = transversal[x].as_ref().expect("orbit point").then(s);
                    transversal[y] = Some(u);
                    orbit.push(y);
                    queue.push_back(y);
                }
            }
        }
        self.orbit = orbit;
        self.transversal = transversal;
    }
}

/// A permutation group given by generators together with a base and strong
/// generating set, which provide the exact order and membership testing.
#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    levels: Vec<Level>,
}

impl PermGroup {
    pub fn trivial(degree: usize) -> Self {
        PermGroup {
            degree,
            generators: Vec::new(),
            levels: Vec::new(),
        }
    }

    pub fn symmetric(degree: usize) -> Self {
        if degree < 2 {
            return Self::trivial(degree);
        }
        let mut swap = Perm::identity(degree);
        swap.0.swap(0, 1);
        let cycle = Perm((0..degree).map(|i| (i + 1) % degree).collect());
        Self::from_generators(degree, vec![swap, cycle])
    }

    pub fn from_generators(degree: usize, gens: Vec<Perm>) -> Self {
        Self::with_base_prefix(degree, gens, &[])
    }

    /// Deterministic Schreier-Sims. The base starts with `prefix`, so the
    /// stabilizer of `prefix[0]` is available as level 1 of the chain.
    pub fn with_base_prefix(degree: usize, gens: Vec<Perm>, prefix: &[usize]) -> Self {
        let gens: Vec<Perm> = gens.into_iter().filter(|g| !g.is_identity()).collect();
        for g in &gens {
            assert_eq!(g.degree(), degree, "generator degree mismatch");
        }
        let mut base: Vec<usize> = prefix.to_vec();
        for g in &gens {
            if base.iter().all(|&b| g.apply(b) == b) {
                let moved = (0..degree)
                    .find(|&i| g.apply(i) != i)
                    .expect("non-identity");
                base.push(moved);
            }
        }
        let mut levels: Vec<Level> = Vec::with_capacity(base.len());
        for (i, &b) in base.iter().enumerate() {
            let fixing: Vec<Perm> = gens
                .iter()
                .filter(|g| base[..i].iter().all(|&c| g.apply(c) == c))
                .cloned()
                .collect();
            levels.push(Level::new(b, degree, fixing));
        }

        let mut i = levels.len() as isize - 1;
        while i >= 0 {
            let li = i as usize;
            let mut jumped = None;
            'scan: for beta_idx in 0..levels[li].orbit.len() {
                let beta = levels[li].orbit[beta_idx];
                for s_idx in 0..levels[li].gens.len() {
                    let s = &levels[li].gens[s_idx];
                    let u_beta = levels[li].transversal[beta].as_ref().expect("orbit");
                    let img = s.apply(beta);
                    let u_img = levels[li].transversal[img].as_ref().expect("orbit");
                    let schreier = u_beta.then(s).then(&u_img.inverse());
                    if schreier.is_identity() {
                        continue;
                    }
                    let (residue, depth) = strip(&levels, schreier, li + 1);
                    if depth == levels.len() && residue.is_identity() {
                        continue;
                    }
                    if depth == levels.len() {
                        let moved = (0..degree)
                            .find(|&x| residue.apply(x) != x)
                            .expect("non-identity residue");
                        levels.push(Level::new(moved, degree, Vec::new()));
                    }
                    for level in levels.iter_mut().take(depth + 1).skip(li + 1) {
                        level.gens.push(residue.clone());
                        level.rebuild(degree);
                    }
                    jumped = Some(depth);
                    break 'scan;
                }
            }
            match jumped {
                Some(depth) => i = depth as isize,
                None => i -= 1,
            }
        }
        PermGroup {
            degree,
            generators: gens,
            levels,
        }
    }

    /// Builds the chain from a known base and strong generating set.
    ///
    /// The caller guarantees that the strong generators fixing the first `i`
    /// base points generate the pointwise stabilizer of those points.
    pub fn from_base_and_strong_generators(
        degree: usize,
        base: &[usize],
        strong: Vec<Perm>,
    ) -> Self {
        let strong: Vec<Perm> = strong.into_iter().filter(|g| !g.is_identity()).collect();
        let levels = base
            .iter()
            .enumerate()
            .map(|(i, &b)| {
                let fixing: Vec<Perm> = strong
                    .iter()
                    .filter(|g| base[..i].iter().all(|&c| g.apply(c) == c))
                    .cloned()
                    .collect();
                Level::new(b, degree, fixing)
            })
            .collect();
        PermGroup {
            degree,
            generators: strong,
            levels,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.point).collect()
    }

    pub fn orbit_lengths(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn order(&self) -> BigUint {
        self.levels.iter().fold(BigUint::from(1u32), |acc, l| {
            acc * BigUint::from(l.orbit.len())
        })
    }

    /// Order as `u64`, `None` on overflow.
    pub fn order_u64(&self) -> Option<u64> {
        self.levels
            .iter()
            .try_fold(1u64, |acc, l| acc.checked_mul(l.orbit.len() as u64))
    }

    pub fn contains(&self, p: &Perm) -> bool {
        if p.degree() != self.degree {
            return false;
        }
        let (residue, depth) = strip(&self.levels, p.clone(), 0);
        depth == self.levels.len() && residue.is_identity()
    }

    /// Generators of the pointwise stabilizer of the first `k` base points.
    pub fn stabilizer_generators(&self, k: usize) -> Vec<Perm> {
        match self.levels.get(k) {
            Some(level) => level.gens.clone(),
            None => Vec::new(),
        }
    }

    /// Orbits of the stabilizer of `point`.
    pub fn stabilizer_orbits(&self, point: usize) -> Vec<Vec<usize>> {
        if self.levels.first().map(|l| l.point) == Some(point) {
            return orbits(self.degree, &self.stabilizer_generators(1));
        }
        let rebased = PermGroup::with_base_prefix(self.degree, self.generators.clone(), &[point]);
        orbits(self.degree, &rebased.stabilizer_generators(1))
    }

    pub fn orbits(&self) -> Vec<Vec<usize>> {
        orbits(self.degree, &self.generators)
    }

    /// All elements, in transversal order. Fails when the order exceeds `limit`.
    pub fn elements(&self, limit: usize) -> Result<Vec<Perm>> {
        let order =
            self.order_u64()
                .filter(|&o| o <= limit as u64)
                .ok_or(Error::BoundExceeded {
                    what: "group element listing",
                    size: self.order_u64().map_or(usize::MAX, |o| o as usize),
                    bound: limit,
                })?;
        let mut out = vec![Perm::identity(self.degree)];
        out.reserve(order as usize);
        for level in self.levels.iter().rev() {
            let reps: Vec<&Perm> = level
                .orbit
                .iter()
                .map(|&b| level.transversal[b].as_ref().expect("orbit"))
                .collect();
            let mut next = Vec::with_capacity(out.len() * reps.len());
            for u in &reps {
                for g in &out {
                    next.push(g.then(u));
                }
            }
            out = next;
        }
        Ok(out)
    }
}

fn strip(levels: &[Level], mut g: Perm, start: usize) -> (Perm, usize) {
    for (k, level) in levels.iter().enumerate().skip(start) {
        let beta = g.apply(level.point);
        match &level.transversal[beta] {
            Some(u) => g = g.then(&u.inverse()),
            None => return (g, k),
        }
    }
    (g, levels.len())
}
