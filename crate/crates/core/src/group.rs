//! Finite abelian groups presented as direct products of cyclic groups.
//!
//! Elements are residue vectors; they are addressed by their mixed-radix rank
//! with the last factor least significant, so index 0 is the identity and the
//! index order is the lexicographic order of residue vectors.

use std::collections::HashSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{Perm, PermGroup};

/// Default upper bound on group orders for subgroup and automorphism work.
pub const DEFAULT_GROUP_BOUND: usize = 256;

const TABLE_LIMIT: usize = 1024;

#[derive(Clone)]
pub struct GroupSpec {
    factors: Vec<u64>,
    order: usize,
    strides: Vec<usize>,
    table: Arc<OnceLock<Vec<u32>>>,
}

impl PartialEq for GroupSpec {
    fn eq(&self, other: &Self) -> bool {
        self.factors == other.factors
    }
}

impl Eq for GroupSpec {}

impl Hash for GroupSpec {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.factors.hash(state);
    }
}

impl PartialOrd for GroupSpec {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GroupSpec {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.order, &self.factors).cmp(&(other.order, &other.factors))
    }
}

impl fmt::Debug for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupSpec{:?}", self.factors)
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "C1");
        }
        let parts: Vec<String> = self.factors.iter().map(|d| format!("C{d}")).collect();
        write!(f, "{}", parts.join("x"))
    }
}

#[derive(Serialize, Deserialize)]
struct GroupJson {
    factors: Vec<u64>,
}

impl Serialize for GroupSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GroupJson {
            factors: self.factors.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GroupSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = GroupJson::deserialize(d)?;
        GroupSpec::new(raw.factors).map_err(serde::de::Error::custom)
    }
}

/// A group element as a residue vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Elem(pub Vec<u64>);

impl GroupSpec {
    pub fn new(factors: Vec<u64>) -> Result<Self> {
        if let Some(&bad) = factors.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidFactor(bad));
        }
        let order = factors
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d as usize))
            .ok_or(Error::BoundExceeded {
                what: "group order",
                size: usize::MAX,
                bound: usize::MAX,
            })?;
        let mut strides = vec![1usize; factors.len()];
        for i in (0..factors.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * factors[i + 1] as usize;
        }
        Ok(GroupSpec {
            factors,
            order,
            strides,
            table: Arc::new(OnceLock::new()),
        })
    }

    pub fn trivial() -> Self {
        GroupSpec::new(Vec::new()).expect("empty factor list")
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    /// Index of the canonical generator of factor `i`.
    pub fn generator(&self, i: usize) -> usize {
        self.strides[i]
    }

    pub fn residues(&self, x: usize) -> Vec<u64> {
        self.factors
            .iter()
            .zip(&self.strides)
            .map(|(&d, &s)| ((x / s) as u64) % d)
            .collect()
    }

    pub fn elem(&self, x: usize) -> Elem {
        Elem(self.residues(x))
    }

    pub fn index_of(&self, e: &Elem) -> Result<usize> {
        if e.0.len() != self.factors.len() || e.0.iter().zip(&self.factors).any(|(r, d)| r >= d) {
            return Err(Error::ResidueOutOfRange {
                residues: e.0.clone(),
                factors: self.factors.clone(),
            });
        }
        Ok(e.0
            .iter()
            .zip(&self.strides)
            .map(|(&r, &s)| r as usize * s)
            .sum())
    }

    fn mul_arith(&self, x: usize, y: usize) -> usize {
        let mut out = 0;
        for (&d, &s) in self.factors.iter().zip(&self.strides) {
            let d = d as usize;
            out += ((x / s % d + y / s % d) % d) * s;
        }
        out
    }

    fn table(&self) -> Option<&[u32]> {
        if self.order > TABLE_LIMIT {
            return None;
        }
        Some(self.table.get_or_init(|| {
            let n = self.order;
            let mut t = vec![0u32; n * n];
            for x in 0..n {
                for y in 0..n {
                    t[x * n + y] = self.mul_arith(x, y) as u32;
                }
            }
            t
        }))
    }

    /// The group law on element indices.
    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        match self.table() {
            Some(t) => t[x * self.order + y] as usize,
            None => self.mul_arith(x, y),
        }
    }

    pub fn inv(&self, x: usize) -> usize {
        let mut out = 0;
        for (&d, &s) in self.factors.iter().zip(&self.strides) {
            let d = d as usize;
            out += ((d - x / s % d) % d) * s;
        }
        out
    }

    /// `x^m` for any integer `m`, negative exponents included.
    pub fn pow(&self, x: usize, m: i64) -> usize {
        let mut out = 0;
        for (&d, &s) in self.factors.iter().zip(&self.strides) {
            let r = (x / s) as i128 % d as i128;
            let v = (r * m as i128).rem_euclid(d as i128) as usize;
            out += v * s;
        }
        out
    }

    /// The least `n >= 1` with `x^n = e`.
    pub fn elem_order(&self, x: usize) -> u64 {
        self.factors
            .iter()
            .zip(&self.strides)
            .map(|(&d, &s)| d / num_integer::gcd((x / s) as u64 % d, d))
            .fold(1, num_integer::lcm)
    }

    pub fn exponent(&self) -> u64 {
        self.factors.iter().copied().fold(1, num_integer::lcm)
    }

    pub fn mul_elems(&self, g: &Elem, h: &Elem) -> Result<Elem> {
        let (x, y) = (self.index_of(g)?, self.index_of(h)?);
        Ok(self.elem(self.mul(x, y)))
    }

    pub fn inv_elem(&self, g: &Elem) -> Result<Elem> {
        Ok(self.elem(self.inv(self.index_of(g)?)))
    }

    pub fn order_of_elem(&self, g: &Elem) -> Result<u64> {
        Ok(self.elem_order(self.index_of(g)?))
    }

    /// Invariant factors `d_1 | d_2 | ... | d_k` of this group.
    pub fn invariant_factors(&self) -> Vec<u64> {
        let orders: Vec<u64> = self.elements().map(|x| self.elem_order(x)).collect();
        invariant_factors_from_orders(&orders)
    }

    pub fn is_invariant_form(&self) -> bool {
        self.invariant_factors() == self.factors
    }

    /// The same abstract group written in invariant-factor form.
    pub fn normalized(&self) -> GroupSpec {
        GroupSpec::new(self.invariant_factors()).expect("invariant factors are >= 2")
    }

    /// Direct product; the left factor occupies the leading coordinates.
    pub fn product(&self, other: &GroupSpec) -> GroupSpec {
        let mut f = self.factors.clone();
        f.extend_from_slice(&other.factors);
        GroupSpec::new(f).expect("factors already valid")
    }

    fn check_bound(&self, what: &'static str, bound: usize) -> Result<()> {
        if self.order > bound {
            return Err(Error::BoundExceeded {
                what,
                size: self.order,
                bound,
            });
        }
        Ok(())
    }
}

/// Validates the factor list and builds the group.
pub fn make_group(factors: &[u64]) -> Result<GroupSpec> {
    GroupSpec::new(factors.to_vec())
}

/// Invariant factors of a finite abelian group from the orders of all of its elements.
pub fn invariant_factors_from_orders(orders: &[u64]) -> Vec<u64> {
    let n = orders.len() as u64;
    let mut primes = Vec::new();
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            primes.push(p);
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        primes.push(m);
    }
    // partition of the p-part, largest part first
    let mut parts_per_prime: Vec<(u64, Vec<u32>)> = Vec::new();
    for &p in &primes {
        let mut conj = Vec::new();
        let mut prev_log = 0u32;
        let mut pj = p;
        loop {
            let count = orders.iter().filter(|&&o| pj % o == 0).count() as u64;
            let log = count.ilog(p);
            if log == prev_log {
                break;
            }
            conj.push(log - prev_log);
            prev_log = log;
            pj *= p;
        }
        let num_parts = conj.first().copied().unwrap_or(0);
        let parts: Vec<u32> = (1..=num_parts)
            .map(|i| conj.iter().filter(|&&c| c >= i).count() as u32)
            .collect();
        parts_per_prime.push((p, parts));
    }
    let k = parts_per_prime
        .iter()
        .map(|(_, parts)| parts.len())
        .max()
        .unwrap_or(0);
    let mut factors = Vec::with_capacity(k);
    for i in 0..k {
        let d: u64 = parts_per_prime
            .iter()
            .map(|(p, parts)| parts.get(i).map_or(1, |&e| p.pow(e)))
            .product();
        factors.push(d);
    }
    factors.reverse();
    factors
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Subgroup {
    members: Vec<usize>,
    generators: Vec<usize>,
}

impl Subgroup {
    pub fn trivial() -> Self {
        Subgroup {
            members: vec![0],
            generators: Vec::new(),
        }
    }

    pub fn whole(g: &GroupSpec) -> Self {
        Subgroup {
            members: g.elements().collect(),
            generators: (0..g.factors().len()).map(|i| g.generator(i)).collect(),
        }
    }

    /// Checks closure and builds a minimal generating list.
    pub fn from_members(g: &GroupSpec, members: &[usize]) -> Result<Self> {
        let mut m = members.to_vec();
        m.sort_unstable();
        m.dedup();
        if m.first() != Some(&0) {
            return Err(Error::NotASubgroup);
        }
        let closed = m
            .iter()
            .all(|&x| m.iter().all(|&y| m.binary_search(&g.mul(x, y)).is_ok()));
        if !closed {
            return Err(Error::NotASubgroup);
        }
        Ok(Self::from_closed(g, m))
    }

    fn from_closed(g: &GroupSpec, members: Vec<usize>) -> Self {
        let basis = invariant_basis(&members, g.order(), |x, y| g.mul(x, y), |x| g.elem_order(x));
        Subgroup {
            members,
            generators: basis.basis,
        }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.members.iter().all(|&x| other.contains(x))
    }

    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }
}

struct Basis {
    factors: Vec<u64>,
    basis: Vec<usize>,
}

/// Finds independent elements of orders `d_1 | ... | d_k` generating the
/// group spanned by `elements` (which must be closed under `add`).
fn invariant_basis(
    elements: &[usize],
    universe: usize,
    add: impl Fn(usize, usize) -> usize,
    order_of: impl Fn(usize) -> u64,
) -> Basis {
    let orders: Vec<u64> = elements.iter().map(|&x| order_of(x)).collect();
    let factors = invariant_factors_from_orders(&orders);
    let zero = elements[0];
    let mut chosen: Vec<usize> = Vec::new();
    let mut in_span = vec![false; universe];
    in_span[zero] = true;
    let found = basis_search(
        elements,
        &orders,
        &factors,
        factors.len(),
        &add,
        &mut chosen,
        &mut in_span,
    );
    assert!(found, "an abelian group always has an invariant basis");
    chosen.reverse();
    Basis {
        factors,
        basis: chosen,
    }
}

fn basis_search(
    elements: &[usize],
    orders: &[u64],
    factors: &[u64],
    remaining: usize,
    add: &impl Fn(usize, usize) -> usize,
    chosen: &mut Vec<usize>,
    in_span: &mut Vec<bool>,
) -> bool {
    if remaining == 0 {
        return true;
    }
    let d = factors[remaining - 1];
    for (idx, &y) in elements.iter().enumerate() {
        if orders[idx] != d {
            continue;
        }
        // <y> must meet the current span trivially
        let mut z = y;
        let mut independent = true;
        for _ in 1..d {
            if in_span[z] {
                independent = false;
                break;
            }
            z = add(z, y);
        }
        if !independent {
            continue;
        }
        let span: Vec<usize> = (0..in_span.len()).filter(|&x| in_span[x]).collect();
        let mut added = Vec::new();
        for &s in &span {
            let mut z = s;
            for _ in 1..d {
                z = add(z, y);
                if !in_span[z] {
                    added.push(z);
                }
            }
        }
        for &z in &added {
            in_span[z] = true;
        }
        chosen.push(y);
        if basis_search(
            elements,
            orders,
            factors,
            remaining - 1,
            add,
            chosen,
            in_span,
        ) {
            return true;
        }
        chosen.pop();
        for &z in &added {
            in_span[z] = false;
        }
    }
    false
}

/// Smallest subgroup containing `xs`.
pub fn generated_subgroup(g: &GroupSpec, xs: &[usize]) -> Subgroup {
    let mut members = vec![0usize];
    let mut present = vec![false; g.order()];
    present[0] = true;
    for &x in xs {
        if present[x] {
            continue;
        }
        // union of the cosets H, H+x, H+2x, ... until it closes up
        let base = members.clone();
        let mut shift = x;
        while !present[shift] {
            for &h in &base {
                let y = g.mul(h, shift);
                if !present[y] {
                    present[y] = true;
                    members.push(y);
                }
            }
            shift = g.mul(shift, x);
        }
    }
    members.sort_unstable();
    Subgroup::from_closed(g, members)
}

/// All subgroups, sorted by order then member list.
pub fn all_subgroups(g: &GroupSpec) -> Result<Vec<Subgroup>> {
    all_subgroups_with_bound(g, DEFAULT_GROUP_BOUND)
}

pub fn all_subgroups_with_bound(g: &GroupSpec, bound: usize) -> Result<Vec<Subgroup>> {
    g.check_bound("subgroup lattice", bound)?;
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut frontier = vec![vec![0usize]];
    seen.insert(vec![0]);
    while let Some(h) = frontier.pop() {
        let mut present = vec![false; g.order()];
        for &x in &h {
            present[x] = true;
        }
        for x in g.elements() {
            if present[x] {
                continue;
            }
            let mut members = h.clone();
            let mut mark = present.clone();
            let mut shift = x;
            while !mark[shift] {
                for &y in &h {
                    let z = g.mul(y, shift);
                    if !mark[z] {
                        mark[z] = true;
                        members.push(z);
                    }
                }
                shift = g.mul(shift, x);
            }
            members.sort_unstable();
            if seen.insert(members.clone()) {
                frontier.push(members);
            }
        }
    }
    let mut out: Vec<Subgroup> = seen
        .into_iter()
        .map(|m| Subgroup::from_closed(g, m))
        .collect();
    out.sort_by(|a, b| (a.order(), &a.members).cmp(&(b.order(), &b.members)));
    Ok(out)
}

/// A section `U/L` realized as an invariant-factor group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Section {
    pub upper: Subgroup,
    pub lower: Subgroup,
    pub quotient: GroupSpec,
    /// Quotient index of each member of `upper`, aligned with `upper.members()`.
    pub projection: Vec<usize>,
}

impl Section {
    pub fn project(&self, x: usize) -> Option<usize> {
        self.upper
            .members
            .binary_search(&x)
            .ok()
            .map(|i| self.projection[i])
    }

    /// All members of `upper` mapping to the quotient element `q`.
    pub fn preimage(&self, q: usize) -> Vec<usize> {
        self.upper
            .members
            .iter()
            .zip(&self.projection)
            .filter(|&(_, &p)| p == q)
            .map(|(&x, _)| x)
            .collect()
    }

    pub fn order(&self) -> usize {
        self.quotient.order()
    }
}

/// The section `U/L` with the canonical projection onto its invariant-factor form.
pub fn quotient_section(g: &GroupSpec, upper: &Subgroup, lower: &Subgroup) -> Result<Section> {
    if !lower.is_subset_of(upper) {
        return Err(Error::NotNested);
    }
    let n = g.order();
    // coset representative = smallest member of the coset
    let mut rep_of = vec![usize::MAX; n];
    let mut reps = Vec::new();
    for &u in &upper.members {
        if rep_of[u] != usize::MAX {
            continue;
        }
        let coset: Vec<usize> = lower.members.iter().map(|&l| g.mul(u, l)).collect();
        let rep = *coset.iter().min().expect("nonempty coset");
        for &x in &coset {
            rep_of[x] = reps.len();
        }
        reps.push(rep);
    }
    let q = reps.len();
    let mut coset_of = vec![0usize; n];
    for &u in &upper.members {
        coset_of[u] = rep_of[u];
    }
    let add = |a: usize, b: usize| coset_of[g.mul(reps[a], reps[b])];
    let order_of = |a: usize| {
        let mut k = 1u64;
        let mut z = a;
        while z != 0 {
            z = add(z, a);
            k += 1;
        }
        k
    };
    let ids: Vec<usize> = (0..q).collect();
    let basis = invariant_basis(&ids, q, add, order_of);
    let quotient = GroupSpec::new(basis.factors.clone())?;
    // residue vector -> coset id, then invert
    let mut to_quotient = vec![usize::MAX; q];
    for x in quotient.elements() {
        let r = quotient.residues(x);
        let mut acc = 0usize;
        for (&y, &k) in basis.basis.iter().zip(&r) {
            for _ in 0..k {
                acc = add(acc, y);
            }
        }
        to_quotient[acc] = x;
    }
    debug_assert!(to_quotient.iter().all(|&x| x != usize::MAX));
    let projection = upper
        .members
        .iter()
        .map(|&u| to_quotient[coset_of[u]])
        .collect();
    Ok(Section {
        upper: upper.clone(),
        lower: lower.clone(),
        quotient,
        projection,
    })
}

/// A group automorphism as a permutation of element indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupAutomorphism {
    pub images: Perm,
}

impl GroupAutomorphism {
    /// Checks the homomorphism property on all pairs.
    pub fn from_perm(g: &GroupSpec, p: Perm) -> Result<Self> {
        if p.degree() != g.order() || !is_homomorphism(g, p.images()) {
            return Err(Error::NotAnAutomorphism);
        }
        Ok(GroupAutomorphism { images: p })
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images.apply(x)
    }
}

fn is_homomorphism(g: &GroupSpec, images: &[usize]) -> bool {
    g.elements().all(|x| {
        g.elements()
            .all(|y| images[g.mul(x, y)] == g.mul(images[x], images[y]))
    })
}

fn extend_images(g: &GroupSpec, gen_images: &[usize]) -> Vec<usize> {
    g.elements()
        .map(|x| {
            let r = g.residues(x);
            let mut acc = 0;
            for (&img, &k) in gen_images.iter().zip(&r) {
                acc = g.mul(acc, g.pow(img, k as i64));
            }
            acc
        })
        .collect()
}

/// The automorphism sending the `i`-th canonical generator to `images[i]`,
/// or `None` if no such automorphism exists.
pub fn hom_from_generator_images(
    g: &GroupSpec,
    images: &[usize],
) -> Result<Option<GroupAutomorphism>> {
    if images.len() != g.factors().len() {
        return Err(Error::WrongImageCount {
            expected: g.factors().len(),
            got: images.len(),
        });
    }
    for &x in images {
        if x >= g.order() {
            return Err(Error::IndexOutOfRange {
                index: x,
                order: g.order(),
            });
        }
    }
    // relations: images must have order dividing the factor order
    if images
        .iter()
        .zip(g.factors())
        .any(|(&x, &d)| d % g.elem_order(x) != 0)
    {
        return Ok(None);
    }
    let full = extend_images(g, images);
    Ok(Perm::from_images(full)
        .ok()
        .map(|images| GroupAutomorphism { images }))
}

/// `Aut(G)` as a permutation group on element indices.
pub fn automorphism_group(g: &GroupSpec) -> Result<PermGroup> {
    automorphism_group_with_bound(g, DEFAULT_GROUP_BOUND)
}

pub fn automorphism_group_with_bound(g: &GroupSpec, bound: usize) -> Result<PermGroup> {
    g.check_bound("automorphism group", bound)?;
    let k = g.factors().len();
    let n = g.order();
    let gens: Vec<usize> = (0..k).map(|i| g.generator(i)).collect();
    let candidates: Vec<Vec<usize>> = g
        .factors()
        .iter()
        .map(|&d| g.elements().filter(|&x| g.elem_order(x) == d).collect())
        .collect();

    let mut strong: Vec<Perm> = Vec::new();
    for level in (0..k).rev() {
        let mut prefix: Vec<usize> = gens[..level].to_vec();
        for &c in &candidates[level] {
            let level_gens: Vec<Perm> = strong
                .iter()
                .filter(|p| gens[..level].iter().all(|&b| p.apply(b) == b))
                .cloned()
                .collect();
            let orbit = crate::perm::orbits(n, &level_gens)
                .into_iter()
                .find(|o| o.binary_search(&gens[level]).is_ok())
                .expect("orbit of base point");
            if orbit.binary_search(&c).is_ok() {
                continue;
            }
            prefix.push(c);
            let mut span = span_of(g, &prefix);
            if span.len() == prefix_order(g, prefix.len()) {
                if let Some(images) = complete_images(g, &candidates, &mut prefix, &mut span) {
                    strong.push(Perm::from_images_unchecked(extend_images(g, &images)));
                }
            }
            prefix.truncate(level);
        }
    }
    Ok(PermGroup::from_base_and_strong_generators(n, &gens, strong))
}

fn prefix_order(g: &GroupSpec, len: usize) -> usize {
    g.factors()[..len].iter().map(|&d| d as usize).product()
}

fn span_of(g: &GroupSpec, xs: &[usize]) -> Vec<usize> {
    generated_subgroup(g, xs).members
}

fn complete_images(
    g: &GroupSpec,
    candidates: &[Vec<usize>],
    prefix: &mut Vec<usize>,
    span: &mut Vec<usize>,
) -> Option<Vec<usize>> {
    let i = prefix.len();
    if i == g.factors().len() {
        return Some(prefix.clone());
    }
    let target = prefix_order(g, i + 1);
    for &c in &candidates[i] {
        if span.binary_search(&c).is_ok() {
            continue;
        }
        prefix.push(c);
        let mut next = span_of(g, prefix);
        if next.len() == target {
            if let Some(found) = complete_images(g, candidates, prefix, &mut next) {
                return Some(found);
            }
        }
        prefix.pop();
    }
    None
}

/// Right regular representation: translations `x -> x*g` by the canonical generators.
pub fn right_regular_generators(g: &GroupSpec) -> Vec<Perm> {
    (0..g.factors().len())
        .map(|i| {
            let t = g.generator(i);
            Perm::from_images_unchecked(g.elements().map(|x| g.mul(x, t)).collect())
        })
        .collect()
}

pub fn right_translation(g: &GroupSpec, t: usize) -> Perm {
    Perm::from_images_unchecked(g.elements().map(|x| g.mul(x, t)).collect())
}

/// True when `p` is a right translation.
pub fn is_right_translation(g: &GroupSpec, p: &Perm) -> bool {
    let t = p.apply(0);
    g.elements().all(|x| p.apply(x) == g.mul(x, t))
}

/// All abelian groups of order `n` up to isomorphism, in invariant-factor form.
pub fn enumerate_abelian_groups(n: u64) -> Vec<GroupSpec> {
    fn partitions(k: u32, max: u32) -> Vec<Vec<u32>> {
        if k == 0 {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for first in (1..=max.min(k)).rev() {
            for mut rest in partitions(k - first, first) {
                rest.insert(0, first);
                out.push(rest);
            }
        }
        out
    }
    let mut prime_powers = Vec::new();
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        let mut e = 0;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        if e > 0 {
            prime_powers.push((p, e));
        }
        p += 1;
    }
    if m > 1 {
        prime_powers.push((m, 1));
    }
    let mut combos: Vec<Vec<(u64, Vec<u32>)>> = vec![Vec::new()];
    for &(p, e) in &prime_powers {
        let mut next = Vec::new();
        for combo in &combos {
            for part in partitions(e, e) {
                let mut c = combo.clone();
                c.push((p, part));
                next.push(c);
            }
        }
        combos = next;
    }
    let mut out: Vec<GroupSpec> = combos
        .into_iter()
        .map(|combo| {
            let k = combo.iter().map(|(_, part)| part.len()).max().unwrap_or(0);
            let mut factors: Vec<u64> = (0..k)
                .map(|i| {
                    combo
                        .iter()
                        .map(|(p, part)| part.get(i).map_or(1, |&e| p.pow(e)))
                        .product()
                })
                .collect();
            factors.reverse();
            GroupSpec::new(factors).expect("factors >= 2")
        })
        .collect();
    out.sort();
    out
}

/// Order of `Aut(G)` as a big integer.
pub fn automorphism_group_order(g: &GroupSpec) -> Result<BigUint> {
    Ok(automorphism_group(g)?.order())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(v: &[u64]) -> Elem {
        Elem(v.to_vec())
    }

    #[test]
    fn make_group_examples() {
        assert_eq!(make_group(&[2, 2, 4]).unwrap().order(), 16);
        assert_eq!(make_group(&[]).unwrap().order(), 1);
        assert_eq!(make_group(&[3, 3, 9]).unwrap().order(), 81);
        assert_eq!(make_group(&[2, 1]), Err(Error::InvalidFactor(1)));
        let g = make_group(&[2, 2, 4]).unwrap();
        assert_eq!(g.elem(0), e(&[0, 0, 0]));
    }

    #[test]
    fn arithmetic_examples() {
        let c4 = make_group(&[4]).unwrap();
        assert_eq!(c4.mul_elems(&e(&[1]), &e(&[1])).unwrap(), e(&[2]));
        let g = make_group(&[2, 2, 4]).unwrap();
        assert_eq!(g.order_of_elem(&e(&[0, 0, 2])).unwrap(), 2);
        assert_eq!(g.inv_elem(&e(&[1, 0, 3])).unwrap(), e(&[1, 0, 1]));
        assert!(g.order_of_elem(&e(&[0, 2, 0])).is_err());
        assert!(g.order_of_elem(&e(&[0, 0])).is_err());
    }

    #[test]
    fn pow_handles_negative_exponents() {
        let g = make_group(&[3, 9]).unwrap();
        let x = g.index_of(&e(&[1, 2])).unwrap();
        assert_eq!(g.pow(x, -1), g.inv(x));
        assert_eq!(g.pow(x, 9), 0);
        assert_eq!(g.pow(x, 4), g.mul(x, g.pow(x, 3)));
    }

    #[test]
    fn generated_subgroup_examples() {
        let g = make_group(&[2, 2, 4]).unwrap();
        assert_eq!(generated_subgroup(&g, &[]).members(), &[0]);
        let ac1 = g.index_of(&e(&[1, 0, 2])).unwrap();
        assert_eq!(generated_subgroup(&g, &[ac1]).members(), &[0, ac1]);
        let h = make_group(&[3, 3, 9]).unwrap();
        let a = h.index_of(&e(&[1, 0, 0])).unwrap();
        let c1 = h.index_of(&e(&[0, 0, 3])).unwrap();
        assert_eq!(generated_subgroup(&h, &[a, c1]).order(), 9);
    }

    #[test]
    fn subgroup_counts() {
        let k4 = make_group(&[2, 2]).unwrap();
        let subs = all_subgroups(&k4).unwrap();
        assert_eq!(subs.len(), 5);
        assert_eq!(subs.iter().filter(|s| s.order() == 2).count(), 3);
        assert_eq!(all_subgroups(&make_group(&[4]).unwrap()).unwrap().len(), 3);
        let big = make_group(&[2, 2, 2, 2, 2, 2, 2, 2, 2]).unwrap();
        assert!(matches!(
            all_subgroups(&big),
            Err(Error::BoundExceeded { .. })
        ));
    }

    #[test]
    fn subgroup_generators_are_minimal() {
        let g = make_group(&[2, 2, 4]).unwrap();
        for s in all_subgroups(&g).unwrap() {
            let inv = {
                let orders: Vec<u64> = s.members().iter().map(|&x| g.elem_order(x)).collect();
                invariant_factors_from_orders(&orders)
            };
            assert_eq!(s.generators().len(), inv.len());
            assert_eq!(
                generated_subgroup(&g, s.generators()).members(),
                s.members()
            );
        }
    }

    #[test]
    fn quotient_examples() {
        let c4 = make_group(&[4]).unwrap();
        let whole = Subgroup::whole(&c4);
        let l = generated_subgroup(&c4, &[2]);
        let s = quotient_section(&c4, &whole, &l).unwrap();
        assert_eq!(s.quotient.factors(), &[2]);
        let same = quotient_section(&c4, &whole, &whole).unwrap();
        assert_eq!(same.quotient.order(), 1);
        assert_eq!(quotient_section(&c4, &l, &whole), Err(Error::NotNested));

        let g = make_group(&[2, 2, 4]).unwrap();
        let a = g.index_of(&e(&[1, 0, 0])).unwrap();
        let c = g.index_of(&e(&[0, 0, 1])).unwrap();
        let u = generated_subgroup(&g, &[a, c]);
        let l = generated_subgroup(&g, &[a]);
        let s = quotient_section(&g, &u, &l).unwrap();
        assert_eq!(s.quotient.factors(), &[4]);
    }

    #[test]
    fn identity_section_is_identity_map_on_invariant_groups() {
        let g = make_group(&[2, 2, 4]).unwrap();
        let s = quotient_section(&g, &Subgroup::whole(&g), &Subgroup::trivial()).unwrap();
        assert_eq!(s.quotient, g);
        assert!(g.elements().all(|x| s.project(x) == Some(x)));
    }

    #[test]
    fn invariant_factor_normalization() {
        assert_eq!(make_group(&[2, 3]).unwrap().invariant_factors(), vec![6]);
        assert_eq!(
            make_group(&[4, 2, 2]).unwrap().invariant_factors(),
            vec![2, 2, 4]
        );
        assert_eq!(
            make_group(&[6, 10]).unwrap().invariant_factors(),
            vec![2, 30]
        );
        assert_eq!(
            make_group(&[]).unwrap().invariant_factors(),
            Vec::<u64>::new()
        );
    }

    #[test]
    fn automorphism_group_orders() {
        let c2_3 = make_group(&[2, 2, 2]).unwrap();
        assert_eq!(automorphism_group(&c2_3).unwrap().order_u64(), Some(168));
        let c3_3 = make_group(&[3, 3, 3]).unwrap();
        assert_eq!(automorphism_group(&c3_3).unwrap().order_u64(), Some(11232));
        assert_eq!(
            automorphism_group(&make_group(&[9]).unwrap())
                .unwrap()
                .order_u64(),
            Some(6)
        );
        assert_eq!(
            automorphism_group(&GroupSpec::trivial())
                .unwrap()
                .order_u64(),
            Some(1)
        );
    }

    #[test]
    fn hom_from_images_examples() {
        let g = make_group(&[2, 2, 4]).unwrap();
        let idx = |v: &[u64]| g.index_of(&e(v)).unwrap();
        let (a, b, c) = (idx(&[1, 0, 0]), idx(&[0, 1, 0]), idx(&[0, 0, 1]));
        let f = hom_from_generator_images(&g, &[a, idx(&[1, 1, 2]), idx(&[1, 0, 1])])
            .unwrap()
            .expect("automorphism");
        assert_eq!(f.images.order(), 2);
        let aut = automorphism_group(&g).unwrap();
        assert!(aut.contains(&f.images));
        let id = hom_from_generator_images(&g, &[a, b, c]).unwrap().unwrap();
        assert!(id.images.is_identity());

        let c4 = make_group(&[4]).unwrap();
        assert_eq!(hom_from_generator_images(&c4, &[2]).unwrap(), None);
        assert!(matches!(
            hom_from_generator_images(&c4, &[1, 1]),
            Err(Error::WrongImageCount { .. })
        ));
    }

    #[test]
    fn abelian_group_enumeration() {
        assert_eq!(enumerate_abelian_groups(16).len(), 5);
        assert_eq!(enumerate_abelian_groups(27).len(), 3);
        assert_eq!(enumerate_abelian_groups(1), vec![GroupSpec::trivial()]);
        let g72 = enumerate_abelian_groups(72);
        assert_eq!(g72.len(), 6);
        assert!(g72.iter().all(|g| g.is_invariant_form() && g.order() == 72));
    }
}
