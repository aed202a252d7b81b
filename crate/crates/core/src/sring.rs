//! S-rings: validated partitions of an abelian group into basic sets.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::group::{all_subgroups, quotient_section, GroupSpec, Section, Subgroup};

/// Structure constants `c[X][Y][Z]`, stored flat.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SCTensor {
    rank: usize,
    c: Vec<u32>,
}

impl SCTensor {
    pub fn rank(&self) -> usize {
        self.rank
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize, z: usize) -> u32 {
        self.c[(x * self.rank + y) * self.rank + z]
    }

    /// The row `Z -> c[X][Y][Z]`.
    pub fn row(&self, x: usize, y: usize) -> &[u32] {
        let start = (x * self.rank + y) * self.rank;
        &self.c[start..start + self.rank]
    }

    pub fn as_nested(&self) -> Vec<Vec<Vec<u32>>> {
        (0..self.rank)
            .map(|x| (0..self.rank).map(|y| self.row(x, y).to_vec()).collect())
            .collect()
    }
}

/// An element of the integral group ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupRingVector {
    pub coeffs: Vec<i64>,
}

impl GroupRingVector {
    pub fn zero(g: &GroupSpec) -> Self {
        GroupRingVector {
            coeffs: vec![0; g.order()],
        }
    }

    /// The sum of the elements of `set`.
    pub fn indicator(g: &GroupSpec, set: &[usize]) -> Self {
        let mut v = Self::zero(g);
        for &x in set {
            v.coeffs[x] += 1;
        }
        v
    }

    pub fn add(&self, other: &Self) -> Self {
        GroupRingVector {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn scale(&self, k: i64) -> Self {
        GroupRingVector {
            coeffs: self.coeffs.iter().map(|a| a * k).collect(),
        }
    }

    /// Convolution.
    pub fn mul(&self, other: &Self, g: &GroupSpec) -> Self {
        let mut out = Self::zero(g);
        for (x, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (y, &b) in other.coeffs.iter().enumerate() {
                if b != 0 {
                    out.coeffs[g.mul(x, y)] += a * b;
                }
            }
        }
        out
    }
}

#[derive(Clone)]
pub struct SRing {
    group: GroupSpec,
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
    inverse: Vec<usize>,
    constants: Arc<OnceLock<SCTensor>>,
}

impl PartialEq for SRing {
    fn eq(&self, other: &Self) -> bool {
        self.group == other.group && self.class_of == other.class_of
    }
}

impl Eq for SRing {}

impl Hash for SRing {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.group.hash(state);
        self.class_of.hash(state);
    }
}

impl PartialOrd for SRing {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SRing {
    /// Canonical order: group, then the class-label string.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (&self.group, &self.class_of).cmp(&(&other.group, &other.class_of))
    }
}

impl fmt::Debug for SRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SRing")
            .field("group", &self.group)
            .field("classes", &self.classes)
            .finish()
    }
}

/// Sorts each class and orders classes by smallest element.
pub(crate) fn canonical_classes(mut classes: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    for c in &mut classes {
        c.sort_unstable();
    }
    classes.sort_unstable_by_key(|c| c[0]);
    classes
}

/// Relabels an element-to-label map so that labels appear in first-occurrence order.
pub(crate) fn restricted_growth(labels: &[usize]) -> Vec<usize> {
    let mut rename: HashMap<usize, usize> = HashMap::new();
    labels
        .iter()
        .map(|&l| {
            let next = rename.len();
            *rename.entry(l).or_insert(next)
        })
        .collect()
}

pub(crate) fn classes_from_labels(labels: &[usize]) -> Vec<Vec<usize>> {
    let canon = restricted_growth(labels);
    let rank = canon.iter().copied().max().map_or(0, |m| m + 1);
    let mut classes = vec![Vec::new(); rank];
    for (x, &l) in canon.iter().enumerate() {
        classes[l].push(x);
    }
    classes
}

/// Checks the S-ring axioms for `partition` and returns the validated ring.
pub fn validate_sring(g: &GroupSpec, partition: Vec<Vec<usize>>) -> Result<SRing> {
    let n = g.order();
    let mut seen = vec![false; n];
    for (i, class) in partition.iter().enumerate() {
        if class.is_empty() {
            return Err(Error::NotAPartition {
                class: i,
                element: usize::MAX,
            });
        }
        for &x in class {
            if x >= n || seen[x] {
                return Err(Error::NotAPartition {
                    class: i,
                    element: x,
                });
            }
            seen[x] = true;
        }
    }
    if let Some(missing) = seen.iter().position(|&s| !s) {
        return Err(Error::NotAPartition {
            class: partition.len(),
            element: missing,
        });
    }
    let classes = canonical_classes(partition);
    let mut class_of = vec![0usize; n];
    for (i, c) in classes.iter().enumerate() {
        for &x in c {
            class_of[x] = i;
        }
    }
    if classes[0].len() != 1 {
        return Err(Error::IdentityNotSingleton);
    }
    let mut inverse = vec![0usize; classes.len()];
    for (i, c) in classes.iter().enumerate() {
        let j = class_of[g.inv(c[0])];
        if classes[j].len() != c.len() || c.iter().any(|&x| class_of[g.inv(x)] != j) {
            return Err(Error::NotInverseClosed { class: i });
        }
        inverse[i] = j;
    }
    let tensor = product_tensor(g, &classes, &class_of)?;
    Ok(SRing {
        group: g.clone(),
        classes,
        class_of,
        inverse,
        constants: Arc::new(OnceLock::from(tensor)),
    })
}

/// Full pairwise convolution with a constancy check on every class.
fn product_tensor(g: &GroupSpec, classes: &[Vec<usize>], class_of: &[usize]) -> Result<SCTensor> {
    let n = g.order();
    let rank = classes.len();
    let mut c = vec![0u32; rank * rank * rank];
    let mut coeff = vec![0u32; n];
    for x in 0..rank {
        for y in x..rank {
            coeff.iter_mut().for_each(|v| *v = 0);
            for &a in &classes[x] {
                for &b in &classes[y] {
                    coeff[g.mul(a, b)] += 1;
                }
            }
            for (z, class) in classes.iter().enumerate() {
                let first = coeff[class[0]];
                if let Some(&other) = class.iter().find(|&&e| coeff[e] != first) {
                    return Err(Error::NotClosedUnderProduct {
                        x,
                        y,
                        elem_a: class[0],
                        coeff_a: first as u64,
                        elem_b: other,
                        coeff_b: coeff[other] as u64,
                    });
                }
                c[(x * rank + y) * rank + z] = first;
                c[(y * rank + x) * rank + z] = first;
            }
        }
    }
    debug_assert!(class_of.len() == n);
    Ok(SCTensor { rank, c })
}

impl SRing {
    /// Builds a ring from an element-to-label map and validates it.
    pub fn from_labels(g: &GroupSpec, labels: &[usize]) -> Result<SRing> {
        validate_sring(g, classes_from_labels(labels))
    }

    /// The group ring `ZG`.
    pub fn group_ring(g: &GroupSpec) -> SRing {
        validate_sring(g, g.elements().map(|x| vec![x]).collect()).expect("ZG is an S-ring")
    }

    /// The rank-2 ring `{e}, G \ {e}`; rank 1 over the trivial group.
    pub fn rank_two(g: &GroupSpec) -> SRing {
        let mut parts = vec![vec![0]];
        if g.order() > 1 {
            parts.push((1..g.order()).collect());
        }
        validate_sring(g, parts).expect("rank-2 partition is an S-ring")
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn rank(&self) -> usize {
        self.classes.len()
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class(&self, i: usize) -> &[usize] {
        &self.classes[i]
    }

    pub fn class_of(&self, x: usize) -> usize {
        self.class_of[x]
    }

    /// Element-to-class map; the canonical key of the ring.
    pub fn labels(&self) -> &[usize] {
        &self.class_of
    }

    pub fn inverse_class(&self, i: usize) -> usize {
        self.inverse[i]
    }

    pub fn class_size(&self, i: usize) -> usize {
        self.classes[i].len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }

    /// Class sizes sorted ascending.
    pub fn size_multiset(&self) -> Vec<usize> {
        let mut s = self.sizes();
        s.sort_unstable();
        s
    }

    /// Cached structure constants.
    pub fn structure_constants(&self) -> &SCTensor {
        self.constants.get_or_init(|| {
            product_tensor(&self.group, &self.classes, &self.class_of)
                .expect("validated ring has constant products")
        })
    }

    /// True iff `set` is a union of basic sets.
    pub fn is_a_set(&self, set: &[usize]) -> bool {
        let mut mark = vec![false; self.group.order()];
        for &x in set {
            if x >= mark.len() {
                return false;
            }
            mark[x] = true;
        }
        set.iter()
            .all(|&x| self.classes[self.class_of[x]].iter().all(|&y| mark[y]))
    }

    /// Indices of the classes whose union is `set`.
    pub fn classes_in(&self, set: &[usize]) -> Result<Vec<usize>> {
        if !self.is_a_set(set) {
            return Err(Error::NotAnASet);
        }
        let mut ids: Vec<usize> = set.iter().map(|&x| self.class_of[x]).collect();
        ids.sort_unstable();
        ids.dedup();
        Ok(ids)
    }

    /// Index of the class `X^(m) = {x^m : x in X}`.
    pub fn rational_conjugate(&self, class: usize, m: i64) -> Result<usize> {
        let n = self.group.order() as u64;
        if num_integer::gcd(m.unsigned_abs(), n) != 1 {
            return Err(Error::NotCoprime(m));
        }
        let x0 = self.classes[class][0];
        let target = self.class_of[self.group.pow(x0, m)];
        let image_ok = self.classes[target].len() == self.classes[class].len()
            && self.classes[class]
                .iter()
                .all(|&x| self.class_of[self.group.pow(x, m)] == target);
        if !image_ok {
            return Err(Error::SchurViolation {
                class,
                multiplier: m,
            });
        }
        Ok(target)
    }

    /// All subgroups that are unions of basic sets, sorted by order.
    pub fn a_subgroups(&self) -> Result<Vec<Subgroup>> {
        Ok(self.a_subgroups_from(&all_subgroups(&self.group)?))
    }

    /// Filters a precomputed subgroup list of the same group.
    pub fn a_subgroups_from(&self, subgroups: &[Subgroup]) -> Vec<Subgroup> {
        subgroups
            .iter()
            .filter(|h| self.is_a_set(h.members()))
            .cloned()
            .collect()
    }

    /// The S-ring induced on the section `S = U/L`.
    pub fn induced_sring(&self, s: &Section) -> Result<SRing> {
        if !self.is_a_set(s.upper.members()) {
            return Err(Error::NotASection("upper subgroup is not an A-set"));
        }
        if !self.is_a_set(s.lower.members()) {
            return Err(Error::NotASection("lower subgroup is not an A-set"));
        }
        let q = s.quotient.order();
        let mut label = vec![usize::MAX; q];
        let mut next = 0;
        for class in &self.classes {
            if !s.upper.contains(class[0]) {
                continue;
            }
            let mut image: Vec<usize> = class
                .iter()
                .map(|&x| s.project(x).expect("inside U"))
                .collect();
            image.sort_unstable();
            image.dedup();
            let existing = label[image[0]];
            if existing == usize::MAX {
                for &y in &image {
                    if label[y] != usize::MAX {
                        return Err(Error::NotASection("class images overlap"));
                    }
                    label[y] = next;
                }
                next += 1;
            } else if image.iter().any(|&y| label[y] != existing) {
                return Err(Error::NotASection("class images overlap"));
            }
        }
        SRing::from_labels(&s.quotient, &label)
    }

    /// The ring restricted to an A-subgroup `H`, written over `H`'s invariant form.
    pub fn restrict(&self, h: &Subgroup) -> Result<SRing> {
        let s = quotient_section(&self.group, h, &Subgroup::trivial())?;
        self.induced_sring(&s)
    }

    /// Ordered pairs `(G1, G2)` of nontrivial A-subgroups with `A = A_G1 (x) A_G2`.
    pub fn detect_tensor(&self) -> Result<Vec<(Subgroup, Subgroup)>> {
        Ok(self.detect_tensor_from(&self.a_subgroups()?))
    }

    pub fn detect_tensor_from(&self, a_subgroups: &[Subgroup]) -> Vec<(Subgroup, Subgroup)> {
        let g = &self.group;
        let n = g.order();
        let mut out = Vec::new();
        for h1 in a_subgroups
            .iter()
            .filter(|h| h.order() > 1 && h.order() < n)
        {
            for h2 in a_subgroups
                .iter()
                .filter(|h| h.order() > 1 && h.order() < n)
            {
                if h1.order() * h2.order() != n
                    || h1.members().iter().skip(1).any(|&x| h2.contains(x))
                {
                    continue;
                }
                if self.is_tensor_over(h1, h2) {
                    out.push((h1.clone(), h2.clone()));
                }
            }
        }
        out
    }

    fn is_tensor_over(&self, h1: &Subgroup, h2: &Subgroup) -> bool {
        let g = &self.group;
        let classes1: Vec<&Vec<usize>> =
            self.classes.iter().filter(|c| h1.contains(c[0])).collect();
        let classes2: Vec<&Vec<usize>> =
            self.classes.iter().filter(|c| h2.contains(c[0])).collect();
        if classes1.len() * classes2.len() != self.rank() {
            return false;
        }
        for x1 in &classes1 {
            for x2 in &classes2 {
                let target = self.class_of[g.mul(x1[0], x2[0])];
                if self.classes[target].len() != x1.len() * x2.len() {
                    return false;
                }
                for &a in x1.iter() {
                    for &b in x2.iter() {
                        if self.class_of[g.mul(a, b)] != target {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// Proper S-wreath decompositions: A-sections `U/L` with `{e} < L`,
    /// `U < G` and `L <= rad(X)` for every basic set `X` outside `U`.
    pub fn detect_s_wreath(&self) -> Result<Vec<Section>> {
        self.detect_s_wreath_from(&self.a_subgroups()?)
    }

    pub fn detect_s_wreath_from(&self, a_subgroups: &[Subgroup]) -> Result<Vec<Section>> {
        let g = &self.group;
        let n = g.order();
        let radicals: Vec<Subgroup> = self
            .classes
            .iter()
            .map(|c| radical(g, c))
            .collect::<Result<_>>()?;
        let mut out = Vec::new();
        for lower in a_subgroups.iter().filter(|l| l.order() > 1) {
            for upper in a_subgroups.iter().filter(|u| u.order() < n) {
                if !lower.is_subset_of(upper) {
                    continue;
                }
                let ok = self
                    .classes
                    .iter()
                    .zip(&radicals)
                    .filter(|(c, _)| !upper.contains(c[0]))
                    .all(|(_, rad)| lower.is_subset_of(rad));
                if ok {
                    out.push(quotient_section(g, upper, lower)?);
                }
            }
        }
        Ok(out)
    }
}

/// `rad(X) = {g : gX = X}`.
pub fn radical(g: &GroupSpec, set: &[usize]) -> Result<Subgroup> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut mark = vec![false; g.order()];
    for &x in set {
        mark[x] = true;
    }
    let x0 = set[0];
    let members: Vec<usize> = set
        .iter()
        .map(|&x| g.mul(x, g.inv(x0)))
        .filter(|&t| set.iter().all(|&x| mark[g.mul(x, t)]))
        .collect();
    Subgroup::from_members(g, &members)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{generated_subgroup, make_group, Elem};

    fn idx(g: &GroupSpec, v: &[u64]) -> usize {
        g.index_of(&Elem(v.to_vec())).unwrap()
    }

    #[test]
    fn group_ring_and_rank_two_validate() {
        for f in [vec![2, 2], vec![4], vec![3, 3], vec![2, 4]] {
            let g = make_group(&f).unwrap();
            assert_eq!(SRing::group_ring(&g).rank(), g.order());
            assert_eq!(SRing::rank_two(&g).rank(), 2);
        }
        let t = SRing::rank_two(&GroupSpec::trivial());
        assert_eq!(t.rank(), 1);
    }

    #[test]
    fn klein_partition_example() {
        let g = make_group(&[2, 2]).unwrap();
        let (a, b, ab) = (idx(&g, &[1, 0]), idx(&g, &[0, 1]), idx(&g, &[1, 1]));
        let ring = validate_sring(&g, vec![vec![0], vec![a], vec![b, ab]]).unwrap();
        let bab = GroupRingVector::indicator(&g, &[b, ab]);
        let square = bab.mul(&bab, &g);
        let expected = GroupRingVector::indicator(&g, &[0])
            .scale(2)
            .add(&GroupRingVector::indicator(&g, &[a]).scale(2));
        assert_eq!(square, expected);
        assert_eq!(ring.rank(), 3);
    }

    #[test]
    fn validation_errors() {
        let g = make_group(&[4]).unwrap();
        assert_eq!(
            validate_sring(&g, vec![vec![0], vec![1, 1], vec![2, 3]]),
            Err(Error::NotAPartition {
                class: 1,
                element: 1
            })
        );
        assert_eq!(
            validate_sring(&g, vec![vec![0, 2], vec![1, 3]]),
            Err(Error::IdentityNotSingleton)
        );
        assert!(matches!(
            validate_sring(&g, vec![vec![0], vec![1], vec![2, 3]]),
            Err(Error::NotInverseClosed { .. })
        ));
        assert!(matches!(
            validate_sring(&g, vec![vec![0], vec![1]]),
            Err(Error::NotAPartition { .. })
        ));
        let c5 = make_group(&[5]).unwrap();
        assert!(matches!(
            validate_sring(&c5, vec![vec![0], vec![1, 4], vec![2], vec![3]]),
            Err(Error::NotClosedUnderProduct { .. })
        ));
    }

    #[test]
    fn rank_two_constants() {
        let g = make_group(&[3, 3]).unwrap();
        let r = SRing::rank_two(&g);
        let c = r.structure_constants();
        assert_eq!(c.get(1, 1, 0), 8);
        assert_eq!(c.get(1, 1, 1), 7);
    }

    #[test]
    fn radical_examples() {
        let g = make_group(&[2, 2, 4]).unwrap();
        let h = generated_subgroup(&g, &[idx(&g, &[0, 0, 1])]);
        assert_eq!(radical(&g, h.members()).unwrap(), h);
        let b = idx(&g, &[0, 1, 0]);
        let bac1 = idx(&g, &[1, 1, 2]);
        let ac1 = idx(&g, &[1, 0, 2]);
        assert_eq!(radical(&g, &[b, bac1]).unwrap().members(), &[0, ac1]);
        assert!(radical(&g, &[b]).unwrap().is_trivial());
        assert_eq!(radical(&g, &[]), Err(Error::EmptySet));
    }

    #[test]
    fn rational_conjugates() {
        let g = make_group(&[7]).unwrap();
        let zg = SRing::group_ring(&g);
        assert_eq!(zg.rational_conjugate(1, 1).unwrap(), 1);
        assert_eq!(zg.rational_conjugate(1, -1).unwrap(), 6);
        assert_eq!(zg.rational_conjugate(1, 3).unwrap(), 3);
        assert_eq!(zg.rational_conjugate(1, 7), Err(Error::NotCoprime(7)));
    }

    #[test]
    fn a_subgroups_of_extremes() {
        let g = make_group(&[2, 4]).unwrap();
        let zg = SRing::group_ring(&g);
        assert_eq!(zg.a_subgroups().unwrap(), all_subgroups(&g).unwrap());
        let r2 = SRing::rank_two(&g);
        let subs = r2.a_subgroups().unwrap();
        assert_eq!(subs.len(), 2);
        assert!(subs[0].is_trivial() && subs[1].order() == 8);
    }

    #[test]
    fn induced_on_trivial_sections() {
        let g = make_group(&[2, 4]).unwrap();
        let zg = SRing::group_ring(&g);
        let whole = Subgroup::whole(&g);
        let s = quotient_section(&g, &whole, &Subgroup::trivial()).unwrap();
        assert_eq!(zg.induced_sring(&s).unwrap(), zg);
        let top = quotient_section(&g, &whole, &whole).unwrap();
        assert_eq!(zg.induced_sring(&top).unwrap().rank(), 1);
        let r2 = SRing::rank_two(&g);
        let l = generated_subgroup(&g, &[idx(&g, &[1, 0])]);
        let bad = quotient_section(&g, &whole, &l).unwrap();
        assert!(matches!(r2.induced_sring(&bad), Err(Error::NotASection(_))));
    }

    #[test]
    fn tensor_detection_on_klein_group() {
        let g = make_group(&[2, 2]).unwrap();
        let zg = SRing::group_ring(&g);
        // 3 order-2 subgroups, 6 ordered pairs
        assert_eq!(zg.detect_tensor().unwrap().len(), 6);
        assert!(SRing::rank_two(&make_group(&[4]).unwrap())
            .detect_tensor()
            .unwrap()
            .is_empty());
    }

    #[test]
    fn s_wreath_detection() {
        let c4 = make_group(&[4]).unwrap();
        // {e},{c^2},{c,c^3} is ZC2 wr ZC2
        let w = validate_sring(&c4, vec![vec![0], vec![2], vec![1, 3]]).unwrap();
        let found = w.detect_s_wreath().unwrap();
        assert!(found
            .iter()
            .any(|s| s.upper == s.lower && s.lower.order() == 2));
        assert!(SRing::rank_two(&c4).detect_s_wreath().unwrap().is_empty());
    }
}
