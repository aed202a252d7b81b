//! Independent oracles, random constructor inputs and property checks shared
//! by the integration suites.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use proptest::prelude::*;

use schur_core::constructors::{
    cyclotomic_from_generators, fusion, holomorph_subgroup, nonsep_lift, orbit_sring, s_wreath,
    tensor, wreath,
};
use schur_core::group::{
    all_subgroups, automorphism_group, is_right_translation, quotient_section,
    right_regular_generators,
};
use schur_core::iso::{
    algebraic_automorphisms, automorphisms, check_algebraic_iso, class_subgroups, color_matrix,
    extend_to_subgroup, is_coherent, AlgMap, ALG_RANK_BOUND,
};
use schur_core::{validate_sring, GroupSpec, Perm, SRing, Subgroup};

pub type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

// ---------------------------------------------------------------- oracles

/// Every set partition of `0..n` with `0` alone, as label vectors.
fn partitions_with_identity_singleton(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut labels = vec![0usize; n];
    fn rec(i: usize, max: usize, labels: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == labels.len() {
            out.push(labels.clone());
            return;
        }
        // label 0 is reserved for the identity
        for l in 1..=max + 1 {
            labels[i] = l;
            rec(i + 1, max.max(l), labels, out);
        }
    }
    if n == 1 {
        return vec![labels];
    }
    rec(1, 0, &mut labels, &mut out);
    out
}

/// All S-rings over `g` by testing every partition, with no pruning.
pub fn all_partitions_oracle(g: &GroupSpec) -> BTreeSet<SRing> {
    partitions_with_identity_singleton(g.order())
        .into_iter()
        .filter_map(|labels| {
            let rank = labels.iter().max().unwrap() + 1;
            let mut classes = vec![Vec::new(); rank];
            for (x, &l) in labels.iter().enumerate() {
                classes[l].push(x);
            }
            validate_sring(g, classes).ok()
        })
        .collect()
}

/// Result of scanning all `|G|!` bijections.
pub struct ScanCounts {
    pub aut: u64,
    pub iso: u64,
    /// Class maps induced by some combinatorial automorphism of the scheme.
    pub induced: BTreeSet<AlgMap>,
}

/// Brute force over `Sym(G)`: `f` is in `Aut(A)` when it keeps every colour
/// `class(y x^-1)`, and in `Iso(A)` when it permutes the colours.
pub fn scan_oracle(a: &SRing) -> ScanCounts {
    let g = a.group();
    let n = g.order();
    let color: Vec<usize> = (0..n * n)
        .map(|i| a.class_of(g.mul(i % n, g.inv(i / n))))
        .collect();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut counts = ScanCounts {
        aut: 0,
        iso: 0,
        induced: BTreeSet::new(),
    };
    let mut visit = |p: &[usize]| {
        let mut sigma = vec![usize::MAX; a.rank()];
        for x in 0..n {
            for y in 0..n {
                let (c, d) = (color[x * n + y], color[p[x] * n + p[y]]);
                if sigma[c] == usize::MAX {
                    sigma[c] = d;
                } else if sigma[c] != d {
                    return;
                }
            }
        }
        let distinct: BTreeSet<usize> = sigma.iter().copied().collect();
        if distinct.len() != a.rank() {
            return;
        }
        counts.iso += 1;
        if sigma.iter().enumerate().all(|(i, &s)| i == s) {
            counts.aut += 1;
        }
        counts.induced.insert(AlgMap::new(sigma).unwrap());
    };
    // Heap's algorithm
    let mut c = vec![0usize; n];
    visit(&perm);
    let mut i = 1;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            visit(&perm);
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    counts
}

// ---------------------------------------------------------------- generators

pub const SMALL_GROUPS: &[&[u64]] = &[
    &[2],
    &[3],
    &[4],
    &[5],
    &[6],
    &[7],
    &[8],
    &[9],
    &[2, 2],
    &[2, 4],
    &[3, 3],
    &[2, 6],
    &[2, 2, 2],
    &[4, 4],
    &[2, 8],
    &[2, 2, 4],
    &[2, 2, 2, 2],
];

fn group_autos(g: &GroupSpec) -> Arc<Vec<Perm>> {
    static CACHE: OnceLock<Mutex<HashMap<Vec<u64>, Arc<Vec<Perm>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let mut map = cache.lock().unwrap();
    map.entry(g.factors().to_vec())
        .or_insert_with(|| Arc::new(automorphism_group(g).unwrap().elements(100_000).unwrap()))
        .clone()
}

/// Automorphisms of `g` picked by the given seeds.
pub fn pick_autos(g: &GroupSpec, seeds: &[usize]) -> Vec<Perm> {
    let all = group_autos(g);
    seeds.iter().map(|s| all[s % all.len()].clone()).collect()
}

pub fn cyclotomic_from_seeds(g: &GroupSpec, seeds: &[usize]) -> SRing {
    cyclotomic_from_generators(g, &pick_autos(g, seeds)).unwrap()
}

fn small_group() -> impl Strategy<Value = GroupSpec> {
    prop::sample::select(SMALL_GROUPS).prop_map(|f| GroupSpec::new(f.to_vec()).unwrap())
}

fn seeds() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(any::<usize>(), 0..3)
}

/// A cyclotomic ring over a small group.
pub fn cyclotomic_ring() -> impl Strategy<Value = SRing> {
    (small_group(), seeds()).prop_map(|(g, s)| cyclotomic_from_seeds(&g, &s))
}

fn tensor_factor() -> impl Strategy<Value = SRing> {
    (prop::sample::select(&SMALL_GROUPS[..9]), seeds())
        .prop_map(|(f, s)| cyclotomic_from_seeds(&GroupSpec::new(f.to_vec()).unwrap(), &s))
}

fn tensor_ring() -> impl Strategy<Value = SRing> {
    (tensor_factor(), tensor_factor()).prop_map(|(a, b)| tensor(&a, &b).unwrap())
}

fn wreath_ring() -> impl Strategy<Value = SRing> {
    (small_group(), any::<usize>(), seeds(), seeds()).prop_filter_map(
        "needs a proper subgroup",
        |(g, pick, s1, s2)| {
            let subs: Vec<Subgroup> = all_subgroups(&g)
                .unwrap()
                .into_iter()
                .filter(|h| h.order() > 1 && h.order() < g.order())
                .collect();
            if subs.is_empty() {
                return None;
            }
            let l = &subs[pick % subs.len()];
            let on_l = quotient_section(&g, l, &Subgroup::trivial())
                .unwrap()
                .quotient;
            let on_q = quotient_section(&g, &Subgroup::whole(&g), l)
                .unwrap()
                .quotient;
            Some(
                wreath(
                    &cyclotomic_from_seeds(&on_l, &s1),
                    &cyclotomic_from_seeds(&on_q, &s2),
                    &g,
                    l,
                )
                .unwrap(),
            )
        },
    )
}

fn fusion_ring() -> impl Strategy<Value = SRing> {
    (cyclotomic_ring(), any::<usize>()).prop_map(|(a, pick)| {
        let maps = algebraic_automorphisms(&a).unwrap();
        fusion(&a, &[maps[pick % maps.len()].clone()]).unwrap()
    })
}

/// Output of any of the constructors.
pub fn constructed_ring() -> impl Strategy<Value = SRing> {
    prop_oneof![
        3 => cyclotomic_ring(),
        2 => tensor_ring(),
        2 => wreath_ring(),
        1 => fusion_ring(),
        1 => small_group().prop_map(|g| SRing::rank_two(&g)),
    ]
}

/// A ring `B` with an algebraic automorphism, over `H`, embedded in `H x C_m`.
pub fn lift_input() -> impl Strategy<Value = (SRing, AlgMap, GroupSpec, Subgroup)> {
    (
        prop::sample::select(&SMALL_GROUPS[..12]),
        seeds(),
        any::<usize>(),
        prop::sample::select(&[2u64, 3, 4][..]),
    )
        .prop_map(|(hf, s, pick, m)| {
            let h_group = GroupSpec::new(hf.to_vec()).unwrap();
            let b = cyclotomic_from_seeds(&h_group, &s);
            let maps = algebraic_automorphisms(&b).unwrap();
            let phi = maps[pick % maps.len()].clone();
            let mut factors = hf.to_vec();
            factors.push(m);
            let g = GroupSpec::new(factors).unwrap();
            let gens: Vec<usize> = (0..hf.len()).map(|i| g.generator(i)).collect();
            let h = schur_core::group::generated_subgroup(&g, &gens);
            (b, phi, g, h)
        })
}

// ---------------------------------------------------------------- properties

pub fn check_axioms(a: &SRing) -> Check {
    let again = validate_sring(a.group(), a.classes().to_vec()).map_err(|e| e.to_string())?;
    ensure!(&again == a, "revalidation changed the ring");
    Ok(())
}

pub fn check_tensor_identities(a: &SRing) -> Check {
    let t = a.structure_constants();
    let r = a.rank();
    for x in 0..r {
        let xi = a.inverse_class(x);
        ensure!(
            t.get(x, xi, 0) as usize == a.class_size(x),
            "c[X][X^-1][e] != |X| for class {x}"
        );
        for y in 0..r {
            let sum: usize = (0..r)
                .map(|z| t.get(x, y, z) as usize * a.class_size(z))
                .sum();
            ensure!(
                sum == a.class_size(x) * a.class_size(y),
                "row sum fails at ({x},{y})"
            );
            for z in 0..r {
                ensure!(
                    t.get(x, y, z) == t.get(y, x, z),
                    "not commutative at ({x},{y},{z})"
                );
            }
        }
    }
    Ok(())
}

pub fn check_rational_conjugacy(a: &SRing) -> Check {
    let n = a.group().order() as i64;
    for m in (1..n).filter(|&m| num_gcd(m, n) == 1) {
        for x in 0..a.rank() {
            a.rational_conjugate(x, m).map_err(|e| e.to_string())?;
        }
    }
    Ok(())
}

fn num_gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        num_gcd(b, a % b)
    }
}

/// `<X^phi> = <X>^phi` and `rad(X^phi) = rad(X)^phi` for every algebraic
/// automorphism found (at most `limit` of them).
pub fn check_subgroup_images(a: &SRing, limit: usize) -> Check {
    if a.rank() > ALG_RANK_BOUND {
        return Ok(());
    }
    let maps = algebraic_automorphisms(a).map_err(|e| e.to_string())?;
    for m in maps.iter().take(limit) {
        for x in 0..a.rank() {
            let (span, rad) = class_subgroups(a, x).map_err(|e| e.to_string())?;
            let (span_img, rad_img) = class_subgroups(a, m.apply(x)).map_err(|e| e.to_string())?;
            let span_mapped = extend_to_subgroup(a, a, m, &span).map_err(|e| e.to_string())?;
            let rad_mapped = extend_to_subgroup(a, a, m, &rad).map_err(|e| e.to_string())?;
            ensure!(
                span_mapped.members() == span_img.members(),
                "<X^phi> differs for class {x}, map {m:?}"
            );
            ensure!(
                rad_mapped.members() == rad_img.members(),
                "rad(X^phi) differs for class {x}, map {m:?}"
            );
        }
    }
    Ok(())
}

pub fn check_wl_stable(a: &SRing) -> Check {
    ensure!(
        is_coherent(&color_matrix(a)),
        "2-WL refines a validated ring"
    );
    Ok(())
}

pub fn check_decompositions_rebuild(a: &SRing) -> Check {
    let g = a.group();
    for (h1, h2) in a.detect_tensor().map_err(|e| e.to_string())? {
        let (r1, r2) = (
            a.restrict(&h1).map_err(|e| e.to_string())?,
            a.restrict(&h2).map_err(|e| e.to_string())?,
        );
        let t = tensor(&r1, &r2).map_err(|e| e.to_string())?;
        ensure!(
            t.rank() == a.rank() && t.size_multiset() == a.size_multiset(),
            "tensor rebuild differs"
        );
    }
    for s in a.detect_s_wreath().map_err(|e| e.to_string())? {
        let a_u = a.restrict(&s.upper).map_err(|e| e.to_string())?;
        let q = quotient_section(g, &Subgroup::whole(g), &s.lower).map_err(|e| e.to_string())?;
        let a_q = a.induced_sring(&q).map_err(|e| e.to_string())?;
        let rebuilt = s_wreath(&a_u, &a_q, g, &s).map_err(|e| e.to_string())?;
        ensure!(
            &rebuilt == a,
            "S-wreath rebuild differs for section {}/{}",
            s.upper.order(),
            s.lower.order()
        );
    }
    Ok(())
}

pub fn check_cyclotomic_is_orbit(g: &GroupSpec, gens: &[Perm]) -> Check {
    let cyc = cyclotomic_from_generators(g, gens).map_err(|e| e.to_string())?;
    let orb = orbit_sring(g, &holomorph_subgroup(g, gens)).map_err(|e| e.to_string())?;
    ensure!(
        cyc == orb,
        "cyclotomic ring differs from the orbit ring of G_right x| K"
    );
    Ok(())
}

/// `psi` preserves the tensor of `A = B wr Z(G/H)` and acts as `phi` inside `H`.
pub fn check_lift(b: &SRing, phi: &AlgMap, g: &GroupSpec, h: &Subgroup) -> Check {
    let (a, psi) = nonsep_lift(b, phi, g, h).map_err(|e| e.to_string())?;
    check_algebraic_iso(&a, &a, &psi).map_err(|e| e.to_string())?;
    let sh = quotient_section(g, h, &Subgroup::trivial()).map_err(|e| e.to_string())?;
    for x in 0..b.rank() {
        let inside = a.class_of(sh.preimage(b.class(x)[0])[0]);
        let image = a.class_of(sh.preimage(b.class(phi.apply(x))[0])[0]);
        ensure!(
            psi.apply(inside) == image,
            "psi does not restrict to phi on class {x}"
        );
    }
    for x in 0..a.rank() {
        if !h.contains(a.class(x)[0]) {
            ensure!(psi.apply(x) == x, "psi moves class {x} outside H");
        }
    }
    Ok(())
}

/// For schurian `A`: the stabilizer of `e` in the normalizer of `G_right`
/// inside `Aut(A)` equals `Aut(A) ∩ Aut(G)`.
pub fn check_normalizer_identity(a: &SRing) -> Check {
    let g = a.group();
    let aut = automorphisms(a).map_err(|e| e.to_string())?;
    let right = right_regular_generators(g);
    let normalizes = |f: &Perm| {
        let fi = f.inverse();
        right
            .iter()
            .all(|t| is_right_translation(g, &fi.then(t).then(f)))
    };
    let lhs: BTreeSet<Vec<usize>> = match aut.elements(200_000) {
        Ok(all) => all
            .into_iter()
            .filter(|f| f.apply(0) == 0 && normalizes(f))
            .map(Perm::into_images)
            .collect(),
        // too large to list: every element of the left side is a group
        // automorphism, so test membership of those instead
        Err(_) => group_autos(g)
            .iter()
            .filter(|f| aut.contains(f))
            .map(|f| f.images().to_vec())
            .collect(),
    };
    let rhs: BTreeSet<Vec<usize>> = group_autos(g)
        .iter()
        .filter(|f| {
            a.classes().iter().all(|c| {
                c.iter()
                    .all(|&x| a.class_of(f.apply(x)) == a.class_of(c[0]))
            })
        })
        .map(|f| f.images().to_vec())
        .collect();
    ensure!(
        lhs == rhs,
        "normalizer stabilizer has {} elements, Aut(A) ∩ Aut(G) has {}",
        lhs.len(),
        rhs.len()
    );
    Ok(())
}

/// All ring-level properties in one pass.
pub fn check_ring_properties(a: &SRing) -> Check {
    check_axioms(a)?;
    check_tensor_identities(a)?;
    check_rational_conjugacy(a)?;
    check_subgroup_images(a, 6)?;
    check_wl_stable(a)?;
    check_decompositions_rebuild(a)
}
