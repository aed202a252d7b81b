//! S-ring constructions: cyclotomic and orbit rings, tensor, wreath and
//! S-wreath products, algebraic fusions, the wreath lifting of an algebraic
//! automorphism, and the two explicit non-separability witnesses.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::group::{
    hom_from_generator_images, quotient_section, right_regular_generators, Elem, GroupAutomorphism,
    GroupSpec, Section, Subgroup,
};
use crate::iso::{check_algebraic_iso, AlgMap};
use crate::perm::{orbits, Perm, PermGroup};
use crate::sring::{validate_sring, SRing};

fn check_group(expected: &GroupSpec, got: &GroupSpec) -> Result<()> {
    if expected != got {
        return Err(Error::GroupMismatch {
            expected: expected.factors().to_vec(),
            got: got.factors().to_vec(),
        });
    }
    Ok(())
}

/// `Cyc(K, G)`: the orbits of a group of automorphisms.
pub fn cyclotomic(g: &GroupSpec, k: &PermGroup) -> Result<SRing> {
    cyclotomic_from_generators(g, k.generators())
}

pub fn cyclotomic_from_generators(g: &GroupSpec, gens: &[Perm]) -> Result<SRing> {
    for p in gens {
        GroupAutomorphism::from_perm(g, p.clone())?;
    }
    validate_sring(g, orbits(g.order(), gens))
}

/// `V(K, G)`: the orbits of the stabilizer `K_e`, for `K >= G_right`.
pub fn orbit_sring(g: &GroupSpec, k: &PermGroup) -> Result<SRing> {
    if k.degree() != g.order() {
        return Err(Error::RightRegularNotContained);
    }
    if !right_regular_generators(g).iter().all(|t| k.contains(t)) {
        return Err(Error::RightRegularNotContained);
    }
    validate_sring(g, k.stabilizer_orbits(g.identity()))
}

/// `G_right` extended by the given automorphisms, which it normalizes.
pub fn holomorph_subgroup(g: &GroupSpec, automorphisms: &[Perm]) -> PermGroup {
    let mut gens = right_regular_generators(g);
    gens.extend(automorphisms.iter().cloned());
    PermGroup::with_base_prefix(g.order(), gens, &[g.identity()])
}

/// `A1 (x) A2` over `G1 x G2`, the left factor in the leading coordinates.
pub fn tensor(a1: &SRing, a2: &SRing) -> Result<SRing> {
    let g = a1.group().product(a2.group());
    let n2 = a2.group().order();
    let classes = a1
        .classes()
        .iter()
        .flat_map(|x| {
            a2.classes().iter().map(move |y| {
                x.iter()
                    .flat_map(|&u| y.iter().map(move |&v| u * n2 + v))
                    .collect()
            })
        })
        .collect();
    validate_sring(&g, classes)
}

/// `A_L wr A_{G/L}`.
pub fn wreath(a_l: &SRing, a_q: &SRing, g: &GroupSpec, l: &Subgroup) -> Result<SRing> {
    let s = quotient_section(g, l, l)?;
    s_wreath(a_l, a_q, g, &s)
}

/// `A_U wr_S A_{G/L}` for the section `S = U/L`.
///
/// `A_U` lives on the invariant form of `U` and `A_Q` on that of `G/L`, both
/// identified through the canonical section projections.
pub fn s_wreath(a_u: &SRing, a_q: &SRing, g: &GroupSpec, s: &Section) -> Result<SRing> {
    let whole = Subgroup::whole(g);
    let su = quotient_section(g, &s.upper, &Subgroup::trivial())?;
    let sq = quotient_section(g, &whole, &s.lower)?;
    check_group(&su.quotient, a_u.group())?;
    check_group(&sq.quotient, a_q.group())?;

    // classes of A_U pulled back to G, and their images in G/L
    let u_label = |x: usize| a_u.class_of(su.project(x).expect("member of U"));
    let mut inside: Vec<Vec<usize>> = vec![Vec::new(); a_u.rank()];
    for &x in s.upper.members() {
        inside[u_label(x)].push(x);
    }
    let image_of = |set: &[usize]| -> BTreeSet<usize> {
        set.iter()
            .map(|&x| sq.project(x).expect("member of G"))
            .collect()
    };
    let from_u: BTreeSet<BTreeSet<usize>> = inside.iter().map(|c| image_of(c)).collect();
    let u_image: BTreeSet<usize> = image_of(s.upper.members());
    let mut from_q: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
    let mut outside_q = Vec::new();
    for class in a_q.classes() {
        let hits = class.iter().filter(|y| u_image.contains(y)).count();
        if hits == class.len() {
            from_q.insert(class.iter().copied().collect());
        } else if hits == 0 {
            outside_q.push(class);
        } else {
            return Err(Error::IncompatibleOnSection);
        }
    }
    if from_u != from_q {
        return Err(Error::IncompatibleOnSection);
    }

    let mut classes = inside;
    for class in outside_q {
        let mut pre: Vec<usize> = class.iter().flat_map(|&y| sq.preimage(y)).collect();
        pre.sort_unstable();
        classes.push(pre);
    }
    validate_sring(g, classes)
}

/// The group generated by `maps` under composition.
pub fn alg_closure(rank: usize, maps: &[AlgMap]) -> Vec<AlgMap> {
    let mut seen: BTreeSet<AlgMap> = BTreeSet::new();
    let mut frontier = vec![AlgMap::identity(rank)];
    seen.insert(AlgMap::identity(rank));
    while let Some(m) = frontier.pop() {
        for g in maps {
            let next = m.then(g);
            if seen.insert(next.clone()) {
                frontier.push(next);
            }
        }
    }
    seen.into_iter().collect()
}

/// The algebraic fusion `A^Phi`, with `Phi` the closure of `maps`.
pub fn fusion(a: &SRing, maps: &[AlgMap]) -> Result<SRing> {
    for m in maps {
        check_algebraic_iso(a, a, m)?;
    }
    let group = alg_closure(a.rank(), maps);
    let mut merged: Vec<Option<usize>> = vec![None; a.rank()];
    let mut classes = Vec::new();
    for x in 0..a.rank() {
        if merged[x].is_some() {
            continue;
        }
        let mut orbit: BTreeSet<usize> = group.iter().map(|m| m.apply(x)).collect();
        orbit.insert(x);
        let mut set = Vec::new();
        for &y in &orbit {
            merged[y] = Some(classes.len());
            set.extend_from_slice(a.class(y));
        }
        classes.push(set);
    }
    validate_sring(a.group(), classes)
}

/// `A = B wr Z(G/H)` together with the lift `psi` of an algebraic
/// automorphism `phi` of `B`: `psi` acts as `phi` on the classes inside `H`
/// and fixes every class outside.
pub fn nonsep_lift(
    b: &SRing,
    phi: &AlgMap,
    g: &GroupSpec,
    h: &Subgroup,
) -> Result<(SRing, AlgMap)> {
    check_algebraic_iso(b, b, phi)?;
    let sq = quotient_section(g, &Subgroup::whole(g), h)?;
    let a = wreath(b, &SRing::group_ring(&sq.quotient), g, h)?;
    let sh = quotient_section(g, h, &Subgroup::trivial())?;
    let mut class_map: Vec<usize> = (0..a.rank()).collect();
    for (x, slot) in class_map.iter_mut().enumerate() {
        let x0 = a.class(x)[0];
        if let Some(q) = sh.project(x0) {
            let target = b.class(phi.apply(b.class_of(q)))[0];
            *slot = a.class_of(sh.preimage(target)[0]);
        }
    }
    let psi = AlgMap::new(class_map)?;
    check_algebraic_iso(&a, &a, &psi)?;
    Ok((a, psi))
}

/// An S-ring with an algebraic automorphism that no combinatorial one induces.
#[derive(Clone, Debug)]
pub struct Witness {
    pub ring: SRing,
    pub phi: AlgMap,
    /// Generators of the automorphism group whose orbits are the basic sets.
    pub automorphisms: Vec<GroupAutomorphism>,
}

fn element(g: &GroupSpec, residues: &[u64]) -> usize {
    g.index_of(&Elem(residues.to_vec()))
        .expect("residues in range")
}

fn automorphism(g: &GroupSpec, images: &[&[u64]]) -> GroupAutomorphism {
    let images: Vec<usize> = images.iter().map(|r| element(g, r)).collect();
    hom_from_generator_images(g, &images)
        .expect("image count matches")
        .expect("images define an automorphism")
}

fn swap_classes(a: &SRing, pairs: &[(usize, usize)]) -> AlgMap {
    let mut map: Vec<usize> = (0..a.rank()).collect();
    for &(x, y) in pairs {
        let (cx, cy) = (a.class_of(x), a.class_of(y));
        map[cx] = cy;
        map[cy] = cx;
    }
    AlgMap::new(map).expect("swaps form a bijection")
}

fn build_witness(
    g: &GroupSpec,
    automorphisms: Vec<GroupAutomorphism>,
    swaps: &[(usize, usize)],
) -> Witness {
    let gens: Vec<Perm> = automorphisms.iter().map(|f| f.images.clone()).collect();
    let ring = cyclotomic_from_generators(g, &gens).expect("cyclotomic ring");
    let phi = swap_classes(&ring, swaps);
    check_algebraic_iso(&ring, &ring, &phi).expect("witness map is algebraic");
    Witness {
        ring,
        phi,
        automorphisms,
    }
}

/// The witness over `C2 x C2 x C4 = <a> x <b> x <c>`: the cyclotomic ring of
/// `f: (a, b, c) -> (a, b a c^2, c a)`, with `phi` swapping `{c^2}` and
/// `{a c^2}`, the class of `b` with that of `b c`, and the class of `b a`
/// with that of `b c a`.
pub fn witness_p2() -> Witness {
    let g = GroupSpec::new(vec![2, 2, 4]).expect("valid factors");
    let f = automorphism(&g, &[&[1, 0, 0], &[1, 1, 2], &[1, 0, 1]]);
    let e = |r: &[u64]| element(&g, r);
    let swaps = [
        (e(&[0, 0, 2]), e(&[1, 0, 2])),
        (e(&[0, 1, 0]), e(&[0, 1, 1])),
        (e(&[1, 1, 0]), e(&[1, 1, 1])),
    ];
    build_witness(&g, vec![f], &swaps)
}

/// The witness over `C3 x C3 x C9 = <a> x <b> x <c>`: the cyclotomic ring of
/// `<f1, f2, f3>` where `f1` inverts, `f2: c -> c^4` and `f3: b -> b a`, with
/// `phi` swapping the classes of `a c^3` and `a^-1 c^3`.
pub fn witness_p3() -> Witness {
    let g = GroupSpec::new(vec![3, 3, 9]).expect("valid factors");
    let f1 = automorphism(&g, &[&[2, 0, 0], &[0, 2, 0], &[0, 0, 8]]);
    let f2 = automorphism(&g, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 4]]);
    let f3 = automorphism(&g, &[&[1, 0, 0], &[1, 1, 0], &[0, 0, 1]]);
    let e = |r: &[u64]| element(&g, r);
    build_witness(&g, vec![f1, f2, f3], &[(e(&[1, 0, 3]), e(&[2, 0, 3]))])
}
