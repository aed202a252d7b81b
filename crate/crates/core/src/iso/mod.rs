//! Combinatorial and algebraic isomorphisms of Cayley schemes.
//!
//! A combinatorial isomorphism `A -> B` is a bijection of group elements that
//! maps every basic relation `R(X)` onto some `R(X')`; it induces the class
//! bijection `X -> X'`, which is an algebraic isomorphism. Searches here are
//! deterministic: witnesses are the first leaf found when candidates are
//! explored in ascending element order, whatever the worker count.

mod algebraic;
mod color;
mod search;
mod wl;

use num_bigint::BigUint;

pub use algebraic::{
    algebraic_automorphisms, algebraic_automorphisms_with_bound, algebraic_isomorphisms,
    algebraic_isomorphisms_with_bound, check_algebraic_iso, class_subgroups, extend_to_sections,
    extend_to_sets, extend_to_subgroup, first_algebraic_isomorphism, is_algebraic_iso, AlgMap,
    TensorViolation,
};
pub use color::{color_matrix, ColorMatrix};
pub use search::SearchStats;
pub use wl::{is_coherent, wl_refine};

use crate::error::{Error, Result};
use crate::group::right_regular_generators;
use crate::perm::{Perm, PermGroup};
use crate::sring::SRing;
use search::{stabilizer_chain, IsoSearch};

/// Largest group order accepted by the combinatorial searches.
pub const AUT_BOUND: usize = 100;
/// Largest rank accepted by the algebraic searches.
pub const ALG_RANK_BOUND: usize = 40;

fn check_order(a: &SRing, bound: usize) -> Result<()> {
    let n = a.group().order();
    if n > bound {
        return Err(Error::BoundExceeded {
            what: "group order",
            size: n,
            bound,
        });
    }
    Ok(())
}

/// `Aut(A)`: the colour-preserving permutations of `G`.
pub fn automorphisms(a: &SRing) -> Result<PermGroup> {
    automorphisms_with_bound(a, AUT_BOUND)
}

pub fn automorphisms_with_bound(a: &SRing, bound: usize) -> Result<PermGroup> {
    check_order(a, bound)?;
    Ok(aut_from_chain(a, false))
}

/// Same group, found with candidates explored in descending order. Used to
/// check that the result does not depend on discovery order.
pub fn automorphisms_reversed(a: &SRing) -> Result<PermGroup> {
    check_order(a, AUT_BOUND)?;
    Ok(aut_from_chain(a, true))
}

fn aut_from_chain(a: &SRing, reverse: bool) -> PermGroup {
    let m = ColorMatrix::from_sring(a);
    let n = m.size();
    let chain = stabilizer_chain(&m, reverse);
    let stab_order = chain.order();
    let mut base = vec![0];
    base.extend(&chain.base);
    // G_right is transitive, so it supplies the first level; the chain
    // generators fix 0 and cover the deeper levels.
    let mut strong = right_regular_generators(a.group());
    strong.extend(chain.generators);
    let group = PermGroup::from_base_and_strong_generators(n, &base, strong);
    debug_assert_eq!(group.order(), stab_order * BigUint::from(n.max(1)));
    group
}

/// Search statistics of an `Aut(A)` computation.
pub fn automorphism_search_stats(a: &SRing) -> Result<SearchStats> {
    check_order(a, AUT_BOUND)?;
    Ok(stabilizer_chain(&ColorMatrix::from_sring(a), false).stats)
}

/// The class bijection realised by a combinatorial isomorphism `f: A -> B`.
pub fn induced_algebraic(f: &Perm, a: &SRing, b: &SRing) -> Result<AlgMap> {
    let n = a.group().order();
    if f.degree() != n || b.group().order() != n || a.rank() != b.rank() {
        return Err(Error::NotCombinatorialIso);
    }
    let (ma, mb) = (ColorMatrix::from_sring(a), ColorMatrix::from_sring(b));
    let mut class_map = vec![usize::MAX; a.rank()];
    for x in 0..n {
        for y in 0..n {
            let (s, t) = (
                ma.get(x, y) as usize,
                mb.get(f.apply(x), f.apply(y)) as usize,
            );
            if class_map[s] == usize::MAX {
                class_map[s] = t;
            } else if class_map[s] != t {
                return Err(Error::NotCombinatorialIso);
            }
        }
    }
    let m = AlgMap::new(class_map).map_err(|_| Error::NotCombinatorialIso)?;
    debug_assert!(is_algebraic_iso(a, b, &m).is_ok());
    Ok(m)
}

/// A combinatorial isomorphism `f: A -> B` with `phi_f = m`, fixing the
/// identity, or `None` when the exhausted search tree certifies that `m` is
/// not induced.
///
/// Fixing `e` loses nothing: composing with a right translation of `B` keeps
/// the induced map.
pub fn is_induced(a: &SRing, b: &SRing, m: &AlgMap) -> Result<Option<Perm>> {
    is_induced_with_bound(a, b, m, AUT_BOUND)
}

pub fn is_induced_with_bound(
    a: &SRing,
    b: &SRing,
    m: &AlgMap,
    bound: usize,
) -> Result<Option<Perm>> {
    check_order(a, bound)?;
    if a.group().order() != b.group().order() || m.rank() != a.rank() || a.rank() != b.rank() {
        return Ok(None);
    }
    let ma = ColorMatrix::from_sring(a).relabel(&m.class_map);
    let mb = ColorMatrix::from_sring(b);
    Ok(IsoSearch::new(&ma, &mb).find(&[(0, 0)]))
}

/// Result of a combinatorial isomorphism search between two rings.
#[derive(Clone, Debug)]
pub struct IsoSummary {
    /// A witness `f` fixing the identity, for the first induced algebraic map.
    pub witness: Option<Perm>,
    /// The induced algebraic isomorphisms, in lexicographic order.
    pub induced: Vec<AlgMap>,
    /// `|Iso(A, B)| = |Aut(A)| * |induced|`.
    pub count: BigUint,
}

/// All combinatorial isomorphisms `A -> B`, counted through their induced
/// algebraic maps: each induced map is realised by exactly `|Aut(A)|`
/// bijections.
pub fn color_isomorphisms(a: &SRing, b: &SRing) -> Result<IsoSummary> {
    check_order(a, AUT_BOUND)?;
    let empty = IsoSummary {
        witness: None,
        induced: Vec::new(),
        count: BigUint::from(0u32),
    };
    if a.group().order() != b.group().order() || a.rank() != b.rank() {
        return Ok(empty);
    }
    let mut witness = None;
    let mut induced = Vec::new();
    for m in algebraic_isomorphisms(a, b)? {
        if let Some(f) = is_induced(a, b, &m)? {
            witness.get_or_insert(f);
            induced.push(m);
        }
    }
    if induced.is_empty() {
        return Ok(empty);
    }
    let count = automorphisms(a)?.order() * BigUint::from(induced.len());
    Ok(IsoSummary {
        witness,
        induced,
        count,
    })
}

/// `Aut_alg(A)_0`, the algebraic automorphisms induced by some `f` in `Iso(A)`.
pub fn induced_algebraic_automorphisms(a: &SRing) -> Result<Vec<AlgMap>> {
    Ok(color_isomorphisms(a, a)?.induced)
}

/// `Iso(A)` as a permutation group, generated by `Aut(A)` and one witness
/// per induced algebraic automorphism. Its order is computed independently of
/// the counting identity and serves as a cross-check.
pub fn iso_group(a: &SRing) -> Result<PermGroup> {
    check_order(a, AUT_BOUND)?;
    let aut = automorphisms(a)?;
    let mut gens = aut.generators().to_vec();
    for m in algebraic_automorphisms(a)? {
        if m.is_identity() {
            continue;
        }
        if let Some(f) = is_induced(a, a, &m)? {
            gens.push(f);
        }
    }
    Ok(PermGroup::from_generators(a.group().order(), gens))
}
