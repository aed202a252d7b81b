//! Schurity, normality, induced algebraic automorphisms and separability.

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::group::{is_right_translation, right_regular_generators};
use crate::iso::{
    algebraic_automorphisms, algebraic_isomorphisms, automorphisms, is_induced, AlgMap,
};
use crate::perm::{Perm, PermGroup};
use crate::sring::SRing;

pub use crate::group::enumerate_abelian_groups;

/// Outcome of the schurity test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Schurity {
    pub schurian: bool,
    /// Orbits of `Aut(A)_e`, sorted by smallest element.
    pub orbits: Vec<Vec<usize>>,
}

/// `A` is schurian iff its basic sets are the orbits of `Aut(A)_e`.
pub fn is_schurian(a: &SRing) -> Result<Schurity> {
    let aut = automorphisms(a)?;
    Ok(schurity_from(a, &aut))
}

pub fn schurity_from(a: &SRing, aut: &PermGroup) -> Schurity {
    let mut orbits = aut.stabilizer_orbits(a.group().identity());
    orbits.sort_by_key(|o| o[0]);
    Schurity {
        schurian: orbits.as_slice() == a.classes(),
        orbits,
    }
}

/// `A` is normal iff `G_right` is normal in `Aut(A)`.
pub fn is_normal(a: &SRing) -> Result<bool> {
    Ok(is_normal_in(a, &automorphisms(a)?))
}

pub fn is_normal_in(a: &SRing, aut: &PermGroup) -> bool {
    let g = a.group();
    let right = right_regular_generators(g);
    aut.generators().iter().all(|h| {
        let hi = h.inverse();
        right
            .iter()
            .all(|t| is_right_translation(g, &hi.then(t).then(h)))
    })
}

/// `Aut_alg(A)`, the induced subgroup `Aut_alg(A)_0`, and the orders that
/// enter the counting identity `|Aut_alg(A)_0| = |Iso(A)| / |Aut(A)|`.
#[derive(Clone, Debug)]
pub struct AlgebraicSummary {
    pub aut_alg: Vec<AlgMap>,
    pub induced: Vec<AlgMap>,
    /// One combinatorial witness per induced map, aligned with `induced`.
    pub witnesses: Vec<Perm>,
    pub aut_order: BigUint,
    /// Order of the group generated by `Aut(A)` and the witnesses.
    pub iso_order: BigUint,
}

impl AlgebraicSummary {
    /// True iff the induced count equals `|Iso(A)| / |Aut(A)|` exactly.
    pub fn counting_identity_holds(&self) -> bool {
        &self.aut_order * BigUint::from(self.induced.len()) == self.iso_order
    }

    pub fn all_induced(&self) -> bool {
        self.induced.len() == self.aut_alg.len()
    }
}

/// Runs the induced test on every algebraic automorphism.
pub fn aut_alg_induced(a: &SRing) -> Result<AlgebraicSummary> {
    let aut = automorphisms(a)?;
    let aut_alg = algebraic_automorphisms(a)?;
    let found: Vec<Option<Perm>> = aut_alg
        .par_iter()
        .map(|m| is_induced(a, a, m))
        .collect::<Result<_>>()?;
    let mut induced = Vec::new();
    let mut witnesses = Vec::new();
    for (m, f) in aut_alg.iter().zip(found) {
        if let Some(f) = f {
            induced.push(m.clone());
            witnesses.push(f);
        }
    }
    let mut gens = aut.generators().to_vec();
    gens.extend(witnesses.iter().filter(|f| !aut.contains(f)).cloned());
    let iso_order = PermGroup::from_generators(a.group().order(), gens).order();
    Ok(AlgebraicSummary {
        aut_order: aut.order(),
        aut_alg,
        induced,
        witnesses,
        iso_order,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Separable,
    NonSeparable,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TargetsMode {
    Explicit,
    Exhaustive,
}

/// A non-induced algebraic isomorphism onto `target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub target: SRing,
    pub alg_map: AlgMap,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counts {
    pub aut: BigUint,
    pub aut_alg: usize,
    pub aut_alg_induced: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparabilityReport {
    pub ring: SRing,
    pub verdict: Verdict,
    pub witness: Option<Counterexample>,
    pub targets_mode: TargetsMode,
    pub targets_checked: usize,
    pub counts: Counts,
}

/// First algebraic isomorphism `a -> b`, in lexicographic order, that no
/// combinatorial isomorphism induces.
pub fn first_non_induced(a: &SRing, b: &SRing) -> Result<Option<AlgMap>> {
    for m in algebraic_isomorphisms(a, b)? {
        if is_induced(a, b, &m)?.is_none() {
            return Ok(Some(m));
        }
    }
    Ok(None)
}

/// Separability of `a` relative to `targets`. Targets are scanned in
/// parallel but in sorted order, so the counterexample does not depend on
/// the number of workers.
pub fn separability_verdict(
    a: &SRing,
    targets: &[SRing],
    mode: TargetsMode,
) -> Result<SeparabilityReport> {
    let mut sorted: Vec<&SRing> = targets
        .iter()
        .filter(|b| b.group().order() == a.group().order())
        .collect();
    sorted.sort();
    sorted.dedup();
    let found: Vec<Option<AlgMap>> = sorted
        .par_iter()
        .map(|b| first_non_induced(a, b))
        .collect::<Result<_>>()?;
    let witness = sorted.iter().zip(found).find_map(|(b, m)| {
        m.map(|alg_map| Counterexample {
            target: (*b).clone(),
            alg_map,
        })
    });
    let summary = aut_alg_induced(a)?;
    Ok(SeparabilityReport {
        ring: a.clone(),
        verdict: if witness.is_some() {
            Verdict::NonSeparable
        } else {
            Verdict::Separable
        },
        witness,
        targets_mode: mode,
        targets_checked: sorted.len(),
        counts: Counts {
            aut: summary.aut_order,
            aut_alg: summary.aut_alg.len(),
            aut_alg_induced: summary.induced.len(),
        },
    })
}

/// Separability against every S-ring over every abelian group of the same
/// order, up to Cayley isomorphism.
pub fn separability_exhaustive(a: &SRing) -> Result<SeparabilityReport> {
    let targets = crate::enumeration::exhaustive_targets(a.group().order())?;
    separability_verdict(a, &targets, TargetsMode::Exhaustive)
}
