//! JSON persistence for groups, rings, permutations, class maps and
//! separability reports.
//!
//! Rings are single-line documents with elements as residue arrays, so a
//! stream of rings is valid JSON-lines. Orders that may overflow a double are
//! written as decimal strings.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::analysis::{Counterexample, SeparabilityReport};
use crate::error::{Error, Result};
use crate::group::{Elem, GroupSpec};
use crate::iso::AlgMap;
use crate::perm::Perm;
use crate::sring::{validate_sring, SRing};

/// Current version of the ring document.
pub const FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RingDoc {
    version: u32,
    group: GroupSpec,
    classes: Vec<Vec<Elem>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EnvelopeDoc {
    ring: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    alg_map: Option<AlgMap>,
}

fn parse_error(e: serde_json::Error) -> Error {
    Error::schema(
        format!("line {} column {}", e.line(), e.column()),
        e.to_string(),
    )
}

fn from_value<T: serde::de::DeserializeOwned>(v: Value, location: &str) -> Result<T> {
    serde_json::from_value(v).map_err(|e| Error::schema(location, e.to_string()))
}

pub fn group_to_json(g: &GroupSpec) -> Value {
    json!({ "factors": g.factors() })
}

pub fn group_from_str(s: &str) -> Result<GroupSpec> {
    let v: Value = serde_json::from_str(s).map_err(parse_error)?;
    from_value(v, "group")
}

pub fn sring_to_json(a: &SRing) -> Value {
    let g = a.group();
    let classes: Vec<Vec<Elem>> = a
        .classes()
        .iter()
        .map(|c| c.iter().map(|&x| g.elem(x)).collect())
        .collect();
    serde_json::to_value(RingDoc {
        version: FORMAT_VERSION,
        group: g.clone(),
        classes,
    })
    .expect("ring documents always serialize")
}

/// Parses and revalidates a ring document.
pub fn sring_from_json(v: Value) -> Result<SRing> {
    let version = v
        .get("version")
        .ok_or_else(|| Error::schema("version", "missing field"))?;
    if version.as_u64() != Some(FORMAT_VERSION as u64) {
        return Err(Error::schema(
            "version",
            format!("expected {FORMAT_VERSION}, got {version}"),
        ));
    }
    let doc: RingDoc = from_value(v, "ring")?;
    let partition = doc
        .classes
        .iter()
        .map(|c| {
            c.iter()
                .map(|e| doc.group.index_of(e))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    validate_sring(&doc.group, partition)
}

/// Canonical single-line rendering of a ring.
pub fn sring_to_string(a: &SRing) -> String {
    sring_to_json(a).to_string()
}

pub fn sring_from_str(s: &str) -> Result<SRing> {
    sring_from_json(serde_json::from_str(s).map_err(parse_error)?)
}

pub fn read_sring(path: impl AsRef<Path>) -> Result<SRing> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)
        .map_err(|e| Error::schema(path.display().to_string(), e.to_string()))?;
    sring_from_str(&text)
}

pub fn write_sring(path: impl AsRef<Path>, a: &SRing) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, sring_to_string(a) + "\n")
        .map_err(|e| Error::schema(path.display().to_string(), e.to_string()))
}

/// A ring, optionally paired with a class map on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Envelope {
    pub ring: SRing,
    pub alg_map: Option<AlgMap>,
}

pub fn envelope_to_json(ring: &SRing, alg_map: Option<&AlgMap>) -> Value {
    serde_json::to_value(EnvelopeDoc {
        ring: sring_to_json(ring),
        alg_map: alg_map.cloned(),
    })
    .expect("envelopes always serialize")
}

/// Accepts either a bare ring document or an envelope `{"ring", "alg_map"}`.
pub fn envelope_from_str(s: &str) -> Result<Envelope> {
    let v: Value = serde_json::from_str(s).map_err(parse_error)?;
    if v.get("ring").is_none() {
        return Ok(Envelope {
            ring: sring_from_json(v)?,
            alg_map: None,
        });
    }
    let doc: EnvelopeDoc = from_value(v, "envelope")?;
    let ring = sring_from_json(doc.ring)?;
    if let Some(m) = &doc.alg_map {
        if m.rank() != ring.rank() {
            return Err(Error::schema(
                "alg_map",
                format!("expected {} entries, got {}", ring.rank(), m.rank()),
            ));
        }
        AlgMap::new(m.class_map.clone()).map_err(|e| Error::schema("alg_map", e.to_string()))?;
    }
    Ok(Envelope {
        ring,
        alg_map: doc.alg_map,
    })
}

pub fn perm_to_json(p: &Perm) -> Value {
    json!(p.images())
}

pub fn perm_from_json(v: Value) -> Result<Perm> {
    Perm::from_images(from_value(v, "permutation")?)
}

pub fn algmap_to_json(m: &AlgMap) -> Value {
    json!(m.class_map)
}

pub fn algmap_from_json(v: Value, rank: usize) -> Result<AlgMap> {
    let images: Vec<usize> = from_value(v, "alg_map")?;
    if images.len() != rank {
        return Err(Error::schema(
            "alg_map",
            format!("expected {rank} entries, got {}", images.len()),
        ));
    }
    AlgMap::new(images)
}

pub fn report_to_json(r: &SeparabilityReport) -> Value {
    let witness = r.witness.as_ref().map_or(Value::Null, |Counterexample { target, alg_map }| {
        json!({ "target": sring_to_json(target), "alg_map": algmap_to_json(alg_map) })
    });
    json!({
        "ring": sring_to_json(&r.ring),
        "verdict": r.verdict,
        "witness": witness,
        "targets_mode": r.targets_mode,
        "targets_checked": r.targets_checked,
        "counts": {
            "aut": r.counts.aut.to_string(),
            "aut_alg": r.counts.aut_alg,
            "aut_alg_induced": r.counts.aut_alg_induced,
        },
    })
}
