//! Reading rings and parsing element lists from the command line.

use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};

use schur_core::group::{generated_subgroup, make_group};
use schur_core::io::{envelope_from_str, sring_from_str, Envelope};
use schur_core::{Elem, Error, GroupSpec, SRing, Subgroup};

/// Contents of `path`, or of stdin when `path` is absent or `-`.
pub fn read_text(path: Option<&Path>) -> Result<String, Error> {
    let mut text = String::new();
    let res = match path {
        Some(p) if p != Path::new("-") => fs::read_to_string(p).map(|s| text = s),
        _ => std::io::stdin().read_to_string(&mut text).map(|_| ()),
    };
    res.map_err(|e| Error::Schema {
        location: path.map_or("stdin".into(), |p| p.display().to_string()),
        message: e.to_string(),
    })?;
    Ok(text)
}

pub fn read_ring(path: Option<&PathBuf>) -> Result<SRing, Error> {
    Ok(read_envelope(path)?.ring)
}

pub fn read_envelope(path: Option<&PathBuf>) -> Result<Envelope, Error> {
    envelope_from_str(&read_text(path.map(PathBuf::as_path))?)
}

/// Rings from a JSON-lines file; blank lines are skipped.
pub fn read_ring_lines(path: &Path) -> Result<Vec<SRing>, Error> {
    read_text(Some(path))?
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(sring_from_str)
        .collect()
}

fn bad(location: &str, message: impl Into<String>) -> Error {
    Error::Schema {
        location: location.into(),
        message: message.into(),
    }
}

/// `2,2,4` as cyclic factor orders.
pub fn parse_factors(s: &str) -> Result<GroupSpec, Error> {
    let factors = parse_numbers(s, "--factors")?;
    make_group(&factors)
}

fn parse_numbers(s: &str, location: &str) -> Result<Vec<u64>, Error> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| bad(location, format!("not a number: {t:?}")))
        })
        .collect()
}

/// `1,0,2` as an element index of `g`.
pub fn parse_elem(g: &GroupSpec, s: &str, location: &str) -> Result<usize, Error> {
    g.index_of(&Elem(parse_numbers(s, location)?))
}

/// `1,0,0;1,1,2` as a list of element indices.
pub fn parse_elems(g: &GroupSpec, s: &str, location: &str) -> Result<Vec<usize>, Error> {
    s.split(';')
        .filter(|t| !t.trim().is_empty())
        .map(|t| parse_elem(g, t, location))
        .collect()
}

/// Subgroup generated by elements given as residue lists.
pub fn parse_subgroup(g: &GroupSpec, gens: &[String], location: &str) -> Result<Subgroup, Error> {
    let xs = gens
        .iter()
        .map(|s| parse_elem(g, s, location))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(generated_subgroup(g, &xs))
}

/// `0,2,1` as a list of indices.
pub fn parse_indices(s: &str, location: &str) -> Result<Vec<usize>, Error> {
    Ok(parse_numbers(s, location)?
        .into_iter()
        .map(|x| x as usize)
        .collect())
}
