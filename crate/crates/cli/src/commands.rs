use std::path::PathBuf;

use serde_json::{json, Value};

use schur_core::analysis::{
    is_normal_in, schurity_from, separability_exhaustive, separability_verdict, TargetsMode,
    Verdict,
};
use schur_core::constructors::{
    cyclotomic_from_generators, fusion, nonsep_lift, orbit_sring, s_wreath, tensor, witness_p2,
    witness_p3, wreath,
};
use schur_core::enumeration::{
    enumerate_srings, enumerate_srings_with_bound, table1, table1_csv, up_to_cayley,
};
use schur_core::group::{
    all_subgroups_with_bound, automorphism_group_order, hom_from_generator_images,
    quotient_section, right_regular_generators, DEFAULT_GROUP_BOUND,
};
use schur_core::io::{
    algmap_to_json, envelope_to_json, group_from_str, perm_to_json, report_to_json, sring_to_json,
};
use schur_core::iso::{
    algebraic_automorphisms_with_bound, algebraic_isomorphisms_with_bound,
    automorphisms_with_bound, class_subgroups, is_induced_with_bound, AlgMap, ALG_RANK_BOUND,
    AUT_BOUND,
};
use schur_core::{Error, GroupSpec, Perm, PermGroup, SRing, Subgroup};

use crate::input::{
    parse_elems, parse_factors, parse_indices, parse_subgroup, read_envelope, read_ring,
    read_ring_lines, read_text,
};
use crate::{
    AnalyzeCmd, BuildCmd, Cli, Command, EnumCmd, GroupCmd, IsoCmd, Outcome, SringCmd, WitnessCmd,
};

type Res = Result<Outcome, Error>;

/// Search limits, from `--bound` or the library defaults.
struct Limits {
    bound: Option<usize>,
}

impl Limits {
    fn aut(&self) -> usize {
        self.bound.unwrap_or(AUT_BOUND)
    }

    fn alg(&self) -> usize {
        self.bound.unwrap_or(ALG_RANK_BOUND)
    }

    fn group(&self) -> usize {
        self.bound.unwrap_or(DEFAULT_GROUP_BOUND)
    }
}

fn emit(v: &Value) -> Res {
    println!("{v}");
    Ok(Outcome::Positive)
}

fn verdict(v: &Value, positive: bool) -> Res {
    println!("{v}");
    Ok(if positive {
        Outcome::Positive
    } else {
        Outcome::Negative
    })
}

pub fn run(cli: &Cli) -> Res {
    let lim = Limits { bound: cli.bound };
    match &cli.command {
        Command::Group(c) => group(c, &lim),
        Command::Sring(c) => sring(c),
        Command::Build(c) => build(c),
        Command::Iso(c) => iso(c, &lim),
        Command::Analyze(c) => analyze(c, &lim),
        Command::Enum(c) => enumerate(c, &lim),
        Command::Witness(c) => witness(c),
    }
}

fn group(cmd: &GroupCmd, lim: &Limits) -> Res {
    let GroupCmd::Info { factors, input } = cmd;
    let g = match factors {
        Some(f) => parse_factors(f)?,
        None => group_from_str(&read_text(input.as_deref())?)?,
    };
    let subgroups = all_subgroups_with_bound(&g, lim.group())?;
    emit(&json!({
        "factors": g.factors(),
        "order": g.order(),
        "invariant_factors": g.invariant_factors(),
        "exponent": g.exponent(),
        "aut_order": automorphism_group_order(&g)?.to_string(),
        "subgroups": subgroups.len(),
    }))
}

fn elems(g: &GroupSpec, xs: &[usize]) -> Value {
    json!(xs.iter().map(|&x| g.residues(x)).collect::<Vec<_>>())
}

fn subgroup_or(
    g: &GroupSpec,
    gens: &[String],
    location: &str,
    default: Subgroup,
) -> Result<Subgroup, Error> {
    if gens.is_empty() {
        Ok(default)
    } else {
        parse_subgroup(g, gens, location)
    }
}

fn sring(cmd: &SringCmd) -> Res {
    match cmd {
        SringCmd::Validate(r) => emit(&sring_to_json(&read_ring(r.input.as_ref())?)),
        SringCmd::Constants(r) => {
            let a = read_ring(r.input.as_ref())?;
            emit(&json!({
                "rank": a.rank(),
                "sizes": a.sizes(),
                "constants": a.structure_constants().as_nested(),
            }))
        }
        SringCmd::Induce { ring, upper, lower } => {
            let a = read_ring(ring.input.as_ref())?;
            let g = a.group();
            let u = subgroup_or(g, upper, "--upper", Subgroup::whole(g))?;
            let l = subgroup_or(g, lower, "--lower", Subgroup::trivial())?;
            emit(&sring_to_json(
                &a.induced_sring(&quotient_section(g, &u, &l)?)?,
            ))
        }
        SringCmd::Radical(r) => {
            let a = read_ring(r.input.as_ref())?;
            let g = a.group();
            let rows = (0..a.rank())
                .map(|x| {
                    let (span, rad) = class_subgroups(&a, x)?;
                    Ok(json!({ "class": x, "generated": elems(g, span.members()), "radical": elems(g, rad.members()) }))
                })
                .collect::<Result<Vec<_>, Error>>()?;
            emit(&json!(rows))
        }
    }
}

fn automorphisms_of(g: &GroupSpec, autos: &[String]) -> Result<Vec<Perm>, Error> {
    autos
        .iter()
        .map(|s| {
            let images = parse_elems(g, s, "--auto")?;
            hom_from_generator_images(g, &images)?
                .map(|f| f.images)
                .ok_or(Error::NotAnAutomorphism)
        })
        .collect()
}

fn maps_from(maps: &[String], fallback: Option<AlgMap>, rank: usize) -> Result<Vec<AlgMap>, Error> {
    if maps.is_empty() {
        return Ok(fallback.into_iter().collect());
    }
    maps.iter()
        .map(|s| {
            let m = parse_indices(s, "--map")?;
            if m.len() != rank {
                return Err(Error::Schema {
                    location: "--map".into(),
                    message: format!("expected {rank} entries, got {}", m.len()),
                });
            }
            AlgMap::new(m)
        })
        .collect()
}

fn one_map(map: &Option<String>, fallback: Option<AlgMap>, rank: usize) -> Result<AlgMap, Error> {
    let maps = maps_from(map.as_slice(), fallback, rank)?;
    maps.into_iter().next().ok_or_else(|| Error::Schema {
        location: "--map".into(),
        message: "no class map given and the input has none".into(),
    })
}

fn build(cmd: &BuildCmd) -> Res {
    let ring = |p: &PathBuf| read_ring(Some(p));
    match cmd {
        BuildCmd::Cyc { factors, autos } => {
            let g = parse_factors(factors)?;
            emit(&sring_to_json(&cyclotomic_from_generators(
                &g,
                &automorphisms_of(&g, autos)?,
            )?))
        }
        BuildCmd::Orbit {
            factors,
            autos,
            perms,
        } => {
            let g = parse_factors(factors)?;
            let mut gens = right_regular_generators(&g);
            gens.extend(automorphisms_of(&g, autos)?);
            for p in perms {
                gens.push(Perm::from_images(parse_indices(p, "--perm")?)?);
            }
            if gens.iter().any(|p| p.degree() != g.order()) {
                return Err(Error::InvalidPermutation(format!(
                    "degree must be {}",
                    g.order()
                )));
            }
            let k = PermGroup::with_base_prefix(g.order(), gens, &[g.identity()]);
            emit(&sring_to_json(&orbit_sring(&g, &k)?))
        }
        BuildCmd::Tensor { left, right } => {
            emit(&sring_to_json(&tensor(&ring(left)?, &ring(right)?)?))
        }
        BuildCmd::Wreath {
            lower_ring,
            quotient_ring,
            factors,
            lower,
        } => {
            let g = parse_factors(factors)?;
            let l = parse_subgroup(&g, lower, "--lower")?;
            emit(&sring_to_json(&wreath(
                &ring(lower_ring)?,
                &ring(quotient_ring)?,
                &g,
                &l,
            )?))
        }
        BuildCmd::Swreath {
            upper_ring,
            quotient_ring,
            factors,
            upper,
            lower,
        } => {
            let g = parse_factors(factors)?;
            let s = quotient_section(
                &g,
                &parse_subgroup(&g, upper, "--upper")?,
                &parse_subgroup(&g, lower, "--lower")?,
            )?;
            emit(&sring_to_json(&s_wreath(
                &ring(upper_ring)?,
                &ring(quotient_ring)?,
                &g,
                &s,
            )?))
        }
        BuildCmd::Fusion { ring, maps } => {
            let e = read_envelope(ring.input.as_ref())?;
            let maps = maps_from(maps, e.alg_map, e.ring.rank())?;
            emit(&sring_to_json(&fusion(&e.ring, &maps)?))
        }
        BuildCmd::Lift {
            ring,
            factors,
            subgroup,
            map,
        } => {
            let e = read_envelope(ring.input.as_ref())?;
            let g = parse_factors(factors)?;
            let h = parse_subgroup(&g, subgroup, "--subgroup")?;
            let phi = one_map(map, e.alg_map, e.ring.rank())?;
            let (a, psi) = nonsep_lift(&e.ring, &phi, &g, &h)?;
            emit(&envelope_to_json(&a, Some(&psi)))
        }
    }
}

fn iso(cmd: &IsoCmd, lim: &Limits) -> Res {
    match cmd {
        IsoCmd::Aut(r) => {
            let a = read_ring(r.input.as_ref())?;
            let aut = automorphisms_with_bound(&a, lim.aut())?;
            emit(&json!({
                "order": aut.order().to_string(),
                "base": aut.base(),
                "generators": aut.generators().iter().map(perm_to_json).collect::<Vec<_>>(),
            }))
        }
        IsoCmd::Autalg(r) => {
            let a = read_ring(r.input.as_ref())?;
            let all = algebraic_automorphisms_with_bound(&a, lim.alg())?;
            let mut induced = Vec::new();
            for m in &all {
                if is_induced_with_bound(&a, &a, m, lim.aut())?.is_some() {
                    induced.push(algmap_to_json(m));
                }
            }
            let aut = automorphisms_with_bound(&a, lim.aut())?;
            emit(&json!({
                "aut_alg": all.iter().map(algmap_to_json).collect::<Vec<_>>(),
                "induced": induced,
                "aut_order": aut.order().to_string(),
                "iso_order": (aut.order() * induced.len()).to_string(),
            }))
        }
        IsoCmd::Induced { ring, map, target } => {
            let e = read_envelope(ring.input.as_ref())?;
            let b = match target {
                Some(p) => read_ring(Some(p))?,
                None => e.ring.clone(),
            };
            let m = one_map(map, e.alg_map.clone(), e.ring.rank())?;
            let f = is_induced_with_bound(&e.ring, &b, &m, lim.aut())?;
            verdict(
                &json!({ "induced": f.is_some(), "witness": f.as_ref().map(perm_to_json) }),
                f.is_some(),
            )
        }
        IsoCmd::Between { left, right } => {
            let (a, b) = (read_ring(Some(left))?, read_ring(Some(right))?);
            let alg = algebraic_isomorphisms_with_bound(&a, &b, lim.alg())?;
            let mut induced = Vec::new();
            let mut witness = None;
            for m in &alg {
                if let Some(f) = is_induced_with_bound(&a, &b, m, lim.aut())? {
                    witness.get_or_insert(f);
                    induced.push(m);
                }
            }
            let count = if induced.is_empty() {
                "0".to_string()
            } else {
                (automorphisms_with_bound(&a, lim.aut())?.order() * induced.len()).to_string()
            };
            emit(&json!({
                "algebraic": alg.iter().map(algmap_to_json).collect::<Vec<_>>(),
                "induced": induced.into_iter().map(algmap_to_json).collect::<Vec<_>>(),
                "witness": witness.as_ref().map(perm_to_json),
                "combinatorial_count": count,
            }))
        }
    }
}

fn orbits_json(a: &SRing, orbits: &[Vec<usize>]) -> Value {
    json!(orbits
        .iter()
        .map(|o| elems(a.group(), o))
        .collect::<Vec<_>>())
}

fn analyze(cmd: &AnalyzeCmd, lim: &Limits) -> Res {
    match cmd {
        AnalyzeCmd::Schurian(r) => {
            let a = read_ring(r.input.as_ref())?;
            let s = schurity_from(&a, &automorphisms_with_bound(&a, lim.aut())?);
            verdict(
                &json!({ "schurian": s.schurian, "orbits": orbits_json(&a, &s.orbits) }),
                s.schurian,
            )
        }
        AnalyzeCmd::Normal(r) => {
            let a = read_ring(r.input.as_ref())?;
            let normal = is_normal_in(&a, &automorphisms_with_bound(&a, lim.aut())?);
            verdict(&json!({ "normal": normal }), normal)
        }
        AnalyzeCmd::Separable {
            ring,
            self_only,
            targets,
            exhaustive,
        } => {
            let a = read_ring(ring.input.as_ref())?;
            if a.group().order() > lim.aut() {
                return Err(Error::BoundExceeded {
                    what: "group order",
                    size: a.group().order(),
                    bound: lim.aut(),
                });
            }
            let report = if *exhaustive {
                separability_exhaustive(&a)?
            } else if let Some(path) = targets {
                separability_verdict(&a, &read_ring_lines(path)?, TargetsMode::Explicit)?
            } else {
                // `--self` is the default target set.
                let _ = self_only;
                separability_verdict(&a, std::slice::from_ref(&a), TargetsMode::Explicit)?
            };
            verdict(
                &report_to_json(&report),
                report.verdict == Verdict::Separable,
            )
        }
    }
}

fn enumerate(cmd: &EnumCmd, lim: &Limits) -> Res {
    match cmd {
        EnumCmd::Srings {
            factors,
            up_to_cayley: reduce,
        } => {
            let g = parse_factors(factors)?;
            let mut rings = match lim.bound {
                Some(b) => enumerate_srings_with_bound(&g, b)?,
                None => enumerate_srings(&g)?,
            };
            if *reduce {
                rings = up_to_cayley(&rings, &g)?;
            }
            let mut out = String::new();
            for a in &rings {
                out.push_str(&sring_to_json(a).to_string());
                out.push('\n');
            }
            print!("{out}");
            Ok(Outcome::Positive)
        }
        EnumCmd::Table1 => {
            let (rows, _, _) = table1()?;
            print!("{}", table1_csv(&rows));
            Ok(Outcome::Positive)
        }
    }
}

fn witness(cmd: &WitnessCmd) -> Res {
    let w = match cmd {
        WitnessCmd::P2 => witness_p2(),
        WitnessCmd::P3 => witness_p3(),
    };
    emit(&envelope_to_json(&w.ring, Some(&w.phi)))
}
