use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::OperatorSpec;
use crate::exactnum::{format_rational, parse_rational, BigRational};

/// One problem found while validating an operator file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub path: String,
    pub message: String,
}

impl Violation {
    fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        Violation {
            path: path.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

fn default_true() -> bool {
    true
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    dimension: usize,
    orbits: usize,
    period: Vec<i64>,
    #[serde(default = "default_true")]
    symmetrize: bool,
    #[serde(default)]
    hopping: Vec<RawHop>,
    #[serde(default)]
    potential: Vec<RawPotential>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawHop {
    from: i64,
    to: i64,
    offset: Vec<i64>,
    value: Value,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPotential {
    orbit: i64,
    cell: Vec<i64>,
    value: Value,
}

fn parse_value(v: &Value) -> Result<BigRational, String> {
    match v {
        Value::String(s) => parse_rational(s).map_err(|e| e.to_string()),
        Value::Number(n) if n.is_i64() => Ok(BigRational::from_integer(n.as_i64().unwrap().into())),
        _ => Err(format!("value {v} must be an integer or a rational string such as \"3/2\"")),
    }
}

fn orbit_index(raw: i64, orbits: usize) -> Option<usize> {
    (raw >= 1 && raw as u64 <= orbits as u64).then(|| raw as usize - 1)
}

/// Parses an operator file and reports every violation at once.
pub fn parse_spec(text: &str) -> Result<OperatorSpec, Vec<Violation>> {
    let raw: RawSpec = serde_json::from_str(text).map_err(|e| vec![Violation::new("$", e.to_string())])?;
    let mut errs = Vec::new();
    let d = raw.dimension;
    if d == 0 {
        errs.push(Violation::new("dimension", "dimension must be at least 1"));
    }
    if raw.orbits == 0 {
        errs.push(Violation::new("orbits", "orbit count must be at least 1"));
    }
    if raw.period.len() != d {
        errs.push(Violation::new(
            "period",
            format!("period has {} entries, expected {d}", raw.period.len()),
        ));
    }
    if raw.period.iter().any(|&q| q < 1) {
        errs.push(Violation::new("period", "period entries must be positive"));
    }

    let mut hopping = BTreeMap::new();
    for (k, h) in raw.hopping.iter().enumerate() {
        let path = format!("hopping[{k}]");
        let from = orbit_index(h.from, raw.orbits);
        let to = orbit_index(h.to, raw.orbits);
        if from.is_none() {
            errs.push(Violation::new(&path, format!("unknown orbit {} in \"from\"", h.from)));
        }
        if to.is_none() {
            errs.push(Violation::new(&path, format!("unknown orbit {} in \"to\"", h.to)));
        }
        if h.offset.len() != d {
            errs.push(Violation::new(
                &path,
                format!("offset has {} entries, expected {d}", h.offset.len()),
            ));
        }
        let value = parse_value(&h.value).map_err(|m| errs.push(Violation::new(&path, m))).ok();
        if let (Some(i), Some(j), Some(v)) = (from, to, value) {
            let key = (i, j, h.offset.clone());
            if hopping.insert(key, v).is_some() {
                errs.push(Violation::new(
                    &path,
                    format!("duplicate hop (from {}, to {}, offset {:?})", h.from, h.to, h.offset),
                ));
            }
        }
    }

    let mut potential = BTreeMap::new();
    for (k, p) in raw.potential.iter().enumerate() {
        let path = format!("potential[{k}]");
        let orbit = orbit_index(p.orbit, raw.orbits);
        if orbit.is_none() {
            errs.push(Violation::new(&path, format!("unknown orbit {}", p.orbit)));
        }
        let in_w = p.cell.len() == raw.period.len()
            && p.cell.iter().zip(&raw.period).all(|(&w, &q)| 0 <= w && w < q);
        if !in_w {
            errs.push(Violation::new(&path, format!("cell {:?} outside W for period {:?}", p.cell, raw.period)));
        }
        let value = parse_value(&p.value).map_err(|m| errs.push(Violation::new(&path, m))).ok();
        if let (Some(o), true, Some(v)) = (orbit, in_w, value) {
            if potential.insert((o, p.cell.clone()), v).is_some() {
                errs.push(Violation::new(&path, format!("duplicate potential entry for orbit {} cell {:?}", p.orbit, p.cell)));
            }
        }
    }

    let spec = OperatorSpec {
        dimension: d,
        orbits: raw.orbits,
        period: raw.period,
        symmetrize: raw.symmetrize,
        hopping,
        potential,
    };
    if errs.is_empty() {
        errs.extend(structural_violations(&spec));
    }
    if errs.is_empty() {
        let mut spec = spec;
        spec.potential.retain(|_, v| *v != BigRational::from_integer(0.into()));
        Ok(spec)
    } else {
        Err(errs)
    }
}

pub(super) fn structural_violations(spec: &OperatorSpec) -> Vec<Violation> {
    let mut errs = Vec::new();
    let d = spec.dimension;
    if d == 0 {
        errs.push(Violation::new("dimension", "dimension must be at least 1"));
    }
    if spec.orbits == 0 {
        errs.push(Violation::new("orbits", "orbit count must be at least 1"));
    }
    if spec.period.len() != d || spec.period.iter().any(|&q| q < 1) {
        errs.push(Violation::new("period", format!("period {:?} must have {d} positive entries", spec.period)));
    }
    for (i, j, n) in spec.hopping.keys() {
        let path = format!("hopping({}, {}, {:?})", i + 1, j + 1, n);
        if *i >= spec.orbits || *j >= spec.orbits {
            errs.push(Violation::new(&path, "unknown orbit"));
        }
        if n.len() != d {
            errs.push(Violation::new(&path, format!("offset must have {d} entries")));
        }
    }
    if spec.symmetrize {
        for ((i, j, n), v) in &spec.hopping {
            let rev = (*j, *i, n.iter().map(|x| -x).collect::<Vec<_>>());
            if let Some(w) = spec.hopping.get(&rev) {
                if w != v {
                    errs.push(Violation::new(
                        format!("hopping({}, {}, {:?})", i + 1, j + 1, n),
                        format!("conflicts with its symmetric partner value {}", format_rational(w)),
                    ));
                }
            }
        }
    }
    let seen: BTreeSet<_> = spec.potential.keys().collect();
    for (o, w) in seen {
        let in_w = w.len() == spec.period.len() && w.iter().zip(&spec.period).all(|(&c, &q)| 0 <= c && c < q);
        if *o >= spec.orbits {
            errs.push(Violation::new(format!("potential({}, {:?})", o + 1, w), "unknown orbit"));
        }
        if !in_w {
            errs.push(Violation::new(format!("potential({}, {:?})", o + 1, w), "cell outside W"));
        }
    }
    errs
}

#[derive(Serialize)]
struct OutHop<'a> {
    from: usize,
    to: usize,
    offset: &'a [i64],
    value: String,
}

#[derive(Serialize)]
struct OutPotential<'a> {
    orbit: usize,
    cell: &'a [i64],
    value: String,
}

#[derive(Serialize)]
struct OutSpec<'a> {
    dimension: usize,
    orbits: usize,
    period: &'a [i64],
    symmetrize: bool,
    hopping: Vec<OutHop<'a>>,
    potential: Vec<OutPotential<'a>>,
}

pub(super) fn to_json(spec: &OperatorSpec) -> String {
    let out = OutSpec {
        dimension: spec.dimension,
        orbits: spec.orbits,
        period: &spec.period,
        symmetrize: spec.symmetrize,
        hopping: spec
            .hopping
            .iter()
            .map(|((i, j, n), v)| OutHop {
                from: i + 1,
                to: j + 1,
                offset: n,
                value: format_rational(v),
            })
            .collect(),
        potential: spec
            .potential
            .iter()
            .map(|((o, w), v)| OutPotential {
                orbit: o + 1,
                cell: w,
                value: format_rational(v),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&out).expect("spec serializes")
}
