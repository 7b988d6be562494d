//! External input formats: rationals as `"p/q"` strings, marking and group
//! documents in JSON, and the `l=,r=,kind=` surface shorthand.
//!
//! A center element of a simple factor is named by the mark-1 node to which
//! its special automorphism sends node 0.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::components::SurfaceSpec;
use crate::conjugacy::{CenterElement, KacPoint, MarkingSpec};
use crate::error::{Error, Result};
use crate::group_model::{named_group, CompactGroupSpec, KernelGen};
use crate::root_data::{center_group, CartanType};

/// Exact rationals are written as strings, never floats.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    BigRational::from_str(s.trim())
        .map_err(|e| Error::Parse(format!("rational {s:?}: {e}")))
}

/// JSON schema for a group: either a `name` shortcut or explicit covering
/// data.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct GroupDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub factors: Vec<String>,
    #[serde(default)]
    pub torus_rank: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub kernel: Vec<KernelDoc>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct KernelDoc {
    #[serde(default)]
    pub lattice: Vec<i64>,
    /// One mark-1 node index per simple factor.
    #[serde(default)]
    pub center: Vec<usize>,
}

pub fn group_spec_from_doc(doc: &GroupDoc) -> Result<CompactGroupSpec> {
    if let Some(name) = &doc.name {
        if !doc.factors.is_empty() || doc.torus_rank != 0 || !doc.kernel.is_empty() {
            return Err(Error::Parse(
                "group document: \"name\" excludes explicit covering data".into(),
            ));
        }
        return named_group(name);
    }
    let factors: Vec<CartanType> = doc
        .factors
        .iter()
        .map(|s| CartanType::parse(s))
        .collect::<Result<_>>()?;
    let centers = factors
        .iter()
        .map(|&t| center_group(t))
        .collect::<Result<Vec<_>>>()?;
    let mut kernel_gens = Vec::new();
    for (k, gen) in doc.kernel.iter().enumerate() {
        if gen.center.len() != factors.len() {
            return Err(Error::Parse(format!(
                "kernel generator {k}: {} center entries for {} factors",
                gen.center.len(),
                factors.len()
            )));
        }
        let parts = centers
            .iter()
            .zip(&gen.center)
            .map(|(c, &node)| Ok(c.by_special_node(node)?.clone()))
            .collect::<Result<Vec<_>>>()?;
        kernel_gens.push(KernelGen {
            lattice: gen.lattice.iter().map(|&v| BigInt::from(v)).collect(),
            central: CenterElement { parts },
        });
    }
    Ok(CompactGroupSpec {
        factors,
        torus_rank: doc.torus_rank,
        kernel_gens,
    })
}

/// Accepts a named group or an inline JSON group document.
pub fn parse_group_arg(text: &str) -> Result<CompactGroupSpec> {
    let trimmed = text.trim();
    if trimmed.starts_with('{') {
        let doc: GroupDoc =
            serde_json::from_str(trimmed).map_err(|e| Error::Parse(format!("group JSON: {e}")))?;
        group_spec_from_doc(&doc)
    } else {
        named_group(trimmed)
    }
}

/// JSON schema for one marking: the torus coordinate and one Kac vector
/// per simple factor, all rationals as strings.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MarkingDoc {
    #[serde(default)]
    pub torus: Vec<String>,
    #[serde(default)]
    pub kac: Vec<Vec<String>>,
}

pub fn marking_from_doc(doc: &MarkingDoc) -> Result<MarkingSpec> {
    let torus = doc
        .torus
        .iter()
        .map(|s| parse_rational(s))
        .collect::<Result<_>>()?;
    let factors = doc
        .kac
        .iter()
        .map(|row| row.iter().map(|s| parse_rational(s)).collect::<Result<_>>())
        .collect::<Result<_>>()?;
    Ok(MarkingSpec {
        torus,
        alcove: KacPoint { factors },
    })
}

pub fn markings_from_json(text: &str) -> Result<Vec<MarkingSpec>> {
    let docs: Vec<MarkingDoc> =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("markings JSON: {e}")))?;
    docs.iter().map(marking_from_doc).collect()
}

/// Parses `l=<n>,r=<n>,kind=<0|1|2>`; all three fields are required.
pub fn parse_surface(text: &str) -> Result<SurfaceSpec> {
    let mut l = None;
    let mut r = None;
    let mut kind = None;
    for piece in text.split(',') {
        let piece = piece.trim();
        if piece.is_empty() {
            continue;
        }
        let (key, value) = piece
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("surface field {piece:?} is not key=value")))?;
        let n: usize = value
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("surface field {piece:?}: bad number")))?;
        match key.trim() {
            "l" => l = Some(n),
            "r" => r = Some(n),
            "kind" => kind = Some(n),
            other => return Err(Error::Parse(format!("unknown surface field {other:?}"))),
        }
    }
    match (l, r, kind) {
        (Some(l), Some(r), Some(k)) => SurfaceSpec::new(l, r, k),
        _ => Err(Error::Parse(
            "surface needs all of l=, r=, kind= (e.g. l=1,r=0,kind=0)".into(),
        )),
    }
}
