//! Conjugacy classes of the universal cover as alcove points in Kac
//! coordinates, the center action on them, class stabilizers, covering
//! degrees of a class over its image, and the subgroup J generated by the
//! stabilizers of a marking list.
//!
//! All coordinates are exact rationals; stabilizer checks are equality
//! tests, so no floating point enters here.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::group_model::CompactGroupModel;
use crate::root_data::{ExtendedDiagram, SpecialAutomorphism};

/// One rational Kac-coordinate vector `(s_0, ..., s_n)` per simple factor;
/// each satisfies `s_i >= 0` and `sum_i a_i s_i = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KacPoint {
    pub factors: Vec<Vec<BigRational>>,
}

impl KacPoint {
    /// The identity class: `(1, 0, ..., 0)` in every factor.
    pub fn identity(diagrams: &[ExtendedDiagram]) -> Self {
        KacPoint {
            factors: diagrams
                .iter()
                .map(|d| {
                    let mut v = vec![BigRational::zero(); d.node_count()];
                    v[0] = BigRational::one();
                    v
                })
                .collect(),
        }
    }

    pub fn validate(&self, diagrams: &[ExtendedDiagram]) -> Result<()> {
        if self.factors.len() != diagrams.len() {
            return Err(Error::InvalidKacPoint(format!(
                "{} factor vectors for {} simple factors",
                self.factors.len(),
                diagrams.len()
            )));
        }
        for (f, (coords, d)) in self.factors.iter().zip(diagrams).enumerate() {
            if coords.len() != d.node_count() {
                return Err(Error::InvalidKacPoint(format!(
                    "factor {f}: {} coordinates for {} nodes",
                    coords.len(),
                    d.node_count()
                )));
            }
            let mut total = BigRational::zero();
            for (i, s) in coords.iter().enumerate() {
                if s.is_negative() {
                    return Err(Error::InvalidKacPoint(format!(
                        "factor {f}: coordinate {i} is negative"
                    )));
                }
                total += s * BigRational::from(BigInt::from(d.marks()[i]));
            }
            if !total.is_one() {
                return Err(Error::InvalidKacPoint(format!(
                    "factor {f}: marks-weighted sum is {total}, expected 1"
                )));
            }
        }
        Ok(())
    }
}

/// A conjugacy class of the cover in normal form: a torus coordinate plus
/// an alcove point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkingSpec {
    pub torus: Vec<BigRational>,
    pub alcove: KacPoint,
}

impl MarkingSpec {
    /// The identity class of the cover.
    pub fn identity(torus_rank: usize, diagrams: &[ExtendedDiagram]) -> Self {
        MarkingSpec {
            torus: vec![BigRational::zero(); torus_rank],
            alcove: KacPoint::identity(diagrams),
        }
    }

    pub fn validate(&self, model: &CompactGroupModel) -> Result<()> {
        if self.torus.len() != model.torus_rank() {
            return Err(Error::StructureMismatch(format!(
                "marking torus part has length {}, torus rank is {}",
                self.torus.len(),
                model.torus_rank()
            )));
        }
        self.alcove.validate(model.diagrams())
    }
}

/// An element of the center of the simply connected semisimple part: one
/// special automorphism per simple factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CenterElement {
    pub parts: Vec<SpecialAutomorphism>,
}

impl CenterElement {
    pub fn identity(node_counts: &[usize]) -> Self {
        CenterElement {
            parts: node_counts
                .iter()
                .map(|&n| SpecialAutomorphism::identity(n))
                .collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.parts.iter().all(|p| p.is_identity())
    }

    pub fn compose(&self, other: &CenterElement) -> CenterElement {
        assert_eq!(self.parts.len(), other.parts.len());
        CenterElement {
            parts: self
                .parts
                .iter()
                .zip(&other.parts)
                .map(|(a, b)| a.compose(b))
                .collect(),
        }
    }

    pub fn inverse(&self) -> CenterElement {
        CenterElement {
            parts: self.parts.iter().map(|p| p.inverse()).collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.parts.iter().map(|p| p.order()).fold(1, |a, b| a.lcm(&b))
    }

    /// Integer power; the exponent is reduced modulo the element order.
    pub fn pow(&self, exp: &BigInt) -> CenterElement {
        let ord = BigInt::from(self.order());
        let e = exp.mod_floor(&ord);
        let mut k = u64::try_from(&e).expect("reduced exponent fits u64");
        let node_counts: Vec<usize> = self.parts.iter().map(|p| p.node_count()).collect();
        let mut acc = CenterElement::identity(&node_counts);
        while k > 0 {
            acc = acc.compose(self);
            k -= 1;
        }
        acc
    }
}

/// The center action on Kac coordinates: per factor, coordinate `i` of the
/// output is coordinate `sigma^-1(i)` of the input.
pub fn act_center(z: &CenterElement, p: &KacPoint) -> Result<KacPoint> {
    if z.parts.len() != p.factors.len() {
        return Err(Error::StructureMismatch(format!(
            "center element has {} parts, point has {} factors",
            z.parts.len(),
            p.factors.len()
        )));
    }
    let mut out = Vec::with_capacity(p.factors.len());
    for (sigma, coords) in z.parts.iter().zip(&p.factors) {
        if sigma.node_count() != coords.len() {
            return Err(Error::StructureMismatch(format!(
                "automorphism on {} nodes applied to {} coordinates",
                sigma.node_count(),
                coords.len()
            )));
        }
        let mut v = vec![BigRational::zero(); coords.len()];
        for (i, s) in coords.iter().enumerate() {
            v[sigma.apply(i)] = s.clone();
        }
        out.push(v);
    }
    Ok(KacPoint { factors: out })
}

/// The stabilizer `{z in S : z . p = p}`. When `S` is a subgroup the result
/// is one as well.
pub fn stabilizer(p: &KacPoint, subgroup: &[CenterElement]) -> Result<Vec<CenterElement>> {
    let mut out = Vec::new();
    for z in subgroup {
        if act_center(z, p)? == *p {
            out.push(z.clone());
        }
    }
    Ok(out)
}

/// Component structure of the preimage of a conjugacy class under the
/// covering: the class stabilizer inside the covering kernel, the covering
/// degree (its cardinality), and the number of components (the index).
#[derive(Clone, Debug)]
pub struct PreimageReport {
    pub component_count: u64,
    pub covering_degree: u64,
    pub class_stabilizer: Vec<CenterElement>,
}

pub fn preimage_components(
    marking: &MarkingSpec,
    model: &CompactGroupModel,
) -> Result<PreimageReport> {
    marking.validate(model)?;
    let kernel = model.ker_rho_ss_elements();
    let stab = stabilizer(&marking.alcove, kernel)?;
    if !kernel.len().is_multiple_of(stab.len()) {
        return Err(Error::Internal(
            "stabilizer size does not divide kernel size".into(),
        ));
    }
    Ok(PreimageReport {
        component_count: (kernel.len() / stab.len()) as u64,
        covering_degree: stab.len() as u64,
        class_stabilizer: stab,
    })
}

/// Generators of the subgroup J: the union of the class stabilizers of the
/// markings, inside the covering kernel of the semisimple part. An empty
/// marking list yields the trivial subgroup.
pub fn compute_j(
    markings: &[MarkingSpec],
    model: &CompactGroupModel,
) -> Result<Vec<CenterElement>> {
    let mut gens: Vec<CenterElement> = Vec::new();
    for m in markings {
        let report = preimage_components(m, model)?;
        for z in report.class_stabilizer {
            if !z.is_identity() && !gens.contains(&z) {
                gens.push(z);
            }
        }
    }
    Ok(gens)
}
