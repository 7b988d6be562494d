//! The theorem layer: which surfaces are in range, when the marked
//! representation variety is nonempty, the component group of the moduli
//! space, and the flat-bundle reading of the closed-surface cases.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::abelian::{lattice_membership, FgAbelianGroup, IsoType};
use crate::conjugacy::{compute_j, CenterElement, MarkingSpec};
use crate::error::{Error, Result};
use crate::group_model::CompactGroupModel;

/// A compact surface: `handles` handles, `boundary` boundary circles, and
/// the kind index (0 orientable, 1 with a cross-cap, 2 with a Klein-bottle
/// summand). Every compact surface arises this way.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SurfaceSpec {
    pub handles: usize,
    pub boundary: usize,
    pub kind: SurfaceKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SurfaceKind {
    Orientable,
    CrossCap,
    KleinBottle,
}

impl SurfaceKind {
    pub fn index(self) -> usize {
        match self {
            SurfaceKind::Orientable => 0,
            SurfaceKind::CrossCap => 1,
            SurfaceKind::KleinBottle => 2,
        }
    }

    pub fn from_index(i: usize) -> Result<Self> {
        match i {
            0 => Ok(SurfaceKind::Orientable),
            1 => Ok(SurfaceKind::CrossCap),
            2 => Ok(SurfaceKind::KleinBottle),
            _ => Err(Error::Parse(format!("surface kind must be 0, 1 or 2, got {i}"))),
        }
    }
}

impl SurfaceSpec {
    pub fn new(handles: usize, boundary: usize, kind: usize) -> Result<Self> {
        Ok(SurfaceSpec {
            handles,
            boundary,
            kind: SurfaceKind::from_index(kind)?,
        })
    }

    /// Cross-cap count `m = 2*handles + kind` for the nonorientable kinds.
    pub fn crosscaps(&self) -> Option<usize> {
        match self.kind {
            SurfaceKind::Orientable => None,
            k => Some(2 * self.handles + k.index()),
        }
    }
}

impl std::fmt::Display for SurfaceSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "l={},r={},kind={}",
            self.handles,
            self.boundary,
            self.kind.index()
        )
    }
}

/// Whether the classification applies to a surface.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Applicability {
    InRange,
    /// The closed orientable genus-0 case: the variety is a single point.
    TrivialPoint,
    OutOfRange(String),
}

pub fn applicability(s: &SurfaceSpec) -> Applicability {
    match s.kind {
        SurfaceKind::Orientable => {
            if s.handles >= 1 {
                Applicability::InRange
            } else if s.boundary == 0 {
                Applicability::TrivialPoint
            } else {
                Applicability::OutOfRange(
                    "sphere with boundary (l=0, r>0) is not covered".to_string(),
                )
            }
        }
        SurfaceKind::CrossCap => {
            if s.handles >= 1 {
                Applicability::InRange
            } else {
                Applicability::OutOfRange("m=1 (projective plane) excluded".to_string())
            }
        }
        SurfaceKind::KleinBottle => match s.handles {
            0 => Applicability::OutOfRange("m=2 (Klein bottle) excluded".to_string()),
            1 => Applicability::OutOfRange(
                "m=4 (connected sum of torus and Klein bottle) excluded".to_string(),
            ),
            _ => Applicability::InRange,
        },
    }
}

/// Which abelian group the component set is in bijection with.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TargetName {
    Pi1Gss,
    Pi1GssModJ,
    Pi1GMod2Pi1G,
    Pi1GModJprime,
}

impl TargetName {
    pub fn as_str(self) -> &'static str {
        match self {
            TargetName::Pi1Gss => "pi1Gss",
            TargetName::Pi1GssModJ => "pi1Gss_mod_J",
            TargetName::Pi1GMod2Pi1G => "pi1G_mod_2pi1G",
            TargetName::Pi1GModJprime => "pi1G_mod_Jprime",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportStatus {
    Ok,
    Empty,
    OutOfRange,
}

impl ReportStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            ReportStatus::Ok => "OK",
            ReportStatus::Empty => "EMPTY",
            ReportStatus::OutOfRange => "OUT_OF_RANGE",
        }
    }
}

/// Bundle-side summary for closed surfaces: the coefficient group of the
/// obstruction, how many bundle classes carry flat connections, and whether
/// each nonempty moduli space is connected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatBundleSummary {
    pub h2: IsoType,
    pub flat_admitting: BigUint,
    pub moduli_connected: bool,
}

/// The answer for one surface/marking query.
#[derive(Clone, Debug)]
pub struct ComponentReport {
    pub status: ReportStatus,
    pub reason: Option<String>,
    pub component_group: Option<IsoType>,
    pub count: Option<BigUint>,
    pub target: Option<TargetName>,
    /// Set for the closed orientable genus-0 surface, whose variety is a
    /// single point regardless of the group.
    pub trivial_surface: bool,
    pub flat_bundle: Option<FlatBundleSummary>,
}

impl ComponentReport {
    fn out_of_range(reason: String) -> Self {
        ComponentReport {
            status: ReportStatus::OutOfRange,
            reason: Some(reason),
            component_group: None,
            count: None,
            target: None,
            trivial_surface: false,
            flat_bundle: None,
        }
    }

    fn empty() -> Self {
        ComponentReport {
            status: ReportStatus::Empty,
            reason: None,
            component_group: None,
            count: None,
            target: None,
            trivial_surface: false,
            flat_bundle: None,
        }
    }
}

fn validate_markings(
    s: &SurfaceSpec,
    markings: &[MarkingSpec],
    model: &CompactGroupModel,
) -> Result<()> {
    if markings.len() != s.boundary {
        return Err(Error::StructureMismatch(format!(
            "{} markings supplied for {} boundary components",
            markings.len(),
            s.boundary
        )));
    }
    for m in markings {
        m.validate(model)?;
    }
    Ok(())
}

/// Nonemptiness. Orientable surfaces with boundary require the torus parts
/// to sum to a lattice vector inside the free quotient lattice; the
/// nonorientable kinds and closed surfaces impose no condition.
pub fn check_nonempty(
    s: &SurfaceSpec,
    markings: &[MarkingSpec],
    model: &CompactGroupModel,
) -> Result<bool> {
    validate_markings(s, markings, model)?;
    if s.boundary == 0 || s.kind != SurfaceKind::Orientable {
        return Ok(true);
    }
    let t = model.torus_rank();
    let mut sum = vec![BigRational::zero(); t];
    for m in markings {
        for (acc, x) in sum.iter_mut().zip(&m.torus) {
            *acc += x;
        }
    }
    let mut integral = Vec::with_capacity(t);
    for v in &sum {
        if !v.is_integer() {
            return Ok(false);
        }
        integral.push(v.to_integer());
    }
    lattice_membership(&integral, model.lambda_check())
}

fn quotient_pi1_gss(model: &CompactGroupModel, j: &[CenterElement]) -> Result<FgAbelianGroup> {
    let coords: Vec<Vec<BigInt>> = j
        .iter()
        .map(|z| model.express_in_pi1_gss(z))
        .collect::<Result<_>>()?;
    model.pi1_gss().quotient_by(&coords)
}

fn quotient_pi1_g_mod_jprime(
    model: &CompactGroupModel,
    j: &[CenterElement],
) -> Result<FgAbelianGroup> {
    let mut gens = model.pi1_g().doubling_subgroup();
    for z in j {
        gens.push(model.embed_in_pi1_g(z)?);
    }
    model.pi1_g().quotient_by(&gens)
}

fn finite_order(group: &FgAbelianGroup) -> Result<(IsoType, BigUint)> {
    let iso = group.iso_type();
    let order = iso
        .order()
        .ok_or_else(|| Error::Internal(format!("component group {iso} is infinite")))?;
    Ok((iso, order))
}

/// The component count and group of the marked moduli space.
pub fn component_group(
    s: &SurfaceSpec,
    markings: &[MarkingSpec],
    model: &CompactGroupModel,
) -> Result<ComponentReport> {
    match applicability(s) {
        Applicability::OutOfRange(reason) => Ok(ComponentReport::out_of_range(reason)),
        Applicability::TrivialPoint => {
            validate_markings(s, markings, model)?;
            Ok(ComponentReport {
                status: ReportStatus::Ok,
                reason: None,
                component_group: Some(IsoType::trivial()),
                count: Some(BigUint::one()),
                target: None,
                trivial_surface: true,
                flat_bundle: Some(flat_bundle_report(s, model)?),
            })
        }
        Applicability::InRange => {
            validate_markings(s, markings, model)?;
            if !check_nonempty(s, markings, model)? {
                return Ok(ComponentReport::empty());
            }
            let j = compute_j(markings, model)?;
            let (group, target) = if s.kind == SurfaceKind::Orientable {
                let target = if s.boundary > 0 {
                    TargetName::Pi1GssModJ
                } else {
                    TargetName::Pi1Gss
                };
                (quotient_pi1_gss(model, &j)?, target)
            } else {
                let target = if s.boundary > 0 {
                    TargetName::Pi1GModJprime
                } else {
                    TargetName::Pi1GMod2Pi1G
                };
                (quotient_pi1_g_mod_jprime(model, &j)?, target)
            };
            let (iso, count) = finite_order(&group)?;
            let flat_bundle = if s.boundary == 0 {
                Some(flat_bundle_report(s, model)?)
            } else {
                None
            };
            Ok(ComponentReport {
                status: ReportStatus::Ok,
                reason: None,
                component_group: Some(iso),
                count: Some(count),
                target: Some(target),
                trivial_surface: false,
                flat_bundle,
            })
        }
    }
}

/// Flat-bundle view for closed surfaces: classifies topological bundle
/// types by the degree-two obstruction and reports how many types carry
/// flat connections.
pub fn flat_bundle_report(
    s: &SurfaceSpec,
    model: &CompactGroupModel,
) -> Result<FlatBundleSummary> {
    if s.boundary > 0 {
        return Err(Error::FlatBundleNeedsClosed);
    }
    match applicability(s) {
        Applicability::OutOfRange(reason) => Err(Error::StructureMismatch(format!(
            "flat-bundle report out of range: {reason}"
        ))),
        Applicability::TrivialPoint => {
            // over the sphere only the trivial class carries a flat
            // connection, and its moduli space is a point
            Ok(FlatBundleSummary {
                h2: model.pi1_g().iso_type(),
                flat_admitting: BigUint::one(),
                moduli_connected: true,
            })
        }
        Applicability::InRange => {
            if s.kind == SurfaceKind::Orientable {
                // coefficient group is the full fundamental group; exactly
                // the torsion classes admit flat connections
                let torsion_count = model
                    .pi1_gss()
                    .order()
                    .ok_or_else(|| Error::Internal("semisimple kernel is infinite".into()))?;
                Ok(FlatBundleSummary {
                    h2: model.pi1_g().iso_type(),
                    flat_admitting: torsion_count,
                    moduli_connected: true,
                })
            } else {
                // coefficient group is the mod-2 quotient; every class
                // admits a flat connection
                let h2_group = model
                    .pi1_g()
                    .quotient_by(&model.pi1_g().doubling_subgroup())?;
                let (iso, order) = finite_order(&h2_group)?;
                Ok(FlatBundleSummary {
                    h2: iso,
                    flat_admitting: order,
                    moduli_connected: true,
                })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conjugacy::KacPoint;
    use crate::group_model::named_model;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn surface(l: usize, r: usize, kind: usize) -> SurfaceSpec {
        SurfaceSpec::new(l, r, kind).unwrap()
    }

    /// SO(3) marking with cover class angle `phi = num/den * pi`.
    fn so3_marking(num: i64, den: i64) -> MarkingSpec {
        MarkingSpec {
            torus: Vec::new(),
            alcove: KacPoint {
                factors: vec![vec![r(den - num, den), r(num, den)]],
            },
        }
    }

    fn count_of(report: &ComponentReport) -> u64 {
        u64::try_from(report.count.as_ref().unwrap()).unwrap()
    }

    #[test]
    fn applicability_table() {
        assert_eq!(applicability(&surface(0, 0, 0)), Applicability::TrivialPoint);
        assert_eq!(applicability(&surface(1, 0, 0)), Applicability::InRange);
        assert_eq!(applicability(&surface(2, 3, 1)), Applicability::InRange);
        assert!(matches!(applicability(&surface(0, 2, 0)), Applicability::OutOfRange(_)));
        assert!(matches!(applicability(&surface(0, 0, 1)), Applicability::OutOfRange(_)));
        assert!(matches!(applicability(&surface(0, 1, 2)), Applicability::OutOfRange(_)));
        assert!(matches!(applicability(&surface(1, 0, 2)), Applicability::OutOfRange(_)));
        assert_eq!(applicability(&surface(2, 0, 2)), Applicability::InRange);
    }

    #[test]
    fn closed_orientable_counts() {
        let so3 = named_model("SO(3)").unwrap();
        for genus in 1..=3 {
            let rep = component_group(&surface(genus, 0, 0), &[], &so3).unwrap();
            assert_eq!(count_of(&rep), 2, "SO(3) genus {genus}");
            assert_eq!(rep.target, Some(TargetName::Pi1Gss));
        }
        let su2 = named_model("SU(2)").unwrap();
        assert_eq!(count_of(&component_group(&surface(2, 0, 0), &[], &su2).unwrap()), 1);
        let u2 = named_model("U(2)").unwrap();
        assert_eq!(count_of(&component_group(&surface(1, 0, 0), &[], &u2).unwrap()), 1);
        let psu3 = named_model("PSU(3)").unwrap();
        assert_eq!(count_of(&component_group(&surface(3, 0, 0), &[], &psu3).unwrap()), 3);
    }

    #[test]
    fn closed_nonorientable_counts() {
        // m = 3 is (l=1, kind=1); m = 5 is (2,1); m = 6 is (2,2)
        let u2 = named_model("U(2)").unwrap();
        let so3 = named_model("SO(3)").unwrap();
        let su2 = named_model("SU(2)").unwrap();
        let t2 = named_model("T^2").unwrap();
        for (l, k) in [(1usize, 1usize), (2, 1), (2, 2)] {
            let s = surface(l, 0, k);
            assert_eq!(count_of(&component_group(&s, &[], &u2).unwrap()), 2, "U(2) {s}");
            assert_eq!(count_of(&component_group(&s, &[], &so3).unwrap()), 2, "SO(3) {s}");
            assert_eq!(count_of(&component_group(&s, &[], &su2).unwrap()), 1, "SU(2) {s}");
            assert_eq!(count_of(&component_group(&s, &[], &t2).unwrap()), 4, "T^2 {s}");
        }
        let rep = component_group(&surface(1, 0, 1), &[], &u2).unwrap();
        assert_eq!(rep.target, Some(TargetName::Pi1GMod2Pi1G));
        assert_eq!(rep.component_group.as_ref().unwrap().to_string(), "Z/2");
    }

    #[test]
    fn so3_marked_counts() {
        let so3 = named_model("SO(3)").unwrap();
        // a pi/2 marking on the cover collapses the two components
        let rep = component_group(
            &surface(1, 2, 0),
            &[so3_marking(1, 2), so3_marking(1, 3)],
            &so3,
        )
        .unwrap();
        assert_eq!(count_of(&rep), 1);
        assert_eq!(rep.target, Some(TargetName::Pi1GssModJ));
        // no pi/2 marking keeps both
        let rep2 = component_group(&surface(1, 1, 1), &[so3_marking(1, 4)], &so3).unwrap();
        assert_eq!(count_of(&rep2), 2);
        assert_eq!(rep2.target, Some(TargetName::Pi1GModJprime));
    }

    #[test]
    fn u1_nonemptiness() {
        let u1 = named_model("U(1)").unwrap();
        let marking = MarkingSpec {
            torus: vec![r(1, 2)],
            alcove: KacPoint { factors: vec![] },
        };
        let rep = component_group(&surface(1, 1, 0), std::slice::from_ref(&marking), &u1).unwrap();
        assert_eq!(rep.status, ReportStatus::Empty);
        // the cross-cap kind imposes no condition
        let rep2 = component_group(&surface(1, 1, 1), &[marking], &u1).unwrap();
        assert_eq!(rep2.status, ReportStatus::Ok);
        assert_eq!(count_of(&rep2), 2);
    }

    #[test]
    fn sphere_is_trivial_point() {
        let so3 = named_model("SO(3)").unwrap();
        let rep = component_group(&surface(0, 0, 0), &[], &so3).unwrap();
        assert_eq!(rep.status, ReportStatus::Ok);
        assert!(rep.trivial_surface);
        assert_eq!(count_of(&rep), 1);
        assert_eq!(rep.target, None);
        // the sphere only carries flat connections on the trivial class
        let flat = rep.flat_bundle.unwrap();
        assert_eq!(flat.flat_admitting, BigUint::one());
    }

    #[test]
    fn flat_bundle_summaries() {
        let u1 = named_model("U(1)").unwrap();
        let f = flat_bundle_report(&surface(1, 0, 0), &u1).unwrap();
        assert_eq!(f.h2.to_string(), "Z");
        assert_eq!(f.flat_admitting, BigUint::one());
        assert!(f.moduli_connected);

        let so3 = named_model("SO(3)").unwrap();
        let f2 = flat_bundle_report(&surface(2, 0, 0), &so3).unwrap();
        assert_eq!(f2.h2.to_string(), "Z/2");
        assert_eq!(f2.flat_admitting, BigUint::from(2u8));

        let f3 = flat_bundle_report(&surface(1, 0, 1), &so3).unwrap();
        assert_eq!(f3.h2.to_string(), "Z/2");
        assert_eq!(f3.flat_admitting, BigUint::from(2u8));
        assert!(f3.moduli_connected);

        assert!(flat_bundle_report(&surface(1, 1, 0), &so3).is_err());
    }

    #[test]
    fn marking_count_must_match_boundary() {
        let so3 = named_model("SO(3)").unwrap();
        assert!(component_group(&surface(1, 2, 0), &[so3_marking(1, 4)], &so3).is_err());
    }

    #[test]
    fn identity_markings_do_not_change_counts() {
        for name in ["SO(3)", "U(2)", "PSU(3)"] {
            let model = named_model(name).unwrap();
            let closed = component_group(&surface(2, 0, 0), &[], &model).unwrap();
            let marked = component_group(
                &surface(2, 1, 0),
                &[MarkingSpec::identity(model.torus_rank(), model.diagrams())],
                &model,
            )
            .unwrap();
            assert_eq!(closed.count, marked.count, "{name}");
        }
    }

    #[test]
    fn so_n_nonorientable_equals_orientable() {
        for n in 3..=8 {
            let model = named_model(&format!("SO({n})")).unwrap();
            let o = component_group(&surface(2, 0, 0), &[], &model).unwrap();
            let no = component_group(&surface(2, 0, 1), &[], &model).unwrap();
            assert_eq!(o.count, no.count, "SO({n})");
        }
    }
}
