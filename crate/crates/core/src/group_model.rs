//! Builds a compact connected Lie group from its covering data: simple
//! factors, a central torus rank, and generators of the covering kernel
//! inside `Z^t x Z(semisimple part)`. Derives the fundamental groups of the
//! group and of its commutator subgroup, the free quotient lattice, and the
//! order of the intersection of the central torus with the semisimple part.
//!
//! Coordinates: the torus lattice is `Z^t`, chosen so that the free
//! quotient lattice is a finite-index sublattice of `Z^t`. Only the span of
//! the kernel generators' lattice parts matters; the ambient basis is a
//! convention.

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;

use crate::abelian::FgAbelianGroup;
use crate::conjugacy::CenterElement;
use crate::error::{Error, Result};
use crate::intmat::{left_kernel, smith_normal_form, IntMatrix};
use crate::root_data::{center_group, extended_diagram, CartanType, CenterGroup, ExtendedDiagram, Family};

/// One generator of the covering kernel: a lattice coordinate in `Z^t` and
/// a central element of the semisimple part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelGen {
    pub lattice: Vec<BigInt>,
    pub central: CenterElement,
}

/// Input data for a compact connected group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompactGroupSpec {
    pub factors: Vec<CartanType>,
    pub torus_rank: usize,
    pub kernel_gens: Vec<KernelGen>,
}

impl CompactGroupSpec {
    pub fn semisimple(factors: Vec<CartanType>) -> Self {
        CompactGroupSpec {
            factors,
            torus_rank: 0,
            kernel_gens: Vec::new(),
        }
    }

    pub fn torus(rank: usize) -> Self {
        let gens = (0..rank)
            .map(|i| {
                let mut lattice = vec![BigInt::zero(); rank];
                lattice[i] = BigInt::from(1);
                KernelGen {
                    lattice,
                    central: CenterElement { parts: Vec::new() },
                }
            })
            .collect();
        CompactGroupSpec {
            factors: Vec::new(),
            torus_rank: rank,
            kernel_gens: gens,
        }
    }
}

/// A compact connected group with its derived covering data.
#[derive(Clone, Debug)]
pub struct CompactGroupModel {
    spec: CompactGroupSpec,
    display_name: Option<String>,
    diagrams: Vec<ExtendedDiagram>,
    centers: Vec<CenterGroup>,
    center_ambient: FgAbelianGroup,
    /// Fundamental group of G on one coordinate per kernel generator.
    pi1_g: FgAbelianGroup,
    /// Fundamental group of the commutator subgroup, on the generators below.
    pi1_gss: FgAbelianGroup,
    pi1_gss_gens: Vec<CenterElement>,
    /// Every element of the covering kernel of the semisimple part.
    pi1_gss_elements: Vec<CenterElement>,
    /// Generators of the free quotient lattice inside `Z^t`.
    lambda_check: Vec<Vec<BigInt>>,
    /// Order of the intersection of the central torus with the commutator
    /// subgroup.
    d_order: BigUint,
}

impl CompactGroupModel {
    pub fn spec(&self) -> &CompactGroupSpec {
        &self.spec
    }

    pub fn display_name(&self) -> Option<&str> {
        self.display_name.as_deref()
    }

    pub fn set_display_name(&mut self, name: impl Into<String>) {
        self.display_name = Some(name.into());
    }

    pub fn torus_rank(&self) -> usize {
        self.spec.torus_rank
    }

    pub fn diagrams(&self) -> &[ExtendedDiagram] {
        &self.diagrams
    }

    pub fn centers(&self) -> &[CenterGroup] {
        &self.centers
    }

    pub fn pi1_g(&self) -> &FgAbelianGroup {
        &self.pi1_g
    }

    pub fn pi1_gss(&self) -> &FgAbelianGroup {
        &self.pi1_gss
    }

    pub fn ker_rho_ss_elements(&self) -> &[CenterElement] {
        &self.pi1_gss_elements
    }

    pub fn lambda_check(&self) -> &[Vec<BigInt>] {
        &self.lambda_check
    }

    pub fn d_order(&self) -> &BigUint {
        &self.d_order
    }

    fn factor_node_counts(&self) -> Vec<usize> {
        self.diagrams.iter().map(|d| d.node_count()).collect()
    }

    pub fn center_identity(&self) -> CenterElement {
        CenterElement::identity(&self.factor_node_counts())
    }

    /// Coordinates of a center element in the ambient presentation of the
    /// full center (one block of exponents per simple factor).
    pub fn center_coords(&self, z: &CenterElement) -> Result<Vec<BigInt>> {
        if z.parts.len() != self.centers.len() {
            return Err(Error::StructureMismatch(format!(
                "center element has {} parts, group has {} simple factors",
                z.parts.len(),
                self.centers.len()
            )));
        }
        let mut coords = Vec::new();
        for (c, part) in self.centers.iter().zip(&z.parts) {
            coords.extend(c.coords_of(part)?);
        }
        Ok(coords)
    }

    /// Lattice part of an element of the fundamental group given in
    /// kernel-generator coordinates; the kernel of this projection is
    /// exactly the fundamental group of the commutator subgroup.
    pub fn project_p(&self, element: &[BigInt]) -> Result<Vec<BigInt>> {
        let m = self.spec.kernel_gens.len();
        if element.len() != m {
            return Err(Error::DimensionMismatch(format!(
                "element has {} coordinates, expected {}",
                element.len(),
                m
            )));
        }
        let t = self.spec.torus_rank;
        let mut out = vec![BigInt::zero(); t];
        for (v, gen) in element.iter().zip(&self.spec.kernel_gens) {
            for (o, l) in out.iter_mut().zip(&gen.lattice) {
                *o += v * l;
            }
        }
        Ok(out)
    }

    /// Writes an element of the semisimple covering kernel in the
    /// generators of its presentation.
    pub fn express_in_pi1_gss(&self, z: &CenterElement) -> Result<Vec<BigInt>> {
        let coords = self.center_coords(z)?;
        let gen_coords: Vec<Vec<BigInt>> = self
            .pi1_gss_gens
            .iter()
            .map(|g| self.center_coords(g))
            .collect::<Result<_>>()?;
        self.center_ambient
            .express_in_gens(&gen_coords, &coords)?
            .ok_or_else(|| {
                Error::Internal("center element lies outside the semisimple covering kernel".into())
            })
    }

    /// Writes a semisimple covering-kernel element in kernel-generator
    /// coordinates, i.e. embeds it into the fundamental group of G with
    /// zero lattice part.
    pub fn embed_in_pi1_g(&self, z: &CenterElement) -> Result<Vec<BigInt>> {
        let t = self.spec.torus_rank;
        let mut target = vec![BigInt::zero(); t];
        target.extend(self.center_coords(z)?);
        let gens = self.full_kernel_gen_rows()?;
        let ambient = self.ambient_group()?;
        ambient.express_in_gens(&gens, &target)?.ok_or_else(|| {
            Error::Internal("semisimple kernel element missing from the covering kernel".into())
        })
    }

    fn full_kernel_gen_rows(&self) -> Result<Vec<Vec<BigInt>>> {
        self.spec
            .kernel_gens
            .iter()
            .map(|g| {
                let mut row = g.lattice.clone();
                row.extend(self.center_coords(&g.central)?);
                Ok(row)
            })
            .collect()
    }

    /// `Z^t x Z(semisimple)` with the center relations padded by zero
    /// lattice columns.
    fn ambient_group(&self) -> Result<FgAbelianGroup> {
        let t = self.spec.torus_rank;
        let c = self.center_ambient.ambient_rank();
        let rel_rows: Vec<Vec<BigInt>> = self
            .center_ambient
            .relations()
            .all_rows()
            .into_iter()
            .map(|r| {
                let mut row = vec![BigInt::zero(); t];
                row.extend(r);
                row
            })
            .collect();
        FgAbelianGroup::from_relation_rows(t + c, &rel_rows)
    }
}

/// Builds the model and verifies the covering exact sequence: the
/// fundamental group of G has free rank t and its torsion is isomorphic to
/// the fundamental group of the commutator subgroup.
pub fn build_model(spec: CompactGroupSpec) -> Result<CompactGroupModel> {
    let diagrams: Vec<ExtendedDiagram> = spec.factors.iter().map(|&t| extended_diagram(t)).collect();
    let centers: Vec<CenterGroup> = spec
        .factors
        .iter()
        .map(|&t| center_group(t))
        .collect::<Result<_>>()?;

    let t = spec.torus_rank;
    let m = spec.kernel_gens.len();
    for (k, gen) in spec.kernel_gens.iter().enumerate() {
        if gen.lattice.len() != t {
            return Err(Error::StructureMismatch(format!(
                "kernel generator {k}: lattice part has length {}, torus rank is {t}",
                gen.lattice.len()
            )));
        }
        if gen.central.parts.len() != centers.len() {
            return Err(Error::StructureMismatch(format!(
                "kernel generator {k}: central part has {} factors, group has {}",
                gen.central.parts.len(),
                centers.len()
            )));
        }
        for (f, (part, center)) in gen.central.parts.iter().zip(&centers).enumerate() {
            if !center.contains(part) {
                return Err(Error::StructureMismatch(format!(
                    "kernel generator {k}, factor {f}: permutation is not a special automorphism"
                )));
            }
        }
    }

    let center_orders: Vec<BigUint> = centers
        .iter()
        .flat_map(|c| (0..c.generator_count()).map(|k| BigUint::from(c.generator(k).order())))
        .collect();
    let center_ambient = FgAbelianGroup::diagonal(&center_orders);

    let model_seed = CompactGroupModel {
        spec,
        display_name: None,
        diagrams,
        centers,
        center_ambient,
        pi1_g: FgAbelianGroup::trivial(),
        pi1_gss: FgAbelianGroup::trivial(),
        pi1_gss_gens: Vec::new(),
        pi1_gss_elements: Vec::new(),
        lambda_check: Vec::new(),
        d_order: BigUint::from(1u8),
    };
    finish_model(model_seed, t, m)
}

fn finish_model(
    mut model: CompactGroupModel,
    t: usize,
    m: usize,
) -> Result<CompactGroupModel> {
    // Lattice-part matrix L (m x t) and compactness.
    let lattice_rows: Vec<Vec<BigInt>> = model
        .spec
        .kernel_gens
        .iter()
        .map(|g| g.lattice.clone())
        .collect();
    let lattice_matrix = IntMatrix::from_rows(&lattice_rows, t)?;
    let lattice_rank = smith_normal_form(&lattice_matrix).rank;
    if lattice_rank != t {
        return Err(Error::NotCompact {
            found: lattice_rank,
            expected: t,
        });
    }
    model.lambda_check = lattice_rows.clone();

    // pi1(G): the subgroup of Z^t x Z(ss) generated by the kernel generators.
    let gens_full = model.full_kernel_gen_rows()?;
    let ambient = model.ambient_group()?;
    model.pi1_g = ambient.subgroup_presentation(&gens_full)?;

    // pi1(Gss): combinations with vanishing lattice part.
    let lattice_kernel = left_kernel(&lattice_matrix);
    let node_counts: Vec<usize> = model.diagrams.iter().map(|d| d.node_count()).collect();
    let mut gss_gens: Vec<CenterElement> = Vec::new();
    for combo in &lattice_kernel {
        let mut z = CenterElement::identity(&node_counts);
        for (v, gen) in combo.iter().zip(&model.spec.kernel_gens) {
            z = z.compose(&gen.central.pow(v));
        }
        gss_gens.push(z);
    }
    let gen_coords: Vec<Vec<BigInt>> = gss_gens
        .iter()
        .map(|z| model.center_coords(z))
        .collect::<Result<_>>()?;
    model.pi1_gss = model.center_ambient.subgroup_presentation(&gen_coords)?;
    model.pi1_gss_elements = enumerate_subgroup(&node_counts, &gss_gens);
    model.pi1_gss_gens = gss_gens;

    // Exact sequence checks.
    let pi1_g_iso = model.pi1_g.iso_type();
    if pi1_g_iso.free_rank != t {
        return Err(Error::Internal(format!(
            "fundamental group has free rank {}, torus rank is {t}",
            pi1_g_iso.free_rank
        )));
    }
    let gss_iso = model.pi1_gss.iso_type();
    if pi1_g_iso.torsion != gss_iso.torsion {
        return Err(Error::Internal(format!(
            "torsion {} of the fundamental group differs from the semisimple part {}",
            pi1_g_iso, gss_iso
        )));
    }
    let listed = BigUint::from(model.pi1_gss_elements.len());
    if gss_iso.order() != Some(listed.clone()) {
        return Err(Error::Internal(format!(
            "semisimple kernel presentation has order {:?}, element list has {listed}",
            gss_iso.order()
        )));
    }

    // D order: index of the projected pure-lattice part inside the full
    // lattice span, both written on the kernel generators.
    let center_cols = model.center_ambient.ambient_rank();
    let central_rows: Vec<Vec<BigInt>> = model
        .spec
        .kernel_gens
        .iter()
        .map(|g| model.center_coords(&g.central))
        .collect::<Result<_>>()?;
    let central_matrix = IntMatrix::from_rows(&central_rows, center_cols)?;
    let stacked = central_matrix.vstack(model.center_ambient.relations())?;
    let central_kernel: Vec<Vec<BigInt>> = left_kernel(&stacked)
        .into_iter()
        .map(|k| k[..m].to_vec())
        .collect();
    let mut d_relations = left_kernel(&lattice_matrix);
    d_relations.extend(central_kernel);
    let d_quotient = FgAbelianGroup::from_relation_rows(m, &d_relations)?;
    model.d_order = d_quotient
        .order()
        .ok_or_else(|| Error::Internal("torus/semisimple intersection is infinite".into()))?;

    Ok(model)
}

/// Enumerates the subgroup of the (finite) center generated by the given
/// elements; the identity always belongs to the result.
fn enumerate_subgroup(node_counts: &[usize], gens: &[CenterElement]) -> Vec<CenterElement> {
    let mut elements = vec![CenterElement::identity(node_counts)];
    let mut frontier = elements.clone();
    while let Some(z) = frontier.pop() {
        for g in gens {
            let next = z.compose(g);
            if !elements.contains(&next) {
                elements.push(next.clone());
                frontier.push(next);
            }
        }
    }
    elements
}

/// Specs for the classical named groups; accepts `SU(n)`, `Spin(n)`,
/// `Sp(n)`, `SO(n)`, `U(n)`, `PSU(n)`, `T^k`, and products joined by `x`
/// or the times sign.
pub fn named_group(name: &str) -> Result<CompactGroupSpec> {
    let parts: Vec<&str> = name.split(['x', 'X', '×']).collect();
    if parts.len() > 1 {
        let specs: Vec<CompactGroupSpec> = parts
            .iter()
            .map(|p| named_atom(p.trim()))
            .collect::<Result<_>>()?;
        return Ok(product_spec(&specs));
    }
    named_atom(name.trim())
}

fn named_atom(name: &str) -> Result<CompactGroupSpec> {
    let upper = name.to_ascii_uppercase();
    let arg = |prefix: &str| -> Option<std::result::Result<usize, ()>> {
        upper.strip_prefix(prefix).map(|rest| {
            let inner = rest
                .trim()
                .trim_start_matches(['(', '^'])
                .trim_end_matches(')');
            inner.trim().parse::<usize>().map_err(|_| ())
        })
    };
    let parse = |prefix: &str| -> Option<Result<usize>> {
        arg(prefix).map(|r| r.map_err(|_| Error::UnknownGroup(name.to_string())))
    };

    if let Some(n) = parse("SPIN") {
        return spin_spec(n?, name);
    }
    if let Some(n) = parse("PSU") {
        return psu_spec(n?, name);
    }
    if let Some(n) = parse("SU") {
        return su_spec(n?, name);
    }
    if let Some(n) = parse("SO") {
        return so_spec(n?, name);
    }
    if let Some(n) = parse("SP") {
        return sp_spec(n?, name);
    }
    if let Some(n) = parse("U") {
        return u_spec(n?, name);
    }
    if let Some(k) = parse("T") {
        return Ok(CompactGroupSpec::torus(k?));
    }
    Err(Error::UnknownGroup(name.to_string()))
}

fn spin_factors(n: usize, name: &str) -> Result<Vec<CartanType>> {
    match n {
        0..=2 => Err(Error::UnknownGroup(format!("{name}: rank out of range"))),
        3 => Ok(vec![CartanType::new(Family::A, 1)?]),
        4 => Ok(vec![
            CartanType::new(Family::A, 1)?,
            CartanType::new(Family::A, 1)?,
        ]),
        5 => Ok(vec![CartanType::new(Family::B, 2)?]),
        6 => Ok(vec![CartanType::new(Family::A, 3)?]),
        n if n % 2 == 1 => Ok(vec![CartanType::new(Family::B, (n - 1) / 2)?]),
        n => Ok(vec![CartanType::new(Family::D, n / 2)?]),
    }
}

fn su_spec(n: usize, name: &str) -> Result<CompactGroupSpec> {
    if n < 2 {
        return Err(Error::UnknownGroup(format!("{name}: need n >= 2")));
    }
    Ok(CompactGroupSpec::semisimple(vec![CartanType::new(
        Family::A,
        n - 1,
    )?]))
}

fn spin_spec(n: usize, name: &str) -> Result<CompactGroupSpec> {
    Ok(CompactGroupSpec::semisimple(spin_factors(n, name)?))
}

fn sp_spec(n: usize, name: &str) -> Result<CompactGroupSpec> {
    let factors = match n {
        0 => return Err(Error::UnknownGroup(format!("{name}: need n >= 1"))),
        1 => vec![CartanType::new(Family::A, 1)?],
        2 => vec![CartanType::new(Family::B, 2)?],
        n => vec![CartanType::new(Family::C, n)?],
    };
    Ok(CompactGroupSpec::semisimple(factors))
}

/// `SO(n)` as the spin group modulo the vector central element.
fn so_spec(n: usize, name: &str) -> Result<CompactGroupSpec> {
    let factors = spin_factors(n, name)?;
    let parts = factors
        .iter()
        .map(|&t| Ok(center_group(t)?.vector_involution()?.clone()))
        .collect::<Result<Vec<_>>>()?;
    Ok(CompactGroupSpec {
        factors,
        torus_rank: 0,
        kernel_gens: vec![KernelGen {
            lattice: Vec::new(),
            central: CenterElement { parts },
        }],
    })
}

fn u_spec(n: usize, name: &str) -> Result<CompactGroupSpec> {
    match n {
        0 => Err(Error::UnknownGroup(format!("{name}: need n >= 1"))),
        1 => Ok(CompactGroupSpec::torus(1)),
        n => {
            let t = CartanType::new(Family::A, n - 1)?;
            let center = center_group(t)?;
            Ok(CompactGroupSpec {
                factors: vec![t],
                torus_rank: 1,
                kernel_gens: vec![KernelGen {
                    lattice: vec![BigInt::from(1)],
                    central: CenterElement {
                        parts: vec![center.generator(0).clone()],
                    },
                }],
            })
        }
    }
}

fn psu_spec(n: usize, name: &str) -> Result<CompactGroupSpec> {
    if n < 2 {
        return Err(Error::UnknownGroup(format!("{name}: need n >= 2")));
    }
    let t = CartanType::new(Family::A, n - 1)?;
    let center = center_group(t)?;
    let gens = (0..center.generator_count())
        .map(|k| KernelGen {
            lattice: Vec::new(),
            central: CenterElement {
                parts: vec![center.generator(k).clone()],
            },
        })
        .collect();
    Ok(CompactGroupSpec {
        factors: vec![t],
        torus_rank: 0,
        kernel_gens: gens,
    })
}

/// Direct product: factors concatenate, torus ranks add, and each kernel
/// generator is padded with zero lattice coordinates and identity central
/// parts in the other factors.
pub fn product_spec(specs: &[CompactGroupSpec]) -> CompactGroupSpec {
    let total_t: usize = specs.iter().map(|s| s.torus_rank).sum();
    let mut factors = Vec::new();
    let mut kernel_gens: Vec<KernelGen> = Vec::new();
    let all_node_counts: Vec<Vec<usize>> = specs
        .iter()
        .map(|s| s.factors.iter().map(|t| t.rank() + 1).collect())
        .collect();
    let mut torus_offset = 0usize;
    for (si, s) in specs.iter().enumerate() {
        factors.extend(s.factors.iter().copied());
        for gen in &s.kernel_gens {
            let mut lattice = vec![BigInt::zero(); total_t];
            for (j, v) in gen.lattice.iter().enumerate() {
                lattice[torus_offset + j] = v.clone();
            }
            let mut parts = Vec::new();
            for (oi, counts) in all_node_counts.iter().enumerate() {
                if oi == si {
                    parts.extend(gen.central.parts.iter().cloned());
                } else {
                    parts.extend(
                        counts
                            .iter()
                            .map(|&c| crate::root_data::SpecialAutomorphism::identity(c)),
                    );
                }
            }
            kernel_gens.push(KernelGen {
                lattice,
                central: CenterElement { parts },
            });
        }
        torus_offset += s.torus_rank;
    }
    CompactGroupSpec {
        factors,
        torus_rank: total_t,
        kernel_gens,
    }
}

/// Convenience: build a model straight from a name.
pub fn named_model(name: &str) -> Result<CompactGroupModel> {
    let mut model = build_model(named_group(name)?)?;
    model.set_display_name(name.trim());
    Ok(model)
}
