//! Cartan matrices, extended Dynkin diagrams with their marks, and the
//! center of a simply connected simple compact group realized as the group
//! of special diagram automorphisms.
//!
//! Conventions: finite nodes carry Bourbaki numbering 1..=n and node 0 is
//! the affine node. The pairing is `A[i][j] = 2(a_i, a_j) / (a_i, a_i)`, so
//! the marks vector (coefficients of the highest root, extended by
//! `a_0 = 1`) is a right null vector of the extended matrix:
//! `sum_j A[i][j] * a_j = 0` for every row `i`. That identity is checked at
//! construction for every type, which pins down the orientation of all
//! multiple bonds.
//!
//! The center is not transcribed from tables. Each mark-1 node `j`
//! determines a translation of the fundamental alcove by the j-th
//! fundamental coweight; reducing back into the alcove through affine
//! reflections yields a permutation of Kac coordinates. Those permutations
//! are the special automorphisms, and the construction is cross-checked
//! against `|center| = |det(Cartan)|`, closure, and simple transitivity on
//! the mark-1 nodes.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::abelian::FgAbelianGroup;
use crate::error::{Error, Result};
use crate::intmat::IntMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    pub fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        }
    }
}

/// A simple type `X_n` with the rank constraints
/// A: n>=1, B: n>=2, C: n>=3, D: n>=4, E: n in {6,7,8}, F: n=4, G: n=2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CartanType {
    family: Family,
    rank: usize,
}

impl CartanType {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::B => rank >= 2,
            Family::C => rank >= 3,
            Family::D => rank >= 4,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if ok {
            Ok(CartanType { family, rank })
        } else {
            Err(Error::InvalidCartanType(format!(
                "{}{}",
                family.letter(),
                rank
            )))
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Parses "A1", "d4", "E8" (case-insensitive).
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars();
        let fam = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => Family::A,
            Some('B') => Family::B,
            Some('C') => Family::C,
            Some('D') => Family::D,
            Some('E') => Family::E,
            Some('F') => Family::F,
            Some('G') => Family::G,
            _ => return Err(Error::InvalidCartanType(s.to_string())),
        };
        let rank: usize = chars
            .as_str()
            .parse()
            .map_err(|_| Error::InvalidCartanType(s.to_string()))?;
        CartanType::new(fam, rank)
    }
}

impl std::fmt::Display for CartanType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}{}", self.family.letter(), self.rank)
    }
}

/// Bonds of the extended diagram: `(i, j, A[i][j], A[j][i])`.
fn extended_bonds(t: CartanType) -> Vec<(usize, usize, i64, i64)> {
    let n = t.rank;
    let mut bonds: Vec<(usize, usize, i64, i64)> = Vec::new();
    let chain = |bonds: &mut Vec<_>, from: usize, to: usize| {
        for i in from..to {
            bonds.push((i, i + 1, -1, -1));
        }
    };
    match t.family {
        Family::A => {
            if n == 1 {
                bonds.push((0, 1, -2, -2));
            } else {
                chain(&mut bonds, 1, n);
                bonds.push((0, 1, -1, -1));
                bonds.push((0, n, -1, -1));
            }
        }
        Family::B => {
            if n == 2 {
                bonds.push((1, 2, -1, -2));
                bonds.push((0, 2, -1, -2));
            } else {
                chain(&mut bonds, 1, n - 1);
                bonds.push((n - 1, n, -1, -2));
                bonds.push((0, 2, -1, -1));
            }
        }
        Family::C => {
            chain(&mut bonds, 1, n - 1);
            bonds.push((n - 1, n, -2, -1));
            bonds.push((0, 1, -1, -2));
        }
        Family::D => {
            chain(&mut bonds, 1, n - 1);
            bonds.push((n - 2, n, -1, -1));
            bonds.push((0, 2, -1, -1));
        }
        Family::E => {
            // Bourbaki: chain 1-3-4-5-..., node 2 attached to node 4
            bonds.push((1, 3, -1, -1));
            bonds.push((3, 4, -1, -1));
            bonds.push((2, 4, -1, -1));
            chain(&mut bonds, 4, n);
            let affine_to = match n {
                6 => 2,
                7 => 1,
                _ => 8,
            };
            bonds.push((0, affine_to, -1, -1));
        }
        Family::F => {
            bonds.push((1, 2, -1, -1));
            bonds.push((2, 3, -1, -2));
            bonds.push((3, 4, -1, -1));
            bonds.push((0, 1, -1, -1));
        }
        Family::G => {
            bonds.push((1, 2, -3, -1));
            bonds.push((0, 2, -1, -1));
        }
    }
    bonds
}

fn marks_table(t: CartanType) -> Vec<i64> {
    let n = t.rank;
    match t.family {
        Family::A => vec![1; n + 1],
        Family::B => {
            let mut m = vec![2; n + 1];
            m[0] = 1;
            m[1] = 1;
            m
        }
        Family::C => {
            let mut m = vec![2; n + 1];
            m[0] = 1;
            m[n] = 1;
            m
        }
        Family::D => {
            let mut m = vec![2; n + 1];
            m[0] = 1;
            m[1] = 1;
            m[n - 1] = 1;
            m[n] = 1;
            m
        }
        Family::E => match n {
            6 => vec![1, 1, 2, 2, 3, 2, 1],
            7 => vec![1, 2, 2, 3, 4, 3, 2, 1],
            _ => vec![1, 2, 3, 4, 6, 5, 4, 3, 2],
        },
        Family::F => vec![1, 2, 3, 4, 2],
        Family::G => vec![1, 3, 2],
    }
}

/// Extended Dynkin diagram: nodes 0..=n, the (n+1)x(n+1) extended Cartan
/// matrix, and the marks `a_0..a_n` with `a_0 = 1`.
#[derive(Clone, Debug)]
pub struct ExtendedDiagram {
    cartan_type: CartanType,
    ext: IntMatrix,
    marks: Vec<i64>,
}

impl ExtendedDiagram {
    pub fn cartan_type(&self) -> CartanType {
        self.cartan_type
    }

    pub fn node_count(&self) -> usize {
        self.marks.len()
    }

    pub fn extended_cartan(&self) -> &IntMatrix {
        &self.ext
    }

    pub fn marks(&self) -> &[i64] {
        &self.marks
    }

    pub fn special_nodes(&self) -> Vec<usize> {
        (0..self.marks.len()).filter(|&i| self.marks[i] == 1).collect()
    }

    /// Entry of the finite Cartan matrix, 1-based Bourbaki indices.
    fn finite_entry(&self, i: usize, j: usize) -> i64 {
        int_to_i64(self.ext.at(i, j))
    }
}

fn int_to_i64(v: &BigInt) -> i64 {
    i64::try_from(v).expect("diagram entry fits i64")
}

/// The n x n Cartan matrix in Bourbaki numbering.
pub fn cartan_matrix(t: CartanType) -> IntMatrix {
    let ext = extended_diagram(t);
    let n = t.rank;
    let mut m = IntMatrix::zero(n, n);
    for i in 1..=n {
        for j in 1..=n {
            m.set(i - 1, j - 1, ext.ext.at(i, j).clone());
        }
    }
    m
}

/// Builds the extended diagram and verifies the marks null-vector identity
/// for every row; a violation is a table bug and panics.
pub fn extended_diagram(t: CartanType) -> ExtendedDiagram {
    let n = t.rank;
    let mut ext = IntMatrix::zero(n + 1, n + 1);
    for i in 0..=n {
        ext.set(i, i, BigInt::from(2));
    }
    for (i, j, aij, aji) in extended_bonds(t) {
        ext.set(i, j, BigInt::from(aij));
        ext.set(j, i, BigInt::from(aji));
    }
    let marks = marks_table(t);
    assert_eq!(marks[0], 1, "{t}: affine mark must be 1");
    for i in 0..=n {
        let mut s = BigInt::zero();
        for j in 0..=n {
            s += ext.at(i, j) * BigInt::from(marks[j]);
        }
        assert!(
            s.is_zero(),
            "{t}: extended Cartan row {i} does not annihilate the marks"
        );
    }
    ExtendedDiagram {
        cartan_type: t,
        ext,
        marks,
    }
}

/// A permutation of the nodes 0..=n of an extended diagram that preserves
/// the extended Cartan matrix and the marks.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SpecialAutomorphism {
    perm: Vec<usize>,
}

impl SpecialAutomorphism {
    pub fn identity(node_count: usize) -> Self {
        SpecialAutomorphism {
            perm: (0..node_count).collect(),
        }
    }

    pub fn from_perm(perm: Vec<usize>) -> Self {
        SpecialAutomorphism { perm }
    }

    pub fn node_count(&self) -> usize {
        self.perm.len()
    }

    pub fn apply(&self, node: usize) -> usize {
        self.perm[node]
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p)
    }

    /// `self` after `other`: `(self * other)(i) = self(other(i))`.
    pub fn compose(&self, other: &SpecialAutomorphism) -> SpecialAutomorphism {
        assert_eq!(self.perm.len(), other.perm.len());
        SpecialAutomorphism {
            perm: other.perm.iter().map(|&i| self.perm[i]).collect(),
        }
    }

    pub fn inverse(&self) -> SpecialAutomorphism {
        let mut inv = vec![0; self.perm.len()];
        for (i, &p) in self.perm.iter().enumerate() {
            inv[p] = i;
        }
        SpecialAutomorphism { perm: inv }
    }

    pub fn order(&self) -> usize {
        let mut acc = self.clone();
        let mut k = 1;
        while !acc.is_identity() {
            acc = acc.compose(self);
            k += 1;
            assert!(k <= self.perm.len() * self.perm.len(), "order runaway");
        }
        k
    }

    fn preserves(&self, d: &ExtendedDiagram) -> bool {
        let n = d.node_count();
        if self.perm.len() != n {
            return false;
        }
        for i in 0..n {
            if d.marks[self.perm[i]] != d.marks[i] {
                return false;
            }
            for j in 0..n {
                if d.ext.at(self.perm[i], self.perm[j]) != d.ext.at(i, j) {
                    return false;
                }
            }
        }
        true
    }
}

fn rat(n: i64, d: &BigInt) -> BigRational {
    BigRational::new(BigInt::from(n), d.clone())
}

/// Kac coordinates of a generic alcove point with pairwise-distinct values:
/// `s_i = w_i / sum_k a_k w_k` for positive, pairwise-distinct weights.
fn generic_kac(d: &ExtendedDiagram, weights: &[i64]) -> Vec<BigRational> {
    let total: BigInt = d
        .marks
        .iter()
        .zip(weights)
        .map(|(&a, &w)| BigInt::from(a) * BigInt::from(w))
        .sum();
    weights.iter().map(|&w| rat(w, &total)).collect()
}

/// Acts on an alcove point by the center element attached to mark-1 node
/// `j`: translate by the j-th fundamental coweight, then reflect back into
/// the fundamental alcove. Coordinates `y_k = alpha_k(y)` live in the
/// fundamental-coweight basis, where the reflection in wall `alpha_k = 0`
/// is `y -= y_k * CartanRow(k)` and the reflection in the affine wall
/// `theta = 1` is `y -= (theta(y) - 1) * theta_dual`, with `theta_dual`
/// read off the affine row of the extended matrix.
fn translate_and_reduce(d: &ExtendedDiagram, j: usize, kac: &[BigRational]) -> Vec<BigRational> {
    let n = d.node_count() - 1;
    let mut y: Vec<BigRational> = kac[1..].to_vec();
    y[j - 1] += BigRational::one();

    let theta_dual: Vec<BigInt> = (1..=n).map(|k| -d.ext.at(0, k)).collect();
    let one = BigRational::one();
    let mut steps = 0usize;
    loop {
        steps += 1;
        assert!(steps < 100_000, "alcove reduction failed to terminate");
        if let Some(k) = (0..n).find(|&k| y[k] < BigRational::zero()) {
            let yk = y[k].clone();
            for m in 0..n {
                let c = BigRational::from(BigInt::from(d.finite_entry(k + 1, m + 1)));
                y[m] -= &yk * c;
            }
            continue;
        }
        let theta: BigRational = (0..n)
            .map(|k| &y[k] * BigRational::from(BigInt::from(d.marks[k + 1])))
            .sum();
        if theta > one {
            let excess = &theta - &one;
            for m in 0..n {
                y[m] -= &excess * BigRational::from(theta_dual[m].clone());
            }
            continue;
        }
        break;
    }

    let theta: BigRational = (0..n)
        .map(|k| &y[k] * BigRational::from(BigInt::from(d.marks[k + 1])))
        .sum();
    let mut out = Vec::with_capacity(n + 1);
    out.push(&one - &theta);
    out.extend(y);
    out
}

/// Extracts the node permutation from the action on one generic point:
/// `out[perm[i]] = in[i]`.
fn permutation_between(input: &[BigRational], output: &[BigRational]) -> Result<Vec<usize>> {
    let n = input.len();
    let mut perm = vec![usize::MAX; n];
    for i in 0..n {
        let mut hit = None;
        for (k, o) in output.iter().enumerate() {
            if *o == input[i] {
                if hit.is_some() {
                    return Err(Error::Internal(
                        "generic alcove point has repeated Kac coordinates".into(),
                    ));
                }
                hit = Some(k);
            }
        }
        perm[i] = hit.ok_or_else(|| {
            Error::Internal("center action did not permute the Kac coordinates".into())
        })?;
    }
    Ok(perm)
}

fn special_automorphism_at(d: &ExtendedDiagram, j: usize) -> Result<SpecialAutomorphism> {
    let n = d.node_count() - 1;
    let weights_a: Vec<i64> = (0..=n as i64).map(|i| i + 1).collect();
    let weights_b: Vec<i64> = (0..=n as i64).map(|i| (i + 1) * (i + 1) + 1).collect();

    let kac_a = generic_kac(d, &weights_a);
    let out_a = translate_and_reduce(d, j, &kac_a);
    let perm = permutation_between(&kac_a, &out_a)?;

    // second generic point must induce the same permutation
    let kac_b = generic_kac(d, &weights_b);
    let out_b = translate_and_reduce(d, j, &kac_b);
    let perm_b = permutation_between(&kac_b, &out_b)?;
    if perm != perm_b {
        return Err(Error::Internal(format!(
            "{}: center action at node {j} is not a coordinate permutation",
            d.cartan_type
        )));
    }

    let sigma = SpecialAutomorphism::from_perm(perm);
    if sigma.apply(0) != j {
        return Err(Error::Internal(format!(
            "{}: special automorphism at node {j} sends 0 to {}",
            d.cartan_type,
            sigma.apply(0)
        )));
    }
    if !sigma.preserves(d) {
        return Err(Error::Internal(format!(
            "{}: center action at node {j} does not preserve the diagram",
            d.cartan_type
        )));
    }
    Ok(sigma)
}

/// The center of the simply connected compact group of the given type,
/// carried by its special automorphisms together with an abelian-group
/// presentation and coordinates for every element.
#[derive(Clone, Debug)]
pub struct CenterGroup {
    cartan_type: CartanType,
    special_nodes: Vec<usize>,
    /// `elements[k]` sends node 0 to `special_nodes[k]`; index 0 is the identity.
    elements: Vec<SpecialAutomorphism>,
    /// Indices into `elements` of the presentation generators.
    generators: Vec<usize>,
    presentation: FgAbelianGroup,
    /// Exponent coordinates of each element over the generators.
    coords: Vec<Vec<BigInt>>,
}

impl CenterGroup {
    pub fn cartan_type(&self) -> CartanType {
        self.cartan_type
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[SpecialAutomorphism] {
        &self.elements
    }

    pub fn special_nodes(&self) -> &[usize] {
        &self.special_nodes
    }

    pub fn presentation(&self) -> &FgAbelianGroup {
        &self.presentation
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    pub fn generator(&self, k: usize) -> &SpecialAutomorphism {
        &self.elements[self.generators[k]]
    }

    pub fn identity(&self) -> &SpecialAutomorphism {
        &self.elements[0]
    }

    pub fn index_of(&self, sigma: &SpecialAutomorphism) -> Option<usize> {
        self.elements.iter().position(|e| e == sigma)
    }

    pub fn contains(&self, sigma: &SpecialAutomorphism) -> bool {
        self.index_of(sigma).is_some()
    }

    /// The element whose automorphism sends node 0 to the mark-1 node `j`.
    pub fn by_special_node(&self, j: usize) -> Result<&SpecialAutomorphism> {
        let k = self
            .special_nodes
            .iter()
            .position(|&s| s == j)
            .ok_or_else(|| {
                Error::StructureMismatch(format!(
                    "{}: node {j} is not a mark-1 node",
                    self.cartan_type
                ))
            })?;
        Ok(&self.elements[k])
    }

    /// Exponent coordinates of an element over the presentation generators.
    pub fn coords_of(&self, sigma: &SpecialAutomorphism) -> Result<Vec<BigInt>> {
        let idx = self.index_of(sigma).ok_or_else(|| {
            Error::StructureMismatch(format!(
                "{}: permutation is not a special automorphism",
                self.cartan_type
            ))
        })?;
        Ok(self.coords[idx].clone())
    }

    /// So(n)-style vector element: the unique involution, disambiguated by
    /// "sends node 0 to node 1" when the center is Klein (D with even rank).
    pub fn vector_involution(&self) -> Result<&SpecialAutomorphism> {
        let invs: Vec<&SpecialAutomorphism> = self
            .elements
            .iter()
            .filter(|e| !e.is_identity() && e.compose(e).is_identity())
            .collect();
        match invs.len() {
            1 => Ok(invs[0]),
            0 => Err(Error::StructureMismatch(format!(
                "{}: center has no involution",
                self.cartan_type
            ))),
            _ => invs
                .into_iter()
                .find(|e| e.apply(0) == 1)
                .ok_or_else(|| {
                    Error::Internal(format!(
                        "{}: no involution exchanges nodes 0 and 1",
                        self.cartan_type
                    ))
                }),
        }
    }
}

/// Computes the center group of the given type; the cardinality is checked
/// against `|det(Cartan)|` and any mismatch is reported as an internal
/// consistency failure.
pub fn center_group(t: CartanType) -> Result<CenterGroup> {
    let d = extended_diagram(t);
    let special_nodes = d.special_nodes();
    let mut elements = vec![SpecialAutomorphism::identity(d.node_count())];
    for &j in &special_nodes {
        if j == 0 {
            continue;
        }
        elements.push(special_automorphism_at(&d, j)?);
    }

    // closure and commutativity
    for a in &elements {
        for b in &elements {
            let ab = a.compose(b);
            if !elements.contains(&ab) {
                return Err(Error::Internal(format!(
                    "{t}: special automorphisms are not closed under composition"
                )));
            }
            if ab != b.compose(a) {
                return Err(Error::Internal(format!(
                    "{t}: special automorphisms do not commute"
                )));
            }
        }
    }

    let det = cartan_matrix(t).abs_det();
    if det != BigInt::from(elements.len()) {
        return Err(Error::Internal(format!(
            "{t}: |center| = {} but |det(Cartan)| = {det}",
            elements.len()
        )));
    }

    let (generators, coords) = presentation_coords(t, &elements)?;
    let orders: Vec<BigUint> = generators
        .iter()
        .map(|&g| BigUint::from(elements[g].order()))
        .collect();
    let presentation = FgAbelianGroup::diagonal(&orders);

    Ok(CenterGroup {
        cartan_type: t,
        special_nodes,
        elements,
        generators,
        presentation,
        coords,
    })
}

/// Picks generators and assigns exponent coordinates to every element.
/// Centers here are cyclic or Klein; anything else is a bug.
fn presentation_coords(
    t: CartanType,
    elements: &[SpecialAutomorphism],
) -> Result<(Vec<usize>, Vec<Vec<BigInt>>)> {
    let n = elements.len();
    if n == 1 {
        return Ok((Vec::new(), vec![Vec::new()]));
    }
    let (gmax, max_order) = (0..n)
        .map(|i| (i, elements[i].order()))
        .max_by_key(|&(_, o)| o)
        .expect("nonempty center");
    if max_order == n {
        // cyclic on a single generator
        let mut coords = vec![Vec::new(); n];
        let mut acc = SpecialAutomorphism::identity(elements[0].node_count());
        for k in 0..n {
            let idx = elements
                .iter()
                .position(|e| *e == acc)
                .ok_or_else(|| Error::Internal(format!("{t}: generator power escaped center")))?;
            coords[idx] = vec![BigInt::from(k)];
            acc = acc.compose(&elements[gmax]);
        }
        return Ok((vec![gmax], coords));
    }
    if n == 4 && max_order == 2 {
        // Klein four-group on two involutions
        let g1 = 1;
        let g2 = 2;
        let prod = elements[g1].compose(&elements[g2]);
        let rest = elements
            .iter()
            .position(|e| *e == prod)
            .ok_or_else(|| Error::Internal(format!("{t}: Klein product escaped center")))?;
        if rest == 0 || rest == g1 || rest == g2 {
            return Err(Error::Internal(format!("{t}: Klein structure violated")));
        }
        let mut coords = vec![Vec::new(); 4];
        coords[0] = vec![BigInt::zero(), BigInt::zero()];
        coords[g1] = vec![BigInt::one(), BigInt::zero()];
        coords[g2] = vec![BigInt::zero(), BigInt::one()];
        coords[rest] = vec![BigInt::one(), BigInt::one()];
        return Ok((vec![g1, g2], coords));
    }
    Err(Error::Internal(format!(
        "{t}: center of order {n} with maximal element order {max_order} is neither cyclic nor Klein"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ct(s: &str) -> CartanType {
        CartanType::parse(s).unwrap()
    }

    fn all_small_types() -> Vec<CartanType> {
        let mut v = Vec::new();
        for n in 1..=8 {
            v.push(CartanType::new(Family::A, n).unwrap());
        }
        for n in 2..=8 {
            v.push(CartanType::new(Family::B, n).unwrap());
        }
        for n in 3..=8 {
            v.push(CartanType::new(Family::C, n).unwrap());
        }
        for n in 4..=8 {
            v.push(CartanType::new(Family::D, n).unwrap());
        }
        for n in 6..=8 {
            v.push(CartanType::new(Family::E, n).unwrap());
        }
        v.push(CartanType::new(Family::F, 4).unwrap());
        v.push(CartanType::new(Family::G, 2).unwrap());
        v
    }

    #[test]
    fn parse_and_rank_constraints() {
        assert_eq!(ct("a1"), CartanType::new(Family::A, 1).unwrap());
        assert_eq!(ct("D4").to_string(), "D4");
        assert!(CartanType::parse("D3").is_err());
        assert!(CartanType::parse("E9").is_err());
        assert!(CartanType::parse("C2").is_err());
        assert!(CartanType::parse("H3").is_err());
        assert!(CartanType::parse("A0").is_err());
    }

    #[test]
    fn cartan_small_cases() {
        assert_eq!(cartan_matrix(ct("A1")), IntMatrix::from_i64(&[&[2]], 1));
        assert_eq!(
            cartan_matrix(ct("A2")),
            IntMatrix::from_i64(&[&[2, -1], &[-1, 2]], 2)
        );
        assert_eq!(cartan_matrix(ct("G2")).abs_det(), BigInt::one());
    }

    #[test]
    fn extended_a1() {
        let d = extended_diagram(ct("A1"));
        assert_eq!(d.marks(), &[1, 1]);
        assert_eq!(
            d.extended_cartan(),
            &IntMatrix::from_i64(&[&[2, -2], &[-2, 2]], 2)
        );
    }

    #[test]
    fn marks_all_one_for_a_series() {
        for n in 1..=6 {
            let d = extended_diagram(CartanType::new(Family::A, n).unwrap());
            assert!(d.marks().iter().all(|&a| a == 1));
        }
    }

    #[test]
    fn e8_has_single_special_node() {
        let d = extended_diagram(ct("E8"));
        assert_eq!(d.special_nodes(), vec![0]);
    }

    #[test]
    fn marks_invariant_every_type() {
        // construction would panic on violation; walk everything once
        for t in all_small_types() {
            let _ = extended_diagram(t);
        }
    }

    #[test]
    fn center_orders_match_determinants() {
        for t in all_small_types() {
            let c = center_group(t).unwrap();
            assert_eq!(
                BigInt::from(c.order()),
                cartan_matrix(t).abs_det(),
                "center order vs det for {t}"
            );
        }
    }

    #[test]
    fn known_center_structures() {
        assert_eq!(center_group(ct("A1")).unwrap().presentation().iso_type().to_string(), "Z/2");
        assert_eq!(center_group(ct("A4")).unwrap().presentation().iso_type().to_string(), "Z/5");
        assert_eq!(center_group(ct("B3")).unwrap().presentation().iso_type().to_string(), "Z/2");
        assert_eq!(center_group(ct("C3")).unwrap().presentation().iso_type().to_string(), "Z/2");
        assert_eq!(
            center_group(ct("D4")).unwrap().presentation().iso_type().to_string(),
            "Z/2 x Z/2"
        );
        assert_eq!(center_group(ct("D5")).unwrap().presentation().iso_type().to_string(), "Z/4");
        assert_eq!(center_group(ct("E6")).unwrap().presentation().iso_type().to_string(), "Z/3");
        assert_eq!(center_group(ct("E7")).unwrap().presentation().iso_type().to_string(), "Z/2");
        for t in ["E8", "F4", "G2"] {
            assert!(center_group(ct(t)).unwrap().presentation().iso_type().is_trivial());
        }
    }

    #[test]
    fn a1_center_swaps_nodes() {
        let c = center_group(ct("A1")).unwrap();
        assert_eq!(c.order(), 2);
        let z = c.by_special_node(1).unwrap();
        assert_eq!(z.perm(), &[1, 0]);
    }

    #[test]
    fn d4_center_is_klein_on_four_nodes() {
        let c = center_group(ct("D4")).unwrap();
        assert_eq!(c.special_nodes(), &[0, 1, 3, 4]);
        assert_eq!(c.order(), 4);
        assert!(c.elements().iter().skip(1).all(|e| e.order() == 2));
    }

    #[test]
    fn an_center_is_rotation() {
        let c = center_group(ct("A3")).unwrap();
        let z = c.by_special_node(1).unwrap();
        assert_eq!(z.perm(), &[1, 2, 3, 0]);
        assert_eq!(z.order(), 4);
    }

    #[test]
    fn simply_transitive_on_special_nodes() {
        for t in all_small_types() {
            let c = center_group(t).unwrap();
            let mut images: Vec<usize> = c.elements().iter().map(|e| e.apply(0)).collect();
            images.sort_unstable();
            assert_eq!(images, c.special_nodes(), "orbit of node 0 for {t}");
        }
    }

    /// Brute-force diagram-automorphism search: every special automorphism
    /// must appear among all mark/matrix-preserving node permutations.
    #[test]
    fn special_autos_are_diagram_autos() {
        for t in [ct("A1"), ct("A2"), ct("A3"), ct("B2"), ct("C3"), ct("D4")] {
            let d = extended_diagram(t);
            let n = d.node_count();
            let mut all: Vec<SpecialAutomorphism> = Vec::new();
            let mut idx: Vec<usize> = (0..n).collect();
            permutations(&mut idx, 0, &mut |p| {
                let cand = SpecialAutomorphism::from_perm(p.to_vec());
                if cand.preserves(&d) {
                    all.push(cand);
                }
            });
            let c = center_group(t).unwrap();
            for e in c.elements() {
                assert!(all.contains(e), "{t}: center element is not a diagram automorphism");
            }
        }
    }

    fn permutations(items: &mut [usize], k: usize, f: &mut impl FnMut(&[usize])) {
        if k == items.len() {
            f(items);
            return;
        }
        for i in k..items.len() {
            items.swap(k, i);
            permutations(items, k + 1, f);
            items.swap(k, i);
        }
    }

    #[test]
    fn vector_involution_rules() {
        // B-series and A1: the unique involution
        let a1 = center_group(ct("A1")).unwrap();
        assert_eq!(a1.vector_involution().unwrap().apply(0), 1);
        // D4: three involutions, the vector one exchanges 0 and 1
        let d4 = center_group(ct("D4")).unwrap();
        let v = d4.vector_involution().unwrap();
        assert_eq!(v.apply(0), 1);
        assert_eq!(v.apply(1), 0);
        // D5: cyclic Z/4, the square of a generator
        let d5 = center_group(ct("D5")).unwrap();
        let v5 = d5.vector_involution().unwrap();
        assert!(v5.compose(v5).is_identity());
        assert_eq!(v5.apply(0), 1);
        // A3: the involution is the rotation by two (node 0 -> 2)
        let a3 = center_group(ct("A3")).unwrap();
        assert_eq!(a3.vector_involution().unwrap().apply(0), 2);
    }
}
