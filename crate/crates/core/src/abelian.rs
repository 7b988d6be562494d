//! Finitely generated abelian groups presented as `Z^N / R` for a relation
//! lattice `R` given by generators (rows). Elements are integer vectors of
//! length `N`; two vectors represent the same element iff their difference
//! lies in the row span of the relations.
//!
//! Groups are presented, never enumerated, so infinite groups (free part
//! `Z^t`) are first-class values.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::intmat::{left_kernel, smith_normal_form, solve_left, IntMatrix};

/// `Z^ambient_rank` modulo the row span of `relations`.
#[derive(Clone, Debug)]
pub struct FgAbelianGroup {
    ambient_rank: usize,
    relations: IntMatrix,
}

/// Canonical form: free rank plus elementary divisors `d_1 | d_2 | ...`,
/// each `d_i >= 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoType {
    pub free_rank: usize,
    pub torsion: Vec<BigUint>,
}

impl IsoType {
    pub fn trivial() -> Self {
        IsoType {
            free_rank: 0,
            torsion: Vec::new(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Group order; `None` when the free rank is positive.
    pub fn order(&self) -> Option<BigUint> {
        if self.free_rank > 0 {
            return None;
        }
        let mut p = BigUint::one();
        for d in &self.torsion {
            p *= d;
        }
        Some(p)
    }
}

impl std::fmt::Display for IsoType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            k => parts.push(format!("Z^{}", k)),
        }
        for d in &self.torsion {
            parts.push(format!("Z/{}", d));
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" x "))
        }
    }
}

impl FgAbelianGroup {
    pub fn new(ambient_rank: usize, relations: IntMatrix) -> Result<Self> {
        if relations.cols() != ambient_rank {
            return Err(Error::DimensionMismatch(format!(
                "relations have {} columns, ambient rank is {}",
                relations.cols(),
                ambient_rank
            )));
        }
        Ok(FgAbelianGroup {
            ambient_rank,
            relations,
        })
    }

    pub fn from_relation_rows(ambient_rank: usize, rows: &[Vec<BigInt>]) -> Result<Self> {
        let relations = IntMatrix::from_rows(rows, ambient_rank)?;
        FgAbelianGroup::new(ambient_rank, relations)
    }

    /// Free group `Z^n`.
    pub fn free(n: usize) -> Self {
        FgAbelianGroup {
            ambient_rank: n,
            relations: IntMatrix::zero(0, n),
        }
    }

    /// `Z/d1 x Z/d2 x ...` with the given diagonal relation orders.
    pub fn diagonal(orders: &[BigUint]) -> Self {
        let n = orders.len();
        let mut relations = IntMatrix::zero(n, n);
        for (i, d) in orders.iter().enumerate() {
            relations.set(i, i, BigInt::from(d.clone()));
        }
        FgAbelianGroup {
            ambient_rank: n,
            relations,
        }
    }

    pub fn trivial() -> Self {
        FgAbelianGroup::free(0)
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.relations
    }

    /// Free rank and elementary divisors via the Smith normal form of the
    /// relation matrix; divisors equal to 1 are dropped.
    pub fn iso_type(&self) -> IsoType {
        let snf = smith_normal_form(&self.relations);
        let free_rank = self.ambient_rank - snf.rank;
        let mut torsion: Vec<BigUint> = Vec::new();
        for i in 0..snf.rank {
            let d = snf.diag.at(i, i);
            if *d > BigInt::one() {
                torsion.push(d.magnitude().clone());
            }
        }
        IsoType { free_rank, torsion }
    }

    pub fn order(&self) -> Option<BigUint> {
        self.iso_type().order()
    }

    /// Quotient by the subgroup generated by `gens`: the generators simply
    /// join the relation lattice.
    pub fn quotient_by(&self, gens: &[Vec<BigInt>]) -> Result<FgAbelianGroup> {
        let extra = IntMatrix::from_rows(gens, self.ambient_rank)?;
        let relations = self.relations.vstack(&extra)?;
        FgAbelianGroup::new(self.ambient_rank, relations)
    }

    /// Generators of `{k + k : k in G}`: doubles of the ambient basis
    /// vectors, which generate all doubles because the group is abelian.
    pub fn doubling_subgroup(&self) -> Vec<Vec<BigInt>> {
        (0..self.ambient_rank)
            .map(|i| {
                let mut v = vec![BigInt::zero(); self.ambient_rank];
                v[i] = BigInt::from(2);
                v
            })
            .collect()
    }

    /// Whether two ambient vectors represent the same element.
    pub fn same_element(&self, a: &[BigInt], b: &[BigInt]) -> Result<bool> {
        if a.len() != self.ambient_rank || b.len() != self.ambient_rank {
            return Err(Error::DimensionMismatch(
                "element length differs from ambient rank".into(),
            ));
        }
        let diff: Vec<BigInt> = a.iter().zip(b).map(|(x, y)| x - y).collect();
        Ok(solve_left(&self.relations, &diff)?.is_some())
    }

    pub fn is_zero_element(&self, a: &[BigInt]) -> Result<bool> {
        let zero = vec![BigInt::zero(); self.ambient_rank];
        self.same_element(a, &zero)
    }

    /// Presents the subgroup generated by `gens` on its own coordinates:
    /// ambient rank = number of generators, relations = all integer
    /// combinations that vanish in this group.
    pub fn subgroup_presentation(&self, gens: &[Vec<BigInt>]) -> Result<FgAbelianGroup> {
        let gmat = IntMatrix::from_rows(gens, self.ambient_rank)?;
        let stacked = gmat.vstack(&self.relations)?;
        let kernel = left_kernel(&stacked);
        let projected: Vec<Vec<BigInt>> = kernel.iter().map(|k| k[..gens.len()].to_vec()).collect();
        FgAbelianGroup::from_relation_rows(gens.len(), &projected)
    }

    /// Writes `target` as an integer combination of `gens` inside this
    /// group, if possible.
    pub fn express_in_gens(
        &self,
        gens: &[Vec<BigInt>],
        target: &[BigInt],
    ) -> Result<Option<Vec<BigInt>>> {
        let gmat = IntMatrix::from_rows(gens, self.ambient_rank)?;
        let stacked = gmat.vstack(&self.relations)?;
        Ok(solve_left(&stacked, target)?.map(|x| x[..gens.len()].to_vec()))
    }
}

/// Whether `v` lies in the integer span of `gens`. All vectors must share
/// one length.
pub fn lattice_membership(v: &[BigInt], gens: &[Vec<BigInt>]) -> Result<bool> {
    let m = IntMatrix::from_rows(gens, v.len())?;
    Ok(solve_left(&m, v)?.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bv(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    /// Brute-force coset enumeration on a box, the independent oracle for
    /// iso_type orders on finite groups of small ambient rank.
    fn brute_coset_count(ambient: usize, rels: &[Vec<i64>], half_box: i64) -> usize {
        let rel_rows: Vec<Vec<BigInt>> = rels.iter().map(|r| bv(r)).collect();
        let g = FgAbelianGroup::from_relation_rows(ambient, &rel_rows).unwrap();
        let mut reps: Vec<Vec<BigInt>> = Vec::new();
        let mut point = vec![-half_box; ambient];
        loop {
            let v = bv(&point);
            if !reps.iter().any(|r| g.same_element(r, &v).unwrap()) {
                reps.push(v);
            }
            let mut k = 0;
            loop {
                if k == ambient {
                    return reps.len();
                }
                point[k] += 1;
                if point[k] <= half_box {
                    break;
                }
                point[k] = -half_box;
                k += 1;
            }
        }
    }

    #[test]
    fn iso_type_klein() {
        let g = FgAbelianGroup::from_relation_rows(2, &[bv(&[2, 0]), bv(&[0, 2])]).unwrap();
        let t = g.iso_type();
        assert_eq!(t.free_rank, 0);
        assert_eq!(t.torsion, vec![BigUint::from(2u8), BigUint::from(2u8)]);
        assert_eq!(t.order(), Some(BigUint::from(4u8)));
        assert_eq!(t.to_string(), "Z/2 x Z/2");
    }

    #[test]
    fn iso_type_free() {
        let g = FgAbelianGroup::free(1);
        let t = g.iso_type();
        assert_eq!(t.free_rank, 1);
        assert!(t.torsion.is_empty());
        assert_eq!(t.order(), None);
        assert_eq!(t.to_string(), "Z");
    }

    #[test]
    fn iso_type_index_two_sublattice() {
        // Z^2 / <(1,1),(1,-1)>: coset enumeration gives order 2
        let g = FgAbelianGroup::from_relation_rows(2, &[bv(&[1, 1]), bv(&[1, -1])]).unwrap();
        let t = g.iso_type();
        assert_eq!(t.free_rank, 0);
        assert_eq!(t.torsion, vec![BigUint::from(2u8)]);
        assert_eq!(brute_coset_count(2, &[vec![1, 1], vec![1, -1]], 3), 2);
    }

    #[test]
    fn quotient_z_by_two() {
        let g = FgAbelianGroup::free(1);
        let q = g.quotient_by(&[bv(&[2])]).unwrap();
        assert_eq!(q.iso_type().to_string(), "Z/2");
    }

    #[test]
    fn quotient_by_nothing() {
        let g = FgAbelianGroup::from_relation_rows(2, &[bv(&[3, 0])]).unwrap();
        let q = g.quotient_by(&[]).unwrap();
        assert_eq!(q.iso_type(), g.iso_type());
    }

    #[test]
    fn quotient_klein_by_diagonal() {
        let g = FgAbelianGroup::from_relation_rows(2, &[bv(&[2, 0]), bv(&[0, 2])]).unwrap();
        let q = g.quotient_by(&[bv(&[1, 1])]).unwrap();
        assert_eq!(q.iso_type().to_string(), "Z/2");
        assert_eq!(brute_coset_count(2, &[vec![2, 0], vec![0, 2], vec![1, 1]], 3), 2);
    }

    #[test]
    fn doubling_examples() {
        // Z -> Z/2
        let z = FgAbelianGroup::free(1);
        let q = z.quotient_by(&z.doubling_subgroup()).unwrap();
        assert_eq!(q.iso_type().to_string(), "Z/2");
        // Z/2 stays Z/2: the doubles vanish
        let z2 = FgAbelianGroup::from_relation_rows(1, &[bv(&[2])]).unwrap();
        let q2 = z2.quotient_by(&z2.doubling_subgroup()).unwrap();
        assert_eq!(q2.iso_type().to_string(), "Z/2");
        // doubling is an automorphism of odd torsion: Z/3 -> 1
        let z3 = FgAbelianGroup::from_relation_rows(1, &[bv(&[3])]).unwrap();
        let q3 = z3.quotient_by(&z3.doubling_subgroup()).unwrap();
        assert!(q3.iso_type().is_trivial());
    }

    #[test]
    fn membership_examples() {
        assert!(lattice_membership(&bv(&[0]), &[bv(&[2])]).unwrap());
        assert!(!lattice_membership(&bv(&[1]), &[bv(&[2])]).unwrap());
        // (2,2) = 2*(1,1) + 0*(0,4)
        assert!(lattice_membership(&bv(&[2, 2]), &[bv(&[1, 1]), bv(&[0, 4])]).unwrap());
        // empty generator list spans only 0
        assert!(lattice_membership(&bv(&[0, 0]), &[]).unwrap());
        assert!(!lattice_membership(&bv(&[1, 0]), &[]).unwrap());
    }

    #[test]
    fn subgroup_presentation_basic() {
        // subgroup of Z/4 generated by 2 is Z/2
        let z4 = FgAbelianGroup::from_relation_rows(1, &[bv(&[4])]).unwrap();
        let s = z4.subgroup_presentation(&[bv(&[2])]).unwrap();
        assert_eq!(s.iso_type().to_string(), "Z/2");
        // subgroup of Z^2 generated by (2,0) and (0,3) is Z^2
        let z2 = FgAbelianGroup::free(2);
        let s2 = z2
            .subgroup_presentation(&[bv(&[2, 0]), bv(&[0, 3])])
            .unwrap();
        assert_eq!(s2.iso_type().to_string(), "Z^2");
    }

    #[test]
    fn express_in_gens_basic() {
        let z4 = FgAbelianGroup::from_relation_rows(1, &[bv(&[4])]).unwrap();
        let expr = z4.express_in_gens(&[bv(&[2])], &bv(&[2])).unwrap().unwrap();
        // 2 = 1 * gen (mod 4-relation combinations)
        let recombined: BigInt = &expr[0] * BigInt::from(2);
        assert!(z4.same_element(&[recombined], &bv(&[2])).unwrap());
        // 1 is not in <2> inside Z/4
        assert!(z4.express_in_gens(&[bv(&[2])], &bv(&[1])).unwrap().is_none());
        // but 1 IS expressible in <3> inside Z/4 (3 generates)
        assert!(z4.express_in_gens(&[bv(&[3])], &bv(&[1])).unwrap().is_some());
    }
}
