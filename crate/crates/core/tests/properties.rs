//! Property tests: Smith normal form structure against an independent
//! determinant oracle, membership against brute-force search, quotient
//! invariance, the center action on random alcove points, and the
//! choice-independence and monotonicity of the component counts.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::prelude::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use repvar::abelian::{lattice_membership, FgAbelianGroup};
use repvar::components::{component_group, SurfaceSpec};
use repvar::conjugacy::{act_center, compute_j, stabilizer, CenterElement, KacPoint, MarkingSpec};
use repvar::group_model::{build_model, named_model, CompactGroupModel, CompactGroupSpec, KernelGen};
use repvar::intmat::{smith_normal_form, IntMatrix};
use repvar::root_data::{center_group, CartanType};

fn bigvec(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn det_cofactor(m: &IntMatrix) -> BigInt {
    let n = m.rows();
    if n == 0 {
        return BigInt::one();
    }
    if n == 1 {
        return m.at(0, 0).clone();
    }
    let mut det = BigInt::zero();
    for j in 0..n {
        if m.at(0, j).is_zero() {
            continue;
        }
        let mut sub = IntMatrix::zero(n - 1, n - 1);
        for i in 1..n {
            let mut cc = 0;
            for c in 0..n {
                if c != j {
                    sub.set(i - 1, cc, m.at(i, c).clone());
                    cc += 1;
                }
            }
        }
        let term = m.at(0, j) * det_cofactor(&sub);
        if j % 2 == 0 {
            det += term;
        } else {
            det -= term;
        }
    }
    det
}

fn matrix_strategy(max_dim: usize) -> impl Strategy<Value = IntMatrix> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(|(r, c)| {
        proptest::collection::vec(-9i64..=9, r * c).prop_map(move |entries| {
            let rows: Vec<Vec<BigInt>> = entries
                .chunks(c)
                .map(|chunk| chunk.iter().map(|&v| BigInt::from(v)).collect())
                .collect();
            IntMatrix::from_rows(&rows, c).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn snf_recomposes_and_chains(m in matrix_strategy(6)) {
        let snf = smith_normal_form(&m);
        prop_assert_eq!(snf.left.mul(&m).mul(&snf.right), snf.diag.clone());
        let min_dim = m.rows().min(m.cols());
        for i in 0..min_dim {
            prop_assert!(!snf.diag.at(i, i).is_negative());
            if i + 1 < min_dim && !snf.diag.at(i, i).is_zero() {
                let q = snf.diag.at(i + 1, i + 1) % snf.diag.at(i, i);
                prop_assert!(q.is_zero(), "divisibility chain broken");
            }
        }
        prop_assert_eq!(det_cofactor(&snf.left).abs(), BigInt::one());
        prop_assert_eq!(det_cofactor(&snf.right).abs(), BigInt::one());
    }
}

proptest! {
    #[test]
    fn snf_diagonal_product_is_determinant(m in matrix_strategy(5)) {
        if m.rows() == m.cols() {
            let snf = smith_normal_form(&m);
            let mut p = BigInt::one();
            for i in 0..m.rows() {
                p *= snf.diag.at(i, i);
            }
            prop_assert_eq!(p, det_cofactor(&m).abs());
        }
    }
}

proptest! {
    #[test]
    fn quotient_iso_invariance(
        rel_entries in proptest::collection::vec(-6i64..=6, 6),
        gen_entries in proptest::collection::vec(-6i64..=6, 9),
        perm_seed in 0u64..1000,
        combo in proptest::collection::vec(-3i64..=3, 3),
    ) {
        let ambient = 3;
        let relations: Vec<Vec<BigInt>> = rel_entries
            .chunks(ambient)
            .map(|c| c.iter().map(|&v| BigInt::from(v)).collect())
            .collect();
        let g = FgAbelianGroup::from_relation_rows(ambient, &relations).unwrap();
        let gens: Vec<Vec<BigInt>> = gen_entries
            .chunks(ambient)
            .map(|c| c.iter().map(|&v| BigInt::from(v)).collect())
            .collect();
        let base = g.quotient_by(&gens).unwrap().iso_type();

        // permuting the generators
        let mut shuffled = gens.clone();
        let mut rng = ChaCha8Rng::seed_from_u64(perm_seed);
        for i in (1..shuffled.len()).rev() {
            let j = rng.random_range(0..=i);
            shuffled.swap(i, j);
        }
        prop_assert_eq!(g.quotient_by(&shuffled).unwrap().iso_type(), base.clone());

        // appending a Z-linear combination of the generators
        let mut extra = vec![BigInt::zero(); ambient];
        for (coef, gen) in combo.iter().zip(&gens) {
            for (e, x) in extra.iter_mut().zip(gen) {
                *e += BigInt::from(*coef) * x;
            }
        }
        let mut extended = gens.clone();
        extended.push(extra);
        prop_assert_eq!(g.quotient_by(&extended).unwrap().iso_type(), base);
    }
}

/// Exhaustive search for coefficients in [-10, 10].
fn brute_force_member(v: &[BigInt], gens: &[Vec<BigInt>]) -> bool {
    let k = gens.len();
    let mut coeffs = vec![-10i64; k];
    loop {
        let mut combo = vec![BigInt::zero(); v.len()];
        for (c, g) in coeffs.iter().zip(gens) {
            for (acc, x) in combo.iter_mut().zip(g) {
                *acc += BigInt::from(*c) * x;
            }
        }
        if combo == v {
            return true;
        }
        let mut i = 0;
        loop {
            if i == k {
                return false;
            }
            coeffs[i] += 1;
            if coeffs[i] <= 10 {
                break;
            }
            coeffs[i] = -10;
            i += 1;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn membership_agrees_with_brute_force(
        dim in 1usize..=3,
        gen_entries in proptest::collection::vec(-4i64..=4, 9),
        coeffs in proptest::collection::vec(-10i64..=10, 3),
        probe in proptest::collection::vec(-6i64..=6, 3),
    ) {
        let gens: Vec<Vec<BigInt>> = gen_entries
            .chunks(3)
            .map(|c| bigvec(&c[..dim]))
            .collect();

        // a bounded combination must be recognized
        let mut combo = vec![BigInt::zero(); dim];
        for (c, g) in coeffs.iter().zip(&gens) {
            for (acc, x) in combo.iter_mut().zip(g) {
                *acc += BigInt::from(*c) * x;
            }
        }
        prop_assert!(lattice_membership(&combo, &gens).unwrap());

        // an arbitrary probe: positives come with an exact witness,
        // negatives are confirmed by the bounded search
        let v = bigvec(&probe[..dim]);
        let member = lattice_membership(&v, &gens).unwrap();
        if member {
            let free = FgAbelianGroup::free(dim);
            let expr = free.express_in_gens(&gens, &v).unwrap();
            prop_assert!(expr.is_some());
            let expr = expr.unwrap();
            let mut recombined = vec![BigInt::zero(); dim];
            for (c, g) in expr.iter().zip(&gens) {
                for (acc, x) in recombined.iter_mut().zip(g) {
                    *acc += c * x;
                }
            }
            prop_assert_eq!(recombined, v);
        } else {
            prop_assert!(!brute_force_member(&v, &gens));
        }
    }
}

fn action_test_types() -> Vec<CartanType> {
    ["A1", "A2", "A3", "A4", "B2", "B3", "C3", "D4", "D5", "E6"]
        .iter()
        .map(|s| CartanType::parse(s).unwrap())
        .collect()
}

fn random_kac_point(rng: &mut ChaCha8Rng, types: &[CartanType]) -> KacPoint {
    let factors = types
        .iter()
        .map(|&t| {
            let d = repvar::root_data::extended_diagram(t);
            let n = d.node_count();
            let mut nums: Vec<i64> = (0..n).map(|_| rng.random_range(0..=12)).collect();
            if nums.iter().all(|&v| v == 0) {
                nums[rng.random_range(0..n)] = 1;
            }
            let total: BigInt = d
                .marks()
                .iter()
                .zip(&nums)
                .map(|(&a, &w)| BigInt::from(a) * BigInt::from(w))
                .sum();
            nums.iter()
                .map(|&w| BigRational::new(BigInt::from(w), total.clone()))
                .collect()
        })
        .collect();
    KacPoint { factors }
}

#[test]
fn center_action_preserves_alcove_and_is_an_action() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for t in action_test_types() {
        let diagram = repvar::root_data::extended_diagram(t);
        let center = center_group(t).unwrap();
        let elements: Vec<CenterElement> = center
            .elements()
            .iter()
            .map(|e| CenterElement { parts: vec![e.clone()] })
            .collect();
        for _ in 0..1000 {
            let p = random_kac_point(&mut rng, &[t]);
            p.validate(std::slice::from_ref(&diagram)).unwrap();
            for z in &elements {
                let zp = act_center(z, &p).unwrap();
                zp.validate(std::slice::from_ref(&diagram)).unwrap();
                for w in &elements {
                    let lhs = act_center(&z.compose(w), &p).unwrap();
                    let rhs = act_center(z, &act_center(w, &p).unwrap()).unwrap();
                    assert_eq!(lhs, rhs, "{t}: action law failed");
                }
            }
            // identity acts trivially
            let id = CenterElement {
                parts: vec![center.identity().clone()],
            };
            assert_eq!(act_center(&id, &p).unwrap(), p);
        }
    }
}

#[test]
fn stabilizer_is_subgroup_and_translation_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for t in action_test_types() {
        let center = center_group(t).unwrap();
        let elements: Vec<CenterElement> = center
            .elements()
            .iter()
            .map(|e| CenterElement { parts: vec![e.clone()] })
            .collect();
        for _ in 0..100 {
            let p = random_kac_point(&mut rng, &[t]);
            let stab = stabilizer(&p, &elements).unwrap();
            // closed under composition
            for a in &stab {
                for b in &stab {
                    assert!(stab.contains(&a.compose(b)), "{t}: stabilizer not closed");
                }
            }
            // invariant under translating the point by any center element
            for w in &elements {
                let wp = act_center(w, &p).unwrap();
                let stab_w = stabilizer(&wp, &elements).unwrap();
                assert_eq!(stab.len(), stab_w.len(), "{t}: stabilizer changed");
                for z in &stab {
                    assert!(stab_w.contains(z), "{t}: stabilizer element lost");
                }
            }
        }
    }
}

fn test_models() -> Vec<CompactGroupModel> {
    ["SO(3)", "U(2)", "PSU(3)", "SO(8)", "SU(2)", "U(1)"]
        .iter()
        .map(|n| named_model(n).unwrap())
        .collect()
}

fn random_marking(rng: &mut ChaCha8Rng, model: &CompactGroupModel) -> MarkingSpec {
    let types: Vec<CartanType> = model.spec().factors.clone();
    let alcove = random_kac_point(rng, &types);
    let torus = (0..model.torus_rank())
        .map(|_| BigRational::new(BigInt::from(rng.random_range(-4i64..=4)), BigInt::from(4)))
        .collect();
    MarkingSpec { torus, alcove }
}

fn random_center_element(rng: &mut ChaCha8Rng, model: &CompactGroupModel) -> CenterElement {
    CenterElement {
        parts: model
            .centers()
            .iter()
            .map(|c| c.elements().choose(rng).unwrap().clone())
            .collect(),
    }
}

#[test]
fn j_and_reports_are_choice_independent() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for model in test_models() {
        for _ in 0..40 {
            let r = rng.random_range(1..=3usize);
            let markings: Vec<MarkingSpec> =
                (0..r).map(|_| random_marking(&mut rng, &model)).collect();
            let surface = SurfaceSpec::new(rng.random_range(1..=2), r, 0).unwrap();
            let base_j = compute_j(&markings, &model).unwrap();
            let base = component_group(&surface, &markings, &model).unwrap();

            // translate one marking's alcove part by a central element
            let mut translated = markings.clone();
            let k = rng.random_range(0..r);
            let z = random_center_element(&mut rng, &model);
            translated[k].alcove = act_center(&z, &translated[k].alcove).unwrap();
            let new_j = compute_j(&translated, &model).unwrap();
            assert_eq!(base_j.len(), new_j.len(), "J changed under central translate");
            let new = component_group(&surface, &translated, &model).unwrap();
            assert_eq!(base.status, new.status);
            assert_eq!(base.count, new.count);
            assert_eq!(
                base.component_group.as_ref().map(|t| t.to_string()),
                new.component_group.as_ref().map(|t| t.to_string())
            );
        }
    }
}

#[test]
fn adding_markings_never_increases_count() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for model in test_models() {
        for _ in 0..25 {
            // nonorientable kinds avoid the emptiness condition entirely
            let l = rng.random_range(2..=3usize);
            let kind = rng.random_range(1..=2usize);
            let r = rng.random_range(0..=2usize);
            let markings: Vec<MarkingSpec> =
                (0..r).map(|_| random_marking(&mut rng, &model)).collect();
            let base = component_group(&SurfaceSpec::new(l, r, kind).unwrap(), &markings, &model)
                .unwrap();

            let mut more = markings.clone();
            more.push(random_marking(&mut rng, &model));
            let bigger =
                component_group(&SurfaceSpec::new(l, r + 1, kind).unwrap(), &more, &model).unwrap();
            let a = base.count.clone().unwrap();
            let b = bigger.count.clone().unwrap();
            assert!(b <= a, "count grew from {a} to {b} when a marking was added");

            // the identity marking never changes the count
            let mut with_id = markings.clone();
            with_id.push(MarkingSpec::identity(model.torus_rank(), model.diagrams()));
            let same =
                component_group(&SurfaceSpec::new(l, r + 1, kind).unwrap(), &with_id, &model)
                    .unwrap();
            assert_eq!(base.count, same.count, "identity marking changed the count");
        }
    }
}

#[test]
fn nonorientable_count_divides_closed_nonorientable_count() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for model in test_models() {
        let closed = component_group(&SurfaceSpec::new(2, 0, 2).unwrap(), &[], &model)
            .unwrap()
            .count
            .unwrap();
        for _ in 0..20 {
            let r = rng.random_range(1..=2usize);
            let markings: Vec<MarkingSpec> =
                (0..r).map(|_| random_marking(&mut rng, &model)).collect();
            let marked = component_group(&SurfaceSpec::new(2, r, 2).unwrap(), &markings, &model)
                .unwrap()
                .count
                .unwrap();
            assert!(
                (&closed % &marked).is_zero() && marked <= closed,
                "marked count {marked} does not divide closed count {closed}"
            );
        }
    }
}

/// Random valid specs: factors of rank at most 4, torus rank at most 3,
/// the standard lattice basis for compactness plus extra random kernel
/// generators with random central parts.
fn random_spec(rng: &mut ChaCha8Rng) -> CompactGroupSpec {
    let pool = ["A1", "A2", "A3", "A4", "B2", "B3", "B4", "C3", "C4", "D4"];
    let nf = rng.random_range(0..=2usize);
    let factors: Vec<CartanType> = (0..nf)
        .map(|_| CartanType::parse(pool.choose(rng).unwrap()).unwrap())
        .collect();
    let t = rng.random_range(0..=3usize);
    let centers: Vec<_> = factors
        .iter()
        .map(|&ty| center_group(ty).unwrap())
        .collect();
    let mut kernel_gens: Vec<KernelGen> = Vec::new();
    for i in 0..t {
        let mut lattice = vec![BigInt::zero(); t];
        lattice[i] = BigInt::one();
        let parts = centers
            .iter()
            .map(|c| c.elements().choose(rng).unwrap().clone())
            .collect();
        kernel_gens.push(KernelGen {
            lattice,
            central: CenterElement { parts },
        });
    }
    for _ in 0..rng.random_range(0..=2usize) {
        let lattice = (0..t)
            .map(|_| BigInt::from(rng.random_range(-3i64..=3)))
            .collect();
        let parts = centers
            .iter()
            .map(|c| c.elements().choose(rng).unwrap().clone())
            .collect();
        kernel_gens.push(KernelGen {
            lattice,
            central: CenterElement { parts },
        });
    }
    CompactGroupSpec {
        factors,
        torus_rank: t,
        kernel_gens,
    }
}

#[test]
fn random_specs_satisfy_the_covering_exact_sequence() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..50 {
        let spec = random_spec(&mut rng);
        // build_model enforces free rank = torus rank and matching torsion
        let model = build_model(spec).unwrap();
        let iso = model.pi1_g().iso_type();
        assert_eq!(iso.free_rank, model.torus_rank());
        assert_eq!(iso.torsion, model.pi1_gss().iso_type().torsion);
        let listed = model.ker_rho_ss_elements().len();
        assert_eq!(
            model.pi1_gss().order(),
            Some(BigUint::from(listed)),
            "presentation order vs element list"
        );
    }
}
