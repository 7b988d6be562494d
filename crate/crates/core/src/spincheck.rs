//! Numerical verification for SO(3): explicit solution tuples of the
//! surface relation, their lifts through the unit-quaternion double cover,
//! and the sign of the lifted relator word, which indexes the connected
//! component the tuple sits in.
//!
//! The dictionary is fixed once: the quaternion `(cos t, 0, 0, sin t)`
//! covers the rotation by `2t` about the z-axis, so the conjugacy class of
//! a lift is read off its scalar part. Commutator and square positions are
//! insensitive to the lift sign; marked boundary positions are pinned to
//! their declared class angle instead.

use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::components::SurfaceSpec;
use crate::error::{Error, Result};

/// Unit-norm tolerance for quaternion values.
pub const UNIT_NORM_TOL: f64 = 1e-12;
/// Orthogonality/determinant tolerance for rotation matrices.
pub const ROTATION_TOL: f64 = 1e-9;
/// Round-trip tolerance of lifting: `rotation_of(lift(R)) ~ R`.
pub const LIFT_TOL: f64 = 1e-8;
/// Angle tolerance when matching a rotation against a declared class.
pub const ANGLE_TOL: f64 = 1e-6;
/// Largest admissible residual of the defining surface relation.
pub const RELATION_TOL: f64 = 1e-8;
/// Tolerance of the snap of a lifted word to the center.
pub const SNAP_TOL: f64 = 1e-7;
/// Residual guaranteed by constructed witnesses.
pub const WITNESS_RESIDUAL_TOL: f64 = 1e-10;

const SIGN_EPS: f64 = 1e-9;

/// A unit quaternion `w + xi + yj + zk`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnitQuaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl UnitQuaternion {
    pub const ONE: UnitQuaternion = UnitQuaternion {
        w: 1.0,
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };

    pub fn new_normalized(w: f64, x: f64, y: f64, z: f64) -> Self {
        let n = (w * w + x * x + y * y + z * z).sqrt();
        UnitQuaternion {
            w: w / n,
            x: x / n,
            y: y / n,
            z: z / n,
        }
    }

    /// `(cos t, 0, 0, sin t)`, covering the z-rotation by `2t`.
    pub fn z_half_angle(t: f64) -> Self {
        UnitQuaternion {
            w: t.cos(),
            x: 0.0,
            y: 0.0,
            z: t.sin(),
        }
    }

    pub fn norm(&self) -> f64 {
        (self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn conjugate(&self) -> Self {
        UnitQuaternion {
            w: self.w,
            x: -self.x,
            y: -self.y,
            z: -self.z,
        }
    }

    pub fn negated(&self) -> Self {
        UnitQuaternion {
            w: -self.w,
            x: -self.x,
            y: -self.y,
            z: -self.z,
        }
    }

    /// Flips the overall sign so the first component larger than a fixed
    /// epsilon is positive.
    pub fn canonical_sign(&self) -> Self {
        for c in [self.w, self.x, self.y, self.z] {
            if c.abs() > SIGN_EPS {
                return if c < 0.0 { self.negated() } else { *self };
            }
        }
        *self
    }

    /// The commutator `q r q^-1 r^-1`; independent of either lift sign.
    pub fn commutator(&self, other: &UnitQuaternion) -> UnitQuaternion {
        *self * *other * self.conjugate() * other.conjugate()
    }

    /// Distance from the central elements, and the sign of the nearest one.
    pub fn central_snap(&self) -> (i8, f64) {
        let vec_norm = (self.x * self.x + self.y * self.y + self.z * self.z).sqrt();
        let w_err = (self.w.abs() - 1.0).abs();
        let sign = if self.w >= 0.0 { 1 } else { -1 };
        (sign, vec_norm.max(w_err))
    }
}

impl std::ops::Mul for UnitQuaternion {
    type Output = UnitQuaternion;
    fn mul(self, r: UnitQuaternion) -> UnitQuaternion {
        UnitQuaternion {
            w: self.w * r.w - self.x * r.x - self.y * r.y - self.z * r.z,
            x: self.w * r.x + self.x * r.w + self.y * r.z - self.z * r.y,
            y: self.w * r.y - self.x * r.z + self.y * r.w + self.z * r.x,
            z: self.w * r.z + self.x * r.y - self.y * r.x + self.z * r.w,
        }
    }
}

/// A 3x3 rotation matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rot3(pub [[f64; 3]; 3]);

impl Rot3 {
    pub fn identity() -> Self {
        Rot3([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
    }

    pub fn rot_x(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Rot3([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])
    }

    pub fn rot_z(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Rot3([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])
    }

    pub fn mul(&self, o: &Rot3) -> Rot3 {
        let mut out = [[0.0; 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = (0..3).map(|k| self.0[i][k] * o.0[k][j]).sum();
            }
        }
        Rot3(out)
    }

    pub fn transpose(&self) -> Rot3 {
        let mut out = [[0.0; 3]; 3];
        for (i, row) in self.0.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                out[j][i] = *v;
            }
        }
        Rot3(out)
    }

    pub fn det(&self) -> f64 {
        let m = &self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    pub fn frobenius_dist(&self, o: &Rot3) -> f64 {
        let mut s = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                let d = self.0[i][j] - o.0[i][j];
                s += d * d;
            }
        }
        s.sqrt()
    }

    pub fn trace(&self) -> f64 {
        self.0[0][0] + self.0[1][1] + self.0[2][2]
    }

    /// Principal rotation angle in `[0, pi]`.
    pub fn angle(&self) -> f64 {
        ((self.trace() - 1.0) / 2.0).clamp(-1.0, 1.0).acos()
    }

    pub fn conjugated_by(&self, g: &Rot3) -> Rot3 {
        g.mul(self).mul(&g.transpose())
    }

    fn check_rotation(&self) -> Result<()> {
        let gram = self.mul(&self.transpose());
        let dist = gram.frobenius_dist(&Rot3::identity());
        if dist > ROTATION_TOL * 3.0 {
            return Err(Error::NotARotation(format!(
                "orthogonality defect {dist:e}"
            )));
        }
        if (self.det() - 1.0).abs() > ROTATION_TOL {
            return Err(Error::NotARotation(format!("determinant {}", self.det())));
        }
        Ok(())
    }
}

/// Rotation matrix of a unit quaternion.
pub fn rotation_of(q: &UnitQuaternion) -> Rot3 {
    let (w, x, y, z) = (q.w, q.x, q.y, q.z);
    Rot3([
        [
            1.0 - 2.0 * (y * y + z * z),
            2.0 * (x * y - w * z),
            2.0 * (x * z + w * y),
        ],
        [
            2.0 * (x * y + w * z),
            1.0 - 2.0 * (x * x + z * z),
            2.0 * (y * z - w * x),
        ],
        [
            2.0 * (x * z - w * y),
            2.0 * (y * z + w * x),
            1.0 - 2.0 * (x * x + y * y),
        ],
    ])
}

/// Lifts a rotation through the double cover. Sign convention: the first
/// component of `(w, x, y, z)` that is not numerically zero is positive.
pub fn lift(r: &Rot3) -> Result<UnitQuaternion> {
    r.check_rotation()?;
    let m = &r.0;
    let tr = r.trace();
    let (w, x, y, z) = if tr > 0.0 {
        let s = (tr + 1.0).sqrt() * 2.0;
        (
            0.25 * s,
            (m[2][1] - m[1][2]) / s,
            (m[0][2] - m[2][0]) / s,
            (m[1][0] - m[0][1]) / s,
        )
    } else if m[0][0] > m[1][1] && m[0][0] > m[2][2] {
        let s = (1.0 + m[0][0] - m[1][1] - m[2][2]).sqrt() * 2.0;
        (
            (m[2][1] - m[1][2]) / s,
            0.25 * s,
            (m[0][1] + m[1][0]) / s,
            (m[0][2] + m[2][0]) / s,
        )
    } else if m[1][1] > m[2][2] {
        let s = (1.0 + m[1][1] - m[0][0] - m[2][2]).sqrt() * 2.0;
        (
            (m[0][2] - m[2][0]) / s,
            (m[0][1] + m[1][0]) / s,
            0.25 * s,
            (m[1][2] + m[2][1]) / s,
        )
    } else {
        let s = (1.0 + m[2][2] - m[0][0] - m[1][1]).sqrt() * 2.0;
        (
            (m[1][0] - m[0][1]) / s,
            (m[0][2] + m[2][0]) / s,
            (m[1][2] + m[2][1]) / s,
            0.25 * s,
        )
    };
    let q = UnitQuaternion::new_normalized(w, x, y, z).canonical_sign();
    let back = rotation_of(&q);
    if back.frobenius_dist(r) > LIFT_TOL {
        return Err(Error::Internal(format!(
            "lift round trip residual {:e}",
            back.frobenius_dist(r)
        )));
    }
    Ok(q)
}

/// A lift constrained to the declared class of the cover.
#[derive(Clone, Copy, Debug)]
pub struct ClassLift {
    pub q: UnitQuaternion,
    /// Both lifts sit in the class (the half-angle is pi/2); the returned
    /// lift is the sign-convention one.
    pub ambiguous: bool,
}

/// Lifts a rotation into the cover class with half-angle `phi` in
/// `[0, pi]`: the lift whose scalar part is `cos(phi)`.
pub fn lift_in_class(r: &Rot3, phi: f64) -> Result<ClassLift> {
    if !(-ANGLE_TOL..=std::f64::consts::PI + ANGLE_TOL).contains(&phi) {
        return Err(Error::ClassMismatch(format!(
            "class angle {phi} outside [0, pi]"
        )));
    }
    let theta = r.angle();
    let two_phi = 2.0 * phi;
    let matches_angle = (theta - two_phi).abs() < ANGLE_TOL
        || (theta - (2.0 * std::f64::consts::PI - two_phi)).abs() < ANGLE_TOL;
    if !matches_angle {
        return Err(Error::ClassMismatch(format!(
            "rotation angle {theta} is neither 2*phi nor 2*pi - 2*phi for phi = {phi}"
        )));
    }
    let q = lift(r)?;
    let target = phi.cos();
    let plus = (q.w - target).abs() < ANGLE_TOL;
    let minus = (-q.w - target).abs() < ANGLE_TOL;
    match (plus, minus) {
        (true, true) => Ok(ClassLift { q, ambiguous: true }),
        (true, false) => Ok(ClassLift {
            q,
            ambiguous: false,
        }),
        (false, true) => Ok(ClassLift {
            q: q.negated(),
            ambiguous: false,
        }),
        (false, false) => Err(Error::ClassMismatch(format!(
            "no lift of the rotation has scalar part cos({phi})"
        ))),
    }
}

/// A boundary rotation together with the half-angle of the cover class it
/// is declared to sit in, kept exact as a rational multiple of pi.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MarkedRotation {
    pub matrix: Rot3,
    #[serde(with = "ratio_string")]
    pub phi_over_pi: BigRational,
}

impl MarkedRotation {
    pub fn phi(&self) -> f64 {
        self.phi_over_pi.to_f64().expect("finite rational") * std::f64::consts::PI
    }
}

/// A point of the relation variety: handle pairs, marked boundary
/// rotations, and cross-cap entries, satisfying
/// `prod [a_i, b_i] * prod d_j * prod c_k^2 = I` in SO(3).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SolutionTuple {
    pub a: Vec<Rot3>,
    pub b: Vec<Rot3>,
    pub d: Vec<MarkedRotation>,
    pub c: Vec<Rot3>,
}

impl SolutionTuple {
    pub fn surface(&self) -> Result<SurfaceSpec> {
        SurfaceSpec::new(self.a.len(), self.d.len(), self.c.len())
    }

    fn word(&self) -> Result<Rot3> {
        if self.a.len() != self.b.len() {
            return Err(Error::StructureMismatch(format!(
                "{} a-entries vs {} b-entries",
                self.a.len(),
                self.b.len()
            )));
        }
        let mut acc = Rot3::identity();
        for (a, b) in self.a.iter().zip(&self.b) {
            let comm = a.mul(b).mul(&a.transpose()).mul(&b.transpose());
            acc = acc.mul(&comm);
        }
        for d in &self.d {
            acc = acc.mul(&d.matrix);
        }
        for c in &self.c {
            acc = acc.mul(&c.mul(c));
        }
        Ok(acc)
    }

    /// Frobenius distance of the relator word from the identity.
    pub fn relation_residual(&self) -> Result<f64> {
        Ok(self.word()?.frobenius_dist(&Rot3::identity()))
    }

    pub fn conjugated_by(&self, g: &Rot3) -> SolutionTuple {
        SolutionTuple {
            a: self.a.iter().map(|m| m.conjugated_by(g)).collect(),
            b: self.b.iter().map(|m| m.conjugated_by(g)).collect(),
            d: self
                .d
                .iter()
                .map(|m| MarkedRotation {
                    matrix: m.matrix.conjugated_by(g),
                    phi_over_pi: m.phi_over_pi.clone(),
                })
                .collect(),
            c: self.c.iter().map(|m| m.conjugated_by(g)).collect(),
        }
    }
}

/// The sign of the lifted relator word.
#[derive(Clone, Debug)]
pub struct ObstructionValue {
    pub sign: i8,
    /// Distance of the lifted word from the center.
    pub residual: f64,
    /// Boundary positions whose class pins both lifts (half-angle pi/2);
    /// flipping those lifts flips the raw sign.
    pub ambiguous_positions: Vec<usize>,
}

/// Lifts the tuple (sign-free positions by the convention lift, boundary
/// positions by their declared class), multiplies the relator word upstairs
/// and snaps it to the center.
pub fn evaluate_obstruction(t: &SolutionTuple) -> Result<ObstructionValue> {
    if t.c.len() > 2 {
        return Err(Error::StructureMismatch(format!(
            "{} cross-cap entries; the surface normal form has at most 2",
            t.c.len()
        )));
    }
    let residual = t.relation_residual()?;
    if residual > RELATION_TOL {
        return Err(Error::ResidualTooLarge(residual));
    }

    let mut acc = UnitQuaternion::ONE;
    for (a, b) in t.a.iter().zip(&t.b) {
        let qa = lift(a)?;
        let qb = lift(b)?;
        acc = acc * qa.commutator(&qb);
    }
    let mut ambiguous_positions = Vec::new();
    for (j, d) in t.d.iter().enumerate() {
        let cl = lift_in_class(&d.matrix, d.phi())?;
        if cl.ambiguous {
            ambiguous_positions.push(j);
        }
        acc = acc * cl.q;
    }
    for c in &t.c {
        let qc = lift(c)?;
        acc = acc * qc * qc;
    }

    let (sign, snap) = acc.central_snap();
    if snap > SNAP_TOL {
        return Err(Error::ObstructionNotCentral(snap));
    }
    Ok(ObstructionValue {
        sign,
        residual: snap,
        ambiguous_positions,
    })
}

/// Builds a tuple hitting the requested obstruction sign: the boundary
/// entries are z-rotations in their declared classes and one handle closes
/// the relation through an axis flip, with the closing angle chosen among
/// its two values mod 2*pi to select the lifted sign. Both signs are
/// reachable for every in-range surface.
pub fn construct_witness(
    s: &SurfaceSpec,
    phi_over_pi: &[BigRational],
    target: i8,
) -> Result<SolutionTuple> {
    let kind = s.kind.index();
    if s.handles < s.kind.index().max(1) {
        return Err(Error::StructureMismatch(format!(
            "witness construction needs l >= max(1, i); got l={}, i={kind}",
            s.handles
        )));
    }
    if phi_over_pi.len() != s.boundary {
        return Err(Error::StructureMismatch(format!(
            "{} class angles for {} boundary components",
            phi_over_pi.len(),
            s.boundary
        )));
    }
    if target != 1 && target != -1 {
        return Err(Error::StructureMismatch(format!(
            "obstruction target must be +1 or -1, got {target}"
        )));
    }
    for (j, ratio) in phi_over_pi.iter().enumerate() {
        let v = ratio.to_f64().unwrap_or(f64::NAN);
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::ClassMismatch(format!(
                "class angle {j} is {v} pi, outside [0, pi]"
            )));
        }
    }

    let pi = std::f64::consts::PI;
    let phi_sum: f64 = phi_over_pi
        .iter()
        .map(|r| r.to_f64().expect("finite rational") * pi)
        .sum();
    // [R_x(pi), R_z(nu)] = R_z(-2 nu) downstairs and (cos nu, 0, 0, -sin nu)
    // upstairs, so nu = sum(phi) closes the relation with lifted sign +1 and
    // nu = sum(phi) + pi closes it with sign -1.
    let nu = if target == 1 { phi_sum } else { phi_sum + pi };

    let mut a = vec![Rot3::identity(); s.handles];
    let mut b = vec![Rot3::identity(); s.handles];
    a[0] = Rot3::rot_x(pi);
    b[0] = Rot3::rot_z(nu);
    let d = phi_over_pi
        .iter()
        .map(|r| MarkedRotation {
            matrix: Rot3::rot_z(2.0 * r.to_f64().expect("finite rational") * pi),
            phi_over_pi: r.clone(),
        })
        .collect();
    let c = vec![Rot3::identity(); kind];
    let tuple = SolutionTuple { a, b, d, c };

    let value = evaluate_obstruction(&tuple)?;
    if value.sign != target {
        return Err(Error::Internal(format!(
            "constructed witness has sign {}, requested {target}",
            value.sign
        )));
    }
    Ok(tuple)
}

/// Haar-uniform random rotation from a Gaussian quaternion.
pub fn random_rotation<R: Rng>(rng: &mut R) -> Rot3 {
    let w: f64 = StandardNormal.sample(rng);
    let x: f64 = StandardNormal.sample(rng);
    let y: f64 = StandardNormal.sample(rng);
    let z: f64 = StandardNormal.sample(rng);
    rotation_of(&UnitQuaternion::new_normalized(w, x, y, z))
}

mod ratio_string {
    use num_rational::BigRational;
    use serde::{de, Deserialize, Deserializer, Serializer};
    use std::str::FromStr;

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let raw = String::deserialize(d)?;
        BigRational::from_str(raw.trim()).map_err(de::Error::custom)
    }
}
