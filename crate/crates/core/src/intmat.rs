//! Dense integer matrices with arbitrary-precision entries, and the Smith
//! normal form with unimodular transforms on which all group computations
//! are built.
//!
//! Conventions: matrices are row-major; "lattices" are row spans. The Smith
//! decomposition of `M` is `D = U * M * V` with `U`, `V` unimodular and `D`
//! diagonal, `d_i >= 0`, `d_i | d_{i+1}`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Row-major matrix over Z with arbitrary-precision entries.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    /// Builds a matrix from rows, all of which must have length `cols`.
    /// The explicit column count matters when `rows` is empty.
    pub fn from_rows(rows: &[Vec<BigInt>], cols: usize) -> Result<Self> {
        let mut m = IntMatrix::zero(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {} has length {}, expected {}",
                    i,
                    row.len(),
                    cols
                )));
            }
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        Ok(m)
    }

    /// Convenience constructor from machine integers.
    pub fn from_i64(rows: &[&[i64]], cols: usize) -> Self {
        let data: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect();
        IntMatrix::from_rows(&data, cols).expect("ragged i64 rows")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &BigInt {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row_vec(&self, r: usize) -> Vec<BigInt> {
        self.entries[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn all_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|r| self.row_vec(r)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.at(i, j) + a * other.at(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Stacks `other` below `self`; column counts must agree.
    pub fn vstack(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "vstack: {} vs {} columns",
                self.cols, other.cols
            )));
        }
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        Ok(IntMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            entries,
        })
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += k * row[src]
    fn row_addmul(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = self.at(dst, j) + k * self.at(src, j);
            self.set(dst, j, v);
        }
    }

    /// col[dst] += k * col[src]
    fn col_addmul(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = self.at(i, dst) + k * self.at(i, src);
            self.set(i, dst, v);
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -self.at(r, j);
            self.set(r, j, v);
        }
    }

    /// |det| computed as the product of Smith diagonal entries.
    pub fn abs_det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "abs_det needs a square matrix");
        let snf = smith_normal_form(self);
        let mut p = BigInt::one();
        for i in 0..self.rows {
            p *= snf.diag.at(i, i);
        }
        p
    }
}

impl std::fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.at(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Smith decomposition `diag = left * m * right`.
#[derive(Clone, Debug)]
pub struct Smith {
    pub left: IntMatrix,
    pub diag: IntMatrix,
    pub right: IntMatrix,
    pub rank: usize,
}

/// Nearest-integer quotient; the remainder satisfies |r| <= |b|/2.
fn rounded_div(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_rem(b);
    if r.magnitude() * 2u8 > *b.magnitude() {
        if (r.is_negative()) == (b.is_negative()) {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

fn find_pivot(d: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..d.rows() {
        for j in t..d.cols() {
            if !d.at(i, j).is_zero() {
                match best {
                    None => best = Some((i, j)),
                    Some((bi, bj)) => {
                        if d.at(i, j).magnitude() < d.at(bi, bj).magnitude() {
                            best = Some((i, j));
                        }
                    }
                }
            }
        }
    }
    best
}

/// Classical elimination Smith normal form.
///
/// Total on every matrix, including empty ones. Entries are kept exact;
/// there is no overflow path.
pub fn smith_normal_form(m: &IntMatrix) -> Smith {
    let rows = m.rows();
    let cols = m.cols();
    let mut d = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let min_dim = rows.min(cols);

    let mut t = 0;
    'stage: while t < min_dim {
        let Some((pi, pj)) = find_pivot(&d, t) else {
            break;
        };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);

        // Euclidean sweeps until row t and column t hold only the pivot.
        loop {
            if let Some(i) = (t + 1..rows).find(|&i| !d.at(i, t).is_zero()) {
                let q = -rounded_div(d.at(i, t), d.at(t, t));
                d.row_addmul(i, t, &q);
                u.row_addmul(i, t, &q);
                if !d.at(i, t).is_zero() {
                    d.swap_rows(t, i);
                    u.swap_rows(t, i);
                }
                continue;
            }
            if let Some(j) = (t + 1..cols).find(|&j| !d.at(t, j).is_zero()) {
                let q = -rounded_div(d.at(t, j), d.at(t, t));
                d.col_addmul(j, t, &q);
                v.col_addmul(j, t, &q);
                if !d.at(t, j).is_zero() {
                    d.swap_cols(t, j);
                    v.swap_cols(t, j);
                }
                continue;
            }
            break;
        }

        // The pivot must divide the remaining submatrix for the chain
        // d_i | d_{i+1}; folding an offending row in and re-eliminating
        // strictly shrinks the pivot.
        for i in t + 1..rows {
            for j in t + 1..cols {
                if !d.at(i, j).mod_floor(d.at(t, t)).is_zero() {
                    d.row_addmul(t, i, &BigInt::one());
                    u.row_addmul(t, i, &BigInt::one());
                    continue 'stage;
                }
            }
        }
        t += 1;
    }

    for i in 0..min_dim {
        if d.at(i, i).is_negative() {
            d.negate_row(i);
            u.negate_row(i);
        }
    }
    let rank = (0..min_dim).filter(|&i| !d.at(i, i).is_zero()).count();
    Smith {
        left: u,
        diag: d,
        rank,
        right: v,
    }
}

fn mul_vec_mat(v: &[BigInt], m: &IntMatrix) -> Vec<BigInt> {
    assert_eq!(v.len(), m.rows(), "vector-matrix shape");
    let mut out = vec![BigInt::zero(); m.cols()];
    for (i, vi) in v.iter().enumerate() {
        if vi.is_zero() {
            continue;
        }
        for (j, o) in out.iter_mut().enumerate() {
            *o += vi * m.at(i, j);
        }
    }
    out
}

/// Solves `x * M = b` over Z, if a solution exists.
pub fn solve_left(m: &IntMatrix, b: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
    if b.len() != m.cols() {
        return Err(Error::DimensionMismatch(format!(
            "solve_left: vector length {}, matrix has {} columns",
            b.len(),
            m.cols()
        )));
    }
    let snf = smith_normal_form(m);
    // x M = b  <=>  (x U^-1) D = b V, so solve y D = c and set x = y U.
    let c = mul_vec_mat(b, &snf.right);
    let min_dim = m.rows().min(m.cols());
    let mut y = vec![BigInt::zero(); m.rows()];
    for (i, ci) in c.iter().enumerate() {
        if i < min_dim && !snf.diag.at(i, i).is_zero() {
            let (q, r) = ci.div_rem(snf.diag.at(i, i));
            if !r.is_zero() {
                return Ok(None);
            }
            y[i] = q;
        } else if !ci.is_zero() {
            return Ok(None);
        }
    }
    Ok(Some(mul_vec_mat(&y, &snf.left)))
}

/// Generators of the left kernel `{x : x * M = 0}` as rows.
pub fn left_kernel(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    let snf = smith_normal_form(m);
    (snf.rank..m.rows()).map(|i| snf.left.row_vec(i)).collect()
}
