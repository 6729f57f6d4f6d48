//! Small exact integer linear algebra on `Z^n`: square matrices, determinants,
//! unimodular inverses, rational solving and integer kernels.

use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vector = Vec<i64>;

pub fn unit_vector(n: usize, k: usize) -> Vector {
    let mut v = vec![0; n];
    v[k] = 1;
    v
}

pub fn add(a: &[i64], b: &[i64]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[i64], b: &[i64]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(a: &[i64], k: i64) -> Vector {
    a.iter().map(|x| x * k).collect()
}

pub fn neg(a: &[i64]) -> Vector {
    a.iter().map(|x| -x).collect()
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn inf_norm(a: &[i64]) -> i64 {
    a.iter().map(|x| x.abs()).max().unwrap_or(0)
}

pub fn is_zero(a: &[i64]) -> bool {
    a.iter().all(|&x| x == 0)
}

/// Whether all coordinates are `>= 0`.
pub fn is_nonnegative(a: &[i64]) -> bool {
    a.iter().all(|&x| x >= 0)
}

/// Square integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<i64>>", into = "Vec<Vec<i64>>")]
pub struct IntMatrix {
    n: usize,
    data: Vec<i64>,
}

impl TryFrom<Vec<Vec<i64>>> for IntMatrix {
    type Error = Error;

    fn try_from(rows: Vec<Vec<i64>>) -> Result<Self> {
        IntMatrix::from_rows(&rows)
    }
}

impl From<IntMatrix> for Vec<Vec<i64>> {
    fn from(m: IntMatrix) -> Self {
        m.rows()
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows()
            .iter()
            .map(|r| format!("{r:?}"))
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

impl IntMatrix {
    pub fn zero(n: usize) -> Self {
        IntMatrix {
            n,
            data: vec![0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vector]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension("matrix is not square".into()));
        }
        Ok(IntMatrix {
            n,
            data: rows.concat(),
        })
    }

    pub fn from_columns(cols: &[Vector]) -> Result<Self> {
        Ok(Self::from_rows(cols)?.transpose())
    }

    /// Permutation matrix `P` with `P e_k = e_{perm[k]}`.
    pub fn permutation(perm: &[usize]) -> Self {
        let n = perm.len();
        let mut m = Self::zero(n);
        for (k, &p) in perm.iter().enumerate() {
            m.data[p * n + k] = 1;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.n + j] = v;
    }

    pub fn rows(&self) -> Vec<Vector> {
        self.data.chunks(self.n.max(1)).map(|r| r.to_vec()).take(self.n).collect()
    }

    pub fn column(&self, j: usize) -> Vector {
        (0..self.n).map(|i| self.get(i, j)).collect()
    }

    pub fn columns(&self) -> Vec<Vector> {
        (0..self.n).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zero(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t.data[j * self.n + i] = self.get(i, j);
            }
        }
        t
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.n)
    }

    pub fn try_mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.n != other.n {
            return Err(Error::Dimension(format!("{} vs {}", self.n, other.n)));
        }
        let n = self.n;
        let mut out = Self::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    let t = a
                        .checked_mul(other.data[k * n + j])
                        .and_then(|t| out.data[i * n + j].checked_add(t))
                        .ok_or(Error::Overflow("matrix product"))?;
                    out.data[i * n + j] = t;
                }
            }
        }
        Ok(out)
    }

    /// Matrix product; panics on dimension mismatch or overflow.
    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        self.try_mul(other).unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn mul_vec(&self, v: &[i64]) -> Vector {
        assert_eq!(v.len(), self.n, "vector length");
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| self.get(i, j).checked_mul(v[j]).expect("overflow in mul_vec"))
                    .fold(0i64, |acc, x| acc.checked_add(x).expect("overflow in mul_vec"))
            })
            .collect()
    }

    /// Fraction-free (Bareiss) determinant.
    pub fn det(&self) -> i64 {
        let rows: Vec<Vec<i128>> = self
            .rows()
            .into_iter()
            .map(|r| r.into_iter().map(i128::from).collect())
            .collect();
        let d = bareiss_det(rows);
        i64::try_from(d).expect("determinant overflow")
    }

    pub fn is_unimodular(&self) -> bool {
        self.det().abs() == 1
    }

    /// Inverse of a unimodular matrix (adjugate / determinant).
    pub fn inverse_unimodular(&self) -> Result<IntMatrix> {
        let d = self.det();
        if d.abs() != 1 {
            return Err(Error::NotABasis(format!("determinant {d}")));
        }
        let n = self.n;
        let mut inv = Self::zero(n);
        for i in 0..n {
            for j in 0..n {
                let minor = self.minor(j, i);
                let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
                inv.data[i * n + j] = sign * minor * d;
            }
        }
        Ok(inv)
    }

    fn minor(&self, skip_r: usize, skip_c: usize) -> i64 {
        if self.n == 1 {
            return 1;
        }
        let rows: Vec<Vec<i128>> = (0..self.n)
            .filter(|&i| i != skip_r)
            .map(|i| {
                (0..self.n)
                    .filter(|&j| j != skip_c)
                    .map(|j| self.get(i, j) as i128)
                    .collect()
            })
            .collect();
        i64::try_from(bareiss_det(rows)).expect("minor overflow")
    }

    /// Leading principal minors `det(A[..k, ..k])` for `k = 1..=n`.
    pub fn leading_minors(&self) -> Vec<i128> {
        (1..=self.n)
            .map(|k| {
                let rows: Vec<Vec<i128>> = (0..k)
                    .map(|i| (0..k).map(|j| self.get(i, j) as i128).collect())
                    .collect();
                bareiss_det(rows)
            })
            .collect()
    }

    /// Principal submatrix on the given index set.
    pub fn principal(&self, idx: &[usize]) -> IntMatrix {
        let k = idx.len();
        let mut m = Self::zero(k);
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                m.data[a * k + b] = self.get(i, j);
            }
        }
        m
    }
}

fn bareiss_det(mut a: Vec<Vec<i128>>) -> i128 {
    let n = a.len();
    if n == 0 {
        return 1;
    }
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// Rank over `Q` of a family of integer vectors.
pub fn rank(vectors: &[Vector]) -> usize {
    let mut rows: Vec<Vec<i128>> = vectors
        .iter()
        .map(|v| v.iter().map(|&x| x as i128).collect())
        .collect();
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, p);
        for i in r + 1..rows.len() {
            if rows[i][c] != 0 {
                let (a, b) = (rows[r][c], rows[i][c]);
                for j in c..ncols {
                    rows[i][j] = rows[i][j] * a - rows[r][j] * b;
                }
                let g = rows[i].iter().fold(0i128, |g, x| g.gcd(x));
                if g > 1 {
                    rows[i].iter_mut().for_each(|x| *x /= g);
                }
            }
        }
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    r
}

/// Coefficients `c` with `sum c_k basis[k] = target`, when `target` lies in
/// the rational span of the (linearly independent) `basis`.
pub fn solve_rational(basis: &[Vector], target: &[i64]) -> Option<Vec<Ratio<i128>>> {
    let l = basis.len();
    let n = target.len();
    // Augmented n x (l+1) system.
    let mut a: Vec<Vec<Ratio<i128>>> = (0..n)
        .map(|i| {
            let mut row: Vec<Ratio<i128>> =
                (0..l).map(|k| Ratio::from_integer(basis[k][i] as i128)).collect();
            row.push(Ratio::from_integer(target[i] as i128));
            row
        })
        .collect();
    let zero = Ratio::from_integer(0);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..l {
        let Some(p) = (r..n).find(|&i| a[i][c] != zero) else {
            return None; // dependent basis
        };
        a.swap(r, p);
        let piv = a[r][c];
        for j in c..=l {
            a[r][j] /= piv;
        }
        for i in 0..n {
            if i != r && a[i][c] != zero {
                let f = a[i][c];
                for j in c..=l {
                    let t = a[r][j] * f;
                    a[i][j] -= t;
                }
            }
        }
        pivots.push(r);
        r += 1;
    }
    if (r..n).any(|i| a[i][l] != zero) {
        return None;
    }
    Some(pivots.iter().map(|&p| a[p][l]).collect())
}

/// Integer coordinates of `target` in `basis`, when they exist.
pub fn solve_integer(basis: &[Vector], target: &[i64]) -> Option<Vec<i64>> {
    solve_rational(basis, target)?
        .into_iter()
        .map(|c| c.is_integer().then(|| c.to_integer() as i64))
        .collect()
}

/// A `Z`-basis of `{x in Z^n : r . x = 0 for every row r}`.
///
/// Column-style unimodular reduction: column operations bring the rows to
/// echelon form while the same operations are applied to an identity matrix;
/// the columns of that matrix beyond the pivots span the kernel over `Z`.
pub fn integer_kernel(rows: &[Vector], n: usize) -> Vec<Vector> {
    let mut a: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    // u[col] is the col-th column of the transform.
    let mut u: Vec<Vec<i128>> = (0..n)
        .map(|k| (0..n).map(|i| (i == k) as i128).collect())
        .collect();
    let mut p = 0;
    for row in 0..a.len() {
        if p == n {
            break;
        }
        loop {
            // Pick the column >= p with the smallest nonzero entry in this row.
            let Some(best) = (p..n)
                .filter(|&c| a[row][c] != 0)
                .min_by_key(|&c| a[row][c].abs())
            else {
                break;
            };
            swap_cols(&mut a, &mut u, p, best);
            let mut done = true;
            for c in p + 1..n {
                if a[row][c] != 0 {
                    let f = a[row][c].div_euclid(a[row][p]);
                    col_axpy(&mut a, &mut u, c, p, -f);
                    if a[row][c] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                p += 1;
                break;
            }
        }
    }
    u[p..]
        .iter()
        .map(|col| {
            let v: Vector = col.iter().map(|&x| x as i64).collect();
            let g = v.iter().fold(0i64, |g, x| g.gcd(x));
            debug_assert!(g == 1 || g == 0);
            v
        })
        .collect()
}

fn swap_cols(a: &mut [Vec<i128>], u: &mut [Vec<i128>], i: usize, j: usize) {
    if i == j {
        return;
    }
    for row in a.iter_mut() {
        row.swap(i, j);
    }
    u.swap(i, j);
}

/// column[dst] += f * column[src]
fn col_axpy(a: &mut [Vec<i128>], u: &mut [Vec<i128>], dst: usize, src: usize, f: i128) {
    for row in a.iter_mut() {
        row[dst] += f * row[src];
    }
    let s = u[src].clone();
    for (x, y) in u[dst].iter_mut().zip(s) {
        *x += f * y;
    }
}
