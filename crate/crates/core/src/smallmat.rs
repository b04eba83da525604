//! Dense real matrices of dimension 2, 3 or 4 and the eigenvalue kernels the
//! entanglement measures are built on.
//!
//! The symmetric solver is a cyclic Jacobi iteration. Non-symmetric input
//! (the product of a density matrix with its spin-flipped partner) goes
//! through an elimination Hessenberg reduction followed by Francis
//! double-shift QR; 2x2 input uses the quadratic formula directly.
#![allow(clippy::needless_range_loop)]

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

const MAX_DIM: usize = 4;
const MAX_JACOBI_SWEEPS: usize = 64;
const MAX_QR_ITERATIONS: usize = 60;

/// Default relative asymmetry accepted by the symmetric routines.
pub const DEFAULT_SYMMETRY_TOL: f64 = 1e-12;
/// Jacobi stops once the off-diagonal Frobenius norm drops below this
/// fraction of the matrix norm.
pub const JACOBI_TOL: f64 = 1e-14;
/// Imaginary parts below this fraction of `max|entry|` are treated as roundoff.
pub const IMAG_CLAMP_TOL: f64 = 1e-10;

/// Row-major real matrix with `dim` in `{2, 3, 4}`.
#[derive(Clone, Copy, PartialEq)]
pub struct SmallMatrix<T> {
    dim: usize,
    data: [[T; MAX_DIM]; MAX_DIM],
}

impl<T: Scalar> SmallMatrix<T> {
    /// Builds a matrix from `dim * dim` row-major entries.
    pub fn new(dim: usize, entries: &[T]) -> Result<Self> {
        check_dim(dim)?;
        if entries.len() != dim * dim {
            return Err(Error::OutOfRange {
                what: "entry count",
                detail: format!(
                    "expected {} entries for dim {dim}, got {}",
                    dim * dim,
                    entries.len()
                ),
            });
        }
        if entries.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        let mut m = Self::zeros_unchecked(dim);
        for (idx, &x) in entries.iter().enumerate() {
            m.data[idx / dim][idx % dim] = x;
        }
        Ok(m)
    }

    pub fn from_rows<const D: usize>(rows: [[T; D]; D]) -> Result<Self> {
        let flat: Vec<T> = rows.iter().flat_map(|r| r.iter().copied()).collect();
        Self::new(D, &flat)
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self::zeros_unchecked(dim))
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            m.data[i][i] = T::one();
        }
        Ok(m)
    }

    pub fn from_diagonal(diag: &[T]) -> Result<Self> {
        let mut m = Self::zeros(diag.len())?;
        if diag.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        for (i, &x) in diag.iter().enumerate() {
            m.data[i][i] = x;
        }
        Ok(m)
    }

    fn zeros_unchecked(dim: usize) -> Self {
        Self {
            dim,
            data: [[T::zero(); MAX_DIM]; MAX_DIM],
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Row-major copy of the entries.
    pub fn entries(&self) -> Vec<T> {
        (0..self.dim)
            .flat_map(|i| (0..self.dim).map(move |j| (i, j)))
            .map(|(i, j)| self.data[i][j])
            .collect()
    }

    pub fn trace(&self) -> T {
        (0..self.dim).fold(T::zero(), |acc, i| acc + self.data[i][i])
    }

    pub fn max_abs(&self) -> T {
        self.iter().fold(T::zero(), |acc, x| acc.max(x.abs()))
    }

    pub fn frobenius_norm(&self) -> T {
        self.iter().fold(T::zero(), |acc, x| acc + x * x).sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.iter().all(|x| x.is_finite())
    }

    pub fn transpose(&self) -> Self {
        let mut t = *self;
        for i in 0..self.dim {
            for j in 0..self.dim {
                t.data[i][j] = self.data[j][i];
            }
        }
        t
    }

    /// Largest `|m[i][j] - m[j][i]|`.
    pub fn max_asymmetry(&self) -> T {
        let mut worst = T::zero();
        for i in 0..self.dim {
            for j in (i + 1)..self.dim {
                worst = worst.max((self.data[i][j] - self.data[j][i]).abs());
            }
        }
        worst
    }

    /// Maximum absolute entrywise difference; `None` on dimension mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> Option<T> {
        (self.dim == other.dim).then(|| {
            self.iter()
                .zip(other.iter())
                .fold(T::zero(), |acc, (x, y)| acc.max((x - y).abs()))
        })
    }

    /// Partial trace of a two-qubit (4x4) matrix over its first qubit.
    pub fn trace_out_first_qubit(&self) -> Result<Self> {
        expect_dim(self, 4)?;
        let mut out = Self::zeros_unchecked(2);
        for i in 0..2 {
            for j in 0..2 {
                out.data[i][j] = self.data[i][j] + self.data[2 + i][2 + j];
            }
        }
        Ok(out)
    }

    /// Partial trace of a two-qubit (4x4) matrix over its second qubit.
    pub fn trace_out_second_qubit(&self) -> Result<Self> {
        expect_dim(self, 4)?;
        let mut out = Self::zeros_unchecked(2);
        for i in 0..2 {
            for j in 0..2 {
                out.data[i][j] = self.data[2 * i][2 * j] + self.data[2 * i + 1][2 * j + 1];
            }
        }
        Ok(out)
    }

    fn iter(&self) -> impl Iterator<Item = T> + '_ {
        (0..self.dim).flat_map(move |i| self.data[i][..self.dim].iter().copied())
    }

    fn check_symmetric(&self, rel_tol: T) -> Result<()> {
        if !self.is_finite() {
            return Err(Error::NonFinite);
        }
        let asym = self.max_asymmetry();
        let allowed = rel_tol * self.max_abs();
        if asym > allowed {
            return Err(Error::NotSymmetric {
                asymmetry: asym.to_f64().unwrap_or(f64::NAN),
                tolerance: allowed.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(())
    }
}

impl<T: Scalar> Index<(usize, usize)> for SmallMatrix<T> {
    type Output = T;

    fn index(&self, (i, j): (usize, usize)) -> &T {
        assert!(
            i < self.dim && j < self.dim,
            "index ({i}, {j}) out of bounds for dim {}",
            self.dim
        );
        &self.data[i][j]
    }
}

impl<T: Scalar> IndexMut<(usize, usize)> for SmallMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        assert!(
            i < self.dim && j < self.dim,
            "index ({i}, {j}) out of bounds for dim {}",
            self.dim
        );
        &mut self.data[i][j]
    }
}

impl<T: Scalar> Mul for SmallMatrix<T> {
    type Output = SmallMatrix<T>;

    /// Panics on dimension mismatch.
    fn mul(self, rhs: Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "matrix product dimension mismatch");
        let n = self.dim;
        let mut out = Self::zeros_unchecked(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = T::zero();
                for k in 0..n {
                    acc += self.data[i][k] * rhs.data[k][j];
                }
                out.data[i][j] = acc;
            }
        }
        out
    }
}

impl<T: fmt::Debug> fmt::Debug for SmallMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[T]> = (0..self.dim).map(|i| &self.data[i][..self.dim]).collect();
        f.debug_struct("SmallMatrix")
            .field("dim", &self.dim)
            .field("rows", &rows)
            .finish()
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if (2..=MAX_DIM).contains(&dim) {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension(dim))
    }
}

fn expect_dim<T>(m: &SmallMatrix<T>, dim: usize) -> Result<()> {
    if m.dim == dim {
        Ok(())
    } else {
        Err(Error::WrongDimension {
            expected: dim,
            actual: m.dim,
        })
    }
}

/// Eigenvalues and orthonormal eigenvectors of a symmetric matrix.
#[derive(Debug, Clone)]
pub struct SymmetricEigen<T> {
    /// Sorted descending.
    pub values: Vec<T>,
    /// `vectors[i]` is the unit eigenvector belonging to `values[i]`.
    pub vectors: Vec<Vec<T>>,
}

/// Eigenvalues of a symmetric matrix, sorted descending.
///
/// `rel_tol` bounds `max|m_ij - m_ji|` relative to `max|m_ij|`.
pub fn sym_eigenvalues<T: Scalar>(m: &SmallMatrix<T>, rel_tol: T) -> Result<Vec<T>> {
    sym_eigen(m, rel_tol).map(|e| e.values)
}

/// Full symmetric eigendecomposition by cyclic Jacobi rotations.
pub fn sym_eigen<T: Scalar>(m: &SmallMatrix<T>, rel_tol: T) -> Result<SymmetricEigen<T>> {
    m.check_symmetric(rel_tol)?;
    let n = m.dim;
    let mut a = m.data;
    // Symmetrize so the rotations act on an exactly symmetric matrix.
    for i in 0..n {
        for j in (i + 1)..n {
            let avg = (a[i][j] + a[j][i]) * T::lit(0.5);
            a[i][j] = avg;
            a[j][i] = avg;
        }
    }
    let mut v = [[T::zero(); MAX_DIM]; MAX_DIM];
    for (i, row) in v.iter_mut().enumerate().take(n) {
        row[i] = T::one();
    }

    let threshold = T::tol(JACOBI_TOL) * m.frobenius_norm();
    let off_norm = |a: &[[T; MAX_DIM]; MAX_DIM]| {
        let mut s = T::zero();
        for i in 0..n {
            for j in (i + 1)..n {
                s += a[i][j] * a[i][j];
            }
        }
        (s + s).sqrt()
    };

    let mut sweeps = 0;
    while off_norm(&a) > threshold {
        if sweeps == MAX_JACOBI_SWEEPS {
            return Err(Error::NoConvergence { iterations: sweeps });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                if a[p][q] == T::zero() {
                    continue;
                }
                let (c, s) = jacobi_rotation(a[p][p], a[q][q], a[p][q]);
                // A <- J^T A J with J the (p, q) plane rotation.
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                a[p][q] = T::zero();
                a[q][p] = T::zero();
                for row in v.iter_mut().take(n) {
                    let vkp = row[p];
                    let vkq = row[q];
                    row[p] = c * vkp - s * vkq;
                    row[q] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[j][j].partial_cmp(&a[i][i]).expect("finite eigenvalues"));
    Ok(SymmetricEigen {
        values: order.iter().map(|&i| a[i][i]).collect(),
        vectors: order
            .iter()
            .map(|&col| (0..n).map(|row| v[row][col]).collect())
            .collect(),
    })
}

/// `(c, s)` zeroing the off-diagonal of `[[app, apq], [apq, aqq]]` under
/// `J^T A J`, `J = [[c, s], [-s, c]]`.
fn jacobi_rotation<T: Scalar>(app: T, aqq: T, apq: T) -> (T, T) {
    let theta = (aqq - app) / (apq + apq);
    let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
    let t = if theta.is_infinite() { T::zero() } else { t };
    let c = T::one() / (t * t + T::one()).sqrt();
    (c, t * c)
}

/// Sum of absolute eigenvalues of a symmetric matrix (its trace norm).
pub fn trace_norm_symmetric<T: Scalar>(m: &SmallMatrix<T>) -> Result<T> {
    let values = sym_eigenvalues(m, T::tol(DEFAULT_SYMMETRY_TOL))?;
    Ok(values.into_iter().fold(T::zero(), |acc, x| acc + x.abs()))
}

/// Determinant of a 2x2 matrix.
pub fn det2<T: Scalar>(m: &SmallMatrix<T>) -> Result<T> {
    expect_dim(m, 2)?;
    Ok(m.data[0][0] * m.data[1][1] - m.data[0][1] * m.data[1][0])
}

/// Eigenvalues of an arbitrary real matrix, sorted by descending real part
/// (then descending imaginary part).
///
/// Imaginary parts smaller than `1e-10 * max|entry|` are set to zero.
pub fn general_eigenvalues<T: Scalar>(m: &SmallMatrix<T>) -> Result<Vec<Complex<T>>> {
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    let mut values = match m.dim {
        2 => quadratic_eigenvalues(m),
        _ => hessenberg_qr_eigenvalues(m)?,
    };
    let clamp = T::tol(IMAG_CLAMP_TOL) * m.max_abs();
    for z in values.iter_mut() {
        if z.im.abs() < clamp {
            z.im = T::zero();
        }
    }
    values.sort_by(|x, y| {
        y.re.partial_cmp(&x.re)
            .expect("finite eigenvalues")
            .then(y.im.partial_cmp(&x.im).expect("finite eigenvalues"))
    });
    Ok(values)
}

fn quadratic_eigenvalues<T: Scalar>(m: &SmallMatrix<T>) -> Vec<Complex<T>> {
    let [a, b] = [m.data[0][0], m.data[0][1]];
    let [c, d] = [m.data[1][0], m.data[1][1]];
    let half = T::lit(0.5);
    let p = (a - d) * half;
    let w = b * c;
    let q = p * p + w;
    if q >= T::zero() {
        let z = p + q.sqrt().copysign(p);
        let first = d + z;
        let second = if z == T::zero() { d } else { d - w / z };
        vec![
            Complex::new(first, T::zero()),
            Complex::new(second, T::zero()),
        ]
    } else {
        let re = d + p;
        let im = (-q).sqrt();
        vec![Complex::new(re, im), Complex::new(re, -im)]
    }
}

/// Elimination to upper Hessenberg form, then the Francis double-shift QR
/// iteration. Works on a 1-based scratch copy to keep the index arithmetic
/// of the classic formulation.
fn hessenberg_qr_eigenvalues<T: Scalar>(m: &SmallMatrix<T>) -> Result<Vec<Complex<T>>> {
    let n = m.dim;
    let mut a = [[T::zero(); MAX_DIM + 1]; MAX_DIM + 1];
    for i in 0..n {
        for j in 0..n {
            a[i + 1][j + 1] = m.data[i][j];
        }
    }
    reduce_to_hessenberg(&mut a, n);
    francis_qr(&mut a, n)
}

fn reduce_to_hessenberg<T: Scalar>(a: &mut [[T; MAX_DIM + 1]; MAX_DIM + 1], n: usize) {
    for m in 2..n {
        let mut x = T::zero();
        let mut pivot = m;
        for j in m..=n {
            if a[j][m - 1].abs() > x.abs() {
                x = a[j][m - 1];
                pivot = j;
            }
        }
        if pivot != m {
            for j in (m - 1)..=n {
                let tmp = a[pivot][j];
                a[pivot][j] = a[m][j];
                a[m][j] = tmp;
            }
            for row in a.iter_mut().take(n + 1).skip(1) {
                row.swap(pivot, m);
            }
        }
        if x != T::zero() {
            for i in (m + 1)..=n {
                let mut y = a[i][m - 1];
                if y != T::zero() {
                    y /= x;
                    a[i][m - 1] = y;
                    for j in m..=n {
                        let amj = a[m][j];
                        a[i][j] -= y * amj;
                    }
                    for row in a.iter_mut().take(n + 1).skip(1) {
                        let rji = row[i];
                        row[m] += y * rji;
                    }
                }
            }
        }
    }
    // Discard the stored multipliers below the subdiagonal.
    for i in 3..=n {
        for j in 1..(i - 1) {
            a[i][j] = T::zero();
        }
    }
}

#[allow(unused_assignments)]
fn francis_qr<T: Scalar>(
    a: &mut [[T; MAX_DIM + 1]; MAX_DIM + 1],
    n: usize,
) -> Result<Vec<Complex<T>>> {
    let mut wr = [T::zero(); MAX_DIM + 1];
    let mut wi = [T::zero(); MAX_DIM + 1];

    let mut anorm = T::zero();
    for i in 1..=n {
        for j in i.saturating_sub(1).max(1)..=n {
            anorm += a[i][j].abs();
        }
    }

    let (mut p, mut q, mut r) = (T::zero(), T::zero(), T::zero());
    let (mut x, mut y, mut z, mut w);
    let mut shift = T::zero();
    let mut nn = n;
    while nn >= 1 {
        let mut its = 0;
        loop {
            // Look for a single small subdiagonal element.
            let mut l = nn;
            while l >= 2 {
                let mut s = a[l - 1][l - 1].abs() + a[l][l].abs();
                if s == T::zero() {
                    s = anorm;
                }
                if a[l][l - 1].abs() + s == s {
                    a[l][l - 1] = T::zero();
                    break;
                }
                l -= 1;
            }
            x = a[nn][nn];
            if l == nn {
                // One root found.
                wr[nn] = x + shift;
                wi[nn] = T::zero();
                nn -= 1;
            } else {
                y = a[nn - 1][nn - 1];
                w = a[nn][nn - 1] * a[nn - 1][nn];
                if l + 1 == nn {
                    // Two roots found.
                    p = T::lit(0.5) * (y - x);
                    q = p * p + w;
                    z = q.abs().sqrt();
                    x += shift;
                    if q >= T::zero() {
                        z = p + z.copysign(p);
                        wr[nn - 1] = x + z;
                        wr[nn] = x + z;
                        if z != T::zero() {
                            wr[nn] = x - w / z;
                        }
                        wi[nn - 1] = T::zero();
                        wi[nn] = T::zero();
                    } else {
                        wr[nn - 1] = x + p;
                        wr[nn] = x + p;
                        wi[nn - 1] = -z;
                        wi[nn] = z;
                    }
                    nn = nn.saturating_sub(2);
                } else {
                    if its == MAX_QR_ITERATIONS {
                        return Err(Error::NoConvergence { iterations: its });
                    }
                    if its == 10 || its == 20 {
                        // Exceptional shift.
                        shift += x;
                        for i in 1..=nn {
                            a[i][i] -= x;
                        }
                        let s = a[nn][nn - 1].abs() + a[nn - 1][nn - 2].abs();
                        x = T::lit(0.75) * s;
                        y = x;
                        w = T::lit(-0.4375) * s * s;
                    }
                    its += 1;

                    // Look for two consecutive small subdiagonal elements.
                    let mut m = nn - 2;
                    loop {
                        z = a[m][m];
                        r = x - z;
                        let s = y - z;
                        p = (r * s - w) / a[m + 1][m] + a[m][m + 1];
                        q = a[m + 1][m + 1] - z - r - s;
                        r = a[m + 2][m + 1];
                        let scale = p.abs() + q.abs() + r.abs();
                        p /= scale;
                        q /= scale;
                        r /= scale;
                        if m == l {
                            break;
                        }
                        let u = a[m][m - 1].abs() * (q.abs() + r.abs());
                        let v = p.abs() * (a[m - 1][m - 1].abs() + z.abs() + a[m + 1][m + 1].abs());
                        if u + v == v {
                            break;
                        }
                        m -= 1;
                    }
                    for i in (m + 2)..=nn {
                        a[i][i - 2] = T::zero();
                        if i != m + 2 {
                            a[i][i - 3] = T::zero();
                        }
                    }

                    // Double QR step on rows l..nn and columns m..nn.
                    for k in m..nn {
                        if k != m {
                            p = a[k][k - 1];
                            q = a[k + 1][k - 1];
                            r = T::zero();
                            if k != nn - 1 {
                                r = a[k + 2][k - 1];
                            }
                            x = p.abs() + q.abs() + r.abs();
                            if x != T::zero() {
                                p /= x;
                                q /= x;
                                r /= x;
                            }
                        }
                        let s = (p * p + q * q + r * r).sqrt().copysign(p);
                        if s != T::zero() {
                            if k == m {
                                if l != m {
                                    a[k][k - 1] = -a[k][k - 1];
                                }
                            } else {
                                a[k][k - 1] = -s * x;
                            }
                            p += s;
                            x = p / s;
                            y = q / s;
                            z = r / s;
                            q /= p;
                            r /= p;
                            for j in k..=nn {
                                p = a[k][j] + q * a[k + 1][j];
                                if k != nn - 1 {
                                    p += r * a[k + 2][j];
                                    a[k + 2][j] -= p * z;
                                }
                                a[k + 1][j] -= p * y;
                                a[k][j] -= p * x;
                            }
                            let mmin = nn.min(k + 3);
                            for row in a.iter_mut().take(mmin + 1).skip(l) {
                                p = x * row[k] + y * row[k + 1];
                                if k != nn - 1 {
                                    p += z * row[k + 2];
                                    row[k + 2] -= p * r;
                                }
                                row[k + 1] -= p * q;
                                row[k] -= p;
                            }
                        }
                    }
                }
            }
            if nn < 2 || l + 1 >= nn {
                break;
            }
        }
    }

    Ok((1..=n).map(|i| Complex::new(wr[i], wi[i])).collect())
}
