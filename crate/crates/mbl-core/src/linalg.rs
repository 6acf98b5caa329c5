//! Dense and sparse eigen-solvers and small helpers on top of LAPACK.

use std::os::raw::c_char;

use ndarray::{Array1, Array2, ArrayView1, ShapeBuilder};
use ndarray_linalg::{EigValsh, Eigh, SVD, UPLO};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Which part of the spectrum a symmetric solver returns.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Selection {
    All,
    /// Eigenvalues in the half-open interval (lower, upper].
    Interval(f64, f64),
}

#[derive(Debug, Clone)]
pub struct SymEigen {
    pub values: Vec<f64>,
    /// Eigenvectors as columns; empty (n x 0) when vectors were not requested.
    pub vectors: Array2<f64>,
}

fn lapack_range(sel: Selection) -> (u8, f64, f64) {
    match sel {
        Selection::All => (b'A', 0.0, 0.0),
        Selection::Interval(lo, hi) => (b'V', lo, hi),
    }
}

/// Real symmetric eigen-decomposition via `dsyevr`. Only the lower triangle is read.
pub fn eigh_sym(a: &Array2<f64>, sel: Selection, vectors: bool) -> Result<SymEigen> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::Size(format!("matrix is {}x{}", n, a.ncols())));
    }
    if n == 0 {
        return Ok(SymEigen { values: vec![], vectors: Array2::zeros((0, 0)) });
    }
    // row-major symmetric == column-major symmetric
    let mut buf: Vec<f64> = a.iter().copied().collect();
    let (range, vl, vu) = lapack_range(sel);
    if range == b'V' && !(vu > vl) {
        return Ok(SymEigen { values: vec![], vectors: Array2::zeros((n, 0)) });
    }
    let jobz = if vectors { b'V' } else { b'N' };
    let ni = n as i32;
    let ldz = if vectors { ni } else { 1 };
    let mut m = 0i32;
    let mut w = vec![0.0; n];
    let mut z = vec![0.0; if vectors { n * n } else { 1 }];
    let mut isuppz = vec![0i32; 2 * n];
    let mut info = 0i32;
    let mut wq = [0.0f64];
    let mut iwq = [0i32];
    unsafe {
        lapack_sys::dsyevr_(
            &(jobz as c_char),
            &(range as c_char),
            &(b'L' as c_char),
            &ni,
            buf.as_mut_ptr(),
            &ni,
            &vl,
            &vu,
            &0,
            &0,
            &0.0,
            &mut m,
            w.as_mut_ptr(),
            z.as_mut_ptr(),
            &ldz,
            isuppz.as_mut_ptr(),
            wq.as_mut_ptr(),
            &-1,
            iwq.as_mut_ptr(),
            &-1,
            &mut info,
        );
    }
    if info != 0 {
        return Err(Error::Eigensolver { routine: "dsyevr", info, n });
    }
    let lwork = wq[0] as i32;
    let liwork = iwq[0];
    let mut work = vec![0.0; lwork.max(1) as usize];
    let mut iwork = vec![0i32; liwork.max(1) as usize];
    unsafe {
        lapack_sys::dsyevr_(
            &(jobz as c_char),
            &(range as c_char),
            &(b'L' as c_char),
            &ni,
            buf.as_mut_ptr(),
            &ni,
            &vl,
            &vu,
            &0,
            &0,
            &0.0,
            &mut m,
            w.as_mut_ptr(),
            z.as_mut_ptr(),
            &ldz,
            isuppz.as_mut_ptr(),
            work.as_mut_ptr(),
            &lwork,
            iwork.as_mut_ptr(),
            &liwork,
            &mut info,
        );
    }
    if info != 0 {
        return Err(Error::Eigensolver { routine: "dsyevr", info, n });
    }
    let m = m as usize;
    w.truncate(m);
    let vectors = if vectors {
        z.truncate(n * m);
        Array2::from_shape_vec((n, m).f(), z).expect("shape")
    } else {
        Array2::zeros((n, 0))
    };
    Ok(SymEigen { values: w, vectors })
}

/// Symmetric tridiagonal eigen-decomposition via `dstevr`.
pub fn eigh_tridiagonal(diag: &[f64], off: &[f64], sel: Selection, vectors: bool) -> Result<SymEigen> {
    let n = diag.len();
    if n == 0 {
        return Ok(SymEigen { values: vec![], vectors: Array2::zeros((0, 0)) });
    }
    if off.len() + 1 != n {
        return Err(Error::Size(format!("tridiagonal: {} diagonal vs {} off-diagonal", n, off.len())));
    }
    let (range, vl, vu) = lapack_range(sel);
    if range == b'V' && !(vu > vl) {
        return Ok(SymEigen { values: vec![], vectors: Array2::zeros((n, 0)) });
    }
    let jobz = if vectors { b'V' } else { b'N' };
    let mut d = diag.to_vec();
    let mut e = off.to_vec();
    e.push(0.0);
    let ni = n as i32;
    let ldz = if vectors { ni } else { 1 };
    let mut m = 0i32;
    let mut w = vec![0.0; n];
    let mut z = vec![0.0; if vectors { n * n } else { 1 }];
    let mut isuppz = vec![0i32; 2 * n];
    let mut info = 0i32;
    let mut wq = [0.0f64];
    let mut iwq = [0i32];
    unsafe {
        lapack_sys::dstevr_(
            &(jobz as c_char),
            &(range as c_char),
            &ni,
            d.as_mut_ptr(),
            e.as_mut_ptr(),
            &vl,
            &vu,
            &0,
            &0,
            &0.0,
            &mut m,
            w.as_mut_ptr(),
            z.as_mut_ptr(),
            &ldz,
            isuppz.as_mut_ptr(),
            wq.as_mut_ptr(),
            &-1,
            iwq.as_mut_ptr(),
            &-1,
            &mut info,
        );
    }
    if info != 0 {
        return Err(Error::Eigensolver { routine: "dstevr", info, n });
    }
    let lwork = wq[0] as i32;
    let liwork = iwq[0];
    let mut work = vec![0.0; lwork.max(1) as usize];
    let mut iwork = vec![0i32; liwork.max(1) as usize];
    unsafe {
        lapack_sys::dstevr_(
            &(jobz as c_char),
            &(range as c_char),
            &ni,
            d.as_mut_ptr(),
            e.as_mut_ptr(),
            &vl,
            &vu,
            &0,
            &0,
            &0.0,
            &mut m,
            w.as_mut_ptr(),
            z.as_mut_ptr(),
            &ldz,
            isuppz.as_mut_ptr(),
            work.as_mut_ptr(),
            &lwork,
            iwork.as_mut_ptr(),
            &liwork,
            &mut info,
        );
    }
    if info != 0 {
        return Err(Error::Eigensolver { routine: "dstevr", info, n });
    }
    let m = m as usize;
    w.truncate(m);
    let vectors = if vectors {
        z.truncate(n * m);
        Array2::from_shape_vec((n, m).f(), z).expect("shape")
    } else {
        Array2::zeros((n, 0))
    };
    Ok(SymEigen { values: w, vectors })
}

/// Eigenvalues and eigenvectors of a complex Hermitian matrix.
pub fn eigh_herm(a: &Array2<C64>) -> Result<(Array1<f64>, Array2<C64>)> {
    if a.nrows() <= 1 {
        return Ok((a.diag().mapv(|z| z.re), Array2::eye(a.nrows())));
    }
    standard(a).eigh(UPLO::Lower).map_err(|e| Error::Numerical(format!("zheev: {e}")))
}

fn standard(a: &Array2<C64>) -> Array2<C64> {
    Array2::from_shape_vec(a.dim(), a.iter().copied().collect()).expect("shape")
}

pub fn eigvalsh_herm(a: &Array2<C64>) -> Result<Array1<f64>> {
    if a.nrows() <= 1 {
        return Ok(a.diag().mapv(|z| z.re));
    }
    standard(a).eigvalsh(UPLO::Lower).map_err(|e| Error::Numerical(format!("zheev: {e}")))
}

pub fn eigvalsh_sym(a: &Array2<f64>) -> Result<Vec<f64>> {
    Ok(eigh_sym(a, Selection::All, false)?.values)
}

/// Minimum gap between consecutive entries of an ascending list (infinity if fewer than two).
pub fn min_gap(sorted: &[f64]) -> f64 {
    sorted.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min)
}

pub fn max_abs_diff(a: &Array2<f64>, b: &Array2<f64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn max_abs_diff_c(a: &Array2<C64>, b: &Array2<C64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn to_complex(a: &Array2<f64>) -> Array2<C64> {
    a.mapv(|x| C64::new(x, 0.0))
}

pub fn adjoint(a: &Array2<C64>) -> Array2<C64> {
    a.t().mapv(|z| z.conj())
}

/// Singular values of a general complex matrix.
pub fn singular_values(a: &Array2<C64>) -> Result<Vec<f64>> {
    if a.is_empty() {
        return Ok(vec![]);
    }
    if a.nrows() == 1 || a.ncols() == 1 {
        return Ok(vec![a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()]);
    }
    let (_, s, _) = standard(a).svd(false, false).map_err(|e| Error::Numerical(format!("zgesvd: {e}")))?;
    Ok(s.to_vec())
}

/// Spectral norm of a general complex matrix.
pub fn operator_norm(a: &Array2<C64>) -> Result<f64> {
    Ok(singular_values(a)?.into_iter().fold(0.0, f64::max))
}

/// Sum of singular values of a general complex matrix.
pub fn trace_norm(a: &Array2<C64>) -> Result<f64> {
    Ok(singular_values(a)?.into_iter().sum())
}

pub fn operator_norm_real(a: &Array2<f64>) -> Result<f64> {
    let g = if a.nrows() >= a.ncols() { a.t().dot(a) } else { a.dot(&a.t()) };
    let ev = eigvalsh_sym(&g)?;
    Ok(ev.iter().fold(0.0f64, |m, &x| m.max(x)).sqrt())
}

/// Compressed sparse row matrix with real entries.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    pub n: usize,
    pub indptr: Vec<usize>,
    pub indices: Vec<usize>,
    pub data: Vec<f64>,
}

impl CsrMatrix {
    /// Builds from (row, col, value) triplets; duplicates are summed, columns sorted per row.
    pub fn from_triplets(n: usize, mut triplets: Vec<(usize, usize, f64)>) -> Self {
        triplets.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        let mut indptr = vec![0usize; n + 1];
        let mut indices = Vec::with_capacity(triplets.len());
        let mut data: Vec<f64> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in triplets {
            if last == Some((r, c)) {
                *data.last_mut().unwrap() += v;
                continue;
            }
            indices.push(c);
            data.push(v);
            indptr[r + 1] += 1;
            last = Some((r, c));
        }
        for r in 0..n {
            indptr[r + 1] += indptr[r];
        }
        CsrMatrix { n, indptr, indices, data }
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let (a, b) = (self.indptr[r], self.indptr[r + 1]);
        self.indices[a..b].iter().copied().zip(self.data[a..b].iter().copied())
    }

    pub fn nnz_row(&self, r: usize) -> usize {
        self.indptr[r + 1] - self.indptr[r]
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.row(r).find(|&(j, _)| j == c).map_or(0.0, |(_, v)| v)
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|r| self.get(r, r)).collect()
    }

    pub fn matvec(&self, x: ArrayView1<f64>, y: &mut [f64]) {
        for r in 0..self.n {
            let mut s = 0.0;
            for (c, v) in self.row(r) {
                s += v * x[c];
            }
            y[r] = s;
        }
    }

    pub fn to_dense(&self) -> Array2<f64> {
        let mut a = Array2::zeros((self.n, self.n));
        for r in 0..self.n {
            for (c, v) in self.row(r) {
                a[[r, c]] = v;
            }
        }
        a
    }

    /// Dense principal submatrix on the given (sorted or unsorted) index list.
    pub fn dense_block(&self, idx: &[usize]) -> Array2<f64> {
        let mut pos = std::collections::HashMap::with_capacity(idx.len());
        for (k, &i) in idx.iter().enumerate() {
            pos.insert(i, k);
        }
        let mut a = Array2::zeros((idx.len(), idx.len()));
        for (k, &r) in idx.iter().enumerate() {
            for (c, v) in self.row(r) {
                if let Some(&l) = pos.get(&c) {
                    a[[k, l]] = v;
                }
            }
        }
        a
    }

    pub fn max_asymmetry(&self) -> f64 {
        let mut m = 0.0f64;
        for r in 0..self.n {
            for (c, v) in self.row(r) {
                m = m.max((v - self.get(c, r)).abs());
            }
        }
        m
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Connected components of the sparsity graph (nonzero off-diagonal entries), each sorted.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut label = vec![usize::MAX; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if label[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut comp = vec![s];
            label[s] = id;
            let mut head = 0;
            while head < comp.len() {
                let r = comp[head];
                head += 1;
                for (c, v) in self.row(r) {
                    if v != 0.0 && label[c] == usize::MAX {
                        label[c] = id;
                        comp.push(c);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }
}

/// Conjugate gradients for a symmetric positive definite operator.
pub fn conjugate_gradient<F>(apply: F, b: &[f64], tol: f64, max_iter: usize) -> Result<Vec<f64>>
where
    F: Fn(&[f64], &mut [f64]),
{
    let n = b.len();
    let bnorm = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    let mut x = vec![0.0; n];
    if bnorm == 0.0 {
        return Ok(x);
    }
    let mut r = b.to_vec();
    let mut p = r.clone();
    let mut ap = vec![0.0; n];
    let mut rr: f64 = r.iter().map(|v| v * v).sum();
    for _ in 0..max_iter {
        if rr.sqrt() <= tol * bnorm {
            return Ok(x);
        }
        apply(&p, &mut ap);
        let pap: f64 = p.iter().zip(&ap).map(|(a, b)| a * b).sum();
        if pap <= 0.0 {
            return Err(Error::Numerical("conjugate gradient: operator not positive definite".into()));
        }
        let alpha = rr / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        let rr_new: f64 = r.iter().map(|v| v * v).sum();
        let beta = rr_new / rr;
        rr = rr_new;
        for i in 0..n {
            p[i] = r[i] + beta * p[i];
        }
    }
    if rr.sqrt() <= tol * bnorm * 10.0 {
        return Ok(x);
    }
    Err(Error::Numerical(format!(
        "conjugate gradient did not converge in {max_iter} iterations (residual {:e})",
        rr.sqrt() / bnorm
    )))
}

/// Entropy function -x ln x - (1-x) ln(1-x), zero at the endpoints.
pub fn binary_entropy(x: f64) -> f64 {
    let mut s = 0.0;
    if x > 0.0 && x < 1.0 {
        s -= x * x.ln();
        s -= (1.0 - x) * (1.0 - x).ln();
    }
    s
}

/// Von Neumann entropy of a spectrum (natural log); tiny negative values are treated as zero.
pub fn spectral_entropy(p: impl IntoIterator<Item = f64>) -> f64 {
    p.into_iter().filter(|&x| x > 1e-300).map(|x| -x * x.ln()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn syevr_matches_closed_form() {
        let a = array![[2.0, -1.0, 0.0], [-1.0, 2.0, -1.0], [0.0, -1.0, 2.0]];
        let e = eigh_sym(&a, Selection::All, true).unwrap();
        let s = 2f64.sqrt();
        for (x, y) in e.values.iter().zip([2.0 - s, 2.0, 2.0 + s]) {
            assert!((x - y).abs() < 1e-12);
        }
        let rec = e.vectors.dot(&Array2::from_diag(&Array1::from(e.values.clone()))).dot(&e.vectors.t());
        assert!(max_abs_diff(&rec, &a) < 1e-12);
    }

    #[test]
    fn interval_selection() {
        let d = vec![0.0; 3];
        let o = vec![-1.0; 2];
        let e = eigh_tridiagonal(&d, &o, Selection::Interval(-0.5, 2.0), true).unwrap();
        assert_eq!(e.values.len(), 2);
        assert!(e.values[0].abs() < 1e-12);
        assert_eq!(e.vectors.dim(), (3, 2));
    }

    #[test]
    fn csr_components_and_dense() {
        let m = CsrMatrix::from_triplets(4, vec![(0, 1, 1.0), (1, 0, 1.0), (2, 2, 3.0), (3, 3, 1.0), (0, 1, 1.0)]);
        assert_eq!(m.get(0, 1), 2.0);
        assert_eq!(m.components(), vec![vec![0, 1], vec![2], vec![3]]);
        assert_eq!(m.dense_block(&[2, 0])[[0, 0]], 3.0);
    }

    #[test]
    fn cg_solves_spd() {
        let a = array![[4.0, 1.0], [1.0, 3.0]];
        let x = conjugate_gradient(
            |v, out| {
                out[0] = 4.0 * v[0] + v[1];
                out[1] = v[0] + 3.0 * v[1];
            },
            &[1.0, 2.0],
            1e-14,
            50,
        )
        .unwrap();
        let r = a.dot(&Array1::from(x));
        assert!((r[0] - 1.0).abs() < 1e-12 && (r[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn norms_of_diagonal() {
        let a = to_complex(&array![[3.0, 0.0], [0.0, -2.0]]);
        assert!((operator_norm(&a).unwrap() - 3.0).abs() < 1e-12);
        assert!((trace_norm(&a).unwrap() - 5.0).abs() < 1e-12);
    }
}
