//! Complex dense helpers shared by the solvers.

use alloc::vec::Vec;
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;
pub type RMatrix = DMatrix<f64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// `Re Tr(A B)` for Hermitian `A` and `B`.
pub fn inner(a: &CMatrix, b: &CMatrix) -> f64 {
    let n = a.nrows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            let x = a[(i, j)];
            let y = b[(j, i)];
            acc += x.re * y.re - x.im * y.im;
        }
    }
    acc
}

/// `w^H A w`, real for Hermitian `A`.
pub fn quad_form(a: &CMatrix, w: &CVector) -> f64 {
    let aw = a * w;
    w.iter().zip(aw.iter()).map(|(x, y)| (x.conj() * y).re).sum()
}

/// `w w^H`.
pub fn outer(w: &CVector) -> CMatrix {
    w * w.adjoint()
}

/// `(A + A^H) / 2`.
pub fn hermitize(a: &mut CMatrix) {
    let n = a.nrows();
    for i in 0..n {
        a[(i, i)] = Complex64::new(a[(i, i)].re, 0.0);
        for j in (i + 1)..n {
            let m = (a[(i, j)] + a[(j, i)].conj()) * 0.5;
            a[(i, j)] = m;
            a[(j, i)] = m.conj();
        }
    }
}

/// Lower Cholesky factor of a Hermitian positive definite matrix, `None`
/// when a pivot is not strictly positive.
pub fn hermitian_cholesky(a: &CMatrix) -> Option<CMatrix> {
    let n = a.nrows();
    let mut l = CMatrix::zeros(n, n);
    for j in 0..n {
        let mut d = a[(j, j)].re;
        for k in 0..j {
            d -= l[(j, k)].norm_sqr();
        }
        if !(d > 0.0) || !d.is_finite() {
            return None;
        }
        let dj = d.sqrt();
        l[(j, j)] = Complex64::new(dj, 0.0);
        for i in (j + 1)..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = s / dj;
        }
    }
    Some(l)
}

/// `ln det A` for Hermitian positive definite `A`, `None` otherwise.
pub fn hermitian_log_det(a: &CMatrix) -> Option<f64> {
    let l = hermitian_cholesky(a)?;
    Some((0..a.nrows()).map(|i| 2.0 * l[(i, i)].re.ln()).sum())
}

/// Real symmetric embedding `[[Re, -Im], [Im, Re]]`.
pub fn real_embedding(a: &CMatrix) -> RMatrix {
    let n = a.nrows();
    let mut r = RMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let z = a[(i, j)];
            r[(i, j)] = z.re;
            r[(i + n, j + n)] = z.re;
            r[(i + n, j)] = z.im;
            r[(i, j + n)] = -z.im;
        }
    }
    r
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues in descending
/// order with unit-norm eigenvectors as columns.
pub fn hermitian_eig(a: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = a.nrows();
    if n == 0 {
        return (Vec::new(), CMatrix::zeros(0, 0));
    }
    let eig = SymmetricEigen::new(real_embedding(a));
    let mut idx: Vec<usize> = (0..2 * n).collect();
    idx.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    // Every eigenvalue appears twice in the embedding; (a, b) and (-b, a)
    // span the same complex direction. Greedily keep directions that are
    // orthogonal to those already chosen.
    let mut vals = Vec::with_capacity(n);
    let mut vecs = CMatrix::zeros(n, n);
    for &k in &idx {
        if vals.len() == n {
            break;
        }
        let col = eig.eigenvectors.column(k);
        let mut u = CVector::from_fn(n, |i, _| Complex64::new(col[i], col[i + n]));
        for c in 0..vals.len() {
            let prev = vecs.column(c).into_owned();
            let proj = prev.dotc(&u);
            u -= prev * proj;
        }
        let nrm = u.norm();
        if nrm < 0.5 {
            continue;
        }
        u /= Complex64::new(nrm, 0.0);
        vecs.set_column(vals.len(), &u);
        vals.push(eig.eigenvalues[k]);
    }
    (vals, vecs)
}

/// Largest eigenvalue and a unit eigenvector of a Hermitian matrix.
pub fn largest_eigpair(a: &CMatrix) -> (f64, CVector) {
    let (vals, vecs) = hermitian_eig(a);
    (vals[0], vecs.column(0).into_owned())
}

/// Nearest positive semidefinite matrix in Frobenius norm.
pub fn psd_project(a: &CMatrix) -> CMatrix {
    let n = a.nrows();
    let eig = SymmetricEigen::new(real_embedding(a));
    let mut r = RMatrix::zeros(2 * n, 2 * n);
    for k in 0..2 * n {
        let l = eig.eigenvalues[k];
        if l > 0.0 {
            let e = eig.eigenvectors.column(k);
            r += (e * e.transpose()) * l;
        }
    }
    let mut out = CMatrix::from_fn(n, n, |i, j| Complex64::new(r[(i, j)], r[(i + n, j)]));
    hermitize(&mut out);
    out
}

/// Unit-modulus vector with the phases of `u`. Entries of zero magnitude
/// get phase zero.
pub fn unit_modulus(u: &CVector) -> CVector {
    u.map(|z| {
        let n = z.norm();
        if n > 0.0 {
            z / n
        } else {
            ONE
        }
    })
}

/// Rotates `v` so that its first non-zero entry is real and positive.
pub fn fix_global_phase(v: &CVector) -> CVector {
    match v.iter().find(|z| z.norm() > 0.0) {
        Some(z0) => {
            let rot = z0.conj() / z0.norm();
            v.map(|z| z * rot)
        }
        None => v.clone(),
    }
}

/// `|q v|^2` for a row `q`.
pub fn row_gain(q: &CVector, v: &CVector) -> f64 {
    q.iter().zip(v.iter()).map(|(a, b)| a * b).sum::<Complex64>().norm_sqr()
}

/// Rank-one form `w w^H` with `Tr(W V) = q V q^H`, i.e. `w = conj(q)`.
pub fn row_form(q: &CVector) -> CVector {
    q.map(|z| z.conj())
}
