//! Dense complex kernels for the sweep: blocked LU with partial pivoting and
//! triangular solves. Matrices are row-major.

use alloc::vec::Vec;

use matrixmultiply::{zgemm, CGemmOption};
use num_complex::Complex64;

const BLOCK: usize = 48;

/// `C -= A B` with `A: m x k`, `B: k x n`, `C: m x n`, given row strides.
///
/// # Safety
/// The three regions must be valid for the given shapes and `C` must not
/// overlap `A` or `B`.
#[allow(clippy::too_many_arguments)]
unsafe fn mul_sub(
    m: usize,
    k: usize,
    n: usize,
    a: *const Complex64,
    lda: usize,
    b: *const Complex64,
    ldb: usize,
    c: *mut Complex64,
    ldc: usize,
) {
    if m == 0 || n == 0 || k == 0 {
        return;
    }
    zgemm(
        CGemmOption::Standard,
        CGemmOption::Standard,
        m,
        k,
        n,
        [-1.0, 0.0],
        a.cast(),
        lda as isize,
        1,
        b.cast(),
        ldb as isize,
        1,
        [1.0, 0.0],
        c.cast(),
        ldc as isize,
        1,
    );
}

/// LU factors `P A = L U` of a square matrix, unit lower `L` and `U` packed
/// in place.
#[derive(Debug, Clone)]
pub(crate) struct Lu {
    n: usize,
    a: Vec<Complex64>,
    piv: Vec<usize>,
    /// Smallest `|U_kk|`.
    pub min_pivot: f64,
}

impl Lu {
    pub fn factor(mut a: Vec<Complex64>, n: usize) -> Self {
        debug_assert_eq!(a.len(), n * n);
        let mut piv = Vec::with_capacity(n);
        let mut min_pivot = f64::INFINITY;
        let mut k0 = 0;
        while k0 < n {
            let kb = BLOCK.min(n - k0);
            let end = k0 + kb;
            for k in k0..end {
                let mut p = k;
                let mut best = a[k * n + k].norm_sqr();
                for i in k + 1..n {
                    let v = a[i * n + k].norm_sqr();
                    if v > best {
                        best = v;
                        p = i;
                    }
                }
                piv.push(p);
                if p != k {
                    for j in 0..n {
                        a.swap(k * n + j, p * n + j);
                    }
                }
                let pivot = a[k * n + k];
                min_pivot = min_pivot.min(pivot.norm());
                if pivot == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let inv = pivot.inv();
                let (top, rest) = a.split_at_mut((k + 1) * n);
                let urow = &top[k * n + k + 1..k * n + end];
                for row in rest.chunks_exact_mut(n) {
                    let l = row[k] * inv;
                    row[k] = l;
                    if l != Complex64::new(0.0, 0.0) {
                        for (x, u) in row[k + 1..end].iter_mut().zip(urow) {
                            *x -= l * u;
                        }
                    }
                }
            }
            if end < n {
                // U12 = L11^{-1} A12
                for k in k0..end {
                    let (top, rest) = a.split_at_mut((k + 1) * n);
                    let urow = &top[k * n + end..k * n + n];
                    for row in rest.chunks_exact_mut(n).take(end - k - 1) {
                        let l = row[k];
                        for (x, u) in row[end..].iter_mut().zip(urow) {
                            *x -= l * u;
                        }
                    }
                }
                // A22 -= L21 U12
                let m = n - end;
                let ptr = a.as_mut_ptr();
                unsafe {
                    mul_sub(
                        m,
                        kb,
                        m,
                        ptr.add(end * n + k0),
                        n,
                        ptr.add(k0 * n + end),
                        n,
                        ptr.add(end * n + end),
                        n,
                    );
                }
            }
            k0 = end;
        }
        Self {
            n,
            a,
            piv,
            min_pivot,
        }
    }

    /// Solves `A x = b` in place.
    pub fn solve(&self, b: &mut [Complex64]) {
        let n = self.n;
        for (k, &p) in self.piv.iter().enumerate() {
            b.swap(k, p);
        }
        for i in 0..n {
            let row = &self.a[i * n..i * n + i];
            let s: Complex64 = row.iter().zip(&b[..i]).map(|(l, x)| l * x).sum();
            b[i] -= s;
        }
        for i in (0..n).rev() {
            let row = &self.a[i * n + i + 1..(i + 1) * n];
            let s: Complex64 = row.iter().zip(&b[i + 1..]).map(|(u, x)| u * x).sum();
            b[i] = (b[i] - s) / self.a[i * n + i];
        }
    }

    /// Solves `A X = B` in place for `B` of shape `n x r`.
    pub fn solve_many(&self, b: &mut [Complex64], r: usize) {
        let n = self.n;
        debug_assert_eq!(b.len(), n * r);
        for (k, &p) in self.piv.iter().enumerate() {
            if p != k {
                for j in 0..r {
                    b.swap(k * r + j, p * r + j);
                }
            }
        }
        let a = &self.a;
        let mut k0 = 0;
        while k0 < n {
            let end = (k0 + BLOCK).min(n);
            for k in k0..end {
                let (top, rest) = b.split_at_mut((k + 1) * r);
                let src = &top[k * r..];
                for (i, row) in (k + 1..end).zip(rest.chunks_exact_mut(r)) {
                    let l = a[i * n + k];
                    if l != Complex64::new(0.0, 0.0) {
                        for (x, s) in row.iter_mut().zip(src) {
                            *x -= l * s;
                        }
                    }
                }
            }
            if end < n {
                let ptr = b.as_mut_ptr();
                unsafe {
                    mul_sub(
                        n - end,
                        end - k0,
                        r,
                        a.as_ptr().add(end * n + k0),
                        n,
                        ptr.add(k0 * r),
                        r,
                        ptr.add(end * r),
                        r,
                    );
                }
            }
            k0 = end;
        }
        let mut end = n;
        while end > 0 {
            let k0 = end.saturating_sub(BLOCK);
            for k in (k0..end).rev() {
                let inv = a[k * n + k].inv();
                for x in &mut b[k * r..(k + 1) * r] {
                    *x *= inv;
                }
                let (top, rest) = b.split_at_mut(k * r);
                let src = &rest[..r];
                for (i, row) in (k0..k).zip(top[k0 * r..].chunks_exact_mut(r)) {
                    let u = a[i * n + k];
                    if u != Complex64::new(0.0, 0.0) {
                        for (x, s) in row.iter_mut().zip(src) {
                            *x -= u * s;
                        }
                    }
                }
            }
            if k0 > 0 {
                let ptr = b.as_mut_ptr();
                unsafe {
                    mul_sub(
                        k0,
                        end - k0,
                        r,
                        a.as_ptr().add(k0),
                        n,
                        ptr.add(k0 * r),
                        r,
                        ptr,
                        r,
                    );
                }
            }
            end = k0;
        }
    }
}
