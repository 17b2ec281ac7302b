//! Complex banded LU with partial pivoting, for the implicit half of the
//! Crank–Nicolson step.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// LU factors of an n×n banded matrix with `kl` sub- and `ku`
/// superdiagonals. Storage follows the usual band layout with `kl` extra
/// rows for pivoting fill-in.
pub struct BandedLu {
    n: usize,
    kl: usize,
    ku: usize,
    ldab: usize,
    /// column-major band storage: entry (i, j) lives at
    /// data[j*ldab + kl + ku + i - j]
    data: Vec<Complex64>,
    ipiv: Vec<usize>,
}

impl BandedLu {
    /// Factor the matrix whose entries are produced by `entry(i, j)`
    /// (queried only inside the band).
    pub fn factor<F>(n: usize, kl: usize, ku: usize, entry: F) -> Result<Self>
    where
        F: Fn(usize, usize) -> Complex64,
    {
        if n == 0 {
            return Err(Error::InvalidParams("empty system".into()));
        }
        let ldab = 2 * kl + ku + 1;
        let mut data = vec![Complex64::new(0.0, 0.0); ldab * n];
        let idx = |i: usize, j: usize| -> usize { j * ldab + kl + ku + i - j };
        for j in 0..n {
            let lo = j.saturating_sub(ku);
            let hi = (j + kl).min(n - 1);
            for i in lo..=hi {
                data[idx(i, j)] = entry(i, j);
            }
        }
        // effective upper bandwidth after pivoting
        let kv = kl + ku;
        let mut ipiv = vec![0usize; n];

        for j in 0..n {
            let last_row = (j + kl).min(n - 1);
            // pivot search in column j
            let mut p = j;
            let mut best = data[idx(j, j)].norm();
            for i in j + 1..=last_row {
                let mag = data[idx(i, j)].norm();
                if mag > best {
                    best = mag;
                    p = i;
                }
            }
            if best == 0.0 {
                return Err(Error::SingularSystem(j));
            }
            ipiv[j] = p;
            let last_col = (j + kv).min(n - 1);
            if p != j {
                for c in j..=last_col {
                    data.swap(idx(p, c), idx(j, c));
                }
            }
            let pivot = data[idx(j, j)];
            for i in j + 1..=last_row {
                let m = data[idx(i, j)] / pivot;
                data[idx(i, j)] = m;
                for c in j + 1..=last_col {
                    let upper = data[idx(j, c)];
                    data[idx(i, c)] -= m * upper;
                }
            }
        }
        Ok(Self { n, kl, ku, ldab, data, ipiv })
    }

    pub fn solve_in_place(&self, b: &mut [Complex64]) {
        debug_assert_eq!(b.len(), self.n);
        let n = self.n;
        let kv = self.kl + self.ku;
        let idx = |i: usize, j: usize| -> usize { j * self.ldab + self.kl + self.ku + i - j };
        // forward: apply pivots and multipliers
        for j in 0..n {
            let p = self.ipiv[j];
            if p != j {
                b.swap(p, j);
            }
            let last_row = (j + self.kl).min(n - 1);
            for i in j + 1..=last_row {
                let m = self.data[idx(i, j)];
                let bj = b[j];
                b[i] -= m * bj;
            }
        }
        // back substitution over U with bandwidth kv
        for j in (0..n).rev() {
            let last_col = (j + kv).min(n - 1);
            let mut acc = b[j];
            for (offset, bc) in b[j + 1..=last_col].iter().enumerate() {
                acc -= self.data[idx(j, j + 1 + offset)] * bc;
            }
            b[j] = acc / self.data[idx(j, j)];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn solves_a_small_complex_tridiagonal_system() {
        // A = [[2, -1, 0], [-1, 2+i, -1], [0, -1, 2]]
        let a = [
            [c(2.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0)],
            [c(-1.0, 0.0), c(2.0, 1.0), c(-1.0, 0.0)],
            [c(0.0, 0.0), c(-1.0, 0.0), c(2.0, 0.0)],
        ];
        let x_true = [c(1.0, 0.5), c(-2.0, 1.0), c(0.25, -0.75)];
        let mut b = [c(0.0, 0.0); 3];
        for (bi, row) in b.iter_mut().zip(&a) {
            for (aij, xj) in row.iter().zip(&x_true) {
                *bi += aij * xj;
            }
        }
        let lu = BandedLu::factor(3, 1, 1, |i, j| a[i][j]).unwrap();
        lu.solve_in_place(&mut b);
        for i in 0..3 {
            assert!((b[i] - x_true[i]).norm() < 1e-13);
        }
    }

    #[test]
    fn pentadiagonal_round_trip() {
        let n = 60;
        let entry = |i: usize, j: usize| -> Complex64 {
            let d = j as isize - i as isize;
            match d {
                0 => c(3.0 + (i as f64) * 0.01, 0.2),
                -1 | 1 => c(-1.0, 0.05 * d as f64),
                -2 | 2 => c(0.3, -0.02 * d as f64),
                _ => c(0.0, 0.0),
            }
        };
        let x_true: Vec<Complex64> =
            (0..n).map(|i| c((i as f64 * 0.37).sin(), (i as f64 * 0.21).cos())).collect();
        let mut b = vec![c(0.0, 0.0); n];
        for (i, bi) in b.iter_mut().enumerate() {
            let lo = i.saturating_sub(2);
            for (j, xj) in x_true.iter().enumerate().take((i + 3).min(n)).skip(lo) {
                *bi += entry(i, j) * xj;
            }
        }
        let lu = BandedLu::factor(n, 2, 2, entry).unwrap();
        lu.solve_in_place(&mut b);
        let worst = b.iter().zip(&x_true).map(|(a, b)| (a - b).norm()).fold(0.0f64, f64::max);
        assert!(worst < 1e-11, "round trip error {worst}");
    }

    #[test]
    fn reports_singular_systems() {
        let r = BandedLu::factor(2, 1, 1, |_, _| c(0.0, 0.0));
        assert!(matches!(r, Err(Error::SingularSystem(_))));
    }
}
