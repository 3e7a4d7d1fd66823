//! Banded Cholesky factorization for the coarsest multigrid level.

#[derive(Debug, Clone)]
pub(crate) struct BandedCholesky {
    n: usize,
    bw: usize,
    /// Row `i` holds `L[i][i-k]` at offset `k`, `k = 0..=bw`.
    band: Vec<f64>,
}

impl BandedCholesky {
    /// `entry(i, j)` gives the lower-triangle entries `A[i][j]`, `j ≤ i`,
    /// `i − j ≤ bw`.
    pub(crate) fn factor(n: usize, bw: usize, entry: impl Fn(usize, usize) -> f64) -> Self {
        let w = bw + 1;
        let mut band = vec![0.0; n * w];
        for i in 0..n {
            for j in i.saturating_sub(bw)..=i {
                band[i * w + (i - j)] = entry(i, j);
            }
        }
        for j in 0..n {
            let lo = j.saturating_sub(bw);
            let mut s = band[j * w];
            for k in lo..j {
                let l = band[j * w + (j - k)];
                s -= l * l;
            }
            assert!(s > 0.0, "coarse operator is not positive definite");
            let d = s.sqrt();
            band[j * w] = d;
            for i in j + 1..(j + bw + 1).min(n) {
                let lo_i = i.saturating_sub(bw).max(lo);
                let mut s = band[i * w + (i - j)];
                for k in lo_i..j {
                    s -= band[i * w + (i - k)] * band[j * w + (j - k)];
                }
                band[i * w + (i - j)] = s / d;
            }
        }
        Self { n, bw, band }
    }

    pub(crate) fn solve(&self, rhs: &[f64], x: &mut [f64]) {
        let w = self.bw + 1;
        x.copy_from_slice(rhs);
        for i in 0..self.n {
            let mut s = x[i];
            for k in i.saturating_sub(self.bw)..i {
                s -= self.band[i * w + (i - k)] * x[k];
            }
            x[i] = s / self.band[i * w];
        }
        for i in (0..self.n).rev() {
            let mut s = x[i];
            for k in i + 1..(i + w).min(self.n) {
                s -= self.band[k * w + (k - i)] * x[k];
            }
            x[i] = s / self.band[i * w];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_pentadiagonal() {
        let n = 30;
        let entry = |i: usize, j: usize| match i - j {
            0 => 6.0,
            1 => -1.0,
            3 => -2.0,
            _ => 0.0,
        };
        let chol = BandedCholesky::factor(n, 3, entry);
        let b: Vec<f64> = (0..n).map(|i| (i as f64 * 0.3).cos()).collect();
        let mut x = vec![0.0; n];
        chol.solve(&b, &mut x);
        for i in 0..n {
            let mut ax = 0.0;
            for j in 0..n {
                let (a, c) = if i >= j { (i, j) } else { (j, i) };
                if a - c <= 3 {
                    ax += entry(a, c) * x[j];
                }
            }
            assert!((ax - b[i]).abs() < 1e-12);
        }
    }
}
