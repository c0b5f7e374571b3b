//! Minimal dense-matrix support for the discriminant computation.
//!
//! The only consumers are the Fritz-John matrix builder and its Gram
//! determinant, so this stays deliberately small: a row-major `Mat`, a
//! Gram product and a determinant. The determinant uses closed-form
//! cofactor expansion up to 3x3 and LU factorization with partial
//! pivoting beyond that, which stays well conditioned for the matrix
//! sizes that occur here (up to 32x32 for the 30-dimensional cases).

/// Dense row-major matrix of `f64`.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Mat {
    /// All-zero matrix of the given shape.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    /// Build from a row-major data vector. Panics if the length disagrees
    /// with the shape; shapes are always statically known at call sites.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), rows * cols, "data length must match shape");
        Mat { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.cols + c] = v;
    }

    /// Row-major view of the underlying storage.
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// `A^T * A`: square Gram matrix of the columns.
    pub fn gram(&self) -> Mat {
        let n = self.cols;
        let mut g = Mat::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let mut s = 0.0;
                for r in 0..self.rows {
                    s += self.get(r, i) * self.get(r, j);
                }
                g.set(i, j, s);
                g.set(j, i, s);
            }
        }
        g
    }

    /// Determinant of a square matrix.
    ///
    /// Panics if the matrix is not square (caller bug, not data-dependent).
    pub fn determinant(&self) -> f64 {
        assert_eq!(self.rows, self.cols, "determinant needs a square matrix");
        let n = self.rows;
        match n {
            0 => 1.0,
            1 => self.get(0, 0),
            2 => self.get(0, 0) * self.get(1, 1) - self.get(0, 1) * self.get(1, 0),
            3 => {
                let a = self.get(0, 0);
                let b = self.get(0, 1);
                let c = self.get(0, 2);
                let d = self.get(1, 0);
                let e = self.get(1, 1);
                let f = self.get(1, 2);
                let g = self.get(2, 0);
                let h = self.get(2, 1);
                let i = self.get(2, 2);
                a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)
            }
            _ => self.lu_determinant(false),
        }
    }

    /// Determinant that reports an exactly rank-deficient matrix as exactly
    /// zero instead of round-off noise.
    ///
    /// A Gram matrix of linearly dependent columns has determinant zero in
    /// exact arithmetic, but plain elimination returns noise on the order of
    /// machine epsilon times the entry scale — which batch normalization can
    /// then amplify to order one. Here a pivot that collapses below
    /// `n * eps` times its row's original magnitude is treated as zero (for
    /// the closed-form sizes, the determinant is compared against the same
    /// kind of scale bound). Genuinely nonsingular matrices are unaffected:
    /// their pivots sit far above the round-off scale of their rows.
    pub fn determinant_zero_snapped(&self) -> f64 {
        assert_eq!(self.rows, self.cols, "determinant needs a square matrix");
        let n = self.rows;
        if n <= 1 {
            return self.determinant();
        }
        if n <= 3 {
            let det = self.determinant();
            let mut scale = 1.0;
            for r in 0..n {
                let row_inf = (0..n).map(|c| self.get(r, c).abs()).fold(0.0, f64::max);
                scale *= row_inf;
            }
            let floor = (n * n) as f64 * f64::EPSILON * scale;
            return if det.abs() <= floor { 0.0 } else { det };
        }
        self.lu_determinant(true)
    }

    /// LU factorization with partial pivoting; determinant is the signed
    /// product of the pivots. A zero pivot column short-circuits to 0; with
    /// `snap_singular`, so does a pivot within round-off of zero relative to
    /// its row's original infinity norm.
    fn lu_determinant(&self, snap_singular: bool) -> f64 {
        let n = self.rows;
        let mut a = self.data.clone();
        let mut norms: Vec<f64> = (0..n)
            .map(|r| (0..n).map(|c| self.get(r, c).abs()).fold(0.0, f64::max))
            .collect();
        let mut det = 1.0;
        for col in 0..n {
            // Pick the largest-magnitude pivot at or below the diagonal.
            let mut pivot_row = col;
            let mut pivot_abs = a[col * n + col].abs();
            for r in (col + 1)..n {
                let v = a[r * n + col].abs();
                if v > pivot_abs {
                    pivot_abs = v;
                    pivot_row = r;
                }
            }
            if pivot_row != col {
                for c in 0..n {
                    a.swap(pivot_row * n + c, col * n + c);
                }
                norms.swap(pivot_row, col);
                det = -det;
            }
            if pivot_abs == 0.0 {
                return 0.0;
            }
            if snap_singular && pivot_abs <= n as f64 * f64::EPSILON * norms[col] {
                return 0.0;
            }
            let pivot = a[col * n + col];
            det *= pivot;
            for r in (col + 1)..n {
                let factor = a[r * n + col] / pivot;
                if factor == 0.0 {
                    continue;
                }
                for c in (col + 1)..n {
                    a[r * n + c] -= factor * a[col * n + c];
                }
            }
        }
        det
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn small_determinants_match_cofactor_formulas() {
        let m2 = Mat::from_row_major(2, 2, vec![3.0, 1.0, -2.0, 4.0]);
        assert_relative_eq!(m2.determinant(), 14.0);
        let m3 = Mat::from_row_major(3, 3, vec![2.0, 0.0, 1.0, 1.0, 3.0, -1.0, 0.0, 4.0, 1.0]);
        assert_relative_eq!(m3.determinant(), 2.0 * (3.0 + 4.0) + 1.0 * 4.0);
    }

    #[test]
    fn singular_matrix_has_zero_determinant() {
        // Second row is twice the first.
        let m = Mat::from_row_major(3, 3, vec![1.0, 2.0, 3.0, 2.0, 4.0, 6.0, 0.0, 1.0, 1.0]);
        assert_eq!(m.determinant(), 0.0);
    }

    #[test]
    fn dependent_gram_columns_snap_to_exactly_zero() {
        // Two exactly parallel columns at awkward magnitudes: the Gram
        // matrix is singular in exact arithmetic, but its entries round
        // separately, so plain elimination leaves noise.
        let u = 0.123456789; // deliberately not dyadic
        let v = -3.21987654e2;
        for dim in [2usize, 4, 6] {
            let mut m = Mat::zeros(dim + 1, dim);
            for r in 0..=dim {
                m.set(r, 0, u * (r as f64 + 1.0));
                m.set(r, 1, v * (r as f64 + 1.0)); // parallel to column 0
                for c in 2..dim {
                    m.set(r, c, ((r * 7 + c * 3) % 5) as f64 - 2.0);
                }
            }
            let g = m.gram();
            assert_eq!(g.determinant_zero_snapped(), 0.0, "dim {dim}");
        }
    }

    #[test]
    fn snapping_leaves_regular_determinants_alone() {
        let m2 = Mat::from_row_major(2, 2, vec![3.0, 1.0, -2.0, 4.0]);
        assert_eq!(m2.determinant_zero_snapped(), m2.determinant());
        // Rows of wildly different scale but full rank: no false snap.
        let mixed = Mat::from_row_major(
            4,
            4,
            vec![
                4.3e-4, 0.0, 1.0, 0.9, //
                0.0, 2.1e-4, 1.1, 1.0, //
                1.0, 1.1, 3.3e5, 0.0, //
                0.9, 1.0, 0.0, 3.1e5,
            ],
        );
        let snapped = mixed.determinant_zero_snapped();
        let plain = mixed.determinant();
        assert!(snapped != 0.0);
        assert_relative_eq!(snapped, plain, max_relative = 1e-12);
    }

    #[test]
    fn gram_of_orthonormal_columns_is_identity() {
        let m = Mat::from_row_major(3, 2, vec![1.0, 0.0, 0.0, 1.0, 0.0, 0.0]);
        let g = m.gram();
        assert_eq!(g.rows(), 2);
        assert_eq!(
            (g.get(0, 0), g.get(0, 1), g.get(1, 0), g.get(1, 1)),
            (1.0, 0.0, 0.0, 1.0)
        );
    }

    /// Random matrices up to 8x8: LU determinant must agree with an
    /// independently implemented determinant (nalgebra's).
    #[test]
    fn determinant_matches_reference_implementation() {
        fn check(n: usize, entries: &[f64]) {
            let mine = Mat::from_row_major(n, n, entries.to_vec()).determinant();
            let theirs = nalgebra::DMatrix::from_row_slice(n, n, entries).determinant();
            let scale = theirs.abs().max(1.0);
            assert!(
                (mine - theirs).abs() <= 1e-9 * scale,
                "n={n}: {mine} vs reference {theirs}"
            );
        }
        let mut runner = proptest::test_runner::TestRunner::deterministic();
        let strat =
            (2usize..=8).prop_flat_map(|n| (Just(n), prop::collection::vec(-10.0f64..10.0, n * n)));
        runner
            .run(&strat, |(n, entries)| {
                check(n, &entries);
                Ok(())
            })
            .unwrap();
    }

    proptest! {
        /// Gram determinants are non-negative up to round-off regardless of
        /// the (possibly rectangular) input.
        #[test]
        fn gram_determinant_is_nonnegative(
            rows in 1usize..6,
            cols in 1usize..6,
            seed in prop::collection::vec(-5.0f64..5.0, 36),
        ) {
            let data: Vec<f64> = seed.iter().take(rows * cols).copied().collect();
            if data.len() < rows * cols { return Ok(()); }
            let g = Mat::from_row_major(rows, cols, data).gram();
            let det = g.determinant();
            let scale = g.as_slice().iter().fold(1.0f64, |a, v| a.max(v.abs()));
            prop_assert!(det >= -1e-9 * scale.powi(cols as i32));
        }
    }
}
