use num_complex::Complex64;

/// Complex tridiagonal matrix stored by diagonals. Row `i` reads
/// `lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1]`; `lower[0]` and the
/// last `upper` entry are ignored.
#[derive(Debug, Clone)]
pub(crate) struct Tridiagonal {
    pub lower: Vec<Complex64>,
    pub diag: Vec<Complex64>,
    pub upper: Vec<Complex64>,
}

/// Thomas elimination with the forward factors computed once.
#[derive(Debug, Clone)]
pub(crate) struct Factored {
    lower: Vec<Complex64>,
    upper_scaled: Vec<Complex64>,
    pivot_inv: Vec<Complex64>,
}

impl Tridiagonal {
    pub fn len(&self) -> usize {
        self.diag.len()
    }

    /// `y = A x`.
    pub fn apply(&self, x: &[Complex64], y: &mut [Complex64]) {
        let n = self.len();
        debug_assert!(x.len() == n && y.len() == n);
        if n == 1 {
            y[0] = self.diag[0] * x[0];
            return;
        }
        y[0] = self.diag[0] * x[0] + self.upper[0] * x[1];
        for i in 1..n - 1 {
            y[i] = self.lower[i] * x[i - 1] + self.diag[i] * x[i] + self.upper[i] * x[i + 1];
        }
        y[n - 1] = self.lower[n - 1] * x[n - 2] + self.diag[n - 1] * x[n - 1];
    }

    /// Fails on a zero pivot; the Crank-Nicolson matrices used here are
    /// diagonally dominant so this never happens in practice.
    pub fn factor(&self) -> Option<Factored> {
        let n = self.len();
        let mut upper_scaled = vec![Complex64::new(0.0, 0.0); n];
        let mut pivot_inv = vec![Complex64::new(0.0, 0.0); n];
        let mut prev = Complex64::new(0.0, 0.0);
        for i in 0..n {
            let pivot = if i == 0 {
                self.diag[0]
            } else {
                self.diag[i] - self.lower[i] * prev
            };
            if pivot.norm() == 0.0 || !pivot.is_finite() {
                return None;
            }
            let inv = pivot.inv();
            pivot_inv[i] = inv;
            prev = self.upper[i] * inv;
            upper_scaled[i] = prev;
        }
        Some(Factored {
            lower: self.lower.clone(),
            upper_scaled,
            pivot_inv,
        })
    }
}

impl Factored {
    /// Solves `A x = rhs` in place.
    pub fn solve(&self, rhs: &mut [Complex64]) {
        let n = rhs.len();
        debug_assert_eq!(n, self.pivot_inv.len());
        rhs[0] *= self.pivot_inv[0];
        for i in 1..n {
            rhs[i] = (rhs[i] - self.lower[i] * rhs[i - 1]) * self.pivot_inv[i];
        }
        for i in (0..n.saturating_sub(1)).rev() {
            rhs[i] -= self.upper_scaled[i] * rhs[i + 1];
        }
    }
}
