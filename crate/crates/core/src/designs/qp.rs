use super::linalg::{dot, norm_inf, solve_in_place};
use crate::error::{invalid, Error, Result};
use crate::scalar::Real;

/// `min ½xᵀHx + cᵀx  s.t.  Ax = b, x ≥ 0`, with `H` positive semidefinite.
#[derive(Clone, Debug)]
pub struct QuadraticProgram<T> {
    pub n: usize,
    /// `n × n`, row-major.
    pub h: Vec<T>,
    pub c: Vec<T>,
    /// `p × n`, row-major.
    pub a: Vec<T>,
    pub b: Vec<T>,
}

#[derive(Clone, Copy, Debug)]
pub struct IpmOptions<T> {
    /// Stop when scaled primal, dual and gap residuals are all below this.
    pub tolerance: T,
    pub max_iterations: usize,
}

impl<T: Real> Default for IpmOptions<T> {
    fn default() -> Self {
        Self {
            tolerance: T::from_f64_lossy(if T::NULL_TOLERANCE < T::from_f64_lossy(1e-7) {
                1e-10
            } else {
                1e-5
            }),
            max_iterations: 200,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum IpmStatus {
    Optimal,
    /// Iterates diverged while the primal residual stalled.
    Infeasible,
}

#[derive(Clone, Debug)]
pub struct IpmSolution<T> {
    pub status: IpmStatus,
    pub x: Vec<T>,
    /// Equality multipliers.
    pub y: Vec<T>,
    /// Bound multipliers.
    pub z: Vec<T>,
    pub iterations: usize,
    pub primal_residual: T,
    pub dual_residual: T,
    pub gap: T,
}

impl<T: Real> QuadraticProgram<T> {
    pub fn rows(&self) -> usize {
        self.b.len()
    }

    fn validate(&self) -> Result<()> {
        let (n, p) = (self.n, self.rows());
        if n == 0 || self.h.len() != n * n || self.c.len() != n || self.a.len() != p * n {
            return invalid("quadratic program dimensions are inconsistent");
        }
        Ok(())
    }

    fn residuals(&self, x: &[T], y: &[T], z: &[T]) -> (Vec<T>, Vec<T>) {
        let (n, p) = (self.n, self.rows());
        let mut rd = self.c.clone();
        for i in 0..n {
            rd[i] += dot(&self.h[i * n..(i + 1) * n], x) - z[i];
        }
        for (r, &yr) in y.iter().enumerate() {
            for (v, &a) in rd.iter_mut().zip(&self.a[r * n..(r + 1) * n]) {
                *v -= a * yr;
            }
        }
        let rp = (0..p)
            .map(|r| dot(&self.a[r * n..(r + 1) * n], x) - self.b[r])
            .collect();
        (rp, rd)
    }

    /// Mehrotra predictor–corrector primal–dual interior-point method.
    pub fn solve(&self, opts: &IpmOptions<T>) -> Result<IpmSolution<T>> {
        self.validate()?;
        let (n, p) = (self.n, self.rows());
        let one = T::one();
        let eta = T::from_f64_lossy(0.995);
        let mut x = vec![one; n];
        let mut z = vec![one; n];
        let mut y = vec![T::zero(); p];
        let b_scale = one + norm_inf(&self.b);
        let c_scale = one + norm_inf(&self.c) + norm_inf(&self.h);
        let nt = T::from_usize_lossy(n);
        let mut last = (T::infinity(), T::infinity(), T::infinity());

        for iter in 0..=opts.max_iterations {
            let (rp, rd) = self.residuals(&x, &y, &z);
            let mu = dot(&x, &z) / nt;
            let (pr, dr) = (norm_inf(&rp) / b_scale, norm_inf(&rd) / c_scale);
            let gap = mu / (one + dot(&self.c, &x).abs());
            last = (pr, dr, gap);
            if pr <= opts.tolerance && dr <= opts.tolerance && gap <= opts.tolerance {
                return Ok(IpmSolution {
                    status: IpmStatus::Optimal,
                    x,
                    y,
                    z,
                    iterations: iter,
                    primal_residual: pr,
                    dual_residual: dr,
                    gap,
                });
            }
            let blown = norm_inf(&x).max(norm_inf(&z)).max(norm_inf(&y));
            let stalled = pr > opts.tolerance.sqrt();
            let infeasible = |x, y, z| IpmSolution {
                status: IpmStatus::Infeasible,
                x,
                y,
                z,
                iterations: iter,
                primal_residual: pr,
                dual_residual: dr,
                gap,
            };
            if stalled && (blown > T::from_f64_lossy(1e10) || mu < opts.tolerance * opts.tolerance)
            {
                return Ok(infeasible(x, y, z));
            }
            if iter == opts.max_iterations {
                break;
            }

            let kkt = self.kkt_matrix(&x, &z);
            let solve = |target: &[T]| -> Result<(Vec<T>, Vec<T>, Vec<T>)> {
                // target is the desired value of z∘Δx + x∘Δz.
                let mut m = kkt.clone();
                let mut rhs = vec![T::zero(); n + p];
                for i in 0..n {
                    rhs[i] = -rd[i] + target[i] / x[i];
                }
                for r in 0..p {
                    rhs[n + r] = -rp[r];
                }
                solve_in_place(&mut m, &mut rhs, n + p)?;
                let dx = rhs[..n].to_vec();
                let dy = rhs[n..].to_vec();
                let dz = (0..n).map(|i| (target[i] - z[i] * dx[i]) / x[i]).collect();
                Ok((dx, dy, dz))
            };

            let aff_target: Vec<T> = (0..n).map(|i| -x[i] * z[i]).collect();
            let (dxa, _, dza) = match solve(&aff_target) {
                Ok(step) => step,
                Err(_) if stalled => return Ok(infeasible(x, y, z)),
                Err(_) => break,
            };
            let alpha_aff = step_length(&x, &dxa).min(step_length(&z, &dza));
            let mu_aff = (0..n)
                .map(|i| (x[i] + alpha_aff * dxa[i]) * (z[i] + alpha_aff * dza[i]))
                .fold(T::zero(), |a, v| a + v)
                / nt;
            let sigma = (mu_aff / mu).powi(3).min(one);
            let target: Vec<T> = (0..n)
                .map(|i| -x[i] * z[i] - dxa[i] * dza[i] + sigma * mu)
                .collect();
            let (dx, dy, dz) = match solve(&target) {
                Ok(step) => step,
                Err(_) if stalled => return Ok(infeasible(x, y, z)),
                Err(_) => break,
            };
            let alpha = (eta * step_length(&x, &dx).min(step_length(&z, &dz))).min(one);
            for i in 0..n {
                x[i] += alpha * dx[i];
                z[i] += alpha * dz[i];
            }
            for r in 0..p {
                y[r] += alpha * dy[r];
            }
        }
        Err(Error::Convergence {
            iterations: opts.max_iterations,
            residual: last.0.max(last.1).max(last.2).to_f64().unwrap_or(f64::NAN),
        })
    }

    /// `[[H + Z/X, −Aᵀ], [A, 0]]`.
    fn kkt_matrix(&self, x: &[T], z: &[T]) -> Vec<T> {
        let (n, p) = (self.n, self.rows());
        let dim = n + p;
        let mut m = vec![T::zero(); dim * dim];
        for i in 0..n {
            for j in 0..n {
                m[i * dim + j] = self.h[i * n + j];
            }
            m[i * dim + i] += z[i] / x[i];
        }
        for r in 0..p {
            for i in 0..n {
                let a = self.a[r * n + i];
                m[i * dim + n + r] = -a;
                m[(n + r) * dim + i] = a;
            }
        }
        m
    }
}

/// Largest `α ≤ 1` keeping `v + α·dv ≥ 0`.
fn step_length<T: Real>(v: &[T], dv: &[T]) -> T {
    v.iter()
        .zip(dv)
        .filter(|(_, &d)| d < T::zero())
        .fold(T::one(), |acc, (&x, &d)| acc.min(-x / d))
}
