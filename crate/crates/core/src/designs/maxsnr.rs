//! Max-SNR designs: maximize `‖r‖₁² / ‖r‖₂²` subject to `V_M r = 0`.
//!
//! Equivalently, minimize `‖r‖₂²` over `‖r‖₁ = 1, V_M r = 0`. Writing `r = s − t`
//! with `s, t ≥ 0` and `1ᵀ(s + t) = 1` does not enforce `s∘t = 0`, and then
//! `s = t = 1/(2N)` is feasible with objective 0, so that program collapses to
//! `r = 0` ([`MaxSnrProblem::split_qp`] keeps it for inspection).
//!
//! The solver instead fixes a sign pattern `σ` (with `σ_0 = +1`) and solves the
//! convex program in `u = σ∘r ≥ 0`:
//!
//! ```text
//! min uᵀu   s.t.   1ᵀu = 1,   V_M diag(σ) u = 0,   u ≥ 0.
//! ```
//!
//! Dropping `u ≥ 0` gives `r = Pσ / σᵀPσ` with value `σᵀPσ`, where `P` projects
//! onto `null(V_M)`. That bound is tight when `σ∘Pσ > 0`. Patterns with fewer
//! than `M+1` sign changes are skipped: a polynomial with a root of multiplicity
//! `M+1` at `z = 1` has at least that many sign changes. Remaining patterns whose
//! bound beats the incumbent are solved by the interior-point method.

use super::linalg::{dot, solve_in_place};
use super::qp::{IpmOptions, IpmStatus, QuadraticProgram};
use super::train::{Design, PulseTrain};
use crate::error::{Error, Result};
use crate::scalar::{Coefficient, Real};
use crate::spectra::{pq_from_r, DesignVector};

/// Longest design accepted; the pattern search visits `2^{N−1}` sign patterns.
pub const MAX_MAXSNR_LEN: usize = 24;

/// Relative margin a candidate must beat the incumbent by; earlier patterns win ties.
const TIE_MARGIN: f64 = 1e-12;

/// Problem dimensions for the order-`M`, length-`N` max-SNR program.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MaxSnrProblem {
    n: usize,
    m: usize,
}

impl MaxSnrProblem {
    pub fn new(n: usize, m: usize) -> Result<Self> {
        if n < 2 || m + 2 > n {
            return Err(Error::InfeasibleOrder {
                order: m,
                length: n,
            });
        }
        if n > MAX_MAXSNR_LEN {
            return Err(Error::Capacity(format!(
                "max-SNR search supports N <= {MAX_MAXSNR_LEN}, got {n}"
            )));
        }
        Ok(Self { n, m })
    }

    pub fn length(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.m
    }

    /// `V_M` with row `m` scaled by `(N−1)^{−m}`, row-major `(M+1) × N`.
    pub fn scaled_vandermonde<T: Real>(&self) -> Vec<T> {
        let last = T::from_usize_lossy(self.n - 1);
        let mut v = Vec::with_capacity((self.m + 1) * self.n);
        for p in 0..=self.m {
            for col in 0..self.n {
                v.push((T::from_usize_lossy(col) / last).powi(p as i32));
            }
        }
        v
    }

    /// The split program over `x = [s; t]`: `min ‖s − t‖²` s.t. `1ᵀ(s + t) = 1`,
    /// `V_M(s − t) = 0`, `s, t ≥ 0`.
    pub fn split_qp<T: Real>(&self) -> QuadraticProgram<T> {
        let (n, dim) = (self.n, 2 * self.n);
        let two = T::one() + T::one();
        let mut h = vec![T::zero(); dim * dim];
        for i in 0..n {
            h[i * dim + i] = two;
            h[(i + n) * dim + i + n] = two;
            h[i * dim + i + n] = -two;
            h[(i + n) * dim + i] = -two;
        }
        let v = self.scaled_vandermonde::<T>();
        let mut a = vec![T::one(); dim];
        let mut b = vec![T::one()];
        for p in 0..=self.m {
            let row = &v[p * n..(p + 1) * n];
            a.extend(row.iter().copied());
            a.extend(row.iter().map(|&x| -x));
            b.push(T::zero());
        }
        QuadraticProgram {
            n: dim,
            h,
            c: vec![T::zero(); dim],
            a,
            b,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct MaxSnrOptions<T> {
    pub ipm: IpmOptions<T>,
    /// Largest acceptable KKT residual of the returned point.
    pub kkt_tolerance: T,
}

impl<T: Real> Default for MaxSnrOptions<T> {
    fn default() -> Self {
        let double = T::NULL_TOLERANCE < T::from_f64_lossy(1e-7);
        Self {
            ipm: IpmOptions::default(),
            kkt_tolerance: T::from_f64_lossy(if double { 1e-8 } else { 1e-4 }),
        }
    }
}

/// Optimality residuals of the returned point, for the sign-pattern program
/// `min uᵀu, Au = b, u ≥ 0` with multipliers `λ` (equalities) and `μ` (bounds).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KktReport<T> {
    /// `‖2u − Aᵀλ − μ‖∞`.
    pub stationarity: T,
    /// `max(|1ᵀu − 1|, ‖V̂ r‖∞)` with `V̂` the row-scaled Vandermonde matrix.
    pub primal: T,
    /// `max(0, −min μ)`.
    pub dual_feasibility: T,
    /// `max |u_n μ_n|`.
    pub complementarity: T,
    /// `max s_n t_n` for the split `s = max(r, 0)`, `t = max(−r, 0)`.
    pub split_product: T,
}

impl<T: Real> KktReport<T> {
    pub fn max_residual(&self) -> T {
        self.stationarity
            .max(self.primal)
            .max(self.dual_feasibility)
            .max(self.complementarity)
            .max(self.split_product)
    }
}

#[derive(Clone, Debug)]
pub struct MaxSnrSolution<T> {
    pub design: Design<T>,
    /// Canonical solution: `‖r‖₁ = 1`, first nonzero entry positive.
    pub r: DesignVector<T>,
    pub gain: T,
    pub kkt: KktReport<T>,
    /// Sign patterns with enough sign changes to be feasible.
    pub patterns_examined: u64,
    /// Patterns that needed the interior-point method.
    pub qp_solves: usize,
}

/// Precomputed projectors for one `(N, M)`.
struct Geometry<T> {
    n: usize,
    /// Projector onto `null(V_M)`, row-major.
    proj: Vec<T>,
    /// Orthonormal basis of `range(V_Mᵀ)`.
    row_space: Vec<Vec<T>>,
}

impl<T: Real> Geometry<T> {
    /// `range(V_Mᵀ)` is spanned by polynomials of degree `≤ M` sampled at
    /// `n = 0..N−1`; an orthonormal basis comes from the Stieltjes three-term
    /// recurrence on centred abscissae, with one re-orthogonalization pass.
    fn new(problem: &MaxSnrProblem) -> Result<Self> {
        let (n, m) = (problem.n, problem.m);
        let centre = T::from_usize_lossy(n - 1) / (T::one() + T::one());
        let xs: Vec<T> = (0..n).map(|i| T::from_usize_lossy(i) - centre).collect();
        let mut row_space: Vec<Vec<T>> = vec![vec![T::one() / T::from_usize_lossy(n).sqrt(); n]];
        for k in 0..m {
            let q = &row_space[k];
            let mut v: Vec<T> = xs.iter().zip(q).map(|(&x, &qi)| x * qi).collect();
            for _ in 0..2 {
                for w in &row_space {
                    let c = dot(w, &v);
                    v.iter_mut().zip(w).for_each(|(vi, &wi)| *vi -= c * wi);
                }
            }
            let norm = dot(&v, &v).sqrt();
            if !(norm > T::epsilon()) {
                return Err(numerical("orthogonal polynomial recurrence broke down"));
            }
            row_space.push(v.into_iter().map(|x| x / norm).collect());
        }
        let mut proj = vec![T::zero(); n * n];
        for i in 0..n {
            proj[i * n + i] = T::one();
        }
        for w in &row_space {
            for i in 0..n {
                for j in 0..n {
                    proj[i * n + j] -= w[i] * w[j];
                }
            }
        }
        Ok(Self { n, proj, row_space })
    }

    fn apply(&self, sigma: &[T]) -> Vec<T> {
        (0..self.n)
            .map(|i| dot(&self.proj[i * self.n..(i + 1) * self.n], sigma))
            .collect()
    }

    /// Rows of `A = [1ᵀ; Wᵀ diag(σ)]`.
    fn constraints(&self, sigma: &[T]) -> Vec<Vec<T>> {
        let mut rows = vec![vec![T::one(); self.n]];
        for w in &self.row_space {
            rows.push(w.iter().zip(sigma).map(|(&a, &s)| a * s).collect());
        }
        rows
    }
}

fn numerical(msg: &str) -> Error {
    Error::InvalidArgument(format!("numerical failure: {msg}"))
}

fn sigma_from_code<T: Real>(code: u64, n: usize) -> Vec<T> {
    (0..n)
        .map(|i| {
            if i > 0 && (code >> (i - 1)) & 1 == 1 {
                -T::one()
            } else {
                T::one()
            }
        })
        .collect()
}

struct Candidate<T> {
    gain: T,
    order: u64,
    u: Vec<T>,
    sigma: Vec<T>,
}

fn better<T: Real>(gain: T, order: u64, best: &Option<Candidate<T>>) -> bool {
    let Some(b) = best else {
        return true;
    };
    let margin = T::one() + T::from_f64_lossy(TIE_MARGIN);
    if gain > b.gain * margin {
        true
    } else {
        gain * margin >= b.gain && order < b.order
    }
}

/// Max-SNR design of length `N` with null order at least `M`.
pub fn max_snr_design<T: Real + Coefficient>(
    n: usize,
    m: usize,
    opts: &MaxSnrOptions<T>,
) -> Result<MaxSnrSolution<T>> {
    let problem = MaxSnrProblem::new(n, m)?;
    let geo = Geometry::<T>::new(&problem)?;
    let half_patterns: u64 = 1 << (n - 1);
    let mask = half_patterns - 1;

    let mut sigma = vec![T::one(); n];
    let mut ps = geo.apply(&sigma);
    let mut g = dot(&sigma, &ps);
    let two = T::one() + T::one();
    let four = two + two;

    let mut best: Option<Candidate<T>> = None;
    let mut deferred: Vec<(T, u64, u64)> = Vec::new();
    let mut examined = 0u64;

    for i in 0..half_patterns {
        let code = i ^ (i >> 1);
        if i > 0 {
            let j = i.trailing_zeros() as usize + 1;
            if i % 1024 == 0 {
                sigma[j] = -sigma[j];
                ps = geo.apply(&sigma);
                g = dot(&sigma, &ps);
            } else {
                let s = sigma[j];
                g = g - four * s * ps[j] + four * geo.proj[j * n + j];
                for (k, v) in ps.iter_mut().enumerate() {
                    *v -= two * s * geo.proj[k * n + j];
                }
                sigma[j] = -s;
            }
        }
        if (((code ^ (code << 1)) & mask).count_ones() as usize) < m + 1 {
            continue;
        }
        examined += 1;
        if sigma.iter().zip(&ps).all(|(&s, &p)| s * p > T::zero()) {
            if better(g, i, &best) {
                let u = ps.iter().zip(&sigma).map(|(&p, &s)| s * p / g).collect();
                best = Some(Candidate {
                    gain: g,
                    order: i,
                    u,
                    sigma: sigma.clone(),
                });
            }
        } else {
            deferred.push((g, code, i));
        }
    }

    deferred.sort_by(|a, b| {
        b.0.partial_cmp(&a.0)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.2.cmp(&b.2))
    });
    let margin = T::one() + T::from_f64_lossy(TIE_MARGIN);
    let mut qp_solves = 0;
    for &(bound, code, order) in &deferred {
        if let Some(b) = &best {
            if bound * margin < b.gain {
                break;
            }
        }
        let sig = sigma_from_code::<T>(code, n);
        qp_solves += 1;
        let Some(u) = solve_pattern(&geo, &sig, &opts.ipm)? else {
            continue;
        };
        let uu = dot(&u, &u);
        let gain = T::one() / uu;
        if better(gain, order, &best) {
            best = Some(Candidate {
                gain,
                order,
                u,
                sigma: sig,
            });
        }
    }

    let best = best.ok_or_else(|| {
        Error::InvalidArgument(format!("no feasible sign pattern for N = {n}, M = {m}"))
    })?;
    finish(&problem, &geo, best, examined, qp_solves, opts)
}

/// Optimum of the sign-pattern program, `None` when the pattern is infeasible.
fn solve_pattern<T: Real>(
    geo: &Geometry<T>,
    sigma: &[T],
    ipm: &IpmOptions<T>,
) -> Result<Option<Vec<T>>> {
    let n = geo.n;
    let two = T::one() + T::one();
    let rows = geo.constraints(sigma);
    let qp = QuadraticProgram {
        n,
        h: (0..n * n)
            .map(|k| if k % (n + 1) == 0 { two } else { T::zero() })
            .collect(),
        c: vec![T::zero(); n],
        a: rows.iter().flatten().copied().collect(),
        b: std::iter::once(T::one())
            .chain(std::iter::repeat_n(T::zero(), rows.len() - 1))
            .collect(),
    };
    let sol = qp.solve(ipm)?;
    if sol.status != IpmStatus::Optimal {
        return Ok(None);
    }
    let u = polish(&sol.x, &rows, ipm.tolerance).unwrap_or(sol.x);
    Ok((dot(&u, &u) > T::zero()).then_some(u))
}

/// Re-solves on the support of `u` so that inactive entries are exactly zero.
fn polish<T: Real>(u: &[T], rows: &[Vec<T>], tol: T) -> Option<Vec<T>> {
    let top = u.iter().fold(T::zero(), |a, &b| a.max(b));
    let mut support: Vec<usize> = (0..u.len()).filter(|&i| u[i] > tol.sqrt() * top).collect();
    let p = rows.len();
    while support.len() >= p {
        // u_S = A_Sᵀ (A_S A_Sᵀ)⁻¹ b with b = e_0.
        let mut gram = vec![T::zero(); p * p];
        for a in 0..p {
            for b in 0..p {
                gram[a * p + b] = support
                    .iter()
                    .fold(T::zero(), |acc, &i| acc + rows[a][i] * rows[b][i]);
            }
        }
        let mut rhs = vec![T::zero(); p];
        rhs[0] = T::one();
        solve_in_place(&mut gram, &mut rhs, p).ok()?;
        let mut out = vec![T::zero(); u.len()];
        for &i in &support {
            out[i] = (0..p).fold(T::zero(), |acc, a| acc + rows[a][i] * rhs[a]);
        }
        if out.iter().all(|&v| v >= T::zero()) {
            return Some(out);
        }
        support.retain(|&i| out[i] >= T::zero());
    }
    None
}

fn kkt_report<T: Real>(problem: &MaxSnrProblem, u: &[T], rows: &[Vec<T>], r: &[T]) -> KktReport<T> {
    let n = u.len();
    let p = rows.len();
    let two = T::one() + T::one();
    let support: Vec<usize> = (0..n).filter(|&i| u[i] > T::zero()).collect();
    let mut gram = vec![T::zero(); p * p];
    let mut rhs = vec![T::zero(); p];
    for a in 0..p {
        for b in 0..p {
            gram[a * p + b] = support
                .iter()
                .fold(T::zero(), |acc, &i| acc + rows[a][i] * rows[b][i]);
        }
        rhs[a] = support
            .iter()
            .fold(T::zero(), |acc, &i| acc + rows[a][i] * two * u[i]);
    }
    let lambda = if solve_in_place(&mut gram, &mut rhs, p).is_ok() {
        rhs
    } else {
        vec![T::zero(); p]
    };
    let raw: Vec<T> = (0..n)
        .map(|i| two * u[i] - (0..p).fold(T::zero(), |acc, a| acc + rows[a][i] * lambda[a]))
        .collect();
    let mu: Vec<T> = (0..n)
        .map(|i| {
            if u[i] > T::zero() {
                T::zero()
            } else {
                raw[i].max(T::zero())
            }
        })
        .collect();
    let stationarity = (0..n).fold(T::zero(), |acc, i| acc.max((raw[i] - mu[i]).abs()));
    let dual_feasibility = mu.iter().fold(T::zero(), |acc, &v| acc.max(-v));
    let complementarity = (0..n).fold(T::zero(), |acc, i| acc.max((u[i] * mu[i]).abs()));

    let v = problem.scaled_vandermonde::<T>();
    let mut primal = (u.iter().copied().sum::<T>() - T::one()).abs();
    for row in v.chunks(n) {
        primal = primal.max(dot(row, r).abs());
    }
    let split_product = r.iter().fold(T::zero(), |acc, &x| {
        acc.max(x.max(T::zero()) * (-x).max(T::zero()))
    });
    KktReport {
        stationarity,
        primal,
        dual_feasibility,
        complementarity,
        split_product,
    }
}

fn finish<T: Real + Coefficient>(
    problem: &MaxSnrProblem,
    geo: &Geometry<T>,
    best: Candidate<T>,
    examined: u64,
    qp_solves: usize,
    opts: &MaxSnrOptions<T>,
) -> Result<MaxSnrSolution<T>> {
    let rows = geo.constraints(&best.sigma);
    let mut r: Vec<T> = best
        .u
        .iter()
        .zip(&best.sigma)
        .map(|(&u, &s)| u * s)
        .collect();
    if r.iter()
        .find(|v| !v.is_zero())
        .is_some_and(|v| *v < T::zero())
    {
        r.iter_mut().for_each(|v| *v = -*v);
    }
    let l1: T = r.iter().map(|v| v.abs()).sum();
    r.iter_mut().for_each(|v| *v /= l1);
    let kkt = kkt_report(problem, &best.u, &rows, &r);
    if kkt.max_residual() > opts.kkt_tolerance {
        return Err(Error::Convergence {
            iterations: qp_solves,
            residual: kkt.max_residual().to_f64().unwrap_or(f64::NAN),
        });
    }
    let r = DesignVector::new(r)?;
    let (p, q) = pq_from_r(&r);
    let l2: T = q.iter().map(|&v| v * v).sum();
    let gain = T::one() / l2;
    let design = Design::new(PulseTrain::binary(p, q)?, problem.m)?;
    Ok(MaxSnrSolution {
        design,
        r,
        gain,
        kkt,
        patterns_examined: examined,
        qp_solves,
    })
}
