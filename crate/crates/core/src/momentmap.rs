//! Representations of the double, the moment map `μ_α`, the form `ω_α`, and
//! a damped Gauss–Newton search for points of `μ_α⁻¹(λ)`.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use num_traits::{Num, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::QMatrix;
use crate::quiver::{DimVector, Quiver, Weight};
use crate::rational::{format_rational, to_f64, Rational};

/// Entry type for representations: exact rationals or `f64`.
pub trait Scalar: Clone + Num + Neg<Output = Self> + std::fmt::Debug {}
impl<T: Clone + Num + Neg<Output = T> + std::fmt::Debug> Scalar for T {}

/// Dense row-major matrix over a [`Scalar`].
#[derive(Debug, Clone, PartialEq)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = T::one();
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Mat { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &T {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: T) {
        self.data[r * self.cols + c] = v;
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).fold(T::zero(), |acc, i| acc + self.get(i, i).clone())
    }

    pub fn scale(&self, s: &T) -> Self {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x.clone() * s.clone()).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Mat<U> {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }
}

impl<T: Scalar> Add for &Mat<T> {
    type Output = Mat<T>;
    fn add(self, rhs: &Mat<T>) -> Mat<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| a.clone() + b.clone())
            .collect();
        Mat {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }
}

impl<T: Scalar> Sub for &Mat<T> {
    type Output = Mat<T>;
    fn sub(self, rhs: &Mat<T>) -> Mat<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| a.clone() - b.clone())
            .collect();
        Mat {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }
}

impl<T: Scalar> Mul for &Mat<T> {
    type Output = Mat<T>;
    fn mul(self, rhs: &Mat<T>) -> Mat<T> {
        assert_eq!(self.cols, rhs.rows);
        let mut out: Mat<T> = Mat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = out.get(i, j).clone() + a.clone() * rhs.get(k, j).clone();
                    out.set(i, j, v);
                }
            }
        }
        out
    }
}

impl From<&QMatrix> for Mat<Rational> {
    fn from(m: &QMatrix) -> Self {
        let data = (0..m.nrows()).flat_map(|i| m.row(i).to_vec()).collect();
        Mat {
            rows: m.nrows(),
            cols: m.ncols(),
            data,
        }
    }
}

impl From<&Mat<Rational>> for QMatrix {
    fn from(m: &Mat<Rational>) -> Self {
        let rows: Vec<Vec<Rational>> = m
            .data
            .chunks(m.cols.max(1))
            .map(<[Rational]>::to_vec)
            .collect();
        if m.rows == 0 {
            return QMatrix::zeros(0, m.cols);
        }
        QMatrix::from_rows(&rows[..m.rows])
    }
}

/// A representation of `Q̄`: one matrix per doubled arrow, base arrows first.
#[derive(Debug, Clone, PartialEq)]
pub struct Representation<T> {
    pub arrows: Vec<Mat<T>>,
}

/// An element of `Endom(α)`: one square matrix per vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct EndomElement<T> {
    pub blocks: Vec<Mat<T>>,
}

impl<T: Scalar> EndomElement<T> {
    pub fn zeros(alpha: &DimVector) -> Self {
        EndomElement {
            blocks: alpha
                .iter()
                .map(|&a| Mat::zeros(a as usize, a as usize))
                .collect(),
        }
    }

    pub fn identity(alpha: &DimVector) -> Self {
        EndomElement {
            blocks: alpha.iter().map(|&a| Mat::identity(a as usize)).collect(),
        }
    }

    /// `λ_i · 1` at each vertex.
    pub fn scalars(alpha: &DimVector, lambda: &[T]) -> Self {
        EndomElement {
            blocks: alpha
                .iter()
                .zip(lambda)
                .map(|(&a, l)| Mat::identity(a as usize).scale(l))
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(Mat::is_zero)
    }

    pub fn total_trace(&self) -> T {
        self.blocks.iter().fold(T::zero(), |acc, b| acc + b.trace())
    }

    /// `Σ_i tr(θ_i φ_i)`.
    pub fn pairing(&self, other: &EndomElement<T>) -> T {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .fold(T::zero(), |acc, (a, b)| acc + (a * b).trace())
    }

    pub fn sub(&self, other: &EndomElement<T>) -> EndomElement<T> {
        EndomElement {
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = &T> {
        self.blocks.iter().flat_map(|b| b.data.iter())
    }
}

fn shape(quiver: &Quiver, alpha: &DimVector, k: usize) -> (usize, usize) {
    let a = &quiver.double().arrows()[k];
    (alpha[a.head] as usize, alpha[a.tail] as usize)
}

impl<T: Scalar> Representation<T> {
    pub fn zeros(quiver: &Quiver, alpha: &DimVector) -> Self {
        let d = quiver.double();
        let arrows = d
            .arrows()
            .iter()
            .map(|a| Mat::zeros(alpha[a.head] as usize, alpha[a.tail] as usize))
            .collect();
        Representation { arrows }
    }

    pub fn new(quiver: &Quiver, alpha: &DimVector, arrows: Vec<Mat<T>>) -> Result<Self> {
        check_alpha(quiver, alpha)?;
        let d = quiver.double();
        if arrows.len() != d.arrow_count() {
            return Err(Error::ShapeMismatch(format!(
                "{} matrices for {} arrows of the double",
                arrows.len(),
                d.arrow_count()
            )));
        }
        for (k, m) in arrows.iter().enumerate() {
            let want = shape(quiver, alpha, k);
            if (m.rows, m.cols) != want {
                return Err(Error::ShapeMismatch(format!(
                    "arrow {k} is {}x{}, expected {}x{}",
                    m.rows, m.cols, want.0, want.1
                )));
            }
        }
        Ok(Representation { arrows })
    }

    /// Entries of all arrow matrices in order.
    pub fn flatten(&self) -> Vec<T> {
        self.arrows
            .iter()
            .flat_map(|m| m.data.iter().cloned())
            .collect()
    }

    pub fn from_flat(quiver: &Quiver, alpha: &DimVector, flat: &[T]) -> Self {
        let mut rep = Self::zeros(quiver, alpha);
        let mut pos = 0;
        for m in &mut rep.arrows {
            let n = m.data.len();
            m.data.clone_from_slice(&flat[pos..pos + n]);
            pos += n;
        }
        assert_eq!(pos, flat.len());
        rep
    }

    pub fn add(&self, other: &Representation<T>) -> Representation<T> {
        Representation {
            arrows: self
                .arrows
                .iter()
                .zip(&other.arrows)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn scale(&self, s: &T) -> Representation<T> {
        Representation {
            arrows: self.arrows.iter().map(|a| a.scale(s)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.arrows.iter().all(Mat::is_zero)
    }
}

impl Representation<Rational> {
    pub fn to_f64(&self) -> Representation<f64> {
        Representation {
            arrows: self.arrows.iter().map(|m| m.map(to_f64)).collect(),
        }
    }
}

fn check_alpha(quiver: &Quiver, alpha: &DimVector) -> Result<()> {
    if alpha.len() != quiver.vertex_count() {
        return Err(Error::LengthMismatch {
            expected: quiver.vertex_count(),
            found: alpha.len(),
        });
    }
    Ok(())
}

fn check_rep<T: Scalar>(quiver: &Quiver, alpha: &DimVector, x: &Representation<T>) -> Result<()> {
    check_alpha(quiver, alpha)?;
    let d = quiver.double();
    if x.arrows.len() != d.arrow_count() {
        return Err(Error::ShapeMismatch(format!(
            "{} matrices for {} arrows of the double",
            x.arrows.len(),
            d.arrow_count()
        )));
    }
    for (k, m) in x.arrows.iter().enumerate() {
        if (m.rows, m.cols) != shape(quiver, alpha, k) {
            return Err(Error::ShapeMismatch(format!(
                "arrow {k} has shape {}x{}",
                m.rows, m.cols
            )));
        }
    }
    Ok(())
}

fn check_endom<T: Scalar>(alpha: &DimVector, a: &EndomElement<T>) -> Result<()> {
    if a.blocks.len() != alpha.len()
        || a.blocks
            .iter()
            .zip(alpha.iter())
            .any(|(b, &n)| b.rows != n as usize || b.cols != n as usize)
    {
        return Err(Error::ShapeMismatch(
            "endomorphism blocks do not match alpha".into(),
        ));
    }
    Ok(())
}

/// `μ_α(x)_i = Σ_{h(a)=i} x_a x_{a*} − Σ_{t(a)=i} x_{a*} x_a` over `a ∈ Q`.
pub fn mu<T: Scalar>(
    quiver: &Quiver,
    alpha: &DimVector,
    x: &Representation<T>,
) -> Result<EndomElement<T>> {
    check_rep(quiver, alpha, x)?;
    let m = quiver.arrows().len();
    let mut out = EndomElement::zeros(alpha);
    for (k, a) in quiver.arrows().iter().enumerate() {
        let (xa, xs) = (&x.arrows[k], &x.arrows[k + m]);
        out.blocks[a.head] = &out.blocks[a.head] + &(xa * xs);
        out.blocks[a.tail] = &out.blocks[a.tail] - &(xs * xa);
    }
    Ok(out)
}

/// `ω_α(x,y) = Σ_{a∈Q} tr(x_{a*} y_a) − tr(x_a y_{a*})`.
pub fn omega<T: Scalar>(
    quiver: &Quiver,
    alpha: &DimVector,
    x: &Representation<T>,
    y: &Representation<T>,
) -> Result<T> {
    check_rep(quiver, alpha, x)?;
    check_rep(quiver, alpha, y)?;
    let m = quiver.arrows().len();
    let mut acc = T::zero();
    for k in 0..m {
        acc = acc + (&x.arrows[k + m] * &y.arrows[k]).trace()
            - (&x.arrows[k] * &y.arrows[k + m]).trace();
    }
    Ok(acc)
}

/// `(a x)_b = a_{h(b)} x_b`.
pub fn act_left<T: Scalar>(
    quiver: &Quiver,
    a: &EndomElement<T>,
    x: &Representation<T>,
) -> Representation<T> {
    let arrows = quiver
        .double()
        .arrows()
        .iter()
        .zip(&x.arrows)
        .map(|(b, xb)| &a.blocks[b.head] * xb)
        .collect();
    Representation { arrows }
}

/// `[a, x]_b = a_{h(b)} x_b − x_b a_{t(b)}`.
pub fn commutator<T: Scalar>(
    quiver: &Quiver,
    a: &EndomElement<T>,
    x: &Representation<T>,
) -> Representation<T> {
    let arrows = quiver
        .double()
        .arrows()
        .iter()
        .zip(&x.arrows)
        .map(|(b, xb)| &(&a.blocks[b.head] * xb) - &(xb * &a.blocks[b.tail]))
        .collect();
    Representation { arrows }
}

/// `g · x` with `(g·x)_b = g_{h(b)} x_b g_{t(b)}⁻¹`, given `g` and `g⁻¹`.
pub fn conjugate<T: Scalar>(
    quiver: &Quiver,
    g: &EndomElement<T>,
    g_inv: &EndomElement<T>,
    x: &Representation<T>,
) -> Representation<T> {
    let arrows = quiver
        .double()
        .arrows()
        .iter()
        .zip(&x.arrows)
        .map(|(b, xb)| &(&g.blocks[b.head] * xb) * &g_inv.blocks[b.tail])
        .collect();
    Representation { arrows }
}

/// Derivative of `μ_α` at `x` in direction `v`.
pub fn mu_differential<T: Scalar>(
    quiver: &Quiver,
    alpha: &DimVector,
    x: &Representation<T>,
    v: &Representation<T>,
) -> Result<EndomElement<T>> {
    check_rep(quiver, alpha, x)?;
    check_rep(quiver, alpha, v)?;
    let m = quiver.arrows().len();
    let mut out = EndomElement::zeros(alpha);
    for (k, a) in quiver.arrows().iter().enumerate() {
        let (xa, xs, va, vs) = (
            &x.arrows[k],
            &x.arrows[k + m],
            &v.arrows[k],
            &v.arrows[k + m],
        );
        out.blocks[a.head] = &(&out.blocks[a.head] + &(va * xs)) + &(xa * vs);
        out.blocks[a.tail] = &(&out.blocks[a.tail] - &(vs * xa)) - &(xs * va);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairingCheck<T> {
    /// `Σ_i tr(μ(x)_i a_i)`.
    pub lhs: T,
    /// `ω(x, a x)` for the left action.
    pub rhs: T,
    pub equal: bool,
}

/// Compares `Σ_i tr(μ(x)_i a_i)` with `ω(x, a x)`, `(a x)_b = a_{h(b)} x_b`.
/// The latter equals `½ ω(x, [a, x])`.
pub fn trace_pairing_check<T: Scalar>(
    quiver: &Quiver,
    alpha: &DimVector,
    x: &Representation<T>,
    a: &EndomElement<T>,
) -> Result<PairingCheck<T>> {
    check_endom(alpha, a)?;
    let lhs = mu(quiver, alpha, x)?.pairing(a);
    let rhs = omega(quiver, alpha, x, &act_left(quiver, a, x))?;
    let equal = lhs == rhs;
    Ok(PairingCheck { lhs, rhs, equal })
}

/// `dim Rep(Q̄, α) = 2 Σ_{a∈Q} α_{h(a)} α_{t(a)}`.
pub fn rep_dim(quiver: &Quiver, alpha: &DimVector) -> usize {
    quiver
        .arrows()
        .iter()
        .map(|a| 2 * (alpha[a.head] * alpha[a.tail]) as usize)
        .sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub tol: f64,
    pub max_iter: usize,
    /// Relative to the largest singular value.
    pub rank_tol: f64,
    pub initial_damping: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            tol: 1e-10,
            max_iter: 200,
            rank_tol: 1e-8,
            initial_damping: 1e-3,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub x: Representation<f64>,
    pub residual: f64,
    pub iterations: usize,
    /// Index of the random start that converged.
    pub start: usize,
}

fn lambda_f64(quiver: &Quiver, alpha: &DimVector, lambda: &Weight) -> Result<Vec<f64>> {
    check_alpha(quiver, alpha)?;
    let dot = lambda.dot(alpha)?;
    if !dot.is_zero() {
        return Err(Error::EmptyByTrace(format_rational(&dot)));
    }
    Ok(lambda.entries().iter().map(to_f64).collect())
}

fn residual_vec(
    quiver: &Quiver,
    alpha: &DimVector,
    lambda: &[f64],
    x: &Representation<f64>,
) -> DVector<f64> {
    let target = EndomElement::scalars(alpha, lambda);
    let r = mu(quiver, alpha, x).expect("shapes checked").sub(&target);
    DVector::from_iterator(r.entries().count(), r.entries().copied())
}

/// Jacobian of the stacked residual with respect to the flattened entries.
fn jacobian(quiver: &Quiver, alpha: &DimVector, x: &Representation<f64>) -> DMatrix<f64> {
    let n = rep_dim(quiver, alpha);
    let rows: usize = alpha.iter().map(|&a| (a * a) as usize).sum();
    let mut j = DMatrix::zeros(rows, n);
    let mut e = vec![0.0; n];
    for col in 0..n {
        e[col] = 1.0;
        let v = Representation::from_flat(quiver, alpha, &e);
        let d = mu_differential(quiver, alpha, x, &v).expect("shapes checked");
        for (row, val) in d.entries().enumerate() {
            j[(row, col)] = *val;
        }
        e[col] = 0.0;
    }
    j
}

/// Levenberg-damped Gauss–Newton on `μ_α(x) − λ = 0` from `x0`.
pub fn gauss_newton_solve(
    quiver: &Quiver,
    alpha: &DimVector,
    lambda: &Weight,
    x0: &Representation<f64>,
    config: &SolverConfig,
) -> Result<Solution> {
    let lam = lambda_f64(quiver, alpha, lambda)?;
    check_rep(quiver, alpha, x0)?;
    let mut x = DVector::from_vec(x0.flatten());
    let rep = |v: &DVector<f64>| Representation::from_flat(quiver, alpha, v.as_slice());
    let mut r = residual_vec(quiver, alpha, &lam, &rep(&x));
    let mut damp = config.initial_damping;
    for iter in 0..=config.max_iter {
        let norm = r.norm();
        if norm <= config.tol {
            return Ok(Solution {
                x: rep(&x),
                residual: norm,
                iterations: iter,
                start: 0,
            });
        }
        if iter == config.max_iter {
            return Err(Error::NotConverged {
                iterations: iter,
                residual: norm,
            });
        }
        let svd = jacobian(quiver, alpha, &rep(&x)).svd(true, true);
        let (u, vt) = (svd.u.as_ref().unwrap(), svd.v_t.as_ref().unwrap());
        let smax = svd.singular_values.max();
        let mut improved = false;
        while !improved && damp < 1e12 {
            let mut step = DVector::zeros(x.len());
            for (k, &s) in svd.singular_values.iter().enumerate() {
                if s <= 1e-14 * smax {
                    continue;
                }
                let coef = s / (s * s + damp) * u.column(k).dot(&r);
                step -= vt.row(k).transpose() * coef;
            }
            let trial = &x + &step;
            let r_trial = residual_vec(quiver, alpha, &lam, &rep(&trial));
            if r_trial.norm() < norm {
                x = trial;
                r = r_trial;
                damp = (damp * 0.1).max(1e-20);
                improved = true;
            } else {
                damp *= 10.0;
            }
        }
        if !improved {
            return Err(Error::NotConverged {
                iterations: iter,
                residual: norm,
            });
        }
    }
    unreachable!()
}

/// Random representation with entries uniform in `[−1, 1]`.
pub fn random_representation(
    quiver: &Quiver,
    alpha: &DimVector,
    rng: &mut impl Rng,
) -> Representation<f64> {
    let n = rep_dim(quiver, alpha);
    let flat: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect();
    Representation::from_flat(quiver, alpha, &flat)
}

/// Runs up to `starts` random starts drawn from one seeded stream and returns
/// the first converged solution.
pub fn solve_multistart(
    quiver: &Quiver,
    alpha: &DimVector,
    lambda: &Weight,
    seed: u64,
    starts: usize,
    config: &SolverConfig,
) -> Result<Solution> {
    lambda_f64(quiver, alpha, lambda)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = f64::INFINITY;
    let mut iterations = 0;
    for start in 0..starts.max(1) {
        let x0 = random_representation(quiver, alpha, &mut rng);
        match gauss_newton_solve(quiver, alpha, lambda, &x0, config) {
            Ok(sol) => return Ok(Solution { start, ..sol }),
            Err(Error::NotConverged {
                iterations: it,
                residual,
            }) => {
                iterations += it;
                best = best.min(residual);
            }
            Err(e) => return Err(e),
        }
    }
    Err(Error::NotConverged {
        iterations,
        residual: best,
    })
}

/// `dim Rep(Q̄,α) − rank dμ_x`, the rank counting singular values above
/// `rank_tol · σ_max`.
pub fn fiber_tangent_dim(
    quiver: &Quiver,
    alpha: &DimVector,
    lambda: &Weight,
    x: &Representation<f64>,
    config: &SolverConfig,
) -> Result<usize> {
    check_rep(quiver, alpha, x)?;
    let lam: Vec<f64> = lambda.entries().iter().map(to_f64).collect();
    if lam.len() != alpha.len() {
        return Err(Error::LengthMismatch {
            expected: alpha.len(),
            found: lam.len(),
        });
    }
    let residual = residual_vec(quiver, alpha, &lam, x).norm();
    if residual > config.tol {
        return Err(Error::ResidualTooLarge {
            residual,
            tol: config.tol,
        });
    }
    let n = rep_dim(quiver, alpha);
    if n == 0 {
        return Ok(0);
    }
    let sv = jacobian(quiver, alpha, x).singular_values();
    let smax = sv.max();
    let rank = if smax == 0.0 {
        0
    } else {
        sv.iter().filter(|&&s| s > config.rank_tol * smax).count()
    };
    Ok(n - rank)
}

/// `α·α − 1 + 2p(α)`, the fibre dimension predicted by flatness.
pub fn predicted_fiber_dim(quiver: &Quiver, alpha: &DimVector) -> Result<i64> {
    Ok(alpha.self_dot() - 1 + 2 * quiver.p(alpha)?)
}
