//! Symplectic bimodules over a split semisimple algebra `A = ⊕ Mat(α_i)`.
//!
//! A bimodule is stored in its standard layout
//! `M = ⊕_{(i,j)} Mat(α_i × α_j) ⊗ Q^{m_ij}`: components in lexicographic
//! order of `(i,j)`, then copy index, then matrix entry `(r,s)` row-major.
//! The block `A_i` acts on the left of components `(i,·)` and on the right of
//! components `(·,i)`. Every sub-bimodule is `⊕ V_ij ⊗ Mat(α_i × α_j)` for
//! subspaces `V_ij` of the multiplicity spaces, and every balanced form is
//! `ω(x,y) = Σ B_ij[c][d] tr(x_{ij,c} y_{ji,d})` with `B_ji = −B_ijᵀ`, so all
//! constructions below run on multiplicity spaces and are lifted at the end.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{dot, QMatrix, Subspace};
use crate::quiver::{DimVector, Quiver, Weight};
use crate::rational::{rat, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemisimpleAlgebra {
    blocks: Vec<usize>,
}

impl SemisimpleAlgebra {
    pub fn new(blocks: Vec<usize>) -> Result<Self> {
        if blocks.is_empty() || blocks.contains(&0) {
            return Err(Error::InvalidBimodule(
                "block sizes must be positive and nonempty".into(),
            ));
        }
        Ok(SemisimpleAlgebra { blocks })
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn dim(&self) -> usize {
        self.blocks.iter().map(|b| b * b).sum()
    }

    /// Matrix units `(k, r, s)` in block order.
    pub fn matrix_units(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::with_capacity(self.dim());
        for (k, &b) in self.blocks.iter().enumerate() {
            for r in 0..b {
                for s in 0..b {
                    out.push((k, r, s));
                }
            }
        }
        out
    }
}

/// An `A`-`A`-bimodule in standard layout.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bimodule {
    blocks: Vec<usize>,
    mult: Vec<Vec<usize>>,
    offsets: Vec<Vec<usize>>,
    dim: usize,
}

impl Bimodule {
    pub fn new(algebra: &SemisimpleAlgebra, mult: Vec<Vec<usize>>) -> Result<Self> {
        let n = algebra.block_count();
        if mult.len() != n || mult.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidBimodule(format!(
                "multiplicity matrix must be {n}x{n}"
            )));
        }
        let blocks = algebra.blocks.clone();
        let mut offsets = vec![vec![0; n]; n];
        let mut dim = 0;
        for i in 0..n {
            for j in 0..n {
                offsets[i][j] = dim;
                dim += mult[i][j] * blocks[i] * blocks[j];
            }
        }
        Ok(Bimodule {
            blocks,
            mult,
            offsets,
            dim,
        })
    }

    pub fn algebra(&self) -> SemisimpleAlgebra {
        SemisimpleAlgebra {
            blocks: self.blocks.clone(),
        }
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn multiplicities(&self) -> &[Vec<usize>] {
        &self.mult
    }

    pub fn multiplicity(&self, i: usize, j: usize) -> usize {
        self.mult[i][j]
    }

    pub fn index(&self, i: usize, j: usize, c: usize, r: usize, s: usize) -> usize {
        debug_assert!(c < self.mult[i][j] && r < self.blocks[i] && s < self.blocks[j]);
        self.offsets[i][j] + (c * self.blocks[i] + r) * self.blocks[j] + s
    }

    /// Inverse of [`Bimodule::index`].
    pub fn locate(&self, idx: usize) -> (usize, usize, usize, usize, usize) {
        let n = self.blocks.len();
        for i in 0..n {
            for j in 0..n {
                let size = self.mult[i][j] * self.blocks[i] * self.blocks[j];
                let off = self.offsets[i][j];
                if idx >= off && idx < off + size {
                    let local = idx - off;
                    let (bi, bj) = (self.blocks[i], self.blocks[j]);
                    return (i, j, local / (bi * bj), (local / bj) % bi, local % bj);
                }
            }
        }
        panic!("index {idx} outside a bimodule of dimension {}", self.dim)
    }

    /// Image of basis vector `idx` under left multiplication by `E^k_rs`.
    pub fn left_image(&self, (k, r, s): (usize, usize, usize), idx: usize) -> Option<usize> {
        let (i, j, c, r2, s2) = self.locate(idx);
        (i == k && r2 == s).then(|| self.index(i, j, c, r, s2))
    }

    /// Image of basis vector `idx` under right multiplication by `E^k_rs`.
    pub fn right_image(&self, (k, r, s): (usize, usize, usize), idx: usize) -> Option<usize> {
        let (i, j, c, r2, s2) = self.locate(idx);
        (j == k && s2 == r).then(|| self.index(i, j, c, r2, s))
    }

    fn action_matrix(&self, f: impl Fn(usize) -> Option<usize>) -> QMatrix {
        let mut m = QMatrix::zeros(self.dim, self.dim);
        for v in 0..self.dim {
            if let Some(w) = f(v) {
                m[(w, v)] = Rational::one();
            }
        }
        m
    }

    pub fn left_action(&self, unit: (usize, usize, usize)) -> QMatrix {
        self.action_matrix(|v| self.left_image(unit, v))
    }

    pub fn right_action(&self, unit: (usize, usize, usize)) -> QMatrix {
        self.action_matrix(|v| self.right_image(unit, v))
    }

    /// `m_ij = tr(L(E^i_11) R(E^j_11))`, read off the actions.
    pub fn multiplicities_from_traces(&self) -> Vec<Vec<usize>> {
        let n = self.blocks.len();
        let mut out = vec![vec![0; n]; n];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, m) in row.iter_mut().enumerate() {
                *m = (0..self.dim)
                    .filter(|&v| {
                        self.right_image((j, 0, 0), v)
                            .and_then(|w| self.left_image((i, 0, 0), w))
                            .is_some_and(|w| w == v)
                    })
                    .count();
            }
        }
        out
    }

    fn components(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.blocks.len();
        (0..n).flat_map(move |i| (0..n).map(move |j| (i, j)))
    }

    /// `V ⊗ Mat(α_i × α_j)` inside component `(i,j)`.
    fn lift(&self, i: usize, j: usize, v: &[Rational]) -> Vec<Vec<Rational>> {
        let mut out = Vec::new();
        for r in 0..self.blocks[i] {
            for s in 0..self.blocks[j] {
                let mut x = vec![Rational::zero(); self.dim];
                for (c, vc) in v.iter().enumerate() {
                    if !vc.is_zero() {
                        x[self.index(i, j, c, r, s)] = vc.clone();
                    }
                }
                out.push(x);
            }
        }
        out
    }

    /// Multiplicity-space data `V_ij` of a sub-bimodule.
    pub fn slices(&self, u: &Subspace) -> Result<BTreeMap<(usize, usize), Subspace>> {
        if u.ambient() != self.dim {
            return Err(Error::ShapeMismatch(format!(
                "subspace of Q^{} in a bimodule of dimension {}",
                u.ambient(),
                self.dim
            )));
        }
        let basis = u.basis();
        let mut out = BTreeMap::new();
        let mut lifted = Vec::new();
        for (i, j) in self.components() {
            let m = self.mult[i][j];
            if m == 0 {
                continue;
            }
            let rows: Vec<Vec<Rational>> = basis
                .iter()
                .map(|x| {
                    (0..m)
                        .map(|c| x[self.index(i, j, c, 0, 0)].clone())
                        .collect()
                })
                .collect();
            let v = Subspace::span(m, &rows);
            for b in v.basis() {
                lifted.extend(self.lift(i, j, &b));
            }
            out.insert((i, j), v);
        }
        if Subspace::span(self.dim, &lifted) != *u {
            return Err(Error::NotSubBimodule);
        }
        Ok(out)
    }

    pub fn is_sub_bimodule(&self, u: &Subspace) -> bool {
        self.slices(u).is_ok()
    }

    /// Sub-bimodule with the given multiplicity-space data.
    pub fn sub_bimodule(&self, slices: &BTreeMap<(usize, usize), Subspace>) -> Subspace {
        let mut vs = Vec::new();
        for (&(i, j), v) in slices {
            for b in v.basis() {
                vs.extend(self.lift(i, j, &b));
            }
        }
        Subspace::span(self.dim, &vs)
    }

    /// Multiplicity of each simple `X_i ⊗ X_j*` in a sub-bimodule.
    pub fn sub_multiplicities(&self, u: &Subspace) -> Result<Vec<Vec<usize>>> {
        let n = self.blocks.len();
        let mut out = vec![vec![0; n]; n];
        for ((i, j), v) in self.slices(u)? {
            out[i][j] = v.dim();
        }
        Ok(out)
    }
}

/// Skew nondegenerate form with `ω(x, ay) = ω(xa, y)` on a bimodule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BalancedForm {
    matrix: QMatrix,
    /// `B_ij` for every component with `m_ij > 0`.
    mult_forms: BTreeMap<(usize, usize), QMatrix>,
}

impl BalancedForm {
    pub fn new(module: &Bimodule, matrix: QMatrix) -> Result<Self> {
        let n = module.dim;
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::ShapeMismatch(format!(
                "form is {}x{}, bimodule has dimension {n}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        check_symplectic_multiplicities(module)?;
        if !matrix.is_skew() {
            return Err(Error::NotSkew);
        }
        if let Some(block) = unbalanced_block(module, &matrix) {
            return Err(Error::Unbalanced { block });
        }
        let mut mult_forms = BTreeMap::new();
        for (i, j) in module.components() {
            let m = module.mult[i][j];
            if m == 0 {
                continue;
            }
            let mut b = QMatrix::zeros(m, m);
            for c in 0..m {
                for d in 0..m {
                    b[(c, d)] =
                        matrix[(module.index(i, j, c, 0, 0), module.index(j, i, d, 0, 0))].clone();
                }
            }
            if b.determinant().is_zero() {
                return Err(Error::Degenerate);
            }
            mult_forms.insert((i, j), b);
        }
        Ok(BalancedForm { matrix, mult_forms })
    }

    /// Builds the form from multiplicity pairings `B_ij` given for `i ≤ j`;
    /// `B_ji = −B_ijᵀ` fills in the rest.
    pub fn from_mult_forms(
        module: &Bimodule,
        forms: &BTreeMap<(usize, usize), QMatrix>,
    ) -> Result<Self> {
        check_symplectic_multiplicities(module)?;
        let mut full = BTreeMap::new();
        for (&(i, j), b) in forms {
            if i > j {
                continue;
            }
            let m = module.mult[i][j];
            if b.nrows() != m || b.ncols() != m {
                return Err(Error::ShapeMismatch(format!("B_({i},{j}) must be {m}x{m}")));
            }
            full.insert((i, j), b.clone());
            if i != j {
                full.insert((j, i), b.transpose().scale(&rat(-1)));
            }
        }
        let mut matrix = QMatrix::zeros(module.dim, module.dim);
        for (&(i, j), b) in &full {
            for c in 0..b.nrows() {
                for d in 0..b.ncols() {
                    if b[(c, d)].is_zero() {
                        continue;
                    }
                    for r in 0..module.blocks[i] {
                        for s in 0..module.blocks[j] {
                            matrix[(module.index(i, j, c, r, s), module.index(j, i, d, s, r))] =
                                b[(c, d)].clone();
                        }
                    }
                }
            }
        }
        BalancedForm::new(module, matrix)
    }

    /// The standard form: `B_ij = I` for `i < j` and `B_ii = [[0, I], [−I, 0]]`.
    pub fn standard(module: &Bimodule) -> Result<Self> {
        let mut forms = BTreeMap::new();
        for (i, j) in module.components() {
            let m = module.mult[i][j];
            if i > j || m == 0 {
                continue;
            }
            forms.insert(
                (i, j),
                if i < j {
                    QMatrix::identity(m)
                } else {
                    standard_symplectic(m / 2)
                },
            );
        }
        BalancedForm::from_mult_forms(module, &forms)
    }

    /// Pullback along the bimodule automorphism acting on the multiplicity
    /// space of each component `(i,j)` by `g[(i,j)]` (identity if absent).
    pub fn transformed(
        &self,
        module: &Bimodule,
        g: &BTreeMap<(usize, usize), QMatrix>,
    ) -> Result<Self> {
        let mut forms = BTreeMap::new();
        for (&(i, j), b) in &self.mult_forms {
            if i > j {
                continue;
            }
            let m = b.nrows();
            let id = QMatrix::identity(m);
            let gij = g.get(&(i, j)).unwrap_or(&id);
            let gji = g.get(&(j, i)).unwrap_or(&id);
            if gij.determinant().is_zero() || gji.determinant().is_zero() {
                return Err(Error::Degenerate);
            }
            forms.insert((i, j), &(&gij.transpose() * b) * gji);
        }
        BalancedForm::from_mult_forms(module, &forms)
    }

    pub fn matrix(&self) -> &QMatrix {
        &self.matrix
    }

    pub fn mult_form(&self, i: usize, j: usize) -> Option<&QMatrix> {
        self.mult_forms.get(&(i, j))
    }

    pub fn eval(&self, x: &[Rational], y: &[Rational]) -> Rational {
        eval_sparse(&self.matrix, x, y)
    }

    /// The induced form on `⊕ Q^{m_ij}`, pairing `(i,j)` with `(j,i)`.
    fn mult_eval(&self, x: &GradedVec, y: &GradedVec) -> Rational {
        if x.comp.0 != y.comp.1 || x.comp.1 != y.comp.0 {
            return Rational::zero();
        }
        self.mult_forms[&x.comp].bilinear(&x.v, &y.v)
    }
}

fn eval_sparse(m: &QMatrix, x: &[Rational], y: &[Rational]) -> Rational {
    let mut acc = Rational::zero();
    for (u, xu) in x.iter().enumerate() {
        if xu.is_zero() {
            continue;
        }
        let t = dot(m.row(u), y);
        if !t.is_zero() {
            acc += xu * t;
        }
    }
    acc
}

fn standard_symplectic(k: usize) -> QMatrix {
    let mut j = QMatrix::zeros(2 * k, 2 * k);
    for a in 0..k {
        j[(a, k + a)] = rat(1);
        j[(k + a, a)] = rat(-1);
    }
    j
}

fn check_symplectic_multiplicities(module: &Bimodule) -> Result<()> {
    let n = module.blocks.len();
    for i in 0..n {
        if !module.mult[i][i].is_multiple_of(2) {
            return Err(Error::InvalidBimodule(format!(
                "m[{i}][{i}] = {} is odd, so no nondegenerate balanced form exists",
                module.mult[i][i]
            )));
        }
        for j in 0..i {
            if module.mult[i][j] != module.mult[j][i] {
                return Err(Error::InvalidBimodule(format!(
                    "m[{i}][{j}] = {} differs from m[{j}][{i}] = {}, so no nondegenerate balanced form exists",
                    module.mult[i][j], module.mult[j][i]
                )));
            }
        }
    }
    Ok(())
}

/// First block with a matrix unit `a` such that `ω(x, ay) ≠ ω(xa, y)` for
/// some basis vectors.
fn unbalanced_block(module: &Bimodule, omega: &QMatrix) -> Option<usize> {
    let n = module.dim;
    let zero = Rational::zero();
    for unit in module.algebra().matrix_units() {
        let left: Vec<Option<usize>> = (0..n).map(|v| module.left_image(unit, v)).collect();
        let right: Vec<Option<usize>> = (0..n).map(|u| module.right_image(unit, u)).collect();
        for u in 0..n {
            for v in 0..n {
                let lhs = left[v].map_or(&zero, |w| &omega[(u, w)]);
                let rhs = right[u].map_or(&zero, |w| &omega[(w, v)]);
                if lhs != rhs {
                    return Some(unit.0);
                }
            }
        }
    }
    None
}

pub fn is_balanced(module: &Bimodule, omega: &QMatrix) -> bool {
    omega.nrows() == module.dim
        && omega.ncols() == module.dim
        && unbalanced_block(module, omega).is_none()
}

/// Scalars `ζ_i`, representing `ζ(a) = Σ_i ζ_i tr(a_i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceFunction {
    scalars: Vec<Rational>,
}

impl TraceFunction {
    pub fn new(scalars: Vec<Rational>) -> Self {
        TraceFunction { scalars }
    }

    pub fn scalars(&self) -> &[Rational] {
        &self.scalars
    }

    /// `ζ` evaluated on a block-diagonal element given per block.
    pub fn eval(&self, a: &[QMatrix]) -> Rational {
        self.scalars
            .iter()
            .zip(a)
            .map(|(z, m)| z * (0..m.nrows()).map(|i| m[(i, i)].clone()).sum::<Rational>())
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quadruple {
    pub algebra: SemisimpleAlgebra,
    pub module: Bimodule,
    pub form: BalancedForm,
    pub trace: TraceFunction,
}

impl Quadruple {
    pub fn new(module: Bimodule, form: QMatrix, trace: TraceFunction) -> Result<Self> {
        if trace.scalars.len() != module.blocks.len() {
            return Err(Error::LengthMismatch {
                expected: module.blocks.len(),
                found: trace.scalars.len(),
            });
        }
        let form = BalancedForm::new(&module, form)?;
        Ok(Quadruple {
            algebra: module.algebra(),
            module,
            form,
            trace,
        })
    }

    /// `(Endom(α), Rep(Q̄,α), ω_α, ζ_λ)` for a sincere `α`.
    ///
    /// Doubled arrow `k` of `Q̄` (base arrows first) is placed by
    /// [`arrow_slots`]: an arrow `i → j` is a copy of `Mat(α_j × α_i)` in
    /// component `(j,i)`.
    pub fn from_quiver(quiver: &Quiver, alpha: &DimVector, lambda: &Weight) -> Result<Self> {
        let n = quiver.vertex_count();
        if alpha.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                found: alpha.len(),
            });
        }
        if lambda.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                found: lambda.len(),
            });
        }
        if !alpha.is_sincere() {
            return Err(Error::NotSincere);
        }
        let algebra = SemisimpleAlgebra::new(alpha.iter().map(|&a| a as usize).collect())?;
        let slots = arrow_slots(quiver);
        let mut mult = vec![vec![0; n]; n];
        for &(i, j, _) in &slots {
            mult[i][j] += 1;
        }
        let module = Bimodule::new(&algebra, mult)?;
        let m = quiver.arrows().len();
        let mut forms: BTreeMap<(usize, usize), QMatrix> = BTreeMap::new();
        for (i, j) in module.components() {
            if i <= j && module.mult[i][j] > 0 {
                forms.insert((i, j), QMatrix::zeros(module.mult[i][j], module.mult[i][j]));
            }
        }
        // ω_α(x,y) = Σ tr(x_{a*} y_a) − tr(x_a y_{a*}): B(c_{a*}, c_a) = 1 on
        // the component of a*.
        for k in 0..m {
            let (ai, aj, ca) = slots[k];
            let (si, sj, cs) = slots[k + m];
            debug_assert_eq!((ai, aj), (sj, si));
            if si == sj {
                let b = forms.get_mut(&(si, sj)).unwrap();
                b[(cs, ca)] += rat(1);
                b[(ca, cs)] -= rat(1);
            } else if si < sj {
                forms.get_mut(&(si, sj)).unwrap()[(cs, ca)] += rat(1);
            } else {
                forms.get_mut(&(ai, aj)).unwrap()[(ca, cs)] -= rat(1);
            }
        }
        let form = BalancedForm::from_mult_forms(&module, &forms)?;
        let trace = TraceFunction::new(lambda.entries().to_vec());
        Ok(Quadruple {
            algebra,
            module,
            form,
            trace,
        })
    }
}

/// Position `(component i, component j, copy)` of each doubled arrow,
/// indexed as in `DoubledQuiver::arrows`.
pub fn arrow_slots(quiver: &Quiver) -> Vec<(usize, usize, usize)> {
    let n = quiver.vertex_count();
    let mut used = vec![vec![0usize; n]; n];
    quiver
        .double()
        .arrows()
        .iter()
        .map(|a| {
            let c = used[a.head][a.tail];
            used[a.head][a.tail] += 1;
            (a.head, a.tail, c)
        })
        .collect()
}

/// `U^⊥ = {m | ω(m,u) = 0 for all u ∈ U}`.
pub fn perp(module: &Bimodule, omega: &QMatrix, u: &Subspace) -> Subspace {
    assert_eq!(u.ambient(), module.dim);
    let rows: Vec<Vec<Rational>> = u.basis().iter().map(|x| omega.mul_vec(x)).collect();
    Subspace::span(module.dim, &rows).annihilator()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsotropyCheck {
    pub isotropic: bool,
    /// Basis indices `(a, b)` of `T` with `ω(t_a, t_b) ≠ 0`.
    pub violation: Option<(usize, usize)>,
}

/// Verifies that a simple sub-bimodule `T` is isotropic for `omega`.
///
/// For a balanced form this always succeeds; the check runs on any matrix so
/// that non-balanced forms can be exercised.
pub fn check_simple_isotropic(
    module: &Bimodule,
    omega: &QMatrix,
    t: &Subspace,
) -> Result<IsotropyCheck> {
    let m = module.sub_multiplicities(t)?;
    if m.iter().flatten().sum::<usize>() != 1 {
        return Err(Error::NotSimple);
    }
    let basis = t.basis();
    for (a, x) in basis.iter().enumerate() {
        for (b, y) in basis.iter().enumerate() {
            if !eval_sparse(omega, x, y).is_zero() {
                return Ok(IsotropyCheck {
                    isotropic: false,
                    violation: Some((a, b)),
                });
            }
        }
    }
    Ok(IsotropyCheck {
        isotropic: true,
        violation: None,
    })
}

/// Vector in one multiplicity space `Q^{m_ij}`.
#[derive(Debug, Clone)]
struct GradedVec {
    comp: (usize, usize),
    v: Vec<Rational>,
}

impl GradedVec {
    fn axpy(&self, s: &Rational, other: &GradedVec) -> GradedVec {
        debug_assert_eq!(self.comp, other.comp);
        GradedVec {
            comp: self.comp,
            v: self
                .v
                .iter()
                .zip(&other.v)
                .map(|(a, b)| a + s * b)
                .collect(),
        }
    }

    fn scaled(&self, s: &Rational) -> GradedVec {
        GradedVec {
            comp: self.comp,
            v: self.v.iter().map(|a| a * s).collect(),
        }
    }
}

/// Exact symplectic Gram–Schmidt: `(e, f)` with `B(e_a, f_b) = δ_ab` and
/// `B(e,e) = B(f,f) = 0`.
fn symplectic_basis(b: &QMatrix) -> (Vec<Vec<Rational>>, Vec<Vec<Rational>>) {
    let m = b.nrows();
    let mut rest: Vec<Vec<Rational>> = (0..m).map(|i| crate::linalg::unit(m, i)).collect();
    let (mut es, mut fs) = (Vec::new(), Vec::new());
    while !rest.is_empty() {
        let u = rest.remove(0);
        let k = rest
            .iter()
            .position(|w| !b.bilinear(&u, w).is_zero())
            .expect("nondegenerate skew form pairs every vector");
        let w = rest.remove(k);
        let s = b.bilinear(&u, &w).recip();
        let v: Vec<Rational> = w.iter().map(|x| x * &s).collect();
        for w in rest.iter_mut() {
            let bwv = b.bilinear(w, &v);
            let bwu = b.bilinear(w, &u);
            for ((wi, ui), vi) in w.iter_mut().zip(&u).zip(&v) {
                *wi += -(&bwv * ui) + &bwu * vi;
            }
        }
        es.push(u);
        fs.push(v);
    }
    (es, fs)
}

fn lagrangian_slices(module: &Bimodule, form: &BalancedForm) -> BTreeMap<(usize, usize), Subspace> {
    let mut out = BTreeMap::new();
    for ((i, j), b) in &form.mult_forms {
        let m = b.nrows();
        match i.cmp(j) {
            std::cmp::Ordering::Less => {
                out.insert((*i, *j), Subspace::full(m));
            }
            std::cmp::Ordering::Equal => {
                let (es, _) = symplectic_basis(b);
                out.insert((*i, *j), Subspace::span(m, &es));
            }
            std::cmp::Ordering::Greater => {}
        }
    }
    debug_assert!(out.keys().all(|&(i, j)| module.mult[i][j] > 0));
    out
}

/// A Lagrangian sub-bimodule: all of `(i,j)` for `i < j`, and the span of
/// the first half of a symplectic basis of `B_ii` in `(i,i)`.
pub fn maximal_isotropic(module: &Bimodule, form: &BalancedForm) -> Subspace {
    module.sub_bimodule(&lagrangian_slices(module, form))
}

pub fn is_isotropic(form: &BalancedForm, u: &Subspace) -> bool {
    let basis = u.basis();
    basis
        .iter()
        .all(|x| basis.iter().all(|y| form.eval(x, y).is_zero()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Darboux {
    /// Basis of `S`, then the dual basis of `D` under `ω`.
    pub s_basis: Vec<Vec<Rational>>,
    pub d_basis: Vec<Vec<Rational>>,
    /// The starting complement `C` and the corrected isotropic complement
    /// `D = {c − ½θ(c)}`.
    pub initial_complement: Subspace,
    pub complement: Subspace,
    /// Columns `[s_basis | d_basis]`.
    pub certificate: QMatrix,
}

impl Darboux {
    /// Gram matrix `Pᵀ Ω P` of the certificate.
    pub fn gram(&self, form: &BalancedForm) -> QMatrix {
        let cols: Vec<&Vec<Rational>> = self.s_basis.iter().chain(&self.d_basis).collect();
        let n = cols.len();
        let mut g = QMatrix::zeros(n, n);
        for a in 0..n {
            for b in a + 1..n {
                let v = form.eval(cols[a], cols[b]);
                g[(b, a)] = -v.clone();
                g[(a, b)] = v;
            }
        }
        g
    }

    pub fn is_certified(&self, form: &BalancedForm) -> bool {
        self.gram(form) == standard_symplectic(self.s_basis.len())
    }

    /// Whether `θ` was nonzero, i.e. the starting complement was not isotropic.
    pub fn corrected(&self) -> bool {
        self.complement != self.initial_complement
    }
}

/// Darboux basis adapted to a maximal isotropic `S`, starting from the
/// coordinate complement of `S`.
pub fn darboux(module: &Bimodule, form: &BalancedForm, s: &Subspace) -> Result<Darboux> {
    let s_slices = validate_lagrangian(module, form, s)?;
    let c_slices = s_slices
        .iter()
        .map(|(&k, v)| (k, v.coordinate_complement()))
        .collect::<BTreeMap<_, _>>();
    let mut full_c = c_slices.clone();
    for (i, j) in module.components() {
        if module.mult[i][j] > 0 {
            full_c
                .entry((i, j))
                .or_insert_with(|| Subspace::full(module.mult[i][j]));
        }
    }
    darboux_slices(module, form, &s_slices, &full_c)
}

/// As [`darboux`], starting from a given sub-bimodule complement `C` of `S`.
pub fn darboux_with_complement(
    module: &Bimodule,
    form: &BalancedForm,
    s: &Subspace,
    c: &Subspace,
) -> Result<Darboux> {
    let s_slices = validate_lagrangian(module, form, s)?;
    let c_slices = module.slices(c)?;
    if s.sum(c).dim() != module.dim || s.dim() + c.dim() != module.dim {
        return Err(Error::NotMaximalIsotropic(
            "C is not a complement of S".into(),
        ));
    }
    darboux_slices(module, form, &s_slices, &c_slices)
}

fn validate_lagrangian(
    module: &Bimodule,
    form: &BalancedForm,
    s: &Subspace,
) -> Result<BTreeMap<(usize, usize), Subspace>> {
    let slices = module
        .slices(s)
        .map_err(|_| Error::NotMaximalIsotropic("S is not a sub-bimodule".into()))?;
    if 2 * s.dim() != module.dim {
        return Err(Error::NotMaximalIsotropic(format!(
            "dim S = {} but dim M = {}",
            s.dim(),
            module.dim
        )));
    }
    let vecs = graded_basis(&slices);
    for x in &vecs {
        for y in &vecs {
            if !form.mult_eval(x, y).is_zero() {
                return Err(Error::NotMaximalIsotropic("S is not isotropic".into()));
            }
        }
    }
    Ok(slices)
}

fn graded_basis(slices: &BTreeMap<(usize, usize), Subspace>) -> Vec<GradedVec> {
    slices
        .iter()
        .flat_map(|(&comp, v)| v.basis().into_iter().map(move |v| GradedVec { comp, v }))
        .collect()
}

fn darboux_slices(
    module: &Bimodule,
    form: &BalancedForm,
    s_slices: &BTreeMap<(usize, usize), Subspace>,
    c_slices: &BTreeMap<(usize, usize), Subspace>,
) -> Result<Darboux> {
    let s = graded_basis(s_slices);
    let c = graded_basis(c_slices);
    let k = s.len();
    if c.len() != k {
        return Err(Error::NotMaximalIsotropic(
            "complement has the wrong dimension".into(),
        ));
    }
    // G[a][b] = b(s_a, c_b) is invertible since S is Lagrangian and C ⊕ S = M.
    let mut g = QMatrix::zeros(k, k);
    for (a, x) in s.iter().enumerate() {
        for (b, y) in c.iter().enumerate() {
            g[(a, b)] = form.mult_eval(x, y);
        }
    }
    let g_inv = g
        .inverse()
        .ok_or_else(|| Error::NotMaximalIsotropic("S and C are not paired by the form".into()))?;
    // θ(c_b) = Σ_a t_a s_a with b(θ(c_b), c_e) = b(c_b, c_e) for all e,
    // i.e. tᵀ G = row_b, t = G⁻ᵀ row_b.
    let half = Rational::new(1.into(), 2.into());
    let mut d = Vec::with_capacity(k);
    for cb in &c {
        let row: Vec<Rational> = c.iter().map(|ce| form.mult_eval(cb, ce)).collect();
        let t = g_inv.transpose().mul_vec(&row);
        let mut v = cb.clone();
        for (a, ta) in t.iter().enumerate() {
            if ta.is_zero() {
                continue;
            }
            if s[a].comp != v.comp {
                return Err(Error::NotSubBimodule);
            }
            v = v.axpy(&-(ta * &half), &s[a]);
        }
        d.push(v);
    }
    // b(s_a, d_b) = G[a][b] because S is isotropic; the dual basis is D G⁻¹.
    let mut dual = Vec::with_capacity(k);
    for b in 0..k {
        let mut acc: Option<GradedVec> = None;
        for (e, de) in d.iter().enumerate() {
            let coef = &g_inv[(e, b)];
            if coef.is_zero() {
                continue;
            }
            acc = Some(match acc {
                None => de.scaled(coef),
                Some(v) if v.comp == de.comp => v.axpy(coef, de),
                Some(_) => return Err(Error::NotSubBimodule),
            });
        }
        dual.push(acc.expect("G⁻¹ has no zero column"));
    }
    // Lift: s_a ⊗ E_rs pairs with dual_a ⊗ E_sr under the trace.
    let mut s_basis = Vec::new();
    let mut d_basis = Vec::new();
    for (sa, da) in s.iter().zip(&dual) {
        let (i, j) = sa.comp;
        debug_assert_eq!(da.comp, (j, i));
        for r in 0..module.blocks[i] {
            for t in 0..module.blocks[j] {
                let mut x = vec![Rational::zero(); module.dim];
                for (cidx, val) in sa.v.iter().enumerate() {
                    if !val.is_zero() {
                        x[module.index(i, j, cidx, r, t)] = val.clone();
                    }
                }
                let mut y = vec![Rational::zero(); module.dim];
                for (cidx, val) in da.v.iter().enumerate() {
                    if !val.is_zero() {
                        y[module.index(j, i, cidx, t, r)] = val.clone();
                    }
                }
                s_basis.push(x);
                d_basis.push(y);
            }
        }
    }
    let complement = Subspace::span(module.dim, &d_basis);
    let initial_complement = module.sub_bimodule(c_slices);
    let mut cols = s_basis.clone();
    cols.extend(d_basis.iter().cloned());
    let certificate = QMatrix::from_columns(module.dim, &cols);
    Ok(Darboux {
        s_basis,
        d_basis,
        initial_complement,
        complement,
        certificate,
    })
}

/// `μ(m)(a) = ω(m, a m)` for every matrix unit `a = E^k_rs`, returned per
/// block as the matrix `F_k[r][s] = μ(m)(E^k_rs)`.
pub fn abstract_moment_map(quad: &Quadruple, m: &[Rational]) -> Vec<QMatrix> {
    let module = &quad.module;
    assert_eq!(m.len(), module.dim);
    let mut out: Vec<QMatrix> = module
        .blocks
        .iter()
        .map(|&b| QMatrix::zeros(b, b))
        .collect();
    for unit in quad.algebra.matrix_units() {
        let mut am = vec![Rational::zero(); module.dim];
        for (v, x) in m.iter().enumerate() {
            if !x.is_zero() {
                if let Some(w) = module.left_image(unit, v) {
                    am[w] += x;
                }
            }
        }
        let (k, r, s) = unit;
        out[k][(r, s)] = quad.form.eval(m, &am);
    }
    out
}

/// Applies `a ∈ A` (given per block) on the left or right of `m`.
pub fn act(module: &Bimodule, a: &[QMatrix], m: &[Rational], left: bool) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); module.dim];
    for (k, ak) in a.iter().enumerate() {
        for r in 0..ak.nrows() {
            for s in 0..ak.ncols() {
                let coef = &ak[(r, s)];
                if coef.is_zero() {
                    continue;
                }
                for (v, x) in m.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    let img = if left {
                        module.left_image((k, r, s), v)
                    } else {
                        module.right_image((k, r, s), v)
                    };
                    if let Some(w) = img {
                        out[w] += coef * x;
                    }
                }
            }
        }
    }
    out
}

/// Recovers `(Q, α, λ)`: `α_i` = block sizes, `dim V_(j,i)` arrows `i → j`
/// for the computed Lagrangian `S` (loops `m_ii / 2`), `λ_i = ζ_i`.
pub fn quadruple_to_quiver(quad: &Quadruple) -> Result<(Quiver, DimVector, Weight)> {
    let module = &quad.module;
    let n = module.blocks.len();
    let slices = lagrangian_slices(module, &quad.form);
    let mut edges = Vec::new();
    for ((j, i), v) in &slices {
        for _ in 0..v.dim() {
            edges.push((*i, *j));
        }
    }
    let alpha = DimVector::new(module.blocks.iter().map(|&b| b as i64).collect())?;
    let lambda = Weight::new(quad.trace.scalars.clone());
    if lambda.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: lambda.len(),
        });
    }
    Ok((Quiver::from_edges(n, &edges), alpha, lambda))
}

/// Unordered edge multiplicities `{i,j} ↦ count` (loops as `{i,i}`).
pub fn edge_counts(quiver: &Quiver) -> BTreeMap<(usize, usize), usize> {
    let mut out = BTreeMap::new();
    for a in quiver.arrows() {
        *out.entry((a.tail.min(a.head), a.tail.max(a.head)))
            .or_insert(0) += 1;
    }
    out
}
