//! Representation-type stratification of `N_Q(λ,α)`: types, local quivers,
//! fibre-dimension bounds, the nearly Kleinian test and the geometry report.

use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::QMatrix;
use crate::quiver::{DimVector, Quiver, Weight};
use crate::rational::{rat, Rational};
use crate::roots::{classify_root, RootTag};
use crate::sigma::{decompositions, Dimension, SigmaAnalysis};

/// A representation type `(k_1,β⁽¹⁾; …; k_r,β⁽ʳ⁾)` with its weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepType {
    pairs: Vec<(i64, DimVector)>,
    lambda: Weight,
}

impl RepType {
    /// Checks that every `β` lies in `Σ_λ`, multiplicities are positive,
    /// and a dimension vector is shared by several entries only if `p(β) ≥ 1`.
    pub fn new(quiver: &Quiver, lambda: &Weight, mut pairs: Vec<(i64, DimVector)>) -> Result<Self> {
        for (k, b) in &pairs {
            if *k < 1 {
                return Err(Error::InvalidRepType(format!(
                    "multiplicity {k} of {b} is not positive"
                )));
            }
            let analysis = SigmaAnalysis::new(quiver, lambda, b)?;
            if b.is_zero() || !analysis.verdict().in_sigma {
                return Err(Error::InvalidRepType(format!("{b} is not in Sigma_lambda")));
            }
        }
        sort_pairs(&mut pairs);
        for w in pairs.windows(2) {
            if w[0].1 == w[1].1 && quiver.p(&w[0].1)? < 1 {
                return Err(Error::InvalidRepType(format!(
                    "{} repeated although p = 0 (only one simple of that dimension)",
                    w[0].1
                )));
            }
        }
        Ok(RepType {
            pairs,
            lambda: lambda.clone(),
        })
    }

    pub fn pairs(&self) -> &[(i64, DimVector)] {
        &self.pairs
    }

    pub fn lambda(&self) -> &Weight {
        &self.lambda
    }

    pub fn multiplicities(&self) -> DimVector {
        DimVector::new(self.pairs.iter().map(|(k, _)| *k).collect()).expect("positive")
    }

    pub fn alpha(&self) -> DimVector {
        let n = self.lambda.len();
        self.pairs
            .iter()
            .fold(DimVector::zeros(n), |acc, (k, b)| acc.add(&b.scaled(*k)))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Dimension of the stratum, `Σ_t 2p(β⁽ᵗ⁾)`.
    pub fn stratum_dim(&self, quiver: &Quiver) -> i64 {
        self.pairs
            .iter()
            .map(|(_, b)| 2 * quiver.p(b).unwrap())
            .sum()
    }
}

fn sort_pairs(pairs: &mut [(i64, DimVector)]) {
    pairs.sort_by(|a, b| b.1.cmp(&a.1).then(b.0.cmp(&a.0)));
}

impl fmt::Display for RepType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.pairs.iter().map(|(k, b)| format!("{k},{b}")).collect();
        write!(f, "({})", parts.join("; "))
    }
}

/// Partitions of `n` into nonincreasing parts, largest first.
fn partitions(n: i64) -> Vec<Vec<i64>> {
    fn rec(n: i64, max: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for k in (1..=n.min(max)).rev() {
            cur.push(k);
            rec(n - k, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// All realizable representation types for `(Q, λ, α)`.
///
/// Types follow the order of the decompositions of `α` into elements of
/// `Σ_λ`; a part repeated `c` times with `p ≥ 1` is split along every
/// partition of `c`.
pub fn enumerate_rep_types(
    quiver: &Quiver,
    lambda: &Weight,
    alpha: &DimVector,
) -> Result<Vec<RepType>> {
    if alpha.is_zero() {
        return Ok(vec![RepType {
            pairs: Vec::new(),
            lambda: lambda.clone(),
        }]);
    }
    let analysis = SigmaAnalysis::new(quiver, lambda, alpha)?;
    let pool = analysis.sigma_pool();
    let mut out = Vec::new();
    for d in decompositions(alpha, pool) {
        let mut groups: Vec<(DimVector, i64)> = Vec::new();
        for part in d.parts() {
            match groups.last_mut() {
                Some((b, c)) if b == part => *c += 1,
                _ => groups.push((part.clone(), 1)),
            }
        }
        let choices: Vec<Vec<Vec<i64>>> = groups
            .iter()
            .map(|(b, c)| {
                if quiver.p(b).unwrap() >= 1 {
                    partitions(*c)
                } else {
                    vec![vec![*c]]
                }
            })
            .collect();
        let mut idx = vec![0usize; groups.len()];
        loop {
            let mut pairs = Vec::new();
            for (g, (b, _)) in groups.iter().enumerate() {
                for &k in &choices[g][idx[g]] {
                    pairs.push((k, b.clone()));
                }
            }
            out.push(RepType {
                pairs,
                lambda: lambda.clone(),
            });
            let mut g = groups.len();
            loop {
                if g == 0 {
                    break;
                }
                g -= 1;
                idx[g] += 1;
                if idx[g] < choices[g].len() {
                    break;
                }
                idx[g] = 0;
                if g == 0 {
                    g = usize::MAX;
                    break;
                }
            }
            if g == usize::MAX || groups.is_empty() {
                break;
            }
        }
    }
    Ok(out)
}

/// Data of the local quiver at a point of a stratum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalData {
    /// `L_ii` = loops at `i` in the doubled local quiver, `L_ij` = arrows
    /// `i → j` there.
    pub doubled_counts: Vec<Vec<i64>>,
    pub kappa: DimVector,
    /// One orientation: `L_ij` arrows `i → j` for `i < j`, `L_ii / 2` loops.
    pub quiver: Quiver,
}

pub fn local_quiver(quiver: &Quiver, t: &RepType) -> Result<LocalData> {
    let r = t.len();
    let mut counts = vec![vec![0i64; r]; r];
    let mut edges = Vec::new();
    for (i, (_, bi)) in t.pairs.iter().enumerate() {
        for (j, (_, bj)) in t.pairs.iter().enumerate() {
            counts[i][j] = if i == j {
                2 * quiver.p(bi)?
            } else {
                -quiver.bilinear_form(bi, bj)?
            };
            if counts[i][j] < 0 {
                return Err(Error::InvalidRepType(format!(
                    "negative arrow count {} between {bi} and {bj}",
                    counts[i][j]
                )));
            }
        }
    }
    for (i, row) in counts.iter().enumerate() {
        for _ in 0..row[i] / 2 {
            edges.push((i, i));
        }
        for (j, &c) in row.iter().enumerate().skip(i + 1) {
            for _ in 0..c {
                edges.push((i, j));
            }
        }
    }
    Ok(LocalData {
        doubled_counts: counts,
        kappa: t.multiplicities(),
        quiver: Quiver::from_edges(r, &edges),
    })
}

/// Upper bound `α·α − 1 + p(α) + Σ_t p(β⁽ᵗ⁾)` on the dimension of the inverse
/// image of a stratum in `μ_α⁻¹(0)`.
pub fn stratum_fiber_bound(quiver: &Quiver, t: &RepType) -> Result<i64> {
    if !t.lambda.is_zero() {
        return Err(Error::NonzeroLambda);
    }
    let alpha = t.alpha();
    let sum_p: i64 = t
        .pairs
        .iter()
        .map(|(_, b)| quiver.p(b))
        .sum::<Result<i64>>()?;
    Ok(alpha.self_dot() - 1 + quiver.p(&alpha)? + sum_p)
}

/// A top-type `(j_1,m_1; …; j_h,m_h)` over a table of simple dimension vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopType {
    pub sequence: Vec<(usize, i64)>,
    pub betas: Vec<DimVector>,
}

impl TopType {
    pub fn new(sequence: Vec<(usize, i64)>, betas: Vec<DimVector>) -> Result<Self> {
        for &(j, m) in &sequence {
            if j >= betas.len() {
                return Err(Error::InvalidTopType(format!(
                    "index {j} outside the table"
                )));
            }
            if m < 1 {
                return Err(Error::InvalidTopType(format!(
                    "multiplicity {m} is not positive"
                )));
            }
        }
        Ok(TopType { sequence, betas })
    }

    pub fn alpha(&self) -> DimVector {
        let n = self.betas.first().map_or(0, |b| b.len());
        self.sequence
            .iter()
            .fold(DimVector::zeros(n), |acc, &(j, m)| {
                acc.add(&self.betas[j].scaled(m))
            })
    }

    /// `z_i`: zero when `p(β⁽ʲⁱ⁾) = 0` or `j_i` has not occurred before,
    /// otherwise the multiplicity of its latest earlier occurrence.
    pub fn z_values(&self, quiver: &Quiver) -> Result<Vec<i64>> {
        let mut out = Vec::with_capacity(self.sequence.len());
        for (i, &(j, _)) in self.sequence.iter().enumerate() {
            if quiver.p(&self.betas[j])? == 0 {
                out.push(0);
                continue;
            }
            let earlier = self.sequence[..i].iter().rev().find(|(jk, _)| *jk == j);
            out.push(earlier.map_or(0, |&(_, mk)| mk));
        }
        Ok(out)
    }
}

pub fn top_type_bound(quiver: &Quiver, tt: &TopType) -> Result<i64> {
    let alpha = tt.alpha();
    let z = tt.z_values(quiver)?;
    let mut total = alpha.self_dot() - 1 + quiver.p(&alpha)?;
    for (&(j, m), zi) in tt.sequence.iter().zip(z) {
        total += m * zi - m * m * quiver.p(&tt.betas[j])?;
    }
    Ok(total)
}

/// Every top-type whose composition factors match a representation type:
/// for each simple index `t`, the multiplicities `m_i` with `j_i = t` sum
/// to `k_t`.
pub fn refining_top_types(t: &RepType) -> Vec<TopType> {
    let betas: Vec<DimVector> = t.pairs.iter().map(|(_, b)| b.clone()).collect();
    let mut remaining: Vec<i64> = t.pairs.iter().map(|(k, _)| *k).collect();
    let mut out = Vec::new();
    fn rec(
        rem: &mut Vec<i64>,
        seq: &mut Vec<(usize, i64)>,
        betas: &[DimVector],
        out: &mut Vec<TopType>,
    ) {
        if rem.iter().all(|&r| r == 0) {
            out.push(TopType {
                sequence: seq.clone(),
                betas: betas.to_vec(),
            });
            return;
        }
        for j in 0..rem.len() {
            for m in 1..=rem[j] {
                rem[j] -= m;
                seq.push((j, m));
                rec(rem, seq, betas, out);
                seq.pop();
                rem[j] += m;
            }
        }
    }
    rec(&mut remaining, &mut Vec::new(), &betas, &mut out);
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NearlyKleinian {
    No,
    /// One vertex and `α = 1` there.
    Case1,
    /// Extended Dynkin after deleting loops, loops only at extending
    /// vertices, and `α = δ`.
    Case2 {
        delta: DimVector,
        extending: Vec<usize>,
    },
}

impl fmt::Display for NearlyKleinian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NearlyKleinian::No => f.write_str("no"),
            NearlyKleinian::Case1 => f.write_str("case1"),
            NearlyKleinian::Case2 { delta, .. } => write!(f, "case2 delta={delta}"),
        }
    }
}

/// The Cartan matrix `C` with `(α,β) = αᵀ C β`.
pub fn cartan_matrix(quiver: &Quiver) -> QMatrix {
    let n = quiver.vertex_count();
    let mut c = QMatrix::zeros(n, n);
    for i in 0..n {
        c[(i, i)] = rat(2);
    }
    for a in quiver.arrows() {
        c[(a.tail, a.head)] -= rat(1);
        c[(a.head, a.tail)] -= rat(1);
    }
    c
}

/// Exact positive semidefiniteness test by symmetric elimination.
pub fn is_positive_semidefinite(m: &QMatrix) -> bool {
    assert!(m.is_square());
    let mut m = m.clone();
    let mut active: Vec<usize> = (0..m.nrows()).collect();
    loop {
        if active.iter().any(|&i| m[(i, i)].is_negative()) {
            return false;
        }
        let Some(pos) = active.iter().position(|&i| m[(i, i)].is_positive()) else {
            return active
                .iter()
                .all(|&i| active.iter().all(|&j| m[(i, j)].is_zero()));
        };
        let k = active.remove(pos);
        let pivot = m[(k, k)].clone();
        for &i in &active {
            let f = &m[(i, k)] / &pivot;
            if f.is_zero() {
                continue;
            }
            for &j in &active {
                let v = &f * &m[(k, j)];
                m[(i, j)] -= v;
            }
        }
    }
}

/// `δ` if the quiver is extended Dynkin: connected, loop-free, with a
/// positive semidefinite form whose radical is one-dimensional.
pub fn extended_dynkin_delta(quiver: &Quiver) -> Option<DimVector> {
    if !quiver.is_loop_free() || !quiver.is_connected() {
        return None;
    }
    let c = cartan_matrix(quiver);
    if !is_positive_semidefinite(&c) {
        return None;
    }
    let kernel = c.kernel();
    if kernel.len() != 1 {
        return None;
    }
    let v = &kernel[0];
    let lcm = v.iter().fold(num_bigint::BigInt::from(1), |acc, x| {
        num_integer::lcm(acc, x.denom().clone())
    });
    let ints: Vec<num_bigint::BigInt> = v
        .iter()
        .map(|x| (x * Rational::from_integer(lcm.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(num_bigint::BigInt::zero(), |acc, x| {
        num_integer::gcd(acc, x.clone())
    });
    let sign = if ints.iter().any(|x| x.is_negative()) {
        -1
    } else {
        1
    };
    let entries: Option<Vec<i64>> = ints
        .iter()
        .map(|x| i64::try_from(x / &g * sign).ok())
        .collect();
    let entries = entries?;
    if entries.iter().any(|&x| x <= 0) {
        return None;
    }
    DimVector::new(entries).ok()
}

pub fn is_nearly_kleinian(quiver: &Quiver, alpha: &DimVector) -> Result<NearlyKleinian> {
    if alpha.len() != quiver.vertex_count() {
        return Err(Error::LengthMismatch {
            expected: quiver.vertex_count(),
            found: alpha.len(),
        });
    }
    if !alpha.is_sincere() {
        return Err(Error::NotSincere);
    }
    if quiver.vertex_count() == 1 && alpha[0] == 1 {
        return Ok(NearlyKleinian::Case1);
    }
    let Some(delta) = extended_dynkin_delta(&quiver.without_loops()) else {
        return Ok(NearlyKleinian::No);
    };
    let loops_ok = (0..quiver.vertex_count()).all(|i| !quiver.has_loop(i) || delta[i] == 1);
    if !loops_ok || *alpha != delta {
        return Ok(NearlyKleinian::No);
    }
    let extending = (0..delta.len()).filter(|&i| delta[i] == 1).collect();
    Ok(NearlyKleinian::Case2 { delta, extending })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dichotomy {
    CaseI,
    CaseII,
    Both,
    Violation,
}

impl fmt::Display for Dichotomy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Dichotomy::CaseI => "(i)",
            Dichotomy::CaseII => "(ii)",
            Dichotomy::Both => "(i)+(ii)",
            Dichotomy::Violation => "violation",
        })
    }
}

/// Evaluates (i) `Σ_t k_t² < Σ_i α_i²` and (ii) `p(α) − Σ_t p(β⁽ᵗ⁾) ≥ 2`.
pub fn normality_dichotomy(quiver: &Quiver, alpha: &DimVector, t: &RepType) -> Result<Dichotomy> {
    let k_sq: i64 = t.pairs.iter().map(|(k, _)| k * k).sum();
    let first = k_sq < alpha.self_dot();
    let sum_p: i64 = t
        .pairs
        .iter()
        .map(|(_, b)| quiver.p(b))
        .sum::<Result<i64>>()?;
    let second = quiver.p(alpha)? - sum_p >= 2;
    Ok(match (first, second) {
        (true, true) => Dichotomy::Both,
        (true, false) => Dichotomy::CaseI,
        (false, true) => Dichotomy::CaseII,
        (false, false) => Dichotomy::Violation,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Singularity {
    Singular,
    SmoothPoint,
    Undetermined,
}

impl fmt::Display for Singularity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Singularity::Singular => "singular",
            Singularity::SmoothPoint => "smooth-point",
            Singularity::Undetermined => "undetermined",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeometryReport {
    pub alpha: DimVector,
    pub lambda: Weight,
    pub in_r_lambda: bool,
    pub in_sigma: bool,
    pub nonempty: bool,
    /// Always "irreducible or empty"; true exactly when nonempty.
    pub irreducible: bool,
    pub dimension: Dimension,
    pub normal: bool,
    /// `Some(true)` when `α ∈ Σ_λ` is indivisible, otherwise undetermined.
    pub rational_singularities: Option<bool>,
    pub singularity: Singularity,
    pub nearly_kleinian: Option<NearlyKleinian>,
}

impl GeometryReport {
    pub fn key_values(&self) -> Vec<(&'static str, String)> {
        let opt = |v: Option<bool>| v.map_or("undetermined".to_string(), |b| b.to_string());
        vec![
            ("alpha", self.alpha.to_string()),
            ("lambda", self.lambda.to_string()),
            ("in_r_lambda", self.in_r_lambda.to_string()),
            ("in_sigma", self.in_sigma.to_string()),
            ("nonempty", self.nonempty.to_string()),
            ("irreducible", self.irreducible.to_string()),
            ("dimension", self.dimension.to_string()),
            ("normal", self.normal.to_string()),
            ("rational_singularities", opt(self.rational_singularities)),
            ("singularity", self.singularity.to_string()),
            (
                "nearly_kleinian",
                self.nearly_kleinian
                    .as_ref()
                    .map_or("n/a".to_string(), ToString::to_string),
            ),
        ]
    }
}

pub fn geometry_report(
    quiver: &Quiver,
    lambda: &Weight,
    alpha: &DimVector,
) -> Result<GeometryReport> {
    let analysis = SigmaAnalysis::new(quiver, lambda, alpha)?;
    let verdict = analysis.verdict();
    let nonempty = analysis.is_nonempty();
    let dimension = analysis.dimension(quiver);
    let indivisible = alpha.gcd() == 1;
    let rational_singularities = (verdict.in_sigma && indivisible).then_some(true);
    let singularity =
        if lambda.is_zero() && quiver.is_loop_free() && verdict.in_sigma && indivisible {
            if alpha.is_coordinate_vector() {
                Singularity::SmoothPoint
            } else if classify_root(quiver, alpha)?.tag == RootTag::Imaginary {
                Singularity::Singular
            } else {
                Singularity::Undetermined
            }
        } else {
            Singularity::Undetermined
        };
    let nearly_kleinian = if alpha.is_sincere() {
        Some(is_nearly_kleinian(quiver, alpha)?)
    } else {
        None
    };
    Ok(GeometryReport {
        alpha: alpha.clone(),
        lambda: lambda.clone(),
        in_r_lambda: verdict.in_r_lambda,
        in_sigma: verdict.in_sigma,
        nonempty,
        irreducible: nonempty,
        dimension,
        normal: nonempty,
        rational_singularities,
        singularity,
        nearly_kleinian,
    })
}
