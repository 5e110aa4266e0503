//! Membership in `Σ_λ`, nonemptiness and dimension of `N_Q(λ,α)`.

use std::fmt;

use crate::error::{Error, Result};
use crate::quiver::{DimVector, Quiver, Weight};
use crate::roots::r_lambda_plus;

/// Default cap on the number of roots in a decomposition pool.
pub const DEFAULT_POOL_CAP: usize = 10_000;

/// A multiset of parts summing to a target, parts in nonincreasing
/// lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Decomposition {
    parts: Vec<DimVector>,
}

impl Decomposition {
    pub fn new(mut parts: Vec<DimVector>) -> Self {
        parts.sort_by(|a, b| b.cmp(a));
        Decomposition { parts }
    }

    pub fn parts(&self) -> &[DimVector] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn sum(&self, n: usize) -> DimVector {
        self.parts
            .iter()
            .fold(DimVector::zeros(n), |acc, p| acc.add(p))
    }
}

impl fmt::Display for Decomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(" + "))
    }
}

struct Frame {
    cursor: usize,
    remaining: DimVector,
}

/// Depth-first stream over every multiset of pool elements summing to a
/// target. Each multiset is produced exactly once.
pub struct Decompositions<'a> {
    pool: &'a [DimVector],
    frames: Vec<Frame>,
    parts: Vec<usize>,
}

impl Iterator for Decompositions<'_> {
    type Item = Decomposition;

    fn next(&mut self) -> Option<Decomposition> {
        loop {
            let depth = self.frames.len();
            let top = self.frames.last_mut()?;
            if top.cursor == 0 {
                self.frames.pop();
                if depth > 1 {
                    self.parts.pop();
                }
                continue;
            }
            top.cursor -= 1;
            let idx = top.cursor;
            let Some(rest) = top.remaining.checked_sub(&self.pool[idx]) else {
                continue;
            };
            if rest.is_zero() {
                let mut parts: Vec<DimVector> =
                    self.parts.iter().map(|&i| self.pool[i].clone()).collect();
                parts.push(self.pool[idx].clone());
                return Some(Decomposition { parts });
            }
            self.parts.push(idx);
            self.frames.push(Frame {
                cursor: idx + 1,
                remaining: rest,
            });
        }
    }
}

/// Streams the decompositions of `alpha` into elements of `pool`.
///
/// `pool` must be sorted increasingly; parts come out nonincreasing.
pub fn decompositions<'a>(alpha: &DimVector, pool: &'a [DimVector]) -> Decompositions<'a> {
    debug_assert!(pool.windows(2).all(|w| w[0] < w[1]), "pool must be sorted");
    let frames = if alpha.is_zero() {
        Vec::new()
    } else {
        vec![Frame {
            cursor: pool.len(),
            remaining: alpha.clone(),
        }]
    };
    Decompositions {
        pool,
        frames,
        parts: Vec::new(),
    }
}

/// Dynamic-programming table over the box `0 ≤ γ ≤ α`: for each `γ`, the
/// largest total score of a decomposition of `γ` into pool elements.
struct ScoreTable {
    radix: Vec<usize>,
    pool: Vec<DimVector>,
    scores: Vec<i64>,
    best: Vec<Option<(i64, usize)>>,
}

impl ScoreTable {
    fn build(alpha: &DimVector, pool: Vec<DimVector>, scores: Vec<i64>) -> Self {
        let radix: Vec<usize> = alpha.iter().map(|&a| a as usize + 1).collect();
        let size: usize = radix.iter().product();
        let mut best: Vec<Option<(i64, usize)>> = vec![None; size];
        best[0] = Some((0, usize::MAX));
        let mut gamma = vec![0i64; alpha.len()];
        for idx in 1..size {
            increment(&mut gamma, &radix);
            let mut cur: Option<(i64, usize)> = None;
            for (k, b) in pool.iter().enumerate() {
                if !b.iter().zip(&gamma).all(|(x, y)| x <= y) {
                    continue;
                }
                let rest = idx - Self::index_of(&radix, b);
                if let Some((s, _)) = best[rest] {
                    let total = s + scores[k];
                    if cur.is_none_or(|(c, _)| total > c) {
                        cur = Some((total, k));
                    }
                }
            }
            best[idx] = cur;
        }
        ScoreTable {
            radix,
            pool,
            scores,
            best,
        }
    }

    fn index_of(radix: &[usize], v: &[i64]) -> usize {
        v.iter()
            .zip(radix)
            .fold(0, |acc, (&x, &r)| acc * r + x as usize)
    }

    fn index(&self, v: &[i64]) -> usize {
        Self::index_of(&self.radix, v)
    }

    fn best(&self, gamma: &DimVector) -> Option<i64> {
        self.best[self.index(gamma)].map(|(s, _)| s)
    }

    fn reconstruct(&self, gamma: &DimVector) -> Vec<DimVector> {
        let mut parts = Vec::new();
        let mut cur = gamma.clone();
        while !cur.is_zero() {
            let (_, k) = self.best[self.index(&cur)].expect("reachable");
            parts.push(self.pool[k].clone());
            cur = cur.checked_sub(&self.pool[k]).unwrap();
        }
        parts
    }

    /// Best score over decompositions of `gamma` into at least two parts,
    /// with the decomposition achieving it.
    fn best_split(&self, gamma: &DimVector) -> Option<(i64, Decomposition)> {
        let mut out: Option<(i64, usize, DimVector)> = None;
        for (k, b) in self.pool.iter().enumerate() {
            if b == gamma {
                continue;
            }
            let Some(rest) = gamma.checked_sub(b) else {
                continue;
            };
            if let Some(s) = self.best(&rest) {
                let total = s + self.scores[k];
                if out.as_ref().is_none_or(|(c, _, _)| total > *c) {
                    out = Some((total, k, rest));
                }
            }
        }
        out.map(|(s, k, rest)| {
            let mut parts = self.reconstruct(&rest);
            parts.push(self.pool[k].clone());
            (s, Decomposition::new(parts))
        })
    }
}

fn increment(v: &mut [i64], radix: &[usize]) {
    for k in (0..v.len()).rev() {
        if (v[k] as usize) + 1 < radix[k] {
            v[k] += 1;
            return;
        }
        v[k] = 0;
    }
}

/// Everything the decision procedures need about the box below `α`.
pub struct SigmaAnalysis {
    alpha: DimVector,
    p_alpha: i64,
    r_lambda: Vec<DimVector>,
    roots_table: ScoreTable,
    sigma_pool: Vec<DimVector>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaVerdict {
    pub in_r_lambda: bool,
    pub in_sigma: bool,
    /// A decomposition into two or more elements of `R_λ⁺` whose p-values
    /// sum to at least `p(α)`, when `α ∈ R_λ⁺ \ Σ_λ`.
    pub violation: Option<Decomposition>,
}

/// Dimension of `N_Q(λ,α)`, or the signal that it is empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    Empty,
    Dim(i64),
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dimension::Empty => f.write_str("empty"),
            Dimension::Dim(d) => write!(f, "{d}"),
        }
    }
}

impl SigmaAnalysis {
    pub fn new(quiver: &Quiver, lambda: &Weight, alpha: &DimVector) -> Result<Self> {
        Self::with_cap(quiver, lambda, alpha, DEFAULT_POOL_CAP)
    }

    pub fn with_cap(
        quiver: &Quiver,
        lambda: &Weight,
        alpha: &DimVector,
        cap: usize,
    ) -> Result<Self> {
        let roots = r_lambda_plus(quiver, lambda, alpha)?;
        if roots.len() > cap {
            return Err(Error::PoolTooLarge {
                size: roots.len(),
                cap,
            });
        }
        let r_lambda = roots.vectors();
        let p_of = |v: &DimVector| quiver.p(v).expect("length checked");
        let scores: Vec<i64> = r_lambda.iter().map(p_of).collect();
        let roots_table = ScoreTable::build(alpha, r_lambda.clone(), scores);
        let sigma_pool = r_lambda
            .iter()
            .filter(|b| roots_table.best_split(b).is_none_or(|(s, _)| p_of(b) > s))
            .cloned()
            .collect();
        Ok(SigmaAnalysis {
            alpha: alpha.clone(),
            p_alpha: p_of(alpha),
            r_lambda,
            roots_table,
            sigma_pool,
        })
    }

    pub fn r_lambda(&self) -> &[DimVector] {
        &self.r_lambda
    }

    /// Elements of `Σ_λ` below `α`, sorted increasingly.
    pub fn sigma_pool(&self) -> &[DimVector] {
        &self.sigma_pool
    }

    pub fn verdict(&self) -> SigmaVerdict {
        let in_r_lambda = self.r_lambda.binary_search(&self.alpha).is_ok();
        if !in_r_lambda {
            return SigmaVerdict {
                in_r_lambda,
                in_sigma: false,
                violation: None,
            };
        }
        match self.roots_table.best_split(&self.alpha) {
            Some((s, d)) if s >= self.p_alpha => SigmaVerdict {
                in_r_lambda,
                in_sigma: false,
                violation: Some(d),
            },
            _ => SigmaVerdict {
                in_r_lambda,
                in_sigma: true,
                violation: None,
            },
        }
    }

    pub fn is_nonempty(&self) -> bool {
        self.alpha.is_zero() || self.roots_table.best(&self.alpha).is_some()
    }

    pub fn dimension(&self, quiver: &Quiver) -> Dimension {
        if self.alpha.is_zero() {
            return Dimension::Dim(0);
        }
        if !self.is_nonempty() {
            return Dimension::Empty;
        }
        if self.verdict().in_sigma {
            return Dimension::Dim(2 * self.p_alpha);
        }
        // Maximum of Σ 2p over representation types; distinct simples of a
        // repeated dimension vector each contribute.
        let scores = self
            .sigma_pool
            .iter()
            .map(|b| 2 * quiver.p(b).unwrap())
            .collect();
        let table = ScoreTable::build(&self.alpha, self.sigma_pool.clone(), scores);
        match table.best(&self.alpha) {
            Some(d) => Dimension::Dim(d),
            None => Dimension::Empty,
        }
    }
}

pub fn in_sigma(quiver: &Quiver, lambda: &Weight, alpha: &DimVector) -> Result<bool> {
    if alpha.is_zero() {
        return Ok(false);
    }
    Ok(SigmaAnalysis::new(quiver, lambda, alpha)?
        .verdict()
        .in_sigma)
}

pub fn is_nonempty(quiver: &Quiver, lambda: &Weight, alpha: &DimVector) -> Result<bool> {
    if alpha.is_zero() {
        return Ok(true);
    }
    Ok(SigmaAnalysis::new(quiver, lambda, alpha)?.is_nonempty())
}

#[allow(non_snake_case)]
pub fn dim_N(quiver: &Quiver, lambda: &Weight, alpha: &DimVector) -> Result<Dimension> {
    Ok(SigmaAnalysis::new(quiver, lambda, alpha)?.dimension(quiver))
}
