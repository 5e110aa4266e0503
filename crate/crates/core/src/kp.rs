//! Closures of conjugacy classes as quiver data: chain ranks, orbit
//! dimensions, the deframed chain of a class, star quivers for tuples of
//! classes, and legs attached to the vertices of a quiver.

use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::quiver::{DimVector, Quiver, Weight};
use crate::rational::{format_rational, rat, Rational};
use crate::sigma::{is_nonempty, SigmaAnalysis};

/// A conjugacy class in `Mat(n)`, by eigenvalue and Jordan block sizes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugacyClass {
    entries: Vec<(Rational, Vec<usize>)>,
}

impl ConjugacyClass {
    /// Block sizes are sorted into a partition; eigenvalues must be distinct.
    pub fn new(entries: Vec<(Rational, Vec<usize>)>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidClass("no eigenvalues".into()));
        }
        let mut out = Vec::with_capacity(entries.len());
        for (k, (xi, mut blocks)) in entries.into_iter().enumerate() {
            if blocks.is_empty() || blocks.contains(&0) {
                return Err(Error::InvalidClass(format!(
                    "eigenvalue {} needs positive block sizes",
                    format_rational(&xi)
                )));
            }
            if out.iter().any(|(x, _): &(Rational, Vec<usize>)| *x == xi) {
                return Err(Error::InvalidClass(format!(
                    "eigenvalue {} repeated",
                    format_rational(&xi)
                )));
            }
            blocks.sort_unstable_by(|a, b| b.cmp(a));
            debug_assert!(k == out.len());
            out.push((xi, blocks));
        }
        Ok(ConjugacyClass { entries: out })
    }

    /// `ξ · 1` in `Mat(n)`.
    pub fn scalar(xi: Rational, n: usize) -> Result<Self> {
        ConjugacyClass::new(vec![(xi, vec![1; n])])
    }

    pub fn entries(&self) -> &[(Rational, Vec<usize>)] {
        &self.entries
    }

    pub fn size(&self) -> usize {
        self.entries
            .iter()
            .map(|(_, b)| b.iter().sum::<usize>())
            .sum()
    }

    pub fn trace(&self) -> Rational {
        self.entries
            .iter()
            .map(|(x, b)| x * rat(b.iter().sum::<usize>() as i64))
            .sum()
    }

    /// The class of `−M`.
    pub fn negated(&self) -> Self {
        ConjugacyClass {
            entries: self
                .entries
                .iter()
                .map(|(x, b)| (-x.clone(), b.clone()))
                .collect(),
        }
    }
}

impl fmt::Display for ConjugacyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|(x, b)| {
                let bs: Vec<String> = b.iter().map(ToString::to_string).collect();
                format!("{}:[{}]", format_rational(x), bs.join(","))
            })
            .collect();
        f.write_str(&parts.join(" "))
    }
}

/// `ξ_1..ξ_t` with `∏ (M − ξ_j) = 0`, ranks `n_i` of `∏_{j>i} (M − ξ_j)` and
/// jumps `d_i = n_i − n_{i−1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainData {
    pub t: usize,
    pub xi: Vec<Rational>,
    pub ranks: Vec<usize>,
    pub jumps: Vec<usize>,
}

/// Each eigenvalue is repeated (largest block) times, eigenvalues in input
/// order.
pub fn chain_data(c: &ConjugacyClass) -> ChainData {
    let mut xi = Vec::new();
    let mut owner = Vec::new();
    for (k, (x, blocks)) in c.entries.iter().enumerate() {
        for _ in 0..blocks[0] {
            xi.push(x.clone());
            owner.push(k);
        }
    }
    let t = xi.len();
    let mut seen = vec![0usize; c.entries.len()];
    let mut ranks = Vec::with_capacity(t);
    for &k in &owner {
        seen[k] += 1;
        let n_i: usize = c
            .entries
            .iter()
            .enumerate()
            .map(|(e, (_, blocks))| {
                let missing = blocks[0] - seen[e];
                blocks
                    .iter()
                    .map(|&b| b.saturating_sub(missing))
                    .sum::<usize>()
            })
            .sum();
        ranks.push(n_i);
    }
    let jumps = ranks.iter().scan(0, |prev, &r| {
        let d = r - *prev;
        *prev = r;
        Some(d)
    });
    let jumps = jumps.collect();
    ChainData {
        t,
        xi,
        ranks,
        jumps,
    }
}

/// `n² − Σ d_i²`.
pub fn class_dim(c: &ConjugacyClass) -> i64 {
    let n = c.size() as i64;
    n * n
        - chain_data(c)
            .jumps
            .iter()
            .map(|&d| (d * d) as i64)
            .sum::<i64>()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuiverData {
    pub quiver: Quiver,
    pub lambda: Weight,
    pub alpha: DimVector,
}

fn chain_weights(xi: &[Rational]) -> Vec<Rational> {
    xi.windows(2).map(|w| &w[1] - &w[0]).collect()
}

/// The chain `1 → 2 → … → t−1` deframed by `n` arrows into a vertex of
/// dimension one; `α = (n_1,…,n_{t−1},1)` and
/// `λ = (ξ_2−ξ_1,…,ξ_t−ξ_{t−1},ν)` with `ν` chosen so that `λ·α = 0`.
///
/// A scalar class (`t = 1`) gives the single framing vertex with `α = (1)`.
pub fn class_to_quiver(c: &ConjugacyClass) -> Result<QuiverData> {
    let cd = chain_data(c);
    let n = c.size() as i64;
    if cd.t == 1 {
        return Ok(QuiverData {
            quiver: Quiver::new(vec!["inf".into()], &[])?,
            lambda: Weight::zeros(1),
            alpha: DimVector::unit(1, 0),
        });
    }
    let m = cd.t - 1;
    let names: Vec<String> = (1..=m).map(|i| i.to_string()).collect();
    let arrows: Vec<(String, String)> = (0..m - 1)
        .map(|i| (names[i].clone(), names[i + 1].clone()))
        .collect();
    let chain = Quiver::new(names, &arrows)?;
    let mut w = vec![0; m];
    w[m - 1] = n;
    let chain_alpha = DimVector::new(cd.ranks[..m].iter().map(|&r| r as i64).collect())?;
    let (quiver, alpha) = chain.deframe(&DimVector::new(w)?, &chain_alpha)?;
    let mut lambda = chain_weights(&cd.xi);
    let partial: Rational = lambda
        .iter()
        .zip(chain_alpha.iter())
        .map(|(l, &a)| l * rat(a))
        .sum();
    lambda.push(-partial);
    Ok(QuiverData {
        quiver,
        lambda: Weight::new(lambda),
        alpha,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassCheck {
    pub in_sigma: bool,
    /// `2p(α)` against `dim C`.
    pub two_p: i64,
    pub class_dim: i64,
}

impl ClassCheck {
    pub fn holds(&self) -> bool {
        self.in_sigma && self.two_p == self.class_dim
    }
}

/// Checks `α ∈ Σ_λ` and `2p(α) = dim C` for the output of [`class_to_quiver`].
pub fn verify_class_quiver(c: &ConjugacyClass, data: &QuiverData) -> Result<ClassCheck> {
    let sigma = SigmaAnalysis::new(&data.quiver, &data.lambda, &data.alpha)?;
    Ok(ClassCheck {
        in_sigma: sigma.verdict().in_sigma,
        two_p: 2 * data.quiver.p(&data.alpha)?,
        class_dim: class_dim(c),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarData {
    pub data: QuiverData,
    /// `Σ_i tr(C_i)`; zero is necessary for `Σ M_i = 0` with `M_i ∈ C̄_i`.
    pub trace_sum: Rational,
    pub nonempty: bool,
}

impl StarData {
    pub fn trace_condition(&self) -> bool {
        self.trace_sum.is_zero()
    }
}

/// Chain of `class` attached to vertex `target` of a quiver under
/// construction: vertices `prefix.1 … prefix.(t−1)` with single arrows
/// along the chain and from the last one into `target`.
struct Leg {
    names: Vec<String>,
    arrows: Vec<(String, String)>,
    alpha: Vec<i64>,
    lambda: Vec<Rational>,
    last_xi: Rational,
}

fn leg(c: &ConjugacyClass, prefix: &str, target: &str) -> Leg {
    let cd = chain_data(c);
    let m = cd.t - 1;
    let names: Vec<String> = (1..=m).map(|j| format!("{prefix}.{j}")).collect();
    let mut arrows: Vec<(String, String)> = (0..m.saturating_sub(1))
        .map(|j| (names[j].clone(), names[j + 1].clone()))
        .collect();
    if m > 0 {
        arrows.push((names[m - 1].clone(), target.to_string()));
    }
    Leg {
        names,
        arrows,
        alpha: cd.ranks[..m].iter().map(|&r| r as i64).collect(),
        lambda: chain_weights(&cd.xi),
        last_xi: cd.xi[cd.t - 1].clone(),
    }
}

/// Star quiver for `C_1, …, C_k` in `Mat(n)`: a central vertex of dimension
/// `n` with the chain of each class as an arm.
///
/// Arm weights are consecutive eigenvalue differences and the central weight
/// is `−Σ_i ξ_{i,t_i}`, so `λ·α = −Σ_i tr(C_i)` vanishes exactly under the
/// trace condition.
pub fn classes_to_star(classes: &[ConjugacyClass]) -> Result<StarData> {
    let Some(first) = classes.first() else {
        return Err(Error::InvalidClass("no classes given".into()));
    };
    let n = first.size();
    for (i, c) in classes.iter().enumerate() {
        if c.size() != n {
            return Err(Error::ClassSizeMismatch(format!(
                "class {} has size {}, class 1 has size {n}",
                i + 1,
                c.size()
            )));
        }
    }
    let mut names = vec!["c".to_string()];
    let mut arrows = Vec::new();
    let mut alpha = vec![n as i64];
    let mut lambda = vec![Rational::zero()];
    for (i, c) in classes.iter().enumerate() {
        let l = leg(c, &format!("a{}", i + 1), "c");
        names.extend(l.names);
        arrows.extend(l.arrows);
        alpha.extend(l.alpha);
        lambda.extend(l.lambda);
        lambda[0] -= l.last_xi;
    }
    let quiver = Quiver::new(names, &arrows)?;
    let alpha = DimVector::new(alpha)?;
    let lambda = Weight::new(lambda);
    let nonempty = is_nonempty(&quiver, &lambda, &alpha)?;
    let trace_sum = classes.iter().map(ConjugacyClass::trace).sum();
    Ok(StarData {
        data: QuiverData {
            quiver,
            lambda,
            alpha,
        },
        trace_sum,
        nonempty,
    })
}

/// Attaches to each vertex `i` of `Q` the chain of the class `−C_i`, so that
/// `N_{Q′}(λ′, α′)` parametrizes representations with `μ_α(x)_i ∈ C̄_i`.
///
/// Leg weights are consecutive differences along the chain of `−C_i` and
/// vertex `i` gets `λ′_i = −ξ_t(−C_i)`; a scalar class `ξ·1` attaches nothing
/// and sets `λ′_i = ξ`.
pub fn attach_legs(
    quiver: &Quiver,
    alpha: &DimVector,
    classes: &[ConjugacyClass],
) -> Result<QuiverData> {
    let n = quiver.vertex_count();
    if alpha.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: alpha.len(),
        });
    }
    if classes.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: classes.len(),
        });
    }
    let mut names: Vec<String> = quiver.vertex_names().to_vec();
    let mut arrows: Vec<(String, String)> = quiver
        .arrows()
        .iter()
        .map(|a| (names[a.tail].clone(), names[a.head].clone()))
        .collect();
    let mut new_alpha = alpha.to_vec();
    let mut lambda = vec![Rational::zero(); n];
    for (i, c) in classes.iter().enumerate() {
        if c.size() != alpha[i] as usize {
            return Err(Error::ClassSizeMismatch(format!(
                "class at vertex {} has size {}, alpha is {}",
                names[i],
                c.size(),
                alpha[i]
            )));
        }
        let l = leg(&c.negated(), &names[i].clone(), &names[i].clone());
        names.extend(l.names);
        arrows.extend(l.arrows);
        new_alpha.extend(l.alpha);
        lambda.extend(l.lambda);
        lambda[i] = -l.last_xi;
    }
    Ok(QuiverData {
        quiver: Quiver::new(names, &arrows)?,
        lambda: Weight::new(lambda),
        alpha: DimVector::new(new_alpha)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn class(entries: &[(i64, &[usize])]) -> ConjugacyClass {
        ConjugacyClass::new(entries.iter().map(|(x, b)| (rat(*x), b.to_vec())).collect()).unwrap()
    }

    #[test]
    fn chain_examples() {
        let c = class(&[(0, &[2, 1])]);
        let cd = chain_data(&c);
        assert_eq!(
            (cd.t, cd.ranks.clone(), cd.jumps.clone()),
            (2, vec![1, 3], vec![1, 2])
        );
        assert_eq!(class_dim(&c), 4);

        let c = class(&[(5, &[1, 1]), (-2, &[1])]);
        let cd = chain_data(&c);
        assert_eq!(cd.xi, vec![rat(5), rat(-2)]);
        assert_eq!(cd.ranks, vec![2, 3]);

        let c = ConjugacyClass::scalar(ratio(1, 2), 4).unwrap();
        let cd = chain_data(&c);
        assert_eq!(
            (cd.t, cd.ranks.clone(), cd.jumps.clone()),
            (1, vec![4], vec![4])
        );
        assert_eq!(class_dim(&c), 0);

        let reg = class(&[(0, &[4])]);
        assert_eq!(chain_data(&reg).jumps, vec![1, 1, 1, 1]);
        assert_eq!(class_dim(&reg), 12);
    }

    #[test]
    fn class_validation() {
        assert!(ConjugacyClass::new(vec![]).is_err());
        assert!(ConjugacyClass::new(vec![(rat(1), vec![])]).is_err());
        assert!(ConjugacyClass::new(vec![(rat(1), vec![1]), (rat(1), vec![2])]).is_err());
        let c = ConjugacyClass::new(vec![(rat(0), vec![1, 3, 2])]).unwrap();
        assert_eq!(c.entries()[0].1, vec![3, 2, 1]);
    }

    #[test]
    fn class_quivers() {
        let c = class(&[(0, &[2, 1])]);
        let d = class_to_quiver(&c).unwrap();
        assert_eq!(d.alpha.to_vec(), vec![1, 1]);
        assert_eq!(d.lambda, Weight::zeros(2));
        assert_eq!(d.quiver.edges_between(0, 1), 3);
        assert!(verify_class_quiver(&c, &d).unwrap().holds());

        let s = class_to_quiver(&ConjugacyClass::scalar(rat(3), 3).unwrap()).unwrap();
        assert_eq!(s.alpha.to_vec(), vec![1]);
        assert_eq!(s.quiver.vertex_count(), 1);

        let rs = class(&[(1, &[1]), (4, &[1])]);
        let d = class_to_quiver(&rs).unwrap();
        assert_eq!(d.alpha.to_vec(), vec![1, 1]);
        assert_eq!(d.lambda, Weight::from_integers(&[3, -3]));
        assert_eq!(class_dim(&rs), 2);
        assert!(verify_class_quiver(&rs, &d).unwrap().holds());
    }

    #[test]
    fn stars() {
        let scalars = vec![
            ConjugacyClass::scalar(rat(1), 2).unwrap(),
            ConjugacyClass::scalar(rat(-1), 2).unwrap(),
        ];
        let s = classes_to_star(&scalars).unwrap();
        assert_eq!(s.data.quiver.vertex_count(), 1);
        assert!(s.trace_condition());

        let cs = vec![
            class(&[(1, &[1]), (-1, &[1])]),
            class(&[(2, &[1]), (-2, &[1])]),
            class(&[(3, &[1]), (-3, &[1])]),
        ];
        let s = classes_to_star(&cs).unwrap();
        assert_eq!(s.data.alpha.to_vec(), vec![2, 1, 1, 1]);
        assert!(s.trace_condition());
        assert_eq!(s.data.lambda.dot(&s.data.alpha).unwrap(), rat(0));

        let bad = vec![
            class(&[(1, &[1]), (2, &[1])]),
            class(&[(3, &[1]), (-3, &[1])]),
        ];
        let s = classes_to_star(&bad).unwrap();
        assert!(!s.trace_condition());
        assert!(!s.nonempty);

        let mismatch = vec![class(&[(1, &[1])]), class(&[(1, &[2])])];
        assert!(matches!(
            classes_to_star(&mismatch),
            Err(Error::ClassSizeMismatch(_))
        ));
    }

    #[test]
    fn legs() {
        let k = Quiver::kronecker(2);
        let a = DimVector::new(vec![1, 2]).unwrap();
        let scal = vec![
            ConjugacyClass::scalar(rat(2), 1).unwrap(),
            ConjugacyClass::scalar(rat(-1), 2).unwrap(),
        ];
        let d = attach_legs(&k, &a, &scal).unwrap();
        assert_eq!(d.quiver.vertex_count(), 2);
        assert_eq!(d.alpha, a);
        assert_eq!(d.lambda, Weight::from_integers(&[2, -1]));

        let mixed = vec![
            ConjugacyClass::scalar(rat(0), 1).unwrap(),
            class(&[(0, &[2])]),
        ];
        let d = attach_legs(&k, &a, &mixed).unwrap();
        assert_eq!(d.quiver.vertex_count(), 3);
        assert_eq!(d.alpha.to_vec(), vec![1, 2, 1]);
        assert_eq!(
            d.quiver.edges_between(0, 2) + d.quiver.edges_between(1, 2),
            1
        );
        assert_eq!(d.quiver.edges_between(1, 2), 1);

        assert!(matches!(
            attach_legs(&k, &a, &scal[..1]),
            Err(Error::LengthMismatch { .. })
        ));
        let wrong = vec![ConjugacyClass::scalar(rat(0), 2).unwrap(), scal[1].clone()];
        assert!(matches!(
            attach_legs(&k, &a, &wrong),
            Err(Error::ClassSizeMismatch(_))
        ));
    }

    #[test]
    fn calogero_moser_leg() {
        for n in 2..=4i64 {
            let j = Quiver::bouquet(1);
            let a = DimVector::new(vec![n]).unwrap();
            let c = class(&[(n - 1, &[1]), (-1, &vec![1; (n - 1) as usize])]);
            let d = attach_legs(&j, &a, &[c]).unwrap();
            assert_eq!(d.alpha.to_vec(), vec![n, 1]);
            assert_eq!(d.quiver.loops_at(0), 1);
            assert_eq!(d.quiver.edges_between(0, 1), 1);
            assert_eq!(2 * d.quiver.p(&d.alpha).unwrap(), 2 * n);
            assert_eq!(d.lambda.dot(&d.alpha).unwrap(), rat(0));
        }
    }
}
