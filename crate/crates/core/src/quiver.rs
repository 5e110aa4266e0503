//! Quivers, dimension vectors, weights and the forms attached to them.

use std::collections::HashMap;
use std::fmt;
use std::ops::Deref;

use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::{format_rational, rat, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub id: usize,
    pub tail: usize,
    pub head: usize,
}

impl Arrow {
    pub fn is_loop(&self) -> bool {
        self.tail == self.head
    }
}

/// A finite quiver. Vertices are addressed by their dense index; names are
/// only kept for input and output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quiver {
    names: Vec<String>,
    arrows: Vec<Arrow>,
}

impl Quiver {
    pub fn new(names: Vec<String>, arrows: &[(String, String)]) -> Result<Self> {
        let mut index = HashMap::new();
        for (i, n) in names.iter().enumerate() {
            if index.insert(n.clone(), i).is_some() {
                return Err(Error::DuplicateVertex(n.clone()));
            }
        }
        let lookup = |n: &String| {
            index
                .get(n)
                .copied()
                .ok_or_else(|| Error::UnknownVertex(n.clone()))
        };
        let arrows = arrows
            .iter()
            .enumerate()
            .map(|(id, (t, h))| {
                Ok(Arrow {
                    id,
                    tail: lookup(t)?,
                    head: lookup(h)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Quiver { names, arrows })
    }

    /// Quiver on vertices `1..=n` with arrows given as `(tail, head)` indices.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let names = (1..=n).map(|i| i.to_string()).collect();
        let arrows = edges
            .iter()
            .enumerate()
            .map(|(id, &(tail, head))| {
                assert!(tail < n && head < n, "arrow endpoint out of range");
                Arrow { id, tail, head }
            })
            .collect();
        Quiver { names, arrows }
    }

    /// One vertex with `loops` loops.
    pub fn bouquet(loops: usize) -> Self {
        Self::from_edges(1, &vec![(0, 0); loops])
    }

    /// Two vertices with `arrows` parallel arrows from the first to the second.
    pub fn kronecker(arrows: usize) -> Self {
        Self::from_edges(2, &vec![(0, 1); arrows])
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.names
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn loops_at(&self, i: usize) -> usize {
        self.arrows
            .iter()
            .filter(|a| a.tail == i && a.head == i)
            .count()
    }

    pub fn has_loop(&self, i: usize) -> bool {
        self.loops_at(i) > 0
    }

    pub fn is_loop_free(&self) -> bool {
        self.arrows.iter().all(|a| !a.is_loop())
    }

    /// Number of arrows joining `i` and `j` in either direction (`i != j`).
    pub fn edges_between(&self, i: usize, j: usize) -> usize {
        self.arrows
            .iter()
            .filter(|a| (a.tail == i && a.head == j) || (a.tail == j && a.head == i))
            .count()
    }

    pub fn with_arrow_reversed(&self, id: usize) -> Self {
        let mut out = self.clone();
        let a = &mut out.arrows[id];
        std::mem::swap(&mut a.tail, &mut a.head);
        out
    }

    pub fn without_loops(&self) -> Self {
        let arrows = self
            .arrows
            .iter()
            .filter(|a| !a.is_loop())
            .enumerate()
            .map(|(id, a)| Arrow { id, ..*a })
            .collect();
        Quiver {
            names: self.names.clone(),
            arrows,
        }
    }

    pub fn is_connected(&self) -> bool {
        let all: Vec<bool> = vec![true; self.vertex_count()];
        self.vertex_count() > 0 && self.induced_connected(&all)
    }

    fn induced_connected(&self, keep: &[bool]) -> bool {
        let Some(start) = keep.iter().position(|&k| k) else {
            return false;
        };
        let mut seen = vec![false; keep.len()];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(v) = stack.pop() {
            for a in &self.arrows {
                let other = if a.tail == v {
                    a.head
                } else if a.head == v {
                    a.tail
                } else {
                    continue;
                };
                if keep[other] && !seen[other] {
                    seen[other] = true;
                    stack.push(other);
                }
            }
        }
        keep.iter().zip(&seen).all(|(&k, &s)| !k || s)
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.vertex_count() {
            return Err(Error::LengthMismatch {
                expected: self.vertex_count(),
                found: len,
            });
        }
        Ok(())
    }

    /// The symmetric bilinear form `(α,β)` of the quiver.
    pub fn bilinear_form(&self, alpha: &[i64], beta: &[i64]) -> Result<i64> {
        self.check_len(alpha.len())?;
        self.check_len(beta.len())?;
        let diag: i64 = alpha.iter().zip(beta).map(|(a, b)| a * b).sum();
        let off: i64 = self
            .arrows
            .iter()
            .map(|a| alpha[a.head] * beta[a.tail] + alpha[a.tail] * beta[a.head])
            .sum();
        Ok(2 * diag - off)
    }

    /// The quadratic form `q(α) = Σ α_i² − Σ_a α_h(a) α_t(a)`.
    pub fn q(&self, alpha: &[i64]) -> Result<i64> {
        self.check_len(alpha.len())?;
        let sq: i64 = alpha.iter().map(|a| a * a).sum();
        let arrows: i64 = self
            .arrows
            .iter()
            .map(|a| alpha[a.head] * alpha[a.tail])
            .sum();
        Ok(sq - arrows)
    }

    pub fn p(&self, alpha: &[i64]) -> Result<i64> {
        Ok(1 - self.q(alpha)?)
    }

    /// `(α, e_i)`.
    pub fn pairing_with_simple(&self, alpha: &[i64], i: usize) -> i64 {
        let mut s = 2 * alpha[i];
        for a in &self.arrows {
            if a.head == i {
                s -= alpha[a.tail];
            }
            if a.tail == i {
                s -= alpha[a.head];
            }
        }
        s
    }

    /// Whether the support of `α` spans a nonempty connected full subquiver.
    pub fn support_connected(&self, alpha: &[i64]) -> Result<bool> {
        self.check_len(alpha.len())?;
        if alpha.iter().all(|&a| a == 0) {
            return Err(Error::ZeroVector);
        }
        let keep: Vec<bool> = alpha.iter().map(|&a| a != 0).collect();
        Ok(self.induced_connected(&keep))
    }

    /// Adds a vertex `∞` with `w_i` arrows from each vertex `i` to it and
    /// extends `α` by one there.
    pub fn deframe(&self, w: &DimVector, alpha: &DimVector) -> Result<(Quiver, DimVector)> {
        self.check_len(w.len())?;
        self.check_len(alpha.len())?;
        let inf = self.vertex_count();
        let mut names = self.names.clone();
        let mut name = "inf".to_string();
        while names.contains(&name) {
            name.push('\'');
        }
        names.push(name);
        let mut arrows = self.arrows.clone();
        for (i, &wi) in w.iter().enumerate() {
            for _ in 0..wi {
                arrows.push(Arrow {
                    id: arrows.len(),
                    tail: i,
                    head: inf,
                });
            }
        }
        let mut ext = alpha.0.clone();
        ext.push(1);
        Ok((Quiver { names, arrows }, DimVector(ext)))
    }

    pub fn double(&self) -> DoubledQuiver {
        DoubledQuiver { base: self.clone() }
    }
}

impl fmt::Display for Quiver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "vertices: {}", self.names.join(" "))?;
        for a in &self.arrows {
            writeln!(f, "arrow {} {}", self.names[a.tail], self.names[a.head])?;
        }
        Ok(())
    }
}

/// An arrow of the double: a base arrow or its reverse `a*`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DoubledArrow {
    pub base: usize,
    pub starred: bool,
    pub tail: usize,
    pub head: usize,
}

impl DoubledArrow {
    pub fn star(&self) -> DoubledArrow {
        DoubledArrow {
            base: self.base,
            starred: !self.starred,
            tail: self.head,
            head: self.tail,
        }
    }
}

/// The double `Q̄`. Arrow `k < m` is base arrow `k`; arrow `m + k` is its
/// reverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DoubledQuiver {
    base: Quiver,
}

impl DoubledQuiver {
    pub fn base(&self) -> &Quiver {
        &self.base
    }

    pub fn arrow_count(&self) -> usize {
        2 * self.base.arrows.len()
    }

    pub fn arrows(&self) -> Vec<DoubledArrow> {
        let fwd = self.base.arrows.iter().map(|a| DoubledArrow {
            base: a.id,
            starred: false,
            tail: a.tail,
            head: a.head,
        });
        let rev: Vec<DoubledArrow> = fwd.clone().map(|a| a.star()).collect();
        fwd.chain(rev).collect()
    }

    /// Index in `arrows()` of the involution partner of arrow `k`.
    pub fn star_index(&self, k: usize) -> usize {
        let m = self.base.arrows.len();
        if k < m {
            k + m
        } else {
            k - m
        }
    }
}

/// A dimension vector: one nonnegative integer per vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DimVector(Vec<i64>);

impl DimVector {
    pub fn new(entries: Vec<i64>) -> Result<Self> {
        if entries.iter().any(|&x| x < 0) {
            return Err(Error::NegativeEntry);
        }
        Ok(DimVector(entries))
    }

    pub fn zeros(n: usize) -> Self {
        DimVector(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        DimVector(v)
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<i64> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn is_sincere(&self) -> bool {
        self.0.iter().all(|&x| x > 0)
    }

    pub fn total(&self) -> i64 {
        self.0.iter().sum()
    }

    /// The standard dot product `α·α = Σ α_i²`.
    pub fn self_dot(&self) -> i64 {
        self.0.iter().map(|x| x * x).sum()
    }

    /// Greatest common divisor of the entries (zero for the zero vector).
    pub fn gcd(&self) -> i64 {
        self.0.iter().fold(0, |g, &x| g.gcd(&x))
    }

    pub fn is_coordinate_vector(&self) -> bool {
        self.total() == 1
    }

    pub fn le(&self, other: &DimVector) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn add(&self, other: &DimVector) -> DimVector {
        DimVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn scaled(&self, k: i64) -> DimVector {
        assert!(k >= 0);
        DimVector(self.0.iter().map(|a| a * k).collect())
    }

    /// `self − other`, if it stays nonnegative.
    pub fn checked_sub(&self, other: &DimVector) -> Option<DimVector> {
        other
            .le(self)
            .then(|| DimVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()))
    }
}

impl Deref for DimVector {
    type Target = [i64];
    fn deref(&self) -> &[i64] {
        &self.0
    }
}

impl fmt::Display for DimVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A weight `λ`: one exact rational per vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Weight(Vec<Rational>);

impl Weight {
    pub fn new(entries: Vec<Rational>) -> Self {
        Weight(entries)
    }

    pub fn from_integers(entries: &[i64]) -> Self {
        Weight(entries.iter().map(|&x| rat(x)).collect())
    }

    pub fn zeros(n: usize) -> Self {
        Weight(vec![Rational::zero(); n])
    }

    pub fn entries(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// `λ·α = Σ λ_i α_i`.
    pub fn dot(&self, alpha: &[i64]) -> Result<Rational> {
        if alpha.len() != self.0.len() {
            return Err(Error::LengthMismatch {
                expected: self.0.len(),
                found: alpha.len(),
            });
        }
        Ok(self
            .0
            .iter()
            .zip(alpha)
            .fold(Rational::zero(), |acc, (l, &a)| acc + l * rat(a)))
    }

    pub(crate) fn annihilates(&self, alpha: &[i64]) -> bool {
        self.0
            .iter()
            .zip(alpha)
            .fold(Rational::zero(), |acc, (l, &a)| acc + l * rat(a))
            .is_zero()
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(format_rational).collect();
        write!(f, "({})", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dv(v: &[i64]) -> DimVector {
        DimVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn bilinear_form_examples() {
        let k = Quiver::kronecker(2);
        assert_eq!(k.bilinear_form(&[1, 1], &[1, 1]).unwrap(), 0);
        assert_eq!(k.bilinear_form(&[0, 0], &[3, 5]).unwrap(), 0);
        let j = Quiver::bouquet(1);
        assert_eq!(j.bilinear_form(&[1], &[1]).unwrap(), 0);
        assert_eq!(
            k.bilinear_form(&[1], &[1, 1]),
            Err(Error::LengthMismatch {
                expected: 2,
                found: 1
            })
        );
    }

    #[test]
    fn quadratic_form_examples() {
        let j = Quiver::bouquet(1);
        for n in 1..6 {
            assert_eq!(j.q(&[n]).unwrap(), 0);
            assert_eq!(j.p(&[n]).unwrap(), 1);
        }
        let pt = Quiver::bouquet(0);
        assert_eq!(pt.q(&[1]).unwrap(), 1);
        assert_eq!(pt.p(&[1]).unwrap(), 0);
    }

    #[test]
    fn chain_quiver_p_value() {
        // chain 1 -> 2 -> 3 with n = 5 arrows from 3 to the last vertex
        let ns = [1i64, 3, 4];
        let n = 5;
        let chain = Quiver::from_edges(3, &[(0, 1), (1, 2)]);
        let (q, alpha) = chain.deframe(&dv(&[0, 0, n]), &dv(&ns)).unwrap();
        let mut full = ns.to_vec();
        full.push(n);
        let expected: i64 = (0..3).map(|i| ns[i] * full[i + 1] - ns[i] * ns[i]).sum();
        assert_eq!(q.p(&alpha).unwrap(), expected);
    }

    #[test]
    fn doubling() {
        let q = Quiver::from_edges(2, &[(0, 1)]);
        let d = q.double();
        let arrows = d.arrows();
        assert_eq!(arrows.len(), 2);
        assert_eq!((arrows[0].tail, arrows[0].head), (0, 1));
        assert_eq!((arrows[1].tail, arrows[1].head), (1, 0));
        assert!(arrows[1].starred);
        assert_eq!(d.star_index(0), 1);

        let loops = Quiver::bouquet(1).double();
        assert!(loops.arrows().iter().all(|a| a.tail == 0 && a.head == 0));
        assert_eq!(loops.arrow_count(), 2);
        assert_eq!(Quiver::kronecker(5).double().arrow_count(), 10);
    }

    #[test]
    fn deframing_examples() {
        let chain = Quiver::from_edges(2, &[(0, 1)]);
        let (q, a) = chain.deframe(&dv(&[0, 3]), &dv(&[1, 2])).unwrap();
        assert_eq!(q.vertex_count(), 3);
        assert_eq!(
            q.arrows()
                .iter()
                .filter(|x| x.tail == 1 && x.head == 2)
                .count(),
            3
        );
        assert_eq!(a.entries(), &[1, 2, 1]);

        let (q, a) = chain.deframe(&dv(&[0, 0]), &dv(&[1, 1])).unwrap();
        assert_eq!(q.arrows().len(), 1);
        assert_eq!(a.entries(), &[1, 1, 1]);
        assert!(!q.is_connected());

        let (q, a) = Quiver::bouquet(0).deframe(&dv(&[1]), &dv(&[2])).unwrap();
        assert_eq!(q.arrows().len(), 1);
        assert_eq!(a.entries(), &[2, 1]);
    }

    #[test]
    fn weight_dot() {
        let l = Weight::from_integers(&[1, -1]);
        assert_eq!(l.dot(&[1, 1]).unwrap(), rat(0));
        assert_eq!(Weight::zeros(3).dot(&[4, 5, 6]).unwrap(), rat(0));
        assert!(l.dot(&[1]).is_err());
    }

    #[test]
    fn support_connectivity() {
        let q = Quiver::from_edges(3, &[(0, 1)]);
        assert!(q.support_connected(&[0, 0, 1]).unwrap());
        assert!(!q.support_connected(&[1, 0, 1]).unwrap());
        assert!(q.support_connected(&[1, 2, 0]).unwrap());
        let path = Quiver::from_edges(3, &[(0, 1), (1, 2)]);
        assert!(path.support_connected(&[1, 1, 1]).unwrap());
        assert!(!path.support_connected(&[1, 0, 1]).unwrap());
        assert_eq!(q.support_connected(&[0, 0, 0]), Err(Error::ZeroVector));
    }

    fn small_quiver() -> impl Strategy<Value = Quiver> {
        (1usize..=4).prop_flat_map(|n| {
            prop::collection::vec((0..n, 0..n), 0..6).prop_map(move |e| Quiver::from_edges(n, &e))
        })
    }

    proptest! {
        #[test]
        fn forms_are_consistent(q in small_quiver(), seed in prop::collection::vec(-4i64..5, 8)) {
            let n = q.vertex_count();
            let a = &seed[..n];
            let b = &seed[4..4 + n];
            let ab = q.bilinear_form(a, b).unwrap();
            prop_assert_eq!(ab, q.bilinear_form(b, a).unwrap());
            prop_assert_eq!(q.bilinear_form(a, a).unwrap(), 2 * q.q(a).unwrap());
            let s: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
            prop_assert_eq!(ab, q.q(&s).unwrap() - q.q(a).unwrap() - q.q(b).unwrap());
            for id in 0..q.arrows().len() {
                let r = q.with_arrow_reversed(id);
                prop_assert_eq!(r.q(a).unwrap(), q.q(a).unwrap());
                prop_assert_eq!(r.bilinear_form(a, b).unwrap(), ab);
            }
        }

        #[test]
        fn deframed_quadratic_form(q in small_quiver(), a in prop::collection::vec(0i64..4, 4), w in prop::collection::vec(0i64..3, 4)) {
            let n = q.vertex_count();
            let alpha = dv(&a[..n]);
            let w = dv(&w[..n]);
            let (qq, ext) = q.deframe(&w, &alpha).unwrap();
            let wa: i64 = w.iter().zip(alpha.iter()).map(|(x, y)| x * y).sum();
            prop_assert_eq!(qq.q(&ext).unwrap(), q.q(&alpha).unwrap() + 1 - wa);
        }
    }
}
