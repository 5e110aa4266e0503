//! Kac root system of a quiver, possibly with loops.
//!
//! Vertices carrying a loop are imaginary simple vertices: no reflection is
//! defined there and `e_i` lies in the fundamental region. A nonzero vector
//! is classified by reflecting it down towards a simple root or the
//! fundamental region.

use std::fmt;

use crate::error::{Error, Result};
use crate::quiver::{DimVector, Quiver, Weight};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RootTag {
    Real,
    Imaginary,
    NotRoot,
}

impl RootTag {
    pub fn is_root(self) -> bool {
        self != RootTag::NotRoot
    }
}

impl fmt::Display for RootTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RootTag::Real => "REAL",
            RootTag::Imaginary => "IMAG",
            RootTag::NotRoot => "NONE",
        })
    }
}

/// Classification result. `witness` lists the reflections applied, in order,
/// to bring the vector (made positive) to a simple root or into the
/// fundamental region.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootClass {
    pub tag: RootTag,
    pub witness: Vec<usize>,
}

/// Positive roots inside a box, sorted lexicographically.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RootList {
    entries: Vec<(DimVector, RootClass)>,
}

impl RootList {
    pub fn entries(&self) -> &[(DimVector, RootClass)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn vectors(&self) -> Vec<DimVector> {
        self.entries.iter().map(|(v, _)| v.clone()).collect()
    }

    pub fn contains(&self, v: &DimVector) -> bool {
        self.entries.binary_search_by(|(x, _)| x.cmp(v)).is_ok()
    }

    pub fn tag_of(&self, v: &DimVector) -> Option<RootTag> {
        self.entries
            .binary_search_by(|(x, _)| x.cmp(v))
            .ok()
            .map(|i| self.entries[i].1.tag)
    }

    fn filtered(&self, keep: impl Fn(&DimVector) -> bool) -> RootList {
        RootList {
            entries: self
                .entries
                .iter()
                .filter(|(v, _)| keep(v))
                .cloned()
                .collect(),
        }
    }
}

/// `s_i(α) = α − (α, e_i) e_i`.
pub fn reflect(quiver: &Quiver, alpha: &[i64], i: usize) -> Result<Vec<i64>> {
    if alpha.len() != quiver.vertex_count() {
        return Err(Error::LengthMismatch {
            expected: quiver.vertex_count(),
            found: alpha.len(),
        });
    }
    if i >= quiver.vertex_count() {
        return Err(Error::UnknownVertex(i.to_string()));
    }
    if quiver.has_loop(i) {
        return Err(Error::LoopAtVertex(i));
    }
    let mut out = alpha.to_vec();
    out[i] -= quiver.pairing_with_simple(alpha, i);
    Ok(out)
}

/// Whether `α > 0` lies in the fundamental region: connected support and
/// `(α, e_i) ≤ 0` at every loop-free vertex.
pub fn in_fundamental_region(quiver: &Quiver, alpha: &[i64]) -> bool {
    if alpha.iter().any(|&a| a < 0) || alpha.iter().all(|&a| a == 0) {
        return false;
    }
    let loop_free_ok = (0..quiver.vertex_count())
        .filter(|&i| !quiver.has_loop(i))
        .all(|i| quiver.pairing_with_simple(alpha, i) <= 0);
    loop_free_ok && quiver.support_connected(alpha).unwrap_or(false)
}

pub fn classify_root(quiver: &Quiver, alpha: &[i64]) -> Result<RootClass> {
    let n = quiver.vertex_count();
    if alpha.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: alpha.len(),
        });
    }
    if alpha.iter().all(|&a| a == 0) {
        return Err(Error::ZeroVector);
    }
    let not_root = |witness| {
        Ok(RootClass {
            tag: RootTag::NotRoot,
            witness,
        })
    };
    let positive = alpha.iter().any(|&a| a > 0);
    let negative = alpha.iter().any(|&a| a < 0);
    if positive && negative {
        return not_root(Vec::new());
    }
    let mut v: Vec<i64> = alpha.iter().map(|a| a.abs()).collect();
    let loop_free: Vec<usize> = (0..n).filter(|&i| !quiver.has_loop(i)).collect();
    let mut witness = Vec::new();
    loop {
        if v.iter().sum::<i64>() == 1 {
            let i = v.iter().position(|&x| x == 1).unwrap();
            let tag = if quiver.has_loop(i) {
                RootTag::Imaginary
            } else {
                RootTag::Real
            };
            return Ok(RootClass { tag, witness });
        }
        let descent = loop_free
            .iter()
            .copied()
            .map(|i| (i, quiver.pairing_with_simple(&v, i)))
            .find(|&(_, c)| c > 0);
        match descent {
            None => {
                let tag = if quiver.support_connected(&v)? {
                    RootTag::Imaginary
                } else {
                    RootTag::NotRoot
                };
                return Ok(RootClass { tag, witness });
            }
            Some((i, c)) => {
                v[i] -= c;
                witness.push(i);
                if v[i] < 0 {
                    return not_root(witness);
                }
            }
        }
    }
}

/// All `0 < α ≤ bound` in lexicographic order.
pub(crate) fn box_vectors(bound: &[i64]) -> impl Iterator<Item = Vec<i64>> + '_ {
    let n = bound.len();
    let mut cur = vec![0i64; n];
    let mut done = bound.iter().any(|&b| b < 0);
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let mut k = n;
        loop {
            if k == 0 {
                done = true;
                return None;
            }
            k -= 1;
            if cur[k] < bound[k] {
                cur[k] += 1;
                for c in cur.iter_mut().skip(k + 1) {
                    *c = 0;
                }
                break;
            }
        }
        Some(cur.clone())
    })
}

pub fn positive_roots_up_to(quiver: &Quiver, bound: &DimVector) -> Result<RootList> {
    if bound.len() != quiver.vertex_count() {
        return Err(Error::LengthMismatch {
            expected: quiver.vertex_count(),
            found: bound.len(),
        });
    }
    let mut entries = Vec::new();
    for v in box_vectors(bound) {
        let class = classify_root(quiver, &v)?;
        if class.tag.is_root() {
            entries.push((DimVector::new(v)?, class));
        }
    }
    Ok(RootList { entries })
}

/// `R_λ⁺` restricted to the box below `bound`.
pub fn r_lambda_plus(quiver: &Quiver, lambda: &Weight, bound: &DimVector) -> Result<RootList> {
    if lambda.len() != quiver.vertex_count() {
        return Err(Error::LengthMismatch {
            expected: quiver.vertex_count(),
            found: lambda.len(),
        });
    }
    let all = positive_roots_up_to(quiver, bound)?;
    Ok(all.filtered(|v| lambda.annihilates(v)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dv(v: &[i64]) -> DimVector {
        DimVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn reflections() {
        let k = Quiver::kronecker(2);
        assert_eq!(reflect(&k, &[1, 0], 1).unwrap(), vec![1, 2]);
        assert_eq!(reflect(&k, &[1, 0], 0).unwrap(), vec![-1, 0]);
        let once = reflect(&k, &[3, 5], 0).unwrap();
        assert_eq!(reflect(&k, &once, 0).unwrap(), vec![3, 5]);
        assert_eq!(
            reflect(&Quiver::bouquet(1), &[1], 0),
            Err(Error::LoopAtVertex(0))
        );
    }

    #[test]
    fn kronecker_classification() {
        let k = Quiver::kronecker(2);
        for n in 1..6 {
            assert_eq!(classify_root(&k, &[n, n + 1]).unwrap().tag, RootTag::Real);
            assert_eq!(classify_root(&k, &[n + 1, n]).unwrap().tag, RootTag::Real);
            assert_eq!(classify_root(&k, &[n, n]).unwrap().tag, RootTag::Imaginary);
            assert_eq!(
                classify_root(&k, &[-n, -n]).unwrap().tag,
                RootTag::Imaginary
            );
        }
        assert_eq!(classify_root(&k, &[1, 3]).unwrap().tag, RootTag::NotRoot);
        assert_eq!(classify_root(&k, &[1, -1]).unwrap().tag, RootTag::NotRoot);
        assert_eq!(classify_root(&k, &[0, 0]), Err(Error::ZeroVector));
    }

    #[test]
    fn witness_replays_to_simple_root() {
        let k = Quiver::kronecker(2);
        let c = classify_root(&k, &[3, 4]).unwrap();
        let mut v = vec![3, 4];
        for &i in &c.witness {
            v = reflect(&k, &v, i).unwrap();
        }
        assert_eq!(v.iter().sum::<i64>(), 1);
    }

    #[test]
    fn loop_vertices_are_imaginary() {
        let j = Quiver::bouquet(1);
        for n in 1..8 {
            assert_eq!(classify_root(&j, &[n]).unwrap().tag, RootTag::Imaginary);
        }
        let pt = Quiver::bouquet(0);
        assert_eq!(classify_root(&pt, &[1]).unwrap().tag, RootTag::Real);
        assert_eq!(classify_root(&pt, &[2]).unwrap().tag, RootTag::NotRoot);
    }

    #[test]
    fn root_enumeration() {
        let k = Quiver::kronecker(2);
        let roots = positive_roots_up_to(&k, &dv(&[2, 2])).unwrap();
        let expected: Vec<DimVector> = [[0, 1], [1, 0], [1, 1], [1, 2], [2, 1], [2, 2]]
            .iter()
            .map(|v| dv(v))
            .collect();
        assert_eq!(roots.vectors(), expected);
        assert!(positive_roots_up_to(&k, &dv(&[0, 0])).unwrap().is_empty());
        let a1 = positive_roots_up_to(&Quiver::bouquet(0), &dv(&[3])).unwrap();
        assert_eq!(a1.vectors(), vec![dv(&[1])]);
    }

    #[test]
    fn lambda_filtering() {
        let k = Quiver::kronecker(2);
        let b = dv(&[2, 2]);
        assert_eq!(
            r_lambda_plus(&k, &Weight::zeros(2), &b).unwrap(),
            positive_roots_up_to(&k, &b).unwrap()
        );
        let r = r_lambda_plus(&k, &Weight::from_integers(&[1, -1]), &b).unwrap();
        assert_eq!(r.vectors(), vec![dv(&[1, 1]), dv(&[2, 2])]);
        let r = r_lambda_plus(&k, &Weight::from_integers(&[1, 1]), &dv(&[4, 4])).unwrap();
        assert!(r.is_empty());
    }

    #[test]
    fn extended_dynkin_delta_multiples() {
        // affine A_2 cycle and affine D_4 star
        let a2 = Quiver::from_edges(3, &[(0, 1), (1, 2), (2, 0)]);
        let d4 = Quiver::from_edges(5, &[(1, 0), (2, 0), (3, 0), (4, 0)]);
        for n in 1..4 {
            assert_eq!(
                classify_root(&a2, &[n, n, n]).unwrap().tag,
                RootTag::Imaginary
            );
            assert_eq!(
                classify_root(&d4, &[2 * n, n, n, n, n]).unwrap().tag,
                RootTag::Imaginary
            );
        }
    }

    proptest! {
        #[test]
        fn root_values_of_p(edges in prop::collection::vec((0usize..3, 0usize..3), 0..5),
                            a in prop::collection::vec(0i64..4, 3)) {
            let q = Quiver::from_edges(3, &edges);
            prop_assume!(a.iter().any(|&x| x > 0));
            let c = classify_root(&q, &a).unwrap();
            match c.tag {
                RootTag::Real => prop_assert_eq!(q.p(&a).unwrap(), 0),
                RootTag::Imaginary => prop_assert!(q.p(&a).unwrap() >= 1),
                RootTag::NotRoot => {}
            }
            if in_fundamental_region(&q, &a) {
                prop_assert!(q.p(&a).unwrap() >= 1);
            }
            for i in 0..3 {
                if !q.has_loop(i) {
                    let r = reflect(&q, &a, i).unwrap();
                    prop_assert_eq!(q.q(&r).unwrap(), q.q(&a).unwrap());
                }
            }
        }
    }
}
