//! Independent oracles and sample generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap, VecDeque};

use num_traits::Zero;
use quiverlab::linalg::QMatrix;
use quiverlab::rational::{rat, ratio, Rational};
use quiverlab::{ConjugacyClass, DimVector, Quiver};
use rand::Rng;

/// Symmetric form matrix `C` with `(α,β) = αᵀCβ`, built from the edge list.
fn form_matrix(q: &Quiver) -> Vec<Vec<i64>> {
    let n = q.vertex_count();
    let mut c = vec![vec![0i64; n]; n];
    for (i, row) in c.iter_mut().enumerate() {
        row[i] = 2;
    }
    for a in q.arrows() {
        c[a.tail][a.head] -= 1;
        c[a.head][a.tail] -= 1;
    }
    c
}

fn pair_simple(c: &[Vec<i64>], v: &[i64], i: usize) -> i64 {
    v.iter().zip(&c[i]).map(|(a, b)| a * b).sum()
}

fn connected_support(q: &Quiver, v: &[i64]) -> bool {
    let n = v.len();
    let supp: Vec<usize> = (0..n).filter(|&i| v[i] > 0).collect();
    let Some(&start) = supp.first() else {
        return false;
    };
    let mut seen = vec![false; n];
    seen[start] = true;
    let mut queue = VecDeque::from([start]);
    while let Some(i) = queue.pop_front() {
        for a in q.arrows() {
            for (x, y) in [(a.tail, a.head), (a.head, a.tail)] {
                if x == i && v[y] > 0 && !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
    }
    supp.iter().all(|&i| seen[i])
}

pub fn box_points(bound: &[i64]) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for &b in bound {
        out = out
            .into_iter()
            .flat_map(|p: Vec<i64>| (0..=b).map(move |x| [p.clone(), vec![x]].concat()))
            .collect();
    }
    out.retain(|p| p.iter().any(|&x| x > 0));
    out
}

/// Positive roots inside the box, by forward closure under the simple
/// reflections at loop-free vertices from `{e_i} ∪ F`, never leaving the box.
/// The value is `true` for real roots.
pub fn root_oracle(q: &Quiver, bound: &[i64]) -> HashMap<Vec<i64>, bool> {
    let n = q.vertex_count();
    let c = form_matrix(q);
    let loop_free: Vec<usize> = (0..n).filter(|&i| c[i][i] == 2).collect();
    let in_box = |v: &[i64]| v.iter().zip(bound).all(|(a, b)| *a >= 0 && a <= b);
    let mut found: HashMap<Vec<i64>, bool> = HashMap::new();
    let mut queue = VecDeque::new();
    for i in 0..n {
        let mut e = vec![0; n];
        e[i] = 1;
        if in_box(&e) {
            found.insert(e.clone(), loop_free.contains(&i));
            queue.push_back(e);
        }
    }
    for v in box_points(bound) {
        let fundamental =
            connected_support(q, &v) && loop_free.iter().all(|&i| pair_simple(&c, &v, i) <= 0);
        if fundamental && !found.contains_key(&v) {
            found.insert(v.clone(), false);
            queue.push_back(v);
        }
    }
    while let Some(v) = queue.pop_front() {
        let real = found[&v];
        for &i in &loop_free {
            let mut w = v.clone();
            w[i] -= pair_simple(&c, &v, i);
            if w.iter().all(|&x| x == 0) || !in_box(&w) || found.contains_key(&w) {
                continue;
            }
            found.insert(w.clone(), real);
            queue.push_back(w);
        }
    }
    found
}

/// Every multigraph on `n` vertices with at most `max_edges` edges, loops
/// included, each edge oriented from the smaller index.
pub fn all_multigraphs(n: usize, max_edges: usize) -> Vec<Quiver> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let mut out = Vec::new();
    fn rec(
        pairs: &[(usize, usize)],
        start: usize,
        left: usize,
        cur: &mut Vec<(usize, usize)>,
        n: usize,
        out: &mut Vec<Quiver>,
    ) {
        out.push(Quiver::from_edges(n, cur));
        if left == 0 {
            return;
        }
        for k in start..pairs.len() {
            cur.push(pairs[k]);
            rec(pairs, k, left - 1, cur, n, out);
            cur.pop();
        }
    }
    rec(&pairs, 0, max_edges, &mut Vec::new(), n, &mut out);
    out
}

/// Every quiver on `n` labelled vertices with at most `max_arrows` arrows,
/// up to renaming arrows: each multigraph with every split of each bundle of
/// parallel edges into the two directions.
pub fn all_quivers(n: usize, max_arrows: usize) -> Vec<Quiver> {
    let mut out = Vec::new();
    for g in all_multigraphs(n, max_arrows) {
        let mut bundles: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for a in g.arrows() {
            *bundles.entry((a.tail, a.head)).or_insert(0) += 1;
        }
        let bundles: Vec<((usize, usize), usize)> = bundles.into_iter().collect();
        let mut choice = vec![0usize; bundles.len()];
        loop {
            let mut edges = Vec::new();
            for (((i, j), m), &k) in bundles.iter().zip(&choice) {
                for e in 0..*m {
                    edges.push(if e < k { (*j, *i) } else { (*i, *j) });
                }
            }
            out.push(Quiver::from_edges(n, &edges));
            // odometer over the number of reversed edges in each bundle
            let advanced = bundles
                .iter()
                .zip(choice.iter_mut())
                .any(|(&((i, j), m), k)| {
                    let limit = if i == j { 0 } else { m };
                    if *k < limit {
                        *k += 1;
                        true
                    } else {
                        *k = 0;
                        false
                    }
                });
            if !advanced {
                break;
            }
        }
    }
    out
}

/// Jordan normal form of a class, blocks in input order.
pub fn jordan_matrix(c: &ConjugacyClass) -> QMatrix {
    let n = c.size();
    let mut m = QMatrix::zeros(n, n);
    let mut pos = 0;
    for (xi, blocks) in c.entries() {
        for &b in blocks {
            for k in 0..b {
                m[(pos + k, pos + k)] = xi.clone();
                if k + 1 < b {
                    m[(pos + k, pos + k + 1)] = rat(1);
                }
            }
            pos += b;
        }
    }
    m
}

/// `rank ∏_{j>i} (M − ξ_j)` for `i = 1..t`, by exact elimination.
pub fn chain_ranks_oracle(c: &ConjugacyClass, xi: &[Rational]) -> Vec<usize> {
    let m = jordan_matrix(c);
    let n = c.size();
    (1..=xi.len())
        .map(|i| {
            let mut p = QMatrix::identity(n);
            for x in &xi[i..] {
                let f = m.sub(&QMatrix::identity(n).scale(x));
                p = &p * &f;
            }
            p.rank()
        })
        .collect()
}

/// `n² − Σ_ξ Σ_i (λ'_ξ)_i²`, with `λ'` the dual partition.
pub fn dual_partition_dim(c: &ConjugacyClass) -> i64 {
    let n = c.size() as i64;
    let mut s = 0i64;
    for (_, blocks) in c.entries() {
        let max = blocks[0];
        for i in 1..=max {
            let col = blocks.iter().filter(|&&b| b >= i).count() as i64;
            s += col * col;
        }
    }
    n * n - s
}

fn partitions(n: usize, max: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for k in (1..=n.min(max)).rev() {
        for mut rest in partitions(n - k, k) {
            rest.insert(0, k);
            out.push(rest);
        }
    }
    out
}

fn compositions(n: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return if n >= 1 { vec![vec![n]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 1..n {
        for mut rest in compositions(n - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// All classes of size `n` with up to `max_eigs` distinct eigenvalues drawn
/// in order from a fixed list; every ordered split of `n` and every
/// partition per eigenvalue.
pub fn all_classes(n: usize, max_eigs: usize) -> Vec<ConjugacyClass> {
    let eigs = [rat(0), rat(1), ratio(-5, 2)];
    let mut out = Vec::new();
    for k in 1..=max_eigs.min(n).min(eigs.len()) {
        for comp in compositions(n, k) {
            let mut combos: Vec<Vec<Vec<usize>>> = vec![vec![]];
            for &m in &comp {
                combos = combos
                    .into_iter()
                    .flat_map(|c| {
                        partitions(m, m)
                            .into_iter()
                            .map(move |p| [c.clone(), vec![p]].concat())
                    })
                    .collect();
            }
            for parts in combos {
                let entries = eigs.iter().cloned().zip(parts).collect();
                out.push(ConjugacyClass::new(entries).unwrap());
            }
        }
    }
    out
}

/// Random quiver with `1..=max_vertices` vertices and `0..=max_arrows`
/// arrows, loops allowed.
pub fn random_quiver(rng: &mut impl Rng, max_vertices: usize, max_arrows: usize) -> Quiver {
    let n = rng.random_range(1..=max_vertices);
    let m = rng.random_range(0..=max_arrows);
    let edges: Vec<(usize, usize)> = (0..m)
        .map(|_| (rng.random_range(0..n), rng.random_range(0..n)))
        .collect();
    Quiver::from_edges(n, &edges)
}

/// Sincere dimension vectors with coordinate sum at most `max_total`.
pub fn sincere_vectors(n: usize, max_total: i64) -> Vec<DimVector> {
    box_points(&vec![max_total; n])
        .into_iter()
        .filter(|v| v.iter().all(|&x| x > 0) && v.iter().sum::<i64>() <= max_total)
        .map(|v| DimVector::new(v).unwrap())
        .collect()
}

pub fn random_rational(rng: &mut impl Rng, num: i64, den: i64) -> Rational {
    ratio(rng.random_range(-num..=num), rng.random_range(1..=den))
}

/// Random invertible matrix with small rational entries.
pub fn random_invertible(rng: &mut impl Rng, m: usize) -> QMatrix {
    loop {
        let rows: Vec<Vec<Rational>> = (0..m)
            .map(|_| (0..m).map(|_| random_rational(rng, 3, 2)).collect())
            .collect();
        let g = if m == 0 {
            QMatrix::zeros(0, 0)
        } else {
            QMatrix::from_rows(&rows)
        };
        if m == 0 || !g.determinant().is_zero() {
            return g;
        }
    }
}

/// Block sizes and a symmetric multiplicity matrix with even diagonal,
/// total dimension in `1..=max_dim`.
#[allow(clippy::needless_range_loop)]
pub fn random_symplectic_layout(
    rng: &mut impl Rng,
    max_blocks: usize,
    max_dim: usize,
) -> (Vec<usize>, Vec<Vec<usize>>) {
    loop {
        let n = rng.random_range(1..=max_blocks);
        let blocks: Vec<usize> = (0..n).map(|_| rng.random_range(1..=3)).collect();
        let mut mult = vec![vec![0usize; n]; n];
        for i in 0..n {
            mult[i][i] = 2 * rng.random_range(0..=2);
            for j in i + 1..n {
                let m = rng.random_range(0..=2);
                mult[i][j] = m;
                mult[j][i] = m;
            }
        }
        let dim: usize = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| mult[i][j] * blocks[i] * blocks[j])
            .sum();
        if dim >= 1 && dim <= max_dim {
            return (blocks, mult);
        }
    }
}

/// Unordered edge multiplicities of a quiver.
pub fn edge_multiset(q: &Quiver) -> BTreeMap<(usize, usize), usize> {
    quiverlab::bimodule::edge_counts(q)
}
