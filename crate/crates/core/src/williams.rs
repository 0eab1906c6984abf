//! Total amalgamation, in/out-splitting, symbol expansion, and the decision
//! procedure for conjugacy of one-sided shifts of finite type.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::verdict::Verdict;
use crate::witnesses::ElementarySseWitness;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AmalgamationStep {
    /// Indices (in the matrix before this step) of the identical columns
    /// merged into the lowest of them.
    pub merged: Vec<usize>,
    pub result: IntMatrix,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AmalgamationTrace {
    pub start: IntMatrix,
    pub steps: Vec<AmalgamationStep>,
    #[serde(rename = "final")]
    pub final_matrix: IntMatrix,
    /// `partition[v]` is the vertex of `final_matrix` that start vertex `v` ends up in.
    pub partition: Vec<usize>,
}

impl AmalgamationTrace {
    /// Rebuilds the final matrix from the start matrix and the partition alone.
    pub fn replay(&self) -> IntMatrix {
        collapse(&self.start, &self.partition, self.final_matrix.dim())
    }
}

/// Merges vertices according to `partition` (which must only merge vertices
/// with identical columns): rows are summed, one representative column kept.
fn collapse(a: &IntMatrix, partition: &[usize], classes: usize) -> IntMatrix {
    let n = a.dim();
    let mut rep = vec![usize::MAX; classes];
    for v in 0..n {
        if rep[partition[v]] == usize::MAX {
            rep[partition[v]] = v;
        }
    }
    let mut out = IntMatrix::zeros(classes, classes);
    for u in 0..n {
        for (c, &r) in rep.iter().enumerate() {
            *out.get_mut(partition[u], c) += a.get(u, r);
        }
    }
    out
}

/// Classes (size >= 2) of pairwise identical columns, ordered by lowest index.
pub fn identical_column_classes(a: &IntMatrix) -> Vec<Vec<usize>> {
    let n = a.cols();
    let cols: Vec<Vec<BigInt>> = (0..n).map(|j| a.col(j)).collect();
    let mut seen = vec![false; n];
    let mut classes = Vec::new();
    for j in 0..n {
        if seen[j] {
            continue;
        }
        let class: Vec<usize> = (j..n).filter(|&k| cols[k] == cols[j]).collect();
        for &k in &class {
            seen[k] = true;
        }
        if class.len() > 1 {
            classes.push(class);
        }
    }
    classes
}

fn merge_columns(a: &IntMatrix, merged: &[usize]) -> (IntMatrix, Vec<usize>) {
    let n = a.dim();
    let keep = merged[0];
    let drop: BTreeSet<usize> = merged[1..].iter().copied().collect();
    let mut map = vec![0; n];
    let mut next = 0;
    for v in 0..n {
        if !drop.contains(&v) {
            map[v] = next;
            next += 1;
        }
    }
    for &v in &drop {
        map[v] = map[keep];
    }
    (collapse(a, &map, next), map)
}

/// Total amalgamation, merging the lowest-indexed class of identical
/// columns at every step.
pub fn total_amalgamation(a: &IntMatrix) -> Result<AmalgamationTrace> {
    total_amalgamation_by(a, |classes| classes[0].clone())
}

/// Total amalgamation with a caller-chosen merge at each step. `choose`
/// receives the current classes of identical columns and returns the column
/// indices to merge: at least two, all from one class.
pub fn total_amalgamation_by(
    a: &IntMatrix,
    mut choose: impl FnMut(&[Vec<usize>]) -> Vec<usize>,
) -> Result<AmalgamationTrace> {
    a.require_square("total_amalgamation")?;
    a.check_adjacency()?;
    let mut current = a.clone();
    let mut partition: Vec<usize> = (0..a.dim()).collect();
    let mut steps = Vec::new();
    loop {
        let classes = identical_column_classes(&current);
        if classes.is_empty() {
            break;
        }
        let mut merged = choose(&classes);
        merged.sort_unstable();
        merged.dedup();
        let valid = merged.len() >= 2 && classes.iter().any(|c| merged.iter().all(|m| c.contains(m)));
        if !valid {
            return Err(Error::Precondition(format!("merge set {merged:?} is not a set of identical columns")));
        }
        let (next, map) = merge_columns(&current, &merged);
        for p in partition.iter_mut() {
            *p = map[*p];
        }
        steps.push(AmalgamationStep { merged, result: next.clone() });
        current = next;
    }
    Ok(AmalgamationTrace { start: a.clone(), steps, final_matrix: current, partition })
}

/// Per-vertex invariant used to prune the bijection search.
fn vertex_signature(a: &IntMatrix, v: usize) -> (BigInt, Vec<BigInt>, Vec<BigInt>) {
    let mut row = a.row(v).to_vec();
    let mut col = a.col(v);
    row.sort();
    col.sort();
    (a.get(v, v).clone(), row, col)
}

/// Visits every bijection `p` with `B_k = A_k.relabel(p)` for all pairs
/// simultaneously, in lexicographic order of `p`. The visitor returns `true`
/// to stop. Returns whether the search was stopped by the visitor.
pub fn for_each_simultaneous_isomorphism(
    pairs: &[(&IntMatrix, &IntMatrix)],
    mut visit: impl FnMut(&[usize]) -> bool,
) -> bool {
    let Some(&(first, _)) = pairs.first() else {
        return visit(&[]);
    };
    let n = first.dim();
    if pairs.iter().any(|(a, b)| !a.is_square() || !b.is_square() || a.dim() != n || b.dim() != n) {
        return false;
    }
    let sig = |m: &IntMatrix, v: usize| -> Vec<(BigInt, Vec<BigInt>, Vec<BigInt>)> {
        let _ = m;
        pairs.iter().map(|(a, _)| vertex_signature(a, v)).collect()
    };
    let sig_a: Vec<_> = (0..n).map(|v| sig(first, v)).collect();
    let sig_b: Vec<Vec<_>> = (0..n).map(|v| pairs.iter().map(|(_, b)| vertex_signature(b, v)).collect()).collect();
    let candidates: Vec<Vec<usize>> = (0..n).map(|i| (0..n).filter(|&j| sig_a[i] == sig_b[j]).collect()).collect();
    if candidates.iter().any(Vec::is_empty) {
        return false;
    }
    let mut perm = vec![usize::MAX; n];
    let mut used = vec![false; n];
    search(pairs, &candidates, 0, &mut perm, &mut used, &mut visit)
}

fn search(
    pairs: &[(&IntMatrix, &IntMatrix)],
    candidates: &[Vec<usize>],
    i: usize,
    perm: &mut Vec<usize>,
    used: &mut Vec<bool>,
    visit: &mut impl FnMut(&[usize]) -> bool,
) -> bool {
    let n = candidates.len();
    if i == n {
        return visit(perm);
    }
    for &j in &candidates[i] {
        if used[j] {
            continue;
        }
        let consistent = pairs.iter().all(|(a, b)| {
            a.get(i, i) == b.get(j, j)
                && (0..i).all(|k| a.get(i, k) == b.get(j, perm[k]) && a.get(k, i) == b.get(perm[k], j))
        });
        if !consistent {
            continue;
        }
        perm[i] = j;
        used[j] = true;
        if search(pairs, candidates, i + 1, perm, used, visit) {
            return true;
        }
        used[j] = false;
        perm[i] = usize::MAX;
    }
    false
}

/// A vertex bijection `p` with `B[p[i]][p[j]] = A[i][j]`, if one exists.
pub fn permutation_equivalent(a: &IntMatrix, b: &IntMatrix) -> Option<Vec<usize>> {
    if !a.is_square() || !b.is_square() || a.dim() != b.dim() {
        return None;
    }
    let mut found = None;
    for_each_simultaneous_isomorphism(&[(a, b)], |p| {
        found = Some(p.to_vec());
        true
    });
    found
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConjugacyCertificate {
    pub trace_a: AmalgamationTrace,
    pub trace_b: AmalgamationTrace,
    /// Bijection from the vertices of the first total amalgamation to those
    /// of the second.
    pub permutation: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConjugacyObstruction {
    /// `size`, `signature` or `no_permutation`.
    pub reason: String,
    pub final_a: IntMatrix,
    pub final_b: IntMatrix,
}

/// One-sided conjugacy: the total amalgamations agree up to permutation.
pub fn decide_one_sided_conjugacy(
    a: &IntMatrix,
    b: &IntMatrix,
) -> Result<Verdict<ConjugacyCertificate, ConjugacyObstruction>> {
    let ta = total_amalgamation(a)?;
    let tb = total_amalgamation(b)?;
    let (fa, fb) = (&ta.final_matrix, &tb.final_matrix);
    let obstruction =
        |reason: &str| ConjugacyObstruction { reason: reason.into(), final_a: fa.clone(), final_b: fb.clone() };
    if fa.dim() != fb.dim() {
        return Ok(Verdict::No(obstruction("size")));
    }
    let mut sa: Vec<_> = (0..fa.dim()).map(|v| vertex_signature(fa, v)).collect();
    let mut sb: Vec<_> = (0..fb.dim()).map(|v| vertex_signature(fb, v)).collect();
    sa.sort();
    sb.sort();
    if sa != sb {
        return Ok(Verdict::No(obstruction("signature")));
    }
    Ok(match permutation_equivalent(fa, fb) {
        Some(permutation) => Verdict::Yes(ConjugacyCertificate { trace_a: ta, trace_b: tb, permutation }),
        None => Verdict::No(obstruction("no_permutation")),
    })
}

/// One edge at a split vertex: `other` is the far endpoint (target for
/// out-splits, source for in-splits) and `index` its multiplicity index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EdgeRef {
    pub other: usize,
    pub index: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub vertex: usize,
    pub blocks: Vec<Vec<EdgeRef>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SplitResult {
    pub matrix: IntMatrix,
    /// `A = R S` and `S R = matrix`.
    pub witness: ElementarySseWitness,
}

/// Per-block edge counts towards each far vertex, for the edges at `v`
/// described by `counts` (the row of `v` for out-splits).
fn block_counts(counts: &[BigInt], spec: &SplitSpec) -> Result<Vec<Vec<BigInt>>> {
    if spec.blocks.is_empty() {
        return Err(Error::Split("no blocks".into()));
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(spec.blocks.len());
    for (p, block) in spec.blocks.iter().enumerate() {
        if block.is_empty() {
            return Err(Error::Split(format!("block {p} is empty")));
        }
        let mut row = vec![BigInt::zero(); counts.len()];
        for e in block {
            let available = counts.get(e.other).and_then(ToPrimitive::to_usize).unwrap_or(0);
            if e.index >= available {
                return Err(Error::Split(format!("edge {:?} does not exist", e)));
            }
            if !seen.insert(*e) {
                return Err(Error::Split(format!("edge {:?} appears twice", e)));
            }
            row[e.other] += 1;
        }
        out.push(row);
    }
    let total: usize = counts.iter().map(|c| c.to_usize().unwrap_or(0)).sum();
    if seen.len() != total {
        return Err(Error::Split(format!("blocks cover {} of {} edges", seen.len(), total)));
    }
    Ok(out)
}

/// Out-split at `spec.vertex`. The copies of the vertex take its position
/// (in block order) and later vertices shift up.
pub fn out_split(a: &IntMatrix, spec: &SplitSpec) -> Result<SplitResult> {
    a.require_square("out_split")?;
    a.check_adjacency()?;
    let n = a.dim();
    let v = spec.vertex;
    if v >= n {
        return Err(Error::Split(format!("vertex {v} out of range")));
    }
    let blocks = block_counts(a.row(v), spec)?;
    let b = blocks.len();
    let m = n + b - 1;
    // new index of old vertex u (first copy for v)
    let new_index = |u: usize| if u <= v { u } else { u + b - 1 };

    let mut division = IntMatrix::zeros(n, m);
    for u in 0..n {
        if u == v {
            for p in 0..b {
                division.set(v, v + p, 1);
            }
        } else {
            division.set(u, new_index(u), 1);
        }
    }
    let mut edge = IntMatrix::zeros(m, n);
    for u in 0..n {
        if u == v {
            for (p, row) in blocks.iter().enumerate() {
                for (w, c) in row.iter().enumerate() {
                    edge.set(v + p, w, c.clone());
                }
            }
        } else {
            for w in 0..n {
                edge.set(new_index(u), w, a.get(u, w).clone());
            }
        }
    }
    let matrix = &edge * &division;
    Ok(SplitResult { matrix, witness: ElementarySseWitness { r: division, s: edge } })
}

/// In-split at `spec.vertex`; blocks partition the incoming edges, with
/// `EdgeRef::other` naming the source vertex.
pub fn in_split(a: &IntMatrix, spec: &SplitSpec) -> Result<SplitResult> {
    a.require_square("in_split")?;
    let t = out_split(&a.transpose(), spec)?;
    let w = t.witness;
    Ok(SplitResult {
        matrix: t.matrix.transpose(),
        witness: ElementarySseWitness { r: w.s.transpose(), s: w.r.transpose() },
    })
}

/// Edge references at `v`, outgoing or incoming, in row-major order.
pub fn edges_at(a: &IntMatrix, v: usize, outgoing: bool) -> Vec<EdgeRef> {
    let n = a.dim();
    let mut out = Vec::new();
    for other in 0..n {
        let c = if outgoing { a.get(v, other) } else { a.get(other, v) };
        for index in 0..c.to_usize().unwrap_or(0) {
            out.push(EdgeRef { other, index });
        }
    }
    out
}

/// Replaces edge number `index` from `i` to `j` by a path through a new
/// last vertex.
pub fn symbol_expand(a: &IntMatrix, i: usize, j: usize, index: usize) -> Result<IntMatrix> {
    a.require_square("symbol_expand")?;
    let n = a.dim();
    let count = if i < n && j < n { a.get(i, j).to_usize().unwrap_or(0) } else { 0 };
    if index >= count {
        return Err(Error::NoSuchEdge { from: i, to: j, index });
    }
    let mut out = IntMatrix::zeros(n + 1, n + 1);
    for r in 0..n {
        for c in 0..n {
            out.set(r, c, a.get(r, c).clone());
        }
    }
    *out.get_mut(i, j) -= 1;
    out.set(i, n, 1);
    out.set(n, j, 1);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix;

    fn e(other: usize, index: usize) -> EdgeRef {
        EdgeRef { other, index }
    }

    #[test]
    fn amalgamation_examples() {
        let c = matrix![[1, 1, 0], [0, 0, 1], [2, 2, 0]];
        let t = total_amalgamation(&c).unwrap();
        assert_eq!(t.final_matrix, matrix![[1, 1], [2, 0]]);
        assert_eq!(t.partition, vec![0, 0, 1]);
        assert_eq!(t.replay(), t.final_matrix);

        let b = matrix![[1, 0, 1], [1, 0, 1], [1, 1, 0]];
        let t = total_amalgamation(&b).unwrap();
        assert_eq!(t.final_matrix, b);
        assert!(t.steps.is_empty());

        let t = total_amalgamation(&matrix![[2, 2, 2], [1, 1, 1], [1, 1, 1]]).unwrap();
        assert_eq!(t.final_matrix, matrix![[4]]);
    }

    #[test]
    fn amalgamation_cascades() {
        // Merging vertices 1 and 2 makes columns 0 and 3 identical.
        let a = matrix![[0, 1, 1, 0], [1, 0, 0, 1], [0, 0, 0, 0], [1, 1, 1, 1]];
        let t = total_amalgamation(&a).unwrap();
        assert!(identical_column_classes(&t.final_matrix).is_empty());
        assert_eq!(t.replay(), t.final_matrix);
    }

    #[test]
    fn permutation_examples() {
        let a = matrix![[1, 1], [2, 0]];
        assert_eq!(permutation_equivalent(&a, &a), Some(vec![0, 1]));
        assert_eq!(permutation_equivalent(&a, &matrix![[0, 2], [1, 1]]), Some(vec![1, 0]));
        assert_eq!(permutation_equivalent(&a, &IntMatrix::identity(3)), None);
        assert_eq!(permutation_equivalent(&a, &matrix![[1, 2], [1, 0]]), None);
    }

    #[test]
    fn conjugacy_examples() {
        let a = matrix![[1, 1], [2, 0]];
        let c = matrix![[1, 1, 0], [0, 0, 1], [2, 2, 0]];
        let b = matrix![[1, 0, 1], [1, 0, 1], [1, 1, 0]];
        assert!(decide_one_sided_conjugacy(&a, &c).unwrap().is_yes());
        let no = decide_one_sided_conjugacy(&a, &b).unwrap().no().unwrap();
        assert_eq!(no.reason, "size");
        let a1 = matrix![[2, 0, 4], [1, 2, 0], [1, 2, 0]];
        assert!(decide_one_sided_conjugacy(&a1, &matrix![[4]]).unwrap().is_no());
    }

    #[test]
    fn split_examples() {
        let a = matrix![[1, 1], [2, 0]];
        let out = out_split(&a, &SplitSpec { vertex: 0, blocks: vec![vec![e(0, 0)], vec![e(1, 0)]] }).unwrap();
        assert_eq!(out.matrix, matrix![[1, 1, 0], [0, 0, 1], [2, 2, 0]]);
        assert_eq!(&out.witness.r * &out.witness.s, a);
        assert_eq!(&out.witness.s * &out.witness.r, out.matrix);

        // in-edges of vertex 0: e = (0,0), g = (1,0), h = (1,1)
        let spec = SplitSpec { vertex: 0, blocks: vec![vec![e(0, 0), e(1, 1)], vec![e(1, 0)]] };
        let inn = in_split(&a, &spec).unwrap();
        assert_eq!(inn.matrix, matrix![[1, 0, 1], [1, 0, 1], [1, 1, 0]]);
        assert_eq!(inn.witness.r, matrix![[1, 0, 1], [1, 1, 0]]);
        assert_eq!(inn.witness.s, matrix![[1, 0], [1, 0], [0, 1]]);

        let single = out_split(&a, &SplitSpec { vertex: 1, blocks: vec![vec![e(0, 0), e(0, 1)]] }).unwrap();
        assert_eq!(single.matrix, a);
    }

    #[test]
    fn split_errors() {
        let a = matrix![[1, 1], [2, 0]];
        let bad = |blocks: Vec<Vec<EdgeRef>>| out_split(&a, &SplitSpec { vertex: 0, blocks });
        assert!(matches!(bad(vec![vec![e(0, 0)], vec![]]), Err(Error::Split(_))));
        assert!(matches!(bad(vec![vec![e(0, 0)]]), Err(Error::Split(_))));
        assert!(matches!(bad(vec![vec![e(0, 0), e(0, 0)], vec![e(1, 0)]]), Err(Error::Split(_))));
        assert!(matches!(bad(vec![vec![e(0, 1)], vec![e(1, 0)]]), Err(Error::Split(_))));
    }

    #[test]
    fn symbol_expansion_examples() {
        assert_eq!(symbol_expand(&matrix![[2]], 0, 0, 1).unwrap(), matrix![[1, 1], [1, 0]]);
        assert_eq!(symbol_expand(&matrix![[1]], 0, 0, 0).unwrap(), matrix![[0, 1], [1, 0]]);
        assert!(matches!(symbol_expand(&matrix![[1, 0], [0, 1]], 0, 1, 0), Err(Error::NoSuchEdge { .. })));
    }
}
