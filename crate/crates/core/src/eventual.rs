//! Conjugacy of higher powers of one-sided shifts of finite type.
//!
//! With `n = max(N(A), N(B))`, where `N` is the rank stabilization index,
//! the higher powers are conjugate iff the total amalgamations of `A^m` and
//! `B^m` agree, via one common vertex bijection, for `m = n` and `m = n + 1`.

use serde::Serialize;

use crate::error::Result;
use crate::matrix::{power, rank_over_rationals, IntMatrix};
use crate::verdict::{Verdict, VerdictKind};
use crate::williams::{
    decide_one_sided_conjugacy, for_each_simultaneous_isomorphism, total_amalgamation, AmalgamationTrace,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StabilizationIndex {
    pub value: usize,
    /// Ranks of `A^1, ..., A^(value + 1)`.
    pub rank_sequence: Vec<usize>,
}

/// Least `n >= 1` with `rank(A^n) = rank(A^(n+1))`.
pub fn stabilization_index(a: &IntMatrix) -> Result<StabilizationIndex> {
    a.require_square("stabilization_index")?;
    let mut ranks = vec![rank_over_rationals(a)];
    let mut p = a.clone();
    loop {
        p = &p * a;
        ranks.push(rank_over_rationals(&p));
        let k = ranks.len();
        if ranks[k - 1] == ranks[k - 2] {
            return Ok(StabilizationIndex { value: k - 1, rank_sequence: ranks });
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EventualOptions {
    /// Per-power cross-checks run for `m` in `n ..= n + powers`.
    pub powers: u32,
}

impl Default for EventualOptions {
    fn default() -> Self {
        EventualOptions { powers: 3 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerPair {
    pub m: u32,
    pub trace_a: AmalgamationTrace,
    pub trace_b: AmalgamationTrace,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PowerCheck {
    pub m: u32,
    pub verdict: VerdictKind,
    pub size_a: usize,
    pub size_b: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EventualCertificate {
    pub n: u32,
    pub index_a: StabilizationIndex,
    pub index_b: StabilizationIndex,
    pub at_n: PowerPair,
    pub at_n1: PowerPair,
    /// Bijection of the vertices of the total amalgamation at `n`.
    pub permutation_n: Vec<usize>,
    /// The induced bijection at `n + 1`.
    pub permutation_n1: Vec<usize>,
    pub cross_checks: Vec<PowerCheck>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EventualObstruction {
    /// `size` or `no_joint_permutation`.
    pub reason: String,
    pub n: u32,
    /// Sizes of the total amalgamations at `n` and `n + 1`.
    pub sizes_a: [usize; 2],
    pub sizes_b: [usize; 2],
    pub cross_checks: Vec<PowerCheck>,
}

/// For each class of the finer partition, the class of the coarser one
/// containing it; `None` if the finer partition does not refine the coarser.
fn coarsening(fine: &[usize], coarse: &[usize], fine_classes: usize) -> Option<Vec<usize>> {
    let mut parent = vec![usize::MAX; fine_classes];
    for (f, c) in fine.iter().zip(coarse) {
        if parent[*f] == usize::MAX {
            parent[*f] = *c;
        } else if parent[*f] != *c {
            return None;
        }
    }
    Some(parent)
}

fn amalgamate_power(a: &IntMatrix, m: u32) -> Result<AmalgamationTrace> {
    total_amalgamation(&power(a, m)?)
}

enum Joint {
    Found(Vec<usize>, Vec<usize>),
    None,
    Inconclusive(String),
}

/// Searches a bijection of the classes at `n` that conjugates the total
/// amalgamations at `n` and, through the coarsening to `n + 1`, those at
/// `n + 1` as well.
fn joint_search(pa: &PowerPair, pb: &PowerPair) -> Joint {
    let (ta_n, tb_n) = (&pa.trace_a, &pa.trace_b);
    let (ta_n1, tb_n1) = (&pb.trace_a, &pb.trace_b);
    let (Some(up_a), Some(up_b)) = (
        coarsening(&ta_n.partition, &ta_n1.partition, ta_n.final_matrix.dim()),
        coarsening(&tb_n.partition, &tb_n1.partition, tb_n.final_matrix.dim()),
    ) else {
        return Joint::Inconclusive("partition at n does not refine the partition at n + 1".into());
    };
    let k1 = ta_n1.final_matrix.dim();
    let mut result = None;
    for_each_simultaneous_isomorphism(&[(&ta_n.final_matrix, &tb_n.final_matrix)], |p| {
        let mut induced = vec![usize::MAX; k1];
        for (c, &img) in p.iter().enumerate() {
            let (src, dst) = (up_a[c], up_b[img]);
            if induced[src] != usize::MAX && induced[src] != dst {
                return false;
            }
            induced[src] = dst;
        }
        let mut sorted = induced.clone();
        sorted.sort_unstable();
        if sorted != (0..k1).collect::<Vec<_>>() {
            return false;
        }
        if ta_n1.final_matrix.relabel(&induced) == tb_n1.final_matrix {
            result = Some((p.to_vec(), induced));
            return true;
        }
        false
    });
    match result {
        Some((p, q)) => Joint::Found(p, q),
        None => Joint::None,
    }
}

/// Decides whether `A` and `B` have conjugate higher powers.
///
/// The joint search is cross-checked against independent per-power
/// conjugacy decisions for `m` in `n ..= n + powers`. Disagreement is
/// reported as `Unknown`.
pub fn decide_conjugate_higher_powers(
    a: &IntMatrix,
    b: &IntMatrix,
    opts: EventualOptions,
) -> Result<Verdict<EventualCertificate, EventualObstruction>> {
    a.check_adjacency()?;
    b.check_adjacency()?;
    let index_a = stabilization_index(a)?;
    let index_b = stabilization_index(b)?;
    let n = index_a.value.max(index_b.value) as u32;

    let at_n = PowerPair { m: n, trace_a: amalgamate_power(a, n)?, trace_b: amalgamate_power(b, n)? };
    let at_n1 = PowerPair { m: n + 1, trace_a: amalgamate_power(a, n + 1)?, trace_b: amalgamate_power(b, n + 1)? };

    let mut cross_checks = Vec::new();
    for m in n..=n + opts.powers {
        let (pa, pb) = (power(a, m)?, power(b, m)?);
        let v = decide_one_sided_conjugacy(&pa, &pb)?;
        let (size_a, size_b) = match &v {
            Verdict::Yes(c) => (c.trace_a.final_matrix.dim(), c.trace_b.final_matrix.dim()),
            Verdict::No(o) => (o.final_a.dim(), o.final_b.dim()),
            Verdict::Unknown(_) => (0, 0),
        };
        cross_checks.push(PowerCheck { m, verdict: v.kind(), size_a, size_b });
    }
    let all_yes = cross_checks.iter().all(|c| c.verdict == VerdictKind::Yes);
    let any_no = cross_checks.iter().any(|c| c.verdict == VerdictKind::No);

    let sizes_a = [at_n.trace_a.final_matrix.dim(), at_n1.trace_a.final_matrix.dim()];
    let sizes_b = [at_n.trace_b.final_matrix.dim(), at_n1.trace_b.final_matrix.dim()];
    let obstruction = |reason: &str, cross_checks: Vec<PowerCheck>| EventualObstruction {
        reason: reason.into(),
        n,
        sizes_a,
        sizes_b,
        cross_checks,
    };

    let joint = if sizes_a != sizes_b { Joint::None } else { joint_search(&at_n, &at_n1) };
    Ok(match joint {
        Joint::Found(permutation_n, permutation_n1) if all_yes => Verdict::Yes(EventualCertificate {
            n,
            index_a,
            index_b,
            at_n,
            at_n1,
            permutation_n,
            permutation_n1,
            cross_checks,
        }),
        Joint::None if any_no => {
            let reason = if sizes_a != sizes_b { "size" } else { "no_joint_permutation" };
            Verdict::No(obstruction(reason, cross_checks))
        }
        Joint::Inconclusive(why) => Verdict::Unknown(format!("{why}; per-power checks: {}", summary(&cross_checks))),
        Joint::Found(..) => Verdict::Unknown(format!(
            "joint permutation found but a per-power check disagrees: {}",
            summary(&cross_checks)
        )),
        Joint::None => Verdict::Unknown(format!(
            "no joint permutation but every per-power check is positive: {}",
            summary(&cross_checks)
        )),
    })
}

fn summary(checks: &[PowerCheck]) -> String {
    checks
        .iter()
        .map(|c| format!("m={}: {:?} ({}x{} vs {}x{})", c.m, c.verdict, c.size_a, c.size_a, c.size_b, c.size_b))
        .collect::<Vec<_>>()
        .join(", ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix;

    #[test]
    fn stabilization_examples() {
        let id = IntMatrix::identity(3);
        assert_eq!(stabilization_index(&id).unwrap().value, 1);
        let a1 = matrix![[2, 0, 4], [1, 2, 0], [1, 2, 0]];
        let s = stabilization_index(&a1).unwrap();
        assert_eq!(s.value, 2);
        assert_eq!(s.rank_sequence, vec![2, 1, 1]);
        let s = stabilization_index(&matrix![[1, 1], [2, 0]]).unwrap();
        assert_eq!((s.value, s.rank_sequence), (1, vec![2, 2]));
    }

    #[test]
    fn higher_power_examples() {
        let a1 = matrix![[2, 0, 4], [1, 2, 0], [1, 2, 0]];
        let yes =
            decide_conjugate_higher_powers(&a1, &matrix![[4]], EventualOptions::default()).unwrap().yes().unwrap();
        assert_eq!(yes.n, 2);
        assert_eq!(yes.at_n.trace_a.final_matrix, matrix![[16]]);
        assert_eq!(yes.at_n1.trace_a.final_matrix, matrix![[64]]);

        let a = matrix![[0, 2, 2], [1, 0, 0], [1, 0, 0]];
        let b = matrix![[0, 3, 1], [1, 0, 0], [1, 0, 0]];
        let no = decide_conjugate_higher_powers(&a, &b, EventualOptions::default()).unwrap().no().unwrap();
        assert_eq!(no.reason, "size");
        assert_eq!((no.sizes_a, no.sizes_b), ([2, 2], [3, 3]));

        assert!(decide_conjugate_higher_powers(&a, &a, EventualOptions::default()).unwrap().is_yes());
    }
}
