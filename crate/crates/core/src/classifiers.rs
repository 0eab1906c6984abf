//! Flow equivalence (Bowen-Franks group and sign of `det(Id - A)`) and
//! continuous orbit equivalence (unital Bowen-Franks group and
//! `det(Id - A)`) for irreducible nonpermutation matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::json;
use crate::matrix::{classify_graph, IntMatrix};
use crate::verdict::Verdict;
use crate::zlinalg::{bowen_franks, det_id_minus, unit_class, FGAbelianGroup};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FlowInvariant {
    pub group: FGAbelianGroup,
    pub det_sign: i8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoeInvariant {
    pub group: FGAbelianGroup,
    #[serde(serialize_with = "json::ser_big")]
    pub det: BigInt,
}

pub fn flow_invariant(a: &IntMatrix) -> Result<FlowInvariant> {
    Ok(FlowInvariant { group: bowen_franks(a)?, det_sign: det_id_minus(a)?.1 })
}

pub fn coe_invariant(a: &IntMatrix) -> Result<CoeInvariant> {
    Ok(CoeInvariant { group: unit_class(a)?, det: det_id_minus(a)?.0 })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvariantPair<I> {
    /// For a `No`, which invariant separated the two matrices.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub a: I,
    pub b: I,
}

fn require_classifiable(a: &IntMatrix, which: &str) -> Result<()> {
    a.require_square("classifier")?;
    a.check_adjacency()?;
    let class = classify_graph(a)?;
    if !class.irreducible {
        return Err(Error::Precondition(format!("{which} matrix is not irreducible")));
    }
    if class.permutation {
        return Err(Error::Precondition(format!("{which} matrix is a permutation matrix")));
    }
    Ok(())
}

/// Flow equivalence of irreducible nonpermutation matrices: isomorphic
/// Bowen-Franks groups and equal signs of `det(Id - A)`.
pub fn flow_equivalent(
    a: &IntMatrix,
    b: &IntMatrix,
) -> Result<Verdict<InvariantPair<FlowInvariant>, InvariantPair<FlowInvariant>>> {
    require_classifiable(a, "first")?;
    require_classifiable(b, "second")?;
    let (ia, ib) = (flow_invariant(a)?, flow_invariant(b)?);
    let reason = if !ia.group.isomorphic(&ib.group) {
        Some("bowen_franks")
    } else if ia.det_sign != ib.det_sign {
        Some("det_sign")
    } else {
        None
    };
    Ok(match reason {
        None => Verdict::Yes(InvariantPair { reason: None, a: ia, b: ib }),
        Some(r) => Verdict::No(InvariantPair { reason: Some(r.into()), a: ia, b: ib }),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoeCertificate {
    pub a: CoeInvariant,
    pub b: CoeInvariant,
    pub unital: UnitalCertificate,
}

/// Continuous orbit equivalence: `det(Id - A) = det(Id - B)` and an
/// isomorphism of Bowen-Franks groups carrying `u_A` to `u_B`.
pub fn continuous_orbit_equivalent(
    a: &IntMatrix,
    b: &IntMatrix,
) -> Result<Verdict<CoeCertificate, InvariantPair<CoeInvariant>>> {
    continuous_orbit_equivalent_with(a, b, DEFAULT_NODE_BUDGET)
}

pub fn continuous_orbit_equivalent_with(
    a: &IntMatrix,
    b: &IntMatrix,
    node_budget: u64,
) -> Result<Verdict<CoeCertificate, InvariantPair<CoeInvariant>>> {
    require_classifiable(a, "first")?;
    require_classifiable(b, "second")?;
    let (ia, ib) = (coe_invariant(a)?, coe_invariant(b)?);
    let no = |r: &str, ia: CoeInvariant, ib: CoeInvariant| {
        Ok(Verdict::No(InvariantPair { reason: Some(r.into()), a: ia, b: ib }))
    };
    if ia.det != ib.det {
        return no("det", ia, ib);
    }
    if !ia.group.isomorphic(&ib.group) {
        return no("bowen_franks", ia, ib);
    }
    match unital_bf_isomorphic_with(&ia.group, &ib.group, node_budget)? {
        Verdict::Yes(unital) => Ok(Verdict::Yes(CoeCertificate { a: ia, b: ib, unital })),
        Verdict::No(_) => no("unit_class", ia, ib),
        Verdict::Unknown(r) => Ok(Verdict::Unknown(r)),
    }
}

/// Images of the generators of one primary component under an
/// automorphism, in the Smith coordinates of that component.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimaryAutomorphism {
    pub prime: u64,
    /// Torsion-factor indices forming this component.
    pub factors: Vec<usize>,
    pub exponents: Vec<u32>,
    /// `images[i]` is the image of the i-th generator, one residue modulo
    /// `prime^exponents[j]` per factor j.
    pub images: Vec<Vec<u64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnitalCertificate {
    /// `identical`, `both_zero`, `cyclic_order` or `automorphism`.
    pub method: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub components: Vec<PrimaryAutomorphism>,
}

/// Default bound on the automorphism search.
pub const DEFAULT_NODE_BUDGET: u64 = 2_000_000;

/// Groups above this order are not enumerated.
pub const MAX_ENUMERATED_ORDER: u64 = 1_000_000;

pub fn unital_bf_isomorphic(g: &FGAbelianGroup, h: &FGAbelianGroup) -> Result<Verdict<UnitalCertificate>> {
    unital_bf_isomorphic_with(g, h, DEFAULT_NODE_BUDGET)
}

/// Is there an isomorphism `G -> H` carrying the distinguished element of
/// `G` to that of `H`?
pub fn unital_bf_isomorphic_with(
    g: &FGAbelianGroup,
    h: &FGAbelianGroup,
    node_budget: u64,
) -> Result<Verdict<UnitalCertificate>> {
    let u = g.distinguished.as_ref().ok_or(Error::MissingDistinguished)?;
    let v = h.distinguished.as_ref().ok_or(Error::MissingDistinguished)?;
    let cert = |method: &str| UnitalCertificate { method: method.into(), components: Vec::new() };
    if !g.isomorphic(h) {
        return Ok(Verdict::No("groups are not isomorphic".into()));
    }
    if u == v {
        return Ok(Verdict::Yes(cert("identical")));
    }
    match (g.is_zero_element(u), h.is_zero_element(v)) {
        (true, true) => return Ok(Verdict::Yes(cert("both_zero"))),
        (true, false) | (false, true) => return Ok(Verdict::No("exactly one distinguished element is zero".into())),
        _ => {}
    }
    let (ou, ov) = (g.element_order(u), h.element_order(v));
    if ou != ov {
        return Ok(Verdict::No(format!("distinguished elements have different orders ({ou:?} vs {ov:?})")));
    }
    if g.is_cyclic() {
        return Ok(Verdict::Yes(cert("cyclic_order")));
    }
    if !g.is_finite() {
        return Ok(Verdict::Unknown("unital isomorphism of infinite groups is not decided".into()));
    }
    let order = g.order().expect("finite");
    if order > BigInt::from(MAX_ENUMERATED_ORDER) {
        return Ok(Verdict::Unknown(format!("group order {order} exceeds {MAX_ENUMERATED_ORDER}")));
    }
    let factors: Vec<u64> = g.torsion.iter().map(|d| d.to_u64().expect("bounded by order")).collect();
    let u: Vec<u64> = u.iter().map(|x| x.to_u64().expect("reduced")).collect();
    let v: Vec<u64> = v.iter().map(|x| x.to_u64().expect("reduced")).collect();
    let mut budget = node_budget;
    let mut components = Vec::new();
    for p in primes_dividing(*factors.last().expect("nontrivial")) {
        let comp = PrimaryComponent::new(p, &factors);
        let (up, vp) = (comp.project(&u), comp.project(&v));
        let images = if up == vp {
            Some(comp.identity())
        } else {
            match comp.find_automorphism(&up, &vp, &mut budget) {
                Search::Found(images) => Some(images),
                Search::None => None,
                Search::OutOfBudget => {
                    return Ok(Verdict::Unknown(format!("automorphism search exceeded {node_budget} nodes")));
                }
            }
        };
        match images {
            Some(images) => components.push(PrimaryAutomorphism {
                prime: p,
                factors: comp.factors.clone(),
                exponents: comp.exponents.clone(),
                images,
            }),
            None => return Ok(Verdict::No(format!("no automorphism of the {p}-primary part matches"))),
        }
    }
    Ok(Verdict::Yes(UnitalCertificate { method: "automorphism".into(), components }))
}

fn primes_dividing(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

enum Search {
    Found(Vec<Vec<u64>>),
    None,
    OutOfBudget,
}

/// The p-primary part `Z/p^a_1 + ... + Z/p^a_k` of a finite group.
struct PrimaryComponent {
    p: u64,
    factors: Vec<usize>,
    exponents: Vec<u32>,
    moduli: Vec<u64>,
}

impl PrimaryComponent {
    fn new(p: u64, torsion: &[u64]) -> Self {
        let mut factors = Vec::new();
        let mut exponents = Vec::new();
        for (i, &d) in torsion.iter().enumerate() {
            let (mut d, mut a) = (d, 0);
            while d % p == 0 {
                d /= p;
                a += 1;
            }
            if a > 0 {
                factors.push(i);
                exponents.push(a);
            }
        }
        let moduli = exponents.iter().map(|&a| p.pow(a)).collect();
        PrimaryComponent { p, factors, exponents, moduli }
    }

    fn project(&self, x: &[u64]) -> Vec<u64> {
        self.factors.iter().zip(&self.moduli).map(|(&i, &q)| x[i] % q).collect()
    }

    fn identity(&self) -> Vec<Vec<u64>> {
        let k = self.factors.len();
        (0..k).map(|i| (0..k).map(|j| u64::from(i == j)).collect()).collect()
    }

    /// Candidate images of generator i: elements killed by `p^a_i`.
    fn candidates(&self, i: usize) -> Vec<Vec<u64>> {
        let steps: Vec<(u64, u64)> = (0..self.moduli.len())
            .map(|j| {
                let shift = self.exponents[j].saturating_sub(self.exponents[i]);
                let step = self.p.pow(shift);
                (step, self.moduli[j] / step)
            })
            .collect();
        let mut out = vec![Vec::new()];
        for (step, count) in steps {
            out = out
                .into_iter()
                .flat_map(|prefix: Vec<u64>| {
                    (0..count).map(move |t| {
                        let mut next = prefix.clone();
                        next.push(t * step);
                        next
                    })
                })
                .collect();
        }
        out
    }

    /// Socle coordinates over F_p of `p^(a_i - 1) h`.
    fn socle_row(&self, i: usize, h: &[u64]) -> Vec<u64> {
        let lift = self.p.pow(self.exponents[i] - 1);
        h.iter()
            .zip(&self.moduli)
            .zip(&self.exponents)
            .map(|((&y, &q), &a)| ((y as u128 * lift as u128 % q as u128) as u64 / self.p.pow(a - 1)) % self.p)
            .collect()
    }

    fn find_automorphism(&self, u: &[u64], v: &[u64], budget: &mut u64) -> Search {
        let candidates: Vec<Vec<Vec<u64>>> = (0..self.factors.len()).map(|i| self.candidates(i)).collect();
        let mut chosen = Vec::new();
        let mut socle = Vec::new();
        self.extend(&candidates, u, v, &mut chosen, &mut socle, budget)
    }

    fn extend(
        &self,
        candidates: &[Vec<Vec<u64>>],
        u: &[u64],
        v: &[u64],
        chosen: &mut Vec<Vec<u64>>,
        socle: &mut Vec<Vec<u64>>,
        budget: &mut u64,
    ) -> Search {
        let i = chosen.len();
        if i == candidates.len() {
            let image: Vec<u64> = (0..self.moduli.len())
                .map(|j| {
                    let q = self.moduli[j] as u128;
                    (0..i).fold(0u128, |acc, g| (acc + u[g] as u128 * chosen[g][j] as u128) % q) as u64
                })
                .collect();
            return if image == v { Search::Found(chosen.clone()) } else { Search::None };
        }
        for h in &candidates[i] {
            if *budget == 0 {
                return Search::OutOfBudget;
            }
            *budget -= 1;
            let row = self.socle_row(i, h);
            socle.push(row);
            // injectivity on the socle is injectivity
            if rank_mod_p(socle, self.p) == socle.len() {
                chosen.push(h.clone());
                match self.extend(candidates, u, v, chosen, socle, budget) {
                    Search::None => {}
                    other => return other,
                }
                chosen.pop();
            }
            socle.pop();
        }
        Search::None
    }
}

fn rank_mod_p(rows: &[Vec<u64>], p: u64) -> usize {
    let mut m: Vec<Vec<u64>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(pivot) = (rank..m.len()).find(|&r| !m[r][c].is_multiple_of(p)) else {
            continue;
        };
        m.swap(rank, pivot);
        let inv = mod_inverse(m[rank][c] % p, p);
        for r in 0..m.len() {
            if r != rank && !m[r][c].is_multiple_of(p) {
                let f = m[r][c] * inv % p;
                for k in 0..cols {
                    m[r][k] = (m[r][k] + (p - f) * m[rank][k] % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    let e = BigInt::from(a).extended_gcd(&BigInt::from(p));
    e.x.mod_floor(&BigInt::from(p)).to_u64().expect("residue")
}

/// Aut-orbit test for finite abelian groups through height sequences of
/// the primary parts. Two elements of a finite abelian p-group lie in the
/// same orbit iff the heights of `x, px, p^2 x, ...` agree.
pub fn same_orbit_by_heights(g: &FGAbelianGroup, u: &[BigInt], v: &[BigInt]) -> Option<bool> {
    if !g.is_finite() || g.is_trivial() {
        return g.is_finite().then_some(true);
    }
    let factors: Vec<u64> = g.torsion.iter().map(|d| d.to_u64()).collect::<Option<_>>()?;
    let red = |x: &[BigInt]| -> Option<Vec<u64>> { g.reduce(x.to_vec()).iter().map(ToPrimitive::to_u64).collect() };
    let (u, v) = (red(u)?, red(v)?);
    for p in primes_dividing(*factors.last()?) {
        let comp = PrimaryComponent::new(p, &factors);
        if comp.heights(comp.project(&u)) != comp.heights(comp.project(&v)) {
            return Some(false);
        }
    }
    Some(true)
}

impl PrimaryComponent {
    fn heights(&self, mut x: Vec<u64>) -> Vec<u32> {
        let mut out = Vec::new();
        while x.iter().any(|&c| c != 0) {
            let h = x
                .iter()
                .zip(&self.exponents)
                .filter(|(c, _)| **c != 0)
                .map(|(&c, _)| {
                    let (mut c, mut k) = (c, 0);
                    while c % self.p == 0 {
                        c /= self.p;
                        k += 1;
                    }
                    k
                })
                .min()
                .expect("nonzero");
            out.push(h);
            for (c, q) in x.iter_mut().zip(&self.moduli) {
                *c = *c * self.p % q;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix;
    use num_traits::Zero;

    fn group(torsion: &[u64], u: &[i64]) -> FGAbelianGroup {
        let factors: Vec<BigInt> = torsion.iter().map(|&d| BigInt::from(d)).collect();
        FGAbelianGroup::from_invariant_factors(&factors)
            .with_distinguished(u.iter().map(|&x| BigInt::from(x)).collect())
    }

    #[test]
    fn unital_examples() {
        assert!(unital_bf_isomorphic(&group(&[2], &[0]), &group(&[2], &[1])).unwrap().is_no());
        assert!(unital_bf_isomorphic(&group(&[], &[]), &group(&[], &[])).unwrap().is_yes());
        for k in [1, 2, 4, 5, 7, 98] {
            assert!(unital_bf_isomorphic(&group(&[99], &[1]), &group(&[99], &[k])).unwrap().is_yes());
        }
        assert!(unital_bf_isomorphic(&group(&[99], &[1]), &group(&[99], &[3])).unwrap().is_no());
    }

    #[test]
    fn noncyclic_groups() {
        // Z/2 + Z/4: (1, 0) has height 0 and order 2, (0, 2) has height 1.
        let g = |u: &[i64]| group(&[2, 4], u);
        assert!(unital_bf_isomorphic(&g(&[1, 0]), &g(&[0, 2])).unwrap().is_no());
        assert!(unital_bf_isomorphic(&g(&[1, 2]), &g(&[1, 0])).unwrap().is_yes());
        assert!(unital_bf_isomorphic(&g(&[0, 1]), &g(&[1, 3])).unwrap().is_yes());
        let c = unital_bf_isomorphic(&g(&[0, 1]), &g(&[1, 3])).unwrap().yes().unwrap();
        assert_eq!(c.method, "automorphism");
    }

    #[test]
    fn infinite_groups_beyond_shortcuts_are_unknown() {
        let g = FGAbelianGroup::from_invariant_factors(&[BigInt::from(2), BigInt::zero()]);
        let a = g.clone().with_distinguished(vec![BigInt::from(1), BigInt::from(1)]);
        let b = g.with_distinguished(vec![BigInt::from(0), BigInt::from(1)]);
        assert!(unital_bf_isomorphic(&a, &b).unwrap().is_unknown());
    }

    #[test]
    fn classifier_examples() {
        let two = matrix![[2]];
        let splice = matrix![[2, 1, 0], [1, 1, 1], [0, 1, 1]];
        let golden = matrix![[1, 1], [1, 0]];
        let no = flow_equivalent(&two, &splice).unwrap().no().unwrap();
        assert_eq!(no.reason.as_deref(), Some("det_sign"));
        assert!(flow_equivalent(&two, &golden).unwrap().is_yes());

        let a = matrix![[1, 1, 1], [1, 1, 1], [1, 0, 0]];
        let b = matrix![[1, 1, 1], [1, 1, 0], [1, 1, 0]];
        let no = continuous_orbit_equivalent(&a, &b).unwrap().no().unwrap();
        assert_eq!(no.reason.as_deref(), Some("unit_class"));
        assert!(continuous_orbit_equivalent(&a, &a).unwrap().is_yes());
        assert!(flow_equivalent(&a, &b).unwrap().is_yes());
    }

    #[test]
    fn preconditions() {
        assert!(matches!(flow_equivalent(&matrix![[2, 0], [0, 2]], &matrix![[2]]), Err(Error::Precondition(_))));
        assert!(matches!(flow_equivalent(&matrix![[0, 1], [1, 0]], &matrix![[2]]), Err(Error::Precondition(_))));
    }
}
