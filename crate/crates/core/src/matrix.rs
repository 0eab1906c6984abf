//! Exact integer matrices and the graph-theoretic tests built on them.
//!
//! Entry `(i, j)` counts the edges from vertex `i` to vertex `j`.

use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{dim_err, Error, Result};
use crate::json;

/// Dense matrix of arbitrary-precision integers, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

/// Builds an [`IntMatrix`] from nested integer literals, panicking on ragged input.
#[macro_export]
macro_rules! matrix {
    ($([$($x:expr),* $(,)?]),+ $(,)?) => {
        $crate::matrix::IntMatrix::from_rows(vec![$(vec![$(($x) as i64),*]),+])
            .expect("matrix! literal must be rectangular and nonempty")
    };
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Empty);
        }
        if data.len() != rows * cols {
            return Err(dim_err("IntMatrix::new", format!("{rows}x{cols}"), data.len()));
        }
        Ok(IntMatrix { rows, cols, data })
    }

    pub fn from_rows<T: Into<BigInt>>(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r == 0 || c == 0 {
            return Err(Error::Empty);
        }
        let mut data = Vec::with_capacity(r * c);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != c {
                return Err(Error::Ragged { row: i, found: row.len(), expected: c });
            }
            data.extend(row.into_iter().map(Into::into));
        }
        Ok(IntMatrix { rows: r, cols: c, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Permutation matrix `P` with `P[i][perm[i]] = 1`.
    pub fn permutation(perm: &[usize]) -> Self {
        let n = perm.len();
        let mut m = Self::zeros(n, n);
        for (i, &j) in perm.iter().enumerate() {
            m.data[i * n + j] = BigInt::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Side length of a square matrix (the number of vertices).
    pub fn dim(&self) -> usize {
        self.rows
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: impl Into<BigInt>) {
        self.data[i * self.cols + j] = v.into();
    }

    pub(crate) fn get_mut(&mut self, i: usize, j: usize) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }

    /// Small entries as `u64`; `None` if any entry is negative or too large.
    pub fn entry_u64(&self, i: usize, j: usize) -> Option<u64> {
        self.get(i, j).to_u64()
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    pub fn is_nonnegative(&self) -> bool {
        self.data.iter().all(|x| !x.is_negative())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Rejects negative entries, reporting the first one found.
    pub fn check_adjacency(&self) -> Result<()> {
        match self.data.iter().position(Signed::is_negative) {
            None => Ok(()),
            Some(k) => {
                Err(Error::NegativeEntry { row: k / self.cols, col: k % self.cols, value: self.data[k].to_string() })
            }
        }
    }

    pub(crate) fn require_square(&self, op: &'static str) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NotSquare { op, rows: self.rows, cols: self.cols })
        }
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        IntMatrix { rows: self.cols, cols: self.rows, data }
    }

    pub fn checked_mul(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != rhs.rows {
            return Err(dim_err(
                "matrix product",
                format!("{}x{}", self.rows, self.cols),
                format!("{}x{}", rhs.rows, rhs.cols),
            ));
        }
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        *out.get_mut(i, j) += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn checked_sub(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        if self.shape() != rhs.shape() {
            return Err(dim_err("matrix difference", self.shape_str(), rhs.shape_str()));
        }
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect();
        Ok(IntMatrix { rows: self.rows, cols: self.cols, data })
    }

    pub(crate) fn shape_str(&self) -> String {
        format!("{}x{}", self.rows, self.cols)
    }

    /// `Id - A` for square `A`.
    pub fn id_minus(&self) -> Result<IntMatrix> {
        self.require_square("id_minus")?;
        IntMatrix::identity(self.rows).checked_sub(self)
    }

    /// Relabels vertices: the result `B` satisfies `B[perm[i]][perm[j]] = A[i][j]`.
    pub fn relabel(&self, perm: &[usize]) -> IntMatrix {
        assert!(self.is_square() && perm.len() == self.rows);
        let n = self.rows;
        let mut out = IntMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out.data[perm[i] * n + perm[j]] = self.get(i, j).clone();
            }
        }
        out
    }

    pub fn row_sums(&self) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.row(i).iter().sum()).collect()
    }

    pub fn total(&self) -> BigInt {
        self.data.iter().sum()
    }

    pub fn trace(&self) -> BigInt {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).sum()
    }

    /// Boolean support: `true` where the entry is nonzero.
    pub(crate) fn support(&self) -> Vec<Vec<bool>> {
        (0..self.rows).map(|i| self.row(i).iter().map(|x| !x.is_zero()).collect()).collect()
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;

    /// Panics on a dimension mismatch; use [`IntMatrix::checked_mul`] otherwise.
    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        self.checked_mul(rhs).expect("matrix product dimension mismatch")
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        json::matrix_to_value(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        json::matrix_from_value(&v).map_err(serde::de::Error::custom)
    }
}

/// `A^m`, with `A^0` the identity.
pub fn power(a: &IntMatrix, m: u32) -> Result<IntMatrix> {
    a.require_square("power")?;
    let mut result = IntMatrix::identity(a.rows);
    let mut base = a.clone();
    let mut e = m;
    while e > 0 {
        if e & 1 == 1 {
            result = &result * &base;
        }
        e >>= 1;
        if e > 0 {
            base = &base * &base;
        }
    }
    Ok(result)
}

/// Fraction-free (Bareiss) forward elimination. Returns the rank and, for a
/// square input, the determinant.
fn bareiss(a: &IntMatrix) -> (usize, BigInt) {
    let (n, m) = a.shape();
    let mut w: Vec<Vec<BigInt>> = a.to_rows();
    let mut prev = BigInt::one();
    let mut rank = 0;
    let mut sign = 1;
    for col in 0..m {
        if rank == n {
            break;
        }
        let Some(p) = (rank..n).find(|&r| !w[r][col].is_zero()) else {
            continue;
        };
        if p != rank {
            w.swap(p, rank);
            sign = -sign;
        }
        for r in rank + 1..n {
            for c in col + 1..m {
                let v = &w[rank][col] * &w[r][c] - &w[r][col] * &w[rank][c];
                w[r][c] = v / &prev;
            }
            w[r][col] = BigInt::zero();
        }
        prev = w[rank][col].clone();
        rank += 1;
    }
    let det = if n == m && rank == n { prev * sign } else { BigInt::zero() };
    (rank, det)
}

/// Rank over the rationals.
pub fn rank_over_rationals(a: &IntMatrix) -> usize {
    bareiss(a).0
}

pub fn determinant(a: &IntMatrix) -> Result<BigInt> {
    a.require_square("determinant")?;
    Ok(bareiss(a).1)
}

/// Structural classification of the graph with adjacency matrix `A`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GraphClass {
    pub irreducible: bool,
    pub primitive: bool,
    /// Period of an irreducible matrix. For a reducible one, the gcd of the
    /// periods of its strongly connected components that carry a cycle (1 if
    /// there are none).
    pub period: u64,
    pub permutation: bool,
    pub has_zero_row: bool,
    pub has_zero_column: bool,
}

/// Transitive closure: `reach[i][j]` iff there is a path of length >= 1 from i to j.
fn reachability(adj: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let n = adj.len();
    let mut reach = adj.to_vec();
    for k in 0..n {
        for i in 0..n {
            if reach[i][k] {
                for j in 0..n {
                    if reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
    }
    reach
}

/// gcd of cycle lengths inside the vertex set `comp` (assumed strongly connected).
fn component_period(adj: &[Vec<bool>], comp: &[usize]) -> u64 {
    let n = adj.len();
    let mut inside = vec![false; n];
    for &v in comp {
        inside[v] = true;
    }
    let mut level = vec![usize::MAX; n];
    level[comp[0]] = 0;
    let mut queue = std::collections::VecDeque::from([comp[0]]);
    while let Some(u) = queue.pop_front() {
        for v in 0..n {
            if adj[u][v] && inside[v] && level[v] == usize::MAX {
                level[v] = level[u] + 1;
                queue.push_back(v);
            }
        }
    }
    let mut g = 0u64;
    for &u in comp {
        for &v in comp {
            if adj[u][v] {
                let d = (level[u] as i64 + 1 - level[v] as i64).unsigned_abs();
                g = g.gcd(&d);
            }
        }
    }
    g
}

pub fn classify_graph(a: &IntMatrix) -> Result<GraphClass> {
    a.require_square("classify_graph")?;
    let n = a.dim();
    let adj = a.support();
    let reach = reachability(&adj);
    let irreducible = (0..n).all(|i| (0..n).all(|j| reach[i][j]));

    let mut assigned = vec![false; n];
    let mut period = 0u64;
    for v in 0..n {
        if assigned[v] || !reach[v][v] {
            continue;
        }
        let comp: Vec<usize> = (0..n).filter(|&u| u == v || (reach[v][u] && reach[u][v])).collect();
        for &u in &comp {
            assigned[u] = true;
        }
        period = period.gcd(&component_period(&adj, &comp));
    }
    if period == 0 {
        period = 1;
    }

    let one = BigInt::one();
    let row_sums = a.row_sums();
    let col_sums: Vec<BigInt> = (0..n).map(|j| a.col(j).iter().sum()).collect();
    let permutation = row_sums.iter().all(|s| *s == one) && col_sums.iter().all(|s| *s == one);

    Ok(GraphClass {
        irreducible,
        primitive: irreducible && period == 1,
        period,
        permutation,
        has_zero_row: row_sums.iter().any(Zero::is_zero),
        has_zero_column: col_sums.iter().any(Zero::is_zero),
    })
}

/// Primitivity via Wielandt's bound: `A^((n-1)^2+1)` entrywise positive.
pub fn is_primitive_by_power(a: &IntMatrix) -> Result<bool> {
    a.require_square("is_primitive_by_power")?;
    let n = a.dim();
    let adj = a.support();
    let bool_mul = |x: &[Vec<bool>], y: &[Vec<bool>]| -> Vec<Vec<bool>> {
        (0..n).map(|i| (0..n).map(|j| (0..n).any(|k| x[i][k] && y[k][j])).collect()).collect()
    };
    let mut e = (n - 1) * (n - 1) + 1;
    let mut result: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| i == j).collect()).collect();
    let mut base = adj;
    while e > 0 {
        if e & 1 == 1 {
            result = bool_mul(&result, &base);
        }
        e >>= 1;
        if e > 0 {
            base = bool_mul(&base, &base);
        }
    }
    Ok(result.iter().all(|r| r.iter().all(|&b| b)))
}

/// Integer polynomial with coefficients in ascending degree order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    coeffs: Vec<BigInt>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(BigInt::zero());
        }
        Polynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + BigRational::from_integer(c.clone()))
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() && !(k == 0 && first) {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = !mag.is_one() || k == 0;
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match k {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{k}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        json::bigints_to_value(&self.coeffs).serialize(s)
    }
}

/// Characteristic polynomial `det(xI - A)` by Faddeev-LeVerrier. Every
/// division in the recurrence is exact over the integers.
pub fn char_poly(a: &IntMatrix) -> Result<Polynomial> {
    a.require_square("char_poly")?;
    let n = a.dim();
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::one();
    let mut m = IntMatrix::zeros(n, n);
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        m = a * &m;
        for i in 0..n {
            *m.get_mut(i, i) += &coeffs[n - k + 1];
        }
        let am = a * &m;
        let tr = am.trace();
        let c = -(tr / BigInt::from(k));
        coeffs[n - k] = c;
    }
    Ok(Polynomial::new(coeffs))
}

/// Topological entropy of the edge shift: `log` of the Perron value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Entropy {
    pub value: f64,
    pub perron: f64,
    /// Set when the Perron value is zero (nilpotent or zero matrix); the
    /// value is then reported as 0.
    pub degenerate: bool,
}

/// Absolute tolerance on the Perron value.
pub const PERRON_TOLERANCE: f64 = 1e-12;

fn rat_poly(p: &Polynomial) -> Vec<BigRational> {
    p.coeffs().iter().map(|c| BigRational::from_integer(c.clone())).collect()
}

fn rp_trim(p: &mut Vec<BigRational>) {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn rp_rem(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut r = a.to_vec();
    rp_trim(&mut r);
    let db = b.len() - 1;
    let lead = b[db].clone();
    // r is never empty; a zero remainder is represented as [0]
    while r.len() > db && !(r.len() == 1 && r[0].is_zero()) {
        let shift = r.len() - 1 - db;
        let q = r.last().unwrap().clone() / &lead;
        for (i, bc) in b.iter().enumerate() {
            r[shift + i] -= &q * bc;
        }
        r.pop();
        if r.is_empty() {
            r.push(BigRational::zero());
        }
        rp_trim(&mut r);
    }
    r
}

fn rp_eval(p: &[BigRational], x: &BigRational) -> BigRational {
    p.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
}

fn sturm_chain(p: &Polynomial) -> Vec<Vec<BigRational>> {
    let p0 = rat_poly(p);
    let p1: Vec<BigRational> =
        p0.iter().enumerate().skip(1).map(|(k, c)| c * BigRational::from_integer(BigInt::from(k))).collect();
    let mut chain = vec![p0, p1];
    loop {
        let n = chain.len();
        let r = rp_rem(&chain[n - 2], &chain[n - 1]);
        if r.len() == 1 && r[0].is_zero() {
            break;
        }
        chain.push(r.into_iter().map(|c| -c).collect());
        if chain.last().unwrap().len() == 1 {
            break;
        }
    }
    chain
}

fn sign_changes(chain: &[Vec<BigRational>], x: &BigRational) -> usize {
    let signs: Vec<bool> =
        chain.iter().map(|p| rp_eval(p, x)).filter(|v| !v.is_zero()).map(|v| v.is_positive()).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Entropy of the edge shift of a nonnegative square matrix.
///
/// The Perron value is isolated as the largest real root of the
/// characteristic polynomial by exact Sturm-sequence bisection on
/// `[0, max row sum + 1]`.
pub fn entropy(a: &IntMatrix) -> Result<Entropy> {
    a.require_square("entropy")?;
    a.check_adjacency()?;
    let p = char_poly(a)?;
    // Strip the x^k factor; a nonnegative matrix with no nonzero
    // eigenvalue is nilpotent.
    let zeros = p.coeffs().iter().take_while(|c| c.is_zero()).count();
    let q = Polynomial::new(p.coeffs()[zeros..].to_vec());
    if q.degree() == 0 {
        return Ok(Entropy { value: 0.0, perron: 0.0, degenerate: true });
    }
    let max_row = a.row_sums().into_iter().max().unwrap();
    let chain = sturm_chain(&q);
    let mut lo = BigRational::zero();
    let mut hi = BigRational::from_integer(max_row + 1);
    let v_hi = sign_changes(&chain, &hi);
    let tol = BigRational::new(BigInt::one(), BigInt::from(1u64 << 50));
    let two = BigRational::from_integer(BigInt::from(2));
    while &hi - &lo > tol {
        let mid = (&lo + &hi) / &two;
        if q.eval_rational(&mid).is_zero() || sign_changes(&chain, &mid) > v_hi {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let rho = ((&lo + &hi) / two).to_f64().unwrap_or(f64::NAN);
    Ok(Entropy { value: rho.ln(), perron: rho, degenerate: false })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn power_examples() {
        let a = matrix![[1, 1], [2, 0]];
        assert_eq!(power(&a, 0).unwrap(), IntMatrix::identity(2));
        assert_eq!(power(&a, 2).unwrap(), matrix![[3, 1], [2, 2]]);
        let a1 = matrix![[2, 0, 4], [1, 2, 0], [1, 2, 0]];
        assert_eq!(power(&a1, 2).unwrap(), matrix![[8, 8, 8], [4, 4, 4], [4, 4, 4]]);
    }

    #[test]
    fn power_rejects_rectangular() {
        let r = matrix![[1, 2, 3]];
        assert!(matches!(power(&r, 2), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank_over_rationals(&IntMatrix::identity(3)), 3);
        let a1 = matrix![[2, 0, 4], [1, 2, 0], [1, 2, 0]];
        assert_eq!(rank_over_rationals(&a1), 2);
        assert_eq!(rank_over_rationals(&power(&a1, 2).unwrap()), 1);
        assert_eq!(rank_over_rationals(&matrix![[0, 0], [0, 0]]), 0);
        assert_eq!(rank_over_rationals(&matrix![[1, 2, 3], [2, 4, 6]]), 1);
    }

    #[test]
    fn determinant_small() {
        assert_eq!(determinant(&matrix![[0, -1], [-2, 1]]).unwrap(), b(-2));
        assert_eq!(determinant(&matrix![[0, 1], [1, 0]]).unwrap(), b(-1));
        assert_eq!(determinant(&matrix![[1, 2], [2, 4]]).unwrap(), b(0));
    }

    #[test]
    fn classify_examples() {
        let c = classify_graph(&matrix![[0, 2], [2, 0]]).unwrap();
        assert!(c.irreducible && !c.primitive);
        assert_eq!(c.period, 2);
        let c = classify_graph(&matrix![[2, 0], [0, 2]]).unwrap();
        assert!(!c.irreducible && !c.primitive);
        let c = classify_graph(&matrix![[1, 1], [2, 0]]).unwrap();
        assert!(c.primitive && c.irreducible && !c.permutation);
        let c = classify_graph(&matrix![[0, 1], [1, 0]]).unwrap();
        assert!(c.permutation && c.irreducible && c.period == 2);
        let c = classify_graph(&matrix![[0]]).unwrap();
        assert!(!c.irreducible && c.has_zero_row && c.has_zero_column);
    }

    #[test]
    fn char_poly_examples() {
        assert_eq!(char_poly(&matrix![[2]]).unwrap(), Polynomial::from_i64(&[-2, 1]));
        assert_eq!(char_poly(&matrix![[1, 1], [1, 0]]).unwrap(), Polynomial::from_i64(&[-1, -1, 1]));
        assert_eq!(char_poly(&matrix![[1, 1], [1, 0]]).unwrap().to_string(), "x^2 - x - 1");
    }

    #[test]
    fn entropy_examples() {
        let e = entropy(&matrix![[2]]).unwrap();
        assert!((e.value - 2f64.ln()).abs() < 1e-12);
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        let e = entropy(&matrix![[1, 1], [1, 0]]).unwrap();
        assert!((e.value - golden.ln()).abs() < 1e-12);
        let e = entropy(&matrix![[0, 1], [1, 0]]).unwrap();
        assert!(e.value.abs() < 1e-12 && !e.degenerate);
        let e = entropy(&matrix![[0, 0], [0, 0]]).unwrap();
        assert!(e.degenerate && e.value == 0.0);
        let e = entropy(&matrix![[0, 5], [0, 0]]).unwrap();
        assert!(e.degenerate);
    }

    #[test]
    fn entropy_with_integer_perron_value_on_bisection_grid() {
        // Perron value 2 with max row sum 3: the first midpoint of [0, 4] is the root.
        let a = matrix![[1, 1, 1], [1, 1, 0], [0, 0, 0]];
        assert!(char_poly(&a).unwrap().eval(&b(2)).is_zero());
        assert!((entropy(&a).unwrap().perron - 2.0).abs() < 1e-12);
        assert!((entropy(&matrix![[2, 1], [0, 1]]).unwrap().perron - 2.0).abs() < 1e-12);
    }
}
