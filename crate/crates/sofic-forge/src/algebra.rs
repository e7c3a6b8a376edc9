//! Exact integer linear algebra: adjacency matrices, Smith normal form,
//! the signed Bowen-Franks invariant, Franks' flow-equivalence decision,
//! and entropy via power iteration with a Collatz-Wielandt bracket.
//!
//! All invariant arithmetic is arbitrary precision; floating point appears
//! only in `entropy`. Family sweeps produce large intermediate entries
//! during elimination, so fixed-width integers are not an option.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::graph::LabelledGraph;
use crate::lang::Symbol;
use crate::{Error, Result};

/// A square matrix of arbitrary-precision integers, row major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntMatrix {
    n: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(n: usize) -> Self {
        assert!(n >= 1, "dimension must be at least 1");
        IntMatrix {
            n,
            entries: vec![BigInt::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        IntMatrix {
            n,
            entries: rows.iter().flatten().map(|&x| BigInt::from(x)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn transposed(&self) -> IntMatrix {
        let mut t = IntMatrix::zero(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.n, other.n);
        let mut out = IntMatrix::zero(self.n);
        for i in 0..self.n {
            for k in 0..self.n {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..self.n {
                    let add = &self[(i, k)] * &other[(k, j)];
                    out[(i, j)] += add;
                }
            }
        }
        out
    }

    pub fn sub_from_identity(&self) -> IntMatrix {
        let mut out = IntMatrix::identity(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                let v = self[(i, j)].clone();
                out[(i, j)] -= v;
            }
        }
        out
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        let n = self.n;
        let mut a = self.entries.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n.saturating_sub(1) {
            if a[k * n + k].is_zero() {
                match (k + 1..n).find(|&i| !a[i * n + k].is_zero()) {
                    Some(swap) => {
                        for j in 0..n {
                            a.swap(k * n + j, swap * n + j);
                        }
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &a[i * n + j] * &a[k * n + k] - &a[i * n + k] * &a[k * n + j];
                    a[i * n + j] = num / &prev;
                }
                a[i * n + k] = BigInt::zero();
            }
            prev = a[k * n + k].clone();
        }
        sign * a[(n - 1) * n + (n - 1)].clone()
    }

    /// Support digraph is strongly connected (entry > 0 means edge).
    pub fn is_irreducible(&self) -> bool {
        let n = self.n;
        let adj: Vec<Vec<usize>> = (0..n)
            .map(|i| (0..n).filter(|&j| self[(i, j)].is_positive()).collect())
            .collect();
        let reach = |start: usize, adj: &Vec<Vec<usize>>| -> Vec<bool> {
            let mut seen = vec![false; n];
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(v) = stack.pop() {
                for &w in &adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            seen
        };
        let fwd = reach(0, &adj);
        let radj: Vec<Vec<usize>> = (0..n)
            .map(|i| (0..n).filter(|&j| self[(j, i)].is_positive()).collect())
            .collect();
        let bwd = reach(0, &radj);
        (0..n).all(|v| fwd[v] && bwd[v]) && (0..n).all(|i| !adj[i].is_empty())
    }

    pub fn is_nonnegative(&self) -> bool {
        self.entries.iter().all(|e| !e.is_negative())
    }

    /// Each row and column holds a single 1: the underlying graph is one
    /// cycle, the case Franks' theorem excludes.
    pub fn is_permutation(&self) -> bool {
        let one = BigInt::one();
        (0..self.n).all(|i| {
            self.entries[i * self.n..(i + 1) * self.n]
                .iter()
                .filter(|e| !e.is_zero())
                .collect::<Vec<_>>()
                == vec![&one]
        }) && (0..self.n).all(|j| {
            (0..self.n)
                .filter(|&i| !self[(i, j)].is_zero())
                .count()
                == 1
        })
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.entries[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.entries[i * self.n + j]
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// Integer adjacency matrix of a cover graph in its vertex order, each
/// entry the weight sum over parallel edges. With the fragmentation count
/// of a symbol as its weight this is the adjacency matrix of the
/// fragmented cover's underlying graph.
pub fn adjacency_matrix(
    graph: &LabelledGraph,
    weights: Option<&BTreeMap<Symbol, u64>>,
) -> Result<IntMatrix> {
    let mut m = IntMatrix::zero(graph.vertex_count().max(1));
    for (s, d, l) in graph.edges() {
        let w = match weights {
            None => 1u64,
            Some(map) => *map
                .get(l)
                .ok_or_else(|| Error::MissingWeight(l.token().to_string()))?,
        };
        m[(*s, *d)] += BigInt::from(w);
    }
    Ok(m)
}

/// D = U * M * V with U, V unimodular and the diagonal of D a nonnegative
/// divisibility chain.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SmithDecomposition {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.dim()).map(|i| self.d[(i, i)].clone()).collect()
    }
}

struct SnfWork {
    b: IntMatrix,
    u: IntMatrix,
    v: IntMatrix,
}

impl SnfWork {
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.b.n {
            let tmp = self.b[(i, c)].clone();
            self.b[(i, c)] = self.b[(j, c)].clone();
            self.b[(j, c)] = tmp;
            let tmp = self.u[(i, c)].clone();
            self.u[(i, c)] = self.u[(j, c)].clone();
            self.u[(j, c)] = tmp;
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..self.b.n {
            let tmp = self.b[(r, i)].clone();
            self.b[(r, i)] = self.b[(r, j)].clone();
            self.b[(r, j)] = tmp;
            let tmp = self.v[(r, i)].clone();
            self.v[(r, i)] = self.v[(r, j)].clone();
            self.v[(r, j)] = tmp;
        }
    }

    /// row i += q * row j
    fn add_row(&mut self, i: usize, j: usize, q: &BigInt) {
        for c in 0..self.b.n {
            let add = q * &self.b[(j, c)];
            self.b[(i, c)] += add;
            let add = q * &self.u[(j, c)];
            self.u[(i, c)] += add;
        }
    }

    /// col i += q * col j
    fn add_col(&mut self, i: usize, j: usize, q: &BigInt) {
        for r in 0..self.b.n {
            let add = q * &self.b[(r, j)];
            self.b[(r, i)] += add;
            let add = q * &self.v[(r, j)];
            self.v[(r, i)] += add;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for c in 0..self.b.n {
            let x = -self.b[(i, c)].clone();
            self.b[(i, c)] = x;
            let x = -self.u[(i, c)].clone();
            self.u[(i, c)] = x;
        }
    }
}

/// Deterministic pivoting: the nonzero entry of least absolute value in
/// the working submatrix, ties broken row-major.
fn find_pivot(b: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..b.n {
        for j in t..b.n {
            if b[(i, j)].is_zero() {
                continue;
            }
            match best {
                None => best = Some((i, j)),
                Some(p) => {
                    if b[(i, j)].abs() < b[p].abs() {
                        best = Some((i, j));
                    }
                }
            }
        }
    }
    best
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithDecomposition {
    let n = m.dim();
    let mut w = SnfWork {
        b: m.clone(),
        u: IntMatrix::identity(n),
        v: IntMatrix::identity(n),
    };
    for t in 0..n {
        'pivot: loop {
            let Some((pi, pj)) = find_pivot(&w.b, t) else {
                break;
            };
            w.swap_rows(t, pi);
            w.swap_cols(t, pj);
            // Clear column t with remainder steps; a nonzero remainder
            // becomes the new, strictly smaller pivot.
            for i in t + 1..n {
                if w.b[(i, t)].is_zero() {
                    continue;
                }
                let q = -(&w.b[(i, t)] / &w.b[(t, t)]);
                w.add_row(i, t, &q);
                if !w.b[(i, t)].is_zero() {
                    continue 'pivot;
                }
            }
            for j in t + 1..n {
                if w.b[(t, j)].is_zero() {
                    continue;
                }
                let q = -(&w.b[(t, j)] / &w.b[(t, t)]);
                w.add_col(j, t, &q);
                if !w.b[(t, j)].is_zero() {
                    continue 'pivot;
                }
            }
            break;
        }
    }
    // Nonnegative diagonal.
    for t in 0..n {
        if w.b[(t, t)].is_negative() {
            w.negate_row(t);
        }
    }
    // Divisibility chain: fold each violating pair back into a 2x2 block.
    loop {
        let mut violation = None;
        'scan: for i in 0..n {
            for j in i + 1..n {
                if !w.b[(i, i)].is_zero() && !(&w.b[(j, j)] % &w.b[(i, i)]).is_zero() {
                    violation = Some((i, j));
                    break 'scan;
                }
                if w.b[(i, i)].is_zero() && !w.b[(j, j)].is_zero() {
                    violation = Some((i, j));
                    break 'scan;
                }
            }
        }
        let Some((i, j)) = violation else { break };
        w.add_col(i, j, &BigInt::one());
        // Re-eliminate the 2x2 block at (i,i),(j,i).
        loop {
            if w.b[(j, i)].is_zero() {
                break;
            }
            let q = -(&w.b[(j, i)] / &w.b[(i, i)]);
            if !q.is_zero() {
                w.add_row(j, i, &q);
            }
            if w.b[(j, i)].is_zero() {
                break;
            }
            w.swap_rows(i, j);
        }
        // Row i may now have an entry in column j; clear it.
        if !w.b[(i, j)].is_zero() {
            let q = -(&w.b[(i, j)] / &w.b[(i, i)]);
            if !q.is_zero() {
                w.add_col(j, i, &q);
            }
            if !w.b[(i, j)].is_zero() {
                // Remainder smaller than pivot: swap columns and retry.
                w.swap_cols(i, j);
                continue;
            }
        }
        if w.b[(i, i)].is_negative() {
            w.negate_row(i);
        }
        if w.b[(j, j)].is_negative() {
            w.negate_row(j);
        }
    }
    SmithDecomposition { d: w.b, u: w.u, v: w.v }
}

/// Sign of det(Id - A), the invariant factors of Z^n / Z^n (Id - A)
/// greater than one, and the free rank.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BowenFranksClass {
    pub sign: i8,
    pub torsion: Vec<BigInt>,
    pub free_rank: usize,
}

impl BowenFranksClass {
    pub fn is_cyclic(&self) -> bool {
        self.torsion.len() + self.free_rank <= 1
    }

    pub fn generator_count(&self) -> usize {
        self.torsion.len() + self.free_rank
    }

    pub fn display(&self) -> String {
        let tor: Vec<String> = self.torsion.iter().map(|t| t.to_string()).collect();
        format!(
            "sign={} torsion=[{}] free_rank={}",
            match self.sign {
                1 => "+1",
                0 => "0",
                _ => "-1",
            },
            tor.join(","),
            self.free_rank
        )
    }
}

pub fn signed_bowen_franks(a: &IntMatrix) -> BowenFranksClass {
    let m = a.sub_from_identity();
    let det = m.determinant();
    let snf = smith_normal_form(&m);
    let diag = snf.diagonal();
    debug_assert_eq!(
        diag.iter().fold(BigInt::one(), |acc, d| acc * d).abs(),
        det.abs()
    );
    BowenFranksClass {
        sign: match det.sign() {
            num_bigint::Sign::Plus => 1,
            num_bigint::Sign::NoSign => 0,
            num_bigint::Sign::Minus => -1,
        },
        torsion: diag.iter().filter(|d| d.abs() > BigInt::one()).cloned().collect(),
        free_rank: diag.iter().filter(|d| d.is_zero()).count(),
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum FlowEquivalence {
    Yes,
    No,
    /// One of the shifts is flow equivalent to the trivial shift (its
    /// underlying graph is a single cycle); Franks' theorem does not apply.
    TrivialGuard,
}

/// Franks: irreducible SFTs not flow equivalent to the trivial shift are
/// flow equivalent iff their signed Bowen-Franks groups agree.
pub fn flow_equivalent(a: &IntMatrix, b: &IntMatrix) -> Result<FlowEquivalence> {
    for m in [a, b] {
        if !m.is_nonnegative() {
            return Err(Error::NotNonnegative);
        }
        if !m.is_irreducible() {
            return Err(Error::NotIrreducible);
        }
    }
    if a.is_permutation() || b.is_permutation() {
        return Ok(FlowEquivalence::TrivialGuard);
    }
    let ca = signed_bowen_franks(a);
    let cb = signed_bowen_franks(b);
    Ok(
        if ca.sign == cb.sign && ca.torsion == cb.torsion && ca.free_rank == cb.free_rank {
            FlowEquivalence::Yes
        } else {
            FlowEquivalence::No
        },
    )
}

/// log of the spectral radius with a certified bracket.
#[derive(Clone, Copy, Debug)]
pub struct Entropy {
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
}

/// Power iteration on A + Id (primitive for irreducible A, so the
/// Collatz-Wielandt bracket closes even on periodic graphs), iterated
/// until the bracket is tighter than `tol` on the log scale.
pub fn entropy(a: &IntMatrix, tol: f64) -> Result<Entropy> {
    if !a.is_nonnegative() {
        return Err(Error::NotNonnegative);
    }
    if !a.is_irreducible() {
        return Err(Error::NotIrreducible);
    }
    let n = a.dim();
    let af: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let e: BigInt = a[(i, j)].clone();
                    // entries stay far below 2^53 in practice
                    e.to_string().parse::<f64>().unwrap()
                })
                .collect()
        })
        .collect();
    let mut v = vec![1.0f64; n];
    let mut lower = 0.0f64;
    let mut upper = f64::INFINITY;
    for _ in 0..1_000_000 {
        // w = (A + I) v
        let mut w = vec![0.0f64; n];
        for i in 0..n {
            let mut acc = v[i];
            for j in 0..n {
                acc += af[i][j] * v[j];
            }
            w[i] = acc;
        }
        let mut lo = f64::INFINITY;
        let mut hi = 0.0f64;
        for i in 0..n {
            let r = w[i] / v[i];
            lo = lo.min(r);
            hi = hi.max(r);
        }
        lower = lower.max(lo);
        upper = upper.min(hi);
        let norm = w.iter().cloned().fold(0.0, f64::max);
        for x in &mut w {
            *x /= norm;
        }
        v = w;
        if upper - lower <= tol * (lower - 1.0).max(f64::MIN_POSITIVE) {
            break;
        }
    }
    let lo = (lower - 1.0).max(f64::MIN_POSITIVE).ln();
    let hi = (upper - 1.0).ln();
    Ok(Entropy {
        value: (lo + hi) / 2.0,
        lower: lo,
        upper: hi,
    })
}

/// Invariant factors (> 1 entries plus zero count) of the abelian group
/// with the given cyclic orders; used to normalise closed-form group
/// predictions before comparing them with the pipeline.
pub fn invariant_factors(orders: &[BigInt]) -> Vec<BigInt> {
    if orders.is_empty() {
        return Vec::new();
    }
    let n = orders.len();
    let mut m = IntMatrix::zero(n);
    for (i, d) in orders.iter().enumerate() {
        m[(i, i)] = d.clone();
    }
    smith_normal_form(&m)
        .diagonal()
        .into_iter()
        .filter(|d| d.abs() > BigInt::one() || d.is_zero())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn snf_check(m: &IntMatrix) {
        let snf = smith_normal_form(m);
        assert_eq!(snf.u.mul(m).mul(&snf.v), snf.d, "D = U M V failed for\n{m}");
        assert_eq!(snf.u.determinant().abs(), BigInt::one());
        assert_eq!(snf.v.determinant().abs(), BigInt::one());
        let d = snf.diagonal();
        for i in 0..d.len() {
            assert!(!d[i].is_negative());
            for j in 0..d.len() {
                if i < j {
                    assert!(
                        d[i].is_zero() && d[j].is_zero()
                            || !d[i].is_zero() && (&d[j] % &d[i]).is_zero(),
                        "no divisibility chain: {d:?}"
                    );
                }
            }
        }
        assert_eq!(
            d.iter().fold(BigInt::one(), |a, x| a * x).abs(),
            m.determinant().abs()
        );
    }

    #[test]
    fn snf_already_diagonal() {
        let m = IntMatrix::from_rows(&[vec![2, 0], vec![0, 4]]);
        let snf = smith_normal_form(&m);
        assert_eq!(
            snf.diagonal(),
            vec![BigInt::from(2), BigInt::from(4)]
        );
        snf_check(&m);
    }

    #[test]
    fn snf_fig1_matrix() {
        // Id - A for the {aa, aaa, b} cover eliminates to the identity.
        let m = IntMatrix::from_rows(&[vec![0, -1, 0], vec![0, 0, -1], vec![-1, 0, 1]]);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.diagonal(), vec![BigInt::one(); 3]);
        snf_check(&m);
        assert_eq!(m.determinant(), BigInt::from(-1));
    }

    #[test]
    fn snf_forces_divisibility() {
        // gcd 2 and |det| 12 force diag (2, 6).
        let m = IntMatrix::from_rows(&[vec![4, 2], vec![2, 4]]);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.diagonal(), vec![BigInt::from(2), BigInt::from(6)]);
        snf_check(&m);
    }

    #[test]
    fn snf_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..60 {
            let n = rng.gen_range(1..=5);
            let rows: Vec<Vec<i64>> = (0..n)
                .map(|_| (0..n).map(|_| rng.gen_range(-9..=9)).collect())
                .collect();
            snf_check(&IntMatrix::from_rows(&rows));
        }
    }

    #[test]
    fn snf_invariant_under_unimodular_multiplication() {
        // Random elementary products leave the diagonal unchanged.
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let n = 4;
            let rows: Vec<Vec<i64>> = (0..n)
                .map(|_| (0..n).map(|_| rng.gen_range(-6..=6)).collect())
                .collect();
            let m = IntMatrix::from_rows(&rows);
            let d0 = smith_normal_form(&m).diagonal();
            let mut u = IntMatrix::identity(n);
            let mut v = IntMatrix::identity(n);
            for _ in 0..6 {
                let i = rng.gen_range(0..n);
                let mut j = rng.gen_range(0..n);
                if i == j {
                    j = (j + 1) % n;
                }
                let q = BigInt::from(rng.gen_range(-3..=3i64));
                for c in 0..n {
                    let add = &q * &u[(j, c)].clone();
                    u[(i, c)] += add;
                    let add = &q * &v[(c, i)].clone();
                    v[(c, j)] += add;
                }
            }
            let m2 = u.mul(&m).mul(&v);
            assert_eq!(smith_normal_form(&m2).diagonal(), d0);
        }
    }

    #[test]
    fn bowen_franks_examples() {
        // Full 2-shift.
        let bf = signed_bowen_franks(&IntMatrix::from_rows(&[vec![2]]));
        assert_eq!(bf.sign, -1);
        assert!(bf.torsion.is_empty() && bf.free_rank == 0);
        assert!(bf.is_cyclic());

        // Fig. 1 matrix: det(Id - A) = -1, trivial group.
        let a = IntMatrix::from_rows(&[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 0]]);
        let bf = signed_bowen_franks(&a);
        assert_eq!(bf.sign, -1);
        assert!(bf.torsion.is_empty() && bf.free_rank == 0);
        assert_eq!(a.sub_from_identity().determinant(), BigInt::from(-1));

        // Trivial shift: one fixed point, det(Id - A) = 0.
        let bf = signed_bowen_franks(&IntMatrix::from_rows(&[vec![1]]));
        assert_eq!(bf.sign, 0);
        assert_eq!(bf.free_rank, 1);
    }

    #[test]
    fn bowen_franks_permutation_similarity() {
        let a = IntMatrix::from_rows(&[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 0]]);
        // Conjugate by the cycle (0 1 2).
        let p = IntMatrix::from_rows(&[vec![0, 1, 0], vec![0, 0, 1], vec![1, 0, 0]]);
        let pt = p.transposed();
        let b = p.mul(&a).mul(&pt);
        assert_eq!(signed_bowen_franks(&a), signed_bowen_franks(&b));
    }

    #[test]
    fn flow_equivalence_examples() {
        let fig1 = IntMatrix::from_rows(&[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 0]]);
        let full2 = IntMatrix::from_rows(&[vec![2]]);
        assert_eq!(flow_equivalent(&fig1, &full2).unwrap(), FlowEquivalence::Yes);
        assert_eq!(flow_equivalent(&fig1, &fig1).unwrap(), FlowEquivalence::Yes);

        let cycle = IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(
            flow_equivalent(&cycle, &full2).unwrap(),
            FlowEquivalence::TrivialGuard
        );

        let reducible = IntMatrix::from_rows(&[vec![1, 1], vec![0, 1]]);
        assert_eq!(flow_equivalent(&reducible, &full2), Err(Error::NotIrreducible));
    }

    #[test]
    fn entropy_examples() {
        let e = entropy(&IntMatrix::from_rows(&[vec![2]]), 1e-12).unwrap();
        assert!((e.value - 2.0f64.ln()).abs() < 1e-9);

        // Golden mean shift.
        let phi = (1.0 + 5.0f64.sqrt()) / 2.0;
        let e = entropy(&IntMatrix::from_rows(&[vec![1, 1], vec![1, 0]]), 1e-12).unwrap();
        assert!((e.value - phi.ln()).abs() < 1e-9);
        assert!(e.upper - e.lower <= 1e-9);

        // Single cycle: entropy 0 with an exact bracket.
        let e = entropy(&IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]), 1e-12).unwrap();
        assert_eq!(e.value, 0.0);

        // Invariant under transposition.
        let a = IntMatrix::from_rows(&[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 0]]);
        let e1 = entropy(&a, 1e-11).unwrap();
        let e2 = entropy(&a.transposed(), 1e-11).unwrap();
        assert!((e1.value - e2.value).abs() < 1e-9);
    }

    #[test]
    fn entropy_fig1_characteristic_root() {
        // Independent oracle: bisection on x^3 - 2x^2 + x - 1.
        let f = |x: f64| x * x * x - 2.0 * x * x + x - 1.0;
        let (mut lo, mut hi) = (1.7, 1.8);
        for _ in 0..80 {
            let mid = (lo + hi) / 2.0;
            if f(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let root = (lo + hi) / 2.0;
        let a = IntMatrix::from_rows(&[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 0]]);
        let e = entropy(&a, 1e-12).unwrap();
        assert!((e.value - root.ln()).abs() < 1e-9);
    }

    #[test]
    fn invariant_factor_normalisation() {
        // Z/36 + Z/2 has invariant factors (2, 36).
        let f = invariant_factors(&[BigInt::from(36), BigInt::from(2)]);
        assert_eq!(f, vec![BigInt::from(2), BigInt::from(36)]);
        assert_eq!(invariant_factors(&[BigInt::one()]), Vec::<BigInt>::new());
    }
}
