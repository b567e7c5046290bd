//! Exact integer matrices and the intersection matrix of a weighted graph.
//!
//! Determinants and leading principal minors use fraction-free (Bareiss)
//! elimination over arbitrary-precision integers; no floating point is
//! involved in any verdict.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::graph::{VertexId, WeightedGraph};

/// Dense square integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    n: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(n: usize) -> Self {
        IntMatrix { n, data: vec![0; n * n] }
    }

    /// Panics if the rows do not form a square matrix.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for r in rows {
            assert_eq!(r.len(), n, "matrix must be square");
            data.extend_from_slice(r);
        }
        IntMatrix { n, data }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: i64) {
        self.data[i * self.n + j] = x;
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.data.chunks(self.n.max(1)).take(self.n).map(<[i64]>::to_vec).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    fn big(&self) -> Vec<Vec<BigInt>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| BigInt::from(self.get(i, j))).collect())
            .collect()
    }

    /// Exact determinant by Bareiss elimination with row pivoting.
    pub fn determinant(&self) -> BigInt {
        let n = self.n;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.big();
        let mut prev = BigInt::one();
        let mut negate = false;
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                    Some(r) => {
                        a.swap(k, r);
                        negate = !negate;
                    }
                    None => return BigInt::zero(),
                }
            }
            bareiss_step(&mut a, k, &prev);
            prev = a[k][k].clone();
        }
        let det = a[n - 1][n - 1].clone();
        if negate {
            -det
        } else {
            det
        }
    }

    /// `det(M_k)` for the leading `k x k` blocks, `k = 1..=n`.
    pub fn leading_principal_minors(&self) -> Vec<BigInt> {
        let n = self.n;
        let mut out = Vec::with_capacity(n);
        let mut a = self.big();
        let mut prev = BigInt::one();
        // Without pivoting, the k-th Bareiss pivot is exactly det(M_{k+1}).
        for k in 0..n {
            if a[k][k].is_zero() {
                break;
            }
            out.push(a[k][k].clone());
            if k + 1 < n {
                bareiss_step(&mut a, k, &prev);
                prev = a[k][k].clone();
            }
        }
        // A zero pivot stops the pivot-free recurrence; fall back to direct
        // determinants for the remaining blocks.
        for k in out.len() + 1..=n {
            out.push(self.leading_block(k).determinant());
        }
        out
    }

    fn leading_block(&self, k: usize) -> IntMatrix {
        let mut m = IntMatrix::zeros(k);
        for i in 0..k {
            for j in 0..k {
                m.set(i, j, self.get(i, j));
            }
        }
        m
    }

    /// Sylvester's criterion for negative definiteness:
    /// `(-1)^k det(M_k) > 0` for every `k`. The empty matrix is accepted.
    pub fn is_negative_definite(&self) -> bool {
        let n = self.n;
        if !self.is_symmetric() {
            return false;
        }
        let mut a = self.big();
        let mut prev = BigInt::one();
        for k in 0..n {
            let minor = &a[k][k];
            let ok = if k % 2 == 0 { minor.is_negative() } else { minor.is_positive() };
            if !ok {
                return false;
            }
            if k + 1 < n {
                bareiss_step(&mut a, k, &prev);
                prev = a[k][k].clone();
            }
        }
        true
    }
}

fn bareiss_step(a: &mut [Vec<BigInt>], k: usize, prev: &BigInt) {
    let n = a.len();
    let (head, tail) = a.split_at_mut(k + 1);
    let pivot_row = &head[k];
    let pivot = &pivot_row[k];
    for row in tail.iter_mut() {
        let factor = row[k].clone();
        for j in k + 1..n {
            let v = &row[j] * pivot - &factor * &pivot_row[j];
            row[j] = v / prev;
        }
        row[k] = BigInt::zero();
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.rows().iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            let cells: Vec<String> = row.iter().map(|x| format!("{x:>3}")).collect();
            write!(f, "[{}]", cells.join(" "))?;
        }
        Ok(())
    }
}

/// Intersection matrix of a weighted graph: `-e(v)` on the diagonal, `1`
/// between adjacent vertices, rows ordered by ascending vertex id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionMatrix {
    ordering: Vec<VertexId>,
    matrix: IntMatrix,
}

impl IntersectionMatrix {
    pub fn of(g: &WeightedGraph) -> Self {
        let ordering: Vec<VertexId> = g.vertex_ids().collect();
        let n = ordering.len();
        let mut matrix = IntMatrix::zeros(n);
        for (i, &v) in ordering.iter().enumerate() {
            matrix.set(i, i, -i64::from(g.label(v).unwrap().weight));
            for (j, &w) in ordering.iter().enumerate() {
                if g.has_edge(v, w) {
                    matrix.set(i, j, 1);
                }
            }
        }
        IntersectionMatrix { ordering, matrix }
    }

    pub fn ordering(&self) -> &[VertexId] {
        &self.ordering
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn order(&self) -> usize {
        self.matrix.order()
    }

    pub fn is_negative_definite(&self) -> bool {
        self.matrix.is_negative_definite()
    }

    pub fn determinant(&self) -> BigInt {
        self.matrix.determinant()
    }
}
