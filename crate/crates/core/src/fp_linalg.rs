//! Dense linear algebra over a prime field F_p.
//!
//! Matrices are stored row-major in one contiguous buffer. Elimination is
//! modular throughout; large eliminations fan out over rows when the
//! execution mode allows it.

use crate::par::Exec;

pub type FpVector = Vec<u32>;

/// Row count times column count above which elimination goes parallel.
const PAR_THRESHOLD: usize = 1 << 15;

#[inline]
pub fn fp_add(a: u32, b: u32, p: u32) -> u32 {
    let s = a as u64 + b as u64;
    (s % p as u64) as u32
}

#[inline]
pub fn fp_sub(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 + p as u64 - b as u64) % p as u64) as u32
}

#[inline]
pub fn fp_mul(a: u32, b: u32, p: u32) -> u32 {
    (a as u64 * b as u64 % p as u64) as u32
}

#[inline]
pub fn fp_neg(a: u32, p: u32) -> u32 {
    if a == 0 {
        0
    } else {
        p - a
    }
}

pub fn fp_inv(a: u32, p: u32) -> u32 {
    assert!(!a.is_multiple_of(p), "zero has no inverse");
    crate::util::pow_mod(a as u64, p as u64 - 2, p as u64) as u32
}

/// Reduce a signed integer into [0, p).
#[inline]
pub fn fp_from_i64(a: i64, p: u32) -> u32 {
    a.rem_euclid(p as i64) as u32
}

/// `acc += f * v` entrywise.
#[inline]
pub fn axpy(acc: &mut [u32], f: u32, v: &[u32], p: u32) {
    if f == 0 {
        return;
    }
    let (p64, f64) = (p as u64, f as u64);
    for (a, &b) in acc.iter_mut().zip(v) {
        *a = ((*a as u64 + f64 * b as u64) % p64) as u32;
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpMatrix {
    p: u32,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl FpMatrix {
    pub fn zeros(p: u32, rows: usize, cols: usize) -> Self {
        FpMatrix { p, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(p: u32, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1 % p;
        }
        m
    }

    /// Build from signed rows, reducing every entry mod p.
    pub fn from_rows(p: u32, rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(p, rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged rows");
            for (j, &v) in r.iter().enumerate() {
                m.data[i * cols + j] = fp_from_i64(v, p);
            }
        }
        m
    }

    pub fn from_data(p: u32, rows: usize, cols: usize, data: Vec<u32>) -> Self {
        assert_eq!(data.len(), rows * cols);
        assert!(data.iter().all(|&x| x < p), "entry not reduced mod p");
        FpMatrix { p, rows, cols, data }
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn data(&self) -> &[u32] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v % self.p;
    }

    /// Add `v` to entry (i, j).
    #[inline]
    pub fn add_to(&mut self, i: usize, j: usize, v: u32) {
        let k = i * self.cols + j;
        self.data[k] = fp_add(self.data[k], v, self.p);
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [u32] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul_vec(&self, v: &[u32]) -> FpVector {
        assert_eq!(v.len(), self.cols);
        let p = self.p as u64;
        (0..self.rows)
            .map(|i| {
                let s = self
                    .row(i)
                    .iter()
                    .zip(v)
                    .fold(0u64, |acc, (&a, &b)| (acc + a as u64 * b as u64) % p);
                s as u32
            })
            .collect()
    }

    pub fn mul(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.cols, other.rows);
        assert_eq!(self.p, other.p);
        let mut out = FpMatrix::zeros(self.p, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a != 0 {
                    let (p, oc) = (self.p, other.cols);
                    axpy(&mut out.data[i * oc..(i + 1) * oc], a, other.row(k), p);
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> FpMatrix {
        let mut t = FpMatrix::zeros(self.p, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    /// Stack `other` below `self`.
    pub fn vstack(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        FpMatrix { p: self.p, rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Reduced row echelon form in place; returns pivot columns.
    pub fn rref_in_place(&mut self, exec: Exec) -> Vec<usize> {
        rref(self.p, self.rows, self.cols, &mut self.data, exec, self.cols)
    }
}

/// Row reduce `data` (rows × cols) considering only the first `pivot_cols`
/// columns as pivot candidates. Returns pivot columns in order.
fn rref(
    p: u32,
    rows: usize,
    cols: usize,
    data: &mut [u32],
    exec: Exec,
    pivot_cols: usize,
) -> Vec<usize> {
    let exec = if rows * cols >= PAR_THRESHOLD { exec } else { Exec::Sequential };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..pivot_cols {
        if r == rows {
            break;
        }
        let Some(i) = (r..rows).find(|&i| data[i * cols + c] != 0) else {
            continue;
        };
        if i != r {
            for j in c..cols {
                data.swap(i * cols + j, r * cols + j);
            }
        }
        let inv = fp_inv(data[r * cols + c], p);
        for x in &mut data[r * cols + c..(r + 1) * cols] {
            *x = fp_mul(*x, inv, p);
        }
        let prow: Vec<u32> = data[r * cols + c..(r + 1) * cols].to_vec();
        exec.for_each_chunk_mut(data, cols, |i, row| {
            if i == r {
                return;
            }
            let f = row[c];
            if f != 0 {
                axpy(&mut row[c..], p - f, &prow, p);
            }
        });
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &FpMatrix) -> usize {
    rank_with(m, Exec::default())
}

pub fn rank_with(m: &FpMatrix, exec: Exec) -> usize {
    // Eliminate along the shorter side.
    if m.rows < m.cols {
        let mut t = m.transpose();
        return t.rref_in_place(exec).len();
    }
    let mut a = m.clone();
    a.rref_in_place(exec).len()
}

pub fn kernel_basis(m: &FpMatrix) -> Vec<FpVector> {
    kernel_basis_with(m, Exec::default())
}

pub fn kernel_basis_with(m: &FpMatrix, exec: Exec) -> Vec<FpVector> {
    let p = m.p;
    let mut a = m.clone();
    let pivots = a.rref_in_place(exec);
    let mut is_pivot = vec![None; m.cols];
    for (r, &c) in pivots.iter().enumerate() {
        is_pivot[c] = Some(r);
    }
    (0..m.cols)
        .filter(|&f| is_pivot[f].is_none())
        .map(|f| {
            let mut v = vec![0u32; m.cols];
            v[f] = 1 % p;
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = fp_neg(a.get(r, f), p);
            }
            v
        })
        .collect()
}

pub fn solve(m: &FpMatrix, b: &[u32]) -> Option<FpVector> {
    solve_with(m, b, Exec::default())
}

pub fn solve_with(m: &FpMatrix, b: &[u32], exec: Exec) -> Option<FpVector> {
    assert_eq!(b.len(), m.rows, "right-hand side length must equal row count");
    let (p, rows, cols) = (m.p, m.rows, m.cols);
    let w = cols + 1;
    let mut data = vec![0u32; rows * w];
    for i in 0..rows {
        data[i * w..i * w + cols].copy_from_slice(m.row(i));
        data[i * w + cols] = b[i] % p;
    }
    let pivots = rref(p, rows, w, &mut data, exec, cols);
    let r = pivots.len();
    if (r..rows).any(|i| data[i * w + cols] != 0) {
        return None;
    }
    let mut x = vec![0u32; cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = data[i * w + cols];
    }
    Some(x)
}

/// Incrementally built semi-echelon basis of a subspace of F_p^len.
///
/// Reduction against the stored vectors, in insertion order, leaves a residual
/// that vanishes at every pivot column; the residual is therefore a canonical
/// representative of the coset `v + span`. Optionally each stored vector keeps
/// its expression in the inserted generators so membership comes with a witness.
#[derive(Debug, Clone)]
pub struct SpanBasis {
    p: u32,
    len: usize,
    track: bool,
    generators: usize,
    basis: Vec<(usize, FpVector, FpVector)>,
}

impl SpanBasis {
    pub fn new(p: u32, len: usize, track: bool) -> Self {
        SpanBasis { p, len, track, generators: 0, basis: Vec::new() }
    }

    /// Span of the columns of `m`, tracking expressions in those columns.
    pub fn from_columns(m: &FpMatrix, track: bool) -> Self {
        let t = m.transpose();
        let mut s = SpanBasis::new(m.p, m.rows, track);
        if track {
            s.generators = m.cols;
        }
        for j in 0..m.cols {
            s.insert_indexed(t.row(j).to_vec(), j);
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient(&self) -> usize {
        self.len
    }

    /// Insert a vector; returns true if it enlarged the span.
    pub fn insert(&mut self, v: FpVector) -> bool {
        let idx = self.generators;
        self.generators += 1;
        self.insert_indexed(v, idx)
    }

    fn insert_indexed(&mut self, v: FpVector, idx: usize) -> bool {
        assert_eq!(v.len(), self.len);
        let mut coeff = if self.track {
            let mut c = vec![0u32; self.generators.max(idx + 1)];
            c[idx] = 1;
            c
        } else {
            Vec::new()
        };
        let res = self.reduce_tracking(v, &mut coeff);
        let Some(piv) = res.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = fp_inv(res[piv], self.p);
        let res: FpVector = res.iter().map(|&x| fp_mul(x, inv, self.p)).collect();
        for c in &mut coeff {
            *c = fp_mul(*c, inv, self.p);
        }
        self.basis.push((piv, res, coeff));
        true
    }

    /// `coeff` accumulates the generator combination `g` with `v = residual + Σ g_i gen_i`
    /// when it starts as the zero vector; with `coeff = e_idx` it tracks `residual`.
    fn reduce_tracking(&self, mut v: FpVector, coeff: &mut FpVector) -> FpVector {
        let p = self.p;
        for (piv, b, c) in &self.basis {
            let f = v[*piv];
            if f != 0 {
                axpy(&mut v, p - f, b, p);
                if self.track {
                    if coeff.len() < c.len() {
                        coeff.resize(c.len(), 0);
                    }
                    axpy(&mut coeff[..c.len()], p - f, c, p);
                }
            }
        }
        v
    }

    /// Canonical coset representative of `v` modulo the span.
    pub fn reduce(&self, v: &[u32]) -> FpVector {
        let p = self.p;
        let mut v = v.to_vec();
        for (piv, b, _) in &self.basis {
            let f = v[*piv];
            if f != 0 {
                axpy(&mut v, p - f, b, p);
            }
        }
        v
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Coefficients `c` on the inserted generators with `Σ c_i gen_i = v`,
    /// if `v` lies in the span. Requires tracking.
    pub fn express(&self, v: &[u32]) -> Option<FpVector> {
        assert!(self.track, "express needs a tracking basis");
        let mut coeff = vec![0u32; self.generators];
        let res = self.reduce_tracking(v.to_vec(), &mut coeff);
        if res.iter().any(|&x| x != 0) {
            return None;
        }
        // reduce_tracking subtracted Σ f·c; v = Σ f·b = Σ f·(Σ c gens).
        Some(coeff.iter().map(|&x| fp_neg(x, self.p)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(rng: &mut ChaCha8Rng, p: u32, r: usize, c: usize) -> FpMatrix {
        let data = (0..r * c).map(|_| rng.gen_range(0..p)).collect();
        FpMatrix::from_data(p, r, c, data)
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&FpMatrix::identity(3, 3)), 3);
        assert_eq!(rank(&FpMatrix::zeros(5, 4, 2)), 0);
        assert_eq!(rank(&FpMatrix::from_rows(5, &[vec![1, 2], vec![2, 4]])), 1);
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel_basis(&FpMatrix::identity(7, 4)).is_empty());
        let k = kernel_basis(&FpMatrix::zeros(7, 3, 3));
        assert_eq!(k, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        let m = FpMatrix::from_rows(5, &[vec![1, 2], vec![2, 4]]);
        let k = kernel_basis(&m);
        assert_eq!(k.len(), 1);
        assert!(k[0].iter().any(|&x| x != 0));
        assert_eq!(m.mul_vec(&k[0]), vec![0, 0]);
    }

    #[test]
    fn solve_examples() {
        let b = vec![2, 0, 1];
        assert_eq!(solve(&FpMatrix::identity(3, 3), &b), Some(b.clone()));
        assert_eq!(solve(&FpMatrix::zeros(3, 3, 3), &b), None);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut m = random_matrix(&mut rng, 3, 10, 10);
        while rank(&m) < 10 {
            m = random_matrix(&mut rng, 3, 10, 10);
        }
        let x0: Vec<u32> = (0..10).map(|_| rng.gen_range(0..3)).collect();
        let b = m.mul_vec(&x0);
        let x = solve(&m, &b).unwrap();
        assert_eq!(m.mul_vec(&x), b);
    }

    #[test]
    fn parallel_and_sequential_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let m = random_matrix(&mut rng, 7, 300, 200);
        assert_eq!(rank_with(&m, Exec::Sequential), rank_with(&m, Exec::Parallel));
        let mut a = m.clone();
        let mut b = m.clone();
        a.rref_in_place(Exec::Sequential);
        b.rref_in_place(Exec::Parallel);
        assert_eq!(a, b);
    }

    #[test]
    fn span_basis_witness() {
        let m = FpMatrix::from_rows(3, &[vec![1, 0, 1], vec![0, 1, 1], vec![1, 1, 2]]);
        let s = SpanBasis::from_columns(&m, true);
        assert_eq!(s.dim(), 2);
        let v = m.mul_vec(&[2, 1, 0]);
        let c = s.express(&v).unwrap();
        assert_eq!(m.mul_vec(&c), v);
        assert!(s.express(&[1, 0, 0]).is_none());
        let r = s.reduce(&[1, 0, 0]);
        assert_eq!(s.reduce(&r), r);
    }

    fn arb_matrix() -> impl Strategy<Value = FpMatrix> {
        (prop::sample::select(vec![3u32, 5, 7]), 1usize..9, 1usize..9).prop_flat_map(|(p, r, c)| {
            prop::collection::vec(0..p, r * c).prop_map(move |d| FpMatrix::from_data(p, r, c, d))
        })
    }

    proptest! {
        #[test]
        fn kernel_vectors_are_killed(m in arb_matrix()) {
            let k = kernel_basis(&m);
            for v in &k {
                prop_assert!(m.mul_vec(v).iter().all(|&x| x == 0));
            }
            prop_assert_eq!(rank(&m) + k.len(), m.cols());
            prop_assert!(rank(&m) <= m.rows().min(m.cols()));
        }

        #[test]
        fn solve_round_trip(m in arb_matrix(), seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let x: Vec<u32> = (0..m.cols()).map(|_| rng.gen_range(0..m.p())).collect();
            let b = m.mul_vec(&x);
            let y = solve(&m, &b).expect("b is in the image");
            prop_assert_eq!(m.mul_vec(&y), b);
        }

        #[test]
        fn span_reduce_is_canonical(m in arb_matrix(), seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let s = SpanBasis::from_columns(&m, true);
            prop_assert_eq!(s.dim(), rank(&m));
            let v: Vec<u32> = (0..m.rows()).map(|_| rng.gen_range(0..m.p())).collect();
            let x: Vec<u32> = (0..m.cols()).map(|_| rng.gen_range(0..m.p())).collect();
            let shifted: Vec<u32> = v.iter().zip(m.mul_vec(&x)).map(|(&a, b)| fp_add(a, b, m.p())).collect();
            prop_assert_eq!(s.reduce(&v), s.reduce(&shifted));
        }
    }
}
