use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::util::{is_prime, pow_mod};

/// Largest p for which the period field is built.
pub const MAX_PERIOD_PRIME: u64 = 13;

/// Q₁, the degree-p subfield of Q(μ_{p²}), in the basis
/// b₀ = 1, b_i = η_i (1 ≤ i < p), where η_i = Σ_{h∈H} ζ^{g^i h} for H the
/// order-(p−1) subgroup of (Z/p²)^* and g the smallest primitive root mod p².
///
/// The p periods sum to 0, so η₀ = −(η₁ + … + η_{p−1}).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodField {
    p: u64,
    g: u64,
    /// Ascending coefficients of the monic minimal polynomial of η₀.
    min_poly: Vec<BigInt>,
    /// b_i·b_j = Σ_k mult[i][j][k]·b_k.
    mult: Vec<Vec<Vec<i64>>>,
    eta0: Vec<i64>,
    /// [O_{Q₁} : Z[η₀]].
    index: BigInt,
}

/// Smallest primitive root modulo p² (p an odd prime).
pub fn primitive_root_p2(p: u64) -> u64 {
    let m = p * p;
    let phi = p * (p - 1);
    let factors: Vec<u64> = num_prime::nt_funcs::factorize64(phi).into_keys().collect();
    (2..m)
        .find(|&g| g % p != 0 && factors.iter().all(|&f| pow_mod(g, phi / f, m) != 1))
        .expect("(Z/p²)^* is cyclic")
}

impl PeriodField {
    /// Build (or fetch from the process-wide cache) the period field for p.
    pub fn get(p: u64) -> Result<Arc<PeriodField>> {
        static CACHE: OnceLock<Mutex<HashMap<u64, Arc<PeriodField>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(f) = cache.lock().expect("cache lock").get(&p) {
            return Ok(f.clone());
        }
        let f = Arc::new(build_period_field(p)?);
        cache.lock().expect("cache lock").insert(p, f.clone());
        Ok(f)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.p as usize
    }

    /// The primitive root g fixing the period labels.
    pub fn primitive_root(&self) -> u64 {
        self.g
    }

    pub fn min_poly(&self) -> &[BigInt] {
        &self.min_poly
    }

    pub fn mult_table(&self) -> &[Vec<Vec<i64>>] {
        &self.mult
    }

    /// η₀ in the basis.
    pub fn eta0(&self) -> &[i64] {
        &self.eta0
    }

    pub fn index(&self) -> &BigInt {
        &self.index
    }

    /// σ: ζ ↦ ζ^g on coordinates: b_i ↦ b_{i+1}, b_{p−1} ↦ η₀.
    pub fn sigma_coords<T: Clone>(&self, c: &[T], neg: impl Fn(&T) -> T, sub: impl Fn(&T, &T) -> T) -> Vec<T> {
        let n = self.degree();
        let last = &c[n - 1];
        let mut out = Vec::with_capacity(n);
        out.push(c[0].clone());
        out.push(neg(last));
        for k in 2..n {
            out.push(sub(&c[k - 1], last));
        }
        out
    }

    /// Integer coordinates of a product of integer vectors.
    pub fn mul_int(&self, x: &[BigInt], y: &[BigInt]) -> Vec<BigInt> {
        let n = self.degree();
        let mut out = vec![BigInt::zero(); n];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let xy = xi * yj;
                for (k, &c) in self.mult[i][j].iter().enumerate() {
                    if c != 0 {
                        out[k] += &xy * c;
                    }
                }
            }
        }
        out
    }

    /// Tr_{Q₁/Q} of an element with integer coordinates: only b₀ has nonzero trace.
    pub fn trace_int(&self, x: &[BigInt]) -> BigInt {
        &x[0] * self.p
    }

    /// Coordinates of Π_{h∈H}(1 − ζ^h), the norm of 1 − ζ_{p²} to Q₁.
    pub fn eta1_coords(&self) -> Vec<BigInt> {
        let per = Periods::new(self.p, self.g);
        let mut acc = vec![0i64; per.m];
        acc[0] = 1;
        for &h in &per.orbit[0] {
            let mut factor = vec![0i64; per.m];
            factor[0] += 1;
            factor[h] -= 1;
            acc = per.mul(&acc, &factor);
        }
        per.to_basis(&acc).into_iter().map(BigInt::from).collect()
    }

    /// Coordinates of η₀^k for k = 0..p.
    pub fn eta0_powers(&self) -> Vec<Vec<BigInt>> {
        let n = self.degree();
        let eta: Vec<BigInt> = self.eta0.iter().map(|&c| BigInt::from(c)).collect();
        let mut pows = vec![unit_vector(n, 0)];
        for k in 1..=n {
            let next = self.mul_int(&pows[k - 1], &eta);
            pows.push(next);
        }
        pows
    }
}

fn unit_vector(n: usize, i: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); n];
    v[i] = BigInt::one();
    v
}

/// Group-ring data for Z[C_{p²}] → Z[ζ_{p²}].
struct Periods {
    p: u64,
    m: usize,
    /// orbit[k] = the exponents g^k·H.
    orbit: Vec<Vec<usize>>,
    /// coset[e] = k with e ∈ g^k·H, for units e.
    coset: Vec<Option<usize>>,
}

impl Periods {
    fn new(p: u64, g: u64) -> Self {
        let m = (p * p) as usize;
        let gp = pow_mod(g, p, p * p);
        let h: Vec<u64> = (0..p - 1).map(|k| pow_mod(gp, k, p * p)).collect();
        let orbit: Vec<Vec<usize>> = (0..p)
            .map(|k| {
                let gk = pow_mod(g, k, p * p);
                h.iter().map(|&x| ((gk * x) % (p * p)) as usize).collect()
            })
            .collect();
        let mut coset = vec![None; m];
        for (k, o) in orbit.iter().enumerate() {
            for &e in o {
                coset[e] = Some(k);
            }
        }
        Periods { p, m, orbit, coset }
    }

    fn eta(&self, k: usize) -> Vec<i64> {
        let mut v = vec![0i64; self.m];
        for &e in &self.orbit[k] {
            v[e] += 1;
        }
        v
    }

    fn mul(&self, x: &[i64], y: &[i64]) -> Vec<i64> {
        let mut out = vec![0i64; self.m];
        for (a, &xa) in x.iter().enumerate() {
            if xa == 0 {
                continue;
            }
            for (b, &yb) in y.iter().enumerate() {
                if yb != 0 {
                    out[(a + b) % self.m] += xa * yb;
                }
            }
        }
        out
    }

    /// Coordinates of an H-invariant group-ring element. Each H-orbit of
    /// nonzero multiples of p sums to −1; unit orbits are the periods.
    fn to_basis(&self, v: &[i64]) -> Vec<i64> {
        let p = self.p as usize;
        for e in 1..self.m {
            let rep = if e % p == 0 { p } else { self.orbit[self.coset[e].expect("unit")][0] };
            assert_eq!(v[e], v[rep], "group-ring element is not H-invariant");
        }
        let m0 = v[self.orbit[0][0]];
        let mut out = vec![v[0] - v[p]];
        for k in 1..p {
            out.push(v[self.orbit[k][0]] - m0);
        }
        out
    }
}

/// Build Q₁ for an odd prime p ≤ 13 from exact group-ring arithmetic.
pub fn build_period_field(p: u64) -> Result<PeriodField> {
    if p.is_multiple_of(2) || !is_prime(p) {
        return Err(Error::InvalidInput(format!("{p} is not an odd prime")));
    }
    if p > MAX_PERIOD_PRIME {
        return Err(Error::DegreeCapExceeded(p));
    }
    let g = primitive_root_p2(p);
    let per = Periods::new(p, g);
    let n = p as usize;
    // Basis in the group ring: b₀ = 1, b_i = η_i.
    let basis: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            if i == 0 {
                let mut one = vec![0i64; per.m];
                one[0] = 1;
                one
            } else {
                per.eta(i)
            }
        })
        .collect();
    let mult: Vec<Vec<Vec<i64>>> = (0..n)
        .map(|i| (0..n).map(|j| per.to_basis(&per.mul(&basis[i], &basis[j]))).collect())
        .collect();
    let eta0 = per.to_basis(&per.eta(0));
    let mut field = PeriodField { p, g, min_poly: Vec::new(), mult, eta0, index: BigInt::zero() };
    let eta0: Vec<BigInt> = field.eta0.iter().map(|&c| BigInt::from(c)).collect();
    field.min_poly = charpoly(&mult_matrix(&field, &eta0));
    field.index = period_index(&field)?;
    Ok(field)
}

/// Matrix of multiplication by x: column j holds x·b_j.
pub(crate) fn mult_matrix(f: &PeriodField, x: &[BigInt]) -> Vec<Vec<BigInt>> {
    let n = f.degree();
    let cols: Vec<Vec<BigInt>> = (0..n).map(|j| f.mul_int(x, &unit_vector(n, j))).collect();
    (0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect()
}

/// Characteristic polynomial by Faddeev–LeVerrier; the divisions are exact
/// for integer matrices. Ascending coefficients, monic.
pub fn charpoly(a: &[Vec<BigInt>]) -> Vec<BigInt> {
    let n = a.len();
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::one();
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for k in 1..=n {
        // M_k = A·M_{k−1} + c_{n−k+1}·I
        let mut next = matmul(a, &m);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &coeffs[n - k + 1];
        }
        m = next;
        let am = matmul(a, &m);
        let tr: BigInt = (0..n).map(|i| am[i][i].clone()).sum();
        let (q, r) = (-tr).div_rem(&BigInt::from(k));
        debug_assert!(r.is_zero());
        coeffs[n - k] = q;
    }
    coeffs
}

fn matmul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = a.len();
    let mut out = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                out[i][j] += &a[i][k] * &b[k][j];
            }
        }
    }
    out
}

/// Determinant by fraction-free Bareiss elimination.
pub fn det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, r);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Discriminant of a family of elements: det(Tr(x_i·x_j)).
pub fn discriminant(f: &PeriodField, elems: &[Vec<BigInt>]) -> BigInt {
    let gram = elems
        .iter()
        .map(|x| elems.iter().map(|y| f.trace_int(&f.mul_int(x, y))).collect())
        .collect();
    det(gram)
}

/// [O : Z[η₀]] = sqrt(disc(1, η₀, …, η₀^{p−1}) / disc(b)), with the basis b
/// required to have discriminant p^{2(p−1)}, the field discriminant.
fn period_index(f: &PeriodField) -> Result<BigInt> {
    let n = f.degree();
    let basis: Vec<Vec<BigInt>> = (0..n).map(|i| unit_vector(n, i)).collect();
    let d_basis = discriminant(f, &basis);
    let expected = BigInt::from(f.p).pow(2 * (f.p as u32 - 1));
    if d_basis.abs() != expected {
        return Err(Error::InternalInconsistency(format!(
            "period basis discriminant {d_basis} is not ±p^(2(p−1))"
        )));
    }
    let pows = f.eta0_powers();
    let d_pow = discriminant(f, &pows[..n]);
    let (q, r) = d_pow.div_rem(&d_basis);
    let idx = q.sqrt();
    if !r.is_zero() || &idx * &idx != q {
        return Err(Error::InternalInconsistency("power-basis discriminant is not an index square".into()));
    }
    Ok(idx)
}
