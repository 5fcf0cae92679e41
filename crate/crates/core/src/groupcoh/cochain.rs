use rand::Rng;

use crate::fp_linalg::{axpy, fp_add, fp_mul, fp_sub, FpVector};

use super::group::FiniteGroup;
use super::module::FpModule;

/// Inhomogeneous 1-cochain: values[g·dim + j] is the j-th coordinate of c(g).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cochain1 {
    pub p: u32,
    pub order: usize,
    pub dim: usize,
    pub values: FpVector,
}

/// Inhomogeneous 2-cochain: values[(g·|G| + h)·dim + j].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cochain2 {
    pub p: u32,
    pub order: usize,
    pub dim: usize,
    pub values: FpVector,
}

impl Cochain1 {
    pub fn zero(p: u32, order: usize, dim: usize) -> Self {
        Cochain1 { p, order, dim, values: vec![0; order * dim] }
    }

    pub fn from_fn(p: u32, order: usize, dim: usize, f: impl Fn(usize) -> FpVector) -> Self {
        let mut c = Cochain1::zero(p, order, dim);
        for g in 0..order {
            c.values[g * dim..(g + 1) * dim].copy_from_slice(&f(g));
        }
        c
    }

    /// A scalar cochain g ↦ v(g) mod p into a 1-dimensional module.
    pub fn scalar(p: u32, values: impl IntoIterator<Item = u64>) -> Self {
        let values: FpVector = values.into_iter().map(|v| (v % p as u64) as u32).collect();
        Cochain1 { p, order: values.len(), dim: 1, values }
    }

    pub fn random<R: Rng>(p: u32, order: usize, dim: usize, rng: &mut R) -> Self {
        Cochain1 { p, order, dim, values: (0..order * dim).map(|_| rng.gen_range(0..p)).collect() }
    }

    pub fn at(&self, g: usize) -> &[u32] {
        &self.values[g * self.dim..(g + 1) * self.dim]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&x| x == 0)
    }

    pub fn add(&self, other: &Cochain1) -> Cochain1 {
        let mut out = self.clone();
        axpy(&mut out.values, 1, &other.values, self.p);
        out
    }

    pub fn scale(&self, f: u32) -> Cochain1 {
        let values = self.values.iter().map(|&x| fp_mul(x, f, self.p)).collect();
        Cochain1 { values, ..*self }
    }
}

impl Cochain2 {
    pub fn zero(p: u32, order: usize, dim: usize) -> Self {
        Cochain2 { p, order, dim, values: vec![0; order * order * dim] }
    }

    pub fn at(&self, g: usize, h: usize) -> &[u32] {
        let i = (g * self.order + h) * self.dim;
        &self.values[i..i + self.dim]
    }

    pub fn at_mut(&mut self, g: usize, h: usize) -> &mut [u32] {
        let i = (g * self.order + h) * self.dim;
        &mut self.values[i..i + self.dim]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&x| x == 0)
    }

    pub fn add(&self, other: &Cochain2) -> Cochain2 {
        let mut out = self.clone();
        axpy(&mut out.values, 1, &other.values, self.p);
        out
    }

    pub fn sub(&self, other: &Cochain2) -> Cochain2 {
        let mut out = self.clone();
        axpy(&mut out.values, self.p - 1, &other.values, self.p);
        out
    }

    pub fn neg(&self) -> Cochain2 {
        Cochain2::zero(self.p, self.order, self.dim).sub(self)
    }
}

/// (d m)(g) = g·m − m.
pub fn d0(g: &FiniteGroup, m: &FpModule, v: &[u32]) -> Cochain1 {
    let p = m.p();
    Cochain1::from_fn(p, g.order(), m.dim(), |x| {
        m.act(x, v).iter().zip(v).map(|(&a, &b)| fp_sub(a, b, p)).collect()
    })
}

/// (d c)(g,h) = g·c(h) − c(gh) + c(g).
pub fn d1(g: &FiniteGroup, m: &FpModule, c: &Cochain1) -> Cochain2 {
    let (p, n) = (m.p(), g.order());
    let mut out = Cochain2::zero(p, n, m.dim());
    for a in 0..n {
        for b in 0..n {
            let mut v = m.act(a, c.at(b));
            axpy(&mut v, p - 1, c.at(g.mul(a, b)), p);
            axpy(&mut v, 1, c.at(a), p);
            out.at_mut(a, b).copy_from_slice(&v);
        }
    }
    out
}

/// (d c)(g,h,k) = g·c(h,k) − c(gh,k) + c(g,hk) − c(g,h), flattened over (g,h,k).
pub fn d2(g: &FiniteGroup, m: &FpModule, c: &Cochain2) -> FpVector {
    let (p, n, dim) = (m.p(), g.order(), m.dim());
    let mut out = Vec::with_capacity(n * n * n * dim);
    for a in 0..n {
        for b in 0..n {
            for k in 0..n {
                let mut v = m.act(a, c.at(b, k));
                axpy(&mut v, p - 1, c.at(g.mul(a, b), k), p);
                axpy(&mut v, 1, c.at(a, g.mul(b, k)), p);
                axpy(&mut v, p - 1, c.at(a, b), p);
                out.extend(v);
            }
        }
    }
    out
}

pub fn is_cocycle1(g: &FiniteGroup, m: &FpModule, c: &Cochain1) -> bool {
    d1(g, m, c).is_zero()
}

/// (a ∪ b)(g,h) = pairing(a(g), g·b(h)), with `pairing` bilinear into a
/// module of dimension `out_dim`.
pub fn cup<F>(g: &FiniteGroup, a: &Cochain1, m2: &FpModule, b: &Cochain1, out_dim: usize, pairing: F) -> Cochain2
where
    F: Fn(&[u32], &[u32]) -> FpVector,
{
    let n = g.order();
    let mut out = Cochain2::zero(a.p, n, out_dim);
    for x in 0..n {
        for y in 0..n {
            let v = pairing(a.at(x), &m2.act(x, b.at(y)));
            out.at_mut(x, y).copy_from_slice(&v);
        }
    }
    out
}

/// Cup product of a scalar cochain with a module-valued one, via F_p × M → M.
pub fn cup_scalar(g: &FiniteGroup, a: &Cochain1, m2: &FpModule, b: &Cochain1) -> Cochain2 {
    let p = a.p;
    cup(g, a, m2, b, m2.dim(), |s, t| t.iter().map(|&x| fp_mul(s[0], x, p)).collect())
}

/// Entrywise sum of a 2-cochain into `acc`.
pub(crate) fn accumulate(acc: &mut Cochain2, c: &Cochain2) {
    for (a, &b) in acc.values.iter_mut().zip(&c.values) {
        *a = fp_add(*a, b, c.p);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn non_homomorphism_on_z3() {
        let g = FiniteGroup::cyclic(3);
        let m = FpModule::trivial(&g, 3, 1);
        let c = Cochain1::scalar(3, [0, 1, 1]);
        let dc = d1(&g, &m, &c);
        // (dc)(a,b) = c(b) − c(a+b) + c(a); table rows a, columns b.
        assert_eq!(dc.values, vec![0, 0, 0, 0, 1, 2, 0, 2, 1]);
        assert!(d1(&g, &m, &Cochain1::zero(3, 3, 1)).is_zero());
    }

    #[test]
    fn d_squared_vanishes() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let z9 = FiniteGroup::cyclic(9);
        let z3 = FiniteGroup::cyclic(3);
        let cases = [
            (z9.clone(), FpModule::trivial(&z9, 3, 1)),
            (
                FiniteGroup::direct_product(&z3, &z3),
                FpModule::trivial(&FiniteGroup::direct_product(&z3, &z3), 3, 2),
            ),
            {
                let g = FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &z9);
                let m = FpModule::one_dim(&g, 3, |x| if x / 9 == 1 { -1 } else { 1 }).unwrap();
                (g, m)
            },
        ];
        for _ in 0..170 {
            for (g, m) in &cases {
                let c = Cochain1::random(3, g.order(), m.dim(), &mut rng);
                assert!(d2(g, m, &d1(g, m, &c)).iter().all(|&x| x == 0));
                let v: Vec<u32> = (0..m.dim()).map(|_| rng.gen_range(0..3)).collect();
                assert!(d1(g, m, &d0(g, m, &v)).is_zero());
            }
        }
    }
}
