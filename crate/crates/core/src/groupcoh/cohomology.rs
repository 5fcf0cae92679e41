use std::sync::OnceLock;

use rand::Rng;

use crate::error::{Error, Result};
use crate::fp_linalg::{axpy, fp_neg, kernel_basis_with, FpMatrix, FpVector, SpanBasis};
use crate::par::Exec;

use super::cochain::{d0, d1, Cochain1, Cochain2};
use super::group::FiniteGroup;
use super::module::FpModule;

/// Size limits for dense bar-complex computations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_order: usize,
    pub max_dim: usize,
    /// Largest dense matrix (rows × cols) any solve may allocate.
    pub max_entries: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_order: 243, max_dim: 6, max_entries: 1 << 26 }
    }
}

impl Budget {
    fn check_entries(&self, what: &str, rows: usize, cols: usize) -> Result<()> {
        if rows.saturating_mul(cols) > self.max_entries {
            return Err(Error::BudgetExceeded(format!("{what}: {rows}×{cols} exceeds {} entries", self.max_entries)));
        }
        Ok(())
    }
}

/// Degree ≤ 2 cohomology of one (group, module) pair from the full bar complex.
pub struct Cohomology<'a> {
    g: &'a FiniteGroup,
    m: &'a FpModule,
    budget: Budget,
    exec: Exec,
    b1: OnceLock<SpanBasis>,
    b2: OnceLock<SpanBasis>,
    z1: OnceLock<Vec<Cochain1>>,
}

impl<'a> Cohomology<'a> {
    pub fn new(g: &'a FiniteGroup, m: &'a FpModule, budget: Budget) -> Result<Self> {
        Self::with_exec(g, m, budget, Exec::default())
    }

    pub fn with_exec(g: &'a FiniteGroup, m: &'a FpModule, budget: Budget, exec: Exec) -> Result<Self> {
        if g.order() > budget.max_order {
            return Err(Error::BudgetExceeded(format!("|G| = {} > {}", g.order(), budget.max_order)));
        }
        if m.dim() > budget.max_dim {
            return Err(Error::BudgetExceeded(format!("dim M = {} > {}", m.dim(), budget.max_dim)));
        }
        Ok(Cohomology { g, m, budget, exec, b1: OnceLock::new(), b2: OnceLock::new(), z1: OnceLock::new() })
    }

    pub fn group(&self) -> &FiniteGroup {
        self.g
    }

    pub fn module(&self) -> &FpModule {
        self.m
    }

    fn p(&self) -> u32 {
        self.m.p()
    }

    /// Basis of Z¹ from the generator equations c(sh) = c(s) + s·c(h).
    pub fn z1_basis(&self) -> Result<&[Cochain1]> {
        if let Some(z) = self.z1.get() {
            return Ok(z);
        }
        let (p, n, dim) = (self.p(), self.g.order(), self.m.dim());
        let gens = self.g.generators();
        let (rows, cols) = (gens.len() * n * dim, n * dim);
        self.budget.check_entries("Z¹ system", rows, cols)?;
        let mut a = FpMatrix::zeros(p, rows, cols);
        for (si, &s) in gens.iter().enumerate() {
            let act = self.m.matrix(s);
            for h in 0..n {
                let sh = self.g.mul(s, h);
                for i in 0..dim {
                    let r = (si * n + h) * dim + i;
                    a.add_to(r, sh * dim + i, 1);
                    a.add_to(r, s * dim + i, p - 1);
                    for j in 0..dim {
                        a.add_to(r, h * dim + j, fp_neg(act.get(i, j), p));
                    }
                }
            }
        }
        let basis = kernel_basis_with(&a, self.exec)
            .into_iter()
            .map(|values| Cochain1 { p, order: n, dim, values })
            .collect();
        Ok(self.z1.get_or_init(|| basis))
    }

    pub fn z1_dim(&self) -> Result<usize> {
        Ok(self.z1_basis()?.len())
    }

    fn b1(&self) -> &SpanBasis {
        self.b1.get_or_init(|| {
            let (p, dim) = (self.p(), self.m.dim());
            let mut s = SpanBasis::new(p, self.g.order() * dim, false);
            for j in 0..dim {
                let mut e = vec![0u32; dim];
                e[j] = 1;
                s.insert(d0(self.g, self.m, &e).values);
            }
            s
        })
    }

    pub fn b1_dim(&self) -> usize {
        self.b1().dim()
    }

    /// Cocycles whose classes form a basis of H¹.
    pub fn h1_basis(&self) -> Result<Vec<Cochain1>> {
        let mut s = self.b1().clone();
        Ok(self.z1_basis()?.iter().filter(|c| s.insert(c.values.clone())).cloned().collect())
    }

    pub fn h1_dim(&self) -> Result<usize> {
        Ok(self.z1_dim()? - self.b1_dim())
    }

    /// Canonical representative of a 1-cochain modulo B¹.
    pub fn h1_class_rep(&self, c: &Cochain1) -> FpVector {
        self.b1().reduce(&c.values)
    }

    pub fn is_cocycle1(&self, c: &Cochain1) -> bool {
        super::cochain::is_cocycle1(self.g, self.m, c)
    }

    pub fn random_cocycle1<R: Rng>(&self, rng: &mut R) -> Result<Cochain1> {
        let p = self.p();
        let mut c = Cochain1::zero(p, self.g.order(), self.m.dim());
        for z in self.z1_basis()? {
            axpy(&mut c.values, rng.gen_range(0..p), &z.values, p);
        }
        Ok(c)
    }

    /// Basis of normalized 2-cocycles. A normalized cochain is a cocycle as
    /// soon as d c(s,h,k) = 0 for generators s: the elements x of the twisted
    /// product M ×_c G that associate with everything form a submonoid, and it
    /// contains M and the generators.
    pub fn z2_normalized_basis(&self) -> Result<Vec<Cochain2>> {
        let (p, n, dim) = (self.p(), self.g.order(), self.m.dim());
        let e = self.g.identity();
        let gens = self.g.generators();
        let mut slot = vec![usize::MAX; n];
        let mut k = 0;
        for (x, s) in slot.iter_mut().enumerate() {
            if x != e {
                *s = k;
                k += 1;
            }
        }
        let col = |x: usize, y: usize, j: usize| -> Option<usize> {
            (x != e && y != e).then(|| (slot[x] * (n - 1) + slot[y]) * dim + j)
        };
        let (rows, cols) = (gens.len() * n * n * dim, (n - 1) * (n - 1) * dim);
        self.budget.check_entries("Z² system", rows, cols)?;
        let mut a = FpMatrix::zeros(p, rows, cols);
        for (si, &s) in gens.iter().enumerate() {
            let act = self.m.matrix(s);
            for h in 0..n {
                for kk in 0..n {
                    let (sh, hk) = (self.g.mul(s, h), self.g.mul(h, kk));
                    for i in 0..dim {
                        let r = ((si * n + h) * n + kk) * dim + i;
                        for j in 0..dim {
                            if let Some(c) = col(h, kk, j) {
                                a.add_to(r, c, act.get(i, j));
                            }
                        }
                        if let Some(c) = col(sh, kk, i) {
                            a.add_to(r, c, p - 1);
                        }
                        if let Some(c) = col(s, hk, i) {
                            a.add_to(r, c, 1);
                        }
                        if let Some(c) = col(s, h, i) {
                            a.add_to(r, c, p - 1);
                        }
                    }
                }
            }
        }
        let kernel = kernel_basis_with(&a, self.exec);
        Ok(kernel
            .into_iter()
            .map(|v| {
                let mut c = Cochain2::zero(p, n, dim);
                for x in (0..n).filter(|&x| x != e) {
                    for y in (0..n).filter(|&y| y != e) {
                        for j in 0..dim {
                            c.at_mut(x, y)[j] = v[col(x, y, j).expect("non-identity")];
                        }
                    }
                }
                c
            })
            .collect())
    }

    fn b2(&self) -> Result<&SpanBasis> {
        if let Some(s) = self.b2.get() {
            return Ok(s);
        }
        let (p, n, dim) = (self.p(), self.g.order(), self.m.dim());
        self.budget.check_entries("B² span", n * n * dim, n * dim)?;
        let mut s = SpanBasis::new(p, n * n * dim, true);
        for idx in 0..n * dim {
            let mut c = Cochain1::zero(p, n, dim);
            c.values[idx] = 1;
            s.insert(d1(self.g, self.m, &c).values);
        }
        Ok(self.b2.get_or_init(|| s))
    }

    pub fn b2_dim(&self) -> Result<usize> {
        Ok(self.b2()?.dim())
    }

    /// dim H² = dim Z²_norm − ((|G| − 1)·dim M − dim Z¹).
    pub fn h2_dim(&self) -> Result<usize> {
        let z2 = self.z2_normalized_basis()?.len();
        let b2 = (self.g.order() - 1) * self.m.dim() - self.z1_dim()?;
        Ok(z2 - b2)
    }

    /// Cocycles whose classes form a basis of H².
    pub fn h2_basis(&self) -> Result<Vec<Cochain2>> {
        let mut s = self.b2()?.clone();
        let basis: Vec<Cochain2> =
            self.z2_normalized_basis()?.into_iter().filter(|c| s.insert(c.values.clone())).collect();
        if basis.len() != self.h2_dim()? {
            return Err(Error::InternalInconsistency("H² basis size disagrees with dimension count".into()));
        }
        Ok(basis)
    }

    /// Canonical representative of a 2-cochain modulo B²; two cocycles are
    /// cohomologous iff their representatives coincide.
    pub fn class_rep(&self, c: &Cochain2) -> Result<FpVector> {
        Ok(self.b2()?.reduce(&c.values))
    }

    pub fn is_coboundary(&self, c: &Cochain2) -> Result<bool> {
        Ok(self.b2()?.contains(&c.values))
    }

    pub fn same_class(&self, a: &Cochain2, b: &Cochain2) -> Result<bool> {
        self.is_coboundary(&a.sub(b))
    }

    /// Some w with d1(w) = c, if c is a coboundary.
    pub fn coboundary_witness(&self, c: &Cochain2) -> Result<Option<Cochain1>> {
        let (p, n, dim) = (self.p(), self.g.order(), self.m.dim());
        Ok(self.b2()?.express(&c.values).map(|values| Cochain1 { p, order: n, dim, values }))
    }
}

/// Rank of G^{ab} ⊗ F_p computed from the table: G/[G,G]G^p is elementary
/// abelian, so its rank is log_p of its order.
pub fn frattini_rank(g: &FiniteGroup, p: u64) -> usize {
    let mut gens = g.derived_subgroup();
    gens.extend((0..g.order()).map(|x| g.pow(x, p)));
    let sub = g.closure(&gens);
    let mut q = g.order() / sub.len();
    let mut r = 0;
    while q > 1 {
        q /= p as usize;
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupcoh::cochain::{cup_scalar, d2};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn twisted() -> (FiniteGroup, FpModule) {
        let g = FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(9));
        let m = FpModule::one_dim(&g, 3, |x| if x / 9 == 1 { -1 } else { 1 }).unwrap();
        (g, m)
    }

    #[test]
    fn cyclic_examples() {
        let g = FiniteGroup::cyclic(3);
        let m = FpModule::trivial(&g, 3, 1);
        let h = Cohomology::new(&g, &m, Budget::default()).unwrap();
        assert_eq!(h.h1_dim().unwrap(), 1);
        assert_eq!(h.h2_dim().unwrap(), 1);
        assert_eq!(h.h2_basis().unwrap().len(), 1);

        let z2 = FiniteGroup::cyclic(2);
        let sign = FpModule::one_dim(&z2, 3, |x| if x == 1 { -1 } else { 1 }).unwrap();
        let h = Cohomology::new(&z2, &sign, Budget::default()).unwrap();
        assert_eq!(h.h1_dim().unwrap(), 0);
        assert_eq!(h.h2_dim().unwrap(), 0);
    }

    #[test]
    fn dimensions_of_small_groups() {
        // Frozen from the brute-force bar complex and matching the Künneth
        // formula for elementary abelian groups: H^r((Z/3)^k, F_3) has
        // dimension C(k + r − 1, r).
        let z3 = FiniteGroup::cyclic(3);
        let g = FiniteGroup::direct_product(&z3, &z3);
        let m = FpModule::trivial(&g, 3, 1);
        let h = Cohomology::new(&g, &m, Budget::default()).unwrap();
        assert_eq!((h.h1_dim().unwrap(), h.h2_dim().unwrap()), (2, 3));

        let (g, m) = twisted();
        let h = Cohomology::new(&g, &m, Budget::default()).unwrap();
        assert_eq!((h.h1_dim().unwrap(), h.h2_dim().unwrap()), (0, 0));
        let triv = FpModule::trivial(&g, 3, 1);
        let h = Cohomology::new(&g, &triv, Budget::default()).unwrap();
        assert_eq!((h.h1_dim().unwrap(), h.h2_dim().unwrap()), (1, 1));
    }

    #[test]
    fn h1_matches_frattini_rank() {
        let z3 = FiniteGroup::cyclic(3);
        let z9 = FiniteGroup::cyclic(9);
        let z2 = FiniteGroup::cyclic(2);
        for g in [
            z9.clone(),
            FiniteGroup::direct_product(&z3, &z3),
            FiniteGroup::direct_product(&z3, &z9),
            FiniteGroup::direct_product(&z2, &z9),
            FiniteGroup::direct_product(&FiniteGroup::direct_product(&z3, &z3), &z3),
        ] {
            let m = FpModule::trivial(&g, 3, 1);
            let h = Cohomology::new(&g, &m, Budget::default()).unwrap();
            assert_eq!(h.h1_dim().unwrap(), frattini_rank(&g, 3));
        }
    }

    #[test]
    fn normalized_cocycles_are_cocycles() {
        let (g, m) = twisted();
        let triv = FpModule::trivial(&g, 3, 1);
        for m in [&m, &triv] {
            let h = Cohomology::new(&g, m, Budget::default()).unwrap();
            for c in h.z2_normalized_basis().unwrap() {
                assert!(d2(&g, m, &c).iter().all(|&x| x == 0));
            }
        }
    }

    #[test]
    fn cup_examples() {
        let z3 = FiniteGroup::cyclic(3);
        let g = FiniteGroup::direct_product(&z3, &z3);
        let m = FpModule::trivial(&g, 3, 1);
        let h = Cohomology::new(&g, &m, Budget::default()).unwrap();
        let pr1 = Cochain1::scalar(3, (0..9).map(|x| (x / 3) as u64));
        let pr2 = Cochain1::scalar(3, (0..9).map(|x| (x % 3) as u64));
        assert!(!h.is_coboundary(&cup_scalar(&g, &pr1, &m, &pr2)).unwrap());
        assert!(h.is_coboundary(&cup_scalar(&g, &pr1, &m, &Cochain1::zero(3, 9, 1))).unwrap());

        let z9 = FiniteGroup::cyclic(9);
        let m9 = FpModule::trivial(&z9, 3, 1);
        let h9 = Cohomology::new(&z9, &m9, Budget::default()).unwrap();
        let chi = Cochain1::scalar(3, 0..9);
        let cc = cup_scalar(&z9, &chi, &m9, &chi);
        let w = h9.coboundary_witness(&cc).unwrap().expect("χ∪χ is a coboundary");
        assert_eq!(d1(&z9, &m9, &w), cc);
    }

    #[test]
    fn budget_is_enforced() {
        let g = FiniteGroup::cyclic(81);
        let m = FpModule::trivial(&g, 3, 1);
        let tight = Budget { max_entries: 10_000, ..Budget::default() };
        let h = Cohomology::new(&g, &m, tight).unwrap();
        assert!(matches!(h.h2_dim(), Err(Error::BudgetExceeded(_))));
        assert!(Cohomology::new(&FiniteGroup::cyclic(250), &FpModule::trivial(&FiniteGroup::cyclic(250), 3, 1), Budget::default()).is_err());
    }

    #[test]
    fn random_cocycles_are_cocycles() {
        let (g, m) = twisted();
        let triv = FpModule::trivial(&g, 3, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for m in [&m, &triv] {
            let h = Cohomology::new(&g, m, Budget::default()).unwrap();
            for _ in 0..5 {
                assert!(h.is_cocycle1(&h.random_cocycle1(&mut rng).unwrap()));
            }
        }
    }
}
