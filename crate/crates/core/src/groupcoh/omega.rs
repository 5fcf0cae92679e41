use crate::error::{Error, Result};
use crate::fp_linalg::{FpMatrix, FpVector};
use crate::util::binom_mod_p;

use super::cochain::Cochain1;
use super::group::FiniteGroup;
use super::module::{CharacterChi, FpModule};

/// Ω/Iⁿ ⊗ T with x = σ − 1, on the basis x^i ⊗ t_j indexed i·dim T + j.
/// g acts by g·(x^i ⊗ t) = Σ_k C(χ(g), k) x^{i+k} ⊗ g·t, truncated at xⁿ.
#[derive(Debug, Clone)]
pub struct OmegaModule {
    base: FpModule,
    chi: CharacterChi,
    n: usize,
    module: FpModule,
}

impl OmegaModule {
    pub fn new(g: &FiniteGroup, base: &FpModule, chi: &CharacterChi, n: usize) -> Result<Self> {
        let max = chi.modulus() as usize;
        if n == 0 || n > max {
            return Err(Error::TruncationRange { n, max });
        }
        if chi.p() != base.p() as u64 {
            return Err(Error::PrimeMismatch(chi.p(), base.p() as u64));
        }
        let (p, t) = (base.p(), base.dim());
        let action = (0..g.order())
            .map(|x| {
                let a = chi.value(x);
                let tx = base.matrix(x);
                let mut m = FpMatrix::zeros(p, n * t, n * t);
                for k in 0..n {
                    let b = binom_mod_p(a, k as u64, p as u64) as u32;
                    if b == 0 {
                        continue;
                    }
                    for i in 0..n - k {
                        for r in 0..t {
                            for c in 0..t {
                                let v = (b as u64 * tx.get(r, c) as u64 % p as u64) as u32;
                                m.set((i + k) * t + r, i * t + c, v);
                            }
                        }
                    }
                }
                m
            })
            .collect();
        let module = FpModule::from_elements(g, p, n * t, action)?;
        Ok(OmegaModule { base: base.clone(), chi: chi.clone(), n, module })
    }

    pub fn module(&self) -> &FpModule {
        &self.module
    }

    pub fn base(&self) -> &FpModule {
        &self.base
    }

    pub fn chi(&self) -> &CharacterChi {
        &self.chi
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn base_dim(&self) -> usize {
        self.base.dim()
    }

    /// Coordinates of the x^i-block of a vector.
    pub fn block<'v>(&self, v: &'v [u32], i: usize) -> &'v [u32] {
        let t = self.base.dim();
        &v[i * t..(i + 1) * t]
    }

    /// Projection Ω/Iⁿ⊗T → Ω/I^m⊗T for m ≤ n.
    pub fn truncate_vec(&self, v: &[u32], m: usize) -> FpVector {
        v[..m * self.base.dim()].to_vec()
    }

    /// The inclusion I^{n−1}/Iⁿ ⊗ T → Ω/Iⁿ ⊗ T, t ↦ x^{n−1} ⊗ t.
    pub fn top_inclusion(&self, t: &[u32]) -> FpVector {
        let d = self.base.dim();
        let mut v = vec![0u32; self.n * d];
        v[(self.n - 1) * d..].copy_from_slice(t);
        v
    }

    /// Multiplication by x from Ω/I^{n−1}⊗T into Ω/Iⁿ⊗T (a shift of blocks).
    pub fn mul_x(&self, v: &[u32]) -> FpVector {
        let d = self.base.dim();
        assert_eq!(v.len(), (self.n - 1) * d);
        let mut out = vec![0u32; self.n * d];
        out[d..].copy_from_slice(v);
        out
    }

    /// Apply a vector map to every value of a cochain.
    pub fn map_cochain(c: &Cochain1, dim: usize, f: impl Fn(&[u32]) -> FpVector) -> Cochain1 {
        Cochain1::from_fn(c.p, c.order, dim, |g| f(c.at(g)))
    }

    /// The i-th coefficient ψ_i of a cochain f = Σ ψ_i x^i.
    pub fn coefficient(&self, f: &Cochain1, i: usize) -> Cochain1 {
        Self::map_cochain(f, self.base.dim(), |v| self.block(v, i).to_vec())
    }

    /// Assemble Σ ψ_i x^i from coefficient cochains in T.
    pub fn assemble(&self, psis: &[Cochain1]) -> Cochain1 {
        let (p, d) = (self.base.p(), self.base.dim());
        assert_eq!(psis.len(), self.n);
        let order = psis[0].order;
        Cochain1::from_fn(p, order, self.n * d, |g| psis.iter().flat_map(|c| c.at(g).to_vec()).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupcoh::cochain::d1;
    use crate::groupcoh::cohomology::{Budget, Cohomology};

    #[test]
    fn examples() {
        let g = FiniteGroup::cyclic(3);
        let t = FpModule::trivial(&g, 3, 1);
        let chi = CharacterChi::from_generators(&g, 3, 1, &[1]).unwrap();
        let om = OmegaModule::new(&g, &t, &chi, 2).unwrap();
        assert_eq!(om.module().act(1, &[1, 0]), vec![1, 1]);
        assert_eq!(om.module().act(0, &[1, 0]), vec![1, 0]);
        let om1 = OmegaModule::new(&g, &t, &chi, 1).unwrap();
        assert_eq!(om1.module(), &t);
        assert!(matches!(OmegaModule::new(&g, &t, &chi, 4), Err(Error::TruncationRange { n: 4, max: 3 })));
    }

    #[test]
    fn kernel_of_chi_does_not_shift() {
        let g = FiniteGroup::cyclic(9);
        let t = FpModule::trivial(&g, 3, 1);
        let chi = CharacterChi::from_generators(&g, 3, 1, &[1]).unwrap();
        let om = OmegaModule::new(&g, &t, &chi, 3).unwrap();
        for x in chi.kernel() {
            assert_eq!(om.module().matrix(x), &FpMatrix::identity(3, 3));
        }
    }

    #[test]
    fn multiplication_by_x_is_equivariant() {
        // x·: Ω/I^{n−1}⊗T → I/Iⁿ⊗T commutes with the action, so it carries
        // cocycles to cocycles and is injective.
        let g = FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(9));
        let t = FpModule::one_dim(&g, 3, |x| if x / 9 == 1 { -1 } else { 1 }).unwrap();
        let chi = CharacterChi::new(&g, 3, 2, (0..18).map(|x| (x % 9) as u64).collect()).unwrap();
        for n in 2..=4 {
            let lo = OmegaModule::new(&g, &t, &chi, n - 1).unwrap();
            let hi = OmegaModule::new(&g, &t, &chi, n).unwrap();
            for x in 0..g.order() {
                for j in 0..n - 1 {
                    let mut v = vec![0u32; n - 1];
                    v[j] = 1;
                    assert_eq!(hi.mul_x(&lo.module().act(x, &v)), hi.module().act(x, &hi.mul_x(&v)));
                }
            }
            let h = Cohomology::new(&g, lo.module(), Budget::default()).unwrap();
            for z in h.z1_basis().unwrap() {
                let shifted = OmegaModule::map_cochain(z, n, |v| hi.mul_x(v));
                assert!(d1(&g, hi.module(), &shifted).is_zero());
            }
        }
    }
}
