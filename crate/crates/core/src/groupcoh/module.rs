use crate::error::{Error, Result};
use crate::fp_linalg::{FpMatrix, FpVector};

use super::group::FiniteGroup;

/// A finite-dimensional F_p[G]-module: one matrix per group element, acting
/// on column vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpModule {
    p: u32,
    dim: usize,
    action: Vec<FpMatrix>,
}

impl FpModule {
    /// Extend generator matrices along words and check the result is a
    /// homomorphism against the multiplication table.
    pub fn from_generators(g: &FiniteGroup, p: u32, dim: usize, gen_action: &[FpMatrix]) -> Result<Self> {
        if gen_action.len() != g.generators().len() {
            return Err(Error::InvalidInput("one matrix per generator expected".into()));
        }
        if gen_action.iter().any(|m| m.rows() != dim || m.cols() != dim || m.p() != p) {
            return Err(Error::InvalidInput("action matrix shape or field mismatch".into()));
        }
        let action = g
            .words()
            .iter()
            .map(|w| w.iter().fold(FpMatrix::identity(p, dim), |acc, &k| acc.mul(&gen_action[k])))
            .collect();
        FpModule::from_elements(g, p, dim, action)
    }

    /// One matrix per element, checked for ρ(e) = 1 and ρ(g)ρ(h) = ρ(gh).
    pub fn from_elements(g: &FiniteGroup, p: u32, dim: usize, action: Vec<FpMatrix>) -> Result<Self> {
        if action.len() != g.order() {
            return Err(Error::InvalidInput("one matrix per element expected".into()));
        }
        if action[g.identity()] != FpMatrix::identity(p, dim) {
            return Err(Error::InvalidInput("identity does not act trivially".into()));
        }
        for a in 0..g.order() {
            for b in 0..g.order() {
                if action[a].mul(&action[b]) != action[g.mul(a, b)] {
                    return Err(Error::InvalidInput("action violates the group relations".into()));
                }
            }
        }
        Ok(FpModule { p, dim, action })
    }

    pub fn trivial(g: &FiniteGroup, p: u32, dim: usize) -> Self {
        FpModule { p, dim, action: vec![FpMatrix::identity(p, dim); g.order()] }
    }

    /// A one-dimensional module with g acting by the scalar `scalar(g)`.
    pub fn one_dim(g: &FiniteGroup, p: u32, scalar: impl Fn(usize) -> i64) -> Result<Self> {
        let action = (0..g.order()).map(|x| FpMatrix::from_rows(p, &[vec![scalar(x)]])).collect();
        FpModule::from_elements(g, p, 1, action)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self, g: usize) -> &FpMatrix {
        &self.action[g]
    }

    pub fn act(&self, g: usize, v: &[u32]) -> FpVector {
        self.action[g].mul_vec(v)
    }

    pub fn is_trivial(&self) -> bool {
        let id = FpMatrix::identity(self.p, self.dim);
        self.action.iter().all(|m| *m == id)
    }

    /// Restriction along an embedding `emb[i]` = image of the i-th subgroup element.
    pub fn restrict(&self, emb: &[usize]) -> FpModule {
        FpModule { p: self.p, dim: self.dim, action: emb.iter().map(|&x| self.action[x].clone()).collect() }
    }
}

/// A surjective homomorphism χ: G → Z/p^l.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacterChi {
    p: u64,
    l: u32,
    values: Vec<u64>,
}

impl CharacterChi {
    pub fn new(g: &FiniteGroup, p: u64, l: u32, values: Vec<u64>) -> Result<Self> {
        let m = p.pow(l);
        if values.len() != g.order() {
            return Err(Error::InvalidInput("χ needs one value per element".into()));
        }
        let values: Vec<u64> = values.into_iter().map(|v| v % m).collect();
        for a in 0..g.order() {
            for b in 0..g.order() {
                if values[g.mul(a, b)] != (values[a] + values[b]) % m {
                    return Err(Error::InvalidInput("χ is not a homomorphism".into()));
                }
            }
        }
        if !values.iter().any(|&v| v % p != 0) {
            return Err(Error::InvalidInput("χ is not surjective".into()));
        }
        Ok(CharacterChi { p, l, values })
    }

    /// Define χ by its values on the generators.
    pub fn from_generators(g: &FiniteGroup, p: u64, l: u32, gen_values: &[u64]) -> Result<Self> {
        if gen_values.len() != g.generators().len() {
            return Err(Error::InvalidInput("one χ value per generator expected".into()));
        }
        let m = p.pow(l);
        let values = g.words().iter().map(|w| w.iter().map(|&k| gen_values[k]).sum::<u64>() % m).collect();
        CharacterChi::new(g, p, l, values)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn level(&self) -> u32 {
        self.l
    }

    pub fn modulus(&self) -> u64 {
        self.p.pow(self.l)
    }

    pub fn value(&self, g: usize) -> u64 {
        self.values[g]
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    /// ker χ, sorted.
    pub fn kernel(&self) -> Vec<usize> {
        (0..self.values.len()).filter(|&g| self.values[g] == 0).collect()
    }

    /// Restriction along an embedding into the domain.
    pub fn restrict_values(&self, emb: &[usize]) -> Vec<u64> {
        emb.iter().map(|&x| self.values[x]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn words_extend_generators() {
        let g = FiniteGroup::cyclic(9);
        let m = FpModule::from_generators(&g, 3, 2, &[FpMatrix::from_rows(3, &[vec![1, 1], vec![0, 1]])]).unwrap();
        assert_eq!(m.matrix(2), &FpMatrix::from_rows(3, &[vec![1, 2], vec![0, 1]]));
        assert!(FpModule::from_generators(&FiniteGroup::cyclic(2), 3, 2, &[FpMatrix::from_rows(3, &[vec![1, 1], vec![0, 1]])]).is_err());
    }

    #[test]
    fn characters() {
        let g = FiniteGroup::cyclic(9);
        let chi = CharacterChi::from_generators(&g, 3, 1, &[1]).unwrap();
        assert_eq!(chi.kernel(), vec![0, 3, 6]);
        assert!(CharacterChi::from_generators(&g, 3, 1, &[0]).is_err());
        assert!(CharacterChi::new(&g, 3, 2, (0..9).map(|x| x * x).collect()).is_err());
    }
}
