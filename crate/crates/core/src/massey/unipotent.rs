use crate::fp_linalg::{fp_add, fp_mul, fp_neg};

/// Upper unitriangular matrix over F_p, stored densely row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UnipotentMatrix {
    p: u32,
    size: usize,
    data: Vec<u32>,
}

impl UnipotentMatrix {
    pub fn identity(p: u32, size: usize) -> Self {
        let mut data = vec![0; size * size];
        for i in 0..size {
            data[i * size + i] = 1;
        }
        UnipotentMatrix { p, size, data }
    }

    /// Identity plus the given strictly-upper entries (0-based (i, j, value)).
    pub fn from_entries(p: u32, size: usize, entries: &[(usize, usize, i64)]) -> Self {
        let mut m = Self::identity(p, size);
        for &(i, j, v) in entries {
            assert!(i < j && j < size, "entry must be strictly upper");
            m.data[i * size + j] = v.rem_euclid(p as i64) as u32;
        }
        m
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.size + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        assert!(i < j, "only strictly-upper entries are free");
        self.data[i * self.size + j] = v % self.p;
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.p, self.size)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (n, p) = (self.size, self.p);
        let mut out = Self::identity(p, n);
        for i in 0..n {
            for j in i + 1..n {
                let mut s = 0;
                for k in i..=j {
                    s = fp_add(s, fp_mul(self.get(i, k), other.get(k, j), p), p);
                }
                out.data[i * n + j] = s;
            }
        }
        out
    }

    /// Inverse by back substitution on the unitriangular system.
    pub fn inv(&self) -> Self {
        let (n, p) = (self.size, self.p);
        let mut out = Self::identity(p, n);
        for j in 0..n {
            for i in (0..j).rev() {
                let mut s = 0;
                for k in i + 1..=j {
                    s = fp_add(s, fp_mul(self.get(i, k), out.get(k, j), p), p);
                }
                out.data[i * n + j] = fp_neg(s, p);
            }
        }
        out
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut result = Self::identity(self.p, self.size);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        result
    }

    /// a b a⁻¹ b⁻¹.
    pub fn commutator(a: &Self, b: &Self) -> Self {
        a.mul(b).mul(&a.inv()).mul(&b.inv())
    }

    /// Drop the first row and column: the projection U_n → U_{n−1} onto the
    /// lower-right block, a homomorphism.
    pub fn lower_right(&self) -> Self {
        let n = self.size - 1;
        let mut out = Self::identity(self.p, n);
        for i in 0..n {
            for j in i + 1..n {
                out.data[i * n + j] = self.get(i + 1, j + 1);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_unipotent(p: u32, n: usize) -> impl Strategy<Value = UnipotentMatrix> {
        prop::collection::vec(0..p as i64, n * (n - 1) / 2).prop_map(move |vals| {
            let mut entries = Vec::new();
            let mut k = 0;
            for i in 0..n {
                for j in i + 1..n {
                    entries.push((i, j, vals[k]));
                    k += 1;
                }
            }
            UnipotentMatrix::from_entries(p, n, &entries)
        })
    }

    proptest! {
        #[test]
        fn group_axioms(a in arb_unipotent(5, 4), b in arb_unipotent(5, 4), c in arb_unipotent(5, 4)) {
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert!(a.mul(&a.inv()).is_identity());
            prop_assert!(a.inv().mul(&a).is_identity());
            prop_assert_eq!(a.mul(&b).lower_right(), a.lower_right().mul(&b.lower_right()));
        }
    }

    #[test]
    fn heisenberg_commutator() {
        let x = UnipotentMatrix::from_entries(3, 3, &[(0, 1, 1)]);
        let y = UnipotentMatrix::from_entries(3, 3, &[(1, 2, 1)]);
        assert_eq!(UnipotentMatrix::commutator(&x, &y), UnipotentMatrix::from_entries(3, 3, &[(0, 2, 1)]));
        assert!(x.pow(3).is_identity());
    }
}
