//! Positive definite binary quadratic forms and class numbers.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::is_fundamental;
use crate::error::{Error, Result};
use crate::util::kronecker;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuadForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl QuadForm {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        QuadForm { a, b, c }
    }

    pub fn disc(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn is_reduced(&self) -> bool {
        let (a, b, c) = (self.a, self.b, self.c);
        a > 0 && b.abs() <= a && a <= c && (b >= 0 || (b.abs() != a && a != c))
    }

    /// The principal form of discriminant `d`.
    pub fn identity(d: i64) -> Self {
        let b = d.rem_euclid(2);
        QuadForm::new(1, b, (b * b - d) / 4)
    }

    pub fn inverse(&self) -> Self {
        QuadForm::new(self.a, -self.b, self.c).reduce()
    }

    /// The unique reduced form equivalent to `self`.
    pub fn reduce(&self) -> Self {
        self.reduce_tracking().0
    }

    /// Reduce while tracking the SL₂(Z) change of variables: returns the
    /// reduced form and the matrix M with (self)∘M = reduced.
    pub fn reduce_tracking(&self) -> (Self, [[i64; 2]; 2]) {
        let (mut a, mut b, mut c) = (self.a as i128, self.b as i128, self.c as i128);
        let mut m = [[1i128, 0], [0, 1]];
        loop {
            if b > a || b <= -a {
                // Translate x ↦ x + k·y to bring b into (−a, a].
                let k = Integer::div_floor(&(a - b), &(2 * a));
                c += k * (b + a * k);
                b += 2 * a * k;
                m[0][1] += k * m[0][0];
                m[1][1] += k * m[1][0];
            }
            if a > c {
                // Swap via (x, y) ↦ (−y, x).
                (a, c) = (c, a);
                b = -b;
                m = [[m[0][1], -m[0][0]], [m[1][1], -m[1][0]]];
                continue;
            }
            if a == c && b < 0 {
                b = -b;
                m = [[m[0][1], -m[0][0]], [m[1][1], -m[1][0]]];
            }
            break;
        }
        let f = QuadForm::new(a as i64, b as i64, c as i64);
        let m = [[m[0][0] as i64, m[0][1] as i64], [m[1][0] as i64, m[1][1] as i64]];
        (f, m)
    }

    /// Gauss composition followed by reduction.
    pub fn compose(&self, other: &QuadForm) -> QuadForm {
        let (mut f1, mut f2) = (*self, *other);
        if f1.a > f2.a {
            std::mem::swap(&mut f1, &mut f2);
        }
        let (a1, b1) = (f1.a as i128, f1.b as i128);
        let (a2, b2, c2) = (f2.a as i128, f2.b as i128, f2.c as i128);
        let s = (b1 + b2) / 2;
        let n = b2 - s;
        let (d, y1) = if a2 % a1 == 0 {
            (a1, 0)
        } else {
            let e = a2.extended_gcd(&a1);
            (e.gcd, e.x)
        };
        let (d1, x2, y2) = if s % d == 0 {
            (d, 0, -1)
        } else {
            let e = s.extended_gcd(&d);
            (e.gcd, e.x, -e.y)
        };
        let v1 = a1 / d1;
        let v2 = a2 / d1;
        let r = (y1 * y2 * n - x2 * c2).rem_euclid(v1);
        let b3 = b2 + 2 * v2 * r;
        let a3 = v1 * v2;
        let c3 = (c2 * d1 + r * (b2 + v2 * r)) / v1;
        QuadForm::new(a3 as i64, b3 as i64, c3 as i64).reduce()
    }

    pub fn pow(&self, mut e: u64) -> QuadForm {
        let mut result = QuadForm::identity(self.disc());
        let mut base = self.reduce();
        while e > 0 {
            if e & 1 == 1 {
                result = result.compose(&base);
            }
            base = base.compose(&base);
            e >>= 1;
        }
        result
    }

    /// Order of the class in the class group.
    pub fn order(&self) -> u64 {
        let id = QuadForm::identity(self.disc());
        let f = self.reduce();
        let mut g = f;
        let mut k = 1;
        while g != id {
            g = g.compose(&f);
            k += 1;
        }
        k
    }
}

/// All reduced forms of discriminant `d`, sorted. Their number is h(d).
pub fn reduced_forms(d: i64) -> Result<Vec<QuadForm>> {
    if !is_fundamental(d) {
        return Err(Error::NotFundamental(d));
    }
    let mut out = Vec::new();
    let mut a = 1i64;
    while 3 * a * a <= -d {
        for b in -a + 1..=a {
            if (b - d).rem_euclid(2) != 0 {
                continue;
            }
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let f = QuadForm::new(a, b, num / (4 * a));
            if f.is_reduced() {
                out.push(f);
            }
        }
        a += 1;
    }
    out.sort();
    Ok(out)
}

/// h(d) from the analytic class number formula
/// h = (w / 2|d|) · |Σ_{k=1}^{|d|−1} (d|k)·k|.
pub fn class_number_dirichlet(d: i64) -> Result<u64> {
    if !is_fundamental(d) {
        return Err(Error::NotFundamental(d));
    }
    let n = d.unsigned_abs();
    let s: i128 = (1..n).map(|k| kronecker(d, k) as i128 * k as i128).sum();
    let w = super::roots_of_unity(d) as i128;
    let num = w * s.abs();
    let den = 2 * n as i128;
    if num % den != 0 {
        return Err(Error::InternalInconsistency(format!("class number sum not integral for {d}")));
    }
    Ok((num / den) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduced_form_examples() {
        assert_eq!(reduced_forms(-3).unwrap(), vec![QuadForm::new(1, 1, 1)]);
        assert_eq!(reduced_forms(-11).unwrap(), vec![QuadForm::new(1, 1, 3)]);
        assert_eq!(
            reduced_forms(-23).unwrap(),
            vec![QuadForm::new(1, 1, 6), QuadForm::new(2, -1, 3), QuadForm::new(2, 1, 3)]
        );
        assert!(matches!(reduced_forms(-12), Err(Error::NotFundamental(-12))));
    }

    #[test]
    fn dirichlet_examples() {
        assert_eq!(class_number_dirichlet(-23).unwrap(), 3);
        assert_eq!(class_number_dirichlet(-11).unwrap(), 1);
        assert_eq!(class_number_dirichlet(-163).unwrap(), 1);
        assert_eq!(class_number_dirichlet(-4).unwrap(), 1);
        assert_eq!(class_number_dirichlet(-3).unwrap(), 1);
    }

    #[test]
    fn reduction_tracks_transform() {
        let f = QuadForm::new(13, 31, 19);
        let (g, m) = f.reduce_tracking();
        assert!(g.is_reduced());
        assert_eq!(g.disc(), f.disc());
        let ev = |x: i64, y: i64| f.a * x * x + f.b * x * y + f.c * y * y;
        assert_eq!(ev(m[0][0], m[1][0]), g.a);
        assert_eq!(m[0][0] * m[1][1] - m[0][1] * m[1][0], 1);
    }

    #[test]
    fn composition_is_a_group_law() {
        for d in [-23i64, -47, -56, -71, -84, -199, -359, -420] {
            let forms = reduced_forms(d).unwrap();
            let h = forms.len() as u64;
            let id = QuadForm::identity(d);
            for f in &forms {
                assert_eq!(f.compose(&id), *f);
                assert_eq!(f.compose(&f.inverse()), id);
                assert_eq!(h % f.order(), 0);
                for g in &forms {
                    let fg = f.compose(g);
                    assert!(fg.is_reduced());
                    assert_eq!(fg, g.compose(f));
                    for k in forms.iter().take(4) {
                        assert_eq!(fg.compose(k), f.compose(&g.compose(k)));
                    }
                }
            }
        }
    }
}
