use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{Num, One};
use serde::{Deserialize, Serialize};

/// Coefficient ring of a multivector (real, complex or exact rational).
pub trait Coeff: Copy + Num + Neg<Output = Self> {}

impl<T: Copy + Num + Neg<Output = T>> Coeff for T {}

/// Blade names in storage order.
pub const BLADE_NAMES: [&str; 8] = ["1", "e1", "e2", "e3", "e12", "e13", "e23", "e123"];

/// Basis-vector bitmask of each storage slot (bit k set means `e_{k+1}` is a factor).
pub const BLADE_MASKS: [u8; 8] = [0b000, 0b001, 0b010, 0b100, 0b011, 0b101, 0b110, 0b111];

/// Storage slot of each bitmask.
const SLOT_OF_MASK: [usize; 8] = [0, 1, 2, 4, 3, 5, 6, 7];

pub const GRADES: [usize; 8] = [0, 1, 1, 1, 2, 2, 2, 3];

/// Slot of the vector blade `e_{axis+1}`.
pub const fn vector_slot(axis: usize) -> usize {
    axis + 1
}

/// Sign picked up when the concatenated product of blades `a` and `b` is
/// reordered into canonical ascending order (Euclidean metric, `e_i^2 = 1`).
const fn reorder_sign(a: u8, b: u8) -> i8 {
    let mut a = a >> 1;
    let mut swaps = 0;
    while a != 0 {
        swaps += (a & b).count_ones();
        a >>= 1;
    }
    if swaps % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `(sign, slot)` of the product of basis blades in slots `i` and `j`.
pub const fn blade_product(i: usize, j: usize) -> (i8, usize) {
    let (a, b) = (BLADE_MASKS[i], BLADE_MASKS[j]);
    (reorder_sign(a, b), SLOT_OF_MASK[(a ^ b) as usize])
}

/// Dense element of the geometric algebra of Euclidean 3-space.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Multivector<T = Complex64> {
    pub c: [T; 8],
}

impl<T: Coeff> Multivector<T> {
    pub fn zero() -> Self {
        Self { c: [T::zero(); 8] }
    }

    pub fn scalar(s: T) -> Self {
        let mut m = Self::zero();
        m.c[0] = s;
        m
    }

    /// The unit blade in `slot` (see [`BLADE_NAMES`]).
    pub fn blade(slot: usize) -> Self {
        let mut m = Self::zero();
        m.c[slot] = T::one();
        m
    }

    /// Basis vector `e_{axis+1}`.
    pub fn e(axis: usize) -> Self {
        Self::blade(vector_slot(axis))
    }

    pub fn vector(v: [T; 3]) -> Self {
        let mut m = Self::zero();
        m.c[1..4].copy_from_slice(&v);
        m
    }

    pub fn vector_part(&self) -> [T; 3] {
        [self.c[1], self.c[2], self.c[3]]
    }

    pub fn scale(&self, s: T) -> Self {
        let mut m = *self;
        for x in &mut m.c {
            *x = *x * s;
        }
        m
    }

    /// `<A>_k`.
    pub fn grade(&self, k: usize) -> Self {
        let mut m = Self::zero();
        for (slot, &g) in GRADES.iter().enumerate() {
            if g == k {
                m.c[slot] = self.c[slot];
            }
        }
        m
    }

    /// True when only blades of grade `k` are nonzero.
    pub fn is_homogeneous(&self, k: usize) -> bool {
        (0..8).all(|s| GRADES[s] == k || self.c[s].is_zero())
    }

    /// Reversion: blade of grade k picks up `(-1)^{k(k-1)/2}`.
    pub fn reverse(&self) -> Self {
        let mut m = *self;
        for (c, &g) in m.c.iter_mut().zip(&GRADES) {
            if matches!(g, 2 | 3) {
                *c = -*c;
            }
        }
        m
    }

    /// Grade involution: blade of grade k picks up `(-1)^k`.
    pub fn involute(&self) -> Self {
        let mut m = *self;
        for (c, &g) in m.c.iter_mut().zip(&GRADES) {
            if g % 2 == 1 {
                *c = -*c;
            }
        }
        m
    }

    /// Bilinear product keeping only blade pairs accepted by `keep(slot_a, slot_b, slot_out)`.
    fn filtered_product(&self, rhs: &Self, keep: impl Fn(usize, usize, usize) -> bool) -> Self {
        let mut out = Self::zero();
        for i in 0..8 {
            if self.c[i].is_zero() {
                continue;
            }
            for j in 0..8 {
                if rhs.c[j].is_zero() {
                    continue;
                }
                let (sign, slot) = blade_product(i, j);
                if !keep(i, j, slot) {
                    continue;
                }
                let term = self.c[i] * rhs.c[j];
                out.c[slot] = if sign > 0 {
                    out.c[slot] + term
                } else {
                    out.c[slot] - term
                };
            }
        }
        out
    }

    /// Geometric product `AB`.
    pub fn gp(&self, rhs: &Self) -> Self {
        self.filtered_product(rhs, |_, _, _| true)
    }

    /// Outer product: the grade `r + s` part of each blade product.
    pub fn wedge(&self, rhs: &Self) -> Self {
        self.filtered_product(rhs, |i, j, _| BLADE_MASKS[i] & BLADE_MASKS[j] == 0)
    }

    /// Hestenes inner product: grade `|r - s|` part of each blade product,
    /// zero whenever either factor is a scalar.
    pub fn contraction(&self, rhs: &Self) -> Self {
        self.filtered_product(rhs, |i, j, out| {
            let (r, s) = (GRADES[i], GRADES[j]);
            r > 0 && s > 0 && GRADES[out] == r.abs_diff(s)
        })
    }

    /// Scalar product `<AB>_0`.
    pub fn scalar_product(&self, rhs: &Self) -> T {
        self.filtered_product(rhs, |_, _, out| out == 0).c[0]
    }
}

impl Multivector<Complex64> {
    /// Complex conjugate of every coefficient (not a Clifford conjugation).
    pub fn conj(&self) -> Self {
        let mut m = *self;
        for x in &mut m.c {
            *x = x.conj();
        }
        m
    }

    pub fn max_abs(&self) -> f64 {
        self.c.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.c.iter().all(|x| x.re.is_finite() && x.im.is_finite())
    }
}

impl<T: Coeff> Default for Multivector<T> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<T: Coeff> Add for Multivector<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut m = self;
        for (a, b) in m.c.iter_mut().zip(rhs.c) {
            *a = *a + b;
        }
        m
    }
}

impl<T: Coeff> Sub for Multivector<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let mut m = self;
        for (a, b) in m.c.iter_mut().zip(rhs.c) {
            *a = *a - b;
        }
        m
    }
}

impl<T: Coeff> Neg for Multivector<T> {
    type Output = Self;
    fn neg(self) -> Self {
        let mut m = self;
        for a in &mut m.c {
            *a = -*a;
        }
        m
    }
}

impl<T: Coeff> Mul for Multivector<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.gp(&rhs)
    }
}

impl<T: Coeff> One for Multivector<T> {
    fn one() -> Self {
        Self::scalar(T::one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type M = Multivector<f64>;

    #[test]
    fn basis_relations() {
        let (e1, e2) = (M::e(0), M::e(1));
        assert_eq!(e1 * e1, M::scalar(1.0));
        assert_eq!(e1 * e2, M::blade(4));
        assert_eq!(e2 * e1, -M::blade(4));
        assert_eq!((e1 + e2) * (e1 - e2), M::blade(4).scale(-2.0));
        // e123 squares to -1 in Euclidean 3-space.
        assert_eq!(M::blade(7) * M::blade(7), M::scalar(-1.0));
    }

    #[test]
    fn contraction_and_wedge_examples() {
        let a = M::e(0);
        let a2 = M::blade(4);
        assert_eq!(a.contraction(&a2), M::e(1));
        assert_eq!(a.wedge(&a2), M::zero());
        let s = M::scalar(2.5);
        let any = M::vector([1.0, 2.0, 3.0]) + M::blade(6);
        assert_eq!(s.contraction(&any), M::zero());
        assert_eq!(any.contraction(&s), M::zero());
    }

    #[test]
    fn vector_product_decomposes() {
        let a = M::vector([1.0, -2.0, 0.5]);
        let b = M::vector([0.25, 3.0, -1.0]);
        let dot = M::scalar(a.scalar_product(&b));
        assert_eq!(dot + a.wedge(&b), a * b);
        assert_eq!(a.contraction(&b), dot);
    }

    #[test]
    fn reciprocal_basis_duality() {
        for i in 0..3 {
            for j in 0..3 {
                let d = M::e(i).scalar_product(&M::e(j));
                assert_eq!(d, if i == j { 1.0 } else { 0.0 });
            }
        }
    }
}
