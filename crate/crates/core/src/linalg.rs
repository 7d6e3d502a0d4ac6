//! Fixed-size 2-component complex vectors and 2×2 complex matrices.
//!
//! Index 0 is the left chirality `|L⟩`, index 1 the right chirality `|R⟩`.

use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec2(pub [Complex64; 2]);

impl Vec2 {
    pub const ZERO: Vec2 = Vec2([ZERO, ZERO]);
    /// `|L⟩ = (1, 0)ᵀ`
    pub const LEFT: Vec2 = Vec2([ONE, ZERO]);
    /// `|R⟩ = (0, 1)ᵀ`
    pub const RIGHT: Vec2 = Vec2([ZERO, ONE]);

    pub fn new(l: Complex64, r: Complex64) -> Self {
        Vec2([l, r])
    }

    pub fn left(&self) -> Complex64 {
        self.0[0]
    }

    pub fn right(&self) -> Complex64 {
        self.0[1]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0[0].norm_sqr() + self.0[1].norm_sqr()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `⟨self|other⟩`, antilinear in `self`.
    pub fn inner(&self, other: &Vec2) -> Complex64 {
        self.0[0].conj() * other.0[0] + self.0[1].conj() * other.0[1]
    }

    pub fn scale(&self, c: Complex64) -> Vec2 {
        Vec2([self.0[0] * c, self.0[1] * c])
    }

    pub fn max_abs_diff(&self, other: &Vec2) -> f64 {
        (self.0[0] - other.0[0])
            .norm()
            .max((self.0[1] - other.0[1]).norm())
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, rhs: Vec2) -> Vec2 {
        Vec2([self.0[0] + rhs.0[0], self.0[1] + rhs.0[1]])
    }
}

impl AddAssign for Vec2 {
    fn add_assign(&mut self, rhs: Vec2) {
        self.0[0] += rhs.0[0];
        self.0[1] += rhs.0[1];
    }
}

impl Index<usize> for Vec2 {
    type Output = Complex64;
    fn index(&self, i: usize) -> &Complex64 {
        &self.0[i]
    }
}

/// Row-major 2×2 complex matrix.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Mat2(pub [[Complex64; 2]; 2]);

impl Mat2 {
    pub const ZERO: Mat2 = Mat2([[ZERO, ZERO], [ZERO, ZERO]]);
    pub const IDENTITY: Mat2 = Mat2([[ONE, ZERO], [ZERO, ONE]]);

    pub fn new(m00: Complex64, m01: Complex64, m10: Complex64, m11: Complex64) -> Self {
        Mat2([[m00, m01], [m10, m11]])
    }

    /// Outer product `|u⟩⟨v|`.
    pub fn outer(u: &Vec2, v: &Vec2) -> Self {
        Mat2([
            [u.0[0] * v.0[0].conj(), u.0[0] * v.0[1].conj()],
            [u.0[1] * v.0[0].conj(), u.0[1] * v.0[1].conj()],
        ])
    }

    pub fn adjoint(&self) -> Mat2 {
        let m = &self.0;
        Mat2([
            [m[0][0].conj(), m[1][0].conj()],
            [m[0][1].conj(), m[1][1].conj()],
        ])
    }

    pub fn det(&self) -> Complex64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn scale(&self, c: Complex64) -> Mat2 {
        let m = &self.0;
        Mat2([[m[0][0] * c, m[0][1] * c], [m[1][0] * c, m[1][1] * c]])
    }

    pub fn row(&self, i: usize) -> Vec2 {
        Vec2(self.0[i])
    }

    /// Row vector `⟨v| M`, returned as the row's entries.
    pub fn bra_mul(v: &Vec2, m: &Mat2) -> [Complex64; 2] {
        let (a, b) = (v.0[0].conj(), v.0[1].conj());
        [a * m.0[0][0] + b * m.0[1][0], a * m.0[0][1] + b * m.0[1][1]]
    }

    /// Keeps only row `i`, zeroing the other; `|e_i⟩⟨e_i| M`.
    pub fn project_row(&self, i: usize) -> Mat2 {
        let mut out = Mat2::ZERO;
        out.0[i] = self.0[i];
        out
    }

    pub fn max_abs_diff(&self, other: &Mat2) -> f64 {
        let mut d: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                d = d.max((self.0[i][j] - other.0[i][j]).norm());
            }
        }
        d
    }

    /// Largest entry-wise deviation of `M†M` and `MM†` from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        let left = self.adjoint() * *self;
        let right = *self * self.adjoint();
        left.max_abs_diff(&Mat2::IDENTITY)
            .max(right.max_abs_diff(&Mat2::IDENTITY))
    }
}

impl Index<(usize, usize)> for Mat2 {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.0[i][j]
    }
}

impl IndexMut<(usize, usize)> for Mat2 {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.0[i][j]
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &rhs.0);
        Mat2([
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ])
    }
}

impl Mul<Vec2> for Mat2 {
    type Output = Vec2;
    fn mul(self, v: Vec2) -> Vec2 {
        let m = &self.0;
        Vec2([
            m[0][0] * v.0[0] + m[0][1] * v.0[1],
            m[1][0] * v.0[0] + m[1][1] * v.0[1],
        ])
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, rhs: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &rhs.0);
        Mat2([
            [a[0][0] + b[0][0], a[0][1] + b[0][1]],
            [a[1][0] + b[1][0], a[1][1] + b[1][1]],
        ])
    }
}

impl AddAssign for Mat2 {
    fn add_assign(&mut self, rhs: Mat2) {
        *self = *self + rhs;
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, rhs: Mat2) -> Mat2 {
        self + rhs.scale(Complex64::new(-1.0, 0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn product_and_adjoint() {
        let m = Mat2::new(c(1.0, 1.0), c(2.0, 0.0), c(0.0, -1.0), c(3.0, 0.5));
        let n = Mat2::new(c(0.0, 1.0), c(1.0, 0.0), c(2.0, 0.0), c(-1.0, 0.0));
        // (MN)† = N†M†
        let lhs = (m * n).adjoint();
        let rhs = n.adjoint() * m.adjoint();
        assert!(lhs.max_abs_diff(&rhs) < 1e-15);
        assert_eq!((m * Mat2::IDENTITY), m);
    }

    #[test]
    fn outer_and_bra() {
        let u = Vec2::new(c(1.0, 2.0), c(0.0, -1.0));
        let p = Mat2::outer(&Vec2::LEFT, &Vec2::LEFT);
        assert_eq!(p * u, Vec2::new(u[0], c(0.0, 0.0)));
        let m = Mat2::new(c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0), c(4.0, 0.0));
        assert_eq!(Mat2::bra_mul(&Vec2::RIGHT, &m), [c(3.0, 0.0), c(4.0, 0.0)]);
        assert_eq!(m.project_row(1).row(0), Vec2::ZERO);
    }
}
