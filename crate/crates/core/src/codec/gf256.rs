//! Byte-field arithmetic under the reduction polynomial 0x11B.

// Addition and subtraction are both xor and division multiplies by the
// inverse; the operator bodies are the field definitions.
#![allow(clippy::suspicious_arithmetic_impl, clippy::suspicious_op_assign_impl)]

use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Sub, SubAssign};

/// Reduction polynomial x⁸ + x⁴ + x³ + x + 1.
pub const REDUCTION_POLY: u16 = 0x11B;

/// Number of field elements.
pub const FIELD_SIZE: usize = 256;

// Exponential and logarithm tables over the generator 0x03, built at compile
// time. The exp table is doubled so products can index log[a] + log[b]
// without a reduction mod 255.
const fn build_tables() -> ([u8; 512], [u8; 256]) {
    let mut exp = [0u8; 512];
    let mut log = [0u8; 256];
    let mut x: u8 = 1;
    let mut i = 0usize;
    while i < 255 {
        exp[i] = x;
        log[x as usize] = i as u8;
        // x <- x * 3 = x ^ (x * 2 mod 0x11B)
        let doubled = (x << 1) ^ (((x >> 7) & 1) * 0x1B);
        x ^= doubled;
        i += 1;
    }
    let mut j = 255usize;
    while j < 512 {
        exp[j] = exp[j - 255];
        j += 1;
    }
    (exp, log)
}

const TABLES: ([u8; 512], [u8; 256]) = build_tables();
const EXP: [u8; 512] = TABLES.0;
const LOG: [u8; 256] = TABLES.1;

/// Element of GF(2⁸).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Gf256(pub u8);

impl Gf256 {
    pub const ZERO: Self = Gf256(0);
    pub const ONE: Self = Gf256(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Multiplicative inverse; panics on zero.
    #[inline]
    pub fn inv(self) -> Self {
        assert!(self.0 != 0, "zero has no inverse in GF(2^8)");
        Gf256(EXP[255 - LOG[self.0 as usize] as usize])
    }
}

impl Add for Gf256 {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        Gf256(self.0 ^ rhs.0)
    }
}

impl AddAssign for Gf256 {
    #[inline]
    fn add_assign(&mut self, rhs: Self) {
        self.0 ^= rhs.0;
    }
}

impl Sub for Gf256 {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        Gf256(self.0 ^ rhs.0)
    }
}

impl SubAssign for Gf256 {
    #[inline]
    fn sub_assign(&mut self, rhs: Self) {
        self.0 ^= rhs.0;
    }
}

impl Mul for Gf256 {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        if self.0 == 0 || rhs.0 == 0 {
            return Gf256(0);
        }
        Gf256(EXP[LOG[self.0 as usize] as usize + LOG[rhs.0 as usize] as usize])
    }
}

impl MulAssign for Gf256 {
    #[inline]
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}

impl Div for Gf256 {
    type Output = Self;
    #[inline]
    fn div(self, rhs: Self) -> Self {
        self * rhs.inv()
    }
}
