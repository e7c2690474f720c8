use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::LinalgError;

/// The prime field F_p. Residues are stored as `u32` in `[0, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fp {
    p: u32,
}

/// Largest modulus accepted; keeps products of two residues inside `u64`
/// with room for a few additions before reduction.
pub const MAX_MODULUS: u32 = (1 << 31) - 1;

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d * d <= n as u64 {
        if (n as u64).is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

impl Fp {
    pub fn new(p: u32) -> Result<Self, LinalgError> {
        if p > MAX_MODULUS || !is_prime(p) {
            return Err(LinalgError::NotPrime(p));
        }
        Ok(Fp { p })
    }

    #[inline]
    pub fn modulus(self) -> u32 {
        self.p
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        let p = self.p as u64;
        (if s >= p { s - p } else { s }) as u32
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + (self.p - b)
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    pub fn pow(self, mut a: u32, mut e: u64) -> u32 {
        let mut r = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        // extended Euclid on (a, p)
        let (mut r0, mut r1) = (self.p as i64, a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        Some(t0.rem_euclid(self.p as i64) as u32)
    }

    #[inline]
    pub fn from_i64(self, x: i64) -> u32 {
        x.rem_euclid(self.p as i64) as u32
    }

    /// Symmetric representative in `(-p/2, p/2]`, used for printing.
    pub fn to_signed(self, a: u32) -> i64 {
        if a > self.p / 2 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }

    pub fn scalar(self, value: i64) -> Scalar {
        Scalar {
            value: self.from_i64(value),
            field: self,
        }
    }
}

/// A residue together with its modulus. Arithmetic between scalars of
/// different moduli panics; use the `checked_*` methods to get an error.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Scalar {
    value: u32,
    field: Fp,
}

impl Scalar {
    pub fn value(self) -> u32 {
        self.value
    }

    pub fn field(self) -> Fp {
        self.field
    }

    fn same_field(self, other: Scalar) -> Result<Fp, LinalgError> {
        if self.field != other.field {
            return Err(LinalgError::ModulusMismatch {
                left: self.field.p,
                right: other.field.p,
            });
        }
        Ok(self.field)
    }

    pub fn checked_add(self, other: Scalar) -> Result<Scalar, LinalgError> {
        let f = self.same_field(other)?;
        Ok(Scalar { value: f.add(self.value, other.value), field: f })
    }

    pub fn checked_sub(self, other: Scalar) -> Result<Scalar, LinalgError> {
        let f = self.same_field(other)?;
        Ok(Scalar { value: f.sub(self.value, other.value), field: f })
    }

    pub fn checked_mul(self, other: Scalar) -> Result<Scalar, LinalgError> {
        let f = self.same_field(other)?;
        Ok(Scalar { value: f.mul(self.value, other.value), field: f })
    }

    pub fn inv(self) -> Option<Scalar> {
        self.field.inv(self.value).map(|value| Scalar { value, field: self.field })
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.field.p)
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        self.checked_add(rhs).expect("scalar modulus mismatch")
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        self.checked_sub(rhs).expect("scalar modulus mismatch")
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        self.checked_mul(rhs).expect("scalar modulus mismatch")
    }
}

impl Div for Scalar {
    type Output = Scalar;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Scalar) -> Scalar {
        self * rhs.inv().expect("division by zero in F_p")
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { value: self.field.neg(self.value), field: self.field }
    }
}
