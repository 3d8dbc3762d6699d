//! Prime fields F_p with word-sized moduli.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The prime field F_p. Elements are plain `u32` residues in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Fp {
    p: u32,
}

pub const MAX_MODULUS: u64 = 1 << 31;

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2u64;
    while k * k <= n {
        if n.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

impl Fp {
    pub fn new(p: u64) -> Result<Self> {
        if p > MAX_MODULUS || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Fp { p: p as u32 })
    }

    #[inline]
    pub fn p(self) -> u32 {
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
            (a as u64 + self.p as u64 - b as u64) as u32
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

    pub fn pow(self, a: u32, mut e: u64) -> u32 {
        let mut base = a % self.p;
        let mut acc = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(self, a: u32) -> u32 {
        assert!(!a.is_multiple_of(self.p), "inverse of zero in F_{}", self.p);
        self.pow(a, self.p as u64 - 2)
    }

    /// Reduce a signed integer into `[0, p)`.
    pub fn from_i64(self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    /// Symmetric representative in `(-p/2, p/2]`, handy for display.
    pub fn signed(self, a: u32) -> i64 {
        let a = a as i64;
        let p = self.p as i64;
        if a > p / 2 {
            a - p
        } else {
            a
        }
    }

    pub fn scalar(self, v: i64) -> FpScalar {
        FpScalar {
            value: self.from_i64(v),
            p: self.p,
        }
    }
}

impl TryFrom<u32> for Fp {
    type Error = Error;
    fn try_from(p: u32) -> Result<Self> {
        Fp::new(p as u64)
    }
}

impl From<Fp> for u32 {
    fn from(f: Fp) -> u32 {
        f.p
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.p)
    }
}

/// A residue together with its modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FpScalar {
    pub value: u32,
    pub p: u32,
}

impl FpScalar {
    pub fn new(value: i64, field: Fp) -> Self {
        field.scalar(value)
    }

    pub fn field(self) -> Fp {
        Fp { p: self.p }
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn inv(self) -> Option<FpScalar> {
        if self.value == 0 {
            None
        } else {
            Some(FpScalar {
                value: self.field().inv(self.value),
                p: self.p,
            })
        }
    }
}

impl Add for FpScalar {
    type Output = FpScalar;
    fn add(self, o: FpScalar) -> FpScalar {
        assert_eq!(self.p, o.p, "mixed moduli");
        FpScalar {
            value: self.field().add(self.value, o.value),
            p: self.p,
        }
    }
}

impl Sub for FpScalar {
    type Output = FpScalar;
    fn sub(self, o: FpScalar) -> FpScalar {
        assert_eq!(self.p, o.p, "mixed moduli");
        FpScalar {
            value: self.field().sub(self.value, o.value),
            p: self.p,
        }
    }
}

impl Mul for FpScalar {
    type Output = FpScalar;
    fn mul(self, o: FpScalar) -> FpScalar {
        assert_eq!(self.p, o.p, "mixed moduli");
        FpScalar {
            value: self.field().mul(self.value, o.value),
            p: self.p,
        }
    }
}

impl Neg for FpScalar {
    type Output = FpScalar;
    fn neg(self) -> FpScalar {
        FpScalar {
            value: self.field().neg(self.value),
            p: self.p,
        }
    }
}

impl fmt::Display for FpScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}
