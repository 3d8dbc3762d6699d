use crate::error::{Error, Result};
use crate::field::Fp;

use super::monomial::MultiIndex;
use super::poly::NcPoly;

pub const DEFAULT_TRUNCATION: usize = 6;

/// A power series in noncommuting variables with all terms of degree above
/// `n` discarded.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TruncSeries {
    poly: NcPoly,
    n: usize,
}

impl TruncSeries {
    pub fn new(poly: NcPoly, n: usize) -> Self {
        TruncSeries {
            poly: poly.truncate(n),
            n,
        }
    }

    pub fn one(field: Fp, ngens: usize, n: usize) -> Self {
        Self::new(NcPoly::one(field, ngens), n)
    }

    /// `1 + X_g`.
    pub fn one_plus_generator(field: Fp, ngens: usize, g: usize, n: usize) -> Self {
        let mut p = NcPoly::one(field, ngens);
        p.add_term(MultiIndex::letter(g), 1);
        Self::new(p, n)
    }

    pub fn poly(&self) -> &NcPoly {
        &self.poly
    }

    pub fn into_poly(self) -> NcPoly {
        self.poly
    }

    pub fn truncation(&self) -> usize {
        self.n
    }

    pub fn mul(&self, other: &TruncSeries) -> TruncSeries {
        let n = self.n.min(other.n);
        TruncSeries {
            poly: self.poly.multiply_truncated(&other.poly, n),
            n,
        }
    }

    /// Inverse of a series with constant term 1, as the sum of `(1 - s)^k`
    /// for `k <= n`.
    pub fn inverse(&self) -> Result<TruncSeries> {
        if self.poly.constant_term() != 1 {
            return Err(Error::InvalidSeries);
        }
        let one = NcPoly::one(self.poly.field(), self.poly.num_generators());
        // u = 1 - s has no constant term, so u^k vanishes for k > n
        let u = TruncSeries::new(one.sub(&self.poly), self.n);
        let mut acc = TruncSeries::new(one.clone(), self.n);
        let mut power = TruncSeries::new(one, self.n);
        for _ in 0..self.n {
            power = power.mul(&u);
            if power.poly.is_zero() {
                break;
            }
            acc = TruncSeries::new(acc.poly.add(&power.poly), self.n);
        }
        Ok(acc)
    }

    /// Square-and-multiply power.
    pub fn pow(&self, mut e: u64) -> TruncSeries {
        let mut base = self.clone();
        let mut acc = TruncSeries::one(self.poly.field(), self.poly.num_generators(), self.n);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}
