//! Arithmetic modulo a fixed 62-bit prime, used to prescreen large row
//! reductions before the exact rational pass.

use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::rational::Rational;

/// 2^62 - 57, prime.
pub const MODULUS: u64 = (1u64 << 62) - 57;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct ModP(pub u64);

impl ModP {
    pub fn new(v: u64) -> Self {
        ModP(v % MODULUS)
    }

    pub fn from_bigint(v: &BigInt) -> Self {
        let m = BigInt::from(MODULUS);
        let r = v.mod_floor(&m);
        ModP(r.to_u64().expect("reduced residue fits in u64"))
    }

    /// Image of a rational; `None` when the denominator vanishes mod p.
    pub fn from_rational(r: &Rational) -> Option<Self> {
        let den = ModP::from_bigint(r.denom());
        if den.0 == 0 {
            return None;
        }
        Some(ModP::from_bigint(r.numer()) * den.inv())
    }

    pub fn pow(self, mut e: u64) -> ModP {
        let mut base = self;
        let mut acc = ModP(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(self) -> ModP {
        assert!(self.0 != 0, "inverse of zero mod p");
        self.pow(MODULUS - 2)
    }
}

impl Add for ModP {
    type Output = ModP;
    fn add(self, o: ModP) -> ModP {
        let s = self.0 + o.0;
        ModP(if s >= MODULUS { s - MODULUS } else { s })
    }
}

impl Sub for ModP {
    type Output = ModP;
    fn sub(self, o: ModP) -> ModP {
        ModP(if self.0 >= o.0 {
            self.0 - o.0
        } else {
            self.0 + MODULUS - o.0
        })
    }
}

impl Mul for ModP {
    type Output = ModP;
    fn mul(self, o: ModP) -> ModP {
        ModP(((self.0 as u128 * o.0 as u128) % MODULUS as u128) as u64)
    }
}
