use num::{BigInt, Integer, ToPrimitive};

use super::Rational;
use crate::error::{Error, Result};

/// 2^31 - 1, the default screening prime.
pub const DEFAULT_PRIME: u64 = 2_147_483_647;

/// Element of the prime field of order `modulus`. Arithmetic between
/// elements of different fields panics.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fp {
    value: u64,
    modulus: u64,
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

impl Fp {
    pub fn new(value: u64, modulus: u64) -> Self {
        Fp {
            value: value % modulus,
            modulus,
        }
    }

    pub fn from_int(n: &BigInt, modulus: u64) -> Self {
        let r = n.mod_floor(&BigInt::from(modulus));
        Fp {
            value: r.to_u64().expect("residue fits in u64"),
            modulus,
        }
    }

    /// Image of a rational; fails when the denominator vanishes mod p.
    pub fn from_rational(r: &Rational, modulus: u64) -> Result<Self> {
        let num = Fp::from_int(r.numer(), modulus);
        let den = Fp::from_int(r.denom(), modulus);
        if den.value == 0 {
            return Err(Error::BadPrime(modulus));
        }
        Ok(num * den.inv())
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> u64 {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn inv(self) -> Self {
        assert!(self.value != 0, "inverse of zero in F_{}", self.modulus);
        Fp {
            value: pow_mod(self.value, self.modulus - 2, self.modulus),
            modulus: self.modulus,
        }
    }

    fn check(self, other: Fp) {
        assert_eq!(
            self.modulus, other.modulus,
            "mixing F_{} and F_{}",
            self.modulus, other.modulus
        );
    }
}

impl std::ops::Add for Fp {
    type Output = Fp;
    fn add(self, o: Fp) -> Fp {
        self.check(o);
        let s = self.value as u128 + o.value as u128;
        Fp {
            value: (s % self.modulus as u128) as u64,
            modulus: self.modulus,
        }
    }
}

impl std::ops::Sub for Fp {
    type Output = Fp;
    fn sub(self, o: Fp) -> Fp {
        self.check(o);
        let v = if self.value >= o.value {
            self.value - o.value
        } else {
            self.modulus - (o.value - self.value)
        };
        Fp {
            value: v,
            modulus: self.modulus,
        }
    }
}

impl std::ops::Mul for Fp {
    type Output = Fp;
    fn mul(self, o: Fp) -> Fp {
        self.check(o);
        Fp {
            value: mul_mod(self.value, o.value, self.modulus),
            modulus: self.modulus,
        }
    }
}

impl std::ops::Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        Fp {
            value: if self.value == 0 { 0 } else { self.modulus - self.value },
            modulus: self.modulus,
        }
    }
}
