//! Coefficient rings and their exact scalars.
//!
//! Three principal ideal domains are supported: the integers, the rationals and
//! the prime fields `Z/p`. Integers and rationals are arbitrary precision;
//! residues are kept canonical in `[0, p)`.

use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoefficientError {
    #[error("{0} is not prime")]
    NotPrime(u64),
}

/// A prime modulus, checked on construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u64);

impl Prime {
    pub const TWO: Prime = Prime(2);

    pub fn new(p: u64) -> Result<Self, CoefficientError> {
        if is_prime(p) {
            Ok(Prime(p))
        } else {
            Err(CoefficientError::NotPrime(p))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }
}

/// Deterministic Miller-Rabin; the witness set below is exact for all `u64`.
fn is_prime(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &w in &WITNESSES {
        if n % w == 0 {
            return n == w;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &WITNESSES {
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

/// The coefficient ring `A` of a cohomology computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CoefficientSpec {
    Integers,
    Rationals,
    PrimeField(Prime),
}

impl CoefficientSpec {
    pub const MOD2: CoefficientSpec = CoefficientSpec::PrimeField(Prime::TWO);

    pub fn is_field(&self) -> bool {
        !matches!(self, CoefficientSpec::Integers)
    }

    /// Zero for the integers and rationals.
    pub fn characteristic(&self) -> u64 {
        match self {
            CoefficientSpec::PrimeField(p) => p.get(),
            _ => 0,
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            CoefficientSpec::Integers => Scalar::Integer(BigInt::from(n)),
            CoefficientSpec::Rationals => Scalar::Rational(BigRational::from_integer(n.into())),
            CoefficientSpec::PrimeField(p) => {
                let p = p.get();
                let r = (n as i128).rem_euclid(p as i128) as u64;
                Scalar::Residue { value: r, modulus: p }
            }
        }
    }

    /// `(-1)^exponent` in this ring.
    pub fn sign(&self, exponent: u64) -> Scalar {
        if exponent % 2 == 0 {
            self.one()
        } else {
            self.from_i64(-1)
        }
    }

    /// Whether `s` is an element of this ring (right variant, canonical residue).
    pub fn contains(&self, s: &Scalar) -> bool {
        match (self, s) {
            (CoefficientSpec::Integers, Scalar::Integer(_)) => true,
            (CoefficientSpec::Rationals, Scalar::Rational(_)) => true,
            (CoefficientSpec::PrimeField(p), Scalar::Residue { value, modulus }) => {
                *modulus == p.get() && value < modulus
            }
            _ => false,
        }
    }
}

impl fmt::Display for CoefficientSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefficientSpec::Integers => f.write_str("Z"),
            CoefficientSpec::Rationals => f.write_str("Q"),
            CoefficientSpec::PrimeField(p) if p.get() == 2 => f.write_str("Z2"),
            CoefficientSpec::PrimeField(p) => write!(f, "Zp:{}", p.get()),
        }
    }
}

/// An exact element of a coefficient ring.
///
/// Mixing variants in arithmetic is a programming error and panics; ring
/// operations check element provenance before any scalar arithmetic happens.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Integer(BigInt),
    Rational(BigRational),
    Residue { value: u64, modulus: u64 },
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Integer(n) => n.is_zero(),
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Residue { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Integer(n) => n.is_one(),
            Scalar::Rational(q) => q.is_one(),
            Scalar::Residue { value, .. } => *value == 1,
        }
    }

    /// Units of the ring: `±1` over the integers, any nonzero element over a field.
    pub fn is_unit(&self) -> bool {
        match self {
            Scalar::Integer(n) => n.abs().is_one(),
            _ => !self.is_zero(),
        }
    }

    /// Multiplicative inverse, when it exists.
    pub fn inverse(&self) -> Option<Scalar> {
        match self {
            Scalar::Integer(n) => n.abs().is_one().then(|| self.clone()),
            Scalar::Rational(q) => (!q.is_zero()).then(|| Scalar::Rational(q.recip())),
            Scalar::Residue { value, modulus } => (*value != 0).then(|| Scalar::Residue {
                value: pow_mod(*value, modulus - 2, *modulus),
                modulus: *modulus,
            }),
        }
    }
}

fn mismatch() -> ! {
    panic!("scalar arithmetic across different coefficient rings")
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Integer(a), Scalar::Integer(b)) => Scalar::Integer(a + b),
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Residue { value: a, modulus: p }, Scalar::Residue { value: b, modulus: q })
                if p == q =>
            {
                Scalar::Residue { value: ((*a as u128 + *b as u128) % *p as u128) as u64, modulus: *p }
            }
            _ => mismatch(),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Integer(a) => Scalar::Integer(-a),
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Residue { value, modulus } => Scalar::Residue {
                value: if *value == 0 { 0 } else { modulus - value },
                modulus: *modulus,
            },
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Integer(a), Scalar::Integer(b)) => Scalar::Integer(a * b),
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Residue { value: a, modulus: p }, Scalar::Residue { value: b, modulus: q })
                if p == q =>
            {
                Scalar::Residue { value: mul_mod(*a, *b, *p), modulus: *p }
            }
            _ => mismatch(),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Integer(n) => write!(f, "{n}"),
            Scalar::Rational(q) if q.denom().is_one() => write!(f, "{}", q.numer()),
            Scalar::Rational(q) => write!(f, "{}/{}", q.numer(), q.denom()),
            Scalar::Residue { value, .. } => write!(f, "{value}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn primality() {
        let small: alloc::vec::Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]);
        assert!(is_prime(18_446_744_073_709_551_557));
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to bases 2, 3, 5, 7
        assert!(Prime::new(1).is_err());
        assert!(Prime::new(91).is_err());
    }

    #[test]
    fn residues_are_canonical() {
        let z7 = CoefficientSpec::PrimeField(Prime::new(7).unwrap());
        assert_eq!(z7.from_i64(-1), Scalar::Residue { value: 6, modulus: 7 });
        assert_eq!(z7.from_i64(15), Scalar::Residue { value: 1, modulus: 7 });
        let three = z7.from_i64(3);
        assert_eq!(&three * &three.inverse().unwrap(), z7.one());
        assert!(z7.contains(&three));
    }

    #[test]
    fn characteristic_two_signs_collapse() {
        let z2 = CoefficientSpec::MOD2;
        assert_eq!(z2.sign(1), z2.one());
        let u = z2.one();
        assert!((&u + &u).is_zero());
    }

    #[test]
    fn integer_units() {
        let z = CoefficientSpec::Integers;
        assert!(z.from_i64(-1).is_unit());
        assert!(!z.from_i64(2).is_unit());
        assert!(z.from_i64(2).inverse().is_none());
        assert_eq!(z.from_i64(2).to_string(), "2");
        let q = CoefficientSpec::Rationals;
        let half = q.from_i64(2).inverse().unwrap();
        assert_eq!(half.to_string(), "1/2");
    }

    #[test]
    fn linear_combination() {
        let z = CoefficientSpec::Integers;
        assert_eq!(&z.from_i64(2) + &z.from_i64(3), z.from_i64(5));
    }
}
