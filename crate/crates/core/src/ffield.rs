//! Exact arithmetic in the prime field F_p and in its quadratic extension
//! F_p(√ε), where ε is the smallest quadratic non-residue.

use std::fmt;

use thiserror::Error;

/// Largest modulus accepted by [`PrimeField::new`].
pub const MAX_PRIME: u64 = 10_007;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("invalid modulus {0}: not prime or not odd")]
    InvalidModulus(u64),
    #[error("modulus {0} exceeds the supported range (p <= {MAX_PRIME})")]
    ModulusTooLarge(u64),
    #[error("field mismatch: element over p={found}, field is p={expected}")]
    FieldMismatch { expected: u32, found: u32 },
    #[error("zero element has no multiplicative order or inverse")]
    ZeroElement,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

pub fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    let mut result = 1 % m;
    let mut b = base % m;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    result
}

/// Distinct prime factors of `n`, ascending.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Least k >= 1 with `pow(k) == 1`, given that `pow(group_order) == 1`.
fn order_dividing(group_order: u64, is_one_at: impl Fn(u64) -> bool) -> u64 {
    let mut order = group_order;
    for q in prime_factors(group_order) {
        while order % q == 0 && is_one_at(order / q) {
            order /= q;
        }
    }
    order
}

fn check_odd_prime(p: u64) -> Result<(), FieldError> {
    if p < 3 || !is_prime(p) {
        return Err(FieldError::InvalidModulus(p));
    }
    if p > MAX_PRIME {
        return Err(FieldError::ModulusTooLarge(p));
    }
    Ok(())
}

/// Smallest n >= 2 that is a quadratic non-residue mod `p`.
pub fn smallest_nonresidue(p: u64) -> Result<u32, FieldError> {
    check_odd_prime(p)?;
    let half = (p - 1) / 2;
    (2..p)
        .find(|&n| pow_mod(n, half, p) == p - 1)
        .map(|n| n as u32)
        .ok_or(FieldError::InvalidModulus(p))
}

/// Smallest primitive root mod `p`.
pub fn smallest_primitive_root(p: u64) -> Result<u32, FieldError> {
    check_odd_prime(p)?;
    let factors = prime_factors(p - 1);
    (2..p)
        .find(|&g| factors.iter().all(|&q| pow_mod(g, (p - 1) / q, p) != 1))
        .map(|g| g as u32)
        .ok_or(FieldError::InvalidModulus(p))
}

/// The field F_p together with the fixed non-residue ε and primitive root
/// used to index characters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
    epsilon: u32,
    primitive_root: u32,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        let epsilon = smallest_nonresidue(p)?;
        let primitive_root = smallest_primitive_root(p)?;
        Ok(PrimeField {
            p: p as u32,
            epsilon,
            primitive_root,
        })
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn epsilon(&self) -> u32 {
        self.epsilon
    }

    #[inline]
    pub fn primitive_root(&self) -> u32 {
        self.primitive_root
    }

    #[inline]
    pub fn reduce(&self, x: i64) -> u32 {
        x.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.p as u64) as u32
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        ((a as u64 + self.p as u64 - b as u64 % self.p as u64) % self.p as u64) as u32
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        (a as u64 * b as u64 % self.p as u64) as u32
    }

    pub fn pow(&self, a: u32, exp: u64) -> u32 {
        pow_mod(a as u64, exp, self.p as u64) as u32
    }

    pub fn inv(&self, a: u32) -> Result<u32, FieldError> {
        if a % self.p == 0 {
            return Err(FieldError::ZeroElement);
        }
        Ok(self.pow(a, self.p as u64 - 2))
    }

    /// Whether `a` is a nonzero square.
    pub fn is_square(&self, a: u32) -> bool {
        let a = a % self.p;
        a != 0 && self.pow(a, (self.p as u64 - 1) / 2) == 1
    }

    /// A square root of `a`, if one exists (Tonelli–Shanks).
    pub fn sqrt(&self, a: u32) -> Option<u32> {
        let p = self.p as u64;
        let a = a as u64 % p;
        if a == 0 {
            return Some(0);
        }
        if !self.is_square(a as u32) {
            return None;
        }
        if p % 4 == 3 {
            return Some(pow_mod(a, (p + 1) / 4, p) as u32);
        }
        let mut q = p - 1;
        let mut s = 0;
        while q % 2 == 0 {
            q /= 2;
            s += 1;
        }
        let z = self.epsilon as u64;
        let mut m = s;
        let mut c = pow_mod(z, q, p);
        let mut t = pow_mod(a, q, p);
        let mut r = pow_mod(a, (q + 1) / 2, p);
        while t != 1 {
            let mut i = 0;
            let mut t2 = t;
            while t2 != 1 {
                t2 = t2 * t2 % p;
                i += 1;
            }
            let b = pow_mod(c, 1 << (m - i - 1), p);
            m = i;
            c = b * b % p;
            t = t * c % p;
            r = r * b % p;
        }
        Some(r as u32)
    }

    /// Multiplicative order of a base-field residue.
    pub fn mult_order(&self, a: u32) -> Result<u64, FieldError> {
        let a = a % self.p;
        if a == 0 {
            return Err(FieldError::ZeroElement);
        }
        Ok(order_dividing(self.p as u64 - 1, |k| self.pow(a, k) == 1))
    }

    /// Discrete logarithm of `a` to the base of the fixed primitive root.
    pub fn dlog(&self, a: u32) -> Result<u64, FieldError> {
        let a = a % self.p;
        if a == 0 {
            return Err(FieldError::ZeroElement);
        }
        let mut acc = 1u32;
        for k in 0..self.p as u64 - 1 {
            if acc == a {
                return Ok(k);
            }
            acc = self.mul(acc, self.primitive_root);
        }
        unreachable!("primitive root generates the unit group")
    }

    pub fn ext(&self, x: i64, y: i64) -> QuadExtElement {
        QuadExtElement {
            x: self.reduce(x),
            y: self.reduce(y),
            p: self.p,
        }
    }

    pub fn ext_one(&self) -> QuadExtElement {
        self.ext(1, 0)
    }

    fn check(&self, z: &QuadExtElement) -> Result<(), FieldError> {
        if z.p != self.p {
            return Err(FieldError::FieldMismatch {
                expected: self.p,
                found: z.p,
            });
        }
        Ok(())
    }

    pub fn ext_mul(
        &self,
        a: &QuadExtElement,
        b: &QuadExtElement,
    ) -> Result<QuadExtElement, FieldError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.ext_mul_unchecked(a, b))
    }

    #[inline]
    pub(crate) fn ext_mul_unchecked(&self, a: &QuadExtElement, b: &QuadExtElement) -> QuadExtElement {
        let p = self.p as u64;
        let (x1, y1, x2, y2) = (a.x as u64, a.y as u64, b.x as u64, b.y as u64);
        let eps = self.epsilon as u64;
        let x = (x1 * x2 + eps * (y1 * y2 % p)) % p;
        let y = (x1 * y2 + x2 * y1) % p;
        QuadExtElement {
            x: x as u32,
            y: y as u32,
            p: self.p,
        }
    }

    pub fn ext_pow(&self, z: &QuadExtElement, mut exp: u64) -> Result<QuadExtElement, FieldError> {
        self.check(z)?;
        let mut result = self.ext_one();
        let mut base = *z;
        while exp > 0 {
            if exp & 1 == 1 {
                result = self.ext_mul_unchecked(&result, &base);
            }
            base = self.ext_mul_unchecked(&base, &base);
            exp >>= 1;
        }
        Ok(result)
    }

    /// Norm x² − εy², i.e. ζ^(p+1).
    pub fn norm(&self, z: &QuadExtElement) -> Result<u32, FieldError> {
        self.check(z)?;
        let xx = self.mul(z.x, z.x);
        let yy = self.mul(self.epsilon, self.mul(z.y, z.y));
        Ok(self.sub(xx, yy))
    }

    /// Frobenius image ζ^p = x − y√ε.
    pub fn conjugate(&self, z: &QuadExtElement) -> QuadExtElement {
        QuadExtElement {
            x: z.x,
            y: self.neg(z.y),
            p: z.p,
        }
    }

    pub fn ext_neg(&self, z: &QuadExtElement) -> QuadExtElement {
        QuadExtElement {
            x: self.neg(z.x),
            y: self.neg(z.y),
            p: z.p,
        }
    }

    pub fn ext_inv(&self, z: &QuadExtElement) -> Result<QuadExtElement, FieldError> {
        let n = self.norm(z)?;
        let n_inv = self.inv(n)?;
        let c = self.conjugate(z);
        Ok(QuadExtElement {
            x: self.mul(c.x, n_inv),
            y: self.mul(c.y, n_inv),
            p: self.p,
        })
    }

    /// Multiplicative order of a nonzero element of F_{p²}.
    pub fn ext_mult_order(&self, z: &QuadExtElement) -> Result<u64, FieldError> {
        self.check(z)?;
        if z.is_zero() {
            return Err(FieldError::ZeroElement);
        }
        let p = self.p as u64;
        let one = self.ext_one();
        Ok(order_dividing(p * p - 1, |k| {
            self.ext_pow(z, k).map(|w| w == one).unwrap_or(false)
        }))
    }

    /// Whether `z` lies in the norm-one subgroup C of order p + 1.
    pub fn in_circle(&self, z: &QuadExtElement) -> bool {
        self.norm(z).map(|n| n == 1).unwrap_or(false)
    }

    /// Generator of C: the lexicographically smallest norm-one element of
    /// order p + 1.
    pub fn circle_generator(&self) -> QuadExtElement {
        let p = self.p as u64;
        for x in 0..self.p {
            for y in 1..self.p {
                let z = QuadExtElement { x, y, p: self.p };
                if self.in_circle(&z) && self.ext_mult_order(&z) == Ok(p + 1) {
                    return z;
                }
            }
        }
        unreachable!("C is cyclic of order p + 1")
    }
}

/// Element x + y√ε of F_{p²}, residues stored in [0, p).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadExtElement {
    pub x: u32,
    pub y: u32,
    pub p: u32,
}

impl QuadExtElement {
    pub fn is_zero(&self) -> bool {
        self.x == 0 && self.y == 0
    }
}

impl fmt::Display for QuadExtElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}s", self.x, self.y)
    }
}
