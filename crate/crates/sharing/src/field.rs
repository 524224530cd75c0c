use serde::{Deserialize, Serialize};

use crate::ShareError;

pub fn is_prime(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= q {
        if q % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn smallest_prime_above(m: u64) -> u64 {
    let mut q = m + 1;
    while !is_prime(q) {
        q += 1;
    }
    q
}

/// The prime field `F_q`. Elements are plain `u64` values in `[0, q)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Field {
    q: u64,
}

impl Field {
    pub fn new(q: u64) -> Result<Self, ShareError> {
        if q >= 1 << 32 {
            return Err(ShareError::Params(format!("modulus {q} exceeds 2^32")));
        }
        if !is_prime(q) {
            return Err(ShareError::NotPrime(q));
        }
        Ok(Field { q })
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    #[inline]
    pub fn reduce(&self, v: u64) -> u64 {
        v % self.q
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.q {
            s - self.q
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.q - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.q - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.q
    }

    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1 % self.q;
        a %= self.q;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self, a: u64) -> u64 {
        assert!(a % self.q != 0, "inverse of zero in F_{}", self.q);
        self.pow(a, self.q - 2)
    }

    pub fn div(&self, a: u64, b: u64) -> u64 {
        self.mul(a, self.inv(b))
    }

    /// Embeds a signed integer.
    pub fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.q as i64) as u64
    }

    /// Lagrange coefficients `λ_j` with `p(at) = Σ λ_j p(x_j)`.
    pub fn lagrange_coeffs(&self, xs: &[u64], at: u64) -> Vec<u64> {
        xs.iter()
            .enumerate()
            .map(|(j, &xj)| {
                let mut num = 1;
                let mut den = 1;
                for (m, &xm) in xs.iter().enumerate() {
                    if m != j {
                        num = self.mul(num, self.sub(at, xm));
                        den = self.mul(den, self.sub(xj, xm));
                    }
                }
                self.div(num, den)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        assert_eq!(smallest_prime_above(4), 5);
        assert_eq!(smallest_prime_above(7), 11);
        assert!(Field::new(12).is_err());
        assert!(Field::new(13).is_ok());
    }

    #[test]
    fn arithmetic_mod_7() {
        let f = Field::new(7).unwrap();
        assert_eq!(f.add(5, 4), 2);
        assert_eq!(f.sub(2, 5), 4);
        assert_eq!(f.mul(3, 5), 1);
        assert_eq!(f.inv(3), 5);
        assert_eq!(f.from_i64(-1), 6);
        for a in 1..7 {
            assert_eq!(f.mul(a, f.inv(a)), 1);
        }
    }

    #[test]
    fn lagrange_at_zero() {
        let f = Field::new(7).unwrap();
        // p(x) = 3 + 2x: p(1) = 5, p(2) = 0
        let l = f.lagrange_coeffs(&[1, 2], 0);
        assert_eq!(f.add(f.mul(l[0], 5), f.mul(l[1], 0)), 3);
    }
}
