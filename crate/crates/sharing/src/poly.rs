use crate::Field;

/// Dense polynomial, coefficient `i` of `x^i`, trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    pub coeffs: Vec<u64>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<u64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    /// Degree, with the zero polynomial reported as 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn constant(&self) -> u64 {
        self.coeffs.first().copied().unwrap_or(0)
    }

    pub fn eval(&self, f: &Field, x: u64) -> u64 {
        let x = f.reduce(x);
        self.coeffs.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// Lagrange interpolation through distinct points.
    pub fn interpolate(f: &Field, points: &[(u64, u64)]) -> Poly {
        let mut out = vec![0u64; points.len()];
        for (j, &(xj, yj)) in points.iter().enumerate() {
            // basis numerator Π_{m≠j} (x − x_m), built incrementally
            let mut basis = vec![1u64];
            let mut den = 1u64;
            for (m, &(xm, _)) in points.iter().enumerate() {
                if m == j {
                    continue;
                }
                let mut next = vec![0u64; basis.len() + 1];
                for (i, &b) in basis.iter().enumerate() {
                    next[i + 1] = f.add(next[i + 1], b);
                    next[i] = f.sub(next[i], f.mul(b, xm));
                }
                basis = next;
                den = f.mul(den, f.sub(xj, xm));
            }
            let scale = f.div(yj, den);
            for (i, b) in basis.into_iter().enumerate() {
                out[i] = f.add(out[i], f.mul(b, scale));
            }
        }
        Poly::new(out)
    }

    pub fn mul(&self, f: &Field, other: &Poly) -> Poly {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Poly::zero();
        }
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::new(out)
    }

    /// Polynomial long division; `None` if the divisor is zero.
    pub fn div_rem(&self, f: &Field, d: &Poly) -> Option<(Poly, Poly)> {
        let dl = d.coeffs.len();
        if dl == 0 {
            return None;
        }
        let lead_inv = f.inv(d.coeffs[dl - 1]);
        let mut rem = self.coeffs.clone();
        if rem.len() < dl {
            return Some((Poly::zero(), Poly::new(rem)));
        }
        let mut quo = vec![0u64; rem.len() - dl + 1];
        for i in (0..quo.len()).rev() {
            let c = f.mul(rem[i + dl - 1], lead_inv);
            quo[i] = c;
            for (j, &dc) in d.coeffs.iter().enumerate() {
                rem[i + j] = f.sub(rem[i + j], f.mul(c, dc));
            }
        }
        Some((Poly::new(quo), Poly::new(rem)))
    }
}
