use mediatorless_sharing::Field;
use rand::Rng;

/// `F(x, y) = Σ c[u][v] x^u y^v` with `c` symmetric and `F(0, 0)` the secret.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymBivariate {
    coeffs: Vec<Vec<u64>>,
}

impl SymBivariate {
    /// Upper-triangle coefficients in row-major order after the secret.
    pub fn from_upper(field: &Field, k: usize, secret: u64, upper: &[u64]) -> Self {
        assert_eq!(upper.len(), Self::random_len(k));
        let mut c = vec![vec![0; k + 1]; k + 1];
        c[0][0] = field.reduce(secret);
        let mut it = upper.iter();
        for u in 0..=k {
            for v in u..=k {
                if u == 0 && v == 0 {
                    continue;
                }
                let x = field.reduce(*it.next().expect("length checked"));
                c[u][v] = x;
                c[v][u] = x;
            }
        }
        SymBivariate { coeffs: c }
    }

    pub fn random<R: Rng + ?Sized>(field: &Field, k: usize, secret: u64, rng: &mut R) -> Self {
        let upper: Vec<u64> = (0..Self::random_len(k)).map(|_| rng.gen_range(0..field.modulus())).collect();
        Self::from_upper(field, k, secret, &upper)
    }

    /// Number of free coefficients at degree `k`.
    pub fn random_len(k: usize) -> usize {
        (k + 1) * (k + 2) / 2 - 1
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn secret(&self) -> u64 {
        self.coeffs[0][0]
    }

    /// Coefficients of `y ↦ F(x, y)`.
    pub fn row(&self, field: &Field, x: u64) -> Vec<u64> {
        let k = self.degree();
        let mut out = vec![0; k + 1];
        let mut xp = 1;
        for u in 0..=k {
            for v in 0..=k {
                out[v] = field.add(out[v], field.mul(self.coeffs[u][v], xp));
            }
            xp = field.mul(xp, x);
        }
        out
    }

    pub fn eval(&self, field: &Field, x: u64, y: u64) -> u64 {
        eval_row(field, &self.row(field, x), y)
    }
}

/// Horner evaluation of a coefficient vector.
pub(crate) fn eval_row(field: &Field, row: &[u64], y: u64) -> u64 {
    row.iter().rev().fold(0, |acc, &c| field.add(field.mul(acc, y), c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn symmetric_and_secret() {
        let f = Field::new(13).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for k in 0..3 {
            let p = SymBivariate::random(&f, k, 4, &mut rng);
            assert_eq!(p.secret(), 4);
            assert_eq!(p.eval(&f, 0, 0), 4);
            for x in 0..6 {
                for y in 0..6 {
                    assert_eq!(p.eval(&f, x, y), p.eval(&f, y, x));
                }
            }
        }
    }
}
