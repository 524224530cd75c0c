use rand::Rng;

use crate::{Field, Point, Poly, ShareError};

/// Shares of one secret: player `i` (0-based) holds `ys[i] = p(i + 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShareSet {
    pub field: Field,
    pub dealer: usize,
    pub secret_id: u64,
    pub degree: usize,
    pub ys: Vec<u64>,
}

impl ShareSet {
    pub fn points(&self) -> Vec<Point> {
        self.ys.iter().enumerate().map(|(i, &y)| (i as u64 + 1, y)).collect()
    }

    pub fn n(&self) -> usize {
        self.ys.len()
    }
}

fn check_params(field: &Field, k: usize, n: usize) -> Result<(), ShareError> {
    if k >= n {
        return Err(ShareError::Params(format!("degree {k} must be below n = {n}")));
    }
    if n as u64 >= field.modulus() {
        return Err(ShareError::Params(format!(
            "n = {n} must be below the modulus {}",
            field.modulus()
        )));
    }
    Ok(())
}

/// Shamir sharing with caller-chosen coefficients `c_1..c_k`.
pub fn share_with_coeffs(
    field: &Field,
    secret: u64,
    coeffs: &[u64],
    n: usize,
) -> Result<ShareSet, ShareError> {
    let k = coeffs.len();
    check_params(field, k, n)?;
    let mut all = Vec::with_capacity(k + 1);
    all.push(field.reduce(secret));
    all.extend(coeffs.iter().map(|&c| field.reduce(c)));
    let p = Poly::new(all);
    Ok(ShareSet {
        field: *field,
        dealer: 0,
        secret_id: 0,
        degree: k,
        ys: (1..=n as u64).map(|x| p.eval(field, x)).collect(),
    })
}

/// Shamir sharing with uniformly random coefficients.
pub fn share<R: Rng + ?Sized>(
    field: &Field,
    secret: u64,
    k: usize,
    n: usize,
    rng: &mut R,
) -> Result<ShareSet, ShareError> {
    check_params(field, k, n)?;
    let coeffs: Vec<u64> = (0..k).map(|_| rng.gen_range(0..field.modulus())).collect();
    share_with_coeffs(field, secret, &coeffs, n)
}

pub(crate) fn check_distinct(points: &[Point]) -> Result<(), ShareError> {
    for (i, a) in points.iter().enumerate() {
        if points[..i].iter().any(|b| b.0 == a.0) {
            return Err(ShareError::DuplicateX(a.0));
        }
    }
    Ok(())
}

/// The degree-≤k polynomial through the first `k + 1` points; every further
/// point must lie on it.
pub fn interpolate(field: &Field, points: &[Point], k: usize) -> Result<Poly, ShareError> {
    check_distinct(points)?;
    if points.len() < k + 1 {
        return Err(ShareError::Insufficient { have: points.len(), need: k + 1 });
    }
    let p = Poly::interpolate(field, &points[..=k]);
    let offending: Vec<u64> = points[k + 1..]
        .iter()
        .filter(|&&(x, y)| p.eval(field, x) != field.reduce(y))
        .map(|&(x, _)| x)
        .collect();
    if offending.is_empty() {
        Ok(p)
    } else {
        Err(ShareError::Inconsistent { offending })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn forced_coefficients_mod_7() {
        let f = Field::new(7).unwrap();
        let s = share_with_coeffs(&f, 3, &[2], 4).unwrap();
        assert_eq!(s.ys, vec![5, 0, 2, 4]);
    }

    #[test]
    fn degree_zero_and_zero_secret() {
        let f = Field::new(11).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        assert_eq!(share(&f, 6, 0, 5, &mut rng).unwrap().ys, vec![6; 5]);
        assert_eq!(share_with_coeffs(&f, 0, &[0, 0], 5).unwrap().ys, vec![0; 5]);
    }

    #[test]
    fn parameter_errors() {
        let f = Field::new(5).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        assert!(matches!(share(&f, 1, 4, 4, &mut rng), Err(ShareError::Params(_))));
        assert!(matches!(share(&f, 1, 1, 5, &mut rng), Err(ShareError::Params(_))));
    }

    #[test]
    fn interpolate_examples() {
        let f = Field::new(7).unwrap();
        assert_eq!(interpolate(&f, &[(1, 5), (2, 0)], 1).unwrap(), Poly::new(vec![3, 2]));
        assert_eq!(interpolate(&f, &[(4, 6)], 0).unwrap(), Poly::new(vec![6]));
        assert_eq!(
            interpolate(&f, &[(1, 5), (2, 0), (3, 3)], 1),
            Err(ShareError::Inconsistent { offending: vec![3] })
        );
        assert_eq!(interpolate(&f, &[(1, 5), (1, 0)], 1), Err(ShareError::DuplicateX(1)));
    }
}
