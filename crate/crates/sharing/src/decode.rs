use crate::shamir::check_distinct;
use crate::{Field, Point, Poly, ShareError};

/// Above this many points the exhaustive subset search is skipped.
pub const SUBSET_SEARCH_MAX: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decoded {
    pub poly: Poly,
    /// x-coordinates of points that disagree with `poly`.
    pub errors: Vec<u64>,
}

impl Decoded {
    pub fn secret(&self) -> u64 {
        self.poly.constant()
    }
}

/// Agreement needed to accept a polynomial: at least `2k + 1` points, and at
/// most `k` points off it. Two distinct degree-k polynomials cannot both meet
/// this bound, so the answer is unique.
fn threshold(m: usize, k: usize) -> usize {
    (2 * k + 1).max(m.saturating_sub(k))
}

fn finish(field: &Field, points: &[Point], k: usize, poly: Poly) -> Option<Decoded> {
    if poly.degree() > k {
        return None;
    }
    let errors: Vec<u64> = points
        .iter()
        .filter(|&&(x, y)| poly.eval(field, x) != field.reduce(y))
        .map(|&(x, _)| x)
        .collect();
    (points.len() - errors.len() >= threshold(points.len(), k)).then_some(Decoded { poly, errors })
}

fn precheck(points: &[Point], k: usize) -> Result<(), ShareError> {
    check_distinct(points)?;
    if points.len() < 2 * k + 1 {
        return Err(ShareError::Insufficient { have: points.len(), need: 2 * k + 1 });
    }
    Ok(())
}

/// Gaussian elimination; returns one solution of `A z = b` if any.
fn solve(field: &Field, mut a: Vec<Vec<u64>>, cols: usize) -> Option<Vec<u64>> {
    let rows = a.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| a[i][c] != 0) else { continue };
        a.swap(r, p);
        let inv = field.inv(a[r][c]);
        for v in a[r].iter_mut() {
            *v = field.mul(*v, inv);
        }
        for i in 0..rows {
            if i != r && a[i][c] != 0 {
                let fct = a[i][c];
                for j in 0..=cols {
                    let t = field.mul(fct, a[r][j]);
                    a[i][j] = field.sub(a[i][j], t);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    if a[r..].iter().any(|row| row[cols] != 0) {
        return None;
    }
    let mut z = vec![0u64; cols];
    for (i, &c) in pivots.iter().enumerate() {
        z[c] = a[i][cols];
    }
    Some(z)
}

/// Berlekamp–Welch with error bound `min(k, m − 2k − 1)`.
pub fn decode_berlekamp_welch(
    field: &Field,
    points: &[Point],
    k: usize,
) -> Result<Decoded, ShareError> {
    precheck(points, k)?;
    let m = points.len();
    let e = k.min(m - 2 * k - 1);
    // unknowns: E = e_0..e_{e−1} (monic, degree e), Q = q_0..q_{k+e}
    let cols = e + k + e + 1;
    let a: Vec<Vec<u64>> = points
        .iter()
        .map(|&(x, y)| {
            let y = field.reduce(y);
            let mut row = vec![0u64; cols + 1];
            let mut xp = 1;
            for j in 0..e {
                row[j] = field.neg(field.mul(y, xp));
                xp = field.mul(xp, field.reduce(x));
            }
            // xp is now x^e
            row[cols] = field.mul(y, xp);
            let mut xq = 1;
            for j in 0..=k + e {
                row[e + j] = xq;
                xq = field.mul(xq, field.reduce(x));
            }
            row
        })
        .collect();
    let fail = ShareError::DecodeFailure { k };
    let z = solve(field, a, cols).ok_or(fail.clone())?;
    let mut ec = z[..e].to_vec();
    ec.push(1);
    let epoly = Poly::new(ec);
    let qpoly = Poly::new(z[e..].to_vec());
    let (p, rem) = qpoly.div_rem(field, &epoly).ok_or(fail.clone())?;
    if rem != Poly::zero() {
        return Err(fail);
    }
    finish(field, points, k, p).ok_or(fail)
}

/// Exhaustive search over `(k + 1)`-subsets in lexicographic order.
pub fn decode_subsets(field: &Field, points: &[Point], k: usize) -> Result<Decoded, ShareError> {
    precheck(points, k)?;
    let m = points.len();
    let mut idx: Vec<usize> = (0..=k).collect();
    loop {
        let sub: Vec<Point> = idx.iter().map(|&i| points[i]).collect();
        if let Some(d) = finish(field, points, k, Poly::interpolate(field, &sub)) {
            return Ok(d);
        }
        let mut i = k + 1;
        while i > 0 && idx[i - 1] == m - (k + 1) + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return Err(ShareError::DecodeFailure { k });
        }
        idx[i - 1] += 1;
        for j in i..=k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Secret of the unique degree-≤k polynomial agreeing with at least
/// `max(2k + 1, m − k)` of the `m` supplied points.
pub fn robust_reconstruct(field: &Field, points: &[Point], k: usize) -> Result<u64, ShareError> {
    let bw = decode_berlekamp_welch(field, points, k);
    if cfg!(debug_assertions) && points.len() <= SUBSET_SEARCH_MAX {
        let ss = decode_subsets(field, points, k);
        debug_assert_eq!(
            bw.as_ref().map(Decoded::secret).ok(),
            ss.as_ref().map(Decoded::secret).ok(),
            "decoders disagree on {points:?}"
        );
    }
    bw.map(|d| d.secret())
}

/// Literal form of the reconstruction rule: every `(k + 1)`-subset of
/// `points` interpolates to the same constant term.
pub fn every_subset_agrees(field: &Field, points: &[Point], k: usize) -> bool {
    let m = points.len();
    if m < k + 1 {
        return false;
    }
    let mut idx: Vec<usize> = (0..=k).collect();
    let mut secret = None;
    loop {
        let sub: Vec<Point> = idx.iter().map(|&i| points[i]).collect();
        let s = Poly::interpolate(field, &sub).constant();
        match secret {
            None => secret = Some(s),
            Some(v) if v != s => return false,
            _ => {}
        }
        let mut i = k + 1;
        while i > 0 && idx[i - 1] == m - (k + 1) + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return true;
        }
        idx[i - 1] += 1;
        for j in i..=k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Distinct secrets `s` for which some set of at least `2k + 1` received
/// points lies on one degree-≤k polynomial with constant term `s`. Sorted.
pub fn consistent_secrets(field: &Field, points: &[Point], k: usize) -> Vec<u64> {
    let m = points.len();
    let mut out = Vec::new();
    if m < 2 * k + 1 {
        return out;
    }
    let mut idx: Vec<usize> = (0..=k).collect();
    loop {
        let sub: Vec<Point> = idx.iter().map(|&i| points[i]).collect();
        let p = Poly::interpolate(field, &sub);
        let agree = points
            .iter()
            .filter(|&&(x, y)| p.eval(field, x) == field.reduce(y))
            .count();
        if p.degree() <= k && agree >= 2 * k + 1 && !out.contains(&p.constant()) {
            out.push(p.constant());
        }
        let mut i = k + 1;
        while i > 0 && idx[i - 1] == m - (k + 1) + i - 1 {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        idx[i - 1] += 1;
        for j in i..=k {
            idx[j] = idx[j - 1] + 1;
        }
    }
    out.sort_unstable();
    out
}
