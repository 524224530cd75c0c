use mediatorless_net::Body;
use mediatorless_sharing::{robust_reconstruct, Field, Point};

use crate::{vss_deal, Mpc, MpcError, MpcEvent, Shares};

/// Pointwise sum; no communication.
pub fn gate_add(field: &Field, a: &Shares, b: &Shares) -> Result<Shares, MpcError> {
    if a.len() != b.len() || a.iter().zip(b).any(|(x, y)| x.len() != y.len()) {
        return Err(MpcError::Mismatch);
    }
    Ok(a.iter().zip(b).map(|(x, y)| x.iter().zip(y).map(|(&u, &v)| field.add(u, v)).collect()).collect())
}

/// `w[r][i] = (i+1)^r / Π_{j≠i} (i − j)`, `r < n − 2k − 1`: the vector of
/// evaluations at `1..=n` of any polynomial of degree `≤ 2k` is orthogonal
/// to every row.
pub fn syndrome_weights(field: &Field, n: usize, k: usize) -> Vec<Vec<u64>> {
    let rows = n.saturating_sub(2 * k + 1);
    let v: Vec<u64> = (0..n)
        .map(|i| {
            let d = (0..n).filter(|&j| j != i).fold(1, |acc, j| field.mul(acc, field.sub(i as u64 + 1, j as u64 + 1)));
            field.inv(d)
        })
        .collect();
    (0..rows).map(|r| (0..n).map(|i| field.mul(v[i], field.pow(i as u64 + 1, r as u64))).collect()).collect()
}

/// Every player broadcasts its shares; each item is decoded robustly.
/// `None` where decoding fails.
pub fn open_broadcast(mpc: &mut Mpc, tag: &str, shares: &Shares) -> Vec<Option<u64>> {
    let items = shares.first().map_or(0, Vec::len);
    let got = mpc.net.broadcast(tag, shares.iter().map(|s| Some(s.clone())).collect());
    let q = mpc.field.modulus();
    (0..items)
        .map(|g| {
            let pts: Vec<Point> = got
                .iter()
                .enumerate()
                .filter_map(|(i, b)| b.as_ref().filter(|b| b.len() == items && b[g] < q).map(|b| (i as u64 + 1, b[g])))
                .collect();
            robust_reconstruct(&mpc.field, &pts, mpc.k).ok()
        })
        .collect()
}

/// Every player sends all its shares to everyone; `[player][item]` is that
/// player's robust reconstruction.
pub fn open_to_all(mpc: &mut Mpc, tag: &str, shares: &Shares) -> Vec<Vec<Option<u64>>> {
    let n = mpc.n;
    let items = shares.first().map_or(0, Vec::len);
    let out = shares.iter().map(|s| vec![Some(s.clone()); n]).collect();
    let inbox = mpc.net.exchange(tag, out);
    let q = mpc.field.modulus();
    inbox
        .iter()
        .map(|row| {
            (0..items)
                .map(|g| {
                    let pts: Vec<Point> = row
                        .iter()
                        .enumerate()
                        .filter_map(|(i, b)| b.as_ref().filter(|b| b.len() == items && b[g] < q).map(|b| (i as u64 + 1, b[g])))
                        .collect();
                    robust_reconstruct(&mpc.field, &pts, mpc.k).ok()
                })
                .collect()
        })
        .collect()
}

/// Item `g` is sent only to player `recipient[g]`. Returns, per item, the
/// points its recipient received (x = sender index + 1).
pub fn open_to_each(mpc: &mut Mpc, tag: &str, shares: &Shares, recipient: &[usize]) -> Vec<Vec<Point>> {
    let n = mpc.n;
    let q = mpc.field.modulus();
    let mine: Vec<Vec<usize>> = (0..n).map(|j| (0..recipient.len()).filter(|&g| recipient[g] == j).collect()).collect();
    let out = shares
        .iter()
        .map(|s| (0..n).map(|j| Some(mine[j].iter().map(|&g| s[g]).collect::<Body>())).collect())
        .collect();
    let inbox = mpc.net.exchange(tag, out);
    let mut pts = vec![Vec::new(); recipient.len()];
    for (j, row) in inbox.iter().enumerate() {
        for (i, b) in row.iter().enumerate() {
            let Some(b) = b.as_ref().filter(|b| b.len() == mine[j].len()) else { continue };
            for (slot, &g) in mine[j].iter().enumerate() {
                if b[slot] < q {
                    pts[g].push((i as u64 + 1, b[slot]));
                }
            }
        }
    }
    pts
}

/// Batched multiplication of item `g` of `a` with item `g` of `b`.
///
/// Each player re-shares its local product with VSS. The products of all
/// players should lie on a degree-`2k` polynomial; syndromes of the
/// re-shared values are opened to locate and subtract any deviation, with
/// disqualified dealers treated as known-position errors. The result is
/// the Lagrange combination at zero of the corrected re-sharings.
pub fn gate_multiply(mpc: &mut Mpc, tag: &str, a: &Shares, b: &Shares) -> Result<Shares, MpcError> {
    let f = mpc.field;
    let (n, k) = (mpc.n, mpc.k);
    if a.len() != n || b.len() != n || a.iter().zip(b).any(|(x, y)| x.len() != y.len()) {
        return Err(MpcError::Mismatch);
    }
    let gates = a[0].len();
    if gates == 0 {
        return Ok(vec![Vec::new(); n]);
    }
    let secrets: Vec<(usize, u64)> =
        (0..n).flat_map(|i| (0..gates).map(move |g| (i, g))).map(|(i, g)| (i, f.mul(a[i][g], b[i][g]))).collect();
    let vss = vss_deal(mpc, &format!("{tag}.reshare"), &secrets);
    let inst = |i: usize, g: usize| i * gates + g;

    let weights = syndrome_weights(&f, n, k);
    let rows = weights.len();
    let syn_shares: Shares = (0..n)
        .map(|j| {
            let h = &vss.shares[j];
            let mut s = Vec::with_capacity(gates * rows);
            for g in 0..gates {
                for w in &weights {
                    s.push((0..n).fold(0, |acc, i| f.add(acc, f.mul(w[i], h[inst(i, g)]))));
                }
            }
            s
        })
        .collect();
    let syndromes = if rows > 0 { open_broadcast(mpc, &format!("{tag}.syndrome"), &syn_shares) } else { vec![] };

    let xs: Vec<u64> = (1..=n as u64).collect();
    let lambda = f.lagrange_coeffs(&xs, 0);
    let mut errors = vec![vec![0u64; n]; gates];
    let mut abort = None;
    for g in 0..gates {
        let s: Option<Vec<u64>> = syndromes[g * rows..(g + 1) * rows].iter().copied().collect();
        let Some(s) = s else {
            abort = Some((g, "syndrome could not be opened".to_string()));
            break;
        };
        let erased: Vec<usize> = (0..n).filter(|&i| vss.disqualified[inst(i, g)]).collect();
        match locate_errors(&f, &weights, &s, &erased, k) {
            Some(e) => {
                for (i, &v) in e.iter().enumerate() {
                    if v != 0 {
                        mpc.events.push(MpcEvent::Corrected { gate: g, dealer: i });
                    }
                }
                errors[g] = e;
            }
            None => {
                abort = Some((g, "deviation exceeds what the syndromes can correct".to_string()));
                break;
            }
        }
    }
    if let Some((gate, reason)) = abort {
        mpc.events.push(MpcEvent::GateAbort { gate, reason: reason.clone() });
        return Err(MpcError::GateAbort(reason));
    }
    Ok((0..n)
        .map(|j| {
            (0..gates)
                .map(|g| {
                    (0..n).fold(0, |acc, i| {
                        let h = f.sub(vss.shares[j][inst(i, g)], errors[g][i]);
                        f.add(acc, f.mul(lambda[i], h))
                    })
                })
                .collect()
        })
        .collect())
}

/// Smallest-support error vector `e` with `Σ_i w[r][i] e_i = s_r`, using
/// every erased position plus at most `(R − |erased|) / 2` others.
fn locate_errors(f: &Field, w: &[Vec<u64>], s: &[u64], erased: &[usize], k: usize) -> Option<Vec<u64>> {
    let n = w.first().map_or(0, Vec::len);
    if erased.is_empty() && s.iter().all(|&x| x == 0) {
        return Some(vec![0; n]);
    }
    let rows = w.len();
    if erased.len() > rows || erased.len() > k {
        return None;
    }
    let max_extra = ((rows - erased.len()) / 2).min(k - erased.len());
    let others: Vec<usize> = (0..n).filter(|i| !erased.contains(i)).collect();
    for t in 0..=max_extra {
        let mut found = None;
        for_each_subset(&others, t, &mut |sub| {
            if found.is_some() {
                return;
            }
            let support: Vec<usize> = erased.iter().chain(sub).copied().collect();
            if let Some(x) = solve(f, w, s, &support) {
                let mut e = vec![0; n];
                for (&i, v) in support.iter().zip(x) {
                    e[i] = v;
                }
                found = Some(e);
            }
        });
        if found.is_some() {
            return found;
        }
    }
    None
}

fn for_each_subset(items: &[usize], t: usize, cb: &mut dyn FnMut(&[usize])) {
    fn rec(items: &[usize], t: usize, start: usize, cur: &mut Vec<usize>, cb: &mut dyn FnMut(&[usize])) {
        if cur.len() == t {
            cb(cur);
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            rec(items, t, i + 1, cur, cb);
            cur.pop();
        }
    }
    rec(items, t, 0, &mut Vec::with_capacity(t), cb);
}

/// Solves the restriction of `w x = s` to the columns in `support`, if
/// consistent. Columns are independent because `|support| ≤ rows`.
fn solve(f: &Field, w: &[Vec<u64>], s: &[u64], support: &[usize]) -> Option<Vec<u64>> {
    let c = support.len();
    let mut m: Vec<Vec<u64>> = w
        .iter()
        .zip(s)
        .map(|(row, &rhs)| support.iter().map(|&i| row[i]).chain(std::iter::once(rhs)).collect())
        .collect();
    let mut r = 0;
    for col in 0..c {
        let p = (r..m.len()).find(|&i| m[i][col] != 0)?;
        m.swap(r, p);
        let inv = f.inv(m[r][col]);
        for v in m[r].iter_mut() {
            *v = f.mul(*v, inv);
        }
        for i in 0..m.len() {
            if i != r && m[i][col] != 0 {
                let factor = m[i][col];
                for j in 0..=c {
                    let sub = f.mul(factor, m[r][j]);
                    m[i][j] = f.sub(m[i][j], sub);
                }
            }
        }
        r += 1;
    }
    if m[r..].iter().any(|row| row[c] != 0) {
        return None;
    }
    Some((0..c).map(|i| m[i][c]).collect())
}
