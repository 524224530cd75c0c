//! Bivariate verifiable secret sharing with pairwise cross-checks, public
//! complaints and accusation rounds.
//!
//! Schedule for a batch of instances:
//! 1. dealer sends row `F(i, ·)` to each player `i`;
//! 2. players exchange cross points `F(i, j)`;
//! 3. broadcast complaints about mismatched or missing points;
//! 4. dealers broadcast `F(i, j)` for every complained pair and the rows
//!    of players that got none;
//!
//! then up to `k + 1` accusation rounds, each followed by the dealer
//! publishing the accusers' rows. A dealer that leaves a request
//! unanswered, publishes inconsistent data, or collects more than `k`
//! accusers is disqualified and the instance becomes the all-zero sharing.

use std::collections::BTreeSet;

use mediatorless_net::Body;

use crate::bivariate::eval_row;
use crate::{Mpc, MpcEvent, Shares, SymBivariate};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VssOutput {
    /// `[player][instance]`.
    pub shares: Shares,
    pub disqualified: Vec<bool>,
    /// Players whose rows were made public, per instance.
    pub accused: Vec<BTreeSet<usize>>,
}

/// Public record of one instance, identical for every player.
#[derive(Default, Clone)]
struct Public {
    pairs: BTreeSet<(usize, usize)>,
    values: Vec<((usize, usize), u64)>,
    rows: Vec<(usize, Vec<u64>)>,
    accused: BTreeSet<usize>,
    dq: bool,
}

impl Public {
    fn row(&self, a: usize) -> Option<&Vec<u64>> {
        self.rows.iter().find(|(p, _)| *p == a).map(|(_, r)| r)
    }
}

/// Shares `secrets[m] = (dealer, value)`, each dealer drawing its
/// polynomial from its own randomness.
pub fn vss_deal(mpc: &mut Mpc, step: &str, secrets: &[(usize, u64)]) -> VssOutput {
    let field = mpc.field;
    let k = mpc.k;
    let dealings: Vec<(usize, SymBivariate)> = secrets
        .iter()
        .map(|&(d, s)| (d, SymBivariate::random(&field, k, s, &mut mpc.rngs[d])))
        .collect();
    vss_share(mpc, step, &dealings)
}

/// Runs the schedule with the given dealer polynomials.
pub fn vss_share(mpc: &mut Mpc, step: &str, dealings: &[(usize, SymBivariate)]) -> VssOutput {
    let (n, k, f) = (mpc.n, mpc.k, mpc.field);
    let q = f.modulus();
    let m_total = dealings.len();
    let width = k + 1;
    let by_dealer: Vec<Vec<usize>> = (0..n).map(|d| (0..m_total).filter(|&m| dealings[m].0 == d).collect()).collect();

    // Round 1: rows.
    let mut out = vec![vec![None; n]; n];
    for (d, ms) in by_dealer.iter().enumerate() {
        if ms.is_empty() {
            continue;
        }
        for (i, slot) in out[d].iter_mut().enumerate() {
            let mut body = Vec::with_capacity(ms.len() * width);
            for &m in ms {
                body.extend(dealings[m].1.row(&f, i as u64 + 1));
            }
            *slot = Some(body);
        }
    }
    let inbox = mpc.net.exchange(&format!("{step}.row"), out);
    let mut rows: Vec<Vec<Option<Vec<u64>>>> = vec![vec![None; m_total]; n];
    for i in 0..n {
        for (d, ms) in by_dealer.iter().enumerate() {
            let Some(b) = inbox[i][d].as_ref().filter(|b| b.len() == ms.len() * width) else { continue };
            for (slot, &m) in ms.iter().enumerate() {
                let r = &b[slot * width..(slot + 1) * width];
                if r.iter().all(|&c| c < q) {
                    rows[i][m] = Some(r.to_vec());
                }
            }
        }
    }

    // Round 2: cross points.
    let out = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| Some(rows[i].iter().map(|r| r.as_ref().map_or(q, |r| eval_row(&f, r, j as u64 + 1))).collect()))
                .collect()
        })
        .collect();
    let inbox = mpc.net.exchange(&format!("{step}.cross"), out);

    // Round 3: complaints `(instance, other, own value)`; `other = n` means
    // no row arrived.
    let out: Vec<Option<Body>> = (0..n)
        .map(|i| {
            let mut body = Vec::new();
            for m in 0..m_total {
                match &rows[i][m] {
                    None => body.extend([m as u64, n as u64, 0]),
                    Some(r) => {
                        for j in (0..n).filter(|&j| j != i) {
                            let mine = eval_row(&f, r, j as u64 + 1);
                            let theirs = inbox[i][j].as_ref().filter(|b| b.len() == m_total).map(|b| b[m]);
                            if theirs != Some(mine) {
                                body.extend([m as u64, j as u64, mine]);
                            }
                        }
                    }
                }
            }
            Some(body)
        })
        .collect();
    let complaints = mpc.net.broadcast(&format!("{step}.complain"), out);
    let mut public: Vec<Public> = vec![Public::default(); m_total];
    for (i, b) in complaints.iter().enumerate() {
        let Some(b) = b.as_ref().filter(|b| b.len() % 3 == 0) else { continue };
        for c in b.chunks(3) {
            let (m, j) = (c[0] as usize, c[1] as usize);
            if m >= m_total || j > n || j == i {
                continue;
            }
            if j == n {
                public[m].accused.insert(i);
            } else {
                public[m].pairs.insert((i.min(j), i.max(j)));
            }
        }
    }

    // Round 4: dealers answer complaints and publish missing rows.
    let first_rows: Vec<BTreeSet<usize>> = public.iter().map(|p| p.accused.clone()).collect();
    {
        let out = (0..n)
            .map(|d| {
                let mut body = Vec::new();
                for &m in &by_dealer[d] {
                    let poly = &dealings[m].1;
                    for &(a, b) in &public[m].pairs {
                        body.push(poly.eval(&f, a as u64 + 1, b as u64 + 1));
                    }
                    for &a in &first_rows[m] {
                        body.extend(poly.row(&f, a as u64 + 1));
                    }
                }
                Some(body)
            })
            .collect();
        let answers = mpc.net.broadcast(&format!("{step}.reveal"), out);
        for (d, ms) in by_dealer.iter().enumerate() {
            let expected: usize = ms.iter().map(|&m| public[m].pairs.len() + width * first_rows[m].len()).sum();
            let body = answers[d].as_ref().filter(|b| b.len() == expected);
            let mut pos = 0;
            for &m in ms {
                let need = public[m].pairs.len() + width * first_rows[m].len();
                if need == 0 {
                    continue;
                }
                let Some(b) = body else {
                    public[m].dq = true;
                    continue;
                };
                let chunk = &b[pos..pos + need];
                pos += need;
                if chunk.iter().any(|&v| v >= q) {
                    public[m].dq = true;
                    continue;
                }
                let pairs: Vec<_> = public[m].pairs.iter().copied().collect();
                let p = &mut public[m];
                for (idx, pair) in pairs.into_iter().enumerate() {
                    p.values.push((pair, chunk[idx]));
                }
                let rest = &chunk[p.pairs.len()..];
                for (idx, &a) in first_rows[m].iter().enumerate() {
                    p.rows.push((a, rest[idx * width..(idx + 1) * width].to_vec()));
                }
                if !consistent(&f, p) || p.accused.len() > k {
                    p.dq = true;
                }
            }
        }

        // Accusation rounds, needed only once something went public.
        let anything_public = public.iter().any(|p| !p.values.is_empty() || !p.rows.is_empty());
        for iter in 0..=k {
            if !anything_public {
                break;
            }
            let out = (0..n)
                .map(|i| {
                    let mut body = Vec::new();
                    for m in 0..m_total {
                        let p = &public[m];
                        if p.dq || p.accused.contains(&i) {
                            continue;
                        }
                        let Some(r) = &rows[i][m] else { continue };
                        let bad_value = p.values.iter().any(|&((a, b), v)| {
                            (a == i && eval_row(&f, r, b as u64 + 1) != v) || (b == i && eval_row(&f, r, a as u64 + 1) != v)
                        });
                        let bad_row = p.rows.iter().any(|(j, row)| eval_row(&f, row, i as u64 + 1) != eval_row(&f, r, *j as u64 + 1));
                        if bad_value || bad_row {
                            body.push(m as u64);
                        }
                    }
                    Some(body)
                })
                .collect();
            let acc = mpc.net.broadcast(&format!("{step}.accuse"), out);
            let mut fresh: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); m_total];
            for (i, b) in acc.iter().enumerate() {
                for &m in b.iter().flatten() {
                    let m = m as usize;
                    if m < m_total && !public[m].dq && !public[m].accused.contains(&i) {
                        fresh[m].insert(i);
                    }
                }
            }
            let mut any = false;
            for m in 0..m_total {
                if fresh[m].is_empty() {
                    continue;
                }
                public[m].accused.extend(fresh[m].iter().copied());
                if public[m].accused.len() > k {
                    public[m].dq = true;
                    fresh[m].clear();
                } else {
                    any = true;
                }
            }
            if !any || iter == k {
                break;
            }
            let out = (0..n)
                .map(|d| {
                    let mut body = Vec::new();
                    for &m in &by_dealer[d] {
                        for &a in &fresh[m] {
                            body.extend(dealings[m].1.row(&f, a as u64 + 1));
                        }
                    }
                    Some(body)
                })
                .collect();
            let published = mpc.net.broadcast(&format!("{step}.publish"), out);
            for (d, ms) in by_dealer.iter().enumerate() {
                let expected: usize = ms.iter().map(|&m| width * fresh[m].len()).sum();
                let body = published[d].as_ref().filter(|b| b.len() == expected);
                let mut pos = 0;
                for &m in ms {
                    if fresh[m].is_empty() {
                        continue;
                    }
                    let Some(b) = body else {
                        public[m].dq = true;
                        continue;
                    };
                    let need = width * fresh[m].len();
                    let chunk = &b[pos..pos + need];
                    pos += need;
                    if chunk.iter().any(|&v| v >= q) {
                        public[m].dq = true;
                        continue;
                    }
                    for (idx, &a) in fresh[m].iter().enumerate() {
                        public[m].rows.push((a, chunk[idx * width..(idx + 1) * width].to_vec()));
                    }
                    if !consistent(&f, &public[m]) {
                        public[m].dq = true;
                    }
                }
            }
        }
    }

    let mut shares = vec![vec![0; m_total]; n];
    for m in 0..m_total {
        let p = &public[m];
        if p.dq {
            mpc.events.push(MpcEvent::Disqualified { step: step.into(), dealer: dealings[m].0, instance: m });
            continue;
        }
        for (i, s) in shares.iter_mut().enumerate() {
            let row = if p.accused.contains(&i) { p.row(i) } else { rows[i][m].as_ref() };
            s[m] = row.map_or(0, |r| r[0]);
        }
    }
    VssOutput {
        shares,
        disqualified: public.iter().map(|p| p.dq).collect(),
        accused: public.into_iter().map(|p| p.accused).collect(),
    }
}

/// Public rows agree with each other and with revealed points.
fn consistent(f: &mediatorless_sharing::Field, p: &Public) -> bool {
    for (a, ra) in &p.rows {
        for (b, rb) in &p.rows {
            if eval_row(f, ra, *b as u64 + 1) != eval_row(f, rb, *a as u64 + 1) {
                return false;
            }
        }
        for &((x, y), v) in &p.values {
            if (x == *a && eval_row(f, ra, y as u64 + 1) != v) || (y == *a && eval_row(f, ra, x as u64 + 1) != v) {
                return false;
            }
        }
    }
    true
}
