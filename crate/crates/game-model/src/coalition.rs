use crate::GameError;

/// A coalition `K` together with the resilience bound `k` it is checked against.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoalitionMask {
    members: Vec<usize>,
    k: usize,
}

impl CoalitionMask {
    pub fn new(mut members: Vec<usize>, k: usize, n: usize) -> Result<Self, GameError> {
        members.sort_unstable();
        members.dedup();
        if members.len() > k || k > n || members.iter().any(|&m| m >= n) {
            return Err(GameError::BadCoalition { members, k, n });
        }
        Ok(CoalitionMask { members, k })
    }

    pub fn singleton(i: usize, n: usize) -> Result<Self, GameError> {
        Self::new(vec![i], 1, n)
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn bound(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.binary_search(&i).is_ok()
    }

    pub fn complement(&self, n: usize) -> Vec<usize> {
        (0..n).filter(|i| !self.contains(*i)).collect()
    }

    /// All nonempty coalitions of size at most `k`, by size then lexicographically.
    pub fn enumerate(n: usize, k: usize) -> Vec<CoalitionMask> {
        let k = k.min(n);
        let mut out = Vec::new();
        for size in 1..=k {
            let mut comb: Vec<usize> = (0..size).collect();
            loop {
                out.push(CoalitionMask { members: comb.clone(), k });
                let mut i = size;
                while i > 0 && comb[i - 1] == n - size + i - 1 {
                    i -= 1;
                }
                if i == 0 {
                    break;
                }
                comb[i - 1] += 1;
                for j in i..size {
                    comb[j] = comb[j - 1] + 1;
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_order() {
        let all: Vec<Vec<usize>> =
            CoalitionMask::enumerate(3, 2).into_iter().map(|c| c.members).collect();
        assert_eq!(all, vec![vec![0], vec![1], vec![2], vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert!(CoalitionMask::enumerate(4, 0).is_empty());
    }

    #[test]
    fn complement_and_bounds() {
        let c = CoalitionMask::new(vec![2, 0], 2, 4).unwrap();
        assert_eq!(c.members(), &[0, 2]);
        assert_eq!(c.complement(4), vec![1, 3]);
        assert!(CoalitionMask::new(vec![0, 1, 2], 2, 4).is_err());
        assert!(CoalitionMask::new(vec![5], 1, 4).is_err());
    }
}
