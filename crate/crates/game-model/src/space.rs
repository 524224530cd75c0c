use std::ops::Range;

/// Mixed-radix indexing of profiles. Index order is lexicographic order of
/// the tuples with position 0 most significant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProfileSpace {
    sizes: Vec<usize>,
    strides: Vec<usize>,
    len: usize,
}

impl ProfileSpace {
    pub fn new(sizes: Vec<usize>) -> Self {
        let mut strides = vec![0; sizes.len()];
        let mut acc = 1usize;
        for i in (0..sizes.len()).rev() {
            strides[i] = acc;
            acc = acc.saturating_mul(sizes[i]);
        }
        ProfileSpace { sizes, strides, len: acc }
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn dims(&self) -> usize {
        self.sizes.len()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn indices(&self) -> Range<usize> {
        0..self.len
    }

    pub fn contains(&self, p: &[usize]) -> bool {
        p.len() == self.sizes.len() && p.iter().zip(&self.sizes).all(|(v, s)| v < s)
    }

    pub fn index(&self, p: &[usize]) -> usize {
        debug_assert!(self.contains(p), "profile {p:?} outside {:?}", self.sizes);
        p.iter().zip(&self.strides).map(|(v, s)| v * s).sum()
    }

    pub fn decode(&self, mut idx: usize) -> Vec<usize> {
        let mut out = vec![0; self.sizes.len()];
        for (i, s) in self.strides.iter().enumerate() {
            out[i] = idx / s;
            idx %= s;
        }
        out
    }

    /// Component `pos` of profile `idx` without decoding the rest.
    pub fn component(&self, idx: usize, pos: usize) -> usize {
        (idx / self.strides[pos]) % self.sizes[pos]
    }

    /// Space of sub-profiles over `members` (in the given order).
    pub fn restrict(&self, members: &[usize]) -> ProfileSpace {
        ProfileSpace::new(members.iter().map(|&m| self.sizes[m]).collect())
    }

    /// Index of the projection of `idx` onto `members` inside `restrict(members)`.
    pub fn project(&self, idx: usize, members: &[usize], sub: &ProfileSpace) -> usize {
        members
            .iter()
            .enumerate()
            .map(|(j, &m)| self.component(idx, m) * sub.strides[j])
            .sum()
    }

    /// Replaces the `members` components of `idx` with sub-profile `sub_idx`.
    pub fn replace(&self, idx: usize, members: &[usize], sub: &ProfileSpace, sub_idx: usize) -> usize {
        let mut out = idx;
        for (j, &m) in members.iter().enumerate() {
            let old = self.component(idx, m);
            let new = sub.component(sub_idx, j);
            out = out - old * self.strides[m] + new * self.strides[m];
        }
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        self.indices().map(|i| self.decode(i))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lexicographic_order() {
        let s = ProfileSpace::new(vec![2, 3]);
        let all: Vec<_> = s.iter().collect();
        assert_eq!(all[0], vec![0, 0]);
        assert_eq!(all[1], vec![0, 1]);
        assert_eq!(all[3], vec![1, 0]);
        for (i, p) in all.iter().enumerate() {
            assert_eq!(s.index(p), i);
        }
    }

    #[test]
    fn project_and_replace() {
        let s = ProfileSpace::new(vec![2, 3, 2]);
        let members = [0, 2];
        let sub = s.restrict(&members);
        let idx = s.index(&[1, 2, 0]);
        assert_eq!(sub.decode(s.project(idx, &members, &sub)), vec![1, 0]);
        let r = s.replace(idx, &members, &sub, sub.index(&[0, 1]));
        assert_eq!(s.decode(r), vec![0, 2, 1]);
    }
}
