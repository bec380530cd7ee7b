/// Binary relation on `{0, …, n-1}` stored as a dense adjacency matrix.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Relation {
    n: usize,
    bits: Vec<bool>,
}

impl Relation {
    pub fn empty(n: usize) -> Self {
        Relation {
            n,
            bits: vec![false; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut r = Relation::empty(n);
        for i in 0..n {
            r.insert(i, i);
        }
        r
    }

    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut r = Relation::empty(n);
        for (a, b) in pairs {
            r.insert(a, b);
        }
        r
    }

    /// Decodes the adjacency-matrix bit encoding: bit `a*n + b` is the pair `(a, b)`.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        debug_assert!(n * n <= 64);
        let mut r = Relation::empty(n);
        for idx in 0..n * n {
            if mask >> idx & 1 == 1 {
                r.bits[idx] = true;
            }
        }
        r
    }

    pub fn mask(&self) -> u64 {
        debug_assert!(self.n * self.n <= 64);
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .fold(0u64, |m, (i, _)| m | 1 << i)
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.bits[a * self.n + b]
    }

    pub fn insert(&mut self, a: usize, b: usize) {
        self.bits[a * self.n + b] = true;
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |a| {
            (0..self.n)
                .filter(move |&b| self.contains(a, b))
                .map(move |b| (a, b))
        })
    }

    pub fn successors(&self, a: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&b| self.contains(a, b))
    }

    pub fn predecessors(&self, b: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&a| self.contains(a, b))
    }

    pub fn is_empty(&self) -> bool {
        !self.bits.iter().any(|&b| b)
    }

    /// Least preorder containing the relation (Warshall).
    pub fn reflexive_transitive_closure(&self) -> Relation {
        let mut c = self.clone();
        for i in 0..self.n {
            c.insert(i, i);
        }
        for k in 0..self.n {
            for i in 0..self.n {
                if !c.contains(i, k) {
                    continue;
                }
                for j in 0..self.n {
                    if c.contains(k, j) {
                        c.insert(i, j);
                    }
                }
            }
        }
        c
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.n).all(|i| self.contains(i, i))
    }

    pub fn is_transitive(&self) -> bool {
        (0..self.n).all(|i| {
            (0..self.n).all(|j| {
                !self.contains(i, j)
                    || (0..self.n).all(|k| !self.contains(j, k) || self.contains(i, k))
            })
        })
    }

    pub fn is_preorder(&self) -> bool {
        self.is_reflexive() && self.is_transitive()
    }

    /// `a < b` in the preorder sense: `a ≤ b` and not `b ≤ a`.
    #[inline]
    pub fn strictly_below(&self, a: usize, b: usize) -> bool {
        self.contains(a, b) && !self.contains(b, a)
    }
}
