//! Integer partitions, bipartitions and Young-diagram statistics.

use std::fmt;

use crate::field::{var, FieldElement};

/// Weakly decreasing sequence of positive integers. Trailing zeros are
/// stripped on construction, so `Partition::new(vec![2, 1, 0]) == (2,1)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Partition(Vec<u32>);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PartitionError {
    #[error("parts are not weakly decreasing")]
    NotDecreasing,
    #[error("partition has {len} parts, more than the allowed {max}")]
    TooLong { len: usize, max: usize },
    #[error("partition does not fit in the {rows}x{cols} rectangle")]
    NotInRectangle { rows: usize, cols: u32 },
}

impl Partition {
    pub fn empty() -> Partition {
        Partition(Vec::new())
    }

    pub fn new(mut parts: Vec<u32>) -> Result<Partition, PartitionError> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(PartitionError::NotDecreasing);
        }
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(Partition(parts))
    }

    /// Panicking constructor for literals.
    pub fn of(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).expect("not a partition")
    }

    /// Sorts arbitrary nonnegative parts into a partition.
    pub fn from_unsorted(mut parts: Vec<u32>) -> Partition {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition::new(parts).unwrap()
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    /// λ_i with 1-based index, zero beyond the length.
    pub fn part(&self, i: usize) -> u32 {
        if i == 0 {
            return u32::MAX;
        }
        self.0.get(i - 1).copied().unwrap_or(0)
    }

    /// Parts padded with zeros to length `n` (n ≥ l(λ)).
    pub fn padded(&self, n: usize) -> Vec<u32> {
        let mut v = self.0.clone();
        v.resize(n.max(v.len()), 0);
        v
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn conjugate(&self) -> Partition {
        let m = self.0.first().copied().unwrap_or(0);
        let parts = (1..=m).map(|j| self.0.iter().filter(|&&p| p >= j).count() as u32).collect();
        Partition(parts)
    }

    /// Multiplicities m_i(λ) for i = 1..λ_1.
    pub fn multiplicities(&self) -> Vec<u32> {
        let m = self.0.first().copied().unwrap_or(0) as usize;
        let mut out = vec![0; m];
        for &p in &self.0 {
            out[p as usize - 1] += 1;
        }
        out
    }

    /// Cells (i, j), 1-based, in row-major order.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(i, &p)| (1..=p as usize).map(move |j| (i + 1, j)))
    }

    /// Generalised (arm, leg, arm-colength, leg-colength) of cell (i, j); the
    /// cell need not lie in the diagram.
    pub fn arm_leg(&self, i: usize, j: usize) -> (i64, i64, i64, i64) {
        let conj = self.conjugate();
        (
            self.part(i) as i64 - j as i64,
            conj.part(j) as i64 - i as i64,
            j as i64 - 1,
            i as i64 - 1,
        )
    }

    /// n(λ) = Σ (i−1) λ_i.
    pub fn n_stat(&self) -> u64 {
        self.0.iter().enumerate().map(|(i, &p)| i as u64 * p as u64).sum()
    }

    /// n(λ) computed as Σ C(λ'_i, 2).
    pub fn n_stat_conjugate(&self) -> u64 {
        self.conjugate().0.iter().map(|&c| c as u64 * (c as u64).saturating_sub(1) / 2).sum()
    }

    pub fn contains(&self, mu: &Partition) -> bool {
        mu.len() <= self.len() && mu.0.iter().zip(&self.0).all(|(m, l)| m <= l)
    }

    /// μ ≤ λ in dominance order (`self` = λ). Requires equal sizes.
    pub fn dominates(&self, mu: &Partition) -> bool {
        if self.size() != mu.size() {
            return false;
        }
        let n = self.len().max(mu.len());
        let (a, b) = (self.padded(n), mu.padded(n));
        let (mut sa, mut sb) = (0u32, 0u32);
        for i in 0..n {
            sa += a[i];
            sb += b[i];
            if sb > sa {
                return false;
            }
        }
        true
    }

    /// Complement inside the rectangle (cols^rows): λ̂_i = cols − λ_{rows+1−i}.
    pub fn complement(&self, rows: usize, cols: u32) -> Result<Partition, PartitionError> {
        if self.len() > rows || self.part(1) > cols && !self.is_empty() {
            return Err(PartitionError::NotInRectangle { rows, cols });
        }
        let p = self.padded(rows);
        Ok(Partition::new((0..rows).map(|i| cols - p[rows - 1 - i]).collect()).unwrap())
    }

    /// Partition with the first column removed-style shift: parts `λ_i + k`
    /// for i ≤ n (used for rectangle-augmented shapes).
    pub fn add_columns(&self, n: usize, k: u32) -> Partition {
        Partition::new(self.padded(n).iter().map(|p| p + k).collect()).unwrap()
    }

    /// Interlacing / horizontal strip test: λ/μ is a horizontal strip.
    pub fn is_horizontal_strip_over(&self, mu: &Partition) -> bool {
        if !self.contains(mu) {
            return false;
        }
        (1..=self.len()).all(|i| mu.part(i) >= self.part(i + 1))
    }

    /// Spectral vector (q^{λ_i} t^{n−i})_{i=1..n}.
    pub fn spectral(&self, n: usize) -> Result<Vec<FieldElement>, PartitionError> {
        if self.len() > n {
            return Err(PartitionError::TooLong { len: self.len(), max: n });
        }
        let (q, t) = (var("q"), var("t"));
        Ok((1..=n)
            .map(|i| q.pow(self.part(i) as i64) * t.pow((n - i) as i64))
            .collect())
    }

    /// z_λ = ∏ i^{m_i} m_i!.
    pub fn z(&self) -> num_bigint::BigInt {
        let mut z = num_bigint::BigInt::from(1);
        for (i, &m) in self.multiplicities().iter().enumerate() {
            for k in 1..=m {
                z *= (i as u64 + 1) * k as u64;
            }
        }
        z
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let s: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

impl std::str::FromStr for Partition {
    type Err = PartitionError;
    fn from_str(s: &str) -> Result<Partition, PartitionError> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        if s.is_empty() || s == "0" {
            return Ok(Partition::empty());
        }
        let parts: Result<Vec<u32>, _> = s.split(',').map(|x| x.trim().parse::<u32>()).collect();
        Partition::new(parts.map_err(|_| PartitionError::NotDecreasing)?)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Bipartition {
    pub first: Partition,
    pub second: Partition,
}

impl Bipartition {
    pub fn new(first: Partition, second: Partition) -> Bipartition {
        Bipartition { first, second }
    }

    pub fn size(&self) -> u32 {
        self.first.size() + self.second.size()
    }

    pub fn len(&self) -> usize {
        self.first.len().max(self.second.len())
    }

    pub fn is_empty(&self) -> bool {
        self.first.is_empty() && self.second.is_empty()
    }

    pub fn contains(&self, mu: &Bipartition) -> bool {
        self.first.contains(&mu.first) && self.second.contains(&mu.second)
    }

    pub fn n_stat(&self) -> u64 {
        self.first.n_stat() + self.second.n_stat()
    }

    /// Spectral vector (q^{λ⁽¹⁾_i} p^{λ⁽²⁾_i} t^{n−i})_{i=1..n}.
    pub fn spectral(&self, n: usize) -> Result<Vec<FieldElement>, PartitionError> {
        if self.len() > n {
            return Err(PartitionError::TooLong { len: self.len(), max: n });
        }
        let (q, p, t) = (var("q"), var("p"), var("t"));
        Ok((1..=n)
            .map(|i| {
                q.pow(self.first.part(i) as i64)
                    * p.pow(self.second.part(i) as i64)
                    * t.pow((n - i) as i64)
            })
            .collect())
    }
}

impl fmt::Display for Bipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}; {}]", self.first, self.second)
    }
}

/// All partitions of exactly `n` with at most `max_len` parts, in reverse
/// lexicographic order (largest first part first).
pub fn partitions_of(n: u32, max_len: usize) -> Vec<Partition> {
    fn rec(n: u32, max_part: u32, max_len: usize, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if n == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        if max_len == 0 {
            return;
        }
        for p in (1..=max_part.min(n)).rev() {
            cur.push(p);
            rec(n - p, p, max_len - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, max_len, &mut Vec::new(), &mut out);
    out
}

/// All partitions with |λ| ≤ max_size and l(λ) ≤ max_len, by increasing size.
pub fn enumerate(max_size: u32, max_len: usize) -> Vec<Partition> {
    (0..=max_size).flat_map(|n| partitions_of(n, max_len)).collect()
}

/// Partitions contained in the rectangle (cols^rows).
pub fn in_rectangle(rows: usize, cols: u32) -> Vec<Partition> {
    enumerate(rows as u32 * cols, rows)
        .into_iter()
        .filter(|p| p.part(1) <= cols || p.is_empty())
        .collect()
}

/// Partitions μ ⊆ λ.
pub fn subpartitions(lambda: &Partition) -> Vec<Partition> {
    fn rec(lam: &[u32], i: usize, bound: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if i == lam.len() {
            out.push(Partition::new(cur.clone()).unwrap());
            return;
        }
        for m in 0..=lam[i].min(bound) {
            cur.push(m);
            rec(lam, i + 1, m, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(&lambda.0, 0, u32::MAX, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// Checks λ_i ≥ μ_{i+ℓ−k} for all i ≤ k, with λ padded to k parts.
pub fn interlaces_shifted(lambda: &Partition, mu: &Partition, k: usize, l: usize) -> bool {
    (1..=k).all(|i| lambda.part(i) >= mu.part(i + l - k))
}

/// The same condition checked cell-wise on the diagram of μ: every cell
/// (r, c) of μ with r > ℓ−k lies below-right of a cell of λ shifted up by ℓ−k.
pub fn interlaces_shifted_cells(lambda: &Partition, mu: &Partition, k: usize, l: usize) -> bool {
    let shift = l - k;
    mu.cells().all(|(r, c)| {
        if r <= shift {
            return true;
        }
        let i = r - shift;
        i > k || lambda.part(i) as usize >= c
    })
}
