//! Integer partitions: enumeration, multiplicities and dominance order.

use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

/// Weakly decreasing list of positive parts.
///
/// The derived ordering is lexicographic on the parts, so among partitions of
/// the same weight `(1,1,…,1)` comes first and `(n)` last. Every matrix and
/// serialized basis in this crate uses that order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn empty() -> Partition {
        Partition(Vec::new())
    }

    /// Sorts the parts and drops zeros.
    pub fn new(mut parts: Vec<u32>) -> Partition {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `(part, multiplicity)` pairs, largest part first.
    pub fn multiplicities(&self) -> Vec<(u32, u32)> {
        let mut out: Vec<(u32, u32)> = Vec::new();
        for &p in &self.0 {
            match out.last_mut() {
                Some((q, k)) if *q == p => *k += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    pub fn count(&self, part: u32) -> u32 {
        self.0.iter().filter(|&&p| p == part).count() as u32
    }

    pub fn with_part(&self, part: u32) -> Partition {
        let mut parts = self.0.clone();
        let pos = parts.iter().position(|&p| p < part).unwrap_or(parts.len());
        parts.insert(pos, part);
        Partition(parts)
    }

    pub fn without_part(&self, part: u32) -> Option<Partition> {
        let pos = self.0.iter().position(|&p| p == part)?;
        let mut parts = self.0.clone();
        parts.remove(pos);
        Some(Partition(parts))
    }

    /// Multiset union.
    pub fn union(&self, other: &Partition) -> Partition {
        let mut parts = self.0.clone();
        parts.extend_from_slice(&other.0);
        Partition::new(parts)
    }

    /// Parts padded with zeros to `n` entries; `None` if longer than `n`.
    pub fn padded(&self, n: usize) -> Option<Vec<u32>> {
        if self.len() > n {
            return None;
        }
        let mut v = self.0.clone();
        v.resize(n, 0);
        Some(v)
    }

    /// Dominance order on partitions of equal weight: `self ⪰ other` iff every
    /// leading partial sum of `self` is at least the one of `other`.
    pub fn dominates(&self, other: &Partition) -> bool {
        if self.weight() != other.weight() {
            return false;
        }
        let n = self.len().max(other.len());
        let (mut s, mut t) = (0u32, 0u32);
        for i in 0..n {
            s += self.0.get(i).copied().unwrap_or(0);
            t += other.0.get(i).copied().unwrap_or(0);
            if s < t {
                return false;
            }
        }
        true
    }

    /// Partial comparison under dominance.
    pub fn dominance_cmp(&self, other: &Partition) -> Option<Ordering> {
        match (self.dominates(other), other.dominates(self)) {
            (true, true) => Some(Ordering::Equal),
            (true, false) => Some(Ordering::Greater),
            (false, true) => Some(Ordering::Less),
            (false, false) => None,
        }
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

impl From<&[u32]> for Partition {
    fn from(parts: &[u32]) -> Self {
        Partition::new(parts.to_vec())
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(serializer)
    }
}

/// All partitions of `n`, in the crate's basis order.
pub fn partitions(n: u32) -> Vec<Partition> {
    partitions_bounded(n, usize::MAX)
}

/// Partitions of `n` with at most `max_len` parts, in basis order.
pub fn partitions_bounded(n: u32, max_len: usize) -> Vec<Partition> {
    fn go(rest: u32, max_part: u32, max_len: usize, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        if cur.len() == max_len {
            return;
        }
        for p in (1..=max_part.min(rest)).rev() {
            cur.push(p);
            go(rest - p, p, max_len, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, max_len, &mut Vec::new(), &mut out);
    out.sort();
    out
}
