//! The lattice `Π_n` of set partitions of `{1..n}` ordered by refinement.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use crate::{Error, Result};

/// Largest ground set for which `Π_n` is materialised (Bell(10) = 115975).
pub const MAX_LATTICE_N: usize = 10;

/// A partition of `{1..n}`, blocks stored as bitmasks (bit `i-1` is element `i`)
/// in canonical order: size descending, then smallest element ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    n: usize,
    blocks: Vec<u16>,
}

fn canonical_order(blocks: &mut [u16]) {
    blocks.sort_by_key(|b| (std::cmp::Reverse(b.count_ones()), b.trailing_zeros()));
}

impl Partition {
    /// Builds a partition from 1-based blocks, checking that they tile `{1..n}`.
    pub fn new(n: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        if n > 16 {
            return Err(Error::InvalidArgument(format!("ground set of size {n} is too large")));
        }
        let mut masks = Vec::with_capacity(blocks.len());
        let mut seen = 0u16;
        for block in blocks {
            if block.is_empty() {
                return Err(Error::InvalidArgument("empty block".into()));
            }
            let mut mask = 0u16;
            for &e in block {
                if e == 0 || e > n {
                    return Err(Error::InvalidArgument(format!("element {e} outside 1..={n}")));
                }
                mask |= 1 << (e - 1);
            }
            if mask.count_ones() as usize != block.len() || mask & seen != 0 {
                return Err(Error::InvalidArgument("blocks overlap".into()));
            }
            seen |= mask;
            masks.push(mask);
        }
        if seen.count_ones() as usize != n {
            return Err(Error::InvalidArgument("blocks do not cover the ground set".into()));
        }
        Ok(Self::from_masks(n, masks))
    }

    fn from_masks(n: usize, mut blocks: Vec<u16>) -> Self {
        canonical_order(&mut blocks);
        Partition { n, blocks }
    }

    /// The finest partition `0̂ = {{1}, …, {n}}`.
    pub fn finest(n: usize) -> Self {
        Self::from_masks(n, (0..n).map(|i| 1u16 << i).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// Block sizes, nonincreasing: the type `(λ_1, λ_2, …)`.
    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.count_ones() as usize).collect()
    }

    pub fn blocks(&self) -> Vec<Vec<usize>> {
        self.blocks
            .iter()
            .map(|&b| (0..self.n).filter(|i| b >> i & 1 == 1).map(|i| i + 1).collect())
            .collect()
    }

    /// `self ≤ other`: every block of `self` lies inside some block of `other`.
    pub fn refines(&self, other: &Partition) -> bool {
        self.n == other.n
            && self
                .blocks
                .iter()
                .all(|&b| other.blocks.iter().any(|&o| b & !o == 0))
    }

    /// `μ(0̂, self) = ∏_i (-1)^{λ_i - 1} (λ_i - 1)!`.
    pub fn mobius_product(&self) -> i64 {
        self.block_sizes()
            .iter()
            .map(|&size| {
                let f: i64 = (1..size as i64).product();
                if size % 2 == 0 {
                    -f
                } else {
                    f
                }
            })
            .product()
    }

    /// All partitions `y ≤ self`, built block by block.
    pub fn refinements(&self) -> Vec<Partition> {
        let mut partial: Vec<Vec<u16>> = vec![Vec::new()];
        for &block in &self.blocks {
            let splits = set_partitions_of_mask(block);
            let mut next = Vec::with_capacity(partial.len() * splits.len());
            for prefix in &partial {
                for split in &splits {
                    let mut v = prefix.clone();
                    v.extend_from_slice(split);
                    next.push(v);
                }
            }
            partial = next;
        }
        partial
            .into_iter()
            .map(|blocks| Self::from_masks(self.n, blocks))
            .collect()
    }
}

/// Set partitions of the elements of `mask`, as lists of sub-masks.
fn set_partitions_of_mask(mask: u16) -> Vec<Vec<u16>> {
    if mask == 0 {
        return vec![Vec::new()];
    }
    let lowest = mask & mask.wrapping_neg();
    let rest = mask & !lowest;
    let mut out = Vec::new();
    // Choose the block containing the lowest element: lowest ∪ (subset of rest).
    let mut sub = rest;
    loop {
        let block = lowest | sub;
        for mut tail in set_partitions_of_mask(rest & !sub) {
            tail.push(block);
            out.push(tail);
        }
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & rest;
    }
    out
}

/// `Π_n` with recursively computed Möbius values `μ(0̂, x)`.
#[derive(Debug)]
pub struct PartitionLattice {
    n: usize,
    partitions: Vec<Partition>,
    index: HashMap<Partition, usize>,
    mobius: Vec<i64>,
}

impl PartitionLattice {
    fn build(n: usize) -> Self {
        let mut partitions = set_partitions_of_mask(((1u32 << n) - 1) as u16)
            .into_iter()
            .map(|blocks| Partition::from_masks(n, blocks))
            .collect::<Vec<_>>();
        // Coarser partitions have fewer blocks; process finer ones first.
        partitions.sort_by(|a, b| b.block_count().cmp(&a.block_count()).then_with(|| a.cmp(b)));
        let index: HashMap<Partition, usize> = partitions
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        let mut mobius = vec![0i64; partitions.len()];
        for (i, x) in partitions.iter().enumerate() {
            if x.block_count() == n {
                mobius[i] = 1;
                continue;
            }
            mobius[i] = -x
                .refinements()
                .iter()
                .filter(|y| *y != x)
                .map(|y| mobius[index[y]])
                .sum::<i64>();
        }
        PartitionLattice { n, partitions, index, mobius }
    }

    /// Cached lattice for `n ≤ MAX_LATTICE_N`.
    pub fn get(n: usize) -> Result<Arc<PartitionLattice>> {
        static CACHE: [OnceLock<Arc<PartitionLattice>>; MAX_LATTICE_N + 1] =
            [const { OnceLock::new() }; MAX_LATTICE_N + 1];
        if n > MAX_LATTICE_N {
            return Err(Error::EnumerationBound {
                requested: n as u128,
                bound: MAX_LATTICE_N as u128,
            });
        }
        Ok(CACHE[n].get_or_init(|| Arc::new(Self::build(n))).clone())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn partitions(&self) -> &[Partition] {
        &self.partitions
    }

    pub fn len(&self) -> usize {
        self.partitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.partitions.is_empty()
    }

    /// Recursive `μ(0̂, x) = -Σ_{y<x} μ(0̂, y)`.
    pub fn mobius(&self, x: &Partition) -> Option<i64> {
        self.index.get(x).map(|&i| self.mobius[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Partition, i64)> {
        self.partitions.iter().zip(self.mobius.iter().copied())
    }
}

/// All partitions of `{1..n}`, `n ≤ 10`.
pub fn enumerate_partitions(n: usize) -> Result<Vec<Partition>> {
    Ok(PartitionLattice::get(n)?.partitions().to_vec())
}

/// `μ(0̂, x)` from the recursive definition.
pub fn mobius(x: &Partition) -> Result<i64> {
    let lattice = PartitionLattice::get(x.n())?;
    Ok(lattice.mobius(x).expect("every partition of {1..n} is in the lattice"))
}

/// `Σ_{y ∈ Π_n} (-1)^{c(y)} μ(0̂, y)`, which equals `(-1)^n n!`.
pub fn mobius_inversion_difference(n: usize) -> Result<i64> {
    if n > 9 {
        return Err(Error::EnumerationBound { requested: n as u128, bound: 9 });
    }
    let lattice = PartitionLattice::get(n)?;
    Ok(lattice
        .iter()
        .map(|(y, mu)| if y.block_count() % 2 == 0 { mu } else { -mu })
        .sum())
}
