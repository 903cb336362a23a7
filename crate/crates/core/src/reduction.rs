//! Bin packing as a special case of drone-delivery packing.
//!
//! Item `j` becomes a delivery over `[2j, 2j + 1]` costing its size, with the
//! bin capacity as battery budget. The windows are pairwise disjoint, so the
//! two problems have the same optimum.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{Energy, Instance};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BinPackingError {
    #[error("bin capacity must be positive")]
    ZeroCapacity,
    #[error("item {item}: size must be in (0, {capacity}], got {size}")]
    BadSize { item: usize, size: u64, capacity: u64 },
    #[error("{n} items is above the exact-search cap of {cap}")]
    OverCap { n: usize, cap: usize },
}

/// A bin-packing instance: identical bins of `capacity`, one item per size.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawBinPacking")]
pub struct BinPackingInstance {
    capacity: u64,
    sizes: Vec<u64>,
}

#[derive(Deserialize)]
struct RawBinPacking {
    capacity: u64,
    sizes: Vec<u64>,
}

impl TryFrom<RawBinPacking> for BinPackingInstance {
    type Error = BinPackingError;

    fn try_from(raw: RawBinPacking) -> Result<Self, Self::Error> {
        BinPackingInstance::new(raw.capacity, raw.sizes)
    }
}

impl BinPackingInstance {
    pub fn new(capacity: u64, sizes: Vec<u64>) -> Result<Self, BinPackingError> {
        if capacity == 0 {
            return Err(BinPackingError::ZeroCapacity);
        }
        if let Some((i, &size)) = sizes
            .iter()
            .enumerate()
            .find(|(_, &s)| s == 0 || s > capacity)
        {
            return Err(BinPackingError::BadSize {
                item: i + 1,
                size,
                capacity,
            });
        }
        Ok(BinPackingInstance { capacity, sizes })
    }

    #[inline]
    pub fn capacity(&self) -> u64 {
        self.capacity
    }

    #[inline]
    pub fn sizes(&self) -> &[u64] {
        &self.sizes
    }
}

/// Builds the equivalent delivery instance.
pub fn bp_to_ddp(bp: &BinPackingInstance) -> Instance {
    Instance::new(
        bp.capacity,
        bp.sizes.iter().enumerate().map(|(i, &s)| {
            let j = i as u64 + 1;
            (2 * j, 2 * j + 1, s as Energy)
        }),
    )
    .expect("bin-packing items always form a valid instance")
}

/// Minimum number of bins.
///
/// Tries `k = ceil(total / capacity), k + 1, ...` and decides each `k` by a
/// depth-first placement of items in decreasing size, never trying two bins
/// with equal load for the same item.
pub fn solve_bp_exact(bp: &BinPackingInstance, cap: usize) -> Result<usize, BinPackingError> {
    let n = bp.sizes.len();
    if n > cap {
        return Err(BinPackingError::OverCap { n, cap });
    }
    if n == 0 {
        return Ok(0);
    }
    let mut items = bp.sizes.clone();
    items.sort_unstable_by(|a, b| b.cmp(a));
    let total: u64 = items.iter().sum();
    let lower = total.div_ceil(bp.capacity) as usize;
    (lower..=n)
        .find(|&k| fits_in(&items, bp.capacity, k))
        .ok_or(BinPackingError::OverCap { n, cap })
}

fn fits_in(items: &[u64], capacity: u64, bins: usize) -> bool {
    fn place(items: &[u64], loads: &mut Vec<u64>, capacity: u64, bins: usize) -> bool {
        let Some((&size, rest)) = items.split_first() else {
            return true;
        };
        for b in 0..loads.len() {
            if loads[b] + size > capacity || loads[..b].contains(&loads[b]) {
                continue;
            }
            loads[b] += size;
            if place(rest, loads, capacity, bins) {
                return true;
            }
            loads[b] -= size;
        }
        if loads.len() < bins {
            loads.push(size);
            if place(rest, loads, capacity, bins) {
                return true;
            }
            loads.pop();
        }
        false
    }
    place(items, &mut Vec::with_capacity(bins), capacity, bins)
}
