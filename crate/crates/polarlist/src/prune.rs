//! Path pruning: keep the L most reliable of 2L tagged path metrics.
//!
//! Two interchangeable implementations are provided. [`prune_by_sort`] is the
//! reference: a full descending sort with documented tie-breaking.
//! [`prune_by_bitonic`] is a behavioral model of the maximum-values-filter
//! hardware: a bitonic sequence generator (the first half sorted ascending,
//! the second half descending) followed by one compare-and-select stage that
//! pairs element `r` with element `r + L`. The two agree on the survivor
//! metric multiset always, and on the exact tagged survivor set whenever all
//! metrics are distinct; under ties the network may route different tags,
//! which the hardware shares.

use crate::kernel::Message;
use crate::{Error, Result};

/// A split path metric tagged with its source list index and bit hypothesis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricEntry<M> {
    pub metric: M,
    pub list_index: usize,
    pub bit: u8,
}

impl<M> MetricEntry<M> {
    pub fn new(metric: M, list_index: usize, bit: u8) -> Self {
        Self {
            metric,
            list_index,
            bit,
        }
    }
}

/// Reference pruner: stable descending sort by metric, ties broken toward
/// the smaller list index and then bit 0; returns the top half in
/// descending-metric order.
pub fn prune_by_sort<M: Message>(entries: &[MetricEntry<M>]) -> Result<Vec<MetricEntry<M>>> {
    let survivors = entries.len() / 2;
    if entries.is_empty() || entries.len() % 2 != 0 {
        return Err(Error::InvalidParameter(format!(
            "pruning needs 2L entries, got {}",
            entries.len()
        )));
    }
    let mut sorted = entries.to_vec();
    sorted.sort_by(|a, b| {
        b.metric
            .partial_cmp(&a.metric)
            .expect("path metrics must be ordered")
            .then(a.list_index.cmp(&b.list_index))
            .then(a.bit.cmp(&b.bit))
    });
    sorted.truncate(survivors);
    Ok(sorted)
}

/// Survivors plus the number of two-input comparators the network used.
#[derive(Debug, Clone)]
pub struct BitonicPruned<M> {
    /// CAS outputs in network order; callers must not assume sortedness.
    pub survivors: Vec<MetricEntry<M>>,
    /// Instrumented comparator count; equals the closed form
    /// [`bitonic_comparator_count`].
    pub comparators: usize,
}

/// Behavioral maximum-values-filter: bitonic sequence generator plus one
/// compare-and-select stage. Requires 2L entries with L a power of two.
pub fn prune_by_bitonic<M: Message>(entries: &[MetricEntry<M>]) -> Result<BitonicPruned<M>> {
    let len = entries.len();
    if len < 2 || len % 2 != 0 || !(len / 2).is_power_of_two() {
        return Err(Error::InvalidParameter(format!(
            "bitonic pruning needs 2L entries with L a power of two, got {len}"
        )));
    }
    let l = len / 2;
    let mut lanes = entries.to_vec();
    let mut comparators = 0usize;
    {
        let (low, high) = lanes.split_at_mut(l);
        sort_lanes(low, true, &mut comparators);
        sort_lanes(high, false, &mut comparators);
    }
    // One CAS per output: element r against element r + L, keep the larger,
    // first input on equality.
    let mut survivors = Vec::with_capacity(l);
    for r in 0..l {
        comparators += 1;
        if lanes[r + l].metric > lanes[r].metric {
            survivors.push(lanes[r + l]);
        } else {
            survivors.push(lanes[r]);
        }
    }
    Ok(BitonicPruned {
        survivors,
        comparators,
    })
}

/// In-place bitonic sorting network; `ascending` picks increase-order or
/// decrease-order sorters at the outermost level. Comparators keep the first
/// input on equal metrics.
fn sort_lanes<M: Message>(lanes: &mut [MetricEntry<M>], ascending: bool, comparators: &mut usize) {
    let n = lanes.len();
    if n < 2 {
        return;
    }
    debug_assert!(n.is_power_of_two());
    let mut k = 2;
    while k <= n {
        let mut j = k / 2;
        while j > 0 {
            for i in 0..n {
                let partner = i ^ j;
                if partner > i {
                    *comparators += 1;
                    let increase = ((i & k) == 0) == ascending;
                    let out_of_order = if increase {
                        lanes[i].metric > lanes[partner].metric
                    } else {
                        lanes[i].metric < lanes[partner].metric
                    };
                    if out_of_order {
                        lanes.swap(i, partner);
                    }
                }
            }
            j /= 2;
        }
        k *= 2;
    }
}

/// Comparator counts of the two pruning architectures for list size L.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComparatorCounts {
    /// Pairwise metric sorter: `L(2L - 1)`.
    pub metric_sorter: usize,
    /// Bitonic maximum-values filter:
    /// `(L/2)((log2 L)^2 + log2 L + 2)`.
    pub bitonic_filter: usize,
}

/// Evaluates both closed-form comparator counts. `L` must be a power of two
/// of at least 2.
pub fn comparator_counts(l: usize) -> Result<ComparatorCounts> {
    if l < 2 || !l.is_power_of_two() {
        return Err(Error::InvalidParameter(format!(
            "list size {l} must be a power of two >= 2"
        )));
    }
    let log = l.trailing_zeros() as usize;
    Ok(ComparatorCounts {
        metric_sorter: l * (2 * l - 1),
        bitonic_filter: l / 2 * (log * log + log + 2),
    })
}
