use serde::{Deserialize, Serialize};

use crate::stream::VertexId;

/// Misra-Gries frequent-items table over the neighbors of one vertex.
///
/// Holds at most `capacity` neighbors with strictly positive estimates.
/// Every decrement is reported to the caller as one discarded copy of the
/// arc `(w, owner)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MgTable {
    capacity: usize,
    entries: Vec<(VertexId, u64)>,
}

impl MgTable {
    pub fn new(capacity: usize) -> Self {
        assert!(capacity >= 1, "Misra-Gries capacity must be positive");
        MgTable { capacity, entries: Vec::with_capacity(capacity + 1) }
    }

    /// Counts one occurrence of neighbor `u`.
    ///
    /// When the table would exceed its capacity, every entry is decremented
    /// once and `discard(w)` is called for each decremented neighbor `w`;
    /// entries reaching zero are evicted.
    pub fn insert(&mut self, u: VertexId, mut discard: impl FnMut(VertexId)) {
        if let Some(e) = self.entries.iter_mut().find(|e| e.0 == u) {
            e.1 += 1;
            return;
        }
        self.entries.push((u, 1));
        if self.entries.len() > self.capacity {
            for e in &mut self.entries {
                discard(e.0);
                e.1 -= 1;
            }
            self.entries.retain(|e| e.1 > 0);
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Estimate `A(u)`; zero for neighbors not in the table.
    pub fn estimate(&self, u: VertexId) -> u64 {
        self.entries.iter().find(|e| e.0 == u).map_or(0, |e| e.1)
    }

    pub fn entries(&self) -> &[(VertexId, u64)] {
        &self.entries
    }
}

/// Multiset of important arcs, grouped by tail.
///
/// For each tail `u`, `out[u]` lists `(head, cumulative multiplicity)` in
/// insertion order, so weighted draws are a binary search.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImportantArcStore {
    out: Vec<Vec<(VertexId, u64)>>,
}

impl ImportantArcStore {
    pub fn new(n: usize) -> Self {
        ImportantArcStore { out: vec![Vec::new(); n] }
    }

    /// Adds `count` copies of arc `(tail, head)`.
    pub fn add(&mut self, tail: VertexId, head: VertexId, count: u64) {
        if count == 0 {
            return;
        }
        let list = &mut self.out[tail.index()];
        let base = list.last().map_or(0, |e| e.1);
        list.push((head, base + count));
    }

    /// Collects `A_v(u)` copies of `(u, v)` for every entry `u` of every
    /// table, where `tables[v]` is the table owned by `v`.
    pub fn from_tables(tables: &[MgTable]) -> Self {
        let mut store = ImportantArcStore::new(tables.len());
        for (v, table) in tables.iter().enumerate() {
            for &(u, a) in table.entries() {
                store.add(u, VertexId(v as u32), a);
            }
        }
        store
    }

    pub fn num_vertices(&self) -> usize {
        self.out.len()
    }

    /// `d_1(u)`: number of important arcs leaving `u`, with multiplicity.
    pub fn out_degree(&self, u: VertexId) -> u64 {
        self.out[u.index()].last().map_or(0, |e| e.1)
    }

    /// `f_1(u, v)`.
    pub fn multiplicity(&self, u: VertexId, v: VertexId) -> u64 {
        let mut prev = 0;
        let mut total = 0;
        for &(h, cum) in &self.out[u.index()] {
            if h == v {
                total += cum - prev;
            }
            prev = cum;
        }
        total
    }

    /// Head of the `x`-th important arc leaving `u`, for `1 <= x <= d_1(u)`.
    pub fn select(&self, u: VertexId, x: u64) -> VertexId {
        let list = &self.out[u.index()];
        let i = list.partition_point(|e| e.1 < x);
        list[i].0
    }

    /// Number of stored `(tail, head, count)` entries.
    pub fn entries(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    /// Total multiplicity over all arcs.
    pub fn total_multiplicity(&self) -> u64 {
        (0..self.out.len()).map(|u| self.out_degree(VertexId(u as u32))).sum()
    }

    /// `(tail, head, count)` triples.
    pub fn iter(&self) -> impl Iterator<Item = (VertexId, VertexId, u64)> + '_ {
        self.out.iter().enumerate().flat_map(|(u, list)| {
            let mut prev = 0;
            list.iter().map(move |&(h, cum)| {
                let c = cum - prev;
                prev = cum;
                (VertexId(u as u32), h, c)
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const A: VertexId = VertexId(0);
    const B: VertexId = VertexId(1);
    const C: VertexId = VertexId(2);

    #[test]
    fn hand_trace_capacity_two() {
        // a,a,a,b,c with C = 2: the insert of c overflows, each of a,b,c is
        // decremented once and a survives with estimate 2.
        let mut t = MgTable::new(2);
        let mut discarded = Vec::new();
        for u in [A, A, A, B, C] {
            t.insert(u, |w| discarded.push(w));
        }
        assert_eq!(t.entries(), &[(A, 2)]);
        discarded.sort();
        assert_eq!(discarded, vec![A, B, C]);

        let owner = VertexId(7);
        let mut tables = vec![MgTable::new(2); 8];
        tables[owner.index()] = t;
        let e1 = ImportantArcStore::from_tables(&tables);
        assert_eq!(e1.multiplicity(A, owner), 2);
        assert_eq!(e1.out_degree(A), 2);
        assert_eq!(e1.total_multiplicity(), 2);
    }

    #[test]
    fn under_capacity_discards_nothing() {
        let mut t = MgTable::new(3);
        let mut n = 0;
        t.insert(A, |_| n += 1);
        t.insert(B, |_| n += 1);
        assert_eq!(n, 0);
        assert_eq!(t.estimate(A), 1);
        assert_eq!(t.estimate(B), 1);
    }

    #[test]
    fn empty_tables_give_empty_store() {
        let e1 = ImportantArcStore::from_tables(&vec![MgTable::new(4); 5]);
        assert_eq!(e1.entries(), 0);
        assert_eq!(e1.total_multiplicity(), 0);
    }

    #[test]
    fn select_respects_multiplicity() {
        let mut s = ImportantArcStore::new(3);
        s.add(A, B, 2);
        s.add(A, C, 1);
        assert_eq!(s.select(A, 1), B);
        assert_eq!(s.select(A, 2), B);
        assert_eq!(s.select(A, 3), C);
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![(A, B, 2), (A, C, 1)]);
    }
}
