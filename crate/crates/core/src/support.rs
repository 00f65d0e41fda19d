//! Finitely supported maps.
//!
//! A [`FinSupportedMap`] represents a function `Y -> X` that equals a base
//! value everywhere except on a finite set of keys. Only the non-base entries
//! are stored, sorted by key, so two maps are equal exactly when the functions
//! they denote are equal. The base value itself is owned by the surrounding
//! structure (the graph, streetmap or group the map belongs to) and is passed
//! in wherever a lookup or an update needs it.

use std::fmt;

use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FinSupportedMap<K, V> {
    entries: Vec<(K, V)>,
}

impl<K, V> Default for FinSupportedMap<K, V> {
    fn default() -> Self {
        Self { entries: Vec::new() }
    }
}

impl<K: fmt::Debug, V: fmt::Debug> fmt::Debug for FinSupportedMap<K, V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.entries.iter().map(|(k, v)| (k, v)))
            .finish()
    }
}

impl<K: Ord + Clone, V: Eq + Clone> FinSupportedMap<K, V> {
    /// The map that is constant at the base value.
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a map from arbitrary entries. Entries equal to `base` are dropped;
    /// a repeated key keeps its last value.
    pub fn from_entries<I>(entries: I, base: &V) -> Self
    where
        I: IntoIterator<Item = (K, V)>,
    {
        let mut map = Self::new();
        for (k, v) in entries {
            map.set(k, v, base);
        }
        map
    }

    pub fn get(&self, key: &K) -> Option<&V> {
        self.entries
            .binary_search_by(|(k, _)| k.cmp(key))
            .ok()
            .map(|i| &self.entries[i].1)
    }

    pub fn get_or<'a>(&'a self, key: &K, base: &'a V) -> &'a V {
        self.get(key).unwrap_or(base)
    }

    /// Sets `key` to `value`; setting it to `base` removes the entry.
    pub fn set(&mut self, key: K, value: V, base: &V) {
        match self.entries.binary_search_by(|(k, _)| k.cmp(&key)) {
            Ok(i) if value == *base => {
                self.entries.remove(i);
            }
            Ok(i) => self.entries[i].1 = value,
            Err(_) if value == *base => {}
            Err(i) => self.entries.insert(i, (key, value)),
        }
    }

    pub fn with(&self, key: K, value: V, base: &V) -> Self {
        let mut out = self.clone();
        out.set(key, value, base);
        out
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &V)> {
        self.entries.iter().map(|(k, v)| (k, v))
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.entries.iter().map(|(k, _)| k)
    }

    /// True when no stored value equals `base`.
    pub fn is_canonical_for(&self, base: &V) -> bool {
        self.entries.iter().all(|(_, v)| v != base)
            && self.entries.windows(2).all(|w| w[0].0 < w[1].0)
    }

    /// Wraps entries that are already known to be canonical (no entry equals
    /// the owner's base value); only sorting is performed.
    pub(crate) fn from_canonical(mut entries: Vec<(K, V)>) -> Self {
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        entries.dedup_by(|a, b| a.0 == b.0);
        Self { entries }
    }

    /// Keys on which `self` and `other` disagree, in increasing order.
    pub fn difference_keys<'a>(&'a self, other: &'a Self) -> Vec<&'a K> {
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.entries, &other.entries);
        let mut out = Vec::new();
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(&a[i].0);
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                out.push(&b[j].0);
                j += 1;
            } else {
                if a[i].1 != b[j].1 {
                    out.push(&a[i].0);
                }
                i += 1;
                j += 1;
            }
        }
        out
    }

    /// Applies `f` to keys and values, re-canonicalising against `base`.
    pub fn map_entries<K2, V2, F>(&self, base: &V2, mut f: F) -> FinSupportedMap<K2, V2>
    where
        K2: Ord + Clone,
        V2: Eq + Clone,
        F: FnMut(&K, &V) -> (K2, V2),
    {
        FinSupportedMap::from_entries(self.entries.iter().map(|(k, v)| f(k, v)), base)
    }
}

impl<K: Serialize, V: Serialize> Serialize for FinSupportedMap<K, V> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.entries.len()))?;
        for (k, v) in &self.entries {
            seq.serialize_element(&(k, v))?;
        }
        seq.end()
    }
}

impl<'de, K, V> Deserialize<'de> for FinSupportedMap<K, V>
where
    K: Deserialize<'de> + Ord,
    V: Deserialize<'de>,
{
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct PairsVisitor<K, V>(std::marker::PhantomData<(K, V)>);

        impl<'de, K, V> Visitor<'de> for PairsVisitor<K, V>
        where
            K: Deserialize<'de> + Ord,
            V: Deserialize<'de>,
        {
            type Value = FinSupportedMap<K, V>;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a list of [key, value] pairs with strictly increasing keys")
            }

            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Self::Value, A::Error> {
                let mut entries: Vec<(K, V)> = Vec::new();
                while let Some((k, v)) = seq.next_element::<(K, V)>()? {
                    if let Some((last, _)) = entries.last() {
                        if *last >= k {
                            return Err(de::Error::custom("support keys must be strictly increasing"));
                        }
                    }
                    entries.push((k, v));
                }
                Ok(FinSupportedMap { entries })
            }
        }

        deserializer.deserialize_seq(PairsVisitor(std::marker::PhantomData))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn absent_key_reads_base() {
        let m: FinSupportedMap<i64, i64> = FinSupportedMap::from_entries([(3, 1)], &0);
        assert_eq!(*m.get_or(&3, &0), 1);
        assert_eq!(*m.get_or(&4, &0), 0);
    }

    #[test]
    fn setting_base_removes_entry() {
        let mut m: FinSupportedMap<i64, i64> = FinSupportedMap::new();
        m.set(0, 1, &0);
        assert_eq!(m.len(), 1);
        m.set(0, 0, &0);
        assert!(m.is_empty());
        assert_eq!(m, FinSupportedMap::new());
    }

    #[test]
    fn deserialize_rejects_unsorted_keys() {
        let bad: Result<FinSupportedMap<i64, i64>, _> = serde_json::from_str("[[2,1],[1,1]]");
        assert!(bad.is_err());
        let ok: FinSupportedMap<i64, i64> = serde_json::from_str("[[1,1],[2,1]]").unwrap();
        assert_eq!(serde_json::to_string(&ok).unwrap(), "[[1,1],[2,1]]");
    }

    #[test]
    fn difference_keys_merges_supports() {
        let a = FinSupportedMap::from_entries([(0, 1), (2, 1), (5, 2)], &0);
        let b = FinSupportedMap::from_entries([(2, 1), (3, 1), (5, 1)], &0);
        assert_eq!(a.difference_keys(&b), vec![&0, &3, &5]);
    }

    proptest! {
        #[test]
        fn canonical_after_arbitrary_updates(ops in prop::collection::vec((-5i64..5, 0i64..3), 0..40)) {
            let mut m = FinSupportedMap::new();
            let mut dense = std::collections::BTreeMap::new();
            for (k, v) in ops {
                m.set(k, v, &0);
                dense.insert(k, v);
            }
            prop_assert!(m.is_canonical_for(&0));
            for k in -5..5 {
                prop_assert_eq!(*m.get_or(&k, &0), dense.get(&k).copied().unwrap_or(0));
            }
            let json = serde_json::to_string(&m).unwrap();
            let back: FinSupportedMap<i64, i64> = serde_json::from_str(&json).unwrap();
            prop_assert_eq!(back, m);
        }
    }
}
