//! Finitely supported subprobability distributions.

use std::hash::Hash;

use indexmap::map::Entry;
use indexmap::IndexMap;

use crate::prob::{Prob, Weight};

/// A finitely supported map `T → W` with no zero entries.
///
/// Insertion order is preserved so iteration is deterministic. Total mass is
/// not enforced on every update; [`SubDist::mass`] reports it and callers
/// validate where a bound matters.
#[derive(Debug, Clone, PartialEq)]
pub struct SubDist<T: Hash + Eq, W = Prob> {
    support: IndexMap<T, W>,
}

impl<T: Hash + Eq, W: Weight> Default for SubDist<T, W> {
    fn default() -> Self {
        SubDist {
            support: IndexMap::new(),
        }
    }
}

impl<T: Hash + Eq + Clone, W: Weight> SubDist<T, W> {
    /// The empty subdistribution.
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn dirac(x: T) -> Self {
        let mut d = Self::empty();
        d.add(x, W::one());
        d
    }

    /// Accumulates weights of repeated keys.
    pub fn from_pairs<I: IntoIterator<Item = (T, W)>>(pairs: I) -> Self {
        let mut d = Self::empty();
        for (x, w) in pairs {
            d.add(x, w);
        }
        d
    }

    /// Adds `w` to the weight of `x`, dropping the entry if it becomes zero.
    pub fn add(&mut self, x: T, w: W) {
        if w.is_negligible() {
            return;
        }
        match self.support.entry(x) {
            Entry::Occupied(mut slot) => {
                let sum = slot.get().clone() + w;
                if sum.is_negligible() {
                    slot.shift_remove();
                } else {
                    *slot.get_mut() = sum;
                }
            }
            Entry::Vacant(slot) => {
                slot.insert(w);
            }
        }
    }

    pub fn get(&self, x: &T) -> W {
        self.support.get(x).cloned().unwrap_or_else(W::zero)
    }

    pub fn mass(&self) -> W {
        self.support.values().fold(W::zero(), |acc, w| acc + w.clone())
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn contains(&self, x: &T) -> bool {
        self.support.contains_key(x)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&T, &W)> {
        self.support.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &T> {
        self.support.keys()
    }

    /// Multiplies every weight by `k`.
    pub fn scaled(&self, k: &W) -> Self {
        Self::from_pairs(self.iter().map(|(x, w)| (x.clone(), w.clone() * k.clone())))
    }

    /// `p·self + (1−p)·other`.
    pub fn convex_combine(p: &W, left: &Self, right: &Self) -> Self {
        let p_bar = W::one() - p.clone();
        let mut out = left.scaled(p);
        for (x, w) in right.iter() {
            out.add(x.clone(), w.clone() * p_bar.clone());
        }
        out
    }

    /// Pushes the distribution forward along `f`, summing weights of keys
    /// that collide.
    pub fn map_support<U, F>(&self, mut f: F) -> SubDist<U, W>
    where
        U: Hash + Eq + Clone,
        F: FnMut(&T) -> U,
    {
        SubDist::from_pairs(self.iter().map(|(x, w)| (f(x), w.clone())))
    }

    /// Same weights, different scalar type.
    pub fn map_weights<V: Weight, F: FnMut(&W) -> V>(&self, mut f: F) -> SubDist<T, V> {
        SubDist::from_pairs(self.iter().map(|(x, w)| (x.clone(), f(w))))
    }

    /// Support sorted by `key`. Useful for deterministic output.
    pub fn sorted_by_key<K: Ord, F: FnMut(&T) -> K>(&self, mut key: F) -> Vec<(&T, &W)> {
        let mut entries: Vec<(&T, &W)> = self.iter().collect();
        entries.sort_by_cached_key(|(x, _)| key(x));
        entries
    }
}

impl<T: Hash + Eq + Clone, W: Weight> FromIterator<(T, W)> for SubDist<T, W> {
    fn from_iter<I: IntoIterator<Item = (T, W)>>(iter: I) -> Self {
        Self::from_pairs(iter)
    }
}
