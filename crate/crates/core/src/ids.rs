//! Dense identifiers and the name tables that back them.
//!
//! Every entity is interned into a dense `u32` index at build time. Names are
//! interned in lexicographic order, so comparing two ids of the same kind
//! agrees with comparing their names. That keeps every report ordering a
//! plain sort over indices.

use std::collections::HashMap;
use std::fmt;

macro_rules! dense_id {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(pub u32);

        impl $name {
            #[inline]
            pub fn index(self) -> usize {
                self.0 as usize
            }
        }

        impl From<usize> for $name {
            #[inline]
            fn from(i: usize) -> Self {
                $name(i as u32)
            }
        }
    };
}

dense_id!(PermId);
dense_id!(UserId);
dense_id!(RoleId);
dense_id!(SessionId);
dense_id!(ObjectId);
dense_id!(ActivityId);
dense_id!(GroupingId);
dense_id!(DomainId);
dense_id!(
    /// Position of a constraint in declaration order (0-based; reports print it 1-based).
    ConstraintId
);

impl fmt::Display for ConstraintId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0 + 1)
    }
}

/// Sorted, duplicate-free name table.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Names {
    names: Vec<String>,
    lookup: HashMap<String, u32>,
}

impl Names {
    /// Interns `names` in sorted order. Duplicates are collapsed; callers that
    /// need to reject them check before calling.
    pub fn from_unsorted<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut names: Vec<String> = names.into_iter().map(Into::into).collect();
        names.sort_unstable();
        names.dedup();
        let lookup = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), i as u32))
            .collect();
        Self { names, lookup }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<usize> {
        self.lookup.get(name).map(|&i| i as usize)
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.names.iter().map(String::as_str)
    }
}

/// Fixed-capacity bitset over activities. Activity counts are small (hundreds),
/// so the hot loops of pair enumeration work on a handful of words.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ActivitySet {
    words: Box<[u64]>,
}

impl ActivitySet {
    pub fn with_capacity(bits: usize) -> Self {
        Self {
            words: vec![0u64; bits.div_ceil(64)].into_boxed_slice(),
        }
    }

    #[inline]
    pub fn insert(&mut self, a: ActivityId) {
        self.words[a.index() / 64] |= 1u64 << (a.index() % 64);
    }

    #[inline]
    pub fn contains(&self, a: ActivityId) -> bool {
        self.words
            .get(a.index() / 64)
            .is_some_and(|w| w & (1u64 << (a.index() % 64)) != 0)
    }

    #[inline]
    pub fn union_with(&mut self, other: &ActivitySet) {
        for (w, o) in self.words.iter_mut().zip(other.words.iter()) {
            *w |= o;
        }
    }

    pub fn clear(&mut self) {
        self.words.iter_mut().for_each(|w| *w = 0);
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn intersects(&self, other: &ActivitySet) -> bool {
        self.words.iter().zip(other.words.iter()).any(|(a, b)| a & b != 0)
    }

    #[inline]
    pub fn intersection_count(&self, other: &ActivitySet) -> usize {
        self.words
            .iter()
            .zip(other.words.iter())
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// `|(self ∪ other) ∩ mask|` without materializing the union.
    #[inline]
    pub fn union_count_within(&self, other: &ActivitySet, mask: &ActivitySet) -> usize {
        self.words
            .iter()
            .zip(other.words.iter())
            .zip(mask.words.iter())
            .map(|((a, b), m)| ((a | b) & m).count_ones() as usize)
            .sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = ActivityId> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let bit = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(ActivityId::from(wi * 64 + bit))
            })
        })
    }
}

impl fmt::Debug for ActivitySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|a| a.0)).finish()
    }
}
