//! Ground sets, item sets and the lexicographic order used for every tie.
//!
//! Items are numbered `1..=m`. A set is identified with its characteristic
//! bitstring `b_1 b_2 … b_m`, and sets are ordered by comparing those strings
//! with `'0' < '1'`. Internally item `j` lives at bit `m - j` of a `u64`, so
//! the bitstring order is plain integer order on the mask and counting from
//! `0` to `2^m - 1` walks all subsets in lexicographic order.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Largest ground set an [`ItemSet`] can describe.
pub const MAX_ITEMS: usize = 64;

/// Largest ground set that may be enumerated subset by subset.
pub const ENUMERATION_CAP: usize = 24;

/// A subset of the ground set `{1, …, m}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct ItemSet {
    m: u8,
    mask: u64,
}

fn check_ground(m: usize) -> Result<()> {
    if m == 0 {
        return Err(Error::EmptyGroundSet);
    }
    if m > MAX_ITEMS {
        return Err(Error::UnsupportedSize {
            what: "item set",
            m,
            cap: MAX_ITEMS,
        });
    }
    Ok(())
}

fn full_mask(m: usize) -> u64 {
    if m == 64 {
        u64::MAX
    } else {
        (1u64 << m) - 1
    }
}

impl ItemSet {
    pub fn empty(m: usize) -> Result<Self> {
        check_ground(m)?;
        Ok(ItemSet {
            m: m as u8,
            mask: 0,
        })
    }

    pub fn full(m: usize) -> Result<Self> {
        check_ground(m)?;
        Ok(ItemSet {
            m: m as u8,
            mask: full_mask(m),
        })
    }

    /// Builds a set from 1-based item indices. Duplicates are ignored.
    pub fn from_items(m: usize, items: &[usize]) -> Result<Self> {
        let mut set = ItemSet::empty(m)?;
        for &item in items {
            if item == 0 || item > m {
                return Err(Error::ItemOutOfRange { item, m });
            }
            set = set.with(item);
        }
        Ok(set)
    }

    /// The set whose position in lexicographic order is `index`.
    pub fn from_lex_index(m: usize, index: u64) -> Result<Self> {
        check_ground(m)?;
        if index > full_mask(m) {
            return Err(Error::Precondition(format!(
                "lex index {index} out of range for m = {m}"
            )));
        }
        Ok(ItemSet {
            m: m as u8,
            mask: index,
        })
    }

    /// Position of this set in lexicographic order (`0` is the empty set).
    #[inline]
    pub fn lex_index(&self) -> u64 {
        self.mask
    }

    #[inline]
    pub fn ground_size(&self) -> usize {
        self.m as usize
    }

    #[inline]
    fn bit(&self, item: usize) -> u64 {
        debug_assert!(item >= 1 && item <= self.ground_size());
        1u64 << (self.ground_size() - item)
    }

    #[inline]
    pub fn contains(&self, item: usize) -> bool {
        item >= 1 && item <= self.ground_size() && self.mask & self.bit(item) != 0
    }

    /// Copy of `self` with `item` added.
    ///
    /// Panics if `item` is outside `1..=m`.
    #[inline]
    pub fn with(self, item: usize) -> Self {
        assert!(
            item >= 1 && item <= self.ground_size(),
            "item {item} outside 1..={}",
            self.m
        );
        ItemSet {
            m: self.m,
            mask: self.mask | self.bit(item),
        }
    }

    /// Copy of `self` with `item` removed.
    #[inline]
    pub fn without(self, item: usize) -> Self {
        assert!(
            item >= 1 && item <= self.ground_size(),
            "item {item} outside 1..={}",
            self.m
        );
        ItemSet {
            m: self.m,
            mask: self.mask & !self.bit(item),
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn union(&self, other: &ItemSet) -> ItemSet {
        self.assert_same_ground(other);
        ItemSet {
            m: self.m,
            mask: self.mask | other.mask,
        }
    }

    pub fn intersection(&self, other: &ItemSet) -> ItemSet {
        self.assert_same_ground(other);
        ItemSet {
            m: self.m,
            mask: self.mask & other.mask,
        }
    }

    pub fn complement(&self) -> ItemSet {
        ItemSet {
            m: self.m,
            mask: !self.mask & full_mask(self.ground_size()),
        }
    }

    pub fn is_subset_of(&self, other: &ItemSet) -> bool {
        self.assert_same_ground(other);
        self.mask & !other.mask == 0
    }

    /// Members in ascending item order.
    pub fn items(&self) -> impl Iterator<Item = usize> + '_ {
        let m = self.ground_size();
        (1..=m).filter(move |&j| self.mask & (1u64 << (m - j)) != 0)
    }

    /// Characteristic bitstring, item 1 first, e.g. `"101"` for `{1,3}`.
    pub fn bitstring(&self) -> String {
        (1..=self.ground_size())
            .map(|j| if self.contains(j) { '1' } else { '0' })
            .collect()
    }

    /// Parses a comma-separated item list such as `"1,3"`; blank means `∅`.
    /// Surrounding braces are accepted, so canonical renderings round-trip.
    pub fn parse_list(m: usize, text: &str) -> Result<Self> {
        let body = text.trim().trim_start_matches('{').trim_end_matches('}');
        let mut items = Vec::new();
        for tok in body.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let item: usize = tok
                .parse()
                .map_err(|_| Error::Parse(format!("cannot parse item index {tok:?}")))?;
            items.push(item);
        }
        ItemSet::from_items(m, &items)
    }

    fn assert_same_ground(&self, other: &ItemSet) {
        assert_eq!(
            self.m, other.m,
            "item sets over different ground sets ({} vs {})",
            self.m, other.m
        );
    }
}

/// Lexicographic comparison of characteristic bitstrings (`'0' < '1'`).
///
/// The order depends on membership only. Panics when the two sets live on
/// different ground sets.
pub fn lex_compare(a: &ItemSet, b: &ItemSet) -> Ordering {
    a.assert_same_ground(b);
    a.mask.cmp(&b.mask)
}

impl PartialOrd for ItemSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ItemSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.m.cmp(&other.m).then(self.mask.cmp(&other.mask))
    }
}

impl fmt::Display for ItemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, item) in self.items().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{item}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for ItemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// All subsets of `{1..m}` in lexicographic order.
#[derive(Debug, Clone)]
pub struct Subsets {
    m: u8,
    next: u64,
    end: u64,
}

impl Iterator for Subsets {
    type Item = ItemSet;

    fn next(&mut self) -> Option<ItemSet> {
        if self.next > self.end {
            return None;
        }
        let set = ItemSet {
            m: self.m,
            mask: self.next,
        };
        self.next += 1;
        Some(set)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.end + 1 - self.next.min(self.end + 1)) as usize;
        (left, Some(left))
    }
}

impl ExactSizeIterator for Subsets {}

/// Every subset of `{1..m}` in lexicographic order; `m` is capped at
/// [`ENUMERATION_CAP`].
pub fn subsets(m: usize) -> Result<Subsets> {
    check_ground(m)?;
    if m > ENUMERATION_CAP {
        return Err(Error::UnsupportedSize {
            what: "subset enumeration",
            m,
            cap: ENUMERATION_CAP,
        });
    }
    Ok(Subsets {
        m: m as u8,
        next: 0,
        end: full_mask(m),
    })
}

/// Subsets satisfying `keep`, in lexicographic order. The first set yielded
/// that maximizes any objective is therefore the lex-first maximizer.
pub fn enumerate_subsets<F>(m: usize, mut keep: F) -> Result<impl Iterator<Item = ItemSet>>
where
    F: FnMut(&ItemSet) -> bool,
{
    Ok(subsets(m)?.filter(move |s| keep(s)))
}

/// Subsets ordered by cardinality, then by ascending item list
/// (`{1,2} < {1,3} < {2,3}`). Used to report the smallest counterexample
/// when a property check fails.
pub fn by_size_then_items(m: usize) -> Result<Vec<ItemSet>> {
    let mut all: Vec<ItemSet> = subsets(m)?.collect();
    // Within one cardinality, ascending item lists are descending masks.
    all.sort_by(|a, b| a.len().cmp(&b.len()).then(b.mask.cmp(&a.mask)));
    Ok(all)
}
