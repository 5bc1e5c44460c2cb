use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use super::SimError;

/// Packed outcome string. Bit 0 is the leftmost character; words are filled
/// from their most significant bit so that ordering matches string ordering.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BitString {
    words: SmallVec<[u64; 1]>,
    len: usize,
}

impl BitString {
    pub fn zeros(len: usize) -> Self {
        BitString {
            words: SmallVec::from_elem(0, len.div_ceil(64).max(1)),
            len,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / 64] >> (63 - i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (63 - i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn clear(&mut self) {
        self.words.iter_mut().for_each(|w| *w = 0);
    }

    pub fn parse(s: &str) -> Option<Self> {
        let mut b = BitString::zeros(s.len());
        for (i, ch) in s.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => b.set(i, true),
                _ => return None,
            }
        }
        Some(b)
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Aggregated outcome frequencies over the recorded classical bits.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Counts {
    width: usize,
    shots: u64,
    counts: BTreeMap<BitString, u64>,
}

#[derive(Serialize, Deserialize)]
struct CountsJson {
    shots: u64,
    counts: BTreeMap<String, u64>,
}

impl Counts {
    pub fn new(width: usize) -> Self {
        Counts {
            width,
            shots: 0,
            counts: BTreeMap::new(),
        }
    }

    /// Number of bits per outcome.
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn shots(&self) -> u64 {
        self.shots
    }

    pub fn add(&mut self, outcome: &BitString, times: u64) {
        debug_assert_eq!(outcome.len(), self.width);
        if times == 0 {
            return;
        }
        self.shots += times;
        if let Some(c) = self.counts.get_mut(outcome) {
            *c += times;
        } else {
            self.counts.insert(outcome.clone(), times);
        }
    }

    /// Adds a string outcome such as `"0110"`.
    pub fn add_str(&mut self, outcome: &str, times: u64) -> Result<(), SimError> {
        let b = BitString::parse(outcome)
            .filter(|b| b.len() == self.width)
            .ok_or_else(|| SimError::BadOutcome(outcome.to_string(), self.width))?;
        self.add(&b, times);
        Ok(())
    }

    pub fn merge(mut self, other: Counts) -> Counts {
        debug_assert_eq!(self.width, other.width);
        if self.counts.len() < other.counts.len() {
            return other.merge(self);
        }
        for (k, v) in other.counts {
            *self.counts.entry(k).or_insert(0) += v;
        }
        self.shots += other.shots;
        self
    }

    pub fn get(&self, outcome: &str) -> u64 {
        BitString::parse(outcome)
            .and_then(|b| self.counts.get(&b).copied())
            .unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BitString, u64)> {
        self.counts.iter().map(|(k, &v)| (k, v))
    }

    /// Number of distinct outcomes observed.
    pub fn distinct(&self) -> usize {
        self.counts.len()
    }

    pub fn frequency(&self, outcome: &str) -> f64 {
        if self.shots == 0 {
            0.0
        } else {
            self.get(outcome) as f64 / self.shots as f64
        }
    }

    /// Marginal counts over a subset of bit positions, in the given order.
    pub fn marginal(&self, positions: &[usize]) -> Counts {
        let mut out = Counts::new(positions.len());
        let mut key = BitString::zeros(positions.len());
        for (k, v) in &self.counts {
            for (j, &p) in positions.iter().enumerate() {
                key.set(j, k.get(p));
            }
            out.add(&key, *v);
        }
        out
    }

    pub fn to_json(&self) -> String {
        let j = CountsJson {
            shots: self.shots,
            counts: self.counts.iter().map(|(k, &v)| (k.to_string(), v)).collect(),
        };
        serde_json::to_string(&j).expect("counts serialize")
    }

    pub fn from_json(text: &str) -> Result<Counts, SimError> {
        let j: CountsJson = serde_json::from_str(text).map_err(|e| SimError::Json(e.to_string()))?;
        let width = j.counts.keys().next().map_or(0, String::len);
        let mut c = Counts::new(width);
        for (k, v) in &j.counts {
            c.add_str(k, *v)?;
        }
        if c.shots != j.shots {
            return Err(SimError::Json(format!(
                "counts sum to {} but shots is {}",
                c.shots, j.shots
            )));
        }
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn json_shape() {
        let mut c = Counts::new(2);
        c.add_str("11", 3).unwrap();
        c.add_str("00", 5).unwrap();
        assert_eq!(c.to_json(), r#"{"shots":8,"counts":{"00":5,"11":3}}"#);
        assert_eq!(Counts::from_json(&c.to_json()).unwrap(), c);
        assert!(Counts::from_json(r#"{"shots":2,"counts":{"0":1}}"#).is_err());
        assert!(c.add_str("012", 1).is_err());
    }

    #[test]
    fn marginal_and_frequency() {
        let mut c = Counts::new(3);
        c.add_str("101", 2).unwrap();
        c.add_str("001", 2).unwrap();
        let m = c.marginal(&[2, 0]);
        assert_eq!(m.get("11"), 2);
        assert_eq!(m.get("10"), 2);
        assert_eq!(c.frequency("101"), 0.5);
    }

    proptest! {
        #[test]
        fn bitstring_order_matches_string_order(a in "[01]{1,130}", b in "[01]{1,130}") {
            let (x, y) = (BitString::parse(&a).unwrap(), BitString::parse(&b).unwrap());
            prop_assert_eq!(x.to_string(), a.clone());
            if a.len() == b.len() {
                prop_assert_eq!(x.cmp(&y), a.cmp(&b));
            }
        }

        #[test]
        fn merge_is_order_independent(xs in proptest::collection::vec((0u8..8, 1u64..5), 0..30), split in 0usize..30) {
            let mk = |items: &[(u8, u64)]| {
                let mut c = Counts::new(3);
                for (o, n) in items {
                    c.add_str(&format!("{o:03b}"), *n).unwrap();
                }
                c
            };
            let split = split.min(xs.len());
            let (l, r) = xs.split_at(split);
            prop_assert_eq!(mk(l).merge(mk(r)), mk(r).merge(mk(l)));
            prop_assert_eq!(mk(l).merge(mk(r)), mk(&xs));
        }
    }
}
