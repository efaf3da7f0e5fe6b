//! Fixed-length bit arrays with the signed shift-or used by the layered DP.

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct BitArray {
    len: usize,
    words: Vec<u64>,
}

impl BitArray {
    pub(crate) fn new(len: usize) -> Self {
        BitArray {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.len
    }

    pub(crate) fn set(&mut self, idx: usize) {
        debug_assert!(idx < self.len);
        self.words[idx / 64] |= 1u64 << (idx % 64);
    }

    pub(crate) fn get(&self, idx: usize) -> bool {
        idx < self.len && self.words[idx / 64] >> (idx % 64) & 1 == 1
    }

    pub(crate) fn count_ones(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub(crate) fn clear(&mut self) {
        self.words.iter_mut().for_each(|w| *w = 0);
    }

    /// Overwrites `self` with `src` moved by `shift` positions (bit `i` of
    /// `src` lands on bit `i + shift`); bits falling outside `self` are dropped.
    pub(crate) fn assign_shifted(&mut self, src: &BitArray, shift: i64) {
        self.clear();
        let dst_words = self.words.len();
        if dst_words == 0 || src.words.is_empty() {
            return;
        }
        if shift >= 0 {
            let shift = shift as u64;
            if shift >= self.len as u64 {
                return;
            }
            let word_shift = (shift / 64) as usize;
            let bit_shift = (shift % 64) as u32;
            for (i, &w) in src.words.iter().enumerate() {
                if w == 0 {
                    continue;
                }
                let lo = i + word_shift;
                if lo >= dst_words {
                    break;
                }
                self.words[lo] |= w << bit_shift;
                if bit_shift != 0 && lo + 1 < dst_words {
                    self.words[lo + 1] |= w >> (64 - bit_shift);
                }
            }
        } else {
            let shift = shift.unsigned_abs();
            if shift >= src.len as u64 {
                return;
            }
            let word_shift = (shift / 64) as usize;
            let bit_shift = (shift % 64) as u32;
            for (out, i) in (word_shift..src.words.len()).enumerate() {
                if out >= dst_words {
                    break;
                }
                let mut w = src.words[i] >> bit_shift;
                if bit_shift != 0 && i + 1 < src.words.len() {
                    w |= src.words[i + 1] << (64 - bit_shift);
                }
                self.words[out] = w;
            }
        }
        self.mask_tail();
    }

    pub(crate) fn or_assign(&mut self, other: &BitArray) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    /// `self |= a & b`.
    pub(crate) fn or_and_assign(&mut self, a: &BitArray, b: &BitArray) {
        debug_assert_eq!(self.len, a.len);
        debug_assert_eq!(self.len, b.len);
        for ((d, x), y) in self.words.iter_mut().zip(&a.words).zip(&b.words) {
            *d |= x & y;
        }
    }

    pub(crate) fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let tz = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + tz)
            })
        })
    }

    fn mask_tail(&mut self) {
        let rem = self.len % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn naive_shift(src: &[bool], dst_len: usize, shift: i64) -> Vec<bool> {
        let mut out = vec![false; dst_len];
        for (i, &b) in src.iter().enumerate() {
            let j = i as i64 + shift;
            if b && j >= 0 && (j as usize) < dst_len {
                out[j as usize] = true;
            }
        }
        out
    }

    proptest! {
        #[test]
        fn shift_matches_naive(
            src in proptest::collection::vec(any::<bool>(), 0..300),
            dst_len in 0usize..300,
            shift in -320i64..320,
        ) {
            let mut a = BitArray::new(src.len());
            for (i, &b) in src.iter().enumerate() {
                if b { a.set(i); }
            }
            let mut d = BitArray::new(dst_len);
            d.set_all_for_test();
            d.assign_shifted(&a, shift);
            let expect = naive_shift(&src, dst_len, shift);
            let got: Vec<bool> = (0..dst_len).map(|i| d.get(i)).collect();
            prop_assert_eq!(got, expect.clone());
            prop_assert_eq!(d.count_ones() as usize, expect.iter().filter(|b| **b).count());
            let listed: Vec<usize> = d.ones().collect();
            let want: Vec<usize> = expect.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i).collect();
            prop_assert_eq!(listed, want);
        }
    }

    impl BitArray {
        fn set_all_for_test(&mut self) {
            self.words.iter_mut().for_each(|w| *w = u64::MAX);
            self.mask_tail();
        }
    }
}
