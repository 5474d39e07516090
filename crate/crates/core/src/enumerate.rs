//! Lexicographic enumeration of all words of a given length.

#[derive(Debug, Clone, Copy)]
pub(crate) struct Template {
    q: u16,
    len: usize,
}

impl Template {
    pub(crate) fn full(q: u16, len: usize) -> Self {
        Template { q, len }
    }

    /// Number of words produced, saturating at `u128::MAX`.
    pub(crate) fn count(&self) -> u128 {
        u32::try_from(self.len)
            .ok()
            .and_then(|e| u128::from(self.q).checked_pow(e))
            .unwrap_or(u128::MAX)
    }

    /// Calls `f` on every word in lexicographic order.
    pub(crate) fn for_each(&self, mut f: impl FnMut(&[u8])) {
        if self.q == 0 {
            return;
        }
        let top = (self.q - 1) as u8;
        let mut word = vec![0u8; self.len];
        loop {
            f(&word);
            // odometer step: the trailing maximal symbols roll over
            let Some(pos) = word.iter().rposition(|&s| s < top) else {
                return;
            };
            word[pos] += 1;
            word[pos + 1..].fill(0);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_binary_is_lexicographic() {
        let mut seen = Vec::new();
        Template::full(2, 3).for_each(|w| seen.push(w.to_vec()));
        assert_eq!(seen.len(), 8);
        assert!(seen.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(seen[5], vec![1, 0, 1]);
    }

    #[test]
    fn ternary_count() {
        let mut n = 0u128;
        Template::full(3, 4).for_each(|_| n += 1);
        assert_eq!(n, Template::full(3, 4).count());
        assert_eq!(Template::full(2, 200).count(), u128::MAX);
    }
}
