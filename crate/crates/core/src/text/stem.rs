//! Porter suffix-stripping stemmer, used when reducing caption tokens to a
//! common base form.
//!
//! Follows the original 1980 algorithm: within each step the longest matching
//! suffix is selected and the rewrite happens only if the measure condition on
//! the remaining stem holds. Words of length <= 2 and words containing
//! non-ASCII-alphabetic characters are returned unchanged.

/// Stem a lowercase token.
pub fn stem(token: &str) -> String {
    let b = token.as_bytes();
    if b.len() <= 2 || !b.iter().all(|c| c.is_ascii_lowercase()) {
        return token.to_string();
    }
    let mut s = Stemmer { w: b.to_vec() };
    s.step1a();
    s.step1b();
    s.step1c();
    s.step2();
    s.step3();
    s.step4();
    s.step5a();
    s.step5b();
    String::from_utf8(s.w).expect("ascii stays ascii")
}

struct Stemmer {
    w: Vec<u8>,
}

impl Stemmer {
    /// Consonant test: a/e/i/o/u are vowels; y is a vowel iff preceded by a
    /// consonant.
    fn is_consonant(&self, i: usize) -> bool {
        match self.w[i] {
            b'a' | b'e' | b'i' | b'o' | b'u' => false,
            b'y' => i == 0 || !self.is_consonant(i - 1),
            _ => true,
        }
    }

    /// Measure m of w[..end]: the number of vowel-consonant sequences.
    fn measure(&self, end: usize) -> usize {
        let mut m = 0;
        let mut i = 0;
        // skip initial consonants
        while i < end && self.is_consonant(i) {
            i += 1;
        }
        loop {
            // vowels
            while i < end && !self.is_consonant(i) {
                i += 1;
            }
            if i == end {
                return m;
            }
            // consonants
            while i < end && self.is_consonant(i) {
                i += 1;
            }
            m += 1;
            if i == end {
                return m;
            }
        }
    }

    fn has_vowel(&self, end: usize) -> bool {
        (0..end).any(|i| !self.is_consonant(i))
    }

    /// *d: stem ends with a double consonant.
    fn ends_double_consonant(&self) -> bool {
        let n = self.w.len();
        n >= 2 && self.w[n - 1] == self.w[n - 2] && self.is_consonant(n - 1)
    }

    /// *o on w[..end]: ends consonant-vowel-consonant where the final
    /// consonant is not w, x or y.
    fn cvc(&self, end: usize) -> bool {
        if end < 3 {
            return false;
        }
        let c = self.w[end - 1];
        self.is_consonant(end - 1)
            && !self.is_consonant(end - 2)
            && self.is_consonant(end - 3)
            && c != b'w'
            && c != b'x'
            && c != b'y'
    }

    fn ends(&self, suffix: &str) -> bool {
        self.w.ends_with(suffix.as_bytes())
    }

    fn truncate(&mut self, n: usize) {
        self.w.truncate(n);
    }

    fn set_suffix(&mut self, old_len: usize, replacement: &str) {
        self.truncate(self.w.len() - old_len);
        self.w.extend_from_slice(replacement.as_bytes());
    }

    /// Apply the first (longest) matching rule of a (suffix, replacement,
    /// min_measure) table; replacement fires only when m(stem) > min_measure.
    fn rule_table(&mut self, rules: &[(&str, &str, usize)]) {
        for &(suffix, replacement, min_m) in rules {
            if self.ends(suffix) {
                let stem_len = self.w.len() - suffix.len();
                if self.measure(stem_len) > min_m {
                    self.set_suffix(suffix.len(), replacement);
                }
                return; // longest match consumes the step either way
            }
        }
    }

    fn step1a(&mut self) {
        if self.ends("sses") {
            self.set_suffix(4, "ss");
        } else if self.ends("ies") {
            self.set_suffix(3, "i");
        } else if self.ends("ss") {
            // unchanged
        } else if self.ends("s") {
            self.set_suffix(1, "");
        }
    }

    fn step1b(&mut self) {
        if self.ends("eed") {
            if self.measure(self.w.len() - 3) > 0 {
                self.set_suffix(3, "ee");
            }
            return;
        }
        let removed = if self.ends("ed") && self.has_vowel(self.w.len() - 2) {
            self.set_suffix(2, "");
            true
        } else if self.ends("ing") && self.has_vowel(self.w.len() - 3) {
            self.set_suffix(3, "");
            true
        } else {
            false
        };
        if !removed {
            return;
        }
        if self.ends("at") || self.ends("bl") || self.ends("iz") {
            self.w.push(b'e');
        } else if self.ends_double_consonant() {
            let last = self.w[self.w.len() - 1];
            if last != b'l' && last != b's' && last != b'z' {
                self.truncate(self.w.len() - 1);
            }
        } else if self.measure(self.w.len()) == 1 && self.cvc(self.w.len()) {
            self.w.push(b'e');
        }
    }

    fn step1c(&mut self) {
        if self.ends("y") && self.has_vowel(self.w.len() - 1) {
            let n = self.w.len();
            self.w[n - 1] = b'i';
        }
    }

    fn step2(&mut self) {
        self.rule_table(&[
            ("ational", "ate", 0),
            ("tional", "tion", 0),
            ("enci", "ence", 0),
            ("anci", "ance", 0),
            ("izer", "ize", 0),
            ("abli", "able", 0),
            ("alli", "al", 0),
            ("entli", "ent", 0),
            ("eli", "e", 0),
            ("ousli", "ous", 0),
            ("ization", "ize", 0),
            ("ation", "ate", 0),
            ("ator", "ate", 0),
            ("alism", "al", 0),
            ("iveness", "ive", 0),
            ("fulness", "ful", 0),
            ("ousness", "ous", 0),
            ("aliti", "al", 0),
            ("iviti", "ive", 0),
            ("biliti", "ble", 0),
        ]);
    }

    fn step3(&mut self) {
        self.rule_table(&[
            ("icate", "ic", 0),
            ("ative", "", 0),
            ("alize", "al", 0),
            ("iciti", "ic", 0),
            ("ical", "ic", 0),
            ("ful", "", 0),
            ("ness", "", 0),
        ]);
    }

    fn step4(&mut self) {
        // "ion" requires the stem to end in s or t.
        if self.ends("ion") {
            let stem_len = self.w.len() - 3;
            if stem_len > 0
                && (self.w[stem_len - 1] == b's' || self.w[stem_len - 1] == b't')
                && self.measure(stem_len) > 1
            {
                self.truncate(stem_len);
            }
            return;
        }
        self.rule_table(&[
            ("ement", "", 1),
            ("ance", "", 1),
            ("ence", "", 1),
            ("able", "", 1),
            ("ible", "", 1),
            ("ment", "", 1),
            ("ant", "", 1),
            ("ent", "", 1),
            ("ism", "", 1),
            ("ate", "", 1),
            ("iti", "", 1),
            ("ous", "", 1),
            ("ive", "", 1),
            ("ize", "", 1),
            ("al", "", 1),
            ("er", "", 1),
            ("ic", "", 1),
            ("ou", "", 1),
        ]);
    }

    fn step5a(&mut self) {
        if !self.ends("e") {
            return;
        }
        let stem_len = self.w.len() - 1;
        let m = self.measure(stem_len);
        if m > 1 || (m == 1 && !self.cvc(stem_len)) {
            self.truncate(stem_len);
        }
    }

    fn step5b(&mut self) {
        let n = self.w.len();
        if n >= 2
            && self.w[n - 1] == b'l'
            && self.ends_double_consonant()
            && self.measure(n) > 1
        {
            self.truncate(n - 1);
        }
    }
}
