//! Finite and ultimately periodic words over a finite ordered alphabet.
//!
//! A word is a sequence of symbol indices into a shared [`Alphabet`]. Infinite
//! words are restricted to the ultimately periodic shape `head · period^ω`,
//! stored in *canonical form*: the period is primitive (not a proper power)
//! and the head is as short as possible. Canonical forms are unique, so
//! structural equality of [`UPWord`] is word equality; the letterwise
//! characterization (agreement up to `|head_x| + |head_y| + lcm(|p_x|, |p_y|)`)
//! is kept around in tests as an independent oracle.

use std::cmp::Ordering;
use std::fmt;
use std::sync::{Arc, OnceLock};

use thiserror::Error;

/// Errors from word- and alphabet-level operations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("alphabet must not be empty")]
    EmptyAlphabet,
    #[error("duplicate symbol `{0}` in alphabet")]
    DuplicateSymbol(String),
    #[error("alphabet holds at most 255 symbols")]
    AlphabetTooLarge,
    #[error("`{0}` is not a symbol of the alphabet")]
    UnknownSymbol(String),
    #[error("operands belong to different alphabets")]
    AlphabetMismatch,
    #[error("the period of an ultimately periodic word must not be empty")]
    EmptyPeriod,
    #[error("symbol map is not a permutation of the alphabet")]
    NotAPermutation,
}

/// A symbol, stored as an index into its alphabet's symbol list.
///
/// The index order *is* the symbol order used everywhere deterministic
/// ordering matters (child order in renderings, edge order in exports,
/// off-word enumeration).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sym(pub u8);

impl Sym {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A finite ordered alphabet of distinct printable symbol tokens.
#[derive(Debug, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<String>,
}

impl Alphabet {
    pub fn new<I, S>(symbols: I) -> Result<Arc<Alphabet>, WordError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if symbols.is_empty() {
            return Err(WordError::EmptyAlphabet);
        }
        if symbols.len() > u8::MAX as usize {
            return Err(WordError::AlphabetTooLarge);
        }
        for (i, s) in symbols.iter().enumerate() {
            if symbols[..i].contains(s) {
                return Err(WordError::DuplicateSymbol(s.clone()));
            }
        }
        Ok(Arc::new(Alphabet { symbols }))
    }

    /// The default two-symbol alphabet `{a, b}`.
    pub fn binary() -> Arc<Alphabet> {
        static BINARY: OnceLock<Arc<Alphabet>> = OnceLock::new();
        BINARY
            .get_or_init(|| Alphabet::new(["a", "b"]).expect("binary alphabet is well formed"))
            .clone()
    }

    pub fn size(&self) -> usize {
        self.symbols.len()
    }

    pub fn symbol(&self, s: Sym) -> &str {
        &self.symbols[s.index()]
    }

    pub fn lookup(&self, token: &str) -> Option<Sym> {
        self.symbols.iter().position(|s| s == token).map(|i| Sym(i as u8))
    }

    /// All symbols in alphabet order.
    pub fn syms(&self) -> impl Iterator<Item = Sym> + '_ {
        (0..self.symbols.len()).map(|i| Sym(i as u8))
    }

    pub fn tokens(&self) -> &[String] {
        &self.symbols
    }
}

/// `Ok(())` when both values live over the same alphabet (pointer-equal or
/// token-for-token equal).
pub fn same_alphabet(a: &Arc<Alphabet>, b: &Arc<Alphabet>) -> Result<(), WordError> {
    if Arc::ptr_eq(a, b) || a == b {
        Ok(())
    } else {
        Err(WordError::AlphabetMismatch)
    }
}

/// A finite word; the empty word is written `eps` in textual form.
#[derive(Clone)]
pub struct FiniteWord {
    alphabet: Arc<Alphabet>,
    letters: Vec<Sym>,
}

impl FiniteWord {
    pub fn empty(alphabet: &Arc<Alphabet>) -> FiniteWord {
        FiniteWord { alphabet: alphabet.clone(), letters: Vec::new() }
    }

    pub fn from_syms(alphabet: &Arc<Alphabet>, letters: Vec<Sym>) -> FiniteWord {
        debug_assert!(letters.iter().all(|s| s.index() < alphabet.size()));
        FiniteWord { alphabet: alphabet.clone(), letters }
    }

    /// Parses a juxtaposition of symbol tokens (`eps` for the empty word).
    /// Longest token match wins, so multi-character symbols are allowed as
    /// long as the alphabet itself is prefix-unambiguous.
    pub fn parse(alphabet: &Arc<Alphabet>, text: &str) -> Result<FiniteWord, WordError> {
        if text == "eps" {
            return Ok(FiniteWord::empty(alphabet));
        }
        let mut letters = Vec::new();
        let mut rest = text;
        'outer: while !rest.is_empty() {
            let mut best: Option<(usize, Sym)> = None;
            for s in alphabet.syms() {
                let tok = alphabet.symbol(s);
                if rest.starts_with(tok) {
                    if best.map_or(true, |(len, _)| tok.len() > len) {
                        best = Some((tok.len(), s));
                    }
                }
            }
            if let Some((len, s)) = best {
                letters.push(s);
                rest = &rest[len..];
                continue 'outer;
            }
            return Err(WordError::UnknownSymbol(
                rest.chars().next().map(String::from).unwrap_or_default(),
            ));
        }
        Ok(FiniteWord::from_syms(alphabet, letters))
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[Sym] {
        &self.letters
    }

    pub fn letter(&self, i: usize) -> Sym {
        self.letters[i]
    }

    pub fn concat(&self, other: &FiniteWord) -> Result<FiniteWord, WordError> {
        same_alphabet(&self.alphabet, &other.alphabet)?;
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(FiniteWord { alphabet: self.alphabet.clone(), letters })
    }

    pub fn push(&self, s: Sym) -> FiniteWord {
        let mut letters = self.letters.clone();
        letters.push(s);
        FiniteWord { alphabet: self.alphabet.clone(), letters }
    }

    /// The prefix of length `min(n, |w|)`.
    pub fn restrict(&self, n: usize) -> FiniteWord {
        let n = n.min(self.letters.len());
        FiniteWord { alphabet: self.alphabet.clone(), letters: self.letters[..n].to_vec() }
    }

    /// Drops the first `n` letters (empty word when `n ≥ |w|`).
    pub fn corestrict(&self, n: usize) -> FiniteWord {
        let n = n.min(self.letters.len());
        FiniteWord { alphabet: self.alphabet.clone(), letters: self.letters[n..].to_vec() }
    }

    pub fn is_prefix_of(&self, other: &FiniteWord) -> bool {
        other.letters.len() >= self.letters.len()
            && other.letters[..self.letters.len()] == self.letters[..]
    }
}

impl PartialEq for FiniteWord {
    fn eq(&self, other: &Self) -> bool {
        self.letters == other.letters && *self.alphabet == *other.alphabet
    }
}

impl Eq for FiniteWord {}

impl std::hash::Hash for FiniteWord {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.letters.hash(state);
    }
}

/// Shortlex: by length first, then letterwise in symbol order.
impl Ord for FiniteWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.letters
            .len()
            .cmp(&other.letters.len())
            .then_with(|| self.letters.cmp(&other.letters))
    }
}

impl PartialOrd for FiniteWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for FiniteWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("eps");
        }
        for &s in &self.letters {
            f.write_str(self.alphabet.symbol(s))?;
        }
        Ok(())
    }
}

impl fmt::Debug for FiniteWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteWord({self})")
    }
}

/// An ultimately periodic word `head · period^ω`, kept in canonical form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UPWord {
    head: FiniteWord,
    period: FiniteWord,
}

impl UPWord {
    /// Builds the word `head · period^ω` and canonicalizes it: the period is
    /// reduced to its primitive root, then trailing head letters equal to the
    /// last period letter are absorbed by rotating the period.
    pub fn new(head: FiniteWord, period: FiniteWord) -> Result<UPWord, WordError> {
        same_alphabet(&head.alphabet, &period.alphabet)?;
        if period.is_empty() {
            return Err(WordError::EmptyPeriod);
        }
        let mut head_letters = head.letters;
        let mut period_letters = primitive_root(&period.letters);
        while let Some(&last) = head_letters.last() {
            if last != *period_letters.last().expect("period is non-empty") {
                break;
            }
            head_letters.pop();
            let rotated = period_letters.pop().expect("period is non-empty");
            period_letters.insert(0, rotated);
        }
        let alphabet = head.alphabet;
        Ok(UPWord {
            head: FiniteWord { alphabet: alphabet.clone(), letters: head_letters },
            period: FiniteWord { alphabet, letters: period_letters },
        })
    }

    /// A purely periodic word `period^ω`.
    pub fn periodic(period: FiniteWord) -> Result<UPWord, WordError> {
        let head = FiniteWord::empty(&period.alphabet);
        UPWord::new(head, period)
    }

    /// Parses `head(period)^w`, `(period)^w`, or a bare head-less error.
    pub fn parse(alphabet: &Arc<Alphabet>, text: &str) -> Result<UPWord, WordError> {
        let (head_txt, rest) = match text.find('(') {
            Some(i) => (&text[..i], &text[i..]),
            None => return Err(WordError::EmptyPeriod),
        };
        let period_txt = rest
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(")^w"))
            .ok_or(WordError::EmptyPeriod)?;
        let head = if head_txt.is_empty() {
            FiniteWord::empty(alphabet)
        } else {
            FiniteWord::parse(alphabet, head_txt)?
        };
        UPWord::new(head, FiniteWord::parse(alphabet, period_txt)?)
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.head.alphabet
    }

    pub fn head(&self) -> &FiniteWord {
        &self.head
    }

    pub fn period(&self) -> &FiniteWord {
        &self.period
    }

    /// The letter at position `n` (0-based).
    pub fn letter_at(&self, n: usize) -> Sym {
        if n < self.head.len() {
            self.head.letter(n)
        } else {
            self.period.letter((n - self.head.len()) % self.period.len())
        }
    }

    /// The finite prefix of length `n` — `restrict` on an infinite word.
    pub fn restrict(&self, n: usize) -> FiniteWord {
        let letters = (0..n).map(|i| self.letter_at(i)).collect();
        FiniteWord { alphabet: self.head.alphabet.clone(), letters }
    }

    /// Drops the first `n` letters; the result is re-canonicalized.
    pub fn corestrict(&self, n: usize) -> UPWord {
        if n <= self.head.len() {
            let head = self.head.corestrict(n);
            UPWord::new(head, self.period.clone()).expect("period stays non-empty")
        } else {
            let m = (n - self.head.len()) % self.period.len();
            let mut letters = self.period.letters[m..].to_vec();
            letters.extend_from_slice(&self.period.letters[..m]);
            let period = FiniteWord { alphabet: self.head.alphabet.clone(), letters };
            UPWord::periodic(period).expect("period stays non-empty")
        }
    }
}

impl fmt::Display for UPWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.head.is_empty() {
            write!(f, "{}", self.head)?;
        }
        write!(f, "({})^w", self.period)
    }
}

impl fmt::Debug for UPWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UPWord({self})")
    }
}

/// The primitive root of a non-empty letter sequence: the shortest `x` with
/// `letters = x^k`.
fn primitive_root(letters: &[Sym]) -> Vec<Sym> {
    let n = letters.len();
    for d in 1..=n {
        if n % d != 0 {
            continue;
        }
        if letters.iter().enumerate().all(|(i, &s)| s == letters[i % d]) {
            return letters[..d].to_vec();
        }
    }
    letters.to_vec()
}

/// Equality of ultimately periodic words. Canonical forms are unique, so this
/// is structural equality; tests validate it against letterwise expansion.
pub fn upword_equal(x: &UPWord, y: &UPWord) -> bool {
    x == y
}

/// A finite or ultimately periodic word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Word {
    Finite(FiniteWord),
    Ultimately(UPWord),
}

impl Word {
    pub fn alphabet(&self) -> &Arc<Alphabet> {
        match self {
            Word::Finite(w) => w.alphabet(),
            Word::Ultimately(w) => w.alphabet(),
        }
    }

    pub fn restrict(&self, n: usize) -> FiniteWord {
        match self {
            Word::Finite(w) => w.restrict(n),
            Word::Ultimately(w) => w.restrict(n),
        }
    }

    pub fn corestrict(&self, n: usize) -> Word {
        match self {
            Word::Finite(w) => Word::Finite(w.corestrict(n)),
            Word::Ultimately(w) => Word::Ultimately(w.corestrict(n)),
        }
    }
}

/// Left concatenation `u · w`; the interesting case glues a finite word onto
/// an ultimately periodic one and re-canonicalizes.
pub fn concat(u: &FiniteWord, w: &Word) -> Result<Word, WordError> {
    match w {
        Word::Finite(v) => Ok(Word::Finite(u.concat(v)?)),
        Word::Ultimately(v) => {
            let head = u.concat(&v.head)?;
            Ok(Word::Ultimately(UPWord::new(head, v.period.clone())?))
        }
    }
}

/// A bijection of the alphabet onto itself, applied letterwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolPermutation {
    alphabet: Arc<Alphabet>,
    map: Vec<Sym>,
}

impl SymbolPermutation {
    pub fn identity(alphabet: &Arc<Alphabet>) -> SymbolPermutation {
        SymbolPermutation { alphabet: alphabet.clone(), map: alphabet.syms().collect() }
    }

    /// Builds a permutation from explicit token pairs; unmentioned symbols
    /// stay fixed. Fails unless the resulting map is a bijection.
    pub fn from_pairs(
        alphabet: &Arc<Alphabet>,
        pairs: &[(&str, &str)],
    ) -> Result<SymbolPermutation, WordError> {
        let mut map: Vec<Sym> = alphabet.syms().collect();
        for &(from, to) in pairs {
            let from = alphabet.lookup(from).ok_or_else(|| WordError::UnknownSymbol(from.into()))?;
            let to = alphabet.lookup(to).ok_or_else(|| WordError::UnknownSymbol(to.into()))?;
            map[from.index()] = to;
        }
        let mut seen = vec![false; alphabet.size()];
        for s in &map {
            if seen[s.index()] {
                return Err(WordError::NotAPermutation);
            }
            seen[s.index()] = true;
        }
        Ok(SymbolPermutation { alphabet: alphabet.clone(), map })
    }

    /// The order-reversing permutation (`a↔b` on the binary alphabet) — the
    /// mirror used by the surface language.
    pub fn reversal(alphabet: &Arc<Alphabet>) -> SymbolPermutation {
        let n = alphabet.size();
        let map = (0..n).map(|i| Sym((n - 1 - i) as u8)).collect();
        SymbolPermutation { alphabet: alphabet.clone(), map }
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn apply(&self, s: Sym) -> Sym {
        self.map[s.index()]
    }

    pub fn inverse(&self) -> SymbolPermutation {
        let mut map = vec![Sym(0); self.map.len()];
        for (i, s) in self.map.iter().enumerate() {
            map[s.index()] = Sym(i as u8);
        }
        SymbolPermutation { alphabet: self.alphabet.clone(), map }
    }

    pub fn apply_finite(&self, w: &FiniteWord) -> FiniteWord {
        let letters = w.letters.iter().map(|&s| self.apply(s)).collect();
        FiniteWord { alphabet: self.alphabet.clone(), letters }
    }

    pub fn apply_up(&self, w: &UPWord) -> UPWord {
        // Letterwise images of canonical forms are canonical: primitivity and
        // head minimality are preserved under a bijection of letters.
        UPWord {
            head: self.apply_finite(&w.head),
            period: self.apply_finite(&w.period),
        }
    }
}

/// Mirror of a word under a symbol permutation.
pub fn mirror_word(p: &SymbolPermutation, w: &Word) -> Word {
    match w {
        Word::Finite(v) => Word::Finite(p.apply_finite(v)),
        Word::Ultimately(v) => Word::Ultimately(p.apply_up(v)),
    }
}

/// The off-words of `w` up to position `n`: every `w_{|k} · a` with `k < n`
/// and `a ≠ w_{k+1}`, in (position, symbol-order) order. These are exactly the
/// one-letter departures from `w`, pairwise incomparable, and they partition
/// everything that leaves `w` within the first `n` letters.
pub fn off_words(w: &UPWord, n: usize) -> Vec<FiniteWord> {
    let alphabet = w.alphabet();
    let mut out = Vec::with_capacity(n * (alphabet.size() - 1));
    for k in 0..n {
        let prefix = w.restrict(k);
        let on = w.letter_at(k);
        for a in alphabet.syms() {
            if a != on {
                out.push(prefix.push(a));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bw(text: &str) -> FiniteWord {
        FiniteWord::parse(&Alphabet::binary(), text).unwrap()
    }

    fn up(head: &str, period: &str) -> UPWord {
        UPWord::new(bw(head), bw(period)).unwrap()
    }

    /// Independent letterwise oracle: expand both words far enough that a
    /// difference must already have shown up.
    fn letterwise_equal(x: &UPWord, y: &UPWord) -> bool {
        fn lcm(a: usize, b: usize) -> usize {
            fn gcd(a: usize, b: usize) -> usize {
                if b == 0 { a } else { gcd(b, a % b) }
            }
            a / gcd(a, b) * b
        }
        let n = x.head().len() + y.head().len() + lcm(x.period().len(), y.period().len());
        (0..n).all(|i| x.letter_at(i) == y.letter_at(i))
    }

    #[test]
    fn concat_finite() {
        assert_eq!(bw("ab").concat(&bw("ba")).unwrap(), bw("abba"));
        assert_eq!(bw("eps").concat(&bw("ab")).unwrap(), bw("ab"));
        assert_eq!(bw("ab").concat(&bw("eps")).unwrap(), bw("ab"));
    }

    #[test]
    fn concat_up_canonicalizes_via_expansion() {
        let got = match concat(&bw("a"), &Word::Ultimately(up("", "ab"))).unwrap() {
            Word::Ultimately(w) => w,
            _ => unreachable!(),
        };
        // The expansion starts a, a, b, a, b, ...: head `a`, period `ab`.
        for (i, want) in ["a", "a", "b", "a", "b", "a", "b"].iter().enumerate() {
            assert_eq!(got.alphabet().symbol(got.letter_at(i)), *want);
        }
        assert_eq!(got, up("a", "ab"));

        // Absorbing case: a · (ba)^w is (ab)^w with no head at all.
        let got = match concat(&bw("a"), &Word::Ultimately(up("", "ba"))).unwrap() {
            Word::Ultimately(w) => w,
            _ => unreachable!(),
        };
        assert_eq!(got, up("", "ab"));
        assert!(got.head().is_empty());
    }

    #[test]
    fn canonical_form_examples() {
        // abab(ab)^w collapses to (ab)^w.
        assert_eq!(up("abab", "ab"), up("", "ab"));
        // Period reduced to its primitive root.
        assert_eq!(up("", "abab"), up("", "ab"));
        // a(ba)^w rotates into (ab)^w.
        assert_eq!(up("a", "ba"), up("", "ab"));
        // ab(ba)^w expands to a,b,b,a,b,a,... and is already canonical.
        let w = up("ab", "ba");
        assert_eq!(w.head(), &bw("ab"));
        assert_eq!(w.period(), &bw("ba"));
    }

    #[test]
    fn canonicalization_is_idempotent_and_sound() {
        let samples = [
            up("", "a"),
            up("b", "a"),
            up("ab", "ba"),
            up("abb", "ab"),
            up("aaab", "aab"),
        ];
        for w in &samples {
            let again = UPWord::new(w.head().clone(), w.period().clone()).unwrap();
            assert_eq!(&again, w);
            assert!(letterwise_equal(&again, w));
        }
    }

    #[test]
    fn restrict_and_corestrict() {
        let w = up("ab", "ba");
        assert_eq!(w.restrict(5), bw("abbab"));
        assert_eq!(w.restrict(0), bw("eps"));
        // Splitting a prefix: w|p+q = w|p · ((w shifted by p)|q).
        for p in 0..6 {
            for q in 0..6 {
                let whole = w.restrict(p + q);
                let split = w.restrict(p).concat(&w.corestrict(p).restrict(q)).unwrap();
                assert_eq!(whole, split);
            }
        }
        assert_eq!(bw("abba").corestrict(2), bw("ba"));
        assert_eq!(bw("ab").corestrict(5), bw("eps"));
    }

    #[test]
    fn mirror_words() {
        let alpha = Alphabet::binary();
        let m = SymbolPermutation::reversal(&alpha);
        assert_eq!(m.apply_finite(&bw("abba")), bw("baab"));
        let w = up("ab", "a");
        assert_eq!(m.apply_up(&w), up("ba", "b"));
        // Involution on the binary alphabet.
        assert_eq!(m.apply_up(&m.apply_up(&w)), w);
        assert_eq!(m.inverse(), m);
    }

    #[test]
    fn permutation_validation() {
        let alpha = Alphabet::new(["a", "b", "c"]).unwrap();
        let p = SymbolPermutation::from_pairs(&alpha, &[("a", "b"), ("b", "a")]).unwrap();
        assert_eq!(p.apply_finite(&FiniteWord::parse(&alpha, "abc").unwrap()),
                   FiniteWord::parse(&alpha, "bac").unwrap());
        assert_eq!(
            SymbolPermutation::from_pairs(&alpha, &[("a", "b")]),
            Err(WordError::NotAPermutation)
        );
    }

    #[test]
    fn off_word_enumeration() {
        let abc = Alphabet::new(["a", "b", "c"]).unwrap();
        let w = UPWord::new(
            FiniteWord::empty(&abc),
            FiniteWord::parse(&abc, "ab").unwrap(),
        )
        .unwrap();
        let got: Vec<String> = off_words(&w, 2).iter().map(|u| u.to_string()).collect();
        assert_eq!(got, ["b", "c", "aa", "ac"]);

        let v = up("", "a");
        let got: Vec<String> = off_words(&v, 3).iter().map(|u| u.to_string()).collect();
        assert_eq!(got, ["b", "ab", "aab"]);

        assert!(off_words(&v, 0).is_empty());
    }

    #[test]
    fn upword_equality_matches_letterwise_oracle() {
        assert!(upword_equal(&up("abab", "ab"), &up("", "ab")));
        assert!(!upword_equal(&up("", "ab"), &up("", "ba")));
        assert!(upword_equal(&up("a", "ba"), &up("", "ab")));

        // Exhaustive small sweep: canonical equality agrees with expansion.
        let alpha = Alphabet::binary();
        let mut words = Vec::new();
        for head_len in 0..3usize {
            for period_len in 1..3usize {
                for bits in 0..(1u32 << (head_len + period_len)) {
                    let letters: Vec<Sym> =
                        (0..head_len + period_len).map(|i| Sym(((bits >> i) & 1) as u8)).collect();
                    let head = FiniteWord::from_syms(&alpha, letters[..head_len].to_vec());
                    let period = FiniteWord::from_syms(&alpha, letters[head_len..].to_vec());
                    words.push(UPWord::new(head, period).unwrap());
                }
            }
        }
        for x in &words {
            for y in &words {
                assert_eq!(upword_equal(x, y), letterwise_equal(x, y), "{x} vs {y}");
            }
        }
    }

    #[test]
    fn shortlex_ordering() {
        let mut v = vec![bw("b"), bw("aa"), bw("eps"), bw("ab"), bw("a")];
        v.sort();
        let got: Vec<String> = v.iter().map(|w| w.to_string()).collect();
        assert_eq!(got, ["eps", "a", "b", "aa", "ab"]);
    }
}
