//! Brute-force truncation oracle.
//!
//! Everything here recomputes answers by explicit enumeration of finite word
//! sets, deliberately avoiding the automaton algorithms in [`crate::analysis`]
//! so that the two routes can be played against each other in tests. Checks
//! are exact at the depth they run at: a truncated identity that holds for
//! every word up to the horizon is reported as a pass, and any discrepancy
//! ships the shortlex-least offending word as a witness.
//!
//! The module also hosts the seeded random-instance generators and the law
//! suites behind the `check-laws` command. Each law instance produces one
//! [`LawReport`]; the suite never stops early, so a report stream always has
//! the same shape for the same seed and count.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::plugged::{RootFamily, SpinePlugged};
use crate::tree::{attach, AutomatonDoc, TreeAutomaton};
use crate::words::{off_words, Alphabet, FiniteWord, Sym, UPWord};

// ----- finite languages -----------------------------------------------------

/// An explicit finite set of words, deduplicated and kept in shortlex order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteLanguage {
    alphabet: Arc<Alphabet>,
    words: BTreeSet<FiniteWord>,
}

impl FiniteLanguage {
    pub fn new(alphabet: &Arc<Alphabet>) -> FiniteLanguage {
        FiniteLanguage {
            alphabet: alphabet.clone(),
            words: BTreeSet::new(),
        }
    }

    pub fn from_words<I>(alphabet: &Arc<Alphabet>, words: I) -> FiniteLanguage
    where
        I: IntoIterator<Item = FiniteWord>,
    {
        FiniteLanguage {
            alphabet: alphabet.clone(),
            words: words.into_iter().collect(),
        }
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn insert(&mut self, w: FiniteWord) {
        self.words.insert(w);
    }

    pub fn contains(&self, w: &FiniteWord) -> bool {
        self.words.contains(w)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Words in shortlex order.
    pub fn words(&self) -> impl Iterator<Item = &FiniteWord> {
        self.words.iter()
    }

    pub fn union(&self, other: &FiniteLanguage) -> FiniteLanguage {
        FiniteLanguage {
            alphabet: self.alphabet.clone(),
            words: self.words.union(&other.words).cloned().collect(),
        }
    }

    pub fn intersection(&self, other: &FiniteLanguage) -> FiniteLanguage {
        FiniteLanguage {
            alphabet: self.alphabet.clone(),
            words: self.words.intersection(&other.words).cloned().collect(),
        }
    }

    /// Keep only the words of length at most `d`.
    pub fn restrict_len(&self, d: usize) -> FiniteLanguage {
        FiniteLanguage {
            alphabet: self.alphabet.clone(),
            words: self.words.iter().filter(|w| w.len() <= d).cloned().collect(),
        }
    }

    /// Length of the longest word (0 for the empty language).
    pub fn max_len(&self) -> usize {
        self.words.iter().map(|w| w.len()).max().unwrap_or(0)
    }

    /// Is the set closed under taking prefixes? (Checking the one-letter
    /// parent of every word suffices, by induction on length.)
    pub fn is_prefix_closed(&self) -> bool {
        self.words
            .iter()
            .all(|w| w.is_empty() || self.words.contains(&w.restrict(w.len() - 1)))
    }

    /// Shortlex-least word on which the two sets disagree.
    pub fn first_difference(&self, other: &FiniteLanguage) -> Option<FiniteWord> {
        // `symmetric_difference` yields in ascending (shortlex) order.
        self.words.symmetric_difference(&other.words).next().cloned()
    }
}

/// `L·M`: every concatenation of a word of `L` with a word of `M`.
pub fn concat_lang(l: &FiniteLanguage, m: &FiniteLanguage) -> FiniteLanguage {
    let mut words = BTreeSet::new();
    for x in l.words() {
        for y in m.words() {
            words.insert(x.concat(y).expect("language operands share an alphabet"));
        }
    }
    FiniteLanguage {
        alphabet: l.alphabet.clone(),
        words,
    }
}

/// `Pref(L)`: every prefix of every word of `L`.
pub fn pref_lang(l: &FiniteLanguage) -> FiniteLanguage {
    let mut words = BTreeSet::new();
    for x in l.words() {
        for k in 0..=x.len() {
            words.insert(x.restrict(k));
        }
    }
    FiniteLanguage {
        alphabet: l.alphabet.clone(),
        words,
    }
}

/// `u⁻¹L`: the words of `L` that start with `u`, with `u` cut off.
pub fn quotient_lang(u: &FiniteWord, l: &FiniteLanguage) -> FiniteLanguage {
    let mut words = BTreeSet::new();
    for x in l.words() {
        if u.is_prefix_of(x) {
            words.insert(x.corestrict(u.len()));
        }
    }
    FiniteLanguage {
        alphabet: l.alphabet.clone(),
        words,
    }
}

/// `uL`: every word of `L` prefixed by `u`.
pub fn left_concat_lang(u: &FiniteWord, l: &FiniteLanguage) -> FiniteLanguage {
    let mut words = BTreeSet::new();
    for x in l.words() {
        words.insert(u.concat(x).expect("language operands share an alphabet"));
    }
    FiniteLanguage {
        alphabet: l.alphabet.clone(),
        words,
    }
}

// ----- truncations ----------------------------------------------------------

/// Depth-`d` truncation of a regular tree: all readable words of length ≤ `d`.
pub fn truncate(t: &TreeAutomaton, depth: usize) -> FiniteLanguage {
    FiniteLanguage::from_words(t.alphabet(), t.words_to_depth(depth))
}

/// Depth-`d` truncation of a schematic plugged tree.
pub fn truncate_plugged(t: &SpinePlugged, depth: usize) -> FiniteLanguage {
    FiniteLanguage::from_words(t.alphabet(), t.truncate(depth))
}

/// Componentwise truncation of a root family for indices below `index_bound`.
pub fn truncate_family(
    t: &RootFamily,
    depth: usize,
    index_bound: usize,
) -> Vec<(usize, FiniteLanguage)> {
    t.truncate(depth, index_bound)
        .into_iter()
        .map(|(k, ws)| (k, FiniteLanguage::from_words(t.alphabet(), ws)))
        .collect()
}

/// Number of readable words of each length `0 ..= depth`, by path counting
/// (saturating, so astronomically wide trees stay comparable).
pub fn truncation_widths(t: &TreeAutomaton, depth: usize) -> Vec<u64> {
    let mut widths = vec![0u64; depth + 1];
    let Some(root) = t.root() else {
        return widths;
    };
    let mut counts = vec![0u64; t.state_count()];
    counts[root] = 1;
    widths[0] = 1;
    for width in widths.iter_mut().skip(1) {
        let mut next = vec![0u64; t.state_count()];
        for (q, &c) in counts.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for a in t.alphabet().syms() {
                if let Some(target) = t.transition(q, a) {
                    next[target] = next[target].saturating_add(c);
                }
            }
        }
        counts = next;
        *width = counts.iter().fold(0u64, |s, &c| s.saturating_add(c));
    }
    widths
}

/// Largest depth ≤ `want` whose truncation stays within `budget` words.
pub fn adaptive_depth(t: &TreeAutomaton, want: usize, budget: u64) -> usize {
    let widths = truncation_widths(t, want);
    let mut total = 0u64;
    let mut depth = 0;
    for (k, &w) in widths.iter().enumerate() {
        total = total.saturating_add(w);
        if total > budget {
            return k.saturating_sub(1);
        }
        depth = k;
    }
    depth
}

// ----- law reports ----------------------------------------------------------

/// Outcome of one law instance.
#[derive(Clone, Debug)]
pub struct LawReport {
    pub law: &'static str,
    pub seed: u64,
    pub pass: bool,
    pub witness: Option<String>,
}

impl LawReport {
    /// The one-line wire form used by `check-laws`:
    /// `{"law":"prop1.3","seed":42,"pass":true,"witness":null}`.
    pub fn to_json(&self) -> String {
        let law = serde_json::Value::String(self.law.to_string());
        let witness = match &self.witness {
            Some(w) => serde_json::Value::String(w.clone()).to_string(),
            None => "null".to_string(),
        };
        format!(
            "{{\"law\":{},\"seed\":{},\"pass\":{},\"witness\":{}}}",
            law, self.seed, self.pass, witness
        )
    }
}

/// Compares two finite languages for a named law. When `mutate` names this
/// law, a fresh word longer than anything on either side is injected into the
/// right-hand side first — a self-test hook proving the comparison actually
/// detects differences (the damaged side is guaranteed to differ).
fn compare(
    law: &'static str,
    seed: u64,
    lhs: &FiniteLanguage,
    rhs: &FiniteLanguage,
    mutate: Option<&str>,
) -> LawReport {
    let damaged;
    let rhs = if mutate == Some(law) {
        let len = lhs.max_len().max(rhs.max_len()) + 1;
        let a0 = lhs.alphabet().syms().next().expect("nonempty alphabet");
        let inject = FiniteWord::from_syms(lhs.alphabet(), vec![a0; len]);
        damaged = rhs.union(&FiniteLanguage::from_words(lhs.alphabet(), [inject]));
        &damaged
    } else {
        rhs
    };
    let witness = lhs.first_difference(rhs);
    LawReport {
        law,
        seed,
        pass: witness.is_none(),
        witness: witness.map(|w| w.to_string()),
    }
}

fn vacuous(law: &'static str, seed: u64) -> LawReport {
    LawReport {
        law,
        seed,
        pass: true,
        witness: None,
    }
}

// ----- the word-law suite ---------------------------------------------------

/// All eight word/quotient/prefix identities on one `(u, v, L)` instance.
/// Finite sets make every check exact (no truncation is involved). The law
/// ids are the stable wire names used in reports.
pub fn law_suite_words(
    u: &FiniteWord,
    v: &FiniteWord,
    lang: &FiniteLanguage,
    seed: u64,
    mutate: Option<&str>,
) -> Vec<LawReport> {
    let alphabet = lang.alphabet().clone();
    let mut out = Vec::with_capacity(8);
    let uv = u.concat(v).expect("instance words share an alphabet");
    let vu = v.concat(u).expect("instance words share an alphabet");

    // u(vL) = (uv)L
    out.push(compare(
        "prop1.1",
        seed,
        &left_concat_lang(u, &left_concat_lang(v, lang)),
        &left_concat_lang(&uv, lang),
        mutate,
    ));
    // u⁻¹(v⁻¹L) = (vu)⁻¹L
    out.push(compare(
        "prop1.2",
        seed,
        &quotient_lang(u, &quotient_lang(v, lang)),
        &quotient_lang(&vu, lang),
        mutate,
    ));
    // u⁻¹(uL) = L
    out.push(compare(
        "prop1.3",
        seed,
        &quotient_lang(u, &left_concat_lang(u, lang)),
        lang,
        mutate,
    ));
    // u(u⁻¹L) = L ∩ uΣ*
    let starting_with_u = FiniteLanguage::from_words(
        &alphabet,
        lang.words().filter(|x| u.is_prefix_of(x)).cloned(),
    );
    out.push(compare(
        "prop1.4",
        seed,
        &left_concat_lang(u, &quotient_lang(u, lang)),
        &starting_with_u,
        mutate,
    ));
    // Pref(Pref(L)) = Pref(L)
    let pl = pref_lang(lang);
    out.push(compare("pref.1", seed, &pref_lang(&pl), &pl, mutate));
    // Pref(L ∪ M) = Pref(L) ∪ Pref(M), with M = {v} ∪ uL
    let m = FiniteLanguage::from_words(&alphabet, [v.clone()]).union(&left_concat_lang(u, lang));
    out.push(compare(
        "pref.2",
        seed,
        &pref_lang(&lang.union(&m)),
        &pl.union(&pref_lang(&m)),
        mutate,
    ));
    // Pref(uL) = Pref(u) ∪ u·Pref(L), provided L ≠ ∅
    if lang.is_empty() {
        out.push(vacuous("pref.3", seed));
    } else {
        let pref_u = FiniteLanguage::from_words(&alphabet, (0..=u.len()).map(|k| u.restrict(k)));
        out.push(compare(
            "pref.3",
            seed,
            &pref_lang(&left_concat_lang(u, lang)),
            &pref_u.union(&left_concat_lang(u, &pl)),
            mutate,
        ));
    }
    // Pref(LM) = Pref(L) ∪ L·Pref(M), provided M ≠ ∅; M = {v} ∪ u⁻¹L never is
    let m = FiniteLanguage::from_words(&alphabet, [v.clone()]).union(&quotient_lang(u, lang));
    out.push(compare(
        "pref.4",
        seed,
        &pref_lang(&concat_lang(lang, &m)),
        &pl.union(&concat_lang(lang, &pref_lang(&m))),
        mutate,
    ));
    out
}

fn random_word(rng: &mut ChaCha8Rng, alphabet: &Arc<Alphabet>, max_len: usize) -> FiniteWord {
    let len = rng.gen_range(0..=max_len);
    let syms = (0..len)
        .map(|_| Sym(rng.gen_range(0..alphabet.size()) as u8))
        .collect();
    FiniteWord::from_syms(alphabet, syms)
}

fn random_up_word(
    rng: &mut ChaCha8Rng,
    alphabet: &Arc<Alphabet>,
    max_head: usize,
    max_period: usize,
) -> UPWord {
    let head = random_word(rng, alphabet, max_head);
    let period_len = rng.gen_range(1..=max_period);
    let period = FiniteWord::from_syms(
        alphabet,
        (0..period_len)
            .map(|_| Sym(rng.gen_range(0..alphabet.size()) as u8))
            .collect(),
    );
    UPWord::new(head, period).expect("period is nonempty")
}

/// Deterministic instance for the word-law suite: `|u|, |v| ≤ 4` and up to
/// 12 words of length ≤ 4 in `L` (possibly none, to exercise the vacuous
/// side conditions).
pub fn random_word_instance(
    seed: u64,
    alphabet: &Arc<Alphabet>,
) -> (FiniteWord, FiniteWord, FiniteLanguage) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u = random_word(&mut rng, alphabet, 4);
    let v = random_word(&mut rng, alphabet, 4);
    let n = rng.gen_range(0..=12);
    let mut lang = FiniteLanguage::new(alphabet);
    for _ in 0..n {
        let w = random_word(&mut rng, alphabet, 4);
        lang.insert(w);
    }
    (u, v, lang)
}

/// Runs `count` seeded word-law instances (seeds `base_seed, base_seed+1, …`),
/// eight reports per instance.
pub fn run_word_suite(base_seed: u64, count: usize, mutate: Option<&str>) -> Vec<LawReport> {
    let alphabet = Alphabet::binary();
    let mut out = Vec::with_capacity(count * 8);
    for i in 0..count as u64 {
        let seed = base_seed.wrapping_add(i);
        let (u, v, lang) = random_word_instance(seed, &alphabet);
        out.extend(law_suite_words(&u, &v, &lang, seed, mutate));
    }
    out
}

// ----- the tree-law suite ---------------------------------------------------

/// Word-budget cap for one tree-law instance; depths are lowered until the
/// enumerated truncation fits.
const TREE_LAW_BUDGET: u64 = 150_000;

/// Depth cap for the alphabet-wide partition check, which enumerates all of
/// `Σ^{≤d}` rather than just the tree.
fn space_depth(alphabet: &Arc<Alphabet>, want: usize) -> usize {
    let sigma = alphabet.size() as u64;
    let mut total = 1u64;
    let mut depth = 0;
    while depth < want {
        let next = total.saturating_mul(sigma).saturating_add(1);
        if next > 20_000 {
            break;
        }
        total = next;
        depth += 1;
    }
    depth
}

/// Set-identity laws for one tree at one depth. Every identity is checked on
/// explicitly enumerated word sets; the partition laws additionally verify
/// disjointness by counting.
///
/// * `tree.pref-closed` — every truncation is prefix-closed.
/// * `tree.root` — the root decomposition reassembles the tree (nonempty
///   trees): `T ∩ Σ^{≤d} = {ε} ∪ ⋃_a a·(a⁻¹T ∩ Σ^{≤d-1})`.
/// * `tree.offwords.space` — the one-letter departures from `w` partition
///   everything below the horizon: `Σ^{≤d'} = Pref(w) ⊎ ⨄_{v ∈ w°} v·Σ^*`.
/// * `tree.offwords.tree` — the same split restricted to the tree:
///   `T = (T ∩ Pref(w)) ⊎ ⨄_{v ∈ w°} v·(v⁻¹T)`, truncated at `d`.
/// * `tree.branch-construct` — a union of components grafted along `w`
///   (cyclic family of ≤ 4 trees, overflowing stems allowed) enumerated
///   level by level agrees with an independent split-point membership test,
///   and is prefix-closed.
pub fn law_suite_trees(
    t: &TreeAutomaton,
    u: &FiniteWord,
    w: &UPWord,
    depth: usize,
    seed: u64,
    mutate: Option<&str>,
) -> Vec<LawReport> {
    let alphabet = t.alphabet().clone();
    let mut out = Vec::new();
    let trunc = truncate(t, depth);

    // Prefix-closedness of the truncation itself. The mutation hook injects
    // an orphan word (its parent is missing) to prove the check can fail.
    {
        let mut probe = trunc.clone();
        if mutate == Some("tree.pref-closed") {
            let a0 = alphabet.syms().next().expect("nonempty alphabet");
            let orphan = FiniteWord::from_syms(&alphabet, vec![a0; trunc.max_len() + 2]);
            probe.insert(orphan);
        }
        let offender = probe
            .words()
            .find(|x| !x.is_empty() && !probe.contains(&x.restrict(x.len() - 1)));
        out.push(LawReport {
            law: "tree.pref-closed",
            seed,
            pass: offender.is_none(),
            witness: offender.map(|x| x.to_string()),
        });
    }

    // Root decomposition (needs a nonempty tree and room for one letter).
    if t.is_empty() || depth == 0 {
        out.push(vacuous("tree.root", seed));
    } else {
        let mut rhs = FiniteLanguage::from_words(&alphabet, [FiniteWord::empty(&alphabet)]);
        for a in alphabet.syms() {
            let letter = FiniteWord::from_syms(&alphabet, vec![a]);
            let below = truncate(&t.quotient(&letter), depth - 1);
            rhs = rhs.union(&left_concat_lang(&letter, &below));
        }
        out.push(compare("tree.root", seed, &trunc, &rhs, mutate));
    }

    // Departure partition of the full space below a (smaller) horizon.
    {
        let ds = space_depth(&alphabet, depth);
        let space = truncate(&TreeAutomaton::full(&alphabet), ds);
        let mut rhs = FiniteLanguage::from_words(&alphabet, (0..=ds).map(|k| w.restrict(k)));
        let mut piece_total = rhs.len();
        for v in off_words(w, ds) {
            let cone = left_concat_lang(&v, &truncate(&TreeAutomaton::full(&alphabet), ds - v.len()));
            piece_total += cone.len();
            rhs = rhs.union(&cone);
        }
        let mut report = compare("tree.offwords.space", seed, &space, &rhs, mutate);
        if report.pass && piece_total != rhs.len() {
            report.pass = false;
            report.witness = Some("pieces overlap".to_string());
        }
        out.push(report);
    }

    // The same partition intersected with the tree, at full depth.
    {
        let mut rhs = FiniteLanguage::from_words(
            &alphabet,
            trunc
                .words()
                .filter(|x| **x == w.restrict(x.len()))
                .cloned(),
        );
        let mut piece_total = rhs.len();
        for v in off_words(w, depth) {
            let cone = left_concat_lang(&v, &truncate(&t.quotient(&v), depth - v.len()));
            piece_total += cone.len();
            rhs = rhs.union(&cone);
        }
        let mut report = compare("tree.offwords.tree", seed, &trunc, &rhs, mutate);
        if report.pass && piece_total != rhs.len() {
            report.pass = false;
            report.witness = Some("pieces overlap".to_string());
        }
        out.push(report);
    }

    // Branch construction with overflow.
    out.push(branch_construct_law(t, u, w, depth, seed, mutate));
    out
}

/// Builds `U = ⋃_{n ≤ p} (Pref(w_{|n}) ∪ w_{|n}·T_n)` for a cyclic family of
/// four components, enumerates its truncation through the graft operation,
/// and replays every membership decision through an independent route: a word
/// `x` lies in `U` iff it is a stem prefix, or some split point `n` at or
/// before its divergence from `w` lands its tail in `T_n`. One-letter
/// perturbations of enumerated words spot-check the negative direction.
fn branch_construct_law(
    t: &TreeAutomaton,
    u: &FiniteWord,
    w: &UPWord,
    depth: usize,
    seed: u64,
    mutate: Option<&str>,
) -> LawReport {
    // The construction grafts the full tree among its components, so its
    // truncation grows like |Σ|^depth no matter how narrow `t` is; this law
    // therefore runs at its own horizon, at most 10.
    let depth = depth.min(10);
    let alphabet = t.alphabet().clone();
    let bases = [
        t.clone(),
        TreeAutomaton::epsilon(&alphabet),
        TreeAutomaton::full(&alphabet),
        TreeAutomaton::pref_word(u),
    ];
    let p_bound = depth;

    let mut route1 = FiniteLanguage::new(&alphabet);
    for n in 0..=p_bound {
        let stem = w.restrict(n);
        route1 = route1.union(&truncate(&attach(&stem, &bases[n % bases.len()]), depth));
    }

    let member2 = |x: &FiniteWord| -> bool {
        let mut j = 0;
        while j < x.len() && x.letter(j) == w.letter_at(j) {
            j += 1;
        }
        (j == x.len() && x.len() <= p_bound)
            || (0..=j.min(p_bound)).any(|n| bases[n % bases.len()].member(&x.corestrict(n)))
    };

    if mutate == Some("tree.branch-construct") {
        // Damage the enumeration with a word the construction does not
        // contain, if the horizon leaves room for one.
        let candidates = truncate(&TreeAutomaton::full(&alphabet), depth.min(6));
        let outside = candidates
            .words()
            .find(|x| !route1.contains(x) && !member2(x))
            .cloned();
        if let Some(outside) = outside {
            route1.insert(outside);
        }
    }

    if !route1.is_prefix_closed() {
        return LawReport {
            law: "tree.branch-construct",
            seed,
            pass: false,
            witness: Some("construction is not prefix-closed".to_string()),
        };
    }
    for x in route1.words() {
        if !member2(x) {
            return LawReport {
                law: "tree.branch-construct",
                seed,
                pass: false,
                witness: Some(x.to_string()),
            };
        }
    }
    for x in route1.words() {
        if x.is_empty() {
            continue;
        }
        for a in alphabet.syms() {
            let y = x.restrict(x.len() - 1).push(a);
            if !route1.contains(&y) && member2(&y) {
                return LawReport {
                    law: "tree.branch-construct",
                    seed,
                    pass: false,
                    witness: Some(y.to_string()),
                };
            }
        }
    }
    LawReport {
        law: "tree.branch-construct",
        seed,
        pass: true,
        witness: None,
    }
}

/// Runs the tree-law suite on a few fixed edge cases (which the random
/// generator cannot produce) followed by seeded random automata with ≤ 6
/// states over 2–3 symbols, at depth `2·states + 4` lowered to fit the word
/// budget.
pub fn run_tree_suite(base_seed: u64, count: usize, mutate: Option<&str>) -> Vec<LawReport> {
    let binary = Alphabet::binary();
    let spine = UPWord::parse(&binary, "(a)^w").expect("valid periodic word");
    let probe_word = FiniteWord::parse(&binary, "ab").expect("valid word");
    let fixed = [
        TreeAutomaton::empty(&binary),
        TreeAutomaton::epsilon(&binary),
        TreeAutomaton::hat(),
        TreeAutomaton::b_tree(3),
        TreeAutomaton::comb(),
    ];
    let mut out = Vec::new();
    for (i, t) in fixed.iter().enumerate().take(count) {
        let seed = base_seed.wrapping_add(i as u64);
        let depth = adaptive_depth(t, 2 * t.state_count() + 4, TREE_LAW_BUDGET);
        out.extend(law_suite_trees(t, &probe_word, &spine, depth, seed, mutate));
    }
    for i in fixed.len()..count {
        let seed = base_seed.wrapping_add(i as u64);
        let alphabet = if seed % 2 == 0 {
            Alphabet::binary()
        } else {
            Alphabet::new(["a", "b", "c"]).expect("distinct symbols")
        };
        let t = random_tree(seed, 6, &alphabet);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x0ff1ce);
        let u = random_word(&mut rng, &alphabet, 3);
        let w = random_up_word(&mut rng, &alphabet, 2, 2);
        let depth = adaptive_depth(&t, 2 * t.state_count() + 4, TREE_LAW_BUDGET);
        out.extend(law_suite_trees(&t, &u, &w, depth, seed, mutate));
    }
    out
}

// ----- isolation by enumeration ----------------------------------------------

/// Verdict of the brute-force isolation check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IsolationVerdict {
    /// The cone at position `N` meets the tree in exactly the one branch, and
    /// `N` is least with that property.
    Isolated(usize),
    /// Either the word is not a branch at all, or some departure with a
    /// branch below it recurs at every depth, so every cone around the word
    /// contains a second branch.
    NotIsolated,
    /// The exact isolation depth exceeds the requested horizon `d`.
    Inconclusive,
}

/// Decides isolation of `w` in `[T]` by walking the automaton along `w` and
/// inspecting the departures — no derivative machinery.
///
/// The walk always closes on a repeated period-boundary state, and any other
/// branch of the cone must leave the walk at some position by a different
/// letter, into a state that still carries a branch (checked by a level-set
/// count, not by liveness analysis). A live departure inside the looping part
/// recurs at every depth, killing isolation outright; otherwise the exact
/// isolation depth is one past the last live departure of the lead-in.
pub fn oracle_isolated(t: &TreeAutomaton, w: &UPWord, d: usize) -> IsolationVerdict {
    let Some(root) = t.root() else {
        return IsolationVerdict::NotIsolated;
    };
    let h = w.head().len();
    let p = w.period().len();

    // Walk along `w`, recording the state at every position. A missing
    // transition means `w` is not even a branch of `T`.
    let mut states = vec![root];
    let mut q = root;
    let mut boundary_seen: HashMap<usize, usize> = HashMap::new();
    let loop_start;
    loop {
        let pos = states.len() - 1;
        if pos >= h && (pos - h) % p == 0 {
            if let Some(&first) = boundary_seen.get(&q) {
                loop_start = first;
                break;
            }
            boundary_seen.insert(q, pos);
        }
        match t.transition(q, w.letter_at(pos)) {
            Some(next) => {
                q = next;
                states.push(next);
            }
            None => return IsolationVerdict::NotIsolated,
        }
    }

    // Both the loop window and the lead-in are walked once, so every
    // recurring (state, letter) pair is inspected exactly once: the window
    // spans a whole number of periods by construction.
    let mut branch_memo: HashMap<usize, bool> = HashMap::new();
    let mut last_live_leadin: Option<usize> = None;
    for m in 0..states.len() - 1 {
        let on = w.letter_at(m);
        let live = t.alphabet().syms().any(|a| {
            a != on
                && t.transition(states[m], a)
                    .is_some_and(|target| branch_below(t, target, &mut branch_memo))
        });
        if !live {
            continue;
        }
        if m >= loop_start {
            return IsolationVerdict::NotIsolated;
        }
        last_live_leadin = Some(m);
    }
    let isolation_depth = last_live_leadin.map_or(0, |m| m + 1);
    if isolation_depth <= d {
        IsolationVerdict::Isolated(isolation_depth)
    } else {
        IsolationVerdict::Inconclusive
    }
}

fn reachable_from(t: &TreeAutomaton, q: usize) -> Vec<usize> {
    let mut seen = vec![false; t.state_count()];
    let mut stack = vec![q];
    let mut out = Vec::new();
    seen[q] = true;
    while let Some(s) = stack.pop() {
        out.push(s);
        for a in t.alphabet().syms() {
            if let Some(target) = t.transition(s, a) {
                if !seen[target] {
                    seen[target] = true;
                    stack.push(target);
                }
            }
        }
    }
    out
}

/// Does some branch pass through `q`? Equivalent to a path of length equal to
/// the reachable-state count existing below `q` (such a path must revisit a
/// state, hence reach a cycle).
fn branch_below(t: &TreeAutomaton, q: usize, memo: &mut HashMap<usize, bool>) -> bool {
    if let Some(&r) = memo.get(&q) {
        return r;
    }
    let steps = reachable_from(t, q).len();
    let mut level: BTreeSet<usize> = BTreeSet::new();
    level.insert(q);
    let mut answer = true;
    for _ in 0..steps {
        let mut next = BTreeSet::new();
        for &s in &level {
            for a in t.alphabet().syms() {
                if let Some(target) = t.transition(s, a) {
                    next.insert(target);
                }
            }
        }
        if next.is_empty() {
            answer = false;
            break;
        }
        level = next;
    }
    memo.insert(q, answer);
    answer
}

// ----- random automata and structural witnesses -------------------------------

/// Deterministic random automaton: state 0 is the root, every (state, symbol)
/// pair gets a uniformly random target with probability 0.6, and the result
/// is trimmed to its reachable part. Never empty (the root always survives).
pub fn random_tree(seed: u64, max_states: usize, alphabet: &Arc<Alphabet>) -> TreeAutomaton {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=max_states.max(1));
    let mut doc = AutomatonDoc {
        alphabet: alphabet.tokens().to_vec(),
        states: n,
        root: Some(0),
        edges: Vec::new(),
    };
    for q in 0..n {
        for a in alphabet.syms() {
            if rng.gen_bool(0.6) {
                doc.edges
                    .push((q, alphabet.symbol(a).to_string(), rng.gen_range(0..n)));
            }
        }
    }
    TreeAutomaton::from_document(&doc).expect("generated document is well formed")
}

/// A state with two letter-distinct continuations that both return to it.
#[derive(Clone, Debug)]
pub struct ContinuumWitness {
    /// Shortest word from the root to the witness state.
    pub access: FiniteWord,
    pub state: usize,
    pub left: Sym,
    pub right: Sym,
}

/// Finds a state that embeds a full binary scheme: two distinct letters whose
/// targets can both walk back to the state. Such a state exists iff the tree
/// has continuum many branches, so this is an independent cross-check of the
/// classification (computed by per-state reachability probes, not by the
/// condensation used there).
pub fn continuum_witness(t: &TreeAutomaton) -> Option<ContinuumWitness> {
    t.root()?;
    for q in 0..t.state_count() {
        let returning: Vec<Sym> = t
            .alphabet()
            .syms()
            .filter(|&a| {
                t.transition(q, a)
                    .is_some_and(|target| reachable_from(t, target).contains(&q))
            })
            .collect();
        if returning.len() >= 2 {
            return Some(ContinuumWitness {
                access: access_word(t, q),
                state: q,
                left: returning[0],
                right: returning[1],
            });
        }
    }
    None
}

/// Shortest word from the root to `q` (states are breadth-first numbered, so
/// a plain BFS recovers one).
fn access_word(t: &TreeAutomaton, q: usize) -> FiniteWord {
    let alphabet = t.alphabet().clone();
    let root = t.root().expect("caller checked for a root");
    let mut parent: Vec<Option<(usize, Sym)>> = vec![None; t.state_count()];
    let mut seen = vec![false; t.state_count()];
    let mut queue = std::collections::VecDeque::new();
    seen[root] = true;
    queue.push_back(root);
    while let Some(s) = queue.pop_front() {
        if s == q {
            break;
        }
        for a in alphabet.syms() {
            if let Some(target) = t.transition(s, a) {
                if !seen[target] {
                    seen[target] = true;
                    parent[target] = Some((s, a));
                    queue.push_back(target);
                }
            }
        }
    }
    let mut letters = Vec::new();
    let mut cur = q;
    while let Some((prev, a)) = parent[cur] {
        letters.push(a);
        cur = prev;
    }
    letters.reverse();
    FiniteWord::from_syms(&alphabet, letters)
}

/// Every canonical ultimately periodic word with head length ≤ `max_head` and
/// period length ≤ `max_period`, deduplicated up to equality of the words
/// they denote, in a stable order.
pub fn up_words(alphabet: &Arc<Alphabet>, max_head: usize, max_period: usize) -> Vec<UPWord> {
    let mut heads = vec![FiniteWord::empty(alphabet)];
    let mut frontier = heads.clone();
    for _ in 0..max_head {
        let mut next = Vec::new();
        for h in &frontier {
            for a in alphabet.syms() {
                next.push(h.push(a));
            }
        }
        heads.extend(next.iter().cloned());
        frontier = next;
    }
    let mut periods = Vec::new();
    let mut pfrontier = vec![FiniteWord::empty(alphabet)];
    for _ in 0..max_period {
        let mut next = Vec::new();
        for h in &pfrontier {
            for a in alphabet.syms() {
                next.push(h.push(a));
            }
        }
        periods.extend(next.iter().cloned());
        pfrontier = next;
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for h in &heads {
        for p in &periods {
            let w = UPWord::new(h.clone(), p.clone()).expect("period is nonempty");
            let key = (w.head().clone(), w.period().clone());
            if seen.insert(key) {
                out.push(w);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{classify_branches, is_isolated, Cardinality};

    fn binary() -> Arc<Alphabet> {
        Alphabet::binary()
    }

    fn bw(text: &str) -> FiniteWord {
        FiniteWord::parse(&binary(), text).expect("valid test word")
    }

    fn bup(text: &str) -> UPWord {
        UPWord::parse(&binary(), text).expect("valid test word")
    }

    fn lang(words: &[&str]) -> FiniteLanguage {
        FiniteLanguage::from_words(&binary(), words.iter().map(|w| bw(w)))
    }

    fn strings(l: &FiniteLanguage) -> Vec<String> {
        l.words().map(|w| w.to_string()).collect()
    }

    #[test]
    fn language_operations() {
        let l = lang(&["ab", "ba", "a"]);
        assert_eq!(strings(&pref_lang(&lang(&["ab"]))), ["eps", "a", "ab"]);
        assert_eq!(strings(&quotient_lang(&bw("a"), &l)), ["eps", "b"]);
        assert_eq!(
            strings(&concat_lang(&lang(&["a"]), &lang(&["eps", "b"]))),
            ["a", "ab"]
        );
        assert_eq!(
            strings(&left_concat_lang(&bw("b"), &lang(&["eps", "a"]))),
            ["b", "ba"]
        );
        assert!(lang(&["eps", "a", "ab"]).is_prefix_closed());
        assert!(!lang(&["eps", "ab"]).is_prefix_closed());
        assert_eq!(
            lang(&["a", "b"]).first_difference(&lang(&["a", "bb"])),
            Some(bw("b"))
        );
    }

    #[test]
    fn truncations_match_the_exact_word_sets() {
        assert_eq!(
            strings(&truncate(&TreeAutomaton::hat(), 2)),
            ["eps", "a", "b", "aa", "bb"]
        );
        assert_eq!(
            strings(&truncate(&TreeAutomaton::b_tree(2), 2)),
            ["eps", "a", "b", "aa", "ab", "bb"]
        );
        assert!(truncate(&TreeAutomaton::empty(&binary()), 5).is_empty());
    }

    #[test]
    fn widths_count_words_per_level() {
        // The depth-k slice of B(2) has k+1 words: a^j b^{k-j} for j ≤ k.
        let widths = truncation_widths(&TreeAutomaton::b_tree(2), 5);
        assert_eq!(widths, [1, 2, 3, 4, 5, 6]);
        let widths = truncation_widths(&TreeAutomaton::full(&binary()), 4);
        assert_eq!(widths, [1, 2, 4, 8, 16]);
        assert_eq!(truncation_widths(&TreeAutomaton::empty(&binary()), 3), [0, 0, 0, 0]);
        // Budgeting: full binary tree blows past 40 words at depth 5.
        assert_eq!(adaptive_depth(&TreeAutomaton::full(&binary()), 10, 40), 4);
    }

    #[test]
    fn report_wire_format_is_stable() {
        let report = LawReport {
            law: "prop1.3",
            seed: 42,
            pass: true,
            witness: None,
        };
        assert_eq!(
            report.to_json(),
            "{\"law\":\"prop1.3\",\"seed\":42,\"pass\":true,\"witness\":null}"
        );
        let report = LawReport {
            law: "pref.2",
            seed: 7,
            pass: false,
            witness: Some("ab".to_string()),
        };
        assert_eq!(
            report.to_json(),
            "{\"law\":\"pref.2\",\"seed\":7,\"pass\":false,\"witness\":\"ab\"}"
        );
    }

    #[test]
    fn word_laws_hold_on_handpicked_and_random_instances() {
        let l = lang(&["eps", "a", "ba"]);
        for report in law_suite_words(&bw("a"), &bw("b"), &l, 0, None) {
            assert!(report.pass, "{} failed: {:?}", report.law, report.witness);
        }
        // Empty u and empty L exercise the degenerate corners.
        for report in law_suite_words(&bw("eps"), &bw("eps"), &lang(&[]), 0, None) {
            assert!(report.pass, "{} failed: {:?}", report.law, report.witness);
        }
        let reports = run_word_suite(0xC0FFEE, 60, None);
        assert_eq!(reports.len(), 60 * 8);
        for report in &reports {
            assert!(report.pass, "{} failed at seed {}", report.law, report.seed);
        }
    }

    #[test]
    fn mutation_hook_forces_detectable_failures() {
        let reports = run_word_suite(1, 10, Some("prop1.3"));
        let broken: Vec<_> = reports.iter().filter(|r| !r.pass).collect();
        assert!(!broken.is_empty());
        assert!(broken.iter().all(|r| r.law == "prop1.3"));
        assert!(broken.iter().all(|r| r.witness.is_some()));
        // Other laws stay untouched.
        assert!(reports
            .iter()
            .filter(|r| r.law != "prop1.3")
            .all(|r| r.pass));
    }

    #[test]
    fn tree_laws_hold_on_fixed_and_random_instances() {
        let reports = run_tree_suite(0xBEEF, 40, None);
        assert_eq!(reports.len(), 40 * 5);
        for report in &reports {
            assert!(
                report.pass,
                "{} failed at seed {}: {:?}",
                report.law, report.seed, report.witness
            );
        }
    }

    #[test]
    fn tree_law_mutations_are_detected() {
        for law in ["tree.pref-closed", "tree.root", "tree.offwords.tree"] {
            let reports = run_tree_suite(5, 8, Some(law));
            assert!(
                reports.iter().any(|r| r.law == law && !r.pass),
                "mutation of {law} went unnoticed"
            );
        }
    }

    #[test]
    fn truncation_respects_graft_and_boolean_structure() {
        let t = TreeAutomaton::b_tree(2);
        let u = bw("ab");
        let d = 5;
        // Graft: truncate(u·T, d) = Pref(u)|≤d ∪ u·truncate(T, d−|u|).
        let lhs = truncate(&attach(&u, &t), d);
        let prefixes =
            FiniteLanguage::from_words(&binary(), (0..=u.len()).map(|k| u.restrict(k)));
        let rhs = prefixes
            .restrict_len(d)
            .union(&left_concat_lang(&u, &truncate(&t, d - u.len())));
        assert_eq!(lhs, rhs);
        // Quotient: truncate(u⁻¹T, d) = u⁻¹(truncate(T, d+|u|)).
        let lhs = truncate(&t.quotient(&u), d);
        let rhs = quotient_lang(&u, &truncate(&t, d + u.len()));
        assert_eq!(lhs, rhs);
        // Union and intersection are pointwise on truncations.
        let s = TreeAutomaton::hat();
        assert_eq!(
            truncate(&t.union(&s).expect("same alphabet"), d),
            truncate(&t, d).union(&truncate(&s, d))
        );
        assert_eq!(
            truncate(&t.intersect(&s).expect("same alphabet"), d),
            truncate(&t, d).intersection(&truncate(&s, d))
        );
    }

    #[test]
    fn isolation_verdicts_on_known_trees() {
        use IsolationVerdict::*;
        assert_eq!(
            oracle_isolated(&TreeAutomaton::hat(), &bup("(a)^w"), 8),
            Isolated(1)
        );
        assert_eq!(
            oracle_isolated(&TreeAutomaton::full(&binary()), &bup("(a)^w"), 8),
            NotIsolated
        );
        assert_eq!(
            oracle_isolated(&TreeAutomaton::b_tree(2), &bup("(a)^w"), 8),
            NotIsolated
        );
        assert_eq!(
            oracle_isolated(&TreeAutomaton::b_tree(2), &bup("a(b)^w"), 8),
            Isolated(2)
        );
        assert_eq!(
            oracle_isolated(&TreeAutomaton::b_tree(2), &bup("(b)^w"), 8),
            Isolated(1)
        );
        // Non-branches are rejected outright.
        assert_eq!(
            oracle_isolated(&TreeAutomaton::b_tree(2), &bup("(ab)^w"), 8),
            NotIsolated
        );
    }

    #[test]
    fn isolation_verdicts_agree_with_the_analysis() {
        for seed in 0..120u64 {
            let t = random_tree(seed, 5, &binary());
            for w in up_words(&binary(), 2, 2) {
                let exact = is_isolated(&t, &w).ok().flatten();
                match oracle_isolated(&t, &w, 12) {
                    IsolationVerdict::Isolated(n) => {
                        assert_eq!(exact, Some(n), "seed {seed}, word {w}")
                    }
                    IsolationVerdict::NotIsolated => {
                        assert_eq!(exact, None, "seed {seed}, word {w}")
                    }
                    IsolationVerdict::Inconclusive => {}
                }
            }
        }
    }

    #[test]
    fn random_trees_are_deterministic_and_rooted() {
        let a = random_tree(99, 6, &binary());
        let b = random_tree(99, 6, &binary());
        assert!(a.equal(&b).expect("same alphabet"));
        assert_eq!(a.state_count(), b.state_count());
        for seed in 0..50 {
            assert!(!random_tree(seed, 6, &binary()).is_empty());
        }
        let tiny = random_tree(1, 1, &binary());
        assert_eq!(tiny.state_count(), 1);
    }

    #[test]
    fn classification_agrees_with_width_growth() {
        // Width arguments need the pruned tree: dead twigs can ride a cycle
        // arbitrarily long, so widths of an unpruned tree never settle. The
        // class itself is unchanged by pruning.
        for seed in 0..200u64 {
            let t = random_tree(seed, 6, &binary());
            let p = crate::analysis::prune(&t);
            let n = p.state_count();
            let widths = truncation_widths(&p, 2 * n + 4);
            match classify_branches(&t) {
                Cardinality::Finite(f) => {
                    // In a pruned tree every divergence sits on an acyclic
                    // state, and a walk meets each of those at most once, so
                    // the level widths settle at the branch count within n
                    // letters.
                    for k in n..=2 * n + 4 {
                        assert_eq!(widths[k], f, "seed {seed} level {k}");
                    }
                    assert!(continuum_witness(&t).is_none(), "seed {seed}");
                }
                Cardinality::Aleph0 => {
                    // A live exit off a cycle splits the cone once per lap,
                    // so any n+1 consecutive levels must widen.
                    assert!(widths[2 * n + 4] > widths[n], "seed {seed}");
                    assert!(continuum_witness(&t).is_none(), "seed {seed}");
                }
                Cardinality::Continuum => {
                    let witness = continuum_witness(&t).expect("witness exists");
                    assert_ne!(witness.left, witness.right);
                    // The witness state really is where the access word leads.
                    assert_eq!(t.run(&witness.access), Some(witness.state));
                }
            }
        }
    }

    #[test]
    fn up_word_enumeration_is_canonical_and_complete() {
        let words = up_words(&binary(), 1, 1);
        let shown: Vec<String> = words.iter().map(|w| w.to_string()).collect();
        assert_eq!(shown.len(), 4);
        for expect in ["(a)^w", "(b)^w", "a(b)^w", "b(a)^w"] {
            assert!(shown.contains(&expect.to_string()), "missing {expect}");
        }
        // No duplicates denote the same stream.
        let canon: BTreeSet<String> = shown.iter().cloned().collect();
        assert_eq!(canon.len(), words.len());
    }

    #[test]
    fn plugged_truncations_flow_through_the_language_type() {
        let g = crate::plugged::growing_tree();
        let lang = truncate_plugged(&g, 3);
        assert!(lang.contains(&bw("aaa")));
        assert!(lang.contains(&bw("abb")));
        assert!(!lang.contains(&bw("abab")));
        assert!(lang.is_prefix_closed());
        let fam = crate::plugged::ladder_family();
        let parts = truncate_family(&fam, 2, 3);
        assert_eq!(parts.len(), 3);
        for (_, part) in &parts {
            assert!(part.is_prefix_closed());
        }
    }
}
