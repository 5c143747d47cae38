//! Schematic trees with infinitely many plugged components.
//!
//! A finite automaton can only present a tree whose derivative sequence
//! stabilizes after finitely many steps. The two shapes here go further while
//! staying completely concrete:
//!
//! * [`SpinePlugged`]: one ultimately periodic branch (the *spine*) with a
//!   component tree hanging off each supported position through a dedicated
//!   plug symbol. With components of unbounded rank the whole tree reaches
//!   rank ω + 1.
//! * [`RootFamily`]: a root with countably many children, the k-th carrying a
//!   component tree. With components of rank k the tree has rank ω exactly.
//!
//! Both shapes keep their component family as a schema (a closure over the
//! index) plus a declared rank pattern. Rank computation does not trust the
//! pattern: it probes a prefix of the family against the exact automaton
//! analysis and refuses to answer on a mismatch.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use thiserror::Error;

use crate::analysis;
use crate::ordinal::{ord_max, sup_affine, Ordinal};
use crate::tree::{attach, TreeAutomaton};
use crate::words::{Alphabet, FiniteWord, Sym, SymbolPermutation, UPWord};

/// Errors from schematic trees.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PluggedError {
    #[error("component {position} has rank {found}, but the declared pattern expects {expected}")]
    Probe { position: usize, expected: u64, found: String },
    #[error("component {position} is not thin, so the declared rank pattern cannot hold")]
    NotThin { position: usize },
    #[error("a tree with infinitely many plugs has no finite automaton form")]
    NotRegular,
    #[error("plug symbol collides with the spine letter at position {position}")]
    PlugCollision { position: usize },
}

/// Declared component ranks: an explicit finite prefix of values, then the
/// affine tail `slope·k + intercept` (in the absolute index `k`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankPattern {
    prefix: Vec<u64>,
    slope: u64,
    intercept: u64,
}

impl RankPattern {
    pub fn affine(slope: u64, intercept: u64) -> Self {
        RankPattern { prefix: Vec::new(), slope, intercept }
    }

    pub fn explicit(prefix: Vec<u64>, slope: u64, intercept: u64) -> Self {
        RankPattern { prefix, slope, intercept }
    }

    pub fn slope(&self) -> u64 {
        self.slope
    }

    pub fn intercept(&self) -> u64 {
        self.intercept
    }

    /// The declared rank of component `k`.
    pub fn value(&self, k: usize) -> u64 {
        self.prefix
            .get(k)
            .copied()
            .unwrap_or_else(|| self.slope.saturating_mul(k as u64).saturating_add(self.intercept))
    }
}

/// A component family: one tree per index.
pub enum ComponentSchema {
    Constant(Arc<TreeAutomaton>),
    Indexed(Arc<dyn Fn(usize) -> TreeAutomaton + Send + Sync>),
}

impl std::fmt::Debug for ComponentSchema {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ComponentSchema::Constant(t) => write!(f, "Constant({} states)", t.state_count()),
            ComponentSchema::Indexed(_) => f.write_str("Indexed(..)"),
        }
    }
}

/// Which spine positions carry a plug.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Support {
    All,
    /// Positions `0..=bound` (inclusive).
    UpTo(usize),
}

impl Support {
    fn contains(self, k: usize) -> bool {
        match self {
            Support::All => true,
            Support::UpTo(bound) => k <= bound,
        }
    }
}

/// An ultimately periodic spine with a component tree plugged at each
/// supported position `k` through the plug symbol: the word set
/// `Pref(spine) ∪ ⋃_k spine_{|k}·plug·C_k`.
pub struct SpinePlugged {
    alphabet: Arc<Alphabet>,
    spine: UPWord,
    plug: Sym,
    family: ComponentSchema,
    pattern: RankPattern,
    support: Support,
    cache: Mutex<HashMap<usize, Arc<TreeAutomaton>>>,
}

impl std::fmt::Debug for SpinePlugged {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SpinePlugged")
            .field("spine", &self.spine.to_string())
            .field("plug", &self.alphabet.symbol(self.plug))
            .field("family", &self.family)
            .field("pattern", &self.pattern)
            .field("support", &self.support)
            .finish()
    }
}

impl SpinePlugged {
    pub fn new(
        spine: UPWord,
        plug: Sym,
        family: ComponentSchema,
        pattern: RankPattern,
        support: Support,
    ) -> Result<Arc<SpinePlugged>, PluggedError> {
        let alphabet = spine.head().alphabet().clone();
        // The plug must branch off the spine at every supported position;
        // positions beyond head + period repeat earlier letters.
        let distinct = spine.head().len() + spine.period().len();
        let check_to = match support {
            Support::All => distinct,
            Support::UpTo(bound) => distinct.min(bound + 1),
        };
        for k in 0..check_to {
            if spine.letter_at(k) == plug {
                return Err(PluggedError::PlugCollision { position: k });
            }
        }
        Ok(Arc::new(SpinePlugged {
            alphabet,
            spine,
            plug,
            family,
            pattern,
            support,
            cache: Mutex::new(HashMap::new()),
        }))
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn spine(&self) -> &UPWord {
        &self.spine
    }

    pub fn plug_symbol(&self) -> Sym {
        self.plug
    }

    pub fn support(&self) -> Support {
        self.support
    }

    pub fn pattern(&self) -> &RankPattern {
        &self.pattern
    }

    /// The component plugged at position `k` (memoized for indexed families).
    pub fn component(&self, k: usize) -> Arc<TreeAutomaton> {
        match &self.family {
            ComponentSchema::Constant(t) => t.clone(),
            ComponentSchema::Indexed(build) => {
                let mut cache = self.cache.lock().expect("component cache poisoned");
                cache.entry(k).or_insert_with(|| Arc::new(build(k))).clone()
            }
        }
    }

    /// Longest common prefix of `u` with the spine.
    fn split(&self, u: &FiniteWord) -> usize {
        let mut j = 0;
        while j < u.len() && u.letter(j) == self.spine.letter_at(j) {
            j += 1;
        }
        j
    }

    /// Word membership.
    pub fn member(&self, u: &FiniteWord) -> bool {
        let j = self.split(u);
        if j == u.len() {
            return true; // a spine prefix
        }
        if u.letter(j) != self.plug || !self.support.contains(j) {
            return false;
        }
        let rest = u.corestrict(j + 1);
        self.component(j).member(&rest)
    }

    /// Branch membership: the spine itself, or a plugged component's branch.
    pub fn branch_member(&self, w: &UPWord) -> bool {
        if crate::words::upword_equal(w, &self.spine) {
            return true;
        }
        // Distinct ultimately periodic words disagree within the common
        // period horizon.
        let bound = w.head().len().max(self.spine.head().len())
            + lcm(w.period().len(), self.spine.period().len());
        let Some(j) = (0..bound).find(|&k| w.letter_at(k) != self.spine.letter_at(k)) else {
            return true;
        };
        if w.letter_at(j) != self.plug || !self.support.contains(j) {
            return false;
        }
        self.component(j).branch_member(&w.corestrict(j + 1))
    }

    /// All words of length at most `depth`, in shortlex order.
    pub fn truncate(&self, depth: usize) -> Vec<FiniteWord> {
        let mut out = Vec::new();
        for n in 0..=depth {
            out.push(self.spine.restrict(n));
        }
        for k in 0..depth {
            if !self.support.contains(k) {
                continue;
            }
            let stem = self.spine.restrict(k).push(self.plug);
            for word in self.component(k).words_to_depth(depth - k - 1) {
                out.push(stem.concat(&word).expect("same alphabet"));
            }
        }
        out.sort();
        out
    }

    /// The finite-support form as an ordinary automaton; infinite support has
    /// none.
    pub fn to_regular(&self) -> Result<TreeAutomaton, PluggedError> {
        let Support::UpTo(bound) = self.support else {
            return Err(PluggedError::NotRegular);
        };
        let mut t = TreeAutomaton::pref_chain(&self.spine);
        for k in 0..=bound {
            let component = self.component(k);
            if component.is_empty() {
                continue;
            }
            let stem = self.spine.restrict(k).push(self.plug);
            t = t.union(&attach(&stem, &component)).expect("same alphabet");
        }
        Ok(t)
    }

    /// Checks the declared pattern against the exact analysis on components
    /// `0..probe` (clipped to the support).
    pub fn verify_pattern(&self, probe: usize) -> Result<(), PluggedError> {
        let limit = match self.support {
            Support::All => probe,
            Support::UpTo(bound) => probe.min(bound + 1),
        };
        for k in 0..limit {
            check_component(&self.component(k), k, self.pattern.value(k))?;
        }
        Ok(())
    }

    /// The Cantor-Bendixson rank, with the pattern verified on a probe prefix
    /// first. Every tree of this shape is thin (countably many branches), so
    /// the rank says when the derivative sequence empties out:
    ///
    /// * finite support: plugs die at their own ranks and the lone spine
    ///   branch one step after the start, so the tree empties at the largest
    ///   of those (never before stage 1);
    /// * infinite support: the plug tail dies together at `c` (ω when the
    ///   pattern grows, its constant value otherwise) and the spine — a limit
    ///   of plug branches — one step later; a plug declared above `c` keeps
    ///   the tree alive until exactly its own rank.
    pub fn rank(&self, probe: usize) -> Result<Ordinal, PluggedError> {
        self.verify_pattern(probe)?;
        match self.support {
            Support::UpTo(bound) => {
                let mut best = 1u64;
                for k in 0..=bound {
                    best = best.max(self.pattern.value(k));
                }
                Ok(Ordinal::finite(best))
            }
            Support::All => {
                // The tail settles at c (ω when growing); the spine dies one
                // stage after the cofinal components, and an explicit
                // component declared above c keeps the tree alive until
                // exactly its own rank.
                let tail = if self.pattern.slope >= 1 {
                    Ordinal::omega()
                } else {
                    Ordinal::finite(self.pattern.intercept)
                };
                let mut rank = tail.succ();
                for &value in &self.pattern.prefix {
                    rank = ord_max(&rank, &Ordinal::finite(value));
                }
                Ok(rank)
            }
        }
    }
}

/// A root with countably many children, the `k`-th carrying component `C_k`:
/// the tree `{ε} ∪ ⋃_k k⌢C_k` over the mixed alphabet ω ⊎ Σ. Words are
/// addressed as (child index, component word).
pub struct RootFamily {
    alphabet: Arc<Alphabet>,
    family: ComponentSchema,
    pattern: RankPattern,
    cache: Mutex<HashMap<usize, Arc<TreeAutomaton>>>,
}

impl std::fmt::Debug for RootFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RootFamily")
            .field("family", &self.family)
            .field("pattern", &self.pattern)
            .finish()
    }
}

impl RootFamily {
    pub fn new(
        alphabet: &Arc<Alphabet>,
        family: ComponentSchema,
        pattern: RankPattern,
    ) -> Arc<RootFamily> {
        Arc::new(RootFamily {
            alphabet: alphabet.clone(),
            family,
            pattern,
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn pattern(&self) -> &RankPattern {
        &self.pattern
    }

    pub fn component(&self, k: usize) -> Arc<TreeAutomaton> {
        match &self.family {
            ComponentSchema::Constant(t) => t.clone(),
            ComponentSchema::Indexed(build) => {
                let mut cache = self.cache.lock().expect("component cache poisoned");
                cache.entry(k).or_insert_with(|| Arc::new(build(k))).clone()
            }
        }
    }

    /// Is `index⌢u` a word of the tree?
    pub fn member(&self, index: usize, u: &FiniteWord) -> bool {
        self.component(index).member(u)
    }

    /// Is `index⌢w` a branch of the tree?
    pub fn branch_member(&self, index: usize, w: &UPWord) -> bool {
        self.component(index).branch_member(w)
    }

    /// Words of length at most `depth` in the first `index_bound` components.
    pub fn truncate(&self, depth: usize, index_bound: usize) -> Vec<(usize, Vec<FiniteWord>)> {
        (0..index_bound)
            .map(|k| {
                let words =
                    if depth == 0 { Vec::new() } else { self.component(k).words_to_depth(depth - 1) };
                (k, words)
            })
            .collect()
    }

    pub fn verify_pattern(&self, probe: usize) -> Result<(), PluggedError> {
        for k in 0..probe {
            check_component(&self.component(k), k, self.pattern.value(k))?;
        }
        Ok(())
    }

    /// The Cantor-Bendixson rank: the components die componentwise, so the
    /// tree empties at the supremum of the declared ranks — ω for a growing
    /// pattern, the largest declared value otherwise.
    pub fn rank(&self, probe: usize) -> Result<Ordinal, PluggedError> {
        self.verify_pattern(probe)?;
        if self.pattern.slope >= 1 {
            Ok(sup_affine(self.pattern.slope, self.pattern.intercept))
        } else {
            let mut best = self.pattern.intercept;
            for &value in &self.pattern.prefix {
                best = best.max(value);
            }
            Ok(Ordinal::finite(best))
        }
    }
}

fn check_component(c: &TreeAutomaton, position: usize, expected: u64) -> Result<(), PluggedError> {
    let (ord, thin) = analysis::rank(c);
    if !thin {
        return Err(PluggedError::NotThin { position });
    }
    if ord != Ordinal::finite(expected) {
        return Err(PluggedError::Probe { position, expected, found: ord.to_string() });
    }
    Ok(())
}

fn lcm(x: usize, y: usize) -> usize {
    fn gcd(mut a: usize, mut b: usize) -> usize {
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a
    }
    x / gcd(x, y) * y
}

/// The growing tree: spine `(a)^ω` with the mirrored ladder `B⊥_{k+1}`
/// plugged through `b` at every position `k`. Rank ω + 1.
pub fn growing_tree() -> Arc<SpinePlugged> {
    let alphabet = Alphabet::binary();
    let spine = UPWord::parse(&alphabet, "(a)^w").expect("valid spine");
    let reversal = SymbolPermutation::reversal(&alphabet);
    SpinePlugged::new(
        spine,
        Sym(1),
        ComponentSchema::Indexed(Arc::new(move |k| TreeAutomaton::b_tree(k + 1).mirror(&reversal))),
        RankPattern::affine(1, 1),
        Support::All,
    )
    .expect("plug b never collides with the a-spine")
}

/// The growing tree cut to plugs at positions `0..=bound`, as an ordinary
/// automaton; its rank is `bound + 1`.
pub fn growing_tree_truncated(bound: usize) -> TreeAutomaton {
    growing_tree_support(Support::UpTo(bound))
        .to_regular()
        .expect("finite support is regular")
}

/// The growing tree with an arbitrary support (library plumbing for tests).
pub fn growing_tree_support(support: Support) -> Arc<SpinePlugged> {
    let alphabet = Alphabet::binary();
    let spine = UPWord::parse(&alphabet, "(a)^w").expect("valid spine");
    let reversal = SymbolPermutation::reversal(&alphabet);
    SpinePlugged::new(
        spine,
        Sym(1),
        ComponentSchema::Indexed(Arc::new(move |k| TreeAutomaton::b_tree(k + 1).mirror(&reversal))),
        RankPattern::affine(1, 1),
        support,
    )
    .expect("plug b never collides with the a-spine")
}

/// The comb `a^k b^m` as a plugged spine: constant chain components of rank
/// one. Cross-checks the schematic rank against the automaton analysis.
pub fn comb_plugged() -> Arc<SpinePlugged> {
    let alphabet = Alphabet::binary();
    let spine = UPWord::parse(&alphabet, "(a)^w").expect("valid spine");
    let chain = UPWord::parse(&alphabet, "(b)^w").expect("valid chain");
    SpinePlugged::new(
        spine,
        Sym(1),
        ComponentSchema::Constant(Arc::new(TreeAutomaton::pref_chain(&chain))),
        RankPattern::affine(0, 1),
        Support::All,
    )
    .expect("plug b never collides with the a-spine")
}

/// The rank-ω example: a root family whose `k`-th child carries the ladder
/// `B_k` of rank `k`.
pub fn ladder_family() -> Arc<RootFamily> {
    let alphabet = Alphabet::binary();
    RootFamily::new(
        &alphabet,
        ComponentSchema::Indexed(Arc::new(TreeAutomaton::b_tree)),
        RankPattern::affine(1, 0),
    )
}
