//! Trees as deterministic prefix automata.
//!
//! A tree over a finite alphabet is a prefix-closed set of finite words. We
//! represent the regular ones by a deterministic automaton with *partial*
//! transitions and no acceptance marking: the language is simply the set of
//! words the automaton can read from the root. Prefix closure is then true by
//! construction, and the empty tree is the automaton with no root at all.
//!
//! Every constructor trims its result (all states reachable, numbered in
//! breadth-first symbol order from the root), so two structurally equal values
//! print identically. Trimming is *not* minimization — states are only merged
//! by the explicit [`TreeAutomaton::minimize`], which runs ahead of
//! state-count-sensitive outputs such as canonical export.

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::words::{
    same_alphabet, Alphabet, FiniteWord, Sym, SymbolPermutation, UPWord, WordError,
};

/// Errors from tree-level operations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("the empty tree has no root decomposition")]
    EmptyTree,
    #[error("malformed automaton document: {0}")]
    Document(String),
}

/// A regular tree: deterministic partial automaton over `alphabet`, root
/// state optional (absent ⇔ empty tree), all states reachable.
#[derive(Clone, Debug)]
pub struct TreeAutomaton {
    alphabet: Arc<Alphabet>,
    root: Option<usize>,
    /// `delta[q][a]` is the `a`-successor of state `q`, if any.
    delta: Vec<Vec<Option<usize>>>,
}

impl TreeAutomaton {
    // ----- builders ------------------------------------------------------

    /// The empty tree (no words at all, not even `eps`).
    pub fn empty(alphabet: &Arc<Alphabet>) -> TreeAutomaton {
        TreeAutomaton { alphabet: alphabet.clone(), root: None, delta: Vec::new() }
    }

    /// The one-point tree `{eps}`.
    pub fn epsilon(alphabet: &Arc<Alphabet>) -> TreeAutomaton {
        TreeAutomaton {
            alphabet: alphabet.clone(),
            root: Some(0),
            delta: vec![vec![None; alphabet.size()]],
        }
    }

    /// The full tree of every finite word.
    pub fn full(alphabet: &Arc<Alphabet>) -> TreeAutomaton {
        TreeAutomaton {
            alphabet: alphabet.clone(),
            root: Some(0),
            delta: vec![vec![Some(0); alphabet.size()]],
        }
    }

    /// Prefixes of the single ultimately periodic branch `w`: a chain for the
    /// head followed by a cycle for the period (`|head| + |period|` states).
    pub fn pref_chain(w: &UPWord) -> TreeAutomaton {
        let alphabet = w.alphabet().clone();
        let h = w.head().len();
        let p = w.period().len();
        let mut delta = vec![vec![None; alphabet.size()]; h + p];
        for i in 0..h + p {
            let target = if i + 1 < h + p { i + 1 } else { h };
            delta[i][w.letter_at(i).index()] = Some(target);
        }
        TreeAutomaton { alphabet, root: Some(0), delta }
    }

    /// Prefixes of a single finite word: a dead-end chain of `|u| + 1` states.
    pub fn pref_word(u: &FiniteWord) -> TreeAutomaton {
        let alphabet = u.alphabet().clone();
        let mut delta = vec![vec![None; alphabet.size()]; u.len() + 1];
        for (i, &s) in u.letters().iter().enumerate() {
            delta[i][s.index()] = Some(i + 1);
        }
        TreeAutomaton { alphabet, root: Some(0), delta }
    }

    /// The hat: two straight branches `a^ω` and `b^ω` out of a common root.
    pub fn hat() -> TreeAutomaton {
        let alpha = Alphabet::binary();
        let a = UPWord::parse(&alpha, "(a)^w").expect("literal");
        let b = UPWord::parse(&alpha, "(b)^w").expect("literal");
        let family = TreeFamily::new(
            &alpha,
            vec![TreeAutomaton::pref_chain(&a), TreeAutomaton::pref_chain(&b)],
        );
        root_construct(&family)
    }

    /// The alternating-block ladder over `{a, b}`: words consisting of at
    /// most `n` alternating blocks `a^k b^k' a^k'' …`. `b_tree(0)` is empty;
    /// otherwise one self-looping state per block, advancing on the opposite
    /// letter.
    pub fn b_tree(n: usize) -> TreeAutomaton {
        let alpha = Alphabet::binary();
        if n == 0 {
            return TreeAutomaton::empty(&alpha);
        }
        let mut delta = vec![vec![None; 2]; n];
        for i in 0..n {
            let block_letter = i % 2;
            delta[i][block_letter] = Some(i);
            if i + 1 < n {
                delta[i][1 - block_letter] = Some(i + 1);
            }
        }
        TreeAutomaton { alphabet: alpha, root: Some(0), delta }
    }

    /// The comb: spine `a^ω` with a `b^ω` tooth hanging off every spine node.
    pub fn comb() -> TreeAutomaton {
        let alpha = Alphabet::binary();
        TreeAutomaton {
            alphabet: alpha,
            root: Some(0),
            delta: vec![vec![Some(0), Some(1)], vec![None, Some(1)]],
        }
    }

    /// Builds from explicit parts, then trims. Internal constructor used by
    /// the product/graft operations and the document importer.
    fn from_parts(
        alphabet: Arc<Alphabet>,
        root: Option<usize>,
        delta: Vec<Vec<Option<usize>>>,
    ) -> TreeAutomaton {
        TreeAutomaton { alphabet, root, delta }.trim()
    }

    // ----- accessors ------------------------------------------------------

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.delta.len()
    }

    pub fn root(&self) -> Option<usize> {
        self.root
    }

    pub fn is_empty(&self) -> bool {
        self.root.is_none()
    }

    pub fn transition(&self, q: usize, a: Sym) -> Option<usize> {
        self.delta[q][a.index()]
    }

    /// Successor row of a state, indexed by symbol.
    pub fn row(&self, q: usize) -> &[Option<usize>] {
        &self.delta[q]
    }

    // ----- word-level operations -----------------------------------------

    /// The state reached by reading `u` from the root.
    pub fn run(&self, u: &FiniteWord) -> Option<usize> {
        let mut q = self.root?;
        for &s in u.letters() {
            q = self.delta[q][s.index()]?;
        }
        Some(q)
    }

    /// Is `u` a word of the tree?
    pub fn member(&self, u: &FiniteWord) -> bool {
        self.run(u).is_some()
    }

    /// The left quotient `u⁻¹T`, i.e. the subtree re-rooted at `run(u)`.
    pub fn quotient(&self, u: &FiniteWord) -> TreeAutomaton {
        match self.run(u) {
            None => TreeAutomaton::empty(&self.alphabet),
            Some(q) => {
                TreeAutomaton { alphabet: self.alphabet.clone(), root: Some(q), delta: self.delta.clone() }
                    .trim()
            }
        }
    }

    /// Is the ultimately periodic word `w` a branch, i.e. is every finite
    /// prefix of `w` readable? Decided by reading the head and then pumping
    /// the period until a period-boundary state repeats.
    pub fn branch_member(&self, w: &UPWord) -> bool {
        let Some(mut q) = self.run(w.head()) else { return false };
        let mut seen = vec![false; self.delta.len()];
        loop {
            if seen[q] {
                return true;
            }
            seen[q] = true;
            for &s in w.period().letters() {
                match self.delta[q][s.index()] {
                    Some(next) => q = next,
                    None => return false,
                }
            }
        }
    }

    /// Every word of the tree of length at most `depth`, in shortlex order.
    pub fn words_to_depth(&self, depth: usize) -> Vec<FiniteWord> {
        let mut out = Vec::new();
        let Some(root) = self.root else { return out };
        let mut layer = vec![(FiniteWord::empty(&self.alphabet), root)];
        out.push(layer[0].0.clone());
        for _ in 0..depth {
            let mut next = Vec::new();
            for (word, q) in &layer {
                for a in self.alphabet.syms() {
                    if let Some(target) = self.delta[*q][a.index()] {
                        let extended = word.push(a);
                        out.push(extended.clone());
                        next.push((extended, target));
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            layer = next;
        }
        out
    }

    // ----- structural operations -----------------------------------------

    /// Relabels every transition through a symbol permutation: the tree of
    /// letterwise-mirrored words.
    pub fn mirror(&self, p: &SymbolPermutation) -> TreeAutomaton {
        debug_assert!(same_alphabet(&self.alphabet, p.alphabet()).is_ok());
        let mut delta = vec![vec![None; self.alphabet.size()]; self.delta.len()];
        for (q, row) in self.delta.iter().enumerate() {
            for (a, &target) in row.iter().enumerate() {
                delta[q][p.apply(Sym(a as u8)).index()] = target;
            }
        }
        TreeAutomaton::from_parts(self.alphabet.clone(), self.root, delta)
    }

    /// Intersection of word sets (product over pairs where both sides step).
    pub fn intersect(&self, other: &TreeAutomaton) -> Result<TreeAutomaton, TreeError> {
        same_alphabet(&self.alphabet, &other.alphabet)?;
        let (Some(r1), Some(r2)) = (self.root, other.root) else {
            return Ok(TreeAutomaton::empty(&self.alphabet));
        };
        let sigma = self.alphabet.size();
        let mut index: HashMap<(usize, usize), usize> = HashMap::new();
        let mut delta: Vec<Vec<Option<usize>>> = Vec::new();
        let mut queue = VecDeque::new();
        index.insert((r1, r2), 0);
        delta.push(vec![None; sigma]);
        queue.push_back((r1, r2));
        while let Some((q1, q2)) = queue.pop_front() {
            let here = index[&(q1, q2)];
            for a in 0..sigma {
                if let (Some(t1), Some(t2)) = (self.delta[q1][a], other.delta[q2][a]) {
                    let next = *index.entry((t1, t2)).or_insert_with(|| {
                        delta.push(vec![None; sigma]);
                        queue.push_back((t1, t2));
                        delta.len() - 1
                    });
                    delta[here][a] = Some(next);
                }
            }
        }
        Ok(TreeAutomaton::from_parts(self.alphabet.clone(), Some(0), delta))
    }

    /// Union of word sets (product with a sink for the side that has already
    /// fallen off).
    pub fn union(&self, other: &TreeAutomaton) -> Result<TreeAutomaton, TreeError> {
        same_alphabet(&self.alphabet, &other.alphabet)?;
        match (self.root, other.root) {
            (None, _) => return Ok(other.clone().trim()),
            (_, None) => return Ok(self.clone().trim()),
            (Some(_), Some(_)) => {}
        }
        type Pair = (Option<usize>, Option<usize>);
        let sigma = self.alphabet.size();
        let start: Pair = (self.root, other.root);
        let mut index: HashMap<Pair, usize> = HashMap::new();
        let mut delta: Vec<Vec<Option<usize>>> = Vec::new();
        let mut queue = VecDeque::new();
        index.insert(start, 0);
        delta.push(vec![None; sigma]);
        queue.push_back(start);
        while let Some((q1, q2)) = queue.pop_front() {
            let here = index[&(q1, q2)];
            for a in 0..sigma {
                let t1 = q1.and_then(|q| self.delta[q][a]);
                let t2 = q2.and_then(|q| other.delta[q][a]);
                if t1.is_none() && t2.is_none() {
                    continue;
                }
                let pair = (t1, t2);
                let next = *index.entry(pair).or_insert_with(|| {
                    delta.push(vec![None; sigma]);
                    queue.push_back(pair);
                    delta.len() - 1
                });
                delta[here][a] = Some(next);
            }
        }
        Ok(TreeAutomaton::from_parts(self.alphabet.clone(), Some(0), delta))
    }

    /// Language equality.
    pub fn equal(&self, other: &TreeAutomaton) -> Result<bool, TreeError> {
        Ok(self.difference_witness(other)?.is_none())
    }

    /// A shortest word in exactly one of the two trees, if the trees differ.
    pub fn difference_witness(
        &self,
        other: &TreeAutomaton,
    ) -> Result<Option<FiniteWord>, TreeError> {
        same_alphabet(&self.alphabet, &other.alphabet)?;
        let eps = FiniteWord::empty(&self.alphabet);
        let (r1, r2) = match (self.root, other.root) {
            (None, None) => return Ok(None),
            (Some(_), None) | (None, Some(_)) => return Ok(Some(eps)),
            (Some(r1), Some(r2)) => (r1, r2),
        };
        // BFS over the synchronized product; the first time exactly one side
        // can step, the path so far plus that letter is a shortest witness.
        let sigma = self.alphabet.size();
        let mut parent: HashMap<(usize, usize), ((usize, usize), Sym)> = HashMap::new();
        let mut seen: HashMap<(usize, usize), ()> = HashMap::new();
        let mut queue = VecDeque::new();
        seen.insert((r1, r2), ());
        queue.push_back((r1, r2));
        while let Some((q1, q2)) = queue.pop_front() {
            for a in 0..sigma {
                let sym = Sym(a as u8);
                match (self.delta[q1][a], other.delta[q2][a]) {
                    (Some(t1), Some(t2)) => {
                        if seen.insert((t1, t2), ()).is_none() {
                            parent.insert((t1, t2), ((q1, q2), sym));
                            queue.push_back((t1, t2));
                        }
                    }
                    (None, None) => {}
                    _ => {
                        // Reconstruct the path to (q1, q2), then append `a`.
                        let mut letters = vec![sym];
                        let mut here = (q1, q2);
                        while let Some(&(prev, s)) = parent.get(&here) {
                            letters.push(s);
                            here = prev;
                        }
                        letters.reverse();
                        return Ok(Some(FiniteWord::from_syms(&self.alphabet, letters)));
                    }
                }
            }
        }
        Ok(None)
    }

    // ----- normal forms ---------------------------------------------------

    /// Drops unreachable states and renumbers the rest in breadth-first
    /// symbol order from the root (so the root is always state 0).
    fn trim(self) -> TreeAutomaton {
        let Some(root) = self.root else {
            return TreeAutomaton::empty(&self.alphabet);
        };
        let sigma = self.alphabet.size();
        let mut order: Vec<usize> = Vec::new();
        let mut renumber: HashMap<usize, usize> = HashMap::new();
        let mut queue = VecDeque::new();
        renumber.insert(root, 0);
        order.push(root);
        queue.push_back(root);
        while let Some(q) = queue.pop_front() {
            for a in 0..sigma {
                if let Some(t) = self.delta[q][a] {
                    if !renumber.contains_key(&t) {
                        renumber.insert(t, order.len());
                        order.push(t);
                        queue.push_back(t);
                    }
                }
            }
        }
        let delta = order
            .iter()
            .map(|&q| {
                (0..sigma)
                    .map(|a| self.delta[q][a].map(|t| renumber[&t]))
                    .collect()
            })
            .collect();
        TreeAutomaton { alphabet: self.alphabet, root: Some(0), delta }
    }

    /// Merges language-equivalent states (partition refinement on the
    /// partial-transition signature). The language is unchanged; the state
    /// count becomes minimal for the readable-word semantics.
    pub fn minimize(&self) -> TreeAutomaton {
        if self.root.is_none() {
            return self.clone();
        }
        let n = self.delta.len();
        let sigma = self.alphabet.size();
        // Start from the definedness signature, refine by target blocks.
        let mut block: Vec<usize> = self
            .delta
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .fold(0usize, |acc, (a, t)| acc | ((t.is_some() as usize) << a))
            })
            .collect();
        loop {
            let mut table: HashMap<(usize, Vec<Option<usize>>), usize> = HashMap::new();
            let mut next = vec![0usize; n];
            for q in 0..n {
                let sig: Vec<Option<usize>> =
                    (0..sigma).map(|a| self.delta[q][a].map(|t| block[t])).collect();
                let fresh = table.len();
                next[q] = *table.entry((block[q], sig)).or_insert(fresh);
            }
            if next == block {
                break;
            }
            block = next;
        }
        let classes = block.iter().max().map_or(0, |m| m + 1);
        let mut delta = vec![vec![None; sigma]; classes];
        for q in 0..n {
            for a in 0..sigma {
                delta[block[q]][a] = self.delta[q][a].map(|t| block[t]);
            }
        }
        TreeAutomaton::from_parts(self.alphabet.clone(), self.root.map(|r| block[r]), delta)
    }

    /// Minimized and trimmed: the canonical presentation used by export.
    pub fn canonical(&self) -> TreeAutomaton {
        self.minimize()
    }

    // ----- interchange format ---------------------------------------------

    pub fn to_document(&self) -> AutomatonDoc {
        let mut edges = Vec::new();
        for (q, row) in self.delta.iter().enumerate() {
            for (a, &target) in row.iter().enumerate() {
                if let Some(t) = target {
                    edges.push((q, self.alphabet.symbol(Sym(a as u8)).to_string(), t));
                }
            }
        }
        // States are already in breadth-first order, so (src, symbol order)
        // is exactly the iteration order above.
        AutomatonDoc {
            alphabet: self.alphabet.tokens().to_vec(),
            states: self.delta.len(),
            root: self.root,
            edges,
        }
    }

    pub fn from_document(doc: &AutomatonDoc) -> Result<TreeAutomaton, TreeError> {
        let alphabet = Alphabet::new(doc.alphabet.clone())?;
        let mut delta = vec![vec![None; alphabet.size()]; doc.states];
        for (src, sym, dst) in &doc.edges {
            let s = alphabet
                .lookup(sym)
                .ok_or_else(|| TreeError::Document(format!("unknown edge symbol `{sym}`")))?;
            if *src >= doc.states || *dst >= doc.states {
                return Err(TreeError::Document(format!(
                    "edge ({src}, {sym}, {dst}) references a state out of range"
                )));
            }
            if delta[*src][s.index()].is_some() {
                return Err(TreeError::Document(format!(
                    "duplicate transition from state {src} on `{sym}`"
                )));
            }
            delta[*src][s.index()] = Some(*dst);
        }
        match doc.root {
            Some(r) if r >= doc.states => {
                Err(TreeError::Document(format!("root {r} out of range")))
            }
            root => Ok(TreeAutomaton::from_parts(alphabet, root, delta)),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_document()).expect("document serializes")
    }

    pub fn from_json(text: &str) -> Result<TreeAutomaton, TreeError> {
        let doc: AutomatonDoc =
            serde_json::from_str(text).map_err(|e| TreeError::Document(e.to_string()))?;
        TreeAutomaton::from_document(&doc)
    }
}

/// Serialized automaton shape: `root` is omitted for the empty tree, and
/// edges are listed in (source, symbol order).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AutomatonDoc {
    pub alphabet: Vec<String>,
    pub states: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub root: Option<usize>,
    pub edges: Vec<(usize, String, usize)>,
}

/// One tree per alphabet symbol (components may be empty).
#[derive(Clone, Debug)]
pub struct TreeFamily {
    alphabet: Arc<Alphabet>,
    components: Vec<TreeAutomaton>,
}

impl TreeFamily {
    pub fn new(alphabet: &Arc<Alphabet>, components: Vec<TreeAutomaton>) -> TreeFamily {
        assert_eq!(components.len(), alphabet.size(), "one component per symbol");
        TreeFamily { alphabet: alphabet.clone(), components }
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn component(&self, a: Sym) -> &TreeAutomaton {
        &self.components[a.index()]
    }

    pub fn components(&self) -> &[TreeAutomaton] {
        &self.components
    }
}

/// Grafts `T` under the word `u`: the tree `Pref(u) ∪ u·T`. Every tree with a
/// root decomposes this way one letter at a time.
pub fn attach(u: &FiniteWord, t: &TreeAutomaton) -> TreeAutomaton {
    if u.is_empty() {
        return t.clone();
    }
    if t.is_empty() {
        return TreeAutomaton::pref_word(u);
    }
    let alphabet = u.alphabet().clone();
    let sigma = alphabet.size();
    let offset = u.len();
    let mut delta = vec![vec![None; sigma]; offset + t.state_count()];
    for (i, &s) in u.letters().iter().enumerate() {
        let target = if i + 1 < offset {
            i + 1
        } else {
            offset + t.root().expect("t is non-empty")
        };
        delta[i][s.index()] = Some(target);
    }
    for q in 0..t.state_count() {
        for a in 0..sigma {
            delta[offset + q][a] = t.row(q)[a].map(|x| offset + x);
        }
    }
    TreeAutomaton::from_parts(alphabet, Some(0), delta)
}

/// Assembles `{eps} ∪ ⊎_a a·T_a` from a family of subtrees.
pub fn root_construct(family: &TreeFamily) -> TreeAutomaton {
    let alphabet = family.alphabet().clone();
    let sigma = alphabet.size();
    let mut delta: Vec<Vec<Option<usize>>> = vec![vec![None; sigma]];
    for a in 0..sigma {
        let comp = &family.components()[a];
        let Some(comp_root) = comp.root() else { continue };
        let offset = delta.len();
        for q in 0..comp.state_count() {
            delta.push((0..sigma).map(|b| comp.row(q)[b].map(|x| offset + x)).collect());
        }
        delta[0][a] = Some(offset + comp_root);
    }
    TreeAutomaton::from_parts(alphabet, Some(0), delta)
}

/// Splits a non-empty tree into its immediate subtrees, one per symbol:
/// the inverse of [`root_construct`] up to language equality.
pub fn root_decompose(t: &TreeAutomaton) -> Result<TreeFamily, TreeError> {
    if t.is_empty() {
        return Err(TreeError::EmptyTree);
    }
    let components = t
        .alphabet()
        .syms()
        .map(|a| {
            let u = FiniteWord::from_syms(t.alphabet(), vec![a]);
            t.quotient(&u)
        })
        .collect();
    Ok(TreeFamily::new(t.alphabet(), components))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::Word;

    fn alpha() -> Arc<Alphabet> {
        Alphabet::binary()
    }

    fn w(text: &str) -> FiniteWord {
        FiniteWord::parse(&alpha(), text).unwrap()
    }

    fn upw(text: &str) -> UPWord {
        UPWord::parse(&alpha(), text).unwrap()
    }

    fn eq(x: &TreeAutomaton, y: &TreeAutomaton) -> bool {
        x.equal(y).unwrap()
    }

    #[test]
    fn membership_basics() {
        let hat = TreeAutomaton::hat();
        for word in ["eps", "a", "b", "aa", "bbb"] {
            assert!(hat.member(&w(word)), "{word} should be in the hat");
        }
        for word in ["ab", "ba", "aab"] {
            assert!(!hat.member(&w(word)), "{word} should not be in the hat");
        }

        let b2 = TreeAutomaton::b_tree(2);
        assert!(b2.member(&w("aabb")));
        assert!(!b2.member(&w("aba")));

        assert!(!TreeAutomaton::empty(&alpha()).member(&w("eps")));
        assert!(TreeAutomaton::epsilon(&alpha()).member(&w("eps")));
        assert!(!TreeAutomaton::epsilon(&alpha()).member(&w("a")));
    }

    #[test]
    fn depth_bounded_enumeration() {
        let words: Vec<String> = TreeAutomaton::hat()
            .words_to_depth(2)
            .iter()
            .map(|u| u.to_string())
            .collect();
        assert_eq!(words, ["eps", "a", "b", "aa", "bb"]);
        assert!(TreeAutomaton::empty(&alpha()).words_to_depth(3).is_empty());
        assert_eq!(TreeAutomaton::epsilon(&alpha()).words_to_depth(3).len(), 1);
        // Shortlex and duplicate-free on a branching example.
        let words = TreeAutomaton::full(&alpha()).words_to_depth(3);
        assert_eq!(words.len(), 1 + 2 + 4 + 8);
        for pair in words.windows(2) {
            assert!(pair[0] < pair[1]);
        }
    }

    #[test]
    fn b_tree_is_the_alternating_ladder() {
        // Independent shape for B2: words a^k b^m.
        let mut delta = vec![vec![None; 2]; 2];
        delta[0][0] = Some(0);
        delta[0][1] = Some(1);
        delta[1][1] = Some(1);
        let expect = TreeAutomaton::from_parts(alpha(), Some(0), delta);
        assert!(eq(&TreeAutomaton::b_tree(2), &expect));
        assert!(TreeAutomaton::b_tree(0).is_empty());
        assert_eq!(TreeAutomaton::b_tree(5).state_count(), 5);
    }

    #[test]
    fn quotients() {
        let b2 = TreeAutomaton::b_tree(2);
        // ab⁻¹ B2 is the chain of b's.
        let chain_b = TreeAutomaton::pref_chain(&upw("(b)^w"));
        assert!(eq(&b2.quotient(&w("ab")), &chain_b));
        // eps⁻¹ T = T.
        assert!(eq(&b2.quotient(&w("eps")), &b2));
        // Quotient by a non-word is empty.
        assert!(b2.quotient(&w("ba")).is_empty());
        // Composition law: (uv)⁻¹T = v⁻¹(u⁻¹T).
        let t = TreeAutomaton::hat();
        let lhs = t.quotient(&w("aa"));
        let rhs = t.quotient(&w("a")).quotient(&w("a"));
        assert!(eq(&lhs, &rhs));
    }

    #[test]
    fn attach_and_quotient_cancel() {
        let b1 = TreeAutomaton::b_tree(1);
        let grafted = attach(&w("ab"), &b1);
        assert!(grafted.member(&w("a")));
        assert!(grafted.member(&w("ab")));
        assert!(grafted.member(&w("abaa")));
        assert!(!grafted.member(&w("b")));
        assert!(eq(&grafted.quotient(&w("ab")), &b1));
        // u · empty is just the skeleton Pref(u).
        let skeleton = attach(&w("ab"), &TreeAutomaton::empty(&alpha()));
        assert!(eq(&skeleton, &TreeAutomaton::pref_word(&w("ab"))));
        // eps · T = T.
        assert!(eq(&attach(&w("eps"), &b1), &b1));
    }

    #[test]
    fn root_construct_and_decompose() {
        let a_chain = TreeAutomaton::pref_chain(&upw("(a)^w"));
        let b_chain = TreeAutomaton::pref_chain(&upw("(b)^w"));
        let family = TreeFamily::new(&alpha(), vec![a_chain, b_chain]);
        assert!(eq(&root_construct(&family), &TreeAutomaton::hat()));

        // All-empty family builds {eps}.
        let empties = TreeFamily::new(
            &alpha(),
            vec![TreeAutomaton::empty(&alpha()), TreeAutomaton::empty(&alpha())],
        );
        assert!(eq(&root_construct(&empties), &TreeAutomaton::epsilon(&alpha())));

        // Decompose ∘ construct is the identity on languages.
        for t in [TreeAutomaton::hat(), TreeAutomaton::b_tree(3), TreeAutomaton::full(&alpha())] {
            let family = root_decompose(&t).unwrap();
            assert!(eq(&root_construct(&family), &t));
        }
        assert_eq!(
            root_decompose(&TreeAutomaton::empty(&alpha())).unwrap_err(),
            TreeError::EmptyTree
        );
    }

    #[test]
    fn mirror_swaps_letters() {
        let m = SymbolPermutation::reversal(&alpha());
        let b1 = TreeAutomaton::b_tree(1);
        let chain_b = TreeAutomaton::pref_chain(&upw("(b)^w"));
        assert!(eq(&b1.mirror(&m), &chain_b));
        // Involution.
        let b3 = TreeAutomaton::b_tree(3);
        assert!(eq(&b3.mirror(&m).mirror(&m), &b3));
        // Mirrored membership: u ∈ mirror(T) iff mirror(u) ∈ T.
        let t = b3.mirror(&m);
        for word in ["eps", "a", "b", "ba", "bba", "bab", "abab", "bbaab"] {
            let u = w(word);
            assert_eq!(t.member(&u), b3.member(&m.apply_finite(&u)), "{word}");
        }
    }

    #[test]
    fn intersection_and_union() {
        let hat = TreeAutomaton::hat();
        let b2 = TreeAutomaton::b_tree(2);
        // Hat ⊆ B2, so the intersection is the hat and the union is B2.
        assert!(eq(&hat.intersect(&b2).unwrap(), &hat));
        assert!(eq(&hat.union(&b2).unwrap(), &b2));
        // Chains assemble into the hat.
        let a_chain = TreeAutomaton::pref_chain(&upw("(a)^w"));
        let b_chain = TreeAutomaton::pref_chain(&upw("(b)^w"));
        assert!(eq(&a_chain.union(&b_chain).unwrap(), &hat));
        // Empty is the unit for union and absorbing for intersection.
        let empty = TreeAutomaton::empty(&alpha());
        assert!(eq(&empty.union(&b2).unwrap(), &b2));
        assert!(empty.intersect(&b2).unwrap().is_empty());
        // Mismatched alphabets are rejected.
        let abc = Alphabet::new(["a", "b", "c"]).unwrap();
        assert!(hat.union(&TreeAutomaton::full(&abc)).is_err());
    }

    #[test]
    fn equality_and_witnesses() {
        let hat = TreeAutomaton::hat();
        let b2 = TreeAutomaton::b_tree(2);
        let witness = hat.difference_witness(&b2).unwrap().unwrap();
        assert_eq!(witness, w("ab"));
        assert!(b2.member(&witness) && !hat.member(&witness));

        let empty = TreeAutomaton::empty(&alpha());
        let eps_tree = TreeAutomaton::epsilon(&alpha());
        assert_eq!(empty.difference_witness(&eps_tree).unwrap().unwrap(), w("eps"));
        assert!(eq(&empty, &TreeAutomaton::b_tree(0)));
    }

    #[test]
    fn branch_membership() {
        let b2 = TreeAutomaton::b_tree(2);
        assert!(b2.branch_member(&upw("a(b)^w")));
        assert!(b2.branch_member(&upw("(a)^w")));
        assert!(!b2.branch_member(&upw("ab(a)^w")));
        assert!(!b2.branch_member(&upw("(ab)^w")));
        assert!(TreeAutomaton::full(&alpha()).branch_member(&upw("ab(ba)^w")));
        assert!(!TreeAutomaton::empty(&alpha()).branch_member(&upw("(a)^w")));
        // {eps} has no branches either.
        assert!(!TreeAutomaton::epsilon(&alpha()).branch_member(&upw("(a)^w")));
    }

    #[test]
    fn minimize_preserves_language() {
        // Pad B2 with duplicate states via a union with itself and a graft.
        let b2 = TreeAutomaton::b_tree(2);
        let padded = b2.union(&attach(&w("a"), &b2.quotient(&w("a")))).unwrap();
        let min = padded.minimize();
        assert!(eq(&min, &b2));
        assert_eq!(min.state_count(), 2);
        for n in 1..6 {
            assert_eq!(TreeAutomaton::b_tree(n).minimize().state_count(), n);
        }
        assert_eq!(TreeAutomaton::hat().minimize().state_count(), 3);
    }

    #[test]
    fn json_round_trip() {
        let hat = TreeAutomaton::hat();
        let text = hat.canonical().to_json();
        assert_eq!(
            text,
            r#"{"alphabet":["a","b"],"states":3,"root":0,"edges":[[0,"a",1],[0,"b",2],[1,"a",1],[2,"b",2]]}"#
        );
        let back = TreeAutomaton::from_json(&text).unwrap();
        assert!(eq(&back, &hat));

        let empty = TreeAutomaton::empty(&alpha());
        let text = empty.to_json();
        assert_eq!(text, r#"{"alphabet":["a","b"],"states":0,"edges":[]}"#);
        assert!(TreeAutomaton::from_json(&text).unwrap().is_empty());

        // Determinism violations are rejected.
        let bad = r#"{"alphabet":["a"],"states":2,"root":0,"edges":[[0,"a",0],[0,"a",1]]}"#;
        assert!(matches!(TreeAutomaton::from_json(bad), Err(TreeError::Document(_))));
    }

    #[test]
    fn pref_chain_shape() {
        let t = TreeAutomaton::pref_chain(&upw("ab(ba)^w"));
        assert_eq!(t.state_count(), 4);
        for p in ["eps", "a", "ab", "abb", "abba", "abbab"] {
            assert!(t.member(&w(p)), "{p}");
        }
        assert!(!t.member(&w("b")));
        assert!(t.branch_member(&upw("ab(ba)^w")));
        assert!(!t.branch_member(&upw("(a)^w")));
    }

    #[test]
    fn comb_equals_its_own_ladder() {
        // The comb reads exactly the words a^k b^m, i.e. the 2-block ladder.
        assert!(eq(&TreeAutomaton::comb(), &TreeAutomaton::b_tree(2)));
    }

    #[test]
    fn concat_word_then_membership() {
        // Reading u then v is reading uv: run composes.
        let t = TreeAutomaton::full(&alpha());
        let uv = match crate::words::concat(&w("ab"), &Word::Finite(w("ba"))).unwrap() {
            Word::Finite(x) => x,
            _ => unreachable!(),
        };
        assert_eq!(t.run(&uv), t.quotient(&w("ab")).run(&w("ba")));
    }
}
