//! Branch-space analysis of regular trees.
//!
//! Everything here rides on one translation: the branches of a regular tree
//! are the infinite runs of its automaton, so topological questions about the
//! branch space become reachability questions on the transition graph.
//!
//! * A state is **live** when some cycle is reachable from it — equivalently,
//!   when its cone still contains a branch. Pruning restricts to live states.
//! * Branch **cardinality** below a state is read off the condensation of the
//!   live subgraph: a reachable strongly connected component with two
//!   in-component edges out of one state pumps a full binary scheme
//!   (continuum); otherwise every component is a plain cycle, and a reachable
//!   cycle with a live exit pumps infinitely many lassos (ℵ₀); otherwise the
//!   branch count is a finite path count over the condensation DAG.
//! * The **derivative** keeps the states whose cone has at least two
//!   branches, then prunes; iterating it yields the rank and the kernel.
//!
//! The classification criterion and the derivative loop are deliberately
//! independent code paths from the truncation oracle in [`crate::oracle`];
//! the test suites drive both and compare.

use std::collections::HashMap;

use thiserror::Error;

use crate::ordinal::Ordinal;
use crate::tree::TreeAutomaton;
use crate::words::{FiniteWord, Sym, UPWord};

/// Errors from branch-level analysis.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnalysisError {
    #[error("the word is not a branch of the tree")]
    NotABranch,
}

/// How many branches a tree (or a state's cone) has.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cardinality {
    Finite(u64),
    Aleph0,
    Continuum,
}

impl Cardinality {
    /// At least two branches — the survival test used by the derivative.
    pub fn at_least_two(self) -> bool {
        match self {
            Cardinality::Finite(n) => n >= 2,
            Cardinality::Aleph0 | Cardinality::Continuum => true,
        }
    }
}

impl std::fmt::Display for Cardinality {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Cardinality::Finite(n) => write!(f, "finite:{n}"),
            Cardinality::Aleph0 => f.write_str("aleph0"),
            Cardinality::Continuum => f.write_str("continuum"),
        }
    }
}

/// Per-state liveness and branch cardinality, relative to a state mask.
struct MaskAnalysis {
    live: Vec<bool>,
    class: Vec<Cardinality>,
}

/// Strongly connected components of the masked transition graph, emitted in
/// reverse topological order (every edge leaving a component points into an
/// earlier-emitted one). Iterative Tarjan; masked-out states are skipped.
fn tarjan_sccs(t: &TreeAutomaton, mask: &[bool]) -> (Vec<usize>, usize) {
    const UNSET: usize = usize::MAX;
    let n = t.state_count();
    let mut scc_of = vec![UNSET; n];
    let mut index = vec![UNSET; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut next_index = 0usize;
    let mut scc_count = 0usize;

    // Explicit DFS stack: (state, next symbol position to examine).
    let mut work: Vec<(usize, usize)> = Vec::new();
    for start in 0..n {
        if !mask[start] || index[start] != UNSET {
            continue;
        }
        work.push((start, 0));
        index[start] = next_index;
        low[start] = next_index;
        next_index += 1;
        stack.push(start);
        on_stack[start] = true;
        while let Some(&(q, pos)) = work.last() {
            if pos < t.alphabet().size() {
                work.last_mut().expect("non-empty").1 += 1;
                let Some(target) = t.row(q)[pos] else { continue };
                if !mask[target] {
                    continue;
                }
                if index[target] == UNSET {
                    index[target] = next_index;
                    low[target] = next_index;
                    next_index += 1;
                    stack.push(target);
                    on_stack[target] = true;
                    work.push((target, 0));
                } else if on_stack[target] {
                    low[q] = low[q].min(index[target]);
                }
            } else {
                work.pop();
                if let Some(&(parent, _)) = work.last() {
                    low[parent] = low[parent].min(low[q]);
                }
                if low[q] == index[q] {
                    loop {
                        let s = stack.pop().expect("tarjan stack underflow");
                        on_stack[s] = false;
                        scc_of[s] = scc_count;
                        if s == q {
                            break;
                        }
                    }
                    scc_count += 1;
                }
            }
        }
    }
    (scc_of, scc_count)
}

/// Classifies every masked state by the branch count of its cone inside the
/// masked subgraph. Masked-out states come back dead (`Finite(0)`).
fn analyze_mask(t: &TreeAutomaton, mask: &[bool]) -> MaskAnalysis {
    let n = t.state_count();
    let sigma = t.alphabet().size();
    let (scc_of, scc_count) = tarjan_sccs(t, mask);

    // Component facts. Components come out in reverse topological order, so
    // a single forward pass can fold in "any successor component" facts.
    let mut size = vec![0usize; scc_count];
    for q in 0..n {
        if mask[q] {
            size[scc_of[q]] += 1;
        }
    }
    let mut cyclic = vec![false; scc_count];
    let mut branching = vec![false; scc_count];
    for q in 0..n {
        if !mask[q] {
            continue;
        }
        let c = scc_of[q];
        let mut internal = 0usize;
        for a in 0..sigma {
            let Some(target) = t.row(q)[a] else { continue };
            if !mask[target] {
                continue;
            }
            if scc_of[target] == c {
                internal += 1;
                cyclic[c] = true; // covers both self-loops and larger components
            }
        }
        if size[c] >= 2 {
            cyclic[c] = true;
        }
        if internal >= 2 {
            branching[c] = true;
        }
    }

    // Fold reachability facts along the condensation (successor components
    // have smaller ids, so ascending id order is a valid traversal).
    let mut reach_cycle = vec![false; scc_count];
    let mut reach_branching = vec![false; scc_count];
    let mut reach_exiting_cycle = vec![false; scc_count];
    for c in 0..scc_count {
        reach_cycle[c] = cyclic[c];
        reach_branching[c] = branching[c];
    }
    // Components in ascending id order: every edge goes to a strictly smaller
    // id (or stays inside), so successors are final when we get there. An
    // exit only matters when it leads somewhere live — a cycle whose every
    // departure dies still carries exactly one branch (it must keep spinning)
    // — so exits are judged here, where the target's liveness is known.
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); scc_count];
    for q in 0..n {
        if mask[q] {
            members[scc_of[q]].push(q);
        }
    }
    for c in 0..scc_count {
        let mut live_exit = false;
        for &q in &members[c] {
            for a in 0..sigma {
                let Some(target) = t.row(q)[a] else { continue };
                if !mask[target] || scc_of[target] == c {
                    continue;
                }
                let d = scc_of[target];
                reach_cycle[c] |= reach_cycle[d];
                reach_branching[c] |= reach_branching[d];
                reach_exiting_cycle[c] |= reach_exiting_cycle[d];
                live_exit |= reach_cycle[d];
            }
        }
        if cyclic[c] && live_exit {
            reach_exiting_cycle[c] = true;
        }
    }

    let mut live = vec![false; n];
    for q in 0..n {
        if mask[q] {
            live[q] = reach_cycle[scc_of[q]];
        }
    }

    // Finite branch counts: only meaningful where neither a branching
    // component nor an exiting cycle is reachable; there every live cycle is
    // terminal and contributes exactly one branch, and acyclic states add up
    // their successors. Ascending component order again gives a topological
    // sweep. Values elsewhere are never read.
    let mut count = vec![0u64; n];
    for c in 0..scc_count {
        for &q in &members[c] {
            if !live[q] {
                continue;
            }
            if cyclic[c] {
                count[q] = 1;
            } else {
                let mut total = 0u64;
                for a in 0..sigma {
                    if let Some(target) = t.row(q)[a] {
                        if mask[target] && live[target] {
                            total = total.saturating_add(count[target]);
                        }
                    }
                }
                count[q] = total;
            }
        }
    }

    let class = (0..n)
        .map(|q| {
            if !mask[q] || !live[q] {
                Cardinality::Finite(0)
            } else if reach_branching[scc_of[q]] {
                Cardinality::Continuum
            } else if reach_exiting_cycle[scc_of[q]] {
                Cardinality::Aleph0
            } else {
                Cardinality::Finite(count[q])
            }
        })
        .collect();

    MaskAnalysis { live, class }
}

fn full_mask(t: &TreeAutomaton) -> Vec<bool> {
    vec![true; t.state_count()]
}

/// Restricts a tree to a set of states (root dropped if excluded) and prunes
/// the result to its live part.
fn restrict_and_prune(t: &TreeAutomaton, keep: &[bool]) -> TreeAutomaton {
    let root = match t.root() {
        Some(r) if keep[r] => r,
        _ => return TreeAutomaton::empty(t.alphabet()),
    };
    let sigma = t.alphabet().size();
    // Liveness inside the restriction decides what survives.
    let inner = analyze_mask(t, keep);
    if !inner.live[root] {
        return TreeAutomaton::empty(t.alphabet());
    }
    let mut doc_edges: Vec<(usize, Sym, usize)> = Vec::new();
    for q in 0..t.state_count() {
        if !keep[q] || !inner.live[q] {
            continue;
        }
        for a in 0..sigma {
            if let Some(target) = t.row(q)[a] {
                if keep[target] && inner.live[target] {
                    doc_edges.push((q, Sym(a as u8), target));
                }
            }
        }
    }
    rebuild(t, root, &doc_edges)
}

/// Builds a fresh (trimmed) automaton over the same alphabet from an edge
/// list and a root taken from `t`'s state space.
fn rebuild(t: &TreeAutomaton, root: usize, edges: &[(usize, Sym, usize)]) -> TreeAutomaton {
    let mut doc = crate::tree::AutomatonDoc {
        alphabet: t.alphabet().tokens().to_vec(),
        states: t.state_count(),
        root: Some(root),
        edges: Vec::with_capacity(edges.len()),
    };
    for &(q, a, target) in edges {
        doc.edges.push((q, t.alphabet().symbol(a).to_string(), target));
    }
    TreeAutomaton::from_document(&doc).expect("internally consistent edge list")
}

/// The pruned tree `Pref([T])`: prefixes of branches only.
pub fn prune(t: &TreeAutomaton) -> TreeAutomaton {
    restrict_and_prune(t, &full_mask(t))
}

/// Does the tree equal its pruned form? (Trim makes this a liveness scan.)
pub fn is_pruned(t: &TreeAutomaton) -> bool {
    let analysis = analyze_mask(t, &full_mask(t));
    analysis.live.iter().all(|&l| l)
}

/// How many branches the tree has.
pub fn classify_branches(t: &TreeAutomaton) -> Cardinality {
    match t.root() {
        None => Cardinality::Finite(0),
        Some(r) => analyze_mask(t, &full_mask(t)).class[r],
    }
}

/// The Cantor-Bendixson derivative: the tree of prefixes of non-isolated
/// branches. Keeps exactly the states whose cone has at least two branches,
/// then prunes; a branchless or single-branch tree derives to empty.
pub fn derive(t: &TreeAutomaton) -> TreeAutomaton {
    if t.root().is_none() {
        return t.clone();
    }
    let analysis = analyze_mask(t, &full_mask(t));
    let keep: Vec<bool> = analysis.class.iter().map(|c| c.at_least_two()).collect();
    restrict_and_prune(t, &keep)
}

/// The derivative sequence `[T⁽⁰⁾, T⁽¹⁾, …]` starting at the pruned tree and
/// ending at the first fixpoint (so its length is rank + 1).
pub fn derivative_sequence(t: &TreeAutomaton) -> Vec<TreeAutomaton> {
    let mut current = prune(t);
    let mut seq = Vec::new();
    loop {
        let next = derive(&current);
        let stable = next.equal(&current).expect("same alphabet");
        seq.push(current);
        if stable {
            return seq;
        }
        current = next;
    }
}

/// The perfect kernel: the largest pruned subtree all of whose cones carry
/// continuum many branches; computed as the fixpoint of [`derive`].
pub fn kernel(t: &TreeAutomaton) -> TreeAutomaton {
    derivative_sequence(t).pop().expect("sequence is non-empty")
}

/// Cantor-Bendixson rank and thinness. The rank of a regular tree is the
/// number of derivative steps until the sequence stabilizes (always finite:
/// each step removes at least one state of the pruned automaton); the tree is
/// thin when the fixpoint is empty, i.e. it has countably many branches.
pub fn rank(t: &TreeAutomaton) -> (Ordinal, bool) {
    let seq = derivative_sequence(t);
    let thin = seq.last().expect("non-empty").is_empty();
    (Ordinal::finite((seq.len() - 1) as u64), thin)
}

/// The states visited along an ultimately periodic branch, one per prefix
/// length, up to (and including) the first repeated period-boundary state.
fn states_along(t: &TreeAutomaton, w: &UPWord) -> Option<Vec<usize>> {
    let mut states = vec![t.root()?];
    let mut q = t.root()?;
    for i in 0..w.head().len() {
        q = t.transition(q, w.head().letter(i))?;
        states.push(q);
    }
    let mut seen = vec![false; t.state_count()];
    while !seen[q] {
        seen[q] = true;
        for i in 0..w.period().len() {
            q = t.transition(q, w.period().letter(i))?;
            states.push(q);
        }
    }
    Some(states)
}

/// Is the branch `w` isolated in `[T]`? Returns the least cone depth `N`
/// witnessing isolation (`cone(w_{|N}) ∩ [T] = {w}`), or `None` for a branch
/// that is a limit of other branches. Errors when `w` is not a branch.
pub fn is_isolated(t: &TreeAutomaton, w: &UPWord) -> Result<Option<usize>, AnalysisError> {
    // Readability through a full period lasso is exactly branch membership.
    let states = states_along(t, w).ok_or(AnalysisError::NotABranch)?;
    let analysis = analyze_mask(t, &full_mask(t));
    // Cone width at depth n is the branch count below the n-th state; the
    // first singleton cone isolates the branch. Classes along a branch can
    // only shrink, and the state list covers a full period lasso, so a miss
    // here is a miss everywhere.
    Ok(states
        .iter()
        .position(|&q| analysis.class[q] == Cardinality::Finite(1)))
}

/// A schematic family `prefix · pump^k · bridge · tail (k ∈ ω)` of isolated
/// branches, used when the isolated set is infinite.
#[derive(Debug, Clone)]
pub struct PumpedFamily {
    pub prefix: FiniteWord,
    pub pump: FiniteWord,
    pub bridge: FiniteWord,
    pub tail: UPWord,
}

impl PumpedFamily {
    /// The `k`-th member of the family.
    pub fn instantiate(&self, k: usize) -> UPWord {
        let mut u = self.prefix.clone();
        for _ in 0..k {
            u = u.concat(&self.pump).expect("same alphabet");
        }
        u = u.concat(&self.bridge).expect("same alphabet");
        let head = u.concat(self.tail.head()).expect("same alphabet");
        UPWord::new(head, self.tail.period().clone()).expect("non-empty period")
    }
}

impl std::fmt::Display for PumpedFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}({})*{}·{}", self.prefix, self.pump, self.bridge, self.tail)
    }
}

/// The isolated branches of a tree: either the full finite list, or a
/// non-enumerable marker carrying pumping families (witnesses of infinitude)
/// and a bounded sample.
#[derive(Debug, Clone)]
pub enum IsolatedBranches {
    Finite(Vec<UPWord>),
    Infinite { families: Vec<PumpedFamily>, sample: Vec<UPWord> },
}

/// The unique branch below a single-branch state, as a canonical word.
fn tail_from(t: &TreeAutomaton, analysis: &MaskAnalysis, start: usize) -> UPWord {
    let mut q = start;
    let mut letters: Vec<Sym> = Vec::new();
    let mut first_seen: HashMap<usize, usize> = HashMap::new();
    loop {
        if let Some(&at) = first_seen.get(&q) {
            let alphabet = t.alphabet();
            let head = FiniteWord::from_syms(alphabet, letters[..at].to_vec());
            let period = FiniteWord::from_syms(alphabet, letters[at..].to_vec());
            return UPWord::new(head, period).expect("cycle is non-empty");
        }
        first_seen.insert(q, letters.len());
        let mut step: Option<(Sym, usize)> = None;
        for a in t.alphabet().syms() {
            if let Some(target) = t.transition(q, a) {
                if analysis.live[target] {
                    debug_assert!(step.is_none(), "single-branch state must not fork");
                    step = Some((a, target));
                }
            }
        }
        let (a, target) = step.expect("live state has a live successor");
        letters.push(a);
        q = target;
    }
}

/// Shortest word from `from` to any state satisfying `goal`, moving only
/// through states allowed by `within`. Plain BFS in symbol order.
fn shortest_word_to(
    t: &TreeAutomaton,
    from: usize,
    within: &[bool],
    goal: impl Fn(usize) -> bool,
) -> Option<FiniteWord> {
    let mut prev: HashMap<usize, (usize, Sym)> = HashMap::new();
    let mut queue = std::collections::VecDeque::new();
    let mut seen = vec![false; t.state_count()];
    seen[from] = true;
    queue.push_back(from);
    let mut found = None;
    if goal(from) {
        found = Some(from);
    }
    while found.is_none() {
        let Some(q) = queue.pop_front() else { break };
        for a in t.alphabet().syms() {
            let Some(target) = t.transition(q, a) else { continue };
            if !within[target] || seen[target] {
                continue;
            }
            seen[target] = true;
            prev.insert(target, (q, a));
            if goal(target) {
                found = Some(target);
                break;
            }
            queue.push_back(target);
        }
    }
    let mut at = found?;
    let mut letters = Vec::new();
    while at != from {
        let (p, a) = prev[&at];
        letters.push(a);
        at = p;
    }
    letters.reverse();
    Some(FiniteWord::from_syms(t.alphabet(), letters))
}

/// Shortest non-empty cycle word through `at`, staying inside `within`.
fn shortest_cycle_word(t: &TreeAutomaton, at: usize, within: &[bool]) -> Option<FiniteWord> {
    // One forced step, then BFS back to the start.
    let mut best: Option<FiniteWord> = None;
    for a in t.alphabet().syms() {
        let Some(target) = t.transition(at, a) else { continue };
        if !within[target] {
            continue;
        }
        let back = if target == at {
            Some(FiniteWord::empty(t.alphabet()))
        } else {
            shortest_word_to(t, target, within, |q| q == at)
        };
        if let Some(back) = back {
            let word = FiniteWord::from_syms(t.alphabet(), vec![a]).concat(&back).unwrap();
            if best.as_ref().map_or(true, |b| word < *b) {
                best = Some(word);
            }
        }
    }
    best
}

/// All isolated branches. An isolated branch enters a single-branch cone at a
/// unique minimal depth, so the isolated set is in bijection with the words
/// that run through the ≥2-branch region and step off it into a
/// single-branch state; the set is infinite exactly when such an entry is
/// reachable through a cycle of the region. `max_enum` bounds the sample
/// listed alongside the non-enumerable marker.
pub fn isolated_branches(t: &TreeAutomaton, max_enum: usize) -> IsolatedBranches {
    let Some(root) = t.root() else {
        return IsolatedBranches::Finite(Vec::new());
    };
    let analysis = analyze_mask(t, &full_mask(t));
    if analysis.class[root] == Cardinality::Finite(0) {
        return IsolatedBranches::Finite(Vec::new());
    }
    if analysis.class[root] == Cardinality::Finite(1) {
        return IsolatedBranches::Finite(vec![tail_from(t, &analysis, root)]);
    }

    let n = t.state_count();
    // The ≥2-branch region reachable from the root.
    let wide: Vec<bool> = analysis.class.iter().map(|c| c.at_least_two()).collect();
    let mut region = vec![false; n];
    {
        let mut queue = std::collections::VecDeque::from([root]);
        region[root] = true;
        while let Some(q) = queue.pop_front() {
            for a in t.alphabet().syms() {
                if let Some(target) = t.transition(q, a) {
                    if wide[target] && !region[target] {
                        region[target] = true;
                        queue.push_back(target);
                    }
                }
            }
        }
    }

    // Entry edges: region state → single-branch state.
    let mut entries: Vec<(usize, Sym, usize)> = Vec::new();
    for q in 0..n {
        if !region[q] {
            continue;
        }
        for a in t.alphabet().syms() {
            if let Some(target) = t.transition(q, a) {
                if analysis.class[target] == Cardinality::Finite(1) {
                    entries.push((q, a, target));
                }
            }
        }
    }
    if entries.is_empty() {
        return IsolatedBranches::Finite(Vec::new());
    }

    // Region states that can still reach an entry source; nothing outside
    // this set contributes an entry word, so walks never expand past it.
    let mut feeds_entry = vec![false; n];
    {
        let mut rev: Vec<Vec<usize>> = vec![Vec::new(); n];
        for q in 0..n {
            if !region[q] {
                continue;
            }
            for a in t.alphabet().syms() {
                if let Some(target) = t.transition(q, a) {
                    if region[target] {
                        rev[target].push(q);
                    }
                }
            }
        }
        let mut queue: std::collections::VecDeque<usize> = Default::default();
        for &(p, _, _) in &entries {
            if !feeds_entry[p] {
                feeds_entry[p] = true;
                queue.push_back(p);
            }
        }
        while let Some(q) = queue.pop_front() {
            for &p in &rev[q] {
                if !feeds_entry[p] {
                    feeds_entry[p] = true;
                    queue.push_back(p);
                }
            }
        }
    }

    // Cyclic region states, and what they can reach inside the region: if an
    // entry source is fed by a region cycle, its entry words can be pumped.
    let (scc_of, scc_count) = tarjan_sccs(t, &region);
    let mut scc_size = vec![0usize; scc_count];
    let mut scc_cyclic = vec![false; scc_count];
    for q in 0..n {
        if !region[q] {
            continue;
        }
        scc_size[scc_of[q]] += 1;
        for a in t.alphabet().syms() {
            if t.transition(q, a) == Some(q) {
                scc_cyclic[scc_of[q]] = true;
            }
        }
    }
    for c in 0..scc_count {
        if scc_size[c] >= 2 {
            scc_cyclic[c] = true;
        }
    }
    let cyclic_state: Vec<bool> =
        (0..n).map(|q| region[q] && scc_cyclic[scc_of[q]]).collect();
    let mut after_cycle = vec![false; n];
    {
        let mut queue: std::collections::VecDeque<usize> = (0..n).filter(|&q| cyclic_state[q]).collect();
        for &q in &queue {
            after_cycle[q] = true;
        }
        while let Some(q) = queue.pop_front() {
            for a in t.alphabet().syms() {
                if let Some(target) = t.transition(q, a) {
                    if region[target] && !after_cycle[target] {
                        after_cycle[target] = true;
                        queue.push_back(target);
                    }
                }
            }
        }
    }

    let pumped: Vec<&(usize, Sym, usize)> =
        entries.iter().filter(|(p, _, _)| after_cycle[*p]).collect();

    if pumped.is_empty() {
        // Finite case: breadth-first over the feeds-entry part of the region.
        // No cycle feeds an entry here (that is what `pumped` ruled out), so
        // the walk terminates and yields entry words in shortlex order.
        let mut out = Vec::new();
        let mut queue = std::collections::VecDeque::new();
        if feeds_entry[root] {
            queue.push_back((FiniteWord::empty(t.alphabet()), root));
        }
        while let Some((word, q)) = queue.pop_front() {
            for a in t.alphabet().syms() {
                let Some(target) = t.transition(q, a) else { continue };
                if analysis.class[target] == Cardinality::Finite(1) {
                    let entry = word.push(a);
                    let tail = tail_from(t, &analysis, target);
                    let head = entry.concat(tail.head()).expect("same alphabet");
                    out.push(UPWord::new(head, tail.period().clone()).expect("period non-empty"));
                } else if region[target] && feeds_entry[target] {
                    queue.push_back((word.push(a), target));
                }
            }
        }
        return IsolatedBranches::Finite(out);
    }

    // Infinite case: one pumping family per pumped entry edge, plus a
    // shortlex sample of explicit members.
    let mut families = Vec::new();
    for &&(p, c, target) in &pumped {
        // A cyclic region state that reaches p; prefer the closest to the root.
        let reaches_p: Vec<bool> = (0..n)
            .map(|s| region[s] && shortest_word_to(t, s, &region, |q| q == p).is_some())
            .collect();
        let Some(prefix) = shortest_word_to(t, root, &region, |q| cyclic_state[q] && reaches_p[q])
        else {
            continue;
        };
        let s = t.run(&prefix).expect("prefix stays readable");
        let Some(pump) = shortest_cycle_word(t, s, &region) else { continue };
        let Some(mut bridge) = shortest_word_to(t, s, &region, |q| q == p) else { continue };
        bridge = bridge.push(c);
        families.push(PumpedFamily {
            prefix,
            pump,
            bridge,
            tail: tail_from(t, &analysis, target),
        });
    }

    // Shortlex sample of explicit members; a pop budget keeps the walk tame
    // on automata where entry edges are sparse along the region.
    let mut sample = Vec::new();
    let mut queue = std::collections::VecDeque::new();
    let mut budget = 10_000usize + max_enum.saturating_mul(t.alphabet().size());
    if feeds_entry[root] {
        queue.push_back((FiniteWord::empty(t.alphabet()), root));
    }
    while sample.len() < max_enum && budget > 0 {
        budget -= 1;
        let Some((word, q)) = queue.pop_front() else { break };
        for a in t.alphabet().syms() {
            let Some(target) = t.transition(q, a) else { continue };
            if analysis.class[target] == Cardinality::Finite(1) {
                if sample.len() < max_enum {
                    let entry = word.push(a);
                    let tail = tail_from(t, &analysis, target);
                    let head = entry.concat(tail.head()).expect("same alphabet");
                    sample
                        .push(UPWord::new(head, tail.period().clone()).expect("period non-empty"));
                }
            } else if region[target] && feeds_entry[target] {
                queue.push_back((word.push(a), target));
            }
        }
    }
    IsolatedBranches::Infinite { families, sample }
}

/// The derivative stage at which a state's cone empties out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeathStage {
    Stage(usize),
    Kernel,
}

impl std::fmt::Display for DeathStage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DeathStage::Stage(k) => write!(f, "{k}"),
            DeathStage::Kernel => f.write_str("kernel"),
        }
    }
}

/// Everything the analysis knows about one state of a tree.
#[derive(Debug, Clone)]
pub struct StateReport {
    pub state: usize,
    pub live: bool,
    pub class: Cardinality,
    pub in_kernel: bool,
    pub dies_at: DeathStage,
}

impl StateReport {
    pub fn to_json(&self) -> String {
        let dies = match self.dies_at {
            DeathStage::Stage(k) => serde_json::json!(k),
            DeathStage::Kernel => serde_json::json!("kernel"),
        };
        serde_json::json!({
            "state": self.state,
            "live": self.live,
            "class": self.class.to_string(),
            "kernel": self.in_kernel,
            "dies_at": dies,
        })
        .to_string()
    }
}

/// Per-state report over the whole automaton. The death stage of a state is
/// the derivative stage at which its cone becomes empty — computed by
/// iterating the ≥2-branch restriction over state sets of the *original*
/// automaton, which mirrors the derivative loop one quotient at a time (the
/// derivative commutes with quotients). States that never die are exactly the
/// kernel states.
pub fn state_report(t: &TreeAutomaton) -> Vec<StateReport> {
    let n = t.state_count();
    let base = analyze_mask(t, &full_mask(t));
    let mut dies_at: Vec<Option<DeathStage>> = vec![None; n];

    let mut mask = full_mask(t);
    let mut stage = 0usize;
    loop {
        let current = analyze_mask(t, &mask);
        let alive: Vec<bool> = (0..n).map(|q| mask[q] && current.live[q]).collect();
        for q in 0..n {
            if dies_at[q].is_none() && !alive[q] {
                dies_at[q] = Some(DeathStage::Stage(stage));
            }
        }
        let next_mask: Vec<bool> =
            (0..n).map(|q| alive[q] && current.class[q].at_least_two()).collect();
        if next_mask == mask {
            break;
        }
        mask = next_mask;
        stage += 1;
    }

    (0..n)
        .map(|q| StateReport {
            state: q,
            live: base.live[q],
            class: base.class[q],
            in_kernel: dies_at[q].is_none(),
            dies_at: dies_at[q].unwrap_or(DeathStage::Kernel),
        })
        .collect()
}
