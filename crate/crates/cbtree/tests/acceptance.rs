//! The acceptance gate: seven exact-value and property criteria at desk
//! scale. Each test prints one `A<n> …: PASS` line (visible with
//! `--nocapture`); a failing criterion fails its test.

use std::collections::{BTreeSet, HashMap};
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use cbtree::analysis::{
    classify_branches, derive, is_isolated, is_pruned, isolated_branches, prune, rank,
    Cardinality, IsolatedBranches,
};
use cbtree::oracle::{
    continuum_witness, oracle_isolated, random_tree, run_tree_suite, run_word_suite,
    truncation_widths, up_words, IsolationVerdict,
};
use cbtree::ordinal::Ordinal;
use cbtree::plugged::{growing_tree, growing_tree_truncated, ladder_family};
use cbtree::tree::{attach, AutomatonDoc, TreeAutomaton};
use cbtree::words::{Alphabet, FiniteWord, SymbolPermutation, UPWord};

fn ternary() -> Arc<Alphabet> {
    Alphabet::new(["a", "b", "c"]).expect("distinct symbols")
}

/// The 200 automata shared by the oracle suites: five fixed shapes the random
/// model cannot produce, then seeded random automata (alphabet alternating
/// with seed parity, matching the law-suite driver).
fn suite_automata() -> Vec<TreeAutomaton> {
    let binary = Alphabet::binary();
    let mut out = vec![
        TreeAutomaton::empty(&binary),
        TreeAutomaton::epsilon(&binary),
        TreeAutomaton::hat(),
        TreeAutomaton::b_tree(3),
        TreeAutomaton::comb(),
    ];
    for seed in 5..200u64 {
        let alphabet = if seed % 2 == 0 { binary.clone() } else { ternary() };
        out.push(random_tree(seed, 6, &alphabet));
    }
    out
}

/// All finite words of length at most `len`.
fn words_up_to(alphabet: &Arc<Alphabet>, len: usize) -> Vec<FiniteWord> {
    let mut out = vec![FiniteWord::empty(alphabet)];
    let mut frontier = out.clone();
    for _ in 0..len {
        let mut next = Vec::new();
        for u in &frontier {
            for a in alphabet.syms() {
                next.push(u.push(a));
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Memoized `up_words` by (alphabet size, length bound): the A5/A6 sweeps
/// revisit the same bounds across automata.
struct UpWordCache(HashMap<(usize, usize), Arc<Vec<UPWord>>>);

impl UpWordCache {
    fn new() -> Self {
        UpWordCache(HashMap::new())
    }

    fn get(&mut self, alphabet: &Arc<Alphabet>, bound: usize) -> Arc<Vec<UPWord>> {
        self.0
            .entry((alphabet.size(), bound))
            .or_insert_with(|| Arc::new(up_words(alphabet, bound, bound)))
            .clone()
    }
}

#[test]
fn a1_rank_ladder() {
    let start = Instant::now();
    for n in 0..=8u64 {
        let (ordinal, thin) = rank(&TreeAutomaton::b_tree(n as usize));
        assert_eq!(ordinal, Ordinal::finite(n), "rank of the {n}-block ladder");
        assert!(thin, "the {n}-block ladder is thin");
    }
    for n in 0..=7usize {
        let stepped = derive(&TreeAutomaton::b_tree(n + 1));
        assert!(
            stepped.equal(&TreeAutomaton::b_tree(n)).expect("same alphabet"),
            "derivative of the {}-block ladder",
            n + 1
        );
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    println!("A1 rank ladder: PASS ({elapsed:?})");
}

#[test]
fn a2_hat() {
    let hat = TreeAutomaton::hat();
    assert_eq!(classify_branches(&hat), Cardinality::Finite(2));
    let IsolatedBranches::Finite(branches) = isolated_branches(&hat, 64) else {
        panic!("the hat has finitely many isolated branches");
    };
    let shown: BTreeSet<String> = branches.iter().map(|w| w.to_string()).collect();
    let expected: BTreeSet<String> = ["(a)^w", "(b)^w"].iter().map(|s| s.to_string()).collect();
    assert_eq!(shown, expected);
    assert_eq!(rank(&hat), (Ordinal::finite(1), true));
    assert!(derive(&hat).root().is_none(), "the derivative of the hat is empty");
    println!("A2 hat: PASS");
}

#[test]
fn a3_plugged_ordinals() {
    let start = Instant::now();
    let g = growing_tree();
    assert_eq!(g.rank(12).expect("pattern verifies"), Ordinal::omega().succ());
    for k in 0..=6usize {
        let truncated = growing_tree_truncated(k);
        assert_eq!(
            rank(&truncated),
            (Ordinal::finite(k as u64 + 1), true),
            "growing tree cut at {k}"
        );
    }
    assert_eq!(ladder_family().rank(12).expect("pattern verifies"), Ordinal::omega());
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(5), "took {elapsed:?}");
    println!("A3 plugged ordinals: PASS ({elapsed:?})");
}

#[test]
fn a4_algebra_suites() {
    let start = Instant::now();
    let word_reports = run_word_suite(0, 500, None);
    assert_eq!(word_reports.len(), 500 * 8);
    let tree_reports = run_tree_suite(0, 200, None);
    assert_eq!(tree_reports.len(), 200 * 5);
    for report in word_reports.iter().chain(tree_reports.iter()) {
        assert!(
            report.pass,
            "law {} failed at seed {}: {:?}",
            report.law, report.seed, report.witness
        );
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(30), "took {elapsed:?}");
    println!("A4 algebra suites: PASS ({elapsed:?})");
}

#[test]
fn a5_oracle_equivalence() {
    let start = Instant::now();
    let mut cache = UpWordCache::new();
    for (index, t) in suite_automata().iter().enumerate() {
        let n = t.state_count();
        let depth = 2 * n + 4;
        let derived = derive(t);
        let derived_empty = derived.root().is_none();

        for w in cache.get(t.alphabet(), n).iter() {
            let member = t.branch_member(w);
            let exact = if member {
                is_isolated(t, w).expect("w is a branch")
            } else {
                None
            };
            // The derivative keeps exactly the non-isolated branches.
            assert_eq!(
                derived.branch_member(w),
                member && exact.is_none(),
                "derive membership, automaton {index}, word {w}"
            );
            // The brute-force verdict agrees whenever it is conclusive.
            match oracle_isolated(t, w, depth) {
                IsolationVerdict::Isolated(at) => {
                    assert!(member, "automaton {index}, word {w}");
                    assert_eq!(exact, Some(at), "automaton {index}, word {w}");
                }
                IsolationVerdict::NotIsolated => {
                    assert_eq!(exact, None, "automaton {index}, word {w}");
                }
                IsolationVerdict::Inconclusive => {}
            }
        }

        // Cone growth against the classification, on the pruned tree (dead
        // twigs can ride a cycle arbitrarily long, so raw widths never
        // settle); the class itself is unchanged by pruning.
        let pruned = prune(t);
        let live = pruned.state_count();
        let widths = truncation_widths(&pruned, 2 * live + 4);
        match classify_branches(t) {
            Cardinality::Finite(f) => {
                for level in live..=2 * live + 4 {
                    assert_eq!(widths[level], f, "automaton {index} level {level}");
                }
                assert!(continuum_witness(t).is_none(), "automaton {index}");
            }
            Cardinality::Aleph0 => {
                assert!(widths[2 * live + 4] > widths[live], "automaton {index}");
                assert!(continuum_witness(t).is_none(), "automaton {index}");
            }
            Cardinality::Continuum => {
                let witness = continuum_witness(t).expect("witness exists");
                assert_ne!(witness.left, witness.right, "automaton {index}");
                assert_eq!(t.run(&witness.access), Some(witness.state), "automaton {index}");
            }
        }

        // Derivative commutations. Quotients commute exactly; grafts commute
        // exactly while the derivative is non-empty and both sides die
        // otherwise; mirroring permutes symbols and commutes exactly.
        for u in words_up_to(t.alphabet(), 2) {
            let quot_lhs = derive(&t.quotient(&u));
            let quot_rhs = derived.quotient(&u);
            assert!(
                quot_lhs.equal(&quot_rhs).expect("same alphabet"),
                "quotient commutation, automaton {index}, word {u}"
            );
            let graft_lhs = derive(&attach(&u, t));
            if derived_empty {
                assert!(graft_lhs.root().is_none(), "automaton {index}, word {u}");
                assert!(
                    prune(&attach(&u, &derived)).root().is_none(),
                    "automaton {index}, word {u}"
                );
            } else {
                let graft_rhs = attach(&u, &derived);
                assert!(
                    graft_lhs.equal(&graft_rhs).expect("same alphabet"),
                    "graft commutation, automaton {index}, word {u}"
                );
            }
        }
        let reversal = SymbolPermutation::reversal(t.alphabet());
        let mirror_lhs = derive(&t.mirror(&reversal));
        let mirror_rhs = derived.mirror(&reversal);
        assert!(
            mirror_lhs.equal(&mirror_rhs).expect("same alphabet"),
            "mirror commutation, automaton {index}"
        );
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    println!("A5 oracle equivalence: PASS ({elapsed:?})");
}

#[test]
fn a6_pruning_bijection() {
    let automata = suite_automata();
    let mut cache = UpWordCache::new();

    for (index, t) in automata.iter().enumerate() {
        let pruned = prune(t);
        assert!(is_pruned(&pruned), "automaton {index}");
        assert!(
            pruned.equal(&prune(&pruned)).expect("same alphabet"),
            "pruning is idempotent, automaton {index}"
        );
        for w in cache.get(t.alphabet(), t.state_count()).iter() {
            assert_eq!(
                pruned.branch_member(w),
                t.branch_member(w),
                "branch preservation, automaton {index}, word {w}"
            );
        }
    }

    // Conditional equality: whenever two same-alphabet automata agree on all
    // sampled branch memberships and on cone counts to depth 2·states, their
    // pruned trees must be language-equal.
    let widths: Vec<Vec<u64>> = automata.iter().map(|t| truncation_widths(t, 16)).collect();
    let mut triggered = 0usize;
    for i in 0..automata.len() {
        for j in i + 1..automata.len() {
            let (ti, tj) = (&automata[i], &automata[j]);
            if ti.alphabet().size() != tj.alphabet().size() {
                continue;
            }
            let bound = ti.state_count().max(tj.state_count());
            if widths[i][..=2 * bound] != widths[j][..=2 * bound] {
                continue;
            }
            let agrees = cache
                .get(ti.alphabet(), bound)
                .iter()
                .all(|w| ti.branch_member(w) == tj.branch_member(w));
            if agrees {
                assert!(
                    prune(ti).equal(&prune(tj)).expect("same alphabet"),
                    "pruned trees differ for automata {i} and {j}"
                );
                triggered += 1;
            }
        }
    }

    // Constructed equal-language pairs keep the conditional branch exercised
    // even if no random pair collides.
    for seed in 0..20u64 {
        let t = random_tree(seed, 6, &Alphabet::binary());
        let m = t.minimize();
        let bound = t.state_count().max(m.state_count());
        assert_eq!(truncation_widths(&t, 2 * bound), truncation_widths(&m, 2 * bound));
        for w in cache.get(t.alphabet(), bound).iter() {
            assert_eq!(t.branch_member(w), m.branch_member(w), "seed {seed}, word {w}");
        }
        assert!(prune(&t).equal(&prune(&m)).expect("same alphabet"), "seed {seed}");
        triggered += 1;
    }
    assert!(triggered > 0, "the conditional-equality branch never ran");
    println!("A6 pruning bijection: PASS ({triggered} conditional pairs)");
}

// ----- A7: the command-line contract ---------------------------------------------

fn cli(args: &[&str], color: Option<&str>) -> (i32, String, String) {
    let mut command = Command::new(env!("CARGO_BIN_EXE_cbtree"));
    command.args(args).env_remove("CBTREE_COLOR");
    if let Some(value) = color {
        command.env("CBTREE_COLOR", value);
    }
    let output = command.output().expect("the binary runs");
    (
        output.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&output.stdout).into_owned(),
        String::from_utf8_lossy(&output.stderr).into_owned(),
    )
}

#[test]
fn a7_cli_contract() {
    // Golden renderings, bit-exact.
    let goldens: [(&str, &str, &str, &str, &str); 6] = [
        ("hat", "ascii", "3", include_str!("golden/hat_ascii.txt"), "hat ascii"),
        ("hat", "dot", "3", include_str!("golden/hat_dot.txt"), "hat dot"),
        ("B(2)", "ascii", "3", include_str!("golden/b2_ascii.txt"), "B(2) ascii"),
        ("B(2)", "dot", "2", include_str!("golden/b2_dot.txt"), "B(2) dot"),
        ("G", "ascii", "3", include_str!("golden/g_ascii.txt"), "G ascii"),
        ("G", "dot", "2", include_str!("golden/g_dot.txt"), "G dot"),
    ];
    for (expr, format, depth, golden, label) in goldens {
        let (code, stdout, stderr) =
            cli(&[expr, "render", "--format", format, "--depth", depth], None);
        assert_eq!(code, 0, "{label}: {stderr}");
        assert_eq!(stdout, golden, "{label} drifted from its golden file");
    }

    // JSON round trip: export → import → export is a fixed point, and the
    // imported automaton answers like the original expression.
    let (code, exported, _) = cli(&["prune(union(hat, B(2)))", "export-json"], None);
    assert_eq!(code, 0);
    let doc: AutomatonDoc = serde_json::from_str(&exported).expect("valid document");
    let imported = TreeAutomaton::from_document(&doc).expect("valid automaton");
    assert_eq!(serde_json::to_string_pretty(&imported.to_document()).unwrap() + "\n", exported);
    let path = std::env::temp_dir().join(format!("cbtree-acceptance-{}.json", std::process::id()));
    std::fs::write(&path, &exported).expect("temp file writes");
    let import_arg = format!("@{}", path.display());
    let (code, reexported, _) = cli(&[&import_arg, "export-json"], None);
    assert_eq!(code, 0);
    assert_eq!(reexported, exported);
    let (code, classified, _) = cli(&[&import_arg, "classify"], None);
    assert_eq!(code, 0);
    assert_eq!(classified, "aleph0\n");
    std::fs::remove_file(&path).ok();

    // Exit code 0 with the documented value outputs.
    for (args, expected) in [
        (vec!["B(4)", "rank"], "4 (thin)\n"),
        (vec!["G", "rank"], "w+1\n"),
        (vec!["hat", "classify"], "finite:2\n"),
        (vec!["empty", "render", "--depth", "5"], "(empty)\n"),
    ] {
        let (code, stdout, stderr) = cli(&args, None);
        assert_eq!(code, 0, "{args:?}: {stderr}");
        assert_eq!(stdout, expected, "{args:?}");
    }

    // Exit code 1: a sabotaged law makes the harness fail and say so.
    let (code, stdout, _) = cli(&["check-laws", "--count", "2", "--mutate", "prop1.3"], None);
    assert_eq!(code, 1);
    assert!(stdout.contains("\"pass\":false"));
    let (code, stdout, _) = cli(&["check-laws", "--count", "2"], None);
    assert_eq!(code, 0);
    assert!(stdout.lines().all(|line| line.contains("\"pass\":true")));

    // Exit code 2: parse, representation, and usage errors.
    for args in [
        vec!["B(", "rank"],
        vec!["mirror(G)", "rank"],
        vec!["G", "export-json"],
        vec!["hat", "frobnicate"],
        vec!["hat"],
    ] {
        let (code, _, stderr) = cli(&args, None);
        assert_eq!(code, 2, "{args:?}");
        assert!(!stderr.is_empty(), "{args:?} should explain itself");
    }

    // Exit code 3: a schematic value whose declared ranks miss the probe.
    let (code, _, stderr) = cli(
        &["plug(spine=(a)^w, at=b, family=B(k), ranks=affine(1, 1))", "rank"],
        None,
    );
    assert_eq!(code, 3, "{stderr}");

    // Color is opt-in and exact.
    let (_, plain, _) = cli(&["hat", "render", "--depth", "1"], None);
    assert!(!plain.contains('\x1b'));
    let (_, colored, _) = cli(&["hat", "render", "--depth", "1"], Some("1"));
    assert!(colored.contains("\x1b[36m"));
    let (_, off, _) = cli(&["hat", "render", "--depth", "1"], Some("0"));
    assert_eq!(off, plain);

    println!("A7 CLI contract: PASS");
}
