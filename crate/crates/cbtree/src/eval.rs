//! Expression evaluation.
//!
//! Regular combinators produce automata; `G`, `plug(…)` and `rootfam(…)`
//! produce schematic values. A `plug` with `upto=` has finite support, so it
//! is converted to its exact automaton on the spot — downstream commands then
//! treat it like any regular tree. Schematic constructions are probed
//! eagerly: every declared rank is re-derived for components up to the probe
//! depth before the value is handed out, so a wrong pattern fails at
//! evaluation time, not when some later command happens to look.

use std::sync::Arc;

use crate::analysis;
use crate::dsl::{NatExpr, RanksLit, TreeExpr};
use crate::plugged::{
    growing_tree, ComponentSchema, PluggedError, RankPattern, RootFamily, SpinePlugged, Support,
};
use crate::tree::{attach, root_construct, TreeAutomaton, TreeError, TreeFamily};
use crate::words::{Alphabet, SymbolPermutation, Word, WordError};

/// The result of evaluating an expression.
#[derive(Clone, Debug)]
pub enum Value {
    Tree(TreeAutomaton),
    Spine(Arc<SpinePlugged>),
    Family(Arc<RootFamily>),
}

impl Value {
    /// A short name for error messages.
    pub fn kind(&self) -> &'static str {
        match self {
            Value::Tree(_) => "a regular tree",
            Value::Spine(_) => "a schematic plugged tree",
            Value::Family(_) => "a schematic root family",
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum EvalError {
    /// A regular-only combinator met a schematic value.
    #[error("`{combinator}` needs a regular tree, but its argument is {found}")]
    Representation {
        combinator: &'static str,
        found: &'static str,
    },
    #[error("the index variable can only be used inside a `plug`/`rootfam` family")]
    UnboundIndex,
    #[error("`{0}` is not a symbol of the alphabet")]
    UnknownSymbol(String),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Plugged(#[from] PluggedError),
}

impl EvalError {
    /// Exit-code mapping: probe mismatches are their own failure class (3);
    /// everything else is a usage/representation error (2).
    pub fn exit_code(&self) -> i32 {
        match self {
            EvalError::Plugged(PluggedError::Probe { .. })
            | EvalError::Plugged(PluggedError::NotThin { .. }) => 3,
            _ => 2,
        }
    }
}

/// Evaluates an expression over the program alphabet. `probe` bounds the
/// eager verification of schematic rank patterns.
pub fn eval(expr: &TreeExpr, alphabet: &Arc<Alphabet>, probe: usize) -> Result<Value, EvalError> {
    eval_with(expr, alphabet, None, probe)
}

/// Evaluation that additionally must yield a regular tree.
fn eval_tree(
    expr: &TreeExpr,
    alphabet: &Arc<Alphabet>,
    index: Option<u64>,
    probe: usize,
    combinator: &'static str,
) -> Result<TreeAutomaton, EvalError> {
    match eval_with(expr, alphabet, index, probe)? {
        Value::Tree(t) => Ok(t),
        other => Err(EvalError::Representation {
            combinator,
            found: other.kind(),
        }),
    }
}

fn resolve_nat(n: &NatExpr, index: Option<u64>) -> Result<u64, EvalError> {
    match n {
        NatExpr::Const(c) => Ok(*c),
        NatExpr::Var => index.ok_or(EvalError::UnboundIndex),
        NatExpr::VarPlus(c) => index.map(|k| k + c).ok_or(EvalError::UnboundIndex),
    }
}

/// Does the expression mention the family index variable?
fn uses_index(expr: &TreeExpr) -> bool {
    match expr {
        TreeExpr::B(NatExpr::Var) | TreeExpr::B(NatExpr::VarPlus(_)) => true,
        TreeExpr::B(NatExpr::Const(_))
        | TreeExpr::Empty
        | TreeExpr::Epsilon
        | TreeExpr::Full
        | TreeExpr::Hat
        | TreeExpr::Comb
        | TreeExpr::G
        | TreeExpr::Pref(_) => false,
        TreeExpr::Attach(_, e)
        | TreeExpr::Quot(_, e)
        | TreeExpr::Mirror(e)
        | TreeExpr::Prune(e)
        | TreeExpr::Derive(e, _)
        | TreeExpr::Kernel(e) => uses_index(e),
        TreeExpr::Root(arms) => arms.iter().any(|(_, e)| uses_index(e)),
        TreeExpr::Union(x, y) | TreeExpr::Inter(x, y) => uses_index(x) || uses_index(y),
        TreeExpr::Plug { family, .. } | TreeExpr::RootFam { family, .. } => uses_index(family),
    }
}

fn rank_pattern(lit: &RanksLit) -> RankPattern {
    if lit.prefix.is_empty() {
        RankPattern::affine(lit.slope, lit.intercept)
    } else {
        RankPattern::explicit(lit.prefix.clone(), lit.slope, lit.intercept)
    }
}

/// Builds the component schema for a family expression, checking the listed
/// indices eagerly so closure evaluation can never fail later.
fn build_schema(
    family: &TreeExpr,
    alphabet: &Arc<Alphabet>,
    probe: usize,
    eager: impl Iterator<Item = usize>,
) -> Result<ComponentSchema, EvalError> {
    if uses_index(family) {
        for k in eager {
            eval_tree(family, alphabet, Some(k as u64), probe, "family")?;
        }
        let family = family.clone();
        let alphabet = alphabet.clone();
        Ok(ComponentSchema::Indexed(Arc::new(move |k| {
            match eval_with(&family, &alphabet, Some(k as u64), probe) {
                Ok(Value::Tree(t)) => t,
                _ => unreachable!("family components were checked eagerly"),
            }
        })))
    } else {
        let t = eval_tree(family, alphabet, None, probe, "family")?;
        Ok(ComponentSchema::Constant(Arc::new(t)))
    }
}

fn eval_with(
    expr: &TreeExpr,
    alphabet: &Arc<Alphabet>,
    index: Option<u64>,
    probe: usize,
) -> Result<Value, EvalError> {
    match expr {
        TreeExpr::Empty => Ok(Value::Tree(TreeAutomaton::empty(alphabet))),
        TreeExpr::Epsilon => Ok(Value::Tree(TreeAutomaton::epsilon(alphabet))),
        TreeExpr::Full => Ok(Value::Tree(TreeAutomaton::full(alphabet))),
        TreeExpr::Hat => Ok(Value::Tree(TreeAutomaton::hat())),
        TreeExpr::Comb => Ok(Value::Tree(TreeAutomaton::comb())),
        TreeExpr::G => Ok(Value::Spine(growing_tree())),
        TreeExpr::B(n) => {
            let n = resolve_nat(n, index)?;
            Ok(Value::Tree(TreeAutomaton::b_tree(n as usize)))
        }
        TreeExpr::Pref(Word::Finite(u)) => Ok(Value::Tree(TreeAutomaton::pref_word(u))),
        TreeExpr::Pref(Word::Ultimately(w)) => Ok(Value::Tree(TreeAutomaton::pref_chain(w))),
        TreeExpr::Attach(u, e) => {
            let t = eval_tree(e, alphabet, index, probe, "graft")?;
            crate::words::same_alphabet(u.alphabet(), t.alphabet())?;
            Ok(Value::Tree(attach(u, &t)))
        }
        TreeExpr::Quot(u, e) => {
            let t = eval_tree(e, alphabet, index, probe, "quot")?;
            crate::words::same_alphabet(u.alphabet(), t.alphabet())?;
            Ok(Value::Tree(t.quotient(u)))
        }
        TreeExpr::Root(arms) => {
            let mut components =
                vec![TreeAutomaton::empty(alphabet); alphabet.size()];
            for (token, arm) in arms {
                let s = alphabet
                    .lookup(token)
                    .ok_or_else(|| EvalError::UnknownSymbol(token.clone()))?;
                let t = eval_tree(arm, alphabet, index, probe, "root")?;
                crate::words::same_alphabet(alphabet, t.alphabet())?;
                components[s.index()] = t;
            }
            let family = TreeFamily::new(alphabet, components);
            Ok(Value::Tree(root_construct(&family)))
        }
        TreeExpr::Mirror(e) => {
            let t = eval_tree(e, alphabet, index, probe, "mirror")?;
            let p = SymbolPermutation::reversal(t.alphabet());
            Ok(Value::Tree(t.mirror(&p)))
        }
        TreeExpr::Union(x, y) => {
            let tx = eval_tree(x, alphabet, index, probe, "union")?;
            let ty = eval_tree(y, alphabet, index, probe, "union")?;
            Ok(Value::Tree(tx.union(&ty)?))
        }
        TreeExpr::Inter(x, y) => {
            let tx = eval_tree(x, alphabet, index, probe, "inter")?;
            let ty = eval_tree(y, alphabet, index, probe, "inter")?;
            Ok(Value::Tree(tx.intersect(&ty)?))
        }
        TreeExpr::Prune(e) => {
            let t = eval_tree(e, alphabet, index, probe, "prune")?;
            Ok(Value::Tree(analysis::prune(&t)))
        }
        TreeExpr::Derive(e, steps) => {
            let mut t = eval_tree(e, alphabet, index, probe, "derive")?;
            for _ in 0..steps.unwrap_or(1) {
                t = analysis::derive(&t);
            }
            Ok(Value::Tree(t))
        }
        TreeExpr::Kernel(e) => {
            let t = eval_tree(e, alphabet, index, probe, "kernel")?;
            Ok(Value::Tree(analysis::kernel(&t)))
        }
        TreeExpr::Plug {
            spine,
            at,
            family,
            ranks,
            upto,
        } => {
            let plug = alphabet
                .lookup(at)
                .ok_or_else(|| EvalError::UnknownSymbol(at.clone()))?;
            let support = match upto {
                Some(k) => Support::UpTo(*k as usize),
                None => Support::All,
            };
            let eager: Vec<usize> = match upto {
                Some(k) => (0..=*k as usize).collect(),
                None => (0..=probe).collect(),
            };
            let schema = build_schema(family, alphabet, probe, eager.into_iter())?;
            let sp = SpinePlugged::new(
                spine.clone(),
                plug,
                schema,
                rank_pattern(ranks),
                support,
            )?;
            sp.verify_pattern(probe)?;
            match upto {
                Some(_) => Ok(Value::Tree(sp.to_regular()?)),
                None => Ok(Value::Spine(sp)),
            }
        }
        TreeExpr::RootFam { family, ranks } => {
            let schema = build_schema(family, alphabet, probe, 0..=probe)?;
            let fam = RootFamily::new(alphabet, schema, rank_pattern(ranks));
            fam.verify_pattern(probe)?;
            Ok(Value::Family(fam))
        }
    }
}
