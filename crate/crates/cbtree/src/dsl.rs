//! The expression language.
//!
//! A program is an optional `alphabet {a, b, c}` directive followed by one
//! tree expression. Words are written by juxtaposing single-character
//! symbols (`abba`), the empty word is `eps`, and ultimately periodic words
//! take the form `head(period)^w` with an optional head. The grammar:
//!
//! ```text
//! expr := 'empty' | 'epsilon' | 'full' | 'hat' | 'comb' | 'G'
//!       | 'B' '(' nat ')' | 'pref' '(' upword ')'
//!       | word '.' expr
//!       | 'quot' '(' word ',' expr ')'
//!       | 'root' '(' sym ':' expr {',' sym ':' expr} ')'
//!       | 'mirror' '(' expr ')' | 'union' '(' expr ',' expr ')'
//!       | 'inter' '(' expr ',' expr ')' | 'prune' '(' expr ')'
//!       | 'derive' '(' expr [',' nat] ')' | 'kernel' '(' expr ')'
//!       | 'plug' '(' spine=upword, at=sym, family=expr, ranks=ranks [, upto=nat] ')'
//!       | 'rootfam' '(' family=expr, ranks=ranks ')'
//! ranks := 'affine' '(' nat ',' nat ')'
//!        | 'explicit' '(' '[' nat {',' nat} ']' ',' nat ',' nat ')'
//! upword := word | [word] '(' word ')^w'
//! ```
//!
//! `word '.' expr` grafts: the result is `Pref(u) ∪ u·T`, not a language
//! product. An identifier followed by `.` is always read as a word, so words
//! that collide with keywords stay usable on exotic alphabets. Inside the
//! `family=` argument of `plug`/`rootfam`, `B`'s argument may use the index
//! variable (`k` or `n`, with an optional `+c`), which the evaluator binds
//! per component.

use std::fmt;
use std::sync::Arc;

use crate::words::{Alphabet, FiniteWord, UPWord, Word, WordError};

// ----- AST -------------------------------------------------------------------

/// A natural-number position that may reference the family index variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NatExpr {
    Const(u64),
    /// The index variable itself (`k` and `n` both parse to this).
    Var,
    /// Index variable plus a constant (`k+1`).
    VarPlus(u64),
}

impl fmt::Display for NatExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NatExpr::Const(c) => write!(f, "{c}"),
            NatExpr::Var => write!(f, "k"),
            NatExpr::VarPlus(c) => write!(f, "k+{c}"),
        }
    }
}

/// Rank pattern literal: an explicit prefix followed by an affine tail.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RanksLit {
    pub prefix: Vec<u64>,
    pub slope: u64,
    pub intercept: u64,
}

impl fmt::Display for RanksLit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.prefix.is_empty() {
            write!(f, "affine({}, {})", self.slope, self.intercept)
        } else {
            write!(f, "explicit([")?;
            for (i, v) in self.prefix.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{v}")?;
            }
            write!(f, "], {}, {})", self.slope, self.intercept)
        }
    }
}

/// Abstract syntax of the expression language. Words are stored fully typed
/// (the alphabet is fixed by the directive before parsing begins); symbols
/// keep their source token so expressions print back exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TreeExpr {
    Empty,
    Epsilon,
    Full,
    Hat,
    Comb,
    G,
    B(NatExpr),
    Pref(Word),
    Attach(FiniteWord, Box<TreeExpr>),
    Quot(FiniteWord, Box<TreeExpr>),
    Root(Vec<(String, TreeExpr)>),
    Mirror(Box<TreeExpr>),
    Union(Box<TreeExpr>, Box<TreeExpr>),
    Inter(Box<TreeExpr>, Box<TreeExpr>),
    Prune(Box<TreeExpr>),
    Derive(Box<TreeExpr>, Option<u64>),
    Kernel(Box<TreeExpr>),
    Plug {
        spine: UPWord,
        at: String,
        family: Box<TreeExpr>,
        ranks: RanksLit,
        upto: Option<u64>,
    },
    RootFam {
        family: Box<TreeExpr>,
        ranks: RanksLit,
    },
}

impl fmt::Display for TreeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreeExpr::Empty => write!(f, "empty"),
            TreeExpr::Epsilon => write!(f, "epsilon"),
            TreeExpr::Full => write!(f, "full"),
            TreeExpr::Hat => write!(f, "hat"),
            TreeExpr::Comb => write!(f, "comb"),
            TreeExpr::G => write!(f, "G"),
            TreeExpr::B(n) => write!(f, "B({n})"),
            TreeExpr::Pref(w) => match w {
                Word::Finite(u) => write!(f, "pref({u})"),
                Word::Ultimately(u) => write!(f, "pref({u})"),
            },
            TreeExpr::Attach(u, e) => write!(f, "{u}.{e}"),
            TreeExpr::Quot(u, e) => write!(f, "quot({u}, {e})"),
            TreeExpr::Root(arms) => {
                write!(f, "root(")?;
                for (i, (sym, e)) in arms.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{sym}: {e}")?;
                }
                write!(f, ")")
            }
            TreeExpr::Mirror(e) => write!(f, "mirror({e})"),
            TreeExpr::Union(x, y) => write!(f, "union({x}, {y})"),
            TreeExpr::Inter(x, y) => write!(f, "inter({x}, {y})"),
            TreeExpr::Prune(e) => write!(f, "prune({e})"),
            TreeExpr::Derive(e, None) => write!(f, "derive({e})"),
            TreeExpr::Derive(e, Some(k)) => write!(f, "derive({e}, {k})"),
            TreeExpr::Kernel(e) => write!(f, "kernel({e})"),
            TreeExpr::Plug {
                spine,
                at,
                family,
                ranks,
                upto,
            } => {
                write!(f, "plug(spine={spine}, at={at}, family={family}, ranks={ranks}")?;
                if let Some(k) = upto {
                    write!(f, ", upto={k}")?;
                }
                write!(f, ")")
            }
            TreeExpr::RootFam { family, ranks } => {
                write!(f, "rootfam(family={family}, ranks={ranks})")
            }
        }
    }
}

/// A parsed program: the working alphabet and the expression.
#[derive(Clone, Debug)]
pub struct Program {
    pub alphabet: Arc<Alphabet>,
    pub expr: TreeExpr,
}

// ----- errors ------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("parse error at byte {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

fn err<T>(position: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        position,
        message: message.into(),
    })
}

// ----- lexer -------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Number(u64),
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Comma,
    Colon,
    Dot,
    Caret,
    Equals,
    Plus,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Number(n) => write!(f, "`{n}`"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::LBrace => write!(f, "`{{`"),
            Tok::RBrace => write!(f, "`}}`"),
            Tok::LBracket => write!(f, "`[`"),
            Tok::RBracket => write!(f, "`]`"),
            Tok::Comma => write!(f, "`,`"),
            Tok::Colon => write!(f, "`:`"),
            Tok::Dot => write!(f, "`.`"),
            Tok::Caret => write!(f, "`^`"),
            Tok::Equals => write!(f, "`=`"),
            Tok::Plus => write!(f, "`+`"),
            Tok::End => write!(f, "end of input"),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let mut out = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        if c.is_ascii_alphabetic() {
            let mut j = i;
            while j < bytes.len() && (bytes[j] as char).is_ascii_alphabetic() {
                j += 1;
            }
            out.push((Tok::Ident(text[i..j].to_string()), start));
            i = j;
        } else if c.is_ascii_digit() {
            let mut j = i;
            while j < bytes.len() && (bytes[j] as char).is_ascii_digit() {
                j += 1;
            }
            match text[i..j].parse::<u64>() {
                Ok(n) => out.push((Tok::Number(n), start)),
                Err(_) => return err(start, "number is too large"),
            }
            i = j;
        } else {
            let tok = match c {
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '{' => Tok::LBrace,
                '}' => Tok::RBrace,
                '[' => Tok::LBracket,
                ']' => Tok::RBracket,
                ',' => Tok::Comma,
                ':' => Tok::Colon,
                '.' => Tok::Dot,
                '^' => Tok::Caret,
                '=' => Tok::Equals,
                '+' => Tok::Plus,
                _ => return err(start, format!("unexpected character `{c}`")),
            };
            out.push((tok, start));
            i += 1;
        }
    }
    out.push((Tok::End, bytes.len()));
    Ok(out)
}

// ----- parser ------------------------------------------------------------------

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    alphabet: Arc<Alphabet>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.pos + 1).min(self.toks.len() - 1)].0
    }

    fn here(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            err(self.here(), format!("expected {}, found {}", want, self.peek()))
        }
    }

    fn expect_ident(&mut self) -> Result<(String, usize), ParseError> {
        match self.bump() {
            (Tok::Ident(s), at) => Ok((s, at)),
            (t, at) => err(at, format!("expected a name, found {t}")),
        }
    }

    fn expect_number(&mut self) -> Result<u64, ParseError> {
        match self.bump() {
            (Tok::Number(n), _) => Ok(n),
            (t, at) => err(at, format!("expected a number, found {t}")),
        }
    }

    /// Turns a source token into a word: `eps` is empty, anything else is a
    /// sequence of single-character symbols of the alphabet.
    fn word_from(&self, token: &str, at: usize) -> Result<FiniteWord, ParseError> {
        if token == "eps" {
            return Ok(FiniteWord::empty(&self.alphabet));
        }
        let mut syms = Vec::with_capacity(token.len());
        for ch in token.chars() {
            match self.alphabet.lookup(&ch.to_string()) {
                Some(s) => syms.push(s),
                None => {
                    return err(at, format!("`{ch}` is not a symbol of the alphabet"));
                }
            }
        }
        Ok(FiniteWord::from_syms(&self.alphabet, syms))
    }

    fn word(&mut self) -> Result<FiniteWord, ParseError> {
        let (token, at) = self.expect_ident()?;
        self.word_from(&token, at)
    }

    /// `upword := word | [word] '(' word ')^w'`
    fn upword(&mut self) -> Result<Word, ParseError> {
        let head = if matches!(self.peek(), Tok::Ident(_)) {
            self.word()?
        } else {
            FiniteWord::empty(&self.alphabet)
        };
        if *self.peek() != Tok::LParen {
            return Ok(Word::Finite(head));
        }
        self.bump();
        let at = self.here();
        let period = self.word()?;
        if period.is_empty() {
            return err(at, "period must be nonempty");
        }
        self.expect(Tok::RParen)?;
        self.expect(Tok::Caret)?;
        let (marker, mat) = self.expect_ident()?;
        if marker != "w" {
            return err(mat, format!("expected `w` after `^`, found `{marker}`"));
        }
        let up = UPWord::new(head, period).map_err(|e| ParseError {
            position: at,
            message: e.to_string(),
        })?;
        Ok(Word::Ultimately(up))
    }

    fn up_only(&mut self) -> Result<UPWord, ParseError> {
        let at = self.here();
        match self.upword()? {
            Word::Ultimately(w) => Ok(w),
            Word::Finite(_) => err(at, "expected an ultimately periodic word (`head(period)^w`)"),
        }
    }

    fn nat_expr(&mut self) -> Result<NatExpr, ParseError> {
        match self.bump() {
            (Tok::Number(n), _) => Ok(NatExpr::Const(n)),
            (Tok::Ident(v), at) if v == "k" || v == "n" => {
                if *self.peek() == Tok::Plus {
                    self.bump();
                    let c = self.expect_number()?;
                    Ok(NatExpr::VarPlus(c))
                } else {
                    let _ = at;
                    Ok(NatExpr::Var)
                }
            }
            (t, at) => err(at, format!("expected a number or index variable, found {t}")),
        }
    }

    /// A single-character symbol of the alphabet, kept as its source token.
    fn sym_token(&mut self) -> Result<String, ParseError> {
        let (token, at) = self.expect_ident()?;
        if token.chars().count() != 1 || self.alphabet.lookup(&token).is_none() {
            return err(at, format!("`{token}` is not a symbol of the alphabet"));
        }
        Ok(token)
    }

    fn ranks(&mut self) -> Result<RanksLit, ParseError> {
        let (kind, at) = self.expect_ident()?;
        match kind.as_str() {
            "affine" => {
                self.expect(Tok::LParen)?;
                let slope = self.expect_number()?;
                self.expect(Tok::Comma)?;
                let intercept = self.expect_number()?;
                self.expect(Tok::RParen)?;
                Ok(RanksLit {
                    prefix: Vec::new(),
                    slope,
                    intercept,
                })
            }
            "explicit" => {
                self.expect(Tok::LParen)?;
                self.expect(Tok::LBracket)?;
                let mut prefix = Vec::new();
                if *self.peek() != Tok::RBracket {
                    loop {
                        prefix.push(self.expect_number()?);
                        if *self.peek() == Tok::Comma {
                            self.bump();
                        } else {
                            break;
                        }
                    }
                }
                self.expect(Tok::RBracket)?;
                self.expect(Tok::Comma)?;
                let slope = self.expect_number()?;
                self.expect(Tok::Comma)?;
                let intercept = self.expect_number()?;
                self.expect(Tok::RParen)?;
                Ok(RanksLit {
                    prefix,
                    slope,
                    intercept,
                })
            }
            other => err(at, format!("expected `affine` or `explicit`, found `{other}`")),
        }
    }

    fn expr(&mut self) -> Result<TreeExpr, ParseError> {
        let at = self.here();
        let Tok::Ident(head) = self.peek().clone() else {
            return err(at, format!("expected an expression, found {}", self.peek()));
        };
        // A name directly followed by `.` is a word being grafted, whatever
        // else it might spell.
        if *self.peek2() == Tok::Dot {
            let u = self.word()?;
            self.expect(Tok::Dot)?;
            let e = self.expr()?;
            return Ok(TreeExpr::Attach(u, Box::new(e)));
        }
        self.bump();
        match head.as_str() {
            "empty" => Ok(TreeExpr::Empty),
            "epsilon" => Ok(TreeExpr::Epsilon),
            "full" => Ok(TreeExpr::Full),
            "hat" => Ok(TreeExpr::Hat),
            "comb" => Ok(TreeExpr::Comb),
            "G" => Ok(TreeExpr::G),
            "B" => {
                self.expect(Tok::LParen)?;
                let n = self.nat_expr()?;
                self.expect(Tok::RParen)?;
                Ok(TreeExpr::B(n))
            }
            "pref" => {
                self.expect(Tok::LParen)?;
                let w = self.upword()?;
                self.expect(Tok::RParen)?;
                Ok(TreeExpr::Pref(w))
            }
            "quot" => {
                self.expect(Tok::LParen)?;
                let u = self.word()?;
                self.expect(Tok::Comma)?;
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(TreeExpr::Quot(u, Box::new(e)))
            }
            "root" => {
                self.expect(Tok::LParen)?;
                let mut arms = Vec::new();
                loop {
                    let sym_at = self.here();
                    let sym = self.sym_token()?;
                    if arms.iter().any(|(s, _)| *s == sym) {
                        return err(sym_at, format!("duplicate root arm `{sym}`"));
                    }
                    self.expect(Tok::Colon)?;
                    let e = self.expr()?;
                    arms.push((sym, e));
                    if *self.peek() == Tok::Comma {
                        self.bump();
                    } else {
                        break;
                    }
                }
                self.expect(Tok::RParen)?;
                Ok(TreeExpr::Root(arms))
            }
            "mirror" => Ok(TreeExpr::Mirror(Box::new(self.unary()?))),
            "prune" => Ok(TreeExpr::Prune(Box::new(self.unary()?))),
            "kernel" => Ok(TreeExpr::Kernel(Box::new(self.unary()?))),
            "union" => {
                let (x, y) = self.binary()?;
                Ok(TreeExpr::Union(Box::new(x), Box::new(y)))
            }
            "inter" => {
                let (x, y) = self.binary()?;
                Ok(TreeExpr::Inter(Box::new(x), Box::new(y)))
            }
            "derive" => {
                self.expect(Tok::LParen)?;
                let e = self.expr()?;
                let steps = if *self.peek() == Tok::Comma {
                    self.bump();
                    Some(self.expect_number()?)
                } else {
                    None
                };
                self.expect(Tok::RParen)?;
                Ok(TreeExpr::Derive(Box::new(e), steps))
            }
            "plug" => self.plug(),
            "rootfam" => self.rootfam(),
            other => err(
                at,
                format!("unknown name `{other}` (words attach with `{other}.<expr>`)"),
            ),
        }
    }

    fn unary(&mut self) -> Result<TreeExpr, ParseError> {
        self.expect(Tok::LParen)?;
        let e = self.expr()?;
        self.expect(Tok::RParen)?;
        Ok(e)
    }

    fn binary(&mut self) -> Result<(TreeExpr, TreeExpr), ParseError> {
        self.expect(Tok::LParen)?;
        let x = self.expr()?;
        self.expect(Tok::Comma)?;
        let y = self.expr()?;
        self.expect(Tok::RParen)?;
        Ok((x, y))
    }

    fn plug(&mut self) -> Result<TreeExpr, ParseError> {
        self.expect(Tok::LParen)?;
        let mut spine = None;
        let mut at_sym = None;
        let mut family = None;
        let mut ranks = None;
        let mut upto = None;
        loop {
            let (key, key_at) = self.expect_ident()?;
            self.expect(Tok::Equals)?;
            match key.as_str() {
                "spine" => spine = Some(self.up_only()?),
                "at" => at_sym = Some(self.sym_token()?),
                "family" => family = Some(self.expr()?),
                "ranks" => ranks = Some(self.ranks()?),
                "upto" => upto = Some(self.expect_number()?),
                other => return err(key_at, format!("unknown `plug` argument `{other}`")),
            }
            if *self.peek() == Tok::Comma {
                self.bump();
            } else {
                break;
            }
        }
        let end = self.here();
        self.expect(Tok::RParen)?;
        let missing = [
            ("spine", spine.is_none()),
            ("at", at_sym.is_none()),
            ("family", family.is_none()),
            ("ranks", ranks.is_none()),
        ];
        if let Some((name, _)) = missing.iter().find(|(_, absent)| *absent) {
            return err(end, format!("`plug` is missing its `{name}` argument"));
        }
        Ok(TreeExpr::Plug {
            spine: spine.expect("checked above"),
            at: at_sym.expect("checked above"),
            family: Box::new(family.expect("checked above")),
            ranks: ranks.expect("checked above"),
            upto,
        })
    }

    fn rootfam(&mut self) -> Result<TreeExpr, ParseError> {
        self.expect(Tok::LParen)?;
        let mut family = None;
        let mut ranks = None;
        loop {
            let (key, key_at) = self.expect_ident()?;
            self.expect(Tok::Equals)?;
            match key.as_str() {
                "family" => family = Some(self.expr()?),
                "ranks" => ranks = Some(self.ranks()?),
                other => return err(key_at, format!("unknown `rootfam` argument `{other}`")),
            }
            if *self.peek() == Tok::Comma {
                self.bump();
            } else {
                break;
            }
        }
        let end = self.here();
        self.expect(Tok::RParen)?;
        if family.is_none() {
            return err(end, "`rootfam` is missing its `family` argument");
        }
        if ranks.is_none() {
            return err(end, "`rootfam` is missing its `ranks` argument");
        }
        Ok(TreeExpr::RootFam {
            family: Box::new(family.expect("checked above")),
            ranks: ranks.expect("checked above"),
        })
    }
}

/// Parses a whole program: an optional alphabet directive, then one
/// expression, then nothing else.
pub fn parse_program(text: &str) -> Result<Program, ParseError> {
    let toks = lex(text)?;
    let mut alphabet = Alphabet::binary();
    let mut parser = Parser {
        toks,
        pos: 0,
        alphabet: alphabet.clone(),
    };
    if *parser.peek() == Tok::Ident("alphabet".to_string()) {
        parser.bump();
        parser.expect(Tok::LBrace)?;
        let mut symbols: Vec<String> = Vec::new();
        loop {
            let (token, at) = parser.expect_ident()?;
            if token.chars().count() != 1 {
                return err(at, "alphabet symbols must be single characters");
            }
            if symbols.contains(&token) {
                return err(at, format!("duplicate symbol `{token}`"));
            }
            symbols.push(token);
            if *parser.peek() == Tok::Comma {
                parser.bump();
            } else {
                break;
            }
        }
        parser.expect(Tok::RBrace)?;
        alphabet = Alphabet::new(symbols).map_err(|e: WordError| ParseError {
            position: 0,
            message: e.to_string(),
        })?;
        parser.alphabet = alphabet.clone();
    }
    let expr = parser.expr()?;
    if *parser.peek() != Tok::End {
        return err(
            parser.here(),
            format!("trailing input after the expression: {}", parser.peek()),
        );
    }
    Ok(Program { alphabet, expr })
}

/// Parses a single expression over a known alphabet (used by tests and by
/// round-trip checks; programs go through [`parse_program`]).
pub fn parse_expr(text: &str, alphabet: &Arc<Alphabet>) -> Result<TreeExpr, ParseError> {
    let toks = lex(text)?;
    let mut parser = Parser {
        toks,
        pos: 0,
        alphabet: alphabet.clone(),
    };
    let expr = parser.expr()?;
    if *parser.peek() != Tok::End {
        return err(
            parser.here(),
            format!("trailing input after the expression: {}", parser.peek()),
        );
    }
    Ok(expr)
}
