use std::fmt;

use super::CorrespondError;

/// Relation symbols shared by the three term languages.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sym {
    Delta,
    E,
    D,
    RDia,
    RBDia,
    RBox,
    RBBox,
    I,
    J,
}

impl Sym {
    pub const ALL: [Sym; 9] = [Sym::Delta, Sym::E, Sym::D, Sym::RDia, Sym::RBDia, Sym::RBox, Sym::RBBox, Sym::I, Sym::J];

    pub fn ascii(self) -> &'static str {
        match self {
            Sym::Delta => "Delta",
            Sym::E => "E",
            Sym::D => "D",
            Sym::RDia => "Rdia",
            Sym::RBDia => "Rbdia",
            Sym::RBox => "Rbox",
            Sym::RBBox => "Rbbox",
            Sym::I => "I",
            Sym::J => "J",
        }
    }

    pub fn unicode(self) -> &'static str {
        match self {
            Sym::Delta => "Δ",
            Sym::E => "E",
            Sym::D => "D",
            Sym::RDia => "R_◇",
            Sym::RBDia => "R_⧫",
            Sym::RBox => "R_□",
            Sym::RBBox => "R_■",
            Sym::I => "I",
            Sym::J => "J",
        }
    }

    /// The one language this symbol pins down, if any.
    fn lang(self) -> Option<Lang> {
        match self {
            Sym::Delta => Some(Lang::KRel),
            Sym::E | Sym::D => Some(Lang::GRel),
            Sym::I | Sym::J => Some(Lang::PRel),
            _ => None,
        }
    }

    pub fn in_lang(self, lang: Lang) -> bool {
        self.lang().is_none_or(|l| l == lang)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Op {
    /// `∘`
    Circ,
    /// `⋆`
    Star,
    /// `⋄_E`
    DiaE,
    /// `□_E`
    BoxE,
    /// `∗`
    Ast,
    /// `;_I`
    SemiI,
    /// `;`
    Semi,
}

impl Op {
    pub fn ascii(self) -> &'static str {
        match self {
            Op::Circ => "o",
            Op::Star => "*k",
            Op::DiaE => ";d",
            Op::BoxE => ";b",
            Op::Ast => "*g",
            Op::SemiI => ";I",
            Op::Semi => ";",
        }
    }

    pub fn unicode(self) -> &'static str {
        match self {
            Op::Circ => "∘",
            Op::Star => "⋆",
            Op::DiaE => "⋄_E",
            Op::BoxE => "□_E",
            Op::Ast => "∗",
            Op::SemiI => ";_I",
            Op::Semi => ";",
        }
    }

    pub fn lang(self) -> Lang {
        match self {
            Op::Circ | Op::Star => Lang::KRel,
            Op::DiaE | Op::BoxE | Op::Ast => Lang::GRel,
            Op::SemiI | Op::Semi => Lang::PRel,
        }
    }

    /// Operators with unit laws on compatible relations; chains of these
    /// are flattened by normalization.
    pub fn is_monoidal(self) -> bool {
        matches!(self, Op::Circ | Op::DiaE | Op::BoxE | Op::SemiI)
    }

    pub fn is_unit(self, s: Sym) -> bool {
        matches!(
            (self, s),
            (Op::Circ, Sym::Delta) | (Op::DiaE, Sym::D) | (Op::BoxE, Sym::E) | (Op::SemiI, Sym::I | Sym::J)
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Lang {
    KRel,
    GRel,
    PRel,
}

impl fmt::Display for Lang {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Lang::KRel => "KRel",
            Lang::GRel => "GRel",
            Lang::PRel => "PRel",
        })
    }
}

/// Carrier of a polarity: objects `A` or attributes `X`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Carrier {
    A,
    X,
}

/// Source and target carriers of a PRel term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sort(pub Carrier, pub Carrier);

impl Sort {
    pub const AX: Sort = Sort(Carrier::A, Carrier::X);
    pub const XA: Sort = Sort(Carrier::X, Carrier::A);
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = |c: Carrier| match c {
            Carrier::A => "A",
            Carrier::X => "X",
        };
        write!(f, "{}×{}", c(self.0), c(self.1))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RelTerm {
    Sym(Sym),
    Comp(Op, Box<RelTerm>, Box<RelTerm>),
}

impl RelTerm {
    pub fn comp(op: Op, l: RelTerm, r: RelTerm) -> RelTerm {
        RelTerm::Comp(op, Box::new(l), Box::new(r))
    }

    /// Right-nested chain `t₁ op (t₂ op (… op tₙ))`.
    pub fn chain(op: Op, terms: Vec<RelTerm>) -> Option<RelTerm> {
        let mut it = terms.into_iter().rev();
        let last = it.next()?;
        Some(it.fold(last, |acc, t| RelTerm::comp(op, t, acc)))
    }

    pub fn symbols(&self) -> Vec<Sym> {
        match self {
            RelTerm::Sym(s) => vec![*s],
            RelTerm::Comp(_, l, r) => {
                let mut v = l.symbols();
                v.extend(r.symbols());
                v
            }
        }
    }

    fn ops(&self, out: &mut Vec<Op>) {
        if let RelTerm::Comp(op, l, r) = self {
            out.push(*op);
            l.ops(out);
            r.ops(out);
        }
    }

    /// Languages the term can belong to.
    pub fn langs(&self) -> Vec<Lang> {
        let mut ops = Vec::new();
        self.ops(&mut ops);
        let syms = self.symbols();
        [Lang::KRel, Lang::GRel, Lang::PRel]
            .into_iter()
            .filter(|l| ops.iter().all(|o| o.lang() == *l) && syms.iter().all(|s| s.in_lang(*l)))
            .collect()
    }

    pub fn check_lang(&self, lang: Lang) -> Result<(), CorrespondError> {
        if self.langs().contains(&lang) {
            Ok(())
        } else {
            Err(CorrespondError::Language { term: self.to_string(), lang })
        }
    }

    /// Sort of a PRel term, checking sort-correct composition.
    pub fn sort(&self) -> Result<Sort, CorrespondError> {
        match self {
            RelTerm::Sym(s) => match s {
                Sym::RBox | Sym::RBBox | Sym::I => Ok(Sort::AX),
                Sym::RDia | Sym::RBDia | Sym::J => Ok(Sort::XA),
                other => Err(CorrespondError::Language { term: other.ascii().into(), lang: Lang::PRel }),
            },
            RelTerm::Comp(op, l, r) => {
                let (sl, sr) = (l.sort()?, r.sort()?);
                let ill = || CorrespondError::Sort { term: self.to_string(), left: sl, right: sr };
                match op {
                    Op::SemiI if sl == sr && sl.0 != sl.1 => Ok(sl),
                    Op::Semi if sl.1 == sr.0 => Ok(Sort(sl.0, sr.1)),
                    Op::SemiI | Op::Semi => Err(ill()),
                    _ => Err(CorrespondError::Language { term: self.to_string(), lang: Lang::PRel }),
                }
            }
        }
    }

    pub fn to_unicode(&self) -> String {
        let mut s = String::new();
        self.write(&mut s, true);
        s
    }

    fn write(&self, out: &mut String, unicode: bool) {
        match self {
            RelTerm::Sym(s) => out.push_str(if unicode { s.unicode() } else { s.ascii() }),
            RelTerm::Comp(op, l, r) => {
                let paren_l = matches!(**l, RelTerm::Comp(..));
                let paren_r = matches!(**r, RelTerm::Comp(o, ..) if o != *op);
                wrap(out, paren_l, |o| l.write(o, unicode));
                out.push(' ');
                out.push_str(if unicode { op.unicode() } else { op.ascii() });
                out.push(' ');
                wrap(out, paren_r, |o| r.write(o, unicode));
            }
        }
    }
}

fn wrap(out: &mut String, paren: bool, body: impl FnOnce(&mut String)) {
    if paren {
        out.push('(');
    }
    body(out);
    if paren {
        out.push(')');
    }
}

impl fmt::Display for RelTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.write(&mut s, false);
        f.write_str(&s)
    }
}

/// `lhs ⊆ rhs` within one language (and one sort, for PRel).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RelInequality {
    pub lang: Lang,
    pub lhs: RelTerm,
    pub rhs: RelTerm,
}

impl RelInequality {
    pub fn new(lang: Lang, lhs: RelTerm, rhs: RelTerm) -> Result<Self, CorrespondError> {
        lhs.check_lang(lang)?;
        rhs.check_lang(lang)?;
        if lang == Lang::PRel {
            let (a, b) = (lhs.sort()?, rhs.sort()?);
            if a != b {
                return Err(CorrespondError::Sort { term: format!("{lhs} <= {rhs}"), left: a, right: b });
            }
        }
        Ok(RelInequality { lang, lhs, rhs })
    }

    pub fn to_unicode(&self) -> String {
        format!("{} ⊆ {}", self.lhs.to_unicode(), self.rhs.to_unicode())
    }
}

impl fmt::Display for RelInequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} <= {}", self.lhs, self.rhs)
    }
}

// ---------------------------------------------------------------------------
// Parsing

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Sym(Sym),
    Op(Op),
    LParen,
    RParen,
    Leq,
    End,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, CorrespondError> {
    let b = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |offset: usize, expected: &str| CorrespondError::Parse {
        offset,
        expected: expected.to_string(),
        found: text[offset..].chars().next().map(String::from).unwrap_or_else(|| "end of input".into()),
    };
    while i < b.len() {
        let c = b[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            b'(' => {
                i += 1;
                Tok::LParen
            }
            b')' => {
                i += 1;
                Tok::RParen
            }
            b'<' if b.get(i + 1) == Some(&b'=') => {
                i += 2;
                Tok::Leq
            }
            b'*' => {
                let op = match b.get(i + 1) {
                    Some(b'k') => Op::Star,
                    Some(b'g') => Op::Ast,
                    _ => return Err(err(i, "`*k` or `*g`")),
                };
                i += 2;
                Tok::Op(op)
            }
            b';' => match b.get(i + 1) {
                Some(b'd') => {
                    i += 2;
                    Tok::Op(Op::DiaE)
                }
                Some(b'b') => {
                    i += 2;
                    Tok::Op(Op::BoxE)
                }
                Some(b'I') => {
                    i += 2;
                    Tok::Op(Op::SemiI)
                }
                _ => {
                    i += 1;
                    Tok::Op(Op::Semi)
                }
            },
            c if c.is_ascii_alphabetic() => {
                while i < b.len() && b[i].is_ascii_alphanumeric() {
                    i += 1;
                }
                let word = &text[start..i];
                if word == "o" {
                    Tok::Op(Op::Circ)
                } else {
                    match Sym::ALL.iter().find(|s| s.ascii() == word) {
                        Some(s) => Tok::Sym(*s),
                        None => return Err(err(start, "relation symbol")),
                    }
                }
            }
            _ => return Err(err(i, "relation symbol, operator or parenthesis")),
        };
        out.push((start, tok));
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn fail(&self, expected: &str) -> CorrespondError {
        CorrespondError::Parse {
            offset: self.toks[self.pos].0,
            expected: expected.into(),
            found: format!("{:?}", self.peek()),
        }
    }

    fn term(&mut self) -> Result<RelTerm, CorrespondError> {
        let lhs = self.primary()?;
        if let Tok::Op(op) = *self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            return Ok(RelTerm::comp(op, lhs, rhs));
        }
        Ok(lhs)
    }

    fn primary(&mut self) -> Result<RelTerm, CorrespondError> {
        match self.peek().clone() {
            Tok::Sym(s) => {
                self.pos += 1;
                Ok(RelTerm::Sym(s))
            }
            Tok::LParen => {
                self.pos += 1;
                let t = self.term()?;
                if self.peek() != &Tok::RParen {
                    return Err(self.fail("`)` or operator"));
                }
                self.pos += 1;
                Ok(t)
            }
            _ => Err(self.fail("relation symbol or `(`")),
        }
    }
}

/// Parses a relational term; operators associate to the right.
pub fn parse_rel_term(text: &str) -> Result<RelTerm, CorrespondError> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let t = p.term()?;
    if p.peek() != &Tok::End {
        return Err(p.fail("operator or end of input"));
    }
    Ok(t)
}

/// Parses `term <= term`. The language is inferred from the symbols and
/// operators, falling back to `default` when the text fits several.
pub fn parse_rel_inequality(text: &str, default: Option<Lang>) -> Result<RelInequality, CorrespondError> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let lhs = p.term()?;
    if p.peek() != &Tok::Leq {
        return Err(p.fail("`<=`"));
    }
    p.pos += 1;
    let rhs = p.term()?;
    if p.peek() != &Tok::End {
        return Err(p.fail("operator or end of input"));
    }
    let candidates: Vec<Lang> = {
        let l = lhs.langs();
        rhs.langs().into_iter().filter(|x| l.contains(x)).collect()
    };
    let lang = match (candidates.as_slice(), default) {
        ([], _) => return Err(CorrespondError::MixedLanguages(text.to_string())),
        (c, Some(d)) if c.contains(&d) => d,
        ([only], _) => *only,
        (_, Some(d)) => return Err(CorrespondError::Language { term: text.to_string(), lang: d }),
        (_, None) => return Err(CorrespondError::AmbiguousLanguage(text.to_string())),
    };
    RelInequality::new(lang, lhs, rhs)
}
