//! Modal formulas, their concrete syntax, and the classification of modal
//! reduction principles into the inductive shapes used by the correspondence
//! machinery.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SyntaxError {
    #[error("syntax error at byte {offset}: expected {}, found {found}", expected.join(" | "))]
    Parse {
        offset: usize,
        expected: Vec<String>,
        found: String,
    },
    #[error("not a modal reduction principle term: {0}")]
    NotMrp(String),
    #[error("sides of the mrp use different variables: {0} and {1}")]
    VariableMismatch(String, String),
    #[error("string {0} is not a pure {1} string")]
    MixedString(ModalString, &'static str),
}

/// Unary modal connectives of the extended language.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Modality {
    Box,
    Dia,
    BlackBox,
    BlackDia,
}

impl Modality {
    pub fn is_diamond(self) -> bool {
        matches!(self, Modality::Dia | Modality::BlackDia)
    }

    pub fn is_box(self) -> bool {
        !self.is_diamond()
    }

    pub fn keyword(self) -> &'static str {
        match self {
            Modality::Box => "box",
            Modality::Dia => "dia",
            Modality::BlackBox => "bbox",
            Modality::BlackDia => "bdia",
        }
    }

    pub fn glyph(self) -> &'static str {
        match self {
            Modality::Box => "□",
            Modality::Dia => "◇",
            Modality::BlackBox => "■",
            Modality::BlackDia => "⧫",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Bottom,
    Top,
    Var(String),
    Nominal(String),
    Conominal(String),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Box(Box<Formula>),
    Dia(Box<Formula>),
    BlackBox(Box<Formula>),
    BlackDia(Box<Formula>),
}

impl Formula {
    pub fn var(name: &str) -> Formula {
        Formula::Var(name.to_string())
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn modal(m: Modality, inner: Formula) -> Formula {
        let inner = Box::new(inner);
        match m {
            Modality::Box => Formula::Box(inner),
            Modality::Dia => Formula::Dia(inner),
            Modality::BlackBox => Formula::BlackBox(inner),
            Modality::BlackDia => Formula::BlackDia(inner),
        }
    }

    /// Outermost unary connective and its argument, if any.
    pub fn as_modal(&self) -> Option<(Modality, &Formula)> {
        match self {
            Formula::Box(f) => Some((Modality::Box, f)),
            Formula::Dia(f) => Some((Modality::Dia, f)),
            Formula::BlackBox(f) => Some((Modality::BlackBox, f)),
            Formula::BlackDia(f) => Some((Modality::BlackDia, f)),
            _ => None,
        }
    }

    /// Names of propositional variables, nominals and conominals, in order.
    pub fn atoms(&self) -> BTreeSet<(AtomKind, String)> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<(AtomKind, String)>) {
        match self {
            Formula::Bottom | Formula::Top => {}
            Formula::Var(n) => {
                out.insert((AtomKind::Var, n.clone()));
            }
            Formula::Nominal(n) => {
                out.insert((AtomKind::Nominal, n.clone()));
            }
            Formula::Conominal(n) => {
                out.insert((AtomKind::Conominal, n.clone()));
            }
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
            Formula::Box(f) | Formula::Dia(f) | Formula::BlackBox(f) | Formula::BlackDia(f) => {
                f.collect_atoms(out)
            }
        }
    }

    pub fn to_unicode(&self) -> String {
        let mut s = String::new();
        write_formula(self, &mut s, Prec::Or, true);
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AtomKind {
    Var,
    Nominal,
    Conominal,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Prec {
    Or,
    And,
    Unary,
}

fn write_formula(f: &Formula, out: &mut String, ctx: Prec, unicode: bool) {
    let own = match f {
        Formula::Or(..) => Prec::Or,
        Formula::And(..) => Prec::And,
        _ => Prec::Unary,
    };
    let paren = own < ctx;
    if paren {
        out.push('(');
    }
    match f {
        Formula::Bottom => out.push_str(if unicode { "⊥" } else { "bot" }),
        Formula::Top => out.push_str(if unicode { "⊤" } else { "top" }),
        Formula::Var(n) | Formula::Nominal(n) | Formula::Conominal(n) => out.push_str(n),
        Formula::And(a, b) => {
            write_formula(a, out, Prec::And, unicode);
            out.push_str(if unicode { " ∧ " } else { " and " });
            write_formula(b, out, Prec::Unary, unicode);
        }
        Formula::Or(a, b) => {
            write_formula(a, out, Prec::Or, unicode);
            out.push_str(if unicode { " ∨ " } else { " or " });
            write_formula(b, out, Prec::And, unicode);
        }
        _ => {
            let (m, inner) = f.as_modal().expect("modal");
            if unicode {
                out.push_str(m.glyph());
            } else {
                out.push_str(m.keyword());
                out.push(' ');
            }
            write_formula(inner, out, Prec::Unary, unicode);
        }
    }
    if paren {
        out.push(')');
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        write_formula(self, &mut s, Prec::Or, false);
        f.write_str(&s)
    }
}

/// An inequality `lhs <= rhs` between formulas (a sequent).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Sequent {
    pub lhs: Formula,
    pub rhs: Formula,
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} <= {}", self.lhs, self.rhs)
    }
}

// ---------------------------------------------------------------------------
// Lexer and parser

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Kw(&'static str),
    LParen,
    RParen,
    Leq,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::Kw(k) => write!(f, "`{k}`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Leq => f.write_str("`<=`"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

const KEYWORDS: [&str; 8] = ["box", "dia", "bbox", "bdia", "and", "or", "top", "bot"];

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, SyntaxError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c == b'(' {
            out.push((i, Tok::LParen));
            i += 1;
        } else if c == b')' {
            out.push((i, Tok::RParen));
            i += 1;
        } else if c == b'<' && bytes.get(i + 1) == Some(&b'=') {
            out.push((i, Tok::Leq));
            i += 2;
        } else if c.is_ascii_lowercase() {
            let start = i;
            while i < bytes.len()
                && (bytes[i].is_ascii_lowercase() || bytes[i].is_ascii_digit() || bytes[i] == b'_')
            {
                i += 1;
            }
            let word = &text[start..i];
            match KEYWORDS.iter().find(|k| **k == word) {
                Some(k) => out.push((start, Tok::Kw(k))),
                None => out.push((start, Tok::Ident(word.to_string()))),
            }
        } else {
            let found = text[i..].chars().next().map(|c| format!("`{c}`")).unwrap_or_default();
            return Err(SyntaxError::Parse {
                offset: i,
                expected: vec!["formula".into()],
                found,
            });
        }
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

const ATOM_START: [&str; 8] = ["bot", "top", "identifier", "box", "dia", "bbox", "bdia", "("];

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn error(&self, expected: &[&str]) -> SyntaxError {
        SyntaxError::Parse {
            offset: self.offset(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.peek().to_string(),
        }
    }

    fn or_expr(&mut self) -> Result<Formula, SyntaxError> {
        let mut lhs = self.and_expr()?;
        while self.peek() == &Tok::Kw("or") {
            self.pos += 1;
            let rhs = self.and_expr()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and_expr(&mut self) -> Result<Formula, SyntaxError> {
        let mut lhs = self.unary()?;
        while self.peek() == &Tok::Kw("and") {
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, SyntaxError> {
        let tok = self.peek().clone();
        match tok {
            Tok::Kw("bot") => {
                self.pos += 1;
                Ok(Formula::Bottom)
            }
            Tok::Kw("top") => {
                self.pos += 1;
                Ok(Formula::Top)
            }
            Tok::Kw(k @ ("box" | "dia" | "bbox" | "bdia")) => {
                self.pos += 1;
                let m = match k {
                    "box" => Modality::Box,
                    "dia" => Modality::Dia,
                    "bbox" => Modality::BlackBox,
                    _ => Modality::BlackDia,
                };
                Ok(Formula::modal(m, self.unary()?))
            }
            Tok::Ident(name) => {
                self.pos += 1;
                Ok(Formula::Var(name))
            }
            Tok::LParen => {
                self.pos += 1;
                let inner = self.or_expr()?;
                if self.peek() != &Tok::RParen {
                    return Err(self.error(&["`and`", "`or`", "`)`"]));
                }
                self.pos += 1;
                Ok(inner)
            }
            _ => Err(self.error(&ATOM_START)),
        }
    }

    fn expect_end(&self, allowed: &[&str]) -> Result<(), SyntaxError> {
        if self.peek() == &Tok::End {
            Ok(())
        } else {
            Err(self.error(allowed))
        }
    }
}

pub fn parse_formula(text: &str) -> Result<Formula, SyntaxError> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let f = p.or_expr()?;
    p.expect_end(&["`and`", "`or`", "end of input"])?;
    Ok(f)
}

pub fn parse_sequent(text: &str) -> Result<Sequent, SyntaxError> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let lhs = p.or_expr()?;
    if p.peek() != &Tok::Leq {
        return Err(p.error(&["`and`", "`or`", "`<=`"]));
    }
    p.pos += 1;
    let rhs = p.or_expr()?;
    p.expect_end(&["`and`", "`or`", "end of input"])?;
    Ok(Sequent { lhs, rhs })
}

// ---------------------------------------------------------------------------
// Modal strings and mrps

/// A finite sequence of unary connectives, read outermost first.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModalString(pub Vec<Modality>);

impl ModalString {
    pub fn empty() -> Self {
        ModalString(Vec::new())
    }

    pub fn repeat(m: Modality, n: usize) -> Self {
        ModalString(vec![m; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_diamonds(&self) -> bool {
        self.0.iter().all(|m| m.is_diamond())
    }

    pub fn is_boxes(&self) -> bool {
        self.0.iter().all(|m| m.is_box())
    }

    pub fn concat(&self, other: &ModalString) -> ModalString {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        ModalString(v)
    }

    /// The formula obtained by prefixing `inner` with this string.
    pub fn apply(&self, inner: Formula) -> Formula {
        self.0.iter().rev().fold(inner, |acc, m| Formula::modal(*m, acc))
    }

    /// Splits a formula into its modal prefix and the remaining core.
    pub fn peel(f: &Formula) -> (ModalString, &Formula) {
        let mut v = Vec::new();
        let mut cur = f;
        while let Some((m, inner)) = cur.as_modal() {
            v.push(m);
            cur = inner;
        }
        (ModalString(v), cur)
    }

    fn split_prefix(&self, pred: impl Fn(Modality) -> bool) -> (ModalString, ModalString) {
        let k = self.0.iter().take_while(|m| pred(**m)).count();
        (ModalString(self.0[..k].to_vec()), ModalString(self.0[k..].to_vec()))
    }
}

impl fmt::Display for ModalString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        for m in &self.0 {
            f.write_str(m.glyph())?;
        }
        Ok(())
    }
}

/// Alternating block structure of a χ (diamond-led) or ζ (box-led) string.
///
/// `blocks[0]` has the leading polarity and polarities alternate. Only the
/// last block may be empty, and only when it is the sole block (the bare
/// variable).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BlockDecomposition {
    pub lead: Polarity,
    pub blocks: Vec<ModalString>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarity {
    Diamond,
    Box,
}

impl Polarity {
    fn matches(self, m: Modality) -> bool {
        match self {
            Polarity::Diamond => m.is_diamond(),
            Polarity::Box => m.is_box(),
        }
    }
}

impl BlockDecomposition {
    /// Groups `s` into maximal same-polarity runs. Fails when `s` is nonempty
    /// and does not start with the leading polarity.
    pub fn new(s: &ModalString, lead: Polarity) -> Option<Self> {
        if s.is_empty() {
            return Some(BlockDecomposition { lead, blocks: vec![ModalString::empty()] });
        }
        if !lead.matches(s.0[0]) {
            return None;
        }
        let mut blocks: Vec<ModalString> = Vec::new();
        let mut cur = vec![s.0[0]];
        for w in s.0.windows(2) {
            if w[0].is_diamond() == w[1].is_diamond() {
                cur.push(w[1]);
            } else {
                blocks.push(ModalString(std::mem::take(&mut cur)));
                cur.push(w[1]);
            }
        }
        blocks.push(ModalString(cur));
        Some(BlockDecomposition { lead, blocks })
    }

    /// True when the trailing block of the opposite polarity is empty, i.e.
    /// the string ends inside a leading-polarity block.
    pub fn terminal_empty(&self) -> bool {
        self.blocks.len() % 2 == 1
    }

    pub fn flatten(&self) -> ModalString {
        ModalString(self.blocks.iter().flat_map(|b| b.0.iter().copied()).collect())
    }

    pub fn is_var(&self) -> bool {
        self.blocks.len() == 1 && self.blocks[0].is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// A modal reduction principle `s(p) <= t(p)` given as two modal strings
/// over a shared variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mrp {
    pub var: String,
    pub lhs: ModalString,
    pub rhs: ModalString,
}

impl Mrp {
    pub fn from_sequent(seq: &Sequent) -> Result<Mrp, SyntaxError> {
        let (l, lv) = mrp_term(&seq.lhs)?;
        let (r, rv) = mrp_term(&seq.rhs)?;
        if lv != rv {
            return Err(SyntaxError::VariableMismatch(lv, rv));
        }
        Ok(Mrp { var: lv, lhs: l, rhs: r })
    }

    pub fn parse(text: &str) -> Result<Mrp, SyntaxError> {
        Mrp::from_sequent(&parse_sequent(text)?)
    }

    pub fn to_sequent(&self) -> Sequent {
        Sequent {
            lhs: self.lhs.apply(Formula::Var(self.var.clone())),
            rhs: self.rhs.apply(Formula::Var(self.var.clone())),
        }
    }
}

impl fmt::Display for Mrp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_sequent().fmt(f)
    }
}

/// Checks that `f` is a box/diamond string over one variable.
pub fn mrp_term(f: &Formula) -> Result<(ModalString, String), SyntaxError> {
    let (s, core) = ModalString::peel(f);
    if s.0.iter().any(|m| matches!(m, Modality::BlackBox | Modality::BlackDia)) {
        return Err(SyntaxError::NotMrp(f.to_string()));
    }
    match core {
        Formula::Var(v) => Ok((s, v.clone())),
        _ => Err(SyntaxError::NotMrp(f.to_string())),
    }
}

fn good_string(s: &ModalString, side: Side) -> bool {
    match side {
        Side::Left => s.split_prefix(Modality::is_diamond).1.is_boxes(),
        Side::Right => s.split_prefix(Modality::is_box).1.is_diamonds(),
    }
}

/// Left-good: diamonds then boxes. Right-good: boxes then diamonds.
pub fn is_good(t: &Formula, side: Side) -> Result<bool, SyntaxError> {
    let (s, _) = mrp_term(t)?;
    Ok(good_string(&s, side))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TypeAParts {
    pub phi: ModalString,
    pub alpha: ModalString,
    pub psi: ModalString,
    pub chi: BlockDecomposition,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TypeBParts {
    pub phi: ModalString,
    pub zeta: BlockDecomposition,
    pub psi: ModalString,
    pub delta: ModalString,
}

impl TypeAParts {
    pub fn reconstruct(&self) -> (ModalString, ModalString) {
        (self.phi.concat(&self.alpha), self.psi.concat(&self.chi.flatten()))
    }
}

impl TypeBParts {
    pub fn reconstruct(&self) -> (ModalString, ModalString) {
        (self.phi.concat(&self.zeta.flatten()), self.psi.concat(&self.delta))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum MrpClassification {
    TypeA(TypeAParts),
    TypeB(TypeBParts),
    Analytic { a: TypeAParts, b: TypeBParts },
    NotSahlqvist,
}

impl MrpClassification {
    pub fn type_a(&self) -> Option<&TypeAParts> {
        match self {
            MrpClassification::TypeA(a) | MrpClassification::Analytic { a, .. } => Some(a),
            _ => None,
        }
    }

    pub fn type_b(&self) -> Option<&TypeBParts> {
        match self {
            MrpClassification::TypeB(b) | MrpClassification::Analytic { b, .. } => Some(b),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            MrpClassification::TypeA(_) => "inductive type (a)",
            MrpClassification::TypeB(_) => "inductive type (b)",
            MrpClassification::Analytic { .. } => "analytic inductive",
            MrpClassification::NotSahlqvist => "not Sahlqvist",
        }
    }
}

fn type_a_parts(s: &ModalString, t: &ModalString) -> TypeAParts {
    let (phi, alpha) = s.split_prefix(Modality::is_diamond);
    let (psi, chi) = t.split_prefix(Modality::is_box);
    let chi = BlockDecomposition::new(&chi, Polarity::Diamond).expect("rest starts with a diamond");
    TypeAParts { phi, alpha, psi, chi }
}

fn type_b_parts(s: &ModalString, t: &ModalString) -> TypeBParts {
    let (phi, zeta) = s.split_prefix(Modality::is_diamond);
    let (psi, delta) = t.split_prefix(Modality::is_box);
    let zeta = BlockDecomposition::new(&zeta, Polarity::Box).expect("rest starts with a box");
    TypeBParts { phi, zeta, psi, delta }
}

pub fn classify(mrp: &Mrp) -> MrpClassification {
    let left = good_string(&mrp.lhs, Side::Left);
    let right = good_string(&mrp.rhs, Side::Right);
    match (left, right) {
        (true, true) => MrpClassification::Analytic {
            a: type_a_parts(&mrp.lhs, &mrp.rhs),
            b: type_b_parts(&mrp.lhs, &mrp.rhs),
        },
        (true, false) => MrpClassification::TypeA(type_a_parts(&mrp.lhs, &mrp.rhs)),
        (false, true) => MrpClassification::TypeB(type_b_parts(&mrp.lhs, &mrp.rhs)),
        (false, false) => MrpClassification::NotSahlqvist,
    }
}

pub fn classify_mrp(s: &Formula, t: &Formula) -> Result<MrpClassification, SyntaxError> {
    let mrp = Mrp::from_sequent(&Sequent { lhs: s.clone(), rhs: t.clone() })?;
    Ok(classify(&mrp))
}

/// LA on a box string (□ to ⧫) or RA on a diamond string (◇ to ■).
pub fn adjoint_string(theta: &ModalString, side: Side) -> Result<ModalString, SyntaxError> {
    match side {
        Side::Left => {
            if theta.0.iter().any(|m| *m != Modality::Box) {
                return Err(SyntaxError::MixedString(theta.clone(), "box"));
            }
            Ok(ModalString::repeat(Modality::BlackDia, theta.len()))
        }
        Side::Right => {
            if theta.0.iter().any(|m| *m != Modality::Dia) {
                return Err(SyntaxError::MixedString(theta.clone(), "diamond"));
            }
            Ok(ModalString::repeat(Modality::BlackBox, theta.len()))
        }
    }
}

pub fn left_adjoint(theta: &ModalString) -> ModalString {
    adjoint_string(theta, Side::Left).expect("box string")
}

pub fn right_adjoint(theta: &ModalString) -> ModalString {
    adjoint_string(theta, Side::Right).expect("diamond string")
}
