//! Parsing for monoid presentations, element expressions, and Cayley tables.
//!
//! Presentation syntax (`.cmon`):
//! - `gens a b;` declares generators; their order fixes coordinate order
//! - `rel 3 a = a + b;` adds one relation per statement
//! - expressions are `term (+ term)*`; a term is `[uint [*]] ident` or `0`
//! - `#` starts a comment running to end of line
//!
//! Cayley syntax (`.ctab`): JSON `{"elements": [...], "zero": "...", "table": [[...]]}`.
//! Structural checks (range, identity, symmetry) happen here; associativity is
//! verified by the finite module.

use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;

/// Exponent vector over the generators of a presentation: the formal sum
/// `sum coords[i] * gen[i]` in the free commutative monoid.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExponentVector(pub Vec<u64>);

impl ExponentVector {
    pub fn zero(k: usize) -> Self {
        ExponentVector(vec![0; k])
    }

    pub fn unit(k: usize, i: usize) -> Self {
        let mut v = vec![0; k];
        v[i] = 1;
        ExponentVector(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// Total degree (sum of coordinates).
    pub fn degree(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.len(), other.len());
        ExponentVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise divisibility: `self <= other` in every coordinate.
    pub fn divides(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other - self`, defined only when `self` divides `other`.
    pub fn sub_from(&self, other: &Self) -> Self {
        debug_assert!(self.divides(other));
        ExponentVector(self.0.iter().zip(&other.0).map(|(a, b)| b - a).collect())
    }

    pub fn scale(&self, k: u64) -> Self {
        ExponentVector(self.0.iter().map(|c| c * k).collect())
    }

    /// Componentwise maximum (the overlap of two rule left sides).
    pub fn join(&self, other: &Self) -> Self {
        ExponentVector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| (*a).max(*b))
                .collect(),
        )
    }
}

/// Degree-lexicographic order, ties broken by generator index (earlier
/// coordinates more significant). This is the admissible well-order used
/// for orienting rules and sorting windows.
impl Ord for ExponentVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for ExponentVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// A finitely presented commutative monoid: named generators plus relations
/// between exponent vectors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonoidPresentation {
    pub name: String,
    pub generators: Vec<String>,
    pub relations: Vec<(ExponentVector, ExponentVector)>,
}

impl MonoidPresentation {
    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    /// Largest total degree appearing on any relation side.
    pub fn max_relation_degree(&self) -> u64 {
        self.relations
            .iter()
            .map(|(u, v)| u.degree().max(v.degree()))
            .max()
            .unwrap_or(0)
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g == name)
    }

    /// Canonical DSL text; parsing it back yields an identical presentation.
    pub fn to_dsl(&self) -> String {
        let mut out = String::new();
        out.push_str("gens ");
        out.push_str(&self.generators.join(" "));
        out.push_str(";\n");
        for (u, v) in &self.relations {
            out.push_str(&format!(
                "rel {} = {};\n",
                pretty_element(u, self),
                pretty_element(v, self)
            ));
        }
        out
    }
}

/// Render an exponent vector as a DSL expression (`2 a + b`, or `0`).
pub fn pretty_element(v: &ExponentVector, p: &MonoidPresentation) -> String {
    let mut parts = Vec::new();
    for (i, &c) in v.0.iter().enumerate() {
        match c {
            0 => {}
            1 => parts.push(p.generators[i].clone()),
            c => parts.push(format!("{} {}", c, p.generators[i])),
        }
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ")
    }
}

/// Structurally validated Cayley table document. Indices refer into `labels`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CayleyDocument {
    pub labels: Vec<String>,
    pub zero: usize,
    pub table: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("{line}:{col}: syntax error: {msg}")]
    Syntax {
        line: usize,
        col: usize,
        msg: String,
    },
    #[error("{line}:{col}: unknown generator `{name}`")]
    UnknownGenerator {
        line: usize,
        col: usize,
        name: String,
    },
    #[error("{line}:{col}: negative coefficient")]
    NegativeCoefficient { line: usize, col: usize },
    #[error("{line}:{col}: non-integer coefficient")]
    NonIntegerCoefficient { line: usize, col: usize },
    #[error("duplicate generator `{name}`")]
    DuplicateGenerator { name: String },
    #[error("cayley document: {0}")]
    Cayley(String),
}

/// Diagnostics that do not abort parsing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseWarning {
    /// A relation with identical sides was dropped.
    TrivialRelationDropped { line: usize },
}

impl fmt::Display for ParseWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseWarning::TrivialRelationDropped { line } => {
                write!(f, "line {line}: trivial relation (equal sides) dropped")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Uint(u64),
    Semi,
    Eq,
    Plus,
    Star,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut toks = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                chars.next();
                col += 1;
            }
            '#' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                    col += 1;
                }
            }
            ';' => {
                toks.push(Spanned {
                    tok: Tok::Semi,
                    line,
                    col,
                });
                chars.next();
                col += 1;
            }
            '=' => {
                toks.push(Spanned {
                    tok: Tok::Eq,
                    line,
                    col,
                });
                chars.next();
                col += 1;
            }
            '+' => {
                toks.push(Spanned {
                    tok: Tok::Plus,
                    line,
                    col,
                });
                chars.next();
                col += 1;
            }
            '*' => {
                toks.push(Spanned {
                    tok: Tok::Star,
                    line,
                    col,
                });
                chars.next();
                col += 1;
            }
            '-' => {
                return Err(ParseError::NegativeCoefficient { line, col });
            }
            c if c.is_ascii_digit() => {
                let start_col = col;
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_digit() {
                        s.push(c);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                if chars.peek() == Some(&'.') {
                    return Err(ParseError::NonIntegerCoefficient {
                        line,
                        col: start_col,
                    });
                }
                let n: u64 = s.parse().map_err(|_| ParseError::Syntax {
                    line,
                    col: start_col,
                    msg: format!("coefficient `{s}` out of range"),
                })?;
                toks.push(Spanned {
                    tok: Tok::Uint(n),
                    line,
                    col: start_col,
                });
            }
            c if c.is_alphabetic() || c == '_' => {
                let start_col = col;
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_alphanumeric() || c == '_' || c == '\'' {
                        s.push(c);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                toks.push(Spanned {
                    tok: Tok::Ident(s),
                    line,
                    col: start_col,
                });
            }
            c => {
                return Err(ParseError::Syntax {
                    line,
                    col,
                    msg: format!("unexpected character `{c}`"),
                });
            }
        }
    }
    Ok(toks)
}

struct Parser<'a> {
    toks: &'a [Spanned],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Spanned> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<&Spanned> {
        let t = self.toks.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn err_here(&self, msg: &str) -> ParseError {
        match self.peek() {
            Some(s) => ParseError::Syntax {
                line: s.line,
                col: s.col,
                msg: msg.to_string(),
            },
            None => {
                let (line, col) = self
                    .toks
                    .last()
                    .map(|s| (s.line, s.col + 1))
                    .unwrap_or((1, 1));
                ParseError::Syntax {
                    line,
                    col,
                    msg: format!("{msg} (unexpected end of input)"),
                }
            }
        }
    }

    fn expect(&mut self, want: &Tok, what: &str) -> Result<(), ParseError> {
        match self.peek() {
            Some(s) if &s.tok == want => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.err_here(&format!("expected {what}"))),
        }
    }

    /// `expr := term (+ term)*` accumulated into a vector of length k.
    fn expr(&mut self, gens: &[String]) -> Result<ExponentVector, ParseError> {
        let mut acc = ExponentVector::zero(gens.len());
        self.term(gens, &mut acc)?;
        while matches!(self.peek().map(|s| &s.tok), Some(Tok::Plus)) {
            self.pos += 1;
            self.term(gens, &mut acc)?;
        }
        Ok(acc)
    }

    fn term(&mut self, gens: &[String], acc: &mut ExponentVector) -> Result<(), ParseError> {
        let spanned = match self.next() {
            Some(s) => s.clone(),
            None => return Err(self.err_here("expected term")),
        };
        match spanned.tok {
            Tok::Uint(0) => {
                // bare zero term; optionally `0 * g` / `0 g` also mean zero
                match self.peek().map(|s| s.tok.clone()) {
                    Some(Tok::Star) => {
                        self.pos += 1;
                        self.ident(gens)?;
                    }
                    Some(Tok::Ident(_)) => {
                        self.ident(gens)?;
                    }
                    _ => {}
                }
                Ok(())
            }
            Tok::Uint(n) => {
                if matches!(self.peek().map(|s| &s.tok), Some(Tok::Star)) {
                    self.pos += 1;
                }
                let idx = self.ident(gens)?;
                acc.0[idx] = acc.0[idx].checked_add(n).ok_or(ParseError::Syntax {
                    line: spanned.line,
                    col: spanned.col,
                    msg: "coefficient overflow".to_string(),
                })?;
                Ok(())
            }
            Tok::Ident(name) => {
                let idx =
                    gens.iter()
                        .position(|g| g == &name)
                        .ok_or(ParseError::UnknownGenerator {
                            line: spanned.line,
                            col: spanned.col,
                            name,
                        })?;
                acc.0[idx] += 1;
                Ok(())
            }
            _ => Err(ParseError::Syntax {
                line: spanned.line,
                col: spanned.col,
                msg: "expected term".to_string(),
            }),
        }
    }

    fn ident(&mut self, gens: &[String]) -> Result<usize, ParseError> {
        let spanned = match self.next() {
            Some(s) => s.clone(),
            None => return Err(self.err_here("expected generator")),
        };
        match spanned.tok {
            Tok::Ident(name) => {
                gens.iter()
                    .position(|g| g == &name)
                    .ok_or(ParseError::UnknownGenerator {
                        line: spanned.line,
                        col: spanned.col,
                        name,
                    })
            }
            _ => Err(ParseError::Syntax {
                line: spanned.line,
                col: spanned.col,
                msg: "expected generator".to_string(),
            }),
        }
    }
}

/// Parse a presentation document. Trivial relations (equal sides) are dropped
/// and reported as warnings rather than errors.
pub fn parse_presentation(
    text: &str,
) -> Result<(MonoidPresentation, Vec<ParseWarning>), ParseError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks: &toks,
        pos: 0,
    };

    match p.next().map(|s| s.tok.clone()) {
        Some(Tok::Ident(kw)) if kw == "gens" => {}
        _ => {
            p.pos = p.pos.saturating_sub(1);
            return Err(p.err_here("expected `gens`"));
        }
    }
    let mut gens: Vec<String> = Vec::new();
    loop {
        match p.peek().cloned() {
            Some(Spanned {
                tok: Tok::Ident(name),
                ..
            }) => {
                p.pos += 1;
                if gens.contains(&name) {
                    return Err(ParseError::DuplicateGenerator { name });
                }
                gens.push(name);
            }
            Some(Spanned { tok: Tok::Semi, .. }) => {
                p.pos += 1;
                break;
            }
            _ => return Err(p.err_here("expected generator name or `;`")),
        }
    }
    if gens.is_empty() {
        return Err(ParseError::Syntax {
            line: 1,
            col: 1,
            msg: "a presentation needs at least one generator".to_string(),
        });
    }

    let mut relations = Vec::new();
    let mut warnings = Vec::new();
    while let Some(s) = p.peek().cloned() {
        match s.tok {
            Tok::Ident(kw) if kw == "rel" => {
                p.pos += 1;
                let lhs = p.expr(&gens)?;
                p.expect(&Tok::Eq, "`=`")?;
                let rhs = p.expr(&gens)?;
                p.expect(&Tok::Semi, "`;`")?;
                if lhs == rhs {
                    warnings.push(ParseWarning::TrivialRelationDropped { line: s.line });
                } else {
                    relations.push((lhs, rhs));
                }
            }
            _ => return Err(p.err_here("expected `rel` statement")),
        }
    }

    Ok((
        MonoidPresentation {
            name: String::new(),
            generators: gens,
            relations,
        },
        warnings,
    ))
}

/// Parse a single element expression against a presentation.
pub fn parse_element(text: &str, p: &MonoidPresentation) -> Result<ExponentVector, ParseError> {
    let toks = lex(text)?;
    let mut parser = Parser {
        toks: &toks,
        pos: 0,
    };
    let v = parser.expr(&p.generators)?;
    if parser.peek().is_some() {
        return Err(parser.err_here("trailing input after expression"));
    }
    Ok(v)
}

#[derive(Deserialize)]
struct CayleyJson {
    elements: Vec<String>,
    zero: String,
    table: Vec<Vec<String>>,
}

/// Parse and structurally validate a Cayley table document.
pub fn parse_cayley(text: &str) -> Result<CayleyDocument, ParseError> {
    let doc: CayleyJson =
        serde_json::from_str(text).map_err(|e| ParseError::Cayley(e.to_string()))?;
    let n = doc.elements.len();
    if n == 0 {
        return Err(ParseError::Cayley("empty element list".to_string()));
    }
    for (i, a) in doc.elements.iter().enumerate() {
        if doc.elements[..i].contains(a) {
            return Err(ParseError::Cayley(format!("duplicate element label `{a}`")));
        }
    }
    let index = |label: &str| -> Result<usize, ParseError> {
        doc.elements
            .iter()
            .position(|e| e == label)
            .ok_or_else(|| ParseError::Cayley(format!("unknown element label `{label}`")))
    };
    let zero = index(&doc.zero)?;
    if doc.table.len() != n {
        return Err(ParseError::Cayley(format!(
            "table has {} rows, expected {n}",
            doc.table.len()
        )));
    }
    let mut table = Vec::with_capacity(n);
    for (i, row) in doc.table.iter().enumerate() {
        if row.len() != n {
            return Err(ParseError::Cayley(format!(
                "ragged table: row {i} has {} entries, expected {n}",
                row.len()
            )));
        }
        let mut out = Vec::with_capacity(n);
        for cell in row {
            out.push(index(cell)?);
        }
        table.push(out);
    }
    for i in 0..n {
        if table[zero][i] != i || table[i][zero] != i {
            return Err(ParseError::Cayley(format!(
                "identity axiom violated at `{}`",
                doc.elements[i]
            )));
        }
    }
    for i in 0..n {
        for j in 0..n {
            if table[i][j] != table[j][i] {
                return Err(ParseError::Cayley(format!(
                    "asymmetric table at (`{}`, `{}`)",
                    doc.elements[i], doc.elements[j]
                )));
            }
        }
    }
    Ok(CayleyDocument {
        labels: doc.elements,
        zero,
        table,
    })
}

impl CayleyDocument {
    /// Serialize back to the `.ctab` JSON format.
    pub fn to_json(&self) -> String {
        let doc = serde_json::json!({
            "elements": self.labels,
            "zero": self.labels[self.zero],
            "table": self.table.iter()
                .map(|row| row.iter().map(|&e| self.labels[e].clone()).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        });
        serde_json::to_string_pretty(&doc).expect("cayley document serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(coords: &[u64]) -> ExponentVector {
        ExponentVector(coords.to_vec())
    }

    #[test]
    fn parses_two_generator_presentation() {
        let (p, warns) = parse_presentation("gens a b; rel 3 a = a + b; rel 4 a = 2 b;").unwrap();
        assert_eq!(p.generators, vec!["a", "b"]);
        assert_eq!(
            p.relations,
            vec![(ev(&[3, 0]), ev(&[1, 1])), (ev(&[4, 0]), ev(&[0, 2]))]
        );
        assert!(warns.is_empty());
    }

    #[test]
    fn parses_single_relation() {
        let (p, _) = parse_presentation("gens a b; rel a + b = a;").unwrap();
        assert_eq!(p.relations, vec![(ev(&[1, 1]), ev(&[1, 0]))]);
    }

    #[test]
    fn drops_trivial_relation_with_warning() {
        let (p, warns) = parse_presentation("gens a; rel a = a;").unwrap();
        assert!(p.relations.is_empty());
        assert_eq!(warns.len(), 1);
    }

    #[test]
    fn element_expressions() {
        let (p, _) = parse_presentation("gens a b; rel 3 a = a + b;").unwrap();
        assert_eq!(parse_element("2a + b", &p).unwrap(), ev(&[2, 1]));
        assert_eq!(parse_element("0", &p).unwrap(), ev(&[0, 0]));
        assert_eq!(parse_element("5 a", &p).unwrap(), ev(&[5, 0]));
        assert_eq!(parse_element("2*a + 3*b", &p).unwrap(), ev(&[2, 3]));
    }

    #[test]
    fn rejects_unknown_generator() {
        let (p, _) = parse_presentation("gens a; rel 2 a = a;").unwrap();
        assert!(matches!(
            parse_element("c", &p),
            Err(ParseError::UnknownGenerator { .. })
        ));
        assert!(parse_presentation("gens a; rel a = b;").is_err());
    }

    #[test]
    fn rejects_negative_and_fractional_coefficients() {
        assert!(matches!(
            parse_presentation("gens a; rel -1 a = a;"),
            Err(ParseError::NegativeCoefficient { .. })
        ));
        assert!(matches!(
            parse_presentation("gens a; rel 1.5 a = a;"),
            Err(ParseError::NonIntegerCoefficient { .. })
        ));
    }

    #[test]
    fn rejects_duplicate_generator() {
        assert!(matches!(
            parse_presentation("gens a a;"),
            Err(ParseError::DuplicateGenerator { .. })
        ));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let err = parse_presentation("gens a;\nrel a = ;").unwrap_err();
        match err {
            ParseError::Syntax { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn comments_are_skipped() {
        let (p, _) =
            parse_presentation("# header\ngens a b; # trailing\nrel a + b = a;\n").unwrap();
        assert_eq!(p.relations.len(), 1);
    }

    #[test]
    fn presentation_round_trips_through_dsl() {
        let (p, _) = parse_presentation("gens a b; rel 3 a = a + b; rel 4 a = 2 b;").unwrap();
        let (q, _) = parse_presentation(&p.to_dsl()).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn cayley_three_element_table() {
        let doc = parse_cayley(
            r#"{"elements": ["0","a","2a"], "zero": "0",
                "table": [["0","a","2a"],["a","2a","a"],["2a","a","2a"]]}"#,
        )
        .unwrap();
        assert_eq!(doc.zero, 0);
        assert_eq!(doc.table[1][1], 2);
        assert_eq!(doc.table[2][1], 1);
    }

    #[test]
    fn cayley_trivial_table() {
        let doc = parse_cayley(r#"{"elements": ["0"], "zero": "0", "table": [["0"]]}"#).unwrap();
        assert_eq!(doc.labels.len(), 1);
    }

    #[test]
    fn cayley_rejects_identity_violation() {
        let err =
            parse_cayley(r#"{"elements": ["0","a"], "zero": "0", "table": [["0","0"],["0","a"]]}"#)
                .unwrap_err();
        assert!(err.to_string().contains("identity axiom violated"));
    }

    #[test]
    fn cayley_rejects_unknown_labels() {
        let err =
            parse_cayley(r#"{"elements": ["0","a"], "zero": "0", "table": [["0","a"],["a","q"]]}"#)
                .unwrap_err();
        assert!(err.to_string().contains("unknown element label"));
    }

    #[test]
    fn cayley_rejects_ragged_and_asymmetric() {
        assert!(parse_cayley(
            r#"{"elements": ["0","a"], "zero": "0", "table": [["0","a"],["a"]]}"#
        )
        .unwrap_err()
        .to_string()
        .contains("ragged"));
        assert!(parse_cayley(
            r#"{"elements": ["0","a","b"], "zero": "0",
                "table": [["0","a","b"],["a","b","0"],["b","a","0"]]}"#
        )
        .unwrap_err()
        .to_string()
        .contains("asymmetric"));
    }
}
