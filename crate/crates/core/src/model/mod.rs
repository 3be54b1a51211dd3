//! Concrete syntax for models: a signature followed by one interaction.
//!
//! ```text
//! lifelines l1 l2;
//! messages m;
//! seq(l1!m, l2?m)        # comments run to the end of the line
//! ```
//!
//! `strict`, `seq`, `alt` and `par` take two or more operands and nest to the
//! right. `seq` and `par` are read as co-regions over no lifeline and over
//! every lifeline.

pub mod locks;

use std::fmt;

use thiserror::Error;

use crate::interaction::{Interaction, LifelineSet, Signature, SignatureError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model {
    pub signature: Signature,
    pub interaction: Interaction,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{pos}: expected {expected}, found {found}")]
    Syntax {
        pos: Pos,
        expected: String,
        found: String,
    },
    #[error("{pos}: {source}")]
    Name {
        pos: Pos,
        #[source]
        source: SignatureError,
    },
    #[error("{pos}: actions need at least one lifeline and one message")]
    DegenerateAlphabet { pos: Pos },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Zero,
    Bang,
    Query,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Semi,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Zero => f.write_str("`0`"),
            Tok::Bang => f.write_str("`!`"),
            Tok::Query => f.write_str("`?`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::LBracket => f.write_str("`[`"),
            Tok::RBracket => f.write_str("`]`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Semi => f.write_str("`;`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1, 1);
    while let Some(&c) = chars.peek() {
        let pos = Pos { line, column };
        if c == '\n' {
            chars.next();
            line += 1;
            column = 1;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            column += 1;
            continue;
        }
        if c == '#' {
            while chars.peek().is_some_and(|&c| c != '\n') {
                chars.next();
            }
            continue;
        }
        if c.is_ascii_alphanumeric() || c == '_' {
            let mut word = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_ascii_alphanumeric() || c == '_' {
                    word.push(c);
                    chars.next();
                    column += 1;
                } else {
                    break;
                }
            }
            let tok = if word == "0" {
                Tok::Zero
            } else if word.starts_with(|c: char| c.is_ascii_digit()) {
                return Err(ParseError::Syntax {
                    pos,
                    expected: "an identifier or `0`".into(),
                    found: format!("`{word}`"),
                });
            } else {
                Tok::Ident(word)
            };
            out.push((tok, pos));
            continue;
        }
        let tok = match c {
            '!' => Tok::Bang,
            '?' => Tok::Query,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            ',' => Tok::Comma,
            ';' => Tok::Semi,
            other => {
                return Err(ParseError::Syntax {
                    pos,
                    expected: "a token".into(),
                    found: format!("`{other}`"),
                })
            }
        };
        chars.next();
        column += 1;
        out.push((tok, pos));
    }
    out.push((Tok::Eof, Pos { line, column }));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    sig: Option<&'a Signature>,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn error<T>(&self, expected: &str) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            pos: self.pos(),
            expected: expected.into(),
            found: self.peek().to_string(),
        })
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.error(&tok.to_string())
        }
    }

    fn keyword(&mut self, word: &str) -> Result<(), ParseError> {
        match self.peek() {
            Tok::Ident(s) if s == word => {
                self.bump();
                Ok(())
            }
            _ => self.error(&format!("`{word}`")),
        }
    }

    fn names_until_semi(&mut self) -> Result<Vec<(String, Pos)>, ParseError> {
        let mut names = Vec::new();
        loop {
            match self.bump() {
                (Tok::Ident(s), p) => names.push((s, p)),
                (Tok::Semi, _) => return Ok(names),
                _ => {
                    self.at -= 1;
                    return self.error("a name or `;`");
                }
            }
        }
    }

    fn signature(&mut self) -> Result<Signature, ParseError> {
        self.keyword("lifelines")?;
        let lifelines = self.names_until_semi()?;
        self.keyword("messages")?;
        let messages = self.names_until_semi()?;
        let at = |names: &[(String, Pos)], bad: &str| {
            names
                .iter()
                .filter(|(n, _)| n == bad)
                .map(|(_, p)| *p)
                .nth(1)
                .or_else(|| names.iter().find(|(n, _)| n == bad).map(|(_, p)| *p))
        };
        Signature::new(
            lifelines.iter().map(|(n, _)| n.clone()),
            messages.iter().map(|(n, _)| n.clone()),
        )
        .map_err(|source| {
            let name = match &source {
                SignatureError::InvalidName { name, .. }
                | SignatureError::Duplicate { name, .. } => name.clone(),
                _ => String::new(),
            };
            let pos = at(&lifelines, &name)
                .or_else(|| at(&messages, &name))
                .unwrap_or(Pos { line: 1, column: 1 });
            ParseError::Name { pos, source }
        })
    }

    fn sig(&self) -> &Signature {
        self.sig.expect("signature parsed first")
    }

    fn name_error(&self, pos: Pos, source: SignatureError) -> ParseError {
        ParseError::Name { pos, source }
    }

    fn interaction(&mut self) -> Result<Interaction, ParseError> {
        let (tok, pos) = self.bump();
        match tok {
            Tok::Zero => Ok(Interaction::Empty),
            Tok::Ident(word) => match word.as_str() {
                "strict" | "seq" | "alt" | "par" => {
                    let items = self.operands(2)?;
                    let all = self.sig().all_lifelines();
                    Ok(match word.as_str() {
                        "strict" => Interaction::fold_right(items, Interaction::strict),
                        "seq" => Interaction::fold_right(items, Interaction::seq),
                        "alt" => Interaction::fold_right(items, Interaction::alt),
                        _ => Interaction::fold_right(items, |l, r| Interaction::par(all, l, r)),
                    })
                }
                "loopS" => {
                    let mut items = self.operands(1)?;
                    if items.len() != 1 {
                        return Err(ParseError::Syntax {
                            pos,
                            expected: "exactly one operand for `loopS`".into(),
                            found: format!("{} operands", items.len()),
                        });
                    }
                    Ok(Interaction::loop_s(items.remove(0)))
                }
                "coreg" => {
                    self.expect(Tok::LBracket)?;
                    let mut set = LifelineSet::EMPTY;
                    loop {
                        match self.bump() {
                            (Tok::RBracket, _) => break,
                            (Tok::Ident(name), p) => {
                                let id = self.sig().lifeline_id(&name).ok_or_else(|| {
                                    self.name_error(p, SignatureError::UnknownLifeline(name))
                                })?;
                                set = set.with(id);
                                if *self.peek() == Tok::Comma {
                                    self.bump();
                                }
                            }
                            _ => {
                                self.at -= 1;
                                return self.error("a lifeline or `]`");
                            }
                        }
                    }
                    let mut items = self.operands(2)?;
                    if items.len() != 2 {
                        return Err(ParseError::Syntax {
                            pos,
                            expected: "exactly two operands for `coreg`".into(),
                            found: format!("{} operands", items.len()),
                        });
                    }
                    let right = items.pop().expect("two items");
                    let left = items.pop().expect("two items");
                    Ok(Interaction::coreg(set, left, right))
                }
                _ => self.action(word, pos),
            },
            _ => {
                self.at -= 1;
                self.error("an interaction")
            }
        }
    }

    fn action(&mut self, lifeline: String, pos: Pos) -> Result<Interaction, ParseError> {
        let direction = match self.peek() {
            Tok::Bang => '!',
            Tok::Query => '?',
            _ => return self.error("`!` or `?`"),
        };
        self.bump();
        let message = match self.bump() {
            (Tok::Ident(m), _) => m,
            _ => {
                self.at -= 1;
                return self.error("a message name");
            }
        };
        let sig = self.sig();
        if sig.lifelines().is_empty() || sig.messages().is_empty() {
            return Err(ParseError::DegenerateAlphabet { pos });
        }
        sig.parse_action(&format!("{lifeline}{direction}{message}"))
            .map(Interaction::act)
            .map_err(|source| self.name_error(pos, source))
    }

    fn operands(&mut self, min: usize) -> Result<Vec<Interaction>, ParseError> {
        self.expect(Tok::LParen)?;
        let mut items = vec![self.interaction()?];
        while *self.peek() == Tok::Comma {
            self.bump();
            items.push(self.interaction()?);
        }
        if items.len() < min {
            return self.error("`,`");
        }
        self.expect(Tok::RParen)?;
        Ok(items)
    }
}

/// Parses a whole model file.
pub fn parse_model(text: &str) -> Result<Model, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
        sig: None,
    };
    let signature = p.signature()?;
    let rest = Parser {
        toks: p.toks.split_off(p.at),
        at: 0,
        sig: Some(&signature),
    };
    let mut p = rest;
    let interaction = p.interaction()?;
    p.expect(Tok::Eof)?;
    Ok(Model {
        signature,
        interaction,
    })
}

/// Parses an interaction against an existing signature.
pub fn parse_interaction(sig: &Signature, text: &str) -> Result<Interaction, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
        sig: Some(sig),
    };
    let i = p.interaction()?;
    p.expect(Tok::Eof)?;
    Ok(i)
}

fn op_name(sig: &Signature, i: &Interaction) -> Option<&'static str> {
    match i {
        Interaction::Strict(..) => Some("strict"),
        Interaction::Alt(..) => Some("alt"),
        Interaction::CoReg(l, ..) if l.is_empty() => Some("seq"),
        Interaction::CoReg(l, ..) if *l == sig.all_lifelines() => Some("par"),
        _ => None,
    }
}

fn write_term(sig: &Signature, i: &Interaction, out: &mut String) {
    match i {
        Interaction::Empty => out.push('0'),
        Interaction::Act(a) => out.push_str(&sig.action_name(*a)),
        Interaction::LoopS(body) => {
            out.push_str("loopS(");
            write_term(sig, body, out);
            out.push(')');
        }
        Interaction::Strict(l, r) | Interaction::Alt(l, r) | Interaction::CoReg(_, l, r) => {
            match op_name(sig, i) {
                Some(name) => {
                    out.push_str(name);
                    out.push('(');
                    write_term(sig, l, out);
                    // flatten the right spine of the same operator
                    let mut right = r;
                    while op_name(sig, right) == Some(name) && same_set(i, right) {
                        let (Interaction::Strict(a, b)
                        | Interaction::Alt(a, b)
                        | Interaction::CoReg(_, a, b)) = &**right
                        else {
                            unreachable!()
                        };
                        out.push_str(", ");
                        write_term(sig, a, out);
                        right = b;
                    }
                    out.push_str(", ");
                    write_term(sig, right, out);
                    out.push(')');
                }
                None => {
                    let Interaction::CoReg(set, ..) = i else {
                        unreachable!()
                    };
                    out.push_str("coreg[");
                    let names: Vec<&str> = set.iter().map(|id| sig.lifeline_name(id)).collect();
                    out.push_str(&names.join(", "));
                    out.push_str("](");
                    write_term(sig, l, out);
                    out.push_str(", ");
                    write_term(sig, r, out);
                    out.push(')');
                }
            }
        }
    }
}

fn same_set(a: &Interaction, b: &Interaction) -> bool {
    match (a, b) {
        (Interaction::CoReg(x, ..), Interaction::CoReg(y, ..)) => x == y,
        _ => true,
    }
}

/// Renders a term in the concrete syntax; `parse_interaction` reads it back.
pub fn print_term(sig: &Signature, i: &Interaction) -> String {
    let mut out = String::new();
    write_term(sig, i, &mut out);
    out
}

/// Renders a whole model file.
pub fn print_model(model: &Model) -> String {
    let sig = &model.signature;
    let mut out = String::from("lifelines");
    for l in sig.lifelines() {
        out.push(' ');
        out.push_str(l);
    }
    out.push_str(";\nmessages");
    for m in sig.messages() {
        out.push(' ');
        out.push_str(m);
    }
    out.push_str(";\n");
    out.push_str(&print_term(sig, &model.interaction));
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_action() {
        let m = parse_model("lifelines l1; messages m; l1!m").unwrap();
        let a = m.signature.parse_action("l1!m").unwrap();
        assert_eq!(m.interaction, Interaction::act(a));
    }

    #[test]
    fn running_example_round_trips() {
        let text = "lifelines l1 l2 l3;\nmessages m1 m2 m3;\n\
                    coreg[l2](strict(l1!m1, l2?m1), seq(l3!m2, strict(l3!m3, l2?m3)))\n";
        let m = parse_model(text).unwrap();
        assert_eq!(print_model(&m), text);
        assert_eq!(parse_model(&print_model(&m)).unwrap(), m);
    }

    #[test]
    fn nary_nests_right() {
        let m = parse_model("lifelines a; messages x y z; alt(a!x, a!y, a!z)").unwrap();
        let s = &m.signature;
        let act = |t| Interaction::act(s.parse_action(t).unwrap());
        assert_eq!(
            m.interaction,
            Interaction::alt(act("a!x"), Interaction::alt(act("a!y"), act("a!z")))
        );
        assert_eq!(print_term(s, &m.interaction), "alt(a!x, a!y, a!z)");
    }

    #[test]
    fn par_and_seq_are_coregions() {
        let m = parse_model("lifelines a b; messages x; par(a!x, seq(b!x, 0))").unwrap();
        let Interaction::CoReg(all, _, r) = &m.interaction else {
            panic!()
        };
        assert_eq!(*all, m.signature.all_lifelines());
        assert!(matches!(&**r, Interaction::CoReg(s, ..) if s.is_empty()));
    }

    #[test]
    fn syntax_error_at_end_of_input() {
        let err = parse_model("lifelines a; messages m; seq(a!m, 0").unwrap_err();
        assert!(
            matches!(&err, ParseError::Syntax { found, .. } if found == "end of input"),
            "{err}"
        );
    }

    #[test]
    fn undeclared_names_are_reported_with_position() {
        let err = parse_model("lifelines a; messages m;\nstrict(a!m, b?m)").unwrap_err();
        assert_eq!(
            err,
            ParseError::Name {
                pos: Pos {
                    line: 2,
                    column: 13
                },
                source: SignatureError::UnknownLifeline("b".into())
            }
        );
    }

    #[test]
    fn degenerate_alphabet() {
        assert!(parse_model("lifelines; messages; loopS(0)").is_ok());
        assert!(matches!(
            parse_model("lifelines a; messages; a!m"),
            Err(ParseError::DegenerateAlphabet { .. })
        ));
    }

    #[test]
    fn comments_are_ignored() {
        let m = parse_model("# header\nlifelines a; # l\nmessages m;\na!m # tail\n").unwrap();
        assert!(matches!(m.interaction, Interaction::Act(_)));
    }
}
