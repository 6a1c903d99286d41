use super::{is_variable_name, Formula, Var};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{line}:{column}: unexpected {found}; expected {}", .expected.join(", "))]
    Syntax {
        line: usize,
        column: usize,
        found: String,
        expected: Vec<String>,
    },
    #[error("letter `{letter}` is used with arity {first} and with arity {second}")]
    ArityConflict {
        letter: String,
        first: usize,
        second: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    LParen,
    RParen,
    Comma,
    Not,
    And,
    Or,
    Implies,
    Iff,
    Box,
    Diamond,
    Forall,
    Exists,
    True,
    False,
    Equals,
    Ident(String),
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Not => "`~`".into(),
            Tok::And => "`&`".into(),
            Tok::Or => "`|`".into(),
            Tok::Implies => "`->`".into(),
            Tok::Iff => "`<->`".into(),
            Tok::Box => "`[]`".into(),
            Tok::Diamond => "`<>`".into(),
            Tok::Forall => "`forall`".into(),
            Tok::Exists => "`exists`".into(),
            Tok::True => "`true`".into(),
            Tok::False => "`false`".into(),
            Tok::Equals => "`=`".into(),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut column) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col) = (line, column);
        let mut push = |tok: Tok, len: usize, i: &mut usize, column: &mut usize| {
            out.push(Spanned {
                tok,
                line: start_line,
                column: start_col,
            });
            *i += len;
            *column += len;
        };
        let rest: String = chars[i..chars.len().min(i + 3)].iter().collect();
        match c {
            '\n' => {
                i += 1;
                line += 1;
                column = 1;
            }
            c if c.is_whitespace() => {
                i += 1;
                column += 1;
            }
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '(' => push(Tok::LParen, 1, &mut i, &mut column),
            ')' => push(Tok::RParen, 1, &mut i, &mut column),
            ',' => push(Tok::Comma, 1, &mut i, &mut column),
            '~' | '¬' => push(Tok::Not, 1, &mut i, &mut column),
            '&' | '∧' => push(Tok::And, 1, &mut i, &mut column),
            '|' | '∨' => push(Tok::Or, 1, &mut i, &mut column),
            '=' => push(Tok::Equals, 1, &mut i, &mut column),
            '→' => push(Tok::Implies, 1, &mut i, &mut column),
            '↔' => push(Tok::Iff, 1, &mut i, &mut column),
            '□' => push(Tok::Box, 1, &mut i, &mut column),
            '◇' => push(Tok::Diamond, 1, &mut i, &mut column),
            '∀' => push(Tok::Forall, 1, &mut i, &mut column),
            '∃' => push(Tok::Exists, 1, &mut i, &mut column),
            '⊤' => push(Tok::True, 1, &mut i, &mut column),
            '⊥' => push(Tok::False, 1, &mut i, &mut column),
            _ if rest.starts_with("<->") => push(Tok::Iff, 3, &mut i, &mut column),
            _ if rest.starts_with("<>") => push(Tok::Diamond, 2, &mut i, &mut column),
            _ if rest.starts_with("->") => push(Tok::Implies, 2, &mut i, &mut column),
            _ if rest.starts_with("[]") => push(Tok::Box, 2, &mut i, &mut column),
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut j = i;
                while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                    j += 1;
                }
                let word: String = chars[i..j].iter().collect();
                let tok = match word.as_str() {
                    "forall" => Tok::Forall,
                    "exists" => Tok::Exists,
                    "true" => Tok::True,
                    "false" => Tok::False,
                    _ => Tok::Ident(word),
                };
                push(tok, j - i, &mut i, &mut column);
            }
            other => {
                return Err(ParseError::Syntax {
                    line,
                    column,
                    found: format!("character `{other}`"),
                    expected: vec!["formula".into()],
                })
            }
        }
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        column,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, expected: &[&str]) -> Result<T, ParseError> {
        let s = &self.toks[self.pos];
        Err(ParseError::Syntax {
            line: s.line,
            column: s.column,
            found: s.tok.describe(),
            expected: expected.iter().map(|e| e.to_string()).collect(),
        })
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.error(&[&tok.describe()])
        }
    }

    fn variable(&mut self) -> Result<Var, ParseError> {
        match self.peek() {
            Tok::Ident(name) if is_variable_name(name) => {
                let v = Var::new(name.clone());
                self.bump();
                Ok(v)
            }
            _ => self.error(&["variable"]),
        }
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.implication()?;
        if *self.peek() == Tok::Iff {
            self.bump();
            let rhs = self.iff()?;
            return Ok(Formula::iff(lhs, rhs));
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Implies {
            self.bump();
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.conjunction()?;
        while *self.peek() == Tok::Or {
            self.bump();
            acc = Formula::or(acc, self.conjunction()?);
        }
        Ok(acc)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.unary()?;
        while *self.peek() == Tok::And {
            self.bump();
            acc = Formula::and(acc, self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Tok::Not => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::Box => {
                self.bump();
                Ok(Formula::boxed(self.unary()?))
            }
            Tok::Diamond => {
                self.bump();
                Ok(Formula::diamond(self.unary()?))
            }
            Tok::Forall => {
                self.bump();
                let x = self.variable()?;
                Ok(Formula::Forall(x, Box::new(self.unary()?)))
            }
            Tok::Exists => {
                self.bump();
                let x = self.variable()?;
                Ok(Formula::Exists(x, Box::new(self.unary()?)))
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let f = self.iff()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::True => {
                self.bump();
                Ok(Formula::Verum)
            }
            Tok::False => {
                self.bump();
                Ok(Formula::Falsum)
            }
            Tok::Ident(name) if is_variable_name(&name) => {
                self.bump();
                self.expect(Tok::Equals)?;
                let rhs = self.variable()?;
                Ok(Formula::Equality(Var::new(name), rhs))
            }
            Tok::Ident(name) => {
                self.bump();
                let mut args = Vec::new();
                if *self.peek() == Tok::LParen {
                    self.bump();
                    args.push(self.variable()?);
                    loop {
                        match self.peek() {
                            Tok::Comma => {
                                self.bump();
                                args.push(self.variable()?);
                            }
                            Tok::RParen => {
                                self.bump();
                                break;
                            }
                            _ => return self.error(&["`,`", "`)`"]),
                        }
                    }
                }
                Ok(Formula::Atom { letter: name, args })
            }
            _ => self.error(&["formula"]),
        }
    }
}

/// Parses a formula.
///
/// Precedence, tightest first: `~ [] <> forall exists`, then `&`, `|`, `->`
/// (right-associative) and `<->` (right-associative).
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let f = p.iff()?;
    if *p.peek() != Tok::Eof {
        return p.error(&["binary connective", "end of input"]);
    }
    f.letters()
        .map_err(|(letter, first, second)| ParseError::ArityConflict {
            letter,
            first,
            second,
        })?;
    Ok(f)
}
