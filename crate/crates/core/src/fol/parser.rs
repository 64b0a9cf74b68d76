use super::{FolError, Formula, Signature, Term};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Le,
    Eq,
    And,
    Or,
    Not,
    Arrow,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Le => "`<=`".into(),
            Tok::Eq => "`=`".into(),
            Tok::And => "`&`".into(),
            Tok::Or => "`|`".into(),
            Tok::Not => "`!`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

const KEYWORDS: [&str; 2] = ["forall", "exists"];

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, FolError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b',' => Tok::Comma,
            b'.' => Tok::Dot,
            b'=' => Tok::Eq,
            b'&' => Tok::And,
            b'|' => Tok::Or,
            b'!' => Tok::Not,
            b'<' if bytes.get(i + 1) == Some(&b'=') => {
                i += 1;
                Tok::Le
            }
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 1;
                Tok::Arrow
            }
            c if c.is_ascii_alphabetic() => {
                while i + 1 < bytes.len() && (bytes[i + 1].is_ascii_alphanumeric() || bytes[i + 1] == b'_') {
                    i += 1;
                }
                Tok::Ident(text[start..=i].to_string())
            }
            _ => {
                let found = text[start..].chars().next().unwrap_or('?');
                return Err(FolError::Syntax {
                    pos: start,
                    expected: vec!["a token".into()],
                    found: format!("`{found}`"),
                });
            }
        };
        i += 1;
        out.push((tok, start));
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    at: usize,
    sig: &'a Signature,
}

/// Parses the text form of a formula, resolving symbols against `sig`.
pub fn parse_formula(text: &str, sig: &Signature) -> Result<Formula, FolError> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
        sig,
    };
    let f = p.formula()?;
    p.expect(Tok::End, &["end of input"])?;
    Ok(f)
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.at + 1).min(self.toks.len() - 1)].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if t != Tok::End {
            self.at += 1;
        }
        t
    }

    fn error<T>(&self, expected: &[&str]) -> Result<T, FolError> {
        Err(FolError::Syntax {
            pos: self.pos(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.peek().describe(),
        })
    }

    fn expect(&mut self, tok: Tok, expected: &[&str]) -> Result<(), FolError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.error(expected)
        }
    }

    fn ident(&mut self) -> Result<(String, usize), FolError> {
        match self.peek() {
            Tok::Ident(name) if !KEYWORDS.contains(&name.as_str()) => {
                let name = name.clone();
                let pos = self.pos();
                self.bump();
                Ok((name, pos))
            }
            _ => self.error(&["identifier"]),
        }
    }

    fn formula(&mut self) -> Result<Formula, FolError> {
        if let Tok::Ident(kw) = self.peek() {
            let universal = match kw.as_str() {
                "forall" => Some(true),
                "exists" => Some(false),
                _ => None,
            };
            if let Some(universal) = universal {
                self.bump();
                let (var, _) = self.ident()?;
                self.expect(Tok::Dot, &["`.`"])?;
                let body = self.formula()?;
                return Ok(if universal {
                    Formula::forall(&var, body)
                } else {
                    Formula::exists(&var, body)
                });
            }
        }
        self.implication()
    }

    fn implication(&mut self) -> Result<Formula, FolError> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, FolError> {
        let mut lhs = self.conjunction()?;
        while *self.peek() == Tok::Or {
            self.bump();
            lhs = Formula::or(lhs, self.conjunction()?);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, FolError> {
        let mut lhs = self.negation()?;
        while *self.peek() == Tok::And {
            self.bump();
            lhs = Formula::and(lhs, self.negation()?);
        }
        Ok(lhs)
    }

    fn negation(&mut self) -> Result<Formula, FolError> {
        if *self.peek() == Tok::Not {
            self.bump();
            return Ok(Formula::negation(self.negation()?));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Formula, FolError> {
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen, &["`)`"])?;
                Ok(f)
            }
            Tok::Ident(name)
                if self.sig.relation_arity(&name).is_some() && *self.peek2() == Tok::LParen =>
            {
                let pos = self.pos();
                self.bump();
                let args = self.arguments()?;
                let arity = self.sig.relation_arity(&name).expect("checked");
                if args.len() != arity {
                    return Err(FolError::ArityMismatch {
                        name,
                        expected: arity,
                        found: args.len(),
                        pos,
                    });
                }
                Ok(Formula::Rel(name, args))
            }
            Tok::Ident(_) => {
                let lhs = self.term()?;
                let equality = match self.peek() {
                    Tok::Le => false,
                    Tok::Eq => true,
                    _ => return self.error(&["`<=`", "`=`"]),
                };
                self.bump();
                let rhs = self.term()?;
                Ok(if equality {
                    Formula::Eq(lhs, rhs)
                } else {
                    Formula::leq(lhs, rhs)
                })
            }
            _ => self.error(&["`(`", "`!`", "`forall`", "`exists`", "identifier"]),
        }
    }

    fn arguments(&mut self) -> Result<Vec<Term>, FolError> {
        self.expect(Tok::LParen, &["`(`"])?;
        let mut args = vec![self.term()?];
        loop {
            match self.peek() {
                Tok::Comma => {
                    self.bump();
                    args.push(self.term()?);
                }
                Tok::RParen => {
                    self.bump();
                    return Ok(args);
                }
                _ => return self.error(&["`,`", "`)`"]),
            }
        }
    }

    fn term(&mut self) -> Result<Term, FolError> {
        let (name, pos) = self.ident()?;
        let op_arity = self.sig.operation_arity(&name);
        if *self.peek() == Tok::LParen {
            let Some(arity) = op_arity else {
                return Err(FolError::UnknownSymbol { name, pos });
            };
            let args = self.arguments()?;
            if args.len() != arity {
                return Err(FolError::ArityMismatch {
                    name,
                    expected: arity,
                    found: args.len(),
                    pos,
                });
            }
            return Ok(Term::App(name, args));
        }
        if let Some(arity) = op_arity {
            return Err(FolError::ArityMismatch {
                name,
                expected: arity,
                found: 0,
                pos,
            });
        }
        if self.sig.relation_arity(&name).is_some() {
            // Relation symbols are not terms.
            return Err(FolError::UnknownSymbol { name, pos });
        }
        Ok(Term::Var(name))
    }
}
