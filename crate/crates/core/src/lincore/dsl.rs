//! Line-oriented text format for systems and fact sets.
//!
//! ```text
//! # comment
//! var R1 R2
//! sym m1 m2 dimension
//! sym k_U10_H11_V20 composite-rank
//! ineq bound7: R1 + 2*R2 <= k_U10_H11_V20 + m2 + n2
//! fact fact:3: k_H11_V20 == m1 - r21
//! ```
//!
//! A trailing kind keyword on a `sym` line applies to every name on it.
//! Equality facts become two inequalities labelled `<label>/le` and
//! `<label>/ge`.

use std::collections::BTreeSet;

use num_bigint::BigInt;

use super::{Inequality, InequalitySystem, LinearExpression, Rational, SymbolKind, SymbolTable};
use crate::error::{DslError, DslErrorKind, Error};
use crate::implication::FactSet;

/// Result of parsing one DSL text: the inequality system and its facts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Document {
    pub system: InequalitySystem,
    pub facts: FactSet,
}

pub fn parse_system(text: &str) -> Result<(InequalitySystem, FactSet), DslError> {
    let doc = parse_document(text)?;
    Ok((doc.system, doc.facts))
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Le,
    Ge,
    EqEq,
}

struct Lexed {
    tok: Tok,
    col: usize,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

fn lex(chars: &[char], start: usize, line: usize) -> Result<Vec<Lexed>, DslError> {
    let err = |col: usize, msg: String| DslError::new(line, col, DslErrorKind::Syntax(msg));
    let mut out = Vec::new();
    let mut i = start;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let two: String = chars[i..chars.len().min(i + 2)].iter().collect();
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '<' | '>' | '=' => {
                let t = match two.as_str() {
                    "<=" => Tok::Le,
                    ">=" => Tok::Ge,
                    "==" => Tok::EqEq,
                    _ => return Err(err(col, format!("expected `<=`, `>=` or `==`, found `{two}`"))),
                };
                i += 2;
                out.push(Lexed { tok: t, col });
                continue;
            }
            d if d.is_ascii_digit() => {
                let begin = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[begin..i].iter().collect();
                out.push(Lexed {
                    tok: Tok::Num(digits.parse().expect("ascii digits")),
                    col,
                });
                continue;
            }
            s if is_ident_start(s) => {
                let begin = i;
                while i < chars.len() && is_ident_char(chars[i]) {
                    i += 1;
                }
                out.push(Lexed {
                    tok: Tok::Ident(chars[begin..i].iter().collect()),
                    col,
                });
                continue;
            }
            other => return Err(err(col, format!("unexpected character `{other}`"))),
        };
        out.push(Lexed { tok, col });
        i += 1;
    }
    Ok(out)
}

struct ExprParser<'a> {
    toks: &'a [Lexed],
    pos: usize,
    line: usize,
    end_col: usize,
    table: &'a SymbolTable,
}

impl<'a> ExprParser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|l| &l.tok)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|l| l.col).unwrap_or(self.end_col)
    }

    fn error(&self, kind: DslErrorKind) -> DslError {
        DslError::new(self.line, self.col(), kind)
    }

    fn syntax(&self, msg: &str) -> DslError {
        self.error(DslErrorKind::Syntax(msg.to_string()))
    }

    fn number(&mut self) -> Result<Rational, DslError> {
        let Some(Tok::Num(n)) = self.peek().cloned() else {
            return Err(self.syntax("expected a number"));
        };
        self.pos += 1;
        if self.peek() == Some(&Tok::Slash) {
            self.pos += 1;
            let Some(Tok::Num(d)) = self.peek().cloned() else {
                return Err(self.syntax("expected a denominator"));
            };
            if d == BigInt::from(0) {
                return Err(self.syntax("zero denominator"));
            }
            self.pos += 1;
            return Ok(Rational::new(n, d));
        }
        Ok(Rational::from_integer(n))
    }

    fn add_name(&mut self, expr: &mut LinearExpression, coeff: &Rational) -> Result<(), DslError> {
        let Some(Tok::Ident(name)) = self.peek().cloned() else {
            return Err(self.syntax("expected a symbol name"));
        };
        if self.table.is_variable(&name) {
            expr.add_variable_term(&name, coeff);
        } else if self.table.is_constant(&name) {
            expr.add_constant_term(&name, coeff);
        } else {
            return Err(self.error(DslErrorKind::UndeclaredSymbol(name)));
        }
        self.pos += 1;
        Ok(())
    }

    fn term(&mut self, expr: &mut LinearExpression, sign: Rational) -> Result<(), DslError> {
        match self.peek() {
            Some(Tok::Num(_)) => {
                let value = self.number()? * sign;
                if self.peek() == Some(&Tok::Star) {
                    self.pos += 1;
                    self.add_name(expr, &value)
                } else {
                    expr.add_scalar(&value);
                    Ok(())
                }
            }
            Some(Tok::Ident(_)) => self.add_name(expr, &sign),
            _ => Err(self.syntax("expected a term")),
        }
    }

    fn expression(&mut self) -> Result<LinearExpression, DslError> {
        let mut expr = LinearExpression::zero();
        let one = Rational::from_integer(1.into());
        let mut sign = one.clone();
        match self.peek() {
            Some(Tok::Minus) => {
                sign = -one.clone();
                self.pos += 1;
            }
            Some(Tok::Plus) => self.pos += 1,
            _ => {}
        }
        self.term(&mut expr, sign)?;
        loop {
            let sign = match self.peek() {
                Some(Tok::Plus) => one.clone(),
                Some(Tok::Minus) => -one.clone(),
                _ => break,
            };
            self.pos += 1;
            self.term(&mut expr, sign)?;
        }
        Ok(expr)
    }
}

enum Relation {
    Le,
    Ge,
    Eq,
}

fn parse_relation(
    chars: &[char],
    start: usize,
    line: usize,
    table: &SymbolTable,
) -> Result<(LinearExpression, Relation, LinearExpression), DslError> {
    let toks = lex(chars, start, line)?;
    let mut p = ExprParser {
        toks: &toks,
        pos: 0,
        line,
        end_col: chars.len() + 1,
        table,
    };
    let lhs = p.expression()?;
    let rel = match p.peek() {
        Some(Tok::Le) => Relation::Le,
        Some(Tok::Ge) => Relation::Ge,
        Some(Tok::EqEq) => Relation::Eq,
        _ => return Err(p.syntax("expected `<=`, `>=` or `==`")),
    };
    p.pos += 1;
    let rhs = p.expression()?;
    if p.pos != toks.len() {
        return Err(p.syntax("unexpected trailing input"));
    }
    Ok((lhs, rel, rhs))
}

/// Splits a line into whitespace-separated words with their 1-based columns.
fn words(chars: &[char]) -> Vec<(String, usize)> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        if chars[i].is_whitespace() {
            i += 1;
            continue;
        }
        let begin = i;
        while i < chars.len() && !chars[i].is_whitespace() {
            i += 1;
        }
        out.push((chars[begin..i].iter().collect(), begin + 1));
    }
    out
}

fn is_identifier(word: &str) -> bool {
    let mut chars = word.chars();
    matches!(chars.next(), Some(c) if is_ident_start(c)) && chars.all(is_ident_char)
}

pub fn parse_document(text: &str) -> Result<Document, DslError> {
    let mut table = SymbolTable::new();
    // Inequalities and facts are collected first so that declarations may
    // appear anywhere in the document.
    let mut pending: Vec<(usize, bool, String, Vec<char>, usize)> = Vec::new();
    let mut labels = BTreeSet::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        };
        let chars: Vec<char> = content.chars().collect();
        let ws = words(&chars);
        let Some((keyword, kcol)) = ws.first() else {
            continue;
        };
        match keyword.as_str() {
            "var" | "sym" => {
                let mut names = &ws[1..];
                let mut kind = SymbolKind::Opaque;
                if keyword == "sym" {
                    if let Some((last, _)) = names.last() {
                        if let Some(k) = SymbolKind::from_keyword(last) {
                            kind = k;
                            names = &names[..names.len() - 1];
                        }
                    }
                }
                if names.is_empty() {
                    return Err(DslError::new(
                        line,
                        kcol + keyword.len(),
                        DslErrorKind::Syntax(format!("`{keyword}` needs at least one name")),
                    ));
                }
                for (name, col) in names {
                    if !is_identifier(name) || SymbolKind::from_keyword(name).is_some() {
                        return Err(DslError::new(
                            line,
                            *col,
                            DslErrorKind::Syntax(format!("invalid symbol name `{name}`")),
                        ));
                    }
                    let declared = if keyword == "var" {
                        table.declare_variable(name)
                    } else {
                        table.declare_constant(name, kind)
                    };
                    if declared.is_err() {
                        return Err(DslError::new(
                            line,
                            *col,
                            DslErrorKind::DuplicateDeclaration(name.clone()),
                        ));
                    }
                }
            }
            "ineq" | "fact" => {
                let Some((label_word, lcol)) = ws.get(1) else {
                    return Err(DslError::new(
                        line,
                        kcol + keyword.len(),
                        DslErrorKind::Syntax("expected `<label>:`".into()),
                    ));
                };
                let Some(label) = label_word.strip_suffix(':').filter(|l| !l.is_empty()) else {
                    return Err(DslError::new(
                        line,
                        *lcol,
                        DslErrorKind::Syntax("expected `<label>:`".into()),
                    ));
                };
                if !labels.insert(label.to_string()) {
                    return Err(DslError::new(
                        line,
                        *lcol,
                        DslErrorKind::DuplicateLabel(label.to_string()),
                    ));
                }
                let body_start = lcol - 1 + label_word.chars().count();
                pending.push((line, keyword == "fact", label.to_string(), chars, body_start));
            }
            other => {
                return Err(DslError::new(
                    line,
                    *kcol,
                    DslErrorKind::Syntax(format!("unknown keyword `{other}`")),
                ))
            }
        }
    }

    let mut system = InequalitySystem::new(table.clone());
    let mut facts = Vec::new();
    for (line, is_fact, label, chars, start) in pending {
        let (lhs, rel, rhs) = parse_relation(&chars, start, line, &table)?;
        let diff = lhs.minus(&rhs);
        let pieces = match rel {
            Relation::Le => vec![Inequality::new(label.clone(), diff)],
            Relation::Ge => vec![Inequality::new(label.clone(), -diff)],
            Relation::Eq if is_fact => vec![
                Inequality::new(format!("{label}/le"), diff.clone()),
                Inequality::new(format!("{label}/ge"), -diff),
            ],
            Relation::Eq => {
                return Err(DslError::new(
                    line,
                    start + 1,
                    DslErrorKind::Syntax("equalities are only allowed in `fact` lines".into()),
                ))
            }
        };
        for piece in pieces {
            if is_fact {
                if let Some(var) = piece.expr().variable_terms().keys().next() {
                    return Err(DslError::new(
                        line,
                        start + 1,
                        DslErrorKind::FactMentionsVariable {
                            label: label.clone(),
                            var: var.clone(),
                        },
                    ));
                }
                facts.push(piece.canonicalize());
            } else {
                system.insert(piece).map_err(|e| match e {
                    Error::Contradiction { label } => {
                        DslError::new(line, start + 1, DslErrorKind::Contradiction(label))
                    }
                    other => DslError::new(line, start + 1, DslErrorKind::Syntax(other.to_string())),
                })?;
            }
        }
    }
    Ok(Document {
        system,
        facts: FactSet::from_inequalities(facts).expect("facts checked for variables"),
    })
}

const HEADER: &str = "# fmelim inequality system\n";

fn write_declarations(table: &SymbolTable, out: &mut String) {
    if !table.variables().is_empty() {
        out.push_str("var ");
        out.push_str(&table.variables().join(" "));
        out.push('\n');
    }
    let consts = table.constants();
    let mut i = 0;
    while i < consts.len() {
        let kind = consts[i].1;
        let mut j = i;
        while j < consts.len() && consts[j].1 == kind {
            j += 1;
        }
        out.push_str("sym ");
        let names: Vec<&str> = consts[i..j].iter().map(|(n, _)| n.as_str()).collect();
        out.push_str(&names.join(" "));
        if let Some(k) = kind.keyword() {
            out.push(' ');
            out.push_str(k);
        }
        out.push('\n');
        i = j;
    }
}

/// Deterministic text form: header, declarations, then inequalities in
/// canonical order.
pub fn serialize_system(system: &InequalitySystem) -> String {
    let mut out = String::from(HEADER);
    write_declarations(system.table(), &mut out);
    for ineq in system.canonical_order() {
        out.push_str(&format!(
            "ineq {}: {}\n",
            ineq.label(),
            ineq.render(Some(system.table()))
        ));
    }
    out
}

/// [`serialize_system`] followed by the facts, one inequality per line, in
/// their original order.
pub fn serialize_document(system: &InequalitySystem, facts: &FactSet) -> String {
    let mut out = serialize_system(system);
    for fact in facts.iter() {
        out.push_str(&format!(
            "fact {}: {}\n",
            fact.label(),
            fact.render(Some(system.table()))
        ));
    }
    out
}
