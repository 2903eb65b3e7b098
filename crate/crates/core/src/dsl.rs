//! The line-oriented rule language.
//!
//! ```text
//! # comment
//! a1=0 & a2=0 & a3=0 -> 3
//! a1=2 -> 5
//! -> 7
//! ```
//!
//! Assignments (for restriction) are written `a1=0,a3=*`.

use crate::assignment::Assignment;
use crate::error::{Error, Result};
use crate::rule::{AttrId, DecisionRule, Value};
use crate::system::RuleSystem;

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    line: usize,
    text: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str, line: usize) -> Self {
        Cursor {
            chars: text.char_indices().peekable(),
            line,
            text,
        }
    }

    fn column(&mut self) -> usize {
        let offset = self.chars.peek().map_or(self.text.len(), |&(i, _)| i);
        self.text[..offset].chars().count() + 1
    }

    fn error<T>(&mut self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            line: self.line,
            column: self.column(),
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.chars.next_if(|&(_, c)| c.is_whitespace()).is_some() {}
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.peek().map(|&(_, c)| c)
    }

    fn expect(&mut self, want: &str) -> Result<()> {
        self.skip_ws();
        for w in want.chars() {
            match self.chars.peek() {
                Some(&(_, c)) if c == w => {
                    self.chars.next();
                }
                Some(&(_, c)) => return self.error(format!("expected `{want}`, found `{c}`")),
                None => return self.error(format!("expected `{want}`, found end of line")),
            }
        }
        Ok(())
    }

    fn uint(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.column();
        let mut digits = String::new();
        while let Some((_, c)) = self.chars.next_if(|&(_, c)| c.is_ascii_digit()) {
            digits.push(c);
        }
        if digits.is_empty() {
            return match self.chars.peek() {
                Some(&(_, c)) => self.error(format!("expected a number, found `{c}`")),
                None => self.error("expected a number, found end of line"),
            };
        }
        digits.parse().map_err(|_| Error::Syntax {
            line: self.line,
            column: start,
            message: format!("number {digits} is out of range"),
        })
    }

    fn value(&mut self) -> Result<Value> {
        if self.peek() == Some('*') {
            self.chars.next();
            Ok(Value::Star)
        } else {
            self.uint().map(Value::Num)
        }
    }

    fn attr(&mut self) -> Result<AttrId> {
        self.expect("a")?;
        let idx = self.uint()?;
        u32::try_from(idx)
            .map(AttrId)
            .or_else(|_| self.error(format!("attribute index {idx} is out of range")))
    }

    fn end(&mut self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(c) => self.error(format!("unexpected `{c}`")),
        }
    }
}

fn parse_rule(text: &str, line: usize) -> Result<DecisionRule> {
    let mut cur = Cursor::new(text, line);
    let mut lhs = Vec::new();
    if cur.peek() != Some('-') {
        loop {
            let attr = cur.attr()?;
            cur.expect("=")?;
            if cur.peek() == Some('*') {
                return cur.error("`*` cannot appear in a rule");
            }
            lhs.push((attr, cur.uint()?));
            if cur.peek() == Some('&') {
                cur.chars.next();
            } else {
                break;
            }
        }
    }
    cur.expect("->")?;
    let rhs = cur.uint()?;
    cur.end()?;
    DecisionRule::new(lhs, rhs).map_err(|attr| Error::DuplicateAttribute { line, attr })
}

/// Parses a rule file. Duplicate rules collapse onto their first occurrence.
pub fn parse_system(text: &str) -> Result<RuleSystem> {
    let mut rules = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        rules.push(parse_rule(raw, i + 1)?);
    }
    RuleSystem::new(rules)
}

/// Parses `a1=0,a3=*`. The empty string is the empty assignment.
pub fn parse_assignment(text: &str) -> Result<Assignment> {
    let mut out = Assignment::new();
    if text.trim().is_empty() {
        return Ok(out);
    }
    let mut cur = Cursor::new(text, 1);
    loop {
        let attr = cur.attr()?;
        cur.expect("=")?;
        let value = cur.value()?;
        out.insert(attr, value)?;
        match cur.peek() {
            Some(',') => {
                cur.chars.next();
            }
            None => break,
            Some(c) => return cur.error(format!("expected `,`, found `{c}`")),
        }
    }
    Ok(out)
}

/// Canonical text form; reparses to the same system.
pub fn to_dsl(system: &RuleSystem) -> String {
    system.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_lhs_rule() {
        let s = parse_system("-> 7").unwrap();
        assert_eq!(s.len(), 1);
        assert!(s.rule(0).is_empty());
        assert_eq!(s.rule(0).rhs(), 7);
        assert_eq!(s.n(), 0);
    }

    #[test]
    fn duplicates_collapse() {
        let s = parse_system("a1=0 -> 1\na1=0 -> 1\n").unwrap();
        assert_eq!(s.len(), 1);
    }

    #[test]
    fn whitespace_and_comments() {
        let s = parse_system("# header\n\n  a1 = 0&a2=1->3  \n   # x\n->0").unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.rule(0).to_string(), "a1=0 & a2=1 -> 3");
    }

    #[test]
    fn syntax_error_location() {
        let err = parse_system("a1=0 -> 1\na1=0 & b2=1 -> 1").unwrap_err();
        assert_eq!(
            err,
            Error::Syntax {
                line: 2,
                column: 8,
                message: "expected `a`, found `b`".into()
            }
        );
    }

    #[test]
    fn missing_arrow() {
        assert!(matches!(
            parse_system("a1=0 3"),
            Err(Error::Syntax { line: 1, .. })
        ));
    }

    #[test]
    fn star_in_rule_rejected() {
        assert!(parse_system("a1=* -> 0").is_err());
    }

    #[test]
    fn duplicate_attribute() {
        assert_eq!(
            parse_system("a1=0 & a1=0 -> 0").unwrap_err(),
            Error::DuplicateAttribute {
                line: 1,
                attr: AttrId(1)
            }
        );
    }

    #[test]
    fn empty_file() {
        assert_eq!(parse_system("# nothing\n").unwrap_err(), Error::EmptySystem);
        assert_eq!(parse_system("").unwrap_err(), Error::EmptySystem);
    }

    #[test]
    fn assignment_literal() {
        let a = parse_assignment("a1=0, a3=*").unwrap();
        assert_eq!(a.get(AttrId(1)), Some(Value::Num(0)));
        assert_eq!(a.get(AttrId(3)), Some(Value::Star));
        assert!(parse_assignment("").unwrap().is_empty());
        assert!(parse_assignment("a1=0,a1=1").is_err());
        assert!(parse_assignment("a1=0;a2=1").is_err());
    }

    #[test]
    fn canonical_text_roundtrip() {
        let s = parse_system("a2=0 & a1=1 -> 3\n-> 4\n").unwrap();
        assert_eq!(to_dsl(&s), "a1=1 & a2=0 -> 3\n-> 4\n");
        assert_eq!(parse_system(&to_dsl(&s)).unwrap(), s);
    }
}
