use std::fmt;

use crate::error::{Error, Result};

/// A word in the generators of a free pro-p group.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroupWord {
    Gen(usize),
    Inverse(Box<GroupWord>),
    Power(Box<GroupWord>, i64),
    /// `[a, b] = a^-1 b^-1 a b`
    Commutator(Box<GroupWord>, Box<GroupWord>),
    Product(Vec<GroupWord>),
}

impl GroupWord {
    pub fn gen(i: usize) -> Self {
        GroupWord::Gen(i)
    }

    pub fn inverse(w: GroupWord) -> Self {
        GroupWord::Inverse(Box::new(w))
    }

    pub fn power(w: GroupWord, e: i64) -> Self {
        GroupWord::Power(Box::new(w), e)
    }

    pub fn comm(a: GroupWord, b: GroupWord) -> Self {
        GroupWord::Commutator(Box::new(a), Box::new(b))
    }

    pub fn product(ws: Vec<GroupWord>) -> Self {
        GroupWord::Product(ws)
    }

    /// Largest generator index used, if any.
    pub fn max_generator(&self) -> Option<usize> {
        match self {
            GroupWord::Gen(i) => Some(*i),
            GroupWord::Inverse(w) | GroupWord::Power(w, _) => w.max_generator(),
            GroupWord::Commutator(a, b) => a.max_generator().max(b.max_generator()),
            GroupWord::Product(ws) => ws.iter().filter_map(|w| w.max_generator()).max(),
        }
    }

    /// Text form in the word grammar, e.g. `x1^2*[x1,x2]`.
    pub fn render(&self, labels: &[String]) -> String {
        let name = |i: usize| labels.get(i).cloned().unwrap_or_else(|| format!("x{}", i + 1));
        match self {
            GroupWord::Gen(i) => name(*i),
            GroupWord::Inverse(w) => format!("{}^-1", w.render_atom(labels)),
            GroupWord::Power(w, e) => format!("{}^{}", w.render_atom(labels), e),
            GroupWord::Commutator(a, b) => format!("[{},{}]", a.render(labels), b.render(labels)),
            GroupWord::Product(ws) if ws.is_empty() => "1".to_string(),
            GroupWord::Product(ws) => ws
                .iter()
                .map(|w| match w {
                    GroupWord::Product(inner) if inner.len() > 1 => format!("({})", w.render(labels)),
                    _ => w.render(labels),
                })
                .collect::<Vec<_>>()
                .join("*"),
        }
    }

    fn render_atom(&self, labels: &[String]) -> String {
        match self {
            GroupWord::Gen(_) | GroupWord::Commutator(_, _) => self.render(labels),
            GroupWord::Product(ws) if ws.is_empty() => "1".to_string(),
            _ => format!("({})", self.render(labels)),
        }
    }

    /// Parse the word grammar:
    ///
    /// ```text
    /// word   := factor (('*' | whitespace) factor)*
    /// factor := atom ('^' ['-'] digits)*
    /// atom   := label | '1' | '[' word ',' word ']' | '(' word ')'
    /// ```
    pub fn parse(text: &str, labels: &[String]) -> Result<GroupWord> {
        let mut p = WordParser {
            chars: text.chars().collect(),
            pos: 0,
            labels,
        };
        let w = p.word()?;
        p.skip_ws();
        if p.pos != p.chars.len() {
            return Err(p.err("trailing input"));
        }
        Ok(w)
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(&[]))
    }
}

struct WordParser<'a> {
    chars: Vec<char>,
    pos: usize,
    labels: &'a [String],
}

impl WordParser<'_> {
    fn err(&self, message: &str) -> Error {
        Error::Parse {
            line: 1,
            column: self.pos + 1,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn word(&mut self) -> Result<GroupWord> {
        let mut factors = vec![self.factor()?];
        loop {
            self.skip_ws();
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    factors.push(self.factor()?);
                }
                Some(c) if c.is_alphanumeric() || c == '_' || c == '[' || c == '(' => {
                    factors.push(self.factor()?);
                }
                _ => break,
            }
        }
        Ok(if factors.len() == 1 {
            factors.pop().expect("one factor")
        } else {
            GroupWord::Product(factors)
        })
    }

    fn factor(&mut self) -> Result<GroupWord> {
        let mut w = self.atom()?;
        loop {
            self.skip_ws();
            if self.peek() != Some('^') {
                return Ok(w);
            }
            self.pos += 1;
            self.skip_ws();
            let neg = if self.peek() == Some('-') {
                self.pos += 1;
                true
            } else {
                false
            };
            let start = self.pos;
            while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                self.pos += 1;
            }
            if start == self.pos {
                return Err(self.err("expected an exponent"));
            }
            let digits: String = self.chars[start..self.pos].iter().collect();
            let e: i64 = digits
                .parse()
                .map_err(|_| self.err("exponent out of range"))?;
            w = match (neg, e) {
                (true, 1) => GroupWord::inverse(w),
                (true, e) => GroupWord::power(w, -e),
                (false, e) => GroupWord::power(w, e),
            };
        }
    }

    fn atom(&mut self) -> Result<GroupWord> {
        self.skip_ws();
        match self.peek() {
            Some('[') => {
                self.pos += 1;
                let a = self.word()?;
                self.skip_ws();
                if self.peek() != Some(',') {
                    return Err(self.err("expected ',' in commutator"));
                }
                self.pos += 1;
                let b = self.word()?;
                self.skip_ws();
                if self.peek() != Some(']') {
                    return Err(self.err("expected ']'"));
                }
                self.pos += 1;
                Ok(GroupWord::comm(a, b))
            }
            Some('(') => {
                self.pos += 1;
                let w = self.word()?;
                self.skip_ws();
                if self.peek() != Some(')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(w)
            }
            Some(c) if c.is_alphanumeric() || c == '_' => {
                let start = self.pos;
                while self
                    .peek()
                    .is_some_and(|c| c.is_alphanumeric() || c == '_' || c == '.')
                {
                    self.pos += 1;
                }
                let ident: String = self.chars[start..self.pos].iter().collect();
                if ident == "1" {
                    return Ok(GroupWord::Product(Vec::new()));
                }
                match self.labels.iter().position(|l| *l == ident) {
                    Some(i) => Ok(GroupWord::Gen(i)),
                    None => {
                        self.pos = start;
                        Err(self.err(&format!("unknown generator '{}'", ident)))
                    }
                }
            }
            _ => Err(self.err("expected a generator, '[' or '('")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(d: usize) -> Vec<String> {
        (1..=d).map(|i| format!("x{}", i)).collect()
    }

    #[test]
    fn grammar_examples() {
        let l = labels(3);
        assert_eq!(GroupWord::parse("x1", &l).unwrap(), GroupWord::Gen(0));
        assert_eq!(
            GroupWord::parse("x1^-1", &l).unwrap(),
            GroupWord::inverse(GroupWord::Gen(0))
        );
        assert_eq!(
            GroupWord::parse("x2^3", &l).unwrap(),
            GroupWord::power(GroupWord::Gen(1), 3)
        );
        let w = GroupWord::parse("x1^2 * [x1, x2] x3", &l).unwrap();
        assert_eq!(
            w,
            GroupWord::product(vec![
                GroupWord::power(GroupWord::Gen(0), 2),
                GroupWord::comm(GroupWord::Gen(0), GroupWord::Gen(1)),
                GroupWord::Gen(2),
            ])
        );
        assert_eq!(w.render(&l), "x1^2*[x1,x2]*x3");
    }

    #[test]
    fn nested_and_grouped() {
        let l = labels(3);
        let w = GroupWord::parse("[(x1 x2)^-2, [x2,x3]]", &l).unwrap();
        let back = GroupWord::parse(&w.render(&l), &l).unwrap();
        assert_eq!(back, w);
        assert_eq!(w.max_generator(), Some(2));
    }

    #[test]
    fn errors_have_locations() {
        let l = labels(2);
        match GroupWord::parse("x1 * y", &l).unwrap_err() {
            Error::Parse { column, .. } => assert_eq!(column, 6),
            e => panic!("{:?}", e),
        }
        assert!(GroupWord::parse("[x1 x2]", &l).is_err());
        assert!(GroupWord::parse("x1^", &l).is_err());
    }
}
