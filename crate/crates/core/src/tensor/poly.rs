use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Fp, FpScalar};

use super::monomial::{DeglexOrder, MultiIndex};

/// Element of F_p<X_1..X_d>. Terms are keyed in identity-deglex order and
/// never hold a zero coefficient.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct NcPoly {
    field: Fp,
    ngens: usize,
    terms: BTreeMap<MultiIndex, u32>,
}

impl NcPoly {
    pub fn zero(field: Fp, ngens: usize) -> Self {
        NcPoly {
            field,
            ngens,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(field: Fp, ngens: usize) -> Self {
        Self::monomial(field, ngens, MultiIndex::empty(), 1)
    }

    pub fn monomial(field: Fp, ngens: usize, m: MultiIndex, coeff: u32) -> Self {
        let mut p = Self::zero(field, ngens);
        p.add_term(m, coeff);
        p
    }

    pub fn generator(field: Fp, ngens: usize, g: usize) -> Self {
        Self::monomial(field, ngens, MultiIndex::letter(g), 1)
    }

    pub fn from_terms(
        field: Fp,
        ngens: usize,
        terms: impl IntoIterator<Item = (MultiIndex, u32)>,
    ) -> Self {
        let mut p = Self::zero(field, ngens);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn field(&self) -> Fp {
        self.field
    }

    pub fn num_generators(&self) -> usize {
        self.ngens
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in identity-deglex ascending order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&MultiIndex, u32)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn coeff(&self, m: &MultiIndex) -> u32 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    pub fn add_term(&mut self, m: MultiIndex, coeff: u32) {
        let c = coeff % self.field.p();
        if c == 0 {
            return;
        }
        let f = self.field;
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = f.add(*e.get(), c);
                if v == 0 {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    fn check(&self, other: &NcPoly) {
        assert_eq!(self.field, other.field, "polynomials over different fields");
        assert_eq!(self.ngens, other.ngens, "polynomials in different generator counts");
    }

    pub fn add(&self, other: &NcPoly) -> NcPoly {
        self.check(other);
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &NcPoly) -> NcPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> NcPoly {
        self.scale(self.field.neg(1))
    }

    pub fn scale(&self, c: u32) -> NcPoly {
        let c = c % self.field.p();
        let f = self.field;
        NcPoly {
            field: f,
            ngens: self.ngens,
            terms: if c == 0 {
                BTreeMap::new()
            } else {
                self.terms.iter().map(|(m, &v)| (m.clone(), f.mul(v, c))).collect()
            },
        }
    }

    /// Concatenation product.
    pub fn multiply(&self, other: &NcPoly) -> NcPoly {
        self.multiply_truncated(other, usize::MAX)
    }

    /// Product with every term of degree above `max_degree` discarded.
    pub fn multiply_truncated(&self, other: &NcPoly, max_degree: usize) -> NcPoly {
        self.check(other);
        let f = self.field;
        let mut out = NcPoly::zero(f, self.ngens);
        // other's terms are sorted by degree, so each inner loop can stop early
        for (a, &ca) in &self.terms {
            if a.degree() > max_degree {
                break;
            }
            let room = max_degree - a.degree();
            for (b, &cb) in &other.terms {
                if b.degree() > room {
                    break;
                }
                out.add_term(a.concat(b), f.mul(ca, cb));
            }
        }
        out
    }

    pub fn min_degree(&self) -> Option<usize> {
        self.terms.keys().next().map(|m| m.degree())
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.terms.keys().next_back().map(|m| m.degree())
    }

    /// The common degree if all terms have the same degree.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let lo = self.min_degree()?;
        (self.max_degree() == Some(lo)).then_some(lo)
    }

    pub fn homogeneous_part(&self, n: usize) -> NcPoly {
        NcPoly {
            field: self.field,
            ngens: self.ngens,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == n)
                .map(|(m, &c)| (m.clone(), c))
                .collect(),
        }
    }

    pub fn truncate(&self, max_degree: usize) -> NcPoly {
        NcPoly {
            field: self.field,
            ngens: self.ngens,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() <= max_degree)
                .map(|(m, &c)| (m.clone(), c))
                .collect(),
        }
    }

    pub fn constant_term(&self) -> u32 {
        self.coeff(&MultiIndex::empty())
    }

    /// The largest monomial under `order` and its coefficient.
    pub fn leading_monomial(&self, order: &DeglexOrder) -> Result<(MultiIndex, FpScalar)> {
        let top_degree = self.max_degree().ok_or(Error::EmptyPoly)?;
        let lead = self
            .terms
            .keys()
            .rev()
            .take_while(|m| m.degree() == top_degree)
            .fold(None::<&MultiIndex>, |best, m| match best {
                None => Some(m),
                Some(b) => Some(order.max(b, m)),
            })
            .expect("nonempty");
        Ok((
            lead.clone(),
            FpScalar {
                value: self.terms[lead],
                p: self.field.p(),
            },
        ))
    }

    /// Rename generators `g -> map[g]` in a space of `ngens` generators.
    pub fn relabel(&self, map: &[usize], ngens: usize) -> NcPoly {
        NcPoly::from_terms(
            self.field,
            ngens,
            self.terms.iter().map(|(m, &c)| (m.relabel(map), c)),
        )
    }

    /// Text form such as `X1*X2 + 2*X2*X1`; terms ascend in identity deglex.
    pub fn render(&self, labels: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        self.terms
            .iter()
            .map(|(m, &c)| {
                if m.is_empty() {
                    c.to_string()
                } else if c == 1 {
                    m.render(labels)
                } else {
                    format!("{}*{}", c, m.render(labels))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Parse the text form. Products may use `*` or whitespace, signs `+`/`-`,
    /// integer coefficients. Labels are matched longest first.
    pub fn parse(text: &str, field: Fp, labels: &[String]) -> Result<NcPoly> {
        PolyParser::new(text, field, labels).parse()
    }
}

impl fmt::Debug for NcPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = (1..=self.ngens).map(|i| format!("X{}", i)).collect();
        write!(f, "{}", self.render(&labels))
    }
}

struct PolyParser<'a> {
    chars: Vec<char>,
    pos: usize,
    field: Fp,
    labels: Vec<(Vec<char>, usize)>,
    ngens: usize,
    _text: &'a str,
}

impl<'a> PolyParser<'a> {
    fn new(text: &'a str, field: Fp, labels: &[String]) -> Self {
        let mut sorted: Vec<(Vec<char>, usize)> = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.chars().collect(), i))
            .collect();
        sorted.sort_by_key(|a| std::cmp::Reverse(a.0.len()));
        PolyParser {
            chars: text.chars().collect(),
            pos: 0,
            field,
            labels: sorted,
            ngens: labels.len(),
            _text: text,
        }
    }

    fn err(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            line: 1,
            column: self.pos + 1,
            message: message.into(),
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

    fn parse(mut self) -> Result<NcPoly> {
        let mut out = NcPoly::zero(self.field, self.ngens);
        self.skip_ws();
        let mut sign = 1i64;
        if self.peek() == Some('-') {
            sign = -1;
            self.pos += 1;
        } else if self.peek() == Some('+') {
            self.pos += 1;
        }
        loop {
            let (m, c) = self.term()?;
            out.add_term(m, self.field.mul(c, self.field.from_i64(sign)));
            self.skip_ws();
            match self.peek() {
                None => break,
                Some('+') => sign = 1,
                Some('-') => sign = -1,
                Some(ch) => return Err(self.err(format!("unexpected '{}'", ch))),
            }
            self.pos += 1;
        }
        Ok(out)
    }

    fn number(&mut self) -> Option<u64> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return None;
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().ok()
    }

    fn label(&mut self) -> Option<usize> {
        let rest = &self.chars[self.pos..];
        for (l, idx) in &self.labels {
            if rest.starts_with(l) {
                self.pos += l.len();
                return Some(*idx);
            }
        }
        None
    }

    fn term(&mut self) -> Result<(MultiIndex, u32)> {
        self.skip_ws();
        let mut coeff = 1u32;
        let mut word = MultiIndex::empty();
        let mut factors = 0;
        loop {
            self.skip_ws();
            let before = self.pos;
            if let Some(g) = self.label() {
                word.push(g);
            } else if let Some(n) = self.number() {
                coeff = self.field.mul(coeff, (n % self.field.p() as u64) as u32);
            } else {
                self.pos = before;
                return Err(self.err("expected a coefficient or generator label"));
            }
            factors += 1;
            self.skip_ws();
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                }
                Some('+') | Some('-') | None => break,
                Some(_) => {
                    // juxtaposition
                }
            }
        }
        debug_assert!(factors > 0);
        Ok((word, coeff))
    }
}
