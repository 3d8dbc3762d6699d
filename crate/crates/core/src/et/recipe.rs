use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DemushkinCase {
    I,
    II,
    III,
    IV,
}

impl DemushkinCase {
    pub fn name(self) -> &'static str {
        match self {
            DemushkinCase::I => "i",
            DemushkinCase::II => "ii",
            DemushkinCase::III => "iii",
            DemushkinCase::IV => "iv",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "i" => Some(DemushkinCase::I),
            "ii" => Some(DemushkinCase::II),
            "iii" => Some(DemushkinCase::III),
            "iv" => Some(DemushkinCase::IV),
            _ => None,
        }
    }
}

/// `q` for case i (`0` standing for `p^inf`), `f` for the other cases
/// (`None` standing for infinity).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DemushkinParam {
    Q(u64),
    F(Option<u32>),
}

impl fmt::Display for DemushkinParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DemushkinParam::Q(q) => write!(f, "q={}", q),
            DemushkinParam::F(Some(e)) => write!(f, "f={}", e),
            DemushkinParam::F(None) => write!(f, "f=inf"),
        }
    }
}

/// Recipe tree for elementary type and Pythagorean groups.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum EtRecipe {
    Free(usize),
    Demushkin {
        d: usize,
        case: DemushkinCase,
        param: DemushkinParam,
    },
    FreeProd(Box<EtRecipe>, Box<EtRecipe>),
    Semidirect {
        m: usize,
        base: Box<EtRecipe>,
    },
    /// `Z/2`, the group of a Euclidean field.
    Euclid,
    PfrFreeProd(Box<EtRecipe>, Box<EtRecipe>),
    PfrSemidirect {
        m: usize,
        base: Box<EtRecipe>,
    },
}

impl EtRecipe {
    pub fn free_prod(a: EtRecipe, b: EtRecipe) -> Self {
        EtRecipe::FreeProd(Box::new(a), Box::new(b))
    }

    pub fn semidirect(m: usize, base: EtRecipe) -> Self {
        EtRecipe::Semidirect {
            m,
            base: Box::new(base),
        }
    }

    pub fn pfr_free_prod(a: EtRecipe, b: EtRecipe) -> Self {
        EtRecipe::PfrFreeProd(Box::new(a), Box::new(b))
    }

    pub fn pfr_semidirect(m: usize, base: EtRecipe) -> Self {
        EtRecipe::PfrSemidirect {
            m,
            base: Box::new(base),
        }
    }

    /// Total number of generators.
    pub fn num_generators(&self) -> usize {
        match self {
            EtRecipe::Free(d) | EtRecipe::Demushkin { d, .. } => *d,
            EtRecipe::Euclid => 1,
            EtRecipe::FreeProd(a, b) | EtRecipe::PfrFreeProd(a, b) => {
                a.num_generators() + b.num_generators()
            }
            EtRecipe::Semidirect { m, base } | EtRecipe::PfrSemidirect { m, base } => {
                m + base.num_generators()
            }
        }
    }

    /// Leaves have depth 1.
    pub fn depth(&self) -> usize {
        match self {
            EtRecipe::Free(_) | EtRecipe::Demushkin { .. } | EtRecipe::Euclid => 1,
            EtRecipe::FreeProd(a, b) | EtRecipe::PfrFreeProd(a, b) => 1 + a.depth().max(b.depth()),
            EtRecipe::Semidirect { base, .. } | EtRecipe::PfrSemidirect { base, .. } => {
                1 + base.depth()
            }
        }
    }

    /// Built only from `euclid`, `pfr-freeprod` and `pfr-semidirect`.
    pub fn is_pfr(&self) -> bool {
        match self {
            EtRecipe::Euclid => true,
            EtRecipe::PfrFreeProd(a, b) => a.is_pfr() && b.is_pfr(),
            EtRecipe::PfrSemidirect { base, .. } => base.is_pfr(),
            _ => false,
        }
    }

    /// Built only from `free`, `demushkin`, `freeprod` and `semidirect`.
    pub fn is_et_shape(&self) -> bool {
        match self {
            EtRecipe::Free(_) | EtRecipe::Demushkin { .. } => true,
            EtRecipe::FreeProd(a, b) => a.is_et_shape() && b.is_et_shape(),
            EtRecipe::Semidirect { base, .. } => base.is_et_shape(),
            _ => false,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut p = Parser::new(text);
        let r = p.recipe()?;
        p.skip_ws();
        if let Some(c) = p.peek() {
            return Err(p.error(format!("unexpected '{}' after recipe", c)));
        }
        Ok(r)
    }
}

impl fmt::Display for EtRecipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EtRecipe::Free(d) => write!(f, "(free {})", d),
            EtRecipe::Demushkin { d, case, param } => {
                write!(f, "(demushkin {} {} {})", d, case.name(), param)
            }
            EtRecipe::FreeProd(a, b) => write!(f, "(freeprod {} {})", a, b),
            EtRecipe::Semidirect { m, base } => write!(f, "(semidirect {} {})", m, base),
            EtRecipe::Euclid => write!(f, "euclid"),
            EtRecipe::PfrFreeProd(a, b) => write!(f, "(pfr-freeprod {} {})", a, b),
            EtRecipe::PfrSemidirect { m, base } => write!(f, "(pfr-semidirect {} {})", m, base),
        }
    }
}

impl FromStr for EtRecipe {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        EtRecipe::parse(s)
    }
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    _src: &'a str,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser {
            chars: src.chars().collect(),
            pos: 0,
            _src: src,
        }
    }

    fn location(&self, pos: usize) -> (usize, usize) {
        let mut line = 1;
        let mut col = 1;
        for &c in &self.chars[..pos.min(self.chars.len())] {
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
        }
        (line, col)
    }

    fn error_at(&self, pos: usize, message: String) -> Error {
        let (line, column) = self.location(pos);
        Error::Parse {
            line,
            column,
            message,
        }
    }

    fn error(&self, message: String) -> Error {
        self.error_at(self.pos, message)
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += 1;
            } else if c == ';' {
                // comment to end of line
                while let Some(c) = self.peek() {
                    self.pos += 1;
                    if c == '\n' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn atom(&mut self) -> Result<(usize, String)> {
        self.skip_ws();
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_whitespace() || c == '(' || c == ')' || c == ';' {
                break;
            }
            self.pos += 1;
        }
        if start == self.pos {
            return Err(match self.peek() {
                Some(c) => self.error(format!("expected a symbol, found '{}'", c)),
                None => self.error("unexpected end of recipe".into()),
            });
        }
        Ok((start, self.chars[start..self.pos].iter().collect()))
    }

    fn expect(&mut self, want: char) -> Result<()> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c == want => {
                self.pos += 1;
                Ok(())
            }
            Some(c) => Err(self.error(format!("expected '{}', found '{}'", want, c))),
            None => Err(self.error(format!("expected '{}', found end of recipe", want))),
        }
    }

    fn number(&mut self, what: &str) -> Result<usize> {
        let (at, s) = self.atom()?;
        s.parse::<usize>()
            .map_err(|_| self.error_at(at, format!("expected {} (a number), found '{}'", what, s)))
    }

    fn recipe(&mut self) -> Result<EtRecipe> {
        self.skip_ws();
        if self.peek() != Some('(') {
            let (at, s) = self.atom()?;
            return match s.as_str() {
                "euclid" => Ok(EtRecipe::Euclid),
                _ => Err(self.error_at(at, format!("unknown recipe '{}'", s))),
            };
        }
        self.pos += 1;
        let (at, head) = self.atom()?;
        let r = match head.as_str() {
            "free" => EtRecipe::Free(self.number("a generator count")?),
            "euclid" => EtRecipe::Euclid,
            "demushkin" => {
                let d = self.number("a generator count")?;
                let (cat, cs) = self.atom()?;
                let case = DemushkinCase::parse(&cs)
                    .ok_or_else(|| self.error_at(cat, format!("unknown case '{}'", cs)))?;
                let (pat, ps) = self.atom()?;
                let param = parse_param(&ps)
                    .ok_or_else(|| self.error_at(pat, format!("bad parameter '{}'", ps)))?;
                match (case, param) {
                    (DemushkinCase::I, DemushkinParam::Q(_))
                    | (DemushkinCase::II | DemushkinCase::III | DemushkinCase::IV, DemushkinParam::F(_)) => {}
                    _ => {
                        return Err(self.error_at(
                            pat,
                            format!("case {} takes {}", case.name(), if case == DemushkinCase::I { "q=" } else { "f=" }),
                        ))
                    }
                }
                EtRecipe::Demushkin { d, case, param }
            }
            "freeprod" | "pfr-freeprod" => {
                let a = self.recipe()?;
                let b = self.recipe()?;
                if head == "freeprod" {
                    EtRecipe::free_prod(a, b)
                } else {
                    EtRecipe::pfr_free_prod(a, b)
                }
            }
            "semidirect" | "pfr-semidirect" => {
                let m = self.number("the rank m")?;
                let base = self.recipe()?;
                if head == "semidirect" {
                    EtRecipe::semidirect(m, base)
                } else {
                    EtRecipe::pfr_semidirect(m, base)
                }
            }
            _ => return Err(self.error_at(at, format!("unknown recipe '{}'", head))),
        };
        self.expect(')')?;
        Ok(r)
    }
}

fn parse_param(s: &str) -> Option<DemushkinParam> {
    let (k, v) = s.split_once('=')?;
    match k {
        "q" => {
            if v == "inf" {
                Some(DemushkinParam::Q(0))
            } else {
                v.parse().ok().map(DemushkinParam::Q)
            }
        }
        "f" => {
            if v == "inf" {
                Some(DemushkinParam::F(None))
            } else {
                v.parse().ok().map(|e| DemushkinParam::F(Some(e)))
            }
        }
        _ => None,
    }
}

/// Random recipe for the theorem A/B regime at the prime `p`, with at most
/// `max_d` generators and depth at most `max_depth`.
pub fn random_et_recipe<R: Rng>(rng: &mut R, p: u32, max_d: usize, max_depth: usize) -> EtRecipe {
    let budget = rng.gen_range(1..=max_d.max(1));
    random_et_inner(rng, p as u64, budget, max_depth.max(1))
}

fn random_et_inner<R: Rng>(rng: &mut R, p: u64, d: usize, depth: usize) -> EtRecipe {
    let leaf = depth == 1 || rng.gen_bool(0.35);
    if leaf || d == 1 {
        if d >= 2 && d.is_multiple_of(2) && rng.gen_bool(0.5) {
            let q = match rng.gen_range(0..3) {
                0 => 0,
                1 if p != 2 => p,
                _ => p * p,
            };
            return EtRecipe::Demushkin {
                d,
                case: DemushkinCase::I,
                param: DemushkinParam::Q(q),
            };
        }
        return EtRecipe::Free(d);
    }
    if rng.gen_bool(0.5) {
        let left = rng.gen_range(1..d);
        EtRecipe::free_prod(
            random_et_inner(rng, p, left, depth - 1),
            random_et_inner(rng, p, d - left, depth - 1),
        )
    } else {
        let m = rng.gen_range(1..d);
        EtRecipe::semidirect(m, random_et_inner(rng, p, d - m, depth - 1))
    }
}

/// Random recipe in the Pythagorean grammar.
pub fn random_pfr_recipe<R: Rng>(rng: &mut R, max_d: usize, max_depth: usize) -> EtRecipe {
    let budget = rng.gen_range(1..=max_d.max(1));
    random_pfr_inner(rng, budget, max_depth.max(1))
}

fn random_pfr_inner<R: Rng>(rng: &mut R, d: usize, depth: usize) -> EtRecipe {
    if d == 1 || depth == 1 {
        return EtRecipe::Euclid;
    }
    if rng.gen_bool(0.5) {
        let left = rng.gen_range(1..d);
        EtRecipe::pfr_free_prod(
            random_pfr_inner(rng, left, depth - 1),
            random_pfr_inner(rng, d - left, depth - 1),
        )
    } else {
        let m = rng.gen_range(1..d);
        EtRecipe::pfr_semidirect(m, random_pfr_inner(rng, d - m, depth - 1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn grammar_examples() {
        let r = EtRecipe::parse("(semidirect 2 (freeprod (free 2) (demushkin 4 i q=9)))").unwrap();
        assert_eq!(r.num_generators(), 8);
        assert_eq!(r.depth(), 3);
        assert!(r.is_et_shape());
        let r = EtRecipe::parse("(pfr-semidirect 1 euclid)").unwrap();
        assert_eq!(r, EtRecipe::pfr_semidirect(1, EtRecipe::Euclid));
        assert!(r.is_pfr());
        let r = EtRecipe::parse("(demushkin 3 ii f=inf)").unwrap();
        assert_eq!(r.to_string(), "(demushkin 3 ii f=inf)");
        assert_eq!(
            EtRecipe::parse("(demushkin 2 i q=inf)").unwrap().to_string(),
            "(demushkin 2 i q=0)"
        );
    }

    #[test]
    fn parse_errors_have_locations() {
        let e = EtRecipe::parse("(freeprod (free 2)\n  (frob 1))").unwrap_err();
        assert_eq!(
            e,
            Error::Parse {
                line: 2,
                column: 4,
                message: "unknown recipe 'frob'".into()
            }
        );
        assert!(matches!(EtRecipe::parse("(free x)"), Err(Error::Parse { column: 7, .. })));
        assert!(matches!(EtRecipe::parse("(free 2"), Err(Error::Parse { .. })));
        assert!(matches!(EtRecipe::parse("(demushkin 2 i f=2)"), Err(Error::Parse { .. })));
        assert!(matches!(EtRecipe::parse("(free 2) x"), Err(Error::Parse { .. })));
    }

    #[test]
    fn random_recipes_respect_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let r = random_et_recipe(&mut rng, 3, 6, 3);
            assert!(r.num_generators() <= 6 && r.depth() <= 3, "{}", r);
            assert!(r.is_et_shape());
            let r = random_pfr_recipe(&mut rng, 6, 3);
            assert!(r.num_generators() <= 6 && r.depth() <= 3, "{}", r);
            assert!(r.is_pfr());
        }
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(seed in any::<u64>(), pfr in any::<bool>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let r = if pfr { random_pfr_recipe(&mut rng, 8, 4) } else { random_et_recipe(&mut rng, 2, 8, 4) };
            prop_assert_eq!(EtRecipe::parse(&r.to_string()).unwrap(), r);
        }
    }
}
