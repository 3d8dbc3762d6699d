use std::io::{Read, Write};

use crate::error::{Error, Result};

/// Largest order accepted from files.
pub const MAX_ORDER: usize = 256;

/// A finite group as an explicit multiplication table on `0..order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroupTable {
    order: usize,
    table: Vec<usize>,
    identity: usize,
    inverses: Vec<usize>,
}

impl FiniteGroupTable {
    /// Validates closure, associativity, identity and inverses.
    pub fn new(table: Vec<Vec<usize>>, identity: usize) -> Result<Self> {
        let n = table.len();
        let bad = |m: String| Err(Error::InvalidGroupTable(m));
        if n == 0 {
            return bad("empty table".into());
        }
        if n > MAX_ORDER {
            return bad(format!("order {} exceeds the limit {}", n, MAX_ORDER));
        }
        if identity >= n {
            return bad(format!("identity {} out of range", identity));
        }
        let mut flat = Vec::with_capacity(n * n);
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return bad(format!("row {} has {} entries, expected {}", i, row.len(), n));
            }
            if let Some(&x) = row.iter().find(|&&x| x >= n) {
                return bad(format!("entry {} in row {} out of range", x, i));
            }
            flat.extend_from_slice(row);
        }
        let m = |a: usize, b: usize| flat[a * n + b];
        for a in 0..n {
            if m(identity, a) != a || m(a, identity) != a {
                return bad(format!("{} is not an identity for {}", identity, a));
            }
        }
        let mut inverses = vec![usize::MAX; n];
        for a in 0..n {
            match (0..n).find(|&b| m(a, b) == identity) {
                Some(b) if m(b, a) == identity => inverses[a] = b,
                _ => return bad(format!("element {} has no inverse", a)),
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = m(a, b);
                for c in 0..n {
                    if m(ab, c) != m(a, m(b, c)) {
                        return bad(format!("associativity fails at ({}, {}, {})", a, b, c));
                    }
                }
            }
        }
        Ok(FiniteGroupTable {
            order: n,
            table: flat,
            identity,
            inverses,
        })
    }

    fn from_fn(order: usize, identity: usize, f: impl Fn(usize, usize) -> usize) -> Self {
        let table = (0..order)
            .map(|a| (0..order).map(|b| f(a, b)).collect())
            .collect();
        Self::new(table, identity).expect("built-in tables are groups")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn pow(&self, a: usize, e: u64) -> usize {
        let mut acc = self.identity;
        for _ in 0..e {
            acc = self.mul(acc, a);
        }
        acc
    }

    /// `a^-1 b^-1 a b`
    pub fn commutator(&self, a: usize, b: usize) -> usize {
        let x = self.mul(self.inv(a), self.inv(b));
        self.mul(self.mul(x, a), b)
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order).map(|r| r.to_vec()).collect()
    }

    /// Smallest subgroup containing `gens`, as a sorted element list.
    pub fn generated(&self, gens: impl IntoIterator<Item = usize>) -> Vec<usize> {
        let gens: Vec<usize> = gens.into_iter().collect();
        let mut seen = vec![false; self.order];
        seen[self.identity] = true;
        let mut stack = vec![self.identity];
        while let Some(x) = stack.pop() {
            for &g in &gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        (0..self.order).filter(|&i| seen[i]).collect()
    }

    pub fn cyclic(n: usize) -> Self {
        Self::from_fn(n, 0, |a, b| (a + b) % n)
    }

    /// Pairs `(a, b)` encoded as `a * |H| + b`.
    pub fn direct_product(&self, other: &FiniteGroupTable) -> Self {
        let m = other.order;
        Self::from_fn(self.order * m, self.identity * m + other.identity, |x, y| {
            self.mul(x / m, y / m) * m + other.mul(x % m, y % m)
        })
    }

    pub fn elementary_abelian(p: usize, k: u32) -> Self {
        let mut g = Self::cyclic(1);
        for _ in 0..k {
            g = g.direct_product(&Self::cyclic(p));
        }
        g
    }

    /// Dihedral group of the given order `2n`; `r^i s^e` is `i + n e`.
    pub fn dihedral(order: usize) -> Result<Self> {
        if order < 4 || !order.is_multiple_of(2) {
            return Err(Error::InvalidGroupTable(format!("no dihedral group of order {}", order)));
        }
        let n = order / 2;
        Ok(Self::from_fn(order, 0, |x, y| {
            let (i, a) = (x % n, x / n);
            let (j, b) = (y % n, y / n);
            let k = if a == 0 { i + j } else { i + n - j };
            k % n + n * ((a + b) % 2)
        }))
    }

    /// `a^n = b^m = 1`, `b a b^-1 = a^r`; `a^i b^e` is `i + n e`.
    /// Requires `r^m = 1 mod n`.
    pub fn metacyclic(n: usize, m: usize, r: usize) -> Result<Self> {
        let mut rm = 1usize;
        for _ in 0..m {
            rm = rm * r % n;
        }
        if n == 0 || m == 0 || rm != 1 % n {
            return Err(Error::InvalidGroupTable(format!(
                "{}^{} is not 1 mod {}",
                r, m, n
            )));
        }
        let rpow: Vec<usize> = (0..m)
            .scan(1usize, |acc, _| {
                let v = *acc;
                *acc = *acc * r % n;
                Some(v)
            })
            .collect();
        Ok(Self::from_fn(n * m, 0, |x, y| {
            let (i, e) = (x % n, x / n);
            let (j, f) = (y % n, y / n);
            (i + rpow[e] * j) % n + n * ((e + f) % m)
        }))
    }

    /// Generalized quaternion group of order `4n`: `a^(2n) = 1`, `b^2 = a^n`,
    /// `b a b^-1 = a^-1`; `a^i b^e` is `i + 2n e`.
    pub fn quaternion(order: usize) -> Result<Self> {
        if order < 8 || !order.is_multiple_of(4) {
            return Err(Error::InvalidGroupTable(format!("no quaternion group of order {}", order)));
        }
        let m = order / 2;
        let n = order / 4;
        Ok(Self::from_fn(order, 0, |x, y| {
            let (i, e) = (x % m, x / m);
            let (j, f) = (y % m, y / m);
            let k = if e == 0 { i + j } else { i + m - j };
            if e == 1 && f == 1 {
                (k + n) % m
            } else {
                k % m + m * ((e + f) % 2)
            }
        }))
    }

    pub fn quaternion8() -> Self {
        Self::quaternion(8).expect("order 8")
    }

    /// Upper unitriangular 3x3 matrices over `Z/p`; `(a, b, c)` is
    /// `a + p b + p^2 c` with product `(a+a', b+b', c+c'+a b')`.
    pub fn heisenberg(p: usize) -> Self {
        let dec = |x: usize| (x % p, (x / p) % p, x / (p * p));
        Self::from_fn(p * p * p, 0, |x, y| {
            let (a, b, c) = dec(x);
            let (a2, b2, c2) = dec(y);
            (a + a2) % p + p * ((b + b2) % p) + p * p * ((c + c2 + a * b2) % p)
        })
    }

    /// CSV: a record `identity,<k>` followed by one row of indices per element.
    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let mut identity = None;
        let mut rows = Vec::new();
        for (line, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(|e| Error::Parse {
                line: line + 1,
                column: 1,
                message: e.to_string(),
            })?;
            let parse = |col: usize, s: &str| {
                s.parse::<usize>().map_err(|_| Error::Parse {
                    line: line + 1,
                    column: col + 1,
                    message: format!("expected an index, found {:?}", s),
                })
            };
            if identity.is_none() {
                if rec.len() != 2 || &rec[0] != "identity" {
                    return Err(Error::Parse {
                        line: line + 1,
                        column: 1,
                        message: "expected header `identity,<index>`".into(),
                    });
                }
                identity = Some(parse(1, &rec[1])?);
                continue;
            }
            rows.push(
                rec.iter()
                    .enumerate()
                    .map(|(c, s)| parse(c, s))
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        let identity = identity.ok_or_else(|| Error::Parse {
            line: 1,
            column: 1,
            message: "empty table file".into(),
        })?;
        Self::new(rows, identity)
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let io = |e: csv::Error| Error::InvalidInput(e.to_string());
        let mut w = csv::WriterBuilder::new().flexible(true).from_writer(writer);
        w.write_record(["identity".to_string(), self.identity.to_string()])
            .map_err(io)?;
        for row in self.rows() {
            w.write_record(row.iter().map(|x| x.to_string())).map_err(io)?;
        }
        w.flush().map_err(|e| Error::InvalidInput(e.to_string()))
    }

    pub fn from_csv_str(text: &str) -> Result<Self> {
        Self::read_csv(text.as_bytes())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ascii")
    }

    /// The built-in groups of order up to 16 (p = 2) or 27 (p = 3).
    pub fn small_catalog(p: usize) -> Vec<(String, FiniteGroupTable)> {
        let c = Self::cyclic;
        match p {
            2 => vec![
                ("Z2".into(), c(2)),
                ("Z4".into(), c(4)),
                ("Z2^2".into(), Self::elementary_abelian(2, 2)),
                ("Z8".into(), c(8)),
                ("Z4xZ2".into(), c(4).direct_product(&c(2))),
                ("Z2^3".into(), Self::elementary_abelian(2, 3)),
                ("D8".into(), Self::dihedral(8).unwrap()),
                ("Q8".into(), Self::quaternion8()),
                ("Z16".into(), c(16)),
                ("Z8xZ2".into(), c(8).direct_product(&c(2))),
                ("Z4xZ4".into(), c(4).direct_product(&c(4))),
                ("Z4xZ2^2".into(), c(4).direct_product(&Self::elementary_abelian(2, 2))),
                ("Z2^4".into(), Self::elementary_abelian(2, 4)),
                ("D16".into(), Self::dihedral(16).unwrap()),
                ("Q16".into(), Self::quaternion(16).unwrap()),
                ("D8xZ2".into(), Self::dihedral(8).unwrap().direct_product(&c(2))),
                ("Q8xZ2".into(), Self::quaternion8().direct_product(&c(2))),
                ("SD16".into(), Self::metacyclic(8, 2, 3).unwrap()),
                ("M16".into(), Self::metacyclic(8, 2, 5).unwrap()),
                ("Z4:Z4".into(), Self::metacyclic(4, 4, 3).unwrap()),
            ],
            3 => vec![
                ("Z3".into(), c(3)),
                ("Z9".into(), c(9)),
                ("Z3^2".into(), Self::elementary_abelian(3, 2)),
                ("Z27".into(), c(27)),
                ("Z9xZ3".into(), c(9).direct_product(&c(3))),
                ("Z3^3".into(), Self::elementary_abelian(3, 3)),
                ("Heis27".into(), Self::heisenberg(3)),
                ("Z9:Z3".into(), Self::metacyclic(9, 3, 4).unwrap()),
            ],
            _ => vec![
                (format!("Z{}", p), c(p)),
                (format!("Z{}^2", p), Self::elementary_abelian(p, 2)),
            ],
        }
    }
}
