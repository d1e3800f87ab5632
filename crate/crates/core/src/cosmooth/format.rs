//! Text format for presentations and human-readable descriptions.
//!
//! ```text
//! cosmooth p=2 n=2 r=1 ring=mq 2 vars=l bounds=*
//! a[1][1] = [l, 0]
//! ```

use std::fmt;
use std::str::FromStr;

use super::Presentation;
use crate::error::{parse_err, Error, Result};
use crate::ring::{Ring, RingElement};

impl Presentation {
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "cosmooth p={} n={} r={} ring={}\n",
            self.p(),
            self.n,
            self.r,
            self.ring.spec()
        );
        for i in 0..self.r {
            for j in 0..self.r {
                let list: Vec<String> = self.coeff_list(i, j).iter().map(|c| c.to_string()).collect();
                out.push_str(&format!("a[{}][{}] = [{}]\n", i + 1, j + 1, list.join(", ")));
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Presentation> {
        let mut lines = text
            .lines()
            .map(|l| l.split('#').next().unwrap().trim())
            .filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| parse_err("empty presentation file"))?;
        let rest = header
            .strip_prefix("cosmooth")
            .ok_or_else(|| parse_err("presentation must start with `cosmooth`"))?;
        let (params, ring_text) = rest
            .split_once("ring=")
            .ok_or_else(|| parse_err("header is missing `ring=`"))?;
        let ring = Ring::parse_spec(ring_text.trim())?;
        let (mut p, mut n, mut r) = (None, None, None);
        for field in params.split_whitespace() {
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| parse_err(format!("bad header field `{field}`")))?;
            let value: usize = value
                .parse()
                .map_err(|_| parse_err(format!("bad value in header field `{field}`")))?;
            match key {
                "p" => p = Some(value),
                "n" => n = Some(value),
                "r" => r = Some(value),
                _ => return Err(parse_err(format!("unknown header field `{key}`"))),
            }
        }
        let n = n.ok_or_else(|| parse_err("header is missing `n=`"))?;
        let r = r.ok_or_else(|| parse_err("header is missing `r=`"))?;
        if let Some(p) = p {
            if p != ring.p() as usize {
                return Err(Error::ParamsMismatch(format!(
                    "header says p={p} but the ring has characteristic {}",
                    ring.p()
                )));
            }
        }
        if n == 0 || r == 0 {
            return Err(Error::Shape("level and rank must be at least 1".into()));
        }
        let mut slots: Vec<Option<Vec<RingElement>>> = vec![None; r * r];
        for line in lines {
            let (lhs, rhs) = line
                .split_once('=')
                .ok_or_else(|| parse_err(format!("expected `a[i][j] = [...]`, got `{line}`")))?;
            let (i, j) = parse_index(lhs.trim())?;
            if i == 0 || j == 0 || i > r || j > r {
                return Err(Error::Shape(format!("index a[{i}][{j}] out of range for r={r}")));
            }
            let inner = rhs
                .trim()
                .strip_prefix('[')
                .and_then(|s| s.strip_suffix(']'))
                .ok_or_else(|| parse_err(format!("coefficients must be bracketed in `{line}`")))?;
            let list = inner.split(',').map(|c| ring.parse(c.trim())).collect::<Result<Vec<_>>>()?;
            if list.len() != n {
                return Err(Error::Shape(format!(
                    "a[{i}][{j}] has {} coefficients, expected {n}",
                    list.len()
                )));
            }
            let slot = &mut slots[(i - 1) * r + (j - 1)];
            if slot.is_some() {
                return Err(parse_err(format!("a[{i}][{j}] given twice")));
            }
            *slot = Some(list);
        }
        let mut coeffs = Vec::with_capacity(r * r * n);
        for (idx, slot) in slots.into_iter().enumerate() {
            let list = slot.ok_or_else(|| {
                Error::Shape(format!("missing a[{}][{}]", idx / r + 1, idx % r + 1))
            })?;
            coeffs.extend(list);
        }
        Presentation::from_flat(&ring, n, r, coeffs)
    }

    /// `a_ij(V)` written as an operator, e.g. `[l] + V[1]`.
    pub fn operator_string(&self, i: usize, j: usize) -> String {
        let parts: Vec<String> = self
            .coeff_list(i, j)
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| {
                if k == 0 && c.is_one() {
                    "1".to_string()
                } else {
                    crate::cartier::format_monomial(k, c, 0)
                }
            })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }

    /// The module as a quotient of `E_n^r`, e.g. `E_2/E_2(F - [l])`.
    pub fn describe(&self) -> String {
        let n = self.n;
        if self.r == 1 {
            let a = self.operator_string(0, 0);
            return match a.as_str() {
                "0" => format!("E_{n}/E_{n}F"),
                _ if a.contains(" + ") => format!("E_{n}/E_{n}(F - ({a}))"),
                _ => format!("E_{n}/E_{n}(F - {a})"),
            };
        }
        let relations: Vec<String> = (0..self.r)
            .map(|i| {
                let mut rel = format!("F e{}", i + 1);
                for j in 0..self.r {
                    let a = self.operator_string(i, j);
                    match a.as_str() {
                        "0" => {}
                        "1" => rel.push_str(&format!(" - e{}", j + 1)),
                        _ if a.contains(" + ") => rel.push_str(&format!(" - ({a})e{}", j + 1)),
                        _ => rel.push_str(&format!(" - {a}e{}", j + 1)),
                    }
                }
                rel
            })
            .collect();
        format!("E_{n}^{}/({})", self.r, relations.join(", "))
    }
}

fn parse_index(lhs: &str) -> Result<(usize, usize)> {
    let err = || parse_err(format!("expected `a[i][j]`, got `{lhs}`"));
    let rest = lhs.strip_prefix('a').ok_or_else(err)?.trim();
    let rest = rest.strip_prefix('[').ok_or_else(err)?;
    let (i, rest) = rest.split_once(']').ok_or_else(err)?;
    let rest = rest.trim().strip_prefix('[').ok_or_else(err)?;
    let (j, rest) = rest.split_once(']').ok_or_else(err)?;
    if !rest.trim().is_empty() {
        return Err(err());
    }
    Ok((i.trim().parse().map_err(|_| err())?, j.trim().parse().map_err(|_| err())?))
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.describe())
    }
}

impl FromStr for Presentation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Presentation> {
        Presentation::from_text(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let text = "cosmooth p=3 n=2 r=2 ring=gf 3 d=2 mod=x^2+1\n\
                    a[1][1] = [x, 0]\na[1][2] = [1, 2*x+1]\na[2][1] = [0, 0]\na[2][2] = [2, x]\n";
        let p = Presentation::from_text(text).unwrap();
        assert_eq!(p.rank(), 2);
        assert_eq!(Presentation::from_text(&p.to_text()).unwrap(), p);
        assert_eq!(p.to_text(), Presentation::from_text(&p.to_text()).unwrap().to_text());
    }

    #[test]
    fn comments_and_errors() {
        let ok = "# a family\ncosmooth p=2 n=1 r=1 ring=mq 2 vars=l bounds=*\na[1][1] = [l] # F e = [l] e\n";
        let p = Presentation::from_text(ok).unwrap();
        assert_eq!(p.describe(), "E_1/E_1(F - [l])");
        assert!(Presentation::from_text("cosmooth p=3 n=1 r=1 ring=fp 2\na[1][1] = [1]").is_err());
        assert!(Presentation::from_text("cosmooth p=2 n=2 r=1 ring=fp 2\na[1][1] = [1]").is_err());
        assert!(Presentation::from_text("cosmooth p=2 n=1 r=2 ring=fp 2\na[1][1] = [1]").is_err());
        assert!(Presentation::from_text("cosmooth p=2 n=1 r=1 ring=fp 2\na[2][1] = [1]").is_err());
    }

    #[test]
    fn descriptions() {
        let r = Ring::prime_field(2).unwrap();
        let zero = Presentation::rank_one(&r, vec![r.zero(), r.zero()]).unwrap();
        assert_eq!(zero.describe(), "E_2/E_2F");
        let one = Presentation::rank_one(&r, vec![r.one(), r.zero()]).unwrap();
        assert_eq!(one.describe(), "E_2/E_2(F - 1)");
        let both = Presentation::rank_one(&r, vec![r.one(), r.one()]).unwrap();
        assert_eq!(both.describe(), "E_2/E_2(F - (1 + V[1]))");
        let o = r.one();
        let z = r.zero();
        let two = Presentation::new(&r, 1, vec![vec![vec![z.clone()], vec![o.clone()]], vec![vec![o], vec![z]]])
            .unwrap();
        assert_eq!(two.describe(), "E_1^2/(F e1 - e2, F e2 - e1)");
    }
}
