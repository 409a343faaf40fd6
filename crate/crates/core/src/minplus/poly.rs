use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rat::{parse_rat, Rat};

/// One affine term `coeff + nx*X + ny*Y`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Term {
    #[serde(with = "crate::rat::serde_str")]
    pub coeff: Rat,
    pub nx: u32,
    pub ny: u32,
}

impl Term {
    pub fn new(coeff: Rat, nx: u32, ny: u32) -> Self {
        Term { coeff, nx, ny }
    }

    pub fn eval(&self, x: &Rat, y: &Rat) -> Rat {
        &self.coeff + x * Rat::from_integer(self.nx.into()) + y * Rat::from_integer(self.ny.into())
    }

    pub fn exponent(&self) -> (i64, i64) {
        (self.nx as i64, self.ny as i64)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (e, v) in [(self.ny, "Y"), (self.nx, "X")] {
            match e {
                0 => {}
                1 => parts.push(v.to_string()),
                e => parts.push(format!("{e}{v}")),
            }
        }
        if parts.is_empty() {
            return write!(f, "{}", self.coeff);
        }
        write!(f, "{}", parts.join(" + "))?;
        if self.coeff.is_negative() {
            write!(f, " - {}", -&self.coeff)
        } else if !self.coeff.is_zero() {
            write!(f, " + {}", self.coeff)
        } else {
            Ok(())
        }
    }
}

/// A tropical polynomial in two variables, `min_i (C_i + n_i X + m_i Y)`.
///
/// Terms are kept sorted by exponent `(nx, ny)`; duplicate exponents are
/// merged by keeping the smaller coefficient, which does not change the
/// function.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Term>", into = "Vec<Term>")]
pub struct TropPoly2 {
    terms: Vec<Term>,
}

/// Result of [`TropPoly2::eval`]: the minimum and every term index attaining it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Evaluation {
    pub value: Rat,
    pub achievers: Vec<usize>,
}

impl Evaluation {
    /// True where the polynomial is not differentiable.
    pub fn on_curve(&self) -> bool {
        self.achievers.len() >= 2
    }
}

impl TropPoly2 {
    pub fn new(mut terms: Vec<Term>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidArgument(
                "tropical polynomial needs a term".into(),
            ));
        }
        terms.sort_by(|a, b| (a.nx, a.ny, &a.coeff).cmp(&(b.nx, b.ny, &b.coeff)));
        terms.dedup_by(|later, kept| later.nx == kept.nx && later.ny == kept.ny);
        Ok(TropPoly2 { terms })
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, x: &Rat, y: &Rat) -> Evaluation {
        let values: Vec<Rat> = self.terms.iter().map(|t| t.eval(x, y)).collect();
        let value = values.iter().min().cloned().expect("nonempty polynomial");
        let achievers = values
            .iter()
            .enumerate()
            .filter(|(_, v)| **v == value)
            .map(|(i, _)| i)
            .collect();
        Evaluation { value, achievers }
    }
}

/// Evaluate `F` at `(x, y)`, returning the minimum and its achieving terms.
pub fn trop_eval(f: &TropPoly2, p: (&Rat, &Rat)) -> Evaluation {
    f.eval(p.0, p.1)
}

impl TryFrom<Vec<Term>> for TropPoly2 {
    type Error = Error;
    fn try_from(terms: Vec<Term>) -> Result<Self> {
        TropPoly2::new(terms)
    }
}

impl From<TropPoly2> for Vec<Term> {
    fn from(p: TropPoly2) -> Self {
        p.terms
    }
}

impl fmt::Display for TropPoly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.terms.iter().map(Term::to_string).collect();
        write!(f, "min({})", parts.join(", "))
    }
}

impl FromStr for TropPoly2 {
    type Err = Error;

    /// Parses `min(2Y, Y+3X, Y + X + 1/2, 11)`; square brackets are accepted
    /// too, as is `a*X` for `aX`.
    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let body = s
            .strip_prefix("min")
            .unwrap_or(&s)
            .trim_start_matches(['(', '['])
            .trim_end_matches([')', ']']);
        if body.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let terms = body
            .split(',')
            .map(parse_term)
            .collect::<Result<Vec<_>>>()?;
        TropPoly2::new(terms)
    }
}

fn parse_term(s: &str) -> Result<Term> {
    if s.is_empty() {
        return Err(Error::Parse("empty term".into()));
    }
    let mut chunks = Vec::new();
    let mut start = 0;
    let bytes = s.as_bytes();
    for i in 1..bytes.len() {
        if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'/' {
            chunks.push(&s[start..i]);
            start = i;
        }
    }
    chunks.push(&s[start..]);

    let mut coeff = Rat::zero();
    let (mut nx, mut ny) = (0i64, 0i64);
    for chunk in chunks {
        let (neg, body) = match chunk.as_bytes().first() {
            Some(b'+') => (false, &chunk[1..]),
            Some(b'-') => (true, &chunk[1..]),
            _ => (false, chunk),
        };
        let var = body.chars().last().map(|c| c.to_ascii_uppercase());
        match var {
            Some(v @ ('X' | 'Y')) => {
                let mult = body[..body.len() - 1].trim_end_matches('*');
                let k: i64 = if mult.is_empty() {
                    1
                } else {
                    mult.parse().map_err(|_| {
                        Error::Parse(format!("exponent must be an integer in {s:?}"))
                    })?
                };
                let k = if neg { -k } else { k };
                if v == 'X' {
                    nx += k;
                } else {
                    ny += k;
                }
            }
            _ => {
                let c = parse_rat(body)?;
                coeff += if neg { -c } else { c };
            }
        }
    }
    if nx < 0 || ny < 0 {
        return Err(Error::Parse(format!("negative exponent in term {s:?}")));
    }
    Ok(Term::new(coeff, nx as u32, ny as u32))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, rat};

    fn poly(s: &str) -> TropPoly2 {
        s.parse().unwrap()
    }

    #[test]
    fn parses_display_style() {
        let f = poly("min(2Y, Y+3X, Y+2X, Y+X+1, Y+4, 11)");
        assert_eq!(f.len(), 6);
        assert_eq!(f.terms()[0], Term::new(int(11), 0, 0));
        assert!(f.terms().contains(&Term::new(int(1), 1, 1)));
        let g = poly("min[2*Y, Y + 1/2 - 3, 3*X]");
        assert!(g.terms().contains(&Term::new(rat(-5, 2), 0, 1)));
        assert_eq!(poly(&f.to_string()), f);
    }

    #[test]
    fn rejects_bad_terms() {
        assert!("min(X, -Y)".parse::<TropPoly2>().is_err());
        assert!("min(1/2X)".parse::<TropPoly2>().is_err());
        assert!("min()".parse::<TropPoly2>().is_err());
    }

    #[test]
    fn duplicate_exponents_keep_the_minimum() {
        let f = poly("min(X+3, X+1, Y)");
        assert_eq!(f.len(), 2);
        assert!(f.terms().contains(&Term::new(int(1), 1, 0)));
    }

    #[test]
    fn eval_examples() {
        let line = poly("min(X, Y, 1)");
        let e = line.eval(&int(1), &int(1));
        assert_eq!(e.value, int(1));
        assert_eq!(e.achievers.len(), 3);

        let e = line.eval(&int(0), &int(5));
        assert_eq!(e.value, int(0));
        assert_eq!(e.achievers.len(), 1);
        assert_eq!(line.terms()[e.achievers[0]], Term::new(int(0), 1, 0));

        let elliptic = poly("min(2Y, Y+2X, Y+X, Y+3, 10)");
        let e = elliptic.eval(&int(3), &int(3));
        assert_eq!(e.value, int(6));
        // (3,3) is the lower-right corner of the bounded face, so Y+X ties too.
        let hit: Vec<&Term> = e.achievers.iter().map(|&i| &elliptic.terms()[i]).collect();
        assert_eq!(hit.len(), 3);
        assert!(hit.contains(&&Term::new(int(0), 0, 2)));
        assert!(hit.contains(&&Term::new(int(3), 0, 1)));
        assert!(hit.contains(&&Term::new(int(0), 1, 1)));
    }
}
