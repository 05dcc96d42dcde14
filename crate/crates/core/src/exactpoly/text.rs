//! Canonical text form: an explicit monomial sum such as
//! `64*c^3 + 128*c^2 - 8*c*r + 64*c + r^2 - 16*r + 64`.
//!
//! Terms are printed in descending lex order with `z > c > r`, so the output
//! is byte-stable and suitable for golden files.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{Exps, MPoly, PolyError, Var};

impl MPoly {
    /// Nonzero terms in print order.
    pub fn terms_desc(&self) -> Vec<(Exps, &BigInt)> {
        let mut terms: Vec<(Exps, &BigInt)> = self.terms().collect();
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        terms
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (e, c)) in self.terms_desc().into_iter().enumerate() {
            let negative = c.is_negative();
            match (k, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mag = c.abs();
            let mut parts: Vec<String> = Vec::new();
            let is_constant = e == [0, 0, 0];
            if !mag.is_one() || is_constant {
                parts.push(mag.to_string());
            }
            for v in Var::ALL {
                match e[v.index()] {
                    0 => {}
                    1 => parts.push(v.name().to_string()),
                    d => parts.push(format!("{}^{}", v.name(), d)),
                }
            }
            f.write_str(&parts.join("*"))?;
        }
        Ok(())
    }
}

impl FromStr for MPoly {
    type Err = PolyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let cleaned: String = s.chars().filter(|ch| !ch.is_whitespace()).collect();
        if cleaned.is_empty() {
            return Err(PolyError::Parse("empty input".into()));
        }
        let bytes = cleaned.as_bytes();
        let mut terms: Vec<(Exps, BigInt)> = Vec::new();
        let mut pos = 0;
        while pos < bytes.len() {
            let mut sign = BigInt::one();
            while pos < bytes.len() && (bytes[pos] == b'+' || bytes[pos] == b'-') {
                if bytes[pos] == b'-' {
                    sign = -sign;
                }
                pos += 1;
            }
            let end = bytes[pos..]
                .iter()
                .position(|&b| b == b'+' || b == b'-')
                .map(|k| pos + k)
                .unwrap_or(bytes.len());
            let term = &cleaned[pos..end];
            if term.is_empty() {
                return Err(PolyError::Parse(format!("dangling sign in {s:?}")));
            }
            let (e, c) = parse_term(term)?;
            terms.push((e, sign * c));
            pos = end;
        }
        Ok(MPoly::from_terms(terms))
    }
}

fn parse_term(term: &str) -> Result<(Exps, BigInt), PolyError> {
    let mut coeff = BigInt::one();
    let mut e = [0usize; 3];
    for factor in term.split('*') {
        if factor.is_empty() {
            return Err(PolyError::Parse(format!("empty factor in {term:?}")));
        }
        let (base, exp) = match factor.split_once('^') {
            Some((b, x)) => {
                let x: usize = x.parse().map_err(|_| PolyError::Parse(format!("bad exponent {x:?}")))?;
                (b, x)
            }
            None => (factor, 1),
        };
        let var = match base {
            "z" => Some(Var::Z),
            "c" => Some(Var::C),
            "r" | "rho" | "ρ" => Some(Var::R),
            _ => None,
        };
        match var {
            Some(v) => e[v.index()] += exp,
            None => {
                let n: BigInt = base.parse().map_err(|_| PolyError::Parse(format!("bad factor {base:?}")))?;
                coeff *= num_traits::pow(n, exp);
            }
        }
    }
    if coeff.is_zero() {
        return Ok(([0; 3], coeff));
    }
    Ok((e, coeff))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form_of_third_multiplier_resultant() {
        let p: MPoly = "r^2 - 16*r + 64 - 8*r*c + 64*c + 128*c^2 + 64*c^3".parse().unwrap();
        assert_eq!(p.to_string(), "64*c^3 + 128*c^2 - 8*c*r + 64*c + r^2 - 16*r + 64");
    }

    #[test]
    fn leading_minus_and_units() {
        let p: MPoly = "-z^2 + c - 1".parse().unwrap();
        assert_eq!(p.to_string(), "-z^2 + c - 1");
        assert_eq!(MPoly::zero().to_string(), "0");
        assert_eq!(MPoly::from_i64(-7).to_string(), "-7");
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!("z^".parse::<MPoly>().is_err());
        assert!("x + 1".parse::<MPoly>().is_err());
        assert!("z +".parse::<MPoly>().is_err());
    }

    #[test]
    fn round_trip_keeps_value() {
        let p: MPoly = "3*z^2*c*r^4 - 12*z + 5*c^7 - 1".parse().unwrap();
        let q: MPoly = p.to_string().parse().unwrap();
        assert_eq!(p, q);
    }
}
