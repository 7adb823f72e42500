use num_rational::BigRational;
use num_traits::Zero;

use super::place::Place;
use super::space::QuadraticSpace;
use crate::arith::parse_rational;
use crate::error::{Error, Result};

fn perr(position: usize, message: impl Into<String>) -> Error {
    Error::Parse { position, message: message.into() }
}

fn rational_at(s: &str, offset: usize) -> Result<BigRational> {
    parse_rational(s).map_err(|e| match e {
        Error::Parse { message, .. } => perr(offset + (s.len() - s.trim_start().len()), message),
        other => other,
    })
}

/// Comma-separated rationals starting at byte `offset` of the whole input.
fn rational_list(s: &str, offset: usize) -> Result<Vec<BigRational>> {
    let mut out = Vec::new();
    let mut pos = offset;
    for item in s.split(',') {
        if item.trim().is_empty() {
            return Err(perr(pos, "empty entry"));
        }
        out.push(rational_at(item, pos)?);
        pos += item.len() + 1;
    }
    Ok(out)
}

fn gram_rows(s: &str, offset: usize) -> Result<Vec<Vec<BigRational>>> {
    let t = s.trim();
    let lead = offset + (s.len() - s.trim_start().len());
    let inner = t
        .strip_prefix('[')
        .and_then(|x| x.strip_suffix(']'))
        .ok_or_else(|| perr(lead, "gram must look like [[a,b],[c,d]]"))?;
    let base = lead + 1;
    let bytes = inner.as_bytes();
    let mut rows = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b'[' => {
                let close = inner[i..].find(']').ok_or_else(|| perr(base + i, "unclosed '['"))? + i;
                rows.push(rational_list(&inner[i + 1..close], base + i + 1)?);
                i = close + 1;
            }
            b',' | b' ' | b'\t' => i += 1,
            _ => return Err(perr(base + i, format!("unexpected character {:?}", bytes[i] as char))),
        }
    }
    if rows.is_empty() {
        return Err(perr(base, "empty Gram matrix"));
    }
    Ok(rows)
}

/// Parses `place=R|C|Qp:<p>|Q; diag=a1,a2,...` or `place=...; gram=[[...],[...]]`.
/// Parse errors report the byte offset of the offending token.
pub fn parse_form(input: &str) -> Result<QuadraticSpace> {
    let mut place = None;
    let mut gram = None;
    let mut pos = 0;
    for part in input.split(';') {
        let here = pos;
        pos += part.len() + 1;
        if part.trim().is_empty() {
            continue;
        }
        let lead = here + (part.len() - part.trim_start().len());
        let (key, value) = part.split_once('=').ok_or_else(|| perr(lead, "expected key=value"))?;
        let voff = here + key.len() + 1;
        match key.trim() {
            "place" => {
                let p: Place = value.parse().map_err(|e| match e {
                    Error::Parse { message, .. } => perr(voff, message),
                    other => other,
                })?;
                place = Some(p);
            }
            "diag" => {
                let c = rational_list(value, voff)?;
                if let Some(i) = c.iter().position(|a| a.is_zero()) {
                    return Err(perr(voff, format!("diagonal entry {i} is zero")));
                }
                let n = c.len();
                gram = Some(
                    (0..n)
                        .map(|i| (0..n).map(|j| if i == j { c[i].clone() } else { BigRational::zero() }).collect())
                        .collect::<Vec<Vec<_>>>(),
                );
            }
            "gram" => gram = Some(gram_rows(value, voff)?),
            other => return Err(perr(lead, format!("unknown key {other:?}"))),
        }
    }
    let place = place.ok_or_else(|| perr(0, "missing place="))?;
    let gram = gram.ok_or_else(|| perr(0, "missing diag= or gram="))?;
    QuadraticSpace::new(place, gram)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn diag_syntax() {
        let q = parse_form("place=Qp:5; diag=1, 1").unwrap();
        assert_eq!(q.place(), Place::Padic(5));
        assert_eq!(q.dim(), 2);
        let q = parse_form("place=R;diag=1/2,-3").unwrap();
        assert_eq!(q.gram()[0][0], rat(1, 2));
    }

    #[test]
    fn gram_syntax() {
        let q = parse_form("place=Q; gram=[[0,1/2],[1/2,0]]").unwrap();
        assert_eq!(q.gram()[1][0], rat(1, 2));
        assert!(!q.is_diagonal());
    }

    #[test]
    fn errors_carry_positions() {
        match parse_form("place=R; diag=1,x") {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 16),
            other => panic!("{other:?}"),
        }
        match parse_form("place=Qp:4; diag=1,1") {
            Err(Error::NotPrime(4)) => {}
            other => panic!("{other:?}"),
        }
        match parse_form("place=X; diag=1,1") {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 6),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_form("diag=1,1"), Err(Error::Parse { .. })));
        assert!(matches!(parse_form("place=R; gram=[[1,2],[3"), Err(Error::Parse { .. })));
        assert_eq!(parse_form("place=R; gram=[[1,1],[1,1]]"), Err(Error::Degenerate));
    }
}
