use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::arith::check_prime;
use crate::error::{Error, Result};

/// Where a quadratic form lives: a completion of ℚ, ℂ, or ℚ itself.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Real,
    Complex,
    Padic(u64),
    Global,
}

impl Place {
    pub fn padic(p: u64) -> Result<Self> {
        check_prime(p)?;
        Ok(Place::Padic(p))
    }

    pub fn prime(&self) -> Option<u64> {
        match self {
            Place::Padic(p) => Some(*p),
            _ => None,
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Real => write!(f, "R"),
            Place::Complex => write!(f, "C"),
            Place::Padic(p) => write!(f, "Qp:{p}"),
            Place::Global => write!(f, "Q"),
        }
    }
}

impl FromStr for Place {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        match t {
            "R" => Ok(Place::Real),
            "C" => Ok(Place::Complex),
            "Q" => Ok(Place::Global),
            _ => {
                let p = t
                    .strip_prefix("Qp:")
                    .and_then(|p| p.trim().parse::<u64>().ok())
                    .ok_or_else(|| Error::Parse {
                        position: 0,
                        message: format!("unknown place {t:?} (expected R, C, Q or Qp:<p>)"),
                    })?;
                Place::padic(p)
            }
        }
    }
}

impl Serialize for Place {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
