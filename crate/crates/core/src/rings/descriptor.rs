use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesBase {
    PrimeField,
    Rationals,
}

/// Serializable description of a coefficient ring and its distinguished
/// element `q`. Big integers travel as decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RingDescriptor {
    Integers {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        p: Option<String>,
    },
    Zmod {
        m: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        p: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        n: Option<u32>,
    },
    Rationals,
    TruncSeries {
        base: SeriesBase,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        p: Option<String>,
        e: u32,
    },
    Symbolic {
        generators: Vec<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        inverted: Option<String>,
        /// Name of the generator playing `q`, or a decimal integer.
        q: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        truncation: Option<u32>,
    },
}

impl RingDescriptor {
    /// Parses the command-line grammar
    /// `zmod:<m>[:q=<p>]` | `tq:<p|Q>:<e>` | `sym[:<n>]` | `int[:q=<p>]`.
    pub fn parse_flag(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || Error::Parse(format!("bad ring flag {s:?}"));
        match parts.as_slice() {
            ["zmod", m] => {
                let m: u64 = m.parse().map_err(|_| bad())?;
                Ok(Self::zmod_auto(m))
            }
            ["zmod", m, q] => {
                let m: u64 = m.parse().map_err(|_| bad())?;
                let p: u64 = q.strip_prefix("q=").ok_or_else(bad)?.parse().map_err(|_| bad())?;
                let n = prime_power_exponent(m, p).ok_or_else(|| {
                    Error::InvalidRing(format!("q-adic structure needs m = p^n, got m={m}, p={p}"))
                })?;
                Ok(RingDescriptor::Zmod { m: m.to_string(), p: Some(p.to_string()), n: Some(n) })
            }
            ["tq", base, e] => {
                let e: u32 = e.parse().map_err(|_| bad())?;
                if *base == "Q" {
                    Ok(RingDescriptor::TruncSeries { base: SeriesBase::Rationals, p: None, e })
                } else {
                    let p: u64 = base.parse().map_err(|_| bad())?;
                    Ok(RingDescriptor::TruncSeries { base: SeriesBase::PrimeField, p: Some(p.to_string()), e })
                }
            }
            ["sym"] => Ok(Self::generic_symbolic(None)),
            ["sym", n] => Ok(Self::generic_symbolic(Some(n.parse().map_err(|_| bad())?))),
            ["int"] => Ok(RingDescriptor::Integers { p: None }),
            ["int", q] => {
                let p: u64 = q.strip_prefix("q=").ok_or_else(bad)?.parse().map_err(|_| bad())?;
                Ok(RingDescriptor::Integers { p: Some(p.to_string()) })
            }
            _ => Err(bad()),
        }
    }

    /// `Z/m`, with q-adic data filled in when `m` is a prime power.
    pub fn zmod_auto(m: u64) -> Self {
        let f = super::factorize(m);
        if f.len() == 1 {
            RingDescriptor::Zmod { m: m.to_string(), p: Some(f[0].0.to_string()), n: Some(f[0].1) }
        } else {
            RingDescriptor::Zmod { m: m.to_string(), p: None, n: None }
        }
    }

    /// `Z[a,b,c,d,e,1/b][q]`, optionally truncated at `q^n`.
    pub fn generic_symbolic(truncation: Option<u32>) -> Self {
        RingDescriptor::Symbolic {
            generators: ["a", "b", "c", "d", "e", "q"].iter().map(|s| s.to_string()).collect(),
            inverted: Some("b".into()),
            q: "q".into(),
            truncation,
        }
    }
}

fn prime_power_exponent(m: u64, p: u64) -> Option<u32> {
    if p < 2 || !super::is_prime(p) {
        return None;
    }
    let mut n = 0;
    let mut x = m;
    while x.is_multiple_of(p) {
        x /= p;
        n += 1;
    }
    (x == 1 && n > 0).then_some(n)
}

impl fmt::Display for RingDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingDescriptor::Integers { p: Some(p) } => write!(f, "Z (q={p})"),
            RingDescriptor::Integers { p: None } => write!(f, "Z"),
            RingDescriptor::Zmod { m, p: Some(p), .. } => write!(f, "Z/{m} (q={p})"),
            RingDescriptor::Zmod { m, .. } => write!(f, "Z/{m}"),
            RingDescriptor::Rationals => write!(f, "Q"),
            RingDescriptor::TruncSeries { base: SeriesBase::Rationals, e, .. } => write!(f, "Q[t]/(t^{e})"),
            RingDescriptor::TruncSeries { p, e, .. } => {
                write!(f, "F_{}[t]/(t^{e})", p.as_deref().unwrap_or("?"))
            }
            RingDescriptor::Symbolic { generators, inverted, q, truncation } => {
                write!(f, "Z[{}", generators.join(","))?;
                if let Some(b) = inverted {
                    write!(f, ",1/{b}")?;
                }
                write!(f, "]")?;
                match truncation {
                    Some(n) => write!(f, "/({q}^{n})"),
                    None => Ok(()),
                }
            }
        }
    }
}
