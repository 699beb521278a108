//! Value parsers for command-line arguments.

use hdk_core::completions::{Place, Target};
use hdk_core::divisor::Divisor;
use hdk_core::internal::{IndexFilterSpec, IndexSet, IndexedElement, PrimeIdeal};
use hdk_core::lattice::PrimeSet;
use hdk_core::rational::parse_rational;
use hdk_core::Prime;
use num_rational::BigRational;

pub fn rational(s: &str) -> Result<BigRational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

pub fn prime(s: &str) -> Result<Prime, String> {
    s.trim().parse().map_err(|e: hdk_core::Error| e.to_string())
}

pub fn place(s: &str) -> Result<Place, String> {
    s.parse().map_err(|e: hdk_core::Error| e.to_string())
}

/// Comma-separated primes.
pub fn prime_set(s: &str) -> Result<PrimeSet, String> {
    if s.trim().is_empty() {
        return Ok(PrimeSet::new());
    }
    s.split(',').map(prime).collect()
}

/// `{"2":1,"3":2}`, or `2:1,3:2`.
pub fn divisor(s: &str) -> Result<Divisor, String> {
    let s = s.trim();
    if s.starts_with('{') {
        return serde_json::from_str(s).map_err(|e| e.to_string());
    }
    let mut entries = Vec::new();
    for part in s.split(',').filter(|t| !t.trim().is_empty()) {
        let (p, e) = part.split_once(':').ok_or_else(|| format!("expected prime:exponent, got {part}"))?;
        entries.push((prime(p)?, e.trim().parse::<i64>().map_err(|e| e.to_string())?));
    }
    Ok(Divisor::new(entries))
}

/// `place:value:eps`.
pub fn target(s: &str) -> Result<Target, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [pl, v, e] = parts[..] else {
        return Err(format!("expected place:value:eps, got {s}"));
    };
    Ok(Target::new(place(pl)?, rational(v)?, rational(e)?))
}

/// An element as JSON, or a bare rational.
pub fn element(s: &str) -> Result<IndexedElement, String> {
    let v = serde_json::from_str(s).unwrap_or_else(|_| serde_json::Value::String(s.to_string()));
    IndexedElement::from_json(&v).map_err(|e| e.to_string())
}

/// `frechet`, `ultra:i`, `principal:i,j,…`, or JSON.
pub fn index_filter(s: &str) -> Result<IndexFilterSpec, String> {
    let s = s.trim();
    if s.starts_with('{') {
        return serde_json::from_str(s).map_err(|e| e.to_string());
    }
    let (head, tail) = s.split_once(':').unwrap_or((s, ""));
    let indices = || -> Result<Vec<usize>, String> {
        tail.split(',').filter(|t| !t.is_empty()).map(|t| t.trim().parse::<usize>().map_err(|e| e.to_string())).collect()
    };
    match head {
        "frechet" => Ok(IndexFilterSpec::Frechet),
        "ultra" => Ok(IndexFilterSpec::PrincipalUltra { index: tail.trim().parse().map_err(|e: std::num::ParseIntError| e.to_string())? }),
        "principal" => Ok(IndexFilterSpec::Principal { set: indices()?.into_iter().collect() }),
        _ => Err(format!("unknown filter {s}")),
    }
}

/// `finite:i,j` or `cofinite:i,j`.
pub fn index_set(s: &str) -> Result<IndexSet, String> {
    let (head, tail) = s.split_once(':').unwrap_or((s, ""));
    let idx: Vec<usize> = tail
        .split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| t.trim().parse::<usize>().map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    match head {
        "finite" => Ok(IndexSet::finite(idx)),
        "cofinite" => Ok(IndexSet::cofinite(idx)),
        _ => Err(format!("expected finite:… or cofinite:…, got {s}")),
    }
}

/// `(0)`, `m_p`, or `m_p^inf`.
pub fn prime_ideal(s: &str, rank: usize) -> Result<PrimeIdeal, String> {
    let s = s.trim();
    if s == "(0)" || s == "0" {
        return Ok(PrimeIdeal::Zero);
    }
    let body = s.strip_prefix("m_").ok_or_else(|| format!("expected (0), m_p or m_p^inf, got {s}"))?;
    match body.strip_suffix("^inf") {
        Some(p) => {
            if rank < 2 {
                return Err("m_p^inf needs --rank 2".into());
            }
            Ok(PrimeIdeal::AtPrime { prime: prime(p)?, rank, level: 1 })
        }
        None => Ok(PrimeIdeal::maximal(prime(body)?, rank)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use hdk_core::rational::rat;

    #[test]
    fn targets_and_divisors() {
        let t = target("2:1:1/8").unwrap();
        assert_eq!((t.place.to_string(), t.eps), ("2".to_string(), rat(1, 8)));
        assert!(target("2:1").is_err());
        assert_eq!(divisor("2:1,3:-2").unwrap(), divisor(r#"{"2":1,"3":-2}"#).unwrap());
        assert_eq!(place("inf").unwrap(), Place::Real);
    }

    #[test]
    fn ideals_and_filters() {
        assert_eq!(prime_ideal("(0)", 2).unwrap(), PrimeIdeal::Zero);
        assert_eq!(prime_ideal("m_2^inf", 2).unwrap().to_string(), "m_2^inf");
        assert!(prime_ideal("m_2^inf", 1).is_err());
        assert_eq!(index_filter("ultra:3").unwrap(), IndexFilterSpec::PrincipalUltra { index: 3 });
        assert_eq!(index_set("cofinite:0,1").unwrap(), IndexSet::cofinite([0, 1]));
        assert_eq!(element("7/3").unwrap(), IndexedElement::constant(rat(7, 3)));
    }
}
