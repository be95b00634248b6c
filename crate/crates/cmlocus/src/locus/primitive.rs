//! Primitive residue fields of CM points on X0(ell^a', ell^a).

use serde::{Deserialize, Serialize};

use crate::arith::{field::FieldSymbol, is_prime, ipow, OrderDisc};
use crate::error::{Error, Result};

/// The case label together with the one or two primitive residue fields.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimitiveFields {
    pub case: &'static str,
    pub fields: Vec<FieldSymbol>,
}

impl PrimitiveFields {
    /// The field not containing K, if any.
    pub fn rational(&self) -> Option<&FieldSymbol> {
        self.fields.iter().find(|f| !f.contains_k())
    }

    /// The field containing K, if any.
    pub fn ring_class(&self) -> Option<&FieldSymbol> {
        self.fields.iter().find(|f| f.contains_k())
    }
}

struct Cases<'a> {
    order: &'a OrderDisc,
    ell: u64,
}

impl Cases<'_> {
    fn q(&self, exp: u32) -> Result<FieldSymbol> {
        Ok(FieldSymbol::q(ipow(self.ell, exp)? * self.order.f, self.order.delta_k))
    }

    fn k(&self, exp: u32) -> Result<FieldSymbol> {
        Ok(FieldSymbol::k(ipow(self.ell, exp)? * self.order.f, self.order.delta_k))
    }
}

fn one(case: &'static str, f: FieldSymbol) -> Result<PrimitiveFields> {
    Ok(PrimitiveFields { case, fields: vec![f] })
}

fn two(case: &'static str, f: FieldSymbol, g: FieldSymbol) -> Result<PrimitiveFields> {
    Ok(PrimitiveFields { case, fields: vec![f, g] })
}

/// Primitive residue fields of delta-CM points on X0(ell^a', ell^a).
pub fn primitive_prime_power(order: &OrderDisc, ell: u64, a_prime: u32, a: u32) -> Result<PrimitiveFields> {
    if !is_prime(ell) {
        return Err(Error::InvalidArgument(format!("{ell} is not prime")));
    }
    if a == 0 {
        return Err(Error::InvalidArgument("a must be at least 1".into()));
    }
    if a_prime > a {
        return Err(Error::InvalidArgument(format!("a' = {a_prime} exceeds a = {a}")));
    }
    let c = Cases { order, ell };
    if a_prime == 0 {
        rational_level(&c, a)
    } else if ipow(ell, a_prime)? >= 3 {
        large_level(&c, a_prime, a)
    } else if !order.is_even() {
        odd_two(&c, a)
    } else {
        even_two(&c, a)
    }
}

fn rational_level(c: &Cases, a: u32) -> Result<PrimitiveFields> {
    let o = c.order;
    let ell = c.ell;
    let l = o.level(ell);
    let chi = o.chi(ell);
    let chi_k = o.chi_k(ell);
    if ell == 2 && a == 1 {
        return if chi != -1 { one("1.1a", c.q(0)?) } else { one("1.1b", c.q(1)?) };
    }
    match chi {
        1 => return two("1.2", c.q(a)?, c.k(0)?),
        -1 => return one("1.3", c.q(a)?),
        _ if l == 0 => return one("1.4", c.q(a - 1)?),
        _ => {}
    }
    if ell > 2 {
        return match chi_k {
            1 if a <= 2 * l => one("1.5a", c.q(0)?),
            1 => two("1.5b", c.q(a - 2 * l)?, c.k(0)?),
            -1 if a <= 2 * l => one("1.6a", c.q(0)?),
            -1 => one("1.6b", c.q(a - 2 * l)?),
            _ if a <= 2 * l + 1 => one("1.7a", c.q(0)?),
            _ => one("1.7b", c.q(a - 2 * l - 1)?),
        };
    }
    match chi_k {
        1 if l == 1 => two("1.8a", c.q(a)?, c.k(0)?),
        1 if a + 2 <= 2 * l => one("1.8b", c.q(0)?),
        1 => two("1.8c", c.q(a + 2 - 2 * l)?, c.k(0)?),
        -1 if l == 1 => two("1.9a", c.q(a)?, c.k(a - 2)?),
        -1 if a + 2 <= 2 * l => one("1.9b", c.q(0)?),
        -1 => two("1.9c", c.q(a + 2 - 2 * l)?, c.k(a.saturating_sub(2 * l))?),
        _ if o.ord2_k() == 2 && a <= 2 * l => one("1.10a", c.q(0)?),
        _ if o.ord2_k() == 2 => two("1.10b", c.q(a - 2 * l)?, c.k(a - 2 * l - 1)?),
        _ if a <= 2 * l + 1 => one("1.11a", c.q(0)?),
        _ => one("1.11b", c.q(a - 2 * l - 1)?),
    }
}

fn large_level(c: &Cases, a_prime: u32, a: u32) -> Result<PrimitiveFields> {
    let l = c.order.level(c.ell);
    match c.order.chi_k(c.ell) {
        1 => one("2.1", c.k(a_prime)?),
        -1 => one("2.2", c.k(a_prime.max(a.saturating_sub(2 * l)))?),
        _ => one("2.3", c.k(a_prime.max(a.saturating_sub(2 * l + 1)))?),
    }
}

fn odd_two(c: &Cases, a: u32) -> Result<PrimitiveFields> {
    if a == 1 {
        one("3.1", c.k(1)?)
    } else if c.order.chi(2) == 1 {
        one("3.2", c.k(1)?)
    } else {
        one("3.3", c.k(a)?)
    }
}

fn even_two(c: &Cases, a: u32) -> Result<PrimitiveFields> {
    let o = c.order;
    let l = o.level(2);
    let ord2 = o.ord2_k();
    if a == 1 {
        return one("4.0", c.q(1)?);
    }
    if l == 0 {
        return if ord2 == 2 { two("4.1", c.q(a)?, c.k(a - 1)?) } else { one("4.2", c.q(a - 1)?) };
    }
    match o.chi_k(2) {
        1 if l == 1 => two("4.3", c.q(a)?, c.k(1)?),
        1 if a < 2 * l => one("4.4", c.q(1)?),
        1 => two("4.5", c.q(a + 2 - 2 * l)?, c.k(1)?),
        -1 if l == 1 && a == 2 => two("4.6", c.q(2)?, c.k(1)?),
        -1 if l == 1 => two("4.7", c.q(a)?, c.k(a - 2)?),
        -1 if a < 2 * l => one("4.8", c.q(1)?),
        -1 if a == 2 * l => two("4.9", c.q(2)?, c.k(1)?),
        -1 => two("4.10", c.q(a + 2 - 2 * l)?, c.k(a - 2 * l)?),
        _ if ord2 == 2 && a <= 2 * l + 1 => one("4.11", c.q(1)?),
        _ if ord2 == 2 => two("4.12", c.q(a - 2 * l)?, c.k(a - 2 * l - 1)?),
        _ if a <= 2 * l + 1 => one("4.13", c.q(1)?),
        _ => one("4.14", c.q(a - 2 * l - 1)?),
    }
}

/// Minimal elements under embedding, as canonical symbols sorted and deduplicated.
pub fn minimal_fields(fields: &[FieldSymbol]) -> Result<Vec<FieldSymbol>> {
    let mut canon: Vec<FieldSymbol> = fields.iter().map(|f| f.canonical()).collect::<Result<_>>()?;
    canon.sort();
    canon.dedup();
    let mut out = Vec::new();
    for f in &canon {
        let mut minimal = true;
        for g in &canon {
            if g != f && g.embeds_in(f)? {
                minimal = false;
                break;
            }
        }
        if minimal {
            out.push(f.clone());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn show(dk: i64, f: u64, ell: u64, ap: u32, a: u32) -> (String, Vec<String>) {
        let p = primitive_prime_power(&OrderDisc::new(dk, f).unwrap(), ell, ap, a).unwrap();
        (p.case.to_string(), p.fields.iter().map(|x| x.to_string()).collect())
    }

    #[test]
    fn examples() {
        assert_eq!(show(-4, 1, 5, 0, 1), ("1.2".into(), vec!["Q(5)".into(), "K(1)".into()]));
        assert_eq!(show(-3, 1, 2, 1, 1), ("3.1".into(), vec!["K(2)".into()]));
        assert_eq!(show(-4, 1, 2, 1, 2), ("4.1".into(), vec!["Q(4)".into(), "K(2)".into()]));
        assert_eq!(show(-4, 5, 5, 0, 3).0, "1.5b");
    }

    #[test]
    fn rejects_bad_levels() {
        let o = OrderDisc::new(-4, 1).unwrap();
        assert!(primitive_prime_power(&o, 2, 2, 1).is_err());
        assert!(primitive_prime_power(&o, 4, 0, 1).is_err());
        assert!(primitive_prime_power(&o, 2, 0, 0).is_err());
    }
}
