//! Symbolic ring class fields K(m) and rational ring class fields Q(m).

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{divisors, factor, is_fundamental, kronecker_i64, units};
use crate::error::{Error, Result};

/// Q(m) = Q(j) or K(m) = K(j) for j of conductor m.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Base {
    Q,
    K,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FieldSymbol {
    pub base: Base,
    pub m: u64,
    pub delta_k: i64,
}

impl fmt::Display for FieldSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}({})", self.base, self.m)
    }
}

/// [K(f) : K(1)] for the field of discriminant delta_k.
pub fn rcf_rel_degree(delta_k: i64, f: u64) -> Result<BigUint> {
    if f == 0 {
        return Err(Error::InvalidArgument("conductor must be positive".into()));
    }
    if delta_k >= 0 || !is_fundamental(delta_k) {
        return Err(Error::InvalidDiscriminant(
            delta_k.to_string(),
            "not a negative fundamental discriminant",
        ));
    }
    if f == 1 {
        return Ok(BigUint::one());
    }
    let mut num = BigUint::from(2u8);
    for (p, e) in factor(f)? {
        let chi = kronecker_i64(delta_k, p as i64) as i64;
        num *= BigUint::from(p).pow(e - 1) * BigUint::from((p as i64 - chi) as u64);
    }
    let w = BigUint::from(units(delta_k));
    let (q, r) = num.div_rem(&w);
    if !r.is_zero() {
        return Err(Error::Consistency(format!("relative degree of K({f}) is not integral")));
    }
    Ok(q)
}

/// True when f^2 delta_k has class number one inside the fields Q(i), Q(sqrt(-3)).
pub fn in_s(f: u64, delta_k: i64) -> bool {
    match delta_k {
        -3 => (1..=3).contains(&f),
        -4 => (1..=2).contains(&f),
        _ => f == 1,
    }
}

/// Absolute degree of a field symbol.
pub fn field_degree(field: &FieldSymbol) -> Result<BigUint> {
    let d = rcf_rel_degree(field.delta_k, field.m)?;
    Ok(match field.base {
        Base::Q => d,
        Base::K => d * 2u8,
    })
}

impl FieldSymbol {
    pub fn new(base: Base, m: u64, delta_k: i64) -> Self {
        FieldSymbol { base, m, delta_k }
    }

    pub fn q(m: u64, delta_k: i64) -> Self {
        Self::new(Base::Q, m, delta_k)
    }

    pub fn k(m: u64, delta_k: i64) -> Self {
        Self::new(Base::K, m, delta_k)
    }

    pub fn contains_k(&self) -> bool {
        self.base == Base::K
    }

    pub fn degree(&self) -> Result<BigUint> {
        field_degree(self)
    }

    /// Smallest conductor defining the same field.
    pub fn canonical_m(&self) -> Result<u64> {
        let target = rcf_rel_degree(self.delta_k, self.m)?;
        let mut g = 0u64;
        for d in divisors(self.m)? {
            if rcf_rel_degree(self.delta_k, d)? == target {
                g = g.gcd(&d);
            }
        }
        Ok(g)
    }

    pub fn canonical(&self) -> Result<FieldSymbol> {
        Ok(FieldSymbol { m: self.canonical_m()?, ..self.clone() })
    }

    pub fn is_isomorphic(&self, other: &FieldSymbol) -> Result<bool> {
        Ok(self.delta_k == other.delta_k
            && self.base == other.base
            && self.canonical_m()? == other.canonical_m()?)
    }

    /// True when self embeds in other.
    pub fn embeds_in(&self, other: &FieldSymbol) -> Result<bool> {
        if self.delta_k != other.delta_k || (self.base == Base::K && other.base == Base::Q) {
            return Ok(false);
        }
        Ok(other.canonical_m()? % self.canonical_m()? == 0)
    }
}

/// A closure field together with the index of a compositum inside it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CompositumResult {
    pub closure: FieldSymbol,
    pub index: u64,
}

impl CompositumResult {
    pub fn exact(closure: FieldSymbol) -> Self {
        CompositumResult { closure, index: 1 }
    }

    /// Degree of the compositum itself.
    pub fn degree(&self) -> Result<BigUint> {
        Ok(field_degree(&self.closure)? / BigUint::from(self.index))
    }
}

fn shared_delta_k(fields: &[&FieldSymbol]) -> Result<i64> {
    let dk = fields
        .first()
        .ok_or_else(|| Error::InvalidArgument("empty field list".into()))?
        .delta_k;
    if fields.iter().any(|f| f.delta_k != dk) {
        return Err(Error::InvalidArgument("fields over different quadratic fields".into()));
    }
    Ok(dk)
}

/// Compositum of ring class fields K(m_1) ... K(m_r).
pub fn compose_rcf(factors: &[FieldSymbol]) -> Result<CompositumResult> {
    let refs: Vec<&FieldSymbol> = factors.iter().collect();
    let dk = shared_delta_k(&refs)?;
    if let Some(f) = factors.iter().find(|f| f.base != Base::K) {
        return Err(Error::InvalidArgument(format!("{f} is not a ring class field")));
    }
    let lcm = factors.iter().fold(1u64, |acc, f| acc.lcm(&f.m));
    // Fields in S are K itself; conductors sharing a factor merge into their lcm.
    let mut groups: Vec<u64> = Vec::new();
    for f in factors.iter().filter(|f| !in_s(f.m, dk)) {
        let mut g = f.m;
        let mut rest = Vec::new();
        for h in groups {
            if h.gcd(&g) > 1 {
                g = g.lcm(&h);
            } else {
                rest.push(h);
            }
        }
        rest.push(g);
        groups = rest;
    }
    let mut covered = BigUint::one();
    for g in &groups {
        covered *= rcf_rel_degree(dk, *g)?;
    }
    let (index, r) = rcf_rel_degree(dk, lcm)?.div_rem(&covered);
    if !r.is_zero() {
        return Err(Error::Consistency("compositum index is not integral".into()));
    }
    let index = index
        .to_u64()
        .ok_or_else(|| Error::Consistency("compositum index overflows".into()))?;
    Ok(CompositumResult { closure: FieldSymbol::k(lcm, dk), index })
}

/// Decomposes F1 tensor F2 over Q(m), m = gcd of the conductors, into a product of fields.
pub fn tensor_rcf(f1: &FieldSymbol, f2: &FieldSymbol, m: u64) -> Result<Vec<CompositumResult>> {
    let dk = shared_delta_k(&[f1, f2])?;
    for f in [f1, f2] {
        if m == 0 || f.m % m != 0 {
            return Err(Error::NotDivisible(m, f.m));
        }
    }
    if f1.m.gcd(&f2.m) != m {
        return Err(Error::InvalidArgument(format!(
            "base conductor {m} is not gcd({}, {})",
            f1.m, f2.m
        )));
    }
    let both_k = f1.contains_k() && f2.contains_k();
    let base = if f1.contains_k() || f2.contains_k() { Base::K } else { Base::Q };
    let (conductor, index) = if in_s(f1.m, dk) || in_s(f2.m, dk) {
        (f1.m.max(f2.m), 1)
    } else if m > 1 {
        (f1.m.lcm(&f2.m), 1)
    } else {
        (f1.m * f2.m, units(dk) / 2)
    };
    let piece = CompositumResult { closure: FieldSymbol::new(base, conductor, dk), index };
    let copies = if both_k { 2 } else { 1 };
    Ok(vec![piece; copies])
}
