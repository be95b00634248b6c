//! Closed points of X0(ell^a) over J_delta, sorted by path type.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::arith::{
    field::{Base, FieldSymbol},
    is_prime, ord, psi, units, OrderDisc,
};
use crate::error::{Error, Result};

/// (ascending, horizontal, descending) edge counts.
pub type PathType = (u32, u32, u32);

/// One row of the path-type tables: `count` closed points with field `field`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalClass {
    pub label: &'static str,
    pub path_type: PathType,
    pub field: FieldSymbol,
    /// Residual degree over Q(f).
    pub d: u64,
    pub e: u32,
    pub count: u64,
}

impl LocalClass {
    pub fn is_purely_descending(&self) -> bool {
        self.path_type.0 == 0 && self.path_type.1 == 0
    }
}

pub(crate) fn to_u64(x: BigUint, what: &str) -> Result<u64> {
    x.to_u64()
        .ok_or_else(|| Error::InvalidArgument(format!("{what} exceeds 64 bits")))
}

pub(crate) fn residual_degree(field: &FieldSymbol, f: u64) -> Result<u64> {
    let top = field.degree()?;
    let bottom = FieldSymbol::q(f, field.delta_k).degree()?;
    if &top % &bottom != BigUint::from(0u8) {
        return Err(Error::Consistency(format!("{field} does not contain Q({f})")));
    }
    to_u64(top / bottom, "residual degree")
}

struct Builder {
    delta_k: i64,
    f: u64,
    ell: u64,
    w: u64,
    out: Vec<LocalClass>,
}

impl Builder {
    fn push(&mut self, label: &'static str, t: PathType, base: Base, exp: u32, count: u64) -> Result<()> {
        if count == 0 {
            return Ok(());
        }
        let m = self
            .ell
            .checked_pow(exp)
            .and_then(|x| x.checked_mul(self.f))
            .ok_or_else(|| Error::InvalidArgument("conductor exceeds 64 bits".into()))?;
        let field = FieldSymbol::new(base, m, self.delta_k);
        let d = residual_degree(&field, self.f)?;
        let e = if self.f == 1 && t.2 > 0 { (self.w / 2) as u32 } else { 1 };
        self.out.push(LocalClass { label, path_type: t, field, d, e, count });
        Ok(())
    }
}

fn sub(x: u32, y: u32) -> u32 {
    x.saturating_sub(y)
}

fn pw(ell: u64, e: u32) -> u64 {
    ell.pow(e)
}

/// Path-type table for any imaginary quadratic field of class number one.
pub fn local_classes(delta_k: i64, f: u64, ell: u64, a: u32) -> Result<Vec<LocalClass>> {
    if !is_prime(ell) {
        return Err(Error::InvalidArgument(format!("{ell} is not prime")));
    }
    if a == 0 {
        return Err(Error::InvalidArgument("a must be at least 1".into()));
    }
    let od = OrderDisc::new(delta_k, f)?;
    let l = od.level(ell);
    let chi = od.chi_k(ell);
    let mut t = Builder { delta_k, f, ell, w: units(delta_k), out: Vec::new() };
    use Base::{K, Q};

    t.push("I", (0, 0, a), Q, a, 1)?;
    if a <= l {
        t.push("II", (a, 0, 0), Q, 0, 1)?;
    }
    if l == 0 && chi == 0 {
        t.push("III", (0, 1, a - 1), Q, a - 1, 1)?;
    }
    if l == 0 && chi == 1 {
        for h in 1..=a {
            t.push("IV", (0, h, a - h), K, a - h, 1)?;
        }
    }
    if l >= 1 && a > l && chi == 1 {
        t.push("X", (l, a - l, 0), K, 0, 1)?;
    }
    if ell > 2 {
        if l >= 2 {
            for b in 1..=(a - 1).min(l - 1) {
                let count = (ell - 1) / 2 * pw(ell, b.min(a - b) - 1);
                t.push("V", (b, 0, a - b), K, sub(a, 2 * b), count)?;
            }
        }
        if l >= 1 && a > l {
            let m = l.min(a - l);
            let exp = sub(a, 2 * l);
            match chi {
                -1 => {
                    t.push("VI", (l, 0, a - l), Q, exp, 1)?;
                    t.push("VI", (l, 0, a - l), K, exp, (pw(ell, m) - 1) / 2)?;
                }
                0 => {
                    t.push("VII", (l, 0, a - l), K, exp, (ell - 1) / 2 * pw(ell, m - 1))?;
                    let m1 = l.min(a - l - 1);
                    let exp1 = sub(a, 2 * l + 1);
                    t.push("VIII", (l, 1, a - l - 1), Q, exp1, 1)?;
                    t.push("VIII", (l, 1, a - l - 1), K, exp1, (pw(ell, m1) - 1) / 2)?;
                }
                _ => {
                    t.push("IX", (l, 0, a - l), Q, exp, 1)?;
                    t.push("IX", (l, 0, a - l), K, exp, ((ell - 2) * pw(ell, m - 1) - 1) / 2)?;
                }
            }
        }
        if l >= 1 && a >= l + 2 && chi == 1 {
            for h in 1..=(a - l - 1) {
                let count = (ell - 1) * pw(ell, l.min(a - l - h) - 1);
                t.push("XI", (l, h, a - l - h), K, sub(a, 2 * l + h), count)?;
            }
        }
    } else {
        two_adic(&mut t, &od, l, a, chi)?;
    }
    Ok(t.out)
}

fn two_adic(t: &mut Builder, od: &OrderDisc, l: u32, a: u32, chi: i8) -> Result<()> {
    use Base::{K, Q};
    if l >= 2 && a >= 2 {
        t.push("V1", (1, 0, a - 1), Q, a - 2, 1)?;
    }
    if l >= a && a >= 3 {
        t.push("V2", (a - 1, 0, 1), Q, 0, 1)?;
    }
    if chi != 0 {
        if a > l && l >= 3 {
            let m = (a - l + 1).min(l - 1);
            let exp = sub(a + 2, 2 * l);
            t.push("V3", (l - 1, 0, a - l + 1), Q, exp, 2)?;
            t.push("V3", (l - 1, 0, a - l + 1), K, exp, pw(2, m - 2) - 1)?;
        }
        if l >= 4 && a >= 4 {
            for b in 2..=(l - 2).min(a - 2) {
                t.push("V4", (b, 0, a - b), K, sub(a, 2 * b), pw(2, b.min(a - b) - 2))?;
            }
        }
        if chi == -1 && l >= 1 && a > l {
            t.push("VI", (l, 0, a - l), K, sub(a, 2 * l), pw(2, l.min(a - l) - 1))?;
        }
        if chi == 1 && l >= 1 && a >= l + 2 {
            for h in 1..=(a - l - 1) {
                let count = pw(2, l.min(a - l - h) - 1);
                t.push("XI", (l, h, a - l - h), K, sub(a, 2 * l + h), count)?;
            }
        }
        return Ok(());
    }
    let ord2 = od.ord2_k();
    if l >= 3 && a >= 4 {
        for b in 2..=(l - 1).min(a - 2) {
            t.push("V3", (b, 0, a - b), K, sub(a, 2 * b), pw(2, b.min(a - b) - 2))?;
        }
    }
    if l == 1 && a >= 2 {
        t.push("VI1", (1, 0, a - 1), Q, a - 2, 1)?;
    }
    if l >= 2 && a == l + 1 {
        t.push("VI2", (l, 0, 1), Q, 0, 1)?;
    }
    if l >= 2 && a >= l + 2 {
        let m = l.min(a - l);
        let exp = sub(a, 2 * l);
        if ord2 == 2 {
            t.push("VI3", (l, 0, a - l), Q, exp, 2)?;
            t.push("VI3", (l, 0, a - l), K, exp, pw(2, m - 2) - 1)?;
        } else {
            t.push("VI3", (l, 0, a - l), K, exp, pw(2, m - 2))?;
        }
    }
    if l >= 1 && a == l + 1 {
        t.push("VIII1", (l, 1, 0), Q, 0, 1)?;
    }
    if l >= 1 && a >= l + 2 {
        let m = l.min(a - 1 - l);
        let exp = sub(a, 2 * l + 1);
        if ord2 == 2 {
            t.push("VIII2", (l, 1, a - l - 1), K, exp, pw(2, m - 1))?;
        } else {
            t.push("VIII2", (l, 1, a - l - 1), Q, exp, 2)?;
            t.push("VIII2", (l, 1, a - l - 1), K, exp, pw(2, m - 1) - 1)?;
        }
    }
    Ok(())
}

/// Closed points of X0(ell^a) over J_delta for delta_k in {-3, -4}.
pub fn closed_point_classes(order: &OrderDisc, ell: u64, a: u32) -> Result<Vec<LocalClass>> {
    let order = OrderDisc::cm(order.delta_k, order.f)?;
    local_classes(order.delta_k, order.f, ell, a)
}

/// Sum of e * d * count over the classes, to be compared with psi(ell^a).
pub fn degree_sum(classes: &[LocalClass]) -> BigUint {
    classes
        .iter()
        .map(|c| BigUint::from(c.e) * BigUint::from(c.d) * BigUint::from(c.count))
        .sum()
}

/// True when the classes account for every cyclic ell^a-subgroup.
pub fn psi_check(classes: &[LocalClass], ell: u64, a: u32) -> Result<bool> {
    Ok(degree_sum(classes) == psi(ell.pow(a))?)
}

/// ord_ell(f) for convenience.
pub fn level(f: u64, ell: u64) -> u32 {
    ord(ell, f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cls(dk: i64, f: u64, ell: u64, a: u32) -> Vec<(Base, u64, u64, u32, u64)> {
        local_classes(dk, f, ell, a)
            .unwrap()
            .into_iter()
            .map(|c| (c.field.base, c.field.m, c.d, c.e, c.count))
            .collect()
    }

    #[test]
    fn small_fibers() {
        assert_eq!(cls(-4, 1, 2, 1), vec![(Base::Q, 2, 1, 2, 1), (Base::Q, 1, 1, 1, 1)]);
        assert_eq!(cls(-3, 1, 3, 1), vec![(Base::Q, 3, 1, 3, 1), (Base::Q, 1, 1, 1, 1)]);
        assert_eq!(cls(-4, 2, 2, 2), vec![(Base::Q, 8, 4, 1, 1), (Base::Q, 2, 1, 1, 1), (Base::Q, 2, 1, 1, 1)]);
    }

    #[test]
    fn psi_sums_all_fields() {
        for dk in [-3i64, -4, -7, -8, -11, -15, -20, -24] {
            for f in 1..=12u64 {
                for ell in [2u64, 3, 5, 7, 13] {
                    for a in 1..=6 {
                        let c = local_classes(dk, f, ell, a).unwrap();
                        assert!(psi_check(&c, ell, a).unwrap(), "dk={dk} f={f} ell={ell} a={a}");
                    }
                }
            }
        }
    }
}
