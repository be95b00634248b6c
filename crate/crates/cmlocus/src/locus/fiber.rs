//! Fibers of X0(M, N) -> X(1) over J_delta, and their primitive residue fields and degrees.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::lift::{lift_residue_prime_power, lifted_classes, upper_ramification, PrimeLocalDatum};
use super::primitive::{minimal_fields, primitive_prime_power, PrimitiveFields};
use super::tables::{closed_point_classes, residual_degree, PathType};
use crate::arith::{
    factor, field::tensor_rcf, field::Base, field::FieldSymbol, ipow, ord, phi, psi, OrderDisc,
};
use crate::error::{Error, Result};

/// `count` closed points sharing a residue field, residual degree and ramification index.
/// `path_types` holds one path type per prime of N, in increasing order of the prime.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ClosedPointClass {
    pub field: FieldSymbol,
    pub d: u64,
    pub e: u32,
    pub count: u64,
    pub path_types: Vec<PathType>,
}

/// The fiber of X0(M, N) -> X(1) over J_delta.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberReport {
    pub m: u64,
    pub n: u64,
    pub order: OrderDisc,
    /// Sorted by field, then residual degree, ramification and path types.
    pub classes: Vec<ClosedPointClass>,
    /// Sum of e * d * count.
    pub check_total: BigUint,
    /// psi(N) * M * phi(M).
    pub expected_total: BigUint,
}

impl FiberReport {
    pub fn psi_check(&self) -> bool {
        self.check_total == self.expected_total
    }

    /// Classes with equal field, d and e merged regardless of path type.
    pub fn merged(&self) -> Vec<(FieldSymbol, u64, u32, u64)> {
        let mut out: BTreeMap<(FieldSymbol, u64, u32), u64> = BTreeMap::new();
        for c in &self.classes {
            *out.entry((c.field.clone(), c.d, c.e)).or_default() += c.count;
        }
        out.into_iter().map(|((f, d, e), n)| (f, d, e, n)).collect()
    }

    /// Total number of closed points.
    pub fn point_count(&self) -> u64 {
        self.classes.iter().map(|c| c.count).sum()
    }
}

/// Sum of e * d * count over classes.
pub fn degree_total(classes: &[ClosedPointClass]) -> BigUint {
    classes
        .iter()
        .map(|c| BigUint::from(c.e) * BigUint::from(c.d) * BigUint::from(c.count))
        .sum()
}

/// Degree of X0(M, N) -> X(1).
pub fn covering_degree(m: u64, n: u64) -> Result<BigUint> {
    check_levels(m, n)?;
    Ok(psi(n)? * BigUint::from(m) * phi(m)?)
}

fn check_levels(m: u64, n: u64) -> Result<()> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidArgument("levels must be positive".into()));
    }
    if !n.is_multiple_of(m) {
        return Err(Error::NotDivisible(m, n));
    }
    Ok(())
}

fn small(x: BigUint, what: &str) -> Result<u64> {
    x.to_u64()
        .ok_or_else(|| Error::InvalidArgument(format!("{what} exceeds 64 bits")))
}

fn check_data(data: &[PrimeLocalDatum]) -> Result<()> {
    for (i, x) in data.iter().enumerate() {
        if data[..i].iter().any(|y| y.ell == x.ell) {
            return Err(Error::InvalidArgument(format!("prime {} appears twice", x.ell)));
        }
    }
    Ok(())
}

/// Conductor exponent of a field symbol at ell, relative to f.
fn exponent(field: &FieldSymbol, f: u64, ell: u64) -> u32 {
    ord(ell, field.m / f)
}

/// Residue field of a CM point on X0(N) for delta in {-3, -4}, given its images on X0(ell_i^a_i).
pub fn residue_x0n(order: &OrderDisc, data: &[PrimeLocalDatum]) -> Result<FieldSymbol> {
    if order.f != 1 {
        return Err(Error::InvalidArgument("residue_x0n needs conductor 1".into()));
    }
    OrderDisc::cm(order.delta_k, 1)?;
    check_data(data)?;
    let mut m = 1u64;
    for x in data {
        m *= ipow(x.ell, x.descending)?;
    }
    let base = if data.iter().any(|x| x.split_surface_edge) { Base::K } else { Base::Q };
    Ok(FieldSymbol::new(base, m, order.delta_k))
}

/// Number of closed points of X0(N) with the given images on every X0(ell_i^a_i), and their
/// common residue field.
pub fn count_fiber_x0n(order: &OrderDisc, data: &[PrimeLocalDatum]) -> Result<(u64, FieldSymbol)> {
    let field = if order.f == 1 {
        residue_x0n(order, data)?
    } else {
        check_data(data)?;
        let mut acc = FieldSymbol::q(order.f, order.delta_k);
        for x in data {
            let m = acc.m.lcm(&x.class.field.m);
            let base = if acc.contains_k() || x.contains_k { Base::K } else { Base::Q };
            acc = FieldSymbol::new(base, m, order.delta_k);
        }
        acc
    };
    let s = data.iter().filter(|x| x.contains_k).count() as u32;
    Ok((1u64 << s.saturating_sub(1), field))
}

/// Residue field of a CM point on X0(M, N) given the images of its image on X0(N) at each prime.
///
/// For conductor 1 the data are the points of X0(ell_i^a_i) below. For larger conductors the
/// field is assembled from the lifted prime-local fields, which fails when the point below does
/// not determine the lift.
pub fn residue_x0mn(order: &OrderDisc, m: u64, n: u64, data: &[PrimeLocalDatum]) -> Result<FieldSymbol> {
    check_levels(m, n)?;
    check_data(data)?;
    let order = OrderDisc::cm(order.delta_k, order.f)?;
    let lv = levels(m, n)?;
    if lv.len() != data.len() || data.iter().any(|x| !lv.contains(&(x.ell, x.a_prime, x.a))) {
        return Err(Error::InvalidArgument(format!("data do not match the levels ({m}, {n})")));
    }
    let dk = order.delta_k;
    if order.f > 1 {
        let mut acc = FieldSymbol::q(order.f, dk);
        for x in data {
            let up = lift_residue_prime_power(&order, x)?;
            let base = if acc.contains_k() || up.contains_k() { Base::K } else { Base::Q };
            acc = FieldSymbol::new(base, acc.m.lcm(&up.m), dk);
        }
        return Ok(acc);
    }
    if m == 1 {
        return residue_x0n(&order, data);
    }
    let mut bar = 1u64;
    for x in data {
        bar *= ipow(x.ell, x.a_prime.max(x.descending))?;
    }
    if m >= 3 || dk == -3 {
        return Ok(FieldSymbol::k(bar, dk));
    }
    let two = data
        .iter()
        .find(|x| x.ell == 2)
        .ok_or_else(|| Error::Consistency("M = 2 without a datum at 2".into()))?;
    if two.a >= 2 && !two.purely_descending {
        return Ok(FieldSymbol::k(bar, dk));
    }
    let mut cond = ipow(2, two.a)?;
    for x in data.iter().filter(|x| x.ell != 2) {
        cond *= ipow(x.ell, x.descending)?;
    }
    let base = if data.iter().any(|x| x.ell != 2 && x.contains_k) { Base::K } else { Base::Q };
    Ok(FieldSymbol::new(base, cond, dk))
}

/// Number of closed points of X0(M, N), M >= 2, lying over the given points of X0(ell_i^a_i).
///
/// The halving applies whenever the points below are all real and the points above contain K.
pub fn count_fiber_x0mn(order: &OrderDisc, m: u64, n: u64, data: &[PrimeLocalDatum]) -> Result<u64> {
    let up = residue_x0mn(order, m, n, data)?;
    let s = data.iter().filter(|x| x.contains_k).count() as u32;
    let halve = s == 0 && up.contains_k();
    count_formula(order, m, data, s.saturating_sub(1), halve)
}

/// The point count with the halving condition restricted to M = 2, delta = -4 and
/// a_1 not in {1, d_1}.
pub fn count_fiber_x0mn_published(order: &OrderDisc, m: u64, n: u64, data: &[PrimeLocalDatum]) -> Result<u64> {
    check_levels(m, n)?;
    check_data(data)?;
    let s = data.iter().filter(|x| x.contains_k).count() as u32;
    let halve = s == 0
        && m == 2
        && order.f == 1
        && order.delta_k == -4
        && data.iter().any(|x| x.ell == 2 && x.a != 1 && x.a != x.descending);
    count_formula(order, m, data, s.saturating_sub(1), halve)
}

fn count_formula(order: &OrderDisc, m: u64, data: &[PrimeLocalDatum], pow2: u32, halve: bool) -> Result<u64> {
    if m < 2 {
        return Err(Error::InvalidArgument("the count over X0(N) needs M >= 2".into()));
    }
    let mut num = BigUint::one() << pow2;
    num *= BigUint::from(m) * phi(m)?;
    let mut den = BigUint::one();
    if halve {
        den *= 2u8;
    }
    for x in data.iter().filter(|x| x.a_prime > x.descending) {
        if x.descending == 0 {
            let chi = order.chi(x.ell) as i64;
            den *= BigUint::from(ipow(x.ell, x.a_prime - 1)?) * BigUint::from((x.ell as i64 - chi) as u64);
        } else {
            den *= BigUint::from(ipow(x.ell, x.a_prime - x.descending)?);
        }
    }
    let (q, r) = num.div_rem(&den);
    if !r.is_zero() || q.is_zero() {
        return Err(Error::Consistency(format!("point count {num}/{den} is not a positive integer")));
    }
    small(q, "point count")
}

/// Per-prime factorization of (M, N): (ell, a', a).
fn levels(m: u64, n: u64) -> Result<Vec<(u64, u32, u32)>> {
    check_levels(m, n)?;
    Ok(factor(n)?.into_iter().map(|(ell, a)| (ell, ord(ell, m), a)).collect())
}

/// Lower and upper bounds Q(f prod ell^b) and K(f prod ell^b) for the field of moduli of an
/// isogeny whose prime-local fields have conductor exponents b.
pub fn moduli_bounds(order: &OrderDisc, exponents: &[(u64, u32)]) -> Result<(FieldSymbol, FieldSymbol)> {
    let mut m = order.f;
    for &(ell, b) in exponents {
        m = m
            .checked_mul(ipow(ell, b)?)
            .ok_or_else(|| Error::InvalidArgument("conductor exceeds 64 bits".into()))?;
    }
    Ok((FieldSymbol::q(m, order.delta_k), FieldSymbol::k(m, order.delta_k)))
}

fn check_band(order: &OrderDisc, field: &FieldSymbol, local: &[(u64, &FieldSymbol)]) -> Result<()> {
    let exps: Vec<(u64, u32)> = local.iter().map(|(ell, g)| (*ell, exponent(g, order.f, *ell))).collect();
    let (lo, hi) = moduli_bounds(order, &exps)?;
    if !lo.embeds_in(field)? || !field.embeds_in(&hi)? {
        return Err(Error::Consistency(format!("{field} lies outside the band {lo} to {hi}")));
    }
    Ok(())
}

/// Every closed point of X0(M, N) over J_delta, for delta_k in {-3, -4}.
pub fn fiber_x0mn(order: &OrderDisc, m: u64, n: u64) -> Result<FiberReport> {
    let order = OrderDisc::cm(order.delta_k, order.f)?;
    let expected_total = covering_degree(m, n)?;
    let raw = if order.f == 1 { units_fiber(&order, m, n)? } else { tensor_fiber(&order, m, n)? };
    let mut tally: BTreeMap<(FieldSymbol, u64, u32, Vec<PathType>), u64> = BTreeMap::new();
    for c in raw {
        *tally.entry((c.field, c.d, c.e, c.path_types)).or_default() += c.count;
    }
    let classes: Vec<ClosedPointClass> = tally
        .into_iter()
        .map(|((field, d, e, path_types), count)| ClosedPointClass { field, d, e, count, path_types })
        .collect();
    let check_total = degree_total(&classes);
    if check_total != expected_total {
        return Err(Error::Consistency(format!(
            "fiber of X0({m}, {n}) over J_{} has degree {check_total}, expected {expected_total}",
            order.delta
        )));
    }
    Ok(FiberReport { m, n, order, classes, check_total, expected_total })
}

/// Conductor > 1: the fiber is the tensor product of the prime-local fibers over Q(f).
fn tensor_fiber(order: &OrderDisc, m: u64, n: u64) -> Result<Vec<ClosedPointClass>> {
    let f = order.f;
    let dk = order.delta_k;
    let mut acc = vec![(FieldSymbol::q(f, dk), 1u64, Vec::new())];
    for (ell, a_prime, a) in levels(m, n)? {
        let local = lifted_classes(order, ell, a_prime, a)?;
        let mut next = Vec::new();
        for (field, count, types) in &acc {
            for c in &local {
                check_band(order, &c.field, &[(ell, &c.field)])?;
                for piece in tensor_rcf(field, &c.field, field.m.gcd(&c.field.m))? {
                    if piece.index != 1 {
                        return Err(Error::Consistency(format!("{field} and {} are not disjoint", c.field)));
                    }
                    let mut t = types.clone();
                    t.extend(c.path_types.iter().copied());
                    next.push((piece.closure, count * c.count, t));
                }
            }
        }
        acc = next;
    }
    acc.into_iter()
        .map(|(field, count, path_types)| {
            Ok(ClosedPointClass { d: residual_degree(&field, f)?, field, e: 1, count, path_types })
        })
        .collect()
}

/// Conductor 1: assemble points of X0(N) prime by prime, then count the points of X0(M, N)
/// above each of them by degree.
fn units_fiber(order: &OrderDisc, m: u64, n: u64) -> Result<Vec<ClosedPointClass>> {
    let lv = levels(m, n)?;
    let mut per_prime = Vec::new();
    for &(ell, a_prime, a) in &lv {
        let data: Vec<PrimeLocalDatum> = closed_point_classes(order, ell, a)?
            .into_iter()
            .map(|c| PrimeLocalDatum::new(order, ell, a_prime, a, c))
            .collect::<Result<_>>()?;
        per_prime.push(data);
    }
    let deg_m = m * small(phi(m)?, "phi(M)")?;
    let mut out = Vec::new();
    let mut idx = vec![0usize; per_prime.len()];
    loop {
        let tuple: Vec<PrimeLocalDatum> = idx.iter().zip(&per_prime).map(|(&i, d)| d[i].clone()).collect();
        let multiplicity: u64 = tuple.iter().map(|x| x.class.count).product();
        let (count_y, field_y) = count_fiber_x0n(order, &tuple)?;
        let e_y = if tuple.iter().any(|x| x.descending > 0) { upper_ramification(order) } else { 1 };
        let d_y = residual_degree(&field_y, 1)?;
        let path_types: Vec<PathType> = tuple.iter().map(|x| x.path_type()).collect();
        if m == 1 {
            out.push(ClosedPointClass { field: field_y, d: d_y, e: e_y, count: multiplicity * count_y, path_types });
        } else {
            let field = residue_x0mn(order, m, n, &tuple)?;
            let local: Vec<FieldSymbol> =
                tuple.iter().map(|x| lift_residue_prime_power(order, x)).collect::<Result<_>>()?;
            let pairs: Vec<(u64, &FieldSymbol)> = tuple.iter().map(|x| x.ell).zip(&local).collect();
            check_band(order, &field, &pairs)?;
            let e = upper_ramification(order);
            let d = residual_degree(&field, 1)?;
            let num = e_y as u64 * d_y * deg_m;
            let den = e as u64 * d;
            if !num.is_multiple_of(den) {
                return Err(Error::Consistency(format!("{field} does not divide the fiber above {field_y}")));
            }
            let above = count_y * (num / den);
            let predicted = count_fiber_x0mn(order, m, n, &tuple)?;
            if predicted != above {
                return Err(Error::Consistency(format!(
                    "{above} points with field {field} above {field_y}, count formula gives {predicted}"
                )));
            }
            out.push(ClosedPointClass { field, d, e, count: multiplicity * above, path_types });
        }
        let mut k = 0;
        while k < idx.len() {
            idx[k] += 1;
            if idx[k] < per_prime[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
        if k == idx.len() {
            break;
        }
    }
    Ok(out)
}

/// Primitive residue fields and degrees of delta-CM points on X0(M, N).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimitiveSummary {
    pub fields: Vec<FieldSymbol>,
    pub degrees: Vec<BigUint>,
    /// Primes with a second, non-real primitive field.
    pub s: u32,
    /// Degree of Q(B f).
    pub bold_b: Option<BigUint>,
    /// Degree of K(C f).
    pub bold_c: Option<BigUint>,
    /// Prime-local primitive fields with their case labels.
    pub local: Vec<(u64, PrimitiveFields)>,
}

/// Primitive residue fields and primitive degrees of delta-CM points on X0(M, N).
pub fn primitive_x0mn(order: &OrderDisc, m: u64, n: u64) -> Result<PrimitiveSummary> {
    let order = OrderDisc::cm(order.delta_k, order.f)?;
    let f = order.f;
    let dk = order.delta_k;
    let mut local = Vec::new();
    for (ell, a_prime, a) in levels(m, n)? {
        local.push((ell, primitive_prime_power(&order, ell, a_prime, a)?));
    }
    let real_family = m == 1 || (m == 2 && order.is_even());
    let mut b_cond = f;
    let mut c_cond = f;
    let mut s = 0;
    let mut all_special = true;
    for (ell, p) in &local {
        let exps: Vec<u32> = p.fields.iter().map(|g| exponent(g, f, *ell)).collect();
        let c = *exps.iter().min().unwrap_or(&0);
        if real_family {
            let b = p
                .rational()
                .map(|g| exponent(g, f, *ell))
                .ok_or_else(|| Error::Consistency(format!("no real primitive field at {ell}")))?;
            b_cond *= ipow(*ell, b)?;
            if let Some(g) = p.ring_class() {
                s += 1;
                c_cond *= ipow(*ell, exponent(g, f, *ell))?;
                if p.case != "1.5b" {
                    all_special = false;
                }
            } else {
                c_cond *= ipow(*ell, b)?;
            }
        } else {
            c_cond *= ipow(*ell, c)?;
        }
    }
    if !real_family {
        let field = FieldSymbol::k(c_cond, dk);
        let deg = field.degree()?;
        return Ok(PrimitiveSummary { fields: vec![field], degrees: vec![deg.clone()], s, bold_b: None, bold_c: Some(deg), local });
    }
    let qb = FieldSymbol::q(b_cond, dk);
    let bold_b = qb.degree()?;
    if s == 0 {
        return Ok(PrimitiveSummary { fields: vec![qb], degrees: vec![bold_b.clone()], s, bold_b: Some(bold_b), bold_c: None, local });
    }
    let kc = FieldSymbol::k(c_cond, dk);
    let bold_c = kc.degree()?;
    let degrees = if all_special { vec![bold_c.clone(), bold_b.clone()] } else { vec![bold_c.clone()] };
    Ok(PrimitiveSummary { fields: vec![qb, kc], degrees, s, bold_b: Some(bold_b), bold_c: Some(bold_c), local })
}

/// Primitive fields and degrees read off an enumerated fiber: the fields with no other field
/// of the fiber embedded in them, and the degrees with no other degree dividing them.
pub fn primitive_from_fiber(report: &FiberReport) -> Result<(Vec<FieldSymbol>, Vec<BigUint>)> {
    let fields: Vec<FieldSymbol> = report.classes.iter().map(|c| c.field.clone()).collect();
    let mut degrees: Vec<BigUint> = fields.iter().map(|g| g.degree()).collect::<Result<_>>()?;
    degrees.sort();
    degrees.dedup();
    let minimal: Vec<BigUint> = degrees
        .iter()
        .filter(|d| !degrees.iter().any(|e| e != *d && (*d % e).is_zero()))
        .cloned()
        .collect();
    Ok((minimal_fields(&fields)?, minimal))
}

/// Ramification index, residue degree and number of points of X1(M, N) -> X0(M, N) above a
/// delta-CM point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct X1Transfer {
    pub e: u32,
    pub f: u64,
    pub points: u32,
}

/// True when X0(N) has delta-CM points fixed by the extra automorphisms, i.e. points with e = 1
/// over J_delta for delta in {-3, -4}.
pub fn has_elliptic_points(order: &OrderDisc, n: u64) -> Result<bool> {
    if order.w() <= 2 || n == 0 {
        return Ok(false);
    }
    Ok(factor(n)?.into_iter().all(|(ell, a)| match order.chi_k(ell) {
        1 => true,
        0 => a == 1,
        _ => false,
    }))
}

/// Behaviour of X1(M, N) -> X0(M, N) above a delta-CM point. `elliptic` selects points with
/// nontrivial stabilizer, which exist only for delta in {-3, -4} with M = 1.
pub fn x1_fiber(order: &OrderDisc, m: u64, n: u64, elliptic: bool) -> Result<X1Transfer> {
    check_levels(m, n)?;
    let half = if n <= 2 { 1 } else { small(phi(n)?, "phi(N)")? / 2 };
    if !elliptic || n <= 3 {
        if elliptic && !(m == 1 && has_elliptic_points(order, n)?) {
            return Err(Error::InvalidArgument(format!("X0({m}, {n}) has no elliptic delta = {} points", order.delta)));
        }
        return Ok(X1Transfer { e: 1, f: half, points: 1 });
    }
    if m != 1 || !has_elliptic_points(order, n)? {
        return Err(Error::InvalidArgument(format!("X0({m}, {n}) has no elliptic delta = {} points", order.delta)));
    }
    let e = (order.w() / 2) as u32;
    if half % e as u64 != 0 {
        return Err(Error::Consistency(format!("phi({n})/2 is not divisible by {e}")));
    }
    Ok(X1Transfer { e, f: half / e as u64, points: 1 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::locus::orbits::orbit_fiber;

    fn summary(classes: &[ClosedPointClass]) -> BTreeMap<(Base, u64, u64, u32), u64> {
        let mut out = BTreeMap::new();
        for c in classes {
            *out.entry((c.field.base, c.field.canonical_m().unwrap(), c.d, c.e)).or_default() += c.count;
        }
        out
    }

    #[test]
    fn small_fibers() {
        let o = OrderDisc::new(-4, 1).unwrap();
        let r = fiber_x0mn(&o, 1, 2).unwrap();
        assert_eq!(r.merged(), vec![(FieldSymbol::q(1, -4), 1, 1, 1), (FieldSymbol::q(2, -4), 1, 2, 1)]);
        let r = fiber_x0mn(&o, 2, 8).unwrap();
        assert_eq!(r.merged(), vec![(FieldSymbol::q(8, -4), 4, 2, 2), (FieldSymbol::k(4, -4), 4, 2, 1)]);
        let o3 = OrderDisc::new(-3, 1).unwrap();
        let r = fiber_x0mn(&o3, 3, 3).unwrap();
        assert_eq!(summary(&r.classes), BTreeMap::from([((Base::K, 1, 2, 3), 4)]));
        assert!(fiber_x0mn(&o, 3, 8).is_err());
    }

    #[test]
    fn fibers_match_orbits() {
        for dk in [-4i64, -3] {
            for f in 1..=4u64 {
                let o = OrderDisc::new(dk, f).unwrap();
                for n in 1..=40u64 {
                    for m in (1..=n).filter(|m| n % m == 0) {
                        let got = fiber_x0mn(&o, m, n).unwrap();
                        let want = orbit_fiber(&o, m, n).unwrap();
                        assert_eq!(summary(&got.classes), summary(&want), "dk={dk} f={f} M={m} N={n}");
                    }
                }
            }
        }
    }

    #[test]
    fn primitive_matches_fiber() {
        for dk in [-4i64, -3] {
            for f in 1..=6u64 {
                let o = OrderDisc::new(dk, f).unwrap();
                for n in 1..=60u64 {
                    for m in (1..=n).filter(|m| n % m == 0) {
                        let p = primitive_x0mn(&o, m, n).unwrap();
                        let (fields, degrees) = primitive_from_fiber(&fiber_x0mn(&o, m, n).unwrap()).unwrap();
                        assert_eq!(minimal_fields(&p.fields).unwrap(), fields, "dk={dk} f={f} M={m} N={n}");
                        let mut want = p.degrees.clone();
                        want.sort();
                        assert_eq!(want, degrees, "dk={dk} f={f} M={m} N={n}");
                    }
                }
            }
        }
    }

    #[test]
    fn published_count_misses_halving() {
        let o = OrderDisc::new(-4, 1).unwrap();
        let c = closed_point_classes(&o, 3, 1).unwrap().into_iter().next().unwrap();
        let data = vec![PrimeLocalDatum::new(&o, 3, 1, 1, c).unwrap()];
        assert_eq!(residue_x0mn(&o, 3, 3, &data).unwrap().to_string(), "K(3)");
        assert_eq!(count_fiber_x0mn(&o, 3, 3, &data).unwrap(), 3);
        assert_eq!(count_fiber_x0mn_published(&o, 3, 3, &data).unwrap(), 6);
        let c = closed_point_classes(&o, 2, 3).unwrap().into_iter().find(|c| c.path_type == (0, 0, 3)).unwrap();
        let data = vec![PrimeLocalDatum::new(&o, 2, 1, 3, c).unwrap()];
        assert_eq!(count_fiber_x0mn(&o, 2, 8, &data).unwrap(), 2);
        assert_eq!(count_fiber_x0mn_published(&o, 2, 8, &data).unwrap(), 2);
    }

    #[test]
    fn x1_examples() {
        let o = OrderDisc::new(-4, 1).unwrap();
        assert_eq!(x1_fiber(&o, 1, 5, true).unwrap(), X1Transfer { e: 2, f: 1, points: 1 });
        let o3 = OrderDisc::new(-3, 1).unwrap();
        assert_eq!(x1_fiber(&o3, 1, 7, true).unwrap(), X1Transfer { e: 3, f: 1, points: 1 });
        let o16 = OrderDisc::new(-4, 2).unwrap();
        assert_eq!(x1_fiber(&o16, 1, 7, false).unwrap(), X1Transfer { e: 1, f: 3, points: 1 });
        assert!(x1_fiber(&o16, 1, 7, true).is_err());
        assert!(x1_fiber(&o, 2, 10, true).is_err());
        assert!(x1_fiber(&o, 1, 3, true).is_err());
        assert_eq!(x1_fiber(&o, 1, 2, true).unwrap(), X1Transfer { e: 1, f: 1, points: 1 });
    }

    #[test]
    fn elliptic_points_match_fibers() {
        for dk in [-4i64, -3] {
            let o = OrderDisc::new(dk, 1).unwrap();
            for n in 1..=100u64 {
                let unramified = fiber_x0mn(&o, 1, n).unwrap().classes.iter().any(|c| c.e == 1);
                assert_eq!(has_elliptic_points(&o, n).unwrap(), unramified, "dk={dk} N={n}");
            }
        }
    }

    #[test]
    fn bounds_example() {
        let o = OrderDisc::new(-4, 1).unwrap();
        let (lo, hi) = moduli_bounds(&o, &[(2, 2), (5, 1)]).unwrap();
        assert_eq!((lo.to_string(), hi.to_string()), ("Q(20)".into(), "K(20)".into()));
    }
}
