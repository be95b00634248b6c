//! Residue fields on X0(ell^a', ell^a) lifted from X0(ell^a).

use num_traits::ToPrimitive;
use serde::Serialize;

use super::fiber::ClosedPointClass;
use super::tables::{local_classes, residual_degree, LocalClass, PathType};
use crate::arith::{
    field::FieldSymbol,
    ipow, ord, phi, OrderDisc,
};
use crate::error::{Error, Result};

/// One prime of N together with a chosen closed point of X0(ell^a) below.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimeLocalDatum {
    pub ell: u64,
    pub a_prime: u32,
    pub a: u32,
    pub class: LocalClass,
    /// Number of descending edges.
    pub descending: u32,
    pub contains_k: bool,
    /// The path uses a horizontal edge at a split prime.
    pub split_surface_edge: bool,
    pub purely_descending: bool,
}

impl PrimeLocalDatum {
    pub fn new(order: &OrderDisc, ell: u64, a_prime: u32, a: u32, class: LocalClass) -> Result<Self> {
        if a_prime > a {
            return Err(Error::InvalidArgument(format!("a' = {a_prime} exceeds a = {a}")));
        }
        let (b, h, d) = class.path_type;
        if b + h + d != a {
            return Err(Error::InvalidArgument(format!("path type {:?} has length other than {a}", class.path_type)));
        }
        let split_surface_edge = order.chi_k(ell) == 1 && h > 0;
        Ok(PrimeLocalDatum {
            ell,
            a_prime,
            a,
            descending: d,
            contains_k: class.field.contains_k(),
            split_surface_edge,
            purely_descending: class.is_purely_descending(),
            class,
        })
    }

    pub fn path_type(&self) -> PathType {
        self.class.path_type
    }

    /// Exponent of ell in the downstairs conductor over f.
    pub fn field_exponent(&self, order: &OrderDisc) -> u32 {
        ord(self.ell, self.class.field.m / order.f)
    }
}

/// Rows of the 2-adic tables holding two real points of one path type.
fn paired_real_row(datum: &PrimeLocalDatum) -> bool {
    matches!(datum.class.label, "V3" | "VI3") && !datum.contains_k && datum.class.count == 2
}

/// Residue field of the points of X0(ell^a', ell^a) above the datum's point of X0(ell^a).
///
/// Fails with `InvalidArgument` for the 2-adic rows holding two real points of one path type
/// when ell^a' = 2 and delta is even: one of the two lifts to two points with the field below,
/// the other to one point with K adjoined. `lifted_classes` accounts for both.
pub fn lift_residue_prime_power(order: &OrderDisc, datum: &PrimeLocalDatum) -> Result<FieldSymbol> {
    let below = &datum.class.field;
    if datum.a_prime == 0 {
        return Ok(below.clone());
    }
    let f = order.f;
    let dk = order.delta_k;
    let ell = datum.ell;
    let k = datum.field_exponent(order);
    let (b, _, _) = datum.class.path_type;
    if ipow(ell, datum.a_prime)? >= 3 || !order.is_even() {
        return Ok(FieldSymbol::k(ipow(ell, datum.a_prime.max(k))? * f, dk));
    }
    // ell^a' = 2 with delta even: the residue field has conductor lcm(2f, f') for f' the
    // conductor at the end of the path; what remains is whether it contains K.
    if datum.purely_descending {
        return Ok(below.clone());
    }
    if b == 0 {
        return Ok(if datum.a == 1 {
            FieldSymbol::q(2 * f, dk)
        } else {
            FieldSymbol::k(ipow(2, datum.a - 1)? * f, dk)
        });
    }
    if k == 0 {
        return Ok(FieldSymbol::new(below.base, 2 * f, dk));
    }
    if below.contains_k() {
        return Ok(below.clone());
    }
    if paired_real_row(datum) {
        return Err(Error::InvalidArgument(format!(
            "the two real points of type {:?} lift to different fields",
            datum.class.path_type
        )));
    }
    let l = order.level(2);
    Ok(if b == 1 && ((dk == -4 && l == 1) || (dk == -3 && l == 2)) {
        below.clone()
    } else {
        FieldSymbol::k(below.m, dk)
    })
}

/// Residue field of CM points on X0(N, N), N >= 2.
pub fn x_nn_residue(order: &OrderDisc, n: u64) -> Result<FieldSymbol> {
    if n < 2 {
        return Err(Error::InvalidArgument("N must be at least 2".into()));
    }
    let f = order.f;
    let dk = order.delta_k;
    if n >= 3 {
        return Ok(FieldSymbol::k(n * f, dk));
    }
    Ok(match (order.delta_k, f) {
        (-4, 1) => FieldSymbol::q(1, dk),
        (-3, 1) => FieldSymbol::k(1, dk),
        _ if order.is_even() => FieldSymbol::q(2 * f, dk),
        _ => FieldSymbol::k(2 * f, dk),
    })
}

/// Ramification index of CM points on X0(M, N) with M >= 2.
pub(crate) fn upper_ramification(order: &OrderDisc) -> u32 {
    (order.w() / 2) as u32
}

/// Number of points with residue field `up` and ramification `e_up` above one closed point
/// `below` of X0(ell^a), when every point above has that field.
pub(crate) fn points_above(order: &OrderDisc, below: &LocalClass, m_local: u64, up: &FieldSymbol, e_up: u32) -> Result<u64> {
    let configs = below.e as u64 * below.d * m_local * phi(m_local)?.to_u64().unwrap_or(0);
    let per_point = e_up as u64 * residual_degree(up, order.f)?;
    if per_point == 0 || !configs.is_multiple_of(per_point) {
        return Err(Error::Consistency(format!(
            "{configs} configurations do not split into points of degree {per_point}"
        )));
    }
    Ok(configs / per_point)
}

/// Closed points of X0(ell^a', ell^a) over J_delta for delta_k in {-3, -4}.
pub fn lifted_classes(order: &OrderDisc, ell: u64, a_prime: u32, a: u32) -> Result<Vec<ClosedPointClass>> {
    let order = OrderDisc::cm(order.delta_k, order.f)?;
    let m_local = ipow(ell, a_prime)?;
    let mut out = Vec::new();
    for class in local_classes(order.delta_k, order.f, ell, a)? {
        let t = class.path_type;
        if a_prime == 0 {
            out.push(ClosedPointClass { field: class.field, d: class.d, e: class.e, count: class.count, path_types: vec![t] });
            continue;
        }
        let datum = PrimeLocalDatum::new(&order, ell, a_prime, a, class)?;
        let e = upper_ramification(&order);
        let mut push = |field: FieldSymbol, below_count: u64| -> Result<()> {
            let per = points_above(&order, &datum.class, m_local, &field, e)?;
            let d = residual_degree(&field, order.f)?;
            out.push(ClosedPointClass { field, d, e, count: per * below_count, path_types: vec![t] });
            Ok(())
        };
        match lift_residue_prime_power(&order, &datum) {
            Ok(field) => push(field, datum.class.count)?,
            Err(Error::InvalidArgument(_)) if paired_real_row(&datum) => {
                push(datum.class.field.clone(), 1)?;
                push(FieldSymbol::k(datum.class.field.m, order.delta_k), 1)?;
            }
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}
