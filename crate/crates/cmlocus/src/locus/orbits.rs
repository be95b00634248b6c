//! Closed points of X0(M, N) over J_delta from the Galois action on torsion.
//!
//! E[N] is identified with O/NO for the order O of conductor f. A geometric point of X0(M, N)
//! over J_delta is a triple (C, C', D) modulo O^x: C cyclic of order N, C' cyclic of order M
//! meeting C trivially, D the graph of an isomorphism C[M] -> C'. Galois over Q(f) acts through
//! (O/NO)^x and complex conjugation, so closed points are orbits of that group and residue
//! fields are read off from stabilizers.

use std::collections::{BTreeMap, HashMap, HashSet};

use num_traits::ToPrimitive;

use std::cmp::Ordering;

use super::fiber::ClosedPointClass;
use super::tables::PathType;
use crate::arith::{
    factor, ord, rcf_rel_degree,
    field::{Base, FieldSymbol},
    OrderDisc,
};
use crate::error::{Error, Result};

type Elt = (u64, u64);

/// O/qO in the basis 1, tau with tau^2 = t tau - n.
#[derive(Clone, Copy, Debug)]
struct Quot {
    q: u64,
    t: u64,
    n: u64,
}

impl Quot {
    fn new(q: u64, t: i64, n: i64) -> Self {
        let r = |x: i64| x.rem_euclid(q as i64) as u64;
        Quot { q, t: r(t), n: r(n) }
    }

    fn mul(&self, a: Elt, b: Elt) -> Elt {
        let q = self.q as u128;
        let (a0, a1, b0, b1) = (a.0 as u128, a.1 as u128, b.0 as u128, b.1 as u128);
        let yy = a1 * b1 % q;
        let x = (a0 * b0 + (q - self.n as u128) % q * yy) % q;
        let y = (a0 * b1 + a1 * b0 + self.t as u128 * yy) % q;
        (x as u64, y as u64)
    }

    fn conj(&self, a: Elt) -> Elt {
        let q = self.q as u128;
        let x = (a.0 as u128 + self.t as u128 * a.1 as u128) % q;
        (x as u64, (self.q - a.1 % self.q) % self.q)
    }

    fn norm(&self, a: Elt) -> u64 {
        let q = self.q as u128;
        let (x, y) = (a.0 as u128, a.1 as u128);
        ((x * x + self.t as u128 * x % q * y + self.n as u128 * (y * y % q)) % q) as u64
    }
}

fn inv_mod(a: u64, m: u64) -> u64 {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let k = r0 / r1;
        (r0, r1) = (r1, r0 - k * r1);
        (s0, s1) = (s1, s0 - k * s1);
    }
    s0.rem_euclid(m as i128) as u64
}

/// Points of P^1(Z/ell^k), i.e. cyclic subgroups of order ell^k in (Z/ell^k)^2.
#[derive(Clone, Copy, Debug)]
struct Lines {
    ell: u64,
    q: u64,
}

impl Lines {
    fn index(&self, v: Elt) -> u32 {
        if self.q == 1 {
            return 0;
        }
        let (x, y) = (v.0 % self.q, v.1 % self.q);
        if x % self.ell != 0 {
            (y as u128 * inv_mod(x, self.q) as u128 % self.q as u128) as u32
        } else {
            let u = (x as u128 * inv_mod(y, self.q) as u128 % self.q as u128) as u64;
            (self.q + u / self.ell) as u32
        }
    }

    fn rep(&self, i: u32) -> Elt {
        let i = i as u64;
        if self.q == 1 {
            (1, 0)
        } else if i < self.q {
            (1, i)
        } else {
            (self.ell * (i - self.q), 1)
        }
    }

    fn count(&self) -> u32 {
        if self.q == 1 {
            1
        } else {
            (self.q + self.q / self.ell) as u32
        }
    }

    fn independent(&self, u: Elt, v: Elt) -> bool {
        let q = self.q as u128;
        let d = (u.0 as u128 * v.1 as u128 % q + q - u.1 as u128 * v.0 as u128 % q) % q;
        self.q == 1 || !(d as u64).is_multiple_of(self.ell)
    }
}

type Config = [u32; 3];

struct LocalOrbit {
    rep: Config,
    size: u64,
    conj: usize,
    path_type: PathType,
}

/// Orbits of (O/ell^a)^x on configurations at one prime.
struct Local {
    ell: u64,
    a: u32,
    order: OrderDisc,
    ring: Quot,
    big: Lines,
    small: Lines,
    units: Vec<Elt>,
    orbits: Vec<LocalOrbit>,
}

impl Local {
    fn new(order: &OrderDisc, ell: u64, a: u32, a_prime: u32) -> Result<Self> {
        let q = ell.pow(a);
        let (t, n) = tau(order);
        let ring = Quot::new(q, t, n);
        let big = Lines { ell, q };
        let small = Lines { ell, q: ell.pow(a_prime) };
        let mut units = Vec::new();
        for x in 0..q {
            for y in 0..q {
                if !ring.norm((x, y)).is_multiple_of(ell) {
                    units.push((x, y));
                }
            }
        }
        let mut local = Local { ell, a, order: order.clone(), ring, big, small, units, orbits: Vec::new() };
        local.orbits = local.compute_orbits()?;
        Ok(local)
    }

    fn act(&self, alpha: Elt, c: Config) -> Config {
        let m = |l: &Lines, i: u32| l.index(self.reduce_to(l, self.ring.mul(alpha, l.rep(i))));
        [m(&self.big, c[0]), m(&self.small, c[1]), m(&self.small, c[2])]
    }

    fn conj(&self, c: Config) -> Config {
        let m = |l: &Lines, i: u32| l.index(self.reduce_to(l, self.ring.conj(l.rep(i))));
        [m(&self.big, c[0]), m(&self.small, c[1]), m(&self.small, c[2])]
    }

    fn reduce_to(&self, l: &Lines, v: Elt) -> Elt {
        (v.0 % l.q, v.1 % l.q)
    }

    fn configs(&self) -> Vec<Config> {
        let mut out = Vec::new();
        for c in 0..self.big.count() {
            let cbar = self.reduce_to(&self.small, self.big.rep(c));
            for c2 in 0..self.small.count() {
                let v2 = self.small.rep(c2);
                if self.small.q > 1 && !self.small.independent(cbar, v2) {
                    continue;
                }
                for d in 0..self.small.count() {
                    let vd = self.small.rep(d);
                    if self.small.q > 1
                        && !(self.small.independent(cbar, vd) && self.small.independent(v2, vd))
                    {
                        continue;
                    }
                    out.push([c, c2, d]);
                }
            }
        }
        out
    }

    // A generating set of the unit group, chosen greedily.
    fn generators(&self) -> Vec<Elt> {
        let mut gens: Vec<Elt> = Vec::new();
        let mut seen: HashSet<Elt> = HashSet::from([(1 % self.ring.q, 0)]);
        for &u in &self.units {
            if seen.contains(&u) {
                continue;
            }
            gens.push(u);
            let mut stack: Vec<Elt> = seen.iter().copied().collect();
            while let Some(x) = stack.pop() {
                for &g in &gens {
                    let y = self.ring.mul(x, g);
                    if seen.insert(y) {
                        stack.push(y);
                    }
                }
            }
            if seen.len() == self.units.len() {
                break;
            }
        }
        gens
    }

    fn compute_orbits(&self) -> Result<Vec<LocalOrbit>> {
        let configs = self.configs();
        let index: HashMap<Config, usize> = configs.iter().enumerate().map(|(i, c)| (*c, i)).collect();
        let gens = self.generators();
        let mut orbit_of = vec![usize::MAX; configs.len()];
        let mut orbits = Vec::new();
        for start in 0..configs.len() {
            if orbit_of[start] != usize::MAX {
                continue;
            }
            let id = orbits.len();
            orbit_of[start] = id;
            let mut stack = vec![start];
            let mut size = 0u64;
            while let Some(i) = stack.pop() {
                size += 1;
                for &g in &gens {
                    let j = *index
                        .get(&self.act(g, configs[i]))
                        .ok_or_else(|| Error::Consistency("unit moved a configuration off the set".into()))?;
                    if orbit_of[j] == usize::MAX {
                        orbit_of[j] = id;
                        stack.push(j);
                    }
                }
            }
            let path_type = self.path_type(configs[start][0]);
            orbits.push(LocalOrbit { rep: configs[start], size, conj: 0, path_type });
        }
        for o in orbits.iter_mut() {
            let j = *index
                .get(&self.conj(o.rep))
                .ok_or_else(|| Error::Consistency("conjugation moved a configuration off the set".into()))?;
            o.conj = orbit_of[j];
        }
        Ok(orbits)
    }

    /// Levels of the successive quotients E/C[ell^i] read as (ascending, horizontal, descending).
    fn path_type(&self, c: u32) -> PathType {
        let g = self.big.rep(c);
        let mut level = self.order.level(self.ell);
        let mut t = (0, 0, 0);
        for i in 1..=self.a {
            let next = lattice_level(&self.order, self.ell, i, g);
            match next.cmp(&level) {
                Ordering::Less => t.0 += 1,
                Ordering::Equal => t.1 += 1,
                Ordering::Greater => t.2 += 1,
            }
            level = next;
        }
        t
    }

    /// Elements of 1 + ell^j O inside the unit group.
    fn congruence_units(&self, j: u32) -> impl Iterator<Item = &Elt> {
        let p = self.ell.pow(j);
        self.units.iter().filter(move |u| (u.0 + self.ring.q - 1).is_multiple_of(p) && u.1 % p == 0)
    }
}

/// omega^2 = t omega - n for the maximal order.
fn omega(delta_k: i64) -> (i128, i128) {
    if delta_k % 4 == 0 {
        (0, (-delta_k / 4) as i128)
    } else {
        (1, ((1 - delta_k) / 4) as i128)
    }
}

/// A rank two sublattice of Z^2 in Hermite form {(g, s), (0, d)}.
struct Lattice {
    g: i128,
    s: i128,
    d: i128,
}

impl Lattice {
    fn span(vs: &[(i128, i128)]) -> Self {
        // Bezout combination of first coordinates.
        let (mut g, mut s) = (0i128, 0i128);
        for &(p, q) in vs {
            let (h, x, y) = ext_gcd(g, p);
            s = x * s + y * q;
            g = h;
        }
        let mut d = 0i128;
        for &(p, q) in vs {
            d = gcd(d, q - (p / g) * s);
        }
        Lattice { g, s: s.rem_euclid(d), d }
    }

    fn contains(&self, (p, q): (i128, i128)) -> bool {
        p % self.g == 0 && (q - (p / self.g) * self.s) % self.d == 0
    }
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a.abs(), a.signum(), 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// ord_ell of the conductor of O + Z (x + y tau) / ell^i, in coordinates over 1, omega.
fn lattice_level(order: &OrderDisc, ell: u64, i: u32, g: Elt) -> u32 {
    let (t0, n0) = omega(order.delta_k);
    let f = order.f as i128;
    let p = (ell as i128).pow(i);
    let lat = Lattice::span(&[(p, 0), (0, p * f), (g.0 as i128, g.1 as i128 * f)]);
    let basis = [(lat.g, lat.s), (0, lat.d)];
    let f0 = order.f0(ell) as i128;
    let times_omega = |(x, y): (i128, i128), c: i128| (-c * y * n0, c * (x + y * t0));
    (0..)
        .find(|&e| {
            let c = f0 * (ell as i128).pow(e);
            basis.iter().all(|&v| lat.contains(times_omega(v, c)))
        })
        .unwrap_or(0)
}

/// tau = f * omega as (trace, norm), with omega = sqrt(delta_k / 4) or (1 + sqrt(delta_k)) / 2.
fn tau(order: &OrderDisc) -> (i64, i64) {
    let f = order.f as i64;
    if order.delta_k % 4 == 0 {
        (0, f * f * (-order.delta_k / 4))
    } else {
        (f, f * f * ((1 - order.delta_k) / 4))
    }
}

/// Closed points of X0(M, N) over J_delta, by orbit enumeration.
pub fn orbit_fiber(order: &OrderDisc, m: u64, n: u64) -> Result<Vec<ClosedPointClass>> {
    if m == 0 || n == 0 || !n.is_multiple_of(m) {
        return Err(Error::NotDivisible(m, n));
    }
    let f = order.f;
    let dk = order.delta_k;
    let mut locals = Vec::new();
    for (ell, a) in factor(n)? {
        locals.push(Local::new(order, ell, a, ord(ell, m))?);
    }
    // Automorphisms modulo -1 are the powers of omega when f = 1 and delta_k is -3 or -4.
    let auts: Vec<Vec<Elt>> = (0..order.w() / 2)
        .map(|k| {
            locals
                .iter()
                .map(|l| (0..k).fold((1 % l.ring.q, 0), |x, _| l.ring.mul(x, (0, 1 % l.ring.q))))
                .collect()
        })
        .collect();
    let base_deg = rcf_rel_degree(dk, f)?;
    let mut tally: BTreeMap<(FieldSymbol, Vec<PathType>, u64, u32), u64> = BTreeMap::new();
    let mut tuple = vec![0usize; locals.len()];
    loop {
        if let Some(entry) = classify(&locals, &auts, &tuple, f, dk, &base_deg)? {
            *tally.entry(entry).or_default() += 1;
        }
        // Advance the mixed-radix counter.
        let mut i = 0;
        while i < locals.len() {
            tuple[i] += 1;
            if tuple[i] < locals[i].orbits.len() {
                break;
            }
            tuple[i] = 0;
            i += 1;
        }
        if i == locals.len() {
            break;
        }
    }
    Ok(tally
        .into_iter()
        .map(|((field, path_types, d, e), count)| ClosedPointClass { field, d, e, count, path_types })
        .collect())
}

fn classify(
    locals: &[Local],
    auts: &[Vec<Elt>],
    tuple: &[usize],
    f: u64,
    dk: i64,
    base_deg: &num_bigint::BigUint,
) -> Result<Option<(FieldSymbol, Vec<PathType>, u64, u32)>> {
    let conj: Vec<usize> = tuple.iter().zip(locals).map(|(&o, l)| l.orbits[o].conj).collect();
    let real = conj == tuple;
    if !real && conj.as_slice() < tuple {
        return Ok(None);
    }
    let reps: Vec<Config> = tuple.iter().zip(locals).map(|(&o, l)| l.orbits[o].rep).collect();
    let fixes: Vec<Vec<bool>> = auts
        .iter()
        .map(|eta| locals.iter().enumerate().map(|(i, l)| l.act(eta[i], reps[i]) == reps[i]).collect())
        .collect();
    let stab = fixes.iter().filter(|v| v.iter().all(|&b| b)).count();
    let e = auts.len() / stab;
    let size: u64 = tuple.iter().zip(locals).map(|(&o, l)| l.orbits[o].size).product();
    if !size.is_multiple_of(e as u64) {
        return Err(Error::Consistency("orbit size not divisible by ramification".into()));
    }
    let geometric = size / e as u64;
    let mut m = f;
    for (i, l) in locals.iter().enumerate() {
        let targets: HashSet<Config> = auts
            .iter()
            .zip(&fixes)
            .filter(|(_, fx)| fx.iter().enumerate().all(|(k, &b)| k == i || b))
            .map(|(eta, _)| l.act(eta[i], reps[i]))
            .collect();
        let j = (0..=l.a)
            .find(|&j| l.congruence_units(j).all(|&u| targets.contains(&l.act(u, reps[i]))))
            .unwrap_or(l.a);
        m *= l.ell.pow(j);
    }
    let rel = rcf_rel_degree(dk, m)?;
    if &rel % base_deg != num_bigint::BigUint::from(0u8)
        || (rel / base_deg).to_u64() != Some(geometric)
    {
        return Err(Error::Consistency(format!(
            "orbit of {geometric} points does not match conductor {m}"
        )));
    }
    let (base, d) = if real { (Base::Q, geometric) } else { (Base::K, 2 * geometric) };
    let types = tuple.iter().zip(locals).map(|(&o, l)| l.orbits[o].path_type).collect();
    Ok(Some((FieldSymbol::new(base, m, dk), types, d, e as u32)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::locus::tables::local_classes;

    type Key = (Base, u64, PathType, u64, u32);

    fn summary(classes: impl IntoIterator<Item = (FieldSymbol, PathType, u64, u32, u64)>) -> BTreeMap<Key, u64> {
        let mut out = BTreeMap::new();
        for (field, t, d, e, count) in classes {
            let m = field.canonical_m().unwrap();
            *out.entry((field.base, m, t, d, e)).or_default() += count;
        }
        out
    }

    #[test]
    fn prime_power_fibers_match_tables() {
        for dk in [-4i64, -3] {
            for f in 1..=8u64 {
                for (ell, amax) in [(2u64, 6u32), (3, 4), (5, 2), (7, 2), (13, 1)] {
                    for a in 1..=amax {
                        let order = OrderDisc::new(dk, f).unwrap();
                        let got = orbit_fiber(&order, 1, ell.pow(a)).unwrap();
                        let want = local_classes(dk, f, ell, a).unwrap();
                        assert_eq!(
                            summary(got.into_iter().map(|c| (c.field, c.path_types[0], c.d, c.e, c.count))),
                            summary(want.into_iter().map(|c| (c.field, c.path_type, c.d, c.e, c.count))),
                            "dk={dk} f={f} ell={ell} a={a}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn composite_examples() {
        let o = OrderDisc::new(-4, 1).unwrap();
        let total = |m: u64, n: u64| -> u64 {
            orbit_fiber(&o, m, n).unwrap().iter().map(|c| c.e as u64 * c.d * c.count).sum()
        };
        assert_eq!(total(1, 10), 18);
        assert_eq!(total(2, 8), 24);
        assert_eq!(total(3, 6), 12 * 6);
        assert!(orbit_fiber(&o, 3, 8).is_err());
    }
}
