//! The ell-isogeny graph of CM elliptic curves with conductor ell^L f0, as a lazy multigraph.
//!
//! Vertices at level L are reduced primitive forms of discriminant ell^(2L) f0^2 delta_k;
//! the marked vertex j_L is the principal form. Edges out of a vertex are its ell + 1
//! index-ell sublattices, so parallel edges appear exactly where the automorphism group
//! identifies sublattices.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{forms::Form, rcf_rel_degree, is_fundamental, is_prime, kronecker, two_torsion_count, units};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EdgeKind {
    Up,
    Horizontal,
    Down,
}

/// Which ideal of norm ell a horizontal edge comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    Plus,
    Minus,
    Ramified,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Vertex {
    pub level: u32,
    pub copy: u8,
    pub form: Form,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub source: Vertex,
    pub target: Vertex,
    pub kind: EdgeKind,
    /// Position among edges with the same source, kind and target.
    pub parallel: u32,
    pub side: Option<Side>,
    /// Which of the ell + 1 sublattices of the source lattice this edge is.
    pub sublattice: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphPath {
    pub start: Vertex,
    pub edges: Vec<Edge>,
    pub b: u32,
    pub h: u32,
    pub d: u32,
}

impl GraphPath {
    pub fn path_type(&self) -> (u32, u32, u32) {
        (self.b, self.h, self.d)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeometricPoint {
    pub paths: Vec<GraphPath>,
    pub e: u32,
    pub real: bool,
}

/// Path totals and real geometric points of one (b, h, d) type.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeStats {
    pub paths: u64,
    pub real_points: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsogenyGraph {
    pub delta_k: i64,
    pub ell: u64,
    pub f0: u64,
    pub depth: u32,
    pub doubled: bool,
    /// Class number of each level 0..=depth.
    pub level_counts: Vec<u64>,
}

/// Builds the graph for delta_k in {-3, -4}.
pub fn build_graph(delta_k: i64, ell: u64, f0: u64, depth: u32) -> Result<IsogenyGraph> {
    if delta_k != -3 && delta_k != -4 {
        return Err(Error::UnsupportedField(delta_k));
    }
    IsogenyGraph::for_field(delta_k, ell, f0, depth)
}

/// Unwraps the surface loop of the graphs for (-4, 2, 1) and (-3, 3, 1).
pub fn double_cover(graph: &IsogenyGraph) -> Result<IsogenyGraph> {
    if !matches!((graph.delta_k, graph.ell, graph.f0), (-4, 2, 1) | (-3, 3, 1)) {
        return Err(Error::InvalidArgument(format!(
            "no double cover for ({}, {}, {})",
            graph.delta_k, graph.ell, graph.f0
        )));
    }
    Ok(IsogenyGraph { doubled: true, ..graph.clone() })
}

fn norm(a: &BigInt, b: &BigInt, c: &BigInt, v: &(BigInt, BigInt)) -> BigInt {
    let (p, q) = v;
    p * p - b * p * q + a * c * q * q
}

fn trace_conj(a: &BigInt, b: &BigInt, c: &BigInt, v: &(BigInt, BigInt), w: &(BigInt, BigInt)) -> BigInt {
    let (p1, q1) = v;
    let (p2, q2) = w;
    BigInt::from(2) * p1 * p2 - b * (p1 * q2 + q1 * p2) + BigInt::from(2) * a * c * q1 * q2
}

fn contains(basis: &[(BigInt, BigInt); 2], v: &(BigInt, BigInt)) -> bool {
    let [(p1, q1), (p2, q2)] = basis;
    let det = p1 * q2 - p2 * q1;
    let x = &v.0 * q2 - &v.1 * p2;
    let y = p1 * &v.1 - q1 * &v.0;
    (x % &det).is_zero() && (y % &det).is_zero()
}

impl IsogenyGraph {
    /// Builds the graph for any negative fundamental discriminant.
    pub fn for_field(delta_k: i64, ell: u64, f0: u64, depth: u32) -> Result<IsogenyGraph> {
        if delta_k >= 0 || !is_fundamental(delta_k) {
            return Err(Error::InvalidDiscriminant(
                delta_k.to_string(),
                "not a negative fundamental discriminant",
            ));
        }
        if !is_prime(ell) {
            return Err(Error::InvalidArgument(format!("{ell} is not prime")));
        }
        if f0 == 0 || f0.is_multiple_of(ell) {
            return Err(Error::InvalidArgument(format!("f0 = {f0} must be positive and prime to {ell}")));
        }
        if depth == 0 {
            return Err(Error::InvalidArgument("depth must be at least 1".into()));
        }
        let mut g = IsogenyGraph { delta_k, ell, f0, depth, doubled: false, level_counts: Vec::new() };
        let h_k = crate::arith::class_number(&BigInt::from(delta_k))?;
        for level in 0..=depth {
            let rel = rcf_rel_degree(delta_k, ell.pow(level) * f0)?;
            let h = rel
                .to_u64()
                .ok_or_else(|| Error::InvalidArgument(format!("level {level} is too large")))?;
            g.level_counts.push(h * h_k);
        }
        Ok(g)
    }

    pub fn level_disc(&self, level: u32) -> BigInt {
        BigInt::from(self.ell).pow(2 * level) * BigInt::from(self.f0 * self.f0) * BigInt::from(self.delta_k)
    }

    /// Surface vertices carry extra automorphisms.
    pub fn has_bundles(&self) -> bool {
        self.f0 == 1 && units(self.delta_k) > 2
    }

    /// Size of a bundle of parallel descents from the surface.
    pub fn bundle_size(&self) -> u32 {
        if self.has_bundles() {
            (units(self.delta_k) / 2) as u32
        } else {
            1
        }
    }

    pub fn marked(&self, level: u32) -> Vertex {
        Vertex { level, copy: 0, form: Form::principal(&self.level_disc(level)) }
    }

    pub fn vertices(&self, level: u32, copy: u8) -> Result<Vec<Vertex>> {
        Ok(crate::arith::reduced_forms(&self.level_disc(level))?
            .into_iter()
            .map(|form| Vertex { level, copy, form })
            .collect())
    }

    pub fn is_real(&self, v: &Vertex) -> bool {
        v.form.is_ambiguous()
    }

    pub fn conj_vertex(&self, v: &Vertex) -> Vertex {
        Vertex { form: v.form.conj(), ..v.clone() }
    }

    /// Number of conjugation-fixed vertices at a level.
    pub fn real_vertex_count(&self, level: u32) -> Result<u64> {
        two_torsion_count(&self.level_disc(level))
    }

    fn surface_b(&self) -> BigInt {
        let d = self.level_disc(0);
        let m = BigInt::from(4 * self.ell);
        let mut b = BigInt::zero();
        while !((&b * &b - &d).mod_floor(&m)).is_zero() {
            b += 1;
        }
        b
    }

    fn is_loop(&self, e: &Edge) -> bool {
        self.doubled && e.kind == EdgeKind::Horizontal
    }

    /// All ell + 1 edges leaving v.
    pub fn edges(&self, v: &Vertex) -> Result<Vec<Edge>> {
        let ell = BigInt::from(self.ell);
        let Form { a, b, c } = &v.form;
        let d = v.form.disc();
        let w1 = (a.clone(), BigInt::zero());
        let w2 = (BigInt::zero(), BigInt::one());
        let mut bases: Vec<[(BigInt, BigInt); 2]> = (0..self.ell)
            .map(|k| {
                [
                    (&w1.0 * &ell, BigInt::zero()),
                    (&w1.0 * BigInt::from(k), BigInt::one()),
                ]
            })
            .collect();
        bases.push([w1.clone(), (BigInt::zero(), ell.clone())]);
        let l2 = &ell * &ell;
        let theta = if v.level == 0 && kronecker(&d, &ell) == 1 {
            let s = (b - self.surface_b()) / 2;
            // theta = s + tau acting on p + q tau.
            let act = |p: &BigInt, q: &BigInt| (&s * p - a * c * q, &s * q + p - b * q);
            Some([act(&w1.0, &w1.1), act(&w2.0, &w2.1)])
        } else {
            None
        };
        let mut out: Vec<Edge> = Vec::with_capacity(bases.len());
        for (k, basis) in bases.iter().enumerate() {
            let fa = norm(a, b, c, &basis[0]);
            let fb = -trace_conj(a, b, c, &basis[0], &basis[1]);
            let fc = norm(a, b, c, &basis[1]);
            let g = fa.gcd(&fb).gcd(&fc);
            let form = Form { a: fa / &g, b: fb / &g, c: fc / &g };
            let nd = form.disc();
            let (kind, level) = if nd == &d * &l2 {
                (EdgeKind::Down, v.level + 1)
            } else if nd == d {
                (EdgeKind::Horizontal, v.level)
            } else if &nd * &l2 == d && v.level > 0 {
                (EdgeKind::Up, v.level - 1)
            } else {
                return Err(Error::Consistency(format!("sublattice of {} has discriminant {nd}", v.form)));
            };
            let side = match (kind, &theta) {
                (EdgeKind::Horizontal, Some(t)) => {
                    Some(if contains(basis, &t[0]) && contains(basis, &t[1]) { Side::Plus } else { Side::Minus })
                }
                (EdgeKind::Horizontal, None) => Some(Side::Ramified),
                _ => None,
            };
            let mut copy = v.copy;
            if self.doubled && kind == EdgeKind::Horizontal {
                copy = 1 - copy;
            }
            let target = Vertex { level, copy, form: form.reduce() };
            let parallel = out.iter().filter(|e| e.kind == kind && e.target == target).count() as u32;
            out.push(Edge { source: v.clone(), target, kind, parallel, side, sublattice: k as u32 });
        }
        Ok(out)
    }

    fn is_bundle(&self, e: &Edge) -> bool {
        self.has_bundles() && e.kind == EdgeKind::Down && e.source.level == 0
    }

    /// Image of an edge under complex conjugation.
    pub fn conj_edge(&self, e: &Edge) -> Result<Edge> {
        let cs = self.conj_vertex(&e.source);
        let ct = self.conj_vertex(&e.target);
        let candidates = self.edges(&cs)?;
        let find = |pred: &dyn Fn(&Edge) -> bool| {
            candidates
                .iter()
                .find(|x| pred(x))
                .cloned()
                .ok_or_else(|| Error::Consistency(format!("no conjugate for edge from {}", e.source.form)))
        };
        match e.kind {
            EdgeKind::Up => find(&|x| x.kind == EdgeKind::Up),
            EdgeKind::Horizontal => {
                let side = match e.side {
                    Some(Side::Plus) => Some(Side::Minus),
                    Some(Side::Minus) => Some(Side::Plus),
                    s => s,
                };
                find(&|x| x.kind == EdgeKind::Horizontal && x.side == side && x.target.form == ct.form)
            }
            EdgeKind::Down => {
                let parallel = if self.is_bundle(e) && self.is_real(&e.target) {
                    self.bundle_image(e, &self.marked(1).form)
                } else {
                    e.parallel
                };
                find(&|x| x.kind == EdgeKind::Down && x.target == ct && x.parallel == parallel)
            }
        }
    }

    // Parallel index of the conjugate of a bundle edge into a real vertex.
    // The real model is the one in which the edges down to `anchor` are defined over R.
    fn bundle_image(&self, e: &Edge, anchor: &Form) -> u32 {
        let k = e.parallel;
        match self.delta_k {
            -4 => {
                if &e.target.form == anchor && e.source.copy == 0 {
                    k
                } else {
                    1 - k
                }
            }
            _ => match k {
                0 => 0,
                1 => 2,
                _ => 1,
            },
        }
    }

    /// True when complex conjugation fixes the edge.
    pub fn is_fixed(&self, e: &Edge) -> bool {
        self.is_fixed_at(e, &self.marked(1).form)
    }

    /// Level-1 vertex above v through which paths from v reach the surface.
    pub fn anchor(&self, v: &Vertex) -> Result<Form> {
        if v.level == 0 {
            return Ok(self.marked(1).form);
        }
        let mut f = v.form.clone();
        for _ in 1..v.level {
            f = f.up(self.ell)?;
        }
        Ok(f.reduce())
    }

    fn is_fixed_at(&self, e: &Edge, anchor: &Form) -> bool {
        if !self.is_real(&e.source) {
            return false;
        }
        match e.kind {
            EdgeKind::Up => true,
            EdgeKind::Horizontal => self.is_loop(e) || e.side == Some(Side::Ramified),
            EdgeKind::Down => {
                self.is_real(&e.target) && (!self.is_bundle(e) || self.bundle_image(e, anchor) == e.parallel)
            }
        }
    }

    /// True when `next` immediately undoes `prev`.
    pub fn is_backtrack(&self, prev: &Edge, next: &Edge) -> bool {
        match (prev.kind, next.kind) {
            (EdgeKind::Down, EdgeKind::Up) => true,
            (EdgeKind::Horizontal, EdgeKind::Horizontal) => matches!(
                (prev.side, next.side),
                (Some(Side::Plus), Some(Side::Minus))
                    | (Some(Side::Minus), Some(Side::Plus))
                    | (Some(Side::Ramified), Some(Side::Ramified))
            ),
            (EdgeKind::Up, EdgeKind::Down) => next.target == prev.source && next.parallel == 0,
            _ => false,
        }
    }

    fn check_depth(&self, start_level: u32, a: u32) -> Result<()> {
        if start_level + a > self.depth {
            return Err(Error::InvalidArgument(format!(
                "depth {} is below {start_level} + {a}",
                self.depth
            )));
        }
        Ok(())
    }

    /// All nonbacktracking paths of length a from the marked vertex at start_level.
    pub fn enumerate_paths(&self, start_level: u32, a: u32) -> Result<Vec<GraphPath>> {
        self.check_depth(start_level, a)?;
        let start = self.marked(start_level);
        let mut out = Vec::new();
        let mut stack = vec![GraphPath { start: start.clone(), edges: Vec::new(), b: 0, h: 0, d: 0 }];
        while let Some(p) = stack.pop() {
            if p.edges.len() == a as usize {
                out.push(p);
                continue;
            }
            let here = p.edges.last().map_or(&p.start, |e| &e.target);
            for e in self.edges(here)? {
                if p.edges.last().is_some_and(|prev| self.is_backtrack(prev, &e)) {
                    continue;
                }
                let mut q = p.clone();
                match e.kind {
                    EdgeKind::Up => q.b += 1,
                    EdgeKind::Horizontal => q.h += 1,
                    EdgeKind::Down => q.d += 1,
                }
                q.edges.push(e);
                stack.push(q);
            }
        }
        out.reverse();
        Ok(out)
    }

    // The edge whose parallel index the automorphisms of the start vertex permute.
    fn orbit_edge(&self, p: &GraphPath) -> Option<usize> {
        if !self.has_bundles() || p.start.level != 0 {
            return None;
        }
        p.edges.iter().position(|e| e.kind == EdgeKind::Down)
    }

    fn path_is_real(&self, p: &GraphPath) -> bool {
        let relaxed = self.orbit_edge(p);
        self.is_real(&p.start)
            && p.edges.iter().enumerate().all(|(i, e)| {
                if Some(i) == relaxed {
                    self.is_real(&e.source) && self.is_real(&e.target)
                } else {
                    self.is_fixed(e)
                }
            })
    }

    /// Groups paths into orbits under the automorphisms of the start vertex.
    pub fn geometric_points(&self, paths: &[GraphPath]) -> Vec<GeometricPoint> {
        type Key = Vec<(EdgeKind, Vertex, Option<Side>, u32)>;
        let mut orbits: BTreeMap<Key, Vec<GraphPath>> = BTreeMap::new();
        for p in paths {
            // Orbit members differ only in which parallel edge they take out of the surface.
            let relaxed = self.orbit_edge(p);
            let key: Key = p
                .edges
                .iter()
                .enumerate()
                .map(|(i, e)| {
                    let parallel = if Some(i) == relaxed { u32::MAX } else { e.parallel };
                    (e.kind, e.target.clone(), e.side, parallel)
                })
                .collect();
            orbits.entry(key).or_default().push(p.clone());
        }
        orbits
            .into_values()
            .map(|paths| {
                let real = self.path_is_real(&paths[0]);
                GeometricPoint { e: paths.len() as u32, real, paths }
            })
            .collect()
    }

    /// Per-type path totals and real geometric point counts from the marked vertex.
    ///
    /// Paths that are already complex and can only descend further are counted in bulk.
    pub fn path_stats(&self, start_level: u32, a: u32) -> Result<BTreeMap<(u32, u32, u32), TypeStats>> {
        self.path_stats_from(&self.marked(start_level), a)
    }

    /// Real vertices at a level (first copy only in the doubled graph).
    pub fn real_vertices(&self, level: u32) -> Result<Vec<Vertex>> {
        let d = self.level_disc(level);
        Ok(crate::arith::forms::ambiguous_forms(&d)?
            .into_iter()
            .map(|f| Vertex { level, copy: 0, form: f.reduce() })
            .collect())
    }

    /// Per-type statistics for paths of length a from an arbitrary start vertex.
    pub fn path_stats_from(&self, start: &Vertex, a: u32) -> Result<BTreeMap<(u32, u32, u32), TypeStats>> {
        self.check_depth(start.level, a)?;
        let from_surface = start.level == 0 && self.has_bundles();
        let anchor = self.anchor(start)?;
        let mut walk = Walk {
            graph: self,
            anchor,
            from_surface,
            stats: BTreeMap::new(),
            orbit_real: BTreeMap::new(),
        };
        let real = self.is_real(start);
        walk.step(start, None, from_surface, real, (0, 0, 0), a)?;
        let orbit = self.bundle_size() as u64;
        let Walk { mut stats, orbit_real, .. } = walk;
        for (t, n) in orbit_real {
            if n % orbit != 0 {
                return Err(Error::Consistency(format!("real paths of type {t:?} do not form whole orbits")));
            }
            stats.entry(t).or_default().real_points += n / orbit;
        }
        Ok(stats)
    }

    /// Graphviz rendering of levels 0..=depth; conjugation-fixed vertices and edges are orange.
    pub fn to_dot(&self, max_vertices: usize) -> Result<String> {
        let copies: &[u8] = if self.doubled { &[0, 1] } else { &[0] };
        let mut verts = Vec::new();
        for level in 0..=self.depth {
            for &copy in copies {
                verts.extend(self.vertices(level, copy)?);
            }
            if verts.len() > max_vertices {
                return Err(Error::CapExceeded(format!("graph with {} vertices", verts.len()), max_vertices as u64));
            }
        }
        let id = |v: &Vertex| format!("\"L{} c{} {}\"", v.level, v.copy, v.form);
        let mut s = String::new();
        let _ = writeln!(s, "digraph isogeny {{");
        for v in &verts {
            let color = if self.is_real(v) { "orange" } else { "black" };
            let _ = writeln!(s, "  {} [color={color}];", id(v));
        }
        for v in &verts {
            for e in self.edges(v)? {
                if e.target.level > self.depth {
                    continue;
                }
                let color = if self.is_fixed(&e) { "orange" } else { "black" };
                let _ = writeln!(s, "  {} -> {} [color={color}];", id(&e.source), id(&e.target));
            }
        }
        s.push_str("}\n");
        Ok(s)
    }
}

struct Walk<'g> {
    graph: &'g IsogenyGraph,
    anchor: Form,
    from_surface: bool,
    stats: BTreeMap<(u32, u32, u32), TypeStats>,
    // Real paths through a surface bundle, counted per path before dividing by the orbit size.
    orbit_real: BTreeMap<(u32, u32, u32), u64>,
}

impl Walk<'_> {
    // `pending`: the path starts on a surface with bundles and has not yet left it.
    fn step(
        &mut self,
        here: &Vertex,
        prev: Option<&Edge>,
        pending: bool,
        real: bool,
        t: (u32, u32, u32),
        left: u32,
    ) -> Result<()> {
        let g = self.graph;
        if left == 0 {
            self.stats.entry(t).or_default().paths += 1;
            if real {
                if self.from_surface && t.2 > 0 {
                    *self.orbit_real.entry(t).or_default() += 1;
                } else {
                    self.stats.entry(t).or_default().real_points += 1;
                }
            }
            return Ok(());
        }
        if !real && prev.is_some_and(|e| e.kind == EdgeKind::Down) {
            self.stats.entry((t.0, t.1, t.2 + left)).or_default().paths += g.ell.pow(left);
            return Ok(());
        }
        for e in g.edges(here)? {
            if prev.is_some_and(|p| g.is_backtrack(p, &e)) {
                continue;
            }
            let relaxed = pending && e.kind == EdgeKind::Down;
            let fixed = if relaxed {
                g.is_real(&e.source) && g.is_real(&e.target)
            } else {
                g.is_fixed_at(&e, &self.anchor)
            };
            let nt = match e.kind {
                EdgeKind::Up => (t.0 + 1, t.1, t.2),
                EdgeKind::Horizontal => (t.0, t.1 + 1, t.2),
                EdgeKind::Down => (t.0, t.1, t.2 + 1),
            };
            self.step(&e.target, Some(&e), pending && !relaxed, real && fixed, nt, left - 1)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{class_number, psi};

    #[test]
    fn level_counts() {
        let g = build_graph(-4, 2, 1, 2).unwrap();
        assert_eq!(g.level_counts, vec![1, 1, 2]);
        let g = build_graph(-4, 5, 1, 1).unwrap();
        assert_eq!(g.level_counts, vec![1, 2]);
        let g = build_graph(-3, 7, 2, 3).unwrap();
        for level in 0..=3 {
            assert_eq!(g.level_counts[level as usize], class_number(&g.level_disc(level)).unwrap());
        }
        assert!(build_graph(-7, 2, 1, 1).is_err());
        assert!(build_graph(-4, 4, 1, 1).is_err());
        assert!(build_graph(-4, 5, 5, 1).is_err());
    }

    #[test]
    fn surface_degrees() {
        let g = build_graph(-3, 3, 1, 2).unwrap();
        let es = g.edges(&g.marked(0)).unwrap();
        assert_eq!(es.len(), 4);
        assert_eq!(es.iter().filter(|e| e.kind == EdgeKind::Horizontal).count(), 1);
        assert_eq!(es.iter().filter(|e| e.kind == EdgeKind::Down).count(), 3);
        let g = build_graph(-4, 5, 1, 1).unwrap();
        let es = g.edges(&g.marked(0)).unwrap();
        let loops: Vec<_> = es.iter().filter(|e| e.kind == EdgeKind::Horizontal).collect();
        assert_eq!(loops.len(), 2);
        assert_ne!(loops[0].side, loops[1].side);
        let downs: Vec<_> = es.iter().filter(|e| e.kind == EdgeKind::Down).collect();
        assert_eq!(downs.len(), 4);
        assert_eq!(downs.iter().filter(|e| e.parallel == 1).count(), 2);
        for l in &loops {
            assert!(!g.is_fixed(l));
            assert_ne!(&g.conj_edge(l).unwrap(), *l);
        }
    }

    #[test]
    fn below_surface_shape() {
        for (dk, ell, f0) in [(-4, 3, 1), (-3, 2, 1), (-4, 5, 3), (-3, 7, 2)] {
            let g = build_graph(dk, ell, f0, 3).unwrap();
            for level in 1..=2 {
                for v in g.vertices(level, 0).unwrap() {
                    let es = g.edges(&v).unwrap();
                    assert_eq!(es.iter().filter(|e| e.kind == EdgeKind::Up).count(), 1);
                    assert_eq!(es.iter().filter(|e| e.kind == EdgeKind::Down).count() as u64, ell);
                }
            }
        }
    }

    #[test]
    fn real_vertex_counts() {
        let g = build_graph(-3, 2, 1, 4).unwrap();
        let r: Vec<u64> = (0..=4).map(|l| g.real_vertex_count(l).unwrap()).collect();
        assert_eq!(r, vec![1, 1, 2, 4, 4]);
        for level in 0..=4 {
            let real = g.vertices(level, 0).unwrap().iter().filter(|v| g.is_real(v)).count() as u64;
            assert_eq!(real, r[level as usize]);
            assert!(g.is_real(&g.marked(level)));
        }
    }

    #[test]
    fn conjugation_is_an_involution() {
        for (dk, ell, f0) in [(-4, 5, 1), (-3, 7, 1), (-4, 3, 1), (-3, 2, 1), (-4, 5, 3)] {
            let g = build_graph(dk, ell, f0, 2).unwrap();
            for level in 0..=1 {
                for v in g.vertices(level, 0).unwrap() {
                    for e in g.edges(&v).unwrap() {
                        let c = g.conj_edge(&e).unwrap();
                        assert_eq!(g.conj_edge(&c).unwrap(), e);
                        assert_eq!(c == e, g.is_fixed(&e), "{dk} {ell} {f0} {e:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn one_fixed_edge_per_real_triple() {
        let g = build_graph(-3, 7, 1, 1).unwrap();
        let es = g.edges(&g.marked(0)).unwrap();
        for v in g.vertices(1, 0).unwrap().iter().filter(|v| g.is_real(v)) {
            let fixed = es.iter().filter(|e| &e.target == v && g.is_fixed(e)).count();
            assert_eq!(fixed, 1);
        }
    }

    #[test]
    fn double_cover_shape() {
        let g = double_cover(&build_graph(-4, 2, 1, 3).unwrap()).unwrap();
        let top = g.marked(0);
        let es = g.edges(&top).unwrap();
        let lp = es.iter().find(|e| e.kind == EdgeKind::Horizontal).unwrap();
        assert_eq!(lp.target.copy, 1);
        assert!(g.is_fixed(lp));
        let other = lp.target.clone();
        for e in g.edges(&other).unwrap().iter().filter(|e| e.kind == EdgeKind::Down) {
            assert!(!g.is_fixed(e));
        }
        for e in es.iter().filter(|e| e.kind == EdgeKind::Down) {
            assert!(g.is_fixed(e));
        }
        assert!(double_cover(&build_graph(-4, 5, 1, 1).unwrap()).is_err());
    }

    #[test]
    fn path_counts_match_psi() {
        for (dk, ell, f0, cover) in [(-4, 2, 1, true), (-3, 3, 1, true), (-4, 5, 1, false), (-3, 2, 1, false), (-4, 3, 2, false), (-3, 7, 1, false)] {
            let mut g = build_graph(dk, ell, f0, 4).unwrap();
            if cover {
                g = double_cover(&g).unwrap();
            }
            for start in 0..=2 {
                for a in 1..=2 {
                    let n = g.enumerate_paths(start, a).unwrap().len() as u64;
                    assert_eq!(n, psi(ell.pow(a)).unwrap().to_u64().unwrap(), "{dk} {ell} {f0} L={start} a={a}");
                }
            }
        }
    }

    #[test]
    fn example_points() {
        let g = double_cover(&build_graph(-4, 2, 1, 1).unwrap()).unwrap();
        let paths = g.enumerate_paths(0, 1).unwrap();
        assert_eq!(paths.len(), 3);
        let mut es: Vec<u32> = g.geometric_points(&paths).iter().map(|p| p.e).collect();
        es.sort();
        assert_eq!(es, vec![1, 2]);
        let g = double_cover(&build_graph(-3, 3, 1, 1).unwrap()).unwrap();
        let mut es: Vec<u32> = g.geometric_points(&g.enumerate_paths(0, 1).unwrap()).iter().map(|p| p.e).collect();
        es.sort();
        assert_eq!(es, vec![1, 3]);
        let g = build_graph(-4, 5, 1, 1).unwrap();
        let pts = g.geometric_points(&g.enumerate_paths(0, 1).unwrap());
        assert_eq!(pts.len(), 4);
    }

    #[test]
    fn pruned_stats_match_full_enumeration() {
        for (dk, ell, f0, cover) in [(-4, 2, 1, true), (-3, 3, 1, true), (-4, 5, 1, false), (-3, 2, 1, false), (-4, 3, 2, false), (-3, 5, 1, false)] {
            let mut g = build_graph(dk, ell, f0, 5).unwrap();
            if cover {
                g = double_cover(&g).unwrap();
            }
            for start in 0..=2 {
                for a in 1..=3 {
                    let paths = g.enumerate_paths(start, a).unwrap();
                    let mut full: BTreeMap<(u32, u32, u32), TypeStats> = BTreeMap::new();
                    for p in &paths {
                        full.entry(p.path_type()).or_default().paths += 1;
                    }
                    for pt in g.geometric_points(&paths) {
                        if pt.real {
                            full.entry(pt.paths[0].path_type()).or_default().real_points += 1;
                        }
                    }
                    assert_eq!(g.path_stats(start, a).unwrap(), full, "{dk} {ell} {f0} L={start} a={a}");
                }
            }
        }
    }
}
