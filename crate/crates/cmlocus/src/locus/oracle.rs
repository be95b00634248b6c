//! Cross-check of the path-type tables against brute-force path enumeration.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::tables::{local_classes, PathType};
use crate::arith::{field::Base, two_torsion_count};
use crate::error::Result;
use crate::graph::{double_cover, IsogenyGraph, TypeStats};

/// Per-type statistics from both sources, for one start level and path length.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleComparison {
    pub delta_k: i64,
    pub ell: u64,
    pub f0: u64,
    pub level: u32,
    pub a: u32,
    pub graph: BTreeMap<PathType, TypeStats>,
    pub tables: BTreeMap<PathType, TypeStats>,
}

impl OracleComparison {
    pub fn agrees(&self) -> bool {
        self.graph == self.tables
    }
}

/// Expected statistics read off the tables.
///
/// `paths` counts paths from one start vertex. `real_points` counts real embeddings of the
/// residue fields, which is the number of real points over all real conjugates of j_L.
pub fn table_stats(delta_k: i64, ell: u64, f0: u64, level: u32, a: u32) -> Result<BTreeMap<PathType, TypeStats>> {
    let f = ell.pow(level) * f0;
    let mut out: BTreeMap<PathType, TypeStats> = BTreeMap::new();
    for c in local_classes(delta_k, f, ell, a)? {
        let s = out.entry(c.path_type).or_default();
        s.paths += c.e as u64 * c.d * c.count;
        if c.field.base == Base::Q {
            let m = BigInt::from(c.field.m);
            s.real_points += c.count * two_torsion_count(&(BigInt::from(delta_k) * &m * &m))?;
        }
    }
    Ok(out)
}

/// Graph statistics: path totals from the marked vertex, real points summed over all real
/// start vertices at the level. The double cover is used where the surface loop needs unwrapping.
pub fn graph_stats(delta_k: i64, ell: u64, f0: u64, level: u32, a: u32) -> Result<BTreeMap<PathType, TypeStats>> {
    let mut g = IsogenyGraph::for_field(delta_k, ell, f0, level + a)?;
    if matches!((delta_k, ell, f0), (-4, 2, 1) | (-3, 3, 1)) {
        g = double_cover(&g)?;
    }
    let mut out: BTreeMap<PathType, TypeStats> = g
        .path_stats(level, a)?
        .into_iter()
        .map(|(t, s)| (t, TypeStats { paths: s.paths, real_points: 0 }))
        .collect();
    for v in g.real_vertices(level)? {
        for (t, s) in g.path_stats_from(&v, a)? {
            out.entry(t).or_default().real_points += s.real_points;
        }
    }
    Ok(out)
}

pub fn compare(delta_k: i64, ell: u64, f0: u64, level: u32, a: u32) -> Result<OracleComparison> {
    Ok(OracleComparison {
        delta_k,
        ell,
        f0,
        level,
        a,
        graph: graph_stats(delta_k, ell, f0, level, a)?,
        tables: table_stats(delta_k, ell, f0, level, a)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases_agree() {
        for (dk, ell) in [(-4i64, 2u64), (-3, 3), (-4, 5), (-3, 7), (-4, 3), (-3, 2)] {
            for level in 0..=2 {
                for a in 1..=3 {
                    let c = compare(dk, ell, 1, level, a).unwrap();
                    assert!(c.agrees(), "{dk} {ell} L={level} a={a}\ngraph  {:?}\ntables {:?}", c.graph, c.tables);
                }
            }
        }
    }

    #[test]
    fn full_sweep() {
        for dk in [-4i64, -3] {
            for ell in [2u64, 3, 5, 7, 13] {
                for f0 in (1..=6u64).filter(|f| f % ell != 0) {
                    for level in 0..=5 {
                        for a in 1..=(6 - level) {
                            let c = compare(dk, ell, f0, level, a).unwrap();
                            assert!(c.agrees(), "{dk} {ell} f0={f0} L={level} a={a}\ngraph  {:?}\ntables {:?}", c.graph, c.tables);
                        }
                    }
                }
            }
        }
    }
}
