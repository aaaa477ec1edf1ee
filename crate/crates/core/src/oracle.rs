//! Brute-force endomorphism census computed directly on the Cayley table of
//! `G`. Nothing here touches the matrix representation.

use std::sync::Arc;

use thiserror::Error;

use crate::group::FiniteGroup;
use crate::maps::FMap;
use crate::matrix::Endo;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("|G| = {order} exceeds the bound {bound}")]
    BoundExceeded { order: usize, bound: usize },
    #[error("endomorphism is not bijective")]
    NotBijective,
    #[error("endomorphisms act on different groups")]
    GroupMismatch,
}

#[derive(Debug, Clone)]
pub struct EndCensus {
    pub group: Arc<FiniteGroup>,
    pub endos: Vec<Endo>,
    /// Indices into `endos` of the bijective ones.
    pub autos: Vec<usize>,
}

impl EndCensus {
    pub fn end_count(&self) -> usize {
        self.endos.len()
    }

    pub fn aut_count(&self) -> usize {
        self.autos.len()
    }

    fn from_tables(group: &Arc<FiniteGroup>, mut tables: Vec<Vec<usize>>) -> Self {
        tables.sort();
        tables.dedup();
        let endos: Vec<Endo> = tables
            .into_iter()
            .map(|t| Endo::trusted(FMap::from_parts(group.clone(), group.clone(), t)))
            .collect();
        let autos = endos
            .iter()
            .enumerate()
            .filter_map(|(i, e)| e.is_bijective().then_some(i))
            .collect();
        EndCensus {
            group: group.clone(),
            endos,
            autos,
        }
    }
}

fn respects_law(g: &FiniteGroup, table: &[usize]) -> bool {
    g.elements()
        .all(|a| g.elements().all(|b| table[g.mul(a, b)] == g.mul(table[a], table[b])))
}

/// Spanning tree of the Cayley graph: each non-identity element is
/// `parent * generator`.
fn word_tree(g: &FiniteGroup, gens: &[usize]) -> Vec<(usize, usize, usize)> {
    let mut seen = vec![false; g.order()];
    seen[g.identity()] = true;
    let mut order = Vec::new();
    let mut frontier = vec![g.identity()];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &x in &frontier {
            for (gi, &s) in gens.iter().enumerate() {
                let y = g.mul(x, s);
                if !seen[y] {
                    seen[y] = true;
                    order.push((y, x, gi));
                    next.push(y);
                }
            }
        }
        frontier = next;
    }
    order
}

/// All endomorphisms of `G`: try every assignment of images to a generating
/// set, build the table along a spanning tree and keep it if it respects
/// multiplication on every pair.
pub fn enumerate_end_direct(g: &Arc<FiniteGroup>, bound: usize) -> Result<EndCensus, OracleError> {
    if g.order() > bound {
        return Err(OracleError::BoundExceeded {
            order: g.order(),
            bound,
        });
    }
    let gens = g.generators();
    let tree = word_tree(g, &gens);
    let n = g.order();
    let mut tables = Vec::new();
    let mut imgs = vec![0usize; gens.len()];
    loop {
        let mut table = vec![g.identity(); n];
        for &(y, parent, gi) in &tree {
            table[y] = g.mul(table[parent], imgs[gi]);
        }
        if respects_law(g, &table) {
            tables.push(table);
        }
        // odometer over G^gens
        let mut pos = 0;
        loop {
            if pos == imgs.len() {
                return Ok(EndCensus::from_tables(g, tables));
            }
            imgs[pos] += 1;
            if imgs[pos] < n {
                break;
            }
            imgs[pos] = 0;
            pos += 1;
        }
    }
}

/// Largest order accepted by [`enumerate_end_naive`].
pub const NAIVE_LIMIT: usize = 8;

/// Every map `G -> G` filtered by the homomorphism law. The search assigns
/// images element by element and abandons a branch as soon as some pair
/// with all three values assigned violates the law, which still visits
/// every homomorphism.
pub fn enumerate_end_naive(g: &Arc<FiniteGroup>) -> Result<EndCensus, OracleError> {
    let n = g.order();
    if n > NAIVE_LIMIT {
        return Err(OracleError::BoundExceeded {
            order: n,
            bound: NAIVE_LIMIT,
        });
    }
    fn go(g: &FiniteGroup, table: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let i = table.len();
        if i == g.order() {
            out.push(table.clone());
            return;
        }
        for v in g.elements() {
            table.push(v);
            let ok = (0..=i).all(|a| {
                (0..=i).all(|b| {
                    let ab = g.mul(a, b);
                    ab > i || table[ab] == g.mul(table[a], table[b])
                })
            });
            if ok {
                go(g, table, out);
            }
            table.pop();
        }
    }
    let mut out = Vec::new();
    go(g, &mut Vec::with_capacity(n), &mut out);
    Ok(EndCensus::from_tables(g, out))
}

pub fn invert_endo_direct(theta: &Endo) -> Result<Endo, OracleError> {
    let table = theta.image();
    let mut inv = vec![usize::MAX; table.len()];
    for (x, &y) in table.iter().enumerate() {
        if inv[y] != usize::MAX {
            return Err(OracleError::NotBijective);
        }
        inv[y] = x;
    }
    let g = theta.group();
    Ok(Endo::trusted(FMap::from_parts(g.clone(), g.clone(), inv)))
}

/// `outer ∘ inner` on tables.
pub fn compose_endo_direct(outer: &Endo, inner: &Endo) -> Result<Endo, OracleError> {
    if outer.group().table() != inner.group().table() {
        return Err(OracleError::GroupMismatch);
    }
    let table = inner.image().iter().map(|&x| outer.image()[x]).collect();
    let g = inner.group();
    Ok(Endo::trusted(FMap::from_parts(g.clone(), g.clone(), table)))
}
