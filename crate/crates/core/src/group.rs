//! Finite groups as validated Cayley tables.
//!
//! Elements are dense indices `0..order`. The identity is detected from the
//! table rather than assumed to be index 0, so arbitrary external tables are
//! accepted as long as they satisfy the group axioms.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::maps::FMap;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("table is empty")]
    Empty,
    #[error("row {row} has length {len}, expected {order}")]
    NotSquare { row: usize, len: usize, order: usize },
    #[error("entry table[{a}][{b}] = {value} is out of range for order {order}")]
    OutOfRange {
        a: usize,
        b: usize,
        value: usize,
        order: usize,
    },
    #[error("no two-sided identity element")]
    NoIdentity,
    #[error("element {0} has no two-sided inverse")]
    MissingInverse(usize),
    #[error("({a}*{b})*{c} != {a}*({b}*{c})")]
    NotAssociative { a: usize, b: usize, c: usize },
    #[error("{given} element names supplied for a group of order {order}")]
    NameCount { given: usize, order: usize },
}

/// A finite group given by its multiplication table.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
    names: Option<Vec<String>>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("name", &self.name)
            .field("order", &self.order())
            .finish()
    }
}

impl FiniteGroup {
    /// Validates `table` (row-major, `table[a][b] = a*b`) and computes the
    /// identity and inverse tables.
    pub fn from_table(
        name: impl Into<String>,
        table: Vec<Vec<usize>>,
        names: Option<Vec<String>>,
    ) -> Result<Self, GroupError> {
        let order = table.len();
        if order == 0 {
            return Err(GroupError::Empty);
        }
        for (row, entries) in table.iter().enumerate() {
            if entries.len() != order {
                return Err(GroupError::NotSquare {
                    row,
                    len: entries.len(),
                    order,
                });
            }
            if let Some((b, &value)) = entries.iter().enumerate().find(|(_, &v)| v >= order) {
                return Err(GroupError::OutOfRange {
                    a: row,
                    b,
                    value,
                    order,
                });
            }
        }
        if let Some(names) = &names {
            if names.len() != order {
                return Err(GroupError::NameCount {
                    given: names.len(),
                    order,
                });
            }
        }

        let identity = (0..order)
            .find(|&e| (0..order).all(|a| table[e][a] == a && table[a][e] == a))
            .ok_or(GroupError::NoIdentity)?;

        let mut inverses = Vec::with_capacity(order);
        for a in 0..order {
            let inv = (0..order)
                .find(|&b| table[a][b] == identity && table[b][a] == identity)
                .ok_or(GroupError::MissingInverse(a))?;
            inverses.push(inv);
        }

        for a in 0..order {
            for b in 0..order {
                let ab = table[a][b];
                for c in 0..order {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(GroupError::NotAssociative { a, b, c });
                    }
                }
            }
        }

        Ok(FiniteGroup {
            name: name.into(),
            table,
            identity,
            inverses,
            names,
        })
    }

    /// The cyclic group of order `n` on residues `0..n`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n > 0, "cyclic group of order 0");
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        let name = if n == 1 { "trivial".to_string() } else { format!("Z{n}") };
        FiniteGroup::from_table(name, table, None).expect("cyclic table is a group")
    }

    pub fn trivial() -> Self {
        FiniteGroup::cyclic(1)
    }

    /// Direct product on pairs encoded as `a * |right| + b`.
    pub fn direct_product(left: &FiniteGroup, right: &FiniteGroup) -> Self {
        let m = right.order();
        let n = left.order() * m;
        let table = (0..n)
            .map(|x| {
                (0..n)
                    .map(|y| left.mul(x / m, y / m) * m + right.mul(x % m, y % m))
                    .collect()
            })
            .collect();
        let name = format!("{}x{}", left.name, right.name);
        FiniteGroup::from_table(name, table, None).expect("direct product of groups is a group")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    /// `g * x * g^-1`
    #[inline]
    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn inverses(&self) -> &[usize] {
        &self.inverses
    }

    pub fn element_names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order()
    }

    pub fn is_abelian(&self) -> bool {
        self.elements()
            .all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut n = 1;
        while x != self.identity {
            x = self.mul(x, a);
            n += 1;
        }
        n
    }

    /// `a^n` for `n >= 0`.
    pub fn pow(&self, a: usize, n: usize) -> usize {
        (0..n).fold(self.identity, |acc, _| self.mul(acc, a))
    }

    /// Membership mask of the subgroup generated by `gens`.
    pub fn closure(&self, gens: &[usize]) -> Vec<bool> {
        let mut seen = vec![false; self.order()];
        seen[self.identity] = true;
        let mut stack = vec![self.identity];
        while let Some(x) = stack.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen
    }

    /// Greedy generating set: walk the elements in index order and keep each
    /// one not already in the closure of those kept so far.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = self.closure(&gens);
        for a in self.elements() {
            if !span[a] {
                gens.push(a);
                span = self.closure(&gens);
            }
        }
        gens
    }

    pub fn is_subgroup(&self, members: &[usize]) -> bool {
        let mut mask = vec![false; self.order()];
        for &m in members {
            mask[m] = true;
        }
        mask[self.identity]
            && members
                .iter()
                .all(|&a| mask[self.inv(a)] && members.iter().all(|&b| mask[self.mul(a, b)]))
    }

    pub fn display(&self, a: usize) -> String {
        match &self.names {
            Some(names) => names[a].clone(),
            None => a.to_string(),
        }
    }
}

/// A sorted set of elements of one group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subset {
    group: Arc<FiniteGroup>,
    members: Vec<usize>,
}

impl Subset {
    pub fn from_mask(group: Arc<FiniteGroup>, mask: &[bool]) -> Self {
        let members = mask.iter().enumerate().filter_map(|(i, &m)| m.then_some(i)).collect();
        Subset { group, members }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, a: usize) -> bool {
        self.members.binary_search(&a).is_ok()
    }

    pub fn is_subgroup(&self) -> bool {
        self.group.is_subgroup(&self.members)
    }
}

/// `{ z : zg = gz for all g }`
pub fn center(group: &Arc<FiniteGroup>) -> Subset {
    let mask: Vec<bool> = group
        .elements()
        .map(|z| group.elements().all(|g| group.mul(z, g) == group.mul(g, z)))
        .collect();
    Subset::from_mask(group.clone(), &mask)
}

/// Extends images of the generators of `dom` to a full table by walking the
/// Cayley graph from the identity. `step(x, img_x, g, img_g)` returns the
/// image of `x*g`. Returns `None` if two paths to the same element disagree.
pub(crate) fn extend_from_generators(
    dom: &FiniteGroup,
    gens: &[usize],
    gen_images: &[usize],
    start: usize,
    mut step: impl FnMut(usize, usize, usize, usize) -> usize,
) -> Option<Vec<usize>> {
    const UNSET: usize = usize::MAX;
    let mut image = vec![UNSET; dom.order()];
    image[dom.identity()] = start;
    let mut queue = std::collections::VecDeque::from([dom.identity()]);
    while let Some(x) = queue.pop_front() {
        for (&g, &ig) in gens.iter().zip(gen_images) {
            let y = dom.mul(x, g);
            let v = step(x, image[x], g, ig);
            if image[y] == UNSET {
                image[y] = v;
                queue.push_back(y);
            } else if image[y] != v {
                return None;
            }
        }
    }
    debug_assert!(image.iter().all(|&v| v != UNSET), "generators do not generate");
    Some(image)
}

/// Runs `visit` on every assignment in the cartesian product of `choices`.
pub(crate) fn for_each_assignment(choices: &[Vec<usize>], mut visit: impl FnMut(&[usize])) {
    if choices.iter().any(Vec::is_empty) {
        return;
    }
    let mut idx = vec![0usize; choices.len()];
    let mut current: Vec<usize> = choices.iter().map(|c| c[0]).collect();
    loop {
        visit(&current);
        let mut pos = choices.len();
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < choices[pos].len() {
                current[pos] = choices[pos][idx[pos]];
                break;
            }
            idx[pos] = 0;
            current[pos] = choices[pos][0];
        }
    }
}

/// All homomorphisms `dom -> cod`, sorted by image table.
pub fn enumerate_homs(dom: &Arc<FiniteGroup>, cod: &Arc<FiniteGroup>) -> Vec<FMap> {
    let gens = dom.generators();
    let choices: Vec<Vec<usize>> = gens
        .iter()
        .map(|&g| {
            let n = dom.element_order(g);
            cod.elements()
                .filter(|&c| n.is_multiple_of(cod.element_order(c)))
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    for_each_assignment(&choices, |imgs| {
        let table = extend_from_generators(dom, &gens, imgs, cod.identity(), |_, ix, _, ig| cod.mul(ix, ig));
        if let Some(table) = table {
            let map = FMap::from_parts(dom.clone(), cod.clone(), table);
            if map.is_hom() {
                out.push(map);
            }
        }
    });
    out.sort();
    out.dedup();
    out
}

/// All automorphisms of `group`, sorted by image table.
pub fn enumerate_autos(group: &Arc<FiniteGroup>) -> Vec<FMap> {
    enumerate_homs(group, group)
        .into_iter()
        .filter(FMap::is_bijective)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3() -> Arc<FiniteGroup> {
        // permutations of {0,1,2} in lexicographic order, composed as (p*q)(i) = p(q(i))
        let perms: Vec<[usize; 3]> = vec![[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let idx = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
        let table = perms
            .iter()
            .map(|p| perms.iter().map(|q| idx([p[q[0]], p[q[1]], p[q[2]]])).collect())
            .collect();
        Arc::new(FiniteGroup::from_table("S3", table, None).unwrap())
    }

    fn klein() -> Arc<FiniteGroup> {
        let table = (0..4).map(|a| (0..4).map(|b| a ^ b).collect()).collect();
        Arc::new(FiniteGroup::from_table("V4", table, None).unwrap())
    }

    #[test]
    fn trivial_and_z2_tables() {
        let g = FiniteGroup::from_table("1", vec![vec![0]], None).unwrap();
        assert_eq!(g.order(), 1);
        assert_eq!(g.identity(), 0);
        let z2 = FiniteGroup::from_table("Z2", vec![vec![0, 1], vec![1, 0]], None).unwrap();
        assert_eq!(z2.inverses(), &[0, 1]);
    }

    #[test]
    fn identity_need_not_be_index_zero() {
        // Z2 with the identity stored at index 1
        let g = FiniteGroup::from_table("Z2'", vec![vec![1, 0], vec![0, 1]], None).unwrap();
        assert_eq!(g.identity(), 1);
        assert_eq!(g.inverses(), &[0, 1]);
    }

    #[test]
    fn broken_cancellation_is_rejected() {
        let mut table: Vec<Vec<usize>> = (0..3).map(|a| (0..3).map(|b| (a + b) % 3).collect()).collect();
        table[1][2] = 1;
        let err = FiniteGroup::from_table("bad", table, None).unwrap_err();
        assert!(
            matches!(err, GroupError::NotAssociative { .. } | GroupError::MissingInverse(_)),
            "{err:?}"
        );
    }

    #[test]
    fn malformed_tables() {
        assert_eq!(
            FiniteGroup::from_table("e", vec![], None).unwrap_err(),
            GroupError::Empty
        );
        assert!(matches!(
            FiniteGroup::from_table("x", vec![vec![0, 1], vec![1]], None),
            Err(GroupError::NotSquare { row: 1, .. })
        ));
        assert!(matches!(
            FiniteGroup::from_table("x", vec![vec![0, 2], vec![1, 0]], None),
            Err(GroupError::OutOfRange { value: 2, .. })
        ));
        assert_eq!(
            FiniteGroup::from_table("x", vec![vec![0, 0], vec![0, 0]], None).unwrap_err(),
            GroupError::NoIdentity
        );
        assert!(matches!(
            FiniteGroup::from_table("x", vec![vec![0]], Some(vec![])),
            Err(GroupError::NameCount { .. })
        ));
    }

    #[test]
    fn centers() {
        let z3 = Arc::new(FiniteGroup::cyclic(3));
        assert_eq!(center(&z3).members(), &[0, 1, 2]);
        assert_eq!(center(&klein()).len(), 4);
        let s3 = s3();
        assert_eq!(center(&s3).members(), &[s3.identity()]);
    }

    #[test]
    fn hom_counts() {
        let z = |n| Arc::new(FiniteGroup::cyclic(n));
        assert_eq!(enumerate_homs(&z(3), &z(2)).len(), 1);
        assert_eq!(enumerate_homs(&z(4), &z(2)).len(), 2);
        assert_eq!(enumerate_homs(&z(2), &z(2)).len(), 2);
    }

    #[test]
    fn hom_count_matches_full_map_scan() {
        // Hom(Z4, Z2) by filtering all 2^4 maps
        let z4 = Arc::new(FiniteGroup::cyclic(4));
        let z2 = Arc::new(FiniteGroup::cyclic(2));
        let brute = (0..16u32)
            .filter(|bits| {
                let f = |x: usize| ((bits >> x) & 1) as usize;
                (0..4).all(|a| (0..4).all(|b| f((a + b) % 4) == (f(a) + f(b)) % 2))
            })
            .count();
        assert_eq!(brute, 2);
        assert_eq!(enumerate_homs(&z4, &z2).len(), brute);
    }

    #[test]
    fn aut_counts() {
        let z3 = Arc::new(FiniteGroup::cyclic(3));
        let autos = enumerate_autos(&z3);
        assert_eq!(autos.len(), 2);
        assert_eq!(autos[0].image(), &[0, 1, 2]);
        assert_eq!(autos[1].image(), &[0, 2, 1]);
        assert_eq!(enumerate_autos(&Arc::new(FiniteGroup::trivial())).len(), 1);
        assert_eq!(enumerate_autos(&klein()).len(), 6);
        assert_eq!(enumerate_autos(&s3()).len(), 6);
        for p in [2, 3, 5, 7] {
            assert_eq!(enumerate_autos(&Arc::new(FiniteGroup::cyclic(p))).len(), p - 1);
        }
    }

    #[test]
    fn klein_autos_match_brute_force() {
        let v = klein();
        let mut brute = 0;
        for code in 0..256usize {
            let f: Vec<usize> = (0..4).map(|i| (code >> (2 * i)) & 3).collect();
            let hom = (0..4).all(|a| (0..4).all(|b| f[a ^ b] == f[a] ^ f[b]));
            let mut seen = f.clone();
            seen.sort();
            seen.dedup();
            if hom && seen.len() == 4 {
                brute += 1;
            }
        }
        assert_eq!(brute, 6);
        assert_eq!(enumerate_autos(&v).len(), brute);
    }

    #[test]
    fn homs_are_sorted_and_autos_subset() {
        let s3 = s3();
        let homs = enumerate_homs(&s3, &s3);
        assert_eq!(homs.len(), 10);
        assert!(homs.windows(2).all(|w| w[0].image() < w[1].image()));
        for a in enumerate_autos(&s3) {
            assert!(homs.contains(&a));
        }
    }

    #[test]
    fn greedy_generators_generate() {
        for g in [s3(), klein(), Arc::new(FiniteGroup::cyclic(6))] {
            let gens = g.generators();
            assert!(g.closure(&gens).iter().all(|&b| b));
        }
        assert!(FiniteGroup::trivial().generators().is_empty());
        assert_eq!(FiniteGroup::cyclic(5).generators(), vec![1]);
    }

    #[test]
    fn direct_product_table() {
        let p = FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2));
        assert_eq!(p.order(), 4);
        assert!(p.is_abelian());
        assert!((0..4).all(|a| p.element_order(a) <= 2));
    }
}
