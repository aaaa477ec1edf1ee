//! Actions `f: K -> Aut(H)` and the semidirect product `H ⋊ K`.
//!
//! Elements of `H ⋊ K` are pairs `(h, k)` encoded as `h * |K| + k`, with
//! product `(h1, k1)(h2, k2) = (h1 f_{k1}(h2), k1 k2)`. Under this encoding
//! the copy of `H` is `{(h, 1)}` and the copy of `K` is `{(1, k)}`, and the
//! conjugate `k h k^-1` computed in the product is `(f_k(h), 1)`.

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

use crate::group::{enumerate_autos, extend_from_generators, for_each_assignment, FiniteGroup, GroupError, Subset};
use crate::maps::FMap;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ActionError {
    #[error("expected {expected} rows of length {row_len}, got {rows} rows")]
    WrongShape {
        expected: usize,
        row_len: usize,
        rows: usize,
    },
    #[error("row {row} has length {len}, expected {expected}")]
    WrongRowLength { row: usize, len: usize, expected: usize },
    #[error("image of K-element {0} is not an automorphism of H")]
    NotAutomorphism(usize),
    #[error("f({0}*{1}) != f({0}) ∘ f({1})")]
    NotHomomorphic(usize, usize),
    #[error("semidirect product table failed validation: {0}")]
    Product(#[from] GroupError),
}

/// A homomorphism `K -> Aut(H)` stored as one permutation of `H` per element of `K`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupAction {
    h: Arc<FiniteGroup>,
    k: Arc<FiniteGroup>,
    images: Vec<Vec<usize>>,
}

impl GroupAction {
    /// Validates that every row is an automorphism of `H`, that the identity
    /// of `K` acts trivially and that `f_{kk'} = f_k ∘ f_{k'}`.
    pub fn new(h: Arc<FiniteGroup>, k: Arc<FiniteGroup>, images: Vec<Vec<usize>>) -> Result<Self, ActionError> {
        let (nh, nk) = (h.order(), k.order());
        if images.len() != nk {
            return Err(ActionError::WrongShape {
                expected: nk,
                row_len: nh,
                rows: images.len(),
            });
        }
        for (row, perm) in images.iter().enumerate() {
            if perm.len() != nh {
                return Err(ActionError::WrongRowLength {
                    row,
                    len: perm.len(),
                    expected: nh,
                });
            }
        }
        for (kk, perm) in images.iter().enumerate() {
            let mut seen = vec![false; nh];
            let bijective = perm.iter().all(|&x| x < nh && !std::mem::replace(&mut seen[x], true));
            let hom = bijective
                && h.elements()
                    .all(|a| h.elements().all(|b| perm[h.mul(a, b)] == h.mul(perm[a], perm[b])));
            if !hom {
                return Err(ActionError::NotAutomorphism(kk));
            }
        }
        for a in k.elements() {
            for b in k.elements() {
                let ab = &images[k.mul(a, b)];
                if h.elements().any(|x| ab[x] != images[a][images[b][x]]) {
                    return Err(ActionError::NotHomomorphic(a, b));
                }
            }
        }
        // with rows bijective and f homomorphic, f_1 = f_1 ∘ f_1 forces f_1 = id
        Ok(GroupAction { h, k, images })
    }

    pub fn trivial(h: Arc<FiniteGroup>, k: Arc<FiniteGroup>) -> Self {
        let row: Vec<usize> = h.elements().collect();
        let images = vec![row; k.order()];
        GroupAction { h, k, images }
    }

    /// Action of a cyclic `K`, determined by the automorphism assigned to its
    /// generator `1`. Fails unless `auto^|K|` is the identity.
    pub fn cyclic(h: Arc<FiniteGroup>, k: Arc<FiniteGroup>, generator_image: &[usize]) -> Result<Self, ActionError> {
        let mut images = Vec::with_capacity(k.order());
        let mut current: Vec<usize> = h.elements().collect();
        for _ in 0..k.order() {
            images.push(current.clone());
            current = current.iter().map(|&x| generator_image[x]).collect();
        }
        // rows are indexed by residue; K is assumed to be the standard cyclic table
        GroupAction::new(h, k, images)
    }

    pub fn h(&self) -> &Arc<FiniteGroup> {
        &self.h
    }

    pub fn k(&self) -> &Arc<FiniteGroup> {
        &self.k
    }

    pub fn images(&self) -> &[Vec<usize>] {
        &self.images
    }

    /// `f_k(h)`
    #[inline]
    pub fn act(&self, k: usize, h: usize) -> usize {
        self.images[k][h]
    }

    pub fn is_trivial(&self) -> bool {
        self.images
            .iter()
            .all(|row| row.iter().enumerate().all(|(i, &x)| i == x))
    }

    /// Elements of `K` acting trivially on `H`; these are exactly the `k`
    /// commuting with every element of the copy of `H` in `H ⋊ K`.
    pub fn kernel(&self) -> Subset {
        let mask: Vec<bool> = self
            .images
            .iter()
            .map(|row| row.iter().enumerate().all(|(i, &x)| i == x))
            .collect();
        Subset::from_mask(self.k.clone(), &mask)
    }

    #[inline]
    pub fn acts_trivially(&self, k: usize) -> bool {
        self.images[k].iter().enumerate().all(|(i, &x)| i == x)
    }
}

/// Every action of `K` on `H`, sorted by the rows of images.
pub fn enumerate_actions(h: &Arc<FiniteGroup>, k: &Arc<FiniteGroup>) -> Vec<GroupAction> {
    let autos: Vec<Vec<usize>> = enumerate_autos(h).into_iter().map(FMap::into_image).collect();
    let lookup: HashMap<&[usize], usize> = autos.iter().enumerate().map(|(i, a)| (a.as_slice(), i)).collect();
    let compose = |outer: usize, inner: usize| -> usize {
        let table: Vec<usize> = autos[inner].iter().map(|&x| autos[outer][x]).collect();
        lookup[table.as_slice()]
    };
    let order_of = |a: usize| {
        let mut n = 1;
        let mut cur = a;
        while !autos[cur].iter().enumerate().all(|(i, &x)| i == x) {
            cur = compose(a, cur);
            n += 1;
        }
        n
    };
    let id = lookup[h.elements().collect::<Vec<_>>().as_slice()];
    let gens = k.generators();
    let choices: Vec<Vec<usize>> = gens
        .iter()
        .map(|&g| {
            let n = k.element_order(g);
            (0..autos.len()).filter(|&a| n.is_multiple_of(order_of(a))).collect()
        })
        .collect();
    let mut out = Vec::new();
    for_each_assignment(&choices, |imgs| {
        if let Some(table) = extend_from_generators(k, &gens, imgs, id, |_, ix, _, ig| compose(ix, ig)) {
            let images = table.into_iter().map(|a| autos[a].clone()).collect();
            if let Ok(action) = GroupAction::new(h.clone(), k.clone(), images) {
                out.push(action);
            }
        }
    });
    out.sort_by(|a, b| a.images.cmp(&b.images));
    out.dedup();
    out
}

/// `H ⋊ K` together with its Cayley table.
#[derive(Debug, Clone)]
pub struct SdProduct {
    name: String,
    action: GroupAction,
    group: Arc<FiniteGroup>,
}

impl SdProduct {
    pub fn new(action: GroupAction) -> Result<Self, ActionError> {
        let name = format!("{}x|{}", action.h.name(), action.k.name());
        Self::named(name, action)
    }

    pub fn named(name: impl Into<String>, action: GroupAction) -> Result<Self, ActionError> {
        let name = name.into();
        let (h, k) = (&action.h, &action.k);
        let nk = k.order();
        let n = h.order() * nk;
        let table = (0..n)
            .map(|x| {
                let (h1, k1) = (x / nk, x % nk);
                (0..n)
                    .map(|y| {
                        let (h2, k2) = (y / nk, y % nk);
                        h.mul(h1, action.act(k1, h2)) * nk + k.mul(k1, k2)
                    })
                    .collect()
            })
            .collect();
        let group = FiniteGroup::from_table(name.clone(), table, None)?;
        Ok(SdProduct {
            name,
            action,
            group: Arc::new(group),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn action(&self) -> &GroupAction {
        &self.action
    }

    pub fn h(&self) -> &Arc<FiniteGroup> {
        &self.action.h
    }

    pub fn k(&self) -> &Arc<FiniteGroup> {
        &self.action.k
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    #[inline]
    pub fn encode(&self, h: usize, k: usize) -> usize {
        h * self.action.k.order() + k
    }

    #[inline]
    pub fn decode(&self, g: usize) -> (usize, usize) {
        let nk = self.action.k.order();
        (g / nk, g % nk)
    }

    pub fn embed_h(&self, h: usize) -> usize {
        self.encode(h, self.action.k.identity())
    }

    pub fn embed_k(&self, k: usize) -> usize {
        self.encode(self.action.h.identity(), k)
    }

    /// `h^k = k h k^-1`, read back as an element of `H`.
    pub fn conj_action(&self, h: usize, k: usize) -> usize {
        self.action.act(k, h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::center;

    fn z(n: usize) -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::cyclic(n))
    }

    #[test]
    fn action_counts() {
        let acts = enumerate_actions(&z(3), &z(2));
        assert_eq!(acts.len(), 2);
        assert!(acts[0].is_trivial());
        assert_eq!(acts[1].images()[1], vec![0, 2, 1]);
        assert_eq!(enumerate_actions(&z(7), &z(3)).len(), 3);
        assert_eq!(enumerate_actions(&z(5), &z(3)).len(), 1);
        // Aut(Z2 x Z2) = S3 has three involutions
        let v = Arc::new(FiniteGroup::direct_product(
            &FiniteGroup::cyclic(2),
            &FiniteGroup::cyclic(2),
        ));
        assert_eq!(enumerate_actions(&v, &z(2)).len(), 4);
        assert_eq!(enumerate_actions(&z(4), &v).len(), 4);
    }

    fn inversion(n: usize) -> Vec<usize> {
        (0..n).map(|x| (n - x) % n).collect()
    }

    fn s3_model() -> SdProduct {
        let act = GroupAction::cyclic(z(3), z(2), &inversion(3)).unwrap();
        SdProduct::new(act).unwrap()
    }

    #[test]
    fn trivial_action_gives_direct_product() {
        let act = GroupAction::trivial(z(3), z(2));
        assert!(GroupAction::new(act.h().clone(), act.k().clone(), act.images().to_vec()).is_ok());
        let p = SdProduct::new(act).unwrap();
        let direct = FiniteGroup::direct_product(&FiniteGroup::cyclic(3), &FiniteGroup::cyclic(2));
        assert_eq!(p.group().table(), direct.table());
        assert!(p.group().is_abelian());
        assert_eq!(p.group().order(), 6);
    }

    #[test]
    fn inversion_action_builds_s3() {
        let act = GroupAction::new(z(3), z(2), vec![vec![0, 1, 2], vec![0, 2, 1]]).unwrap();
        let p = SdProduct::new(act).unwrap();
        assert!(!p.group().is_abelian());
        assert_eq!(center(p.group()).len(), 1);
        assert_eq!(p.conj_action(1, 1), 2);
        assert_eq!(p.action().kernel().members(), &[0]);
    }

    #[test]
    fn moving_identity_is_not_an_automorphism() {
        let err = GroupAction::new(z(3), z(2), vec![vec![0, 1, 2], vec![1, 0, 2]]).unwrap_err();
        assert_eq!(err, ActionError::NotAutomorphism(1));
    }

    #[test]
    fn non_homomorphic_action_rejected() {
        // Z3 acting on Z5 through x -> 2x needs 2^3 = 1 mod 5, which fails
        let double: Vec<usize> = (0..5).map(|x| 2 * x % 5).collect();
        let err = GroupAction::cyclic(z(5), z(3), &double).unwrap_err();
        assert!(matches!(err, ActionError::NotHomomorphic(_, _)), "{err:?}");
    }

    #[test]
    fn shape_errors() {
        assert!(matches!(
            GroupAction::new(z(3), z(2), vec![vec![0, 1, 2]]),
            Err(ActionError::WrongShape { .. })
        ));
        assert!(matches!(
            GroupAction::new(z(3), z(2), vec![vec![0, 1, 2], vec![0, 2]]),
            Err(ActionError::WrongRowLength { row: 1, .. })
        ));
    }

    #[test]
    fn dihedral_of_order_eight() {
        let act = GroupAction::cyclic(z(4), z(2), &inversion(4)).unwrap();
        let p = SdProduct::new(act).unwrap();
        assert_eq!(p.group().order(), 8);
        assert_eq!(center(p.group()).len(), 2);
    }

    #[test]
    fn kernel_through_quotient() {
        // generator of Z4 inverts Z4; the even residues act trivially
        let act = GroupAction::cyclic(z(4), z(4), &inversion(4)).unwrap();
        assert_eq!(act.kernel().members(), &[0, 2]);
        assert!(act.kernel().is_subgroup());
        assert_eq!(GroupAction::trivial(z(3), z(4)).kernel().len(), 4);
    }

    #[test]
    fn internal_and_external_agree() {
        for p in [
            s3_model(),
            SdProduct::new(GroupAction::cyclic(z(7), z(3), &[0, 2, 4, 6, 1, 3, 5]).unwrap()).unwrap(),
        ] {
            let g = p.group();
            for h in p.h().elements() {
                for k in p.k().elements() {
                    let (eh, ek) = (p.embed_h(h), p.embed_k(k));
                    let conj = g.mul(g.mul(ek, eh), g.inv(ek));
                    assert_eq!(conj, p.embed_h(p.conj_action(h, k)));
                    // k h = h^k k
                    assert_eq!(g.mul(ek, eh), g.mul(p.embed_h(p.conj_action(h, k)), ek));
                    assert_eq!(p.decode(p.encode(h, k)), (h, k));
                }
            }
            let hs: Vec<usize> = p.h().elements().map(|h| p.embed_h(h)).collect();
            let ks: Vec<usize> = p.k().elements().map(|k| p.embed_k(k)).collect();
            assert!(g.is_subgroup(&hs));
            assert!(g.is_subgroup(&ks));
            // H is normal
            assert!(g.elements().all(|x| hs.iter().all(|&y| hs.contains(&g.conj(x, y)))));
        }
    }

    #[test]
    fn identity_acts_trivially() {
        let p = s3_model();
        for h in 0..3 {
            assert_eq!(p.conj_action(h, 0), h);
        }
    }
}
