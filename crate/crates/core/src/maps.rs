//! Total maps between finite groups and their pointwise algebra.
//!
//! For maps `U -> V` the operations are
//!
//! * `(φ + ψ)(u) = φ(u)ψ(u)`
//! * `(-φ)(u) = φ(u)^-1`
//! * `(ηφ)(u) = η(φ(u))`
//! * `φ^ψ(u) = ψ(u)φ(u)ψ(u)^-1`
//!
//! `+` is not commutative unless `V` is abelian, so argument order matters
//! everywhere below.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock};

use thiserror::Error;

use crate::action::GroupAction;
use crate::group::FiniteGroup;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapError {
    #[error("domain or codomain mismatch: {0}")]
    DomainMismatch(String),
    #[error("image table has length {len}, domain has order {order}")]
    WrongLength { len: usize, order: usize },
    #[error("image entry {value} at position {pos} is outside a codomain of order {order}")]
    OutOfRange { pos: usize, value: usize, order: usize },
    #[error("map is not bijective")]
    NotBijective,
}

pub(crate) fn same_group(a: &Arc<FiniteGroup>, b: &Arc<FiniteGroup>) -> bool {
    Arc::ptr_eq(a, b) || a.table() == b.table()
}

/// A map between two finite groups stored as its image table.
#[derive(Clone)]
pub struct FMap {
    dom: Arc<FiniteGroup>,
    cod: Arc<FiniteGroup>,
    image: Vec<usize>,
    hom: OnceLock<bool>,
    bijective: OnceLock<bool>,
}

impl FMap {
    pub fn new(dom: Arc<FiniteGroup>, cod: Arc<FiniteGroup>, image: Vec<usize>) -> Result<Self, MapError> {
        if image.len() != dom.order() {
            return Err(MapError::WrongLength {
                len: image.len(),
                order: dom.order(),
            });
        }
        if let Some((pos, &value)) = image.iter().enumerate().find(|(_, &v)| v >= cod.order()) {
            return Err(MapError::OutOfRange {
                pos,
                value,
                order: cod.order(),
            });
        }
        Ok(Self::from_parts(dom, cod, image))
    }

    pub(crate) fn from_parts(dom: Arc<FiniteGroup>, cod: Arc<FiniteGroup>, image: Vec<usize>) -> Self {
        debug_assert_eq!(image.len(), dom.order());
        FMap {
            dom,
            cod,
            image,
            hom: OnceLock::new(),
            bijective: OnceLock::new(),
        }
    }

    fn tabulate(dom: &Arc<FiniteGroup>, cod: &Arc<FiniteGroup>, f: impl FnMut(usize) -> usize) -> Self {
        Self::from_parts(dom.clone(), cod.clone(), dom.elements().map(f).collect())
    }

    pub fn identity(group: &Arc<FiniteGroup>) -> Self {
        Self::tabulate(group, group, |u| u)
    }

    /// The trivial morphism, sending everything to the identity of `cod`.
    pub fn zero(dom: &Arc<FiniteGroup>, cod: &Arc<FiniteGroup>) -> Self {
        Self::constant(dom, cod, cod.identity())
    }

    pub fn constant(dom: &Arc<FiniteGroup>, cod: &Arc<FiniteGroup>, value: usize) -> Self {
        Self::tabulate(dom, cod, |_| value)
    }

    pub fn dom(&self) -> &Arc<FiniteGroup> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<FiniteGroup> {
        &self.cod
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn into_image(self) -> Vec<usize> {
        self.image
    }

    #[inline]
    pub fn apply(&self, u: usize) -> usize {
        self.image[u]
    }

    pub fn is_hom(&self) -> bool {
        *self.hom.get_or_init(|| {
            let (d, c) = (&self.dom, &self.cod);
            d.elements().all(|a| {
                d.elements()
                    .all(|b| self.image[d.mul(a, b)] == c.mul(self.image[a], self.image[b]))
            })
        })
    }

    pub fn is_bijective(&self) -> bool {
        *self.bijective.get_or_init(|| {
            if self.dom.order() != self.cod.order() {
                return false;
            }
            let mut seen = vec![false; self.cod.order()];
            self.image.iter().all(|&v| !std::mem::replace(&mut seen[v], true))
        })
    }

    pub fn is_identity(&self) -> bool {
        same_group(&self.dom, &self.cod) && self.image.iter().enumerate().all(|(i, &v)| i == v)
    }

    pub fn is_zero(&self) -> bool {
        self.image.iter().all(|&v| v == self.cod.identity())
    }

    fn check_parallel(&self, other: &FMap, op: &str) -> Result<(), MapError> {
        if same_group(&self.dom, &other.dom) && same_group(&self.cod, &other.cod) {
            Ok(())
        } else {
            Err(MapError::DomainMismatch(format!(
                "{op}: {}->{} vs {}->{}",
                self.dom.name(),
                self.cod.name(),
                other.dom.name(),
                other.cod.name()
            )))
        }
    }

    /// Pointwise product `u -> self(u) * other(u)`.
    pub fn add(&self, other: &FMap) -> Result<FMap, MapError> {
        self.check_parallel(other, "add")?;
        let c = &self.cod;
        Ok(Self::tabulate(&self.dom, c, |u| c.mul(self.image[u], other.image[u])))
    }

    /// `self + (-other)`
    pub fn sub(&self, other: &FMap) -> Result<FMap, MapError> {
        self.add(&other.neg())
    }

    /// Pointwise inverse.
    pub fn neg(&self) -> FMap {
        let c = &self.cod;
        Self::tabulate(&self.dom, c, |u| c.inv(self.image[u]))
    }

    /// `self ∘ inner`, i.e. `u -> self(inner(u))`.
    pub fn compose(&self, inner: &FMap) -> Result<FMap, MapError> {
        if !same_group(&inner.cod, &self.dom) {
            return Err(MapError::DomainMismatch(format!(
                "compose: codomain {} does not match domain {}",
                inner.cod.name(),
                self.dom.name()
            )));
        }
        Ok(Self::tabulate(&inner.dom, &self.cod, |u| self.image[inner.image[u]]))
    }

    /// Conjugation inside the codomain: `u -> by(u) * self(u) * by(u)^-1`.
    pub fn twist(&self, by: &FMap) -> Result<FMap, MapError> {
        self.check_parallel(by, "twist")?;
        let c = &self.cod;
        Ok(Self::tabulate(&self.dom, c, |u| c.conj(by.image[u], self.image[u])))
    }

    /// Twist of an `H`-valued map by a `K`-valued map through the action,
    /// `u -> f_{by(u)}(self(u))`. This is the conjugation `by(u) self(u) by(u)^-1`
    /// computed inside the semidirect product.
    pub fn twist_by_action(&self, by: &FMap, action: &GroupAction) -> Result<FMap, MapError> {
        if !same_group(&self.dom, &by.dom) {
            return Err(MapError::DomainMismatch("twist: domains differ".into()));
        }
        if !same_group(&self.cod, action.h()) || !same_group(&by.cod, action.k()) {
            return Err(MapError::DomainMismatch(
                "twist: maps must land in the acted-on group and the acting group".into(),
            ));
        }
        Ok(Self::tabulate(&self.dom, &self.cod, |u| {
            action.act(by.image[u], self.image[u])
        }))
    }

    pub fn inverse(&self) -> Result<FMap, MapError> {
        if !self.is_bijective() {
            return Err(MapError::NotBijective);
        }
        let mut inv = vec![0; self.image.len()];
        for (u, &v) in self.image.iter().enumerate() {
            inv[v] = u;
        }
        let out = Self::from_parts(self.cod.clone(), self.dom.clone(), inv);
        let _ = out.bijective.set(true);
        Ok(out)
    }
}

/// Crossed-homomorphism law `β(kk') = β(k) · f_{δ(k)}(β(k'))` for `β: K -> H`
/// and `δ: K -> K`. With `δ` the identity this is membership in `CHom(K, H)`;
/// with a trivial action it is the ordinary homomorphism law.
pub fn is_crossed_hom(beta: &FMap, delta: &FMap, action: &GroupAction) -> Result<bool, MapError> {
    let (h, k) = (action.h(), action.k());
    if !same_group(beta.dom(), k) || !same_group(beta.cod(), h) {
        return Err(MapError::DomainMismatch("crossed hom: β must map K to H".into()));
    }
    if !same_group(delta.dom(), k) || !same_group(delta.cod(), k) {
        return Err(MapError::DomainMismatch("crossed hom: δ must map K to K".into()));
    }
    Ok(k.elements().all(|a| {
        k.elements()
            .all(|b| beta.apply(k.mul(a, b)) == h.mul(beta.apply(a), action.act(delta.apply(a), beta.apply(b))))
    }))
}

impl PartialEq for FMap {
    fn eq(&self, other: &Self) -> bool {
        self.cod.order() == other.cod.order() && self.image == other.image
    }
}

impl Eq for FMap {}

impl Hash for FMap {
    fn hash<S: Hasher>(&self, state: &mut S) {
        self.image.hash(state);
    }
}

impl PartialOrd for FMap {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FMap {
    fn cmp(&self, other: &Self) -> Ordering {
        self.image
            .cmp(&other.image)
            .then(self.cod.order().cmp(&other.cod.order()))
    }
}

impl fmt::Debug for FMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{} {:?}", self.dom.name(), self.cod.name(), self.image)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use proptest::prelude::*;

    fn z(n: usize) -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::cyclic(n))
    }

    fn map(dom: &Arc<FiniteGroup>, cod: &Arc<FiniteGroup>, img: &[usize]) -> FMap {
        FMap::new(dom.clone(), cod.clone(), img.to_vec()).unwrap()
    }

    #[test]
    fn add_examples() {
        let z3 = z(3);
        let id = FMap::identity(&z3);
        assert_eq!(id.add(&id).unwrap().image(), &[0, 2, 1]);
        assert!(id.add(&id.neg()).unwrap().is_zero());
        let z2 = z(2);
        let id2 = FMap::identity(&z2);
        assert!(id2.add(&id2).unwrap().is_zero());
    }

    #[test]
    fn neg_examples() {
        let z3 = z(3);
        assert!(FMap::zero(&z3, &z3).neg().is_zero());
        assert_eq!(FMap::identity(&z3).neg().image(), &[0, 2, 1]);
        let phi = map(&z3, &z3, &[2, 0, 0]);
        assert_eq!(phi.neg().neg(), phi);
    }

    #[test]
    fn compose_examples() {
        let z3 = z(3);
        let phi = map(&z3, &z3, &[1, 1, 2]);
        assert_eq!(FMap::identity(&z3).compose(&phi).unwrap(), phi);
        let inv = FMap::identity(&z3).neg();
        assert!(inv.compose(&inv).unwrap().is_identity());
        let sq = map(&z3, &z3, &[0, 2, 1]);
        assert!(sq.compose(&sq).unwrap().is_identity());
        assert!(matches!(
            FMap::identity(&z(2)).compose(&phi),
            Err(MapError::DomainMismatch(_))
        ));
    }

    #[test]
    fn twist_examples() {
        let z4 = z(4);
        let phi = map(&z4, &z4, &[3, 1, 0, 2]);
        let psi = map(&z4, &z4, &[1, 2, 2, 3]);
        assert_eq!(phi.twist(&psi).unwrap(), phi);
        assert_eq!(phi.twist(&FMap::zero(&z4, &z4)).unwrap(), phi);

        // inside S3: conjugating a rotation by a reflection inverts it
        let s3 = catalog::dihedral(3).group().clone();
        let rot = 2; // (h=1, k=0)
        let refl = 1; // (h=0, k=1)
        let phi = FMap::constant(&z4, &s3, rot);
        let psi = FMap::constant(&z4, &s3, refl);
        let twisted = phi.twist(&psi).unwrap();
        assert!(twisted.image().iter().all(|&v| v == s3.mul(rot, rot)));
    }

    #[test]
    fn inverse_examples() {
        let z3 = z(3);
        assert!(FMap::identity(&z3).inverse().unwrap().is_identity());
        let inv = FMap::identity(&z3).neg();
        assert_eq!(inv.inverse().unwrap(), inv);
        let sq = map(&z3, &z3, &[0, 2, 1]);
        assert_eq!(sq.inverse().unwrap(), sq);
        assert_eq!(FMap::zero(&z3, &z3).inverse().unwrap_err(), MapError::NotBijective);
    }

    #[test]
    fn new_validates() {
        let z3 = z(3);
        assert!(matches!(
            FMap::new(z3.clone(), z3.clone(), vec![0, 1]),
            Err(MapError::WrongLength { .. })
        ));
        assert!(matches!(
            FMap::new(z3.clone(), z3.clone(), vec![0, 1, 3]),
            Err(MapError::OutOfRange { pos: 2, .. })
        ));
    }

    #[test]
    fn crossed_hom_examples() {
        let p = catalog::dihedral(3);
        let act = p.action();
        let (h, k) = (act.h().clone(), act.k().clone());
        let id_k = FMap::identity(&k);
        assert!(is_crossed_hom(&FMap::zero(&k, &h), &id_k, act).unwrap());
        assert!(is_crossed_hom(&FMap::zero(&k, &h), &FMap::zero(&k, &k), act).unwrap());
        for b in 0..3 {
            assert!(is_crossed_hom(&map(&k, &h, &[0, b]), &id_k, act).unwrap());
            assert!(!is_crossed_hom(&map(&k, &h, &[1, b]), &id_k, act).unwrap());
        }
        assert!(matches!(
            is_crossed_hom(&id_k, &id_k, act),
            Err(MapError::DomainMismatch(_))
        ));
    }

    #[test]
    fn crossed_hom_with_trivial_action_is_hom_law() {
        let act = GroupAction::trivial(z(4), z(2));
        let (h, k) = (act.h().clone(), act.k().clone());
        let id_k = FMap::identity(&k);
        for img in [[0, 0], [0, 2], [0, 1], [1, 0], [0, 3]] {
            let beta = map(&k, &h, &img);
            assert_eq!(is_crossed_hom(&beta, &id_k, &act).unwrap(), beta.is_hom());
        }
    }

    fn small_group() -> impl Strategy<Value = Arc<FiniteGroup>> {
        prop_oneof![
            Just(z(1)),
            Just(z(2)),
            Just(z(3)),
            Just(z(4)),
            Just(Arc::new(FiniteGroup::direct_product(
                &FiniteGroup::cyclic(2),
                &FiniteGroup::cyclic(2)
            ))),
        ]
    }

    fn maps_between(dom: Arc<FiniteGroup>, cod: Arc<FiniteGroup>) -> impl Strategy<Value = FMap> {
        let (n, m) = (dom.order(), cod.order());
        proptest::collection::vec(0..m, n).prop_map(move |img| FMap::new(dom.clone(), cod.clone(), img).unwrap())
    }

    fn three_maps() -> impl Strategy<Value = (FMap, FMap, FMap)> {
        (small_group(), small_group()).prop_flat_map(|(u, v)| {
            (
                maps_between(u.clone(), v.clone()),
                maps_between(u.clone(), v.clone()),
                maps_between(u, v),
            )
        })
    }

    proptest! {
        #[test]
        fn pointwise_sum_is_a_group((a, b, c) in three_maps()) {
            let zero = FMap::zero(a.dom(), a.cod());
            let lhs = a.add(&b).unwrap().add(&c).unwrap();
            let rhs = a.add(&b.add(&c).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
            prop_assert_eq!(a.add(&zero).unwrap(), a.clone());
            prop_assert_eq!(zero.add(&a).unwrap(), a.clone());
            prop_assert!(a.add(&a.neg()).unwrap().is_zero());
            prop_assert!(a.neg().add(&a).unwrap().is_zero());
            prop_assert_eq!(a.neg().neg(), a);
        }

        #[test]
        fn twist_into_abelian_is_identity((a, b, _c) in three_maps()) {
            prop_assert_eq!(a.twist(&b).unwrap(), a);
        }

        #[test]
        fn bijections_invert_both_ways(perm in Just((0..6).collect::<Vec<usize>>()).prop_shuffle()) {
            let s3 = catalog::dihedral(3).group().clone();
            let phi = FMap::new(s3.clone(), s3.clone(), perm).unwrap();
            let inv = phi.inverse().unwrap();
            prop_assert!(phi.compose(&inv).unwrap().is_identity());
            prop_assert!(inv.compose(&phi).unwrap().is_identity());
        }
    }
}
