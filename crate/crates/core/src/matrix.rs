//! Endomorphisms of `G = H ⋊ K` as 2x2 matrices of maps.
//!
//! A matrix `(α β; γ δ)` with `α: H -> H`, `β: K -> H`, `γ ∈ Hom(H, K)` and
//! `δ ∈ End(K)` describes the endomorphism
//!
//! ```text
//! θ(h, k) = (α(h) · f_{γ(h)}(β(k)),  γ(h) δ(k))
//! ```
//!
//! It is an endomorphism exactly when the four conditions below hold, and the
//! correspondence is a monoid isomorphism for the product implemented by
//! [`EndoMatrix::mul`].
//!
//! * (i)   `α(hh') = α(h) α(h')^{γ(h)}`
//! * (ii)  `β(kk') = β(k) β(k')^{δ(k)}`
//! * (iii) `γ(h^k) δ(k) = δ(k) γ(h)`
//! * (iv)  `α(h^k) β(k)^{γ(h^k)} = β(k) α(h)^{δ(k)}`

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::action::SdProduct;
use crate::group::{enumerate_homs, extend_from_generators, for_each_assignment, FiniteGroup};
use crate::maps::{is_crossed_hom, same_group, FMap, MapError};

/// Largest `|G|` enumerated unless the caller raises the bound.
pub const DEFAULT_BOUND: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Condition {
    GammaHom,
    DeltaHom,
    /// (i)
    AlphaTwisted,
    /// (ii)
    BetaCrossed,
    /// (iii)
    GammaDelta,
    /// (iv)
    AlphaBeta,
}

impl Condition {
    pub const ALL: [Condition; 6] = [
        Condition::GammaHom,
        Condition::DeltaHom,
        Condition::AlphaTwisted,
        Condition::BetaCrossed,
        Condition::GammaDelta,
        Condition::AlphaBeta,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Condition::GammaHom => "gamma_hom",
            Condition::DeltaHom => "delta_hom",
            Condition::AlphaTwisted => "i",
            Condition::BetaCrossed => "ii",
            Condition::GammaDelta => "iii",
            Condition::AlphaBeta => "iv",
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("matrices belong to different semidirect products")]
    ContextMismatch,
    #[error("condition ({condition}) fails at {witness:?}")]
    ConditionsViolated {
        condition: Condition,
        witness: (usize, usize),
    },
    #[error("map is not a homomorphism of the semidirect product")]
    NotHomomorphism,
    #[error("|G| = {order} exceeds the enumeration bound {bound}")]
    BoundExceeded { order: usize, bound: usize },
    #[error(transparent)]
    Map(#[from] MapError),
}

/// Per-condition outcome; `None` means the condition holds, otherwise the
/// first violating pair is recorded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionReport {
    pub results: Vec<(Condition, Option<(usize, usize)>)>,
}

impl ConditionReport {
    pub fn all_pass(&self) -> bool {
        self.results.iter().all(|(_, w)| w.is_none())
    }

    pub fn first_failure(&self) -> Option<(Condition, (usize, usize))> {
        self.results.iter().find_map(|&(c, w)| w.map(|w| (c, w)))
    }

    pub fn get(&self, condition: Condition) -> Option<(usize, usize)> {
        self.results.iter().find(|(c, _)| *c == condition).and_then(|(_, w)| *w)
    }

    pub fn into_result(self) -> Result<(), MatrixError> {
        match self.first_failure() {
            None => Ok(()),
            Some((condition, witness)) => Err(MatrixError::ConditionsViolated { condition, witness }),
        }
    }
}

/// An endomorphism of a finite group, stored as its image table.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Endo {
    map: FMap,
}

impl Endo {
    pub fn new(map: FMap) -> Result<Self, MatrixError> {
        if !same_group(map.dom(), map.cod()) {
            return Err(MatrixError::ShapeMismatch(
                "endomorphism must map a group to itself".into(),
            ));
        }
        if !map.is_hom() {
            return Err(MatrixError::NotHomomorphism);
        }
        Ok(Endo { map })
    }

    /// Wraps a table already known to be a homomorphism.
    pub(crate) fn trusted(map: FMap) -> Self {
        debug_assert!(map.is_hom());
        Endo { map }
    }

    pub fn identity(group: &Arc<FiniteGroup>) -> Self {
        Endo {
            map: FMap::identity(group),
        }
    }

    pub fn map(&self) -> &FMap {
        &self.map
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.map.dom()
    }

    pub fn image(&self) -> &[usize] {
        self.map.image()
    }

    pub fn is_bijective(&self) -> bool {
        self.map.is_bijective()
    }
}

/// An element `(α β; γ δ)` of the matrix monoid for a fixed `H ⋊ K`.
#[derive(Clone)]
pub struct EndoMatrix {
    ctx: Arc<SdProduct>,
    alpha: FMap,
    beta: FMap,
    gamma: FMap,
    delta: FMap,
}

impl EndoMatrix {
    /// Checks only that each entry has the right domain and codomain.
    pub fn new(ctx: Arc<SdProduct>, alpha: FMap, beta: FMap, gamma: FMap, delta: FMap) -> Result<Self, MatrixError> {
        let (h, k) = (ctx.h(), ctx.k());
        let shapes = [
            ("alpha", &alpha, h, h),
            ("beta", &beta, k, h),
            ("gamma", &gamma, h, k),
            ("delta", &delta, k, k),
        ];
        for (name, map, dom, cod) in shapes {
            if !same_group(map.dom(), dom) || !same_group(map.cod(), cod) {
                return Err(MatrixError::ShapeMismatch(format!(
                    "{name} must map {} to {}",
                    dom.name(),
                    cod.name()
                )));
            }
        }
        Ok(EndoMatrix {
            ctx,
            alpha,
            beta,
            gamma,
            delta,
        })
    }

    /// Builds a matrix from raw image tables.
    pub fn from_images(
        ctx: &Arc<SdProduct>,
        alpha: Vec<usize>,
        beta: Vec<usize>,
        gamma: Vec<usize>,
        delta: Vec<usize>,
    ) -> Result<Self, MatrixError> {
        let (h, k) = (ctx.h().clone(), ctx.k().clone());
        let entry = |name: &str, dom: &Arc<FiniteGroup>, cod: &Arc<FiniteGroup>, img| {
            FMap::new(dom.clone(), cod.clone(), img).map_err(|e| MatrixError::ShapeMismatch(format!("{name}: {e}")))
        };
        Self::new(
            ctx.clone(),
            entry("alpha", &h, &h, alpha)?,
            entry("beta", &k, &h, beta)?,
            entry("gamma", &h, &k, gamma)?,
            entry("delta", &k, &k, delta)?,
        )
    }

    pub(crate) fn from_parts(ctx: Arc<SdProduct>, alpha: FMap, beta: FMap, gamma: FMap, delta: FMap) -> Self {
        EndoMatrix {
            ctx,
            alpha,
            beta,
            gamma,
            delta,
        }
    }

    /// `(1 0; 0 1)`
    pub fn identity(ctx: &Arc<SdProduct>) -> Self {
        let (h, k) = (ctx.h(), ctx.k());
        EndoMatrix {
            ctx: ctx.clone(),
            alpha: FMap::identity(h),
            beta: FMap::zero(k, h),
            gamma: FMap::zero(h, k),
            delta: FMap::identity(k),
        }
    }

    /// `(0 0; 0 0)`, the trivial endomorphism.
    pub fn zero(ctx: &Arc<SdProduct>) -> Self {
        let (h, k) = (ctx.h(), ctx.k());
        EndoMatrix {
            ctx: ctx.clone(),
            alpha: FMap::zero(h, h),
            beta: FMap::zero(k, h),
            gamma: FMap::zero(h, k),
            delta: FMap::zero(k, k),
        }
    }

    pub fn ctx(&self) -> &Arc<SdProduct> {
        &self.ctx
    }

    pub fn alpha(&self) -> &FMap {
        &self.alpha
    }

    pub fn beta(&self) -> &FMap {
        &self.beta
    }

    pub fn gamma(&self) -> &FMap {
        &self.gamma
    }

    pub fn delta(&self) -> &FMap {
        &self.delta
    }

    pub fn is_identity(&self) -> bool {
        self.alpha.is_identity() && self.beta.is_zero() && self.gamma.is_zero() && self.delta.is_identity()
    }

    pub fn check_conditions(&self) -> ConditionReport {
        let act = self.ctx.action();
        let (h, k) = (act.h(), act.k());
        let (a, b, c, d) = (&self.alpha, &self.beta, &self.gamma, &self.delta);
        let first = |dom_x: &FiniteGroup, dom_y: &FiniteGroup, holds: &dyn Fn(usize, usize) -> bool| {
            dom_x
                .elements()
                .find_map(|x| dom_y.elements().find(|&y| !holds(x, y)).map(|y| (x, y)))
        };
        let gamma_hom = first(h, h, &|x, y| c.apply(h.mul(x, y)) == k.mul(c.apply(x), c.apply(y)));
        let delta_hom = first(k, k, &|x, y| d.apply(k.mul(x, y)) == k.mul(d.apply(x), d.apply(y)));
        let cond_i = first(h, h, &|x, y| {
            a.apply(h.mul(x, y)) == h.mul(a.apply(x), act.act(c.apply(x), a.apply(y)))
        });
        let cond_ii = first(k, k, &|x, y| {
            b.apply(k.mul(x, y)) == h.mul(b.apply(x), act.act(d.apply(x), b.apply(y)))
        });
        let cond_iii = first(h, k, &|x, y| {
            let xy = act.act(y, x);
            k.mul(c.apply(xy), d.apply(y)) == k.mul(d.apply(y), c.apply(x))
        });
        let cond_iv = first(h, k, &|x, y| {
            let xy = act.act(y, x);
            let lhs = h.mul(a.apply(xy), act.act(c.apply(xy), b.apply(y)));
            let rhs = h.mul(b.apply(y), act.act(d.apply(y), a.apply(x)));
            lhs == rhs
        });
        ConditionReport {
            results: vec![
                (Condition::GammaHom, gamma_hom),
                (Condition::DeltaHom, delta_hom),
                (Condition::AlphaTwisted, cond_i),
                (Condition::BetaCrossed, cond_ii),
                (Condition::GammaDelta, cond_iii),
                (Condition::AlphaBeta, cond_iv),
            ],
        }
    }

    pub fn is_valid(&self) -> bool {
        self.check_conditions().all_pass()
    }

    fn same_ctx(&self, other: &EndoMatrix) -> bool {
        Arc::ptr_eq(&self.ctx, &other.ctx)
            || (same_group(self.ctx.group(), other.ctx.group())
                && self.ctx.h().order() == other.ctx.h().order()
                && self.ctx.action() == other.ctx.action())
    }

    /// `self · rhs`, the matrix of `θ_self ∘ θ_rhs`:
    ///
    /// ```text
    /// (α' β'; γ' δ')(α β; γ δ) = (α'α + (β'γ)^{γ'α}   α'β + (β'δ)^{γ'β};
    ///                             γ'α + δ'γ           γ'β + δ'δ)
    /// ```
    pub fn mul(&self, rhs: &EndoMatrix) -> Result<EndoMatrix, MatrixError> {
        if !self.same_ctx(rhs) {
            return Err(MatrixError::ContextMismatch);
        }
        let act = self.ctx.action();
        let (a1, b1, c1, d1) = (&self.alpha, &self.beta, &self.gamma, &self.delta);
        let (a, b, c, d) = (&rhs.alpha, &rhs.beta, &rhs.gamma, &rhs.delta);
        let alpha = a1
            .compose(a)?
            .add(&b1.compose(c)?.twist_by_action(&c1.compose(a)?, act)?)?;
        let beta = a1
            .compose(b)?
            .add(&b1.compose(d)?.twist_by_action(&c1.compose(b)?, act)?)?;
        let gamma = c1.compose(a)?.add(&d1.compose(c)?)?;
        let delta = c1.compose(b)?.add(&d1.compose(d)?)?;
        Ok(EndoMatrix::from_parts(self.ctx.clone(), alpha, beta, gamma, delta))
    }

    /// Table of `(h, k) -> (α(h) f_{γ(h)}(β(k)), γ(h)δ(k))` without checking
    /// the conditions.
    pub fn to_map(&self) -> FMap {
        let p = &self.ctx;
        let (h, k) = (p.h(), p.k());
        let act = p.action();
        let image = p
            .group()
            .elements()
            .map(|g| {
                let (x, y) = p.decode(g);
                let cx = self.gamma.apply(x);
                let top = h.mul(self.alpha.apply(x), act.act(cx, self.beta.apply(y)));
                let bottom = k.mul(cx, self.delta.apply(y));
                p.encode(top, bottom)
            })
            .collect();
        FMap::from_parts(p.group().clone(), p.group().clone(), image)
    }

    pub fn to_endo(&self) -> Result<Endo, MatrixError> {
        self.check_conditions().into_result()?;
        let map = self.to_map();
        if !map.is_hom() {
            // unreachable when the conditions hold; kept as a hard check
            return Err(MatrixError::NotHomomorphism);
        }
        Ok(Endo::trusted(map))
    }

    /// Reads `α, γ` off `θ` on the copy of `H` and `β, δ` off the copy of `K`.
    pub fn from_endo(ctx: &Arc<SdProduct>, theta: &Endo) -> Result<Self, MatrixError> {
        if !same_group(theta.group(), ctx.group()) {
            return Err(MatrixError::ContextMismatch);
        }
        let (h, k) = (ctx.h().clone(), ctx.k().clone());
        let mut alpha = Vec::with_capacity(h.order());
        let mut gamma = Vec::with_capacity(h.order());
        for x in h.elements() {
            let (a, c) = ctx.decode(theta.map.apply(ctx.embed_h(x)));
            alpha.push(a);
            gamma.push(c);
        }
        let mut beta = Vec::with_capacity(k.order());
        let mut delta = Vec::with_capacity(k.order());
        for y in k.elements() {
            let (b, d) = ctx.decode(theta.map.apply(ctx.embed_k(y)));
            beta.push(b);
            delta.push(d);
        }
        Ok(EndoMatrix::from_parts(
            ctx.clone(),
            FMap::from_parts(h.clone(), h.clone(), alpha),
            FMap::from_parts(k.clone(), h.clone(), beta),
            FMap::from_parts(h.clone(), k.clone(), gamma),
            FMap::from_parts(k.clone(), k, delta),
        ))
    }

    /// Whether the associated endomorphism is bijective.
    pub fn is_automorphism(&self) -> Result<bool, MatrixError> {
        self.check_conditions().into_result()?;
        Ok(self.to_map().is_bijective())
    }

    /// Unique solvability: every `(h', k')` is `(α(h)β(k)^{γ(h)}, γ(h)δ(k))`
    /// for exactly one pair `(h, k)`. Counted directly rather than through
    /// the endomorphism table.
    pub fn has_unique_preimages(&self) -> bool {
        let p = &self.ctx;
        let (h, k) = (p.h(), p.k());
        let act = p.action();
        let mut hits = vec![0u32; p.group().order()];
        for x in h.elements() {
            for y in k.elements() {
                let top = h.mul(self.alpha.apply(x), act.act(self.gamma.apply(x), self.beta.apply(y)));
                let bottom = k.mul(self.gamma.apply(x), self.delta.apply(y));
                hits[top * k.order() + bottom] += 1;
            }
        }
        hits.iter().all(|&n| n == 1)
    }

    fn key(&self) -> (&[usize], &[usize], &[usize], &[usize]) {
        (
            self.alpha.image(),
            self.beta.image(),
            self.gamma.image(),
            self.delta.image(),
        )
    }
}

impl PartialEq for EndoMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

impl Eq for EndoMatrix {}

impl std::hash::Hash for EndoMatrix {
    fn hash<S: std::hash::Hasher>(&self, state: &mut S) {
        self.key().hash(state);
    }
}

impl PartialOrd for EndoMatrix {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for EndoMatrix {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl fmt::Debug for EndoMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[α={:?} β={:?}; γ={:?} δ={:?}]",
            self.alpha.image(),
            self.beta.image(),
            self.gamma.image(),
            self.delta.image()
        )
    }
}

pub fn mat_mul(left: &EndoMatrix, right: &EndoMatrix) -> Result<EndoMatrix, MatrixError> {
    left.mul(right)
}

pub fn mat_to_endo(m: &EndoMatrix) -> Result<Endo, MatrixError> {
    m.to_endo()
}

pub fn endo_to_mat(ctx: &Arc<SdProduct>, theta: &Endo) -> Result<EndoMatrix, MatrixError> {
    EndoMatrix::from_endo(ctx, theta)
}

pub fn is_automorphism_matrix(m: &EndoMatrix) -> Result<bool, MatrixError> {
    m.is_automorphism()
}

/// Crossed homomorphisms `K -> H` twisted by `δ`, by generator-image search.
fn crossed_homs(ctx: &SdProduct, delta: &FMap, gens: &[usize]) -> Vec<FMap> {
    let act = ctx.action();
    let (h, k) = (ctx.h(), ctx.k());
    let choices = vec![h.elements().collect::<Vec<_>>(); gens.len()];
    let mut out = Vec::new();
    for_each_assignment(&choices, |imgs| {
        let table = extend_from_generators(k, gens, imgs, h.identity(), |x, bx, _, bg| {
            h.mul(bx, act.act(delta.apply(x), bg))
        });
        if let Some(table) = table {
            let beta = FMap::from_parts(k.clone(), h.clone(), table);
            if is_crossed_hom(&beta, delta, act).unwrap_or(false) {
                out.push(beta);
            }
        }
    });
    out.sort();
    out.dedup();
    out
}

/// Maps `α: H -> H` with `α(hh') = α(h) f_{γ(h)}(α(h'))`.
fn twisted_homs(ctx: &SdProduct, gamma: &FMap, gens: &[usize]) -> Vec<FMap> {
    let act = ctx.action();
    let h = ctx.h();
    let choices = vec![h.elements().collect::<Vec<_>>(); gens.len()];
    let mut out = Vec::new();
    for_each_assignment(&choices, |imgs| {
        let table = extend_from_generators(h, gens, imgs, h.identity(), |x, ax, _, ag| {
            h.mul(ax, act.act(gamma.apply(x), ag))
        });
        if let Some(table) = table {
            let ok = h.elements().all(|x| {
                h.elements()
                    .all(|y| table[h.mul(x, y)] == h.mul(table[x], act.act(gamma.apply(x), table[y])))
            });
            if ok {
                out.push(FMap::from_parts(h.clone(), h.clone(), table));
            }
        }
    });
    out.sort();
    out.dedup();
    out
}

fn gamma_delta_compatible(ctx: &SdProduct, gamma: &FMap, delta: &FMap) -> bool {
    let (h, k, act) = (ctx.h(), ctx.k(), ctx.action());
    h.elements().all(|x| {
        k.elements()
            .all(|y| k.mul(gamma.apply(act.act(y, x)), delta.apply(y)) == k.mul(delta.apply(y), gamma.apply(x)))
    })
}

fn alpha_beta_compatible(ctx: &SdProduct, alpha: &FMap, beta: &FMap, gamma: &FMap, delta: &FMap) -> bool {
    let (h, k, act) = (ctx.h(), ctx.k(), ctx.action());
    h.elements().all(|x| {
        k.elements().all(|y| {
            let xy = act.act(y, x);
            h.mul(alpha.apply(xy), act.act(gamma.apply(xy), beta.apply(y)))
                == h.mul(beta.apply(y), act.act(delta.apply(y), alpha.apply(x)))
        })
    })
}

/// Every matrix satisfying the four conditions, in loop order `γ, δ, β, α`
/// with each entry list sorted by image table.
pub fn enumerate_m(ctx: &Arc<SdProduct>, bound: usize) -> Result<Vec<EndoMatrix>, MatrixError> {
    let order = ctx.group().order();
    if order > bound {
        return Err(MatrixError::BoundExceeded { order, bound });
    }
    let (h, k) = (ctx.h(), ctx.k());
    let (h_gens, k_gens) = (h.generators(), k.generators());
    let gammas = enumerate_homs(h, k);
    let deltas = enumerate_homs(k, k);

    let mut betas_for: HashMap<usize, Vec<FMap>> = HashMap::new();
    let mut out = Vec::new();
    for gamma in &gammas {
        let mut alphas: Option<Vec<FMap>> = None;
        for (di, delta) in deltas.iter().enumerate() {
            if !gamma_delta_compatible(ctx, gamma, delta) {
                continue;
            }
            let betas = betas_for.entry(di).or_insert_with(|| crossed_homs(ctx, delta, &k_gens));
            let alphas = alphas.get_or_insert_with(|| twisted_homs(ctx, gamma, &h_gens));
            for beta in betas.iter() {
                for alpha in alphas.iter() {
                    if alpha_beta_compatible(ctx, alpha, beta, gamma, delta) {
                        out.push(EndoMatrix::from_parts(
                            ctx.clone(),
                            alpha.clone(),
                            beta.clone(),
                            gamma.clone(),
                            delta.clone(),
                        ));
                    }
                }
            }
        }
    }
    Ok(out)
}

fn all_maps(dom: &Arc<FiniteGroup>, cod: &Arc<FiniteGroup>, mut keep: impl FnMut(&FMap) -> bool) -> Vec<FMap> {
    let choices = vec![cod.elements().collect::<Vec<_>>(); dom.order()];
    let mut out = Vec::new();
    for_each_assignment(&choices, |img| {
        let map = FMap::from_parts(dom.clone(), cod.clone(), img.to_vec());
        if keep(&map) {
            out.push(map);
        }
    });
    out
}

/// Largest factor order accepted by [`enumerate_m_exhaustive`].
pub const EXHAUSTIVE_FACTOR_LIMIT: usize = 5;

/// Second enumeration strategy: scans the full map space of every entry
/// instead of searching over generator images. Only for small factors.
pub fn enumerate_m_exhaustive(ctx: &Arc<SdProduct>) -> Result<Vec<EndoMatrix>, MatrixError> {
    let (h, k) = (ctx.h(), ctx.k());
    let largest = h.order().max(k.order());
    if largest > EXHAUSTIVE_FACTOR_LIMIT {
        return Err(MatrixError::BoundExceeded {
            order: largest,
            bound: EXHAUSTIVE_FACTOR_LIMIT,
        });
    }
    let act = ctx.action();
    let gammas = all_maps(h, k, FMap::is_hom);
    let deltas = all_maps(k, k, FMap::is_hom);
    let mut out = Vec::new();
    for gamma in &gammas {
        let alphas = all_maps(h, h, |a| {
            h.elements().all(|x| {
                h.elements()
                    .all(|y| a.apply(h.mul(x, y)) == h.mul(a.apply(x), act.act(gamma.apply(x), a.apply(y))))
            })
        });
        for delta in &deltas {
            let betas = all_maps(k, h, |b| is_crossed_hom(b, delta, act).unwrap_or(false));
            for beta in &betas {
                for alpha in &alphas {
                    let m =
                        EndoMatrix::from_parts(ctx.clone(), alpha.clone(), beta.clone(), gamma.clone(), delta.clone());
                    if m.is_valid() {
                        out.push(m);
                    }
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::group::enumerate_homs;

    fn s3() -> Arc<SdProduct> {
        Arc::new(catalog::dihedral(3))
    }

    /// (α, β, 0, id) on the S3 model with β(1) = b.
    fn s3_matrix(ctx: &Arc<SdProduct>, alpha: [usize; 3], b: usize) -> EndoMatrix {
        EndoMatrix::from_images(ctx, alpha.to_vec(), vec![0, b], vec![0, 0, 0], vec![0, 1]).unwrap()
    }

    #[test]
    fn identity_passes_all_conditions() {
        let ctx = s3();
        let report = EndoMatrix::identity(&ctx).check_conditions();
        assert!(report.all_pass());
        assert_eq!(report.results.len(), 6);
    }

    #[test]
    fn squaring_with_any_crossed_beta_passes() {
        let ctx = s3();
        for b in 0..3 {
            assert!(s3_matrix(&ctx, [0, 2, 1], b).is_valid());
        }
    }

    #[test]
    fn delta_zero_breaks_condition_iv() {
        let ctx = s3();
        let m = EndoMatrix::from_images(&ctx, vec![0, 1, 2], vec![0, 0], vec![0, 0, 0], vec![0, 0]).unwrap();
        let report = m.check_conditions();
        assert_eq!(report.get(Condition::AlphaBeta), Some((1, 1)));
        assert!(report.get(Condition::AlphaTwisted).is_none());
        assert!(matches!(
            m.to_endo(),
            Err(MatrixError::ConditionsViolated {
                condition: Condition::AlphaBeta,
                ..
            })
        ));
    }

    #[test]
    fn shape_errors() {
        let ctx = s3();
        assert!(matches!(
            EndoMatrix::from_images(&ctx, vec![0, 1], vec![0, 0], vec![0, 0, 0], vec![0, 1]),
            Err(MatrixError::ShapeMismatch(_))
        ));
        let h = ctx.h().clone();
        assert!(matches!(
            EndoMatrix::new(
                ctx.clone(),
                FMap::identity(&h),
                FMap::identity(&h),
                FMap::zero(&h, ctx.k()),
                FMap::identity(ctx.k())
            ),
            Err(MatrixError::ShapeMismatch(_))
        ));
    }

    #[test]
    fn identity_is_neutral() {
        let ctx = s3();
        let id = EndoMatrix::identity(&ctx);
        for m in enumerate_m(&ctx, DEFAULT_BOUND).unwrap() {
            assert_eq!(id.mul(&m).unwrap(), m);
            assert_eq!(m.mul(&id).unwrap(), m);
        }
    }

    #[test]
    fn product_of_squaring_matrices() {
        let ctx = s3();
        let (b1, b2) = (1, 2);
        let m1 = s3_matrix(&ctx, [0, 2, 1], b1);
        let m2 = s3_matrix(&ctx, [0, 2, 1], b2);
        let prod = m1.mul(&m2).unwrap();
        assert!(prod.alpha().is_identity());
        assert!(prod.gamma().is_zero());
        assert!(prod.delta().is_identity());
        // b = α'β + β' = 2*b2 + b1 (mod 3)
        assert_eq!(prod.beta().image(), &[0, (2 * b2 + b1) % 3]);
        let composed: Vec<usize> = {
            let (t1, t2) = (m1.to_map(), m2.to_map());
            (0..6).map(|g| t1.apply(t2.apply(g))).collect()
        };
        assert_eq!(prod.to_map().image(), composed.as_slice());
    }

    #[test]
    fn zero_matrix_absorbs() {
        let ctx = s3();
        let zero = EndoMatrix::zero(&ctx);
        assert!(zero.is_valid());
        for m in enumerate_m(&ctx, DEFAULT_BOUND).unwrap() {
            assert_eq!(zero.mul(&m).unwrap(), zero);
        }
    }

    #[test]
    fn context_mismatch() {
        let a = EndoMatrix::identity(&s3());
        let b = EndoMatrix::identity(&Arc::new(catalog::dihedral(4)));
        assert_eq!(a.mul(&b).unwrap_err(), MatrixError::ContextMismatch);
    }

    #[test]
    fn matrix_to_endo_examples() {
        let ctx = s3();
        assert!(EndoMatrix::identity(&ctx).to_endo().unwrap().map().is_identity());
        let theta = s3_matrix(&ctx, [0, 2, 1], 0).to_endo().unwrap();
        for g in 0..6 {
            let (h, k) = ctx.decode(g);
            assert_eq!(theta.map().apply(g), ctx.encode(2 * h % 3, k));
        }
        assert!(theta.map().is_hom());

        // direct product: twist vanishes
        let dp = Arc::new(catalog::direct(2, 4));
        let m = EndoMatrix::from_images(&dp, vec![0, 1], vec![0, 1, 0, 1], vec![0, 2], vec![0, 3, 2, 1]).unwrap();
        let t = m.to_endo().unwrap();
        for g in 0..8 {
            let (h, k) = dp.decode(g);
            let expect = dp.encode(
                (m.alpha().apply(h) + m.beta().apply(k)) % 2,
                (m.gamma().apply(h) + m.delta().apply(k)) % 4,
            );
            assert_eq!(t.map().apply(g), expect);
        }
    }

    #[test]
    fn endo_to_matrix_examples() {
        let ctx = s3();
        let id = Endo::identity(ctx.group());
        assert!(EndoMatrix::from_endo(&ctx, &id).unwrap().is_identity());
        // conjugation by the reflection (1,1)
        let g = ctx.group();
        let s = ctx.encode(1, 1);
        let conj = FMap::new(g.clone(), g.clone(), g.elements().map(|x| g.conj(s, x)).collect()).unwrap();
        let m = EndoMatrix::from_endo(&ctx, &Endo::new(conj.clone()).unwrap()).unwrap();
        assert!(m.gamma().is_zero());
        assert!(m.is_valid());
        assert_eq!(m.to_map(), conj);
        let not_hom = FMap::constant(g, g, 1);
        assert_eq!(Endo::new(not_hom).unwrap_err(), MatrixError::NotHomomorphism);
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_m(&s3(), DEFAULT_BOUND).unwrap().len(), 10);
        assert_eq!(
            enumerate_m(&Arc::new(catalog::trivial()), DEFAULT_BOUND).unwrap().len(),
            1
        );
        assert_eq!(
            enumerate_m(&Arc::new(catalog::klein()), DEFAULT_BOUND).unwrap().len(),
            16
        );
    }

    #[test]
    fn klein_count_is_gl2_matrix_count() {
        // End(Z2 x Z2) = all 2x2 matrices over F2, and each entry ranges over Hom(Z2, Z2)
        let z2 = Arc::new(FiniteGroup::cyclic(2));
        let per_entry = enumerate_homs(&z2, &z2).len();
        assert_eq!(per_entry.pow(4), 16);
    }

    #[test]
    fn enumeration_is_sorted_by_loop_order_and_valid() {
        let ctx = Arc::new(catalog::dihedral(4));
        let all = enumerate_m(&ctx, DEFAULT_BOUND).unwrap();
        assert!(all.iter().all(EndoMatrix::is_valid));
        let mut sorted = all.clone();
        sorted.sort_by(|x, y| {
            (x.gamma(), x.delta(), x.beta(), x.alpha()).cmp(&(y.gamma(), y.delta(), y.beta(), y.alpha()))
        });
        assert_eq!(all, sorted);
    }

    #[test]
    fn bound_is_enforced() {
        let err = enumerate_m(&Arc::new(catalog::dihedral(5)), 8).unwrap_err();
        assert_eq!(err, MatrixError::BoundExceeded { order: 10, bound: 8 });
    }

    #[test]
    fn exhaustive_strategy_agrees() {
        for ctx in [
            s3(),
            Arc::new(catalog::klein()),
            Arc::new(catalog::dihedral(4)),
            Arc::new(catalog::direct(2, 4)),
        ] {
            let mut fast = enumerate_m(&ctx, DEFAULT_BOUND).unwrap();
            let mut slow = enumerate_m_exhaustive(&ctx).unwrap();
            fast.sort();
            slow.sort();
            assert_eq!(fast, slow, "{}", ctx.name());
        }
    }

    #[test]
    fn automorphism_matrices() {
        let ctx = s3();
        assert!(EndoMatrix::identity(&ctx).is_automorphism().unwrap());
        assert!(!EndoMatrix::zero(&ctx).is_automorphism().unwrap());
        let all = enumerate_m(&ctx, DEFAULT_BOUND).unwrap();
        let autos = all.iter().filter(|m| m.is_automorphism().unwrap()).count();
        assert_eq!(autos, 6);
        for m in &all {
            assert_eq!(m.has_unique_preimages(), m.is_automorphism().unwrap());
        }
    }
}
