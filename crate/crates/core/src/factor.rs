//! The distinguished subsets `A`, `B`, `C`, `D` of automorphism matrices and
//! the factorization of an automorphism matrix as a product `a·b·c·d`.
//!
//! ```text
//! A: (α 0; 0 1)  α ∈ Aut(H), α(h^k) = α(h)^k
//! B: (1 β; 0 1)  β ∈ CHom(K, Z(H))
//! C: (1 0; γ 1)  γ ∈ Hom(H, K), γ(h) ∈ C_K(H), γ(h^k) = γ(h)^k
//! D: (1 0; 0 δ)  δ ∈ Aut(K), k⁻¹δ(k) ∈ C_K(H)
//! ```
//!
//! `C_K(H)` is the kernel of the action.

use std::sync::Arc;

use thiserror::Error;

use crate::group::center;
use crate::maps::{is_crossed_hom, FMap, MapError};
use crate::matrix::{EndoMatrix, MatrixError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FactorError {
    #[error("matrix is not an automorphism matrix")]
    NotInCalA,
    #[error("expected identity diagonal entries")]
    NotUnitDiagonal,
    #[error("alpha or delta is not bijective")]
    AlphaOrDeltaNotInvertible,
    #[error("middle factor (1 a⁻¹βd⁻¹; γ 1) is not an automorphism matrix")]
    MiddleNotInCalA,
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Map(#[from] MapError),
}

/// Why a matrix is not in one of the four subsets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub what: &'static str,
    pub at: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetTag {
    pub in_a: bool,
    pub in_b: bool,
    pub in_c: bool,
    pub in_d: bool,
    /// First failure for A, B, C, D in that order.
    pub witnesses: [Option<Violation>; 4],
}

fn fail(what: &'static str, at: Vec<usize>) -> Option<Violation> {
    Some(Violation { what, at })
}

fn first_not_identity(map: &FMap, what: &'static str) -> Option<Violation> {
    map.image()
        .iter()
        .enumerate()
        .find(|&(i, &v)| i != v)
        .and_then(|(i, _)| fail(what, vec![i]))
}

fn first_not_zero(map: &FMap, what: &'static str) -> Option<Violation> {
    let e = map.cod().identity();
    map.image()
        .iter()
        .position(|&v| v != e)
        .and_then(|i| fail(what, vec![i]))
}

fn first_non_hom_pair(map: &FMap, what: &'static str) -> Option<Violation> {
    let (d, c) = (map.dom(), map.cod());
    for x in d.elements() {
        for y in d.elements() {
            if map.apply(d.mul(x, y)) != c.mul(map.apply(x), map.apply(y)) {
                return fail(what, vec![x, y]);
            }
        }
    }
    None
}

fn membership_a(m: &EndoMatrix) -> Option<Violation> {
    let act = m.ctx().action();
    let (h, k) = (act.h(), act.k());
    let alpha = m.alpha();
    first_not_zero(m.beta(), "beta is not trivial")
        .or_else(|| first_not_zero(m.gamma(), "gamma is not trivial"))
        .or_else(|| first_not_identity(m.delta(), "delta is not the identity"))
        .or_else(|| {
            (!alpha.is_bijective()).then(|| Violation {
                what: "alpha is not bijective",
                at: vec![],
            })
        })
        .or_else(|| first_non_hom_pair(alpha, "alpha is not a homomorphism"))
        .or_else(|| {
            h.elements().find_map(|x| {
                k.elements()
                    .find(|&y| alpha.apply(act.act(y, x)) != act.act(y, alpha.apply(x)))
                    .and_then(|y| fail("alpha does not commute with the action", vec![x, y]))
            })
        })
}

fn membership_b(m: &EndoMatrix) -> Option<Violation> {
    let act = m.ctx().action();
    let k = act.k();
    let beta = m.beta();
    let z = center(act.h());
    first_not_identity(m.alpha(), "alpha is not the identity")
        .or_else(|| first_not_zero(m.gamma(), "gamma is not trivial"))
        .or_else(|| first_not_identity(m.delta(), "delta is not the identity"))
        .or_else(|| {
            let id = FMap::identity(k);
            let crossed = is_crossed_hom(beta, &id, act).unwrap_or(false);
            (!crossed).then(|| {
                let pair = k
                    .elements()
                    .find_map(|x| {
                        k.elements()
                            .find(|&y| beta.apply(k.mul(x, y)) != act.h().mul(beta.apply(x), act.act(x, beta.apply(y))))
                            .map(|y| vec![x, y])
                    })
                    .unwrap_or_default();
                Violation {
                    what: "beta is not a crossed homomorphism",
                    at: pair,
                }
            })
        })
        .or_else(|| {
            k.elements()
                .find(|&y| !z.contains(beta.apply(y)))
                .and_then(|y| fail("beta leaves the center of H", vec![y]))
        })
}

fn membership_c(m: &EndoMatrix) -> Option<Violation> {
    let act = m.ctx().action();
    let (h, k) = (act.h(), act.k());
    let gamma = m.gamma();
    first_not_identity(m.alpha(), "alpha is not the identity")
        .or_else(|| first_not_zero(m.beta(), "beta is not trivial"))
        .or_else(|| first_not_identity(m.delta(), "delta is not the identity"))
        .or_else(|| first_non_hom_pair(gamma, "gamma is not a homomorphism"))
        .or_else(|| {
            h.elements()
                .find(|&x| !act.acts_trivially(gamma.apply(x)))
                .and_then(|x| fail("gamma leaves the kernel of the action", vec![x]))
        })
        .or_else(|| {
            h.elements().find_map(|x| {
                k.elements()
                    .find(|&y| gamma.apply(act.act(y, x)) != k.conj(y, gamma.apply(x)))
                    .and_then(|y| fail("gamma is not equivariant", vec![x, y]))
            })
        })
}

fn membership_d(m: &EndoMatrix) -> Option<Violation> {
    let act = m.ctx().action();
    let k = act.k();
    let delta = m.delta();
    first_not_identity(m.alpha(), "alpha is not the identity")
        .or_else(|| first_not_zero(m.beta(), "beta is not trivial"))
        .or_else(|| first_not_zero(m.gamma(), "gamma is not trivial"))
        .or_else(|| {
            (!delta.is_bijective()).then(|| Violation {
                what: "delta is not bijective",
                at: vec![],
            })
        })
        .or_else(|| first_non_hom_pair(delta, "delta is not a homomorphism"))
        .or_else(|| {
            k.elements()
                .find(|&y| !act.acts_trivially(k.mul(k.inv(y), delta.apply(y))))
                .and_then(|y| fail("k⁻¹δ(k) leaves the kernel of the action", vec![y]))
        })
}

/// Membership of a valid matrix in each of `A`, `B`, `C`, `D`.
pub fn classify(m: &EndoMatrix) -> Result<SubsetTag, FactorError> {
    m.check_conditions().into_result()?;
    Ok(classify_unchecked(m))
}

pub(crate) fn classify_unchecked(m: &EndoMatrix) -> SubsetTag {
    let witnesses = [membership_a(m), membership_b(m), membership_c(m), membership_d(m)];
    SubsetTag {
        in_a: witnesses[0].is_none(),
        in_b: witnesses[1].is_none(),
        in_c: witnesses[2].is_none(),
        in_d: witnesses[3].is_none(),
        witnesses,
    }
}

fn unit_diagonal_core(m: &EndoMatrix) -> Result<FMap, FactorError> {
    if !m.alpha().is_identity() || !m.delta().is_identity() {
        return Err(FactorError::NotUnitDiagonal);
    }
    if !m.is_automorphism()? {
        return Err(FactorError::NotInCalA);
    }
    // 1 - βγ
    Ok(m.alpha().sub(&m.beta().compose(m.gamma())?)?)
}

/// For an automorphism matrix `(1 β; γ 1)`, the matrix `(1 - βγ  0; 0 1)`,
/// where `(1 - βγ)(h) = h (β(γ(h)))⁻¹`.
pub fn unit_diagonal_a_part(m: &EndoMatrix) -> Result<EndoMatrix, FactorError> {
    let one_minus = unit_diagonal_core(m)?;
    let ctx = m.ctx();
    let (h, k) = (ctx.h(), ctx.k());
    Ok(EndoMatrix::new(
        ctx.clone(),
        one_minus,
        FMap::zero(k, h),
        FMap::zero(h, k),
        FMap::identity(k),
    )?)
}

/// For an automorphism matrix `(1 β; γ 1)`, the matrix `(1  (1 - βγ)⁻¹β; 0 1)`.
pub fn unit_diagonal_b_part(m: &EndoMatrix) -> Result<EndoMatrix, FactorError> {
    let one_minus = unit_diagonal_core(m)?;
    let beta = one_minus.inverse()?.compose(m.beta())?;
    let ctx = m.ctx();
    let (h, k) = (ctx.h(), ctx.k());
    Ok(EndoMatrix::new(
        ctx.clone(),
        FMap::identity(h),
        beta,
        FMap::zero(h, k),
        FMap::identity(k),
    )?)
}

/// Factors of an automorphism matrix, one from each of `A`, `B`, `C`, `D`.
#[derive(Debug, Clone)]
pub struct AbcdFactors {
    pub a: EndoMatrix,
    pub b: EndoMatrix,
    pub c: EndoMatrix,
    pub d: EndoMatrix,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorCheck {
    pub a_in_a: bool,
    pub b_in_b: bool,
    pub c_in_c: bool,
    pub d_in_d: bool,
    pub reassembles: bool,
}

impl FactorCheck {
    pub fn verified(&self) -> bool {
        self.a_in_a && self.b_in_b && self.c_in_c && self.d_in_d && self.reassembles
    }
}

impl AbcdFactors {
    pub fn product(&self) -> Result<EndoMatrix, MatrixError> {
        self.a.mul(&self.b.mul(&self.c.mul(&self.d)?)?)
    }

    pub fn check(&self, original: &EndoMatrix) -> FactorCheck {
        let member = |m: &EndoMatrix, pick: fn(&SubsetTag) -> bool| m.is_valid() && pick(&classify_unchecked(m));
        FactorCheck {
            a_in_a: member(&self.a, |t| t.in_a),
            b_in_b: member(&self.b, |t| t.in_b),
            c_in_c: member(&self.c, |t| t.in_c),
            d_in_d: member(&self.d, |t| t.in_d),
            reassembles: self.product().map(|p| &p == original).unwrap_or(false),
        }
    }
}

/// Splits `(α β; γ δ)` as
///
/// ```text
/// (α 0; 0 1) · (1 α⁻¹βδ⁻¹; γ 1) · (1 0; 0 δ)
/// ```
///
/// and the middle factor `(1 x; γ 1)` further as
/// `(1 - xγ 0; 0 1) · (1 (1 - xγ)⁻¹x; 0 1) · (1 0; γ 1)`. The two leading
/// diagonal factors are merged into `a`. Memberships are not asserted; use
/// [`AbcdFactors::check`].
pub fn factor_abcd(m: &EndoMatrix) -> Result<AbcdFactors, FactorError> {
    if !m.is_automorphism()? {
        return Err(FactorError::NotInCalA);
    }
    let alpha_inv = m
        .alpha()
        .inverse()
        .map_err(|_| FactorError::AlphaOrDeltaNotInvertible)?;
    let delta_inv = m
        .delta()
        .inverse()
        .map_err(|_| FactorError::AlphaOrDeltaNotInvertible)?;
    let ctx: &Arc<_> = m.ctx();
    let (h, k) = (ctx.h(), ctx.k());
    let outer_a = EndoMatrix::new(
        ctx.clone(),
        m.alpha().clone(),
        FMap::zero(k, h),
        FMap::zero(h, k),
        FMap::identity(k),
    )?;
    let d = EndoMatrix::new(
        ctx.clone(),
        FMap::identity(h),
        FMap::zero(k, h),
        FMap::zero(h, k),
        m.delta().clone(),
    )?;
    let x = alpha_inv.compose(&m.beta().compose(&delta_inv)?)?;
    let middle = EndoMatrix::new(ctx.clone(), FMap::identity(h), x, m.gamma().clone(), FMap::identity(k))?;
    if !middle.is_valid() || !middle.to_map().is_bijective() {
        return Err(FactorError::MiddleNotInCalA);
    }
    let inner_a = unit_diagonal_a_part(&middle)?;
    let b = unit_diagonal_b_part(&middle)?;
    let c = EndoMatrix::new(
        ctx.clone(),
        FMap::identity(h),
        FMap::zero(k, h),
        m.gamma().clone(),
        FMap::identity(k),
    )?;
    let a = outer_a.mul(&inner_a)?;
    Ok(AbcdFactors { a, b, c, d })
}
