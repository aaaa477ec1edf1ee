//! Determinants of endomorphism matrices and the inverses built from them.
//!
//! For `θ = (α β; γ δ)`:
//!
//! * `det_K(θ) = -γα⁻¹β + δ`, defined when `α` is a bijection,
//! * `det_H(θ) = α - βδ⁻¹γ`, defined when `δ` is a bijection.
//!
//! "Invertible" for a determinant always means bijective as a set map.
//! Neither determinant is a homomorphism in general, so homomorphy is
//! reported, never assumed.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::maps::{FMap, MapError};
use crate::matrix::{EndoMatrix, MatrixError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DetError {
    #[error("alpha is not a bijection, det_K is undefined")]
    AlphaNotInvertible,
    #[error("delta is not a bijection, det_H is undefined")]
    DeltaNotInvertible,
    #[error("det_K is not a bijection")]
    DetKNotInvertible,
    #[error("det_H is not a bijection")]
    DetHNotInvertible,
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    H,
    K,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DetResult {
    pub value: FMap,
    pub side: Side,
    pub invertible: bool,
    pub is_hom: bool,
}

impl DetResult {
    fn of(value: FMap, side: Side) -> Self {
        let invertible = value.is_bijective();
        let is_hom = value.is_hom();
        DetResult {
            value,
            side,
            invertible,
            is_hom,
        }
    }

    pub fn inverse(&self) -> Option<FMap> {
        self.value.inverse().ok()
    }
}

/// `-γα⁻¹β + δ`, i.e. `k -> (γ(α⁻¹(β(k))))⁻¹ δ(k)`.
pub fn det_k(m: &EndoMatrix) -> Result<DetResult, DetError> {
    let alpha_inv = m.alpha().inverse().map_err(|_| DetError::AlphaNotInvertible)?;
    let value = m.gamma().compose(&alpha_inv.compose(m.beta())?)?.neg().add(m.delta())?;
    Ok(DetResult::of(value, Side::K))
}

/// `α - βδ⁻¹γ`, i.e. `h -> α(h) (β(δ⁻¹(γ(h))))⁻¹`.
pub fn det_h(m: &EndoMatrix) -> Result<DetResult, DetError> {
    let delta_inv = m.delta().inverse().map_err(|_| DetError::DeltaNotInvertible)?;
    let value = m.alpha().sub(&m.beta().compose(&delta_inv.compose(m.gamma())?)?)?;
    Ok(DetResult::of(value, Side::H))
}

/// Inverse from the `K`-determinant:
///
/// ```text
/// (α⁻¹ - α⁻¹βΔ⁻¹(-γα⁻¹)   -α⁻¹βΔ⁻¹;
///  Δ⁻¹(-γα⁻¹)             Δ⁻¹)          with Δ = det_K(θ)
/// ```
pub fn invert_via_det_k(m: &EndoMatrix) -> Result<EndoMatrix, DetError> {
    let alpha_inv = m.alpha().inverse().map_err(|_| DetError::AlphaNotInvertible)?;
    let dk = det_k(m)?;
    let dk_inv = dk.value.inverse().map_err(|_| DetError::DetKNotInvertible)?;
    let neg_gamma_alpha_inv = m.gamma().compose(&alpha_inv)?.neg();
    let gamma = dk_inv.compose(&neg_gamma_alpha_inv)?;
    let alpha_inv_beta_dk_inv = alpha_inv.compose(&m.beta().compose(&dk_inv)?)?;
    let alpha = alpha_inv.sub(&alpha_inv_beta_dk_inv.compose(&neg_gamma_alpha_inv)?)?;
    let beta = alpha_inv_beta_dk_inv.neg();
    Ok(EndoMatrix::new(m.ctx().clone(), alpha, beta, gamma, dk_inv)?)
}

struct HSide {
    delta_inv: FMap,
    dh_inv: FMap,
    /// `-βδ⁻¹`
    neg_beta_delta_inv: FMap,
    /// `δ⁻¹γΔ_H⁻¹`
    delta_inv_gamma_dh_inv: FMap,
}

fn h_side(m: &EndoMatrix) -> Result<HSide, DetError> {
    let delta_inv = m.delta().inverse().map_err(|_| DetError::DeltaNotInvertible)?;
    let dh = det_h(m)?;
    let dh_inv = dh.value.inverse().map_err(|_| DetError::DetHNotInvertible)?;
    let neg_beta_delta_inv = m.beta().compose(&delta_inv)?.neg();
    let delta_inv_gamma_dh_inv = delta_inv.compose(&m.gamma().compose(&dh_inv)?)?;
    Ok(HSide {
        delta_inv,
        dh_inv,
        neg_beta_delta_inv,
        delta_inv_gamma_dh_inv,
    })
}

/// `-δ⁻¹γΔ_H⁻¹(-βδ⁻¹) + δ⁻¹`, the inverse of `det_K(θ)` expressed through
/// `det_H(θ)`. This is the lower-right entry of `θ⁻¹`.
pub fn det_k_inverse_via_det_h(m: &EndoMatrix) -> Result<FMap, DetError> {
    let s = h_side(m)?;
    Ok(s.delta_inv_gamma_dh_inv
        .compose(&s.neg_beta_delta_inv)?
        .neg()
        .add(&s.delta_inv)?)
}

/// `δ⁻¹γΔ_H⁻¹(-βδ⁻¹) + δ⁻¹`: the same expression with the correction term
/// not inverted. It coincides with [`det_k_inverse_via_det_h`] only when
/// every value `δ⁻¹γΔ_H⁻¹(-βδ⁻¹)(k)` has order at most 2. Exposed so the
/// verification harness can report where the two differ.
pub fn det_k_inverse_via_det_h_uninverted(m: &EndoMatrix) -> Result<FMap, DetError> {
    let s = h_side(m)?;
    Ok(s.delta_inv_gamma_dh_inv
        .compose(&s.neg_beta_delta_inv)?
        .add(&s.delta_inv)?)
}

/// Inverse from the `H`-determinant:
///
/// ```text
/// (Δ⁻¹          Δ⁻¹(-βδ⁻¹);
///  -δ⁻¹γΔ⁻¹     -δ⁻¹γΔ⁻¹(-βδ⁻¹) + δ⁻¹)     with Δ = det_H(θ)
/// ```
pub fn invert_via_det_h(m: &EndoMatrix) -> Result<EndoMatrix, DetError> {
    let s = h_side(m)?;
    let beta = s.dh_inv.compose(&s.neg_beta_delta_inv)?;
    let gamma = s.delta_inv_gamma_dh_inv.neg();
    let delta = s
        .delta_inv_gamma_dh_inv
        .compose(&s.neg_beta_delta_inv)?
        .neg()
        .add(&s.delta_inv)?;
    Ok(EndoMatrix::new(m.ctx().clone(), s.dh_inv, beta, gamma, delta)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    DetK,
    DetH,
    Direct,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::DetK => "detK",
            Method::DetH => "detH",
            Method::Direct => "direct",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Invertibility {
    pub invertible: bool,
    pub method: Method,
}

/// Decides invertibility of a valid matrix by the first applicable
/// criterion: bijectivity of `det_K` when `α` is bijective, of `det_H` when
/// `δ` is bijective, and otherwise of the endomorphism itself.
pub fn is_invertible(m: &EndoMatrix) -> Invertibility {
    if let Ok(dk) = det_k(m) {
        return Invertibility {
            invertible: dk.invertible,
            method: Method::DetK,
        };
    }
    if let Ok(dh) = det_h(m) {
        return Invertibility {
            invertible: dh.invertible,
            method: Method::DetH,
        };
    }
    Invertibility {
        invertible: m.to_map().is_bijective(),
        method: Method::Direct,
    }
}

/// Both determinants of an automorphism matrix together with their inverses
/// computed from the opposite side.
#[derive(Debug, Clone)]
pub struct Duality {
    pub det_h: DetResult,
    pub det_k: DetResult,
    /// `α⁻¹ - α⁻¹βΔ_K⁻¹(-γα⁻¹)`
    pub det_h_inverse: FMap,
    /// `-δ⁻¹γΔ_H⁻¹(-βδ⁻¹) + δ⁻¹`
    pub det_k_inverse: FMap,
}

impl Duality {
    /// Each formula composes with its determinant to the identity on both sides.
    pub fn is_consistent(&self) -> bool {
        let two_sided = |f: &FMap, g: &FMap| {
            f.compose(g).map(|x| x.is_identity()).unwrap_or(false)
                && g.compose(f).map(|x| x.is_identity()).unwrap_or(false)
        };
        two_sided(&self.det_h_inverse, &self.det_h.value) && two_sided(&self.det_k_inverse, &self.det_k.value)
    }
}

pub fn det_duality(m: &EndoMatrix) -> Result<Duality, DetError> {
    if !m.is_automorphism()? {
        return Err(DetError::PreconditionFailed("matrix is not an automorphism".into()));
    }
    let alpha_inv = m
        .alpha()
        .inverse()
        .map_err(|_| DetError::PreconditionFailed("alpha is not bijective".into()))?;
    if !m.delta().is_bijective() {
        return Err(DetError::PreconditionFailed("delta is not bijective".into()));
    }
    let dh = det_h(m)?;
    let dk = det_k(m)?;
    match (dh.invertible, dk.invertible) {
        (true, true) => {}
        (false, false) => {
            return Err(DetError::PreconditionFailed(
                "neither det_H nor det_K is bijective".into(),
            ))
        }
        (false, true) => return Err(DetError::PreconditionFailed("det_H is not bijective".into())),
        (true, false) => return Err(DetError::PreconditionFailed("det_K is not bijective".into())),
    }
    let dk_inv = dk.value.inverse()?;
    let neg_gamma_alpha_inv = m.gamma().compose(&alpha_inv)?.neg();
    let det_h_inverse =
        alpha_inv.sub(&alpha_inv.compose(&m.beta().compose(&dk_inv.compose(&neg_gamma_alpha_inv)?)?)?)?;
    let det_k_inverse = det_k_inverse_via_det_h(m)?;
    Ok(Duality {
        det_h: dh,
        det_k: dk,
        det_h_inverse,
        det_k_inverse,
    })
}

/// ```text
/// θ⁻¹ = (Δ_H⁻¹         -α⁻¹βΔ_K⁻¹;
///        -δ⁻¹γΔ_H⁻¹    Δ_K⁻¹)
/// ```
/// for an automorphism matrix with `α`, `δ` and `det_H` bijective.
pub fn invert_combined(m: &EndoMatrix) -> Result<EndoMatrix, DetError> {
    if !m.is_automorphism()? {
        return Err(DetError::PreconditionFailed("matrix is not an automorphism".into()));
    }
    let alpha_inv = m
        .alpha()
        .inverse()
        .map_err(|_| DetError::PreconditionFailed("alpha is not bijective".into()))?;
    let delta_inv = m
        .delta()
        .inverse()
        .map_err(|_| DetError::PreconditionFailed("delta is not bijective".into()))?;
    let dh_inv = det_h(m)?
        .inverse()
        .ok_or_else(|| DetError::PreconditionFailed("det_H is not bijective".into()))?;
    let dk_inv = det_k(m)?
        .inverse()
        .ok_or_else(|| DetError::PreconditionFailed("det_K is not bijective".into()))?;
    let beta = alpha_inv.compose(&m.beta().compose(&dk_inv)?)?.neg();
    let gamma = delta_inv.compose(&m.gamma().compose(&dh_inv)?)?.neg();
    Ok(EndoMatrix::new(m.ctx().clone(), dh_inv, beta, gamma, dk_inv)?)
}
