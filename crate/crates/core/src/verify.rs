//! Exhaustive verification of the matrix calculus on one instance.
//!
//! Every check runs over all of `M` (or the subset where its precondition
//! holds) in the sorted order of [`enumerate_m`], so witnesses and reports
//! are deterministic.

use std::collections::HashMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::action::SdProduct;
use crate::det::{
    det_duality, det_h, det_k, det_k_inverse_via_det_h, det_k_inverse_via_det_h_uninverted, invert_combined,
    invert_via_det_h, invert_via_det_k,
};
use crate::factor::{
    classify_unchecked, factor_abcd, unit_diagonal_a_part, unit_diagonal_b_part, FactorError, SubsetTag,
};
use crate::group::center;
use crate::io::MatrixJson;
use crate::maps::{is_crossed_hom, FMap};
use crate::matrix::{enumerate_m, Endo, EndoMatrix, MatrixError};
use crate::oracle::{compose_endo_direct, enumerate_end_direct, invert_endo_direct, EndCensus, OracleError};

/// Associativity is checked on all triples only up to this many matrices.
pub const ASSOCIATIVITY_LIMIT: usize = 60;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("|G| = {order} exceeds the bound {bound}")]
    BoundExceeded { order: usize, bound: usize },
    #[error("unknown check `{0}`")]
    UnknownCheck(String),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckName {
    MatrixIsomorphism,
    MonoidLaws,
    MonoidAssociativity,
    DetKCriterion,
    DetHCriterion,
    DetKInverse,
    DetHInverse,
    DeterminantDuality,
    CombinedInverse,
    CombinedInverseDetH,
    UnitDiagonalSplit,
    AbcdFactorization,
    SubsetStructure,
    AutomorphismCharacterization,
}

impl CheckName {
    pub const ALL: [CheckName; 14] = [
        CheckName::MatrixIsomorphism,
        CheckName::MonoidLaws,
        CheckName::MonoidAssociativity,
        CheckName::DetKCriterion,
        CheckName::DetHCriterion,
        CheckName::DetKInverse,
        CheckName::DetHInverse,
        CheckName::DeterminantDuality,
        CheckName::CombinedInverse,
        CheckName::CombinedInverseDetH,
        CheckName::UnitDiagonalSplit,
        CheckName::AbcdFactorization,
        CheckName::SubsetStructure,
        CheckName::AutomorphismCharacterization,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CheckName::MatrixIsomorphism => "matrix_isomorphism",
            CheckName::MonoidLaws => "monoid_laws",
            CheckName::MonoidAssociativity => "monoid_associativity",
            CheckName::DetKCriterion => "det_k_criterion",
            CheckName::DetHCriterion => "det_h_criterion",
            CheckName::DetKInverse => "det_k_inverse",
            CheckName::DetHInverse => "det_h_inverse",
            CheckName::DeterminantDuality => "determinant_duality",
            CheckName::CombinedInverse => "combined_inverse",
            CheckName::CombinedInverseDetH => "combined_inverse_det_h",
            CheckName::UnitDiagonalSplit => "unit_diagonal_split",
            CheckName::AbcdFactorization => "abcd_factorization",
            CheckName::SubsetStructure => "subset_structure",
            CheckName::AutomorphismCharacterization => "automorphism_characterization",
        }
    }
}

impl fmt::Display for CheckName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CheckName {
    type Err = VerifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CheckName::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| VerifyError::UnknownCheck(s.to_string()))
    }
}

/// `all` or a comma-separated list of check names.
pub fn parse_selection(s: &str) -> Result<Vec<CheckName>, VerifyError> {
    if s.trim() == "all" {
        return Ok(CheckName::ALL.to_vec());
    }
    let mut out: Vec<CheckName> = s.split(',').map(|x| x.trim().parse()).collect::<Result<_, _>>()?;
    out.sort();
    out.dedup();
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub matrices: Vec<MatrixJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Status {
    Pass { cases: usize },
    Fail { detail: String, witness: Witness },
    Skipped { reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: CheckName,
    #[serde(flatten)]
    pub status: Status,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Finding {
    pub name: &'static str,
    pub value: Value,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub end: usize,
    pub aut: usize,
    pub matrices: usize,
    pub automorphism_matrices: usize,
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
    pub factorable: usize,
    pub non_bijective_diagonal: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub instance: String,
    pub h_order: usize,
    pub k_order: usize,
    pub g_order: usize,
    pub counts: Counts,
    pub checks: Vec<CheckResult>,
    pub findings: Vec<Finding>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u128>,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        !self.checks.iter().any(|c| matches!(c.status, Status::Fail { .. }))
    }

    pub fn check(&self, name: CheckName) -> Option<&Status> {
        self.checks.iter().find(|c| c.name == name).map(|c| &c.status)
    }

    pub fn finding(&self, name: &str) -> Option<&Value> {
        self.findings.iter().find(|f| f.name == name).map(|f| &f.value)
    }

    pub fn to_text(&self) -> String {
        let c = &self.counts;
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{} (|H| = {}, |K| = {}, |G| = {})",
            self.instance, self.h_order, self.k_order, self.g_order
        );
        let _ = writeln!(
            s,
            "  |End| = {}  |Aut| = {}  |M| = {}  |A| = {}  |B| = {}  |C| = {}  |D| = {}  factorable = {}",
            c.end, c.aut, c.matrices, c.a, c.b, c.c, c.d, c.factorable
        );
        for check in &self.checks {
            match &check.status {
                Status::Pass { cases } => {
                    let _ = writeln!(s, "  PASS {} ({cases} cases)", check.name);
                }
                Status::Fail { detail, witness } => {
                    let _ = writeln!(
                        s,
                        "  FAIL {}: {detail}; witness {}",
                        check.name,
                        serde_json::to_string(witness).unwrap_or_default()
                    );
                }
                Status::Skipped { reason } => {
                    let _ = writeln!(s, "  SKIP {}: {reason}", check.name);
                }
            }
        }
        for f in &self.findings {
            let _ = writeln!(s, "  note {}: {}", f.name, f.value);
        }
        if let Some(ms) = self.elapsed_ms {
            let _ = writeln!(s, "  elapsed {ms} ms");
        }
        s
    }
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub bound: usize,
    pub checks: Vec<CheckName>,
    pub timing: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            bound: crate::matrix::DEFAULT_BOUND,
            checks: CheckName::ALL.to_vec(),
            timing: false,
        }
    }
}

struct Failure {
    detail: String,
    witness: Witness,
}

impl Failure {
    fn new(detail: impl Into<String>, matrices: &[&EndoMatrix]) -> Self {
        Failure {
            detail: detail.into(),
            witness: Witness {
                matrices: matrices.iter().map(|m| MatrixJson::of(m)).collect(),
            },
        }
    }
}

type Outcome = Result<usize, Failure>;

fn err_at<'a, E: fmt::Display>(what: &'a str, ms: &'a [&'a EndoMatrix]) -> impl FnOnce(E) -> Failure + 'a {
    move |e| Failure::new(format!("{what}: {e}"), ms)
}

fn finish(outcome: Outcome, skip_reason: &str) -> Status {
    match outcome {
        Ok(0) => Status::Skipped {
            reason: skip_reason.to_string(),
        },
        Ok(cases) => Status::Pass { cases },
        Err(f) => Status::Fail {
            detail: f.detail,
            witness: f.witness,
        },
    }
}

struct Run {
    ctx: Arc<SdProduct>,
    ms: Vec<EndoMatrix>,
    index: HashMap<EndoMatrix, usize>,
    endos: Vec<Endo>,
    census: EndCensus,
    bijective: Vec<bool>,
    tags: Vec<SubsetTag>,
}

impl Run {
    fn new(ctx: Arc<SdProduct>, bound: usize) -> Result<Self, VerifyError> {
        let order = ctx.group().order();
        if order > bound {
            return Err(VerifyError::BoundExceeded { order, bound });
        }
        let ms = enumerate_m(&ctx, bound)?;
        let census = enumerate_end_direct(ctx.group(), bound)?;
        let endos = ms.iter().map(EndoMatrix::to_endo).collect::<Result<Vec<_>, _>>()?;
        let bijective = endos.iter().map(Endo::is_bijective).collect();
        let tags = ms.iter().map(classify_unchecked).collect();
        let index = ms.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        Ok(Run {
            ctx,
            ms,
            index,
            endos,
            census,
            bijective,
            tags,
        })
    }

    fn autos(&self) -> impl Iterator<Item = &EndoMatrix> {
        self.ms.iter().zip(&self.bijective).filter(|(_, &b)| b).map(|(m, _)| m)
    }

    fn both_bijective(&self) -> impl Iterator<Item = &EndoMatrix> {
        self.autos()
            .filter(|m| m.alpha().is_bijective() && m.delta().is_bijective())
    }

    fn oracle_inverse(&self, m: &EndoMatrix) -> Result<EndoMatrix, Failure> {
        let e = m.to_endo().map_err(err_at("to_endo", &[m]))?;
        let inv = invert_endo_direct(&e).map_err(err_at("oracle inverse", &[m]))?;
        EndoMatrix::from_endo(&self.ctx, &inv).map_err(err_at("from_endo", &[m]))
    }

    fn product(&self, x: &EndoMatrix, y: &EndoMatrix) -> Result<EndoMatrix, Failure> {
        x.mul(y).map_err(err_at("product", &[x, y]))
    }

    fn tag_of(&self, m: &EndoMatrix) -> SubsetTag {
        match self.index.get(m) {
            Some(&i) => self.tags[i].clone(),
            None => classify_unchecked(m),
        }
    }
}

fn matrix_isomorphism(r: &Run) -> Outcome {
    let mut lambda: Vec<&Endo> = r.endos.iter().collect();
    lambda.sort();
    let oracle: Vec<&Endo> = r.census.endos.iter().collect();
    if lambda != oracle {
        let missing = oracle
            .iter()
            .find(|e| !lambda.contains(e))
            .copied()
            .or_else(|| lambda.windows(2).find(|w| w[0] == w[1]).map(|w| w[0]));
        let witness = missing
            .and_then(|e| EndoMatrix::from_endo(&r.ctx, e).ok())
            .unwrap_or_else(|| EndoMatrix::identity(&r.ctx));
        return Err(Failure::new(
            format!("|M| = {}, |End(G)| = {}", r.ms.len(), r.census.end_count()),
            &[&witness],
        ));
    }
    let mut cases = 0;
    for (m, e) in r.ms.iter().zip(&r.endos) {
        let back = EndoMatrix::from_endo(&r.ctx, e).map_err(err_at("from_endo", &[m]))?;
        if &back != m {
            return Err(Failure::new(
                "matrix -> endomorphism -> matrix is not the identity",
                &[m],
            ));
        }
        if e.map().is_identity() && !m.is_identity() {
            return Err(Failure::new("non-identity matrix in the kernel", &[m]));
        }
        cases += 1;
    }
    for e in &r.census.endos {
        let m = EndoMatrix::from_endo(&r.ctx, e)
            .map_err(|err| Failure::new(format!("from_endo on oracle table {:?}: {err}", e.image()), &[]))?;
        let again = m
            .to_endo()
            .map_err(err_at("oracle endomorphism fails the conditions", &[&m]))?;
        if &again != e {
            return Err(Failure::new(
                "endomorphism -> matrix -> endomorphism is not the identity",
                &[&m],
            ));
        }
    }
    for (x, ex) in r.ms.iter().zip(&r.endos) {
        for (y, ey) in r.ms.iter().zip(&r.endos) {
            // equality with an oracle table already implies the homomorphism law
            let lhs = r.product(x, y)?.to_map();
            let rhs = compose_endo_direct(ex, ey).map_err(err_at("oracle composition", &[x, y]))?;
            if &lhs != rhs.map() {
                return Err(Failure::new("matrix product does not match composition", &[x, y]));
            }
            cases += 1;
        }
    }
    Ok(cases)
}

fn monoid_laws(r: &Run) -> Outcome {
    let id = EndoMatrix::identity(&r.ctx);
    if !r.index.contains_key(&id) {
        return Err(Failure::new("identity matrix is not enumerated", &[&id]));
    }
    let mut cases = 0;
    for x in &r.ms {
        if &r.product(&id, x)? != x || &r.product(x, &id)? != x {
            return Err(Failure::new("identity law fails", &[x]));
        }
        for y in &r.ms {
            if !r.index.contains_key(&r.product(x, y)?) {
                return Err(Failure::new("product leaves M", &[x, y]));
            }
            cases += 1;
        }
    }
    Ok(cases)
}

fn monoid_associativity(r: &Run) -> Result<Status, Failure> {
    let n = r.ms.len();
    if n > ASSOCIATIVITY_LIMIT {
        return Ok(Status::Skipped {
            reason: format!("|M| = {n} exceeds {ASSOCIATIVITY_LIMIT}"),
        });
    }
    let mut table = vec![vec![0usize; n]; n];
    for (i, x) in r.ms.iter().enumerate() {
        for (j, y) in r.ms.iter().enumerate() {
            let xy = r.product(x, y)?;
            table[i][j] = *r
                .index
                .get(&xy)
                .ok_or_else(|| Failure::new("product leaves M", &[x, y]))?;
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if table[table[i][j]][k] != table[i][table[j][k]] {
                    return Err(Failure::new("(xy)z != x(yz)", &[&r.ms[i], &r.ms[j], &r.ms[k]]));
                }
            }
        }
    }
    Ok(if n == 0 {
        Status::Skipped {
            reason: "M is empty".into(),
        }
    } else {
        Status::Pass { cases: n * n * n }
    })
}

fn det_k_criterion(r: &Run) -> Outcome {
    let mut cases = 0;
    for (m, &bij) in r.ms.iter().zip(&r.bijective) {
        if !m.alpha().is_bijective() {
            continue;
        }
        let dk = det_k(m).map_err(err_at("det_K", &[m]))?;
        if dk.invertible != bij {
            return Err(Failure::new(
                format!("det_K bijective = {}, endomorphism bijective = {bij}", dk.invertible),
                &[m],
            ));
        }
        cases += 1;
    }
    Ok(cases)
}

fn det_h_criterion(r: &Run) -> Outcome {
    let mut cases = 0;
    for (m, &bij) in r.ms.iter().zip(&r.bijective) {
        if !m.delta().is_bijective() {
            continue;
        }
        let dh = det_h(m).map_err(err_at("det_H", &[m]))?;
        if dh.invertible != bij {
            return Err(Failure::new(
                format!("det_H bijective = {}, endomorphism bijective = {bij}", dh.invertible),
                &[m],
            ));
        }
        cases += 1;
    }
    Ok(cases)
}

fn check_two_sided(r: &Run, m: &EndoMatrix, inv: &EndoMatrix, label: &str) -> Result<(), Failure> {
    if !inv.is_valid() {
        return Err(Failure::new(format!("{label} inverse fails the conditions"), &[m, inv]));
    }
    if !r.product(inv, m)?.is_identity() || !r.product(m, inv)?.is_identity() {
        return Err(Failure::new(
            format!("{label} inverse does not compose to the identity"),
            &[m, inv],
        ));
    }
    if &r.oracle_inverse(m)? != inv {
        return Err(Failure::new(
            format!("{label} inverse differs from the table inverse"),
            &[m, inv],
        ));
    }
    Ok(())
}

fn det_k_inverse(r: &Run) -> Outcome {
    let mut cases = 0;
    for m in r.autos().filter(|m| m.alpha().is_bijective()) {
        let inv = invert_via_det_k(m).map_err(err_at("det_K inverse", &[m]))?;
        check_two_sided(r, m, &inv, "det_K")?;
        let alpha_inv = m.alpha().inverse().map_err(err_at("alpha inverse", &[m]))?;
        let dh_of_inv = det_h(&inv).map_err(err_at("det_H of the inverse", &[m, &inv]))?;
        if dh_of_inv.value != alpha_inv {
            return Err(Failure::new("det_H of the inverse is not alpha⁻¹", &[m, &inv]));
        }
        let dk = det_k(m).map_err(err_at("det_K", &[m]))?;
        if !dk.is_hom {
            return Err(Failure::new(
                "det_K of an invertible matrix is not a homomorphism",
                &[m],
            ));
        }
        cases += 1;
    }
    Ok(cases)
}

fn det_h_inverse(r: &Run) -> Outcome {
    let mut cases = 0;
    for m in r.autos().filter(|m| m.delta().is_bijective()) {
        let inv = invert_via_det_h(m).map_err(err_at("det_H inverse", &[m]))?;
        check_two_sided(r, m, &inv, "det_H")?;
        let delta_inv = m.delta().inverse().map_err(err_at("delta inverse", &[m]))?;
        let dk_of_inv = det_k(&inv).map_err(err_at("det_K of the inverse", &[m, &inv]))?;
        if dk_of_inv.value != delta_inv {
            return Err(Failure::new("det_K of the inverse is not delta⁻¹", &[m, &inv]));
        }
        cases += 1;
    }
    Ok(cases)
}

fn determinant_duality(r: &Run) -> Outcome {
    let mut cases = 0;
    for m in r.both_bijective() {
        let dh = det_h(m).map_err(err_at("det_H", &[m]))?;
        let dk = det_k(m).map_err(err_at("det_K", &[m]))?;
        if dh.invertible != dk.invertible {
            return Err(Failure::new(
                format!(
                    "det_H bijective = {}, det_K bijective = {}",
                    dh.invertible, dk.invertible
                ),
                &[m],
            ));
        }
        let d = det_duality(m).map_err(err_at("duality", &[m]))?;
        if !d.is_consistent() {
            return Err(Failure::new("inverse formulas do not compose to identity maps", &[m]));
        }
        cases += 1;
    }
    Ok(cases)
}

fn combined_inverse(r: &Run) -> Outcome {
    let mut cases = 0;
    for m in r.both_bijective() {
        let c = invert_combined(m).map_err(err_at("combined inverse", &[m]))?;
        let k = invert_via_det_k(m).map_err(err_at("det_K inverse", &[m]))?;
        let h = invert_via_det_h(m).map_err(err_at("det_H inverse", &[m]))?;
        if c != k || c != h {
            return Err(Failure::new(
                "combined inverse differs from a determinant inverse",
                &[m, &c, &k, &h],
            ));
        }
        check_two_sided(r, m, &c, "combined")?;
        cases += 1;
    }
    Ok(cases)
}

fn combined_inverse_det_h(r: &Run) -> Outcome {
    let mut cases = 0;
    for m in r.both_bijective() {
        let inv = invert_combined(m).map_err(err_at("combined inverse", &[m]))?;
        let is_auto = inv
            .is_automorphism()
            .map_err(err_at("inverse fails the conditions", &[m, &inv]))?;
        if !is_auto {
            return Err(Failure::new("inverse is not an automorphism matrix", &[m, &inv]));
        }
        let alpha_inv = m.alpha().inverse().map_err(err_at("alpha inverse", &[m]))?;
        let dh = det_h(&inv).map_err(err_at("det_H of the inverse", &[m, &inv]))?;
        if dh.value != alpha_inv {
            return Err(Failure::new("det_H(θ⁻¹) != α⁻¹", &[m, &inv]));
        }
        cases += 1;
    }
    Ok(cases)
}

fn unit_diagonal(m: &EndoMatrix) -> bool {
    m.alpha().is_identity() && m.delta().is_identity()
}

fn c_part(m: &EndoMatrix) -> Result<EndoMatrix, Failure> {
    let ctx = m.ctx();
    let (h, k) = (ctx.h(), ctx.k());
    EndoMatrix::new(
        ctx.clone(),
        FMap::identity(h),
        FMap::zero(k, h),
        m.gamma().clone(),
        FMap::identity(k),
    )
    .map_err(err_at("c part", &[m]))
}

fn is_central(map: &FMap) -> bool {
    let z = center(map.cod());
    map.image().iter().all(|&x| z.contains(x))
}

fn unit_diagonal_split(r: &Run) -> Outcome {
    let mut cases = 0;
    let act = r.ctx.action();
    for m in r.autos().filter(|m| unit_diagonal(m)) {
        let a = unit_diagonal_a_part(m).map_err(err_at("a part", &[m]))?;
        let b = unit_diagonal_b_part(m).map_err(err_at("b part", &[m]))?;
        let c = c_part(m)?;
        if !a.is_valid() || !r.tag_of(&a).in_a {
            return Err(Failure::new("(1-βγ 0; 0 1) is not in A", &[m, &a]));
        }
        let crossed = is_crossed_hom(b.beta(), b.delta(), act).map_err(err_at("crossed hom", &[m, &b]))?;
        if !crossed {
            return Err(Failure::new("(1-βγ)⁻¹β is not a crossed homomorphism", &[m, &b]));
        }
        if !is_central(b.beta()) {
            return Err(Failure::new("(1-βγ)⁻¹β does not take values in Z(H)", &[m, &b]));
        }
        if !r.tag_of(&b).in_b || !r.tag_of(&c).in_c {
            return Err(Failure::new("b or c part outside B or C", &[m, &b, &c]));
        }
        let abc = r.product(&a, &r.product(&b, &c)?)?;
        if &abc != m {
            return Err(Failure::new("a·b·c does not reassemble the matrix", &[m, &a, &b, &c]));
        }
        cases += 1;
    }
    Ok(cases)
}

fn abcd_factorization(r: &Run) -> Outcome {
    let mut cases = 0;
    for m in r.autos() {
        match factor_abcd(m) {
            Ok(f) => {
                let check = f.check(m);
                if !check.verified() {
                    return Err(Failure::new(
                        format!("factor check {check:?}"),
                        &[m, &f.a, &f.b, &f.c, &f.d],
                    ));
                }
                cases += 1;
            }
            Err(FactorError::AlphaOrDeltaNotInvertible) => {}
            Err(e) => return Err(Failure::new(format!("factorization: {e}"), &[m])),
        }
    }
    Ok(cases)
}

fn subset_structure(r: &Run) -> Outcome {
    let pick = |f: fn(&SubsetTag) -> bool| -> Vec<&EndoMatrix> {
        r.ms.iter().zip(&r.tags).filter(|(_, t)| f(t)).map(|(m, _)| m).collect()
    };
    let sets: [(&str, Vec<&EndoMatrix>, fn(&SubsetTag) -> bool); 4] = [
        ("A", pick(|t| t.in_a), |t| t.in_a),
        ("B", pick(|t| t.in_b), |t| t.in_b),
        ("C", pick(|t| t.in_c), |t| t.in_c),
        ("D", pick(|t| t.in_d), |t| t.in_d),
    ];
    let mut cases = 0;
    for (name, members, test) in sets.iter().filter(|s| s.0 != "C") {
        for x in members {
            let inv = r.oracle_inverse(x)?;
            if !test(&r.tag_of(&inv)) {
                return Err(Failure::new(format!("inverse leaves {name}"), &[x, &inv]));
            }
            for y in members {
                let xy = r.product(x, y)?;
                if !xy.is_valid() || !test(&r.tag_of(&xy)) {
                    return Err(Failure::new(format!("product leaves {name}"), &[x, y]));
                }
                cases += 1;
            }
        }
    }
    for (outer_name, outer, _) in sets.iter().filter(|s| s.0 == "A" || s.0 == "D") {
        for x in outer {
            let x_inv = r.oracle_inverse(x)?;
            for (name, members, test) in sets.iter().filter(|s| s.0 == "B" || s.0 == "C") {
                for y in members {
                    let conj = r.product(x, &r.product(y, &x_inv)?)?;
                    if !conj.is_valid() || !test(&r.tag_of(&conj)) {
                        return Err(Failure::new(format!("{outer_name}-conjugate leaves {name}"), &[x, y]));
                    }
                    cases += 1;
                }
            }
        }
    }
    Ok(cases)
}

fn automorphism_characterization(r: &Run) -> Outcome {
    for (m, &bij) in r.ms.iter().zip(&r.bijective) {
        if m.has_unique_preimages() != bij {
            return Err(Failure::new(format!("unique preimages != bijective ({bij})"), &[m]));
        }
    }
    let autos = r.bijective.iter().filter(|&&b| b).count();
    if autos != r.census.aut_count() {
        return Err(Failure::new(
            format!("{autos} automorphism matrices but |Aut(G)| = {}", r.census.aut_count()),
            &[&EndoMatrix::identity(&r.ctx)],
        ));
    }
    Ok(r.ms.len())
}

fn witness_or_null(m: Option<&EndoMatrix>) -> Value {
    m.map(|m| serde_json::to_value(MatrixJson::of(m)).unwrap_or(Value::Null))
        .unwrap_or(Value::Null)
}

fn findings(r: &Run) -> Vec<Finding> {
    let mut out = Vec::new();

    let mut non_hom_k = (0usize, None);
    let mut non_hom_h = (0usize, None);
    let mut dh_hom_invertible = (0usize, 0usize);
    for (m, &bij) in r.ms.iter().zip(&r.bijective) {
        if let Ok(dk) = det_k(m) {
            if !dk.is_hom {
                non_hom_k.0 += 1;
                non_hom_k.1.get_or_insert(m);
            }
        }
        if let Ok(dh) = det_h(m) {
            if !dh.is_hom {
                non_hom_h.0 += 1;
                non_hom_h.1.get_or_insert(m);
            }
            if bij {
                dh_hom_invertible.1 += 1;
                if dh.is_hom {
                    dh_hom_invertible.0 += 1;
                }
            }
        }
    }
    out.push(Finding {
        name: "det_k_non_hom",
        value: json!({"count": non_hom_k.0, "witness": witness_or_null(non_hom_k.1)}),
    });
    out.push(Finding {
        name: "det_h_non_hom",
        value: json!({"count": non_hom_h.0, "witness": witness_or_null(non_hom_h.1)}),
    });
    out.push(Finding {
        name: "det_h_hom_when_invertible",
        value: json!({"hom": dh_hom_invertible.0, "cases": dh_hom_invertible.1}),
    });

    let c_members: Vec<&EndoMatrix> =
        r.ms.iter()
            .zip(&r.tags)
            .filter(|(_, t)| t.in_c)
            .map(|(m, _)| m)
            .collect();
    let mut c_open = None;
    'outer: for x in &c_members {
        for y in &c_members {
            if let Ok(xy) = x.mul(y) {
                if !xy.is_valid() || !r.tag_of(&xy).in_c {
                    c_open = Some(json!([MatrixJson::of(x), MatrixJson::of(y)]));
                    break 'outer;
                }
            }
        }
    }
    out.push(Finding {
        name: "c_closed_under_product",
        value: json!({"closed": c_open.is_none(), "witness": c_open.unwrap_or(Value::Null)}),
    });

    // unsubscripted det(θ⁻¹) = α⁻¹, read with either determinant
    let (mut cases, mut h_reading, mut k_reading) = (0usize, 0usize, 0usize);
    let mut uninverted = (0usize, None);
    for m in r.both_bijective() {
        let (Ok(inv), Ok(alpha_inv)) = (invert_combined(m), m.alpha().inverse()) else {
            continue;
        };
        cases += 1;
        if det_h(&inv).map(|d| d.value == alpha_inv).unwrap_or(false) {
            h_reading += 1;
        }
        if det_k(&inv).map(|d| d.value == alpha_inv).unwrap_or(false) {
            k_reading += 1;
        }
        if let (Ok(a), Ok(b)) = (det_k_inverse_via_det_h(m), det_k_inverse_via_det_h_uninverted(m)) {
            if a != b {
                uninverted.0 += 1;
                uninverted.1.get_or_insert(m);
            }
        }
    }
    out.push(Finding {
        name: "det_of_inverse_readings",
        value: json!({"cases": cases, "det_h_equals_alpha_inv": h_reading, "det_k_equals_alpha_inv": k_reading}),
    });
    out.push(Finding {
        name: "uninverted_lower_right_differs",
        value: json!({"count": uninverted.0, "witness": witness_or_null(uninverted.1)}),
    });

    let act = r.ctx.action();
    let (mut ud, mut crossed, mut central) = (0usize, 0usize, 0usize);
    for m in r.autos().filter(|m| unit_diagonal(m)) {
        let Ok(b) = unit_diagonal_b_part(m) else { continue };
        ud += 1;
        if is_crossed_hom(b.beta(), b.delta(), act).unwrap_or(false) {
            crossed += 1;
        }
        if is_central(b.beta()) {
            central += 1;
        }
    }
    out.push(Finding {
        name: "b_part",
        value: json!({"unit_diagonal_automorphisms": ud, "crossed_hom": crossed, "central": central}),
    });

    let odd = r
        .autos()
        .find(|m| !m.alpha().is_bijective() || !m.delta().is_bijective());
    out.push(Finding {
        name: "non_bijective_diagonal",
        value: json!({
            "count": r.autos().filter(|m| !m.alpha().is_bijective() || !m.delta().is_bijective()).count(),
            "witness": witness_or_null(odd),
        }),
    });
    out
}

pub fn run_verification(ctx: &Arc<SdProduct>, opts: &VerifyOptions) -> Result<VerifyReport, VerifyError> {
    let start = Instant::now();
    let r = Run::new(ctx.clone(), opts.bound)?;
    let mut checks = Vec::new();
    for &name in &opts.checks {
        let status = match name {
            CheckName::MatrixIsomorphism => finish(matrix_isomorphism(&r), "M is empty"),
            CheckName::MonoidLaws => finish(monoid_laws(&r), "M is empty"),
            CheckName::MonoidAssociativity => match monoid_associativity(&r) {
                Ok(s) => s,
                Err(f) => Status::Fail {
                    detail: f.detail,
                    witness: f.witness,
                },
            },
            CheckName::DetKCriterion => finish(det_k_criterion(&r), "no matrix with alpha bijective"),
            CheckName::DetHCriterion => finish(det_h_criterion(&r), "no matrix with delta bijective"),
            CheckName::DetKInverse => finish(det_k_inverse(&r), "no automorphism matrix with alpha bijective"),
            CheckName::DetHInverse => finish(det_h_inverse(&r), "no automorphism matrix with delta bijective"),
            CheckName::DeterminantDuality => finish(
                determinant_duality(&r),
                "no automorphism matrix with alpha and delta bijective",
            ),
            CheckName::CombinedInverse => finish(
                combined_inverse(&r),
                "no automorphism matrix with alpha and delta bijective",
            ),
            CheckName::CombinedInverseDetH => finish(
                combined_inverse_det_h(&r),
                "no automorphism matrix with alpha and delta bijective",
            ),
            CheckName::UnitDiagonalSplit => {
                finish(unit_diagonal_split(&r), "no automorphism matrix with identity diagonal")
            }
            CheckName::AbcdFactorization => finish(
                abcd_factorization(&r),
                "no automorphism matrix with alpha and delta bijective",
            ),
            CheckName::SubsetStructure => finish(subset_structure(&r), "A, B, C and D are empty"),
            CheckName::AutomorphismCharacterization => finish(automorphism_characterization(&r), "M is empty"),
        };
        checks.push(CheckResult { name, status });
    }
    let autos: Vec<&EndoMatrix> = r.autos().collect();
    let count = |f: fn(&SubsetTag) -> bool| r.tags.iter().filter(|t| f(t)).count();
    let counts = Counts {
        end: r.census.end_count(),
        aut: r.census.aut_count(),
        matrices: r.ms.len(),
        automorphism_matrices: autos.len(),
        a: count(|t| t.in_a),
        b: count(|t| t.in_b),
        c: count(|t| t.in_c),
        d: count(|t| t.in_d),
        factorable: r.both_bijective().count(),
        non_bijective_diagonal: autos.len() - r.both_bijective().count(),
    };
    let findings = findings(&r);
    Ok(VerifyReport {
        instance: ctx.name().to_string(),
        h_order: ctx.h().order(),
        k_order: ctx.k().order(),
        g_order: ctx.group().order(),
        counts,
        checks,
        findings,
        elapsed_ms: opts.timing.then(|| start.elapsed().as_millis()),
    })
}
