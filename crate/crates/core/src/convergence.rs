//! Perturbation-sequence generation and the pseudoinverse-convergence
//! condition battery.
//!
//! A sequence `B_1 ... B_N` against a base `B` is judged by thirteen
//! equivalent conditions (metric convergence of the operators and of their
//! pseudoinverses, norm convergence with bounded or convergent
//! pseudoinverses, bounded inner inverses, reduced-minimum-modulus bounds,
//! and four subspace-position readings) plus the classical six-condition
//! battery for the pseudoinverse map. Limit statements become tail-maximum
//! threshold checks; a report is consistent when every verdict agrees.

use serde::{Deserialize, Serialize};

use crate::angles::cos_c0;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::metrics::{gamma_collapse_gadget, isometry_flip, metric_dx_with, MetricKind};
use crate::operator::{analyze, OperatorAnalysis};
use crate::random;
use crate::subspace::Subspace;
use crate::svd::{anchored_rank, op_norm, svd};
use crate::tol::ToleranceConfig;

/// The four generator families.
///
/// * `RankPreserving` — `B_n = G_n B H_n` with `||G_n - I||, ||H_n - I|| <=
///   scale/n`; converges in both metrics.
/// * `RankDropping` — `B_n = B + (scale/n) v u^*` along random unit `u` in
///   `N(B)`, `v` in `N(B^*)`; the rank jumps and the reduced minimum modulus
///   collapses to `scale/n`.
/// * `PinvBlowup` — the same bump along the leading nullspace/co-nullspace
///   directions, making `||B_n^dagger|| = n/scale` explicit.
/// * `IsometryFlip` — the polar isometry is reflected across the smallest
///   retained singular direction; the terms stay within `2 sigma_min` of the
///   base in norm while their polar isometries sit at distance 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SequenceKind {
    RankPreserving,
    RankDropping,
    IsometryFlip,
    PinvBlowup,
}

impl std::fmt::Display for SequenceKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            SequenceKind::RankPreserving => "rank_preserving",
            SequenceKind::RankDropping => "rank_dropping",
            SequenceKind::IsometryFlip => "isometry_flip",
            SequenceKind::PinvBlowup => "pinv_blowup",
        };
        write!(f, "{name}")
    }
}

impl std::str::FromStr for SequenceKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rank_preserving" => Ok(SequenceKind::RankPreserving),
            "rank_dropping" => Ok(SequenceKind::RankDropping),
            "isometry_flip" => Ok(SequenceKind::IsometryFlip),
            "pinv_blowup" => Ok(SequenceKind::PinvBlowup),
            other => Err(Error::Parse(format!("unknown sequence kind `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct SequenceParams {
    pub length: usize,
    /// Decay scale `c` in the `c/n` perturbation sizes.
    pub scale: f64,
}

impl Default for SequenceParams {
    fn default() -> Self {
        SequenceParams {
            length: 50,
            scale: 1.0,
        }
    }
}

#[derive(Clone, Debug)]
pub struct PerturbationSequence {
    pub base: Matrix,
    pub terms: Vec<Matrix>,
    pub kind: SequenceKind,
    pub params: SequenceParams,
}

pub fn generate_sequence(
    kind: SequenceKind,
    base: &Matrix,
    params: SequenceParams,
    seed: u64,
    tol: &ToleranceConfig,
) -> Result<PerturbationSequence> {
    if params.length == 0 {
        return Err(Error::Precondition(
            "sequence length must be positive".into(),
        ));
    }
    if params.scale <= 0.0 {
        return Err(Error::Precondition("decay scale must be positive".into()));
    }
    let an = analyze(base, tol)?;
    let mut rng = random::rng_for(seed, generator_stream(kind), 0);
    let mut terms = Vec::with_capacity(params.length);
    match kind {
        SequenceKind::RankPreserving => {
            if params.scale >= 1.0 {
                return Err(Error::Precondition(
                    "rank-preserving decay scale must stay below 1 to keep the factors invertible"
                        .into(),
                ));
            }
            for n in 1..=params.length {
                let eps = params.scale / n as f64;
                let g = random::random_near_identity(base.rows(), eps, &mut rng);
                let h = random::random_near_identity(base.cols(), eps, &mut rng);
                terms.push(&(&g * base) * &h);
            }
        }
        SequenceKind::RankDropping | SequenceKind::PinvBlowup => {
            if an.signature.nullity == 0 || an.signature.defect == 0 {
                return Err(Error::Precondition(
                    "rank-one bump needs nullity > 0 and defect > 0".into(),
                ));
            }
            let (u, v) = if kind == SequenceKind::RankDropping {
                // random unit vectors inside the two nullspaces
                let null = an.nullspace_columns();
                let conull = an.range_complement_columns();
                let cu = random::random_unit_vector(null.cols(), &mut rng);
                let cv = random::random_unit_vector(conull.cols(), &mut rng);
                (null.matmul(&cu)?, conull.matmul(&cv)?)
            } else {
                (
                    an.nullspace_columns().column_slice(0),
                    an.range_complement_columns().column_slice(0),
                )
            };
            let bump = v.outer(&u)?;
            for n in 1..=params.length {
                terms.push(&an.a + &bump.scale_re(params.scale / n as f64));
            }
        }
        SequenceKind::IsometryFlip => {
            if an.rank == 0 {
                return Err(Error::Precondition(
                    "isometry flip needs a nonzero operator".into(),
                ));
            }
            let x0 = an.corange_columns().column_slice(an.rank - 1);
            let flip = isometry_flip(base, &x0, tol)?;
            for _ in 1..=params.length {
                terms.push(flip.b_tilde.clone());
            }
        }
    }
    Ok(PerturbationSequence {
        base: base.clone(),
        terms,
        kind,
        params,
    })
}

fn generator_stream(kind: SequenceKind) -> u64 {
    match kind {
        SequenceKind::RankPreserving => 0xa1,
        SequenceKind::RankDropping => 0xa2,
        SequenceKind::IsometryFlip => 0xa3,
        SequenceKind::PinvBlowup => 0xa4,
    }
}

/// Numeric cutoffs for reading limit statements off a finite tail.
///
/// Norm-type tolerances are relative to the base scales; the bound constants
/// `M = 2 ||B^dagger||` and `K = gamma(B) / 2` come from the doubling and
/// halving inequalities rather than from free parameters.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ConvergenceThresholds {
    pub norm_tol: f64,
    pub metric_tol: f64,
    pub pinv_tol: f64,
    pub pinv_metric_tol: f64,
    pub gamma_tol: f64,
    /// Fraction of the sequence treated as the tail (from the end).
    pub tail_fraction: f64,
}

impl Default for ConvergenceThresholds {
    fn default() -> Self {
        ConvergenceThresholds {
            norm_tol: 1e-6,
            metric_tol: 1e-6,
            pinv_tol: 1e-6,
            pinv_metric_tol: 1e-6,
            gamma_tol: 1e-6,
            tail_fraction: 0.25,
        }
    }
}

impl ConvergenceThresholds {
    pub fn tail_index(&self, length: usize) -> usize {
        let tail_len = ((length as f64) * self.tail_fraction).ceil() as usize;
        length.saturating_sub(tail_len.max(1))
    }
}

/// One evaluated condition: the headline measured quantity, the cutoff it
/// was compared against, and the comparison direction.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConditionVerdict {
    pub id: String,
    pub holds: bool,
    pub measured: f64,
    pub threshold: f64,
    pub comparison: String,
}

impl ConditionVerdict {
    fn le(id: &str, measured: f64, threshold: f64) -> Self {
        ConditionVerdict {
            id: id.into(),
            holds: measured <= threshold,
            measured,
            threshold,
            comparison: "<=".into(),
        }
    }

    fn ge(id: &str, measured: f64, threshold: f64) -> Self {
        ConditionVerdict {
            id: id.into(),
            holds: measured >= threshold,
            measured,
            threshold,
            comparison: ">=".into(),
        }
    }

    fn lt(id: &str, measured: f64, threshold: f64) -> Self {
        ConditionVerdict {
            id: id.into(),
            holds: measured < threshold,
            measured,
            threshold,
            comparison: "<".into(),
        }
    }

    fn eq(id: &str, measured: f64, threshold: f64) -> Self {
        ConditionVerdict {
            id: id.into(),
            holds: measured == threshold,
            measured,
            threshold,
            comparison: "==".into(),
        }
    }

    fn and(mut self, other: bool) -> Self {
        self.holds = self.holds && other;
        self
    }
}

/// Evidence from the constructive inner inverse on one tail term.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InnerInverseEvidence {
    pub term_index: usize,
    pub applicable: bool,
    pub inner_residual: f64,
    pub outer_residual: f64,
    pub norm: f64,
    pub norm_bound: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub kind: String,
    pub verdicts: Vec<ConditionVerdict>,
    pub tail_index: usize,
    pub thresholds: ConvergenceThresholds,
    pub consistent: bool,
    pub construction_evidence: Vec<InnerInverseEvidence>,
}

impl ConvergenceReport {
    pub fn all_hold(&self) -> bool {
        self.verdicts.iter().all(|v| v.holds)
    }

    pub fn none_hold(&self) -> bool {
        self.verdicts.iter().all(|v| !v.holds)
    }

    pub fn verdict(&self, id: &str) -> Option<bool> {
        self.verdicts.iter().find(|v| v.id == id).map(|v| v.holds)
    }
}

fn gamma_distance(g1: f64, g2: f64) -> f64 {
    match (g1.is_infinite(), g2.is_infinite()) {
        (true, true) => 0.0,
        (false, false) => (g1 - g2).abs(),
        _ => f64::INFINITY,
    }
}

struct TailData {
    terms: Vec<(usize, OperatorAnalysis)>,
}

fn analyze_tail(
    seq: &PerturbationSequence,
    tail_index: usize,
    tol: &ToleranceConfig,
) -> Result<TailData> {
    let mut terms = Vec::new();
    for (i, term) in seq.terms.iter().enumerate().skip(tail_index) {
        if term.rows() != seq.base.rows() || term.cols() != seq.base.cols() {
            return Err(Error::DimensionMismatch(
                "sequence terms must share the base shape".into(),
            ));
        }
        terms.push((i, analyze(term, tol)?));
    }
    Ok(TailData { terms })
}

/// The thirteen-condition battery.
pub fn convergence_report(
    seq: &PerturbationSequence,
    tol: &ToleranceConfig,
    thresholds: &ConvergenceThresholds,
) -> Result<ConvergenceReport> {
    if seq.terms.is_empty() {
        return Err(Error::Precondition("empty sequence".into()));
    }
    let base = analyze(&seq.base, tol)?;
    let tail_index = thresholds.tail_index(seq.terms.len());
    let tail = analyze_tail(seq, tail_index, tol)?;

    let base_scale = 1.0 + base.op_norm;
    let pinv_scale = 1.0 + base.pinv_norm;

    // tail maxima of the four metric quantities
    let mut d_null: f64 = 0.0;
    let mut d_range: f64 = 0.0;
    let mut d_null_pinv: f64 = 0.0;
    let mut d_range_pinv: f64 = 0.0;
    let mut norm_gap: f64 = 0.0;
    let mut pinv_gap: f64 = 0.0;
    let mut pinv_norm_max: f64 = 0.0;
    let mut gamma_min = f64::INFINITY;
    let mut gamma_dist: f64 = 0.0;
    let mut sum_dim_min = usize::MAX;
    let mut angle_corange_null: f64 = 0.0;
    let mut null_recovery_min = usize::MAX;
    let mut angle_range_conull: f64 = 0.0;

    let base_null = Subspace::from_orthonormal(base.nullspace_columns(), tol)?;
    let base_corange = Subspace::from_orthonormal(base.corange_columns(), tol)?;
    let base_conull = Subspace::from_orthonormal(base.range_complement_columns(), tol)?;
    let domain_dim = seq.base.cols();
    let pinv_base = analyze(&base.pinv, tol)?;

    for (_, term) in &tail.terms {
        let pinv_term = analyze(&term.pinv, tol)?;
        d_null = d_null.max(metric_dx_with(term, &base, MetricKind::Null)?);
        d_range = d_range.max(metric_dx_with(term, &base, MetricKind::Range)?);
        d_null_pinv = d_null_pinv.max(metric_dx_with(&pinv_term, &pinv_base, MetricKind::Null)?);
        d_range_pinv = d_range_pinv.max(metric_dx_with(&pinv_term, &pinv_base, MetricKind::Range)?);
        norm_gap = norm_gap.max(op_norm(&(&term.a - &base.a))?);
        pinv_gap = pinv_gap.max(op_norm(&(&term.pinv - &base.pinv))?);
        pinv_norm_max = pinv_norm_max.max(term.pinv_norm);
        gamma_min = gamma_min.min(term.gamma);
        gamma_dist = gamma_dist.max(gamma_distance(term.gamma, base.gamma));

        let term_null = Subspace::from_orthonormal(term.nullspace_columns(), tol)?;
        let term_corange = Subspace::from_orthonormal(term.corange_columns(), tol)?;
        let term_range = Subspace::from_orthonormal(term.range_columns(), tol)?;

        sum_dim_min = sum_dim_min.min(term_null.sum_dim(&base_corange, tol)?);
        angle_corange_null = angle_corange_null.max(cos_c0(&term_corange, &base_null, tol)?);
        // N(B) = P_{N(B)} N(B_n): the image always sits inside N(B), so
        // equality is the rank of the projected basis.
        let recovered = if term_null.dim() == 0 {
            0
        } else {
            let projected = base.p_null.matmul(term_null.basis())?;
            anchored_rank(&svd(&projected)?, tol)
        };
        null_recovery_min = null_recovery_min.min(recovered);
        angle_range_conull = angle_range_conull.max(cos_c0(&term_range, &base_conull, tol)?);
    }

    let norm_ok = norm_gap <= thresholds.norm_tol * base_scale;
    let pinv_bound = if base.pinv_norm == 0.0 {
        tol.eq_tol
    } else {
        2.0 * base.pinv_norm + tol.eq_tol
    };
    let gamma_floor = if base.gamma.is_infinite() {
        f64::INFINITY
    } else {
        base.gamma / 2.0 - tol.eq_tol
    };

    // constructive bounded inner inverses on the tail
    let mut evidence = Vec::new();
    for (i, term) in &tail.terms {
        match bounded_inner_inverse_with(&base, &term.a, tol) {
            Ok(c) => {
                evidence.push(InnerInverseEvidence {
                    term_index: *i,
                    applicable: true,
                    inner_residual: c.inner_residual,
                    outer_residual: c.outer_residual,
                    norm: c.norm,
                    norm_bound: c.norm_bound,
                });
            }
            Err(Error::Precondition(_)) | Err(Error::OutsideNeighborhood(_)) => {
                evidence.push(InnerInverseEvidence {
                    term_index: *i,
                    applicable: false,
                    inner_residual: f64::NAN,
                    outer_residual: f64::NAN,
                    norm: f64::NAN,
                    norm_bound: pinv_bound,
                });
            }
            Err(e) => return Err(e),
        }
    }

    let verdicts = vec![
        ConditionVerdict::le("d_null", d_null, thresholds.metric_tol * base_scale),
        ConditionVerdict::le("d_range", d_range, thresholds.metric_tol * base_scale),
        ConditionVerdict::le(
            "d_null_pinv",
            d_null_pinv,
            thresholds.pinv_metric_tol * pinv_scale,
        ),
        ConditionVerdict::le(
            "d_range_pinv",
            d_range_pinv,
            thresholds.pinv_metric_tol * pinv_scale,
        ),
        ConditionVerdict::le("norm_and_pinv", pinv_gap, thresholds.pinv_tol * pinv_scale)
            .and(norm_ok),
        ConditionVerdict::le("pinv_bounded", pinv_norm_max, pinv_bound).and(norm_ok),
        // By the minimal-norm property of the pseudoinverse among inner
        // inverses, bounded inner inverses exist iff the pseudoinverses are
        // bounded; the constructive route additionally certifies the
        // explicit inverse wherever its precondition holds.
        ConditionVerdict::le("inner_inverse_bounded", pinv_norm_max, pinv_bound).and(norm_ok),
        ConditionVerdict::ge("gamma_bounded_below", gamma_min, gamma_floor).and(norm_ok),
        ConditionVerdict::le(
            "gamma_converges",
            gamma_dist,
            thresholds.gamma_tol
                * (1.0
                    + if base.gamma.is_finite() {
                        base.gamma
                    } else {
                        0.0
                    }),
        )
        .and(norm_ok),
        ConditionVerdict::eq("null_corange_sum", sum_dim_min as f64, domain_dim as f64)
            .and(norm_ok),
        ConditionVerdict::lt(
            "corange_null_angle",
            angle_corange_null,
            1.0 - tol.angle_one_tol,
        )
        .and(norm_ok),
        ConditionVerdict::eq(
            "null_projection_recovers",
            null_recovery_min as f64,
            base_null.dim() as f64,
        )
        .and(norm_ok),
        ConditionVerdict::lt(
            "range_pinv_null_trivial",
            angle_range_conull,
            1.0 - tol.angle_one_tol,
        )
        .and(norm_ok),
    ];

    let first = verdicts[0].holds;
    let consistent = verdicts.iter().all(|v| v.holds == first);
    Ok(ConvergenceReport {
        kind: seq.kind.to_string(),
        verdicts,
        tail_index,
        thresholds: *thresholds,
        consistent,
        construction_evidence: evidence,
    })
}

/// The classical six-condition battery for the pseudoinverse map, evaluated
/// under the same norm-convergence hypothesis so the verdicts are comparable
/// with the thirteen-condition report.
pub fn pinv_convergence_report(
    seq: &PerturbationSequence,
    tol: &ToleranceConfig,
    thresholds: &ConvergenceThresholds,
) -> Result<ConvergenceReport> {
    if seq.terms.is_empty() {
        return Err(Error::Precondition("empty sequence".into()));
    }
    let base = analyze(&seq.base, tol)?;
    let tail_index = thresholds.tail_index(seq.terms.len());
    let tail = analyze_tail(seq, tail_index, tol)?;

    let base_scale = 1.0 + base.op_norm;
    let pinv_scale = 1.0 + base.pinv_norm;
    let proj_tol = thresholds.metric_tol;

    let mut norm_gap: f64 = 0.0;
    let mut pinv_gap: f64 = 0.0;
    let mut range_proj_gap: f64 = 0.0;
    let mut corange_proj_gap: f64 = 0.0;
    let mut pinv_norm_max: f64 = 0.0;
    let mut gamma_dist: f64 = 0.0;
    let mut angle_range_conull: f64 = 0.0;

    let base_conull = Subspace::from_orthonormal(base.range_complement_columns(), tol)?;
    for (_, term) in &tail.terms {
        norm_gap = norm_gap.max(op_norm(&(&term.a - &base.a))?);
        pinv_gap = pinv_gap.max(op_norm(&(&term.pinv - &base.pinv))?);
        range_proj_gap = range_proj_gap.max(op_norm(&(&term.p_range - &base.p_range))?);
        corange_proj_gap = corange_proj_gap.max(op_norm(&(&term.p_corange - &base.p_corange))?);
        pinv_norm_max = pinv_norm_max.max(term.pinv_norm);
        gamma_dist = gamma_dist.max(gamma_distance(term.gamma, base.gamma));
        let term_range = Subspace::from_orthonormal(term.range_columns(), tol)?;
        angle_range_conull = angle_range_conull.max(cos_c0(&term_range, &base_conull, tol)?);
    }

    let norm_ok = norm_gap <= thresholds.norm_tol * base_scale;
    let pinv_bound = if base.pinv_norm == 0.0 {
        tol.eq_tol
    } else {
        2.0 * base.pinv_norm + tol.eq_tol
    };

    let verdicts = vec![
        ConditionVerdict::le("pinv_converges", pinv_gap, thresholds.pinv_tol * pinv_scale)
            .and(norm_ok),
        ConditionVerdict::le("range_projector_converges", range_proj_gap, proj_tol).and(norm_ok),
        ConditionVerdict::le("corange_projector_converges", corange_proj_gap, proj_tol)
            .and(norm_ok),
        ConditionVerdict::le("pinv_norms_bounded", pinv_norm_max, pinv_bound).and(norm_ok),
        ConditionVerdict::le(
            "gamma_converges",
            gamma_dist,
            thresholds.gamma_tol
                * (1.0
                    + if base.gamma.is_finite() {
                        base.gamma
                    } else {
                        0.0
                    }),
        )
        .and(norm_ok),
        ConditionVerdict::lt(
            "range_null_intersection_trivial",
            angle_range_conull,
            1.0 - tol.angle_one_tol,
        )
        .and(norm_ok),
    ];
    let first = verdicts[0].holds;
    let consistent = verdicts.iter().all(|v| v.holds == first);
    Ok(ConvergenceReport {
        kind: seq.kind.to_string(),
        verdicts,
        tail_index,
        thresholds: *thresholds,
        consistent,
        construction_evidence: Vec::new(),
    })
}

/// The constructive bounded inner inverse of a perturbed operator:
/// with `G_1 = I + B^dagger (B_n - B)` and `G_2 = I + (B_n - B) B^dagger`,
/// the operator `A_n = G_1^{-1} B^dagger = B^dagger G_2^{-1}` is an inner
/// inverse of `B_n` with `||A_n|| <= 2 ||B^dagger||`.
#[derive(Clone, Debug)]
pub struct ConstructedInnerInverse {
    pub an: Matrix,
    /// `||B_n A_n B_n - B_n||`
    pub inner_residual: f64,
    /// `||A_n B_n A_n - A_n||`
    pub outer_residual: f64,
    pub norm: f64,
    pub norm_bound: f64,
    /// `||G_1^{-1} B^dagger - B^dagger G_2^{-1}||`
    pub factor_identity_residual: f64,
}

pub fn bounded_inner_inverse(
    b: &Matrix,
    bn: &Matrix,
    tol: &ToleranceConfig,
) -> Result<ConstructedInnerInverse> {
    let base = analyze(b, tol)?;
    bounded_inner_inverse_with(&base, bn, tol)
}

pub fn bounded_inner_inverse_with(
    base: &OperatorAnalysis,
    bn: &Matrix,
    tol: &ToleranceConfig,
) -> Result<ConstructedInnerInverse> {
    if bn.rows() != base.rows() || bn.cols() != base.cols() {
        return Err(Error::DimensionMismatch(
            "perturbed operator must share the base shape".into(),
        ));
    }
    let step = op_norm(&(bn - &base.a))?;
    if base.pinv_norm > 0.0 && step >= 1.0 / (2.0 * base.pinv_norm) {
        return Err(Error::Precondition(format!(
            "construction inapplicable: ||B_n - B|| = {step:.3e} is not below 1/(2||B^dagger||)"
        )));
    }
    // trivial-intersection condition R(B_n) cap N(B^dagger) = 0
    let range_n = Subspace::from_orthonormal(analyze(bn, tol)?.range_columns(), tol)?;
    let conull = Subspace::from_orthonormal(base.range_complement_columns(), tol)?;
    if cos_c0(&range_n, &conull, tol)? >= 1.0 - tol.angle_one_tol {
        return Err(Error::Precondition(
            "construction inapplicable: the perturbed range meets the base co-nullspace".into(),
        ));
    }

    let diff = bn - &base.a;
    let g1 = &Matrix::identity(base.cols()) + &(&base.pinv * &diff);
    let g2 = &Matrix::identity(base.rows()) + &(&diff * &base.pinv);
    let an = g1.solve(&base.pinv)?;
    let alt = base.pinv.matmul(&g2.inverse()?)?;
    let factor_identity_residual = op_norm(&(&an - &alt))?;

    let inner_residual = op_norm(&(&(&(bn * &an) * bn) - bn))?;
    let outer_residual = op_norm(&(&(&(&an * bn) * &an) - &an))?;
    let norm = op_norm(&an)?;
    let norm_bound = 2.0 * base.pinv_norm;
    Ok(ConstructedInnerInverse {
        an,
        inner_residual,
        outer_residual,
        norm,
        norm_bound,
        factor_identity_residual,
    })
}

/// One step of the blowup demonstration.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DiscontinuityRecord {
    pub n: u32,
    /// `||B_n - B||` (analytically `1/n`)
    pub step_norm: f64,
    /// `||B_n^dagger||` (analytically `n`)
    pub pinv_norm: f64,
    /// `||B_n^dagger - B^dagger||`
    pub pinv_gap: f64,
    /// `||P_{R(B_n)} - P_{R(B)}||` (analytically 1)
    pub projector_gap: f64,
    /// `d_R(B_n, B)`
    pub metric_dr: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DiscontinuityReport {
    pub base_pinv_norm: f64,
    pub records: Vec<DiscontinuityRecord>,
}

/// The norm-topology discontinuity of the pseudoinverse at an operator that
/// is neither injective nor surjective: rank-one bumps of size `1/n` push
/// `||B_n^dagger||` to `n` while the range projector jumps by a full unit,
/// so the range metric sees the divergence immediately.
pub fn discontinuity_demo(
    b: &Matrix,
    n_max: u32,
    tol: &ToleranceConfig,
) -> Result<DiscontinuityReport> {
    let base = analyze(b, tol)?;
    if base.signature.nullity == 0 || base.signature.defect == 0 {
        return Err(Error::Precondition(
            "operator is injective or surjective; the pseudoinverse map is continuous there".into(),
        ));
    }
    let mut records = Vec::new();
    for n in 2..=n_max.max(2) {
        let bn = gamma_collapse_gadget(b, n, tol)?;
        let an = analyze(&bn, tol)?;
        records.push(DiscontinuityRecord {
            n,
            step_norm: op_norm(&(&bn - b))?,
            pinv_norm: an.pinv_norm,
            pinv_gap: op_norm(&(&an.pinv - &base.pinv))?,
            projector_gap: op_norm(&(&an.p_range - &base.p_range))?,
            metric_dr: metric_dx_with(&an, &base, MetricKind::Range)?,
        });
    }
    Ok(DiscontinuityReport {
        base_pinv_norm: base.pinv_norm,
        records,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn convergent_thresholds() -> ConvergenceThresholds {
        ConvergenceThresholds::default()
    }

    fn base_with_kernel(seed: u64) -> Matrix {
        let mut rng = random::rng_for(seed, 90, 0);
        random::random_operator(5, 4, 2, 0.4, 2.0, &mut rng)
    }

    #[test]
    fn rank_preserving_sequences_converge_unanimously() {
        let t = tol();
        let th = convergent_thresholds();
        let base = base_with_kernel(1);
        let params = SequenceParams {
            length: 40,
            scale: 1e-8,
        };
        let seq = generate_sequence(SequenceKind::RankPreserving, &base, params, 11, &t).unwrap();
        let report = convergence_report(&seq, &t, &th).unwrap();
        assert!(report.consistent, "verdicts: {:?}", report.verdicts);
        assert!(report.all_hold());
        let classical = pinv_convergence_report(&seq, &t, &th).unwrap();
        assert!(classical.consistent && classical.all_hold());
        // constructive inner inverses applied on the whole tail
        assert!(report
            .construction_evidence
            .iter()
            .all(|e| e.applicable && e.norm <= e.norm_bound + 1e-9));
    }

    #[test]
    fn blowup_sequences_diverge_unanimously() {
        let t = tol();
        let th = convergent_thresholds();
        let base = base_with_kernel(2);
        for kind in [SequenceKind::PinvBlowup, SequenceKind::RankDropping] {
            let params = SequenceParams {
                length: 40,
                scale: 1e-5,
            };
            let seq = generate_sequence(kind, &base, params, 13, &t).unwrap();
            let report = convergence_report(&seq, &t, &th).unwrap();
            assert!(report.consistent, "verdicts: {:?}", report.verdicts);
            assert!(report.none_hold());
            let classical = pinv_convergence_report(&seq, &t, &th).unwrap();
            assert!(classical.consistent && classical.none_hold());
        }
    }

    #[test]
    fn rank_preserving_on_the_identity_keeps_invertibility() {
        let t = tol();
        let th = convergent_thresholds();
        let base = Matrix::identity(2);
        let params = SequenceParams {
            length: 30,
            scale: 1e-8,
        };
        let seq = generate_sequence(SequenceKind::RankPreserving, &base, params, 5, &t).unwrap();
        for term in &seq.terms {
            assert!(term.inverse().is_ok());
            assert_eq!(analyze(term, &t).unwrap().rank, 2);
        }
        let report = convergence_report(&seq, &t, &th).unwrap();
        assert!(report.consistent && report.all_hold());
    }

    #[test]
    fn constant_sequence_is_trivially_convergent() {
        let t = tol();
        let th = convergent_thresholds();
        let base = base_with_kernel(3);
        let seq = PerturbationSequence {
            base: base.clone(),
            terms: vec![base.clone(); 10],
            kind: SequenceKind::RankPreserving,
            params: SequenceParams::default(),
        };
        let report = convergence_report(&seq, &t, &th).unwrap();
        assert!(report.consistent && report.all_hold());
    }

    #[test]
    fn flip_sequences_obstruct_isometry_continuity() {
        let t = tol();
        let th = convergent_thresholds();
        let mut rng = random::rng_for(4, 91, 0);
        let sigma_min = 1e-4;
        let base = random::with_singular_values(4, 4, &[2.0, 1.0, sigma_min], &mut rng);
        let params = SequenceParams {
            length: 10,
            scale: 1.0,
        };
        let seq = generate_sequence(SequenceKind::IsometryFlip, &base, params, 17, &t).unwrap();
        // terms stay 2 sigma_min from the base in norm...
        for term in &seq.terms {
            let gap = op_norm(&(term - &base)).unwrap();
            assert!((gap - 2.0 * sigma_min).abs() < 1e-10);
        }
        // ...but their polar isometries are at distance 2
        let v_base = crate::operator::polar_decompose(&base, &t).unwrap().v;
        for term in &seq.terms {
            let v_term = crate::operator::polar_decompose(term, &t).unwrap().v;
            assert!((op_norm(&(&v_term - &v_base)).unwrap() - 2.0).abs() < 1e-8);
        }
        // at the default thresholds the sequence reads as divergent, and the
        // verdicts still agree
        let report = convergence_report(&seq, &t, &th).unwrap();
        assert!(report.consistent && report.none_hold());
    }

    #[test]
    fn pinv_blowup_diagonal_example() {
        let t = tol();
        // base diag(1, 0): bump gives diag(1, 1/n) up to the chosen
        // directions, so the pseudoinverse norm is exactly n
        let base = Matrix::diag(&[1.0, 0.0]);
        let seq = generate_sequence(
            SequenceKind::PinvBlowup,
            &base,
            SequenceParams {
                length: 12,
                scale: 1.0,
            },
            0,
            &t,
        )
        .unwrap();
        for (i, term) in seq.terms.iter().enumerate() {
            let n = (i + 1) as f64;
            let an = analyze(term, &t).unwrap();
            assert!((an.pinv_norm - n).abs() < 1e-9 * n);
        }
    }

    #[test]
    fn inner_inverse_construction_examples() {
        let t = tol();
        // B_n = B reduces to the pseudoinverse itself
        let b = base_with_kernel(5);
        let c = bounded_inner_inverse(&b, &b, &t).unwrap();
        let pinv = analyze(&b, &t).unwrap().pinv;
        assert!(c.an.max_abs_diff(&pinv) < 1e-12);
        assert!(c.inner_residual < 1e-10 && c.outer_residual < 1e-10);

        // diagonal perturbation: A_n = diag(1/(1+delta), 0)
        let b = Matrix::diag(&[1.0, 0.0]);
        let bn = Matrix::diag(&[1.1, 0.0]);
        let c = bounded_inner_inverse(&b, &bn, &t).unwrap();
        assert!(c.an.max_abs_diff(&Matrix::diag(&[1.0 / 1.1, 0.0])) < 1e-12);
        assert!(c.factor_identity_residual < 1e-12);

        // random rank-preserving perturbations satisfy every contract
        for trial in 0..25 {
            let mut rng = random::rng_for(6, 92, trial);
            let b = random::random_operator(5, 4, 3, 0.5, 2.0, &mut rng);
            let base = analyze(&b, &t).unwrap();
            let radius = 0.3 / (2.0 * base.pinv_norm);
            let g = random::random_near_identity(5, radius, &mut rng);
            let h = random::random_near_identity(4, radius / (1.0 + base.op_norm), &mut rng);
            let bn = &(&g * &b) * &h;
            match bounded_inner_inverse(&b, &bn, &t) {
                Ok(c) => {
                    assert!(c.inner_residual <= 1e-9 * (1.0 + op_norm(&bn).unwrap()));
                    assert!(c.outer_residual <= 1e-9 * (1.0 + c.norm));
                    assert!(c.norm <= c.norm_bound + 1e-9);
                    assert!(c.factor_identity_residual <= 1e-9);
                }
                Err(Error::Precondition(_)) => {} // perturbation fell outside the radius
                Err(e) => panic!("unexpected error {e}"),
            }
        }

        // the blowup direction violates the trivial-intersection condition
        let b = Matrix::diag(&[1.0, 0.0]);
        let bn = gamma_collapse_gadget(&b, 10, &t).unwrap();
        assert!(matches!(
            bounded_inner_inverse(&b, &bn, &t),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn discontinuity_demo_profiles() {
        let t = tol();
        let b = Matrix::diag(&[1.0, 0.0]);
        let report = discontinuity_demo(&b, 20, &t).unwrap();
        for rec in &report.records {
            let n = rec.n as f64;
            assert!((rec.step_norm - 1.0 / n).abs() < 1e-12);
            assert!((rec.pinv_norm - n).abs() < 1e-9);
            assert!(rec.pinv_gap >= n - report.base_pinv_norm - 1e-9);
            assert!((rec.projector_gap - 1.0).abs() < 1e-9);
            assert!(rec.metric_dr >= 1.0 - 1e-9);
        }

        // the zero operator blows up the same way
        let report = discontinuity_demo(&Matrix::zeros(2, 2), 8, &t).unwrap();
        for rec in &report.records {
            let n = rec.n as f64;
            assert!((rec.pinv_norm - n).abs() < 1e-9);
        }

        // wider kernel
        let b = Matrix::rect_diag(4, 4, &[1.0, 1.0, 0.0, 0.0]);
        let report = discontinuity_demo(&b, 10, &t).unwrap();
        assert!(report
            .records
            .iter()
            .all(|r| (r.projector_gap - 1.0).abs() < 1e-9));

        // continuous points are rejected with a diagnostic
        assert!(matches!(
            discontinuity_demo(&Matrix::identity(3), 10, &t),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn generator_preconditions() {
        let t = tol();
        assert!(matches!(
            generate_sequence(
                SequenceKind::PinvBlowup,
                &Matrix::identity(2),
                SequenceParams::default(),
                0,
                &t
            ),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            generate_sequence(
                SequenceKind::RankPreserving,
                &Matrix::identity(2),
                SequenceParams {
                    length: 5,
                    scale: 2.0
                },
                0,
                &t
            ),
            Err(Error::Precondition(_))
        ));
    }
}
