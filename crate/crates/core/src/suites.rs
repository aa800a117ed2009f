//! Named verification suites.
//!
//! Each suite draws a deterministic random ensemble from `(seed, suite,
//! trial)` sub-seeds, evaluates its certificates, and reports one record per
//! check. Reruns with the same configuration are bit-identical in their
//! verdict sets.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::angles;
use crate::convergence::{self, ConvergenceThresholds, SequenceKind, SequenceParams};
use crate::error::{Error, Result};
use crate::fixed_range::{self, FixedRangeContext};
use crate::matrix::Matrix;
use crate::metrics::{self, MetricKind};
use crate::operator::{self, analyze};
use crate::orbit;
use crate::random::{self, SeededRng};
use crate::report::{digest_matrices, CertificateRecord, SuiteReport, VerifyReport};
use crate::subspace::Subspace;
use crate::svd::{min_singular_value, op_norm, svd};
use crate::tol::ToleranceConfig;

pub const ALL_SUITES: [&str; 12] = [
    "penrose",
    "gamma",
    "inner_inverse",
    "angles",
    "metric",
    "lipschitz",
    "gadget",
    "convergence",
    "orbit",
    "section",
    "distance",
    "fixed_range",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReportFormat {
    Json,
    Csv,
}

impl std::str::FromStr for ReportFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            other => Err(Error::Parse(format!("unknown report format `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub seed: u64,
    pub trials: usize,
    pub max_dim: usize,
    pub tolerances: ToleranceConfig,
    pub suites: Vec<String>,
    pub output_path: Option<String>,
    pub format: ReportFormat,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 7,
            trials: 500,
            max_dim: 8,
            tolerances: ToleranceConfig::default(),
            suites: Vec::new(),
            output_path: None,
            format: ReportFormat::Json,
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_dim < 2 {
            return Err(Error::Precondition("max_dim must be at least 2".into()));
        }
        if self.trials == 0 {
            return Err(Error::Precondition("trials must be at least 1".into()));
        }
        self.tolerances.validate()?;
        for id in &self.suites {
            if !ALL_SUITES.contains(&id.as_str()) {
                return Err(Error::Parse(format!("unknown suite id `{id}`")));
            }
        }
        Ok(())
    }

    fn active_suites(&self) -> Vec<String> {
        if self.suites.is_empty() {
            ALL_SUITES.iter().map(|s| s.to_string()).collect()
        } else {
            self.suites.clone()
        }
    }
}

pub fn run(cfg: &SuiteConfig) -> Result<VerifyReport> {
    cfg.validate()?;
    let mut suites = Vec::new();
    for id in cfg.active_suites() {
        suites.push(run_suite(&id, cfg)?);
    }
    Ok(VerifyReport {
        seed: cfg.seed,
        trials: cfg.trials,
        max_dim: cfg.max_dim,
        tolerances: cfg.tolerances,
        suites,
    })
}

pub fn run_suite(id: &str, cfg: &SuiteConfig) -> Result<SuiteReport> {
    cfg.validate()?;
    match id {
        "penrose" => suite_penrose(cfg),
        "gamma" => suite_gamma(cfg),
        "inner_inverse" => suite_inner_inverse(cfg),
        "angles" => suite_angles(cfg),
        "metric" => suite_metric(cfg),
        "lipschitz" => suite_lipschitz(cfg),
        "gadget" => suite_gadget(cfg),
        "convergence" => suite_convergence(cfg),
        "orbit" => suite_orbit(cfg),
        "section" => suite_section(cfg),
        "distance" => suite_distance(cfg),
        "fixed_range" => suite_fixed_range(cfg),
        other => Err(Error::Parse(format!("unknown suite id `{other}`"))),
    }
}

// ---------------------------------------------------------------- ensembles

fn shape(rng: &mut SeededRng, max_dim: usize) -> (usize, usize) {
    (rng.random_range(2..=max_dim), rng.random_range(2..=max_dim))
}

/// Smallest nonzero singular value for a trial, sweeping from well
/// conditioned down to gamma = 1e-6.
fn conditioning(trial: u64) -> f64 {
    match trial % 7 {
        0 => 1e-6,
        1 => 1e-3,
        2 => 1e-2,
        3 => 0.7,
        _ => 0.1,
    }
}

/// Random operator whose rank sweeps 0..=min(m, n) across trials.
fn trial_operator(rng: &mut SeededRng, max_dim: usize, trial: u64, min_rank: usize) -> Matrix {
    let (m, n) = shape(rng, max_dim);
    let max_rank = m.min(n);
    let rank = rng.random_range(min_rank..=max_rank);
    let smin = conditioning(trial);
    random::random_operator(m, n, rank, smin, 2.0, rng)
}

// ---------------------------------------------------------------- penrose

fn suite_penrose(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut suite = SuiteReport::new("penrose");
    let tol = &cfg.tolerances;
    for trial in 0..cfg.trials as u64 {
        let mut rng = random::rng_for(cfg.seed, 1, trial);
        let a = trial_operator(&mut rng, cfg.max_dim, trial, 0);
        let an = analyze(&a, tol)?;
        let digest = digest_matrices(&[&a]);
        let bound = 1e-10 * (1.0 + an.op_norm);

        let checks: [(&str, Matrix); 7] = [
            ("penrose_1", &(&(&an.a * &an.pinv) * &an.a) - &an.a),
            ("penrose_2", &(&(&an.pinv * &an.a) * &an.pinv) - &an.pinv),
            ("penrose_3", {
                let ap = &an.a * &an.pinv;
                &ap - &ap.adjoint()
            }),
            ("penrose_4", {
                let pa = &an.pinv * &an.a;
                &pa - &pa.adjoint()
            }),
            ("range_projector", &(&an.a * &an.pinv) - &an.p_range),
            ("corange_projector", &(&an.pinv * &an.a) - &an.p_corange),
            ("involution", {
                let back = analyze(&an.pinv, tol)?.pinv;
                &back - &an.a
            }),
        ];
        for (name, residual) in checks {
            suite.push(CertificateRecord::from_residual(
                "penrose",
                format!("{name}/t{trial}"),
                op_norm(&residual)?,
                bound,
                digest.clone(),
            ));
        }
    }
    Ok(suite)
}

// ---------------------------------------------------------------- gamma

fn suite_gamma(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut suite = SuiteReport::new("gamma");
    let tol = &cfg.tolerances;
    for trial in 0..cfg.trials as u64 {
        let mut rng = random::rng_for(cfg.seed, 2, trial);
        // keep sigma_min >= 1e-4 so the squared identity is not truncated
        let (m, n) = shape(&mut rng, cfg.max_dim);
        let rank = rng.random_range(1..=m.min(n));
        let smin = conditioning(trial).max(1e-4);
        let a = random::random_operator(m, n, rank, smin, 2.0, &mut rng);
        let an = analyze(&a, tol)?;
        let digest = digest_matrices(&[&a]);

        // gamma = 1 / ||pinv||
        suite.push(CertificateRecord::from_residual(
            "gamma",
            format!("pinv_norm_inverse/t{trial}"),
            (an.gamma - 1.0 / an.pinv_norm).abs(),
            1e-10 * (1.0 + an.gamma),
            digest.clone(),
        ));

        let g_star = operator::reduced_min_modulus(&a.adjoint(), tol)?;
        let parts = operator::polar_decompose(&a, tol)?;
        let g_abs = operator::reduced_min_modulus(&parts.abs_a, tol)?;
        let g_abs_star = operator::reduced_min_modulus(&parts.abs_a_star, tol)?;
        let gram_gamma = operator::reduced_min_modulus(&(&a.adjoint() * &a), tol)?;
        let id_bound = 1e-8 * (1.0 + an.gamma);
        for (name, value) in [
            ("adjoint", g_star),
            ("abs", g_abs),
            ("abs_adjoint", g_abs_star),
        ] {
            suite.push(CertificateRecord::from_residual(
                "gamma",
                format!("identity_{name}/t{trial}"),
                (an.gamma - value).abs(),
                id_bound,
                digest.clone(),
            ));
        }
        suite.push(CertificateRecord::from_residual(
            "gamma",
            format!("identity_square/t{trial}"),
            (an.gamma * an.gamma - gram_gamma).abs(),
            1e-8 * (1.0 + an.gamma * an.gamma),
            digest.clone(),
        ));

        // the exact three-term expansion of the pseudoinverse difference,
        // on a same-shape partner of arbitrary rank
        let rank_b = rng.random_range(0..=m.min(n));
        let b = random::random_operator(m, n, rank_b, smin, 2.0, &mut rng);
        let bn = analyze(&b, tol)?;
        let resid = operator::pinv_difference_identity_with(&an, &bn)?;
        let scale = (1.0 + an.pinv_norm) * (1.0 + bn.pinv_norm) * (1.0 + an.op_norm + bn.op_norm);
        suite.push(CertificateRecord::from_residual(
            "gamma",
            format!("pinv_difference_identity/t{trial}"),
            resid,
            1e-10 * scale,
            digest_matrices(&[&a, &b]),
        ));

        // near rank-deficient extra instance
        if trial % 7 == 0 {
            let tiny = random::random_operator(m, n, rank, 1e-6, 2.0, &mut rng);
            let at = analyze(&tiny, tol)?;
            suite.push(CertificateRecord::from_residual(
                "gamma",
                format!("pinv_norm_inverse_tiny/t{trial}"),
                (at.gamma - 1.0 / at.pinv_norm).abs(),
                1e-10 * (1.0 + at.gamma),
                digest_matrices(&[&tiny]),
            ));
        }
    }
    Ok(suite)
}

// ---------------------------------------------------------------- inner_inverse

fn suite_inner_inverse(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut suite = SuiteReport::new("inner_inverse");
    let tol = &cfg.tolerances;
    for trial in 0..cfg.trials as u64 {
        let mut rng = random::rng_for(cfg.seed, 3, trial);
        let (m, n) = shape(&mut rng, cfg.max_dim);
        let rank_b = rng.random_range(1..=m.min(n));
        let rank_a = rng.random_range(1..=m.min(n));
        let b = random::random_operator(m, n, rank_b, 0.1, 2.0, &mut rng);
        let a = random::random_operator(m, n, rank_a, 0.1, 2.0, &mut rng);
        let ab = analyze(&b, tol)?;
        let aa = analyze(&a, tol)?;
        let x = random::random_matrix(n, m, &mut rng);
        let y = random::random_matrix(n, m, &mut rng);
        let b_inner = operator::synthesize_inner_inverse(&ab, &x, &y)?;
        let a_inner = operator::synthesize_inner_inverse(&aa, &y, &x)?;
        let digest = digest_matrices(&[&a, &b]);

        suite.push(CertificateRecord::from_flag(
            "inner_inverse",
            format!("equation/t{trial}"),
            operator::check_generalized_inverse(&b, &b_inner, tol)?,
            op_norm(&(&(&(&b * &b_inner) * &b) - &b))?,
            tol.eq_scaled(ab.op_norm),
            digest.clone(),
        ));

        let inner_norm = op_norm(&b_inner)?;
        suite.push(CertificateRecord::from_residual(
            "inner_inverse",
            format!("gamma_lower/t{trial}"),
            1.0 / inner_norm,
            ab.gamma + tol.eq_tol,
            digest.clone(),
        ));
        suite.push(CertificateRecord::from_residual(
            "inner_inverse",
            format!("pinv_minimal/t{trial}"),
            ab.pinv_norm,
            inner_norm + tol.eq_tol,
            digest.clone(),
        ));

        // projector comparisons against arbitrary inner inverses
        let lhs_corange = op_norm(&(&ab.p_corange - &aa.p_corange))?;
        let rhs_corange = op_norm(&(&(&b_inner * &b) - &(&a_inner * &a)))?;
        suite.push(CertificateRecord::from_residual(
            "inner_inverse",
            format!("corange_dominates/t{trial}"),
            lhs_corange,
            rhs_corange + tol.eq_tol,
            digest.clone(),
        ));
        let lhs_range = op_norm(&(&ab.p_range - &aa.p_range))?;
        let rhs_range = op_norm(&(&(&b * &b_inner) - &(&a * &a_inner)))?;
        suite.push(CertificateRecord::from_residual(
            "inner_inverse",
            format!("range_dominates/t{trial}"),
            lhs_range,
            rhs_range + tol.eq_tol,
            digest,
        ));
    }
    Ok(suite)
}

// ---------------------------------------------------------------- angles

fn suite_angles(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut suite = SuiteReport::new("angles");
    let tol = &cfg.tolerances;
    for trial in 0..cfg.trials as u64 {
        let mut rng = random::rng_for(cfg.seed, 4, trial);
        let ambient = rng.random_range(2..=cfg.max_dim);
        let dm = rng.random_range(0..=ambient);
        let dn = rng.random_range(0..=ambient);
        let m = random::random_subspace(ambient, dm, &mut rng);
        let n = random::random_subspace(ambient, dn, &mut rng);
        let digest = digest_matrices(&[m.basis(), n.basis()]);

        let c0 = angles::cos_c0(&m, &n, tol)?;
        let c = angles::cos_c(&m, &n, tol)?;
        let c_rev = angles::cos_c(&n, &m, tol)?;
        suite.push(CertificateRecord::from_residual(
            "angles",
            format!("c_below_c0/t{trial}"),
            c,
            c0 + 1e-10,
            digest.clone(),
        ));
        suite.push(CertificateRecord::from_residual(
            "angles",
            format!("c_symmetric/t{trial}"),
            (c - c_rev).abs(),
            1e-10,
            digest.clone(),
        ));

        let trivial = angles::intersect(&m, &n, tol)?.dim() == 0;
        suite.push(CertificateRecord::from_flag(
            "angles",
            format!("c0_detects_intersection/t{trial}"),
            (c0 < 1.0 - tol.angle_one_tol) == trivial,
            c0,
            1.0 - tol.angle_one_tol,
            digest.clone(),
        ));

        let v = angles::sum_decomposition_verdict(&m, &n, tol)?;
        suite.push(CertificateRecord::from_flag(
            "angles",
            format!("sum_decomposition_agrees/t{trial}"),
            v.consistent(),
            if v.sum_is_everything { 1.0 } else { 0.0 },
            if v.complements_angle_below_one {
                1.0
            } else {
                0.0
            },
            digest.clone(),
        ));

        // reported, not asserted: the c vs projector-gap identity
        let (c_val, gap_val) = angles::c_vs_projector_gap(&m, &n, tol)?;
        suite.push(CertificateRecord::from_flag(
            "angles",
            format!("c_vs_gap_report/t{trial}"),
            true,
            c_val,
            gap_val,
            digest,
        ));

        // nullspace position verdicts on same-nullity operator pairs
        let dim = rng.random_range(2..=cfg.max_dim);
        let rank = rng.random_range(1..=dim);
        let b = random::random_operator(dim, dim, rank, 0.2, 2.0, &mut rng);
        let cmat = random::random_operator(dim, dim, rank, 0.2, 2.0, &mut rng);
        let verdicts = angles::nullspace_position_verdicts(&b, &cmat, tol)?;
        let all_agree = verdicts.projector_gap_below_one == verdicts.sum_is_domain
            && verdicts.sum_is_domain == verdicts.angle_below_one
            && verdicts.sum_is_domain == verdicts.null_projection_matches;
        suite.push(CertificateRecord::from_flag(
            "angles",
            format!("position_verdicts_agree/t{trial}"),
            all_agree,
            if verdicts.projector_gap_below_one {
                1.0
            } else {
                0.0
            },
            if verdicts.sum_is_domain { 1.0 } else { 0.0 },
            digest_matrices(&[&b, &cmat]),
        ));

        // arbitrary-rank pairs: the orthocomplement-dual trio must agree and
        // the projector-gap reading implies the rest
        let rank2 = rng.random_range(1..=dim);
        let d = random::random_operator(dim, dim, rank2, 0.2, 2.0, &mut rng);
        let vd = angles::nullspace_position_verdicts(&b, &d, tol)?;
        let dual_ok = vd.sum_is_domain == vd.angle_below_one
            && vd.sum_is_domain == vd.null_projection_matches
            && (!vd.projector_gap_below_one || vd.sum_is_domain);
        suite.push(CertificateRecord::from_flag(
            "angles",
            format!("position_duality/t{trial}"),
            dual_ok,
            if vd.sum_is_domain { 1.0 } else { 0.0 },
            if vd.angle_below_one { 1.0 } else { 0.0 },
            digest_matrices(&[&b, &d]),
        ));
    }
    Ok(suite)
}

// ---------------------------------------------------------------- metric

/// Scale a two-sided near-identity perturbation of `b` until the metric
/// lands inside `[lo, hi]`.
fn just_inside_pair(
    b: &Matrix,
    kind: MetricKind,
    lo: f64,
    hi: f64,
    rng: &mut SeededRng,
    tol: &ToleranceConfig,
) -> Result<Option<Matrix>> {
    let m = b.rows();
    let n = b.cols();
    let x = {
        let raw = random::random_matrix(m, m, rng);
        raw.scale_re(1.0 / op_norm(&raw)?.max(1e-12))
    };
    let y = {
        let raw = random::random_matrix(n, n, rng);
        raw.scale_re(1.0 / op_norm(&raw)?.max(1e-12))
    };
    let perturb = |t: f64| -> Result<Matrix> {
        let g = &Matrix::identity(m) + &x.scale_re(t);
        let h = &Matrix::identity(n) + &y.scale_re(t);
        Ok(&(&g * b) * &h)
    };
    let mut t_lo = 0.0f64;
    let mut t = 1e-7;
    let mut t_hi = None;
    for _ in 0..60 {
        let d = metrics::metric_dx(&perturb(t)?, b, kind, tol)?;
        if d < lo {
            t_lo = t;
            t *= 2.0;
            if t > 0.45 {
                return Ok(None);
            }
        } else if d > hi {
            t_hi = Some(t);
            break;
        } else {
            return Ok(Some(perturb(t)?));
        }
    }
    let mut hi_t = match t_hi {
        Some(v) => v,
        None => return Ok(None),
    };
    for _ in 0..60 {
        let mid = 0.5 * (t_lo + hi_t);
        let d = metrics::metric_dx(&perturb(mid)?, b, kind, tol)?;
        if d < lo {
            t_lo = mid;
        } else if d > hi {
            hi_t = mid;
        } else {
            return Ok(Some(perturb(mid)?));
        }
    }
    Ok(None)
}

fn suite_metric(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut suite = SuiteReport::new("metric");
    let tol = &cfg.tolerances;
    for trial in 0..cfg.trials as u64 {
        let mut rng = random::rng_for(cfg.seed, 5, trial);
        let (m, n) = shape(&mut rng, cfg.max_dim);
        let rank_a = rng.random_range(1..=m.min(n));
        let rank_b = rng.random_range(1..=m.min(n));
        let smin = conditioning(trial).max(1e-3);
        let a = random::random_operator(m, n, rank_a, smin, 2.0, &mut rng);
        let b = random::random_operator(m, n, rank_b, smin, 2.0, &mut rng);
        let c = random::random_operator(m, n, rng.random_range(1..=m.min(n)), smin, 2.0, &mut rng);
        let digest = digest_matrices(&[&a, &b]);

        let kind = if trial % 2 == 0 {
            MetricKind::Range
        } else {
            MetricKind::Null
        };

        // metric axioms on the sampled triple
        let dab = metrics::metric_dx(&a, &b, kind, tol)?;
        let dba = metrics::metric_dx(&b, &a, kind, tol)?;
        let dac = metrics::metric_dx(&a, &c, kind, tol)?;
        let dbc = metrics::metric_dx(&b, &c, kind, tol)?;
        let daa = metrics::metric_dx(&a, &a, kind, tol)?;
        suite.push(CertificateRecord::from_residual(
            "metric",
            format!("symmetry/t{trial}"),
            (dab - dba).abs(),
            1e-10 * (1.0 + dab),
            digest.clone(),
        ));
        suite.push(CertificateRecord::from_residual(
            "metric",
            format!("self_distance/t{trial}"),
            daa,
            1e-10,
            digest.clone(),
        ));
        suite.push(CertificateRecord::from_residual(
            "metric",
            format!("triangle/t{trial}"),
            dac,
            dab + dbc + 1e-10,
            digest.clone(),
        ));
        let norm_gap = op_norm(&(&a - &b))?;
        suite.push(CertificateRecord::from_residual(
            "metric",
            format!("dominates_norm/t{trial}"),
            norm_gap,
            dab + 1e-12,
            digest.clone(),
        ));

        // adjoint swap: d_N(A*, B*) = d_R(A, B)
        let dr = metrics::metric_dx(&a, &b, MetricKind::Range, tol)?;
        let dn_star = metrics::metric_dx(&a.adjoint(), &b.adjoint(), MetricKind::Null, tol)?;
        suite.push(CertificateRecord::from_residual(
            "metric",
            format!("adjoint_swap/t{trial}"),
            (dr - dn_star).abs(),
            1e-10 * (1.0 + dr),
            digest.clone(),
        ));

        // d_N against the corange projector gap plus the norm gap
        let an_a = analyze(&a, tol)?;
        let an_b = analyze(&b, tol)?;
        let dn = metrics::metric_dx_with(&an_a, &an_b, MetricKind::Null)?;
        let corange_gap = op_norm(&(&an_a.p_corange - &an_b.p_corange))?;
        suite.push(CertificateRecord::from_residual(
            "metric",
            format!("null_metric_bound/t{trial}"),
            dn,
            corange_gap + norm_gap + tol.eq_tol,
            digest.clone(),
        ));

        // reduced-minimum-modulus comparisons, certified under both metrics
        for cert_kind in [MetricKind::Range, MetricKind::Null] {
            match metrics::gamma_perturbation_certificate_with(&an_a, &an_b, cert_kind, tol) {
                Ok(cert) => suite.push(CertificateRecord::from_inequality(
                    "metric",
                    format!("gamma_bound_{cert_kind}/t{trial}"),
                    &cert,
                    digest.clone(),
                )),
                Err(Error::Skipped(_)) => suite.skip(),
                Err(e) => return Err(e),
            }
            match metrics::gamma_symmetric_certificate_with(&an_a, &an_b, cert_kind, tol) {
                Ok(cert) => suite.push(CertificateRecord::from_inequality(
                    "metric",
                    format!("gamma_symmetric_{cert_kind}/t{trial}"),
                    &cert,
                    digest.clone(),
                )),
                Err(Error::Skipped(_)) => suite.skip(),
                Err(e) => return Err(e),
            }
        }

        // pseudoinverse norm doubling on a pair synthesized just inside the
        // admissible radius (the radius is kind-specific), plus the halving
        // bound on the modulus
        let bound = 1.0 / (2.0 * (1.0 + an_b.pinv_norm * an_b.pinv_norm).sqrt());
        match just_inside_pair(&b, kind, 0.6 * bound, 0.95 * bound, &mut rng, tol)? {
            Some(near) => {
                let an_near = analyze(&near, tol)?;
                let cert =
                    metrics::pinv_norm_doubling_certificate_with(&an_near, &an_b, kind, tol)?;
                suite.push(CertificateRecord::from_inequality(
                    "metric",
                    format!("pinv_doubling_{kind}/t{trial}"),
                    &cert,
                    digest_matrices(&[&near, &b]),
                ));
                suite.push(CertificateRecord::from_residual(
                    "metric",
                    format!("gamma_halving_{kind}/t{trial}"),
                    an_b.gamma / 2.0 - tol.eq_tol,
                    an_near.gamma,
                    digest_matrices(&[&near, &b]),
                ));
            }
            None => suite.skip(),
        }
    }
    Ok(suite)
}

// ---------------------------------------------------------------- lipschitz

fn suite_lipschitz(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut suite = SuiteReport::new("lipschitz");
    let tol = &cfg.tolerances;
    for k in [1u32, 2, 5] {
        for trial in 0..cfg.trials as u64 {
            let mut rng = random::rng_for(cfg.seed, 6 + k as u64, trial);
            let (m, n) = shape(&mut rng, cfg.max_dim);
            let max_rank = m.min(n);
            let rank = rng.random_range(1..=max_rank);
            let floor = 1.0 / k as f64;
            let a = random::random_operator(m, n, rank, floor, 2.0, &mut rng);
            let b =
                random::random_operator(m, n, rng.random_range(1..=max_rank), floor, 2.0, &mut rng);
            let digest = digest_matrices(&[&a, &b]);

            // membership sanity: adjoints stay in the class
            suite.push(CertificateRecord::from_flag(
                "lipschitz",
                format!("class_adjoint/k{k}/t{trial}"),
                metrics::in_min_modulus_class(&a, k, tol)?
                    && metrics::in_min_modulus_class(&a.adjoint(), k, tol)?,
                floor,
                floor,
                digest.clone(),
            ));

            let certs = metrics::min_modulus_class_certificates(&a, &b, k, tol)?;
            suite.push(CertificateRecord::from_inequality(
                "lipschitz",
                format!("corange_rate/k{k}/t{trial}"),
                &certs.corange_projector,
                digest.clone(),
            ));
            suite.push(CertificateRecord::from_inequality(
                "lipschitz",
                format!("range_rate/k{k}/t{trial}"),
                &certs.range_projector,
                digest.clone(),
            ));
            if let Some(g) = certs.gamma_lipschitz {
                suite.push(CertificateRecord::from_inequality(
                    "lipschitz",
                    format!("gamma_rate/k{k}/t{trial}"),
                    &g,
                    digest.clone(),
                ));
            } else {
                suite.skip();
            }
            for kind in [MetricKind::Range, MetricKind::Null] {
                let cert = metrics::metric_equivalence_certificate(&a, &b, k, kind, tol)?;
                suite.push(CertificateRecord::from_inequality(
                    "lipschitz",
                    format!("metric_equivalence_{kind}/k{k}/t{trial}"),
                    &cert,
                    digest.clone(),
                ));
            }
            let cert = metrics::pinv_lipschitz_certificate(&a, &b, k, tol)?;
            suite.push(CertificateRecord::from_inequality(
                "lipschitz",
                format!("pinv_rate/k{k}/t{trial}"),
                &cert,
                digest,
            ));

            // a synthesized close pair so the modulus rate (premise
            // ||A - B|| < 1/k) is genuinely exercised: a full-rank operator
            // with sigma_min >= 1.9/k plus a bump of norm 0.8/k stays in
            // the class by Weyl's inequality
            let full = m.min(n);
            let kf = k as f64;
            let close_a =
                random::random_operator(m, n, full, 1.9 / kf, 1.9 / kf + 2.0, &mut rng);
            let bump = {
                let raw = random::random_matrix(m, n, &mut rng);
                raw.scale_re(0.8 / kf / op_norm(&raw)?.max(1e-12))
            };
            let close_b = &close_a + &bump;
            let close_digest = digest_matrices(&[&close_a, &close_b]);
            let close_certs = metrics::min_modulus_class_certificates(&close_a, &close_b, k, tol)?;
            let g = close_certs
                .gamma_lipschitz
                .expect("bump norm is below 1/k by construction");
            suite.push(CertificateRecord::from_inequality(
                "lipschitz",
                format!("gamma_rate_close/k{k}/t{trial}"),
                &g,
                close_digest.clone(),
            ));
            suite.push(CertificateRecord::from_inequality(
                "lipschitz",
                format!("corange_rate_close/k{k}/t{trial}"),
                &close_certs.corange_projector,
                close_digest.clone(),
            ));
            let cert = metrics::pinv_lipschitz_certificate(&close_a, &close_b, k, tol)?;
            suite.push(CertificateRecord::from_inequality(
                "lipschitz",
                format!("pinv_rate_close/k{k}/t{trial}"),
                &cert,
                close_digest,
            ));
        }
    }
    Ok(suite)
}

// ---------------------------------------------------------------- gadget

fn suite_gadget(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut suite = SuiteReport::new("gadget");
    let tol = &cfg.tolerances;

    // reduced-minimum-modulus collapse under rank-one bumps
    let bases = (cfg.trials / 10).max(5);
    for trial in 0..bases as u64 {
        let mut rng = random::rng_for(cfg.seed, 10, trial);
        let (m, n) = shape(&mut rng, cfg.max_dim);
        let max_rank = m.min(n).saturating_sub(1);
        let rank = if max_rank == 0 {
            0
        } else {
            rng.random_range(0..=max_rank)
        };
        let a = random::random_operator(m, n, rank, 0.4, 2.0, &mut rng);
        let digest = digest_matrices(&[&a]);
        for step in 2..=50u32 {
            let an = metrics::gamma_collapse_gadget(&a, step, tol)?;
            let nf = step as f64;
            suite.push(CertificateRecord::from_residual(
                "gadget",
                format!("bump_norm/t{trial}/n{step}"),
                (op_norm(&(&an - &a))? - 1.0 / nf).abs(),
                1e-12,
                digest.clone(),
            ));
            suite.push(CertificateRecord::from_residual(
                "gadget",
                format!("gamma_collapse/t{trial}/n{step}"),
                operator::reduced_min_modulus(&an, tol)?,
                1.0 / nf + 1e-10,
                digest.clone(),
            ));
        }
    }

    // isometry flips along the smallest singular direction
    let flips = (cfg.trials / 5).max(10);
    for trial in 0..flips as u64 {
        let mut rng = random::rng_for(cfg.seed, 11, trial);
        let (m, n) = shape(&mut rng, cfg.max_dim);
        let rank = rng.random_range(1..=m.min(n));
        let sigma_min = match trial % 4 {
            0 => 1e-4,
            1 => 1e-3,
            2 => 1e-2,
            _ => 0.5,
        };
        let mut sigmas: Vec<f64> = (0..rank)
            .map(|i| {
                if i + 1 == rank {
                    sigma_min
                } else {
                    1.0 + i as f64 * 0.3
                }
            })
            .collect();
        sigmas.sort_by(|x, y| y.partial_cmp(x).unwrap());
        let b = random::with_singular_values(m, n, &sigmas, &mut rng);
        let f = svd(&b)?;
        let x0 = f.v.column_slice(rank - 1);
        let flip = metrics::isometry_flip(&b, &x0, tol)?;
        let digest = digest_matrices(&[&b]);
        suite.push(CertificateRecord::from_residual(
            "gadget",
            format!("flip_isometry_gap/t{trial}"),
            (flip.isometry_gap - 2.0).abs(),
            1e-8,
            digest.clone(),
        ));
        suite.push(CertificateRecord::from_residual(
            "gadget",
            format!("flip_operator_gap/t{trial}"),
            (flip.operator_gap - 2.0 * sigma_min).abs(),
            1e-10,
            digest.clone(),
        ));
        suite.push(CertificateRecord::from_residual(
            "gadget",
            format!("flip_predicted_gap/t{trial}"),
            (flip.operator_gap - flip.predicted_operator_gap).abs(),
            1e-10,
            digest.clone(),
        ));
        suite.push(CertificateRecord::from_flag(
            "gadget",
            format!("flip_partial_isometry/t{trial}"),
            operator::is_partial_isometry(&flip.w, tol)?,
            0.0,
            tol.eq_tol,
            digest.clone(),
        ));
        let range_b = analyze(&b, tol)?.p_range;
        let range_w = analyze(&flip.w, tol)?.p_range;
        suite.push(CertificateRecord::from_residual(
            "gadget",
            format!("flip_range_kept/t{trial}"),
            op_norm(&(&range_b - &range_w))?,
            1e-9,
            digest,
        ));
    }

    // blowup demonstration profiles
    for trial in 0..3u64 {
        let mut rng = random::rng_for(cfg.seed, 12, trial);
        let dim = rng.random_range(2..=cfg.max_dim);
        let rank = rng.random_range(0..dim);
        let b = random::random_operator(dim, dim, rank, 0.5, 2.0, &mut rng);
        let report = convergence::discontinuity_demo(&b, 30, tol)?;
        let digest = digest_matrices(&[&b]);
        for rec in &report.records {
            let nf = rec.n as f64;
            suite.push(CertificateRecord::from_residual(
                "gadget",
                format!("blowup_pinv/t{trial}/n{}", rec.n),
                (rec.pinv_norm - nf).abs(),
                1e-9 * nf,
                digest.clone(),
            ));
            suite.push(CertificateRecord::from_residual(
                "gadget",
                format!("blowup_projector/t{trial}/n{}", rec.n),
                (rec.projector_gap - 1.0).abs(),
                1e-9,
                digest.clone(),
            ));
        }
    }
    Ok(suite)
}

// ---------------------------------------------------------------- convergence

fn convergence_base(rng: &mut SeededRng, max_dim: usize) -> Matrix {
    // nullity and defect both positive so every generator applies
    let m = rng.random_range(3..=max_dim.max(3));
    let n = rng.random_range(3..=max_dim.max(3));
    let rank = rng.random_range(1..m.min(n));
    random::random_operator(m, n, rank, 0.3, 2.0, rng)
}

fn suite_convergence(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut suite = SuiteReport::new("convergence");
    let tol = &cfg.tolerances;
    let thresholds = ConvergenceThresholds::default();
    let sequences = (cfg.trials / 5).max(4);
    for index in 0..sequences as u64 {
        let mut rng = random::rng_for(cfg.seed, 13, index);
        let base = convergence_base(&mut rng, cfg.max_dim);
        let digest = digest_matrices(&[&base]);
        // half convergent, the rest split between the two blowup flavors
        let (kind, params, expect_convergent) = if index % 2 == 0 {
            (
                SequenceKind::RankPreserving,
                SequenceParams {
                    length: 50,
                    scale: 1e-8,
                },
                true,
            )
        } else if index % 4 == 1 {
            (
                SequenceKind::RankDropping,
                SequenceParams {
                    length: 50,
                    scale: 1e-5,
                },
                false,
            )
        } else {
            (
                SequenceKind::PinvBlowup,
                SequenceParams {
                    length: 50,
                    scale: 1e-5,
                },
                false,
            )
        };
        let seq = convergence::generate_sequence(kind, &base, params, cfg.seed ^ index, tol)?;
        let report = convergence::convergence_report(&seq, tol, &thresholds)?;
        let classical = convergence::pinv_convergence_report(&seq, tol, &thresholds)?;

        suite.push(CertificateRecord::from_flag(
            "convergence",
            format!("unanimous/{kind}/s{index}"),
            report.consistent,
            report.verdicts.iter().filter(|v| v.holds).count() as f64,
            report.verdicts.len() as f64,
            digest.clone(),
        ));
        suite.push(CertificateRecord::from_flag(
            "convergence",
            format!("expected_direction/{kind}/s{index}"),
            if expect_convergent {
                report.all_hold()
            } else {
                report.none_hold()
            },
            if expect_convergent { 1.0 } else { 0.0 },
            if report.all_hold() { 1.0 } else { 0.0 },
            digest.clone(),
        ));
        suite.push(CertificateRecord::from_flag(
            "convergence",
            format!("classical_agrees/{kind}/s{index}"),
            classical.consistent && classical.all_hold() == report.all_hold(),
            classical.verdicts.iter().filter(|v| v.holds).count() as f64,
            classical.verdicts.len() as f64,
            digest.clone(),
        ));

        // constructive inner inverse wherever applicable
        for ev in &report.construction_evidence {
            if !ev.applicable {
                continue;
            }
            suite.push(CertificateRecord::from_flag(
                "convergence",
                format!("constructed_inverse/{kind}/s{index}/i{}", ev.term_index),
                ev.inner_residual <= 1e-9 * (1.0 + op_norm(&seq.base)?)
                    && ev.outer_residual <= 1e-9 * (1.0 + ev.norm)
                    && ev.norm <= ev.norm_bound + 1e-9,
                ev.norm,
                ev.norm_bound + 1e-9,
                digest.clone(),
            ));
        }

        if expect_convergent {
            // quantitative shadows along the convergent family
            let base_an = analyze(&seq.base, tol)?;
            let k_const = 7.0 * base_an.pinv_norm * base_an.pinv_norm;
            let v_base = operator::polar_decompose(&seq.base, tol)?.v;
            let mut lipschitz_ok = true;
            let mut polar_gap: f64 = 0.0;
            let mut uniform_angle: f64 = 0.0;
            let base_null = Subspace::from_orthonormal(base_an.nullspace_columns(), tol)?;
            for term in seq.terms.iter().skip(report.tail_index) {
                let term_an = analyze(term, tol)?;
                let pinv_gap = op_norm(&(&term_an.pinv - &base_an.pinv))?;
                let norm_gap = op_norm(&(term - &seq.base))?;
                lipschitz_ok &= pinv_gap <= k_const * norm_gap + 1e-12;
                // polar isometry through the pseudoinverse identity
                let v_term = &analyze(&term.adjoint(), tol)?.pinv
                    * &operator::polar_decompose(term, tol)?.abs_a;
                polar_gap = polar_gap.max(op_norm(&(&v_term - &v_base))?);
                let corange = Subspace::from_orthonormal(term_an.corange_columns(), tol)?;
                uniform_angle = uniform_angle.max(angles::cos_c0(&base_null, &corange, tol)?);
            }
            suite.push(CertificateRecord::from_flag(
                "convergence",
                format!("pinv_lipschitz_shadow/s{index}"),
                lipschitz_ok,
                k_const,
                k_const,
                digest.clone(),
            ));
            suite.push(CertificateRecord::from_residual(
                "convergence",
                format!("polar_isometry_continuity/s{index}"),
                polar_gap,
                1e-3,
                digest.clone(),
            ));
            suite.push(CertificateRecord::from_residual(
                "convergence",
                format!("uniform_angle/s{index}"),
                uniform_angle,
                1.0 - tol.angle_one_tol,
                digest.clone(),
            ));
        }

        // the two metric verdicts always agree
        let dr = report.verdict("d_range").unwrap_or(false);
        let dn = report.verdict("d_null").unwrap_or(false);
        suite.push(CertificateRecord::from_flag(
            "convergence",
            format!("metrics_agree/{kind}/s{index}"),
            dr == dn,
            if dr { 1.0 } else { 0.0 },
            if dn { 1.0 } else { 0.0 },
            digest,
        ));
    }

    // constant sequences are trivially convergent
    let mut rng = random::rng_for(cfg.seed, 14, 0);
    let base = convergence_base(&mut rng, cfg.max_dim);
    let seq = convergence::PerturbationSequence {
        base: base.clone(),
        terms: vec![base.clone(); 16],
        kind: SequenceKind::RankPreserving,
        params: SequenceParams::default(),
    };
    let report = convergence::convergence_report(&seq, tol, &thresholds)?;
    suite.push(CertificateRecord::from_flag(
        "convergence",
        "constant_sequence".into(),
        report.consistent && report.all_hold(),
        report.verdicts.iter().filter(|v| v.holds).count() as f64,
        report.verdicts.len() as f64,
        digest_matrices(&[&base]),
    ));
    Ok(suite)
}

// ---------------------------------------------------------------- orbit

fn suite_orbit(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut suite = SuiteReport::new("orbit");
    let tol = &cfg.tolerances;

    // constructive intertwiners on same-signature pairs
    let pairs = (cfg.trials * 2 / 5).max(10);
    for trial in 0..pairs as u64 {
        let mut rng = random::rng_for(cfg.seed, 15, trial);
        let (m, n) = shape(&mut rng, cfg.max_dim);
        let rank = rng.random_range(0..=m.min(n));
        let a = random::random_operator(m, n, rank, 0.2, 2.0, &mut rng);
        let b = random::random_operator(m, n, rank, 0.2, 2.0, &mut rng);
        let digest = digest_matrices(&[&a, &b]);
        let tw = orbit::build_intertwiner(&a, &b, tol)?;
        suite.push(CertificateRecord::from_residual(
            "orbit",
            format!("intertwiner_residual/t{trial}"),
            tw.residual,
            1e-8 * (1.0 + op_norm(&b)?),
            digest.clone(),
        ));
        suite.push(CertificateRecord::from_flag(
            "orbit",
            format!("intertwiner_invertible/t{trial}"),
            min_singular_value(&tw.g)? > tol.eq_tol && min_singular_value(&tw.h)? > tol.eq_tol,
            min_singular_value(&tw.g)?,
            tol.eq_tol,
            digest.clone(),
        ));

        // equivalence criteria agree
        let verdicts = orbit::orbit_equivalence_verdicts(&a, &b, tol)?;
        suite.push(CertificateRecord::from_flag(
            "orbit",
            format!("equivalence_criteria/t{trial}"),
            verdicts.same_orbit && verdicts.consistent(),
            if verdicts.same_orbit { 1.0 } else { 0.0 },
            1.0,
            digest.clone(),
        ));

        // polar reduction inside the orbit
        let red = orbit::polar_orbit_reduction(&a, tol)?;
        suite.push(CertificateRecord::from_residual(
            "orbit",
            format!("polar_reduction/t{trial}"),
            red.residual,
            1e-9 * (1.0 + op_norm(&a)?),
            digest.clone(),
        ));
        suite.push(CertificateRecord::from_residual(
            "orbit",
            format!("polar_reduction_inverse/t{trial}"),
            red.inverse_residual,
            1e-9,
            digest,
        ));
    }

    // signature and index invariance under random actions
    for trial in 0..cfg.trials as u64 {
        let mut rng = random::rng_for(cfg.seed, 16, trial);
        let a = trial_operator(&mut rng, cfg.max_dim, trial, 0);
        let g = random::random_invertible(a.rows(), &mut rng);
        let h = random::random_invertible(a.cols(), &mut rng);
        let moved = orbit::apply_action(&g, &h, &a, tol)?;
        let sig_a = orbit::signature(&a, tol)?;
        let sig_m = orbit::signature(&moved, tol)?;
        suite.push(CertificateRecord::from_flag(
            "orbit",
            format!("action_invariance/t{trial}"),
            sig_a == sig_m && sig_a.index() == sig_m.index(),
            sig_a.rank as f64,
            sig_m.rank as f64,
            digest_matrices(&[&a, &g, &h]),
        ));
    }

    // mismatched signatures are detected symmetrically
    for trial in 0..(cfg.trials / 10).max(5) as u64 {
        let mut rng = random::rng_for(cfg.seed, 17, trial);
        let (m, n) = shape(&mut rng, cfg.max_dim);
        let max_rank = m.min(n);
        let r1 = rng.random_range(0..=max_rank);
        let mut r2 = rng.random_range(0..=max_rank);
        if r2 == r1 {
            r2 = if r1 == max_rank { r1 - 1 } else { r1 + 1 };
        }
        let a = random::random_operator(m, n, r1, 0.3, 2.0, &mut rng);
        let b = random::random_operator(m, n, r2, 0.3, 2.0, &mut rng);
        let verdicts = orbit::orbit_equivalence_verdicts(&a, &b, tol)?;
        suite.push(CertificateRecord::from_flag(
            "orbit",
            format!("mismatch_detected/t{trial}"),
            !verdicts.same_orbit && verdicts.consistent(),
            r1 as f64,
            r2 as f64,
            digest_matrices(&[&a, &b]),
        ));
    }

    // the projector-pair map intertwines unitary actions, and the diagram
    // with the pushforward projectors commutes
    for trial in 0..(cfg.trials / 5).max(10) as u64 {
        let mut rng = random::rng_for(cfg.seed, 18, trial);
        let (m, n) = shape(&mut rng, cfg.max_dim);
        let rank = rng.random_range(1..=m.min(n));
        let a = random::random_operator(m, n, rank, 0.3, 2.0, &mut rng);
        let an = analyze(&a, tol)?;
        let u = random::random_unitary(m, &mut rng);
        let w = random::random_unitary(n, &mut rng);
        let b = &(&u * &a) * &w.adjoint();
        let pair = orbit::projector_pair(&b, tol)?;
        let expect_p = &(&u * &an.p_range) * &u.adjoint();
        let expect_q = &(&w * &an.p_corange) * &w.adjoint();
        let unitary_defect = op_norm(&(&pair.p - &expect_p))?.max(op_norm(&(&pair.q - &expect_q))?);
        suite.push(CertificateRecord::from_residual(
            "orbit",
            format!("projector_pair_unitary/t{trial}"),
            unitary_defect,
            1e-9,
            digest_matrices(&[&a, &u, &w]),
        ));

        let g = random::random_invertible(m, &mut rng);
        let h = random::random_invertible(n, &mut rng);
        let moved = orbit::apply_action(&g, &h, &a, tol)?;
        let pair = orbit::projector_pair(&moved, tol)?;
        let range = Subspace::from_orthonormal(an.range_columns(), tol)?;
        let corange = Subspace::from_orthonormal(an.corange_columns(), tol)?;
        let push_range = orbit::pushforward_projector(&g, &range, tol)?;
        let h_inv_star = h.inverse()?.adjoint();
        let push_corange = orbit::pushforward_projector(&h_inv_star, &corange, tol)?;
        let diagram_defect =
            op_norm(&(&pair.p - &push_range))?.max(op_norm(&(&pair.q - &push_corange))?);
        suite.push(CertificateRecord::from_residual(
            "orbit",
            format!("diagram_commutes/t{trial}"),
            diagram_defect,
            1e-8,
            digest_matrices(&[&a, &g, &h]),
        ));
    }
    Ok(suite)
}

// ---------------------------------------------------------------- section

fn suite_section(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut suite = SuiteReport::new("section");
    let tol = &cfg.tolerances;
    let trials = (cfg.trials * 3 / 5).max(10);
    for trial in 0..trials as u64 {
        let mut rng = random::rng_for(cfg.seed, 19, trial);
        let dim = rng.random_range(2..=cfg.max_dim);
        let sdim = rng.random_range(1..=dim);
        let s = random::random_subspace(dim, sdim, &mut rng);
        let g = random::random_invertible(dim, &mut rng);
        let push = orbit::pushforward_projector(&g, &s, tol)?;
        let oracle = s.map_through(&g, tol)?.projector();
        suite.push(CertificateRecord::from_residual(
            "section",
            format!("pushforward_formula/t{trial}"),
            op_norm(&(&push - &oracle))?,
            1e-9,
            digest_matrices(&[&g, s.basis()]),
        ));

        // the local cross section reproduces nearby orbit elements
        let (m, n) = shape(&mut rng, cfg.max_dim);
        let rank = rng.random_range(1..=m.min(n));
        let a = random::random_operator(m, n, rank, 0.4, 2.0, &mut rng);
        let case = trial % 3;
        let b = match case {
            0 => a.clone(),
            1 => a.scale_re(1.05),
            _ => {
                let g = random::random_near_identity(m, 0.02, &mut rng);
                let h = random::random_near_identity(n, 0.02, &mut rng);
                orbit::apply_action(&g, &h, &a, tol)?
            }
        };
        match orbit::local_section(&a, &b, tol) {
            Ok(tw) => {
                suite.push(CertificateRecord::from_residual(
                    "section",
                    format!("section_reproduces/t{trial}"),
                    tw.residual,
                    1e-8 * (1.0 + op_norm(&b)?),
                    digest_matrices(&[&a, &b]),
                ));
            }
            Err(Error::OutsideNeighborhood(_)) => suite.skip(),
            Err(e) => return Err(e),
        }
    }
    Ok(suite)
}

// ---------------------------------------------------------------- distance

fn suite_distance(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut suite = SuiteReport::new("distance");
    let tol = &cfg.tolerances;
    let pairs = (cfg.trials / 5).max(10);
    for trial in 0..pairs as u64 {
        let mut rng = random::rng_for(cfg.seed, 20, trial);
        let (m, n) = shape(&mut rng, cfg.max_dim);
        let max_rank = m.min(n);
        let r1 = rng.random_range(0..=max_rank);
        let mut r2 = rng.random_range(0..=max_rank);
        if r2 == r1 {
            r2 = if r1 == max_rank { r1 - 1 } else { r1 + 1 };
        }
        let a = random::random_operator(m, n, r1, 0.3, 2.0, &mut rng);
        let b = random::random_operator(m, n, r2, 0.3, 2.0, &mut rng);
        let digest = digest_matrices(&[&a, &b]);
        for (kind, label) in [(MetricKind::Range, "range"), (MetricKind::Null, "null")] {
            for eps in [0.1, 0.01] {
                let w = orbit::orbit_distance_witness(&a, &b, kind, eps, 5, &mut rng, tol)?;
                let worst_gap = w
                    .sampled_gaps
                    .iter()
                    .map(|g| (g - 1.0).abs())
                    .fold(0.0f64, f64::max);
                suite.push(CertificateRecord::from_residual(
                    "distance",
                    format!("projector_gap_{label}/t{trial}/e{eps}"),
                    worst_gap,
                    1e-8,
                    digest.clone(),
                ));
                suite.push(CertificateRecord::from_flag(
                    "distance",
                    format!("witness_window_{label}/t{trial}/e{eps}"),
                    w.lower_bound_is_one
                        && w.witness_dx >= 1.0 - 1e-8
                        && w.witness_dx <= 1.0 + eps + 1e-8,
                    w.witness_dx,
                    1.0 + eps + 1e-8,
                    digest.clone(),
                ));
            }
        }
    }
    Ok(suite)
}

// ---------------------------------------------------------------- fixed_range

fn suite_fixed_range(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut suite = SuiteReport::new("fixed_range");
    let tol = &cfg.tolerances;
    let contexts = 5usize;
    let members = (cfg.trials * 2 / 5).max(contexts * 4) / contexts;
    for ctx_index in 0..contexts as u64 {
        let mut rng = random::rng_for(cfg.seed, 21, ctx_index);
        let ambient = rng.random_range(3..=cfg.max_dim.max(3));
        let sdim = rng.random_range(1..ambient);
        let s = random::random_subspace(ambient, sdim, &mut rng);
        let ctx = FixedRangeContext::new(s);
        let domain = rng.random_range(sdim..=cfg.max_dim.max(sdim));

        // base isometry for sections
        let w = {
            let u = random::random_unitary(domain, &mut rng);
            let rows = u.columns(0, sdim).adjoint();
            ctx.s.basis().matmul(&rows)?
        };

        for trial in 0..members as u64 {
            let mut rng = random::rng_for(cfg.seed, 22 + ctx_index, trial);
            let x = random::random_operator(sdim, domain, sdim, 0.3, 2.0, &mut rng);
            let b = ctx.s.basis().matmul(&x)?;
            let digest = digest_matrices(&[&b, ctx.s.basis()]);

            suite.push(CertificateRecord::from_flag(
                "fixed_range",
                format!("membership/c{ctx_index}/t{trial}"),
                fixed_range::slice_membership(&b, &ctx, tol)?,
                0.0,
                tol.eq_tol,
                digest.clone(),
            ));

            // factor / assemble round trip
            let f = fixed_range::factor(&b, &ctx, tol)?;
            let back = fixed_range::assemble(&f.positive, &f.isometry, &ctx, tol)?;
            suite.push(CertificateRecord::from_residual(
                "fixed_range",
                format!("round_trip/c{ctx_index}/t{trial}"),
                op_norm(&(&back - &b))?,
                1e-9 * (1.0 + op_norm(&b)?),
                digest.clone(),
            ));

            // the slice metric is the plain norm
            let x2 = random::random_operator(sdim, domain, sdim, 0.3, 2.0, &mut rng);
            let b2 = ctx.s.basis().matmul(&x2)?;
            let d = metrics::metric_dx(&b, &b2, MetricKind::Range, tol)?;
            let norm = op_norm(&(&b - &b2))?;
            suite.push(CertificateRecord::from_residual(
                "fixed_range",
                format!("metric_is_norm/c{ctx_index}/t{trial}"),
                (d - norm).abs(),
                1e-12 * (1.0 + norm),
                digest.clone(),
            ));

            // actions preserve the pieces
            let block = random::random_invertible(sdim, &mut rng);
            let g = fixed_range::gs_member(&block, &ctx)?;
            let pos = random::random_psd_with_range(&ctx.s, 0.4, 2.0, &mut rng);
            let moved_pos = fixed_range::action_congruence(&g, &pos)?;
            let range_kept = crate::subspace::range_basis(&moved_pos, tol)?.gap(&ctx.s)?;
            suite.push(CertificateRecord::from_residual(
                "fixed_range",
                format!("congruence_stays/c{ctx_index}/t{trial}"),
                range_kept,
                1e-9,
                digest.clone(),
            ));
            let u = random::random_unitary(domain, &mut rng);
            let moved_iso = fixed_range::action_isometry(&u, &f.isometry)?;
            let final_kept = op_norm(&(&(&moved_iso * &moved_iso.adjoint()) - &ctx.p))?;
            suite.push(CertificateRecord::from_residual(
                "fixed_range",
                format!("isometry_stays/c{ctx_index}/t{trial}"),
                final_kept,
                1e-9,
                digest.clone(),
            ));
            let h = random::random_invertible(domain, &mut rng);
            let moved_member = &(&g * &b) * &h.inverse()?;
            suite.push(CertificateRecord::from_flag(
                "fixed_range",
                format!("slice_action_stays/c{ctx_index}/t{trial}"),
                fixed_range::slice_membership(&moved_member, &ctx, tol)?,
                0.0,
                tol.eq_tol,
                digest.clone(),
            ));

            // Thompson components with scalar certificates
            let pos2 = random::random_psd_with_range(&ctx.s, 0.2, 3.0, &mut rng);
            let verdict = fixed_range::thompson_same_component(&pos, &pos2, tol)?;
            suite.push(CertificateRecord::from_flag(
                "fixed_range",
                format!("thompson/c{ctx_index}/t{trial}"),
                verdict.same_component
                    && fixed_range::thompson_certificate_holds(&pos, &pos2, &verdict, tol)?,
                verdict.alpha.unwrap_or(f64::NAN),
                verdict.beta.unwrap_or(f64::NAN),
                digest.clone(),
            ));

            // local section around (P, W)
            let v = {
                let near = random::random_near_identity(domain, 1e-5, &mut rng);
                let rot = operator::polar_decompose(&near, tol)?.v;
                w.matmul(&rot)?
            };
            match fixed_range::pi_local_section(&pos, &v, &w, &ctx, tol) {
                Ok(sec) => {
                    suite.push(CertificateRecord::from_residual(
                        "fixed_range",
                        format!("section_positive/c{ctx_index}/t{trial}"),
                        sec.positive_residual,
                        1e-8 * (1.0 + op_norm(&pos)?),
                        digest.clone(),
                    ));
                    suite.push(CertificateRecord::from_residual(
                        "fixed_range",
                        format!("section_isometry/c{ctx_index}/t{trial}"),
                        sec.isometry_residual,
                        1e-8,
                        digest.clone(),
                    ));
                    suite.push(CertificateRecord::from_residual(
                        "fixed_range",
                        format!("section_unitarity/c{ctx_index}/t{trial}"),
                        sec.unitarity_defect,
                        1e-9,
                        digest,
                    ));
                }
                Err(Error::OutsideNeighborhood(_)) => suite.skip(),
                Err(e) => return Err(e),
            }
        }
    }
    Ok(suite)
}
