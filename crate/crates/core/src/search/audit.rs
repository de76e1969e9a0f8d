use serde::Serialize;

use crate::constructions::{catalog, color_via_projection, ConstructionError};
use crate::hypergraph::Instance;
use crate::io::document::{to_document, Metadata};
use crate::lp::chain_report_from;
use crate::rational::{self, int, Rational};
use crate::search::{generate_intersecting, generate_random};
use crate::solvers::{
    chromatic_number_with, covering_number_with, is_proper, matching_number_with, Limits,
    SolveError,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckKind {
    Theorem,
    Conjecture,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub kind: CheckKind,
    pub expected: String,
    pub observed: String,
    pub status: CheckStatus,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Invariants {
    pub vertices: usize,
    pub edges: usize,
    pub r: Option<i64>,
    pub intersecting: bool,
    pub nu: usize,
    pub tau: usize,
    #[serde(serialize_with = "rational::serialize")]
    pub nu_star: Rational,
    #[serde(serialize_with = "rational::serialize")]
    pub tau_star: Rational,
    pub chi: Option<usize>,
    pub max_degree: usize,
}

/// Everything needed to re-check a failing audit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub document: serde_json::Value,
    pub cover: Vec<usize>,
    pub matching: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditReport {
    pub instance: Option<String>,
    pub invariants: Invariants,
    pub checks: Vec<Check>,
    pub witness: Option<Witness>,
}

impl AuditReport {
    fn failures(&self, kind: CheckKind) -> impl Iterator<Item = &Check> {
        self.checks
            .iter()
            .filter(move |c| c.kind == kind && c.status == CheckStatus::Fail)
    }

    pub fn theorem_failures(&self) -> Vec<&Check> {
        self.failures(CheckKind::Theorem).collect()
    }

    pub fn conjecture_failures(&self) -> Vec<&Check> {
        self.failures(CheckKind::Conjecture).collect()
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct AuditOptions {
    /// Also compute the chromatic number (exact, can be slow).
    pub chromatic: bool,
    pub limits: Limits,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AuditError {
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
}

struct Checks(Vec<Check>);

impl Checks {
    fn push(
        &mut self,
        name: &'static str,
        kind: CheckKind,
        expected: String,
        observed: String,
        ok: bool,
    ) {
        let status = if ok {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        };
        self.0.push(Check {
            name,
            kind,
            expected,
            observed,
            status,
        });
    }

    fn skip(&mut self, name: &'static str, kind: CheckKind, expected: String, reason: &str) {
        self.0.push(Check {
            name,
            kind,
            expected,
            observed: reason.to_string(),
            status: CheckStatus::Skipped,
        });
    }
}

/// Colors needed for any segment hypergraph with segments of `r` points.
pub fn color_bound(r: i64) -> usize {
    match r {
        2 => 4,
        3 => 3,
        _ => 2,
    }
}

pub fn audit(instance: &Instance, name: Option<&str>) -> Result<AuditReport, AuditError> {
    audit_with(instance, name, AuditOptions::default())
}

/// Evaluate every bound that applies to the instance. Conjecture failures
/// are results, not errors.
pub fn audit_with(
    instance: &Instance,
    name: Option<&str>,
    options: AuditOptions,
) -> Result<AuditReport, AuditError> {
    use CheckKind::{Conjecture, Theorem};

    let g = instance.generic();
    let segment = instance.as_segment();
    let r = instance.uniformity();
    let matching = matching_number_with(g, options.limits)?;
    let cover = covering_number_with(g, options.limits)?;
    let (nu, tau) = (matching.size(), cover.size());
    let chi = if options.chromatic && !g.edges().iter().any(|e| e.len() == 1) {
        Some(chromatic_number_with(g, options.limits)?.num_colors)
    } else {
        None
    };
    let intersecting = g.num_edges() > 0 && g.is_intersecting();
    let n = g.num_vertices();
    let mut checks = Checks(Vec::new());

    let chain = chain_report_from(g, matching.clone(), cover.clone());
    let (nu_star, tau_star) = match &chain {
        Ok(c) => (c.nu_star().clone(), c.tau_star().clone()),
        Err(_) => (rational::zero(), rational::zero()),
    };
    checks.push(
        "lp-chain",
        Theorem,
        "nu <= nu* = tau* <= tau, complementary slackness".into(),
        match &chain {
            Ok(c) => format!(
                "{nu} <= {} = {} <= {tau}, slackness holds",
                rational::format(c.nu_star()),
                rational::format(c.tau_star())
            ),
            Err(e) => e.to_string(),
        },
        chain.is_ok(),
    );

    match r {
        Some(r) => checks.push(
            "trivial-bound",
            Theorem,
            format!("tau <= {r} * nu = {}", r as usize * nu),
            format!("tau = {tau}"),
            tau <= r as usize * nu,
        ),
        None => checks.skip(
            "trivial-bound",
            Theorem,
            "tau <= r * nu".into(),
            "edges have different sizes",
        ),
    }

    if let Some(h) = segment {
        let r = h.r();
        let bound = color_bound(r);
        let k = r.min(4);
        let projected = color_via_projection(h, k)?;
        let proper = is_proper(g, &projected)?;
        checks.push(
            "projection-coloring",
            Theorem,
            format!("pulling back the Z_{k} coloring is proper"),
            format!("{} colors, proper = {proper}", projected.num_colors),
            proper,
        );
        match chi {
            Some(chi) => checks.push(
                "chromatic-bound",
                Theorem,
                format!("chi <= {bound}"),
                format!("chi = {chi}"),
                chi <= bound,
            ),
            None => checks.skip(
                "chromatic-bound",
                Theorem,
                format!("chi <= {bound}"),
                "chromatic number not computed",
            ),
        }
        checks.push(
            "cover-fraction",
            Theorem,
            format!(
                "tau <= {}/{} |V| = {}",
                bound - 1,
                bound,
                rational::format(&(int(((bound - 1) * n) as i64) / int(bound as i64)))
            ),
            format!("tau = {tau}"),
            tau * bound <= (bound - 1) * n,
        );

        if intersecting && r >= 3 {
            let isolated = h.isolated_vertices();
            checks.push(
                "isolated-vertex",
                Theorem,
                "an intersecting instance has a vertex on exactly one edge".into(),
                format!("{} isolated vertices", isolated.len()),
                !isolated.is_empty(),
            );
            checks.push(
                "intersecting-cover",
                Theorem,
                format!("tau <= r - 1 = {}", r - 1),
                format!("tau = {tau}"),
                tau as i64 <= r - 1,
            );
        } else {
            let reason = if r < 3 { "r < 3" } else { "not intersecting" };
            checks.skip("isolated-vertex", Theorem, "isolated vertex".into(), reason);
            checks.skip("intersecting-cover", Theorem, "tau <= r - 1".into(), reason);
        }

        if intersecting && r == 5 {
            checks.push(
                "r5-intersecting-cover",
                Theorem,
                "tau <= 3".into(),
                format!("tau = {tau}"),
                tau <= 3,
            );
            if let Some(t) = h.find_triangle() {
                checks.push(
                    "r5-triangle-edges",
                    Theorem,
                    "at most 6 edges when a triangle is present".into(),
                    format!("{} edges, triangle {t:?}", h.num_edges()),
                    h.num_edges() <= 6,
                );
                checks.push(
                    "r5-triangle-degree",
                    Theorem,
                    "max degree <= 5 when a triangle is present".into(),
                    format!("max degree {}", h.max_degree()),
                    h.max_degree() <= 5,
                );
            }
        }

        if r >= 3 {
            let rm1 = int(r - 1);
            checks.push(
                "fractional-cover-bound",
                Theorem,
                format!("tau* <= (r - 1) nu = {}", (r - 1) as usize * nu),
                format!("tau* = {}", rational::format(&tau_star)),
                tau_star <= &rm1 * int(nu as i64),
            );
            checks.push(
                "fractional-matching-bound",
                Theorem,
                format!(
                    "tau <= (r - 1) nu* = {}",
                    rational::format(&(&rm1 * &nu_star))
                ),
                format!("tau = {tau}"),
                int(tau as i64) <= &rm1 * &nu_star,
            );
            checks.push(
                "tau-vs-nu",
                Conjecture,
                format!("tau <= (r - 1) nu = {}", (r - 1) as usize * nu),
                format!("tau = {tau}"),
                tau <= (r - 1) as usize * nu,
            );
        } else {
            checks.skip(
                "tau-vs-nu",
                Conjecture,
                "tau <= (r - 1) nu".into(),
                "does not hold for r = 2",
            );
        }

        let half = ((r + 1) / 2) as usize;
        if intersecting && r >= 5 {
            checks.push(
                "intersecting-half",
                Conjecture,
                format!("tau <= ceil(r / 2) = {half}"),
                format!("tau = {tau}"),
                tau <= half,
            );
        } else {
            let reason = if r < 5 { "r < 5" } else { "not intersecting" };
            checks.skip(
                "intersecting-half",
                Conjecture,
                format!("tau <= ceil(r / 2) = {half}"),
                reason,
            );
        }
    }

    let invariants = Invariants {
        vertices: n,
        edges: g.num_edges(),
        r,
        intersecting,
        nu,
        tau,
        nu_star,
        tau_star,
        chi,
        max_degree: g.max_degree(),
    };
    let failed = checks.0.iter().any(|c| c.status == CheckStatus::Fail);
    let witness = failed.then(|| {
        let meta = Metadata {
            name: name.map(str::to_string),
            ..Default::default()
        };
        Witness {
            document: serde_json::to_value(to_document(instance, Some(meta)))
                .expect("documents serialize"),
            cover: cover.vertices.clone(),
            matching: matching.edges.clone(),
        }
    });
    Ok(AuditReport {
        instance: name.map(str::to_string),
        invariants,
        checks: checks.0,
        witness,
    })
}

/// Named instances for a verification sweep: the catalog plus `per_r`
/// random and `per_r` intersecting instances for each `r` in 3..=5.
pub fn suite_instances(per_r: u64) -> Result<Vec<(String, Instance)>, AuditError> {
    let mut out = catalog()?;
    for r in 3..=5 {
        for seed in 0..per_r {
            let random = generate_random(r, 6, 3 * r, seed).expect("valid generator arguments");
            out.push((format!("random-r{r}-s{seed}"), random.hypergraph.into()));
            let inter = generate_intersecting(r, r as usize + 1, 3 * r, seed)
                .expect("valid generator arguments");
            out.push((
                format!("intersecting-r{r}-s{seed}"),
                inter.hypergraph.into(),
            ));
        }
    }
    Ok(out)
}
