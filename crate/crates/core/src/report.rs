//! Verification reports and the full check battery.

use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{center, central_pair, Word};
use crate::braid::{invariant, markov_sweep, phase_magnitude, BraidWord};
use crate::cover::{double_cover_consistent, triple_cover_dim};
use crate::diagrams::{bratteli, cut_graph, eta, hecke_dimension};
use crate::error::Result;
use crate::group::{
    enumerate_group, formula_estimate, left_regular_determinant, signed_word_violations, DEFAULT_MAX_ELEMENTS,
};
use crate::hecke::{subalgebra_dimension, verify_conjugation_table, verify_markov, verify_relations, RelationCheck};
use crate::links::{bundled_link_table, load_link_table, LinkEntry};
use crate::scalar::Scalar;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Inconclusive,
    Fail,
}

impl Status {
    /// 0 pass, 1 fail, 3 inconclusive (2 is left to argument errors).
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Inconclusive => 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub status: Status,
}

impl Check {
    pub fn new(name: impl Into<String>, expected: impl ToString, actual: impl ToString, pass: bool) -> Self {
        Check {
            name: name.into(),
            expected: expected.to_string(),
            actual: actual.to_string(),
            status: if pass { Status::Pass } else { Status::Fail },
        }
    }

    pub fn equal<T: PartialEq + ToString>(name: impl Into<String>, expected: T, actual: T) -> Self {
        let pass = expected == actual;
        Check::new(name, expected.to_string(), actual.to_string(), pass)
    }

    fn error(name: impl Into<String>, expected: impl ToString, err: crate::Error) -> Self {
        Check::new(name, expected, format!("error: {err}"), false)
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub command: String,
    pub parameters: serde_json::Value,
    pub seed: u64,
    pub checks: Vec<Check>,
    pub wall_time_ms: u64,
}

impl VerificationReport {
    pub fn new(command: &str, parameters: serde_json::Value, seed: u64, checks: Vec<Check>, started: Instant) -> Self {
        VerificationReport {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            parameters,
            seed,
            checks,
            wall_time_ms: started.elapsed().as_millis() as u64,
        }
    }

    /// Worst status over all checks.
    pub fn status(&self) -> Status {
        self.checks.iter().map(|c| c.status).max().unwrap_or(Status::Pass)
    }

    pub fn to_json(&self, include_timing: bool) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if !include_timing {
            v.as_object_mut().expect("object").remove("wall_time_ms");
        }
        serde_json::to_string_pretty(&v).expect("report serializes")
    }

    pub fn summary(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Inconclusive => "INCONCLUSIVE",
            };
            out.push_str(&format!("[{tag}] {}: expected {}, got {}\n", c.name, c.expected, c.actual));
        }
        let passed = self.checks.iter().filter(|c| c.passed()).count();
        out.push_str(&format!(
            "{passed}/{} checks passed; overall {:?} in {} ms\n",
            self.checks.len(),
            self.status(),
            self.wall_time_ms
        ));
        out
    }
}

fn relation_summary(name: String, checks: Result<Vec<RelationCheck>>) -> Check {
    match checks {
        Err(e) => Check::error(name, "all instances hold", e),
        Ok(checks) => {
            let failed: Vec<String> =
                checks.iter().filter(|c| !c.pass).map(|c| format!("{}{:?}", c.relation, c.indices)).collect();
            let actual = if failed.is_empty() {
                format!("{} of {} hold", checks.len(), checks.len())
            } else {
                format!("failing: {}", failed.join(", "))
            };
            Check::new(name, format!("{} of {} hold", checks.len(), checks.len()), actual, failed.is_empty())
        }
    }
}

pub fn relation_check(n: usize) -> Check {
    relation_summary(format!("relations n={n}"), verify_relations(n))
}

pub fn conjugation_table_check(n: usize) -> Check {
    relation_summary(format!("conjugation table n={n}"), verify_conjugation_table(n))
}

pub fn markov_trace_check(n: usize, seed: u64) -> Check {
    relation_summary(format!("markov trace n={n}"), verify_markov(n, seed))
}

/// s_i³ = −1 for every i.
pub fn cube_check(n: usize) -> Check {
    let checks = verify_relations(n).map(|cs| cs.into_iter().filter(|c| c.relation == "cube").collect());
    relation_summary(format!("cube n={n}"), checks)
}

pub fn eta_check() -> Check {
    match eta(3, 6) {
        Ok(v) => Check::equal("eta(3,6)", Scalar::ratio(1, 2), v),
        Err(e) => Check::error("eta(3,6)", "1/2", e),
    }
}

/// Span-closure dimension against the path-count dimension.
pub fn dimension_check(n: usize) -> Check {
    let name = format!("dimension n={n}");
    match (hecke_dimension(3, 6, n), subalgebra_dimension(n)) {
        (Ok(paths), Ok(span)) => Check::equal(name, paths, span as u128),
        (Err(e), _) | (_, Err(e)) => Check::error(name, "path count", e),
    }
}

/// dim Z(Q_n) is 4 when 3 | n and 1 otherwise, with basis {1, U, V, UV}.
pub fn center_check(n: usize) -> Check {
    let name = format!("center n={n}");
    let mut expected: Vec<Word> = if n.is_multiple_of(3) {
        let (u, v) = central_pair(n);
        let uv = u.mul(&v).expect("same n").1;
        vec![Word::identity(n), u, v, uv]
    } else {
        vec![Word::identity(n)]
    };
    expected.sort();
    let show = |ws: &[Word]| format!("{{{}}}", ws.iter().map(Word::to_string).collect::<Vec<_>>().join(", "));
    match center(n) {
        Ok(mut basis) => {
            basis.sort();
            Check::new(name, show(&expected), show(&basis), basis == expected)
        }
        Err(e) => Check::error(name, show(&expected), e),
    }
}

pub fn signed_word_check(n: usize) -> Check {
    let name = format!("signed-word conjugates n={n}");
    match signed_word_violations(n) {
        Ok(v) => Check::equal(name, 0, v),
        Err(e) => Check::error(name, 0, e),
    }
}

/// Group enumeration: finiteness, relations in the image, and for n = 5 the
/// projective order 25920.
pub fn group_checks(n: usize, max_elements: usize) -> Vec<Check> {
    let report = match enumerate_group(n, max_elements) {
        Ok(r) => r,
        Err(e) => return vec![Check::error(format!("group n={n}"), "finite image", e)],
    };
    let mut out = vec![Check::new(
        format!("image relations n={n}"),
        "braid relations and cubes trivial",
        format!("braid relations {}, cubes {}", report.braid_relations_hold, report.generator_cubes_trivial),
        report.braid_relations_hold && report.generator_cubes_trivial,
    )];
    let mut finite = Check::new(
        format!("group n={n}"),
        "finite image",
        match report.image_order {
            Some(o) => format!("image order {o}, projective order {}", report.projective_order.unwrap_or(0)),
            None => format!("cap of {max_elements} reached after {} elements", report.elements_visited),
        },
        report.conclusive,
    );
    if !report.conclusive {
        finite.status = Status::Inconclusive;
    }
    out.push(finite);
    if n == 5 {
        let expected = formula_estimate(5).expect("fits") as u64;
        out.push(match report.projective_order {
            Some(p) if p == expected => Check::equal("projective order n=5", expected, p),
            Some(p) => {
                let (big, small) = if p > expected { (p, expected) } else { (expected, p) };
                let note = if big % small == 0 { format!(" (off by factor {})", big / small) } else { String::new() };
                Check::new("projective order n=5", expected, format!("{p}{note}"), false)
            }
            None => Check {
                name: "projective order n=5".into(),
                expected: expected.to_string(),
                actual: "not enumerated".into(),
                status: Status::Inconclusive,
            },
        });
    }
    out
}

/// Fixed anchor values of the invariant.
pub fn invariant_anchor_checks() -> Vec<Check> {
    let anchors: [(&str, usize, &[i32], Scalar); 4] = [
        ("unknot B1", 1, &[], Scalar::one()),
        ("unknot B2", 2, &[1], Scalar::one()),
        ("trefoil", 2, &[1, 1, 1], Scalar::from(-2)),
        ("hopf", 2, &[1, 1], Scalar::from(-1)),
    ];
    anchors
        .iter()
        .map(|(name, n, word, want)| {
            let name = format!("invariant {name}");
            match BraidWord::new(*n, word.to_vec()).and_then(|b| invariant(&b)) {
                Ok(v) => Check::equal(name, want.clone(), v),
                Err(e) => Check::error(name, want, e),
            }
        })
        .collect()
}

/// |I(β)|² = 2^dim H₁(Σ₃; Z₂) and I² = ±|I|² for one table entry.
pub fn link_check(entry: &LinkEntry) -> Check {
    let name = format!("link {}", entry.name);
    let value = match entry.braid().and_then(|b| invariant(&b)) {
        Ok(v) => v,
        Err(e) => return Check::error(name, "invariant", e),
    };
    let shape = phase_magnitude(&value);
    match (&entry.seifert, shape) {
        (_, None) => Check::new(name, "I^2 = ±2^k", format!("I = {value}"), false),
        (None, Some(pm)) => Check::new(name, "I^2 = ±2^k", format!("I = {value}, |I|^2 = 2^{}", pm.log2_norm_sq), true),
        (Some(v), Some(pm)) => {
            let dim = triple_cover_dim(v);
            let consistent = double_cover_consistent(v);
            Check::new(
                name,
                format!("|I|^2 = 2^{dim}"),
                format!(
                    "I = {value}, |I|^2 = 2^{}{}",
                    pm.log2_norm_sq,
                    if consistent { "" } else { ", double cover parity mismatch" }
                ),
                pm.log2_norm_sq as usize == dim && consistent,
            )
        }
    }
}

pub fn markov_sweep_check(count: usize, max_strands: usize, max_len: usize, seed: u64) -> Check {
    let name = format!("markov moves ({count} braids)");
    match markov_sweep(count, max_strands, max_len, seed) {
        Ok(s) => Check::new(
            name,
            "0 changed",
            if s.failures.is_empty() {
                format!("0 changed over {} moves", s.moves)
            } else {
                format!("{} changed: {}", s.failures.len(), s.failures.join("; "))
            },
            s.failures.is_empty(),
        ),
        Err(e) => Check::error(name, "0 changed", e),
    }
}

pub fn bratteli_checks() -> Vec<Check> {
    let levels = match bratteli(3, 6, 7, true) {
        Ok(l) => l,
        Err(e) => return vec![Check::error("bratteli", "levels", e)],
    };
    let counts: Vec<String> = levels[1..].iter().map(|l| l.nodes.len().to_string()).collect();
    let graph = cut_graph(&levels, 6).map(|g| g.dynkin_type());
    vec![
        Check::equal("bratteli node counts", "1,2,3,3,3,4,3".to_string(), counts.join(",")),
        match graph {
            Ok(t) => Check::equal(
                "bratteli cut (6,7)",
                "E6^(1)".to_string(),
                t.unwrap_or_else(|| "not a recognised Dynkin diagram".into()),
            ),
            Err(e) => Check::error("bratteli cut (6,7)", "E6^(1)", e),
        },
    ]
}

pub fn determinant_checks(n: usize) -> Vec<Check> {
    (1..n)
        .map(|i| {
            let name = format!("left-regular det n={n} i={i}");
            match left_regular_determinant(i, n) {
                Ok(d) => Check::new(name, "det^6 = 1", format!("det = {d}"), d.pow(6).is_one()),
                Err(e) => Check::error(name, "det^6 = 1", e),
            }
        })
        .collect()
}

/// Parameters of [`run_suite`]; every field has a default.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteConfig {
    pub seed: u64,
    pub relation_n: Vec<usize>,
    pub cube_n: Vec<usize>,
    pub markov_n: Vec<usize>,
    pub dimension_n: Vec<usize>,
    pub center_n: Vec<usize>,
    pub group_n: Vec<usize>,
    pub max_elements: usize,
    pub determinant_n: Vec<usize>,
    /// External link table; the bundled one is used when absent.
    pub link_table: Option<PathBuf>,
    pub markov_braids: usize,
    pub markov_max_strands: usize,
    pub markov_max_len: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 7,
            relation_n: (3..=6).collect(),
            cube_n: (2..=6).collect(),
            markov_n: (3..=5).collect(),
            dimension_n: (2..=5).collect(),
            center_n: vec![2, 3, 4, 5, 6, 7],
            group_n: (2..=5).collect(),
            max_elements: DEFAULT_MAX_ELEMENTS,
            determinant_n: vec![2, 3],
            link_table: None,
            markov_braids: 500,
            markov_max_strands: 5,
            markov_max_len: 12,
        }
    }
}

type Job<'a> = Box<dyn Fn() -> Vec<Check> + Send + Sync + 'a>;

/// Runs every check. Only an unreadable link table is an error; everything
/// else becomes a report entry.
pub fn run_suite(config: &SuiteConfig) -> Result<VerificationReport> {
    let started = Instant::now();
    let links = match &config.link_table {
        Some(path) => load_link_table(path)?,
        None => bundled_link_table(),
    };
    let seed = config.seed;
    let mut jobs: Vec<Job> = Vec::new();
    for &n in &config.relation_n {
        jobs.push(Box::new(move || vec![relation_check(n), conjugation_table_check(n)]));
    }
    for &n in &config.cube_n {
        jobs.push(Box::new(move || vec![cube_check(n)]));
    }
    for &n in &config.markov_n {
        jobs.push(Box::new(move || vec![markov_trace_check(n, seed)]));
    }
    jobs.push(Box::new(|| vec![eta_check()]));
    for &n in &config.dimension_n {
        jobs.push(Box::new(move || vec![dimension_check(n)]));
    }
    for &n in &config.center_n {
        jobs.push(Box::new(move || vec![center_check(n)]));
    }
    for &n in &config.group_n {
        let cap = config.max_elements;
        jobs.push(Box::new(move || {
            let mut out = Vec::new();
            if n <= crate::group::MAX_PERMUTATION_STRANDS {
                out.push(signed_word_check(n));
            }
            out.extend(group_checks(n, cap));
            out
        }));
    }
    jobs.push(Box::new(invariant_anchor_checks));
    for entry in &links {
        jobs.push(Box::new(move || vec![link_check(entry)]));
    }
    let (count, strands, len) = (config.markov_braids, config.markov_max_strands, config.markov_max_len);
    jobs.push(Box::new(move || vec![markov_sweep_check(count, strands, len, seed)]));
    jobs.push(Box::new(bratteli_checks));
    for &n in &config.determinant_n {
        jobs.push(Box::new(move || determinant_checks(n)));
    }
    let checks = jobs.par_iter().map(|job| job()).collect::<Vec<_>>().into_iter().flatten().collect();
    let parameters = serde_json::to_value(config).expect("config serializes");
    Ok(VerificationReport::new("suite", parameters, seed, checks, started))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_ordering() {
        let mk = |s| Check { name: "x".into(), expected: String::new(), actual: String::new(), status: s };
        let r = VerificationReport {
            schema_version: SCHEMA_VERSION,
            command: "t".into(),
            parameters: serde_json::Value::Null,
            seed: 0,
            checks: vec![mk(Status::Pass), mk(Status::Inconclusive)],
            wall_time_ms: 3,
        };
        assert_eq!(r.status(), Status::Inconclusive);
        assert_eq!(r.status().exit_code(), 3);
        assert!(!r.to_json(false).contains("wall_time_ms"));
        assert!(r.to_json(true).contains("wall_time_ms"));
    }

    #[test]
    fn small_suite_is_deterministic() {
        let config = SuiteConfig {
            relation_n: vec![3],
            cube_n: vec![2],
            markov_n: vec![3],
            dimension_n: vec![3],
            center_n: vec![3, 4],
            group_n: vec![3],
            determinant_n: vec![2],
            markov_braids: 20,
            markov_max_strands: 3,
            ..SuiteConfig::default()
        };
        let a = run_suite(&config).unwrap();
        let b = run_suite(&config).unwrap();
        assert_eq!(a.status(), Status::Pass, "{}", a.summary());
        assert_eq!(a.to_json(false), b.to_json(false));
    }

    #[test]
    fn capped_group_is_inconclusive() {
        let checks = group_checks(7, 1000);
        assert!(checks.iter().any(|c| c.status == Status::Inconclusive));
        assert!(checks.iter().all(|c| c.status != Status::Fail));
    }

    #[test]
    fn config_rejects_unknown_fields() {
        assert!(serde_json::from_str::<SuiteConfig>(r#"{"sede": 1}"#).is_err());
        let c: SuiteConfig = serde_json::from_str(r#"{"seed": 9}"#).unwrap();
        assert_eq!(c.seed, 9);
        assert_eq!(c.group_n, vec![2, 3, 4, 5]);
    }
}
