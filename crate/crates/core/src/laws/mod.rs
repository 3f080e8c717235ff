//! Runnable checks of the growth-rate theorems on concrete instances.
//!
//! Each law takes an [`InstanceSpec`] and returns a [`LawCheck`] with the
//! measured quantities. Instances that do not meet a law's hypotheses
//! produce `Inapplicable`, never `Fail`.

mod catalog;
mod checks;

pub use catalog::{default_catalog, DEFAULT_SEED};

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::format::fmt_real;
use crate::oracle::BfsOptions;
use crate::par::Execution;
use crate::spec::{CheckSpec, InstanceSpec};

/// Law identifiers in report order.
pub const LAW_IDS: [&str; 17] = [
    "thm2.2.1-fekete",
    "thm2.2.2-generator-bound",
    "thm2.2.3-power",
    "lemma2.5-hr-subgroup",
    "thm3.1-finite-index",
    "lemma3.2-quotient",
    "thm3.3-extension",
    "cor3.4-complement",
    "thm4.1-abelian",
    "lemma4.3-lcs",
    "thm4.4-nilpotent",
    "thm4.4-counterexample",
    "lemma5.1-direct",
    "lemma5.2-free",
    "thm5.4-semidirect",
    "lemma5.6-polycyclic",
    "lemma5.8-distortion",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Inapplicable,
}

impl Verdict {
    fn tag(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Inapplicable => "N/A ",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LawCheck {
    pub id: String,
    pub instance: String,
    #[serde(serialize_with = "ordered")]
    pub values: Vec<(String, f64)>,
    pub tolerance: f64,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

fn ordered<S: Serializer>(values: &[(String, f64)], s: S) -> std::result::Result<S::Ok, S::Error> {
    let mut map = s.serialize_map(Some(values.len()))?;
    for (k, v) in values {
        map.serialize_entry(k, v)?;
    }
    map.end()
}

impl LawCheck {
    pub fn value(&self, name: &str) -> Option<f64> {
        self.values.iter().find(|(k, _)| k == name).map(|(_, v)| *v)
    }

    pub fn to_text(&self) -> String {
        let values: Vec<String> = self.values.iter().map(|(k, v)| format!("{k}={}", fmt_real(*v))).collect();
        let mut line = format!(
            "{} {:<26} {} | {} | tol={}",
            self.verdict.tag(),
            self.id,
            self.instance,
            values.join(" "),
            fmt_real(self.tolerance)
        );
        if let Some(n) = &self.note {
            line.push_str(&format!(" | {n}"));
        }
        line
    }
}

/// Settings shared by every check in a run.
#[derive(Clone, Copy, Debug)]
pub struct LawConfig {
    pub seed: u64,
    pub execution: Execution,
    pub bfs: BfsOptions,
}

impl Default for LawConfig {
    fn default() -> Self {
        LawConfig { seed: DEFAULT_SEED, execution: Execution::default(), bfs: BfsOptions::default() }
    }
}

pub fn is_known(id: &str) -> bool {
    LAW_IDS.contains(&id)
}

/// Runs one law on one instance.
///
/// Unknown ids and malformed instances are errors. Computation failures are
/// reported as `Fail` with the error in the note.
pub fn run_law(id: &str, spec: &InstanceSpec, config: &LawConfig) -> Result<LawCheck> {
    if !is_known(id) {
        return Err(Error::InvalidArgument(format!("unknown law id {id:?}")));
    }
    let instance = spec.build()?;
    let label = instance.label.clone();
    Ok(checks::run(id, &instance, config).unwrap_or_else(|e| LawCheck {
        id: id.to_string(),
        instance: label,
        values: Vec::new(),
        tolerance: 0.0,
        verdict: Verdict::Fail,
        note: Some(format!("error: {e}")),
    }))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub pass: usize,
    pub fail: usize,
    pub inapplicable: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub seed: u64,
    pub summary: Summary,
    pub checks: Vec<LawCheck>,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.summary.fail == 0
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            s.push_str(&c.to_text());
            s.push('\n');
        }
        let Summary { total, pass, fail, inapplicable } = self.summary;
        s.push_str(&format!(
            "seed {}: {total} checks, {pass} pass, {fail} fail, {inapplicable} inapplicable\n",
            self.seed
        ));
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

/// Runs every check, in parallel when configured, and orders the report by law id.
pub fn run_suite(checks: &[CheckSpec], config: &LawConfig) -> Result<Report> {
    for (i, c) in checks.iter().enumerate() {
        if !is_known(&c.law) {
            return Err(Error::Parse(format!("checks[{i}].law: unknown law id {:?}", c.law)));
        }
        c.instance.build().map_err(|e| Error::Parse(format!("checks[{i}].instance.{e}")))?;
    }
    let results: Vec<Result<LawCheck>> = config.execution.map(checks, |c| run_law(&c.law, &c.instance, config));
    let mut out = results.into_iter().collect::<Result<Vec<_>>>()?;
    out.sort_by_key(|c| LAW_IDS.iter().position(|id| *id == c.id));
    let mut summary = Summary { total: out.len(), ..Summary::default() };
    for c in &out {
        match c.verdict {
            Verdict::Pass => summary.pass += 1,
            Verdict::Fail => summary.fail += 1,
            Verdict::Inapplicable => summary.inapplicable += 1,
        }
    }
    Ok(Report { seed: config.seed, summary, checks: out })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::{small_matrix, EndoSpec, GroupSpec, SubgroupSpec};

    fn example() -> InstanceSpec {
        InstanceSpec::new(
            GroupSpec::FreeAbelian { rank: 2 },
            EndoSpec::Matrix { rows: small_matrix(&[vec![0, 2], vec![1, 0]]) },
        )
    }

    #[test]
    fn abelian_example_passes() {
        let c = run_law("thm4.1-abelian", &example(), &LawConfig::default()).unwrap();
        assert_eq!(c.verdict, Verdict::Pass, "{}", c.to_text());
        assert!((c.value("exact").unwrap() - 2f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn non_invariant_subgroup_is_inapplicable() {
        let spec = example().with_subgroup(SubgroupSpec::Sublattice { basis: small_matrix(&[vec![1], vec![0]]) });
        let c = run_law("thm3.3-extension", &spec, &LawConfig::default()).unwrap();
        assert_eq!(c.verdict, Verdict::Inapplicable, "{}", c.to_text());
    }

    #[test]
    fn distorted_complement_is_inapplicable() {
        let spec = InstanceSpec::new(
            GroupSpec::Heisenberg { generators: Default::default() },
            EndoSpec::Heisenberg { lambda: 2.into(), gamma: 2.into() },
        )
        .with_subgroup(SubgroupSpec::LowerCentral { j: 2 });
        let c = run_law("cor3.4-complement", &spec, &LawConfig::default()).unwrap();
        assert_eq!(c.verdict, Verdict::Inapplicable, "{}", c.to_text());
    }

    #[test]
    fn empty_suite_and_unknown_ids() {
        let r = run_suite(&[], &LawConfig::default()).unwrap();
        assert_eq!(r.summary, Summary::default());
        assert!(r.all_pass());
        assert!(run_law("thm9.9-nope", &example(), &LawConfig::default()).is_err());
        let bad = [CheckSpec { law: "nope".into(), instance: example() }];
        assert!(matches!(run_suite(&bad, &LawConfig::default()), Err(Error::Parse(m)) if m.starts_with("checks[0].law")));
    }

    #[test]
    fn report_is_ordered_by_law() {
        let checks = [
            CheckSpec { law: "thm4.1-abelian".into(), instance: example() },
            CheckSpec { law: "thm2.2.1-fekete".into(), instance: example() },
        ];
        let r = run_suite(&checks, &LawConfig::default()).unwrap();
        assert_eq!(r.checks[0].id, "thm2.2.1-fekete");
        assert_eq!(r.summary.pass, 2);
        let json: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(json["checks"][1]["verdict"], "pass");
    }

    #[test]
    fn catalog_covers_every_law() {
        let catalog = default_catalog(DEFAULT_SEED);
        for id in LAW_IDS {
            assert!(catalog.iter().any(|c| c.law == id), "{id}");
        }
        assert_eq!(catalog, default_catalog(DEFAULT_SEED));
    }
}
