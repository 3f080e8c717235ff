//! Subcommand implementations behind the `endogrow` binary.
//!
//! Every command renders its whole output into a string before anything is
//! written, so a failed run never leaves partial output behind.

use std::path::Path;

use serde_json::{json, Value};

use crate::error::Error;
use crate::format::fmt_real;
use crate::growth::{
    distortion_certificate, distortion_rate, gr_exact_abelian, has_exact_path, km_table, GrowthEstimate, KmOptions,
};
use crate::laws::{default_catalog, run_suite, LawConfig, DEFAULT_SEED};
use crate::oracle::{distortion_profile, enumerate_ball, BfsOptions, DistortionTarget};
use crate::par::Execution;
use crate::spec::{parse_instance, parse_suite, semidirect_descriptor, Instance, InstanceSpec, LengthModeSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_LAW_FAILURE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_COMPUTATION: i32 = 3;

pub const DEFAULT_MAX_M: usize = 20;
pub const DEFAULT_RADIUS: u32 = 8;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Tsv,
    Json,
}

/// What a command printed and how it exits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, stderr: String::new(), code: EXIT_OK }
    }

    fn input(e: impl std::fmt::Display) -> Self {
        Outcome { stdout: String::new(), stderr: format!("error: {e}\n"), code: EXIT_INPUT }
    }

    fn computation(e: impl std::fmt::Display) -> Self {
        Outcome { stdout: String::new(), stderr: format!("error: {e}\n"), code: EXIT_COMPUTATION }
    }
}

/// Flags shared by the instance commands; `None` keeps the spec's value.
#[derive(Clone, Copy, Debug, Default)]
pub struct Flags {
    pub max_m: Option<usize>,
    pub radius: Option<u32>,
    pub length_mode: Option<LengthModeSpec>,
    pub format: Format,
    pub execution: Execution,
}

fn read_source(path: &Path) -> Result<String, String> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s).map_err(|e| format!("stdin: {e}"))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
    }
}

/// Parses and builds an instance spec, applying flag overrides.
pub fn load_instance(text: &str, flags: &Flags) -> crate::Result<Instance> {
    let mut spec: InstanceSpec = parse_instance(text)?;
    if let Some(m) = flags.max_m {
        spec.options.max_m = Some(m);
    }
    if let Some(r) = flags.radius {
        spec.options.radius = Some(r);
    }
    if let Some(mode) = flags.length_mode {
        spec.options.length_mode = Some(mode);
    }
    spec.build()
}

fn with_instance(path: &Path, flags: &Flags, f: impl FnOnce(&Instance) -> crate::Result<String>) -> Outcome {
    let text = match read_source(path) {
        Ok(t) => t,
        Err(e) => return Outcome::input(e),
    };
    let inst = match load_instance(&text, flags) {
        Ok(i) => i,
        Err(e) => return Outcome::input(e),
    };
    match f(&inst) {
        Ok(out) => Outcome::ok(out),
        Err(e @ Error::Parse(_)) => Outcome::input(e),
        Err(e) => Outcome::computation(e),
    }
}

fn bfs(flags: &Flags) -> BfsOptions {
    BfsOptions { execution: flags.execution, ..BfsOptions::default() }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn big_json(x: &num_bigint::BigInt) -> Value {
    use num_traits::ToPrimitive;
    match x.to_i64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

fn estimate_json(label: &str, t: &GrowthEstimate) -> Value {
    json!({
        "instance": label,
        "method": t.method.to_string(),
        "status": t.status.to_string(),
        "k": t.k.iter().map(big_json).collect::<Vec<_>>(),
        "roots": t.roots,
        "inf_bound": t.inf_bound,
        "ratio_estimate": t.ratio_estimate,
    })
}

/// `K_m` table and growth estimate.
pub fn cmd_estimate(path: &Path, flags: &Flags) -> Outcome {
    with_instance(path, flags, |inst| {
        let max_m = inst.options.max_m.unwrap_or(DEFAULT_MAX_M);
        let t = km_table(&inst.endo, &inst.group, max_m, KmOptions { execution: flags.execution, bfs: Some(bfs(flags)) })?;
        Ok(match flags.format {
            Format::Json => pretty(&estimate_json(&inst.label, &t)),
            Format::Tsv => format!(
                "# instance\t{}\n# method\t{}\n# status\t{}\n# ratio_estimate\t{}\n{}",
                inst.label,
                t.method,
                t.status,
                fmt_real(t.ratio_estimate),
                t.to_tsv()
            ),
        })
    })
}

/// Exact growth rate through the spectral radius, for abelian kinds.
pub fn cmd_spectral(path: &Path, flags: &Flags) -> Outcome {
    with_instance(path, flags, |inst| {
        if !has_exact_path(&inst.group) {
            return Err(Error::Unsupported(format!("no exact spectral path for {}", inst.group.describe())));
        }
        let gr = gr_exact_abelian(&inst.endo, &inst.group)?;
        Ok(match flags.format {
            Format::Json => pretty(&json!({ "instance": inst.label, "growth_rate": gr })),
            Format::Tsv => format!("# instance\t{}\ngrowth_rate\t{}\n", inst.label, fmt_real(gr)),
        })
    })
}

/// Ball sizes |B(n)| of the Cayley graph.
pub fn cmd_ball(path: &Path, flags: &Flags) -> Outcome {
    with_instance(path, flags, |inst| {
        let radius = inst.options.radius.unwrap_or(DEFAULT_RADIUS);
        let census = enumerate_ball(&inst.group, radius, bfs(flags))?;
        Ok(match flags.format {
            Format::Json => pretty(&json!({
                "group": inst.group.describe(),
                "requested_radius": radius,
                "complete_radius": census.complete_radius(),
                "counts": census.counts(),
            })),
            Format::Tsv => {
                let mut s = format!("# group\t{}\n", inst.group.describe());
                if !census.is_complete() {
                    s.push_str(&format!("# truncated\tcomplete up to radius {}\n", census.complete_radius()));
                }
                s + &census.to_tsv()
            }
        })
    })
}

/// Distortion profile of the base of `Zʳ ⋊ Zˢ` with the action growth `K`.
pub fn cmd_distortion(path: &Path, flags: &Flags) -> Outcome {
    with_instance(path, flags, |inst| {
        let desc = semidirect_descriptor(&inst.group)
            .ok_or_else(|| Error::Unsupported(format!("distortion needs a semidirect product, got {}", inst.group.describe())))?;
        let radius = inst.options.radius.unwrap_or(DEFAULT_RADIUS);
        let max_m = inst.options.max_m.unwrap_or(DEFAULT_MAX_M);
        let profile = distortion_profile(&inst.group, &DistortionTarget::SemidirectBase, radius, bfs(flags))?;
        let rate = distortion_rate(desc, max_m, flags.execution)?;
        let cert = distortion_certificate(&profile, &rate);
        Ok(match flags.format {
            Format::Json => pretty(&json!({
                "group": inst.group.describe(),
                "requested_radius": radius,
                "rho": profile.rho.iter().map(big_json).collect::<Vec<_>>(),
                "action": estimate_json(&inst.label, &rate.estimate),
                "k_exact": rate.k_exact,
                "sqrt_k": rate.sqrt_k,
                "certificate": cert.iter().map(|c| json!({
                    "r": c.r, "rho": big_json(&c.rho), "k_r": big_json(&c.k_r), "holds": c.holds,
                })).collect::<Vec<_>>(),
            })),
            Format::Tsv => {
                let mut s = format!("# group\t{}\n", inst.group.describe());
                s.push_str(&format!("# K\t{}\n# K^(1/2)\t{}\n", fmt_real(rate.k_exact), fmt_real(rate.sqrt_k)));
                s.push_str("n\trho\trho^(1/n)\n");
                for (n, r) in profile.rho.iter().enumerate() {
                    let root = if n == 0 { String::from("-") } else { fmt_real(crate::growth::root(r, n)) };
                    s.push_str(&format!("{n}\t{r}\t{root}\n"));
                }
                s.push('\n');
                s.push_str(&rate.estimate.to_tsv());
                s.push_str("\nr\trho(2r+1)\tK_r\tholds\n");
                for c in &cert {
                    s.push_str(&format!("{}\t{}\t{}\t{}\n", c.r, c.rho, c.k_r, c.holds));
                }
                s
            }
        })
    })
}

/// Which checks `verify` runs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Suite {
    Default,
    File(std::path::PathBuf),
}

/// Runs a law suite. Exits 1 if any check fails.
pub fn cmd_verify(suite: &Suite, seed: Option<u64>, format: Format, execution: Execution) -> Outcome {
    let (checks, seed) = match suite {
        Suite::Default => {
            let seed = seed.unwrap_or(DEFAULT_SEED);
            (default_catalog(seed), seed)
        }
        Suite::File(path) => {
            let parsed = read_source(path).map_err(Error::Parse).and_then(|t| parse_suite(&t));
            match parsed {
                Ok(s) => {
                    let seed = seed.or(s.seed).unwrap_or(DEFAULT_SEED);
                    (s.checks, seed)
                }
                Err(e) => return Outcome::input(e),
            }
        }
    };
    let config = LawConfig { seed, execution, bfs: BfsOptions { execution, ..BfsOptions::default() } };
    match run_suite(&checks, &config) {
        Ok(report) => {
            let stdout = match format {
                Format::Json => {
                    let mut s = report.to_json();
                    s.push('\n');
                    s
                }
                Format::Tsv => report.to_text(),
            };
            let code = if report.all_pass() { EXIT_OK } else { EXIT_LAW_FAILURE };
            Outcome { stdout, stderr: String::new(), code }
        }
        Err(e @ Error::Parse(_)) | Err(e @ Error::InvalidArgument(_)) => Outcome::input(e),
        Err(e) => Outcome::computation(e),
    }
}
