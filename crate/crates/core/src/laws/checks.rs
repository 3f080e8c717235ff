use num_bigint::BigInt;
use num_traits::{One, Pow, ToPrimitive};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{LawCheck, LawConfig, Verdict};
use crate::endo::{Endomorphism, Subgroup};
use crate::error::{Error, Result};
use crate::group::{Element, Group, GroupKind, HeisenbergGenerators};
use crate::growth::{
    distortion_certificate, distortion_rate, evaluate, extension_bound_check, gr_exact_abelian, gr_nilpotent,
    has_exact_path, hr_probe, km_table, GrowthEstimate, HrVerdict, KmOptions, LengthKind, Method, DEFAULT_MARGIN,
};
use crate::oracle::{distortion_profile, DistortionTarget};
use crate::spec::Instance;

struct Check {
    id: &'static str,
    instance: String,
    values: Vec<(String, f64)>,
    tolerance: f64,
}

impl Check {
    fn new(id: &'static str, inst: &Instance, tolerance: f64) -> Self {
        Check { id, instance: inst.label.clone(), values: Vec::new(), tolerance }
    }

    fn v(&mut self, name: &str, x: f64) -> &mut Self {
        self.values.push((name.to_string(), x));
        self
    }

    fn finish(self, verdict: Verdict, note: Option<String>) -> LawCheck {
        LawCheck {
            id: self.id.to_string(),
            instance: self.instance,
            values: self.values,
            tolerance: self.tolerance,
            verdict,
            note,
        }
    }

    fn verdict(self, pass: bool) -> LawCheck {
        self.finish(if pass { Verdict::Pass } else { Verdict::Fail }, None)
    }

    fn inapplicable(self, note: impl Into<String>) -> LawCheck {
        self.finish(Verdict::Inapplicable, Some(note.into()))
    }
}

/// Splits hypothesis failures (which make a law inapplicable) from real errors.
fn gate<T>(r: Result<T>) -> Result<std::result::Result<T, String>> {
    match r {
        Ok(x) => Ok(Ok(x)),
        Err(e @ (Error::NotInvariant { .. } | Error::Unsupported(_) | Error::KindMismatch { .. })) => Ok(Err(e.to_string())),
        Err(e) => Err(e),
    }
}

fn km_options(cfg: &LawConfig) -> KmOptions {
    KmOptions { execution: cfg.execution, bfs: Some(cfg.bfs) }
}

fn f(x: &BigInt) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY)
}

pub(super) fn run(id: &str, inst: &Instance, cfg: &LawConfig) -> Result<LawCheck> {
    match id {
        "thm2.2.1-fekete" => fekete(inst, cfg),
        "thm2.2.2-generator-bound" => generator_bound(inst, cfg),
        "thm2.2.3-power" => power(inst, cfg),
        "lemma2.5-hr-subgroup" => hr_subgroup(inst, cfg),
        "thm3.1-finite-index" => finite_index(inst),
        "lemma3.2-quotient" => extension("lemma3.2-quotient", inst, cfg),
        "thm3.3-extension" => extension("thm3.3-extension", inst, cfg),
        "cor3.4-complement" => extension("cor3.4-complement", inst, cfg),
        "thm4.1-abelian" => abelian(inst, cfg),
        "lemma4.3-lcs" => nilpotent("lemma4.3-lcs", inst, cfg),
        "thm4.4-nilpotent" => nilpotent("thm4.4-nilpotent", inst, cfg),
        "thm4.4-counterexample" => nilpotent("thm4.4-counterexample", inst, cfg),
        "lemma5.1-direct" => product("lemma5.1-direct", inst, cfg),
        "lemma5.2-free" => product("lemma5.2-free", inst, cfg),
        "thm5.4-semidirect" => semidirect(inst, cfg),
        "lemma5.6-polycyclic" => polycyclic(inst, cfg),
        "lemma5.8-distortion" => distortion(inst, cfg),
        _ => Err(Error::InvalidArgument(format!("unknown law id {id:?}"))),
    }
}

fn word_metric_table(check: &mut Check, inst: &Instance, cfg: &LawConfig, default_m: usize) -> Result<Option<GrowthEstimate>> {
    let t = km_table(&inst.endo, &inst.group, inst.options.max_m.unwrap_or(default_m), km_options(cfg))?;
    check.v("M", t.max_m() as f64);
    Ok(match t.method {
        Method::KmSequence(LengthKind::Quasi) => None,
        _ => Some(t),
    })
}

fn fekete(inst: &Instance, cfg: &LawConfig) -> Result<LawCheck> {
    let mut c = Check::new("thm2.2.1-fekete", inst, 0.0);
    let Some(t) = word_metric_table(&mut c, inst, cfg, 12)? else {
        return Ok(c.inapplicable("quasi-length is not a word metric"));
    };
    let k = &t.k;
    let (mut pairs, mut violations) = (0u64, 0u64);
    for a in 1..k.len() {
        for b in 1..=k.len() - a {
            pairs += 1;
            if k[a + b - 1] > &k[a - 1] * &k[b - 1] {
                violations += 1;
            }
        }
    }
    // inf over the prefix bounds every computed root from below
    let inf_ok = t.roots.iter().all(|r| *r >= t.inf_bound);
    c.v("inf_bound", t.inf_bound)
        .v("ratio_estimate", t.ratio_estimate)
        .v("pairs", pairs as f64)
        .v("violations", violations as f64);
    Ok(c.verdict(violations == 0 && inf_ok))
}

fn generator_bound(inst: &Instance, cfg: &LawConfig) -> Result<LawCheck> {
    let mut c = Check::new("thm2.2.2-generator-bound", inst, 0.0);
    let Some(t) = word_metric_table(&mut c, inst, cfg, 12)? else {
        return Ok(c.inapplicable("quasi-length is not a word metric"));
    };
    let k1 = t.k[0].clone();
    let violations = t.k.iter().enumerate().filter(|(i, k)| **k > Pow::pow(&k1, (*i + 1) as u32)).count();
    let max_root = t.roots.iter().copied().fold(0.0, f64::max);
    c.v("K_1", f(&k1)).v("max_root", max_root).v("violations", violations as f64);
    Ok(c.verdict(violations == 0))
}

fn power(inst: &Instance, cfg: &LawConfig) -> Result<LawCheck> {
    let n = inst.options.power.unwrap_or(2).max(1);
    let tol = inst.options.tolerance.unwrap_or(0.1);
    let mut c = Check::new("thm2.2.3-power", inst, tol);
    let (g, a) = (&inst.group, &inst.endo);
    let an = a.power(g, n)?;
    c.v("n", n as f64);
    let mut pass = true;
    if has_exact_path(g) {
        if let Ok(Ok(lhs)) = gate(gr_exact_abelian(&an, g)) {
            let rhs = gr_exact_abelian(a, g)?.powi(n as i32);
            c.v("exact_of_power", lhs).v("exact_to_power", rhs);
            pass &= (lhs - rhs).abs() <= 1e-6 * rhs.abs().max(1.0);
        }
    }
    let m = inst.options.max_m.unwrap_or(if has_exact_path(g) { 300 } else { 16 });
    let lhs = km_table(&an, g, m, km_options(cfg))?.ratio_estimate;
    let rhs = km_table(a, g, m, km_options(cfg))?.ratio_estimate.powi(n as i32);
    c.v("estimate_of_power", lhs).v("estimate_to_power", rhs);
    pass &= (lhs - rhs).abs() <= tol * rhs.abs().max(1.0);
    Ok(c.verdict(pass))
}

fn hr_subgroup(inst: &Instance, cfg: &LawConfig) -> Result<LawCheck> {
    let r = inst.options.r.unwrap_or(2.5);
    let margin = DEFAULT_MARGIN;
    let mut c = Check::new("lemma2.5-hr-subgroup", inst, margin);
    if r <= 1.0 {
        return Ok(c.inapplicable("H_r is only defined for r > 1"));
    }
    let (g, a) = (&inst.group, &inst.endo);
    let m = inst.options.max_m.unwrap_or(40);
    let opts = km_options(cfg);
    let mut rng = ChaCha8Rng::seed_from_u64(inst.options.seed.unwrap_or(cfg.seed));
    let mut sample: Vec<Element> = g.symmetric_generators()?;
    for _ in 0..6 {
        sample.push(g.random_element(&mut rng, 3)?);
    }
    let verdict = |x: &Element, r: f64| -> Result<HrVerdict> { Ok(hr_probe(a, g, x, r, m, margin, opts)?.verdict) };
    let mut inside = Vec::new();
    for x in &sample {
        if verdict(x, r)? == HrVerdict::In {
            inside.push(x.clone());
        }
    }
    c.v("r", r).v("sampled", sample.len() as f64).v("in_count", inside.len() as f64);
    if inside.is_empty() {
        return Ok(c.inapplicable("no sampled element lies in H_r"));
    }
    let mut monotone = 0;
    for x in &inside {
        if verdict(x, r + 2.0 * margin)? != HrVerdict::In {
            monotone += 1;
        }
    }
    let (mut pairs, mut closure) = (0, 0);
    for x in &inside {
        for y in &inside {
            pairs += 1;
            if verdict(&g.multiply(x, y)?, r + margin)? == HrVerdict::Out {
                closure += 1;
            }
        }
    }
    c.v("pairs", pairs as f64).v("monotonicity_violations", monotone as f64).v("closure_violations", closure as f64);
    Ok(c.verdict(monotone == 0 && closure == 0))
}

fn finite_index(inst: &Instance) -> Result<LawCheck> {
    let tol = inst.options.tolerance.unwrap_or(1e-9);
    let mut c = Check::new("thm3.1-finite-index", inst, tol);
    let index = match (&inst.subgroup, inst.group.kind()) {
        (Some(Subgroup::Sublattice(l)), GroupKind::FreeAbelian { .. }) => l.index(),
        _ => return Ok(c.inapplicable("needs a sublattice of a free abelian group")),
    };
    let Some(index) = index else {
        return Ok(c.inapplicable("sublattice has infinite index"));
    };
    let (hg, b) = match gate(inst.endo.restrict(&inst.group, inst.subgroup.as_ref().expect("checked")))? {
        Ok(x) => x,
        Err(note) => return Ok(c.inapplicable(note)),
    };
    let full = gr_exact_abelian(&inst.endo, &inst.group)?;
    let sub = gr_exact_abelian(&b, &hg)?;
    c.v("index", f(&index)).v("full", full).v("sub", sub);
    Ok(c.verdict((full - sub).abs() <= tol))
}

/// Whether `H` is generated by a subset of the generators, and whether it is undistorted.
fn complement_status(group: &Group, h: &Subgroup) -> std::result::Result<(), String> {
    let complemented = match (h, group.kind()) {
        (Subgroup::Trivial, _) => true,
        (Subgroup::Sublattice(l), GroupKind::FreeAbelian { .. }) => (0..l.rank()).all(|j| {
            let col = l.basis().column(j);
            col.iter().filter(|x| !num_traits::Zero::is_zero(*x)).count() == 1 && col.iter().any(|x| x.is_one())
        }),
        (Subgroup::Factor(_), GroupKind::DirectProduct(..)) => true,
        (Subgroup::SemidirectBase, GroupKind::Semidirect(_)) => true,
        (Subgroup::LowerCentral(2), GroupKind::Heisenberg(HeisenbergGenerators::Standard)) => true,
        _ => false,
    };
    if !complemented {
        return Err("H has no generating set inside the generators of the group".into());
    }
    let undistorted = match (h, group.kind()) {
        (Subgroup::SemidirectBase, GroupKind::Semidirect(d)) => d.is_isometric(),
        (Subgroup::LowerCentral(2), GroupKind::Heisenberg(_)) => false,
        _ => true,
    };
    if !undistorted {
        return Err("H is distorted in the group".into());
    }
    Ok(())
}

fn extension(id: &'static str, inst: &Instance, cfg: &LawConfig) -> Result<LawCheck> {
    let exact = has_exact_path(&inst.group);
    let tol = inst.options.tolerance.unwrap_or(if exact { 1e-6 } else { 0.1 });
    let mut c = Check::new(id, inst, tol);
    let Some(h) = &inst.subgroup else {
        return Ok(c.inapplicable("no subgroup given"));
    };
    if id == "cor3.4-complement" {
        if let Err(note) = complement_status(&inst.group, h) {
            return Ok(c.inapplicable(note));
        }
    }
    let m = inst.options.max_m.unwrap_or(16);
    let r = match gate(extension_bound_check(&inst.endo, &inst.group, h, m, tol, km_options(cfg)))? {
        Ok(r) => r,
        Err(note) => return Ok(c.inapplicable(note)),
    };
    c.v("full", r.full).v("sub", r.sub).v("quotient", r.quotient);
    Ok(c.verdict(match id {
        "lemma3.2-quotient" => r.quotient_le_full,
        "thm3.3-extension" => r.full_le_max,
        _ => r.equality,
    }))
}

fn abelian(inst: &Instance, cfg: &LawConfig) -> Result<LawCheck> {
    let tol = inst.options.tolerance.unwrap_or(0.05);
    let mut c = Check::new("thm4.1-abelian", inst, tol);
    if !has_exact_path(&inst.group) {
        return Ok(c.inapplicable("group is not abelian"));
    }
    let exact = match gate(gr_exact_abelian(&inst.endo, &inst.group))? {
        Ok(x) => x,
        Err(note) => return Ok(c.inapplicable(note)),
    };
    let t = km_table(&inst.endo, &inst.group, inst.options.max_m.unwrap_or(60), km_options(cfg))?;
    c.v("exact", exact).v("ratio_estimate", t.ratio_estimate).v("inf_bound", t.inf_bound).v("M", t.max_m() as f64);
    Ok(c.verdict((t.ratio_estimate - exact).abs() <= tol && t.inf_bound >= exact - 1e-9))
}

fn nilpotent(id: &'static str, inst: &Instance, cfg: &LawConfig) -> Result<LawCheck> {
    let tol = inst.options.tolerance.unwrap_or(0.1);
    let mut c = Check::new(id, inst, tol);
    let rep = match gate(gr_nilpotent(&inst.endo, &inst.group))? {
        Ok(r) => r,
        Err(note) => return Ok(c.inapplicable(note)),
    };
    let est = km_table(&inst.endo, &inst.group, inst.options.max_m.unwrap_or(16), km_options(cfg))?.ratio_estimate;
    c.v("estimate", est);
    for (j, layer) in rep.layers.iter().enumerate() {
        c.v(&format!("layer{}", j + 1), *layer);
    }
    c.v("with_exponents", rep.combined).v("without_exponents", rep.without_exponents);
    Ok(match id {
        "lemma4.3-lcs" => {
            let ok = rep.layers.iter().enumerate().all(|(j, l)| est >= l.powf(1.0 / (j + 1) as f64) - tol);
            c.verdict(ok)
        }
        "thm4.4-nilpotent" => c.verdict((est - rep.combined).abs() <= tol),
        _ => {
            if (rep.without_exponents - rep.combined).abs() <= tol {
                return Ok(c.inapplicable("both formulas agree on this instance"));
            }
            c.verdict((est - rep.combined).abs() <= tol && (est - rep.without_exponents).abs() > tol)
        }
    })
}

fn product(id: &'static str, inst: &Instance, cfg: &LawConfig) -> Result<LawCheck> {
    let tol = inst.options.tolerance.unwrap_or(0.05);
    let mut c = Check::new(id, inst, tol);
    let factors = match (id, inst.group.kind(), &inst.endo) {
        ("lemma5.1-direct", GroupKind::DirectProduct(a, b), Endomorphism::Product(x, y))
        | ("lemma5.2-free", GroupKind::FreeProduct(a, b), Endomorphism::Product(x, y)) => (a, b, x, y),
        _ => return Ok(c.inapplicable("needs a factor-preserving map on the matching product")),
    };
    let (a, b, x, y) = factors;
    let m = inst.options.max_m.unwrap_or(24);
    let full = km_table(&inst.endo, &inst.group, m, km_options(cfg))?.ratio_estimate;
    let ga = evaluate(x, a, m, km_options(cfg))?.value;
    let gb = evaluate(y, b, m, km_options(cfg))?.value;
    c.v("full", full).v("left", ga).v("right", gb);
    Ok(c.verdict((full - ga.max(gb)).abs() <= tol))
}

fn semidirect(inst: &Instance, cfg: &LawConfig) -> Result<LawCheck> {
    let tol = inst.options.tolerance.unwrap_or(0.05);
    let mut c = Check::new("thm5.4-semidirect", inst, tol);
    let (d, base, quotient) = match (inst.group.kind(), &inst.endo) {
        (GroupKind::Semidirect(d), Endomorphism::Semidirect { base, quotient }) => (d, base, quotient),
        _ => return Ok(c.inapplicable("needs a semidirect map on a semidirect product")),
    };
    if !d.is_isometric() {
        return Ok(c.inapplicable("the base is distorted; equality needs an undistorted base"));
    }
    let lambda = gr_exact_abelian(&Endomorphism::Matrix(base.clone()), &Group::free_abelian(d.base_rank()))?;
    let mu = gr_exact_abelian(&Endomorphism::Matrix(quotient.clone()), &Group::free_abelian(d.quotient_rank()))?;
    let full = km_table(&inst.endo, &inst.group, inst.options.max_m.unwrap_or(40), km_options(cfg))?.ratio_estimate;
    let max = lambda.max(mu);
    c.v("full", full).v("base", lambda).v("quotient", mu);
    Ok(c.verdict(full >= mu - tol && full <= max + tol && (full - max).abs() <= tol))
}

fn polycyclic(inst: &Instance, cfg: &LawConfig) -> Result<LawCheck> {
    let tol = inst.options.tolerance.unwrap_or(1e-6);
    let mut c = Check::new("lemma5.6-polycyclic", inst, tol);
    let m = inst.options.max_m.unwrap_or(40);
    let value = match (inst.group.kind(), &inst.endo) {
        (GroupKind::Semidirect(d), Endomorphism::Semidirect { base, quotient })
            if d.base_rank() == 1 && d.quotient_rank() == 1 =>
        {
            c.v("base_multiplier", f(&base[(0, 0)])).v("quotient_multiplier", f(&quotient[(0, 0)]));
            km_table(&inst.endo, &inst.group, m, km_options(cfg))?.ratio_estimate
        }
        (GroupKind::FreeAbelian { rank }, Endomorphism::Matrix(a)) => {
            let triangular = (0..*rank).all(|i| (0..i).all(|j| num_traits::Zero::is_zero(&a[(i, j)])));
            if !triangular {
                return Ok(c.inapplicable("map does not preserve the coordinate flag"));
            }
            evaluate(&inst.endo, &inst.group, m, km_options(cfg))?.value
        }
        _ => return Ok(c.inapplicable("needs a cyclic-by-cyclic product or a flag-preserving matrix")),
    };
    let nearest = value.round();
    c.v("growth_rate", value).v("nearest_integer", nearest);
    Ok(c.verdict((value - nearest).abs() <= tol))
}

fn distortion(inst: &Instance, cfg: &LawConfig) -> Result<LawCheck> {
    let tol = inst.options.tolerance.unwrap_or(0.05);
    let mut c = Check::new("lemma5.8-distortion", inst, tol);
    let GroupKind::Semidirect(d) = inst.group.kind() else {
        return Ok(c.inapplicable("needs a semidirect product"));
    };
    let m = inst.options.max_m.unwrap_or(30);
    let radius = inst.options.radius.unwrap_or(12);
    let rate = distortion_rate(d, m, cfg.execution)?;
    let profile = distortion_profile(&inst.group, &DistortionTarget::SemidirectBase, radius, cfg.bfs)?;
    let rho = &profile.rho;
    let monotone = rho.windows(2).all(|w| w[0] <= w[1]);
    let cert = distortion_certificate(&profile, &rate);
    let cert_failures = cert.iter().filter(|row| !row.holds).count();
    // any element of the base in the n-ball has at most n base letters, each
    // moved by a prefix of at most n/2 net quotient letters
    let mut envelope_failures = 0;
    let mut best = BigInt::one();
    let mut k_tilde = vec![BigInt::one()];
    for j in 1..=m {
        let prev = &rate.k[j - 1];
        let cur = if j >= 2 { prev.max(&rate.k[j - 2]).clone() } else { prev.clone().max(BigInt::one()) };
        k_tilde.push(cur);
    }
    for (n, r) in rho.iter().enumerate().skip(1) {
        let half = n / 2;
        if half > m {
            break;
        }
        best = best.max(k_tilde[half].clone());
        if *r > BigInt::from(n) * &best {
            envelope_failures += 1;
        }
    }
    let complete = rho.len().saturating_sub(1);
    let root = if complete > 0 { f(&rho[complete]).powf(1.0 / complete as f64) } else { f64::NAN };
    c.v("k_exact", rate.k_exact)
        .v("k_estimate", rate.estimate.ratio_estimate)
        .v("sqrt_k", rate.sqrt_k)
        .v("radius", complete as f64)
        .v("rho_root", root)
        .v("certificate_rows", cert.len() as f64)
        .v("certificate_failures", cert_failures as f64)
        .v("envelope_failures", envelope_failures as f64);
    let pass = (rate.estimate.ratio_estimate - rate.k_exact).abs() <= tol
        && monotone
        && cert_failures == 0
        && envelope_failures == 0
        && !cert.is_empty();
    let note = (!profile.is_complete()).then(|| format!("ball truncated at radius {complete} by the element budget"));
    Ok(c.finish(if pass { Verdict::Pass } else { Verdict::Fail }, note))
}
