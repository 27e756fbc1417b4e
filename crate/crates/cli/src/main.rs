//! `gkz-mirror`: build GKZ-type series, certify integrality of mirror-type
//! maps and run the congruence verifiers.
//!
//! Exit codes: 0 pass, 1 a check failed (with witness), 2 usage or input
//! error, 3 internal error.

mod output;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gkz_mirror::congruence::{
    check_c_in_pzp, check_dieudonne_dwork, check_reduction, full_pipeline_check,
    verify_box_sum_identities, verify_comb_identity, verify_gamma_p, verify_harmonic_reduction,
    verify_harmonic_shift, verify_harmonic_weight, verify_quotients, verify_rearrangement_sweep,
    verify_theorem1_conclusion, verify_theorem1_hypothesis_iii, CoeffMap, CongruenceError,
    QuotientCheck, SweepRange,
};
use gkz_mirror::gkz::{
    build_f, build_g_at, build_g_i, canonical_coordinate, example_catalog, mirror_type_map,
    CATALOG,
};
use gkz_mirror::mps::{is_integral, is_p_integral, IntegralityMode};
use gkz_mirror::{CongruenceReport, GkzError, GkzSpec, MultiIndex, Prime, Series, SeriesError, Substitution};

use output::Format;

#[derive(Parser)]
#[command(name = "gkz-mirror", version, about = "Exact GKZ series, mirror-type maps and congruence checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the Taylor coefficients of F, G or a mirror-type map.
    Series(SeriesArgs),
    /// Certify integrality or the reduction congruence for a spec.
    Check(CheckArgs),
    /// Run one of the brute-force congruence verifiers.
    Verify(VerifyArgs),
    /// Apply a variable specialization such as z1=z2 or z1=2*z2^3.
    Specialize(SpecializeArgs),
    /// List the built-in examples, or show one.
    Catalog { name: Option<String> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum What {
    #[value(name = "F")]
    F,
    #[value(name = "G-L")]
    GL,
    #[value(name = "G-i")]
    Gi,
    #[value(name = "q-i")]
    Qi,
    #[value(name = "q-L")]
    QL,
    /// The coordinate series z_i itself.
    #[value(name = "z")]
    Z,
}

#[derive(Args)]
struct OutArgs {
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct Target {
    /// Catalog name, inline spec such as "N=((3,3));L=(1,0)", or a JSON spec file.
    spec: String,
    #[arg(long, value_enum)]
    what: Option<What>,
    /// Total truncation degree.
    #[arg(long, default_value_t = 6)]
    degree: u32,
    /// Variable index for G-i, q-i and z (1-based).
    #[arg(long)]
    i: Option<usize>,
    /// Overrides the spec's L, e.g. "(1,0)".
    #[arg(long = "L")]
    l: Option<String>,
}

#[derive(Args)]
struct SeriesArgs {
    #[command(flatten)]
    target: Target,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CheckKind {
    Integrality,
    PIntegrality,
    Reduction,
    Pipeline,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    target: Target,
    #[arg(long, value_enum, default_value = "pipeline")]
    check: CheckKind,
    #[arg(long, alias = "p", value_delimiter = ',', default_values_t = [2u64, 3, 5])]
    primes: Vec<u64>,
    /// Class for p-integrality: Zp, 1+zZp, 1+pzZp, pzZp.
    #[arg(long, default_value = "Zp")]
    mode: String,
    #[arg(long)]
    allow_inadmissible: bool,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Lemma {
    DieudonneDwork,
    Reduction,
    Comb,
    #[value(name = "lemma333", alias = "harmonic-shift")]
    Lemma333,
    #[value(name = "lemma11", alias = "harmonic-weight")]
    Lemma11,
    #[value(name = "theorem1")]
    Theorem1,
    #[value(name = "theorem1-iii")]
    Theorem1Iii,
    #[value(name = "section8", alias = "quotients")]
    Section8,
    GammaP,
    HarmonicReduction,
    BoxSums,
    #[value(name = "c-in-pzp")]
    CInPzp,
    Rearrangement,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    lemma: Lemma,
    /// Catalog name, inline spec or JSON spec file.
    #[arg(long)]
    spec: Option<String>,
    #[arg(long = "L")]
    l: Option<String>,
    #[arg(long, alias = "p", value_delimiter = ',')]
    primes: Vec<u64>,
    #[arg(long)]
    s_max: Option<u32>,
    /// Upper bound for the m, n, k boxes.
    #[arg(long = "box")]
    bound: Option<i64>,
    /// Bounds of the K box for theorem1 (default 0 and p^2 * box).
    #[arg(long, allow_hyphen_values = true)]
    k_min: Option<i64>,
    #[arg(long)]
    k_max: Option<i64>,
    #[arg(long, default_value_t = 3)]
    r: u32,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Quotient check for section8: lem1, lem2, lem33, zero-valuation, all.
    #[arg(long, default_value = "all")]
    which: String,
    /// Coefficient table "m_1 ... m_d num/den" for A (theorem1, theorem1-iii, box-sums).
    #[arg(long)]
    map: Option<PathBuf>,
    /// Coefficient table for g; defaults to A.
    #[arg(long)]
    g: Option<PathBuf>,
    #[arg(long, default_value_t = 8)]
    degree: u32,
    #[arg(long, default_value_t = 50)]
    n_max: u64,
    #[arg(long, default_value_t = 20)]
    kn_max: u64,
    #[arg(long, default_value_t = 500)]
    j_max: u64,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct SpecializeArgs {
    #[command(flatten)]
    target: Target,
    /// Substitution such as "z1=z2" or "z1=2*z2^3"; defaults to the catalog's.
    #[arg(long)]
    map: Option<String>,
    #[command(flatten)]
    out: OutArgs,
}

enum Failure {
    Usage(String),
    Internal(String),
}

impl From<GkzError> for Failure {
    fn from(e: GkzError) -> Self {
        match e {
            GkzError::Series(s) => s.into(),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<SeriesError> for Failure {
    fn from(e: SeriesError) -> Self {
        match e {
            SeriesError::ShapeMismatch(..) | SeriesError::NotInvertible | SeriesError::NotNormalized(_) => {
                Failure::Internal(e.to_string())
            }
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<CongruenceError> for Failure {
    fn from(e: CongruenceError) -> Self {
        match e {
            CongruenceError::Gkz(g) => g.into(),
            CongruenceError::Series(s) => s.into(),
            other => Failure::Usage(other.to_string()),
        }
    }
}

type Outcome<T> = Result<T, Failure>;

struct Resolved {
    spec: GkzSpec,
    subst: Option<Substitution>,
}

fn resolve_spec(arg: &str) -> Outcome<Resolved> {
    if CATALOG.contains(&arg) {
        let (spec, subst) = example_catalog(arg)?;
        return Ok(Resolved { spec, subst });
    }
    if arg.trim_start().starts_with("N=") {
        return Ok(Resolved { spec: GkzSpec::parse_inline(arg)?, subst: None });
    }
    let text = fs::read_to_string(arg)
        .map_err(|e| Failure::Usage(format!("{arg:?} is neither a catalog name, an inline spec nor a readable file: {e}")))?;
    Ok(Resolved { spec: GkzSpec::from_json(&text)?, subst: None })
}

fn parse_vector(text: &str) -> Outcome<MultiIndex> {
    let inner = text.trim().trim_start_matches('(').trim_end_matches(')');
    let entries = inner
        .split(',')
        .map(|x| x.trim())
        .filter(|x| !x.is_empty())
        .map(|x| x.parse::<i64>().map_err(|_| Failure::Usage(format!("bad vector {text:?}"))))
        .collect::<Outcome<Vec<_>>>()?;
    if entries.is_empty() {
        return Err(Failure::Usage(format!("empty vector {text:?}")));
    }
    Ok(MultiIndex::new(entries))
}

fn primes(list: &[u64]) -> Outcome<Vec<Prime>> {
    list.iter()
        .map(|&p| Prime::new(p).map_err(|e| Failure::Usage(e.to_string())))
        .collect()
}

fn pick_l(flag: &Option<String>, spec: &GkzSpec) -> Outcome<Option<MultiIndex>> {
    match flag {
        Some(text) => {
            let l = parse_vector(text)?;
            if l.dim() != spec.d() {
                return Err(Failure::Usage(format!("L = {l} has the wrong dimension for {spec}")));
            }
            Ok(Some(l))
        }
        None => Ok(spec.l().cloned()),
    }
}

fn require_l(flag: &Option<String>, spec: &GkzSpec) -> Outcome<MultiIndex> {
    pick_l(flag, spec)?.ok_or_else(|| Failure::Usage(format!("{spec} has no L; pass --L")))
}

fn index(i: Option<usize>, d: usize) -> Outcome<usize> {
    match i {
        Some(i) if (1..=d).contains(&i) => Ok(i - 1),
        Some(i) => Err(Failure::Usage(format!("--i {i} is out of range 1..={d}"))),
        None => Err(Failure::Usage("--i is required".into())),
    }
}

/// Builds the selected series before any specialization.
fn build(t: &Target, spec: &GkzSpec, what: What) -> Outcome<Series> {
    let d = spec.d();
    Ok(match what {
        What::F => build_f(spec, t.degree),
        What::GL => build_g_at(spec, &require_l(&t.l, spec)?, t.degree)?,
        What::Gi => build_g_i(spec, index(t.i, d)?, t.degree)?,
        What::Qi => canonical_coordinate(spec, index(t.i, d)?, t.degree)?,
        What::QL => mirror_type_map(spec, &require_l(&t.l, spec)?, t.degree)?,
        What::Z => Series::variable(d, t.degree, index(t.i, d)?),
    })
}

fn specialized(s: Series, subst: &Option<Substitution>) -> Outcome<Series> {
    match subst {
        Some(sub) => Ok(s.specialize(sub)?),
        None => Ok(s),
    }
}

fn emit(text: &str, out: &OutArgs) -> Outcome<()> {
    match &out.out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Internal(format!("writing {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_report(r: &CongruenceReport, out: &OutArgs) -> Outcome<ExitCode> {
    emit(&output::report(r, out.format), out)?;
    let status = if r.pass { "PASS" } else { "FAIL" };
    eprintln!("{status} {} ({} cases, {} failures)", r.check, r.cases, r.failures);
    Ok(if r.pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_series(a: &SeriesArgs) -> Outcome<ExitCode> {
    let r = resolve_spec(&a.target.spec)?;
    let what = a.target.what.unwrap_or(What::F);
    let s = specialized(build(&a.target, &r.spec, what)?, &r.subst)?;
    emit(&output::series(&s, a.out.format), &a.out)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_specialize(a: &SpecializeArgs) -> Outcome<ExitCode> {
    let r = resolve_spec(&a.target.spec)?;
    let sub = match &a.map {
        Some(text) => Substitution::parse(r.spec.d(), text)?,
        None => r
            .subst
            .clone()
            .ok_or_else(|| Failure::Usage("--map is required for this spec".into()))?,
    };
    let what = a.target.what.unwrap_or(What::F);
    let s = build(&a.target, &r.spec, what)?.specialize(&sub)?;
    emit(&output::series(&s, a.out.format), &a.out)?;
    Ok(ExitCode::SUCCESS)
}

fn tag(mut r: CongruenceReport, key: &str, value: serde_json::Value) -> CongruenceReport {
    for w in &mut r.witnesses {
        w.params.insert(key.into(), value.clone());
    }
    r
}

fn cmd_check(a: &CheckArgs) -> Outcome<ExitCode> {
    let r = resolve_spec(&a.target.spec)?;
    let spec = &r.spec;
    let ps = primes(&a.primes)?;
    let t = &a.target;
    let report = match a.check {
        CheckKind::Integrality | CheckKind::PIntegrality => {
            let mode: IntegralityMode = a.mode.parse()?;
            let targets: Vec<(String, Series)> = match (t.what, pick_l(&t.l, spec)?) {
                (Some(w), _) => vec![(format!("{w:?}"), specialized(build(t, spec, w)?, &r.subst)?)],
                (None, Some(l)) => {
                    let q = specialized(mirror_type_map(spec, &l, t.degree)?, &r.subst)?;
                    vec![(format!("q-L L={l}"), q)]
                }
                (None, None) => (0..spec.d())
                    .map(|i| {
                        let q = specialized(canonical_coordinate(spec, i, t.degree)?, &r.subst)?;
                        Ok((format!("q{}", i + 1), q))
                    })
                    .collect::<Outcome<_>>()?,
            };
            let mut parts = Vec::new();
            for (name, s) in &targets {
                if a.check == CheckKind::Integrality {
                    let mut rep = is_integral(s);
                    rep.check = name.clone();
                    parts.push(rep);
                } else {
                    for &p in &ps {
                        let mut rep = is_p_integral(s, p, mode);
                        rep.check = format!("{name} p={}", p.get());
                        parts.push(rep);
                    }
                }
            }
            let check = if a.check == CheckKind::Integrality { "integrality" } else { "p-integrality" };
            CongruenceReport::merge(check, check_params(spec, a, &r.subst), parts)
        }
        CheckKind::Reduction => {
            let l = require_l(&t.l, spec)?;
            let f = specialized(build_f(spec, t.degree), &r.subst)?;
            let g = specialized(build_g_at(spec, &l, t.degree)?, &r.subst)?;
            let mut parts = Vec::new();
            for &p in &ps {
                let mut rep = check_reduction(&f, &g, p)?;
                rep.check = format!("p={}", p.get());
                parts.push(rep);
            }
            let mut params = check_params(spec, a, &r.subst);
            params.insert("L".into(), serde_json::json!(l));
            CongruenceReport::merge("reduction", params, parts)
        }
        CheckKind::Pipeline => {
            let ls: Vec<MultiIndex> = match pick_l(&t.l, spec)? {
                Some(l) => vec![l],
                None => admissible_ls(spec),
            };
            let mut parts = Vec::new();
            for l in &ls {
                let rep = full_pipeline_check(spec, l, &ps, t.degree, r.subst.as_ref(), a.allow_inadmissible)?;
                parts.push(tag(rep, "L", serde_json::json!(l)));
            }
            if parts.len() == 1 {
                parts.pop().unwrap()
            } else {
                let mut merged = CongruenceReport::merge("pipeline", check_params(spec, a, &r.subst), parts);
                for w in &mut merged.witnesses {
                    w.params.remove("stage");
                }
                merged
            }
        }
    };
    emit_report(&report, &a.out)
}

/// Every `L` with `0 <= L <= N^(j)` for some `j`, in box order.
fn admissible_ls(spec: &GkzSpec) -> Vec<MultiIndex> {
    let d = spec.d();
    let hi = MultiIndex::new(
        (0..d)
            .map(|i| spec.n_list().iter().map(|v| v[i]).max().unwrap_or(0))
            .collect(),
    );
    MultiIndex::up_to(&hi).filter(|l| spec.is_admissible(l)).collect()
}

fn check_params(
    spec: &GkzSpec,
    a: &CheckArgs,
    subst: &Option<Substitution>,
) -> serde_json::Map<String, serde_json::Value> {
    let mut m = serde_json::Map::new();
    m.insert("spec".into(), spec.to_string().into());
    m.insert("degree".into(), a.target.degree.into());
    m.insert("primes".into(), serde_json::json!(a.primes));
    if a.check == CheckKind::PIntegrality {
        m.insert("mode".into(), a.mode.clone().into());
    }
    if let Some(w) = a.target.what {
        m.insert("what".into(), format!("{w:?}").into());
    }
    if let Some(s) = subst {
        m.insert("substitution".into(), s.to_string().into());
    }
    m
}

fn verify_spec(a: &VerifyArgs) -> Outcome<Resolved> {
    match &a.spec {
        Some(s) => resolve_spec(s),
        None => Err(Failure::Usage("--spec is required for this lemma".into())),
    }
}

fn sweep(a: &VerifyArgs, d: usize, default_primes: &[u64], default_s: u32) -> Outcome<SweepRange> {
    let list = if a.primes.is_empty() { default_primes.to_vec() } else { a.primes.clone() };
    let mut range = SweepRange::new(&list, a.s_max.unwrap_or(default_s), d, a.bound.unwrap_or(4))?;
    if a.k_min.is_some() || a.k_max.is_some() {
        let k_max = a.k_max.ok_or_else(|| Failure::Usage("--k-min needs --k-max".into()))?;
        range = range.with_k(a.k_min.unwrap_or(0), k_max);
    }
    Ok(range)
}

fn load_map(path: &Option<PathBuf>, d: usize) -> Outcome<Option<CoeffMap>> {
    path.as_ref()
        .map(|p| {
            let text = fs::read_to_string(p).map_err(|e| Failure::Usage(format!("reading {}: {e}", p.display())))?;
            Ok(CoeffMap::from_table(&p.display().to_string(), d, &text)?)
        })
        .transpose()
}

/// `A` and `g` from tables, falling back to `B_N` of the spec.
fn maps(a: &VerifyArgs) -> Outcome<(CoeffMap, CoeffMap, usize)> {
    let spec = a.spec.as_ref().map(|s| resolve_spec(s)).transpose()?;
    let d = match (&spec, a.d) {
        (Some(r), _) => r.spec.d(),
        (None, Some(d)) => d,
        (None, None) => return Err(Failure::Usage("pass --spec, or --map with --d".into())),
    };
    let base = match (&spec, load_map(&a.map, d)?) {
        (_, Some(m)) => m,
        (Some(r), None) => CoeffMap::b_n(&r.spec),
        (None, None) => return Err(Failure::Usage("pass --spec or --map".into())),
    };
    let g = load_map(&a.g, d)?.unwrap_or_else(|| base.clone());
    Ok((base, g, d))
}

fn per_prime<F>(name: &str, ps: &[Prime], params: serde_json::Map<String, serde_json::Value>, mut f: F) -> Outcome<CongruenceReport>
where
    F: FnMut(Prime) -> Outcome<CongruenceReport>,
{
    let mut parts = Vec::new();
    for &p in ps {
        let mut rep = f(p)?;
        rep.check = format!("p={}", p.get());
        parts.push(rep);
    }
    Ok(CongruenceReport::merge(name, params, parts))
}

fn cmd_verify(a: &VerifyArgs) -> Outcome<ExitCode> {
    let report = match a.lemma {
        Lemma::DieudonneDwork | Lemma::Reduction => {
            let r = verify_spec(a)?;
            let ps = primes(if a.primes.is_empty() { &[2, 3, 5] } else { &a.primes })?;
            let f = specialized(build_f(&r.spec, a.degree), &r.subst)?;
            let mut params = serde_json::Map::new();
            params.insert("spec".into(), r.spec.to_string().into());
            params.insert("degree".into(), a.degree.into());
            if a.lemma == Lemma::DieudonneDwork {
                per_prime("dieudonne-dwork", &ps, params, |p| Ok(check_dieudonne_dwork(&f, p)?))?
            } else {
                let l = require_l(&a.l, &r.spec)?;
                params.insert("L".into(), serde_json::json!(l));
                let g = specialized(build_g_at(&r.spec, &l, a.degree)?, &r.subst)?;
                per_prime("reduction", &ps, params, |p| Ok(check_reduction(&f, &g, p)?))?
            }
        }
        Lemma::Comb => {
            let ps = primes(if a.primes.is_empty() { &[2, 3] } else { &a.primes })?;
            let d = a.d.unwrap_or(2);
            let z = CoeffMap::random(a.seed, -9, 9);
            let w = CoeffMap::random(a.seed ^ 0x5deece66d, -9, 9);
            let mut params = serde_json::Map::new();
            params.insert("seed".into(), a.seed.into());
            params.insert("r".into(), a.r.into());
            params.insert("d".into(), d.into());
            per_prime("comb-identity", &ps, params, |p| Ok(verify_comb_identity(&z, &w, p, a.r, d)?))?
        }
        Lemma::Lemma333 => {
            let r = verify_spec(a)?;
            let n1 = r.spec.n_list()[0].clone();
            let l = pick_l(&a.l, &r.spec)?.unwrap_or_else(|| n1.clone());
            verify_harmonic_shift(&n1, &l, &sweep(a, r.spec.d(), &[2, 3], 1)?)?
        }
        Lemma::Lemma11 => {
            let r = verify_spec(a)?;
            let l = pick_l(&a.l, &r.spec)?.unwrap_or_else(|| r.spec.n_list()[0].clone());
            verify_harmonic_weight(&r.spec, &l, &sweep(a, r.spec.d(), &[2, 3], 1)?)?
        }
        Lemma::Theorem1 | Lemma::Theorem1Iii | Lemma::BoxSums => {
            let (am, g, d) = maps(a)?;
            let range = sweep(a, d, &[2, 3], 1)?;
            match a.lemma {
                Lemma::Theorem1 => verify_theorem1_conclusion(&am, &g, &range)?,
                Lemma::Theorem1Iii => verify_theorem1_hypothesis_iii(&am, &g, &range)?,
                _ => verify_box_sum_identities(&am, &range)?,
            }
        }
        Lemma::Section8 => {
            let r = verify_spec(a)?;
            let range = sweep(a, r.spec.d(), &[2, 3], 1)?;
            if a.which == "all" {
                let mut parts = Vec::new();
                for c in QuotientCheck::ALL {
                    parts.push(verify_quotients(&r.spec, &range, c)?);
                }
                let mut params = serde_json::Map::new();
                params.insert("spec".into(), r.spec.to_string().into());
                CongruenceReport::merge("quotients", params, parts)
            } else {
                let which: QuotientCheck = a.which.parse()?;
                verify_quotients(&r.spec, &range, which)?
            }
        }
        Lemma::GammaP => {
            let ps = primes(if a.primes.is_empty() { &[3, 5, 7] } else { &a.primes })?;
            verify_gamma_p(&ps, a.n_max, a.kn_max, a.s_max.unwrap_or(3))
        }
        Lemma::HarmonicReduction => {
            let ps = primes(if a.primes.is_empty() { &[2, 3, 5] } else { &a.primes })?;
            verify_harmonic_reduction(&ps, a.j_max)
        }
        Lemma::CInPzp | Lemma::Rearrangement => {
            let r = verify_spec(a)?;
            let l = pick_l(&a.l, &r.spec)?.unwrap_or_else(|| r.spec.n_list()[0].clone());
            let mut range = sweep(a, r.spec.d(), &[2, 3], 0)?;
            if a.bound.is_none() {
                range.bound = 2;
            }
            if a.lemma == Lemma::CInPzp {
                check_c_in_pzp(&r.spec, &l, &range)?
            } else {
                verify_rearrangement_sweep(&r.spec, &l, &range)?
            }
        }
    };
    emit_report(&report, &a.out)
}

fn cmd_catalog(name: &Option<String>) -> Outcome<ExitCode> {
    let entry = |n: &str| -> Outcome<serde_json::Value> {
        let (spec, subst) = example_catalog(n)?;
        let spec_json: serde_json::Value =
            serde_json::from_str(&spec.to_json()).map_err(|e| Failure::Internal(e.to_string()))?;
        Ok(serde_json::json!({
            "name": n,
            "spec": spec_json,
            "substitution": subst.map(|s| s.to_string()),
        }))
    };
    let value = match name {
        Some(n) => entry(n)?,
        None => serde_json::Value::Array(CATALOG.iter().map(|n| entry(n)).collect::<Outcome<_>>()?),
    };
    println!("{}", serde_json::to_string_pretty(&value).expect("catalog serializes"));
    Ok(ExitCode::SUCCESS)
}

fn run(cli: &Cli) -> Outcome<ExitCode> {
    match &cli.command {
        Command::Series(a) => cmd_series(a),
        Command::Check(a) => cmd_check(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Specialize(a) => cmd_specialize(a),
        Command::Catalog { name } => cmd_catalog(name),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match std::panic::catch_unwind(|| run(&cli)) {
        Ok(Ok(code)) => code,
        Ok(Err(Failure::Usage(msg))) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Ok(Err(Failure::Internal(msg))) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(3)
        }
        Err(_) => ExitCode::from(3),
    }
}
