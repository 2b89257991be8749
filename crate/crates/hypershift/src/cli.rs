//! Command-line front end. Three subcommands: `language` prints per-length
//! counts for a generated language, `check <name>` runs one certificate
//! search, `verify-paper` chains the full headline pipeline on a tilde spec.
//!
//! Exit codes: 0 certified/found, 1 absent at the chosen resolution,
//! 2 invalid input, 3 resolution or search-capacity limit.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, to_value};

use crate::analysis::{self, Verdict};
use crate::certificate::{Certificate, Resolution};
use crate::error::{Error, Result};
use crate::hyperspace::{self, TraceSet, VietorisBasic};
use crate::shiftspace::{rat_string, substitution_orbit_prefix, Language, ShiftSpaceSpec, Word};
use crate::tilde::{self, BBAR_BLOCKS, ORBIT_PREFIX_LEN};

pub const DEFAULT_DEPTH: usize = 32;
pub const DEFAULT_J: usize = 3;
pub const DEFAULT_HORIZON: usize = 8;
pub const DEFAULT_P_MAX: usize = 6;
pub const DEFAULT_M_MAX: usize = 8;
pub const DEFAULT_K_MAX: usize = 8;
pub const DEFAULT_N_MAX: usize = 64;

pub const CHECK_NAMES: [&str; 12] = [
    "periodic",
    "almost-periodic",
    "transitive",
    "mixing",
    "weak-mixing",
    "sensitive",
    "devaney",
    "hausdorff",
    "invariant-subset",
    "hyper-density",
    "hyper-transitive",
    "bbar",
];

#[derive(Parser, Debug)]
#[command(
    name = "hypershift",
    version,
    about = "Finite-resolution certificates for shift spaces and their induced hyperspace shifts"
)]
pub struct Cli {
    #[command(subcommand)]
    pub cmd: Cmd,
}

// parsed once at startup; variant size imbalance is irrelevant here
#[allow(clippy::large_enum_variant)]
#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Generate a truncated language and report counts and sample words
    Language {
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Run one named check and emit its certificate
    Check {
        /// Check to run; an unrecognised name lists the valid ones
        name: String,
        #[command(flatten)]
        common: CommonOpts,
        #[command(flatten)]
        objects: ObjectOpts,
    },
    /// Run the full pipeline on a tilde spec and print the combined report
    VerifyPaper {
        #[command(flatten)]
        common: CommonOpts,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Args, Debug, Clone, Default)]
pub struct CommonOpts {
    /// Shift space, e.g. "full:k=2", "sft:k=2;forbid=11",
    /// "subst:0->01;1->10;seed=0", or "tilde(subst:...)"
    #[arg(long)]
    pub spec: Option<String>,
    /// Language truncation depth L
    #[arg(long)]
    pub depth: Option<usize>,
    /// Cylinder resolution j
    #[arg(long)]
    pub j: Option<usize>,
    /// Shift-count horizon for mixing-style scans
    #[arg(long)]
    pub horizon: Option<usize>,
    /// Largest period scanned for periodic words
    #[arg(long = "p-max")]
    pub p_max: Option<usize>,
    /// Largest invariance period tried for hyperspace subsets
    #[arg(long = "m-max")]
    pub m_max: Option<usize>,
    /// Number of verification windows for recipe checks
    #[arg(long = "k-max")]
    pub k_max: Option<usize>,
    /// Step budget for the sensitivity search (default: horizon)
    #[arg(long)]
    pub steps: Option<usize>,
    /// Largest connecting gap tried for transitivity (default: horizon)
    #[arg(long = "gap-max")]
    pub gap_max: Option<usize>,
    /// Largest shift count tried for hyper-transitivity and recurrence
    #[arg(long = "n-max")]
    pub n_max: Option<usize>,
    /// key=value file supplying any of the options above; flags win
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the certificate to this file instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Omit the generated-at stamp so reruns are byte-identical
    #[arg(long)]
    pub reproducible: bool,
}

#[derive(Args, Debug, Clone, Default)]
pub struct ObjectOpts {
    /// First cylinder word
    #[arg(long)]
    pub u: Option<String>,
    /// Second cylinder word
    #[arg(long)]
    pub v: Option<String>,
    /// First cylinder of the second pair (weak-mixing)
    #[arg(long)]
    pub u2: Option<String>,
    /// Second cylinder of the second pair (weak-mixing)
    #[arg(long)]
    pub v2: Option<String>,
    /// Cylinder word (sensitive, invariant-subset, bbar)
    #[arg(long)]
    pub cylinder: Option<String>,
    /// Comma-separated words forming the first trace (hausdorff)
    #[arg(long = "trace-a")]
    pub trace_a: Option<String>,
    /// Comma-separated words forming the second trace (hausdorff)
    #[arg(long = "trace-b")]
    pub trace_b: Option<String>,
    /// Comma-separated cylinders of the source Vietoris basic
    #[arg(long = "hyper-u")]
    pub hyper_u: Option<String>,
    /// Comma-separated cylinders of the target Vietoris basic
    #[arg(long = "hyper-v")]
    pub hyper_v: Option<String>,
}

/// Fully resolved run parameters: flag, then config file, then default.
#[derive(Debug, Clone)]
pub struct Settings {
    pub spec: Option<String>,
    pub depth: usize,
    pub j: usize,
    pub horizon: usize,
    pub p_max: usize,
    pub m_max: usize,
    pub k_max: usize,
    pub steps: usize,
    pub gap_max: usize,
    /// No global default: the orbit-recurrence scan wants a deep bound,
    /// the hyperspace searches a depth-bounded one. Checks pick their own.
    pub n_max: Option<usize>,
}

const CONFIG_KEYS: [&str; 10] = [
    "spec", "depth", "j", "horizon", "p_max", "m_max", "k_max", "steps", "gap_max", "n_max",
];

fn parse_config(path: &PathBuf) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path)?;
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(Error::InvalidInput(format!(
                "{}:{}: expected key=value, got `{line}`",
                path.display(),
                i + 1
            )));
        };
        map.insert(k.trim().replace('-', "_"), v.trim().to_string());
    }
    Ok(map)
}

pub fn settings(common: &CommonOpts) -> Result<Settings> {
    let file = match &common.config {
        Some(p) => parse_config(p)?,
        None => BTreeMap::new(),
    };
    if let Some(k) = file.keys().find(|k| !CONFIG_KEYS.contains(&k.as_str())) {
        return Err(Error::InvalidInput(format!(
            "unknown config key `{k}`; known keys: {}",
            CONFIG_KEYS.join(", ")
        )));
    }
    let num = |flag: Option<usize>, key: &str| -> Result<Option<usize>> {
        if flag.is_some() {
            return Ok(flag);
        }
        match file.get(key) {
            Some(raw) => raw.parse::<usize>().map(Some).map_err(|_| {
                Error::InvalidInput(format!("config key `{key}` wants an integer, got `{raw}`"))
            }),
            None => Ok(None),
        }
    };
    let depth = num(common.depth, "depth")?.unwrap_or(DEFAULT_DEPTH);
    let j = num(common.j, "j")?.unwrap_or(DEFAULT_J);
    let horizon = num(common.horizon, "horizon")?.unwrap_or(DEFAULT_HORIZON);
    let p_max = num(common.p_max, "p_max")?.unwrap_or(DEFAULT_P_MAX);
    let m_max = num(common.m_max, "m_max")?.unwrap_or(DEFAULT_M_MAX);
    let k_max = num(common.k_max, "k_max")?.unwrap_or(DEFAULT_K_MAX);
    let steps = num(common.steps, "steps")?.unwrap_or(horizon);
    let gap_max = num(common.gap_max, "gap_max")?.unwrap_or(horizon);
    let n_max = num(common.n_max, "n_max")?;
    let spec = common.spec.clone().or_else(|| file.get("spec").cloned());
    for (name, v) in [
        ("depth", depth),
        ("j", j),
        ("horizon", horizon),
        ("p-max", p_max),
        ("m-max", m_max),
        ("k-max", k_max),
        ("steps", steps),
        ("gap-max", gap_max),
        ("n-max", n_max.unwrap_or(1)),
    ] {
        if v == 0 {
            return Err(Error::InvalidInput(format!("--{name} must be at least 1")));
        }
    }
    Ok(Settings { spec, depth, j, horizon, p_max, m_max, k_max, steps, gap_max, n_max })
}

impl Settings {
    fn require_spec(&self) -> Result<ShiftSpaceSpec> {
        match &self.spec {
            Some(s) => s.parse(),
            None => Err(Error::InvalidInput(
                "--spec is required (or set spec= in the --config file)".into(),
            )),
        }
    }
}

fn required_word(opt: &Option<String>, flag: &str) -> Result<Word> {
    match opt {
        Some(s) => s.parse(),
        None => Err(Error::InvalidInput(format!("--{flag} is required for this check"))),
    }
}

fn word_list(opt: &Option<String>, flag: &str) -> Result<Vec<Word>> {
    let Some(s) = opt else {
        return Err(Error::InvalidInput(format!("--{flag} is required for this check")));
    };
    s.split(',').map(|part| part.trim().parse::<Word>()).collect()
}

fn emit(common: &CommonOpts, cert: Certificate) -> Result<()> {
    let cert = if common.reproducible { cert } else { cert.stamped() };
    let rendered = match common.format {
        Format::Json => cert.to_json()?,
        Format::Text => cert.to_text()?,
    };
    match &common.out {
        Some(path) => std::fs::write(path, rendered)?,
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            if let Err(e) = stdout.write_all(rendered.as_bytes()).and_then(|()| stdout.flush()) {
                if e.kind() == std::io::ErrorKind::BrokenPipe {
                    return Ok(()); // downstream closed; nothing left to say
                }
                return Err(Error::Io(e));
            }
        }
    }
    Ok(())
}

/// Prefix message-carrying errors with the pipeline stage that raised them.
fn stage<T>(name: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| {
        use Error::*;
        match e {
            InvalidInput(m) => InvalidInput(format!("{name}: {m}")),
            ResolutionExceeded(m) => ResolutionExceeded(format!("{name}: {m}")),
            ResolutionExhausted(m) => ResolutionExhausted(format!("{name}: {m}")),
            NonConvergence(m) => NonConvergence(format!("{name}: {m}")),
            MatchFailure(m) => MatchFailure(format!("{name}: {m}")),
            RecurrenceFailure(m) => RecurrenceFailure(format!("{name}: {m}")),
            PrefixTooShort(m) => PrefixTooShort(format!("{name}: {m}")),
            Internal(m) => Internal(format!("{name}: {m}")),
            other => other,
        }
    })
}

pub fn run() -> ! {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}

pub fn execute(cli: &Cli) -> Result<i32> {
    match &cli.cmd {
        Cmd::Language { common } => cmd_language(common),
        Cmd::Check { name, common, objects } => cmd_check(name, common, objects),
        Cmd::VerifyPaper { common } => cmd_verify_paper(common),
    }
}

fn cmd_language(common: &CommonOpts) -> Result<i32> {
    let st = settings(common)?;
    let spec = st.require_spec()?;
    let lang = Language::generate(&spec, st.depth)?;
    let mut counts = Vec::with_capacity(st.depth);
    for n in 1..=st.depth {
        // counts can exceed what a JSON number carries, so ship strings
        counts.push(json!({"n": n, "count": lang.count(n)?.to_string()}));
    }
    let sample_length = st.depth.min(4);
    let samples: Vec<String> = lang
        .words_of_length(sample_length)?
        .iter()
        .take(16)
        .map(|w| w.to_string())
        .collect();
    let cert = Certificate::new(
        "language",
        &spec.to_string(),
        Resolution::depth(st.depth),
        json!({}),
        json!({
            "alphabet_size": lang.alphabet_size(),
            "counts": counts,
            "sample_length": sample_length,
            "samples": samples,
        }),
        "generated",
    );
    emit(common, cert)?;
    Ok(0)
}

fn cmd_check(name: &str, common: &CommonOpts, objects: &ObjectOpts) -> Result<i32> {
    let st = settings(common)?;
    match name {
        "periodic" => check_periodic(common, &st),
        "almost-periodic" => check_almost_periodic(common, &st),
        "transitive" => check_transitive(common, objects, &st),
        "mixing" => check_mixing(common, objects, &st),
        "weak-mixing" => check_weak_mixing(common, objects, &st),
        "sensitive" => check_sensitive(common, objects, &st),
        "devaney" => check_devaney(common, &st),
        "hausdorff" => check_hausdorff(common, objects, &st),
        "invariant-subset" => check_invariant_subset(common, objects, &st),
        "hyper-density" => check_hyper_density(common, &st),
        "hyper-transitive" => check_hyper_transitive(common, objects, &st),
        "bbar" => check_bbar(common, objects, &st),
        _ => Err(Error::InvalidInput(format!(
            "unknown check `{name}`; valid names: {}",
            CHECK_NAMES.join(", ")
        ))),
    }
}

fn check_periodic(common: &CommonOpts, st: &Settings) -> Result<i32> {
    let spec = st.require_spec()?;
    let lang = Language::generate(&spec, st.depth)?;
    let found = analysis::enumerate_periodic_words(&lang, st.p_max)?;
    let ok = !found.is_empty();
    let cert = Certificate::new(
        "periodic",
        &spec.to_string(),
        Resolution { p_max: Some(st.p_max), ..Resolution::depth(st.depth) },
        json!({}),
        json!({"count": found.len(), "periodic_words": found}),
        if ok { "certified" } else { "absent-at-resolution" },
    );
    emit(common, cert)?;
    Ok(if ok { 0 } else { 1 })
}

fn check_almost_periodic(common: &CommonOpts, st: &Settings) -> Result<i32> {
    let spec = st.require_spec()?;
    let n_max = st.n_max.unwrap_or(DEFAULT_N_MAX);
    let orbit = substitution_orbit_prefix(&spec, ORBIT_PREFIX_LEN)?;
    let got = analysis::almost_periodicity_certificate(&orbit, st.j, n_max)?;
    let ok = got.is_some();
    let witnesses = match &got {
        Some(c) => to_value(c).map_err(|e| Error::Internal(e.to_string()))?,
        None => json!({"scanned_to": n_max}),
    };
    let cert = Certificate::new(
        "almost-periodic",
        &spec.to_string(),
        Resolution { j: Some(st.j), n_max: Some(n_max), ..Resolution::depth(orbit.len()) },
        json!({"orbit_prefix_length": orbit.len()}),
        witnesses,
        if ok { "certified" } else { "absent-at-resolution" },
    );
    emit(common, cert)?;
    Ok(if ok { 0 } else { 1 })
}

fn check_transitive(common: &CommonOpts, objects: &ObjectOpts, st: &Settings) -> Result<i32> {
    let spec = st.require_spec()?;
    let lang = Language::generate(&spec, st.depth)?;
    let u = required_word(&objects.u, "u")?;
    let v = required_word(&objects.v, "v")?;
    let got = analysis::transitivity_certificate(&lang, &u, &v, st.gap_max)?;
    let ok = got.is_some();
    let witnesses = match &got {
        Some((n, w)) => json!({"n": n, "w": w.to_string()}),
        None => json!({"searched_to": st.gap_max}),
    };
    let cert = Certificate::new(
        "transitive",
        &spec.to_string(),
        Resolution { gap_max: Some(st.gap_max), ..Resolution::depth(st.depth) },
        json!({"u": u.to_string(), "v": v.to_string()}),
        witnesses,
        if ok { "certified" } else { "absent-at-resolution" },
    );
    emit(common, cert)?;
    Ok(if ok { 0 } else { 1 })
}

fn check_mixing(common: &CommonOpts, objects: &ObjectOpts, st: &Settings) -> Result<i32> {
    let spec = st.require_spec()?;
    let lang = Language::generate(&spec, st.depth)?;
    let u = required_word(&objects.u, "u")?;
    let v = required_word(&objects.v, "v")?;
    let got = if matches!(spec, ShiftSpaceSpec::TildeExtension { .. }) {
        tilde::tilde_mixing_certificate(&lang, &u, &v, st.horizon)?
    } else {
        analysis::mixing_certificate(&lang, &u, &v, st.horizon)?
    };
    let ok = got.is_some();
    let witnesses = match &got {
        Some(c) => to_value(c).map_err(|e| Error::Internal(e.to_string()))?,
        None => json!({"horizon": st.horizon}),
    };
    let cert = Certificate::new(
        "mixing",
        &spec.to_string(),
        Resolution { horizon: Some(st.horizon), ..Resolution::depth(st.depth) },
        json!({"u": u.to_string(), "v": v.to_string()}),
        witnesses,
        if ok { "certified" } else { "absent-at-resolution" },
    );
    emit(common, cert)?;
    Ok(if ok { 0 } else { 1 })
}

fn check_weak_mixing(common: &CommonOpts, objects: &ObjectOpts, st: &Settings) -> Result<i32> {
    let spec = st.require_spec()?;
    let lang = Language::generate(&spec, st.depth)?;
    let u1 = required_word(&objects.u, "u")?;
    let v1 = required_word(&objects.v, "v")?;
    let u2 = required_word(&objects.u2, "u2")?;
    let v2 = required_word(&objects.v2, "v2")?;
    let got = analysis::weak_mixing_certificate(&lang, &u1, &v1, &u2, &v2, st.gap_max)?;
    let ok = got.is_some();
    let witnesses = match &got {
        Some(c) => to_value(c).map_err(|e| Error::Internal(e.to_string()))?,
        None => json!({"searched_to": st.gap_max}),
    };
    let cert = Certificate::new(
        "weak-mixing",
        &spec.to_string(),
        Resolution { gap_max: Some(st.gap_max), ..Resolution::depth(st.depth) },
        json!({
            "u": u1.to_string(), "v": v1.to_string(),
            "u2": u2.to_string(), "v2": v2.to_string(),
        }),
        witnesses,
        if ok { "certified" } else { "absent-at-resolution" },
    );
    emit(common, cert)?;
    Ok(if ok { 0 } else { 1 })
}

fn check_sensitive(common: &CommonOpts, objects: &ObjectOpts, st: &Settings) -> Result<i32> {
    let spec = st.require_spec()?;
    let lang = Language::generate(&spec, st.depth)?;
    let u = match &objects.cylinder {
        Some(s) => s.parse()?,
        None => Word::empty(),
    };
    let got = analysis::sensitivity_witness(&lang, &u, st.steps)?;
    let ok = got.is_some();
    let witnesses = match &got {
        Some(w) => to_value(w).map_err(|e| Error::Internal(e.to_string()))?,
        None => json!({"steps": st.steps}),
    };
    let cert = Certificate::new(
        "sensitive",
        &spec.to_string(),
        Resolution { steps: Some(st.steps), ..Resolution::depth(st.depth) },
        json!({"cylinder": u.to_string()}),
        witnesses,
        if ok { "certified" } else { "absent-at-resolution" },
    );
    emit(common, cert)?;
    Ok(if ok { 0 } else { 1 })
}

fn check_devaney(common: &CommonOpts, st: &Settings) -> Result<i32> {
    let spec = st.require_spec()?;
    if st.j + st.horizon > st.depth || 2 * st.j > st.depth || st.p_max > st.depth {
        return Err(Error::InvalidInput(format!(
            "devaney needs depth >= j+horizon, depth >= 2*j and p-max <= depth \
             (depth={}, j={}, horizon={}, p-max={})",
            st.depth, st.j, st.horizon, st.p_max
        )));
    }
    let lang = Language::generate(&spec, st.depth)?;
    let verdict = analysis::devaney_verdict(&lang, st.j, st.horizon, st.p_max)?;
    let code = if verdict.verdict == Verdict::Certified { 0 } else { 1 };
    let label = verdict.verdict.to_string();
    let cert = Certificate::new(
        "devaney",
        &spec.to_string(),
        Resolution {
            j: Some(st.j),
            horizon: Some(st.horizon),
            p_max: Some(st.p_max),
            ..Resolution::depth(st.depth)
        },
        json!({}),
        to_value(&verdict).map_err(|e| Error::Internal(e.to_string()))?,
        &label,
    );
    emit(common, cert)?;
    Ok(code)
}

fn check_hausdorff(common: &CommonOpts, objects: &ObjectOpts, st: &Settings) -> Result<i32> {
    let a = TraceSet::new(word_list(&objects.trace_a, "trace-a")?)?;
    let b = TraceSet::new(word_list(&objects.trace_b, "trace-b")?)?;
    let d = hyperspace::hausdorff_distance(&a, &b)?;
    let spec_label = st.spec.clone().unwrap_or_else(|| "-".into());
    let cert = Certificate::new(
        "hausdorff",
        &spec_label,
        Resolution::depth(a.resolution),
        json!({
            "trace_a": a.words.iter().map(Word::to_string).collect::<Vec<_>>(),
            "trace_b": b.words.iter().map(Word::to_string).collect::<Vec<_>>(),
        }),
        json!({"distance": rat_string(d)}),
        "computed",
    );
    emit(common, cert)?;
    Ok(0)
}

fn check_invariant_subset(common: &CommonOpts, objects: &ObjectOpts, st: &Settings) -> Result<i32> {
    let spec = st.require_spec()?;
    let lang = Language::generate(&spec, st.depth)?;
    let u = required_word(&objects.cylinder, "cylinder")?;
    let got = hyperspace::invariant_subset_certificate(&lang, &u, st.m_max, st.depth)?;
    let ok = got.is_some();
    let witnesses = match &got {
        Some(c) => to_value(c).map_err(|e| Error::Internal(e.to_string()))?,
        None => json!({"m_max": st.m_max}),
    };
    let cert = Certificate::new(
        "invariant-subset",
        &spec.to_string(),
        Resolution { m_max: Some(st.m_max), ..Resolution::depth(st.depth) },
        json!({"cylinder": u.to_string()}),
        witnesses,
        if ok { "certified" } else { "absent-at-resolution" },
    );
    emit(common, cert)?;
    Ok(if ok { 0 } else { 1 })
}

fn check_hyper_density(common: &CommonOpts, st: &Settings) -> Result<i32> {
    let spec = st.require_spec()?;
    let lang = Language::generate(&spec, st.depth)?;
    let report = hyperspace::hyper_periodic_density_check(&lang, st.j, st.m_max, st.depth)?;
    let ok = report.combined.is_some();
    let cert = Certificate::new(
        "hyper-density",
        &spec.to_string(),
        Resolution { j: Some(st.j), m_max: Some(st.m_max), ..Resolution::depth(st.depth) },
        json!({}),
        to_value(&report).map_err(|e| Error::Internal(e.to_string()))?,
        if ok { "certified" } else { "absent-at-resolution" },
    );
    emit(common, cert)?;
    Ok(if ok { 0 } else { 1 })
}

fn check_hyper_transitive(common: &CommonOpts, objects: &ObjectOpts, st: &Settings) -> Result<i32> {
    let spec = st.require_spec()?;
    let lang = Language::generate(&spec, st.depth)?;
    let gu = VietorisBasic::new(word_list(&objects.hyper_u, "hyper-u")?)?;
    let gv = VietorisBasic::new(word_list(&objects.hyper_v, "hyper-v")?)?;
    let n_max = st.n_max.unwrap_or(st.horizon);
    let got = hyperspace::hyper_transitivity_witness(&lang, &gu, &gv, n_max)?;
    let ok = got.is_some();
    let witnesses = match &got {
        Some(w) => to_value(w).map_err(|e| Error::Internal(e.to_string()))?,
        None => json!({"searched_to": n_max}),
    };
    let cert = Certificate::new(
        "hyper-transitive",
        &spec.to_string(),
        Resolution { n_max: Some(n_max), ..Resolution::depth(st.depth) },
        json!({"hyper_u": gu.to_string(), "hyper_v": gv.to_string()}),
        witnesses,
        if ok { "certified" } else { "absent-at-resolution" },
    );
    emit(common, cert)?;
    Ok(if ok { 0 } else { 1 })
}

fn check_bbar(common: &CommonOpts, objects: &ObjectOpts, st: &Settings) -> Result<i32> {
    let spec = st.require_spec()?;
    let ShiftSpaceSpec::TildeExtension { inner } = &spec else {
        return Err(Error::InvalidInput(format!(
            "bbar needs a tilde(...) spec, got `{spec}`"
        )));
    };
    let cyl = required_word(&objects.cylinder, "cylinder")?;
    let inner_lang = Language::generate(inner, st.depth)?;
    let orbit = substitution_orbit_prefix(inner, ORBIT_PREFIX_LEN)?;
    let recipe = tilde::build_bbar(&cyl, &inner_lang, &orbit, BBAR_BLOCKS)?;
    let tlang = Language::generate(&spec, st.depth)?;
    let verification = tilde::verify_bbar(&recipe, &tlang, st.k_max)?;
    let omega = tilde::omega_limit_trace(&recipe, st.depth)?;
    let ok = verification.ok;
    let cert = Certificate::new(
        "bbar",
        &spec.to_string(),
        Resolution { k_max: Some(st.k_max), ..Resolution::depth(st.depth) },
        json!({"cylinder": cyl.to_string(), "blocks": BBAR_BLOCKS}),
        json!({"recipe": recipe, "verification": verification, "omega": omega}),
        if ok { "certified" } else { "refuted" },
    );
    emit(common, cert)?;
    Ok(if ok { 0 } else { 1 })
}

#[derive(Serialize)]
struct MixingPairSummary {
    u: String,
    v: String,
    #[serde(rename = "N")]
    n_bound: Option<usize>,
}

#[derive(Serialize)]
struct TildeMixingBlock {
    pairs: usize,
    certified: usize,
    entries: Vec<MixingPairSummary>,
}

#[derive(Serialize)]
struct PaperReport {
    base: analysis::DevaneyVerdict,
    periodic_scan: tilde::TildePeriodicScanReport,
    hyper_density: hyperspace::HyperPeriodicDensityReport,
    tilde_mixing: TildeMixingBlock,
    hyper_mixing: hyperspace::HyperMixingReport,
}

pub const CONCLUSION_SPLIT: &str = "HYPER-DEVANEY-CERTIFIED; BASE-PERIODIC-DENSITY-ABSENT";
pub const CONCLUSION_BOTH: &str = "BOTH-CERTIFIED";
pub const CONCLUSION_OPEN: &str = "INCONCLUSIVE-AT-RESOLUTION";

fn cmd_verify_paper(common: &CommonOpts) -> Result<i32> {
    let st = settings(common)?;
    let spec = st.require_spec()?;
    if !matches!(spec, ShiftSpaceSpec::TildeExtension { .. }) {
        return Err(Error::InvalidInput(format!(
            "verify-paper needs a tilde(...) spec, got `{spec}`"
        )));
    }
    if st.j + st.horizon > st.depth || 2 * st.j > st.depth {
        return Err(Error::InvalidInput(format!(
            "verify-paper needs depth >= j+horizon and depth >= 2*j \
             (depth={}, j={}, horizon={})",
            st.depth, st.j, st.horizon
        )));
    }

    let tlang = stage("language", Language::generate(&spec, st.depth))?;
    let base = stage("base-devaney", analysis::devaney_verdict(&tlang, st.j, st.horizon, st.p_max))?;
    let scan = stage("periodic-scan", tilde::tilde_periodic_scan(&tlang, st.p_max))?;
    let density = stage(
        "hyper-density",
        hyperspace::hyper_periodic_density_check(&tlang, st.j, st.m_max, st.depth),
    )?;

    // direct mixing sweep over every ordered pair of short cylinders
    let mut short_words = stage("tilde-mixing", tlang.words_of_length(1))?;
    short_words.extend(stage("tilde-mixing", tlang.words_of_length(2))?);
    let mut entries = Vec::with_capacity(short_words.len() * short_words.len());
    let mut certified = 0usize;
    for u in &short_words {
        for v in &short_words {
            let got = stage(
                "tilde-mixing",
                tilde::tilde_mixing_certificate(&tlang, u, v, st.horizon),
            )?;
            let n_bound = got.as_ref().map(|c| c.n_bound);
            if n_bound.is_some() {
                certified += 1;
            }
            entries.push(MixingPairSummary { u: u.to_string(), v: v.to_string(), n_bound });
        }
    }
    let all_tilde_finite = certified == entries.len();
    let tilde_mixing = TildeMixingBlock { pairs: entries.len(), certified, entries };

    // corroborating sweep through the induced shift on sampled basics
    let basics = stage("hyper-mixing", hyperspace::sampled_basics(&tlang))?;
    let basic_pairs: Vec<(VietorisBasic, VietorisBasic)> = basics
        .iter()
        .flat_map(|a| basics.iter().map(move |b| (a.clone(), b.clone())))
        .collect();
    let hyper_mixing = stage(
        "hyper-mixing",
        hyperspace::hyper_mixing_corroboration(&tlang, &basic_pairs, st.horizon),
    )?;
    let all_hyper_finite = hyper_mixing.pairs.iter().all(|p| p.hyper_n.is_some());

    let hyper_ok = density.combined.is_some() && all_tilde_finite && all_hyper_finite;
    let base_dense = base.periodically_dense.is_some();
    let (conclusion, code) = if hyper_ok && !base_dense && scan.conclusive {
        (CONCLUSION_SPLIT, 0)
    } else if hyper_ok && base.verdict == Verdict::Certified {
        (CONCLUSION_BOTH, 1)
    } else {
        (CONCLUSION_OPEN, 1)
    };

    let report = PaperReport {
        base,
        periodic_scan: scan,
        hyper_density: density,
        tilde_mixing,
        hyper_mixing,
    };
    let cert = Certificate::new(
        "verify-paper",
        &spec.to_string(),
        Resolution {
            j: Some(st.j),
            horizon: Some(st.horizon),
            p_max: Some(st.p_max),
            m_max: Some(st.m_max),
            k_max: Some(st.k_max),
            ..Resolution::depth(st.depth)
        },
        json!({}),
        to_value(&report).map_err(|e| Error::Internal(e.to_string()))?,
        conclusion,
    );
    emit(common, cert)?;
    Ok(code)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> CommonOpts {
        CommonOpts::default()
    }

    #[test]
    fn defaults_resolve() {
        let st = settings(&opts()).unwrap();
        assert_eq!(
            (st.depth, st.j, st.horizon, st.p_max, st.m_max, st.k_max),
            (32, 3, 8, 6, 8, 8)
        );
        // gap and step budgets track the horizon unless set
        assert_eq!((st.steps, st.gap_max, st.n_max), (8, 8, None));
        assert!(st.spec.is_none());
    }

    #[test]
    fn config_file_merges_under_flags() {
        let dir = std::env::temp_dir().join(format!("hypershift-cli-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("merge.conf");
        std::fs::write(&path, "# comment\nspec = full:k=2\ndepth = 12\np-max = 4\n").unwrap();
        let mut common = opts();
        common.config = Some(path.clone());
        common.depth = Some(20); // flag beats file
        let st = settings(&common).unwrap();
        assert_eq!(st.depth, 20);
        assert_eq!(st.p_max, 4);
        assert_eq!(st.spec.as_deref(), Some("full:k=2"));

        std::fs::write(&path, "bogus-key = 3\n").unwrap();
        let mut common = opts();
        common.config = Some(path.clone());
        let err = settings(&common).unwrap_err();
        assert!(matches!(err, Error::InvalidInput(_)));
        assert_eq!(err.exit_code(), 2);

        std::fs::write(&path, "depth\n").unwrap();
        let mut common = opts();
        common.config = Some(path);
        assert!(settings(&common).is_err());
    }

    #[test]
    fn zero_parameters_are_rejected() {
        let mut common = opts();
        common.j = Some(0);
        let err = settings(&common).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn unknown_check_lists_names() {
        let err = cmd_check("nonsense", &opts(), &ObjectOpts::default()).unwrap_err();
        let msg = err.to_string();
        for name in CHECK_NAMES {
            assert!(msg.contains(name), "missing {name} in {msg}");
        }
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn check_writes_out_file() {
        let dir = std::env::temp_dir().join(format!("hypershift-out-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("mixing.json");
        let mut common = opts();
        common.spec = Some("full:k=2".into());
        common.depth = Some(10);
        common.horizon = Some(5);
        common.out = Some(path.clone());
        common.reproducible = true;
        let objects = ObjectOpts {
            u: Some("01".into()),
            v: Some("10".into()),
            ..ObjectOpts::default()
        };
        let code = cmd_check("mixing", &common, &objects).unwrap();
        assert_eq!(code, 0);
        let body = std::fs::read_to_string(&path).unwrap();
        assert!(body.contains("\"kind\": \"mixing\""));
        assert!(body.contains("\"verdict\": \"certified\""));
        assert!(!body.contains("generated_at_unix"));
    }
}
