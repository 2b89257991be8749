//! The induced dynamics on trace sets: finite stand-ins for compact
//! subsets, the Hausdorff metric, Vietoris basic neighbourhoods, and
//! certificates that periodic density / transitivity / mixing hold for the
//! induced shift even where the base language lacks them.

use std::collections::BTreeSet;

use num_integer::Integer;
use serde::Serialize;

use crate::analysis::{least_gap_word, mixing_certificate, periodic_candidates};
use crate::error::{Error, Result};
use crate::shiftspace::{metric_distance, substitution_orbit_prefix, Language, Rat, ShiftSpaceSpec, Word};
use crate::tilde::{self, BBAR_BLOCKS, BBAR_VERIFY_K, ORBIT_PREFIX_LEN};

/// Largest pool for which the exhaustive invariant-subset search runs.
pub const SUBSET_SEARCH_CAP: usize = 20;

/// A finite trace of a compact set: its distinct length-`resolution`
/// opening words, canonically ordered.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceSet {
    pub resolution: usize,
    pub words: BTreeSet<Word>,
}

impl TraceSet {
    pub fn new<I: IntoIterator<Item = Word>>(words: I) -> Result<TraceSet> {
        let words: BTreeSet<Word> = words.into_iter().collect();
        let resolution = match words.iter().next() {
            Some(w) => w.len(),
            None => return Err(Error::InvalidInput("a trace set cannot be empty".into())),
        };
        if let Some(w) = words.iter().find(|w| w.len() != resolution) {
            return Err(Error::InvalidInput(format!(
                "trace words must share one resolution: found lengths {} and {}",
                resolution,
                w.len()
            )));
        }
        Ok(TraceSet { resolution, words })
    }

    pub fn singleton(w: Word) -> Result<TraceSet> {
        TraceSet::new([w])
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        false // by construction
    }
}

/// Exact Hausdorff distance between two traces at one resolution.
pub fn hausdorff_distance(a: &TraceSet, b: &TraceSet) -> Result<Rat> {
    if a.resolution != b.resolution {
        return Err(Error::InvalidInput(format!(
            "trace resolutions differ: {} vs {}",
            a.resolution, b.resolution
        )));
    }
    let directed = |from: &TraceSet, to: &TraceSet| -> Result<Rat> {
        let mut worst = Rat::from_integer(0);
        for x in &from.words {
            let mut best: Option<Rat> = None;
            for y in &to.words {
                let d = metric_distance(x, y)?;
                if best.is_none_or(|b| d < b) {
                    best = Some(d);
                }
            }
            let best = best.unwrap();
            if best > worst {
                worst = best;
            }
        }
        Ok(worst)
    };
    Ok(directed(a, b)?.max(directed(b, a)?))
}

/// All admissible words within distance < `eps` of some word of `a`:
/// exactly the words agreeing with one of them on the first
/// `floor(1/eps)` symbols.
pub fn dilatation(lang: &Language, a: &TraceSet, eps: Rat) -> Result<TraceSet> {
    if eps <= Rat::from_integer(0) {
        return Err(Error::InvalidInput("eps must be positive".into()));
    }
    let agree = ((*eps.denom() / *eps.numer()) as usize).min(a.resolution);
    let mut words = BTreeSet::new();
    for w in &a.words {
        let prefix = w.truncated(agree);
        words.extend(lang.extensions(&prefix, a.resolution - agree)?);
    }
    TraceSet::new(words)
}

/// One application of the induced shift: every word loses its head symbol.
pub fn induced_shift(a: &TraceSet) -> Result<TraceSet> {
    induced_shift_pow(a, 1)
}

/// `m` applications of the induced shift at once.
pub fn induced_shift_pow(a: &TraceSet, m: usize) -> Result<TraceSet> {
    if m >= a.resolution {
        return Err(Error::ResolutionExhausted(format!(
            "cannot shift a resolution-{} trace {m} times",
            a.resolution
        )));
    }
    TraceSet::new(a.words.iter().map(|w| w.shifted(m)))
}

/// A basic Vietoris neighbourhood, named by the cylinders it opens.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VietorisBasic {
    pub cylinders: Vec<Word>,
}

impl VietorisBasic {
    pub fn new(cylinders: Vec<Word>) -> Result<VietorisBasic> {
        if cylinders.is_empty() {
            return Err(Error::InvalidInput("a Vietoris basic needs at least one cylinder".into()));
        }
        Ok(VietorisBasic { cylinders })
    }
}

impl std::fmt::Display for VietorisBasic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.cylinders.iter().map(|w| format!("[{w}]")).collect();
        write!(f, "B({})", parts.join(","))
    }
}

/// Membership of a trace in a basic neighbourhood: every word opens some
/// cylinder of the basic (cover) and every cylinder is opened (meet).
pub fn vietoris_member(a: &TraceSet, basic: &VietorisBasic) -> Result<bool> {
    for g in &basic.cylinders {
        if g.len() > a.resolution {
            return Err(Error::ResolutionExceeded(format!(
                "cylinder \"{g}\" is longer than the trace resolution {}",
                a.resolution
            )));
        }
    }
    let cover = a
        .words
        .iter()
        .all(|w| basic.cylinders.iter().any(|g| w.starts_with(g)));
    let meet = basic
        .cylinders
        .iter()
        .all(|g| a.words.iter().any(|w| w.starts_with(g)));
    Ok(cover && meet)
}

/// A trace inside `[cylinder]` that the induced shift maps onto its own
/// truncation after `m` steps.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvariantSubsetCertificate {
    pub cylinder: Word,
    pub m: usize,
    pub trace: TraceSet,
    pub residual_resolution: usize,
    pub route: String,
}

fn check_invariance(cert: &InvariantSubsetCertificate) -> Result<()> {
    let l = cert.trace.resolution;
    if cert.m >= l || cert.residual_resolution != l - cert.m {
        return Err(Error::Internal("invariant certificate with inconsistent resolutions".into()));
    }
    if !cert.trace.words.iter().all(|w| w.starts_with(&cert.cylinder)) {
        return Err(Error::Internal("invariant trace escapes its cylinder".into()));
    }
    let shifted: BTreeSet<Word> = cert.trace.words.iter().map(|w| w.shifted(cert.m)).collect();
    let truncated: BTreeSet<Word> =
        cert.trace.words.iter().map(|w| w.truncated(l - cert.m)).collect();
    if shifted != truncated {
        return Err(Error::Internal("invariant trace fails its own shift equation".into()));
    }
    Ok(())
}

/// Singleton route at one fixed `m`: a rotated periodic word through `u`
/// whose period divides `m` and whose stream stays admissible.
fn periodic_route_at_m(
    lang: &Language,
    u: &Word,
    m: usize,
    l_res: usize,
    candidates: &[Word],
) -> Result<Option<InvariantSubsetCertificate>> {
    for w in candidates.iter().filter(|w| m.is_multiple_of(w.len())) {
        for r in 0..w.len() {
            let stream = w.rotated(r).periodic_prefix(l_res);
            if stream.starts_with(u) && lang.is_admissible(&stream)? {
                let cert = InvariantSubsetCertificate {
                    cylinder: u.clone(),
                    m,
                    trace: TraceSet::singleton(stream)?,
                    residual_resolution: l_res - m,
                    route: "periodic-word".into(),
                };
                check_invariance(&cert)?;
                return Ok(Some(cert));
            }
        }
    }
    Ok(None)
}

/// Singleton route over the whole budget, least `m` first.
fn periodic_invariant_route(
    lang: &Language,
    u: &Word,
    m_max: usize,
    l_res: usize,
    candidates: &[Word],
) -> Result<Option<InvariantSubsetCertificate>> {
    for m in 1..=m_max {
        if let Some(cert) = periodic_route_at_m(lang, u, m, l_res, candidates)? {
            return Ok(Some(cert));
        }
    }
    Ok(None)
}

/// Exhaustive route over every nonempty subset of the admissible pool.
fn subset_search_route(
    u: &Word,
    pool: &[Word],
    m: usize,
    l_res: usize,
) -> Result<Option<InvariantSubsetCertificate>> {
    let p = pool.len();
    let mut ids: std::collections::BTreeMap<Word, u32> = std::collections::BTreeMap::new();
    let mut bit_shift = vec![0u64; p];
    let mut bit_trunc = vec![0u64; p];
    for (i, w) in pool.iter().enumerate() {
        for (word, slot) in [(w.shifted(m), &mut bit_shift[i]), (w.truncated(l_res - m), &mut bit_trunc[i])]
        {
            let next = ids.len() as u32;
            let id = *ids.entry(word).or_insert(next);
            *slot = 1u64 << id;
        }
    }
    let total = 1usize << p;
    let mut or_shift = vec![0u64; total];
    let mut or_trunc = vec![0u64; total];
    for mask in 1..total {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        or_shift[mask] = or_shift[rest] | bit_shift[low];
        or_trunc[mask] = or_trunc[rest] | bit_trunc[low];
        if or_shift[mask] == or_trunc[mask] {
            let members = pool
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, w)| w.clone());
            let cert = InvariantSubsetCertificate {
                cylinder: u.clone(),
                m,
                trace: TraceSet::new(members)?,
                residual_resolution: l_res - m,
                route: "subset-search".into(),
            };
            check_invariance(&cert)?;
            return Ok(Some(cert));
        }
    }
    Ok(None)
}

/// Recurrence route: an eventually-periodic point assembled from the inner
/// orbit, its window set taken past burn-in. Its `m` comes out of the
/// construction rather than the `m_max` budget.
fn omega_limit_route(
    lang: &Language,
    u: &Word,
    l_res: usize,
    n_floor: Option<usize>,
) -> Result<Option<InvariantSubsetCertificate>> {
    let inner = match lang.tilde_inner() {
        Some(inner) if matches!(inner.spec(), ShiftSpaceSpec::Substitution { .. }) => inner,
        _ => return Ok(None),
    };
    let orbit = substitution_orbit_prefix(inner.spec(), ORBIT_PREFIX_LEN)?;
    let recipe = tilde::build_bbar_with_recurrence_floor(u, inner, &orbit, BBAR_BLOCKS, n_floor)?;
    let verification = tilde::verify_bbar(&recipe, lang, BBAR_VERIFY_K)?;
    if !verification.ok {
        return Err(Error::Internal("constructed recurrence prefix failed verification".into()));
    }
    if recipe.m >= l_res {
        return Err(Error::ResolutionExceeded(format!(
            "construction period {} does not fit inside resolution {l_res}",
            recipe.m
        )));
    }
    let omega = tilde::omega_limit_trace(&recipe, l_res)?;
    let cert = InvariantSubsetCertificate {
        cylinder: u.clone(),
        m: recipe.m,
        trace: omega.trace,
        residual_resolution: l_res - recipe.m,
        route: "omega-limit".into(),
    };
    check_invariance(&cert)?;
    Ok(Some(cert))
}

/// Least `m <= m_max` admitting a trace inside `[u]` that the induced
/// shift carries onto its own truncation; falls back to the recurrence
/// construction where the subset pool is out of reach.
pub fn invariant_subset_certificate(
    lang: &Language,
    u: &Word,
    m_max: usize,
    l_res: usize,
) -> Result<Option<InvariantSubsetCertificate>> {
    if u.is_empty() || m_max == 0 {
        return Err(Error::InvalidInput("cylinder must be nonempty and m_max positive".into()));
    }
    if !lang.is_admissible(u)? {
        return Err(Error::InvalidInput(format!("cylinder \"{u}\" is not admissible")));
    }
    if l_res < u.len() + m_max || l_res > lang.depth() {
        return Err(Error::ResolutionExceeded(format!(
            "resolution {l_res} out of range for |u| = {} , m_max = {m_max}, depth {}",
            u.len(),
            lang.depth()
        )));
    }
    let candidates = periodic_candidates(lang.alphabet_size(), m_max)?;
    let pool_size = lang.count_extensions(u, l_res - u.len())?;
    let pool = if pool_size <= SUBSET_SEARCH_CAP as u128 {
        Some(lang.extensions(u, l_res - u.len())?)
    } else {
        None
    };
    for m in 1..=m_max {
        if let Some(cert) = periodic_route_at_m(lang, u, m, l_res, &candidates)? {
            return Ok(Some(cert));
        }
        if let Some(pool) = &pool {
            if let Some(cert) = subset_search_route(u, pool, m, l_res)? {
                return Ok(Some(cert));
            }
        }
    }
    if let Some(cert) = omega_limit_route(lang, u, l_res, None).unwrap_or(None) {
        return Ok(Some(cert));
    }
    if pool.is_none() {
        return Err(Error::SearchSpaceCapExceeded { pool: pool_size, cap: SUBSET_SEARCH_CAP });
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CylinderOutcome {
    pub cylinder: Word,
    pub certificate: Option<InvariantSubsetCertificate>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CombinedInvariance {
    pub m_lcm: usize,
    pub trace: TraceSet,
}

/// Periodic density of the induced shift, surveyed cylinder by cylinder:
/// per-cylinder invariant traces, folded into one trace invariant under
/// `lcm` of the individual periods.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HyperPeriodicDensityReport {
    pub depth_j: usize,
    pub m_max: usize,
    pub resolution: usize,
    pub outcomes: Vec<CylinderOutcome>,
    pub combined: Option<CombinedInvariance>,
}

pub fn hyper_periodic_density_check(
    lang: &Language,
    j: usize,
    m_max: usize,
    l_res: usize,
) -> Result<HyperPeriodicDensityReport> {
    if j == 0 || m_max == 0 {
        return Err(Error::InvalidInput("j and m_max must be positive".into()));
    }
    if l_res < j + m_max || l_res > lang.depth() {
        return Err(Error::ResolutionExceeded(format!(
            "resolution {l_res} out of range for j = {j}, m_max = {m_max}, depth {}",
            lang.depth()
        )));
    }
    let cylinders = lang.words_of_length(j)?;
    let mut outcomes: Vec<CylinderOutcome> = Vec::with_capacity(cylinders.len());

    let tilde_inner = lang
        .tilde_inner()
        .filter(|inner| matches!(inner.spec(), ShiftSpaceSpec::Substitution { .. }));
    if let Some(inner) = tilde_inner {
        // the recurrence constructions must share one period, so the
        // recurrence bound is first surveyed and then pinned to its maximum
        let candidates = periodic_candidates(lang.alphabet_size(), m_max)?;
        let orbit = substitution_orbit_prefix(inner.spec(), ORBIT_PREFIX_LEN)?;
        let mut pending: Vec<(usize, Word)> = Vec::new();
        for (slot, u) in cylinders.iter().enumerate() {
            match periodic_invariant_route(lang, u, m_max, l_res, &candidates)? {
                Some(cert) => {
                    outcomes.push(CylinderOutcome { cylinder: u.clone(), certificate: Some(cert) })
                }
                None => {
                    outcomes.push(CylinderOutcome { cylinder: u.clone(), certificate: None });
                    pending.push((slot, u.clone()));
                }
            }
        }
        if !pending.is_empty() {
            let mut n_star = 0usize;
            let mut buildable = true;
            for (_, u) in &pending {
                match tilde::build_bbar(u, inner, &orbit, BBAR_BLOCKS) {
                    Ok(recipe) => n_star = n_star.max(recipe.recurrence_n),
                    Err(
                        Error::MatchFailure(_)
                        | Error::RecurrenceFailure(_)
                        | Error::PrefixTooShort(_),
                    ) => {
                        buildable = false;
                        break;
                    }
                    Err(e) => return Err(e),
                }
            }
            if buildable {
                for (slot, u) in &pending {
                    let cert = omega_limit_route(lang, u, l_res, Some(n_star))?.ok_or(
                        Error::Internal("recurrence route vanished on the pinned rebuild".into()),
                    )?;
                    outcomes[*slot].certificate = Some(cert);
                }
            }
        }
    } else {
        for u in &cylinders {
            let cert = invariant_subset_certificate(lang, u, m_max, l_res)?;
            outcomes.push(CylinderOutcome { cylinder: u.clone(), certificate: cert });
        }
    }

    let combined = if outcomes.iter().all(|o| o.certificate.is_some()) {
        let m_lcm = outcomes
            .iter()
            .map(|o| o.certificate.as_ref().unwrap().m)
            .fold(1usize, |a, b| a.lcm(&b));
        if m_lcm >= l_res {
            return Err(Error::ResolutionExceeded(format!(
                "combined period {m_lcm} does not fit inside resolution {l_res}"
            )));
        }
        let trace = TraceSet::new(
            outcomes
                .iter()
                .flat_map(|o| o.certificate.as_ref().unwrap().trace.words.iter().cloned()),
        )?;
        let folded = InvariantSubsetCertificate {
            cylinder: Word::empty(),
            m: m_lcm,
            trace: trace.clone(),
            residual_resolution: l_res - m_lcm,
            route: "combined".into(),
        };
        check_invariance(&folded)?;
        Some(CombinedInvariance { m_lcm, trace })
    } else {
        None
    };

    Ok(HyperPeriodicDensityReport { depth_j: j, m_max, resolution: l_res, outcomes, combined })
}

/// Admissible word witnessing `sigma^n [u] ∩ [v] != ∅`, covering the
/// overlapping regime `n < |u|` as well; `None` when none exists.
pub fn shift_connection(lang: &Language, u: &Word, v: &Word, n: usize) -> Result<Option<Word>> {
    if n >= u.len() {
        return Ok(least_gap_word(lang, u, v, n - u.len())?.map(|w| u.concat(&w).concat(v)));
    }
    let len = u.len().max(n + v.len());
    for i in n..u.len().min(n + v.len()) {
        if u.symbols()[i] != v.symbols()[i - n] {
            return Ok(None);
        }
    }
    let mut symbols = u.symbols().to_vec();
    for i in u.len()..len {
        symbols.push(v.symbols()[i - n]);
    }
    let candidate = Word::new(symbols);
    Ok(lang.is_admissible(&candidate)?.then_some(candidate))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HyperTransitivityWitness {
    pub n: usize,
    pub start: TraceSet,
}

/// Least `n <= n_max` carrying some trace from inside `B(u_basic)` into
/// `B(v_basic)` after `n` induced shifts, with the trace assembled.
pub fn hyper_transitivity_witness(
    lang: &Language,
    u_basic: &VietorisBasic,
    v_basic: &VietorisBasic,
    n_max: usize,
) -> Result<Option<HyperTransitivityWitness>> {
    if n_max == 0 {
        return Err(Error::InvalidInput("n_max must be positive".into()));
    }
    for g in u_basic.cylinders.iter().chain(&v_basic.cylinders) {
        if !lang.is_admissible(g)? {
            return Err(Error::InvalidInput(format!("basic cylinder \"{g}\" is not admissible")));
        }
    }
    let max_u = u_basic.cylinders.iter().map(Word::len).max().unwrap();
    let max_v = v_basic.cylinders.iter().map(Word::len).max().unwrap();
    if max_u.max(n_max + max_v) > lang.depth() {
        return Err(Error::ResolutionExceeded(format!(
            "n_max {n_max} with cylinders of lengths {max_u}/{max_v} exceeds depth {}",
            lang.depth()
        )));
    }
    for n in 1..=n_max {
        let mut links: Vec<Vec<Option<Word>>> = Vec::new();
        for g in &u_basic.cylinders {
            let mut row = Vec::new();
            for h in &v_basic.cylinders {
                row.push(shift_connection(lang, g, h, n)?);
            }
            links.push(row);
        }
        let cover = links.iter().all(|row| row.iter().any(Option::is_some));
        let meet = (0..v_basic.cylinders.len())
            .all(|jx| links.iter().any(|row| row[jx].is_some()));
        if !(cover && meet) {
            continue;
        }
        let l_a = max_u.max(n + max_v);
        let mut words = BTreeSet::new();
        let mut used = vec![false; v_basic.cylinders.len()];
        let extend = |w: &Word| -> Result<Word> {
            lang.first_extension(w, l_a - w.len())?
                .ok_or(Error::Internal("admissible word lost its extension".into()))
        };
        for row in &links {
            let (jx, w) = row
                .iter()
                .enumerate()
                .find_map(|(jx, w)| w.as_ref().map(|w| (jx, w)))
                .unwrap();
            used[jx] = true;
            words.insert(extend(w)?);
        }
        for (jx, flag) in used.iter().enumerate() {
            if !flag {
                let w = links.iter().find_map(|row| row[jx].as_ref()).unwrap();
                words.insert(extend(w)?);
            }
        }
        let start = TraceSet::new(words)?;
        let landed = induced_shift_pow(&start, n)?;
        if !(vietoris_member(&start, u_basic)? && vietoris_member(&landed, v_basic)?) {
            return Err(Error::Internal("assembled trace failed its own membership check".into()));
        }
        return Ok(Some(HyperTransitivityWitness { n, start }));
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BaseMixingSummary {
    pub u: Word,
    pub v: Word,
    #[serde(rename = "N")]
    pub n_bound: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HyperMixingPairOutcome {
    pub u_basic: VietorisBasic,
    pub v_basic: VietorisBasic,
    #[serde(rename = "N")]
    pub hyper_n: Option<usize>,
    pub base: Vec<BaseMixingSummary>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HyperMixingReport {
    pub horizon: usize,
    pub pairs: Vec<HyperMixingPairOutcome>,
}

/// Deterministic basic family for corroboration sweeps: every single-symbol
/// cylinder, the whole-alphabet basic, the first two-letter cylinder with
/// distinct letters, and the doubled last symbol. Needs depth >= 2.
pub fn sampled_basics(lang: &Language) -> Result<Vec<VietorisBasic>> {
    let singles = lang.words_of_length(1)?;
    let mut basics: Vec<VietorisBasic> = Vec::new();
    for s in &singles {
        basics.push(VietorisBasic::new(vec![s.clone()])?);
    }
    if singles.len() > 1 {
        basics.push(VietorisBasic::new(singles.clone())?);
    }
    let pairs = lang.words_of_length(2)?;
    if let Some(mixed) = pairs.iter().find(|w| w.symbols()[0] != w.symbols()[1]) {
        basics.push(VietorisBasic::new(vec![mixed.clone()])?);
    }
    let last = lang.alphabet_size() - 1;
    if let Some(doubled) = pairs.iter().find(|w| w.symbols() == [last, last]) {
        basics.push(VietorisBasic::new(vec![doubled.clone()])?);
    }
    Ok(basics)
}

/// For each basic pair, the least `N` past which every shift count up to
/// the horizon connects them, next to the plain mixing bounds of their
/// constituent cylinder pairs.
pub fn hyper_mixing_corroboration(
    lang: &Language,
    pairs: &[(VietorisBasic, VietorisBasic)],
    horizon: usize,
) -> Result<HyperMixingReport> {
    if horizon == 0 {
        return Err(Error::InvalidInput("horizon must be positive".into()));
    }
    let mut outcomes = Vec::with_capacity(pairs.len());
    for (u_basic, v_basic) in pairs {
        for g in u_basic.cylinders.iter().chain(&v_basic.cylinders) {
            if !lang.is_admissible(g)? {
                return Err(Error::InvalidInput(format!(
                    "basic cylinder \"{g}\" is not admissible"
                )));
            }
        }
        let max_v = v_basic.cylinders.iter().map(Word::len).max().unwrap();
        let max_u = u_basic.cylinders.iter().map(Word::len).max().unwrap();
        if max_u.max(horizon + max_v) > lang.depth() {
            return Err(Error::ResolutionExceeded(format!(
                "horizon {horizon} with cylinders of lengths {max_u}/{max_v} exceeds depth {}",
                lang.depth()
            )));
        }
        let mut feasible = vec![false; horizon + 1];
        for (n, slot) in feasible.iter_mut().enumerate().skip(1) {
            let mut cover = true;
            let mut hit = vec![false; v_basic.cylinders.len()];
            for g in &u_basic.cylinders {
                let mut any = false;
                for (jx, h) in v_basic.cylinders.iter().enumerate() {
                    if shift_connection(lang, g, h, n)?.is_some() {
                        any = true;
                        hit[jx] = true;
                    }
                }
                cover &= any;
            }
            *slot = cover && hit.iter().all(|&b| b);
        }
        let hyper_n = if feasible[horizon] {
            Some((1..=horizon).rev().find(|&n| !feasible[n]).map_or(1, |n| n + 1))
        } else {
            None
        };
        let mut base = Vec::new();
        for g in &u_basic.cylinders {
            for h in &v_basic.cylinders {
                let n_bound = mixing_certificate(lang, g, h, horizon)?.map(|c| c.n_bound);
                base.push(BaseMixingSummary { u: g.clone(), v: h.clone(), n_bound });
            }
        }
        outcomes.push(HyperMixingPairOutcome {
            u_basic: u_basic.clone(),
            v_basic: v_basic.clone(),
            hyper_n,
            base,
        });
    }
    Ok(HyperMixingReport { horizon, pairs: outcomes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shiftspace::{generate_language, rat_string};

    fn lang(spec: &str, depth: usize) -> Language {
        generate_language(&spec.parse().unwrap(), depth).unwrap()
    }

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn trace(words: &[&str]) -> TraceSet {
        TraceSet::new(words.iter().map(|s| w(s))).unwrap()
    }

    #[test]
    fn hausdorff_examples() {
        let a = trace(&["0101", "0110"]);
        let b = trace(&["0100"]);
        assert_eq!(rat_string(hausdorff_distance(&a, &b).unwrap()), "1/3");
        assert_eq!(
            hausdorff_distance(&a, &a).unwrap(),
            Rat::from_integer(0)
        );
        let c = trace(&["011"]);
        assert!(matches!(hausdorff_distance(&a, &c), Err(Error::InvalidInput(_))));

        // symmetry and the triangle bound on a few fixed traces
        let d = trace(&["1100", "0011"]);
        let ab = hausdorff_distance(&a, &b).unwrap();
        let bd = hausdorff_distance(&b, &d).unwrap();
        let ad = hausdorff_distance(&a, &d).unwrap();
        assert_eq!(ab, hausdorff_distance(&b, &a).unwrap());
        assert!(ad <= ab + bd);
    }

    #[test]
    fn dilatation_prefix_balls() {
        let gm = lang("sft:k=2;forbid=11", 4);
        let a = trace(&["0101"]);
        let out = dilatation(&gm, &a, Rat::new(1, 3)).unwrap();
        assert_eq!(out, trace(&["0100", "0101"]));
        // eps beyond the metric diameter reaches every admissible word
        let all = dilatation(&gm, &a, Rat::new(2, 1)).unwrap();
        assert_eq!(all.words.len() as u128, gm.count(4).unwrap());
        // tight eps keeps only the word itself
        let tight = dilatation(&gm, &a, Rat::new(1, 5)).unwrap();
        assert_eq!(tight, a);
        // every dilate stays within eps of the seed trace
        for x in &out.words {
            assert!(metric_distance(x, &w("0101")).unwrap() < Rat::new(1, 3));
        }
    }

    #[test]
    fn induced_shift_drops_heads() {
        let a = trace(&["0110", "0101"]);
        assert_eq!(induced_shift(&a).unwrap(), trace(&["110", "101"]));
        assert_eq!(induced_shift_pow(&a, 3).unwrap(), trace(&["0", "1"]));
        let tiny = trace(&["0"]);
        assert!(matches!(induced_shift(&tiny), Err(Error::ResolutionExhausted(_))));
    }

    #[test]
    fn vietoris_membership() {
        let a = trace(&["010", "011"]);
        let b0 = VietorisBasic::new(vec![w("0")]).unwrap();
        let b01 = VietorisBasic::new(vec![w("01")]).unwrap();
        let b00 = VietorisBasic::new(vec![w("00")]).unwrap();
        let split = VietorisBasic::new(vec![w("010"), w("011")]).unwrap();
        let overfull = VietorisBasic::new(vec![w("010"), w("011"), w("00")]).unwrap();
        assert!(vietoris_member(&a, &b0).unwrap());
        assert!(vietoris_member(&a, &b01).unwrap());
        assert!(!vietoris_member(&a, &b00).unwrap());
        assert!(vietoris_member(&a, &split).unwrap());
        assert!(!vietoris_member(&a, &overfull).unwrap());
        let too_long = VietorisBasic::new(vec![w("0101")]).unwrap();
        assert!(matches!(vietoris_member(&a, &too_long), Err(Error::ResolutionExceeded(_))));
    }

    #[test]
    fn invariant_subsets_by_route() {
        let full = lang("full:k=2", 8);
        let cert = invariant_subset_certificate(&full, &w("0"), 2, 8).unwrap().unwrap();
        assert_eq!(cert.m, 1);
        assert_eq!(cert.route, "periodic-word");
        assert_eq!(cert.trace, trace(&["00000000"]));

        let gm = lang("sft:k=2;forbid=11", 8);
        let cert = invariant_subset_certificate(&gm, &w("1"), 4, 8).unwrap().unwrap();
        assert_eq!(cert.m, 2);
        assert_eq!(cert.trace, trace(&["10101010"]));

        // one-way branch: nothing periodic passes through [01], and the
        // pool is small enough to decide absence outright
        let oneway = lang("sft:k=2;forbid=10", 8);
        assert!(invariant_subset_certificate(&oneway, &w("01"), 4, 8).unwrap().is_none());

        // big pool, no periodic hit, no recurrence fallback: distinct error
        let wide = lang("full:k=4", 8);
        assert!(matches!(
            invariant_subset_certificate(&wide, &w("01"), 1, 8),
            Err(Error::SearchSpaceCapExceeded { .. })
        ));
    }

    #[test]
    fn hyper_density_small_scale() {
        let full = lang("full:k=2", 10);
        let report = hyper_periodic_density_check(&full, 2, 4, 10).unwrap();
        let combined = report.combined.unwrap();
        assert_eq!(combined.m_lcm, 2);
        assert_eq!(combined.trace.words.len(), 4);
        let ms: Vec<usize> =
            report.outcomes.iter().map(|o| o.certificate.as_ref().unwrap().m).collect();
        assert_eq!(ms, vec![1, 2, 2, 1]);

        let gm = lang("sft:k=2;forbid=11", 12);
        let report = hyper_periodic_density_check(&gm, 2, 4, 12).unwrap();
        assert_eq!(report.combined.unwrap().m_lcm, 2);

        // the one-way language cannot fold [01] into any invariant trace
        let oneway = lang("sft:k=2;forbid=10", 8);
        let report = hyper_periodic_density_check(&oneway, 2, 4, 8).unwrap();
        assert!(report.combined.is_none());
        let missing: Vec<&Word> = report
            .outcomes
            .iter()
            .filter(|o| o.certificate.is_none())
            .map(|o| &o.cylinder)
            .collect();
        assert_eq!(missing, vec![&w("01")]);
    }

    #[test]
    fn hyper_transitivity() {
        let full = lang("full:k=2", 8);
        let b0 = VietorisBasic::new(vec![w("0")]).unwrap();
        let b1 = VietorisBasic::new(vec![w("1")]).unwrap();
        let got = hyper_transitivity_witness(&full, &b0, &b1, 4).unwrap().unwrap();
        assert_eq!(got.n, 1);
        assert_eq!(got.start, trace(&["01"]));

        let split = VietorisBasic::new(vec![w("0"), w("1")]).unwrap();
        let b11 = VietorisBasic::new(vec![w("11")]).unwrap();
        let got = hyper_transitivity_witness(&full, &split, &b11, 4).unwrap().unwrap();
        assert_eq!(got.n, 1);
        assert!(vietoris_member(&got.start, &split).unwrap());

        let gm = lang("sft:k=2;forbid=11", 8);
        let b1gm = VietorisBasic::new(vec![w("1")]).unwrap();
        let got = hyper_transitivity_witness(&gm, &b1gm, &b1gm, 6).unwrap().unwrap();
        assert_eq!(got.n, 2);
    }

    #[test]
    fn hyper_mixing() {
        let full = lang("full:k=2", 10);
        let b0 = VietorisBasic::new(vec![w("0")]).unwrap();
        let b1 = VietorisBasic::new(vec![w("1")]).unwrap();
        let report =
            hyper_mixing_corroboration(&full, &[(b0.clone(), b1.clone())], 4).unwrap();
        assert_eq!(report.pairs[0].hyper_n, Some(1));
        assert_eq!(report.pairs[0].base[0].n_bound, Some(1));

        let gm = lang("sft:k=2;forbid=11", 12);
        let b1gm = VietorisBasic::new(vec![w("1")]).unwrap();
        let report = hyper_mixing_corroboration(&gm, &[(b1gm.clone(), b1gm)], 6).unwrap();
        assert_eq!(report.pairs[0].hyper_n, Some(2));
        assert_eq!(report.pairs[0].base[0].n_bound, Some(2));
    }

    #[test]
    fn overlapping_shift_connections() {
        let full = lang("full:k=2", 8);
        // n = 1 with |u| = 3: overlap forces agreement
        assert_eq!(
            shift_connection(&full, &w("010"), &w("101"), 1).unwrap(),
            Some(w("0101"))
        );
        assert_eq!(shift_connection(&full, &w("010"), &w("001"), 1).unwrap(), None);
        // v buried entirely inside u
        assert_eq!(
            shift_connection(&full, &w("0110"), &w("11"), 1).unwrap(),
            Some(w("0110"))
        );
    }
}
