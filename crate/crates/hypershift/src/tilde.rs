//! The three-letter extension: a binary language widened by a free third
//! letter that deletes away. Mixing transfers from the inner language by
//! padding a single connector; periodic words collapse to the all-2 fixed
//! point; and a recurrence construction assembles streams whose window
//! sets serve as invariant traces for the induced shift.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::analysis::{
    almost_periodicity_certificate, least_gap_word, periodic_candidates,
    periodic_window_obstruction, GapWitness, MixingCertificate, PeriodicWord,
};
use crate::error::{Error, Result};
use crate::hyperspace::TraceSet;
use crate::shiftspace::{generate_language, Language, ShiftSpaceSpec, Word};

/// Inner orbit prefix scanned for occurrences and recurrence bounds.
pub const ORBIT_PREFIX_LEN: usize = 1 << 14;
/// Blocks emitted by the recurrence construction.
pub const BBAR_BLOCKS: usize = 128;
/// Block count every emitted recipe is re-verified against.
pub const BBAR_VERIFY_K: usize = 8;
/// Largest recurrence bound the construction will accept.
const RECURRENCE_BOUND_CAP: usize = 64;

/// Widen a generated binary language by the free letter 2.
pub fn tilde_language(inner: &Language, depth: usize) -> Result<Language> {
    if depth > inner.depth() {
        return Err(Error::ResolutionExceeded(format!(
            "requested depth {depth} exceeds the inner language depth {}",
            inner.depth()
        )));
    }
    let spec = ShiftSpaceSpec::tilde(inner.spec().clone())?;
    generate_language(&spec, depth)
}

/// Mixing bound for a cylinder pair of the extension: one inner connector
/// `z` realises every gap of length at least `|z|` once interleaved with
/// 2s; shorter gaps are settled by brute force.
pub fn tilde_mixing_certificate(
    tlang: &Language,
    u: &Word,
    v: &Word,
    horizon: usize,
) -> Result<Option<MixingCertificate>> {
    let inner = tlang
        .tilde_inner()
        .ok_or_else(|| Error::InvalidInput("not a tilde-extension language".into()))?;
    if horizon == 0 {
        return Err(Error::InvalidInput("horizon must be positive".into()));
    }
    for (w, role) in [(u, "source"), (v, "target")] {
        if !tlang.is_admissible(w)? {
            return Err(Error::InvalidInput(format!("{role} word \"{w}\" is not admissible")));
        }
    }
    if u.len() + v.len() + horizon > tlang.depth() {
        return Err(Error::ResolutionExceeded(format!(
            "|u| + |v| + horizon = {} exceeds generated depth {}",
            u.len() + v.len() + horizon,
            tlang.depth()
        )));
    }
    let du = u.delete_twos();
    let dv = v.delete_twos();
    let mut connector = None;
    for i in 0..horizon {
        if let Some(z) = least_gap_word(inner, &du, &dv, i)? {
            connector = Some((i, z));
            break;
        }
    }
    let Some((i_star, z)) = connector else { return Ok(None) };
    // the deletion argument says no shorter gap can work; check it anyway
    for g in 0..i_star {
        if least_gap_word(tlang, u, v, g)?.is_some() {
            return Err(Error::Internal("padding construction missed a shorter connection".into()));
        }
    }
    let n_bound = i_star + 1;
    let two = Word::new(vec![2]);
    let mut gaps = Vec::new();
    for n in n_bound..=horizon {
        let w = z.concat(&two.power(n - 1 - i_star));
        if !tlang.is_admissible(&u.concat(&w).concat(v))? {
            return Err(Error::Internal("padded connector rejected by the extension".into()));
        }
        gaps.push(GapWitness { n, w });
    }
    Ok(Some(MixingCertificate { u: u.clone(), v: v.clone(), n_bound, gaps, horizon }))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PeriodicExclusion {
    pub candidate: Word,
    pub offset: usize,
    pub factor: Word,
}

/// Outcome of scanning every short periodic candidate of the extension.
/// `conclusive` holds when nothing beyond the all-2 fixed point survived,
/// each exclusion backed by a concrete inadmissible factor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TildePeriodicScanReport {
    pub p_max: usize,
    pub found: Vec<PeriodicWord>,
    pub conclusive: bool,
    pub exclusions: Vec<PeriodicExclusion>,
}

pub fn tilde_periodic_scan(tlang: &Language, p_max: usize) -> Result<TildePeriodicScanReport> {
    if tlang.tilde_inner().is_none() {
        return Err(Error::InvalidInput("not a tilde-extension language".into()));
    }
    if p_max == 0 {
        return Err(Error::InvalidInput("p_max must be positive".into()));
    }
    if 2 * p_max > tlang.depth() {
        return Err(Error::ResolutionExceeded(format!(
            "p_max {p_max} needs depth at least {}, have {}",
            2 * p_max,
            tlang.depth()
        )));
    }
    let mut found = Vec::new();
    let mut exclusions = Vec::new();
    for w in periodic_candidates(tlang.alphabet_size(), p_max)? {
        match periodic_window_obstruction(tlang, &w)? {
            None => {
                let period = w.len();
                found.push(PeriodicWord { word: w, period });
            }
            Some((offset, factor)) => {
                exclusions.push(PeriodicExclusion { candidate: w, offset, factor })
            }
        }
    }
    let conclusive =
        found.iter().all(|pw| pw.word.symbols().iter().all(|&s| s == 2));
    Ok(TildePeriodicScanReport { p_max, found, conclusive, exclusions })
}

/// Recipe for an eventually-recurrent stream: every `m` symbols the
/// cylinder pattern repeats, the non-2 letters replaying the inner orbit
/// from its matched occurrence onward.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BbarRecipe {
    pub cylinder: Word,
    pub j: usize,
    pub b_prefix: Word,
    pub return_times: Vec<usize>,
    #[serde(rename = "N")]
    pub recurrence_n: usize,
    pub m: usize,
    pub bbar_prefix: Word,
}

pub fn build_bbar(
    cylinder: &Word,
    inner: &Language,
    orbit_prefix: &Word,
    blocks: usize,
) -> Result<BbarRecipe> {
    build_bbar_with_recurrence_floor(cylinder, inner, orbit_prefix, blocks, None)
}

/// As `build_bbar`, but never settles for a recurrence bound below
/// `floor`: several recipes built against one pinned bound share one
/// period, which is what lets their traces fold together.
pub fn build_bbar_with_recurrence_floor(
    cylinder: &Word,
    inner: &Language,
    orbit_prefix: &Word,
    blocks: usize,
    floor: Option<usize>,
) -> Result<BbarRecipe> {
    if cylinder.is_empty() || blocks == 0 {
        return Err(Error::InvalidInput("cylinder must be nonempty and blocks positive".into()));
    }
    if cylinder.symbols().iter().any(|&s| s > 2) {
        return Err(Error::InvalidInput(format!(
            "cylinder \"{cylinder}\" leaves the three-letter alphabet"
        )));
    }
    let v = cylinder.delete_twos();
    if !inner.is_admissible(&v)? {
        return Err(Error::InvalidInput(format!(
            "cylinder \"{cylinder}\" deletes to the inadmissible inner word \"{v}\""
        )));
    }
    let n = cylinder.len();
    let j = v.len();
    if j == 0 {
        // fixed-point cylinder: the all-2 stream, period 1
        return Ok(BbarRecipe {
            cylinder: cylinder.clone(),
            j: 0,
            b_prefix: Word::empty(),
            return_times: Vec::new(),
            recurrence_n: 0,
            m: 1,
            bbar_prefix: Word::new(vec![2]).power(blocks + inner.depth()),
        });
    }
    let occ = orbit_prefix.occurrences(&v);
    let Some(&start) = occ.first() else {
        return Err(Error::MatchFailure(format!(
            "content \"{v}\" of cylinder \"{cylinder}\" does not occur in the scanned orbit prefix"
        )));
    };
    let b = orbit_prefix.shifted(start);
    if b.len() < RECURRENCE_BOUND_CAP + 2 * j {
        return Err(Error::PrefixTooShort(format!(
            "orbit tail of length {} too short for a recurrence scan",
            b.len()
        )));
    }
    let cert = almost_periodicity_certificate(&b, j, RECURRENCE_BOUND_CAP)?.ok_or_else(|| {
        Error::RecurrenceFailure(format!(
            "no recurrence bound up to {RECURRENCE_BOUND_CAP} for \"{v}\" within the scanned prefix"
        ))
    })?;
    let n_rec = cert.n_bound.max(floor.unwrap_or(0));
    let m = n + n_rec;

    // greedy return times: always the earliest next occurrence clear of
    // the current content block
    let mut times = vec![0usize];
    let mut idx = 0;
    while times.len() < blocks + 1 {
        let cur = *times.last().unwrap();
        while idx < cert.occurrences.len() && cert.occurrences[idx] < cur + j {
            idx += 1;
        }
        if idx == cert.occurrences.len() {
            break;
        }
        let next = cert.occurrences[idx];
        if next > cur + n_rec + j {
            return Err(Error::Internal(
                "recurrence bound violated by its own occurrence list".into(),
            ));
        }
        times.push(next);
    }
    if times.len() < blocks + 1 {
        return Err(Error::PrefixTooShort(format!(
            "located only {} return times, need {}",
            times.len(),
            blocks + 1
        )));
    }

    let mut stream = Vec::with_capacity(blocks * m);
    for k in 0..blocks {
        stream.extend_from_slice(cylinder.symbols());
        let middle = times[k + 1] - times[k] - j;
        stream.extend_from_slice(&b.symbols()[times[k] + j..times[k] + j + middle]);
        stream.extend(std::iter::repeat_n(2, n_rec - middle));
    }
    let bbar_prefix = Word::new(stream);
    if bbar_prefix.delete_twos() != b.truncated(times[blocks]) {
        return Err(Error::Internal("stream deletion does not replay the orbit".into()));
    }
    Ok(BbarRecipe {
        cylinder: cylinder.clone(),
        j,
        b_prefix: b.truncated(times[blocks] + j),
        return_times: times,
        recurrence_n: n_rec,
        m,
        bbar_prefix,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BbarVerification {
    pub ok: bool,
    pub k_max: usize,
    pub cylinder_aligned: bool,
    pub factors_admissible: bool,
    pub windows_checked: usize,
}

/// Replay a recipe against the extension language: the cylinder pattern
/// must sit at every block offset through `k_max`, and every factor of
/// the stream within resolution must be admissible.
pub fn verify_bbar(
    recipe: &BbarRecipe,
    tlang: &Language,
    k_max: usize,
) -> Result<BbarVerification> {
    let m = recipe.m;
    let n = recipe.cylinder.len();
    let bbar = &recipe.bbar_prefix;
    if m == 0 {
        return Err(Error::InvalidInput("recipe period must be positive".into()));
    }
    if bbar.len() < (k_max + 1) * m + n {
        return Err(Error::PrefixTooShort(format!(
            "stream of length {} cannot support k_max {k_max} at period {m}",
            bbar.len()
        )));
    }
    let mut aligned = true;
    for k in 0..=k_max {
        if bbar.slice(k * m, k * m + n) != recipe.cylinder {
            aligned = false;
            break;
        }
    }
    let d = tlang.depth().min(bbar.len());
    let mut admissible = true;
    let mut checked = 0usize;
    for start in 0..=bbar.len() - d {
        checked += 1;
        if !tlang.is_admissible(&bbar.slice(start, start + d))? {
            admissible = false;
            break;
        }
    }
    Ok(BbarVerification {
        ok: aligned && admissible,
        k_max,
        cylinder_aligned: aligned,
        factors_admissible: admissible,
        windows_checked: checked,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OmegaLimitTrace {
    pub burn_in: usize,
    pub k_end: usize,
    pub trace: TraceSet,
}

/// The window set of a recipe stream past burn-in: windows are read at
/// every block offset, and burn-in is the first index after which two
/// consecutive sweeps add nothing new.
pub fn omega_limit_trace(recipe: &BbarRecipe, l_res: usize) -> Result<OmegaLimitTrace> {
    let m = recipe.m;
    let bbar = &recipe.bbar_prefix;
    if l_res == 0 || m == 0 {
        return Err(Error::InvalidInput("resolution and period must be positive".into()));
    }
    if bbar.len() < l_res + 2 * m {
        return Err(Error::PrefixTooShort(format!(
            "stream of length {} cannot window at resolution {l_res}",
            bbar.len()
        )));
    }
    let k_end = (bbar.len() - l_res) / m;
    let windows: Vec<Word> = (0..=k_end).map(|k| bbar.slice(k * m, k * m + l_res)).collect();
    let mut seen = BTreeSet::new();
    let mut sizes = Vec::with_capacity(windows.len());
    for w in &windows {
        seen.insert(w.clone());
        sizes.push(seen.len());
    }
    let burn_in = (0..k_end.saturating_sub(1))
        .find(|&k| sizes[k] == sizes[k + 1] && sizes[k + 1] == sizes[k + 2])
        .ok_or_else(|| {
            Error::PrefixTooShort("window set never stabilised within the stream".into())
        })?;
    let trace = TraceSet::new(windows[burn_in..].iter().cloned())?;
    Ok(OmegaLimitTrace { burn_in, k_end, trace })
}
