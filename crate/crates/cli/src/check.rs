//! Randomized property suite behind `dfakit check`.
//!
//! Each channel is analysed independently (in parallel) and the per-channel
//! residuals are folded in `(kind, n, index)` order, so the summary does not
//! depend on scheduling.

use dfakit::dfa::{
    choi_multiplicativity_check, decoherence_free_algebra, dissipation_form, inclusion_report,
};
use dfakit::matrix::{hermitian_eigenvalues, identity};
use dfakit::random::{random_channel, random_isometry, random_matrix, rng_from_seed};
use dfakit::subspace::{compare_subspaces, orthonormalize};
use dfakit::{ChannelKind, KrausChannel64, MatrixSubspace64, RankPolicy};
use rayon::prelude::*;
use serde::Serialize;

/// Subspace tolerance used inside the per-channel report.
const REPORT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleSpec {
    pub kinds: Vec<ChannelKind>,
    pub dims: Vec<usize>,
    /// Kraus counts, cycled over the channel index.
    pub counts: Vec<usize>,
    /// Channels per `(kind, n)` cell.
    pub channels: usize,
    /// Random inputs per channel for the Kadison and Choi checks.
    pub trials: usize,
    pub seed: u64,
    /// Overrides every property threshold when set.
    pub tol: Option<f64>,
    pub rank_rtol: f64,
}

impl Default for EnsembleSpec {
    fn default() -> Self {
        Self {
            kinds: ChannelKind::ALL.to_vec(),
            dims: vec![2, 3, 4],
            counts: vec![1, 2, 3, 4],
            channels: 25,
            trials: 20,
            seed: 0,
            tol: None,
            rank_rtol: 1e-12,
        }
    }
}

/// One checked property: residual names, thresholds, and how it is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Property {
    Kadison,
    OracleEquality,
    RepresentationIndependence,
    FixedInDfa,
    ChainCommutantInFixed,
    ChainDfaEqualsBComm,
    Luders,
    StinespringIsometry,
    StinespringBlocks,
    RangeFactorization,
    RangeRank,
    UnitaryFullDfa,
    ReductionAction,
    ReductionInvariance,
    Choi,
}

impl Property {
    pub const ALL: [Property; 15] = [
        Property::Kadison,
        Property::OracleEquality,
        Property::RepresentationIndependence,
        Property::FixedInDfa,
        Property::ChainCommutantInFixed,
        Property::ChainDfaEqualsBComm,
        Property::Luders,
        Property::StinespringIsometry,
        Property::StinespringBlocks,
        Property::RangeFactorization,
        Property::RangeRank,
        Property::UnitaryFullDfa,
        Property::ReductionAction,
        Property::ReductionInvariance,
        Property::Choi,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::Kadison => "kadison",
            Property::OracleEquality => "oracle_equality",
            Property::RepresentationIndependence => "representation_independence",
            Property::FixedInDfa => "fixed_in_dfa",
            Property::ChainCommutantInFixed => "chain_a_comm_in_fixed",
            Property::ChainDfaEqualsBComm => "chain_dfa_equals_b_comm",
            Property::Luders => "luders_equality",
            Property::StinespringIsometry => "stinespring_v_star_v",
            Property::StinespringBlocks => "stinespring_v_v_star_blocks",
            Property::RangeFactorization => "range_projector_factorization",
            Property::RangeRank => "range_rank_mismatches",
            Property::UnitaryFullDfa => "unitary_dfa_dim_mismatches",
            Property::ReductionAction => "reduction_action",
            Property::ReductionInvariance => "reduction_dfa_invariance",
            Property::Choi => "choi_multiplicativity",
        }
    }

    /// Counting properties pass only at zero and ignore `--tol`.
    pub fn is_count(self) -> bool {
        matches!(self, Property::RangeRank | Property::UnitaryFullDfa)
    }

    pub fn default_threshold(self) -> f64 {
        match self {
            Property::Kadison | Property::Choi => 1e-9,
            Property::OracleEquality
            | Property::RepresentationIndependence
            | Property::Luders
            | Property::ReductionInvariance => 1e-7,
            Property::FixedInDfa | Property::ChainCommutantInFixed | Property::ChainDfaEqualsBComm => 1e-8,
            Property::StinespringIsometry | Property::StinespringBlocks | Property::ReductionAction => 1e-12,
            Property::RangeFactorization => 1e-10,
            Property::RangeRank | Property::UnitaryFullDfa => 0.0,
        }
    }
}

/// Identifies one channel of the ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ChannelId {
    #[serde(serialize_with = "serialize_kind")]
    pub kind: ChannelKind,
    pub n: usize,
    pub k: usize,
    pub index: usize,
    pub seed: u64,
}

fn serialize_kind<S: serde::Serializer>(k: &ChannelKind, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(k.as_str())
}

impl std::fmt::Display for ChannelId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} n={} k={} #{} (seed {})", self.kind, self.n, self.k, self.index, self.seed)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PropertyResult {
    pub name: &'static str,
    pub max_residual: f64,
    pub threshold: f64,
    pub checked: usize,
    pub pass: bool,
    pub worst: Option<ChannelId>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckSummary {
    pub channels: usize,
    pub properties: Vec<PropertyResult>,
    /// Channels the analysis refused or failed on, with the error.
    pub errors: Vec<(ChannelId, String)>,
}

impl CheckSummary {
    pub fn pass(&self) -> bool {
        self.errors.is_empty() && self.properties.iter().all(|p| p.pass)
    }

    pub fn first_failure(&self) -> Option<&PropertyResult> {
        self.properties.iter().find(|p| !p.pass)
    }
}

/// Mixes the ensemble seed with a channel's coordinates (splitmix64).
pub fn channel_seed(seed: u64, kind: ChannelKind, n: usize, index: usize) -> u64 {
    let mut x = seed
        .wrapping_add((kind as u64 + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15))
        .wrapping_add((n as u64) << 40)
        .wrapping_add(index as u64);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

pub fn ensemble_ids(spec: &EnsembleSpec) -> Vec<ChannelId> {
    let mut ids = Vec::new();
    for &kind in &spec.kinds {
        for &n in &spec.dims {
            for index in 0..spec.channels {
                let k = spec.counts[index % spec.counts.len()];
                ids.push(ChannelId {
                    kind,
                    n,
                    k,
                    index,
                    seed: channel_seed(spec.seed, kind, n, index),
                });
            }
        }
    }
    ids
}

type Residuals = Vec<(Property, f64)>;

fn distance(a: &MatrixSubspace64, b: &MatrixSubspace64) -> f64 {
    compare_subspaces(a, b, REPORT_TOL).map(|c| c.distance).unwrap_or(f64::INFINITY)
}

fn inclusion(a: &MatrixSubspace64, b: &MatrixSubspace64) -> f64 {
    compare_subspaces(a, b, REPORT_TOL).map(|c| c.residual_12).unwrap_or(f64::INFINITY)
}

fn count(flag: bool) -> f64 {
    if flag {
        0.0
    } else {
        1.0
    }
}

/// Every property residual for one channel.
pub fn analyse_channel(id: &ChannelId, ch: &KrausChannel64, spec: &EnsembleSpec) -> Result<Residuals, String> {
    let policy = RankPolicy::new(spec.rank_rtol);
    let report = inclusion_report(ch, policy, REPORT_TOL).map_err(|e| e.to_string())?;
    let s = &report.subspaces;
    let n = ch.dim();
    let mut rng = rng_from_seed(id.seed ^ 0x5eed_c0de);
    let mut out = Vec::new();

    let mut kadison = 0.0f64;
    for _ in 0..spec.trials {
        let x = random_matrix::<f64, _>(n, &mut rng);
        let ev = hermitian_eigenvalues(&ch.dissipation(&x).map_err(|e| e.to_string())?);
        kadison = kadison.max(-ev[0] / ev[ev.len() - 1].max(1.0));
    }
    let q = dissipation_form(ch).symmetric_eigenvalues();
    let q_hi = q.iter().copied().fold(0.0, f64::max);
    let q_lo = q.iter().copied().fold(f64::INFINITY, f64::min);
    kadison = kadison.max(-q_lo / q_hi.max(1.0));
    out.push((Property::Kadison, kadison.max(0.0)));

    out.push((Property::OracleEquality, report.oracle_distance));

    let m = ch.num_kraus();
    let w = random_isometry::<f64, _>(m + 1, m, &mut rng).map_err(|e| e.to_string())?;
    let expanded = ch.equivalent_rep(&w, 1e-10).map_err(|e| e.to_string())?;
    out.push((
        Property::RepresentationIndependence,
        distance(&s.dfa, &decoherence_free_algebra(&expanded, policy)),
    ));

    out.push((Property::FixedInDfa, inclusion(&s.fixed, &s.oracle).max(inclusion(&s.fixed, &s.dfa))));
    out.push((Property::ChainCommutantInFixed, inclusion(&s.a_comm, &s.fixed)));
    out.push((Property::ChainDfaEqualsBComm, inclusion(&s.dfa, &s.b_comm).max(inclusion(&s.b_comm, &s.dfa))));

    if report.luders_applicable {
        let spaces = [&s.a_comm, &s.fixed, &s.dfa, &s.b_comm];
        let mut worst = 0.0f64;
        for i in 0..spaces.len() {
            for j in (i + 1)..spaces.len() {
                worst = worst.max(distance(spaces[i], spaces[j]));
            }
        }
        out.push((Property::Luders, worst));
    }

    let dil = ch.stinespring();
    out.push((Property::StinespringIsometry, (dil.v_star_v() - identity::<f64>(n)).norm()));
    out.push((Property::StinespringBlocks, (dil.v_v_star() - ch.product_blocks()).norm()));
    let rp = ch.range_projector(policy, f64::INFINITY).map_err(|e| e.to_string())?;
    out.push((Property::RangeFactorization, rp.factorization_residual));
    let span = orthonormalize(n, ch.kraus(), 1e-10).map_err(|e| e.to_string())?.dim();
    out.push((Property::RangeRank, count(rp.rank == span)));

    if id.kind != ChannelKind::Luders && id.k == 1 {
        out.push((Property::UnitaryFullDfa, count(report.dim_dfa == n * n)));
    }

    let red = ch.reduce_kraus(policy);
    out.push((Property::ReductionAction, red.reduced.action_distance(ch).map_err(|e| e.to_string())?));
    out.push((
        Property::ReductionInvariance,
        distance(&s.dfa, &decoherence_free_algebra(&red.reduced, policy)),
    ));

    out.push((Property::Choi, choi_multiplicativity_check(ch, &s.dfa, spec.trials, id.seed ^ 0xc401)));
    Ok(out)
}

pub fn run_check(spec: &EnsembleSpec) -> Result<CheckSummary, String> {
    if spec.kinds.is_empty() || spec.dims.is_empty() || spec.counts.is_empty() {
        return Err("kinds, dims and counts must be non-empty".into());
    }
    if spec.dims.contains(&0) || spec.counts.contains(&0) {
        return Err("dims and counts must be positive".into());
    }
    let ids = ensemble_ids(spec);
    let results: Vec<(ChannelId, Result<Residuals, String>)> = ids
        .par_iter()
        .map(|id| {
            let outcome = random_channel::<f64>(id.kind, id.n, id.k, id.seed)
                .map_err(|e| e.to_string())
                .and_then(|ch| analyse_channel(id, &ch, spec));
            (*id, outcome)
        })
        .collect();

    let mut properties: Vec<PropertyResult> = Property::ALL
        .iter()
        .map(|&p| PropertyResult {
            name: p.name(),
            max_residual: 0.0,
            threshold: match spec.tol {
                Some(t) if !p.is_count() => t,
                _ => p.default_threshold(),
            },
            checked: 0,
            pass: true,
            worst: None,
        })
        .collect();
    let mut errors = Vec::new();
    for (id, outcome) in results {
        match outcome {
            Ok(residuals) => {
                for (p, value) in residuals {
                    let slot = &mut properties[Property::ALL.iter().position(|&q| q == p).expect("listed")];
                    slot.checked += 1;
                    // NaN is sticky so that it fails the threshold comparison.
                    let larger = slot.worst.is_none() || value.is_nan() || value > slot.max_residual;
                    if larger && !slot.max_residual.is_nan() {
                        slot.max_residual = value;
                        slot.worst = Some(id);
                    }
                }
            }
            Err(e) => errors.push((id, e)),
        }
    }
    for (p, slot) in Property::ALL.iter().zip(properties.iter_mut()) {
        slot.pass = if p.is_count() {
            slot.max_residual == 0.0
        } else {
            slot.max_residual < slot.threshold
        };
    }
    Ok(CheckSummary {
        channels: ids.len(),
        properties,
        errors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> EnsembleSpec {
        EnsembleSpec {
            dims: vec![2, 3],
            channels: 4,
            trials: 3,
            seed: 1,
            ..EnsembleSpec::default()
        }
    }

    #[test]
    fn small_ensemble_passes() {
        let summary = run_check(&small()).unwrap();
        assert_eq!(summary.channels, 3 * 2 * 4);
        assert!(summary.pass(), "{:#?}", summary.first_failure());
        assert!(summary.properties.iter().all(|p| p.checked > 0));
    }

    #[test]
    fn over_tight_tolerance_fails_cleanly() {
        let spec = EnsembleSpec { tol: Some(1e-16), ..small() };
        let summary = run_check(&spec).unwrap();
        assert!(!summary.pass());
        assert!(summary.errors.is_empty());
        let first = summary.first_failure().unwrap();
        assert!(first.worst.is_some());
    }

    #[test]
    fn unitary_channels_have_full_dfa() {
        let spec = EnsembleSpec {
            kinds: vec![ChannelKind::MixedUnitary],
            counts: vec![1],
            ..small()
        };
        let summary = run_check(&spec).unwrap();
        let p = summary.properties.iter().find(|p| p.name == "unitary_dfa_dim_mismatches").unwrap();
        assert_eq!(p.checked, summary.channels);
        assert!(p.pass);
    }

    #[test]
    fn summary_is_deterministic() {
        let a = run_check(&small()).unwrap();
        let b = run_check(&small()).unwrap();
        let fa: Vec<_> = a.properties.iter().map(|p| (p.max_residual, p.worst)).collect();
        let fb: Vec<_> = b.properties.iter().map(|p| (p.max_residual, p.worst)).collect();
        assert_eq!(fa, fb);
    }

    #[test]
    fn rejects_empty_spec() {
        let spec = EnsembleSpec { dims: vec![], ..small() };
        assert!(run_check(&spec).is_err());
    }
}
