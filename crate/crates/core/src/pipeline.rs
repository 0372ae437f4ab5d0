//! The inductive construction: nerve `X` → Coxeter group `W` → finite quotient
//! `G` and quotient Davis complex `Y` → thickening `X' = Th(Y)`, repeated.
//!
//! Reports hold only deterministic data. Wall time and memory go to a separate
//! `timings.json` next to the stage artifacts.

use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::antisym::{lift_and_certify, orientation, Certificate, ChamberPair, DIRECT_SOLVE_LIMIT};
use crate::coxeter::RacgSystem;
use crate::error::{Error, Result};
use crate::homology::{cohomology, homology, vcd_lower_bound_with, Coefficients, VcdReport};
use crate::io::{self, SimplicialJson};
use crate::quotient::{
    displacement_at_least, min_displacement, orientable_refinement, quotient_davis, FiniteQuotient,
    KernelWitness, Orientability, QuotientDavis, QuotientKind, TorsionFree, DEFAULT_ELEMENT_CAP,
};
use crate::simplicial::{LargenessWitness, LinkSd2Witness, SimplicialComplex, Vertex};

fn one() -> usize {
    1
}
fn five() -> usize {
    5
}
fn default_moduli() -> Vec<u64> {
    vec![3, 5, 7, 9, 11, 13]
}
fn default_cap() -> usize {
    DEFAULT_ELEMENT_CAP
}
fn default_coefficients() -> Coefficients {
    Coefficients::Rationals
}
fn default_homology_cap() -> usize {
    1_000_000
}
fn default_direct_limit() -> usize {
    DIRECT_SOLVE_LIMIT
}
fn default_full_check_limit() -> usize {
    50_000
}

/// `(X₀; r₁, …, r_k)` plus the knobs of each stage.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    /// `fixture:<name>` or a path to a simplicial complex file.
    pub x0: String,
    #[serde(default = "one")]
    pub steps: usize,
    /// One displacement radius per step; empty means 5 for every step.
    #[serde(default)]
    pub radii: Vec<usize>,
    #[serde(default = "five")]
    pub k_large: usize,
    #[serde(default)]
    pub sd2_links: bool,
    #[serde(default = "default_moduli")]
    pub moduli: Vec<u64>,
    #[serde(default = "default_cap")]
    pub element_cap: usize,
    /// Coefficients for the reported Betti numbers and the vcd table.
    #[serde(default = "default_coefficients")]
    pub coefficients: Coefficients,
    /// Vertex names of a full subcomplex `Z ⊆ X₀` followed through every stage.
    #[serde(default)]
    pub track: Option<Vec<String>>,
    /// Upper bound on simplex counts for which homology of `X'` and `Y` is computed.
    #[serde(default = "default_homology_cap")]
    pub homology_cap: usize,
    #[serde(default = "default_direct_limit")]
    pub direct_solve_limit: usize,
    /// Vertex count up to which largeness is checked by a global search.
    #[serde(default = "default_full_check_limit")]
    pub full_check_limit: usize,
}

impl PipelineConfig {
    pub fn new(x0: impl Into<String>) -> Self {
        PipelineConfig {
            x0: x0.into(),
            steps: 1,
            radii: Vec::new(),
            k_large: 5,
            sd2_links: false,
            moduli: default_moduli(),
            element_cap: DEFAULT_ELEMENT_CAP,
            coefficients: default_coefficients(),
            track: None,
            homology_cap: default_homology_cap(),
            direct_solve_limit: DIRECT_SOLVE_LIMIT,
            full_check_limit: default_full_check_limit(),
        }
    }

    pub fn radius(&self, stage: usize) -> usize {
        self.radii.get(stage).copied().unwrap_or(5)
    }

    pub fn validate(&self) -> Result<()> {
        if self.steps == 0 {
            return Err(Error::domain("steps must be at least 1"));
        }
        if !self.radii.is_empty() && self.radii.len() != self.steps {
            return Err(Error::domain(format!(
                "{} radii given for {} steps",
                self.radii.len(),
                self.steps
            )));
        }
        if self.k_large < 5 {
            return Err(Error::domain(format!(
                "k_large must be at least 5, got {}",
                self.k_large
            )));
        }
        for i in 0..self.steps {
            let r = self.radius(i);
            if r < 5 {
                return Err(Error::domain(format!("radius r{} = {r} is below 5", i + 1)));
            }
            if r < self.k_large {
                return Err(Error::domain(format!(
                    "radius r{} = {r} is below k_large = {}",
                    i + 1,
                    self.k_large
                )));
            }
        }
        if self.moduli.is_empty() {
            return Err(Error::domain("empty modulus schedule"));
        }
        Ok(())
    }
}

// ------------------------------------------------------------------ reports

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LargenessReport {
    pub k: usize,
    pub holds: bool,
    /// `"global"`, or `"vertex_orbit"` when only cycles through one vertex were
    /// searched and a vertex-transitive action was verified.
    pub method: String,
    pub witness: Option<LargenessWitness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sd2Report {
    pub k: usize,
    /// `None` when the complex exceeded the check limit.
    pub holds: Option<bool>,
    pub witness: Option<LinkSd2Witness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputReport {
    pub vertices: usize,
    pub facets: usize,
    pub dimension: i32,
    pub betti: Option<Vec<usize>>,
    /// Top `n` with `H̄^n(X; ℚ) ≠ 0`.
    pub top_degree: Option<i64>,
    /// `"computed"` or `"inherited"` (from the previous stage's certificate).
    pub top_degree_source: String,
    pub largeness: LargenessReport,
    pub sd2: Option<Sd2Report>,
    pub finite_group: bool,
    pub hyperbolic: bool,
    pub hyperbolicity_witness: Option<LargenessWitness>,
    pub spherical_subsets: usize,
    pub vcd: Option<VcdReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModulusAttempt {
    pub modulus: u64,
    pub order: Option<usize>,
    pub displacement_holds: Option<bool>,
    pub witness: Option<KernelWitness>,
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DisplacementSummary {
    pub required: usize,
    /// Exact minimal displacement when found within `searched_to`.
    pub minimum: Option<usize>,
    pub searched_to: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientReport {
    pub attempts: Vec<ModulusAttempt>,
    pub modulus: Option<u64>,
    /// Order of the congruence image before any sign refinement.
    pub congruence_order: Option<usize>,
    pub group_order: Option<usize>,
    pub displacement: Option<DisplacementSummary>,
    pub y_cubes: Option<Vec<usize>>,
    pub y_euler_characteristic: Option<i64>,
    pub degenerate: Option<String>,
    pub lift: Option<Certificate>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrackReport {
    /// Vertex of `Z` in `X` ↦ vertex of its image in `X'`.
    pub injection: BTreeMap<String, String>,
    pub full: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputReport {
    pub vertices: usize,
    pub facets: usize,
    pub dimension: i32,
    pub largeness: LargenessReport,
    /// Facets are mapped to facets by every generator acting on the left.
    pub left_action_verified: Option<bool>,
    pub sd2: Option<Sd2Report>,
    pub homology_skipped: bool,
    pub betti: Option<Vec<usize>>,
    pub betti_q: Option<Vec<usize>>,
    pub betti_f2: Option<Vec<usize>>,
    /// Betti numbers of `X'` and of the triangulation of `Y` agree over ℚ and 𝔽₂.
    pub betti_matches_y: Option<bool>,
    pub top_degree: Option<i64>,
    pub next_vcd_lower_bound: Option<i64>,
    /// `"vcd_table"` or `"certificate"`.
    pub next_vcd_source: Option<String>,
    pub tracked: Option<TrackReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificates {
    pub torsion_free: Option<TorsionFree>,
    pub orientable: Option<Orientability>,
    pub delta_f_prime_zero: Option<bool>,
    pub f_prime_nontrivial: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageError {
    pub kind: String,
    pub message: String,
    pub exit_code: i32,
}

impl StageError {
    fn from_error(e: &Error) -> Self {
        let kind = match e {
            Error::MalformedInput(_) => "malformed_input",
            Error::Domain(_) => "domain",
            Error::MalformedComplex { .. } => "malformed_complex",
            Error::Verification(_) => "verification",
            Error::Resource { .. } => "resource",
            Error::InternalConsistency(_) => "internal_consistency",
            Error::Overflow => "overflow",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        };
        StageError {
            kind: kind.into(),
            message: e.to_string(),
            exit_code: e.exit_code(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageReport {
    pub stage: usize,
    pub radius: usize,
    pub input: Option<InputReport>,
    pub quotient: Option<QuotientReport>,
    pub output: Option<OutputReport>,
    pub certificates: Certificates,
    pub error: Option<StageError>,
}

impl StageReport {
    fn new(stage: usize, radius: usize) -> Self {
        StageReport {
            stage,
            radius,
            input: None,
            quotient: None,
            output: None,
            certificates: Certificates {
                torsion_free: None,
                orientable: None,
                delta_f_prime_zero: None,
                f_prime_nontrivial: None,
            },
            error: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinalNerve {
    pub vertices: usize,
    pub facets: usize,
    pub dimension: i32,
    pub top_degree: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineReport {
    pub config: PipelineConfig,
    pub status: String,
    pub exit_code: i32,
    pub stages: Vec<StageReport>,
    pub final_nerve: Option<FinalNerve>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct StageTiming {
    pub stage: usize,
    pub step1_seconds: f64,
    pub step2_seconds: f64,
    pub step3_seconds: f64,
    /// Peak resident set size of the process so far, when the platform reports it.
    pub peak_rss_kib: Option<u64>,
    pub resumed: bool,
}

pub struct PipelineOutcome {
    pub report: PipelineReport,
    pub timings: Vec<StageTiming>,
    pub final_nerve: Option<SimplicialComplex>,
}

/// Peak resident set size from `/proc/self/status`.
pub fn peak_rss_kib() -> Option<u64> {
    let status = fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    line.split_whitespace().nth(1)?.parse().ok()
}

// ------------------------------------------------------------------ steps

/// What a stage knows about its input beyond the complex itself.
#[derive(Clone, Debug)]
pub struct StageInput {
    pub nerve: SimplicialComplex,
    /// Certified top degree carried over from the previous stage.
    pub inherited_top_degree: Option<i64>,
    /// A vertex-transitive group of automorphisms was verified.
    pub vertex_transitive: bool,
    pub track: Option<Vec<String>>,
}

impl StageInput {
    pub fn new(nerve: SimplicialComplex) -> Self {
        StageInput {
            nerve,
            inherited_top_degree: None,
            vertex_transitive: false,
            track: None,
        }
    }
}

/// Upper bound on the number of simplices, from the facets.
fn simplex_bound(x: &SimplicialComplex) -> usize {
    x.facets()
        .iter()
        .map(|f| 1usize.checked_shl(f.len() as u32).unwrap_or(usize::MAX))
        .fold(0, usize::saturating_add)
}

fn check_largeness(
    x: &SimplicialComplex,
    k: usize,
    transitive: bool,
    limit: usize,
) -> Result<LargenessReport> {
    let orbit = transitive && x.num_vertices() > limit;
    let witness = if orbit {
        x.largeness_witness_through(k, &[0])?
    } else {
        x.largeness_witness(k)?
    };
    Ok(LargenessReport {
        k,
        holds: witness.is_none(),
        method: if orbit { "vertex_orbit" } else { "global" }.into(),
        witness,
    })
}

fn check_sd2(x: &SimplicialComplex, k: usize, limit: usize) -> Result<Sd2Report> {
    if x.num_vertices() > limit {
        return Ok(Sd2Report {
            k,
            holds: None,
            witness: None,
        });
    }
    let witness = x.sd2_star_links_witness(k)?;
    Ok(Sd2Report {
        k,
        holds: Some(witness.is_none()),
        witness,
    })
}

fn largeness_failure(what: &str, l: &LargenessReport) -> Error {
    Error::Verification(format!("{what} is not {}-large: {:?}", l.k, l.witness))
}

/// Step 1: `X` is checked to be `k`-large and `W = W_X` is built.
pub fn step1(
    input: &StageInput,
    config: &PipelineConfig,
    report: &mut StageReport,
) -> Result<RacgSystem> {
    let x = &input.nerve;
    let largeness = check_largeness(
        x,
        config.k_large,
        input.vertex_transitive,
        config.full_check_limit,
    )?;
    let small = simplex_bound(x) <= config.homology_cap;
    let (betti, top_degree, source) = if small {
        let b = homology(x, config.coefficients, false)?.betti();
        let top = cohomology(x, Coefficients::Rationals, true)?.top_nonzero_degree();
        if let Some(prev) = input.inherited_top_degree {
            if top != Some(prev) {
                return Err(Error::InternalConsistency(format!(
                    "input top degree {top:?} differs from the certified {prev}"
                )));
            }
        }
        (Some(b), top, "computed")
    } else {
        (None, input.inherited_top_degree, "inherited")
    };
    let mut input_report = InputReport {
        vertices: x.num_vertices(),
        facets: x.facets().len(),
        dimension: x.dimension(),
        betti,
        top_degree,
        top_degree_source: source.into(),
        largeness: largeness.clone(),
        sd2: None,
        finite_group: false,
        hyperbolic: false,
        hyperbolicity_witness: None,
        spherical_subsets: 0,
        vcd: None,
    };
    if config.sd2_links {
        input_report.sd2 = Some(check_sd2(
            x,
            config.k_large.max(6),
            config.full_check_limit,
        )?);
    }
    report.input = Some(input_report);
    if !largeness.holds {
        return Err(largeness_failure("input nerve", &largeness));
    }
    if let Some(Sd2Report {
        holds: Some(false),
        witness,
        ..
    }) = &report.input.as_ref().unwrap().sd2
    {
        return Err(Error::Verification(format!(
            "input nerve fails SD2* links: {witness:?}"
        )));
    }
    let w = RacgSystem::from_nerve(x)?;
    let ir = report.input.as_mut().unwrap();
    ir.finite_group = w.is_finite();
    ir.hyperbolicity_witness = w.hyperbolicity_witness();
    ir.hyperbolic = ir.hyperbolicity_witness.is_none();
    ir.spherical_subsets = w.spherical_subsets().len();
    if small {
        let full = w.spherical_subsets().len() <= crate::homology::vcd::FULL_TABLE_LIMIT;
        ir.vcd = Some(vcd_lower_bound_with(&w, config.coefficients, full, full)?);
    }
    Ok(w)
}

/// Step 2: the first scheduled modulus whose kernel displaces the base vertex by
/// at least `r`, then `Y` and the certificate that `H^{n+1}(Y) ≠ 0`.
pub fn step2(
    w: &RacgSystem,
    top_degree: Option<i64>,
    radius: usize,
    config: &PipelineConfig,
    report: &mut StageReport,
) -> Result<QuotientDavis> {
    let cap = config.element_cap;
    let mut qr = QuotientReport {
        attempts: Vec::new(),
        modulus: None,
        congruence_order: None,
        group_order: None,
        displacement: None,
        y_cubes: None,
        y_euler_characteristic: None,
        degenerate: None,
        lift: None,
    };
    let mut accepted = None;
    let mut largest = 0usize;
    for &m in &config.moduli {
        let mut attempt = ModulusAttempt {
            modulus: m,
            order: None,
            displacement_holds: None,
            witness: None,
            note: None,
        };
        match FiniteQuotient::congruence(w, m, cap) {
            Ok(q) => {
                largest = largest.max(q.order());
                attempt.order = Some(q.order());
                match displacement_at_least(w, &q, radius, cap) {
                    Ok(check) => {
                        attempt.displacement_holds = Some(check.holds);
                        attempt.witness = check.witness;
                        if check.holds {
                            qr.attempts.push(attempt);
                            accepted = Some((m, q));
                            break;
                        }
                    }
                    Err(Error::Resource { what, reached, .. }) => {
                        attempt.note =
                            Some(format!("displacement ball cap: {what} reached {reached}"));
                    }
                    Err(e) => return Err(e),
                }
            }
            Err(Error::Resource { what, reached, .. }) => {
                largest = largest.max(reached);
                attempt.note = Some(format!("closure cap: {what} reached {reached}"));
            }
            Err(e) => return Err(e),
        }
        qr.attempts.push(attempt);
    }
    let Some((m, q)) = accepted else {
        report.quotient = Some(qr);
        return Err(Error::Resource {
            what: format!(
                "modulus schedule {:?} exhausted at displacement {radius}; largest |G| attempted",
                config.moduli
            ),
            limit: cap,
            reached: largest,
        });
    };
    qr.modulus = Some(m);
    qr.congruence_order = Some(q.order());
    let searched_to = radius + 1;
    qr.displacement = Some(DisplacementSummary {
        required: radius,
        minimum: min_displacement(w, &q, searched_to, cap)?.map(|k| k.distance),
        searched_to,
    });
    report.certificates.torsion_free = Some(q.torsion_free_certificate());
    let (q, how) = orientable_refinement(&q, cap)?;
    report.certificates.orientable = Some(how);
    qr.group_order = Some(q.order());
    report.quotient = Some(qr);

    let y = quotient_davis(q, cap)?;
    let eps = orientation(&y)?;
    let qr = report.quotient.as_mut().unwrap();
    qr.y_cubes = Some(y.complex.cube_counts());
    qr.y_euler_characteristic = Some(y.euler_characteristic());
    let n = match (w.is_finite(), top_degree) {
        (true, _) => {
            qr.degenerate = Some("no dimension gain: finite group".into());
            return Ok(y);
        }
        (false, None) => {
            qr.degenerate = Some("no dimension gain: nerve is acyclic".into());
            return Ok(y);
        }
        (false, Some(n)) => n,
    };
    let pair = ChamberPair::new(w.chamber())?;
    let class = pair.nontrivial_class(n + 1).ok_or_else(|| {
        Error::InternalConsistency(format!(
            "H^{}(K, K^S; Q) vanishes although the nerve has H^{n}",
            n + 1
        ))
    })?;
    let cert = lift_and_certify(&y, &eps, &pair, &class.f, config.direct_solve_limit)?;
    report.certificates.delta_f_prime_zero = Some(cert.delta_f_prime_zero);
    report.certificates.f_prime_nontrivial = Some(cert.nontrivial);
    let ok = cert.delta_f_prime_zero && cert.nontrivial;
    qr.lift = Some(cert);
    if !ok {
        return Err(Error::Verification(format!(
            "lifted class in degree {} is not certified nontrivial",
            n + 1
        )));
    }
    Ok(y)
}

/// Every generator, acting on the left, maps facets of `Th(Y)` to facets.
/// Together with transitivity of `G` on itself this makes the thickening
/// vertex-transitive.
pub fn verify_left_action(y: &QuotientDavis, x: &SimplicialComplex) -> Result<bool> {
    let q = &y.quotient;
    if x.num_vertices() != q.order()
        || x.names()
            .iter()
            .enumerate()
            .any(|(i, n)| *n != format!("g{i}"))
    {
        return Err(Error::InternalConsistency(
            "thickening vertices are not the group elements in order".into(),
        ));
    }
    let facets: HashSet<&[Vertex]> = x.facets().iter().map(|f| f.as_slice()).collect();
    for s in 0..q.num_generators() as Vertex {
        let broken = x.facets().par_iter().any(|f| {
            let mut image: Vec<Vertex> = f.iter().map(|&v| q.left_mul(s, v)).collect();
            image.sort_unstable();
            !facets.contains(image.as_slice())
        });
        if broken {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Step 3: `X' = Th(Y)`, re-verified directly.
pub fn step3(
    y: &QuotientDavis,
    input: &StageInput,
    top_degree: Option<i64>,
    certified: bool,
    config: &PipelineConfig,
    report: &mut StageReport,
) -> Result<SimplicialComplex> {
    let x = y.complex.thicken().complex;
    let big = x.num_vertices() > config.full_check_limit;
    let left = if big {
        Some(verify_left_action(y, &x)?)
    } else {
        None
    };
    if left == Some(false) {
        return Err(Error::InternalConsistency(
            "left multiplication does not preserve the thickening".into(),
        ));
    }
    let largeness = check_largeness(&x, config.k_large, big, config.full_check_limit)?;
    let mut out = OutputReport {
        vertices: x.num_vertices(),
        facets: x.facets().len(),
        dimension: x.dimension(),
        largeness: largeness.clone(),
        left_action_verified: left,
        sd2: None,
        homology_skipped: true,
        betti: None,
        betti_q: None,
        betti_f2: None,
        betti_matches_y: None,
        top_degree: None,
        next_vcd_lower_bound: None,
        next_vcd_source: None,
        tracked: None,
    };
    if !largeness.holds {
        report.output = Some(out);
        return Err(largeness_failure("thickening X'", &largeness));
    }
    if config.sd2_links {
        let sd2 = check_sd2(&x, config.k_large.max(6), config.full_check_limit)?;
        let failed = sd2.holds == Some(false);
        out.sd2 = Some(sd2);
        if failed {
            report.output = Some(out);
            return Err(Error::Verification("thickening X' fails SD2* links".into()));
        }
    }

    let y_cells = y
        .complex
        .cubes()
        .len()
        .saturating_mul(3usize.pow(y.complex.dimension().max(0) as u32));
    if simplex_bound(&x) <= config.homology_cap && y_cells <= config.homology_cap {
        let tri = y.complex.chambered_triangulation().complex;
        let bq = homology(&x, Coefficients::Rationals, false)?.betti();
        let bf = homology(&x, Coefficients::Prime(2), false)?.betti();
        let same = trim(&bq) == trim(&homology(&tri, Coefficients::Rationals, false)?.betti())
            && trim(&bf) == trim(&homology(&tri, Coefficients::Prime(2), false)?.betti());
        if !same {
            report.output = Some(out);
            return Err(Error::InternalConsistency(
                "Betti numbers of X' and Y differ".into(),
            ));
        }
        out.betti = Some(match config.coefficients {
            Coefficients::Rationals => bq.clone(),
            Coefficients::Prime(2) => bf.clone(),
            c => homology(&x, c, false)?.betti(),
        });
        out.top_degree = cohomology(&x, Coefficients::Rationals, true)?.top_nonzero_degree();
        out.betti_q = Some(bq);
        out.betti_f2 = Some(bf);
        out.betti_matches_y = Some(true);
        out.homology_skipped = false;
        if let (true, Some(n)) = (certified, top_degree) {
            let h = out
                .betti_q
                .as_ref()
                .unwrap()
                .get(n as usize + 1)
                .copied()
                .unwrap_or(0);
            if h == 0 {
                report.output = Some(out);
                return Err(Error::InternalConsistency(format!(
                    "certified H^{}(X') vanishes",
                    n + 1
                )));
            }
        }
        let w = RacgSystem::from_nerve(&x)?;
        let full = w.spherical_subsets().len() <= crate::homology::vcd::FULL_TABLE_LIMIT;
        let vcd = vcd_lower_bound_with(&w, Coefficients::Rationals, full, full)?;
        out.next_vcd_lower_bound = Some(vcd.bound);
        out.next_vcd_source = Some("vcd_table".into());
    } else if let (true, Some(n)) = (certified, top_degree) {
        out.top_degree = None;
        out.next_vcd_lower_bound = Some(n + 2);
        out.next_vcd_source = Some("certificate".into());
    }

    if let Some(names) = &input.track {
        let z = input.nerve.induced_by_names(names)?;
        let q = &y.quotient;
        let mut injection = BTreeMap::new();
        for name in z.names() {
            let s = y.system().generator(name)?;
            injection.insert(name.clone(), format!("g{}", q.right_mul(0, s)));
        }
        let image = z.relabel(|v| injection[v].clone())?;
        let full = x.is_full_subcomplex(&image)?;
        out.tracked = Some(TrackReport { injection, full });
        if !full {
            report.output = Some(out);
            return Err(Error::Verification(
                "tracked subcomplex is not full in X'".into(),
            ));
        }
    }
    report.output = Some(out);
    Ok(x)
}

fn trim(b: &[usize]) -> &[usize] {
    let end = b.iter().rposition(|&v| v != 0).map_or(0, |i| i + 1);
    &b[..end]
}

/// One full stage. The report is filled as far as the stage got.
pub fn run_stage(
    stage: usize,
    input: &StageInput,
    config: &PipelineConfig,
    timing: &mut StageTiming,
) -> (StageReport, Option<(SimplicialComplex, QuotientDavis)>) {
    let radius = config.radius(stage);
    let mut report = StageReport::new(stage + 1, radius);
    timing.stage = stage + 1;
    let result = (|| -> Result<(SimplicialComplex, QuotientDavis)> {
        let t = Instant::now();
        let w = step1(input, config, &mut report)?;
        timing.step1_seconds = t.elapsed().as_secs_f64();
        let n = report.input.as_ref().and_then(|i| i.top_degree);
        let t = Instant::now();
        let y = step2(&w, n, radius, config, &mut report)?;
        timing.step2_seconds = t.elapsed().as_secs_f64();
        let certified = report.certificates.f_prime_nontrivial == Some(true);
        let t = Instant::now();
        let x = step3(&y, input, n, certified, config, &mut report)?;
        timing.step3_seconds = t.elapsed().as_secs_f64();
        Ok((x, y))
    })();
    timing.peak_rss_kib = peak_rss_kib();
    match result {
        Ok(v) => (report, Some(v)),
        Err(e) => {
            report.error = Some(StageError::from_error(&e));
            (report, None)
        }
    }
}

/// The input of the next stage, given a successful stage.
fn next_input(report: &StageReport, x: SimplicialComplex, y: Option<&QuotientDavis>) -> StageInput {
    let certified = report.certificates.f_prime_nontrivial == Some(true);
    let n = report.input.as_ref().and_then(|i| i.top_degree);
    let out = report.output.as_ref();
    let track = out
        .and_then(|o| o.tracked.as_ref())
        .map(|t| t.injection.values().cloned().collect());
    StageInput {
        nerve: x,
        inherited_top_degree: if certified { n.map(|n| n + 1) } else { None },
        vertex_transitive: y.is_some() || out.is_some_and(|o| o.left_action_verified == Some(true)),
        track,
    }
}

fn stage_dir(root: &Path, stage: usize) -> PathBuf {
    root.join(format!("stage_{}", stage + 1))
}

/// Serialized description of the accepted quotient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientArtifact {
    pub kind: QuotientKind,
    pub sign_refined: bool,
    pub order: usize,
    pub generators: BTreeMap<String, Vec<Vec<u64>>>,
}

impl QuotientArtifact {
    pub fn of(q: &FiniteQuotient) -> Self {
        QuotientArtifact {
            kind: q.kind().clone(),
            sign_refined: q.is_sign_refined(),
            order: q.order(),
            generators: q.generator_images(),
        }
    }
}

fn status_of(stages: &[StageReport]) -> (String, i32) {
    match stages.iter().find_map(|s| s.error.as_ref()) {
        None => ("success".into(), 0),
        Some(e) => {
            let status = match e.exit_code {
                2 => "verification_failure",
                3 => "resource_limit",
                _ => "error",
            };
            (status.into(), e.exit_code)
        }
    }
}

/// Runs the pipeline in memory.
pub fn run_pipeline(config: &PipelineConfig) -> Result<PipelineOutcome> {
    run_pipeline_in(config, None, false)
}

/// Runs the pipeline, writing stage artifacts under `out` when given. With
/// `resume`, a stage whose saved input matches and which succeeded is loaded
/// instead of recomputed.
pub fn run_pipeline_in(
    config: &PipelineConfig,
    out: Option<&Path>,
    resume: bool,
) -> Result<PipelineOutcome> {
    config.validate()?;
    let x0 = io::load_nerve(&config.x0)?;
    if let Some(names) = &config.track {
        let z = x0.induced_by_names(names)?;
        if !x0.is_full_subcomplex(&z)? {
            return Err(Error::InternalConsistency(
                "induced subcomplex is not full".into(),
            ));
        }
    }
    if let Some(dir) = out {
        io::write_json(&dir.join("config.json"), config)?;
    }
    let mut input = StageInput::new(x0);
    input.track = config.track.clone();
    let mut stages = Vec::new();
    let mut timings = Vec::new();
    let mut final_nerve = None;
    for stage in 0..config.steps {
        let mut timing = StageTiming::default();
        let nerve_json = SimplicialJson::from_complex(&input.nerve);
        if let (Some(dir), true) = (out, resume) {
            if let Some((report, x)) = load_stage(&stage_dir(dir, stage), &nerve_json)? {
                timing.stage = stage + 1;
                timing.resumed = true;
                timings.push(timing);
                let next = next_input(&report, x, None);
                stages.push(report);
                input = next;
                continue;
            }
        }
        let (report, result) = run_stage(stage, &input, config, &mut timing);
        if let Some(dir) = out {
            let sd = stage_dir(dir, stage);
            io::write_json(&sd.join("nerve.json"), &nerve_json)?;
            io::write_json(&sd.join("report.json"), &report)?;
            if let Some((x, y)) = &result {
                io::write_json(
                    &sd.join("quotient.json"),
                    &QuotientArtifact::of(&y.quotient),
                )?;
                io::write_json(&sd.join("x_prime.json"), &SimplicialJson::from_complex(x))?;
            }
        }
        timings.push(timing);
        let failed = result.is_none();
        match result {
            Some((x, y)) => {
                let next = next_input(&report, x, Some(&y));
                stages.push(report);
                input = next;
            }
            None => stages.push(report),
        }
        if failed {
            break;
        }
    }
    let (status, exit_code) = status_of(&stages);
    if exit_code == 0 {
        let top = stages
            .last()
            .and_then(|s| s.output.as_ref())
            .and_then(|o| o.top_degree)
            .or(input.inherited_top_degree);
        final_nerve = Some(input.nerve);
        let x = final_nerve.as_ref().unwrap();
        let fin = FinalNerve {
            vertices: x.num_vertices(),
            facets: x.facets().len(),
            dimension: x.dimension(),
            top_degree: top,
        };
        let report = PipelineReport {
            config: config.clone(),
            status,
            exit_code,
            stages,
            final_nerve: Some(fin),
        };
        finish(out, &report, &timings)?;
        return Ok(PipelineOutcome {
            report,
            timings,
            final_nerve,
        });
    }
    let report = PipelineReport {
        config: config.clone(),
        status,
        exit_code,
        stages,
        final_nerve: None,
    };
    finish(out, &report, &timings)?;
    Ok(PipelineOutcome {
        report,
        timings,
        final_nerve,
    })
}

fn finish(out: Option<&Path>, report: &PipelineReport, timings: &[StageTiming]) -> Result<()> {
    if let Some(dir) = out {
        io::write_json(&dir.join("report.json"), report)?;
        io::write_json(&dir.join("timings.json"), &timings)?;
    }
    Ok(())
}

fn load_stage(
    dir: &Path,
    nerve: &SimplicialJson,
) -> Result<Option<(StageReport, SimplicialComplex)>> {
    let paths = [
        dir.join("nerve.json"),
        dir.join("report.json"),
        dir.join("x_prime.json"),
    ];
    if !paths.iter().all(|p| p.exists()) {
        return Ok(None);
    }
    let saved: SimplicialJson = io::read_json(&paths[0])?;
    if saved != *nerve {
        return Ok(None);
    }
    let report: StageReport = io::read_json(&paths[1])?;
    if report.error.is_some() {
        return Ok(None);
    }
    let x = io::read_simplicial(&paths[2])?;
    Ok(Some((report, x)))
}

// ------------------------------------------------------------------ replay

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReplayStage {
    pub stage: usize,
    /// The saved input is the saved output of the previous stage (or `X₀`).
    pub input_chained: bool,
    pub quotient_matches: Option<bool>,
    pub x_prime_matches: Option<bool>,
    /// Saved `X'` passes the largeness check on its own.
    pub x_prime_large: Option<bool>,
    pub report_matches: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReplayReport {
    pub ok: bool,
    pub stages: Vec<ReplayStage>,
}

/// Recomputes every saved stage from its saved input and compares quotient,
/// `X'` and report with what is on disk.
pub fn replay(dir: &Path) -> Result<ReplayReport> {
    let config: PipelineConfig = io::read_json(&dir.join("config.json"))?;
    config.validate()?;
    let mut expected_input = SimplicialJson::from_complex(&io::load_nerve(&config.x0)?);
    let mut stages = Vec::new();
    let mut previous: Option<StageInput> = None;
    for stage in 0..config.steps {
        let sd = stage_dir(dir, stage);
        if !sd.join("nerve.json").exists() {
            break;
        }
        let saved_nerve: SimplicialJson = io::read_json(&sd.join("nerve.json"))?;
        let saved_report: StageReport = io::read_json(&sd.join("report.json"))?;
        let input_chained = saved_nerve == expected_input;
        let mut input = match previous.take() {
            Some(p) => StageInput {
                nerve: saved_nerve.to_complex()?,
                ..p
            },
            None => {
                let mut i = StageInput::new(saved_nerve.to_complex()?);
                i.track = config.track.clone();
                i
            }
        };
        if !input_chained {
            input.inherited_top_degree = None;
        }
        let mut timing = StageTiming::default();
        let (report, result) = run_stage(stage, &input, &config, &mut timing);
        let mut rs = ReplayStage {
            stage: stage + 1,
            input_chained,
            quotient_matches: None,
            x_prime_matches: None,
            x_prime_large: None,
            report_matches: report == saved_report,
        };
        let Some((x, y)) = result else {
            stages.push(rs);
            break;
        };
        if sd.join("quotient.json").exists() {
            let saved: QuotientArtifact = io::read_json(&sd.join("quotient.json"))?;
            rs.quotient_matches = Some(saved == QuotientArtifact::of(&y.quotient));
        }
        if sd.join("x_prime.json").exists() {
            let saved = io::read_simplicial(&sd.join("x_prime.json"))?;
            rs.x_prime_matches = Some(saved.same_complex(&x));
            let transitive = verify_left_action(&y, &saved).unwrap_or(false);
            rs.x_prime_large = Some(
                check_largeness(&saved, config.k_large, transitive, config.full_check_limit)?.holds,
            );
        }
        expected_input = SimplicialJson::from_complex(&x);
        previous = Some(next_input(&report, x, Some(&y)));
        stages.push(rs);
    }
    let ok = !stages.is_empty()
        && stages.iter().all(|s| {
            s.input_chained
                && s.report_matches
                && s.quotient_matches != Some(false)
                && s.x_prime_matches != Some(false)
                && s.x_prime_large != Some(false)
        });
    Ok(ReplayReport { ok, stages })
}
