use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use racg_core::antisym::orientation;
use racg_core::coxeter::RacgSystem;
use racg_core::homology::{vcd_lower_bound, ChainComplex, Coefficients};
use racg_core::io::{self, CubicalJson, SimplicialJson};
use racg_core::pipeline::{self, PipelineConfig, QuotientArtifact};
use racg_core::quotient::{
    displacement_at_least, orientable_refinement, quotient_davis, FiniteQuotient, QuotientSpec,
    DEFAULT_ELEMENT_CAP,
};
use racg_core::{fixtures, Error, Result};

/// Right-angled Coxeter groups, their finite quotients and thickened Davis complexes.
#[derive(Parser)]
#[command(name = "racg", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check k-largeness (and optionally SD2*) of a simplicial complex, or local
    /// k-largeness of a cube complex.
    Check(CheckArgs),
    /// Describe the right-angled Coxeter system of a nerve.
    Coxeter {
        #[arg(long)]
        nerve: String,
    },
    /// Build a finite quotient and test its displacement.
    Quotient(QuotientArgs),
    /// Thicken a cube complex.
    Thicken {
        /// Cube complex file or `fixture:<name>`.
        input: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Homology or cohomology of a simplicial complex.
    Homology(HomologyArgs),
    /// Run the staged construction from a config file, or replay a saved run.
    Pipeline(PipelineArgs),
    /// Print a built-in complex as JSON.
    Fixture {
        name: Option<String>,
        #[arg(long)]
        cubical: bool,
        #[arg(long)]
        list: bool,
    },
}

#[derive(Args)]
struct CheckArgs {
    /// Complex file or `fixture:<name>`.
    input: String,
    #[arg(long, default_value_t = 5)]
    k: usize,
    /// Also check SD2*(k).
    #[arg(long)]
    sd2: bool,
    /// With --sd2: check every link as well.
    #[arg(long)]
    links: bool,
    /// Treat the input as a cube complex and check that every vertex link is k-large.
    #[arg(long)]
    cubical: bool,
}

#[derive(Args)]
struct QuotientArgs {
    #[arg(long)]
    nerve: String,
    #[arg(
        long,
        conflicts_with = "quotient_file",
        required_unless_present = "quotient_file"
    )]
    modulus: Option<u64>,
    /// Generator images over Z/m, as `{"modulus": m, "generators": {...}}`.
    #[arg(long)]
    quotient_file: Option<PathBuf>,
    /// Required displacement of the kernel in the thickened Davis complex (at least 2).
    #[arg(long, default_value_t = 2)]
    displacement: usize,
    #[arg(long, default_value_t = DEFAULT_ELEMENT_CAP)]
    cap: usize,
    /// Write the quotient Davis complex here instead of printing it.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct HomologyArgs {
    input: String,
    /// z, q, f2 or fp:<p>.
    #[arg(long, default_value = "z")]
    coeff: String,
    /// A degree, or `all`.
    #[arg(long, default_value = "all")]
    degree: String,
    #[arg(long)]
    reduced: bool,
    /// Subcomplex for relative (co)homology.
    #[arg(long)]
    relative: Option<String>,
    #[arg(long)]
    cohomology: bool,
}

#[derive(Args)]
struct PipelineArgs {
    #[arg(long, required_unless_present = "replay")]
    config: Option<PathBuf>,
    /// Directory for stage artifacts, the report and timings.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Reuse finished stages found in --out.
    #[arg(long, requires = "out")]
    resume: bool,
    /// Recompute a saved run and compare it with its artifacts.
    #[arg(long, conflicts_with = "config")]
    replay: Option<PathBuf>,
}

/// A command result: JSON to print and the exit code.
struct Outcome {
    value: Value,
    code: u8,
}

fn ok(value: Value) -> Outcome {
    Outcome { value, code: 0 }
}

fn verdict(value: Value, holds: bool) -> Outcome {
    Outcome {
        value,
        code: if holds { 0 } else { 2 },
    }
}

fn check(a: CheckArgs) -> Result<Outcome> {
    if a.cubical {
        let y = io::load_cubical(&a.input)?;
        let w = y.local_largeness_witness(a.k)?;
        let holds = w.is_none();
        let witness = w.map(|(v, w)| json!({"vertex": v, "witness": w}));
        return Ok(verdict(
            json!({"k": a.k, "locally_k_large": holds, "witness": witness}),
            holds,
        ));
    }
    let x = io::load_nerve(&a.input)?;
    let w = x.largeness_witness(a.k)?;
    let mut holds = w.is_none();
    let mut out = json!({"k": a.k, "k_large": holds, "witness": w});
    if a.sd2 {
        let sd2 = if a.links {
            serde_json::to_value(x.sd2_star_links_witness(a.k)?)?
        } else {
            serde_json::to_value(x.sd2_star_witness(a.k)?)?
        };
        let good = sd2.is_null();
        holds &= good;
        out["sd2"] = json!({"links": a.links, "holds": good, "witness": sd2});
    }
    Ok(verdict(out, holds))
}

fn coxeter(nerve: &str) -> Result<Outcome> {
    let x = io::load_nerve(nerve)?;
    let w = RacgSystem::from_nerve(&x)?;
    let pairs: Vec<[String; 2]> = w
        .commuting_pairs()
        .into_iter()
        .map(|(s, t)| [x.name(s).to_string(), x.name(t).to_string()])
        .collect();
    let tits: BTreeMap<String, Vec<Vec<i64>>> = (0..w.num_generators() as u32)
        .map(|s| Ok((x.name(s).to_string(), w.tits_matrix(s)?.rows())))
        .collect::<Result<_>>()?;
    let witness = w.hyperbolicity_witness();
    Ok(ok(json!({
        "generators": w.generator_names(),
        "commuting_pairs": pairs,
        "spherical_subsets": w.spherical_subsets().len(),
        "finite": w.is_finite(),
        "hyperbolic": witness.is_none(),
        "hyperbolicity_witness": witness,
        "vcd": vcd_lower_bound(&w)?,
        "tits_matrices": tits,
    })))
}

fn quotient(a: QuotientArgs) -> Result<Outcome> {
    let x = io::load_nerve(&a.nerve)?;
    let w = RacgSystem::from_nerve(&x)?;
    let q = match (a.modulus, &a.quotient_file) {
        (Some(m), _) => FiniteQuotient::congruence(&w, m, a.cap)?,
        (None, Some(path)) => {
            FiniteQuotient::user(&w, &io::read_json::<QuotientSpec>(path)?, a.cap)?
        }
        (None, None) => {
            return Err(Error::malformed(
                "either --modulus or --quotient-file is required",
            ))
        }
    };
    if a.displacement < 2 {
        return Err(Error::domain(
            "the quotient Davis complex needs displacement at least 2",
        ));
    }
    let check = displacement_at_least(&w, &q, a.displacement, a.cap)?;
    let mut out = json!({
        "quotient": QuotientArtifact::of(&q),
        "displacement_check": check,
    });
    if !check.holds {
        return Ok(verdict(out, false));
    }
    let (r, how) = orientable_refinement(&q, a.cap)?;
    let y = quotient_davis(r, a.cap)?;
    let eps = orientation(&y)?;
    out["certificate"] = json!({
        "torsion_free": q.torsion_free_certificate(),
        "orientable": how,
        "displacement": a.displacement,
        "group_order": y.quotient.order(),
        "positive_chambers": eps.values.iter().filter(|&&v| v > 0).count(),
        "cube_counts": y.complex.cube_counts(),
        "euler_characteristic": y.euler_characteristic(),
    });
    let complex = CubicalJson::from_complex(&y.complex);
    match &a.out {
        Some(path) => io::write_json(path, &complex)?,
        None => out["complex"] = serde_json::to_value(complex)?,
    }
    Ok(ok(out))
}

fn thicken(input: &str, out: Option<PathBuf>) -> Result<Outcome> {
    let y = io::load_cubical(input)?;
    let x = y.thicken().complex;
    let j = SimplicialJson::from_complex(&x);
    match out {
        Some(path) => {
            io::write_json(&path, &j)?;
            Ok(ok(
                json!({"vertices": x.num_vertices(), "facets": x.facets().len(), "dimension": x.dimension()}),
            ))
        }
        None => Ok(ok(serde_json::to_value(j)?)),
    }
}

fn homology(a: HomologyArgs) -> Result<Outcome> {
    let coeff = Coefficients::parse(&a.coeff)?;
    let x = io::load_nerve(&a.input)?;
    let sub = a.relative.as_deref().map(io::load_nerve).transpose()?;
    let chain = ChainComplex::new(&x, sub.as_ref(), a.reduced)?;
    let result = if a.cohomology {
        chain.cohomology(coeff)?
    } else {
        chain.homology(coeff)?
    };
    let value = match a.degree.as_str() {
        "all" => serde_json::to_value(&result)?,
        d => {
            let d: i64 = d.parse().map_err(|_| {
                Error::malformed(format!("--degree expects an integer or all, got {d:?}"))
            })?;
            serde_json::to_value(result.group(d))?
        }
    };
    Ok(ok(value))
}

fn run_pipeline(a: PipelineArgs) -> Result<Outcome> {
    if let Some(dir) = &a.replay {
        let r = pipeline::replay(dir)?;
        let good = r.ok;
        return Ok(verdict(serde_json::to_value(r)?, good));
    }
    let path = a
        .config
        .ok_or_else(|| Error::malformed("--config is required"))?;
    let config: PipelineConfig = io::read_json(&path)?;
    let outcome = pipeline::run_pipeline_in(&config, a.out.as_deref(), a.resume)?;
    let code = outcome.report.exit_code as u8;
    Ok(Outcome {
        value: serde_json::to_value(&outcome.report)?,
        code,
    })
}

fn fixture(name: Option<String>, cubical: bool, list: bool) -> Result<Outcome> {
    if list {
        return Ok(ok(json!({
            "simplicial": fixtures::NAMES,
            "simplicial_families": ["cycle<n>"],
            "cubical": fixtures::CUBICAL_NAMES,
            "cubical_families": ["cubical_cycle<n>", "square_grid<n>"],
        })));
    }
    let name = name.ok_or_else(|| Error::malformed("a fixture name or --list is required"))?;
    let value = if cubical {
        let y = fixtures::cubical_by_name(&name)
            .ok_or_else(|| Error::malformed(format!("unknown cubical fixture {name:?}")))?;
        serde_json::to_value(CubicalJson::from_complex(&y))?
    } else {
        let x = fixtures::by_name(&name)
            .ok_or_else(|| Error::malformed(format!("unknown fixture {name:?}")))?;
        serde_json::to_value(SimplicialJson::from_complex(&x))?
    };
    Ok(ok(value))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Check(a) => check(a),
        Command::Coxeter { nerve } => coxeter(&nerve),
        Command::Quotient(a) => quotient(a),
        Command::Thicken { input, out } => thicken(&input, out),
        Command::Homology(a) => homology(a),
        Command::Pipeline(a) => run_pipeline(a),
        Command::Fixture {
            name,
            cubical,
            list,
        } => fixture(name, cubical, list),
    };
    match result.and_then(|o| Ok((io::to_json_string(&o.value)?, o.code))) {
        Ok((text, code)) => {
            print!("{text}");
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
