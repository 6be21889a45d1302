//! `monopoles`: command-line front end for the corner-structure library.
//!
//! Exit codes: 0 on success, 1 for invalid parameters, 2 for unreadable or
//! malformed input files (and for command-line usage errors).

mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand};
use monopole_corners::clusters::{boundary_coords, scale_chain, taubes_cluster};
use monopole_corners::faces::{self, FaceDescriptor};
use monopole_corners::gibbons_manton::{torus_group_structure, weight_system};
use monopole_corners::ratmaps::Conjugate;
use monopole_corners::{
    BigRational, ChainFlag, Configuration, ExactRationalMap, GaussianRational, IntegerPartition, SetPartition, StrongFieldInput,
};
use serde::Serialize;

use output::{emit, Format, Table};

#[derive(Parser, Debug)]
#[command(name = "monopoles", version, about = "Corner structure of compactified monopole moduli spaces")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value = "table")]
    format: Format,
    /// Write output to this file instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Boundary hypersurfaces (or corners of a given codimension) of the compactified space.
    Faces {
        #[arg(long)]
        k: usize,
        /// Corner codimension; hypersurfaces when omitted.
        #[arg(long)]
        codim: Option<usize>,
        /// Ambient partition for the relative space, as a restricted-growth string.
        #[arg(long)]
        nu: Option<String>,
    },
    /// Cluster decomposition of a strong-field region given as JSON.
    Cluster {
        #[arg(long)]
        input: PathBuf,
        /// Overrides `r_prime` from the input file.
        #[arg(long)]
        r_prime: Option<f64>,
        /// Also write the per-round history as CSV.
        #[arg(long)]
        rounds_csv: Option<PathBuf>,
    },
    /// Multi-scale boundary face of a point configuration.
    Chain {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 10.0)]
        base_scale: f64,
        #[arg(long, default_value_t = 10.0)]
        ratio: f64,
    },
    /// Boundary defining functions of a configuration near a chain's face.
    Coords {
        #[arg(long)]
        input: PathBuf,
        /// Proper chain entries as restricted-growth strings separated by `;`, finest first.
        #[arg(long)]
        chain: String,
    },
    /// Resultant and centring predicates of a rational map.
    Resultant {
        #[arg(long)]
        input: PathBuf,
    },
    /// Chern-weight system of the Gibbons–Manton bundle of a flag.
    Gm {
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        nu: String,
    },
    /// Structure of the torus group `{Π ζ_j^{k_j} = 1}` of a type.
    TorusGroup {
        /// Parts of the type, e.g. `2,2` or `(1,3)`.
        #[arg(long = "type")]
        parts: String,
    },
    /// Checks the iterated-boundary-fibration conditions on the atlas.
    ValidateIbf {
        #[arg(long)]
        k: usize,
    },
    /// Order in which the adapted cover is built.
    CoverSchedule {
        #[arg(long)]
        k: usize,
    },
}

/// Failure to read or parse an input file; reported with exit code 2.
#[derive(Debug)]
struct InputError(anyhow::Error);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:#}", self.0)
    }
}

impl std::error::Error for InputError {}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let load = || -> Result<T> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    };
    load().map_err(|e| InputError(e).into())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<InputError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn run(cli: &Cli) -> Result<()> {
    let mut out: Box<dyn Write> = match &cli.output {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("creating {}", path.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    let out = out.as_mut();
    let f = cli.format;
    match &cli.command {
        Command::Faces { k, codim, nu } => cmd_faces(out, f, *k, *codim, nu.as_deref()),
        Command::Cluster { input, r_prime, rounds_csv } => cmd_cluster(out, f, input, *r_prime, rounds_csv.as_deref()),
        Command::Chain { input, base_scale, ratio } => cmd_chain(out, f, input, *base_scale, *ratio),
        Command::Coords { input, chain } => cmd_coords(out, f, input, chain),
        Command::Resultant { input } => cmd_resultant(out, f, input),
        Command::Gm { lambda, nu } => cmd_gm(out, f, lambda, nu),
        Command::TorusGroup { parts } => cmd_torus_group(out, f, parts),
        Command::ValidateIbf { k } => cmd_validate_ibf(out, f, *k),
        Command::CoverSchedule { k } => cmd_cover_schedule(out, f, *k),
    }?;
    out.flush()?;
    Ok(())
}

fn join_types(types: &[IntegerPartition]) -> String {
    types.iter().map(ToString::to_string).collect::<Vec<_>>().join(" < ")
}

fn cmd_faces(out: &mut dyn Write, f: Format, k: usize, codim: Option<usize>, nu: Option<&str>) -> Result<()> {
    let d = codim.unwrap_or(1);
    let atlas: Vec<FaceDescriptor> = match nu {
        Some(text) => {
            let nu = SetPartition::parse_rgs(text)?;
            if nu.k() != k {
                return Err(anyhow!("--nu has {} elements but k = {k}", nu.k()));
            }
            faces::relative_corner_atlas(&nu, d)?
        }
        None => faces::corner_atlas(k, d)?,
    };
    emit(out, f, &atlas, || {
        let mut t = Table::new(["chain", "types", "codim", "fiber_dim", "base_dims", "total_dim"]);
        for face in &atlas {
            t.push(vec![
                face.chain.to_rgs_strings().join(" < "),
                join_types(&face.integer_types),
                face.codim.to_string(),
                face.fiber_dim.to_string(),
                face.base_dims.iter().map(ToString::to_string).collect::<Vec<_>>().join(","),
                face.total_dim.to_string(),
            ]);
        }
        t
    })
}

fn cmd_cluster(
    out: &mut dyn Write,
    f: Format,
    input: &Path,
    r_prime: Option<f64>,
    rounds_csv: Option<&Path>,
) -> Result<()> {
    let mut data: StrongFieldInput = read_json(input)?;
    if let Some(r) = r_prime {
        data.r_prime = r;
    }
    data.validate().map_err(|e| InputError(e.into()))?;
    let dec = taubes_cluster(&data)?;
    let history = || {
        let mut t = Table::new(["t", "d", "R", "gamma", "blocks"]);
        for r in &dec.history {
            t.push(vec![r.t.to_string(), r.d.to_string(), r.radius.to_string(), r.gamma.to_string(), r.blocks.to_string()]);
        }
        t
    };
    if let Some(path) = rounds_csv {
        let mut file = BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?);
        history().write_csv(&mut file)?;
        file.flush()?;
    }
    match f {
        Format::Table => {
            writeln!(out, "type: {}", dec.cluster_type)?;
            writeln!(out, "partition: {}", dec.partition)?;
            writeln!(out, "rounds: {}", dec.rounds)?;
            writeln!(out, "radius: {}", dec.radius)?;
            writeln!(out, "threshold: {}", dec.threshold)?;
            writeln!(out, "epsilon: {}", dec.epsilon)?;
            writeln!(out)?;
            history().write_table(out)
        }
        _ => emit(out, f, &dec, history),
    }
}

#[derive(serde::Deserialize)]
struct ConfigurationFile {
    points: Vec<[f64; 3]>,
}

fn read_configuration(path: &Path) -> Result<Configuration> {
    let file: ConfigurationFile = read_json(path)?;
    Configuration::new(file.points).map_err(|e| InputError(e.into()).into())
}

fn cmd_chain(out: &mut dyn Write, f: Format, input: &Path, base: f64, ratio: f64) -> Result<()> {
    let c = read_configuration(input)?;
    let chain = scale_chain(&c, base, ratio)?;
    match f {
        Format::Table => {
            writeln!(out, "{chain}")?;
            Ok(())
        }
        _ => emit(out, f, &chain, || {
            let mut t = Table::new(["level", "partition", "type"]);
            for (i, p) in chain.entries().iter().enumerate() {
                t.push(vec![(i + 1).to_string(), p.to_string(), chain.types()[i].to_string()]);
            }
            t
        }),
    }
}

fn cmd_coords(out: &mut dyn Write, f: Format, input: &Path, chain: &str) -> Result<()> {
    let c = read_configuration(input)?;
    let chain = ChainFlag::parse(c.len(), chain)?;
    let rho = boundary_coords(&c, &chain)?;
    emit(out, f, &rho, || {
        let mut t = Table::new(["j", "rho"]);
        for (j, r) in rho.iter().enumerate() {
            t.push(vec![(j + 1).to_string(), r.to_string()]);
        }
        t
    })
}

fn gaussian_string(z: &GaussianRational) -> String {
    let zero = BigRational::default();
    if z.im == zero {
        z.re.to_string()
    } else if z.re == zero {
        format!("{}i", z.im)
    } else {
        format!("{} + {}i", z.re, z.im)
    }
}

#[derive(Serialize)]
struct ResultantReport {
    k: usize,
    resultant: [String; 2],
    based: bool,
    centred: bool,
    strongly_centred: bool,
}

fn cmd_resultant(out: &mut dyn Write, f: Format, input: &Path) -> Result<()> {
    let m: ExactRationalMap = read_json(input)?;
    let r = m.resultant();
    let report = ResultantReport {
        k: m.k(),
        resultant: [r.re.to_string(), r.im.to_string()],
        based: m.is_based(),
        centred: m.is_centred(),
        strongly_centred: m.is_strongly_centred(),
    };
    debug_assert_eq!(report.centred, report.based && m.psi()[m.k() - 1] == GaussianRational::default() && r.is_unit_modulus());
    match f {
        Format::Table => {
            writeln!(out, "{}", gaussian_string(&r))?;
            writeln!(out, "based: {}", report.based)?;
            writeln!(out, "centred: {}", report.centred)?;
            writeln!(out, "strongly_centred: {}", report.strongly_centred)?;
            Ok(())
        }
        _ => emit(out, f, &report, || {
            let mut t = Table::new(["k", "resultant_re", "resultant_im", "based", "centred", "strongly_centred"]);
            t.push(vec![
                report.k.to_string(),
                report.resultant[0].clone(),
                report.resultant[1].clone(),
                report.based.to_string(),
                report.centred.to_string(),
                report.strongly_centred.to_string(),
            ]);
            t
        }),
    }
}

/// Accepts block notation, a restricted-growth string, or one with `|` separators (`0|0|1`).
fn parse_partition(text: &str) -> Result<SetPartition> {
    let cleaned: String = if text.trim_start().starts_with('{') { text.into() } else { text.replace(['|', ' '], "") };
    Ok(cleaned.parse::<SetPartition>()?)
}

fn cmd_gm(out: &mut dyn Write, f: Format, lambda: &str, nu: &str) -> Result<()> {
    let w = weight_system(&parse_partition(lambda)?, &parse_partition(nu)?)?;
    let blocks = w.lambda().blocks_one_based();
    emit(out, f, &w, || {
        let mut t = Table::new(["block", "target", "weight"]);
        for (b, form) in w.weights().iter().enumerate() {
            for (&c, &x) in form {
                t.push(vec![format!("{:?}", blocks[b]), format!("{:?}", blocks[c]), x.to_string()]);
            }
        }
        t
    })
}

fn cmd_torus_group(out: &mut dyn Write, f: Format, parts: &str) -> Result<()> {
    let a = IntegerPartition::parse(parts)?;
    let g = torus_group_structure(&a)?;
    emit(out, f, &g, || {
        let mut t = Table::new(["type", "torus_rank", "finite_order", "group"]);
        let finite: Vec<String> = g.invariant_factors.iter().map(|d| format!("Z_{d}")).collect();
        let group = std::iter::once(format!("T^{}", g.torus_rank)).chain(finite).collect::<Vec<_>>().join(" x ");
        t.push(vec![a.to_string(), g.torus_rank.to_string(), g.finite_order.to_string(), group]);
        t
    })
}

fn cmd_validate_ibf(out: &mut dyn Write, f: Format, k: usize) -> Result<()> {
    let report = faces::validate_ibf(k)?;
    match f {
        Format::Table => {
            let mut t = Table::new(["label", "type", "base_dim", "fiber_dim"]);
            for h in &report.hypersurfaces {
                t.push(vec![h.label.clone(), h.integer_type.to_string(), h.base_dim.to_string(), h.fiber_dim.to_string()]);
            }
            t.write_table(out)?;
            writeln!(out)?;
            for (lo, hi) in &report.edges {
                writeln!(out, "{lo} < {hi}")?;
            }
            writeln!(out, "violations: {}", report.violations.len())?;
            for v in &report.violations {
                writeln!(out, "  {v:?}")?;
            }
            Ok(())
        }
        _ => emit(out, f, &report, || {
            let mut t = Table::new(["lower", "upper"]);
            for (lo, hi) in &report.edges {
                t.push(vec![lo.clone(), hi.clone()]);
            }
            t
        }),
    }
}

fn cmd_cover_schedule(out: &mut dyn Write, f: Format, k: usize) -> Result<()> {
    let schedule = faces::cover_schedule(k)?;
    if !schedule.verify() {
        return Err(anyhow!("schedule certificate failed for k = {k}"));
    }
    emit(out, f, &schedule, || {
        let mut t = Table::new(["step", "label", "type", "depth"]);
        for (i, e) in schedule.entries.iter().enumerate() {
            t.push(vec![(i + 1).to_string(), e.label.clone(), e.integer_type.to_string(), e.depth.to_string()]);
        }
        t
    })
}
