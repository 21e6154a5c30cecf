use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use bouc_core::co3::geometry::{FixedComplex, PointResidue};
use bouc_core::co3::local::LocalComplex;
use bouc_core::co3::{co3_generators, instantiate, parse_suites, sylow2, Co3Config, Co3Pipeline, SylowModel};
use bouc_core::complex::parse_dump;
use bouc_core::morse::{greedy_collapse, replay_schedule, Schedule};
use bouc_core::oracle::{self, GOLDEN_GROUPS};
use bouc_core::perm::{parse_generators, write_generators, CacheDir, GeneratorFormat};
use bouc_core::radical::{bouc_poset, distinguished_poset, p_subgroups, quillen_poset, small_group, FiniteGroup, DEFAULT_BRUTE_CAP};
use bouc_core::report::Report;

/// Memory the mandatory Co3 stages need, in MiB.
const BASE_MEMORY_MB: u64 = 512;
/// Extra memory for enumerating the non-central involution class.
const CLASS_2B_MEMORY_MB: u64 = 256;

#[derive(Parser)]
#[command(name = "bouc", version, about = "Verification suites for the 2-local geometry of Co3 and small p-subgroup complexes")]
struct Cli {
    /// Worker threads for the parallel scans (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a Co3 suite: calibrate, sylow, prop43, table1, table2, axioms,
    /// delta-fixed, euler or all.
    Co3 {
        suite: String,
        #[command(flatten)]
        opts: Co3Opts,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Checks on tiny groups and complexes with known answers.
    Selftest {
        #[command(flatten)]
        out: OutputOpts,
    },
    /// S4, S5 and GL(3,2): subgroup classes and collection complexes.
    SmallGroups {
        /// Directory of golden files.
        #[arg(long, default_value = "data/golden")]
        golden: PathBuf,
        /// Rewrite the golden files instead of comparing.
        #[arg(long)]
        bless: bool,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Conjugacy classes of p-subgroups of a small group, as JSON.
    RadicalEnum {
        group: String,
        #[arg(long, default_value_t = 2)]
        p: u32,
    },
    /// Write a complex in the plain-text dump format.
    DumpComplex {
        #[command(subcommand)]
        source: DumpSource,
    },
    /// Collapse a dumped complex, by a schedule file or greedily.
    Collapse {
        /// Complex in the dump format.
        complex: PathBuf,
        #[arg(long)]
        schedule: Option<PathBuf>,
    },
    /// Build Co3 generators on 276 points from the Leech lattice.
    GenerateGens {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Cycles)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Rewrite a generator file in the other format.
    ConvertGens {
        input: PathBuf,
        #[arg(long, value_enum)]
        to: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum DumpSource {
    /// A collection complex of a small group.
    Small {
        group: String,
        #[arg(long, value_enum, default_value_t = Collection::Bouc)]
        collection: Collection,
    },
    /// The flag complex of retained radicals inside a Sylow 2-subgroup of Co3.
    Co3Local {
        #[command(flatten)]
        opts: Co3Opts,
    },
    /// The subcomplex of the geometry fixed by a central involution.
    Co3Fixed {
        #[command(flatten)]
        opts: Co3Opts,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Collection {
    Quillen,
    Bouc,
    Distinguished,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Cycles,
    Images,
}

impl From<Format> for GeneratorFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Cycles => GeneratorFormat::Cycles,
            Format::Images => GeneratorFormat::Images,
        }
    }
}

#[derive(Args)]
struct Co3Opts {
    #[arg(long, default_value = "data/co3.gens")]
    gens: PathBuf,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    cache: Option<PathBuf>,
    /// Memory budget in MiB.
    #[arg(long, default_value_t = 2048)]
    max_mem: u64,
    /// Also enumerate the non-central involution class.
    #[arg(long)]
    enumerate_2b: bool,
    /// Random non-central involutions for the sampled product check.
    #[arg(long, default_value_t = 200)]
    samples_2b: usize,
}

#[derive(Args)]
struct OutputOpts {
    /// Write the JSON report here.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Print JSON instead of the text summary.
    #[arg(long)]
    json: bool,
}

/// A failure that maps to exit code 2.
#[derive(Debug)]
struct InputError(anyhow::Error);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:#}", self.0)
    }
}

impl std::error::Error for InputError {}

fn input<T>(r: Result<T>) -> Result<T> {
    r.map_err(|e| InputError(e).into())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(if e.is::<InputError>() { 2 } else { 1 })
        }
    }
}

fn emit(report: &Report, out: &OutputOpts) -> Result<u8> {
    if let Some(path) = &out.report {
        std::fs::write(path, report.to_json()).with_context(|| format!("writing {}", path.display()))?;
    }
    if out.json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.to_text());
    }
    Ok(report.exit_code() as u8)
}

fn co3_config(opts: &Co3Opts) -> Result<Co3Config> {
    let need = BASE_MEMORY_MB + if opts.enumerate_2b { CLASS_2B_MEMORY_MB } else { 0 };
    if opts.max_mem < need {
        return input(Err(anyhow::anyhow!("memory budget {} MiB is below the {need} MiB these stages need", opts.max_mem)));
    }
    Ok(Co3Config { seed: opts.seed, cache: opts.cache.as_ref().map(CacheDir::new), enumerate_2b: opts.enumerate_2b })
}

fn load_gens(path: &Path) -> Result<Vec<bouc_core::perm::Permutation>> {
    let text = input(std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display())))?;
    input(parse_generators(&text).with_context(|| format!("parsing {}", path.display())))
}

fn pipeline(opts: &Co3Opts) -> Result<Co3Pipeline> {
    let config = co3_config(opts)?;
    let gens = load_gens(&opts.gens)?;
    let mut p = input(Co3Pipeline::new(gens, &config).context("calibrating the generators"))?;
    p.two_b_samples = opts.samples_2b;
    Ok(p)
}

fn run(command: Command) -> Result<u8> {
    match command {
        Command::Co3 { suite, opts, out } => {
            let suites = input(parse_suites(&suite).map_err(anyhow::Error::msg))?;
            let mut p = pipeline(&opts)?;
            let report = p.run(&suites)?;
            emit(&report, &out)
        }
        Command::Selftest { out } => {
            let mut report = Report::new(0);
            report.metadata.suites = vec!["selftest".into()];
            report.extend(oracle::selftest());
            emit(&report, &out)
        }
        Command::SmallGroups { golden, bless, out } => {
            if bless {
                std::fs::create_dir_all(&golden)?;
                for name in GOLDEN_GROUPS {
                    let summary = oracle::small_group_summary(name)?;
                    let path = golden.join(format!("{name}.json"));
                    std::fs::write(&path, serde_json::to_string_pretty(&summary)? + "\n")?;
                    eprintln!("wrote {}", path.display());
                }
            }
            let mut report = Report::new(0);
            report.metadata.suites = vec!["small-groups".into()];
            report.extend(oracle::small_groups(Some(&golden)));
            emit(&report, &out)
        }
        Command::RadicalEnum { group, p } => {
            let handle = input(small_group(&group).map_err(anyhow::Error::from))?;
            let g = FiniteGroup::from_handle(&group, &handle, DEFAULT_BRUTE_CAP)?;
            let en = p_subgroups(&g, p)?;
            println!("{}", serde_json::to_string_pretty(&en.table(&g))?);
            Ok(0)
        }
        Command::DumpComplex { source } => {
            let text = match source {
                DumpSource::Small { group, collection } => {
                    let handle = input(small_group(&group).map_err(anyhow::Error::from))?;
                    let g = FiniteGroup::from_handle(&group, &handle, DEFAULT_BRUTE_CAP)?;
                    let en = p_subgroups(&g, 2)?;
                    let poset = match collection {
                        Collection::Quillen => quillen_poset(&en),
                        Collection::Bouc => bouc_poset(&en),
                        Collection::Distinguished => distinguished_poset(&en),
                    };
                    poset.order_complex(&en).dump()
                }
                DumpSource::Co3Local { opts } => {
                    let p = pipeline(&opts)?;
                    let model = SylowModel::build(&p.ctx, sylow2(&p.ctx)?)?;
                    let inst = instantiate(&model)?;
                    LocalComplex::build(&model, &inst).complex.dump()
                }
                DumpSource::Co3Fixed { opts } => {
                    let p = pipeline(&opts)?;
                    let residue = PointResidue::build(&p.ctx)?;
                    FixedComplex::build(&p.ctx, &residue)?.complex.dump()
                }
            };
            print!("{text}");
            Ok(0)
        }
        Command::Collapse { complex, schedule } => {
            let text = input(std::fs::read_to_string(&complex).with_context(|| format!("reading {}", complex.display())))?;
            let mut c = input(parse_dump(&text).map_err(anyhow::Error::from))?;
            let cert = match schedule {
                Some(path) => {
                    let text = input(std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display())))?;
                    let s = input(Schedule::parse(&text).map_err(anyhow::Error::from))?;
                    replay_schedule(&mut c, &s)?
                }
                None => greedy_collapse(&mut c),
            };
            print!("{}", cert.to_text());
            Ok(if cert.reaches_point() { 0 } else { 1 })
        }
        Command::GenerateGens { seed, format, output } => {
            let gens = co3_generators(seed)?;
            write_out(output.as_deref(), &write_generators(&gens, format.into()))
        }
        Command::ConvertGens { input: path, to, output } => {
            let gens = load_gens(&path)?;
            write_out(output.as_deref(), &write_generators(&gens, to.into()))
        }
    }
}

fn write_out(path: Option<&Path>, text: &str) -> Result<u8> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{text}"),
    }
    Ok(0)
}
