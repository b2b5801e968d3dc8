//! The `edist` command line.

use std::fs::{self, OpenOptions};
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bench::{self, BenchConfig, BetaSpec};
use crate::error::{Error, Result};
use crate::estimation::{approximate_ed, dtep, Constants};
use crate::etree::{exact_e_distance, pad_pair, TreeParams};
use crate::exact::{ed, edd, lcs};
use crate::hard::{digest, HardFamily, HardInstanceParams, Which};
use crate::sampling::{build_sample_tree, SampleTree};
use crate::similarity::{self, ExplicitDist};
use crate::text::{Codec, Text};
use crate::workload::Family;

/// Inputs above this length trigger a warning for the quadratic oracles.
pub const LARGE_INPUT: usize = 100_000;

#[derive(Debug, Parser)]
#[command(name = "edist", version, about = "Tree-decomposition edit distance: exact oracles, sampled estimation, hard instances")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact ed, indel distance or LCS of two files.
    Exact {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, value_enum, default_value_t = Metric::Ed)]
        metric: Metric,
    },
    /// Exact E-distance of two files (padded to a power of b).
    Edist {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, short)]
        b: usize,
    },
    /// Builds a sample tree and prints it in the line format.
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long, short)]
        b: usize,
        #[arg(long, default_value_t = 2.0)]
        beta: f64,
        #[command(flatten)]
        tuning: Tuning,
        /// Write here instead of stdout.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Approximates ed by scanning β, or runs one decider with `--beta`.
    Approx {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, short)]
        b: usize,
        #[arg(long)]
        beta: Option<f64>,
        /// Estimate over a saved tree (from `sample`) instead of a fresh one.
        #[arg(long, requires = "beta")]
        tree: Option<PathBuf>,
        #[command(flatten)]
        tuning: Tuning,
    },
    /// Decides ed > n/β versus small.
    Dtep {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, short)]
        b: usize,
        #[arg(long)]
        beta: f64,
        #[command(flatten)]
        tuning: Tuning,
    },
    /// Writes a pair of hard instances plus a manifest.
    GenHard {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value = "same")]
        which: Which,
        #[arg(long, default_value_t = 8)]
        sigma: u32,
        #[arg(long = "block-len", default_value_t = 64)]
        block_len: usize,
        #[arg(long, default_value_t = 4)]
        shift: usize,
        #[arg(long, default_value_t = 2)]
        levels: u32,
        #[arg(long, default_value_t = 8)]
        bits: usize,
        /// Emit the Σ-level strings instead of their binary images.
        #[arg(long)]
        sigma_level: bool,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Similarity of distributions given as `probability string` lines.
    Similarity {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Also run the optimal q-query distinguisher (exactly two files).
        #[arg(long)]
        distinguish: Option<usize>,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Runs the benchmark grid and appends a report.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct Pair {
    pub x: PathBuf,
    pub y: PathBuf,
    #[arg(long, default_value = "raw")]
    pub codec: Codec,
}

#[derive(Debug, Args)]
pub struct Tuning {
    #[arg(long)]
    pub seed: u64,
    /// Constant preset: desk, lean or unit.
    #[arg(long, default_value = "desk")]
    pub preset: Constants,
    /// Overrides the preset's c_p.
    #[arg(long)]
    pub c_p: Option<f64>,
    /// Root precision 4β instead of β.
    #[arg(long)]
    pub root_boost: bool,
}

impl Tuning {
    fn constants(&self) -> Constants {
        let mut c = self.preset;
        if let Some(v) = self.c_p {
            c.c_p = v;
        }
        c.root_boost |= self.root_boost;
        c
    }
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    pub sizes: Vec<usize>,
    #[arg(long = "b", value_delimiter = ',', required = true)]
    pub bs: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "scan")]
    pub beta: Vec<BetaSpec>,
    #[arg(long, default_value_t = 5)]
    pub trials: usize,
    #[arg(long, default_value = "random-edits")]
    pub family: Family,
    #[arg(long, default_value_t = 4)]
    pub sigma: u32,
    #[arg(long, default_value_t = 0.0625)]
    pub edit_rate: f64,
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    pub tuning: Tuning,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Metric {
    Ed,
    Edd,
    Lcs,
}

fn read_text(path: &Path, codec: Codec) -> Result<Text> {
    codec.decode(&fs::read(path)?)
}

fn read_pair(p: &Pair) -> Result<(Text, Text)> {
    Ok((read_text(&p.x, p.codec)?, read_text(&p.y, p.codec)?))
}

fn warn_large(err: &mut impl Write, x: &Text, y: &Text) -> Result<()> {
    let n = x.len().max(y.len());
    if n > LARGE_INPUT {
        writeln!(err, "warning: n = {n} > {LARGE_INPUT}; the exact oracle is quadratic")?;
    }
    Ok(())
}

/// Runs one parsed command, writing results to `out` and warnings to `err`.
pub fn execute(cli: Cli, out: &mut impl Write, err: &mut impl Write) -> Result<()> {
    match cli.command {
        Command::Exact { pair, metric } => {
            let (x, y) = read_pair(&pair)?;
            warn_large(err, &x, &y)?;
            let start = Instant::now();
            let (name, v) = match metric {
                Metric::Ed => ("ed", ed(&x, &y)),
                Metric::Edd => ("edd", edd(&x, &y)),
                Metric::Lcs => ("lcs", lcs(&x, &y)),
            };
            writeln!(out, "{name}={v}\nmillis={:.3}", start.elapsed().as_secs_f64() * 1e3)?;
        }
        Command::Edist { pair, b } => {
            let (x, y) = read_pair(&pair)?;
            warn_large(err, &x, &y)?;
            let (xp, yp, params) = pad_pair(&x, &y, b)?;
            let start = Instant::now();
            let e = exact_e_distance(&xp, &yp, &params)?;
            writeln!(
                out,
                "edist={e}\nn={}\nb={b}\nh={}\nmillis={:.3}",
                params.n,
                params.h,
                start.elapsed().as_secs_f64() * 1e3
            )?;
        }
        Command::Sample { n, b, beta, tuning, output } => {
            let params = tuning.constants().apply(TreeParams::new(n, b)?).with_beta(beta).with_seed(tuning.seed);
            let tree = build_sample_tree(&params)?;
            match output {
                Some(p) => fs::write(p, tree.to_text())?,
                None => out.write_all(tree.to_text().as_bytes())?,
            }
            writeln!(err, "nodes={} queries={}", tree.node_count(), tree.query_count())?;
        }
        Command::Approx { pair, b, beta, tree, tuning } => {
            let (x, y) = read_pair(&pair)?;
            let consts = tuning.constants();
            match (beta, tree) {
                (Some(beta), Some(path)) => {
                    let tree = SampleTree::from_text(BufReader::new(fs::File::open(path)?))?;
                    let (xp, yp, _) = pad_pair(&x, &y, b)?;
                    if tree.params.beta != beta {
                        return Err(Error::TreeMismatch(format!("tree has β = {}, asked {beta}", tree.params.beta)));
                    }
                    let mut r = crate::estimation::estimate_e_distance(&xp, &yp, &tree, &tree.params)?;
                    r.decision = Some(crate::estimation::decide(r.estimate, r.n, r.beta));
                    out.write_all(r.to_record().as_bytes())?;
                }
                (Some(beta), None) => {
                    out.write_all(dtep(&x, &y, b, beta, tuning.seed, &consts)?.to_record().as_bytes())?;
                }
                (None, _) => {
                    let a = approximate_ed(&x, &y, b, tuning.seed, &consts)?;
                    writeln!(
                        out,
                        "estimate={}\nqueries={}\nsteps={}\nb={b}\nn={}\nseed={}\nmillis={:.3}",
                        a.estimate,
                        a.queries,
                        a.steps.len(),
                        a.n,
                        tuning.seed,
                        a.elapsed.as_secs_f64() * 1e3
                    )?;
                }
            }
        }
        Command::Dtep { pair, b, beta, tuning } => {
            let (x, y) = read_pair(&pair)?;
            out.write_all(dtep(&x, &y, b, beta, tuning.seed, &tuning.constants())?.to_record().as_bytes())?;
        }
        Command::GenHard { seed, which, sigma, block_len, shift, levels, bits, sigma_level, out_dir } => {
            let params = HardInstanceParams { sigma, block_len, shift_mag: shift, levels, bin_len: bits, seed };
            let family = HardFamily::new(&params)?;
            let (sigma_pair, binary) = family.pair(which)?;
            let (x, y) = if sigma_level { sigma_pair } else { binary };
            let codec = if x.alphabet_size() <= 256 { Codec::Raw } else { Codec::Hex16 };
            fs::create_dir_all(&out_dir)?;
            fs::write(out_dir.join("x.bin"), codec.encode(&x)?)?;
            fs::write(out_dir.join("y.bin"), codec.encode(&y)?)?;
            let mut m = format!(
                "#gen-hard v1\nseed={seed}\nwhich={which}\nsigma={sigma}\nblock_len={block_len}\nshift={shift}\n\
                 levels={levels}\nbits={bits}\nlevel={}\nlength={}\ncodec={}\nsame_family_bound={}\n",
                if sigma_level { "sigma" } else { "binary" },
                x.len(),
                if codec == Codec::Raw { "raw" } else { "hex16" },
                params.same_family_bound()
            );
            for (a, base) in family.bases.iter().enumerate() {
                m.push_str(&format!("base{a}={:016x}\n", digest(base)));
            }
            for (a, word) in family.code.images().iter().enumerate() {
                let bits: String = word.iter().map(|&b| char::from(b'0' + b as u8)).collect();
                m.push_str(&format!("code{a}={bits}\n"));
            }
            fs::write(out_dir.join("manifest.txt"), &m)?;
            writeln!(out, "wrote {} and {} ({} symbols each)", out_dir.join("x.bin").display(), out_dir.join("y.bin").display(), x.len())?;
        }
        Command::Similarity { files, distinguish, trials, seed } => {
            let dists = files
                .iter()
                .map(|p| ExplicitDist::parse(&fs::read_to_string(p)?))
                .collect::<Result<Vec<_>>>()?;
            let n = dists[0].n();
            let full: Vec<usize> = (1..=n).collect();
            let pmfs = dists.iter().map(|d| similarity::projected_pmf(d, &full)).collect::<Result<Vec<_>>>()?;
            writeln!(out, "alpha={}", similarity::similarity_alpha(&pmfs)?)?;
            if n <= similarity::MAX_UNIFORM_N {
                writeln!(out, "uniform_alpha={}", similarity::uniform_similarity(&dists)?)?;
            } else {
                writeln!(err, "n = {n} > {}: uniform similarity skipped", similarity::MAX_UNIFORM_N)?;
            }
            if let Some(q) = distinguish {
                if dists.len() != 2 {
                    return Err(Error::param("--distinguish needs exactly two distributions"));
                }
                let seed = seed.ok_or_else(|| Error::param("--distinguish needs --seed"))?;
                let d = similarity::distinguisher_experiment(&dists[0], &dists[1], q, trials, seed)?;
                writeln!(
                    out,
                    "q={q}\np0={}\np1={}\np0_hat={}\np1_hat={}\nmu={}\nbound={}\nwithin_bound={}",
                    d.p0,
                    d.p1,
                    d.p0_hat,
                    d.p1_hat,
                    d.mu,
                    d.bound,
                    d.respects_bound(3.0)
                )?;
            }
        }
        Command::Bench(a) => {
            let cfg = BenchConfig {
                sizes: a.sizes,
                bs: a.bs,
                betas: a.beta,
                trials: a.trials,
                seed: a.tuning.seed,
                family: a.family,
                sigma: a.sigma,
                edit_rate: a.edit_rate,
                constants: a.tuning.constants(),
                workers: a.workers,
            };
            let records = bench::run(&cfg)?;
            match &a.output {
                Some(path) => bench::write_report(&mut OpenOptions::new().create(true).append(true).open(path)?, &records)?,
                None => bench::write_report(out, &records)?,
            }
        }
    }
    Ok(())
}

/// Entry point for the binary: parses `std::env::args` and returns the exit code.
pub fn main() -> i32 {
    let cli = Cli::parse();
    let (mut out, mut err) = (io::stdout().lock(), io::stderr().lock());
    match execute(cli, &mut out, &mut err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "edist: {e}");
            1
        }
    }
}
