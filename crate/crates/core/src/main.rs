use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use hqvq::codec::pipeline::encode_vectors;
use hqvq::codec::{
    blockify, decode_image, encode_image_with_workers, load_pgm, psnr, report, save_pgm, stats_of,
    BlockGeometry, ImageGray8, IndexStream,
};
use hqvq::encoder::{choose_delta_hat, classify_region, HybridEncoder};
use hqvq::synth::{clustered_dataset, RegionMix};
use hqvq::train::train_codebook;
use hqvq::{Codebook, EncoderConfig, Error, NeighborhoodTable, Region, Result};

#[derive(Parser)]
#[command(name = "hqvq", version, about = "Hybrid quantum/classical VQ image codec")]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct GlobalOpts {
    /// Master seed for training and measurement streams.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Fixed encoder threshold.
    #[arg(long, global = true, conflicts_with = "delta_hat_percentile")]
    delta_hat: Option<f64>,
    /// Derive the threshold from this percentile of nearest-codevector
    /// distances over the input blocks (default 99).
    #[arg(long, global = true)]
    delta_hat_percentile: Option<f64>,
    #[arg(long, global = true, default_value_t = 2)]
    block_w: usize,
    #[arg(long, global = true, default_value_t = 1)]
    block_h: usize,
    /// Sub2 Grover budget per vector, in units of sqrt(N).
    #[arg(long, global = true, default_value_t = hqvq::encoder::DEFAULT_BUDGET_FACTOR)]
    budget_factor: f64,
    /// Worker threads (defaults to all cores; output does not depend on it).
    #[arg(long, global = true)]
    workers: Option<usize>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Train a codebook from the blocks of one or more PGM images.
    Train {
        #[arg(required = true)]
        images: Vec<PathBuf>,
        #[arg(short = 'n', long)]
        size: usize,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Encode a PGM image into a VQIX index stream and print a report.
    Encode {
        image: PathBuf,
        #[arg(short, long)]
        codebook: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Also write the report to this file.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Decode a VQIX index stream back into a PGM image.
    Decode {
        stream: PathBuf,
        #[arg(short, long)]
        codebook: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Region fractions, neighborhood sizes and adjacency-list cost.
    Stats {
        image: PathBuf,
        #[arg(short, long)]
        codebook: PathBuf,
        /// Write the neighborhood lists to this file.
        #[arg(long)]
        dump_neighborhoods: Option<PathBuf>,
    },
    /// Query counts on synthetic clustered data for a sweep of codebook sizes.
    Bench {
        /// Codebook sizes; each must be a perfect square.
        #[arg(long, value_delimiter = ',', default_values_t = [64usize, 256, 1024])]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 10_000)]
        vectors: usize,
    },
}

impl GlobalOpts {
    fn geometry(&self) -> Result<BlockGeometry> {
        BlockGeometry::new(self.block_w, self.block_h)
    }

    fn delta_hat_for(&self, codebook: &Codebook, img: &ImageGray8) -> Result<f64> {
        match self.delta_hat {
            Some(d) => Ok(d),
            None => choose_delta_hat(
                codebook,
                &blockify(img, self.geometry()?),
                self.delta_hat_percentile.unwrap_or(99.0),
            ),
        }
    }

    fn config(&self, delta_hat: f64) -> EncoderConfig {
        EncoderConfig::new(delta_hat)
            .with_seed(self.seed)
            .with_budget_factor(self.budget_factor)
    }
}

fn emit(text: &str, file: Option<&Path>) -> Result<()> {
    io::stdout().write_all(text.as_bytes())?;
    if let Some(p) = file {
        fs::write(p, text)?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    let g = &cli.global;
    match &cli.cmd {
        Cmd::Train {
            images,
            size,
            output,
        } => {
            let geom = g.geometry()?;
            let mut samples = Vec::new();
            for p in images {
                samples.extend(blockify(&load_pgm(p)?, geom));
            }
            let cb = train_codebook(&samples, *size, g.seed)?;
            cb.save(output)?;
            println!("n={}\nk={}\ndelta0={}", cb.len(), cb.dim(), cb.delta0());
        }
        Cmd::Encode {
            image,
            codebook,
            output,
            report: report_path,
        } => {
            let img = load_pgm(image)?;
            let cb = Codebook::load(codebook)?;
            let delta_hat = g.delta_hat_for(&cb, &img)?;
            let table = NeighborhoodTable::build(&cb, delta_hat)?;
            let cfg = g.config(delta_hat);
            let (stream, stats) =
                encode_image_with_workers(&img, g.geometry()?, &cb, &table, &cfg, g.workers)?;
            stream.save(output)?;
            let decoded = decode_image(&stream, &cb)?;
            let mut text = report(&stats, cb.len());
            let p = psnr(&img, &decoded)?;
            text.push_str(&format!(
                "delta0={}\ndelta_hat={delta_hat}\npsnr_db={}\n",
                cb.delta0(),
                if p.is_infinite() { "inf".to_string() } else { p.to_string() }
            ));
            emit(&text, report_path.as_deref())?;
        }
        Cmd::Decode {
            stream,
            codebook,
            output,
        } => {
            let s = IndexStream::load(stream)?;
            let cb = Codebook::load(codebook)?;
            save_pgm(&decode_image(&s, &cb)?, output)?;
        }
        Cmd::Stats {
            image,
            codebook,
            dump_neighborhoods,
        } => {
            let img = load_pgm(image)?;
            let cb = Codebook::load(codebook)?;
            let delta_hat = g.delta_hat_for(&cb, &img)?;
            let table = NeighborhoodTable::build(&cb, delta_hat)?;
            let vectors = blockify(&img, g.geometry()?);
            let mut counts = [0usize; 3];
            for x in &vectors {
                counts[match classify_region(x, &cb, delta_hat)? {
                    Region::S => 0,
                    Region::TminusS => 1,
                    Region::IminusT => 2,
                }] += 1;
            }
            let total = vectors.len() as f64;
            println!("n={}", cb.len());
            println!("vectors={}", vectors.len());
            println!("delta0={}", cb.delta0());
            println!("delta_hat={delta_hat}");
            println!("frac_s={}", counts[0] as f64 / total);
            println!("frac_t_minus_s={}", counts[1] as f64 / total);
            println!("frac_i_minus_t={}", counts[2] as f64 / total);
            println!("inf_omega={}", table.inf_omega());
            println!("max_omega={}", table.max_omega());
            println!("mean_omega={}", table.mean_omega());
            println!("space_bits={}", table.space_bits());
            if let Some(p) = dump_neighborhoods {
                fs::write(p, table.dump())?;
            }
        }
        Cmd::Bench { sizes, vectors } => {
            println!(
                "n sqrt_n mean_grover_iters ratio_vs_sqrt_n ratio_vs_pure_quantum \
                 mean_classical_evals frac_s frac_t_minus_s frac_i_minus_t path_fallback"
            );
            for &n in sizes {
                let side = (n as f64).sqrt().round() as usize;
                if side * side != n {
                    return Err(Error::InvalidParameter(format!(
                        "bench size {n} is not a perfect square"
                    )));
                }
                let ds = clustered_dataset(side, *vectors, RegionMix::STANDARD, g.seed)?;
                let delta_hat = g.delta_hat.unwrap_or(ds.delta_hat);
                let table = NeighborhoodTable::build(&ds.codebook, delta_hat)?;
                let enc = HybridEncoder::new(&ds.codebook, &table, g.config(delta_hat))?;
                let stats = stats_of(&encode_vectors(&ds.vectors, &enc, g.workers)?);
                let sqrt_n = (n as f64).sqrt();
                println!(
                    "{n} {sqrt_n} {:.4} {:.4} {:.6} {:.4} {:.4} {:.4} {:.4} {}",
                    stats.mean_grover_iters,
                    stats.mean_grover_iters / sqrt_n,
                    stats.mean_grover_iters / (45.0 * sqrt_n),
                    stats.mean_classical_evals,
                    stats.a,
                    stats.b,
                    stats.c,
                    stats.path_fallback,
                );
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
