//! regencode — shard files across storage nodes with exact-repair codes,
//! rebuild lost shares, reconstruct files, run failure simulations, and
//! print the rate comparison tables.
//!
//! Exit codes: 0 success, 2 parameter error, 3 io error, 4 protocol error
//! (singular systems, corrupt shares, digest mismatches).

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand};
use regencode::storage::manifest::CodeKind;
use regencode::storage::ops::{cmd_encode, cmd_reconstruct, cmd_repair};
use regencode::storage::simulate::{parse_script, random_script, Simulator};
use regencode::storage::{codec::StripeCodec, tables, StorageError};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "regencode", version, about = "Exact-repair regenerating-code storage toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct CodeArgs {
    /// Code family: nmbr | nmbr-sys | nmsr | nmsr-punct
    #[arg(long)]
    code: String,
    /// Number of storage nodes
    #[arg(long)]
    n: u64,
    /// Reconstruction degree
    #[arg(long)]
    k: u64,
    /// Repair degree (required for nmbr; derived for nmsr families)
    #[arg(long)]
    d: Option<u64>,
    /// Prime base field size
    #[arg(long, default_value_t = 2)]
    q: u64,
    /// Block parameter (for nmsr-punct: the parent's b)
    #[arg(long)]
    b: u64,
}

impl CodeArgs {
    fn kind(&self) -> Result<CodeKind, StorageError> {
        CodeKind::parse(&self.code)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Shard INPUT into a manifest plus n share files
    Encode {
        #[command(flatten)]
        code: CodeArgs,
        /// File to encode
        input: PathBuf,
        /// Output directory for manifest.json and share files
        #[arg(long)]
        out: PathBuf,
    },
    /// Rebuild one lost share from d helper shares
    Repair {
        #[arg(long)]
        manifest: PathBuf,
        /// Directory holding the helper share files
        #[arg(long)]
        shares: PathBuf,
        /// The failed node to rebuild
        #[arg(long)]
        node: u32,
        /// Helper node ids, comma separated
        #[arg(long, value_delimiter = ',')]
        helpers: Vec<u32>,
        /// Where to write the rebuilt share (defaults to --shares)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rebuild the original file from k shares
    Reconstruct {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long)]
        shares: PathBuf,
        /// Source node ids, comma separated
        #[arg(long, value_delimiter = ',')]
        nodes: Vec<u32>,
        /// Output file path
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a failure/repair/reconstruction script against an in-memory cluster
    Simulate {
        #[command(flatten)]
        code: CodeArgs,
        /// Stripes of random data to store
        #[arg(long, default_value_t = 2)]
        stripes: usize,
        /// Script file (fail J | repair J from A,B | reconstruct from A,B)
        #[arg(long)]
        script: Option<PathBuf>,
        /// Random feasible events to generate when no script is given
        #[arg(long, default_value_t = 10)]
        events: usize,
        /// Seed for the stored data and the random script
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print a rate/size comparison table
    Tables {
        /// table1 | table2 | table3 | table4 (table1/table3 need custom params)
        #[arg(long)]
        preset: String,
        /// Emit CSV instead of aligned text
        #[arg(long)]
        csv: bool,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        k: Option<u64>,
        #[arg(long)]
        d: Option<u64>,
        #[arg(long)]
        b: Option<u64>,
        #[arg(long, default_value_t = 2)]
        q: u64,
    },
    /// Validate parameters and print the derived code figures
    ParamsCheck {
        #[command(flatten)]
        code: CodeArgs,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(se) = cause.downcast_ref::<StorageError>() {
            return se.exit_code();
        }
        if cause.downcast_ref::<regencode::share::ParamError>().is_some() {
            return 2;
        }
        if cause.downcast_ref::<regencode::share::CodecError>().is_some() {
            return 4;
        }
        if cause.downcast_ref::<std::io::Error>().is_some() {
            return 3;
        }
    }
    1
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Encode { code, input, out } => {
            let report = cmd_encode(
                &input,
                code.kind()?,
                code.n,
                code.k,
                code.d,
                code.q,
                code.b,
                &out,
            )?;
            println!(
                "encoded {} -> {} ({} stripes of {} symbols, {} pad symbols)",
                input.display(),
                report.manifest_path.display(),
                report.stripe_count,
                report.manifest.stripe_symbols,
                report.pad_symbols
            );
            println!(
                "{} shares of {} symbols each, content digest {}",
                report.share_paths.len(),
                report.symbols_per_share,
                report.manifest.content_digest
            );
            Ok(())
        }
        Command::Repair { manifest, shares, node, helpers, out } => {
            let out_dir = out.unwrap_or_else(|| shares.clone());
            let report = cmd_repair(&manifest, node, &helpers, &shares, &out_dir)?;
            println!(
                "repaired node {} from helpers {:?}: {} symbols over {} stripes -> {}",
                report.node,
                report.helpers,
                report.symbols_transferred,
                report.stripe_count,
                report.share_path.display()
            );
            Ok(())
        }
        Command::Reconstruct { manifest, shares, nodes, out } => {
            let report = cmd_reconstruct(&manifest, &nodes, &shares, &out)?;
            println!(
                "reconstructed from nodes {:?}: {} symbols downloaded -> {} (digest verified)",
                report.nodes,
                report.symbols_transferred,
                report.out_path.display()
            );
            Ok(())
        }
        Command::Simulate { code, stripes, script, events, seed } => {
            let codec = StripeCodec::from_spec(code.kind()?, code.n, code.k, code.d, code.q, code.b)?;
            let script = match script {
                Some(path) => {
                    let text = std::fs::read_to_string(&path)
                        .with_context(|| format!("reading script {}", path.display()))?;
                    parse_script(&text)?
                }
                None => random_script(codec.n(), codec.k(), codec.d(), events, seed),
            };
            let report = Simulator::new(codec, stripes, seed)?.run(&script)?;
            print!("{}", report.render());
            Ok(())
        }
        Command::Tables { preset, csv, n, k, d, b, q } => {
            let none3 = [(None, None); 3];
            let rows = match preset.as_str() {
                "table2" => tables::table2()?,
                "table4" => tables::table4()?,
                "table1" => {
                    let (n, k, d, b) = custom_params(n, k, d, b, true)?;
                    tables::mbr_rows(n, k, d, b, q, none3)?
                }
                "table3" => {
                    let (n, k, _, b) = custom_params(n, k, d, b, false)?;
                    tables::msr_rows(n, k, b, q, none3)?
                }
                other => {
                    return Err(anyhow!(StorageError::BadArgument(format!(
                        "unknown preset {other:?} (expected table1|table2|table3|table4)"
                    ))))
                }
            };
            if csv {
                print!("{}", tables::render_csv(&rows));
            } else {
                print!("{}", tables::render_text(&rows));
            }
            Ok(())
        }
        Command::ParamsCheck { code } => params_check(&code),
    }
}

fn custom_params(
    n: Option<u64>,
    k: Option<u64>,
    d: Option<u64>,
    b: Option<u64>,
    need_d: bool,
) -> Result<(u64, u64, u64, u64)> {
    let missing = |what: &str| {
        anyhow!(StorageError::BadArgument(format!(
            "--{what} is required for a custom comparison row"
        )))
    };
    let n = n.ok_or_else(|| missing("n"))?;
    let k = k.ok_or_else(|| missing("k"))?;
    let b = b.ok_or_else(|| missing("b"))?;
    let d = if need_d { d.ok_or_else(|| missing("d"))? } else { d.unwrap_or(0) };
    Ok((n, k, d, b))
}

fn params_check(code: &CodeArgs) -> Result<()> {
    let codec = StripeCodec::from_spec(code.kind()?, code.n, code.k, code.d, code.q, code.b)?;
    println!(
        "{} parameters ok: n={} k={} d={} q={} b={}",
        codec.kind(),
        codec.n(),
        codec.k(),
        codec.d(),
        codec.q(),
        codec.b()
    );
    println!(
        "per stripe: B={} symbols, alpha={} per node, beta={} per helper packet",
        codec.stripe_symbols(),
        codec.alpha(),
        codec.beta()
    );
    println!("primitive polynomial (ascending): {:?}", codec.poly());
    println!("node exponents: {:?}", codec.exponents());
    match &codec {
        StripeCodec::Nmbr(c) => {
            let m = c.params().metrics();
            println!(
                "rate B/(alpha*n) = {} ≈ {:.6}; cut-set C = {}, B/C = {} ≈ {:.6}",
                m.rate,
                ratio_f64(&m.rate),
                m.cutset,
                m.b_over_c,
                ratio_f64(&m.b_over_c)
            );
        }
        StripeCodec::Nmsr(c) => {
            let m = c.params().metrics();
            println!(
                "g = {}, coset modulus = {:?}; rate = {} ≈ {:.6}; B/(alpha*k) = {} ≈ {:.6}",
                c.params().g,
                c.params().modulus,
                m.rate,
                ratio_f64(&m.rate),
                m.b_over_alpha_k,
                ratio_f64(&m.b_over_alpha_k)
            );
        }
        StripeCodec::Punctured(c) => {
            let m = c.metrics();
            println!(
                "punctured parent node {}; rate = {} ≈ {:.6}; B/(alpha*k) = {} ≈ {:.6}",
                c.punctured_node(),
                m.rate,
                ratio_f64(&m.rate),
                m.b_over_alpha_k,
                ratio_f64(&m.b_over_alpha_k)
            );
        }
    }
    Ok(())
}

fn ratio_f64(r: &num_rational::Ratio<i128>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}
