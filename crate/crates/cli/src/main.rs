use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sha2::{Digest, Sha256};

use psl2growth::chartab::{build_character_table, CharacterTable, TableJson};
use psl2growth::growth::{
    cayley_growth, compare_quotient_vs_fuchsian, family_growth, growth_rate, polygon_series, series_balls,
    series_coeffs, GrowthTable, PolygonVariant, DEFAULT_TERMS,
};
use psl2growth::psl2::PSL2Elem;
use psl2growth::signatures::{
    admissible, consistency_report, find_epimorphism, key_lemma_check, verify_epimorphism, EpimorphismWitness,
    Signature, DEFAULT_SEARCH_BUDGET,
};
use psl2growth::PrimeField;

#[derive(Parser)]
#[command(name = "psl2growth", version, about = "PSL(2, p) character tables, signatures and word growth")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Character table of PSL(2, p), p = 3 mod 4
    Chartab(ChartabArgs),
    #[command(subcommand)]
    Signature(SignatureCommand),
    #[command(subcommand)]
    Epi(EpiCommand),
    #[command(subcommand)]
    Growth(GrowthCommand),
    #[command(subcommand)]
    Family(FamilyCommand),
    #[command(subcommand)]
    Consistency(ConsistencyCommand),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    Cone3,
    Smooth,
}

impl From<Variant> for PolygonVariant {
    fn from(v: Variant) -> Self {
        match v {
            Variant::Cone3 => PolygonVariant::Cone3,
            Variant::Smooth => PolygonVariant::Smooth,
        }
    }
}

#[derive(Args)]
struct ChartabArgs {
    #[arg(long)]
    p: u32,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    cache_dir: Option<PathBuf>,
}

#[derive(Args)]
struct SigArgs {
    #[arg(long)]
    p: u32,
    /// Signature as "h:m1,m2,..." or "h:-"
    #[arg(long)]
    sig: String,
}

#[derive(Subcommand)]
enum SignatureCommand {
    /// Admissibility by the orbit-genus case rules
    Check(SigArgs),
    /// Evaluate the two unified key-lemma inequalities
    Keylemma(SigArgs),
}

#[derive(Subcommand)]
enum EpiCommand {
    /// Seeded search for a surface-kernel epimorphism
    Find {
        #[command(flatten)]
        sig: SigArgs,
        #[arg(long, default_value_t = DEFAULT_SEARCH_BUDGET)]
        budget: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        cache_dir: Option<PathBuf>,
    },
    /// Verify a witness file written by `epi find`
    Verify {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        witness: PathBuf,
    },
}

#[derive(Subcommand)]
enum GrowthCommand {
    /// BFS growth of PSL(2, p) with the standard generators S and T
    Cayley {
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 20)]
        nmax: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Coefficients and growth rate of a polygon group series
    Series {
        #[arg(long)]
        polygon_n: usize,
        #[arg(long, value_enum, default_value = "cone3")]
        variant: Variant,
        #[arg(long, default_value_t = 20)]
        terms: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Quotient growth of PSL(2, p) against the (1;3) polygon series
    Compare {
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 12)]
        nmax: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
}

#[derive(Subcommand)]
enum FamilyCommand {
    /// Family growth of PSL(2, p) over a list of primes
    Sweep {
        /// Comma-separated primes
        #[arg(long, value_delimiter = ',', required = true)]
        p_list: Vec<u32>,
        #[arg(long, default_value_t = 20)]
        nmax: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
}

#[derive(Subcommand)]
enum ConsistencyCommand {
    /// Agreement of the case rules with the key-lemma inequalities
    Report {
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 1000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn cache_path(dir: &Path, command: &str, params: &str) -> PathBuf {
    let digest = Sha256::digest(format!("{command}\n{params}").as_bytes());
    dir.join(format!("{command}-{}.json", hex::encode(&digest[..16])))
}

fn cached<T, F>(dir: Option<&Path>, command: &str, params: &str, compute: F) -> Result<T>
where
    T: Serialize + serde::de::DeserializeOwned,
    F: FnOnce() -> Result<T>,
{
    let Some(dir) = dir else {
        return compute();
    };
    let path = cache_path(dir, command, params);
    if let Ok(text) = fs::read_to_string(&path) {
        if let Ok(v) = serde_json::from_str(&text) {
            return Ok(v);
        }
    }
    let v = compute()?;
    fs::create_dir_all(dir).with_context(|| format!("creating cache dir {}", dir.display()))?;
    fs::write(&path, serde_json::to_string(&v)?).with_context(|| format!("writing {}", path.display()))?;
    Ok(v)
}

fn odd_prime(p: u32) -> Result<()> {
    PrimeField::new(p as u64)?;
    Ok(())
}

fn parse_sig(s: &str) -> Result<Signature> {
    Ok(s.parse::<Signature>()?)
}

fn chartab(args: ChartabArgs) -> Result<String> {
    let p = args.p;
    let tj: TableJson = cached(args.cache_dir.as_deref(), "chartab", &format!("p={p}"), || {
        Ok(build_character_table(p)?.to_json())
    })?;
    let table = CharacterTable::from_json(&tj)?;
    match args.format {
        Format::Json => json(&table.to_json()),
        Format::Csv => Ok(table.to_csv()),
    }
}

fn signature(cmd: SignatureCommand) -> Result<String> {
    match cmd {
        SignatureCommand::Check(a) => {
            let s = parse_sig(&a.sig)?;
            let r = admissible(&s, a.p)?;
            #[derive(Serialize)]
            struct Out {
                p: u32,
                signature: Signature,
                #[serde(flatten)]
                result: psl2growth::signatures::Admissibility,
            }
            json(&Out { p: a.p, signature: s, result: r })
        }
        SignatureCommand::Keylemma(a) => {
            let s = parse_sig(&a.sig)?;
            let r = key_lemma_check(&s, a.p)?;
            #[derive(Serialize)]
            struct Out {
                p: u32,
                signature: Signature,
                verdict: bool,
                #[serde(flatten)]
                result: psl2growth::signatures::KeyLemmaCheck,
            }
            json(&Out { p: a.p, signature: s, verdict: r.verdict(), result: r })
        }
    }
}

fn epi(cmd: EpiCommand) -> Result<(String, bool)> {
    match cmd {
        EpiCommand::Find { sig, budget, seed, cache_dir } => {
            let s = parse_sig(&sig.sig)?;
            let p = sig.p;
            let params = format!("p={p} sig={s} budget={budget} seed={seed}");
            let w: EpimorphismWitness = cached(cache_dir.as_deref(), "epi-find", &params, || {
                Ok(find_epimorphism(&s, p, budget, seed)?)
            })?;
            Ok((json(&w)?, true))
        }
        EpiCommand::Verify { p, witness } => {
            odd_prime(p)?;
            let text = fs::read_to_string(&witness).with_context(|| format!("reading {}", witness.display()))?;
            let w: EpimorphismWitness = serde_json::from_str(&text).context("parsing witness")?;
            let v = verify_epimorphism(&w, p);
            let ok = v.ok;
            Ok((json(&v)?, ok))
        }
    }
}

fn standard_growth(p: u32, nmax: usize) -> Result<GrowthTable> {
    odd_prime(p)?;
    Ok(cayley_growth(&[PSL2Elem::involution(p), PSL2Elem::translation(p)], nmax)?)
}

fn growth(cmd: GrowthCommand) -> Result<String> {
    match cmd {
        GrowthCommand::Cayley { p, nmax, format } => {
            let t = standard_growth(p, nmax)?;
            match format {
                Format::Json => json(&t),
                Format::Csv => Ok(t.to_csv()),
            }
        }
        GrowthCommand::Series { polygon_n, variant, terms, format } => {
            let s = polygon_series(polygon_n, variant.into())?;
            let coeffs = series_coeffs(&s, terms);
            let balls = series_balls(&s, terms);
            match format {
                Format::Csv => {
                    let mut out = String::from("k,sphere,ball\n");
                    for (k, (a, b)) in coeffs.iter().zip(&balls).enumerate() {
                        out.push_str(&format!("{k},{a},{b}\n"));
                    }
                    Ok(out)
                }
                Format::Json => {
                    #[derive(Serialize)]
                    struct Out {
                        polygon_n: usize,
                        variant: PolygonVariant,
                        numerator: Vec<i64>,
                        denominator: Vec<i64>,
                        spheres: Vec<String>,
                        balls: Vec<String>,
                        rate: psl2growth::growth::GrowthRate,
                    }
                    json(&Out {
                        polygon_n,
                        variant: variant.into(),
                        rate: growth_rate(&s, DEFAULT_TERMS.max(terms)),
                        numerator: s.numerator,
                        denominator: s.denominator,
                        spheres: coeffs.iter().map(|c| c.to_string()).collect(),
                        balls: balls.iter().map(|c| c.to_string()).collect(),
                    })
                }
            }
        }
        GrowthCommand::Compare { p, nmax, seed, format } => {
            let r = compare_quotient_vs_fuchsian(p, nmax, seed)?;
            if r.status != "ok" {
                bail!("{}", r.status);
            }
            match format {
                Format::Json => json(&r),
                Format::Csv => {
                    let mut out = String::from("k,gamma_p,gamma_gamma,equal\n");
                    for row in &r.rows {
                        out.push_str(&format!("{},{},{},{}\n", row.k, row.gamma_p, row.gamma_gamma, row.equal));
                    }
                    Ok(out)
                }
            }
        }
    }
}

fn family(cmd: FamilyCommand) -> Result<String> {
    let FamilyCommand::Sweep { p_list, nmax, format } = cmd;
    #[derive(Serialize)]
    struct Member {
        p: u32,
        table: GrowthTable,
    }
    let members = p_list
        .iter()
        .map(|&p| Ok(Member { p, table: standard_growth(p, nmax)? }))
        .collect::<Result<Vec<_>>>()?;
    let tables: Vec<GrowthTable> = members.iter().map(|m| m.table.clone()).collect();
    let fam = family_growth(&tables, nmax)?;
    match format {
        Format::Csv => Ok(fam.to_csv()),
        Format::Json => {
            #[derive(Serialize)]
            struct Out {
                p_list: Vec<u32>,
                nmax: usize,
                members: Vec<Member>,
                family: GrowthTable,
            }
            json(&Out { p_list, nmax, members, family: fam })
        }
    }
}

fn run(cli: Cli) -> Result<(String, bool)> {
    Ok(match cli.command {
        Command::Chartab(a) => (chartab(a)?, true),
        Command::Signature(c) => (signature(c)?, true),
        Command::Epi(c) => epi(c)?,
        Command::Growth(c) => (growth(c)?, true),
        Command::Family(c) => (family(c)?, true),
        Command::Consistency(ConsistencyCommand::Report { p, samples, seed }) => {
            (json(&consistency_report(p, samples, seed)?)?, true)
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((out, ok)) => {
            print!("{out}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
