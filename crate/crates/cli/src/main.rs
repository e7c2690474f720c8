use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use deloop_cli::format::{parse_module, AlgebraFile, AlgebraSource, FormatError};
use deloop_cli::report::{algebra_info, InvariantsReport};
use deloop_cli::scan::{scan, ScanConfig};
use deloop_cli::suite::{self, SuiteConfig};
use deloop_core::algebra::Algebra;
use deloop_core::constructions::{example_family, lambda_of, tensor_algebra, tilde_algebra, tilde_quiver, trivial_extension};
use deloop_core::linalg::Fp;
use deloop_core::modrep::Module;

#[derive(Parser)]
#[command(name = "deloop", version, about = "Homological invariants of finite-dimensional algebras over F_p")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dimension, Cartan matrix and Loewy data of an algebra file.
    Info { path: PathBuf },
    /// Certified bounds for pd, id, grade, dell, k-dell and ddell.
    Invariants {
        path: PathBuf,
        /// simple:v, proj:v, inj:v, file:PATH or all-simples
        #[arg(long, default_value = "all-simples")]
        module: String,
        #[arg(long, default_value_t = 32, value_parser = clap::value_parser!(u64).range(1..))]
        cutoff: u64,
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u64).range(1..))]
        k: u64,
        #[arg(long, env = "DELOOP_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Writes a constructed algebra file.
    Construct {
        kind: Kind,
        inputs: Vec<PathBuf>,
        /// size parameter of example26
        #[arg(long)]
        n: Option<usize>,
        /// field characteristic for example26
        #[arg(long = "char", default_value_t = 101)]
        characteristic: u32,
        #[arg(short = 'o', long = "out")]
        out: Option<PathBuf>,
    },
    /// Runs the verification suite; exit status 1 if any check fails.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::Paper)]
        suite: Suite,
        #[arg(long, env = "DELOOP_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long = "char", default_value_t = 101)]
        characteristic: u32,
    },
    /// Streams JSON records for random monomial algebras.
    Scan {
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..))]
        max_vertices: u64,
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u64).range(1..))]
        max_arrows: u64,
        #[arg(long, env = "DELOOP_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 32, value_parser = clap::value_parser!(u64).range(1..))]
        cutoff: u64,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..))]
        k: u64,
        #[arg(long = "char", default_value_t = 101)]
        characteristic: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Tilde,
    Lambda,
    Trivext,
    Tensor,
    Opposite,
    Example26,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Paper,
}

/// A failure with its exit status: 1 for failed verification, 2 otherwise.
struct Failure {
    code: u8,
    msg: String,
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure { code: 2, msg: msg.into() }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<AlgebraFile, Failure> {
    let text = read(path)?;
    AlgebraFile::parse(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_algebra(path: &Path) -> Result<(AlgebraFile, Algebra), Failure> {
    let file = load(path)?;
    let alg = file.algebra().map_err(|e: FormatError| usage(format!("{}: {e}", path.display())))?;
    Ok((file, alg))
}

fn field(p: u32) -> Result<Fp, Failure> {
    Fp::new(p).map_err(|e| usage(format!("--char {p}: {e}")))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| usage(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn info(path: &Path) -> Result<(), Failure> {
    let (_, alg) = load_algebra(path)?;
    let i = algebra_info(&alg);
    let mut out = String::new();
    out.push_str(&format!("field F_{}\ndim {}\nvertices {}\n", i.characteristic, i.dim, i.vertices.join(" ")));
    out.push_str("cartan (row v: dim e_v A e_w)\n");
    for row in &i.cartan {
        out.push_str(&format!("  {row:?}\n"));
    }
    let n = alg.num_vertices();
    for v in 0..n {
        let p = Module::proj(&alg, v).expect("vertex in range");
        let q = Module::inj(&alg, v).expect("vertex in range");
        out.push_str(&format!(
            "vertex {}: P dims {:?} loewy {:?}; I dims {:?} loewy {:?}\n",
            alg.vertex_name(v),
            p.dims(),
            p.loewy_layers(),
            q.dims(),
            q.loewy_layers()
        ));
    }
    out.push_str(&format!("fingerprint {}\n", i.fingerprint));
    print!("{out}");
    Ok(())
}

fn vertex(alg: &Algebra, name: &str) -> Result<usize, Failure> {
    alg.vertex_index(name).ok_or_else(|| usage(format!("unknown vertex {name:?}")))
}

fn modules(alg: &Algebra, spec: &str) -> Result<Vec<(String, Module)>, Failure> {
    if spec == "all-simples" {
        return Ok((0..alg.num_vertices())
            .map(|v| (format!("simple:{}", alg.vertex_name(v)), Module::simple(alg, v).unwrap()))
            .collect());
    }
    let (kind, arg) = spec.split_once(':').ok_or_else(|| usage(format!("bad module spec {spec:?}")))?;
    let m = match kind {
        "simple" => Module::simple(alg, vertex(alg, arg)?).unwrap(),
        "proj" => Module::proj(alg, vertex(alg, arg)?).unwrap(),
        "inj" => Module::inj(alg, vertex(alg, arg)?).unwrap(),
        "file" => {
            let text = read(Path::new(arg))?;
            parse_module(&text, alg).map_err(|e| usage(format!("{arg}: {e}")))?
        }
        _ => return Err(usage(format!("bad module spec {spec:?}"))),
    };
    Ok(vec![(spec.to_string(), m)])
}

fn invariants(path: &Path, spec: &str, cutoff: usize, k: usize, seed: u64, json: bool) -> Result<(), Failure> {
    let (_, alg) = load_algebra(path)?;
    let mods = modules(&alg, spec)?;
    let report = InvariantsReport::new(&alg, &mods, cutoff, k, seed);
    if json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.to_text());
    }
    Ok(())
}

fn construct(kind: Kind, inputs: &[PathBuf], n: Option<usize>, p: u32, out: Option<&Path>) -> Result<(), Failure> {
    let arity = match kind {
        Kind::Example26 => 0,
        Kind::Tensor => 2,
        _ => 1,
    };
    if inputs.len() != arity {
        return Err(usage(format!("expected {arity} input file(s), got {}", inputs.len())));
    }
    let invalid = |e: &dyn std::fmt::Display| usage(format!("invalid input: {e}"));
    let file = match kind {
        Kind::Example26 => {
            let n = n.ok_or_else(|| usage("example26 needs --n"))?;
            if n == 0 {
                return Err(usage("--n must be positive"));
            }
            AlgebraFile::from_quiver(field(p)?, example_family(n))
        }
        Kind::Tilde => {
            let (file, alg) = load_algebra(&inputs[0])?;
            match file.source {
                AlgebraSource::Quiver(q) => AlgebraFile::from_quiver(file.field, tilde_quiver(&q)),
                AlgebraSource::Table(_) => {
                    AlgebraFile::from_algebra(&tilde_algebra(&alg).map_err(|e| invalid(&e))?.algebra)
                }
            }
        }
        Kind::Opposite => {
            let (file, alg) = load_algebra(&inputs[0])?;
            match file.source {
                AlgebraSource::Quiver(q) => AlgebraFile::from_quiver(file.field, q.opposite()),
                AlgebraSource::Table(_) => AlgebraFile::from_algebra(&alg.opposite()),
            }
        }
        Kind::Lambda => {
            let (_, alg) = load_algebra(&inputs[0])?;
            AlgebraFile::from_algebra(&lambda_of(&alg).map_err(|e| invalid(&e))?.tri.algebra)
        }
        Kind::Trivext => {
            let (_, alg) = load_algebra(&inputs[0])?;
            AlgebraFile::from_algebra(&trivial_extension(&alg).map_err(|e| invalid(&e))?)
        }
        Kind::Tensor => {
            let (_, a1) = load_algebra(&inputs[0])?;
            let (_, a2) = load_algebra(&inputs[1])?;
            AlgebraFile::from_algebra(&tensor_algebra(&a1, &a2).map_err(|e| invalid(&e))?.algebra)
        }
    };
    emit(out, &file.to_text())
}

fn verify(seed: u64, p: u32) -> Result<(), Failure> {
    let cfg = SuiteConfig::new(field(p)?, seed);
    let checks = suite::run(&cfg);
    for c in &checks {
        println!("{}", c.line());
    }
    let failed = checks.iter().filter(|c| !c.pass).count();
    println!("{} of {} checks passed", checks.len() - failed, checks.len());
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure { code: 1, msg: format!("{failed} check(s) failed") })
    }
}

fn run_scan(cfg: &ScanConfig, p: u32, out: Option<&Path>) -> Result<(), Failure> {
    let f = field(p)?;
    let sink: Box<dyn Write> = match out {
        Some(path) => Box::new(fs::File::create(path).map_err(|e| usage(format!("{}: {e}", path.display())))?),
        None => Box::new(io::stdout().lock()),
    };
    let mut w = BufWriter::new(sink);
    let mut err = None;
    scan(cfg, f, |rec| {
        if err.is_none() {
            let line = serde_json::to_string(&rec).expect("plain data serializes");
            if let Err(e) = writeln!(w, "{line}").and_then(|_| w.flush()) {
                err = Some(e);
            }
        }
    });
    match err {
        Some(e) => Err(usage(format!("write failed: {e}"))),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Info { path } => info(&path),
        Command::Invariants { path, module, cutoff, k, seed, json } => {
            invariants(&path, &module, cutoff as usize, k as usize, seed, json)
        }
        Command::Construct { kind, inputs, n, characteristic, out } => {
            construct(kind, &inputs, n, characteristic, out.as_deref())
        }
        Command::Verify { suite: Suite::Paper, seed, characteristic } => verify(seed, characteristic),
        Command::Scan { count, max_vertices, max_arrows, seed, cutoff, k, characteristic, out } => {
            let cfg = ScanConfig {
                count,
                max_vertices: max_vertices as usize,
                max_arrows: max_arrows as usize,
                seed,
                cutoff: cutoff as usize,
                k: k as usize,
            };
            run_scan(&cfg, characteristic, out.as_deref())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure { code, msg }) => {
            eprintln!("deloop: {msg}");
            ExitCode::from(code)
        }
    }
}
