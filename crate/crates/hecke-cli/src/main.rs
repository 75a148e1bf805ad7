use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use hecke::characters::character;
use hecke::clifford::{clifford_restrict, CliffordOutcome};
use hecke::crystal::{build_graph, crystal_edge_check, LambdaLine};
use hecke::fixtures;
use hecke::functors::{build_from_path, crystal_e, crystal_e_star, crystal_f, crystal_f_star, eps, eps_star, induce, Family};
use hecke::modrep::{set_seed, verify_module};
use hecke::multiseg::{Multisegment, Order, Point};
use hecke::{HeckeError, ModuleRep, Scalar};

#[derive(Parser)]
#[command(name = "hecke", version, about = "Exact computations with affine Hecke algebras of type B")]
struct Cli {
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for randomized searches (results do not depend on it).
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    B,
    R,
    A,
}

#[derive(Clone, Copy, ValueEnum)]
enum CrystalCmd {
    E,
    F,
    Estar,
    Fstar,
}

#[derive(Clone, Copy, ValueEnum)]
enum MsegOp {
    Eps,
    EpsStar,
    E,
    F,
    EStar,
    FStar,
    Right,
    Left,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check every defining relation on a module file.
    Verify { file: PathBuf },
    /// Formal character of a module.
    Char { file: PathBuf },
    /// Induce a module to the full algebra of a family at the same rank.
    Induce {
        file: PathBuf,
        #[arg(long, value_enum)]
        target: Target,
    },
    /// `ε_a` (or `ε*_a` with --star).
    Eps {
        file: PathBuf,
        #[arg(long)]
        a: Scalar,
        #[arg(long)]
        star: bool,
    },
    /// Crystal operators on a module.
    Crystal {
        #[arg(value_enum)]
        op: CrystalCmd,
        #[arg(long)]
        a: Scalar,
        file: PathBuf,
    },
    /// `f̃_{a_k} ... f̃_{a_1} (a_0)`, stopping at the first non-simple cosocle.
    Path {
        #[arg(long)]
        a0: Scalar,
        /// Repeat for each step.
        #[arg(long, required = true)]
        a: Vec<Scalar>,
        #[arg(long, default_value = "2")]
        p: Scalar,
        #[arg(long, default_value = "3")]
        q: Scalar,
    },
    /// Multisegment combinatorics; --a is an exponent on the line `q^{2i}`.
    Mseg {
        #[arg(value_enum)]
        op: MsegOp,
        #[arg(long)]
        gamma: String,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
        a: i32,
    },
    /// Restriction of an irreducible `H_n`-module to `H_n^R`.
    Clifford { file: PathBuf },
    /// Compare `f̃_a` and `ẽ_a` on `ind N_Γ` (Γ on the `λ^{-1}` half) with the multisegment prediction.
    Dict {
        #[arg(long)]
        gamma: String,
        #[arg(long)]
        a: Scalar,
        #[arg(long, default_value = "5")]
        lambda: Scalar,
        #[arg(long, default_value = "2")]
        p: Scalar,
        #[arg(long, default_value = "3")]
        q: Scalar,
    },
    /// Crystal graph from the seed `(a_0)` with labels in the window of `I_λ`.
    Graph {
        #[arg(long, default_value = "5")]
        lambda: Scalar,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value = "7")]
        a0: Scalar,
        #[arg(long, default_value_t = 2)]
        window: u32,
        #[arg(long, default_value = "2")]
        p: Scalar,
        #[arg(long, default_value = "3")]
        q: Scalar,
        /// DOT instead of JSON.
        #[arg(long)]
        dot: bool,
    },
    /// Named example modules.
    Fixtures {
        #[command(subcommand)]
        cmd: FixturesCmd,
    },
}

#[derive(Subcommand)]
enum FixturesCmd {
    List,
    /// Write `<name>.json` into --out (a directory, default `fixtures`); all fixtures when no names are given.
    Build { names: Vec<String> },
}

enum Failure {
    Usage(String),
    Semantic(String),
}

impl From<HeckeError> for Failure {
    fn from(e: HeckeError) -> Self {
        match e {
            HeckeError::Parse(_) => Failure::Usage(e.to_string()),
            _ => Failure::Semantic(e.to_string()),
        }
    }
}

type Outcome = Result<(String, bool), Failure>;

fn load(path: &Path) -> Result<ModuleRep, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    ModuleRep::from_json(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn parse_gamma(s: &str, base: i32) -> Result<Multisegment, Failure> {
    let g: Multisegment = s.parse().map_err(|e: HeckeError| Failure::Usage(e.to_string()))?;
    Ok(Multisegment::new(g.segments().iter().map(|x| hecke::multiseg::Segment { base, ..*x }).collect()))
}

fn verify(file: &Path) -> Outcome {
    let m = load(file)?;
    let checks = verify_module(&m);
    let mut by_family: BTreeMap<String, (usize, Vec<String>)> = BTreeMap::new();
    for c in &checks {
        let e = by_family.entry(c.family.clone()).or_default();
        e.0 += 1;
        if !c.pass {
            e.1.push(c.instance.clone());
        }
    }
    let mut out = format!("{} dim {}\n", m.desc(), m.dim());
    for (fam, (count, bad)) in &by_family {
        if bad.is_empty() {
            out.push_str(&format!("relation {fam}: pass ({count} instances)\n"));
        } else {
            out.push_str(&format!("relation {fam}: FAIL {}\n", bad.join("; ")));
        }
    }
    let ok = checks.iter().all(|c| c.pass);
    out.push_str(if ok { "all relations hold\n" } else { "some relations fail\n" });
    Ok((out, ok))
}

fn run(cli: &Cli) -> Outcome {
    let json = cli.format == Format::Json;
    match &cli.cmd {
        Cmd::Verify { file } => verify(file),
        Cmd::Char { file } => {
            let ch = character(&load(file)?)?;
            let text = match cli.format {
                Format::Json => ch.to_json()?,
                Format::Csv => ch.to_csv(),
                Format::Text => ch.to_string(),
            };
            Ok((text, true))
        }
        Cmd::Induce { file, target } => {
            let m = load(file)?;
            let d = m.desc();
            let fam = match target {
                Target::B => Family::B,
                Target::R => Family::R,
                Target::A => Family::A,
            };
            let ind = induce(&m, &fam.desc(d.n(), d.p().clone(), d.q().clone())?)?;
            Ok((ind.to_json_pretty()?, true))
        }
        Cmd::Eps { file, a, star } => {
            let m = load(file)?;
            let k = if *star { eps_star(&m, a)? } else { eps(&m, a)? };
            Ok((if json { format!("{{\"eps\":{k}}}") } else { k.to_string() }, true))
        }
        Cmd::Crystal { op, a, file } => {
            let m = load(file)?;
            match op {
                CrystalCmd::E | CrystalCmd::Estar => {
                    let e = if matches!(op, CrystalCmd::E) { crystal_e(&m, a)? } else { crystal_e_star(&m, a)? };
                    Ok((if e.dim() == 0 { "0".to_string() } else { e.to_json_pretty()? }, true))
                }
                CrystalCmd::F | CrystalCmd::Fstar => {
                    let r = if matches!(op, CrystalCmd::F) { crystal_f(&m, a)? } else { crystal_f_star(&m, a)? };
                    Ok((r.to_json()?, true))
                }
            }
        }
        Cmd::Path { a0, a, p, q } => {
            let out = build_from_path(a0, a, p, q)?;
            Ok((out.result.to_json()?, out.result.irreducible().is_some()))
        }
        Cmd::Mseg { op, gamma, a } => {
            let g = parse_gamma(gamma, 0)?;
            let pt = Point::new(0, *a);
            let res = match op {
                MsegOp::Eps => return Ok((g.eps(pt).to_string(), true)),
                MsegOp::EpsStar => return Ok((g.eps_star(pt).to_string(), true)),
                MsegOp::E => g.e(pt),
                MsegOp::F => Some(g.f(pt)),
                MsegOp::EStar => g.e_star(pt),
                MsegOp::FStar => Some(g.f_star(pt)),
                MsegOp::Right => Some(g.normalize(Order::Right)),
                MsegOp::Left => Some(g.normalize(Order::Left)),
            };
            let text = match (res, json) {
                (None, _) => "0".to_string(),
                (Some(m), true) => m.to_json()?,
                (Some(m), false) => m.to_string(),
            };
            Ok((text, true))
        }
        Cmd::Clifford { file } => {
            let r = clifford_restrict(&load(file)?)?;
            if json {
                return Ok((r.to_json()?, true));
            }
            let what = match &r.outcome {
                CliffordOutcome::Irreducible(m) => format!("irreducible restriction of dim {}", m.dim()),
                CliffordOutcome::Splits(a, b) => format!("splits into parts of dims {} and {}", a.dim(), b.dim()),
            };
            Ok((format!("mu = {}\nsigma self-isomorphic: {}\n-1 present: {}\n{what}", r.mu, r.sigma_selfiso, r.minus_one_present), true))
        }
        Cmd::Dict { gamma, a, lambda, p, q } => {
            let line = LambdaLine { lambda: lambda.clone(), q: q.clone(), p: p.clone(), window: 2 };
            let pt = line.locate(a).ok_or_else(|| Failure::Usage(format!("{a} is not in the window of the line")))?;
            let r = crystal_edge_check(&parse_gamma(gamma, -1)?, pt, &line)?;
            let mut v = serde_json::to_value(&r).map_err(|e| Failure::Semantic(e.to_string()))?;
            v["pass"] = r.pass().into();
            Ok((v.to_string(), r.pass()))
        }
        Cmd::Graph { lambda, n, a0, window, p, q, dot } => {
            let line = LambdaLine { lambda: lambda.clone(), q: q.clone(), p: p.clone(), window: *window };
            let g = build_graph(&line, a0, *n)?;
            Ok((if *dot { g.to_dot() } else { g.to_json()? }, true))
        }
        Cmd::Fixtures { cmd } => match cmd {
            FixturesCmd::List => {
                let text: String = fixtures::registry().iter().map(|f| format!("{}\t{}\n", f.name, f.description)).collect();
                Ok((text, true))
            }
            FixturesCmd::Build { names } => {
                let dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("fixtures"));
                fs::create_dir_all(&dir).map_err(|e| Failure::Usage(format!("{}: {e}", dir.display())))?;
                let chosen = if names.is_empty() {
                    fixtures::registry()
                } else {
                    names.iter().map(|n| fixtures::find(n).map_err(|e| Failure::Usage(e.to_string()))).collect::<Result<_, _>>()?
                };
                let mut log = String::new();
                for f in chosen {
                    let path = dir.join(format!("{}.json", f.name));
                    fs::write(&path, f.to_json()? + "\n").map_err(|e| Failure::Semantic(format!("{}: {e}", path.display())))?;
                    log.push_str(&format!("{}\n", path.display()));
                }
                Ok((log, true))
            }
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(s) = cli.seed {
        set_seed(s);
    }
    match run(&cli) {
        Ok((text, ok)) => {
            let text = if text.ends_with('\n') { text } else { text + "\n" };
            let fixtures_cmd = matches!(cli.cmd, Cmd::Fixtures { cmd: FixturesCmd::Build { .. } });
            match (&cli.out, fixtures_cmd) {
                (Some(path), false) => {
                    if let Err(e) = fs::write(path, &text) {
                        eprintln!("error: {}: {e}", path.display());
                        return ExitCode::from(1);
                    }
                }
                _ => print!("{text}"),
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Semantic(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
