//! Argument handling and command dispatch for the `htt` binary.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use super::format::{parse, resolve_mc, serialize_cdga, serialize_coalgebra, serialize_dgl, serialize_linf, Kind, Model};
use crate::error::Error;
use crate::functors::{cochain, dual_coalgebra, linf_from_cdga, quillen, quillen_differential_direct, Cdga, FreeDgl};
use crate::graded::GradedSpace;
use crate::invariants::{bracket_length, conilpotence, differential_length, hspace_certificate, whitehead_length, ConeLengthCertificate, InvariantReport};
use crate::mapping::{component_model, mapping_space_model, positive_part, reduced_bs_cochain};
use crate::structures::{check_cocommutative, mc_check, AInfCoalgebra, LInfAlgebra};
use crate::transfer::{homology_decomposition, retract_from_decomposition, transfer_ainf, Complex, TransferOptions};

#[derive(Parser, Debug)]
#[command(name = "htt", version, about = "Exact homotopy transfer and rational models of mapping spaces")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Highest arity to transfer (default: derived from the degrees).
    #[arg(long, global = true)]
    max_arity: Option<usize>,
    /// Restrict transfer to binary trees.
    #[arg(long, global = true, value_enum)]
    trees_only: Option<Trees>,
    /// Output style (`text` or `machine`) and, for `mapmodel`, what to emit
    /// (`linf`, `bs` or `both`). May be given twice.
    #[arg(long, global = true, value_enum)]
    emit: Vec<Emit>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Trees {
    Binary,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Emit {
    Text,
    Machine,
    Linf,
    Bs,
    Both,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse a model file and run its axiom checker.
    Check { file: PathBuf },
    /// Transfer a coalgebra (or the dual of a cdga) to its homology.
    TransferAinf { file: PathBuf },
    /// Minimal Quillen model of a coalgebra, by default through its
    /// transferred A∞-structure on the homology.
    Quillen {
        file: PathBuf,
        /// Read the differential off a decomposition instead of transferring.
        #[arg(long)]
        direct: bool,
    },
    /// Chevalley–Eilenberg cochains of an L∞-algebra.
    Cochain { file: PathBuf },
    /// Dual coalgebra of a finite-dimensional cdga.
    Dualize {
        file: PathBuf,
        /// Keep the counit (default: the reduced coalgebra).
        #[arg(long)]
        full: bool,
    },
    /// L∞-model of the mapping space from X to Y.
    Mapmodel {
        /// Source: a cdga, dgc or ainf file (cdgas are dualized).
        x: PathBuf,
        /// Target: a free cdga or a linf file.
        y: PathBuf,
        /// Model the pointed mapping space (reduced source coalgebra).
        #[arg(long)]
        pointed: bool,
        /// Maurer–Cartan element selecting a component.
        #[arg(long)]
        mc: Option<PathBuf>,
    },
    /// Length invariants of a model.
    Invariants { file: PathBuf },
    /// Whether every component of the pointed mapping space is an H-space.
    Hspace {
        /// Source: a dgl file (two-stage certificate) or a cdga/dgc file.
        x: PathBuf,
        /// Target: a free cdga or a linf file.
        y: PathBuf,
    },
}

/// A failed run: exit status and message.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Failure {
        Failure { code: 1, message: message.into() }
    }

    fn engine(context: Option<&Path>, e: Error) -> Failure {
        let code = match e {
            Error::Parse { .. } | Error::Input(_) | Error::Degree(_) | Error::Unsupported(_) => 2,
            Error::Axiom(_) | Error::Construction(_) => 3,
            Error::BoundExceeded(_) => 4,
        };
        let message = match context {
            Some(p) => format!("{}: {e}", p.display()),
            None => e.to_string(),
        };
        Failure { code, message }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::engine(None, e)
    }
}

type Outcome = std::result::Result<String, Failure>;

/// Parses arguments and runs the command. Returns the exit status and what
/// goes to stdout or stderr respectively.
pub fn run<I, T>(args: I) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 { (0, text, String::new()) } else { (code, String::new(), text) };
        }
    };
    match execute(&cli) {
        Ok(out) => (0, out, String::new()),
        Err(f) => (f.code, String::new(), format!("error: {}\n", f.message)),
    }
}

struct Style {
    machine: bool,
    linf: bool,
    bs: bool,
}

fn style(cli: &Cli, mapmodel: bool) -> std::result::Result<Style, Failure> {
    let machine = cli.emit.contains(&Emit::Machine);
    if machine && cli.emit.contains(&Emit::Text) {
        return Err(Failure::usage("--emit text and --emit machine exclude each other"));
    }
    let what: Vec<Emit> = cli.emit.iter().copied().filter(|e| matches!(e, Emit::Linf | Emit::Bs | Emit::Both)).collect();
    if !mapmodel && !what.is_empty() {
        return Err(Failure::usage("--emit linf|bs|both only applies to mapmodel"));
    }
    if what.len() > 1 {
        return Err(Failure::usage("give at most one of --emit linf|bs|both"));
    }
    let (linf, bs) = match what.first() {
        None | Some(Emit::Linf) => (true, false),
        Some(Emit::Bs) => (false, true),
        _ => (true, true),
    };
    Ok(Style { machine, linf, bs })
}

fn options(cli: &Cli) -> TransferOptions {
    TransferOptions { max_arity: cli.max_arity, binary_only: cli.trees_only == Some(Trees::Binary) }
}

fn load(path: &Path) -> std::result::Result<Model, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure { code: 2, message: format!("{}: {e}", path.display()) })?;
    parse(&text).map_err(|e| Failure::engine(Some(path), e))
}

fn wrong_kind(path: &Path, m: &Model, wanted: &str) -> Failure {
    Failure::usage(format!("{}: a {} file cannot be used here (expected {wanted})", path.display(), m.kind().name()))
}

/// A coalgebra from a `dgc`/`ainf` file or the dual of a `cdga` file.
fn coalgebra(path: &Path, m: Model, reduced: bool) -> std::result::Result<AInfCoalgebra, Failure> {
    match m {
        Model::Cdga(b) => {
            let dual = dual_coalgebra(&b).map_err(|e| Failure::engine(Some(path), e))?;
            Ok(if reduced { dual.reduced } else { dual.full })
        }
        Model::Dgc(c) | Model::Ainf(c) => {
            if c.reduced != reduced {
                let want = if reduced { "reduced" } else { "full (`option full`)" };
                return Err(Failure::usage(format!("{}: expected a {want} coalgebra", path.display())));
            }
            Ok(c)
        }
        other => Err(wrong_kind(path, &other, "cdga, dgc or ainf")),
    }
}

/// An L∞-algebra from a `linf` file or the model of a free `cdga`.
fn lie_model(path: &Path, m: Model) -> std::result::Result<LInfAlgebra, Failure> {
    match m {
        Model::Linf(l) => Ok(l),
        Model::Cdga(a) => linf_from_cdga(&a).map_err(|e| Failure::engine(Some(path), e)),
        other => Err(wrong_kind(path, &other, "linf or cdga")),
    }
}

fn structure(machine: bool, title: &str, body: String) -> String {
    if machine {
        body
    } else {
        format!("# {title}\n{body}")
    }
}

fn degree_table(space: &GradedSpace) -> String {
    let mut dims: BTreeMap<i64, usize> = BTreeMap::new();
    for &d in space.degrees() {
        *dims.entry(d).or_default() += 1;
    }
    let cells: Vec<String> = dims.iter().map(|(d, n)| format!("{d}:{n}")).collect();
    format!("# dimensions by degree  {}\n", cells.join("  "))
}

fn reports(machine: bool, list: &[InvariantReport]) -> String {
    let mut out = String::new();
    for r in list {
        if machine {
            let _ = writeln!(out, "{} = {}", r.name, r.value);
            let _ = writeln!(out, "{}.witness = {}", r.name, r.witness);
        } else {
            let _ = writeln!(out, "{r}");
        }
    }
    out
}

pub fn execute(cli: &Cli) -> Outcome {
    let opts = options(cli);
    let st = style(cli, matches!(cli.command, Command::Mapmodel { .. }))?;
    match &cli.command {
        Command::Check { file } => {
            let m = load(file)?;
            let mut out = String::from("ok\n");
            if !st.machine {
                let dim = match &m {
                    Model::Cdga(a) => a.gens.dim(),
                    Model::Dgc(c) | Model::Ainf(c) => c.space.dim(),
                    Model::Linf(l) => l.space.dim(),
                    Model::Dgl(d) => d.gens.dim(),
                    Model::Mc(z) => z.len(),
                };
                let _ = writeln!(out, "# {} with {dim} basis elements", m.kind().name());
                if let Model::Dgc(c) | Model::Ainf(c) = &m {
                    let co = if check_cocommutative(c).is_ok() { "cocommutative" } else { "not cocommutative" };
                    let _ = writeln!(out, "# {co}");
                }
            }
            Ok(out)
        }
        Command::TransferAinf { file } => {
            let c = coalgebra(file, load(file)?, true)?;
            let cx = Complex::new(c.space.clone(), c.differential())?;
            let r = retract_from_decomposition(&cx, &homology_decomposition(&cx))?;
            let t = transfer_ainf(&c, &r, &opts)?;
            Ok(structure(st.machine, "transferred A∞-coalgebra on the homology", serialize_coalgebra(&t, Kind::Ainf)))
        }
        Command::Quillen { file, direct } => {
            let c = coalgebra(file, load(file)?, true)?;
            let cx = Complex::new(c.space.clone(), c.differential())?;
            let dec = homology_decomposition(&cx);
            let m: FreeDgl = if *direct {
                quillen_differential_direct(&c, &dec)?
            } else {
                quillen(&transfer_ainf(&c, &retract_from_decomposition(&cx, &dec)?, &opts)?)?
            };
            Ok(structure(st.machine, "Quillen model", serialize_dgl(&m)))
        }
        Command::Cochain { file } => {
            let l = match load(file)? {
                Model::Linf(l) => l,
                other => return Err(wrong_kind(file, &other, "linf")),
            };
            Ok(structure(st.machine, "cochain algebra", serialize_cdga(&cochain(&l)?)))
        }
        Command::Dualize { file, full } => {
            let b = match load(file)? {
                Model::Cdga(b) => b,
                other => return Err(wrong_kind(file, &other, "cdga")),
            };
            let dual = dual_coalgebra(&b).map_err(|e| Failure::engine(Some(file), e))?;
            let c = if *full { dual.full } else { dual.reduced };
            Ok(structure(st.machine, "dual coalgebra", serialize_coalgebra(&c, Kind::Dgc)))
        }
        Command::Mapmodel { x, y, pointed, mc } => {
            let c = coalgebra(x, load(x)?, *pointed)?;
            let l = lie_model(y, load(y)?)?;
            let m = mapping_space_model(&c, &l, &opts)?;
            let mut model = m.model;
            if let Some(path) = mc {
                let z = match load(path)? {
                    Model::Mc(z) => resolve_mc(&z, &model.space).map_err(|e| Failure::engine(Some(path), e))?,
                    other => return Err(wrong_kind(path, &other, "mc")),
                };
                let phi = mc_check(&model, &z).map_err(|e| Failure::engine(Some(path), e))?;
                model = component_model(&model, &phi)?;
            }
            let mut out = String::new();
            if st.linf {
                let mut body = serialize_linf(&model);
                if !st.machine {
                    body = format!("{}{body}", degree_table(&model.space));
                }
                out.push_str(&structure(st.machine, "L∞-model of the mapping space on Hom(H̄, L)", body));
            }
            if st.bs {
                let mut b: Cdga = reduced_bs_cochain(&model, &m.hom)?;
                if *pointed {
                    b = positive_part(&b)?;
                }
                let mut body = serialize_cdga(&b);
                if !st.machine {
                    body = format!("{}{body}", degree_table(&b.gens));
                }
                let title = if *pointed { "Brown–Szczarba model, positive part" } else { "Brown–Szczarba model" };
                out.push_str(&structure(st.machine, title, body));
            }
            Ok(out)
        }
        Command::Invariants { file } => {
            let list = match load(file)? {
                Model::Cdga(a) if a.is_minimal() => {
                    vec![differential_length(&a)?, whitehead_length(&linf_from_cdga(&a)?)?]
                }
                Model::Cdga(a) => {
                    // not a minimal model: read the source-side invariants off the dual
                    let c = coalgebra(file, Model::Cdga(a), true)?;
                    let cx = Complex::new(c.space.clone(), c.differential())?;
                    let q = quillen_differential_direct(&c, &homology_decomposition(&cx))?;
                    vec![conilpotence(&c)?, bracket_length(&q)?]
                }
                Model::Dgl(m) => vec![bracket_length(&m)?],
                Model::Linf(l) => vec![whitehead_length(&l)?],
                Model::Dgc(c) => {
                    let cx = Complex::new(c.space.clone(), c.differential())?;
                    let q = quillen_differential_direct(&c, &homology_decomposition(&cx))?;
                    vec![conilpotence(&c)?, bracket_length(&q)?]
                }
                other => return Err(wrong_kind(file, &other, "cdga, dgl, linf or dgc")),
            };
            let mut out = reports(st.machine, &list);
            if !st.machine && list.iter().any(|r| r.name == "Wl") {
                out.push_str("# Wl counts iterated binary brackets only\n");
            }
            Ok(out)
        }
        Command::Hspace { x, y } => {
            let (q, cert) = match load(x)? {
                Model::Dgl(m) => {
                    let w0: Vec<usize> = (0..m.gens.dim()).filter(|&g| m.d_of(g).is_zero()).collect();
                    (m, ConeLengthCertificate::TwoStage(w0))
                }
                other => {
                    let c = coalgebra(x, other, true)?;
                    let cx = Complex::new(c.space.clone(), c.differential())?;
                    let q = quillen_differential_direct(&c, &homology_decomposition(&cx))?;
                    (q, ConeLengthCertificate::Coalgebra(c))
                }
            };
            let l = lie_model(y, load(y)?)?;
            let r = hspace_certificate(&q, &cert, &l)?;
            let mut out = String::new();
            if st.machine {
                out.push_str(&reports(true, &[r.bl.clone(), r.wl.clone()]));
                let _ = writeln!(out, "verdict = {}", r.verdict);
            } else {
                for t in &r.trace {
                    let _ = writeln!(out, "{t}");
                }
                let _ = writeln!(out, "verdict: {}", r.verdict);
            }
            Ok(out)
        }
    }
}
