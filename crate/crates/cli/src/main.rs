use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use haar_core::auto::{automorphism_group, find_isomorphism, is_edge_transitive_under};
use haar_core::bicyclic::{
    base_from_catalog, bci_definitional, bicyclic_subgroups, ci_subset_definitional, ci_subset_structural,
    is_bci_structural,
};
use haar_core::census::{census_to_path, run_census, CensusConfig, Method};
use haar_core::haar::{build_cayley, build_haar, ENCODING};
use haar_core::perm::DEFAULT_CAP;
use haar_core::theorem::{decide_iso_valency4, verify_all};
use haar_core::zn::{self, ZnSet};
use haar_core::Error;

#[derive(Parser)]
#[command(
    name = "haar",
    version,
    about = "Isomorphism, BCI and CI tests for cyclic Haar graphs"
)]
struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Largest group order that may be enumerated element by element.
    #[arg(long, global = true, env = "HAAR_MAX_GROUP_ORDER", default_value_t = DEFAULT_CAP)]
    max_group_order: u128,
    /// Accepted for reproducible randomized checks; the commands here are
    /// deterministic.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Exit with status 1 when a predicate command answers no.
    #[arg(long, global = true)]
    strict: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct SetArgs {
    /// Modulus.
    #[arg(long)]
    n: u32,
    /// Connection set, comma separated.
    #[arg(long)]
    set: String,
}

impl SetArgs {
    fn parse(&self) -> Result<ZnSet, Error> {
        parse_set(self.n, &self.set)
    }
}

fn parse_set(n: u32, s: &str) -> Result<ZnSet, Error> {
    ZnSet::new(n, zn::parse_elements(s)?)
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Definitional,
    Structural,
    Both,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Definitional => Method::Definitional,
            MethodArg::Structural => Method::Structural,
            MethodArg::Both => Method::Both,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Haar,
    Cayley,
}

#[derive(Subcommand)]
enum Command {
    /// Canonical representative of the affine class of S.
    Canon(SetArgs),
    /// Is T = aS + b for a unit a?
    AffEq {
        #[command(flatten)]
        input: SetArgs,
        #[arg(long)]
        other: String,
    },
    /// Is H(Z_n, S) isomorphic to H(Z_n, T)?
    Iso {
        #[command(flatten)]
        input: SetArgs,
        #[arg(long)]
        other: String,
        /// Use the search oracle instead of the arithmetic criterion.
        #[arg(long)]
        oracle: bool,
        /// Run both and report whether they agree.
        #[arg(long)]
        check_oracle: bool,
    },
    /// Automorphism group of H(Z_n, S).
    Aut(SetArgs),
    /// Bicyclic subgroups and the bicyclic base.
    Bicyclic(SetArgs),
    /// Is S a BCI-subset of Z_n?
    Bci {
        #[command(flatten)]
        input: SetArgs,
        #[arg(long, value_enum, default_value = "definitional")]
        method: MethodArg,
    },
    /// Is S a CI-subset of Z_n?
    Ci {
        #[command(flatten)]
        input: SetArgs,
        #[arg(long, value_enum, default_value = "definitional")]
        method: MethodArg,
    },
    /// BCI census over a range of moduli, as JSONL.
    Census {
        /// Moduli, e.g. `8..16` or `12`.
        #[arg(long)]
        n: String,
        /// Subset sizes, e.g. `4` or `1..3`.
        #[arg(long, default_value = "4")]
        k: String,
        #[arg(long, value_enum, default_value = "definitional")]
        method: MethodArg,
        /// Continue an interrupted run in the --out file.
        #[arg(long)]
        resume: bool,
    },
    /// Check the structural lemmas on every applicable instance.
    VerifyLemmas {
        #[arg(long, default_value_t = 24)]
        n_max: u32,
    },
    /// Print a Haar graph or Cayley digraph.
    Graph {
        #[command(flatten)]
        input: SetArgs,
        #[arg(long, value_enum, default_value = "haar")]
        kind: Kind,
        #[arg(long)]
        emit_adjacency: bool,
    },
}

fn parse_range(s: &str) -> Result<Vec<u32>, Error> {
    let bad = || Error::Parse(format!("bad range {s:?}"));
    let num = |t: &str| t.trim().parse::<u32>().map_err(|_| bad());
    if let Some((a, b)) = s.split_once("..=").or_else(|| s.split_once("..")) {
        let (a, b) = (num(a)?, num(b)?);
        if a > b {
            return Err(bad());
        }
        Ok((a..=b).collect())
    } else {
        Ok(vec![num(s)?])
    }
}

struct Output {
    json: bool,
    sink: Box<dyn Write>,
}

impl Output {
    fn emit(&mut self, value: Value, text: String) -> io::Result<()> {
        if self.json {
            writeln!(self.sink, "{value}")
        } else {
            writeln!(self.sink, "{text}")
        }
    }
}

enum Failure {
    Core(Error),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

fn fmt_set(s: &ZnSet) -> String {
    s.elems().iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

/// Returns the predicate's answer, if the command has one.
fn run(cli: &Cli, out: &mut Output) -> Result<Option<bool>, Failure> {
    let cap = cli.max_group_order;
    match &cli.command {
        Command::Canon(a) => {
            let s = a.parse()?;
            let (canon, w) = zn::canonical_affine_form(&s);
            out.emit(
                json!({ "modulus": s.modulus(), "set": s.elems(), "canonical": canon.elems(), "a": w.a, "b": w.b }),
                format!(
                    "{} = {}*{{{}}} + {} (mod {})",
                    fmt_set(&canon),
                    w.a,
                    fmt_set(&s),
                    w.b,
                    s.modulus()
                ),
            )?;
            Ok(None)
        }
        Command::AffEq { input, other } => {
            let s = input.parse()?;
            let t = parse_set(input.n, other)?;
            let w = zn::affinely_equivalent(&s, &t)?;
            let text = match w {
                Some(w) => format!("yes: {{{}}} = {}*{{{}}} + {}", fmt_set(&t), w.a, fmt_set(&s), w.b),
                None => "no".to_string(),
            };
            out.emit(json!({ "equivalent": w.is_some(), "witness": w }), text)?;
            Ok(Some(w.is_some()))
        }
        Command::Iso {
            input,
            other,
            oracle,
            check_oracle,
        } => {
            let s = input.parse()?;
            let t = parse_set(input.n, other)?;
            iso(out, &s, &t, *oracle, *check_oracle)
        }
        Command::Aut(a) => {
            let g = build_haar(&a.parse()?)?;
            let group = automorphism_group(&g);
            let stab = group.point_stabilizer(0).order();
            let transitive = is_edge_transitive_under(&g, &group);
            let gens: Vec<&[u32]> = group.generators().iter().map(|p| p.images()).collect();
            out.emit(
                json!({
                    "order": group.order().to_string(),
                    "stabilizer_order": stab.to_string(),
                    "edge_transitive": transitive,
                    "encoding": ENCODING,
                    "generators": gens,
                }),
                format!(
                    "|Aut| = {}, |Aut_0+| = {}, edge-transitive: {}, {} generators",
                    group.order(),
                    stab,
                    transitive,
                    gens.len()
                ),
            )?;
            Ok(None)
        }
        Command::Bicyclic(a) => {
            let g = build_haar(&a.parse()?)?;
            let catalog = bicyclic_subgroups(&g, cap)?;
            let base = base_from_catalog(&g, &catalog);
            let images: Vec<&[u32]> = base.iter().map(|e| e.connection.elems()).collect();
            let mut text = format!(
                "{} bicyclic subgroups in {} conjugacy classes\nbase images:",
                catalog.len(),
                catalog.class_count()
            );
            for e in &base {
                text.push_str(&format!("\n  {{{}}}", fmt_set(&e.connection)));
            }
            out.emit(
                json!({ "count": catalog.len(), "classes": catalog.class_count(), "base": images }),
                text,
            )?;
            Ok(None)
        }
        Command::Bci { input, method } => {
            let s = input.parse()?;
            let method: Method = (*method).into();
            let mut value = json!({ "method": method });
            let mut verdict = None;
            if method != Method::Structural {
                let v = bci_definitional(&s)?;
                value["partner"] = json!(v.partner.as_ref().map(|p| p.elems().to_vec()));
                verdict = Some(v.bci);
            }
            if method != Method::Definitional {
                let st = is_bci_structural(&s, cap)?;
                if verdict.is_some_and(|d| d != st) {
                    return Err(Error::Precondition(format!("methods disagree on {s}")).into());
                }
                verdict = Some(st);
            }
            let bci = verdict.expect("a method ran");
            value["bci"] = json!(bci);
            out.emit(value, format!("{s} is {}a BCI-subset", if bci { "" } else { "not " }))?;
            Ok(Some(bci))
        }
        Command::Ci { input, method } => {
            let s = input.parse()?;
            let ci = match Method::from(*method) {
                Method::Definitional => ci_subset_definitional(&s),
                Method::Structural => ci_subset_structural(&s, cap)?,
                Method::Both => {
                    let d = ci_subset_definitional(&s);
                    if d != ci_subset_structural(&s, cap)? {
                        return Err(Error::Precondition(format!("methods disagree on {s}")).into());
                    }
                    d
                }
            };
            out.emit(
                json!({ "ci": ci }),
                format!("{s} is {}a CI-subset", if ci { "" } else { "not " }),
            )?;
            Ok(Some(ci))
        }
        Command::Census { n, k, method, resume } => {
            let config = CensusConfig {
                moduli: parse_range(n)?,
                sizes: parse_range(k)?.into_iter().map(|k| k as usize).collect(),
                method: (*method).into(),
                cap,
            };
            let mut non_bci = false;
            let report = |s: &haar_core::census::CensusSummary| {
                eprintln!(
                    "n = {:>3}, k = {}: {} classes, {} connected, {} non-BCI",
                    s.modulus, s.k, s.classes, s.connected, s.non_bci
                );
            };
            let summaries = match &cli.out {
                Some(path) => census_to_path(&config, path, *resume, report)?,
                None => run_census(&config, &mut out.sink, &Default::default(), report)?,
            };
            non_bci |= summaries.iter().any(|s| s.has_non_bci);
            Ok(Some(!non_bci))
        }
        Command::VerifyLemmas { n_max } => {
            let checks = verify_all(*n_max, cap)?;
            let ok = checks.iter().all(|c| c.passed());
            let mut text = String::new();
            for c in &checks {
                let status = if c.passed() { "PASS" } else { "FAIL" };
                text.push_str(&format!("{status}  {:>5}  {}\n", c.instances, c.name));
                for f in c.failures.iter().take(5) {
                    text.push_str(&format!("        {f}\n"));
                }
            }
            out.emit(json!(checks), text.trim_end().to_string())?;
            Ok(Some(ok))
        }
        Command::Graph {
            input,
            kind,
            emit_adjacency,
        } => {
            let s = input.parse()?;
            let g = match kind {
                Kind::Haar => build_haar(&s)?.to_json(*emit_adjacency),
                Kind::Cayley => build_cayley(&s).to_json(*emit_adjacency),
            };
            let value = serde_json::to_value(&g).expect("serializable");
            let text = serde_json::to_string_pretty(&g).expect("serializable");
            out.emit(value, text)?;
            Ok(None)
        }
    }
}

fn iso(out: &mut Output, s: &ZnSet, t: &ZnSet, oracle: bool, check: bool) -> Result<Option<bool>, Failure> {
    let oracle_answer = || {
        let f = find_isomorphism(&build_haar(s)?, &build_haar(t)?);
        Ok::<_, Error>(f)
    };
    let arithmetic = !oracle && s.len() == 4 && t.len() == 4;
    let mut value = json!({});
    let isomorphic = if arithmetic {
        let d = decide_iso_valency4(s, t)?;
        value["route"] = json!(d.route);
        if let Some(w) = d.affine {
            value["a"] = json!(w.a);
            value["b"] = json!(w.b);
        }
        if let Some(w) = d.exceptional {
            value["u"] = json!(w.quadruple.u);
            value["v"] = json!(w.quadruple.v);
            value["a1"] = json!(w.a1);
            value["b1"] = json!(w.b1);
            value["a2"] = json!(w.a2);
            value["b2"] = json!(w.b2);
            value["orientation"] = json!(w.orientation);
        }
        value["isomorphism"] = json!(d.isomorphism.as_ref().map(|p| p.images().to_vec()));
        d.isomorphic
    } else {
        let f = oracle_answer()?;
        value["route"] = json!("oracle");
        value["isomorphism"] = json!(f.as_ref().map(|p| p.images().to_vec()));
        f.is_some()
    };
    value["isomorphic"] = json!(isomorphic);
    value["oracle_checked"] = json!(arithmetic && check);
    if arithmetic && check {
        let agrees = oracle_answer()?.is_some() == isomorphic;
        value["oracle_agrees"] = json!(agrees);
        if !agrees {
            return Err(Error::Precondition(format!("oracle disagrees on {s} vs {t}")).into());
        }
    }
    let route = value["route"].as_str().unwrap_or_default().to_string();
    let text = if isomorphic {
        format!("isomorphic (route: {route})")
    } else {
        "not isomorphic".to_string()
    };
    out.emit(value, text)?;
    Ok(Some(isomorphic))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global() {
            eprintln!("haar: {e}");
            return ExitCode::from(2);
        }
    }
    let sink: Box<dyn Write> = match (&cli.out, &cli.command) {
        (Some(path), c) if !matches!(c, Command::Census { .. }) => match File::create(path) {
            Ok(f) => Box::new(io::BufWriter::new(f)),
            Err(e) => {
                eprintln!("haar: {}: {e}", path.display());
                return ExitCode::from(2);
            }
        },
        _ => Box::new(io::stdout().lock()),
    };
    let mut out = Output { json: cli.json, sink };
    let result = run(&cli, &mut out);
    let _ = out.sink.flush();
    match result {
        Ok(Some(false)) if cli.strict => ExitCode::from(1),
        Ok(_) => ExitCode::SUCCESS,
        Err(Failure::Core(e)) => {
            eprintln!("haar: {e}");
            ExitCode::from(if matches!(e, Error::ResourceExceeded { .. }) {
                3
            } else {
                2
            })
        }
        Err(Failure::Io(e)) => {
            eprintln!("haar: {e}");
            ExitCode::from(2)
        }
    }
}
