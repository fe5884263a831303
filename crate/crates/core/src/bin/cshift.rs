use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cshift::chl::{certify_t1, certify_t2, ChlBudget, ContinuityVerdict};
use cshift::error::Error;
use cshift::gallery::{self, GalleryBudget, Params};
use cshift::hbc::{self, check_hbc_corollary_rowfinite, check_hbc_corollary_sup, higher_presentation, XiCode};
use cshift::point::Point;
use cshift::sbc::{falsifier_candidates, falsify_sliding_block, validate, BlackBox, SlidingBlockCode};
use cshift::shiftspace::ShiftPresentation;
use cshift::text::{self, CodeSpec, ParseError, Value};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_UNKNOWN: u8 = 3;

#[derive(Parser)]
#[command(name = "cshift", version, about = "Shift spaces over countable alphabets and their sliding block codes")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone, Copy)]
struct Common {
    /// Sample count for randomized checks.
    #[arg(long, global = true, env = "CSHIFT_BUDGET", default_value_t = 300)]
    budget: usize,
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,
    /// Window depth for falsifier searches.
    #[arg(long, global = true, default_value_t = 8)]
    depth: usize,
}

#[derive(Subcommand)]
enum Cmd {
    /// Apply a code to a point.
    Eval {
        #[arg(long)]
        code: String,
        #[arg(long)]
        point: String,
    },
    /// Check the code axioms.
    Validate {
        #[arg(long)]
        code: String,
    },
    /// Certify continuity or find a discontinuity witness.
    Certify {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        theorem: u8,
        #[arg(long)]
        code: String,
        /// Constant letter of the image of the empty sequence (theorem 2).
        #[arg(long, allow_hyphen_values = true)]
        d: Option<i64>,
        #[arg(long, default_value_t = 3)]
        m_max: usize,
    },
    /// Classify a shift presentation.
    Classify {
        #[arg(long)]
        shift: String,
    },
    /// Higher block codes.
    Hbc {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        shift: String,
        #[arg(long)]
        point: Option<String>,
        action: HbcAction,
    },
    /// Search for evidence that a map is not a sliding block code.
    Falsify {
        #[arg(long)]
        code: String,
        /// Test the inverse of a gallery code instead.
        #[arg(long)]
        inverse: bool,
    },
    /// The worked examples.
    Gallery {
        #[command(subcommand)]
        cmd: GalleryCmd,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum HbcAction {
    Encode,
    Decode,
    Present,
    CheckCorollaries,
}

#[derive(Subcommand)]
enum GalleryCmd {
    Run {
        #[arg(long)]
        case: Option<String>,
    },
}

enum Failure {
    Usage(String),
    Lib(Error),
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::Usage(format!("parse error: {e}"))
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Outcome = Result<u8, Failure>;

/// A literal, a `gallery:` name, or the path of a document file.
fn load_value(arg: &str) -> Result<Vec<(String, Value)>, Failure> {
    if Path::new(arg).is_file() {
        let src = std::fs::read_to_string(arg).map_err(|e| Failure::Usage(format!("{arg}: {e}")))?;
        let doc = text::parse(&src).map_err(|e| Failure::Usage(format!("{arg}: {e}")))?;
        return Ok(doc.items);
    }
    Ok(vec![("arg".into(), text::parse_value(arg)?)])
}

fn load_code(arg: &str) -> Result<(SlidingBlockCode, Option<CodeSpec>), Failure> {
    for (name, v) in load_value(arg)? {
        if let Value::Code(spec) = v {
            return Ok((spec.build(&name)?, Some(spec)));
        }
    }
    Err(Failure::Usage(format!("{arg}: no code found")))
}

fn load_shift(arg: &str) -> Result<ShiftPresentation, Failure> {
    if let Some(id) = arg.strip_prefix("gallery:") {
        return Ok(gallery::shift_by_name(id, Params::default())?);
    }
    for (_, v) in load_value(arg)? {
        if let Value::Shift(s) = v {
            return Ok(s);
        }
    }
    Err(Failure::Usage(format!("{arg}: no shift found")))
}

fn gallery_params(spec: &Option<CodeSpec>) -> Params {
    match spec {
        Some(CodeSpec::Gallery { params, .. }) => params.unwrap_or_default(),
        _ => Params::default(),
    }
}

fn verdict_exit(v: &ContinuityVerdict) -> u8 {
    match v {
        ContinuityVerdict::CertifiedContinuous { .. } => 0,
        ContinuityVerdict::CertifiedDiscontinuous(_) => EXIT_FAIL,
        ContinuityVerdict::Unknown(_) => EXIT_UNKNOWN,
    }
}

fn run(cli: Cli) -> Outcome {
    let c = cli.common;
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    match cli.cmd {
        Cmd::Eval { code, point } => {
            let (code, _) = load_code(&code)?;
            let p = text::parse_point(&point)?;
            println!("{}", code.apply(&p)?);
            Ok(0)
        }
        Cmd::Validate { code } => {
            let (code, _) = load_code(&code)?;
            let r = validate(&code, c.budget, &mut rng);
            println!("prefix_free = {}", r.prefix_free);
            println!("total = {}", r.total);
            println!("upsilon_suffix_closed = {}", r.upsilon_suffix_closed);
            println!("c_empty_invariant = {}", r.c_empty_invariant);
            println!("fibers_finitely_defined = {}", r.fibers_finitely_defined);
            Ok(if r.all_pass() { 0 } else { EXIT_FAIL })
        }
        Cmd::Certify { theorem, code, d, m_max } => {
            let (code, _) = load_code(&code)?;
            let budget = ChlBudget::default();
            let v = if theorem == 1 {
                certify_t1(&code, budget)?
            } else {
                let d = match d {
                    Some(d) => d,
                    None => match code.apply(&Point::empty())? {
                        Point::Evp { pre, period } if pre.is_empty() && period.len() == 1 => period[0],
                        img => {
                            return Err(Error::HypothesisNotMet(format!("the empty sequence maps to {img}")).into())
                        }
                    },
                };
                certify_t2(&code, d, m_max, budget)?
            };
            print!("{v}");
            Ok(verdict_exit(&v))
        }
        Cmd::Classify { shift } => {
            let s = load_shift(&shift)?;
            let k = s.classify();
            println!("shift = {s}");
            println!("sft = {}", k.is_sft);
            match k.m_step {
                Some(m) => println!("m_step = {m}"),
                None => println!("m_step = none"),
            }
            println!("row_finite = {}", k.row_finite);
            println!("column_finite = {}", k.column_finite);
            Ok(0)
        }
        Cmd::Hbc { m, shift, point, action } => {
            let s = load_shift(&shift)?;
            let need_point = || point.clone().ok_or_else(|| Failure::Usage("--point is required".into()));
            match action {
                HbcAction::Encode => {
                    let p = text::parse_point(&need_point()?)?;
                    if !s.contains_point(&p) {
                        return Err(Error::OutsideDomain.into());
                    }
                    println!("{}", hbc::xi(m, &p)?);
                    Ok(0)
                }
                HbcAction::Decode => {
                    let q = text::parse_block_point(&need_point()?)?;
                    let h = higher_presentation(&s, m)?;
                    if !h.contains_point(&q) {
                        return Err(Error::NotInLanguage.into());
                    }
                    println!("{}", hbc::xi_inverse(m, &q)?);
                    Ok(0)
                }
                HbcAction::Present => {
                    let h = higher_presentation(&s, m)?;
                    println!("{h}");
                    let x = XiCode::new(s, m)?;
                    for b in x.sample_blocks(12) {
                        println!("letter {}", block(&b));
                    }
                    Ok(0)
                }
                HbcAction::CheckCorollaries => {
                    let sup = check_hbc_corollary_sup(&s, m, &mut rng)?;
                    let rf = check_hbc_corollary_rowfinite(&s, m, c.budget, &mut rng)?;
                    let sup_txt = sup.sup_len_lt_m.map_or("unknown".to_string(), |b| b.to_string());
                    println!("sup_len_lt_m = {sup_txt}");
                    println!("lambda_star_fin_trivial = {}", sup.lambda_star_fin_trivial);
                    println!("inverse_is_sbc = {}", sup.inverse_is_sbc);
                    println!("row_finite = {}", rf.row_finite);
                    println!("injective_on_samples = {}", rf.injective_on_samples);
                    println!("roundtrip_ok = {}", rf.roundtrip_ok);
                    if let Some((x, y)) = &rf.collision {
                        println!("collision = {x} {y}");
                    }
                    let rf_ok = if m == 1 { rf.injective_on_samples } else { rf.equivalence_holds() };
                    Ok(if sup.agree() && rf_ok { 0 } else { EXIT_FAIL })
                }
            }
        }
        Cmd::Falsify { code, inverse } => {
            let (code, spec) = load_code(&code)?;
            let cands = falsifier_candidates(&code.domain, c.budget, c.depth, &mut rng);
            let (f, cands) = if inverse {
                let Some(CodeSpec::Gallery { id, .. }) = &spec else {
                    return Err(Failure::Usage("--inverse needs a gallery code".into()));
                };
                let case = gallery::build_with(id, gallery_params(&spec))?;
                let inv = case.inverse.ok_or_else(|| Failure::Usage(format!("gallery:{id} has no inverse")))?;
                let mut imgs: Vec<Point> = cands.iter().filter_map(|p| code.apply(p).ok()).collect();
                imgs.sort();
                imgs.dedup();
                (inv, imgs)
            } else {
                let k = code.clone();
                (BlackBox::new(code.name.clone(), move |p| k.apply(p)), cands)
            };
            match falsify_sliding_block(&f, &cands, c.depth, 2 * c.depth + 4) {
                Some(w) => {
                    println!("witness at coordinate {}", w.n);
                    println!("p = {}", w.p);
                    println!("q = {}", w.q);
                    println!("f(p) = {}", f.call(&w.p)?);
                    println!("f(q) = {}", f.call(&w.q)?);
                    Ok(EXIT_FAIL)
                }
                None => {
                    println!("no witness among {} candidates at depth {}", cands.len(), c.depth);
                    Ok(0)
                }
            }
        }
        Cmd::Gallery { cmd: GalleryCmd::Run { case } } => {
            let ids: Vec<&str> = case.iter().map(String::as_str).collect();
            let budget = GalleryBudget { samples: c.budget, depth: c.depth, ..GalleryBudget::default() };
            let report = gallery::run_all(&ids, Params::default(), budget, c.seed)?;
            print!("{report}");
            Ok(if report.all_ok() { 0 } else { EXIT_FAIL })
        }
    }
}

fn block(b: &[i64]) -> String {
    format!("[{}]", b.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(","))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("cshift: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("cshift: {e}");
            ExitCode::from(match e {
                Error::FuelExhausted(_) | Error::HypothesisNotMet(_) => EXIT_UNKNOWN,
                _ => EXIT_USAGE,
            })
        }
    }
}
