//! Command-line front end for the `ualg` library.
//!
//! Exit codes are stable across runs: 0 for success (proved / member / no
//! violations), 1 for usage or input errors, 2 for inconclusive results
//! (unknown verdicts, empty bounded searches), 3 for negative results
//! (refuted / not a member / violations found).

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use ualg::algebra::{Assignment, FiniteAlgebra};
use ualg::congruence::DEFAULT_CONGRUENCE_LIMIT;
use ualg::maltsev::{
    build_chain_terms, check_theorem_hypotheses, classify_polarization, find_polar_terms,
    h_closure_probe, member, search_fg, sigma_w, verify_chain, ChainInstance, PolarizationClass,
    DEFAULT_FG_BOUND, DEFAULT_SIGMA_BOUND,
};
use ualg::replica::{class_structure, replica_congruence};
use ualg::term::{parse_identity, parse_term, Signature};
use ualg::variety::{CatalogTag, VarietySpec, Verdict, DEFAULT_MODEL_BOUND, DEFAULT_TERM_BOUND};

const EXIT_OK: u8 = 0;
const EXIT_USAGE: u8 = 1;
const EXIT_UNKNOWN: u8 = 2;
const EXIT_NEGATIVE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "ualg",
    about = "Finite algebras, varieties and Mal'tsev products",
    version,
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct VarietyArg {
    /// Catalog tag (S, LZ, RZ, RB, RS, CS, C2…, U0…, GRP, TRIV) or a `.var`
    /// file path.
    #[arg(long)]
    variety: String,
}

#[derive(Args)]
struct ProductArgs {
    /// Inner variety V of the product V ∘ W: catalog tag or `.var` path.
    #[arg(long)]
    inner: String,
    /// Outer variety W of the product V ∘ W: catalog tag or `.var` path.
    #[arg(long)]
    outer: String,
}

#[derive(Subcommand)]
enum Command {
    /// Decide an identity in a variety.
    CheckId {
        #[command(flatten)]
        variety: VarietyArg,
        /// Countermodel size bound for searches.
        #[arg(long, default_value_t = DEFAULT_MODEL_BOUND)]
        model_bound: usize,
        #[arg(long)]
        json: bool,
        /// The identity, e.g. "mul(x,y) = mul(y,x)".
        identity: String,
    },
    /// Print the catalog normal form of a term.
    Nf {
        #[command(flatten)]
        variety: VarietyArg,
        #[arg(long)]
        json: bool,
        term: String,
    },
    /// Check whether a term is a term idempotent of a variety.
    Idem {
        #[command(flatten)]
        variety: VarietyArg,
        #[arg(long, default_value_t = DEFAULT_MODEL_BOUND)]
        model_bound: usize,
        #[arg(long)]
        json: bool,
        term: String,
    },
    /// Compute the replica congruence of an algebra.
    Replica {
        /// Path to a `.alg` file.
        #[arg(long)]
        algebra: PathBuf,
        #[command(flatten)]
        variety: VarietyArg,
        #[arg(long)]
        json: bool,
    },
    /// Replica class structure: per-block subalgebra and singleton flags.
    Classes {
        #[arg(long)]
        algebra: PathBuf,
        #[command(flatten)]
        variety: VarietyArg,
        #[arg(long)]
        json: bool,
    },
    /// Decide membership of an algebra in a Mal'tsev product.
    Member {
        #[arg(long)]
        algebra: PathBuf,
        #[command(flatten)]
        product: ProductArgs,
        #[arg(long)]
        json: bool,
    },
    /// Check every quotient of an algebra for membership in a product.
    Hprobe {
        #[arg(long)]
        algebra: PathBuf,
        #[command(flatten)]
        product: ProductArgs,
        /// Largest universe for which the congruence lattice is enumerated.
        #[arg(long, default_value_t = DEFAULT_CONGRUENCE_LIMIT)]
        congruence_limit: usize,
        #[arg(long)]
        json: bool,
    },
    /// Generate the identities Σ^W from the inner base, up to a size budget.
    SigmaW {
        #[command(flatten)]
        product: ProductArgs,
        /// Total size budget for each substituted tuple.
        #[arg(long, default_value_t = DEFAULT_SIGMA_BOUND)]
        term_bound: usize,
        #[arg(long)]
        json: bool,
    },
    /// Check the variety-condition hypotheses for witness terms f and g.
    Hypotheses {
        #[command(flatten)]
        product: ProductArgs,
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        #[arg(long)]
        json: bool,
    },
    /// Search for witness pairs (f, g) with all hypotheses proved.
    FindFg {
        #[command(flatten)]
        product: ProductArgs,
        /// Per-term size bound for the candidates.
        #[arg(long, default_value_t = DEFAULT_FG_BOUND)]
        term_bound: usize,
        #[arg(long)]
        json: bool,
    },
    /// Build and verify chain terms from witness terms and identities.
    Chain {
        /// Outer variety W: catalog tag or `.var` path.
        #[arg(long)]
        outer: String,
        /// Inner variety V, recorded in the report.
        #[arg(long)]
        inner: Option<String>,
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        /// A chain identity "p = q"; repeatable, in order.
        #[arg(long = "identity", value_name = "IDENTITY")]
        identities: Vec<String>,
        /// Optional algebra for the element-level check.
        #[arg(long, requires = "elements", requires = "assign")]
        algebra: Option<PathBuf>,
        /// Comma-separated chain elements a_1,…,a_n (names or indices).
        #[arg(long)]
        elements: Option<String>,
        /// Comma-separated assignment var=element covering all link
        /// variables, e.g. "z1_1=a,z1_2=b".
        #[arg(long)]
        assign: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// List polar terms of a variety up to a size bound.
    Polar {
        #[command(flatten)]
        variety: VarietyArg,
        #[arg(long, default_value_t = DEFAULT_TERM_BOUND)]
        term_bound: usize,
        #[arg(long)]
        json: bool,
    },
    /// Classify the polarization of a variety.
    Classify {
        #[command(flatten)]
        variety: VarietyArg,
        #[arg(long, default_value_t = DEFAULT_TERM_BOUND)]
        term_bound: usize,
        #[arg(long)]
        json: bool,
    },
    /// Write the bundled example files: the four-element groupoid and the
    /// catalog varieties.
    Examples {
        /// Target directory (created if missing).
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

fn main() -> ExitCode {
    // Die quietly when the consumer closes the pipe, as line tools should.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are not errors.
            use clap::error::ErrorKind;
            let kind = e.kind();
            let _ = e.print();
            return if matches!(kind, ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                ExitCode::from(EXIT_OK)
            } else {
                ExitCode::from(EXIT_USAGE)
            };
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn run(cli: Cli) -> Result<u8, String> {
    match cli.command {
        Command::CheckId {
            variety,
            model_bound,
            json,
            identity,
        } => {
            let spec = load_variety(&variety.variety)?;
            let id = parse_identity(&identity, spec.signature()).map_err(|e| e.to_string())?;
            let verdict = spec
                .decide_bounded(&id.lhs, &id.rhs, model_bound)
                .map_err(|e| e.to_string())?;
            if json {
                print_json(&json!({
                    "variety": spec.name(),
                    "identity": id,
                    "verdict": verdict,
                }))?;
            } else {
                println!("{} ⊨ {} : {}", spec.name(), id, verdict);
            }
            Ok(verdict_code(&verdict))
        }
        Command::Nf {
            variety,
            json,
            term,
        } => {
            let spec = load_variety(&variety.variety)?;
            let t = parse_term(&term, spec.signature()).map_err(|e| e.to_string())?;
            let nf = spec.normal_form(&t).map_err(|e| e.to_string())?;
            if json {
                print_json(&json!({
                    "variety": spec.name(),
                    "term": t,
                    "normal_form": nf,
                }))?;
            } else {
                println!("{nf}");
            }
            Ok(EXIT_OK)
        }
        Command::Idem {
            variety,
            model_bound,
            json,
            term,
        } => {
            let spec = load_variety(&variety.variety)?;
            let t = parse_term(&term, spec.signature()).map_err(|e| e.to_string())?;
            let verdict = spec
                .is_term_idempotent_bounded(&t, model_bound)
                .map_err(|e| e.to_string())?;
            if json {
                print_json(&json!({
                    "variety": spec.name(),
                    "term": t,
                    "verdict": verdict,
                }))?;
            } else {
                println!("{} term idempotent of {} : {}", t, spec.name(), verdict);
            }
            Ok(verdict_code(&verdict))
        }
        Command::Replica {
            algebra,
            variety,
            json,
        } => {
            let alg = load_algebra(&algebra)?;
            let spec = load_variety(&variety.variety)?;
            let rho = replica_congruence(&alg, &spec).map_err(|e| e.to_string())?;
            if json {
                print_json(&json!({
                    "algebra": alg.name(),
                    "variety": spec.name(),
                    "replica": rho,
                }))?;
            } else {
                let names: Option<Vec<String>> = alg.element_names().map(|n| n.to_vec());
                println!("{}", rho.render(names.as_deref()));
            }
            Ok(EXIT_OK)
        }
        Command::Classes {
            algebra,
            variety,
            json,
        } => {
            let alg = load_algebra(&algebra)?;
            let spec = load_variety(&variety.variety)?;
            let report = class_structure(&alg, &spec).map_err(|e| e.to_string())?;
            if json {
                print_json(&report)?;
            } else {
                print!("{}", report.render(&alg));
            }
            Ok(EXIT_OK)
        }
        Command::Member {
            algebra,
            product,
            json,
        } => {
            let alg = load_algebra(&algebra)?;
            let (inner, outer) = load_product(&product)?;
            let report = member(&alg, &inner, &outer).map_err(|e| e.to_string())?;
            if json {
                print_json(&report)?;
            } else {
                print!("{report}");
            }
            Ok(if report.is_member() {
                EXIT_OK
            } else {
                EXIT_NEGATIVE
            })
        }
        Command::Hprobe {
            algebra,
            product,
            congruence_limit,
            json,
        } => {
            let alg = load_algebra(&algebra)?;
            let (inner, outer) = load_product(&product)?;
            let report = h_closure_probe(&alg, &inner, &outer, congruence_limit)
                .map_err(|e| e.to_string())?;
            if json {
                print_json(&report)?;
            } else {
                print!("{report}");
            }
            Ok(if report.has_violations() {
                EXIT_NEGATIVE
            } else {
                EXIT_OK
            })
        }
        Command::SigmaW {
            product,
            term_bound,
            json,
        } => {
            let (inner, outer) = load_product(&product)?;
            let report = sigma_w(inner.base(), &outer, term_bound).map_err(|e| e.to_string())?;
            if json {
                print_json(&report)?;
            } else {
                print!("{report}");
            }
            Ok(EXIT_OK)
        }
        Command::Hypotheses {
            product,
            f,
            g,
            json,
        } => {
            let (inner, outer) = load_product(&product)?;
            let f = parse_term(&f, inner.signature()).map_err(|e| e.to_string())?;
            let g = parse_term(&g, inner.signature()).map_err(|e| e.to_string())?;
            let report =
                check_theorem_hypotheses(&inner, &outer, &f, &g).map_err(|e| e.to_string())?;
            if json {
                print_json(&report)?;
            } else {
                print!("{report}");
            }
            Ok(if report.all_proved {
                EXIT_OK
            } else if report.any_refuted() {
                EXIT_NEGATIVE
            } else {
                EXIT_UNKNOWN
            })
        }
        Command::FindFg {
            product,
            term_bound,
            json,
        } => {
            let (inner, outer) = load_product(&product)?;
            let found = search_fg(&inner, &outer, term_bound).map_err(|e| e.to_string())?;
            if json {
                print_json(&found)?;
            } else {
                println!(
                    "{} witness pair(s) with all conditions proved (terms up to size {}):",
                    found.len(),
                    term_bound
                );
                for candidate in &found {
                    println!("  f = {}, g = {}", candidate.f, candidate.g);
                }
            }
            Ok(if found.is_empty() {
                EXIT_UNKNOWN
            } else {
                EXIT_OK
            })
        }
        Command::Chain {
            outer,
            inner,
            f,
            g,
            identities,
            algebra,
            elements,
            assign,
            json,
        } => {
            let outer = load_variety(&outer)?;
            let inner = match inner {
                Some(name) => Some(load_variety(&name)?),
                None => None,
            };
            let sig = outer.signature().clone();
            let f = parse_term(&f, &sig).map_err(|e| e.to_string())?;
            let g = parse_term(&g, &sig).map_err(|e| e.to_string())?;
            let mut links = Vec::new();
            for text in &identities {
                links.push(parse_identity(text, &sig).map_err(|e| e.to_string())?);
            }
            let data = build_chain_terms(&f, &g, &links).map_err(|e| e.to_string())?;
            let instance = match algebra {
                Some(path) => {
                    let alg = load_algebra(&path)?;
                    let elements = parse_elements(&alg, elements.as_deref().unwrap_or(""))?;
                    let assignment = parse_assignment(&alg, assign.as_deref().unwrap_or(""))?;
                    Some(ChainInstance {
                        algebra: alg,
                        elements,
                        assignment,
                    })
                }
                None => None,
            };
            let report = verify_chain(&outer, inner.as_ref(), &data, instance.as_ref())
                .map_err(|e| e.to_string())?;
            if json {
                print_json(&json!({
                    "terms": data.terms,
                    "links": data.links,
                    "report": report,
                }))?;
            } else {
                for (i, t) in data.terms.iter().enumerate() {
                    println!("t_{} = {}", i + 1, t);
                }
                print!("{report}");
            }
            Ok(if report.passed {
                EXIT_OK
            } else if report
                .link_checks
                .iter()
                .chain(&report.equivalences)
                .any(|c| c.verdict.is_unknown())
            {
                EXIT_UNKNOWN
            } else {
                EXIT_NEGATIVE
            })
        }
        Command::Polar {
            variety,
            term_bound,
            json,
        } => {
            let spec = load_variety(&variety.variety)?;
            let found = find_polar_terms(&spec, term_bound).map_err(|e| e.to_string())?;
            if json {
                print_json(&json!({
                    "variety": spec.name(),
                    "term_bound": term_bound,
                    "polar_terms": found,
                }))?;
            } else {
                println!(
                    "{} polar term(s) of {} up to size {}:",
                    found.len(),
                    spec.name(),
                    term_bound
                );
                for t in &found {
                    println!("  {t}");
                }
            }
            Ok(if found.is_empty() {
                EXIT_UNKNOWN
            } else {
                EXIT_OK
            })
        }
        Command::Classify {
            variety,
            term_bound,
            json,
        } => {
            let spec = load_variety(&variety.variety)?;
            let report = classify_polarization(&spec, term_bound).map_err(|e| e.to_string())?;
            if json {
                print_json(&report)?;
            } else {
                print!("{report}");
            }
            Ok(match report.classification {
                PolarizationClass::Unknown => EXIT_UNKNOWN,
                _ => EXIT_OK,
            })
        }
        Command::Examples { out_dir, json } => {
            let written = write_examples(&out_dir)?;
            if json {
                print_json(&written)?;
            } else {
                for path in &written {
                    println!("wrote {}", path.display());
                }
            }
            Ok(EXIT_OK)
        }
    }
}

fn verdict_code(verdict: &Verdict) -> u8 {
    match verdict {
        Verdict::Proved(_) => EXIT_OK,
        Verdict::Refuted(_) => EXIT_NEGATIVE,
        Verdict::Unknown(_) => EXIT_UNKNOWN,
    }
}

fn print_json<T: serde::Serialize>(value: &T) -> Result<(), String> {
    let text = serde_json::to_string_pretty(value).map_err(|e| e.to_string())?;
    println!("{text}");
    Ok(())
}

fn load_algebra(path: &Path) -> Result<FiniteAlgebra, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    FiniteAlgebra::from_alg_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

/// Resolves a variety argument: an existing file is parsed as `.var`,
/// anything else as a catalog tag.
fn load_variety(arg: &str) -> Result<VarietySpec, String> {
    let path = Path::new(arg);
    if path.exists() {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        return VarietySpec::from_var_str(&text).map_err(|e| format!("{}: {e}", path.display()));
    }
    let tag = CatalogTag::parse(arg).map_err(|e| {
        format!("`{arg}` is neither an existing `.var` file nor a catalog tag ({e})")
    })?;
    match tag.fixed_signature() {
        Some(_) => VarietySpec::catalog(tag).map_err(|e| e.to_string()),
        // Tags without a fixed signature default to the groupoid type on
        // the command line; use a `.var` file for other signatures.
        None => VarietySpec::catalog_over(tag, Signature::groupoid()).map_err(|e| e.to_string()),
    }
}

fn load_product(product: &ProductArgs) -> Result<(VarietySpec, VarietySpec), String> {
    Ok((load_variety(&product.inner)?, load_variety(&product.outer)?))
}

fn parse_elements(algebra: &FiniteAlgebra, text: &str) -> Result<Vec<usize>, String> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|label| {
            let label = label.trim();
            algebra
                .element_index(label)
                .ok_or_else(|| format!("unknown element `{label}`"))
        })
        .collect()
}

fn parse_assignment(algebra: &FiniteAlgebra, text: &str) -> Result<Assignment, String> {
    let mut assignment = Assignment::new();
    for part in text.split(',').filter(|s| !s.trim().is_empty()) {
        let (var, label) = part
            .split_once('=')
            .ok_or_else(|| format!("expected var=element, got `{part}`"))?;
        let value = algebra
            .element_index(label.trim())
            .ok_or_else(|| format!("unknown element `{}`", label.trim()))?;
        assignment.insert(var.trim().to_string(), value);
    }
    Ok(assignment)
}

/// The example algebra bundled with the tool: a four-element groupoid that
/// is a member of CS ∘ S while one of its quotients is not.
const EXAMPLE_ALGEBRA: &str = include_str!("../data/paper_A.alg");

fn write_examples(out_dir: &Path) -> Result<Vec<PathBuf>, String> {
    std::fs::create_dir_all(out_dir)
        .map_err(|e| format!("cannot create {}: {e}", out_dir.display()))?;
    let mut written = Vec::new();

    let alg_path = out_dir.join("paper_A.alg");
    std::fs::write(&alg_path, EXAMPLE_ALGEBRA)
        .map_err(|e| format!("cannot write {}: {e}", alg_path.display()))?;
    written.push(alg_path);

    let tags = [
        CatalogTag::Semilattice,
        CatalogTag::LeftZero,
        CatalogTag::RightZero,
        CatalogTag::RectangularBand,
        CatalogTag::RectangularSemigroup,
        CatalogTag::ConstantSemigroup,
        CatalogTag::ConstantProducts(2),
        CatalogTag::ConstantProducts(3),
        CatalogTag::Unary(0),
        CatalogTag::Unary(1),
        CatalogTag::Unary(2),
        CatalogTag::Group,
    ];
    for tag in tags {
        let spec = VarietySpec::catalog(tag).map_err(|e| e.to_string())?;
        let path = out_dir.join(format!("{}.var", tag.as_str()));
        std::fs::write(&path, spec.to_var_string())
            .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
        written.push(path);
    }

    let triv = VarietySpec::catalog_over(CatalogTag::Trivial, Signature::groupoid())
        .map_err(|e| e.to_string())?;
    let path = out_dir.join("TRIV.var");
    std::fs::write(&path, triv.to_var_string()).map_err(|e| e.to_string())?;
    written.push(path);

    // The groupoid variety where all squares act as two-sided units; the
    // running example of an inner factor with binary witness terms.
    let sig = Signature::groupoid();
    let squ = VarietySpec::generic(
        "SQU",
        sig.clone(),
        vec![
            parse_identity("mul(mul(x,x),y) = y", &sig).unwrap(),
            parse_identity("mul(y,mul(x,x)) = y", &sig).unwrap(),
        ],
    )
    .map_err(|e| e.to_string())?;
    let path = out_dir.join("SQU.var");
    std::fs::write(&path, squ.to_var_string()).map_err(|e| e.to_string())?;
    written.push(path);

    Ok(written)
}
