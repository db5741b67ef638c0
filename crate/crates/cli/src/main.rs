mod cache;

use anyhow::{bail, Context, Result};
use cache::{Cache, Outcome};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use vermaforge::exact::{parse_rational, Rational};
use vermaforge::glmod::{jantzen, GlContext, GramTower};
use vermaforge::identities::{self, IdentityId};
use vermaforge::report::{rational_string, VerificationReport};
use vermaforge::ulambda::{mono_label, verify_eq29, AlgebraKind, GvmContext, GvmParams};
use vermaforge::young::{enumerate, Diagram, DiagramFilter};

#[derive(Parser, Debug)]
#[command(name = "vermaforge", version, about = "Exact Shapovalov determinants, Jantzen filtrations and q-series identities")]
struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Cache directory; falls back to $VERMAFORGE_CACHE, otherwise no cache
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Tsv,
}

fn rational(s: &str) -> std::result::Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn identity(s: &str) -> std::result::Result<IdentityId, String> {
    IdentityId::parse(s).map_err(|e| e.to_string())
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Verify one identity, e.g. `euler10` or `layer22(k=1,l=1)`
    Verify {
        #[arg(value_parser = identity)]
        id: IdentityId,
        #[arg(long)]
        order: usize,
    },
    /// Verify every identity in a manifest (the built-in one by default)
    VerifyAll {
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
    /// Shapovalov determinant of a level of the induced gl(2n)-module
    Shapovalov {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        level: usize,
        /// Include the full Gram matrix
        #[arg(long)]
        matrix: bool,
    },
    /// Det-monomial singular vectors at a given central charge
    Singular {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = rational, allow_hyphen_values = true)]
        mu: Rational,
        #[arg(long, default_value_t = 9)]
        max_level: u32,
    },
    /// Jantzen filtration data at mu = a
    Jantzen {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = rational, allow_hyphen_values = true)]
        a: Rational,
        #[arg(long)]
        max_level: usize,
    },
    /// Gram matrix of a generalized Verma module over gl(lambda) or a leaf algebra
    Gvm {
        #[arg(long)]
        algebra: String,
        #[arg(long, value_parser = rational, allow_hyphen_values = true)]
        lambda: Option<Rational>,
        #[arg(long, value_parser = rational, allow_hyphen_values = true)]
        beta: Option<Rational>,
        #[arg(long = "chi-h", value_parser = rational, allow_hyphen_values = true)]
        chi_h: Option<Rational>,
        #[arg(long)]
        level: usize,
    },
    /// Level-by-level check of the determinant factorization through the band realization
    Eq29 {
        #[arg(long, value_parser = rational, allow_hyphen_values = true)]
        s: Rational,
        #[arg(long, value_parser = rational, allow_hyphen_values = true)]
        lambda: Rational,
        #[arg(long)]
        level: usize,
        /// rank of gl(2n) used for the gl_infinity determinant, default `level`
        #[arg(long)]
        n: Option<usize>,
    },
}

fn opt(r: &Option<Rational>) -> String {
    r.as_ref().map(rational_string).unwrap_or_else(|| "symbolic".into())
}

impl Command {
    /// Canonical description used as the cache key.
    fn key_parts(&self, format: Format) -> Result<Vec<(String, String)>> {
        let p = |k: &str, v: String| (k.to_string(), v);
        let mut parts = match self {
            Command::Verify { id, order } => vec![p("cmd", "verify".into()), p("id", id.to_string()), p("order", order.to_string())],
            Command::VerifyAll { manifest } => {
                let text = match manifest {
                    Some(f) => std::fs::read_to_string(f).with_context(|| format!("reading {}", f.display()))?,
                    None => identities::manifest_json(&identities::default_manifest()).to_string(),
                };
                vec![p("cmd", "verify-all".into()), p("manifest", text)]
            }
            Command::Shapovalov { n, level, matrix } => vec![
                p("cmd", "shapovalov".into()),
                p("n", n.to_string()),
                p("level", level.to_string()),
                p("matrix", matrix.to_string()),
            ],
            Command::Singular { n, mu, max_level } => vec![
                p("cmd", "singular".into()),
                p("n", n.to_string()),
                p("mu", rational_string(mu)),
                p("max_level", max_level.to_string()),
            ],
            Command::Jantzen { n, a, max_level } => vec![
                p("cmd", "jantzen".into()),
                p("n", n.to_string()),
                p("a", rational_string(a)),
                p("max_level", max_level.to_string()),
            ],
            Command::Gvm { algebra, lambda, beta, chi_h, level } => vec![
                p("cmd", "gvm".into()),
                p("algebra", algebra.clone()),
                p("lambda", opt(lambda)),
                p("beta", opt(beta)),
                p("chi_h", opt(chi_h)),
                p("level", level.to_string()),
            ],
            Command::Eq29 { s, lambda, level, n } => vec![
                p("cmd", "eq29".into()),
                p("s", rational_string(s)),
                p("lambda", rational_string(lambda)),
                p("level", level.to_string()),
                p("n", n.unwrap_or(*level).to_string()),
            ],
        };
        parts.push(p("format", format!("{format:?}")));
        Ok(parts)
    }
}

fn json_line(v: &Value) -> Vec<u8> {
    let mut s = v.to_string();
    s.push('\n');
    s.into_bytes()
}

fn reports_outcome(reports: &[VerificationReport], format: Format, headed: bool) -> Outcome {
    let pass = reports.iter().all(|r| r.pass());
    let output = match format {
        Format::Json => json_line(&json!({ "results": reports.iter().map(|r| r.to_json()).collect::<Vec<_>>() })),
        Format::Tsv => {
            let mut s = String::new();
            for r in reports {
                if headed {
                    let params: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
                    s.push_str(&format!("# {} {} order={} pass={}\n", r.id, params.join(","), r.order, r.pass()));
                }
                s.push_str(&r.to_tsv());
            }
            s.into_bytes()
        }
    };
    Outcome { code: if pass { 0 } else { 1 }, output }
}

fn vector_name(d: &Diagram) -> String {
    let mut parts: Vec<String> = d
        .blocks()
        .iter()
        .rev()
        .map(|(i, l)| if *l == 1 { format!("Det_{i}") } else { format!("Det_{i}^{l}") })
        .collect();
    parts.push("v".into());
    parts.join("·")
}

fn run(cmd: &Command, format: Format) -> Result<Outcome> {
    match cmd {
        Command::Verify { id, order } => {
            let r = identities::verify(id, *order)?;
            Ok(reports_outcome(&[r], format, false))
        }
        Command::VerifyAll { manifest } => {
            let m = match manifest {
                Some(f) => identities::parse_manifest(
                    &std::fs::read_to_string(f).with_context(|| format!("reading {}", f.display()))?,
                )?,
                None => identities::default_manifest(),
            };
            let reports = identities::verify_all(&m)?;
            Ok(reports_outcome(&reports, format, true))
        }
        Command::Shapovalov { n, level, matrix } => {
            if *n == 0 {
                bail!("n must be at least 1");
            }
            let report = GramTower::new(GlContext::new(*n)).report(*level, *matrix)?;
            let output = match format {
                Format::Json => json_line(&report.to_json()),
                Format::Tsv => {
                    let mut s = format!("# det {}\nmu\tmult\n", report.det_factored);
                    for (r, m) in &report.roots {
                        s.push_str(&format!("{}\t{m}\n", rational_string(r)));
                    }
                    s.into_bytes()
                }
            };
            Ok(Outcome { code: 0, output })
        }
        Command::Singular { n, mu, max_level } => {
            if *n == 0 {
                bail!("n must be at least 1");
            }
            let ctx = GlContext::new(*n);
            let mut found = Vec::new();
            for d in enumerate(*max_level, &DiagramFilter::tail_at_most(*n as u32 + 1, 0)) {
                if d.size() == 0 {
                    continue;
                }
                if ctx.is_singular(&ctx.diagram_element(&d)?, Some(mu)) {
                    found.push(d);
                }
            }
            let output = match format {
                Format::Json => json_line(&json!({
                    "n": n,
                    "mu": rational_string(mu),
                    "max_level": max_level,
                    "singular": found.iter().map(|d| json!({
                        "vector": vector_name(d),
                        "level": d.weight(),
                        "diagram": d.to_json(),
                    })).collect::<Vec<_>>(),
                })),
                Format::Tsv => {
                    let mut s = String::from("vector\tlevel\n");
                    for d in &found {
                        s.push_str(&format!("{}\t{}\n", vector_name(d), d.weight()));
                    }
                    s.into_bytes()
                }
            };
            Ok(Outcome { code: 0, output })
        }
        Command::Jantzen { n, a, max_level } => {
            if *n == 0 {
                bail!("n must be at least 1");
            }
            let levels = jantzen(&GlContext::new(*n), a, *max_level)?;
            let ok = levels.iter().all(|l| l.consistent());
            let output = match format {
                Format::Json => json_line(&json!({
                    "n": n,
                    "a": rational_string(a),
                    "levels": levels.iter().map(|l| l.to_json()).collect::<Vec<_>>(),
                    "consistent": ok,
                })),
                Format::Tsv => {
                    let mut s = String::from("level\tsmith_dims\tlemma14_dims\tdet_multiplicity\tconsistent\n");
                    let list = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
                    for l in &levels {
                        s.push_str(&format!(
                            "{}\t{}\t{}\t{}\t{}\n",
                            l.level,
                            list(&l.smith_dims),
                            list(&l.lemma14_dims),
                            l.det_multiplicity,
                            l.consistent()
                        ));
                    }
                    s.into_bytes()
                }
            };
            Ok(Outcome { code: if ok { 0 } else { 1 }, output })
        }
        Command::Gvm { algebra, lambda, beta, chi_h, level } => {
            let kind = AlgebraKind::parse(algebra)?;
            let mut p = GvmParams::new(kind).max_level(*level);
            if let Some(l) = lambda {
                p = p.lambda(l.clone());
            }
            if let Some(b) = beta {
                p = p.beta(b.clone());
            }
            if let Some(c) = chi_h {
                p = p.chi_h(c.clone());
            }
            let gram = GvmContext::new(&p)?.gram(*level)?;
            let symmetric = gram.is_symmetric();
            let output = match format {
                Format::Json => {
                    let mut v = gram.to_json();
                    v["symmetric"] = Value::from(symmetric);
                    json_line(&v)
                }
                Format::Tsv => {
                    let mut s = format!("# det {}\n", gram.det);
                    let labels: Vec<String> = gram.basis.iter().map(|m| mono_label(m)).collect();
                    s.push_str(&format!("basis\t{}\n", labels.join("\t")));
                    for (label, row) in labels.iter().zip(&gram.matrix) {
                        let cells: Vec<String> = row.iter().map(|c| c.to_string()).collect();
                        s.push_str(&format!("{label}\t{}\n", cells.join("\t")));
                    }
                    s.into_bytes()
                }
            };
            Ok(Outcome { code: if symmetric { 0 } else { 1 }, output })
        }
        Command::Eq29 { s, lambda, level, n } => {
            let r = verify_eq29(n.unwrap_or(*level), *level, s, lambda)?;
            Ok(reports_outcome(&[r], format, false))
        }
    }
}

fn execute(cli: &Cli) -> Result<Outcome> {
    let dir = cli
        .cache_dir
        .clone()
        .or_else(|| std::env::var_os("VERMAFORGE_CACHE").filter(|v| !v.is_empty()).map(PathBuf::from));
    let Some(dir) = dir else {
        return run(&cli.command, cli.format);
    };
    let cache = Cache::open(&dir)?;
    let key = cache::key(&cli.command.key_parts(cli.format)?);
    if let Some(hit) = cache.get(&key) {
        return Ok(hit);
    }
    let out = run(&cli.command, cli.format)?;
    cache.put(&key, &out)?;
    Ok(out)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match execute(&cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(&out.output).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(2);
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
