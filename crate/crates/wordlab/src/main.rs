//! Command-line front end: generators, checkers, bounded searches, censuses
//! and the conjecture-probe registry.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use wordlab::abelian::{self, PowerKind};
use wordlab::complexity;
use wordlab::error::Error;
use wordlab::factorizations::{dfa::Dfa, equations, ffact, pcp, quasi, xfact};
use wordlab::morphism::{classics, Morphism};
use wordlab::patterns::{self, Pattern};
use wordlab::probes;
use wordlab::repetitions;
use wordlab::search::SearchBudget;
use wordlab::word::{rational_string, parse_word_file, Rational, Word};

#[derive(Parser)]
#[command(name = "wordlab", version, about = "Combinatorics-on-words workbench")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads (all current operations are single-threaded; values
    /// above 1 are accepted and recorded in reports).
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Seed for randomized stress operations.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Node budget for searches; accepts plain or scientific form (1e8).
    #[arg(long, global = true, value_parser = parse_count)]
    max_nodes: Option<u64>,
    /// Wall-clock budget in seconds for searches.
    #[arg(long, global = true)]
    max_seconds: Option<f64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Tsv,
    Text,
}

fn parse_count(s: &str) -> Result<u64, String> {
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    let v: f64 = s.parse().map_err(|_| format!("not a count: {s}"))?;
    if v < 0.0 || !v.is_finite() || v > u64::MAX as f64 {
        return Err(format!("not a count: {s}"));
    }
    Ok(v as u64)
}

#[derive(Subcommand)]
enum Cmd {
    /// Emit the length-n prefix of a classic word.
    Generate {
        /// thue_morse | fibonacci | thue_ternary | makela | zimin:k | sturmian:d1,d2,...
        #[arg(long)]
        name: String,
        #[arg(long)]
        length: usize,
    },
    /// Period, exponent, square and run measurements of one word.
    Repeats {
        #[arg(long, value_enum)]
        op: RepeatsOp,
        #[arg(long)]
        word: String,
    },
    /// Longest words avoiding a pattern; optional circular-length scan.
    Avoid {
        #[arg(long)]
        pattern: String,
        #[arg(long)]
        alphabet: usize,
        #[arg(long, default_value_t = 100)]
        max_len: usize,
        /// Scan circular words up to this length instead of searching.
        #[arg(long)]
        circular_max: Option<usize>,
    },
    /// Abelian and k-abelian operations.
    Abelian {
        #[command(subcommand)]
        cmd: AbelianCmd,
    },
    /// Complexity measures of prefix-oracle words.
    Complexity {
        /// thue_morse | fibonacci | thue_ternary | makela | sturmian:d1,...
        #[arg(long)]
        oracle: String,
        #[arg(long, value_enum)]
        measure: Measure,
        #[arg(long, default_value_t = 50)]
        n_max: usize,
        #[arg(long, default_value_t = 100_000)]
        horizon: usize,
        /// Factor length for the Rauzy graph measure.
        #[arg(long, default_value_t = 3)]
        n: usize,
    },
    /// F-factorizations, quasiperiods, disjointness and rank.
    Factorize {
        #[command(subcommand)]
        cmd: FactorizeCmd,
    },
    /// Solve word-equation systems by bounded enumeration.
    Equations {
        /// Equation such as "xy=yx"; repeatable.
        #[arg(long = "eq", required = true)]
        eqs: Vec<String>,
        #[arg(long, default_value_t = 2)]
        alphabet: usize,
        #[arg(long, default_value_t = 3)]
        max_len: usize,
        #[arg(long, default_value_t = 10_000)]
        max_solutions: usize,
    },
    /// Bounded Post correspondence search and instance properties.
    Pcp {
        /// First morphism, e.g. "a->ab;b->a".
        #[arg(long)]
        h: String,
        /// Second morphism.
        #[arg(long)]
        g: String,
        /// Also report marked / unique-continuation structure.
        #[arg(long)]
        properties: bool,
        /// Index-word bound for the continuation check.
        #[arg(long, default_value_t = 6)]
        bound: usize,
    },
    /// Per-length counts or extremes from a JSON config file.
    Census {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run a registered conjecture probe.
    Probe {
        #[arg(long)]
        id: Option<String>,
        /// List registered probe ids.
        #[arg(long)]
        list: bool,
        /// Override a probe default, key=value; repeatable.
        #[arg(long = "set")]
        set: Vec<String>,
        /// Write the JSON report here as well.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum RepeatsOp {
    Period,
    Maxexp,
    Squares,
    Runs,
    Density,
}

#[derive(Clone, Copy, ValueEnum)]
enum Measure {
    Factor,
    Palindrome,
    Recurrence,
    Balance,
    Rauzy,
}

#[derive(Subcommand)]
enum AbelianCmd {
    /// k-abelian equivalence of two words.
    Equiv {
        #[arg(long)]
        u: String,
        #[arg(long)]
        v: String,
        #[arg(long, default_value_t = 1)]
        k: usize,
    },
    /// Abelian / k-abelian / strong / additive power tests.
    Power {
        #[arg(long)]
        word: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long)]
        strong: bool,
        #[arg(long)]
        additive: bool,
    },
    /// Exhaustive strong-power census at one length.
    Census {
        #[arg(long, default_value_t = 2)]
        alphabet: usize,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long)]
        length: usize,
    },
    /// Longest word without long abelian-style n-powers.
    Avoid {
        #[arg(long, default_value_t = 3)]
        alphabet: usize,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        min_period: usize,
        #[arg(long, default_value_t = 100)]
        max_len: usize,
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// abelian | kabelian | additive
        #[arg(long, default_value = "abelian")]
        kind: String,
    },
    /// Abelian cubes in (an image of) the 0->03,1->43,3->1,4->01 fixed point.
    Makela {
        /// Morphism applied to the fixed point, e.g. "0->0;1->1;3->0;4->1".
        #[arg(long)]
        outer: Option<String>,
        #[arg(long, default_value_t = 1000)]
        horizon: usize,
    },
}

#[derive(Subcommand)]
enum FactorizeCmd {
    /// Enumerate the F-factorizations of one word.
    Run {
        /// JSON file: {"control": <dfa>, "components": [<dfa>, ...]}.
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        word: String,
    },
    /// Completeness / uniqueness / synchronization of an F-spec.
    Check {
        #[arg(long)]
        spec: PathBuf,
        /// completeness | uniqueness | synchronization
        #[arg(long)]
        property: String,
        /// Word-length bound for bounded checks.
        #[arg(long, default_value_t = 8)]
        bound: usize,
        /// Use the automata construction instead of the bounded scan
        /// (completeness only).
        #[arg(long)]
        exact: bool,
        /// Synchronization window; inferred when omitted.
        #[arg(long)]
        window: Option<usize>,
    },
    /// Quasiperiods of one word.
    Quasi {
        #[arg(long)]
        word: String,
    },
    /// Combinatorial rank of a finite set.
    Rank {
        #[arg(long = "x", required = true)]
        x: Vec<String>,
        #[arg(long, default_value_t = 6)]
        bound: usize,
    },
    /// Maximum number of pairwise disjoint X-factorizations.
    Disjoint {
        #[arg(long)]
        word: String,
        #[arg(long = "x", required = true)]
        x: Vec<String>,
        /// Treat the word as a cyclic window (evidence only).
        #[arg(long)]
        circular: bool,
        #[arg(long, default_value_t = 10_000)]
        cap: usize,
    },
}

fn main() -> ExitCode {
    // die quietly when piped into head and the like
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn budget(cli: &Cli, max_len: usize) -> SearchBudget {
    let mut b = SearchBudget::length(max_len);
    if let Some(n) = cli.max_nodes {
        b = b.with_nodes(n);
    }
    if let Some(s) = cli.max_seconds {
        b = b.with_seconds(s);
    }
    b
}

fn parse_rational(s: &str) -> Result<(Rational, bool), Error> {
    let (body, strict) = match s.strip_suffix('+') {
        Some(b) => (b, true),
        None => (s, false),
    };
    let r = match body.split_once('/') {
        Some((p, q)) => Rational::new(
            p.trim().parse().map_err(|_| Error::Parse(format!("bad rational {s}")))?,
            q.trim().parse().map_err(|_| Error::Parse(format!("bad rational {s}")))?,
        ),
        None => Rational::from_integer(
            body.trim().parse().map_err(|_| Error::Parse(format!("bad rational {s}")))?,
        ),
    };
    // "7/4" forbids exponents >= 7/4; "7/4+" forbids only exponents > 7/4
    Ok((r, strict))
}

fn read_spec(path: &PathBuf) -> Result<ffact::FFactorizationSpec, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let v: Value =
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("spec JSON: {e}")))?;
    let control = Dfa::from_json(&v["control"].to_string())?;
    let comps = v["components"]
        .as_array()
        .ok_or_else(|| Error::Parse("spec needs a components array".into()))?;
    let components = comps
        .iter()
        .map(|c| Dfa::from_json(&c.to_string()))
        .collect::<Result<Vec<_>, _>>()?;
    ffact::FFactorizationSpec::new(control, components)
}

fn emit(format: Format, report: &Value) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(report).unwrap()),
        Format::Tsv => print_tsv(report),
        Format::Text => print_text(report, 0),
    }
}

fn print_tsv(v: &Value) {
    match v {
        Value::Object(map) => {
            for (k, val) in map {
                match val {
                    Value::Array(rows) if rows.iter().all(|r| r.is_object()) && !rows.is_empty() => {
                        let headers: Vec<&String> = match &rows[0] {
                            Value::Object(m) => m.keys().collect(),
                            _ => unreachable!(),
                        };
                        println!(
                            "# {k}\n{}",
                            headers.iter().map(|h| h.as_str()).collect::<Vec<_>>().join("\t")
                        );
                        for row in rows {
                            if let Value::Object(m) = row {
                                let cells: Vec<String> =
                                    headers.iter().map(|h| scalar(&m[*h])).collect();
                                println!("{}", cells.join("\t"));
                            }
                        }
                    }
                    other => println!("{k}\t{}", scalar(other)),
                }
            }
        }
        other => println!("{}", scalar(other)),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn print_text(v: &Value, indent: usize) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, val) in map {
                match val {
                    Value::Object(_) | Value::Array(_) => {
                        println!("{pad}{k}:");
                        print_text(val, indent + 1);
                    }
                    other => println!("{pad}{k}: {}", scalar(other)),
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                match item {
                    Value::Object(_) | Value::Array(_) => print_text(item, indent),
                    other => println!("{pad}- {}", scalar(other)),
                }
            }
        }
        other => println!("{pad}{}", scalar(other)),
    }
}

fn run(cli: &Cli) -> Result<ExitCode, Error> {
    let report: Value = match &cli.cmd {
        Cmd::Generate { name, length } => {
            let w = classics::classic_word(name, *length)?;
            json!({"name": name, "length": w.len(), "word": w.to_string()})
        }
        Cmd::Repeats { op, word } => {
            let w = Word::parse_guess(word)?;
            match op {
                RepeatsOp::Period => json!({
                    "word": w.to_string(),
                    "least_period": repetitions::least_period(&w)?,
                }),
                RepeatsOp::Maxexp => json!({
                    "word": w.to_string(),
                    "max_exponent": rational_string(repetitions::max_exponent(&w)?),
                }),
                RepeatsOp::Squares => json!({
                    "word": w.to_string(),
                    "distinct_squares": repetitions::count_distinct_squares(&w),
                }),
                RepeatsOp::Runs => {
                    let runs = repetitions::count_runs(&w);
                    json!({"word": w.to_string(), "count": runs.len(), "runs": runs})
                }
                RepeatsOp::Density => json!({
                    "word": w.to_string(),
                    "square_density": rational_string(repetitions::square_density(&w)?),
                }),
            }
        }
        Cmd::Avoid {
            pattern,
            alphabet,
            max_len,
            circular_max,
        } => {
            let p = Pattern::parse(pattern)?;
            match circular_max {
                Some(n_max) => {
                    let ok = patterns::circular_avoiding_lengths(&p, *alphabet, *n_max)?;
                    let missing: Vec<usize> = (1..=*n_max).filter(|n| !ok.contains(n)).collect();
                    json!({"pattern": pattern, "alphabet": alphabet,
                           "avoidable_lengths": ok, "missing_lengths": missing})
                }
                None => {
                    let out = patterns::longest_avoiding(&p, *alphabet, &budget(cli, *max_len))?;
                    json!({
                        "pattern": pattern, "alphabet": alphabet,
                        "verdict": out.verdict,
                        "length": out.certificate.len(),
                        "witness": out.certificate.to_string(),
                        "nodes": out.stats.nodes,
                    })
                }
            }
        }
        Cmd::Abelian { cmd } => run_abelian(cli, cmd)?,
        Cmd::Complexity {
            oracle,
            measure,
            n_max,
            horizon,
            n,
        } => {
            let gen = classics::classic_oracle(oracle)?;
            match measure {
                Measure::Factor => {
                    json!({"oracle": oracle, "profile": complexity::factor_complexity(&gen, *n_max, *horizon)?})
                }
                Measure::Palindrome => {
                    json!({"oracle": oracle, "report": complexity::palindromic_complexity(&gen, *n_max, *horizon)?})
                }
                Measure::Recurrence => {
                    json!({"oracle": oracle, "report": complexity::recurrence_function(&gen, *n_max, *horizon)?})
                }
                Measure::Balance => {
                    json!({"oracle": oracle, "profile": complexity::balance_function(&gen, *n_max, *horizon)?})
                }
                Measure::Rauzy => {
                    let g = complexity::rauzy_graph(&gen, *n, *horizon)?;
                    println!("{}", g.edge_list());
                    return Ok(ExitCode::SUCCESS);
                }
            }
        }
        Cmd::Factorize { cmd } => run_factorize(cli, cmd)?,
        Cmd::Equations {
            eqs,
            alphabet,
            max_len,
            max_solutions,
        } => {
            let system = eqs
                .iter()
                .map(|e| equations::WordEquation::parse(e))
                .collect::<Result<Vec<_>, _>>()?;
            let r = equations::solve_word_equations(&system, *alphabet, *max_len, *max_solutions)?;
            let solutions: Vec<Value> = r
                .solutions
                .iter()
                .map(|s| {
                    json!({
                        "assignment": s.assignment.iter()
                            .map(|(v, w)| (v.to_string(), w.to_string()))
                            .collect::<BTreeMap<_, _>>(),
                        "periodic": s.periodic,
                    })
                })
                .collect();
            json!({
                "equations": eqs, "alphabet": alphabet, "max_len": max_len,
                "complete": r.complete, "has_non_periodic": r.has_non_periodic,
                "solutions": solutions,
            })
        }
        Cmd::Pcp {
            h,
            g,
            properties,
            bound,
        } => {
            let inst = pcp::PcpInstance::new(Morphism::parse(h)?, Morphism::parse(g)?)?;
            let r = pcp::bounded_pcp(&inst, cli.max_nodes.unwrap_or(1_000_000))?;
            let mut report = json!({
                "verdict": r.verdict,
                "solution": r.solution.as_ref().map(|w| w.to_string()),
                "nodes": r.nodes,
            });
            if *properties {
                report["properties"] = serde_json::to_value(pcp::instance_properties(&inst, *bound)?)
                    .expect("plain data");
            }
            report
        }
        Cmd::Census { config } => run_census(cli, config)?,
        Cmd::Probe { id, list, set, out } => {
            if *list || id.is_none() {
                json!({"probes": probes::probe_ids()})
            } else {
                let mut overrides = probes::Overrides::new();
                for kv in set {
                    let (k, v) = kv
                        .split_once('=')
                        .ok_or_else(|| Error::Parse(format!("override {kv:?} is not key=value")))?;
                    overrides.insert(k.to_string(), v.to_string());
                }
                let report = probes::run_probe(id.as_deref().unwrap(), &overrides)?;
                let value = serde_json::to_value(&report).expect("plain data");
                if let Some(path) = out {
                    std::fs::write(path, serde_json::to_string_pretty(&value).unwrap())
                        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
                }
                match cli.format {
                    Format::Text => println!("{}", report.summary()),
                    _ => emit(cli.format, &value),
                }
                return Ok(ExitCode::from(report.exit_code() as u8));
            }
        }
    };
    emit(cli.format, &report);
    Ok(ExitCode::SUCCESS)
}

fn run_abelian(cli: &Cli, cmd: &AbelianCmd) -> Result<Value, Error> {
    Ok(match cmd {
        AbelianCmd::Equiv { u, v, k } => {
            let wu = Word::parse_guess(u)?;
            let wv = Word::parse_guess(v)?;
            json!({
                "u": u, "v": v, "k": k,
                "equivalent": abelian::kabelian_equiv(wu.letters(), wv.letters(), *k)?,
            })
        }
        AbelianCmd::Power {
            word,
            n,
            k,
            strong,
            additive,
        } => {
            let w = Word::parse_guess(word)?;
            if *strong {
                json!({
                    "word": word, "n": n, "k": k,
                    "strongly_kabelian_power": abelian::is_strongly_kabelian_npower(&w, *n, *k)?,
                })
            } else if *additive {
                json!({
                    "word": word, "n": n,
                    "additive_power": abelian::is_additive_npower(&w, *n, None)?,
                })
            } else {
                json!({
                    "word": word, "n": n, "k": k,
                    "kabelian_power": abelian::is_kabelian_npower(&w, *n, *k)?,
                })
            }
        }
        AbelianCmd::Census {
            alphabet,
            n,
            k,
            length,
        } => serde_json::to_value(abelian::strong_power_census(*alphabet, *n, *k, *length)?)
            .expect("plain data"),
        AbelianCmd::Avoid {
            alphabet,
            n,
            min_period,
            max_len,
            k,
            kind,
        } => {
            let kind = match kind.as_str() {
                "abelian" => PowerKind::Abelian,
                "kabelian" => PowerKind::KAbelian(*k),
                "additive" => PowerKind::Additive,
                other => return Err(Error::Parse(format!("unknown power kind {other:?}"))),
            };
            let out = abelian::avoid_long_powers_search(
                *alphabet,
                kind,
                *n,
                *min_period,
                &budget(cli, *max_len),
            )?;
            json!({
                "alphabet": alphabet, "n": n, "min_period": min_period,
                "verdict": out.verdict,
                "length": out.certificate.len(),
                "witness": out.certificate.to_string(),
                "nodes": out.stats.nodes,
            })
        }
        AbelianCmd::Makela { outer, horizon } => {
            let fixed = classics::makela(*horizon);
            let w = match outer {
                None => fixed,
                Some(spec) => Morphism::parse(spec)?.apply(&fixed)?,
            };
            let occ = abelian::abelian_power_occurrences(&w, 3);
            let mut by_block: BTreeMap<usize, usize> = BTreeMap::new();
            for o in &occ {
                *by_block.entry(o.period).or_insert(0) += 1;
            }
            json!({
                "horizon": horizon,
                "outer": outer,
                "length": w.len(),
                "abelian_cube_occurrences": occ.len(),
                "occurrences_by_block_length": by_block,
                "max_block_length": by_block.keys().max().copied().unwrap_or(0),
            })
        }
    })
}

fn run_factorize(cli: &Cli, cmd: &FactorizeCmd) -> Result<Value, Error> {
    Ok(match cmd {
        FactorizeCmd::Run { spec, word } => {
            let spec = read_spec(spec)?;
            let w = Word::parse_guess(word)?;
            let facts = ffact::f_factorizations(&w, &spec)?;
            let rows: Vec<Value> = facts
                .iter()
                .map(|f| {
                    json!({
                        "pieces": f.pieces.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                        "indices": f.indices.to_string(),
                    })
                })
                .collect();
            json!({"word": word, "count": facts.len(), "factorizations": rows})
        }
        FactorizeCmd::Check {
            spec,
            property,
            bound,
            exact,
            window,
        } => {
            let spec = read_spec(spec)?;
            match property.as_str() {
                "completeness" => {
                    let mode = if *exact {
                        ffact::CompletenessMode::Exact
                    } else {
                        ffact::CompletenessMode::Bounded(*bound)
                    };
                    serde_json::to_value(ffact::check_completeness(&spec, mode)?)
                        .expect("plain data")
                }
                "uniqueness" => serde_json::to_value(ffact::check_uniqueness(&spec, *bound)?)
                    .expect("plain data"),
                "synchronization" => {
                    serde_json::to_value(ffact::check_synchronization(&spec, *window, *bound)?)
                        .expect("plain data")
                }
                other => return Err(Error::Parse(format!("unknown property {other:?}"))),
            }
        }
        FactorizeCmd::Quasi { word } => {
            let w = Word::parse_guess(word)?;
            let qs = quasi::quasiperiods(&w);
            json!({
                "word": word,
                "quasiperiodic": !qs.is_empty(),
                "quasiperiods": qs.iter().map(|q| q.to_string()).collect::<Vec<_>>(),
            })
        }
        FactorizeCmd::Rank { x, bound } => {
            let words = parse_word_set(x)?;
            let r = xfact::combinatorial_rank(
                &words,
                *bound,
                cli.max_nodes.unwrap_or(10_000_000),
            )?;
            json!({"x": x, "rank": r})
        }
        FactorizeCmd::Disjoint {
            word,
            x,
            circular,
            cap,
        } => {
            let words = parse_word_set(x)?;
            let report = if *circular {
                let w = wordlab::word::CircularWord::new(Word::parse_guess(word)?)?;
                xfact::disjoint_x_factorizations_circular(&w, &words, *cap)?
            } else {
                let w = Word::parse_guess(word)?;
                xfact::disjoint_x_factorizations(&w, &words, *cap)?
            };
            serde_json::to_value(report).expect("plain data")
        }
    })
}

/// Parse a set of words over the union alphabet of all of them.
fn parse_word_set(texts: &[String]) -> Result<Vec<Word>, Error> {
    let joined = texts.join("\n");
    parse_word_file(&joined, None)
}

fn run_census(cli: &Cli, config: &PathBuf) -> Result<Value, Error> {
    let text = std::fs::read_to_string(config)
        .map_err(|e| Error::Parse(format!("{}: {e}", config.display())))?;
    let v: Value =
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("census config: {e}")))?;
    let predicate = v["predicate"]
        .as_str()
        .ok_or_else(|| Error::Parse("census config needs \"predicate\"".into()))?
        .to_string();
    let alphabet = v["alphabet"]
        .as_u64()
        .ok_or_else(|| Error::Parse("census config needs \"alphabet\"".into()))?
        as usize;
    let min_len = v["min_len"].as_u64().unwrap_or(1) as usize;
    let max_len = v["max_len"]
        .as_u64()
        .ok_or_else(|| Error::Parse("census config needs \"max_len\"".into()))?
        as usize;
    let measure = v["measure"].as_str().unwrap_or("counts");

    let mut extends_ok = predicate_check(&predicate)?;
    if max_len < min_len {
        return Ok(json!({"predicate": predicate, "alphabet": alphabet, "rows": []}));
    }
    let rows: Vec<Value> = match measure {
        "counts" => {
            let census = patterns::growth_census(alphabet, max_len, extends_ok.as_mut());
            (min_len..=max_len)
                .map(|n| json!({"length": n, "count": census.counts[n]}))
                .collect()
        }
        "min_ones" => {
            if alphabet != 2 {
                return Err(Error::Domain("min_ones census is binary only".into()));
            }
            let mut rows = Vec::new();
            for n in min_len..=max_len {
                let out = complexity::min_letter_density(
                    extends_ok.as_mut(),
                    n,
                    1,
                    &budget(cli, n),
                )?;
                rows.push(json!({
                    "length": n,
                    "verdict": out.verdict,
                    "min_ones": out.count,
                    "density": out.density,
                }));
            }
            rows
        }
        other => return Err(Error::Parse(format!("unknown census measure {other:?}"))),
    };
    Ok(json!({
        "predicate": predicate, "alphabet": alphabet, "measure": measure,
        "rows": rows,
    }))
}

/// Suffix-incremental predicate from a census config tag.
fn predicate_check(
    tag: &str,
) -> Result<Box<dyn FnMut(&[u8]) -> bool>, Error> {
    match tag {
        "squarefree" => {
            let p = Pattern::parse("XX")?;
            Ok(Box::new(move |s| patterns::pattern_free_extension(s, &p)))
        }
        "cubefree" => {
            let p = Pattern::parse("XXX")?;
            Ok(Box::new(move |s| patterns::pattern_free_extension(s, &p)))
        }
        other => {
            if let Some(body) = other.strip_prefix("pattern:") {
                let p = Pattern::parse(body)?;
                Ok(Box::new(move |s| patterns::pattern_free_extension(s, &p)))
            } else if let Some(body) = other.strip_prefix("alpha:") {
                let (alpha, strict) = parse_rational(body)?;
                Ok(Box::new(move |s| {
                    repetitions::alpha_free_suffix_ok(s, alpha, strict)
                }))
            } else {
                Err(Error::Parse(format!("unknown predicate {tag:?}")))
            }
        }
    }
}
