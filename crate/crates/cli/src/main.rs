use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;
use poplab::enumerator::{Enumerator, DEFAULT_CEILING};
use poplab::oeis::{OeisDb, DEFAULT_MAX_SHIFT, DEFAULT_MIN_OVERLAP, ENV_OEIS};
use poplab::theorems::{check_conjecture, conjectures, registry, verify_entry, Report};
use poplab::{enumerate_pops, parse_pop, Pop};
use rayon::prelude::*;
use serde::Serialize;

/// Counting permutations that avoid partially ordered patterns.
#[derive(Parser)]
#[command(name = "poplab", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Largest n the exhaustive counter accepts
    #[arg(long, global = true, default_value_t = DEFAULT_CEILING)]
    ceiling: usize,
    /// Worker threads (default: all cores)
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Print JSON instead of text
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Print the classical patterns a POP stands for
    Expand {
        #[arg(value_name = "POP", required_unless_present = "pop", conflicts_with = "pop")]
        pop_arg: Option<String>,
        #[arg(long)]
        pop: Option<String>,
    },
    /// Count avoiders for n = 0..=nmax (or only --n)
    Count {
        #[arg(value_name = "POP", required_unless_present = "pop", conflicts_with = "pop")]
        pop_arg: Option<String>,
        #[arg(long)]
        pop: Option<String>,
        #[arg(long, default_value_t = 8)]
        nmax: usize,
        /// Count a single length instead of a prefix
        #[arg(long)]
        n: Option<usize>,
    },
    /// Check registered results against brute force and their table rows
    Verify {
        /// A theorem id such as thm-3.6 or thm-2.2:k=5, or "all"
        #[arg(value_name = "ID", required_unless_present = "theorem", conflicts_with = "theorem")]
        id: Option<String>,
        #[arg(long)]
        theorem: Option<String>,
        #[arg(long, default_value_t = 8)]
        nmax: usize,
    },
    /// Count every POP of one length, group by orbit and by count prefix
    Scan {
        #[arg(long)]
        length: usize,
        #[arg(long, default_value_t = 7)]
        nmax: usize,
        /// Stripped-format OEIS file (default: bundled fixture)
        #[arg(long, env = ENV_OEIS)]
        oeis: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the conjectured length-5 connections
    Conjectures {
        #[arg(long, default_value_t = 8)]
        nmax: usize,
    },
}

enum Failure {
    Mismatch,
    Usage(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Mismatch => 1,
            Failure::Usage(_) => 2,
            Failure::Io(_) => 3,
        }
    }
}

type Outcome = Result<(), Failure>;

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn pick(positional: Option<String>, flag: Option<String>, what: &str) -> Result<String, Failure> {
    positional.or(flag).ok_or_else(|| Failure::Usage(format!("missing {what}")))
}

fn join(v: &[BigUint]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

fn emit(text: &str) -> Outcome {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes()).and_then(|_| out.flush()).map_err(|e| Failure::Io(e.to_string()))
}

fn json_line<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn expand(pop: &Pop, json: bool) -> Outcome {
    let pats = pop.linear_extensions();
    if json {
        let list: Vec<String> = pats.iter().map(ToString::to_string).collect();
        return emit(&json_line(&serde_json::json!({ "schema": 1, "pop": pop.to_string(), "patterns": list, "count": pats.len() })));
    }
    let mut s = String::new();
    for p in &pats {
        s.push_str(&format!("{p}\n"));
    }
    s.push_str(&format!("{} patterns\n", pats.len()));
    emit(&s)
}

fn count(e: &Enumerator, pop: &Pop, nmax: usize, single: Option<usize>, json: bool) -> Outcome {
    if let Some(n) = single {
        let c = e.count_avoiders(pop, n).map_err(usage)?;
        return emit(&if json {
            json_line(&serde_json::json!({ "schema": 1, "pop": pop.to_string(), "n": n, "count": c.to_string() }))
        } else {
            format!("{c}\n")
        });
    }
    let seq = e.count_avoiders_prefix(pop, nmax).map_err(usage)?;
    emit(&if json {
        json_line(&serde_json::json!({ "schema": 1, "pop": pop.to_string(), "counts": seq.counts.iter().map(ToString::to_string).collect::<Vec<_>>() }))
    } else {
        format!("{}\n", join(&seq.counts))
    })
}

fn print_reports(reports: &[Report], json: bool) -> Outcome {
    let all = reports.iter().all(|r| r.pass);
    if json {
        emit(&json_line(&serde_json::json!({ "schema": 1, "pass": all, "reports": reports })))?;
    } else {
        let mut s = String::new();
        for r in reports {
            s.push_str(&r.to_text());
            s.push('\n');
        }
        let passed = reports.iter().filter(|r| r.pass).count();
        s.push_str(&format!("{passed}/{} passed\n", reports.len()));
        emit(&s)?;
    }
    if all {
        Ok(())
    } else {
        Err(Failure::Mismatch)
    }
}

fn verify(e: &Enumerator, id: &str, nmax: usize, json: bool) -> Outcome {
    let entries: Vec<_> = if id == "all" {
        registry().iter().collect()
    } else {
        vec![poplab::theorems::lookup(id).map_err(usage)?]
    };
    let reports = entries
        .iter()
        .map(|entry| verify_entry(entry, nmax.min(entry.limit), e))
        .collect::<Result<Vec<_>, _>>()
        .map_err(usage)?;
    print_reports(&reports, json)
}

fn run_conjectures(e: &Enumerator, nmax: usize, json: bool) -> Outcome {
    let reports = conjectures().iter().map(|c| check_conjecture(c, nmax, e)).collect::<Result<Vec<_>, _>>().map_err(usage)?;
    print_reports(&reports, json)
}

#[derive(Serialize)]
struct ScanResult {
    pop: String,
    class_key: String,
    counts: Vec<String>,
    oeis: Vec<String>,
    orbit_representative: bool,
    wilf_class: usize,
}

#[derive(Serialize)]
struct Orbit {
    class_key: String,
    representative: String,
    members: Vec<String>,
    status: &'static str,
}

#[derive(Serialize)]
struct WilfClass {
    id: usize,
    counts: Vec<String>,
    oeis: Vec<String>,
    orbits: Vec<Orbit>,
    status: String,
}

#[derive(Serialize)]
struct ScanDoc {
    schema: u32,
    length: usize,
    n_max: usize,
    pops_processed: usize,
    orbit_count: usize,
    class_count: usize,
    notes: Vec<String>,
    classes: Vec<WilfClass>,
    results: Vec<ScanResult>,
}

fn scan(e: &Enumerator, length: usize, nmax: usize, oeis: Option<PathBuf>, out: Option<PathBuf>) -> Outcome {
    if length == 0 || length > 6 {
        return Err(Failure::Usage(format!("--length {length} is outside 1..=6")));
    }
    if nmax > e.ceiling {
        return Err(Failure::Usage(format!("--nmax {nmax} exceeds the ceiling {}", e.ceiling)));
    }
    let loaded = OeisDb::resolve(oeis.as_deref()).map_err(|err| match err {
        poplab::OeisError::Io { .. } => Failure::Io(err.to_string()),
        other => Failure::Usage(other.to_string()),
    })?;
    for w in &loaded.warnings {
        eprintln!("warning: {w}");
    }
    let pops = enumerate_pops(length);
    let mut orbits: BTreeMap<String, Vec<Pop>> = BTreeMap::new();
    for p in &pops {
        orbits.entry(p.canonical_class().to_string()).or_default().push(p.clone());
    }
    // symmetric POPs share counts, so one count per orbit
    let keyed: Vec<(String, Pop)> = orbits.iter().map(|(k, ms)| (k.clone(), ms.iter().min().expect("nonempty orbit").clone())).collect();
    let counted: Vec<(String, Vec<BigUint>)> = keyed
        .par_iter()
        .map(|(k, rep)| e.count_avoiders_prefix(rep, nmax).map(|s| (k.clone(), s.counts)))
        .collect::<Result<_, _>>()
        .map_err(usage)?;
    let counts: BTreeMap<String, Vec<BigUint>> = counted.into_iter().collect();

    let mut by_prefix: BTreeMap<Vec<BigUint>, Vec<String>> = BTreeMap::new();
    for (k, c) in &counts {
        by_prefix.entry(c.clone()).or_default().push(k.clone());
    }
    let mut notes = vec![
        "orbits under label complement and dual are proved to share counts".to_string(),
        format!("classes group equal prefixes for n <= {nmax}; empirical, not a proof of Wilf-equivalence"),
    ];
    let match_terms = nmax >= DEFAULT_MIN_OVERLAP;
    if !match_terms {
        notes.push(format!("OEIS matching skipped: needs nmax >= {DEFAULT_MIN_OVERLAP}"));
    }
    let mut class_of: BTreeMap<String, usize> = BTreeMap::new();
    let mut classes = Vec::new();
    for (i, (prefix, keys)) in by_prefix.iter().enumerate() {
        let oeis_ids: Vec<String> = if match_terms {
            loaded.db.match_sequence(&prefix[1..], DEFAULT_MIN_OVERLAP, DEFAULT_MAX_SHIFT).map_err(usage)?.into_iter().map(|m| m.a_number).collect()
        } else {
            Vec::new()
        };
        let orbit_list = keys
            .iter()
            .map(|k| {
                class_of.insert(k.clone(), i);
                let mut members: Vec<String> = orbits[k].iter().map(ToString::to_string).collect();
                members.sort();
                Orbit { class_key: k.clone(), representative: orbits[k].iter().min().expect("nonempty").to_string(), members, status: "proved" }
            })
            .collect();
        classes.push(WilfClass {
            id: i,
            counts: prefix.iter().map(ToString::to_string).collect(),
            oeis: oeis_ids,
            orbits: orbit_list,
            status: format!("empirical at n <= {nmax}"),
        });
    }
    let results = pops
        .iter()
        .map(|p| {
            let key = p.canonical_class().to_string();
            let rep = orbits[&key].iter().min().expect("nonempty");
            let class = class_of[&key];
            ScanResult {
                pop: p.to_string(),
                class_key: key.clone(),
                counts: counts[&key].iter().map(ToString::to_string).collect(),
                oeis: classes[class].oeis.clone(),
                orbit_representative: rep == p,
                wilf_class: class,
            }
        })
        .collect();
    let doc = ScanDoc {
        schema: 1,
        length,
        n_max: nmax,
        pops_processed: pops.len(),
        orbit_count: orbits.len(),
        class_count: classes.len(),
        notes,
        classes,
        results,
    };
    let text = json_line(&doc);
    match out {
        Some(path) => {
            std::fs::write(&path, text).map_err(|err| Failure::Io(format!("{}: {err}", path.display())))?;
            eprintln!("{} POPs, {} orbits, {} classes -> {}", doc.pops_processed, doc.orbit_count, doc.class_count, path.display());
            Ok(())
        }
        None => emit(&text),
    }
}

fn run(cli: Cli) -> Outcome {
    let e = Enumerator { ceiling: cli.global.ceiling, jobs: None };
    let json = cli.global.json;
    match cli.command {
        Command::Expand { pop_arg, pop } => expand(&parse_pop(&pick(pop_arg, pop, "POP")?).map_err(usage)?, json),
        Command::Count { pop_arg, pop, nmax, n } => count(&e, &parse_pop(&pick(pop_arg, pop, "POP")?).map_err(usage)?, nmax, n, json),
        Command::Verify { id, theorem, nmax } => verify(&e, &pick(id, theorem, "theorem id")?, nmax, json),
        Command::Scan { length, nmax, oeis, out } => scan(&e, length, nmax, oeis, out),
        Command::Conjectures { nmax } => run_conjectures(&e, nmax, json),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pool = match cli.global.jobs {
        Some(j) => rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build(),
        None => rayon::ThreadPoolBuilder::new().build(),
    };
    let pool = match pool {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match pool.install(|| run(cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Mismatch => eprintln!("mismatch"),
                Failure::Usage(m) | Failure::Io(m) => eprintln!("error: {m}"),
            }
            ExitCode::from(f.code())
        }
    }
}
