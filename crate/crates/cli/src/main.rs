//! `ot`: command-line access to the ordinal notation system.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ot_core::oracle::{CheckResult, Report, DEFAULT_SIZE_CAP, DEFAULT_TRIPLES};
use ot_core::syntax::{parse_ord, parse_seq};
use ot_core::{Notation, OrdinalTerm, OtError};

#[derive(Parser)]
#[command(name = "ot", version, about = "Ordinal notation system for Pi_N-reflection")]
struct Cli {
    /// The reflection level N (at least 3).
    #[arg(long = "big-n", global = true, default_value_t = 4)]
    big_n: usize,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    JsonLines,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a term and list the side conditions of its formation rule.
    Check { term: String },
    /// Compare two terms, or every tab-separated pair in a file.
    Cmp {
        #[arg(num_args = 0..=2)]
        terms: Vec<String>,
        /// File of `TERM<TAB>TERM` lines; prints one result per line.
        #[arg(long, conflicts_with = "terms")]
        pairs: Option<PathBuf>,
    },
    /// The set K_delta(term).
    Kset { delta: String, term: String },
    /// The coefficient sequence m(term).
    Mvec { term: String },
    /// Search a derivation of a sequence `[e,...,e]` in SD.
    Sd { seq: String },
    /// List every validated term up to a size cap in increasing order.
    Enumerate {
        #[arg(long)]
        size_cap: usize,
        /// Keep only terms below this one.
        #[arg(long)]
        below: Option<String>,
        /// Write the listing to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the order, property and SD suites over an enumerated corpus.
    Props {
        #[arg(long, default_value_t = DEFAULT_SIZE_CAP)]
        size_cap: usize,
        /// Sampled triples for transitivity.
        #[arg(long, default_value_t = DEFAULT_TRIPLES)]
        triples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Size cap for the SD sequence sweep; defaults to the corpus cap.
        #[arg(long)]
        seq_cap: Option<usize>,
    },
    /// Walk a seeded strictly descending chain through the corpus.
    Descend {
        term: String,
        #[arg(long, default_value_t = 1000)]
        steps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_SIZE_CAP)]
        size_cap: usize,
        /// Run this many probes (seeds seed, seed+1, ...) and print the
        /// chain-length histogram instead of a single chain.
        #[arg(long)]
        probes: Option<usize>,
    },
    /// The collapsed bound psi_{Om(1)}(omega_n(K+1)).
    Bound {
        #[arg(long)]
        n: usize,
    },
}

/// Collected output lines in the chosen format.
struct Out {
    format: Format,
    lines: Vec<String>,
}

impl Out {
    fn emit(&mut self, text: impl Into<String>, record: Value) {
        match self.format {
            Format::Text => self.lines.push(text.into()),
            Format::JsonLines => self.lines.push(record.to_string()),
        }
    }

    fn render(&self) -> String {
        let mut s = String::new();
        for l in &self.lines {
            s.push_str(l);
            s.push('\n');
        }
        s
    }
}

type Verdict = std::result::Result<bool, OtError>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let mut out = Out {
        format: cli.format,
        lines: Vec::new(),
    };
    let result = Notation::with_n(cli.big_n).and_then(|o| run(&o, cli.command, &mut out));
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(out.render().as_bytes());
    let _ = stdout.flush();
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            match cli.format {
                Format::Text => eprintln!("error[{}]: {e}", e.kind()),
                Format::JsonLines => eprintln!("{}", json!({"error": e.kind(), "message": e.to_string()})),
            }
            ExitCode::from(2)
        }
    }
}

fn term(o: &Notation, s: &str) -> Result<OrdinalTerm, OtError> {
    parse_ord(s, o.n())
}

fn valid_term(o: &Notation, s: &str) -> Result<OrdinalTerm, OtError> {
    let t = term(o, s)?;
    if o.is_valid(&t) {
        Ok(t)
    } else {
        Err(OtError::UnvalidatedInput(t.to_string()))
    }
}

fn run(o: &Notation, cmd: Command, out: &mut Out) -> Verdict {
    match cmd {
        Command::Check { term: s } => check(o, &s, out),
        Command::Cmp { terms, pairs } => match (pairs, terms.as_slice()) {
            (Some(path), _) => cmp_pairs(o, &path, out),
            (None, [a, b]) => {
                let r = cmp_one(o, a, b)?;
                out.emit(r, json!({"record": "cmp", "left": a, "right": b, "result": r}));
                Ok(true)
            }
            _ => Err(OtError::Syntax {
                pos: 0,
                msg: "cmp takes two terms or --pairs FILE".into(),
            }),
        },
        Command::Kset { delta, term: s } => {
            let d = valid_term(o, &delta)?;
            let t = valid_term(o, &s)?;
            let mut set = o.k_delta(&d, &t)?.into_vec();
            set.sort_by(|x, y| o.cmp(x, y));
            let names: Vec<String> = set.iter().map(ToString::to_string).collect();
            out.emit(
                format!("{{{}}}", names.join(", ")),
                json!({"record": "kset", "delta": d.to_string(), "term": t.to_string(), "set": names}),
            );
            Ok(true)
        }
        Command::Mvec { term: s } => {
            let t = valid_term(o, &s)?;
            let m = o.m_vec(&t).map(|m| m.to_string());
            out.emit(
                m.clone().unwrap_or_else(|| "none".into()),
                json!({"record": "mvec", "term": t.to_string(), "m": m}),
            );
            Ok(true)
        }
        Command::Sd { seq } => sd(o, &seq, out),
        Command::Enumerate { size_cap, below, out: file } => enumerate(o, size_cap, below, file, out),
        Command::Props {
            size_cap,
            triples,
            seed,
            seq_cap,
        } => {
            let c = o.enumerate(size_cap)?;
            let reports = [
                o.check_order_axioms(&c, triples, seed),
                o.check_paper_props(&c),
                o.sd_cross_check(&c, seq_cap.unwrap_or(size_cap)),
            ];
            for r in &reports {
                emit_report(r, out);
            }
            Ok(reports.iter().all(Report::passed))
        }
        Command::Descend {
            term: s,
            steps,
            seed,
            size_cap,
            probes,
        } => {
            let t = valid_term(o, &s)?;
            let c = o.enumerate(size_cap)?;
            if let Some(p) = probes {
                for (len, count) in o.descent_histogram(&t, &c, p, steps, seed) {
                    out.emit(
                        format!("length {len} count {count}"),
                        json!({"record": "histogram", "length": len, "count": count}),
                    );
                }
                return Ok(true);
            }
            let chain = o.descent_probe(&t, &c, steps, seed);
            for (i, x) in chain.terms.iter().enumerate() {
                out.emit(format!("step {i} {x}"), json!({"record": "step", "index": i, "term": x.to_string()}));
            }
            out.emit(
                format!("length {} final {}", chain.length(), chain.last()),
                json!({"record": "chain", "length": chain.length(), "final": chain.last().to_string()}),
            );
            Ok(true)
        }
        Command::Bound { n } => {
            let t = o.theorem_bound(n)?;
            out.emit(t.to_string(), json!({"record": "bound", "n": n, "term": t.to_string()}));
            Ok(true)
        }
    }
}

fn check(o: &Notation, s: &str, out: &mut Out) -> Verdict {
    let t = term(o, s)?;
    let r = o.validate(&t);
    let head = if r.ok {
        format!("ok rule={}", r.rule)
    } else {
        format!(
            "invalid rule={} failing=\"{}\"",
            r.rule,
            r.first_failure().unwrap_or("?")
        )
    };
    out.emit(
        head,
        json!({
            "record": "check",
            "term": t.to_string(),
            "ok": r.ok,
            "rule": r.rule.to_string(),
            "failing": r.first_failure(),
        }),
    );
    for c in &r.checks {
        let mut line = format!("{} {}", if c.pass { "pass" } else { "FAIL" }, c.name);
        if let Some(w) = &c.witness {
            line.push_str(&format!(" [{w}]"));
        }
        out.emit(
            line,
            json!({"record": "condition", "name": c.name, "pass": c.pass, "witness": c.witness}),
        );
    }
    if let Some(m) = r.m_vec.as_ref().filter(|_| r.ok) {
        out.emit(format!("m-vec {m}"), json!({"record": "mvec", "m": m.to_string()}));
    }
    Ok(r.ok)
}

fn cmp_one(o: &Notation, a: &str, b: &str) -> Result<&'static str, OtError> {
    let (x, y) = (term(o, a)?, term(o, b)?);
    Ok(match o.cmp_ord(&x, &y)? {
        std::cmp::Ordering::Less => "<",
        std::cmp::Ordering::Equal => "=",
        std::cmp::Ordering::Greater => ">",
    })
}

fn cmp_pairs(o: &Notation, path: &PathBuf, out: &mut Out) -> Verdict {
    let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    for (i, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let (a, b) = line.split_once('\t').ok_or_else(|| OtError::Syntax {
            pos: 0,
            msg: format!("line {}: expected TERM<TAB>TERM", i + 1),
        })?;
        let r = cmp_one(o, a, b)?;
        out.emit(r, json!({"record": "cmp", "line": i + 1, "result": r}));
    }
    Ok(true)
}

fn io_error(path: &std::path::Path, e: std::io::Error) -> OtError {
    OtError::Syntax {
        pos: 0,
        msg: format!("{}: {e}", path.display()),
    }
}

fn sd(o: &Notation, s: &str, out: &mut Out) -> Verdict {
    let seq = parse_seq(s, o.n())?;
    if let Some(bad) = seq.entries().iter().find(|x| !o.is_valid_exp(x)) {
        return Err(OtError::UnvalidatedInput(bad.to_string()));
    }
    match o.in_sd(seq.entries()) {
        Some(d) => {
            out.emit(
                format!("in SD {seq}"),
                json!({"record": "sd", "seq": seq.to_string(), "in_sd": true}),
            );
            for step in d.steps() {
                out.emit(step.clone(), json!({"record": "step", "line": step}));
            }
            Ok(true)
        }
        None => {
            let conds = o.sd_necessary_conditions(seq.entries());
            out.emit(
                format!("not in SD {seq}"),
                json!({"record": "sd", "seq": seq.to_string(), "in_sd": false}),
            );
            out.emit(
                format!("conditions {conds}"),
                json!({
                    "record": "conditions",
                    "prefixes": conds.prefixes_in_sd,
                    "no_zero_gap": conds.no_zero_gap,
                    "tail_step_down": conds.tail_step_down,
                    "irreducible": conds.irreducible,
                }),
            );
            Ok(false)
        }
    }
}

fn enumerate(
    o: &Notation,
    size_cap: usize,
    below: Option<String>,
    file: Option<PathBuf>,
    out: &mut Out,
) -> Verdict {
    let c = o.enumerate(size_cap)?;
    let terms = match below {
        Some(b) => c.below(o, &valid_term(o, &b)?),
        None => &c.terms[..],
    };
    let mut listing = Out {
        format: out.format,
        lines: Vec::new(),
    };
    for t in terms {
        listing.emit(t.to_string(), json!({"record": "term", "term": t.to_string(), "size": t.size()}));
    }
    match file {
        Some(path) => {
            fs::write(&path, listing.render()).map_err(|e| io_error(&path, e))?;
            eprintln!("{} terms written to {}", terms.len(), path.display());
        }
        None => out.lines.extend(listing.lines),
    }
    Ok(true)
}

fn emit_report(r: &Report, out: &mut Out) {
    out.emit(format!("# {}", r.title), json!({"record": "suite", "title": r.title}));
    for c in &r.checks {
        emit_check(&r.title, c, out);
    }
}

fn emit_check(suite: &str, c: &CheckResult, out: &mut Out) {
    match out.format {
        Format::Text => out.lines.push(c.to_string()),
        Format::JsonLines => out.emit(
            "",
            json!({
                "record": "check",
                "suite": suite,
                "name": c.name,
                "verdict": if c.passed() { "PASS" } else { "FAIL" },
                "checked": c.checked,
                "failed": c.failed,
                "examples": c.examples,
                "notes": c.notes,
            }),
        ),
    }
}
