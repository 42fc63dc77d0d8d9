//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! A criterion reported as `FAIL (known)` fails for a reason pinned down
//! in `known_failure`; any other failure makes the run exit nonzero.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ot_core::oracle::{Corpus, Report, DEFAULT_SIZE_CAP};
use ot_core::syntax::parse_ord;
use ot_core::Notation;

const MIN_TERMS: usize = 2000;
const ORDER_BUDGET: Duration = Duration::from_secs(60);
const BOUND_BUDGET: Duration = Duration::from_secs(5);
const TRIPLES: usize = 100_000;
const SEED: u64 = 20_241_016;
const PROBES: usize = 100;
const PROBE_STEPS: usize = 100_000;
const CLI_PAIRS: usize = 10_000;
const DETERMINISM_CAP: usize = 8;

/// The one check allowed to fail, and only with counterexamples of the
/// shape `k0 = k` and `ν_k ≥ Hd(ξ)`.
const KNOWN_CHECK: &str = "irreducible below head tower";

enum Verdict {
    Pass,
    Known(String),
    Fail(String),
}

struct Setup {
    n: usize,
    o: Notation,
    corpus: Corpus,
    built: Duration,
}

fn setup(n: usize) -> Setup {
    let o = Notation::with_n(n).unwrap();
    let t = Instant::now();
    let corpus = o.enumerate(DEFAULT_SIZE_CAP).unwrap();
    Setup {
        n,
        o,
        corpus,
        built: t.elapsed(),
    }
}

fn failures(r: &Report) -> Vec<String> {
    r.checks
        .iter()
        .filter(|c| !c.passed())
        .map(|c| format!("{} ({} of {})", c.name, c.failed, c.checked))
        .collect()
}

fn criterion_order(setups: &[Setup]) -> Verdict {
    let mut bad = Vec::new();
    for s in setups {
        let t = Instant::now();
        let r = s.o.check_order_axioms(&s.corpus, TRIPLES, SEED);
        let elapsed = s.built + t.elapsed();
        println!(
            "  N={} terms={} time={:.2}s",
            s.n,
            s.corpus.len(),
            elapsed.as_secs_f64()
        );
        if s.corpus.len() < MIN_TERMS {
            bad.push(format!("N={}: only {} terms", s.n, s.corpus.len()));
        }
        if elapsed > ORDER_BUDGET {
            bad.push(format!("N={}: {:.1}s", s.n, elapsed.as_secs_f64()));
        }
        bad.extend(failures(&r).into_iter().map(|f| format!("N={}: {f}", s.n)));
    }
    verdict(bad)
}

fn known_failure(r: &Report) -> Option<String> {
    let c = r.get(KNOWN_CHECK)?;
    let note = c.notes.iter().find(|n| n.starts_with("failures with k0=k"))?;
    let (x, y) = note.rsplit_once(": ")?.1.split_once(" of ")?;
    (x == y && !c.passed()).then(|| format!("{KNOWN_CHECK}: {} of {} instances, all with k0=k and nu_k >= Hd(xi)", c.failed, c.checked))
}

fn criterion_props(setups: &[Setup]) -> (Verdict, Vec<Report>) {
    let mut bad = Vec::new();
    let mut known = Vec::new();
    let mut reports = Vec::new();
    for s in setups {
        let r = s.o.check_paper_props(&s.corpus);
        for c in &r.checks {
            println!("  N={} {} {} of {}", s.n, c.name, if c.passed() { "ok" } else { "FAILED" }, c.checked);
        }
        for c in r.checks.iter().filter(|c| !c.passed()) {
            if c.name == KNOWN_CHECK {
                match known_failure(&r) {
                    Some(k) => known.push(format!("N={}: {k}", s.n)),
                    None => bad.push(format!("N={}: {}", s.n, c.name)),
                }
            } else {
                bad.push(format!("N={}: {} ({} of {})", s.n, c.name, c.failed, c.checked));
            }
        }
        reports.push(r);
    }
    let v = if !bad.is_empty() {
        Verdict::Fail(bad.join("; "))
    } else if !known.is_empty() {
        Verdict::Known(known.join("; "))
    } else {
        Verdict::Pass
    };
    (v, reports)
}

fn criterion_sandwich(reports: &[Report]) -> Verdict {
    let mut bad = Vec::new();
    for r in reports {
        let c = r.get("sandwich").unwrap();
        println!("  {}: {} instances", r.title, c.checked);
        if !c.passed() || c.checked == 0 {
            bad.push(format!("{}: {} of {}", r.title, c.failed, c.checked));
        }
    }
    verdict(bad)
}

fn criterion_sd(setups: &[Setup]) -> Verdict {
    let mut bad = Vec::new();
    for s in setups {
        let r = s.o.sd_cross_check(&s.corpus, DEFAULT_SIZE_CAP);
        for note in &r.checks[0].notes {
            println!("  N={} {note}", s.n);
        }
        bad.extend(failures(&r).into_iter().map(|f| format!("N={}: {f}", s.n)));
    }
    verdict(bad)
}

fn criterion_bound() -> Verdict {
    let mut bad = Vec::new();
    for n in [3, 4] {
        let o = Notation::with_n(n).unwrap();
        let t = Instant::now();
        let bounds: Vec<_> = (0..=6).map(|k| o.theorem_bound(k)).collect();
        let mut prev = None;
        for (k, b) in bounds.iter().enumerate() {
            match b {
                Err(e) => bad.push(format!("N={n} n={k}: {e}")),
                Ok(b) => {
                    if let Some(p) = &prev {
                        if o.cmp_ord(p, b).ok() != Some(Ordering::Less) {
                            bad.push(format!("N={n}: bound({}) not below bound({k})", k - 1));
                        }
                    }
                    prev = Some(b.clone());
                }
            }
        }
        let elapsed = t.elapsed();
        println!("  N={n} time={:.3}s bound(6)={}", elapsed.as_secs_f64(), prev.map_or("-".into(), |b| b.to_string()));
        if elapsed > BOUND_BUDGET {
            bad.push(format!("N={n}: {:.1}s", elapsed.as_secs_f64()));
        }
    }
    verdict(bad)
}

fn ot(args: &[&str], threads: &str) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_ot"))
        .args(args)
        .env("RAYON_NUM_THREADS", threads)
        .output()
        .expect("run ot");
    out.stdout
}

fn criterion_determinism() -> Verdict {
    let mut bad = Vec::new();
    let cap = DETERMINISM_CAP.to_string();
    let runs: [(&str, Vec<&str>); 3] = [
        ("enumerate", vec!["enumerate", "--size-cap", &cap]),
        ("enumerate json", vec!["--format", "json-lines", "enumerate", "--size-cap", &cap]),
        ("props", vec!["props", "--size-cap", &cap, "--triples", "20000"]),
    ];
    for (name, args) in runs {
        let a = ot(&args, "1");
        let b = ot(&args, "4");
        println!("  {name}: {} bytes, identical={}", a.len(), a == b);
        if a != b || a.is_empty() {
            bad.push(name.to_string());
        }
    }
    let o1 = Notation::with_n(4).unwrap();
    let o2 = Notation::with_n(4).unwrap();
    if o1.enumerate(DEFAULT_SIZE_CAP).unwrap().listing() != o2.enumerate(DEFAULT_SIZE_CAP).unwrap().listing() {
        bad.push("library enumerate".into());
    }
    verdict(bad)
}

fn criterion_descent(s: &Setup) -> Verdict {
    let start = s.o.theorem_bound(2).unwrap();
    let mut hist: BTreeMap<usize, usize> = BTreeMap::new();
    let mut bad = Vec::new();
    for p in 0..PROBES as u64 {
        let chain = s.o.descent_probe(&start, &s.corpus, PROBE_STEPS, SEED + p);
        let bottom = s.corpus.count_below(&s.o, chain.last()) == 0;
        let strict = chain.terms.windows(2).all(|w| s.o.lt(&w[1], &w[0]));
        if !bottom || !strict || chain.length() >= PROBE_STEPS {
            bad.push(format!("probe {p}"));
        }
        *hist.entry(chain.length()).or_default() += 1;
    }
    let mut text = String::new();
    for (len, count) in &hist {
        writeln!(text, "length {len} count {count}").unwrap();
    }
    let golden = include_str!("golden/descent_histogram.txt");
    println!(
        "  start={start} below={} histogram matches golden file: {}",
        s.corpus.count_below(&s.o, &start),
        text == golden
    );
    for line in text.lines() {
        println!("    {line}");
    }
    verdict(bad)
}

fn criterion_round_trip(setups: &[Setup]) -> Verdict {
    let mut bad = Vec::new();
    for s in setups {
        let broken = s
            .corpus
            .terms
            .iter()
            .filter(|t| parse_ord(&t.to_string(), s.n).ok().as_ref() != Some(*t))
            .count();
        println!("  N={} round-trip over {} terms, {broken} broken", s.n, s.corpus.len());
        if broken > 0 {
            bad.push(format!("N={}: {broken} terms", s.n));
        }
    }
    let s = setups.iter().find(|s| s.n == 4).unwrap();
    let terms = &s.corpus.terms;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let pairs: Vec<(usize, usize)> = (0..CLI_PAIRS)
        .map(|_| (rng.gen_range(0..terms.len()), rng.gen_range(0..terms.len())))
        .collect();
    let mut file = String::new();
    for &(i, j) in &pairs {
        writeln!(file, "{}\t{}", terms[i], terms[j]).unwrap();
    }
    let path = std::env::temp_dir().join(format!("ot-acceptance-pairs-{}.txt", std::process::id()));
    std::fs::write(&path, file).unwrap();
    let out = ot(&["cmp", "--pairs", path.to_str().unwrap()], "4");
    let _ = std::fs::remove_file(&path);
    let text = String::from_utf8(out).unwrap();
    let got: Vec<&str> = text.lines().collect();
    let mut disagree = 0;
    for (k, &(i, j)) in pairs.iter().enumerate() {
        let want = match s.o.cmp_ord(&terms[i], &terms[j]).unwrap() {
            Ordering::Less => "<",
            Ordering::Equal => "=",
            Ordering::Greater => ">",
        };
        if got.get(k) != Some(&want) {
            disagree += 1;
        }
    }
    println!("  cli cmp on {} pairs, {disagree} disagreements", pairs.len());
    if disagree > 0 || got.len() != pairs.len() {
        bad.push(format!("cli cmp: {disagree} disagreements, {} lines", got.len()));
    }
    verdict(bad)
}

fn verdict(bad: Vec<String>) -> Verdict {
    if bad.is_empty() {
        Verdict::Pass
    } else {
        Verdict::Fail(bad.join("; "))
    }
}

fn main() {
    let setups = [setup(3), setup(4)];
    let mut lines = Vec::new();
    let mut record = |k: usize, name: &str, v: Verdict| {
        let line = match v {
            Verdict::Pass => format!("criterion {k} PASS {name}"),
            Verdict::Known(why) => format!("criterion {k} FAIL (known) {name}: {why}"),
            Verdict::Fail(why) => format!("criterion {k} FAIL {name}: {why}"),
        };
        println!("{line}");
        lines.push(line);
    };

    record(1, "order axioms", criterion_order(&setups));
    let (v, reports) = criterion_props(&setups);
    record(2, "structural propositions", v);
    record(3, "sandwich law", criterion_sandwich(&reports));
    record(4, "SD cross-check", criterion_sd(&setups));
    record(5, "bound pipeline", criterion_bound());
    record(6, "determinism", criterion_determinism());
    record(7, "descent probes", criterion_descent(&setups[1]));
    record(8, "round-trip and cli cmp", criterion_round_trip(&setups));

    println!("\nsummary");
    for l in &lines {
        println!("{l}");
    }
    if lines.iter().any(|l| l.contains(" FAIL ") && !l.contains("FAIL (known)")) {
        std::process::exit(1);
    }
}
