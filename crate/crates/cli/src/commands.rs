use std::path::PathBuf;

use es_core::arith::is_prime;
use es_core::census::{
    default_shards, discover_congruence_classes, duv_complete_search, egyptian_existence,
    qr_obstruction_check, run_census, CensusOptions, CensusRecord,
};
use es_core::constructors::{thm_c_search, thm_d_search, thm_f_pair, DuvSolution};
use es_core::oracle::{enumerate_sharded, first_solution, DEFAULT_ORACLE_MAX_N};
use es_core::solution::{classify_type, duv_decompose, make_triple, SolutionType};
use es_core::store::{read_records, CensusStore, StoreMeta};
use es_core::{DuvWitness, EsError, PrimeRange, Triple};
use serde_json::{json, Value};

use crate::output::{join, print_csv, print_json, Format};
use crate::Form;

pub const EXIT_OK: u8 = 0;
pub const EXIT_INVALID_TRIPLE: u8 = 1;
pub const EXIT_NOT_FOUND: u8 = 3;

pub fn exit_code(err: &EsError) -> u8 {
    match err {
        EsError::InvalidInput(_) | EsError::Overflow(_) => 2,
        EsError::NoSolution(_) => 3,
        EsError::Store(_) => 4,
        EsError::StoreMismatch(_) => 5,
        EsError::AtPrime { source, .. } => exit_code(source),
        EsError::NotASolution { .. } | EsError::InvariantViolation { .. } => 10,
    }
}

fn invalid(msg: impl Into<String>) -> EsError {
    EsError::InvalidInput(msg.into())
}

fn oracle_max_n() -> Result<u64, EsError> {
    match std::env::var("ES_MAX_ORACLE_N") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| invalid(format!("ES_MAX_ORACLE_N={v} is not a positive integer"))),
        Err(_) => Ok(DEFAULT_ORACLE_MAX_N),
    }
}

fn require_oracle_bound(n: u64) -> Result<(), EsError> {
    let max = oracle_max_n()?;
    if n > max {
        return Err(invalid(format!(
            "n = {n} exceeds the oracle bound {max} (set ES_MAX_ORACLE_N to raise it)"
        )));
    }
    Ok(())
}

fn triple_json(t: &Triple) -> Value {
    json!({ "x": t.x(), "y": t.y(), "z": t.z() })
}

/// One solution line of a `solve` report.
struct Found {
    triple: Triple,
    witness: Option<DuvWitness>,
    note: Option<String>,
}

impl Found {
    fn bare(triple: Triple) -> Self {
        Found { triple, witness: None, note: None }
    }

    fn duv(s: &DuvSolution) -> Self {
        Found { triple: s.triple, witness: Some(s.witness), note: None }
    }
}

fn report_solutions(p: u64, form: &str, route: &str, found: &[Found], message: Option<&str>, fmt: Format) {
    match fmt {
        Format::Json => {
            let sols: Vec<Value> = found
                .iter()
                .map(|f| {
                    json!({
                        "triple": triple_json(&f.triple),
                        "witness": f.witness,
                        "note": f.note,
                    })
                })
                .collect();
            print_json(&json!({
                "p": p,
                "form": form,
                "route": route,
                "solutions": sols,
                "message": message,
            }));
        }
        Format::Csv => {
            let rows: Vec<Vec<String>> = found
                .iter()
                .map(|f| {
                    let w = f.witness;
                    vec![
                        p.to_string(),
                        f.triple.x().to_string(),
                        f.triple.y().to_string(),
                        f.triple.z().to_string(),
                        route.to_string(),
                        w.map_or(String::new(), |w| w.d.to_string()),
                        w.map_or(String::new(), |w| w.u.to_string()),
                        w.map_or(String::new(), |w| w.v.to_string()),
                        w.map_or(String::new(), |w| w.n.to_string()),
                        f.note.clone().unwrap_or_default(),
                    ]
                })
                .collect();
            print_csv(&["p", "x", "y", "z", "route", "d", "u", "v", "n", "note"], &rows);
        }
        Format::Plain => {
            println!("p = {p}  form = {form}  route = {route}");
            for f in found {
                let mut line = format!("  {}", f.triple);
                if let Some(w) = f.witness {
                    line += &format!("  {w}");
                }
                if let Some(n) = &f.note {
                    line += &format!("  {n}");
                }
                println!("{line}");
            }
            if let Some(m) = message {
                println!("{m}");
            }
        }
    }
}

pub fn solve(
    p: u64,
    form: Form,
    t_max: Option<u64>,
    composite: bool,
    fmt: Format,
) -> Result<u8, EsError> {
    if p < 2 {
        return Err(invalid("p must be at least 2"));
    }
    if !is_prime(p) {
        if !composite {
            return Err(invalid(format!("{p} is not prime (pass --composite to use the oracle)")));
        }
        if form != Form::Any {
            return Err(invalid("composite denominators only support --form any"));
        }
        require_oracle_bound(p)?;
        let Some(t) = first_solution(p)? else {
            report_solutions(p, "any", "oracle", &[], Some("no solution"), fmt);
            return Ok(EXIT_NOT_FOUND);
        };
        report_solutions(p, "any", "brute-force oracle", &[Found::bare(t)], None, fmt);
        return Ok(EXIT_OK);
    }
    if t_max.is_some() && form != Form::Duv {
        return Err(invalid("--t-max only applies to --form duv"));
    }

    match form {
        Form::Any => {
            let e = egyptian_existence(p)?;
            let witness = duv_decompose(&e.triple, p)?;
            let found = Found { triple: e.triple, witness, note: None };
            report_solutions(p, "any", &e.route.to_string(), &[found], None, fmt);
            Ok(EXIT_OK)
        }
        Form::Duv => {
            if let Some(t_max) = t_max {
                let hit = thm_c_search(p, t_max)?;
                let route = "divisor-shift search";
                let Some(hit) = hit else {
                    let msg = format!("no divisor-shift witness with t <= {t_max} (bounded search)");
                    report_solutions(p, "duv", route, &[], Some(&msg), fmt);
                    return Ok(EXIT_NOT_FOUND);
                };
                let w = hit.witness;
                let mut f = Found::duv(&hit.solution);
                f.note = Some(format!("t={} w={}", w.t, w.w));
                report_solutions(p, "duv", route, &[f], None, fmt);
                return Ok(EXIT_OK);
            }
            let all = duv_complete_search(p)?;
            let route = "duv-form complete search";
            if all.is_empty() {
                let msg = "no duv-form solution exists (complete search)";
                report_solutions(p, "duv", route, &[], Some(msg), fmt);
                return Ok(EXIT_NOT_FOUND);
            }
            let found: Vec<Found> = all.iter().map(Found::duv).collect();
            report_solutions(p, "duv", route, &found, None, fmt);
            Ok(EXIT_OK)
        }
        Form::Gcd => {
            let groups = thm_d_search(p)?;
            let route = "gcd-form divisor search";
            let found: Vec<Found> = groups
                .iter()
                .flat_map(|g| {
                    g.triples.iter().map(move |t| Found {
                        triple: *t,
                        witness: None,
                        note: Some(format!("n={}", g.n)),
                    })
                })
                .collect();
            if found.is_empty() {
                let msg = "no gcd-form solution (no n with 4n - p dividing p + 1)";
                report_solutions(p, "gcd", route, &[], Some(msg), fmt);
                return Ok(EXIT_NOT_FOUND);
            }
            report_solutions(p, "gcd", route, &found, None, fmt);
            Ok(EXIT_OK)
        }
        Form::Pair => {
            let route = "equal-term pair";
            let pair = if p >= 3 { thm_f_pair(p)? } else { None };
            let Some(pair) = pair else {
                let msg = format!("no equal-term pair: {p} is not 3 mod 4");
                report_solutions(p, "pair", route, &[], Some(&msg), fmt);
                return Ok(EXIT_NOT_FOUND);
            };
            let found = [
                Found { triple: pair.x_eq_y, witness: None, note: Some("x=y".into()) },
                Found { triple: pair.y_eq_z, witness: None, note: Some("y=z".into()) },
            ];
            report_solutions(p, "pair", route, &found, None, fmt);
            Ok(EXIT_OK)
        }
    }
}

pub fn enumerate(n: u64, cap: Option<usize>, shards: usize, fmt: Format) -> Result<u8, EsError> {
    if n == 0 {
        return Err(invalid("n must be positive"));
    }
    require_oracle_bound(n)?;
    let e = enumerate_sharded(n, cap, shards)?;
    match fmt {
        Format::Json => print_json(&json!({
            "n": n,
            "count": e.triples.len(),
            "truncated": e.truncated,
            "triples": e.triples.iter().map(triple_json).collect::<Vec<_>>(),
        })),
        Format::Csv => {
            let rows: Vec<Vec<String>> = e
                .triples
                .iter()
                .map(|t| vec![n.to_string(), t.x().to_string(), t.y().to_string(), t.z().to_string()])
                .collect();
            print_csv(&["n", "x", "y", "z"], &rows);
        }
        Format::Plain => {
            for t in &e.triples {
                println!("{t}");
            }
            let more = if e.truncated { " (truncated by --cap)" } else { "" };
            println!("count: {}{more}", e.triples.len());
        }
    }
    Ok(EXIT_OK)
}

#[derive(Debug, Clone, Copy)]
pub struct CensusFlags {
    pub duv: bool,
    pub gcd: bool,
    pub pairs: bool,
    pub count: bool,
    pub exists: bool,
}

impl CensusFlags {
    fn options(self, shards: usize) -> CensusOptions {
        let any = self.duv || self.gcd || self.pairs || self.count || self.exists;
        if !any {
            return CensusOptions { shards, ..CensusOptions::default() };
        }
        CensusOptions {
            duv: self.duv,
            gcd: self.gcd,
            pairs: self.pairs,
            count: self.count,
            exists: self.exists,
            shards,
        }
    }
}

fn census_summary(lo: u64, hi: u64, opts: &CensusOptions, records: &[CensusRecord]) -> Value {
    let mut s = json!({
        "lo": lo,
        "hi": hi,
        "primes": records.len(),
        "mordell_hard": records.iter().filter(|r| r.mordell_hard).count(),
    });
    if opts.duv {
        let less: Vec<u64> = records
            .iter()
            .filter(|r| r.has_duv == Some(false))
            .map(|r| r.p)
            .collect();
        s["duv_less"] = json!(less);
    }
    if opts.pairs {
        s["x_eq_y"] = json!(records.iter().filter(|r| r.xy == Some(true)).count());
        s["y_eq_z"] = json!(records.iter().filter(|r| r.yz == Some(true)).count());
    }
    if opts.gcd {
        s["gcd_form"] = json!(records
            .iter()
            .filter(|r| r.gcd_ns.as_ref().is_some_and(|v| !v.is_empty()))
            .count());
    }
    if opts.count {
        s["solutions"] = json!(records.iter().filter_map(|r| r.count).sum::<u64>());
    }
    if opts.exists {
        s["all_egyptian"] = json!(records.iter().all(|r| r.exists == Some(true)));
    }
    s
}

fn print_summary_plain(s: &Value) {
    println!("primes scanned: {} (range {}..={})", s["primes"], s["lo"], s["hi"]);
    if let Some(less) = s.get("duv_less").and_then(Value::as_array) {
        if less.is_empty() {
            println!("duv-less: none");
        } else {
            println!("duv-less: {}", join(less, ", "));
        }
    }
    if let (Some(xy), Some(yz)) = (s.get("x_eq_y"), s.get("y_eq_z")) {
        println!("x=y: {xy}  y=z: {yz}");
    }
    if let Some(g) = s.get("gcd_form") {
        println!("gcd-form: {g}");
    }
    if let Some(c) = s.get("solutions") {
        println!("solutions: {c}");
    }
    println!("mordell-hard: {}", s["mordell_hard"]);
    if let Some(all) = s.get("all_egyptian") {
        if all == &Value::Bool(true) {
            println!("all Egyptian: {} primes", s["primes"]);
        } else {
            println!("NOT all Egyptian");
        }
    }
}

fn record_csv_row(r: &CensusRecord) -> Vec<String> {
    let opt = |v: Option<String>| v.unwrap_or_default();
    vec![
        r.p.to_string(),
        opt(r.has_duv.map(|b| b.to_string())),
        opt(r.duv.as_ref().map(|w| w.len().to_string())),
        opt(r.gcd_ns.as_ref().map(|v| join(v, " "))),
        opt(r.xy.map(|b| b.to_string())),
        opt(r.yz.map(|b| b.to_string())),
        r.mordell_hard.to_string(),
        opt(r.count.map(|c| c.to_string())),
        opt(r.exists.map(|b| b.to_string())),
    ]
}

pub fn census(
    lo: u64,
    hi: u64,
    flags: CensusFlags,
    out: Option<PathBuf>,
    resume: bool,
    shards: Option<usize>,
    fmt: Format,
) -> Result<u8, EsError> {
    let range = PrimeRange::new(lo, hi)?;
    if flags.count {
        require_oracle_bound(hi)?;
    }
    let opts = flags.options(shards.unwrap_or_else(default_shards).max(1));
    let meta = StoreMeta::new(lo, hi, opts);

    let records = match &out {
        Some(path) if resume && path.exists() => {
            let (store, last) = CensusStore::resume(path, &meta)?;
            let start = last.map_or(lo, |p| p + 1);
            if start <= hi {
                store.append(&run_census(PrimeRange::new(start.max(2), hi)?, &opts)?)?;
            }
            read_records(path)?
        }
        Some(path) => {
            let store = CensusStore::create(path, &meta)?;
            let recs = run_census(range, &opts)?;
            store.append(&recs)?;
            recs
        }
        None => run_census(range, &opts)?,
    };

    let summary = census_summary(lo, hi, &opts, &records);
    match fmt {
        Format::Json => {
            for r in &records {
                println!("{}", serde_json::to_string(r).expect("record serializes"));
            }
            eprintln!("{summary}");
        }
        Format::Csv => {
            let rows: Vec<Vec<String>> = records.iter().map(record_csv_row).collect();
            print_csv(
                &["p", "has_duv", "duv", "gcd_ns", "xy", "yz", "mordell_hard", "count", "exists"],
                &rows,
            );
        }
        Format::Plain => print_summary_plain(&summary),
    }
    Ok(EXIT_OK)
}

pub fn discover(p: u64, fmt: Format) -> Result<u8, EsError> {
    if !is_prime(p) {
        return Err(invalid(format!("{p} is not prime")));
    }
    let classes = discover_congruence_classes(p)?;
    match fmt {
        Format::Json => {
            let v: Vec<Value> = classes
                .iter()
                .map(|c| {
                    json!({
                        "p": p, "q": c.q, "r": c.r, "d": c.d, "n": c.n, "dn": c.d * c.n,
                        "qr_obstruction": qr_obstruction_check(c),
                    })
                })
                .collect();
            print_json(&Value::Array(v));
        }
        Format::Csv => {
            let rows: Vec<Vec<String>> = classes
                .iter()
                .map(|c| {
                    vec![
                        p.to_string(),
                        c.q.to_string(),
                        c.r.to_string(),
                        c.d.to_string(),
                        c.n.to_string(),
                        (c.d * c.n).to_string(),
                        qr_obstruction_check(c).to_string(),
                    ]
                })
                .collect();
            print_csv(&["p", "q", "r", "d", "n", "dn", "qr_obstruction"], &rows);
        }
        Format::Plain => {
            for c in &classes {
                let qr = if qr_obstruction_check(c) { "non-residue" } else { "RESIDUE" };
                println!(
                    "{p} ≡ {} (mod {})  [d={}, n={}, dn={}]  r is a {qr} mod q",
                    c.r,
                    c.q,
                    c.d,
                    c.n,
                    c.d * c.n
                );
            }
        }
    }
    Ok(EXIT_OK)
}

pub fn verify(n: u64, x: u64, y: u64, z: u64, fmt: Format) -> Result<u8, EsError> {
    if [n, x, y, z].contains(&0) {
        return Err(invalid("all arguments must be positive"));
    }
    let t = match make_triple(n, x, y, z) {
        Ok(t) => t,
        Err(EsError::NotASolution { x, y, z, .. }) => {
            match fmt {
                Format::Json => print_json(&json!({
                    "n": n, "valid": false, "triple": { "x": x, "y": y, "z": z },
                })),
                Format::Csv => print_csv(
                    &["n", "x", "y", "z", "valid"],
                    &[vec![n.to_string(), x.to_string(), y.to_string(), z.to_string(), "false".into()]],
                ),
                Format::Plain => println!("invalid: 4/{n} != 1/{x} + 1/{y} + 1/{z}"),
            }
            return Ok(EXIT_INVALID_TRIPLE);
        }
        Err(e) => return Err(e),
    };
    let kind = classify_type(n, &t)?;
    let witness = if kind == SolutionType::Other { None } else { duv_decompose(&t, n)? };
    match fmt {
        Format::Json => print_json(&json!({
            "n": n,
            "valid": true,
            "triple": triple_json(&t),
            "type": kind,
            "gcd_form": t.is_gcd_form(),
            "x_eq_y": t.is_x_eq_y(),
            "y_eq_z": t.is_y_eq_z(),
            "duv": witness,
        })),
        Format::Csv => {
            let w = |f: fn(&DuvWitness) -> u64| witness.as_ref().map_or(String::new(), |w| f(w).to_string());
            print_csv(
                &["n", "x", "y", "z", "valid", "type", "gcd_form", "x_eq_y", "y_eq_z", "d", "u", "v", "witness_n"],
                &[vec![
                    n.to_string(),
                    t.x().to_string(),
                    t.y().to_string(),
                    t.z().to_string(),
                    "true".into(),
                    format!("{kind:?}"),
                    t.is_gcd_form().to_string(),
                    t.is_x_eq_y().to_string(),
                    t.is_y_eq_z().to_string(),
                    w(|w| w.d),
                    w(|w| w.u),
                    w(|w| w.v),
                    w(|w| w.n),
                ]],
            );
        }
        Format::Plain => {
            let yn = |b: bool| if b { "yes" } else { "no" };
            println!("valid: {t} solves 4/{n}");
            println!("type: {kind}");
            println!("gcd-form: {}", yn(t.is_gcd_form()));
            println!("x=y: {}  y=z: {}", yn(t.is_x_eq_y()), yn(t.is_y_eq_z()));
            match witness {
                Some(w) => println!("duv: {w}"),
                None => println!("duv: none"),
            }
        }
    }
    Ok(EXIT_OK)
}
