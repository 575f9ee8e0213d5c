use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use oqec::catalog;
use oqec::codefile::{parse_code_file, serialize};
use oqec::decoder::{self, Decoder, Outcome};
use oqec::distance::{self, Correctability, DistanceMethod, LogicalLabel, OperatorClass};
use oqec::montecarlo::{self, NoiseModel};
use oqec::oracle::{self, DenseVerdict};
use oqec::pauli::{paulis_up_to_weight, PauliOp};
use oqec::search::{self, SearchError, SearchOptions, SweepSpec};
use oqec::SubsystemCode;

#[derive(Parser)]
#[command(name = "oqec", version, about = "Subsystem stabilizer code workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Catalog name or path to a code file.
    #[arg(long)]
    code: Option<String>,
    /// Print one JSON object instead of key: value lines.
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Print n, k and r.
    Params {
        #[command(flatten)]
        common: Common,
    },
    /// Minimum weight of a nontrivial logical operator.
    Distance {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "coset")]
        method: DistanceMethod,
        #[arg(long, default_value_t = distance::DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Stabilizer outcomes for an error.
    Syndrome {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        error: String,
    },
    /// Decode an error with a lookup table and classify what is left.
    Decode {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        error: Option<String>,
        #[arg(long, default_value_t = 1)]
        t: usize,
        /// Print the lookup table, one `<syndrome> <pauli>` line per entry.
        #[arg(long)]
        dump_table: bool,
    },
    /// Promote every gauge-Z operator to a stabilizer.
    GaugeFix {
        #[command(flatten)]
        common: Common,
    },
    /// Search a stabilizer code for gauge symmetries.
    FindGauge {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1)]
        distance_min: u32,
        #[arg(long, default_value_t = distance::DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long, default_value_t = 0)]
        workers: usize,
    },
    /// Enumerate every [[n,k,r]] subsystem code and report those reaching a distance.
    Sweep {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        distance_min: u32,
        #[arg(long, default_value_t = distance::DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long, default_value_t = 0)]
        workers: usize,
        /// Skip subspaces that are not canonical under qubit permutations.
        #[arg(long)]
        pruning: bool,
        #[arg(long)]
        json: bool,
    },
    /// Check the code against dense matrices.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Error weight for the correctability check.
        #[arg(long, default_value_t = 1)]
        t: usize,
    },
    /// Monte Carlo logical error rate under depolarizing noise.
    Simulate {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        shots: u64,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 1)]
        t: usize,
        #[arg(long, default_value_t = 0)]
        workers: usize,
    },
    /// List built-in codes, or print one as a code file.
    Catalog {
        #[command(flatten)]
        common: Common,
    },
}

/// Ordered key/value output.
#[derive(Default)]
struct Report {
    fields: Vec<(String, Value)>,
    raw: Option<String>,
}

impl Report {
    fn put(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.fields.push((key.to_string(), value.into()));
        self
    }

    fn list(&mut self, key: &str, items: impl IntoIterator<Item = String>) -> &mut Self {
        let v: Vec<Value> = items.into_iter().map(Value::String).collect();
        self.put(key, Value::Array(v))
    }

    fn code(&mut self, c: &SubsystemCode) -> &mut Self {
        let ops = |v: &mut dyn Iterator<Item = &PauliOp>| v.map(|p| p.to_string()).collect::<Vec<_>>();
        self.list("stabilizer", ops(&mut c.stabilizer.iter()));
        self.list("gauge_x", ops(&mut c.gauge.iter().map(|p| &p.x)));
        self.list("gauge_z", ops(&mut c.gauge.iter().map(|p| &p.z)));
        self.list("logical_x", ops(&mut c.logical.iter().map(|p| &p.x)));
        self.list("logical_z", ops(&mut c.logical.iter().map(|p| &p.z)))
    }

    fn render(&self, json: bool) -> String {
        if json {
            let mut obj = Map::new();
            for (k, v) in &self.fields {
                obj.insert(k.clone(), v.clone());
            }
            if let Some(raw) = &self.raw {
                obj.insert("text".into(), Value::String(raw.clone()));
            }
            return format!("{}\n", Value::Object(obj));
        }
        let mut out = String::new();
        for (k, v) in &self.fields {
            match v {
                Value::Array(items) => {
                    for (i, item) in items.iter().enumerate() {
                        out.push_str(&format!("{k}[{i}]: {}\n", plain(item)));
                    }
                }
                other => out.push_str(&format!("{k}: {}\n", plain(other))),
            }
        }
        if let Some(raw) = &self.raw {
            out.push_str(raw);
        }
        out
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "none".into(),
        other => other.to_string(),
    }
}

enum Failure {
    /// Bad input or a failed check; exit 1.
    Input(String),
    /// Output is still printed, then exit 1.
    Check(Report),
    /// A search stopped at its budget; exit 2.
    Inconclusive(Report),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Input(e.to_string())
    }
}

type CmdResult = Result<Report, Failure>;

fn load_code(common: &Common) -> Result<SubsystemCode, Failure> {
    let Some(name) = common.code.as_deref() else {
        return Err(Failure::Input("--code is required".into()));
    };
    if catalog::NAMES.contains(&name) {
        return Ok(catalog::catalog(name)?);
    }
    let text = fs::read_to_string(name).map_err(|e| Failure::Input(format!("{name}: {e}")))?;
    parse_code_file(&text).map_err(|e| Failure::Input(format!("{name}: {e}")))
}

fn parse_error(code: &SubsystemCode, s: &str) -> Result<PauliOp, Failure> {
    let e: PauliOp = s.parse().map_err(|e| Failure::Input(format!("--error: {e}")))?;
    if e.num_qubits() != code.n {
        return Err(Failure::Input(format!(
            "--error acts on {} qubits, code has {}",
            e.num_qubits(),
            code.n
        )));
    }
    Ok(e)
}

fn params(common: &Common) -> CmdResult {
    let p = load_code(common)?.parameters()?;
    let mut rep = Report::default();
    rep.put("n", p.n).put("k", p.k).put("r", p.r);
    Ok(rep)
}

fn distance_cmd(common: &Common, method: DistanceMethod, budget: u64) -> CmdResult {
    let code = load_code(common)?;
    let d = distance::distance(&code, method, budget)?;
    let mut rep = Report::default();
    rep.put("d", d);
    Ok(rep)
}

fn syndrome_cmd(common: &Common, error: &str) -> CmdResult {
    let code = load_code(common)?;
    let e = parse_error(&code, error)?;
    let mut rep = Report::default();
    rep.put("syndrome", decoder::syndrome(&code, &e)?.to_string());
    Ok(rep)
}

fn decode_cmd(common: &Common, error: Option<&str>, t: usize, dump: bool) -> CmdResult {
    let code = load_code(common)?;
    let table = decoder::build_table(&code, t)?;
    let mut rep = Report::default();
    if dump {
        rep.put("entries", table.len());
        rep.raw = Some(table.dump());
    }
    let Some(error) = error else {
        if dump {
            return Ok(rep);
        }
        return Err(Failure::Input("--error is required unless --dump-table is given".into()));
    };
    let e = parse_error(&code, error)?;
    let dec = Decoder::new(&code, table)?;
    let s = dec.syndrome(&e);
    rep.put("syndrome", s.to_string());
    rep.put("correction", dec.table().lookup(&s).map(|p| p.to_string()));
    match dec.decode(&e)? {
        Outcome::GaugeSuccess { residual } => {
            rep.put("outcome", "gauge-success").put("residual", residual.to_string());
        }
        Outcome::LogicalFailure { class, residual } => {
            rep.put("outcome", "logical-failure")
                .put("class", class.to_string())
                .put("residual", residual.to_string());
        }
        Outcome::Unrecoverable => {
            rep.put("outcome", "unrecoverable");
        }
    }
    Ok(rep)
}

fn gauge_fix_cmd(common: &Common) -> CmdResult {
    let fixed = load_code(common)?.gauge_fix()?;
    let p = fixed.parameters()?;
    let d = distance::distance(&fixed, DistanceMethod::Coset, distance::DEFAULT_BUDGET)?;
    let mut rep = Report::default();
    rep.put("n", p.n).put("k", p.k).put("r", p.r).put("d", d);
    rep.code(&fixed);
    Ok(rep)
}

fn find_gauge_cmd(common: &Common, d_min: u32, budget: u64, workers: usize) -> CmdResult {
    let code = load_code(common)?;
    let opts = SearchOptions { budget, workers };
    let mut rep = Report::default();
    match search::find_gauge_symmetries(&code, d_min, &opts) {
        Ok(res) => {
            log::info!("find-gauge finished in {:.2?}", res.elapsed);
            rep.put("r", res.r_found)
                .put("exhausted", true)
                .put("candidates", res.candidates)
                .put("survivors", res.survivors);
            if let Some(c) = &res.restructured {
                rep.put("d", res.distance);
                rep.code(c);
            }
            Ok(rep)
        }
        Err(SearchError::BudgetExhausted { r, examined, needed, budget }) => {
            rep.put("exhausted", false)
                .put("candidates", examined)
                .put("next_level_r", r)
                .put("next_level_size", needed.to_string())
                .put("budget", budget);
            Err(Failure::Inconclusive(rep))
        }
        Err(e) => Err(e.into()),
    }
}

#[allow(clippy::too_many_arguments)]
fn sweep_cmd(n: usize, k: usize, r: usize, d_min: u32, budget: u64, workers: usize, pruning: bool) -> CmdResult {
    if r + k > n {
        return Err(Failure::Input(format!("r + k = {} exceeds n = {n}", r + k)));
    }
    let spec = SweepSpec { n, k, r, d_min, budget, symmetry_pruning: pruning };
    let res = search::sweep_nonexistence(&spec, workers)?;
    log::info!("sweep finished in {:.2?}", res.elapsed);
    let mut rep = Report::default();
    rep.put("n", n)
        .put("k", k)
        .put("r", r)
        .put("distance_min", d_min)
        .put("exhausted", res.exhausted)
        .put("singleton_excluded", res.short_circuit)
        .put("isotropic_subspaces", res.isotropic_subspaces)
        .put("sectors_per_subspace", res.sectors_per_subspace)
        .put("pruned", res.pruned)
        .put("candidates", res.candidates)
        .put("found", res.found_count);
    if let Some(first) = res.found.first() {
        rep.list("example_stabilizer", first.stabilizer.iter().map(|p| p.to_string()));
        rep.list("example_gauge_x", first.gauge.iter().map(|p| p.x.to_string()));
        rep.list("example_gauge_z", first.gauge.iter().map(|p| p.z.to_string()));
    }
    if !res.exhausted {
        return Err(Failure::Inconclusive(rep));
    }
    Ok(rep)
}

fn verify_cmd(common: &Common, t: usize) -> CmdResult {
    let code = load_code(common)?;
    let proj = oracle::code_projector(&code)?;
    let projector = proj.self_check(&code);
    let structure = oracle::verify_subsystem_structure(&code)?;
    let mut errors = vec![PauliOp::identity(code.n)];
    errors.extend(paulis_up_to_weight(code.n, t));
    let dense = oracle::verify_correctability(&code, &errors)?;
    let group = distance::is_correctable_set(&code, &errors)?;
    let group_ok = group == Correctability::Correctable;
    // Every error and every product of two errors, classified both ways.
    let cls = distance::Classifier::new(&code)?;
    let mut disagreements = 0u64;
    for e in &errors {
        let expected = match cls.classify(e) {
            OperatorClass::OutsideN => DenseVerdict::Vanishes,
            OperatorClass::Gauge => DenseVerdict::Commutant,
            OperatorClass::Logical(_) => DenseVerdict::NonCommuting,
        };
        if oracle::dense_verdict(&proj, &code, e)? != expected {
            disagreements += 1;
        }
    }
    let agree = dense.passed() == group_ok && disagreements == 0;
    let ok = projector < oracle::TOLERANCE && structure.passed() && agree;
    let mut rep = Report::default();
    rep.put("projector", if projector < oracle::TOLERANCE { "pass" } else { "fail" })
        .put("code_space_dimension", proj.rank())
        .put("structure", if structure.passed() { "pass" } else { "fail" })
        .put("structure_checks", structure.checks);
    rep.list("structure_failure", structure.failures.iter().cloned());
    rep.put("errors", errors.len())
        .put("pairs", dense.pairs)
        .put("correctable", group_ok)
        .put("dense_correctable", dense.passed());
    if let Some((a, b)) = dense.failure {
        rep.put("witness", format!("{} {}", errors[a], errors[b]));
    }
    rep.put("classification_disagreements", disagreements)
        .put("agreement", agree);
    if ok {
        Ok(rep)
    } else {
        Err(Failure::Check(rep))
    }
}

fn simulate_cmd(common: &Common, p: f64, shots: u64, seed: Option<u64>, t: usize, workers: usize) -> CmdResult {
    let Some(seed) = seed else {
        return Err(Failure::Input("simulate requires --seed".into()));
    };
    let code = load_code(common)?;
    let model = NoiseModel::new(p)?;
    let table = decoder::build_table(&code, t)?;
    let res = montecarlo::run(&code, &table, model, shots, seed, workers)?;
    let k = code.k();
    let mut rep = Report::default();
    rep.put("p", p)
        .put("shots", res.shots)
        .put("seed", seed)
        .put("t", t)
        .put("gauge_success", res.gauge_success)
        .put("logical_failure", res.logical_failures());
    for (idx, &count) in res.logical_failure.iter().enumerate().skip(1) {
        let mask = (1u64 << k) - 1;
        let label = LogicalLabel { k, x: idx as u64 & mask, z: (idx as u64 >> k) & mask };
        rep.put(&format!("logical_failure_{label}"), count);
    }
    rep.put("unrecoverable", res.unrecoverable)
        .put("failure_rate", res.failure_rate());
    Ok(rep)
}

fn catalog_cmd(common: &Common) -> CmdResult {
    let mut rep = Report::default();
    match common.code.as_deref() {
        Some(name) => {
            let c = catalog::catalog(name)?;
            rep.raw = Some(serialize(&c));
        }
        None => {
            for name in catalog::NAMES {
                let c = catalog::catalog(name)?;
                let d = distance::distance(&c, DistanceMethod::Coset, distance::DEFAULT_BUDGET)?;
                rep.put(name, c.parameters()?.with_distance(d).to_string());
            }
        }
    }
    Ok(rep)
}

fn dispatch(cmd: &Command) -> (CmdResult, bool) {
    match cmd {
        Command::Params { common } => (params(common), common.json),
        Command::Distance { common, method, budget } => (distance_cmd(common, *method, *budget), common.json),
        Command::Syndrome { common, error } => (syndrome_cmd(common, error), common.json),
        Command::Decode { common, error, t, dump_table } => {
            (decode_cmd(common, error.as_deref(), *t, *dump_table), common.json)
        }
        Command::GaugeFix { common } => (gauge_fix_cmd(common), common.json),
        Command::FindGauge { common, distance_min, budget, workers } => {
            (find_gauge_cmd(common, *distance_min, *budget, *workers), common.json)
        }
        Command::Sweep { n, k, r, distance_min, budget, workers, pruning, json } => {
            (sweep_cmd(*n, *k, *r, *distance_min, *budget, *workers, *pruning), *json)
        }
        Command::Verify { common, t } => (verify_cmd(common, *t), common.json),
        Command::Simulate { common, p, shots, seed, t, workers } => {
            (simulate_cmd(common, *p, *shots, *seed, *t, *workers), common.json)
        }
        Command::Catalog { common } => (catalog_cmd(common), common.json),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let (result, json) = dispatch(&cli.command);
    match result {
        Ok(rep) => {
            print!("{}", rep.render(json));
            ExitCode::SUCCESS
        }
        Err(Failure::Check(rep)) => {
            print!("{}", rep.render(json));
            ExitCode::from(1)
        }
        Err(Failure::Inconclusive(rep)) => {
            print!("{}", rep.render(json));
            eprintln!("error: search inconclusive within budget");
            ExitCode::from(2)
        }
        Err(Failure::Input(msg)) => {
            if json {
                println!("{}", json!({ "error": msg }));
            }
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
