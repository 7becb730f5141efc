//! Thin command-line front end: every subcommand runs one library operation
//! and emits a JSON certificate on stdout. Exit code 0 when the verdict is
//! true, 1 when it is false (the evidence explains why), 2 on usage or
//! parse errors.

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use permc3::anf::perm_coords;
use permc3::cert::Certificate;
use permc3::descmult::{from_staircase, mult_to_staircase, parse_mult_table, DescMult};
use permc3::densesim::verify_gottesman_mochon;
use permc3::family::{uk_circuit, verify_uk};
use permc3::hierarchy::{is_c3_perm, is_semi_clifford_perm, reduce_to_staircase, refute_level};
use permc3::permgate::{
    gates_to_perm, gates_to_toffoli, is_staircase, parse_circuit, render_circuit, to_staircase,
    AffineMap, Gate, PermGate, ToffoliCircuit,
};
use permc3::search::{find_witness, survey, survey_sample, SurveyOptions};

#[derive(Parser)]
#[command(
    name = "permc3",
    version,
    about = "Certificates for permutation gates in the third level of the Clifford hierarchy"
)]
struct Cli {
    /// Pretty-print the JSON certificate.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Polynomial representation (one ANF coordinate per output bit).
    Poly {
        /// Circuit file in the shared text format, or `-` for stdin.
        #[arg(long)]
        circuit: String,
        /// Qubit count; defaults to the largest index in the circuit.
        #[arg(short, long)]
        n: Option<usize>,
    },
    /// Read the staircase Toffoli form of the circuit's permutation.
    Staircase {
        #[arg(long)]
        circuit: String,
        #[arg(short, long)]
        n: Option<usize>,
    },
    /// Reduce a C3 permutation to phi1 . staircase . phi2 with affine phi's.
    Reduce {
        #[arg(long)]
        circuit: String,
        #[arg(short, long)]
        n: Option<usize>,
    },
    /// Descending-multiplication table of a staircase circuit, or the
    /// circuit of a table.
    Mult {
        /// Staircase circuit file (TOF lines) or `-`.
        #[arg(long, conflicts_with = "table")]
        circuit: Option<String>,
        /// Multiplication table file (`e i j = k1 k2 ...` lines) or `-`.
        #[arg(long)]
        table: Option<String>,
        #[arg(short, long)]
        n: Option<usize>,
    },
    /// Certify U_k: in C3 with the inverse refuted at level k (3 <= k <= 5).
    Uk { k: usize },
    /// Classify every staircase circuit on n qubits (3 <= n <= 6), or a
    /// random sample at n = 7.
    Survey {
        #[arg(short, long)]
        n: usize,
        /// Power-of-two shard count (0 picks a default).
        #[arg(long, default_value_t = 0)]
        shards: u32,
        /// Resumable checkpoint file.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// Sample budget, required at n = 7.
        #[arg(long)]
        sample: Option<u64>,
        /// Seed for the n = 7 sampler.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Worker threads (0 = all cores).
        #[arg(long, default_value_t = 0)]
        threads: usize,
    },
    /// Verify the seven-qubit Gottesman-Mochon gate: G in C3, G^-1 X7 G not
    /// Clifford, and F G F^-1 equal to the staircase gate U3, exactly.
    VerifyGm,
    /// Full classification of a permutation circuit: staircase form, C3
    /// membership, semi-Cliffordness, refuted level.
    Classify {
        #[arg(long)]
        circuit: String,
        #[arg(short, long)]
        n: Option<usize>,
    },
    /// A 7-qubit staircase C3 circuit that is not semi-Clifford.
    Witness,
}

enum CliError {
    Usage(String),
}

impl From<permc3::permgate::PermError> for CliError {
    fn from(e: permc3::permgate::PermError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<permc3::descmult::DescMultError> for CliError {
    fn from(e: permc3::descmult::DescMultError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(format!("io error: {e}"))
    }
}

fn read_input(path: &str) -> Result<String, CliError> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf)?;
        Ok(buf)
    } else {
        Ok(std::fs::read_to_string(path)?)
    }
}

fn load_perm_circuit(path: &str, n: Option<usize>) -> Result<(Vec<Gate>, usize, PermGate), CliError> {
    let text = read_input(path)?;
    let gates = parse_circuit(&text)?;
    let max = gates.iter().map(Gate::max_index).max().unwrap_or(1);
    let n = match n {
        Some(n) if n >= max => n,
        Some(n) => {
            return Err(CliError::Usage(format!(
                "--n {n} is below the largest index {max} in the circuit"
            )))
        }
        None => max,
    };
    let perm = gates_to_perm(&gates, n)?;
    Ok((gates, n, perm))
}

fn affine_json(a: &AffineMap) -> Value {
    let rows: Vec<String> = (1..=a.n()).map(|i| a.mat().row(i).to_string()).collect();
    json!({ "matrix_rows": rows, "shift": a.shift().to_string() })
}

fn circuit_json(c: &ToffoliCircuit) -> Value {
    Value::String(render_circuit(&c.to_gates()))
}

fn table_evidence(table: &DescMult) -> Value {
    match table.is_associative() {
        Ok(()) => {
            let triples_zero = table.all_triples_zero().expect("associative");
            let circuit = mult_to_staircase(table).expect("associative");
            json!({
                "table": table.render(),
                "descending": true,
                "associative": true,
                "in_c3": true,
                "all_triples_zero": triples_zero,
                "semi_clifford": triples_zero,
                "circuit": circuit_json(&circuit),
            })
        }
        Err(w) => json!({
            "table": table.render(),
            "descending": true,
            "associative": false,
            "in_c3": false,
            "witness": w.to_string(),
        }),
    }
}

fn run(cli: Cli) -> Result<Certificate, CliError> {
    let started = Instant::now();
    match cli.command {
        Command::Poly { circuit, n } => {
            let (gates, n, perm) = load_perm_circuit(&circuit, n)?;
            let rep = perm_coords(&perm);
            let coords: Vec<String> = (1..=n).map(|i| rep.coord(i).to_string()).collect();
            Ok(Certificate::new(
                "polynomial-representation",
                json!({ "circuit": render_circuit(&gates), "n": n }),
                true,
                json!({ "coordinates": coords, "max_degree": rep.max_degree() }),
                started,
            ))
        }
        Command::Staircase { circuit, n } => {
            let (gates, n, perm) = load_perm_circuit(&circuit, n)?;
            let inputs = json!({ "circuit": render_circuit(&gates), "n": n });
            match to_staircase(&perm) {
                Ok(stairs) => Ok(Certificate::new(
                    "staircase-form",
                    inputs,
                    true,
                    json!({
                        "staircase": true,
                        "gates": stairs.len(),
                        "circuit": circuit_json(&stairs),
                    }),
                    started,
                )),
                Err(e) => Ok(Certificate::new(
                    "staircase-form",
                    inputs,
                    false,
                    json!({ "staircase": false, "reason": e.to_string() }),
                    started,
                )),
            }
        }
        Command::Reduce { circuit, n } => {
            let (gates, n, perm) = load_perm_circuit(&circuit, n)?;
            let inputs = json!({ "circuit": render_circuit(&gates), "n": n });
            match reduce_to_staircase(&perm) {
                Ok(red) => {
                    let mu_table = from_staircase(&red.mu, n).expect("staircase");
                    let exact = red.recompose(n) == perm;
                    Ok(Certificate::new(
                        "staircase-reduction",
                        inputs,
                        exact,
                        json!({
                            "in_c3": true,
                            "phi1": affine_json(&red.phi1),
                            "mu": circuit_json(&red.mu),
                            "phi2": affine_json(&red.phi2),
                            "mu_in_c3": mu_table.is_associative().is_ok(),
                            "recomposition_exact": exact,
                        }),
                        started,
                    ))
                }
                Err(e) => Ok(Certificate::new(
                    "staircase-reduction",
                    inputs,
                    false,
                    json!({ "in_c3": false, "witness": e.to_string() }),
                    started,
                )),
            }
        }
        Command::Mult { circuit, table, n } => match (circuit, table) {
            (Some(path), None) => {
                let text = read_input(&path)?;
                let gates = parse_circuit(&text)?;
                let toffolis = gates_to_toffoli(&gates)?;
                let max = toffolis.max_index().max(1);
                let n = n.unwrap_or(max).max(max);
                if !is_staircase(&toffolis) {
                    return Err(CliError::Usage(
                        "mult --circuit expects a staircase Toffoli circuit".into(),
                    ));
                }
                let table = from_staircase(&toffolis, n)?;
                let verdict = table.is_associative().is_ok();
                Ok(Certificate::new(
                    "descending-multiplication",
                    json!({ "circuit": render_circuit(&gates), "n": n }),
                    verdict,
                    table_evidence(&table),
                    started,
                ))
            }
            (None, Some(path)) => {
                let text = read_input(&path)?;
                let table = parse_mult_table(&text, n)?;
                let verdict = table.is_associative().is_ok();
                Ok(Certificate::new(
                    "descending-multiplication",
                    json!({ "table": text, "n": table.n() }),
                    verdict,
                    table_evidence(&table),
                    started,
                ))
            }
            _ => Err(CliError::Usage("mult needs exactly one of --circuit or --table".into())),
        },
        Command::Uk { k } => {
            if !(3..=5).contains(&k) {
                return Err(CliError::Usage("uk supports 3 <= k <= 5".into()));
            }
            let cert = verify_uk(k);
            let circuit = uk_circuit(k);
            let verdict = cert.holds_at(k);
            Ok(Certificate::new(
                "uk-family",
                json!({ "k": k }),
                verdict,
                json!({
                    "certificate": cert,
                    "circuit": circuit_json(&circuit),
                }),
                started,
            ))
        }
        Command::Survey { n, shards, checkpoint, sample, seed, threads } => {
            if n == 7 {
                let budget = sample.ok_or_else(|| {
                    CliError::Usage(
                        "survey -n 7 needs --sample (2^35 circuits is past desk scale)".into(),
                    )
                })?;
                let report =
                    survey_sample(n, budget, seed).map_err(|e| CliError::Usage(e.to_string()))?;
                return Ok(Certificate::new(
                    "staircase-survey-sample",
                    json!({ "n": n, "sample": budget, "seed": seed }),
                    true,
                    serde_json::to_value(&report).expect("serializable"),
                    started,
                ));
            }
            let opts = SurveyOptions { shards, checkpoint, threads };
            let report = survey(n, &opts).map_err(|e| CliError::Usage(e.to_string()))?;
            let verdict = report.non_sc_c3 == 0;
            Ok(Certificate::new(
                "staircase-survey",
                json!({ "n": n, "shards": report.shards }),
                verdict,
                serde_json::to_value(&report).expect("serializable"),
                started,
            ))
        }
        Command::VerifyGm => {
            let cert = verify_gottesman_mochon();
            let verdict = cert.all_pass();
            Ok(Certificate::new(
                "gottesman-mochon",
                json!({ "n": 7 }),
                verdict,
                serde_json::to_value(&cert).expect("serializable"),
                started,
            ))
        }
        Command::Classify { circuit, n } => {
            let (gates, n, perm) = load_perm_circuit(&circuit, n)?;
            let c3 = is_c3_perm(&perm);
            let staircase = to_staircase(&perm).ok();
            let semi_clifford = is_semi_clifford_perm(&perm).ok();
            let refuted = refute_level(&perm);
            let verdict = c3.is_ok();
            Ok(Certificate::new(
                "classify",
                json!({ "circuit": render_circuit(&gates), "n": n }),
                verdict,
                json!({
                    "in_c3": verdict,
                    "witness": c3.err().map(|w| w.to_string()),
                    "staircase_form": staircase.as_ref().map(circuit_json),
                    "semi_clifford": semi_clifford,
                    "inverse_coordinate_degree_refutes_level": refuted,
                }),
                started,
            ))
        }
        Command::Witness => {
            let circuit = find_witness();
            let n = 7;
            let perm = permc3::permgate::circuit_to_perm(&circuit, n).expect("witness circuit");
            let table = from_staircase(&circuit, n).expect("staircase");
            let in_c3 = is_c3_perm(&perm).is_ok();
            let triples_zero = table.all_triples_zero().expect("associative");
            let inverse_refuted = refute_level(&perm.inverse());
            Ok(Certificate::new(
                "non-semi-clifford-witness",
                json!({ "n": n }),
                in_c3 && !triples_zero,
                json!({
                    "circuit": circuit_json(&circuit),
                    "in_c3": in_c3,
                    "all_triples_zero": triples_zero,
                    "semi_clifford": triples_zero,
                    "inverse_refuted_at": inverse_refuted,
                }),
                started,
            ))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pretty = cli.pretty;
    match run(cli) {
        Ok(cert) => {
            println!("{}", cert.to_json(pretty));
            if cert.verdict {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
