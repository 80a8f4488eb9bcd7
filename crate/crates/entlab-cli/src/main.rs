//! entlab command-line surface.
//!
//! Subcommands:
//!   compute --notion <notion> --scenario <file>    one entropy verdict
//!   verify  --suite <ID> --trials N --seed S       a verification suite
//!   reduce  --reduction <name> --scenario <file>   a constructive reduction
//!   search  --target <t> --budget N --seed S       separation search
//!
//! JSON goes to stdout; --pretty adds human-readable tables. Exit codes:
//! 0 = PASS/OK, 1 = violation found, 2 = usage or input error.

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use entlab::dist::Dist;
use entlab::entropy::{self, Notion, Variant};
use entlab::harness::search::{search_separation, SeparationTarget};
use entlab::harness::suites::run_suite;
use entlab::rat::{format_rat, parse_rat};
use entlab::reductions::{self, CountMode};
use entlab::scenario::{verdict_to_json, ScenarioFile};
use entlab::Error;

#[derive(Parser)]
#[command(name = "entlab", about = "exact computational-entropy laboratory", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute one entropy verdict for a scenario file.
    Compute {
        #[arg(long)]
        notion: String,
        #[arg(long)]
        scenario: String,
        #[arg(long)]
        pretty: bool,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 10)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        pretty: bool,
    },
    /// Run a constructive reduction on a scenario file.
    Reduce {
        #[arg(long)]
        reduction: String,
        #[arg(long)]
        scenario: String,
        #[arg(long)]
        pretty: bool,
    },
    /// Search for separation instances between notions.
    Search {
        #[arg(long)]
        target: String,
        #[arg(long, default_value_t = 1000)]
        budget: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        n: u32,
        #[arg(long, default_value_t = 1)]
        m: u32,
        #[arg(long)]
        pretty: bool,
    },
}

fn emit(value: &Value, pretty: bool) {
    if pretty {
        println!("{}", serde_json::to_string_pretty(value).unwrap());
    } else {
        println!("{}", serde_json::to_string(value).unwrap());
    }
}

fn load_scenario(path: &str) -> Result<ScenarioFile, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Scenario(format!("cannot read {path}: {e}")))?;
    ScenarioFile::from_json(&text)
}

fn run_compute(notion: &str, scenario: &str, pretty: bool) -> Result<i32, Error> {
    let sc = load_scenario(scenario)?;
    let j = sc.joint()?;
    let notion = Notion::from_str(notion)?;
    let out = match notion {
        Notion::Min => {
            let x = j.x_marginal();
            let worst = j.cond_guess_prob_worst().ok();
            json!({
                "notion": "min",
                "guess_prob": format_rat(&x.guess_prob()),
                "k": x.min_entropy_display(),
                "cond_guess_prob_avg": format_rat(&j.cond_guess_prob_avg()),
                "k_avg": entlab::rat::neg_log2(&j.cond_guess_prob_avg()),
                "cond_guess_prob_worst": worst.as_ref().map(format_rat),
                "k_worst": worst.as_ref().map(entlab::rat::neg_log2),
            })
        }
        Notion::MetricUncond => {
            // the unconditional notion sees only the X-marginal, so the
            // class must be over x alone
            let spec = sc
                .class
                .as_ref()
                .ok_or_else(|| Error::Scenario("missing class".into()))?;
            let class = entlab::scenario::build_class(spec, sc.n, 0)?;
            let params = sc.params()?;
            verdict_to_json(&entropy::metric_uncond(&j.x_marginal(), &class, &params)?)
        }
        Notion::MetricWorst => {
            let class = sc.class()?;
            let params = sc.params()?;
            verdict_to_json(&entropy::metric_cond(&j, &class, &params, Variant::Worst)?)
        }
        Notion::MetricAvg => {
            let class = sc.class()?;
            let params = sc.params()?;
            verdict_to_json(&entropy::metric_cond(&j, &class, &params, Variant::Avg)?)
        }
        Notion::ModulusAvg => {
            let class = sc.class()?;
            let params = sc.params()?;
            verdict_to_json(&entropy::modulus_cond(&j, &class, &params, Variant::Avg)?)
        }
        Notion::ModulusWorst => {
            let class = sc.class()?;
            let params = sc.params()?;
            verdict_to_json(&entropy::modulus_cond(&j, &class, &params, Variant::Worst)?)
        }
        Notion::HillAvg => {
            let class = sc.class()?;
            let params = sc.params()?;
            verdict_to_json(&entropy::hill_cond_avg(&j, &class, &params)?)
        }
        Notion::Decomposable => {
            let class = sc.class()?;
            let params = sc.params()?;
            let out = entropy::decomposable_check(&j, &class, &params)?;
            let mut v = verdict_to_json(&out.verdict);
            v.as_object_mut()
                .unwrap()
                .insert("value".into(), json!(format_rat(&out.value)));
            v
        }
        Notion::Squared => {
            // squared indistinguishability compares two joints sharing a
            // Z-marginal: the scenario's joint_y when given, otherwise the
            // per-member modulus witness at the stated cap
            let class = sc.class()?;
            let params = sc.params()?;
            match sc.joint_y()? {
                Some(jy) => {
                    let sq = entropy::squared_advantage(&j, &jy, &class)?;
                    json!({
                        "notion": "squared",
                        "holds": sq <= params.epsilon,
                        "squared_aggregate": format_rat(&sq),
                        "epsilon": format_rat(&params.epsilon),
                    })
                }
                None => {
                    let mut worst = entlab::rat::rat_zero();
                    for d in &class {
                        let detail = entropy::modulus_min(&j, d, &params.gamma, Variant::Avg)?;
                        let w = entropy::modulus_witness(&j, d, &detail.assignment)?;
                        let sq = entropy::squared_advantage(&j, &w, std::slice::from_ref(d))?;
                        if sq > worst {
                            worst = sq;
                        }
                    }
                    json!({
                        "notion": "squared",
                        "max_squared_aggregate": format_rat(&worst),
                        "gamma": format_rat(&params.gamma),
                    })
                }
            }
        }
    };
    emit(&out, pretty);
    Ok(0)
}

fn run_verify(suite: &str, trials: u64, seed: u64, pretty: bool) -> Result<i32, Error> {
    let timed = run_suite(suite, trials, seed)?;
    emit(&timed.to_json(), pretty);
    if pretty {
        println!(
            "suite {} : {} ({} instances, {} violations, {} ms)",
            timed.report.suite,
            if timed.report.pass() { "PASS" } else { "FAIL" },
            timed.report.instances,
            timed.report.violations.len(),
            timed.wall_ms
        );
    }
    Ok(if timed.report.pass() { 0 } else { 1 })
}

fn run_reduce(reduction: &str, scenario: &str, pretty: bool) -> Result<i32, Error> {
    let sc = load_scenario(scenario)?;
    let out = match reduction {
        "leakage-witness" => {
            let j = sc.joint()?;
            let d = sc.single_distinguisher()?;
            let params = sc.params()?;
            let x = j.x_marginal();
            // Y defaults to the projection witness at the stated cap
            let values: Vec<entlab::Rat> = d.values().to_vec();
            let target = x.expect(&values)?;
            let (_, probs) = entlab::entropy::interval::project_to_achievable(
                &values,
                &params.gamma,
                &target,
            )?;
            let y = Dist::new(x.domain(), probs)?;
            let w = reductions::leakage_witness(&d, &x, &y, &j, &params.gamma, &params.epsilon)?;
            json!({
                "reduction": "leakage-witness",
                "pieces": w.pieces.iter().map(|p| p.as_ref().map(|piece| json!({
                    "z": piece.z,
                    "cap_bound": format_rat(&piece.cap_bound),
                    "gap": format_rat(&piece.gap),
                    "gap_bound": format_rat(&piece.gap_bound),
                    "witness": entlab::scenario::dist_to_json(&piece.dist),
                }))).collect::<Vec<_>>(),
                "transcript": w.transcript,
            })
        }
        "modulus-chain" => {
            let j = sc.joint()?;
            let (m1, m2) = match (sc.m1, sc.m2) {
                (Some(a), Some(b)) => (a, b),
                _ => return Err(Error::Scenario("modulus-chain needs m1 and m2".into())),
            };
            let class = sc.class()?;
            let params = sc.params()?;
            let arts = reductions::modulus_chain_rule(&j, m1, m2, &class, &params)?;
            json!({
                "reduction": "modulus-chain",
                "artifacts": arts.iter().map(|a| json!({
                    "d_index": a.d_index,
                    "modulus_aggregate": format_rat(&a.modulus_aggregate),
                    "aggregate_bound": format_rat(&a.aggregate_bound),
                    "avg_guess_prob": format_rat(&a.avg_guess_prob),
                    "guess_bound": format_rat(&a.guess_bound),
                    "witness": entlab::scenario::joint_to_json(&a.witness),
                    "transcript": a.transcript,
                })).collect::<Vec<_>>(),
            })
        }
        "core-event" => {
            let j = sc.joint()?;
            let d = sc.single_distinguisher()?;
            let params = sc.params()?;
            let art = reductions::core_lemma_event(&j, &d, &params.gamma, &params.epsilon)?;
            json!({
                "reduction": "core-event",
                "chose_complement": art.chose_complement,
                "event_probability": format_rat(&art.event_probability),
                "bound": format_rat(&art.bound),
                "transcript": art.transcript,
            })
        }
        "heavy-truncation" => {
            let j = sc.joint()?;
            let d = sc.single_distinguisher()?;
            let params = sc.params()?;
            let t = sc.t.unwrap_or(0);
            let art = reductions::heavy_truncation(&j, &d, &params.gamma, t)?;
            json!({
                "reduction": "heavy-truncation",
                "kept_z": art.kept_z,
                "advantage": format_rat(&art.advantage),
                "bound": format_rat(&art.bound),
                "selector_gates": art.selector_gates,
                "transcript": art.transcript,
            })
        }
        "sampler" => {
            let j = sc.joint()?;
            let d = sc.single_distinguisher()?;
            let eps = parse_rat(
                sc.eps
                    .as_deref()
                    .ok_or_else(|| Error::Scenario("sampler reduction needs eps".into()))?,
            )?;
            let sampler_file = sc
                .sampler
                .as_ref()
                .ok_or_else(|| Error::Scenario("sampler reduction needs sampler".into()))?;
            let mut conditionals = Vec::new();
            for col in &sampler_file.conditionals {
                let probs = col
                    .iter()
                    .map(|s| parse_rat(s))
                    .collect::<Result<Vec<_>, _>>()?;
                conditionals.push(Dist::new(j.x_domain(), probs)?);
            }
            let sampler = reductions::Sampler::new(conditionals, sampler_file.declared_size)?;
            let art = reductions::sampler_distinguisher(&d, &sampler, &j, &eps)?;
            json!({
                "reduction": "sampler",
                "l": art.l,
                "accept_x": format_rat(&art.accept_x),
                "accept_y": format_rat(&art.accept_y),
                "gap": format_rat(&art.gap),
                "gap_bound": format_rat(&art.gap_bound),
                "composite_size": art.composite_size,
                "transcript": art.transcript,
            })
        }
        "approx-count" => {
            let j = sc.joint()?;
            let spec = sc
                .distinguisher
                .as_ref()
                .ok_or_else(|| Error::Scenario("approx-count needs a dsl distinguisher".into()))?;
            let src = spec
                .source
                .as_deref()
                .ok_or_else(|| Error::Scenario("approx-count needs a dsl distinguisher".into()))?;
            let circuit =
                entlab::circuit::Circuit::parse_with_arity(src, sc.n, sc.m_bits()?)?;
            let d = entlab::distinguisher::Distinguisher::from_circuit(&circuit);
            let params = sc.params()?;
            let mode = match sc.mode.as_deref().unwrap_or("exact-oracle") {
                "chernoff-sampling" => CountMode::ChernoffSampling,
                "exact-oracle" => CountMode::ExactOracle {
                    gamma: entlab::rat::rat(1, 4),
                    and_copies: 6,
                },
                other => return Err(Error::Scenario(format!("unknown mode {other:?}"))),
            };
            let art = reductions::approx_count_distinguisher(
                &d,
                &circuit,
                &j,
                &params.gamma,
                &params.epsilon,
                &mode,
            )?;
            json!({
                "reduction": "approx-count",
                "mode": art.mode_label,
                "l": art.l,
                "final_gap": art.final_gap.as_ref().map(format_rat),
                "gap_bound": format_rat(&art.gap_bound),
                "estimator_failures": art.estimator_failures.iter().map(format_rat).collect::<Vec<_>>(),
                "and_copy_sizes": art.and_copy_sizes,
                "majority_repeats": art.majority_repeats,
                "transcript": art.transcript,
            })
        }
        "real-to-boolean" => {
            let j = sc.joint()?;
            let d = sc.single_distinguisher()?;
            let params = sc.params()?;
            let art = reductions::real_to_boolean(&d, &j, &params.gamma)?;
            json!({
                "reduction": "real-to-boolean",
                "t": format_rat(&art.t),
                "real_advantage": format_rat(&art.real_advantage),
                "boolean_advantage": format_rat(&art.boolean_advantage),
                "transcript": art.transcript,
            })
        }
        "tightness" => {
            let f = match &sc.f {
                Some(srcs) => srcs
                    .iter()
                    .map(|s| entlab::circuit::Circuit::parse(s))
                    .collect::<Result<Vec<_>, _>>()?,
                None => reductions::tightness::toy_expanding_function(),
            };
            let report = reductions::tightness_demo(&f)?;
            json!({
                "reduction": "tightness",
                "injective": report.injective,
                "min_advantage": format_rat(&report.min_advantage),
                "bound": format_rat(&report.bound),
                "lp_agrees": report.lp_agrees,
                "good_mass": format_rat(&report.good_mass),
                "per_good_x_gap": format_rat(&report.per_good_x_gap),
                "transcript": report.transcript,
            })
        }
        "ledger" => {
            let assumption = reductions::Assumption::from_str(
                sc.assumption
                    .as_deref()
                    .ok_or_else(|| Error::Scenario("ledger needs assumption".into()))?,
            )?;
            let params = sc.params()?;
            let inputs = reductions::LedgerInputs {
                gamma: params.gamma.clone(),
                eps: params.epsilon.clone(),
                s: sc.circuit_size.unwrap_or(1 << 20),
                n: sc.n,
                m: sc.m_bits()?,
                t: sc.t,
                sampler_size: sc.sampler_size,
            };
            let entry = reductions::conversion_ledger(assumption, &inputs)?;
            json!({
                "reduction": "ledger",
                "assumption": entry.assumption.as_str(),
                "gamma_prime": format_rat(&entry.gamma_prime),
                "eps_prime": entry.eps_prime.display(),
                "s_prime": entry.s_prime.display(),
                "s_prime_flag": entry.s_prime.flag().as_str(),
                "notes": entry.notes,
            })
        }
        "modulus-to-hill" => {
            let params = sc.params()?;
            let delta = parse_rat(
                sc.delta
                    .as_deref()
                    .ok_or_else(|| Error::Scenario("modulus-to-hill needs delta".into()))?,
            )?;
            let p = reductions::modulus_to_hill_params(
                &params.gamma,
                &params.epsilon,
                sc.circuit_size.unwrap_or(1 << 20),
                sc.n,
                sc.m_bits()?,
                &delta,
            )?;
            json!({
                "reduction": "modulus-to-hill",
                "gamma_prime": format_rat(&p.gamma_prime),
                "eps_prime": format_rat(&p.eps_prime),
                "s_prime": p.s_prime.display(),
                "notes": p.notes,
            })
        }
        other => {
            return Err(Error::Scenario(format!("unknown reduction {other:?}")));
        }
    };
    emit(&out, pretty);
    Ok(0)
}

fn run_search(
    target: &str,
    budget: u64,
    seed: u64,
    n: u32,
    m: u32,
    pretty: bool,
) -> Result<i32, Error> {
    let target = SeparationTarget::from_str(target)?;
    let report = search_separation(target, budget, seed, n, m)?;
    emit(&report.to_json(), pretty);
    Ok(0)
}

fn main() {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Compute {
            notion,
            scenario,
            pretty,
        } => run_compute(notion, scenario, *pretty),
        Command::Verify {
            suite,
            trials,
            seed,
            pretty,
        } => run_verify(suite, *trials, *seed, *pretty),
        Command::Reduce {
            reduction,
            scenario,
            pretty,
        } => run_reduce(reduction, scenario, *pretty),
        Command::Search {
            target,
            budget,
            seed,
            n,
            m,
            pretty,
        } => run_search(target, *budget, *seed, *n, *m, *pretty),
    };
    match outcome {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
    }
}
