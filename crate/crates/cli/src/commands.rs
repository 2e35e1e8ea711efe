//! One handler per leaf subcommand.

use serde::Serialize;
use serde_json::{json, Value};
use wiretap_lab::bounds::{
    blocklength_bound, c_eve_gap, fano_min_error, helstrom_multistate_lower, helstrom_two_state,
};
use wiretap_lab::channels::{compose, conditional_mi_given_z, forward_conceptual, transmit, BroadcastModel, Bsc, Dmc};
use wiretap_lab::games::{bias, classical_optimum, epsilon_optimality_check, multiplayer_bias, win_probability};
use wiretap_lab::holevo::{holevo_chi, optimize_secrecy_rate, secrecy_rate};
use wiretap_lab::info::{binary_entropy, cascade, conditional_entropy, mutual_information, shannon_entropy, JointDist};
use wiretap_lab::polar::{
    conservation_residual, polarize, polarize_pair, sample_variance, secure_index_set, split_minus, split_plus,
    SynthesizedChannel,
};
use wiretap_lab::protosim::{
    domination_experiment, empirical_eve_information, resource_distance, run_transmission, run_transmission_trials,
    ChannelStats, ProtocolConfig,
};
use wiretap_lab::qstate::{
    apply_channel, check_contractivity, check_dpi, fidelity, relative_entropy, tensor, trace_distance,
    von_neumann_entropy, Divergence,
};
use wiretap_lab::rates::{adaptive_rates, overlap, prune, rate, rate_branch, select_branch, AlphabetSizes, LetterAlphabets, RateResult};
use wiretap_lab::secrecy::{cs, cs_bar_bsc, cs_bar_lower, cs_bar_upper};
use wiretap_lab::verify::{run_all, run_check, Scale, VerifyReport, CHECK_NAMES};

use crate::args::*;
use crate::error::{input, CliError, CliResult};
use crate::inputs;
use crate::output::{records, to_value, Report, Table};

pub fn run(cmd: &Command) -> CliResult<Report> {
    match cmd {
        Command::Entropy(c) => entropy(c),
        Command::Cascade(a) => Report::new().with("cascade", cascade(a.eps, a.delta)?),
        Command::Secrecy(c) => secrecy(c),
        Command::Rates(c) => rates(c),
        Command::Holevo(c) => holevo(c),
        Command::Bounds(c) => bounds(c),
        Command::Polar(c) => polar(c),
        Command::Simulate(a) => simulate(a),
        Command::Domination(a) => domination(a),
        Command::Games(c) => games(c),
        Command::Verify(a) => verify(a),
    }
}

/// Space-separated subcommand path and the leaf arguments, for the config echo.
pub fn describe(cmd: &Command) -> CliResult<(String, Value)> {
    fn leaf(path: &str, a: impl Serialize) -> CliResult<(String, Value)> {
        Ok((path.to_string(), to_value(a)?))
    }
    match cmd {
        Command::Entropy(c) => match c {
            EntropyCmd::Binary(a) => leaf("entropy binary", a),
            EntropyCmd::Shannon(a) => leaf("entropy shannon", a),
            EntropyCmd::Mutual(a) => leaf("entropy mutual", a),
            EntropyCmd::Conditional(a) => leaf("entropy conditional", a),
        },
        Command::Cascade(a) => leaf("cascade", a),
        Command::Secrecy(c) => match c {
            SecrecyCmd::Cs(a) => leaf("secrecy cs", a),
            SecrecyCmd::CsBar(a) => leaf("secrecy cs-bar", a),
            SecrecyCmd::CsBarUpper(a) => leaf("secrecy cs-bar-upper", a),
            SecrecyCmd::CsBarLower(a) => leaf("secrecy cs-bar-lower", a),
            SecrecyCmd::Compose(a) => leaf("secrecy compose", a),
            SecrecyCmd::Transmit(a) => leaf("secrecy transmit", a),
            SecrecyCmd::ForwardConceptual(a) => leaf("secrecy forward-conceptual", a),
            SecrecyCmd::Cmi(a) => leaf("secrecy cmi", a),
        },
        Command::Rates(c) => match c {
            RatesCmd::Branch(a) => leaf("rates branch", a),
            RatesCmd::Select(a) => leaf("rates select", a),
            RatesCmd::Adaptive(a) => leaf("rates adaptive", a),
            RatesCmd::Overlap(a) => leaf("rates overlap", a),
            RatesCmd::Prune(a) => leaf("rates prune", a),
        },
        Command::Holevo(c) => match c {
            HolevoCmd::Entropy(a) => leaf("holevo entropy", a),
            HolevoCmd::TraceDistance(a) => leaf("holevo trace-distance", a),
            HolevoCmd::Fidelity(a) => leaf("holevo fidelity", a),
            HolevoCmd::RelativeEntropy(a) => leaf("holevo relative-entropy", a),
            HolevoCmd::Apply(a) => leaf("holevo apply", a),
            HolevoCmd::Tensor(a) => leaf("holevo tensor", a),
            HolevoCmd::Dpi(a) => leaf("holevo dpi", a),
            HolevoCmd::Contractivity(a) => leaf("holevo contractivity", a),
            HolevoCmd::Chi(a) => leaf("holevo chi", a),
            HolevoCmd::Rate(a) => leaf("holevo rate", a),
            HolevoCmd::Optimize(a) => leaf("holevo optimize", a),
        },
        Command::Bounds(c) => match c {
            BoundsCmd::Fano(a) => leaf("bounds fano", a),
            BoundsCmd::Blocklength(a) => leaf("bounds blocklength", a),
            BoundsCmd::HelstromMulti(a) => leaf("bounds helstrom-multi", a),
            BoundsCmd::Helstrom(a) => leaf("bounds helstrom", a),
            BoundsCmd::EveGap(a) => leaf("bounds eve-gap", a),
        },
        Command::Polar(c) => match c {
            PolarCmd::Minus(a) => leaf("polar minus", a),
            PolarCmd::Plus(a) => leaf("polar plus", a),
            PolarCmd::Residual(a) => leaf("polar residual", a),
            PolarCmd::Polarize(a) => leaf("polar polarize", a),
            PolarCmd::IndexSet(a) => leaf("polar index-set", a),
        },
        Command::Simulate(a) => leaf("simulate", a),
        Command::Domination(a) => leaf("domination", a),
        Command::Games(c) => match c {
            GamesCmd::Bias(a) => leaf("games bias", a),
            GamesCmd::Win(a) => leaf("games win", a),
            GamesCmd::Classical(a) => leaf("games classical", a),
            GamesCmd::EpsCheck(a) => leaf("games eps-check", a),
            GamesCmd::Multi(a) => leaf("games multi", a),
        },
        Command::Verify(a) => leaf("verify", a),
    }
}

fn joint(src: &JointSource) -> CliResult<JointDist<f64>> {
    match (&src.rows, &src.dmc, &src.input) {
        (Some(rows), None, None) => inputs::joint_rows(rows),
        (None, Some(path), Some(p)) => Ok(Dmc::from_json_str(&inputs::read(path)?)?.joint(&inputs::dist(p)?)?),
        _ => Err(input("give either --rows or --dmc with --input")),
    }
}

fn entropy(c: &EntropyCmd) -> CliResult<Report> {
    match c {
        EntropyCmd::Binary(a) => Report::new().with("binary_entropy", binary_entropy(a.p)?),
        EntropyCmd::Shannon(a) => Report::new().with("shannon_entropy", shannon_entropy(&inputs::dist(&a.dist)?)),
        EntropyCmd::Mutual(a) => Report::new().with("mutual_information", mutual_information(&joint(a)?)),
        EntropyCmd::Conditional(a) => Report::new().with("conditional_entropy", conditional_entropy(&joint(a)?)),
    }
}

fn secrecy(c: &SecrecyCmd) -> CliResult<Report> {
    match c {
        SecrecyCmd::Cs(a) => Report::new().with("cs", cs(a.eps, a.delta)?),
        SecrecyCmd::CsBar(a) => Report::new().with("cs_bar", cs_bar_bsc(a.eps, a.delta)?),
        SecrecyCmd::CsBarUpper(a) => {
            let s = cs_bar_upper(&BroadcastModel::new(a.eps, a.delta, 0.0)?);
            Report::new().with("cs_bar_upper", s.value)?.with("input", s.input)
        }
        SecrecyCmd::CsBarLower(a) => {
            let b = cs_bar_lower(a.ea, a.eb, a.ee)?;
            Report::new().with("cs_bar_lower", b.value)?.with("clamped", b.clamped())?.with("vacuous", b.vacuous)
        }
        SecrecyCmd::Compose(a) => {
            Report::new().with("crossover", compose(&Bsc::new(a.eps)?, &Bsc::new(a.delta)?).crossover())
        }
        SecrecyCmd::Transmit(a) => {
            let word: Vec<bool> = a
                .word
                .chars()
                .map(|ch| match ch {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    _ => Err(input(format!("--word may only contain 0 and 1, found '{ch}'"))),
                })
                .collect::<CliResult<_>>()?;
            let out = transmit(&Bsc::new(a.eps)?, &word, a.seed);
            let flips = out.iter().zip(&word).filter(|(a, b)| a != b).count();
            let bits: String = out.iter().map(|&b| if b { '1' } else { '0' }).collect();
            Report::new().with("output", bits)?.with("flips", flips)
        }
        SecrecyCmd::ForwardConceptual(a) => {
            let m = BroadcastModel::new(a.main, a.eve, a.delta)?;
            Report::new().with("crossover", forward_conceptual(&m).crossover())?.with("eve_superior", m.eve_superior())
        }
        SecrecyCmd::Cmi(a) => {
            let m = BroadcastModel::new(a.main, a.eve, 0.0)?;
            let input = wiretap_lab::info::Dist::bernoulli(a.p1)?;
            Report::new().with("conditional_mi", conditional_mi_given_z(&m, &input)?)
        }
    }
}

fn sizes(s: &Sizes) -> CliResult<AlphabetSizes<f64>> {
    Ok(AlphabetSizes::new(s.lx, s.lx_star.unwrap_or(s.lx), s.ly.unwrap_or(s.ly_star), s.ly_star, s.lz)?)
}

fn rate_row(channel: Option<&str>, r: &RateResult<f64>) -> Vec<Value> {
    let mut row: Vec<Value> = channel.map(|c| json!(c)).into_iter().collect();
    match r {
        RateResult::Value { branch, value } => {
            row.extend([json!("value"), json!(branch), json!(value), Value::Null, Value::Null])
        }
        RateResult::DomainError { branch, term, condition } => {
            row.extend([json!("domain_error"), json!(branch), Value::Null, json!(term), json!(condition)])
        }
    }
    row
}

fn letters(a: &LettersArgs) -> CliResult<LetterAlphabets> {
    Ok(LetterAlphabets::new(inputs::symbols(&a.x), inputs::symbols(&a.y), inputs::symbols(&a.z))?)
}

fn rates(c: &RatesCmd) -> CliResult<Report> {
    match c {
        RatesCmd::Branch(a) => {
            let s = sizes(&a.sizes)?;
            let r = match a.branch {
                Some(b) => rate_branch(b, &s)?,
                None => rate(&s)?,
            };
            let row = rate_row(None, &r);
            Ok(Report::new().merge(&r)?.table(Table { headers: vec!["kind", "branch", "value", "term", "condition"], rows: vec![row] }))
        }
        RatesCmd::Select(a) => Report::new().with("branch", select_branch(&sizes(a)?)?),
        RatesCmd::Adaptive(a) => {
            let pb = sizes(&a.sizes)?;
            let side = |lx: Option<f64>, lx_star: Option<f64>, ly_star: Option<f64>, lz: Option<f64>| {
                let lx = lx.unwrap_or(pb.lx);
                let ly_star = ly_star.unwrap_or(pb.ly_star);
                AlphabetSizes::new(lx, lx_star.unwrap_or(lx.min(pb.lx_star)), ly_star.max(pb.ly), ly_star, lz.unwrap_or(pb.lz))
            };
            let fc = side(a.fc_lx, a.fc_lx_star, a.fc_ly_star, a.fc_lz)?;
            let bc = side(a.bc_lx, a.bc_lx_star, a.bc_ly_star, a.bc_lz)?;
            let r = adaptive_rates(&pb, &fc, &bc)?;
            let rows = vec![rate_row(Some("r1"), &r.r1), rate_row(Some("r2"), &r.r2), rate_row(Some("r3"), &r.r3)];
            Ok(Report::new()
                .merge(&r)?
                .table(Table { headers: vec!["channel", "kind", "branch", "value", "term", "condition"], rows }))
        }
        RatesCmd::Overlap(a) => Report::new().with("overlap", overlap(&letters(a)?)),
        RatesCmd::Prune(a) => {
            let l = letters(a)?;
            let (x, y) = prune(&l);
            Report::new().with("x_star", x)?.with("y_star", y)
        }
    }
}

fn divergence(d: Divergence<f64>) -> Value {
    match d {
        Divergence::Finite(v) => json!(v),
        Divergence::Infinite => json!("infinite"),
    }
}

fn holevo(c: &HolevoCmd) -> CliResult<Report> {
    let pair = |a: &StatePair| -> CliResult<_> { Ok((inputs::state(&a.rho)?, inputs::state(&a.sigma)?)) };
    let triple = |a: &ChannelPair| -> CliResult<_> {
        Ok((inputs::channel(&a.channel)?, inputs::state(&a.rho)?, inputs::state(&a.sigma)?))
    };
    match c {
        HolevoCmd::Entropy(a) => Report::new().with("von_neumann_entropy", von_neumann_entropy(&inputs::state(&a.rho)?)),
        HolevoCmd::TraceDistance(a) => {
            let (r, s) = pair(a)?;
            Report::new().with("trace_distance", trace_distance(&r, &s)?)
        }
        HolevoCmd::Fidelity(a) => {
            let (r, s) = pair(a)?;
            Report::new().with("fidelity", fidelity(&r, &s)?)
        }
        HolevoCmd::RelativeEntropy(a) => {
            let (r, s) = pair(a)?;
            Report::new().with("relative_entropy", divergence(relative_entropy(&r, &s)?))
        }
        HolevoCmd::Apply(a) => {
            let out = apply_channel(&inputs::channel(&a.channel)?, &inputs::state(&a.rho)?)?;
            Report::new().with("state", out.to_json())
        }
        HolevoCmd::Tensor(a) => {
            let (r, s) = pair(a)?;
            Report::new().with("state", tensor(&r, &s).to_json())
        }
        HolevoCmd::Dpi(a) => {
            let (phi, r, s) = triple(a)?;
            let res = check_dpi(&phi, &r, &s)?;
            Report::new().with("residual", res)?.with("trivial", res.is_none())
        }
        HolevoCmd::Contractivity(a) => {
            let (phi, r, s) = triple(a)?;
            Report::new().with("residual", check_contractivity(&phi, &r, &s)?)
        }
        HolevoCmd::Chi(a) => {
            let cq = inputs::cq(&a.cq)?;
            let prior = match &a.prior {
                Some(p) => inputs::dist(p)?,
                None => wiretap_lab::info::Dist::uniform(cq.inputs().len()),
            };
            Report::new().with("holevo_chi", holevo_chi(&cq.ensemble(&prior)?))
        }
        HolevoCmd::Rate(a) => {
            let v = secrecy_rate(&inputs::cq(&a.cq)?, &inputs::channel(&a.eve)?, &inputs::dist(&a.prior)?)?;
            Report::new().with("secrecy_rate", v)
        }
        HolevoCmd::Optimize(a) => {
            let o = optimize_secrecy_rate(&inputs::cq(&a.cq)?, &inputs::channel(&a.eve)?)?;
            Report::new().with("secrecy_rate", o.value)?.with("prior", o.prior)
        }
    }
}

fn bounds(c: &BoundsCmd) -> CliResult<Report> {
    match c {
        BoundsCmd::Fano(a) => Report::new().with("fano_min_error", fano_min_error(a.m, a.chi)?),
        BoundsCmd::Blocklength(a) => {
            let b = blocklength_bound(a.n, a.m, a.chi)?;
            Report::new().with("value", b.value)?.with("vacuous", b.vacuous)?.with("clamped", b.clamped())
        }
        BoundsCmd::HelstromMulti(a) => Report::new().with("helstrom_multistate_lower", helstrom_multistate_lower(a.m, a.eps)?),
        BoundsCmd::Helstrom(a) => {
            let p = helstrom_two_state(&inputs::state(&a.rho0)?, &inputs::state(&a.rho1)?)?;
            Report::new().with("success_probability", p)?.with("error_probability", 1.0 - p)
        }
        BoundsCmd::EveGap(a) => Report::new().merge(c_eve_gap(a.n, a.m, a.chi, a.eps, a.m_threshold)?),
    }
}

fn synthesized(spec: &str) -> CliResult<SynthesizedChannel<f64>> {
    Ok(SynthesizedChannel::from_cq(&inputs::cq(spec)?)?)
}

fn polar(c: &PolarCmd) -> CliResult<Report> {
    match c {
        PolarCmd::Minus(a) => {
            let w = synthesized(&a.cq)?;
            Report::new().with("chi", split_minus(&w)?.chi())?.with("chi_parent", w.chi())
        }
        PolarCmd::Plus(a) => {
            let w = synthesized(&a.cq)?;
            Report::new().with("chi", split_plus(&w)?.chi())?.with("chi_parent", w.chi())
        }
        PolarCmd::Residual(a) => Report::new().with("conservation_residual", conservation_residual(&synthesized(&a.cq)?)?),
        PolarCmd::Polarize(a) => {
            let p = polarize(&synthesized(&a.cq)?, a.depth as usize)?;
            let table = records(vec!["index", "path", "chi"], &p.entries)?;
            Ok(Report::new().merge(&p)?.with("variance", sample_variance(&p.chis()))?.table(table))
        }
        PolarCmd::IndexSet(a) => {
            let (bob, eve) = polarize_pair(&inputs::cq(&a.cq)?, &inputs::channel(&a.eve)?, a.depth as usize)?;
            let set = secure_index_set(&bob.entries, &eve.entries, a.theta)?;
            let rows = bob
                .entries
                .iter()
                .zip(&eve.entries)
                .map(|(b, e)| vec![json!(b.index), json!(b.path), json!(b.chi), json!(e.chi), json!(set.indices.contains(&b.index))])
                .collect();
            Ok(Report::new()
                .merge(&set)?
                .with("bob", &bob.entries)?
                .with("eve", &eve.entries)?
                .table(Table { headers: vec!["index", "path", "chi_bob", "chi_eve", "selected"], rows }))
        }
    }
}

fn protocol(a: &SimulateArgs) -> ProtocolConfig {
    let mut c = ProtocolConfig::new(a.n, a.p, a.q, a.rate, a.trials, a.seed).with_attack(a.attack == OnOff::On);
    if let Some(t) = a.tau {
        c = c.with_tau(t);
    }
    c.cascade_delta = a.delta;
    c
}

const TRIAL_COLUMNS: [&str; 10] = [
    "trial",
    "message",
    "bob_flips",
    "bob_accepted",
    "bob_correct",
    "eve_flips",
    "eve_correct",
    "forgery",
    "forgery_accepted",
    "false_accept",
];

fn simulate(a: &SimulateArgs) -> CliResult<Report> {
    let c = protocol(a);
    let r = match &a.dump {
        Some(path) => {
            let (r, trials) = run_transmission_trials(&c)?;
            let t = records(TRIAL_COLUMNS.to_vec(), &trials)?;
            let text = crate::output::csv(&Report::new().table(t))?;
            std::fs::write(path, text).map_err(|e| CliError::Output(format!("{}: {e}", path.display())))?;
            r
        }
        None => run_transmission(&c)?,
    };
    let threshold = binary_entropy(c.eve_crossover())? - binary_entropy(c.p)?;
    Report::new()
        .merge(&r)?
        .with("tau", c.tau)?
        .with("rate_threshold", threshold)?
        .with("rate_regime", if c.rate > threshold { "above" } else { "at_or_below" })?
        .with("resource_distance", resource_distance(&r))?
        .with("eve_information", empirical_eve_information(&r))
}

fn party_rows(channel: &str, s: &ChannelStats) -> Vec<Vec<Value>> {
    [("alice", &s.alice), ("bob", &s.bob), ("eve", &s.eve)]
        .iter()
        .map(|(name, p)| {
            vec![
                json!(channel),
                json!(name),
                json!(p.crossover),
                json!(p.p_fa.value),
                json!(p.p_fa.ci_low),
                json!(p.p_fa.ci_high),
                json!(p.p_ec.value),
                json!(p.p_ec.ci_low),
                json!(p.p_ec.ci_high),
                json!(p.reject.value),
            ]
        })
        .collect()
}

fn domination(a: &DominationArgs) -> CliResult<Report> {
    let base = ProtocolConfig::new(a.n, 0.0, 0.0, a.rate, a.trials, a.seed).with_tau(a.tau);
    let r = domination_experiment(a.ea, a.eb, a.ee, a.delta, &base)?;
    let mut rows = party_rows("public", &r.public);
    rows.extend(party_rows("forward", &r.forward));
    rows.extend(party_rows("backward", &r.backward));
    let headers = vec!["channel", "party", "crossover", "p_fa", "p_fa_low", "p_fa_high", "p_ec", "p_ec_low", "p_ec_high", "reject"];
    Ok(Report::new().merge(&r)?.table(Table { headers, rows }))
}

fn games(c: &GamesCmd) -> CliResult<Report> {
    match c {
        GamesCmd::Bias(a) => {
            let g = inputs::game(&a.game)?;
            let s = inputs::strategy(&a.strategy, &g, a.seed)?;
            let b = bias(&g, &s)?;
            Report::new().with("bias", b)?.with("win_probability", win_probability(b)?)
        }
        GamesCmd::Win(a) => Report::new().with("win_probability", win_probability(a.beta)?),
        GamesCmd::Classical(a) => Report::new().with("classical_optimum", classical_optimum(&inputs::game(&a.game)?)?),
        GamesCmd::EpsCheck(a) => {
            let g = inputs::game(&a.game)?;
            let s = inputs::strategy(&a.strategy, &g, a.seed)?;
            Report::new().with("holds", epsilon_optimality_check(&g, &s, a.beta_star, a.eps)?)?.with("bias", bias(&g, &s)?)
        }
        GamesCmd::Multi(a) => {
            let g = inputs::game3(&a.game, a.seed)?;
            let s = inputs::strategy3(&a.strategy, &g)?;
            Report::new().with("bias", multiplayer_bias(&g, &s)?)
        }
    }
}

fn verify(a: &VerifyArgs) -> CliResult<Report> {
    let scale = if a.quick { Scale::Quick } else { Scale::Full };
    let report = if a.check.is_empty() {
        run_all(a.seed, scale)?
    } else {
        let checks = a.check.iter().map(|&id| run_check(id, a.seed, scale)).collect::<Result<Vec<_>, _>>()?;
        let passed = checks.iter().filter(|c| c.passed).count();
        VerifyReport { seed: a.seed, scale, passed, failed: checks.len() - passed, checks }
    };
    let rows = report.checks.iter().map(|c| vec![json!(c.id), json!(c.name), json!(c.passed), json!(c.detail)]).collect();
    let mut out = Report::new()
        .merge(&report)?
        .with("available", CHECK_NAMES)?
        .table(Table { headers: vec!["id", "name", "passed", "detail"], rows });
    out.status = if report.failed > 0 { 1 } else { 0 };
    Ok(out)
}
