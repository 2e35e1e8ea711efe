//! Presets and JSON files for command arguments.

use std::path::Path;

use nalgebra::{Complex, DVector};
use serde::Deserialize;
use wiretap_lab::games::{QuantumStrategy, QuantumStrategy3, XorGame, XorGame3};
use wiretap_lab::holevo::CqChannel;
use wiretap_lab::info::{Dist, JointDist};
use wiretap_lab::qstate::{DensityMatrix, KrausChannel, MatrixJson};
use wiretap_lab::rng::stream;

use crate::error::{input, CliError, CliResult};

pub fn read(path: impl AsRef<Path>) -> CliResult<String> {
    let path = path.as_ref();
    std::fs::read_to_string(path).map_err(|source| CliError::Read { path: path.display().to_string(), source })
}

fn number(s: &str) -> CliResult<f64> {
    s.trim().parse().map_err(|_| input(format!("'{s}' is not a number")))
}

fn index(s: &str) -> CliResult<usize> {
    s.trim().parse().map_err(|_| input(format!("'{s}' is not a non-negative integer")))
}

pub fn list(s: &str) -> CliResult<Vec<f64>> {
    s.split(',').map(number).collect()
}

pub fn dist(s: &str) -> CliResult<Dist<f64>> {
    Ok(Dist::new(list(s)?)?)
}

/// `"a,b;c,d"` as a joint table.
pub fn joint_rows(s: &str) -> CliResult<JointDist<f64>> {
    let rows: Vec<Vec<f64>> = s.split(';').map(list).collect::<CliResult<_>>()?;
    Ok(JointDist::from_rows(&rows)?)
}

pub fn symbols(s: &str) -> Vec<String> {
    s.split(',').map(|t| t.trim().to_string()).filter(|t| !t.is_empty()).collect()
}

/// `kind:arg:arg`.
fn preset(spec: &str) -> (&str, Vec<&str>) {
    let mut parts = spec.split(':');
    let kind = parts.next().unwrap_or_default();
    (kind, parts.collect())
}

fn arity(spec: &str, args: &[&str], n: usize) -> CliResult<()> {
    if args.len() == n {
        Ok(())
    } else {
        Err(input(format!("'{spec}' needs {n} parameter(s)")))
    }
}

fn pure(v: [f64; 2]) -> CliResult<DensityMatrix<f64>> {
    Ok(DensityMatrix::pure(&DVector::from_vec(vec![Complex::new(v[0], 0.0), Complex::new(v[1], 0.0)]))?)
}

pub fn state(spec: &str) -> CliResult<DensityMatrix<f64>> {
    let (kind, args) = preset(spec);
    match kind {
        "zero" | "one" => {
            arity(spec, &args, 0)?;
            Ok(DensityMatrix::basis(2, (kind == "one") as usize))
        }
        "plus" | "minus" => {
            arity(spec, &args, 0)?;
            pure([1.0, if kind == "plus" { 1.0 } else { -1.0 }])
        }
        "mixed" => {
            arity(spec, &args, 1)?;
            let d = index(args[0])?;
            if d == 0 {
                return Err(input("dimension must be positive"));
            }
            Ok(DensityMatrix::maximally_mixed(d))
        }
        "basis" => {
            arity(spec, &args, 2)?;
            let (d, i) = (index(args[0])?, index(args[1])?);
            if i >= d {
                return Err(input(format!("basis index {i} outside dimension {d}")));
            }
            Ok(DensityMatrix::basis(d, i))
        }
        _ => {
            let doc: MatrixJson = serde_json::from_str(&read(spec)?).map_err(|e| input(format!("{spec}: {e}")))?;
            Ok(DensityMatrix::from_json(&doc)?)
        }
    }
}

pub fn channel(spec: &str) -> CliResult<KrausChannel<f64>> {
    let (kind, args) = preset(spec);
    let one = |args: &[&str]| -> CliResult<f64> {
        arity(spec, args, 1)?;
        number(args[0])
    };
    match kind {
        "identity" => {
            arity(spec, &args, 1)?;
            Ok(KrausChannel::identity(index(args[0])?))
        }
        "depolarizing" => Ok(KrausChannel::depolarizing(2, one(&args)?)?),
        "amplitude-damping" => Ok(KrausChannel::amplitude_damping(one(&args)?)?),
        "dephasing" => Ok(KrausChannel::dephasing(one(&args)?)?),
        _ => Ok(KrausChannel::from_json_str(&read(spec)?)?),
    }
}

pub fn cq(spec: &str) -> CliResult<CqChannel<f64>> {
    let (kind, args) = preset(spec);
    match kind {
        "amplitude" => {
            arity(spec, &args, 1)?;
            Ok(CqChannel::amplitude(number(args[0])?))
        }
        "classical-bit" => Ok(CqChannel::classical_bit()),
        _ => Ok(CqChannel::from_json_str(&read(spec)?)?),
    }
}

pub fn game(spec: &str) -> CliResult<XorGame<f64>> {
    let (kind, args) = preset(spec);
    match kind {
        "chsh" => Ok(XorGame::chsh()),
        "trivial" => {
            arity(spec, &args, 2)?;
            Ok(XorGame::trivial(index(args[0])?, index(args[1])?))
        }
        _ => Ok(XorGame::from_json_str(&read(spec)?)?),
    }
}

fn need_seed(spec: &str, seed: Option<u64>) -> CliResult<u64> {
    seed.ok_or_else(|| input(format!("'{spec}' is randomized and needs --seed")))
}

pub fn strategy(spec: &str, g: &XorGame<f64>, seed: Option<u64>) -> CliResult<QuantumStrategy<f64>> {
    let (s, t) = g.questions();
    match spec {
        "tsirelson" => Ok(QuantumStrategy::tsirelson()),
        "all-plus" => Ok(QuantumStrategy::all_plus(s, t)),
        "random" => Ok(QuantumStrategy::random(s, t, 2, 2, &mut stream(need_seed(spec, seed)?, 0))),
        _ => Err(input(format!("unknown strategy '{spec}'"))),
    }
}

#[derive(Deserialize)]
struct Game3Json {
    s: usize,
    t: usize,
    u: usize,
    entries: Vec<Vec<Vec<f64>>>,
}

pub fn game3(spec: &str, seed: Option<u64>) -> CliResult<XorGame3<f64>> {
    let (kind, args) = preset(spec);
    match kind {
        "random" => {
            arity(spec, &args, 3)?;
            let dims = (index(args[0])?, index(args[1])?, index(args[2])?);
            if dims.0 * dims.1 * dims.2 == 0 {
                return Err(input("every player needs at least one question"));
            }
            Ok(XorGame3::random(dims, &mut stream(need_seed(spec, seed)?, 0)))
        }
        "chsh-extended" => Ok(XorGame3::extend(&XorGame::chsh())),
        _ => {
            let doc: Game3Json = serde_json::from_str(&read(spec)?).map_err(|e| input(format!("{spec}: {e}")))?;
            let flat: Vec<f64> = doc.entries.into_iter().flatten().flatten().collect();
            Ok(XorGame3::new((doc.s, doc.t, doc.u), flat)?)
        }
    }
}

pub fn strategy3(spec: &str, g: &XorGame3<f64>) -> CliResult<QuantumStrategy3<f64>> {
    match spec {
        "ghz-xy" => Ok(QuantumStrategy3::ghz_xy()),
        "all-plus" => Ok(QuantumStrategy3::all_plus(g.questions())),
        "tsirelson-extended" => Ok(QuantumStrategy3::extend(&QuantumStrategy::tsirelson())),
        _ => Err(input(format!("unknown three-player strategy '{spec}'"))),
    }
}
