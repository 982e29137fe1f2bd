//! Subcommand bodies. Each returns the process exit code on success.

use std::path::Path;
use std::sync::Arc;

use serde_json::Value;
use veechmix::exactnum::{merge_bases, Rational, RealBasis, Vec2};
use veechmix::flow::{Direction, Section, SectionJson};
use veechmix::iet::{Iet, Permutation};
use veechmix::surface::io::surface_from_json;
use veechmix::surface::TranslationSurface;

use crate::output::{read, read_json, Ctx};
use crate::{parse, Cli, CliError, Command, ModeArg};

mod demo;
mod flow;
mod iet;
mod spectrum;
mod surface;
mod weakmix;

pub fn run(cli: Cli) -> Result<u8, CliError> {
    let basis = parse::basis(&cli.basis)?;
    let ctx = Ctx { json: cli.json, seed: cli.seed, float: cli.mode == ModeArg::Float, out_dir: cli.out_dir };
    match cli.command {
        Command::Iet(c) => iet::run(&ctx, &basis, c),
        Command::Surface(c) => surface::run(&ctx, &basis, c),
        Command::Flow(c) => flow::run(&ctx, &basis, c),
        Command::Weakmix(c) => weakmix::run(&ctx, &basis, c),
        Command::Spectrum(c) => spectrum::run(&ctx, &basis, c),
        Command::Demo(a) => demo::run(&ctx, &basis, a),
    }
}

/// `{ "perm": [..], "lengths": [..] }` with lengths as field-element
/// objects or strings over the command-line basis.
pub fn load_iet(p: &Path, basis: &Arc<RealBasis>) -> Result<Iet, CliError> {
    let v = read_json(p)?;
    let perm: Permutation = serde_json::from_value(v.get("perm").cloned().unwrap_or(Value::Null))
        .map_err(|e| CliError::Data(format!("{}: perm: {e}", p.display())))?;
    let lengths = parse::elements(v.get("lengths").unwrap_or(&Value::Null), basis)?;
    Ok(Iet::new(lengths, perm)?)
}

pub fn load_elements(p: &Path, basis: &Arc<RealBasis>) -> Result<Vec<veechmix::exactnum::FieldElement>, CliError> {
    parse::elements(&read_json(p)?, basis)
}

/// An IET and a vector of times moved onto one basis.
pub fn load_iet_with_times(iet: &Path, times: &Path, basis: &Arc<RealBasis>) -> Result<(Iet, Vec<veechmix::exactnum::FieldElement>), CliError> {
    let t = load_iet(iet, basis)?;
    let times = load_elements(times, basis)?;
    if times.len() != t.m() {
        return Err(CliError::Data(format!("{} times for {} intervals", times.len(), t.m())));
    }
    let m = t.m();
    let mut all = t.lengths().to_vec();
    all.extend(times);
    let (_, mut all) = merge_bases(all)?;
    let times = all.split_off(m);
    Ok((Iet::new(all, t.perm().clone())?, times))
}

pub fn load_surface(p: &Path) -> Result<TranslationSurface, CliError> {
    Ok(surface_from_json(&read(p)?)?)
}

pub fn load_section(p: &Path) -> Result<Section, CliError> {
    let j: SectionJson = serde_json::from_value(read_json(p)?).map_err(|e| CliError::Data(format!("{}: {e}", p.display())))?;
    Ok(Section::from_json(&j)?)
}

pub fn direction(text: &str, basis: &Arc<RealBasis>) -> Result<Direction, CliError> {
    Direction::new(parse::vec2(text, basis)?).map_err(|e| CliError::Usage(e.to_string()))
}

/// A direction at angle `theta`, with components rounded to nearby
/// rationals. Only the float view is meaningful.
pub fn direction_from_angle(theta: f64) -> Result<Direction, CliError> {
    let r = RealBasis::rational();
    let q = |x: f64| Rational::from_float(x).ok_or_else(|| CliError::Usage(format!("angle {theta} is not finite")));
    Direction::new(Vec2::from_rationals(&r, q(theta.cos())?, q(theta.sin())?)).map_err(|e| CliError::Usage(e.to_string()))
}

pub fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("library types serialize")
}
