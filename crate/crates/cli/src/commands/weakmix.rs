use std::sync::Arc;

use veechmix::exactnum::RealBasis;
use veechmix::weakmix::{check_surface_weak_mixing, check_weak_mixing};

use super::{direction, load_iet_with_times, load_section, load_surface};
use crate::output::{pretty, Ctx};
use crate::{CliError, WeakmixCmd};

pub fn run(ctx: &Ctx, basis: &Arc<RealBasis>, cmd: WeakmixCmd) -> Result<u8, CliError> {
    let WeakmixCmd::Check { surface, dir, section, iet, times } = cmd;
    let verdict = match (surface, iet, times) {
        (Some(s), _, _) => {
            let (Some(dir), Some(section)) = (dir, section) else {
                return Err(CliError::Usage("--surface needs --dir and --section".into()));
            };
            let s = load_surface(&s)?;
            check_surface_weak_mixing(&s, &direction(&dir, basis)?, &load_section(&section)?)?
        }
        (None, Some(i), Some(t)) => {
            let (iet, times) = load_iet_with_times(&i, &t, basis)?;
            check_weak_mixing(&iet, &times)?
        }
        _ => return Err(CliError::Usage("give --surface/--dir/--section or --iet/--times".into())),
    };
    if ctx.json {
        print!("{}", pretty(&verdict.to_json()));
    } else {
        print!("{verdict}");
    }
    Ok(verdict.status.exit_code() as u8)
}
