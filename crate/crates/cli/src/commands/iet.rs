use std::sync::Arc;

use serde_json::json;
use veechmix::exactnum::RealBasis;
use veechmix::iet::{Permutation, SigmaDecomposition};

use super::{load_iet, to_value};
use crate::output::{pretty, Ctx};
use crate::{parse, CliError, IetCmd};

pub fn run(ctx: &Ctx, basis: &Arc<RealBasis>, cmd: IetCmd) -> Result<u8, CliError> {
    let IetCmd::Analyze { perm, iet } = cmd;
    let (perm, iet) = match (perm, iet) {
        (Some(p), _) => (Permutation::new(parse::usize_list(&p)?).map_err(|e| CliError::Usage(e.to_string()))?, None),
        (None, Some(path)) => {
            let t = load_iet(&path, basis)?;
            (t.perm().clone(), Some(t))
        }
        (None, None) => return Err(CliError::Usage("give --perm or --iet".into())),
    };
    let dec = perm.sigma_decomposition();
    let irreducible = perm.is_irreducible();
    if ctx.json {
        let mut v = json!({
            "perm": perm.images(),
            "irreducible": irreducible,
            "sigma": dec.sigma,
            "cycles": dec.cycles,
            "b_vectors": dec.b_vectors,
            "r": dec.cycles.len(),
        });
        if let Some(t) = &iet {
            v["lengths"] = to_value(&t.lengths());
            v["lengths_rationally_independent"] = json!(t.lengths_rationally_independent());
        }
        print!("{}", pretty(&v));
    } else {
        println!("permutation {perm}, irreducible: {irreducible}");
        print!("{}", tables(&dec));
        if let Some(t) = &iet {
            let ls: Vec<String> = t.lengths().iter().map(ToString::to_string).collect();
            println!("lengths ({}), rationally independent: {}", ls.join(", "), t.lengths_rationally_independent());
        }
    }
    Ok(0)
}

fn row(label: &str, xs: impl IntoIterator<Item = String>, w: usize) -> String {
    let cells: Vec<String> = xs.into_iter().map(|x| format!("{x:>w$}")).collect();
    format!("{label:<8}{}\n", cells.join(" "))
}

/// sigma as a two-row table, then one row per cycle with its `b_S`.
fn tables(dec: &SigmaDecomposition) -> String {
    let w = 3;
    let mut s = String::from("sigma\n");
    s += &row("  i", (0..dec.sigma.len()).map(|i| i.to_string()), w);
    s += &row("  s(i)", dec.sigma.iter().map(ToString::to_string), w);
    s += &format!("cycles (r = {})\n", dec.cycles.len());
    let m = dec.b_vectors.first().map_or(0, Vec::len);
    s += &row("  b_S", (1..=m).map(|i| format!("[{i}]")), w.max(4));
    for (i, (c, b)) in dec.cycles.iter().zip(&dec.b_vectors).enumerate() {
        let set: Vec<String> = c.iter().map(ToString::to_string).collect();
        let r = row(&format!("  S_{i}"), b.iter().map(ToString::to_string), w.max(4));
        s += &format!("{}   {{{}}}\n", r.trim_end(), set.join(","));
    }
    s
}
