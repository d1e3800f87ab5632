//! `dkit census`

use dkit_core::moduli::{
    enumerate_presentations, infinitesimal_lift_all, iso_classes, serialize_presentation,
    square_zero_thickening, truncation_surjectivity,
};
use dkit_core::ring::HomTable;

use crate::{line, CensusVerb, CmdResult, Ctx, Outcome};

pub(crate) fn run(ctx: &Ctx, verb: CensusVerb) -> CmdResult {
    let ring = ctx.ring()?;
    let n = ctx.require_n()?;
    let r = ctx.r.unwrap_or(1);
    let stream = || enumerate_presentations(&ring, n, r, ctx.budgets.presentations);
    let mut out = String::new();
    match verb {
        CensusVerb::Enumerate => {
            for p in stream()? {
                line(&mut out, serialize_presentation(&p));
            }
            Ok(Outcome::ok(out))
        }
        CensusVerb::Classes => {
            let report = iso_classes(stream()?, &ctx.budgets)?;
            let ok = report.orbit_stabilizer_holds();
            if ctx.csv {
                out = report.to_csv();
            } else {
                line(&mut out, report.to_string());
            }
            Ok(Outcome { out, ok })
        }
        CensusVerb::Lift => {
            let trunc = truncation_surjectivity(stream()?)?;
            line(&mut out, format!("truncation level {n} -> {}:", n + 1));
            line(&mut out, trunc.to_string());
            let (_, h) = square_zero_thickening(&ring)?;
            let table = HomTable::new(&h)?;
            let (checked, lifted) = infinitesimal_lift_all(stream()?, &table)?;
            line(
                &mut out,
                format!("thickening {} -> {}: lifted {lifted}/{checked}", h.source().spec(), ring.spec()),
            );
            let ok = trunc.coverage() == 1.0 && lifted == checked;
            Ok(Outcome { out, ok })
        }
    }
}
