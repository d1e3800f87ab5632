//! `dkit points`

use dkit_core::points::PointSet;
use dkit_core::RingHom;

use crate::{line, CmdResult, Ctx, Outcome, PointsVerb};

pub(crate) fn run(ctx: &Ctx, verb: PointsVerb) -> CmdResult {
    let pres = ctx.presentation()?.into_arc();
    let h = if ctx.has_ring() {
        RingHom::by_names(pres.ring(), &ctx.ring()?, &[])?
    } else {
        RingHom::identity(pres.ring())
    };
    let points = PointSet::compute(pres, &h, ctx.budgets.points)?;
    let mut out = String::new();
    match verb {
        PointsVerb::List => {
            for x in points.points() {
                let parts: Vec<String> = x.iter().map(|w| w.short()).collect();
                line(&mut out, format!("({})", parts.join(", ")));
            }
            line(&mut out, format!("{} points over {}", points.len(), points.target().spec()));
            Ok(Outcome::ok(out))
        }
        PointsVerb::Group => {
            let g = points.group_structure(ctx.budgets.points)?;
            line(&mut out, format!("order {}: {g}", g.order));
            Ok(Outcome { out, ok: g.is_group() })
        }
    }
}
