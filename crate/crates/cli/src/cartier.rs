//! `dkit cartier`

use dkit_core::{CartierElement, WittVector};

use crate::{CartierVerb, CliError, CmdResult, Ctx, Outcome};

pub(crate) fn run(ctx: &Ctx, verb: CartierVerb, args: &[String]) -> CmdResult {
    let ring = ctx.ring()?;
    let n = ctx.require_n()?;
    let parse = |t: &String| CartierElement::parse(t, &ring, n);
    let want = |k: usize| {
        if args.len() == k {
            Ok(())
        } else {
            Err(CliError::Usage(format!("expected {k} argument(s), got {}", args.len())))
        }
    };
    let text = match verb {
        CartierVerb::Normal => {
            want(1)?;
            parse(&args[0])?.to_string()
        }
        CartierVerb::Add => {
            want(2)?;
            parse(&args[0])?.add(&parse(&args[1])?)?.to_string()
        }
        CartierVerb::Sub => {
            want(2)?;
            parse(&args[0])?.sub(&parse(&args[1])?)?.to_string()
        }
        CartierVerb::Mul => {
            want(2)?;
            parse(&args[0])?.mul(&parse(&args[1])?)?.to_string()
        }
        CartierVerb::Neg => {
            want(1)?;
            parse(&args[0])?.neg()?.to_string()
        }
        CartierVerb::Act => {
            want(2)?;
            let op = parse(&args[0])?;
            let w = WittVector::parse(&args[1], &ring)?;
            let id = dkit_core::RingHom::identity(&ring);
            op.act(&id, &w)?.short()
        }
    };
    Ok(Outcome::ok(format!("{text}\n")))
}
