//! `dkit witt`

use dkit_core::witt::structural_polynomials;
use dkit_core::WittVector;

use crate::{line, CliError, CmdResult, Ctx, Outcome, WittVerb};

fn parse_vector(ctx: &Ctx, text: &str) -> Result<WittVector, CliError> {
    let ring = ctx.ring()?;
    let w = WittVector::parse(text, &ring)?;
    if let Some(n) = ctx.n {
        if w.len() != n {
            return Err(CliError::Usage(format!("`{text}` has {} components but --n is {n}", w.len())));
        }
    }
    Ok(w)
}

fn operands(ctx: &Ctx, args: &[String], count: usize) -> Result<Vec<WittVector>, CliError> {
    if args.len() != count {
        return Err(CliError::Usage(format!("expected {count} Witt vector(s), got {}", args.len())));
    }
    args.iter().map(|a| parse_vector(ctx, a)).collect()
}

fn structural_params(ctx: &Ctx) -> Result<(u32, usize), CliError> {
    let p = match (ctx.p, ctx.has_ring()) {
        (Some(p), _) => p,
        (None, true) => ctx.ring()?.p(),
        (None, false) => return Err(CliError::Usage("--p is required".into())),
    };
    Ok((p, ctx.require_n()?))
}

pub(crate) fn run(ctx: &Ctx, verb: WittVerb, args: &[String]) -> CmdResult {
    let result = match verb {
        WittVerb::Add => {
            let v = operands(ctx, args, 2)?;
            v[0].add(&v[1])?
        }
        WittVerb::Sub => {
            let v = operands(ctx, args, 2)?;
            v[0].sub(&v[1])?
        }
        WittVerb::Mul => {
            let v = operands(ctx, args, 2)?;
            v[0].mul(&v[1])?
        }
        WittVerb::Neg => operands(ctx, args, 1)?[0].neg()?,
        WittVerb::Frobenius => operands(ctx, args, 1)?[0].frobenius(),
        WittVerb::Verschiebung => operands(ctx, args, 1)?[0].verschiebung(),
        WittVerb::Teichmuller => {
            let [a] = args else {
                return Err(CliError::Usage("expected one ring element".into()));
            };
            let ring = ctx.ring()?;
            WittVector::teichmuller(&ring.parse(a)?, ctx.require_n()?)
        }
        WittVerb::Poly => {
            let (p, n) = structural_params(ctx)?;
            return Ok(Outcome::ok(structural_polynomials(p, n)?.describe()));
        }
        WittVerb::Check => {
            let (p, n) = structural_params(ctx)?;
            let sp = structural_polynomials(p, n)?;
            let mut out = String::new();
            let ok = sp.check_ghost_identities().is_ok();
            line(
                &mut out,
                format!("ghost identities p={p} n={n}: {}", if ok { "pass" } else { "FAIL" }),
            );
            return Ok(Outcome { out, ok });
        }
    };
    Ok(Outcome::ok(format!("{}\n", result.short())))
}
