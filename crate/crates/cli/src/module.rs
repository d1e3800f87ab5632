//! `dkit module`

use dkit_core::cosmooth::{check_u_injective, verify_cosmooth, Coords, ModuleMap, Presentation};
use dkit_core::moduli::infinitesimal_lift;
use dkit_core::{Ring, RingElement};

use crate::{line, CliError, CmdResult, Ctx, ModuleVerb, Outcome};

/// `[c_0, c_1, ...]` or `c_0, c_1, ...`.
fn parse_list(ring: &Ring, text: &str) -> Result<Vec<RingElement>, CliError> {
    let t = text.trim();
    let inner = t.strip_prefix('[').and_then(|s| s.strip_suffix(']')).unwrap_or(t);
    Ok(inner.split(',').map(|c| ring.parse(c.trim())).collect::<Result<Vec<_>, _>>()?)
}

/// Canonical coordinates written row by row: `c_00,c_01; c_10,c_11`.
fn parse_coords(pres: &Presentation, text: &str) -> Result<Coords, CliError> {
    let (n, r) = (pres.level(), pres.rank());
    let mut out = Vec::with_capacity(n * r);
    let t = text.trim();
    let inner = t.strip_prefix('(').and_then(|s| s.strip_suffix(')')).unwrap_or(t);
    for row in inner.split(';') {
        out.extend(parse_list(pres.ring(), row)?);
    }
    if out.len() != n * r {
        return Err(CliError::Usage(format!(
            "`{text}` has {} coordinates, expected {} ({n} rows of {r})",
            out.len(),
            n * r
        )));
    }
    Ok(out)
}

fn show(pres: &Presentation) -> String {
    let mut out = pres.to_text();
    line(&mut out, format!("# {}", pres.describe()));
    let (r, m) = pres.lie_data();
    let rows: Vec<String> = m
        .iter()
        .map(|row| row.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" "))
        .collect();
    line(&mut out, format!("# M/VM free of rank {r}, F mod V: [{}]", rows.join("; ")));
    out
}

pub(crate) fn run(ctx: &Ctx, verb: ModuleVerb, args: &[String]) -> CmdResult {
    if verb == ModuleVerb::Make {
        let ring = ctx.ring()?;
        let n = ctx.require_n()?;
        let r = ctx.r.unwrap_or(1);
        if args.len() != r * r {
            return Err(CliError::Usage(format!("expected {} coefficient lists, got {}", r * r, args.len())));
        }
        let mut coeffs = Vec::with_capacity(r * r * n);
        for a in args {
            let list = parse_list(&ring, a)?;
            if list.len() != n {
                return Err(CliError::Usage(format!("`{a}` has {} entries, expected {n}", list.len())));
            }
            coeffs.extend(list);
        }
        return Ok(Outcome::ok(Presentation::from_flat(&ring, n, r, coeffs)?.to_text()));
    }
    let pres = ctx.presentation()?;
    match verb {
        ModuleVerb::Make => unreachable!(),
        ModuleVerb::Show => Ok(Outcome::ok(show(&pres))),
        ModuleVerb::Verify => {
            let report = verify_cosmooth(&pres, ctx.budgets.points)?;
            Ok(Outcome { out: format!("{report}\n"), ok: report.passed() })
        }
        ModuleVerb::Truncate => {
            let m = ctx.n.ok_or_else(|| CliError::Usage("--n gives the new level".into()))?;
            Ok(Outcome::ok(pres.truncate(m)?.to_text()))
        }
        ModuleVerb::Lift => {
            let layer = if args.is_empty() {
                None
            } else {
                let r = pres.rank();
                if args.len() != r * r {
                    return Err(CliError::Usage(format!("expected {} layer entries", r * r)));
                }
                let elems = args.iter().map(|a| pres.ring().parse(a)).collect::<Result<Vec<_>, _>>()?;
                Some(elems.chunks(r).map(|c| c.to_vec()).collect::<Vec<_>>())
            };
            Ok(Outcome::ok(pres.lift_level(layer.as_deref())?.to_text()))
        }
        ModuleVerb::Thicken => {
            let (lifted, h) = infinitesimal_lift(&pres)?;
            let ok = lifted.base_change(&h)? == pres;
            Ok(Outcome { out: lifted.to_text(), ok })
        }
        ModuleVerb::BaseChange => {
            if ctx.at.is_none() {
                return Err(CliError::Usage("base-change needs --at".into()));
            }
            Ok(Outcome::ok(pres.to_text()))
        }
        ModuleVerb::Hom => {
            if args.len() != pres.rank() {
                return Err(CliError::Usage(format!("expected {} generator images", pres.rank())));
            }
            let m = pres.clone().into_arc();
            let images = args.iter().map(|a| parse_coords(&pres, a)).collect::<Result<Vec<_>, _>>()?;
            let f = ModuleMap::new(m.clone(), m, images)?;
            let mut out = String::new();
            let hom = f.hom_check()?;
            line(&mut out, format!("hom: {hom}"));
            if hom {
                line(&mut out, format!("iso: {}", f.is_iso()?));
                if pres.cardinality().is_some_and(|c| c <= ctx.budgets.points) {
                    line(&mut out, format!("bijective: {}", f.is_bijective_brute_force()?));
                }
            }
            Ok(Outcome { out, ok: hom })
        }
        ModuleVerb::Injective => {
            let bound = 2 * pres.level() as u32;
            let ok = check_u_injective(&pres, bound, ctx.budgets.points)?;
            let out = format!(
                "u injective up to F-degree {bound}: {}\n",
                if ok { "pass" } else { "FAIL" }
            );
            Ok(Outcome { out, ok })
        }
    }
}
