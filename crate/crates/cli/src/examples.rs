//! The worked examples: the constant group `Z/p^n`, the family with group
//! law `X + Y + l X Y` over `F_p[l]`, and the `p`-th power of its invariant
//! vector field.

use std::collections::HashSet;

use dkit_core::cosmooth::{verify_cosmooth, Coords, Presentation};
use dkit_core::points::{hochschild_ring, PointSet, TruncatedDerivation};
use dkit_core::witt::all_witt_vectors;
use dkit_core::{Result, Ring, RingElement, RingHom, WittVector};

use crate::{line, CmdResult, Ctx, ExampleName, ExamplesVerb, Outcome};

const POINT_BUDGET: u128 = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExampleStep {
    pub name: String,
    pub detail: String,
    pub ok: bool,
}

impl ExampleStep {
    fn new(name: impl Into<String>, detail: impl Into<String>, ok: bool) -> Self {
        ExampleStep { name: name.into(), detail: detail.into(), ok }
    }
}

impl std::fmt::Display for ExampleStep {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mark = if self.ok { "pass" } else { "FAIL" };
        write!(f, "[{mark}] {}: {}", self.name, self.detail)
    }
}

/// The field with `p^2` elements, as `F_p[x]/(first irreducible quadratic)`.
fn quadratic_extension(p: u32) -> Result<Ring> {
    Ring::galois_field(p, 2)
}

/// `sum_i V^i [c_i]` in `W_n(S)` for rank-one coordinates.
fn witt_image(coords: &Coords, n: usize, ring: &Ring) -> Result<WittVector> {
    let mut acc = WittVector::zero(ring, n);
    for (i, c) in coords.iter().enumerate() {
        acc = acc.add(&WittVector::teichmuller(c, n).verschiebung_pow(i))?;
    }
    Ok(acc)
}

/// `F - 1` module at level `n` over `F_p`.
pub fn zpn_presentation(p: u32, n: usize) -> Result<Presentation> {
    let fp = Ring::prime_field(p)?;
    let mut a = vec![fp.zero(); n];
    a[0] = fp.one();
    Presentation::rank_one(&fp, a)
}

/// `F - [l^{p-1}]` module at level `n` over `F_p[l]`.
pub fn lambda_presentation(p: u32, n: usize) -> Result<Presentation> {
    let r = Ring::parse_spec(&format!("poly {p} vars=l"))?;
    let mut a = vec![r.zero(); n];
    a[0] = r.var("l")?.pow(p as u64 - 1);
    Presentation::rank_one(&r, a)
}

fn zpn(p: u32, n: usize, steps: &mut Vec<ExampleStep>) -> Result<()> {
    let tag = format!("zpn p={p} n={n}");
    let pres = zpn_presentation(p, n)?;
    let expected = format!("E_{n}/E_{n}(F - 1)");
    steps.push(ExampleStep::new(&tag, format!("module {}", pres.describe()), pres.describe() == expected));
    let report = verify_cosmooth(&pres, POINT_BUDGET)?;
    steps.push(ExampleStep::new(
        &tag,
        format!("cosmooth axioms on {} elements", report.elements),
        report.passed(),
    ));
    let order = (p as u128).pow(n as u32);
    for s in [Ring::prime_field(p)?, quadratic_extension(p)?] {
        let h = RingHom::by_names(pres.ring(), &s, &[])?;
        let points = PointSet::compute(pres.clone().into_arc(), &h, POINT_BUDGET)?;
        let g = points.group_structure(POINT_BUDGET)?;
        steps.push(ExampleStep::new(
            &tag,
            format!("points over {} = {g}", s.spec()),
            g.is_group() && g.invariant_factors == vec![order],
        ));
        steps.push(sigma_step(&tag, &pres, &h)?);
    }
    Ok(())
}

/// The map `sum V^i [c_i] e -> sum V^i [c_i]` identifies the module over
/// `S` with `W_n(S)`, with `F` going to the Witt Frobenius and `V` to the
/// shift.
fn sigma_step(tag: &str, pres: &Presentation, h: &RingHom) -> Result<ExampleStep> {
    let m = pres.base_change(h)?;
    let s = m.ring().clone();
    let n = m.level();
    let all = m.all_coords()?;
    let images: Vec<WittVector> = all.iter().map(|x| witt_image(x, n, &s)).collect::<Result<_>>()?;
    let distinct: HashSet<&WittVector> = images.iter().collect();
    let mut ok = distinct.len() == all_witt_vectors(&s, n)?.len() && distinct.len() == all.len();
    for (x, w) in all.iter().zip(&images) {
        ok &= witt_image(&m.f_coords(x)?, n, &s)? == w.frobenius();
        ok &= witt_image(&m.v_coords(x), n, &s)? == w.verschiebung();
    }
    // additivity against a spread of second summands
    let stride = (all.len() / 64).max(1);
    for (x, wx) in all.iter().zip(&images) {
        for (y, wy) in all.iter().zip(&images).step_by(stride) {
            ok &= witt_image(&m.add_coords(x, y)?, n, &s)? == wx.add(wy)?;
        }
    }
    Ok(ExampleStep::new(
        tag,
        format!("module over {} is W_{n} with F = sigma and V = shift", s.spec()),
        ok,
    ))
}

fn lambda(p: u32, n: usize, steps: &mut Vec<ExampleStep>) -> Result<()> {
    let tag = format!("lambda p={p} n={n}");
    let pres = lambda_presentation(p, n)?;
    let r = pres.ring().clone();
    let l = r.var("l")?;
    let lp = l.pow(p as u64 - 1);
    let formula = format!("E_{n}/E_{n}(F - [{lp}])");
    steps.push(ExampleStep::new(&tag, format!("module {}", pres.describe()), pres.describe() == formula));

    // F acts on M/VM by the p-operation of the invariant vector field
    let a = hochschild_ring(p, 1)?;
    let f = a.parse("1+l*T")?;
    let dp = TruncatedDerivation::new("T", f.clone())?.hochschild_p_power()?;
    let to_r = RingHom::by_names(&a, &r, &[("T".into(), "0".into())])?;
    let c = to_r.apply(dp.coeff())?;
    let (_, lie) = pres.lie_data();
    let lie_ok = dp.coeff() == &to_r.lift_element(&c)?.mul(&f) && lie[0][0] == c;
    if n == 1 {
        steps.push(ExampleStep::new(&tag, format!("Dieudonne module R[F]/R[F](F - {c})"), lie_ok));
    } else {
        steps.push(ExampleStep::new(&tag, format!("F on M/VM is {c}"), lie_ok));
    }

    let up = pres.lift_level(None)?;
    steps.push(ExampleStep::new(
        &tag,
        format!("level {} truncates to level {n}", n + 1),
        up.truncate(n)? == pres && up.describe() == format!("E_{0}/E_{0}(F - [{lp}])", n + 1),
    ));

    for (value, expected) in [("0", format!("E_{n}/E_{n}F")), ("1", format!("E_{n}/E_{n}(F - 1)"))] {
        let h = RingHom::specialize(&r, &format!("lambda={value}"))?;
        let special = pres.base_change(&h)?;
        let mut ok = special.describe() == expected;
        if value == "1" {
            ok &= special == zpn_presentation(p, n)?;
        }
        steps.push(ExampleStep::new(&tag, format!("at l={value}: {}", special.describe()), ok));
    }

    // points are the kernel of F - [l^{p-1}] on W_n
    let thick = Ring::parse_spec(&format!("mq {p} vars=e bounds=2"))?;
    let targets = [
        (Ring::prime_field(p)?, "0"),
        (Ring::prime_field(p)?, "1"),
        (quadratic_extension(p)?, "x"),
        (thick.clone(), "e"),
    ];
    for (s, value) in targets {
        if s.cardinality().is_none_or(|q| q.pow(n as u32) > POINT_BUDGET) {
            continue;
        }
        let h = RingHom::by_names(&r, &s, &[("l".into(), value.into())])?;
        let points = PointSet::compute(pres.clone().into_arc(), &h, POINT_BUDGET)?;
        let u = h.apply(&lp)?;
        let kernel: Vec<WittVector> = all_witt_vectors(&s, n)?
            .into_iter()
            .filter(|w| w.frobenius() == w.teichmuller_mul(&u))
            .collect();
        let found: HashSet<&WittVector> = points.points().iter().map(|x| &x[0]).collect();
        let ok = kernel.len() == points.len() && kernel.iter().all(|w| found.contains(w));
        let g = points.group_structure(POINT_BUDGET)?;
        steps.push(ExampleStep::new(
            &tag,
            format!("points over {} at l={value}: kernel of F - [{u}] = {g}", s.spec()),
            ok && g.is_group(),
        ));
    }
    Ok(())
}

fn hochschild(p: u32, big_n: u32, steps: &mut Vec<ExampleStep>) -> Result<()> {
    let tag = format!("hochschild p={p} N={big_n}");
    let a = hochschild_ring(p, big_n)?;
    let f = a.parse("1+l*T")?;
    let d = TruncatedDerivation::new("T", f.clone())?;
    let direct = d.p_power_direct()?;
    let expected = a.var("l")?.pow(p as u64 - 1).mul(&f);
    steps.push(ExampleStep::new(
        &tag,
        format!("((1+l*T)d/dT)^{p} = {direct}"),
        direct.coeff() == &expected && d.leibniz_holds()?,
    ));
    // every monomial l^i T^j of total degree at most 3
    let bound = p.pow(big_n);
    let mut count = 0;
    let mut ok = true;
    for i in 0..=3u32 {
        for j in 0..=(3 - i) {
            if j >= bound {
                continue;
            }
            let g: RingElement = a.var("l")?.pow(i as u64).mul(&a.var("T")?.pow(j as u64));
            let dg = TruncatedDerivation::new("T", g)?;
            ok &= dg.p_power_direct()? == dg.p_power_hochschild()?;
            count += 1;
        }
    }
    steps.push(ExampleStep::new(
        &tag,
        format!("direct composition matches Hochschild's formula on {count} coefficients"),
        ok,
    ));
    Ok(())
}

/// Run the selected examples for the given primes and levels.
pub fn run_suite(which: ExampleName, ps: &[u32], ns: &[usize], hochschild_ns: &[u32]) -> Result<Vec<ExampleStep>> {
    let mut steps = Vec::new();
    let all = which == ExampleName::All;
    for &p in ps {
        if all || which == ExampleName::Zpn {
            for &n in ns {
                zpn(p, n, &mut steps)?;
            }
        }
        if all || which == ExampleName::Lambda {
            for &n in ns {
                lambda(p, n, &mut steps)?;
            }
        }
        if all || which == ExampleName::Hochschild {
            for &big_n in hochschild_ns {
                hochschild(p, big_n, &mut steps)?;
            }
        }
    }
    Ok(steps)
}

pub(crate) fn run(ctx: &Ctx, verb: ExamplesVerb, which: ExampleName) -> CmdResult {
    if verb == ExamplesVerb::List {
        let mut out = String::new();
        line(&mut out, "zpn         F e = e over F_p: the constant group Z/p^n");
        line(&mut out, "lambda      F e = [l^(p-1)] e over F_p[l] and its specializations");
        line(&mut out, "hochschild  p-th power of (1+l*T)d/dT on F_p[l][T]/(T^(p^N))");
        return Ok(Outcome::ok(out));
    }
    let ps = ctx.p.map_or_else(|| vec![2, 3], |p| vec![p]);
    let ns = ctx.n.map_or_else(|| vec![1, 2, 3], |n| vec![n]);
    let hns = ctx.n.map_or_else(|| vec![1, 2], |n| vec![n as u32]);
    let steps = run_suite(which, &ps, &ns, &hns)?;
    let mut out = String::new();
    for s in &steps {
        line(&mut out, s.to_string());
    }
    let failed = steps.iter().filter(|s| !s.ok).count();
    line(&mut out, format!("{} steps, {failed} failed", steps.len()));
    Ok(Outcome { out, ok: failed == 0 })
}
