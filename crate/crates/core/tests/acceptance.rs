//! Acceptance suite. Runs without the libtest harness so that the verdict
//! for every criterion is printed on each `cargo test` run.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ogpush::algebra::{FactoredRatFunc, MultiPoly, Rat, VarId};
use ogpush::exprparse::{elaborate_poly, format_poly, parse_class_expr};
use ogpush::ktheory::{k_component_equality_check, k_localize_pushforward};
use ogpush::pushforward::{
    compute_route, euler_class, localize_pushforward, residue_pushforward_with, schur_pushforward_closed, CharClass,
    Component, ResidueMode, Route, SignVector,
};
use ogpush::residue::residue_at_simple_pole;
use ogpush::symfun::{schur_bialternant, Partition};

const COMPONENTS: [Component; 3] = [Component::Plus, Component::Minus, Component::Full];

type Verdict = Result<String, String>;

fn t(i: u32) -> MultiPoly {
    MultiPoly::t(i)
}

fn z(i: u32) -> MultiPoly {
    MultiPoly::z(i)
}

fn sq(p: &MultiPoly) -> MultiPoly {
    p * p
}

fn part(p: &[u32], n: usize) -> Partition {
    Partition::new(p, n).unwrap()
}

fn routes_for(component: Component) -> Vec<Route> {
    let mut r = vec![Route::Oracle, Route::Long, Route::Short, Route::Closed];
    if component == Component::Full {
        r.push(Route::Dp);
    }
    r
}

/// Every route value for every case of the route-agreement suite.
struct Sweep {
    values: BTreeMap<(usize, Partition, Component), BTreeMap<Route, MultiPoly>>,
    errors: Vec<String>,
    elapsed: Duration,
}

fn sweep() -> Sweep {
    let start = Instant::now();
    let mut values = BTreeMap::new();
    let mut errors = Vec::new();
    for n in 1..=3 {
        for lambda in Partition::in_box(n, 5) {
            let phi = CharClass::schur(&lambda);
            for c in COMPONENTS {
                let mut by_route = BTreeMap::new();
                for route in routes_for(c) {
                    match compute_route(&phi, c, route) {
                        Ok(p) => {
                            by_route.insert(route, p);
                        }
                        Err(e) => errors.push(format!("n={n} {lambda} {c} {route}: {e}")),
                    }
                }
                values.insert((n, lambda.clone(), c), by_route);
            }
        }
    }
    Sweep {
        values,
        errors,
        elapsed: start.elapsed(),
    }
}

fn criterion_1() -> Verdict {
    let start = Instant::now();
    let phi = CharClass::schur(&part(&[2, 1], 2));
    let expected = |c| match c {
        Component::Plus => (&t(1) * &t(2)).scale(&Rat::from(2)),
        _ => (&t(1) * &t(2)).scale(&Rat::from(-2)),
    };
    for c in [Component::Plus, Component::Minus] {
        for route in [Route::Oracle, Route::Long, Route::Short, Route::Closed] {
            let v = compute_route(&phi, c, route).map_err(|e| e.to_string())?;
            if v != expected(c) {
                return Err(format!("{c} via {route} gave {v}"));
            }
        }
    }
    let elapsed = start.elapsed();
    if elapsed >= Duration::from_secs(1) {
        return Err(format!("took {elapsed:?}"));
    }
    Ok(format!("plus 2*t1*t2, minus -2*t1*t2 on 4 routes in {elapsed:?}"))
}

fn criterion_2() -> Verdict {
    let kernel = FactoredRatFunc::new(
        &(&z(2) - &z(1)) * &(&z(1) * &z(2)),
        [(&sq(&t(1)) - &sq(&z(1)), 1), (&sq(&t(2)) - &sq(&z(2)), 1)],
    )
    .unwrap();
    let quarter = |p: MultiPoly| FactoredRatFunc::from_poly(p.scale(&Rat::new(1, 4)));
    let at = |e1: i8, e2: i8| -> Result<FactoredRatFunc, String> {
        let a1 = t(1).scale(&Rat::from(e1 as i64));
        let a2 = t(2).scale(&Rat::from(e2 as i64));
        let r1 = residue_at_simple_pole(&kernel, VarId::z(1), &a1).map_err(|e| e.to_string())?;
        residue_at_simple_pole(&r1, VarId::z(2), &a2).map_err(|e| e.to_string())
    };
    let printed = [
        ((1, 1), &t(2) - &t(1)),
        ((1, -1), -&t(1) - &t(2)),
        ((-1, 1), &t(1) + &t(2)),
    ];
    for ((e1, e2), value) in printed {
        let r = at(e1, e2)?;
        if !r.semantic_eq(&quarter(value.clone())) {
            return Err(format!("residue at ({e1},{e2}) is {r}, expected ({value})/4"));
        }
    }
    let factor = FactoredRatFunc::new(MultiPoly::int(4), [(&sq(&t(2)) - &sq(&t(1)), 1)]).unwrap();
    for (e1, e2) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
        let contribution = at(e1, e2)?.mul(&factor);
        let eps = SignVector::new(vec![e1, e2]).unwrap();
        let expected = FactoredRatFunc::new(MultiPoly::one(), [(euler_class(&eps), 1)]).unwrap();
        if !contribution.semantic_eq(&expected) {
            return Err(format!("at {eps}: {contribution} vs 1/({})", euler_class(&eps)));
        }
    }
    Ok("three printed residues and four fixed-point contributions".into())
}

fn criterion_3(s: &Sweep) -> Verdict {
    if let Some(e) = s.errors.first() {
        return Err(format!("{} route failures, first: {e}", s.errors.len()));
    }
    for ((n, lambda, c), by_route) in &s.values {
        let oracle = &by_route[&Route::Oracle];
        for (route, v) in by_route {
            if v != oracle {
                return Err(format!("n={n} {lambda} {c}: {route} gave {v}, oracle {oracle}"));
            }
        }
    }
    if s.elapsed >= Duration::from_secs(300) {
        return Err(format!("took {:?}", s.elapsed));
    }
    let checks: usize = s.values.values().map(BTreeMap::len).sum();
    Ok(format!(
        "{} cases, {checks} route values, {:?}",
        s.values.len(),
        s.elapsed
    ))
}

fn criterion_4(s: &Sweep) -> Verdict {
    let mut count = 0;
    for ((n, lambda, c), by_route) in &s.values {
        if *c != Component::Full {
            continue;
        }
        let get = |c| &s.values[&(*n, lambda.clone(), c)][&Route::Oracle];
        if get(Component::Plus) + get(Component::Minus) != by_route[&Route::Oracle] {
            return Err(format!("n={n} {lambda}"));
        }
        count += 1;
    }
    Ok(format!("{count} cases"))
}

fn criterion_5() -> Verdict {
    let n = 3;
    let mut nonzero = 0;
    let mut alternative_fails = 0;
    let flip = Rat::from(-1);
    for lambda in Partition::in_box(n, 5) {
        let phi = CharClass::schur(&lambda);
        for c in [Component::Plus, Component::Minus] {
            let oracle = localize_pushforward(&phi, c).map_err(|e| e.to_string())?;
            let closed = schur_pushforward_closed(&lambda, c);
            if oracle != closed {
                return Err(format!("{lambda} {c}: closed {closed}, oracle {oracle}"));
            }
            if !oracle.is_zero() {
                nonzero += 1;
                if closed.scale(&flip) != oracle {
                    alternative_fails += 1;
                }
            }
        }
    }
    if alternative_fails != nonzero || nonzero == 0 {
        return Err("the alternative sign was not ruled out".into());
    }
    Ok(format!(
        "prefactor +2^(n-1) matches the oracle; the extra (-1)^3 fails on all {nonzero} nonzero cases"
    ))
}

fn random_symmetric(rng: &mut ChaCha8Rng, n: usize, d: u32) -> MultiPoly {
    let zs = VarId::zs(n);
    let mut phi = MultiPoly::zero();
    for lambda in Partition::in_box(n, d).into_iter().filter(|l| l.size() == d) {
        let c: i64 = rng.gen_range(-3..=3);
        if c != 0 {
            phi = &phi + &schur_bialternant(&lambda, &zs).scale(&Rat::from(c));
        }
    }
    phi
}

fn criterion_6() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut samples = 0;
    for n in 1..=3usize {
        let dim = (n * (n - 1) / 2) as u32;
        for d in 0..=dim + 4 {
            for _ in 0..4 {
                let phi = random_symmetric(&mut rng, n, d);
                if phi.is_zero() {
                    continue;
                }
                let class = CharClass::new(phi.clone(), n).map_err(|e| e.to_string())?;
                for c in COMPONENTS {
                    for route in [Route::Oracle, Route::Short] {
                        let v = compute_route(&class, c, route).map_err(|e| e.to_string())?;
                        let ok = if d < dim {
                            v.is_zero()
                        } else {
                            v.is_zero() || v.homogeneous_degree() == Some(d - dim)
                        };
                        if !ok {
                            return Err(format!("n={n} d={d} {c} {route}: phi={phi} gave {v}"));
                        }
                    }
                }
                samples += 1;
            }
        }
    }
    Ok(format!("{samples} random symmetric classes, seed 6"))
}

fn criterion_7(s: &Sweep) -> Verdict {
    let flip = -t(1);
    let mut count = 0;
    for ((n, lambda, c), by_route) in &s.values {
        if *c != Component::Plus {
            continue;
        }
        let minus = &s.values[&(*n, lambda.clone(), Component::Minus)];
        for (route, plus_value) in by_route {
            let flipped = plus_value.substitute_one(VarId::t(1), &flip);
            if flipped != minus[route] {
                return Err(format!("n={n} {lambda} {route}"));
            }
            count += 1;
        }
    }
    Ok(format!("{count} route values"))
}

fn criterion_8() -> Verdict {
    let wedge2 = part(&[1, 1], 2);
    let plus = k_localize_pushforward(&wedge2, Component::Plus).map_err(|e| e.to_string())?;
    if plus.to_string() != "1 + t1*t2 + t1^-1*t2^-1" {
        return Err(format!("plus gave {plus}"));
    }
    let minus = k_localize_pushforward(&wedge2, Component::Minus).map_err(|e| e.to_string())?;
    if minus.to_string() != "1 + t1*t2^-1 + t1^-1*t2" {
        return Err(format!("minus gave {minus}"));
    }
    let mut checked = 0;
    for n in 1..=3 {
        for lambda in Partition::in_box(n, 3) {
            if lambda.parts()[n - 1] != 0 {
                continue;
            }
            if !k_component_equality_check(&lambda).map_err(|e| e.to_string())? {
                return Err(format!("components differ for {lambda}"));
            }
            checked += 1;
        }
    }
    Ok(format!(
        "plus {plus}; minus {minus} (printed duplicate term replaced); equality on {checked} partitions"
    ))
}

fn criterion_9(s: &Sweep) -> Verdict {
    let mut count = 0;
    for ((n, lambda, c), by_route) in &s.values {
        let phi = CharClass::schur(lambda);
        for route in [Route::Long, Route::Short, Route::Dp] {
            let Some(expected) = by_route.get(&route) else { continue };
            let series = residue_pushforward_with(&phi, *c, route, ResidueMode::Series).map_err(|e| e.to_string())?;
            if &series != expected {
                return Err(format!(
                    "n={n} {lambda} {c} {route}: series {series}, pole sum {expected}"
                ));
            }
            residue_pushforward_with(&phi, *c, route, ResidueMode::CrossChecked)
                .map_err(|e| format!("n={n} {lambda} {c} {route}: {e}"))?;
            count += 1;
        }
    }
    Ok(format!("{count} integrands, stepwise and final"))
}

fn random_rat(rng: &mut ChaCha8Rng) -> Rat {
    let num: i64 = rng.gen_range(-20..=20);
    let den: i64 = rng.gen_range(1..=6);
    Rat::new(if num == 0 { 1 } else { num }, den)
}

fn criterion_10() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for i in 0..1000 {
        let n = rng.gen_range(1..=3usize);
        let d = rng.gen_range(0..=4u32);
        let zs = VarId::zs(n);
        let mut phi = MultiPoly::zero();
        for lambda in Partition::in_box(n, d) {
            if rng.gen_bool(0.4) {
                phi = &phi + &schur_bialternant(&lambda, &zs).scale(&random_rat(&mut rng));
            }
        }
        let p = if i % 2 == 0 {
            phi
        } else {
            let class = CharClass::new(phi, n).map_err(|e| e.to_string())?;
            let c = COMPONENTS[rng.gen_range(0..3)];
            localize_pushforward(&class, c).map_err(|e| e.to_string())?
        };
        let text = format_poly(&p);
        let back = parse_class_expr(&text, n)
            .and_then(|e| elaborate_poly(&e, n))
            .map_err(|e| format!("{text}: {e}"))?;
        if back != p {
            return Err(format!("{text} came back as {back}"));
        }
    }
    Ok("1000 classes and push-forwards, seed 10".into())
}

fn main() -> ExitCode {
    let s = sweep();
    let results: Vec<(&str, Verdict)> = vec![
        ("1 example reproduction", criterion_1()),
        ("2 residue golden values", criterion_2()),
        ("3 route agreement", criterion_3(&s)),
        ("4 component additivity", criterion_4(&s)),
        ("5 closed-form sign", criterion_5()),
        ("6 degree and vanishing law", criterion_6()),
        ("7 sign-flip duality", criterion_7(&s)),
        ("8 K-theory examples", criterion_8()),
        ("9 residue algorithm equivalence", criterion_9(&s)),
        ("10 parser round-trip", criterion_10()),
    ];
    let mut failed = 0;
    for (name, verdict) in &results {
        match verdict {
            Ok(msg) => println!("PASS criterion {name}: {msg}"),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {name}: {msg}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
