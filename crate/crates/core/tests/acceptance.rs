use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use z2z4q8::algebra::{AmbientSpace, GroupElement, Q8Element};
use z2z4q8::code::{check_hadamard, kernel_bruteforce, kernel_by_swappers, rank_by_span_group, rank_gf2, CodeGroup};
use z2z4q8::construct::{
    allowable_pairs, build_from_plan, construct_for, existing_parameters, plan_case, planned_cases, CONSTRUCTIBLE_SHAPES,
};
use z2z4q8::fixtures::{mixed_family, quaternionic_family};
use z2z4q8::structure::{measure, standardize, verify_duplication, verify_table3, Shape, StructureReport};

type Outcome = Result<String, String>;

struct Criterion {
    number: usize,
    name: &'static str,
    budget: Duration,
}

fn report(c: &Criterion, start: Instant, outcome: Outcome) -> bool {
    let elapsed = start.elapsed();
    let outcome = outcome.and_then(|detail| {
        if elapsed <= c.budget {
            Ok(detail)
        } else {
            Err(format!("took {elapsed:.2?}, budget {:?}", c.budget))
        }
    });
    let (status, detail) = match &outcome {
        Ok(d) => ("PASS", d),
        Err(d) => ("FAIL", d),
    };
    println!("criterion {} [{}] {status} ({elapsed:.2?}): {detail}", c.number, c.name);
    outcome.is_ok()
}

fn ensure(ok: bool, failures: &mut Vec<String>, msg: impl FnOnce() -> String) {
    if !ok {
        failures.push(msg());
    }
}

fn finish(failures: Vec<String>, detail: String) -> Outcome {
    if failures.is_empty() {
        Ok(detail)
    } else {
        Err(format!("{} failure(s): {}", failures.len(), failures.join("; ")))
    }
}

fn q8(token: &str) -> Q8Element {
    token.parse().unwrap()
}

fn single_q8(x: Q8Element) -> GroupElement {
    GroupElement::quaternionic(&[x])
}

fn single_z4(x: u8) -> GroupElement {
    GroupElement::from_parts(AmbientSpace::new(0, 1, 0), &[], &[x], &[]).unwrap()
}

fn bits(s: &str) -> Vec<bool> {
    s.bytes().map(|c| c == b'1').collect()
}

// Swapper straight from its defining property: the torsion element t with
// gray(t x y) = gray(x) + gray(y).
fn swapper_by_definition(x: &GroupElement, y: &GroupElement) -> GroupElement {
    let target = x.gray().xor(&y.gray()).unwrap();
    let xy = x.mul(y).unwrap();
    let space = x.space();
    [space.identity(), space.u()]
        .into_iter()
        .chain(torsion_candidates(space))
        .find(|t| t.mul(&xy).unwrap().gray() == target)
        .expect("some torsion element satisfies the definition")
}

fn torsion_candidates(space: AmbientSpace) -> Vec<GroupElement> {
    let len = space.len();
    (0..1usize << len)
        .map(|mask| {
            let z2: Vec<u8> = (0..space.k1).map(|c| (mask >> c & 1) as u8).collect();
            let z4: Vec<u8> = (0..space.k2).map(|c| 2 * (mask >> (space.k1 + c) & 1) as u8).collect();
            let q: Vec<Q8Element> = (0..space.k3)
                .map(|c| if mask >> (space.k1 + space.k2 + c) & 1 == 1 { Q8Element::A2 } else { Q8Element::ONE })
                .collect();
            GroupElement::from_parts(space, &z2, &z4, &q).unwrap()
        })
        .collect()
}

// Commutator from ab = [a,b] ba.
fn commutator_by_definition(x: &GroupElement, y: &GroupElement) -> GroupElement {
    x.mul(y).unwrap().mul(&y.mul(x).unwrap().inverse()).unwrap()
}

fn criterion1() -> Outcome {
    let mut failures = Vec::new();
    let q8_gray = [
        ("1", "0000"),
        ("b", "0110"),
        ("a", "0101"),
        ("ab", "1100"),
        ("a2", "1111"),
        ("a2b", "1001"),
        ("a3", "1010"),
        ("a3b", "0011"),
    ];
    for (token, image) in q8_gray {
        let got: Vec<bool> = q8(token).gray().iter().map(|&b| b == 1).collect();
        ensure(got == bits(image), &mut failures, || format!("gray({token})"));
    }
    let z4_gray = ["00", "01", "11", "10"];
    for (x, image) in z4_gray.iter().enumerate() {
        let got: Vec<bool> = single_z4(x as u8).gray().bits().collect();
        ensure(got == bits(image), &mut failures, || format!("gray({x})"));
    }
    // Rows and columns indexed by the classes {1,a2}, {a,a3}, {b,a2b}, {ab,a3b}.
    let classes = [["1", "a2"], ["a", "a3"], ["b", "a2b"], ["ab", "a3b"]];
    let q8_swappers = [
        ["1", "1", "1", "1"],
        ["1", "a2", "a2", "1"],
        ["1", "1", "a2", "a2"],
        ["1", "a2", "1", "a2"],
    ];
    let q8_commutators = [
        ["1", "1", "1", "1"],
        ["1", "1", "a2", "a2"],
        ["1", "a2", "1", "a2"],
        ["1", "a2", "a2", "1"],
    ];
    let mut cells = 0;
    for (i, row) in classes.iter().enumerate() {
        for (j, col) in classes.iter().enumerate() {
            for x in row {
                for y in col {
                    let (x, y) = (q8(x), q8(y));
                    cells += 1;
                    ensure(x.swapper(y) == q8(q8_swappers[i][j]), &mut failures, || format!("({x}:{y})"));
                    ensure(x.commutator(y) == q8(q8_commutators[i][j]), &mut failures, || format!("[{x},{y}]"));
                    let (gx, gy) = (single_q8(x), single_q8(y));
                    ensure(gx.swapper(&gy).unwrap() == swapper_by_definition(&gx, &gy), &mut failures, || {
                        format!("({x}:{y}) by definition")
                    });
                    ensure(gx.commutator(&gy).unwrap() == commutator_by_definition(&gx, &gy), &mut failures, || {
                        format!("[{x},{y}] by definition")
                    });
                }
            }
        }
    }
    for x in 0..4u8 {
        for y in 0..4u8 {
            let (gx, gy) = (single_z4(x), single_z4(y));
            let swap = if x % 2 == 1 && y % 2 == 1 { 2 } else { 0 };
            cells += 1;
            ensure(gx.swapper(&gy).unwrap() == single_z4(swap), &mut failures, || format!("({x}:{y}) in Z4"));
            ensure(gx.commutator(&gy).unwrap() == single_z4(0), &mut failures, || format!("[{x},{y}] in Z4"));
            ensure(gx.swapper(&gy).unwrap() == swapper_by_definition(&gx, &gy), &mut failures, || {
                format!("({x}:{y}) in Z4 by definition")
            });
        }
    }
    finish(failures, format!("12 Gray images and {cells} table cells match"))
}

fn swapper_identities(a: &GroupElement, b: &GroupElement, c: &GroupElement) -> Vec<&'static str> {
    let mut broken = Vec::new();
    let mul = |x: &GroupElement, y: &GroupElement| x.mul(y).unwrap();
    let sw = |x: &GroupElement, y: &GroupElement| x.swapper(y).unwrap();
    let cm = |x: &GroupElement, y: &GroupElement| x.commutator(y).unwrap();
    let (e, u) = (a.space().identity(), a.space().u());
    if cm(a, b) != cm(b, a) {
        broken.push("commutators are symmetric");
    }
    if sw(&mul(a, b), c) != mul(&sw(a, c), &sw(b, c)) || sw(c, &mul(a, b)) != mul(&sw(c, a), &sw(c, b)) {
        broken.push("swappers are bilinear");
    }
    if cm(&mul(a, b), c) != mul(&cm(a, c), &cm(b, c)) {
        broken.push("commutators are bilinear");
    }
    if mul(&sw(a, b), &sw(b, a)) != cm(a, b) {
        broken.push("swapper product is the commutator");
    }
    if sw(a, a) != a.square() {
        broken.push("self swapper is the square");
    }
    if a.square() == e && (cm(a, b) != e || sw(a, b) != e || sw(b, a) != e) {
        broken.push("order two swaps with everything");
    }
    if a.square() == u && cm(a, b) == e && (sw(a, b) != b.square() || sw(b, a) != b.square()) {
        broken.push("u-square swapper");
    }
    broken
}

fn random_element(space: AmbientSpace, rng: &mut StdRng) -> GroupElement {
    let z2: Vec<u8> = (0..space.k1).map(|_| rng.gen_range(0..2)).collect();
    let z4: Vec<u8> = (0..space.k2).map(|_| rng.gen_range(0..4)).collect();
    let q: Vec<Q8Element> = (0..space.k3).map(|_| Q8Element::all()[rng.gen_range(0..8)]).collect();
    GroupElement::from_parts(space, &z2, &z4, &q).unwrap()
}

fn criterion2() -> Outcome {
    let mut failures = Vec::new();
    let z4: Vec<GroupElement> = (0..4).map(single_z4).collect();
    let q: Vec<GroupElement> = Q8Element::all().into_iter().map(single_q8).collect();
    let mut triples = 0;
    for alphabet in [&z4, &q] {
        for a in alphabet {
            for b in alphabet {
                for c in alphabet {
                    triples += 1;
                    for name in swapper_identities(a, b, c) {
                        failures.push(format!("{name} at ({a}, {b}, {c})"));
                    }
                }
            }
        }
    }
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for trial in 0..10_000 {
        // Some trials omit the binary block so that u can be a square.
        let k1 = if trial % 2 == 0 { rng.gen_range(0..3) } else { 0 };
        let space = AmbientSpace::new(k1, rng.gen_range(0..4), rng.gen_range(1..5));
        let (a, b, c) = (
            random_element(space, &mut rng),
            random_element(space, &mut rng),
            random_element(space, &mut rng),
        );
        for name in swapper_identities(&a, &b, &c) {
            failures.push(format!("{name} at ({a}, {b}, {c})"));
        }
    }
    finish(failures, format!("{triples} single-component triples and 10000 random mixed triples"))
}

fn check_example(group: &CodeGroup, k: usize, r: usize, shape: Shape, sigma: usize, tau: usize) -> Result<(), String> {
    check_hadamard(group).map_err(|e| e.to_string())?;
    let m = measure(group).map_err(|e| e.to_string())?;
    let p = m.report.profile;
    if (m.k, m.r) != (k, r) {
        return Err(format!("expected (k={k}, r={r}), measured (k={}, r={})", m.k, m.r));
    }
    if (m.report.shape, p.sigma, p.tau) != (shape, sigma, tau) {
        return Err(format!("classified as {}", m.report.summary_line()));
    }
    Ok(())
}

fn example_criterion(examples: &[z2z4q8::fixtures::ExampleCode], shape: Shape, sigma: usize, tau: usize, codes: &mut Vec<(String, CodeGroup)>) -> Outcome {
    let mut failures = Vec::new();
    let mut pairs = Vec::new();
    for ex in examples {
        match ex.group() {
            Ok(group) => {
                if let Err(e) = check_example(&group, ex.k, ex.r, shape, sigma, tau) {
                    failures.push(format!("{}: {e}", ex.name));
                }
                pairs.push(format!("({},{})", ex.k, ex.r));
                codes.push((ex.name.clone(), group));
            }
            Err(e) => failures.push(format!("{}: {e}", ex.name)),
        }
    }
    finish(failures, format!("(k,r) = {} with shape {shape}, sigma={sigma}, tau={tau}", pairs.join(" ")))
}

// The kernel and rank statement for the whole family, written out case by case.
fn family_admits(m: usize, tau: usize, tau_bar: usize, upsilon: usize, k: usize, r: usize) -> bool {
    let c2 = |t: usize| t * t.saturating_sub(1) / 2;
    let Some(d) = (m + 1).checked_sub(k) else { return false };
    let Some(excess) = r.checked_sub(m + 1) else { return false };
    if d == 1 {
        return false;
    }
    let mut ok = false;
    ok |= d == 0 && excess == 0;
    ok |= d == 4 && upsilon == 2 && excess == 2;
    ok |= tau >= 1 && d == tau - 1 && d >= 2 && excess == c2(tau - 1);
    ok |= d == tau && d >= 2 && excess == c2(tau);
    ok |= d == tau + 1 && tau_bar <= 1 && excess == tau;
    ok |= d == tau + 1 && tau_bar + 1 == tau && tau_bar >= 2 && (c2(tau - 1)..=c2(tau) + 1).contains(&excess);
    ok |= d == tau + 1 && tau_bar == tau && tau >= 2 && (c2(tau) + 1..=c2(tau + 1)).contains(&excess);
    ok
}

fn tau_bar_for(shape: Shape, tau: usize) -> usize {
    if shape.u_is_square() {
        tau.saturating_sub(1)
    } else {
        tau
    }
}

fn criterion6(codes: &mut Vec<(String, CodeGroup)>) -> Outcome {
    let mut failures = Vec::new();
    let mut built = 0;
    let mut gaps = Vec::new();
    for m in 3..=7 {
        let mut done = BTreeSet::new();
        for (shape, sigma, tau) in existing_parameters(m) {
            let pairs = match allowable_pairs(m, shape, sigma, tau) {
                Ok(p) => p,
                Err(e) => {
                    failures.push(format!("m={m} shape {shape} tau={tau}: {e}"));
                    continue;
                }
            };
            let tau_bar = tau_bar_for(shape, tau);
            for &(k, r) in &pairs {
                ensure(family_admits(m, tau, tau_bar, shape.upsilon(), k, r), &mut failures, || {
                    format!("m={m} shape {shape} tau={tau}: (k={k}, r={r}) outside the known family bounds")
                });
            }
            // Printed 4c ranges that no plan reaches.
            if shape.upsilon() == 1 && tau_bar >= 2 {
                let c2 = |t: usize| t * (t - 1) / 2;
                let (lo, hi) = if tau_bar + 1 == tau { (c2(tau - 1), c2(tau) + 1) } else { (c2(tau) + 1, c2(tau + 1)) };
                for excess in lo..=hi {
                    if !pairs.contains(&(sigma, m + 1 + excess)) {
                        gaps.push(format!("m={m} shape {shape} tau={tau} r={}", m + 1 + excess));
                    }
                }
            }
            // Every planned case of a constructible shape, not only the one construct_for picks.
            if CONSTRUCTIBLE_SHAPES.contains(&shape) {
                for case in planned_cases(m, shape, tau).unwrap_or_default() {
                    match plan_case(m, shape, tau, &case).and_then(|plan| build_from_plan(&plan)) {
                        Ok(c) => {
                            built += 1;
                            ensure(c.measurement.prediction.admits(c.measurement.k, c.measurement.r), &mut failures, || {
                                format!("m={m} shape {shape} case {}: prediction {}", case.case, c.measurement.prediction)
                            });
                            codes.push((format!("m={m} shape {shape} tau={tau} case {}", case.case), c.group));
                        }
                        Err(e) => failures.push(format!("m={m} shape {shape} tau={tau} case {}: {e}", case.case)),
                    }
                }
            }
            for (k, r) in pairs {
                if !done.insert((k, r)) {
                    continue;
                }
                match construct_for(m, k, r) {
                    Ok(c) => {
                        built += 1;
                        let meas = &c.measurement;
                        ensure((meas.k, meas.r) == (k, r), &mut failures, || {
                            format!("m={m} target ({k},{r}) measured ({},{})", meas.k, meas.r)
                        });
                        ensure(meas.prediction.admits(meas.k, meas.r), &mut failures, || {
                            format!("m={m} ({k},{r}): case {} predicts {}", meas.case, meas.prediction)
                        });
                        codes.push((format!("m={m} k={k} r={r} shape {}", c.plan.shape), c.group));
                    }
                    Err(e) => failures.push(format!("m={m} (k={k}, r={r}): {e}")),
                }
            }
        }
    }
    let gap_note = if gaps.is_empty() { "no 4c range gaps".to_string() } else { format!("4c range gaps: {}", gaps.join(", ")) };
    finish(failures, format!("{built} codes constructed and measured exactly; {gap_note}"))
}

fn criterion5(codes: &[(String, CodeGroup)]) -> Outcome {
    let mut failures = Vec::new();
    for (name, group) in codes {
        let code = match group.gray_code() {
            Ok(c) => c,
            Err(e) => {
                failures.push(format!("{name}: {e}"));
                continue;
            }
        };
        let by_definition = kernel_bruteforce(&code);
        let by_swappers = kernel_by_swappers(group);
        ensure(by_definition.words() == by_swappers.words(), &mut failures, || format!("{name}: kernels differ"));
        let span = rank_by_span_group(group).map_err(|e| e.to_string());
        ensure(span == Ok(rank_gf2(&code)), &mut failures, || format!("{name}: ranks differ"));
    }
    finish(failures, format!("{} codes agree on kernel and rank", codes.len()))
}

fn reports(codes: &[(String, CodeGroup)]) -> Vec<(&str, &CodeGroup, Result<StructureReport, String>)> {
    codes
        .iter()
        .map(|(name, group)| (name.as_str(), group, standardize(group).map_err(|e| e.to_string())))
        .collect()
}

fn criterion7(codes: &[(String, CodeGroup)]) -> Outcome {
    let mut failures = Vec::new();
    for (name, group, report) in reports(codes) {
        let report = match report {
            Ok(r) => r,
            Err(e) => {
                failures.push(format!("{name}: {e}"));
                continue;
            }
        };
        let a = &report.abelian_max;
        let index = group.order() / a.order();
        ensure([1, 2, 4].contains(&index) && index * a.order() == group.order(), &mut failures, || {
            format!("{name}: |C/A| = {index}")
        });
        ensure(a.is_abelian(), &mut failures, || format!("{name}: A is not abelian"));
        let normal = group.generators().iter().all(|g| {
            a.generators()
                .iter()
                .all(|x| a.contains(&g.mul(x).unwrap().mul(&g.inverse()).unwrap()))
        });
        ensure(normal, &mut failures, || format!("{name}: A is not normal"));
        if let Err(e) = verify_table3(&report, group.space()) {
            failures.push(format!("{name}: {e}"));
        }
        if let Err(e) = verify_duplication(&report) {
            failures.push(format!("{name}: {e}"));
        }
    }
    finish(failures, format!("{} codes satisfy the structural properties", codes.len()))
}

fn criterion8(codes: &[(String, CodeGroup)]) -> Outcome {
    let mut failures = Vec::new();
    for (name, group, report) in reports(codes) {
        let report = match report {
            Ok(r) => r,
            Err(e) => {
                failures.push(format!("{name}: {e}"));
                continue;
            }
        };
        let regenerated = match CodeGroup::closure(group.space(), &report.std_gens.all()) {
            Ok(g) => g,
            Err(e) => {
                failures.push(format!("{name}: {e}"));
                continue;
            }
        };
        ensure(regenerated.same_elements(group), &mut failures, || format!("{name}: element sets differ"));
        match standardize(&regenerated) {
            Ok(again) => ensure(again.shape == report.shape, &mut failures, || {
                format!("{name}: shape {} became {}", report.shape, again.shape)
            }),
            Err(e) => failures.push(format!("{name}: {e}")),
        }
    }
    finish(failures, format!("{} codes round-trip through their standard generators", codes.len()))
}

fn main() {
    let second = Duration::from_secs(1);
    let criteria = [
        Criterion { number: 1, name: "gray and tables", budget: second },
        Criterion { number: 2, name: "identity suite", budget: 10 * second },
        Criterion { number: 3, name: "Q8^32 examples", budget: 5 * second },
        Criterion { number: 4, name: "Z4^4 Q8^6 examples", budget: second },
        Criterion { number: 5, name: "oracle equivalence", budget: 30 * second },
        Criterion { number: 6, name: "coverage sweep", budget: 120 * second },
        Criterion { number: 7, name: "structural properties", budget: 60 * second },
        Criterion { number: 8, name: "standardization round trip", budget: 60 * second },
    ];
    let mut codes = Vec::new();
    let mut passed = Vec::new();

    let start = Instant::now();
    passed.push(report(&criteria[0], start, criterion1()));
    let start = Instant::now();
    passed.push(report(&criteria[1], start, criterion2()));
    let start = Instant::now();
    passed.push(report(&criteria[2], start, example_criterion(&quaternionic_family(), Shape::Two, 4, 3, &mut codes)));
    let start = Instant::now();
    passed.push(report(&criteria[3], start, example_criterion(&mixed_family(), Shape::Three, 3, 2, &mut codes)));
    // The sweep runs before the oracle check, which covers its codes too.
    let start = Instant::now();
    let sweep = criterion6(&mut codes);
    let sweep_time = start.elapsed();
    let start = Instant::now();
    passed.push(report(&criteria[4], start, criterion5(&codes)));
    let start = Instant::now() - sweep_time;
    passed.push(report(&criteria[5], start, sweep));
    let start = Instant::now();
    passed.push(report(&criteria[6], start, criterion7(&codes)));
    let start = Instant::now();
    passed.push(report(&criteria[7], start, criterion8(&codes)));

    let failed: Vec<usize> = passed
        .iter()
        .zip(&criteria)
        .filter(|(ok, _)| !**ok)
        .map(|(_, c)| c.number)
        .collect();
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
