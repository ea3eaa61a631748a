use z2z4q8::construct::{build_from_plan, existing_parameters, plan_case, planned_cases, CONSTRUCTIBLE_SHAPES};
use z2z4q8::structure::Shape;

#[test]
fn every_planned_case_builds_up_to_length_128() {
    let mut failures = Vec::new();
    for m in 3..=7 {
        for (shape, _, tau) in existing_parameters(m) {
            if !CONSTRUCTIBLE_SHAPES.contains(&shape) {
                continue;
            }
            for case in planned_cases(m, shape, tau).unwrap() {
                if let Err(e) = plan_case(m, shape, tau, &case).and_then(|plan| build_from_plan(&plan)) {
                    failures.push(format!("m={m} shape {shape} tau={tau} case {}: {e}", case.case));
                }
            }
        }
    }
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

#[test]
fn rank_dial_steps_by_one() {
    for (m, shape, tau) in [(7, Shape::Two, 3), (6, Shape::Two, 3), (7, Shape::Three, 3), (7, Shape::Three, 2)] {
        let ranks: Vec<usize> = planned_cases(m, shape, tau)
            .unwrap()
            .iter()
            .filter(|c| c.case == "4c")
            .map(|c| {
                let plan = plan_case(m, shape, tau, c).unwrap();
                build_from_plan(&plan).unwrap().measurement.r
            })
            .collect();
        assert!(ranks.len() >= 2);
        assert!(ranks.windows(2).all(|w| w[1] == w[0] + 1), "{shape} m={m}: {ranks:?}");
    }
}
