//! Base Hadamard Z2Z4-linear codes, the lifting homomorphisms, per-shape
//! s-generator recipes, and the planner that realizes an allowable `(k, r)`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::algebra::{AmbientSpace, GroupElement, Q8Element};
use crate::code::{check_hadamard, CodeGroup};
use crate::error::{Error, Result};
use crate::structure::{binomial2, measure, table3_row, Measurement, Shape};

/// Type `2^gamma 4^delta` of a base Hadamard code; `contains_u_square`
/// selects the purely quaternary family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BaseHadamardSpec {
    pub gamma: usize,
    pub delta: usize,
    pub contains_u_square: bool,
}

impl BaseHadamardSpec {
    /// `n = 2^m` of the Gray image.
    pub fn m(&self) -> usize {
        (self.gamma + 2 * self.delta).saturating_sub(1)
    }
}

// Mixed-radix tuples, first entry varying fastest.
fn tuples(radices: &[u8]) -> Vec<Vec<u8>> {
    let total: usize = radices.iter().map(|&r| r as usize).product();
    (0..total)
        .map(|mut i| {
            radices
                .iter()
                .map(|&r| {
                    let digit = (i % r as usize) as u8;
                    i /= r as usize;
                    digit
                })
                .collect()
        })
        .collect()
}

/// Builds the base code from its generator matrix and checks it is Hadamard.
///
/// Quaternary family: columns `(1, q2..q_delta, 2p1..2p_gamma)` for all
/// `q in Z4`, `p in {0,1}`; rows in the order all-ones, `q` rows, `p` rows.
/// Mixed family: order-four rows first, then the row whose Gray image is all
/// ones, then the remaining order-two rows.
pub fn base_hadamard(spec: BaseHadamardSpec) -> Result<CodeGroup> {
    let BaseHadamardSpec { gamma, delta, contains_u_square } = spec;
    let rows: Vec<(Vec<u8>, Vec<u8>)> = if contains_u_square {
        if delta == 0 {
            return Err(Error::InvalidParameters(
                "a quaternary base needs delta >= 1".into(),
            ));
        }
        let radices: Vec<u8> = std::iter::repeat_n(4, delta - 1)
            .chain(std::iter::repeat_n(2, gamma))
            .collect();
        let columns = tuples(&radices);
        let mut rows = vec![(Vec::new(), vec![1; columns.len()])];
        for j in 0..delta - 1 {
            rows.push((Vec::new(), columns.iter().map(|c| c[j]).collect()));
        }
        for i in 0..gamma {
            rows.push((Vec::new(), columns.iter().map(|c| 2 * c[delta - 1 + i]).collect()));
        }
        rows
    } else {
        if gamma == 0 {
            return Err(Error::InvalidParameters(
                "a mixed base needs gamma >= 1".into(),
            ));
        }
        // Binary columns: (y in Z2^delta, x in Z2^(gamma-1)).
        let binary = tuples(&vec![2; delta + gamma - 1]);
        // Quaternary columns: q in Z4^delta with first odd entry 1, p in Z2^(gamma-1).
        let quaternary: Vec<Vec<u8>> = tuples(&[vec![4; delta], vec![2; gamma - 1]].concat())
            .into_iter()
            .filter(|c| c[..delta].iter().find(|&&q| q % 2 == 1) == Some(&1))
            .collect();
        let mut rows = Vec::new();
        for j in 0..delta {
            rows.push((
                binary.iter().map(|c| c[j]).collect(),
                quaternary.iter().map(|c| c[j]).collect(),
            ));
        }
        rows.push((vec![1; binary.len()], vec![2; quaternary.len()]));
        for i in 0..gamma - 1 {
            rows.push((
                binary.iter().map(|c| c[delta + i]).collect(),
                quaternary.iter().map(|c| 2 * c[delta + i]).collect(),
            ));
        }
        rows
    };
    let space = AmbientSpace::new(rows[0].0.len(), rows[0].1.len(), 0);
    let generators = rows
        .iter()
        .map(|(z2, z4)| GroupElement::from_parts(space, z2, z4, &[]))
        .collect::<Result<Vec<_>>>()?;
    let group = CodeGroup::closure(space, &generators)?;
    if group.log_order() != gamma + 2 * delta {
        return Err(Error::InvalidParameters(format!(
            "base of type 2^{gamma} 4^{delta} has {} elements",
            group.order()
        )));
    }
    check_hadamard(&group)?;
    Ok(group)
}

/// `Z2 -> Z4`, `x -> 2x`.
pub fn chi1(x: u8) -> u8 {
    (2 * x) % 4
}

/// `Z4 -> Q8`, `x -> a^x`.
pub fn chi2(x: u8) -> Q8Element {
    Q8Element::new(x, 0)
}

/// Duplication `x -> (x, x)`.
pub fn chi3<T: Copy>(x: T) -> (T, T) {
    (x, x)
}

fn lift_element(x: &GroupElement, shape: Shape, split: &[bool]) -> Result<GroupElement> {
    let (z2, z4) = (x.z2(), x.z4());
    let part = |z2: Vec<u8>, z4: Vec<u8>, q8: Vec<Q8Element>| {
        let space = AmbientSpace::new(z2.len(), z4.len(), q8.len());
        GroupElement::from_parts(space, &z2, &z4, &q8)
    };
    match shape {
        Shape::One | Shape::OneStar => Ok(x.clone()),
        Shape::Two => part(Vec::new(), Vec::new(), z4.iter().map(|&v| chi2(v)).collect()),
        Shape::Three => part(
            Vec::new(),
            z2.iter().map(|&v| chi1(v)).collect(),
            z4.iter().map(|&v| chi2(v)).collect(),
        ),
        Shape::Four => part(
            z2.iter().flat_map(|&v| <[u8; 2]>::from(chi3(v))).collect(),
            Vec::new(),
            z4.iter().map(|&v| chi2(v)).collect(),
        ),
        Shape::FourStar => part(
            Vec::new(),
            z4.iter()
                .zip(split)
                .filter(|(_, &dup)| dup)
                .flat_map(|(&v, _)| <[u8; 2]>::from(chi3(v)))
                .collect(),
            z4.iter()
                .zip(split)
                .filter(|(_, &dup)| !dup)
                .map(|(&v, _)| chi2(v))
                .collect(),
        ),
        Shape::Five => part(
            Vec::new(),
            Vec::new(),
            z4.iter()
                .flat_map(|&v| <[u8; 2]>::from(chi3(v)))
                .map(chi2)
                .collect(),
        ),
    }
}

/// Applies the shape's lift to every generator of a base code built by
/// [`base_hadamard`]; the result is the abelian part `A(C)`.
pub fn lift_to_a(base: &CodeGroup, shape: Shape) -> Result<CodeGroup> {
    let space = base.space();
    let quaternary_base = space.k1 == 0;
    if space.k3 != 0 {
        return Err(Error::InvalidParameters("base code has Q8 components".into()));
    }
    let needs_quaternary = match shape {
        Shape::One | Shape::OneStar => quaternary_base,
        Shape::Two | Shape::FourStar | Shape::Five => true,
        Shape::Three | Shape::Four => false,
    };
    if needs_quaternary != quaternary_base {
        return Err(Error::InvalidParameters(format!(
            "a base in {space} cannot be lifted to shape {shape}"
        )));
    }
    // Shape 4*: duplicate where the second order-four row is even.
    let split: Vec<bool> = if shape == Shape::FourStar {
        let second = base
            .generators()
            .get(1)
            .filter(|g| g.order() == 4)
            .ok_or_else(|| Error::InvalidParameters("shape 4* needs two order-four rows".into()))?;
        second.z4().iter().map(|&v| v % 2 == 0).collect()
    } else {
        Vec::new()
    };
    let generators = base
        .generators()
        .iter()
        .map(|g| lift_element(g, shape, &split))
        .collect::<Result<Vec<_>>>()?;
    let lifted_space = generators
        .first()
        .map(GroupElement::space)
        .unwrap_or(space);
    CodeGroup::closure(lifted_space, &generators)
}

/// A construction target together with its free choices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructionPlan {
    pub m: usize,
    pub shape: Shape,
    pub sigma: usize,
    pub tau: usize,
    pub target_k: usize,
    pub target_r: usize,
    /// Case label of the rank/kernel analysis the plan aims for.
    pub case: String,
    /// Component indices that receive the `ab`-like value.
    pub dial: Vec<usize>,
}

impl fmt::Display for ConstructionPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "m={}", self.m)?;
        writeln!(f, "shape={}", self.shape)?;
        writeln!(f, "sigma={}", self.sigma)?;
        writeln!(f, "tau={}", self.tau)?;
        writeln!(f, "k={}", self.target_k)?;
        writeln!(f, "r={}", self.target_r)?;
        writeln!(f, "case={}", self.case)?;
        let dial: Vec<String> = self.dial.iter().map(ToString::to_string).collect();
        writeln!(f, "dial={}", dial.join(","))
    }
}

impl FromStr for ConstructionPlan {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut fields = std::collections::HashMap::new();
        for line in s.lines().map(str::trim) {
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, found `{line}`")))?;
            fields.insert(key.trim().to_string(), value.trim().to_string());
        }
        let get = |key: &str| {
            fields
                .get(key)
                .cloned()
                .ok_or_else(|| Error::Parse(format!("plan is missing `{key}`")))
        };
        let num = |key: &str| -> Result<usize> {
            get(key)?
                .parse()
                .map_err(|_| Error::Parse(format!("`{key}` is not a number")))
        };
        Ok(Self {
            m: num("m")?,
            shape: get("shape")?.parse()?,
            sigma: num("sigma")?,
            tau: num("tau")?,
            target_k: num("k")?,
            target_r: num("r")?,
            case: fields.get("case").cloned().unwrap_or_default(),
            dial: parse_dial(&fields.get("dial").cloned().unwrap_or_default())?,
        })
    }
}

/// Parses a comma- or space-separated list of component indices.
pub fn parse_dial(text: &str) -> Result<Vec<usize>> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse()
                .map_err(|_| Error::Parse(format!("bad dial index `{t}`")))
        })
        .collect()
}

/// The base code that the shape's lift turns into `A(C)`.
pub fn base_spec_for(shape: Shape, sigma: usize, tau: usize) -> Result<BaseHadamardSpec> {
    let spec = |gamma: Option<usize>, delta, contains_u_square| {
        gamma
            .map(|gamma| BaseHadamardSpec { gamma, delta, contains_u_square })
            .ok_or_else(|| Error::Existence(format!("no base code for shape {shape}, sigma={sigma}, tau={tau}")))
    };
    match shape {
        Shape::One | Shape::Three => spec(sigma.checked_sub(tau), tau, false),
        Shape::OneStar | Shape::Two => spec(sigma.checked_sub(tau), tau, true),
        Shape::Four => spec(sigma.checked_sub(1), 1, false),
        Shape::FourStar | Shape::Five => spec(sigma.checked_sub(2), 2, true),
    }
}

/// Builds `A(C)` for a shape from scratch.
pub fn build_a(shape: Shape, sigma: usize, tau: usize) -> Result<CodeGroup> {
    let base = base_hadamard(base_spec_for(shape, sigma, tau)?)?;
    lift_to_a(&base, shape)
}

fn q8_offset(space: AmbientSpace) -> usize {
    space.k1 + space.k2
}

// Shape 5: pairs (2j, 2j+1) where the second r has order at most two.
fn shape5_blocks(a: &CodeGroup) -> Result<(Vec<usize>, Vec<usize>)> {
    let r2 = a
        .generators()
        .get(1)
        .ok_or_else(|| Error::Infeasible("shape 5 needs two r generators".into()))?;
    let off = q8_offset(a.space());
    let (mut quiet, mut loud) = (Vec::new(), Vec::new());
    for c in (0..a.space().k3).step_by(2) {
        if r2.has_order_four_at(off + c) {
            loud.push(off + c);
        } else {
            quiet.push(off + c);
        }
    }
    Ok((quiet, loud))
}

/// Fills the s generators from the plan's shape and dial.
pub fn build_s_generators(a: &CodeGroup, plan: &ConstructionPlan) -> Result<Vec<GroupElement>> {
    let space = a.space();
    let off = q8_offset(space);
    if let Some(&bad) = plan.dial.iter().find(|&&c| c < off || c >= space.len()) {
        return Err(Error::Infeasible(format!("dial index {bad} is not a Q8 component")));
    }
    let dialed = |c: usize| plan.dial.contains(&c);
    let b_like = |c: usize| if dialed(c) { Q8Element::AB } else { Q8Element::B };
    match plan.shape {
        Shape::One | Shape::OneStar => Ok(Vec::new()),
        Shape::Two | Shape::Three => {
            let z4 = vec![1; space.k2];
            let q8: Vec<Q8Element> = (off..space.len()).map(b_like).collect();
            Ok(vec![GroupElement::from_parts(space, &[], &z4, &q8)?])
        }
        Shape::Five => {
            let (quiet, _) = shape5_blocks(a)?;
            let mut w1 = Vec::with_capacity(space.k3);
            let mut w2 = Vec::with_capacity(space.k3);
            for c in (off..space.len()).step_by(2) {
                let pair = [b_like(c), b_like(c + 1)];
                let twisted = [Q8Element::ONE, Q8Element::A2];
                if quiet.contains(&c) {
                    w1.extend(pair);
                    w2.extend(twisted);
                } else {
                    w1.extend(twisted);
                    w2.extend(pair);
                }
            }
            Ok(vec![
                GroupElement::from_parts(space, &[], &[], &w1)?,
                GroupElement::from_parts(space, &[], &[], &w2)?,
            ])
        }
        Shape::Four | Shape::FourStar => Err(Error::Infeasible(format!(
            "no s-generator recipe for shape {}",
            plan.shape
        ))),
    }
}

// Q8 component classes keyed by which of `rs` have order four there.
fn order_four_classes(a: &CodeGroup, rs: &[GroupElement]) -> Vec<(u32, Vec<usize>)> {
    let space = a.space();
    let mut classes: Vec<(u32, Vec<usize>)> = Vec::new();
    for c in q8_offset(space)..space.len() {
        let key = rs
            .iter()
            .enumerate()
            .filter(|(_, r)| r.has_order_four_at(c))
            .fold(0u32, |acc, (i, _)| acc | 1 << i);
        match classes.iter_mut().find(|(k, _)| *k == key) {
            Some((_, members)) => members.push(c),
            None => classes.push((key, vec![c])),
        }
    }
    classes.sort();
    classes
}

/// Computes the dial for a planned case on a lifted `A(C)`.
pub fn default_dial(a: &CodeGroup, shape: Shape, tau: usize, case: &str, level: usize) -> Result<Vec<usize>> {
    let space = a.space();
    let q8: Vec<usize> = (q8_offset(space)..space.len()).collect();
    let r = &a.generators()[..tau.min(a.generators().len())];
    let infeasible = |why: &str| Error::Infeasible(format!("shape {shape} case {case}: {why}"));
    let dial = match (shape, case) {
        (_, "1a" | "1b" | "1c" | "2a" | "3a" | "4a" | "5a") => Vec::new(),
        (Shape::Two | Shape::Three, "2b") => q8.get(1..).ok_or_else(|| infeasible("no Q8 components"))?.to_vec(),
        (Shape::Two, "3c") => {
            // One ab where r2 has order four and one where it does not.
            let r2 = r.get(1).ok_or_else(|| infeasible("needs r2"))?;
            let loud = q8.iter().find(|&&c| r2.has_order_four_at(c));
            let quiet = q8.iter().find(|&&c| !r2.has_order_four_at(c));
            match (loud, quiet) {
                (Some(&l), Some(&q)) => vec![l.min(q), l.max(q)],
                _ => return Err(infeasible("r2 does not split the components")),
            }
        }
        (Shape::Two, "3b") => {
            let r2 = r.get(1).ok_or_else(|| infeasible("needs r2"))?;
            let quiet: Vec<usize> = q8.iter().copied().filter(|&c| !r2.has_order_four_at(c)).collect();
            quiet.get(1..).ok_or_else(|| infeasible("r2 has order four everywhere"))?.to_vec()
        }
        (Shape::Two, "4b") => {
            let squares: Vec<GroupElement> = r.iter().map(GroupElement::square).collect();
            let span = CodeGroup::closure(space, &squares)?;
            let x = a
                .elements()
                .iter()
                .find(|x| x.order() <= 2 && !span.contains(x))
                .ok_or_else(|| infeasible("every torsion element is a square"))?;
            x.m_set()?.into_iter().collect()
        }
        (Shape::Two, "4c") => {
            let classes = order_four_classes(a, &r[1..]);
            if level == 0 {
                classes
                    .iter()
                    .find(|(key, _)| *key == 0)
                    .map(|(_, members)| members.clone())
                    .ok_or_else(|| infeasible("no component where r2..r_tau all have order <= 2"))?
            } else {
                // Classes where none of the first tau-level of r2..r_tau has order four.
                let mask = (1u32 << (tau - level)) - 1;
                classes
                    .iter()
                    .filter(|(key, _)| key & mask == 0)
                    .map(|(_, members)| members[0])
                    .collect()
            }
        }
        (Shape::Three, "4c") => {
            let classes = order_four_classes(a, r);
            let mask = (1u32 << (tau - level)) - 1;
            classes
                .iter()
                .filter(|(key, _)| key & mask == 0)
                .map(|(_, members)| members[0])
                .collect()
        }
        (Shape::Five, "5b" | "5c") => {
            let (quiet, loud) = shape5_blocks(a)?;
            let mut dial = vec![*quiet.first().ok_or_else(|| infeasible("no quiet pair"))?];
            if case == "5c" {
                dial.push(*loud.first().ok_or_else(|| infeasible("no loud pair"))?);
            }
            dial
        }
        _ => return Err(infeasible("no recipe")),
    };
    Ok(dial)
}

/// One reachable `(k, r)` for a shape with the case that realizes it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlannedCase {
    pub case: &'static str,
    pub k: usize,
    pub r: usize,
    /// Rank step of the dial for case 4c.
    pub level: usize,
}

/// Every case reachable for the shape at `(m, tau)`, in rank order.
pub fn planned_cases(m: usize, shape: Shape, tau: usize) -> Result<Vec<PlannedCase>> {
    let (sigma, _) = table3_row(shape, m, tau).map_err(Error::Existence)?;
    let top = m + 1;
    let pc = |case, k, r| PlannedCase { case, k, r, level: 0 };
    let mut out = Vec::new();
    match shape {
        Shape::One => out.push(if tau <= 1 {
            pc("1a", top, top)
        } else {
            pc("1c", sigma, top + binomial2(tau))
        }),
        Shape::OneStar => out.push(if tau <= 2 {
            pc("1a", top, top)
        } else {
            pc("1b", sigma + 1, sigma + tau + binomial2(tau - 1))
        }),
        Shape::Two | Shape::Four | Shape::FourStar | Shape::Three if tau == 1 => {
            out.push(pc("2a", sigma + 2, sigma + 2));
            // Every Hadamard code of length 8 is linear.
            if m > 3 {
                out.push(pc("2b", sigma, sigma + 3));
            }
        }
        Shape::Two | Shape::FourStar if tau == 2 => {
            out.push(pc("3a", sigma + 3, sigma + 3));
            out.push(pc("3b", sigma + 1, sigma + 4));
            out.push(pc("3c", sigma, sigma + 5));
        }
        Shape::Two => {
            let tau_bar = tau - 1;
            out.push(pc("4a", sigma + 2, sigma + tau + 1 + binomial2(tau_bar)));
            if sigma > tau {
                out.push(pc("4b", sigma + 1, sigma + tau + 1 + binomial2(tau)));
            }
            for level in 0..=tau {
                out.push(PlannedCase {
                    case: "4c",
                    k: sigma,
                    r: sigma + tau + 1 + binomial2(tau - 1) + level,
                    level,
                });
            }
        }
        Shape::Three => {
            out.push(pc("4a", sigma + 1, sigma + tau + 1 + binomial2(tau)));
            for level in 1..=tau {
                out.push(PlannedCase {
                    case: "4c",
                    k: sigma,
                    r: sigma + tau + 1 + binomial2(tau) + level,
                    level,
                });
            }
        }
        Shape::Five => {
            out.push(pc("5a", sigma + 4, sigma + 4));
            out.push(pc("5b", sigma + 2, sigma + 5));
            out.push(pc("5c", sigma, sigma + 6));
        }
        Shape::Four | Shape::FourStar => {}
    }
    Ok(out)
}

/// The `(k, r)` pairs reachable for one shape and parameter set.
pub fn allowable_pairs(m: usize, shape: Shape, sigma: usize, tau: usize) -> Result<BTreeSet<(usize, usize)>> {
    let (expected_sigma, _) = table3_row(shape, m, tau).map_err(Error::Existence)?;
    if expected_sigma != sigma {
        return Err(Error::Existence(format!(
            "shape {shape} at m={m}, tau={tau} needs sigma={expected_sigma}"
        )));
    }
    Ok(planned_cases(m, shape, tau)?
        .into_iter()
        .map(|c| (c.k, c.r))
        .collect())
}

/// `(shape, sigma, tau)` for every shape and `tau` meeting the existence
/// conditions at length `2^m`.
pub fn existing_parameters(m: usize) -> Vec<(Shape, usize, usize)> {
    Shape::ALL
        .into_iter()
        .flat_map(|shape| {
            (0..=m + 1).filter_map(move |tau| table3_row(shape, m, tau).ok().map(|(sigma, _)| (shape, sigma, tau)))
        })
        .collect()
}

/// Union of the allowable pairs over all shapes at length `2^m`.
pub fn all_allowable_pairs(m: usize) -> BTreeSet<(usize, usize)> {
    existing_parameters(m)
        .into_iter()
        .filter_map(|(shape, sigma, tau)| allowable_pairs(m, shape, sigma, tau).ok())
        .flatten()
        .collect()
}

/// A constructed code with its plan and verified measurement.
#[derive(Clone, Debug)]
pub struct Construction {
    pub group: CodeGroup,
    pub plan: ConstructionPlan,
    pub measurement: Measurement,
}

fn realize(plan: &ConstructionPlan) -> Result<(CodeGroup, Measurement)> {
    let a = build_a(plan.shape, plan.sigma, plan.tau)?;
    let s = build_s_generators(&a, plan)?;
    let generators: Vec<GroupElement> = a.generators().iter().chain(&s).cloned().collect();
    let group = CodeGroup::closure(a.space(), &generators)?;
    check_hadamard(&group)?;
    let measurement = measure(&group)?;
    Ok((group, measurement))
}

/// Builds the code described by a plan (dial included) and checks that it
/// reaches the plan's target.
pub fn build_from_plan(plan: &ConstructionPlan) -> Result<Construction> {
    let (group, measurement) = realize(plan)?;
    if (measurement.k, measurement.r) != (plan.target_k, plan.target_r) {
        return Err(Error::Infeasible(format!(
            "plan for k={} r={} produced k={} r={}",
            plan.target_k, plan.target_r, measurement.k, measurement.r
        )));
    }
    Ok(Construction {
        group,
        plan: plan.clone(),
        measurement,
    })
}

/// Builds a code from an explicit shape and dial; the plan's target and case
/// are filled in from the measurement.
pub fn build_with_dial(m: usize, shape: Shape, tau: usize, dial: Vec<usize>) -> Result<Construction> {
    let (sigma, _) = table3_row(shape, m, tau).map_err(Error::Existence)?;
    let mut plan = ConstructionPlan {
        m,
        shape,
        sigma,
        tau,
        target_k: 0,
        target_r: 0,
        case: String::new(),
        dial,
    };
    let (group, measurement) = realize(&plan)?;
    plan.target_k = measurement.k;
    plan.target_r = measurement.r;
    plan.case = measurement.case.to_string();
    Ok(Construction {
        group,
        plan,
        measurement,
    })
}

/// Plans a code for one shape and case on a fresh `A(C)`.
pub fn plan_case(m: usize, shape: Shape, tau: usize, case: &PlannedCase) -> Result<ConstructionPlan> {
    let (sigma, _) = table3_row(shape, m, tau).map_err(Error::Existence)?;
    let a = build_a(shape, sigma, tau)?;
    Ok(ConstructionPlan {
        m,
        shape,
        sigma,
        tau,
        target_k: case.k,
        target_r: case.r,
        case: case.case.to_string(),
        dial: default_dial(&a, shape, tau, case.case, case.level)?,
    })
}

/// Shapes tried by [`construct_for`], in order.
pub const CONSTRUCTIBLE_SHAPES: [Shape; 5] = [Shape::One, Shape::OneStar, Shape::Two, Shape::Three, Shape::Five];

/// Candidate `(shape, tau, case)` plans for `(k, r)` in the order
/// [`construct_for`] tries them: the `4a`/`4b`/`4c` cases first, then by
/// shape order and `tau`.
pub fn candidate_plans(m: usize, k: usize, r: usize) -> Vec<(Shape, usize, PlannedCase)> {
    let mut out = Vec::new();
    for shape in CONSTRUCTIBLE_SHAPES {
        for tau in 0..=m + 1 {
            if let Ok(cases) = planned_cases(m, shape, tau) {
                out.extend(
                    cases
                        .into_iter()
                        .filter(|c| (c.k, c.r) == (k, r))
                        .map(|c| (shape, tau, c)),
                );
            }
        }
    }
    // Stable sort keeps shape and tau order within each group.
    out.sort_by_key(|(_, _, c)| !c.case.starts_with('4'));
    out
}

/// Constructs a Hadamard code of length `2^m` with kernel dimension `k` and
/// rank `r`.
pub fn construct_for(m: usize, k: usize, r: usize) -> Result<Construction> {
    let candidates = candidate_plans(m, k, r);
    if candidates.is_empty() {
        return Err(Error::NotAllowable {
            m,
            k,
            r,
            nearest: nearest_pairs(m, k, r, 3),
        });
    }
    let mut failures = Vec::new();
    for (shape, tau, case) in candidates {
        match plan_case(m, shape, tau, &case).and_then(|plan| build_from_plan(&plan)) {
            Ok(built) => return Ok(built),
            Err(e) => failures.push(format!("shape {shape} tau={tau} case {}: {e}", case.case)),
        }
    }
    Err(Error::Infeasible(failures.join("; ")))
}

/// The `count` allowable pairs closest to `(k, r)` in L1 distance.
pub fn nearest_pairs(m: usize, k: usize, r: usize, count: usize) -> Vec<(usize, usize)> {
    let mut pairs: Vec<(usize, usize)> = all_allowable_pairs(m).into_iter().collect();
    pairs.sort_by_key(|&(pk, pr)| (pk.abs_diff(k) + pr.abs_diff(r), pk, pr));
    pairs.truncate(count);
    pairs
}
