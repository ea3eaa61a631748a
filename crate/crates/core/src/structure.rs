//! Normalized and standardized generator sets, shape classification, the
//! parameter profile, and the rank/kernel case analysis.
//!
//! Squares, commutators and swappers of elements depend only on their cosets
//! modulo the torsion subgroup `T`, which is central. Every search below runs
//! over those cosets, encoded as bit vectors over a fixed basis of `C/T`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::algebra::{AmbientSpace, GroupElement};
use crate::binary::{BinaryWord, Gf2Basis};
use crate::code::{check_hadamard, is_hadamard, BinaryCode, CodeGroup, RankKernelReport};
use crate::error::{Error, Result};

/// The seven shape labels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Shape {
    One,
    OneStar,
    Two,
    Three,
    Four,
    FourStar,
    Five,
}

impl Shape {
    pub const ALL: [Shape; 7] = [
        Shape::One,
        Shape::OneStar,
        Shape::Two,
        Shape::Three,
        Shape::Four,
        Shape::FourStar,
        Shape::Five,
    ];

    /// `log2 |C/A(C)|` for codes of this shape.
    pub fn upsilon(self) -> usize {
        match self {
            Shape::One | Shape::OneStar => 0,
            Shape::Five => 2,
            _ => 1,
        }
    }

    /// Whether `u` is the square of an element of order four.
    pub fn u_is_square(self) -> bool {
        matches!(self, Shape::OneStar | Shape::Two | Shape::FourStar | Shape::Five)
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Shape::One => "1",
            Shape::OneStar => "1*",
            Shape::Two => "2",
            Shape::Three => "3",
            Shape::Four => "4",
            Shape::FourStar => "4*",
            Shape::Five => "5",
        })
    }
}

impl FromStr for Shape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Shape::ALL
            .into_iter()
            .find(|shape| shape.to_string() == s.trim())
            .ok_or_else(|| Error::Parse(format!("unknown shape `{s}`")))
    }
}

/// Logarithmic sizes of the structural quotients.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CodeProfile {
    pub m: usize,
    pub n: usize,
    pub sigma: usize,
    pub tau: usize,
    pub tau_bar: usize,
    pub upsilon: usize,
    pub delta: usize,
    pub rho: usize,
}

/// `x` generators span `T(C)`, `y` extend to `Z(C)`, `z` extend to `C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizedGenerators {
    pub x: Vec<GroupElement>,
    pub y: Vec<GroupElement>,
    pub z: Vec<GroupElement>,
}

/// Generators `x` of `T(C)`, `r` completing `A(C)`, and `s` completing `C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StandardGenerators {
    pub x: Vec<GroupElement>,
    pub r: Vec<GroupElement>,
    pub s: Vec<GroupElement>,
}

impl StandardGenerators {
    pub fn all(&self) -> Vec<GroupElement> {
        self.x.iter().chain(&self.r).chain(&self.s).cloned().collect()
    }
}

#[derive(Clone, Debug)]
pub struct StructureReport {
    pub torsion: CodeGroup,
    pub center: CodeGroup,
    pub abelian_max: CodeGroup,
    pub r_part: CodeGroup,
    pub profile: CodeProfile,
    pub shape: Shape,
    pub std_gens: StandardGenerators,
}

impl StructureReport {
    /// One line of `key=value` pairs.
    pub fn summary_line(&self) -> String {
        let p = &self.profile;
        format!(
            "shape={} sigma={} tau={} tau_bar={} upsilon={} delta={} rho={} m={} n={}",
            self.shape, p.sigma, p.tau, p.tau_bar, p.upsilon, p.delta, p.rho, p.m, p.n
        )
    }
}

// The quotient `C/T` with precomputed squares and commutators.
struct Quotient<'a> {
    group: &'a CodeGroup,
    dim: usize,
    delta: usize,
    // coordinate -> first element of the coset in closure order
    rep: Vec<usize>,
    // coordinates sorted by first appearance
    order: Vec<u32>,
    // coordinate -> element index of the square
    sq: Vec<usize>,
    // coordinate pair -> element index of the commutator
    comm: Vec<usize>,
    torsion: Vec<usize>,
    u: usize,
    e: usize,
    // greedy basis of C over T: central vectors first
    basis: Vec<usize>,
}

impl<'a> Quotient<'a> {
    fn new(group: &'a CodeGroup) -> Result<Self> {
        let elements = group.elements();
        let lookup = |x: &GroupElement| {
            group
                .index_of(x)
                .ok_or_else(|| Error::Normalization("product left the group".into()))
        };
        let e = 0;
        let u = group
            .index_of(&group.space().u())
            .ok_or_else(|| Error::Normalization("u is not in the group".into()))?;
        let torsion: Vec<usize> = (0..elements.len())
            .filter(|&i| elements[i].order() <= 2)
            .collect();
        let central: Vec<bool> = elements
            .iter()
            .map(|c| {
                group
                    .generators()
                    .iter()
                    .all(|g| c.commutator_with(g).is_identity())
            })
            .collect();

        let mut coord = vec![u32::MAX; elements.len()];
        let mut members = torsion.clone();
        for &t in &torsion {
            coord[t] = 0;
        }
        let mut basis = Vec::new();
        let mut delta = 0;
        for pass_central in [true, false] {
            for i in 0..elements.len() {
                if coord[i] != u32::MAX || (pass_central && !central[i]) {
                    continue;
                }
                let bit = 1u32 << basis.len();
                let snapshot = members.clone();
                for h in snapshot {
                    let p = lookup(&elements[h].product(&elements[i]))?;
                    if coord[p] != u32::MAX {
                        return Err(Error::Normalization(
                            "C/T is not elementary abelian".into(),
                        ));
                    }
                    coord[p] = coord[h] | bit;
                    members.push(p);
                }
                basis.push(i);
                if pass_central {
                    delta += 1;
                }
            }
        }
        let dim = basis.len();
        if dim > 16 || torsion.len() << dim != elements.len() {
            return Err(Error::Normalization(format!(
                "|C| = {} is not |T| * 2^{dim}",
                elements.len()
            )));
        }
        let size = 1usize << dim;
        let mut rep = vec![usize::MAX; size];
        let mut order = Vec::with_capacity(size);
        for (i, &c) in coord.iter().enumerate() {
            if rep[c as usize] == usize::MAX {
                rep[c as usize] = i;
                order.push(c);
            }
        }
        let sq = rep
            .iter()
            .map(|&i| lookup(&elements[i].square()))
            .collect::<Result<Vec<_>>>()?;
        let mut comm = vec![0; size * size];
        for v in 0..size {
            for w in 0..size {
                comm[v * size + w] = lookup(&elements[rep[v]].commutator_with(&elements[rep[w]]))?;
            }
        }
        Ok(Self {
            group,
            dim,
            delta,
            rep,
            order,
            sq,
            comm,
            torsion,
            u,
            e,
            basis,
        })
    }

    fn size(&self) -> usize {
        1 << self.dim
    }

    fn el(&self, v: u32) -> &GroupElement {
        &self.group.elements()[self.rep[v as usize]]
    }

    fn comm(&self, v: u32, w: u32) -> usize {
        self.comm[v as usize * self.size() + w as usize]
    }

    fn sq(&self, v: u32) -> usize {
        self.sq[v as usize]
    }

    fn is_abelian(&self) -> bool {
        self.comm.iter().all(|&c| c == self.e)
    }

    fn u_is_square(&self) -> bool {
        self.sq.contains(&self.u)
    }

    fn is_central(&self, v: u32) -> bool {
        (0..self.size() as u32).all(|w| self.comm(v, w) == self.e)
    }

    // Whether u lies in the span of the listed torsion elements.
    fn u_in_span(&self, torsion_elements: &[usize]) -> bool {
        let mut basis = Gf2Basis::new();
        for &t in torsion_elements {
            basis.insert(&self.group.elements()[t].gray());
        }
        basis.contains(&self.group.elements()[self.u].gray())
    }

    fn x_generators(&self) -> Vec<GroupElement> {
        let mut basis = Gf2Basis::new();
        self.torsion
            .iter()
            .map(|&t| &self.group.elements()[t])
            .filter(|x| basis.insert(&x.gray()))
            .cloned()
            .collect()
    }

    // Extends `initial` greedily inside the subspace `inside`; when `guard_u`
    // holds, `u` is kept out of the span of the squares after the first.
    fn extend_in(&self, initial: Vec<u32>, inside: &[bool], guard_u: bool) -> Vec<u32> {
        let mut chosen = initial;
        let mut span = span_of(&chosen, self.size());
        for &c in &self.order {
            if !inside[c as usize] || span[c as usize] {
                continue;
            }
            if guard_u {
                let squares: Vec<usize> = chosen
                    .iter()
                    .skip(1)
                    .chain(std::iter::once(&c))
                    .map(|&v| self.sq(v))
                    .collect();
                if self.u_in_span(&squares) {
                    continue;
                }
            }
            chosen.push(c);
            span = span_of(&chosen, self.size());
        }
        chosen
    }
}

fn span_of(vectors: &[u32], size: usize) -> Vec<bool> {
    let mut span = vec![false; size];
    span[0] = true;
    for &v in vectors {
        for w in 0..size {
            if span[w] {
                span[w ^ v as usize] = true;
            }
        }
    }
    span
}

fn span_dim(vectors: &[u32], size: usize) -> usize {
    span_of(vectors, size).iter().filter(|&&b| b).count().trailing_zeros() as usize
}

/// `T(C)`: the elements of order at most two.
pub fn torsion(group: &CodeGroup) -> Result<CodeGroup> {
    subgroup_where(group, |x| x.order() <= 2)
}

/// `Z(C)`: the elements commuting with every generator.
pub fn center(group: &CodeGroup) -> Result<CodeGroup> {
    subgroup_where(group, |x| {
        group
            .generators()
            .iter()
            .all(|g| x.commutator_with(g).is_identity())
    })
}

// Greedy generators of the subgroup formed by the elements satisfying `keep`.
fn subgroup_where(group: &CodeGroup, keep: impl Fn(&GroupElement) -> bool) -> Result<CodeGroup> {
    let mut generators: Vec<GroupElement> = Vec::new();
    let mut current = CodeGroup::closure(group.space(), &[])?;
    for x in group.elements().iter().filter(|x| keep(x)) {
        if !current.contains(x) {
            generators.push(x.clone());
            current = CodeGroup::closure(group.space(), &generators)?;
        }
    }
    Ok(current)
}

/// Greedy normalized generators `x; y; z` scanned in closure order.
pub fn normalized_generators(group: &CodeGroup) -> Result<NormalizedGenerators> {
    check_hadamard(group)?;
    let q = Quotient::new(group)?;
    let els = group.elements();
    Ok(NormalizedGenerators {
        x: q.x_generators(),
        y: q.basis[..q.delta].iter().map(|&i| els[i].clone()).collect(),
        z: q.basis[q.delta..].iter().map(|&i| els[i].clone()).collect(),
    })
}

/// Shape label of a Hadamard group.
pub fn classify_shape(group: &CodeGroup) -> Result<Shape> {
    check_hadamard(group)?;
    classify(&Quotient::new(group)?)
}

fn classify(q: &Quotient) -> Result<Shape> {
    if q.is_abelian() {
        return Ok(if q.u_is_square() { Shape::OneStar } else { Shape::One });
    }
    match q.delta {
        1 => return Ok(Shape::FourStar),
        0 => {}
        d => {
            return Err(Error::Unclassifiable(format!(
                "non-abelian with delta = {d}"
            )))
        }
    }
    let size = q.size() as u32;
    let pairs = || (1..size).flat_map(move |a| (1..size).map(move |b| (a, b)));
    let u_pair = pairs().any(|(a, b)| q.sq(a) == q.u && q.sq(b) == q.u && q.comm(a, b) == q.u);
    if u_pair {
        let other_pair = pairs().any(|(a, b)| {
            let w = q.sq(a);
            w != q.e && w != q.u && q.sq(b) == w && q.comm(a, b) == w
        });
        Ok(if other_pair { Shape::Five } else { Shape::Two })
    } else if q.u_is_square() {
        Ok(Shape::Three)
    } else {
        Ok(Shape::Four)
    }
}

// Standardized coordinates: r's and s's as cosets.
struct Standard {
    r: Vec<u32>,
    s: Vec<u32>,
}

fn subspace_mask(vectors: &[u32], size: usize) -> Vec<bool> {
    span_of(vectors, size)
}

fn is_abelian_subspace(q: &Quotient, inside: &[bool]) -> bool {
    let members: Vec<u32> = (0..q.size() as u32).filter(|&v| inside[v as usize]).collect();
    members
        .iter()
        .all(|&a| members.iter().all(|&b| q.comm(a, b) == q.e))
}

fn standard_candidates(q: &Quotient, shape: Shape) -> Vec<Standard> {
    let size = q.size();
    let all = vec![true; size];
    let order = &q.order;
    let nonzero = || order.iter().copied().filter(|&v| v != 0);
    let mut out = Vec::new();
    match shape {
        Shape::One => out.push(Standard {
            r: q.extend_in(Vec::new(), &all, false),
            s: Vec::new(),
        }),
        Shape::OneStar => {
            for r1 in nonzero().filter(|&v| q.sq(v) == q.u) {
                out.push(Standard {
                    r: q.extend_in(vec![r1], &all, true),
                    s: Vec::new(),
                });
            }
        }
        Shape::Two => {
            for z1 in nonzero().filter(|&v| q.sq(v) == q.u) {
                for z2 in nonzero().filter(|&v| q.sq(v) == q.u && q.comm(z1, v) == q.u) {
                    let r1 = z1 ^ z2;
                    let inside: Vec<bool> = (0..size as u32).map(|v| q.comm(v, r1) == q.e).collect();
                    if inside.iter().filter(|&&b| b).count() * 2 != size
                        || !is_abelian_subspace(q, &inside)
                    {
                        continue;
                    }
                    out.push(Standard {
                        r: q.extend_in(vec![r1], &inside, true),
                        s: vec![z1],
                    });
                }
            }
        }
        Shape::Three => {
            for s1 in nonzero().filter(|&v| q.sq(v) == q.u) {
                for functional in 1..size as u32 {
                    let inside: Vec<bool> = (0..size as u32)
                        .map(|v| (v & functional).count_ones() % 2 == 0)
                        .collect();
                    if inside[s1 as usize]
                        || (0..size).any(|v| inside[v] && q.sq[v] == q.u)
                        || !is_abelian_subspace(q, &inside)
                    {
                        continue;
                    }
                    out.push(Standard {
                        r: q.extend_in(Vec::new(), &inside, false),
                        s: vec![s1],
                    });
                }
            }
        }
        Shape::Four | Shape::FourStar => {
            let y1 = if shape == Shape::FourStar {
                nonzero().find(|&v| q.is_central(v))
            } else {
                None
            };
            for z1 in nonzero() {
                let w = q.sq(z1);
                if w == q.e || w == q.u {
                    continue;
                }
                for z2 in nonzero().filter(|&v| q.sq(v) == w && q.comm(z1, v) == w) {
                    match y1 {
                        Some(y1) => out.push(Standard {
                            r: vec![y1 ^ z1, z1],
                            s: vec![z2],
                        }),
                        None => out.push(Standard {
                            r: vec![z1],
                            s: vec![z2],
                        }),
                    }
                }
            }
        }
        Shape::Five => {
            let u_sq: Vec<u32> = nonzero().filter(|&v| q.sq(v) == q.u).collect();
            let other: Vec<u32> = nonzero()
                .filter(|&v| q.sq(v) != q.u && q.sq(v) != q.e)
                .collect();
            for &z1 in &u_sq {
                for &z2 in u_sq.iter().filter(|&&v| q.comm(z1, v) == q.u) {
                    for &z3 in &other {
                        let w = q.sq(z3);
                        for &z4 in other.iter().filter(|&&v| q.sq(v) == w && q.comm(z3, v) == w) {
                            let mixed_ok = [z1, z2].iter().all(|&i| {
                                [z3, z4]
                                    .iter()
                                    .all(|&j| q.comm(i, j) == q.e || q.comm(i, j) == q.sq(j))
                            });
                            if !mixed_ok || span_dim(&[z1, z2, z3, z4], size) != 4 {
                                continue;
                            }
                            let f = |z: u32| {
                                if q.comm(z, z3) == q.e {
                                    z3
                                } else if q.comm(z, z4) == q.e {
                                    z4
                                } else {
                                    z3 ^ z4
                                }
                            };
                            out.push(Standard {
                                r: vec![z1, f(z1)],
                                s: vec![z2, f(z2)],
                            });
                        }
                    }
                }
            }
        }
    }
    out
}

// Checks the structural invariants on a candidate; returns the failed clause.
fn validate(q: &Quotient, st: &Standard) -> std::result::Result<(), String> {
    let size = q.size();
    let gens: Vec<u32> = st.r.iter().chain(&st.s).copied().collect();
    if gens.len() != q.dim || span_dim(&gens, size) != q.dim {
        return Err("generators do not span C/T".into());
    }
    if st.s.len() > 2 {
        return Err("more than two s generators".into());
    }
    for &a in &st.r {
        for &b in &st.r {
            if q.comm(a, b) != q.e {
                return Err("r generators do not commute".into());
            }
        }
    }
    let squares: Vec<usize> = st.r.iter().map(|&v| q.sq(v)).collect();
    if q.u_in_span(&squares) && (squares[0] != q.u || q.u_in_span(&squares[1..])) {
        return Err("u is a square in A but not isolated as r1^2".into());
    }
    let a_mask = subspace_mask(&st.r, size);
    if (0..size as u32).any(|v| !a_mask[v as usize] && st.r.iter().all(|&r| q.comm(v, r) == q.e)) {
        return Err("A is not a maximal abelian subgroup".into());
    }
    if st.s.len() == 2 {
        let (s1, s2) = (st.s[0], st.s[1]);
        if q.sq(s1) != q.u || q.sq(s2) == q.u || q.comm(s1, s2) != q.e {
            return Err("s generators violate s1^2 = u != s2^2, [s1, s2] = e".into());
        }
    }
    if let (Some(&r1), Some(&s1)) = (st.r.first(), st.s.first()) {
        if q.sq(r1) == q.u && q.sq(s1) == q.u && q.comm(r1, s1) != q.u {
            return Err("r1^2 = s1^2 = u but [r1, s1] != u".into());
        }
    }
    Ok(())
}

/// Computes the standardized generator set and the full report.
pub fn standardize(group: &CodeGroup) -> Result<StructureReport> {
    check_hadamard(group)?;
    let q = Quotient::new(group)?;
    let shape = classify(&q)?;
    let mut last_failure = String::from("no candidate generators");
    let mut chosen = None;
    for candidate in standard_candidates(&q, shape) {
        match validate(&q, &candidate) {
            Ok(()) => {
                chosen = Some(candidate);
                break;
            }
            Err(why) => last_failure = why,
        }
    }
    let st = chosen.ok_or_else(|| Error::Standardization(format!("shape {shape}: {last_failure}")))?;
    build_report(&q, shape, &st)
}

fn build_report(q: &Quotient, shape: Shape, st: &Standard) -> Result<StructureReport> {
    let group = q.group;
    let space = group.space();
    let x = q.x_generators();
    let r: Vec<GroupElement> = st.r.iter().map(|&v| q.el(v).clone()).collect();
    let s: Vec<GroupElement> = st.s.iter().map(|&v| q.el(v).clone()).collect();
    let r1_squares_to_u = st.r.first().is_some_and(|&v| q.sq(v) == q.u);
    let sigma = x.len();
    let tau = r.len();
    let upsilon = s.len();
    let n = space.n();
    let profile = CodeProfile {
        m: n.trailing_zeros() as usize,
        n,
        sigma,
        tau,
        tau_bar: if r1_squares_to_u { tau - 1 } else { tau },
        upsilon,
        delta: q.delta,
        rho: q.dim - q.delta,
    };
    if sigma + tau + upsilon != group.log_order() {
        return Err(Error::Standardization(
            "sigma + tau + upsilon differs from log2 |C|".into(),
        ));
    }
    let els = group.elements();
    let center_gens: Vec<GroupElement> = x
        .iter()
        .cloned()
        .chain(q.basis[..q.delta].iter().map(|&i| els[i].clone()))
        .collect();
    let a_gens: Vec<GroupElement> = x.iter().chain(&r).cloned().collect();
    let r_part_gens: Vec<GroupElement> = if r1_squares_to_u {
        x.iter().chain(&r[1..]).cloned().collect()
    } else {
        a_gens.clone()
    };
    let abelian_max = CodeGroup::closure(space, &a_gens)?;
    for a in &a_gens {
        for c in group.generators() {
            let conj = c.inverse().product(a).product(c);
            if !abelian_max.contains(&conj) {
                return Err(Error::Standardization("A is not normal".into()));
            }
        }
    }
    Ok(StructureReport {
        torsion: CodeGroup::closure(space, &x)?,
        center: CodeGroup::closure(space, &center_gens)?,
        abelian_max,
        r_part: CodeGroup::closure(space, &r_part_gens)?,
        profile,
        shape,
        std_gens: StandardGenerators { x, r, s },
    })
}

/// Expected entries of the shape's row of the parameter table, with the
/// existence condition; `Err` names the first failed clause.
pub fn table3_row(shape: Shape, m: usize, tau: usize) -> std::result::Result<(usize, AmbientSpace), String> {
    let need = |ok: bool, clause: &str| if ok { Ok(()) } else { Err(clause.to_string()) };
    let p = |e: usize| 1usize << e;
    match shape {
        Shape::OneStar => {
            need(tau >= 1 && tau <= m.div_ceil(2), "shape 1*: 1 <= tau <= floor((m+1)/2)")?;
            let sigma = m + 1 - tau;
            Ok((sigma, AmbientSpace::new(0, p(sigma + tau - 2), 0)))
        }
        Shape::One => {
            need(tau <= m / 2, "shape 1: tau <= floor(m/2)")?;
            let sigma = m + 1 - tau;
            let k2 = if tau == 0 { 0 } else { ((p(tau) - 1) << sigma) >> 2 };
            Ok((sigma, AmbientSpace::new(p(sigma - 1), k2, 0)))
        }
        Shape::Two => {
            need(tau >= 1 && tau <= m / 2, "shape 2: 1 <= tau <= floor(m/2)")?;
            let sigma = m - tau;
            Ok((sigma, AmbientSpace::new(0, 0, p(sigma + tau - 2))))
        }
        Shape::Three => {
            need(tau >= 1 && m >= 1 && tau <= (m - 1) / 2, "shape 3: 1 <= tau <= floor((m-1)/2)")?;
            let sigma = m - tau;
            Ok((sigma, AmbientSpace::new(0, p(sigma - 1), ((p(tau) - 1) << sigma) >> 2)))
        }
        Shape::Four => {
            need(m % 2 == 0, "shape 4: m even")?;
            need(tau == 1, "shape 4: tau = 1")?;
            need(m >= 3, "shape 4: m >= 3")?;
            let sigma = m - 1;
            Ok((sigma, AmbientSpace::new(p(sigma), 0, p(sigma - 2))))
        }
        Shape::FourStar => {
            need(m % 2 == 0, "shape 4*: m even")?;
            need(tau == 2, "shape 4*: tau = 2")?;
            need(m >= 3, "shape 4*: m >= 3")?;
            let sigma = m - 2;
            Ok((sigma, AmbientSpace::new(0, p(sigma), p(sigma - 1))))
        }
        Shape::Five => {
            need(tau == 2, "shape 5: tau = 2")?;
            need(m >= 5, "shape 5: sigma = m - 3 >= 2")?;
            let sigma = m - 3;
            Ok((sigma, AmbientSpace::new(0, 0, p(sigma + 1))))
        }
    }
}

/// Checks the report's parameters and the ambient space against the table.
pub fn verify_table3(report: &StructureReport, space: AmbientSpace) -> std::result::Result<(), String> {
    let p = &report.profile;
    if p.m + 1 != p.sigma + p.tau + p.upsilon {
        return Err("m + 1 != sigma + tau + upsilon".into());
    }
    if p.upsilon != report.shape.upsilon() {
        return Err(format!("upsilon = {} does not match shape {}", p.upsilon, report.shape));
    }
    let expected_tau_bar = if report.shape.u_is_square() { p.tau.saturating_sub(1) } else { p.tau };
    if p.tau_bar != expected_tau_bar {
        return Err(format!("tau_bar = {} does not match shape {}", p.tau_bar, report.shape));
    }
    let (sigma, expected) = table3_row(report.shape, p.m, p.tau)?;
    if sigma != p.sigma {
        return Err(format!("sigma = {} but the table requires {sigma}", p.sigma));
    }
    if expected != space {
        return Err(format!("space is {space} but the table requires {expected}"));
    }
    Ok(())
}

// Columns of the Gray image of `group`: column word -> multiplicity.
fn column_counts(group: &CodeGroup) -> (Vec<BinaryWord>, HashMap<BinaryWord, usize>) {
    let rows: Vec<BinaryWord> = group.elements().iter().map(GroupElement::gray).collect();
    let n = group.space().n();
    let mut columns = Vec::with_capacity(n);
    let mut counts = HashMap::new();
    for j in 0..n {
        let mut col = BinaryWord::zeros(rows.len());
        for (i, row) in rows.iter().enumerate() {
            if row.get(j) {
                col.set(i, true);
            }
        }
        *counts.entry(col.clone()).or_insert(0) += 1;
        columns.push(col);
    }
    (columns, counts)
}

// Keeps each distinct column `count / factor` times and tests the result.
fn reduced_is_hadamard(
    group: &CodeGroup,
    columns: &[BinaryWord],
    counts: &HashMap<BinaryWord, usize>,
    factor: usize,
) -> std::result::Result<(), String> {
    let mut kept: HashMap<&BinaryWord, usize> = HashMap::new();
    let mut positions = Vec::new();
    for (j, col) in columns.iter().enumerate() {
        let quota = counts[col] / factor;
        let used = kept.entry(col).or_insert(0);
        if *used < quota {
            *used += 1;
            positions.push(j);
        }
    }
    let words = group
        .elements()
        .iter()
        .map(|x| x.gray().select(&positions))
        .collect();
    let code = BinaryCode::new(positions.len(), words).map_err(|e| e.to_string())?;
    is_hadamard(&code).map_err(|f| format!("reduced code is not Hadamard: {f}"))
}

/// Column duplication (one s generator) or quadruplication (two) of `A(C)`.
pub fn verify_duplication(report: &StructureReport) -> std::result::Result<(), String> {
    let a = &report.abelian_max;
    match report.profile.upsilon {
        0 => Ok(()),
        1 => {
            let (columns, counts) = column_counts(a);
            if let Some((_, c)) = counts.iter().find(|(_, &c)| c % 2 != 0) {
                return Err(format!("a column of A occurs {c} times"));
            }
            reduced_is_hadamard(a, &columns, &counts, 2)
        }
        2 => {
            let space = a.space();
            if space.k1 != 0 || space.k2 != 0 {
                return Err("two s generators need a purely quaternionic space".into());
            }
            let mut q8_columns: HashMap<Vec<String>, usize> = HashMap::new();
            for c in 0..space.k3 {
                let col = a.elements().iter().map(|x| x.token(c)).collect();
                *q8_columns.entry(col).or_insert(0) += 1;
            }
            if let Some((_, c)) = q8_columns.iter().find(|(_, &c)| c % 2 != 0) {
                return Err(format!("a Q8 column of A occurs {c} times"));
            }
            let (columns, counts) = column_counts(a);
            if let Some((_, c)) = counts.iter().find(|(_, &c)| c % 4 != 0) {
                return Err(format!("a binary column of A occurs {c} times"));
            }
            reduced_is_hadamard(a, &columns, &counts, 4)
        }
        u => Err(format!("upsilon = {u} is impossible")),
    }
}

/// What the matched case predicts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Prediction {
    Exact { k: usize, r: usize },
    Range { k: usize, r_min: usize, r_max: usize },
}

impl Prediction {
    pub fn admits(&self, k: usize, r: usize) -> bool {
        match *self {
            Prediction::Exact { k: pk, r: pr } => k == pk && r == pr,
            Prediction::Range { k: pk, r_min, r_max } => k == pk && (r_min..=r_max).contains(&r),
        }
    }
}

impl fmt::Display for Prediction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Prediction::Exact { k, r } => write!(f, "k={k} r={r}"),
            Prediction::Range { k, r_min, r_max } => write!(f, "k={k} r in {r_min}..={r_max}"),
        }
    }
}

/// Measured rank and kernel dimension with the matched case.
#[derive(Clone, Debug)]
pub struct Measurement {
    pub k: usize,
    pub r: usize,
    pub case: &'static str,
    pub prediction: Prediction,
    pub report: StructureReport,
}

pub(crate) fn binomial2(t: usize) -> usize {
    t * t.saturating_sub(1) / 2
}

/// Determines the case of the rank/kernel analysis from swapper membership.
pub fn predict(group: &CodeGroup, report: &StructureReport) -> Result<(&'static str, Prediction)> {
    let p = report.profile;
    let (sigma, tau, tau_bar) = (p.sigma, p.tau, p.tau_bar);
    let g = &report.std_gens;
    let u = group.space().u();
    let inside = |x: &GroupElement| group.contains(x);
    let exact = |k, r| Prediction::Exact { k, r };
    let r1_is_u_root = g.r.first().is_some_and(|r1| r1.square() == u);
    let outcome = match (p.upsilon, tau) {
        (0, _) => {
            if tau_bar <= 1 {
                ("1a", exact(sigma + tau, sigma + tau))
            } else if r1_is_u_root {
                ("1b", exact(sigma + 1, sigma + tau + binomial2(tau - 1)))
            } else {
                ("1c", exact(sigma, sigma + tau + binomial2(tau)))
            }
        }
        (1, 1) => {
            if inside(&g.s[0].swapper_with(&g.r[0])) {
                ("2a", exact(sigma + 2, sigma + 2))
            } else {
                ("2b", exact(sigma, sigma + 3))
            }
        }
        (1, 2) if tau_bar == 1 => {
            let s1 = &g.s[0];
            let r12 = g.r[0].product(&g.r[1]);
            let count = [&g.r[0], &g.r[1], &r12]
                .iter()
                .filter(|r| inside(&s1.swapper_with(r)))
                .count();
            match count {
                3 => ("3a", exact(sigma + 3, sigma + 3)),
                1 => ("3b", exact(sigma + 1, sigma + 4)),
                0 => ("3c", exact(sigma, sigma + 5)),
                _ => {
                    return Err(Error::CaseMismatch {
                        case: "3".into(),
                        expected: "0, 1 or 3 swappers in C".into(),
                        k: 0,
                        r: 0,
                    })
                }
            }
        }
        (1, _) if tau_bar >= 2 => {
            let s1 = &g.s[0];
            let r_gens: &[GroupElement] = if r1_is_u_root { &g.r[1..] } else { &g.r };
            let case_a = (0u32..1 << r_gens.len()).any(|mask| {
                let b = r_gens
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .fold(s1.clone(), |acc, (_, r)| r.product(&acc));
                g.r.iter().all(|a| inside(&b.swapper_with(a)))
            });
            if case_a {
                ("4a", exact(sigma + tau - tau_bar + 1, sigma + tau + 1 + binomial2(tau_bar)))
            } else if r1_is_u_root && inside(&g.r[0].swapper_with(s1)) {
                ("4b", exact(sigma + 1, sigma + tau + 1 + binomial2(tau_bar + 1)))
            } else if tau == tau_bar + 1 {
                let base = sigma + tau + 1;
                (
                    "4c",
                    Prediction::Range {
                        k: sigma,
                        r_min: base + binomial2(tau - 1),
                        r_max: base + binomial2(tau) + 1,
                    },
                )
            } else {
                let base = sigma + tau + 1;
                (
                    "4c",
                    Prediction::Range {
                        k: sigma,
                        r_min: base + binomial2(tau) + 1,
                        r_max: base + binomial2(tau + 1),
                    },
                )
            }
        }
        (2, 2) => {
            let (r1, r2) = (&g.r[0], &g.r[1]);
            let (s1, s2) = (&g.s[0], &g.s[1]);
            let first = inside(&r2.swapper_with(s2));
            let second = inside(&r1.product(r2).swapper_with(&s1.product(s2)));
            match (first, second) {
                (true, true) => ("5a", exact(sigma + 4, sigma + 4)),
                (true, false) | (false, true) => ("5b", exact(sigma + 2, sigma + 5)),
                (false, false) => ("5c", exact(sigma, sigma + 6)),
            }
        }
        (upsilon, tau) => {
            return Err(Error::CaseMismatch {
                case: "none".into(),
                expected: format!("a case for upsilon={upsilon}, tau={tau}, tau_bar={tau_bar}"),
                k: 0,
                r: 0,
            })
        }
    };
    Ok(outcome)
}

/// Measures `(k, r)` and checks them against the matched case.
pub fn measure(group: &CodeGroup) -> Result<Measurement> {
    let report = standardize(group)?;
    measure_with(group, report)
}

pub fn measure_with(group: &CodeGroup, report: StructureReport) -> Result<Measurement> {
    let (case, prediction) = predict(group, &report)?;
    let rk = RankKernelReport::compute(group)?;
    if !prediction.admits(rk.k, rk.r) {
        return Err(Error::CaseMismatch {
            case: case.into(),
            expected: prediction.to_string(),
            k: rk.k,
            r: rk.r,
        });
    }
    Ok(Measurement {
        k: rk.k,
        r: rk.r,
        case,
        prediction,
        report,
    })
}
