//! The two worked example families: a shape-2 code in `Q8^32` and a
//! shape-3 code in `Z4^4 Q8^6`, each with its `s1` choices and the
//! `(k, r)` they produce.

use crate::algebra::{AmbientSpace, GroupElement};
use crate::code::CodeGroup;
use crate::error::Result;

/// A named example code: generators plus the expected `(k, r)`.
#[derive(Clone, Debug)]
pub struct ExampleCode {
    pub name: String,
    pub space: AmbientSpace,
    pub generators: Vec<GroupElement>,
    pub k: usize,
    pub r: usize,
}

impl ExampleCode {
    pub fn group(&self) -> Result<CodeGroup> {
        CodeGroup::closure(self.space, &self.generators)
    }
}

fn q8_row(tokens: &str) -> String {
    format!("| | {tokens}")
}

fn doubled(half: &str) -> String {
    q8_row(&format!("{half} {half}"))
}

const R1: &str = "a a a a a a a a a a a a a a a a";
const R2: &str = "a a a3 a3 a a a3 a3 1 1 a2 a2 1 1 a2 a2";
const R3: &str = "a a3 a a3 1 a2 1 a2 a a3 a a3 1 a2 1 a2";
const X1: &str = "1 1 1 1 1 1 1 1 1 1 1 1 1 1 1 1";
const X2: &str = "a2 a2 a2 a2 a2 a2 a2 a2 a2 a2 a2 a2 a2 a2 a2 a2";

/// The sixteen-component `y` blocks, indexed from one.
fn y(index: usize) -> String {
    let ab_at: &[usize] = match index {
        1 => &[],
        2 => &[0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15],
        3 => &[3, 7, 11, 15],
        4 => &[11, 15],
        5 => &[15],
        6 => &[12, 13, 14, 15],
        _ => panic!("no y{index}"),
    };
    (0..16)
        .map(|c| if ab_at.contains(&c) { "ab" } else { "b" })
        .collect::<Vec<_>>()
        .join(" ")
}

fn parse_all(rows: &[String]) -> Vec<GroupElement> {
    rows.iter()
        .map(|row| row.parse().expect("fixture rows are well formed"))
        .collect()
}

/// The six shape-2 codes of length 128 built from `r1, r2, r3, x1` and `s1`.
pub fn quaternionic_family() -> Vec<ExampleCode> {
    let choices = [(1, 1, 6, 9), (2, 1, 5, 11), (3, 3, 4, 12), (4, 4, 4, 11), (5, 5, 4, 10), (6, 6, 4, 9)];
    choices
        .iter()
        .map(|&(left, right, k, r)| {
            let rows = [
                doubled(R1),
                doubled(R2),
                doubled(R3),
                q8_row(&format!("{X1} {X2}")),
                q8_row(&format!("{} {}", y(left), y(right))),
            ];
            ExampleCode {
                name: format!("q8x32_y{left}_y{right}"),
                space: AmbientSpace::new(0, 0, 32),
                generators: parse_all(&rows),
                k,
                r,
            }
        })
        .collect()
}

/// The three shape-3 codes of length 32 built from `r1, r2` and `s1`.
pub fn mixed_family() -> Vec<ExampleCode> {
    let r1 = "| 0 2 0 2 | 1 a2 a a a a".to_string();
    let r2 = "| 0 0 2 2 | a a 1 a2 a a3".to_string();
    let choices = [
        ("b b b b b b", 4, 7),
        ("b ab b ab b ab", 3, 9),
        ("b ab b b b b", 3, 8),
    ];
    choices
        .iter()
        .enumerate()
        .map(|(i, &(s1, k, r))| ExampleCode {
            name: format!("z4x4_q8x6_s{}", i + 1),
            space: AmbientSpace::new(0, 4, 6),
            generators: parse_all(&[r1.clone(), r2.clone(), format!("| 1 1 1 1 | {s1}")]),
            k,
            r,
        })
        .collect()
}
