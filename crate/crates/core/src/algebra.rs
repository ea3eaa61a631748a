//! Exact arithmetic in `Z2`, `Z4`, the quaternion group `Q8`, and their mixed
//! direct product `Z2^k1 x Z4^k2 x Q8^k3`.
//!
//! Group elements are written multiplicatively. Components are stored in a
//! single byte vector: `Z2` entries as `0|1`, `Z4` entries as residues `0..4`
//! and `Q8` entries as the code `i + 4j` of the normal form `a^i b^j`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::binary::BinaryWord;
use crate::error::{Error, Result};

/// An element `a^i b^j` of the quaternion group, `0 <= i < 4`, `j` in `{0, 1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Q8Element {
    i: u8,
    j: u8,
}

const Q8_TOKENS: [&str; 8] = ["1", "a", "a2", "a3", "b", "ab", "a2b", "a3b"];

// Gray images indexed by `i + 4j`.
const Q8_GRAY: [[u8; 4]; 8] = [
    [0, 0, 0, 0], // 1
    [0, 1, 0, 1], // a
    [1, 1, 1, 1], // a2
    [1, 0, 1, 0], // a3
    [0, 1, 1, 0], // b
    [1, 1, 0, 0], // ab
    [1, 0, 0, 1], // a2b
    [0, 0, 1, 1], // a3b
];

const Z4_GRAY: [[u8; 2]; 4] = [[0, 0], [0, 1], [1, 1], [1, 0]];

impl Q8Element {
    pub const ONE: Self = Self { i: 0, j: 0 };
    pub const A: Self = Self { i: 1, j: 0 };
    pub const A2: Self = Self { i: 2, j: 0 };
    pub const A3: Self = Self { i: 3, j: 0 };
    pub const B: Self = Self { i: 0, j: 1 };
    pub const AB: Self = Self { i: 1, j: 1 };
    pub const A2B: Self = Self { i: 2, j: 1 };
    pub const A3B: Self = Self { i: 3, j: 1 };

    /// Builds `a^i b^j`, reducing `i` modulo 4 and `j` modulo 2.
    pub fn new(i: u8, j: u8) -> Self {
        Self { i: i % 4, j: j % 2 }
    }

    /// The eight elements in the order `1, a, a2, a3, b, ab, a2b, a3b`.
    pub fn all() -> [Self; 8] {
        std::array::from_fn(|c| Self::from_code(c as u8))
    }

    pub fn a_exponent(self) -> u8 {
        self.i
    }

    pub fn b_exponent(self) -> u8 {
        self.j
    }

    pub(crate) fn code(self) -> u8 {
        self.i + 4 * self.j
    }

    pub(crate) fn from_code(code: u8) -> Self {
        Self {
            i: code & 3,
            j: (code >> 2) & 1,
        }
    }

    /// Product reduced with `b a = a^-1 b` and `b^2 = a^2`.
    pub fn mul(self, rhs: Self) -> Self {
        let shift = if self.j == 0 { rhs.i } else { (4 - rhs.i) % 4 };
        let mut i = (self.i + shift) % 4;
        let mut j = self.j + rhs.j;
        if j == 2 {
            i = (i + 2) % 4;
            j = 0;
        }
        Self { i, j }
    }

    pub fn inverse(self) -> Self {
        if self.j == 0 {
            Self::new(4 - self.i, 0)
        } else {
            Self::new(self.i + 2, 1)
        }
    }

    pub fn square(self) -> Self {
        self.mul(self)
    }

    pub fn order(self) -> u8 {
        match (self.i, self.j) {
            (0, 0) => 1,
            (2, 0) => 2,
            _ => 4,
        }
    }

    pub fn gray(self) -> [u8; 4] {
        Q8_GRAY[self.code() as usize]
    }

    // Class bits: (i mod 2, j). Cosets of the centre {1, a2}.
    fn class_bits(self) -> (u8, u8) {
        (self.i & 1, self.j)
    }

    /// `[x, y]` in `Q8`: `a2` exactly when `x` and `y` lie in distinct
    /// non-central classes.
    pub fn commutator(self, rhs: Self) -> Self {
        let (a1, b1) = self.class_bits();
        let (a2, b2) = rhs.class_bits();
        if (a1 & b2) ^ (a2 & b1) == 1 {
            Self::A2
        } else {
            Self::ONE
        }
    }

    /// `(x : y)` in `Q8`.
    pub fn swapper(self, rhs: Self) -> Self {
        let (a1, b1) = self.class_bits();
        let (a2, b2) = rhs.class_bits();
        if (a1 & a2) ^ (b1 & b2) ^ (a1 & b2) == 1 {
            Self::A2
        } else {
            Self::ONE
        }
    }
}

impl fmt::Display for Q8Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(Q8_TOKENS[self.code() as usize])
    }
}

impl FromStr for Q8Element {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Q8_TOKENS
            .iter()
            .position(|t| *t == s)
            .map(|c| Self::from_code(c as u8))
            .ok_or_else(|| Error::Parse(format!("unknown Q8 token `{s}`")))
    }
}

/// Component alphabet of a position in the ambient space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Alphabet {
    Z2,
    Z4,
    Q8,
}

impl Alphabet {
    /// Binary length of the Gray image of one component.
    pub fn width(self) -> usize {
        match self {
            Alphabet::Z2 => 1,
            Alphabet::Z4 => 2,
            Alphabet::Q8 => 4,
        }
    }

    fn mul(self, x: u8, y: u8) -> u8 {
        match self {
            Alphabet::Z2 => x ^ y,
            Alphabet::Z4 => (x + y) & 3,
            Alphabet::Q8 => Q8Element::from_code(x).mul(Q8Element::from_code(y)).code(),
        }
    }

    fn inverse(self, x: u8) -> u8 {
        match self {
            Alphabet::Z2 => x,
            Alphabet::Z4 => (4 - x) & 3,
            Alphabet::Q8 => Q8Element::from_code(x).inverse().code(),
        }
    }

    fn commutator(self, x: u8, y: u8) -> u8 {
        match self {
            Alphabet::Z2 | Alphabet::Z4 => 0,
            Alphabet::Q8 => Q8Element::from_code(x)
                .commutator(Q8Element::from_code(y))
                .code(),
        }
    }

    fn swapper(self, x: u8, y: u8) -> u8 {
        match self {
            Alphabet::Z2 => 0,
            Alphabet::Z4 => {
                if x & y & 1 == 1 {
                    2
                } else {
                    0
                }
            }
            Alphabet::Q8 => Q8Element::from_code(x)
                .swapper(Q8Element::from_code(y))
                .code(),
        }
    }

    // Entry of `u`: the unique central element of order two.
    fn involution(self) -> u8 {
        match self {
            Alphabet::Z2 => 1,
            Alphabet::Z4 => 2,
            Alphabet::Q8 => Q8Element::A2.code(),
        }
    }

    fn order(self, x: u8) -> u8 {
        match self {
            Alphabet::Z2 => {
                if x == 0 {
                    1
                } else {
                    2
                }
            }
            Alphabet::Z4 => match x {
                0 => 1,
                2 => 2,
                _ => 4,
            },
            Alphabet::Q8 => Q8Element::from_code(x).order(),
        }
    }

    fn push_gray(self, x: u8, out: &mut Vec<u8>) {
        match self {
            Alphabet::Z2 => out.push(x),
            Alphabet::Z4 => out.extend_from_slice(&Z4_GRAY[x as usize]),
            Alphabet::Q8 => out.extend_from_slice(&Q8_GRAY[x as usize]),
        }
    }

    fn token(self, x: u8) -> String {
        match self {
            Alphabet::Z2 | Alphabet::Z4 => x.to_string(),
            Alphabet::Q8 => Q8_TOKENS[x as usize].to_string(),
        }
    }

    fn parse_token(self, token: &str) -> Result<u8> {
        let bad = || Error::Parse(format!("bad {self:?} token `{token}`"));
        match self {
            Alphabet::Z2 => match token {
                "0" => Ok(0),
                "1" => Ok(1),
                _ => Err(bad()),
            },
            Alphabet::Z4 => match token {
                "0" => Ok(0),
                "1" => Ok(1),
                "2" => Ok(2),
                "3" => Ok(3),
                _ => Err(bad()),
            },
            Alphabet::Q8 => token.parse::<Q8Element>().map(Q8Element::code).map_err(|_| bad()),
        }
    }
}

/// The shape `(k1, k2, k3)` of `Z2^k1 x Z4^k2 x Q8^k3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AmbientSpace {
    pub k1: usize,
    pub k2: usize,
    pub k3: usize,
}

impl AmbientSpace {
    pub fn new(k1: usize, k2: usize, k3: usize) -> Self {
        Self { k1, k2, k3 }
    }

    /// Binary length `k1 + 2 k2 + 4 k3` of Gray images.
    pub fn n(&self) -> usize {
        self.k1 + 2 * self.k2 + 4 * self.k3
    }

    /// Number of components `k1 + k2 + k3`.
    pub fn len(&self) -> usize {
        self.k1 + self.k2 + self.k3
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn alphabet(&self, index: usize) -> Alphabet {
        if index < self.k1 {
            Alphabet::Z2
        } else if index < self.k1 + self.k2 {
            Alphabet::Z4
        } else {
            Alphabet::Q8
        }
    }

    /// Identity element `e`.
    pub fn identity(&self) -> GroupElement {
        GroupElement {
            space: *self,
            comps: vec![0; self.len()],
        }
    }

    /// The element `u` whose Gray image is the all-ones word.
    pub fn u(&self) -> GroupElement {
        GroupElement {
            space: *self,
            comps: (0..self.len()).map(|c| self.alphabet(c).involution()).collect(),
        }
    }

    fn alphabets(&self) -> impl Iterator<Item = Alphabet> + '_ {
        (0..self.len()).map(|c| self.alphabet(c))
    }
}

impl fmt::Display for AmbientSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z2^{} x Z4^{} x Q8^{}", self.k1, self.k2, self.k3)
    }
}

/// One vector of `Z2^k1 x Z4^k2 x Q8^k3`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupElement {
    space: AmbientSpace,
    comps: Vec<u8>,
}

impl GroupElement {
    pub fn from_parts(space: AmbientSpace, z2: &[u8], z4: &[u8], q8: &[Q8Element]) -> Result<Self> {
        if z2.len() != space.k1 || z4.len() != space.k2 || q8.len() != space.k3 {
            return Err(Error::InvalidParameters(format!(
                "block lengths ({}, {}, {}) do not match {space}",
                z2.len(),
                z4.len(),
                q8.len()
            )));
        }
        if let Some(bad) = z2.iter().find(|&&x| x > 1) {
            return Err(Error::InvalidParameters(format!("Z2 entry {bad} out of range")));
        }
        if let Some(bad) = z4.iter().find(|&&x| x > 3) {
            return Err(Error::InvalidParameters(format!("Z4 entry {bad} out of range")));
        }
        let comps = z2
            .iter()
            .chain(z4)
            .copied()
            .chain(q8.iter().map(|q| q.code()))
            .collect();
        Ok(Self { space, comps })
    }

    /// Q8-only element.
    pub fn quaternionic(q8: &[Q8Element]) -> Self {
        Self {
            space: AmbientSpace::new(0, 0, q8.len()),
            comps: q8.iter().map(|q| q.code()).collect(),
        }
    }

    pub(crate) fn raw(&self) -> &[u8] {
        &self.comps
    }

    pub fn space(&self) -> AmbientSpace {
        self.space
    }

    pub fn z2(&self) -> &[u8] {
        &self.comps[..self.space.k1]
    }

    pub fn z4(&self) -> &[u8] {
        &self.comps[self.space.k1..self.space.k1 + self.space.k2]
    }

    pub fn q8(&self) -> Vec<Q8Element> {
        self.comps[self.space.k1 + self.space.k2..]
            .iter()
            .map(|&c| Q8Element::from_code(c))
            .collect()
    }

    /// Entry of component `index` rendered as its text token.
    pub fn token(&self, index: usize) -> String {
        self.space.alphabet(index).token(self.comps[index])
    }

    /// Whether component `index` has order exactly four.
    pub fn has_order_four_at(&self, index: usize) -> bool {
        self.space.alphabet(index).order(self.comps[index]) == 4
    }

    pub fn is_identity(&self) -> bool {
        self.space
            .alphabets()
            .zip(&self.comps)
            .all(|(_, &x)| x == 0)
    }

    fn check_space(&self, other: &Self) -> Result<()> {
        if self.space == other.space {
            Ok(())
        } else {
            Err(Error::SpaceMismatch(self.space, other.space))
        }
    }

    fn zip_with(&self, other: &Self, op: impl Fn(Alphabet, u8, u8) -> u8) -> Self {
        debug_assert_eq!(self.space, other.space);
        let comps = self
            .space
            .alphabets()
            .zip(self.comps.iter().zip(&other.comps))
            .map(|(alpha, (&x, &y))| op(alpha, x, y))
            .collect();
        Self {
            space: self.space,
            comps,
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_space(other)?;
        Ok(self.product(other))
    }

    pub(crate) fn product(&self, other: &Self) -> Self {
        self.zip_with(other, Alphabet::mul)
    }

    pub fn inverse(&self) -> Self {
        let comps = self
            .space
            .alphabets()
            .zip(&self.comps)
            .map(|(alpha, &x)| alpha.inverse(x))
            .collect();
        Self {
            space: self.space,
            comps,
        }
    }

    pub fn square(&self) -> Self {
        self.product(self)
    }

    /// Order of the element: 1, 2 or 4.
    pub fn order(&self) -> u8 {
        self.space
            .alphabets()
            .zip(&self.comps)
            .map(|(alpha, &x)| alpha.order(x))
            .max()
            .unwrap_or(1)
    }

    /// `[x, y]`, the element with `xy = [x, y] yx`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.check_space(other)?;
        Ok(self.commutator_with(other))
    }

    pub(crate) fn commutator_with(&self, other: &Self) -> Self {
        self.zip_with(other, Alphabet::commutator)
    }

    /// `(x : y)`, the element with `gray((x:y) x y) = gray(x) + gray(y)`.
    pub fn swapper(&self, other: &Self) -> Result<Self> {
        self.check_space(other)?;
        Ok(self.swapper_with(other))
    }

    pub(crate) fn swapper_with(&self, other: &Self) -> Self {
        self.zip_with(other, Alphabet::swapper)
    }

    /// 0-based indices of the components whose entry has order exactly two.
    pub fn m_set(&self) -> Result<BTreeSet<usize>> {
        let mut set = BTreeSet::new();
        for (index, (alpha, &x)) in self.space.alphabets().zip(&self.comps).enumerate() {
            match alpha.order(x) {
                4 => return Err(Error::NotTorsion),
                2 => {
                    set.insert(index);
                }
                _ => {}
            }
        }
        Ok(set)
    }

    /// Gray image, blocks concatenated in component order.
    pub fn gray(&self) -> BinaryWord {
        let mut bits = Vec::with_capacity(self.space.n());
        for (alpha, &x) in self.space.alphabets().zip(&self.comps) {
            alpha.push_gray(x, &mut bits);
        }
        BinaryWord::from_bits(&bits)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.space;
        let block = |range: std::ops::Range<usize>| {
            range
                .map(|c| self.token(c))
                .collect::<Vec<_>>()
                .join(" ")
        };
        let text = [
            block(0..s.k1),
            block(s.k1..s.k1 + s.k2),
            block(s.k1 + s.k2..s.len()),
        ]
        .join(" | ");
        f.write_str(&text.split_whitespace().collect::<Vec<_>>().join(" "))
    }
}

impl FromStr for GroupElement {
    type Err = Error;

    /// Parses `z2 tokens | z4 tokens | q8 tokens`; the block lengths define the space.
    fn from_str(s: &str) -> Result<Self> {
        let blocks: Vec<&str> = s.split('|').collect();
        if blocks.len() != 3 {
            return Err(Error::Parse(format!(
                "expected three `|`-separated blocks, found {} in `{s}`",
                blocks.len()
            )));
        }
        let tokens: Vec<Vec<&str>> = blocks.iter().map(|b| b.split_whitespace().collect()).collect();
        let space = AmbientSpace::new(tokens[0].len(), tokens[1].len(), tokens[2].len());
        let comps = tokens
            .iter()
            .flatten()
            .enumerate()
            .map(|(c, tok)| space.alphabet(c).parse_token(tok))
            .collect::<Result<Vec<u8>>>()?;
        Ok(Self { space, comps })
    }
}
