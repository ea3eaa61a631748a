//! Subgroup closure, Gray-image codes, the Hadamard test, and rank/kernel
//! computations (each by two independent methods).

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use crate::algebra::{AmbientSpace, GroupElement};
use crate::binary::{BinaryWord, Gf2Basis};
use crate::error::{Error, Result};

pub use crate::binary::{distance, weight};

/// Default bound on enumerated group sizes.
pub const DEFAULT_CLOSURE_CAP: usize = 1 << 20;

// Rank of each Q8 code `i + 4j` in the text ordering of its token.
const Q8_TEXT_RANK: [u8; 8] = [0, 1, 2, 4, 7, 6, 3, 5];

/// Compares two elements of one space by their canonical text form.
pub fn text_order(x: &GroupElement, y: &GroupElement) -> Ordering {
    text_key(x).cmp(&text_key(y))
}

fn text_key(x: &GroupElement) -> Vec<u8> {
    let s = x.space();
    x.raw()
        .iter()
        .enumerate()
        .map(|(c, &v)| if c < s.k1 + s.k2 { v } else { Q8_TEXT_RANK[v as usize] })
        .collect()
}

/// A finite subgroup of the ambient space, enumerated in text order.
#[derive(Clone, Debug)]
pub struct CodeGroup {
    space: AmbientSpace,
    generators: Vec<GroupElement>,
    elements: Vec<GroupElement>,
    index: HashMap<Vec<u8>, usize>,
}

impl CodeGroup {
    /// Closure of `generators` with the default size cap.
    pub fn closure(space: AmbientSpace, generators: &[GroupElement]) -> Result<Self> {
        Self::closure_with_cap(space, generators, DEFAULT_CLOSURE_CAP)
    }

    pub fn closure_with_cap(space: AmbientSpace, generators: &[GroupElement], cap: usize) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| g.space() != space) {
            return Err(Error::SpaceMismatch(space, g.space()));
        }
        let identity = space.identity();
        let mut seen: HashSet<Vec<u8>> = HashSet::from([identity.raw().to_vec()]);
        let mut elements = vec![identity];
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in generators {
                let p = elements[i].product(g);
                if seen.insert(p.raw().to_vec()) {
                    if elements.len() >= cap {
                        return Err(Error::ClosureCap(cap));
                    }
                    queue.push_back(elements.len());
                    elements.push(p);
                }
            }
        }
        Ok(Self::from_elements(space, generators.to_vec(), elements))
    }

    fn from_elements(space: AmbientSpace, generators: Vec<GroupElement>, mut elements: Vec<GroupElement>) -> Self {
        elements.sort_by_cached_key(text_key);
        let index = elements
            .iter()
            .enumerate()
            .map(|(i, x)| (x.raw().to_vec(), i))
            .collect();
        Self {
            space,
            generators,
            elements,
            index,
        }
    }

    pub fn space(&self) -> AmbientSpace {
        self.space
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    /// All elements, sorted by canonical text form; the identity comes first.
    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// `log2 |C|`.
    pub fn log_order(&self) -> usize {
        self.elements.len().trailing_zeros() as usize
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        x.space() == self.space && self.index.contains_key(x.raw())
    }

    /// Position of `x` in [`elements`](Self::elements).
    pub fn index_of(&self, x: &GroupElement) -> Option<usize> {
        self.index.get(x.raw()).copied()
    }

    pub fn is_abelian(&self) -> bool {
        self.generators.iter().enumerate().all(|(i, x)| {
            self.generators[i + 1..]
                .iter()
                .all(|y| x.commutator_with(y).is_identity())
        })
    }

    /// Same element set, irrespective of generators.
    pub fn same_elements(&self, other: &Self) -> bool {
        self.space == other.space && self.elements == other.elements
    }

    /// Gray image; fails if the Gray map is not injective on the group.
    pub fn gray_code(&self) -> Result<BinaryCode> {
        let words: Vec<BinaryWord> = self.elements.iter().map(GroupElement::gray).collect();
        let code = BinaryCode::new(self.space.n(), words.clone())?;
        if code.len() != words.len() {
            return Err(Error::NotInjective);
        }
        Ok(code)
    }
}

/// A set of binary words of a common length, stored sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryCode {
    n: usize,
    words: Vec<BinaryWord>,
    set: HashSet<BinaryWord>,
}

impl BinaryCode {
    pub fn new(n: usize, mut words: Vec<BinaryWord>) -> Result<Self> {
        if let Some(w) = words.iter().find(|w| w.len() != n) {
            return Err(Error::LengthMismatch(n, w.len()));
        }
        words.sort();
        words.dedup();
        let set = words.iter().cloned().collect();
        Ok(Self { n, words, set })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Codewords in lexicographic order.
    pub fn words(&self) -> &[BinaryWord] {
        &self.words
    }

    pub fn contains(&self, w: &BinaryWord) -> bool {
        self.set.contains(w)
    }

    fn is_translate_invariant(&self, z: &BinaryWord) -> bool {
        let mut t = BinaryWord::zeros(self.n);
        self.words.iter().all(|c| {
            t.clone_from(c);
            t.xor_assign(z);
            self.set.contains(&t)
        })
    }
}

/// The first clause of the Hadamard test that fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HadamardFailure {
    LengthNotPowerOfTwo(usize),
    WrongSize { expected: usize, found: usize },
    MissingZeroWord,
    MissingOnesWord,
    BadWeight { word: String, weight: usize },
    BadDistance { distance: usize },
}

impl fmt::Display for HadamardFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::LengthNotPowerOfTwo(n) => write!(f, "length {n} is not a power of two"),
            Self::WrongSize { expected, found } => {
                write!(f, "expected {expected} codewords, found {found}")
            }
            Self::MissingZeroWord => f.write_str("all-zeros word missing"),
            Self::MissingOnesWord => f.write_str("all-ones word missing"),
            Self::BadWeight { word, weight } => write!(f, "codeword {word} has weight {weight}"),
            Self::BadDistance { distance } => write!(f, "two codewords at distance {distance}"),
        }
    }
}

/// Checks that `code` is a binary Hadamard code: `2n` words, containing the
/// all-zeros and all-ones words, every other weight `n/2`, and all distances
/// between distinct words in `{n/2, n}`.
pub fn is_hadamard(code: &BinaryCode) -> std::result::Result<(), HadamardFailure> {
    let n = code.n();
    if !n.is_power_of_two() || n < 2 {
        return Err(HadamardFailure::LengthNotPowerOfTwo(n));
    }
    if code.len() != 2 * n {
        return Err(HadamardFailure::WrongSize {
            expected: 2 * n,
            found: code.len(),
        });
    }
    if !code.contains(&BinaryWord::zeros(n)) {
        return Err(HadamardFailure::MissingZeroWord);
    }
    if !code.contains(&BinaryWord::ones(n)) {
        return Err(HadamardFailure::MissingOnesWord);
    }
    for w in code.words() {
        let wt = w.weight();
        if wt != 0 && wt != n && wt != n / 2 {
            return Err(HadamardFailure::BadWeight {
                word: w.to_string(),
                weight: wt,
            });
        }
    }
    let words = code.words();
    for (i, a) in words.iter().enumerate() {
        for b in &words[i + 1..] {
            let d = a.distance(b).expect("equal lengths");
            if d != n / 2 && d != n {
                return Err(HadamardFailure::BadDistance { distance: d });
            }
        }
    }
    Ok(())
}

/// Convenience wrapper: the Gray image of `group` is a Hadamard code.
pub fn check_hadamard(group: &CodeGroup) -> Result<BinaryCode> {
    let code = group.gray_code()?;
    is_hadamard(&code).map_err(Error::NotHadamard)?;
    Ok(code)
}

/// A kernel: every word of the subspace plus a basis of it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Kernel {
    words: Vec<BinaryWord>,
    basis: Vec<BinaryWord>,
}

impl Kernel {
    fn from_words(mut words: Vec<BinaryWord>) -> Self {
        words.sort();
        let mut gf2 = Gf2Basis::new();
        for w in &words {
            gf2.insert(w);
        }
        Self {
            basis: gf2.basis().to_vec(),
            words,
        }
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// All kernel words, sorted.
    pub fn words(&self) -> &[BinaryWord] {
        &self.words
    }

    pub fn basis(&self) -> &[BinaryWord] {
        &self.basis
    }
}

/// `K(C)` by definition. Only translates of a fixed codeword by codewords are
/// tried: if `C + z = C` then `c0 + z` lies in `C` for any `c0` in `C`.
pub fn kernel_bruteforce(code: &BinaryCode) -> Kernel {
    let Some(c0) = code.words().first() else {
        return Kernel::from_words(Vec::new());
    };
    let zero = BinaryWord::zeros(code.n());
    let base = if code.contains(&zero) { zero } else { c0.clone() };
    let words = code
        .words()
        .iter()
        .map(|c| {
            let mut z = c.clone();
            z.xor_assign(&base);
            z
        })
        .filter(|z| code.is_translate_invariant(z))
        .collect();
    Kernel::from_words(words)
}

/// `K(C)` as the Gray images of the elements whose swappers with every group
/// element stay in the group.
pub fn kernel_by_swappers(group: &CodeGroup) -> Kernel {
    let words = group
        .elements()
        .iter()
        .filter(|c| {
            group
                .elements()
                .iter()
                .all(|b| group.contains(&c.swapper_with(b)))
        })
        .map(GroupElement::gray)
        .collect();
    Kernel::from_words(words)
}

/// Dimension of the linear span by Gaussian elimination.
pub fn rank_gf2(code: &BinaryCode) -> usize {
    let mut basis = Gf2Basis::new();
    for w in code.words() {
        basis.insert(w);
    }
    basis.rank()
}

/// `log2 |<C, S(C)>|` where `S(C)` holds all swappers of pairs of elements.
pub fn rank_by_span_group(group: &CodeGroup) -> Result<usize> {
    let mut generators = group.generators().to_vec();
    let mut span = group.clone();
    for x in group.elements() {
        for y in group.elements() {
            let s = x.swapper_with(y);
            if !span.contains(&s) {
                generators.push(s);
                span = CodeGroup::closure(group.space(), &generators)?;
            }
        }
    }
    Ok(span.log_order())
}

/// Rank and kernel dimension with the span-group cross-check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankKernelReport {
    pub r: usize,
    pub k: usize,
    pub kernel_words: Vec<BinaryWord>,
    pub span_dimension_check: usize,
}

impl RankKernelReport {
    pub fn compute(group: &CodeGroup) -> Result<Self> {
        let code = group.gray_code()?;
        let kernel = kernel_bruteforce(&code);
        Ok(Self {
            r: rank_gf2(&code),
            k: kernel.dimension(),
            kernel_words: kernel.basis().to_vec(),
            span_dimension_check: rank_by_span_group(group)?,
        })
    }

    pub fn consistent(&self) -> bool {
        self.r == self.span_dimension_check && self.k <= self.r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(s: &str) -> GroupElement {
        s.parse().unwrap()
    }

    fn group(gens: &[&str]) -> CodeGroup {
        let gens: Vec<GroupElement> = gens.iter().map(|s| el(s)).collect();
        CodeGroup::closure(gens[0].space(), &gens).unwrap()
    }

    #[test]
    fn closure_small_cases() {
        let g = group(&["| | 1"]);
        assert_eq!(g.order(), 1);
        let g = group(&["| | a"]);
        let text: Vec<String> = g.elements().iter().map(ToString::to_string).collect();
        assert_eq!(text, ["| | 1", "| | a", "| | a2", "| | a3"]);
        assert_eq!(group(&["| 1 1 |", "| 0 2 |"]).order(), 8);
    }

    #[test]
    fn closure_cap_is_enforced() {
        let space = AmbientSpace::new(0, 0, 1);
        let gens = [el("| | a"), el("| | b")];
        assert!(matches!(
            CodeGroup::closure_with_cap(space, &gens, 4),
            Err(Error::ClosureCap(4))
        ));
        assert_eq!(CodeGroup::closure_with_cap(space, &gens, 8).unwrap().order(), 8);
    }

    #[test]
    fn small_hadamard_checks() {
        let g = group(&["| 1 1 |", "| 0 2 |"]);
        assert!(is_hadamard(&g.gray_code().unwrap()).is_ok());
        let g = group(&["| 1 0 |"]);
        let err = is_hadamard(&g.gray_code().unwrap()).unwrap_err();
        assert!(matches!(err, HadamardFailure::WrongSize { .. }));
    }

    #[test]
    fn unbalanced_word_is_diagnosed() {
        let words = ["0000", "1111", "1000", "0111", "1100", "0011", "1010", "0101"]
            .iter()
            .map(|s| BinaryWord::from_bits(&s.bytes().map(|c| c - b'0').collect::<Vec<_>>()))
            .collect();
        let code = BinaryCode::new(4, words).unwrap();
        assert!(matches!(is_hadamard(&code), Err(HadamardFailure::BadWeight { weight: 3, .. })));
    }

    #[test]
    fn linear_code_kernel_is_everything() {
        let g = group(&["1 1 1 1 | |", "0 1 0 1 | |", "0 0 1 1 | |"]);
        let code = g.gray_code().unwrap();
        assert_eq!(kernel_bruteforce(&code).dimension(), 3);
        assert_eq!(kernel_by_swappers(&g).dimension(), 3);
        assert_eq!(rank_gf2(&code), 3);
        assert_eq!(rank_by_span_group(&g).unwrap(), 3);
    }

    #[test]
    fn text_order_puts_identity_first() {
        let g = group(&["0 | 1 | b", "1 | 2 | a"]);
        assert!(g.elements()[0].is_identity());
        for pair in g.elements().windows(2) {
            assert!(pair[0].to_string() < pair[1].to_string());
        }
    }
}
