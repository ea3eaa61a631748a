//! Text formats: generator files, binary matrix export.

use crate::algebra::{AmbientSpace, GroupElement};
use crate::code::BinaryCode;
use crate::error::{Error, Result};

/// Renders a generator file: a `space k1 k2 k3` header, then one element per line.
pub fn write_generators(space: AmbientSpace, generators: &[GroupElement]) -> String {
    let mut out = format!("space {} {} {}\n", space.k1, space.k2, space.k3);
    for g in generators {
        out.push_str(&g.to_string());
        out.push('\n');
    }
    out
}

/// Parses a generator file. Blank lines and lines starting with `#` are skipped.
pub fn read_generators(text: &str) -> Result<(AmbientSpace, Vec<GroupElement>)> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty generator file".into()))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let space = match fields.as_slice() {
        ["space", k1, k2, k3] => {
            let num = |s: &str| {
                s.parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad space header `{header}`")))
            };
            AmbientSpace::new(num(k1)?, num(k2)?, num(k3)?)
        }
        _ => return Err(Error::Parse(format!("expected `space k1 k2 k3`, found `{header}`"))),
    };
    let generators = lines
        .map(|line| {
            let g: GroupElement = line.parse()?;
            if g.space() != space {
                return Err(Error::SpaceMismatch(space, g.space()));
            }
            Ok(g)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((space, generators))
}

/// One codeword per line, rows sorted lexicographically.
pub fn export_binary(code: &BinaryCode) -> String {
    let mut rows: Vec<String> = code.words().iter().map(ToString::to_string).collect();
    rows.sort();
    let mut out = rows.join("\n");
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_file_round_trip() {
        let space = AmbientSpace::new(1, 1, 2);
        let gens: Vec<GroupElement> = ["1 | 2 | a b", "0 | 1 | a2 ab"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
        let text = write_generators(space, &gens);
        assert!(text.starts_with("space 1 1 2\n"));
        assert_eq!(read_generators(&text).unwrap(), (space, gens));
    }

    #[test]
    fn comments_and_errors() {
        let text = "# comment\n\nspace 0 0 1\n| | b\n";
        let (space, gens) = read_generators(text).unwrap();
        assert_eq!(space, AmbientSpace::new(0, 0, 1));
        assert_eq!(gens.len(), 1);
        assert!(matches!(read_generators("space 0 1 1\n| | b\n"), Err(Error::SpaceMismatch(..))));
        assert!(matches!(read_generators("spice 0 0 1\n"), Err(Error::Parse(_))));
        assert!(matches!(read_generators("space 0 0 1\n| | c\n"), Err(Error::Parse(_))));
    }
}
