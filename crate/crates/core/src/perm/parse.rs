//! Text format for generating sets.
//!
//! ```text
//! # comment
//! perm 5
//! 2 1 3 4 5
//! (1,2,3,4,5)
//! ```
//!
//! The header gives the degree. Every further non-blank line is one generator,
//! either a whitespace separated list of 1-based images or a product of
//! disjoint cycles in 1-based notation. `#` starts a comment anywhere.

use super::{PermError, Permutation};

/// Output layout for [`write_generators`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeneratorFormat {
    Images,
    Cycles,
}

pub fn parse_generators(text: &str) -> Result<Vec<Permutation>, PermError> {
    let mut degree: Option<usize> = None;
    let mut gens = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = |msg: String| PermError::Parse { line: lineno + 1, msg };
        let Some(n) = degree else {
            let mut words = line.split_whitespace();
            if words.next() != Some("perm") {
                return Err(bad("expected header `perm <degree>`".into()));
            }
            let n: usize = words
                .next()
                .and_then(|w| w.parse().ok())
                .ok_or_else(|| bad("missing or malformed degree".into()))?;
            if n == 0 || n > super::MAX_DEGREE || words.next().is_some() {
                return Err(bad(format!("unsupported degree {n}")));
            }
            degree = Some(n);
            continue;
        };
        let perm = if line.starts_with('(') {
            parse_cycles(n, line).map_err(bad)?
        } else {
            parse_images(n, line).map_err(bad)?
        };
        gens.push(perm);
    }
    if degree.is_none() {
        return Err(PermError::Parse { line: 0, msg: "empty generator file".into() });
    }
    Ok(gens)
}

fn parse_images(n: usize, line: &str) -> Result<Permutation, String> {
    let images: Vec<usize> = line
        .split_whitespace()
        .map(|w| w.parse::<usize>().map_err(|_| format!("bad point `{w}`")))
        .collect::<Result<_, _>>()?;
    if images.len() != n {
        return Err(format!("expected {n} images, found {}", images.len()));
    }
    if images.contains(&0) {
        return Err("images are 1-based".into());
    }
    let zero_based: Vec<usize> = images.iter().map(|x| x - 1).collect();
    Permutation::from_images(&zero_based).map_err(|e| e.to_string())
}

fn parse_cycles(n: usize, line: &str) -> Result<Permutation, String> {
    let mut cycles = Vec::new();
    let compact: String = line.chars().filter(|c| !c.is_whitespace()).collect();
    if compact == "()" {
        return Ok(Permutation::identity(n));
    }
    let mut rest = compact.as_str();
    while !rest.is_empty() {
        let Some(body) = rest.strip_prefix('(') else {
            return Err(format!("unexpected text `{rest}`"));
        };
        let close = body.find(')').ok_or("unterminated cycle")?;
        let cycle: Vec<usize> = body[..close]
            .split(',')
            .map(|w| match w.parse::<usize>() {
                Ok(x) if x >= 1 && x <= n => Ok(x - 1),
                _ => Err(format!("bad point `{w}` for degree {n}")),
            })
            .collect::<Result<_, _>>()?;
        cycles.push(cycle);
        rest = &body[close + 1..];
    }
    Permutation::from_cycles(n, &cycles).map_err(|e| e.to_string())
}

pub fn write_generators(gens: &[Permutation], format: GeneratorFormat) -> String {
    let degree = gens.first().map(|g| g.degree()).unwrap_or(0);
    let mut out = format!("perm {degree}\n");
    for g in gens {
        match format {
            GeneratorFormat::Images => {
                let words: Vec<String> = g.images().iter().map(|&x| (x as usize + 1).to_string()).collect();
                out.push_str(&words.join(" "));
            }
            GeneratorFormat::Cycles => out.push_str(&g.to_string()),
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_line_styles() {
        let text = "# S4\nperm 4\n2 1 3 4  # a transposition\n(1,2,3,4)\n";
        let gens = parse_generators(text).unwrap();
        assert_eq!(gens.len(), 2);
        assert_eq!(gens[0].to_string(), "(1,2)");
        assert_eq!(gens[1].order(), 4);
    }

    #[test]
    fn round_trips_through_both_formats() {
        let gens = parse_generators("perm 6\n(1,2)(3,4,5)\n(2,6)\n").unwrap();
        for fmt in [GeneratorFormat::Images, GeneratorFormat::Cycles] {
            assert_eq!(parse_generators(&write_generators(&gens, fmt)).unwrap(), gens);
        }
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = parse_generators("perm 3\n1 2\n").unwrap_err();
        assert!(matches!(err, PermError::Parse { line: 2, .. }));
        assert!(parse_generators("3 1 2\n").is_err());
        assert!(parse_generators("perm 3\n(1,4)\n").is_err());
        assert!(parse_generators("perm 3\n(1,2)(2,3)\n").is_err());
        assert!(parse_generators("").is_err());
    }
}
