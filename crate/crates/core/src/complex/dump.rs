//! Plain-text complex format:
//!
//! ```text
//! complex <vertex count>
//! type <tag> <name>
//! vertex <id> <tag>
//! simplex <id> <id> ...
//! ```
//!
//! Every live simplex is written, sorted by dimension then vertex ids.

use std::fmt::Write;

use super::{ComplexError, TypeRegistry, TypedComplex};

impl TypedComplex {
    pub fn dump(&self) -> String {
        let mut out = String::new();
        writeln!(out, "complex {}", self.vertex_capacity()).unwrap();
        if self.is_flag_typed() {
            writeln!(out, "flag").unwrap();
        }
        for t in 0..self.registry().len() as u16 {
            writeln!(out, "type {t} {}", self.registry().name(t)).unwrap();
        }
        for (v, t) in self.vertex_types().iter().enumerate() {
            writeln!(out, "vertex {v} {t}").unwrap();
        }
        let mut all: Vec<&[u32]> = self.iter().collect();
        all.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        for s in all {
            let ids: Vec<String> = s.iter().map(u32::to_string).collect();
            writeln!(out, "simplex {}", ids.join(" ")).unwrap();
        }
        out
    }
}

pub fn parse_dump(text: &str) -> Result<TypedComplex, ComplexError> {
    let mut registry = TypeRegistry::new();
    let mut vtypes: Vec<u16> = Vec::new();
    let mut flag = false;
    let mut simplices: Vec<(usize, Vec<u32>)> = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let err = |msg: &str| ComplexError::Parse { line, msg: msg.to_string() };
        let mut parts = raw.split_whitespace();
        let Some(head) = parts.next() else { continue };
        let nums = |parts: std::str::SplitWhitespace| -> Result<Vec<u32>, ComplexError> {
            parts.map(|p| p.parse::<u32>().map_err(|_| err(&format!("bad number {p}")))).collect()
        };
        match head {
            "complex" => {
                let n = nums(parts)?;
                let [n] = n[..] else { return Err(err("expected vertex count")) };
                vtypes = vec![0; n as usize];
            }
            "flag" => flag = true,
            "type" => {
                let tag: u16 = parts.next().and_then(|p| p.parse().ok()).ok_or_else(|| err("bad type tag"))?;
                let name = parts.next().ok_or_else(|| err("missing type name"))?;
                if registry.register(name) != tag {
                    return Err(err("type tags must be listed in order"));
                }
            }
            "vertex" => {
                let n = nums(parts)?;
                let [v, t] = n[..] else { return Err(err("expected id and tag")) };
                if v as usize >= vtypes.len() || t as usize >= registry.len() {
                    return Err(err("vertex or tag out of range"));
                }
                vtypes[v as usize] = t as u16;
            }
            "simplex" => simplices.push((line, nums(parts)?)),
            h if h.starts_with('#') => {}
            other => return Err(err(&format!("unknown record {other}"))),
        }
    }
    let mut c =
        if flag { TypedComplex::new_flag(registry, vtypes) } else { TypedComplex::new(registry, vtypes) };
    for (line, s) in simplices {
        c.insert(&s).map_err(|e| ComplexError::Parse { line, msg: e.to_string() })?;
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let reg = TypeRegistry::with_names(&["P", "L"]);
        let mut c = TypedComplex::new_flag(reg, vec![0, 0, 1]);
        c.insert(&[0, 2]).unwrap();
        c.insert(&[1, 2]).unwrap();
        let text = c.dump();
        let back = parse_dump(&text).unwrap();
        assert_eq!(back.dump(), text);
        assert_eq!(back.content_hash(), c.content_hash());
        assert!(back.is_flag_typed());
    }

    #[test]
    fn bad_input_reports_line() {
        let e = parse_dump("complex 2\ntype 0 v\nsimplex 0 7\n").unwrap_err();
        assert!(matches!(e, ComplexError::Parse { line: 3, .. }));
    }
}
