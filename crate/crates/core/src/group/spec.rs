//! Group spec language:
//!
//! ```text
//! spec := cyclic:n | dihedral:n | dstar:n | dihof:<spec> | ea:q | aff:q
//!       | frob:q:d | prod:<spec>,<spec>
//! ```
//!
//! `prod` nests by recursive descent, so `prod:prod:cyclic:2,cyclic:2,cyclic:2`
//! is `(C2 × C2) × C2`.

use super::{
    affine, cyclic, dihedral, direct_product, dstar, elementary_abelian, frobenius_subgroup,
    generalized_dihedral, FiniteGroup,
};
use crate::error::{Error, Result};

pub fn parse_group(spec: &str) -> Result<FiniteGroup> {
    let spec = spec.trim();
    let mut p = Parser { src: spec, pos: 0 };
    let g = p.group()?;
    if p.pos != spec.len() {
        return Err(p.error(format!("trailing input `{}`", &spec[p.pos..])));
    }
    Ok(g)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, reason: impl Into<String>) -> Error {
        Error::Spec { spec: self.src.to_string(), reason: reason.into() }
    }

    fn word(&mut self) -> &str {
        let rest = &self.src[self.pos..];
        let end = rest.find(|c: char| !c.is_ascii_alphabetic()).unwrap_or(rest.len());
        self.pos += end;
        &rest[..end]
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.src[self.pos..].starts_with(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            Err(self.error(format!("expected `{c}` at offset {}", self.pos)))
        }
    }

    fn number(&mut self) -> Result<usize> {
        let rest = &self.src[self.pos..];
        let end = rest.find(|c: char| !c.is_ascii_digit()).unwrap_or(rest.len());
        if end == 0 {
            return Err(self.error(format!("expected a number at offset {}", self.pos)));
        }
        self.pos += end;
        rest[..end].parse().map_err(|_| self.error("number out of range"))
    }

    fn group(&mut self) -> Result<FiniteGroup> {
        let kind = self.word().to_string();
        self.expect(':')?;
        let built = match kind.as_str() {
            "cyclic" => cyclic(self.number()?),
            "dihedral" => dihedral(self.number()?),
            "dstar" => dstar(self.number()?),
            "ea" => elementary_abelian(self.number()?),
            "aff" => affine(self.number()?),
            "frob" => {
                let q = self.number()?;
                self.expect(':')?;
                frobenius_subgroup(q, self.number()?)
            }
            "dihof" => {
                let base = self.group()?;
                generalized_dihedral(&base)
            }
            "prod" => {
                let a = self.group()?;
                self.expect(',')?;
                let b = self.group()?;
                direct_product(&a, &b)
            }
            other => return Err(self.error(format!("unknown family `{other}`"))),
        };
        built.map_err(|e| match e {
            Error::Spec { .. } => e,
            other => self.error(other.to_string()),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_every_family() {
        for (spec, order) in [
            ("cyclic:5", 5),
            ("dihedral:4", 8),
            ("dstar:3", 12),
            ("dihof:cyclic:3", 6),
            ("ea:8", 8),
            ("aff:4", 12),
            ("frob:7:3", 21),
            ("prod:cyclic:2,cyclic:2", 4),
            ("prod:prod:cyclic:2,cyclic:2,cyclic:2", 8),
            ("dihof:prod:cyclic:3,cyclic:3", 18),
            ("prod:aff:3,cyclic:2", 12),
        ] {
            let g = parse_group(spec).unwrap();
            assert_eq!(g.order(), order, "{spec}");
            assert_eq!(g.spec(), spec);
        }
    }

    #[test]
    fn rejects_malformed_specs() {
        for bad in ["", "cyclic", "cyclic:", "cyclic:x", "torus:3", "prod:cyclic:2", "cyclic:3junk", "dstar:4", "frob:7:4", "ea:6"] {
            assert!(matches!(parse_group(bad), Err(Error::Spec { .. })), "{bad}");
        }
    }
}
