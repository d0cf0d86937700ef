//! Permutations of `{0, .., n-1}` and the 1-based cycle notation used for input and output.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A bijection on `{0, .., n-1}`; `images[i]` is the image of point `i`.
///
/// The derived `Ord` is lexicographic on the image array, which is the canonical element order
/// used everywhere else in the crate.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as u32).collect(),
        }
    }

    /// Builds a permutation from its image array, checking that it is a bijection.
    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        if images.is_empty() {
            return Err(Error::Input("permutation degree must be at least 1".into()));
        }
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            let x = x as usize;
            if x >= n || seen[x] {
                return Err(Error::Input(format!(
                    "image array {images:?} is not a bijection on 0..{n}"
                )));
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    /// Builds a permutation of the given degree from 0-based cycles.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        if degree == 0 {
            return Err(Error::Input("permutation degree must be at least 1".into()));
        }
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut touched = vec![false; degree];
        for cycle in cycles {
            for (k, &p) in cycle.iter().enumerate() {
                if p >= degree {
                    return Err(Error::Input(format!("point {} outside 1..{degree}", p + 1)));
                }
                if touched[p] {
                    return Err(Error::Input(format!(
                        "point {} appears twice in one permutation",
                        p + 1
                    )));
                }
                touched[p] = true;
                images[p] = cycle[(k + 1) % cycle.len()] as u32;
            }
        }
        Ok(Permutation { images })
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn images(&self) -> &[u32] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, point: usize) -> usize {
        self.images[point] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, &x)| i == x as usize)
    }

    /// `self ∘ other`, i.e. the map `i ↦ self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.degree() != other.degree() {
            return Err(Error::Input(format!(
                "cannot compose permutations of degree {} and {}",
                self.degree(),
                other.degree()
            )));
        }
        Ok(self.compose_unchecked(other))
    }

    pub(crate) fn compose_unchecked(&self, other: &Permutation) -> Permutation {
        Permutation {
            images: other
                .images
                .iter()
                .map(|&j| self.images[j as usize])
                .collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0u32; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x as usize] = i as u32;
        }
        Permutation { images }
    }

    /// Disjoint cycles of length at least two, each starting at its smallest point, ordered by
    /// that point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut p = self.apply(start);
            while p != start {
                seen[p] = true;
                cycle.push(p);
                p = self.apply(p);
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }

    /// Least `k ≥ 1` with `self^k = 1`: the lcm of the cycle lengths.
    pub fn order(&self) -> u64 {
        self.cycles()
            .iter()
            .fold(1u64, |acc, c| acc.lcm(&(c.len() as u64)))
    }

    /// Parses a single permutation in 1-based cycle notation, e.g. `(1,2)(3,4)` or `()`.
    pub fn parse(degree: usize, text: &str) -> Result<Permutation> {
        parse_one(degree, text, 0)
    }

    /// Renders in 1-based cycle notation; the identity renders as `()`.
    pub fn to_cycle_string(&self) -> String {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return "()".to_string();
        }
        let mut s = String::new();
        for c in cycles {
            s.push('(');
            let pts: Vec<String> = c.iter().map(|p| (p + 1).to_string()).collect();
            s.push_str(&pts.join(","));
            s.push(')');
        }
        s
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_cycle_string())
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_cycle_string())
    }
}

/// `a ∘ b` as a free function.
pub fn compose(a: &Permutation, b: &Permutation) -> Result<Permutation> {
    a.compose(b)
}

/// Least `k ≥ 1` with `g^k = 1`.
pub fn element_order(g: &Permutation) -> u64 {
    g.order()
}

/// Parses `;`-separated generators, e.g. `(1,2)(3,4);(1,2,3)`.
///
/// An empty string (or only whitespace) yields no generators.
pub fn parse_generators(degree: usize, text: &str) -> Result<Vec<Permutation>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut offset = 0;
    for part in text.split(';') {
        out.push(parse_one(degree, part, offset)?);
        offset += part.len() + 1;
    }
    Ok(out)
}

/// Renders generators back into the `;`-separated notation accepted by [`parse_generators`].
pub fn format_generators(gens: &[Permutation]) -> String {
    gens.iter()
        .map(Permutation::to_cycle_string)
        .collect::<Vec<_>>()
        .join(";")
}

fn parse_one(degree: usize, text: &str, offset: usize) -> Result<Permutation> {
    let err = |pos: usize, msg: &str| Error::Input(format!("at position {}: {msg}", offset + pos));
    let bytes = text.as_bytes();
    let mut cycles = Vec::new();
    let mut i = 0;
    let mut saw_paren = false;
    while i < bytes.len() {
        match bytes[i] {
            b' ' | b'\t' => i += 1,
            b'(' => {
                saw_paren = true;
                let close = text[i..]
                    .find(')')
                    .map(|k| i + k)
                    .ok_or_else(|| err(i, "unclosed '('"))?;
                let body = &text[i + 1..close];
                if !body.trim().is_empty() {
                    let mut cycle = Vec::new();
                    let mut pos = i + 1;
                    for tok in body.split(',') {
                        let t = tok.trim();
                        let p: usize = t
                            .parse()
                            .map_err(|_| err(pos, &format!("expected a point, found {t:?}")))?;
                        if p == 0 || p > degree {
                            return Err(err(pos, &format!("point {p} outside 1..{degree}")));
                        }
                        cycle.push(p - 1);
                        pos += tok.len() + 1;
                    }
                    cycles.push(cycle);
                }
                i = close + 1;
            }
            c => return Err(err(i, &format!("unexpected character {:?}", c as char))),
        }
    }
    if !saw_paren {
        return Err(err(0, "expected a cycle such as (1,2)"));
    }
    Permutation::from_cycles(degree, &cycles).map_err(|e| match e {
        Error::Input(m) => Error::Input(format!("at position {offset}: {m}")),
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(deg: usize, s: &str) -> Permutation {
        Permutation::parse(deg, s).unwrap()
    }

    #[test]
    fn compose_examples() {
        let id = Permutation::identity(3);
        let t = p(3, "(1,2)");
        assert_eq!(t.compose(&id).unwrap(), t);
        assert!(t.compose(&t).unwrap().is_identity());
        // (123)(123): 1->2->3, 2->3->1, 3->1->2, i.e. (132)
        let c = p(3, "(1,2,3)");
        assert_eq!(c.compose(&c).unwrap(), p(3, "(1,3,2)"));
    }

    #[test]
    fn compose_is_right_to_left() {
        // (12)∘(23): 3 -> 2 -> 1, so 3 maps to 1.
        let a = p(3, "(1,2)");
        let b = p(3, "(2,3)");
        assert_eq!(a.compose(&b).unwrap().apply(2), 0);
    }

    #[test]
    fn compose_degree_mismatch() {
        let a = Permutation::identity(3);
        let b = Permutation::identity(4);
        assert!(matches!(a.compose(&b), Err(Error::Input(_))));
    }

    #[test]
    fn orders() {
        assert_eq!(element_order(&Permutation::identity(4)), 1);
        assert_eq!(element_order(&p(4, "(1,2)(3,4)")), 2);
        assert_eq!(element_order(&p(4, "(1,2,3,4)")), 4);
        assert_eq!(element_order(&p(5, "(1,2)(3,4,5)")), 6);
    }

    #[test]
    fn cycle_notation_round_trip() {
        let gens = parse_generators(4, "(1,2)(3,4);(1,2,3)").unwrap();
        assert_eq!(gens.len(), 2);
        assert_eq!(format_generators(&gens), "(1,2)(3,4);(1,2,3)");
        assert_eq!(p(4, "()").to_cycle_string(), "()");
        assert_eq!(p(4, " (3, 1) ").to_cycle_string(), "(1,3)");
    }

    #[test]
    fn parse_errors_carry_positions() {
        let e = parse_generators(3, "(1,2);(1,4)").unwrap_err();
        assert!(e.to_string().contains("position"), "{e}");
        assert!(parse_generators(3, "(1,2").is_err());
        assert!(parse_generators(3, "(1,1)").is_err());
        assert!(parse_generators(3, "x").is_err());
        assert!(Permutation::from_images(vec![0, 0]).is_err());
    }
}
