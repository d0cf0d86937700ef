//! Group strings: catalog tokens, raw generators, and `x`-separated direct products.

use latspec_core::{generate_group, parse_generators, Error, FiniteGroup, Permutation, Result};

/// Groups that a closed formula is known for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Psl(u64),
    Pgl(u64),
}

#[derive(Clone, Debug)]
pub struct ParsedGroup {
    pub text: String,
    pub group: FiniteGroup,
    pub family: Option<Family>,
    /// Messages for stderr, e.g. how a dihedral token was read.
    pub notes: Vec<String>,
}

/// One factor before products are formed: degree and generators.
struct Factor {
    degree: usize,
    gens: Vec<Permutation>,
    family: Option<Family>,
    note: Option<String>,
}

fn err(pos: usize, msg: impl Into<String>) -> Error {
    Error::Input(format!("group spec at position {pos}: {}", msg.into()))
}

fn cycles(degree: usize, cs: &[&[usize]]) -> Permutation {
    let cs: Vec<Vec<usize>> = cs
        .iter()
        .map(|c| c.iter().map(|&x| x - 1).collect())
        .collect();
    Permutation::from_cycles(degree, &cs).expect("fixed generator table")
}

fn cyclic(n: usize) -> Factor {
    let n = n.max(1);
    let c: Vec<usize> = (1..=n).collect();
    Factor {
        degree: n,
        gens: if n > 1 {
            vec![cycles(n, &[&c])]
        } else {
            vec![]
        },
        family: None,
        note: None,
    }
}

/// Dihedral group of order `2n`.
fn dihedral(n: usize) -> Factor {
    match n {
        1 => cyclic(2),
        2 => Factor {
            degree: 4,
            gens: vec![cycles(4, &[&[1, 2]]), cycles(4, &[&[3, 4]])],
            family: None,
            note: None,
        },
        _ => {
            let rot: Vec<usize> = (1..=n).collect();
            let refl: Vec<Vec<usize>> = (2..=n)
                .filter_map(|i| {
                    let j = n + 2 - i;
                    (i < j).then(|| vec![i, j])
                })
                .collect();
            let refl: Vec<&[usize]> = refl.iter().map(|c| c.as_slice()).collect();
            Factor {
                degree: n,
                gens: vec![cycles(n, &[&rot]), cycles(n, &refl)],
                family: None,
                note: None,
            }
        }
    }
}

fn symmetric(n: usize) -> Factor {
    let n = n.max(1);
    let mut gens = Vec::new();
    if n >= 2 {
        let all: Vec<usize> = (1..=n).collect();
        gens.push(cycles(n, &[&[1, 2]]));
        if n > 2 {
            gens.push(cycles(n, &[&all]));
        }
    }
    Factor {
        degree: n,
        gens,
        family: None,
        note: None,
    }
}

fn alternating(n: usize) -> Factor {
    let n = n.max(1);
    let gens = (3..=n).map(|i| cycles(n, &[&[1, 2, i]])).collect();
    Factor {
        degree: n,
        gens,
        family: None,
        note: None,
    }
}

fn quaternion() -> Factor {
    // left-regular action on eight points
    Factor {
        degree: 8,
        gens: vec![
            cycles(8, &[&[1, 2, 5, 6], &[3, 4, 7, 8]]),
            cycles(8, &[&[1, 3, 5, 7], &[2, 8, 6, 4]]),
        ],
        family: None,
        note: None,
    }
}

/// Modular group of order `2m` with `m` a power of two, acting on `Z_m` by `x ↦ x + 1` and
/// `x ↦ (1 + m/2)x`.
fn modular(order: usize) -> Option<Factor> {
    if order < 16 || !order.is_power_of_two() {
        return None;
    }
    let m = order / 2;
    let a: Vec<u32> = (0..m).map(|x| ((x + 1) % m) as u32).collect();
    let b: Vec<u32> = (0..m).map(|x| ((x * (1 + m / 2)) % m) as u32).collect();
    Some(Factor {
        degree: m,
        gens: vec![
            Permutation::from_images(a).expect("translation"),
            Permutation::from_images(b).expect("unit multiplication"),
        ],
        family: None,
        note: None,
    })
}

/// Action of `PSL(2,p)` (or `PGL(2,p)` when `general`) on the projective line over `Z_p`.
/// Point `p` stands for infinity.
fn projective_line(p: usize, general: bool) -> Factor {
    let inf = p;
    let inv = |x: usize| (1..p).find(|y| x * y % p == 1).expect("p prime");
    let t: Vec<u32> = (0..=p)
        .map(|x| if x == inf { inf } else { (x + 1) % p } as u32)
        .collect();
    let s: Vec<u32> = (0..=p)
        .map(|x| match x {
            _ if x == inf => 0,
            0 => inf,
            _ => (p - inv(x)) % p,
        } as u32)
        .collect();
    let mut gens = vec![
        Permutation::from_images(t).expect("translation"),
        Permutation::from_images(s).expect("inversion"),
    ];
    if general {
        let root = (2..p)
            .find(|&a| (1..p - 1).all(|k| (0..k).fold(1, |acc, _| acc * a % p) != 1))
            .expect("primitive root");
        let d: Vec<u32> = (0..=p)
            .map(|x| if x == inf { inf } else { x * root % p } as u32)
            .collect();
        gens.push(Permutation::from_images(d).expect("scaling"));
    }
    Factor {
        degree: p + 1,
        gens,
        family: None,
        note: None,
    }
}

fn psl(q: u64, pos: usize) -> Result<Factor> {
    let mut f = match q {
        2 => symmetric(3),
        3 => alternating(4),
        4 => alternating(5),
        5 | 7 => projective_line(q as usize, false),
        _ => {
            latspec_core::PrimePower::new(q)
                .map_err(|_| err(pos, format!("{q} is not a prime power")))?;
            return Err(err(
                pos,
                format!("PSL(2,{q}) is out of enumeration budget (supported q: 2, 3, 4, 5, 7)"),
            ));
        }
    };
    f.family = Some(Family::Psl(q));
    Ok(f)
}

fn elementary(p: u64, k: u32, pos: usize) -> Result<Factor> {
    if !latspec_core::group::is_prime(p) {
        return Err(err(pos, format!("{p} is not prime")));
    }
    let mut parts = Vec::new();
    for _ in 0..k {
        parts.push(cyclic(p as usize));
    }
    if parts.is_empty() {
        parts.push(cyclic(1));
    }
    Ok(product(parts))
}

fn product(factors: Vec<Factor>) -> Factor {
    if factors.len() == 1 {
        return factors.into_iter().next().unwrap();
    }
    let degree: usize = factors.iter().map(|f| f.degree).sum();
    let mut gens = Vec::new();
    let mut offset = 0;
    for f in &factors {
        for g in &f.gens {
            let images: Vec<u32> = (0..degree)
                .map(|x| {
                    if x >= offset && x < offset + f.degree {
                        (offset + g.apply(x - offset)) as u32
                    } else {
                        x as u32
                    }
                })
                .collect();
            gens.push(Permutation::from_images(images).expect("block permutation"));
        }
        offset += f.degree;
    }
    Factor {
        degree,
        gens,
        family: None,
        note: None,
    }
}

fn number(s: &str, pos: usize) -> Result<u64> {
    s.parse::<u64>()
        .map_err(|_| err(pos, format!("expected a number, found {s:?}")))
}

fn factor(tok: &str, pos: usize) -> Result<Factor> {
    if let Some(rest) = tok.strip_prefix("perm") {
        let (deg, gens) = rest
            .split_once(':')
            .ok_or_else(|| err(pos, "expected perm<degree>:<generators>"))?;
        let degree = number(deg, pos + 4)? as usize;
        if degree == 0 {
            return Err(err(pos + 4, "degree must be at least 1"));
        }
        let gens =
            parse_generators(degree, gens).map_err(|e| err(pos + 5 + deg.len(), e.to_string()))?;
        return Ok(Factor {
            degree,
            gens,
            family: None,
            note: None,
        });
    }
    let upper = tok.to_ascii_uppercase();
    if let Some(inner) = upper
        .strip_prefix("PSL(2,")
        .and_then(|s| s.strip_suffix(')'))
    {
        return psl(number(inner, pos + 6)?, pos + 6);
    }
    if let Some(inner) = upper
        .strip_prefix("PGL(2,")
        .and_then(|s| s.strip_suffix(')'))
    {
        let q = number(inner, pos + 6)?;
        if q != 3 {
            return Err(err(
                pos + 6,
                format!("PGL(2,{q}) is out of enumeration budget (supported q: 3)"),
            ));
        }
        let mut f = projective_line(3, true);
        f.family = Some(Family::Pgl(3));
        return Ok(f);
    }
    match tok {
        "Q8" => return Ok(quaternion()),
        "V4" => return Ok(dihedral(2)),
        _ => {}
    }
    if let Some(n) = tok.strip_prefix("Dih") {
        let order = number(n, pos + 3)?;
        if order == 0 || order % 2 == 1 {
            return Err(err(pos + 3, "dihedral order must be even"));
        }
        let mut f = dihedral(order as usize / 2);
        f.note = Some(format!(
            "{tok}: dihedral group of order {order} (D{} in the order-2n naming)",
            order / 2
        ));
        return Ok(f);
    }
    let split = tok
        .find(|c: char| c.is_ascii_digit())
        .ok_or_else(|| err(pos, format!("unknown group token {tok:?}")))?;
    let (head, tail) = tok.split_at(split);
    match head {
        "C" => Ok(cyclic(check_size(number(tail, pos + 1)?, pos + 1)?)),
        "D" => {
            let n = check_size(number(tail, pos + 1)?, pos + 1)?;
            let mut f = dihedral(n);
            f.note = Some(format!(
                "{tok}: dihedral group of order {} (Dih{} in the by-order naming)",
                2 * n,
                2 * n
            ));
            Ok(f)
        }
        "S" => Ok(symmetric(check_size(number(tail, pos + 1)?, pos + 1)?)),
        "A" => Ok(alternating(check_size(number(tail, pos + 1)?, pos + 1)?)),
        "M" => modular(number(tail, pos + 1)? as usize).ok_or_else(|| {
            err(
                pos + 1,
                "modular group order must be a power of two, at least 16",
            )
        }),
        "E" => {
            if let Some((p, k)) = tail.split_once('^') {
                let k = number(k, pos + 2 + p.len())?;
                elementary(number(p, pos + 1)?, k as u32, pos + 1)
            } else {
                let order = number(tail, pos + 1)?;
                let pp = latspec_core::PrimePower::new(order)
                    .map_err(|_| err(pos + 1, format!("{order} is not a prime power")))?;
                elementary(pp.p, pp.n, pos + 1)
            }
        }
        _ => Err(err(pos, format!("unknown group token {tok:?}"))),
    }
}

fn check_size(n: u64, pos: usize) -> Result<usize> {
    if n == 0 || n > 64 {
        return Err(err(pos, format!("size {n} outside 1..=64")));
    }
    Ok(n as usize)
}

/// Splits on `x` outside parentheses, keeping byte offsets.
fn split_product(text: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            'x' if depth == 0 => {
                out.push((start, &text[start..i]));
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push((start, &text[start..]));
    out
}

pub fn parse_group_spec(text: &str) -> Result<ParsedGroup> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(err(0, "empty group spec"));
    }
    let pieces = if trimmed.starts_with("perm") {
        vec![(0, trimmed)]
    } else {
        split_product(trimmed)
    };
    let mut factors = Vec::new();
    for (pos, tok) in pieces {
        if tok.is_empty() {
            return Err(err(pos, "empty factor"));
        }
        factors.push(factor(tok, pos)?);
    }
    let notes: Vec<String> = factors.iter().filter_map(|f| f.note.clone()).collect();
    let family = if factors.len() == 1 {
        factors[0].family
    } else {
        None
    };
    let f = product(factors);
    let group = generate_group(f.degree, &f.gens)?;
    Ok(ParsedGroup {
        text: trimmed.to_string(),
        group,
        family,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn order(s: &str) -> usize {
        parse_group_spec(s).unwrap().group.order()
    }

    #[test]
    fn orders() {
        let cases = [
            ("C1", 1),
            ("C12", 12),
            ("D1", 2),
            ("D2", 4),
            ("D4", 8),
            ("Dih16", 16),
            ("S4", 24),
            ("A4", 12),
            ("A5", 60),
            ("Q8", 8),
            ("V4", 4),
            ("E8", 8),
            ("E3^3", 27),
            ("E9", 9),
            ("M16", 16),
            ("PSL(2,2)", 6),
            ("PSL(2,3)", 12),
            ("PSL(2,4)", 60),
            ("PSL(2,5)", 60),
            ("PSL(2,7)", 168),
            ("PGL(2,3)", 24),
            ("C2xC2xC3", 12),
            ("perm4:(1,2,3,4);(1,3)", 8),
            ("C4xperm3:(1,2)", 8),
        ];
        for (s, n) in cases {
            assert_eq!(order(s), n, "{s}");
        }
    }

    #[test]
    fn dihedral_notes() {
        let p = parse_group_spec("D4").unwrap();
        assert_eq!(p.notes.len(), 1);
        assert!(p.notes[0].contains("order 8"));
        assert!(parse_group_spec("S4").unwrap().notes.is_empty());
    }

    #[test]
    fn families() {
        assert_eq!(
            parse_group_spec("PSL(2,5)").unwrap().family,
            Some(Family::Psl(5))
        );
        assert_eq!(
            parse_group_spec("PGL(2,3)").unwrap().family,
            Some(Family::Pgl(3))
        );
        assert_eq!(parse_group_spec("PSL(2,5)xC1").unwrap().family, None);
    }

    #[test]
    fn errors() {
        for bad in [
            "",
            "Z3",
            "C",
            "Dih7",
            "PSL(2,8)",
            "PSL(2,6)",
            "PGL(2,5)",
            "perm3:(1,4)",
            "E6",
            "M8",
            "C2x",
        ] {
            assert!(
                matches!(parse_group_spec(bad), Err(Error::Input(_))),
                "{bad}"
            );
        }
        let e = parse_group_spec("PSL(2,8)").unwrap_err().to_string();
        assert!(e.contains("out of enumeration budget"), "{e}");
        let e = parse_group_spec("C2xZ5").unwrap_err().to_string();
        assert!(e.contains("position 3"), "{e}");
    }

    #[test]
    fn projective_groups_match_small_models() {
        use latspec_core::TypeSignature;
        let label = |s: &str| TypeSignature::of_group(&parse_group_spec(s).unwrap().group).label();
        assert_eq!(label("PSL(2,5)"), "A5");
        assert_eq!(label("PSL(2,7)"), "PSL(2,7)");
        assert_eq!(label("PGL(2,3)"), "S4");
    }
}
