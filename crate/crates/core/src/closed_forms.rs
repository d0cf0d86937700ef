//! Closed formulas for factorization numbers of `PSL(2,q)` and `PGL(2,q)`, the Dickson list of
//! subgroups of `PSL(2,q)`, and two Möbius values. None of these look at a lattice; they exist to
//! be checked against brute force.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Pow, Zero};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::group::is_prime;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimePower {
    pub p: u64,
    pub n: u32,
    pub q: u64,
}

impl PrimePower {
    /// Factors `q` as `pⁿ`.
    pub fn new(q: u64) -> Result<Self> {
        if q < 2 {
            return Err(Error::Input(format!("{q} is not a prime power")));
        }
        let p = (2..=q)
            .find(|d| q.is_multiple_of(*d))
            .expect("q ≥ 2 has a prime factor");
        let (mut rest, mut n) = (q, 0);
        while rest % p == 0 {
            rest /= p;
            n += 1;
        }
        if rest != 1 {
            return Err(Error::Input(format!("{q} is not a prime power")));
        }
        Ok(PrimePower { p, n, q })
    }

    pub fn from_parts(p: u64, n: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Input(format!("{p} is not prime")));
        }
        if n == 0 {
            return Err(Error::Input("exponent must be at least 1".into()));
        }
        let q = p
            .checked_pow(n)
            .ok_or_else(|| Error::Input(format!("{p}^{n} overflows")))?;
        Ok(PrimePower { p, n, q })
    }

    /// `q(q² − 1)`, twice the order of `PSL(2,q)` for odd `q`.
    fn cubic(&self) -> BigInt {
        let q = BigInt::from(self.q);
        &q * (&q * &q - 1)
    }
}

impl fmt::Display for PrimePower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.q)
    }
}

const PSL_TABLE: &[(u64, i64)] = &[
    (2, 17),
    (3, 27),
    (5, 237),
    (7, 1141),
    (9, 2033),
    (11, 4935),
    (19, 17223),
    (23, 48261),
    (29, 68799),
    (59, 780695),
];

const PGL_TABLE: &[(u64, i64)] = &[
    (3, 177),
    (5, 1103),
    (7, 3083),
    (9, 4919),
    (11, 15549),
    (13, 14529),
    (17, 31093),
    (19, 58429),
    (23, 111567),
    (25, 99527),
    (27, 144297),
    (29, 192349),
];

/// `F₂(PSL(2,q))` given `|L(PSL(2,q))|`.
///
/// Outside the tabulated values the formula is only stated for `n > 1`; odd primes `q` not in
/// the table are a domain error.
pub fn f2_psl_closed(q: PrimePower, lattice_size: u64) -> Result<BigInt> {
    if let Some(&(_, v)) = PSL_TABLE.iter().find(|&&(t, _)| t == q.q) {
        return Ok(BigInt::from(v));
    }
    let l2 = BigInt::from(lattice_size) * 2;
    if q.p == 2 {
        return Ok(l2 + q.cubic() * 2 - 1);
    }
    if q.n == 1 {
        return Err(Error::Domain(format!(
            "no closed form for F2(PSL(2,{q})) with q an odd prime outside the table"
        )));
    }
    if ((q.q - 1) / 2) % 2 == 1 {
        Ok(l2 + q.cubic() - 1)
    } else {
        Ok(l2 - 1)
    }
}

/// `F₂(PGL(2,q))` given `|L(PGL(2,q))|` and `|L(PSL(2,q))|`. Requires odd `q`.
pub fn f2_pgl_closed(q: PrimePower, lattice_g: u64, lattice_m: u64) -> Result<BigInt> {
    if q.p == 2 {
        return Err(Error::Domain(
            "PGL(2,q) = PSL(2,q) for even q; use the PSL formula".into(),
        ));
    }
    if let Some(&(_, v)) = PGL_TABLE.iter().find(|&&(t, _)| t == q.q) {
        return Ok(BigInt::from(v));
    }
    let coeff = if q.n.is_multiple_of(2) || q.p % 4 == 1 {
        3
    } else {
        4
    };
    Ok(q.cubic() * coeff + BigInt::from(lattice_g) * 4 - BigInt::from(lattice_m) * 2 - 3)
}

/// `μ(1, G)` for a group of order `pⁿ`.
pub fn mobius_hall(p: u64, n: u32, elementary_abelian: bool) -> Result<BigInt> {
    if !is_prime(p) {
        return Err(Error::Input(format!("{p} is not prime")));
    }
    if !elementary_abelian {
        return Ok(BigInt::zero());
    }
    let k = n as u64 * (n as u64).saturating_sub(1) / 2;
    let magnitude: BigInt = Pow::pow(BigInt::from(p), k);
    Ok(if n.is_multiple_of(2) {
        magnitude
    } else {
        -magnitude
    })
}

/// Value of `μ(1, Sₙ)` read off the three published branches.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetricMobius {
    pub n: u64,
    #[serde(with = "crate::bigstr")]
    pub value: BigInt,
    /// `"i"`, `"ii"`, or `"iii"`.
    pub branch: String,
    /// Always true: the branches are taken as written and should be checked by recursion.
    pub transcribed: bool,
    /// Other applicable branches that give a different value.
    #[serde(with = "crate::bigstr::pairs")]
    pub conflicts: Vec<(String, BigInt)>,
}

/// `μ(1, Sₙ)`. Branch (i) applies to primes and branch (ii) to everything else; branch (iii)
/// (`n` a power of two) is reported as a conflict when it disagrees.
pub fn mobius_symmetric(n: u64) -> Result<SymmetricMobius> {
    if n < 2 {
        return Err(Error::Input("n must be at least 2".into()));
    }
    let fact: BigInt = (1..=n).map(BigInt::from).product();
    let half: BigInt = &fact / 2;
    let mut branches: Vec<(String, BigInt)> = Vec::new();
    if is_prime(n) {
        let v = if (n - 1).is_multiple_of(2) {
            half.clone()
        } else {
            -half.clone()
        };
        branches.push(("i".into(), v));
    } else {
        let v = if is_prime(n - 1) && (n - 1) % 4 == 3 {
            -fact.clone()
        } else if n == 22 {
            half.clone()
        } else {
            -half.clone()
        };
        branches.push(("ii".into(), v));
    }
    if n.is_power_of_two() {
        branches.push(("iii".into(), -half));
    }
    let (branch, value) = branches.remove(0);
    let conflicts = branches.into_iter().filter(|(_, v)| *v != value).collect();
    Ok(SymmetricMobius {
        n,
        value,
        branch,
        transcribed: true,
        conflicts,
    })
}

/// Count of one Dickson family, or the marker that no explicit count is given.
#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(untagged)]
pub enum CensusCount {
    Count(u64),
    NotStated(String),
}

impl Serialize for CensusCount {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            CensusCount::Count(c) => s.serialize_u64(*c),
            CensusCount::NotStated(_) => s.serialize_str("not stated"),
        }
    }
}

impl CensusCount {
    pub fn count(&self) -> Option<u64> {
        match self {
            CensusCount::Count(c) => Some(*c),
            CensusCount::NotStated(_) => None,
        }
    }
}

/// One line of the Dickson list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusEntry {
    /// Roman numeral of the family, `"i"` to `"viii"`.
    pub family: String,
    /// The divisor `d` or exponent `m`, where the family has one.
    pub parameter: Option<u64>,
    /// Isomorphism-type label in the notation of [`crate::iso::TypeSignature::label`].
    #[serde(rename = "type")]
    pub type_label: String,
    pub count: CensusCount,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

impl CensusEntry {
    fn new(family: &str, parameter: Option<u64>, type_label: String, count: CensusCount) -> Self {
        CensusEntry {
            family: family.into(),
            parameter,
            type_label,
            count,
            note: None,
        }
    }

    fn with_note(mut self, note: &str) -> Self {
        self.note = Some(note.into());
        self
    }
}

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

fn dihedral_label(order: u64) -> String {
    match order {
        4 => "V4".into(),
        6 => "S3".into(),
        _ => format!("Dih{order}"),
    }
}

fn psl_label(q: u64) -> String {
    match q {
        2 => "S3".into(),
        3 => "A4".into(),
        4 | 5 => "A5".into(),
        _ => format!("PSL(2,{q})"),
    }
}

fn elementary_label(p: u64, m: u32) -> String {
    match (p, m) {
        (_, 0) => "1".into(),
        (_, 1) => format!("C{p}"),
        (2, 2) => "V4".into(),
        _ => format!("E{}", p.pow(m)),
    }
}

fn exact_div(num: &BigInt, den: u64) -> Option<u64> {
    let (quo, rem) = num.div_rem(&BigInt::from(den));
    if rem.is_zero() {
        u64::try_from(quo).ok()
    } else {
        None
    }
}

/// The Dickson list for `PSL(2,q)`, `q ≥ 4`.
///
/// For odd `q` the cyclic family pairs a divisor of `(q ± 1)/2` with the count `q(q ∓ 1)/2`. For
/// even `q` the divisors run over `q ± 1` and the dihedral count is `q(q² − 1)/(2d)`. Families
/// (vii) and (viii) carry no counts.
pub fn dickson_census(q: PrimePower) -> Result<Vec<CensusEntry>> {
    if q.q < 4 {
        return Err(Error::Input(format!("the census needs q ≥ 4, got {q}")));
    }
    let qq = q.q;
    let cubic = q.cubic();
    let stated = |c: Option<u64>| {
        c.map_or_else(
            || CensusCount::NotStated("non-integral".into()),
            CensusCount::Count,
        )
    };
    let mut out = Vec::new();
    let (minus, plus, dih_den) = if q.p == 2 {
        (qq - 1, qq + 1, 2)
    } else {
        ((qq - 1) / 2, qq.div_ceil(2), 4)
    };

    // (i) cyclic
    let mut cyclic: Vec<(u64, u64)> = Vec::new();
    for d in divisors(minus).into_iter().filter(|&d| d > 1) {
        cyclic.push((d, qq * (qq + 1) / 2));
    }
    for d in divisors(plus).into_iter().filter(|&d| d > 1) {
        cyclic.push((d, qq * (qq - 1) / 2));
    }
    cyclic.sort();
    for (d, c) in cyclic {
        out.push(CensusEntry::new(
            "i",
            Some(d),
            format!("C{d}"),
            CensusCount::Count(c),
        ));
    }

    // (ii) dihedral
    let mut dihedral: Vec<u64> = divisors(minus)
        .into_iter()
        .chain(divisors(plus))
        .filter(|&d| d > 2)
        .collect();
    dihedral.sort();
    for d in dihedral {
        let c = exact_div(&cubic, dih_den * d);
        out.push(CensusEntry::new(
            "ii",
            Some(d),
            dihedral_label(2 * d),
            stated(c),
        ));
    }
    if q.p == 2 {
        out.push(
            CensusEntry::new(
                "ii",
                Some(2),
                "V4".into(),
                CensusCount::NotStated("elementary abelian for p = 2".into()),
            )
            .with_note("falls under (vii) when p = 2"),
        );
    } else {
        out.push(CensusEntry::new(
            "ii",
            Some(2),
            "V4".into(),
            stated(exact_div(&cubic, 24)),
        ));
    }

    // (iii) A4
    if q.p == 2 {
        out.push(
            CensusEntry::new(
                "iii",
                None,
                "A4".into(),
                CensusCount::NotStated("non-integral for p = 2".into()),
            )
            .with_note("falls under (viii) when p = 2"),
        );
    } else {
        out.push(CensusEntry::new(
            "iii",
            None,
            "A4".into(),
            stated(exact_div(&cubic, 24)),
        ));
    }

    // (iv) S4, odd q only
    if q.p != 2 && (qq % 8 == 1 || qq % 8 == 7) {
        out.push(CensusEntry::new(
            "iv",
            None,
            "S4".into(),
            stated(exact_div(&cubic, 24)),
        ));
    }

    // (v) A5
    if qq % 10 == 1 || qq % 10 == 9 || (q.p == 2 && qq % 10 == 4) {
        let mut e = CensusEntry::new("v", None, "A5".into(), stated(exact_div(&cubic, 60)));
        if qq == 4 {
            e = e.with_note("A5 is the whole group");
        }
        out.push(e);
    }

    // (vi) subfield groups
    for m in divisors(q.n as u64) {
        let sub = q.p.pow(m as u32);
        let den = BigInt::from(sub) * (BigInt::from(sub) * sub - 1);
        let (quo, rem) = cubic.div_rem(&den);
        let count = if rem.is_zero() {
            CensusCount::Count(u64::try_from(quo).expect("count fits in u64"))
        } else {
            CensusCount::NotStated("non-integral".into())
        };
        let label = if m == q.n as u64 {
            psl_label(qq)
        } else {
            psl_label(sub)
        };
        out.push(CensusEntry::new("vi", Some(m), label, count));
    }

    // (vii) elementary abelian, (viii) semidirect products
    for m in 0..=q.n {
        out.push(CensusEntry::new(
            "vii",
            Some(m as u64),
            elementary_label(q.p, m),
            CensusCount::NotStated("count not stated in source".into()),
        ));
    }
    out.push(CensusEntry::new(
        "viii",
        None,
        format!("E{}:Cd", qq),
        CensusCount::NotStated("count not stated in source".into()),
    ));
    Ok(out)
}

/// One census line set against a brute-force type count.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusCheck {
    pub family: String,
    pub parameter: Option<u64>,
    #[serde(rename = "type")]
    pub type_label: String,
    /// The formula count, if any.
    pub stated: Option<u64>,
    /// The brute-force count of subgroups of this type.
    pub observed: u64,
    /// `None` when there is nothing to compare.
    pub agrees: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

/// Compares a census against brute-force counts keyed by type label.
///
/// Stated counts are checked. Family (vii) takes its counts from `observed`, and family (viii)
/// collects every type that no other line covers.
pub fn compare_census(
    census: &[CensusEntry],
    observed: &BTreeMap<String, u64>,
) -> Vec<CensusCheck> {
    let mut out = Vec::new();
    let mut covered: Vec<&str> = Vec::new();
    for e in census.iter().filter(|e| e.family != "viii") {
        let seen = observed.get(&e.type_label).copied().unwrap_or(0);
        if e.count.count().is_some() || e.family == "vii" {
            covered.push(&e.type_label);
        }
        if e.family == "vii" && seen == 0 {
            continue;
        }
        out.push(CensusCheck {
            family: e.family.clone(),
            parameter: e.parameter,
            type_label: e.type_label.clone(),
            stated: e.count.count(),
            observed: seen,
            agrees: e.count.count().map(|c| c == seen),
            note: if e.family == "vii" {
                Some("filled by brute force".into())
            } else {
                e.note.clone()
            },
        });
    }
    for (label, &n) in observed {
        if !covered.contains(&label.as_str()) {
            out.push(CensusCheck {
                family: "viii".into(),
                parameter: None,
                type_label: label.clone(),
                stated: None,
                observed: n,
                agrees: None,
                note: Some("filled by subtraction".into()),
            });
        }
    }
    out
}

/// Sum of the stated counts, for a rough comparison with `|L|`. Overlapping families make this an
/// upper bound only.
pub fn stated_total(census: &[CensusEntry]) -> u64 {
    census.iter().filter_map(|e| e.count.count()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pp(q: u64) -> PrimePower {
        PrimePower::new(q).unwrap()
    }

    #[test]
    fn prime_powers() {
        assert_eq!(pp(27), PrimePower { p: 3, n: 3, q: 27 });
        assert_eq!(pp(2), PrimePower { p: 2, n: 1, q: 2 });
        assert!(PrimePower::new(12).is_err());
        assert!(PrimePower::new(1).is_err());
        assert!(PrimePower::from_parts(4, 2).is_err());
        assert_eq!(PrimePower::from_parts(5, 2).unwrap().q, 25);
    }

    #[test]
    fn psl_table_and_branches() {
        assert_eq!(f2_psl_closed(pp(2), 6).unwrap(), BigInt::from(17));
        assert_eq!(f2_psl_closed(pp(3), 10).unwrap(), BigInt::from(27));
        assert_eq!(f2_psl_closed(pp(5), 59).unwrap(), BigInt::from(237));
        assert_eq!(f2_psl_closed(pp(59), 0).unwrap(), BigInt::from(780695));
        // PSL(2,4) has the same lattice as PSL(2,5)
        assert_eq!(f2_psl_closed(pp(4), 59).unwrap(), BigInt::from(237));
        // (25 − 1)/2 = 12 is even
        assert_eq!(f2_psl_closed(pp(25), 100).unwrap(), BigInt::from(199));
        // (27 − 1)/2 = 13 is odd
        assert_eq!(
            f2_psl_closed(pp(27), 100).unwrap(),
            BigInt::from(200 + 27 * 728 - 1)
        );
        assert!(matches!(f2_psl_closed(pp(13), 100), Err(Error::Domain(_))));
    }

    #[test]
    fn pgl() {
        assert_eq!(f2_pgl_closed(pp(3), 30, 10).unwrap(), BigInt::from(177));
        assert_eq!(f2_pgl_closed(pp(5), 0, 0).unwrap(), BigInt::from(1103));
        assert_eq!(f2_pgl_closed(pp(7), 0, 0).unwrap(), BigInt::from(3083));
        assert!(matches!(f2_pgl_closed(pp(4), 0, 0), Err(Error::Domain(_))));
        // 31 ≡ 3 mod 4, n odd
        assert_eq!(
            f2_pgl_closed(pp(31), 10, 5).unwrap(),
            BigInt::from(4 * 31 * 960 + 40 - 10 - 3)
        );
        // 37 ≡ 1 mod 4
        assert_eq!(
            f2_pgl_closed(pp(37), 10, 5).unwrap(),
            BigInt::from(3 * 37 * 1368 + 40 - 10 - 3)
        );
    }

    #[test]
    fn hall() {
        assert_eq!(mobius_hall(2, 2, true).unwrap(), BigInt::from(2));
        assert_eq!(mobius_hall(2, 2, false).unwrap(), BigInt::zero());
        assert_eq!(mobius_hall(3, 1, true).unwrap(), BigInt::from(-1));
        assert_eq!(mobius_hall(2, 3, true).unwrap(), BigInt::from(-8));
        assert_eq!(mobius_hall(3, 3, true).unwrap(), BigInt::from(-27));
        assert_eq!(mobius_hall(2, 0, true).unwrap(), BigInt::from(1));
        assert!(mobius_hall(4, 1, true).is_err());
    }

    #[test]
    fn symmetric() {
        let m = mobius_symmetric(3).unwrap();
        assert_eq!((m.value, m.branch.as_str()), (BigInt::from(3), "i"));
        assert_eq!(mobius_symmetric(2).unwrap().value, BigInt::from(-1));
        assert!(mobius_symmetric(2).unwrap().conflicts.is_empty());
        assert_eq!(mobius_symmetric(5).unwrap().value, BigInt::from(60));
        let four = mobius_symmetric(4).unwrap();
        assert_eq!(four.value, BigInt::from(-24));
        assert!(four.transcribed);
        assert_eq!(four.conflicts, vec![("iii".to_string(), BigInt::from(-12))]);
        assert_eq!(mobius_symmetric(6).unwrap().value, BigInt::from(-360));
        // 7 is prime and 3 mod 4, so branches (ii) and (iii) disagree again
        assert_eq!(mobius_symmetric(8).unwrap().conflicts.len(), 1);
        assert!(mobius_symmetric(16).unwrap().conflicts.is_empty());
        assert!(mobius_symmetric(1).is_err());
    }

    fn stated(census: &[CensusEntry], label: &str) -> Vec<u64> {
        census
            .iter()
            .filter(|e| e.type_label == label)
            .filter_map(|e| e.count.count())
            .collect()
    }

    #[test]
    fn census_q5() {
        let c = dickson_census(pp(5)).unwrap();
        assert_eq!(stated(&c, "C2"), vec![15]);
        assert_eq!(stated(&c, "C3"), vec![10]);
        assert_eq!(stated(&c, "V4"), vec![5]);
        assert_eq!(stated(&c, "S3"), vec![10]);
        assert_eq!(stated(&c, "A4"), vec![5]);
        assert_eq!(stated(&c, "A5"), vec![1]);
        assert!(c.iter().all(|e| e.family != "iv" && e.family != "v"));
    }

    #[test]
    fn census_q4() {
        let c = dickson_census(pp(4)).unwrap();
        assert_eq!(stated(&c, "C3"), vec![10]);
        assert_eq!(stated(&c, "C5"), vec![6]);
        assert_eq!(stated(&c, "S3"), vec![10, 10]);
        assert_eq!(stated(&c, "Dih10"), vec![6]);
        assert_eq!(stated(&c, "A5"), vec![1, 1]);
        assert!(stated(&c, "A4").is_empty());
    }

    #[test]
    fn census_q7_and_q9() {
        let c = dickson_census(pp(7)).unwrap();
        assert_eq!(stated(&c, "C2"), vec![21]);
        assert_eq!(stated(&c, "C3"), vec![28]);
        assert_eq!(stated(&c, "C4"), vec![21]);
        assert_eq!(stated(&c, "S3"), vec![28]);
        assert_eq!(stated(&c, "Dih8"), vec![21]);
        assert_eq!(stated(&c, "V4"), vec![14]);
        assert_eq!(stated(&c, "S4"), vec![14]);
        // A6 contains 30 copies of S4 as well
        let c9 = dickson_census(pp(9)).unwrap();
        assert_eq!(stated(&c9, "S4"), vec![30]);
        assert_eq!(stated(&c9, "A4"), vec![30, 30]);
        assert_eq!(stated(&c9, "A5"), vec![12]);
        assert!(dickson_census(pp(3)).is_err());
    }

    #[test]
    fn census_json_shape() {
        let c = dickson_census(pp(5)).unwrap();
        let v = serde_json::to_value(&c).unwrap();
        assert_eq!(v[0]["family"], "i");
        assert_eq!(v[0]["count"], 15);
        let last = v.as_array().unwrap().last().unwrap();
        assert_eq!(last["count"], "not stated");
    }

    #[test]
    fn comparison_fills_the_gaps() {
        let observed: BTreeMap<String, u64> = [
            ("1", 1),
            ("C2", 15),
            ("C3", 10),
            ("C5", 6),
            ("V4", 5),
            ("S3", 10),
            ("Dih10", 6),
            ("A4", 5),
            ("A5", 1),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect();
        let checks = compare_census(&dickson_census(pp(5)).unwrap(), &observed);
        assert!(checks.iter().all(|c| c.agrees != Some(false)), "{checks:?}");
        let filled: Vec<&str> = checks
            .iter()
            .filter(|c| c.family == "viii")
            .map(|c| c.type_label.as_str())
            .collect();
        assert_eq!(filled, vec!["Dih10"]);
        let total: u64 = observed.values().sum();
        assert_eq!(total, 59);
    }
}
