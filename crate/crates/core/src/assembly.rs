//! Finitely generated abelian groups with formal extension atoms, the case formulas for
//! the groups entering `H2`, and the assembly of `H2` from stem data.

use std::collections::BTreeMap;
use std::fmt;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A group known only up to an extension problem. Never simplified.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    E1,
    E2,
    E3,
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Atom::E1 => "E1",
            Atom::E2 => "E2",
            Atom::E3 => "E3",
        })
    }
}

/// `Z^free ⊕ ⊕ Z/q ⊕ atoms` with every `q` a prime power.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FgAbelianGroup {
    free: u32,
    /// Prime-power orders as `(p, e)`, sorted.
    torsion: Vec<(u64, u32)>,
    atoms: Vec<Atom>,
}

fn factor(mut m: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= m {
        let mut e = 0;
        while m.is_multiple_of(p) {
            m /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

impl FgAbelianGroup {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn free(rank: u32) -> Self {
        FgAbelianGroup {
            free: rank,
            ..Self::default()
        }
    }

    /// `Z/m`, split into its primary parts. `Z/1` is trivial.
    pub fn cyclic(m: u64) -> Self {
        assert!(m > 0, "Z/0 is written as free(1)");
        let mut g = FgAbelianGroup {
            torsion: factor(m),
            ..Self::default()
        };
        g.torsion.sort_unstable();
        g
    }

    pub fn elementary(p: u64, r: usize) -> Self {
        let mut g = Self::zero();
        for _ in 0..r {
            g = g.sum(&Self::cyclic(p));
        }
        g
    }

    pub fn atom(a: Atom) -> Self {
        FgAbelianGroup {
            atoms: vec![a],
            ..Self::default()
        }
    }

    pub fn free_rank(&self) -> u32 {
        self.free
    }

    /// Orders of the cyclic prime-power summands, in canonical order.
    pub fn torsion(&self) -> Vec<u64> {
        self.torsion.iter().map(|&(p, e)| p.pow(e)).collect()
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn is_trivial(&self) -> bool {
        self.free == 0 && self.torsion.is_empty() && self.atoms.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free == 0 && self.atoms.is_empty()
    }

    /// Order of a finite atom-free group.
    pub fn order(&self) -> Option<u64> {
        self.is_finite().then(|| self.torsion().iter().product())
    }

    pub fn sum(&self, other: &FgAbelianGroup) -> FgAbelianGroup {
        let mut torsion = self.torsion.clone();
        torsion.extend_from_slice(&other.torsion);
        torsion.sort_unstable();
        let mut atoms = self.atoms.clone();
        atoms.extend_from_slice(&other.atoms);
        atoms.sort_unstable();
        FgAbelianGroup {
            free: self.free + other.free,
            torsion,
            atoms,
        }
    }
}

impl fmt::Display for FgAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<String> = Vec::new();
        match self.free {
            0 => {}
            1 => terms.push("Z".into()),
            r => terms.push(format!("Z^{r}")),
        }
        let mut i = 0;
        while i < self.torsion.len() {
            let j = self.torsion[i..].iter().take_while(|&&x| x == self.torsion[i]).count();
            let (p, e) = self.torsion[i];
            let q = p.pow(e);
            terms.push(if j == 1 {
                format!("Z/{q}")
            } else {
                format!("(Z/{q})^{j}")
            });
            i += j;
        }
        terms.extend(self.atoms.iter().map(|a| a.to_string()));
        if terms.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&terms.join(" + "))
        }
    }
}

fn parse_term(term: &str) -> std::result::Result<FgAbelianGroup, String> {
    let term = term.trim();
    let (base, power) = match term.strip_prefix('(') {
        Some(rest) => {
            let (inner, tail) = rest
                .split_once(')')
                .ok_or_else(|| format!("unbalanced parenthesis in `{term}`"))?;
            let power = match tail.trim() {
                "" => 1,
                t => t
                    .strip_prefix('^')
                    .and_then(|r| r.trim().parse::<usize>().ok())
                    .ok_or_else(|| format!("bad exponent in `{term}`"))?,
            };
            (inner.trim(), power)
        }
        None => (term, 1),
    };
    let single = match base {
        "0" => FgAbelianGroup::zero(),
        "Z" => FgAbelianGroup::free(1),
        "E1" => FgAbelianGroup::atom(Atom::E1),
        "E2" => FgAbelianGroup::atom(Atom::E2),
        "E3" => FgAbelianGroup::atom(Atom::E3),
        _ => {
            if let Some(r) = base.strip_prefix("Z^") {
                let r: u32 = r.trim().parse().map_err(|_| format!("bad rank in `{term}`"))?;
                FgAbelianGroup::free(r)
            } else if let Some(m) = base.strip_prefix("Z/") {
                let m = m.trim();
                let order = match m.split_once('^') {
                    Some((p, e)) => {
                        let p: u64 = p.trim().parse().map_err(|_| format!("bad order in `{term}`"))?;
                        let e: u32 = e.trim().parse().map_err(|_| format!("bad order in `{term}`"))?;
                        p.checked_pow(e).ok_or_else(|| format!("order overflows in `{term}`"))?
                    }
                    None => m.parse().map_err(|_| format!("bad order in `{term}`"))?,
                };
                if order < 2 {
                    return Err(format!("cyclic order must be at least 2 in `{term}`"));
                }
                FgAbelianGroup::cyclic(order)
            } else {
                return Err(format!("unrecognized term `{term}`"));
            }
        }
    };
    let mut g = FgAbelianGroup::zero();
    for _ in 0..power {
        g = g.sum(&single);
    }
    Ok(g)
}

impl FromStr for FgAbelianGroup {
    type Err = String;

    /// Parses sums like `(Z/2)^7 + Z/2^2 + Z/3 + E1`; `⊕` is accepted for `+`.
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let s = s.replace('⊕', "+");
        if s.trim().is_empty() {
            return Err("empty group expression".into());
        }
        let mut g = FgAbelianGroup::zero();
        for term in s.split('+') {
            g = g.sum(&parse_term(term)?);
        }
        Ok(g)
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// The exterior square, which is `H2` of the group.
pub fn lambda_square(g: &FgAbelianGroup) -> Result<FgAbelianGroup> {
    if !g.atoms.is_empty() {
        let names: Vec<String> = g.atoms.iter().map(|a| a.to_string()).collect();
        return Err(Error::IndeterminateH2(names.join(", ")));
    }
    let r = g.free;
    let tors = g.torsion();
    let mut out = FgAbelianGroup::free(r * r.saturating_sub(1) / 2);
    for &q in &tors {
        for _ in 0..r {
            out = out.sum(&FgAbelianGroup::cyclic(q));
        }
    }
    for i in 0..tors.len() {
        for j in i + 1..tors.len() {
            let d = gcd(tors[i], tors[j]);
            if d > 1 {
                out = out.sum(&FgAbelianGroup::cyclic(d));
            }
        }
    }
    Ok(out)
}

pub fn h1_aut_q(n: u32) -> FgAbelianGroup {
    if n.is_multiple_of(2) {
        FgAbelianGroup::elementary(2, 2)
    } else if matches!(n, 1 | 3 | 7) {
        FgAbelianGroup::zero()
    } else {
        FgAbelianGroup::cyclic(4)
    }
}

/// `π_{2n+2}` of the stunted projective spectrum starting in degree `2n`.
pub fn pi_rp_2n2(n: u32) -> FgAbelianGroup {
    match (2 * n) % 8 {
        0 | 4 => FgAbelianGroup::elementary(2, 2),
        _ => FgAbelianGroup::zero(),
    }
}

pub fn ker_j(i: u32) -> FgAbelianGroup {
    if i.is_multiple_of(4) {
        FgAbelianGroup::free(1)
    } else {
        FgAbelianGroup::zero()
    }
}

pub fn pi_a_2n2(n: u32) -> FgAbelianGroup {
    match (n + 1) % 8 {
        0 | 4 => FgAbelianGroup::free(1),
        1 | 2 => FgAbelianGroup::cyclic(2),
        _ => FgAbelianGroup::zero(),
    }
}

/// Values of `coker(J)_i` by stem.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StemData {
    stems: BTreeMap<u32, FgAbelianGroup>,
}

impl StemData {
    pub fn get(&self, stem: u32) -> Result<&FgAbelianGroup> {
        self.stems.get(&stem).ok_or(Error::MissingStem { stem })
    }

    pub fn len(&self) -> usize {
        self.stems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stems.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &FgAbelianGroup)> {
        self.stems.iter().map(|(&k, v)| (k, v))
    }
}

/// Parses lines `stem <i> = <term> (+ <term>)*`; `#` starts a comment.
pub fn parse_stem_data(text: &str) -> Result<StemData> {
    let mut stems = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| Error::Parse { line: i + 1, message };
        let rest = line
            .strip_prefix("stem")
            .filter(|r| r.starts_with(char::is_whitespace))
            .ok_or_else(|| err("expected `stem <i> = <group>`".into()))?;
        let (idx, group) = rest
            .split_once('=')
            .ok_or_else(|| err("missing `=`".into()))?;
        let idx: u32 = idx
            .trim()
            .parse()
            .map_err(|_| err(format!("bad stem index `{}`", idx.trim())))?;
        let g: FgAbelianGroup = group.parse().map_err(err)?;
        if !g.is_finite() {
            return Err(err(format!("stem {idx}: entries must be finite groups")));
        }
        if stems.insert(idx, g).is_some() {
            return Err(err(format!("duplicate stem {idx}")));
        }
    }
    Ok(StemData { stems })
}

pub fn load_stem_data(path: &Path) -> Result<StemData> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Precondition(format!("cannot read {}: {e}", path.display())))?;
    parse_stem_data(&text)
}

/// Which homotopy group of the connective cover is wanted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MoStem {
    /// `π_{2n+1}`
    Odd,
    /// `π_{2n+2}`
    Even,
}

/// `π_{2n+1}` or `π_{2n+2}` of the `n`-connected cobordism spectrum, in terms of
/// `coker(J)` and the atoms.
pub fn pi_mo(n: u32, which: MoStem, data: &StemData) -> Result<FgAbelianGroup> {
    let n1 = n + 1;
    match which {
        MoStem::Odd => {
            let stem = 2 * n + 1;
            if matches!(n1, 9 | 12) {
                return Err(Error::ExceptionalStem {
                    stem,
                    reason: format!("n+1 = {n1} is exceptional for the odd stem"),
                });
            }
            Ok(data.get(stem)?.clone())
        }
        MoStem::Even => {
            let stem = 2 * n + 2;
            if matches!(n1, 1 | 3 | 4 | 7 | 8 | 9) {
                return Err(Error::ExceptionalStem {
                    stem,
                    reason: format!("n+1 = {n1} is exceptional for the even stem"),
                });
            }
            let c = data.get(stem)?;
            Ok(match n1 % 8 {
                6 => c.sum(&FgAbelianGroup::free(1)),
                3 | 5 | 7 => c.clone(),
                0 | 4 => c.sum(&FgAbelianGroup::free(2)),
                1 => FgAbelianGroup::atom(Atom::E1),
                _ => FgAbelianGroup::atom(Atom::E2),
            })
        }
    }
}

/// Published `H2` values for `n = 16, 17, 18`.
pub const PUBLISHED_H2: [(u32, &str); 3] = [
    (16, "E1 + (Z/2)^15"),
    (17, "(Z/2)^7 + Z/2^2 + Z/3 + Z/5"),
    (18, "Z/2 + Z/2^2 + E2"),
];

pub fn published_h2(n: u32) -> Option<FgAbelianGroup> {
    PUBLISHED_H2
        .iter()
        .find(|(m, _)| *m == n)
        .map(|(_, s)| s.parse().expect("published values parse"))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assembly {
    pub n: u32,
    pub g: u32,
    pub pi_odd_mo: FgAbelianGroup,
    pub h1_aut: FgAbelianGroup,
    pub h2_part: FgAbelianGroup,
    pub pi_even_mo: FgAbelianGroup,
    pub pi_even_rp: FgAbelianGroup,
    pub total: FgAbelianGroup,
    pub extensions: Vec<String>,
    pub published: Option<FgAbelianGroup>,
}

impl Assembly {
    pub fn agrees(&self) -> Option<bool> {
        self.published.as_ref().map(|p| *p == self.total)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let (n, g) = (self.n, self.g);
        let _ = writeln!(out, "n = {n}, g = {g}");
        let _ = writeln!(out, "H2 = {}", self.total);
        let _ = writeln!(
            out,
            "  H2(pi_{}(MO) + H1(Aut Q)) = H2({}) = {}",
            2 * n + 1,
            self.pi_odd_mo.sum(&self.h1_aut),
            self.h2_part
        );
        let _ = writeln!(out, "  pi_{}(MO) = {}", 2 * n + 2, self.pi_even_mo);
        let _ = writeln!(out, "  pi_{}(RP) = {}", 2 * n + 2, self.pi_even_rp);
        if !self.extensions.is_empty() {
            let _ = writeln!(out, "extensions:");
            for e in &self.extensions {
                let _ = writeln!(out, "  {e}");
            }
        }
        match (&self.published, self.agrees()) {
            (Some(p), Some(ok)) => {
                let _ = writeln!(out, "published H2 = {p}");
                let _ = writeln!(out, "agreement: {}", if ok { "agree" } else { "DISAGREE" });
            }
            _ => {
                let _ = writeln!(out, "published H2 = -");
            }
        }
        out
    }
}

fn extension_notes(n: u32, atoms: &[Atom], data: &StemData) -> Vec<String> {
    let stem = 2 * n + 2;
    let c = data
        .get(stem)
        .map(|g| g.to_string())
        .unwrap_or_else(|_| "?".into());
    let mut out = Vec::new();
    if atoms.contains(&Atom::E1) {
        out.push(format!("0 -> coker(J)_{stem} -> E1 -> Z/2 -> 0, coker(J)_{stem} = {c}"));
    }
    if atoms.contains(&Atom::E2) {
        out.push("0 -> Z -> E3 -> Z/2 -> 0".to_string());
        out.push(format!("0 -> coker(J)_{stem} -> E2 -> E3 -> 0, coker(J)_{stem} = {c}"));
    }
    out
}

/// `H2(π_{2n+1}MO ⊕ H1(Aut Q)) ⊕ π_{2n+2}MO ⊕ π_{2n+2}RP`.
pub fn assemble_h2(n: u32, g: u32, data: &StemData) -> Result<Assembly> {
    if n < 16 || g < 7 {
        return Err(Error::Precondition(format!(
            "the splitting needs n >= 16 and g >= 7, got n = {n}, g = {g}"
        )));
    }
    let pi_odd_mo = pi_mo(n, MoStem::Odd, data)?;
    let h1_aut = h1_aut_q(n);
    let h2_part = lambda_square(&pi_odd_mo.sum(&h1_aut))?;
    let pi_even_mo = pi_mo(n, MoStem::Even, data)?;
    let pi_even_rp = pi_rp_2n2(n);
    let total = h2_part.sum(&pi_even_mo).sum(&pi_even_rp);
    let extensions = extension_notes(n, total.atoms(), data);
    Ok(Assembly {
        n,
        g,
        pi_odd_mo,
        h1_aut,
        h2_part,
        pi_even_mo,
        pi_even_rp,
        total,
        extensions,
        published: published_h2(n),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grp(s: &str) -> FgAbelianGroup {
        s.parse().unwrap()
    }

    #[test]
    fn canonical_display() {
        assert_eq!(grp("Z/5 + Z/3 + Z/4 + (Z/2)^7").to_string(), "(Z/2)^7 + Z/4 + Z/3 + Z/5");
        assert_eq!(grp("Z/2^2").to_string(), "Z/4");
        assert_eq!(grp("Z/6").to_string(), "Z/2 + Z/3");
        assert_eq!(grp("E2 + Z^2 + Z/2").to_string(), "Z^2 + Z/2 + E2");
        assert_eq!(grp("0").to_string(), "0");
        assert!("Z/1".parse::<FgAbelianGroup>().is_err());
        assert!("Q".parse::<FgAbelianGroup>().is_err());
    }

    #[test]
    fn lambda_square_examples() {
        assert!(lambda_square(&grp("Z/8")).unwrap().is_trivial());
        assert_eq!(lambda_square(&grp("Z/2 + Z/2")).unwrap(), grp("Z/2"));
        assert_eq!(lambda_square(&grp("Z^2")).unwrap(), grp("Z"));
        assert_eq!(lambda_square(&grp("Z + Z/4")).unwrap(), grp("Z/4"));
        assert!(matches!(lambda_square(&grp("E1 + Z/2")), Err(Error::IndeterminateH2(_))));
    }

    #[test]
    fn case_formulas() {
        assert_eq!(h1_aut_q(16), grp("(Z/2)^2"));
        assert_eq!(h1_aut_q(7), grp("0"));
        assert_eq!(h1_aut_q(17), grp("Z/4"));
        assert_eq!(pi_rp_2n2(16), grp("(Z/2)^2"));
        assert_eq!(pi_rp_2n2(17), grp("0"));
        assert_eq!(pi_rp_2n2(18), grp("(Z/2)^2"));
        assert_eq!(ker_j(36), grp("Z"));
        assert_eq!(ker_j(34), grp("0"));
        assert_eq!(pi_a_2n2(4), grp("0"));
        assert_eq!(pi_a_2n2(16), grp("Z/2"));
    }

    #[test]
    fn pi_mo_cases() {
        let data = parse_stem_data("stem 32 = Z/2\nstem 36 = Z/3\nstem 38 = Z/5\nstem 40 = Z/7\nstem 34 = Z/4\n").unwrap();
        assert_eq!(pi_mo(18, MoStem::Even, &data).unwrap(), grp("Z/5"));
        assert_eq!(pi_mo(16, MoStem::Even, &data).unwrap(), grp("E1"));
        assert_eq!(pi_mo(15, MoStem::Even, &data).unwrap(), grp("Z/2 + Z^2"));
        assert_eq!(pi_mo(17, MoStem::Even, &data).unwrap(), grp("E2"));
        assert_eq!(pi_mo(21, MoStem::Even, &data).unwrap_err(), Error::MissingStem { stem: 44 });
        assert!(matches!(pi_mo(8, MoStem::Odd, &data), Err(Error::ExceptionalStem { stem: 17, .. })));
        assert!(matches!(pi_mo(6, MoStem::Even, &data), Err(Error::ExceptionalStem { .. })));
    }

    #[test]
    fn stem_file_parsing() {
        assert!(parse_stem_data("").unwrap().is_empty());
        let d = parse_stem_data("# comment\nstem 33 = Z/8 + Z/2  # trailing\n").unwrap();
        assert_eq!(d.get(33).unwrap().torsion(), vec![2, 8]);
        let e = parse_stem_data("stem 1 = Z/2\nstem 1 = Z/2\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));
        let e = parse_stem_data("\nstem x = Z/2\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));
        assert!(parse_stem_data("stem 3 = Z\n").is_err());
        assert!(parse_stem_data("stem3 = Z/2\n").is_err());
    }

    #[test]
    fn assembly_guards() {
        let d = StemData::default();
        assert!(matches!(assemble_h2(5, 7, &d), Err(Error::Precondition(_))));
        assert!(matches!(assemble_h2(16, 6, &d), Err(Error::Precondition(_))));
        assert!(matches!(assemble_h2(16, 7, &d), Err(Error::MissingStem { stem: 33 })));
    }
}
