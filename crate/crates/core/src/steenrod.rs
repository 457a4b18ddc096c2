//! The mod 2 Steenrod algebra in the admissible basis.
//!
//! Elements are sums of admissible monomials `Sq^{i_1} ... Sq^{i_k}` with
//! `i_j >= 2 i_{j+1}`. Arbitrary words are brought to admissible form by
//! rewriting the leftmost inadmissible pair with the Adem relation
//!
//! ```text
//! Sq^a Sq^b = sum_{j=0}^{a/2} binom(b-j-1, a-2j) Sq^{a+b-j} Sq^j     (a < 2b)
//! ```
//!
//! Reductions are cached in a process-wide table keyed by the word.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::{OnceLock, RwLock};

use crate::f2::F2Vector;

/// `binom(a, b) mod 2` by Lucas: odd iff the binary digits of `b` are a subset of those of `a`.
#[inline]
pub fn binom_mod2(a: u64, b: u64) -> bool {
    b & !a == 0
}

/// Binomial coefficient mod 2 with the convention that it vanishes for negative arguments.
#[inline]
pub(crate) fn binom_mod2_signed(a: i64, b: i64) -> bool {
    if a < 0 || b < 0 || b > a {
        return false;
    }
    binom_mod2(a as u64, b as u64)
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AdmissibleMonomial(Vec<u32>);

impl AdmissibleMonomial {
    pub fn unit() -> Self {
        Self(Vec::new())
    }

    pub fn sq(i: u32) -> Self {
        if i == 0 {
            Self::unit()
        } else {
            Self(vec![i])
        }
    }

    /// Returns `None` unless the exponents are positive and admissible.
    pub fn new(exponents: Vec<u32>) -> Option<Self> {
        is_admissible(&exponents).then_some(Self(exponents))
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Debug for AdmissibleMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for AdmissibleMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "Sq{i}")?;
        }
        Ok(())
    }
}

pub fn is_admissible(word: &[u32]) -> bool {
    word.iter().all(|&i| i > 0) && word.windows(2).all(|w| w[0] >= 2 * w[1])
}

/// An F2-linear combination of admissible monomials.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct SteenrodElement {
    terms: BTreeSet<AdmissibleMonomial>,
}

impl SteenrodElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn unit() -> Self {
        Self::from_monomial(AdmissibleMonomial::unit())
    }

    pub fn sq(i: u32) -> Self {
        Self::from_monomial(AdmissibleMonomial::sq(i))
    }

    pub fn from_monomial(m: AdmissibleMonomial) -> Self {
        let mut terms = BTreeSet::new();
        terms.insert(m);
        Self { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = &AdmissibleMonomial> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The common degree, or `None` for zero or inhomogeneous elements.
    pub fn degree(&self) -> Option<u32> {
        let mut degs = self.terms.iter().map(|m| m.degree());
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn add_monomial(&mut self, m: AdmissibleMonomial) {
        if !self.terms.remove(&m) {
            self.terms.insert(m);
        }
    }

    pub fn add_assign(&mut self, other: &SteenrodElement) {
        for m in &other.terms {
            self.add_monomial(m.clone());
        }
    }

    pub fn contains(&self, m: &AdmissibleMonomial) -> bool {
        self.terms.contains(m)
    }
}

impl fmt::Debug for SteenrodElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for SteenrodElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, m) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

/// All admissible monomials of degree `d`, sorted lexicographically by exponent sequence.
pub fn admissible_basis(d: u32) -> Vec<AdmissibleMonomial> {
    fn extend(remaining: u32, max_first: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if remaining == 0 {
            out.push(prefix.clone());
            return;
        }
        // The next exponent i must satisfy i <= max_first and leave room for an
        // admissible tail, whose degree is at most i - 1.
        for i in 1..=remaining.min(max_first) {
            let tail = remaining - i;
            if tail > 0 && tail > i - 1 {
                continue;
            }
            prefix.push(i);
            extend(tail, i / 2, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    extend(d, d, &mut Vec::new(), &mut out);
    let mut basis: Vec<_> = out.into_iter().map(AdmissibleMonomial).collect();
    basis.sort();
    basis
}

type Memo = RwLock<HashMap<Vec<u32>, SteenrodElement>>;

fn memo() -> &'static Memo {
    static MEMO: OnceLock<Memo> = OnceLock::new();
    MEMO.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Expands `Sq^{w_1} ... Sq^{w_k}` in the admissible basis. Zero exponents are units.
pub fn adem_reduce(word: &[u32]) -> SteenrodElement {
    let word: Vec<u32> = word.iter().copied().filter(|&i| i > 0).collect();
    reduce_word(word)
}

fn reduce_word(word: Vec<u32>) -> SteenrodElement {
    let Some(pos) = word.windows(2).position(|w| w[0] < 2 * w[1]) else {
        return SteenrodElement::from_monomial(AdmissibleMonomial(word));
    };
    if let Some(hit) = memo().read().unwrap().get(&word) {
        return hit.clone();
    }
    let (a, b) = (word[pos] as i64, word[pos + 1] as i64);
    let mut result = SteenrodElement::zero();
    for j in 0..=a / 2 {
        if !binom_mod2_signed(b - j - 1, a - 2 * j) {
            continue;
        }
        let mut next = Vec::with_capacity(word.len());
        next.extend_from_slice(&word[..pos]);
        next.push((a + b - j) as u32);
        if j > 0 {
            next.push(j as u32);
        }
        next.extend_from_slice(&word[pos + 2..]);
        result.add_assign(&reduce_word(next));
    }
    memo().write().unwrap().insert(word, result.clone());
    result
}

/// The product `x · y`, reduced to admissible form.
pub fn multiply(x: &SteenrodElement, y: &SteenrodElement) -> SteenrodElement {
    let mut out = SteenrodElement::zero();
    for a in x.terms() {
        for b in y.terms() {
            let mut word = a.0.clone();
            word.extend_from_slice(&b.0);
            out.add_assign(&reduce_word(word));
        }
    }
    out
}

/// Indexed admissible bases up to a fixed degree together with a lazily filled
/// multiplication table, shared by everything that computes in free modules.
pub struct SteenrodAlgebra {
    max_degree: u32,
    bases: Vec<Vec<AdmissibleMonomial>>,
    index: Vec<HashMap<AdmissibleMonomial, usize>>,
    /// Cell `(da, ia, db)` holds `basis[da][ia] · basis[db][ib]` for every `ib`.
    products: Vec<OnceLock<Vec<F2Vector>>>,
    product_offsets: Vec<usize>,
}

impl SteenrodAlgebra {
    pub fn new(max_degree: u32) -> Self {
        let bases: Vec<_> = (0..=max_degree).map(admissible_basis).collect();
        let index = bases
            .iter()
            .map(|b| b.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect())
            .collect();
        let mut product_offsets = Vec::with_capacity(bases.len() + 1);
        let mut total = 0;
        for (da, b) in bases.iter().enumerate() {
            product_offsets.push(total);
            total += b.len() * (max_degree as usize - da + 1);
        }
        product_offsets.push(total);
        Self {
            max_degree,
            bases,
            index,
            products: (0..total).map(|_| OnceLock::new()).collect(),
            product_offsets,
        }
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn dim(&self, d: u32) -> usize {
        self.bases.get(d as usize).map_or(0, Vec::len)
    }

    pub fn basis(&self, d: u32) -> &[AdmissibleMonomial] {
        &self.bases[d as usize]
    }

    pub fn index_of(&self, m: &AdmissibleMonomial) -> Option<usize> {
        self.index.get(m.degree() as usize)?.get(m).copied()
    }

    /// Coordinates of a homogeneous element of degree `d`.
    pub fn to_vector(&self, d: u32, x: &SteenrodElement) -> F2Vector {
        let mut v = F2Vector::zeros(self.dim(d));
        for m in x.terms() {
            assert_eq!(m.degree(), d, "element is not homogeneous of degree {d}");
            v.flip(self.index[d as usize][m]);
        }
        v
    }

    pub fn from_vector(&self, d: u32, v: &F2Vector) -> SteenrodElement {
        let mut x = SteenrodElement::zero();
        for i in v.ones() {
            x.add_monomial(self.bases[d as usize][i].clone());
        }
        x
    }

    /// `basis(da)[ia] · basis(db)[ib]` as a vector in degree `da + db`.
    pub fn product(&self, da: u32, ia: usize, db: u32, ib: usize) -> &F2Vector {
        assert!(da + db <= self.max_degree, "product above the algebra's max degree");
        let stride = (self.max_degree - da + 1) as usize;
        let cell = self.product_offsets[da as usize] + ia * stride + db as usize;
        let row = self.products[cell].get_or_init(|| {
            let a = &self.bases[da as usize][ia];
            self.bases[db as usize]
                .iter()
                .map(|b| {
                    let mut word = a.0.clone();
                    word.extend_from_slice(&b.0);
                    self.to_vector(da + db, &reduce_word(word))
                })
                .collect()
        });
        &row[ib]
    }
}
