//! Goods, rate ensembles, exponent vectors, and balanced codes.
//!
//! The four goods are `F`, `A`, `R`, `M`. A rate ensemble stores the six
//! principal rates in the fixed order FA, FR, FM, AR, AM, RM; the other
//! six directed rates are reciprocals derived on demand. All rate
//! arithmetic is exact rational.
//!
//! Lattice ensembles over a balanced base are represented by exponent
//! vectors `(n1..n6)` in `Z^6`, one exponent per principal rate. A vector
//! is *balanced* when the three additive identities
//! `n1 + n4 = n2`, `n4 + n6 = n5`, `n1 + n4 + n6 = n3` hold; balanced
//! vectors are uniquely coded by the triple `(i, j, k) = (n1, n4, n6)`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::{Error, Result};

/// One of the four tradable goods.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Good {
    /// First good.
    F,
    /// Second good.
    A,
    /// Third good.
    R,
    /// Fourth good.
    M,
}

impl Good {
    /// All four goods in canonical order.
    pub const ALL: [Good; 4] = [Good::F, Good::A, Good::R, Good::M];

    /// Parse a single-letter good name.
    pub fn parse(c: char) -> Option<Good> {
        match c.to_ascii_uppercase() {
            'F' => Some(Good::F),
            'A' => Some(Good::A),
            'R' => Some(Good::R),
            'M' => Some(Good::M),
            _ => None,
        }
    }
}

impl fmt::Display for Good {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Good::F => 'F',
            Good::A => 'A',
            Good::R => 'R',
            Good::M => 'M',
        };
        write!(f, "{c}")
    }
}

/// Index of a principal rate, `1..=6`, in the canonical order
/// FA, FR, FM, AR, AM, RM.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PrincipalIndex(u8);

/// The ordered good pairs of the six principal rates.
pub const PRINCIPAL_PAIRS: [(Good, Good); 6] = [
    (Good::F, Good::A),
    (Good::F, Good::R),
    (Good::F, Good::M),
    (Good::A, Good::R),
    (Good::A, Good::M),
    (Good::R, Good::M),
];

/// Short labels of the six principal rates, index-aligned with
/// [`PRINCIPAL_PAIRS`].
pub const PRINCIPAL_LABELS: [&str; 6] = ["FA", "FR", "FM", "AR", "AM", "RM"];

impl PrincipalIndex {
    /// Build from a 1-based index.
    pub fn new(index: u8) -> Result<Self> {
        if (1..=6).contains(&index) {
            Ok(PrincipalIndex(index))
        } else {
            Err(Error::IndexOutOfRange {
                what: "principal index",
                range: "1..=6",
                got: i64::from(index),
            })
        }
    }

    /// The 1-based index.
    #[must_use]
    pub fn get(self) -> u8 {
        self.0
    }

    /// Zero-based position into principal-ordered storage.
    #[must_use]
    pub fn pos(self) -> usize {
        usize::from(self.0) - 1
    }

    /// The ordered pair of goods this rate converts between.
    #[must_use]
    pub fn pair(self) -> (Good, Good) {
        PRINCIPAL_PAIRS[self.pos()]
    }

    /// Short label, e.g. `"FA"`.
    #[must_use]
    pub fn label(self) -> &'static str {
        PRINCIPAL_LABELS[self.pos()]
    }

    /// Locate the principal rate connecting two distinct goods.
    ///
    /// Returns the index together with `true` when `(x, y)` is the
    /// principal orientation and `false` when `(x, y)` is the reciprocal
    /// orientation. Returns `None` when `x == y`.
    #[must_use]
    pub fn of_pair(x: Good, y: Good) -> Option<(PrincipalIndex, bool)> {
        if x == y {
            return None;
        }
        for (pos, &(a, b)) in PRINCIPAL_PAIRS.iter().enumerate() {
            if (a, b) == (x, y) {
                return Some((PrincipalIndex(pos as u8 + 1), true));
            }
            if (a, b) == (y, x) {
                return Some((PrincipalIndex(pos as u8 + 1), false));
            }
        }
        unreachable!("every unordered pair of distinct goods is principal in one orientation")
    }
}

/// An exchange-rate ensemble: the six principal rates as positive exact
/// rationals, stored in canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RateEnsemble {
    rates: [BigRational; 6],
}

impl RateEnsemble {
    /// Build an ensemble from the six principal rates, which must all be
    /// positive.
    pub fn new(rates: [BigRational; 6]) -> Result<Self> {
        for (pos, r) in rates.iter().enumerate() {
            if !r.is_positive() {
                return Err(Error::NonPositiveRate {
                    label: PRINCIPAL_LABELS[pos],
                    value: r.to_string(),
                });
            }
        }
        Ok(RateEnsemble { rates })
    }

    /// Build an ensemble from six positive integers.
    pub fn from_integers(values: [i64; 6]) -> Result<Self> {
        let rates = values.map(|v| BigRational::from_integer(BigInt::from(v)));
        RateEnsemble::new(rates)
    }

    /// The principal rate at `index`.
    #[must_use]
    pub fn principal(&self, index: PrincipalIndex) -> &BigRational {
        &self.rates[index.pos()]
    }

    /// All six principal rates in canonical order.
    #[must_use]
    pub fn principals(&self) -> &[BigRational; 6] {
        &self.rates
    }

    /// The directed rate from `x` to `y`: `1` on the diagonal, a principal
    /// rate or its reciprocal otherwise.
    #[must_use]
    pub fn rate(&self, x: Good, y: Good) -> BigRational {
        match PrincipalIndex::of_pair(x, y) {
            None => BigRational::one(),
            Some((p, true)) => self.rates[p.pos()].clone(),
            Some((p, false)) => self.rates[p.pos()].recip(),
        }
    }

    /// Whether the ensemble is balanced: the three product identities
    /// `r_FR = r_FA * r_AR`, `r_AM = r_AR * r_RM`, `r_FM = r_FA * r_AR * r_RM`
    /// hold exactly.
    #[must_use]
    pub fn is_balanced(&self) -> bool {
        self.balance_defect().is_none()
    }

    /// The first failing product identity, if any, as a human-readable
    /// description.
    #[must_use]
    pub fn balance_defect(&self) -> Option<String> {
        let [fa, fr, fm, ar, am, rm] = &self.rates;
        if *fr != fa * ar {
            return Some(format!("r_FR = {fr} but r_FA*r_AR = {}", fa * ar));
        }
        if *am != ar * rm {
            return Some(format!("r_AM = {am} but r_AR*r_RM = {}", ar * rm));
        }
        if *fm != fa * ar * rm {
            return Some(format!("r_FM = {fm} but r_FA*r_AR*r_RM = {}", fa * ar * rm));
        }
        None
    }
}

impl fmt::Display for RateEnsemble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (pos, r) in self.rates.iter().enumerate() {
            if pos > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}={}", PRINCIPAL_LABELS[pos], r)?;
        }
        write!(f, ")")
    }
}

/// An exponent vector `(n1..n6)` in `Z^6`, one exponent per principal rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct ExponentEnsemble([i64; 6]);

impl ExponentEnsemble {
    /// Wrap a raw exponent vector.
    #[must_use]
    pub const fn new(exponents: [i64; 6]) -> Self {
        ExponentEnsemble(exponents)
    }

    /// The raw exponents in canonical order.
    #[must_use]
    pub const fn exponents(&self) -> [i64; 6] {
        self.0
    }

    /// The exponent of the principal rate at `index`.
    #[must_use]
    pub fn exponent(&self, index: PrincipalIndex) -> i64 {
        self.0[index.pos()]
    }

    /// Whether the three balance identities hold:
    /// `n1 + n4 = n2`, `n4 + n6 = n5`, `n1 + n4 + n6 = n3`.
    #[must_use]
    pub fn is_balanced(&self) -> bool {
        let [n1, n2, n3, n4, n5, n6] = self.0;
        n1 + n4 == n2 && n4 + n6 == n5 && n1 + n4 + n6 == n3
    }

    /// The largest absolute exponent.
    #[must_use]
    pub fn magnitude(&self) -> i64 {
        self.0.iter().map(|n| n.abs()).max().expect("six entries")
    }

    /// Parse a comma-separated list of six integers.
    pub fn parse(text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.split(',').map(str::trim).collect();
        if parts.len() != 6 {
            return Err(Error::MalformedChain {
                detail: format!("expected 6 comma-separated exponents, got {}", parts.len()),
            });
        }
        let mut exps = [0i64; 6];
        for (slot, part) in exps.iter_mut().zip(&parts) {
            *slot = part.parse().map_err(|_| Error::MalformedChain {
                detail: format!("invalid exponent {part:?}"),
            })?;
        }
        Ok(ExponentEnsemble(exps))
    }
}

impl fmt::Display for ExponentEnsemble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [n1, n2, n3, n4, n5, n6] = self.0;
        write!(f, "({n1},{n2},{n3},{n4},{n5},{n6})")
    }
}

/// The code `(i, j, k)` of a balanced exponent vector: `i = n1`, `j = n4`,
/// `k = n6`; the remaining exponents are the partial sums
/// `(i, i+j, i+j+k, j, j+k, k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BalancedCode {
    /// Exponent of the FA rate.
    pub i: i64,
    /// Exponent of the AR rate.
    pub j: i64,
    /// Exponent of the RM rate.
    pub k: i64,
}

impl BalancedCode {
    /// Build a code from its three components.
    #[must_use]
    pub const fn new(i: i64, j: i64, k: i64) -> Self {
        BalancedCode { i, j, k }
    }

    /// The largest absolute component.
    #[must_use]
    pub fn magnitude(&self) -> i64 {
        self.i.abs().max(self.j.abs()).max(self.k.abs())
    }
}

impl fmt::Display for BalancedCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.i, self.j, self.k)
    }
}

/// The code of a balanced exponent vector, or `None` when the vector is
/// not balanced.
#[must_use]
pub fn code_of(n: &ExponentEnsemble) -> Option<BalancedCode> {
    if n.is_balanced() {
        let [n1, _, _, n4, _, n6] = n.exponents();
        Some(BalancedCode::new(n1, n4, n6))
    } else {
        None
    }
}

/// The balanced exponent vector with the given code.
#[must_use]
pub fn exponents_of(c: BalancedCode) -> ExponentEnsemble {
    let BalancedCode { i, j, k } = c;
    ExponentEnsemble::new([i, i + j, i + j + k, j, j + k, k])
}

/// A balanced base ensemble together with a rational scale `alpha > 1`;
/// the anchor of the exponent lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BalancedBase {
    rates: RateEnsemble,
    alpha: BigRational,
}

impl BalancedBase {
    /// Build a base from a balanced ensemble and a scale above one.
    pub fn new(rates: RateEnsemble, alpha: BigRational) -> Result<Self> {
        if let Some(detail) = rates.balance_defect() {
            return Err(Error::UnbalancedBase { detail });
        }
        if alpha <= BigRational::one() {
            return Err(Error::AlphaNotAboveOne {
                value: alpha.to_string(),
            });
        }
        Ok(BalancedBase { rates, alpha })
    }

    /// The demonstration base `(2, 6, 24, 3, 12, 4)` with `alpha = 2`.
    #[must_use]
    pub fn demo() -> Self {
        let rates = RateEnsemble::from_integers([2, 6, 24, 3, 12, 4]).expect("positive");
        let alpha = BigRational::from_integer(BigInt::from(2));
        BalancedBase::new(rates, alpha).expect("demo base is balanced")
    }

    /// The base rates.
    #[must_use]
    pub fn rates(&self) -> &RateEnsemble {
        &self.rates
    }

    /// The scale factor.
    #[must_use]
    pub fn alpha(&self) -> &BigRational {
        &self.alpha
    }
}

/// Integer power of a positive rational, exact for any `i64` exponent.
#[must_use]
pub fn rational_pow(base: &BigRational, exp: i64) -> BigRational {
    if exp == 0 {
        return BigRational::one();
    }
    let mut result = BigRational::one();
    let mut factor = if exp > 0 { base.clone() } else { base.recip() };
    let mut remaining = exp.unsigned_abs();
    while remaining > 0 {
        if remaining & 1 == 1 {
            result *= &factor;
        }
        remaining >>= 1;
        if remaining > 0 {
            let squared = &factor * &factor;
            factor = squared;
        }
    }
    result
}

/// Realize an exponent vector over a base: each principal rate of the
/// result is the base rate times `alpha` to the corresponding exponent.
#[must_use]
pub fn realize(n: &ExponentEnsemble, base: &BalancedBase) -> RateEnsemble {
    let exps = n.exponents();
    let mut rates: [BigRational; 6] = std::array::from_fn(|_| BigRational::one());
    for (pos, slot) in rates.iter_mut().enumerate() {
        *slot = base.rates.principals()[pos].clone() * rational_pow(&base.alpha, exps[pos]);
    }
    RateEnsemble::new(rates).expect("positive base times positive power stays positive")
}

/// Parse a rational written as `p`, `p/q`, or a plain decimal like `1.5`.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let text = text.trim();
    let bad = |detail: String| Error::MalformedChain { detail };
    if let Some((p, q)) = text.split_once('/') {
        let num: BigInt = p
            .trim()
            .parse()
            .map_err(|_| bad(format!("invalid numerator {p:?}")))?;
        let den: BigInt = q
            .trim()
            .parse()
            .map_err(|_| bad(format!("invalid denominator {q:?}")))?;
        if den.is_zero() {
            return Err(bad("zero denominator".into()));
        }
        return Ok(BigRational::new(num, den));
    }
    if let Some((whole, frac)) = text.split_once('.') {
        let digits = format!("{whole}{frac}");
        let num: BigInt = digits
            .parse()
            .map_err(|_| bad(format!("invalid decimal {text:?}")))?;
        let den = BigInt::from(10u8).pow(frac.len() as u32);
        return Ok(BigRational::new(num, den));
    }
    let num: BigInt = text
        .parse()
        .map_err(|_| bad(format!("invalid rational {text:?}")))?;
    Ok(BigRational::from_integer(num))
}
