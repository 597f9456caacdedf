use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{invalid, HurwitzError, Result};
use crate::permcore::{Partition, Permutation, MAX_DEGREE};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_char(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// A sequence of ± signs, one per simple branch point. Orders lexicographically with `+ < −`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct SignSequence(pub Vec<Sign>);

impl SignSequence {
    /// `s` pluses followed by `r - s` minuses.
    pub fn simple(r: usize, s: usize) -> Self {
        assert!(s <= r);
        let mut v = vec![Sign::Plus; s];
        v.resize(r, Sign::Minus);
        SignSequence(v)
    }

    pub fn all_plus(r: usize) -> Self {
        Self::simple(r, r)
    }

    /// All `2^r` sequences in lexicographic order.
    pub fn all(r: usize) -> Vec<SignSequence> {
        (0..1u64 << r)
            .map(|bits| {
                SignSequence(
                    (0..r)
                        .map(|i| if bits >> (r - 1 - i) & 1 == 0 { Sign::Plus } else { Sign::Minus })
                        .collect(),
                )
            })
            .collect()
    }

    /// The `r + 1` simple sequences, `s = 0..=r`.
    pub fn all_simple(r: usize) -> Vec<SignSequence> {
        (0..=r).map(|s| Self::simple(r, s)).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of `+` entries.
    pub fn s(&self) -> usize {
        self.0.iter().filter(|&&x| x == Sign::Plus).count()
    }

    /// True iff every `+` precedes every `−`.
    pub fn is_simple(&self) -> bool {
        self.0.windows(2).all(|w| !(w[0] == Sign::Minus && w[1] == Sign::Plus))
    }

    pub fn get(&self, i: usize) -> Sign {
        self.0[i]
    }
}

impl fmt::Display for SignSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            write!(f, "{}", s.as_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for SignSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

impl FromStr for SignSequence {
    type Err = HurwitzError;
    fn from_str(s: &str) -> Result<Self> {
        s.trim()
            .chars()
            .filter(|c| !matches!(c, ',' | ' '))
            .map(|c| match c {
                '+' => Ok(Sign::Plus),
                '-' | '−' => Ok(Sign::Minus),
                _ => invalid(format!("bad sign {c:?}; use + and -")),
            })
            .collect::<Result<Vec<_>>>()
            .map(SignSequence)
    }
}

impl Serialize for SignSequence {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for SignSequence {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Which family of factorizations to count.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    Complex,
    Monotone,
    Real,
    RealMonotone,
    /// Monotone on the first `k` transpositions only.
    RealKMixed(usize),
}

impl Variant {
    pub fn is_real(self) -> bool {
        matches!(self, Variant::Real | Variant::RealMonotone | Variant::RealKMixed(_))
    }

    /// Length of the transposition prefix on which `b_i ≤ b_{i+1}` is imposed.
    pub fn monotone_prefix(self, r: usize) -> usize {
        match self {
            Variant::Complex | Variant::Real => 0,
            Variant::Monotone | Variant::RealMonotone => r,
            Variant::RealKMixed(k) => k.min(r),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variant::Complex => write!(f, "complex"),
            Variant::Monotone => write!(f, "monotone"),
            Variant::Real => write!(f, "real"),
            Variant::RealMonotone => write!(f, "real-monotone"),
            Variant::RealKMixed(k) => write!(f, "real-kmixed({k})"),
        }
    }
}

/// `r = l(λ) + l(μ) + 2g − 2`, rejected unless positive.
pub fn r_length(g: u32, lambda: &Partition, mu: &Partition) -> Result<usize> {
    if lambda.weight() != mu.weight() {
        return invalid(format!("|λ| = {} differs from |μ| = {}", lambda.weight(), mu.weight()));
    }
    let r = lambda.len() as i64 + mu.len() as i64 + 2 * g as i64 - 2;
    if r <= 0 {
        return invalid(format!("r = {r}; the type needs r > 0"));
    }
    Ok(r as usize)
}

/// A validated counting problem.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FactorizationSpec {
    pub genus: u32,
    pub lambda: Partition,
    pub mu: Partition,
    pub variant: Variant,
    pub signs: Option<SignSequence>,
}

impl FactorizationSpec {
    pub fn new(
        genus: u32,
        lambda: Partition,
        mu: Partition,
        variant: Variant,
        signs: Option<SignSequence>,
    ) -> Result<Self> {
        if lambda.is_empty() || mu.is_empty() {
            return invalid("λ and μ must be non-empty");
        }
        let r = r_length(genus, &lambda, &mu)?;
        if lambda.weight() as usize > MAX_DEGREE {
            return invalid(format!("degree {} exceeds the compiled maximum {MAX_DEGREE}", lambda.weight()));
        }
        match (&signs, variant.is_real()) {
            (Some(s), true) if s.len() != r => {
                return invalid(format!("sign sequence has length {}, expected r = {r}", s.len()))
            }
            (None, true) => return invalid("real variants need a sign sequence"),
            (Some(_), false) => return invalid("sign sequences only apply to real variants"),
            _ => {}
        }
        if let Variant::RealKMixed(k) = variant {
            if k > r {
                return invalid(format!("k = {k} exceeds r = {r}"));
            }
        }
        Ok(FactorizationSpec { genus, lambda, mu, variant, signs })
    }

    /// Convenience constructor parsing the text forms.
    pub fn parse(genus: u32, lambda: &str, mu: &str, variant: Variant, signs: Option<&str>) -> Result<Self> {
        let signs = signs.map(str::parse).transpose()?;
        Self::new(genus, lambda.parse()?, mu.parse()?, variant, signs)
    }

    pub fn r(&self) -> usize {
        r_length(self.genus, &self.lambda, &self.mu).expect("validated")
    }

    pub fn degree(&self) -> usize {
        self.lambda.weight() as usize
    }

    /// Same type and variant with other signs.
    pub fn with_signs(&self, signs: SignSequence) -> Result<Self> {
        Self::new(self.genus, self.lambda.clone(), self.mu.clone(), self.variant, Some(signs))
    }
}

/// A transposition `(a b)` with `a < b`, 0-based.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transposition {
    pub a: u8,
    pub b: u8,
}

impl Transposition {
    pub fn new(x: usize, y: usize) -> Result<Self> {
        if x == y || x >= MAX_DEGREE || y >= MAX_DEGREE {
            return invalid(format!("bad transposition ({x} {y})"));
        }
        Ok(Transposition { a: x.min(y) as u8, b: x.max(y) as u8 })
    }

    /// From 1-based point names.
    pub fn one_based(x: usize, y: usize) -> Result<Self> {
        if x == 0 || y == 0 {
            return invalid("points are named 1..d");
        }
        Self::new(x - 1, y - 1)
    }

    pub fn to_permutation(self, degree: usize) -> Permutation {
        Permutation::transposition(degree, self.a as usize, self.b as usize).expect("valid transposition")
    }
}

impl fmt::Display for Transposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {})", self.a + 1, self.b + 1)
    }
}

impl fmt::Debug for Transposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A tuple `(γ?, σ₁, τ₁, .., τ_r, σ₂)` with `σ₂∘τ_r∘⋯∘τ₁∘σ₁ = id`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Factorization {
    pub gamma: Option<Permutation>,
    pub sigma1: Permutation,
    pub taus: Vec<Transposition>,
    pub sigma2: Permutation,
    pub signs: Option<SignSequence>,
}

impl Factorization {
    pub fn degree(&self) -> usize {
        self.sigma1.degree()
    }

    /// Partial products `π_0 = σ₁, π_i = τ_i∘π_{i−1}`.
    pub fn partial_products(&self) -> Vec<Permutation> {
        let mut out = Vec::with_capacity(self.taus.len() + 1);
        let mut pi = self.sigma1;
        out.push(pi);
        for t in &self.taus {
            pi = pi.swap_values(t.a as usize, t.b as usize);
            out.push(pi);
        }
        out
    }

    /// The larger entries `b_1, .., b_r` (0-based).
    pub fn b_sequence(&self) -> Vec<usize> {
        self.taus.iter().map(|t| t.b as usize).collect()
    }

    /// Conjugates every component by `h`.
    pub fn conjugate_by(&self, h: &Permutation) -> Factorization {
        Factorization {
            gamma: self.gamma.map(|g| g.conjugate_by(h)),
            sigma1: self.sigma1.conjugate_by(h),
            taus: self
                .taus
                .iter()
                .map(|t| Transposition::new(h.apply(t.a as usize), h.apply(t.b as usize)).expect("relabelled"))
                .collect(),
            sigma2: self.sigma2.conjugate_by(h),
            signs: self.signs.clone(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct FactorizationJson {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    gamma: Option<String>,
    sigma1: String,
    taus: Vec<[usize; 2]>,
    sigma2: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    signs: Option<SignSequence>,
}

impl Serialize for Factorization {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FactorizationJson {
            gamma: self.gamma.map(|g| g.to_string()),
            sigma1: self.sigma1.to_string(),
            taus: self.taus.iter().map(|t| [t.a as usize + 1, t.b as usize + 1]).collect(),
            sigma2: self.sigma2.to_string(),
            signs: self.signs.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Factorization {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error;
        let j = FactorizationJson::deserialize(d)?;
        let cycles = |s: &str| crate::permcore::parse_cycles(s).map_err(D::Error::custom);
        let c1 = cycles(&j.sigma1)?;
        let c2 = cycles(&j.sigma2)?;
        let mut degree = c1.iter().chain(&c2).flatten().map(|x| x + 1).max().unwrap_or(0);
        for t in &j.taus {
            degree = degree.max(t[0]).max(t[1]);
        }
        let cg = j.gamma.as_deref().map(cycles).transpose()?;
        if let Some(cg) = &cg {
            degree = degree.max(cg.iter().flatten().map(|x| x + 1).max().unwrap_or(0));
        }
        let perm = |c: &[Vec<usize>]| Permutation::from_cycles(degree, c).map_err(D::Error::custom);
        Ok(Factorization {
            gamma: cg.as_deref().map(perm).transpose()?,
            sigma1: perm(&c1)?,
            taus: j
                .taus
                .iter()
                .map(|t| Transposition::one_based(t[0], t[1]).map_err(D::Error::custom))
                .collect::<std::result::Result<_, _>>()?,
            sigma2: perm(&c2)?,
            signs: j.signs,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn r_values() {
        let p = |s: &str| s.parse::<Partition>().unwrap();
        assert_eq!(r_length(0, &p("1,1,1"), &p("1,1,1")).unwrap(), 4);
        assert_eq!(r_length(0, &p("1,3"), &p("2,2")).unwrap(), 2);
        assert_eq!(r_length(1, &p("1"), &p("1")).unwrap(), 2);
        assert!(r_length(0, &p("1"), &p("1")).is_err());
        assert!(r_length(0, &p("2"), &p("1")).is_err());
    }

    #[test]
    fn sign_sequences() {
        let s: SignSequence = "+-++".parse().unwrap();
        assert_eq!(s.s(), 3);
        assert!(!s.is_simple());
        assert!(SignSequence::simple(4, 3).is_simple());
        assert_eq!(SignSequence::all(3).len(), 8);
        assert_eq!(SignSequence::all(2)[0].to_string(), "++");
        assert_eq!(SignSequence::all(2)[3].to_string(), "--");
        assert!("+-".parse::<SignSequence>().unwrap() < "-+".parse().unwrap());
    }

    #[test]
    fn spec_validation() {
        assert!(FactorizationSpec::parse(0, "1,1,1", "1,1,1", Variant::Real, None).is_err());
        assert!(FactorizationSpec::parse(0, "1,1,1", "1,1,1", Variant::Real, Some("++")).is_err());
        assert!(FactorizationSpec::parse(0, "1,1,1", "1,1,1", Variant::RealKMixed(5), Some("++++")).is_err());
        assert!(FactorizationSpec::parse(0, "1,1,1", "1,1,1", Variant::Complex, Some("++++")).is_err());
        assert!(FactorizationSpec::parse(0, "1", "1", Variant::Complex, None).is_err());
    }

    #[test]
    fn json_round_trip() {
        let f = Factorization {
            gamma: Some(Permutation::parse_with_degree("(24)", 4).unwrap()),
            sigma1: Permutation::parse_with_degree("(1)(234)", 4).unwrap(),
            taus: vec![Transposition::one_based(3, 4).unwrap(), Transposition::one_based(1, 3).unwrap()],
            sigma2: Permutation::parse_with_degree("(24)(13)", 4).unwrap(),
            signs: Some("+-".parse().unwrap()),
        };
        let j = serde_json::to_string(&f).unwrap();
        assert_eq!(
            j,
            r#"{"gamma":"(1)(2 4)(3)","sigma1":"(1)(2 3 4)","taus":[[3,4],[1,3]],"sigma2":"(1 3)(2 4)","signs":"+-"}"#
        );
        let back: Factorization = serde_json::from_str(&j).unwrap();
        assert_eq!(back, f);
        let short: Factorization = serde_json::from_str(
            r#"{"gamma":"(2 4)","sigma1":"(1)(2 3 4)","taus":[[3,4],[1,3]],"sigma2":"(1 3)(2 4)","signs":"+-"}"#,
        )
        .unwrap();
        assert_eq!(short, f);
    }
}
