//! Weight sequences `[b_1, ..., b_r]` and their convergents.
//!
//! A chain in *strict* form has every entry `>= 2` and is the minimal
//! resolution of a cyclic quotient singularity. *General* form allows entries
//! equal to 1 and shows up in the middle of a contraction.
//!
//! Evaluation uses the subtractive recursion of Hirzebruch-Jung continued
//! fractions, `p_{i+1} = a_{i+1} p_i - p_{i-1}`, so that
//! `[b_1, ..., b_r] = b_1 - 1/(b_2 - 1/(...))`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Fraction, Result, Scalar};

#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Chain(Vec<i64>);

impl Chain {
    pub fn new(entries: Vec<i64>) -> Self {
        Chain(entries)
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<i64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<i64> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<i64> {
        self.0.last().copied()
    }

    /// All entries `>= 2`.
    pub fn is_strict(&self) -> bool {
        self.0.iter().all(|&b| b >= 2)
    }

    /// All entries `>= 1`.
    pub fn is_general(&self) -> bool {
        self.0.iter().all(|&b| b >= 1)
    }

    /// The singleton `[0]`, terminal state of a chain evaluating to zero.
    pub fn is_zero_singleton(&self) -> bool {
        self.0 == [0]
    }

    pub fn reversed(&self) -> Chain {
        Chain(self.0.iter().rev().copied().collect())
    }

    /// `sum (b_j - 2)`.
    pub fn weight_sum(&self) -> i64 {
        self.0.iter().map(|b| b - 2).sum()
    }

    pub fn concat(&self, other: &Chain) -> Chain {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Chain(v)
    }

    pub fn require_strict(&self) -> Result<()> {
        if self.is_strict() {
            Ok(())
        } else {
            Err(Error::NotStrict(self.to_string()))
        }
    }

    pub fn require_general(&self) -> Result<()> {
        if self.is_general() {
            Ok(())
        } else {
            Err(Error::NotGeneral(self.to_string()))
        }
    }

    pub fn convergents<I: Scalar>(&self) -> Convergents<I> {
        Convergents::of(&self.0)
    }

    /// `p_i > 0` for `i = 0..s-1`; the final numerator may be any sign.
    pub fn is_admissible(&self) -> bool {
        first_inadmissible(&self.0).is_none()
    }

    /// Returns `(p_s, q_s)`. The empty chain evaluates to `(1, 0)`.
    pub fn evaluate<I: Scalar>(&self) -> Result<(I, I)> {
        let conv = self.convergents::<I>();
        if let Some(index) = conv.first_nonpositive() {
            return Err(Error::NotAdmissible {
                index,
                value: conv.p(index).to_string(),
            });
        }
        Ok(conv.value())
    }

    /// The singularity `n/q` of a nonempty strict chain.
    pub fn to_fraction<I: Scalar>(&self) -> Result<Fraction<I>> {
        if self.is_empty() {
            return Err(Error::EmptyChain);
        }
        self.require_strict()?;
        let (n, q) = self.evaluate::<I>()?;
        Fraction::new(n, q)
    }
}

/// Machine-word admissibility scan used on hot paths; returns the first
/// index `i < s` with `p_i <= 0`.
pub(crate) fn first_inadmissible(entries: &[i64]) -> Option<usize> {
    let (mut prev, mut cur) = (0i128, 1i128);
    for (i, &a) in entries.iter().enumerate() {
        if cur <= 0 {
            return Some(i);
        }
        let next = (a as i128).checked_mul(cur).and_then(|x| x.checked_sub(prev));
        match next {
            Some(next) => {
                prev = cur;
                cur = next;
            }
            None => return Convergents::<crate::Int>::of(entries).first_nonpositive(),
        }
    }
    None
}

/// `p_{-1}..p_s` and `q_0..q_s` of a chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Convergents<I> {
    p: Vec<I>,
    q: Vec<I>,
}

impl<I: Scalar> Convergents<I> {
    pub fn of(entries: &[i64]) -> Self {
        let mut p = Vec::with_capacity(entries.len() + 2);
        p.push(I::zero());
        p.push(I::one());
        for &a in entries {
            let k = p.len();
            let next = I::from_entry(a) * p[k - 1].clone() - p[k - 2].clone();
            p.push(next);
        }
        let mut q = Vec::with_capacity(entries.len() + 1);
        q.push(I::zero());
        if !entries.is_empty() {
            q.push(I::one());
            for &a in &entries[1..] {
                let k = q.len();
                let next = I::from_entry(a) * q[k - 1].clone() - q[k - 2].clone();
                q.push(next);
            }
        }
        Convergents { p, q }
    }

    /// Number of entries `s`.
    pub fn len(&self) -> usize {
        self.q.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `p_i` for `i >= -1`, indexed so that `p(0) = 1`.
    pub fn p(&self, i: usize) -> &I {
        &self.p[i + 1]
    }

    pub fn p_minus_one(&self) -> &I {
        &self.p[0]
    }

    pub fn q(&self, i: usize) -> &I {
        &self.q[i]
    }

    pub fn numerators(&self) -> &[I] {
        &self.p
    }

    pub fn denominators(&self) -> &[I] {
        &self.q
    }

    pub fn first_nonpositive(&self) -> Option<usize> {
        (0..self.len()).find(|&i| !self.p(i).is_positive())
    }

    pub fn value(&self) -> (I, I) {
        let s = self.len();
        (self.p(s).clone(), self.q(s).clone())
    }
}

impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, b) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{b}")?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Chain {
    type Err = Error;

    /// Accepts `[b1,b2,...]` or bare `b1,b2,...`; whitespace is ignored.
    fn from_str(s: &str) -> Result<Self> {
        let err = || Error::Parse {
            what: "chain",
            input: s.to_string(),
        };
        let t = s.trim();
        let inner = match (t.strip_prefix('['), t.ends_with(']')) {
            (Some(rest), true) => &rest[..rest.len() - 1],
            (None, false) => t,
            _ => return Err(err()),
        };
        if inner.trim().is_empty() {
            return Ok(Chain::default());
        }
        inner
            .split(',')
            .map(|tok| tok.trim().parse::<i64>().map_err(|_| err()))
            .collect::<Result<Vec<_>>>()
            .map(Chain)
    }
}

impl From<Vec<i64>> for Chain {
    fn from(v: Vec<i64>) -> Self {
        Chain(v)
    }
}

impl<const N: usize> From<[i64; N]> for Chain {
    fn from(v: [i64; N]) -> Self {
        Chain(v.to_vec())
    }
}

impl Serialize for Chain {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Chain {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    // Nested evaluation b_1 - 1/(b_2 - 1/(...)) from the right, independent of
    // the convergent recursion. Only defined when no inner tail is zero.
    fn nested(entries: &[i64]) -> Option<Ratio<i64>> {
        let mut acc: Option<Ratio<i64>> = None;
        for &b in entries.iter().rev() {
            let v = match acc {
                None => Ratio::from_integer(b),
                Some(t) if t == Ratio::from_integer(0) => return None,
                Some(t) => Ratio::from_integer(b) - t.recip(),
            };
            acc = Some(v);
        }
        acc
    }

    #[test]
    fn parse_and_display() {
        let c: Chain = "[3, 4,2]".parse().unwrap();
        assert_eq!(c.entries(), &[3, 4, 2]);
        assert_eq!(c.to_string(), "[3,4,2]");
        assert_eq!("3,4,2".parse::<Chain>().unwrap(), c);
        assert_eq!("[]".parse::<Chain>().unwrap(), Chain::default());
        assert!("[3,4".parse::<Chain>().is_err());
        assert!("[a]".parse::<Chain>().is_err());
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(Chain::from([4]).evaluate::<i64>().unwrap(), (4, 1));
        let c = Chain::from([2, 5, 1, 2, 5]);
        let conv = c.convergents::<i64>();
        assert_eq!(conv.numerators(), &[0, 1, 2, 9, 7, 5, 18]);
        assert_eq!(c.evaluate::<i64>().unwrap(), (18, 11));
        assert_eq!(nested(c.entries()), Some(Ratio::new(18, 11)));
        assert_eq!(Chain::from([2, 1, 2]).evaluate::<i64>().unwrap(), (0, 1));
        assert_eq!(Chain::from([3, 4, 2]).evaluate::<i64>().unwrap(), (19, 7));
        assert_eq!(Chain::default().evaluate::<i64>().unwrap(), (1, 0));
    }

    #[test]
    fn admissibility_edges() {
        assert!(Chain::from([4, 1, 4]).is_admissible());
        assert!(Chain::from([2, 1, 2]).is_admissible());
        // A [1,1] run inside a longer chain drives p negative.
        assert!(!Chain::from([2, 1, 1, 2]).is_admissible());
        assert!(!Chain::from([2, 2, 1, 2, 2]).is_admissible());
        let err = Chain::from([2, 2, 1, 2, 2]).evaluate::<i64>().unwrap_err();
        assert!(matches!(err, Error::NotAdmissible { index: 4, .. }));
        // Only p_0 and p_1 are checked here, both equal 1.
        assert!(Chain::from([1, 1]).is_admissible());
        assert!(!Chain::from([1, 1, 1]).is_admissible());
    }

    #[test]
    fn evaluate_agrees_with_nested_form() {
        for a in 2..7 {
            for b in 2..7 {
                for c in 1..7 {
                    let ch = Chain::from([a, b, c]);
                    let (p, q) = ch.evaluate::<i64>().unwrap();
                    assert_eq!(nested(ch.entries()), Some(Ratio::new(p, q)), "{ch}");
                }
            }
        }
    }

    #[test]
    fn to_fraction_rejects_general_form() {
        assert!(matches!(
            Chain::from([4, 1, 4]).to_fraction::<i64>(),
            Err(Error::NotStrict(_))
        ));
        assert_eq!(Chain::default().to_fraction::<i64>(), Err(Error::EmptyChain));
    }

    #[test]
    fn serde_uses_text_form() {
        let c = Chain::from([2, 5]);
        assert_eq!(serde_json::to_string(&c).unwrap(), "\"[2,5]\"");
        let back: Chain = serde_json::from_str("\"[2, 5]\"").unwrap();
        assert_eq!(back, c);
    }
}
