//! The singularity `1/n(1,q)` as a validated pair `n/q`.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::{Chain, Error, Int, Result, Scalar};

/// Coprime pair with `0 < q < n`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Fraction<I = Int> {
    n: I,
    q: I,
}

impl<I: Scalar> Fraction<I> {
    pub fn new(n: I, q: I) -> Result<Self> {
        if q.is_positive() && q < n && n.gcd(&q).is_one() {
            Ok(Fraction { n, q })
        } else {
            Err(Error::InvalidFraction {
                n: n.to_string(),
                q: q.to_string(),
            })
        }
    }

    pub fn n(&self) -> &I {
        &self.n
    }

    pub fn q(&self) -> &I {
        &self.q
    }

    /// `q'` with `0 < q' < n` and `q q' = 1 (mod n)`.
    pub fn inverse(&self) -> I {
        let g = self.q.extended_gcd(&self.n);
        debug_assert!(g.gcd.is_one());
        g.x.mod_floor(&self.n)
    }

    /// `1/n(1,q')`, the same singularity with its chain reversed.
    pub fn reversed(&self) -> Self {
        Fraction {
            n: self.n.clone(),
            q: self.inverse(),
        }
    }

    /// `n/(n-q)`.
    pub fn dual(&self) -> Self {
        Fraction {
            n: self.n.clone(),
            q: self.n.clone() - self.q.clone(),
        }
    }

    /// Hirzebruch-Jung expansion `n/q = [b_1, ..., b_r]`, all `b_j >= 2`.
    pub fn expand(&self) -> Chain {
        let mut out = Vec::new();
        let (mut num, mut den) = (self.n.clone(), self.q.clone());
        while !den.is_zero() {
            let b = num.div_ceil(&den);
            let rem = b.clone() * den.clone() - num;
            out.push(b.to_i64().expect("chain entry fits in i64"));
            num = den;
            den = rem;
        }
        Chain::new(out)
    }

    /// Expansion of the dual fraction `n/(n-q)`.
    pub fn dual_chain(&self) -> Chain {
        self.dual().expand()
    }

    pub fn map<J: Scalar>(&self, f: impl Fn(&I) -> J) -> Result<Fraction<J>> {
        Fraction::new(f(&self.n), f(&self.q))
    }
}

impl<I: Scalar> fmt::Display for Fraction<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.n, self.q)
    }
}

impl<I: Scalar + FromStr> FromStr for Fraction<I> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let err = || Error::Parse {
            what: "fraction",
            input: s.to_string(),
        };
        let (n, q) = s.trim().split_once('/').ok_or_else(err)?;
        let n = n.trim().parse::<I>().map_err(|_| err())?;
        let q = q.trim().parse::<I>().map_err(|_| err())?;
        Fraction::new(n, q)
    }
}

impl<I: Scalar> Serialize for Fraction<I> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
