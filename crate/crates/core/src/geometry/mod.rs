//! Discrepancies, canonical-class ledgers, the δ table and bound checks.

mod bounds;
mod discrepancy;

pub use bounds::{check_gen_t_delta_bound, check_main_bounds, BoundCheck, BoundReport, Verdict};
pub use discrepancy::{discrepancies, Discrepancies};

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Serialize, Serializer};

use crate::accumulation::formation_rule;
use crate::render::RatioStr;
use crate::{Chain, Error, Fraction, Result, Scalar};

/// `(2(n-1) - q - q') / n`.
pub fn correction_term<I: Scalar>(f: &Fraction<I>) -> Ratio<I> {
    let two = I::from_entry(2);
    let n = f.n().clone();
    Ratio::new(two * (n.clone() - I::one()) - f.q().clone() - f.inverse(), n)
}

/// `(2 + q + q') / n`, so that the correction term is `2 - t`.
pub fn end_term<I: Scalar>(f: &Fraction<I>) -> Ratio<I> {
    Ratio::new(
        I::from_entry(2) + f.q().clone() + f.inverse(),
        f.n().clone(),
    )
}

/// `n (n - (2 + q + q')) / ((n + q)(2n - q') + 1)`.
pub fn bridge_degree<I: Scalar>(f: &Fraction<I>) -> Ratio<I> {
    let (n, q, qp) = (f.n().clone(), f.q().clone(), f.inverse());
    let two = I::from_entry(2);
    let num = n.clone() * (n.clone() - (two.clone() + q.clone() + qp.clone()));
    let den = (n.clone() + q) * (two * n - qp) + I::one();
    Ratio::new(num, den)
}

/// Change of `K^2` across one formation step.
pub fn k2_step_value<I: Scalar>(f: &Fraction<I>) -> Result<Ratio<I>> {
    let step = formation_rule(f)?;
    let two = I::from_entry(2);
    let next = Ratio::new(
        two + step.q_big.clone() + step.qp_big.clone(),
        step.n_big.clone(),
    );
    Ok(next - end_term(f))
}

/// Canonical-class bookkeeping for one chain on a surface.
#[derive(Clone, Debug, PartialEq)]
pub struct VolumeLedger<I: Scalar> {
    pub chain: Chain,
    pub fraction: Fraction<I>,
    pub kw2: Ratio<I>,
    pub ks2: I,
    pub kx2: Ratio<I>,
    pub m: I,
    pub lambda: Option<Ratio<I>>,
    pub correction: Ratio<I>,
    pub chi: Option<I>,
}

/// `K_W^2 = K_S^2 + sum (b - 2) - m - correction`, `K_X^2 = K_S^2 - m`.
pub fn k2_ledger<I: Scalar>(chain: &Chain, ks2: I, m: I) -> Result<VolumeLedger<I>> {
    let fraction = chain.to_fraction::<I>()?;
    if m.is_negative() {
        return Err(Error::InvalidParameter(format!("m = {m} must be nonnegative")));
    }
    let correction = correction_term(&fraction);
    let sum = I::from_entry(chain.weight_sum());
    let kx2 = Ratio::from_integer(ks2.clone() - m.clone());
    let kw2 = Ratio::from_integer(ks2.clone() + sum - m.clone()) - correction.clone();
    Ok(VolumeLedger {
        chain: chain.clone(),
        fraction,
        kw2,
        ks2,
        kx2,
        m,
        lambda: None,
        correction,
        chi: None,
    })
}

impl<I: Scalar> VolumeLedger<I> {
    pub fn with_lambda(mut self, lambda: Ratio<I>) -> Self {
        self.lambda = Some(lambda);
        self
    }

    pub fn with_chi(mut self, chi: I) -> Self {
        self.chi = Some(chi);
        self
    }

    pub fn weight_sum(&self) -> I {
        I::from_entry(self.chain.weight_sum())
    }

    /// `K_X^2 - K_W^2 = sum (2 - b) + correction` and the blow-down ledger.
    pub fn is_consistent(&self) -> bool {
        let sum = Ratio::from_integer(self.weight_sum());
        let m = Ratio::from_integer(self.m.clone());
        let ks2 = Ratio::from_integer(self.ks2.clone());
        self.kx2.clone() - self.kw2.clone() == self.correction.clone() - sum.clone()
            && self.kw2.clone() - ks2.clone() == sum - m.clone() - self.correction.clone()
            && self.kx2 == ks2 - m
            && self.correction == correction_term(&self.fraction)
    }
}

impl<I: Scalar> Serialize for VolumeLedger<I> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut st = s.serialize_map(None)?;
        st.serialize_entry("chain", &self.chain)?;
        st.serialize_entry("fraction", &self.fraction)?;
        st.serialize_entry("kw2", &RatioStr(&self.kw2))?;
        st.serialize_entry("kw2_decimal", &crate::render::decimal(&self.kw2))?;
        st.serialize_entry("ks2", &self.ks2.to_string())?;
        st.serialize_entry("kx2", &RatioStr(&self.kx2))?;
        st.serialize_entry("m", &self.m.to_string())?;
        st.serialize_entry("lambda", &self.lambda.as_ref().map(RatioStr))?;
        st.serialize_entry("correction", &RatioStr(&self.correction))?;
        st.serialize_entry("correction_decimal", &crate::render::decimal(&self.correction))?;
        st.serialize_entry("chi", &self.chi.as_ref().map(|c| c.to_string()))?;
        st.end()
    }
}

/// The case table for δ, with exactly the parameters each case uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DeltaCase {
    A,
    B1 { l: u64 },
    B2,
    C1 { k: u64 },
    C2 { k: u64, l: u64 },
    D1 { l: u64, k: u64 },
    D2 { l: u64 },
    D3,
}

impl DeltaCase {
    pub const LABELS: [&'static str; 8] = ["A", "B1", "B2", "C1", "C2", "D1", "D2", "D3"];

    pub fn label(&self) -> &'static str {
        match self {
            DeltaCase::A => "A",
            DeltaCase::B1 { .. } => "B1",
            DeltaCase::B2 => "B2",
            DeltaCase::C1 { .. } => "C1",
            DeltaCase::C2 { .. } => "C2",
            DeltaCase::D1 { .. } => "D1",
            DeltaCase::D2 { .. } => "D2",
            DeltaCase::D3 => "D3",
        }
    }

    /// Builds a case from its label, rejecting missing or superfluous `l`, `k`.
    pub fn from_label(label: &str, l: Option<u64>, k: Option<u64>) -> Result<Self> {
        let norm = label.trim().trim_start_matches('(').trim_end_matches(')');
        let norm = norm.replace('.', "").to_ascii_uppercase();
        let case: &'static str = Self::LABELS
            .iter()
            .find(|&&c| c == norm)
            .ok_or_else(|| Error::UnknownCase(label.to_string()))?;
        let (needs_l, needs_k) = match case {
            "A" | "B2" | "D3" => (false, false),
            "B1" | "D2" => (true, false),
            "C1" => (false, true),
            _ => (true, true),
        };
        let take = |v: Option<u64>, needed: bool, param: &'static str| match (v, needed) {
            (Some(x), true) => Ok(x),
            (None, true) => Err(Error::MissingParameter { case, param }),
            (Some(_), false) => Err(Error::UnexpectedParameter { case, param }),
            (None, false) => Ok(0),
        };
        let l = take(l, needs_l, "l")?;
        let k = take(k, needs_k, "k")?;
        Ok(match case {
            "A" => DeltaCase::A,
            "B1" => DeltaCase::B1 { l },
            "B2" => DeltaCase::B2,
            "C1" => DeltaCase::C1 { k },
            "C2" => DeltaCase::C2 { k, l },
            "D1" => DeltaCase::D1 { l, k },
            "D2" => DeltaCase::D2 { l },
            _ => DeltaCase::D3,
        })
    }

    pub fn delta(&self) -> u64 {
        delta_from_case(self)
    }
}

pub fn delta_from_case(d: &DeltaCase) -> u64 {
    match *d {
        DeltaCase::A => 0,
        DeltaCase::B1 { l } => l,
        DeltaCase::B2 => 1,
        DeltaCase::C1 { k } => k + 1,
        DeltaCase::C2 { k, l } => k + l,
        DeltaCase::D1 { l, k } => l + k,
        DeltaCase::D2 { l } => l + 1,
        DeltaCase::D3 => 2,
    }
}

impl fmt::Display for DeltaCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())?;
        match *self {
            DeltaCase::B1 { l } | DeltaCase::D2 { l } => write!(f, "(l={l})"),
            DeltaCase::C1 { k } => write!(f, "(k={k})"),
            DeltaCase::C2 { k, l } | DeltaCase::D1 { l, k } => write!(f, "(l={l},k={k})"),
            _ => Ok(()),
        }
    }
}

impl FromStr for DeltaCase {
    type Err = Error;

    /// `A`, `B1:l=3`, `C2:k=1,l=2`.
    fn from_str(s: &str) -> Result<Self> {
        let (label, params) = s.split_once(':').unwrap_or((s, ""));
        let (mut l, mut k) = (None, None);
        for kv in params.split(',').filter(|t| !t.trim().is_empty()) {
            let err = || Error::Parse {
                what: "delta case",
                input: s.to_string(),
            };
            let (key, val) = kv.split_once('=').ok_or_else(err)?;
            let val: u64 = val.trim().parse().map_err(|_| err())?;
            match key.trim() {
                "l" => l = Some(val),
                "k" => k = Some(val),
                _ => return Err(err()),
            }
        }
        DeltaCase::from_label(label, l, k)
    }
}
