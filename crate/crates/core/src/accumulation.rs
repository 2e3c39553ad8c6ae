//! Families of chains whose volumes accumulate, and their limits.

use std::fmt::Write as _;

use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};

use crate::geometry::{bridge_degree, end_term, k2_step_value, Discrepancies};
use crate::render::{decimal, ratio_str, RatioStr};
use crate::{Chain, Error, Fraction, Result, Scalar};

/// `[b_1 + 1, .., b_s, 2] = N/Q` and `[2, b_s, .., b_1 + 1] = N/Q'`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(bound = "I: Scalar")]
pub struct FormationStep<I> {
    #[serde(rename = "N", serialize_with = "as_string")]
    pub n_big: I,
    #[serde(rename = "Q", serialize_with = "as_string")]
    pub q_big: I,
    #[serde(rename = "Qp", serialize_with = "as_string")]
    pub qp_big: I,
    #[serde(serialize_with = "as_string")]
    pub m: I,
}

fn as_string<I: Scalar, S: Serializer>(v: &I, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

impl<I: Scalar> FormationStep<I> {
    pub fn fraction(&self) -> Fraction<I> {
        Fraction::new(self.n_big.clone(), self.q_big.clone()).expect("formation output is valid")
    }
}

/// `m = (q q' - 1)/n`, `N = 2q - m + 2n - q'`, `Q = 2q - m`, `Q' = q + n`.
pub fn formation_rule<I: Scalar>(f: &Fraction<I>) -> Result<FormationStep<I>> {
    let (n, q) = (f.n().clone(), f.q().clone());
    let two = I::from_entry(2);
    if n <= two {
        return Err(Error::IndexTooSmall(n.to_string()));
    }
    let qp = f.inverse();
    let m = (q.clone() * qp.clone() - I::one()) / n.clone();
    let q_big = two.clone() * q.clone() - m.clone();
    let step = FormationStep {
        n_big: q_big.clone() + two * n.clone() - qp,
        q_big,
        qp_big: q + n,
        m,
    };
    debug_assert!({
        let big = step.fraction();
        big.inverse() == step.qp_big
    });
    Ok(step)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FamilyKind {
    Example210 { n0: i64 },
    Blowup { seed: Chain },
    Formation { seed: Chain },
}

/// Ampleness data recorded for each blow-up step.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "I: Scalar")]
pub struct StepWitness<I: Scalar> {
    #[serde(serialize_with = "ratio_field")]
    pub bridge_degree: Ratio<I>,
    pub kw2_positive: bool,
    /// `a_j > a'_j` at every position of the previous chain.
    pub discrepancies_drop: bool,
}

fn ratio_field<I: Scalar, S: Serializer>(r: &Ratio<I>, s: S) -> std::result::Result<S::Ok, S::Error> {
    RatioStr(r).serialize(s)
}

#[derive(Clone, Debug, PartialEq)]
pub struct AccumTerm<I: Scalar> {
    pub k: usize,
    pub chain: Chain,
    pub fraction: Fraction<I>,
    pub m: I,
    pub kw2: Ratio<I>,
    pub witness: Option<StepWitness<I>>,
}

impl<I: Scalar> AccumTerm<I> {
    /// `(2 + q + q')/n`.
    pub fn end_term(&self) -> Ratio<I> {
        end_term(&self.fraction)
    }
}

impl<I: Scalar> Serialize for AccumTerm<I> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut st = s.serialize_map(None)?;
        st.serialize_entry("k", &self.k)?;
        st.serialize_entry("chain", &self.chain)?;
        st.serialize_entry("fraction", &self.fraction)?;
        st.serialize_entry("m", &self.m.to_string())?;
        st.serialize_entry("kw2", &RatioStr(&self.kw2))?;
        st.serialize_entry("kw2_decimal", &decimal(&self.kw2))?;
        if let Some(w) = &self.witness {
            st.serialize_entry("witness", w)?;
        }
        st.end()
    }
}

/// Terms `k = 0..=kmax` with `m(k) = m0 + k` and fixed `K_S^2`.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "I: Scalar")]
pub struct AccumSequence<I: Scalar> {
    pub family: FamilyKind,
    #[serde(serialize_with = "as_string")]
    pub ks2: I,
    #[serde(serialize_with = "as_string")]
    pub m0: I,
    pub terms: Vec<AccumTerm<I>>,
}

fn ledger_k2<I: Scalar>(chain: &Chain, f: &Fraction<I>, ks2: &I, m: &I) -> Ratio<I> {
    let sum = I::from_entry(chain.weight_sum());
    Ratio::from_integer(ks2.clone() + sum - m.clone() - I::from_entry(2)) + end_term(f)
}

impl<I: Scalar> AccumSequence<I> {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn kw2_values(&self) -> Vec<Ratio<I>> {
        self.terms.iter().map(|t| t.kw2.clone()).collect()
    }

    /// Recomputes every `K^2` from the chain, `K_S^2` and `m(k)`.
    pub fn recomputes_exactly(&self) -> bool {
        self.terms.iter().all(|t| {
            t.chain.to_fraction::<I>().ok().as_ref() == Some(&t.fraction)
                && t.kw2 == ledger_k2(&t.chain, &t.fraction, &self.ks2, &t.m)
        })
    }

    /// The same chains with `m(k) = m0 + k` for another `m0`.
    pub fn with_m0(&self, m0: I) -> Self {
        let mut out = self.clone();
        let k0 = self.terms.first().map_or(0, |t| t.k);
        for t in &mut out.terms {
            t.m = m0.clone() + I::from_usize(t.k - k0).expect("index fits");
            t.kw2 = ledger_k2(&t.chain, &t.fraction, &self.ks2, &t.m);
        }
        out.m0 = m0;
        out
    }

    /// Closed-form limit of `K^2`, when the family has one.
    pub fn target(&self) -> Option<Ratio<I>> {
        match self.family {
            FamilyKind::Example210 { n0 } => {
                let n0 = I::from_entry(n0);
                let shift = Ratio::from_integer(n0.clone() - self.m0.clone() + self.ks2.clone());
                Some(shift + example210_end_limit(&n0))
            }
            _ => None,
        }
    }

    /// Tab-separated `k  chain  n/q  K^2  K^2_decimal`.
    pub fn to_table(&self) -> String {
        let mut s = String::from("k\tchain\tn/q\tK^2\tK^2_decimal\n");
        for t in &self.terms {
            let _ = writeln!(
                s,
                "{}\t{}\t{}\t{}\t{}",
                t.k,
                t.chain,
                t.fraction,
                ratio_str(&t.kw2),
                decimal(&t.kw2)
            );
        }
        s
    }
}

/// Limit of `(2 + q_k + q'_k)/n_k` along the family: `(5 n0 - 1)/(4 n0 - 1)`.
pub fn example210_end_limit<I: Scalar>(n0: &I) -> Ratio<I> {
    let (four, five) = (I::from_entry(4), I::from_entry(5));
    Ratio::new(five * n0.clone() - I::one(), four * n0.clone() - I::one())
}

/// Chains `[2 x k, 4 + k, n0, 4]`, `K_S^2 = 0`, `m(k) = k + 3`.
pub fn example210_family<I: Scalar>(n0: i64, kmax: usize) -> Result<AccumSequence<I>> {
    if n0 < 3 {
        return Err(Error::InvalidParameter(format!("n0 = {n0} must be at least 3")));
    }
    let ks2 = I::zero();
    let m0 = I::from_entry(3);
    let mut terms = Vec::with_capacity(kmax + 1);
    for k in 0..=kmax {
        let mut v = vec![2; k];
        v.extend([4 + k as i64, n0, 4]);
        let chain = Chain::new(v);
        let fraction = chain.to_fraction::<I>()?;
        let m = m0.clone() + I::from_usize(k).expect("index fits");
        let kw2 = ledger_k2(&chain, &fraction, &ks2, &m);
        terms.push(AccumTerm {
            k,
            chain,
            fraction,
            m,
            kw2,
            witness: None,
        });
    }
    Ok(AccumSequence {
        family: FamilyKind::Example210 { n0 },
        ks2,
        m0,
        terms,
    })
}

fn formation_terms<I: Scalar>(
    seed: &Fraction<I>,
    kmax: usize,
    ks2: &I,
    m0: &I,
    witness: bool,
) -> Result<Vec<AccumTerm<I>>> {
    let mut f = seed.clone();
    let mut chain = f.expand();
    let mut kw2 = ledger_k2(&chain, &f, ks2, m0);
    let mut terms = vec![AccumTerm {
        k: 0,
        chain: chain.clone(),
        fraction: f.clone(),
        m: m0.clone(),
        kw2: kw2.clone(),
        witness: None,
    }];
    let mut disc = if witness {
        Some(Discrepancies::<Ratio<I>>::solve(&chain)?)
    } else {
        None
    };
    for k in 1..=kmax {
        let step = formation_rule(&f)?;
        kw2 = kw2 + k2_step_value(&f)?;
        f = step.fraction();
        let mut v = chain.into_entries();
        v[0] += 1;
        v.push(2);
        chain = Chain::new(v);
        let w = match disc.take() {
            Some(prev) => {
                let next = Discrepancies::<Ratio<I>>::solve(&chain)?;
                let drop = prev.a().iter().zip(next.a()).all(|(a, b)| a > b);
                let w = StepWitness {
                    bridge_degree: bridge_degree(&f),
                    kw2_positive: kw2.is_positive(),
                    discrepancies_drop: drop,
                };
                disc = Some(next);
                Some(w)
            }
            None => None,
        };
        terms.push(AccumTerm {
            k,
            chain: chain.clone(),
            fraction: f.clone(),
            m: m0.clone() + I::from_usize(k).expect("index fits"),
            kw2: kw2.clone(),
            witness: w,
        });
    }
    Ok(terms)
}

/// Repeated blow-ups on the left end of `seed`: term `k` is
/// `[b_1 + k, b_2, .., b_r, 2 x k]`, each step adding `k2_step_value`.
pub fn blowup_family<I: Scalar>(seed: &Chain, kmax: usize, ks2: I, m0: I) -> Result<AccumSequence<I>> {
    let f = seed.to_fraction::<I>()?;
    let degree = bridge_degree(&f);
    if !degree.is_positive() {
        return Err(Error::NotAmple {
            seed: seed.to_string(),
            degree: ratio_str(&degree),
        });
    }
    let terms = formation_terms(&f, kmax, &ks2, &m0, true)?;
    Ok(AccumSequence {
        family: FamilyKind::Blowup { seed: seed.clone() },
        ks2,
        m0,
        terms,
    })
}

/// Iterates the formation rule from `seed` with no ampleness gate.
pub fn formation_family<I: Scalar>(
    seed: &Fraction<I>,
    kmax: usize,
    ks2: I,
    m0: I,
) -> Result<AccumSequence<I>> {
    let terms = formation_terms(seed, kmax, &ks2, &m0, false)?;
    Ok(AccumSequence {
        family: FamilyKind::Formation { seed: seed.expand() },
        ks2,
        m0,
        terms,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Monotonicity {
    StrictlyIncreasing,
    StrictlyDecreasing,
    Constant,
    NonMonotone,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LimitReport<I: Scalar> {
    pub monotonicity: Monotonicity,
    pub last: Ratio<I>,
    pub differences: Vec<Ratio<I>>,
    pub tolerance: Ratio<I>,
    pub converged: bool,
    pub target: Option<Ratio<I>>,
    pub gap: Option<Ratio<I>>,
}

impl<I: Scalar> Serialize for LimitReport<I> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut st = s.serialize_map(None)?;
        st.serialize_entry("monotonicity", &self.monotonicity)?;
        st.serialize_entry("last", &RatioStr(&self.last))?;
        st.serialize_entry("last_decimal", &decimal(&self.last))?;
        let tail = self.differences.len().saturating_sub(3);
        let diffs: Vec<String> = self.differences[tail..].iter().map(ratio_str).collect();
        st.serialize_entry("last_differences", &diffs)?;
        st.serialize_entry("tolerance", &RatioStr(&self.tolerance))?;
        st.serialize_entry("converged", &self.converged)?;
        st.serialize_entry("target", &self.target.as_ref().map(RatioStr))?;
        st.serialize_entry("target_decimal", &self.target.as_ref().map(decimal))?;
        st.serialize_entry("gap", &self.gap.as_ref().map(RatioStr))?;
        st.serialize_entry("gap_decimal", &self.gap.as_ref().map(decimal))?;
        st.end()
    }
}

/// Cauchy check on a list of exact values: converged when each of the last
/// three differences is below `tol` in absolute value.
pub fn limit_of_values<I: Scalar>(
    values: &[Ratio<I>],
    tol: &Ratio<I>,
    target: Option<Ratio<I>>,
) -> Result<LimitReport<I>> {
    if values.len() < 2 {
        return Err(Error::TooFewTerms(values.len()));
    }
    let differences: Vec<Ratio<I>> = values
        .windows(2)
        .map(|w| w[1].clone() - w[0].clone())
        .collect();
    let monotonicity = if differences.iter().all(|d| d.is_positive()) {
        Monotonicity::StrictlyIncreasing
    } else if differences.iter().all(|d| d.is_negative()) {
        Monotonicity::StrictlyDecreasing
    } else if differences.iter().all(|d| d.is_zero()) {
        Monotonicity::Constant
    } else {
        Monotonicity::NonMonotone
    };
    let tail = differences.len().saturating_sub(3);
    let converged = differences[tail..].iter().all(|d| d.abs() < *tol);
    let last = values[values.len() - 1].clone();
    let gap = target.as_ref().map(|t| (t.clone() - last.clone()).abs());
    Ok(LimitReport {
        monotonicity,
        last,
        differences,
        tolerance: tol.clone(),
        converged,
        target,
        gap,
    })
}

pub fn limit_of<I: Scalar>(seq: &AccumSequence<I>, tol: &Ratio<I>) -> Result<LimitReport<I>> {
    limit_of_values(&seq.kw2_values(), tol, seq.target())
}

/// Data for one surface in a family tested for the property (*).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StarRecord {
    pub ks2: i64,
    pub has_bridge: bool,
    pub u: usize,
    pub reduced_chain: Chain,
}

/// Same `K_S^2`, every record bridged, same `u`, pairwise distinct chains.
pub fn property_star(records: &[StarRecord]) -> bool {
    let Some(first) = records.first() else {
        return false;
    };
    let mut seen = std::collections::HashSet::new();
    records.iter().all(|r| {
        r.ks2 == first.ks2 && r.has_bridge && r.u == first.u && seen.insert(&r.reduced_chain)
    })
}
