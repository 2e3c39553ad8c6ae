use num_rational::Ratio;
use num_traits::Signed;
use serde::{Serialize, Serializer};

use super::{end_term, VolumeLedger};
use crate::render::{decimal, RatioStr};
use crate::{Chain, Error, Result, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Holds,
    Fails,
    NotEvaluated,
}

/// `lhs <= rhs`, with `slack = rhs - lhs`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundCheck<I: Scalar> {
    pub inequality: &'static str,
    pub lhs: Option<Ratio<I>>,
    pub rhs: Option<Ratio<I>>,
    pub slack: Option<Ratio<I>>,
    pub verdict: Verdict,
}

impl<I: Scalar> BoundCheck<I> {
    fn compare(inequality: &'static str, lhs: Ratio<I>, rhs: Ratio<I>) -> Self {
        let slack = rhs.clone() - lhs.clone();
        let verdict = if slack.is_negative() {
            Verdict::Fails
        } else {
            Verdict::Holds
        };
        BoundCheck {
            inequality,
            lhs: Some(lhs),
            rhs: Some(rhs),
            slack: Some(slack),
            verdict,
        }
    }

    fn skipped(inequality: &'static str, lhs: Option<Ratio<I>>) -> Self {
        BoundCheck {
            inequality,
            lhs,
            rhs: None,
            slack: None,
            verdict: Verdict::NotEvaluated,
        }
    }

    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }
}

impl<I: Scalar> Serialize for BoundCheck<I> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut st = s.serialize_map(None)?;
        st.serialize_entry("inequality", self.inequality)?;
        for (name, v) in [("lhs", &self.lhs), ("rhs", &self.rhs), ("slack", &self.slack)] {
            st.serialize_entry(name, &v.as_ref().map(RatioStr))?;
            st.serialize_entry(&format!("{name}_decimal"), &v.as_ref().map(decimal))?;
        }
        st.serialize_entry("verdict", &self.verdict)?;
        st.end()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "I: Scalar")]
pub struct BoundReport<I: Scalar> {
    pub delta: i64,
    pub checks: Vec<BoundCheck<I>>,
}

impl<I: Scalar> BoundReport<I> {
    pub fn get(&self, inequality: &str) -> Option<&BoundCheck<I>> {
        self.checks.iter().find(|c| c.inequality == inequality)
    }

    /// No evaluated check fails.
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.verdict != Verdict::Fails)
    }
}

/// Checks, in order: `sum` (the weight-sum bound), `length` (the bound on `r`),
/// `length-chi` (the intermediate bound through `chi`) and `noether`
/// (`chi <= K_W^2 + 3`). The last two need `chi` in the ledger.
pub fn check_main_bounds<I: Scalar>(ledger: &VolumeLedger<I>, delta: i64) -> Result<BoundReport<I>> {
    let lambda = ledger
        .lambda
        .clone()
        .ok_or(Error::IncompleteLedger("lambda"))?;
    let int = |v: I| Ratio::from_integer(v);
    let two = I::from_entry(2);
    let delta_r = int(I::from_entry(delta));
    let r = int(I::from_usize(ledger.chain.len()).expect("length fits"));
    let sum = int(ledger.weight_sum());
    let ks2 = int(ledger.ks2.clone());
    let kw2 = ledger.kw2.clone();
    let t = end_term(&ledger.fraction);

    let rhs1 = int(two.clone()) * (kw2.clone() - ks2.clone())
        + int(two.clone()) * ledger.correction.clone()
        + delta_r.clone()
        - lambda.clone();
    let mut checks = vec![BoundCheck::compare("sum", sum.clone(), rhs1)];

    let rhs2 = int(I::from_entry(13)) * kw2.clone() - int(two) * ks2
        + int(I::from_entry(38))
        - t
        + delta_r
        - lambda;
    checks.push(BoundCheck::compare("length", r.clone(), rhs2));

    match ledger.chi.clone() {
        Some(chi) => {
            let n = ledger.fraction.n().clone();
            let a_term = ledger.correction.clone() - sum;
            let rhs3 = int(I::from_entry(12) * chi.clone())
                - Ratio::new(I::from_entry(4), I::from_entry(3)) * kw2.clone()
                - a_term
                - (int(I::one()) - Ratio::new(I::one(), n));
            checks.push(BoundCheck::compare("length-chi", r, rhs3));
            checks.push(BoundCheck::compare(
                "noether",
                int(chi),
                kw2 + int(I::from_entry(3)),
            ));
        }
        None => {
            checks.push(BoundCheck::skipped("length-chi", Some(r)));
            checks.push(BoundCheck::skipped("noether", None));
        }
    }
    Ok(BoundReport { delta, checks })
}

/// `2 delta <= sum (a_j - 2) - 2`.
pub fn check_gen_t_delta_bound(chain: &Chain, delta: i64) -> Result<BoundCheck<i64>> {
    chain.require_strict()?;
    let lhs = Ratio::from_integer(2 * delta);
    let rhs = Ratio::from_integer(chain.weight_sum() - 2);
    Ok(BoundCheck::compare("gen-t-delta", lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::k2_ledger;

    fn ledger(c: &[i64], ks2: i64, m: i64) -> VolumeLedger<i64> {
        k2_ledger(&Chain::new(c.to_vec()), ks2, m)
            .unwrap()
            .with_lambda(Ratio::from_integer(0))
    }

    #[test]
    fn sum_bound_examples() {
        let rep = check_main_bounds(&ledger(&[2, 5], 0, 1), 1).unwrap();
        let s = rep.get("sum").unwrap();
        assert_eq!(s.lhs, Some(Ratio::from_integer(3)));
        assert_eq!(s.rhs, Some(Ratio::from_integer(5)));
        assert!(s.holds());

        let rep = check_main_bounds(&ledger(&[4], 0, 0), 0).unwrap();
        assert_eq!(rep.get("sum").unwrap().slack, Some(Ratio::from_integer(2)));

        let rep = check_main_bounds(&ledger(&[2, 2, 2], 1, 0), 0).unwrap();
        let s = rep.get("sum").unwrap();
        assert_eq!(s.slack, Some(Ratio::from_integer(0)));
        assert!(s.holds());
        assert_eq!(rep.get("noether").unwrap().verdict, Verdict::NotEvaluated);
    }

    #[test]
    fn needs_lambda() {
        let l = k2_ledger(&Chain::from([4]), 0i64, 0).unwrap();
        assert_eq!(check_main_bounds(&l, 0), Err(Error::IncompleteLedger("lambda")));
    }

    #[test]
    fn chi_checks() {
        let l = ledger(&[4], 0, 0).with_chi(1);
        let rep = check_main_bounds(&l, 0).unwrap();
        // 12 - 4/3 - (-2 + 1) - 3/4
        assert_eq!(rep.get("length-chi").unwrap().rhs, Some(Ratio::new(131, 12)));
        assert!(rep.get("noether").unwrap().holds());
        let rep = check_main_bounds(&ledger(&[4], 0, 0).with_chi(5), 0).unwrap();
        assert_eq!(rep.get("noether").unwrap().verdict, Verdict::Fails);
        assert!(!rep.all_hold());
    }

    #[test]
    fn gen_t_delta_examples() {
        let c = Chain::from([2, 2, 6]);
        assert!(!check_gen_t_delta_bound(&c, 2).unwrap().holds());
        assert!(check_gen_t_delta_bound(&c, 1).unwrap().holds());
        assert_eq!(
            check_gen_t_delta_bound(&Chain::from([4]), 0).unwrap().slack,
            Some(Ratio::from_integer(0))
        );
    }

    #[test]
    fn report_serializes_rationals_as_strings() {
        let rep = check_main_bounds(&ledger(&[2, 5], 0, 1), 1).unwrap();
        let v = serde_json::to_value(&rep).unwrap();
        assert_eq!(v["checks"][0]["inequality"], "sum");
        assert_eq!(v["checks"][0]["lhs"], "3/1");
        assert_eq!(v["checks"][0]["slack_decimal"], "2.000000000000");
        assert_eq!(v["checks"][0]["verdict"], "holds");
    }
}
